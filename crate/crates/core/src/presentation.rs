//! Finite presentations: symbol tables, relator words, and complete
//! Cayley-graph presentations of finite permutation groups (one relator per
//! non-tree edge of the breadth-first spanning tree, which presents the group
//! exactly).

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::group::PermGroup;
use crate::perm::Perm;

/// A word over presentation symbols: `(symbol index, exponent)` pairs.
pub type Word = Vec<(u32, i32)>;

pub fn invert_word(w: &[(u32, i32)]) -> Word {
    w.iter().rev().map(|&(s, e)| (s, -e)).collect()
}

pub fn concat_words(parts: &[&[(u32, i32)]]) -> Word {
    let mut out: Word = Vec::new();
    for part in parts {
        for &(s, e) in *part {
            if let Some(last) = out.last_mut() {
                if last.0 == s {
                    last.1 += e;
                    if last.1 == 0 {
                        out.pop();
                    }
                    continue;
                }
            }
            if e != 0 {
                out.push((s, e));
            }
        }
    }
    out
}

/// A finite presentation with a marked copy of the Sylow group: each S
/// generator is recorded as a word in the presentation symbols.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    pub symbols: Vec<String>,
    pub relators: Vec<Word>,
    pub sylow_embedding: Vec<Word>,
}

impl Presentation {
    pub fn symbol_index(&self, name: &str) -> Option<u32> {
        self.symbols.iter().position(|s| s == name).map(|i| i as u32)
    }

    pub fn format_word(&self, word: &[(u32, i32)]) -> String {
        let mut out = String::new();
        for (i, &(s, e)) in word.iter().enumerate() {
            if i > 0 {
                out.push(' ');
            }
            if e == 1 {
                let _ = write!(out, "{}", self.symbols[s as usize]);
            } else {
                let _ = write!(out, "{}^{}", self.symbols[s as usize], e);
            }
        }
        if word.is_empty() {
            out.push_str("1");
        }
        out
    }

    pub fn parse_word(&self, text: &str) -> Result<Word> {
        let mut word: Word = Vec::new();
        for tok in text.split_whitespace() {
            if tok == "1" {
                continue;
            }
            let (name, exp) = match tok.split_once('^') {
                Some((n, e)) => {
                    let exp: i32 = e.parse().map_err(|_| {
                        Error::MalformedWord(format!("bad exponent in {tok:?}"))
                    })?;
                    (n, exp)
                }
                None => (tok, 1),
            };
            let idx = self
                .symbol_index(name)
                .ok_or_else(|| Error::MalformedWord(format!("unknown symbol {name:?}")))?;
            if exp != 0 {
                word.push((idx, exp));
            }
        }
        Ok(word)
    }

    /// Plain-text form: `gens:`, `rel:`, and `sylow:` lines.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "gens: {}", self.symbols.join(" "));
        for rel in &self.relators {
            let _ = writeln!(out, "rel: {}", self.format_word(rel));
        }
        for emb in &self.sylow_embedding {
            let _ = writeln!(out, "sylow: {}", self.format_word(emb));
        }
        out
    }

    pub fn from_text(text: &str, file: &str) -> Result<Presentation> {
        let mut symbols: Option<Vec<String>> = None;
        let mut relators = Vec::new();
        let mut sylow_embedding = Vec::new();
        let mut partial = Presentation {
            symbols: Vec::new(),
            relators: Vec::new(),
            sylow_embedding: Vec::new(),
        };
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let parse_err = |expected: &str| Error::Parse {
                file: file.to_string(),
                line: lineno + 1,
                expected: expected.to_string(),
            };
            if let Some(rest) = line.strip_prefix("gens:") {
                symbols = Some(rest.split_whitespace().map(|s| s.to_string()).collect());
                partial.symbols = symbols.clone().unwrap();
            } else if let Some(rest) = line.strip_prefix("rel:") {
                if symbols.is_none() {
                    return Err(parse_err("gens: line before rel:"));
                }
                relators.push(partial.parse_word(rest).map_err(|_| parse_err("relator word"))?);
            } else if let Some(rest) = line.strip_prefix("sylow:") {
                if symbols.is_none() {
                    return Err(parse_err("gens: line before sylow:"));
                }
                sylow_embedding
                    .push(partial.parse_word(rest).map_err(|_| parse_err("sylow word"))?);
            } else {
                return Err(parse_err("gens:, rel:, or sylow: line"));
            }
        }
        Ok(Presentation {
            symbols: symbols.ok_or_else(|| Error::Parse {
                file: file.to_string(),
                line: 0,
                expected: "a gens: line".to_string(),
            })?,
            relators,
            sylow_embedding,
        })
    }

    /// Evaluate a word under an assignment of the symbols to permutations.
    pub fn evaluate_word(&self, word: &[(u32, i32)], assignment: &[Perm], degree: usize) -> Perm {
        let mut acc = Perm::identity(degree);
        for &(s, e) in word {
            acc = acc.compose(&assignment[s as usize].pow(e as i64));
        }
        acc
    }
}

/// Relators presenting `group` on its own generator list: one relator
/// `w(x)·g·w(x·g)⁻¹` per non-tree edge of the breadth-first Cayley graph.
/// Words are over generator indices.
pub fn cayley_relators(group: &PermGroup) -> Vec<Word> {
    let mut relators: Vec<Word> = Vec::new();
    let gens = group.generators();
    for e in group.elements() {
        let we = group.word_for(e).expect("element of the group");
        for (gi, g) in gens.iter().enumerate() {
            let n = e.compose(g);
            let wn = group.word_for(&n).expect("closed under multiplication");
            // tree edge exactly when the BFS word of e·g is the word of e
            // extended by g
            if wn.len() == we.len() + 1 && wn[..we.len()] == we[..] && wn[we.len()] == gi {
                continue;
            }
            let mut word: Word = we.iter().map(|&i| (i as u32, 1)).collect();
            word.push((gi as u32, 1));
            for &i in wn.iter().rev() {
                word.push((i as u32, -1));
            }
            relators.push(concat_words(&[&word]));
        }
    }
    relators
}

/// Word (over the group's generator indices) for an element.
pub fn element_word(group: &PermGroup, elem: &Perm) -> Word {
    group
        .word_for(elem)
        .expect("element of the group")
        .into_iter()
        .map(|i| (i as u32, 1))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    #[test]
    fn cayley_relators_hold_in_the_group() {
        for g in [corpus::sym3(), corpus::dihedral8(), corpus::quaternion8()] {
            let rels = cayley_relators(&g);
            assert!(!rels.is_empty());
            let pres = Presentation {
                symbols: (0..g.generators().len()).map(|i| format!("g{i}")).collect(),
                relators: rels.clone(),
                sylow_embedding: Vec::new(),
            };
            for rel in &rels {
                let v = pres.evaluate_word(rel, g.generators(), g.degree());
                assert!(v.is_identity());
            }
        }
    }

    #[test]
    fn cayley_presentation_presents_the_group() {
        // coset enumeration stand-in: the presented group surjects onto G by
        // construction, and the relator count matches |G|·|gens| − (|G|−1),
        // which pins the Cayley-complex fundamental group
        let g = corpus::sym3();
        let rels = cayley_relators(&g);
        assert_eq!(
            rels.len() as u64,
            g.order() * g.generators().len() as u64 - (g.order() - 1)
        );
    }

    #[test]
    fn text_round_trip_is_identity() {
        let pres = Presentation {
            symbols: vec!["a".into(), "t1".into()],
            relators: vec![vec![(0, 3)], vec![(1, -1), (0, 1), (1, 1), (0, 1)]],
            sylow_embedding: vec![vec![(0, 1)]],
        };
        let text = pres.to_text();
        let back = Presentation::from_text(&text, "test").unwrap();
        assert_eq!(pres, back);
        assert_eq!(back.to_text(), text);
    }

    #[test]
    fn parse_errors_carry_location() {
        let err = Presentation::from_text("gens: a\nrel: b^2\n", "f.pres").unwrap_err();
        match err {
            Error::Parse { file, line, .. } => {
                assert_eq!(file, "f.pres");
                assert_eq!(line, 2);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn word_algebra() {
        let w = concat_words(&[&[(0, 2)], &[(0, -2), (1, 1)]]);
        assert_eq!(w, vec![(1, 1)]);
        assert_eq!(invert_word(&[(0, 1), (1, -2)]), vec![(1, 2), (0, -1)]);
    }
}
