//! Permutations of a finite point set `{0, …, degree-1}`, with cycle-notation
//! parsing and printing. All group computations in this crate run on these.

use std::fmt;

use crate::error::{Error, Result};

/// A permutation stored as its image table: `images[i]` is where point `i` goes.
///
/// The lexicographic order on image tables is the global element order used for
/// deterministic enumeration, coset representatives, and report output.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Perm {
    images: Box<[u16]>,
}

impl Perm {
    pub fn identity(degree: usize) -> Perm {
        Perm {
            images: (0..degree as u16).collect(),
        }
    }

    /// Build from an image table, checking it is a bijection.
    pub fn from_images(images: Vec<u16>) -> Result<Perm> {
        let degree = images.len();
        let mut seen = vec![false; degree];
        for &img in &images {
            if img as usize >= degree {
                return Err(Error::PointOutOfRange {
                    point: img as usize,
                    degree,
                });
            }
            if seen[img as usize] {
                return Err(Error::NotBijective);
            }
            seen[img as usize] = true;
        }
        Ok(Perm {
            images: images.into_boxed_slice(),
        })
    }

    /// Build from disjoint-or-not cycles; later cycles are applied first, as in
    /// the usual product-of-cycles notation.
    pub fn from_cycles(degree: usize, cycles: &[Vec<u16>]) -> Result<Perm> {
        let mut result = Perm::identity(degree);
        for cycle in cycles.iter().rev() {
            let mut single = Perm::identity(degree);
            let mut seen = vec![false; degree];
            for (i, &pt) in cycle.iter().enumerate() {
                if pt as usize >= degree {
                    return Err(Error::PointOutOfRange {
                        point: pt as usize,
                        degree,
                    });
                }
                if seen[pt as usize] {
                    return Err(Error::BadCycle(format!("point {pt} repeats in a cycle")));
                }
                seen[pt as usize] = true;
                single.images[pt as usize] = cycle[(i + 1) % cycle.len()];
            }
            result = single.compose(&result);
        }
        Ok(result)
    }

    /// Parse cycle notation such as `(0 1 2)(3 4)`; `()` is the identity.
    pub fn parse_cycles(degree: usize, s: &str) -> Result<Perm> {
        let s = s.trim();
        if s.is_empty() || s == "()" {
            return Ok(Perm::identity(degree));
        }
        let mut cycles: Vec<Vec<u16>> = Vec::new();
        let mut rest = s;
        while !rest.is_empty() {
            let open = rest
                .find('(')
                .ok_or_else(|| Error::BadCycle(format!("expected '(' in {rest:?}")))?;
            if !rest[..open].trim().is_empty() {
                return Err(Error::BadCycle(format!("stray text {:?}", &rest[..open])));
            }
            let close = rest[open..]
                .find(')')
                .ok_or_else(|| Error::BadCycle(format!("unclosed '(' in {rest:?}")))?
                + open;
            let inner = &rest[open + 1..close];
            let mut cycle = Vec::new();
            for tok in inner.split_whitespace() {
                let pt: u16 = tok
                    .parse()
                    .map_err(|_| Error::BadCycle(format!("bad point {tok:?}")))?;
                cycle.push(pt);
            }
            if !cycle.is_empty() {
                cycles.push(cycle);
            }
            rest = rest[close + 1..].trim_start();
        }
        Perm::from_cycles(degree, &cycles)
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[u16] {
        &self.images
    }

    #[inline]
    pub fn apply(&self, point: u16) -> u16 {
        self.images[point as usize]
    }

    /// `self ∘ other`: apply `other` first, then `self`.
    pub fn compose(&self, other: &Perm) -> Perm {
        debug_assert_eq!(self.degree(), other.degree());
        let images = other
            .images
            .iter()
            .map(|&i| self.images[i as usize])
            .collect::<Vec<_>>();
        Perm {
            images: images.into_boxed_slice(),
        }
    }

    pub fn inverse(&self) -> Perm {
        let mut images = vec![0u16; self.degree()];
        for (i, &img) in self.images.iter().enumerate() {
            images[img as usize] = i as u16;
        }
        Perm {
            images: images.into_boxed_slice(),
        }
    }

    /// `by ∘ self ∘ by⁻¹`, i.e. the conjugate c_by(self).
    pub fn conjugate_by(&self, by: &Perm) -> Perm {
        by.compose(self).compose(&by.inverse())
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &img)| i as u16 == img)
    }

    pub fn order(&self) -> u64 {
        let mut n = 1u64;
        let mut cur = self.clone();
        while !cur.is_identity() {
            cur = self.compose(&cur);
            n += 1;
        }
        n
    }

    pub fn pow(&self, n: i64) -> Perm {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        let mut result = Perm::identity(self.degree());
        for _ in 0..n.unsigned_abs() {
            result = base.compose(&result);
        }
        result
    }

    /// Nontrivial cycles, each rotated to start at its minimal point, sorted by
    /// that point. This is the canonical form used by `Display`.
    pub fn cycles(&self) -> Vec<Vec<u16>> {
        let mut seen = vec![false; self.degree()];
        let mut cycles = Vec::new();
        for start in 0..self.degree() as u16 {
            if seen[start as usize] || self.apply(start) == start {
                seen[start as usize] = true;
                continue;
            }
            let mut cycle = vec![start];
            seen[start as usize] = true;
            let mut pt = self.apply(start);
            while pt != start {
                seen[pt as usize] = true;
                cycle.push(pt);
                pt = self.apply(pt);
            }
            cycles.push(cycle);
        }
        cycles
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for cycle in cycles {
            write!(f, "(")?;
            for (i, pt) in cycle.iter().enumerate() {
                if i > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{pt}")?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}
