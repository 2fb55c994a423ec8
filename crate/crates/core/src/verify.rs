//! Model verification: the Sylow criterion over the vertex groups, and the
//! two-sided bounded fusion check — every declared generator is realized by
//! its witness word, and every enumerated normal form up to the bound induces
//! only morphisms the fusion system already has.

use std::collections::{HashMap, HashSet};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fusion::{FusionSystem, MorKey};
use crate::group::p_part;
use crate::models::{GogWord, ModelGroup, ModelStructure};
use crate::perm::Perm;
use crate::words::WordEngine;

#[derive(Clone, Debug, Serialize)]
pub struct VertexSylowCheck {
    pub vertex: usize,
    pub vertex_order: u64,
    pub anchor_order: u64,
    pub p_part: u64,
    pub ok: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct SylowCheckReport {
    pub prime: u64,
    pub ok: bool,
    pub per_vertex: Vec<VertexSylowCheck>,
    pub notes: Vec<String>,
}

/// Is the marked S a Sylow p-subgroup of the model? Finite subgroups of the
/// fundamental group are conjugate into vertex groups, so S is Sylow exactly
/// when the S-side anchor of every vertex covers a Sylow p-subgroup of it.
pub fn sylow_check_model(m: &ModelGroup, p: u64) -> Result<SylowCheckReport> {
    match &m.structure {
        ModelStructure::Graph(graph) => {
            let mut per_vertex = Vec::new();
            let mut ok = true;
            for (v, group) in graph.vertices.iter().enumerate() {
                let anchor_order = m
                    .anchors
                    .get(v)
                    .and_then(|slots| slots.iter().find(|(q, _)| *q == p))
                    .map(|(_, sub)| sub.order())
                    .unwrap_or(1);
                let part = p_part(group.order(), p);
                let vertex_ok = anchor_order == part;
                ok &= vertex_ok;
                per_vertex.push(VertexSylowCheck {
                    vertex: v,
                    vertex_order: group.order(),
                    anchor_order,
                    p_part: part,
                    ok: vertex_ok,
                });
            }
            Ok(SylowCheckReport {
                prime: p,
                ok,
                per_vertex,
                notes: Vec::new(),
            })
        }
        ModelStructure::Direct(parts) => {
            let mut notes = Vec::new();
            let mut ok = true;
            let mut per_vertex = Vec::new();
            for (fi, part) in parts.iter().enumerate() {
                if part.markings.iter().any(|mk| mk.prime == p) {
                    let sub = sylow_check_model(part, p)?;
                    ok &= sub.ok;
                    notes.push(format!("factor {fi}: owns the prime, checked recursively"));
                    per_vertex.extend(sub.per_vertex);
                } else {
                    // the factor must be p-torsion-free: no vertex group may
                    // contain p-elements
                    let graph = part.graph()?;
                    let clean = graph.vertices.iter().all(|v| v.order() % p != 0);
                    ok &= clean;
                    notes.push(format!(
                        "factor {fi}: p-torsion-free check {}",
                        if clean { "passed" } else { "failed" }
                    ));
                }
            }
            Ok(SylowCheckReport {
                prime: p,
                ok,
                per_vertex,
                notes,
            })
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RealizedCheck {
    pub source_index: usize,
    pub ok: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct FusionViolation {
    pub word: String,
    pub subgroup_index: usize,
    pub images: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct FusionVerifyReport {
    pub prime: u64,
    pub bound: usize,
    pub realized: Vec<RealizedCheck>,
    pub violations: Vec<FusionViolation>,
    pub words_checked: usize,
    pub ok: bool,
    pub notes: Vec<String>,
}

fn describe_word(w: &GogWord) -> String {
    let mut out = format!("v{}:{}", w.base, w.leading);
    for s in &w.steps {
        out.push_str(&format!(
            " e{}{} {}",
            s.edge,
            if s.forward { "+" } else { "-" },
            s.elem
        ));
    }
    out
}

/// Two-sided bounded comparison of the model's fusion with `f` at `f.p()`.
pub fn bounded_fusion_verify(
    m: &ModelGroup,
    f: &FusionSystem,
    bound: usize,
    cap: usize,
) -> Result<FusionVerifyReport> {
    let p = f.p();
    if let ModelStructure::Direct(parts) = &m.structure {
        // conjugation in a direct product acts factor-wise, so the fusion on a
        // factor's Sylow group is decided entirely inside that factor
        for (fi, part) in parts.iter().enumerate() {
            if part.markings.iter().any(|mk| mk.prime == p) {
                let mut report = bounded_fusion_verify(part, f, bound, cap)?;
                report
                    .notes
                    .push(format!("delegated to direct factor {fi}"));
                return Ok(report);
            }
        }
        return Err(Error::SylowMismatch);
    }
    let marking = m.marking_for_prime(p)?;
    if !marking.s.same_element_set(f.s()) {
        return Err(Error::SylowMismatch);
    }
    let engine = WordEngine::for_model(m)?;
    let emb_word = |u: &Perm| -> GogWord {
        GogWord::vertex_element(marking.vertex, marking.embed.apply(u))
    };
    let emb_inverse: HashMap<Perm, Perm> = marking
        .s
        .elements()
        .iter()
        .map(|u| (marking.embed.apply(u), u.clone()))
        .collect();

    // (a) every declared generator is realized by its witness word
    let mut realized = Vec::new();
    for r in &m.realized_generators {
        if r.prime != p {
            continue;
        }
        let table = f.mor_table(&r.key);
        let source = f.subgroup(r.key.src);
        let mut ok = true;
        for u in source.generators() {
            let actual = engine.conjugate(&r.witness, &emb_word(u))?;
            let expected = engine.reduce(&emb_word(&table[u]))?;
            if actual != expected {
                ok = false;
                break;
            }
        }
        realized.push(RealizedCheck {
            source_index: r.key.src,
            ok,
        });
    }

    // (b) every bounded normal form induces only morphisms of f
    let hom_sets: Vec<HashSet<MorKey>> = (0..f.subgroups().len())
        .map(|idx| f.hom_to_s(idx).iter().map(|mm| mm.key.clone()).collect())
        .collect();
    let words = engine.enumerate(marking.vertex, bound, cap.max(bound))?;
    let mut violations = Vec::new();
    let s_elements = marking.s.elements();
    for nf in &words {
        let g = &nf.0;
        let mut conj: HashMap<&Perm, Option<Perm>> = HashMap::new();
        for u in s_elements {
            if u.is_identity() {
                continue;
            }
            let c = engine.conjugate(g, &emb_word(u))?;
            let mapped = if c.0.steps.is_empty() {
                emb_inverse.get(&c.0.leading).cloned()
            } else {
                None
            };
            conj.insert(u, mapped);
        }
        for idx in 0..f.subgroups().len() {
            let sub = f.subgroup(idx);
            let images: Option<Vec<Perm>> = sub
                .generators()
                .iter()
                .map(|u| conj[u].clone())
                .collect();
            let Some(images) = images else { continue };
            let key = MorKey { src: idx, images };
            if !hom_sets[idx].contains(&key) {
                violations.push(FusionViolation {
                    word: describe_word(g),
                    subgroup_index: idx,
                    images: key.images.iter().map(|x| x.to_string()).collect(),
                });
            }
        }
    }
    let ok = realized.iter().all(|r| r.ok) && violations.is_empty();
    Ok(FusionVerifyReport {
        prime: p,
        bound,
        realized,
        violations,
        words_checked: words.len(),
        ok,
        notes: Vec::new(),
    })
}
