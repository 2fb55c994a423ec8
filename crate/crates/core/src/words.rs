//! Normal forms in fundamental groups of graphs of finite groups.
//!
//! Words are loops in the fundamental groupoid: a leading vertex element, then
//! edge traversals each carrying an element of the vertex they arrive at.
//! Reduction rewrites every slot before a traversal into the minimal left
//! coset representative of that traversal's starting edge image, pushing the
//! quotient across the edge, and splices out the pinches this exposes. Two
//! words are equal in the fundamental group exactly when their reduced forms
//! are identical.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::models::{GogStep, GogWord, GraphOfGroups, ModelGroup};
use crate::perm::Perm;

pub const DEFAULT_SYLLABLE_CAP: usize = 4;

/// A reduced word. Structural equality is equality in the group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalForm(pub GogWord);

impl NormalForm {
    pub fn is_identity(&self) -> bool {
        self.0.steps.is_empty() && self.0.leading.is_identity()
    }

    pub fn syllable_count(&self) -> usize {
        self.0.steps.len()
    }
}

struct OrientedEdge {
    start_vertex: usize,
    end_vertex: usize,
    /// g ↦ min(g·A) on the start vertex group, A the starting edge image
    rep: HashMap<Perm, Perm>,
    /// transversal, sorted
    reps_sorted: Vec<Perm>,
    /// A → B across the edge
    theta: HashMap<Perm, Perm>,
}

/// Precomputed transversal and edge-crossing data for one graph of groups.
pub struct WordEngine {
    graph: GraphOfGroups,
    fwd: Vec<OrientedEdge>,
    bwd: Vec<OrientedEdge>,
}

fn oriented(
    graph: &GraphOfGroups,
    start_vertex: usize,
    end_vertex: usize,
    start_map: &crate::hom::GroupHom,
    end_map: &crate::hom::GroupHom,
) -> OrientedEdge {
    let start_group = &graph.vertices[start_vertex];
    let image: Vec<Perm> = start_map
        .domain()
        .elements()
        .iter()
        .map(|x| start_map.apply(x))
        .collect();
    let mut rep: HashMap<Perm, Perm> = HashMap::with_capacity(start_group.order() as usize);
    let mut reps_sorted = Vec::new();
    for g in start_group.elements() {
        if rep.contains_key(g) {
            continue;
        }
        reps_sorted.push(g.clone());
        for a in &image {
            rep.insert(g.compose(a), g.clone());
        }
    }
    let theta: HashMap<Perm, Perm> = start_map
        .domain()
        .elements()
        .iter()
        .map(|x| (start_map.apply(x), end_map.apply(x)))
        .collect();
    OrientedEdge {
        start_vertex,
        end_vertex,
        rep,
        reps_sorted,
        theta,
    }
}

impl WordEngine {
    pub fn new(graph: &GraphOfGroups) -> WordEngine {
        let fwd = graph
            .edges
            .iter()
            .map(|e| oriented(graph, e.iota_vertex, e.tau_vertex, &e.iota, &e.tau))
            .collect();
        let bwd = graph
            .edges
            .iter()
            .map(|e| oriented(graph, e.tau_vertex, e.iota_vertex, &e.tau, &e.iota))
            .collect();
        WordEngine {
            graph: graph.clone(),
            fwd,
            bwd,
        }
    }

    pub fn for_model(model: &ModelGroup) -> Result<WordEngine> {
        Ok(WordEngine::new(model.graph()?))
    }

    pub fn graph(&self) -> &GraphOfGroups {
        &self.graph
    }

    fn data(&self, step_edge: usize, forward: bool) -> &OrientedEdge {
        if forward {
            &self.fwd[step_edge]
        } else {
            &self.bwd[step_edge]
        }
    }

    pub fn validate(&self, w: &GogWord) -> Result<()> {
        if w.base >= self.graph.vertices.len() {
            return Err(Error::MalformedWord("base vertex out of range".into()));
        }
        if !self.graph.vertices[w.base].contains(&w.leading) {
            return Err(Error::MalformedWord(
                "leading element outside the base vertex group".into(),
            ));
        }
        let mut at = w.base;
        for (i, s) in w.steps.iter().enumerate() {
            if s.edge >= self.graph.edges.len() {
                return Err(Error::MalformedWord(format!("step {i}: edge out of range")));
            }
            let d = self.data(s.edge, s.forward);
            if d.start_vertex != at {
                return Err(Error::MalformedWord(format!(
                    "step {i}: traversal starts at vertex {} but the word is at {at}",
                    d.start_vertex
                )));
            }
            if !self.graph.vertices[d.end_vertex].contains(&s.elem) {
                return Err(Error::MalformedWord(format!(
                    "step {i}: element outside vertex group {}",
                    d.end_vertex
                )));
            }
            at = d.end_vertex;
        }
        Ok(())
    }

    /// Reduce to the canonical normal form.
    pub fn reduce(&self, w: &GogWord) -> Result<NormalForm> {
        self.validate(w)?;
        let mut word = w.clone();
        loop {
            // left-to-right: rewrite each pre-traversal slot into its coset
            // representative, pushing the remainder across the edge
            for i in 0..word.steps.len() {
                let d = self.data(word.steps[i].edge, word.steps[i].forward);
                let prev = if i == 0 {
                    word.leading.clone()
                } else {
                    word.steps[i - 1].elem.clone()
                };
                let r = d.rep[&prev].clone();
                let a = r.inverse().compose(&prev);
                let carried = d.theta[&a].clone();
                if i == 0 {
                    word.leading = r;
                } else {
                    word.steps[i - 1].elem = r;
                }
                word.steps[i].elem = carried.compose(&word.steps[i].elem);
            }
            // splice the first pinch, if any
            let pinch = (0..word.steps.len().saturating_sub(1)).find(|&i| {
                word.steps[i].edge == word.steps[i + 1].edge
                    && word.steps[i].forward != word.steps[i + 1].forward
                    && word.steps[i].elem.is_identity()
            });
            match pinch {
                None => return Ok(NormalForm(word)),
                Some(i) => {
                    let tail = word.steps[i + 1].elem.clone();
                    if i == 0 {
                        word.leading = word.leading.compose(&tail);
                    } else {
                        word.steps[i - 1].elem = word.steps[i - 1].elem.compose(&tail);
                    }
                    word.steps.drain(i..=i + 1);
                }
            }
        }
    }

    /// Is the word already in normal form (transversal slots + no pinch)?
    pub fn is_normal_form(&self, w: &GogWord) -> bool {
        if self.validate(w).is_err() {
            return false;
        }
        for i in 0..w.steps.len() {
            let d = self.data(w.steps[i].edge, w.steps[i].forward);
            let prev = if i == 0 { &w.leading } else { &w.steps[i - 1].elem };
            if d.rep[prev] != *prev {
                return false;
            }
        }
        (0..w.steps.len().saturating_sub(1)).all(|i| {
            !(w.steps[i].edge == w.steps[i + 1].edge
                && w.steps[i].forward != w.steps[i + 1].forward
                && w.steps[i].elem.is_identity())
        })
    }

    /// Product of two loops at the same base, reduced.
    pub fn multiply(&self, a: &GogWord, b: &GogWord) -> Result<NormalForm> {
        self.reduce(&a.concat(b, &self.graph)?)
    }

    /// Conjugate `u` (a loop) by `g`: g·u·g⁻¹, reduced.
    pub fn conjugate(&self, g: &GogWord, u: &GogWord) -> Result<NormalForm> {
        let gu = g.concat(u, &self.graph)?;
        self.reduce(&gu.concat(&g.inverse(&self.graph), &self.graph)?)
    }

    fn oriented_choices(&self, at: usize) -> Vec<(usize, bool)> {
        let mut out = Vec::new();
        for ei in 0..self.graph.edges.len() {
            if self.fwd[ei].start_vertex == at {
                out.push((ei, true));
            }
            if self.bwd[ei].start_vertex == at {
                out.push((ei, false));
            }
        }
        out
    }

    /// Closed oriented-edge paths of the exact length, in DFS order.
    fn closed_paths(&self, base: usize, len: usize) -> Vec<Vec<(usize, bool)>> {
        let mut out = Vec::new();
        let mut partial: Vec<(usize, bool)> = Vec::new();
        self.walk_paths(base, base, len, &mut partial, &mut out);
        out
    }

    fn walk_paths(
        &self,
        base: usize,
        at: usize,
        remaining: usize,
        partial: &mut Vec<(usize, bool)>,
        out: &mut Vec<Vec<(usize, bool)>>,
    ) {
        if remaining == 0 {
            if at == base {
                out.push(partial.clone());
            }
            return;
        }
        for (edge, forward) in self.oriented_choices(at) {
            partial.push((edge, forward));
            self.walk_paths(base, self.data(edge, forward).end_vertex, remaining - 1, partial, out);
            partial.pop();
        }
    }

    /// Every normal form based at `base` with at most `max_syllables` edge
    /// traversals, in length-lexicographic order, each exactly once.
    pub fn enumerate(
        &self,
        base: usize,
        max_syllables: usize,
        cap: usize,
    ) -> Result<Vec<NormalForm>> {
        if max_syllables > cap {
            return Err(Error::SyllableBoundExceeded {
                requested: max_syllables,
                cap,
            });
        }
        let mut out = Vec::new();
        for g in self.graph.vertices[base].elements() {
            out.push(NormalForm(GogWord::vertex_element(base, g.clone())));
        }
        for k in 1..=max_syllables {
            for path in self.closed_paths(base, k) {
                // slot i < k: transversal rep of path[i+1]'s start image with
                // the pinch constraint; slot k: free over the base group
                let mut slots: Vec<Perm> = Vec::with_capacity(k + 1);
                self.fill_slots(base, &path, 0, &mut slots, &mut out);
            }
        }
        Ok(out)
    }

    fn fill_slots(
        &self,
        base: usize,
        path: &[(usize, bool)],
        pos: usize,
        slots: &mut Vec<Perm>,
        out: &mut Vec<NormalForm>,
    ) {
        let k = path.len();
        if pos == k {
            for g in self.graph.vertices[base].elements() {
                let steps: Vec<GogStep> = path
                    .iter()
                    .enumerate()
                    .map(|(i, &(edge, forward))| GogStep {
                        edge,
                        forward,
                        elem: if i + 1 < k {
                            slots[i + 1].clone()
                        } else {
                            g.clone()
                        },
                    })
                    .collect();
                out.push(NormalForm(GogWord {
                    base,
                    leading: slots[0].clone(),
                    steps,
                }));
            }
            return;
        }
        let (edge, forward) = path[pos];
        let d = self.data(edge, forward);
        let backtrack = pos > 0 && {
            let (pe, pf) = path[pos - 1];
            pe == edge && pf != forward
        };
        for r in &d.reps_sorted {
            if backtrack && r.is_identity() {
                continue;
            }
            slots.push(r.clone());
            self.fill_slots(base, path, pos + 1, slots, out);
            slots.pop();
        }
    }
}
