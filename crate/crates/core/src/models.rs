//! Group models realizing fusion systems: Robinson amalgams over the Alperin
//! datum, Leary–Stancu HNN quotients, the one-letter-per-morphism universal
//! model, multi-prime direct/free products, and amalgams of two models over a
//! shared Sylow group. Each model carries a finite presentation, a graph of
//! groups (or a direct-product structure), Sylow markings, and witness words
//! realizing the fusion generators.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::alperin::AlperinDatum;
use crate::error::{Error, Result};
use crate::fusion::{FusionSystem, MorKey};
use crate::group::{p_part, PermGroup};
use crate::hom::GroupHom;
use crate::perm::Perm;
use crate::presentation::{cayley_relators, concat_words, element_word, invert_word, Presentation, Word};

pub const DEFAULT_MORPHISM_CAP: usize = 10_000;

#[derive(Clone, Debug)]
pub struct GogEdge {
    pub group: PermGroup,
    pub iota_vertex: usize,
    pub tau_vertex: usize,
    pub iota: GroupHom,
    pub tau: GroupHom,
    pub in_tree: bool,
}

#[derive(Clone, Debug)]
pub struct GraphOfGroups {
    pub vertices: Vec<PermGroup>,
    pub edges: Vec<GogEdge>,
}

impl GraphOfGroups {
    pub fn single_vertex(group: PermGroup) -> GraphOfGroups {
        GraphOfGroups {
            vertices: vec![group],
            edges: Vec::new(),
        }
    }

    pub fn tree_edges(&self) -> Vec<usize> {
        (0..self.edges.len())
            .filter(|&i| self.edges[i].in_tree)
            .collect()
    }

    pub fn loop_count(&self) -> usize {
        self.edges.len() + 1 - self.vertices.len()
    }

    pub fn validate(&self) -> Result<()> {
        for (i, e) in self.edges.iter().enumerate() {
            if !e.iota.is_injective() || !e.tau.is_injective() {
                return Err(Error::NotAHomomorphism(format!(
                    "edge {i} has a non-injective boundary map"
                )));
            }
            if e.iota_vertex >= self.vertices.len() || e.tau_vertex >= self.vertices.len() {
                return Err(Error::MalformedWord(format!("edge {i} endpoint out of range")));
            }
        }
        // spanning tree: tree edges reach all vertices without cycles
        let tree = self.tree_edges();
        if tree.len() + 1 != self.vertices.len() {
            return Err(Error::MalformedWord(
                "tree edge count must be vertex count − 1".into(),
            ));
        }
        let mut reached = vec![false; self.vertices.len()];
        reached[0] = true;
        let mut changed = true;
        while changed {
            changed = false;
            for &t in &tree {
                let e = &self.edges[t];
                if reached[e.iota_vertex] != reached[e.tau_vertex] {
                    reached[e.iota_vertex] = true;
                    reached[e.tau_vertex] = true;
                    changed = true;
                }
            }
        }
        if !reached.iter().all(|&r| r) {
            return Err(Error::MalformedWord("spanning tree does not connect".into()));
        }
        Ok(())
    }

    /// Tree path between two vertices as (edge, traversed-forward) pairs.
    pub fn tree_path(&self, from: usize, to: usize) -> Vec<(usize, bool)> {
        let mut prev: Vec<Option<(usize, bool)>> = vec![None; self.vertices.len()];
        let mut seen = vec![false; self.vertices.len()];
        seen[from] = true;
        let mut queue = vec![from];
        let mut head = 0;
        while head < queue.len() {
            let v = queue[head];
            head += 1;
            for (ei, e) in self.edges.iter().enumerate() {
                if !e.in_tree {
                    continue;
                }
                if e.iota_vertex == v && !seen[e.tau_vertex] {
                    seen[e.tau_vertex] = true;
                    prev[e.tau_vertex] = Some((ei, true));
                    queue.push(e.tau_vertex);
                }
                if e.tau_vertex == v && !seen[e.iota_vertex] {
                    seen[e.iota_vertex] = true;
                    prev[e.iota_vertex] = Some((ei, false));
                    queue.push(e.iota_vertex);
                }
            }
        }
        let mut path = Vec::new();
        let mut cur = to;
        while cur != from {
            let (ei, fwd) = prev[cur].expect("connected tree");
            path.push((ei, fwd));
            cur = if fwd {
                self.edges[ei].iota_vertex
            } else {
                self.edges[ei].tau_vertex
            };
        }
        path.reverse();
        path
    }
}

/// One syllable of a word in the fundamental groupoid: an edge traversal
/// followed by an element of the target vertex group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GogStep {
    pub edge: usize,
    pub forward: bool,
    pub elem: Perm,
}

/// A word based at a vertex: a leading vertex element followed by edge
/// traversals each carrying the next vertex element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GogWord {
    pub base: usize,
    pub leading: Perm,
    pub steps: Vec<GogStep>,
}

impl GogWord {
    pub fn vertex_element(base: usize, elem: Perm) -> GogWord {
        GogWord {
            base,
            leading: elem,
            steps: Vec::new(),
        }
    }

    pub fn syllable_count(&self) -> usize {
        self.steps.len()
    }

    /// Vertex the word ends at.
    pub fn end_vertex(&self, graph: &GraphOfGroups) -> usize {
        match self.steps.last() {
            None => self.base,
            Some(s) => {
                if s.forward {
                    graph.edges[s.edge].tau_vertex
                } else {
                    graph.edges[s.edge].iota_vertex
                }
            }
        }
    }

    /// Concatenate two composable words (end of `self` at `other.base`).
    pub fn concat(&self, other: &GogWord, graph: &GraphOfGroups) -> Result<GogWord> {
        if self.end_vertex(graph) != other.base {
            return Err(Error::MalformedWord(
                "words are not composable at matching vertices".into(),
            ));
        }
        let mut out = self.clone();
        match out.steps.last_mut() {
            None => out.leading = out.leading.compose(&other.leading),
            Some(last) => last.elem = last.elem.compose(&other.leading),
        }
        out.steps.extend(other.steps.iter().cloned());
        Ok(out)
    }

    pub fn inverse(&self, graph: &GraphOfGroups) -> GogWord {
        let mut elems: Vec<Perm> = vec![self.leading.inverse()];
        elems.extend(self.steps.iter().map(|s| s.elem.inverse()));
        // (g0 s1 g1 … sk gk)⁻¹ = gk⁻¹ sk⁻¹ … s1⁻¹ g0⁻¹
        let mut steps = Vec::with_capacity(self.steps.len());
        for (i, s) in self.steps.iter().enumerate().rev() {
            steps.push(GogStep {
                edge: s.edge,
                forward: !s.forward,
                elem: elems[i].clone(),
            });
        }
        GogWord {
            base: self.end_vertex(graph),
            leading: elems[self.steps.len()].clone(),
            steps,
        }
    }
}

/// Marked copy of a Sylow group inside a model.
#[derive(Clone, Debug)]
pub struct SylowMarking {
    pub prime: u64,
    pub s: PermGroup,
    pub vertex: usize,
    pub embed: GroupHom,
    /// for direct products: which factor owns this marking
    pub factor: Option<usize>,
}

/// A fusion generator realized inside the model by an explicit word.
#[derive(Clone, Debug)]
pub struct RealizedGenerator {
    pub prime: u64,
    pub key: MorKey,
    pub witness: GogWord,
}

/// One edge contraction of the collapse pass, sufficient to replay the move.
#[derive(Clone, Debug)]
pub struct TietzeMove {
    pub removed_vertex: usize,
    pub host_vertex: usize,
    pub via_edge: usize,
    pub removed_group: PermGroup,
    pub host_group: PermGroup,
    pub iso_images: Vec<Perm>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ModelKind {
    Robinson,
    LearyStancu,
    Universal,
    ProductDirect,
    ProductFree,
    AmalgamOverS,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SymbolMeaning {
    VertexGen { vertex: usize, gen: usize },
    EdgeLetter { edge: usize },
    /// direct products: symbol owned by a factor
    FactorSymbol { factor: usize, symbol: usize },
}

pub enum ModelStructure {
    Graph(GraphOfGroups),
    Direct(Vec<ModelGroup>),
}

pub struct ModelGroup {
    pub kind: ModelKind,
    pub presentation: Presentation,
    pub symbol_map: Vec<SymbolMeaning>,
    pub structure: ModelStructure,
    pub markings: Vec<SylowMarking>,
    /// per-vertex p-subgroups reachable from the Sylow data (graph models)
    pub anchors: Vec<Vec<(u64, PermGroup)>>,
    pub realized_generators: Vec<RealizedGenerator>,
    pub collapse_log: Vec<TietzeMove>,
}

impl ModelGroup {
    pub fn graph(&self) -> Result<&GraphOfGroups> {
        match &self.structure {
            ModelStructure::Graph(g) => Ok(g),
            ModelStructure::Direct(_) => Err(Error::NotAGraphModel),
        }
    }

    pub fn factors(&self) -> Option<&[ModelGroup]> {
        match &self.structure {
            ModelStructure::Direct(parts) => Some(parts),
            ModelStructure::Graph(_) => None,
        }
    }

    pub fn primary_marking(&self) -> &SylowMarking {
        &self.markings[0]
    }

    pub fn marking_for_prime(&self, p: u64) -> Result<&SylowMarking> {
        self.markings
            .iter()
            .find(|m| m.prime == p)
            .ok_or(Error::SylowMismatch)
    }

    /// Loop at `base` passing through a vertex element via the spanning tree.
    pub fn vertex_element_loop(&self, base: usize, vertex: usize, elem: Perm) -> Result<GogWord> {
        let graph = self.graph()?;
        if base == vertex {
            return Ok(GogWord::vertex_element(base, elem));
        }
        let path = graph.tree_path(base, vertex);
        let mut steps: Vec<GogStep> = path
            .iter()
            .map(|&(e, fwd)| {
                let target = if fwd {
                    graph.edges[e].tau_vertex
                } else {
                    graph.edges[e].iota_vertex
                };
                GogStep {
                    edge: e,
                    forward: fwd,
                    elem: Perm::identity(graph.vertices[target].degree()),
                }
            })
            .collect();
        steps.last_mut().expect("nonempty path").elem = elem;
        for &(e, fwd) in path.iter().rev() {
            let target = if fwd {
                graph.edges[e].iota_vertex
            } else {
                graph.edges[e].tau_vertex
            };
            steps.push(GogStep {
                edge: e,
                forward: !fwd,
                elem: Perm::identity(graph.vertices[target].degree()),
            });
        }
        Ok(GogWord {
            base,
            leading: Perm::identity(graph.vertices[base].degree()),
            steps,
        })
    }
}

impl std::fmt::Debug for ModelGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match &self.structure {
            ModelStructure::Graph(g) => write!(
                f,
                "ModelGroup({:?}, {} vertices {:?}, {} edges)",
                self.kind,
                g.vertices.len(),
                g.vertices.iter().map(|v| v.order()).collect::<Vec<_>>(),
                g.edges.len()
            ),
            ModelStructure::Direct(parts) => {
                write!(f, "ModelGroup({:?}, {} factors)", self.kind, parts.len())
            }
        }
    }
}

fn vertex_symbol_names(graph: &GraphOfGroups) -> Vec<Vec<String>> {
    let single = graph.vertices.len() == 1;
    graph
        .vertices
        .iter()
        .enumerate()
        .map(|(vi, v)| {
            (0..v.generators().len())
                .map(|j| {
                    if single {
                        // a, b, c, … for the one-vertex models
                        ((b'a' + (j as u8 % 20)) as char).to_string()
                            + &(if j >= 20 { format!("{}", j / 20) } else { String::new() })
                    } else {
                        format!("v{vi}x{j}")
                    }
                })
                .collect()
        })
        .collect()
}

/// Presentation of the fundamental group of a graph of groups relative to its
/// spanning tree: Cayley relators per vertex, identifications along tree
/// edges, and one stable letter per remaining edge.
pub fn presentation_from_graph(
    graph: &GraphOfGroups,
    marking: &SylowMarking,
) -> (Presentation, Vec<SymbolMeaning>) {
    let names = vertex_symbol_names(graph);
    let mut symbols: Vec<String> = Vec::new();
    let mut meaning: Vec<SymbolMeaning> = Vec::new();
    let mut vertex_sym: Vec<Vec<u32>> = Vec::new();
    for (vi, vnames) in names.iter().enumerate() {
        let mut idxs = Vec::new();
        for (j, n) in vnames.iter().enumerate() {
            idxs.push(symbols.len() as u32);
            symbols.push(n.clone());
            meaning.push(SymbolMeaning::VertexGen { vertex: vi, gen: j });
        }
        vertex_sym.push(idxs);
    }
    let mut letter_sym: HashMap<usize, u32> = HashMap::new();
    let mut letter_no = 1;
    for (ei, e) in graph.edges.iter().enumerate() {
        if !e.in_tree {
            letter_sym.insert(ei, symbols.len() as u32);
            symbols.push(format!("t{letter_no}"));
            meaning.push(SymbolMeaning::EdgeLetter { edge: ei });
            letter_no += 1;
        }
    }
    let map_word = |vi: usize, w: &Word| -> Word {
        w.iter().map(|&(s, e)| (vertex_sym[vi][s as usize], e)).collect()
    };
    let mut relators: Vec<Word> = Vec::new();
    for (vi, v) in graph.vertices.iter().enumerate() {
        for rel in cayley_relators(v) {
            relators.push(map_word(vi, &rel));
        }
    }
    for (ei, e) in graph.edges.iter().enumerate() {
        for u in e.group.generators() {
            let iota_w = map_word(e.iota_vertex, &element_word(&graph.vertices[e.iota_vertex], &e.iota.apply(u)));
            let tau_w = map_word(e.tau_vertex, &element_word(&graph.vertices[e.tau_vertex], &e.tau.apply(u)));
            let rel = if e.in_tree {
                concat_words(&[&iota_w, &invert_word(&tau_w)])
            } else {
                let t = letter_sym[&ei];
                concat_words(&[&[(t, -1)], &iota_w, &[(t, 1)], &invert_word(&tau_w)])
            };
            if !rel.is_empty() {
                relators.push(rel);
            }
        }
    }
    let sylow_embedding = marking
        .s
        .generators()
        .iter()
        .map(|g| {
            map_word(
                marking.vertex,
                &element_word(&graph.vertices[marking.vertex], &marking.embed.apply(g)),
            )
        })
        .collect();
    (
        Presentation {
            symbols,
            relators,
            sylow_embedding,
        },
        meaning,
    )
}

pub struct CollapseOutcome {
    pub graph: GraphOfGroups,
    /// final vertex index of each original vertex
    pub where_is: Vec<usize>,
    /// map of each original vertex group into its final vertex group
    pub push: Vec<GroupHom>,
    /// surviving index of each original edge
    pub edge_map: Vec<Option<usize>>,
    pub log: Vec<TietzeMove>,
}

/// Contract every tree edge whose boundary map is onto one of its endpoint
/// groups, absorbing that endpoint.
pub fn collapse_graph(graph: GraphOfGroups) -> Result<CollapseOutcome> {
    let n_orig = graph.vertices.len();
    let e_orig = graph.edges.len();
    let mut g = graph;
    let mut where_is: Vec<usize> = (0..n_orig).collect();
    let mut push: Vec<GroupHom> = g.vertices.iter().map(GroupHom::identity).collect();
    let mut edge_map: Vec<Option<usize>> = (0..e_orig).map(Some).collect();
    let mut log = Vec::new();
    loop {
        if g.vertices.len() == 1 {
            break;
        }
        let mut candidate: Option<(usize, usize, usize)> = None; // (edge, removed, host)
        for (ei, e) in g.edges.iter().enumerate() {
            if !e.in_tree || e.iota_vertex == e.tau_vertex {
                continue;
            }
            let iota_onto = e.group.order() == g.vertices[e.iota_vertex].order();
            let tau_onto = e.group.order() == g.vertices[e.tau_vertex].order();
            if iota_onto && tau_onto {
                let (removed, host) = if e.iota_vertex > e.tau_vertex {
                    (e.iota_vertex, e.tau_vertex)
                } else {
                    (e.tau_vertex, e.iota_vertex)
                };
                candidate = Some((ei, removed, host));
                break;
            } else if iota_onto {
                candidate = Some((ei, e.iota_vertex, e.tau_vertex));
                break;
            } else if tau_onto {
                candidate = Some((ei, e.tau_vertex, e.iota_vertex));
                break;
            }
        }
        let Some((ei, removed, host)) = candidate else {
            break;
        };
        let e = g.edges[ei].clone();
        let (from_removed, to_host) = if removed == e.iota_vertex {
            (&e.iota, &e.tau)
        } else {
            (&e.tau, &e.iota)
        };
        // φ : G_removed → G_host through the edge group
        let phi = from_removed.inverse()?.then(to_host)?;
        log.push(TietzeMove {
            removed_vertex: removed,
            host_vertex: host,
            via_edge: ei,
            removed_group: g.vertices[removed].clone(),
            host_group: g.vertices[host].clone(),
            iso_images: phi.gen_images().to_vec(),
        });
        // rebuild the graph without `removed`
        let reindex = |v: usize| -> usize {
            if v == removed {
                host - ((host > removed) as usize)
            } else {
                v - ((v > removed) as usize)
            }
        };
        let mut new_vertices = g.vertices.clone();
        new_vertices.remove(removed);
        let mut new_edges = Vec::new();
        let mut shift: Vec<Option<usize>> = vec![None; g.edges.len()];
        for (j, edge) in g.edges.iter().enumerate() {
            if j == ei {
                continue;
            }
            let mut edge = edge.clone();
            if edge.iota_vertex == removed {
                edge.iota = edge.iota.then(&phi)?;
            }
            if edge.tau_vertex == removed {
                edge.tau = edge.tau.then(&phi)?;
            }
            edge.iota_vertex = reindex(edge.iota_vertex);
            edge.tau_vertex = reindex(edge.tau_vertex);
            shift[j] = Some(new_edges.len());
            new_edges.push(edge);
        }
        for slot in edge_map.iter_mut() {
            *slot = slot.and_then(|old| shift[old]);
        }
        for (orig, w) in where_is.iter_mut().enumerate() {
            if *w == removed {
                push[orig] = push[orig].then(&phi)?;
            }
            *w = reindex(*w);
        }
        g = GraphOfGroups {
            vertices: new_vertices,
            edges: new_edges,
        };
    }
    Ok(CollapseOutcome {
        graph: g,
        where_is,
        push,
        edge_map,
        log,
    })
}

fn add_anchor(anchors: &mut [Vec<(u64, PermGroup)>], vertex: usize, prime: u64, sub: PermGroup) {
    let slot = &mut anchors[vertex];
    match slot.iter_mut().find(|(q, _)| *q == prime) {
        Some((_, existing)) => {
            if sub.order() > existing.order() {
                *existing = sub;
            }
        }
        None => slot.push((prime, sub)),
    }
}

/// Robinson's iterated amalgam over the Alperin datum: a star of the `L_i`
/// with edge groups `N_S(P_i)`, degenerate vertices absorbed.
pub fn robinson_model(datum: &AlperinDatum) -> Result<ModelGroup> {
    datum.validate()?;
    let f = &datum.fusion;
    let p = f.p();
    let entries = &datum.entries;
    let mut vertices: Vec<PermGroup> = entries.iter().map(|e| e.l.clone()).collect();
    let mut edges = Vec::new();
    for (i, entry) in entries.iter().enumerate().skip(1) {
        let edge_group = f.normalizer_in_s(entry.subgroup_idx).group().clone();
        let iota = entries[0].embed.restrict(&edge_group)?;
        let tau = entry.quotient.restrict(&edge_group)?;
        edges.push(GogEdge {
            group: edge_group,
            iota_vertex: 0,
            tau_vertex: i,
            iota,
            tau,
            in_tree: true,
        });
    }
    if vertices.len() == 1 {
        vertices = vec![entries[0].l.clone()];
    }
    let graph = GraphOfGroups { vertices, edges };
    graph.validate()?;
    let CollapseOutcome {
        graph,
        where_is,
        push,
        edge_map: _,
        log,
    } = collapse_graph(graph)?;
    graph.validate()?;

    let s_vertex = where_is[0];
    let s_embed = entries[0].embed.then(&push[0])?;
    let marking = SylowMarking {
        prime: p,
        s: f.s().clone(),
        vertex: s_vertex,
        embed: s_embed,
        factor: None,
    };
    let mut anchors = vec![Vec::new(); graph.vertices.len()];
    add_anchor(&mut anchors, s_vertex, p, marking.embed.image()?);
    for (i, entry) in entries.iter().enumerate() {
        let pushed = entry.embed.then(&push[i])?;
        add_anchor(&mut anchors, where_is[i], p, pushed.image()?);
    }
    let (presentation, symbol_map) = presentation_from_graph(&graph, &marking);
    let mut model = ModelGroup {
        kind: ModelKind::Robinson,
        presentation,
        symbol_map,
        structure: ModelStructure::Graph(graph),
        markings: vec![marking],
        anchors,
        realized_generators: Vec::new(),
        collapse_log: log,
    };
    let mut realized = Vec::new();
    for (entry_pos, key, lift) in datum.generator_morphisms() {
        let entry = &entries[entry_pos];
        let elem = entry.quotient.then(&push[entry_pos])?.apply(&lift);
        let witness =
            model.vertex_element_loop(model.markings[0].vertex, where_is[entry_pos], elem)?;
        realized.push(RealizedGenerator {
            prime: p,
            key,
            witness,
        });
    }
    model.realized_generators = realized;
    Ok(model)
}

fn hnn_style_model(
    f: &FusionSystem,
    keys: &[MorKey],
    kind: ModelKind,
) -> Result<ModelGroup> {
    let p = f.p();
    let s = f.s().clone();
    let mut edges = Vec::new();
    for key in keys {
        let source = f.subgroup(key.src).group().clone();
        let iota = GroupHom::inclusion(&source, &s)?;
        let tau = f.mor_hom(key);
        edges.push(GogEdge {
            group: source,
            iota_vertex: 0,
            tau_vertex: 0,
            iota,
            tau,
            in_tree: false,
        });
    }
    let graph = GraphOfGroups {
        vertices: vec![s.clone()],
        edges,
    };
    graph.validate()?;
    let marking = SylowMarking {
        prime: p,
        s: s.clone(),
        vertex: 0,
        embed: GroupHom::identity(&s),
        factor: None,
    };
    let mut anchors = vec![Vec::new(); 1];
    add_anchor(&mut anchors, 0, p, s.clone());
    let (presentation, symbol_map) = presentation_from_graph(&graph, &marking);
    let realized = keys
        .iter()
        .enumerate()
        .map(|(i, key)| RealizedGenerator {
            prime: p,
            key: key.clone(),
            // t⁻¹ u t = φ(u): the backward traversal conjugates as φ
            witness: GogWord {
                base: 0,
                leading: s.identity(),
                steps: vec![GogStep {
                    edge: i,
                    forward: false,
                    elem: s.identity(),
                }],
            },
        })
        .collect();
    Ok(ModelGroup {
        kind,
        presentation,
        symbol_map,
        structure: ModelStructure::Graph(graph),
        markings: vec![marking],
        anchors,
        realized_generators: realized,
        collapse_log: Vec::new(),
    })
}

/// Leary–Stancu model: S with one stable letter per generating morphism,
/// relations `t⁻¹ u t = φ(u)`. The morphism list must generate the system.
pub fn leary_stancu_model(f: &FusionSystem, keys: &[MorKey]) -> Result<ModelGroup> {
    let homs: Vec<GroupHom> = keys.iter().map(|k| f.mor_hom(k)).collect();
    let closure = FusionSystem::generated(f.s(), f.p(), &homs)?;
    let (eq, witness) = f.equal(&closure);
    if !eq {
        let (key, side) = witness.expect("inequality carries a witness");
        return Err(Error::DoesNotGenerate(format!(
            "morphism with source index {} missing from the {} side",
            key.src,
            if side == "left" { "generated" } else { "given" }
        )));
    }
    hnn_style_model(f, keys, ModelKind::LearyStancu)
}

/// One stable letter for every morphism of the category: a map contributes a
/// letter for each target subgroup containing its image, all imposing the
/// same conjugation relation.
pub fn universal_model(f: &FusionSystem, morphism_cap: usize) -> Result<ModelGroup> {
    let count = f.morphism_count();
    if count > morphism_cap {
        return Err(Error::MorphismCapExceeded {
            count,
            cap: morphism_cap,
        });
    }
    let mut keys = Vec::with_capacity(count);
    for idx in 0..f.subgroups().len() {
        for m in f.hom_to_s(idx).iter() {
            let img = f.image_index(&m.key);
            for q in f.subgroups() {
                if q.contains_group(f.subgroup(img).group()) {
                    keys.push(m.key.clone());
                }
            }
        }
    }
    hnn_style_model(f, &keys, ModelKind::Universal)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ProductMode {
    Direct,
    Free,
}

/// Combine models at pairwise distinct primes into one group: the direct
/// product (commuting factors) or the free product (a trivial-edge join).
pub fn multiprime_model(parts: Vec<ModelGroup>, mode: ProductMode) -> Result<ModelGroup> {
    let mut primes = Vec::new();
    for part in &parts {
        for m in &part.markings {
            if primes.contains(&m.prime) {
                return Err(Error::PrimeRepeated(m.prime));
            }
            primes.push(m.prime);
        }
    }
    if parts.len() == 1 {
        return Ok(parts.into_iter().next().expect("one part"));
    }
    match mode {
        ProductMode::Direct => {
            // presentation: prefixed symbols, all relators, cross commutators
            let mut symbols = Vec::new();
            let mut symbol_map = Vec::new();
            let mut relators: Vec<Word> = Vec::new();
            let mut offsets = Vec::new();
            for (fi, part) in parts.iter().enumerate() {
                offsets.push(symbols.len() as u32);
                for (si, name) in part.presentation.symbols.iter().enumerate() {
                    symbols.push(format!("p{fi}_{name}"));
                    symbol_map.push(SymbolMeaning::FactorSymbol {
                        factor: fi,
                        symbol: si,
                    });
                }
            }
            for (fi, part) in parts.iter().enumerate() {
                for rel in &part.presentation.relators {
                    relators.push(rel.iter().map(|&(s, e)| (s + offsets[fi], e)).collect());
                }
            }
            for fi in 0..parts.len() {
                for fj in fi + 1..parts.len() {
                    for si in 0..parts[fi].presentation.symbols.len() as u32 {
                        for sj in 0..parts[fj].presentation.symbols.len() as u32 {
                            let a = si + offsets[fi];
                            let b = sj + offsets[fj];
                            relators.push(vec![(a, 1), (b, 1), (a, -1), (b, -1)]);
                        }
                    }
                }
            }
            let sylow_embedding = parts[0]
                .presentation
                .sylow_embedding
                .iter()
                .map(|w| w.iter().map(|&(s, e)| (s + offsets[0], e)).collect())
                .collect();
            let markings = parts
                .iter()
                .enumerate()
                .flat_map(|(fi, part)| {
                    part.markings.iter().map(move |m| SylowMarking {
                        factor: Some(fi),
                        ..m.clone()
                    })
                })
                .collect();
            Ok(ModelGroup {
                kind: ModelKind::ProductDirect,
                presentation: Presentation {
                    symbols,
                    relators,
                    sylow_embedding,
                },
                symbol_map,
                structure: ModelStructure::Direct(parts),
                markings,
                anchors: Vec::new(),
                realized_generators: Vec::new(),
                collapse_log: Vec::new(),
            })
        }
        ProductMode::Free => {
            let mut vertices = Vec::new();
            let mut edges = Vec::new();
            let mut vertex_offsets = Vec::new();
            let mut edge_offsets = Vec::new();
            for part in &parts {
                let g = part.graph()?;
                vertex_offsets.push(vertices.len());
                edge_offsets.push(edges.len());
                vertices.extend(g.vertices.iter().cloned());
                for e in &g.edges {
                    let off = vertex_offsets.last().copied().unwrap();
                    edges.push(GogEdge {
                        group: e.group.clone(),
                        iota_vertex: e.iota_vertex + off,
                        tau_vertex: e.tau_vertex + off,
                        iota: e.iota.clone(),
                        tau: e.tau.clone(),
                        in_tree: e.in_tree,
                    });
                }
            }
            // join the factor base points by trivial-group tree edges
            let base0 = vertex_offsets[0] + parts[0].primary_marking().vertex;
            for (fi, part) in parts.iter().enumerate().skip(1) {
                let base = vertex_offsets[fi] + part.primary_marking().vertex;
                let trivial = PermGroup::trivial(1);
                edges.push(GogEdge {
                    group: trivial.clone(),
                    iota_vertex: base0,
                    tau_vertex: base,
                    iota: GroupHom::new(trivial.clone(), vertices[base0].clone(), vec![])?,
                    tau: GroupHom::new(trivial.clone(), vertices[base].clone(), vec![])?,
                    in_tree: true,
                });
            }
            let graph = GraphOfGroups { vertices, edges };
            graph.validate()?;
            let markings: Vec<SylowMarking> = parts
                .iter()
                .enumerate()
                .flat_map(|(fi, part)| {
                    let off = vertex_offsets[fi];
                    part.markings.iter().map(move |m| SylowMarking {
                        vertex: m.vertex + off,
                        factor: None,
                        ..m.clone()
                    })
                })
                .collect();
            let mut anchors = vec![Vec::new(); graph.vertices.len()];
            for (fi, part) in parts.iter().enumerate() {
                for (v, slots) in part.anchors.iter().enumerate() {
                    for (q, sub) in slots {
                        add_anchor(&mut anchors, v + vertex_offsets[fi], *q, sub.clone());
                    }
                }
            }
            let realized_generators: Vec<RealizedGenerator> = parts
                .iter()
                .enumerate()
                .flat_map(|(fi, part)| {
                    let voff = vertex_offsets[fi];
                    let eoff = edge_offsets[fi];
                    part.realized_generators.iter().map(move |r| RealizedGenerator {
                        prime: r.prime,
                        key: r.key.clone(),
                        witness: GogWord {
                            base: r.witness.base + voff,
                            leading: r.witness.leading.clone(),
                            steps: r
                                .witness
                                .steps
                                .iter()
                                .map(|s| GogStep {
                                    edge: s.edge + eoff,
                                    forward: s.forward,
                                    elem: s.elem.clone(),
                                })
                                .collect(),
                        },
                    })
                })
                .collect();
            let (presentation, symbol_map) = presentation_from_graph(&graph, &markings[0]);
            Ok(ModelGroup {
                kind: ModelKind::ProductFree,
                presentation,
                symbol_map,
                structure: ModelStructure::Graph(graph),
                markings,
                anchors,
                realized_generators,
                collapse_log: Vec::new(),
            })
        }
    }
}

/// Amalgam of two models over the same marked Sylow group.
pub fn amalgam_over_sylow(m1: &ModelGroup, m2: &ModelGroup) -> Result<ModelGroup> {
    let mk1 = m1.primary_marking();
    let mk2 = m2.primary_marking();
    if mk1.prime != mk2.prime || !mk1.s.same_element_set(&mk2.s) {
        return Err(Error::SylowMismatch);
    }
    let p = mk1.prime;
    let g1 = m1.graph()?;
    let g2 = m2.graph()?;
    let off = g1.vertices.len();
    let eoff = g1.edges.len();
    let mut vertices = g1.vertices.clone();
    vertices.extend(g2.vertices.iter().cloned());
    let mut edges = g1.edges.clone();
    for e in &g2.edges {
        edges.push(GogEdge {
            group: e.group.clone(),
            iota_vertex: e.iota_vertex + off,
            tau_vertex: e.tau_vertex + off,
            iota: e.iota.clone(),
            tau: e.tau.clone(),
            in_tree: e.in_tree,
        });
    }
    let joining_edge = edges.len();
    edges.push(GogEdge {
        group: mk1.s.clone(),
        iota_vertex: mk1.vertex,
        tau_vertex: mk2.vertex + off,
        iota: mk1.embed.clone(),
        tau: mk2.embed.clone(),
        in_tree: true,
    });
    let merged = GraphOfGroups { vertices, edges };
    merged.validate()?;
    let CollapseOutcome {
        graph,
        where_is,
        push,
        edge_map,
        log,
    } = collapse_graph(merged.clone())?;
    graph.validate()?;
    let s_vertex = where_is[mk1.vertex];
    let marking = SylowMarking {
        prime: p,
        s: mk1.s.clone(),
        vertex: s_vertex,
        embed: mk1.embed.then(&push[mk1.vertex])?,
        factor: None,
    };
    let mut anchors = vec![Vec::new(); graph.vertices.len()];
    for (m, voff) in [(m1, 0usize), (m2, off)] {
        for (v, slots) in m.anchors.iter().enumerate() {
            for (q, sub) in slots {
                let pushed = GroupHom::inclusion(sub, &m.graph()?.vertices[v])?
                    .then(&push[v + voff])?
                    .image()?;
                add_anchor(&mut anchors, where_is[v + voff], *q, pushed);
            }
        }
    }
    let (presentation, symbol_map) = presentation_from_graph(&graph, &marking);
    let mut model = ModelGroup {
        kind: ModelKind::AmalgamOverS,
        presentation,
        symbol_map,
        structure: ModelStructure::Graph(graph),
        markings: vec![marking],
        anchors,
        realized_generators: Vec::new(),
        collapse_log: log,
    };
    let _ = joining_edge;
    let mut realized = Vec::new();
    for (m, voff, eoff_side) in [(m1, 0usize, 0usize), (m2, off, eoff)] {
        for r in &m.realized_generators {
            let remapped = remap_word(
                &r.witness,
                m.graph()?,
                voff,
                eoff_side,
                &where_is,
                &push,
                &edge_map,
            )?;
            let witness = rebase_loop(&model, &remapped)?;
            realized.push(RealizedGenerator {
                prime: r.prime,
                key: r.key.clone(),
                witness,
            });
        }
    }
    model.realized_generators = realized;
    Ok(model)
}

/// Map a word of a pre-collapse factor graph into the collapsed graph:
/// elements are pushed through the contraction isomorphisms and traversals of
/// contracted edges disappear, merging their neighbouring elements. This is
/// the canonical isomorphism of fundamental groupoids.
fn remap_word(
    w: &GogWord,
    old_graph: &GraphOfGroups,
    voff: usize,
    eoff: usize,
    where_is: &[usize],
    push: &[GroupHom],
    edge_map: &[Option<usize>],
) -> Result<GogWord> {
    let mut out = GogWord {
        base: where_is[w.base + voff],
        leading: push[w.base + voff].apply(&w.leading),
        steps: Vec::new(),
    };
    for step in &w.steps {
        let old_edge = &old_graph.edges[step.edge];
        let old_target = if step.forward {
            old_edge.tau_vertex
        } else {
            old_edge.iota_vertex
        } + voff;
        let elem = push[old_target].apply(&step.elem);
        match edge_map[step.edge + eoff] {
            Some(new_edge) => out.steps.push(GogStep {
                edge: new_edge,
                forward: step.forward,
                elem,
            }),
            None => match out.steps.last_mut() {
                Some(last) => last.elem = last.elem.compose(&elem),
                None => out.leading = out.leading.compose(&elem),
            },
        }
    }
    Ok(out)
}

/// Conjugate a loop so it is based at the model's primary marking vertex.
fn rebase_loop(model: &ModelGroup, w: &GogWord) -> Result<GogWord> {
    let graph = model.graph()?;
    let base = model.primary_marking().vertex;
    if w.base == base {
        return Ok(w.clone());
    }
    let path = model.vertex_element_loop(
        base,
        w.base,
        Perm::identity(graph.vertices[w.base].degree()),
    )?;
    // the loop helper goes there and back; keep the outbound half
    let half = GogWord {
        base,
        leading: path.leading.clone(),
        steps: path.steps[..path.steps.len() / 2].to_vec(),
    };
    half.concat(w, graph)?.concat(&half.inverse(graph), graph)
}

pub fn p_part_of_group(g: &PermGroup, p: u64) -> u64 {
    p_part(g.order(), p)
}
