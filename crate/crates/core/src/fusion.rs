//! Fusion systems over finite p-groups: construction from a finite group via
//! transporter sets, generation from morphism lists via breadth-first closure,
//! classification predicates (fully normalized/centralized, centric, radical,
//! essential), saturation checking, and equality with witnesses.
//!
//! A morphism P → Q is stored canonically as a map into S: the pair
//! `(source index, images of the source's canonical generators)`. Hom(P, Q) is
//! the subset of Hom(P, S) whose image lies in Q, so one set per source
//! subgroup determines the whole category.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};
use crate::group::{
    centralizer, enumerate_subgroups_p_group, normalizer, p_core, p_part, transporter_set,
    ElementKey, PermGroup, SubgroupRef,
};
use crate::hom::{quotient_by_normal, GroupHom};
use crate::perm::Perm;

/// Canonical key of a fusion morphism into S.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MorKey {
    pub src: usize,
    pub images: Vec<Perm>,
}

impl fmt::Debug for MorKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Mor(src {} -> [", self.src)?;
        for (i, p) in self.images.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, "])")
    }
}

/// A stored morphism: its key plus, for realized systems, a conjugating
/// group element witnessing it.
#[derive(Clone, Debug)]
pub struct Mor {
    pub key: MorKey,
    pub witness: Option<Perm>,
}

/// A fusion morphism materialized with explicit source, target, and map.
#[derive(Clone)]
pub struct FusionMorphism {
    pub source: SubgroupRef,
    pub target: SubgroupRef,
    pub map: GroupHom,
}

impl FusionMorphism {
    pub fn is_injective(&self) -> bool {
        self.map.is_injective()
    }
}

impl fmt::Debug for FusionMorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "FusionMorphism(|P| {} -> |Q| {})",
            self.source.order(),
            self.target.order()
        )
    }
}

/// Classification flags of a subgroup inside a fusion system.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ClassifyFlags {
    pub fully_normalized: bool,
    pub fully_centralized: bool,
    pub centric: bool,
    pub radical: bool,
    pub essential: bool,
}

/// Automorphism data of one subgroup: Aut_F(P) realized on the element list of
/// P, its inner subgroup, and the outer quotient.
pub struct AutData {
    pub aut: PermGroup,
    pub inn: PermGroup,
    pub out: PermGroup,
    pub out_proj: GroupHom,
    pub aut_perm_of_key: HashMap<MorKey, Perm>,
    pub key_of_aut_perm: HashMap<Perm, MorKey>,
}

#[derive(Clone, Debug)]
pub enum SaturationWitness {
    /// A fully normalized subgroup violating the Sylow-automorphism axiom.
    SylowAxiom { subgroup: usize },
    /// A morphism with fully centralized image but no extension to N_φ.
    Extension { subgroup: usize, morphism: MorKey, n_phi: usize },
}

#[derive(Clone, Debug)]
pub struct SaturationReport {
    pub saturated: bool,
    pub witness: Option<SaturationWitness>,
}

enum FusionKind {
    Realized { group: PermGroup, sylow: SubgroupRef },
    Generated { declared: Vec<MorKey> },
}

struct FusionInner {
    p: u64,
    s: PermGroup,
    kind: FusionKind,
    subgroups: Vec<SubgroupRef>,
    sub_index: HashMap<ElementKey, usize>,
    /// per subgroup: normalizer and centralizer taken inside S
    n_s: Vec<SubgroupRef>,
    c_s: Vec<SubgroupRef>,
    /// per subgroup: indices of its maximal subgroups
    maximals: Vec<Vec<usize>>,
    /// per subgroup: S-conjugacy representative and a witness w with c_w(rep) = this
    s_class: Vec<(usize, Perm)>,
    hom: OnceLock<Vec<Arc<Vec<Mor>>>>,
    aut_cache: Mutex<HashMap<usize, Arc<AutData>>>,
    flags_cache: Mutex<HashMap<usize, ClassifyFlags>>,
}

/// A fusion system over a finite p-group S. Cheap to clone; hom-sets are
/// memoized behind synchronized caches, so shared concurrent reads are fine.
#[derive(Clone)]
pub struct FusionSystem(Arc<FusionInner>);

impl fmt::Debug for FusionSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "FusionSystem(p {}, |S| {}, {} subgroups, {})",
            self.0.p,
            self.0.s.order(),
            self.0.subgroups.len(),
            match &self.0.kind {
                FusionKind::Realized { group, .. } => format!("realized by |G| {}", group.order()),
                FusionKind::Generated { declared } =>
                    format!("generated by {} morphisms", declared.len()),
            }
        )
    }
}

fn build_skeleton(s: &PermGroup, p: u64) -> Result<(Vec<SubgroupRef>, HashMap<ElementKey, usize>, Vec<SubgroupRef>, Vec<SubgroupRef>, Vec<Vec<usize>>, Vec<(usize, Perm)>)> {
    let subgroups = enumerate_subgroups_p_group(s, p)?;
    let mut sub_index = HashMap::new();
    for (i, sub) in subgroups.iter().enumerate() {
        sub_index.insert(sub.element_key(), i);
    }
    let mut n_s = Vec::with_capacity(subgroups.len());
    let mut c_s = Vec::with_capacity(subgroups.len());
    for sub in &subgroups {
        n_s.push(normalizer(s, sub)?);
        c_s.push(centralizer(s, sub)?);
    }
    let mut maximals = vec![Vec::new(); subgroups.len()];
    for (i, small) in subgroups.iter().enumerate() {
        for (j, big) in subgroups.iter().enumerate() {
            if big.order() == small.order() * p && big.contains_group(small.group()) {
                maximals[j].push(i);
            }
        }
    }
    // S-conjugacy classes with witnesses, walked from the minimal member
    let mut s_class: Vec<Option<(usize, Perm)>> = vec![None; subgroups.len()];
    for rep in 0..subgroups.len() {
        if s_class[rep].is_some() {
            continue;
        }
        s_class[rep] = Some((rep, s.identity()));
        let mut queue = vec![(rep, s.identity())];
        let mut head = 0;
        while head < queue.len() {
            let (cur, w) = queue[head].clone();
            for sg in s.generators() {
                let conj_gens: Vec<Perm> = subgroups[cur]
                    .generators()
                    .iter()
                    .map(|x| x.conjugate_by(sg))
                    .collect();
                let conj = PermGroup::generate(s.degree(), conj_gens)?;
                let idx = sub_index[&conj.element_key()];
                if s_class[idx].is_none() {
                    let witness = sg.compose(&w);
                    s_class[idx] = Some((rep, witness.clone()));
                    queue.push((idx, witness));
                }
            }
            head += 1;
        }
    }
    let s_class = s_class.into_iter().map(|x| x.unwrap()).collect();
    Ok((subgroups, sub_index, n_s, c_s, maximals, s_class))
}

impl FusionSystem {
    /// The fusion system of a finite group on a Sylow p-subgroup.
    pub fn realized(g: &PermGroup, s: &SubgroupRef, p: u64) -> Result<FusionSystem> {
        let want = p_part(g.order(), p);
        if s.order() != want {
            return Err(Error::NotSylow {
                got: s.order(),
                want,
                p,
            });
        }
        let s_group = PermGroup::generate(s.degree(), s.generators().to_vec())?;
        let (subgroups, sub_index, n_s, c_s, maximals, s_class) = build_skeleton(&s_group, p)?;
        Ok(FusionSystem(Arc::new(FusionInner {
            p,
            s: s_group,
            kind: FusionKind::Realized {
                group: g.clone(),
                sylow: s.clone(),
            },
            subgroups,
            sub_index,
            n_s,
            c_s,
            maximals,
            s_class,
            hom: OnceLock::new(),
            aut_cache: Mutex::new(HashMap::new()),
            flags_cache: Mutex::new(HashMap::new()),
        })))
    }

    /// The fusion system generated by the given injective maps between
    /// subgroups of S (all S-conjugation maps are included automatically).
    pub fn generated(s: &PermGroup, p: u64, gens: &[GroupHom]) -> Result<FusionSystem> {
        if p_part(s.order(), p) != s.order() {
            return Err(Error::NotPGroup { order: s.order(), p });
        }
        let (subgroups, sub_index, n_s, c_s, maximals, s_class) = build_skeleton(s, p)?;
        let mut declared = Vec::new();
        for hom in gens {
            if !hom.is_injective() {
                return Err(Error::NotAHomomorphism(
                    "fusion generators must be injective".into(),
                ));
            }
            let dom_key = hom.domain().element_key();
            let src = *sub_index.get(&dom_key).ok_or_else(|| Error::NotInParent {
                element: "generator domain is not a subgroup of S".into(),
            })?;
            let images: Vec<Perm> = subgroups[src]
                .generators()
                .iter()
                .map(|x| {
                    hom.try_apply(x).ok_or_else(|| Error::NotInParent {
                        element: x.to_string(),
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            for img in &images {
                if !s.contains(img) {
                    return Err(Error::NotInParent {
                        element: img.to_string(),
                    });
                }
            }
            declared.push(MorKey { src, images });
        }
        declared.sort();
        declared.dedup();
        Ok(FusionSystem(Arc::new(FusionInner {
            p,
            s: s.clone(),
            kind: FusionKind::Generated { declared },
            subgroups,
            sub_index,
            n_s,
            c_s,
            maximals,
            s_class,
            hom: OnceLock::new(),
            aut_cache: Mutex::new(HashMap::new()),
            flags_cache: Mutex::new(HashMap::new()),
        })))
    }

    /// Trivial fusion on S: only the S-conjugation maps.
    pub fn trivial(s: &PermGroup, p: u64) -> Result<FusionSystem> {
        FusionSystem::generated(s, p, &[])
    }

    pub fn p(&self) -> u64 {
        self.0.p
    }

    pub fn s(&self) -> &PermGroup {
        &self.0.s
    }

    pub fn realizer(&self) -> Option<&PermGroup> {
        match &self.0.kind {
            FusionKind::Realized { group, .. } => Some(group),
            FusionKind::Generated { .. } => None,
        }
    }

    pub fn sylow_in_realizer(&self) -> Option<&SubgroupRef> {
        match &self.0.kind {
            FusionKind::Realized { sylow, .. } => Some(sylow),
            FusionKind::Generated { .. } => None,
        }
    }

    /// Declared generating morphisms (empty for realized systems).
    pub fn declared_generators(&self) -> Vec<MorKey> {
        match &self.0.kind {
            FusionKind::Realized { .. } => Vec::new(),
            FusionKind::Generated { declared } => declared.clone(),
        }
    }

    pub fn subgroups(&self) -> &[SubgroupRef] {
        &self.0.subgroups
    }

    pub fn subgroup(&self, idx: usize) -> &SubgroupRef {
        &self.0.subgroups[idx]
    }

    pub fn subgroup_index(&self, group: &PermGroup) -> Result<usize> {
        self.0
            .sub_index
            .get(&group.element_key())
            .copied()
            .ok_or_else(|| Error::NotInParent {
                element: "not a subgroup of S".into(),
            })
    }

    pub fn s_index(&self) -> usize {
        self.0.subgroups.len() - 1
    }

    pub fn normalizer_in_s(&self, idx: usize) -> &SubgroupRef {
        &self.0.n_s[idx]
    }

    pub fn centralizer_in_s(&self, idx: usize) -> &SubgroupRef {
        &self.0.c_s[idx]
    }

    /// Hom(P, S) for every subgroup index, computed once.
    fn all_hom(&self) -> &Vec<Arc<Vec<Mor>>> {
        self.0.hom.get_or_init(|| match &self.0.kind {
            FusionKind::Realized { group, .. } => self
                .compute_realized_hom(group)
                .expect("hom computation on a validated system"),
            FusionKind::Generated { declared } => self
                .compute_generated_hom(declared)
                .expect("hom computation on a validated system"),
        })
    }

    pub fn hom_to_s(&self, idx: usize) -> Arc<Vec<Mor>> {
        self.all_hom()[idx].clone()
    }

    /// Number of morphisms of the category: |Hom(P, Q)| summed over ordered
    /// subgroup pairs. A stored map contributes once per target containing
    /// its image.
    pub fn morphism_count(&self) -> usize {
        let mut count = 0;
        for idx in 0..self.0.subgroups.len() {
            for m in self.hom_to_s(idx).iter() {
                let img = self.image_index(&m.key);
                count += self
                    .0
                    .subgroups
                    .iter()
                    .filter(|q| q.contains_group(self.0.subgroups[img].group()))
                    .count();
            }
        }
        count
    }

    fn compute_realized_hom(&self, g: &PermGroup) -> Result<Vec<Arc<Vec<Mor>>>> {
        let inner = &self.0;
        let s_in_g = SubgroupRef::from_group(g, inner.s.clone())?;
        let mut per_sub: Vec<Option<Vec<Mor>>> = vec![None; inner.subgroups.len()];
        // transporter pass for each S-class representative only
        for idx in 0..inner.subgroups.len() {
            if inner.s_class[idx].0 != idx {
                continue;
            }
            let p_in_g = SubgroupRef::from_group(g, inner.subgroups[idx].group().clone())?;
            let transporter = transporter_set(g, &p_in_g, &s_in_g)?;
            let mut seen: HashMap<MorKey, Perm> = HashMap::new();
            for t in transporter {
                let images: Vec<Perm> = inner.subgroups[idx]
                    .generators()
                    .iter()
                    .map(|x| x.conjugate_by(&t))
                    .collect();
                let key = MorKey { src: idx, images };
                seen.entry(key).or_insert(t);
            }
            let mut mors: Vec<Mor> = seen
                .into_iter()
                .map(|(key, witness)| Mor {
                    key,
                    witness: Some(witness),
                })
                .collect();
            mors.sort_by(|a, b| a.key.cmp(&b.key));
            per_sub[idx] = Some(mors);
        }
        // translate to the other class members: Hom(P,S) = Hom(rep,S) ∘ c_{w⁻¹}
        for idx in 0..inner.subgroups.len() {
            let (rep, w) = inner.s_class[idx].clone();
            if rep == idx {
                continue;
            }
            let w_inv = w.inverse();
            let rep_mors = per_sub[rep].clone().expect("reps computed first");
            let mut mors = Vec::with_capacity(rep_mors.len());
            for m in &rep_mors {
                let table = self.mor_table_raw(rep, &m.key.images);
                let images: Vec<Perm> = inner.subgroups[idx]
                    .generators()
                    .iter()
                    .map(|x| table[&x.conjugate_by(&w_inv)].clone())
                    .collect();
                let witness = m
                    .witness
                    .as_ref()
                    .map(|gw| gw.compose(&w_inv));
                mors.push(Mor {
                    key: MorKey { src: idx, images },
                    witness,
                });
            }
            mors.sort_by(|a, b| a.key.cmp(&b.key));
            per_sub[idx] = Some(mors);
        }
        Ok(per_sub.into_iter().map(|m| Arc::new(m.unwrap())).collect())
    }

    fn compute_generated_hom(&self, declared: &[MorKey]) -> Result<Vec<Arc<Vec<Mor>>>> {
        let inner = &self.0;
        let nsubs = inner.subgroups.len();
        let mut known: HashSet<MorKey> = HashSet::new();
        let mut by_src: Vec<Vec<MorKey>> = vec![Vec::new(); nsubs];
        let mut worklist: Vec<MorKey> = Vec::new();
        let push = |key: MorKey,
                        known: &mut HashSet<MorKey>,
                        by_src: &mut Vec<Vec<MorKey>>,
                        worklist: &mut Vec<MorKey>| {
            if known.insert(key.clone()) {
                by_src[key.src].push(key.clone());
                worklist.push(key);
            }
        };
        // seeds: all maps induced by conjugation inside S, plus the declared set
        for idx in 0..nsubs {
            for s_elem in inner.s.elements() {
                let images: Vec<Perm> = inner.subgroups[idx]
                    .generators()
                    .iter()
                    .map(|x| x.conjugate_by(s_elem))
                    .collect();
                push(
                    MorKey { src: idx, images },
                    &mut known,
                    &mut by_src,
                    &mut worklist,
                );
            }
        }
        for key in declared {
            push(key.clone(), &mut known, &mut by_src, &mut worklist);
        }
        // closure under restriction, inversion, and composition
        while let Some(key) = worklist.pop() {
            let table = self.mor_table_raw(key.src, &key.images);
            // restrictions to maximal subgroups
            for &sub in &inner.maximals[key.src] {
                let images: Vec<Perm> = inner.subgroups[sub]
                    .generators()
                    .iter()
                    .map(|x| table[x].clone())
                    .collect();
                push(
                    MorKey { src: sub, images },
                    &mut known,
                    &mut by_src,
                    &mut worklist,
                );
            }
            // inverse of the corestriction onto the image
            let img_idx = self.image_index_raw(&key);
            let inv_table: HashMap<Perm, Perm> =
                table.iter().map(|(k, v)| (v.clone(), k.clone())).collect();
            let inv_images: Vec<Perm> = inner.subgroups[img_idx]
                .generators()
                .iter()
                .map(|x| inv_table[x].clone())
                .collect();
            push(
                MorKey {
                    src: img_idx,
                    images: inv_images,
                },
                &mut known,
                &mut by_src,
                &mut worklist,
            );
            // compose with everything whose source is the image, both ways
            let followers = by_src[img_idx].clone();
            for g in followers {
                let gtable = self.mor_table_raw(g.src, &g.images);
                let images: Vec<Perm> = key.images.iter().map(|x| gtable[x].clone()).collect();
                push(
                    MorKey {
                        src: key.src,
                        images,
                    },
                    &mut known,
                    &mut by_src,
                    &mut worklist,
                );
            }
            let mut predecessors: Vec<MorKey> = Vec::new();
            for src_list in by_src.iter() {
                for f in src_list {
                    if self.image_index_raw(f) == key.src {
                        predecessors.push(f.clone());
                    }
                }
            }
            for f in predecessors {
                let images: Vec<Perm> = f.images.iter().map(|x| table[x].clone()).collect();
                push(
                    MorKey { src: f.src, images },
                    &mut known,
                    &mut by_src,
                    &mut worklist,
                );
            }
        }
        let mut per_sub: Vec<Vec<Mor>> = vec![Vec::new(); nsubs];
        for key in known {
            per_sub[key.src].push(Mor { key, witness: None });
        }
        for mors in &mut per_sub {
            mors.sort_by(|a, b| a.key.cmp(&b.key));
        }
        Ok(per_sub.into_iter().map(Arc::new).collect())
    }

    /// Full element table of a morphism key: src element → image in S.
    pub fn mor_table(&self, key: &MorKey) -> HashMap<Perm, Perm> {
        self.mor_table_raw(key.src, &key.images)
    }

    fn mor_table_raw(&self, src: usize, images: &[Perm]) -> HashMap<Perm, Perm> {
        let dom = self.0.subgroups[src].group();
        let mut table = HashMap::with_capacity(dom.order() as usize);
        table.insert(dom.identity(), self.0.s.identity());
        let mut queue = vec![dom.identity()];
        let mut head = 0;
        while head < queue.len() {
            let w = queue[head].clone();
            let fw = table[&w].clone();
            for (gi, g) in dom.generators().iter().enumerate() {
                let wg = w.compose(g);
                if !table.contains_key(&wg) {
                    table.insert(wg.clone(), fw.compose(&images[gi]));
                    queue.push(wg);
                }
            }
            head += 1;
        }
        table
    }

    /// Index of the image subgroup of a morphism.
    pub fn image_index(&self, key: &MorKey) -> usize {
        self.image_index_raw(key)
    }

    fn image_index_raw(&self, key: &MorKey) -> usize {
        let img = PermGroup::generate(self.0.s.degree(), key.images.clone())
            .expect("image of a subgroup is a subgroup");
        self.0.sub_index[&img.element_key()]
    }

    /// The morphism as a checked GroupHom from the source subgroup into S.
    pub fn mor_hom(&self, key: &MorKey) -> GroupHom {
        GroupHom::new(
            self.0.subgroups[key.src].group().clone(),
            self.0.s.clone(),
            key.images.clone(),
        )
        .expect("stored morphisms are homomorphisms")
    }

    /// Materialize Hom(P, Q): all stored maps из P whose image lies in Q.
    pub fn hom_set(&self, p: &SubgroupRef, q: &SubgroupRef) -> Result<Vec<FusionMorphism>> {
        let p_idx = self.subgroup_index(p.group())?;
        let q_idx = self.subgroup_index(q.group())?;
        Ok(self
            .hom_keys(p_idx, q_idx)
            .into_iter()
            .map(|m| self.materialize(&m.key, q_idx))
            .collect())
    }

    /// Hom(P, Q) as stored morphisms.
    pub fn hom_keys(&self, p_idx: usize, q_idx: usize) -> Vec<Mor> {
        let q = self.0.subgroups[q_idx].group();
        self.hom_to_s(p_idx)
            .iter()
            .filter(|m| m.key.images.iter().all(|x| q.contains(x)))
            .cloned()
            .collect()
    }

    fn materialize(&self, key: &MorKey, target_idx: usize) -> FusionMorphism {
        let source = self.0.subgroups[key.src].clone();
        let target = self.0.subgroups[target_idx].clone();
        let map = GroupHom::new(
            source.group().clone(),
            target.group().clone(),
            key.images.clone(),
        )
        .expect("image lies in the target");
        FusionMorphism {
            source,
            target,
            map,
        }
    }

    /// Morphism key of a FusionMorphism-style map given as a GroupHom.
    pub fn key_of_hom(&self, hom: &GroupHom) -> Result<MorKey> {
        let src = self.subgroup_index(hom.domain())?;
        let images = self.0.subgroups[src]
            .generators()
            .iter()
            .map(|x| {
                hom.try_apply(x).ok_or_else(|| Error::NotInParent {
                    element: x.to_string(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(MorKey { src, images })
    }

    /// F-conjugacy class of a subgroup: indices of images of its isomorphisms.
    pub fn f_class(&self, idx: usize) -> Vec<usize> {
        let mut class: Vec<usize> = self
            .hom_to_s(idx)
            .iter()
            .map(|m| self.image_index(&m.key))
            .filter(|&i| self.0.subgroups[i].order() == self.0.subgroups[idx].order())
            .collect();
        class.sort_unstable();
        class.dedup();
        class
    }

    /// Aut_F(P) realized as permutations of the element list of P.
    pub fn aut_data(&self, idx: usize) -> Arc<AutData> {
        if let Some(found) = self.0.aut_cache.lock().unwrap().get(&idx) {
            return found.clone();
        }
        let p_group = self.0.subgroups[idx].group();
        let elements = p_group.elements();
        let elem_index: HashMap<&Perm, u16> = elements
            .iter()
            .enumerate()
            .map(|(i, e)| (e, i as u16))
            .collect();
        let mut aut_perm_of_key = HashMap::new();
        let mut key_of_aut_perm = HashMap::new();
        let mut aut_perms = Vec::new();
        for m in self.hom_to_s(idx).iter() {
            if self.image_index(&m.key) != idx {
                continue;
            }
            let table = self.mor_table(&m.key);
            let images: Vec<u16> = elements.iter().map(|e| elem_index[&table[e]]).collect();
            let perm = Perm::from_images(images).expect("automorphism is a bijection");
            aut_perm_of_key.insert(m.key.clone(), perm.clone());
            key_of_aut_perm.insert(perm.clone(), m.key.clone());
            aut_perms.push(perm);
        }
        let aut = PermGroup::generate(elements.len(), aut_perms.clone())
            .expect("automorphism set is a group");
        debug_assert_eq!(aut.order() as usize, aut_perms.len());
        let inn_perms: Vec<Perm> = p_group
            .generators()
            .iter()
            .map(|x| {
                let images: Vec<u16> = elements
                    .iter()
                    .map(|e| elem_index[&e.conjugate_by(x)])
                    .collect();
                Perm::from_images(images).expect("inner automorphism")
            })
            .collect();
        let inn = PermGroup::generate(elements.len(), inn_perms).expect("inner automorphisms");
        let (out, out_proj) = quotient_by_normal(&aut, &inn).expect("Inn is normal in Aut");
        let data = Arc::new(AutData {
            aut,
            inn,
            out,
            out_proj,
            aut_perm_of_key,
            key_of_aut_perm,
        });
        self.0.aut_cache.lock().unwrap().insert(idx, data.clone());
        data
    }

    /// All five classification flags of a subgroup.
    pub fn classify(&self, idx: usize) -> ClassifyFlags {
        if let Some(found) = self.0.flags_cache.lock().unwrap().get(&idx) {
            return *found;
        }
        let class = self.f_class(idx);
        let n_here = self.0.n_s[idx].order();
        let c_here = self.0.c_s[idx].order();
        let fully_normalized = class.iter().all(|&j| self.0.n_s[j].order() <= n_here);
        let fully_centralized = class.iter().all(|&j| self.0.c_s[j].order() <= c_here);
        let centric = class
            .iter()
            .all(|&j| self.0.subgroups[j].contains_group(self.0.c_s[j].group()));
        let aut = self.aut_data(idx);
        let radical = p_core(&aut.aut, self.0.p)
            .expect("p-core of a small group")
            .same_element_set(&aut.inn);
        let essential = centric && has_strongly_p_embedded(&aut.out, self.0.p);
        let flags = ClassifyFlags {
            fully_normalized,
            fully_centralized,
            centric,
            radical,
            essential,
        };
        self.0.flags_cache.lock().unwrap().insert(idx, flags);
        flags
    }

    pub fn classify_subgroup(&self, p: &SubgroupRef) -> Result<ClassifyFlags> {
        Ok(self.classify(self.subgroup_index(p.group())?))
    }

    /// Indices of fully normalized F-centric subgroups, ascending.
    pub fn fully_normalized_centric(&self) -> Vec<usize> {
        (0..self.0.subgroups.len())
            .filter(|&i| {
                let f = self.classify(i);
                f.fully_normalized && f.centric
            })
            .collect()
    }

    /// One representative per F-class of centric-radical subgroups, each the
    /// minimal fully normalized member; S's own index comes first.
    pub fn centric_radical_representatives(&self) -> Vec<usize> {
        let mut reps: Vec<usize> = Vec::new();
        let mut seen_classes: HashSet<Vec<usize>> = HashSet::new();
        for idx in 0..self.0.subgroups.len() {
            let flags = self.classify(idx);
            if !(flags.centric && flags.radical) {
                continue;
            }
            let class = self.f_class(idx);
            if !seen_classes.insert(class.clone()) {
                continue;
            }
            let rep = class
                .iter()
                .copied()
                .filter(|&j| self.classify(j).fully_normalized)
                .min()
                .expect("every class has a fully normalized member");
            reps.push(rep);
        }
        let s_idx = self.s_index();
        reps.retain(|&r| r != s_idx);
        reps.sort_by_key(|&r| (self.0.subgroups[r].order(), r));
        let mut ordered = vec![s_idx];
        ordered.extend(reps);
        ordered
    }

    /// Check both saturation axioms, returning a witness on failure.
    pub fn is_saturated(&self) -> SaturationReport {
        // Aut_S(Q) keys per subgroup, for membership tests in the extension axiom
        let nsubs = self.0.subgroups.len();
        let mut aut_s_keys: Vec<HashSet<Vec<Perm>>> = Vec::with_capacity(nsubs);
        for idx in 0..nsubs {
            let mut keys = HashSet::new();
            for n in self.0.n_s[idx].elements() {
                let images: Vec<Perm> = self.0.subgroups[idx]
                    .generators()
                    .iter()
                    .map(|x| x.conjugate_by(n))
                    .collect();
                keys.insert(images);
            }
            aut_s_keys.push(keys);
        }
        for idx in 0..nsubs {
            let flags = self.classify(idx);
            if flags.fully_normalized {
                let aut_f_order = self
                    .hom_to_s(idx)
                    .iter()
                    .filter(|m| self.image_index(&m.key) == idx)
                    .count() as u64;
                let aut_s_order = self.0.n_s[idx].order() / self.0.c_s[idx].order();
                if !flags.fully_centralized || aut_s_order != p_part(aut_f_order, self.0.p) {
                    return SaturationReport {
                        saturated: false,
                        witness: Some(SaturationWitness::SylowAxiom { subgroup: idx }),
                    };
                }
            }
        }
        for idx in 0..nsubs {
            for m in self.hom_to_s(idx).iter() {
                let img_idx = self.image_index(&m.key);
                if !self.classify(img_idx).fully_centralized {
                    continue;
                }
                let table = self.mor_table(&m.key);
                let inv_table: HashMap<&Perm, &Perm> =
                    table.iter().map(|(k, v)| (v, k)).collect();
                // N_φ = {g ∈ N_S(P) | φ c_g φ⁻¹ ∈ Aut_S(φP)}
                let mut n_phi_members = Vec::new();
                for g in self.0.n_s[idx].elements() {
                    let composite: Vec<Perm> = self.0.subgroups[img_idx]
                        .generators()
                        .iter()
                        .map(|y| table[&inv_table[y].conjugate_by(g)].clone())
                        .collect();
                    if aut_s_keys[img_idx].contains(&composite) {
                        n_phi_members.push(g.clone());
                    }
                }
                let n_phi = PermGroup::generate(self.0.s.degree(), n_phi_members)
                    .expect("N_φ is a subgroup");
                let n_phi_idx = self.0.sub_index[&n_phi.element_key()];
                if n_phi_idx == idx {
                    continue; // the morphism extends to itself
                }
                let p_gens = self.0.subgroups[idx].generators();
                let extends = self.hom_to_s(n_phi_idx).iter().any(|cand| {
                    let cand_table = self.mor_table(&cand.key);
                    p_gens.iter().all(|x| cand_table[x] == table[x])
                });
                if !extends {
                    return SaturationReport {
                        saturated: false,
                        witness: Some(SaturationWitness::Extension {
                            subgroup: idx,
                            morphism: m.key.clone(),
                            n_phi: n_phi_idx,
                        }),
                    };
                }
            }
        }
        SaturationReport {
            saturated: true,
            witness: None,
        }
    }

    /// Compare two fusion systems over the same S; a witness morphism is
    /// returned from whichever side owns the extra map.
    pub fn equal(&self, other: &FusionSystem) -> (bool, Option<(MorKey, &'static str)>) {
        assert!(
            self.0.p == other.0.p && self.0.s.same_element_set(&other.0.s),
            "fusion systems must live over the same Sylow group"
        );
        for idx in 0..self.0.subgroups.len() {
            let mine: Vec<MorKey> = self.hom_to_s(idx).iter().map(|m| m.key.clone()).collect();
            let theirs: Vec<MorKey> = other.hom_to_s(idx).iter().map(|m| m.key.clone()).collect();
            if mine != theirs {
                let mine_set: HashSet<&MorKey> = mine.iter().collect();
                let theirs_set: HashSet<&MorKey> = theirs.iter().collect();
                if let Some(k) = mine.iter().find(|k| !theirs_set.contains(k)) {
                    return (false, Some((k.clone(), "left")));
                }
                if let Some(k) = theirs.iter().find(|k| !mine_set.contains(k)) {
                    return (false, Some((k.clone(), "right")));
                }
            }
        }
        (true, None)
    }

    /// Generating morphisms used for stability conditions: the declared set
    /// for generated systems, or all automorphisms of the centric-radical
    /// representatives for realized ones.
    pub fn stability_generators(&self) -> Vec<MorKey> {
        match &self.0.kind {
            FusionKind::Generated { declared } => declared.clone(),
            FusionKind::Realized { .. } => {
                let mut keys = Vec::new();
                for idx in self.centric_radical_representatives() {
                    for m in self.hom_to_s(idx).iter() {
                        if self.image_index(&m.key) == idx {
                            keys.push(m.key.clone());
                        }
                    }
                }
                keys
            }
        }
    }
}

/// Does `out` contain a strongly p-embedded subgroup? Brute force over all
/// subgroups; the outer automorphism groups met here are tiny.
pub fn has_strongly_p_embedded(out: &PermGroup, p: u64) -> bool {
    if out.order() % p != 0 {
        return false;
    }
    let subs = crate::group::all_subgroups_small(out).expect("outer group is small");
    for h in &subs {
        if h.order() % p != 0 || h.order() == out.order() {
            continue;
        }
        let ok = out.elements().iter().all(|g| {
            if h.contains(g) {
                return true;
            }
            // |H ∩ gHg⁻¹| must be prime to p
            let conj = crate::group::conjugate_subgroup(h.group(), g).expect("conjugate");
            let meet = crate::group::intersection(h.group(), &conj).expect("intersection");
            meet.order() % p != 0
        });
        if ok {
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::sylow_p_subgroup;

    fn perm(degree: usize, s: &str) -> Perm {
        Perm::parse_cycles(degree, s).unwrap()
    }

    fn sym3_fusion() -> FusionSystem {
        let g = PermGroup::symmetric(3);
        let s = sylow_p_subgroup(&g, 3).unwrap();
        FusionSystem::realized(&g, &s, 3).unwrap()
    }

    #[test]
    fn fusion_of_sym3_has_two_automorphisms_of_c3() {
        let f = sym3_fusion();
        let s_idx = f.s_index();
        let auts: Vec<_> = f
            .hom_to_s(s_idx)
            .iter()
            .filter(|m| f.image_index(&m.key) == s_idx)
            .cloned()
            .collect();
        assert_eq!(auts.len(), 2);
    }

    #[test]
    fn realized_hom_counts_match_transporter_quotient() {
        let g = PermGroup::symmetric(4);
        let s = sylow_p_subgroup(&g, 2).unwrap();
        let f = FusionSystem::realized(&g, &s, 2).unwrap();
        for p_idx in 0..f.subgroups().len() {
            for q_idx in 0..f.subgroups().len() {
                let p_in_g = SubgroupRef::from_group(&g, f.subgroup(p_idx).group().clone()).unwrap();
                let q_in_g = SubgroupRef::from_group(&g, f.subgroup(q_idx).group().clone()).unwrap();
                let transporter = transporter_set(&g, &p_in_g, &q_in_g).unwrap();
                let c = centralizer(&g, &p_in_g).unwrap();
                assert_eq!(
                    f.hom_keys(p_idx, q_idx).len() as u64,
                    transporter.len() as u64 / c.order(),
                    "P idx {p_idx}, Q idx {q_idx}"
                );
            }
        }
    }

    #[test]
    fn p_group_fusion_is_conjugation_only() {
        let d8 = PermGroup::generate(4, vec![perm(4, "(0 1 2 3)"), perm(4, "(1 3)")]).unwrap();
        let s = SubgroupRef::whole(&d8);
        let f = FusionSystem::realized(&d8, &s, 2).unwrap();
        for idx in 0..f.subgroups().len() {
            let expected: HashSet<Vec<Perm>> = d8
                .elements()
                .iter()
                .map(|e| {
                    f.subgroup(idx)
                        .generators()
                        .iter()
                        .map(|x| x.conjugate_by(e))
                        .collect()
                })
                .collect();
            assert_eq!(f.hom_to_s(idx).len(), expected.len());
        }
    }

    #[test]
    fn generated_by_inversion_equals_sym3_fusion() {
        let c3 = PermGroup::cyclic(3);
        let inv = GroupHom::new(c3.clone(), c3.clone(), vec![perm(3, "(0 2 1)")]).unwrap();
        let gen = FusionSystem::generated(&c3, 3, &[inv]).unwrap();
        let real = sym3_fusion();
        // same S up to the standard 3-point action
        assert_eq!(gen.s().order(), 3);
        let real_on_own_points = FusionSystem::generated(
            real.s(),
            3,
            &[GroupHom::new(
                real.s().clone(),
                real.s().clone(),
                real.s().generators().iter().map(|g| g.inverse()).collect(),
            )
            .unwrap()],
        )
        .unwrap();
        let (eq, _) = real.equal(&real_on_own_points);
        assert!(eq);
        assert_eq!(gen.hom_to_s(gen.s_index()).len(), 2);
    }

    #[test]
    fn trivial_vs_sym3_fusion_differ_with_witness() {
        let f1 = sym3_fusion();
        let triv = FusionSystem::trivial(f1.s(), 3).unwrap();
        let (eq, witness) = f1.equal(&triv);
        assert!(!eq);
        let (key, side) = witness.unwrap();
        assert_eq!(side, "left");
        // the witness is the inversion automorphism
        assert_eq!(key.src, f1.s_index());
    }

    #[test]
    fn classification_on_sym3_times_c3() {
        // S = C3 × C3 inside Σ3 × C3; the second factor is not centric
        let g = PermGroup::generate(
            6,
            vec![perm(6, "(0 1 2)"), perm(6, "(0 1)"), perm(6, "(3 4 5)")],
        )
        .unwrap();
        assert_eq!(g.order(), 18);
        let s = sylow_p_subgroup(&g, 3).unwrap();
        let f = FusionSystem::realized(&g, &s, 3).unwrap();
        let second = f
            .subgroup_index(&PermGroup::generate(6, vec![perm(6, "(3 4 5)")]).unwrap())
            .unwrap();
        let flags = f.classify(second);
        assert!(!flags.centric);
        let s_flags = f.classify(f.s_index());
        assert!(s_flags.fully_normalized && s_flags.centric);
    }

    #[test]
    fn saturation_of_realized_and_generated_systems() {
        assert!(sym3_fusion().is_saturated().saturated);

        let c3 = PermGroup::cyclic(3);
        let inv = GroupHom::new(c3.clone(), c3.clone(), vec![perm(3, "(0 2 1)")]).unwrap();
        let gen = FusionSystem::generated(&c3, 3, &[inv]).unwrap();
        assert!(gen.is_saturated().saturated);
    }

    #[test]
    fn non_saturated_generated_system_over_klein_group() {
        let v4 = PermGroup::generate(4, vec![perm(4, "(0 1)"), perm(4, "(2 3)")]).unwrap();
        let a = PermGroup::generate(4, vec![perm(4, "(0 1)")]).unwrap();
        let phi = GroupHom::new(a, v4.clone(), vec![perm(4, "(2 3)")]).unwrap();
        let f = FusionSystem::generated(&v4, 2, &[phi]).unwrap();
        let report = f.is_saturated();
        assert!(!report.saturated);
        assert!(matches!(
            report.witness,
            Some(SaturationWitness::Extension { .. })
        ));
    }

    #[test]
    fn hom_sets_are_closed_under_restriction() {
        let g = PermGroup::symmetric(4);
        let s = sylow_p_subgroup(&g, 2).unwrap();
        let f = FusionSystem::realized(&g, &s, 2).unwrap();
        for idx in 0..f.subgroups().len() {
            for m in f.hom_to_s(idx).iter() {
                let table = f.mor_table(&m.key);
                for &sub in &f.0.maximals[idx] {
                    let images: Vec<Perm> = f
                        .subgroup(sub)
                        .generators()
                        .iter()
                        .map(|x| table[x].clone())
                        .collect();
                    let restricted = MorKey { src: sub, images };
                    assert!(
                        f.hom_to_s(sub).iter().any(|mm| mm.key == restricted),
                        "restriction escaped the hom set"
                    );
                }
            }
        }
    }

    #[test]
    fn generated_closure_is_order_independent() {
        let v4 = PermGroup::generate(4, vec![perm(4, "(0 1)"), perm(4, "(2 3)")]).unwrap();
        let a = PermGroup::generate(4, vec![perm(4, "(0 1)")]).unwrap();
        let b = PermGroup::generate(4, vec![perm(4, "(2 3)")]).unwrap();
        let phi = GroupHom::new(a, v4.clone(), vec![perm(4, "(2 3)")]).unwrap();
        let swap = GroupHom::new(
            v4.clone(),
            v4.clone(),
            vec![perm(4, "(2 3)"), perm(4, "(0 1)")],
        )
        .unwrap();
        let psi = GroupHom::new(b, v4.clone(), vec![perm(4, "(0 1)")]).unwrap();
        let f1 = FusionSystem::generated(&v4, 2, &[phi.clone(), swap.clone(), psi.clone()]).unwrap();
        let f2 = FusionSystem::generated(&v4, 2, &[psi, phi, swap]).unwrap();
        let (eq, _) = f1.equal(&f2);
        assert!(eq);
    }
}
