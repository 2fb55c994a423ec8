//! Finite permutation groups by exhaustive closure: enumeration, subgroup
//! machinery, centralizers/normalizers/transporters, Sylow subgroups,
//! abelianization ranks, p-perfect cores, and coset quotients.
//!
//! Everything here is exact. Groups are capped (default 10^6 elements) and all
//! orderings are lexicographic on permutation images so results are
//! byte-reproducible.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, OnceLock};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::perm::Perm;

/// Default cap on group order for exhaustive closure.
pub const DEFAULT_ORDER_CAP: usize = 1_000_000;

/// Key identifying a subgroup by its full, sorted element list.
pub type ElementKey = Vec<Perm>;

struct Elements {
    sorted: Vec<Perm>,
    index: HashMap<Perm, u32>,
    /// `bfs[i]` is `Some((parent, gen))` meaning `sorted[i] = sorted[parent] ∘ gens[gen]`.
    bfs: Vec<Option<(u32, u32)>>,
}

struct GroupInner {
    degree: usize,
    generators: Vec<Perm>,
    order_cap: usize,
    elements: OnceLock<Elements>,
}

/// A finitely generated finite permutation group with a materialized element
/// list. Cheap to clone and safe to share across threads.
#[derive(Clone)]
pub struct PermGroup(Arc<GroupInner>);

impl PermGroup {
    pub fn generate(degree: usize, gens: Vec<Perm>) -> Result<PermGroup> {
        PermGroup::generate_with_cap(degree, gens, DEFAULT_ORDER_CAP)
    }

    pub fn generate_with_cap(degree: usize, gens: Vec<Perm>, cap: usize) -> Result<PermGroup> {
        for g in &gens {
            if g.degree() != degree {
                return Err(Error::DegreeMismatch {
                    expected: degree,
                    got: g.degree(),
                });
            }
        }
        let group = PermGroup(Arc::new(GroupInner {
            degree,
            generators: gens,
            order_cap: cap,
            elements: OnceLock::new(),
        }));
        group.materialize()?;
        Ok(group)
    }

    pub fn trivial(degree: usize) -> PermGroup {
        PermGroup::generate(degree, Vec::new()).expect("trivial group")
    }

    pub fn symmetric(n: usize) -> PermGroup {
        if n <= 1 {
            return PermGroup::trivial(n.max(1));
        }
        let cycle = Perm::from_cycles(n, &[(0..n as u16).collect()]).unwrap();
        let swap = Perm::from_cycles(n, &[vec![0, 1]]).unwrap();
        PermGroup::generate(n, vec![cycle, swap]).expect("symmetric group")
    }

    pub fn cyclic(n: usize) -> PermGroup {
        let cycle = Perm::from_cycles(n, &[(0..n as u16).collect()]).unwrap();
        PermGroup::generate(n, vec![cycle]).expect("cyclic group")
    }

    fn materialize(&self) -> Result<&Elements> {
        if let Some(e) = self.0.elements.get() {
            return Ok(e);
        }
        let computed = self.closure()?;
        Ok(self.0.elements.get_or_init(|| computed))
    }

    fn closure(&self) -> Result<Elements> {
        let cap = self.0.order_cap;
        let mut discovery: Vec<Perm> = vec![Perm::identity(self.0.degree)];
        let mut disc_index: HashMap<Perm, u32> = HashMap::new();
        disc_index.insert(discovery[0].clone(), 0);
        let mut disc_parent: Vec<Option<(u32, u32)>> = vec![None];
        let mut head = 0usize;
        while head < discovery.len() {
            let w = discovery[head].clone();
            for (gi, g) in self.0.generators.iter().enumerate() {
                let next = w.compose(g);
                if !disc_index.contains_key(&next) {
                    if discovery.len() >= cap {
                        return Err(Error::OrderCapExceeded { cap });
                    }
                    disc_index.insert(next.clone(), discovery.len() as u32);
                    discovery.push(next);
                    disc_parent.push(Some((head as u32, gi as u32)));
                }
            }
            head += 1;
        }
        let mut sorted = discovery.clone();
        sorted.sort_unstable();
        let mut index = HashMap::with_capacity(sorted.len());
        for (i, p) in sorted.iter().enumerate() {
            index.insert(p.clone(), i as u32);
        }
        let disc_to_sorted: Vec<u32> = discovery.iter().map(|p| index[p]).collect();
        let mut bfs: Vec<Option<(u32, u32)>> = vec![None; sorted.len()];
        for (disc, parent) in disc_parent.iter().enumerate() {
            if let Some((p, g)) = parent {
                bfs[disc_to_sorted[disc] as usize] = Some((disc_to_sorted[*p as usize], *g));
            }
        }
        Ok(Elements { sorted, index, bfs })
    }

    pub fn degree(&self) -> usize {
        self.0.degree
    }

    pub fn generators(&self) -> &[Perm] {
        &self.0.generators
    }

    pub fn order(&self) -> u64 {
        self.materialize().expect("materialized at construction").sorted.len() as u64
    }

    /// All elements, sorted lexicographically by image table.
    pub fn elements(&self) -> &[Perm] {
        &self.materialize().expect("materialized at construction").sorted
    }

    pub fn contains(&self, p: &Perm) -> bool {
        p.degree() == self.0.degree
            && self
                .materialize()
                .expect("materialized at construction")
                .index
                .contains_key(p)
    }

    pub fn element_index(&self, p: &Perm) -> Option<usize> {
        self.materialize()
            .expect("materialized at construction")
            .index
            .get(p)
            .map(|&i| i as usize)
    }

    pub fn identity(&self) -> Perm {
        Perm::identity(self.0.degree)
    }

    /// Word in the generators whose left-to-right composition is `p`.
    pub fn word_for(&self, p: &Perm) -> Option<Vec<usize>> {
        let elements = self.materialize().expect("materialized at construction");
        let mut idx = *elements.index.get(p)? as usize;
        let mut word = Vec::new();
        while let Some((parent, gen)) = elements.bfs[idx] {
            word.push(gen as usize);
            idx = parent as usize;
        }
        word.reverse();
        Some(word)
    }

    pub fn is_abelian(&self) -> bool {
        let gens = self.generators();
        gens.iter()
            .all(|a| gens.iter().all(|b| a.compose(b) == b.compose(a)))
    }

    /// True when every element of `other` lies in `self`.
    pub fn contains_group(&self, other: &PermGroup) -> bool {
        other.generators().iter().all(|g| self.contains(g))
    }

    pub fn same_element_set(&self, other: &PermGroup) -> bool {
        self.order() == other.order() && self.contains_group(other)
    }

    pub fn element_key(&self) -> ElementKey {
        self.elements().to_vec()
    }

    /// Deterministic small generating sequence: scan elements in order and keep
    /// those that enlarge the generated subgroup.
    pub fn minimal_generating_set(&self) -> Vec<Perm> {
        minimal_gens_of(self.degree(), self.elements())
    }
}

impl fmt::Debug for PermGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "PermGroup(degree {}, order {}, gens [",
            self.degree(),
            self.order()
        )?;
        for (i, g) in self.generators().iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{g}")?;
        }
        write!(f, "])")
    }
}

pub(crate) fn minimal_gens_of(degree: usize, elements: &[Perm]) -> Vec<Perm> {
    let mut gens: Vec<Perm> = Vec::new();
    let mut closure: Vec<Perm> = vec![Perm::identity(degree)];
    let mut closed: HashMap<Perm, ()> = HashMap::new();
    closed.insert(Perm::identity(degree), ());
    for e in elements {
        if closed.contains_key(e) {
            continue;
        }
        gens.push(e.clone());
        // regenerate the closure with the enlarged generating set
        closure = vec![Perm::identity(degree)];
        closed.clear();
        closed.insert(Perm::identity(degree), ());
        let mut head = 0;
        while head < closure.len() {
            let w = closure[head].clone();
            for g in &gens {
                let n = w.compose(g);
                if !closed.contains_key(&n) {
                    closed.insert(n.clone(), ());
                    closure.push(n);
                }
            }
            head += 1;
        }
        if closure.len() == elements.len() {
            break;
        }
    }
    gens
}

/// A subgroup of a fixed parent group, carrying both the parent handle and its
/// own materialized group.
#[derive(Clone)]
pub struct SubgroupRef {
    parent: PermGroup,
    group: PermGroup,
}

impl SubgroupRef {
    pub fn new(parent: &PermGroup, gens: Vec<Perm>) -> Result<SubgroupRef> {
        for g in &gens {
            if !parent.contains(g) {
                return Err(Error::NotInParent {
                    element: g.to_string(),
                });
            }
        }
        let group = PermGroup::generate_with_cap(parent.degree(), gens, parent.0.order_cap)?;
        Ok(SubgroupRef {
            parent: parent.clone(),
            group,
        })
    }

    pub fn from_group(parent: &PermGroup, group: PermGroup) -> Result<SubgroupRef> {
        for g in group.generators() {
            if !parent.contains(g) {
                return Err(Error::NotInParent {
                    element: g.to_string(),
                });
            }
        }
        Ok(SubgroupRef {
            parent: parent.clone(),
            group,
        })
    }

    pub fn whole(parent: &PermGroup) -> SubgroupRef {
        SubgroupRef {
            parent: parent.clone(),
            group: parent.clone(),
        }
    }

    pub fn trivial(parent: &PermGroup) -> SubgroupRef {
        SubgroupRef {
            parent: parent.clone(),
            group: PermGroup::trivial(parent.degree()),
        }
    }

    pub fn parent(&self) -> &PermGroup {
        &self.parent
    }

    pub fn group(&self) -> &PermGroup {
        &self.group
    }
}

impl std::ops::Deref for SubgroupRef {
    type Target = PermGroup;
    fn deref(&self) -> &PermGroup {
        &self.group
    }
}

impl fmt::Debug for SubgroupRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SubgroupRef(order {} of {})", self.order(), self.parent.order())
    }
}

/// `C_G(P)`: everything in `G` commuting with all of `P`.
pub fn centralizer(g: &PermGroup, p: &SubgroupRef) -> Result<SubgroupRef> {
    require_subgroup(g, p)?;
    if p.order() == 1 {
        return Ok(SubgroupRef::whole(g));
    }
    let pgens = p.generators();
    let members: Vec<Perm> = g
        .elements()
        .iter()
        .filter(|x| pgens.iter().all(|h| x.compose(h) == h.compose(*x)))
        .cloned()
        .collect();
    let gens = minimal_gens_of(g.degree(), &members);
    SubgroupRef::new(g, gens)
}

/// `N_G(P)`: everything in `G` conjugating `P` onto itself.
pub fn normalizer(g: &PermGroup, p: &SubgroupRef) -> Result<SubgroupRef> {
    require_subgroup(g, p)?;
    if p.order() == 1 || p.same_element_set(g) {
        return Ok(SubgroupRef::whole(g));
    }
    let pgens = p.generators();
    let members: Vec<Perm> = g
        .elements()
        .iter()
        .filter(|x| pgens.iter().all(|h| p.contains(&h.conjugate_by(x))))
        .cloned()
        .collect();
    let gens = minimal_gens_of(g.degree(), &members);
    SubgroupRef::new(g, gens)
}

/// The transporter set `N_G(P,Q) = {g ∈ G | gPg⁻¹ ≤ Q}`, in element order.
pub fn transporter_set(g: &PermGroup, p: &SubgroupRef, q: &SubgroupRef) -> Result<Vec<Perm>> {
    require_subgroup(g, p)?;
    require_subgroup(g, q)?;
    if p.order() > q.order() {
        return Ok(Vec::new());
    }
    let pgens = p.generators();
    Ok(g.elements()
        .iter()
        .filter(|x| pgens.iter().all(|h| q.contains(&h.conjugate_by(x))))
        .cloned()
        .collect())
}

fn require_subgroup(g: &PermGroup, p: &SubgroupRef) -> Result<()> {
    if !g.contains_group(p.group()) {
        return Err(Error::NotContained {
            sub: format!("subgroup of order {}", p.order()),
            sup: format!("group of order {}", g.order()),
        });
    }
    Ok(())
}

/// Normal closure of `seeds` in `g`.
pub fn normal_closure(g: &PermGroup, seeds: &[Perm]) -> Result<PermGroup> {
    let mut gens: Vec<Perm> = seeds
        .iter()
        .filter(|s| !s.is_identity())
        .cloned()
        .collect();
    gens.sort_unstable();
    gens.dedup();
    let mut closure = PermGroup::generate_with_cap(g.degree(), gens.clone(), g.0.order_cap)?;
    loop {
        let mut grew = false;
        for h in closure.generators().to_vec() {
            for c in g.generators() {
                let conj = h.conjugate_by(c);
                if !closure.contains(&conj) {
                    gens.push(conj);
                    grew = true;
                }
            }
        }
        if !grew {
            return Ok(closure);
        }
        closure = PermGroup::generate_with_cap(g.degree(), gens.clone(), g.0.order_cap)?;
    }
}

/// Derived subgroup `[G,G]`: normal closure of the generator commutators.
pub fn derived_subgroup(g: &PermGroup) -> Result<PermGroup> {
    let gens = g.generators();
    let mut seeds = Vec::new();
    for a in gens {
        for b in gens {
            let comm = a
                .compose(b)
                .compose(&a.inverse())
                .compose(&b.inverse());
            if !comm.is_identity() {
                seeds.push(comm);
            }
        }
    }
    normal_closure(g, &seeds)
}

/// The subgroup `⟨[G,G], G^p⟩`, i.e. the kernel of the largest elementary
/// abelian p-quotient.
pub fn mod_p_derived(g: &PermGroup, p: u64) -> Result<PermGroup> {
    let derived = derived_subgroup(g)?;
    let mut gens: Vec<Perm> = derived.generators().to_vec();
    for x in g.generators() {
        let xp = x.pow(p as i64);
        if !xp.is_identity() {
            gens.push(xp);
        }
    }
    PermGroup::generate_with_cap(g.degree(), gens, g.0.order_cap)
}

/// `dim_𝔽p G/([G,G]·G^p)`.
pub fn abelianization_p_rank(g: &PermGroup, p: u64) -> Result<usize> {
    let k = mod_p_derived(g, p)?;
    let quotient_order = g.order() / k.order();
    let mut rank = 0;
    let mut q = quotient_order;
    while q > 1 {
        debug_assert_eq!(q % p, 0, "mod-p abelianization must be a p-group");
        q /= p;
        rank += 1;
    }
    Ok(rank)
}

/// Largest p-perfect subgroup: the limit of `K ↦ ⟨[K,K], K^p⟩` from `G`.
pub fn p_perfect_core(g: &PermGroup, p: u64) -> Result<PermGroup> {
    let mut k = g.clone();
    loop {
        let next = mod_p_derived(&k, p)?;
        if next.order() == k.order() {
            return Ok(k);
        }
        k = next;
    }
}

pub fn p_part(mut n: u64, p: u64) -> u64 {
    let mut part = 1;
    while n % p == 0 {
        part *= p;
        n /= p;
    }
    part
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// A Sylow p-subgroup, grown greedily: while `|H|` is below the p-part, some
/// element of `N_G(H) \ H` has its p-th power in `H` and extends `H` by index p.
/// The seed shuffles the candidate order; seed 0 keeps the element order.
pub fn sylow_p_subgroup_seeded(g: &PermGroup, p: u64, seed: u64) -> Result<SubgroupRef> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let target = p_part(g.order(), p);
    let mut h = SubgroupRef::trivial(g);
    while h.order() < target {
        let n = normalizer(g, &h)?;
        let mut candidates: Vec<Perm> = n
            .elements()
            .iter()
            .filter(|x| !h.contains(x) && h.contains(&x.pow(p as i64)))
            .cloned()
            .collect();
        if seed != 0 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            candidates.shuffle(&mut rng);
        }
        let x = candidates
            .first()
            .expect("a non-Sylow p-subgroup extends inside its normalizer");
        let mut gens = h.generators().to_vec();
        gens.push(x.clone());
        h = SubgroupRef::new(g, gens)?;
    }
    Ok(h)
}

pub fn sylow_p_subgroup(g: &PermGroup, p: u64) -> Result<SubgroupRef> {
    sylow_p_subgroup_seeded(g, p, 0)
}

/// All subgroups of a finite p-group, each exactly once, sorted by order then
/// by element list. Works level by level: every subgroup of order p^{k+1} is a
/// cyclic extension of a normal subgroup of order p^k.
pub fn enumerate_subgroups_p_group(s: &PermGroup, p: u64) -> Result<Vec<SubgroupRef>> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if p_part(s.order(), p) != s.order() {
        return Err(Error::NotPGroup {
            order: s.order(),
            p,
        });
    }
    let trivial = SubgroupRef::trivial(s);
    let mut seen: HashMap<ElementKey, SubgroupRef> = HashMap::new();
    seen.insert(trivial.element_key(), trivial.clone());
    let mut current = vec![trivial];
    while !current.is_empty() {
        let mut next: Vec<SubgroupRef> = Vec::new();
        for h in &current {
            let n = normalizer(s, h)?;
            for x in n.elements() {
                if h.contains(x) || !h.contains(&x.pow(p as i64)) {
                    continue;
                }
                let mut gens = h.generators().to_vec();
                gens.push(x.clone());
                let k = SubgroupRef::new(s, gens)?;
                debug_assert_eq!(k.order(), h.order() * p);
                let key = k.element_key();
                if !seen.contains_key(&key) {
                    seen.insert(key, k.clone());
                    next.push(k);
                }
            }
        }
        current = next;
    }
    let mut all: Vec<SubgroupRef> = seen.into_values().collect();
    all.sort_by(|a, b| {
        a.order()
            .cmp(&b.order())
            .then_with(|| a.elements().cmp(b.elements()))
    });
    Ok(all)
}

/// Brute-force enumeration of all subgroups of a small group by closure growth.
pub fn all_subgroups_small(g: &PermGroup) -> Result<Vec<SubgroupRef>> {
    let trivial = SubgroupRef::trivial(g);
    let mut seen: HashMap<ElementKey, SubgroupRef> = HashMap::new();
    seen.insert(trivial.element_key(), trivial.clone());
    let mut worklist = vec![trivial];
    while let Some(h) = worklist.pop() {
        for x in g.elements() {
            if h.contains(x) {
                continue;
            }
            let mut gens = h.generators().to_vec();
            gens.push(x.clone());
            let k = SubgroupRef::new(g, gens)?;
            let key = k.element_key();
            if !seen.contains_key(&key) {
                seen.insert(key, k.clone());
                worklist.push(k);
            }
        }
    }
    let mut all: Vec<SubgroupRef> = seen.into_values().collect();
    all.sort_by(|a, b| {
        a.order()
            .cmp(&b.order())
            .then_with(|| a.elements().cmp(b.elements()))
    });
    Ok(all)
}

pub fn is_normal_in(g: &PermGroup, h: &PermGroup) -> bool {
    g.contains_group(h)
        && g.generators()
            .iter()
            .all(|c| h.generators().iter().all(|x| h.contains(&x.conjugate_by(c))))
}

pub fn center(g: &PermGroup) -> Result<PermGroup> {
    let gens = g.generators();
    let members: Vec<Perm> = g
        .elements()
        .iter()
        .filter(|x| gens.iter().all(|h| x.compose(h) == h.compose(*x)))
        .cloned()
        .collect();
    PermGroup::generate_with_cap(g.degree(), minimal_gens_of(g.degree(), &members), g.0.order_cap)
}

pub fn intersection(a: &PermGroup, b: &PermGroup) -> Result<PermGroup> {
    let (small, big) = if a.order() <= b.order() { (a, b) } else { (b, a) };
    let members: Vec<Perm> = small
        .elements()
        .iter()
        .filter(|x| big.contains(x))
        .cloned()
        .collect();
    PermGroup::generate_with_cap(
        a.degree(),
        minimal_gens_of(a.degree(), &members),
        a.0.order_cap,
    )
}

pub fn conjugate_subgroup(h: &PermGroup, by: &Perm) -> Result<PermGroup> {
    let gens = h
        .generators()
        .iter()
        .map(|g| g.conjugate_by(by))
        .collect::<Vec<_>>();
    PermGroup::generate_with_cap(h.degree(), gens, h.0.order_cap)
}

/// `O_p(G)`: the intersection of the conjugates of one Sylow p-subgroup.
pub fn p_core(g: &PermGroup, p: u64) -> Result<PermGroup> {
    let sylow = sylow_p_subgroup(g, p)?;
    let mut orbit: Vec<PermGroup> = vec![sylow.group().clone()];
    let mut keys: HashMap<ElementKey, ()> = HashMap::new();
    keys.insert(sylow.element_key(), ());
    let mut head = 0;
    while head < orbit.len() {
        let current = orbit[head].clone();
        for c in g.generators() {
            let conj = conjugate_subgroup(&current, c)?;
            let key = conj.element_key();
            if !keys.contains_key(&key) {
                keys.insert(key, ());
                orbit.push(conj);
            }
        }
        head += 1;
    }
    let mut core = orbit[0].clone();
    for other in &orbit[1..] {
        core = intersection(&core, other)?;
        if core.order() == 1 {
            break;
        }
    }
    Ok(core)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn perm(degree: usize, s: &str) -> Perm {
        Perm::parse_cycles(degree, s).unwrap()
    }

    #[test]
    fn generate_sym3_from_transpositions() {
        let g = PermGroup::generate(3, vec![perm(3, "(0 1)"), perm(3, "(1 2)")]).unwrap();
        assert_eq!(g.order(), 6);
        assert!(g.elements().windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn empty_generation_is_trivial() {
        let g = PermGroup::generate(5, vec![]).unwrap();
        assert_eq!(g.order(), 1);
    }

    #[test]
    fn order_cap_is_enforced() {
        let err = PermGroup::generate_with_cap(
            5,
            vec![perm(5, "(0 1 2 3 4)"), perm(5, "(0 1)")],
            20,
        )
        .unwrap_err();
        assert!(matches!(err, Error::OrderCapExceeded { cap: 20 }));
    }

    #[test]
    fn words_reconstruct_elements() {
        let g = PermGroup::symmetric(4);
        for e in g.elements() {
            let word = g.word_for(e).unwrap();
            let mut acc = Perm::identity(4);
            for i in word {
                acc = acc.compose(&g.generators()[i]);
            }
            assert_eq!(&acc, e);
        }
    }

    #[test]
    fn centralizer_of_three_cycle_in_sym3() {
        let g = PermGroup::symmetric(3);
        let p = SubgroupRef::new(&g, vec![perm(3, "(0 1 2)")]).unwrap();
        let c = centralizer(&g, &p).unwrap();
        assert_eq!(c.order(), 3);
        assert!(c.same_element_set(p.group()));
    }

    #[test]
    fn centralizer_of_trivial_is_whole_group() {
        let g = PermGroup::symmetric(4);
        let p = SubgroupRef::trivial(&g);
        assert_eq!(centralizer(&g, &p).unwrap().order(), 24);
    }

    #[test]
    fn centralizer_of_center_of_d8() {
        let d8 = PermGroup::generate(4, vec![perm(4, "(0 1 2 3)"), perm(4, "(1 3)")]).unwrap();
        assert_eq!(d8.order(), 8);
        let z = center(&d8).unwrap();
        assert_eq!(z.order(), 2);
        let zref = SubgroupRef::from_group(&d8, z).unwrap();
        assert_eq!(centralizer(&d8, &zref).unwrap().order(), 8);
    }

    #[test]
    fn normalizer_examples() {
        // Klein four-group acting regularly inside Σ4 is normal.
        let g = PermGroup::symmetric(4);
        let v = SubgroupRef::new(&g, vec![perm(4, "(0 1)(2 3)"), perm(4, "(0 2)(1 3)")]).unwrap();
        assert_eq!(normalizer(&g, &v).unwrap().order(), 24);

        let s3 = PermGroup::symmetric(3);
        let p = SubgroupRef::new(&s3, vec![perm(3, "(0 1)")]).unwrap();
        assert_eq!(normalizer(&s3, &p).unwrap().order(), 2);
        assert_eq!(normalizer(&s3, &SubgroupRef::whole(&s3)).unwrap().order(), 6);
    }

    #[test]
    fn transporter_set_examples() {
        let s3 = PermGroup::symmetric(3);
        let p = SubgroupRef::new(&s3, vec![perm(3, "(0 1)")]).unwrap();
        let t = transporter_set(&s3, &p, &p).unwrap();
        assert_eq!(t.len(), 2);
        assert!(t.contains(&Perm::identity(3)) && t.contains(&perm(3, "(0 1)")));

        let trivial = SubgroupRef::trivial(&s3);
        assert_eq!(transporter_set(&s3, &trivial, &p).unwrap().len(), 6);
        assert!(transporter_set(&s3, &SubgroupRef::whole(&s3), &p)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn transporter_of_p_p_is_normalizer() {
        let g = PermGroup::symmetric(4);
        for gens in [vec![perm(4, "(0 1)")], vec![perm(4, "(0 1 2 3)")], vec![perm(4, "(0 1 2)")]] {
            let p = SubgroupRef::new(&g, gens).unwrap();
            let t = transporter_set(&g, &p, &p).unwrap();
            let n = normalizer(&g, &p).unwrap();
            assert_eq!(t.len() as u64, n.order());
            assert!(t.iter().all(|x| n.contains(x)));
        }
    }

    #[test]
    fn abelianization_ranks() {
        let d8 = PermGroup::generate(4, vec![perm(4, "(0 1 2 3)"), perm(4, "(1 3)")]).unwrap();
        assert_eq!(abelianization_p_rank(&d8, 2).unwrap(), 2);
        let s3 = PermGroup::symmetric(3);
        assert_eq!(abelianization_p_rank(&s3, 3).unwrap(), 0);
        assert_eq!(abelianization_p_rank(&s3, 2).unwrap(), 1);
        let c9 = PermGroup::cyclic(9);
        assert_eq!(abelianization_p_rank(&c9, 3).unwrap(), 1);
    }

    #[test]
    fn p_perfect_cores() {
        let s3 = PermGroup::symmetric(3);
        let core = p_perfect_core(&s3, 2).unwrap();
        assert_eq!(core.order(), 3);
        assert!(is_normal_in(&s3, &core));
        assert_eq!(abelianization_p_rank(&core, 2).unwrap(), 0);

        let c3 = PermGroup::cyclic(3);
        assert_eq!(p_perfect_core(&c3, 3).unwrap().order(), 1);

        let a5 = PermGroup::generate(5, vec![perm(5, "(0 1 2 3 4)"), perm(5, "(0 1 2)")]).unwrap();
        assert_eq!(a5.order(), 60);
        assert_eq!(p_perfect_core(&a5, 2).unwrap().order(), 60);
    }

    #[test]
    fn sylow_subgroups() {
        let s3 = PermGroup::symmetric(3);
        assert_eq!(sylow_p_subgroup(&s3, 3).unwrap().order(), 3);
        assert_eq!(sylow_p_subgroup(&s3, 2).unwrap().order(), 2);

        let d8 = PermGroup::generate(4, vec![perm(4, "(0 1 2 3)"), perm(4, "(1 3)")]).unwrap();
        let syl = sylow_p_subgroup(&d8, 2).unwrap();
        assert_eq!(syl.order(), 8);

        let s4 = PermGroup::symmetric(4);
        assert_eq!(sylow_p_subgroup(&s4, 2).unwrap().order(), 8);
        assert_eq!(sylow_p_subgroup(&s4, 3).unwrap().order(), 3);
    }

    #[test]
    fn subgroups_of_p_groups() {
        let c2 = PermGroup::cyclic(2);
        assert_eq!(enumerate_subgroups_p_group(&c2, 2).unwrap().len(), 2);

        let d8 = PermGroup::generate(4, vec![perm(4, "(0 1 2 3)"), perm(4, "(1 3)")]).unwrap();
        assert_eq!(enumerate_subgroups_p_group(&d8, 2).unwrap().len(), 10);

        let c3c3 = PermGroup::generate(6, vec![perm(6, "(0 1 2)"), perm(6, "(3 4 5)")]).unwrap();
        assert_eq!(enumerate_subgroups_p_group(&c3c3, 3).unwrap().len(), 6);

        let s3 = PermGroup::symmetric(3);
        assert!(enumerate_subgroups_p_group(&s3, 2).is_err());
    }

    #[test]
    fn p_core_of_sym4_at_2_is_klein() {
        let s4 = PermGroup::symmetric(4);
        let core = p_core(&s4, 2).unwrap();
        assert_eq!(core.order(), 4);
        assert!(is_normal_in(&s4, &core));
    }

    #[test]
    fn quotient_like_ops_are_deterministic() {
        let g = PermGroup::symmetric(4);
        let a = sylow_p_subgroup(&g, 2).unwrap();
        let b = sylow_p_subgroup(&g, 2).unwrap();
        assert_eq!(a.elements(), b.elements());
    }
}
