//! Homomorphisms between finite permutation groups, verified exhaustively on
//! the domain's element list, plus coset-quotient realizations built on them.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::group::{is_normal_in, minimal_gens_of, PermGroup};
use crate::perm::Perm;

/// A homomorphism given by images of the domain's generators.
///
/// Construction walks the whole domain and checks `f(w·g) = f(w)·f(g)` for
/// every element `w` and generator `g`, which verifies the extension on the
/// full multiplication structure; the element-wise image table is kept.
#[derive(Clone)]
pub struct GroupHom {
    domain: PermGroup,
    codomain: PermGroup,
    gen_images: Vec<Perm>,
    table: Arc<HashMap<Perm, Perm>>,
    injective: bool,
}

impl GroupHom {
    pub fn new(domain: PermGroup, codomain: PermGroup, gen_images: Vec<Perm>) -> Result<GroupHom> {
        if gen_images.len() != domain.generators().len() {
            return Err(Error::NotAHomomorphism(format!(
                "expected {} generator images, got {}",
                domain.generators().len(),
                gen_images.len()
            )));
        }
        for img in &gen_images {
            if !codomain.contains(img) {
                return Err(Error::NotAHomomorphism(format!(
                    "image {img} lies outside the codomain"
                )));
            }
        }
        let mut table: HashMap<Perm, Perm> = HashMap::with_capacity(domain.order() as usize);
        table.insert(domain.identity(), codomain.identity());
        // breadth-first over the domain; every (element, generator) product is
        // visited, so a consistent table is a full homomorphism certificate
        let mut queue: Vec<Perm> = vec![domain.identity()];
        let mut head = 0;
        while head < queue.len() {
            let w = queue[head].clone();
            let fw = table[&w].clone();
            for (gi, g) in domain.generators().iter().enumerate() {
                let wg = w.compose(g);
                let fwg = fw.compose(&gen_images[gi]);
                match table.get(&wg) {
                    Some(existing) => {
                        if *existing != fwg {
                            return Err(Error::NotAHomomorphism(format!(
                                "inconsistent image at {wg}"
                            )));
                        }
                    }
                    None => {
                        table.insert(wg.clone(), fwg);
                        queue.push(wg);
                    }
                }
            }
            head += 1;
        }
        let mut image_count: HashMap<&Perm, ()> = HashMap::new();
        for v in table.values() {
            image_count.insert(v, ());
        }
        let injective = image_count.len() == table.len();
        Ok(GroupHom {
            domain,
            codomain,
            gen_images,
            table: Arc::new(table),
            injective,
        })
    }

    /// Identity map of a group onto itself.
    pub fn identity(group: &PermGroup) -> GroupHom {
        GroupHom::new(group.clone(), group.clone(), group.generators().to_vec())
            .expect("identity is a homomorphism")
    }

    /// Inclusion of a subgroup into an ambient group of the same degree.
    pub fn inclusion(sub: &PermGroup, ambient: &PermGroup) -> Result<GroupHom> {
        GroupHom::new(sub.clone(), ambient.clone(), sub.generators().to_vec())
    }

    pub fn domain(&self) -> &PermGroup {
        &self.domain
    }

    pub fn codomain(&self) -> &PermGroup {
        &self.codomain
    }

    pub fn gen_images(&self) -> &[Perm] {
        &self.gen_images
    }

    pub fn is_injective(&self) -> bool {
        self.injective
    }

    pub fn apply(&self, g: &Perm) -> Perm {
        self.table[g].clone()
    }

    pub fn try_apply(&self, g: &Perm) -> Option<Perm> {
        self.table.get(g).cloned()
    }

    pub fn image(&self) -> Result<PermGroup> {
        PermGroup::generate(self.codomain.degree(), self.gen_images.clone())
    }

    pub fn kernel(&self) -> Result<PermGroup> {
        let members: Vec<Perm> = self
            .domain
            .elements()
            .iter()
            .filter(|g| self.table[*g].is_identity())
            .cloned()
            .collect();
        PermGroup::generate(
            self.domain.degree(),
            minimal_gens_of(self.domain.degree(), &members),
        )
    }

    /// `then ∘ self`: apply this map first.
    pub fn then(&self, then: &GroupHom) -> Result<GroupHom> {
        let images = self
            .gen_images
            .iter()
            .map(|g| {
                then.try_apply(g).ok_or_else(|| {
                    Error::NotAHomomorphism(format!("image {g} outside the middle domain"))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        GroupHom::new(self.domain.clone(), then.codomain().clone(), images)
    }

    /// Inverse of a bijective map onto its codomain.
    pub fn inverse(&self) -> Result<GroupHom> {
        if !self.injective || self.table.len() as u64 != self.codomain.order() {
            return Err(Error::NotInvertible(format!(
                "map of order {} domain onto order {} codomain",
                self.domain.order(),
                self.codomain.order()
            )));
        }
        let images = self
            .codomain
            .generators()
            .iter()
            .map(|g| {
                self.table
                    .iter()
                    .find(|(_, v)| *v == g)
                    .map(|(k, _)| k.clone())
                    .expect("surjective map")
            })
            .collect();
        GroupHom::new(self.codomain.clone(), self.domain.clone(), images)
    }

    /// Restriction to a subgroup of the domain (same degree).
    pub fn restrict(&self, sub: &PermGroup) -> Result<GroupHom> {
        let images = sub
            .generators()
            .iter()
            .map(|g| {
                self.try_apply(g).ok_or_else(|| Error::NotInParent {
                    element: g.to_string(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        GroupHom::new(sub.clone(), self.codomain.clone(), images)
    }
}

impl fmt::Debug for GroupHom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "GroupHom(|dom| {}, |cod| {}, inj {})",
            self.domain.order(),
            self.codomain.order(),
            self.injective
        )
    }
}

/// Realize `G/N` faithfully on the left cosets of a normal subgroup `N`,
/// returning the quotient group and the projection. Cosets are numbered by
/// their minimal element so the realization is deterministic.
pub fn quotient_by_normal(g: &PermGroup, n: &PermGroup) -> Result<(PermGroup, GroupHom)> {
    if !is_normal_in(g, n) {
        return Err(Error::NotNormal);
    }
    if n.order() == 1 {
        // quotient by the trivial subgroup: keep the original action
        let q = PermGroup::generate(g.degree(), g.generators().to_vec())?;
        return Ok((q.clone(), GroupHom::identity(&q)));
    }
    let elements = g.elements();
    let mut coset_of: HashMap<&Perm, u16> = HashMap::with_capacity(elements.len());
    let mut reps: Vec<Perm> = Vec::new();
    for e in elements {
        if coset_of.contains_key(e) {
            continue;
        }
        let id = reps.len() as u16;
        for x in n.elements() {
            let member = e.compose(x);
            let member_ref = elements
                .get(g.element_index(&member).expect("closed under multiplication"))
                .unwrap();
            coset_of.insert(member_ref, id);
        }
        reps.push(e.clone());
    }
    let degree = reps.len();
    let gen_images = g
        .generators()
        .iter()
        .map(|gen| {
            let images = reps
                .iter()
                .map(|r| coset_of[&gen.compose(r)])
                .collect::<Vec<u16>>();
            Perm::from_images(images)
        })
        .collect::<Result<Vec<_>>>()?;
    let quotient = PermGroup::generate(degree, gen_images.clone())?;
    let projection = GroupHom::new(g.clone(), quotient.clone(), gen_images)?;
    Ok((quotient, projection))
}

/// Conjugation action of `G` on its Sylow p-subgroups, with the subgroups in
/// key order. Faithful transitive actions of the right order give explicit
/// symmetric-group identifications.
pub fn action_on_sylow_subgroups(g: &PermGroup, p: u64) -> Result<(usize, GroupHom)> {
    let sylow = crate::group::sylow_p_subgroup(g, p)?;
    let mut orbit: Vec<(crate::group::ElementKey, PermGroup)> =
        vec![(sylow.element_key(), sylow.group().clone())];
    let mut head = 0;
    while head < orbit.len() {
        let current = orbit[head].1.clone();
        for c in g.generators() {
            let conj = crate::group::conjugate_subgroup(&current, c)?;
            let key = conj.element_key();
            if !orbit.iter().any(|(k, _)| *k == key) {
                orbit.push((key, conj));
            }
        }
        head += 1;
    }
    orbit.sort_by(|a, b| a.0.cmp(&b.0));
    let count = orbit.len();
    let key_index: HashMap<&crate::group::ElementKey, u16> = orbit
        .iter()
        .enumerate()
        .map(|(i, (k, _))| (k, i as u16))
        .collect();
    let gen_images = g
        .generators()
        .iter()
        .map(|c| {
            let images = orbit
                .iter()
                .map(|(_, h)| {
                    let conj = crate::group::conjugate_subgroup(h, c)?;
                    Ok(key_index[&conj.element_key()])
                })
                .collect::<Result<Vec<u16>>>()?;
            Perm::from_images(images)
        })
        .collect::<Result<Vec<_>>>()?;
    let image = PermGroup::generate(count, gen_images.clone())?;
    let hom = GroupHom::new(g.clone(), image, gen_images)?;
    Ok((count, hom))
}

/// Look for a dihedral pair (r of order 4, s an involution outside ⟨r⟩ with
/// s·r·s⁻¹ = r⁻¹) certifying a group of order 8 is D₈.
pub fn dihedral8_witness(g: &PermGroup) -> Option<(Perm, Perm)> {
    if g.order() != 8 {
        return None;
    }
    let rotations: Vec<&Perm> = g.elements().iter().filter(|x| x.order() == 4).collect();
    for r in rotations {
        let r_cyc: Vec<Perm> = (0..4).map(|k| r.pow(k)).collect();
        for s in g.elements() {
            if s.order() == 2 && !r_cyc.contains(s) && r.conjugate_by(s) == r.inverse() {
                return Some((r.clone(), s.clone()));
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{abelianization_p_rank, sylow_p_subgroup};

    fn perm(degree: usize, s: &str) -> Perm {
        Perm::parse_cycles(degree, s).unwrap()
    }

    #[test]
    fn sign_map_of_sym3() {
        let s3 = PermGroup::symmetric(3);
        let c2 = PermGroup::cyclic(2);
        // generators of symmetric(3) are the 3-cycle and a transposition
        let sign = GroupHom::new(
            s3.clone(),
            c2.clone(),
            vec![Perm::identity(2), perm(2, "(0 1)")],
        )
        .unwrap();
        assert!(!sign.is_injective());
        assert_eq!(sign.kernel().unwrap().order(), 3);
        assert_eq!(sign.image().unwrap().order(), 2);
    }

    #[test]
    fn rejects_non_homomorphism() {
        let c4 = PermGroup::cyclic(4);
        let c2 = PermGroup::cyclic(2);
        // a generator of order 4 cannot map to an element whose square is not
        // the image of the square: order 4 → order 2 is fine, so build a bad
        // one on the Klein group instead
        let v4 = PermGroup::generate(4, vec![perm(4, "(0 1)"), perm(4, "(2 3)")]).unwrap();
        let bad = GroupHom::new(
            v4,
            c4.clone(),
            vec![perm(4, "(0 1 2 3)"), Perm::identity(4)],
        );
        assert!(bad.is_err());
        let ok = GroupHom::new(c4, c2, vec![perm(2, "(0 1)")]).unwrap();
        assert_eq!(ok.kernel().unwrap().order(), 2);
    }

    #[test]
    fn quotient_sym3sym3_by_second_factor() {
        let g = PermGroup::generate(
            6,
            vec![
                perm(6, "(0 1 2)"),
                perm(6, "(0 1)"),
                perm(6, "(3 4 5)"),
                perm(6, "(3 4)"),
            ],
        )
        .unwrap();
        assert_eq!(g.order(), 36);
        let n = PermGroup::generate(6, vec![perm(6, "(3 4 5)"), perm(6, "(3 4)")]).unwrap();
        let (q, pi) = quotient_by_normal(&g, &n).unwrap();
        assert_eq!(q.order(), 6);
        assert!(!q.is_abelian());
        assert_eq!(pi.kernel().unwrap().order(), 6);
        assert_eq!(abelianization_p_rank(&q, 2).unwrap(), 1);
    }

    #[test]
    fn quotient_by_trivial_keeps_degree() {
        let g = PermGroup::symmetric(4);
        let n = PermGroup::trivial(4);
        let (q, _) = quotient_by_normal(&g, &n).unwrap();
        assert_eq!(q.degree(), 4);
        assert_eq!(q.order(), 24);
    }

    #[test]
    fn sym4_acts_on_its_four_sylow3s() {
        let s4 = PermGroup::symmetric(4);
        let (count, action) = action_on_sylow_subgroups(&s4, 3).unwrap();
        assert_eq!(count, 4);
        assert_eq!(action.kernel().unwrap().order(), 1);
        assert_eq!(action.image().unwrap().order(), 24);
    }

    #[test]
    fn dihedral_witness_in_sym4_sylow2() {
        let s4 = PermGroup::symmetric(4);
        let syl = sylow_p_subgroup(&s4, 2).unwrap();
        assert!(dihedral8_witness(syl.group()).is_some());
        let q8 = PermGroup::generate(
            8,
            vec![
                perm(8, "(0 1 2 3)(4 5 6 7)"),
                perm(8, "(0 4 2 6)(1 7 3 5)"),
            ],
        )
        .unwrap();
        assert_eq!(q8.order(), 8);
        assert!(dihedral8_witness(&q8).is_none());
    }

    #[test]
    fn compose_and_inverse() {
        let c6 = PermGroup::cyclic(6);
        let c3 = PermGroup::cyclic(3);
        let proj = GroupHom::new(c6.clone(), c3.clone(), vec![perm(3, "(0 1 2)")]).unwrap();
        let inv_auto = GroupHom::new(c3.clone(), c3.clone(), vec![perm(3, "(0 2 1)")]).unwrap();
        let comp = proj.then(&inv_auto).unwrap();
        assert_eq!(comp.apply(&perm(6, "(0 1 2 3 4 5)")), perm(3, "(0 2 1)"));
        let back = inv_auto.inverse().unwrap();
        assert_eq!(back.apply(&perm(3, "(0 2 1)")), perm(3, "(0 1 2)"));
    }
}
