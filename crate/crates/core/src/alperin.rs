//! Alperin data for realized fusion systems — the groups `L_i = N_G(P_i)/C'_G(P_i)`
//! over the centric-radical representatives, with full validation — and the
//! decomposition of an arbitrary fusion morphism into automorphisms of fully
//! normalized centric subgroups.

use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::fusion::{FusionSystem, Mor, MorKey};
use crate::group::{
    centralizer, center, is_normal_in, normalizer, p_core, p_part, p_perfect_core, PermGroup,
    SubgroupRef,
};
use crate::hom::{quotient_by_normal, GroupHom};
use crate::perm::Perm;

/// One entry of an Alperin datum: a centric-radical representative `P_i`, the
/// finite group `L_i`, and the embedding of `N_S(P_i)` into it.
pub struct DatumEntry {
    pub subgroup_idx: usize,
    /// `N_G(P_i)` inside the realizer.
    pub normalizer_in_g: PermGroup,
    /// maximal p-perfect subgroup of `C_G(P_i)`
    pub c_prime: PermGroup,
    pub l: PermGroup,
    /// projection `N_G(P_i) → L_i`
    pub quotient: GroupHom,
    /// `N_S(P_i) → L_i`, injective with Sylow image
    pub embed: GroupHom,
    /// image of `P_i` in `L_i`
    pub p_image: PermGroup,
    /// generator of `L_i` together with a lift into `N_G(P_i)`
    pub gen_lifts: Vec<(Perm, Perm)>,
}

pub struct AlperinDatum {
    pub fusion: FusionSystem,
    pub entries: Vec<DatumEntry>,
}

impl AlperinDatum {
    /// Build the datum of a realized fusion system over its centric-radical
    /// fully-normalized representatives, `P_1 = S` first, then ascending order.
    pub fn from_realized(f: &FusionSystem) -> Result<AlperinDatum> {
        let g = f
            .realizer()
            .cloned()
            .ok_or_else(|| Error::DatumInvalid {
                entry: 0,
                condition: "fusion system has no realizer".into(),
            })?;
        let p = f.p();
        let reps = f.centric_radical_representatives();
        let mut entries = Vec::with_capacity(reps.len());
        for (pos, &idx) in reps.iter().enumerate() {
            let p_in_g = SubgroupRef::from_group(&g, f.subgroup(idx).group().clone())?;
            let n_g = normalizer(&g, &p_in_g)?;
            let c_g = centralizer(&g, &p_in_g)?;
            let c_prime = p_perfect_core(c_g.group(), p)?;
            if !is_normal_in(n_g.group(), &c_prime) {
                return Err(Error::DatumInvalid {
                    entry: pos,
                    condition: "C'_G(P) is not normal in N_G(P)".into(),
                });
            }
            let (l, quotient) = quotient_by_normal(n_g.group(), &c_prime)?;
            let n_s = f.normalizer_in_s(idx).group().clone();
            let embed = quotient.restrict(&n_s)?;
            let p_image = quotient.restrict(f.subgroup(idx).group())?.image()?;
            let gen_lifts = l
                .generators()
                .iter()
                .map(|gen| {
                    let lift = n_g
                        .elements()
                        .iter()
                        .find(|n| quotient.apply(n) == *gen)
                        .expect("projection is surjective")
                        .clone();
                    (gen.clone(), lift)
                })
                .collect();
            entries.push(DatumEntry {
                subgroup_idx: idx,
                normalizer_in_g: n_g.group().clone(),
                c_prime,
                l,
                quotient,
                embed,
                p_image,
                gen_lifts,
            });
        }
        let datum = AlperinDatum {
            fusion: f.clone(),
            entries,
        };
        datum.validate()?;
        Ok(datum)
    }

    /// Check every structural condition of the datum, naming the first failure.
    pub fn validate(&self) -> Result<()> {
        let f = &self.fusion;
        let p = f.p();
        for (pos, entry) in self.entries.iter().enumerate() {
            let fail = |condition: &str| Error::DatumInvalid {
                entry: pos,
                condition: condition.into(),
            };
            // P_i is the largest normal p-subgroup of L_i
            let core = p_core(&entry.l, p)?;
            if !core.same_element_set(&entry.p_image) {
                return Err(fail("O_p(L_i) differs from P_i"));
            }
            // C_{L_i}(P_i) = Z(P_i)
            let p_ref = SubgroupRef::from_group(&entry.l, entry.p_image.clone())?;
            let c_in_l = centralizer(&entry.l, &p_ref)?;
            let z = center(&entry.p_image)?;
            if !c_in_l.same_element_set(&z) {
                return Err(fail("C_{L_i}(P_i) differs from Z(P_i)"));
            }
            // L_i/P_i ≅ Out_F(P_i) via n ↦ [c_n]
            let aut = f.aut_data(entry.subgroup_idx);
            let omega_images = entry
                .gen_lifts
                .iter()
                .map(|(_, lift)| {
                    let images: Vec<Perm> = f
                        .subgroup(entry.subgroup_idx)
                        .generators()
                        .iter()
                        .map(|x| x.conjugate_by(lift))
                        .collect();
                    let key = MorKey {
                        src: entry.subgroup_idx,
                        images,
                    };
                    let aut_perm = aut
                        .aut_perm_of_key
                        .get(&key)
                        .ok_or_else(|| fail("conjugation by a lift escapes Aut_F(P_i)"))?;
                    Ok(aut.out_proj.apply(aut_perm))
                })
                .collect::<Result<Vec<_>>>()?;
            let omega = GroupHom::new(entry.l.clone(), aut.out.clone(), omega_images)
                .map_err(|_| fail("L_i → Out_F(P_i) is not a homomorphism"))?;
            if omega.image()?.order() != aut.out.order() {
                return Err(fail("L_i does not surject onto Out_F(P_i)"));
            }
            if !omega.kernel()?.same_element_set(&entry.p_image) {
                return Err(fail("kernel of L_i → Out_F(P_i) differs from P_i"));
            }
            // N_S(P_i) embeds as a Sylow p-subgroup of L_i
            if !entry.embed.is_injective() {
                return Err(fail("N_S(P_i) does not embed into L_i"));
            }
            if entry.embed.image()?.order() != p_part(entry.l.order(), p) {
                return Err(fail("N_S(P_i) image is not Sylow in L_i"));
            }
        }
        Ok(())
    }

    /// For every entry, is `L_i` generated by `N_S(P_i)` together with its
    /// elements of order prime to p?
    pub fn pprime_generation_check(&self) -> Result<Vec<bool>> {
        let p = self.fusion.p();
        let mut verdicts = Vec::with_capacity(self.entries.len());
        for entry in &self.entries {
            let mut gens: Vec<Perm> = entry.embed.gen_images().to_vec();
            for x in entry.l.elements() {
                if x.order() % p != 0 && !x.is_identity() {
                    gens.push(x.clone());
                }
            }
            let generated = PermGroup::generate(entry.l.degree(), gens)?;
            verdicts.push(generated.order() == entry.l.order());
        }
        Ok(verdicts)
    }

    /// The fusion generators carried by the datum: conjugation by each lifted
    /// `L_i` generator, restricted to `P_i`.
    pub fn generator_morphisms(&self) -> Vec<(usize, MorKey, Perm)> {
        let f = &self.fusion;
        let mut out = Vec::new();
        for (pos, entry) in self.entries.iter().enumerate() {
            for (_, lift) in &entry.gen_lifts {
                let images: Vec<Perm> = f
                    .subgroup(entry.subgroup_idx)
                    .generators()
                    .iter()
                    .map(|x| x.conjugate_by(lift))
                    .collect();
                out.push((
                    pos,
                    MorKey {
                        src: entry.subgroup_idx,
                        images,
                    },
                    lift.clone(),
                ));
            }
        }
        out
    }

    /// Regenerate the fusion system from the datum's automorphisms and compare
    /// with the original (an expensive cross-check).
    pub fn verify_generates(&self) -> Result<bool> {
        let f = &self.fusion;
        let homs = self
            .generator_morphisms()
            .into_iter()
            .map(|(_, key, _)| f.mor_hom(&key))
            .collect::<Vec<_>>();
        let regenerated = FusionSystem::generated(f.s(), f.p(), &homs)?;
        Ok(f.equal(&regenerated).0)
    }
}

type PivotTable = Vec<(usize, Vec<(MorKey, Arc<HashMap<Perm, Perm>>)>)>;

/// Decomposes fusion morphisms into automorphisms of fully normalized
/// F-centric subgroups by breadth-first search over composable restrictions.
/// Build once per fusion system; the pivot automorphism tables are shared.
pub struct DecomposeEngine {
    fusion: FusionSystem,
    pivots: PivotTable,
}

impl DecomposeEngine {
    pub fn new(f: &FusionSystem) -> DecomposeEngine {
        let mut pivots = Vec::new();
        for idx in f.fully_normalized_centric() {
            let mut auts = Vec::new();
            for m in f.hom_to_s(idx).iter() {
                if f.image_index(&m.key) == idx {
                    auts.push((m.key.clone(), Arc::new(f.mor_table(&m.key))));
                }
            }
            pivots.push((idx, auts));
        }
        DecomposeEngine {
            fusion: f.clone(),
            pivots,
        }
    }

    /// Shortest sequence `ψ_1, …, ψ_k` of pivot automorphisms whose composite,
    /// restricted to the source of `target`, equals it. The inclusion maps to
    /// the empty sequence.
    pub fn decompose(&self, target: &MorKey) -> Result<Vec<(usize, MorKey)>> {
        let f = &self.fusion;
        let src = target.src;
        let start = MorKey {
            src,
            images: f.subgroup(src).generators().to_vec(),
        };
        let mut parent: HashMap<MorKey, Option<(MorKey, usize, MorKey)>> = HashMap::new();
        parent.insert(start.clone(), None);
        let mut queue = vec![start];
        let mut head = 0;
        while head < queue.len() {
            let state = queue[head].clone();
            if state == *target {
                // walk the parents back to the inclusion
                let mut steps = Vec::new();
                let mut cur = state;
                while let Some((prev, pivot_idx, psi)) = parent[&cur].clone() {
                    steps.push((pivot_idx, psi));
                    cur = prev;
                }
                steps.reverse();
                return Ok(steps);
            }
            for (pivot_idx, auts) in &self.pivots {
                let r = f.subgroup(*pivot_idx).group();
                if !state.images.iter().all(|x| r.contains(x)) {
                    continue;
                }
                for (psi, table) in auts {
                    let images: Vec<Perm> =
                        state.images.iter().map(|x| table[x].clone()).collect();
                    let next = MorKey { src, images };
                    if !parent.contains_key(&next) {
                        parent.insert(
                            next.clone(),
                            Some((state.clone(), *pivot_idx, psi.clone())),
                        );
                        queue.push(next);
                    }
                }
            }
            head += 1;
        }
        Err(Error::DecompositionNotFound)
    }

    /// Compose a decomposition back into a morphism key of the given source.
    pub fn compose_back(&self, src: usize, steps: &[(usize, MorKey)]) -> MorKey {
        let f = &self.fusion;
        let mut images: Vec<Perm> = f.subgroup(src).generators().to_vec();
        for (_, psi) in steps {
            let table = f.mor_table(psi);
            images = images.iter().map(|x| table[x].clone()).collect();
        }
        MorKey { src, images }
    }

    pub fn fusion(&self) -> &FusionSystem {
        &self.fusion
    }
}

/// Decompose a single morphism (builds a fresh engine; for batches build a
/// `DecomposeEngine` once).
pub fn alperin_decompose(f: &FusionSystem, target: &Mor) -> Result<Vec<(usize, MorKey)>> {
    DecomposeEngine::new(f).decompose(&target.key)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::sylow_p_subgroup;

    fn perm(degree: usize, s: &str) -> Perm {
        Perm::parse_cycles(degree, s).unwrap()
    }

    #[test]
    fn datum_of_sym3_times_c3_is_a_single_entry() {
        let g = PermGroup::generate(
            6,
            vec![perm(6, "(0 1 2)"), perm(6, "(0 1)"), perm(6, "(3 4 5)")],
        )
        .unwrap();
        let s = sylow_p_subgroup(&g, 3).unwrap();
        let f = FusionSystem::realized(&g, &s, 3).unwrap();
        let datum = AlperinDatum::from_realized(&f).unwrap();
        assert_eq!(datum.entries.len(), 1);
        assert_eq!(datum.entries[0].l.order(), 18);
        assert!(datum.pprime_generation_check().unwrap().iter().all(|&b| b));
        assert!(datum.verify_generates().unwrap());
    }

    #[test]
    fn datum_quotients_away_a_nontrivial_p_prime_centralizer() {
        // A4 × C3 at p = 2: C_G(V) = V × C3, so C' = C3 and L = A4
        let g = PermGroup::generate(
            7,
            vec![
                perm(7, "(0 1)(2 3)"),
                perm(7, "(0 1 2)"),
                perm(7, "(4 5 6)"),
            ],
        )
        .unwrap();
        assert_eq!(g.order(), 36);
        let s = sylow_p_subgroup(&g, 2).unwrap();
        let f = FusionSystem::realized(&g, &s, 2).unwrap();
        let datum = AlperinDatum::from_realized(&f).unwrap();
        assert_eq!(datum.entries.len(), 1);
        assert_eq!(datum.entries[0].c_prime.order(), 3);
        assert_eq!(datum.entries[0].l.order(), 12);
        assert!(datum.pprime_generation_check().unwrap().iter().all(|&b| b));
    }

    #[test]
    fn decompose_round_trip_on_sym4() {
        let g = PermGroup::symmetric(4);
        let s = sylow_p_subgroup(&g, 2).unwrap();
        let f = FusionSystem::realized(&g, &s, 2).unwrap();
        let engine = DecomposeEngine::new(&f);
        let mut checked = 0;
        for idx in 0..f.subgroups().len() {
            for m in f.hom_to_s(idx).iter() {
                let steps = engine.decompose(&m.key).unwrap();
                assert_eq!(engine.compose_back(idx, &steps), m.key);
                checked += 1;
            }
        }
        assert!(checked > 20);
    }

    #[test]
    fn inclusion_decomposes_to_the_empty_sequence() {
        let g = PermGroup::symmetric(3);
        let s = sylow_p_subgroup(&g, 3).unwrap();
        let f = FusionSystem::realized(&g, &s, 3).unwrap();
        let engine = DecomposeEngine::new(&f);
        let trivial_idx = 0; // subgroups are sorted by order, so 0 is trivial
        let incl = MorKey {
            src: trivial_idx,
            images: f.subgroup(trivial_idx).generators().to_vec(),
        };
        assert!(engine.decompose(&incl).unwrap().is_empty());
    }
}
