//! Degree-1 cohomology classes as explicit homomorphisms G → 𝔽_p, computed
//! through the largest elementary abelian p-quotient. This route is
//! independent of the bar-cochain computation and the two are cross-checked.

use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::group::{mod_p_derived, PermGroup};
use crate::hom::quotient_by_normal;
use crate::perm::Perm;

/// A homomorphism G → 𝔽_p given by values on the group's generators.
#[derive(Clone)]
pub struct Character {
    pub group: PermGroup,
    pub p: u64,
    pub values_on_generators: Vec<u8>,
    table: Arc<HashMap<Perm, u8>>,
}

impl Character {
    /// Build and verify: the values must extend additively over the whole
    /// element list.
    pub fn new(group: &PermGroup, p: u64, values_on_generators: Vec<u8>) -> Result<Character> {
        if values_on_generators.len() != group.generators().len() {
            return Err(Error::NotAHomomorphism(format!(
                "expected {} generator values",
                group.generators().len()
            )));
        }
        let mut table: HashMap<Perm, u8> = HashMap::with_capacity(group.order() as usize);
        table.insert(group.identity(), 0);
        let mut queue = vec![group.identity()];
        let mut head = 0;
        while head < queue.len() {
            let w = queue[head].clone();
            let vw = table[&w];
            for (gi, g) in group.generators().iter().enumerate() {
                let wg = w.compose(g);
                let v = ((vw as u64 + values_on_generators[gi] as u64) % p) as u8;
                match table.get(&wg) {
                    Some(&existing) => {
                        if existing != v {
                            return Err(Error::NotAHomomorphism(
                                "values do not extend to a character".into(),
                            ));
                        }
                    }
                    None => {
                        table.insert(wg.clone(), v);
                        queue.push(wg);
                    }
                }
            }
            head += 1;
        }
        Ok(Character {
            group: group.clone(),
            p,
            values_on_generators,
            table: Arc::new(table),
        })
    }

    pub fn zero(group: &PermGroup, p: u64) -> Character {
        Character::new(group, p, vec![0; group.generators().len()]).expect("zero character")
    }

    pub fn evaluate(&self, g: &Perm) -> u8 {
        self.table[g]
    }

    pub fn try_evaluate(&self, g: &Perm) -> Option<u8> {
        self.table.get(g).copied()
    }

    pub fn is_zero(&self) -> bool {
        self.values_on_generators.iter().all(|&v| v == 0)
    }

    /// Value table over the non-identity elements in sorted order, the format
    /// shared with the bar machinery.
    pub fn value_table(&self) -> Vec<u8> {
        self.group
            .elements()
            .iter()
            .skip(1)
            .map(|e| self.table[e])
            .collect()
    }

    /// Pull back along a homomorphism into this character's group.
    pub fn pullback(&self, f: &crate::hom::GroupHom) -> Result<Character> {
        let values = f
            .domain()
            .generators()
            .iter()
            .map(|g| {
                self.try_evaluate(&f.apply(g))
                    .ok_or_else(|| Error::NotInParent {
                        element: g.to_string(),
                    })
            })
            .collect::<Result<Vec<_>>>()?;
        Character::new(f.domain(), self.p, values)
    }
}

impl std::fmt::Debug for Character {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "Character(|G| {}, p {}, gens {:?})",
            self.group.order(),
            self.p,
            self.values_on_generators
        )
    }
}

/// A basis of Hom(G, 𝔽_p): dual basis of the largest elementary abelian
/// p-quotient, dimension `abelianization_p_rank`.
pub fn h1_basis(group: &PermGroup, p: u64) -> Result<Vec<Character>> {
    let k = mod_p_derived(group, p)?;
    let (q, pi) = quotient_by_normal(group, &k)?;
    // coordinatize the elementary abelian quotient
    let mut coords: HashMap<Perm, Vec<u8>> = HashMap::new();
    coords.insert(q.identity(), Vec::new());
    let mut rank = 0usize;
    for gen in q.generators() {
        if coords.contains_key(gen) {
            continue;
        }
        // gen is independent of the current span: extend every known vector
        let old: Vec<(Perm, Vec<u8>)> = coords
            .iter()
            .map(|(k, v)| (k.clone(), v.clone()))
            .collect();
        for (elem, mut c) in old.into_iter().flat_map(|(e, c)| {
            (1..p).map(move |j| {
                let mut cc = c.clone();
                cc.resize(rank, 0);
                cc.push(j as u8);
                (e.compose(&gen.pow(j as i64)), cc)
            })
        }) {
            c.resize(rank + 1, *c.last().unwrap_or(&0));
            coords.insert(elem, c);
        }
        rank += 1;
        for c in coords.values_mut() {
            c.resize(rank, 0);
        }
    }
    debug_assert_eq!(
        (p as u64).pow(rank as u32),
        q.order(),
        "quotient is elementary abelian"
    );
    let mut basis = Vec::with_capacity(rank);
    for i in 0..rank {
        let values: Vec<u8> = group
            .generators()
            .iter()
            .map(|g| coords[&pi.apply(g)][i])
            .collect();
        basis.push(Character::new(group, p, values)?);
    }
    Ok(basis)
}
