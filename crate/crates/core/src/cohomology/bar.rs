//! Normalized bar cochains in degrees ≤ 2 with explicit cocycle
//! representatives.
//!
//! Degree 1 is the kernel of d¹ on functions (G∖1) → 𝔽_p. Degree 2 uses the
//! cocycle recurrence σ(gh,k) = σ(h,k) + σ(g,hk) − σ(g,h): every normalized
//! 2-cocycle is determined by its generator rows, so Z² is the kernel of a
//! small constraint system over those rows, and cocycle tables are expanded
//! back from the solution. The direct elimination on d² is kept as a test
//! oracle.

use std::collections::HashMap;

use crate::cohomology::fp::{solve_affine, vec_to_sparse, RowReducer, SparseRow};
use crate::error::{Error, Result};
use crate::group::PermGroup;
use crate::perm::Perm;

/// Degree-1 cohomology: a basis of Hom(G, 𝔽_p) as value tables on the
/// non-identity elements (sorted element order, identity omitted).
pub struct H1Data {
    pub p: u64,
    pub group: PermGroup,
    pub dim: usize,
    pub basis: Vec<Vec<u8>>,
}

impl H1Data {
    pub fn new(group: &PermGroup, p: u64) -> H1Data {
        let n = group.order() as usize - 1;
        let elements = group.elements();
        let index: HashMap<&Perm, usize> = elements
            .iter()
            .enumerate()
            .map(|(i, e)| (e, i))
            .collect();
        let mut reducer = RowReducer::new(p, n);
        for g in 1..=n {
            for h in 1..=n {
                let gh = index[&elements[g].compose(&elements[h])];
                let mut row: HashMap<u32, i64> = HashMap::new();
                *row.entry(g as u32 - 1).or_insert(0) += 1;
                *row.entry(h as u32 - 1).or_insert(0) += 1;
                if gh != 0 {
                    *row.entry(gh as u32 - 1).or_insert(0) -= 1;
                }
                let mut sparse: SparseRow = row
                    .into_iter()
                    .filter_map(|(c, v)| {
                        let v = v.rem_euclid(p as i64) as u8;
                        (v != 0).then_some((c, v))
                    })
                    .collect();
                sparse.sort_unstable();
                reducer.insert(sparse);
            }
        }
        let basis = reducer.kernel_basis();
        H1Data {
            p,
            group: group.clone(),
            dim: basis.len(),
            basis,
        }
    }

    /// Coordinates of a homomorphism table in this basis.
    pub fn coords(&self, table: &[u8]) -> Option<Vec<u8>> {
        let n = self.group.order() as usize - 1;
        let eqs: Vec<(SparseRow, u8)> = (0..n)
            .map(|i| {
                let lhs: SparseRow = self
                    .basis
                    .iter()
                    .enumerate()
                    .filter(|(_, b)| b[i] != 0)
                    .map(|(j, b)| (j as u32, b[i]))
                    .collect();
                (lhs, table[i])
            })
            .collect();
        solve_affine(self.p, self.dim, &eqs)
    }
}

/// Degree-2 cohomology data with explicit normalized cocycle tables.
///
/// A table is a vector of length (|G|−1)² indexed by
/// `(a_idx−1)·N + (b_idx−1)` over the sorted element list (identity first).
pub struct H2Data {
    pub p: u64,
    pub group: PermGroup,
    pub dim: usize,
    pub z_dim: usize,
    pub b_dim: usize,
    /// H²-basis cocycles as full tables
    pub reps: Vec<Vec<u8>>,
    gamma: Vec<usize>,
    u_dim: usize,
    b_u: Vec<Vec<u8>>,
    h_u: Vec<Vec<u8>>,
    mult: Vec<u32>,
    order: usize,
}

fn table_idx(n: usize, a: usize, b: usize) -> usize {
    (a - 1) * n + (b - 1)
}

impl std::fmt::Debug for H2Data {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "H2Data(|G| {}, p {}, dim {}, z {}, b {})",
            self.order, self.p, self.dim, self.z_dim, self.b_dim
        )
    }
}

impl H2Data {
    pub fn new(group: &PermGroup, p: u64, cap: usize) -> Result<H2Data> {
        let order = group.order() as usize;
        if order > cap {
            return Err(Error::BarCapExceeded {
                order: order as u64,
                degree: 2,
                cap,
            });
        }
        let n = order - 1;
        if n == 0 {
            return Ok(H2Data {
                p,
                group: group.clone(),
                dim: 0,
                z_dim: 0,
                b_dim: 0,
                reps: Vec::new(),
                gamma: Vec::new(),
                u_dim: 0,
                b_u: Vec::new(),
                h_u: Vec::new(),
                mult: vec![0],
                order,
            });
        }
        let elements = group.elements();
        let index: HashMap<&Perm, u32> = elements
            .iter()
            .enumerate()
            .map(|(i, e)| (e, i as u32))
            .collect();
        let mut mult = vec![0u32; order * order];
        for a in 0..order {
            for b in 0..order {
                mult[a * order + b] = index[&elements[a].compose(&elements[b])];
            }
        }
        let gamma: Vec<usize> = group
            .minimal_generating_set()
            .iter()
            .map(|g| index[g] as usize)
            .collect();
        let u_dim = gamma.len() * n;

        // generator rows are free unknowns; propagate every other row
        let zero_mat = || vec![0u8; n * u_dim];
        let mut a_mats: Vec<Option<Vec<u8>>> = vec![None; order];
        a_mats[0] = Some(zero_mat());
        for (slot, &g) in gamma.iter().enumerate() {
            let mut m = zero_mat();
            for k in 1..order {
                m[(k - 1) * u_dim + slot * n + (k - 1)] = 1;
            }
            a_mats[g] = Some(m);
        }
        let propagate = |a_h: &[u8], gamma_slot: usize, h: usize| -> Vec<u8> {
            // E(row k) = A_h(row k) + A_γ(row h·k) − A_γ(row h), selector form
            let mut e = a_h.to_vec();
            for k in 1..order {
                let hk = mult[h * order + k] as usize;
                let row = &mut e[(k - 1) * u_dim..k * u_dim];
                if hk != 0 {
                    // A_γ is a selector: its row hk has a single 1
                    let col = gamma_slot * n + (hk - 1);
                    row[col] = ((row[col] as u32 + 1) % p as u32) as u8;
                }
                let col_h = gamma_slot * n + (h - 1);
                row[col_h] = ((row[col_h] as u32 + p as u32 - 1) % p as u32) as u8;
            }
            e
        };
        let mut queue: Vec<usize> = (0..order).filter(|&x| a_mats[x].is_some()).collect();
        let mut qi = 0;
        while qi < queue.len() {
            let h = queue[qi];
            qi += 1;
            for (slot, &g) in gamma.iter().enumerate() {
                let x = mult[g * order + h] as usize;
                if a_mats[x].is_none() {
                    let e = propagate(a_mats[h].as_ref().unwrap(), slot, h);
                    a_mats[x] = Some(e);
                    queue.push(x);
                }
            }
        }
        let a_mats: Vec<Vec<u8>> = a_mats
            .into_iter()
            .map(|m| m.expect("generators reach every element"))
            .collect();

        // consistency of every generator condition pins Z²
        let mut constraints = RowReducer::new(p, u_dim);
        for (slot, &g) in gamma.iter().enumerate() {
            for h in 1..order {
                let x = mult[g * order + h] as usize;
                let e = propagate(&a_mats[h], slot, h);
                let target = &a_mats[x];
                for k in 1..order {
                    let mut row: SparseRow = Vec::new();
                    for c in 0..u_dim {
                        let lhs = target[(k - 1) * u_dim + c] as i64 - e[(k - 1) * u_dim + c] as i64;
                        let v = lhs.rem_euclid(p as i64) as u8;
                        if v != 0 {
                            row.push((c as u32, v));
                        }
                    }
                    if !row.is_empty() {
                        constraints.insert(row);
                    }
                }
            }
        }
        let z_u = constraints.kernel_basis();
        let z_dim = z_u.len();

        // coboundary u-vectors: δ_a(g, k) = [g=a] − [gk=a] + [k=a]
        let mut b_echelon = RowReducer::new(p, u_dim);
        let mut b_u = Vec::new();
        for a in 1..order {
            let mut u = vec![0u8; u_dim];
            for (slot, &g) in gamma.iter().enumerate() {
                for k in 1..order {
                    let gk = mult[g * order + k] as usize;
                    let mut v: i64 = 0;
                    if g == a {
                        v += 1;
                    }
                    if gk == a {
                        v -= 1;
                    }
                    if k == a {
                        v += 1;
                    }
                    u[slot * n + (k - 1)] = v.rem_euclid(p as i64) as u8;
                }
            }
            if b_echelon.insert(vec_to_sparse(&u)) {
                b_u.push(u);
            }
        }
        let b_dim = b_u.len();

        // quotient: kernel vectors surviving modulo the coboundaries
        let mut h_echelon = RowReducer::new(p, u_dim);
        for b in &b_u {
            h_echelon.insert(vec_to_sparse(b));
        }
        let mut h_u = Vec::new();
        for z in &z_u {
            if h_echelon.insert(vec_to_sparse(z)) {
                h_u.push(z.clone());
            }
        }
        let dim = h_u.len();
        debug_assert_eq!(z_dim, b_dim + dim);

        // expand representatives to full tables
        let reps: Vec<Vec<u8>> = h_u
            .iter()
            .map(|u| {
                let mut table = vec![0u8; n * n];
                for x in 1..order {
                    let m = &a_mats[x];
                    for k in 1..order {
                        let mut acc: u64 = 0;
                        let row = &m[(k - 1) * u_dim..k * u_dim];
                        for (c, &coef) in row.iter().enumerate() {
                            if coef != 0 && u[c] != 0 {
                                acc += coef as u64 * u[c] as u64;
                            }
                        }
                        table[table_idx(n, x, k)] = (acc % p as u64) as u8;
                    }
                }
                table
            })
            .collect();
        Ok(H2Data {
            p,
            group: group.clone(),
            dim,
            z_dim,
            b_dim,
            reps,
            gamma,
            u_dim,
            b_u,
            h_u,
            mult,
            order,
        })
    }

    pub fn n(&self) -> usize {
        self.order - 1
    }

    pub fn index_of_pair(&self, a_idx: usize, b_idx: usize) -> usize {
        table_idx(self.order - 1, a_idx, b_idx)
    }

    /// Verify the full cocycle condition on a table (test support).
    pub fn is_cocycle(&self, table: &[u8]) -> bool {
        let order = self.order;
        let n = order - 1;
        let val = |a: usize, b: usize| -> u64 {
            if a == 0 || b == 0 {
                0
            } else {
                table[table_idx(n, a, b)] as u64
            }
        };
        for g in 1..order {
            for h in 1..order {
                let gh = self.mult[g * order + h] as usize;
                for k in 1..order {
                    let hk = self.mult[h * order + k] as usize;
                    let lhs = val(h, k) + val(g, hk) + (self.p - 1) as u64 * (val(gh, k) + val(g, h));
                    if lhs % self.p as u64 != 0 {
                        return false;
                    }
                }
            }
        }
        true
    }

    fn u_of_table(&self, table: &[u8]) -> Vec<u8> {
        let n = self.order - 1;
        let mut u = vec![0u8; self.u_dim];
        for (slot, &g) in self.gamma.iter().enumerate() {
            for k in 1..self.order {
                u[slot * n + (k - 1)] = table[table_idx(n, g, k)];
            }
        }
        u
    }

    /// Coordinates of a 2-cocycle table in the H²-basis, modulo coboundaries.
    /// `None` when the table is not a cocycle of this group.
    pub fn coords_mod_coboundaries(&self, table: &[u8]) -> Option<Vec<u8>> {
        if self.order == 1 {
            return Some(Vec::new());
        }
        let u = self.u_of_table(table);
        let total = self.b_dim + self.dim;
        let eqs: Vec<(SparseRow, u8)> = (0..self.u_dim)
            .map(|i| {
                let mut lhs: SparseRow = Vec::new();
                for (j, b) in self.b_u.iter().enumerate() {
                    if b[i] != 0 {
                        lhs.push((j as u32, b[i]));
                    }
                }
                for (j, h) in self.h_u.iter().enumerate() {
                    if h[i] != 0 {
                        lhs.push(((self.b_dim + j) as u32, h[i]));
                    }
                }
                (lhs, u[i])
            })
            .collect();
        let sol = solve_affine(self.p, total, &eqs)?;
        Some(sol[self.b_dim..].to_vec())
    }
}

/// One degree of bar cohomology with representatives.
pub enum BarDegree {
    Zero,
    One(H1Data),
    Two(H2Data),
}

impl BarDegree {
    pub fn dim(&self) -> usize {
        match self {
            BarDegree::Zero => 1,
            BarDegree::One(d) => d.dim,
            BarDegree::Two(d) => d.dim,
        }
    }
}

/// dim H^n(G; 𝔽_p) with cocycle representatives, n ≤ 2.
pub fn bar_cohomology(group: &PermGroup, p: u64, n: usize, cap: usize) -> Result<BarDegree> {
    match n {
        0 => Ok(BarDegree::Zero),
        1 => Ok(BarDegree::One(H1Data::new(group, p))),
        2 => Ok(BarDegree::Two(H2Data::new(group, p, cap)?)),
        _ => Err(Error::BarCapExceeded {
            order: group.order(),
            degree: n,
            cap: 2,
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::group::abelianization_p_rank;

    /// Direct sparse elimination on the d² differential: the oracle for Z², on
    /// groups small enough to enumerate (|G|−1)³ rows.
    fn h2_direct(group: &PermGroup, p: u64) -> usize {
        let order = group.order() as usize;
        let n = order - 1;
        let elements = group.elements();
        let index: HashMap<&Perm, usize> = elements
            .iter()
            .enumerate()
            .map(|(i, e)| (e, i))
            .collect();
        let mult = |a: usize, b: usize| index[&elements[a].compose(&elements[b])];
        let mut reducer = RowReducer::new(p, n * n);
        for g in 1..order {
            for h in 1..order {
                let gh = mult(g, h);
                for k in 1..order {
                    let hk = mult(h, k);
                    let mut row: HashMap<u32, i64> = HashMap::new();
                    *row.entry(table_idx(n, h, k) as u32).or_insert(0) += 1;
                    if gh != 0 {
                        *row.entry(table_idx(n, gh, k) as u32).or_insert(0) -= 1;
                    }
                    if hk != 0 {
                        *row.entry(table_idx(n, g, hk) as u32).or_insert(0) += 1;
                    }
                    *row.entry(table_idx(n, g, h) as u32).or_insert(0) -= 1;
                    let mut sparse: SparseRow = row
                        .into_iter()
                        .filter_map(|(c, v)| {
                            let v = v.rem_euclid(p as i64) as u8;
                            (v != 0).then_some((c, v))
                        })
                        .collect();
                    sparse.sort_unstable();
                    reducer.insert(sparse);
                }
            }
        }
        let z_dim = n * n - reducer.rank();
        // subtract coboundaries
        let mut b = RowReducer::new(p, n * n);
        let mut b_dim = 0;
        for a in 1..order {
            let mut row: HashMap<u32, i64> = HashMap::new();
            for g in 1..order {
                for h in 1..order {
                    let gh = mult(g, h);
                    let mut v = 0i64;
                    if g == a {
                        v += 1;
                    }
                    if gh == a {
                        v -= 1;
                    }
                    if h == a {
                        v += 1;
                    }
                    if v != 0 {
                        *row.entry(table_idx(n, g, h) as u32).or_insert(0) += v;
                    }
                }
            }
            let mut sparse: SparseRow = row
                .into_iter()
                .filter_map(|(c, v)| {
                    let v = v.rem_euclid(p as i64) as u8;
                    (v != 0).then_some((c, v))
                })
                .collect();
            sparse.sort_unstable();
            if b.insert(sparse) {
                b_dim += 1;
            }
        }
        z_dim - b_dim
    }

    #[test]
    fn h1_matches_abelianization_rank() {
        for (g, p) in [
            (corpus::c2(), 2),
            (corpus::c3(), 3),
            (corpus::c9(), 3),
            (corpus::klein_four(), 2),
            (corpus::dihedral8(), 2),
            (corpus::quaternion8(), 2),
            (corpus::sym3(), 2),
            (corpus::sym3(), 3),
            (corpus::sym4(), 2),
            (corpus::alt4(), 2),
            (corpus::alt4(), 3),
        ] {
            let h1 = H1Data::new(&g, p);
            assert_eq!(
                h1.dim,
                abelianization_p_rank(&g, p).unwrap(),
                "group order {} at p {}",
                g.order(),
                p
            );
            // every basis vector really is a homomorphism table
            let elements = g.elements();
            for b in &h1.basis {
                let val = |x: &Perm| -> u64 {
                    let i = g.element_index(x).unwrap();
                    if i == 0 {
                        0
                    } else {
                        b[i - 1] as u64
                    }
                };
                for x in elements {
                    for y in elements {
                        assert_eq!(
                            (val(x) + val(y)) % p,
                            val(&x.compose(y)) % p
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn h2_propagation_matches_direct_elimination() {
        for (g, p) in [
            (corpus::c2(), 2u64),
            (corpus::c3(), 3),
            (PermGroup::cyclic(4), 2),
            (corpus::klein_four(), 2),
            (corpus::c3_times_c3(), 3),
            (corpus::dihedral8(), 2),
            (corpus::quaternion8(), 2),
            (corpus::sym3(), 2),
            (corpus::sym3(), 3),
            (corpus::alt4(), 2),
            (corpus::sym4(), 2),
        ] {
            let data = H2Data::new(&g, p, 1000).unwrap();
            let direct = h2_direct(&g, p);
            assert_eq!(data.dim, direct, "group order {} at p {}", g.order(), p);
            for rep in &data.reps {
                assert!(data.is_cocycle(rep));
            }
        }
    }

    #[test]
    fn h2_known_dimensions() {
        // classical values: cyclic p-groups have dim 1; elementary abelian of
        // rank k has dim k(k+1)/2; D8 has 3, Q8 has 2, Σ3 at p=3 has 0
        assert_eq!(H2Data::new(&corpus::c2(), 2, 1000).unwrap().dim, 1);
        assert_eq!(H2Data::new(&PermGroup::cyclic(4), 2, 1000).unwrap().dim, 1);
        assert_eq!(H2Data::new(&corpus::c9(), 3, 1000).unwrap().dim, 1);
        assert_eq!(H2Data::new(&corpus::klein_four(), 2, 1000).unwrap().dim, 3);
        assert_eq!(H2Data::new(&corpus::c3_times_c3(), 3, 1000).unwrap().dim, 3);
        assert_eq!(H2Data::new(&corpus::dihedral8(), 2, 1000).unwrap().dim, 3);
        assert_eq!(H2Data::new(&corpus::quaternion8(), 2, 1000).unwrap().dim, 2);
        assert_eq!(H2Data::new(&corpus::sym3(), 3, 1000).unwrap().dim, 0);
        assert_eq!(H2Data::new(&corpus::sym3(), 2, 1000).unwrap().dim, 1);
        assert_eq!(H2Data::new(&corpus::alt4(), 2, 1000).unwrap().dim, 1);
    }

    #[test]
    fn h2_cap_is_enforced() {
        let err = H2Data::new(&corpus::sym4(), 2, 20).unwrap_err();
        assert!(matches!(err, Error::BarCapExceeded { degree: 2, .. }));
    }

    #[test]
    fn coords_identify_representatives() {
        let data = H2Data::new(&corpus::dihedral8(), 2, 1000).unwrap();
        for (j, rep) in data.reps.iter().enumerate() {
            let coords = data.coords_mod_coboundaries(rep).unwrap();
            let mut expected = vec![0u8; data.dim];
            expected[j] = 1;
            assert_eq!(coords, expected);
        }
        // a coboundary has zero coordinates
        let n = data.n();
        let order = data.order;
        let elements = data.group.elements();
        let index: HashMap<&Perm, usize> = elements
            .iter()
            .enumerate()
            .map(|(i, e)| (e, i))
            .collect();
        let a = 3usize;
        let mut table = vec![0u8; n * n];
        for g in 1..order {
            for h in 1..order {
                let gh = index[&elements[g].compose(&elements[h])];
                let mut v = 0i64;
                if g == a {
                    v += 1;
                }
                if gh == a {
                    v -= 1;
                }
                if h == a {
                    v += 1;
                }
                table[table_idx(n, g, h)] = v.rem_euclid(2) as u8;
            }
        }
        assert!(data.is_cocycle(&table));
        let coords = data.coords_mod_coboundaries(&table).unwrap();
        assert!(coords.iter().all(|&c| c == 0));
    }
}
