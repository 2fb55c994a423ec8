//! Sparse linear algebra over 𝔽_p: row-echelon reduction, rank, kernels, and
//! affine solves. Rows are sorted coordinate lists; elimination pivots on the
//! leading column of each incoming row.

use std::collections::HashMap;

/// A sparse row: sorted `(column, value)` pairs with values in `1..p`.
pub type SparseRow = Vec<(u32, u8)>;

pub fn mod_inverse(a: u8, p: u32) -> u8 {
    // p is a small prime, so Fermat works fine
    let mut result = 1u64;
    let mut base = a as u64 % p as u64;
    let mut exp = p as u64 - 2;
    while exp > 0 {
        if exp & 1 == 1 {
            result = result * base % p as u64;
        }
        base = base * base % p as u64;
        exp >>= 1;
    }
    result as u8
}

/// `target ← target − factor·source` over 𝔽_p, both rows sorted.
pub fn subtract_scaled(target: &SparseRow, source: &SparseRow, factor: u8, p: u32) -> SparseRow {
    let mut out = Vec::with_capacity(target.len() + source.len());
    let (mut i, mut j) = (0, 0);
    while i < target.len() || j < source.len() {
        let tc = target.get(i).map(|e| e.0).unwrap_or(u32::MAX);
        let sc = source.get(j).map(|e| e.0).unwrap_or(u32::MAX);
        if tc < sc {
            out.push(target[i]);
            i += 1;
        } else if sc < tc {
            let v = (p - (source[j].1 as u32 * factor as u32) % p) % p;
            if v != 0 {
                out.push((sc, v as u8));
            }
            j += 1;
        } else {
            let v = (target[i].1 as u32 + p - (source[j].1 as u32 * factor as u32) % p) % p;
            if v != 0 {
                out.push((tc, v as u8));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

fn normalize_row(row: &mut SparseRow, p: u32) {
    if let Some(&(_, lead)) = row.first() {
        if lead != 1 {
            let inv = mod_inverse(lead, p) as u32;
            for e in row.iter_mut() {
                e.1 = ((e.1 as u32 * inv) % p) as u8;
            }
        }
    }
}

/// Incremental row-echelon basis over 𝔽_p.
pub struct RowReducer {
    p: u32,
    cols: usize,
    pivot_of_col: HashMap<u32, usize>,
    rows: Vec<SparseRow>,
}

impl RowReducer {
    pub fn new(p: u64, cols: usize) -> RowReducer {
        RowReducer {
            p: p as u32,
            cols,
            pivot_of_col: HashMap::new(),
            rows: Vec::new(),
        }
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Fully reduce `row` against the current basis.
    pub fn reduce(&self, mut row: SparseRow) -> SparseRow {
        loop {
            match row.first() {
                None => return row,
                Some(&(lead, val)) => match self.pivot_of_col.get(&lead) {
                    Some(&ri) => row = subtract_scaled(&row, &self.rows[ri], val, self.p),
                    None => return row,
                },
            }
        }
    }

    /// Insert a row; returns true when it was independent of the basis.
    pub fn insert(&mut self, row: SparseRow) -> bool {
        let mut reduced = self.reduce(row);
        if reduced.is_empty() {
            return false;
        }
        normalize_row(&mut reduced, self.p);
        let lead = reduced[0].0;
        self.pivot_of_col.insert(lead, self.rows.len());
        self.rows.push(reduced);
        true
    }

    pub fn pivot_columns(&self) -> Vec<u32> {
        let mut cols: Vec<u32> = self.pivot_of_col.keys().copied().collect();
        cols.sort_unstable();
        cols
    }

    /// Back-eliminate so every pivot column appears in exactly one row.
    pub fn to_rref(&mut self) {
        let mut order: Vec<(u32, usize)> =
            self.pivot_of_col.iter().map(|(&c, &r)| (c, r)).collect();
        order.sort_unstable();
        for idx in 0..order.len() {
            let (_, ri) = order[idx];
            let row = self.rows[ri].clone();
            for &(_, rj) in &order {
                if rj == ri {
                    continue;
                }
                let coeff = self.rows[rj]
                    .iter()
                    .find(|e| e.0 == row[0].0)
                    .map(|e| e.1);
                if let Some(c) = coeff {
                    self.rows[rj] = subtract_scaled(&self.rows[rj], &row, c, self.p);
                }
            }
        }
    }

    /// Basis of `{x : Ax = 0}` where A has the inserted rows; dense vectors.
    pub fn kernel_basis(&mut self) -> Vec<Vec<u8>> {
        self.to_rref();
        let pivot_cols = self.pivot_columns();
        let is_pivot: HashMap<u32, usize> = self
            .pivot_of_col
            .iter()
            .map(|(&c, &r)| (c, r))
            .collect();
        let mut basis = Vec::new();
        for free in 0..self.cols as u32 {
            if is_pivot.contains_key(&free) {
                continue;
            }
            let mut v = vec![0u8; self.cols];
            v[free as usize] = 1;
            for &pc in &pivot_cols {
                let row = &self.rows[is_pivot[&pc]];
                if let Some(&(_, coeff)) = row.iter().find(|e| e.0 == free) {
                    v[pc as usize] = ((self.p - coeff as u32) % self.p) as u8;
                }
            }
            basis.push(v);
        }
        basis
    }
}

/// Solve `Σ a_c x_c = b` rows simultaneously; `None` when inconsistent. Free
/// variables are set to zero, so the answer is deterministic.
pub fn solve_affine(
    p: u64,
    cols: usize,
    equations: &[(SparseRow, u8)],
) -> Option<Vec<u8>> {
    let pp = p as u32;
    let aug = cols as u32;
    let mut reducer = RowReducer::new(p, cols + 1);
    for (lhs, rhs) in equations {
        let mut row = lhs.clone();
        if *rhs != 0 {
            row.push((aug, ((pp - *rhs as u32) % pp) as u8));
        }
        reducer.insert(row);
    }
    if reducer.pivot_of_col.contains_key(&aug) {
        return None;
    }
    reducer.to_rref();
    let mut x = vec![0u8; cols];
    for row in &reducer.rows {
        let pivot = row[0].0;
        let b = row
            .iter()
            .find(|e| e.0 == aug)
            .map(|e| (pp - e.1 as u32) % pp)
            .unwrap_or(0);
        x[pivot as usize] = b as u8;
    }
    Some(x)
}

/// Dense matrix over 𝔽_p in sparse coordinate form, for induced maps on
/// cohomology bases and report output.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FpMatrix {
    pub p: u64,
    pub rows: usize,
    pub cols: usize,
    /// sorted, duplicate-free coordinates with values in `1..p`
    pub entries: Vec<(u32, u32, u8)>,
}

impl FpMatrix {
    pub fn zero(p: u64, rows: usize, cols: usize) -> FpMatrix {
        FpMatrix {
            p,
            rows,
            cols,
            entries: Vec::new(),
        }
    }

    pub fn identity(p: u64, n: usize) -> FpMatrix {
        FpMatrix {
            p,
            rows: n,
            cols: n,
            entries: (0..n as u32).map(|i| (i, i, 1)).collect(),
        }
    }

    pub fn from_dense(p: u64, dense: &[Vec<u8>]) -> FpMatrix {
        let rows = dense.len();
        let cols = dense.first().map(|r| r.len()).unwrap_or(0);
        let mut entries = Vec::new();
        for (i, row) in dense.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                let v = (v as u64 % p) as u8;
                if v != 0 {
                    entries.push((i as u32, j as u32, v));
                }
            }
        }
        FpMatrix {
            p,
            rows,
            cols,
            entries,
        }
    }

    pub fn to_dense(&self) -> Vec<Vec<u8>> {
        let mut dense = vec![vec![0u8; self.cols]; self.rows];
        for &(r, c, v) in &self.entries {
            dense[r as usize][c as usize] = v;
        }
        dense
    }

    pub fn get(&self, r: usize, c: usize) -> u8 {
        self.entries
            .iter()
            .find(|e| e.0 == r as u32 && e.1 == c as u32)
            .map(|e| e.2)
            .unwrap_or(0)
    }

    pub fn rank(&self) -> usize {
        let mut reducer = RowReducer::new(self.p, self.cols);
        for row in self.to_dense() {
            let sparse: SparseRow = row
                .iter()
                .enumerate()
                .filter(|(_, &v)| v != 0)
                .map(|(c, &v)| (c as u32, v))
                .collect();
            reducer.insert(sparse);
        }
        reducer.rank()
    }

    pub fn kernel_basis(&self) -> Vec<Vec<u8>> {
        let mut reducer = RowReducer::new(self.p, self.cols);
        for row in self.to_dense() {
            let sparse: SparseRow = row
                .iter()
                .enumerate()
                .filter(|(_, &v)| v != 0)
                .map(|(c, &v)| (c as u32, v))
                .collect();
            reducer.insert(sparse);
        }
        reducer.kernel_basis()
    }

    /// `self · other`, checking the inner dimensions agree.
    pub fn mul(&self, other: &FpMatrix) -> FpMatrix {
        assert_eq!(self.cols, other.rows, "inner dimensions must agree");
        assert_eq!(self.p, other.p);
        let a = self.to_dense();
        let b = other.to_dense();
        let mut dense = vec![vec![0u8; other.cols]; self.rows];
        for i in 0..self.rows {
            for k in 0..self.cols {
                if a[i][k] == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let v = (dense[i][j] as u64 + a[i][k] as u64 * b[k][j] as u64) % self.p;
                    dense[i][j] = v as u8;
                }
            }
        }
        FpMatrix::from_dense(self.p, &dense)
    }

    pub fn mul_vec(&self, x: &[u8]) -> Vec<u8> {
        assert_eq!(self.cols, x.len());
        let mut out = vec![0u8; self.rows];
        for &(r, c, v) in &self.entries {
            let acc = (out[r as usize] as u64 + v as u64 * x[c as usize] as u64) % self.p;
            out[r as usize] = acc as u8;
        }
        out
    }
}

/// Dense vector helpers used by the cohomology layer.
pub fn vec_sub(p: u64, a: &[u8], b: &[u8]) -> Vec<u8> {
    a.iter()
        .zip(b)
        .map(|(&x, &y)| ((x as u64 + p - y as u64) % p) as u8)
        .collect()
}

pub fn vec_to_sparse(v: &[u8]) -> SparseRow {
    v.iter()
        .enumerate()
        .filter(|(_, &x)| x != 0)
        .map(|(i, &x)| (i as u32, x))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn dense_rank(p: u64, m: &[Vec<u8>]) -> usize {
        // independent oracle: plain dense Gaussian elimination
        let mut m: Vec<Vec<u64>> = m
            .iter()
            .map(|r| r.iter().map(|&v| v as u64 % p).collect())
            .collect();
        let rows = m.len();
        if rows == 0 {
            return 0;
        }
        let cols = m[0].len();
        let mut rank = 0;
        for c in 0..cols {
            let pivot = (rank..rows).find(|&r| m[r][c] != 0);
            let Some(pr) = pivot else { continue };
            m.swap(rank, pr);
            let inv = super::mod_inverse(m[rank][c] as u8, p as u32) as u64;
            for v in m[rank].iter_mut() {
                *v = *v * inv % p;
            }
            for r in 0..rows {
                if r != rank && m[r][c] != 0 {
                    let f = m[r][c];
                    for cc in 0..cols {
                        m[r][cc] = (m[r][cc] + (p - f) * m[rank][cc]) % p;
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    #[test]
    fn rank_matches_dense_oracle_on_random_matrices() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for p in [2u64, 3] {
            for _ in 0..1000 {
                let rows = 50;
                let cols = 50;
                let dense: Vec<Vec<u8>> = (0..rows)
                    .map(|_| (0..cols).map(|_| rng.gen_range(0..p) as u8).collect())
                    .collect();
                let m = FpMatrix::from_dense(p, &dense);
                assert_eq!(m.rank(), dense_rank(p, &dense));
            }
        }
    }

    #[test]
    fn kernel_vectors_are_killed() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for p in [2u64, 3] {
            for _ in 0..50 {
                let dense: Vec<Vec<u8>> = (0..12)
                    .map(|_| (0..20).map(|_| rng.gen_range(0..p) as u8).collect())
                    .collect();
                let m = FpMatrix::from_dense(p, &dense);
                let kernel = m.kernel_basis();
                assert_eq!(kernel.len(), 20 - m.rank());
                for v in kernel {
                    assert!(m.mul_vec(&v).iter().all(|&x| x == 0));
                }
            }
        }
    }

    #[test]
    fn affine_solver_round_trips() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for p in [2u64, 3, 5] {
            for _ in 0..50 {
                let dense: Vec<Vec<u8>> = (0..8)
                    .map(|_| (0..10).map(|_| rng.gen_range(0..p) as u8).collect())
                    .collect();
                let truth: Vec<u8> = (0..10).map(|_| rng.gen_range(0..p) as u8).collect();
                let m = FpMatrix::from_dense(p, &dense);
                let b = m.mul_vec(&truth);
                let eqs: Vec<(SparseRow, u8)> = dense
                    .iter()
                    .zip(&b)
                    .map(|(row, &rhs)| (vec_to_sparse(row), rhs))
                    .collect();
                let x = solve_affine(p, 10, &eqs).expect("consistent by construction");
                assert_eq!(m.mul_vec(&x), b);
            }
        }
    }

    #[test]
    fn inconsistent_system_is_detected() {
        // x = 0 and x = 1 over F_2
        let eqs = vec![(vec![(0u32, 1u8)], 0u8), (vec![(0u32, 1u8)], 1u8)];
        assert!(solve_affine(2, 1, &eqs).is_none());
    }

    #[test]
    fn matrix_product_associates_with_identity() {
        let m = FpMatrix::from_dense(3, &[vec![1, 2], vec![0, 1], vec![2, 2]]);
        let id2 = FpMatrix::identity(3, 2);
        let id3 = FpMatrix::identity(3, 3);
        assert_eq!(m.mul(&id2), m);
        assert_eq!(id3.mul(&m), m);
    }
}
