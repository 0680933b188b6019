//! Sparse LU factorization of simplex bases with Markowitz pivot selection
//! and threshold partial pivoting, plus product-form (eta) updates.

const NONE: usize = usize::MAX;
/// Relative threshold for accepting a pivot against its column maximum.
const THRESHOLD: f64 = 0.01;
/// Entries smaller than this are never pivots.
const ABS_PIVOT_TOL: f64 = 1e-11;
/// Number of candidate lines examined after the first acceptable pivot.
const SEARCH_LIMIT: usize = 4;

/// Doubly linked buckets of items keyed by their nonzero count.
struct CountLists {
    head: Vec<usize>,
    next: Vec<usize>,
    prev: Vec<usize>,
    count: Vec<usize>,
}

impl CountLists {
    fn new(items: usize, max_count: usize) -> Self {
        Self {
            head: vec![NONE; max_count + 2],
            next: vec![NONE; items],
            prev: vec![NONE; items],
            count: vec![0; items],
        }
    }

    fn insert(&mut self, item: usize, count: usize) {
        let count = count.min(self.head.len() - 1);
        self.count[item] = count;
        self.prev[item] = NONE;
        self.next[item] = self.head[count];
        if self.head[count] != NONE {
            self.prev[self.head[count]] = item;
        }
        self.head[count] = item;
    }

    fn remove(&mut self, item: usize) {
        let (p, n) = (self.prev[item], self.next[item]);
        if p != NONE {
            self.next[p] = n;
        } else {
            self.head[self.count[item]] = n;
        }
        if n != NONE {
            self.prev[n] = p;
        }
        self.prev[item] = NONE;
        self.next[item] = NONE;
    }

    fn update(&mut self, item: usize, count: usize) {
        self.remove(item);
        self.insert(item, count);
    }
}

/// Basis positions and rows left without a pivot when the matrix is singular.
#[derive(Debug, Clone, PartialEq)]
pub struct Singular {
    pub positions: Vec<usize>,
    pub rows: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct LuFactors {
    m: usize,
    pivot_row: Vec<usize>,
    pivot_col: Vec<usize>,
    l_start: Vec<usize>,
    l_idx: Vec<usize>,
    l_val: Vec<f64>,
    u_diag: Vec<f64>,
    u_start: Vec<usize>,
    u_idx: Vec<usize>,
    u_val: Vec<f64>,
}

impl LuFactors {
    /// Factor the `m x m` matrix whose column `j` is `columns[j]` (entries
    /// are `(row, value)`).
    pub fn factor(m: usize, columns: &[Vec<(usize, f64)>]) -> Result<Self, Singular> {
        debug_assert_eq!(columns.len(), m);
        let mut cols: Vec<Vec<(usize, f64)>> = columns
            .iter()
            .map(|c| c.iter().copied().filter(|e| e.1 != 0.0).collect())
            .collect();
        let mut rows: Vec<Vec<usize>> = vec![Vec::new(); m];
        for (j, col) in cols.iter().enumerate() {
            for &(i, _) in col {
                rows[i].push(j);
            }
        }
        let mut col_lists = CountLists::new(m, m);
        let mut row_lists = CountLists::new(m, m);
        for j in 0..m {
            col_lists.insert(j, cols[j].len());
        }
        for i in 0..m {
            row_lists.insert(i, rows[i].len());
        }
        let mut col_active = vec![true; m];
        let mut row_active = vec![true; m];
        let mut pos = vec![NONE; m];

        let mut lu = LuFactors {
            m,
            pivot_row: Vec::with_capacity(m),
            pivot_col: Vec::with_capacity(m),
            l_start: vec![0],
            l_idx: Vec::new(),
            l_val: Vec::new(),
            u_diag: Vec::with_capacity(m),
            u_start: vec![0],
            u_idx: Vec::new(),
            u_val: Vec::new(),
        };

        for _ in 0..m {
            let Some((p, q)) = find_pivot(m, &cols, &rows, &col_lists, &row_lists) else {
                return Err(Singular {
                    positions: (0..m).filter(|&j| col_active[j]).collect(),
                    rows: (0..m).filter(|&i| row_active[i]).collect(),
                });
            };

            let colq = std::mem::take(&mut cols[q]);
            col_lists.remove(q);
            col_active[q] = false;
            let piv = colq.iter().find(|e| e.0 == p).map(|e| e.1).unwrap_or(0.0);
            let l_begin = lu.l_idx.len();
            for &(i, v) in &colq {
                if let Some(k) = rows[i].iter().position(|&j| j == q) {
                    rows[i].swap_remove(k);
                }
                if i != p {
                    lu.l_idx.push(i);
                    lu.l_val.push(v / piv);
                }
            }
            let l_end = lu.l_idx.len();

            let rowp = std::mem::take(&mut rows[p]);
            row_lists.remove(p);
            row_active[p] = false;
            for &j in &rowp {
                let k = cols[j].iter().position(|e| e.0 == p).expect("row/column patterns agree");
                let (_, a_pj) = cols[j].swap_remove(k);
                lu.u_idx.push(j);
                lu.u_val.push(a_pj);
                if l_end > l_begin {
                    for (k, &(i, _)) in cols[j].iter().enumerate() {
                        pos[i] = k;
                    }
                    for t in l_begin..l_end {
                        let i = lu.l_idx[t];
                        let delta = -lu.l_val[t] * a_pj;
                        if pos[i] != NONE {
                            cols[j][pos[i]].1 += delta;
                        } else {
                            cols[j].push((i, delta));
                            rows[i].push(j);
                        }
                    }
                    for &(i, _) in &cols[j] {
                        pos[i] = NONE;
                    }
                }
                col_lists.update(j, cols[j].len());
            }
            for t in l_begin..l_end {
                let i = lu.l_idx[t];
                row_lists.update(i, rows[i].len());
            }

            lu.pivot_row.push(p);
            lu.pivot_col.push(q);
            lu.u_diag.push(piv);
            lu.l_start.push(lu.l_idx.len());
            lu.u_start.push(lu.u_idx.len());
        }
        Ok(lu)
    }

    /// Solve `B x = rhs`; `rhs` is indexed by row, the result by basis position.
    pub fn solve(&self, rhs: &mut [f64]) -> Vec<f64> {
        let w = rhs;
        for k in 0..self.m {
            let wp = w[self.pivot_row[k]];
            if wp != 0.0 {
                for t in self.l_start[k]..self.l_start[k + 1] {
                    w[self.l_idx[t]] -= self.l_val[t] * wp;
                }
            }
        }
        let mut x = vec![0.0; self.m];
        for k in (0..self.m).rev() {
            let mut s = w[self.pivot_row[k]];
            for t in self.u_start[k]..self.u_start[k + 1] {
                s -= self.u_val[t] * x[self.u_idx[t]];
            }
            x[self.pivot_col[k]] = s / self.u_diag[k];
        }
        x
    }

    /// Solve `B^T y = c`; `c` is indexed by basis position, the result by row.
    pub fn solve_transposed(&self, c: &mut [f64]) -> Vec<f64> {
        let mut z = vec![0.0; self.m];
        for k in 0..self.m {
            let zp = c[self.pivot_col[k]] / self.u_diag[k];
            z[self.pivot_row[k]] = zp;
            if zp != 0.0 {
                for t in self.u_start[k]..self.u_start[k + 1] {
                    c[self.u_idx[t]] -= zp * self.u_val[t];
                }
            }
        }
        for k in (0..self.m).rev() {
            let p = self.pivot_row[k];
            let mut s = z[p];
            for t in self.l_start[k]..self.l_start[k + 1] {
                s -= self.l_val[t] * z[self.l_idx[t]];
            }
            z[p] = s;
        }
        z
    }
}

fn find_pivot(
    m: usize,
    cols: &[Vec<(usize, f64)>],
    rows: &[Vec<usize>],
    col_lists: &CountLists,
    row_lists: &CountLists,
) -> Option<(usize, usize)> {
    // (cost, -|v|, row, col)
    let mut best: Option<(usize, f64, usize, usize)> = None;
    let mut examined = 0usize;
    let col_max = |j: usize| cols[j].iter().fold(0.0f64, |a, e| a.max(e.1.abs()));
    let better = |best: &Option<(usize, f64, usize, usize)>, cand: (usize, f64, usize, usize)| match best {
        None => true,
        Some(b) => cand.0 < b.0 || (cand.0 == b.0 && cand.1 > b.1),
    };

    for c in 1..=m {
        let mut j = col_lists.head[c];
        while j != NONE {
            let cmax = col_max(j);
            for &(i, v) in &cols[j] {
                let a = v.abs();
                if a >= ABS_PIVOT_TOL && a >= THRESHOLD * cmax {
                    let cost = (rows[i].len() - 1) * (c - 1);
                    let cand = (cost, a, i, j);
                    if better(&best, cand) {
                        best = Some(cand);
                    }
                }
            }
            if best.is_some() {
                examined += 1;
                if best.unwrap().0 == 0 || examined >= SEARCH_LIMIT {
                    return best.map(|b| (b.2, b.3));
                }
            }
            j = col_lists.next[j];
        }
        if let Some(b) = best {
            if b.0 <= (c - 1) * c {
                return Some((b.2, b.3));
            }
        }
        let mut i = row_lists.head[c];
        while i != NONE {
            for &j in &rows[i] {
                let v = cols[j].iter().find(|e| e.0 == i).map(|e| e.1).unwrap_or(0.0);
                let a = v.abs();
                if a >= ABS_PIVOT_TOL && a >= THRESHOLD * col_max(j) {
                    let cost = (c - 1) * (cols[j].len() - 1);
                    let cand = (cost, a, i, j);
                    if better(&best, cand) {
                        best = Some(cand);
                    }
                }
            }
            if best.is_some() {
                examined += 1;
                if best.unwrap().0 == 0 || examined >= SEARCH_LIMIT {
                    return best.map(|b| (b.2, b.3));
                }
            }
            i = row_lists.next[i];
        }
        if let Some(b) = best {
            if b.0 <= c * c {
                return Some((b.2, b.3));
            }
        }
    }
    best.map(|b| (b.2, b.3))
}

/// Product-form update `B_new = B E`, where `E` replaces column `r` of the
/// identity with `alpha = B^{-1} a`.
#[derive(Debug, Clone)]
struct Eta {
    r: usize,
    pivot: f64,
    entries: Vec<(usize, f64)>,
}

/// LU factors of a reference basis followed by an eta file.
#[derive(Debug, Clone)]
pub struct BasisFactor {
    lu: LuFactors,
    etas: Vec<Eta>,
}

impl BasisFactor {
    pub fn new(lu: LuFactors) -> Self {
        Self { lu, etas: Vec::new() }
    }

    pub fn updates(&self) -> usize {
        self.etas.len()
    }

    pub fn ftran(&self, rhs: &mut [f64]) -> Vec<f64> {
        let mut x = self.lu.solve(rhs);
        for eta in &self.etas {
            let xr = x[eta.r] / eta.pivot;
            x[eta.r] = xr;
            if xr != 0.0 {
                for &(i, a) in &eta.entries {
                    x[i] -= a * xr;
                }
            }
        }
        x
    }

    pub fn btran(&self, c: &mut [f64]) -> Vec<f64> {
        for eta in self.etas.iter().rev() {
            let mut s = c[eta.r];
            for &(i, a) in &eta.entries {
                s -= a * c[i];
            }
            c[eta.r] = s / eta.pivot;
        }
        self.lu.solve_transposed(c)
    }

    /// Record that position `r` now holds the column whose FTRAN is `alpha`.
    pub fn update(&mut self, r: usize, alpha: &[f64]) {
        let entries = alpha
            .iter()
            .enumerate()
            .filter(|&(i, &a)| i != r && a != 0.0)
            .map(|(i, &a)| (i, a))
            .collect();
        self.etas.push(Eta {
            r,
            pivot: alpha[r],
            entries,
        });
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn dense_to_cols(a: &[Vec<f64>]) -> Vec<Vec<(usize, f64)>> {
        let m = a.len();
        (0..m)
            .map(|j| (0..m).filter(|&i| a[i][j] != 0.0).map(|i| (i, a[i][j])).collect())
            .collect()
    }

    fn matvec(a: &[Vec<f64>], x: &[f64]) -> Vec<f64> {
        a.iter().map(|row| row.iter().zip(x).map(|(p, q)| p * q).sum()).collect()
    }

    fn mat_t_vec(a: &[Vec<f64>], y: &[f64]) -> Vec<f64> {
        let m = a.len();
        (0..m).map(|j| (0..m).map(|i| a[i][j] * y[i]).sum()).collect()
    }

    #[test]
    fn small_system() {
        let a = vec![vec![2.0, 0.0, 1.0], vec![1.0, 3.0, 0.0], vec![0.0, 1.0, 4.0]];
        let lu = LuFactors::factor(3, &dense_to_cols(&a)).unwrap();
        let b = vec![3.0, 4.0, 5.0];
        let x = lu.solve(&mut b.clone());
        let ax = matvec(&a, &x);
        for i in 0..3 {
            assert!((ax[i] - b[i]).abs() < 1e-12);
        }
        let y = lu.solve_transposed(&mut b.clone());
        let aty = mat_t_vec(&a, &y);
        for i in 0..3 {
            assert!((aty[i] - b[i]).abs() < 1e-12);
        }
    }

    #[test]
    fn singular_detected() {
        let a = vec![vec![1.0, 2.0, 0.0], vec![2.0, 4.0, 0.0], vec![0.0, 0.0, 1.0]];
        let err = LuFactors::factor(3, &dense_to_cols(&a)).unwrap_err();
        assert_eq!(err.positions.len(), 1);
        assert_eq!(err.rows.len(), 1);
    }

    #[test]
    fn empty_matrix() {
        let lu = LuFactors::factor(0, &[]).unwrap();
        assert!(lu.solve(&mut []).is_empty());
    }

    #[test]
    fn eta_updates_match_refactor() {
        let mut a = vec![vec![4.0, 1.0, 0.0], vec![1.0, 3.0, 1.0], vec![0.0, 1.0, 2.0]];
        let lu = LuFactors::factor(3, &dense_to_cols(&a)).unwrap();
        let mut f = BasisFactor::new(lu);
        let new_col = [1.0, -2.0, 5.0];
        let alpha = f.ftran(&mut new_col.to_vec());
        f.update(1, &alpha);
        for i in 0..3 {
            a[i][1] = new_col[i];
        }
        let b = vec![1.0, 2.0, 3.0];
        let x = f.ftran(&mut b.clone());
        let ax = matvec(&a, &x);
        let y = f.btran(&mut b.clone());
        let aty = mat_t_vec(&a, &y);
        for i in 0..3 {
            assert!((ax[i] - b[i]).abs() < 1e-12);
            assert!((aty[i] - b[i]).abs() < 1e-12);
        }
    }

    proptest! {
        #[test]
        fn random_sparse_solves(
            m in 1usize..25,
            seed_entries in prop::collection::vec((0usize..25, 0usize..25, -5.0..5.0f64), 0..80),
            rhs in prop::collection::vec(-10.0..10.0f64, 25),
        ) {
            // diagonally dominant sparse matrix with a random permutation of columns
            let mut a = vec![vec![0.0; m]; m];
            for (i, j, v) in seed_entries {
                if i < m && j < m { a[i][j] += v; }
            }
            for i in 0..m {
                let s: f64 = a[i].iter().map(|v| v.abs()).sum();
                a[i][(i * 7 + 3) % m] += s + 1.0;
            }
            prop_assume!((0..m).map(|i| (i * 7 + 3) % m).collect::<std::collections::HashSet<_>>().len() == m);
            let lu = LuFactors::factor(m, &dense_to_cols(&a)).unwrap();
            let b = &rhs[..m];
            let x = lu.solve(&mut b.to_vec());
            let ax = matvec(&a, &x);
            let y = lu.solve_transposed(&mut b.to_vec());
            let aty = mat_t_vec(&a, &y);
            for i in 0..m {
                prop_assert!((ax[i] - b[i]).abs() < 1e-9);
                prop_assert!((aty[i] - b[i]).abs() < 1e-9);
            }
        }
    }
}
