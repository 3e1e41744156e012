//! Sparse storage for the forward model: CSR for rectangular operators
//! (strain observer, pressure-to-force map) and a symmetric profile
//! (skyline) format for the stiffness matrix.
//!
//! The shell mesher orders nodes station-by-station along the body axis,
//! so the stiffness profile stays narrow and a profile Cholesky
//! factorization is both exact and fast at desk scale.

use crate::error::{Error, Result};

/// Compressed sparse row matrix.
#[derive(Debug, Clone)]
pub struct CsrMatrix {
    nrows: usize,
    ncols: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<f64>,
}

impl CsrMatrix {
    /// Builds from unordered triplets; duplicates are summed.
    pub fn from_triplets(nrows: usize, ncols: usize, triplets: &mut Vec<(usize, usize, f64)>) -> Self {
        triplets.sort_unstable_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
        let mut rows = Vec::with_capacity(triplets.len());
        let mut col_idx = Vec::with_capacity(triplets.len());
        let mut values = Vec::with_capacity(triplets.len());
        for &(r, c, v) in triplets.iter() {
            assert!(r < nrows && c < ncols, "triplet out of bounds");
            if rows.last() == Some(&r) && col_idx.last() == Some(&c) {
                *values.last_mut().unwrap() += v;
            } else {
                rows.push(r);
                col_idx.push(c);
                values.push(v);
            }
        }
        let mut row_ptr = vec![0usize; nrows + 1];
        for &r in &rows {
            row_ptr[r + 1] += 1;
        }
        for i in 0..nrows {
            row_ptr[i + 1] += row_ptr[i];
        }
        CsrMatrix {
            nrows,
            ncols,
            row_ptr,
            col_idx,
            values,
        }
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn row(&self, i: usize) -> (&[usize], &[f64]) {
        let lo = self.row_ptr[i];
        let hi = self.row_ptr[i + 1];
        (&self.col_idx[lo..hi], &self.values[lo..hi])
    }

    /// y = A x
    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.ncols, "csr mul_vec dimension");
        let mut y = vec![0.0; self.nrows];
        for i in 0..self.nrows {
            let (cols, vals) = self.row(i);
            let mut acc = 0.0;
            for (&c, &v) in cols.iter().zip(vals) {
                acc += v * x[c];
            }
            y[i] = acc;
        }
        y
    }

    /// y = Aᵀ x
    pub fn tr_mul_vec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.nrows, "csr tr_mul_vec dimension");
        let mut y = vec![0.0; self.ncols];
        for i in 0..self.nrows {
            let (cols, vals) = self.row(i);
            for (&c, &v) in cols.iter().zip(vals) {
                y[c] += v * x[i];
            }
        }
        y
    }

    /// Sorted, deduplicated triplets (row, col, value) of the stored pattern.
    pub fn triplets(&self) -> Vec<(usize, usize, f64)> {
        let mut out = Vec::with_capacity(self.nnz());
        for i in 0..self.nrows {
            let (cols, vals) = self.row(i);
            for (&c, &v) in cols.iter().zip(vals) {
                out.push((i, c, v));
            }
        }
        out
    }
}

/// Symmetric matrix in profile (skyline) storage: row `i` stores columns
/// `first[i]..=i` contiguously. Only the lower triangle is kept.
#[derive(Debug, Clone)]
pub struct SkylineMatrix {
    n: usize,
    first: Vec<usize>,
    start: Vec<usize>,
    data: Vec<f64>,
}

impl SkylineMatrix {
    /// Allocates a zero matrix with the given row profile. `first[i]` is the
    /// lowest column index that row `i` may touch; entries left of the
    /// profile are structurally zero and stay zero under Cholesky.
    pub fn from_profile(first: Vec<usize>) -> Self {
        let n = first.len();
        for (i, &f) in first.iter().enumerate() {
            assert!(f <= i, "profile first[{i}] = {f} exceeds diagonal");
        }
        let mut start = Vec::with_capacity(n + 1);
        let mut acc = 0usize;
        for (i, &f) in first.iter().enumerate() {
            start.push(acc);
            acc += i - f + 1;
        }
        start.push(acc);
        SkylineMatrix {
            n,
            first,
            start,
            data: vec![0.0; acc],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn stored_len(&self) -> usize {
        self.data.len()
    }

    #[inline]
    fn pos(&self, i: usize, j: usize) -> usize {
        debug_assert!(j <= i && j >= self.first[i], "({i},{j}) outside profile");
        self.start[i] + (j - self.first[i])
    }

    /// Adds `v` at (i, j); symmetric storage accepts either triangle.
    #[inline]
    pub fn add(&mut self, i: usize, j: usize, v: f64) {
        let (r, c) = if j <= i { (i, j) } else { (j, i) };
        let p = self.pos(r, c);
        self.data[p] += v;
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let (r, c) = if j <= i { (i, j) } else { (j, i) };
        if c < self.first[r] {
            0.0
        } else {
            self.data[self.pos(r, c)]
        }
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        let (r, c) = if j <= i { (i, j) } else { (j, i) };
        let p = self.pos(r, c);
        self.data[p] = v;
    }

    /// y = A x with the full symmetric operator.
    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.n, "skyline mul_vec dimension");
        let mut y = vec![0.0; self.n];
        for i in 0..self.n {
            let f = self.first[i];
            let row = &self.data[self.start[i]..self.start[i + 1]];
            let mut acc = 0.0;
            for (k, &a) in row.iter().enumerate() {
                let j = f + k;
                acc += a * x[j];
                if j < i {
                    y[j] += a * x[i];
                }
            }
            y[i] += acc;
        }
        y
    }

    /// Applies homogeneous or inhomogeneous Dirichlet constraints by
    /// symmetric elimination: constrained rows/columns are zeroed, the
    /// diagonal set to one, and `rhs` receives the column correction so
    /// the reduced system reproduces the prescribed values exactly.
    pub fn reduce_dirichlet(&mut self, prescribed: &[Option<f64>], rhs: &mut [f64]) {
        assert_eq!(prescribed.len(), self.n);
        assert_eq!(rhs.len(), self.n);
        for i in 0..self.n {
            let f = self.first[i];
            let (lo, hi) = (self.start[i], self.start[i + 1]);
            for p in lo..hi {
                let j = f + (p - lo);
                let a = self.data[p];
                if a == 0.0 {
                    continue;
                }
                match (prescribed[i], prescribed[j]) {
                    (None, None) => {}
                    (Some(vi), None) => {
                        // entry couples a free dof j to constrained i
                        if j != i {
                            rhs[j] -= a * vi;
                        }
                        self.data[p] = 0.0;
                    }
                    (None, Some(vj)) => {
                        rhs[i] -= a * vj;
                        self.data[p] = 0.0;
                    }
                    (Some(_), Some(_)) => {
                        self.data[p] = 0.0;
                    }
                }
            }
        }
        for i in 0..self.n {
            if let Some(v) = prescribed[i] {
                let p = self.pos(i, i);
                self.data[p] = 1.0;
                rhs[i] = v;
            }
        }
    }

    /// Cholesky factorization A = L Lᵀ within the profile.
    pub fn factor(&self) -> Result<SkylineFactor> {
        let mut l = self.clone();
        let n = l.n;
        for i in 0..n {
            let fi = l.first[i];
            let si = l.start[i];
            let (done, rest) = l.data.split_at_mut(si);
            let row_i = &mut rest[..(i - fi + 1)];
            for j in fi..i {
                let fj = l.first[j];
                let lo = fi.max(fj);
                let a = &row_i[(lo - fi)..(j - fi)];
                let b = &done[(l.start[j] + lo - fj)..(l.start[j] + j - fj)];
                let mut dot = 0.0;
                for (x, y) in a.iter().zip(b) {
                    dot += x * y;
                }
                let diag_j = done[l.start[j] + (j - fj)];
                row_i[j - fi] = (row_i[j - fi] - dot) / diag_j;
            }
            let mut d = row_i[i - fi];
            for &x in &row_i[..(i - fi)] {
                d -= x * x;
            }
            if d <= 0.0 || !d.is_finite() {
                return Err(Error::NotPositiveDefinite { row: i, pivot: d });
            }
            row_i[i - fi] = d.sqrt();
        }
        Ok(SkylineFactor(l))
    }
}

/// Lower-triangular Cholesky factor in profile storage.
#[derive(Debug, Clone)]
pub struct SkylineFactor(SkylineMatrix);

impl SkylineFactor {
    pub fn n(&self) -> usize {
        self.0.n
    }

    /// Solves A x = b in place.
    pub fn solve_in_place(&self, b: &mut [f64]) {
        let m = &self.0;
        assert_eq!(b.len(), m.n, "skyline solve dimension");
        // forward: L y = b
        for i in 0..m.n {
            let f = m.first[i];
            let row = &m.data[m.start[i]..m.start[i + 1]];
            let mut acc = b[i];
            for (k, &a) in row[..(i - f)].iter().enumerate() {
                acc -= a * b[f + k];
            }
            b[i] = acc / row[i - f];
        }
        // backward: Lᵀ x = y
        for i in (0..m.n).rev() {
            let f = m.first[i];
            let row = &m.data[m.start[i]..m.start[i + 1]];
            let xi = b[i] / row[i - f];
            b[i] = xi;
            for (k, &a) in row[..(i - f)].iter().enumerate() {
                b[f + k] -= a * xi;
            }
        }
    }

    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let mut x = b.to_vec();
        self.solve_in_place(&mut x);
        x
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn csr_from_triplets_dedupes_and_multiplies() {
        let mut t = vec![
            (1usize, 0usize, 2.0),
            (0, 0, 1.0),
            (1, 0, 3.0),
            (0, 2, 4.0),
            (2, 1, 5.0),
        ];
        let m = CsrMatrix::from_triplets(3, 3, &mut t);
        assert_eq!(m.nnz(), 4);
        let y = m.mul_vec(&[1.0, 1.0, 1.0]);
        assert_eq!(y, vec![5.0, 5.0, 5.0]);
        let yt = m.tr_mul_vec(&[1.0, 1.0, 1.0]);
        assert_eq!(yt, vec![6.0, 5.0, 4.0]);
    }

    #[test]
    fn skyline_identity_scaled() {
        // A = 2I (2x2), f = (2,4) -> u = (1,2)
        let mut a = SkylineMatrix::from_profile(vec![0, 1]);
        a.set(0, 0, 2.0);
        a.set(1, 1, 2.0);
        let f = a.factor().unwrap();
        let u = f.solve(&[2.0, 4.0]);
        assert_relative_eq!(u[0], 1.0, max_relative = 1e-14);
        assert_relative_eq!(u[1], 2.0, max_relative = 1e-14);
    }

    #[test]
    fn skyline_dense_spd_roundtrip() {
        // deterministic pseudo-random SPD: M^T M + n I, full profile
        let n = 24;
        let mut m = vec![vec![0.0f64; n]; n];
        let mut s = 123456789u64;
        let mut next = move || {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((s >> 11) as f64) / ((1u64 << 53) as f64) - 0.5
        };
        for r in m.iter_mut() {
            for v in r.iter_mut() {
                *v = next();
            }
        }
        let mut a = SkylineMatrix::from_profile((0..n).map(|_| 0).collect());
        for i in 0..n {
            for j in 0..=i {
                let mut acc = if i == j { n as f64 } else { 0.0 };
                for (rk, row) in m.iter().enumerate() {
                    let _ = rk;
                    acc += row[i] * row[j];
                }
                a.set(i, j, acc);
            }
        }
        let b: Vec<f64> = (0..n).map(|i| (i as f64).sin() + 2.0).collect();
        let x = a.factor().unwrap().solve(&b);
        let r = a.mul_vec(&x);
        let mut err: f64 = 0.0;
        let mut nb: f64 = 0.0;
        for i in 0..n {
            err += (r[i] - b[i]).powi(2);
            nb += b[i].powi(2);
        }
        assert!(err.sqrt() <= 1e-10 * nb.sqrt(), "residual {} too large", err.sqrt());
    }

    #[test]
    fn skyline_not_spd_reports_row() {
        let mut a = SkylineMatrix::from_profile(vec![0, 0]);
        a.set(0, 0, 1.0);
        a.set(1, 0, 3.0);
        a.set(1, 1, 1.0); // 1 - 9 < 0
        match a.factor() {
            Err(Error::NotPositiveDefinite { row, .. }) => assert_eq!(row, 1),
            other => panic!("expected NotPositiveDefinite, got {other:?}"),
        }
    }

    #[test]
    fn dirichlet_reduction_inhomogeneous() {
        // 3x3 SPD; constrain x1 = 2 and check the reduced solve matches
        // solving the full system with the constraint row replaced.
        let mut a = SkylineMatrix::from_profile(vec![0, 0, 0]);
        let dense = [[4.0, 1.0, 0.5], [1.0, 3.0, 0.7], [0.5, 0.7, 5.0]];
        for i in 0..3 {
            for j in 0..=i {
                a.set(i, j, dense[i][j]);
            }
        }
        let mut rhs = vec![1.0, 9.0, 2.0];
        let prescribed = vec![None, Some(2.0), None];
        a.reduce_dirichlet(&prescribed, &mut rhs);
        let x = a.factor().unwrap().solve(&rhs);
        assert_relative_eq!(x[1], 2.0, max_relative = 1e-14);
        // residual of the free equations of the original system
        let r0 = dense[0][0] * x[0] + dense[0][1] * x[1] + dense[0][2] * x[2] - 1.0;
        let r2 = dense[2][0] * x[0] + dense[2][1] * x[1] + dense[2][2] * x[2] - 2.0;
        assert!(r0.abs() < 1e-12 && r2.abs() < 1e-12, "free residual {r0} {r2}");
    }

    #[test]
    fn skyline_matvec_symmetric() {
        let mut a = SkylineMatrix::from_profile(vec![0, 0, 1]);
        a.set(0, 0, 2.0);
        a.set(1, 0, -1.0);
        a.set(1, 1, 2.0);
        a.set(2, 1, -1.0);
        a.set(2, 2, 2.0);
        let y = a.mul_vec(&[1.0, 2.0, 3.0]);
        assert_eq!(y, vec![0.0, 0.0, 4.0]);
    }
}
