//! Banded LU factorization with partial pivoting, LAPACK-style storage:
//! the factored band holds ku + kl superdiagonals (fill-in from pivoting)
//! and kl subdiagonals.

#[derive(Debug)]
pub struct BandedLu {
    dim: usize,
    kl: usize,
    ku: usize,
    /// Row-major band storage: ab[r][j] is entry (j + r - kl - ku, j).
    ab: Vec<f64>,
    pivots: Vec<usize>,
    width: usize,
    pub smallest_pivot: f64,
}

/// Builds and factors a banded matrix from sparse rows. Fails when a pivot
/// column is numerically zero, reporting the magnitude encountered.
pub fn factor(dim: usize, rows: &[Vec<(usize, f64)>]) -> Result<BandedLu, f64> {
    assert_eq!(rows.len(), dim);
    let mut kl = 0usize;
    let mut ku = 0usize;
    for (i, row) in rows.iter().enumerate() {
        for &(j, _) in row {
            if j < i {
                kl = kl.max(i - j);
            } else {
                ku = ku.max(j - i);
            }
        }
    }
    let width = kl + ku + kl + 1; // extra kl rows of fill-in
    let mut ab = vec![0.0; width * dim];
    let offset = kl + ku;
    for (i, row) in rows.iter().enumerate() {
        for &(j, v) in row {
            ab[(offset + i - j) * dim + j] = v;
        }
    }
    let mut pivots = vec![0usize; dim];
    let mut smallest = f64::INFINITY;
    for col in 0..dim {
        // Pivot search in rows col..=col+kl (band rows offset..offset+kl).
        let reach = kl.min(dim - 1 - col);
        let mut best = 0usize;
        let mut best_val = ab[offset * dim + col].abs();
        for r in 1..=reach {
            let v = ab[(offset + r) * dim + col].abs();
            if v > best_val {
                best_val = v;
                best = r;
            }
        }
        if best_val == 0.0 {
            return Err(0.0);
        }
        smallest = smallest.min(best_val);
        pivots[col] = col + best;
        if best != 0 {
            // Swap rows col and col+best within the band.
            let span = (ku + kl).min(dim - 1 - col);
            for d in 0..=span {
                let j = col + d;
                let a = (offset + best - d) * dim + j;
                let b = (offset - d) * dim + j;
                ab.swap(a, b);
            }
        }
        let pivot = ab[offset * dim + col];
        let reach = kl.min(dim - 1 - col);
        for r in 1..=reach {
            let idx = (offset + r) * dim + col;
            let m = ab[idx] / pivot;
            ab[idx] = m;
            if m != 0.0 {
                let span = (ku + kl).min(dim - 1 - col);
                for d in 1..=span {
                    let j = col + d;
                    let upper = ab[(offset - d) * dim + j];
                    if upper != 0.0 {
                        ab[(offset + r - d) * dim + j] -= m * upper;
                    }
                }
            }
        }
    }
    Ok(BandedLu { dim, kl, ku, ab, pivots, width, smallest_pivot: smallest })
}

impl BandedLu {
    pub fn solve(&self, rhs: &mut [f64]) {
        assert_eq!(rhs.len(), self.dim);
        let offset = self.kl + self.ku;
        let _ = self.width;
        // Forward: apply permutation and L.
        for col in 0..self.dim {
            let p = self.pivots[col];
            if p != col {
                rhs.swap(col, p);
            }
            let reach = self.kl.min(self.dim - 1 - col);
            for r in 1..=reach {
                let m = self.ab[(offset + r) * self.dim + col];
                if m != 0.0 {
                    rhs[col + r] -= m * rhs[col];
                }
            }
        }
        // Backward: solve U x = y.
        for col in (0..self.dim).rev() {
            let span = (self.ku + self.kl).min(self.dim - 1 - col);
            let mut acc = rhs[col];
            for d in 1..=span {
                let u = self.ab[(offset - d) * self.dim + (col + d)];
                if u != 0.0 {
                    acc -= u * rhs[col + d];
                }
            }
            rhs[col] = acc / self.ab[offset * self.dim + col];
        }
    }
}

/// Sparse matrix-vector product over row-compressed storage.
pub fn spmv(rows: &[Vec<(usize, f64)>], x: &[f64]) -> Vec<f64> {
    rows.iter()
        .map(|row| row.iter().map(|&(j, w)| w * x[j]).sum())
        .collect()
}
