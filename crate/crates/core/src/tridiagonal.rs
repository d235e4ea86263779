//! Tridiagonal linear algebra: Thomas solve, symmetrization by diagonal
//! scaling, Sturm-sequence bisection for eigenvalues, and inverse
//! iteration for eigenvectors.

use crate::error::{Error, Result};

/// A tridiagonal matrix: `diag` has `size` entries, `upper[i]` couples
/// row i to column i+1, `lower[i]` couples row i+1 to column i.
#[derive(Debug, Clone)]
pub struct TridiagonalSystem {
    pub diag: Vec<f64>,
    pub upper: Vec<f64>,
    pub lower: Vec<f64>,
}

impl TridiagonalSystem {
    pub fn new(diag: Vec<f64>, upper: Vec<f64>, lower: Vec<f64>) -> Result<Self> {
        if diag.len() < 2 || upper.len() != diag.len() - 1 || lower.len() != diag.len() - 1 {
            return Err(Error::InvalidInput(format!(
                "inconsistent tridiagonal sizes: diag {}, upper {}, lower {}",
                diag.len(),
                upper.len(),
                lower.len()
            )));
        }
        Ok(TridiagonalSystem { diag, upper, lower })
    }

    pub fn size(&self) -> usize {
        self.diag.len()
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        let m = self.size();
        let mut y = vec![0.0; m];
        for i in 0..m {
            let mut v = self.diag[i] * x[i];
            if i > 0 {
                v += self.lower[i - 1] * x[i - 1];
            }
            if i + 1 < m {
                v += self.upper[i] * x[i + 1];
            }
            y[i] = v;
        }
        y
    }

    /// Thomas algorithm (no pivoting). O(size).
    pub fn solve(&self, rhs: &[f64]) -> Result<Vec<f64>> {
        let m = self.size();
        assert_eq!(rhs.len(), m);
        let mut c = vec![0.0; m]; // modified upper
        let mut d = vec![0.0; m]; // modified rhs
        let mut piv = self.diag[0];
        if piv == 0.0 {
            return Err(Error::NumericalBreakdown("zero pivot at row 0".into()));
        }
        c[0] = self.upper.first().copied().unwrap_or(0.0) / piv;
        d[0] = rhs[0] / piv;
        for i in 1..m {
            piv = self.diag[i] - self.lower[i - 1] * c[i - 1];
            if piv == 0.0 {
                return Err(Error::NumericalBreakdown(format!("zero pivot at row {i}")));
            }
            c[i] = if i + 1 < m { self.upper[i] / piv } else { 0.0 };
            d[i] = (rhs[i] - self.lower[i - 1] * d[i - 1]) / piv;
        }
        for i in (0..m - 1).rev() {
            d[i] -= c[i] * d[i + 1];
        }
        Ok(d)
    }

    /// Diagonal similarity to a symmetric tridiagonal matrix. Valid when
    /// `upper[i] * lower[i] >= 0` for all i (guaranteed for the weighted
    /// Laplacian discretizations built here, where both are negative).
    /// Returns (diag, offdiag) of the symmetric form.
    pub fn symmetrized(&self) -> Result<(Vec<f64>, Vec<f64>)> {
        let m = self.size();
        let mut off = vec![0.0; m - 1];
        for i in 0..m - 1 {
            let p = self.upper[i] * self.lower[i];
            if p < 0.0 {
                return Err(Error::NumericalBreakdown(format!(
                    "not symmetrizable: upper*lower < 0 at offset {i}"
                )));
            }
            off[i] = self.upper[i].signum() * p.sqrt();
        }
        Ok((self.diag.clone(), off))
    }
}

/// Number of eigenvalues of the symmetric tridiagonal (diag, off) that
/// are strictly below `x`, by the Sturm sequence / LDLᵀ negative-pivot
/// count.
pub fn eigenvalue_count_below(diag: &[f64], off: &[f64], x: f64) -> usize {
    let tiny = f64::MIN_POSITIVE.sqrt();
    let mut count = 0;
    let mut d = diag[0] - x;
    if d < 0.0 {
        count += 1;
    }
    for i in 1..diag.len() {
        if d == 0.0 {
            d = tiny;
        }
        d = diag[i] - x - off[i - 1] * off[i - 1] / d;
        if d < 0.0 {
            count += 1;
        }
    }
    count
}

/// k-th smallest eigenvalue (k = 0 is the smallest) of the symmetric
/// tridiagonal (diag, off), by bisection on the Sturm count.
pub fn kth_smallest_eigenvalue(diag: &[f64], off: &[f64], k: usize, tol: f64) -> f64 {
    // Gershgorin bounds
    let m = diag.len();
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..m {
        let mut r = 0.0;
        if i > 0 {
            r += off[i - 1].abs();
        }
        if i + 1 < m {
            r += off[i].abs();
        }
        lo = lo.min(diag[i] - r);
        hi = hi.max(diag[i] + r);
    }
    let scale = lo.abs().max(hi.abs()).max(1.0);
    while hi - lo > tol * scale.max(lo.abs().max(hi.abs())) {
        let mid = 0.5 * (lo + hi);
        if eigenvalue_count_below(diag, off, mid) > k {
            hi = mid;
        } else {
            lo = mid;
        }
        if hi - lo < f64::EPSILON * scale {
            break;
        }
    }
    0.5 * (lo + hi)
}

/// Solve (T - shift·I) x = b for symmetric tridiagonal T. Near-zero
/// pivots are replaced by a tiny value; inverse iteration only needs the
/// solve direction, not its accuracy, when the shift is near an
/// eigenvalue.
fn solve_shifted(diag: &[f64], off: &[f64], shift: f64, b: &[f64]) -> Vec<f64> {
    let m = diag.len();
    let scale = diag.iter().fold(1.0f64, |a, &x| a.max(x.abs()));
    let tiny = f64::EPSILON * scale;
    let guard = |p: f64| if p.abs() < tiny { if p < 0.0 { -tiny } else { tiny } } else { p };

    let mut d = vec![0.0; m]; // pivots
    let mut c = vec![0.0; m]; // modified superdiagonal ratios
    let mut rhs = b.to_vec();
    d[0] = guard(diag[0] - shift);
    c[0] = if m > 1 { off[0] / d[0] } else { 0.0 };
    rhs[0] /= d[0];
    for i in 1..m {
        d[i] = guard(diag[i] - shift - off[i - 1] * off[i - 1] / d[i - 1]);
        c[i] = if i + 1 < m { off[i] / d[i] } else { 0.0 };
        rhs[i] = (rhs[i] - off[i - 1] * rhs[i - 1]) / d[i];
    }
    for i in (0..m - 1).rev() {
        rhs[i] -= c[i] * rhs[i + 1];
    }
    rhs
}

/// Smallest (or smallest-positive when `exclude_null`) eigenvalue of a
/// system diagonally similar to a symmetric matrix with scaling weights
/// `weights` (√w_i scaling). Eigenvector by inverse iteration at the
/// converged value, with the constant mode deflated in the weighted
/// inner product when `exclude_null` is set.
///
/// The returned vector lives in the original (unsymmetrized)
/// coordinates, normalized so Σ w_i v_i² = 1.
pub fn smallest_eigenvalue(
    system: &TridiagonalSystem,
    weights: &[f64],
    exclude_null: bool,
    tol: f64,
) -> Result<(f64, Vec<f64>)> {
    let m = system.size();
    assert_eq!(weights.len(), m);
    let (diag, off) = system.symmetrized()?;
    // verify the claimed similarity: sqrt(w_i) u_i / sqrt(w_{i+1}) must
    // equal sqrt(w_{i+1}) l_i / sqrt(w_i)
    for i in 0..m - 1 {
        let a = system.upper[i] * weights[i];
        let b = system.lower[i] * weights[i + 1];
        let s = a.abs().max(b.abs()).max(1e-300);
        if (a - b).abs() / s > 1e-8 {
            return Err(Error::NumericalBreakdown(format!(
                "weights do not symmetrize the system at offset {i}: {a} vs {b}"
            )));
        }
    }
    let k = usize::from(exclude_null);
    let value = kth_smallest_eigenvalue(&diag, &off, k, tol);

    // deflation vector: constant in original coordinates = sqrt(w) in
    // symmetric coordinates
    let mut null_mode = vec![0.0; m];
    if exclude_null {
        let norm = weights.iter().map(|w| w).sum::<f64>().sqrt();
        for i in 0..m {
            null_mode[i] = weights[i].sqrt() / norm;
        }
    }

    // inverse iteration at a slightly detuned shift
    let scale = diag.iter().fold(1.0f64, |a, &x| a.max(x.abs()));
    let shift = value - 1e-8 * scale;
    let mut v: Vec<f64> = (0..m).map(|i| 1.0 + (i as f64 * 0.7).sin()).collect();
    deflate(&mut v, &null_mode, exclude_null);
    normalize(&mut v)?;
    let mut converged = false;
    for _ in 0..50 {
        let mut w = solve_shifted(&diag, &off, shift, &v);
        deflate(&mut w, &null_mode, exclude_null);
        let growth = w.iter().map(|x| x * x).sum::<f64>().sqrt();
        normalize(&mut w)?;
        let delta: f64 = w
            .iter()
            .zip(&v)
            .map(|(a, b)| (a - b).abs().min((a + b).abs()))
            .fold(0.0, f64::max);
        v = w;
        if growth > 1.0 / (1e3 * f64::EPSILON * scale) || delta < 1e-12 {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NumericalBreakdown(format!(
            "inverse iteration did not converge at eigenvalue {value}"
        )));
    }

    // back to original coordinates, weighted normalization
    let mut vec_orig: Vec<f64> = v
        .iter()
        .zip(weights)
        .map(|(x, w)| x / w.sqrt())
        .collect();
    let wnorm = vec_orig
        .iter()
        .zip(weights)
        .map(|(x, w)| w * x * x)
        .sum::<f64>()
        .sqrt();
    for x in &mut vec_orig {
        *x /= wnorm;
    }
    Ok((value, vec_orig))
}

fn deflate(v: &mut [f64], q: &[f64], active: bool) {
    if active {
        let dot: f64 = v.iter().zip(q).map(|(a, b)| a * b).sum();
        for (x, qi) in v.iter_mut().zip(q) {
            *x -= dot * qi;
        }
    }
}

fn normalize(v: &mut [f64]) -> Result<()> {
    let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if n == 0.0 || !n.is_finite() {
        return Err(Error::NumericalBreakdown("degenerate iterate in inverse iteration".into()));
    }
    for x in v.iter_mut() {
        *x /= n;
    }
    Ok(())
}
