//! Uniform grids, sampled fields and the numerical kernels shared by every
//! other module: finite differences, cumulative trapezoid quadrature, a
//! symmetric tridiagonal eigensolver, and root/extremum location.

use crate::error::{Error, Result};

/// A uniform grid on `[xi_min, xi_max]` in the traveling coordinate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    xi_min: f64,
    xi_max: f64,
    n: usize,
    h: f64,
}

impl Grid {
    pub fn new(xi_min: f64, xi_max: f64, n: usize) -> Result<Self> {
        if !(xi_min.is_finite() && xi_max.is_finite()) || xi_max <= xi_min {
            return Err(Error::InvalidBounds { xi_min, xi_max });
        }
        if n < 3 {
            return Err(Error::TooFewPoints(n));
        }
        let h = (xi_max - xi_min) / (n - 1) as f64;
        Ok(Self { xi_min, xi_max, n, h })
    }

    pub fn xi_min(&self) -> f64 {
        self.xi_min
    }

    pub fn xi_max(&self) -> f64 {
        self.xi_max
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    fn is_symmetric(&self) -> bool {
        self.xi_min == -self.xi_max && self.n % 2 == 1
    }

    /// Point `i`. Symmetric grids with an odd point count are laid out from
    /// the center so the middle point is exactly zero.
    pub fn point(&self, i: usize) -> f64 {
        if i == self.n - 1 {
            return self.xi_max;
        }
        if self.is_symmetric() {
            let c = (self.n - 1) / 2;
            (i as f64 - c as f64) * self.h
        } else {
            self.xi_min + i as f64 * self.h
        }
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.point(i)).collect()
    }

    /// Index of the point closest to `xi = 0`.
    pub fn anchor(&self) -> usize {
        self.nearest_index(0.0)
    }

    pub fn nearest_index(&self, xi: f64) -> usize {
        let t = ((xi - self.xi_min) / self.h).round();
        t.clamp(0.0, (self.n - 1) as f64) as usize
    }

    /// Same interval with (approximately) half the spacing: `2n - 1` points.
    pub fn refined(&self) -> Self {
        Self::new(self.xi_min, self.xi_max, 2 * self.n - 1).expect("refinement of a valid grid")
    }

    pub fn sample(&self, f: impl Fn(f64) -> f64) -> Result<SampledField> {
        SampledField::new(*self, self.points().into_iter().map(f).collect())
    }
}

/// Builds a uniform grid; see [`Grid::new`].
pub fn make_grid(xi_min: f64, xi_max: f64, n: usize) -> Result<Grid> {
    Grid::new(xi_min, xi_max, n)
}

/// Values of a function on every point of a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledField {
    grid: Grid,
    values: Vec<f64>,
}

impl SampledField {
    pub fn new(grid: Grid, values: Vec<f64>) -> Result<Self> {
        let field = Self::new_unchecked(grid, values)?;
        if let Some(i) = field.values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite(i));
        }
        Ok(field)
    }

    /// Length-checked only. Used for deformed fields, which may blow up at
    /// an isolated singularity.
    pub fn new_unchecked(grid: Grid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::LengthMismatch { expected: grid.len(), got: values.len() });
        }
        Ok(Self { grid, values })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> SampledField {
        SampledField { grid: self.grid, values: self.values.iter().map(|&v| f(v)).collect() }
    }

    pub fn zip_with(&self, other: &SampledField, f: impl Fn(f64, f64) -> f64) -> SampledField {
        debug_assert_eq!(self.grid, other.grid);
        SampledField {
            grid: self.grid,
            values: self.values.iter().zip(&other.values).map(|(&a, &b)| f(a, b)).collect(),
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Composite-trapezoid integral over the whole grid.
    pub fn integral(&self) -> f64 {
        let h = self.grid.h;
        let v = &self.values;
        h * (v.iter().sum::<f64>() - 0.5 * (v[0] + v[v.len() - 1]))
    }
}

/// Finite-difference derivative of order 1 or 2: central differences in
/// the interior, second-order one-sided stencils at both ends.
pub fn differentiate(field: &SampledField, order: u8) -> SampledField {
    assert!(order == 1 || order == 2, "derivative order must be 1 or 2");
    let f = &field.values;
    let n = f.len();
    let h = field.grid.h;
    let mut d = vec![0.0; n];
    if order == 1 {
        let c = 0.5 / h;
        for i in 1..n - 1 {
            d[i] = (f[i + 1] - f[i - 1]) * c;
        }
        d[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) * c;
        d[n - 1] = (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) * c;
    } else {
        let c = 1.0 / (h * h);
        for i in 1..n - 1 {
            d[i] = (f[i + 1] - 2.0 * f[i] + f[i - 1]) * c;
        }
        if n >= 4 {
            d[0] = (2.0 * f[0] - 5.0 * f[1] + 4.0 * f[2] - f[3]) * c;
            d[n - 1] = (2.0 * f[n - 1] - 5.0 * f[n - 2] + 4.0 * f[n - 3] - f[n - 4]) * c;
        } else {
            d[0] = d[1];
            d[n - 1] = d[1];
        }
    }
    SampledField { grid: field.grid, values: d }
}

/// Cumulative trapezoid integral, zero at `anchor` and negative to its left.
pub fn cumulative_integral(field: &SampledField, anchor: usize) -> Result<SampledField> {
    let f = &field.values;
    let n = f.len();
    if anchor >= n {
        return Err(Error::IndexOutOfRange { index: anchor, len: n });
    }
    let half_h = 0.5 * field.grid.h;
    let mut out = vec![0.0; n];
    for i in anchor + 1..n {
        out[i] = out[i - 1] + half_h * (f[i - 1] + f[i]);
    }
    for i in (0..anchor).rev() {
        out[i] = out[i + 1] - half_h * (f[i] + f[i + 1]);
    }
    Ok(SampledField { grid: field.grid, values: out })
}

/// One eigenpair of a symmetric tridiagonal matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenPair {
    pub value: f64,
    pub vector: Vec<f64>,
}

/// Number of eigenvalues strictly below `x` (Sturm sequence count).
fn sturm_count(diag: &[f64], off: &[f64], x: f64, pivmin: f64) -> usize {
    let mut count = 0;
    let mut q = diag[0] - x;
    if q.abs() < pivmin {
        q = -pivmin;
    }
    if q < 0.0 {
        count += 1;
    }
    for i in 1..diag.len() {
        q = diag[i] - x - off[i - 1] * off[i - 1] / q;
        if q.abs() < pivmin {
            q = -pivmin;
        }
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

/// Solves `(T - shift) x = b` in place for symmetric tridiagonal `T`, by
/// Gaussian elimination with partial pivoting. Zero pivots are replaced by
/// `tiny`, which is what inverse iteration wants.
fn shifted_solve(diag: &[f64], off: &[f64], shift: f64, tiny: f64, b: &mut [f64]) {
    let n = diag.len();
    if n == 1 {
        let p = diag[0] - shift;
        b[0] /= if p.abs() < tiny { tiny } else { p };
        return;
    }
    // Row i of U holds (u0, u1, u2) at columns i, i+1, i+2.
    let mut u0 = vec![0.0; n];
    let mut u1 = vec![0.0; n];
    let mut u2 = vec![0.0; n];
    let mut cur_d = diag[0] - shift;
    let mut cur_e = off[0];
    for i in 0..n - 1 {
        let sub = off[i];
        let next_d = diag[i + 1] - shift;
        let next_e = if i + 1 < n - 1 { off[i + 1] } else { 0.0 };
        if cur_d.abs() >= sub.abs() {
            let piv = if cur_d.abs() < tiny { tiny.copysign(cur_d) } else { cur_d };
            let m = sub / piv;
            u0[i] = piv;
            u1[i] = cur_e;
            u2[i] = 0.0;
            b[i + 1] -= m * b[i];
            cur_d = next_d - m * cur_e;
            cur_e = next_e;
        } else {
            let m = cur_d / sub;
            u0[i] = sub;
            u1[i] = next_d;
            u2[i] = next_e;
            b.swap(i, i + 1);
            b[i + 1] -= m * b[i];
            cur_d = cur_e - m * next_d;
            cur_e = -m * next_e;
        }
    }
    u0[n - 1] = if cur_d.abs() < tiny { tiny } else { cur_d };
    b[n - 1] /= u0[n - 1];
    b[n - 2] = (b[n - 2] - u1[n - 2] * b[n - 1]) / u0[n - 2];
    for i in (0..n.saturating_sub(2)).rev() {
        b[i] = (b[i] - u1[i] * b[i + 1] - u2[i] * b[i + 2]) / u0[i];
    }
}

/// The `k` algebraically smallest eigenpairs of the symmetric tridiagonal
/// matrix with diagonal `diag` and off-diagonal `offdiag`.
///
/// Eigenvalues come from Sturm-sequence bisection, eigenvectors from
/// inverse iteration with reorthogonalization against the earlier vectors.
/// Vectors are scaled to unit `weight`-weighted norm (`weight * sum v^2 = 1`)
/// and signed so that the largest-magnitude entry is positive.
pub fn solve_tridiag_eigen(diag: &[f64], offdiag: &[f64], k: usize, weight: f64) -> Result<Vec<EigenPair>> {
    let n = diag.len();
    if k == 0 || k > n {
        return Err(Error::ModeCountOutOfRange { k, dim: n });
    }
    assert_eq!(offdiag.len() + 1, n, "off-diagonal must have n - 1 entries");

    if n == 1 {
        return Ok(vec![EigenPair { value: diag[0], vector: vec![1.0 / weight.sqrt()] }]);
    }

    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    let mut norm: f64 = 0.0;
    for i in 0..n {
        let r = if i > 0 { offdiag[i - 1].abs() } else { 0.0 }
            + if i < n - 1 { offdiag[i].abs() } else { 0.0 };
        lo = lo.min(diag[i] - r);
        hi = hi.max(diag[i] + r);
        norm = norm.max(diag[i].abs() + r);
    }
    let max_e2 = offdiag.iter().fold(1.0f64, |m, e| m.max(e * e));
    let pivmin = f64::MIN_POSITIVE * max_e2;
    let eps = f64::EPSILON;
    let pad = 2.0 * eps * norm.max(1.0);
    lo -= pad;
    hi += pad;

    let mut pairs: Vec<EigenPair> = Vec::with_capacity(k);
    for j in 0..k {
        let (mut a, mut b) = (lo, hi);
        for _ in 0..256 {
            let mid = 0.5 * (a + b);
            if mid <= a || mid >= b || b - a <= 2.0 * eps * (a.abs().max(b.abs())) + pivmin {
                break;
            }
            if sturm_count(diag, offdiag, mid, pivmin) > j {
                b = mid;
            } else {
                a = mid;
            }
        }
        let value = 0.5 * (a + b);

        // Deterministic, generic start vector.
        let mut v: Vec<f64> = (0..n).map(|i| 1.0 + 0.5 * ((i as f64) * 0.7548776662 + j as f64).sin()).collect();
        let tiny = eps * norm.max(f64::MIN_POSITIVE);
        for _ in 0..8 {
            shifted_solve(diag, offdiag, value, tiny, &mut v);
            for p in &pairs {
                let dot: f64 = v.iter().zip(&p.vector).map(|(x, y)| x * y).sum::<f64>() * weight;
                for (x, y) in v.iter_mut().zip(&p.vector) {
                    *x -= dot * y;
                }
            }
            let s = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            v.iter_mut().for_each(|x| *x /= s);
            let res = residual_inf(diag, offdiag, value, &v);
            if res <= 1e-3 * eps * norm.max(1.0) * (n as f64).sqrt() {
                break;
            }
        }
        let scale = 1.0 / (weight * v.iter().map(|x| x * x).sum::<f64>()).sqrt();
        let peak = v
            .iter()
            .enumerate()
            .fold((0usize, 0.0f64), |(bi, bv), (i, x)| if x.abs() > bv { (i, x.abs()) } else { (bi, bv) })
            .0;
        let sign = if v[peak] < 0.0 { -1.0 } else { 1.0 };
        v.iter_mut().for_each(|x| *x *= sign * scale);
        pairs.push(EigenPair { value, vector: v });
    }
    Ok(pairs)
}

/// `max_i |(T v - value v)_i|`.
pub fn residual_inf(diag: &[f64], offdiag: &[f64], value: f64, v: &[f64]) -> f64 {
    let n = diag.len();
    (0..n)
        .map(|i| {
            let mut r = (diag[i] - value) * v[i];
            if i > 0 {
                r += offdiag[i - 1] * v[i - 1];
            }
            if i + 1 < n {
                r += offdiag[i] * v[i + 1];
            }
            r.abs()
        })
        .fold(0.0, f64::max)
}

/// Infinity norm of a symmetric tridiagonal matrix.
pub fn tridiag_norm_inf(diag: &[f64], offdiag: &[f64]) -> f64 {
    let n = diag.len();
    (0..n)
        .map(|i| {
            diag[i].abs()
                + if i > 0 { offdiag[i - 1].abs() } else { 0.0 }
                + if i + 1 < n { offdiag[i].abs() } else { 0.0 }
        })
        .fold(0.0, f64::max)
}

/// Bisection on a bracketing interval `[a, b]` until `|f| < tol`.
pub fn bisect(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let mut fa = f(a);
    if fa == 0.0 {
        return a;
    }
    if f(b) == 0.0 {
        return b;
    }
    let mut mid = 0.5 * (a + b);
    for _ in 0..200 {
        mid = 0.5 * (a + b);
        let fm = f(mid);
        if fm.abs() < tol || mid <= a.min(b) || mid >= a.max(b) {
            break;
        }
        if (fm < 0.0) == (fa < 0.0) {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
    }
    mid
}

/// Locates the single sign change of a (monotone) sampled field.
///
/// Returns `Ok(None)` when the field never changes sign and
/// [`Error::MultipleBrackets`] when it does so more than once. The root is
/// refined by bisection on the piecewise-linear interpolant of the samples.
pub fn find_root(field: &SampledField) -> Result<Option<f64>> {
    let f = &field.values;
    let grid = &field.grid;
    let scale = field.max_abs().max(f64::MIN_POSITIVE);

    // Exact zeros count once per run; strict sign flips count once each.
    let mut brackets: Vec<(usize, usize)> = Vec::new();
    let mut i = 0;
    while i < f.len() {
        if f[i] == 0.0 {
            let start = i;
            while i + 1 < f.len() && f[i + 1] == 0.0 {
                i += 1;
            }
            brackets.push((start, i));
        } else if i + 1 < f.len() && f[i + 1] != 0.0 && (f[i] < 0.0) != (f[i + 1] < 0.0) {
            brackets.push((i, i + 1));
        }
        i += 1;
    }
    match brackets.len() {
        0 => Ok(None),
        1 => {
            let (a, b) = brackets[0];
            if f[a] == 0.0 {
                return Ok(Some(0.5 * (grid.point(a) + grid.point(b))));
            }
            let (xa, xb) = (grid.point(a), grid.point(b));
            let (fa, fb) = (f[a], f[b]);
            let interp = |x: f64| fa + (fb - fa) * (x - xa) / (xb - xa);
            Ok(Some(bisect(interp, xa, xb, 1e-12 * scale)))
        }
        m => Err(Error::MultipleBrackets(m)),
    }
}

/// Strict interior local minima, each refined by a three-point parabola.
pub fn find_local_minima(field: &SampledField) -> Vec<(f64, f64)> {
    let f = &field.values;
    let h = field.grid.h;
    (1..f.len() - 1)
        .filter(|&i| f[i] < f[i - 1] && f[i] < f[i + 1])
        .map(|i| {
            let (fm, f0, fp) = (f[i - 1], f[i], f[i + 1]);
            let curv = fm - 2.0 * f0 + fp;
            let x = field.grid.point(i) + 0.5 * h * (fm - fp) / curv;
            let v = f0 - (fp - fm) * (fp - fm) / (8.0 * curv);
            (x, v)
        })
        .collect()
}
