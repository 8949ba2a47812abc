//! Grid Schrödinger operator `-d^2/dxi^2 + u` with Dirichlet ends, its
//! lowest modes, and the checks built on them.

use crate::darboux::DeformedFamily;
use crate::error::{Error, Result};
use crate::numerics::{differentiate, residual_inf, solve_tridiag_eigen, tridiag_norm_inf, Grid, SampledField};

/// Largest number of modes `lowest_modes` will compute.
pub const MAX_MODES: usize = 8;

/// Three-point discretization on the interior points of a grid.
#[derive(Debug, Clone)]
pub struct Hamiltonian {
    grid: Grid,
    diag: Vec<f64>,
    offdiag: Vec<f64>,
}

impl Hamiltonian {
    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    pub fn offdiag(&self) -> &[f64] {
        &self.offdiag
    }

    pub fn norm_inf(&self) -> f64 {
        tridiag_norm_inf(&self.diag, &self.offdiag)
    }
}

pub fn discretize(u: &SampledField) -> Result<Hamiltonian> {
    let grid = *u.grid();
    let n = grid.len();
    let h2 = grid.h() * grid.h();
    let interior = &u.values()[1..n - 1];
    if let Some(i) = interior.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFinite(i + 1));
    }
    Ok(Hamiltonian {
        grid,
        diag: interior.iter().map(|v| 2.0 / h2 + v).collect(),
        offdiag: vec![-1.0 / h2; n - 3],
    })
}

#[derive(Debug, Clone)]
pub struct SpectrumResult {
    pub eigenvalues: Vec<f64>,
    /// Full-grid eigenfunctions, zero at both ends, unit trapezoid norm,
    /// positive at their largest-magnitude entry.
    pub eigenfunctions: Vec<SampledField>,
    /// `‖H phi_i - e_i phi_i‖∞` of the discrete problem.
    pub residuals: Vec<f64>,
}

pub fn lowest_modes(h: &Hamiltonian, k: usize) -> Result<SpectrumResult> {
    if k == 0 || k > MAX_MODES {
        return Err(Error::ModeCountOutOfRange { k, dim: MAX_MODES });
    }
    let pairs = solve_tridiag_eigen(&h.diag, &h.offdiag, k, h.grid.h())?;
    let mut out = SpectrumResult { eigenvalues: Vec::new(), eigenfunctions: Vec::new(), residuals: Vec::new() };
    for p in pairs {
        out.residuals.push(residual_inf(&h.diag, &h.offdiag, p.value, &p.vector));
        let mut full = Vec::with_capacity(h.grid.len());
        full.push(0.0);
        full.extend_from_slice(&p.vector);
        full.push(0.0);
        out.eigenvalues.push(p.value);
        out.eigenfunctions.push(SampledField::new(h.grid, full)?);
    }
    Ok(out)
}

/// `sup |phi'' + (eps - u) phi| / max |phi|` over interior points outside
/// `exclusion`, with a finite-difference second derivative.
pub fn verify_eigenpair(u: &SampledField, phi: &SampledField, eps: f64, exclusion: Option<(f64, f64)>) -> f64 {
    let grid = *phi.grid();
    let keep = |i: usize| match exclusion {
        Some((a, b)) => {
            let x = grid.point(i);
            x < a || x > b
        }
        None => true,
    };
    let d2 = differentiate(phi, 2);
    let n = grid.len();
    let scale = (1..n - 1)
        .filter(|&i| keep(i))
        .map(|i| phi.values()[i].abs())
        .fold(0.0, f64::max)
        .max(f64::MIN_POSITIVE);
    (1..n - 1)
        .filter(|&i| keep(i))
        .map(|i| (d2.values()[i] + (eps - u.values()[i]) * phi.values()[i]).abs())
        .fold(0.0, f64::max)
        / scale
}

pub fn splitting(spec: &SpectrumResult) -> Result<f64> {
    match spec.eigenvalues.as_slice() {
        [e0, e1, ..] => Ok(e1 - e0),
        other => Err(Error::InsufficientModes(other.len())),
    }
}

/// Sign changes of a field, ignoring entries below `1e-8 max|f|`.
pub fn node_count(field: &SampledField) -> usize {
    let floor = 1e-8 * field.max_abs();
    let mut last = 0.0f64;
    let mut nodes = 0;
    for &v in field.values() {
        if v.abs() <= floor {
            continue;
        }
        if last != 0.0 && (v < 0.0) != (last < 0.0) {
            nodes += 1;
        }
        last = v;
    }
    nodes
}

/// `max_{i<k} |e_i(u) - e_i(u_lambda)|`. Refuses potentials that are not
/// finite on the grid interior.
pub fn isospectrality_check(u: &SampledField, u_lambda: &SampledField, k: usize) -> Result<f64> {
    let n = u_lambda.grid().len();
    if let Some(i) = u_lambda.values()[1..n - 1].iter().position(|v| !v.is_finite()) {
        return Err(Error::SingularPotential(u_lambda.grid().point(i + 1)));
    }
    let a = lowest_modes(&discretize(u)?, k)?;
    let b = lowest_modes(&discretize(u_lambda)?, k)?;
    Ok(a.eigenvalues.iter().zip(&b.eigenvalues).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max))
}

/// [`isospectrality_check`] for a deformed family, refused outright when
/// the family has a pole on the grid.
pub fn family_isospectrality(u: &SampledField, family: &DeformedFamily, k: usize) -> Result<f64> {
    if let Some(xs) = family.singularity {
        return Err(Error::SingularPotential(xs));
    }
    isospectrality_check(u, &family.u_lambda, k)
}
