//! Roots of the cubic `psi^3 - psi - sigma`, the Montroll kink built on two
//! of them, and the residual of the traveling reaction-diffusion equation
//! `psi'' + rho psi' - psi^3 + psi + sigma = 0`.

use std::f64::consts::{PI, SQRT_2};

use crate::error::{Error, Result};
use crate::numerics::{differentiate, Grid, SampledField};

/// `|sigma|` at which two roots of the cubic merge.
pub const SIGMA_CRITICAL: f64 = 0.384_900_179_459_750_5; // 2 / (3 sqrt 3)

/// The three real roots of `psi^3 - psi - sigma`, ordered
/// `alpha1 > alpha3 > alpha2` so that `(alpha1, alpha2)` are the outer
/// equilibria a kink connects.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CubicRoots {
    pub alpha1: f64,
    pub alpha2: f64,
    pub alpha3: f64,
    pub sigma: f64,
}

impl CubicRoots {
    /// Coefficients `(1, c2, c1, c0)` of `(psi - a1)(psi - a2)(psi - a3)`.
    pub fn expanded(&self) -> [f64; 4] {
        let (a, b, c) = (self.alpha1, self.alpha2, self.alpha3);
        [1.0, -(a + b + c), a * b + a * c + b * c, -(a * b * c)]
    }
}

/// Solves `psi^3 - psi - sigma = 0` by the trigonometric method, polished
/// with two Newton steps per root.
pub fn solve_cubic(sigma: f64) -> Result<CubicRoots> {
    if !sigma.is_finite() || sigma.abs() >= SIGMA_CRITICAL {
        return Err(Error::ComplexRoots(sigma));
    }
    let r = 2.0 / 3f64.sqrt();
    let theta = (sigma * 1.5 * 3f64.sqrt()).acos();
    let mut roots = [0.0; 3];
    for (k, root) in roots.iter_mut().enumerate() {
        let mut x = r * (theta / 3.0 - 2.0 * PI * k as f64 / 3.0).cos();
        for _ in 0..2 {
            let d = 3.0 * x * x - 1.0;
            if d != 0.0 {
                x -= (x * x * x - x - sigma) / d;
            }
        }
        *root = x;
    }
    roots.sort_by(|a, b| b.total_cmp(a));
    Ok(CubicRoots { alpha1: roots[0], alpha2: roots[2], alpha3: roots[1], sigma })
}

/// Steepness and offset of a Montroll kink joining `alpha1` and `alpha2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KinkParams {
    pub alpha1: f64,
    pub alpha2: f64,
    pub beta: f64,
    pub gamma: f64,
    pub vieta_checked: bool,
}

impl KinkParams {
    /// The other offset printed next to `gamma = alpha1 + alpha2`,
    /// `1 + alpha1 sqrt2 / beta`. The two agree only for special pairs.
    pub fn gamma_alternative(&self) -> f64 {
        1.0 + self.alpha1 * SQRT_2 / self.beta
    }

    /// `alpha1^2 + alpha1 alpha2 + alpha2^2`, equal to 1 exactly when both
    /// endpoints are roots of `psi^3 - psi - sigma` for a common sigma.
    pub fn vieta_form(&self) -> f64 {
        vieta_form(self.alpha1, self.alpha2)
    }

    /// Driving field `sigma = -alpha1 alpha2 (alpha1 + alpha2)` of a
    /// root-consistent pair.
    pub fn sigma(&self) -> f64 {
        -self.alpha1 * self.alpha2 * (self.alpha1 + self.alpha2)
    }

    /// Friction at which the kink solves the traveling equation,
    /// `3 gamma / sqrt2` (requires a root-consistent pair).
    pub fn critical_friction(&self) -> f64 {
        3.0 * self.gamma / SQRT_2
    }
}

fn vieta_form(a1: f64, a2: f64) -> f64 {
    a1 * a1 + a1 * a2 + a2 * a2
}

pub fn kink_params(alpha1: f64, alpha2: f64, enforce_vieta: bool) -> Result<KinkParams> {
    if alpha1 == alpha2 {
        return Err(Error::EqualRoots(alpha1));
    }
    if !(alpha1.is_finite() && alpha2.is_finite()) {
        return Err(Error::InvalidParameter(format!("non-finite kink endpoints ({alpha1}, {alpha2})")));
    }
    let q = vieta_form(alpha1, alpha2);
    if enforce_vieta && (q - 1.0).abs() > 1e-8 {
        return Err(Error::VietaViolation(q));
    }
    Ok(KinkParams {
        alpha1,
        alpha2,
        beta: (alpha2 - alpha1) / SQRT_2,
        gamma: alpha1 + alpha2,
        vieta_checked: enforce_vieta,
    })
}

/// Logistic form `M = alpha1 + sqrt2 beta / (1 + exp(beta xi))`.
pub fn montroll_value(p: &KinkParams, xi: f64) -> f64 {
    // 1/(1+e^z) = (1 - tanh(z/2))/2 avoids overflow of exp.
    p.alpha1 + SQRT_2 * p.beta * 0.5 * (1.0 - (0.5 * p.beta * xi).tanh())
}

/// `sech^2 x` without the cancellation of `1 - tanh^2 x`.
pub(crate) fn sech2(x: f64) -> f64 {
    x.cosh().powi(2).recip()
}

/// `(M', M'')` of the Montroll kink in closed form.
pub fn montroll_derivatives(p: &KinkParams, xi: f64) -> (f64, f64) {
    let t = (0.5 * p.beta * xi).tanh();
    let s2 = sech2(0.5 * p.beta * xi);
    let c = SQRT_2 * p.beta * 0.5;
    let d1 = -c * 0.5 * p.beta * s2;
    let d2 = c * 0.5 * p.beta * p.beta * s2 * t;
    (d1, d2)
}

pub fn montroll_kink(params: &KinkParams, grid: &Grid) -> SampledField {
    grid.sample(|x| montroll_value(params, x)).expect("kink values are finite")
}

/// Switching function `m = gamma - tanh(beta xi / 2)`.
pub fn switching_value(beta: f64, gamma: f64, xi: f64) -> f64 {
    gamma - (0.5 * beta * xi).tanh()
}

/// `(m', m'')` of the switching function in closed form.
pub fn switching_derivatives(beta: f64, xi: f64) -> (f64, f64) {
    let t = (0.5 * beta * xi).tanh();
    let s2 = sech2(0.5 * beta * xi);
    (-0.5 * beta * s2, 0.5 * beta * beta * s2 * t)
}

pub fn switching_kink(beta: f64, gamma: f64, grid: &Grid) -> Result<SampledField> {
    if beta == 0.0 || !beta.is_finite() {
        return Err(Error::InvalidParameter("switching kink needs a finite nonzero beta".into()));
    }
    grid.sample(|x| switching_value(beta, gamma, x))
}

/// Pointwise `psi'' + rho psi' - psi^3 + psi + sigma` with finite-difference
/// derivatives.
pub fn rd_residual(psi: &SampledField, rho: f64, sigma: f64) -> SampledField {
    let d1 = differentiate(psi, 1);
    let d2 = differentiate(psi, 2);
    let v: Vec<f64> = psi
        .values()
        .iter()
        .zip(d1.values().iter().zip(d2.values()))
        .map(|(&p, (&p1, &p2))| p2 + rho * p1 - p * p * p + p + sigma)
        .collect();
    SampledField::new_unchecked(*psi.grid(), v).expect("same grid")
}

/// Residual of the traveling equation for the Montroll kink, using the
/// closed-form derivatives.
pub fn montroll_rd_residual(params: &KinkParams, grid: &Grid, rho: f64, sigma: f64) -> SampledField {
    grid.sample(|x| {
        let m = montroll_value(params, x);
        let (m1, m2) = montroll_derivatives(params, x);
        m2 + rho * m1 - m * m * m + m + sigma
    })
    .expect("finite residual")
}

/// Lab-frame coordinate to traveling coordinate, `xi = x - v t`.
pub fn traveling_to_lab(x: f64, t: f64, v: f64) -> f64 {
    x - v * t
}
