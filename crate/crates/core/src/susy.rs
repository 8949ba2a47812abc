//! Double-well Schrödinger problems generated by a switching kink.
//!
//! Given the switching function `m = gamma - tanh(beta xi / 2)` and a level
//! splitting `epsilon`, the ground state `phi0` and the excited state
//! `phi1 = m phi0` solve the same Schrödinger equation at energies
//! `epsilon0` and `epsilon0 + epsilon`. The superpotential is
//! `R = (m'' + epsilon m) / (2 m')`, the ground state is `exp(-∫R)` and the
//! potential is fixed by the Riccati identity `u = R^2 - R' + epsilon0`.
//!
//! The identity chain is the ground truth here. The expanded forms found in
//! print are kept in [`printed_closed_forms`] only so that their gaps can be
//! measured.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::kink::{sech2, switching_derivatives, switching_value};
use crate::numerics::{find_local_minima, Grid, SampledField};

/// Construction parameters of the switching-kink double well.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SusyParams {
    pub beta: f64,
    pub gamma: f64,
    pub epsilon: f64,
    pub epsilon0: f64,
    pub amplitude: f64,
}

impl SusyParams {
    pub fn new(beta: f64, gamma: f64, epsilon: f64, epsilon0: f64, amplitude: f64) -> Result<Self> {
        let all_finite = [beta, gamma, epsilon, epsilon0, amplitude].iter().all(|v| v.is_finite());
        if !all_finite {
            return Err(Error::InvalidParameter("susy parameters must be finite".into()));
        }
        if beta == 0.0 {
            return Err(Error::InvalidParameter("beta must be nonzero".into()));
        }
        if epsilon <= 0.0 {
            return Err(Error::InvalidParameter(format!("epsilon must be positive, got {epsilon}")));
        }
        if amplitude <= 0.0 {
            return Err(Error::InvalidParameter(format!("amplitude must be positive, got {amplitude}")));
        }
        Ok(Self { beta, gamma, epsilon, epsilon0, amplitude })
    }

    pub fn with_epsilon0(self, epsilon0: f64) -> Self {
        Self { epsilon0, ..self }
    }

    /// Excited level `epsilon1 = epsilon0 + epsilon`.
    pub fn epsilon1(&self) -> f64 {
        self.epsilon0 + self.epsilon
    }

    /// Ground energy that turns the double well into an asymmetric Morse
    /// double well with plateau near zero.
    pub fn epsilon0_caticha(&self) -> f64 {
        let (b, e, g) = (self.beta, self.epsilon, self.gamma);
        -b * b / 4.0 - e / 2.0 + e * e / (4.0 * b * b) * (1.0 - g * g)
    }

    pub fn switching(&self, xi: f64) -> f64 {
        switching_value(self.beta, self.gamma, xi)
    }

    /// `R(xi) = -(beta/2) tanh(beta xi/2) + (eps/2beta) [sinh(beta xi) - 2 gamma cosh^2(beta xi/2)]`.
    pub fn superpotential(&self, xi: f64) -> f64 {
        let z = self.beta * xi;
        let t = (0.5 * z).tanh();
        -0.5 * self.beta * t + self.epsilon / (2.0 * self.beta) * (z.sinh() - self.gamma * (1.0 + z.cosh()))
    }

    /// Closed-form `R'(xi)`.
    pub fn superpotential_derivative(&self, xi: f64) -> f64 {
        let z = self.beta * xi;
        -0.25 * self.beta * self.beta * sech2(0.5 * z) + 0.5 * self.epsilon * (z.cosh() - self.gamma * z.sinh())
    }

    /// Ground state `phi0(0) cosh(z/2) exp(-(eps/2beta^2)[cosh z - 1 - gamma z - gamma sinh z])`,
    /// `z = beta xi`, evaluated in log space.
    pub fn ground_state(&self, xi: f64) -> f64 {
        self.ln_ground_state(xi).exp()
    }

    /// `ln phi0(xi)`, finite where `phi0` itself underflows.
    pub fn ln_ground_state(&self, xi: f64) -> f64 {
        let z = self.beta * xi;
        let a = self.epsilon / (2.0 * self.beta * self.beta);
        let half = (0.5 * z).abs();
        let ln_cosh = half + (-2.0 * half).exp().ln_1p() - std::f64::consts::LN_2;
        let bracket = 2.0 * (0.5 * z).sinh().powi(2) - self.gamma * (z + z.sinh());
        self.amplitude.ln() + ln_cosh - a * bracket
    }

    pub fn excited_state(&self, xi: f64) -> f64 {
        self.switching(xi) * self.ground_state(xi)
    }

    /// `u = R^2 - R' + epsilon0`.
    pub fn potential(&self, xi: f64) -> f64 {
        let r = self.superpotential(xi);
        r * r - self.superpotential_derivative(xi) + self.epsilon0
    }

    /// Term-by-term expansion of `R^2 - R' + epsilon0` in `cosh(beta xi)` and
    /// `sinh(beta xi)`.
    pub fn potential_expanded(&self, xi: f64) -> f64 {
        let (b, g, e) = (self.beta, self.gamma, self.epsilon);
        let z = b * xi;
        let (s, c) = (z.sinh(), z.cosh());
        let k = e * e / (4.0 * b * b);
        b * b / 4.0 + e / 2.0 + self.epsilon0 - e * c + e * g * s
            + k * ((1.0 + g * g) * c * c + 2.0 * g * g * c + g * g - 1.0 - 2.0 * g * s - 2.0 * g * s * c)
    }
}

fn sample(grid: &Grid, f: impl Fn(f64) -> f64) -> SampledField {
    SampledField::new_unchecked(*grid, grid.points().into_iter().map(f).collect()).expect("grid length")
}

pub fn superpotential(params: &SusyParams, grid: &Grid) -> SampledField {
    sample(grid, |x| params.superpotential(x))
}

pub fn superpotential_derivative(params: &SusyParams, grid: &Grid) -> SampledField {
    sample(grid, |x| params.superpotential_derivative(x))
}

pub fn ground_state(params: &SusyParams, grid: &Grid) -> SampledField {
    sample(grid, |x| params.ground_state(x))
}

pub fn excited_state(params: &SusyParams, grid: &Grid) -> SampledField {
    sample(grid, |x| params.excited_state(x))
}

pub fn potential(params: &SusyParams, grid: &Grid) -> SampledField {
    sample(grid, |x| params.potential(x))
}

/// Literal evaluation of the printed superpotential (with `+2 gamma
/// cosh^2`) and the printed potential expansion. Report use only.
pub fn printed_closed_forms(params: &SusyParams, xi: f64) -> (f64, f64) {
    let (b, g, e) = (params.beta, params.gamma, params.epsilon);
    let z = b * xi;
    let (s, c) = (z.sinh(), z.cosh());
    let ch2 = (0.5 * z).cosh().powi(2);
    let r_eq8 = -0.5 * b * (0.5 * z).tanh() + e / (2.0 * b) * (s + 2.0 * g * ch2);
    let u_eq11 = b * b / 4.0 + (g * g - 1.0) * e * e / (4.0 * b * b) + e / 2.0 + params.epsilon0
        + e / (8.0 * b * b)
            * ((4.0 * g * g * e + (2.0 * g * g + 1.0) * e * c - 8.0 * b * b) * c
                - 4.0 * g * (e + e * c - 2.0 * b * b) * s);
    (r_eq8, u_eq11)
}

/// `m'' + eps m - 2 R m'` at `xi`, with closed-form switching derivatives.
pub fn switching_identity_residual(params: &SusyParams, xi: f64) -> f64 {
    let m = params.switching(xi);
    let (m1, m2) = switching_derivatives(params.beta, xi);
    m2 + params.epsilon * m - 2.0 * params.superpotential(xi) * m1
}

/// Well depths, bias and minima of the double well at the Caticha ground
/// energy, measured on a grid, next to the printed asymptotic formulas.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MorseCharacteristics {
    pub epsilon0_caticha: f64,
    /// `-min u` of the left (smaller xi) well.
    pub depth_left: f64,
    pub depth_right: f64,
    /// `depth_left - depth_right`.
    pub bias: f64,
    pub xi_min_left: f64,
    pub xi_min_right: f64,
    /// Leading-order bias, `-sign(beta) 2 eps gamma`.
    pub derived_bias: f64,
    /// Leading-order minima, sorted by xi.
    pub derived_minima: (f64, f64),
    /// `beta^2 [1 ± 2 eps gamma / (2 beta)^2]` as printed.
    pub printed_depths: (f64, f64),
    /// `∓(1/beta) ln[((2beta)^2 ± 2 eps gamma) / (eps (gamma ∓ 1))]` as printed;
    /// `None` where the logarithm's argument is not positive.
    pub printed_minima: (Option<f64>, Option<f64>),
    /// False when `eps / beta^2 >= 0.2`, where the asymptotic picture breaks down.
    pub asymptotic_regime: bool,
}

/// Leading-order well minima `(1/beta) ln[4beta^2/(eps(1-gamma))]` and
/// `-(1/beta) ln[4beta^2/(eps(1+gamma))]`, sorted by xi.
pub fn derived_minima(params: &SusyParams) -> (f64, f64) {
    let (b, g, e) = (params.beta, params.gamma, params.epsilon);
    let a = (4.0 * b * b / (e * (1.0 - g))).ln() / b;
    let c = -(4.0 * b * b / (e * (1.0 + g))).ln() / b;
    (a.min(c), a.max(c))
}

pub fn morse_characteristics(params: &SusyParams, grid: &Grid) -> Result<MorseCharacteristics> {
    let (b, g, e) = (params.beta, params.gamma, params.epsilon);
    if (g.abs() - 1.0).abs() < 1e-12 {
        return Err(Error::GammaUnit);
    }
    let e0 = params.epsilon0_caticha();
    let shifted = params.with_epsilon0(e0);
    let u = potential(&shifted, grid);
    let minima = find_local_minima(&u);
    if minima.len() != 2 {
        return Err(Error::InvalidParameter(format!(
            "expected two wells on [{}, {}], found {}",
            grid.xi_min(),
            grid.xi_max(),
            minima.len()
        )));
    }
    let (left, right) = (minima[0], minima[1]);
    let lo = |s: f64| {
        let arg = (4.0 * b * b + s * 2.0 * e * g) / (e * (g - s));
        (arg > 0.0).then(|| -s * arg.ln() / b)
    };
    Ok(MorseCharacteristics {
        epsilon0_caticha: e0,
        depth_left: -left.1,
        depth_right: -right.1,
        bias: right.1 - left.1,
        xi_min_left: left.0,
        xi_min_right: right.0,
        derived_bias: -b.signum() * 2.0 * e * g,
        derived_minima: derived_minima(params),
        printed_depths: (
            b * b * (1.0 + 2.0 * e * g / (4.0 * b * b)),
            b * b * (1.0 - 2.0 * e * g / (4.0 * b * b)),
        ),
        printed_minima: (lo(1.0), lo(-1.0)),
        asymptotic_regime: e / (b * b) < 0.2,
    })
}
