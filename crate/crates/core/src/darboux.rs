//! One-parameter Darboux deformation of a double well.
//!
//! With `I(xi) = ∫^xi phi0^2` the family is
//!
//! ```text
//! R(xi; lambda)    = R + d/dxi ln(I + lambda)          = R + phi0^2 / (I + lambda)
//! u(xi; lambda)    = u - 2 d^2/dxi^2 ln(I + lambda)    = u + 4 R g + 2 g^2,   g = phi0^2 / (I + lambda)
//! phi0(xi; lambda) = sqrt(lambda (lambda + 1)) phi0 / (I + lambda)
//! ```
//!
//! All derivatives use `I' = phi0^2` and `phi0' = -R phi0`; no finite
//! differences enter the family itself. A zero of `I + lambda` on the grid
//! is a pole of every deformed field.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::{cumulative_integral, differentiate, find_root, SampledField};

/// Lower limit of the integral `I`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Convention {
    /// `phi0` as constructed (amplitude `phi0(0)`), `I` anchored at `xi = 0`.
    PaperFigure,
    /// `phi0` rescaled to unit norm, `I` anchored at the left grid end, so
    /// `I` runs from 0 to 1.
    Normalized,
}

impl std::str::FromStr for Convention {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "paper_figure" | "paper-figure" | "PaperFigure" => Ok(Convention::PaperFigure),
            "normalized" | "Normalized" => Ok(Convention::Normalized),
            other => Err(Error::Config(format!("unknown convention `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeformationParams {
    lambda: f64,
    convention: Convention,
}

impl DeformationParams {
    pub fn new(lambda: f64, convention: Convention) -> Result<Self> {
        if !lambda.is_finite() || (-1.0..=0.0).contains(&lambda) {
            return Err(Error::LambdaForbidden(lambda));
        }
        Ok(Self { lambda, convention })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn convention(&self) -> Convention {
        self.convention
    }

    pub fn normalization(&self) -> f64 {
        (self.lambda * (self.lambda + 1.0)).sqrt()
    }
}

/// Grid points within this many spacings of a pole are written out as
/// excluded.
pub const EXCLUSION_POINTS: f64 = 5.0;

/// Residual norms skip `|xi - xi*| <= max(5h, RESIDUAL_EXCLUSION_RADIUS)`.
/// Near a simple pole the stencil error of a k-th derivative relative to the
/// field grows like `(h/d)^2 / d^k`, so a zone that shrinks with `h` would
/// make residuals grow under refinement.
pub const RESIDUAL_EXCLUSION_RADIUS: f64 = 0.5;

#[derive(Debug, Clone)]
pub struct DeformedFamily {
    pub lambda: f64,
    pub convention: Convention,
    pub r_lambda: SampledField,
    pub u_lambda: SampledField,
    pub phi0_lambda: SampledField,
    /// Zero of `I + lambda`, if it falls inside the grid.
    pub singularity: Option<f64>,
    pub i_field: SampledField,
}

impl DeformedFamily {
    pub fn is_excluded(&self, i: usize) -> bool {
        let grid = self.i_field.grid();
        match self.singularity {
            Some(xs) => (grid.point(i) - xs).abs() <= EXCLUSION_POINTS * grid.h(),
            None => false,
        }
    }

    pub fn excluded_count(&self) -> usize {
        (0..self.i_field.grid().len()).filter(|&i| self.is_excluded(i)).count()
    }

    /// Interval skipped by residual norms, if the family has a pole.
    pub fn residual_exclusion(&self) -> Option<(f64, f64)> {
        let w = (EXCLUSION_POINTS * self.i_field.grid().h()).max(RESIDUAL_EXCLUSION_RADIUS);
        self.singularity.map(|x| (x - w, x + w))
    }

    fn in_residual_zone(&self, i: usize) -> bool {
        match self.residual_exclusion() {
            Some((a, b)) => {
                let x = self.i_field.grid().point(i);
                x >= a && x <= b
            }
            None => false,
        }
    }

    /// `sup |u(xi; lambda) - u(xi)|` over non-excluded points.
    pub fn sup_deviation(&self, u: &SampledField) -> f64 {
        sup_outside(self, |i| self.u_lambda.values()[i] - u.values()[i])
    }

    /// `sup |u_l - (R_l^2 - R_l' + eps0)| / max |u_l|` with `R_l'` from finite
    /// differences, outside the residual exclusion zone.
    pub fn riccati_residual(&self, epsilon0: f64) -> f64 {
        let dr = differentiate(&self.r_lambda, 1);
        let r = self.r_lambda.values();
        let u = self.u_lambda.values();
        let sup = |f: &dyn Fn(usize) -> f64| {
            (0..u.len()).filter(|&i| !self.in_residual_zone(i)).map(|i| f(i).abs()).fold(0.0, f64::max)
        };
        let scale = sup(&|i| u[i]).max(f64::MIN_POSITIVE);
        sup(&|i| u[i] - (r[i] * r[i] - dr.values()[i] + epsilon0)) / scale
    }

    /// Trapezoid norm `∫ phi0(xi; lambda)^2`. Meaningful for nonsingular families.
    pub fn norm(&self) -> f64 {
        self.phi0_lambda.map(|v| v * v).integral()
    }
}

fn sup_outside(family: &DeformedFamily, f: impl Fn(usize) -> f64) -> f64 {
    (0..family.i_field.grid().len())
        .filter(|&i| !family.is_excluded(i))
        .map(|i| f(i).abs())
        .fold(0.0, f64::max)
}

fn normalized(phi0: &SampledField) -> SampledField {
    let norm = phi0.map(|v| v * v).integral().sqrt();
    phi0.map(|v| v / norm)
}

/// `I(xi) = ∫^xi phi0^2` under the given convention.
pub fn accumulate_i(phi0: &SampledField, convention: Convention) -> SampledField {
    match convention {
        Convention::PaperFigure => {
            cumulative_integral(&phi0.map(|v| v * v), phi0.grid().anchor()).expect("anchor in range")
        }
        Convention::Normalized => cumulative_integral(&normalized(phi0).map(|v| v * v), 0).expect("index 0"),
    }
}

/// Applies the deformation to a base triple `(R, u, phi0)` on a common grid.
pub fn deform(
    r: &SampledField,
    u: &SampledField,
    phi0: &SampledField,
    params: &DeformationParams,
) -> Result<DeformedFamily> {
    let grid = *phi0.grid();
    if r.grid() != &grid || u.grid() != &grid {
        return Err(Error::InvalidParameter("deform: fields live on different grids".into()));
    }
    let lambda = params.lambda;
    let phi = match params.convention {
        Convention::PaperFigure => phi0.clone(),
        Convention::Normalized => normalized(phi0),
    };
    let i_field = accumulate_i(phi0, params.convention);
    let denom = i_field.map(|v| v + lambda);
    let singularity = find_root(&denom)?;

    let n = grid.len();
    let c = params.normalization();
    let mut r_l = Vec::with_capacity(n);
    let mut u_l = Vec::with_capacity(n);
    let mut p_l = Vec::with_capacity(n);
    for i in 0..n {
        let d = denom.values()[i];
        let p = phi.values()[i];
        let g = p * p / d;
        let ri = r.values()[i];
        r_l.push(ri + g);
        u_l.push(u.values()[i] + 4.0 * ri * g + 2.0 * g * g);
        p_l.push(c * p / d);
    }
    Ok(DeformedFamily {
        lambda,
        convention: params.convention,
        r_lambda: SampledField::new_unchecked(grid, r_l)?,
        u_lambda: SampledField::new_unchecked(grid, u_l)?,
        phi0_lambda: SampledField::new_unchecked(grid, p_l)?,
        singularity,
        i_field,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Negative,
    Zero,
    Positive,
}

/// Sign of the pole location `xi*` where `I(xi*) + lambda = 0`, if any.
pub fn singularity_side(i_field: &SampledField, lambda: f64) -> Result<Option<Side>> {
    let root = find_root(&i_field.map(|v| v + lambda))?;
    Ok(root.map(|x| {
        if x < 0.0 {
            Side::Negative
        } else if x > 0.0 {
            Side::Positive
        } else {
            Side::Zero
        }
    }))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub lambda: f64,
    pub sup_dev_u: f64,
    pub xi_star: Option<f64>,
    /// `∫ phi0(xi; lambda)^2` under the normalized convention.
    pub norm_check: f64,
}

/// Deforms the base triple for each `lambda` and tabulates how far the
/// family strays from the undeformed potential. Rows are sorted by lambda.
pub fn lambda_sweep(
    r: &SampledField,
    u: &SampledField,
    phi0: &SampledField,
    lambdas: &[f64],
    convention: Convention,
) -> Result<Vec<SweepRow>> {
    let mut sorted = lambdas.to_vec();
    sorted.sort_by(f64::total_cmp);
    let params: Vec<DeformationParams> =
        sorted.iter().map(|&l| DeformationParams::new(l, convention)).collect::<Result<_>>()?;
    params
        .iter()
        .map(|p| {
            let family = deform(r, u, phi0, p)?;
            let normed = deform(r, u, phi0, &DeformationParams::new(p.lambda, Convention::Normalized)?)?;
            Ok(SweepRow {
                lambda: p.lambda,
                sup_dev_u: family.sup_deviation(u),
                xi_star: family.singularity,
                norm_check: normed.norm(),
            })
        })
        .collect()
}
