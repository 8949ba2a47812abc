use crate::darboux::{deform, DeformationParams, DeformedFamily};
use crate::error::Result;
use crate::numerics::{make_grid, Grid, SampledField};
use crate::susy::{self, SusyParams};

use super::config::EffectiveConfig;

/// Relative size of `phi0` at the box ends above which the box is widened.
pub const TAIL_TOLERANCE: f64 = 1e-10;
const WIDEN_FACTOR: f64 = 1.5;
const MAX_WIDENINGS: usize = 8;

/// Base double well sampled on the working grid of a run.
#[derive(Debug, Clone)]
pub struct Model {
    pub params: SusyParams,
    pub deformation: DeformationParams,
    pub grid: Grid,
    /// Number of times the configured box was widened.
    pub widenings: usize,
    pub r: SampledField,
    pub u: SampledField,
    pub phi0: SampledField,
    pub phi1: SampledField,
}

fn tails_ok(p: &SusyParams, g: &Grid) -> bool {
    let peak = susy::ground_state(p, g).max_abs();
    let ends = p.ground_state(g.xi_min()).abs().max(p.ground_state(g.xi_max()).abs());
    ends <= TAIL_TOLERANCE * peak
}

fn widen(g: &Grid) -> Result<Grid> {
    let mid = 0.5 * (g.xi_min() + g.xi_max());
    let half = 0.5 * (g.xi_max() - g.xi_min()) * WIDEN_FACTOR;
    let intervals = 2 * ((g.len() - 1) as f64 * WIDEN_FACTOR / 2.0).ceil() as usize;
    make_grid(mid - half, mid + half, intervals + 1)
}

impl Model {
    pub fn build(cfg: &EffectiveConfig) -> Result<Self> {
        let params = SusyParams::new(cfg.beta, cfg.gamma, cfg.epsilon, cfg.epsilon0, cfg.amplitude)?;
        let deformation = DeformationParams::new(cfg.lambda, cfg.convention)?;
        let mut grid = make_grid(cfg.xi_min, cfg.xi_max, cfg.n)?;
        let mut widenings = 0;
        while !tails_ok(&params, &grid) && widenings < MAX_WIDENINGS {
            grid = widen(&grid)?;
            widenings += 1;
        }
        Ok(Self::on_grid(params, deformation, grid, widenings))
    }

    pub fn on_grid(params: SusyParams, deformation: DeformationParams, grid: Grid, widenings: usize) -> Self {
        Self {
            params,
            deformation,
            grid,
            widenings,
            r: susy::superpotential(&params, &grid),
            u: susy::potential(&params, &grid),
            phi0: susy::ground_state(&params, &grid),
            phi1: susy::excited_state(&params, &grid),
        }
    }

    /// The same model on the grid with half the spacing.
    pub fn refined(&self) -> Self {
        Self::on_grid(self.params, self.deformation, self.grid.refined(), self.widenings)
    }

    pub fn family(&self) -> Result<DeformedFamily> {
        deform(&self.r, &self.u, &self.phi0, &self.deformation)
    }

    pub fn family_at(&self, deformation: &DeformationParams) -> Result<DeformedFamily> {
        deform(&self.r, &self.u, &self.phi0, deformation)
    }

    pub fn tails_ok(&self) -> bool {
        tails_ok(&self.params, &self.grid)
    }
}
