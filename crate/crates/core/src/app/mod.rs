//! Configuration, figure data, the consistency report and the lambda sweep.

pub mod config;
pub mod model;
pub mod output;
pub mod report;

use std::path::Path;

use crate::error::Result;

pub use config::{EffectiveConfig, RunConfig};
pub use model::Model;
pub use report::ConsistencyReport;

/// Writes the CSV of figure `id` to `out`.
pub fn run_figure(id: u8, cfg: &EffectiveConfig, out: &Path) -> Result<()> {
    let model = Model::build(cfg)?;
    output::write_atomic(out, &output::figure_csv(&model, id)?)
}

/// Outcome of [`run_verify`].
#[derive(Debug, Clone)]
pub struct Verification {
    pub report: ConsistencyReport,
    pub text: String,
    pub passed: bool,
}

/// Builds the consistency report, writes its JSON to `out` and returns it
/// together with the human-readable rendering.
pub fn run_verify(cfg: &EffectiveConfig, out: &Path) -> Result<Verification> {
    let model = Model::build(cfg)?;
    let report = ConsistencyReport::build(&model)?;
    output::write_atomic(out, &report.to_json())?;
    let text = report.render_text(cfg, &model);
    let passed = report.passed();
    Ok(Verification { report, text, passed })
}

pub fn run_lambda_sweep(cfg: &EffectiveConfig, lambdas: &[f64], out: &Path) -> Result<()> {
    let model = Model::build(cfg)?;
    let rows = output::sweep_rows(&model, lambdas)?;
    output::write_atomic(out, &output::sweep_csv(&rows))
}
