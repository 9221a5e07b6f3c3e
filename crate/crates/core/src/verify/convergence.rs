//! Mesh-refinement studies for smooth scalar advection on periodic boxes.

use std::fmt::Write;

use super::{scalar_exact, VerifyError};
use crate::case::{run, InitialCondition, MeshSource, RunConfig};
use crate::physics::ScalarModel;
use crate::solver::{Model, NoOutput};

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceResult {
    pub levels: Vec<usize>,
    pub h: Vec<f64>,
    pub l1: Vec<f64>,
    pub linf: Vec<f64>,
    /// Observed L1 order between consecutive levels.
    pub order_l1: Vec<f64>,
    pub order_linf: Vec<f64>,
}

impl ConvergenceResult {
    /// Order over the finest refinement pair.
    pub fn final_order(&self) -> f64 {
        self.order_l1.last().copied().unwrap_or(f64::NAN)
    }

    /// CSV with columns `level,h,L1,order` (order empty on the first row).
    pub fn to_csv(&self) -> String {
        let mut s = String::from("level,h,L1,order\n");
        for k in 0..self.levels.len() {
            let order = if k == 0 { String::new() } else { format!("{:.6}", self.order_l1[k - 1]) };
            let _ = writeln!(s, "{},{:e},{:e},{}", self.levels[k], self.h[k], self.l1[k], order);
        }
        s
    }
}

/// `log(e_a / e_b) / log(h_a / h_b)`
pub fn observed_order(e_a: f64, e_b: f64, h_a: f64, h_b: f64) -> f64 {
    (e_a / e_b).ln() / (h_a / h_b).ln()
}

/// Runs `template` on boxes with `n` cells per side for each level and
/// measures the cell-centroid error against the exact translated profile.
pub fn convergence_study(template: &RunConfig, levels: &[usize]) -> Result<ConvergenceResult, VerifyError> {
    if levels.len() < 3 {
        return Err(VerifyError::Setup(format!("need at least 3 levels, got {}", levels.len())));
    }
    let MeshSource::Box(base) = &template.mesh.source else {
        return Err(VerifyError::Setup("convergence studies need a box mesh".into()));
    };
    let Model::Scalar(model @ ScalarModel::Advection { .. }) = template.scheme.model else {
        return Err(VerifyError::Setup("convergence studies need the advection model".into()));
    };
    let InitialCondition::Scalar(profile) = template.initial else {
        return Err(VerifyError::Setup("convergence studies need a scalar profile".into()));
    };
    let mut out = ConvergenceResult { levels: levels.to_vec(), h: vec![], l1: vec![], linf: vec![], order_l1: vec![], order_linf: vec![] };
    for &n in levels {
        let mut cfg = template.clone();
        let mut spec = base.clone();
        for k in 0..spec.dim {
            spec.cells[k] = n;
        }
        cfg.mesh.source = MeshSource::Box(spec.clone());
        let outcome = run(&cfg, &mut NoOutput).map_err(|e| VerifyError::Level { level: n, source: Box::new(e) })?;
        let exact = scalar_exact(&model, &profile, outcome.fields.time).with_period(spec.origin, spec.extents);
        let (mut l1, mut linf, mut vol) = (0.0f64, 0.0f64, 0.0);
        for (i, c) in outcome.mesh.cells().iter().enumerate() {
            let e = (outcome.fields.cell(i)[0] - exact.eval(c.centroid)?).abs();
            l1 += c.measure * e;
            linf = linf.max(e);
            vol += c.measure;
        }
        out.h.push(spec.extents[0] / n as f64);
        out.l1.push(l1 / vol);
        out.linf.push(linf);
    }
    for k in 1..levels.len() {
        out.order_l1.push(observed_order(out.l1[k - 1], out.l1[k], out.h[k - 1], out.h[k]));
        out.order_linf.push(observed_order(out.linf[k - 1], out.linf[k], out.h[k - 1], out.h[k]));
    }
    Ok(out)
}
