//! Run-time monitors: local maximum principle, conservation and positivity.

use std::fmt;

use super::FieldSet;
use crate::mesh::Mesh;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaxPrincipleViolation {
    pub step: usize,
    pub cell: usize,
    pub value: f64,
    pub lower: f64,
    pub upper: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MonitorReport {
    pub max_principle_violations: Vec<MaxPrincipleViolation>,
    /// Per conserved variable: `(total(t) - total(0) + boundary outflow) / scale`.
    pub conserved_drift: Vec<f64>,
    pub min_density: f64,
    pub min_pressure: f64,
    pub steps: usize,
    pub final_time: f64,
}

impl Default for MonitorReport {
    fn default() -> Self {
        MonitorReport {
            max_principle_violations: Vec::new(),
            conserved_drift: Vec::new(),
            min_density: f64::INFINITY,
            min_pressure: f64::INFINITY,
            steps: 0,
            final_time: 0.0,
        }
    }
}

impl MonitorReport {
    pub const CSV_HEADER: &'static str = "step,cell,value,lower,upper";

    /// Compares the new cell values with bounds taken before the step.
    /// Slack is `1e-12` times the spread of the bounds over the mesh.
    pub fn record_max_principle(&mut self, after: &FieldSet, bounds: &[(f64, f64)]) {
        let lo = bounds.iter().map(|b| b.0).fold(f64::INFINITY, f64::min);
        let hi = bounds.iter().map(|b| b.1).fold(f64::NEG_INFINITY, f64::max);
        let range = hi - lo;
        let slack = if range > 0.0 { 1e-12 * range } else { 1e-12 * lo.abs().max(hi.abs()).max(1.0) };
        for (i, &(l, u)) in bounds.iter().enumerate() {
            let v = after.primitive(i)[0];
            if !(v >= l - slack && v <= u + slack) {
                self.max_principle_violations.push(MaxPrincipleViolation {
                    step: after.step,
                    cell: i,
                    value: v,
                    lower: l,
                    upper: u,
                });
            }
        }
    }

    /// Tracks minimum density and pressure (Euler fields only).
    pub fn observe_positivity(&mut self, f: &FieldSet) {
        if f.nvar != 5 {
            return;
        }
        for w in f.cell_primitive.chunks(5) {
            self.min_density = self.min_density.min(w[0]);
            self.min_pressure = self.min_pressure.min(w[4]);
        }
    }

    pub fn violations_csv(&self) -> String {
        let mut s = String::from(Self::CSV_HEADER);
        s.push('\n');
        for v in &self.max_principle_violations {
            s.push_str(&format!("{},{},{:e},{:e},{:e}\n", v.step, v.cell, v.value, v.lower, v.upper));
        }
        s
    }
}

impl fmt::Display for MonitorReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "steps                    {}", self.steps)?;
        writeln!(f, "final time               {:e}", self.final_time)?;
        writeln!(f, "max-principle violations {}", self.max_principle_violations.len())?;
        let drift: Vec<String> = self.conserved_drift.iter().map(|d| format!("{d:.3e}")).collect();
        writeln!(f, "relative drift           [{}]", drift.join(", "))?;
        if self.min_density.is_finite() {
            writeln!(f, "min density              {:e}", self.min_density)?;
            writeln!(f, "min pressure             {:e}", self.min_pressure)?;
        }
        Ok(())
    }
}

fn totals(mesh: &Mesh, f: &FieldSet) -> (Vec<f64>, Vec<f64>) {
    let mut total = vec![0.0; f.nvar];
    let mut abs = vec![0.0; f.nvar];
    for (c, u) in mesh.cells().iter().zip(f.cell_values.chunks(f.nvar)) {
        for k in 0..f.nvar {
            total[k] += c.measure * u[k];
            abs[k] += c.measure * u[k].abs();
        }
    }
    (total, abs)
}

/// Totals `sum |C_i| U_i` at the start of a run plus the flux that has left
/// through the boundary since.
#[derive(Debug, Clone, PartialEq)]
pub struct ConservationTracker {
    pub initial: Vec<f64>,
    /// `sum |C_i| |U_i|` at the start; the drift is relative to this.
    pub scale: Vec<f64>,
    pub outflow: Vec<f64>,
}

impl ConservationTracker {
    pub fn new(mesh: &Mesh, f: &FieldSet) -> Self {
        let (initial, scale) = totals(mesh, f);
        ConservationTracker { outflow: vec![0.0; f.nvar], initial, scale }
    }

    pub fn record_outflow(&mut self, outflow: &[f64], dt: f64) {
        for (a, o) in self.outflow.iter_mut().zip(outflow) {
            *a += dt * o;
        }
    }

    pub fn relative_drift(&self, mesh: &Mesh, f: &FieldSet) -> Vec<f64> {
        let (now, _) = totals(mesh, f);
        (0..f.nvar)
            .map(|k| {
                let d = now[k] - self.initial[k] + self.outflow[k];
                if self.scale[k] > 0.0 {
                    d.abs() / self.scale[k]
                } else {
                    d.abs()
                }
            })
            .collect()
    }
}
