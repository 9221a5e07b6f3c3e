//! Shock-radius extraction from radial pressure profiles and the
//! `R ~ t^(2/5)` power-law fit.

use super::VerifyError;

#[derive(Debug, Clone, PartialEq)]
pub struct RadialProfile {
    pub time: f64,
    /// Sample radii, increasing.
    pub radii: Vec<f64>,
    pub pressure: Vec<f64>,
}

/// Radius of the steepest pressure change, or `None` if the profile is flat.
pub fn shock_radius(profile: &RadialProfile) -> Option<f64> {
    let (r, p) = (&profile.radii, &profile.pressure);
    if r.len() < 2 || r.len() != p.len() {
        return None;
    }
    let (pmin, pmax) = p.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &x| (a.min(x), b.max(x)));
    if !(pmax - pmin > 1e-12 * pmax.abs().max(f64::MIN_POSITIVE)) {
        return None;
    }
    let mut best = (0.0, None);
    for k in 0..r.len() - 1 {
        let dr = r[k + 1] - r[k];
        if dr <= 0.0 {
            continue;
        }
        let g = ((p[k + 1] - p[k]) / dr).abs();
        if g > best.0 {
            best = (g, Some(0.5 * (r[k] + r[k + 1])));
        }
    }
    best.1
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerLawFit {
    pub slope: f64,
    pub intercept: f64,
    /// RMS residual of the log-log fit.
    pub residual: f64,
}

/// Least-squares fit of `log R = slope log t + intercept`.
pub fn fit_radius_power_law(times: &[f64], radii: &[f64]) -> Result<PowerLawFit, VerifyError> {
    if times.len() != radii.len() || times.len() < 2 {
        return Err(VerifyError::Fit(format!("need at least two (t, R) pairs, got {}", times.len().min(radii.len()))));
    }
    if times.iter().chain(radii).any(|v| !(*v > 0.0)) {
        return Err(VerifyError::Fit("times and radii must be positive".into()));
    }
    let x: Vec<f64> = times.iter().map(|t| t.ln()).collect();
    let y: Vec<f64> = radii.iter().map(|r| r.ln()).collect();
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(VerifyError::Fit("all snapshot times are equal".into()));
    }
    let sxy: f64 = x.iter().zip(&y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let residual = (x.iter().zip(&y).map(|(a, b)| (b - slope * a - intercept).powi(2)).sum::<f64>() / n).sqrt();
    Ok(PowerLawFit { slope, intercept, residual })
}

#[derive(Debug, Clone, PartialEq)]
pub struct TaylorReport {
    pub times: Vec<f64>,
    pub radii: Vec<f64>,
    pub fit: Option<PowerLawFit>,
    pub valid: bool,
    pub note: String,
}

impl TaylorReport {
    pub fn slope_within(&self, lo: f64, hi: f64) -> bool {
        self.valid && self.fit.map_or(false, |f| f.slope >= lo && f.slope <= hi)
    }
}

/// Shock radius per snapshot and the log-log slope (2/5 for a point blast).
pub fn taylor_radius_check(profiles: &[RadialProfile]) -> TaylorReport {
    let mut times = Vec::new();
    let mut radii = Vec::new();
    let mut missing = 0;
    for pr in profiles {
        match shock_radius(pr) {
            Some(r) if pr.time > 0.0 => {
                times.push(pr.time);
                radii.push(r);
            }
            _ => missing += 1,
        }
    }
    let invalid = |note: String, times, radii| TaylorReport { times, radii, fit: None, valid: false, note };
    if missing > 0 {
        return invalid(format!("{missing} snapshot(s) without a detectable shock"), times, radii);
    }
    if times.len() < 4 {
        return invalid(format!("need at least 4 snapshots, got {}", times.len()), times, radii);
    }
    match fit_radius_power_law(&times, &radii) {
        Ok(fit) => TaylorReport { times, radii, fit: Some(fit), valid: true, note: String::new() },
        Err(e) => invalid(e.to_string(), times, radii),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_power_laws_are_recovered() {
        let t = [0.1, 0.2, 0.5, 1.0, 3.0];
        for q in [0.4, 0.5] {
            let r: Vec<f64> = t.iter().map(|t: &f64| t.powf(q)).collect();
            let f = fit_radius_power_law(&t, &r).unwrap();
            assert!((f.slope - q).abs() < 1e-12);
            assert!(f.residual < 1e-12);
        }
    }

    #[test]
    fn radius_is_steepest_drop() {
        let radii: Vec<f64> = (0..100).map(|k| k as f64 * 0.1).collect();
        let pressure: Vec<f64> = radii.iter().map(|&r| if r < 4.25 { 10.0 } else { 1.0 }).collect();
        let r = shock_radius(&RadialProfile { time: 1.0, radii, pressure }).unwrap();
        assert!((r - 4.25).abs() < 0.051);
    }

    #[test]
    fn flat_profiles_make_the_report_invalid() {
        let radii: Vec<f64> = (0..10).map(|k| k as f64).collect();
        let flat = RadialProfile { time: 1.0, radii: radii.clone(), pressure: vec![1.0; 10] };
        assert_eq!(shock_radius(&flat), None);
        let rep = taylor_radius_check(&[flat.clone(), flat.clone(), flat.clone(), flat]);
        assert!(!rep.valid);
        assert!(!rep.slope_within(0.0, 1.0));
    }

    #[test]
    fn synthetic_blast_profiles_give_two_fifths() {
        let radii: Vec<f64> = (0..4000).map(|k| k as f64 * 0.01).collect();
        let profiles: Vec<RadialProfile> = [1.0, 2.0, 4.0, 8.0, 16.0]
            .iter()
            .map(|&t: &f64| {
                let rs = 5.0 * t.powf(0.4);
                let pressure = radii.iter().map(|&r| if r < rs { 2.0 + r / rs } else { 1.0 }).collect();
                RadialProfile { time: t, radii: radii.clone(), pressure }
            })
            .collect();
        let rep = taylor_radius_check(&profiles);
        assert!(rep.valid);
        assert!((rep.fit.unwrap().slope - 0.4).abs() < 2e-3);
        assert!(rep.slope_within(0.35, 0.45));
    }
}
