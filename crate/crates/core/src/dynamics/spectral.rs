//! Emission spectrum and the bandwidth needed to see photon entanglement.
//!
//! Functions here take the Lorentzian half-width `γ` directly. For a bath
//! whose population decays at rate `Γ` the emitted line has `γ = Γ/2`
//! (see [`WwParams::linewidth`]).

use serde::Serialize;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use super::collective::{collective_reduced, ModeSubset, Pair};
use super::ww::{WwParams, WwPropagator, WwSolution};
use crate::error::{invalid, Error, Result};
use crate::measures::q_auxiliary;

fn check_width(gamma: f64) -> Result<()> {
    if !(gamma > 0.0 && gamma.is_finite()) {
        return invalid(format!("linewidth {gamma} must be positive"));
    }
    Ok(())
}

/// `S(ν) = (γ/π) / ((E − ν)² + γ²)`.
pub fn spectrum(nu: f64, gamma: f64, e: f64) -> Result<f64> {
    check_width(gamma)?;
    Ok(gamma / PI / ((e - nu).powi(2) + gamma * gamma))
}

/// Weight of the line inside `E ± Δν`: `(2/π) arctan(Δν/γ)`.
pub fn detection_probability(delta_nu: f64, gamma: f64) -> Result<f64> {
    check_width(gamma)?;
    if !(delta_nu >= 0.0) {
        return invalid(format!("Δν = {delta_nu} must be ≥ 0"));
    }
    Ok(2.0 / PI * (delta_nu / gamma).atan())
}

/// Smallest `Δν/γ` that leaves the collective photon modes entangled in the
/// long-time limit: `tan[(π/2)(1 − cot θ)]`.
pub fn bandwidth_threshold(theta: f64) -> Result<f64> {
    if !((FRAC_PI_4 - 1e-15)..FRAC_PI_2).contains(&theta) {
        return invalid(format!("θ = {theta} outside [π/4, π/2)"));
    }
    let cot = (theta.cos() / theta.sin()).min(1.0);
    Ok((FRAC_PI_2 * (1.0 - cot)).tan().max(0.0))
}

/// A time at which `|ξ|² < 1e-4`, checked against the propagator.
pub fn long_time(params: &WwParams, prop: &WwPropagator) -> Result<f64> {
    let t = 1.2 * 1e4f64.ln() / params.gamma;
    if t > 0.5 * params.horizon() {
        return Err(Error::Numeric(format!(
            "long-time point {t} lies past half the recurrence time {}",
            params.horizon()
        )));
    }
    let p = prop.xi(t).norm_sqr();
    if p >= 1e-4 {
        return Err(Error::Numeric(format!("|ξ|² = {p:e} has not decayed by t = {t}")));
    }
    Ok(t)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScanRow {
    pub delta_nu: f64,
    /// `χ'²` of the window.
    pub chi_sq: f64,
    /// Product-form weight, diagnostic.
    pub product_form: f64,
    pub q_pp: f64,
    pub c_pp: f64,
}

/// Collective-mode weight and photon-photon concurrence for a growing
/// frequency window at the stored time `t`.
pub fn partition_scan(theta: f64, sol: &WwSolution, t: f64, delta_nus: &[f64]) -> Result<Vec<ScanRow>> {
    if delta_nus.is_empty() {
        return invalid("Δν grid is empty");
    }
    if delta_nus.windows(2).any(|w| !(w[1] > w[0])) {
        return invalid("Δν grid must be strictly increasing");
    }
    let w = sol.detunings.iter().fold(0.0f64, |m, d| m.max(d.abs()));
    if delta_nus[0] < 0.0 || *delta_nus.last().expect("non-empty") > w * (1.0 + 1e-12) {
        return invalid(format!("Δν grid must lie in [0, {w}]"));
    }
    let i = sol
        .index_of(t)
        .ok_or_else(|| Error::InvalidInput(format!("time {t} is not on the solution grid")))?;
    delta_nus
        .iter()
        .map(|&dn| {
            let subset = ModeSubset::window(dn)?;
            let chi = subset.chi_prime(&sol.detunings, &sol.lambdas[i])?;
            let q = q_auxiliary(&collective_reduced(theta, sol.xi[i], chi, Pair::Photons)?)?;
            Ok(ScanRow {
                delta_nu: dn,
                chi_sq: chi * chi,
                product_form: subset.product_form(&sol.detunings, &sol.lambdas[i])?,
                q_pp: q,
                c_pp: q.max(0.0),
            })
        })
        .collect()
}

/// Window half-widths at which the mode set changes: every distinct `|ω_k − E|`
/// up to `max_delta_nu`, ascending. Each step adds the next mode pair.
pub fn mode_edge_grid(detunings: &[f64], max_delta_nu: f64) -> Vec<f64> {
    let mut edges: Vec<f64> = detunings
        .iter()
        .map(|d| d.abs())
        .filter(|&d| d <= max_delta_nu)
        .collect();
    edges.sort_by(f64::total_cmp);
    edges.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * b.abs().max(1.0));
    edges
}

/// Smallest scanned `Δν` with positive photon-photon concurrence.
pub fn scan_transition(rows: &[ScanRow]) -> Option<f64> {
    rows.iter().find(|r| r.c_pp > 0.0).map(|r| r.delta_nu)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lorentzian_basics() {
        assert!((spectrum(3.0, 0.5, 3.0).unwrap() - 1.0 / (PI * 0.5)).abs() < 1e-15);
        assert_eq!(spectrum(4.0, 0.5, 3.0).unwrap(), spectrum(2.0, 0.5, 3.0).unwrap());
        assert_eq!(detection_probability(0.0, 1.0).unwrap(), 0.0);
        assert!((detection_probability(1.0, 1.0).unwrap() - 0.5).abs() < 1e-15);
        assert!(detection_probability(-1.0, 1.0).is_err());
        assert!(spectrum(0.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn mode_edges() {
        let det = [-1.5, -0.5, 0.5, 1.5];
        assert_eq!(mode_edge_grid(&det, 1.0), vec![0.5]);
        assert_eq!(mode_edge_grid(&det, 2.0), vec![0.5, 1.5]);
    }

    #[test]
    fn thresholds() {
        assert!(bandwidth_threshold(FRAC_PI_4).unwrap().abs() < 1e-12);
        assert!((bandwidth_threshold(3.0 * PI / 8.0).unwrap() - 1.3136757077).abs() < 1e-9);
        assert!((bandwidth_threshold(0.4 * PI).unwrap() - 1.7861569409).abs() < 1e-9);
        assert!(bandwidth_threshold(FRAC_PI_2).is_err());
        assert!(bandwidth_threshold(0.5).is_err());
    }
}
