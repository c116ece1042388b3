//! Two atoms decaying into independent baths, regrouped per atom into the
//! atom `A`, a collective photon mode `P` built from a chosen set of bath
//! modes, and everything else `E`.
//!
//! Each atom evolves as `|e⟩ → ξ|e00⟩ + χ'|g10⟩ + η|g01⟩` on `A P E`, where
//! `χ'² = Σ_{k∈K} |λ_k|²` and `η² = 1 − |ξ|² − χ'²`.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use super::jc::{check_theta, four_mode_layout};
use super::ww::WwSolution;
use crate::error::{invalid, Error, Result};
use crate::linalg::ZERO;
use crate::qcore::{DensityMatrix, PureState, SubsystemLayout};

/// Largest tolerated `|ξ|² + χ'² − 1` excess.
const WEIGHT_TOL: f64 = 1e-8;

/// Which bath modes make up the collective mode.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModeSubset {
    All,
    Indices(Vec<usize>),
    /// Modes with `|ω_k − E| ≤ Δν`.
    Window(f64),
}

impl ModeSubset {
    pub fn all() -> Self {
        Self::All
    }

    pub fn indices(mut idx: Vec<usize>) -> Self {
        idx.sort_unstable();
        idx.dedup();
        Self::Indices(idx)
    }

    pub fn window(delta_nu: f64) -> Result<Self> {
        if !(delta_nu >= 0.0 && delta_nu.is_finite()) {
            return invalid(format!("window half-width Δν = {delta_nu} must be ≥ 0"));
        }
        Ok(Self::Window(delta_nu))
    }

    /// Mode indices, ascending. A window always gives a contiguous range.
    pub fn resolve(&self, detunings: &[f64]) -> Result<Vec<usize>> {
        match self {
            Self::All => Ok((0..detunings.len()).collect()),
            Self::Indices(idx) => {
                if let Some(&bad) = idx.iter().find(|&&i| i >= detunings.len()) {
                    return invalid(format!("mode index {bad} out of range for {} modes", detunings.len()));
                }
                Ok(idx.clone())
            }
            Self::Window(dn) => {
                let slack = 1e-12 * dn.max(1.0);
                Ok(detunings
                    .iter()
                    .enumerate()
                    .filter(|(_, d)| d.abs() <= dn + slack)
                    .map(|(i, _)| i)
                    .collect())
            }
        }
    }

    /// `χ' = √(Σ_{k∈K} |λ_k|²)`.
    pub fn chi_prime(&self, detunings: &[f64], lambdas: &[C64]) -> Result<f64> {
        if detunings.len() != lambdas.len() {
            return invalid("mode amplitudes and detunings differ in length");
        }
        let w: f64 = self.resolve(detunings)?.iter().map(|&k| lambdas[k].norm_sqr()).sum();
        Ok(w.sqrt().min(1.0))
    }

    /// `Σ_{k∈K} |λ_k|²|λ_k|²` for two identical atoms. Diagnostic only.
    pub fn product_form(&self, detunings: &[f64], lambdas: &[C64]) -> Result<f64> {
        if detunings.len() != lambdas.len() {
            return invalid("mode amplitudes and detunings differ in length");
        }
        Ok(self
            .resolve(detunings)?
            .iter()
            .map(|&k| lambdas[k].norm_sqr().powi(2))
            .sum())
    }
}

/// Which two-qubit pair to keep after tracing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Pair {
    Atoms,
    Photons,
}

fn check_weights(xi: C64, chi: f64) -> Result<f64> {
    if !(chi >= 0.0) || !xi.norm().is_finite() {
        return invalid(format!("χ' = {chi} must be ≥ 0 and ξ finite"));
    }
    let rest = 1.0 - xi.norm_sqr() - chi * chi;
    if rest < -WEIGHT_TOL {
        return Err(Error::InvalidInput(format!("|ξ|² + χ'² = {} exceeds 1", 1.0 - rest)));
    }
    Ok(rest.max(0.0).sqrt())
}

/// `cos θ |g0g0⟩ + sin θ (ξ|e0⟩ + χ|g1⟩)^{⊗2}` on `A1 P1 A2 P2`, for the case
/// where the collective mode carries all emitted weight. With `ξ = cos Jt`
/// and `χ = −i sin Jt` this is the resonant JC state.
pub fn pair_state(theta: f64, xi: C64, chi: C64) -> Result<PureState> {
    check_theta(theta)?;
    let total = xi.norm_sqr() + chi.norm_sqr();
    if (total - 1.0).abs() > WEIGHT_TOL {
        return invalid(format!("|ξ|² + |χ|² = {total} differs from 1"));
    }
    let (st, ct) = theta.sin_cos();
    // single-atom amplitudes on (atom, photon) = g0, g1, e0, e1
    let local = [ZERO, chi, xi, ZERO];
    let mut amps = vec![ZERO; 16];
    amps[0] = C64::new(ct, 0.0);
    for a in 0..4 {
        for b in 0..4 {
            amps[4 * a + b] += local[a] * local[b] * st;
        }
    }
    PureState::normalized(amps, four_mode_layout())
}

/// `A1 P1 E1 A2 P2 E2`.
pub fn collective_layout() -> SubsystemLayout {
    SubsystemLayout::qubits(vec!["A1", "P1", "E1", "A2", "P2", "E2"]).expect("static layout")
}

/// Six-qubit state of both atoms with their collective and environment modes.
pub fn collective_state(theta: f64, xi: C64, chi_prime: f64) -> Result<PureState> {
    check_theta(theta)?;
    let eta = check_weights(xi, chi_prime)?;
    let (st, ct) = theta.sin_cos();
    // A P E index 4a + 2p + e: e00 = 4, g10 = 2, g01 = 1
    let mut local = [ZERO; 8];
    local[4] = xi;
    local[2] = C64::new(chi_prime, 0.0);
    local[1] = C64::new(eta, 0.0);
    let mut amps = vec![ZERO; 64];
    amps[0] = C64::new(ct, 0.0);
    for a in 0..8 {
        for b in 0..8 {
            amps[8 * a + b] += local[a] * local[b] * st;
        }
    }
    PureState::normalized(amps, collective_layout())
}

/// Reduced atom-atom or mode-mode state of [`collective_state`]. All such
/// states are X-shaped; anything off the X beyond `1e-12` is an error.
pub fn collective_reduced(theta: f64, xi: C64, chi_prime: f64, pair: Pair) -> Result<DensityMatrix> {
    let psi = collective_state(theta, xi, chi_prime)?;
    let keep = match pair {
        Pair::Atoms => [0, 3],
        Pair::Photons => [1, 4],
    };
    let rho = psi.reduced_state(&keep)?;
    let m = rho.matrix();
    for i in 0..4 {
        for j in 0..4 {
            if i != j && i + j != 3 && m[(i, j)].norm() > 1e-12 {
                return Err(Error::Numeric(format!(
                    "reduced state not X-shaped: |ρ[{i},{j}]| = {:e}",
                    m[(i, j)].norm()
                )));
            }
        }
    }
    Ok(rho)
}

/// Two-qubit reduced state at a stored time `t` of a bath solution.
pub fn two_atom_ww_reduced(
    theta: f64,
    sol: &WwSolution,
    subset: &ModeSubset,
    t: f64,
    pair: Pair,
) -> Result<DensityMatrix> {
    let i = sol
        .index_of(t)
        .ok_or_else(|| Error::InvalidInput(format!("time {t} is not on the solution grid")))?;
    let chi = subset.chi_prime(&sol.detunings, &sol.lambdas[i])?;
    collective_reduced(theta, sol.xi[i], chi, pair)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::jc::jc_state;
    use crate::measures::{concurrence_mixed, concurrence_pure, q_auxiliary};

    #[test]
    fn pair_state_reduces_to_jc() {
        for &(th, jt) in &[(0.3, 0.2f64), (1.2566, 1.0), (std::f64::consts::FRAC_PI_4, 2.9)] {
            let a = pair_state(th, C64::new(jt.cos(), 0.0), C64::new(0.0, -jt.sin())).unwrap();
            let b = jc_state(th, jt).unwrap();
            let d = a
                .amplitudes()
                .iter()
                .zip(b.amplitudes())
                .map(|(x, y)| (x - y).norm())
                .fold(0.0, f64::max);
            assert!(d < 1e-14, "θ={th} Jt={jt}: {d}");
        }
    }

    #[test]
    fn t_zero_atoms_are_pure() {
        let th = 1.0;
        let rho = collective_reduced(th, C64::new(1.0, 0.0), 0.0, Pair::Atoms).unwrap();
        assert!((rho.purity() - 1.0).abs() < 1e-14);
        let mut amps = vec![ZERO; 4];
        amps[0] = C64::new(th.cos(), 0.0);
        amps[3] = C64::new(th.sin(), 0.0);
        let psi = PureState::new(amps, SubsystemLayout::numbered_qubits(2).unwrap()).unwrap();
        let c = concurrence_pure(&psi).unwrap();
        assert!((concurrence_mixed(&rho).unwrap() - c).abs() < 1e-12);
    }

    #[test]
    fn photon_threshold_sits_at_one_minus_cot() {
        let th = 0.4 * std::f64::consts::PI;
        let cut = 1.0 - 1.0 / th.tan();
        let q =
            |chi_sq: f64| q_auxiliary(&collective_reduced(th, ZERO, chi_sq.sqrt(), Pair::Photons).unwrap()).unwrap();
        assert!(q(cut - 1e-3) < 0.0);
        assert!(q(cut + 1e-3) > 0.0);
        assert!(q(cut).abs() < 1e-12);
    }

    #[test]
    fn window_resolves_contiguously() {
        let det: Vec<f64> = (-5..=5).map(|k| k as f64 * 0.5).collect();
        let idx = ModeSubset::window(1.0).unwrap().resolve(&det).unwrap();
        assert_eq!(idx, vec![3, 4, 5, 6, 7]);
        assert!(ModeSubset::window(-1.0).is_err());
        assert!(ModeSubset::indices(vec![11]).resolve(&det).is_err());
    }

    #[test]
    fn overweight_amplitudes_rejected() {
        assert!(collective_state(1.0, C64::new(0.9, 0.0), 0.9).is_err());
        assert!(pair_state(1.0, C64::new(0.5, 0.0), C64::new(0.5, 0.0)).is_err());
    }
}
