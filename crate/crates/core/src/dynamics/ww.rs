//! Single-excitation Weisskopf–Wigner problem: one two-level atom coupled to
//! a discrete set of bath modes.
//!
//! In the frame rotating at the atom frequency the Hamiltonian on
//! `{|e,0̄⟩, |g,1_k⟩}` is a real arrowhead (star graph) matrix
//!
//! ```text
//! H = [ 0    J_1  …  J_N ]
//!     [ J_1  Δ_1         ]
//!     [ ⋮         ⋱      ]
//!     [ J_N          Δ_N ]
//! ```
//!
//! whose eigenvalues are the roots of `f(λ) = λ − Σ_k J_k²/(λ − Δ_k)`, one
//! below `Δ_1`, one in each gap and one above `Δ_N`. Eigenvectors follow in
//! closed form from each root, so the whole decomposition costs `O(N²)`.
//!
//! `Γ` is the population decay rate: `|ξ(t)|² ≈ e^{−Γt}` in the continuum
//! limit and the emitted Lorentzian has half-width `Γ/2`.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{invalid, Error, Result};

/// Uniform flat-coupling discretization of the vacuum around the atom line.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct WwParams {
    pub modes: usize,
    /// Population decay rate.
    pub gamma: f64,
    /// Mode grid covers `[E − W, E + W]`.
    pub half_bandwidth: f64,
    pub atom_frequency: f64,
}

impl Default for WwParams {
    fn default() -> Self {
        Self {
            modes: 1000,
            gamma: 1.0,
            half_bandwidth: 40.0,
            atom_frequency: 100.0,
        }
    }
}

impl WwParams {
    pub fn validate(&self) -> Result<()> {
        if self.modes < 2 {
            return invalid(format!("need at least 2 bath modes, got {}", self.modes));
        }
        if !(self.gamma > 0.0 && self.gamma.is_finite()) {
            return invalid(format!("Γ = {} must be positive", self.gamma));
        }
        if !(self.half_bandwidth > 0.0 && self.half_bandwidth.is_finite()) {
            return invalid(format!("W = {} must be positive", self.half_bandwidth));
        }
        if !self.atom_frequency.is_finite() {
            return invalid("atom frequency must be finite");
        }
        Ok(())
    }

    /// Mode spacing `δω = 2W/(N − 1)`.
    pub fn spacing(&self) -> f64 {
        2.0 * self.half_bandwidth / (self.modes - 1) as f64
    }

    /// `J_k = √(Γ δω / 2π)`, which gives golden-rule rate Γ.
    pub fn coupling(&self) -> f64 {
        (self.gamma * self.spacing() / (2.0 * PI)).sqrt()
    }

    /// Recurrence time `2π/δω`; results are meaningful only well before it.
    pub fn horizon(&self) -> f64 {
        2.0 * PI / self.spacing()
    }

    /// Half-width at half-maximum of the emitted Lorentzian.
    pub fn linewidth(&self) -> f64 {
        0.5 * self.gamma
    }

    pub fn frequencies(&self) -> Vec<f64> {
        self.detunings().into_iter().map(|d| d + self.atom_frequency).collect()
    }

    /// `ω_k − E`.
    pub fn detunings(&self) -> Vec<f64> {
        let dw = self.spacing();
        (0..self.modes).map(|k| -self.half_bandwidth + k as f64 * dw).collect()
    }

    pub fn bath(&self) -> Result<Bath> {
        self.validate()?;
        let j = self.coupling();
        let mut bath = Bath::new(self.detunings(), vec![j; self.modes])?;
        bath.horizon = Some(self.horizon());
        Ok(bath)
    }
}

/// Mode detunings from the atom line and their couplings.
#[derive(Debug, Clone, PartialEq)]
pub struct Bath {
    detunings: Vec<f64>,
    couplings: Vec<f64>,
    horizon: Option<f64>,
}

impl Bath {
    /// Detunings must be strictly increasing, couplings positive.
    pub fn new(detunings: Vec<f64>, couplings: Vec<f64>) -> Result<Self> {
        if detunings.is_empty() || detunings.len() != couplings.len() {
            return invalid("bath needs matching, non-empty detuning and coupling lists");
        }
        if detunings.windows(2).any(|w| !(w[1] > w[0])) || detunings.iter().any(|d| !d.is_finite()) {
            return invalid("bath detunings must be finite and strictly increasing");
        }
        if couplings.iter().any(|&j| !(j > 0.0 && j.is_finite())) {
            return invalid("bath couplings must be positive");
        }
        Ok(Self {
            detunings,
            couplings,
            horizon: None,
        })
    }

    pub fn single_mode(detuning: f64, coupling: f64) -> Result<Self> {
        Self::new(vec![detuning], vec![coupling])
    }

    pub fn len(&self) -> usize {
        self.detunings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.detunings.is_empty()
    }

    pub fn detunings(&self) -> &[f64] {
        &self.detunings
    }

    pub fn couplings(&self) -> &[f64] {
        &self.couplings
    }

    pub fn horizon(&self) -> Option<f64> {
        self.horizon
    }
}

/// Exact eigendecomposition of the star-graph Hamiltonian.
#[derive(Debug, Clone)]
pub struct WwPropagator {
    bath: Bath,
    eigenvalues: Vec<f64>,
    /// Atom component of each eigenvector.
    atom: Vec<f64>,
    /// `modes[j * N + k]`: component of eigenvector `j` on mode `k`.
    modes: Vec<f64>,
}

impl WwPropagator {
    pub fn new(bath: Bath) -> Result<Self> {
        let n = bath.len();
        let det = &bath.detunings;
        let j2: Vec<f64> = bath.couplings.iter().map(|j| j * j).collect();
        let secular = |lam: f64| lam - det.iter().zip(&j2).map(|(d, g)| g / (lam - d)).sum::<f64>();
        let spread = j2.iter().sum::<f64>().sqrt() + 1.0;
        let mut brackets = Vec::with_capacity(n + 1);
        brackets.push((det[0].min(0.0) - spread, det[0]));
        for w in det.windows(2) {
            brackets.push((w[0], w[1]));
        }
        brackets.push((det[n - 1], det[n - 1].max(0.0) + spread));

        let mut eigenvalues = Vec::with_capacity(n + 1);
        for (lo0, hi0) in brackets {
            // f rises monotonically from −∞ to +∞ across every bracket
            let (mut lo, mut hi) = (lo0, hi0);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if mid <= lo || mid >= hi {
                    break;
                }
                if secular(mid) < 0.0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            eigenvalues.push(0.5 * (lo + hi));
        }

        let mut atom = Vec::with_capacity(n + 1);
        let mut modes = Vec::with_capacity((n + 1) * n);
        for &lam in &eigenvalues {
            let comps: Vec<f64> = det.iter().zip(&bath.couplings).map(|(d, j)| j / (lam - d)).collect();
            let norm = (1.0 + comps.iter().map(|c| c * c).sum::<f64>()).sqrt();
            if !norm.is_finite() {
                return Err(Error::Numeric(format!("eigenvector at λ = {lam} is not finite")));
            }
            atom.push(1.0 / norm);
            modes.extend(comps.iter().map(|c| c / norm));
        }
        let atom_weight: f64 = atom.iter().map(|a| a * a).sum();
        if (atom_weight - 1.0).abs() > 1e-9 {
            return Err(Error::Numeric(format!(
                "eigenbasis not complete: atom weight {atom_weight}"
            )));
        }
        Ok(Self {
            bath,
            eigenvalues,
            atom,
            modes,
        })
    }

    pub fn from_params(p: &WwParams) -> Result<Self> {
        Self::new(p.bath()?)
    }

    pub fn bath(&self) -> &Bath {
        &self.bath
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// Excited-state amplitude `ξ(t)` starting from `ξ(0) = 1`.
    pub fn xi(&self, t: f64) -> C64 {
        self.eigenvalues
            .iter()
            .zip(&self.atom)
            .map(|(&lam, &a)| C64::from_polar(a * a, -lam * t))
            .sum()
    }

    /// `(ξ(t), [λ_k(t)])`.
    pub fn amplitudes(&self, t: f64) -> (C64, Vec<C64>) {
        let n = self.bath.len();
        let mut lambdas = vec![C64::new(0.0, 0.0); n];
        let mut xi = C64::new(0.0, 0.0);
        for (j, (&lam, &a)) in self.eigenvalues.iter().zip(&self.atom).enumerate() {
            let ph = C64::from_polar(a, -lam * t);
            xi += ph * a;
            let row = &self.modes[j * n..(j + 1) * n];
            for (l, &m) in lambdas.iter_mut().zip(row) {
                *l += ph * m;
            }
        }
        (xi, lambdas)
    }

    pub fn solve(&self, times: &[f64]) -> Result<WwSolution> {
        if times.iter().any(|t| !t.is_finite() || *t < 0.0) {
            return invalid("solution times must be finite and non-negative");
        }
        let mut xi = Vec::with_capacity(times.len());
        let mut lambdas = Vec::with_capacity(times.len());
        for &t in times {
            let (x, l) = self.amplitudes(t);
            xi.push(x);
            lambdas.push(l);
        }
        let beyond_horizon = match self.bath.horizon {
            Some(h) => times.iter().any(|&t| t > 0.5 * h),
            None => false,
        };
        Ok(WwSolution {
            detunings: self.bath.detunings.clone(),
            times: times.to_vec(),
            xi,
            lambdas,
            beyond_horizon,
        })
    }
}

/// Amplitudes on a time grid.
#[derive(Debug, Clone)]
pub struct WwSolution {
    /// Mode detunings `ω_k − E`, index-aligned with each `lambdas` row.
    pub detunings: Vec<f64>,
    pub times: Vec<f64>,
    pub xi: Vec<C64>,
    pub lambdas: Vec<Vec<C64>>,
    /// Set when a requested time passes half the recurrence time.
    pub beyond_horizon: bool,
}

impl WwSolution {
    /// Largest `| |ξ|² + Σ|λ_k|² − 1 |` over the stored times.
    pub fn norm_error(&self) -> f64 {
        self.xi
            .iter()
            .zip(&self.lambdas)
            .map(|(x, l)| (x.norm_sqr() + l.iter().map(|z| z.norm_sqr()).sum::<f64>() - 1.0).abs())
            .fold(0.0, f64::max)
    }

    pub fn index_of(&self, t: f64) -> Option<usize> {
        self.times
            .iter()
            .position(|&s| (s - t).abs() <= 1e-12 * t.abs().max(1.0))
    }
}

/// Solves the single-atom problem on `times`.
pub fn ww_solve(params: &WwParams, times: &[f64]) -> Result<WwSolution> {
    WwPropagator::from_params(params)?.solve(times)
}
