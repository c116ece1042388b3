use super::state::{DensityMatrix, PSD_TOL};
use crate::error::{invalid, Result};

/// `−Σ p log₂ p` with `0 log 0 = 0`; entries below zero are treated as zero.
pub fn shannon_bits(probs: impl IntoIterator<Item = f64>) -> f64 {
    probs.into_iter().filter(|&p| p > 0.0).map(|p| -p * p.log2()).sum()
}

pub fn binary_entropy(p: f64) -> f64 {
    shannon_bits([p, 1.0 - p])
}

/// Von Neumann entropy in ebits.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> Result<f64> {
    let ev = rho.eigenvalues();
    if let Some(&min) = ev.last() {
        if min < -PSD_TOL {
            return invalid(format!("density matrix has eigenvalue {min:e} < 0"));
        }
    }
    let s = shannon_bits(ev);
    Ok(s.clamp(0.0, (rho.dim() as f64).log2()))
}
