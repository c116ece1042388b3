use num_complex::Complex64 as C64;
use serde::Serialize;

use crate::error::{invalid, Result};
use crate::linalg::{kron, psd_factor, sigma_y};
use crate::qcore::{DensityMatrix, PureState, SubsystemLayout};

fn require_two_qubits(layout: &SubsystemLayout) -> Result<()> {
    if layout.dims() != [2, 2] {
        return invalid(format!("expected two qubits, got layout {layout}"));
    }
    Ok(())
}

/// `⟨ψ|σ_y^{⊗n}|ψ*⟩` for an n-qubit amplitude vector.
fn spin_flip_overlap(amps: &[C64], n: usize) -> C64 {
    let mask = (1usize << n) - 1;
    let mut acc = C64::new(0.0, 0.0);
    for (x, a) in amps.iter().enumerate() {
        let partner = amps[x ^ mask];
        if partner.norm_sqr() == 0.0 || a.norm_sqr() == 0.0 {
            continue;
        }
        // σ_y|0⟩ = i|1⟩, σ_y|1⟩ = −i|0⟩, so row x picks up −i per 0 bit and i per 1 bit
        let ones = x.count_ones() as usize;
        let zeros = n - ones;
        let phase = C64::new(0.0, 1.0).powu(ones as u32) * C64::new(0.0, -1.0).powu(zeros as u32);
        acc += a.conj() * phase * partner.conj();
    }
    acc
}

/// Wootters concurrence `|⟨ψ|σ_y⊗σ_y|ψ*⟩|` of a two-qubit pure state.
pub fn concurrence_pure(psi: &PureState) -> Result<f64> {
    require_two_qubits(psi.layout())?;
    Ok(spin_flip_overlap(psi.amplitudes(), 2).norm().min(1.0))
}

/// `|⟨ψ|σ_y^{⊗n}|ψ*⟩|` for an even number of qubits (the 4-tangle root for
/// n = 4).
pub fn n_concurrence(psi: &PureState) -> Result<f64> {
    let layout = psi.layout();
    if !layout.is_all_qubits() {
        return invalid(format!("n-concurrence needs qubits only, got {layout}"));
    }
    let n = layout.len();
    if n % 2 == 1 {
        return invalid(format!("n-concurrence is only defined here for even n, got {n}"));
    }
    Ok(spin_flip_overlap(psi.amplitudes(), n).norm().min(1.0))
}

/// Square roots of the spin-flipped spectrum (eigenvalues of
/// `ρ (σ_y⊗σ_y) ρ* (σ_y⊗σ_y)`), descending. Computed as the singular values of
/// `Wᵀ (σ_y⊗σ_y) W` with `ρ = W W†`, which stays accurate for low-rank `ρ`.
fn spin_flip_roots(rho: &DensityMatrix) -> Result<[f64; 4]> {
    require_two_qubits(rho.layout())?;
    let yy = kron(&sigma_y(), &sigma_y());
    let w = psd_factor(rho.matrix());
    let tau = w.transpose() * yy * &w;
    let mut sv: Vec<f64> = tau.singular_values().iter().copied().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    Ok([sv[0], sv[1], sv[2], sv[3]])
}

/// Spin-flipped spectrum, descending.
pub fn spin_flip_eigenvalues(rho: &DensityMatrix) -> Result<[f64; 4]> {
    Ok(spin_flip_roots(rho)?.map(|r| r * r))
}

/// Auxiliary function `Q = √λ₁ − √λ₂ − √λ₃ − √λ₄`; negative inside the
/// sudden-death region.
pub fn q_auxiliary(rho: &DensityMatrix) -> Result<f64> {
    let r = spin_flip_roots(rho)?;
    Ok(r[0] - r[1] - r[2] - r[3])
}

/// `C(ρ) = max(0, Q(ρ))`.
pub fn concurrence_mixed(rho: &DensityMatrix) -> Result<f64> {
    Ok(q_auxiliary(rho)?.max(0.0))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MeasureReport {
    pub concurrence: f64,
    pub q: f64,
    /// Labels of the traced-out subsystems, e.g. `P1P2`.
    pub traced: String,
}

/// Concurrence and `Q` of the two-qubit reduced state on `keep`.
pub fn measure_report(psi: &PureState, keep: &[usize]) -> Result<MeasureReport> {
    let rho = psi.reduced_state(keep)?;
    let q = q_auxiliary(&rho)?;
    let traced = (0..psi.layout().len())
        .filter(|i| !keep.contains(i))
        .map(|i| psi.layout().labels()[i].as_str())
        .collect();
    Ok(MeasureReport {
        concurrence: q.max(0.0),
        q,
        traced,
    })
}
