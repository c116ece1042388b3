use nalgebra::{DMatrix, Matrix2, SymmetricEigen};
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};
use std::f64::consts::FRAC_PI_2;

use crate::error::{invalid, Result};
use crate::linalg::ZERO;
use crate::qcore::{PureState, SubsystemLayout};

/// Resonant Jaynes–Cummings parameters (`ħ = 1`). The mode frequency is
/// pinned to the atom energy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct JcParams {
    coupling: f64,
    atom_energy: f64,
}

impl JcParams {
    pub fn new(coupling: f64, atom_energy: f64) -> Result<Self> {
        if !(coupling > 0.0 && coupling.is_finite()) {
            return invalid(format!("coupling J = {coupling} must be positive"));
        }
        if !atom_energy.is_finite() {
            return invalid("atom energy must be finite");
        }
        Ok(Self { coupling, atom_energy })
    }

    pub fn coupling(&self) -> f64 {
        self.coupling
    }

    pub fn atom_energy(&self) -> f64 {
        self.atom_energy
    }

    pub fn mode_frequency(&self) -> f64 {
        self.atom_energy
    }

    /// Re-checks values that arrived through deserialization.
    pub fn validate(&self) -> Result<()> {
        Self::new(self.coupling, self.atom_energy).map(|_| ())
    }
}

impl Default for JcParams {
    fn default() -> Self {
        Self {
            coupling: 1.0,
            atom_energy: 1.0,
        }
    }
}

/// `A1 P1 A2 P2`, all two-level.
pub fn four_mode_layout() -> SubsystemLayout {
    SubsystemLayout::qubits(vec!["A1", "P1", "A2", "P2"]).expect("static layout")
}

pub(crate) fn check_theta(theta: f64) -> Result<()> {
    if !(-1e-12..=FRAC_PI_2 + 1e-12).contains(&theta) {
        return invalid(format!("θ = {theta} outside [0, π/2]"));
    }
    Ok(())
}

fn idx(a1: usize, p1: usize, a2: usize, p2: usize) -> usize {
    a1 * 8 + p1 * 4 + a2 * 2 + p2
}

/// `cos θ |g0g0⟩ + sin θ |e0e0⟩`.
pub fn initial_state(theta: f64) -> Result<PureState> {
    jc_state(theta, 0.0)
}

/// Closed-form resonant evolution at dimensionless time `Jt`, in the frame
/// rotating with the free Hamiltonian.
pub fn jc_state(theta: f64, jt: f64) -> Result<PureState> {
    check_theta(theta)?;
    if !jt.is_finite() {
        return invalid("Jt must be finite");
    }
    let (st, ct) = theta.sin_cos();
    let (s, c) = jt.sin_cos();
    let mut amps = vec![ZERO; 16];
    amps[idx(0, 0, 0, 0)] = C64::new(ct, 0.0);
    amps[idx(1, 0, 1, 0)] = C64::new(st * c * c, 0.0);
    amps[idx(0, 1, 0, 1)] = C64::new(-st * s * s, 0.0);
    let cross = C64::new(0.0, -st * (2.0 * jt).sin() / 2.0);
    amps[idx(0, 1, 1, 0)] = cross;
    amps[idx(1, 0, 0, 1)] = cross;
    PureState::normalized(amps, four_mode_layout())
}

/// Propagator of one atom/cavity pair on `{g0, g1, e0, e1}` (index
/// `2·atom + photon`), photon truncated to one quantum, in the frame
/// rotating at the atom energy.
pub fn pair_propagator(t: f64, p: &JcParams) -> DMatrix<C64> {
    let (e, w, j) = (p.atom_energy(), p.mode_frequency(), p.coupling());
    // single-excitation block on (e0, g1)
    let h = Matrix2::new(e, j, j, w);
    let eig = SymmetricEigen::new(h);
    let frame = C64::from_polar(1.0, e * t);
    let mut block = [[ZERO; 2]; 2];
    for (r, row) in block.iter_mut().enumerate() {
        for (c, z) in row.iter_mut().enumerate() {
            *z = (0..2)
                .map(|k| {
                    let v = eig.eigenvectors.column(k);
                    C64::from_polar(1.0, -eig.eigenvalues[k] * t) * v[r] * v[c]
                })
                .sum::<C64>()
                * frame;
        }
    }
    let mut u = DMatrix::<C64>::zeros(4, 4);
    u[(0, 0)] = C64::new(1.0, 0.0);
    // basis positions of e0 and g1
    let pos = [2usize, 1];
    for r in 0..2 {
        for c in 0..2 {
            u[(pos[r], pos[c])] = block[r][c];
        }
    }
    // |e1⟩ has no partner inside the truncation: free phase only
    u[(3, 3)] = C64::from_polar(1.0, -(e + w) * t) * frame * frame;
    u
}

/// Numeric evolution of the initial state under `H_JC ⊕ H_JC`.
pub fn jc_evolve_numeric(theta: f64, t: f64, p: &JcParams) -> Result<PureState> {
    if !t.is_finite() {
        return invalid("time must be finite");
    }
    let u = pair_propagator(t, p);
    initial_state(theta)?.apply_on(&[0, 1], &u)?.apply_on(&[2, 3], &u)
}
