use num_complex::Complex64 as C64;
use serde::Serialize;

use super::concurrence::{n_concurrence, q_auxiliary};
use crate::dynamics::{jc_state, pair_state, JcParams, WwPropagator};
use crate::error::{invalid, Result};
use crate::qcore::PureState;

/// Atom indices in the `A1 P1 A2 P2` layout.
pub const ATOMS: [usize; 2] = [0, 2];
/// Photon (or collective mode) indices in the `A1 P1 A2 P2` layout.
pub const PHOTONS: [usize; 2] = [1, 3];

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SigmaBreakdown {
    pub q_aa: f64,
    pub q_pp: f64,
    pub c4: f64,
    pub sigma: f64,
}

impl SigmaBreakdown {
    pub fn c_aa(&self) -> f64 {
        self.q_aa.max(0.0)
    }

    pub fn c_pp(&self) -> f64 {
        self.q_pp.max(0.0)
    }
}

/// `Q_AA + Q_PP + C₄` of a four-qubit `A1 P1 A2 P2` state, with C₄ taken from
/// the `σ_y^{⊗4}` definition.
pub fn sigma_components(psi: &PureState) -> Result<SigmaBreakdown> {
    if psi.layout().dims() != [2, 2, 2, 2] {
        return invalid(format!("Σ needs a four-qubit A1 P1 A2 P2 state, got {}", psi.layout()));
    }
    let q_aa = q_auxiliary(&psi.reduced_state(&ATOMS)?)?;
    let q_pp = q_auxiliary(&psi.reduced_state(&PHOTONS)?)?;
    let c4 = n_concurrence(psi)?;
    Ok(SigmaBreakdown {
        q_aa,
        q_pp,
        c4,
        sigma: q_aa + q_pp + c4,
    })
}

/// Which model generates the four-qubit state.
#[derive(Debug, Clone, Copy)]
pub enum Model<'a> {
    JaynesCummings(JcParams),
    /// Atoms and their collective emission modes, all bath modes included.
    WeisskopfWigner(&'a WwPropagator),
}

impl Model<'_> {
    pub fn state(&self, theta: f64, t: f64) -> Result<PureState> {
        match self {
            Model::JaynesCummings(p) => jc_state(theta, p.coupling() * t),
            Model::WeisskopfWigner(prop) => {
                let (xi, lambdas) = prop.amplitudes(t);
                let chi = lambdas.iter().map(|l| l.norm_sqr()).sum::<f64>().sqrt();
                pair_state(theta, xi, C64::new(chi, 0.0))
            }
        }
    }
}

/// `Σ(θ, t) = Q_AA + Q_PP + C₄`; equals `sin 2θ` for both models.
pub fn invariant_sigma(theta: f64, t: f64, model: &Model<'_>) -> Result<f64> {
    Ok(sigma_components(&model.state(theta, t)?)?.sigma)
}
