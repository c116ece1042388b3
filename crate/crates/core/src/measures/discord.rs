//! Quantum discord.
//!
//! For a pure state cut into two blocks the discord equals the entanglement
//! entropy of either block. For a general two-qubit state it is computed as
//!
//! ```text
//! D(A|B) = S(ρ_B) − S(ρ_AB) + min_{Π} Σ_b p_b S(ρ_{A|b})
//! ```
//!
//! with the minimum over rank-one projective measurements `{|n⟩⟨n|, |n⊥⟩⟨n⊥|}`
//! on qubit B, `|n⟩ = cos(θ/2)|0⟩ + e^{iφ} sin(θ/2)|1⟩`. The minimum is located
//! on a coarse `(θ, φ)` grid and polished by a compass search.

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{invalid, Result};
use crate::linalg::hermitian_eigenvalues;
use crate::qcore::{shannon_bits, von_neumann_entropy, DensityMatrix, Partition, PureState};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DiscordOptions {
    /// Points per measurement angle in the coarse grid.
    pub grid: usize,
    /// Absolute tolerance on the conditional entropy for the refinement.
    pub tolerance: f64,
    pub max_iterations: usize,
    /// Number of seeded, perturbed restarts of the refinement.
    pub restarts: usize,
    pub seed: u64,
}

impl Default for DiscordOptions {
    fn default() -> Self {
        Self {
            grid: 64,
            tolerance: 1e-9,
            max_iterations: 500,
            restarts: 4,
            seed: 0,
        }
    }
}

impl DiscordOptions {
    pub fn validate(&self) -> Result<()> {
        if self.grid < 8 {
            return invalid(format!("discord grid resolution {} < 8", self.grid));
        }
        if !(self.tolerance > 0.0) {
            return invalid(format!("discord tolerance {} must be > 0", self.tolerance));
        }
        if self.max_iterations == 0 {
            return invalid("discord refinement needs at least one iteration");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DiscordResult {
    /// Discord in ebits, clamped at zero.
    pub value: f64,
    /// Unclamped value; may sit a rounding error below zero.
    pub raw: f64,
    pub min_conditional_entropy: f64,
    /// Bloch angles of the optimal measurement direction on qubit B.
    pub theta: f64,
    pub phi: f64,
    pub converged: bool,
}

/// Discord of a pure state across a two-block cut: the entropy of a block.
pub fn discord_pure_bipartition(psi: &PureState, bipartition: &Partition) -> Result<f64> {
    if bipartition.k() != 2 {
        return invalid(format!("discord needs a two-block partition, got {}", bipartition.k()));
    }
    bipartition.check_layout(psi.layout())?;
    let block = &bipartition.blocks()[0];
    von_neumann_entropy(&psi.reduced_state(block)?)
}

/// Two-qubit density matrix in a flat 4×4 form for the hot loop.
struct TwoQubit {
    m: [[C64; 4]; 4],
}

impl TwoQubit {
    fn new(rho: &DensityMatrix) -> Self {
        let mut m = [[C64::new(0.0, 0.0); 4]; 4];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, z) in row.iter_mut().enumerate() {
                *z = rho.matrix()[(i, j)];
            }
        }
        Self { m }
    }

    /// Unnormalized conditional state of A after projecting B onto `v`.
    fn conditional(&self, v: [C64; 2]) -> [[C64; 2]; 2] {
        let mut out = [[C64::new(0.0, 0.0); 2]; 2];
        for (a, row) in out.iter_mut().enumerate() {
            for (a2, z) in row.iter_mut().enumerate() {
                for (b, vb) in v.iter().enumerate() {
                    for (b2, vb2) in v.iter().enumerate() {
                        *z += vb.conj() * self.m[2 * a + b][2 * a2 + b2] * vb2;
                    }
                }
            }
        }
        out
    }

    fn conditional_entropy(&self, theta: f64, phi: f64) -> f64 {
        let (c, s) = ((theta / 2.0).cos(), (theta / 2.0).sin());
        let e = C64::from_polar(1.0, phi);
        let n = [C64::new(c, 0.0), e * s];
        let perp = [-e.conj() * s, C64::new(c, 0.0)];
        [n, perp]
            .into_iter()
            .map(|v| {
                let sigma = self.conditional(v);
                let p = sigma[0][0].re + sigma[1][1].re;
                if p <= 1e-300 {
                    return 0.0;
                }
                let mean = 0.5 * p;
                let diff = 0.5 * (sigma[0][0].re - sigma[1][1].re);
                let rad = (diff * diff + sigma[0][1].norm_sqr()).sqrt();
                p * shannon_bits([(mean + rad) / p, (mean - rad) / p])
            })
            .sum()
    }
}

fn compass_refine(rho: &TwoQubit, start: (f64, f64), step0: f64, opts: &DiscordOptions) -> (f64, f64, f64, bool) {
    let (mut th, mut ph) = start;
    let mut best = rho.conditional_entropy(th, ph);
    let mut step = step0;
    for _ in 0..opts.max_iterations {
        let mut moved = false;
        let mut spread: f64 = 0.0;
        for (dt, dp) in [(step, 0.0), (-step, 0.0), (0.0, step), (0.0, -step)] {
            let f = rho.conditional_entropy(th + dt, ph + dp);
            spread = spread.max((f - best).abs());
            if f < best {
                best = f;
                th += dt;
                ph += dp;
                moved = true;
                break;
            }
        }
        if !moved {
            if spread < opts.tolerance && step < 1e-6 {
                return (best, th, ph, true);
            }
            step *= 0.5;
            if step < 1e-14 {
                return (best, th, ph, true);
            }
        }
    }
    (best, th, ph, false)
}

/// Ollivier–Zurek discord with projective measurements on the second qubit.
pub fn discord_two_qubit(rho: &DensityMatrix, opts: &DiscordOptions) -> Result<DiscordResult> {
    opts.validate()?;
    if rho.layout().dims() != [2, 2] {
        return invalid(format!("discord needs two qubits, got {}", rho.layout()));
    }
    let tq = TwoQubit::new(rho);
    let g = opts.grid;
    let dth = PI / (g - 1) as f64;
    let dph = 2.0 * PI / g as f64;
    // deterministic reduction: smallest value, ties to lowest grid index
    let (grid_best, idx) = (0..g * g)
        .into_par_iter()
        .map(|i| (tq.conditional_entropy((i / g) as f64 * dth, (i % g) as f64 * dph), i))
        .reduce(
            || (f64::INFINITY, usize::MAX),
            |a, b| match a.0.total_cmp(&b.0) {
                std::cmp::Ordering::Less => a,
                std::cmp::Ordering::Greater => b,
                std::cmp::Ordering::Equal => {
                    if a.1 <= b.1 {
                        a
                    } else {
                        b
                    }
                }
            },
        );
    let start = ((idx / g) as f64 * dth, (idx % g) as f64 * dph);
    let step = dth.max(dph) / 2.0;
    let (mut best, mut th, mut ph, mut converged) = compass_refine(&tq, start, step, opts);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    for _ in 0..opts.restarts {
        let s = (
            start.0 + rng.random_range(-1.0..1.0) * dth,
            start.1 + rng.random_range(-1.0..1.0) * dph,
        );
        let (f, t, p, c) = compass_refine(&tq, s, step, opts);
        if f < best {
            (best, th, ph, converged) = (f, t, p, c);
        }
    }
    debug_assert!(best <= grid_best + 1e-15);

    let rho_b = rho.partial_trace(&[1])?;
    let raw = von_neumann_entropy(&rho_b)? - entropy_unchecked(rho.matrix()) + best;
    Ok(DiscordResult {
        value: raw.max(0.0),
        raw,
        min_conditional_entropy: best,
        theta: th.rem_euclid(2.0 * PI),
        phi: ph.rem_euclid(2.0 * PI),
        converged,
    })
}

fn entropy_unchecked(m: &DMatrix<C64>) -> f64 {
    shannon_bits(hermitian_eigenvalues(m))
}
