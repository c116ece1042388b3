use nalgebra::DVector;
use num_complex::Complex64 as C64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::qcore::{BlockIndexer, Partition, PureState, SubsystemLayout};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GeOptions {
    pub restarts: usize,
    /// Maximum sweeps per restart.
    pub max_iterations: usize,
    /// Stop once a sweep improves `Λ²` by less than this.
    pub tolerance: f64,
    pub seed: u64,
}

impl Default for GeOptions {
    fn default() -> Self {
        Self {
            restarts: 32,
            max_iterations: 500,
            tolerance: 1e-10,
            seed: 0,
        }
    }
}

impl GeOptions {
    pub fn validate(&self) -> Result<()> {
        if self.restarts == 0 {
            return invalid("geometric entanglement needs at least one restart");
        }
        if !(self.tolerance > 0.0) {
            return invalid(format!("tolerance {} must be > 0", self.tolerance));
        }
        if self.max_iterations == 0 {
            return invalid("max_iterations must be ≥ 1");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GeResult {
    /// `Λ²`: best squared overlap with a product state over the partition.
    pub lambda_sq: f64,
    /// `1 − Λ²`.
    pub energy: f64,
    pub partition: Partition,
    /// One normalized factor per block, in block order.
    pub factors: Vec<Vec<C64>>,
    pub converged: bool,
    pub iterations: usize,
}

impl GeResult {
    /// The maximizing product state as a full amplitude vector.
    pub fn product_state(&self, layout: &SubsystemLayout) -> Result<PureState> {
        let ix = BlockIndexer::new(layout, self.partition.blocks());
        let amps = (0..layout.total_dim())
            .map(|x| {
                self.factors
                    .iter()
                    .enumerate()
                    .map(|(b, f)| f[ix.local(x, b)])
                    .product()
            })
            .collect();
        PureState::normalized(amps, layout.clone())
    }
}

/// Block-coordinate ascent of `|⟨φ₁ ⊗ … ⊗ φ_K|ψ⟩|`.
///
/// Each block update replaces `φ_b` by the normalized contraction of `ψ`
/// against all other factors, which is the exact maximizer for that block,
/// so the overlap never decreases from one sweep to the next.
pub struct AlternatingOptimizer<'a> {
    amps: &'a [C64],
    ix: BlockIndexer,
    factors: Vec<DVector<C64>>,
    overlap: f64,
}

impl<'a> AlternatingOptimizer<'a> {
    pub fn new(psi: &'a PureState, partition: &Partition, init: Vec<DVector<C64>>) -> Result<Self> {
        partition.check_layout(psi.layout())?;
        let ix = BlockIndexer::new(psi.layout(), partition.blocks());
        if init.len() != ix.k() || init.iter().zip(&ix.block_dims).any(|(f, &d)| f.len() != d) {
            return invalid("initial factors do not match the partition's block dimensions");
        }
        let factors: Vec<DVector<C64>> = init
            .into_iter()
            .map(|f| {
                let n = f.norm();
                if n > 0.0 {
                    f / C64::new(n, 0.0)
                } else {
                    f
                }
            })
            .collect();
        let mut opt = Self {
            amps: psi.amplitudes(),
            ix,
            factors,
            overlap: 0.0,
        };
        opt.overlap = opt.current_overlap().norm();
        Ok(opt)
    }

    /// Haar-random initial factors.
    pub fn random_factors(block_dims: &[usize], rng: &mut ChaCha8Rng) -> Vec<DVector<C64>> {
        block_dims
            .iter()
            .map(|&d| {
                let v = DVector::from_iterator(
                    d,
                    (0..d).map(|_| C64::new(StandardNormal.sample(&mut *rng), StandardNormal.sample(&mut *rng))),
                );
                let n = v.norm();
                v / C64::new(n, 0.0)
            })
            .collect()
    }

    fn current_overlap(&self) -> C64 {
        let k = self.ix.k();
        self.amps
            .iter()
            .enumerate()
            .map(|(x, a)| {
                let mut w = *a;
                for c in 0..k {
                    w *= self.factors[c][self.ix.local(x, c)].conj();
                }
                w
            })
            .sum()
    }

    /// One pass over all blocks; returns the overlap `|⟨Φ|ψ⟩|` afterwards.
    pub fn sweep(&mut self) -> f64 {
        let k = self.ix.k();
        for b in 0..k {
            let mut v = DVector::<C64>::zeros(self.ix.block_dims[b]);
            for (x, a) in self.amps.iter().enumerate() {
                let mut w = *a;
                for c in 0..k {
                    if c != b {
                        w *= self.factors[c][self.ix.local(x, c)].conj();
                    }
                }
                v[self.ix.local(x, b)] += w;
            }
            let n = v.norm();
            // a vanishing contraction means every choice of φ_b gives zero overlap
            if n > 0.0 {
                self.factors[b] = v / C64::new(n, 0.0);
                self.overlap = n;
            }
        }
        self.overlap
    }

    pub fn overlap(&self) -> f64 {
        self.overlap
    }

    pub fn factors(&self) -> &[DVector<C64>] {
        &self.factors
    }

    pub fn block_dims(&self) -> &[usize] {
        &self.ix.block_dims
    }
}

struct Run {
    lambda_sq: f64,
    factors: Vec<DVector<C64>>,
    converged: bool,
    iterations: usize,
}

fn run_from(psi: &PureState, partition: &Partition, init: Vec<DVector<C64>>, opts: &GeOptions) -> Result<Run> {
    let mut opt = AlternatingOptimizer::new(psi, partition, init)?;
    let mut prev = opt.overlap().powi(2);
    let mut converged = false;
    let mut iterations = 0;
    for it in 1..=opts.max_iterations {
        let now = opt.sweep().powi(2);
        iterations = it;
        debug_assert!(now >= prev - 1e-12, "sweep decreased overlap {prev} -> {now}");
        let gain = now - prev;
        prev = now;
        if gain < opts.tolerance && it > 1 {
            converged = true;
            break;
        }
    }
    Ok(Run {
        lambda_sq: prev.min(1.0),
        factors: opt.factors().to_vec(),
        converged,
        iterations,
    })
}

/// RNG stream owned by one restart.
pub(crate) fn restart_rng(seed: u64, restart: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(restart as u64);
    rng
}

/// `Λ²` over product states of `partition`, with extra starting points.
///
/// Random restarts come first, then `warm` starts; the winner is the largest
/// `Λ²`, ties to the earliest run.
pub fn best_product_overlap_with(
    psi: &PureState,
    partition: &Partition,
    opts: &GeOptions,
    warm: &[Vec<DVector<C64>>],
) -> Result<GeResult> {
    opts.validate()?;
    partition.check_layout(psi.layout())?;
    let dims = BlockIndexer::new(psi.layout(), partition.blocks()).block_dims;
    let total = opts.restarts + warm.len();
    let runs: Vec<Run> = (0..total)
        .into_par_iter()
        .map(|r| {
            let init = if r < opts.restarts {
                AlternatingOptimizer::random_factors(&dims, &mut restart_rng(opts.seed, r))
            } else {
                warm[r - opts.restarts].clone()
            };
            run_from(psi, partition, init, opts)
        })
        .collect::<Result<_>>()?;
    let best = runs
        .into_iter()
        .reduce(|a, b| if b.lambda_sq > a.lambda_sq { b } else { a })
        .expect("at least one restart");
    Ok(GeResult {
        lambda_sq: best.lambda_sq,
        energy: 1.0 - best.lambda_sq,
        partition: partition.clone(),
        factors: best.factors.iter().map(|f| f.iter().copied().collect()).collect(),
        converged: best.converged,
        iterations: best.iterations,
    })
}

/// Best squared overlap of `psi` with states that factor over `partition`.
pub fn best_product_overlap(psi: &PureState, partition: &Partition, opts: &GeOptions) -> Result<GeResult> {
    best_product_overlap_with(psi, partition, opts, &[])
}
