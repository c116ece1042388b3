#![allow(dead_code)]

use esdkit::qcore::{PureState, SubsystemLayout};
use esdkit::C64;
use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn gauss(rng: &mut ChaCha8Rng) -> C64 {
    C64::new(StandardNormal.sample(&mut *rng), StandardNormal.sample(&mut *rng))
}

/// Haar-random pure state on `layout`.
pub fn random_state(layout: SubsystemLayout, rng: &mut ChaCha8Rng) -> PureState {
    let amps = (0..layout.total_dim()).map(|_| gauss(rng)).collect();
    PureState::normalized(amps, layout).unwrap()
}

pub fn random_qubits(n: usize, rng: &mut ChaCha8Rng) -> PureState {
    random_state(SubsystemLayout::numbered_qubits(n).unwrap(), rng)
}

/// Haar-random `d × d` unitary from the QR of a Ginibre matrix.
pub fn random_unitary(d: usize, rng: &mut ChaCha8Rng) -> DMatrix<C64> {
    let g = DMatrix::from_fn(d, d, |_, _| gauss(rng));
    let qr = g.qr();
    let (q, r) = (qr.q(), qr.r());
    let phases = DMatrix::from_fn(d, d, |i, j| {
        if i == j {
            r[(i, i)] / C64::new(r[(i, i)].norm(), 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    });
    q * phases
}

pub fn max_amp_diff(a: &PureState, b: &PureState) -> f64 {
    a.amplitudes()
        .iter()
        .zip(b.amplitudes())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}
