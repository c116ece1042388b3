//! Geometric entanglement: `E = 1 − Λ²`, where `Λ²` is the largest squared
//! overlap with a state that factorizes over a partition.
//!
//! `relative_ge` fixes the partition, `absolute_ge` maximizes over every
//! partition with K blocks, and [`hierarchy`] collects `E_AGE^(K)` for
//! `K = 2..=n`. The hierarchy is computed from the finest level downwards and
//! seeds every coarse partition with the merged optimum of each finer
//! partition that refines it, which makes the ladder
//! `E^(2) ≤ E^(3) ≤ … ≤ E^(n)` hold by construction.

mod optimizer;

use nalgebra::DVector;
use num_complex::Complex64 as C64;
use serde::Serialize;

pub use optimizer::{best_product_overlap, best_product_overlap_with, AlternatingOptimizer, GeOptions, GeResult};

use crate::error::{invalid, Result};
use crate::qcore::{enumerate_partitions, Partition, PureState, SubsystemLayout};

/// Ladder slack tolerated by [`HierarchyReport::is_monotone`].
pub const LADDER_TOL: f64 = 1e-6;

/// Relative (fixed-partition) geometric entanglement.
pub fn relative_ge(psi: &PureState, partition: &Partition, opts: &GeOptions) -> Result<GeResult> {
    best_product_overlap(psi, partition, opts)
}

/// Absolute geometric entanglement for `k` blocks. Ties between partitions
/// go to the first one in canonical enumeration order.
pub fn absolute_ge(psi: &PureState, k: usize, opts: &GeOptions) -> Result<GeResult> {
    let n = psi.layout().len();
    if k < 2 || k > n {
        return invalid(format!("block count {k} outside 2..={n}"));
    }
    let mut best: Option<GeResult> = None;
    for p in enumerate_partitions(n, k)? {
        let r = relative_ge(psi, &p, opts)?;
        if best.as_ref().is_none_or(|b| r.lambda_sq > b.lambda_sq) {
            best = Some(r);
        }
    }
    Ok(best.expect("at least one partition"))
}

#[derive(Debug, Clone, Serialize)]
pub struct HierarchyLevel {
    pub k: usize,
    /// `E_AGE^(K)`.
    pub e_age: f64,
    pub best_partition: Partition,
    /// `E_RGE` for every partition with K blocks, canonical order.
    pub relative: Vec<(Partition, f64)>,
}

#[derive(Debug, Clone, Serialize)]
pub struct HierarchyReport {
    /// Levels `K = 2..=n`, ascending.
    pub levels: Vec<HierarchyLevel>,
    /// `E^(K) − E^(K−1)` for `K = 3..=n`; differences within
    /// [`LADDER_TOL`] below zero are reported as zero.
    pub differences: Vec<(usize, f64)>,
    /// False if any restart winner hit the sweep limit.
    pub converged: bool,
}

impl HierarchyReport {
    pub fn e_age(&self, k: usize) -> Option<f64> {
        self.levels.iter().find(|l| l.k == k).map(|l| l.e_age)
    }

    pub fn relative(&self, partition: &Partition) -> Option<f64> {
        self.levels
            .iter()
            .flat_map(|l| l.relative.iter())
            .find(|(p, _)| p == partition)
            .map(|(_, e)| *e)
    }

    pub fn is_monotone(&self, tol: f64) -> bool {
        self.levels.windows(2).all(|w| w[0].e_age <= w[1].e_age + tol)
    }
}

/// Factor of a coarse block built from the factors of finer blocks inside it.
fn merge_factors(
    layout: &SubsystemLayout,
    coarse_block: &[usize],
    fine: &Partition,
    fine_factors: &[Vec<C64>],
) -> DVector<C64> {
    let sub = layout.restrict(coarse_block).expect("coarse block is a valid subset");
    let pos = |member: usize| coarse_block.iter().position(|&m| m == member).expect("member of block");
    let inner: Vec<(usize, &Vec<usize>)> = fine
        .blocks()
        .iter()
        .enumerate()
        .filter(|(_, b)| coarse_block.contains(&b[0]))
        .collect();
    DVector::from_iterator(
        sub.total_dim(),
        (0..sub.total_dim()).map(|j| {
            let digits = sub.digits(j);
            inner
                .iter()
                .map(|&(fb, members)| {
                    let idx = members
                        .iter()
                        .fold(0, |acc, &m| acc * layout.dims()[m] + digits[pos(m)]);
                    fine_factors[fb][idx]
                })
                .product::<C64>()
        }),
    )
}

/// Absolute geometric entanglement at every level `K = 2..=n`.
pub fn hierarchy(psi: &PureState, opts: &GeOptions) -> Result<HierarchyReport> {
    let layout = psi.layout();
    let n = layout.len();
    if n < 2 {
        return invalid("a hierarchy needs at least two subsystems");
    }
    let mut converged = true;
    let mut finer: Vec<GeResult> = Vec::new();
    let mut levels = Vec::with_capacity(n - 1);
    for k in (2..=n).rev() {
        let mut results = Vec::new();
        for p in enumerate_partitions(n, k)? {
            let warm: Vec<Vec<DVector<C64>>> = finer
                .iter()
                .filter(|r| r.partition.refines(&p))
                .map(|r| {
                    p.blocks()
                        .iter()
                        .map(|b| merge_factors(layout, b, &r.partition, &r.factors))
                        .collect()
                })
                .collect();
            let r = best_product_overlap_with(psi, &p, opts, &warm)?;
            converged &= r.converged;
            results.push(r);
        }
        let best = results
            .iter()
            .reduce(|a, b| if b.lambda_sq > a.lambda_sq { b } else { a })
            .expect("non-empty level");
        levels.push(HierarchyLevel {
            k,
            e_age: best.energy,
            best_partition: best.partition.clone(),
            relative: results.iter().map(|r| (r.partition.clone(), r.energy)).collect(),
        });
        finer = results;
    }
    levels.reverse();
    let differences = levels
        .windows(2)
        .map(|w| {
            let d = w[1].e_age - w[0].e_age;
            (w[1].k, if (-LADDER_TOL..0.0).contains(&d) { 0.0 } else { d })
        })
        .collect();
    Ok(HierarchyReport {
        levels,
        differences,
        converged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::ZERO;

    fn ghz4() -> PureState {
        let mut amps = vec![ZERO; 16];
        amps[0] = C64::new(1.0, 0.0);
        amps[15] = C64::new(1.0, 0.0);
        PureState::normalized(amps, SubsystemLayout::numbered_qubits(4).unwrap()).unwrap()
    }

    #[test]
    fn ghz4_is_purely_four_partite() {
        let h = hierarchy(&ghz4(), &GeOptions::default()).unwrap();
        for k in 2..=4 {
            assert!((h.e_age(k).unwrap() - 0.5).abs() < 1e-9, "K={k}: {:?}", h.e_age(k));
        }
        assert!(h.differences.iter().all(|(_, d)| d.abs() < 1e-9));
        assert!(h.is_monotone(LADDER_TOL));
    }

    #[test]
    fn product_state_hierarchy_is_zero() {
        let psi = PureState::basis(SubsystemLayout::numbered_qubits(4).unwrap(), &[0, 1, 0, 0]).unwrap();
        let h = hierarchy(&psi, &GeOptions::default()).unwrap();
        assert!(h.levels.iter().all(|l| l.e_age.abs() < 1e-12));
        assert_eq!(h.levels.len(), 3);
        assert_eq!(h.levels[0].relative.len(), 7);
        assert_eq!(h.levels[1].relative.len(), 6);
    }

    #[test]
    fn merged_factors_reproduce_the_product_state() {
        let l = SubsystemLayout::new(vec![2, 3, 2], vec!["a", "b", "c"]).unwrap();
        let fine = Partition::singletons(3).unwrap();
        let f = vec![
            vec![C64::new(0.6, 0.0), C64::new(0.0, 0.8)],
            vec![C64::new(0.0, 1.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0)],
            vec![C64::new(0.8, 0.0), C64::new(0.6, 0.0)],
        ];
        let coarse = vec![0usize, 2];
        let m = merge_factors(&l, &coarse, &fine, &f);
        // local index of (a, c) = 2a + c
        assert!((m[3] - f[0][1] * f[2][1]).norm() < 1e-15);
        assert!((m[1] - f[0][0] * f[2][1]).norm() < 1e-15);
    }

    #[test]
    fn absolute_rejects_bad_k() {
        assert!(absolute_ge(&ghz4(), 1, &GeOptions::default()).is_err());
        assert!(absolute_ge(&ghz4(), 5, &GeOptions::default()).is_err());
    }
}
