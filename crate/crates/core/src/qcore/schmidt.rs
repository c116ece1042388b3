use nalgebra::DVector;
use num_complex::Complex64 as C64;

use super::partition::{BlockIndexer, Partition};
use super::state::PureState;
use crate::error::{invalid, Result};

/// `|ψ⟩ = Σ_i s_i |u_i⟩|v_i⟩` across a two-block partition.
#[derive(Debug, Clone)]
pub struct SchmidtDecomposition {
    /// Descending, non-negative.
    pub coefficients: Vec<f64>,
    /// Left vectors live on block 0, right vectors on block 1.
    pub left: Vec<DVector<C64>>,
    pub right: Vec<DVector<C64>>,
    pub partition: Partition,
}

impl SchmidtDecomposition {
    /// Rebuilds the amplitude vector in the original layout order.
    pub fn reconstruct(&self, psi_layout: &super::SubsystemLayout) -> Vec<C64> {
        let ix = BlockIndexer::new(psi_layout, self.partition.blocks());
        (0..psi_layout.total_dim())
            .map(|x| {
                let (i, j) = (ix.local(x, 0), ix.local(x, 1));
                self.coefficients
                    .iter()
                    .zip(self.left.iter().zip(&self.right))
                    .map(|(&s, (u, v))| u[i] * v[j] * s)
                    .sum()
            })
            .collect()
    }

    /// Largest coefficient squared: the best product-state overlap across
    /// this cut.
    pub fn max_overlap_sq(&self) -> f64 {
        self.coefficients.first().map_or(0.0, |s| s * s)
    }
}

pub fn schmidt(psi: &PureState, bipartition: &Partition) -> Result<SchmidtDecomposition> {
    if bipartition.k() != 2 {
        return invalid(format!("Schmidt decomposition needs 2 blocks, got {}", bipartition.k()));
    }
    bipartition.check_layout(psi.layout())?;
    let b = bipartition.blocks();
    let m = psi.bipartite_matrix(&b[0], &b[1]);
    let svd = m.svd(true, true);
    let u = svd.u.expect("requested U");
    let v_t = svd.v_t.expect("requested V^T");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&i, &j| svd.singular_values[j].total_cmp(&svd.singular_values[i]));
    let coefficients = order.iter().map(|&i| svd.singular_values[i].max(0.0)).collect();
    let left = order.iter().map(|&i| u.column(i).into_owned()).collect();
    // m = U S V^H, so the right vectors are the rows of V^H (not conjugated).
    let right = order.iter().map(|&i| v_t.row(i).transpose()).collect();
    Ok(SchmidtDecomposition {
        coefficients,
        left,
        right,
        partition: bipartition.clone(),
    })
}
