use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;

use super::layout::SubsystemLayout;
use super::partition::BlockIndexer;
use crate::error::{invalid, Error, Result};
use crate::linalg::{hermitian_eigenvalues, ZERO};

pub const NORM_TOL: f64 = 1e-12;
pub const HERMITIAN_TOL: f64 = 1e-10;
pub const TRACE_TOL: f64 = 1e-10;
pub const PSD_TOL: f64 = 1e-10;

/// Normalized state vector over a [`SubsystemLayout`].
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    amps: DVector<C64>,
    layout: SubsystemLayout,
}

impl PureState {
    /// Wraps an amplitude vector whose norm must already be 1 within 1e-12.
    pub fn new(amps: Vec<C64>, layout: SubsystemLayout) -> Result<Self> {
        if amps.len() != layout.total_dim() {
            return invalid(format!(
                "{} amplitudes for total dimension {}",
                amps.len(),
                layout.total_dim()
            ));
        }
        let amps = DVector::from_vec(amps);
        let norm = amps.norm();
        if !norm.is_finite() || (norm - 1.0).abs() > NORM_TOL {
            return invalid(format!("state norm {norm} differs from 1"));
        }
        Ok(Self { amps, layout })
    }

    /// Normalizes `amps` first; rejects the zero vector.
    pub fn normalized(amps: Vec<C64>, layout: SubsystemLayout) -> Result<Self> {
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if !(norm > 0.0 && norm.is_finite()) {
            return invalid("cannot normalize a zero or non-finite vector");
        }
        Self::new(amps.into_iter().map(|a| a / norm).collect(), layout)
    }

    /// Computational basis state with the given local digits.
    pub fn basis(layout: SubsystemLayout, digits: &[usize]) -> Result<Self> {
        if digits.len() != layout.len() || digits.iter().zip(layout.dims()).any(|(d, n)| d >= n) {
            return invalid(format!("digits {digits:?} do not fit layout {layout}"));
        }
        let mut amps = vec![ZERO; layout.total_dim()];
        amps[layout.flat_index(digits)] = C64::new(1.0, 0.0);
        Self::new(amps, layout)
    }

    pub(crate) fn from_parts_unchecked(amps: DVector<C64>, layout: SubsystemLayout) -> Self {
        debug_assert_eq!(amps.len(), layout.total_dim());
        Self { amps, layout }
    }

    pub fn amplitudes(&self) -> &[C64] {
        self.amps.as_slice()
    }

    pub fn layout(&self) -> &SubsystemLayout {
        &self.layout
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn norm(&self) -> f64 {
        self.amps.norm()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &PureState) -> Result<C64> {
        if self.dim() != other.dim() {
            return invalid("inner product of states with different dimensions");
        }
        Ok(self.amps.dotc(&other.amps))
    }

    /// Kronecker product; the resulting layout is `self` followed by `other`.
    pub fn tensor(&self, other: &PureState) -> Result<PureState> {
        let layout = self.layout.concat(&other.layout)?;
        Ok(Self::from_parts_unchecked(self.amps.kronecker(&other.amps), layout))
    }

    /// Reduced density matrix on `keep`, tracing out every other subsystem.
    pub fn reduced_state(&self, keep: &[usize]) -> Result<DensityMatrix> {
        let kept_layout = self.layout.restrict(keep)?;
        let mut keep: Vec<usize> = keep.to_vec();
        keep.sort_unstable();
        keep.dedup();
        let rest: Vec<usize> = (0..self.layout.len()).filter(|i| !keep.contains(i)).collect();
        let m = self.bipartite_matrix(&keep, &rest);
        let rho = &m * m.adjoint();
        Ok(DensityMatrix::from_parts_unchecked(rho, kept_layout))
    }

    /// Amplitudes reshaped into a `dim(left) × dim(right)` matrix.
    pub(crate) fn bipartite_matrix(&self, left: &[usize], right: &[usize]) -> DMatrix<C64> {
        let blocks: Vec<Vec<usize>> = if right.is_empty() {
            vec![left.to_vec()]
        } else {
            vec![left.to_vec(), right.to_vec()]
        };
        let ix = BlockIndexer::new(&self.layout, &blocks);
        let rows = ix.block_dims[0];
        let cols = if right.is_empty() { 1 } else { ix.block_dims[1] };
        let mut m = DMatrix::<C64>::zeros(rows, cols);
        for (x, a) in self.amps.iter().enumerate() {
            let c = if right.is_empty() { 0 } else { ix.local(x, 1) };
            m[(ix.local(x, 0), c)] = *a;
        }
        m
    }

    /// Applies `op` to the subsystems in `sites` (taken in ascending order,
    /// first most significant). The result must stay normalized.
    pub fn apply_on(&self, sites: &[usize], op: &DMatrix<C64>) -> Result<PureState> {
        let mut sites = sites.to_vec();
        sites.sort_unstable();
        sites.dedup();
        if sites.iter().any(|&s| s >= self.layout.len()) || sites.is_empty() {
            return invalid(format!("bad site list {sites:?}"));
        }
        let d: usize = sites.iter().map(|&s| self.layout.dims()[s]).product();
        if op.nrows() != d || op.ncols() != d {
            return invalid(format!("operator is {}x{}, sites need {d}", op.nrows(), op.ncols()));
        }
        let rest: Vec<usize> = (0..self.layout.len()).filter(|i| !sites.contains(i)).collect();
        let m = self.bipartite_matrix(&sites, &rest);
        let out = op * m;
        let blocks: Vec<Vec<usize>> = if rest.is_empty() {
            vec![sites]
        } else {
            vec![sites, rest]
        };
        let ix = BlockIndexer::new(&self.layout, &blocks);
        let mut amps = DVector::<C64>::zeros(self.dim());
        for x in 0..self.dim() {
            let c = if ix.k() == 1 { 0 } else { ix.local(x, 1) };
            amps[x] = out[(ix.local(x, 0), c)];
        }
        let norm = amps.norm();
        if (norm - 1.0).abs() > 1e-9 {
            return Err(Error::Numeric(format!("operator changed the norm to {norm}")));
        }
        Ok(Self::from_parts_unchecked(amps, self.layout.clone()))
    }

    /// Projector `|ψ⟩⟨ψ|`.
    pub fn density(&self) -> DensityMatrix {
        DensityMatrix::from_parts_unchecked(&self.amps * self.amps.adjoint(), self.layout.clone())
    }
}

/// Kronecker product of two pure states (`a` subsystems first).
pub fn tensor_product(a: &PureState, b: &PureState) -> Result<PureState> {
    a.tensor(b)
}

/// Partial trace of a pure state onto `keep`.
pub fn reduced_state(psi: &PureState, keep: &[usize]) -> Result<DensityMatrix> {
    psi.reduced_state(keep)
}

/// Hermitian, unit-trace, positive semidefinite matrix over a layout.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: DMatrix<C64>,
    layout: SubsystemLayout,
}

impl DensityMatrix {
    pub fn new(matrix: DMatrix<C64>, layout: SubsystemLayout) -> Result<Self> {
        let d = layout.total_dim();
        if matrix.nrows() != d || matrix.ncols() != d {
            return invalid(format!(
                "matrix is {}x{}, layout needs {d}x{d}",
                matrix.nrows(),
                matrix.ncols()
            ));
        }
        let herm = (0..d)
            .flat_map(|i| (0..d).map(move |j| (i, j)))
            .map(|(i, j)| (matrix[(i, j)] - matrix[(j, i)].conj()).norm())
            .fold(0.0, f64::max);
        if herm > HERMITIAN_TOL {
            return invalid(format!("matrix is not Hermitian (max deviation {herm:e})"));
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
            return invalid(format!("trace {tr} differs from 1"));
        }
        let rho = Self { matrix, layout };
        let min = rho.eigenvalues().last().copied().unwrap_or(0.0);
        if min < -PSD_TOL {
            return invalid(format!("matrix has negative eigenvalue {min:e}"));
        }
        Ok(rho)
    }

    pub(crate) fn from_parts_unchecked(matrix: DMatrix<C64>, layout: SubsystemLayout) -> Self {
        Self { matrix, layout }
    }

    /// `I / d`.
    pub fn maximally_mixed(layout: SubsystemLayout) -> Self {
        let d = layout.total_dim();
        let m = DMatrix::<C64>::identity(d, d) * C64::new(1.0 / d as f64, 0.0);
        Self::from_parts_unchecked(m, layout)
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    pub fn layout(&self) -> &SubsystemLayout {
        &self.layout
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn trace(&self) -> C64 {
        self.matrix.trace()
    }

    /// Eigenvalues, descending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigenvalues(&self.matrix)
    }

    pub fn purity(&self) -> f64 {
        (&self.matrix * &self.matrix).trace().re
    }

    /// Convex combination `p·self + (1−p)·other`.
    pub fn mix(&self, other: &DensityMatrix, p: f64) -> Result<DensityMatrix> {
        if self.layout != other.layout {
            return invalid("mixing density matrices over different layouts");
        }
        if !(0.0..=1.0).contains(&p) {
            return invalid(format!("mixing weight {p} outside [0, 1]"));
        }
        let m = &self.matrix * C64::new(p, 0.0) + &other.matrix * C64::new(1.0 - p, 0.0);
        Ok(Self::from_parts_unchecked(m, self.layout.clone()))
    }

    /// `U ρ U†`.
    pub fn conjugate_by(&self, u: &DMatrix<C64>) -> Result<DensityMatrix> {
        if u.nrows() != self.dim() || u.ncols() != self.dim() {
            return invalid("unitary has the wrong size");
        }
        Ok(Self::from_parts_unchecked(
            u * &self.matrix * u.adjoint(),
            self.layout.clone(),
        ))
    }

    /// `self ⊗ other`.
    pub fn tensor(&self, other: &DensityMatrix) -> Result<DensityMatrix> {
        let layout = self.layout.concat(&other.layout)?;
        Ok(Self::from_parts_unchecked(self.matrix.kronecker(&other.matrix), layout))
    }

    /// Partial trace keeping `keep`.
    pub fn partial_trace(&self, keep: &[usize]) -> Result<DensityMatrix> {
        let kept_layout = self.layout.restrict(keep)?;
        let mut keep = keep.to_vec();
        keep.sort_unstable();
        keep.dedup();
        let rest: Vec<usize> = (0..self.layout.len()).filter(|i| !keep.contains(i)).collect();
        if rest.is_empty() {
            return Ok(Self::from_parts_unchecked(self.matrix.clone(), kept_layout));
        }
        let ix = BlockIndexer::new(&self.layout, &[keep, rest]);
        let dk = ix.block_dims[0];
        let d = self.dim();
        let mut out = DMatrix::<C64>::zeros(dk, dk);
        for x in 0..d {
            let (kx, rx) = (ix.local(x, 0), ix.local(x, 1));
            for y in 0..d {
                if ix.local(y, 1) == rx {
                    out[(kx, ix.local(y, 0))] += self.matrix[(x, y)];
                }
            }
        }
        Ok(Self::from_parts_unchecked(out, kept_layout))
    }
}
