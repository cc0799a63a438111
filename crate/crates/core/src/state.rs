//! Multipartite density operators and the subsystem operations on them.

use std::collections::BTreeMap;
use std::fmt;

use itertools::Itertools;
use num_complex::Complex64;

use crate::error::{Result, UdaError};
use crate::linalg::{self, CMatrix};
use crate::tol::ToleranceConfig;

/// Largest accepted total Hilbert-space side.
pub const MAX_TOTAL_DIM: usize = 4096;

/// A sorted, duplicate-free set of subsystem indices naming a marginal.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SubsystemSet {
    indices: Vec<usize>,
}

impl SubsystemSet {
    pub fn new(indices: Vec<usize>, n_systems: usize) -> Result<Self> {
        if indices.is_empty() {
            return Err(UdaError::InvalidSubsystemSet("empty set".into()));
        }
        for w in indices.windows(2) {
            if w[0] >= w[1] {
                return Err(UdaError::InvalidSubsystemSet(format!(
                    "indices not strictly increasing: {:?}",
                    indices
                )));
            }
        }
        if *indices.last().unwrap() >= n_systems {
            return Err(UdaError::InvalidSubsystemSet(format!(
                "index {} out of range for {} systems",
                indices.last().unwrap(),
                n_systems
            )));
        }
        Ok(Self { indices })
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.indices.binary_search(&i).is_ok()
    }

    pub fn complement(&self, n_systems: usize) -> Vec<usize> {
        (0..n_systems).filter(|i| !self.contains(*i)).collect()
    }
}

impl fmt::Display for SubsystemSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.indices.iter().join("-"))
    }
}

/// A density operator on a tensor product of finite-dimensional systems.
///
/// Construction symmetrizes and renormalizes the input (recording both
/// adjustments) and rejects matrices that are not Hermitian or not positive
/// semidefinite within tolerance. Values are immutable afterwards and safe to
/// share across threads.
#[derive(Debug, Clone)]
pub struct MultipartiteState {
    dims: Vec<usize>,
    matrix: CMatrix,
    pub label: Option<String>,
    /// Hermitian defect removed at construction.
    pub symmetrized_by: f64,
    /// Trace defect removed at construction.
    pub renormalized_by: f64,
}

impl MultipartiteState {
    pub fn new(dims: Vec<usize>, matrix: CMatrix, tol: &ToleranceConfig) -> Result<Self> {
        if dims.is_empty() || dims.iter().any(|&d| d == 0) {
            return Err(UdaError::InvalidSubsystemSet(
                "dims must be a nonempty list of positive integers".into(),
            ));
        }
        let d = linalg::total_dim(&dims);
        if d > MAX_TOTAL_DIM {
            return Err(UdaError::DimensionOverflow {
                dim: d,
                max: MAX_TOTAL_DIM,
            });
        }
        if matrix.nrows() != d || matrix.ncols() != d {
            return Err(UdaError::SideMismatch {
                side: matrix.nrows(),
                expected: d,
            });
        }
        let defect = linalg::herm_defect(&matrix);
        if defect > tol.herm_tol {
            return Err(UdaError::NotHermitian { defect });
        }
        let sym = linalg::hermitize(&matrix);
        let trace = sym.trace().re;
        if !(trace.is_finite() && trace > 1e-12) {
            return Err(UdaError::BadTrace { trace });
        }
        let normalized = sym.map(|z| z / trace);
        let min_eig = linalg::min_eigenvalue(&normalized)?;
        if min_eig < -tol.psd_tol {
            return Err(UdaError::NotPositive { min_eig });
        }
        Ok(Self {
            dims,
            matrix: normalized,
            label: None,
            symmetrized_by: defect,
            renormalized_by: (trace - 1.0).abs(),
        })
    }

    /// Construction path for matrices already known to satisfy the
    /// invariants exactly (outputs of trace-preserving internal operations).
    pub(crate) fn from_trusted(dims: Vec<usize>, matrix: CMatrix) -> Self {
        Self {
            dims,
            matrix,
            label: None,
            symmetrized_by: 0.0,
            renormalized_by: 0.0,
        }
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn n_systems(&self) -> usize {
        self.dims.len()
    }

    pub fn total_dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        Ok(linalg::eig_hermitian(&self.matrix)?.0)
    }

    pub fn rank(&self, tol: &ToleranceConfig) -> Result<usize> {
        linalg::numerical_rank(&self.matrix, tol)
    }

    pub fn is_pure(&self, tol: &ToleranceConfig) -> Result<bool> {
        Ok(self.rank(tol)? == 1)
    }

    pub fn subsystems(&self, indices: &[usize]) -> Result<SubsystemSet> {
        SubsystemSet::new(indices.to_vec(), self.n_systems())
    }
}

/// Map from each size-k subsystem set to the reduced state on it.
#[derive(Debug, Clone)]
pub struct MarginalCollection {
    pub k: usize,
    pub entries: BTreeMap<SubsystemSet, MultipartiteState>,
}

/// Kronecker product of two states: dims concatenate, traces multiply.
pub fn tensor(a: &MultipartiteState, b: &MultipartiteState) -> Result<MultipartiteState> {
    let d = a.total_dim() * b.total_dim();
    if d > MAX_TOTAL_DIM {
        return Err(UdaError::DimensionOverflow {
            dim: d,
            max: MAX_TOTAL_DIM,
        });
    }
    let mut dims = a.dims.clone();
    dims.extend_from_slice(&b.dims);
    Ok(MultipartiteState::from_trusted(
        dims,
        linalg::kron(&a.matrix, &b.matrix),
    ))
}

/// Reduced density matrix on `keep`, preserving the original relative order
/// of the kept subsystems.
pub fn partial_trace(s: &MultipartiteState, keep: &SubsystemSet) -> Result<MultipartiteState> {
    let n = s.n_systems();
    if keep.indices().last().copied().unwrap_or(0) >= n {
        return Err(UdaError::InvalidSubsystemSet(format!(
            "keep set {} invalid for {} systems",
            keep, n
        )));
    }
    let dims = s.dims();
    let keep_dims: Vec<usize> = keep.indices().iter().map(|&i| dims[i]).collect();
    let rest: Vec<usize> = keep.complement(n);
    let rest_dims: Vec<usize> = rest.iter().map(|&i| dims[i]).collect();
    let dk = linalg::total_dim(&keep_dims);
    let dr = linalg::total_dim(&rest_dims);
    let d = s.total_dim();

    // for each flat index, its (keep, rest) split
    let mut keep_part = vec![0usize; d];
    let mut rest_part = vec![0usize; d];
    for flat in 0..d {
        let idx = linalg::multi_index(dims, flat);
        let kidx: Vec<usize> = keep.indices().iter().map(|&i| idx[i]).collect();
        let ridx: Vec<usize> = rest.iter().map(|&i| idx[i]).collect();
        keep_part[flat] = linalg::flat_index(&keep_dims, &kidx);
        rest_part[flat] = linalg::flat_index(&rest_dims, &ridx);
    }
    // group flat indices by rest value
    let mut groups: Vec<Vec<usize>> = vec![Vec::with_capacity(dk); dr];
    for flat in 0..d {
        groups[rest_part[flat]].push(flat);
    }
    let mut out = CMatrix::zeros(dk, dk);
    for group in &groups {
        for &r in group {
            for &c in group {
                out[(keep_part[r], keep_part[c])] += s.matrix[(r, c)];
            }
        }
    }
    Ok(MultipartiteState::from_trusted(keep_dims, out))
}

/// All C(n, k) reduced states of order k.
pub fn k_marginals(s: &MultipartiteState, k: usize) -> Result<MarginalCollection> {
    let n = s.n_systems();
    if k == 0 || k > n {
        return Err(UdaError::KOutOfRange { k, n });
    }
    let mut entries = BTreeMap::new();
    for combo in (0..n).combinations(k) {
        let set = SubsystemSet::new(combo, n)?;
        let m = partial_trace(s, &set)?;
        entries.insert(set, m);
    }
    Ok(MarginalCollection { k, entries })
}

/// Permute tensor factors: system `i` of the input moves to slot `perm[i]`.
pub fn swap_subsystems(s: &MultipartiteState, perm: &[usize]) -> Result<MultipartiteState> {
    let n = s.n_systems();
    let mut seen = vec![false; n];
    if perm.len() != n || perm.iter().any(|&p| p >= n || std::mem::replace(&mut seen[p], true)) {
        return Err(UdaError::InvalidPermutation(n));
    }
    let mut new_dims = vec![0usize; n];
    for (i, &p) in perm.iter().enumerate() {
        new_dims[p] = s.dims[i];
    }
    Ok(MultipartiteState::from_trusted(
        new_dims,
        linalg::permute_systems_matrix(&s.matrix, &s.dims, perm),
    ))
}

/// Conjugate by a unitary acting on one site.
pub fn apply_local_unitary(
    s: &MultipartiteState,
    site: usize,
    u: &CMatrix,
    tol: &ToleranceConfig,
) -> Result<MultipartiteState> {
    if site >= s.n_systems() || u.nrows() != s.dims[site] || u.ncols() != s.dims[site] {
        return Err(UdaError::InvalidSubsystemSet(format!(
            "site {} with operator side {}",
            site,
            u.nrows()
        )));
    }
    let defect = linalg::unitary_defect(u);
    if defect > tol.eq_tol {
        return Err(UdaError::NotUnitary { defect });
    }
    let full = linalg::embed_op(&s.dims, &[site], u);
    Ok(MultipartiteState::from_trusted(
        s.dims.clone(),
        &full * &s.matrix * full.adjoint(),
    ))
}

/// Conjugate by a unitary acting jointly on a set of sites (ascending).
pub fn apply_unitary_on(
    s: &MultipartiteState,
    sites: &[usize],
    u: &CMatrix,
    tol: &ToleranceConfig,
) -> Result<MultipartiteState> {
    let sub_dim: usize = sites.iter().map(|&i| s.dims[i]).product();
    if u.nrows() != sub_dim || u.ncols() != sub_dim {
        return Err(UdaError::SideMismatch {
            side: u.nrows(),
            expected: sub_dim,
        });
    }
    let defect = linalg::unitary_defect(u);
    if defect > tol.eq_tol {
        return Err(UdaError::NotUnitary { defect });
    }
    let full = linalg::embed_op(&s.dims, sites, u);
    Ok(MultipartiteState::from_trusted(
        s.dims.clone(),
        &full * &s.matrix * full.adjoint(),
    ))
}

/// Apply a Kraus-decomposed channel on one site.
pub fn apply_local_channel(
    s: &MultipartiteState,
    site: usize,
    kraus: &[CMatrix],
    tol: &ToleranceConfig,
) -> Result<MultipartiteState> {
    if site >= s.n_systems() {
        return Err(UdaError::InvalidSubsystemSet(format!("site {}", site)));
    }
    let d = s.dims[site];
    let mut sum = CMatrix::zeros(d, d);
    for k in kraus {
        if k.nrows() != d || k.ncols() != d {
            return Err(UdaError::SideMismatch {
                side: k.nrows(),
                expected: d,
            });
        }
        sum += k.adjoint() * k;
    }
    let defect = linalg::max_abs_entry(&(sum - CMatrix::identity(d, d)));
    if defect > tol.eq_tol {
        return Err(UdaError::NotTracePreserving { defect });
    }
    let mut out = CMatrix::zeros(s.total_dim(), s.total_dim());
    for k in kraus {
        let full = linalg::embed_op(&s.dims, &[site], k);
        out += &full * &s.matrix * full.adjoint();
    }
    Ok(MultipartiteState::from_trusted(s.dims.clone(), out))
}

/// Half the trace norm of the difference; zero iff the states are equal.
pub fn trace_distance(a: &MultipartiteState, b: &MultipartiteState) -> Result<f64> {
    if a.dims != b.dims {
        return Err(UdaError::DimMismatch);
    }
    linalg::trace_distance_m(&a.matrix, &b.matrix)
}

/// Entrywise equality within `eq_tol`.
pub fn states_equal(a: &MultipartiteState, b: &MultipartiteState, tol: &ToleranceConfig) -> bool {
    a.dims == b.dims && linalg::max_abs_entry(&(&a.matrix - &b.matrix)) <= tol.eq_tol
}

/// Entrywise complex conjugate (transpose, for Hermitian inputs).
pub fn conjugate_state(s: &MultipartiteState) -> MultipartiteState {
    MultipartiteState::from_trusted(s.dims.clone(), s.matrix.map(|z| z.conj()))
}

/// Max imaginary part over all entries.
pub fn max_imag_entry(m: &CMatrix) -> f64 {
    m.iter().fold(0.0f64, |acc, z| acc.max(z.im.abs()))
}

// ---------------------------------------------------------------------------
// small constructors used across the crate and its tests
// ---------------------------------------------------------------------------

/// |i><i| on a d-dimensional site.
pub fn basis_projector(d: usize, i: usize) -> MultipartiteState {
    let mut m = CMatrix::zeros(d, d);
    m[(i, i)] = Complex64::ONE;
    MultipartiteState::from_trusted(vec![d], m)
}

/// Projector onto a pure (not necessarily product) vector, dims given.
pub fn pure_state(dims: Vec<usize>, v: &linalg::CVector) -> MultipartiteState {
    let norm = v.norm();
    let v = v.map(|z| z / norm);
    MultipartiteState::from_trusted(dims, &v * v.adjoint())
}

/// Diagonal state from nonnegative entries (renormalized).
pub fn diagonal_state(dims: Vec<usize>, entries: &[f64]) -> MultipartiteState {
    let total: f64 = entries.iter().sum();
    let m = CMatrix::from_diagonal(&linalg::CVector::from_iterator(
        entries.len(),
        entries.iter().map(|&e| Complex64::new(e / total, 0.0)),
    ));
    MultipartiteState::from_trusted(dims, m)
}

/// Maximally mixed state on the given dims.
pub fn maximally_mixed(dims: Vec<usize>) -> MultipartiteState {
    let d = linalg::total_dim(&dims);
    let m = CMatrix::identity(d, d).map(|z| z / d as f64);
    MultipartiteState::from_trusted(dims, m)
}
