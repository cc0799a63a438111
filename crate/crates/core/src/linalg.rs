//! Dense complex matrix helpers: Hermitian eigendecompositions, ranks,
//! range/kernel bases, PSD tests and multi-index bookkeeping.
//!
//! Everything here works on raw `DMatrix<Complex64>` values; the state-level
//! wrappers live in [`crate::state`].

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Result, UdaError};
use crate::tol::ToleranceConfig;

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn cr(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Max-abs entry of `m - m^dag`.
pub fn herm_defect(m: &CMatrix) -> f64 {
    let mut d = 0.0f64;
    for i in 0..m.nrows() {
        for j in i..m.ncols() {
            d = d.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    d
}

/// `(m + m^dag) / 2`.
pub fn hermitize(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()).map(|z| z / 2.0)
}

/// Hilbert-Schmidt inner product `tr(a^dag b)`.
pub fn hs_inner(a: &CMatrix, b: &CMatrix) -> Complex64 {
    let mut s = Complex64::ZERO;
    for j in 0..a.ncols() {
        for i in 0..a.nrows() {
            s += a[(i, j)].conj() * b[(i, j)];
        }
    }
    s
}

pub fn hs_norm(m: &CMatrix) -> f64 {
    hs_inner(m, m).re.max(0.0).sqrt()
}

pub fn max_abs_entry(m: &CMatrix) -> f64 {
    m.iter().fold(0.0f64, |acc, z| acc.max(z.norm()))
}

pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

/// Eigendecomposition of a Hermitian matrix.
///
/// Eigenvalues come back ascending with a stable tie order; each eigenvector
/// column is phase-fixed so its largest-modulus entry is real positive, which
/// makes the output deterministic outside of degenerate subspaces.
pub fn eig_hermitian(m: &CMatrix) -> Result<(Vec<f64>, CMatrix)> {
    let defect = herm_defect(m);
    if defect > 1e-8 {
        return Err(UdaError::NotHermitian { defect });
    }
    let sym = hermitize(m).symmetric_eigen();
    let n = m.nrows();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        sym.eigenvalues[a]
            .partial_cmp(&sym.eigenvalues[b])
            .unwrap()
            .then(a.cmp(&b))
    });
    let mut vals = Vec::with_capacity(n);
    let mut vecs = CMatrix::zeros(n, n);
    for (pos, &idx) in order.iter().enumerate() {
        vals.push(sym.eigenvalues[idx]);
        let col = sym.eigenvectors.column(idx);
        // phase fix on the largest-modulus entry
        let mut best = 0usize;
        let mut best_norm = 0.0f64;
        for (i, z) in col.iter().enumerate() {
            if z.norm() > best_norm + 1e-15 {
                best_norm = z.norm();
                best = i;
            }
        }
        let phase = if best_norm > 0.0 {
            col[best].conj() / best_norm
        } else {
            Complex64::ONE
        };
        for i in 0..n {
            vecs[(i, pos)] = col[i] * phase;
        }
    }
    Ok((vals, vecs))
}

pub fn min_eigenvalue(m: &CMatrix) -> Result<f64> {
    let (vals, _) = eig_hermitian(m)?;
    Ok(vals.first().copied().unwrap_or(0.0))
}

pub fn is_psd(m: &CMatrix, tol: &ToleranceConfig) -> Result<bool> {
    Ok(min_eigenvalue(m)? >= -tol.psd_tol)
}

fn rank_cutoff(vals: &[f64], tol: &ToleranceConfig) -> f64 {
    let amax = vals.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    tol.rank_tol * amax.max(1.0)
}

/// Count of eigenvalues above the relative cutoff `rank_tol * max(|eig|, 1)`.
pub fn numerical_rank(m: &CMatrix, tol: &ToleranceConfig) -> Result<usize> {
    let (vals, _) = eig_hermitian(m)?;
    let cut = rank_cutoff(&vals, tol);
    Ok(vals.iter().filter(|v| **v > cut).count())
}

/// Orthonormal eigenvectors spanning the range (eigenvalues above the rank
/// cutoff).
pub fn range_basis(m: &CMatrix, tol: &ToleranceConfig) -> Result<Vec<CVector>> {
    let (vals, vecs) = eig_hermitian(m)?;
    let cut = rank_cutoff(&vals, tol);
    Ok(vals
        .iter()
        .enumerate()
        .filter(|(_, v)| **v > cut)
        .map(|(i, _)| vecs.column(i).into_owned())
        .collect())
}

/// Orthonormal eigenvectors spanning the kernel (eigenvalues at or below the
/// rank cutoff).
pub fn kernel_basis(m: &CMatrix, tol: &ToleranceConfig) -> Result<Vec<CVector>> {
    let (vals, vecs) = eig_hermitian(m)?;
    let cut = rank_cutoff(&vals, tol);
    Ok(vals
        .iter()
        .enumerate()
        .filter(|(_, v)| **v <= cut)
        .map(|(i, _)| vecs.column(i).into_owned())
        .collect())
}

/// Half the trace norm of `a - b`.
pub fn trace_distance_m(a: &CMatrix, b: &CMatrix) -> Result<f64> {
    if a.shape() != b.shape() {
        return Err(UdaError::DimMismatch);
    }
    let (vals, _) = eig_hermitian(&(a - b))?;
    Ok(0.5 * vals.iter().map(|v| v.abs()).sum::<f64>())
}

/// Unitarity defect `max |U^dag U - I|`.
pub fn unitary_defect(u: &CMatrix) -> f64 {
    let n = u.nrows();
    let m = u.adjoint() * u;
    let mut d = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            let target = if i == j { Complex64::ONE } else { Complex64::ZERO };
            d = d.max((m[(i, j)] - target).norm());
        }
    }
    d
}

/// Projector `sum_i v_i v_i^dag` onto the span of the given vectors.
pub fn projector(vectors: &[CVector]) -> CMatrix {
    let n = vectors.first().map(|v| v.len()).unwrap_or(0);
    let mut p = CMatrix::zeros(n, n);
    for v in vectors {
        p += v * v.adjoint();
    }
    p
}

// ---------------------------------------------------------------------------
// multi-index bookkeeping
// ---------------------------------------------------------------------------

pub fn total_dim(dims: &[usize]) -> usize {
    dims.iter().product()
}

/// Decompose a flat index into per-site digits (row-major: site 0 varies
/// slowest).
pub fn multi_index(dims: &[usize], mut flat: usize) -> Vec<usize> {
    let mut out = vec![0; dims.len()];
    for site in (0..dims.len()).rev() {
        out[site] = flat % dims[site];
        flat /= dims[site];
    }
    out
}

pub fn flat_index(dims: &[usize], multi: &[usize]) -> usize {
    let mut flat = 0;
    for (d, m) in dims.iter().zip(multi) {
        flat = flat * d + m;
    }
    flat
}

/// Conjugate `m` by the permutation of tensor factors sending input system
/// `i` to output slot `perm[i]`.
pub fn permute_systems_matrix(m: &CMatrix, dims: &[usize], perm: &[usize]) -> CMatrix {
    let n = dims.len();
    let d = total_dim(dims);
    let mut new_dims = vec![0usize; n];
    for (i, &p) in perm.iter().enumerate() {
        new_dims[p] = dims[i];
    }
    // flat relabeling |i_0 .. i_{n-1}> -> |j_0 .. j_{n-1}>, j_{perm[k]} = i_k
    let mut relabel = vec![0usize; d];
    for (flat, item) in relabel.iter_mut().enumerate() {
        let idx = multi_index(dims, flat);
        let mut jdx = vec![0usize; n];
        for k in 0..n {
            jdx[perm[k]] = idx[k];
        }
        *item = flat_index(&new_dims, &jdx);
    }
    let mut out = CMatrix::zeros(d, d);
    for r in 0..d {
        for cidx in 0..d {
            out[(relabel[r], relabel[cidx])] = m[(r, cidx)];
        }
    }
    out
}

/// Embed an operator acting on `sites` (ascending) into the full space,
/// acting as the identity elsewhere.
pub fn embed_op(dims: &[usize], sites: &[usize], op: &CMatrix) -> CMatrix {
    let n = dims.len();
    let rest: Vec<usize> = (0..n).filter(|i| !sites.contains(i)).collect();
    let rest_dim: usize = rest.iter().map(|&i| dims[i]).product();
    let eye = CMatrix::identity(rest_dim.max(1), rest_dim.max(1));
    let front = kron(op, &eye);
    // front acts on (sites..., rest...) ordering; permute back to 0..n
    let mut perm = vec![0usize; n];
    for (slot, &s) in sites.iter().chain(rest.iter()).enumerate() {
        perm[slot] = s;
    }
    let mut front_dims: Vec<usize> = sites.iter().map(|&i| dims[i]).collect();
    front_dims.extend(rest.iter().map(|&i| dims[i]));
    permute_systems_matrix(&front, &front_dims, &perm)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn pauli_z() -> CMatrix {
        CMatrix::from_row_slice(2, 2, &[cr(1.0), cr(0.0), cr(0.0), cr(-1.0)])
    }

    fn pauli_y() -> CMatrix {
        CMatrix::from_row_slice(2, 2, &[cr(0.0), c(0.0, -1.0), c(0.0, 1.0), cr(0.0)])
    }

    #[test]
    fn eig_of_pauli_z_is_minus_one_one() {
        let (vals, vecs) = eig_hermitian(&pauli_z()).unwrap();
        assert_abs_diff_eq!(vals[0], -1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(vals[1], 1.0, epsilon = 1e-12);
        // reconstruction
        let d = CMatrix::from_diagonal(&CVector::from_iterator(2, vals.iter().map(|v| cr(*v))));
        let rec = &vecs * d * vecs.adjoint();
        assert!(max_abs_entry(&(rec - pauli_z())) < 1e-12);
    }

    #[test]
    fn eig_handles_complex_entries() {
        let (vals, vecs) = eig_hermitian(&pauli_y()).unwrap();
        assert_abs_diff_eq!(vals[0], -1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(vals[1], 1.0, epsilon = 1e-12);
        let d = CMatrix::from_diagonal(&CVector::from_iterator(2, vals.iter().map(|v| cr(*v))));
        let rec = &vecs * d * vecs.adjoint();
        assert!(max_abs_entry(&(rec - pauli_y())) < 1e-12);
    }

    #[test]
    fn eig_rejects_non_hermitian() {
        let m = CMatrix::from_row_slice(2, 2, &[cr(0.0), cr(1.0), cr(0.0), cr(0.0)]);
        assert!(eig_hermitian(&m).is_err());
    }

    #[test]
    fn psd_tolerance_absorbs_tiny_negatives() {
        let tol = ToleranceConfig::default();
        let m = CMatrix::from_diagonal(&CVector::from_vec(vec![cr(1.0), cr(0.0), cr(-1e-15)]));
        assert!(is_psd(&m, &tol).unwrap());
        let m2 = CMatrix::from_diagonal(&CVector::from_vec(vec![cr(1.0), cr(-0.1)]));
        assert!(!is_psd(&m2, &tol).unwrap());
    }

    #[test]
    fn rank_of_identity_quarter() {
        let tol = ToleranceConfig::default();
        let m = CMatrix::identity(4, 4).map(|z| z * 0.25);
        assert_eq!(numerical_rank(&m, &tol).unwrap(), 4);
    }

    #[test]
    fn kernel_of_basis_projector() {
        let tol = ToleranceConfig::default();
        let mut m = CMatrix::zeros(2, 2);
        m[(0, 0)] = cr(1.0);
        let kb = kernel_basis(&m, &tol).unwrap();
        assert_eq!(kb.len(), 1);
        assert_abs_diff_eq!(kb[0][1].norm(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn range_plus_kernel_spans_everything() {
        let tol = ToleranceConfig::default();
        let m = CMatrix::from_diagonal(&CVector::from_vec(vec![cr(0.5), cr(0.5), cr(0.0)]));
        let r = range_basis(&m, &tol).unwrap();
        let k = kernel_basis(&m, &tol).unwrap();
        assert_eq!(r.len() + k.len(), 3);
    }

    #[test]
    fn trace_distance_of_orthogonal_projectors_is_one() {
        let mut a = CMatrix::zeros(2, 2);
        a[(0, 0)] = cr(1.0);
        let mut b = CMatrix::zeros(2, 2);
        b[(1, 1)] = cr(1.0);
        assert_abs_diff_eq!(trace_distance_m(&a, &b).unwrap(), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(trace_distance_m(&a, &a).unwrap(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn permute_round_trip() {
        let dims = [2usize, 3];
        let a = CMatrix::from_fn(2, 2, |i, j| c((i + 2 * j) as f64, 0.3));
        let b = CMatrix::from_fn(3, 3, |i, j| c((3 * i + j) as f64, -0.1));
        let ab = kron(&a, &b);
        let ba = kron(&b, &a);
        let perm = [1usize, 0];
        let moved = permute_systems_matrix(&ab, &dims, &perm);
        assert!(max_abs_entry(&(moved - ba)) < 1e-12);
    }

    #[test]
    fn embed_acts_on_named_site() {
        let dims = [2usize, 2];
        let x = CMatrix::from_row_slice(2, 2, &[cr(0.0), cr(1.0), cr(1.0), cr(0.0)]);
        let on_1 = embed_op(&dims, &[1], &x);
        let expect = kron(&CMatrix::identity(2, 2), &x);
        assert!(max_abs_entry(&(on_1 - expect)) < 1e-12);
    }

    #[test]
    fn eig_reconstructs_random_hermitian_of_side_64() {
        use rand::{RngCore, SeedableRng};
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(7);
        let mut g = CMatrix::zeros(64, 64);
        for i in 0..64 {
            for j in 0..64 {
                let re = (rng.next_u64() as f64 / u64::MAX as f64) - 0.5;
                let im = (rng.next_u64() as f64 / u64::MAX as f64) - 0.5;
                g[(i, j)] = c(re, im);
            }
        }
        let h = hermitize(&g);
        let (vals, vecs) = eig_hermitian(&h).unwrap();
        let d = CMatrix::from_diagonal(&CVector::from_iterator(64, vals.iter().map(|v| cr(*v))));
        let rec = &vecs * d * vecs.adjoint();
        assert!(max_abs_entry(&(rec - h)) <= 1e-10);
    }
}
