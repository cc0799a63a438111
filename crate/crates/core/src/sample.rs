//! Seeded random states and unitaries.
//!
//! Density matrices are drawn as `G G^dag / tr(G G^dag)` with `G` a complex
//! Gaussian `D x rank` matrix, the unitarily invariant induced measure
//! (Hilbert-Schmidt at `rank = D`). Unitaries come from the QR of a Ginibre
//! matrix with the standard phase fix.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::linalg::{CMatrix, CVector};
use crate::state::MultipartiteState;

pub fn complex_gaussian<R: Rng>(rows: usize, cols: usize, rng: &mut R) -> CMatrix {
    DMatrix::from_fn(rows, cols, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex64::new(re, im)
    })
}

/// Random density matrix of the given rank on `dims`.
pub fn random_state<R: Rng>(dims: &[usize], rank: usize, rng: &mut R) -> MultipartiteState {
    let d: usize = dims.iter().product();
    let rank = rank.clamp(1, d);
    let g = complex_gaussian(d, rank, rng);
    let m = &g * g.adjoint();
    let trace = m.trace().re;
    MultipartiteState::from_trusted(dims.to_vec(), m.map(|z| z / trace))
}

/// Haar-random unitary of side `d`.
pub fn haar_unitary<R: Rng>(d: usize, rng: &mut R) -> CMatrix {
    let g = complex_gaussian(d, d, rng);
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    // fix column phases so the distribution is Haar
    for j in 0..d {
        let rjj = r[(j, j)];
        let phase = if rjj.norm() > 0.0 {
            rjj / rjj.norm()
        } else {
            Complex64::ONE
        };
        for i in 0..d {
            q[(i, j)] *= phase;
        }
    }
    q
}

/// Haar-random pure state vector of side `d`.
pub fn haar_vector<R: Rng>(d: usize, rng: &mut R) -> CVector {
    let g = complex_gaussian(d, 1, rng);
    let v = g.column(0).into_owned();
    let n = v.norm();
    v.map(|z| z / n)
}

/// Random single-site mixed state with spectrum bounded away from purity.
pub fn random_mixed_qubit<R: Rng>(rng: &mut R) -> MultipartiteState {
    // eigenvalues in [0.2, 0.8] so the state is robustly mixed
    let p = 0.2 + 0.6 * rng.gen::<f64>();
    let u = haar_unitary(2, rng);
    let diag = CMatrix::from_diagonal(&CVector::from_vec(vec![
        Complex64::new(p, 0.0),
        Complex64::new(1.0 - p, 0.0),
    ]));
    MultipartiteState::from_trusted(vec![2], &u * diag * u.adjoint())
}

/// Random pure single-site state.
pub fn random_pure_site<R: Rng>(d: usize, rng: &mut R) -> MultipartiteState {
    let v = haar_vector(d, rng);
    crate::state::pure_state(vec![d], &v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg;
    use crate::tol::ToleranceConfig;
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    #[test]
    fn random_state_is_a_state_of_requested_rank() {
        let tol = ToleranceConfig::default();
        let mut rng = ChaCha12Rng::seed_from_u64(42);
        for rank in [1usize, 3, 8] {
            let s = random_state(&[2, 2, 2], rank, &mut rng);
            assert!((s.matrix().trace().re - 1.0).abs() < 1e-12);
            assert!(linalg::min_eigenvalue(s.matrix()).unwrap() > -1e-12);
            assert_eq!(s.rank(&tol).unwrap(), rank);
        }
    }

    #[test]
    fn haar_unitary_is_unitary_and_seeded() {
        let mut rng = ChaCha12Rng::seed_from_u64(9);
        let u = haar_unitary(4, &mut rng);
        assert!(linalg::unitary_defect(&u) < 1e-12);
        let mut rng2 = ChaCha12Rng::seed_from_u64(9);
        let u2 = haar_unitary(4, &mut rng2);
        assert!(linalg::max_abs_entry(&(&u - &u2)) == 0.0);
    }
}
