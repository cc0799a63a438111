//! Local-unitary canonical forms.
//!
//! Two reductions are used throughout the decision engine: diagonalizing
//! every 1-marginal, and bringing a two-qubit state of rank at most three to
//! the form `D (+) 0` in which the last row and column vanish. The second
//! exists exactly when the kernel contains a product vector; for kernels of
//! dimension two or more one always does (any subspace of C^2 (x) C^2 of
//! dimension >= 2 meets the Segre variety).

use num_complex::Complex64;

use crate::error::{Result, UdaError};
use crate::linalg::{self, CMatrix, CVector};
use crate::state::{self, MultipartiteState};
use crate::tol::ToleranceConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FormTag {
    DiagMarginals,
    DPlusZero,
    None,
}

/// A locally transformed state together with the per-site unitaries that
/// produced it; conjugating the original by them reproduces `state`.
#[derive(Debug, Clone)]
pub struct CanonicalForm {
    pub state: MultipartiteState,
    pub local_unitaries: Vec<CMatrix>,
    pub form_tag: FormTag,
}

impl CanonicalForm {
    /// Undo the recorded unitaries on a state expressed in the canonical
    /// frame, returning it to the original frame.
    pub fn to_original_frame(
        &self,
        s: &MultipartiteState,
        tol: &ToleranceConfig,
    ) -> Result<MultipartiteState> {
        let mut out = s.clone();
        for (site, u) in self.local_unitaries.iter().enumerate() {
            out = state::apply_local_unitary(&out, site, &u.adjoint(), tol)?;
        }
        Ok(out)
    }
}

/// Entries of the leading 3x3 block of a two-qubit `D (+) 0` state.
#[derive(Debug, Clone, Copy)]
pub struct DBlock {
    pub q1: f64,
    pub q2: f64,
    pub q3: f64,
    pub y: Complex64,
    pub z: Complex64,
    pub x: Complex64,
}

impl DBlock {
    pub fn from_matrix(m: &CMatrix) -> Self {
        Self {
            q1: m[(0, 0)].re,
            q2: m[(1, 1)].re,
            q3: m[(2, 2)].re,
            y: m[(0, 1)],
            z: m[(0, 2)],
            x: m[(1, 2)],
        }
    }

    /// Determinant of the Hermitian 3x3 block (real by construction).
    pub fn det(&self) -> f64 {
        let q1 = Complex64::new(self.q1, 0.0);
        let q2 = Complex64::new(self.q2, 0.0);
        let q3 = Complex64::new(self.q3, 0.0);
        (q1 * (q2 * q3 - self.x * self.x.conj())
            - self.y * (self.y.conj() * q3 - self.x * self.z.conj())
            + self.z * (self.y.conj() * self.x.conj() - q2 * self.z.conj()))
        .re
    }
}

/// Unitary with bottom row `<a|`, sending the unit vector `a` to `|1>`.
fn unitary_sending_to_one(a: &CVector) -> CMatrix {
    let mut u = CMatrix::zeros(2, 2);
    u[(0, 0)] = -a[1];
    u[(0, 1)] = a[0];
    u[(1, 0)] = a[0].conj();
    u[(1, 1)] = a[1].conj();
    u
}

/// Per-site unitaries making every 1-marginal diagonal with descending
/// eigenvalues.
pub fn diagonalize_one_marginals(
    s: &MultipartiteState,
    tol: &ToleranceConfig,
) -> Result<CanonicalForm> {
    let mut out = s.clone();
    let mut unitaries = Vec::with_capacity(s.n_systems());
    for site in 0..s.n_systems() {
        let keep = out.subsystems(&[site])?;
        let marginal = state::partial_trace(&out, &keep)?;
        let (_, vecs) = linalg::eig_hermitian(marginal.matrix())?;
        // eig_hermitian sorts ascending; reverse the columns for descending
        let d = vecs.nrows();
        let mut u = CMatrix::zeros(d, d);
        for col in 0..d {
            for row in 0..d {
                u[(col, row)] = vecs[(row, d - 1 - col)].conj();
            }
        }
        out = state::apply_local_unitary(&out, site, &u, tol)?;
        unitaries.push(u);
    }
    Ok(CanonicalForm {
        state: out,
        local_unitaries: unitaries,
        form_tag: FormTag::DiagMarginals,
    })
}

/// A product vector found in the kernel of a two-qubit state.
#[derive(Debug, Clone)]
pub struct ProductVector {
    pub a: CVector,
    pub b: CVector,
}

impl ProductVector {
    pub fn vector(&self) -> CVector {
        let mut v = CVector::zeros(4);
        for i in 0..2 {
            for j in 0..2 {
                v[2 * i + j] = self.a[i] * self.b[j];
            }
        }
        v
    }
}

fn reshape_2x2(v: &CVector) -> CMatrix {
    CMatrix::from_fn(2, 2, |i, j| v[2 * i + j])
}

fn det2(m: &CMatrix) -> Complex64 {
    m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)]
}

/// Split a (near) rank-one 2x2 matrix into its product factors.
fn rank_one_factors(m: &CMatrix) -> (CVector, CVector) {
    // m = U diag(s) V^H, so for rank one m_ij = s0 * u[i,0] * v_t[0,j]
    let svd = m.clone().svd(true, true);
    let u = svd.u.as_ref().unwrap();
    let vt = svd.v_t.as_ref().unwrap();
    let a = CVector::from_vec(vec![u[(0, 0)], u[(1, 0)]]);
    let b = CVector::from_vec(vec![vt[(0, 0)], vt[(0, 1)]]);
    (a, b)
}

/// Canonical phase: scale the pair (alpha, beta) to unit norm with beta real
/// nonnegative (alpha real nonnegative when beta vanishes).
fn fix_root_phase(alpha: Complex64, beta: Complex64) -> (Complex64, Complex64) {
    let norm = (alpha.norm_sqr() + beta.norm_sqr()).sqrt();
    let (a, b) = (alpha / norm, beta / norm);
    let phase = if b.norm() > 1e-12 {
        b.conj() / b.norm()
    } else if a.norm() > 0.0 {
        a.conj() / a.norm()
    } else {
        Complex64::ONE
    };
    (a * phase, b * phase)
}

/// Both projective roots of `A alpha^2 + B alpha beta + C beta^2 = 0`.
fn projective_roots(aa: Complex64, bb: Complex64, cc: Complex64) -> Vec<(Complex64, Complex64)> {
    let scale = aa.norm().max(bb.norm()).max(cc.norm());
    if scale < 1e-14 {
        // identically zero: every pair is a root; canonical first choice
        return vec![(Complex64::ONE, Complex64::ZERO)];
    }
    let (aa, bb, cc) = (aa / scale, bb / scale, cc / scale);
    let disc = (bb * bb - 4.0 * aa * cc).sqrt();
    if aa.norm() >= cc.norm() {
        // roots in s = alpha/beta: aa s^2 + bb s + cc = 0
        let s1 = (-bb + disc) / (2.0 * aa);
        let s2 = (-bb - disc) / (2.0 * aa);
        vec![(s1, Complex64::ONE), (s2, Complex64::ONE)]
    } else if cc.norm() > 0.0 {
        // roots in r = beta/alpha: cc r^2 + bb r + aa = 0
        let r1 = (-bb + disc) / (2.0 * cc);
        let r2 = (-bb - disc) / (2.0 * cc);
        vec![(Complex64::ONE, r1), (Complex64::ONE, r2)]
    } else {
        // aa ~ cc ~ 0, bb != 0: alpha beta = 0
        vec![
            (Complex64::ONE, Complex64::ZERO),
            (Complex64::ZERO, Complex64::ONE),
        ]
    }
}

/// Search the kernel of a two-qubit state for a product vector.
///
/// With a kernel of dimension two or more a product vector always exists and
/// is found by solving the determinant quadratic over the kernel plane; a
/// one-dimensional kernel yields its vector exactly when the 2x2 reshape is
/// (numerically) singular.
pub fn product_vector_in_kernel(
    s: &MultipartiteState,
    tol: &ToleranceConfig,
) -> Result<Option<ProductVector>> {
    if s.dims() != [2, 2] {
        return Err(UdaError::ShapePrecondition {
            expected: "two-qubit state".into(),
            found: format!("{:?}", s.dims()),
        });
    }
    let kernel = linalg::kernel_basis(s.matrix(), tol)?;
    match kernel.len() {
        0 => Ok(None),
        1 => {
            let m = reshape_2x2(&kernel[0]);
            let svd = m.clone().svd(false, false);
            let smax = svd.singular_values[0];
            let smin = svd.singular_values[1];
            if smin <= tol.rank_tol * smax.max(1e-300) {
                let (a, b) = rank_one_factors(&m);
                Ok(Some(ProductVector { a, b }))
            } else {
                Ok(None)
            }
        }
        _ => {
            let m1 = reshape_2x2(&kernel[0]);
            let m2 = reshape_2x2(&kernel[1]);
            let aa = det2(&m1);
            let cc = det2(&m2);
            let bb = det2(&(&m1 + &m2)) - aa - cc;
            let mut roots: Vec<(Complex64, Complex64)> = projective_roots(aa, bb, cc)
                .into_iter()
                .map(|(a, b)| fix_root_phase(a, b))
                .collect();
            // larger |alpha| first; ties by larger real then imaginary part
            roots.sort_by(|l, r| {
                r.0.norm()
                    .partial_cmp(&l.0.norm())
                    .unwrap()
                    .then(r.0.re.partial_cmp(&l.0.re).unwrap())
                    .then(r.0.im.partial_cmp(&l.0.im).unwrap())
            });
            let (alpha, beta) = roots[0];
            let v = &kernel[0] * alpha + &kernel[1] * beta;
            let m = reshape_2x2(&v);
            let (a, b) = rank_one_factors(&m);
            Ok(Some(ProductVector { a, b }))
        }
    }
}

/// Bring a two-qubit state of rank at most three to `D (+) 0` by local
/// unitaries sending a kernel product vector to `|11>`.
///
/// Returns `None` when the state has rank three and its kernel vector is
/// entangled, in which case no such form exists.
pub fn to_d_plus_zero(
    s: &MultipartiteState,
    tol: &ToleranceConfig,
) -> Result<Option<CanonicalForm>> {
    if s.dims() != [2, 2] {
        return Err(UdaError::ShapePrecondition {
            expected: "two-qubit state".into(),
            found: format!("{:?}", s.dims()),
        });
    }
    if s.rank(tol)? == 4 {
        return Err(UdaError::RankPrecondition(
            "full-rank two-qubit state has no zero diagonal form".into(),
        ));
    }
    let Some(pv) = product_vector_in_kernel(s, tol)? else {
        return Ok(None);
    };
    let ua = unitary_sending_to_one(&pv.a);
    let ub = unitary_sending_to_one(&pv.b);
    let out =
        state::apply_local_unitary(&state::apply_local_unitary(s, 0, &ua, tol)?, 1, &ub, tol)?;
    Ok(Some(CanonicalForm {
        state: out,
        local_unitaries: vec![ua, ub],
        form_tag: FormTag::DPlusZero,
    }))
}

/// Whether a rank-three two-qubit state is locally equivalent to one with a
/// zero diagonal entry, i.e. whether its kernel vector is a product vector.
pub fn is_lu_equiv_zero_diagonal(s: &MultipartiteState, tol: &ToleranceConfig) -> Result<bool> {
    if s.dims() != [2, 2] {
        return Err(UdaError::ShapePrecondition {
            expected: "two-qubit state".into(),
            found: format!("{:?}", s.dims()),
        });
    }
    if s.rank(tol)? != 3 {
        return Err(UdaError::RankPrecondition(
            "zero-diagonal equivalence test expects rank three".into(),
        ));
    }
    Ok(product_vector_in_kernel(s, tol)?.is_some())
}

/// Local unitaries aligning the Schmidt basis of the kernel vector of a
/// rank-three two-qubit state with the computational basis, so the kernel
/// lands in span{|00>, |11>} and both |01> and |10> lie in the range.
pub(crate) fn schmidt_align_kernel(
    s: &MultipartiteState,
    tol: &ToleranceConfig,
) -> Result<CanonicalForm> {
    let kernel = linalg::kernel_basis(s.matrix(), tol)?;
    if kernel.len() != 1 {
        return Err(UdaError::RankPrecondition(format!(
            "kernel alignment expects a one-dimensional kernel, got {}",
            kernel.len()
        )));
    }
    let m = reshape_2x2(&kernel[0]);
    let svd = m.clone().svd(true, true);
    let u = svd.u.as_ref().unwrap();
    let vt = svd.v_t.as_ref().unwrap();
    // kernel = sum_k s_k u_k (x) w_k with w_k[j] = v_t[k, j]; send each
    // factor to the matching basis vector
    let mut wa = CMatrix::zeros(2, 2);
    let mut wb = CMatrix::zeros(2, 2);
    for i in 0..2 {
        for j in 0..2 {
            wa[(i, j)] = u[(j, i)].conj();
            wb[(i, j)] = vt[(i, j)].conj();
        }
    }
    let out =
        state::apply_local_unitary(&state::apply_local_unitary(s, 0, &wa, tol)?, 1, &wb, tol)?;
    Ok(CanonicalForm {
        state: out,
        local_unitaries: vec![wa, wb],
        form_tag: FormTag::None,
    })
}

/// How the two-dimensional range of a rank-two `D (+) 0` state sits inside
/// span{|00>, |01>, |10>}.
#[derive(Debug, Clone)]
pub enum RangeForm {
    /// span{ z|00>, u|01> + v|10> }
    AxisAndLine { z: f64, u: f64, v: f64 },
    /// span{ m|00> + n|01>, g|00> + h|10> } with n, h nonzero
    TwoLines { m: f64, n: f64, g: f64, h: f64 },
}

/// Classify the range of a rank-two `D (+) 0` two-qubit state, together with
/// diagonal phase unitaries making the reported coefficients real
/// nonnegative. Exactly one form applies.
pub fn classify_range_form(
    s: &MultipartiteState,
    tol: &ToleranceConfig,
) -> Result<(RangeForm, CMatrix, CMatrix)> {
    let basis = linalg::range_basis(s.matrix(), tol)?;
    if basis.len() != 2 {
        return Err(UdaError::RankPrecondition(format!(
            "range classification expects rank two, got {}",
            basis.len()
        )));
    }
    let p = linalg::projector(&basis);
    let e = |i: usize| {
        let mut v = CVector::zeros(4);
        v[i] = Complex64::ONE;
        v
    };
    // intersection of the range with span{e_i, e_j}: top eigenvector of the
    // compressed projector
    let plane_vector = |i: usize, j: usize| -> CVector {
        let q = CMatrix::from_fn(2, 2, |r, c| {
            let vr = if r == 0 { e(i) } else { e(j) };
            let vc = if c == 0 { e(i) } else { e(j) };
            (vr.adjoint() * &p * vc)[(0, 0)]
        });
        let (_, vecs) = linalg::eig_hermitian(&q).unwrap();
        &e(i) * vecs[(0, 1)] + &e(j) * vecs[(1, 1)]
    };
    let in_range = |v: &CVector| ((&p * v) - v).norm() <= 1e-7;
    let phase_gates = |phi_a: f64, phi_b: f64| {
        let da = CMatrix::from_diagonal(&CVector::from_vec(vec![
            Complex64::ONE,
            Complex64::from_polar(1.0, phi_a),
        ]));
        let db = CMatrix::from_diagonal(&CVector::from_vec(vec![
            Complex64::ONE,
            Complex64::from_polar(1.0, phi_b),
        ]));
        (da, db)
    };

    if in_range(&e(0)) {
        // |00> in the range; the complement meets span{|01>, |10>}
        let w = plane_vector(1, 2);
        let u = w[1];
        let v = w[2];
        // coordinates transform as e01 -> e^{i phi_b} e01, e10 -> e^{i phi_a} e10
        let (da, db) = phase_gates(-v.arg(), -u.arg());
        Ok((
            RangeForm::AxisAndLine {
                z: 1.0,
                u: u.norm(),
                v: v.norm(),
            },
            da,
            db,
        ))
    } else {
        let w1 = plane_vector(0, 1); // m|00> + n|01>
        let w2 = plane_vector(0, 2); // g|00> + h|10>
        let (m, n) = (w1[0], w1[1]);
        let (g, h) = (w2[0], w2[2]);
        // a global phase on each basis vector makes m, g real; the diagonal
        // gates then rotate n and h real
        let theta1 = -m.arg();
        let theta2 = -g.arg();
        let (da, db) = phase_gates(-(h.arg() + theta2), -(n.arg() + theta1));
        Ok((
            RangeForm::TwoLines {
                m: m.norm(),
                n: n.norm(),
                g: g.norm(),
                h: h.norm(),
            },
            da,
            db,
        ))
    }
}
