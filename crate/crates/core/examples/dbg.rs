use uda_core::{sample, linalg, ToleranceConfig};
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use num_complex::Complex64;

fn main() {
    let tol = ToleranceConfig::default();
    let mut rng = ChaCha12Rng::seed_from_u64(77);
    for trial in 0..=416 {
        let s = sample::random_state(&[2, 2], 2, &mut rng);
        if trial < 416 { continue; }
        let kernel = linalg::kernel_basis(s.matrix(), &tol).unwrap();
        let s2 = Complex64::new(0.21478799342744959, -1.3513304569860187);
        let norm = (s2.norm_sqr() + 1.0).sqrt();
        let v = &kernel[0] * (s2/norm) + &kernel[1] * Complex64::new(1.0/norm, 0.0);
        let m = linalg::CMatrix::from_fn(2, 2, |i, j| v[2*i+j]);
        let svd = m.clone().svd(true, true);
        println!("sv: {:?}", svd.singular_values.as_slice());
        let u = svd.u.as_ref().unwrap();
        let vt = svd.v_t.as_ref().unwrap();
        let rec = u * linalg::CMatrix::from_diagonal(&svd.singular_values.map(|x| Complex64::new(x, 0.0))) * vt;
        println!("recompose defect: {:.3e}", (rec - &m).norm());
        println!("u unitarity defect: {:.3e}", linalg::unitary_defect(u));
        println!("vt unitarity defect: {:.3e}", linalg::unitary_defect(vt));
    }
}
