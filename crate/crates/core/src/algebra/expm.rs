//! Matrix exponential.
//!
//! Hermitian and normal inputs go through an eigendecomposition; everything
//! else uses Padé-13 scaling and squaring (Higham 2005).

use super::matrix::{SquareMatrixC, C64};
use crate::error::{Error, Result};

const PADE13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];
const THETA13: f64 = 5.371920351148152;

/// Which algorithm [`mat_exp`] picked, exposed for diagnostics and tests.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExpMethod {
    Hermitian,
    Normal,
    Pade,
}

pub fn mat_exp(m: &SquareMatrixC) -> Result<SquareMatrixC> {
    mat_exp_with_method(m).map(|(e, _)| e)
}

pub fn mat_exp_with_method(m: &SquareMatrixC) -> Result<(SquareMatrixC, ExpMethod)> {
    if !m.is_finite() {
        return Err(Error::InvalidParameter("mat_exp: non-finite entry".into()));
    }
    if m.is_hermitian(1e-15) {
        let (vals, u) = m.hermitian_eigen();
        let d: Vec<C64> = vals.iter().map(|&v| C64::new(v.exp(), 0.0)).collect();
        return Ok((
            &(&u * &SquareMatrixC::from_diag(&d)) * &u.adjoint(),
            ExpMethod::Hermitian,
        ));
    }
    if m.is_normal(1e-14) {
        let (q, t) = m.schur();
        let off: f64 = (0..t.dim())
            .flat_map(|i| (0..i).map(move |j| (j, i)))
            .map(|(i, j)| t.get(i, j).norm_sqr())
            .sum::<f64>()
            .sqrt();
        if off <= 1e-13 * (1.0 + m.norm()) {
            let d: Vec<C64> = (0..t.dim()).map(|i| t.get(i, i).exp()).collect();
            return Ok((&(&q * &SquareMatrixC::from_diag(&d)) * &q.adjoint(), ExpMethod::Normal));
        }
    }
    Ok((pade13(m)?, ExpMethod::Pade))
}

/// Scaling and squaring with the degree-13 Padé approximant.
pub fn pade13(m: &SquareMatrixC) -> Result<SquareMatrixC> {
    let n = m.dim();
    let norm = m.norm1();
    let s = if norm > THETA13 {
        (norm / THETA13).log2().ceil() as i32
    } else {
        0
    };
    let a = m.scale_re(0.5f64.powi(s));
    let id = SquareMatrixC::identity(n);
    let a2 = &a * &a;
    let a4 = &a2 * &a2;
    let a6 = &a4 * &a2;
    let b = &PADE13;
    let u_inner = &(&a6.scale_re(b[13]) + &a4.scale_re(b[11])) + &a2.scale_re(b[9]);
    let u =
        &(&a6 * &u_inner) + &(&(&(&a6.scale_re(b[7]) + &a4.scale_re(b[5])) + &a2.scale_re(b[3])) + &id.scale_re(b[1]));
    let u = &a * &u;
    let v_inner = &(&a6.scale_re(b[12]) + &a4.scale_re(b[10])) + &a2.scale_re(b[8]);
    let v =
        &(&a6 * &v_inner) + &(&(&(&a6.scale_re(b[6]) + &a4.scale_re(b[4])) + &a2.scale_re(b[2])) + &id.scale_re(b[0]));
    let p = &v + &u;
    let q = &v - &u;
    let mut r = &q.inverse()? * &p;
    for _ in 0..s {
        r = &r * &r;
    }
    if !r.is_finite() {
        return Err(Error::Numerical("mat_exp overflow".into()));
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::matrix::c;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random(n: usize, scale: f64, rng: &mut ChaCha8Rng) -> SquareMatrixC {
        let m = SquareMatrixC::from_fn(n, |_, _| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
        m.scale_re(scale / m.norm())
    }

    /// Truncated Taylor series summed in many small substeps, as an
    /// independent reference for moderate norms.
    fn taylor_reference(m: &SquareMatrixC) -> SquareMatrixC {
        let steps = 64;
        let a = m.scale_re(1.0 / steps as f64);
        let mut term = SquareMatrixC::identity(m.dim());
        let mut sum = term.clone();
        for k in 1..30 {
            term = (&term * &a).scale_re(1.0 / k as f64);
            sum = &sum + &term;
        }
        let mut r = SquareMatrixC::identity(m.dim());
        for _ in 0..steps {
            r = &r * &sum;
        }
        r
    }

    #[test]
    fn zero_and_diagonal() {
        assert_eq!(mat_exp(&SquareMatrixC::zeros(3)).unwrap(), SquareMatrixC::identity(3));
        let d = SquareMatrixC::from_diag(&[c(1.5, 0.0), c(-2.0, 0.0)]);
        let e = mat_exp(&d).unwrap();
        assert!((e.get(0, 0) - c(1.5f64.exp(), 0.0)).norm() < 1e-14);
        assert!((e.get(1, 1) - c((-2.0f64).exp(), 0.0)).norm() < 1e-15);
        assert!(e.get(0, 1).norm() < 1e-15);
    }

    #[test]
    fn method_selection() {
        let h = SquareMatrixC::from_real_rows(&[vec![1.0, 2.0], vec![2.0, -1.0]]).unwrap();
        assert_eq!(mat_exp_with_method(&h).unwrap().1, ExpMethod::Hermitian);
        assert_eq!(mat_exp_with_method(&h.scale(c(0.0, 1.0))).unwrap().1, ExpMethod::Normal);
        let j = SquareMatrixC::from_real_rows(&[vec![1.0, 1.0], vec![0.0, 1.0]]).unwrap();
        let (e, how) = mat_exp_with_method(&j).unwrap();
        assert_eq!(how, ExpMethod::Pade);
        // exp of a Jordan block: e * [[1, 1], [0, 1]]
        let want = j.scale_re(std::f64::consts::E);
        assert!(e.dist(&want) < 1e-14);
        assert!(mat_exp(&SquareMatrixC::from_diag(&[c(f64::NAN, 0.0)])).is_err());
    }

    #[test]
    fn accuracy_against_taylor_reference() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for &scale in &[0.1, 1.0, 4.0, 10.0] {
            for _ in 0..10 {
                let m = random(4, scale, &mut rng);
                let e = mat_exp(&m).unwrap();
                let r = taylor_reference(&m);
                assert!(
                    e.dist(&r) <= 1e-12 * r.norm(),
                    "scale {scale}: {}",
                    e.dist(&r) / r.norm()
                );
            }
        }
    }

    #[test]
    fn inverse_and_similarity() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let id = SquareMatrixC::identity(4);
        for _ in 0..50 {
            let m = random(4, rng.random_range(0.1..2.0), &mut rng);
            let p = &mat_exp(&m).unwrap() * &mat_exp(&-&m).unwrap();
            assert!(p.dist(&id) <= 1e-10);

            let s = &random(4, 0.5, &mut rng) + &id.scale_re(1.5);
            let si = s.inverse().unwrap();
            let lhs = mat_exp(&(&(&s * &m) * &si)).unwrap();
            let rhs = &(&s * &mat_exp(&m).unwrap()) * &si;
            assert!(lhs.dist(&rhs) <= 1e-9);
        }
    }
}
