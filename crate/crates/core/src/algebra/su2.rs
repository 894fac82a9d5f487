//! su(2) in the fundamental representation with `t^a = σ^a / 2`.

use super::matrix::{c, SquareMatrixC, C64};
use crate::error::{Error, Result};

/// Dual Coxeter number of su(N) under the `t^a = σ^a/2` normalization.
pub fn dual_coxeter(n: u32) -> u32 {
    n
}

pub fn pauli() -> [SquareMatrixC; 3] {
    let z = c(0.0, 0.0);
    let one = c(1.0, 0.0);
    let i = c(0.0, 1.0);
    [
        SquareMatrixC::from_rows(&[vec![z, one], vec![one, z]]).unwrap(),
        SquareMatrixC::from_rows(&[vec![z, -i], vec![i, z]]).unwrap(),
        SquareMatrixC::from_rows(&[vec![one, z], vec![z, -one]]).unwrap(),
    ]
}

/// `t^a = σ^a / 2`, a = 1, 2, 3.
pub fn su2_generators() -> [SquareMatrixC; 3] {
    pauli().map(|p| p.scale_re(0.5))
}

/// `Σ_a t^a ⊗ t^a` on the 4-dimensional tensor square.
pub fn casimir_sum() -> SquareMatrixC {
    let t = su2_generators();
    t.iter()
        .map(|ta| ta.kron(ta))
        .fold(SquareMatrixC::zeros(4), |acc, m| &acc + &m)
}

/// `t̂ = (1/(k+2)) Σ_a t^a ⊗ t^a`.
pub fn casimir_tensor(k: i64) -> Result<SquareMatrixC> {
    if k < 1 {
        return Err(Error::InvalidParameter(format!("level k must be >= 1, got {k}")));
    }
    Ok(casimir_sum().scale_re(1.0 / (k as f64 + dual_coxeter(2) as f64)))
}

/// Exchange of the two tensor factors on C^2 ⊗ C^2.
pub fn swap() -> SquareMatrixC {
    let mut s = SquareMatrixC::zeros(4);
    for a in 0..2 {
        for b in 0..2 {
            s.set(2 * a + b, 2 * b + a, c(1.0, 0.0));
        }
    }
    s
}

/// Projectors onto the symmetric (triplet) and antisymmetric (singlet)
/// subspaces of C^2 ⊗ C^2.
pub fn triplet_singlet_projectors() -> (SquareMatrixC, SquareMatrixC) {
    let id = SquareMatrixC::identity(4);
    let p = swap();
    ((&id + &p).scale_re(0.5), (&id - &p).scale_re(0.5))
}

/// Contract real components with `i·t^a`, giving an anti-Hermitian element.
pub fn anti_hermitian_element(v: [f64; 3]) -> SquareMatrixC {
    let t = su2_generators();
    let mut m = SquareMatrixC::zeros(2);
    for a in 0..3 {
        m = &m + &t[a].scale(C64::new(0.0, v[a]));
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::matrix::spectrum_distance;

    #[test]
    fn t3_is_half_pauli_z() {
        let t = su2_generators();
        assert_eq!(
            t[2],
            SquareMatrixC::from_real_rows(&[vec![0.5, 0.0], vec![0.0, -0.5]]).unwrap()
        );
        for ta in &t {
            assert!(ta.is_hermitian(0.0));
            assert_eq!(ta.trace(), c(0.0, 0.0));
        }
    }

    #[test]
    fn commutation_relations() {
        let t = su2_generators();
        // [t^a, t^b] = i ε_abc t^c
        for (a, b, cc) in [(0, 1, 2), (1, 2, 0), (2, 0, 1)] {
            let lhs = t[a].commutator(&t[b]);
            assert!(lhs.dist(&t[cc].scale(c(0.0, 1.0))) < 1e-15);
        }
    }

    #[test]
    fn trace_normalization() {
        let t = su2_generators();
        for a in 0..3 {
            for b in 0..3 {
                let want = if a == b { 0.5 } else { 0.0 };
                assert!(((&t[a] * &t[b]).trace() - c(want, 0.0)).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn casimir_spectrum() {
        let ev = casimir_sum().eigenvalues();
        let want = [c(-0.75, 0.0), c(0.25, 0.0), c(0.25, 0.0), c(0.25, 0.0)];
        assert!(spectrum_distance(&ev, &want) < 1e-12);

        let (vals, _) = casimir_tensor(1).unwrap().hermitian_eigen();
        let want = [-0.25, 1.0 / 12.0, 1.0 / 12.0, 1.0 / 12.0];
        for (v, w) in vals.iter().zip(want) {
            assert!((v - w).abs() < 1e-12);
        }
    }

    #[test]
    fn casimir_commutes_with_swap_and_decomposes() {
        for k in 1..=5 {
            let t = casimir_tensor(k).unwrap();
            assert!(t.is_hermitian(1e-15));
            assert!(t.commutator(&swap()).norm() <= 1e-12);
            let (pt, ps) = triplet_singlet_projectors();
            let rebuilt = (&pt.scale_re(0.25) - &ps.scale_re(0.75)).scale_re(1.0 / (k as f64 + 2.0));
            assert!(rebuilt.dist(&t) <= 1e-12);
        }
        assert!(casimir_tensor(0).is_err());
    }
}
