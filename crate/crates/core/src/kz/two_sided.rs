//! Finite-difference check of G = e^{t̂ log(z₁−z₃)} A e^{−t̂ log(z₄−z₂)}
//! against the two-point KZ equation and its dual.
//!
//! The KZ operator is built from the anti-Hermitian generators i·t^a, so
//! Ω = (1/(k+2)) Σ (i t^a)⊗(i t^a) = −t̂ with t̂ the Hermitian tensor Casimir.
//! With that reading, ∂₁G = −ΩG/(z₁−z₃) and ∂₂G = −GΩ/(z₄−z₂) hold exactly.

use serde::{Deserialize, Serialize};

use crate::algebra::casimir_tensor;
use crate::algebra::matrix::{SquareMatrixC, C64};
use crate::error::{Error, Result};

/// Steps of the convergence study.
pub const STUDY_STEPS: [f64; 3] = [1e-3, 1e-4, 1e-5];

/// z₁..z₄ with W(z₁,z₂) and W(z₃,z₄) the two curves.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TwoSidedPoints {
    pub z: [C64; 4],
}

impl Default for TwoSidedPoints {
    fn default() -> Self {
        Self {
            z: [
                C64::new(0.35, 0.25),
                C64::new(-0.3, -0.2),
                C64::new(0.25, 0.17),
                C64::new(-0.21, -0.12),
            ],
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TwoSidedResidual {
    pub step: f64,
    /// ‖∂₁G + ΩG/(z₁−z₃)‖.
    pub kz: f64,
    /// ‖∂₂G + GΩ/(z₄−z₂)‖.
    pub dual: f64,
    /// ‖∂₃G + ΩG/(z₃−z₁)‖.
    pub kz_z3: f64,
    /// ‖∂₁G + t̂G/(z₁−z₃)‖: the KZ residual if Ω were the Hermitian t̂.
    pub kz_hermitian_reading: f64,
}

struct Closed {
    vals: Vec<f64>,
    u: SquareMatrixC,
    a: SquareMatrixC,
    t: SquareMatrixC,
}

impl Closed {
    /// e^{λ t̂}.
    fn exp(&self, lambda: C64) -> SquareMatrixC {
        let d: Vec<C64> = self.vals.iter().map(|&v| (lambda * v).exp()).collect();
        &(&self.u * &SquareMatrixC::from_diag(&d)) * &self.u.adjoint()
    }

    fn g(&self, z: &[C64; 4]) -> SquareMatrixC {
        &(&self.exp((z[0] - z[2]).ln()) * &self.a) * &self.exp(-(z[3] - z[1]).ln())
    }

    fn derivative(&self, z: &[C64; 4], i: usize, h: f64) -> SquareMatrixC {
        let (mut zp, mut zm) = (*z, *z);
        zp[i] += h;
        zm[i] -= h;
        (&self.g(&zp) - &self.g(&zm)).scale_re(0.5 / h)
    }
}

fn check_branch(w: C64, h: f64, what: &str) -> Result<()> {
    if w.norm() <= 10.0 * h {
        return Err(Error::InvalidParameter(format!(
            "{what} is too close to zero for step {h}"
        )));
    }
    if w.re < 0.0 && w.im.abs() <= 10.0 * h {
        return Err(Error::InvalidParameter(format!(
            "{what} = {w} lies on the branch cut of the principal logarithm"
        )));
    }
    Ok(())
}

pub fn two_sided_check(k: i64, a: &SquareMatrixC, pts: &TwoSidedPoints, h: f64) -> Result<TwoSidedResidual> {
    if a.dim() != 4 || !a.is_finite() {
        return Err(Error::InvalidParameter("A must be a finite 4x4 matrix".into()));
    }
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::InvalidParameter(format!("step must be positive, got {h}")));
    }
    let z = pts.z;
    check_branch(z[0] - z[2], h, "z1 - z3")?;
    check_branch(z[3] - z[1], h, "z4 - z2")?;
    let t = casimir_tensor(k)?;
    let (vals, u) = t.hermitian_eigen();
    let cl = Closed {
        vals,
        u,
        a: a.clone(),
        t,
    };
    let g = cl.g(&z);
    let omega = cl.t.scale_re(-1.0);
    let d1 = cl.derivative(&z, 0, h);
    let d2 = cl.derivative(&z, 1, h);
    let d3 = cl.derivative(&z, 2, h);
    let og = &omega * &g;
    let go = &g * &omega;
    let tg = &cl.t * &g;
    let inv = |w: C64| C64::new(1.0, 0.0) / w;
    Ok(TwoSidedResidual {
        step: h,
        kz: (&d1 + &og.scale(inv(z[0] - z[2]))).norm(),
        dual: (&d2 + &go.scale(inv(z[3] - z[1]))).norm(),
        kz_z3: (&d3 + &og.scale(inv(z[2] - z[0]))).norm(),
        kz_hermitian_reading: (&d1 + &tg.scale(inv(z[0] - z[2]))).norm(),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TwoSidedStudy {
    pub residuals: Vec<TwoSidedResidual>,
    /// Least-squares slope of log residual against log step.
    pub kz_order: f64,
    pub dual_order: f64,
}

fn slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let num: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let den: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    num / den
}

pub fn two_sided_convergence(k: i64, a: &SquareMatrixC, pts: &TwoSidedPoints, steps: &[f64]) -> Result<TwoSidedStudy> {
    if steps.len() < 2 {
        return Err(Error::InvalidParameter(
            "a convergence study needs at least two steps".into(),
        ));
    }
    let residuals = steps
        .iter()
        .map(|&h| two_sided_check(k, a, pts, h))
        .collect::<Result<Vec<_>>>()?;
    let lh: Vec<f64> = steps.iter().map(|h| h.ln()).collect();
    let order = |f: fn(&TwoSidedResidual) -> f64| {
        let ly: Vec<f64> = residuals.iter().map(|r| f(r).max(f64::MIN_POSITIVE).ln()).collect();
        slope(&lh, &ly)
    };
    Ok(TwoSidedStudy {
        kz_order: order(|r| r.kz),
        dual_order: order(|r| r.dual),
        residuals,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::matrix::c;

    fn generic_a() -> SquareMatrixC {
        SquareMatrixC::from_fn(4, |i, j| {
            c(((i * 7 + j * 3) % 5) as f64 * 0.3 - 0.4, ((i + 2 * j) % 3) as f64 * 0.2)
        })
    }

    #[test]
    fn residuals_small() {
        for a in [SquareMatrixC::identity(4), generic_a()] {
            let r = two_sided_check(1, &a, &TwoSidedPoints::default(), 1e-5).unwrap();
            assert!(r.kz <= 1e-6 && r.dual <= 1e-6 && r.kz_z3 <= 1e-6, "{r:?}");
            assert!(r.kz_hermitian_reading > 1e-2);
        }
    }

    #[test]
    fn second_order() {
        let s = two_sided_convergence(1, &generic_a(), &TwoSidedPoints::default(), &STUDY_STEPS).unwrap();
        assert!((s.kz_order - 2.0).abs() <= 0.2, "{s:?}");
        assert!((s.dual_order - 2.0).abs() <= 0.2, "{s:?}");
    }

    #[test]
    fn coincident_points() {
        let mut p = TwoSidedPoints::default();
        p.z[2] = p.z[0];
        assert!(two_sided_check(1, &SquareMatrixC::identity(4), &p, 1e-5).is_err());
        assert!(two_sided_check(1, &SquareMatrixC::identity(2), &TwoSidedPoints::default(), 1e-5).is_err());
    }
}
