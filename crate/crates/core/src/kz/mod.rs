//! Four-point KZ system: conformal data, the Fuchsian ODE in the cross-ratio,
//! its monodromy, the braid matrix R and the two-sided closed-form solution.

mod ode;
mod two_sided;

use std::f64::consts::PI;

use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use crate::algebra::matrix::{c, sort_complex, spectrum_distance, SquareMatrixC, C64};
use crate::algebra::{casimir_tensor, mat_exp};
use crate::error::{Error, Result};

pub use ode::{integrate_G, integrate_system, ODEPath, DEFAULT_TOLERANCE, MIN_STEP};
pub use two_sided::{
    two_sided_check, two_sided_convergence, TwoSidedPoints, TwoSidedResidual, TwoSidedStudy,
    STUDY_STEPS as TWO_SIDED_STEPS,
};

/// SU(N) at level k. `g = N` and `d = N² − 1` are derived on construction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawParams", into = "RawParams")]
pub struct KZParams {
    n: u32,
    k: u32,
    g: u32,
    d: u32,
}

#[derive(Serialize, Deserialize)]
struct RawParams {
    #[serde(rename = "N")]
    n: u32,
    k: u32,
}

impl TryFrom<RawParams> for KZParams {
    type Error = Error;
    fn try_from(r: RawParams) -> Result<Self> {
        KZParams::new(r.n, r.k)
    }
}

impl From<KZParams> for RawParams {
    fn from(p: KZParams) -> Self {
        RawParams { n: p.n, k: p.k }
    }
}

impl KZParams {
    pub fn new(n: u32, k: u32) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidParameter(format!("N must be >= 2, got {n}")));
        }
        if k < 1 {
            return Err(Error::InvalidParameter(format!("level k must be >= 1, got {k}")));
        }
        if n > 1000 || k > 1_000_000 {
            return Err(Error::InvalidParameter(format!(
                "N = {n}, k = {k} out of supported range"
            )));
        }
        Ok(Self {
            n,
            k,
            g: n,
            d: n * n - 1,
        })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    /// Dual Coxeter number.
    pub fn g(&self) -> u32 {
        self.g
    }

    /// Dimension of su(N).
    pub fn d(&self) -> u32 {
        self.d
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ConformalData {
    pub delta: Rational64,
    pub c: Rational64,
}

/// Δ = (N²−1)/(2N(N+k)), c = k·d/(k+g).
pub fn conformal_data(p: KZParams) -> ConformalData {
    let (n, k) = (p.n as i64, p.k as i64);
    ConformalData {
        delta: Rational64::new(n * n - 1, 2 * n * (n + k)),
        c: Rational64::new(k * p.d as i64, k + p.g as i64),
    }
}

/// Coefficient matrices of dG/dx = (P/x + Q/(x−1)) G.
pub fn pq_matrices(p: KZParams) -> (SquareMatrixC, SquareMatrixC) {
    let n = p.n as f64;
    let s = -1.0 / (n * (n + p.k as f64));
    let pm = SquareMatrixC::from_real_rows(&[vec![n * n - 1.0, n], vec![0.0, -1.0]]).unwrap();
    let qm = SquareMatrixC::from_real_rows(&[vec![-1.0, 0.0], vec![n, n * n - 1.0]]).unwrap();
    (pm.scale_re(s), qm.scale_re(s))
}

/// Exact eigenvalues of P: {−(N²−1)/(N(N+k)), 1/(N(N+k))}.
pub fn p_eigenvalues(p: KZParams) -> [Rational64; 2] {
    let (n, k) = (p.n as i64, p.k as i64);
    [
        Rational64::new(-(n * n - 1), n * (n + k)),
        Rational64::new(1, n * (n + k)),
    ]
}

/// Regular singular point encircled by a monodromy loop.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Center {
    Zero,
    One,
}

impl Center {
    pub fn point(self) -> C64 {
        match self {
            Center::Zero => c(0.0, 0.0),
            Center::One => c(1.0, 0.0),
        }
    }
}

impl std::str::FromStr for Center {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "0" => Ok(Center::Zero),
            "1" => Ok(Center::One),
            _ => Err(Error::InvalidParameter(format!("center must be 0 or 1, got {s:?}"))),
        }
    }
}

pub const DEFAULT_RADIUS: f64 = 0.5;
pub const LOOP_SEGMENTS: usize = 64;

/// Counterclockwise regular polygon with `segments` sides around `center`,
/// starting and ending at `center + radius`.
pub fn circle_path(center: Center, radius: f64, segments: usize) -> Result<ODEPath> {
    if !(radius > 0.0 && radius < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "radius must lie in (0, 1), got {radius}"
        )));
    }
    if segments < 3 {
        return Err(Error::InvalidParameter("a loop needs at least 3 segments".into()));
    }
    let z0 = center.point();
    let pts = (0..=segments)
        .map(|j| {
            if j == segments {
                z0 + radius
            } else {
                z0 + C64::from_polar(radius, 2.0 * PI * j as f64 / segments as f64)
            }
        })
        .collect();
    ODEPath::new(pts, DEFAULT_TOLERANCE)
}

fn loop_matrix(p: KZParams, center: Center, radius: f64, segments: usize) -> Result<SquareMatrixC> {
    integrate_G(p, &circle_path(center, radius, segments)?, &SquareMatrixC::identity(2))
}

/// Transport of the identity once around `center`, counterclockwise.
pub fn monodromy(p: KZParams, center: Center, radius: f64) -> Result<SquareMatrixC> {
    loop_matrix(p, center, radius, LOOP_SEGMENTS)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MonodromyReport {
    pub matrix: SquareMatrixC,
    pub eigenvalues: Vec<C64>,
    /// e^{2πiλ} for λ in the spectrum of P (center 0) or Q (center 1).
    pub expected: Vec<C64>,
    pub eigenvalue_error: f64,
    pub det_error: f64,
    /// ‖M(64 segments) − M(128 segments)‖.
    pub refinement_diff: f64,
}

pub fn monodromy_report(p: KZParams, center: Center, radius: f64) -> Result<MonodromyReport> {
    let m = monodromy(p, center, radius)?;
    let fine = loop_matrix(p, center, radius, 2 * LOOP_SEGMENTS)?;
    let (pm, qm) = pq_matrices(p);
    let local = match center {
        Center::Zero => pm,
        Center::One => qm,
    };
    let mut eigenvalues = m.eigenvalues();
    sort_complex(&mut eigenvalues);
    let mut expected: Vec<C64> = local
        .eigenvalues()
        .into_iter()
        .map(|l| (C64::new(0.0, 2.0 * PI) * l).exp())
        .collect();
    sort_complex(&mut expected);
    let det_expected = (C64::new(0.0, 2.0 * PI) * local.trace()).exp();
    Ok(MonodromyReport {
        eigenvalue_error: spectrum_distance(&eigenvalues, &expected),
        det_error: (m.det() - det_expected).norm(),
        refinement_diff: m.dist(&fine),
        matrix: m,
        eigenvalues,
        expected,
    })
}

/// ‖(det B)ψ − (Tr B)Bψ + B²ψ‖.
pub fn braid_relation_check(b: &SquareMatrixC, psi: &[C64]) -> Result<f64> {
    if b.dim() != 2 {
        return Err(Error::InvalidParameter(format!("B must be 2x2, got {0}x{0}", b.dim())));
    }
    if psi.len() != 2 {
        return Err(Error::InvalidParameter(format!(
            "psi must have 2 entries, got {}",
            psi.len()
        )));
    }
    let bp = b.apply(psi);
    let bbp = b.apply(&bp);
    let (det, tr) = (b.det(), b.trace());
    Ok((0..2)
        .map(|i| (det * psi[i] - tr * bp[i] + bbp[i]).norm_sqr())
        .sum::<f64>()
        .sqrt())
}

/// R = exp(iπ t̂) on C² ⊗ C².
pub fn r_matrix(k: i64) -> Result<SquareMatrixC> {
    mat_exp(&casimir_tensor(k)?.scale(C64::new(0.0, PI)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params() -> Vec<KZParams> {
        (1..=3).map(|k| KZParams::new(2, k).unwrap()).collect()
    }

    #[test]
    fn conformal_examples() {
        let d = conformal_data(KZParams::new(2, 1).unwrap());
        assert_eq!(d.delta, Rational64::new(1, 4));
        assert_eq!(d.c, Rational64::from_integer(1));
        let d = conformal_data(KZParams::new(2, 2).unwrap());
        assert_eq!((d.delta, d.c), (Rational64::new(3, 16), Rational64::new(3, 2)));
        let mut last = Rational64::from_integer(1);
        for k in 1..50 {
            let p = KZParams::new(2, k).unwrap();
            let delta = conformal_data(p).delta;
            assert!(delta < last);
            last = delta;
            assert_eq!(p_eigenvalues(p)[0], -delta * 2);
        }
        assert!(KZParams::new(1, 1).is_err());
        assert!(KZParams::new(2, 0).is_err());
    }

    #[test]
    fn pq_structure() {
        let (pm, qm) = pq_matrices(KZParams::new(2, 1).unwrap());
        let want = SquareMatrixC::from_real_rows(&[vec![3.0, 2.0], vec![0.0, -1.0]])
            .unwrap()
            .scale_re(-1.0 / 6.0);
        assert!(pm.dist(&want) < 1e-15);
        let j = SquareMatrixC::from_real_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        assert!((&(&j * &pm) * &j).dist(&qm) < 1e-15);
        for n in 2..5 {
            let p = KZParams::new(n, 3).unwrap();
            let mut ev = pq_matrices(p).0.eigenvalues();
            sort_complex(&mut ev);
            let mut want: Vec<C64> = p_eigenvalues(p)
                .iter()
                .map(|r| c(*r.numer() as f64 / *r.denom() as f64, 0.0))
                .collect();
            sort_complex(&mut want);
            assert!(spectrum_distance(&ev, &want) < 1e-14);
        }
    }

    #[test]
    fn monodromy_spectra() {
        for p in params() {
            for center in [Center::Zero, Center::One] {
                let r = monodromy_report(p, center, DEFAULT_RADIUS).unwrap();
                assert!(r.eigenvalue_error < 1e-6, "{p:?} {center:?} {}", r.eigenvalue_error);
                assert!(r.det_error < 1e-6);
                assert!(r.refinement_diff < 1e-6);
            }
            let a = monodromy(p, Center::Zero, 0.5).unwrap();
            let b = monodromy(p, Center::Zero, 0.25).unwrap();
            let mut ea = a.eigenvalues();
            let mut eb = b.eigenvalues();
            sort_complex(&mut ea);
            sort_complex(&mut eb);
            assert!(spectrum_distance(&ea, &eb) < 1e-6);
        }
        assert!(monodromy(params()[0], Center::Zero, 1.0).is_err());
    }

    #[test]
    fn braid_relation() {
        let b = SquareMatrixC::from_rows(&[vec![c(1.0, 2.0), c(-0.5, 0.1)], vec![c(3.0, 0.0), c(0.2, -1.0)]]).unwrap();
        let psi = [c(0.3, -0.7), c(1.1, 0.4)];
        assert!(braid_relation_check(&b, &psi).unwrap() <= 1e-10 * b.norm().powi(2) * 1.3);
        assert_eq!(braid_relation_check(&SquareMatrixC::identity(2), &psi).unwrap(), 0.0);
        let m = monodromy(params()[0], Center::Zero, 0.5).unwrap();
        assert!(braid_relation_check(&m, &[c(1.0, 0.0), c(0.0, 0.0)]).unwrap() <= 1e-8);
        assert!(braid_relation_check(&SquareMatrixC::identity(3), &psi).is_err());
        assert!(braid_relation_check(&b, &psi[..1]).is_err());
    }

    #[test]
    fn r_matrix_spectrum() {
        let r = r_matrix(1).unwrap();
        assert!((&r * &r.adjoint()).dist(&SquareMatrixC::identity(4)) < 1e-12);
        let t = casimir_tensor(1).unwrap();
        assert!(r.commutator(&t).norm() < 1e-12);
        let mut ev = r.eigenvalues();
        sort_complex(&mut ev);
        let e = |x: f64| C64::new(0.0, x).exp();
        let mut want = vec![e(PI / 12.0), e(PI / 12.0), e(PI / 12.0), e(-PI / 4.0)];
        sort_complex(&mut want);
        assert!(spectrum_distance(&ev, &want) < 1e-12);
        for k in 1..=4 {
            let r2 = r_matrix(k).unwrap().powi(2).unwrap();
            let mut ev = r2.eigenvalues();
            sort_complex(&mut ev);
            let d = 4.0 * (k as f64 + 2.0);
            let mut want = vec![e(2.0 * PI / d), e(2.0 * PI / d), e(2.0 * PI / d), e(-6.0 * PI / d)];
            sort_complex(&mut want);
            assert!(spectrum_distance(&ev, &want) < 1e-12);
        }
        assert!(r_matrix(0).is_err());
    }
}
