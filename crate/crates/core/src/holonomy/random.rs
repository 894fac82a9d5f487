//! Smooth random fields, curves and gauge functions from seeded Fourier
//! series, and the refinement studies built on them.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{chiral_residual_with, wilson_line, CurveSpec, GaugeFieldSample, GaugeLaw, ProperTimeGrid, Su2};
use crate::error::{Error, Result};

/// Grid sizes of the chiral convergence study.
pub const CHIRAL_STEPS: [usize; 4] = [100, 200, 400, 800];
pub const MAX_MODES: usize = 5;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FieldConfig {
    /// Fourier modes per component, 1..=5.
    pub modes: usize,
    pub amplitude: f64,
    /// Periodic r(s), giving r(s0) = r(s1).
    pub closed: bool,
    pub s0: f64,
    pub s1: f64,
}

impl Default for FieldConfig {
    fn default() -> Self {
        Self {
            modes: 3,
            amplitude: 1.0,
            closed: false,
            s0: 0.0,
            s1: 1.0,
        }
    }
}

/// Σ_m a_m sin(m·θ + φ_m).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
struct Series {
    terms: Vec<(f64, f64)>,
}

impl Series {
    fn random(rng: &mut ChaCha8Rng, modes: usize, amplitude: f64) -> Self {
        let terms = (1..=modes)
            .map(|m| {
                let a = amplitude * rng.random_range(-1.0..1.0) / m as f64;
                (a, rng.random_range(0.0..2.0 * PI))
            })
            .collect();
        Self { terms }
    }

    fn eval(&self, theta: f64) -> f64 {
        self.terms
            .iter()
            .enumerate()
            .map(|(i, (a, p))| a * ((i + 1) as f64 * theta + p).sin())
            .sum()
    }
}

/// A seeded draw of A_j^k(s), r(s), x^j(r) and ω^k(r).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RandomField {
    config: FieldConfig,
    a: Vec<Series>,
    r: Series,
    x: [Series; 2],
    omega: Vec<Series>,
}

impl RandomField {
    pub fn new(seed: u64, config: &FieldConfig) -> Result<Self> {
        if config.modes == 0 || config.modes > MAX_MODES {
            return Err(Error::InvalidParameter(format!(
                "modes must lie in 1..={MAX_MODES}, got {}",
                config.modes
            )));
        }
        if !(config.amplitude.is_finite() && config.amplitude >= 0.0) {
            return Err(Error::InvalidParameter(
                "amplitude must be finite and non-negative".into(),
            ));
        }
        ProperTimeGrid::new(config.s0, config.s1, 1)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (m, amp) = (config.modes, config.amplitude);
        let a = (0..6).map(|_| Series::random(&mut rng, m, amp)).collect();
        let r = Series::random(&mut rng, m, 1.0);
        let x = [Series::random(&mut rng, m, 1.0), Series::random(&mut rng, m, 1.0)];
        let omega = (0..3).map(|_| Series::random(&mut rng, m, 1.0)).collect();
        Ok(Self {
            config: *config,
            a,
            r,
            x,
            omega,
        })
    }

    pub fn config(&self) -> &FieldConfig {
        &self.config
    }

    fn phase(&self, s: f64) -> f64 {
        2.0 * PI * (s - self.config.s0) / (self.config.s1 - self.config.s0)
    }

    pub fn field(&self, s: f64) -> [Su2; 2] {
        let th = self.phase(s);
        [0, 1].map(|j| [0, 1, 2].map(|k| self.a[3 * j + k].eval(th)))
    }

    pub fn r(&self, s: f64) -> f64 {
        let th = self.phase(s);
        let wobble = self.r.eval(th);
        if self.config.closed {
            wobble
        } else {
            th / (2.0 * PI) + 0.3 * wobble
        }
    }

    pub fn x(&self, r: f64) -> [f64; 2] {
        [self.x[0].eval(r), self.x[1].eval(r)]
    }

    pub fn omega(&self, r: f64) -> Su2 {
        [0, 1, 2].map(|k| self.omega[k].eval(r))
    }

    pub fn sample(&self, steps: usize) -> Result<(GaugeFieldSample, CurveSpec)> {
        let grid = ProperTimeGrid::new(self.config.s0, self.config.s1, steps)?;
        let nodes = grid.nodes();
        let field = GaugeFieldSample::new(grid, nodes.iter().map(|&s| self.field(s)).collect())?;
        let r: Vec<f64> = nodes.iter().map(|&s| self.r(s)).collect();
        let mut r = r;
        if self.config.closed {
            r[steps] = r[0];
        }
        let x: Vec<[f64; 2]> = r.iter().map(|&v| self.x(v)).collect();
        let curve = CurveSpec {
            x1: x.iter().map(|p| p[0]).collect(),
            x2: x.iter().map(|p| p[1]).collect(),
            r,
        };
        Ok((field, curve))
    }
}

/// Least-squares slope of log y against log x.
pub(crate) fn log_slope(x: &[f64], y: &[f64]) -> f64 {
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.max(f64::MIN_POSITIVE).ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let num: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let den: f64 = lx.iter().map(|a| (a - mx).powi(2)).sum();
    num / den
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChiralStudy {
    pub seed: u64,
    pub steps: Vec<usize>,
    pub residuals: Vec<f64>,
    /// Slope of log residual against log Δs.
    pub order: f64,
    pub covariant_residuals: Vec<f64>,
    pub covariant_order: f64,
}

pub fn chiral_convergence(seed: u64, config: &FieldConfig, steps: &[usize]) -> Result<ChiralStudy> {
    if steps.len() < 2 {
        return Err(Error::InvalidParameter(
            "a convergence study needs at least two grids".into(),
        ));
    }
    let f = RandomField::new(seed, config)?;
    let omega = |r: f64| f.omega(r);
    let mut residuals = vec![];
    let mut covariant_residuals = vec![];
    for &n in steps {
        let (a, c) = f.sample(n)?;
        residuals.push(chiral_residual_with(&a, &c, &omega, GaugeLaw::AsPrinted)?);
        covariant_residuals.push(chiral_residual_with(&a, &c, &omega, GaugeLaw::Covariant)?);
    }
    let ds: Vec<f64> = steps.iter().map(|&n| (config.s1 - config.s0) / n as f64).collect();
    Ok(ChiralStudy {
        seed,
        steps: steps.to_vec(),
        order: log_slope(&ds, &residuals),
        covariant_order: log_slope(&ds, &covariant_residuals),
        residuals,
        covariant_residuals,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RefinementStudy {
    pub steps: Vec<usize>,
    /// ‖W(2n) − W(n)‖ for each n.
    pub differences: Vec<f64>,
    pub order: f64,
}

pub fn refinement_study(seed: u64, config: &FieldConfig, steps: &[usize]) -> Result<RefinementStudy> {
    if steps.len() < 2 {
        return Err(Error::InvalidParameter(
            "a refinement study needs at least two grids".into(),
        ));
    }
    let f = RandomField::new(seed, config)?;
    let line = |n: usize| -> Result<_> {
        let (a, c) = f.sample(n)?;
        wilson_line(&a, &c)
    };
    let differences = steps
        .iter()
        .map(|&n| Ok(line(2 * n)?.dist(&line(n)?)))
        .collect::<Result<Vec<f64>>>()?;
    let ds: Vec<f64> = steps.iter().map(|&n| 1.0 / n as f64).collect();
    Ok(RefinementStudy {
        steps: steps.to_vec(),
        order: log_slope(&ds, &differences),
        differences,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_and_closed() {
        let c = FieldConfig::default();
        assert_eq!(RandomField::new(7, &c).unwrap(), RandomField::new(7, &c).unwrap());
        assert_ne!(RandomField::new(7, &c).unwrap(), RandomField::new(8, &c).unwrap());
        let closed = FieldConfig { closed: true, ..c };
        let (_, curve) = RandomField::new(7, &closed).unwrap().sample(50).unwrap();
        assert!(curve.is_closed());
        let (_, curve) = RandomField::new(7, &c).unwrap().sample(50).unwrap();
        assert!(!curve.is_closed());
        assert!(RandomField::new(1, &FieldConfig { modes: 6, ..c }).is_err());
    }

    #[test]
    fn wilson_refinement_is_second_order() {
        let s = refinement_study(4, &FieldConfig::default(), &[100, 200, 400]).unwrap();
        assert!(s.order >= 1.9, "{s:?}");
    }

    #[test]
    fn covariant_law_converges() {
        let s = chiral_convergence(7, &FieldConfig::default(), &CHIRAL_STEPS).unwrap();
        assert!(s.covariant_order >= 0.9, "{s:?}");
        assert!(s.covariant_residuals[3] < s.covariant_residuals[0]);
    }
}
