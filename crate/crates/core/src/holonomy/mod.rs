//! Discretized path-ordered Wilson lines along a proper-time grid, gauge
//! transformations of su(2) fields and the chiral covariance checks.
//!
//! Field components are contracted with the anti-Hermitian generators
//! i·t^a, so every cell factor exp(Σ_j A_j Δx^j) lies in SU(2).

mod random;

use serde::{Deserialize, Serialize};

use crate::algebra::mat_exp;
use crate::algebra::matrix::SquareMatrixC;
use crate::algebra::su2::{anti_hermitian_element, su2_generators};
use crate::error::{Error, Result};

pub use random::{
    chiral_convergence, refinement_study, ChiralStudy, FieldConfig, RandomField, RefinementStudy, CHIRAL_STEPS,
};

/// Three real components of an su(2) element in the i·t^a basis.
pub type Su2 = [f64; 3];

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProperTimeGrid {
    pub s0: f64,
    pub s1: f64,
    pub steps: usize,
}

impl ProperTimeGrid {
    pub fn new(s0: f64, s1: f64, steps: usize) -> Result<Self> {
        let g = Self { s0, s1, steps };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.s0.is_finite() && self.s1.is_finite() && self.s0 < self.s1) {
            return Err(Error::Input(format!(
                "grid needs finite s0 < s1, got [{}, {}]",
                self.s0, self.s1
            )));
        }
        if self.steps == 0 {
            return Err(Error::Input("grid needs at least one step".into()));
        }
        Ok(())
    }

    pub fn ds(&self) -> f64 {
        (self.s1 - self.s0) / self.steps as f64
    }

    pub fn node(&self, i: usize) -> f64 {
        if i == self.steps {
            self.s1
        } else {
            self.s0 + i as f64 * self.ds()
        }
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..=self.steps).map(|i| self.node(i)).collect()
    }
}

/// A₁ and A₂ at every grid node.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GaugeFieldSample {
    pub grid: ProperTimeGrid,
    pub values: Vec<[Su2; 2]>,
}

impl GaugeFieldSample {
    pub fn new(grid: ProperTimeGrid, values: Vec<[Su2; 2]>) -> Result<Self> {
        let s = Self { grid, values };
        s.validate()?;
        Ok(s)
    }

    pub fn zero(grid: ProperTimeGrid) -> Self {
        Self {
            grid,
            values: vec![[[0.0; 3]; 2]; grid.steps + 1],
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.grid.validate()?;
        if self.values.len() != self.grid.steps + 1 {
            return Err(Error::Input(format!(
                "field has {} nodes, grid has {}",
                self.values.len(),
                self.grid.steps + 1
            )));
        }
        if self.values.iter().flatten().flatten().any(|v| !v.is_finite()) {
            return Err(Error::Input("field has non-finite components".into()));
        }
        Ok(())
    }
}

/// Curve x^j(r(s)) sampled at the grid nodes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurveSpec {
    pub r: Vec<f64>,
    pub x1: Vec<f64>,
    pub x2: Vec<f64>,
}

impl CurveSpec {
    pub fn validate(&self, grid: &ProperTimeGrid) -> Result<()> {
        let n = grid.steps + 1;
        if self.r.len() != n || self.x1.len() != n || self.x2.len() != n {
            return Err(Error::Input(format!(
                "curve has {}/{}/{} samples, grid has {n} nodes",
                self.r.len(),
                self.x1.len(),
                self.x2.len()
            )));
        }
        if self.r.iter().chain(&self.x1).chain(&self.x2).any(|v| !v.is_finite()) {
            return Err(Error::Input("curve has non-finite samples".into()));
        }
        Ok(())
    }

    pub fn is_closed(&self) -> bool {
        match (self.r.first(), self.r.last()) {
            (Some(a), Some(b)) => (a - b).abs() <= 1e-12,
            _ => false,
        }
    }
}

/// File layout `{grid, A, curve}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HolonomySample {
    pub grid: ProperTimeGrid,
    #[serde(rename = "A")]
    pub a: Vec<[Su2; 2]>,
    pub curve: CurveSpec,
}

impl HolonomySample {
    pub fn new(field: &GaugeFieldSample, curve: CurveSpec) -> Result<Self> {
        curve.validate(&field.grid)?;
        Ok(Self {
            grid: field.grid,
            a: field.values.clone(),
            curve,
        })
    }

    pub fn field(&self) -> Result<GaugeFieldSample> {
        GaugeFieldSample::new(self.grid, self.a.clone())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let s: Self = serde_json::from_str(text).map_err(|e| Error::parse(e.line(), e.column(), e.to_string()))?;
        s.field()?;
        s.curve.validate(&s.grid)?;
        Ok(s)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("sample serializes")
    }
}

fn check(a: &GaugeFieldSample, c: &CurveSpec) -> Result<()> {
    a.validate()?;
    c.validate(&a.grid)
}

fn add(u: Su2, v: Su2) -> Su2 {
    [u[0] + v[0], u[1] + v[1], u[2] + v[2]]
}

fn scale(u: Su2, s: f64) -> Su2 {
    u.map(|x| x * s)
}

/// Components of the su(2) part of a 2×2 matrix in the i·t^a basis.
fn project(m: &SquareMatrixC) -> Su2 {
    let t = su2_generators();
    [0, 1, 2].map(|b| 2.0 * (m * &t[b]).trace().im)
}

fn cell_factor(x: Su2) -> Result<SquareMatrixC> {
    mat_exp(&anti_hermitian_element(x))
}

/// Σ_j A_j Δx^j on cell m, with A at the cell midpoint taken as the mean of
/// the two node values.
fn cell_generator(a: &GaugeFieldSample, c: &CurveSpec, m: usize) -> Su2 {
    let dx = [c.x1[m + 1] - c.x1[m], c.x2[m + 1] - c.x2[m]];
    let mut out = [0.0; 3];
    for (j, d) in dx.iter().enumerate() {
        let mid = scale(add(a.values[m][j], a.values[m + 1][j]), 0.5);
        out = add(out, scale(mid, *d));
    }
    out
}

fn ordered_product(gens: impl Iterator<Item = Su2>) -> Result<SquareMatrixC> {
    let mut w = SquareMatrixC::identity(2);
    for x in gens {
        w = &cell_factor(x)? * &w;
    }
    Ok(w)
}

/// Ordered product over cells `from..to`, later cells multiplying on the left.
pub fn wilson_line_cells(a: &GaugeFieldSample, c: &CurveSpec, from: usize, to: usize) -> Result<SquareMatrixC> {
    check(a, c)?;
    if from > to || to > a.grid.steps {
        return Err(Error::Input(format!(
            "cell range {from}..{to} outside 0..{}",
            a.grid.steps
        )));
    }
    ordered_product((from..to).map(|m| cell_generator(a, c, m)))
}

pub fn wilson_line(a: &GaugeFieldSample, c: &CurveSpec) -> Result<SquareMatrixC> {
    wilson_line_cells(a, c, 0, a.grid.steps)
}

/// U = exp(−ω) with ω contracted with i·t^a.
pub fn gauge_element(w: Su2) -> Result<SquareMatrixC> {
    mat_exp(&anti_hermitian_element(w).scale_re(-1.0))
}

/// Per-node pieces of a gauge transformation: U A_j U⁻¹ and U dU⁻¹/ds.
struct GaugeParts {
    conj: Vec<[Su2; 2]>,
    inhom: Vec<Su2>,
}

fn gauge_parts(a: &GaugeFieldSample, omega: &[Su2]) -> Result<GaugeParts> {
    a.validate()?;
    let n = a.grid.steps + 1;
    if omega.len() != n {
        return Err(Error::Input(format!(
            "gauge function has {} nodes, grid has {n}",
            omega.len()
        )));
    }
    if omega.iter().flatten().any(|v| !v.is_finite()) {
        return Err(Error::Input("gauge function has non-finite components".into()));
    }
    let u: Vec<SquareMatrixC> = omega.iter().map(|&w| gauge_element(w)).collect::<Result<_>>()?;
    let u_inv: Vec<SquareMatrixC> = u.iter().map(|m| m.adjoint()).collect();
    let ds = a.grid.ds();
    let d_inv = |i: usize| -> SquareMatrixC {
        if n == 2 {
            (&u_inv[1] - &u_inv[0]).scale_re(1.0 / ds)
        } else if i == 0 {
            (&(&u_inv[1].scale_re(4.0) - &u_inv[0].scale_re(3.0)) - &u_inv[2]).scale_re(0.5 / ds)
        } else if i == n - 1 {
            (&(&u_inv[i].scale_re(3.0) - &u_inv[i - 1].scale_re(4.0)) + &u_inv[i - 2]).scale_re(0.5 / ds)
        } else {
            (&u_inv[i + 1] - &u_inv[i - 1]).scale_re(0.5 / ds)
        }
    };
    let mut conj = Vec::with_capacity(n);
    let mut inhom = Vec::with_capacity(n);
    for i in 0..n {
        let c = a.values[i].map(|aj| project(&(&(&u[i] * &anti_hermitian_element(aj)) * &u_inv[i])));
        conj.push(c);
        inhom.push(project(&(&u[i] * &d_inv(i))));
    }
    Ok(GaugeParts { conj, inhom })
}

/// A′_j = U A_j U⁻¹ + U dU⁻¹/ds at every node, U = exp(−ω), with the
/// derivative by central differences (second-order one-sided at the ends).
pub fn gauge_transform(a: &GaugeFieldSample, omega: &[Su2]) -> Result<GaugeFieldSample> {
    let p = gauge_parts(a, omega)?;
    let values = p
        .conj
        .iter()
        .zip(&p.inhom)
        .map(|(c, g)| [add(c[0], *g), add(c[1], *g)])
        .collect();
    GaugeFieldSample::new(a.grid, values)
}

/// How the gauge-transformed Wilson line is formed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GaugeLaw {
    /// Wilson line of `gauge_transform(A, ω)`.
    AsPrinted,
    /// Cell generator U(Σ_j A_j Δx^j)U⁻¹ − (U dU⁻¹/ds)Δs: the inhomogeneous
    /// term enters once per cell with the sign that makes the
    /// transformation law exact for this ordering.
    Covariant,
}

fn transformed_line(a: &GaugeFieldSample, c: &CurveSpec, omega: &[Su2], law: GaugeLaw) -> Result<SquareMatrixC> {
    check(a, c)?;
    let p = gauge_parts(a, omega)?;
    let ds = a.grid.ds();
    let gens = (0..a.grid.steps).map(|m| {
        let dx = [c.x1[m + 1] - c.x1[m], c.x2[m + 1] - c.x2[m]];
        let g_mid = scale(add(p.inhom[m], p.inhom[m + 1]), 0.5);
        let mut out = [0.0; 3];
        for (j, d) in dx.iter().enumerate() {
            let mid = scale(add(p.conj[m][j], p.conj[m + 1][j]), 0.5);
            out = add(out, scale(mid, *d));
        }
        match law {
            GaugeLaw::AsPrinted => add(out, scale(g_mid, dx[0] + dx[1])),
            GaugeLaw::Covariant => add(out, scale(g_mid, -ds)),
        }
    });
    ordered_product(gens)
}

fn omega_on_curve(c: &CurveSpec, omega: &dyn Fn(f64) -> Su2) -> Vec<Su2> {
    c.r.iter().map(|&r| omega(r)).collect()
}

/// ‖W[A′] − U(ω(r₁)) W[A] U⁻¹(ω(r₀))‖ with a(s) = ω(r(s)).
pub fn chiral_residual_with(
    a: &GaugeFieldSample,
    c: &CurveSpec,
    omega: &dyn Fn(f64) -> Su2,
    law: GaugeLaw,
) -> Result<f64> {
    check(a, c)?;
    let om = omega_on_curve(c, omega);
    let w = wilson_line(a, c)?;
    let w_t = transformed_line(a, c, &om, law)?;
    let u1 = gauge_element(om[om.len() - 1])?;
    let u0 = gauge_element(om[0])?;
    Ok(w_t.dist(&(&(&u1 * &w) * &u0.adjoint())))
}

pub fn chiral_residual(a: &GaugeFieldSample, c: &CurveSpec, omega: &dyn Fn(f64) -> Su2) -> Result<f64> {
    chiral_residual_with(a, c, omega, GaugeLaw::AsPrinted)
}

/// |Tr W[A′] − Tr W[A]| on a closed curve.
pub fn loop_trace_invariance_with(
    a: &GaugeFieldSample,
    c: &CurveSpec,
    omega: &dyn Fn(f64) -> Su2,
    law: GaugeLaw,
) -> Result<f64> {
    check(a, c)?;
    if !c.is_closed() {
        return Err(Error::Input(
            "loop trace invariance needs a closed curve (r(s0) = r(s1))".into(),
        ));
    }
    let om = omega_on_curve(c, omega);
    let w = wilson_line(a, c)?;
    let w_t = transformed_line(a, c, &om, law)?;
    Ok((w_t.trace() - w.trace()).norm())
}

pub fn loop_trace_invariance(a: &GaugeFieldSample, c: &CurveSpec, omega: &dyn Fn(f64) -> Su2) -> Result<f64> {
    loop_trace_invariance_with(a, c, omega, GaugeLaw::AsPrinted)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::matrix::C64;

    fn grid(n: usize) -> ProperTimeGrid {
        ProperTimeGrid::new(0.0, 1.0, n).unwrap()
    }

    fn straight(n: usize, len: f64) -> CurveSpec {
        let g = grid(n);
        CurveSpec {
            r: g.nodes(),
            x1: g.nodes().iter().map(|s| s * len).collect(),
            x2: vec![0.0; n + 1],
        }
    }

    #[test]
    fn zero_field_is_identity() {
        let a = GaugeFieldSample::zero(grid(10));
        assert_eq!(wilson_line(&a, &straight(10, 2.0)).unwrap(), SquareMatrixC::identity(2));
    }

    #[test]
    fn constant_field_closed_form() {
        let (alpha, len, n) = (0.7, 3.0, 50);
        let a = GaugeFieldSample::new(grid(n), vec![[[0.0, 0.0, alpha], [0.0; 3]]; n + 1]).unwrap();
        let w = wilson_line(&a, &straight(n, len)).unwrap();
        let want = mat_exp(&anti_hermitian_element([0.0, 0.0, alpha * len])).unwrap();
        assert!(w.dist(&want) < 1e-10);
        let t3 = &su2_generators()[2];
        let lit = mat_exp(&t3.scale(C64::new(0.0, alpha * len))).unwrap();
        assert!(w.dist(&lit) < 1e-10);
    }

    #[test]
    fn composition_and_unitarity() {
        let f = RandomField::new(3, &FieldConfig::default()).unwrap();
        let (a, c) = f.sample(120).unwrap();
        let w = wilson_line(&a, &c).unwrap();
        let split = &wilson_line_cells(&a, &c, 50, 120).unwrap() * &wilson_line_cells(&a, &c, 0, 50).unwrap();
        assert!(w.dist(&split) < 1e-12);
        assert!((&w * &w.adjoint()).dist(&SquareMatrixC::identity(2)) < 1e-10);
        assert!(wilson_line_cells(&a, &c, 5, 121).is_err());
    }

    #[test]
    fn gauge_examples() {
        let f = RandomField::new(5, &FieldConfig::default()).unwrap();
        let (a, _) = f.sample(200).unwrap();
        let zero = vec![[0.0; 3]; 201];
        let same = gauge_transform(&a, &zero).unwrap();
        for (x, y) in same
            .values
            .iter()
            .flatten()
            .flatten()
            .zip(a.values.iter().flatten().flatten())
        {
            assert!((x - y).abs() < 1e-14);
        }
        let omega: Vec<Su2> = a.grid.nodes().iter().map(|&s| f.omega(s)).collect();
        let neg: Vec<Su2> = omega.iter().map(|w| scale(*w, -1.0)).collect();
        let back = gauge_transform(&gauge_transform(&a, &omega).unwrap(), &neg).unwrap();
        let err = |b: &GaugeFieldSample| {
            b.values
                .iter()
                .flatten()
                .flatten()
                .zip(a.values.iter().flatten().flatten())
                .map(|(x, y)| (x - y).abs())
                .fold(0.0, f64::max)
        };
        let e1 = err(&back);
        let (a2, _) = f.sample(400).unwrap();
        let om2: Vec<Su2> = a2.grid.nodes().iter().map(|&s| f.omega(s)).collect();
        let neg2: Vec<Su2> = om2.iter().map(|w| scale(*w, -1.0)).collect();
        let back2 = gauge_transform(&gauge_transform(&a2, &om2).unwrap(), &neg2).unwrap();
        let e2 = back2
            .values
            .iter()
            .flatten()
            .flatten()
            .zip(a2.values.iter().flatten().flatten())
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max);
        assert!(e1 < 1e-10 && e2 < 1e-10, "{e1} {e2}");
        assert!(gauge_transform(&a, &zero[..5]).is_err());
    }

    #[test]
    fn pure_gauge_loop_is_trivial() {
        let n = 400;
        let g = grid(n);
        let th: Vec<f64> = g.nodes().iter().map(|s| 2.0 * std::f64::consts::PI * s).collect();
        let c = CurveSpec {
            r: th.iter().map(|t| t.sin()).collect(),
            x1: th.iter().map(|t| t.cos()).collect(),
            x2: th.iter().map(|t| (2.0 * t).sin()).collect(),
        };
        assert!(c.is_closed());
        let omega: Vec<Su2> = g.nodes().iter().map(|s| [0.3 * s, -0.8 * s, 0.5 * s]).collect();
        let a = gauge_transform(&GaugeFieldSample::zero(g), &omega).unwrap();
        let w = wilson_line(&a, &c).unwrap();
        assert!(
            w.dist(&SquareMatrixC::identity(2)) < 1e-6,
            "{}",
            w.dist(&SquareMatrixC::identity(2))
        );
    }

    #[test]
    fn chiral_residual_cases() {
        let f = RandomField::new(2, &FieldConfig::default()).unwrap();
        let (a, c) = f.sample(100).unwrap();
        assert_eq!(chiral_residual(&a, &c, &|_| [0.0; 3]).unwrap(), 0.0);
        let k = [0.4, -1.1, 0.9];
        assert!(chiral_residual(&a, &c, &|_| k).unwrap() <= 1e-10);
        let cov = chiral_residual_with(&a, &c, &|r| f.omega(r), GaugeLaw::Covariant).unwrap();
        let printed = chiral_residual(&a, &c, &|r| f.omega(r)).unwrap();
        assert!(cov < 1e-2 && printed > 10.0 * cov, "{cov} {printed}");
        assert!(loop_trace_invariance(&a, &c, &|_| k).is_err());
        let closed = FieldConfig {
            closed: true,
            ..FieldConfig::default()
        };
        let f = RandomField::new(2, &closed).unwrap();
        let (a, c) = f.sample(100).unwrap();
        assert_eq!(loop_trace_invariance(&a, &c, &|_| [0.0; 3]).unwrap(), 0.0);
        assert!(loop_trace_invariance(&a, &c, &|_| k).unwrap() <= 1e-10);
        assert!(loop_trace_invariance_with(&a, &c, &|r| f.omega(r), GaugeLaw::Covariant).unwrap() < 1e-2);
    }

    #[test]
    fn sample_json_roundtrip() {
        let f = RandomField::new(9, &FieldConfig::default()).unwrap();
        let (a, c) = f.sample(20).unwrap();
        let s = HolonomySample::new(&a, c).unwrap();
        let back = HolonomySample::from_json(&s.to_json()).unwrap();
        assert_eq!(back, s);
        assert!(HolonomySample::from_json("{\"grid\": 1}").is_err());
        let mut bad = s.clone();
        bad.curve.x1.pop();
        assert!(HolonomySample::from_json(&bad.to_json()).is_err());
    }
}
