//! Adaptive Dormand–Prince 5(4) transport along polylines in the x-plane.

use nalgebra::Matrix2;
use serde::{Deserialize, Serialize};

use super::{pq_matrices, KZParams};
use crate::algebra::matrix::{SquareMatrixC, C64};
use crate::error::{Error, Result};

pub const DEFAULT_TOLERANCE: f64 = 1e-10;
/// Smallest step, relative to max(1, |x|), before integration gives up.
pub const MIN_STEP: f64 = 1e-14;
/// Closest approach to a singular point allowed for a path.
pub const SINGULAR_CLEARANCE: f64 = 1e-6;
const MAX_STEPS: usize = 2_000_000;

/// Polyline of x-values avoiding the singular points 0 and 1.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ODEPath {
    waypoints: Vec<C64>,
    tolerance: f64,
}

fn segment_distance(a: C64, b: C64, p: C64) -> f64 {
    let d = b - a;
    let len2 = d.norm_sqr();
    if len2 == 0.0 {
        return (p - a).norm();
    }
    let s = (((p - a) * d.conj()).re / len2).clamp(0.0, 1.0);
    (a + d * s - p).norm()
}

impl ODEPath {
    pub fn new(waypoints: Vec<C64>, tolerance: f64) -> Result<Self> {
        if waypoints.is_empty() {
            return Err(Error::InvalidParameter("path needs at least one waypoint".into()));
        }
        if !(tolerance > 0.0 && tolerance <= 1e-6) {
            return Err(Error::InvalidParameter(format!(
                "tolerance must lie in (0, 1e-6], got {tolerance}"
            )));
        }
        let singular = [C64::new(0.0, 0.0), C64::new(1.0, 0.0)];
        for (i, w) in waypoints.iter().enumerate() {
            if !(w.re.is_finite() && w.im.is_finite()) {
                return Err(Error::InvalidParameter(format!("waypoint {i} is not finite")));
            }
            if let Some(s) = singular.iter().find(|s| (w - *s).norm() < SINGULAR_CLEARANCE) {
                return Err(Error::InvalidParameter(format!(
                    "waypoint {i} = {w} is within 1e-6 of x = {}",
                    s.re
                )));
            }
        }
        for (i, pair) in waypoints.windows(2).enumerate() {
            if let Some(s) = singular
                .iter()
                .find(|s| segment_distance(pair[0], pair[1], **s) < SINGULAR_CLEARANCE)
            {
                return Err(Error::InvalidParameter(format!(
                    "segment {i} ({} -> {}) passes through x = {}",
                    pair[0], pair[1], s.re
                )));
            }
        }
        Ok(Self { waypoints, tolerance })
    }

    pub fn waypoints(&self) -> &[C64] {
        &self.waypoints
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    pub fn reversed(&self) -> Self {
        let mut w = self.waypoints.clone();
        w.reverse();
        Self {
            waypoints: w,
            tolerance: self.tolerance,
        }
    }
}

type M2 = Matrix2<C64>;

fn to_m2(m: &SquareMatrixC) -> Result<M2> {
    if m.dim() != 2 {
        return Err(Error::InvalidParameter(format!(
            "expected a 2x2 matrix, got {0}x{0}",
            m.dim()
        )));
    }
    if !m.is_finite() {
        return Err(Error::InvalidParameter("matrix has non-finite entries".into()));
    }
    Ok(M2::new(m.get(0, 0), m.get(0, 1), m.get(1, 0), m.get(1, 1)))
}

fn from_m2(m: &M2) -> SquareMatrixC {
    SquareMatrixC::from_fn(2, |i, j| m[(i, j)])
}

const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
const B5: [f64; 7] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
    0.0,
];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

struct System {
    p: M2,
    q: M2,
}

impl System {
    fn coeff(&self, x: C64) -> M2 {
        self.p / x + self.q / (x - C64::new(1.0, 0.0))
    }
}

fn fail(x: C64, seg: usize, a: C64, b: C64, msg: &str) -> Error {
    Error::Integration {
        near: format!("{x}"),
        msg: format!("{msg} on segment {seg} between waypoints {a} and {b}"),
    }
}

/// Transport along the straight segment a→b, parametrized by s ∈ [0, 1].
fn segment(sys: &System, seg: usize, a: C64, b: C64, g: M2, tol: f64, steps: &mut usize) -> Result<M2> {
    let d = b - a;
    let len = d.norm();
    if len == 0.0 {
        return Ok(g);
    }
    let f = |s: f64, y: &M2| -> M2 { sys.coeff(a + d * s) * y * d };
    let mut s = 0.0;
    let mut y = g;
    let mut h = (0.05 / len).min(1.0);
    let mut k1 = f(0.0, &y);
    while s < 1.0 {
        let x = a + d * s;
        if h * len < MIN_STEP * x.norm().max(1.0) {
            return Err(fail(x, seg, a, b, "step size underflow"));
        }
        *steps += 1;
        if *steps > MAX_STEPS {
            return Err(fail(x, seg, a, b, "step count limit reached"));
        }
        let h_try = h.min(1.0 - s);
        let mut k = [k1; 7];
        for i in 1..7 {
            let mut yi = y;
            for (j, kj) in k.iter().enumerate().take(i) {
                if A[i][j] != 0.0 {
                    yi += kj * C64::new(h_try * A[i][j], 0.0);
                }
            }
            k[i] = f(s + C[i] * h_try, &yi);
        }
        let mut y5 = y;
        let mut err = M2::zeros();
        for i in 0..7 {
            y5 += k[i] * C64::new(h_try * B5[i], 0.0);
            err += k[i] * C64::new(h_try * (B5[i] - B4[i]), 0.0);
        }
        let mut e: f64 = 0.0;
        for i in 0..4 {
            let scale = tol * (1.0 + y[i].norm().max(y5[i].norm()));
            e = e.max(err[i].norm() / scale);
        }
        if !e.is_finite() || y5.iter().any(|v| !(v.re.is_finite() && v.im.is_finite())) {
            return Err(fail(x, seg, a, b, "non-finite state"));
        }
        if e <= 1.0 {
            s = if h_try == 1.0 - s { 1.0 } else { s + h_try };
            y = y5;
            k1 = k[6];
        }
        let factor = if e == 0.0 {
            5.0
        } else {
            (0.9 * e.powf(-0.2)).clamp(0.2, 5.0)
        };
        h = h_try * factor;
    }
    Ok(y)
}

/// Transport of `g0` along `path` for dG/dx = (P/x + Q/(x−1)) G with
/// arbitrary 2×2 coefficients.
pub fn integrate_system(
    p: &SquareMatrixC,
    q: &SquareMatrixC,
    path: &ODEPath,
    g0: &SquareMatrixC,
) -> Result<SquareMatrixC> {
    let sys = System {
        p: to_m2(p)?,
        q: to_m2(q)?,
    };
    let mut g = to_m2(g0)?;
    let mut steps = 0;
    for (i, pair) in path.waypoints.windows(2).enumerate() {
        g = segment(&sys, i, pair[0], pair[1], g, path.tolerance, &mut steps)?;
    }
    Ok(from_m2(&g))
}

/// Transport of `g0` along `path` under the four-point KZ system.
#[allow(non_snake_case)]
pub fn integrate_G(p: KZParams, path: &ODEPath, g0: &SquareMatrixC) -> Result<SquareMatrixC> {
    let (pm, qm) = pq_matrices(p);
    integrate_system(&pm, &qm, path, g0)
}
