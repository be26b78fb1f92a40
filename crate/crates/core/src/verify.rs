//! Residual certification of assembled solutions.
//!
//! The field equation is checked along two independent routes:
//!
//! * analytically, in the drift frame, as the horizontal Jacobian
//!   `J(p + V y, lap(p) + beta y)` built from first-derivative jets once the
//!   Helmholtz identity has removed the horizontal Laplacian of `F`;
//! * by brute force, assembling every term of the lab-frame equation from
//!   nested finite differences of scalar `p(t, x, y, z)` evaluations.
//!
//! The boundary operator `p_zt - p_y p_zx + p_x p_zy` is evaluated from
//! analytic jets at the bottom and lid, and compared with each family's
//! closed forms in the interior. All residuals are normalised by the sum of
//! the magnitudes of the terms that make them up.

use std::collections::HashMap;
use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::families::{Perturbation, Solution};
use crate::helmholtz::HorizontalMode;
use crate::model::ValidatedSpec;

const TINY: f64 = 1e-300;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    pub analytic: f64,
    pub fd: f64,
    pub bc: f64,
    pub bc_match: f64,
    pub helmholtz: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { analytic: 1e-10, fd: 1e-5, bc: 1e-12, bc_match: 1e-9, helmholtz: 1e-10 }
    }
}

/// Box for the random probe points; `z` is always stratified over the column.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Bounds {
    pub t: [f64; 2],
    pub x: [f64; 2],
    pub y: [f64; 2],
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SamplingPlan {
    pub n_points: usize,
    pub seed: u64,
    /// Finite-difference step in units of the field's length and time scales.
    pub fd_step: f64,
    pub tolerances: Tolerances,
    /// Defaults to `t in [0, 2 pi / (|V| kappa)]` (or `[0, 1]` when `V = 0`) and
    /// `x, y in [-2 pi / kappa, 2 pi / kappa]`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bounds: Option<Bounds>,
}

impl Default for SamplingPlan {
    fn default() -> Self {
        SamplingPlan { n_points: 1000, seed: 0, fd_step: 1e-3, tolerances: Tolerances::default(), bounds: None }
    }
}

impl SamplingPlan {
    pub fn check(&self) -> Result<()> {
        if self.n_points == 0 {
            return Err(Error::BadParameter("sampling plan needs at least one point".into()));
        }
        if !(self.fd_step > 0.0 && self.fd_step < 0.1) {
            return Err(Error::BadParameter(format!("fd_step must lie in (0, 0.1), got {}", self.fd_step)));
        }
        if let Some(b) = &self.bounds {
            for (name, [lo, hi]) in [("t", b.t), ("x", b.x), ("y", b.y)] {
                if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
                    return Err(Error::BadParameter(format!("bounds.{name} must be a finite [lo, hi] pair")));
                }
            }
        }
        Ok(())
    }

    pub fn bounds_for(&self, solution: &Solution) -> Bounds {
        self.bounds.unwrap_or_else(|| {
            let kappa = solution.kappa();
            let v = solution.phys().drift.abs();
            let period = if v > 0.0 { 2.0 * PI / (v * kappa) } else { 1.0 };
            let half = 2.0 * PI / kappa;
            Bounds { t: [0.0, period], x: [-half, half], y: [-half, half] }
        })
    }
}

/// Drift-frame Jacobian residual of the field equation.
pub fn pde_residual_analytic(solution: &Solution, t: f64, x: f64, y: f64, z: f64) -> Result<f64> {
    let st = solution.state(t, x, y, z)?;
    let phys = solution.phys();
    let (f, g, jet) = (st.f, st.g, st.horizontal);

    // A = p + V y, B = lap(p) + beta y = (f'' - kappa^2 f) F + (g'' + beta) y
    let a_s = f.value * jet.fs;
    let a_y = f.value * jet.fy + g.value + phys.drift;
    let c = st.f_stretch;
    let b_s = c * jet.fs;
    let b_y = c * jet.fy + st.g_vorticity;

    let jacobian = a_s * b_y - a_y * b_s;
    let scale = (a_s.abs() + a_y.abs()) * (b_s.abs() + b_y.abs());
    Ok(normalise(jacobian, scale))
}

fn normalise(value: f64, scale: f64) -> f64 {
    if value == 0.0 {
        0.0
    } else {
        value.abs() / (scale + TINY)
    }
}

/// Ratio of the step `k h` to `fd_step`, `k` being the fastest wavenumber
/// along an axis. With the default `fd_step` the extrapolated `O((k h)^4)`
/// truncation and the roundoff of third differences are both near `1e-6`.
pub const FD_STEP_SCALE: f64 = 12.0;

/// Finite-difference step per axis `[t, x, y, z]`.
pub fn fd_steps(solution: &Solution, fd_step: f64) -> [f64; 4] {
    let fd_step = FD_STEP_SCALE * fd_step;
    let kappa = solution.kappa();
    let drift = solution.phys().drift.abs();
    let h_t = if drift > 0.0 { fd_step / (kappa * drift) } else { fd_step };
    let h_xy = fd_step / kappa;
    let depth = solution.phys().depth;
    let spec = solution.spec();
    let mut vertical_wavenumber = (1.0 / depth).max(spec.spec().kz.abs()).max(solution.k().unwrap_or(0.0));
    if solution.family().get() == 1 {
        vertical_wavenumber = vertical_wavenumber.max(spec.kappa());
    }
    // the widest z stencil spans six steps and must fit in the column
    [h_t, h_xy, h_xy, (fd_step / vertical_wavenumber).min(depth / 6.0)]
}

/// How second derivatives along `z` are taken at a given depth.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum ZStencil {
    Central,
    Forward,
    Backward,
}

/// Weights of a derivative stencil in units of `1 / h^order`.
fn stencil(order: u8, z: ZStencil) -> &'static [(i32, f64)] {
    match (order, z) {
        (0, _) => &[(0, 1.0)],
        (1, _) => &[(-1, -0.5), (1, 0.5)],
        (2, ZStencil::Central) => &[(-2, 0.25), (0, -0.5), (2, 0.25)],
        (2, ZStencil::Forward) => &[(0, 2.0), (1, -5.0), (2, 4.0), (3, -1.0)],
        (2, ZStencil::Backward) => &[(0, 2.0), (-1, -5.0), (-2, 4.0), (-3, -1.0)],
        (3, _) => &[(-3, -0.125), (-1, 0.375), (1, -0.375), (3, 0.125)],
        _ => unreachable!("derivative order {order} not needed"),
    }
}

/// Scalar evaluations of `p` on an integer lattice around one point.
struct Probe<'a> {
    solution: &'a Solution,
    base: [f64; 4],
    steps: [f64; 4],
    z_stencil: ZStencil,
    cache: HashMap<[i32; 4], f64>,
}

impl<'a> Probe<'a> {
    fn new(solution: &'a Solution, base: [f64; 4], steps: [f64; 4]) -> Self {
        let depth = solution.phys().depth;
        let (z, h) = (base[3], steps[3]);
        // wide enough for the doubled step used in extrapolation
        let z_stencil = if z - 4.0 * h >= 0.0 && z + 4.0 * h <= depth {
            ZStencil::Central
        } else if z - 4.0 * h < 0.0 {
            ZStencil::Forward
        } else {
            ZStencil::Backward
        };
        Probe { solution, base, steps, z_stencil, cache: HashMap::new() }
    }

    fn value(&mut self, offset: [i32; 4]) -> Result<f64> {
        if let Some(v) = self.cache.get(&offset) {
            return Ok(*v);
        }
        let c: [f64; 4] = std::array::from_fn(|i| self.base[i] + f64::from(offset[i]) * self.steps[i]);
        let v = self.solution.stream(c[0], c[1], c[2], c[3])?;
        self.cache.insert(offset, v);
        Ok(v)
    }

    /// Mixed partial derivative of orders `[t, x, y, z]`, extrapolated from
    /// steps `h` and `2 h` to cancel the leading `h^2` error.
    fn derivative(&mut self, orders: [u8; 4]) -> Result<f64> {
        let fine = self.derivative_at(orders, 1)?;
        let coarse = self.derivative_at(orders, 2)?;
        Ok((4.0 * fine - coarse) / 3.0)
    }

    fn derivative_at(&mut self, orders: [u8; 4], scale: i32) -> Result<f64> {
        let axes: [&[(i32, f64)]; 4] = std::array::from_fn(|i| {
            stencil(orders[i], if i == 3 { self.z_stencil } else { ZStencil::Central })
        });
        let mut sum = 0.0;
        for &(ot, wt) in axes[0] {
            for &(ox, wx) in axes[1] {
                for &(oy, wy) in axes[2] {
                    for &(oz, wz) in axes[3] {
                        sum += wt * wx * wy * wz * self.value([ot, ox, oy, oz].map(|o| o * scale))?;
                    }
                }
            }
        }
        let denom: f64 = (0..4).map(|i| (f64::from(scale) * self.steps[i]).powi(i32::from(orders[i]))).product();
        Ok(sum / denom)
    }
}

/// Derivatives of `p` entering the lab-frame field equation.
struct FdDerivatives {
    lap_t: [f64; 3],
    lap_y: [f64; 3],
    lap_x: [f64; 3],
    p_x: f64,
    p_y: f64,
}

fn fd_derivatives(solution: &Solution, t: f64, x: f64, y: f64, z: f64, fd_step: f64) -> Result<FdDerivatives> {
    solution.phys().check_depth(z)?;
    let mut probe = Probe::new(solution, [t, x, y, z], fd_steps(solution, fd_step));
    let mut d = |orders: [u8; 4]| probe.derivative(orders);
    Ok(FdDerivatives {
        lap_t: [d([1, 2, 0, 0])?, d([1, 0, 2, 0])?, d([1, 0, 0, 2])?],
        lap_y: [d([0, 2, 1, 0])?, d([0, 0, 3, 0])?, d([0, 0, 1, 2])?],
        lap_x: [d([0, 3, 0, 0])?, d([0, 1, 2, 0])?, d([0, 1, 0, 2])?],
        p_x: d([0, 1, 0, 0])?,
        p_y: d([0, 0, 1, 0])?,
    })
}

/// All terms of the lab-frame field equation from finite differences:
/// `p_xxt, p_yyt, p_zzt`, then `p_x` times the three parts of `d/dy lap(p)`,
/// then `-p_y` times the three parts of `d/dx lap(p)`, then `beta p_x`.
pub fn pde_terms_fd(solution: &Solution, t: f64, x: f64, y: f64, z: f64, fd_step: f64) -> Result<[f64; 10]> {
    let d = fd_derivatives(solution, t, x, y, z, fd_step)?;
    Ok(assemble_terms(&d, solution.phys().beta))
}

fn assemble_terms(d: &FdDerivatives, beta: f64) -> [f64; 10] {
    let [a, b, c] = d.lap_t;
    let [e, f, g] = d.lap_y.map(|v| d.p_x * v);
    let [h, i, j] = d.lap_x.map(|v| -d.p_y * v);
    [a, b, c, e, f, g, h, i, j, beta * d.p_x]
}

/// Finite-difference residual normalised by the term magnitudes. The
/// advective part is scaled by `(|p_x| + |p_y|)` times the magnitudes of both
/// gradients of `lap(p)`, so that a point where one factor of every product
/// vanishes still has a meaningful scale.
pub fn pde_residual_fd(solution: &Solution, t: f64, x: f64, y: f64, z: f64, fd_step: f64) -> Result<f64> {
    let d = fd_derivatives(solution, t, x, y, z, fd_step)?;
    let beta = solution.phys().beta;
    let sum: f64 = assemble_terms(&d, beta).iter().sum();
    let abs_sum = |v: &[f64; 3]| v.iter().map(|x| x.abs()).sum::<f64>();
    let scale = abs_sum(&d.lap_t)
        + (d.p_x.abs() + d.p_y.abs()) * (abs_sum(&d.lap_x) + abs_sum(&d.lap_y))
        + (beta * d.p_x).abs();
    Ok(normalise(sum, scale))
}

/// Value of the boundary operator with the magnitude scale of its terms.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BcValue {
    pub value: f64,
    pub scale: f64,
}

impl BcValue {
    pub fn normalised(&self) -> f64 {
        normalise(self.value, self.scale)
    }
}

/// `p_zt - p_y p_zx + p_x p_zy` with `p_zt = -V p_zs`.
pub fn bc_operator(solution: &Solution, t: f64, x: f64, y: f64, z: f64) -> Result<BcValue> {
    let st = solution.state(t, x, y, z)?;
    let (f, g, jet) = (st.f, st.g, st.horizontal);
    let p_x = f.value * jet.fs;
    let p_y = f.value * jet.fy + g.value;
    let p_zx = f.dz * jet.fs;
    let p_zy = f.dz * jet.fy + g.dz;
    let p_zt = -solution.phys().drift * p_zx;
    let terms = [p_zt, -p_y * p_zx, p_x * p_zy];
    Ok(BcValue { value: terms.iter().sum(), scale: terms.iter().map(|v| v.abs()).sum() })
}

/// The same operator as the drift-frame Jacobian `J(p + V y, p_z)`.
pub fn bc_operator_drift(solution: &Solution, t: f64, x: f64, y: f64, z: f64) -> Result<BcValue> {
    let st = solution.state(t, x, y, z)?;
    let (f, g, jet) = (st.f, st.g, st.horizontal);
    let drift = solution.phys().drift;
    let a_s = f.value * jet.fs;
    let a_y = f.value * jet.fy + g.value + drift;
    let q_s = f.dz * jet.fs;
    let q_y = f.dz * jet.fy + g.dz;
    let value = a_s * q_y - a_y * q_s;
    let p_y = a_y - drift;
    let scale = (drift * q_s).abs() + (p_y * q_s).abs() + (a_s * q_y).abs();
    Ok(BcValue { value, scale })
}

pub fn bc_residual(solution: &Solution, t: f64, x: f64, y: f64, z: f64) -> Result<f64> {
    bc_operator(solution, t, x, y, z).map(|bc| bc.normalised())
}

/// Difference between the numeric boundary operator and its closed
/// form, relative to the operator's term magnitudes.
pub fn bc_match_residual(solution: &Solution, t: f64, x: f64, y: f64, z: f64) -> Result<f64> {
    let numeric = bc_operator(solution, t, x, y, z)?;
    let closed = solution.bc_closed_form(t, x, y, z)?;
    Ok(normalise(closed - numeric.value, numeric.scale))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Stratum {
    Bottom,
    Lid,
    Interior,
}

/// A probe point of a sampling plan.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ProbePoint {
    pub t: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
    pub stratum: Stratum,
}

impl ProbePoint {
    pub fn coords(&self) -> [f64; 4] {
        [self.t, self.x, self.y, self.z]
    }
}

/// Probe points: a quarter on the bottom, a quarter on the lid, the rest in
/// the interior. Some interior points sit within `1e-6` of vortex centers.
pub fn probe_points(solution: &Solution, plan: &SamplingPlan) -> Vec<ProbePoint> {
    let bounds = plan.bounds_for(solution);
    let depth = solution.phys().depth;
    let drift = solution.phys().drift;
    let centers = solution.mode().vortex_centers();
    let mut rng = ChaCha8Rng::seed_from_u64(plan.seed);
    let mut uniform = |[lo, hi]: [f64; 2]| if lo < hi { rng.gen_range(lo..hi) } else { lo };

    let mut points = Vec::with_capacity(plan.n_points);
    for i in 0..plan.n_points {
        let t = uniform(bounds.t);
        let mut x = uniform(bounds.x);
        let mut y = uniform(bounds.y);
        let (z, stratum) = match i % 4 {
            0 => (0.0, Stratum::Bottom),
            1 => (depth, Stratum::Lid),
            _ => (uniform([0.0, depth]), Stratum::Interior),
        };
        if !centers.is_empty() && i % 16 == 7 {
            let c = centers[(i / 16) % centers.len()];
            let radius = uniform([1e-9, 1e-6]);
            let angle = uniform([0.0, 2.0 * PI]);
            x = c[0] + radius * angle.cos() + drift * t;
            y = c[1] + radius * angle.sin();
        }
        points.push(ProbePoint { t, x, y, z, stratum });
    }
    points
}

/// Statistics of one check over all probe points it applies to.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckSummary {
    pub max: f64,
    pub mean: f64,
    pub tolerance: f64,
    pub count: usize,
    pub pass: bool,
    /// Residuals in ascending order.
    #[serde(skip)]
    pub residuals: Vec<f64>,
}

impl CheckSummary {
    pub fn from_residuals(mut residuals: Vec<f64>, tolerance: f64) -> Self {
        residuals.sort_by(f64::total_cmp);
        let count = residuals.len();
        let max = residuals.last().copied().unwrap_or(0.0);
        let mean = if count == 0 { 0.0 } else { residuals.iter().sum::<f64>() / count as f64 };
        let pass = max <= tolerance;
        CheckSummary { max, mean, tolerance, count, pass, residuals }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Checks {
    pub pde_analytic: CheckSummary,
    pub pde_fd: CheckSummary,
    pub bc_bottom: CheckSummary,
    pub bc_lid: CheckSummary,
    pub bc_interior_match: CheckSummary,
    pub helmholtz: CheckSummary,
}

impl Checks {
    pub fn iter(&self) -> impl Iterator<Item = (&'static str, &CheckSummary)> {
        [
            ("pde_analytic", &self.pde_analytic),
            ("pde_fd", &self.pde_fd),
            ("bc_bottom", &self.bc_bottom),
            ("bc_lid", &self.bc_lid),
            ("bc_interior_match", &self.bc_interior_match),
            ("helmholtz", &self.helmholtz),
        ]
        .into_iter()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerificationReport {
    pub family: u8,
    pub spec: ValidatedSpec,
    pub mode: HorizontalMode,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub perturbation: Option<Perturbation>,
    pub seed: u64,
    pub n_points: usize,
    pub fd_step: f64,
    pub checks: Checks,
    pub pass: bool,
    /// Fully resolved run configuration, attached by front ends.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub config: Option<serde_json::Value>,
}

impl VerificationReport {
    pub fn failed_checks(&self) -> Vec<&'static str> {
        self.checks.iter().filter(|(_, c)| !c.pass).map(|(name, _)| name).collect()
    }
}

struct PointResiduals {
    stratum: Stratum,
    pde_analytic: f64,
    pde_fd: f64,
    boundary: f64,
    helmholtz: f64,
}

fn evaluate_point(solution: &Solution, p: &ProbePoint, fd_step: f64) -> Result<PointResiduals> {
    let [t, x, y, z] = p.coords();
    let boundary = match p.stratum {
        Stratum::Bottom | Stratum::Lid => bc_residual(solution, t, x, y, z)?,
        Stratum::Interior => bc_match_residual(solution, t, x, y, z)?,
    };
    let s = solution.drift_coordinate(t, x);
    Ok(PointResiduals {
        stratum: p.stratum,
        pde_analytic: pde_residual_analytic(solution, t, x, y, z)?,
        pde_fd: pde_residual_fd(solution, t, x, y, z, fd_step)?,
        boundary,
        helmholtz: solution.mode().helmholtz_residual(s, y),
    })
}

pub fn verify_solution(solution: &Solution, plan: &SamplingPlan) -> Result<VerificationReport> {
    plan.check()?;
    let points = probe_points(solution, plan);
    let results: Vec<PointResiduals> = points
        .par_iter()
        .map(|p| {
            evaluate_point(solution, p, plan.fd_step)
                .map_err(|e| Error::AtPoint { point: p.coords(), source: Box::new(e) })
        })
        .collect::<Result<_>>()?;

    let tol = &plan.tolerances;
    let collect = |keep: &dyn Fn(&PointResiduals) -> Option<f64>| results.iter().filter_map(keep).collect::<Vec<_>>();
    let on = |stratum: Stratum| move |r: &PointResiduals| (r.stratum == stratum).then_some(r.boundary);

    let checks = Checks {
        pde_analytic: CheckSummary::from_residuals(collect(&|r| Some(r.pde_analytic)), tol.analytic),
        pde_fd: CheckSummary::from_residuals(collect(&|r| Some(r.pde_fd)), tol.fd),
        bc_bottom: CheckSummary::from_residuals(collect(&on(Stratum::Bottom)), tol.bc),
        bc_lid: CheckSummary::from_residuals(collect(&on(Stratum::Lid)), tol.bc),
        bc_interior_match: CheckSummary::from_residuals(collect(&on(Stratum::Interior)), tol.bc_match),
        helmholtz: CheckSummary::from_residuals(collect(&|r| Some(r.helmholtz)), tol.helmholtz),
    };
    let pass = checks.iter().all(|(_, c)| c.pass);

    Ok(VerificationReport {
        family: solution.family().get(),
        spec: *solution.spec(),
        mode: solution.mode().clone(),
        perturbation: solution.perturbation(),
        seed: plan.seed,
        n_points: plan.n_points,
        fd_step: plan.fd_step,
        checks,
        pass,
        config: None,
    })
}
