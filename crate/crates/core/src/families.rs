//! The nine drifting solution families.
//!
//! Every family has the separated form
//!
//! ```text
//! p(t, x, y, z) = f(z) F(x - V t, y) + g(z) y
//! ```
//!
//! where `F` is a horizontal Helmholtz mode, `f` is the family's vertical
//! profile and `g(z) = U(z; V)` is the zonal background-flow coefficient. The
//! constant `M` inside `g` is fixed so that the boundary operator vanishes at
//! the flat bottom and the rigid lid.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::helmholtz::{same_wavenumber, HorizontalMode, Jet2};
use crate::model::{self, FamilyId, FamilySpec, MConstant, PhysicalParams, ProfileShape, ValidatedSpec, RESONANCE_TOLERANCE};

/// A function of `z` with its first two derivatives.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct Profile {
    pub value: f64,
    pub dz: f64,
    pub dzz: f64,
}

/// Stream function and geostrophic velocities at one point.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct StreamSample {
    pub p: f64,
    /// Zonal velocity `-dp/dy`.
    pub u: f64,
    /// Meridional velocity `dp/dx`.
    pub v: f64,
    pub p_z: f64,
}

/// Everything needed to assemble the field and its derivatives at one point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PointState {
    /// Drift-frame coordinate `s = x - V t`.
    pub s: f64,
    pub y: f64,
    pub horizontal: Jet2,
    pub f: Profile,
    pub g: Profile,
    /// `f'' - kappa^2 f`, free of the cancellation in the difference.
    pub f_stretch: f64,
    /// `g'' + beta`, likewise.
    pub g_vorticity: f64,
}

/// Deliberate defects used to show that the verification harness can fail.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", content = "amount", rename_all = "snake_case")]
pub enum Perturbation {
    /// Multiply `M` by the factor.
    ScaleM(f64),
    /// Multiply `K^2` by the factor, breaking its tie to `kz` and `kr`.
    ScaleKSquared(f64),
    /// Add `amount * z^2 / 2` to `g`, i.e. shift `g''` by `amount`.
    ZonalCurvature(f64),
}

/// Numerator and denominator of `M` without the resonance guard. The value
/// may be infinite or meaningless close to a resonance.
pub fn m_fraction(spec: &FamilySpec, phys: &PhysicalParams) -> Result<MConstant> {
    let id = spec.id;
    if !id.has_m() {
        return Err(Error::BadParameter("family 1 has no M constant".into()));
    }
    let k = model::auxiliary_wavenumber(spec)?.unwrap_or(0.0);
    let (numerator, denominator) = m_parts(id, spec.kz, k, phys.depth);
    let value = if id.get() == 9 { 1.0 - numerator / denominator } else { numerator / denominator };
    Ok(MConstant { value, numerator, denominator })
}

/// `M` with its numerator and denominator, rejecting resonant combinations.
pub fn compute_m_constant(spec: &FamilySpec, phys: &PhysicalParams) -> Result<MConstant> {
    let m = m_fraction(spec, phys)?;
    let tolerance = RESONANCE_TOLERANCE * (m.numerator.abs() + 1.0);
    if !(m.denominator.abs() >= tolerance) || !m.value.is_finite() {
        return Err(Error::ResonantDepth { denominator: m.denominator, tolerance });
    }
    Ok(m)
}

pub fn compute_m(spec: &FamilySpec, phys: &PhysicalParams) -> Result<f64> {
    compute_m_constant(spec, phys).map(|m| m.value)
}

/// Numerator and denominator of `M` as written for each family; `cos - 1` and
/// `cosh - 1` groupings use half-angle forms so that small `K H` keeps its
/// precision. Family 9 returns the fraction in `M = 1 - numerator / denominator`.
fn m_parts(id: FamilyId, kz: f64, k: f64, h: f64) -> (f64, f64) {
    let a = kz * h;
    let b = k * h;
    match id.get() {
        2 => {
            let (sa, ca) = a.sin_cos();
            let (sb, cb) = b.sin_cos();
            let cos_b_minus_1 = -2.0 * (0.5 * b).sin().powi(2);
            (kz * ca * cos_b_minus_1 + k * sa * sb, k * sa * cb - kz * ca * sb)
        }
        3 => {
            let (sa, ca) = a.sin_cos();
            let (sb, cb) = b.sin_cos();
            (kz * sa, kz * sa * cb - k * ca * sb)
        }
        4 => {
            let (sha, cha) = (a.sinh(), a.cosh());
            let (sb, cb) = b.sin_cos();
            let cos_b_minus_1 = -2.0 * (0.5 * b).sin().powi(2);
            (cha * kz * cos_b_minus_1 + sha * k * sb, -cha * kz * sb + k * sha * cb)
        }
        5 => {
            let (sha, cha) = (a.sinh(), a.cosh());
            let (shb, chb) = (b.sinh(), b.cosh());
            let one_minus_cosh_b = -2.0 * (0.5 * b).sinh().powi(2);
            (cha * kz * one_minus_cosh_b + sha * k * shb, -cha * kz * shb + k * sha * chb)
        }
        6 => {
            let (sha, cha) = (a.sinh(), a.cosh());
            (2.0 * sha - cha * a, sha - cha * a)
        }
        7 => {
            let (sha, cha) = (a.sinh(), a.cosh());
            let (sb, cb) = b.sin_cos();
            (sha * kz, sha * kz * cb + k * cha * sb)
        }
        8 => {
            let (sha, cha) = (a.sinh(), a.cosh());
            let (shb, chb) = (b.sinh(), b.cosh());
            (sha * kz, -sha * kz * chb + k * cha * shb)
        }
        9 => (2.0 * a.cosh(), a.sinh() * h * kz),
        _ => unreachable!("family 1 has no M"),
    }
}

/// `1 - M` for families 3 and 7, `1 + M` for family 8, from the difference
/// of the fraction's parts rather than from `M` itself. Both vanish as `K -> 0`.
fn m_complement(id: FamilyId, kz: f64, k: f64, h: f64) -> f64 {
    let a = kz * h;
    let b = k * h;
    let (num, den) = m_parts(id, kz, k, h);
    match id.get() {
        3 => {
            let (sa, ca) = a.sin_cos();
            (-2.0 * kz * sa * (0.5 * b).sin().powi(2) - k * ca * b.sin()) / den
        }
        7 => {
            let (sha, cha) = (a.sinh(), a.cosh());
            (-2.0 * sha * kz * (0.5 * b).sin().powi(2) + k * cha * b.sin()) / den
        }
        8 => {
            let (sha, cha) = (a.sinh(), a.cosh());
            (-2.0 * sha * kz * (0.5 * b).sinh().powi(2) + k * cha * b.sinh()) / den
        }
        _ => 1.0 - num / den,
    }
}

/// Constants that enter `f` and `g`; copied out of the validated spec so that
/// negative-control perturbations can alter them.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
struct Vertical {
    family: FamilyId,
    n: u32,
    amplitude: f64,
    kz: f64,
    k: f64,
    m: f64,
    /// `1 - M` (families 3, 7) or `1 + M` (family 8), kept in step with `m`.
    m_shift: f64,
    kappa: f64,
    beta: f64,
    depth: f64,
    drift: f64,
    curvature_defect: f64,
}

impl Vertical {
    fn new(spec: &ValidatedSpec) -> Self {
        let phys = spec.phys();
        let (kz, k) = (spec.spec().kz, spec.k().unwrap_or(0.0));
        let m = spec.m().unwrap_or(0.0);
        let m_shift = match spec.family().get() {
            3 | 7 | 8 => m_complement(spec.family(), kz, k, phys.depth),
            _ => 0.0,
        };
        Vertical {
            family: spec.family(),
            n: spec.spec().n,
            amplitude: spec.spec().amplitude,
            kz,
            k,
            m,
            m_shift,
            kappa: spec.kappa(),
            beta: phys.beta,
            depth: phys.depth,
            drift: phys.drift,
            curvature_defect: 0.0,
        }
    }

    fn profile(&self, z: f64) -> Profile {
        let kz = self.kz;
        let a = kz * z;
        match self.family.profile() {
            ProfileShape::Unit => Profile { value: 1.0, dz: 0.0, dzz: 0.0 },
            ProfileShape::Sin => {
                let (s, c) = a.sin_cos();
                Profile { value: s, dz: kz * c, dzz: -kz * kz * s }
            }
            ProfileShape::Cos => {
                let (s, c) = a.sin_cos();
                Profile { value: c, dz: -kz * s, dzz: -kz * kz * c }
            }
            ProfileShape::Sinh => {
                let (s, c) = (a.sinh(), a.cosh());
                Profile { value: s, dz: kz * c, dzz: kz * kz * s }
            }
            ProfileShape::Cosh => {
                let (s, c) = (a.sinh(), a.cosh());
                Profile { value: c, dz: kz * s, dzz: kz * kz * c }
            }
        }
    }

    fn zonal(&self, z: f64) -> Profile {
        let Vertical { beta, depth: h, drift: v, m, m_shift, k, .. } = *self;
        let b = k * z;
        let mut g = match self.family.get() {
            1 => {
                let wn = PI * f64::from(self.n) / h;
                let (s, c) = sin_cos_pi(f64::from(self.n) * (z / h));
                let p = self.amplitude;
                let n2 = f64::from(self.n) * f64::from(self.n);
                Profile {
                    value: c * p - beta * h * h / (PI * PI * n2) - v,
                    dz: -p * wn * s,
                    dzz: -p * wn * wn * c,
                }
            }
            2 | 4 => {
                let (s, c) = b.sin_cos();
                let cos_minus_1 = -2.0 * (0.5 * b).sin().powi(2);
                Profile {
                    value: beta * (s * m + cos_minus_1) / (k * k) - v,
                    dz: beta * (m * c - s) / k,
                    dzz: -beta * (m * s + c),
                }
            }
            3 | 7 => {
                // c m - 1 = -(1 - M) - 2 M sin^2(b / 2)
                let (s, c) = b.sin_cos();
                let cm_minus_1 = -m_shift - 2.0 * m * (0.5 * b).sin().powi(2);
                Profile { value: beta * cm_minus_1 / (k * k) - v, dz: -beta * m * s / k, dzz: -beta * m * c }
            }
            5 => {
                let (s, c) = (b.sinh(), b.cosh());
                let cosh_minus_1 = 2.0 * (0.5 * b).sinh().powi(2);
                Profile {
                    value: beta * (s * m - cosh_minus_1) / (k * k) - v,
                    dz: beta * (m * c - s) / k,
                    dzz: beta * (m * s - c),
                }
            }
            6 => Profile {
                value: -0.5 * beta * z * z + 0.5 * beta * h * m * z - v,
                dz: -beta * z + 0.5 * beta * h * m,
                dzz: -beta,
            },
            8 => {
                let (s, c) = (b.sinh(), b.cosh());
                let cm_plus_1 = m_shift + 2.0 * m * (0.5 * b).sinh().powi(2);
                Profile { value: beta * cm_plus_1 / (k * k) - v, dz: beta * m * s / k, dzz: beta * m * c }
            }
            9 => Profile { value: -0.5 * beta * z * z + 0.5 * beta * h * h * m - v, dz: -beta * z, dzz: -beta },
            _ => unreachable!(),
        };
        if self.curvature_defect != 0.0 {
            let d = self.curvature_defect;
            g.value += 0.5 * d * z * z;
            g.dz += d * z;
            g.dzz += d;
        }
        g
    }

    fn stretch(&self, f: &Profile) -> f64 {
        let (kz, kappa) = (self.kz, self.kappa);
        match self.family.profile() {
            ProfileShape::Unit => -kappa * kappa,
            ProfileShape::Sin | ProfileShape::Cos => -(kz * kz + kappa * kappa) * f.value,
            ProfileShape::Sinh | ProfileShape::Cosh => (kz - kappa) * (kz + kappa) * f.value,
        }
    }

    /// `g'' + beta`, regrouped where both terms tend to `beta` as `K -> 0`.
    fn zonal_vorticity(&self, z: f64, g: &Profile) -> f64 {
        let Vertical { beta, m, m_shift, k, .. } = *self;
        let b = k * z;
        let pv = match self.family.get() {
            2 | 4 => beta * (2.0 * (0.5 * b).sin().powi(2) - m * b.sin()),
            3 | 7 => beta * (m_shift + 2.0 * m * (0.5 * b).sin().powi(2)),
            5 => beta * (m * b.sinh() - 2.0 * (0.5 * b).sinh().powi(2)),
            8 => beta * (m_shift + 2.0 * m * (0.5 * b).sinh().powi(2)),
            6 | 9 => 0.0,
            _ => return g.dzz + beta,
        };
        pv + self.curvature_defect
    }

    /// The boundary operator divided by `F_x`, transcribed term by term from
    /// the closed forms.
    fn closed_form_bc_factor(&self, z: f64) -> f64 {
        let Vertical { beta, depth: h, m, k, kz, .. } = *self;
        let (skz, ckz) = (kz * z).sin_cos();
        let (shkz, chkz) = ((kz * z).sinh(), (kz * z).cosh());
        let (sk, ck) = (k * z).sin_cos();
        let (shk, chk) = ((k * z).sinh(), (k * z).cosh());
        let bk2 = beta / (k * k);
        match self.family.get() {
            1 => {
                let n = f64::from(self.n);
                -sin_cos_pi(n * (z / h)).0 * PI * n * self.amplitude / h
            }
            2 => bk2 * (m * (k * skz * ck - kz * ckz * sk) - kz * ckz * ck + kz * ckz - k * skz * sk),
            3 => bk2 * (m * (kz * skz * ck - k * ckz * sk) - kz * skz),
            4 => {
                bk2 * (-chkz * kz * sk * m + chkz * kz - chkz * kz * ck + shkz * k * ck * m - shkz * k * sk)
            }
            5 => {
                bk2 * (-chkz * kz * shk * m - chkz * kz + chkz * kz * chk + shkz * k * chk * m - shkz * k * shk)
            }
            6 => -0.5 * beta * (-chkz * kz * z * z + chkz * kz * h * m * z + 2.0 * shkz * z - shkz * h * m),
            7 => -bk2 * (shkz * kz * ck * m - shkz * kz + chkz * k * sk * m),
            8 => bk2 * (-shkz * kz * chk * m - shkz * kz + chkz * k * shk * m),
            9 => -0.5 * beta * (-shkz * kz * z * z + shkz * kz * h * h * m + 2.0 * chkz * z),
            _ => unreachable!(),
        }
    }
}

/// `(sin(pi r), cos(pi r))`, exact at integer and half-integer `r`.
fn sin_cos_pi(r: f64) -> (f64, f64) {
    let r = r.rem_euclid(2.0);
    let (sign, r) = if r >= 1.0 { (-1.0, r - 1.0) } else { (1.0, r) };
    // r in [0, 1): fold onto [0, 1/2] for sin and keep cos antisymmetric about 1/2
    let (s, c) = if r <= 0.5 {
        let (s, c) = (PI * r).sin_cos();
        (s, if r == 0.5 { 0.0 } else { c })
    } else {
        let (s, c) = (PI * (1.0 - r)).sin_cos();
        (s, -c)
    };
    (sign * s, sign * c)
}

/// Assembled stream function `p = f(z) F(x - V t, y) + g(z) y`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Solution {
    phys: PhysicalParams,
    spec: ValidatedSpec,
    mode: HorizontalMode,
    #[serde(skip)]
    vertical: Vertical,
    #[serde(skip_serializing_if = "Option::is_none")]
    perturbation: Option<Perturbation>,
}

pub fn build_solution(spec: &ValidatedSpec, phys: &PhysicalParams, mode: HorizontalMode) -> Result<Solution> {
    if spec.phys() != phys {
        return Err(Error::BadParameter("spec was validated against different physical parameters".into()));
    }
    if !same_wavenumber(mode.kappa(), spec.kappa()) {
        return Err(Error::WavenumberMismatch { mode: mode.kappa(), family: spec.kappa() });
    }
    Ok(Solution { phys: *phys, spec: *spec, mode, vertical: Vertical::new(spec), perturbation: None })
}

pub fn vertical_profile(spec: &ValidatedSpec, z: f64) -> Result<Profile> {
    spec.phys().check_depth(z)?;
    Ok(Vertical::new(spec).profile(z))
}

pub fn zonal_coefficient(spec: &ValidatedSpec, phys: &PhysicalParams, z: f64) -> Result<Profile> {
    if spec.phys() != phys {
        return Err(Error::BadParameter("spec was validated against different physical parameters".into()));
    }
    phys.check_depth(z)?;
    Ok(Vertical::new(spec).zonal(z))
}

impl Solution {
    pub fn phys(&self) -> &PhysicalParams {
        &self.phys
    }

    pub fn spec(&self) -> &ValidatedSpec {
        &self.spec
    }

    pub fn family(&self) -> FamilyId {
        self.spec.family()
    }

    pub fn mode(&self) -> &HorizontalMode {
        &self.mode
    }

    pub fn kappa(&self) -> f64 {
        self.spec.kappa()
    }

    pub fn perturbation(&self) -> Option<Perturbation> {
        self.perturbation
    }

    /// `M` actually used by this solution (differs from the spec's under
    /// [`Perturbation::ScaleM`]).
    pub fn m(&self) -> Option<f64> {
        self.family().has_m().then_some(self.vertical.m)
    }

    /// `K` actually used by this solution.
    pub fn k(&self) -> Option<f64> {
        self.family().k_relation().map(|_| self.vertical.k)
    }

    /// Copy of this solution with a deliberate defect; fails if the family has
    /// no such constant.
    pub fn perturbed(&self, perturbation: Perturbation) -> Result<Solution> {
        let mut out = self.clone();
        match perturbation {
            Perturbation::ScaleM(factor) => {
                if !self.family().has_m() {
                    return Err(Error::BadParameter(format!("family {} has no M", self.family())));
                }
                out.vertical.m *= factor;
                let m = out.vertical.m;
                out.vertical.m_shift = if self.family().get() == 8 { 1.0 + m } else { 1.0 - m };
            }
            Perturbation::ScaleKSquared(factor) => {
                if self.family().k_relation().is_none() {
                    return Err(Error::BadParameter(format!("family {} has no K", self.family())));
                }
                out.vertical.k = (self.vertical.k * self.vertical.k * factor).sqrt();
            }
            Perturbation::ZonalCurvature(amount) => out.vertical.curvature_defect += amount,
        }
        out.perturbation = Some(perturbation);
        Ok(out)
    }

    pub fn vertical_profile(&self, z: f64) -> Result<Profile> {
        self.phys.check_depth(z)?;
        Ok(self.vertical.profile(z))
    }

    pub fn zonal_coefficient(&self, z: f64) -> Result<Profile> {
        self.phys.check_depth(z)?;
        Ok(self.vertical.zonal(z))
    }

    pub fn drift_coordinate(&self, t: f64, x: f64) -> f64 {
        x - self.phys.drift * t
    }

    pub fn state(&self, t: f64, x: f64, y: f64, z: f64) -> Result<PointState> {
        self.phys.check_depth(z)?;
        let s = self.drift_coordinate(t, x);
        let (f, g) = (self.vertical.profile(z), self.vertical.zonal(z));
        Ok(PointState {
            s,
            y,
            horizontal: self.mode.jet(s, y),
            f,
            g,
            f_stretch: self.vertical.stretch(&f),
            g_vorticity: self.vertical.zonal_vorticity(z, &g),
        })
    }

    /// Scalar stream function only.
    pub fn stream(&self, t: f64, x: f64, y: f64, z: f64) -> Result<f64> {
        self.phys.check_depth(z)?;
        let s = self.drift_coordinate(t, x);
        Ok(self.vertical.profile(z).value * self.mode.value(s, y) + self.vertical.zonal(z).value * y)
    }

    pub fn eval(&self, t: f64, x: f64, y: f64, z: f64) -> Result<StreamSample> {
        let st = self.state(t, x, y, z)?;
        let (f, g, jet) = (st.f, st.g, st.horizontal);
        Ok(StreamSample {
            p: f.value * jet.f + g.value * y,
            u: -(f.value * jet.fy + g.value),
            v: f.value * jet.fs,
            p_z: f.dz * jet.f + g.dz * y,
        })
    }

    /// Closed form of the boundary operator on this solution.
    pub fn bc_closed_form(&self, t: f64, x: f64, y: f64, z: f64) -> Result<f64> {
        self.phys.check_depth(z)?;
        let s = self.drift_coordinate(t, x);
        let f_x = self.mode.jet(s, y).fs;
        Ok(f_x * self.vertical.closed_form_bc_factor(z))
    }
}

pub fn bc_closed_form(solution: &Solution, t: f64, x: f64, y: f64, z: f64) -> Result<f64> {
    solution.bc_closed_form(t, x, y, z)
}

/// Human-readable description of one family.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct FamilyInfo {
    pub id: u8,
    pub profile: &'static str,
    pub stream_function: &'static str,
    pub helmholtz: &'static str,
    pub parameters: &'static str,
    pub constraints: &'static str,
    pub m: Option<&'static str>,
}

pub fn family_info(id: FamilyId) -> FamilyInfo {
    const TRIG_PARAMS: &str = "kz, kr (real)";
    const KR_HELMHOLTZ: &str = "F_ss + F_yy + kr^2 F = 0";
    const KZ_HELMHOLTZ: &str = "F_ss + F_yy + kz^2 F = 0";
    let profile = id.profile().describe();
    let (stream_function, helmholtz, parameters, constraints, m) = match id.get() {
        1 => (
            "F(x - V t, y) + (P cos(pi n z / H) - beta H^2 / (pi^2 n^2) - V) y",
            "F_ss + F_yy + (pi n / H)^2 F = 0",
            "n (integer), P (real)",
            "n = 1, 2, 3, ...",
            None,
        ),
        2 => (
            "sin(kz z) F(x - V t, y) + (beta (sin(K z) M + cos(K z) - 1) / K^2 - V) y",
            KR_HELMHOLTZ,
            TRIG_PARAMS,
            "K^2 = kz^2 + kr^2, kr != 0",
            Some("(kz cos(kz H) cos(K H) - kz cos(kz H) + K sin(kz H) sin(K H)) / (K sin(kz H) cos(K H) - kz cos(kz H) sin(K H))"),
        ),
        3 => (
            "cos(kz z) F(x - V t, y) + (beta (cos(K z) M - 1) / K^2 - V) y",
            KR_HELMHOLTZ,
            TRIG_PARAMS,
            "K^2 = kz^2 + kr^2, kr != 0",
            Some("kz sin(kz H) / (kz sin(kz H) cos(K H) - K cos(kz H) sin(K H))"),
        ),
        4 => (
            "sinh(kz z) F(x - V t, y) + (beta (sin(K z) M + cos(K z) - 1) / K^2 - V) y",
            KR_HELMHOLTZ,
            TRIG_PARAMS,
            "K^2 = -kz^2 + kr^2, kz < kr",
            Some("(cosh(kz H) kz cos(K H) - cosh(kz H) kz + sinh(kz H) K sin(K H)) / (-cosh(kz H) kz sin(K H) + K sinh(kz H) cos(K H))"),
        ),
        5 => (
            "sinh(kz z) F(x - V t, y) + (beta (sinh(K z) M - cosh(K z) + 1) / K^2 - V) y",
            KR_HELMHOLTZ,
            TRIG_PARAMS,
            "K^2 = kz^2 - kr^2, kz > kr",
            Some("(-cosh(kz H) kz cosh(K H) + cosh(kz H) kz + sinh(kz H) K sinh(K H)) / (-cosh(kz H) kz sinh(K H) + K sinh(kz H) cosh(K H))"),
        ),
        6 => (
            "sinh(kz z) F(x - V t, y) + (-beta z^2 / 2 + beta H M z / 2 - V) y",
            KZ_HELMHOLTZ,
            "kz (real)",
            "kz != 0",
            Some("(2 sinh(kz H) - cosh(kz H) kz H) / (sinh(kz H) - cosh(kz H) kz H)"),
        ),
        7 => (
            "cosh(kz z) F(x - V t, y) + (beta (cos(K z) M - 1) / K^2 - V) y",
            KR_HELMHOLTZ,
            TRIG_PARAMS,
            "K^2 = -kz^2 + kr^2, kz < kr",
            Some("sinh(kz H) kz / (sinh(kz H) kz cos(K H) + K cosh(kz H) sin(K H))"),
        ),
        8 => (
            "cosh(kz z) F(x - V t, y) + (beta (cosh(K z) M + 1) / K^2 - V) y",
            KR_HELMHOLTZ,
            TRIG_PARAMS,
            "K^2 = kz^2 - kr^2, kz > kr",
            Some("sinh(kz H) kz / (-sinh(kz H) kz cosh(K H) + K cosh(kz H) sinh(K H))"),
        ),
        9 => (
            "cosh(kz z) F(x - V t, y) + (-beta z^2 / 2 + beta H^2 M / 2 - V) y",
            KZ_HELMHOLTZ,
            "kz (real)",
            "kz != 0",
            Some("1 - 2 cosh(kz H) / (sinh(kz H) H kz)"),
        ),
        _ => unreachable!(),
    };
    FamilyInfo { id: id.get(), profile, stream_function, helmholtz, parameters, constraints, m }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::helmholtz::plane_wave;
    use crate::model::validate;

    fn phys(beta: f64, depth: f64, drift: f64) -> PhysicalParams {
        PhysicalParams::new(beta, depth, drift).unwrap()
    }

    #[test]
    fn family3_m_vanishes_with_sin_kz_h() {
        // kz H = pi, K H = sqrt(pi^2 + 1) not a multiple of pi
        let spec = FamilySpec::new(3, PI, 1.0).unwrap();
        let m = compute_m(&spec, &phys(1.0, 1.0, 0.0)).unwrap();
        assert!(m.abs() < 1e-15, "{m}");
    }

    #[test]
    fn family9_m_closed_form() {
        let spec = FamilySpec::new(9, 1.0, 0.0).unwrap();
        let m = compute_m(&spec, &phys(1.0, 1.0, 0.0)).unwrap();
        let expected = 1.0 - 2.0 * 1f64.cosh() / 1f64.sinh();
        assert!((m - expected).abs() < 1e-15);
    }

    #[test]
    fn family6_small_kz_is_resonant() {
        // denominator ~ -(kz H)^3 / 3
        let spec = FamilySpec::new(6, 1e-4, 0.0).unwrap();
        assert!(matches!(compute_m(&spec, &phys(1.0, 1.0, 0.0)), Err(Error::ResonantDepth { .. })));
        let spec = FamilySpec::new(6, 1e-2, 0.0).unwrap();
        assert!(compute_m(&spec, &phys(1.0, 1.0, 0.0)).is_ok());
    }

    #[test]
    fn family2_zero_kz_is_resonant() {
        let spec = FamilySpec::new(2, 0.0, 1.0).unwrap();
        assert!(matches!(validate(&spec, &phys(1.0, 1.0, 0.0)), Err(Error::ResonantDepth { .. })));
    }

    #[test]
    fn profiles_at_bottom() {
        let p = phys(1.0, 2.0, 0.0);
        let v = validate(&FamilySpec::new(3, 0.7, 1.0).unwrap(), &p).unwrap();
        assert_eq!(vertical_profile(&v, 0.0).unwrap(), Profile { value: 1.0, dz: 0.0, dzz: -(0.7 * 0.7) });
        let v = validate(&FamilySpec::new(4, 0.7, 1.0).unwrap(), &p).unwrap();
        assert_eq!(vertical_profile(&v, 0.0).unwrap(), Profile { value: 0.0, dz: 0.7, dzz: 0.0 });
        let v = validate(&FamilySpec::family1(1, 0.3), &p).unwrap();
        assert_eq!(vertical_profile(&v, 1.234).unwrap(), Profile { value: 1.0, dz: 0.0, dzz: 0.0 });
        assert!(matches!(vertical_profile(&v, 2.5), Err(Error::DomainError { .. })));
        assert!(matches!(vertical_profile(&v, -1e-12), Err(Error::DomainError { .. })));
    }

    #[test]
    fn zonal_at_bottom() {
        let p = phys(1.3, 1.5, 0.4);
        let v = validate(&FamilySpec::new(6, 0.9, 0.0).unwrap(), &p).unwrap();
        let g = zonal_coefficient(&v, &p, 0.0).unwrap();
        let m = v.m().unwrap();
        assert_eq!(g.value, -0.4);
        assert_eq!(g.dz, 0.5 * 1.3 * 1.5 * m);
        assert_eq!(g.dzz, -1.3);

        let v = validate(&FamilySpec::new(2, 0.9, 1.1).unwrap(), &p).unwrap();
        assert_eq!(zonal_coefficient(&v, &p, 0.0).unwrap().value, -0.4);
    }

    #[test]
    fn family1_stream_example() {
        let p = phys(1.0, PI, 0.0);
        let v = validate(&FamilySpec::family1(1, 0.0), &p).unwrap();
        let sol = build_solution(&v, &p, plane_wave(1.0, 1.0, 0.0, 0.0).unwrap()).unwrap();
        let sample = sol.eval(0.0, 0.0, 1.0, 0.0).unwrap();
        assert!(sample.p.abs() < 1e-15, "{}", sample.p);
    }

    #[test]
    fn zero_amplitude_is_pure_zonal_flow() {
        let p = phys(0.8, 1.2, 0.3);
        let v = validate(&FamilySpec::new(8, 1.4, 0.5).unwrap(), &p).unwrap();
        let sol = build_solution(&v, &p, plane_wave(0.5, 0.0, 0.0, 0.0).unwrap()).unwrap();
        let g = sol.zonal_coefficient(0.7).unwrap();
        let s = sol.eval(1.0, 2.0, -1.5, 0.7).unwrap();
        assert_eq!(s.p, g.value * -1.5);
        assert_eq!(s.v, 0.0);
        assert_eq!(s.u, -g.value);
    }

    #[test]
    fn build_rejects_mismatched_wavenumber() {
        let p = phys(1.0, 1.0, 0.0);
        let v = validate(&FamilySpec::new(2, 1.0, 1.0).unwrap(), &p).unwrap();
        let mode = plane_wave(2.0, 1.0, 0.0, 0.0).unwrap();
        assert!(matches!(build_solution(&v, &p, mode), Err(Error::WavenumberMismatch { .. })));
        let other = phys(1.0, 2.0, 0.0);
        let mode = plane_wave(1.0, 1.0, 0.0, 0.0).unwrap();
        assert!(build_solution(&v, &other, mode).is_err());
    }

    #[test]
    fn family1_closed_form_bc() {
        let p = phys(1.0, 2.0, 0.5);
        let mode = plane_wave(PI / 2.0, 1.0, 0.3, 0.2).unwrap();
        let v = validate(&FamilySpec::family1(1, 0.7), &p).unwrap();
        let sol = build_solution(&v, &p, mode.clone()).unwrap();
        assert_eq!(sol.bc_closed_form(0.1, 0.2, 0.3, 0.0).unwrap(), 0.0);
        assert!(sol.bc_closed_form(0.1, 0.2, 0.3, 2.0).unwrap().abs() < 1e-15);
        assert!(sol.bc_closed_form(0.1, 0.2, 0.3, 1.0).unwrap().abs() > 0.1);

        let v = validate(&FamilySpec::family1(1, 0.0), &p).unwrap();
        let sol = build_solution(&v, &p, mode).unwrap();
        assert_eq!(sol.bc_closed_form(0.1, 0.2, 0.3, 1.0).unwrap(), 0.0);
    }

    #[test]
    fn perturbations_need_their_constant() {
        let p = phys(1.0, 1.0, 0.0);
        let v = validate(&FamilySpec::family1(2, 0.5), &p).unwrap();
        let sol = build_solution(&v, &p, plane_wave(v.kappa(), 1.0, 0.0, 0.0).unwrap()).unwrap();
        assert!(sol.perturbed(Perturbation::ScaleM(1.01)).is_err());
        assert!(sol.perturbed(Perturbation::ScaleKSquared(1.01)).is_err());
        assert!(sol.perturbed(Perturbation::ZonalCurvature(1e-2)).is_ok());

        let v = validate(&FamilySpec::new(6, 1.0, 0.0).unwrap(), &p).unwrap();
        let sol = build_solution(&v, &p, plane_wave(1.0, 1.0, 0.0, 0.0).unwrap()).unwrap();
        let bad = sol.perturbed(Perturbation::ScaleM(1.01)).unwrap();
        assert_eq!(bad.m(), Some(v.m().unwrap() * 1.01));
        assert!(sol.perturbed(Perturbation::ScaleKSquared(1.01)).is_err());
    }

    #[test]
    fn info_table() {
        assert_eq!(FamilyId::ALL.len(), 9);
        let info = family_info(FamilyId::new(4).unwrap());
        assert!(info.constraints.contains("kz < kr"));
        assert!(family_info(FamilyId::new(1).unwrap()).parameters.contains("n (integer)"));
    }
}
