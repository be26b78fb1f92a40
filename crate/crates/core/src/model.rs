//! Physical parameters, family parameter sets and their validation.
//!
//! All quantities are nondimensional. A [`FamilySpec`] is the raw, user-facing
//! parameter set of one of the nine solution families; [`validate`] checks it
//! against the family's constraints and fills in the derived constants
//! (auxiliary wavenumber `K`, horizontal wavenumber `kappa`, and the
//! boundary-matching constant `M`).

use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::families;

/// Reject `M` when `|denominator| < RESONANCE_TOLERANCE * (|numerator| + 1)`.
pub const RESONANCE_TOLERANCE: f64 = 1e-9;

/// Largest `|k_z| * H` accepted by the hyperbolic families (4 to 9).
pub const MAX_HYPERBOLIC_ARGUMENT: f64 = 300.0;

/// Global constants of the nondimensional ocean model.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhysicalParams {
    /// Meridional gradient of the Coriolis parameter.
    pub beta: f64,
    /// Ocean depth `H`; the column is `0 <= z <= H`.
    pub depth: f64,
    /// Zonal drift speed `V` of the wave pattern.
    #[serde(default)]
    pub drift: f64,
}

impl PhysicalParams {
    pub fn new(beta: f64, depth: f64, drift: f64) -> Result<Self> {
        let params = Self { beta, depth, drift };
        params.check()?;
        Ok(params)
    }

    pub fn check(&self) -> Result<()> {
        if !self.beta.is_finite() {
            return Err(Error::BadParameter(format!("beta must be finite, got {}", self.beta)));
        }
        if !self.drift.is_finite() {
            return Err(Error::BadParameter(format!("drift speed V must be finite, got {}", self.drift)));
        }
        if !(self.depth.is_finite() && self.depth > 0.0) {
            return Err(Error::BadParameter(format!("depth H must be positive, got {}", self.depth)));
        }
        Ok(())
    }

    pub fn check_depth(&self, z: f64) -> Result<()> {
        if (0.0..=self.depth).contains(&z) {
            Ok(())
        } else {
            Err(Error::DomainError { z, depth: self.depth })
        }
    }
}

/// Which of the nine solution families (1 to 9).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub struct FamilyId(u8);

/// Shape of the vertical factor `f(z)` multiplying the horizontal mode.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProfileShape {
    Unit,
    Sin,
    Cos,
    Sinh,
    Cosh,
}

impl ProfileShape {
    pub fn describe(self) -> &'static str {
        match self {
            ProfileShape::Unit => "1",
            ProfileShape::Sin => "sin(kz z)",
            ProfileShape::Cos => "cos(kz z)",
            ProfileShape::Sinh => "sinh(kz z)",
            ProfileShape::Cosh => "cosh(kz z)",
        }
    }
}

/// How the auxiliary wavenumber `K` is tied to `kz` and `kr`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KRelation {
    /// `K^2 = kz^2 + kr^2`
    Sum,
    /// `K^2 = kr^2 - kz^2`, requires `kz < kr`
    HorizontalExcess,
    /// `K^2 = kz^2 - kr^2`, requires `kz > kr`
    VerticalExcess,
}

impl KRelation {
    pub fn k_squared(self, kz: f64, kr: f64) -> f64 {
        match self {
            KRelation::Sum => kz * kz + kr * kr,
            KRelation::HorizontalExcess => kr * kr - kz * kz,
            KRelation::VerticalExcess => kz * kz - kr * kr,
        }
    }
}

impl FamilyId {
    pub const ALL: [FamilyId; 9] = [
        FamilyId(1),
        FamilyId(2),
        FamilyId(3),
        FamilyId(4),
        FamilyId(5),
        FamilyId(6),
        FamilyId(7),
        FamilyId(8),
        FamilyId(9),
    ];

    pub fn new(id: u8) -> Result<Self> {
        if (1..=9).contains(&id) {
            Ok(FamilyId(id))
        } else {
            Err(Error::BadParameter(format!("family id must be in 1..=9, got {id}")))
        }
    }

    pub fn get(self) -> u8 {
        self.0
    }

    pub fn profile(self) -> ProfileShape {
        match self.0 {
            1 => ProfileShape::Unit,
            2 => ProfileShape::Sin,
            3 => ProfileShape::Cos,
            4..=6 => ProfileShape::Sinh,
            _ => ProfileShape::Cosh,
        }
    }

    /// `None` for families 1, 6 and 9, which have no auxiliary wavenumber.
    pub fn k_relation(self) -> Option<KRelation> {
        match self.0 {
            2 | 3 => Some(KRelation::Sum),
            4 | 7 => Some(KRelation::HorizontalExcess),
            5 | 8 => Some(KRelation::VerticalExcess),
            _ => None,
        }
    }

    pub fn has_m(self) -> bool {
        self.0 != 1
    }

    pub fn uses_kr(self) -> bool {
        self.k_relation().is_some()
    }

    pub fn is_hyperbolic(self) -> bool {
        matches!(self.profile(), ProfileShape::Sinh | ProfileShape::Cosh)
    }
}

impl TryFrom<u8> for FamilyId {
    type Error = Error;

    fn try_from(id: u8) -> Result<Self> {
        FamilyId::new(id)
    }
}

impl From<FamilyId> for u8 {
    fn from(id: FamilyId) -> u8 {
        id.0
    }
}

impl fmt::Display for FamilyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Free parameters of a solution family. Fields not used by the selected
/// family are ignored.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilySpec {
    pub id: FamilyId,
    /// Vertical mode number (family 1).
    #[serde(default)]
    pub n: u32,
    /// Amplitude `P` of the lid-to-bottom zonal shear (family 1).
    #[serde(default)]
    pub amplitude: f64,
    /// Vertical wavenumber (families 2 to 9).
    #[serde(default)]
    pub kz: f64,
    /// Horizontal wavenumber (families 2 to 5, 7, 8).
    #[serde(default)]
    pub kr: f64,
}

impl FamilySpec {
    /// Family 1 with vertical mode `n` and shear amplitude `P`.
    pub fn family1(n: u32, amplitude: f64) -> Self {
        Self { id: FamilyId(1), n, amplitude, kz: 0.0, kr: 0.0 }
    }

    /// Families 2 to 9; `kr` is ignored by families 6 and 9.
    pub fn new(id: u8, kz: f64, kr: f64) -> Result<Self> {
        let id = FamilyId::new(id)?;
        if id.get() == 1 {
            return Err(Error::BadParameter("family 1 is parameterised by n and P; use FamilySpec::family1".into()));
        }
        Ok(Self { id, n: 0, amplitude: 0.0, kz, kr })
    }
}

/// Numerator and denominator of `M`, kept separately for the resonance guard.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MConstant {
    pub value: f64,
    pub numerator: f64,
    pub denominator: f64,
}

/// A [`FamilySpec`] that passed [`validate`], with its derived constants.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ValidatedSpec {
    spec: FamilySpec,
    phys: PhysicalParams,
    kappa: f64,
    k: Option<f64>,
    m: Option<MConstant>,
}

impl ValidatedSpec {
    pub fn spec(&self) -> &FamilySpec {
        &self.spec
    }

    /// Physical parameters the spec was validated against.
    pub fn phys(&self) -> &PhysicalParams {
        &self.phys
    }

    pub fn family(&self) -> FamilyId {
        self.spec.id
    }

    /// Helmholtz wavenumber of the horizontal structure function.
    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    /// Auxiliary wavenumber `K > 0` (families 2 to 5, 7, 8).
    pub fn k(&self) -> Option<f64> {
        self.k
    }

    pub fn m(&self) -> Option<f64> {
        self.m.map(|m| m.value)
    }

    pub fn m_constant(&self) -> Option<MConstant> {
        self.m
    }
}

/// Horizontal Helmholtz wavenumber: `pi n / H` (family 1), `|kr|` (families
/// 2 to 5, 7, 8) or `|kz|` (families 6, 9).
pub fn horizontal_wavenumber(spec: &FamilySpec, phys: &PhysicalParams) -> f64 {
    match spec.id.get() {
        1 => PI * f64::from(spec.n) / phys.depth,
        6 | 9 => spec.kz.abs(),
        _ => spec.kr.abs(),
    }
}

/// Positive root `K` of the family's `K^2` relation.
pub fn auxiliary_wavenumber(spec: &FamilySpec) -> Result<Option<f64>> {
    let Some(relation) = spec.id.k_relation() else {
        return Ok(None);
    };
    let k_squared = relation.k_squared(spec.kz, spec.kr);
    if !(k_squared > 0.0) {
        return Err(Error::ConstraintViolation(format!(
            "family {} needs K^2 > 0, got K^2 = {k_squared} from kz = {}, kr = {}",
            spec.id, spec.kz, spec.kr
        )));
    }
    Ok(Some(k_squared.sqrt()))
}

pub fn validate(spec: &FamilySpec, phys: &PhysicalParams) -> Result<ValidatedSpec> {
    phys.check()?;
    let id = spec.id;
    for (name, value) in [("P", spec.amplitude), ("kz", spec.kz), ("kr", spec.kr)] {
        if !value.is_finite() {
            return Err(Error::BadParameter(format!("{name} must be finite, got {value}")));
        }
    }

    match id.get() {
        1 => {
            if spec.n < 1 {
                return Err(Error::BadParameter("family 1 needs an integer n >= 1".into()));
            }
        }
        6 | 9 => {
            if spec.kz == 0.0 {
                return Err(Error::BadParameter(format!("family {id} needs kz != 0")));
            }
        }
        _ => {
            if spec.kr == 0.0 {
                return Err(Error::BadParameter(format!("family {id} needs kr != 0")));
            }
        }
    }

    match id.k_relation() {
        Some(KRelation::HorizontalExcess) if !(spec.kz < spec.kr) => {
            return Err(Error::ConstraintViolation(format!(
                "family {id} requires kz < kr, got kz = {}, kr = {}",
                spec.kz, spec.kr
            )));
        }
        Some(KRelation::VerticalExcess) if !(spec.kz > spec.kr) => {
            return Err(Error::ConstraintViolation(format!(
                "family {id} requires kz > kr, got kz = {}, kr = {}",
                spec.kz, spec.kr
            )));
        }
        _ => {}
    }

    if id.is_hyperbolic() && spec.kz.abs() * phys.depth > MAX_HYPERBOLIC_ARGUMENT {
        return Err(Error::BadParameter(format!(
            "|kz| H = {} exceeds {MAX_HYPERBOLIC_ARGUMENT}; hyperbolic profiles overflow",
            spec.kz.abs() * phys.depth
        )));
    }

    let k = auxiliary_wavenumber(spec)?;
    let m = if id.has_m() { Some(families::compute_m_constant(spec, phys)?) } else { None };

    Ok(ValidatedSpec { spec: *spec, phys: *phys, kappa: horizontal_wavenumber(spec, phys), k, m })
}
