//! Scanning one parameter for zeros of the `M` denominator.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::families::m_fraction;
use crate::model::{FamilySpec, PhysicalParams, RESONANCE_TOLERANCE};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepParameter {
    Kr,
    Kz,
    Depth,
}

impl SweepParameter {
    pub fn name(self) -> &'static str {
        match self {
            SweepParameter::Kr => "kr",
            SweepParameter::Kz => "kz",
            SweepParameter::Depth => "depth",
        }
    }

    fn apply(self, spec: &FamilySpec, phys: &PhysicalParams, value: f64) -> (FamilySpec, PhysicalParams) {
        let (mut spec, mut phys) = (*spec, *phys);
        match self {
            SweepParameter::Kr => spec.kr = value,
            SweepParameter::Kz => spec.kz = value,
            SweepParameter::Depth => phys.depth = value,
        }
        (spec, phys)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepRow {
    pub parameter: f64,
    /// `None` when the guard rejects the point or the parameters are invalid.
    pub m: Option<f64>,
    pub numerator: f64,
    pub denominator: f64,
    /// The guard rejects this point, or a denominator zero lies between it
    /// and a neighbouring row.
    pub resonant: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

/// A zero of the denominator, bracketed to bisection precision.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Resonance {
    pub parameter: f64,
    pub bracket: [f64; 2],
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Sweep {
    pub parameter: SweepParameter,
    pub rows: Vec<SweepRow>,
    pub resonances: Vec<Resonance>,
}

fn denominator(parameter: SweepParameter, spec: &FamilySpec, phys: &PhysicalParams, value: f64) -> Option<f64> {
    let (spec, phys) = parameter.apply(spec, phys, value);
    phys.check().ok()?;
    m_fraction(&spec, &phys).ok().map(|m| m.denominator).filter(|d| d.is_finite())
}

fn row(parameter: SweepParameter, spec: &FamilySpec, phys: &PhysicalParams, value: f64) -> SweepRow {
    let (spec, phys) = parameter.apply(spec, phys, value);
    let fraction = phys.check().and_then(|_| m_fraction(&spec, &phys));
    match fraction {
        Ok(m) => {
            let tolerance = RESONANCE_TOLERANCE * (m.numerator.abs() + 1.0);
            let resonant = !(m.denominator.abs() >= tolerance) || !m.value.is_finite();
            SweepRow {
                parameter: value,
                m: (!resonant).then_some(m.value),
                numerator: m.numerator,
                denominator: m.denominator,
                resonant,
                error: None,
            }
        }
        Err(e) => SweepRow {
            parameter: value,
            m: None,
            numerator: f64::NAN,
            denominator: f64::NAN,
            resonant: false,
            error: Some(e.to_string()),
        },
    }
}

/// Samples `samples` evenly spaced values of `parameter` over `range` and
/// refines every sign change of the denominator between neighbours by
/// bisection. Exact zeros at a sample are reported as resonances too.
pub fn sweep(
    spec: &FamilySpec,
    phys: &PhysicalParams,
    parameter: SweepParameter,
    range: [f64; 2],
    samples: usize,
) -> Result<Sweep> {
    let [lo, hi] = range;
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(Error::BadParameter(format!("sweep range [{lo}, {hi}] is empty or not finite")));
    }
    if samples < 2 {
        return Err(Error::BadParameter(format!("sweep needs at least 2 samples, got {samples}")));
    }
    if !spec.id.has_m() {
        return Err(Error::BadParameter("family 1 has no M constant to sweep".into()));
    }
    let last = (samples - 1) as f64;
    let values: Vec<f64> =
        (0..samples).map(|i| if i + 1 == samples { hi } else { lo + (hi - lo) * (i as f64 / last) }).collect();
    let mut rows: Vec<SweepRow> = values.iter().map(|&v| row(parameter, spec, phys, v)).collect();

    let den = |v: f64| denominator(parameter, spec, phys, v);
    let mut resonances = Vec::new();
    let mut flagged = Vec::new();
    for (i, r) in rows.iter().enumerate() {
        if r.denominator == 0.0 {
            resonances.push(Resonance { parameter: r.parameter, bracket: [r.parameter, r.parameter] });
            continue;
        }
        let Some(next) = rows.get(i + 1) else { break };
        let (d0, d1) = (r.denominator, next.denominator);
        if d0.is_finite() && d1.is_finite() && d1 != 0.0 && (d0 < 0.0) != (d1 < 0.0) {
            if let Some(found) = bisect(&den, r.parameter, next.parameter, d0) {
                resonances.push(found);
                flagged.extend([i, i + 1]);
            }
        }
    }
    for i in flagged {
        rows[i].resonant = true;
    }
    Ok(Sweep { parameter, rows, resonances })
}

fn bisect(den: &impl Fn(f64) -> Option<f64>, mut a: f64, mut b: f64, mut da: f64) -> Option<Resonance> {
    for _ in 0..200 {
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            break;
        }
        let dm = den(mid)?;
        if dm == 0.0 {
            return Some(Resonance { parameter: mid, bracket: [mid, mid] });
        }
        if (dm < 0.0) == (da < 0.0) {
            a = mid;
            da = dm;
        } else {
            b = mid;
        }
    }
    Some(Resonance { parameter: 0.5 * (a + b), bracket: [a, b] })
}
