//! Closed-form solutions `F(s, y)` of the 2-D Helmholtz equation
//! `F_ss + F_yy + kappa^2 F = 0`, evaluated together with all their partial
//! derivatives through second order.
//!
//! Two elementary families are provided, plane waves and bounded Bessel
//! vortices `J_m(kappa rho) cos(m chi + phase)`, plus their superpositions at a
//! common wavenumber.

mod bessel;

use std::ops::{Add, AddAssign};

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};

pub use bessel::{bessel_j, bessel_zero, MAX_ARGUMENT as BESSEL_MAX_ARGUMENT, MAX_ORDER as BESSEL_MAX_ORDER};

/// Below this value of `kappa * rho` vortices are evaluated from the ascending
/// series written in Cartesian harmonics instead of polar coordinates.
const VORTEX_SERIES_RADIUS: f64 = 1.0;
const VORTEX_SERIES_TERMS: usize = 24;

/// Relative tolerance for two wavenumbers to count as equal.
pub const WAVENUMBER_RTOL: f64 = 1e-12;

/// Value and partial derivatives of `F(s, y)` through second order.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct Jet2 {
    pub f: f64,
    pub fs: f64,
    pub fy: f64,
    pub fss: f64,
    pub fsy: f64,
    pub fyy: f64,
}

impl Jet2 {
    pub fn laplacian(&self) -> f64 {
        self.fss + self.fyy
    }

    pub fn helmholtz_defect(&self, kappa: f64) -> f64 {
        self.fss + self.fyy + kappa * kappa * self.f
    }

    fn from_complex(weight: Complex64, parts: [Complex64; 6]) -> Self {
        let [f, fs, fy, fss, fsy, fyy] = parts.map(|c| (weight * c).re);
        Jet2 { f, fs, fy, fss, fsy, fyy }
    }
}

impl Add for Jet2 {
    type Output = Jet2;

    fn add(mut self, rhs: Jet2) -> Jet2 {
        self += rhs;
        self
    }
}

impl AddAssign for Jet2 {
    fn add_assign(&mut self, rhs: Jet2) {
        self.f += rhs.f;
        self.fs += rhs.fs;
        self.fy += rhs.fy;
        self.fss += rhs.fss;
        self.fsy += rhs.fsy;
        self.fyy += rhs.fyy;
    }
}

/// `A cos(kappa (s cos(direction) + y sin(direction)) + phase)`
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PlaneWave {
    pub kappa: f64,
    pub amplitude: f64,
    pub phase: f64,
    pub direction: f64,
}

/// `A J_m(kappa rho) cos(m chi + phase)` in polar coordinates about `center`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BesselVortex {
    pub kappa: f64,
    pub order: u32,
    pub amplitude: f64,
    pub phase: f64,
    pub center: [f64; 2],
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum HorizontalMode {
    PlaneWave(PlaneWave),
    BesselVortex(BesselVortex),
    Superposition { kappa: f64, modes: Vec<HorizontalMode> },
}

fn check_kappa(kappa: f64) -> Result<()> {
    if kappa.is_finite() && kappa > 0.0 {
        Ok(())
    } else {
        Err(Error::BadParameter(format!("Helmholtz wavenumber must be positive, got {kappa}")))
    }
}

fn check_finite(name: &str, value: f64) -> Result<()> {
    if value.is_finite() {
        Ok(())
    } else {
        Err(Error::BadParameter(format!("{name} must be finite, got {value}")))
    }
}

pub fn plane_wave(kappa: f64, amplitude: f64, phase: f64, direction: f64) -> Result<HorizontalMode> {
    check_kappa(kappa)?;
    check_finite("amplitude", amplitude)?;
    check_finite("phase", phase)?;
    check_finite("direction", direction)?;
    Ok(HorizontalMode::PlaneWave(PlaneWave { kappa, amplitude, phase, direction }))
}

pub fn bessel_vortex(kappa: f64, order: u32, amplitude: f64, phase: f64, center: [f64; 2]) -> Result<HorizontalMode> {
    check_kappa(kappa)?;
    if order > BESSEL_MAX_ORDER {
        return Err(Error::BadParameter(format!("vortex order must be at most {BESSEL_MAX_ORDER}, got {order}")));
    }
    check_finite("amplitude", amplitude)?;
    check_finite("phase", phase)?;
    check_finite("center", center[0])?;
    check_finite("center", center[1])?;
    Ok(HorizontalMode::BesselVortex(BesselVortex { kappa, order, amplitude, phase, center }))
}

pub fn superpose(modes: Vec<HorizontalMode>) -> Result<HorizontalMode> {
    let Some(first) = modes.first() else {
        return Err(Error::BadParameter("cannot superpose an empty list of modes".into()));
    };
    let kappa = first.kappa();
    for mode in &modes[1..] {
        if !same_wavenumber(kappa, mode.kappa()) {
            return Err(Error::MixedWavenumbers { expected: kappa, found: mode.kappa() });
        }
    }
    Ok(HorizontalMode::Superposition { kappa, modes })
}

pub fn same_wavenumber(a: f64, b: f64) -> bool {
    (a - b).abs() <= WAVENUMBER_RTOL * a.abs().max(b.abs())
}

pub fn eval_jet(mode: &HorizontalMode, s: f64, y: f64) -> Jet2 {
    mode.jet(s, y)
}

impl HorizontalMode {
    pub fn kappa(&self) -> f64 {
        match self {
            HorizontalMode::PlaneWave(w) => w.kappa,
            HorizontalMode::BesselVortex(v) => v.kappa,
            HorizontalMode::Superposition { kappa, .. } => *kappa,
        }
    }

    /// Sum of the absolute amplitudes of all elementary components.
    pub fn amplitude_total(&self) -> f64 {
        match self {
            HorizontalMode::PlaneWave(w) => w.amplitude.abs(),
            HorizontalMode::BesselVortex(v) => v.amplitude.abs(),
            HorizontalMode::Superposition { modes, .. } => modes.iter().map(HorizontalMode::amplitude_total).sum(),
        }
    }

    /// Centers of all vortex components.
    pub fn vortex_centers(&self) -> Vec<[f64; 2]> {
        match self {
            HorizontalMode::PlaneWave(_) => Vec::new(),
            HorizontalMode::BesselVortex(v) => vec![v.center],
            HorizontalMode::Superposition { modes, .. } => modes.iter().flat_map(HorizontalMode::vortex_centers).collect(),
        }
    }

    pub fn jet(&self, s: f64, y: f64) -> Jet2 {
        match self {
            HorizontalMode::PlaneWave(w) => w.jet(s, y),
            HorizontalMode::BesselVortex(v) => v.jet(s, y),
            HorizontalMode::Superposition { modes, .. } => {
                modes.iter().fold(Jet2::default(), |acc, mode| acc + mode.jet(s, y))
            }
        }
    }

    pub fn value(&self, s: f64, y: f64) -> f64 {
        self.jet(s, y).f
    }

    /// `|F_ss + F_yy + kappa^2 F| / (kappa^2 (|F| + total amplitude))`.
    pub fn helmholtz_residual(&self, s: f64, y: f64) -> f64 {
        let jet = self.jet(s, y);
        let kappa = self.kappa();
        let defect = jet.helmholtz_defect(kappa).abs();
        let scale = kappa * kappa * (jet.f.abs() + self.amplitude_total());
        if defect == 0.0 {
            0.0
        } else {
            defect / scale.max(f64::MIN_POSITIVE)
        }
    }

    /// Same mode with every amplitude multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> HorizontalMode {
        match self {
            HorizontalMode::PlaneWave(w) => HorizontalMode::PlaneWave(PlaneWave { amplitude: w.amplitude * factor, ..*w }),
            HorizontalMode::BesselVortex(v) => {
                HorizontalMode::BesselVortex(BesselVortex { amplitude: v.amplitude * factor, ..*v })
            }
            HorizontalMode::Superposition { kappa, modes } => HorizontalMode::Superposition {
                kappa: *kappa,
                modes: modes.iter().map(|m| m.scaled(factor)).collect(),
            },
        }
    }
}

impl PlaneWave {
    fn jet(&self, s: f64, y: f64) -> Jet2 {
        let (sin_dir, cos_dir) = self.direction.sin_cos();
        let theta = self.kappa * (s * cos_dir + y * sin_dir) + self.phase;
        let (sin_t, cos_t) = theta.sin_cos();
        let a = self.amplitude;
        let ak = a * self.kappa;
        let akk = ak * self.kappa;
        Jet2 {
            f: a * cos_t,
            fs: -ak * cos_dir * sin_t,
            fy: -ak * sin_dir * sin_t,
            fss: -akk * cos_dir * cos_dir * cos_t,
            fsy: -akk * cos_dir * sin_dir * cos_t,
            fyy: -akk * sin_dir * sin_dir * cos_t,
        }
    }
}

impl BesselVortex {
    fn jet(&self, s: f64, y: f64) -> Jet2 {
        let ds = s - self.center[0];
        let dy = y - self.center[1];
        let rho = ds.hypot(dy);
        if self.kappa * rho < VORTEX_SERIES_RADIUS {
            self.series_jet(ds, dy)
        } else {
            self.polar_jet(ds, dy, rho)
        }
    }

    /// `J_m(kappa rho) e^{i m chi} = (kappa/2)^m / m! * (ds + i dy)^m * G(rho^2)`
    /// with `G` an even power series, so every derivative is smooth at the center.
    fn series_jet(&self, ds: f64, dy: f64) -> Jet2 {
        let m = self.order;
        let r2 = ds * ds + dy * dy;
        let q = -0.25 * self.kappa * self.kappa;

        // G, G', G'' in the variable r2
        let (mut g0, mut g1, mut g2) = (0.0, 0.0, 0.0);
        let mut coeff = 1.0;
        let mut powers = [1.0, 0.0, 0.0]; // r2^j, r2^(j-1), r2^(j-2)
        for j in 0..VORTEX_SERIES_TERMS {
            let jf = j as f64;
            if j > 0 {
                coeff *= q / (jf * (jf + f64::from(m)));
                powers = [powers[0] * r2, powers[0], powers[1]];
            }
            g0 += coeff * powers[0];
            g1 += jf * coeff * powers[1];
            g2 += jf * (jf - 1.0) * coeff * powers[2];
        }

        let z = Complex64::new(ds, dy);
        let i = Complex64::i();
        let mf = f64::from(m);
        let w = z.powu(m);
        let wz = if m >= 1 { mf * z.powu(m - 1) } else { Complex64::new(0.0, 0.0) };
        let wzz = if m >= 2 { mf * (mf - 1.0) * z.powu(m - 2) } else { Complex64::new(0.0, 0.0) };
        let (w_s, w_y) = (wz, i * wz);
        let (w_ss, w_yy, w_sy) = (wzz, -wzz, i * wzz);

        let gs = 2.0 * ds * g1;
        let gy = 2.0 * dy * g1;
        let gss = 2.0 * g1 + 4.0 * ds * ds * g2;
        let gyy = 2.0 * g1 + 4.0 * dy * dy * g2;
        let gsy = 4.0 * ds * dy * g2;

        let parts = [
            w * g0,
            w_s * g0 + w * gs,
            w_y * g0 + w * gy,
            w_ss * g0 + 2.0 * w_s * gs + w * gss,
            w_sy * g0 + w_s * gy + w_y * gs + w * gsy,
            w_yy * g0 + 2.0 * w_y * gy + w * gyy,
        ];

        let mut scale = self.amplitude;
        for k in 1..=m {
            scale *= 0.5 * self.kappa / f64::from(k);
        }
        Jet2::from_complex(Complex64::from_polar(scale, self.phase), parts)
    }

    fn polar_jet(&self, ds: f64, dy: f64, rho: f64) -> Jet2 {
        let kappa = self.kappa;
        let mf = f64::from(self.order);
        let x = kappa * rho;
        let (j, jp) = bessel::bessel_j_unchecked(self.order, x);
        let jpp = -jp / x + (mf * mf / (x * x) - 1.0) * j;

        let (sin_t, cos_t) = (mf * dy.atan2(ds) + self.phase).sin_cos();
        let a = self.amplitude;
        let f = a * j * cos_t;
        let f_r = a * kappa * jp * cos_t;
        let f_c = -a * mf * j * sin_t;
        let f_rr = a * kappa * kappa * jpp * cos_t;
        let f_cc = -mf * mf * f;
        let f_rc = -a * kappa * mf * jp * sin_t;

        let c = ds / rho;
        let sn = dy / rho;
        let radial = f_r / rho + f_cc / (rho * rho);
        let cross = f_rc / rho - f_c / (rho * rho);
        Jet2 {
            f,
            fs: c * f_r - sn * f_c / rho,
            fy: sn * f_r + c * f_c / rho,
            fss: c * c * f_rr + sn * sn * radial - 2.0 * c * sn * cross,
            fsy: c * sn * (f_rr - radial) + (c * c - sn * sn) * cross,
            fyy: sn * sn * f_rr + c * c * radial + 2.0 * c * sn * cross,
        }
    }
}
