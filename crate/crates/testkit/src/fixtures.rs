//! Seeded random parameter sets inside each family's stated constraints.

use rand::Rng;

/// Plain numbers for one solution; `n` and `amplitude` matter for family 1
/// only, `kr` for the families with a `K` relation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Params {
    pub family: u8,
    pub beta: f64,
    pub depth: f64,
    pub drift: f64,
    pub n: u32,
    pub amplitude: f64,
    pub kz: f64,
    pub kr: f64,
}

impl Params {
    /// `K` for the families that define it.
    pub fn k(&self) -> Option<f64> {
        let (kz, kr) = (self.kz, self.kr);
        match self.family {
            2 | 3 => Some((kz * kz + kr * kr).sqrt()),
            4 | 7 => Some((kr * kr - kz * kz).sqrt()),
            5 | 8 => Some((kz * kz - kr * kr).sqrt()),
            _ => None,
        }
    }

    /// Horizontal wavenumber of `F`.
    pub fn kappa(&self) -> f64 {
        match self.family {
            1 => std::f64::consts::PI * f64::from(self.n) / self.depth,
            6 | 9 => self.kz.abs(),
            _ => self.kr.abs(),
        }
    }
}

/// Random parameters for `family`. Callers resample when the combination
/// turns out to be resonant.
pub fn random_params(rng: &mut impl Rng, family: u8) -> Params {
    let mut p = Params {
        family,
        beta: rng.gen_range(0.2..3.0),
        depth: rng.gen_range(0.5..3.0),
        drift: rng.gen_range(-1.0..1.0),
        n: 0,
        amplitude: 0.0,
        kz: 0.0,
        kr: 0.0,
    };
    match family {
        1 => {
            p.n = rng.gen_range(1..=4);
            p.amplitude = rng.gen_range(-2.0..2.0);
        }
        2 | 3 => {
            p.kz = rng.gen_range(0.2..3.0);
            p.kr = rng.gen_range(0.2..3.0);
        }
        4 | 7 => {
            p.kr = rng.gen_range(0.3..3.0);
            p.kz = rng.gen_range(0.05..0.9 * p.kr);
        }
        5 | 8 => {
            p.kz = rng.gen_range(0.3..3.0);
            p.kr = rng.gen_range(0.05..0.9 * p.kz);
        }
        6 | 9 => p.kz = rng.gen_range(0.2..3.0),
        _ => panic!("no family {family}"),
    }
    p
}

/// One horizontal mode as plain numbers.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ModeParams {
    Wave { amplitude: f64, phase: f64, direction: f64 },
    Vortex { order: u32, amplitude: f64, phase: f64, center: [f64; 2] },
}

/// One to three random plane waves and vortices of order 0 to 3, with
/// vortex centers within `2 / kappa` of the origin.
pub fn random_modes(rng: &mut impl Rng, kappa: f64) -> Vec<ModeParams> {
    let count = rng.gen_range(1..=3);
    let tau = std::f64::consts::TAU;
    (0..count)
        .map(|_| {
            let amplitude = rng.gen_range(-1.0..1.0);
            let phase = rng.gen_range(0.0..tau);
            if rng.gen_bool(0.5) {
                ModeParams::Wave { amplitude, phase, direction: rng.gen_range(0.0..tau) }
            } else {
                let r = 2.0 / kappa;
                ModeParams::Vortex {
                    order: rng.gen_range(0..=3),
                    amplitude,
                    phase,
                    center: [rng.gen_range(-r..r), rng.gen_range(-r..r)],
                }
            }
        })
        .collect()
}
