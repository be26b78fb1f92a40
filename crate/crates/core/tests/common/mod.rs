#![allow(dead_code)]

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rossby_core::helmholtz::HorizontalMode;
use rossby_core::*;
use rossby_testkit::fixtures::{random_modes, random_params, ModeParams, Params};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn spec_of(p: &Params) -> (FamilySpec, PhysicalParams) {
    let phys = PhysicalParams::new(p.beta, p.depth, p.drift).unwrap();
    let spec = if p.family == 1 {
        FamilySpec::family1(p.n, p.amplitude)
    } else {
        FamilySpec::new(p.family, p.kz, p.kr).unwrap()
    };
    (spec, phys)
}

pub fn mode_of(modes: &[ModeParams], kappa: f64) -> HorizontalMode {
    let built = modes
        .iter()
        .map(|m| match *m {
            ModeParams::Wave { amplitude, phase, direction } => plane_wave(kappa, amplitude, phase, direction).unwrap(),
            ModeParams::Vortex { order, amplitude, phase, center } => {
                bessel_vortex(kappa, order, amplitude, phase, center).unwrap()
            }
        })
        .collect();
    superpose(built).unwrap()
}

/// Random valid parameters, resampled while the combination is resonant.
pub fn random_valid(rng: &mut ChaCha8Rng, family: u8) -> (Params, ValidatedSpec) {
    loop {
        let p = random_params(rng, family);
        let (spec, phys) = spec_of(&p);
        match validate(&spec, &phys) {
            Ok(v) => return (p, v),
            Err(Error::ResonantDepth { .. }) => continue,
            Err(e) => panic!("fixture produced invalid parameters {p:?}: {e}"),
        }
    }
}

pub fn random_solution(rng: &mut ChaCha8Rng, family: u8) -> (Params, Solution) {
    let (p, v) = random_valid(rng, family);
    let mode = mode_of(&random_modes(rng, v.kappa()), v.kappa());
    let sol = build_solution(&v, v.phys(), mode).unwrap();
    (p, sol)
}

pub fn solution(spec: FamilySpec, phys: PhysicalParams, mode: impl FnOnce(f64) -> HorizontalMode) -> Solution {
    let v = validate(&spec, &phys).unwrap();
    build_solution(&v, &phys, mode(v.kappa())).unwrap()
}

pub fn rel(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / a.abs().max(b.abs())
    }
}
