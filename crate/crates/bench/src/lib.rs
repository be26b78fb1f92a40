//! Fixed inputs shared by the benchmarks.

use rossby_core::*;

/// A family 7 solution with a wave and an off-center vortex, typical of real runs.
pub fn vortex_solution() -> Solution {
    let phys = PhysicalParams::new(1.0, 2.0, 0.3).unwrap();
    let spec = validate(&FamilySpec::new(7, 0.4, 1.2).unwrap(), &phys).unwrap();
    let k = spec.kappa();
    let mode = superpose(vec![
        plane_wave(k, 0.5, 0.2, 0.7).unwrap(),
        bessel_vortex(k, 2, 1.0, 0.1, [0.3, -0.4]).unwrap(),
    ])
    .unwrap();
    build_solution(&spec, &phys, mode).unwrap()
}

/// Points spread over a few wavelengths and the whole column.
pub fn probe_coordinates(n: usize) -> Vec<[f64; 4]> {
    (0..n)
        .map(|i| {
            let u = i as f64 / n as f64;
            [3.0 * u, -4.0 + 8.0 * u, 4.0 - 7.0 * (3.0 * u).fract(), 2.0 * (7.0 * u).fract()]
        })
        .collect()
}
