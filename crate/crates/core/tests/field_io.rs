mod common;

use std::fs;

use proptest::prelude::*;
use rossby_core::fieldio::{read_csv, sample_grid_with_seed, CSV_HEADER};
use rossby_core::*;
use rossby_testkit::bessel_zero_in;
use vtkio::model::{Attribute, DataSet, RectilinearGridPiece};
use vtkio::Vtk;

fn phys(beta: f64, depth: f64, drift: f64) -> PhysicalParams {
    PhysicalParams::new(beta, depth, drift).unwrap()
}

fn grid(n: [usize; 3], x: [f64; 2], y: [f64; 2], z: [f64; 2], t: f64) -> GridSpec {
    GridSpec { nx: n[0], ny: n[1], nz: n[2], x, y, z, t }
}

fn zero_mode_solution() -> Solution {
    common::solution(FamilySpec::new(6, 0.8, 0.0).unwrap(), phys(1.2, 2.0, 0.3), |k| {
        superpose(vec![plane_wave(k, 1.0, 0.4, 0.0).unwrap(), plane_wave(k, -1.0, 0.4, 0.0).unwrap()]).unwrap()
    })
}

fn sample_block() -> FieldBlock {
    let sol = common::solution(FamilySpec::new(3, 0.9, 1.1).unwrap(), phys(1.0, 1.5, -0.25), |k| {
        superpose(vec![plane_wave(k, 0.7, 0.1, 0.3).unwrap(), bessel_vortex(k, 2, 1.3, 0.2, [0.4, -0.3]).unwrap()]).unwrap()
    });
    sample_grid(&sol, &grid([5, 4, 3], [-2.0, 2.0], [-1.0, 1.5], [0.0, 1.5], 0.7)).unwrap()
}

#[test]
fn zonal_only_corners() {
    let sol = zero_mode_solution();
    let g = grid([2, 2, 2], [-1.0, 1.0], [-3.0, 2.0], [0.0, 2.0], 0.5);
    let block = sample_grid(&sol, &g).unwrap();
    assert_eq!(block.p.len(), 8);
    for idx in 0..8 {
        let [_, y, z] = block.point(idx);
        let gz = sol.zonal_coefficient(z).unwrap().value;
        assert_eq!(block.p[idx], gz * y);
        assert_eq!(block.v[idx], 0.0);
    }
}

#[test]
fn grid_outside_the_column() {
    let sol = zero_mode_solution();
    let g = grid([2, 2, 2], [-1.0, 1.0], [-1.0, 1.0], [0.0, 2.5], 0.0);
    assert!(matches!(sample_grid(&sol, &g), Err(Error::DomainError { .. })));
}

#[test]
fn csv_rows_and_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("small.csv");
    let sol = zero_mode_solution();
    let block = sample_grid(&sol, &grid([2, 2, 2], [-1.0, 1.0], [-1.0, 1.0], [0.0, 2.0], 0.0)).unwrap();
    export_csv(&block, &path).unwrap();
    let text = fs::read_to_string(&path).unwrap();
    assert!(!text.contains('\r'));
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 9);
    assert_eq!(lines[0], CSV_HEADER);

    let block = sample_block();
    export_csv(&block, &path).unwrap();
    let rows = read_csv(&path).unwrap();
    assert_eq!(rows.len(), block.p.len());
    for (idx, row) in rows.iter().enumerate() {
        let [x, y, z] = block.point(idx);
        let want = [x, y, z, block.p[idx], block.u[idx], block.v[idx], block.p_z[idx]];
        for (a, b) in row.iter().zip(want) {
            assert_eq!(a.to_bits(), b.to_bits(), "row {idx}");
        }
    }
}

#[test]
fn csv_parses_with_the_standard_library() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("block.csv");
    let block = sample_block();
    export_csv(&block, &path).unwrap();
    let text = fs::read_to_string(&path).unwrap();
    for (idx, line) in text.lines().skip(1).enumerate() {
        let fields: Vec<f64> = line.split(',').map(|f| f.parse().unwrap()).collect();
        assert_eq!(fields.len(), 7);
        assert_eq!(fields[3].to_bits(), block.p[idx].to_bits());
        assert_eq!(fields[6].to_bits(), block.p_z[idx].to_bits());
    }
}

#[test]
fn vtk_header_and_counts() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("small.vtk");
    let sol = zero_mode_solution();
    let block = sample_grid(&sol, &grid([2, 2, 2], [-1.0, 1.0], [-1.0, 1.0], [0.0, 2.0], 0.0)).unwrap();
    export_vtk(&block, &path).unwrap();
    let text = fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("# vtk DataFile Version"));
    assert!(text.lines().any(|l| l == "DIMENSIONS 2 2 2"));
    assert!(text.lines().any(|l| l == "POINT_DATA 8"));

    let block = sample_block();
    export_vtk(&block, &path).unwrap();
    let text = fs::read_to_string(&path).unwrap();
    assert!(text.lines().any(|l| l == "POINT_DATA 60"));
    assert!(text.lines().any(|l| l == "DIMENSIONS 5 4 3"));
}

#[test]
fn vtk_reloads_in_an_independent_reader() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("block.vtk");
    let block = sample_block();
    export_vtk(&block, &path).unwrap();

    let vtk = Vtk::import(&path).unwrap();
    let piece = match vtk.data {
        DataSet::RectilinearGrid { pieces, .. } => pieces.into_iter().next().unwrap(),
        other => panic!("unexpected data set {other:?}"),
    };
    let piece: RectilinearGridPiece = piece.into_loaded_piece_data(None).unwrap();
    let xs = piece.coords.x.cast_into::<f64>().unwrap();
    let ys = piece.coords.y.cast_into::<f64>().unwrap();
    let zs = piece.coords.z.cast_into::<f64>().unwrap();
    assert_eq!(xs, block.grid.xs());
    assert_eq!(ys, block.grid.ys());
    assert_eq!(zs, block.grid.zs());

    let mut seen = Vec::new();
    for attribute in &piece.data.point {
        let Attribute::DataArray(array) = attribute else { panic!("field attribute in point data") };
        let values = array.data.clone().cast_into::<f64>().unwrap();
        let want: Vec<f64> = match array.name.as_str() {
            "p" => block.p.clone(),
            "p_z" => block.p_z.clone(),
            "velocity" => (0..block.p.len()).flat_map(|i| [block.u[i], block.v[i], 0.0]).collect(),
            other => panic!("unexpected array {other}"),
        };
        assert_eq!(values.len(), want.len());
        for (a, b) in values.iter().zip(&want) {
            assert!((a - b).abs() <= 1e-15 * b.abs().max(1e-300), "{}: {a} vs {b}", array.name);
        }
        seen.push(array.name.clone());
    }
    seen.sort();
    assert_eq!(seen, ["p", "p_z", "velocity"]);
}

#[test]
fn io_errors_carry_the_path() {
    let block = sample_block();
    assert!(matches!(export_csv(&block, ""), Err(Error::Io { .. })));
    assert!(matches!(export_vtk(&block, ""), Err(Error::Io { .. })));
    let missing = std::path::Path::new("/nonexistent-dir/out.csv");
    let err = export_csv(&block, missing).unwrap_err();
    assert!(err.to_string().contains("/nonexistent-dir/out.csv"), "{err}");
}

#[test]
fn exports_are_pure() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (sample_block(), sample_block());
    for ext in ["csv", "vtk"] {
        let (pa, pb) = (dir.path().join(format!("a.{ext}")), dir.path().join(format!("b.{ext}")));
        if ext == "csv" {
            export_csv(&a, &pa).unwrap();
            export_csv(&b, &pb).unwrap();
        } else {
            export_vtk(&a, &pa).unwrap();
            export_vtk(&b, &pb).unwrap();
        }
        assert_eq!(fs::read(&pa).unwrap(), fs::read(&pb).unwrap());
    }
}

#[test]
fn drift_invariant_blocks() {
    let mut rng = common::rng(40);
    for family in [1u8, 4, 9] {
        let (p, sol) = common::random_solution(&mut rng, family);
        let t = 2.5;
        let shift = p.drift * t;
        let moving = sample_grid(&sol, &grid([9, 7, 4], [-3.0, 3.0], [-2.0, 2.0], [0.0, p.depth], t)).unwrap();
        let frozen =
            sample_grid(&sol, &grid([9, 7, 4], [-3.0 - shift, 3.0 - shift], [-2.0, 2.0], [0.0, p.depth], 0.0)).unwrap();
        for (name, a) in moving.variables() {
            let b = frozen.variables().into_iter().find(|(n, _)| *n == name).unwrap().1;
            for (x, y) in a.iter().zip(b) {
                assert!((x - y).abs() <= 1e-13 * x.abs().max(y.abs()).max(1.0), "family {family} {name}: {x} vs {y}");
            }
        }
    }
}

#[test]
fn family7_vortex_lobe() {
    // along the row through the center p = f(z) J0(kappa |s|) with no zonal part,
    // so its minimum sits at the first zero of J1
    let kappa = 1.0;
    let sol = common::solution(FamilySpec::new(7, 0.4, kappa).unwrap(), phys(1.0, 2.0, 0.0), |k| {
        bessel_vortex(k, 0, 1.0, 0.0, [0.0, 0.0]).unwrap()
    });
    let g = grid([64, 64, 16], [-8.0, 8.0], [0.0, 8.0], [0.0, 2.0], 0.0);
    let block = sample_grid(&sol, &g).unwrap();
    let lobe = bessel_zero_in(1, 3.5, 4.0).to_f64() / kappa;
    let dx = 16.0 / 63.0;
    for k in 1..16 {
        let row: Vec<(f64, f64)> = (0..64).map(|i| (block.x[i], block.p[g.index(i, 0, k)])).collect();
        for half in [&row[..32], &row[32..]] {
            let (x, _) = half.iter().copied().min_by(|a, b| a.1.total_cmp(&b.1)).unwrap();
            assert!((x.abs() - lobe).abs() <= dx, "slice {k}: minimum at {x}, lobe {lobe}");
        }
    }
    let extrema = block.extrema();
    let (_, p) = extrema.iter().find(|(n, _)| *n == "p").unwrap();
    assert!(p.min < 0.0 && p.max > 0.0);
}

#[test]
fn reports_on_disk() {
    let dir = tempfile::tempdir().unwrap();
    let sol = common::solution(FamilySpec::new(2, 1.0, 1.0).unwrap(), phys(1.0, 1.0, 0.5), |k| {
        plane_wave(k, 1.0, 0.0, 0.0).unwrap()
    });
    let plan = SamplingPlan { n_points: 200, seed: 9, ..SamplingPlan::default() };
    let good = verify_solution(&sol, &plan).unwrap();
    let path = dir.path().join("good.json");
    write_report(&good, &path).unwrap();
    let json: serde_json::Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(json["pass"], true);
    assert_eq!(json["seed"], 9);
    for (name, check) in json["checks"].as_object().unwrap() {
        assert_eq!(check["pass"], true, "{name}");
        assert!(check["max"].is_number() && check["tolerance"].is_number(), "{name}");
    }

    let again = verify_solution(&sol, &plan).unwrap();
    let other = dir.path().join("again.json");
    write_report(&again, &other).unwrap();
    assert_eq!(fs::read(&path).unwrap(), fs::read(&other).unwrap());

    let bad = verify_solution(&sol.perturbed(Perturbation::ScaleM(1.01)).unwrap(), &plan).unwrap();
    let path = dir.path().join("bad.json");
    write_report(&bad, &path).unwrap();
    let json: serde_json::Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(json["pass"], false);
    assert!(json["checks"].as_object().unwrap().values().any(|c| c["pass"] == false));
    assert_eq!(json["perturbation"]["kind"], "scale_m");
}

#[test]
fn block_records_its_seed() {
    let sol = zero_mode_solution();
    let block = sample_grid_with_seed(&sol, &grid([2, 2, 2], [0.0, 1.0], [0.0, 1.0], [0.0, 1.0], 0.0), Some(4)).unwrap();
    assert_eq!(block.provenance.seed, Some(4));
}

proptest! {
    #[test]
    fn ordering_contract(nx in 2usize..7, ny in 2usize..7, nz in 2usize..5) {
        let sol = zero_mode_solution();
        let g = grid([nx, ny, nz], [-1.0, 1.0], [-2.0, 2.0], [0.0, 2.0], 0.0);
        let block = sample_grid(&sol, &g).unwrap();
        let (xs, ys, zs) = (g.xs(), g.ys(), g.zs());
        prop_assert_eq!(block.p.len(), nx * ny * nz);
        for idx in 0..block.p.len() {
            let (i, j, k) = g.unindex(idx);
            prop_assert_eq!(idx, i + nx * (j + ny * k));
            prop_assert_eq!(g.index(i, j, k), idx);
            prop_assert_eq!(block.point(idx), [xs[i], ys[j], zs[k]]);
        }
    }
}
