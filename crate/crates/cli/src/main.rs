use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use rossby_core::families::family_info;
use rossby_core::fieldio::sample_grid_with_seed;
use rossby_core::resonance::{sweep, Sweep};
use rossby_core::*;

mod config;

use config::{resolve, Loaded};

/// Exit status when every check ran but at least one failed.
const CHECKS_FAILED: u8 = 2;

#[derive(Parser)]
#[command(name = "rossby", version, about = "Build and certify exact drifting Rossby-wave solutions")]
struct Cli {
    /// Suppress summary text on stdout.
    #[arg(long, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Describe the nine solution families.
    ListFamilies,
    /// Check a solution against the field equation and boundary conditions.
    Verify { config: PathBuf },
    /// Sample a solution on a grid and export it.
    Build { config: PathBuf },
    /// Tabulate M over one parameter and locate resonances.
    Sweep { config: PathBuf },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let _ = err.print();
            return if err.use_stderr() { ExitCode::FAILURE } else { ExitCode::SUCCESS };
        }
    };
    let quiet = cli.quiet;
    let result = match cli.command {
        Command::ListFamilies => list_families(quiet),
        Command::Verify { config } => verify(&config, quiet),
        Command::Build { config } => build(&config, quiet),
        Command::Sweep { config } => run_sweep(&config, quiet),
    };
    match result {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {}", describe(&err));
            ExitCode::FAILURE
        }
    }
}

fn describe(err: &anyhow::Error) -> String {
    match err.downcast_ref::<Error>() {
        Some(e) => format!("{}: {e}", e.kind()),
        None => format!("{err:#}"),
    }
}

fn list_families(quiet: bool) -> anyhow::Result<ExitCode> {
    if !quiet {
        // summary text is best effort; a closed pipe must not change the exit code
        let _ = print_families(&mut io::stdout().lock());
    }
    Ok(ExitCode::SUCCESS)
}

fn print_families(out: &mut impl Write) -> io::Result<()> {
    for id in FamilyId::ALL {
        let info = family_info(id);
        writeln!(out, "family {}: {} profile", info.id, info.profile)?;
        writeln!(out, "  p = {}", info.stream_function)?;
        writeln!(out, "  horizontal mode: {}", info.helmholtz)?;
        writeln!(out, "  parameters: {}", info.parameters)?;
        writeln!(out, "  constraints: {}", info.constraints)?;
        if let Some(m) = info.m {
            writeln!(out, "  M = {m}")?;
        }
    }
    Ok(())
}

fn verify(path: &Path, quiet: bool) -> anyhow::Result<ExitCode> {
    let loaded = Loaded::read(path)?;
    let resolved = resolve(&loaded.config, true)?;
    let solution = resolved.solution.expect("modes checked by resolve");
    let mut report = verify_solution(&solution, &loaded.config.sampling)?;
    report.config = Some(serde_json::to_value(&resolved.config)?);
    if let Some(out) = loaded.output(&loaded.config.outputs.report) {
        write_report(&report, &out)?;
    }
    if !quiet {
        let _ = print_report(&report, &mut io::stdout().lock());
    }
    Ok(if report.pass { ExitCode::SUCCESS } else { ExitCode::from(CHECKS_FAILED) })
}

fn print_report(report: &VerificationReport, out: &mut impl Write) -> io::Result<()> {
    writeln!(out, "family {} with {} probe points, seed {}", report.family, report.n_points, report.seed)?;
    for (name, check) in report.checks.iter() {
        let verdict = if check.pass { "pass" } else { "FAIL" };
        writeln!(out, "  {name:<18} max {:.3e}  mean {:.3e}  tol {:.0e}  {verdict}", check.max, check.mean, check.tolerance)?;
    }
    writeln!(out, "{}", if report.pass { "all checks passed" } else { "some checks failed" })
}

fn build(path: &Path, quiet: bool) -> anyhow::Result<ExitCode> {
    let loaded = Loaded::read(path)?;
    let resolved = resolve(&loaded.config, true)?;
    let solution = resolved.solution.expect("modes checked by resolve");
    let Some(grid) = &loaded.config.grid else {
        return Err(Error::BadParameter("build needs a grid section".into()).into());
    };
    let block = sample_grid_with_seed(&solution, grid, Some(loaded.config.sampling.seed))?;
    let outputs = &loaded.config.outputs;
    let mut written = Vec::new();
    if let Some(out) = loaded.output(&outputs.csv) {
        export_csv(&block, &out)?;
        written.push(out);
    }
    if let Some(out) = loaded.output(&outputs.vtk) {
        export_vtk(&block, &out)?;
        written.push(out);
    }
    if !quiet {
        let _ = print_block(&block, &written, &mut io::stdout().lock());
    }
    Ok(ExitCode::SUCCESS)
}

fn print_block(block: &FieldBlock, written: &[PathBuf], out: &mut impl Write) -> io::Result<()> {
    let grid = &block.grid;
    writeln!(out, "sampled {} x {} x {} points at t = {}", grid.nx, grid.ny, grid.nz, grid.t)?;
    for (name, e) in block.extrema() {
        writeln!(out, "  {name:<4} min {:+.6e}  max {:+.6e}", e.min, e.max)?;
    }
    for path in written {
        writeln!(out, "wrote {}", path.display())?;
    }
    Ok(())
}

fn run_sweep(path: &Path, quiet: bool) -> anyhow::Result<ExitCode> {
    let loaded = Loaded::read(path)?;
    let config = &loaded.config;
    let Some(plan) = config.sweep else {
        return Err(Error::BadParameter("sweep needs a sweep section".into()).into());
    };
    let result = sweep(&config.family, &config.physical, plan.parameter, plan.range, plan.samples)?;
    match loaded.output(&config.outputs.sweep_csv) {
        Some(out) => {
            let file = File::create(&out).map_err(|source| Error::Io { path: out.clone(), source })?;
            let mut w = BufWriter::new(file);
            write_sweep_csv(&result, &mut w).and_then(|()| w.flush()).map_err(|source| Error::Io { path: out, source })?;
            if !quiet {
                let _ = print_resonances(&result, &mut io::stdout().lock());
            }
        }
        None => {
            let _ = write_sweep_csv(&result, &mut io::stdout().lock());
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn write_sweep_csv(result: &Sweep, w: &mut impl Write) -> io::Result<()> {
    writeln!(w, "{},m,denominator,resonant", result.parameter.name())?;
    for row in &result.rows {
        let m = row.m.map(|m| format!("{m:.16e}")).unwrap_or_default();
        writeln!(w, "{:.16e},{m},{:.16e},{}", row.parameter, row.denominator, row.resonant)?;
    }
    Ok(())
}

fn print_resonances(result: &Sweep, out: &mut impl Write) -> io::Result<()> {
    writeln!(out, "{} rows, {} resonances", result.rows.len(), result.resonances.len())?;
    for r in &result.resonances {
        let [lo, hi] = r.bracket;
        writeln!(out, "  {} = {:.12}  in [{lo:.15}, {hi:.15}]", result.parameter.name(), r.parameter)?;
    }
    Ok(())
}
