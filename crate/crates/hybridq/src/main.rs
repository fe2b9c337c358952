use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use hybridq::config::{full_grid, ExperimentConfig};
use hybridq::gatefile::{GateFile, OptionsJson};
use hybridq::sweep::{emit_plot_data, rows_csv, run_sweep, timing_tsv};
use hybridq::validate::validate_noiseless;
use hybridq::{ideal_gate_name, write_output, Error, Result};
use hybridq_core::circuits::gate_matrix;
use hybridq_core::ghz::{ghz_density_report, run_ghz_sequence, GhzOptions};
use hybridq_core::grape::{optimize_gate, GateJob, GrapeOptions};
use hybridq_core::hamiltonians::GrapeSystem;
use hybridq_core::lindblad::unitary_superop;
use hybridq_core::tomography::{chi_from_map, chi_report, completeness_defect, process_fidelity, OperatorBasis};

#[derive(Parser, Debug)]
#[command(name = "hybridq", version, about = "Hybrid Rydberg/flux-qubit simulation experiments")]
struct Cli {
    /// TOML experiment configuration.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Overrides the configured seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Primary output file. Companion files are written next to it.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Noiseless phase-estimation checks.
    Validate,
    /// Five-step GHZ preparation on the hybrid system.
    Ghz(GhzArgs),
    /// Optimize one gate with GRAPE and store it as JSON.
    GrapeGate(GrapeGateArgs),
    /// χ matrix of a stored gate, compared with an ideal gate.
    Tomography(TomographyArgs),
    /// Phase-estimation probability over an (nts, iters) grid.
    Sweep(SweepArgs),
}

#[derive(Args, Debug)]
struct GhzArgs {
    /// Skip the collapse operators.
    #[arg(long)]
    noiseless: bool,
}

#[derive(Args, Debug)]
struct GrapeGateArgs {
    #[arg(long)]
    gate: String,
    /// `ryd` or `flux`.
    #[arg(long)]
    system: String,
    #[arg(long)]
    zeta: Option<f64>,
    #[arg(long)]
    nts: Option<usize>,
    #[arg(long)]
    iters: Option<usize>,
}

#[derive(Args, Debug)]
struct TomographyArgs {
    /// Gate JSON from `grape-gate`. Without it the ideal gate itself is reported.
    #[arg(long)]
    gate: Option<PathBuf>,
    #[arg(long)]
    ideal: String,
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[arg(long)]
    zeta: Option<f64>,
    /// Comma-separated slice counts.
    #[arg(long, value_delimiter = ',')]
    nts: Option<Vec<usize>>,
    /// Comma-separated iteration counts.
    #[arg(long, value_delimiter = ',')]
    iters: Option<Vec<usize>>,
    #[arg(long)]
    shots: Option<usize>,
    /// 16 × 15 grid over 50–200 slices and 100–800 iterations.
    #[arg(long)]
    full: bool,
    /// Also write per-cell wall times to `<out>.timing.tsv`. These vary between runs.
    #[arg(long)]
    timing: bool,
}

fn sibling(path: &Path, suffix: &str) -> PathBuf {
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    path.with_file_name(format!("{stem}.{suffix}"))
}

fn load_config(cli: &Cli) -> Result<ExperimentConfig> {
    let mut c = match &cli.config {
        Some(p) => ExperimentConfig::read(p)?,
        None => ExperimentConfig::default(),
    };
    if let Some(s) = cli.seed {
        c.seed = s;
    }
    Ok(c)
}

fn validate(cli: &Cli, c: &ExperimentConfig) -> Result<bool> {
    let report = validate_noiseless(c.seed)?;
    let tsv = report.to_tsv();
    print!("{tsv}");
    if let Some(out) = &cli.out {
        write_output(out, &tsv)?;
    }
    Ok(report.passed())
}

fn ghz(cli: &Cli, c: &ExperimentConfig, args: &GhzArgs) -> Result<bool> {
    let hp = &c.hybrid;
    let options = GhzOptions {
        setpoints: c.ghz.setpoints(hp)?,
        grid_density: c.ghz.grid_density,
        window_factor: c.ghz.window_factor,
        fidelity_floor: None,
    };
    let r = run_ghz_sequence(hp, c.ghz.noise && !args.noiseless, &options)?;
    let out = cli.out.clone().unwrap_or_else(|| PathBuf::from("ghz_density.csv"));
    write_output(&out, &ghz_density_report(&r.final_state)?)?;
    write_output(&sibling(&out, "steps.tsv"), &r.step_report())?;
    print!("{}", r.step_report());
    println!("fidelity\t{:.6}\ntotal_time_ns\t{:.6}", r.fidelity_vs_ghz, r.total_time);
    Ok(c.ghz.fidelity_floor.map_or(true, |f| r.fidelity_vs_ghz >= f))
}

fn grape_gate(cli: &Cli, c: &ExperimentConfig, args: &GrapeGateArgs) -> Result<bool> {
    let gate = ideal_gate_name(&args.gate).ok_or_else(|| Error::Config(format!("unknown gate `{}`", args.gate)))?;
    let system = match args.system.as_str() {
        "ryd" | "rydberg" => GrapeSystem::Rydberg,
        "flux" => GrapeSystem::Flux,
        s => return Err(Error::Config(format!("unknown system `{s}`"))),
    };
    let n_qubits = gate_matrix(gate, &[])?.rows().trailing_zeros() as usize;
    let mut model = c.model.clone();
    if let Some(z) = args.zeta {
        model.flux.zeta = z;
    }
    let options = GrapeOptions {
        n_ts: args.nts.unwrap_or(c.grape.n_ts),
        max_iter: args.iters.unwrap_or(c.grape.max_iter),
        seed: c.seed,
        ..c.grape.clone()
    };
    let job = GateJob { key: format!("{}_{}", args.gate.to_ascii_lowercase(), system.tag()), system, n_qubits, gate };
    let start = Instant::now();
    let r = optimize_gate(&job, &model, &options, None)?;
    eprintln!("wall time {:.2} s", start.elapsed().as_secs_f64());
    let file = GateFile::new(gate, system.tag(), n_qubits, &r, OptionsJson::new(&options, model.flux.zeta, model.noise));
    let out = cli.out.clone().unwrap_or_else(|| PathBuf::from("gate.json"));
    write_output(&out, &file.to_json()?)?;
    println!("fidelity_error\t{:.6e}\niterations\t{}\nterminated_by\t{}", r.fidelity_error, r.iterations_used, file.terminated_by);
    Ok(true)
}

fn tomography(cli: &Cli, args: &TomographyArgs) -> Result<bool> {
    let ideal = ideal_gate_name(&args.ideal).ok_or_else(|| Error::Config(format!("unknown gate `{}`", args.ideal)))?;
    let u = gate_matrix(ideal, &[])?;
    let n = u.rows().trailing_zeros() as usize;
    let basis = OperatorBasis::pauli(n)?;
    let chi_th = chi_from_map(&unitary_superop(&u), &basis)?;
    let chi = match &args.gate {
        Some(p) => {
            let g = GateFile::read(p)?;
            let map = g.map.to_matrix()?;
            if map.rows() != u.rows() * u.rows() {
                return Err(Error::GateFile(format!("{} map does not act on {n} qubit(s)", g.gate)));
            }
            chi_from_map(&map, &basis)?
        }
        None => chi_th.clone(),
    };
    let out = cli.out.clone().unwrap_or_else(|| PathBuf::from("chi.csv"));
    write_output(&out, &chi_report(&chi))?;
    println!("process_fidelity\t{:.9}\ncompleteness_defect\t{:.3e}", process_fidelity(&chi_th, &chi)?, completeness_defect(&chi));
    Ok(true)
}

fn sweep(cli: &Cli, mut c: ExperimentConfig, args: &SweepArgs) -> Result<bool> {
    if let Some(z) = args.zeta {
        c.set_zeta(z);
    }
    if args.full {
        (c.nts_list, c.iters_list) = full_grid();
    }
    if let Some(n) = &args.nts {
        c.nts_list = n.clone();
    }
    if let Some(i) = &args.iters {
        c.iters_list = i.clone();
    }
    if let Some(s) = args.shots {
        c.shots = s;
    }
    let rows = run_sweep(&c)?;
    let out = cli.out.clone().unwrap_or_else(|| c.output.clone());
    write_output(&out, &rows_csv(&rows)?)?;
    write_output(&sibling(&out, "grid.tsv"), &emit_plot_data(&rows)?)?;
    if args.timing {
        write_output(&sibling(&out, "timing.tsv"), &timing_tsv(&rows))?;
    }
    print!("{}", emit_plot_data(&rows)?);
    Ok(rows.iter().all(|r| r.error.is_none()))
}

fn run(cli: &Cli) -> Result<bool> {
    if let Some(t) = cli.threads {
        rayon::ThreadPoolBuilder::new().num_threads(t).build_global().map_err(|e| Error::Config(e.to_string()))?;
    }
    let c = load_config(cli)?;
    match &cli.command {
        Command::Validate => validate(cli, &c),
        Command::Ghz(a) => ghz(cli, &c, a),
        Command::GrapeGate(a) => grape_gate(cli, &c, a),
        Command::Tomography(a) => tomography(cli, a),
        Command::Sweep(a) => sweep(cli, c, a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("one or more checks failed");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
