//! `ceo-adapt`: run ADAPT-VQE experiments from TOML configs and tabulate them.

mod compare;
mod config;
mod error;
mod number;
mod report;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use ceo_adapt::adapt::{run_adapt, run_uccsd_vqe};
use ceo_adapt::circuits::{export_templates, verify_circuit_templates};
use ceo_adapt::measurement::k_commutativity_grouping;
use ceo_adapt::molecule::{MolecularSystem, Ordering};
use ceo_adapt::pauli::CompiledOperator;
use ceo_adapt::simulator::Statevector;
use ceo_adapt::{Error, Execution};
use clap::{Parser, Subcommand, ValueEnum};

use config::{Method, ReportFormat, RunConfig};
use error::{CliError, CliResult};
use report::RunContext;

#[derive(Parser)]
#[command(
    name = "ceo-adapt",
    version,
    about = "Exact-statevector ADAPT-VQE laboratory"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one experiment and write iterations.csv and summary.json.
    Run { config: PathBuf },
    /// Tabulate error against cumulative costs for several run directories.
    Compare {
        #[arg(required = true)]
        dirs: Vec<PathBuf>,
        /// Also write gnuplot-readable blocks to this file.
        #[arg(long)]
        data: Option<PathBuf>,
    },
    /// Partition a fixture's Hamiltonian into k-commuting collections.
    Grouping {
        fixture: PathBuf,
        /// Locality; repeat for several values. Defaults to every k from 0 to the qubit count.
        #[arg(long = "k")]
        k: Vec<usize>,
        #[arg(long, value_enum, default_value_t = OrderingArg::Interleaved)]
        ordering: OrderingArg,
    },
    /// Check the explicit CNOT circuits against their generator exponentials.
    VerifyCircuits {
        /// Write OpenQASM 2.0 for each template into this directory.
        #[arg(long)]
        qasm_dir: Option<PathBuf>,
        #[arg(long, default_value_t = 0.3, allow_negative_numbers = true)]
        theta: f64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum OrderingArg {
    Interleaved,
    Block,
}

impl From<OrderingArg> for Ordering {
    fn from(o: OrderingArg) -> Self {
        match o {
            OrderingArg::Interleaved => Ordering::Interleaved,
            OrderingArg::Block => Ordering::Block,
        }
    }
}

fn load_system(path: &Path, ordering: Ordering) -> CliResult<MolecularSystem> {
    if !path.is_file() {
        return Err(CliError::Fixture(format!(
            "{} does not exist",
            path.display()
        )));
    }
    MolecularSystem::from_fcidump(path, ordering).map_err(|e| match e {
        Error::Io(_)
        | Error::MalformedHeader(_)
        | Error::IndexOutOfRange { .. }
        | Error::MalformedLine { .. }
        | Error::InfeasibleOccupation { .. }
        | Error::RegisterTooLarge(_) => CliError::Fixture(format!("{}: {e}", path.display())),
        other => CliError::Runtime(other.to_string()),
    })
}

fn cmd_run(path: &Path) -> CliResult<()> {
    let cfg = RunConfig::load(path)?;
    let system = load_system(&cfg.fixture, cfg.ordering)?;
    std::fs::create_dir_all(&cfg.output_dir)
        .map_err(|e| CliError::Config(format!("output_dir {}: {e}", cfg.output_dir.display())))?;
    let exec: Execution = cfg.execution.into();
    let h = CompiledOperator::new(&system.hamiltonian);
    let hf_energy =
        Statevector::basis(system.n_qubits(), system.hf_determinant).expectation_compiled(&h, exec);
    let ctx = RunContext {
        label: cfg.label(),
        fixture: cfg.fixture.display().to_string(),
        geometry: cfg.geometry.clone(),
        seed: cfg.seed,
        ordering: format!("{:?}", cfg.ordering).to_lowercase(),
        n_qubits: system.n_qubits(),
        hf_energy,
        fci_energy: system.fci_energy,
    };
    let report = match cfg.method {
        Method::Adapt => report::adapt_report(ctx, &run_adapt(&system, &cfg.adapt, exec)?)?,
        Method::Uccsd | Method::UccsdTrotterized => {
            let trotterized = cfg.method == Method::UccsdTrotterized;
            let result = run_uccsd_vqe(
                &system,
                trotterized,
                &cfg.adapt.optimizer,
                cfg.adapt.gradient_pricing,
                exec,
            )?;
            report::uccsd_report(ctx, &result)?
        }
    };
    report::write_report(&cfg.output_dir, &report, cfg.format == ReportFormat::Json)?;
    let s = &report.summary;
    println!(
        "{}: {} after {} iterations, error {} Ha, {} parameters, output in {}",
        s.label,
        s.termination,
        s.iterations,
        number::format_sig(s.final_error),
        s.totals.n_params,
        cfg.output_dir.display()
    );
    Ok(())
}

fn cmd_compare(dirs: &[PathBuf], data: Option<&Path>) -> CliResult<()> {
    let variants = compare::load_variants(dirs)?;
    print!("{}", compare::comparison_table(&variants));
    if let Some(path) = data {
        std::fs::write(path, compare::gnuplot_data(&variants))
            .map_err(|e| CliError::Runtime(format!("{}: {e}", path.display())))?;
    }
    Ok(())
}

fn cmd_grouping(fixture: &Path, ks: &[usize], ordering: Ordering) -> CliResult<()> {
    let system = load_system(fixture, ordering)?;
    let ks: Vec<usize> = if ks.is_empty() {
        (0..=system.n_qubits()).collect()
    } else {
        ks.to_vec()
    };
    println!("k,collections,r_hat");
    for k in ks {
        let report = k_commutativity_grouping(&system.hamiltonian, k)?;
        println!(
            "{k},{},{}",
            report.collection_count(),
            number::format_sig(report.r_hat)
        );
    }
    Ok(())
}

fn cmd_verify_circuits(qasm_dir: Option<&Path>, theta: f64) -> CliResult<()> {
    println!("template,cnot_count,cnot_depth,tabulated_count,tabulated_depth,deviation");
    for r in verify_circuit_templates()? {
        println!(
            "{},{},{},{},{},{:.3e}",
            r.name, r.cnot_count, r.cnot_depth, r.tabulated.count, r.tabulated.depth, r.deviation
        );
    }
    if let Some(dir) = qasm_dir {
        let io = |e: std::io::Error| CliError::Runtime(format!("{}: {e}", dir.display()));
        std::fs::create_dir_all(dir).map_err(io)?;
        for (name, qasm) in export_templates(theta) {
            std::fs::write(dir.join(format!("{name}.qasm")), qasm).map_err(io)?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Run { config } => cmd_run(config),
        Command::Compare { dirs, data } => cmd_compare(dirs, data.as_deref()),
        Command::Grouping {
            fixture,
            k,
            ordering,
        } => cmd_grouping(fixture, k, (*ordering).into()),
        Command::VerifyCircuits { qasm_dir, theta } => {
            cmd_verify_circuits(qasm_dir.as_deref(), *theta)
        }
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
