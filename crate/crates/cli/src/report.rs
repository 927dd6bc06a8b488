use std::io::Write;
use std::path::Path;

use ceo_adapt::adapt::{AdaptRun, UccsdResult, CHEMICAL_ACCURACY};
use ceo_adapt::measurement::CostLedger;
use ceo_adapt::optimizer::EvaluationCounts;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};
use crate::number::{format_sig, round_sig};

pub const ITERATIONS_CSV: &str = "iterations.csv";
pub const ITERATIONS_JSON: &str = "iterations.json";
pub const SUMMARY_JSON: &str = "summary.json";

pub const COLUMNS: [&str; 7] = [
    "iteration",
    "energy_hartree",
    "error_hartree",
    "n_params",
    "cnot_count",
    "cnot_depth",
    "measurement_units",
];

/// One line of `iterations.csv`. Costs are cumulative; CNOT fields are empty
/// when the ansatz has no gate decomposition.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Row {
    pub iteration: usize,
    pub energy_hartree: f64,
    pub error_hartree: f64,
    pub n_params: usize,
    pub cnot_count: Option<usize>,
    pub cnot_depth: Option<usize>,
    pub measurement_units: f64,
}

impl Row {
    /// Floats rounded to what the CSV carries.
    fn rounded(mut self) -> Self {
        self.energy_hartree = round_sig(self.energy_hartree);
        self.error_hartree = round_sig(self.error_hartree);
        self.measurement_units = round_sig(self.measurement_units);
        self
    }

    fn fields(&self) -> [String; 7] {
        let opt = |v: Option<usize>| v.map(|c| c.to_string()).unwrap_or_default();
        [
            self.iteration.to_string(),
            format_sig(self.energy_hartree),
            format_sig(self.error_hartree),
            self.n_params.to_string(),
            opt(self.cnot_count),
            opt(self.cnot_depth),
            format_sig(self.measurement_units),
        ]
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChemicalAccuracy {
    pub threshold_hartree: f64,
    pub reached: bool,
    /// First row below the threshold.
    pub first: Option<Row>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub label: String,
    pub fixture: String,
    pub geometry: Option<String>,
    pub seed: u64,
    pub method: String,
    pub pool: Option<String>,
    pub ordering: String,
    pub n_qubits: usize,
    pub hf_energy: f64,
    pub fci_energy: f64,
    pub final_energy: f64,
    pub final_error: f64,
    pub termination: String,
    pub iterations: usize,
    /// Cumulative fields of the last row.
    pub totals: Row,
    pub measurement_breakdown: Option<CostLedger>,
    pub evaluations: EvaluationCounts,
    pub chemical_accuracy: ChemicalAccuracy,
}

/// Everything `run` writes, before it is written.
pub struct Report {
    pub rows: Vec<Row>,
    pub summary: Summary,
    pub detail: serde_json::Value,
}

pub struct RunContext {
    pub label: String,
    pub fixture: String,
    pub geometry: Option<String>,
    pub seed: u64,
    pub ordering: String,
    pub n_qubits: usize,
    pub hf_energy: f64,
    pub fci_energy: f64,
}

fn chemical_accuracy(rows: &[Row]) -> ChemicalAccuracy {
    let first = rows
        .iter()
        .find(|r| r.error_hartree < CHEMICAL_ACCURACY)
        .cloned();
    ChemicalAccuracy {
        threshold_hartree: CHEMICAL_ACCURACY,
        reached: first.is_some(),
        first,
    }
}

pub fn adapt_report(ctx: RunContext, run: &AdaptRun) -> CliResult<Report> {
    let rows: Vec<Row> = run
        .records
        .iter()
        .map(|r| {
            Row {
                iteration: r.iteration,
                energy_hartree: r.energy,
                error_hartree: r.error,
                n_params: r.parameter_count,
                cnot_count: Some(r.cnot_count),
                cnot_depth: Some(r.cnot_depth),
                measurement_units: r.measurement_units,
            }
            .rounded()
        })
        .collect();
    let last = rows.last().cloned().expect("reference row always present");
    let mut evaluations = EvaluationCounts::default();
    for r in &run.records {
        evaluations += r.evaluations;
    }
    let summary = Summary {
        label: ctx.label,
        fixture: ctx.fixture,
        geometry: ctx.geometry,
        seed: ctx.seed,
        method: "adapt".into(),
        pool: Some(run.config.pool.to_string()),
        ordering: ctx.ordering,
        n_qubits: ctx.n_qubits,
        hf_energy: round_sig(ctx.hf_energy),
        fci_energy: round_sig(ctx.fci_energy),
        final_energy: last.energy_hartree,
        final_error: last.error_hartree,
        termination: run.stop_reason.to_string(),
        iterations: last.iteration,
        chemical_accuracy: chemical_accuracy(&rows),
        totals: last,
        measurement_breakdown: Some(run.ledger),
        evaluations,
    };
    let detail =
        serde_json::to_value(&run.records).map_err(|e| CliError::Runtime(e.to_string()))?;
    Ok(Report {
        rows,
        summary,
        detail,
    })
}

pub fn uccsd_report(ctx: RunContext, result: &UccsdResult) -> CliResult<Report> {
    let reference = Row {
        iteration: 0,
        energy_hartree: ctx.hf_energy,
        error_hartree: ctx.hf_energy - ctx.fci_energy,
        n_params: 0,
        cnot_count: result.cnot_count.map(|_| 0),
        cnot_depth: result.cnot_depth.map(|_| 0),
        measurement_units: 0.0,
    }
    .rounded();
    let optimized = Row {
        iteration: 1,
        energy_hartree: result.energy,
        error_hartree: result.error,
        n_params: result.parameter_count,
        cnot_count: result.cnot_count,
        cnot_depth: result.cnot_depth,
        measurement_units: result.measurement_units,
    }
    .rounded();
    let rows = vec![reference, optimized.clone()];
    let method = if result.trotterized {
        "uccsd-trotterized"
    } else {
        "uccsd"
    };
    let summary = Summary {
        label: ctx.label,
        fixture: ctx.fixture,
        geometry: ctx.geometry,
        seed: ctx.seed,
        method: method.into(),
        pool: None,
        ordering: ctx.ordering,
        n_qubits: ctx.n_qubits,
        hf_energy: round_sig(ctx.hf_energy),
        fci_energy: round_sig(ctx.fci_energy),
        final_energy: optimized.energy_hartree,
        final_error: optimized.error_hartree,
        termination: if result.converged {
            "converged"
        } else {
            "not-converged"
        }
        .into(),
        iterations: 1,
        chemical_accuracy: chemical_accuracy(&rows),
        totals: optimized,
        measurement_breakdown: None,
        evaluations: result.evaluations,
    };
    let detail = serde_json::to_value(result).map_err(|e| CliError::Runtime(e.to_string()))?;
    Ok(Report {
        rows,
        summary,
        detail,
    })
}

pub fn write_rows(out: impl Write, rows: &[Row]) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(COLUMNS)?;
    for r in rows {
        w.write_record(r.fields())?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_report(dir: &Path, report: &Report, with_detail: bool) -> CliResult<()> {
    let io = |e: std::io::Error| CliError::Runtime(format!("writing {}: {e}", dir.display()));
    let file = std::fs::File::create(dir.join(ITERATIONS_CSV)).map_err(io)?;
    write_rows(file, &report.rows).map_err(|e| CliError::Runtime(e.to_string()))?;
    std::fs::write(dir.join(SUMMARY_JSON), pretty(&report.summary)?).map_err(io)?;
    if with_detail {
        std::fs::write(dir.join(ITERATIONS_JSON), pretty(&report.detail)?).map_err(io)?;
    }
    Ok(())
}

fn pretty(value: &impl Serialize) -> CliResult<String> {
    let mut s =
        serde_json::to_string_pretty(value).map_err(|e| CliError::Runtime(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

/// Reads an `iterations.csv`, rejecting any other header.
pub fn read_rows(path: &Path) -> CliResult<Vec<Row>> {
    let mut reader = csv::Reader::from_path(path)
        .map_err(|e| CliError::Schema(format!("{}: {e}", path.display())))?;
    let headers = reader
        .headers()
        .map_err(|e| CliError::Schema(format!("{}: {e}", path.display())))?
        .clone();
    if headers.iter().ne(COLUMNS) {
        return Err(CliError::Schema(format!(
            "{}: expected columns {}, found {}",
            path.display(),
            COLUMNS.join(","),
            headers.iter().collect::<Vec<_>>().join(",")
        )));
    }
    let rows = reader
        .deserialize()
        .collect::<Result<Vec<Row>, _>>()
        .map_err(|e| CliError::Schema(format!("{}: {e}", path.display())))?;
    if rows.is_empty() {
        return Err(CliError::Schema(format!("{}: no rows", path.display())));
    }
    Ok(rows)
}
