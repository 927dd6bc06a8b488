use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use ceo_adapt::adapt::CHEMICAL_ACCURACY;

use crate::error::{CliError, CliResult};
use crate::number::format_sig;
use crate::report::{read_rows, Row, Summary, ITERATIONS_CSV, SUMMARY_JSON};

pub struct Variant {
    pub label: String,
    pub rows: Vec<Row>,
}

/// Loads a run directory. The label comes from `summary.json` when present,
/// otherwise from the directory name.
pub fn load_variant(dir: &Path) -> CliResult<Variant> {
    let rows = read_rows(&dir.join(ITERATIONS_CSV))?;
    let fallback = dir
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_else(|| dir.display().to_string());
    let label = std::fs::read_to_string(dir.join(SUMMARY_JSON))
        .ok()
        .and_then(|text| serde_json::from_str::<Summary>(&text).ok())
        .map(|s| s.label)
        .unwrap_or(fallback);
    Ok(Variant { label, rows })
}

pub fn load_variants(dirs: &[PathBuf]) -> CliResult<Vec<Variant>> {
    if dirs.is_empty() {
        return Err(CliError::Schema("no run directories given".into()));
    }
    dirs.iter().map(|d| load_variant(d)).collect()
}

fn cell(v: Option<usize>) -> String {
    v.map(|c| c.to_string()).unwrap_or_else(|| "-".into())
}

fn render(header: &[&str], body: &[Vec<String>]) -> String {
    let widths: Vec<usize> = (0..header.len())
        .map(|c| {
            body.iter()
                .map(|r| r[c].len())
                .chain([header[c].len()])
                .max()
                .unwrap_or(0)
        })
        .collect();
    let mut out = String::new();
    let line = |out: &mut String, cells: &mut dyn Iterator<Item = &str>| {
        let parts: Vec<String> = cells
            .zip(&widths)
            .map(|(c, w)| format!("{c:>w$}"))
            .collect();
        writeln!(out, "{}", parts.join("  ").trim_end()).expect("writing to a String");
    };
    line(&mut out, &mut header.iter().copied());
    for row in body {
        line(&mut out, &mut row.iter().map(String::as_str));
    }
    out
}

/// Every row of every variant, then the first chemically accurate row of each.
pub fn comparison_table(variants: &[Variant]) -> String {
    let header = [
        "variant",
        "iteration",
        "error_hartree",
        "n_params",
        "cnot_count",
        "cnot_depth",
        "measurement_units",
    ];
    let as_cells = |label: &str, r: &Row| {
        vec![
            label.to_owned(),
            r.iteration.to_string(),
            format_sig(r.error_hartree),
            r.n_params.to_string(),
            cell(r.cnot_count),
            cell(r.cnot_depth),
            format_sig(r.measurement_units),
        ]
    };
    let all: Vec<Vec<String>> = variants
        .iter()
        .flat_map(|v| v.rows.iter().map(|r| as_cells(&v.label, r)))
        .collect();
    let firsts: Vec<Vec<String>> = variants
        .iter()
        .map(
            |v| match v.rows.iter().find(|r| r.error_hartree < CHEMICAL_ACCURACY) {
                Some(r) => as_cells(&v.label, r),
                None => {
                    let mut cells = vec!["-".to_owned(); header.len()];
                    cells[0] = v.label.clone();
                    cells
                }
            },
        )
        .collect();
    let mut out = render(&header, &all);
    writeln!(
        out,
        "\nfirst iteration with error below {CHEMICAL_ACCURACY} Ha"
    )
    .expect("String");
    out.push_str(&render(&header, &firsts));
    out
}

/// Whitespace-separated blocks, one per variant, separated by two blank
/// lines so each is addressable with gnuplot's `index`.
pub fn gnuplot_data(variants: &[Variant]) -> String {
    let mut out = String::new();
    for (k, v) in variants.iter().enumerate() {
        if k > 0 {
            out.push_str("\n\n");
        }
        let gp = |c: Option<usize>| c.map(|c| c.to_string()).unwrap_or_else(|| "NaN".into());
        writeln!(out, "# {}", v.label).expect("String");
        writeln!(
            out,
            "# iteration error_hartree n_params cnot_count cnot_depth measurement_units"
        )
        .expect("String");
        for r in &v.rows {
            writeln!(
                out,
                "{} {} {} {} {} {}",
                r.iteration,
                format_sig(r.error_hartree),
                r.n_params,
                gp(r.cnot_count),
                gp(r.cnot_depth),
                format_sig(r.measurement_units)
            )
            .expect("String");
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn variant(label: &str, errors: &[f64]) -> Variant {
        let rows = errors
            .iter()
            .enumerate()
            .map(|(k, &e)| Row {
                iteration: k,
                energy_hartree: -1.0 + e,
                error_hartree: e,
                n_params: k,
                cnot_count: Some(9 * k),
                cnot_depth: Some(7 * k),
                measurement_units: 100.0 * k as f64,
            })
            .collect();
        Variant {
            label: label.into(),
            rows,
        }
    }

    #[test]
    fn identical_variants_give_identical_columns() {
        let table = comparison_table(&[variant("a", &[0.1, 1e-4]), variant("a", &[0.1, 1e-4])]);
        let lines: Vec<&str> = table.lines().collect();
        assert_eq!(lines[1], lines[3]);
        assert_eq!(lines[2], lines[4]);
    }

    #[test]
    fn first_accurate_row_is_reported() {
        let table = comparison_table(&[
            variant("slow", &[0.1, 0.01, 1e-3]),
            variant("never", &[0.1]),
        ]);
        let tail: Vec<&str> = table
            .lines()
            .skip_while(|l| !l.starts_with("first"))
            .collect();
        assert!(tail[2].trim_start().starts_with("slow"));
        assert!(tail[2].contains(" 18 "), "{}", tail[2]);
        assert!(tail[3].trim_start().starts_with("never"));
    }

    #[test]
    fn gnuplot_blocks_are_separated() {
        let data = gnuplot_data(&[variant("a", &[0.1]), variant("b", &[0.1, 0.2])]);
        assert_eq!(data.matches("\n\n\n").count(), 1);
        assert_eq!(
            data.lines()
                .filter(|l| !l.is_empty() && !l.starts_with('#'))
                .count(),
            3
        );
    }

    #[test]
    fn missing_directory_is_a_schema_error() {
        let dir = tempfile::tempdir().unwrap();
        assert!(matches!(load_variant(dir.path()), Err(CliError::Schema(_))));
        assert!(matches!(load_variants(&[]), Err(CliError::Schema(_))));
    }
}
