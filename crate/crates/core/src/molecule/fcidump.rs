use std::path::Path;

use crate::error::{Error, Result};

/// Spatial-orbital integrals over real orbitals, chemists' notation.
#[derive(Clone, Debug, PartialEq)]
pub struct MolecularIntegrals {
    n_spatial: usize,
    n_electrons: usize,
    ms2: i32,
    core_energy: f64,
    one_body: Vec<f64>,
    two_body: Vec<f64>,
}

impl MolecularIntegrals {
    /// All-zero integrals with the given core energy.
    pub fn zeros(n_spatial: usize, n_electrons: usize, ms2: i32, core_energy: f64) -> Self {
        Self {
            n_spatial,
            n_electrons,
            ms2,
            core_energy,
            one_body: vec![0.0; n_spatial.pow(2)],
            two_body: vec![0.0; n_spatial.pow(4)],
        }
    }

    pub fn n_spatial(&self) -> usize {
        self.n_spatial
    }

    pub fn n_qubits(&self) -> usize {
        2 * self.n_spatial
    }

    pub fn n_electrons(&self) -> usize {
        self.n_electrons
    }

    pub fn ms2(&self) -> i32 {
        self.ms2
    }

    pub fn core_energy(&self) -> f64 {
        self.core_energy
    }

    /// `h_pq`.
    pub fn one_body(&self, p: usize, q: usize) -> f64 {
        self.one_body[p * self.n_spatial + q]
    }

    /// `(pq|rs)`.
    pub fn two_body(&self, p: usize, q: usize, r: usize, s: usize) -> f64 {
        self.two_body[self.index4(p, q, r, s)]
    }

    fn index4(&self, p: usize, q: usize, r: usize, s: usize) -> usize {
        let n = self.n_spatial;
        ((p * n + q) * n + r) * n + s
    }

    /// Sets `h_pq` and `h_qp`.
    pub fn set_one_body(&mut self, p: usize, q: usize, value: f64) {
        let n = self.n_spatial;
        self.one_body[p * n + q] = value;
        self.one_body[q * n + p] = value;
    }

    /// Sets all eight permutation-equivalent slots of `(pq|rs)`.
    pub fn set_two_body(&mut self, p: usize, q: usize, r: usize, s: usize, value: f64) {
        for (a, b, c, d) in [
            (p, q, r, s),
            (q, p, r, s),
            (p, q, s, r),
            (q, p, s, r),
            (r, s, p, q),
            (s, r, p, q),
            (r, s, q, p),
            (s, r, q, p),
        ] {
            let k = self.index4(a, b, c, d);
            self.two_body[k] = value;
        }
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        parse_fcidump(&std::fs::read_to_string(path)?)
    }
}

fn parse_value(token: &str, line: usize) -> Result<f64> {
    token
        .replace(['D', 'd'], "E")
        .parse::<f64>()
        .map_err(|_| Error::MalformedLine {
            line,
            reason: format!("non-numeric value {token:?}"),
        })
}

fn header_key<T: std::str::FromStr>(fields: &[(String, String)], key: &str) -> Result<Option<T>> {
    match fields.iter().find(|(k, _)| k == key) {
        None => Ok(None),
        Some((_, v)) => v
            .parse()
            .map(Some)
            .map_err(|_| Error::MalformedHeader(format!("{key}={v}"))),
    }
}

/// Parses a Molpro-style FCIDUMP.
///
/// Data lines are `value i j k l` with 1-based orbital indices; `k = l = 0`
/// marks a one-body integral and all-zero indices the core energy. Fortran
/// `D` exponents are accepted.
pub fn parse_fcidump(text: &str) -> Result<MolecularIntegrals> {
    let mut lines = text.lines().enumerate();
    let mut header = String::new();
    let mut closed = false;
    for (_, line) in lines.by_ref() {
        let trimmed = line.trim();
        if trimmed.starts_with("&END") || trimmed == "/" {
            closed = true;
            break;
        }
        header.push_str(trimmed);
        header.push(',');
    }
    if !closed || !header.trim_start().starts_with("&FCI") {
        return Err(Error::MalformedHeader("missing &FCI ... &END block".into()));
    }
    let compact: String = header
        .trim_start()
        .trim_start_matches("&FCI")
        .chars()
        .filter(|c| !c.is_whitespace())
        .collect();
    let fields: Vec<(String, String)> = compact
        .split(',')
        .filter_map(|f| f.split_once('='))
        .map(|(k, v)| (k.to_ascii_uppercase(), v.to_string()))
        .collect();
    let norb: usize = header_key(&fields, "NORB")?
        .ok_or_else(|| Error::MalformedHeader("NORB missing".into()))?;
    let nelec: usize = header_key(&fields, "NELEC")?
        .ok_or_else(|| Error::MalformedHeader("NELEC missing".into()))?;
    let ms2: i32 = header_key(&fields, "MS2")?.unwrap_or(0);

    let mut ints = MolecularIntegrals::zeros(norb, nelec, ms2, 0.0);
    for (k, line) in lines {
        let line_no = k + 1;
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens.is_empty() {
            continue;
        }
        if tokens.len() != 5 {
            return Err(Error::MalformedLine {
                line: line_no,
                reason: format!("expected 5 fields, found {}", tokens.len()),
            });
        }
        let value = parse_value(tokens[0], line_no)?;
        let mut idx = [0usize; 4];
        for (slot, tok) in idx.iter_mut().zip(&tokens[1..]) {
            *slot = tok.parse().map_err(|_| Error::MalformedLine {
                line: line_no,
                reason: format!("non-integer index {tok:?}"),
            })?;
            if *slot > norb {
                return Err(Error::IndexOutOfRange {
                    line: line_no,
                    index: *slot,
                    norb,
                });
            }
        }
        match idx {
            [0, 0, 0, 0] => ints.core_energy = value,
            [i, j, 0, 0] if i > 0 && j > 0 => ints.set_one_body(i - 1, j - 1, value),
            [i, j, k, l] if i > 0 && j > 0 && k > 0 && l > 0 => {
                ints.set_two_body(i - 1, j - 1, k - 1, l - 1, value)
            }
            // Orbital energies (`i 0 0 0`) carry no Hamiltonian information.
            [_, 0, 0, 0] => {}
            _ => {
                return Err(Error::MalformedLine {
                    line: line_no,
                    reason: format!("unrecognized index pattern {idx:?}"),
                })
            }
        }
    }
    Ok(ints)
}
