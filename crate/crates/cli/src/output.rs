//! CSV and JSON emission.
//!
//! CSV numbers use scientific notation with 12 significant digits; missing
//! values are empty fields. JSON documents are a single object holding
//! `meta` and `rows`.

use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::path::Path;

use serde::Serialize;

use crate::error::CliError;

pub const SWEEP_HEADER: &str = "swept,H_gauss,T_K,a_nm,P_Pa,P_norm,sigma_norm,n_terms,converged";
pub const CONDUCTIVITY_HEADER: &str = "swept,H_gauss,T_K,sigma_norm";
pub const PRESSURE_HEADER: &str =
    "a_nm,T_K,H_gauss,P_Pa,E_J_m2,P_norm,n_terms,quad_error,converged";
pub const FLUCTUATION_HEADER: &str = "swept,a_nm,mfp_nm,T_K,E0_drude,E0_plasma,W,W_over_E0_drude,\
W_over_E0_plasma,W_over_gap,W_over_gap_predicted,c1,c2,fit_exponent,fit_residual,sharply_peaked,wide";
pub const DISTRIBUTION_HEADER: &str = "a_nm,mfp_nm,E_J_m2,density";

/// One CSV cell.
pub enum Cell {
    Num(f64),
    Opt(Option<f64>),
    Int(usize),
    Bool(bool),
}

impl Cell {
    fn write(&self, out: &mut String) {
        match self {
            Cell::Num(v) | Cell::Opt(Some(v)) => number(out, *v),
            Cell::Opt(None) => {}
            Cell::Int(v) => {
                let _ = write!(out, "{v}");
            }
            Cell::Bool(v) => {
                let _ = write!(out, "{v}");
            }
        }
    }
}

fn number(out: &mut String, v: f64) {
    if v.is_nan() {
        out.push_str("nan");
    } else if v.is_infinite() {
        out.push_str(if v > 0.0 { "inf" } else { "-inf" });
    } else {
        let _ = write!(out, "{v:.11e}");
    }
}

/// Render a header and rows of cells.
pub fn csv<'a>(header: &str, rows: impl IntoIterator<Item = &'a [Cell]>) -> String {
    let mut out = String::from(header);
    out.push('\n');
    for row in rows {
        for (i, cell) in row.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            cell.write(&mut out);
        }
        out.push('\n');
    }
    out
}

#[derive(Debug, Serialize)]
pub struct Document<'a, M: Serialize, R: Serialize> {
    pub meta: &'a M,
    pub rows: &'a [R],
}

pub fn json<M: Serialize, R: Serialize>(meta: &M, rows: &[R]) -> String {
    let mut s = serde_json::to_string_pretty(&Document { meta, rows }).expect("rows serialize");
    s.push('\n');
    s
}

/// Write to `path`, or stdout when no path is given.
pub fn emit(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => fs::write(p, text).map_err(|source| CliError::Io {
            path: p.display().to_string(),
            source,
        }),
        None => io::stdout()
            .lock()
            .write_all(text.as_bytes())
            .map_err(|source| CliError::Io {
                path: "<stdout>".into(),
                source,
            }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_have_twelve_significant_digits() {
        let rows = [vec![
            Cell::Num(-0.333_282_5),
            Cell::Opt(None),
            Cell::Int(7),
            Cell::Bool(false),
        ]];
        let text = csv("a,b,c,d", rows.iter().map(|r| r.as_slice()));
        assert_eq!(text, "a,b,c,d\n-3.33282500000e-1,,7,false\n");
    }

    #[test]
    fn non_finite_values_are_spelled_out() {
        let mut s = String::new();
        number(&mut s, f64::NAN);
        number(&mut s, f64::INFINITY);
        assert_eq!(s, "naninf");
    }
}
