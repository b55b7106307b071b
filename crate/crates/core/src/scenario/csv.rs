//! CSV output of a [`ResultTable`].

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use super::ResultTable;
use crate::error::Result;

pub const CSV_HEADER: &str = "gt,sweep_name,sweep_value,C_AB,N_Aa,N_Ab,N_ab,trace_err,leakage";

const SIGNIFICANT: usize = 12;

/// `x` with `digits` significant digits in the style of C's `%g`: fixed
/// notation for decimal exponents in `[-4, digits)`, scientific otherwise,
/// trailing zeros removed.
pub fn format_sig(x: f64, digits: usize) -> String {
    assert!(digits > 0, "at least one significant digit");
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= digits as i32 {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_zeros(mantissa), exp.abs())
    } else {
        let decimals = (digits as i32 - 1 - exp) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

pub fn write_csv<W: Write>(table: &ResultTable, mut out: W) -> Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    let f = |x: f64| format_sig(x, SIGNIFICANT);
    for r in &table.rows {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            f(r.gt),
            table.sweep_name,
            f(r.sweep_value),
            f(r.c_ab),
            f(r.n_aa),
            f(r.n_ab),
            f(r.n_fields),
            f(r.trace_err),
            f(r.leakage)
        )?;
    }
    out.flush()?;
    Ok(())
}

pub fn emit_csv(table: &ResultTable, path: impl AsRef<Path>) -> Result<()> {
    write_csv(table, BufWriter::new(File::create(path)?))
}
