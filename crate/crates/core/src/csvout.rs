//! CSV tables with a header row and floats at 17 significant digits.

use std::io::Write;

use crate::dynamics::{self, HittingSummary};
use crate::error::{Error, Result};
use crate::multifractal::{CriticalExponents, SpectrumPoint};

/// `v` in scientific notation with 17 significant digits; `inf`, `-inf`, `NaN`
/// for non-finite values.
pub fn float(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        v.to_string()
    }
}

/// An in-memory table rendered as RFC 4180 CSV.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Table {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        Table {
            header: header.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn header(&self) -> &[String] {
        &self.header
    }

    pub fn rows(&self) -> &[Vec<String>] {
        &self.rows
    }

    /// Panics if the row width differs from the header.
    pub fn push(&mut self, row: Vec<String>) {
        assert_eq!(row.len(), self.header.len(), "row width differs from header");
        self.rows.push(row);
    }

    pub fn write_to(&self, out: impl Write) -> Result<()> {
        let io = |e: csv::Error| Error::InvalidArgument(format!("csv output failed: {e}"));
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::CRLF).from_writer(out);
        w.write_record(&self.header).map_err(io)?;
        for row in &self.rows {
            w.write_record(row).map_err(io)?;
        }
        w.flush().map_err(|e| io(e.into()))
    }

    pub fn to_csv(&self) -> String {
        let mut buf = Vec::new();
        self.write_to(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("csv is utf-8")
    }
}

/// `q,eta,alpha,dim`, one row per point.
pub fn spectrum_table(points: &[SpectrumPoint]) -> Table {
    let mut t = Table::new(["q", "eta", "alpha", "dim"]);
    for p in points {
        t.push(vec![float(p.q), float(p.eta), float(p.alpha), float(p.dim)]);
    }
    t
}

/// `alpha_minus,alpha_max,alpha_plus,hdim`, a single row.
pub fn critical_table(c: &CriticalExponents) -> Table {
    let mut t = Table::new(["alpha_minus", "alpha_max", "alpha_plus", "hdim"]);
    t.push(vec![float(c.alpha_minus), float(c.alpha_max), float(c.alpha_plus), float(c.hdim)]);
    t
}

/// One row per trial; `y` is the target written in binary64.
pub fn hitting_table(s: &HittingSummary) -> Table {
    let mut t = Table::new(["trial", "y", "tail_median", "liminf_proxy", "limsup_proxy", "prediction"]);
    for r in &s.trials {
        t.push(vec![
            r.trial.to_string(),
            float(dynamics::to_f64(&r.y)),
            float(r.tail_median),
            float(r.liminf_proxy),
            float(r.limsup_proxy),
            float(s.prediction),
        ]);
    }
    t
}

/// One row of the `cover` output.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CoverRow {
    pub x_id: u64,
    pub kappa: f64,
    pub m: u32,
    pub horizon: u64,
    pub fraction: f64,
    pub boxcount: usize,
}

/// `x_id,kappa,m,M,fraction,boxcount`.
pub fn cover_table(rows: &[CoverRow]) -> Table {
    let mut t = Table::new(["x_id", "kappa", "m", "M", "fraction", "boxcount"]);
    for r in rows {
        t.push(vec![
            r.x_id.to_string(),
            float(r.kappa),
            r.m.to_string(),
            r.horizon.to_string(),
            float(r.fraction),
            r.boxcount.to_string(),
        ]);
    }
    t
}
