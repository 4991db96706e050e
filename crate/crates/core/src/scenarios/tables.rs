//! Recomputes the reference tables from the closed forms and scores each
//! cell against the stored expectations.

use std::io::Write;
use std::str::FromStr;
use std::thread;

use serde::{Deserialize, Serialize};

use super::{RegulatoryBand, Scenario, TABLE_SUBCARRIERS};
use crate::error::{Error, Result};
use crate::io::{fmt_sig, Header};
use crate::metrics::{
    evaluate, pcr, rayleigh_resolution, repetition_interval, zero_crossing, Convention, MetricsConfig, ZeroCrossing,
};
use crate::pulses::{Family, PulseSpec, Symbols, DEFAULT_SYMBOL_SEED};

pub const TABLE_IDS: [u8; 5] = [1, 2, 3, 4, 5];

const BUILTIN: &str = include_str!("../../data/expectations.csv");

/// Band used for the bandwidth-independent tables 1 and 2.
const SHAPE_BAND: RegulatoryBand = RegulatoryBand::Fcc;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Tolerance {
    Absolute(f64),
    Relative(f64),
}

impl Tolerance {
    pub fn allows(self, computed: f64, expected: f64) -> bool {
        let err = (computed - expected).abs();
        match self {
            Tolerance::Absolute(t) => err <= t,
            Tolerance::Relative(r) => err <= r * expected.abs(),
        }
    }
}

impl FromStr for Tolerance {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let parse = |t: &str| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| Error::Parse(format!("bad tolerance `{s}`")))
        };
        let tol = match s.strip_suffix('%') {
            Some(p) => Tolerance::Relative(parse(p)? / 100.0),
            None => Tolerance::Absolute(parse(s)?),
        };
        match tol {
            Tolerance::Absolute(t) | Tolerance::Relative(t) if t >= 0.0 => Ok(tol),
            _ => Err(Error::Parse(format!("negative tolerance `{s}`"))),
        }
    }
}

impl std::fmt::Display for Tolerance {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Tolerance::Absolute(t) => write!(f, "{t}"),
            Tolerance::Relative(r) => write!(f, "{}%", r * 100.0),
        }
    }
}

/// One stored cell. `decimals` is the printed precision of `expected`.
#[derive(Debug, Clone, PartialEq)]
pub struct Expectation {
    pub table: u8,
    pub row: String,
    pub col: String,
    pub expected: f64,
    pub decimals: usize,
    pub tolerance: Tolerance,
}

/// Parsed expectations file (`table,row,col,expected,tolerance`; `#` lines
/// are comments).
#[derive(Debug, Clone, PartialEq)]
pub struct Expectations {
    cells: Vec<Expectation>,
}

impl Expectations {
    pub fn builtin() -> Self {
        Self::from_csv(BUILTIN).expect("bundled expectations parse")
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut cells = Vec::new();
        let mut seen_header = false;
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if !seen_header {
                if line.replace(' ', "") != "table,row,col,expected,tolerance" {
                    return Err(Error::Parse(format!("line {}: expected the column header", i + 1)));
                }
                seen_header = true;
                continue;
            }
            let fields: Vec<&str> = line.split(',').map(str::trim).collect();
            let bad = |what: &str| Error::Parse(format!("line {}: {what}", i + 1));
            if fields.len() != 5 {
                return Err(bad("expected 5 fields"));
            }
            let table: u8 = fields[0].parse().map_err(|_| bad("bad table id"))?;
            let expected: f64 = fields[3].parse().map_err(|_| bad("bad expected value"))?;
            let decimals = fields[3].split_once('.').map_or(0, |(_, frac)| frac.len());
            cells.push(Expectation {
                table,
                row: fields[1].to_string(),
                col: fields[2].to_string(),
                expected,
                decimals,
                tolerance: fields[4].parse().map_err(|e: Error| bad(&e.to_string()))?,
            });
        }
        Ok(Self { cells })
    }

    pub fn cells(&self) -> &[Expectation] {
        &self.cells
    }

    pub fn table(&self, id: u8) -> impl Iterator<Item = &Expectation> {
        self.cells.iter().filter(move |c| c.table == id)
    }
}

impl Default for Expectations {
    fn default() -> Self {
        Self::builtin()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReproductionOptions {
    /// Overrides the resolution convention of table 4 (FULL by default).
    pub convention: Option<Convention>,
    pub zero_crossing: ZeroCrossing,
    pub symbol_seed: u64,
    pub expectations: Expectations,
}

impl Default for ReproductionOptions {
    fn default() -> Self {
        Self {
            convention: None,
            zero_crossing: ZeroCrossing::Nominal,
            symbol_seed: DEFAULT_SYMBOL_SEED,
            expectations: Expectations::builtin(),
        }
    }
}

/// Scored cell. A cell passes when it is within tolerance or when the
/// computed value rounds to the printed one.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CellResult {
    pub table: u8,
    pub row: String,
    pub col: String,
    pub computed: f64,
    pub expected: f64,
    pub rel_err: f64,
    pub tolerance: Tolerance,
    pub within_tolerance: bool,
    pub rounds_to_printed: bool,
}

impl CellResult {
    fn score(exp: &Expectation, computed: f64) -> Self {
        let scale = 10f64.powi(exp.decimals as i32);
        Self {
            table: exp.table,
            row: exp.row.clone(),
            col: exp.col.clone(),
            computed,
            expected: exp.expected,
            rel_err: if exp.expected == 0.0 {
                (computed - exp.expected).abs()
            } else {
                (computed - exp.expected).abs() / exp.expected.abs()
            },
            tolerance: exp.tolerance,
            within_tolerance: exp.tolerance.allows(computed, exp.expected),
            rounds_to_printed: (computed * scale).round() == (exp.expected * scale).round(),
        }
    }

    pub fn pass(&self) -> bool {
        self.computed.is_finite() && (self.within_tolerance || self.rounds_to_printed)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TableReport {
    pub id: u8,
    pub convention: Option<Convention>,
    pub cells: Vec<CellResult>,
}

impl TableReport {
    pub fn passed(&self) -> bool {
        !self.cells.is_empty() && self.cells.iter().all(CellResult::pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CellResult> {
        self.cells.iter().filter(|c| !c.pass())
    }

    pub fn max_rel_err(&self) -> f64 {
        self.cells.iter().map(|c| c.rel_err).fold(0.0, f64::max)
    }

    pub fn cell(&self, row: &str, col: &str) -> Option<&CellResult> {
        self.cells.iter().find(|c| c.row == row && c.col == col)
    }

    /// `table,row,col,computed,expected,rel_err,tolerance,pass`.
    pub fn write_csv<W: Write>(&self, mut out: W, header: &Header) -> Result<()> {
        header.write_to(&mut out)?;
        writeln!(out, "table,row,col,computed,expected,rel_err,tolerance,pass")?;
        for c in &self.cells {
            writeln!(
                out,
                "{},{},{},{},{},{},{},{}",
                c.table,
                c.row,
                c.col,
                fmt_sig(c.computed),
                fmt_sig(c.expected),
                fmt_sig(c.rel_err),
                c.tolerance,
                c.pass()
            )?;
        }
        Ok(())
    }
}

fn table_pulse(family: Family, band: RegulatoryBand, seed: u64) -> Result<PulseSpec<f64>> {
    let symbols = (family == Family::HsOfdm).then(|| Symbols::seeded(TABLE_SUBCARRIERS, seed));
    PulseSpec::for_bandwidth(family, band.bandwidth(), TABLE_SUBCARRIERS, symbols)
}

fn family_of(key: &str) -> Result<Family> {
    key.parse()
}

fn split_row(row: &str) -> Result<(Scenario, Family)> {
    let (cable, family) = row
        .split_once(':')
        .ok_or_else(|| Error::Parse(format!("row `{row}` is not <cable>:<family>")))?;
    Ok((cable.parse()?, family_of(family)?))
}

fn compute_cell(exp: &Expectation, opts: &ReproductionOptions) -> Result<f64> {
    match exp.table {
        1 => {
            let spec = table_pulse(family_of(&exp.row)?, SHAPE_BAND, opts.symbol_seed)?;
            pcr(spec.duration(), zero_crossing(&spec, opts.zero_crossing)?)
        }
        2 => {
            let spec = table_pulse(family_of(&exp.row)?, SHAPE_BAND, opts.symbol_seed)?;
            let mut cfg = MetricsConfig::new(1.0);
            cfg.zero_crossing = opts.zero_crossing;
            let report = evaluate(&spec, &cfg)?;
            let value = match exp.col.as_str() {
                "pslr_db" => report.pslr_db,
                "islr_db" => report.islr_db,
                other => return Err(Error::Parse(format!("unknown table 2 column `{other}`"))),
            };
            Ok(value.unwrap_or(f64::NAN))
        }
        3 => {
            let spec = table_pulse(family_of(&exp.row)?, exp.col.parse()?, opts.symbol_seed)?;
            Ok(spec.duration() * 1e6)
        }
        4 => {
            let (scenario, family) = split_row(&exp.row)?;
            let spec = table_pulse(family, exp.col.parse()?, opts.symbol_seed)?;
            let t_delta = zero_crossing(&spec, opts.zero_crossing)?;
            rayleigh_resolution(
                t_delta,
                scenario.phase_velocity(),
                opts.convention.unwrap_or(Convention::Full),
            )
        }
        5 => {
            let (scenario, family) = split_row(&exp.row)?;
            let spec = table_pulse(family, exp.col.parse()?, opts.symbol_seed)?;
            Ok(repetition_interval(scenario.table_range(), spec.duration(), scenario.phase_velocity())? * 1e6)
        }
        other => Err(Error::invalid("table", format!("no table {other}"))),
    }
}

/// Recomputes every stored cell of table `id` (cells run in parallel).
pub fn reproduce_table(id: u8, opts: &ReproductionOptions) -> Result<TableReport> {
    if !TABLE_IDS.contains(&id) {
        return Err(Error::invalid("table", format!("expected one of 1..5, got {id}")));
    }
    let cells: Vec<&Expectation> = opts.expectations.table(id).collect();
    let values: Vec<Result<f64>> = thread::scope(|s| {
        let handles: Vec<_> = cells
            .iter()
            .map(|exp| s.spawn(move || compute_cell(exp, opts)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("cell worker panicked"))
            .collect()
    });
    let mut out = Vec::with_capacity(cells.len());
    for (exp, v) in cells.into_iter().zip(values) {
        out.push(CellResult::score(exp, v?));
    }
    Ok(TableReport {
        id,
        convention: (id == 4).then(|| opts.convention.unwrap_or(Convention::Full)),
        cells: out,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_counts() {
        let e = Expectations::builtin();
        let n = |id| e.table(id).count();
        assert_eq!((n(1), n(2), n(3), n(4), n(5)), (4, 8, 24, 48, 48));
        let c = e.table(3).find(|c| c.col == "HOMEPLUG_AV2" && c.row == "uwb2").unwrap();
        assert_eq!((c.expected, c.decimals), (0.05, 2));
        assert_eq!(c.tolerance, Tolerance::Relative(0.002));
    }

    #[test]
    fn parser_rejects_garbage() {
        assert!(Expectations::from_csv("a,b\n").is_err());
        assert!(Expectations::from_csv("table,row,col,expected,tolerance\n1,x,y,z,1\n").is_err());
        assert!(Expectations::from_csv("table,row,col,expected,tolerance\n1,x,y,2,-1\n").is_err());
        assert!("5%".parse::<Tolerance>().unwrap().allows(104.9, 100.0));
    }

    #[test]
    fn spot_cells() {
        let opts = ReproductionOptions::default();
        let t3 = reproduce_table(3, &opts).unwrap();
        assert!((t3.cell("uwb2", "CENELEC").unwrap().computed - 26.62).abs() < 0.01);
        let t5 = reproduce_table(5, &opts).unwrap();
        assert!((t5.cell("lv:uwb1", "EU_BB").unwrap().computed - 13.46).abs() < 0.01);
        assert!(t3.passed() && t5.passed());
        assert!(reproduce_table(6, &opts).is_err());
    }

    #[test]
    fn half_convention_halves_table_four() {
        let full = reproduce_table(4, &ReproductionOptions::default()).unwrap();
        assert!(full.passed());
        assert!((full.cell("lv:hs-ofdm", "HOMEPLUG_AV2").unwrap().computed - 0.87).abs() < 0.005);
        let half = reproduce_table(
            4,
            &ReproductionOptions {
                convention: Some(Convention::Half),
                ..ReproductionOptions::default()
            },
        )
        .unwrap();
        assert_eq!(half.failures().count(), 48);
        for (h, f) in half.cells.iter().zip(&full.cells) {
            assert!((f.computed / h.computed - 2.0).abs() < 1e-12);
        }
    }
}
