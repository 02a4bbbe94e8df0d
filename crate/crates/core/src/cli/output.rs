use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::sim::{aggregate, AggregateRecord, ComplexityRow, TrialRecord};

pub const RECORD_HEADER: &str = "scenario,alphabet,algorithm,sweep_point,trial,sinr_db,loss_db,candidates,nodes";
pub const AGGREGATE_HEADER: &str = "scenario,alphabet,algorithm,sweep_point,count,mean_sinr_db,mean_loss_db,var_loss_db,var_defined,mean_candidates,mean_nodes";

/// Nine significant digits, fixed notation for moderate exponents and
/// scientific otherwise, trailing zeros trimmed.
pub fn format_number(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return if x.is_nan() {
            "nan".into()
        } else if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    let sci = format!("{x:.8e}");
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("exponent");
    if (-5..9).contains(&exp) {
        let decimals = (8 - exp).max(0) as usize;
        trim_zeros(&format!("{x:.decimals$}"))
    } else {
        format!("{}e{exp}", trim_zeros(mantissa))
    }
}

fn trim_zeros(s: &str) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s.to_string()
    }
}

fn opt<T>(v: Option<T>, f: impl Fn(T) -> String) -> String {
    v.map(f).unwrap_or_default()
}

pub fn record_line(r: &TrialRecord) -> String {
    format!(
        "{},{},{},{},{},{},{},{},{}",
        r.scenario.label(),
        r.alphabet.label(),
        r.algorithm.label(),
        r.sweep_point,
        r.trial,
        format_number(r.sinr_db),
        format_number(r.loss_db),
        opt(r.candidates, |c| c.to_string()),
        opt(r.nodes, |n| n.to_string()),
    )
}

pub fn aggregate_line(a: &AggregateRecord) -> String {
    format!(
        "{},{},{},{},{},{},{},{},{},{},{}",
        a.scenario.label(),
        a.alphabet.label(),
        a.algorithm.label(),
        a.sweep_point,
        a.count,
        format_number(a.mean_sinr_db),
        format_number(a.mean_loss_db),
        format_number(a.var_loss_db),
        a.variance_defined,
        opt(a.mean_candidates, format_number),
        opt(a.mean_nodes, format_number),
    )
}

/// `runs.csv` → `runs_agg.csv`; no extension → `<name>_agg`.
pub fn aggregate_path(path: &Path) -> PathBuf {
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let name = match path.extension() {
        Some(ext) => format!("{stem}_agg.{}", ext.to_string_lossy()),
        None => format!("{stem}_agg"),
    };
    path.with_file_name(name)
}

fn write_lines(path: &Path, header: &str, lines: impl Iterator<Item = String>) -> Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    out.write_all(header.as_bytes())?;
    out.write_all(b"\n")?;
    for line in lines {
        out.write_all(line.as_bytes())?;
        out.write_all(b"\n")?;
    }
    out.flush()?;
    Ok(())
}

/// Writes one row per record to `path` and the per-group moments to the
/// `_agg` sibling. Returns the aggregate file's path.
pub fn emit_csv(records: &[TrialRecord], path: &Path) -> Result<PathBuf> {
    if records.is_empty() {
        return Err(Error::InvalidConfig("no records to write".into()));
    }
    write_lines(path, RECORD_HEADER, records.iter().map(record_line))?;
    let agg_path = aggregate_path(path);
    write_lines(
        &agg_path,
        AGGREGATE_HEADER,
        aggregate(records).iter().map(aggregate_line),
    )?;
    Ok(agg_path)
}

pub fn write_aggregate_table(out: &mut dyn Write, aggregates: &[AggregateRecord]) -> std::io::Result<()> {
    writeln!(
        out,
        "{:<15} {:>6} {:>6} {:>12} {:>12} {:>12} {:>12}",
        "algorithm", "point", "count", "sinr_db", "loss_db", "var_loss", "candidates"
    )?;
    for a in aggregates {
        writeln!(
            out,
            "{:<15} {:>6} {:>6} {:>12.4} {:>12.4} {:>12.4} {:>12}",
            a.algorithm.label(),
            a.sweep_point,
            a.count,
            a.mean_sinr_db,
            a.mean_loss_db,
            a.var_loss_db,
            a.mean_candidates
                .map(|c| format!("{c:.2}"))
                .unwrap_or_else(|| "-".into()),
        )?;
    }
    Ok(())
}

pub fn write_complexity_table(out: &mut dyn Write, rows: &[ComplexityRow]) -> std::io::Result<()> {
    writeln!(
        out,
        "{:>6} {:>14} {:>14} {:>10} {:>12}",
        "users", "candidates", "nodes", "max", "exhaustive"
    )?;
    for r in rows {
        writeln!(
            out,
            "{:>6} {:>14.2} {:>14.2} {:>10} {:>12}",
            r.users, r.mean_candidates, r.mean_nodes, r.max_candidates, r.exhaustive_candidates
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn number_format() {
        assert_eq!(format_number(0.0), "0");
        assert_eq!(format_number(1.0), "1");
        assert_eq!(format_number(-2.5), "-2.5");
        assert_eq!(format_number(1.0 / 3.0), "0.333333333");
        assert_eq!(format_number(123456789.0), "123456789");
        assert_eq!(format_number(1234567891.0), "1.23456789e9");
        assert_eq!(format_number(1.5e-7), "1.5e-7");
        assert_eq!(format_number(12.345678912), "12.3456789");
    }

    #[test]
    fn agg_path_naming() {
        assert_eq!(
            aggregate_path(Path::new("/tmp/x/runs.csv")),
            PathBuf::from("/tmp/x/runs_agg.csv")
        );
        assert_eq!(aggregate_path(Path::new("out")), PathBuf::from("out_agg"));
    }
}
