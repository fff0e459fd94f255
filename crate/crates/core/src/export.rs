//! CSV writers, a reader for the files they produce, and gnuplot script
//! emission.
//!
//! All output uses `\n` line endings and a period as the decimal point.
//! Blocked receiver samples are written as [`NOCOV`] so plots show gaps.

use std::fmt::Write as _;

use crate::antenna::{system_preset, AntennaKind};
use crate::channel::{mean_excess_delay, rms_delay_spread, DelaySpreadTable, PowerDelayProfile, SweepResult};
use crate::error::{Error, Result};

pub const NOCOV: &str = "NOCOV";

pub fn sweep_csv(sweep: &SweepResult) -> String {
    let mut out = String::from("distance_m");
    for name in &sweep.system_names {
        write!(out, ",power_dBm_{name}").unwrap();
    }
    out.push('\n');
    for s in &sweep.samples {
        write!(out, "{:.6}", s.distance).unwrap();
        for &p in &s.powers_dbm {
            if p.is_finite() {
                write!(out, ",{p:.4}").unwrap();
            } else {
                write!(out, ",{NOCOV}").unwrap();
            }
        }
        out.push('\n');
    }
    out
}

pub fn pdp_csv(pdp: &PowerDelayProfile) -> String {
    let mut out = String::from("delay_s,excess_delay_s,normalized_power\n");
    for t in &pdp.taps {
        writeln!(out, "{:.12e},{:.12e},{:.12e}", t.delay, t.delay - pdp.first_arrival, t.power).unwrap();
    }
    writeln!(out, "mean_excess_delay_ns={:.4}", mean_excess_delay(pdp) * 1e9).unwrap();
    writeln!(out, "rms_delay_spread_ns={:.4}", rms_delay_spread(pdp) * 1e9).unwrap();
    out
}

/// `60` for 60 GHz, `60.5` for 60.5 GHz.
pub fn ghz_label(frequency: f64) -> String {
    format!("{}", frequency / 1e9)
}

/// Row label for a system: the antenna type for the reference presets.
pub fn system_label(name: &str) -> String {
    match system_preset(name).map(|s| s.kind) {
        Ok(AntennaKind::Isotropic) => "Isotropic".to_string(),
        Ok(AntennaKind::Omni) => "Omni".to_string(),
        Ok(AntennaKind::Horn) => "Horn".to_string(),
        Err(_) => name.to_string(),
    }
}

fn cell(ns: f64) -> String {
    if ns.is_finite() {
        format!("{ns:.2}")
    } else {
        "n/a".to_string()
    }
}

pub fn table_text(table: &DelaySpreadTable) -> String {
    let mut out = format!("rms delay spread (ns), {}\n", table.environment);
    write!(out, "{:<10}", "Antenna").unwrap();
    for &f in &table.frequencies {
        write!(out, " {:>9}", format!("{} GHz", ghz_label(f))).unwrap();
    }
    out.push('\n');
    for (i, name) in table.system_names.iter().enumerate() {
        write!(out, "{:<10}", system_label(name)).unwrap();
        for j in 0..table.frequencies.len() {
            write!(out, " {:>9}", cell(table.cell_ns(i, j))).unwrap();
        }
        out.push('\n');
    }
    out
}

pub fn table_csv(table: &DelaySpreadTable) -> String {
    let mut out = String::from("antenna");
    for &f in &table.frequencies {
        write!(out, ",{}GHz_ns", ghz_label(f)).unwrap();
    }
    out.push('\n');
    for (i, name) in table.system_names.iter().enumerate() {
        out.push_str(&system_label(name));
        for j in 0..table.frequencies.len() {
            write!(out, ",{}", cell(table.cell_ns(i, j))).unwrap();
        }
        out.push('\n');
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CsvKind {
    Sweep,
    Pdp,
    Table,
}

/// Contents of a CSV written by this module.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvSummary {
    pub kind: CsvKind,
    pub columns: Vec<String>,
    /// Row labels of a table file; empty otherwise.
    pub labels: Vec<String>,
    /// Numeric cells; `None` for `NOCOV` and `n/a`.
    pub rows: Vec<Vec<Option<f64>>>,
    /// `key=value` lines after the data.
    pub footer: Vec<(String, f64)>,
}

fn csv_error(line: usize, message: impl std::fmt::Display) -> Error {
    Error::Csv(format!("line {line}: {message}"))
}

/// Parses a sweep, PDP or table CSV, checking its shape.
pub fn inspect_csv(text: &str) -> Result<CsvSummary> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    let (_, header) = lines.next().ok_or_else(|| Error::Csv("empty file".to_string()))?;
    let columns: Vec<String> = header.split(',').map(str::to_string).collect();
    let kind = match columns[0].as_str() {
        "distance_m" => CsvKind::Sweep,
        "delay_s" => CsvKind::Pdp,
        "antenna" => CsvKind::Table,
        other => return Err(csv_error(1, format!("unrecognized first column `{other}`"))),
    };
    if columns.len() < 2 || columns.iter().any(|c| c.is_empty()) {
        return Err(csv_error(1, "header needs at least two named columns"));
    }

    let mut summary = CsvSummary {
        kind,
        columns,
        labels: Vec::new(),
        rows: Vec::new(),
        footer: Vec::new(),
    };
    for (n, line) in lines {
        if let Some((key, value)) = line.split_once('=') {
            let v = value
                .parse::<f64>()
                .map_err(|_| csv_error(n, format!("footer value `{value}` is not a number")))?;
            summary.footer.push((key.to_string(), v));
            continue;
        }
        if !summary.footer.is_empty() {
            return Err(csv_error(n, "data row after footer"));
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != summary.columns.len() {
            return Err(csv_error(
                n,
                format!("expected {} fields, found {}", summary.columns.len(), fields.len()),
            ));
        }
        let numeric = if kind == CsvKind::Table {
            summary.labels.push(fields[0].to_string());
            &fields[1..]
        } else {
            &fields[..]
        };
        let row = numeric
            .iter()
            .enumerate()
            .map(|(j, f)| match *f {
                NOCOV | "n/a" if j > 0 || kind == CsvKind::Table => Ok(None),
                f => f
                    .parse::<f64>()
                    .map(Some)
                    .map_err(|_| csv_error(n, format!("`{f}` is not a number"))),
            })
            .collect::<Result<Vec<_>>>()?;
        summary.rows.push(row);
    }
    Ok(summary)
}

fn quote(s: &str) -> String {
    format!("'{}'", s.replace('\'', "''"))
}

/// gnuplot script rendering each input to a PNG next to it: power against
/// distance for sweeps, a stem plot for profiles, bars for tables.
pub fn plot_script(inputs: &[(String, CsvSummary)]) -> Result<String> {
    if inputs.is_empty() {
        return Err(Error::Csv("no input files for the plot script".to_string()));
    }
    let mut out = String::new();
    out.push_str("# gnuplot script; run with `gnuplot <this file>`\n");
    out.push_str("set datafile separator ','\n");
    out.push_str(&format!("set datafile missing '{NOCOV}'\n"));
    // Headers start with a letter, footers with m or r; data never does.
    out.push_str("set datafile commentschars '#adrm'\n");
    out.push_str("set terminal pngcairo size 900,600\n");
    out.push_str("set grid\n");
    for (path, csv) in inputs {
        let stem = path.strip_suffix(".csv").unwrap_or(path);
        out.push('\n');
        writeln!(out, "set output {}", quote(&format!("{stem}.png"))).unwrap();
        writeln!(out, "set title {}", quote(stem.rsplit('/').next().unwrap_or(stem))).unwrap();
        match csv.kind {
            CsvKind::Sweep => {
                out.push_str("set xlabel 'Distance (m)'\nset ylabel 'Received power (dBm)'\nunset logscale y\n");
                let series: Vec<String> = csv.columns[1..]
                    .iter()
                    .enumerate()
                    .map(|(j, c)| {
                        let name = c.strip_prefix("power_dBm_").unwrap_or(c);
                        let file = if j == 0 { quote(path) } else { "''".to_string() };
                        format!("{file} using 1:{} with lines title {}", j + 2, quote(name))
                    })
                    .collect();
                writeln!(out, "plot {}", series.join(", \\\n     ")).unwrap();
            }
            CsvKind::Pdp => {
                out.push_str("set xlabel 'Excess delay (s)'\nset ylabel 'Normalized power'\nset logscale y\n");
                writeln!(
                    out,
                    "plot {} using 2:3 with impulses lw 2 notitle, '' using 2:3 with points pt 7 notitle",
                    quote(path)
                )
                .unwrap();
            }
            CsvKind::Table => {
                out.push_str("set style data histograms\nset style fill solid 0.8\n");
                out.push_str("set xlabel 'Antenna'\nset ylabel 'rms delay spread (ns)'\nunset logscale y\n");
                let series: Vec<String> = csv.columns[1..]
                    .iter()
                    .enumerate()
                    .map(|(j, c)| {
                        let file = if j == 0 { quote(path) } else { "''".to_string() };
                        let ticks = if j == 0 { ":xtic(1)" } else { "" };
                        format!("{file} using {}{ticks} title {}", j + 2, quote(c))
                    })
                    .collect();
                writeln!(out, "plot {}", series.join(", \\\n     ")).unwrap();
            }
        }
    }
    out.push_str("\nunset output\n");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{PdpTap, SweepSample};

    fn sweep() -> SweepResult {
        SweepResult {
            environment: "straight_tunnel".into(),
            frequency: 60e9,
            system_names: vec!["system1".into(), "system3".into()],
            samples: vec![
                SweepSample {
                    distance: 1.0,
                    powers_dbm: vec![-50.123456, f64::NEG_INFINITY],
                },
                SweepSample {
                    distance: 2.5,
                    powers_dbm: vec![-55.0, -40.0],
                },
            ],
        }
    }

    #[test]
    fn sweep_format() {
        let csv = sweep_csv(&sweep());
        assert_eq!(
            csv,
            "distance_m,power_dBm_system1,power_dBm_system3\n\
             1.000000,-50.1235,NOCOV\n\
             2.500000,-55.0000,-40.0000\n"
        );
        let s = inspect_csv(&csv).unwrap();
        assert_eq!(s.kind, CsvKind::Sweep);
        assert_eq!(s.rows[0], vec![Some(1.0), Some(-50.1235), None]);
    }

    #[test]
    fn pdp_footer() {
        let pdp = PowerDelayProfile {
            taps: vec![
                PdpTap { delay: 10e-9, power: 1.0 },
                PdpTap { delay: 12e-9, power: 1.0 },
            ],
            bin_width: 0.0,
            first_arrival: 10e-9,
        };
        let s = inspect_csv(&pdp_csv(&pdp)).unwrap();
        assert_eq!(s.kind, CsvKind::Pdp);
        assert_eq!(s.rows.len(), 2);
        assert_eq!(s.rows[0][2], Some(1.0));
        assert_eq!(s.footer[0], ("mean_excess_delay_ns".to_string(), 1.0));
        assert_eq!(s.footer[1], ("rms_delay_spread_ns".to_string(), 1.0));
    }

    #[test]
    fn table_layout() {
        let t = DelaySpreadTable {
            environment: "straight_tunnel".into(),
            system_names: vec!["system1".into(), "system2".into(), "system3".into()],
            frequencies: vec![60e9, 70e9],
            cells: vec![vec![1.234e-9, 1.2e-9], vec![1e-9, f64::NAN], vec![0.5e-9, 0.25e-9]],
        };
        let csv = table_csv(&t);
        assert_eq!(csv, "antenna,60GHz_ns,70GHz_ns\nIsotropic,1.23,1.20\nOmni,1.00,n/a\nHorn,0.50,0.25\n");
        let s = inspect_csv(&csv).unwrap();
        assert_eq!(s.labels, ["Isotropic", "Omni", "Horn"]);
        assert!(table_text(&t).contains("Horn"));
    }

    #[test]
    fn malformed_csv() {
        assert!(inspect_csv("").is_err());
        assert!(inspect_csv("distance_m,a\n1,2,3\n").is_err());
        assert!(inspect_csv("distance_m,a\nNOCOV,2\n").is_err());
        assert!(inspect_csv("delay_s,x,y\nk=v\n").is_err());
        assert!(inspect_csv("foo,bar\n").is_err());
    }

    #[test]
    fn plot_directives() {
        let csv = inspect_csv(&sweep_csv(&sweep())).unwrap();
        let script = plot_script(&[("out/sweep.csv".into(), csv)]).unwrap();
        assert!(script.contains("'out/sweep.csv' using 1:2 with lines title 'system1'"));
        assert!(script.contains("'' using 1:3 with lines title 'system3'"));
        assert!(plot_script(&[]).is_err());
    }
}
