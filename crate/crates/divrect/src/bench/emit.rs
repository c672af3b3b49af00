//! Result files: run CSV, aggregate report, profile SVG and CSV, JSONL traces.

use std::fmt::Write as _;
use std::fs::File;
use std::io::{BufWriter, Read, Write};
use std::path::Path;

use divrect_core::solve::TraceRecord;
use serde::Serialize;

use super::profile::ProfileData;
use super::suite::{RunRecord, Summary};
use crate::error::{Error, Result};

/// Column order of run files.
pub const CSV_HEADER: [&str; 9] = [
    "problem",
    "algorithm",
    "n",
    "class",
    "status",
    "fevals",
    "iters",
    "time_s",
    "f_min",
];

/// Writes run records with a header line.
pub fn write_records<W: Write>(out: W, records: &[RunRecord]) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in records {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

/// Reads run records written by [`write_records`].
pub fn read_records<R: Read>(input: R) -> csv::Result<Vec<RunRecord>> {
    csv::Reader::from_reader(input).deserialize().collect()
}

pub fn write_csv(path: &Path, records: &[RunRecord]) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    write_records(BufWriter::new(file), records).map_err(|e| Error::csv(path, e))
}

pub fn read_csv(path: &Path) -> Result<Vec<RunRecord>> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    read_records(file).map_err(|e| Error::csv(path, e))
}

/// Aggregate tables, one block per algorithm.
///
/// Numbers are printed in shortest round-trip form so they can be checked
/// against values recomputed from the run file.
pub fn render_report(summaries: &[Summary]) -> String {
    let mut s = String::new();
    let mut current: Option<&str> = None;
    for sum in summaries {
        if current != Some(sum.algorithm.as_str()) {
            if current.is_some() {
                s.push('\n');
            }
            current = Some(&sum.algorithm);
            let _ = writeln!(s, "## {}", sum.algorithm);
            let _ = writeln!(
                s,
                "subset\tfailed\tavg_fevals\tmedian_fevals\tavg_time_s\tmedian_time_s\tavg_iters\tmedian_iters"
            );
        }
        let st = &sum.stats;
        let _ = writeln!(
            s,
            "{}\t{}/{}\t{}\t{}\t{}\t{}\t{}\t{}",
            sum.subset,
            st.failed,
            st.runs,
            st.avg_fevals,
            st.median_fevals,
            st.avg_time,
            st.median_time,
            st.avg_iters,
            st.median_iters
        );
    }
    s
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}

/// Curves sampled on the profile grid: a `beta` column then one per solver.
pub fn write_profile_csv(path: &Path, prof: &ProfileData) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = csv::Writer::from_writer(BufWriter::new(file));
    let wrap = |e| Error::csv(path, e);
    let mut header = vec!["beta".to_string()];
    header.extend(prof.solvers.iter().cloned());
    w.write_record(&header).map_err(wrap)?;
    for (k, b) in prof.beta.iter().enumerate() {
        let mut row = vec![b.to_string()];
        row.extend(prof.chi.iter().map(|c| c[k].to_string()));
        w.write_record(&row).map_err(wrap)?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf",
];

/// Step curves of a profile on a logarithmic ratio axis.
pub fn render_profile_svg(prof: &ProfileData, title: &str) -> String {
    let (w, h) = (720.0, 460.0);
    let (left, right, top, bottom) = (60.0, 190.0, 40.0, 50.0);
    let pw = w - left - right;
    let ph = h - top - bottom;
    let b_lo = prof.beta.first().copied().unwrap_or(1.0);
    let b_hi = prof.beta.last().copied().unwrap_or(1.0).max(b_lo * 10.0);
    let span = (b_hi / b_lo).log10();
    let x = |b: f64| left + pw * (b / b_lo).log10() / span;
    let y = |c: f64| top + ph * (1.0 - c);

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="{w}" height="{h}" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<text x="{}" y="24" text-anchor="middle" font-size="14">{}</text>"#,
        left + pw / 2.0,
        escape(title)
    );
    let first_decade = b_lo.log10().ceil() as i32;
    let last_decade = b_hi.log10().floor() as i32;
    for d in first_decade..=last_decade {
        let b = 10f64.powi(d);
        let _ = writeln!(
            s,
            r##"<line x1="{0:.2}" y1="{1}" x2="{0:.2}" y2="{2}" stroke="#ddd"/><text x="{0:.2}" y="{3}" text-anchor="middle">1e{d}</text>"##,
            x(b),
            top,
            top + ph,
            top + ph + 18.0
        );
    }
    for k in 0..=4 {
        let c = k as f64 / 4.0;
        let _ = writeln!(
            s,
            r##"<line x1="{left}" y1="{0:.2}" x2="{1}" y2="{0:.2}" stroke="#ddd"/><text x="{2}" y="{3:.2}" text-anchor="end">{c}</text>"##,
            y(c),
            left + pw,
            left - 6.0,
            y(c) + 4.0
        );
    }
    let _ = writeln!(
        s,
        r#"<rect x="{left}" y="{top}" width="{pw}" height="{ph}" fill="none" stroke="black"/>"#
    );
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" text-anchor="middle">beta</text>"#,
        left + pw / 2.0,
        h - 10.0
    );
    let _ = writeln!(
        s,
        r#"<text x="16" y="{}" text-anchor="middle" transform="rotate(-90 16 {})">fraction of problems</text>"#,
        top + ph / 2.0,
        top + ph / 2.0
    );
    for (i, name) in prof.solvers.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let mut steps: Vec<f64> = prof.ratios[i]
            .iter()
            .copied()
            .filter(|&r| r > b_lo && r <= b_hi)
            .collect();
        steps.sort_by(f64::total_cmp);
        steps.dedup();
        let mut d = format!("M{:.2},{:.2}", x(b_lo), y(prof.chi_at(i, b_lo)));
        for b in steps {
            let _ = write!(d, " H{:.2} V{:.2}", x(b), y(prof.chi_at(i, b)));
        }
        let _ = write!(d, " H{:.2}", x(b_hi));
        let _ = writeln!(
            s,
            r#"<path d="{d}" fill="none" stroke="{color}" stroke-width="1.8"/>"#
        );
        let ly = top + 10.0 + 18.0 * i as f64;
        let lx = left + pw + 14.0;
        let _ = writeln!(
            s,
            r#"<line x1="{lx}" y1="{ly}" x2="{}" y2="{ly}" stroke="{color}" stroke-width="2"/><text x="{}" y="{}">{}</text>"#,
            lx + 22.0,
            lx + 28.0,
            ly + 4.0,
            escape(name)
        );
    }
    s.push_str("</svg>\n");
    s
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

#[derive(Serialize)]
struct TraceLine {
    iteration: usize,
    evals: usize,
    /// `null` before the first feasible point.
    f_min: Option<f64>,
    elapsed_s: f64,
}

/// One JSON object per line and iteration.
pub fn write_trace<W: Write>(mut out: W, trace: &[TraceRecord]) -> Result<()> {
    for t in trace {
        let line = TraceLine {
            iteration: t.iteration,
            evals: t.evals,
            f_min: t.f_min.is_finite().then_some(t.f_min),
            elapsed_s: t.elapsed,
        };
        serde_json::to_writer(&mut out, &line)?;
        out.write_all(b"\n").map_err(serde_json::Error::io)?;
    }
    Ok(())
}

pub fn write_trace_file(path: &Path, trace: &[TraceRecord]) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    write_trace(&mut w, trace)?;
    w.flush().map_err(|e| Error::io(path, e))
}
