//! Column files for `--plot-data`: one record per line, fields separated by
//! spaces, a `#` header naming the columns.

use std::fs;
use std::path::Path;

use lipfree_core::mean_projection::{Projection, WindowSchedule};
use lipfree_core::{FunctionSpec, NormCertificate, Point, Scalar, StepFunction};

type Result<T> = std::result::Result<T, Box<dyn std::error::Error>>;

fn write(dir: &Path, name: &str, header: &str, rows: Vec<String>) -> Result<()> {
    let path = dir.join(name);
    let body = format!("# {header}\n{}\n", rows.join("\n"));
    fs::write(&path, body).map_err(|e| format!("{}: {e}", path.display()).into())
}

fn coords<S: Scalar>(p: &Point<S>) -> String {
    p.iter()
        .map(|c| c.to_f64().to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn potential<S: Scalar>(dir: &Path, cert: &NormCertificate<S>) -> Result<()> {
    let pot = cert
        .potential
        .iter()
        .map(|(x, f)| format!("{} {}", coords(x), f.to_f64()))
        .collect();
    write(dir, "potential.dat", "x... f(x)", pot)?;
    let flow = cert
        .flow
        .iter()
        .map(|e| {
            format!(
                "{} {} {}",
                coords(&e.from),
                coords(&e.to),
                e.amount.to_f64()
            )
        })
        .collect();
    write(dir, "flow.dat", "from... to... amount", flow)
}

pub fn levels(dir: &Path, sched: &WindowSchedule, p: &Projection) -> Result<()> {
    let depth = p.columns.iter().map(|c| c.levels.len()).max().unwrap_or(0);
    let rows = (0..depth)
        .map(|k| {
            let mut fields = vec![(k + 1).to_string(), sched.radius(k + 1).to_string()];
            for c in &p.columns {
                let level = c.levels.get(k).unwrap_or(&c.value);
                fields.extend(level.iter().map(f64::to_string));
            }
            fields.join(" ")
        })
        .collect();
    write(dir, "levels.dat", "level radius column-averages...", rows)
}

pub fn sample<S: Scalar>(dir: &Path, f: &FunctionSpec<S>, points: &[Point<S>]) -> Result<()> {
    let rows = points
        .iter()
        .map(|x| Ok(format!("{} {}", coords(x), coords(&f.evaluate(x)?))))
        .collect::<std::result::Result<_, lipfree_core::Error>>()?;
    write(dir, "sample.dat", "x... f(x)...", rows)
}

/// Two rows per interval so the file plots as a staircase.
pub fn step(dir: &Path, s: &StepFunction) -> Result<()> {
    let rows = s
        .breaks()
        .windows(2)
        .zip(s.values())
        .flat_map(|(w, v)| {
            let v = v.to_f64();
            [
                format!("{} {v}", w[0].to_f64()),
                format!("{} {v}", w[1].to_f64()),
            ]
        })
        .collect();
    write(dir, "step.dat", "t phi(t)", rows)
}
