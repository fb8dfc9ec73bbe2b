//! CSV files: `#`-prefixed metadata lines, a header row, data rows.
//! Floats are written with 17 significant digits.

use std::path::{Path, PathBuf};

use super::scenario::{ConvergenceTable, McPoint, Report, Scenario};
use crate::error::{Error, Result};
use crate::localization::DomainCertificate;

pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

#[derive(Debug, Clone, Default)]
pub struct CsvDoc {
    pub meta: Vec<(String, String)>,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl CsvDoc {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        Self {
            header: header.into_iter().map(Into::into).collect(),
            ..Self::default()
        }
    }

    pub fn meta(&mut self, key: impl Into<String>, value: impl ToString) -> &mut Self {
        self.meta.push((key.into(), value.to_string()));
        self
    }

    pub fn render(&self) -> Result<String> {
        let mut out = String::new();
        for (k, v) in &self.meta {
            out.push_str(&format!("# {k}: {v}\n"));
        }
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.header).map_err(csv_error)?;
        for row in &self.rows {
            w.write_record(row).map_err(csv_error)?;
        }
        let body = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
        out.push_str(&String::from_utf8(body).map_err(|e| Error::Io(e.to_string()))?);
        Ok(out)
    }

    /// Everything after the metadata lines.
    pub fn body(text: &str) -> String {
        text.lines()
            .filter(|l| !l.starts_with('#'))
            .collect::<Vec<_>>()
            .join("\n")
    }

    pub fn write(&self, path: &Path) -> Result<PathBuf> {
        if let Some(dir) = path.parent() {
            std::fs::create_dir_all(dir)?;
        }
        std::fs::write(path, self.render()?)?;
        Ok(path.to_path_buf())
    }
}

fn csv_error(e: csv::Error) -> Error {
    Error::Io(e.to_string())
}

fn certificate_meta(doc: &mut CsvDoc, c: &DomainCertificate) {
    doc.meta("certified_domain", format!("[{}, {}]", fmt_f64(c.a_lo), fmt_f64(c.a_hi)))
        .meta("region", format!("[{}, {}]", c.x_min, c.x_max))
        .meta("kernel_margin", fmt_f64(c.m))
        .meta("jump_margin", fmt_f64(c.m_bar))
        .meta(
            "eps_kernel",
            c.eps_kernel.map(fmt_f64).unwrap_or_else(|| "n/a".into()),
        )
        .meta("eps_jump", fmt_f64(c.eps_jump))
        .meta("certified_interval", fmt_f64(c.interval))
        .meta("heuristic", c.heuristic);
}

fn scenario_meta(doc: &mut CsvDoc, s: &Scenario) {
    let n = &s.config.numerics;
    doc.meta("scenario", &s.config.name)
        .meta("model", s.model.kind_name())
        .meta("theta", n.theta)
        .meta("dt", n.dt);
}

pub fn prices_csv(s: &Scenario, r: &Report) -> CsvDoc {
    let mut header = vec!["x".to_string()];
    header.extend(r.results.iter().map(|p| p.method.tag().to_string()));
    let mut doc = CsvDoc::new(header);
    scenario_meta(&mut doc, s);
    doc.meta("dx", r.grid.dx)
        .meta("domain", format!("[{}, {}]", fmt_f64(r.grid.lo), fmt_f64(r.grid.hi())));
    certificate_meta(&mut doc, &r.certificate);
    for p in &r.results {
        doc.meta(
            format!("{}_wall_time_s", p.method.tag()),
            format!("{:.3}", p.meta.wall_time.as_secs_f64()),
        );
        for w in &p.meta.warnings {
            doc.meta(format!("{}_warning", p.method.tag()), w);
        }
    }
    let xs = r.grid.nodes();
    doc.rows = xs
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            std::iter::once(fmt_f64(x))
                .chain(r.results.iter().map(|p| fmt_f64(p.values[i])))
                .collect()
        })
        .collect();
    doc
}

pub fn errors_csv(s: &Scenario, r: &Report) -> CsvDoc {
    let mut doc = CsvDoc::new(["engine", "reference", "abs_error", "rel_error", "worst_t"]);
    scenario_meta(&mut doc, s);
    doc.meta("dx", r.grid.dx)
        .meta("metric", "max over time of mean abs error on the region (t = 0 only without a closed form)");
    doc.rows = r
        .errors
        .iter()
        .map(|e| {
            vec![
                e.engine.tag().into(),
                e.reference.tag().into(),
                fmt_f64(e.summary.abs),
                fmt_f64(e.summary.rel),
                fmt_f64(e.summary.worst_t),
            ]
        })
        .collect();
    doc
}

pub fn mc_csv(s: &Scenario, points: &[McPoint]) -> CsvDoc {
    let mut doc = CsvDoc::new(["x0", "mean", "std_error", "n_paths", "reference", "reference_value", "z"]);
    scenario_meta(&mut doc, s);
    if let Some(mc) = &s.config.mc {
        doc.meta("steps_per_year", mc.steps_per_year)
            .meta("seed", mc.seed)
            .meta("antithetic", mc.antithetic);
    }
    doc.rows = points
        .iter()
        .map(|p| {
            vec![
                fmt_f64(p.x0),
                fmt_f64(p.estimate.mean),
                fmt_f64(p.estimate.std_error),
                p.estimate.n_paths.to_string(),
                p.reference.map(|r| r.0.tag().to_string()).unwrap_or_default(),
                p.reference.map(|r| fmt_f64(r.1)).unwrap_or_default(),
                p.z_score().map(fmt_f64).unwrap_or_default(),
            ]
        })
        .collect();
    doc
}

pub fn convergence_csv(s: &Scenario, t: &ConvergenceTable) -> CsvDoc {
    let labels: Vec<String> = t.slopes.iter().map(|(l, _)| l.clone()).collect();
    let mut header = vec!["dx".to_string()];
    for l in &labels {
        header.push(format!("{l}_abs"));
        header.push(format!("{l}_rel"));
    }
    let mut doc = CsvDoc::new(header);
    scenario_meta(&mut doc, s);
    for (l, slope) in &t.slopes {
        doc.meta(format!("slope_{l}"), format!("{slope:.4}"));
    }
    for r in &t.rows {
        doc.meta(format!("wall_time_s_dx_{}", r.dx), format!("{:.3}", r.wall_time.as_secs_f64()));
    }
    doc.rows = t
        .rows
        .iter()
        .map(|r| {
            let mut row = vec![fmt_f64(r.dx)];
            for l in &labels {
                match r.errors.iter().find(|e| &e.label() == l) {
                    Some(e) => {
                        row.push(fmt_f64(e.summary.abs));
                        row.push(fmt_f64(e.summary.rel));
                    }
                    None => row.extend([String::new(), String::new()]),
                }
            }
            row
        })
        .collect();
    doc
}

pub fn certificate_csv(s: &Scenario, c: &DomainCertificate) -> CsvDoc {
    let mut doc = CsvDoc::new([
        "a_lo", "a_hi", "x_min", "x_max", "m", "m_bar", "eps_kernel", "eps_jump", "interval", "heuristic",
    ]);
    scenario_meta(&mut doc, s);
    doc.meta("kernel_tol", s.config.numerics.kernel_tol)
        .meta("jump_tol", s.config.numerics.jump_tol);
    doc.rows = vec![vec![
        fmt_f64(c.a_lo),
        fmt_f64(c.a_hi),
        fmt_f64(c.x_min),
        fmt_f64(c.x_max),
        fmt_f64(c.m),
        fmt_f64(c.m_bar),
        c.eps_kernel.map(fmt_f64).unwrap_or_default(),
        fmt_f64(c.eps_jump),
        fmt_f64(c.interval),
        c.heuristic.to_string(),
    ]];
    doc
}
