//! Machine-readable rate reports: CSV records, JSON fits, SVG log-log plots.

use crate::error::Result;
use crate::fit::SlopeFit;
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

/// One sweep cell.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateRecord {
    pub eps: f64,
    pub x: [f64; 2],
    pub dist: f64,
    pub abs_err: f64,
}

/// `L^p` norm at one eps, with the quadrature error bar for the uncovered
/// regions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LpNorm {
    pub eps: f64,
    pub value: f64,
    pub error_bar: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LpEntry {
    pub p: f64,
    pub norms: Vec<LpNorm>,
    pub fit: SlopeFit,
}

/// Resolution and sampling knobs recorded with every report.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReportSettings {
    pub points_per_wavelength: f64,
    pub node_cap: usize,
    pub n_points: usize,
    pub band_frac: f64,
    pub seed: u64,
}

/// Full result of a rate experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateReport {
    pub domain: String,
    pub g: String,
    pub min_curvature: f64,
    pub eps_grid: Vec<f64>,
    pub records: Vec<RateRecord>,
    pub pointwise_fit: Option<SlopeFit>,
    pub kappa_hat: Option<SlopeFit>,
    pub lp: Vec<LpEntry>,
    pub settings: ReportSettings,
}

impl RateReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("eps,x1,x2,dist,abs_err\n");
        for r in &self.records {
            let _ = writeln!(out, "{},{},{},{},{}", r.eps, r.x[0], r.x[1], r.dist, r.abs_err);
        }
        out
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

/// Write the report in the requested formats; returns the created paths.
/// `formats` entries are `csv`, `json`, or `svg`.
pub fn emit_report(report: &RateReport, formats: &[String], out_dir: &Path) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(out_dir)?;
    let mut written = Vec::new();
    for f in formats {
        match f.as_str() {
            "csv" => {
                let path = out_dir.join("records.csv");
                std::fs::write(&path, report.to_csv())?;
                written.push(path);
            }
            "json" => {
                let path = out_dir.join("report.json");
                std::fs::write(&path, report.to_json()?)?;
                written.push(path);
            }
            "svg" => {
                let path = out_dir.join("pointwise.svg");
                std::fs::write(&path, pointwise_svg(report))?;
                written.push(path);
                let path = out_dir.join("lp.svg");
                std::fs::write(&path, lp_svg(report))?;
                written.push(path);
            }
            other => {
                return Err(crate::error::Error::InvalidInput {
                    field: "format",
                    reason: format!("unknown format `{other}` (csv, json, svg)"),
                })
            }
        }
    }
    Ok(written)
}

const W: f64 = 640.0;
const H: f64 = 480.0;
const MARGIN: f64 = 60.0;

struct LogCanvas {
    x_min: f64,
    x_max: f64,
    y_min: f64,
    y_max: f64,
}

impl LogCanvas {
    fn from_points(pts: &[(f64, f64)]) -> Option<Self> {
        let finite: Vec<(f64, f64)> = pts
            .iter()
            .copied()
            .filter(|(x, y)| *x > 0.0 && *y > 0.0)
            .collect();
        if finite.len() < 2 {
            return None;
        }
        let (mut x_min, mut x_max) = (f64::MAX, f64::MIN);
        let (mut y_min, mut y_max) = (f64::MAX, f64::MIN);
        for (x, y) in finite {
            x_min = x_min.min(x);
            x_max = x_max.max(x);
            y_min = y_min.min(y);
            y_max = y_max.max(y);
        }
        if x_min == x_max || y_min == y_max {
            return None;
        }
        Some(LogCanvas { x_min, x_max, y_min, y_max })
    }

    fn map(&self, x: f64, y: f64) -> (f64, f64) {
        let fx = (x.ln() - self.x_min.ln()) / (self.x_max.ln() - self.x_min.ln());
        let fy = (y.ln() - self.y_min.ln()) / (self.y_max.ln() - self.y_min.ln());
        (MARGIN + fx * (W - 2.0 * MARGIN), H - MARGIN - fy * (H - 2.0 * MARGIN))
    }
}

fn svg_header(title: &str) -> String {
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{W}\" height=\"{H}\" \
         viewBox=\"0 0 {W} {H}\">\n<rect width=\"{W}\" height=\"{H}\" fill=\"white\"/>\n\
         <text x=\"{}\" y=\"24\" font-family=\"monospace\" font-size=\"14\">{title}</text>\n\
         <rect x=\"{MARGIN}\" y=\"{MARGIN}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"#999\"/>\n",
        W / 2.0 - 120.0,
        W - 2.0 * MARGIN,
        H - 2.0 * MARGIN
    )
}

fn scatter_with_fit(
    title: &str,
    series: &[(String, Vec<(f64, f64)>, Option<(f64, f64)>)],
) -> String {
    let mut svg = svg_header(title);
    let all: Vec<(f64, f64)> = series.iter().flat_map(|(_, pts, _)| pts.iter().copied()).collect();
    let Some(canvas) = LogCanvas::from_points(&all) else {
        svg.push_str("<text x=\"200\" y=\"240\" font-family=\"monospace\">no data</text>\n</svg>\n");
        return svg;
    };
    let colors = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"];
    for (idx, (label, pts, fit)) in series.iter().enumerate() {
        let color = colors[idx % colors.len()];
        for (x, y) in pts {
            if *x > 0.0 && *y > 0.0 {
                let (cx, cy) = canvas.map(*x, *y);
                let _ = writeln!(svg, "<circle cx=\"{cx:.2}\" cy=\"{cy:.2}\" r=\"3\" fill=\"{color}\"/>");
            }
        }
        if let Some((slope, intercept)) = fit {
            // draw y = e^intercept x^slope through the x range
            let y0 = (intercept + slope * canvas.x_min.ln()).exp();
            let y1 = (intercept + slope * canvas.x_max.ln()).exp();
            let (x0, y0) = canvas.map(canvas.x_min, y0.clamp(canvas.y_min, canvas.y_max));
            let (x1, y1) = canvas.map(canvas.x_max, y1.clamp(canvas.y_min, canvas.y_max));
            let _ = writeln!(
                svg,
                "<line x1=\"{x0:.2}\" y1=\"{y0:.2}\" x2=\"{x1:.2}\" y2=\"{y1:.2}\" \
                 stroke=\"{color}\" stroke-dasharray=\"4 3\"/>"
            );
        }
        let _ = writeln!(
            svg,
            "<text x=\"{}\" y=\"{}\" font-family=\"monospace\" font-size=\"12\" fill=\"{color}\">{label}</text>",
            W - MARGIN - 180.0,
            MARGIN + 16.0 * (idx as f64 + 1.0)
        );
    }
    svg.push_str("</svg>\n");
    svg
}

fn fit_params(fit: &Option<SlopeFit>) -> Option<(f64, f64)> {
    match fit {
        Some(SlopeFit::Fit { slope, intercept, .. }) => Some((*slope, *intercept)),
        _ => None,
    }
}

fn pointwise_svg(report: &RateReport) -> String {
    // per-eps maxima of the recorded errors
    let mut pts: Vec<(f64, f64)> = Vec::new();
    for &eps in &report.eps_grid {
        let max = report
            .records
            .iter()
            .filter(|r| r.eps == eps)
            .fold(0.0f64, |m, r| m.max(r.abs_err));
        pts.push((eps, max));
    }
    let label = match &report.pointwise_fit {
        Some(SlopeFit::Fit { slope, .. }) => format!("max err, slope {slope:.3}"),
        _ => "max err".to_string(),
    };
    scatter_with_fit(
        &format!("pointwise error vs eps ({} / {})", report.domain, report.g),
        &[(label, pts, fit_params(&report.pointwise_fit))],
    )
}

fn lp_svg(report: &RateReport) -> String {
    let series: Vec<(String, Vec<(f64, f64)>, Option<(f64, f64)>)> = report
        .lp
        .iter()
        .map(|entry| {
            let pts: Vec<(f64, f64)> = entry.norms.iter().map(|n| (n.eps, n.value)).collect();
            let label = match &entry.fit {
                SlopeFit::Fit { slope, .. } => format!("p = {}, slope {slope:.3}", entry.p),
                _ => format!("p = {}", entry.p),
            };
            let fit = fit_params(&Some(entry.fit.clone()));
            (label, pts, fit)
        })
        .collect();
    scatter_with_fit(
        &format!("Lp error vs eps ({} / {})", report.domain, report.g),
        &series,
    )
}
