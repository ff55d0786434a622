//! CSV and SVG emission for solver traces. Output is deterministic:
//! fixed header, 17-significant-digit reals, no timestamps.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::Error;
use crate::experiments::ReportBundle;
use crate::identification::IdentificationPoint;
use crate::solvers::Trace;

pub const CSV_HEADER: &str =
    "k,prox_steps,f_value,subopt,accelerated,in_z,alpha,correct_manifolds,spurious_manifolds,signature_hash";

/// Render one algorithm's trace as CSV. `series` must align with the
/// trace records and `f_floor` with the bundle's floored optimum.
pub fn render_csv(
    trace: &Trace,
    series: &[IdentificationPoint],
    f_floor: f64,
) -> Result<String, Error> {
    if trace.records.is_empty() {
        return Err(Error::InvalidArgument("cannot render an empty trace".into()));
    }
    if series.len() != trace.records.len() {
        return Err(Error::InvalidArgument(format!(
            "series length {} does not match trace length {}",
            series.len(),
            trace.records.len()
        )));
    }
    let mut out = String::with_capacity(96 * (trace.records.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for (rec, pt) in trace.records.iter().zip(series) {
        writeln!(
            out,
            "{},{},{:.16e},{:.16e},{},{},{:.16e},{},{},{:016x}",
            rec.k,
            rec.prox_steps_cumulative,
            rec.f_value,
            rec.f_value - f_floor,
            rec.accelerated as u8,
            rec.in_z as u8,
            rec.alpha_used,
            pt.correct,
            pt.spurious,
            rec.signature.stable_hash(),
        )
        .expect("string write");
    }
    Ok(out)
}

fn write_file(path: &Path, contents: &str) -> Result<(), Error> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent).map_err(|e| Error::Io {
                path: parent.display().to_string(),
                source: e,
            })?;
        }
    }
    fs::write(path, contents).map_err(|e| Error::Io {
        path: path.display().to_string(),
        source: e,
    })
}

/// Write one CSV per algorithm into `dir/<scenario>/<algo>.csv` plus
/// `dir/<scenario>/reference.json`. Returns the written paths.
pub fn emit_csv(bundle: &ReportBundle, dir: &Path) -> Result<Vec<std::path::PathBuf>, Error> {
    let base = dir.join(&bundle.scenario_name);
    let mut paths = Vec::new();
    for report in &bundle.reports {
        let csv = render_csv(&report.trace, &report.series, bundle.f_floor)?;
        let path = base.join(format!("{}.csv", report.algo.name()));
        write_file(&path, &csv)?;
        paths.push(path);
    }
    let ref_path = base.join("reference.json");
    write_file(&ref_path, &render_reference_json(bundle))?;
    paths.push(ref_path);
    Ok(paths)
}

/// Reference solution as JSON (hand-rendered; the schema is flat).
pub fn render_reference_json(bundle: &ReportBundle) -> String {
    let r = &bundle.reference;
    let point = r
        .point
        .as_slice()
        .iter()
        .map(|v| format!("{v:.16e}"))
        .collect::<Vec<_>>()
        .join(", ");
    let sig = r
        .signature
        .iter()
        .map(|m| format!("\"{m:?}\""))
        .collect::<Vec<_>>()
        .join(", ");
    format!(
        "{{\n  \"scenario\": \"{}\",\n  \"f_star\": {:.16e},\n  \"f_floor\": {:.16e},\n  \"subopt_achieved\": {:.16e},\n  \"budget_exhausted\": {},\n  \"signature\": [{sig}],\n  \"point\": [{point}]\n}}\n",
        bundle.scenario_name, r.f_star, bundle.f_floor, r.subopt_achieved, r.budget_exhausted
    )
}

const PALETTE: &[&str] = &["#d62728", "#1f77b4", "#2ca02c", "#9467bd", "#ff7f0e"];
const W: f64 = 760.0;
const H: f64 = 480.0;
const ML: f64 = 70.0; // margins
const MR: f64 = 160.0;
const MT: f64 = 30.0;
const MB: f64 = 50.0;

struct Frame {
    x_min: f64,
    x_max: f64,
    y_min: f64,
    y_max: f64,
}

impl Frame {
    fn px(&self, x: f64) -> f64 {
        ML + (x - self.x_min) / (self.x_max - self.x_min).max(1e-300) * (W - ML - MR)
    }
    fn py(&self, y: f64) -> f64 {
        H - MB - (y - self.y_min) / (self.y_max - self.y_min).max(1e-300) * (H - MT - MB)
    }
}

fn svg_header(title: &str) -> String {
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{W}\" height=\"{H}\" viewBox=\"0 0 {W} {H}\">\n\
         <rect width=\"{W}\" height=\"{H}\" fill=\"white\"/>\n\
         <text x=\"{:.1}\" y=\"20\" font-family=\"monospace\" font-size=\"14\" text-anchor=\"middle\">{title}</text>\n",
        (W + ML - MR) / 2.0
    )
}

fn axes(frame: &Frame, out: &mut String, x_label: &str, y_label: &str) {
    let x0 = frame.px(frame.x_min);
    let x1 = frame.px(frame.x_max);
    let y0 = frame.py(frame.y_min);
    let y1 = frame.py(frame.y_max);
    writeln!(
        out,
        "<rect x=\"{x0:.1}\" y=\"{y1:.1}\" width=\"{:.1}\" height=\"{:.1}\" fill=\"none\" stroke=\"black\"/>",
        x1 - x0,
        y0 - y1
    )
    .unwrap();
    writeln!(
        out,
        "<text x=\"{:.1}\" y=\"{:.1}\" font-family=\"monospace\" font-size=\"12\" text-anchor=\"middle\">{x_label}</text>",
        (x0 + x1) / 2.0,
        H - 12.0
    )
    .unwrap();
    writeln!(
        out,
        "<text x=\"16\" y=\"{:.1}\" font-family=\"monospace\" font-size=\"12\" text-anchor=\"middle\" transform=\"rotate(-90 16 {:.1})\">{y_label}</text>",
        (y0 + y1) / 2.0,
        (y0 + y1) / 2.0
    )
    .unwrap();
    // a few ticks
    for i in 0..=4 {
        let fx = frame.x_min + (frame.x_max - frame.x_min) * i as f64 / 4.0;
        let fy = frame.y_min + (frame.y_max - frame.y_min) * i as f64 / 4.0;
        writeln!(
            out,
            "<text x=\"{:.1}\" y=\"{:.1}\" font-family=\"monospace\" font-size=\"10\" text-anchor=\"middle\">{:.3e}</text>",
            frame.px(fx),
            y0 + 16.0,
            fx
        )
        .unwrap();
        writeln!(
            out,
            "<text x=\"{:.1}\" y=\"{:.1}\" font-family=\"monospace\" font-size=\"10\" text-anchor=\"end\">{:.3e}</text>",
            x0 - 6.0,
            frame.py(fy) + 3.0,
            fy
        )
        .unwrap();
    }
}

fn polyline(frame: &Frame, pts: &[(f64, f64)], color: &str, out: &mut String) {
    if pts.is_empty() {
        return;
    }
    let mut d = String::new();
    for (x, y) in pts {
        write!(d, "{:.2},{:.2} ", frame.px(*x), frame.py(*y)).unwrap();
    }
    writeln!(
        out,
        "<polyline points=\"{}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\"/>",
        d.trim_end()
    )
    .unwrap();
}

fn legend(names: &[(String, &str)], out: &mut String) {
    for (i, (name, color)) in names.iter().enumerate() {
        let y = MT + 20.0 + 18.0 * i as f64;
        writeln!(
            out,
            "<line x1=\"{:.1}\" y1=\"{y:.1}\" x2=\"{:.1}\" y2=\"{y:.1}\" stroke=\"{color}\" stroke-width=\"2\"/>",
            W - MR + 12.0,
            W - MR + 40.0
        )
        .unwrap();
        writeln!(
            out,
            "<text x=\"{:.1}\" y=\"{:.1}\" font-family=\"monospace\" font-size=\"12\">{name}</text>",
            W - MR + 46.0,
            y + 4.0
        )
        .unwrap();
    }
}

/// Suboptimality (log scale) and identification counts against cumulative
/// prox steps, stacked into a single SVG document per call site's choice.
pub fn render_svg_suboptimality(bundle: &ReportBundle) -> Result<String, Error> {
    if bundle.reports.is_empty() {
        return Err(Error::InvalidArgument("empty bundle".into()));
    }
    // clamp nonpositive suboptimality to the smallest positive value seen
    let mut min_pos = f64::INFINITY;
    let mut max_v: f64 = 0.0;
    let mut max_x: f64 = 1.0;
    for r in &bundle.reports {
        for rec in &r.trace.records {
            let s = rec.f_value - bundle.f_floor;
            if s > 0.0 {
                min_pos = min_pos.min(s);
                max_v = max_v.max(s);
            }
            max_x = max_x.max(rec.prox_steps_cumulative as f64);
        }
    }
    if !min_pos.is_finite() {
        min_pos = 1e-16;
        max_v = 1.0;
    }
    let frame = Frame {
        x_min: 0.0,
        x_max: max_x,
        y_min: min_pos.log10(),
        y_max: max_v.log10().max(min_pos.log10() + 1.0),
    };
    let mut out = svg_header(&format!("{}: suboptimality", bundle.scenario_name));
    axes(&frame, &mut out, "prox steps", "log10(F - F*)");
    let mut names = Vec::new();
    for (i, r) in bundle.reports.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let pts: Vec<(f64, f64)> = r
            .trace
            .records
            .iter()
            .map(|rec| {
                let s = (rec.f_value - bundle.f_floor).max(min_pos);
                (rec.prox_steps_cumulative as f64, s.log10())
            })
            .collect();
        polyline(&frame, &pts, color, &mut out);
        names.push((r.algo.name().to_string(), color));
    }
    legend(&names, &mut out);
    out.push_str("</svg>\n");
    Ok(out)
}

/// Correct-manifold counts against prox steps, with a circled-plus marker
/// at each algorithm's first full identification (if any).
pub fn render_svg_identification(bundle: &ReportBundle) -> Result<String, Error> {
    if bundle.reports.is_empty() {
        return Err(Error::InvalidArgument("empty bundle".into()));
    }
    let sig_star = bundle.reference.signature.len() as f64;
    let mut max_x: f64 = 1.0;
    let mut max_y: f64 = sig_star.max(1.0);
    for r in &bundle.reports {
        for (rec, pt) in r.trace.records.iter().zip(&r.series) {
            max_x = max_x.max(rec.prox_steps_cumulative as f64);
            max_y = max_y.max((pt.correct + pt.spurious) as f64);
        }
    }
    let frame = Frame {
        x_min: 0.0,
        x_max: max_x,
        y_min: 0.0,
        y_max: max_y + 0.5,
    };
    let mut out = svg_header(&format!("{}: identification", bundle.scenario_name));
    axes(&frame, &mut out, "prox steps", "correct manifolds");
    writeln!(
        out,
        "<line x1=\"{:.1}\" y1=\"{:.1}\" x2=\"{:.1}\" y2=\"{:.1}\" stroke=\"gray\" stroke-dasharray=\"4 3\"/>",
        frame.px(0.0),
        frame.py(sig_star),
        frame.px(max_x),
        frame.py(sig_star)
    )
    .unwrap();
    let mut names = Vec::new();
    for (i, r) in bundle.reports.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let pts: Vec<(f64, f64)> = r
            .series
            .iter()
            .zip(&r.trace.records)
            .map(|(pt, rec)| (rec.prox_steps_cumulative as f64, pt.correct as f64))
            .collect();
        polyline(&frame, &pts, color, &mut out);
        if let Some(steps) = r.stability.first_full_identification {
            let cx = frame.px(steps as f64);
            let cy = frame.py(sig_star);
            writeln!(
                out,
                "<circle cx=\"{cx:.1}\" cy=\"{cy:.1}\" r=\"5\" fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\"/>\n\
                 <line x1=\"{:.1}\" y1=\"{cy:.1}\" x2=\"{:.1}\" y2=\"{cy:.1}\" stroke=\"{color}\"/>\n\
                 <line x1=\"{cx:.1}\" y1=\"{:.1}\" x2=\"{cx:.1}\" y2=\"{:.1}\" stroke=\"{color}\"/>",
                cx - 5.0,
                cx + 5.0,
                cy - 5.0,
                cy + 5.0
            )
            .unwrap();
        }
        names.push((r.algo.name().to_string(), color));
    }
    legend(&names, &mut out);
    out.push_str("</svg>\n");
    Ok(out)
}

/// Write `dir/<scenario>/plots/{subopt,ident}.svg`.
pub fn emit_svg(bundle: &ReportBundle, dir: &Path) -> Result<Vec<std::path::PathBuf>, Error> {
    let sub = render_svg_suboptimality(bundle)?;
    let ident = render_svg_identification(bundle)?;
    let plots = dir.join(&bundle.scenario_name).join("plots");
    let p1 = plots.join("subopt.svg");
    let p2 = plots.join("ident.svg");
    write_file(&p1, &sub)?;
    write_file(&p2, &ident)?;
    Ok(vec![p1, p2])
}
