//! Plain-text tables, CSV, and minimal SVG emission for the two metrics.

use super::bli::BliReport;
use super::eigsim::EigsimReport;
use super::Scheme;

fn k_columns(report: &BliReport) -> String {
    report
        .precisions
        .iter()
        .map(|(k, _)| format!("p@{k}"))
        .collect::<Vec<_>>()
        .join(",")
}

/// CSV for one or more labelled BLI reports. Columns:
/// `label,retrieval,csls_k,evaluated,skipped_oov,p@k...`
pub fn bli_csv(rows: &[(String, BliReport)]) -> String {
    let mut out = String::new();
    if let Some((_, first)) = rows.first() {
        out.push_str(&format!(
            "label,retrieval,csls_k,evaluated,skipped_oov,{}\n",
            k_columns(first)
        ));
    }
    for (label, r) in rows {
        let ps = r
            .precisions
            .iter()
            .map(|(_, p)| format!("{p:.6}"))
            .collect::<Vec<_>>()
            .join(",");
        out.push_str(&format!(
            "{label},{},{},{},{},{ps}\n",
            r.retrieval.as_str(),
            r.csls_k,
            r.evaluated,
            r.skipped_oov
        ));
    }
    out
}

/// CSV for the ablation table.
pub fn ablation_csv(rows: &[(Scheme, BliReport)]) -> String {
    let labelled: Vec<(String, BliReport)> = rows
        .iter()
        .map(|(s, r)| (s.as_str().to_string(), r.clone()))
        .collect();
    bli_csv(&labelled)
}

/// Human-readable ablation table.
pub fn ablation_table(rows: &[(Scheme, BliReport)]) -> String {
    let mut out = String::new();
    out.push_str(&format!("{:<18}", "scheme"));
    if let Some((_, first)) = rows.first() {
        for (k, _) in &first.precisions {
            out.push_str(&format!("{:>10}", format!("p@{k}")));
        }
    }
    out.push('\n');
    for (scheme, r) in rows {
        out.push_str(&format!("{:<18}", scheme.as_str()));
        for (_, p) in &r.precisions {
            out.push_str(&format!("{:>10.4}", p));
        }
        out.push('\n');
    }
    out
}

/// CSV for an eigenvalue-similarity report:
/// `n_words,knn_k,k_effective,delta`.
pub fn eigsim_csv(report: &EigsimReport) -> String {
    format!(
        "n_words,knn_k,k_effective,delta\n{},{},{},{:.9}\n",
        report.n_words, report.knn_k, report.k_effective, report.delta
    )
}

const SVG_W: f64 = 640.0;
const SVG_H: f64 = 400.0;
const MARGIN: f64 = 50.0;

fn svg_header(title: &str) -> String {
    format!(
        concat!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" ",
            "viewBox=\"0 0 {w} {h}\">\n",
            "<rect width=\"{w}\" height=\"{h}\" fill=\"white\"/>\n",
            "<text x=\"{tx}\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" ",
            "font-size=\"16\">{title}</text>\n"
        ),
        w = SVG_W,
        h = SVG_H,
        tx = SVG_W / 2.0,
        title = title
    )
}

/// Bar chart of labelled values (precision per scheme).
pub fn svg_bar_chart(labels: &[&str], values: &[f64], title: &str) -> String {
    let mut out = svg_header(title);
    let n = values.len().max(1);
    let max = values.iter().cloned().fold(1e-12f64, f64::max).max(1.0);
    let plot_w = SVG_W - 2.0 * MARGIN;
    let plot_h = SVG_H - 2.0 * MARGIN;
    let bar_w = plot_w / n as f64 * 0.6;
    for (i, (&v, label)) in values.iter().zip(labels).enumerate() {
        let x = MARGIN + plot_w * (i as f64 + 0.5) / n as f64 - bar_w / 2.0;
        let h = plot_h * v / max;
        let y = SVG_H - MARGIN - h;
        out.push_str(&format!(
            "<rect x=\"{x:.1}\" y=\"{y:.1}\" width=\"{bar_w:.1}\" height=\"{h:.1}\" fill=\"#4878a8\"/>\n"
        ));
        out.push_str(&format!(
            "<text x=\"{:.1}\" y=\"{:.1}\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">{}</text>\n",
            x + bar_w / 2.0,
            SVG_H - MARGIN + 16.0,
            label
        ));
        out.push_str(&format!(
            "<text x=\"{:.1}\" y=\"{:.1}\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">{:.3}</text>\n",
            x + bar_w / 2.0,
            y - 4.0,
            v
        ));
    }
    out.push_str("</svg>\n");
    out
}

fn polyline(values: &[f64], max: f64, color: &str) -> String {
    let plot_w = SVG_W - 2.0 * MARGIN;
    let plot_h = SVG_H - 2.0 * MARGIN;
    let n = values.len().max(2);
    let points: Vec<String> = values
        .iter()
        .enumerate()
        .map(|(i, &v)| {
            let x = MARGIN + plot_w * i as f64 / (n - 1) as f64;
            let y = SVG_H - MARGIN - plot_h * (v / max);
            format!("{x:.1},{y:.1}")
        })
        .collect();
    format!(
        "<polyline points=\"{}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\"/>\n",
        points.join(" ")
    )
}

/// Overlay of two sorted spectra.
pub fn svg_spectra(spectrum_x: &[f64], spectrum_y: &[f64], title: &str) -> String {
    let mut out = svg_header(title);
    let max = spectrum_x
        .iter()
        .chain(spectrum_y)
        .cloned()
        .fold(1e-12f64, f64::max);
    out.push_str(&polyline(spectrum_x, max, "#4878a8"));
    out.push_str(&polyline(spectrum_y, max, "#a84848"));
    out.push_str(&format!(
        "<text x=\"{MARGIN}\" y=\"{:.1}\" font-family=\"sans-serif\" font-size=\"12\" fill=\"#4878a8\">first</text>\n",
        SVG_H - 14.0
    ));
    out.push_str(&format!(
        "<text x=\"{:.1}\" y=\"{:.1}\" font-family=\"sans-serif\" font-size=\"12\" fill=\"#a84848\">second</text>\n",
        MARGIN + 60.0,
        SVG_H - 14.0
    ));
    out.push_str("</svg>\n");
    out
}
