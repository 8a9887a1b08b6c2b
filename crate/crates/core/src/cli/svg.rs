//! Static line chart of benchmark summaries: mean representative-set size
//! against delta, one panel per dataset and one line per algorithm.

use std::fmt::Write;

use crate::eval::BenchTable;

const PANEL_W: f64 = 420.0;
const PANEL_H: f64 = 260.0;
const MARGIN: f64 = 50.0;
const COLORS: [&str; 5] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"];

pub fn bench_svg(table: &BenchTable) -> String {
    let mut datasets: Vec<&str> = Vec::new();
    for s in &table.summaries {
        if !datasets.contains(&s.dataset.as_str()) {
            datasets.push(&s.dataset);
        }
    }
    let height = datasets.len().max(1) as f64 * (PANEL_H + MARGIN) + MARGIN;
    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{height}" font-family="sans-serif" font-size="11">"#,
        w = PANEL_W + 2.0 * MARGIN + 140.0
    );
    for (p, name) in datasets.iter().enumerate() {
        let rows: Vec<_> = table.summaries.iter().filter(|s| s.dataset == *name).collect();
        let (x0, y0) = (MARGIN, MARGIN + p as f64 * (PANEL_H + MARGIN));
        let finite = |v: f64| v.is_finite();
        let dmin = rows.iter().map(|s| s.delta).fold(f64::INFINITY, f64::min);
        let dmax = rows.iter().map(|s| s.delta).fold(f64::NEG_INFINITY, f64::max);
        let kmax = rows
            .iter()
            .map(|s| s.rep_count.0)
            .filter(|v| finite(*v))
            .fold(1.0, f64::max);
        let sx = |d: f64| {
            if dmax > dmin {
                x0 + (d - dmin) / (dmax - dmin) * PANEL_W
            } else {
                x0 + PANEL_W / 2.0
            }
        };
        let sy = |k: f64| y0 + PANEL_H - k / kmax * PANEL_H;
        let _ = writeln!(
            svg,
            r##"<rect x="{x0}" y="{y0}" width="{PANEL_W}" height="{PANEL_H}" fill="none" stroke="#888"/>"##
        );
        let _ = writeln!(svg, r#"<text x="{x0}" y="{}">{}</text>"#, y0 - 8.0, escape(name));
        let _ = writeln!(
            svg,
            r#"<text x="{}" y="{}" text-anchor="middle">delta ({dmin:.3} to {dmax:.3})</text>"#,
            x0 + PANEL_W / 2.0,
            y0 + PANEL_H + 20.0
        );
        let _ = writeln!(
            svg,
            r#"<text x="{}" y="{}" text-anchor="end">{kmax:.0}</text>"#,
            x0 - 4.0,
            y0 + 10.0
        );
        let mut algorithms: Vec<_> = rows.iter().map(|s| s.algorithm).collect();
        algorithms.dedup();
        for (a, alg) in algorithms.iter().enumerate() {
            let color = COLORS[a % COLORS.len()];
            let points: Vec<String> = rows
                .iter()
                .filter(|s| s.algorithm == *alg && finite(s.rep_count.0))
                .map(|s| format!("{:.2},{:.2}", sx(s.delta), sy(s.rep_count.0)))
                .collect();
            let _ = writeln!(
                svg,
                r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="2"/>"#,
                points.join(" ")
            );
            let ly = y0 + 14.0 + a as f64 * 16.0;
            let _ = writeln!(
                svg,
                r#"<text x="{}" y="{ly}" fill="{color}">{alg}</text>"#,
                x0 + PANEL_W + 10.0
            );
        }
    }
    svg.push_str("</svg>\n");
    svg
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
