use std::fmt::Write;

use serde::Serialize;
use serde_json::Value;

use crate::annotate::{DensityCategory, SizeCategory};

/// One bar chart: a named quantity per category.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PlotSeries {
    pub title: String,
    /// `count` for histograms, otherwise the metric name.
    pub quantity: String,
    pub bars: Vec<(String, f64)>,
}

const SIZE_KEYS: [SizeCategory; 5] = SizeCategory::SCORED;

/// Series for a `prepare_stats.json` (size and density histograms) or a
/// `report.json` (F1 per size and density at each threshold pair).
pub fn plot_series(doc: &Value) -> Result<Vec<PlotSeries>, String> {
    let sizes = SIZE_KEYS.map(SizeCategory::as_str);
    let densities = DensityCategory::ALL.map(DensityCategory::as_str);
    let pick = |obj: &Value, keys: &[&str], field: Option<&str>| -> Result<Vec<(String, f64)>, String> {
        keys.iter()
            .map(|k| {
                let v = obj.get(*k).ok_or_else(|| format!("missing category {k}"))?;
                let v = match field {
                    Some(f) => v.get(f).ok_or_else(|| format!("{k} has no {f}"))?,
                    None => v,
                };
                v.as_f64().map(|x| ((*k).to_owned(), x)).ok_or_else(|| format!("{k} is not a number"))
            })
            .collect()
    };

    if let (Some(s), Some(d)) = (doc.get("size_histogram"), doc.get("density_histogram")) {
        return Ok(vec![
            PlotSeries {
                title: "boxes per size category".into(),
                quantity: "count".into(),
                bars: pick(s, &sizes, None)?,
            },
            PlotSeries {
                title: "scenes per density category".into(),
                quantity: "count".into(),
                bars: pick(d, &densities, None)?,
            },
        ]);
    }
    let reports =
        doc.get("reports").and_then(Value::as_array).ok_or("expected prepare stats or an evaluation report")?;
    let mut out = Vec::new();
    for r in reports {
        let (iou, conf) = (r.get("iou_thresh").and_then(Value::as_f64), r.get("conf_thresh").and_then(Value::as_f64));
        let (Some(iou), Some(conf)) = (iou, conf) else { return Err("report without thresholds".into()) };
        let by_size = r.get("by_size").ok_or("report without by_size")?;
        let by_density = r.get("by_density").ok_or("report without by_density")?;
        out.push(PlotSeries {
            title: format!("F1 per size category (IoU {iou}, confidence {conf})"),
            quantity: "f1".into(),
            bars: pick(by_size, &sizes, Some("f1"))?,
        });
        out.push(PlotSeries {
            title: format!("F1 per density category (IoU {iou}, confidence {conf})"),
            quantity: "f1".into(),
            bars: pick(by_density, &densities, Some("f1"))?,
        });
    }
    Ok(out)
}

pub fn render_csv(series: &[PlotSeries]) -> String {
    let mut s = String::from("series,category,quantity,value\n");
    for (i, p) in series.iter().enumerate() {
        for (cat, v) in &p.bars {
            let _ = writeln!(s, "{i},{cat},{},{v}", p.quantity);
        }
    }
    s
}

const BAR_W: f64 = 60.0;
const GAP: f64 = 20.0;
const PLOT_H: f64 = 200.0;
const PANEL_H: f64 = PLOT_H + 80.0;

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

/// Bar charts stacked vertically. Each bar carries `data-category` and
/// `data-count` (histograms) or `data-value` (metrics) attributes.
pub fn render_svg(series: &[PlotSeries]) -> String {
    let max_bars = series.iter().map(|p| p.bars.len()).max().unwrap_or(0) as f64;
    let width = GAP + max_bars * (BAR_W + GAP);
    let height = PANEL_H * series.len() as f64;
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">"#
    );
    for (i, p) in series.iter().enumerate() {
        let top = PANEL_H * i as f64;
        let base = top + 30.0 + PLOT_H;
        let max = p.bars.iter().map(|b| b.1).fold(0.0f64, f64::max);
        let _ = writeln!(s, r#"  <g class="series" data-quantity="{}">"#, escape(&p.quantity));
        let _ = writeln!(s, r#"    <text x="{GAP}" y="{}" font-size="14">{}</text>"#, top + 18.0, escape(&p.title));
        for (j, (cat, v)) in p.bars.iter().enumerate() {
            let h = if max > 0.0 { v / max * PLOT_H } else { 0.0 };
            let x = GAP + j as f64 * (BAR_W + GAP);
            let attr =
                if p.quantity == "count" { format!(r#"data-count="{v}""#) } else { format!(r#"data-value="{v}""#) };
            let _ = writeln!(
                s,
                r#"    <rect class="bar" data-category="{}" {attr} x="{x}" y="{:.3}" width="{BAR_W}" height="{h:.3}" fill="steelblue"/>"#,
                escape(cat),
                base - h
            );
            let _ = writeln!(
                s,
                r#"    <text x="{:.1}" y="{}" font-size="10" text-anchor="middle">{}</text>"#,
                x + BAR_W / 2.0,
                base + 14.0,
                escape(cat)
            );
        }
        s.push_str("  </g>\n");
    }
    s.push_str("</svg>\n");
    s
}
