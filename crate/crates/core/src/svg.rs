//! Deterministic SVG scatter plots of morphospace axis pairs.

use std::fs;
use std::path::Path;

use crate::dataset::MorphoDataset;
use crate::error::{Error, Result};
use crate::metrics::MorphoPoint;

/// A morphospace axis selectable for plotting.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    De,
    IPe,
    I,
}

impl Axis {
    pub fn label(self) -> &'static str {
        match self {
            Axis::De => "De",
            Axis::IPe => "iPe",
            Axis::I => "I",
        }
    }

    fn value(self, p: &MorphoPoint) -> f64 {
        match self {
            Axis::De => p.density,
            Axis::IPe => p.permeability,
            Axis::I => p.information,
        }
    }
}

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 520.0;
const MARGIN_LEFT: f64 = 70.0;
const MARGIN_BOTTOM: f64 = 60.0;
const MARGIN_TOP: f64 = 30.0;
const MARGIN_RIGHT: f64 = 170.0;

/// Fixed category palette; unknown categories fall back to gray.
const PALETTE: [(&str, &str); 4] = [
    ("city", "#1f77b4"),
    ("proto-urban", "#ff7f0e"),
    ("non-urban", "#2ca02c"),
    ("theoretical", "#9467bd"),
];
const FALLBACK_COLOR: &str = "#7f7f7f";

/// Render a standalone SVG 1.1 scatter of two distinct axes.
///
/// Axes span [0, 1] with ticks every 0.25. Dot area scales with population
/// when present (radius proportional to sqrt of population, normalised to
/// the dataset maximum); points without population use a fixed radius of 3.
/// Byte output is a pure function of the dataset and axes.
pub fn scatter_svg(ds: &MorphoDataset, x_axis: Axis, y_axis: Axis) -> Result<String> {
    if x_axis == y_axis {
        return Err(Error::SameAxes);
    }

    let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
    let px = |v: f64| MARGIN_LEFT + v * plot_w;
    let py = |v: f64| MARGIN_TOP + (1.0 - v) * plot_h;

    let pop_max = ds.points().filter_map(|p| p.population).max().unwrap_or(0);

    let mut s = String::new();
    s.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    s.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{WIDTH}\" height=\"{HEIGHT}\" viewBox=\"0 0 {WIDTH} {HEIGHT}\">\n"
    ));
    s.push_str(&format!(
        "  <rect x=\"0\" y=\"0\" width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"white\"/>\n"
    ));

    // Axes and ticks.
    s.push_str(&format!(
        "  <line x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"black\"/>\n",
        px(0.0),
        py(0.0),
        px(1.0),
        py(0.0)
    ));
    s.push_str(&format!(
        "  <line x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"black\"/>\n",
        px(0.0),
        py(0.0),
        px(0.0),
        py(1.0)
    ));
    for i in 0..=4 {
        let v = i as f64 * 0.25;
        s.push_str(&format!(
            "  <line x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"black\"/>\n",
            px(v),
            py(0.0),
            px(v),
            py(0.0) + 5.0
        ));
        s.push_str(&format!(
            "  <text x=\"{:.2}\" y=\"{:.2}\" font-size=\"11\" text-anchor=\"middle\">{:.2}</text>\n",
            px(v),
            py(0.0) + 18.0,
            v
        ));
        s.push_str(&format!(
            "  <line x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"black\"/>\n",
            px(0.0) - 5.0,
            py(v),
            px(0.0),
            py(v)
        ));
        s.push_str(&format!(
            "  <text x=\"{:.2}\" y=\"{:.2}\" font-size=\"11\" text-anchor=\"end\">{:.2}</text>\n",
            px(0.0) - 8.0,
            py(v) + 4.0,
            v
        ));
    }
    s.push_str(&format!(
        "  <text x=\"{:.2}\" y=\"{:.2}\" font-size=\"13\" text-anchor=\"middle\">{}</text>\n",
        px(0.5),
        HEIGHT - 15.0,
        x_axis.label()
    ));
    s.push_str(&format!(
        "  <text x=\"{:.2}\" y=\"{:.2}\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 {:.2} {:.2})\">{}</text>\n",
        20.0,
        py(0.5),
        20.0,
        py(0.5),
        y_axis.label()
    ));

    // Points, in dataset order.
    for p in ds.points() {
        let r = match p.population {
            Some(pop) if pop_max > 0 => (12.0 * (pop as f64 / pop_max as f64).sqrt()).max(1.5),
            _ => 3.0,
        };
        s.push_str(&format!(
            "  <circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"{:.2}\" fill=\"{}\" fill-opacity=\"0.75\"><title>{}</title></circle>\n",
            px(x_axis.value(p)),
            py(y_axis.value(p)),
            r,
            category_color(p.category.as_deref()),
            xml_escape(&p.label)
        ));
    }

    // Legend: fixed palette order, then "uncategorized" when needed.
    let mut legend: Vec<(&str, &str)> = Vec::new();
    for (name, color) in PALETTE {
        if ds.points().any(|p| p.category.as_deref() == Some(name)) {
            legend.push((name, color));
        }
    }
    if ds.points().any(|p| {
        p.category.is_none()
            || !PALETTE
                .iter()
                .any(|(n, _)| Some(*n) == p.category.as_deref())
    }) {
        legend.push(("uncategorized", FALLBACK_COLOR));
    }
    let lx = WIDTH - MARGIN_RIGHT + 20.0;
    for (i, (name, color)) in legend.iter().enumerate() {
        let ly = MARGIN_TOP + 12.0 + i as f64 * 18.0;
        s.push_str(&format!(
            "  <circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"4\" fill=\"{}\"/>\n",
            lx,
            ly - 4.0,
            color
        ));
        s.push_str(&format!(
            "  <text x=\"{:.2}\" y=\"{:.2}\" font-size=\"11\">{}</text>\n",
            lx + 10.0,
            ly,
            name
        ));
    }

    s.push_str("</svg>\n");
    Ok(s)
}

/// Render and write a scatter to a file.
pub fn emit_svg_scatter(
    ds: &MorphoDataset,
    x_axis: Axis,
    y_axis: Axis,
    path: impl AsRef<Path>,
) -> Result<()> {
    let path = path.as_ref();
    let svg = scatter_svg(ds, x_axis, y_axis)?;
    fs::write(path, svg).map_err(|e| Error::io(path, e))
}

fn category_color(category: Option<&str>) -> &'static str {
    category
        .and_then(|c| PALETTE.iter().find(|(n, _)| *n == c))
        .map(|(_, color)| *color)
        .unwrap_or(FALLBACK_COLOR)
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}
