//! Minimal SVG rendering for fit and histogram figures.
//!
//! Output is a pure function of its inputs, so replaying an experiment
//! produces byte-identical files.

use std::fmt::Write;

use crate::stats::FitResult;

pub const WIDTH: f64 = 800.0;
pub const HEIGHT: f64 = 600.0;
const MARGIN_LEFT: f64 = 90.0;
const MARGIN_RIGHT: f64 = 30.0;
const MARGIN_TOP: f64 = 50.0;
const MARGIN_BOTTOM: f64 = 70.0;
const TICKS: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlotPoint {
    pub x: f64,
    pub y: f64,
    /// Interval endpoints drawn as a vertical whisker when both are finite.
    pub y_low: Option<f64>,
    pub y_high: Option<f64>,
    /// Flagged points are left out of the figure.
    pub flagged: bool,
}

impl PlotPoint {
    pub fn new(x: f64, y: f64) -> Self {
        PlotPoint { x, y, y_low: None, y_high: None, flagged: false }
    }
}

#[derive(Debug, Clone, Default)]
pub struct PlotLabels {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
}

/// One named set of histogram bars sharing the figure's bin edges.
#[derive(Debug, Clone)]
pub struct HistogramSeries {
    pub name: String,
    pub bin_width: f64,
    /// Left edge of the first bin.
    pub origin: f64,
    pub counts: Vec<u64>,
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

fn fmt_num(v: f64) -> String {
    let a = v.abs();
    if a != 0.0 && !(1e-3..1e4).contains(&a) {
        format!("{v:.2e}")
    } else {
        let s = format!("{v:.3}");
        let s = s.trim_end_matches('0').trim_end_matches('.');
        if s == "-0" { "0".into() } else { s.into() }
    }
}

/// Data range padded by 10% on each side; degenerate ranges get a fixed
/// width around the single value.
fn padded(lo: f64, hi: f64) -> (f64, f64) {
    if !(lo.is_finite() && hi.is_finite()) {
        return (0.0, 1.0);
    }
    let span = hi - lo;
    if span <= 1e-12 * lo.abs().max(hi.abs()).max(1.0) {
        let w = 0.1 * lo.abs().max(1.0);
        return (lo - w, hi + w);
    }
    (lo - 0.1 * span, hi + 0.1 * span)
}

struct Frame {
    x: (f64, f64),
    y: (f64, f64),
}

impl Frame {
    fn px(&self, x: f64) -> f64 {
        MARGIN_LEFT + (x - self.x.0) / (self.x.1 - self.x.0) * (WIDTH - MARGIN_LEFT - MARGIN_RIGHT)
    }

    fn py(&self, y: f64) -> f64 {
        HEIGHT - MARGIN_BOTTOM - (y - self.y.0) / (self.y.1 - self.y.0) * (HEIGHT - MARGIN_TOP - MARGIN_BOTTOM)
    }
}

fn header(svg: &mut String, labels: &PlotLabels) {
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="13">"#
    );
    let _ = writeln!(svg, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="28" text-anchor="middle" font-size="16">{}</text>"#,
        WIDTH / 2.0,
        escape(&labels.title)
    );
}

fn axes(svg: &mut String, frame: &Frame, labels: &PlotLabels) {
    let (x0, x1) = (MARGIN_LEFT, WIDTH - MARGIN_RIGHT);
    let (y0, y1) = (HEIGHT - MARGIN_BOTTOM, MARGIN_TOP);
    let _ = writeln!(svg, r#"<rect x="{x0}" y="{y1}" width="{}" height="{}" fill="none" stroke="black"/>"#, x1 - x0, y0 - y1);
    for i in 0..=TICKS {
        let f = i as f64 / TICKS as f64;
        let xv = frame.x.0 + f * (frame.x.1 - frame.x.0);
        let yv = frame.y.0 + f * (frame.y.1 - frame.y.0);
        let (px, py) = (frame.px(xv), frame.py(yv));
        let _ = writeln!(svg, r#"<line x1="{px:.2}" y1="{y0}" x2="{px:.2}" y2="{}" stroke="black"/>"#, y0 + 5.0);
        let _ = writeln!(svg, r#"<text x="{px:.2}" y="{}" text-anchor="middle">{}</text>"#, y0 + 20.0, fmt_num(xv));
        let _ = writeln!(svg, r#"<line x1="{}" y1="{py:.2}" x2="{x0}" y2="{py:.2}" stroke="black"/>"#, x0 - 5.0);
        let _ = writeln!(svg, r#"<text x="{}" y="{:.2}" text-anchor="end">{}</text>"#, x0 - 8.0, py + 4.0, fmt_num(yv));
    }
    let _ = writeln!(
        svg,
        r#"<text x="{:.2}" y="{}" text-anchor="middle">{}</text>"#,
        (x0 + x1) / 2.0,
        HEIGHT - 25.0,
        escape(&labels.x_label)
    );
    let cy = (y0 + y1) / 2.0;
    let _ = writeln!(
        svg,
        r#"<text x="25" y="{cy:.2}" text-anchor="middle" transform="rotate(-90 25 {cy:.2})">{}</text>"#,
        escape(&labels.y_label)
    );
}

fn footer(svg: &mut String) {
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="{}" text-anchor="end" font-size="10" fill="gray">sgd-diffusion {}</text>"#,
        WIDTH - 5.0,
        HEIGHT - 5.0,
        env!("CARGO_PKG_VERSION")
    );
    svg.push_str("</svg>\n");
}

fn warning(svg: &mut String, text: &str) {
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="{}" fill="firebrick">{}</text>"#,
        MARGIN_LEFT + 10.0,
        MARGIN_TOP + 20.0,
        escape(text)
    );
}

/// Scatter of `points` in transformed coordinates with optional whiskers and
/// the least-squares line. A missing fit or any flagged point adds a warning
/// annotation.
pub fn render_fit_plot(points: &[PlotPoint], fit: Option<&FitResult>, labels: &PlotLabels) -> String {
    let shown: Vec<&PlotPoint> = points.iter().filter(|p| !p.flagged && p.x.is_finite() && p.y.is_finite()).collect();
    let flagged = points.len() - shown.len();
    let mut xs = (f64::INFINITY, f64::NEG_INFINITY);
    let mut ys = (f64::INFINITY, f64::NEG_INFINITY);
    for p in &shown {
        xs = (xs.0.min(p.x), xs.1.max(p.x));
        for y in [Some(p.y), p.y_low, p.y_high].into_iter().flatten().filter(|v| v.is_finite()) {
            ys = (ys.0.min(y), ys.1.max(y));
        }
    }
    let frame = Frame { x: padded(xs.0, xs.1), y: padded(ys.0, ys.1) };

    let mut svg = String::new();
    header(&mut svg, labels);
    axes(&mut svg, &frame, labels);
    for p in &shown {
        let (cx, cy) = (frame.px(p.x), frame.py(p.y));
        if let (Some(lo), Some(hi)) = (p.y_low, p.y_high) {
            if lo.is_finite() && hi.is_finite() {
                let (a, b) = (frame.py(lo), frame.py(hi));
                let _ = writeln!(svg, r#"<line x1="{cx:.2}" y1="{a:.2}" x2="{cx:.2}" y2="{b:.2}" stroke="steelblue"/>"#);
                for y in [a, b] {
                    let _ = writeln!(
                        svg,
                        r#"<line x1="{:.2}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="steelblue"/>"#,
                        cx - 4.0,
                        cx + 4.0
                    );
                }
            }
        }
        let _ = writeln!(svg, r#"<circle cx="{cx:.2}" cy="{cy:.2}" r="4" fill="steelblue"/>"#);
    }
    match fit {
        Some(f) if !shown.is_empty() => {
            let (a, b) = frame.x;
            let _ = writeln!(
                svg,
                r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="darkorange" stroke-width="2"/>"#,
                frame.px(a),
                frame.py(f.intercept + f.slope * a),
                frame.px(b),
                frame.py(f.intercept + f.slope * b)
            );
            let _ = writeln!(
                svg,
                r#"<text x="{}" y="{}" text-anchor="end">Pearson r = {:.4}, slope = {}</text>"#,
                WIDTH - MARGIN_RIGHT - 10.0,
                MARGIN_TOP + 20.0,
                f.pearson,
                fmt_num(f.slope)
            );
            if flagged > 0 {
                warning(&mut svg, &format!("{flagged} flagged point(s) omitted"));
            }
        }
        _ => warning(&mut svg, &format!("no fit: {} usable point(s), {flagged} flagged", shown.len())),
    }
    footer(&mut svg);
    svg
}

/// Overlaid step outlines of one or more histograms.
pub fn render_histogram_plot(series: &[HistogramSeries], labels: &PlotLabels) -> String {
    const COLORS: [&str; 4] = ["steelblue", "darkorange", "seagreen", "purple"];
    let mut xs = (f64::INFINITY, f64::NEG_INFINITY);
    let mut top = 0u64;
    for s in series {
        xs = (xs.0.min(s.origin), xs.1.max(s.origin + s.bin_width * s.counts.len() as f64));
        top = top.max(s.counts.iter().copied().max().unwrap_or(0));
    }
    let x = if xs.0 < xs.1 { xs } else { padded(xs.0, xs.1) };
    let frame = Frame { x, y: (0.0, (top.max(1) as f64) * 1.1) };
    let mut svg = String::new();
    header(&mut svg, labels);
    axes(&mut svg, &frame, labels);
    for (k, s) in series.iter().enumerate() {
        let color = COLORS[k % COLORS.len()];
        let mut path = format!("M{:.2},{:.2}", frame.px(s.origin), frame.py(0.0));
        for (i, &c) in s.counts.iter().enumerate() {
            let left = s.origin + i as f64 * s.bin_width;
            let y = frame.py(c as f64);
            let _ = write!(path, " L{:.2},{y:.2} L{:.2},{y:.2}", frame.px(left), frame.px(left + s.bin_width));
        }
        let end = s.origin + s.counts.len() as f64 * s.bin_width;
        let _ = write!(path, " L{:.2},{:.2}", frame.px(end), frame.py(0.0));
        let _ = writeln!(svg, r#"<path d="{path}" fill="none" stroke="{color}" stroke-width="1.5"/>"#);
        let _ = writeln!(
            svg,
            r#"<text x="{}" y="{}" text-anchor="end" fill="{color}">{}</text>"#,
            WIDTH - MARGIN_RIGHT - 10.0,
            MARGIN_TOP + 20.0 + 18.0 * k as f64,
            escape(&s.name)
        );
    }
    if series.iter().all(|s| s.counts.iter().all(|&c| c == 0)) {
        warning(&mut svg, "no data");
    }
    footer(&mut svg);
    svg
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stats::{linear_fit, AxisTransform};

    fn labels() -> PlotLabels {
        PlotLabels { title: "t <1>".into(), x_label: "1/k".into(), y_label: "\u{2212}log \u{3b3}".into() }
    }

    #[test]
    fn fit_plot_contents() {
        let pts: Vec<PlotPoint> = (1..=5).map(|i| PlotPoint::new(i as f64, 2.0 * i as f64 + 1.0)).collect();
        let xs: Vec<f64> = pts.iter().map(|p| p.x).collect();
        let ys: Vec<f64> = pts.iter().map(|p| p.y).collect();
        let fit = linear_fit(&xs, &ys, AxisTransform::Identity, AxisTransform::Identity).unwrap();
        let svg = render_fit_plot(&pts, Some(&fit), &labels());
        assert!(svg.starts_with("<svg") && svg.ends_with("</svg>\n"));
        assert!(svg.contains("Pearson r = 1.0000"));
        assert!(svg.contains("t &lt;1&gt;"));
        assert!(svg.contains(env!("CARGO_PKG_VERSION")));
        assert_eq!(svg.matches("<circle").count(), 5);
        assert_eq!(svg, render_fit_plot(&pts, Some(&fit), &labels()));
    }

    #[test]
    fn single_point_range_is_padded() {
        let svg = render_fit_plot(&[PlotPoint::new(3.0, 3.0)], None, &labels());
        assert!(!svg.contains("NaN") && !svg.contains("inf"));
        assert!(svg.contains("no fit"));
    }

    #[test]
    fn flagged_points_hidden_with_warning() {
        let mut pts: Vec<PlotPoint> = (1..=4).map(|i| PlotPoint::new(i as f64, i as f64)).collect();
        pts[0].flagged = true;
        pts[1].flagged = true;
        let svg = render_fit_plot(&pts, None, &labels());
        assert_eq!(svg.matches("<circle").count(), 2);
        assert!(svg.contains("2 flagged"));
    }

    #[test]
    fn whiskers_drawn() {
        let mut p = PlotPoint::new(1.0, 1.0);
        p.y_low = Some(0.5);
        p.y_high = Some(1.5);
        let svg = render_fit_plot(&[p, PlotPoint::new(2.0, 2.0)], None, &labels());
        assert_eq!(svg.matches("stroke=\"steelblue\"").count(), 3);
    }

    #[test]
    fn histogram_plot() {
        let s = HistogramSeries { name: "a".into(), bin_width: 0.5, origin: 0.0, counts: vec![1, 4, 2] };
        let svg = render_histogram_plot(&[s.clone(), HistogramSeries { name: "b".into(), ..s }], &labels());
        assert_eq!(svg.matches("<path").count(), 2);
        assert!(!svg.contains("NaN"));
        let empty = render_histogram_plot(&[], &labels());
        assert!(empty.contains("no data"));
    }

    #[test]
    fn number_format() {
        assert_eq!(fmt_num(0.5), "0.5");
        assert_eq!(fmt_num(2.0), "2");
        assert_eq!(fmt_num(-0.0001), "-1.00e-4");
        assert_eq!(fmt_num(0.0), "0");
    }
}
