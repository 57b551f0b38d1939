//! Deterministic SVG rendering of the stratified (perimeter, area)
//! half-plane. Output bytes are a pure function of the diagram and the
//! options; coordinates are formatted with fixed precision so repeated
//! runs produce identical files.

use crate::stratification::CerfDiagram;

#[derive(Debug, Clone, Copy)]
pub struct SvgOptions {
    pub width: f64,
    pub height: f64,
    pub margin: f64,
    /// Sample points per curve.
    pub samples: usize,
}

impl Default for SvgOptions {
    fn default() -> Self {
        Self {
            width: 640.0,
            height: 480.0,
            margin: 56.0,
            samples: 256,
        }
    }
}

const PALETTE: [&str; 6] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf",
];

fn fmt(v: f64) -> String {
    format!("{v:.2}")
}

pub fn render_cerf_svg(diagram: &CerfDiagram, opts: &SvgOptions) -> String {
    let (pi_min, pi_max) = (diagram.pi_min, diagram.pi_max);
    let c_min = diagram.curves.first().map_or(-1.0, |c| c.c);
    let c_max = diagram.curves.last().map_or(1.0, |c| c.c);
    let span = (c_max - c_min).max(f64::MIN_POSITIVE) * pi_max * pi_max;
    let a_min = c_min * pi_max * pi_max - 0.12 * span;
    let a_max = c_max * pi_max * pi_max + 0.12 * span;

    let plot_w = opts.width - 2.0 * opts.margin;
    let plot_h = opts.height - 2.0 * opts.margin;
    let sx = |pi: f64| opts.margin + (pi - pi_min) / (pi_max - pi_min) * plot_w;
    let sy = |a: f64| opts.margin + (a_max - a) / (a_max - a_min) * plot_h;

    let mut out = String::new();
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" \
         viewBox=\"0 0 {} {}\">\n",
        fmt(opts.width),
        fmt(opts.height),
        fmt(opts.width),
        fmt(opts.height)
    ));
    out.push_str(&format!(
        "<rect width=\"{}\" height=\"{}\" fill=\"white\"/>\n",
        fmt(opts.width),
        fmt(opts.height)
    ));
    out.push_str(&format!(
        "<text x=\"{}\" y=\"{}\" font-size=\"14\" text-anchor=\"middle\">\
         discriminant curves a = c_i p^2 for n = {}</text>\n",
        fmt(opts.width / 2.0),
        fmt(opts.margin / 2.0),
        diagram.n
    ));

    // frame and the zero-area grid line
    out.push_str(&format!(
        "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" \
         stroke=\"#444444\" stroke-width=\"1\"/>\n",
        fmt(opts.margin),
        fmt(opts.margin),
        fmt(plot_w),
        fmt(plot_h)
    ));
    if a_min < 0.0 && a_max > 0.0 {
        out.push_str(&format!(
            "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"#cccccc\" \
             stroke-width=\"1\"/>\n",
            fmt(sx(pi_min)),
            fmt(sy(0.0)),
            fmt(sx(pi_max)),
            fmt(sy(0.0))
        ));
    }

    // axis tick labels
    for (frac, anchor) in [(0.0, "start"), (0.5, "middle"), (1.0, "end")] {
        let pi = pi_min + frac * (pi_max - pi_min);
        out.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" font-size=\"11\" text-anchor=\"{anchor}\">p = {}</text>\n",
            fmt(sx(pi)),
            fmt(opts.height - opts.margin / 3.0),
            fmt(pi)
        ));
    }
    for a in [a_min, 0.0, a_max] {
        if a < a_min || a > a_max {
            continue;
        }
        out.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" font-size=\"11\" text-anchor=\"end\">a = {}</text>\n",
            fmt(opts.margin - 6.0),
            fmt(sy(a) + 4.0),
            fmt(a)
        ));
    }

    // one polyline per discriminant parabola, bottom to top
    for (k, curve) in diagram.curves.iter().enumerate() {
        let color = PALETTE[k % PALETTE.len()];
        let mut points = String::new();
        for s in 0..opts.samples {
            let t = s as f64 / (opts.samples - 1) as f64;
            let pi = pi_min + t * (pi_max - pi_min);
            let a = curve.c * pi * pi;
            points.push_str(&format!("{},{} ", fmt(sx(pi)), fmt(sy(a))));
        }
        out.push_str(&format!(
            "<polyline points=\"{}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\"/>\n",
            points.trim_end()
        ));
        out.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" font-size=\"12\" fill=\"{color}\">D{}</text>\n",
            fmt(sx(pi_max) + 4.0),
            fmt(sy(curve.c * pi_max * pi_max) + 4.0),
            curve.index
        ));
    }

    // chamber labels between consecutive curves
    let pi_label = pi_min + 0.8 * (pi_max - pi_min);
    for chamber in &diagram.chambers {
        let c_mid = 0.5 * (chamber.c_low + chamber.c_high);
        out.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" font-size=\"12\" fill=\"#555555\" \
             text-anchor=\"middle\">W{}</text>\n",
            fmt(sx(pi_label)),
            fmt(sy(c_mid * pi_label * pi_label)),
            chamber.label
        ));
    }

    out.push_str("</svg>\n");
    out
}
