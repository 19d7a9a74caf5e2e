//! Hand-written SVG 1.1 rendering of the region.

use std::fmt::Write;

use semicubic::arith::{rat, to_f64, ExactRational};
use semicubic::region::reference::{ALPHA1, ALPHA2, BETA1, BETA2};
use semicubic::{BoundarySample, Curve, Status};

use crate::output::g12;

pub struct PlotSpec {
    pub width: f64,
    pub height: f64,
    /// Data window `[0, h_max] x [0, k_max]`.
    pub h_max: f64,
    pub k_max: f64,
    /// Inside sampling grid per axis; 0 disables shading.
    pub shade: usize,
    pub extrema: Option<((f64, f64), (f64, f64))>,
    pub segment: Option<f64>,
}

const MARGIN: f64 = 60.0;

struct Frame {
    x0: f64,
    y0: f64,
    w: f64,
    h: f64,
    h_max: f64,
    k_max: f64,
}

impl Frame {
    fn x(&self, h: f64) -> f64 {
        self.x0 + h / self.h_max * self.w
    }

    fn y(&self, k: f64) -> f64 {
        self.y0 + (1.0 - k / self.k_max) * self.h
    }
}

fn centre(i: usize, n: usize, max: f64) -> ExactRational {
    let scaled = (max * 1e6).round() as i64;
    rat((2 * i as i64 + 1) * scaled, 2 * n as i64 * 1_000_000)
}

fn f(v: f64) -> String {
    format!("{v:.3}")
}

pub fn render(curve: &Curve, trace: &[BoundarySample], spec: &PlotSpec) -> String {
    let fr = Frame {
        x0: MARGIN,
        y0: MARGIN / 2.0,
        w: spec.width - 1.5 * MARGIN,
        h: spec.height - 1.5 * MARGIN,
        h_max: spec.h_max,
        k_max: spec.k_max,
    };
    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        "<!-- Coordinate transform: a point (h, k) is drawn at\n     px = {x0} + h / {hm} * {w}\n     py = {y0} + (1 - k / {km}) * {ht}\n     so the origin is the lower-left corner of the axes box and k grows upwards. -->",
        x0 = f(fr.x0),
        hm = g12(fr.h_max),
        w = f(fr.w),
        y0 = f(fr.y0),
        km = g12(fr.k_max),
        ht = f(fr.h),
    );
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{}" height="{}" viewBox="0 0 {} {}">"#,
        f(spec.width),
        f(spec.height),
        f(spec.width),
        f(spec.height)
    );
    let _ = writeln!(s, r#"<rect x="0" y="0" width="{}" height="{}" fill="white"/>"#, f(spec.width), f(spec.height));

    if spec.shade > 0 {
        let _ = writeln!(s, r##"<g id="inside" fill="#c9dcf0" stroke="none">"##);
        let n = spec.shade;
        for i in 0..n {
            for j in 0..n {
                // Cell centres as short decimals keep the exact evaluation cheap.
                let (hq, kq) = (centre(i, n, fr.h_max), centre(j, n, fr.k_max));
                let (h, k) = (to_f64(&hq), to_f64(&kq));
                let inside = curve.classify(&hq, &kq).is_ok_and(|v| v.status == Status::Inside);
                if inside {
                    let _ = writeln!(s, r#"<circle cx="{}" cy="{}" r="1.6"/>"#, f(fr.x(h)), f(fr.y(k)));
                }
            }
        }
        let _ = writeln!(s, "</g>");
    }

    // Axes, ticks and the h = 14/100 gridline.
    let _ = writeln!(s, r#"<g id="axes" stroke="black" stroke-width="1" fill="none">"#);
    let _ = writeln!(s, r#"<line x1="{}" y1="{}" x2="{}" y2="{}"/>"#, f(fr.x(0.0)), f(fr.y(0.0)), f(fr.x(fr.h_max)), f(fr.y(0.0)));
    let _ = writeln!(s, r#"<line x1="{}" y1="{}" x2="{}" y2="{}"/>"#, f(fr.x(0.0)), f(fr.y(0.0)), f(fr.x(0.0)), f(fr.y(fr.k_max)));
    let _ = writeln!(s, "</g>");
    let _ = writeln!(
        s,
        r#"<line id="h-bound" x1="{x}" y1="{}" x2="{x}" y2="{}" stroke="gray" stroke-dasharray="4 3"/>"#,
        f(fr.y(0.0)),
        f(fr.y(fr.k_max)),
        x = f(fr.x(0.14))
    );
    let _ = writeln!(s, r#"<g font-family="sans-serif" font-size="11" fill="black">"#);
    for i in 0..=5 {
        let h = fr.h_max * i as f64 / 5.0;
        let k = fr.k_max * i as f64 / 5.0;
        let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#, f(fr.x(h)), f(fr.y(0.0) + 16.0), g12(h));
        let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="end">{}</text>"#, f(fr.x(0.0) - 6.0), f(fr.y(k) + 4.0), g12(k));
    }
    let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="middle">h</text>"#, f(fr.x(fr.h_max / 2.0)), f(spec.height - 8.0));
    let _ = writeln!(s, r#"<text x="14" y="{}" text-anchor="middle">k</text>"#, f(fr.y(fr.k_max / 2.0)));
    let _ = writeln!(s, "</g>");

    // The boundary loop, closed through the origin.
    let mut path = format!("M {} {}", f(fr.x(0.0)), f(fr.y(0.0)));
    for p in trace {
        let _ = write!(path, " L {} {}", f(fr.x(p.h_mid())), f(fr.y(p.k_mid())));
    }
    path.push_str(" Z");
    let _ = writeln!(s, r##"<path id="boundary" d="{path}" fill="none" stroke="#1f4e9a" stroke-width="1.5"/>"##);

    if let Some(((hm_h, hm_k), (km_h, km_k))) = spec.extrema {
        let _ = writeln!(s, r#"<g id="extrema" font-family="sans-serif" font-size="11">"#);
        let _ = writeln!(s, r##"<circle id="h-max" cx="{}" cy="{}" r="3.5" fill="#c0392b"/>"##, f(fr.x(hm_h)), f(fr.y(hm_k)));
        let _ = writeln!(s, r##"<text x="{}" y="{}" fill="#c0392b">h_M = {}</text>"##, f(fr.x(hm_h) + 6.0), f(fr.y(hm_k) + 4.0), g12(hm_h));
        let _ = writeln!(s, r##"<circle id="k-max" cx="{}" cy="{}" r="3.5" fill="#27ae60"/>"##, f(fr.x(km_h)), f(fr.y(km_k)));
        let _ = writeln!(s, r##"<text x="{}" y="{}" fill="#27ae60">k_M = {}</text>"##, f(fr.x(km_h) + 6.0), f(fr.y(km_k) - 6.0), g12(km_k));
        let _ = writeln!(s, "</g>");
    }

    if let Some(h) = spec.segment {
        let _ = writeln!(s, r#"<g id="segment" font-family="sans-serif" font-size="10">"#);
        let x = fr.x(h);
        let _ = writeln!(s, r#"<line x1="{x}" y1="{}" x2="{x}" y2="{}" stroke="black" stroke-width="0.8"/>"#, f(fr.y(0.0)), f(fr.y(ALPHA2)), x = f(x));
        let ticks = [("beta1", BETA1, "#1f4e9a"), ("alpha1", ALPHA1, "#8e44ad"), ("beta2", BETA2, "#1f4e9a"), ("alpha2", ALPHA2, "#8e44ad")];
        for (i, (name, k, colour)) in ticks.iter().enumerate() {
            let y = fr.y(*k);
            let _ = writeln!(
                s,
                r#"<line class="tick" data-name="{name}" data-k="{}" x1="{}" y1="{y}" x2="{}" y2="{y}" stroke="{colour}" stroke-width="1.5"/>"#,
                g12(*k),
                f(x - 5.0),
                f(x + 5.0),
                y = f(y)
            );
            // Labels alternate sides: beta1 and alpha1 are nearly coincident.
            let (lx, anchor) = if i % 2 == 0 { (x - 8.0, "end") } else { (x + 8.0, "start") };
            let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="{anchor}" fill="{colour}">{name}</text>"#, f(lx), f(y + 3.5));
        }
        let _ = writeln!(s, "</g>");
    }
    s.push_str("</svg>\n");
    s
}
