//! Flat SVG figures of the construction traces: layered curves, segments
//! and labelled points rendered into a computed viewport.

use quadric_axes::chasles::{build_frame, dual_focal_conics, ChaslesTrace, Tolerances};
use quadric_axes::rytz::RytzTrace;
use quadric_axes::ConjugateSystem;

use crate::CliError;

/// One drawable layer.
pub enum Layer {
    Curve {
        points: Vec<[f64; 2]>,
        stroke: &'static str,
        dashed: bool,
    },
    Segment {
        from: [f64; 2],
        to: [f64; 2],
        stroke: &'static str,
        dashed: bool,
    },
    Point {
        at: [f64; 2],
        label: String,
    },
    Note {
        at: [f64; 2],
        text: String,
    },
}

/// Figure description: layers plus viewport margins.
pub struct FigureSpec {
    pub layers: Vec<Layer>,
    pub size: f64,
    pub margin: f64,
}

impl FigureSpec {
    pub fn new() -> Self {
        FigureSpec {
            layers: Vec::new(),
            size: 640.0,
            margin: 40.0,
        }
    }

    fn bounds(&self) -> ([f64; 2], [f64; 2]) {
        let mut lo = [f64::INFINITY; 2];
        let mut hi = [f64::NEG_INFINITY; 2];
        let mut feed = |p: &[f64; 2]| {
            if p[0].is_finite() && p[1].is_finite() {
                for k in 0..2 {
                    lo[k] = lo[k].min(p[k]);
                    hi[k] = hi[k].max(p[k]);
                }
            }
        };
        for layer in &self.layers {
            match layer {
                Layer::Curve { points, .. } => points.iter().for_each(&mut feed),
                Layer::Segment { from, to, .. } => {
                    feed(from);
                    feed(to);
                }
                Layer::Point { at, .. } | Layer::Note { at, .. } => feed(at),
            }
        }
        if !lo[0].is_finite() {
            (lo, hi) = ([-1.0, -1.0], [1.0, 1.0]);
        }
        (lo, hi)
    }

    /// Renders well-formed SVG 1.1. Coordinates are clipped to the
    /// viewport so every emitted number is finite.
    pub fn render(&self) -> String {
        let ([x0, y0], [x1, y1]) = self.bounds();
        let span = (x1 - x0).max(y1 - y0).max(1e-9);
        let scale = (self.size - 2.0 * self.margin) / span;
        let cx = (x0 + x1) / 2.0;
        let cy = (y0 + y1) / 2.0;
        let half = self.size / 2.0;
        let map = |p: [f64; 2]| -> (f64, f64) {
            let sx = (p[0] - cx) * scale + half;
            let sy = half - (p[1] - cy) * scale;
            (sx.clamp(0.0, self.size), sy.clamp(0.0, self.size))
        };
        let mut out = String::new();
        out.push_str(&format!(
            "<svg version=\"1.1\" xmlns=\"http://www.w3.org/2000/svg\" \
             width=\"{s}\" height=\"{s}\" viewBox=\"0 0 {s} {s}\">\n",
            s = self.size
        ));
        out.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
        for layer in &self.layers {
            match layer {
                Layer::Curve {
                    points,
                    stroke,
                    dashed,
                } => {
                    let mut d = String::new();
                    let mut pen_up = true;
                    for p in points {
                        if !(p[0].is_finite() && p[1].is_finite()) {
                            pen_up = true;
                            continue;
                        }
                        let (x, y) = map(*p);
                        if pen_up {
                            d.push_str(&format!("M {x:.3} {y:.3} "));
                            pen_up = false;
                        } else {
                            d.push_str(&format!("L {x:.3} {y:.3} "));
                        }
                    }
                    let dash = if *dashed {
                        " stroke-dasharray=\"6 4\""
                    } else {
                        ""
                    };
                    out.push_str(&format!(
                        "<path d=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\"{}/>\n",
                        d.trim_end(),
                        stroke,
                        dash
                    ));
                }
                Layer::Segment {
                    from,
                    to,
                    stroke,
                    dashed,
                } => {
                    if ![from, to]
                        .iter()
                        .all(|p| p[0].is_finite() && p[1].is_finite())
                    {
                        continue;
                    }
                    let (x1s, y1s) = map(*from);
                    let (x2s, y2s) = map(*to);
                    let dash = if *dashed {
                        " stroke-dasharray=\"6 4\""
                    } else {
                        ""
                    };
                    out.push_str(&format!(
                        "<line x1=\"{x1s:.3}\" y1=\"{y1s:.3}\" x2=\"{x2s:.3}\" y2=\"{y2s:.3}\" \
                         stroke=\"{stroke}\" stroke-width=\"1.2\"{dash}/>\n"
                    ));
                }
                Layer::Point { at, label } => {
                    if !(at[0].is_finite() && at[1].is_finite()) {
                        continue;
                    }
                    let (x, y) = map(*at);
                    out.push_str(&format!(
                        "<circle cx=\"{x:.3}\" cy=\"{y:.3}\" r=\"3\" fill=\"black\"/>\n"
                    ));
                    out.push_str(&format!(
                        "<text x=\"{:.3}\" y=\"{:.3}\" font-size=\"14\" font-family=\"serif\">{}</text>\n",
                        x + 6.0,
                        y - 6.0,
                        xml_escape(label)
                    ));
                }
                Layer::Note { at, text } => {
                    if !(at[0].is_finite() && at[1].is_finite()) {
                        continue;
                    }
                    let (x, y) = map(*at);
                    out.push_str(&format!(
                        "<text x=\"{x:.3}\" y=\"{y:.3}\" font-size=\"12\" font-family=\"serif\" fill=\"#444\">{}</text>\n",
                        xml_escape(text)
                    ));
                }
            }
        }
        out.push_str("</svg>\n");
        out
    }
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

fn ellipse_curve(a: f64, b: f64, n: usize) -> Vec<[f64; 2]> {
    (0..=n)
        .map(|i| {
            let t = std::f64::consts::TAU * i as f64 / n as f64;
            [a * t.cos(), b * t.sin()]
        })
        .collect()
}

fn hyperbola_curves(a_sq: f64, b_sq: f64, extent: f64, n: usize) -> Vec<Vec<[f64; 2]>> {
    // x²/a² − y²/b² = 1, both branches sampled in the parameter u
    let a = a_sq.sqrt();
    let b = b_sq.sqrt();
    let umax = ((extent / a) + ((extent / a) * (extent / a) + 1.0).sqrt()).ln();
    let mut branches = Vec::new();
    for s in [1.0f64, -1.0] {
        let pts = (0..=n)
            .map(|i| {
                let u = -umax + 2.0 * umax * i as f64 / n as f64;
                [s * a * u.cosh(), b * u.sinh()]
            })
            .collect();
        branches.push(pts);
    }
    branches
}

/// Figure of the planar axis construction from a conjugate pair.
pub fn rytz_figure(tr: &RytzTrace) -> FigureSpec {
    let mut spec = FigureSpec::new();
    let (a, b) = tr.axis_lengths;
    let [d1, d2] = tr.axis_dirs;
    // the ellipse itself, in world coordinates
    let ellipse: Vec<[f64; 2]> = ellipse_curve(a, b, 256)
        .into_iter()
        .map(|[u, v]| [u * d1[0] + v * d2[0], u * d1[1] + v * d2[1]])
        .collect();
    spec.layers.push(Layer::Curve {
        points: ellipse,
        stroke: "#888",
        dashed: false,
    });
    let o = [0.0, 0.0];
    spec.layers.push(Layer::Segment {
        from: o,
        to: tr.p,
        stroke: "black",
        dashed: false,
    });
    spec.layers.push(Layer::Segment {
        from: o,
        to: tr.q,
        stroke: "black",
        dashed: false,
    });
    spec.layers.push(Layer::Segment {
        from: tr.m,
        to: tr.l,
        stroke: "#1f77b4",
        dashed: false,
    });
    spec.layers.push(Layer::Segment {
        from: o,
        to: tr.m,
        stroke: "#1f77b4",
        dashed: true,
    });
    spec.layers.push(Layer::Segment {
        from: o,
        to: tr.l,
        stroke: "#1f77b4",
        dashed: true,
    });
    // axis lines through O
    let ext = 1.15 * a;
    for (d, c) in [(d1, "#d62728"), (d2, "#2ca02c")] {
        spec.layers.push(Layer::Segment {
            from: [-ext * d[0], -ext * d[1]],
            to: [ext * d[0], ext * d[1]],
            stroke: c,
            dashed: false,
        });
    }
    spec.layers.push(Layer::Segment {
        from: tr.p,
        to: tr.t,
        stroke: "#999",
        dashed: true,
    });
    spec.layers.push(Layer::Segment {
        from: tr.p,
        to: tr.p_prime,
        stroke: "#999",
        dashed: true,
    });
    spec.layers.push(Layer::Point {
        at: o,
        label: "O".into(),
    });
    spec.layers.push(Layer::Point {
        at: tr.p,
        label: "P".into(),
    });
    spec.layers.push(Layer::Point {
        at: tr.q,
        label: "Q".into(),
    });
    spec.layers.push(Layer::Point {
        at: tr.m,
        label: "M".into(),
    });
    spec.layers.push(Layer::Point {
        at: tr.l,
        label: "L".into(),
    });
    spec.layers.push(Layer::Point {
        at: tr.t,
        label: "T".into(),
    });
    spec.layers.push(Layer::Point {
        at: tr.p_prime,
        label: "P\u{2032}".into(),
    });
    spec
}

/// Frame data shared by the spatial figures.
fn spatial_trace(sys: &ConjugateSystem, tol: &Tolerances) -> Result<ChaslesTrace, CliError> {
    let (_, trace) =
        quadric_axes::chasles::chasles_axes_with(sys, tol).map_err(CliError::geometry)?;
    Ok(trace)
}

/// The two dual focal conics in their shared frame: the common axis is
/// horizontal, the ellipse plane and hyperbola plane are overlaid.
pub fn focal_figure(sys: &ConjugateSystem, tol: &Tolerances) -> Result<FigureSpec, CliError> {
    let frame = build_frame(sys, 0, tol)
        .or_else(|_| build_frame(sys, 1, tol))
        .or_else(|_| build_frame(sys, 2, tol))
        .map_err(CliError::geometry)?;
    let conics = dual_focal_conics(&frame).map_err(CliError::geometry)?;
    let mut spec = FigureSpec::new();
    let (rho2, rho3) = (frame.rho2, frame.rho3);
    let s = (rho3 * rho3 - rho2 * rho2).sqrt();
    spec.layers.push(Layer::Curve {
        points: ellipse_curve(rho3, s, 256),
        stroke: "#1f77b4",
        dashed: false,
    });
    for branch in hyperbola_curves(rho2 * rho2, s * s, 1.6 * rho3, 128) {
        spec.layers.push(Layer::Curve {
            points: branch,
            stroke: "#d62728",
            dashed: false,
        });
    }
    // common axis line and the shared focus points (±s on it are the
    // ellipse foci; the hyperbola's foci sit at ±ρ₃ = the ellipse vertices)
    spec.layers.push(Layer::Segment {
        from: [-1.3 * rho3, 0.0],
        to: [1.3 * rho3, 0.0],
        stroke: "#aaa",
        dashed: true,
    });
    spec.layers.push(Layer::Point {
        at: [0.0, 0.0],
        label: "P".into(),
    });
    spec.layers.push(Layer::Point {
        at: [rho3, 0.0],
        label: "A".into(),
    });
    spec.layers.push(Layer::Point {
        at: [-rho3, 0.0],
        label: "B".into(),
    });
    spec.layers.push(Layer::Note {
        at: [0.0, 1.05 * s],
        text: format!(
            "ellipse ({:.4}, {:.4})",
            conics.ellipse.signed_sq[0], conics.ellipse.signed_sq[1]
        ),
    });
    spec.layers.push(Layer::Note {
        at: [0.0, -1.15 * s],
        text: format!(
            "hyperbola ({:.4}, {:.4})",
            conics.hyperbola.signed_sq[0], conics.hyperbola.signed_sq[1]
        ),
    });
    Ok(spec)
}

/// The hyperbola-plane picture: the focal hyperbola, the central
/// projection of the focal ellipse, the fixed axis line m and the
/// synthetic image points.
pub fn projection_figure(sys: &ConjugateSystem, tol: &Tolerances) -> Result<FigureSpec, CliError> {
    let trace = spatial_trace(sys, tol)?;
    let frame = &trace.frame;
    let projected = trace.projected.as_ref().ok_or_else(|| {
        CliError::geometry_msg("projection figure requires the generic pipeline branch")
    })?;
    let (a, b) = (frame.param_a(), frame.param_b());
    let mut spec = FigureSpec::new();
    for branch in hyperbola_curves(a, b, 2.2 * (a + b).sqrt(), 128) {
        spec.layers.push(Layer::Curve {
            points: branch,
            stroke: "#d62728",
            dashed: false,
        });
    }
    // E' sampled by projecting the focal ellipse point-wise
    let (ea, eb) = ((a + b).sqrt(), b.sqrt());
    let [xp, yp, zp] = frame.apex;
    let mut curve: Vec<[f64; 2]> = Vec::new();
    for i in 0..=256 {
        let t = std::f64::consts::TAU * i as f64 / 256.0;
        let (xs, ys) = (ea * t.cos(), eb * t.sin());
        let dy = yp - ys;
        if dy.abs() < 1e-9 * yp.abs().max(1.0) {
            curve.push([f64::NAN, f64::NAN]);
            continue;
        }
        let tt = yp / dy;
        curve.push([xp + tt * (xs - xp), zp - tt * zp]);
    }
    spec.layers.push(Layer::Curve {
        points: curve,
        stroke: "#1f77b4",
        dashed: false,
    });
    // fixed line m = the common major-axis line
    spec.layers.push(Layer::Segment {
        from: [-1.4 * ea, 0.0],
        to: [1.4 * ea, 0.0],
        stroke: "#555",
        dashed: true,
    });
    spec.layers.push(Layer::Point {
        at: [ea, 0.0],
        label: "A".into(),
    });
    spec.layers.push(Layer::Point {
        at: [-ea, 0.0],
        label: "B".into(),
    });
    for (pt, label) in [
        (projected.c_bar, "C\u{0304}"),
        (projected.d_bar, "D\u{0304}"),
        (projected.e_bar, "E\u{0304}"),
        (projected.f_bar, "F\u{0304}"),
    ] {
        if let Some(at) = pt {
            spec.layers.push(Layer::Point {
                at,
                label: label.into(),
            });
        }
    }
    spec.layers.push(Layer::Note {
        at: [0.0, -1.3 * eb],
        text: format!("image conic: {:?}, m is pointwise fixed", projected.kind),
    });
    Ok(spec)
}

/// The intersection picture: hyperbola, image conic, the four common
/// points generating the edges, and the recovered axis data.
pub fn axes_figure(sys: &ConjugateSystem, tol: &Tolerances) -> Result<FigureSpec, CliError> {
    let trace = spatial_trace(sys, tol)?;
    let mut spec = projection_figure(sys, tol)?;
    let frame = &trace.frame;
    let edges = trace
        .edges
        .as_ref()
        .ok_or_else(|| CliError::geometry_msg("no edges available for the axes figure"))?;
    // intersection points in the hyperbola plane: project the generating
    // ellipse points from the apex
    let [xp, yp, zp] = frame.apex;
    for (i, [xs, ys]) in edges.ellipse_points.iter().enumerate() {
        let dy = yp - ys;
        if dy.abs() < 1e-12 {
            continue;
        }
        let tt = yp / dy;
        let pt = [xp + tt * (xs - xp), zp - tt * zp];
        spec.layers.push(Layer::Point {
            at: pt,
            label: format!("G{}", i + 1),
        });
    }
    let lens = &trace.axis_lengths;
    let mut sorted = lens.clone();
    sorted.sort_by(|a, b| b.partial_cmp(a).unwrap());
    spec.layers.push(Layer::Note {
        at: [0.0, 0.0],
        text: format!(
            "semi-axes: {:.6}, {:.6}, {:.6}",
            sorted[0], sorted[1], sorted[2]
        ),
    });
    Ok(spec)
}
