use std::fmt::Write as _;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{MedianArc, Tessellation};
use crate::error::{Error, Result};
use crate::geometry::{Circline, CirclineShape, ExtPoint, GeneralizedDisk, OrientedArc};

/// Finite point as `[re, im]`, infinity as `null`.
type PointJson = Option<[f64; 2]>;

fn point_json(z: ExtPoint) -> PointJson {
    z.finite().map(|w| [w.re, w.im])
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ArcJson {
    /// 1-based disk indices.
    pub j: usize,
    pub k: usize,
    pub carrier: Circline,
    pub start: PointJson,
    pub end: PointJson,
    pub t0: f64,
    pub t1: f64,
    pub orient: i8,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundaryJson {
    pub j: usize,
    pub carrier: Circline,
    pub start: PointJson,
    pub end: PointJson,
    pub t0: f64,
    pub t1: f64,
    pub orient: i8,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TessellationJson {
    pub disks: Vec<GeneralizedDisk>,
    pub arcs: Vec<ArcJson>,
    pub boundary: Vec<BoundaryJson>,
    pub vertices: Vec<PointJson>,
}

impl TessellationJson {
    /// Rebuilds the tessellation from the stored disks.
    pub fn rebuild(&self) -> Result<Tessellation> {
        Tessellation::build(&self.disks)
    }
}

fn orient_sign(arc: &OrientedArc) -> i8 {
    if arc.orientation() > 0.0 {
        1
    } else {
        -1
    }
}

impl From<&Tessellation> for TessellationJson {
    fn from(t: &Tessellation) -> Self {
        let arcs = t
            .median_arcs()
            .iter()
            .map(|&MedianArc { j, k, arc }| {
                let (t0, t1) = arc.params();
                ArcJson {
                    j: j + 1,
                    k: k + 1,
                    carrier: *arc.carrier(),
                    start: point_json(arc.start()),
                    end: point_json(arc.end()),
                    t0,
                    t1,
                    orient: orient_sign(&arc),
                }
            })
            .collect();
        let boundary = t
            .boundary_arcs()
            .iter()
            .map(|b| {
                let (t0, t1) = b.arc.params();
                BoundaryJson {
                    j: b.j + 1,
                    carrier: *b.arc.carrier(),
                    start: point_json(b.arc.start()),
                    end: point_json(b.arc.end()),
                    t0,
                    t1,
                    orient: orient_sign(&b.arc),
                }
            })
            .collect();
        Self {
            disks: t.disks().to_vec(),
            arcs,
            boundary,
            vertices: t.vertices().iter().map(|&v| point_json(v)).collect(),
        }
    }
}

/// Deterministic pretty-printed JSON of the tessellation.
pub fn export_json(t: &Tessellation) -> Result<String> {
    serde_json::to_string_pretty(&TessellationJson::from(t)).map_err(|e| Error::Parse(e.to_string()))
}

/// Rectangle `[x0, x1] x [y0, y1]` of the plane shown in an SVG.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Viewport {
    pub x0: f64,
    pub y0: f64,
    pub x1: f64,
    pub y1: f64,
}

impl Viewport {
    pub fn new(x0: f64, y0: f64, x1: f64, y1: f64) -> Result<Self> {
        if !(x0 < x1 && y0 < y1 && [x0, y0, x1, y1].iter().all(|v| v.is_finite())) {
            return Err(Error::OutOfRange(format!("viewport [{x0}, {x1}] x [{y0}, {y1}]")));
        }
        Ok(Self { x0, y0, x1, y1 })
    }

    /// Box around the finite disk features and vertices, padded by 25%.
    pub fn fit(t: &Tessellation) -> Self {
        let mut pts: Vec<Complex64> = Vec::new();
        for d in t.disks() {
            match *d {
                GeneralizedDisk::Interior { center, radius } | GeneralizedDisk::Exterior { center, radius } => {
                    pts.push(center + Complex64::new(radius, radius));
                    pts.push(center - Complex64::new(radius, radius));
                }
                GeneralizedDisk::HalfPlane { anchor, .. } => pts.push(anchor),
            }
        }
        pts.extend(t.vertices().iter().filter_map(|v| v.finite()));
        let (mut x0, mut y0, mut x1, mut y1) = (f64::INFINITY, f64::INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY);
        for p in &pts {
            x0 = x0.min(p.re);
            x1 = x1.max(p.re);
            y0 = y0.min(p.im);
            y1 = y1.max(p.im);
        }
        let span = (x1 - x0).max(y1 - y0).max(2.0);
        let (cx, cy) = ((x0 + x1) / 2.0, (y0 + y1) / 2.0);
        let h = 0.625 * span;
        Self { x0: cx - h, y0: cy - h, x1: cx + h, y1: cy + h }
    }

    fn center(&self) -> Complex64 {
        Complex64::new((self.x0 + self.x1) / 2.0, (self.y0 + self.y1) / 2.0)
    }

    fn diagonal(&self) -> f64 {
        (self.x1 - self.x0).hypot(self.y1 - self.y0)
    }
}

/// Polyline subpaths of an arc, with line arcs truncated to a window around `view`.
fn arc_points(arc: &OrientedArc, view: &Viewport) -> Vec<Vec<Complex64>> {
    use std::f64::consts::{FRAC_PI_2, PI};
    match arc.carrier().shape() {
        CirclineShape::Circle { .. } => {
            let n = 256;
            vec![(0..=n).filter_map(|i| arc.eval(i as f64 / n as f64).finite()).collect()]
        }
        CirclineShape::Line { point, direction } => {
            let s_mid = ((view.center() - point) * direction.conj()).re;
            let reach = view.diagonal();
            let mut out = Vec::new();
            for piece in arc.split_at_infinity() {
                let (t0, t1) = piece.params();
                let shift = ((0.5 * (t0 + t1) + FRAC_PI_2) / PI).floor() * PI;
                let (t0, t1) = (t0 - shift, t1 - shift);
                let s = |t: f64| {
                    if t <= -FRAC_PI_2 + 1e-12 {
                        f64::NEG_INFINITY
                    } else if t >= FRAC_PI_2 - 1e-12 {
                        f64::INFINITY
                    } else {
                        t.tan()
                    }
                };
                let a = s(t0).max(s_mid - reach);
                let b = s(t1).min(s_mid + reach);
                if b <= a {
                    continue;
                }
                let seg = [point + a * direction, point + b * direction];
                out.push(if piece.orientation() > 0.0 { seg.to_vec() } else { vec![seg[1], seg[0]] });
            }
            out
        }
    }
}

fn path_data(paths: &[Vec<Complex64>], view: &Viewport, closed: bool) -> String {
    let mut d = String::new();
    for points in paths {
        for (i, p) in points.iter().enumerate() {
            let cmd = if i == 0 { 'M' } else { 'L' };
            let _ = write!(d, "{cmd}{:.6},{:.6} ", p.re, view.y0 + view.y1 - p.im);
        }
        if closed {
            d.push_str("Z ");
        }
    }
    d.trim_end().to_string()
}

/// SVG drawing with one `path` per boundary piece and per median arc.
pub fn export_svg(t: &Tessellation, view: Option<Viewport>) -> String {
    let view = view.unwrap_or_else(|| Viewport::fit(t));
    let w = view.x1 - view.x0;
    let h = view.y1 - view.y0;
    let stroke = 0.004 * w.max(h);
    let mut out = String::new();
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"{:.6} {:.6} {:.6} {:.6}\" width=\"600\" height=\"600\">",
        view.x0, view.y0, w, h
    );
    for b in t.boundary_arcs() {
        let pts = arc_points(&b.arc, &view);
        if pts.is_empty() {
            continue;
        }
        let _ = writeln!(
            out,
            "  <path class=\"boundary\" data-j=\"{}\" d=\"{}\" fill=\"none\" stroke=\"black\" stroke-width=\"{stroke:.6}\"/>",
            b.j + 1,
            path_data(&pts, &view, b.arc.is_full())
        );
    }
    for m in t.median_arcs() {
        let pts = arc_points(&m.arc, &view);
        if pts.is_empty() {
            continue;
        }
        let _ = writeln!(
            out,
            "  <path class=\"median\" data-j=\"{}\" data-k=\"{}\" d=\"{}\" fill=\"none\" stroke=\"crimson\" stroke-dasharray=\"{:.6}\" stroke-width=\"{stroke:.6}\"/>",
            m.j + 1,
            m.k + 1,
            path_data(&pts, &view, m.arc.is_full()),
            4.0 * stroke
        );
    }
    out.push_str("</svg>\n");
    out
}
