//! SVG rendering of a chord arrangement, its zone cells and the tour.

use std::fmt::Write;

use num::ToPrimitive;

use crate::geom::Rat;
use crate::zone::{chord_name, Arrangement, EdgeKind, FaceKind, Transcript};

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 600.0;
const ARC_STEPS: usize = 24;

fn f(r: &Rat) -> f64 {
    r.to_f64().unwrap_or(0.0)
}

/// Viewport over the endpoints' bounding box with a 10% margin.
struct View {
    x0: f64,
    y0: f64,
    sx: f64,
    sy: f64,
}

impl View {
    fn new(arr: &Arrangement) -> Self {
        let xs: Vec<f64> = arr.vertices.iter().map(|v| f(&v.point.x)).collect();
        let ys: Vec<f64> = arr.vertices.iter().map(|v| f(&v.point.y)).collect();
        let (min_x, max_x) = bounds(&xs);
        let (min_y, max_y) = bounds(&ys);
        let (mx, my) = ((max_x - min_x) * 0.1, (max_y - min_y) * 0.1);
        let (x0, x1) = (min_x - mx, max_x + mx);
        let (y0, y1) = (min_y - my, max_y + my);
        View {
            x0,
            y0,
            sx: WIDTH / (x1 - x0).max(1e-9),
            sy: HEIGHT / (y1 - y0).max(1e-9),
        }
    }

    fn map(&self, x: f64, y: f64) -> (f64, f64) {
        ((x - self.x0) * self.sx, HEIGHT - (y - self.y0) * self.sy)
    }
}

fn bounds(v: &[f64]) -> (f64, f64) {
    v.iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| (lo.min(x), hi.max(x)))
}

fn point_list(pts: &[(f64, f64)]) -> String {
    pts.iter()
        .map(|(x, y)| format!("{x:.2},{y:.2}"))
        .collect::<Vec<_>>()
        .join(" ")
}

/// Renders the parabola, chords, shaded zone cells and the tour path.
pub fn render(arr: &Arrangement, tour: Option<&Transcript>) -> String {
    let view = View::new(arr);
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);

    for face in arr.faces.iter().filter(|c| c.kind == FaceKind::Zone) {
        let mut pts = Vec::new();
        for &h in &face.boundary {
            let e = &arr.half_edges[h];
            let a = &arr.vertices[e.origin].point;
            let b = &arr.vertices[arr.half_edges[e.twin].origin].point;
            if e.kind == EdgeKind::Arc {
                let (xa, xb) = (f(&a.x), f(&b.x));
                for k in 0..ARC_STEPS {
                    let x = xa + (xb - xa) * k as f64 / ARC_STEPS as f64;
                    pts.push(view.map(x, x * x));
                }
            } else {
                pts.push(view.map(f(&a.x), f(&a.y)));
            }
        }
        let _ = writeln!(
            out,
            r##"<polygon points="{}" fill="#cfe3f7" stroke="none"/>"##,
            point_list(&pts)
        );
    }

    let (lo, hi) = bounds(&arr.vertices.iter().map(|v| f(&v.point.x)).collect::<Vec<_>>());
    let margin = (hi - lo) * 0.1;
    let curve: Vec<(f64, f64)> = (0..=200)
        .map(|k| {
            let x = lo - margin + (hi - lo + 2.0 * margin) * k as f64 / 200.0;
            view.map(x, x * x)
        })
        .collect();
    let _ = writeln!(
        out,
        r#"<polyline points="{}" fill="none" stroke="black" stroke-width="1.5"/>"#,
        point_list(&curve)
    );

    for (i, c) in arr.chords.iter().enumerate() {
        let (ax, ay) = view.map(f(c.p()), f(c.p()) * f(c.p()));
        let (bx, by) = view.map(f(c.q()), f(c.q()) * f(c.q()));
        let _ = writeln!(
            out,
            r##"<line x1="{ax:.2}" y1="{ay:.2}" x2="{bx:.2}" y2="{by:.2}" stroke="#333" stroke-width="1.2"/>"##
        );
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}" font-size="12" font-family="sans-serif">{}</text>"#,
            ax - 10.0,
            ay + 14.0,
            chord_name(i)
        );
    }

    if let Some(t) = tour {
        // Each visit is drawn slightly offset toward the side it sees.
        let mut path = Vec::new();
        for v in &t.tour {
            let vs = &arr.chord_vertices[v.chord];
            let (a, b) = (&arr.vertices[vs[v.piece]].point, &arr.vertices[vs[v.piece + 1]].point);
            let (mut p, mut q) = (view.map(f(&a.x), f(&a.y)), view.map(f(&b.x), f(&b.y)));
            let shift = if v.rightward { 3.0 } else { -3.0 };
            p.1 += shift;
            q.1 += shift;
            if v.rightward {
                path.extend([p, q]);
            } else {
                path.extend([q, p]);
            }
        }
        let _ = writeln!(
            out,
            r##"<polyline points="{}" fill="none" stroke="#d0402b" stroke-width="1" stroke-dasharray="4 2"/>"##,
            point_list(&path)
        );
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::Chord;
    use crate::zone::{build_arrangement, zone_tour};

    #[test]
    fn renders_two_chords() {
        let arr = build_arrangement(&[Chord::ints(-2, 1), Chord::ints(-1, 2)]).unwrap();
        let t = zone_tour(&arr).unwrap();
        let svg = render(&arr, Some(&t));
        assert!(svg.starts_with("<svg"));
        assert_eq!(svg.matches("<polygon").count(), 3);
        assert_eq!(svg.matches("<line").count(), 2);
        assert_eq!(svg, render(&arr, Some(&t)));
    }
}
