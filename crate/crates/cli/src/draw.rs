//! Static SVG and DOT renderings. Element order is fixed by the inputs, so
//! equal reports draw to identical bytes.

use std::fmt::Write as _;

use clab_core::junior::project_p12;
use clab_core::{Lattice2, Rat, RatVec2, RatVec3};
use num_traits::ToPrimitive;

const SIZE: f64 = 400.0;
const MARGIN: f64 = 40.0;
const DELTA_FILL: &str = "#dce6f2";

pub enum Drawing {
    /// A fan in `N2`, drawn in ambient coordinates over the unit square.
    Fan { title: String, lattice: Lattice2, rays: Vec<RatVec2> },
    /// A triangulation of the junior simplex, drawn through its projection to the first two coordinates.
    Triangulation { title: String, points: Vec<RatVec3>, triangles: Vec<[usize; 3]>, highlight: Vec<usize> },
    Quiver { title: String, arrows: Vec<(usize, usize)> },
}

fn f(x: &Rat) -> f64 {
    x.to_f64().unwrap_or(0.0)
}

/// Screen coordinates of an ambient point, `y` pointing up.
fn screen(x: f64, y: f64) -> (f64, f64) {
    (MARGIN + SIZE * x, MARGIN + SIZE * (1.0 - y))
}

fn header(out: &mut String, title: &str) {
    let full = SIZE + 2.0 * MARGIN;
    let _ = writeln!(
        out,
        r##"<svg xmlns="http://www.w3.org/2000/svg" width="{full}" height="{full}" viewBox="0 0 {full} {full}" font-family="monospace" font-size="11">"##
    );
    let _ = writeln!(out, "<title>{}</title>", escape(title));
    let _ = writeln!(out, r##"<rect width="{full}" height="{full}" fill="white"/>"##);
}

fn delta_prime(out: &mut String) {
    let (x0, y0) = screen(0.0, 0.0);
    let (x1, y1) = screen(1.0, 0.0);
    let (x2, y2) = screen(0.0, 1.0);
    let _ = writeln!(out, r##"<polygon points="{x0:.2},{y0:.2} {x1:.2},{y1:.2} {x2:.2},{y2:.2}" fill="{DELTA_FILL}" stroke="none"/>"##);
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

pub fn svg(drawing: &Drawing) -> String {
    let mut out = String::new();
    match drawing {
        Drawing::Fan { title, lattice, rays } => {
            header(&mut out, title);
            delta_prime(&mut out);
            let (sx, sy) = screen(0.0, 1.0);
            let _ = writeln!(out, r##"<rect x="{sx:.2}" y="{sy:.2}" width="{SIZE}" height="{SIZE}" fill="none" stroke="#999"/>"##);
            for p in lattice.points_in_box(&RatVec2::zero(), &RatVec2::from_ints([1, 1])) {
                let (x, y) = screen(f(&p.0[0]), f(&p.0[1]));
                let _ = writeln!(out, r##"<circle cx="{x:.2}" cy="{y:.2}" r="2" fill="#777"/>"##);
            }
            let (ox, oy) = screen(0.0, 0.0);
            for v in rays {
                let (a, b) = (f(&v.0[0]), f(&v.0[1]));
                let reach = 1.0 / a.max(b);
                let (ex, ey) = screen(a * reach, b * reach);
                let _ = writeln!(out, r##"<line x1="{ox:.2}" y1="{oy:.2}" x2="{ex:.2}" y2="{ey:.2}" stroke="#1f4e8c" stroke-width="1.5"/>"##);
                let (x, y) = screen(a, b);
                let _ = writeln!(out, r##"<circle cx="{x:.2}" cy="{y:.2}" r="4" fill="#c0392b"/>"##);
                let _ = writeln!(out, r##"<text x="{:.2}" y="{:.2}">{}</text>"##, x + 6.0, y - 6.0, escape(&v.to_string()));
            }
        }
        Drawing::Triangulation { title, points, triangles, highlight } => {
            header(&mut out, title);
            delta_prime(&mut out);
            let flat: Vec<(f64, f64)> = points
                .iter()
                .map(|p| {
                    let q = project_p12(p);
                    screen(f(&q.0[0]), f(&q.0[1]))
                })
                .collect();
            for t in triangles {
                let corners: Vec<String> = t.iter().map(|&i| format!("{:.2},{:.2}", flat[i].0, flat[i].1)).collect();
                let _ = writeln!(out, r##"<polygon points="{}" fill="none" stroke="#1f4e8c"/>"##, corners.join(" "));
            }
            for (i, (x, y)) in flat.iter().enumerate() {
                let fill = if highlight.contains(&i) { "#c0392b" } else { "#333" };
                let _ = writeln!(out, r##"<circle cx="{x:.2}" cy="{y:.2}" r="3" fill="{fill}"/>"##);
            }
        }
        Drawing::Quiver { title, arrows } => {
            header(&mut out, title);
            let n = arrows.iter().map(|&(t, h)| t.max(h) + 1).max().unwrap_or(1);
            let at = |v: usize| {
                let angle = std::f64::consts::TAU * v as f64 / n as f64;
                screen(0.5 + 0.4 * angle.cos(), 0.5 + 0.4 * angle.sin())
            };
            for (k, &(t, h)) in arrows.iter().enumerate() {
                let ((x1, y1), (x2, y2)) = (at(t), at(h));
                let colour = if k % 2 == 0 { "#1f4e8c" } else { "#c0392b" };
                if t == h {
                    let r = if k % 2 == 0 { 10.0 } else { 16.0 };
                    let _ = writeln!(out, r##"<circle cx="{x1:.2}" cy="{:.2}" r="{r}" fill="none" stroke="{colour}"/>"##, y1 - r);
                } else {
                    let _ = writeln!(out, r##"<line x1="{x1:.2}" y1="{y1:.2}" x2="{x2:.2}" y2="{y2:.2}" stroke="{colour}"/>"##);
                }
            }
            for v in 0..n {
                let (x, y) = at(v);
                let _ = writeln!(out, r##"<circle cx="{x:.2}" cy="{y:.2}" r="9" fill="white" stroke="#333"/>"##);
                let _ = writeln!(out, r##"<text x="{:.2}" y="{:.2}" text-anchor="middle">{v}</text>"##, x, y + 4.0);
            }
        }
    }
    out.push_str("</svg>\n");
    out
}

pub fn dot(drawing: &Drawing) -> String {
    let mut out = String::new();
    match drawing {
        Drawing::Fan { title, rays, .. } => {
            let _ = writeln!(out, "graph fan {{\n  label={:?};\n  node [shape=box];", title);
            for (i, v) in rays.iter().enumerate() {
                let a = v.sum() - Rat::from_integer(1.into());
                let _ = writeln!(out, "  v{i} [label=\"{v}\\na = {a}\"];");
            }
            for i in 1..rays.len() {
                let _ = writeln!(out, "  v{} -- v{i};", i - 1);
            }
        }
        Drawing::Triangulation { title, points, triangles, highlight } => {
            let _ = writeln!(out, "graph triangulation {{\n  label={:?};", title);
            let mut used: Vec<usize> = triangles.iter().flatten().copied().collect();
            used.sort_unstable();
            used.dedup();
            for i in used {
                let style = if highlight.contains(&i) { ", color=red" } else { "" };
                let q = project_p12(&points[i]);
                let pos = format!("{:.3},{:.3}!", f(&q.0[0]) * 10.0, f(&q.0[1]) * 10.0);
                let _ = writeln!(out, "  p{i} [label=\"{}\", pos=\"{pos}\"{style}];", points[i]);
            }
            let mut edges: Vec<(usize, usize)> =
                triangles.iter().flat_map(|t| [(t[0], t[1]), (t[0], t[2]), (t[1], t[2])]).collect();
            edges.sort_unstable();
            edges.dedup();
            for (a, b) in edges {
                let _ = writeln!(out, "  p{a} -- p{b};");
            }
        }
        Drawing::Quiver { title, arrows } => {
            let _ = writeln!(out, "digraph mckay {{\n  label={:?};", title);
            for (k, (t, h)) in arrows.iter().enumerate() {
                let var = if k % 2 == 0 { "x" } else { "y" };
                let _ = writeln!(out, "  {t} -> {h} [label=\"{var}\"];");
            }
        }
    }
    out.push_str("}\n");
    out
}
