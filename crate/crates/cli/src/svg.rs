//! Flat SVG drawings of polyhedral complexes in dimension 1 and 2.

use std::fmt::Write;

use adictrop::polyhedra::{PolyhedralComplex, Polyhedron};
use adictrop::{QVector, Rat};

const SIZE: f64 = 480.0;
const MARGIN: f64 = 24.0;

type Point = [f64; 2];

/// Line segments and labelled points in the plane, drawn into a square.
#[derive(Default)]
pub struct Scene {
    segments: Vec<(Point, Point, Option<String>)>,
    points: Vec<(Point, Option<String>)>,
    /// Start, direction, whether to extend backwards too, label.
    rays: Vec<(Point, Point, bool, Option<String>)>,
}

fn to_plane(v: &[Rat]) -> [f64; 2] {
    [v[0].to_f64_lossy(), v.get(1).map_or(0.0, Rat::to_f64_lossy)]
}

impl Scene {
    pub fn segment(&mut self, a: &QVector, b: &QVector, label: Option<String>) {
        self.segments.push((to_plane(a.coords()), to_plane(b.coords()), label));
    }

    /// A ray from `a` in direction `d`, or a full line when `both` is set.
    pub fn ray(&mut self, a: &QVector, d: &QVector, both: bool, label: Option<String>) {
        self.rays.push((to_plane(a.coords()), to_plane(d.coords()), both, label));
    }

    pub fn point(&mut self, a: &QVector, label: Option<String>) {
        self.points.push((to_plane(a.coords()), label));
    }

    pub fn polyhedron(&mut self, p: &Polyhedron, label: Option<String>) {
        let verts = p.vertices();
        let base = verts.first().cloned().unwrap_or_else(|| QVector::zero(p.ambient_dim()));
        match (p.dim(), p.is_bounded()) {
            (0, _) => self.point(&base, label),
            (1, true) => self.segment(&verts[0], &verts[1], label),
            (1, false) => {
                if let Some(l) = p.lineality().first() {
                    self.ray(&base, &l.to_qvector(), true, label);
                } else {
                    self.ray(&base, &p.rays()[0].to_qvector(), false, label);
                }
            }
            // higher cells are drawn through their edges
            _ => {}
        }
    }

    pub fn complex(&mut self, c: &PolyhedralComplex, label: impl Fn(usize) -> Option<String>) {
        for (i, p) in c.cells().iter().enumerate() {
            if p.dim() <= 1 {
                self.polyhedron(p, label(i));
            }
        }
    }

    fn bounds(&self) -> ([f64; 2], [f64; 2]) {
        let pts: Vec<[f64; 2]> = self
            .segments
            .iter()
            .flat_map(|(a, b, _)| [*a, *b])
            .chain(self.points.iter().map(|(a, _)| *a))
            .chain(self.rays.iter().map(|(a, _, _, _)| *a))
            .collect();
        let mut lo = [0.0f64; 2];
        let mut hi = [0.0f64; 2];
        for (k, p) in pts.iter().enumerate() {
            for i in 0..2 {
                if k == 0 {
                    lo[i] = p[i];
                    hi[i] = p[i];
                }
                lo[i] = lo[i].min(p[i]);
                hi[i] = hi[i].max(p[i]);
            }
        }
        let span = (hi[0] - lo[0]).max(hi[1] - lo[1]).max(1.0);
        let pad = span * 0.5;
        let mid = [(lo[0] + hi[0]) / 2.0, (lo[1] + hi[1]) / 2.0];
        let half = span / 2.0 + pad;
        ([mid[0] - half, mid[1] - half], [mid[0] + half, mid[1] + half])
    }

    pub fn render(&self, title: &str) -> String {
        let (lo, hi) = self.bounds();
        let scale = (SIZE - 2.0 * MARGIN) / (hi[0] - lo[0]);
        let map = |p: [f64; 2]| [MARGIN + (p[0] - lo[0]) * scale, SIZE - MARGIN - (p[1] - lo[1]) * scale];
        // parameter at which a ray leaves the drawing box
        let exit = |a: [f64; 2], d: [f64; 2]| {
            (0..2)
                .filter(|&i| d[i] != 0.0)
                .map(|i| if d[i] > 0.0 { (hi[i] - a[i]) / d[i] } else { (lo[i] - a[i]) / d[i] })
                .fold(f64::INFINITY, f64::min)
        };
        let mut s = String::new();
        writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#).unwrap();
        writeln!(s, "  <title>{}</title>", escape(title)).unwrap();
        writeln!(s, r#"  <rect width="{SIZE}" height="{SIZE}" fill="white"/>"#).unwrap();
        let line = |s: &mut String, a: [f64; 2], b: [f64; 2], label: &Option<String>| {
            let (p, q) = (map(a), map(b));
            writeln!(s, r#"  <line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="black" stroke-width="2"/>"#, p[0], p[1], q[0], q[1])
                .unwrap();
            if let Some(l) = label {
                text(s, [(p[0] + q[0]) / 2.0, (p[1] + q[1]) / 2.0], l);
            }
        };
        for (a, b, label) in &self.segments {
            line(&mut s, *a, *b, label);
        }
        for (a, d, both, label) in &self.rays {
            let t = exit(*a, *d);
            let far = [a[0] + t * d[0], a[1] + t * d[1]];
            let start = if *both {
                let back = exit(*a, [-d[0], -d[1]]);
                [a[0] - back * d[0], a[1] - back * d[1]]
            } else {
                *a
            };
            line(&mut s, start, far, label);
        }
        for (a, label) in &self.points {
            let p = map(*a);
            writeln!(s, r#"  <circle cx="{:.2}" cy="{:.2}" r="4" fill="black"/>"#, p[0], p[1]).unwrap();
            if let Some(l) = label {
                text(&mut s, [p[0] + 6.0, p[1] - 6.0], l);
            }
        }
        s.push_str("</svg>\n");
        s
    }
}

fn text(s: &mut String, at: [f64; 2], label: &str) {
    writeln!(s, r#"  <text x="{:.2}" y="{:.2}" font-family="monospace" font-size="11">{}</text>"#, at[0], at[1], escape(label)).unwrap();
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn draws_segments_rays_and_points() {
        let mut sc = Scene::default();
        sc.segment(&QVector::from_i64(&[0, 0]), &QVector::from_i64(&[1, 1]), Some("a<b".into()));
        sc.ray(&QVector::from_i64(&[0, 0]), &QVector::from_i64(&[-1, 0]), false, None);
        sc.point(&QVector::from_i64(&[1, 1]), None);
        let out = sc.render("test");
        assert_eq!(out.matches("<line").count(), 2);
        assert_eq!(out.matches("<circle").count(), 1);
        assert!(out.contains("a&lt;b"));
        // the ray reaches the left margin
        assert!(out.contains(r#"x2="24.00""#));
    }
}
