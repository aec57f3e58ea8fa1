//! SVG and PNG figures with fixed layers: hull, cylinders, visible,
//! envelope, oracle.

use std::fmt::Write;

use image::{ImageEncoder, Rgb, RgbImage};
use imageproc::drawing::{
    draw_filled_circle_mut, draw_hollow_polygon_mut, draw_line_segment_mut, draw_polygon_mut,
};
use imageproc::point::Point;
use vispart_core::geometry::{ConvexPolygon, Envelope, Vec2};

use crate::error::CliError;
use crate::format::g12;

pub const LAYERS: [&str; 5] = ["hull", "cylinders", "visible", "envelope", "oracle"];

#[derive(Clone, Debug, Default)]
pub struct Figure {
    pub hull: Option<ConvexPolygon>,
    pub cylinders: Vec<ConvexPolygon>,
    pub visible: Vec<ConvexPolygon>,
    /// Connected pieces of the envelope, in world coordinates.
    pub envelope: Vec<Vec<Vec2>>,
    pub oracle: Vec<Vec2>,
}

/// Envelope as polylines through the cell end points; a new piece starts
/// wherever consecutive cells do not touch.
pub fn envelope_polylines(env: &Envelope) -> Vec<Vec<Vec2>> {
    let d = env.direction();
    let mut out: Vec<Vec<Vec2>> = Vec::new();
    let mut last_hi: Option<f64> = None;
    for c in env.cells() {
        if last_hi != Some(c.lo) {
            out.push(Vec::new());
        }
        let piece = out.last_mut().expect("piece started");
        piece.push(d.point_at(c.lo, c.h_lo));
        piece.push(d.point_at(c.hi, c.h_hi));
        last_hi = Some(c.hi);
    }
    out
}

struct Frame {
    lo: Vec2,
    hi: Vec2,
}

impl Figure {
    fn frame(&self) -> Frame {
        let mut lo = Vec2::new(f64::INFINITY, f64::INFINITY);
        let mut hi = Vec2::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
        let mut add = |p: Vec2| {
            lo = Vec2::new(lo.x.min(p.x), lo.y.min(p.y));
            hi = Vec2::new(hi.x.max(p.x), hi.y.max(p.y));
        };
        for p in self
            .hull
            .iter()
            .chain(&self.cylinders)
            .flat_map(|p| p.vertices())
        {
            add(*p);
        }
        for p in self.envelope.iter().flatten().chain(&self.oracle) {
            add(*p);
        }
        if !lo.x.is_finite() {
            return Frame {
                lo: Vec2::ZERO,
                hi: Vec2::new(1.0, 1.0),
            };
        }
        let pad = 0.05 * (hi.x - lo.x).max(hi.y - lo.y).max(1e-12);
        Frame {
            lo: lo - Vec2::new(pad, pad),
            hi: hi + Vec2::new(pad, pad),
        }
    }

    /// Layers are drawn in world coordinates under one y-flipping
    /// transform, so coordinates in the file are the computed ones.
    pub fn to_svg(&self, width_px: f64) -> String {
        let f = self.frame();
        let (w, h) = (f.hi.x - f.lo.x, f.hi.y - f.lo.y);
        let s = width_px / w;
        let mut out = String::new();
        let _ = writeln!(
            out,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{}" height="{}" viewBox="0 0 {} {}">"#,
            g12(width_px),
            g12(h * s),
            g12(width_px),
            g12(h * s)
        );
        let _ = writeln!(
            out,
            r#"<g transform="matrix({} 0 0 {} {} {})" fill="none" stroke-width="1">"#,
            g12(s),
            g12(-s),
            g12(-f.lo.x * s),
            g12(f.hi.y * s)
        );
        let poly = |p: &ConvexPolygon| {
            p.vertices()
                .iter()
                .map(|v| format!("{},{}", g12(v.x), g12(v.y)))
                .collect::<Vec<_>>()
                .join(" ")
        };
        let _ = writeln!(out, r#"<g id="hull" stroke="black">"#);
        if let Some(p) = &self.hull {
            let _ = writeln!(
                out,
                r#"<polygon points="{}" vector-effect="non-scaling-stroke"/>"#,
                poly(p)
            );
        }
        let _ = writeln!(out, "</g>");
        let _ = writeln!(out, r##"<g id="cylinders" stroke="#9a9a9a">"##);
        for p in &self.cylinders {
            let _ = writeln!(
                out,
                r#"<polygon points="{}" vector-effect="non-scaling-stroke"/>"#,
                poly(p)
            );
        }
        let _ = writeln!(out, "</g>");
        let _ = writeln!(
            out,
            r##"<g id="visible" stroke="#c0392b" fill="#f5b7b1" fill-opacity="0.6">"##
        );
        for p in &self.visible {
            let _ = writeln!(
                out,
                r#"<polygon points="{}" vector-effect="non-scaling-stroke"/>"#,
                poly(p)
            );
        }
        let _ = writeln!(out, "</g>");
        let _ = writeln!(
            out,
            r##"<g id="envelope" stroke="#1f618d" stroke-width="2">"##
        );
        for piece in &self.envelope {
            let pts: Vec<String> = piece
                .iter()
                .map(|v| format!("{},{}", g12(v.x), g12(v.y)))
                .collect();
            let _ = writeln!(
                out,
                r#"<polyline points="{}" vector-effect="non-scaling-stroke"/>"#,
                pts.join(" ")
            );
        }
        let _ = writeln!(out, "</g>");
        let _ = writeln!(out, r##"<g id="oracle" fill="#117a65" stroke="none">"##);
        let r = g12(1.5 / s);
        for p in &self.oracle {
            let _ = writeln!(
                out,
                r#"<circle cx="{}" cy="{}" r="{r}"/>"#,
                g12(p.x),
                g12(p.y)
            );
        }
        let _ = writeln!(out, "</g>");
        let _ = writeln!(out, "</g>");
        let _ = writeln!(out, "</svg>");
        out
    }

    pub fn to_png(&self, width_px: u32) -> Result<Vec<u8>, CliError> {
        let f = self.frame();
        let s = width_px as f64 / (f.hi.x - f.lo.x);
        let height_px = (((f.hi.y - f.lo.y) * s).ceil() as u32).max(1);
        let mut img = RgbImage::from_pixel(width_px, height_px, Rgb([255, 255, 255]));
        let px = |v: Vec2| ((v.x - f.lo.x) * s, (f.hi.y - v.y) * s);
        let outline = |img: &mut RgbImage, p: &ConvexPolygon, c: Rgb<u8>| {
            let pts: Vec<Point<f32>> = p
                .vertices()
                .iter()
                .map(|&v| {
                    let (x, y) = px(v);
                    Point::new(x as f32, y as f32)
                })
                .collect();
            draw_hollow_polygon_mut(img, &pts, c);
        };
        for p in &self.visible {
            let mut pts: Vec<Point<i32>> = p
                .vertices()
                .iter()
                .map(|&v| {
                    let (x, y) = px(v);
                    Point::new(x.round() as i32, y.round() as i32)
                })
                .collect();
            pts.dedup();
            if pts.len() >= 3 && pts.first() != pts.last() {
                draw_polygon_mut(&mut img, &pts, Rgb([245, 183, 177]));
            }
        }
        for p in &self.cylinders {
            outline(&mut img, p, Rgb([154, 154, 154]));
        }
        for p in &self.visible {
            outline(&mut img, p, Rgb([192, 57, 43]));
        }
        if let Some(p) = &self.hull {
            outline(&mut img, p, Rgb([0, 0, 0]));
        }
        for piece in &self.envelope {
            for w in piece.windows(2) {
                let (a, b) = (px(w[0]), px(w[1]));
                draw_line_segment_mut(
                    &mut img,
                    (a.0 as f32, a.1 as f32),
                    (b.0 as f32, b.1 as f32),
                    Rgb([31, 97, 141]),
                );
            }
        }
        for &p in &self.oracle {
            let (x, y) = px(p);
            draw_filled_circle_mut(
                &mut img,
                (x.round() as i32, y.round() as i32),
                1,
                Rgb([17, 122, 101]),
            );
        }
        let mut bytes = Vec::new();
        image::codecs::png::PngEncoder::new(&mut bytes)
            .write_image(
                img.as_raw(),
                width_px,
                height_px,
                image::ExtendedColorType::Rgb8,
            )
            .map_err(|e| CliError::Render(e.to_string()))?;
        Ok(bytes)
    }
}
