//! SVG drawings of solution documents.
//!
//! Bins are stacked top to bottom, each scaled so that its longer side spans
//! 1000 units. Items are white labeled rectangles, waste is shaded and plate
//! borders show the cuts. Bin coordinates grow upwards, so y is flipped.

use std::fmt::Write;

use crate::document::{CutNode, NodeKind, SolutionDocument};

const CANVAS: f64 = 1000.0;
const GAP: f64 = 40.0;

struct Frame {
    scale: f64,
    top: f64,
    height: i64,
}

impl Frame {
    /// SVG box of a bin rectangle.
    fn map(&self, n: &CutNode) -> (f64, f64, f64, f64) {
        let x = n.x as f64 * self.scale;
        let y = self.top + (self.height - n.y - n.h) as f64 * self.scale;
        (x, y, n.w as f64 * self.scale, n.h as f64 * self.scale)
    }
}

fn draw(out: &mut String, f: &Frame, n: &CutNode) {
    let (x, y, w, h) = f.map(n);
    match n.kind {
        NodeKind::Waste => {
            let _ = writeln!(
                out,
                r##"    <rect class="waste" x="{x:.2}" y="{y:.2}" width="{w:.2}" height="{h:.2}" fill="#c8c8c8" stroke="none"/>"##
            );
        }
        NodeKind::Item => {
            let _ = writeln!(
                out,
                r##"    <rect class="item" x="{x:.2}" y="{y:.2}" width="{w:.2}" height="{h:.2}" fill="#ffffff" stroke="#000000" stroke-width="1"/>"##
            );
            if let Some(id) = n.item {
                let size = (w.min(h) * 0.4).clamp(4.0, 40.0);
                let _ = writeln!(
                    out,
                    r#"    <text x="{:.2}" y="{:.2}" font-size="{size:.2}" text-anchor="middle" dominant-baseline="central">{id}</text>"#,
                    x + w / 2.0,
                    y + h / 2.0
                );
            }
        }
        NodeKind::Plate => {
            for c in &n.children {
                draw(out, f, c);
            }
            let _ = writeln!(
                out,
                r##"    <rect class="plate" x="{x:.2}" y="{y:.2}" width="{w:.2}" height="{h:.2}" fill="none" stroke="#d03030" stroke-width="1"/>"##
            );
        }
    }
}

pub fn render_svg(doc: &SolutionDocument) -> String {
    let mut body = String::new();
    let mut top = 0.0;
    for (i, bin) in doc.bins.iter().enumerate() {
        let scale = CANVAS / bin.width.max(bin.height) as f64;
        let frame = Frame {
            scale,
            top,
            height: bin.height,
        };
        let (w, h) = (bin.width as f64 * scale, bin.height as f64 * scale);
        let _ = writeln!(
            body,
            r#"  <g class="bin" id="bin-{i}" data-bin-type="{}" data-first-stage="{}">"#,
            bin.bin_type,
            bin.first_stage.letter()
        );
        for n in &bin.plates {
            draw(&mut body, &frame, n);
        }
        let _ = writeln!(
            body,
            r##"    <rect class="border" x="0" y="{top:.2}" width="{w:.2}" height="{h:.2}" fill="none" stroke="#000000" stroke-width="2"/>"##
        );
        body.push_str("  </g>\n");
        top += h + GAP;
    }
    let height = (top - GAP).max(0.0);
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{CANVAS:.0}" height="{height:.2}" viewBox="0 0 {CANVAS:.0} {height:.2}">"#
    );
    out.push_str(&body);
    out.push_str("</svg>\n");
    out
}
