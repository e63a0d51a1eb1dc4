use std::fmt::Write;

use thiserror::Error;

use super::turtle::Segment;

#[derive(Debug, Clone, PartialEq, Error)]
#[error("canvas dimensions must be positive, got {width}x{height}")]
pub struct SvgError {
    pub width: f64,
    pub height: f64,
}

/// Renders segments as an SVG 1.1 document: white background, 1px black
/// strokes, turtle origin at the canvas center and y pointing up.
pub fn segments_to_svg(segments: &[Segment], width: f64, height: f64) -> Result<String, SvgError> {
    if !(width > 0.0 && height > 0.0 && width.is_finite() && height.is_finite()) {
        return Err(SvgError { width, height });
    }
    let (cx, cy) = (width / 2.0, height / 2.0);
    let (w, h) = (coord(width), coord(height));
    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">"
    );
    let _ = writeln!(
        out,
        "  <rect x=\"0\" y=\"0\" width=\"{w}\" height=\"{h}\" fill=\"white\"/>"
    );
    for s in segments {
        let _ = writeln!(
            out,
            "  <line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\" stroke-width=\"1\"/>",
            coord(cx + s.x0),
            coord(cy - s.y0),
            coord(cx + s.x1),
            coord(cy - s.y1),
        );
    }
    out.push_str("</svg>\n");
    Ok(out)
}

/// Fixed six-decimal rounding with trailing zeros trimmed; never `-0`.
fn coord(v: f64) -> String {
    let s = format!("{v:.6}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".to_string()
    } else {
        s.to_string()
    }
}
