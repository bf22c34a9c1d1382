//! Deterministic SVG figure emission.
//!
//! Vector output keeps fidelity at the extreme aspect ratios of preimage
//! strips (thin in `y`, long in `x`). Curves are drawn as polylines with
//! holonomy-translated copies per `unroll`; rasters as cell rectangles;
//! partitions as fiber segments; itineraries as step plots of position vs
//! rectangle index. Identical figure specs produce byte-identical output.

use crate::annuli::{LiftedCurve, Raster, RectanglePartition};
use crate::crooked::Itinerary;
use crate::error::{Error, Result};
use crate::fmt_f64;

/// Data box shown by the figure.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Viewport {
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
}

impl Viewport {
    pub fn new(x0: f64, x1: f64, y0: f64, y1: f64) -> Result<Self> {
        if !(x1 > x0 && y1 > y0) {
            return Err(Error::invalid("Viewport", "box must be nonempty"));
        }
        Ok(Viewport { x0, x1, y0, y1 })
    }
}

/// Affine viewport → canvas transform (y flipped).
#[derive(Clone, Copy, Debug)]
pub struct CanvasTransform {
    viewport: Viewport,
    width: f64,
    height: f64,
}

impl CanvasTransform {
    pub fn new(viewport: Viewport, width: f64, height: f64) -> Self {
        CanvasTransform { viewport, width, height }
    }

    pub fn to_canvas(&self, x: f64, y: f64) -> (f64, f64) {
        let v = self.viewport;
        (
            (x - v.x0) / (v.x1 - v.x0) * self.width,
            self.height - (y - v.y0) / (v.y1 - v.y0) * self.height,
        )
    }

    pub fn from_canvas(&self, cx: f64, cy: f64) -> (f64, f64) {
        let v = self.viewport;
        (
            v.x0 + cx / self.width * (v.x1 - v.x0),
            v.y0 + (self.height - cy) / self.height * (v.y1 - v.y0),
        )
    }
}

/// Stroke/fill styling for one layer.
#[derive(Clone, Debug, PartialEq)]
pub struct Style {
    pub stroke: String,
    pub stroke_width: f64,
    pub fill: Option<String>,
}

impl Default for Style {
    fn default() -> Self {
        Style { stroke: "#1f3a93".into(), stroke_width: 0.8, fill: None }
    }
}

impl Style {
    pub fn stroke(color: &str, width: f64) -> Self {
        Style { stroke: color.into(), stroke_width: width, fill: None }
    }
}

/// One drawable layer.
#[derive(Clone, Debug)]
pub enum Layer {
    Curve { curve: LiftedCurve<f64>, style: Style },
    Raster { raster: Raster<f64>, style: Style },
    Partition { partition: RectanglePartition<f64>, style: Style },
    Itinerary { itinerary: Itinerary, style: Style },
}

/// A complete figure description.
#[derive(Clone, Debug)]
pub struct FigureSpec {
    pub layers: Vec<Layer>,
    pub viewport: Viewport,
    /// Canvas size in pixels; curves are not drawn equal-aspect because the
    /// y-ranges dwarf the x-ranges after `W`.
    pub width: f64,
    pub height: f64,
    /// Number of deck translates drawn per curve layer (≥ 1).
    pub unroll: usize,
}

impl FigureSpec {
    pub fn new(viewport: Viewport) -> Self {
        FigureSpec { layers: Vec::new(), viewport, width: 1200.0, height: 600.0, unroll: 1 }
    }
}

/// Renders the figure to an SVG document string. Deterministic: identical
/// specs yield identical bytes.
pub fn render_figure(spec: &FigureSpec) -> Result<String> {
    assert!(spec.unroll >= 1, "unroll must be at least 1");
    let tf = CanvasTransform::new(spec.viewport, spec.width, spec.height);
    let mut out = String::new();
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" viewBox=\"0 0 {} {}\">\n",
        fmt_f64(spec.width),
        fmt_f64(spec.height),
        fmt_f64(spec.width),
        fmt_f64(spec.height)
    ));
    for (index, layer) in spec.layers.iter().enumerate() {
        match layer {
            Layer::Curve { curve, style } => {
                if curve.vertices().len() < 2 {
                    return Err(Error::EmptyLayer { index });
                }
                out.push_str("<g fill=\"none\">\n");
                for copy in 0..spec.unroll {
                    let shift = curve.holonomy() * copy as f64;
                    let points: Vec<String> = curve
                        .vertices()
                        .iter()
                        .map(|v| {
                            let (cx, cy) = tf.to_canvas(v.x + shift, v.y);
                            format!("{},{}", fmt_f64(cx), fmt_f64(cy))
                        })
                        .collect();
                    out.push_str(&format!(
                        "<polyline stroke=\"{}\" stroke-width=\"{}\" points=\"{}\"/>\n",
                        style.stroke,
                        fmt_f64(style.stroke_width),
                        points.join(" ")
                    ));
                }
                out.push_str("</g>\n");
            }
            Layer::Raster { raster, style } => {
                if raster.bits.is_empty() {
                    return Err(Error::EmptyLayer { index });
                }
                let fill = style.fill.as_deref().unwrap_or("#444444");
                out.push_str(&format!("<g fill=\"{fill}\">\n"));
                let dx = (raster.x1 - raster.x0) / raster.cols as f64;
                let dy = (raster.y1 - raster.y0) / raster.rows as f64;
                for row in 0..raster.rows {
                    for col in 0..raster.cols {
                        if !raster.get(col, row) {
                            continue;
                        }
                        let x = raster.x0 + dx * col as f64;
                        let y = raster.y0 + dy * row as f64;
                        let (cx0, cy0) = tf.to_canvas(x, y + dy);
                        let (cx1, cy1) = tf.to_canvas(x + dx, y);
                        out.push_str(&format!(
                            "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\"/>\n",
                            fmt_f64(cx0),
                            fmt_f64(cy0),
                            fmt_f64(cx1 - cx0),
                            fmt_f64(cy1 - cy0)
                        ));
                    }
                }
                out.push_str("</g>\n");
            }
            Layer::Partition { partition, style } => {
                if partition.fibers().is_empty() {
                    return Err(Error::EmptyLayer { index });
                }
                out.push_str("<g>\n");
                for copy in 0..spec.unroll {
                    let shift = std::f64::consts::TAU * copy as f64;
                    for fiber in partition.fibers() {
                        let (x0, y0) = tf.to_canvas(fiber.lower_end.x + shift, fiber.lower_end.y);
                        let (x1, y1) = tf.to_canvas(fiber.upper_end.x + shift, fiber.upper_end.y);
                        out.push_str(&format!(
                            "<line stroke=\"{}\" stroke-width=\"{}\" x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\"/>\n",
                            style.stroke,
                            fmt_f64(style.stroke_width),
                            fmt_f64(x0),
                            fmt_f64(y0),
                            fmt_f64(x1),
                            fmt_f64(y1)
                        ));
                    }
                }
                out.push_str("</g>\n");
            }
            Layer::Itinerary { itinerary, style } => {
                if itinerary.indices.is_empty() {
                    return Err(Error::EmptyLayer { index });
                }
                // step plot: position along the itinerary vs rectangle index
                let mut d = String::new();
                for (i, &idx) in itinerary.indices.iter().enumerate() {
                    let (cx, cy) = tf.to_canvas(i as f64, idx as f64);
                    let (cx2, _) = tf.to_canvas(i as f64 + 1.0, idx as f64);
                    if i == 0 {
                        d.push_str(&format!("M {} {}", fmt_f64(cx), fmt_f64(cy)));
                    } else {
                        d.push_str(&format!(" V {}", fmt_f64(cy)));
                    }
                    d.push_str(&format!(" H {}", fmt_f64(cx2)));
                }
                out.push_str(&format!(
                    "<path fill=\"none\" stroke=\"{}\" stroke-width=\"{}\" d=\"{}\"/>\n",
                    style.stroke,
                    fmt_f64(style.stroke_width),
                    d
                ));
            }
        }
    }
    out.push_str("</svg>\n");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn viewport() -> Viewport {
        Viewport::new(0.0, std::f64::consts::TAU, -3.0, 3.0).unwrap()
    }

    #[test]
    fn polyline_count_follows_unroll() {
        let mut spec = FigureSpec::new(viewport());
        spec.layers.push(Layer::Curve {
            curve: LiftedCurve::line(0.0),
            style: Style::default(),
        });
        let doc = render_figure(&spec).unwrap();
        assert_eq!(doc.matches("<polyline").count(), 1);
        spec.unroll = 3;
        let doc = render_figure(&spec).unwrap();
        assert_eq!(doc.matches("<polyline").count(), 3);
    }

    #[test]
    fn raster_cells_match_set_bits() {
        use crate::annuli::rasterize;
        use crate::maps::{Block, BlockSchedule, WParams};
        let sched =
            BlockSchedule::new(vec![Block::new(1, 0).unwrap()], WParams::default()).unwrap();
        let raster = rasterize(&sched, 0, (0.0, std::f64::consts::TAU, -4.0, 4.0), (10, 10));
        let set = raster.count_set();
        let mut spec = FigureSpec::new(viewport());
        spec.layers.push(Layer::Raster { raster, style: Style::default() });
        let doc = render_figure(&spec).unwrap();
        assert_eq!(doc.matches("<rect").count(), set);
    }

    #[test]
    fn rendering_is_deterministic() {
        let mut spec = FigureSpec::new(viewport());
        spec.layers.push(Layer::Curve {
            curve: LiftedCurve::line(1.0),
            style: Style::stroke("#aa0000", 1.2),
        });
        let a = render_figure(&spec).unwrap();
        let b = render_figure(&spec).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn empty_layer_is_reported() {
        let mut spec = FigureSpec::new(viewport());
        spec.layers.push(Layer::Itinerary {
            itinerary: Itinerary { indices: vec![], modulus: 4 },
            style: Style::default(),
        });
        match render_figure(&spec) {
            Err(Error::EmptyLayer { index: 0 }) => {}
            other => panic!("expected EmptyLayer, got {other:?}"),
        }
    }

    #[test]
    fn transform_round_trip() {
        let tf = CanvasTransform::new(viewport(), 1200.0, 600.0);
        for (x, y) in [(0.1, -2.5), (3.0, 0.0), (6.0, 2.9)] {
            let (cx, cy) = tf.to_canvas(x, y);
            let (bx, by) = tf.from_canvas(cx, cy);
            assert!((bx - x).abs() < 1e-9 && (by - y).abs() < 1e-9);
        }
    }
}
