//! Periodic polylines on the universal cover and their pullbacks.
//!
//! A [`LiftedCurve`] stores one period of a curve on the cover together with
//! its holonomy `H`: the continuation satisfies `c(end) = c(start) + (H, 0)`.
//! Projecting and traversing `⌈2π/H⌉` concatenated periods closes the curve
//! on the cylinder. Pulling back under `T̃⁻¹` halves the holonomy; `σ̃⁻¹`
//! preserves any holonomy; `s̃⁻¹` (and hence `W̃⁻¹`) is deck-equivariant only
//! for full turns, so a sub-2π period is first expanded to a full turn by
//! concatenating deck translates.

use crate::error::{Error, Result};
use crate::geom::{bend_angle, dist};
use crate::maps::{lift_inverse_step, LiftPoint, MapId, WParams};
use crate::scalar::{lit, Scalar};

/// Controls for adaptive pullback refinement.
#[derive(Clone, Copy, Debug)]
pub struct RefineOpts<F> {
    /// Maximum chord length between adjacent output vertices (cover units).
    pub tol: F,
    /// Maximum turning angle between consecutive chords, radians. Pullbacks
    /// under `W̃⁻¹` create near-reversals that a length-only criterion misses.
    pub max_turn: F,
    /// Hard cap on output vertices per curve.
    pub vertex_budget: usize,
    /// Hard cap on bisection depth per source segment.
    pub max_split_depth: u32,
}

impl<F: Scalar> Default for RefineOpts<F> {
    fn default() -> Self {
        RefineOpts {
            tol: lit(1e-3),
            max_turn: lit(0.2),
            vertex_budget: 10_000_000,
            max_split_depth: 40,
        }
    }
}

impl<F: Scalar> RefineOpts<F> {
    pub fn with_tol(tol: F) -> Self {
        RefineOpts { tol, ..Self::default() }
    }
}

/// One period of a periodic polyline on the cover, with explicit holonomy.
#[derive(Clone, Debug)]
pub struct LiftedCurve<F> {
    params: Vec<F>,
    vertices: Vec<LiftPoint<F>>,
    holonomy: F,
}

impl<F: Scalar> LiftedCurve<F> {
    /// Builds a curve from parts. Parameters must be strictly increasing and
    /// match the vertex count (at least two vertices).
    pub fn from_parts(params: Vec<F>, vertices: Vec<LiftPoint<F>>, holonomy: F) -> Result<Self> {
        if params.len() != vertices.len() || params.len() < 2 {
            return Err(Error::invalid("LiftedCurve", "need matching params/vertices, ≥ 2"));
        }
        if params.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::invalid("LiftedCurve", "params must be strictly increasing"));
        }
        Ok(LiftedCurve { params, vertices, holonomy })
    }

    /// One period of the horizontal line `y = const`, holonomy `2π`.
    pub fn line(y: F) -> Self {
        let tau = F::TAU();
        let n = 32usize;
        let mut params = Vec::with_capacity(n + 1);
        let mut vertices = Vec::with_capacity(n + 1);
        for i in 0..=n {
            let x = tau * F::from_usize(i).unwrap() / F::from_usize(n).unwrap();
            params.push(x);
            vertices.push(LiftPoint::new(x, y));
        }
        LiftedCurve { params, vertices, holonomy: tau }
    }

    pub fn params(&self) -> &[F] {
        &self.params
    }

    pub fn vertices(&self) -> &[LiftPoint<F>] {
        &self.vertices
    }

    pub fn holonomy(&self) -> F {
        self.holonomy
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Number of stored periods that close one loop on the cylinder.
    pub fn periods_per_loop(&self) -> usize {
        let r = (F::TAU() / self.holonomy.abs()).to_f64().unwrap_or(1.0).round();
        (r as usize).max(1)
    }

    fn param_span(&self) -> F {
        *self.params.last().unwrap() - self.params[0]
    }

    /// Evaluates the periodic continuation by linear interpolation; `u` may
    /// lie outside the stored parameter range.
    pub fn point_at(&self, u: F) -> LiftPoint<F> {
        let span = self.param_span();
        let first = self.params[0];
        let mut wraps = ((u - first) / span).floor();
        let mut local = u - wraps * span;
        // guard against floating wrap-around at the seam
        if local < first {
            wraps = wraps - F::one();
            local = u - wraps * span;
        }
        let last = *self.params.last().unwrap();
        if local > last {
            local = last;
        }
        let i = match self.params.binary_search_by(|p| p.partial_cmp(&local).unwrap()) {
            Ok(i) => i.min(self.params.len() - 2),
            Err(i) => i.saturating_sub(1).min(self.params.len() - 2),
        };
        let (p0, p1) = (self.params[i], self.params[i + 1]);
        let t = if p1 > p0 { (local - p0) / (p1 - p0) } else { F::zero() };
        let a = self.vertices[i];
        let b = self.vertices[i + 1];
        let shift = wraps * self.holonomy;
        LiftPoint::new(a.x + (b.x - a.x) * t + shift, a.y + (b.y - a.y) * t)
    }

    /// Concatenates `k` stored periods into one curve with holonomy `k·H`.
    pub fn concat_periods(&self, k: usize) -> Self {
        assert!(k >= 1);
        let span = self.param_span();
        let mut params = self.params.clone();
        let mut vertices = self.vertices.clone();
        for copy in 1..k {
            let cf = F::from_usize(copy).unwrap();
            for (p, v) in self.params.iter().zip(&self.vertices).skip(1) {
                params.push(*p + span * cf);
                vertices.push(LiftPoint::new(v.x + self.holonomy * cf, v.y));
            }
        }
        LiftedCurve { params, vertices, holonomy: self.holonomy * F::from_usize(k).unwrap() }
    }

    /// The stored curve expanded to a full turn (holonomy `2π`).
    pub fn to_full_turn(&self) -> Self {
        let r = self.periods_per_loop();
        if r == 1 && self.has_full_turn_holonomy() {
            self.clone()
        } else {
            self.concat_periods(r)
        }
    }

    fn has_full_turn_holonomy(&self) -> bool {
        let turns = (self.holonomy / F::TAU()).to_f64().unwrap_or(0.0);
        (turns - turns.round()).abs() < 1e-9 && turns.round() >= 1.0
    }

    /// One closed loop on the cylinder: `⌈2π/H⌉` concatenated periods.
    pub fn closed_loop(&self) -> Self {
        self.concat_periods(self.periods_per_loop())
    }

    /// The same geometric curve traversed backward.
    pub fn reversed(&self) -> Self {
        let last = *self.params.last().unwrap();
        let params = self.params.iter().rev().map(|p| last - *p + self.params[0]).collect();
        let vertices = self.vertices.iter().rev().copied().collect();
        LiftedCurve { params, vertices, holonomy: -self.holonomy }
    }

    /// Total polyline length of the stored period.
    pub fn arc_length(&self) -> F {
        self.vertices.windows(2).fold(F::zero(), |acc, w| acc + dist(w[0], w[1]))
    }

    pub fn max_segment_len(&self) -> F {
        self.vertices.windows(2).fold(F::zero(), |acc, w| acc.max(dist(w[0], w[1])))
    }

    /// Bounding box `(x0, x1, y0, y1)` of the stored vertices.
    pub fn bbox(&self) -> (F, F, F, F) {
        let mut x0 = F::infinity();
        let mut x1 = F::neg_infinity();
        let mut y0 = F::infinity();
        let mut y1 = F::neg_infinity();
        for v in &self.vertices {
            x0 = x0.min(v.x);
            x1 = x1.max(v.x);
            y0 = y0.min(v.y);
            y1 = y1.max(v.y);
        }
        (x0, x1, y0, y1)
    }

    /// CSV serialization: comment header with holonomy, depth and schedule
    /// stamp, then `param,x,y` rows at fixed 17-significant-digit formatting.
    pub fn to_csv(&self, depth: usize, schedule: &str, schedule_hash: &str, extra: &[String]) -> String
    where
        F: Into<f64> + Copy,
    {
        let mut out = String::new();
        out.push_str(&format!("# holonomy={}\n", crate::fmt_f64(self.holonomy.into())));
        out.push_str(&format!("# depth={depth}\n"));
        out.push_str(&format!("# schedule={schedule}\n"));
        out.push_str(&format!("# schedule_hash={schedule_hash}\n"));
        for line in extra {
            out.push_str(&format!("# {line}\n"));
        }
        out.push_str("param,x,y\n");
        for (p, v) in self.params.iter().zip(&self.vertices) {
            out.push_str(&format!(
                "{},{},{}\n",
                crate::fmt_f64((*p).into()),
                crate::fmt_f64(v.x.into()),
                crate::fmt_f64(v.y.into())
            ));
        }
        out
    }

    /// Parses the CSV form written by [`Self::to_csv`].
    pub fn from_csv(text: &str) -> Result<LiftedCurve<f64>> {
        let mut holonomy = None;
        let mut params = Vec::new();
        let mut vertices = Vec::new();
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix('#') {
                let rest = rest.trim();
                if let Some(v) = rest.strip_prefix("holonomy=") {
                    holonomy = Some(v.parse::<f64>().map_err(|e| {
                        Error::invalid("curve CSV", format!("bad holonomy: {e}"))
                    })?);
                }
                continue;
            }
            if line == "param,x,y" {
                continue;
            }
            let mut cols = line.split(',');
            let mut next = || {
                cols.next()
                    .ok_or_else(|| Error::invalid("curve CSV", "short row"))?
                    .parse::<f64>()
                    .map_err(|e| Error::invalid("curve CSV", format!("bad number: {e}")))
            };
            let p = next()?;
            let x = next()?;
            let y = next()?;
            params.push(p);
            vertices.push(LiftPoint::new(x, y));
        }
        let holonomy =
            holonomy.ok_or_else(|| Error::invalid("curve CSV", "missing holonomy header"))?;
        LiftedCurve::from_parts(params, vertices, holonomy)
    }
}

/// Pulls a curve back under the lifted inverse of the named map, refining
/// adaptively until adjacent output vertices are closer than `opts.tol` and
/// chords turn by at most `opts.max_turn`.
///
/// Holonomy bookkeeping: `T̃⁻¹` halves it, `σ̃⁻¹` preserves it, and `s̃⁻¹`
/// or `W̃⁻¹` first expand the stored period to a full turn (deck
/// concatenation), after which the full-turn holonomy is preserved.
pub fn pullback_curve<F: Scalar>(
    c: &LiftedCurve<F>,
    map: MapId,
    params: &WParams<F>,
    opts: &RefineOpts<F>,
) -> Result<LiftedCurve<F>> {
    if c.holonomy == F::zero() {
        return Err(Error::invalid("pullback_curve", "curve must have nonzero holonomy"));
    }
    let needs_full_turn = matches!(map, MapId::S | MapId::W);
    let expanded;
    let src = if needs_full_turn && !c.has_full_turn_holonomy() {
        expanded = c.to_full_turn();
        &expanded
    } else {
        c
    };
    let out_holonomy = match map {
        MapId::T => src.holonomy * F::from_f64(0.5).unwrap(),
        _ => src.holonomy,
    };

    let inv = |u: F| lift_inverse_step(map, src.point_at(u), params);

    let span = src.param_span();
    let tiny = span * lit::<F>(1e-13);
    let mut out_params: Vec<F> = Vec::with_capacity(src.len());
    let mut out_vertices: Vec<LiftPoint<F>> = Vec::with_capacity(src.len());
    out_params.push(src.params[0]);
    out_vertices.push(lift_inverse_step(map, src.vertices[0], params));

    // Per source segment, bisect in parameter space until the image chord is
    // short and straight enough.
    let mut stack: Vec<(F, LiftPoint<F>, u32)> = Vec::new();
    for i in 0..src.len() - 1 {
        let ub = src.params[i + 1];
        stack.push((ub, lift_inverse_step(map, src.vertices[i + 1], params), 0));
        while let Some((u1, w1, depth)) = stack.pop() {
            let u0 = *out_params.last().unwrap();
            let w0 = *out_vertices.last().unwrap();
            let um = (u0 + u1) * F::from_f64(0.5).unwrap();
            let wm = inv(um);
            let chord = dist(w0, w1);
            let flat = chord <= opts.tol && bend_angle(w0, wm, w1) <= opts.max_turn;
            if flat || u1 - u0 <= tiny || depth >= opts.max_split_depth {
                out_params.push(u1);
                out_vertices.push(w1);
                if out_vertices.len() > opts.vertex_budget {
                    return Err(Error::UnresolvedCurve { budget: opts.vertex_budget });
                }
            } else {
                stack.push((u1, w1, depth + 1));
                stack.push((um, wm, depth + 1));
            }
        }
    }

    LiftedCurve::from_parts(out_params, out_vertices, out_holonomy)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{PI, TAU};

    fn m512() -> WParams<f64> {
        WParams::default()
    }

    #[test]
    fn line_closes_with_full_turn() {
        let c = LiftedCurve::<f64>::line(2.0);
        assert_eq!(c.holonomy(), TAU);
        assert_eq!(c.periods_per_loop(), 1);
        let first = c.vertices()[0];
        let last = *c.vertices().last().unwrap();
        assert!((last.x - first.x - TAU).abs() < 1e-12 && (last.y - first.y).abs() < 1e-15);
    }

    #[test]
    fn t_pullback_of_constant_curve() {
        let c = LiftedCurve::<f64>::line(2.0);
        let q = pullback_curve(&c, MapId::T, &m512(), &RefineOpts::default()).unwrap();
        assert!((q.holonomy() - PI).abs() < 1e-15);
        for v in q.vertices() {
            assert!((v.y - 0.25).abs() < 1e-15);
        }
    }

    #[test]
    fn w_pullback_of_core_matches_closed_form() {
        // W̃⁻¹ of y = 0 is u ↦ (u + 2π·(511/512)·sin u, (511/512)·sin u).
        let c = LiftedCurve::<f64>::line(0.0);
        let q = pullback_curve(&c, MapId::W, &m512(), &RefineOpts::default()).unwrap();
        assert!((q.holonomy() - TAU).abs() < 1e-15);
        let amp = 511.0 / 512.0;
        for (u, v) in q.params().iter().zip(q.vertices()) {
            let y = amp * u.sin();
            let x = u + TAU * y;
            assert!((v.x - x).abs() < 1e-12 && (v.y - y).abs() < 1e-12, "u = {u}");
        }
        // value at x = 0 is (0, 0); maximum |y| is 511/512
        let first = q.vertices()[0];
        assert!(first.x.abs() < 1e-12 && first.y.abs() < 1e-12);
        let max_y = q.vertices().iter().map(|v| v.y.abs()).fold(0.0_f64, f64::max);
        assert!((max_y - amp).abs() < 1e-6);
    }

    #[test]
    fn refinement_respects_tolerance() {
        let c = LiftedCurve::<f64>::line(0.0);
        let opts = RefineOpts::with_tol(1e-3);
        let q = pullback_curve(&c, MapId::W, &m512(), &opts).unwrap();
        assert!(q.max_segment_len() <= 1.1e-3);
    }

    #[test]
    fn vertex_budget_is_enforced() {
        let c = LiftedCurve::<f64>::line(0.0);
        let opts = RefineOpts { vertex_budget: 100, ..RefineOpts::default() };
        match pullback_curve(&c, MapId::W, &m512(), &opts) {
            Err(Error::UnresolvedCurve { budget }) => assert_eq!(budget, 100),
            other => panic!("expected UnresolvedCurve, got {other:?}"),
        }
    }

    #[test]
    fn sub_turn_period_is_expanded_before_w_pullback() {
        let c = LiftedCurve::<f64>::line(0.0);
        let halved = pullback_curve(&c, MapId::T, &m512(), &RefineOpts::default()).unwrap();
        assert!((halved.holonomy() - PI).abs() < 1e-15);
        let back = pullback_curve(&halved, MapId::W, &m512(), &RefineOpts::default()).unwrap();
        assert!((back.holonomy() - TAU).abs() < 1e-15);
        let first = back.vertices()[0];
        let last = *back.vertices().last().unwrap();
        assert!((last.x - first.x - TAU).abs() < 1e-9 && (last.y - first.y).abs() < 1e-9);
    }

    #[test]
    fn csv_round_trip() {
        let c = LiftedCurve::<f64>::line(1.0);
        let text = c.to_csv(0, "1:1@512", "deadbeef", &[]);
        let parsed = LiftedCurve::<f64>::from_csv(&text).unwrap();
        assert_eq!(parsed.len(), c.len());
        assert_eq!(parsed.holonomy(), c.holonomy());
        assert_eq!(parsed.vertices()[5], c.vertices()[5]);
    }

    #[test]
    fn point_at_extends_periodically() {
        let c = LiftedCurve::<f64>::line(1.5);
        let p = c.point_at(TAU + 1.0);
        assert!((p.x - (TAU + 1.0)).abs() < 1e-12 && (p.y - 1.5).abs() < 1e-15);
        let p = c.point_at(-1.0);
        assert!((p.x + 1.0).abs() < 1e-12);
    }
}
