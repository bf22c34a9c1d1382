//! The skew product on `S¹ × ℝ × (I₁ ∪ I₂)` and its escape times.

use super::angle::Symbol;
use super::coding::{apply_g, classify, CodePrefix};
use crate::error::{Error, Result};
use crate::maps::{apply_t, apply_w, Block, BlockSchedule, CylinderPoint, WParams};
use crate::scalar::{lit, reduce_angle, Scalar};

/// A state `(x, y, z)` of the skew product; `z` must lie in `I₁ ∪ I₂` for
/// the dynamics to be defined.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SkewState<F> {
    pub x: F,
    pub y: F,
    pub z: F,
}

impl<F: Scalar> SkewState<F> {
    pub fn new(x: F, y: F, z: F) -> Self {
        SkewState { x: reduce_angle(x), y, z: reduce_angle(z) }
    }

    fn cylinder(&self) -> CylinderPoint<F> {
        CylinderPoint::new(self.x, self.y)
    }
}

/// One step of the skew product: `T` on the cylinder factor when `z ∈ I₁`,
/// `W` when `z ∈ I₂`, and `g` on the selector. The map is not specified
/// outside `I₁ ∪ I₂`.
pub fn apply_f<F: Scalar>(s: SkewState<F>, params: &WParams<F>) -> Result<SkewState<F>> {
    let sym = classify(s.z).ok_or(Error::OutsideDomain { z: s.z.to_f64().unwrap() })?;
    let xy = match sym {
        Symbol::One => apply_t(s.cylinder()),
        Symbol::Two => apply_w(s.cylinder(), params),
    };
    Ok(SkewState { x: xy.x, y: xy.y, z: apply_g(s.z) })
}

/// Outcome of watching an orbit against the reference neighbourhood
/// `S¹ × [−2, 2] × (I₁ ∪ I₂)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EscapeOutcome {
    /// First step `t ≤ maxiter` at which `|y| > 2` or `z ∉ I₁ ∪ I₂`;
    /// step 0 reports an initial state already outside.
    Escaped { step: usize },
    Never { maxiter: usize },
}

/// First exit time of the orbit from the reference neighbourhood, or
/// `Never` if all `maxiter` iterates stay inside.
pub fn escape_time<F: Scalar>(
    s: SkewState<F>,
    params: &WParams<F>,
    maxiter: usize,
) -> EscapeOutcome {
    assert!(maxiter >= 1);
    let outside =
        |s: &SkewState<F>| s.y.abs() > lit::<F>(2.0) || classify(s.z).is_none();
    let mut state = s;
    if outside(&state) {
        return EscapeOutcome::Escaped { step: 0 };
    }
    for t in 1..=maxiter {
        // the pre-check guarantees z is in the domain
        state = apply_f(state, params).expect("state checked inside the domain");
        if outside(&state) {
            return EscapeOutcome::Escaped { step: t };
        }
    }
    EscapeOutcome::Never { maxiter }
}

/// Run-length grouping of a code into a block schedule: maximal runs of 1s
/// become `T`-counts and following runs of 2s become `W`-counts, so the
/// composed schedule applies exactly the selected map sequence.
pub fn schedule_from_code<F: Scalar>(
    prefix: &CodePrefix,
    params: WParams<F>,
) -> Result<BlockSchedule<F>> {
    let mut blocks = Vec::new();
    let mut t_count = 0u32;
    let mut w_count = 0u32;
    for &s in prefix.symbols() {
        match s {
            Symbol::One => {
                if w_count > 0 {
                    blocks.push(Block { t_count, w_count });
                    t_count = 0;
                    w_count = 0;
                }
                t_count += 1;
            }
            Symbol::Two => w_count += 1,
        }
    }
    blocks.push(Block { t_count, w_count });
    BlockSchedule::new(blocks, params)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maps::block_forward;
    use crate::symbolic::coding::{code_to_interval, CodePrefix};
    use std::f64::consts::{FRAC_PI_2, PI};

    fn m512() -> WParams<f64> {
        WParams::default()
    }

    #[test]
    fn skew_step_examples() {
        let s = apply_f(SkewState::new(0.0, 0.0, 0.0), &m512()).unwrap();
        assert_eq!(s, SkewState::new(0.0, 0.0, 0.0));
        // z = π is fixed in I₂ and selects W, which fixes (π/2, 1)
        let s = apply_f(SkewState::new(FRAC_PI_2, 1.0, PI), &m512()).unwrap();
        assert!((s.x - FRAC_PI_2).abs() < 1e-12 && (s.y - 1.0).abs() < 1e-12);
        assert!((s.z - PI).abs() < 1e-12);
        match apply_f(SkewState::new(0.0, 0.0, 3.0 * PI / 4.0), &m512()) {
            Err(Error::OutsideDomain { .. }) => {}
            other => panic!("expected OutsideDomain, got {other:?}"),
        }
    }

    #[test]
    fn escape_time_examples() {
        assert_eq!(
            escape_time(SkewState::new(0.0, 3.0, 0.0), &m512(), 10),
            EscapeOutcome::Escaped { step: 0 }
        );
        assert_eq!(
            escape_time(SkewState::new(FRAC_PI_2, 1.0, PI), &m512(), 10_000),
            EscapeOutcome::Never { maxiter: 10_000 }
        );
        // z = 0 selects T forever, y: 1 → 8 exits at step 1
        assert_eq!(
            escape_time(SkewState::new(FRAC_PI_2, 1.0, 0.0), &m512(), 10_000),
            EscapeOutcome::Escaped { step: 1 }
        );
    }

    #[test]
    fn run_length_grouping() {
        let sched = schedule_from_code(&CodePrefix::parse("112122").unwrap(), m512()).unwrap();
        assert_eq!(
            sched.blocks(),
            &[Block { t_count: 2, w_count: 1 }, Block { t_count: 1, w_count: 2 }]
        );
        let sched = schedule_from_code(&CodePrefix::parse("111").unwrap(), m512()).unwrap();
        assert_eq!(sched.blocks(), &[Block { t_count: 3, w_count: 0 }]);
        let sched = schedule_from_code(&CodePrefix::parse("2").unwrap(), m512()).unwrap();
        assert_eq!(sched.blocks(), &[Block { t_count: 0, w_count: 1 }]);
    }

    #[test]
    fn slice_dynamics_follow_the_code_schedule() {
        // iterating the skew product from z in a code interval applies
        // exactly the coded map sequence to the cylinder factor
        for text in ["1", "2", "12", "1122", "21212", "11221212"] {
            let prefix = CodePrefix::parse(text).unwrap();
            let sched = schedule_from_code(&prefix, m512()).unwrap();
            let z0: f64 = code_to_interval(&prefix).midpoint().to_float();
            let mut s = SkewState::new(1.0, 0.3, z0);
            for _ in 0..prefix.len() {
                s = apply_f(s, &m512()).unwrap();
            }
            let direct = block_forward(
                crate::maps::CylinderPoint::new(1.0, 0.3),
                &sched,
                sched.depth(),
            );
            assert!(
                (s.x - direct.x).abs() < 1e-9 && (s.y - direct.y).abs() < 1e-6,
                "code {text}: skew {s:?} vs composed {direct:?}"
            );
        }
    }
}
