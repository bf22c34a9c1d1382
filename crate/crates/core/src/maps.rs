//! The generating maps of the construction and their lifts.
//!
//! Everything happens on the cylinder `S¹ × ℝ` with angular coordinate
//! `x ∈ [0, 2π)` and unbounded height `y`, or on its universal cover `ℝ²`.
//! Four maps are involved:
//!
//! * the "two" map `T(x, y) = (2x mod 2π, 8y)`, exactly two-to-one,
//! * the fiber expansion `s(x, y) = (x, My − (M−1)·sin x)` with `M ≥ 2⁹`,
//!   which fixes the sine curve `y = sin x` pointwise,
//! * the shear `σ(x, y) = (x − 2πy, y)`,
//! * the wiggle map `W = s ∘ σ`, a diffeomorphism of the cylinder with
//!   fixed points `(π/2, 1)` and `(3π/2, −1)`.
//!
//! On the cover the same formulas apply without modular arithmetic, and
//! there every map (including the lift of `T`) has a unique algebraic
//! inverse; [`lift_inverse_step`] evaluates those inverses. Finite
//! compositions are described by a [`BlockSchedule`]: block `i` applies
//! `T` `mᵢ` times followed by `W` `nᵢ` times, i.e. `fᵢ = W^{nᵢ} ∘ T^{mᵢ}`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{lit, reduce_angle, Scalar};

/// Point on the cylinder; `x` is kept reduced into `[0, 2π)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CylinderPoint<F> {
    pub x: F,
    pub y: F,
}

impl<F: Scalar> CylinderPoint<F> {
    /// Builds a cylinder point, reducing the angle into the canonical branch.
    pub fn new(x: F, y: F) -> Self {
        CylinderPoint { x: reduce_angle(x), y }
    }
}

/// Point on the universal cover `ℝ²`; `x` is unreduced.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LiftPoint<F> {
    pub x: F,
    pub y: F,
}

impl<F: Scalar> LiftPoint<F> {
    pub fn new(x: F, y: F) -> Self {
        LiftPoint { x, y }
    }

    /// Projects down to the cylinder.
    pub fn project(self) -> CylinderPoint<F> {
        CylinderPoint::new(self.x, self.y)
    }

    /// Deck translation by `k` full turns.
    pub fn translated(self, k: F) -> Self {
        LiftPoint { x: self.x + k * F::TAU(), y: self.y }
    }
}

/// Parameters of the fiber expansion `s` (and hence of `W`).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WParams<F> {
    multiplier: F,
}

impl<F: Scalar> WParams<F> {
    pub const MIN_MULTIPLIER: f64 = 512.0;

    /// Requires `M ≥ 512`.
    pub fn new(multiplier: F) -> Result<Self> {
        if multiplier < lit(Self::MIN_MULTIPLIER) {
            return Err(Error::invalid(
                "WParams",
                format!("multiplier must be at least {}, got {multiplier}", Self::MIN_MULTIPLIER),
            ));
        }
        Ok(WParams { multiplier })
    }

    pub fn multiplier(&self) -> F {
        self.multiplier
    }
}

impl<F: Scalar> Default for WParams<F> {
    fn default() -> Self {
        WParams { multiplier: lit(Self::MIN_MULTIPLIER) }
    }
}

/// One block of the schedule: `t_count` applications of `T` followed by
/// `w_count` applications of `W`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Block {
    #[serde(rename = "t")]
    pub t_count: u32,
    #[serde(rename = "w")]
    pub w_count: u32,
}

impl Block {
    /// Requires at least one map application.
    pub fn new(t_count: u32, w_count: u32) -> Result<Self> {
        if t_count + w_count == 0 {
            return Err(Error::invalid("Block", "t_count + w_count must be at least 1"));
        }
        Ok(Block { t_count, w_count })
    }
}

/// A finite schedule of blocks together with the `W` parameters; depth `k`
/// refers to the composition `f_k ∘ … ∘ f_1`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlockSchedule<F> {
    blocks: Vec<Block>,
    params: WParams<F>,
}

impl<F: Scalar> BlockSchedule<F> {
    /// Requires a nonempty block list.
    pub fn new(blocks: Vec<Block>, params: WParams<F>) -> Result<Self> {
        if blocks.is_empty() {
            return Err(Error::invalid("BlockSchedule", "block list must be nonempty"));
        }
        Ok(BlockSchedule { blocks, params })
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn params(&self) -> &WParams<F> {
        &self.params
    }

    pub fn depth(&self) -> usize {
        self.blocks.len()
    }

    /// Canonical text form `t:w,t:w,…@M`, used for hashing and file names.
    pub fn canonical_string(&self) -> String {
        let body: Vec<String> =
            self.blocks.iter().map(|b| format!("{}:{}", b.t_count, b.w_count)).collect();
        format!("{}@{}", body.join(","), self.params.multiplier)
    }

    /// Short hex stamp of the canonical form.
    pub fn hash_hex(&self) -> String {
        format!("{:016x}", crate::fnv1a(self.canonical_string().as_bytes()))
    }
}

/// Identifies one of the four generating maps. `W ≡ S ∘ SIGMA` by definition.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum MapId {
    T,
    S,
    Sigma,
    W,
}

/// `T(x, y) = (2x mod 2π, 8y)`.
pub fn apply_t<F: Scalar>(p: CylinderPoint<F>) -> CylinderPoint<F> {
    CylinderPoint::new(p.x + p.x, lit::<F>(8.0) * p.y)
}

/// Both cylinder preimages of a point under `T`: `(x/2, y/8)` and
/// `(x/2 + π, y/8)`.
pub fn t_preimages<F: Scalar>(p: CylinderPoint<F>) -> [CylinderPoint<F>; 2] {
    let half = F::from_f64(0.5).unwrap();
    let y = p.y / lit::<F>(8.0);
    [CylinderPoint::new(p.x * half, y), CylinderPoint::new(p.x * half + F::PI(), y)]
}

/// `s(x, y) = (x, My − (M−1)·sin x)`; fixes the curve `y = sin x`.
pub fn apply_s<F: Scalar>(p: CylinderPoint<F>, params: &WParams<F>) -> CylinderPoint<F> {
    let m = params.multiplier();
    CylinderPoint { x: p.x, y: m * p.y - (m - F::one()) * p.x.sin() }
}

/// The shear `σ(x, y) = (x − 2πy, y)`.
pub fn apply_sigma<F: Scalar>(p: CylinderPoint<F>) -> CylinderPoint<F> {
    CylinderPoint::new(p.x - F::TAU() * p.y, p.y)
}

/// `W = s ∘ σ`, a bijection of the cylinder.
pub fn apply_w<F: Scalar>(p: CylinderPoint<F>, params: &WParams<F>) -> CylinderPoint<F> {
    apply_s(apply_sigma(p), params)
}

/// Applies the named map on the cylinder.
pub fn apply_map<F: Scalar>(
    id: MapId,
    p: CylinderPoint<F>,
    params: &WParams<F>,
) -> CylinderPoint<F> {
    match id {
        MapId::T => apply_t(p),
        MapId::S => apply_s(p, params),
        MapId::Sigma => apply_sigma(p),
        MapId::W => apply_w(p, params),
    }
}

/// Cylinder-level inverse of `s`: `(x, (y + (M−1)·sin x)/M)`.
pub fn invert_s<F: Scalar>(p: CylinderPoint<F>, params: &WParams<F>) -> CylinderPoint<F> {
    let m = params.multiplier();
    CylinderPoint { x: p.x, y: (p.y + (m - F::one()) * p.x.sin()) / m }
}

/// Cylinder-level inverse of the shear: `(x + 2πy, y)`.
pub fn invert_sigma<F: Scalar>(p: CylinderPoint<F>) -> CylinderPoint<F> {
    CylinderPoint::new(p.x + F::TAU() * p.y, p.y)
}

/// Cylinder-level inverse of `W`: `σ⁻¹ ∘ s⁻¹`.
pub fn invert_w<F: Scalar>(p: CylinderPoint<F>, params: &WParams<F>) -> CylinderPoint<F> {
    invert_sigma(invert_s(p, params))
}

/// Applies the lift of the named map on the cover (no modular arithmetic).
pub fn lift_forward_step<F: Scalar>(
    id: MapId,
    q: LiftPoint<F>,
    params: &WParams<F>,
) -> LiftPoint<F> {
    match id {
        MapId::T => LiftPoint { x: q.x + q.x, y: lit::<F>(8.0) * q.y },
        MapId::S => {
            let m = params.multiplier();
            LiftPoint { x: q.x, y: m * q.y - (m - F::one()) * q.x.sin() }
        }
        MapId::Sigma => LiftPoint { x: q.x - F::TAU() * q.y, y: q.y },
        MapId::W => lift_forward_step(
            MapId::S,
            lift_forward_step(MapId::Sigma, q, params),
            params,
        ),
    }
}

/// The unique cover preimage under the lift of the named map:
/// `T̃⁻¹(x, y) = (x/2, y/8)`, `s̃⁻¹(x, y) = (x, (y + (M−1)·sin x)/M)`,
/// `σ̃⁻¹(x, y) = (x + 2πy, y)`, `W̃⁻¹ = σ̃⁻¹ ∘ s̃⁻¹`.
pub fn lift_inverse_step<F: Scalar>(
    id: MapId,
    q: LiftPoint<F>,
    params: &WParams<F>,
) -> LiftPoint<F> {
    match id {
        MapId::T => {
            let half = F::from_f64(0.5).unwrap();
            LiftPoint { x: q.x * half, y: q.y / lit::<F>(8.0) }
        }
        MapId::S => {
            let m = params.multiplier();
            LiftPoint { x: q.x, y: (q.y + (m - F::one()) * q.x.sin()) / m }
        }
        MapId::Sigma => LiftPoint { x: q.x + F::TAU() * q.y, y: q.y },
        MapId::W => lift_inverse_step(
            MapId::Sigma,
            lift_inverse_step(MapId::S, q, params),
            params,
        ),
    }
}

/// Evaluates `(f_k ∘ … ∘ f_1)(p)`: blocks left to right, `T`s before `W`s
/// within each block. `k = 0` is the identity.
///
/// Panics if `k` exceeds the schedule depth.
pub fn block_forward<F: Scalar>(
    p: CylinderPoint<F>,
    sched: &BlockSchedule<F>,
    k: usize,
) -> CylinderPoint<F> {
    assert!(k <= sched.depth(), "depth {k} exceeds schedule length {}", sched.depth());
    let mut q = p;
    for block in &sched.blocks()[..k] {
        for _ in 0..block.t_count {
            q = apply_t(q);
        }
        for _ in 0..block.w_count {
            q = apply_w(q, sched.params());
        }
    }
    q
}
