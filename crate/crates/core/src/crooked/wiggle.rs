//! The wiggle and crookedness decisions on itineraries.
//!
//! A segment has a `(j₀, j₁)` wiggle (`j₁ > j₀ + 2`) when every path through
//! it from rectangle `j₀` to its first entry into rectangle `j₁` passes
//! through `j₁ − 1` and then back through `j₀ + 1` first. On a ±1 itinerary
//! this becomes: for every position `a` holding `j₀` and the first later
//! position `b` holding `j₁`, there are `a < c < d < b` with `c` at `j₁ − 1`
//! and `d` at `j₀ + 1`. Both traversal orientations are required, since a
//! path traversed backward is also a path.

use std::collections::HashMap;

use super::itinerary::Itinerary;
use crate::annuli::RectanglePartition;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// A wiggle query; requires `j1 > j0 + 2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WiggleQuery {
    pub j0: i64,
    pub j1: i64,
}

impl WiggleQuery {
    pub fn new(j0: i64, j1: i64) -> Result<Self> {
        if j1 <= j0 + 2 {
            return Err(Error::invalid("WiggleQuery", format!("need j1 > j0 + 2, got ({j0}, {j1})")));
        }
        Ok(WiggleQuery { j0, j1 })
    }
}

/// Decides the `(j₀, j₁)` wiggle on the itinerary, in both orientations.
/// Vacuously true when no qualifying pair of positions exists.
pub fn has_wiggle(it: &Itinerary, q: WiggleQuery) -> bool {
    if !one_orientation(&it.indices, q) {
        return false;
    }
    let reversed: Vec<i64> = it.indices.iter().rev().copied().collect();
    one_orientation(&reversed, q)
}

fn one_orientation(seq: &[i64], q: WiggleQuery) -> bool {
    let mut positions: HashMap<i64, Vec<usize>> = HashMap::new();
    for (i, &v) in seq.iter().enumerate() {
        positions.entry(v).or_default().push(i);
    }
    let empty: Vec<usize> = Vec::new();
    let starts = positions.get(&q.j0).unwrap_or(&empty);
    let enters = positions.get(&q.j1).unwrap_or(&empty);
    let near = positions.get(&(q.j1 - 1)).unwrap_or(&empty);
    let back = positions.get(&(q.j0 + 1)).unwrap_or(&empty);
    let first_after = |list: &[usize], pos: usize| -> Option<usize> {
        let i = list.partition_point(|&p| p <= pos);
        list.get(i).copied()
    };
    for &a in starts {
        // the only qualifying b is the first entry into j1 after a
        let Some(b) = first_after(enters, a) else { continue };
        let Some(c) = first_after(near, a) else { return false };
        if c >= b {
            return false;
        }
        let Some(d) = first_after(back, c) else { return false };
        if d >= b {
            return false;
        }
    }
    true
}

/// True iff every `(j₀, j₁)` with `j₁ > j₀ + 2` and both values occurring in
/// the itinerary has a wiggle.
///
/// Rectangles downstairs are indexed cyclically, with one chosen lift per
/// class forming a fundamental window of `N` consecutive lift rectangles, so
/// the binding pairs have `j₁ − j₀ < N`: a ±1 path reaches lift index
/// `j₁ ≥ j₀ + N` only after first entering the class of `j₁` at `j₁ − N`,
/// which makes wider pairs vacuous downstairs.
pub fn is_crooked<F: Scalar>(it: &Itinerary, part: &RectanglePartition<F>) -> bool {
    debug_assert_eq!(it.modulus, part.n());
    crooked_failures(it).is_empty()
}

/// The failing `(j₀, j₁)` pairs (with `2 < j₁ − j₀ < modulus`); empty means
/// crooked.
pub fn crooked_failures(it: &Itinerary) -> Vec<(i64, i64)> {
    let mut values: Vec<i64> = it.indices.clone();
    values.sort_unstable();
    values.dedup();
    let max_gap = it.modulus as i64 - 1;
    let mut failures = Vec::new();
    for (i, &j0) in values.iter().enumerate() {
        for &j1 in &values[i + 1..] {
            if j1 > j0 + 2 && j1 - j0 <= max_gap && !has_wiggle(it, WiggleQuery { j0, j1 }) {
                failures.push((j0, j1));
            }
        }
    }
    failures
}

/// Recursively generated ±1 pattern from `0` to `span` that is crooked:
/// the span-`w` pattern goes crookedly to `w − 1`, back to `1`, then to `w`.
pub fn crooked_pattern(span: i64) -> Vec<i64> {
    assert!(span >= 1);
    let mut out = vec![0];
    extend_crooked(&mut out, 0, span);
    out
}

fn extend_crooked(out: &mut Vec<i64>, from: i64, to: i64) {
    let step = if to > from { 1 } else { -1 };
    if (to - from).abs() <= 2 {
        let mut v = from;
        while v != to {
            v += step;
            out.push(v);
        }
    } else {
        extend_crooked(out, from, to - step);
        extend_crooked(out, to - step, from + step);
        extend_crooked(out, from + step, to);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn it(indices: &[i64], modulus: usize) -> Itinerary {
        Itinerary { indices: indices.to_vec(), modulus }
    }

    /// Literal transcription of the wiggle definition, used as the oracle:
    /// enumerate all qualifying (a, b) pairs directly and scan for (c, d).
    pub fn brute_force_wiggle(seq: &[i64], j0: i64, j1: i64) -> bool {
        let forward = |s: &[i64]| -> bool {
            for a in 0..s.len() {
                if s[a] != j0 {
                    continue;
                }
                for b in a + 1..s.len() {
                    if s[b] != j1 {
                        continue;
                    }
                    if s[a + 1..b].contains(&j1) {
                        continue;
                    }
                    let mut ok = false;
                    'search: for c in a + 1..b {
                        if s[c] != j1 - 1 {
                            continue;
                        }
                        for d in c + 1..b {
                            if s[d] == j0 + 1 {
                                ok = true;
                                break 'search;
                            }
                        }
                    }
                    if !ok {
                        return false;
                    }
                }
            }
            true
        };
        let rev: Vec<i64> = seq.iter().rev().copied().collect();
        forward(seq) && forward(&rev)
    }

    #[test]
    fn wiggle_examples() {
        let a = it(&[0, 1, 2, 3, 2, 1, 2, 3, 4], 8);
        assert!(has_wiggle(&a, WiggleQuery::new(0, 4).unwrap()));
        let b = it(&[0, 1, 2, 3, 4], 8);
        assert!(!has_wiggle(&b, WiggleQuery::new(0, 4).unwrap()));
        let c = it(&[5, 6, 7], 8);
        assert!(has_wiggle(&c, WiggleQuery::new(0, 4).unwrap()));
    }

    #[test]
    fn crooked_examples() {
        assert!(crooked_failures(&it(&[0, 1, 2], 4)).is_empty());
        assert!(!crooked_failures(&it(&[0, 1, 2, 3, 4], 8)).is_empty());
        let pattern = crooked_pattern(5);
        let p = it(&pattern, 8);
        assert!(crooked_failures(&p).is_empty(), "generator output not crooked: {pattern:?}");
        // and the generator agrees with the brute-force oracle pairwise
        for j0 in 0..=5 {
            for j1 in j0 + 3..=5 {
                assert_eq!(
                    has_wiggle(&p, WiggleQuery::new(j0, j1).unwrap()),
                    brute_force_wiggle(&pattern, j0, j1)
                );
            }
        }
    }

    #[test]
    fn agrees_with_brute_force_on_random_walks() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..500 {
            let len = rng.gen_range(3..=60);
            let mut seq = vec![0i64];
            for _ in 1..len {
                let step = if rng.gen_bool(0.5) { 1 } else { -1 };
                seq.push(seq.last().unwrap() + step);
            }
            let itin = it(&seq, 64);
            let lo = *seq.iter().min().unwrap();
            let hi = *seq.iter().max().unwrap();
            for j0 in lo..=hi {
                for j1 in j0 + 3..=hi {
                    let q = WiggleQuery::new(j0, j1).unwrap();
                    assert_eq!(
                        has_wiggle(&itin, q),
                        brute_force_wiggle(&seq, j0, j1),
                        "mismatch on {seq:?} at ({j0}, {j1})"
                    );
                }
            }
        }
    }

    #[test]
    fn invariance_under_reversal_and_translation() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let len = rng.gen_range(5..=40);
            let mut seq = vec![0i64];
            for _ in 1..len {
                seq.push(seq.last().unwrap() + if rng.gen_bool(0.5) { 1 } else { -1 });
            }
            let shift = rng.gen_range(-20i64..20);
            let lo = *seq.iter().min().unwrap();
            let hi = *seq.iter().max().unwrap();
            for j0 in lo..=hi {
                for j1 in j0 + 3..=hi {
                    let base = has_wiggle(&it(&seq, 64), WiggleQuery { j0, j1 });
                    let rev: Vec<i64> = seq.iter().rev().copied().collect();
                    assert_eq!(base, has_wiggle(&it(&rev, 64), WiggleQuery { j0, j1 }));
                    let shifted: Vec<i64> = seq.iter().map(|v| v + shift).collect();
                    assert_eq!(
                        base,
                        has_wiggle(
                            &it(&shifted, 64),
                            WiggleQuery { j0: j0 + shift, j1: j1 + shift }
                        )
                    );
                }
            }
        }
    }

    #[test]
    fn crookedness_survives_trimming_extreme_indices() {
        // removing a prefix/suffix that deletes occurrences of extreme
        // indices never makes a previously vacuous pair fail
        let pattern = crooked_pattern(5);
        let trimmed = &pattern[1..pattern.len() - 1];
        assert!(crooked_failures(&it(trimmed, 8)).is_empty());
    }

    #[test]
    fn pattern_growth_roughly_triples() {
        // steps(span w+1) ≥ 2·steps(span w) + 2
        let mut prev = crooked_pattern(3).len() - 1;
        for span in 4..=9 {
            let len = crooked_pattern(span).len() - 1;
            assert!(len >= 2 * prev + 2, "span {span}: {len} < 2·{prev} + 2");
            prev = len;
        }
    }

    #[test]
    fn minimal_crooked_span_pattern_lengths() {
        // exhaustive: shortest crooked ±1 path from 0 to `span`
        fn minimal_len(span: i64, cap: usize) -> Option<usize> {
            fn rec(seq: &mut Vec<i64>, span: i64, budget: usize) -> bool {
                let &last = seq.last().unwrap();
                if last == span && crooked_failures(&Itinerary { indices: seq.clone(), modulus: 64 }).is_empty() {
                    return true;
                }
                if budget == 0 {
                    return false;
                }
                for step in [1i64, -1] {
                    let next = last + step;
                    if next < 0 || next > span {
                        continue;
                    }
                    // cannot reach span in the remaining budget
                    if (span - next).unsigned_abs() as usize > budget - 1 {
                        continue;
                    }
                    seq.push(next);
                    if rec(seq, span, budget - 1) {
                        return true;
                    }
                    seq.pop();
                }
                false
            }
            for steps in 1..=cap {
                let mut seq = vec![0i64];
                if rec(&mut seq, span, steps) {
                    return Some(steps);
                }
            }
            None
        }
        assert_eq!(minimal_len(3, 8), Some(5));
        let l4 = minimal_len(4, 14).unwrap();
        assert!(l4 >= 2 * 5 + 2, "minimal span-5 pattern has {l4} steps");
    }
}
