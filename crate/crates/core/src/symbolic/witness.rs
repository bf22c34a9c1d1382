//! Symbolic transitivity witnesses.

use super::angle::Symbol;
use super::coding::CodePrefix;

/// A shortest-style prefix containing every `{1, 2}`-word of length ≤ `l`
/// as a contiguous subword: a de Bruijn cycle of order `l`, linearized by
/// repeating its first `l − 1` symbols. The orbit of the midpoint of its
/// code interval visits all `2^l` depth-`l` cylinder intervals.
pub fn transitivity_witness(l: usize) -> CodePrefix {
    assert!(l >= 1);
    let cycle = de_bruijn_binary(l);
    let mut symbols: Vec<Symbol> = cycle
        .iter()
        .map(|&b| if b == 0 { Symbol::One } else { Symbol::Two })
        .collect();
    for i in 0..l - 1 {
        let s = symbols[i];
        symbols.push(s);
    }
    CodePrefix::new(symbols).expect("witness is nonempty")
}

/// Binary de Bruijn cycle of order `n` via the standard
/// Fredricksen–Kessler–Maiorana necklace concatenation.
fn de_bruijn_binary(n: usize) -> Vec<u8> {
    fn db(t: usize, p: usize, n: usize, a: &mut Vec<u8>, seq: &mut Vec<u8>) {
        if t > n {
            if n % p == 0 {
                seq.extend_from_slice(&a[1..=p]);
            }
        } else {
            a[t] = a[t - p];
            db(t + 1, p, n, a, seq);
            for j in (a[t - p] + 1)..2 {
                a[t] = j;
                db(t + 1, t, n, a, seq);
            }
        }
    }
    let mut a = vec![0u8; n + 1];
    let mut seq = Vec::with_capacity(1 << n);
    db(1, 1, n, &mut a, &mut seq);
    seq
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbolic::coding::{code_to_interval, g_itinerary_exact, ItineraryOutcome};

    fn contains_all_words(witness: &CodePrefix, l: usize) -> bool {
        let text = witness.to_string();
        for bits in 0..(1u32 << l) {
            let word: String =
                (0..l).map(|i| if bits >> i & 1 == 0 { '1' } else { '2' }).collect();
            if !text.contains(&word) {
                return false;
            }
        }
        true
    }

    #[test]
    fn small_witnesses() {
        let w1 = transitivity_witness(1);
        assert_eq!(w1.len(), 2);
        assert!(contains_all_words(&w1, 1));
        let w2 = transitivity_witness(2);
        assert!(w2.len() <= 5, "length {} exceeds overlap-merged bound", w2.len());
        assert!(contains_all_words(&w2, 2));
        // shorter words are covered too
        assert!(contains_all_words(&w2, 1));
    }

    #[test]
    fn midpoint_orbit_visits_all_depth2_cylinders() {
        let witness = transitivity_witness(2);
        let mut z = code_to_interval(&witness).midpoint();
        let mut seen = std::collections::HashSet::new();
        for _ in 0..witness.len() - 1 {
            match g_itinerary_exact(&z, 2) {
                ItineraryOutcome::Code(c) => {
                    seen.insert(c.to_string());
                }
                ItineraryOutcome::Escaped { step } => panic!("escaped at {step}"),
            }
            z = crate::symbolic::coding::apply_g_exact(&z);
        }
        assert_eq!(seen.len(), 4);
    }
}
