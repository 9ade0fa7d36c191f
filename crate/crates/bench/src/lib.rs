//! Fixtures shared by the benchmarks.

use knotarc_core::montesinos::family;
use knotarc_core::{build_diagram, Diagram};

/// The first member of family `theorem` with parameter `n`.
pub fn member(theorem: u8, n: u32) -> Diagram {
    build_diagram(&family(theorem, 0, n).expect("known family")).expect("buildable")
}

/// Closed braids of growing length on three strands, alternating generators.
pub fn braid_ladder(max_len: usize) -> Vec<Diagram> {
    (2..=max_len)
        .map(|len| {
            let word: Vec<i32> = (0..len).map(|i| if i % 2 == 0 { 1 } else { -2 }).collect();
            Diagram::braid_closure(3, &word).expect("valid braid")
        })
        .collect()
}
