//! Inputs shared by the pipeline benchmarks.

use vecpart_core::{root_system, IntVector};

/// Root systems small enough for repeated timing of the full pipeline.
pub const SMALL: [&str; 5] = ["A2", "B2", "C2", "G2", "A3"];

/// Root systems used for chamber-complex timings.
pub const CHAMBERS: [&str; 4] = ["A3", "B3", "C3", "A4"];

/// Positive roots of a named root system.
pub fn roots(name: &str) -> Vec<IntVector> {
    root_system(name).expect("known root system")
}

/// Every point of [0, hi]^n.
pub fn grid(n: usize, hi: i64) -> Vec<IntVector> {
    let mut out: Vec<IntVector> = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|p| {
                (0..=hi).map(move |x| {
                    let mut q = p.clone();
                    q.push(x.into());
                    q
                })
            })
            .collect();
    }
    out
}
