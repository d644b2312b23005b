//! Shared fixtures for the benchmark suite.

use bdmbt_core::{CnfFormula, Graph};

/// A satisfiable 3-variable, 3-clause formula.
pub fn demo_formula() -> CnfFormula {
    CnfFormula::new(3, vec![vec![1, 2, 3], vec![-1, -2], vec![2, -3]])
        .expect("fixture formula is well-formed")
}

/// Random connected graph: a random attachment tree plus extra edges.
pub fn random_connected(n: usize, extra: usize, seed: u64) -> Graph {
    // Tiny deterministic LCG; benches only need variety, not quality.
    let mut state = seed.wrapping_mul(2862933555777941757).wrapping_add(3037000493);
    let mut next = move |bound: usize| {
        state = state.wrapping_mul(2862933555777941757).wrapping_add(3037000493);
        ((state >> 33) as usize) % bound
    };
    let mut edges: Vec<(usize, usize)> = (1..n).map(|v| (next(v), v)).collect();
    for _ in 0..extra {
        let u = next(n);
        let v = next(n);
        if u != v {
            edges.push((u.min(v), u.max(v)));
        }
    }
    Graph::new(n, &edges).expect("generated edges are valid")
}
