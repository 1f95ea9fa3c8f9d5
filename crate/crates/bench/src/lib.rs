//! Fixed polytopes for the benchmarks.

use hstar::harness::{reference_examples, CorpusConfig};
use hstar::polytope::Polytope;

pub fn reference(name: &str) -> Polytope {
    reference_examples()
        .into_iter()
        .find(|e| e.name == name)
        .unwrap_or_else(|| panic!("no reference example {name}"))
        .polytope()
        .expect("reference examples are valid")
}

/// `conv(0, e₁, …, e_{d−1}, (1, …, 1, v))`: degree grows with `v`.
pub fn tall_simplex(d: usize, v: i64) -> Polytope {
    let mut pts = vec![vec![0i64; d]];
    for i in 0..d - 1 {
        let mut e = vec![0i64; d];
        e[i] = 1;
        pts.push(e);
    }
    let mut last = vec![1i64; d];
    last[d - 1] = v;
    pts.push(last);
    Polytope::from_i64(&pts).expect("full-dimensional simplex")
}

/// The square `[0, s]²`.
pub fn square(s: i64) -> Polytope {
    Polytope::from_i64(&[[0, 0], [s, 0], [0, s], [s, s]]).expect("square")
}

pub fn small_corpus(count: usize) -> CorpusConfig {
    CorpusConfig {
        seed: 11,
        count,
        dim_min: 2,
        dim_max: 3,
        entry_bound: 4,
        ..CorpusConfig::default()
    }
}
