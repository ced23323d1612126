//! Seeded fixtures shared by the benchmarks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use zec_core::distinguishability::ConfusabilityGraph;
use zec_core::random::{planted_channel, random_channel};
use zec_core::{ComplexMatrix, KrausChannel};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Haar-random Stinespring channel.
pub fn channel(seed: u64, d: usize, kappa: usize) -> KrausChannel {
    random_channel(d, kappa, &mut rng(seed))
}

/// Channel with `planted` common eigenvectors, so the search has work to do.
pub fn planted(seed: u64, d: usize, kappa: usize, planted: usize) -> KrausChannel {
    planted_channel(d, kappa, planted, &mut rng(seed)).0
}

pub fn matrix(seed: u64, d: usize) -> ComplexMatrix {
    zec_core::random::ginibre(d, d, &mut rng(seed))
}

/// Erdos-Renyi graph with edge probability `p`.
pub fn graph(seed: u64, n: usize, p: f64) -> ConfusabilityGraph {
    let mut r = rng(seed);
    let edges: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .filter(|_| r.random_bool(p))
        .collect();
    ConfusabilityGraph::from_edges(n, edges)
}
