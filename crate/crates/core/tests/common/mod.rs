#![allow(dead_code)]

use std::path::PathBuf;

use zec_core::channel::{load_channel, LoadedChannel, Params};
use zec_core::distinguishability::ConfusabilityGraph;
use zec_core::{CVector, Complex64, ComplexMatrix, KrausChannel};

pub fn data_path(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(rel)
}

pub fn load(name: &str, params: &[(&str, f64)]) -> LoadedChannel {
    let text = std::fs::read_to_string(data_path(&format!("channels/{name}.json"))).expect("corpus file");
    let over: Params = params.iter().map(|(k, v)| (k.to_string(), *v)).collect();
    load_channel(&text, &over).expect("corpus parses")
}

pub fn real_vector(xs: &[f64]) -> CVector {
    let n = xs.iter().map(|x| x * x).sum::<f64>().sqrt();
    xs.iter().map(|x| Complex64::new(x / n, 0.0)).collect()
}

pub fn e(d: usize, k: usize) -> CVector {
    let mut v = vec![Complex64::new(0.0, 0.0); d];
    v[k] = Complex64::new(1.0, 0.0);
    v
}

/// `Σ A_i†A_i − I` with explicit index loops.
pub fn completeness_oracle(ch: &KrausChannel) -> Vec<Vec<Complex64>> {
    let d = ch.dim();
    let mut s = vec![vec![Complex64::new(0.0, 0.0); d]; d];
    for a in ch.kraus() {
        for r in 0..d {
            for c in 0..d {
                for k in 0..d {
                    s[r][c] += a[(k, r)].conj() * a[(k, c)];
                }
            }
        }
    }
    for (r, row) in s.iter_mut().enumerate() {
        row[r] -= 1.0;
    }
    s
}

/// `max_i ‖A_i v − ⟨v|A_i|v⟩ v‖`, zero exactly for common eigenvectors.
pub fn eigen_residual(ch: &KrausChannel, v: &[Complex64]) -> f64 {
    ch.kraus()
        .iter()
        .map(|a| {
            let av = a.mul_vec(v);
            let lambda: Complex64 = v.iter().zip(&av).map(|(x, y)| x.conj() * y).sum();
            av.iter().zip(v).map(|(y, x)| (y - lambda * x).norm_sqr()).sum::<f64>().sqrt()
        })
        .fold(0.0, f64::max)
}

/// `⟨v|A|v⟩`
pub fn rayleigh(a: &ComplexMatrix, v: &[Complex64]) -> Complex64 {
    v.iter().zip(a.mul_vec(v)).map(|(x, y)| x.conj() * y).sum()
}

/// Largest independent set by enumerating every vertex subset.
pub fn brute_force_alpha(g: &ConfusabilityGraph) -> usize {
    let n = g.len();
    assert!(n <= 20);
    let mut best = 0;
    for mask in 0u32..(1 << n) {
        let size = mask.count_ones() as usize;
        if size <= best {
            continue;
        }
        let independent = (0..n).all(|i| mask & (1 << i) == 0 || (i + 1..n).all(|j| mask & (1 << j) == 0 || !g.is_adjacent(i, j)));
        if independent {
            best = size;
        }
    }
    best
}

/// Largest independent set by depth-first enumeration of all independent sets, no pruning.
pub fn enumerate_alpha(g: &ConfusabilityGraph) -> usize {
    fn go(g: &ConfusabilityGraph, next: usize, chosen: &mut Vec<usize>, best: &mut usize) {
        *best = (*best).max(chosen.len());
        for v in next..g.len() {
            if chosen.iter().all(|&u| !g.is_adjacent(u, v)) {
                chosen.push(v);
                go(g, v + 1, chosen, best);
                chosen.pop();
            }
        }
    }
    let mut best = 0;
    go(g, 0, &mut Vec::new(), &mut best);
    best
}

pub fn pentagon() -> ConfusabilityGraph {
    ConfusabilityGraph::from_edges(5, (0..5).map(|i| (i, (i + 1) % 5)))
}
