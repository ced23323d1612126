mod common;

use common::*;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use zec_core::channel::{apply, apply_operator, channel_to_json, load_channel, Params, QuantumState};
use zec_core::codec::{build_code, transition_probabilities, verify_zero_error};
use zec_core::distinguishability::{independence_number, strong_product_graph, ConfusabilityGraph};
use zec_core::fixed_points::{fixed_space, orthogonal_pure_fixed_states, DEFAULT_FIXED_TOL, FIXED_POINT_TOL};
use zec_core::numerics::{hermitian_eigen, DEFAULT_CLUSTER_TOL};
use zec_core::random::{ginibre, planted_channel, random_channel, random_density_matrix};
use zec_core::report::{analyze, AnalysisOptions, AnalysisReport};
use zec_core::spectral::{common_eigenstate_count, find_common_eigenstates, verify_lemma1};
use zec_core::{CVector, Complex64, KrausChannel, Subspace};

fn config() -> ProptestConfig {
    ProptestConfig {
        cases: 48,
        ..ProptestConfig::default()
    }
}

/// `(seed, d, kappa)` with `kappa ≤ d²`.
fn shape() -> impl Strategy<Value = (u64, usize, usize)> {
    (any::<u64>(), 2usize..=5, 1usize..=4)
}

fn cell_vectors(ch: &KrausChannel) -> Vec<CVector> {
    find_common_eigenstates(ch, DEFAULT_CLUSTER_TOL)
        .unwrap()
        .iter()
        .flat_map(|c| c.vectors().iter().cloned())
        .collect()
}

fn graph_from_bits(n: usize, bits: &[bool]) -> ConfusabilityGraph {
    let pairs = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j)));
    ConfusabilityGraph::from_edges(n, pairs.zip(bits).filter(|(_, &b)| b).map(|(p, _)| p))
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn channel_output_is_a_state((seed, d, kappa) in shape()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ch = random_channel(d, kappa, &mut rng);
        let out = apply(&ch, &random_density_matrix(d, &mut rng)).unwrap();
        prop_assert!((out.trace() - 1.0).norm() <= 1e-10);
        prop_assert!(out.hermiticity_defect() <= 1e-12);
        let (values, _) = hermitian_eigen(&out.hermitian_part()).unwrap();
        prop_assert!(values.iter().all(|&v| v >= -1e-10));
    }

    #[test]
    fn channel_is_linear((seed, d, kappa) in shape(), a in -2.0f64..2.0, b in -2.0f64..2.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ch = random_channel(d, kappa, &mut rng);
        let x = ginibre(d, d, &mut rng);
        let y = ginibre(d, d, &mut rng);
        let (ca, cb) = (Complex64::new(a, 0.0), Complex64::new(0.0, b));
        let combined = apply_operator(&ch, &(&x.scale(ca) + &y.scale(cb))).unwrap();
        let separate = &apply_operator(&ch, &x).unwrap().scale(ca) + &apply_operator(&ch, &y).unwrap().scale(cb);
        prop_assert!((&combined - &separate).norm_max() <= 1e-12);
    }

    #[test]
    fn reported_vectors_are_common_eigenvectors((seed, d, kappa) in shape(), planted in 0usize..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ch = if planted == 0 {
            random_channel(d, kappa, &mut rng)
        } else {
            planted_channel(d, kappa, planted.min(d), &mut rng).0
        };
        for c in find_common_eigenstates(&ch, DEFAULT_CLUSTER_TOL).unwrap() {
            for v in c.vectors() {
                prop_assert!(eigen_residual(&ch, v) <= 1e-8);
                for (a, lambda) in ch.kraus().iter().zip(&c.eigenvalues) {
                    prop_assert!((rayleigh(a, v) - lambda).norm() <= 1e-8);
                }
            }
        }
    }

    #[test]
    fn kraus_order_does_not_change_the_eigenspace((seed, d, kappa) in shape(), planted in 1usize..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (ch, _) = planted_channel(d, kappa, planted.min(d), &mut rng);
        let mut ops = ch.kraus().to_vec();
        ops.shuffle(&mut rng);
        let shuffled = KrausChannel::new("shuffled", ops).unwrap();
        let a = cell_vectors(&ch);
        let b = cell_vectors(&shuffled);
        prop_assert_eq!(a.len(), b.len());
        let span_b = Subspace::span(d, &b, 1e-8);
        prop_assert!(a.iter().all(|v| span_b.distance(v) <= 1e-8));
    }

    #[test]
    fn planted_eigenvectors_are_recovered((seed, d, kappa) in shape(), planted in 1usize..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (ch, vs) = planted_channel(d, kappa, planted.min(d), &mut rng);
        let found = cell_vectors(&ch);
        prop_assert!(found.len() >= vs.len());
        let span = Subspace::span(d, &found, 1e-8);
        prop_assert!(vs.iter().all(|v| span.distance(v) <= 1e-8));
    }

    #[test]
    fn trace_preservation_normalizes_eigenvalues((seed, d, kappa) in shape(), planted in 1usize..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (ch, _) = planted_channel(d, kappa, planted.min(d), &mut rng);
        for c in find_common_eigenstates(&ch, DEFAULT_CLUSTER_TOL).unwrap() {
            prop_assert!((c.lambda_norm_sq - 1.0).abs() <= 1e-10);
            for verdict in verify_lemma1(&ch, &c, FIXED_POINT_TOL).unwrap() {
                prop_assert!(verdict.is_fixed_point);
            }
        }
    }

    #[test]
    fn fixed_space_basis_is_fixed_and_hermitian((seed, d, kappa) in shape()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ch = random_channel(d, kappa, &mut rng);
        let fixed = fixed_space(&ch, DEFAULT_FIXED_TOL).unwrap();
        prop_assert!(fixed.dimension >= 1);
        prop_assert_eq!(fixed.dimension, fixed.basis.len());
        for x in &fixed.basis {
            prop_assert!(x.hermiticity_defect() <= 1e-10);
            prop_assert!((&apply_operator(&ch, x).unwrap() - x).norm_fro() <= 1e-8);
        }
    }

    #[test]
    fn orthogonal_fixed_family_dominates_n_e((seed, d, kappa) in shape(), planted in 0usize..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ch = planted_channel(d, kappa, planted.min(d), &mut rng).0;
        let cells = find_common_eigenstates(&ch, DEFAULT_CLUSTER_TOL).unwrap();
        let fixed = fixed_space(&ch, DEFAULT_FIXED_TOL).unwrap();
        let family = orthogonal_pure_fixed_states(&ch, &fixed, &cells, FIXED_POINT_TOL).unwrap();
        prop_assert!(family.len() >= common_eigenstate_count(&cells));
        for (i, u) in family.iter().enumerate() {
            for w in &family[i + 1..] {
                let o: Complex64 = u.iter().zip(w).map(|(x, y)| x.conj() * y).sum();
                prop_assert!(o.norm() <= 1e-8);
            }
        }
    }

    #[test]
    fn independence_matches_exhaustive_search(n in 0usize..=20, bits in prop::collection::vec(any::<bool>(), 190)) {
        let g = graph_from_bits(n, &bits);
        let set = independence_number(&g).unwrap();
        prop_assert_eq!(set.alpha, brute_force_alpha(&g));
        prop_assert_eq!(set.vertices.len(), set.alpha);
        prop_assert!(g.is_independent(&set.vertices));
    }

    #[test]
    fn strong_square_is_supermultiplicative(n in 1usize..=6, bits in prop::collection::vec(any::<bool>(), 15)) {
        let g = graph_from_bits(n, &bits);
        let alpha = independence_number(&g).unwrap().alpha;
        let square = strong_product_graph(&g, 2).unwrap();
        prop_assert_eq!(square.len(), n * n);
        for i in 0..square.len() {
            for j in 0..square.len() {
                prop_assert_eq!(square.is_adjacent(i, j), square.is_adjacent(j, i));
            }
        }
        prop_assert!(independence_number(&square).unwrap().alpha >= alpha * alpha);
    }

    #[test]
    fn planted_codes_are_zero_error((seed, d, kappa) in shape(), planted in 2usize..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (ch, vs) = planted_channel(d, kappa, planted.min(d), &mut rng);
        let states: Vec<QuantumState> = vs.into_iter().map(QuantumState::Pure).collect();
        let code = build_code(&ch, &states, 1).unwrap();
        prop_assert!(code.povm_completeness_defect() <= 1e-10);
        prop_assert!(code.min_povm_eigenvalue().unwrap() >= -1e-10);
        let tm = transition_probabilities(&ch, &code).unwrap();
        prop_assert!(tm.max_row_defect() <= 1e-10);
        prop_assert!(tm.p.iter().flatten().all(|&p| (0.0..=1.0).contains(&p)));
        prop_assert!(verify_zero_error(&tm, &code.decoder));
    }

    #[test]
    fn report_json_round_trips_byte_for_byte((seed, d, kappa) in shape(), planted in 0usize..=2) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ch = planted_channel(d, kappa, planted.min(d), &mut rng).0;
        let loaded = load_channel(&channel_to_json(&ch), &Params::new()).unwrap();
        let report = analyze(&loaded, &AnalysisOptions::default()).unwrap();
        let json = report.to_json();
        prop_assert_eq!(&AnalysisReport::from_json(&json).unwrap().to_json(), &json);
        prop_assert_eq!(&analyze(&loaded, &AnalysisOptions::default()).unwrap().to_json(), &json);
    }
}
