mod common;

use common::*;
use zec_core::channel::{parse_states, validate_completeness, ChannelError, Params, ValidationTier, LENIENT_TOL, STRICT_TOL};
use zec_core::report::{analyze, simulate, AnalysisOptions, BoundSource, INVALID_BANNER, N_F_LABEL};
use zec_core::{Error, QuantumState};

fn states(name: &str) -> Vec<QuantumState> {
    let text = std::fs::read_to_string(data_path(&format!("states/{name}.json"))).unwrap();
    parse_states(&text, &Params::new()).unwrap()
}

fn allow_invalid() -> AnalysisOptions {
    AnalysisOptions {
        allow_invalid: true,
        ..AnalysisOptions::default()
    }
}

#[test]
fn every_channel_file_parses() {
    for entry in std::fs::read_dir(data_path("channels")).unwrap() {
        let path = entry.unwrap().path();
        let name = path.file_stem().unwrap().to_str().unwrap().to_string();
        let loaded = load(&name, &[]);
        assert_eq!(loaded.channel.name(), name);
    }
}

#[test]
fn reflection_pair_certifies_one_bit_across_parameters() {
    for p in [0.1, 0.25, 0.5, 0.9] {
        let loaded = load("reflection_pair", &[("p", p)]);
        assert_eq!(loaded.params["p"], p);
        let r = analyze(&loaded, &AnalysisOptions::default()).unwrap();
        assert_eq!(r.validation.tier, ValidationTier::Strict);
        assert!(r.banner.is_none());
        assert_eq!(r.spectral.n_e, 2);
        assert_eq!(r.fixed_space.report.dimension, 5);
        assert_eq!(r.certified.as_ref().unwrap().bits, 1.0);
        assert!(r.discrepancies.is_empty(), "{:?}", r.discrepancies);
        let code = r.code.unwrap();
        assert!(code.zero_error);
        assert_eq!(code.rate, 1.0);
    }
}

#[test]
fn reflection_pair_basis_scan_is_reported_but_not_certified() {
    let r = analyze(&load("reflection_pair", &[("p", 0.25)]), &AnalysisOptions::default()).unwrap();
    assert_eq!(r.basis_scan.alpha, 3);
    assert_eq!(r.basis_scan.independent_set, vec![0, 1, 3]);
    assert!(r.notes.iter().any(|n| n.contains("--states")));
    assert_eq!(r.certified.unwrap().bits, 1.0);
}

#[test]
fn reflection_pair_graph_over_basis_states_beats_the_eigenstate_bound() {
    let opts = AnalysisOptions {
        states: Some(states("basis4")),
        ..AnalysisOptions::default()
    };
    let r = analyze(&load("reflection_pair", &[("p", 0.25)]), &opts).unwrap();
    let g = r.graph.unwrap();
    assert_eq!(g.alpha, 3);
    let c = r.certified.unwrap();
    assert_eq!(c.source, BoundSource::IndependentSet);
    assert_eq!(c.bits, 3f64.log2());
}

#[test]
fn five_level_decay_has_four_witnesses() {
    let r = analyze(&load("five_level_decay", &[]), &AnalysisOptions::default()).unwrap();
    assert_eq!(r.spectral.n_e, 4);
    assert!(r.spectral.fixed_point_verified.iter().all(|&f| f));
    assert!(r.spectral.cells_orthogonal);
    assert_eq!(r.fixed_space.label, N_F_LABEL);
    assert_eq!(r.fixed_space.report.orthogonal_pure_fixed_count, 4);
    let c = r.certified.unwrap();
    assert_eq!(c.bits, 2.0);
    assert_eq!(c.witness_count, 4);
    assert!(r.discrepancies.is_empty());
}

#[test]
fn five_level_decay_graph_over_basis_states() {
    let opts = AnalysisOptions {
        states: Some(states("basis5")),
        ..AnalysisOptions::default()
    };
    let r = analyze(&load("five_level_decay", &[]), &opts).unwrap();
    let g = r.graph.unwrap();
    assert!(g.adjacency[0][4]);
    assert_eq!(g.alpha, 4);
    assert_eq!(r.certified.unwrap().bits, 2.0);
}

#[test]
fn no_common_eigenstate_fails_validation_and_reports_the_discrepancy() {
    let loaded = load("no_common_eigenstate", &[]);
    let strict = validate_completeness(&loaded.channel, STRICT_TOL);
    let lenient = validate_completeness(&loaded.channel, LENIENT_TOL);
    assert!(!strict.passed);
    assert!(!lenient.passed);
    assert_eq!(lenient.worst_entry, (0, 4));
    assert!((lenient.max_residual - 49902f64.sqrt() / 620.0).abs() < 1e-12);

    match analyze(&loaded, &AnalysisOptions::default()) {
        Err(Error::Channel(ChannelError::NotCptp { .. })) => {}
        other => panic!("expected NotCptp, got {other:?}"),
    }
    let r = analyze(&loaded, &allow_invalid()).unwrap();
    assert_eq!(r.banner.as_deref(), Some(INVALID_BANNER));
    assert!(r.certified.is_none());
    assert_eq!(r.spectral.n_e, 0);
    let items: Vec<&str> = r.discrepancies.iter().map(|d| d.item.as_str()).collect();
    assert!(items.contains(&"completeness"));
    assert!(items.contains(&"positive capacity"));
    assert!(r.discrepancies.iter().any(|d| d.note.contains("rounded")));
}

#[test]
fn rank_deficient_pair_is_analyzed_only_with_override() {
    let loaded = load("rank_deficient_pair", &[]);
    assert!(analyze(&loaded, &AnalysisOptions::default()).is_err());
    let r = analyze(&loaded, &allow_invalid()).unwrap();
    assert_eq!(r.validation.worst_entry, (1, 1));
    assert_eq!(r.validation.max_residual, 1.0);
    assert_eq!(r.spectral.n_e, 3);
    assert_eq!(r.spectral.fixed_point_verified.iter().filter(|&&f| !f).count(), 1);
    assert!(r.certified.is_none());
    assert!(r.banner.is_some());
}

#[test]
fn pentagon_needs_two_letters_for_five_messages() {
    let loaded = load("pentagon", &[]);
    let one = AnalysisOptions {
        states: Some(states("basis5")),
        ..AnalysisOptions::default()
    };
    let r1 = analyze(&loaded, &one).unwrap();
    assert_eq!(r1.graph.unwrap().alpha, 2);
    let two = AnalysisOptions { block_length: 2, ..one };
    let r2 = analyze(&loaded, &two).unwrap();
    let g = r2.graph.unwrap();
    assert_eq!(g.alpha, 5);
    assert_eq!(g.product_vertices, 25);
    assert!((g.rate - 0.5 * 5f64.log2()).abs() <= 1e-12);
}

#[test]
fn identity_channels_certify_log_d() {
    for (name, d) in [("identity2", 2usize), ("identity3", 3)] {
        let r = analyze(&load(name, &[]), &AnalysisOptions::default()).unwrap();
        assert_eq!(r.spectral.n_e, d);
        assert_eq!(r.certified.unwrap().bits, (d as f64).log2());
        assert_eq!(r.fixed_space.report.dimension, d * d);
    }
}

#[test]
fn completely_depolarizing_channel_has_no_bound() {
    let r = analyze(&load("completely_depolarizing", &[]), &AnalysisOptions::default()).unwrap();
    assert_eq!(r.spectral.n_e, 0);
    assert_eq!(r.fixed_space.report.dimension, 1);
    assert_eq!(r.fixed_space.report.orthogonal_pure_fixed_count, 0);
    assert!(r.certified.is_none());
    assert!(simulate(&load("completely_depolarizing", &[]), &AnalysisOptions::default(), None).is_err());
}

#[test]
fn reflection_pair_two_letter_code_is_zero_error() {
    let opts = AnalysisOptions {
        block_length: 2,
        ..AnalysisOptions::default()
    };
    let code = simulate(&load("reflection_pair", &[("p", 0.5)]), &opts, None).unwrap();
    assert_eq!((code.m, code.n), (2, 2));
    assert!(code.zero_error);
    assert_eq!(code.rate, 0.5);
    assert!(code.max_row_defect <= 1e-12);
}

#[test]
fn reports_are_deterministic() {
    let loaded = load("five_level_decay", &[]);
    let a = analyze(&loaded, &AnalysisOptions::default()).unwrap().to_json();
    let b = analyze(&loaded, &AnalysisOptions::default()).unwrap().to_json();
    assert_eq!(a, b);
}
