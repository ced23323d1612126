//! The analysis pipeline and its serializable report.
//!
//! The report is a pure function of its inputs: it holds no timestamps or
//! hash-ordered maps, and every float survives a JSON round trip, so
//! re-serializing a parsed report reproduces it byte for byte.

use serde::{Deserialize, Serialize};

use crate::channel::{
    validate_completeness, ChannelError, Claims, KrausChannel, LoadedChannel, Params, QuantumState, ValidationReport, ValidationTier,
    LENIENT_TOL,
};
use crate::codec::{
    build_code, max_error_probability, transition_probabilities, verify_zero_error, CodeError, TransitionMatrix, ZeroErrorCode,
};
use crate::distinguishability::{
    basis_pair_scan, confusability_graph, independence_number, n_shot_bound, strong_product_graph, ConfusabilityGraph,
};
use crate::fixed_points::{fixed_space_report, FixedSpaceReport, DEFAULT_FIXED_TOL, FIXED_POINT_TOL};
use crate::numerics::{CVector, DEFAULT_CLUSTER_TOL};
use crate::spectral::{spectral_report, SpectralReport};
use crate::Error;

pub const SCHEMA_VERSION: u32 = 1;

pub const INVALID_BANNER: &str = "NOT A VALID CHANNEL: completeness fails, no capacity bound is certified";
pub const LENIENT_BANNER: &str = "completeness holds only at the lenient tolerance";
pub const N_F_LABEL: &str = "N_f (orthogonal pure, lower bound)";

#[derive(Debug, Clone, PartialEq)]
pub struct AnalysisOptions {
    /// Completeness tolerance; the channel must meet it unless `allow_invalid`.
    pub validation_tol: f64,
    pub eig_tol: f64,
    pub fixed_tol: f64,
    pub allow_invalid: bool,
    /// Input states for the confusability graph.
    pub states: Option<Vec<QuantumState>>,
    pub block_length: usize,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        Self {
            validation_tol: LENIENT_TOL,
            eig_tol: DEFAULT_CLUSTER_TOL,
            fixed_tol: DEFAULT_FIXED_TOL,
            allow_invalid: false,
            states: None,
            block_length: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChannelInfo {
    pub name: String,
    pub dim: usize,
    pub kappa: usize,
    pub params: Params,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundSource {
    CommonEigenstates,
    OrthogonalPureFixedStates,
    IndependentSet,
    VerifiedCode,
}

/// One lower bound with the witnesses that reproduce it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundEntry {
    pub source: BoundSource,
    pub count: usize,
    pub block_length: usize,
    pub bits: f64,
    pub trivial: bool,
    /// Witness codewords as indices into `witness_states`, one per letter.
    pub witness_words: Vec<Vec<usize>>,
    pub witness_states: Vec<QuantumState>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertifiedBound {
    pub bits: f64,
    pub source: BoundSource,
    pub witness_count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FixedSection {
    pub label: String,
    #[serde(flatten)]
    pub report: FixedSpaceReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphSection {
    pub vertices: usize,
    /// Single-letter adjacency over the supplied states.
    pub adjacency: Vec<Vec<bool>>,
    pub block_length: usize,
    pub product_vertices: usize,
    pub alpha: usize,
    /// Maximum independent set of the block graph, as words over the states.
    pub independent_words: Vec<Vec<usize>>,
    pub rate: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CodeSection {
    pub m: usize,
    pub n: usize,
    /// `m` support projectors plus the completion, which is the last outcome.
    pub outcomes_per_letter: usize,
    pub code: ZeroErrorCode,
    pub transition: TransitionMatrix,
    pub max_error: f64,
    pub zero_error: bool,
    pub rate: f64,
    pub povm_completeness_defect: f64,
    pub min_povm_eigenvalue: f64,
    pub max_row_defect: f64,
}

/// Computational basis pairs that pass the span test, and the largest
/// pairwise non-adjacent set of basis states.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BasisScan {
    pub non_adjacent_pairs: Vec<(usize, usize)>,
    pub alpha: usize,
    pub independent_set: Vec<usize>,
    pub note: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Discrepancy {
    pub item: String,
    pub claimed: String,
    pub computed: String,
    pub note: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub schema: u32,
    pub channel: ChannelInfo,
    pub validation: ValidationReport,
    pub banner: Option<String>,
    pub spectral: SpectralReport,
    pub fixed_space: FixedSection,
    pub basis_scan: BasisScan,
    pub graph: Option<GraphSection>,
    pub code: Option<CodeSection>,
    pub bounds: Vec<BoundEntry>,
    /// Absent for channels that failed validation.
    pub certified: Option<CertifiedBound>,
    pub claimed: Option<Claims>,
    pub discrepancies: Vec<Discrepancy>,
    pub notes: Vec<String>,
}

impl AnalysisReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report values are finite")
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }
}

/// Validates `loaded.channel` at `tol`, or overrides the failure when allowed.
pub fn prepare_channel(loaded: &LoadedChannel, tol: f64, allow_invalid: bool) -> Result<(KrausChannel, ValidationReport), ChannelError> {
    let mut ch = loaded.channel.clone();
    let validation = validate_completeness(&ch, tol);
    if validation.passed {
        ch.mark_validated(&validation)?;
    } else if allow_invalid {
        ch.override_validation();
    } else {
        return Err(ChannelError::NotCptp {
            residual: validation.max_residual,
            tolerance: tol,
        });
    }
    Ok((ch, validation))
}

/// Runs validation, the common-eigenstate search with per-vector fixed-point
/// checks, the fixed space, the optional graph, and a code over the best pure
/// witness family.
pub fn analyze(loaded: &LoadedChannel, opts: &AnalysisOptions) -> Result<AnalysisReport, Error> {
    let (ch, validation) = prepare_channel(loaded, opts.validation_tol, opts.allow_invalid)?;
    let valid = validation.passed;
    let mut notes = Vec::new();

    let spectral = spectral_report(&ch, opts.eig_tol, FIXED_POINT_TOL)?;
    if spectral.capacity_lower_bound.trivial {
        notes.push(format!("n_E = {}: no bound from common eigenstates", spectral.n_e));
    }
    let fixed = fixed_space_report(&ch, &spectral.cells, opts.fixed_tol)?;
    if fixed.orthogonal_pure_fixed_count > spectral.n_e {
        notes.push(format!(
            "{} pure fixed states found beyond the common eigenstates",
            fixed.orthogonal_pure_fixed_count - spectral.n_e
        ));
    }

    let basis_scan = scan_basis(&ch)?;

    let mut bounds = vec![
        pure_family_bound(
            BoundSource::CommonEigenstates,
            spectral.cells.iter().flat_map(|c| c.vectors().iter().cloned()).collect(),
        ),
        pure_family_bound(BoundSource::OrthogonalPureFixedStates, fixed.orthogonal_pure_fixed_states.clone()),
    ];

    let graph = match &opts.states {
        Some(states) => {
            let (section, entry) = graph_section(&ch, states, opts.block_length)?;
            bounds.push(entry);
            Some(section)
        }
        None => None,
    };

    let witnesses: Vec<QuantumState> = fixed
        .orthogonal_pure_fixed_states
        .iter()
        .map(|v| QuantumState::Pure(v.clone()))
        .collect();
    let code = if witnesses.len() >= 2 {
        let section = code_section(&ch, &witnesses, 1)?;
        if section.zero_error {
            bounds.push(BoundEntry {
                source: BoundSource::VerifiedCode,
                count: section.m,
                block_length: section.n,
                bits: section.rate,
                trivial: false,
                witness_words: section.code.encoder.clone(),
                witness_states: witnesses,
            });
        } else {
            notes.push(format!(
                "code over the fixed-state witnesses is not zero-error (max error {:.3e})",
                section.max_error
            ));
        }
        Some(section)
    } else {
        None
    };

    let certified = if valid {
        bounds
            .iter()
            .filter(|b| !b.trivial)
            .fold(None::<&BoundEntry>, |best, b| match best {
                Some(x) if x.bits >= b.bits => Some(x),
                _ => Some(b),
            })
            .map(|b| CertifiedBound {
                bits: b.bits,
                source: b.source,
                witness_count: b.witness_words.len(),
            })
    } else {
        None
    };

    let certified_bits = certified.as_ref().map_or(0.0, |c| c.bits);
    if valid && opts.states.is_none() && basis_scan.alpha >= 2 && n_shot_bound(basis_scan.alpha, 1) > certified_bits {
        notes.push(format!(
            "computational basis scan finds {} mutually non-adjacent basis states; pass them with --states to certify through the confusability graph",
            basis_scan.alpha
        ));
    }

    let banner = if !valid {
        Some(INVALID_BANNER.to_string())
    } else if validation.tier == ValidationTier::Lenient {
        Some(LENIENT_BANNER.to_string())
    } else {
        None
    };
    if !spectral.cells_orthogonal {
        notes.push("common-eigenstate cells with distinct tuples are not orthogonal".into());
    }

    let discrepancies = discrepancies(loaded.claimed.as_ref(), &validation, &spectral, certified.as_ref(), &basis_scan);
    Ok(AnalysisReport {
        schema: SCHEMA_VERSION,
        channel: ChannelInfo {
            name: ch.name().to_string(),
            dim: ch.dim(),
            kappa: ch.kappa(),
            params: loaded.params.clone(),
        },
        validation,
        banner,
        spectral,
        fixed_space: FixedSection {
            label: N_F_LABEL.into(),
            report: fixed,
        },
        basis_scan,
        graph,
        code,
        bounds,
        certified,
        claimed: loaded.claimed.clone(),
        discrepancies,
        notes,
    })
}

fn scan_basis(ch: &KrausChannel) -> Result<BasisScan, Error> {
    let d = ch.dim();
    let pairs = basis_pair_scan(ch)?;
    let edges = (0..d).flat_map(|a| (a + 1..d).map(move |b| (a, b))).filter(|e| !pairs.contains(e));
    let set = independence_number(&ConfusabilityGraph::from_edges(d, edges))?;
    Ok(BasisScan {
        note: if pairs.is_empty() {
            "no non-adjacent pair in scanned family".into()
        } else {
            format!(
                "{} non-adjacent computational basis pairs, largest non-adjacent basis set has {} states",
                pairs.len(),
                set.alpha
            )
        },
        non_adjacent_pairs: pairs,
        alpha: set.alpha,
        independent_set: set.vertices,
    })
}

fn pure_family_bound(source: BoundSource, vectors: Vec<CVector>) -> BoundEntry {
    let count = vectors.len();
    let bits = crate::spectral::CapacityBound::from_count(count);
    BoundEntry {
        source,
        count,
        block_length: 1,
        bits: bits.bits,
        trivial: bits.trivial,
        witness_words: (0..count).map(|i| vec![i]).collect(),
        witness_states: vectors.into_iter().map(QuantumState::Pure).collect(),
    }
}

/// Confusability graph over `states`, its `n`-fold strong product and the
/// exact independence number.
pub fn graph_section(ch: &KrausChannel, states: &[QuantumState], n: usize) -> Result<(GraphSection, BoundEntry), Error> {
    let g = confusability_graph(ch, states)?;
    let product = if n == 1 { g.clone() } else { strong_product_graph(&g, n)? };
    let set = independence_number(&product)?;
    let words: Vec<Vec<usize>> = set.vertices.iter().map(|&v| product.words[v].clone()).collect();
    let rate = n_shot_bound(set.alpha.max(1), n);
    let section = GraphSection {
        vertices: g.len(),
        adjacency: g.adjacency.clone(),
        block_length: n,
        product_vertices: product.len(),
        alpha: set.alpha,
        independent_words: words.clone(),
        rate,
    };
    let entry = BoundEntry {
        source: BoundSource::IndependentSet,
        count: set.alpha,
        block_length: n,
        bits: rate,
        trivial: set.alpha <= 1,
        witness_words: words,
        witness_states: states.to_vec(),
    };
    Ok((section, entry))
}

/// Builds the `(m, n)` repetition code over `codewords`, evaluates its
/// transition matrix and checks zero error.
pub fn code_section(ch: &KrausChannel, codewords: &[QuantumState], n: usize) -> Result<CodeSection, Error> {
    let code: ZeroErrorCode = build_code(ch, codewords, n)?;
    let transition = transition_probabilities(ch, &code)?;
    let max_error = max_error_probability(&transition, &code.decoder);
    Ok(CodeSection {
        m: code.m,
        n: code.n,
        outcomes_per_letter: code.povm.len(),
        zero_error: verify_zero_error(&transition, &code.decoder),
        rate: code.rate(),
        povm_completeness_defect: code.povm_completeness_defect(),
        min_povm_eigenvalue: code.min_povm_eigenvalue()?,
        max_row_defect: transition.max_row_defect(),
        max_error,
        transition,
        code,
    })
}

/// Simulates a code over the first `messages` orthogonal pure fixed states
/// (all of them when `None`).
pub fn simulate(loaded: &LoadedChannel, opts: &AnalysisOptions, messages: Option<usize>) -> Result<CodeSection, Error> {
    let (ch, _) = prepare_channel(loaded, opts.validation_tol, opts.allow_invalid)?;
    let spectral = spectral_report(&ch, opts.eig_tol, FIXED_POINT_TOL)?;
    let fixed = fixed_space_report(&ch, &spectral.cells, opts.fixed_tol)?;
    let available = fixed.orthogonal_pure_fixed_states.len();
    let m = messages.unwrap_or(available);
    if available < 2 || m > available || m < 2 {
        return Err(CodeError::NoWitness { available }.into());
    }
    let codewords: Vec<QuantumState> = fixed.orthogonal_pure_fixed_states[..m]
        .iter()
        .map(|v| QuantumState::Pure(v.clone()))
        .collect();
    code_section(&ch, &codewords, opts.block_length)
}

fn discrepancies(
    claims: Option<&Claims>,
    validation: &ValidationReport,
    spectral: &SpectralReport,
    certified: Option<&CertifiedBound>,
    scan: &BasisScan,
) -> Vec<Discrepancy> {
    let Some(claims) = claims else {
        return Vec::new();
    };
    let mut out = Vec::new();
    let (r, c) = validation.worst_entry;
    match validation.tier {
        ValidationTier::Strict => {}
        ValidationTier::Lenient => out.push(Discrepancy {
            item: "completeness".into(),
            claimed: "sum of A_i^dag A_i = I".into(),
            computed: format!("max residual {:.3e} at entry ({}, {})", validation.max_residual, r + 1, c + 1),
            note: "holds only to the precision of the decimal entries".into(),
        }),
        ValidationTier::Failed => out.push(Discrepancy {
            item: "completeness".into(),
            claimed: "sum of A_i^dag A_i = I".into(),
            computed: format!("max residual {:.3e} at entry ({}, {})", validation.max_residual, r + 1, c + 1),
            note: "the Kraus set is not trace preserving; downstream results are not certificates".into(),
        }),
    }
    if let Some(n) = claims.common_eigenstates {
        if n != spectral.n_e {
            out.push(Discrepancy {
                item: "common eigenstates".into(),
                claimed: n.to_string(),
                computed: spectral.n_e.to_string(),
                note: String::new(),
            });
        }
    }
    if let Some(bits) = claims.capacity_bound_bits {
        let computed = certified.map(|c| c.bits);
        if computed.is_none_or(|b| (b - bits).abs() > 1e-12) {
            out.push(Discrepancy {
                item: "capacity lower bound".into(),
                claimed: format!("{bits}"),
                computed: computed.map_or("none certified".into(), |b| format!("{b}")),
                note: String::new(),
            });
        }
    }
    if claims.positive_capacity == Some(true) && certified.is_none_or(|c| c.bits <= 0.0) {
        out.push(Discrepancy {
            item: "positive capacity".into(),
            claimed: "true".into(),
            computed: "not certified".into(),
            note: if validation.passed {
                format!("{}; no witness for positivity was reproduced", scan.note)
            } else {
                format!("{}; witnesses for an invalid channel are not certificates", scan.note)
            },
        });
    }
    if let Some(note) = &claims.note {
        if !out.is_empty() {
            out.push(Discrepancy {
                item: "annotation".into(),
                claimed: String::new(),
                computed: String::new(),
                note: note.clone(),
            });
        }
    }
    out
}
