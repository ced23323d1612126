//! Human-readable output. Matrix indices are printed 1-based.

use std::fmt::Write;

use zec_core::channel::{LoadedChannel, ValidationReport};
use zec_core::numerics::CVector;
use zec_core::report::{AnalysisReport, CodeSection, GraphSection};
use zec_core::spectral::CommonEigenstateCell;
use zec_core::Complex64;

fn complex(z: &Complex64) -> String {
    let (re, im) = (clean(z.re), clean(z.im));
    if im == 0.0 {
        format!("{re:.6}")
    } else {
        format!("{re:.6}{im:+.6}i")
    }
}

/// Folds signed zeros and rounding dust so output is stable.
fn clean(x: f64) -> f64 {
    if x.abs() < 5e-13 {
        0.0
    } else {
        x
    }
}

fn vector(v: &CVector) -> String {
    let parts: Vec<String> = v.iter().map(complex).collect();
    format!("({})", parts.join(", "))
}

pub fn validation(loaded: &LoadedChannel, v: &ValidationReport) -> String {
    let ch = &loaded.channel;
    let (r, c) = v.worst_entry;
    let mut out = String::new();
    let _ = writeln!(out, "channel {} (d = {}, kappa = {})", ch.name(), ch.dim(), ch.kappa());
    let _ = writeln!(
        out,
        "completeness: {} at tolerance {:.1e}, tier {:?}",
        if v.passed { "PASS" } else { "FAIL" },
        v.tolerance,
        v.tier
    );
    let _ = writeln!(out, "max residual {:.6e} at entry ({}, {})", v.max_residual, r + 1, c + 1);
    out
}

fn cell(out: &mut String, k: usize, cell: &CommonEigenstateCell, fixed: bool) {
    let lambdas: Vec<String> = cell.eigenvalues.iter().map(complex).collect();
    let _ = writeln!(
        out,
        "  cell {}: dim {}, lambda = [{}], sum |lambda|^2 = {:.12}, fixed: {}",
        k + 1,
        cell.dim(),
        lambdas.join(", "),
        cell.lambda_norm_sq,
        if fixed { "yes" } else { "NO" }
    );
    for v in cell.vectors() {
        let _ = writeln!(out, "    {}", vector(v));
    }
}

pub fn analysis(r: &AnalysisReport) -> String {
    let mut out = String::new();
    if let Some(b) = &r.banner {
        let _ = writeln!(out, "*** {b} ***");
    }
    let (row, col) = r.validation.worst_entry;
    let _ = writeln!(
        out,
        "channel {} (d = {}, kappa = {})",
        r.channel.name, r.channel.dim, r.channel.kappa
    );
    for (k, v) in &r.channel.params {
        let _ = writeln!(out, "  param {k} = {v}");
    }
    let _ = writeln!(
        out,
        "validation: tier {:?}, max residual {:.3e} at ({}, {})",
        r.validation.tier,
        r.validation.max_residual,
        row + 1,
        col + 1
    );

    let s = &r.spectral;
    let _ = writeln!(out, "common eigenstates: n_E = {} in {} cells", s.n_e, s.cells.len());
    for (k, (c, fixed)) in s.cells.iter().zip(&s.fixed_point_verified).enumerate() {
        cell(&mut out, k, c, *fixed);
    }
    let _ = writeln!(
        out,
        "common-eigenstate bound: {}",
        if s.capacity_lower_bound.trivial {
            "none (trivial)".to_string()
        } else {
            format!("log2 {} = {} bits", s.n_e, s.capacity_lower_bound.bits)
        }
    );

    let f = &r.fixed_space.report;
    let _ = writeln!(out, "fixed space: dimension {}, max residual {:.3e}", f.dimension, f.max_residual);
    let _ = writeln!(out, "{} = {}", r.fixed_space.label, f.orthogonal_pure_fixed_count);
    let _ = writeln!(out, "basis scan: {}", r.basis_scan.note);

    if let Some(g) = &r.graph {
        out.push_str(&graph(g));
    }
    if let Some(c) = &r.code {
        out.push_str(&code(c));
    }
    match &r.certified {
        Some(c) => {
            let _ = writeln!(
                out,
                "CERTIFIED: C0 >= {} bits/use ({:?}, {} witnesses)",
                c.bits, c.source, c.witness_count
            );
        }
        None => {
            let _ = writeln!(out, "no certified bound");
        }
    }
    for n in &r.notes {
        let _ = writeln!(out, "note: {n}");
    }
    if !r.discrepancies.is_empty() {
        let _ = writeln!(out, "DISCREPANCIES:");
        for d in &r.discrepancies {
            let _ = writeln!(out, "  {}: claimed '{}', computed '{}' {}", d.item, d.claimed, d.computed, d.note);
        }
    }
    out
}

pub fn graph(g: &GraphSection) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "confusability graph on {} states:", g.vertices);
    for row in &g.adjacency {
        let line: String = row.iter().map(|&a| if a { '1' } else { '0' }).collect();
        let _ = writeln!(out, "  {line}");
    }
    let words: Vec<String> = g
        .independent_words
        .iter()
        .map(|w| w.iter().map(|i| (i + 1).to_string()).collect::<Vec<_>>().join(""))
        .collect();
    let _ = writeln!(
        out,
        "n = {}: {} vertices, alpha = {}, independent set [{}], rate {} bits/use",
        g.block_length,
        g.product_vertices,
        g.alpha,
        words.join(", "),
        g.rate
    );
    out
}

pub fn code(c: &CodeSection) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "({}, {}) code, {} outcomes per letter (last is the completion)",
        c.m, c.n, c.outcomes_per_letter
    );
    let _ = writeln!(out, "p(j|i):");
    for row in &c.transition.p {
        let cells: Vec<String> = row.iter().map(|p| format!("{:.6}", clean(*p))).collect();
        let _ = writeln!(out, "  {}", cells.join(" "));
    }
    let _ = writeln!(
        out,
        "max error {:.3e}, rate {} bits/use: {}",
        c.max_error,
        c.rate,
        if c.zero_error { "ZERO-ERROR PASS" } else { "FAIL" }
    );
    out
}
