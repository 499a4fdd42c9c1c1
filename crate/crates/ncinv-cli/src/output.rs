//! Machine-readable result files and human-readable summaries.
//!
//! Every number is serialized as an exact decimal or rational string; maps
//! are ordered; nothing in a result file depends on wall-clock time or
//! iteration order, so identical runs produce byte-identical files.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use ncinv::assoc::NCPolynomial;
use ncinv::comm::GeneratorFileEntry;
use ncinv::freelie::LyndonWord;
use ncinv::pipeline::{BoundReport, NcGenerator, PipelineResult, VerificationReport};
use ncinv::scalar::format_scalar;

pub const SCHEMA: &str = "ncinv-result/1";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermOut {
    pub word: Vec<usize>,
    pub coeff: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NcGeneratorOut {
    pub f_degree: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub source_alpha: Option<Vec<usize>>,
    pub terms: Vec<TermOut>,
}

pub fn nc_terms(poly: &NCPolynomial) -> Vec<TermOut> {
    poly.terms().map(|(w, c)| TermOut { word: w.0.clone(), coeff: format_scalar(c) }).collect()
}

pub fn nc_generator_out(g: &NcGenerator) -> NcGeneratorOut {
    NcGeneratorOut {
        f_degree: g.f_degree,
        source_alpha: Some(g.source.alpha.0.clone()),
        terms: nc_terms(&g.nc),
    }
}

pub fn nc_plain_out(poly: &NCPolynomial, f_degree: usize) -> NcGeneratorOut {
    NcGeneratorOut { f_degree, source_alpha: None, terms: nc_terms(poly) }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PipelineOut {
    /// "relfree" or "enveloping".
    pub arena: String,
    pub dim_v: usize,
    pub p: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub group_order: Option<usize>,
    /// Closed group elements as row-major rational strings, in breadth-first
    /// discovery order.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group_elements: Option<Vec<Vec<Vec<String>>>>,
    pub generators: Vec<NcGeneratorOut>,
    pub commutative_source: Vec<GeneratorFileEntry>,
    pub skipped_above_cap: usize,
    pub pruned: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verification: Option<VerificationReport>,
    pub bounds: BoundReport,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

pub fn matrix_strings(m: &ncinv::linalg::Matrix) -> Vec<Vec<String>> {
    (0..m.rows())
        .map(|r| (0..m.cols()).map(|c| format_scalar(m.get(r, c))).collect())
        .collect()
}

pub fn pipeline_out(
    arena: &str,
    dim_v: usize,
    p: usize,
    result: &PipelineResult,
    group: Option<&ncinv::group::MatrixGroup>,
) -> PipelineOut {
    PipelineOut {
        arena: arena.to_string(),
        dim_v,
        p,
        group_order: result.bounds.group_order,
        group_elements: group.map(|g| g.elements().iter().map(matrix_strings).collect()),
        generators: result.generators.iter().map(nc_generator_out).collect(),
        commutative_source: ncinv::comm::export_generators(&result.records),
        skipped_above_cap: result.skipped_above_cap,
        pruned: result.pruned,
        verification: Some(result.verification.clone()),
        bounds: result.bounds.clone(),
        notes: Vec::new(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimRow {
    pub degree: usize,
    pub dim_tensor: usize,
    pub dim_relfree: usize,
    pub dim_enveloping: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimsOut {
    pub dim_v: usize,
    pub p: usize,
    pub rows: Vec<DimRow>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LieBasisEntry {
    pub index: usize,
    pub word: Vec<usize>,
    pub degree: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WittRow {
    pub degree: usize,
    pub dimension: usize,
}

/// One structure constant: the bracket of two basis elements as a linear
/// combination of basis words.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BracketEntry {
    pub left: usize,
    pub right: usize,
    pub terms: Vec<TermOut>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LieBasisOut {
    pub dim_v: usize,
    pub p: usize,
    pub basis: Vec<LieBasisEntry>,
    pub witt: Vec<WittRow>,
    pub brackets: Vec<BracketEntry>,
}

pub fn lie_basis_entries(basis: &[LyndonWord]) -> Vec<LieBasisEntry> {
    basis
        .iter()
        .enumerate()
        .map(|(index, w)| LieBasisEntry { index, word: w.word().0.clone(), degree: w.degree() })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CommOut {
    pub dim_v: usize,
    pub p: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub group_order: Option<usize>,
    pub degree_bound: usize,
    pub generators: Vec<GeneratorFileEntry>,
    pub beta_comm: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolarizeOut {
    pub dim_u: usize,
    pub dim_w: usize,
    pub copies_source: usize,
    pub copies_target: usize,
    pub capelli_h: usize,
    pub p: usize,
    pub source_group_order: usize,
    pub target_group_order: usize,
    pub source: PipelineOut,
    pub polarized: Vec<NcGeneratorOut>,
    pub report: VerificationReport,
    /// Whether the report participates in the exit status. Only the
    /// commutative case is asserted; for higher nilpotency the run is
    /// recorded as data.
    pub asserted: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ResultPayload {
    Pipeline(PipelineOut),
    Dims(DimsOut),
    LieBasis(LieBasisOut),
    Comm(CommOut),
    Polarize(PolarizeOut),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResultFile {
    pub schema: String,
    pub mode: String,
    pub payload: ResultPayload,
}

impl ResultFile {
    pub fn new(mode: &str, payload: ResultPayload) -> Self {
        ResultFile { schema: SCHEMA.to_string(), mode: mode.to_string(), payload }
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("serializable");
        text.push('\n');
        text
    }

    pub fn from_json(text: &str) -> serde_json::Result<ResultFile> {
        serde_json::from_str(text)
    }
}

fn verification_summary(out: &mut String, report: &VerificationReport) {
    let _ = writeln!(out, "  degree | dim subalgebra | dim invariants | equal");
    for row in &report.rows {
        let _ = writeln!(
            out,
            "  {:>6} | {:>14} | {:>14} | {}",
            row.degree,
            row.dim_subalgebra,
            row.dim_invariants,
            if row.equal { "yes" } else { "NO" }
        );
    }
    let _ = writeln!(
        out,
        "  generation check up to degree {}: {}",
        report.max_checked_degree,
        if report.pass { "PASS" } else { "FAIL" }
    );
}

fn bounds_summary(out: &mut String, b: &BoundReport) {
    let _ = writeln!(
        out,
        "  beta_nc = {} | beta_comm = {} | p = {}{}",
        b.beta_nc,
        b.beta_comm,
        b.p,
        match b.group_order {
            Some(o) => format!(" | |G| = {o}"),
            None => String::new(),
        }
    );
    let _ = writeln!(
        out,
        "  beta_nc <= p*beta_comm: {}{}",
        if b.inequality_pbeta { "yes" } else { "NO" },
        match b.inequality_noether {
            Some(true) => " | beta_nc <= p*|G|: yes".to_string(),
            Some(false) => " | beta_nc <= p*|G|: NO".to_string(),
            None => String::new(),
        }
    );
}

/// Render the human-readable summary of a result.
pub fn summary(result: &ResultFile) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "mode: {}", result.mode);
    match &result.payload {
        ResultPayload::Pipeline(p) => {
            let _ = writeln!(
                out,
                "{} invariants over dim_v = {}, p = {}{}",
                p.arena,
                p.dim_v,
                p.p,
                match p.group_order {
                    Some(o) => format!(", group order {o}"),
                    None => ", external generators".to_string(),
                }
            );
            let _ = writeln!(
                out,
                "generators: {} (source records: {}, pruned: {}, above cap: {})",
                p.generators.len(),
                p.commutative_source.len(),
                p.pruned,
                p.skipped_above_cap
            );
            for g in &p.generators {
                let _ = writeln!(
                    out,
                    "  degree {:>2}, {} terms{}",
                    g.f_degree,
                    g.terms.len(),
                    match &g.source_alpha {
                        Some(a) => format!(", source multidegree {a:?}"),
                        None => String::new(),
                    }
                );
            }
            if let Some(v) = &p.verification {
                verification_summary(&mut out, v);
            }
            bounds_summary(&mut out, &p.bounds);
            for note in &p.notes {
                let _ = writeln!(out, "  note: {note}");
            }
        }
        ResultPayload::Dims(d) => {
            let _ = writeln!(out, "dimensions for dim_v = {}, p = {}", d.dim_v, d.p);
            let _ = writeln!(out, "  degree | dim T | dim F | dim U");
            for row in &d.rows {
                let _ = writeln!(
                    out,
                    "  {:>6} | {:>5} | {:>5} | {:>5}",
                    row.degree, row.dim_tensor, row.dim_relfree, row.dim_enveloping
                );
            }
        }
        ResultPayload::LieBasis(l) => {
            let _ = writeln!(out, "Lyndon basis for dim_v = {}, p = {}", l.dim_v, l.p);
            for row in &l.witt {
                let _ = writeln!(out, "  degree {}: dimension {}", row.degree, row.dimension);
            }
            for e in &l.basis {
                let _ = writeln!(out, "  b{} = {:?} (degree {})", e.index, e.word, e.degree);
            }
        }
        ResultPayload::Comm(c) => {
            let _ = writeln!(
                out,
                "commutative invariants over dim_v = {}, p = {}{}, search bound {}",
                c.dim_v,
                c.p,
                match c.group_order {
                    Some(o) => format!(", group order {o}"),
                    None => String::new(),
                },
                c.degree_bound
            );
            let _ = writeln!(out, "minimal generators: {} (beta = {})", c.generators.len(), c.beta_comm);
            for g in &c.generators {
                let _ = writeln!(out, "  multidegree {:?}, {} terms", g.alpha, g.terms.len());
            }
        }
        ResultPayload::Polarize(p) => {
            let _ = writeln!(
                out,
                "polarization: U = K^{}, W = K^{}, copies {} -> {}, h = {}, p = {}",
                p.dim_u, p.dim_w, p.copies_source, p.copies_target, p.capelli_h, p.p
            );
            let _ = writeln!(
                out,
                "source group order {}, target group order {}",
                p.source_group_order, p.target_group_order
            );
            let _ = writeln!(
                out,
                "source generators: {}, polarized set size: {}",
                p.source.generators.len(),
                p.polarized.len()
            );
            verification_summary(&mut out, &p.report);
            if !p.asserted {
                let _ = writeln!(
                    out,
                    "  note: p >= 2 polarization runs are reports; the Capelli height of the variety is not known"
                );
            }
        }
    }
    out
}
