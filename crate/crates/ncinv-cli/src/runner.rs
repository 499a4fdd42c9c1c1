//! Mode dispatch: run a validated configuration and produce a result file
//! plus its pass/fail status.

use std::path::Path;

use ncinv::assoc::{dim_u, nf_f, straighten, Arena, NCPolynomial, RelFreeContext};
use ncinv::comm::{beta_commutative, export_generators, import_generators, minimal_generators, GeneratorFileEntry};
use ncinv::error::{Error, Result};
use ncinv::freelie::{lyndon_words, witt, LieContext, Word};
use ncinv::group::lie_basis_action;
use ncinv::pipeline::{
    bound_report, construct_invariants_f, construct_invariants_u, prune_generators_f,
    prune_generators_u, transform_records_f, transform_records_u, verify_generation_f,
    verify_generation_u, verify_invariance_f, verify_invariance_u, CommSource, PipelineOptions,
};
use ncinv::polarize::{verify_polarization, PolarizeRunConfig, SplitGenerator};
use ncinv::scalar::parse_scalar;

use crate::config::{Mode, RunConfig};
use crate::output::{
    self, lie_basis_entries, nc_plain_out, pipeline_out, CommOut, DimRow, DimsOut, LieBasisOut,
    PolarizeOut, ResultFile, ResultPayload, WittRow,
};

pub struct RunOutcome {
    pub result: ResultFile,
    /// False when a verification report failed; input errors never get here.
    pub pass: bool,
}

impl RunOutcome {
    pub fn summary(&self) -> String {
        output::summary(&self.result)
    }
}

/// Read the external generator entries, resolving a relative path against
/// the config file's directory when one is known.
fn load_external(config_dir: Option<&Path>, path: &str) -> Result<Vec<GeneratorFileEntry>> {
    let mut full = std::path::PathBuf::from(path);
    if full.is_relative() {
        if let Some(dir) = config_dir {
            full = dir.join(full);
        }
    }
    let text = std::fs::read_to_string(&full)?;
    Ok(serde_json::from_str(&text)?)
}

pub fn execute(config: &RunConfig, config_dir: Option<&Path>) -> Result<RunOutcome> {
    config.validate()?;
    match config.mode {
        Mode::Dims => run_dims(config),
        Mode::Relfree | Mode::Enveloping => run_pipeline(config, config_dir),
        Mode::CommOnly => run_comm(config, config_dir),
        Mode::Polarize => run_polarize(config),
    }
}

fn run_dims(config: &RunConfig) -> Result<RunOutcome> {
    let n = config.dim_v.unwrap();
    let p = config.p.unwrap();
    let cap = config.caps.max_degree;
    let ctx = LieContext::new(n, p);
    let rf = RelFreeContext::new(n, p, cap);
    let mut rows = Vec::new();
    for d in 0..=cap {
        rows.push(DimRow {
            degree: d,
            dim_tensor: n.pow(d as u32),
            dim_relfree: rf.dim_f(d)?,
            dim_enveloping: dim_u(&ctx, d),
        });
    }
    let result = ResultFile::new("dims", ResultPayload::Dims(DimsOut { dim_v: n, p, rows }));
    Ok(RunOutcome { result, pass: true })
}

pub fn run_lie_basis(n: usize, p: usize) -> Result<RunOutcome> {
    if n == 0 || p == 0 {
        return Err(Error::Validation("n and p must be positive".into()));
    }
    let ctx = LieContext::new(n, p);
    let witt_rows = (1..=p).map(|d| WittRow { degree: d, dimension: witt(n, d) }).collect();
    debug_assert_eq!(
        (1..=p).map(|d| lyndon_words(n, d).len()).sum::<usize>(),
        ctx.dim()
    );
    let mut brackets = Vec::new();
    for i in 0..ctx.dim() {
        for j in (i + 1)..ctx.dim() {
            let bracket = ctx.basis_bracket(i, j);
            if bracket.is_zero() {
                continue;
            }
            brackets.push(output::BracketEntry {
                left: i,
                right: j,
                terms: bracket
                    .coeffs()
                    .iter()
                    .map(|(idx, c)| output::TermOut {
                        word: ctx.basis_word(*idx).word().0.clone(),
                        coeff: ncinv::scalar::format_scalar(c),
                    })
                    .collect(),
            });
        }
    }
    let result = ResultFile::new(
        "lie-basis",
        ResultPayload::LieBasis(LieBasisOut {
            dim_v: n,
            p,
            basis: lie_basis_entries(ctx.basis()),
            witt: witt_rows,
            brackets,
        }),
    );
    Ok(RunOutcome { result, pass: true })
}

fn run_pipeline(config: &RunConfig, config_dir: Option<&Path>) -> Result<RunOutcome> {
    let n = config.dim_v.unwrap();
    let p = config.p.unwrap();
    let cap = config.caps.max_degree;
    let ctx = LieContext::new(n, p);
    let opts = PipelineOptions {
        degree_bound: config.degree_bound,
        verify_degree: config.verify_degree,
        max_degree: cap,
    };
    let arena = match config.mode {
        Mode::Relfree => "relfree",
        _ => "enveloping",
    };

    if let Some(path) = &config.external_generators {
        // External generator route: transform and report, but generation
        // cannot be certified without a finite group.
        let entries = load_external(config_dir, path)?;
        let records = import_generators(&entries, &ctx, None)?;
        let (gens, skipped, pruned) = match config.mode {
            Mode::Relfree => {
                let rf = RelFreeContext::new(n, p, cap);
                let (gens, skipped) = transform_records_f(&ctx, &rf, &records, cap)?;
                let (gens, pruned) = prune_generators_f(&rf, gens)?;
                (gens, skipped, pruned)
            }
            _ => {
                let (gens, skipped) = transform_records_u(&ctx, &records, cap)?;
                let (gens, pruned) = prune_generators_u(&ctx, gens)?;
                (gens, skipped, pruned)
            }
        };
        let payload = output::PipelineOut {
            arena: arena.to_string(),
            dim_v: n,
            p,
            group_order: None,
            group_elements: None,
            generators: gens.iter().map(output::nc_generator_out).collect(),
            commutative_source: export_generators(&records),
            skipped_above_cap: skipped,
            pruned,
            verification: None,
            bounds: bound_report(&records, &gens, p, None),
            notes: vec![
                "generation not certified: external generators without a finite group".to_string(),
            ],
        };
        let result = ResultFile::new(config.mode.as_str(), ResultPayload::Pipeline(payload));
        return Ok(RunOutcome { result, pass: true });
    }

    let (result, group) = match config.mode {
        Mode::Relfree => {
            let group = config.close_group(n)?;
            let rf = RelFreeContext::new(n, p, cap);
            (construct_invariants_f(&group, &ctx, &rf, CommSource::Minimal, &opts)?, group)
        }
        _ => {
            // Enveloping groups come either as matrices on the base space
            // (lifted automatically) or as graded automorphism matrices on
            // the full Lyndon basis (validated against the structure
            // constants).
            let gens = config.generator_matrices()?;
            let basis_dim = ctx.dim();
            let on_basis = basis_dim != n
                && !gens.is_empty()
                && gens.iter().all(|g| g.rows() == basis_dim && g.cols() == basis_dim);
            let (group, lie) = if on_basis {
                ncinv::group::lie_action_from_automorphisms(&ctx, gens, config.caps.group_order)?
            } else {
                let group = config.close_group(n)?;
                let lie = lie_basis_action(&group, &ctx)?;
                (group, lie)
            };
            (construct_invariants_u(&lie, &ctx, CommSource::Minimal, &opts)?, group)
        }
    };
    let pass = result.verification.pass;
    let payload = pipeline_out(arena, n, p, &result, Some(&group));
    let file = ResultFile::new(config.mode.as_str(), ResultPayload::Pipeline(payload));
    Ok(RunOutcome { result: file, pass })
}

fn run_comm(config: &RunConfig, config_dir: Option<&Path>) -> Result<RunOutcome> {
    let n = config.dim_v.unwrap();
    let p = config.p.unwrap();
    let ctx = LieContext::new(n, p);
    let (records, group_order, degree_bound) =
        if let Some(path) = &config.external_generators {
            let entries = load_external(config_dir, path)?;
            let records = import_generators(&entries, &ctx, None)?;
            let bound = config.degree_bound.unwrap_or_else(|| beta_commutative(&records));
            (records, None, bound)
        } else {
            let group = config.close_group(n)?;
            let lie = lie_basis_action(&group, &ctx)?;
            let bound = config.degree_bound.unwrap_or(group.order());
            (minimal_generators(&lie, &ctx, bound)?, Some(group.order()), bound)
        };
    let beta = beta_commutative(&records);
    let payload = CommOut {
        dim_v: n,
        p,
        group_order,
        degree_bound,
        generators: export_generators(&records),
        beta_comm: beta,
    };
    let result = ResultFile::new("comm-only", ResultPayload::Comm(payload));
    Ok(RunOutcome { result, pass: true })
}

fn run_polarize(config: &RunConfig) -> Result<RunOutcome> {
    let pol = config.polarize.as_ref().unwrap();
    let p = config.p.unwrap();
    let w_gens = config.generator_matrices()?;
    let u_gens: Vec<_> = match &pol.group_u {
        Some(spec) => {
            if spec.generators.len() != w_gens.len() {
                return Err(Error::Validation(
                    "group_u generators must pair one-to-one with the group generators".into(),
                ));
            }
            spec.generators
                .iter()
                .map(|m| RunConfig::parse_matrix(m))
                .collect::<Result<_>>()?
        }
        None => (0..w_gens.len())
            .map(|_| ncinv::linalg::Matrix::identity(pol.dim_u))
            .collect(),
    };
    let generators: Vec<SplitGenerator> = u_gens
        .into_iter()
        .zip(w_gens)
        .map(|(on_u, on_w)| SplitGenerator { on_u, on_w })
        .collect();
    let verify_degree = config.verify_degree.unwrap_or_else(|| 4.min(config.caps.max_degree));
    if verify_degree > config.caps.max_degree {
        return Err(Error::DegreeCapExceeded {
            requested: verify_degree,
            cap: config.caps.max_degree,
        });
    }
    let run_cfg = PolarizeRunConfig {
        dim_u: pol.dim_u,
        dim_w: pol.dim_w,
        copies_source: pol.copies_source,
        copies_target: pol.copies_target,
        capelli_h: pol.h,
        p,
        generators,
        group_cap: config.caps.group_order,
        max_degree: config.caps.max_degree,
        verify_degree,
    };
    let run = verify_polarization(&run_cfg)?;
    let asserted = p == 1;
    let pass = !asserted || run.report.pass;
    let payload = PolarizeOut {
        dim_u: pol.dim_u,
        dim_w: pol.dim_w,
        copies_source: pol.copies_source,
        copies_target: pol.copies_target,
        capelli_h: pol.h,
        p,
        source_group_order: run.source.bounds.group_order.unwrap_or(0),
        target_group_order: run.target_group_order,
        source: pipeline_out(
            "relfree",
            pol.dim_u + pol.copies_source * pol.dim_w,
            p,
            &run.source,
            None,
        ),
        polarized: run
            .polarized
            .iter()
            .map(|f| nc_plain_out(f, f.degrees().first().copied().unwrap_or(0)))
            .collect(),
        report: run.report,
        asserted,
    };
    let result = ResultFile::new("polarize", ResultPayload::Polarize(payload));
    Ok(RunOutcome { result, pass })
}

/// Re-verify the generators stored in a result file against the group in the
/// config: exact invariance plus the degreewise generation check.
pub fn execute_verify(
    config: &RunConfig,
    result_text: &str,
    verify_degree: Option<usize>,
) -> Result<RunOutcome> {
    let stored = ResultFile::from_json(result_text)
        .map_err(|e| Error::Validation(format!("result file does not parse: {e}")))?;
    let ResultPayload::Pipeline(payload) = &stored.payload else {
        return Err(Error::Validation("verify expects a pipeline result file".into()));
    };
    if config.group.is_none() {
        return Err(Error::Validation("verify needs a group in the config".into()));
    }
    let n = payload.dim_v;
    let p = payload.p;
    let cap = config.caps.max_degree;
    let d_max = verify_degree
        .or(config.verify_degree)
        .unwrap_or(payload.verification.as_ref().map_or(4, |v| v.max_checked_degree));
    let group = config.close_group(n)?;
    let ctx = LieContext::new(n, p);

    let (report, invariant) = match payload.arena.as_str() {
        "relfree" => {
            let rf = RelFreeContext::new(n, p, cap);
            let gens: Vec<NCPolynomial> = payload
                .generators
                .iter()
                .map(|g| {
                    let raw = NCPolynomial::from_terms(
                        Arena::tensor(n),
                        g.terms
                            .iter()
                            .map(|t| Ok((Word(t.word.clone()), parse_scalar(&t.coeff)?)))
                            .collect::<Result<Vec<_>>>()?,
                    );
                    nf_f(&rf, &raw)
                })
                .collect::<Result<_>>()?;
            let inv = verify_invariance_f(&group, &gens)?;
            (verify_generation_f(&group, &rf, &gens, d_max)?, inv)
        }
        "enveloping" => {
            let arena = Arena::Enveloping(ctx.clone());
            let gens: Vec<NCPolynomial> = payload
                .generators
                .iter()
                .map(|g| {
                    let mut acc = NCPolynomial::zero(arena.clone());
                    for t in &g.terms {
                        let c = parse_scalar(&t.coeff)?;
                        acc = acc.add(&straighten(&ctx, &Word(t.word.clone())).scale(&c))?;
                    }
                    Ok(acc)
                })
                .collect::<Result<_>>()?;
            let lie = lie_basis_action(&group, &ctx)?;
            let inv = verify_invariance_u(&lie, &gens)?;
            (verify_generation_u(&lie, &ctx, &gens, d_max)?, inv)
        }
        other => {
            return Err(Error::Validation(format!("unknown arena {other:?} in result file")))
        }
    };

    let mut payload = payload.clone();
    let pass = report.pass && invariant;
    if !invariant {
        payload.notes.push("invariance check FAILED for at least one stored generator".into());
    }
    payload.group_order = Some(group.order());
    payload.group_elements =
        Some(group.elements().iter().map(output::matrix_strings).collect());
    payload.verification = Some(report);
    let result = ResultFile::new(stored.mode.as_str(), ResultPayload::Pipeline(payload));
    Ok(RunOutcome { result, pass })
}
