//! Run configuration: parsing, validation, and conversion into core types.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use ncinv::error::{Error, Result};
use ncinv::group::MatrixGroup;
use ncinv::linalg::Matrix;
use ncinv::scalar::parse_scalar;

pub const DEFAULT_GROUP_CAP: usize = 1024;
pub const DEFAULT_MAX_DEGREE: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Relfree,
    Enveloping,
    CommOnly,
    Polarize,
    Dims,
}

impl Mode {
    pub fn as_str(&self) -> &'static str {
        match self {
            Mode::Relfree => "relfree",
            Mode::Enveloping => "enveloping",
            Mode::CommOnly => "comm-only",
            Mode::Polarize => "polarize",
            Mode::Dims => "dims",
        }
    }

    /// Modes that compute invariants of a group or an imported system.
    pub fn is_invariant_mode(&self) -> bool {
        matches!(self, Mode::Relfree | Mode::Enveloping | Mode::CommOnly)
    }
}

/// Matrices come in as row-major lists of rational strings.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GroupSpec {
    pub generators: Vec<Vec<Vec<String>>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Caps {
    #[serde(default = "default_group_cap")]
    pub group_order: usize,
    #[serde(default = "default_max_degree")]
    pub max_degree: usize,
}

fn default_group_cap() -> usize {
    DEFAULT_GROUP_CAP
}

fn default_max_degree() -> usize {
    DEFAULT_MAX_DEGREE
}

impl Default for Caps {
    fn default() -> Self {
        Caps { group_order: DEFAULT_GROUP_CAP, max_degree: DEFAULT_MAX_DEGREE }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PolarizeSpec {
    pub dim_u: usize,
    pub dim_w: usize,
    pub copies_source: usize,
    pub copies_target: usize,
    pub h: usize,
    /// Optional generators for the action on `U`, paired one-to-one with the
    /// main group generators (which act on `W`). Defaults to the trivial
    /// action.
    #[serde(default)]
    pub group_u: Option<GroupSpec>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub mode: Mode,
    #[serde(default)]
    pub dim_v: Option<usize>,
    #[serde(default)]
    pub p: Option<usize>,
    #[serde(default)]
    pub group: Option<GroupSpec>,
    #[serde(default)]
    pub external_generators: Option<String>,
    #[serde(default)]
    pub degree_bound: Option<usize>,
    #[serde(default)]
    pub verify_degree: Option<usize>,
    #[serde(default)]
    pub caps: Caps,
    #[serde(default)]
    pub polarize: Option<PolarizeSpec>,
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<RunConfig> {
        let config: RunConfig = serde_json::from_str(text)?;
        config.validate()?;
        Ok(config)
    }

    pub fn from_path(path: &std::path::Path) -> Result<RunConfig> {
        RunConfig::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn validate(&self) -> Result<()> {
        if self.caps.group_order == 0 || self.caps.max_degree == 0 {
            return Err(Error::Validation("caps must be positive".into()));
        }
        match self.mode {
            Mode::Dims => {
                self.require_dims()?;
            }
            Mode::Polarize => {
                let Some(pol) = &self.polarize else {
                    return Err(Error::Validation("polarize mode needs a \"polarize\" section".into()));
                };
                if self.group.is_none() {
                    return Err(Error::Validation(
                        "polarize mode needs a group acting on W".into(),
                    ));
                }
                if pol.dim_w == 0 || pol.copies_source == 0 || pol.copies_target == 0 || pol.h == 0
                {
                    return Err(Error::Validation(
                        "polarize section needs positive dim_w, copies, and h".into(),
                    ));
                }
                if self.p.is_none() {
                    return Err(Error::Validation("polarize mode needs p".into()));
                }
            }
            Mode::Relfree | Mode::Enveloping | Mode::CommOnly => {
                self.require_dims()?;
                // A group spec with an empty generator list counts as absent
                // (the trivial group is spelled with an explicit identity).
                let group = self.group.as_ref().filter(|g| !g.generators.is_empty());
                match (group, &self.external_generators) {
                    (Some(_), None) | (None, Some(_)) => {}
                    (Some(_), Some(_)) => {
                        return Err(Error::Validation(
                            "exactly one of group / external_generators may be present".into(),
                        ))
                    }
                    (None, None) => {
                        return Err(Error::Validation(
                            "invariant modes need a group (non-empty generator list) or external_generators".into(),
                        ))
                    }
                }
            }
        }
        Ok(())
    }

    fn require_dims(&self) -> Result<()> {
        if self.dim_v.is_none() || self.p.is_none() {
            return Err(Error::Validation(format!(
                "mode {} needs dim_v and p",
                self.mode.as_str()
            )));
        }
        if self.dim_v == Some(0) || self.p == Some(0) {
            return Err(Error::Validation("dim_v and p must be positive".into()));
        }
        Ok(())
    }

    pub fn parse_matrix(rows: &[Vec<String>]) -> Result<Matrix> {
        let parsed: Vec<Vec<_>> = rows
            .iter()
            .map(|row| row.iter().map(|s| parse_scalar(s)).collect::<Result<Vec<_>>>())
            .collect::<Result<_>>()?;
        Matrix::from_rows(parsed)
    }

    pub fn generator_matrices(&self) -> Result<Vec<Matrix>> {
        let Some(spec) = &self.group else { return Ok(Vec::new()) };
        spec.generators.iter().map(|m| Self::parse_matrix(m)).collect()
    }

    /// Close the configured group over the given dimension.
    pub fn close_group(&self, n: usize) -> Result<Arc<MatrixGroup>> {
        let gens = self.generator_matrices()?;
        for g in &gens {
            if g.rows() != n || g.cols() != n {
                return Err(Error::Validation(format!(
                    "group generator is {}x{}, expected {n}x{n}",
                    g.rows(),
                    g.cols()
                )));
            }
        }
        MatrixGroup::close(n, gens, self.caps.group_order)
    }
}
