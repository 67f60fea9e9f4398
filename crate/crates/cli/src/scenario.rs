//! Scenario files: JSON descriptions of a block extension pair, a bimodule and the
//! optional data for the graded and transport checks.

use std::collections::BTreeMap;

use serde::Deserialize;

use gmorita_core::bimodule::block_bimodule;
use gmorita_core::butterfly::block_of;
use gmorita_core::grading::{grade_block_extension, grade_block_extension_over};
use gmorita_core::groups::{extend_homomorphism, load_group, subgroup_as_group};
use gmorita_core::{Bimodule, FiniteGroup, GroupSpec, Matrix, PrimeField, Subgroup, Vector};

use crate::CliError;

pub const SUPPORTED_VERSION: u32 = 1;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub version: u32,
    pub field: u64,
    pub group: GroupSpec,
    /// Generators of `N`, by label.
    pub normal: Vec<String>,
    /// Generators of `G′`, by label.
    pub g_prime: Vec<String>,
    /// Indices into the block decompositions of `kN` and `kN′`.
    pub block: usize,
    #[serde(default)]
    pub block_prime: usize,
    pub module: ModuleSpec,
    /// `X_g` for the degrees of `G/N`, keyed by the label of the coset representative.
    #[serde(default)]
    pub unit_actions: Option<BTreeMap<String, Vec<Vec<u64>>>>,
    /// Corrupts `φ̃` by right multiplication with `b′·x` in the given degrees.
    #[serde(default)]
    pub twist: Option<BTreeMap<String, String>>,
    #[serde(default)]
    pub ambient: Option<AmbientSpec>,
    #[serde(default)]
    pub pipeline: Vec<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModuleSpec {
    pub dim: usize,
    /// Left action of generators of `N`.
    pub left: BTreeMap<String, Vec<Vec<u64>>>,
    /// Right action `m -> m·s` of generators of `N′`.
    #[serde(default)]
    pub right: BTreeMap<String, Vec<Vec<u64>>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AmbientSpec {
    pub group: GroupSpec,
    /// Images of the generators of `N`.
    pub embedding: BTreeMap<String, String>,
}

/// A scenario with every name resolved.
#[derive(Debug)]
pub struct Resolved {
    pub field: PrimeField,
    pub group: FiniteGroup,
    pub normal: Subgroup,
    pub g_prime: Subgroup,
    pub e: Vector,
    pub e_prime: Vector,
    pub module: Bimodule,
    pub unit_actions: Option<Vec<Matrix>>,
    pub twist: Option<Vec<(usize, usize)>>,
    pub ambient: Option<(FiniteGroup, Vec<usize>)>,
}

fn parse_err(msg: impl Into<String>) -> CliError {
    CliError::Parse(msg.into())
}

fn element(g: &FiniteGroup, label: &str) -> Result<usize, CliError> {
    g.index_of(label).ok_or_else(|| parse_err(format!("unknown group element {label}")))
}

fn matrix(f: PrimeField, dim: usize, rows: &[Vec<u64>], what: &str) -> Result<Matrix, CliError> {
    if rows.len() != dim || rows.iter().any(|r| r.len() != dim) {
        return Err(parse_err(format!("{what}: expected a {dim}×{dim} matrix")));
    }
    let rows: Vec<Vec<u64>> = rows.iter().map(|r| r.iter().map(|&x| f.reduce(x)).collect()).collect();
    Ok(Matrix::from_rows(f, dim, dim, &rows))
}

pub fn parse(text: &str) -> Result<ScenarioFile, CliError> {
    let file: ScenarioFile = serde_json::from_str(text).map_err(|e| parse_err(format!("scenario: {e}")))?;
    if file.version != SUPPORTED_VERSION {
        return Err(parse_err(format!("unsupported scenario version {}", file.version)));
    }
    Ok(file)
}

impl ScenarioFile {
    /// Resolves names and builds the block extensions and `M`. Errors in the data
    /// itself (a non-invariant block, matrices that do not define a module) are
    /// validation failures rather than parse errors.
    pub fn resolve(&self) -> Result<Resolved, CliError> {
        let field = PrimeField::new(self.field).map_err(|e| parse_err(e.to_string()))?;
        let group = load_group(&self.group).map_err(|e| parse_err(e.to_string()))?;
        let gens = |labels: &[String]| labels.iter().map(|l| element(&group, l)).collect::<Result<Vec<_>, _>>();
        let normal = Subgroup::generated(&group, &gens(&self.normal)?);
        let g_prime = Subgroup::generated(&group, &gens(&self.g_prime)?);
        let n_prime = g_prime.intersection(&normal);
        let (e, _) = block_of(&group, &normal, field, self.block).map_err(|e| parse_err(format!("block: {e}")))?;
        let (e_prime, _) = block_of(&group, &n_prime, field, self.block_prime).map_err(|e| parse_err(format!("block_prime: {e}")))?;
        let a = grade_block_extension(&group, &normal, field, &e)?;
        let ap = grade_block_extension_over(&group, &normal, &g_prime, field, &e_prime)?;

        let dim = self.module.dim;
        let actions = |m: &BTreeMap<String, Vec<Vec<u64>>>, side: &str| -> Result<Vec<(usize, Matrix)>, CliError> {
            m.iter().map(|(l, rows)| Ok((element(&group, l)?, matrix(field, dim, rows, &format!("{side} action of {l}"))?))).collect()
        };
        let left = actions(&self.module.left, "left")?;
        let right = actions(&self.module.right, "right")?;
        let module = block_bimodule(&a, &ap, dim, &left, &right)?;

        let unit_actions = match &self.unit_actions {
            None => None,
            Some(map) => {
                let q = &a.quotient;
                let mut out = vec![Matrix::identity(field, dim); q.quotient.order()];
                for (label, rows) in map {
                    let x = element(&group, label)?;
                    out[q.projection[x]] = matrix(field, dim, rows, &format!("unit action of {label}"))?;
                }
                Some(out)
            }
        };
        let twist = match &self.twist {
            None => None,
            Some(map) => {
                Some(map.iter().map(|(deg, x)| Ok((a.quotient.projection[element(&group, deg)?], element(&group, x)?))).collect::<Result<Vec<_>, CliError>>()?)
            }
        };
        let ambient = match &self.ambient {
            None => None,
            Some(spec) => {
                let ghat = load_group(&spec.group).map_err(|e| parse_err(format!("ambient group: {e}")))?;
                let ng = subgroup_as_group(&group, &normal);
                let images = spec
                    .embedding
                    .iter()
                    .map(|(x, y)| {
                        let xi = ng.index_of(x).ok_or_else(|| parse_err(format!("{x} is not in N")))?;
                        Ok((xi, element(&ghat, y)?))
                    })
                    .collect::<Result<Vec<_>, CliError>>()?;
                let embedding = extend_homomorphism(&ng, &ghat, &images).map_err(|e| parse_err(format!("embedding: {e}")))?;
                Some((ghat, embedding))
            }
        };
        Ok(Resolved { field, group, normal, g_prime, e, e_prime, module, unit_actions, twist, ambient })
    }
}
