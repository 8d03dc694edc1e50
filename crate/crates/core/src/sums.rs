//! Complete and incomplete Riemann–Stieltjes sums on a sampled path.
//!
//! Every sum runs over `J \ J_K` in ascending index order with compensated
//! accumulation; the matching `deleted_*` functions run over `J_K`. Kept and
//! deleted parts of one form always add up to the complete sum.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::brownian::{BrownianPath, SeedDomain, SeedSpec};
use crate::compensated::CompensatedSum;
use crate::error::{invalid, Error, Result};
use crate::integrand::Integrand;
use crate::partition::{DeletionSet, Partition};

/// Which integral a sum approximates, and how its terms are formed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SumForm {
    /// `Φ(B_j, t_j) ΔB_j`.
    #[serde(rename = "ito")]
    ItoLeft,
    /// `Φ((B_j + B_{j+1}) / 2, t_j) ΔB_j`.
    #[serde(rename = "strat-midpoint")]
    StratMidpoint,
    /// `(Φ(B_{j+1}, t_{j+1}) + Φ(B_j, t_j)) / 2 · ΔB_j`.
    #[serde(rename = "strat-average")]
    StratAverage,
    /// `X(u_j) Δt_j`.
    #[serde(rename = "mean-square")]
    MeanSquare,
}

impl SumForm {
    pub fn as_str(self) -> &'static str {
        match self {
            SumForm::ItoLeft => "ito",
            SumForm::StratMidpoint => "strat-midpoint",
            SumForm::StratAverage => "strat-average",
            SumForm::MeanSquare => "mean-square",
        }
    }

    pub fn is_stratonovich(self) -> bool {
        matches!(self, SumForm::StratMidpoint | SumForm::StratAverage)
    }
}

impl fmt::Display for SumForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SumForm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "ito" | "ito-left" => Ok(SumForm::ItoLeft),
            "strat-midpoint" | "midpoint" => Ok(SumForm::StratMidpoint),
            "strat-average" | "strat" | "average" => Ok(SumForm::StratAverage),
            "mean-square" | "ms" => Ok(SumForm::MeanSquare),
            other => invalid(format!(
                "unknown form {other:?} (expected ito|strat-midpoint|strat-average|mean-square)"
            )),
        }
    }
}

/// Outcome of one (possibly incomplete) sum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SumResult {
    pub value: f64,
    pub kept_terms: usize,
    pub deleted_terms: usize,
    pub form: SumForm,
}

/// Choice of evaluation point `u_j ∈ [t_j, t_{j+1}]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum URule {
    Left,
    Right,
    Midpoint,
    RandomInCell,
}

type PathFunctional = Arc<dyn Fn(f64, &BrownianPath) -> f64 + Send + Sync>;

/// Second-order process `X(t)` integrated in the mean-square sense. It sees
/// the whole path, so path functionals like `∂Φ(B(t), t)/∂x` are expressible.
#[derive(Clone)]
pub struct MeanSquareProcess {
    eval: PathFunctional,
    pub u_rule: URule,
}

impl fmt::Debug for MeanSquareProcess {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MeanSquareProcess")
            .field("u_rule", &self.u_rule)
            .finish_non_exhaustive()
    }
}

impl MeanSquareProcess {
    pub fn new(eval: impl Fn(f64, &BrownianPath) -> f64 + Send + Sync + 'static, u_rule: URule) -> Self {
        Self {
            eval: Arc::new(eval),
            u_rule,
        }
    }

    /// `X(t) = f(t)`, ignoring the path.
    pub fn deterministic(f: impl Fn(f64) -> f64 + Send + Sync + 'static, u_rule: URule) -> Self {
        Self::new(move |t, _| f(t), u_rule)
    }

    /// `X(t) = Φ(B(t), t)`. Off-grid path values are linearly interpolated.
    pub fn along_path(phi: &Integrand, u_rule: URule) -> Self {
        let phi = phi.clone();
        Self::new(move |t, path| phi.eval(path.value_at(t), t), u_rule)
    }

    /// `X(t) = ∂Φ(B(t), t)/∂x`, if `phi` carries a derivative.
    pub fn derivative_of(phi: &Integrand, u_rule: URule) -> Option<Self> {
        let d = phi.derivative_fn()?;
        Some(Self::new(move |t, path| d(path.value_at(t), t), u_rule))
    }

    #[inline]
    pub fn eval(&self, t: f64, path: &BrownianPath) -> f64 {
        (self.eval)(t, path)
    }

    /// Evaluation points for every cell. Random points are drawn for all
    /// cells in index order, so a cell's point does not depend on deletions.
    pub fn evaluation_points(&self, partition: &Partition, seed: SeedSpec) -> Vec<f64> {
        let nodes = partition.nodes();
        let cells = nodes.windows(2);
        match self.u_rule {
            URule::Left => cells.map(|w| w[0]).collect(),
            URule::Right => cells.map(|w| w[1]).collect(),
            URule::Midpoint => cells.map(|w| w[0] + 0.5 * (w[1] - w[0])).collect(),
            URule::RandomInCell => {
                let mut rng = seed.rng(SeedDomain::EvaluationPoints);
                cells
                    .map(|w| {
                        let u: f64 = rng.random();
                        (w[0] + u * (w[1] - w[0])).min(w[1])
                    })
                    .collect()
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Selection {
    /// `J \ J_K`.
    Kept,
    /// `J_K`.
    Deleted,
}

fn check_dims(n: usize, del: &DeletionSet) -> Result<()> {
    if del.n() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            actual: del.n(),
        });
    }
    Ok(())
}

/// Per-cell terms of a path-driven form, indexed `0..n`. Feeding these to
/// [`sum_terms`] reproduces the matching `*_sum` bit for bit.
pub fn terms(path: &BrownianPath, phi: &Integrand, form: SumForm) -> Result<Vec<f64>> {
    let b = path.values();
    let t = path.partition().nodes();
    let n = path.len();
    let out = match form {
        SumForm::ItoLeft => (0..n).map(|j| phi.eval(b[j], t[j]) * (b[j + 1] - b[j])).collect(),
        SumForm::StratMidpoint => (0..n)
            .map(|j| phi.eval((b[j] + b[j + 1]) / 2.0, t[j]) * (b[j + 1] - b[j]))
            .collect(),
        SumForm::StratAverage => {
            let values: Vec<f64> = (0..=n).map(|j| phi.eval(b[j], t[j])).collect();
            (0..n)
                .map(|j| (values[j + 1] + values[j]) / 2.0 * (b[j + 1] - b[j]))
                .collect()
        }
        SumForm::MeanSquare => {
            return invalid("mean-square terms need a MeanSquareProcess, not an integrand");
        }
    };
    Ok(out)
}

/// Compensated sum of `terms` over the selected index set, ascending.
pub fn sum_terms(terms: &[f64], del: &DeletionSet, which: Selection, form: SumForm) -> Result<SumResult> {
    check_dims(terms.len(), del)?;
    let mut acc = CompensatedSum::new();
    match which {
        Selection::Kept => del.kept().for_each(|j| acc.add(terms[j])),
        Selection::Deleted => del.indices().iter().for_each(|&j| acc.add(terms[j])),
    }
    let (kept_terms, deleted_terms) = (del.n() - del.k(), del.k());
    Ok(SumResult {
        value: acc.value(),
        kept_terms,
        deleted_terms,
        form,
    })
}

fn path_sum(
    path: &BrownianPath,
    phi: &Integrand,
    del: &DeletionSet,
    form: SumForm,
    which: Selection,
) -> Result<SumResult> {
    check_dims(path.len(), del)?;
    sum_terms(&terms(path, phi, form)?, del, which, form)
}

/// Incomplete Itô sum `Σ_{J \ J_K} Φ(B_j, t_j) ΔB_j`.
pub fn ito_sum(path: &BrownianPath, phi: &Integrand, del: &DeletionSet) -> Result<SumResult> {
    path_sum(path, phi, del, SumForm::ItoLeft, Selection::Kept)
}

/// Incomplete Stratonovich sum with the integrand at the midpoint value.
pub fn strat_midpoint_sum(path: &BrownianPath, phi: &Integrand, del: &DeletionSet) -> Result<SumResult> {
    path_sum(path, phi, del, SumForm::StratMidpoint, Selection::Kept)
}

/// Incomplete Stratonovich sum with endpoint-averaged integrand values.
pub fn strat_average_sum(path: &BrownianPath, phi: &Integrand, del: &DeletionSet) -> Result<SumResult> {
    path_sum(path, phi, del, SumForm::StratAverage, Selection::Kept)
}

fn mean_square_terms(
    partition: &Partition,
    process: &MeanSquareProcess,
    path: &BrownianPath,
    seed: SeedSpec,
) -> Result<Vec<f64>> {
    if path.partition() != partition {
        return invalid("path was sampled on a different partition");
    }
    let points = process.evaluation_points(partition, seed);
    Ok(points
        .iter()
        .enumerate()
        .map(|(j, &u)| process.eval(u, path) * partition.step(j))
        .collect())
}

/// Incomplete mean-square sum `Σ_{J \ J_K} X(u_j) Δt_j`. `seed` is used only
/// by [`URule::RandomInCell`].
pub fn mean_square_sum(
    partition: &Partition,
    process: &MeanSquareProcess,
    path: &BrownianPath,
    del: &DeletionSet,
    seed: SeedSpec,
) -> Result<SumResult> {
    check_dims(partition.len(), del)?;
    let terms = mean_square_terms(partition, process, path, seed)?;
    sum_terms(&terms, del, Selection::Kept, SumForm::MeanSquare)
}

/// The mean-square terms over `J_K` only.
pub fn mean_square_deleted_part(
    partition: &Partition,
    process: &MeanSquareProcess,
    path: &BrownianPath,
    del: &DeletionSet,
    seed: SeedSpec,
) -> Result<SumResult> {
    check_dims(partition.len(), del)?;
    let terms = mean_square_terms(partition, process, path, seed)?;
    sum_terms(&terms, del, Selection::Deleted, SumForm::MeanSquare)
}

/// The terms of `form` over `J_K` only; complete = kept + deleted.
/// Mean-square sums go through [`mean_square_deleted_part`].
pub fn deleted_part(
    path: &BrownianPath,
    phi: &Integrand,
    del: &DeletionSet,
    form: SumForm,
) -> Result<SumResult> {
    path_sum(path, phi, del, form, Selection::Deleted)
}

/// `strat_midpoint − ito − ½ · Σ_{J \ J_K} ∂Φ(B_j, t_j)/∂x Δt_j` over the same
/// deletion set. Small on fine meshes.
pub fn conversion_residual(path: &BrownianPath, phi: &Integrand, del: &DeletionSet) -> Result<f64> {
    let Some(correction) = MeanSquareProcess::derivative_of(phi, URule::Left) else {
        return invalid("conversion residual needs an integrand with a derivative");
    };
    let strat = strat_midpoint_sum(path, phi, del)?;
    let ito = ito_sum(path, phi, del)?;
    // Left points are deterministic; the seed is never consulted.
    let ms = mean_square_sum(path.partition(), &correction, path, del, SeedSpec::new(0, 0))?;
    Ok(strat.value - ito.value - 0.5 * ms.value)
}
