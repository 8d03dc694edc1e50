//! Deletion-strategy experiments: single-path sweeps over `r` and Monte Carlo
//! mean-absolute-error curves.
//!
//! Path-level work runs on the current rayon pool. Results are gathered in
//! stream-index order and reduced sequentially, so output is identical for
//! any thread count.

use std::io::{self, Write};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::brownian::{sample_path, BrownianPath, SeedSpec};
use crate::compensated::CompensatedSum;
use crate::error::{invalid, Result};
use crate::integrand::{Integrand, IntegrandSpec};
use crate::partition::{deletion_set, k_of_n, DeletionSet, Partition, Strategy};
use crate::sums::{conversion_residual, sum_terms, terms, Selection, SumForm};

/// `∫_0^T B dB = ½B_T² − ½T`.
pub fn closed_form_ito_bdb(b_t: f64, horizon: f64) -> f64 {
    0.5 * b_t * b_t - 0.5 * horizon
}

/// `∫_0^T B ∘ dB = ½B_T²`.
pub fn closed_form_strat_bdb(b_t: f64) -> f64 {
    0.5 * b_t * b_t
}

/// Exact value of the integral as a function of `(B_T, T)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ClosedForm {
    form: SumForm,
    integrand: IntegrandSpec,
}

impl ClosedForm {
    /// The closed form for `form` and `integrand`, when one depends on the
    /// path only through `B_T`. Stratonovich integrals of time-independent
    /// integrands are `F(B_T)` with `F' = Φ`; Itô integrals are available for
    /// integrands affine in `x`. Mean-square integrals have none.
    pub fn lookup(form: SumForm, integrand: &IntegrandSpec) -> Option<Self> {
        let available = match form {
            SumForm::StratMidpoint | SumForm::StratAverage => true,
            SumForm::ItoLeft => match integrand {
                IntegrandSpec::Identity | IntegrandSpec::Constant(_) => true,
                IntegrandSpec::Poly(cs) => cs.len() <= 2,
                IntegrandSpec::Sin => false,
            },
            SumForm::MeanSquare => false,
        };
        available.then(|| Self {
            form,
            integrand: integrand.clone(),
        })
    }

    pub fn form(&self) -> SumForm {
        self.form
    }

    pub fn evaluate(&self, b_t: f64, horizon: f64) -> f64 {
        match (self.form, &self.integrand) {
            (SumForm::ItoLeft, IntegrandSpec::Identity) => closed_form_ito_bdb(b_t, horizon),
            (SumForm::ItoLeft, IntegrandSpec::Constant(c)) => c * b_t,
            (SumForm::ItoLeft, IntegrandSpec::Poly(cs)) => {
                let c0 = cs.first().copied().unwrap_or(0.0);
                let c1 = cs.get(1).copied().unwrap_or(0.0);
                c0 * b_t + c1 * closed_form_ito_bdb(b_t, horizon)
            }
            (_, IntegrandSpec::Identity) => closed_form_strat_bdb(b_t),
            (_, spec) => spec.antiderivative(b_t),
        }
    }
}

fn default_shared_paths() -> bool {
    true
}

/// Everything needed to reproduce one sweep or MAE study.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    #[serde(rename = "T")]
    pub horizon: f64,
    pub n: usize,
    pub r_values: Vec<f64>,
    pub strategies: Vec<Strategy>,
    pub iterations: usize,
    pub form: SumForm,
    pub integrand: IntegrandSpec,
    pub master_seed: u64,
    /// Evaluate every (strategy, r) cell on the same set of paths.
    #[serde(default = "default_shared_paths")]
    pub shared_paths: bool,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            horizon: 1.0,
            n: 10_000,
            r_values: (0..10).map(|i| i as f64 / 10.0).collect(),
            strategies: Strategy::ALL.to_vec(),
            iterations: 1000,
            form: SumForm::ItoLeft,
            integrand: IntegrandSpec::Identity,
            master_seed: 0,
            shared_paths: true,
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.horizon.is_finite() && self.horizon > 0.0) {
            return invalid(format!("T must be positive, got {}", self.horizon));
        }
        if self.n < 2 {
            return invalid(format!("n must be at least 2, got {}", self.n));
        }
        if self.r_values.is_empty() {
            return invalid("r_values is empty");
        }
        if let Some(r) = self.r_values.iter().find(|r| !(0.0..1.0).contains(*r)) {
            return invalid(format!("every r must lie in [0, 1), got {r}"));
        }
        if self.strategies.is_empty() {
            return invalid("no deletion strategies selected");
        }
        if self.iterations == 0 {
            return invalid("iterations must be at least 1");
        }
        Ok(())
    }

    pub fn partition(&self) -> Result<Partition> {
        Partition::equal(self.horizon, self.n)
    }

    /// `(strategy, r, K)` for every requested cell, strategy-major.
    fn cells(&self) -> Result<Vec<Cell>> {
        let mut out = Vec::with_capacity(self.strategies.len() * self.r_values.len());
        for &strategy in &self.strategies {
            for &r in &self.r_values {
                out.push(Cell {
                    strategy,
                    r,
                    k: k_of_n(self.n, r)?,
                });
            }
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, Copy)]
struct Cell {
    strategy: Strategy,
    r: f64,
    k: usize,
}

/// Prepared per-path view: cell terms, their complete sum and the reference
/// value the incomplete sums are compared against.
struct PathEval {
    terms: Vec<f64>,
    reference: f64,
}

struct Engine {
    partition: Partition,
    phi: Integrand,
    closed: Option<ClosedForm>,
    form: SumForm,
}

impl Engine {
    fn new(config: &ExperimentConfig) -> Result<Self> {
        config.validate()?;
        Ok(Self {
            partition: config.partition()?,
            phi: config.integrand.build(),
            closed: ClosedForm::lookup(config.form, &config.integrand),
            form: config.form,
        })
    }

    fn path_terms(&self, path: &BrownianPath) -> Result<Vec<f64>> {
        match self.form {
            // X(t_j) = Φ(B_j, t_j) at left endpoints.
            SumForm::MeanSquare => {
                let b = path.values();
                let t = self.partition.nodes();
                Ok((0..self.partition.len())
                    .map(|j| self.phi.eval(b[j], t[j]) * self.partition.step(j))
                    .collect())
            }
            form => terms(path, &self.phi, form),
        }
    }

    fn evaluate(&self, seed: SeedSpec) -> Result<(BrownianPath, PathEval)> {
        let path = sample_path(&self.partition, seed);
        let terms = self.path_terms(&path)?;
        let reference = match &self.closed {
            Some(cf) => cf.evaluate(path.terminal(), self.partition.horizon()),
            None => {
                let all = DeletionSet::empty(terms.len());
                sum_terms(&terms, &all, Selection::Kept, self.form)?.value
            }
        };
        Ok((path, PathEval { terms, reference }))
    }

    fn deletion(&self, cell: &Cell, cell_index: usize, seed: SeedSpec) -> Result<DeletionSet> {
        deletion_set(
            self.partition.len(),
            cell.k,
            cell.strategy,
            seed.derive_u64(cell_index as u64),
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Metric {
    /// `|kept sum − reference|`.
    AbsError,
    /// Sum over the deleted indices.
    DeletedPart,
    /// Stratonovich − Itô − ½ mean-square correction over the kept indices.
    ConversionResidual,
}

/// Per-cell, per-path metric values, paths in ascending stream order.
fn run_cells(config: &ExperimentConfig, metric: Metric) -> Result<(Vec<Cell>, Vec<Vec<f64>>)> {
    let engine = Engine::new(config)?;
    let cells = config.cells()?;
    let n_iter = config.iterations;

    if metric == Metric::ConversionResidual && !engine.phi.has_derivative() {
        return invalid(format!("integrand {} has no derivative", config.integrand));
    }

    let measure =
        |path: &BrownianPath, eval: &PathEval, cell: &Cell, ci: usize, seed: SeedSpec| -> Result<f64> {
            let del = engine.deletion(cell, ci, seed)?;
            Ok(match metric {
                Metric::AbsError => {
                    let kept = sum_terms(&eval.terms, &del, Selection::Kept, engine.form)?.value;
                    (kept - eval.reference).abs()
                }
                Metric::DeletedPart => sum_terms(&eval.terms, &del, Selection::Deleted, engine.form)?.value,
                Metric::ConversionResidual => conversion_residual(path, &engine.phi, &del)?,
            })
        };

    let mut table = vec![Vec::with_capacity(n_iter); cells.len()];
    if config.shared_paths {
        let rows: Vec<Vec<f64>> = (0..n_iter as u64)
            .into_par_iter()
            .map(|i| {
                let seed = SeedSpec::new(config.master_seed, i);
                let (path, eval) = engine.evaluate(seed)?;
                cells
                    .iter()
                    .enumerate()
                    .map(|(ci, cell)| measure(&path, &eval, cell, ci, seed))
                    .collect::<Result<Vec<f64>>>()
            })
            .collect::<Result<_>>()?;
        for row in rows {
            for (ci, v) in row.into_iter().enumerate() {
                table[ci].push(v);
            }
        }
    } else {
        for (ci, cell) in cells.iter().enumerate() {
            let base = (ci * n_iter) as u64;
            table[ci] = (0..n_iter as u64)
                .into_par_iter()
                .map(|i| {
                    let seed = SeedSpec::new(config.master_seed, base + i);
                    let (path, eval) = engine.evaluate(seed)?;
                    measure(&path, &eval, cell, ci, seed)
                })
                .collect::<Result<_>>()?;
        }
    }
    Ok((cells, table))
}

/// Sample mean and standard error of the mean (`s / √N`, `s` with `N − 1`).
pub fn mean_and_stderr(xs: &[f64]) -> (f64, f64) {
    let m = xs.len() as f64;
    if xs.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let mean = xs.iter().copied().collect::<CompensatedSum>().value() / m;
    if xs.len() == 1 {
        return (mean, 0.0);
    }
    let ss = xs
        .iter()
        .map(|x| (x - mean) * (x - mean))
        .collect::<CompensatedSum>()
        .value();
    (mean, (ss / (m - 1.0)).sqrt() / m.sqrt())
}

/// One cell of a single-path sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub form: SumForm,
    pub strategy: Strategy,
    pub r: f64,
    pub k: usize,
    pub value: f64,
    /// Closed-form integral value, or the complete sum when the integral has
    /// no closed form in `B_T`.
    pub closed_form: f64,
    pub abs_error: f64,
}

/// Evaluates every `(strategy, r)` cell on the single path with stream index 0.
pub fn single_path_sweep(config: &ExperimentConfig) -> Result<Vec<SweepRow>> {
    let engine = Engine::new(config)?;
    let seed = SeedSpec::new(config.master_seed, 0);
    let (_, eval) = engine.evaluate(seed)?;
    config
        .cells()?
        .iter()
        .enumerate()
        .map(|(ci, cell)| {
            let del = engine.deletion(cell, ci, seed)?;
            let value = sum_terms(&eval.terms, &del, Selection::Kept, config.form)?.value;
            Ok(SweepRow {
                form: config.form,
                strategy: cell.strategy,
                r: cell.r,
                k: cell.k,
                value,
                closed_form: eval.reference,
                abs_error: (value - eval.reference).abs(),
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaeRow {
    pub form: SumForm,
    pub strategy: Strategy,
    pub r: f64,
    pub k: usize,
    pub iterations: usize,
    pub mae: f64,
    /// Standard error of `mae`.
    pub stderr: f64,
}

/// Mean absolute error per `(strategy, r)`, in config order (strategy-major).
#[derive(Debug, Clone, PartialEq)]
pub struct MaeReport {
    pub rows: Vec<MaeRow>,
}

impl MaeReport {
    pub fn get(&self, strategy: Strategy, r: f64) -> Option<&MaeRow> {
        self.rows
            .iter()
            .find(|row| row.strategy == strategy && row.r == r)
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "form,strategy,r,K,N,mae,stderr")?;
        for row in &self.rows {
            writeln!(
                out,
                "{},{},{},{},{},{},{}",
                row.form,
                row.strategy,
                num(row.r),
                row.k,
                row.iterations,
                num(row.mae),
                num(row.stderr)
            )?;
        }
        Ok(())
    }
}

/// Full-precision (17 significant digit) rendering used in every CSV.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn write_sweep_csv<W: Write>(rows: &[SweepRow], mut out: W) -> io::Result<()> {
    writeln!(out, "form,strategy,r,K,value,closed_form,abs_error")?;
    for row in rows {
        writeln!(
            out,
            "{},{},{},{},{},{},{}",
            row.form,
            row.strategy,
            num(row.r),
            row.k,
            num(row.value),
            num(row.closed_form),
            num(row.abs_error)
        )?;
    }
    Ok(())
}

/// Monte Carlo MAE of the incomplete sums against the reference value over
/// `config.iterations` independent paths.
pub fn mae_experiment(config: &ExperimentConfig) -> Result<MaeReport> {
    let (cells, table) = run_cells(config, Metric::AbsError)?;
    let rows = cells
        .iter()
        .zip(&table)
        .map(|(cell, errs)| {
            let (mae, stderr) = mean_and_stderr(errs);
            MaeRow {
                form: config.form,
                strategy: cell.strategy,
                r: cell.r,
                k: cell.k,
                iterations: errs.len(),
                mae,
                stderr,
            }
        })
        .collect();
    Ok(MaeReport { rows })
}

/// Sample moments of the deleted part `Σ_{J_K} term_j` for one cell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeletedPartRow {
    pub strategy: Strategy,
    pub r: f64,
    pub k: usize,
    pub mean: f64,
    pub mean_stderr: f64,
    pub mean_square: f64,
    pub mean_square_stderr: f64,
}

/// Mean and mean square of the deleted part across paths, per cell.
pub fn deleted_part_moments(config: &ExperimentConfig) -> Result<Vec<DeletedPartRow>> {
    let (cells, table) = run_cells(config, Metric::DeletedPart)?;
    Ok(cells
        .iter()
        .zip(&table)
        .map(|(cell, xs)| {
            let (mean, mean_stderr) = mean_and_stderr(xs);
            let squares: Vec<f64> = xs.iter().map(|x| x * x).collect();
            let (mean_square, mean_square_stderr) = mean_and_stderr(&squares);
            DeletedPartRow {
                strategy: cell.strategy,
                r: cell.r,
                k: cell.k,
                mean,
                mean_stderr,
                mean_square,
                mean_square_stderr,
            }
        })
        .collect())
}

/// Conversion-identity residuals of one cell, paths in stream order.
#[derive(Debug, Clone, PartialEq)]
pub struct ResidualCell {
    pub strategy: Strategy,
    pub r: f64,
    pub k: usize,
    pub residuals: Vec<f64>,
    /// `E|Σ_kept ½(ΔB² − Δt)| = ½√(2 Σ_kept Δt²)·√(2/π)`, the residual scale
    /// for `Φ(x) = x` and an upper scale whenever `|∂Φ/∂x| ≤ 1`.
    pub chi_square_scale: f64,
}

impl ResidualCell {
    /// Mean of `|residual|` and its standard error.
    pub fn mean_abs(&self) -> (f64, f64) {
        let abs: Vec<f64> = self.residuals.iter().map(|x| x.abs()).collect();
        mean_and_stderr(&abs)
    }
}

/// `conversion_residual` on `config.iterations` paths for every cell. The
/// integrand must carry a derivative; `config.form` is ignored.
pub fn conversion_residuals(config: &ExperimentConfig) -> Result<Vec<ResidualCell>> {
    let (cells, table) = run_cells(config, Metric::ConversionResidual)?;
    let mesh = config.horizon / config.n as f64;
    Ok(cells
        .iter()
        .zip(table)
        .map(|(cell, residuals)| {
            let kept_sq = (config.n - cell.k) as f64 * mesh * mesh;
            ResidualCell {
                strategy: cell.strategy,
                r: cell.r,
                k: cell.k,
                residuals,
                chi_square_scale: 0.5 * (2.0 * kept_sq).sqrt() * (2.0 / std::f64::consts::PI).sqrt(),
            }
        })
        .collect())
}

/// Whether `MAE_begin ≤ MAE_random ≤ MAE_end` holds at one `r`, each
/// comparison allowing two combined standard errors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrderingVerdict {
    pub r: f64,
    pub begin: f64,
    pub random: f64,
    pub end: f64,
    pub consistent: bool,
}

pub fn ordering_check(report: &MaeReport) -> Result<Vec<OrderingVerdict>> {
    let mut rs: Vec<f64> = Vec::new();
    for row in &report.rows {
        if row.r > 0.0 && !rs.contains(&row.r) {
            rs.push(row.r);
        }
    }
    rs.iter()
        .map(|&r| {
            let pick = |s: Strategy| {
                report
                    .get(s, r)
                    .ok_or_else(|| crate::Error::InvalidArgument(format!("report lacks {s} rows at r = {r}")))
            };
            let (b, m, e) = (
                pick(Strategy::Begin)?,
                pick(Strategy::Random)?,
                pick(Strategy::End)?,
            );
            let le = |lo: &MaeRow, hi: &MaeRow| lo.mae <= hi.mae + 2.0 * lo.stderr.hypot(hi.stderr);
            Ok(OrderingVerdict {
                r,
                begin: b.mae,
                random: m.mae,
                end: e.mae,
                consistent: le(b, m) && le(m, e),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(form: SumForm) -> ExperimentConfig {
        ExperimentConfig {
            n: 200,
            r_values: vec![0.0, 0.3, 0.6],
            iterations: 50,
            form,
            master_seed: 9,
            ..Default::default()
        }
    }

    #[test]
    fn closed_form_examples() {
        assert_eq!(closed_form_ito_bdb(1.0, 1.0), 0.0);
        assert_eq!(closed_form_ito_bdb(2.0, 1.0), 1.5);
        assert_eq!(closed_form_ito_bdb(0.0, 2.0), -1.0);
        assert_eq!(closed_form_strat_bdb(0.0), 0.0);
        assert_eq!(closed_form_strat_bdb(2.0), 2.0);
        assert_eq!(closed_form_strat_bdb(-3.0), 4.5);
    }

    #[test]
    fn closed_form_lookup() {
        let id = IntegrandSpec::Identity;
        let ito = ClosedForm::lookup(SumForm::ItoLeft, &id).unwrap();
        assert_eq!(ito.evaluate(2.0, 1.0), 1.5);
        let strat = ClosedForm::lookup(SumForm::StratMidpoint, &id).unwrap();
        assert_eq!(strat.evaluate(-3.0, 1.0), 4.5);
        let sin = ClosedForm::lookup(SumForm::StratAverage, &IntegrandSpec::Sin).unwrap();
        assert_eq!(sin.evaluate(0.0, 1.0), 0.0);
        assert!(ClosedForm::lookup(SumForm::ItoLeft, &IntegrandSpec::Sin).is_none());
        assert!(ClosedForm::lookup(SumForm::MeanSquare, &id).is_none());
        let affine = ClosedForm::lookup(SumForm::ItoLeft, &IntegrandSpec::Poly(vec![2.0, 1.0])).unwrap();
        assert_eq!(affine.evaluate(2.0, 1.0), 4.0 + 1.5);
    }

    #[test]
    fn config_validation() {
        assert!(ExperimentConfig::default().validate().is_ok());
        let bad = [
            ExperimentConfig {
                n: 1,
                ..Default::default()
            },
            ExperimentConfig {
                iterations: 0,
                ..Default::default()
            },
            ExperimentConfig {
                r_values: vec![1.0],
                ..Default::default()
            },
            ExperimentConfig {
                r_values: vec![],
                ..Default::default()
            },
            ExperimentConfig {
                strategies: vec![],
                ..Default::default()
            },
            ExperimentConfig {
                horizon: 0.0,
                ..Default::default()
            },
        ];
        for c in bad {
            assert!(c.validate().is_err(), "{c:?}");
            assert!(mae_experiment(&c).is_err());
        }
    }

    #[test]
    fn mae_rows_cover_every_cell() {
        let report = mae_experiment(&small(SumForm::ItoLeft)).unwrap();
        assert_eq!(report.rows.len(), 9);
        assert!(report
            .rows
            .iter()
            .all(|r| r.mae >= 0.0 && r.stderr >= 0.0 && r.iterations == 50));
        assert_eq!(report.rows[0].strategy, Strategy::Begin);
        assert_eq!(report.rows[3].strategy, Strategy::Random);
    }

    #[test]
    fn r_zero_rows_agree_across_strategies() {
        let report = mae_experiment(&small(SumForm::ItoLeft)).unwrap();
        let b = report.get(Strategy::Begin, 0.0).unwrap();
        for s in [Strategy::Random, Strategy::End] {
            let row = report.get(s, 0.0).unwrap();
            assert_eq!((row.mae, row.stderr), (b.mae, b.stderr));
        }
    }

    #[test]
    fn unshared_paths_differ_but_stay_valid() {
        let shared = mae_experiment(&small(SumForm::ItoLeft)).unwrap();
        let mut cfg = small(SumForm::ItoLeft);
        cfg.shared_paths = false;
        let unshared = mae_experiment(&cfg).unwrap();
        assert_eq!(shared.rows.len(), unshared.rows.len());
        assert_ne!(shared, unshared);
        assert_ne!(
            unshared.get(Strategy::Begin, 0.0).unwrap().mae,
            unshared.get(Strategy::End, 0.0).unwrap().mae
        );
    }

    #[test]
    fn mean_square_form_uses_complete_sum_reference() {
        let report = mae_experiment(&small(SumForm::MeanSquare)).unwrap();
        assert_eq!(report.get(Strategy::End, 0.0).unwrap().mae, 0.0);
        assert!(report.get(Strategy::End, 0.6).unwrap().mae > 0.0);
    }

    #[test]
    fn sweep_row_count_and_r_zero() {
        let rows = single_path_sweep(&small(SumForm::StratAverage)).unwrap();
        assert_eq!(rows.len(), 9);
        for row in rows.iter().filter(|r| r.r == 0.0) {
            assert_eq!(row.k, 0);
            assert!(row.abs_error < 1e-13);
        }
    }

    #[test]
    fn ordering_check_ties_and_missing_rows() {
        let row = |strategy, r| MaeRow {
            form: SumForm::ItoLeft,
            strategy,
            r,
            k: 3,
            iterations: 10,
            mae: 0.5,
            stderr: 0.0,
        };
        let full = MaeReport {
            rows: Strategy::ALL
                .iter()
                .flat_map(|&s| [row(s, 0.0), row(s, 0.5)])
                .collect(),
        };
        let v = ordering_check(&full).unwrap();
        assert_eq!(v.len(), 1);
        assert!(v[0].consistent);

        let missing = MaeReport {
            rows: vec![row(Strategy::Begin, 0.5), row(Strategy::Random, 0.5)],
        };
        assert!(ordering_check(&missing).is_err());

        let mut inverted = full.clone();
        inverted
            .rows
            .iter_mut()
            .filter(|r| r.strategy == Strategy::Begin)
            .for_each(|r| r.mae = 2.0);
        assert!(!ordering_check(&inverted).unwrap()[0].consistent);
    }

    #[test]
    fn mean_and_stderr_small_cases() {
        assert_eq!(mean_and_stderr(&[2.0]), (2.0, 0.0));
        let (m, se) = mean_and_stderr(&[1.0, 3.0]);
        assert_eq!(m, 2.0);
        assert!((se - 1.0).abs() < 1e-15);
        assert!(mean_and_stderr(&[]).0.is_nan());
    }

    #[test]
    fn csv_headers() {
        let report = mae_experiment(&small(SumForm::ItoLeft)).unwrap();
        let mut buf = Vec::new();
        report.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("form,strategy,r,K,N,mae,stderr\nito,begin,0.0000000000000000e0,0,50,"));
        assert_eq!(text.lines().count(), 10);

        let rows = single_path_sweep(&small(SumForm::ItoLeft)).unwrap();
        let mut buf = Vec::new();
        write_sweep_csv(&rows, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("form,strategy,r,K,value,closed_form,abs_error\n"));
    }

    #[test]
    fn conversion_residuals_per_cell() {
        let config = small(SumForm::ItoLeft);
        let cells = conversion_residuals(&config).unwrap();
        assert_eq!(cells.len(), 9);
        for cell in &cells {
            assert_eq!(cell.residuals.len(), 50);
            let expected = 0.5
                * (2.0 * (200 - cell.k) as f64 / 200.0 / 200.0).sqrt()
                * (2.0 / std::f64::consts::PI).sqrt();
            assert!((cell.chi_square_scale - expected).abs() < 1e-15);
            let (mean, se) = cell.mean_abs();
            assert!((mean - expected).abs() <= 5.0 * se, "{mean} vs {expected}");
        }
        // Without deletion every strategy sees the same residuals.
        assert_eq!(cells[0].residuals, cells[3].residuals);

        let flat = ExperimentConfig {
            integrand: IntegrandSpec::Constant(-1.5),
            ..config
        };
        for cell in conversion_residuals(&flat).unwrap() {
            assert!(cell.residuals.iter().all(|&x| x == 0.0));
        }
    }
}
