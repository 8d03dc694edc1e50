//! Complete and incomplete Riemann–Stieltjes sums for stochastic integrals
//! driven by Brownian motion.
//!
//! An incomplete sum drops the terms indexed by a deletion set `J_K` from the
//! usual Itô, Stratonovich or mean-square Riemann–Stieltjes sum. The crate
//! samples Brownian paths on equal partitions, evaluates complete and
//! incomplete sums, and runs the deletion-strategy experiments that compare
//! them with closed-form integrals.
//!
//! ```
//! use irs_core::{deletion_set, ito_sum, sample_path, Integrand, Partition, SeedSpec, Strategy};
//!
//! let grid = Partition::equal(1.0, 1000).unwrap();
//! let path = sample_path(&grid, SeedSpec::new(42, 0));
//! let del = deletion_set(1000, 31, Strategy::End, 0).unwrap();
//! let s = ito_sum(&path, &Integrand::identity(), &del).unwrap();
//! assert_eq!(s.kept_terms + s.deleted_terms, 1000);
//! ```

pub mod brownian;
pub mod compensated;
mod error;
pub mod experiments;
pub mod integrand;
pub mod partition;
pub mod sums;

pub use brownian::{increment_moments, sample_path, BrownianPath, IncrementMoments, SeedDomain, SeedSpec};
pub use compensated::{compensated_sum, CompensatedSum};
pub use error::{Error, Result};
pub use experiments::{
    closed_form_ito_bdb, closed_form_strat_bdb, conversion_residuals, deleted_part_moments, mae_experiment,
    ordering_check, single_path_sweep, write_sweep_csv, ClosedForm, DeletedPartRow, ExperimentConfig,
    MaeReport, MaeRow, OrderingVerdict, ResidualCell, SweepRow,
};
pub use integrand::{Integrand, IntegrandSpec};
pub use partition::{
    binomial, count_deletion_subsets, count_incomplete_sums, deletion_set, k_of_n, make_equal_partition,
    DeletionSet, Partition, Strategy,
};
pub use sums::{
    conversion_residual, deleted_part, ito_sum, mean_square_deleted_part, mean_square_sum, strat_average_sum,
    strat_midpoint_sum, MeanSquareProcess, Selection, SumForm, SumResult, URule,
};
