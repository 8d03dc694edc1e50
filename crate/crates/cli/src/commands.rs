use std::fs::File;
use std::io::{self, BufWriter, Write};

use irs_core::{
    conversion_residuals, count_incomplete_sums, experiments::num, mae_experiment, single_path_sweep,
    write_sweep_csv,
};

use crate::config::CliConfig;
use crate::error::CliError;

/// Buffered sink for `config.out`, or stdout when unset.
fn sink(config: &CliConfig) -> Result<Box<dyn Write>, CliError> {
    Ok(match &config.out {
        Some(path) => {
            let file = File::create(path).map_err(CliError::io(format!("creating {}", path.display())))?;
            Box::new(BufWriter::new(file))
        }
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn emit(config: &CliConfig, write: impl FnOnce(&mut dyn Write) -> io::Result<()>) -> Result<(), CliError> {
    let context = match &config.out {
        Some(path) => format!("writing {}", path.display()),
        None => "writing stdout".to_string(),
    };
    let mut out = sink(config)?;
    write(&mut out)
        .and_then(|()| out.flush())
        .map_err(CliError::io(context))
}

pub fn sweep(config: &CliConfig) -> Result<(), CliError> {
    let rows = single_path_sweep(&config.experiment()?)?;
    emit(config, |out| write_sweep_csv(&rows, out))
}

pub fn mae(config: &CliConfig) -> Result<(), CliError> {
    let report = mae_experiment(&config.experiment()?)?;
    emit(config, |out| report.write_csv(out))
}

pub fn count(config: &CliConfig) -> Result<(), CliError> {
    let (Some(n), Some(k)) = (config.n, config.k) else {
        return Err(CliError::Usage("count needs --n and --K".into()));
    };
    let total = count_incomplete_sums(n, k)?;
    emit(config, |out| writeln!(out, "{total}"))
}

/// Per-path residuals go to the sink; the per-cell summary goes to stderr.
pub fn identity_check(config: &CliConfig) -> Result<(), CliError> {
    let experiment = config.experiment()?;
    if let Some(tol) = config.tol {
        if tol.is_nan() || tol < 0.0 {
            return Err(CliError::Usage(format!("--tol must be nonnegative, got {tol}")));
        }
    }
    let cells = conversion_residuals(&experiment)?;
    emit(config, |out| {
        writeln!(out, "strategy,r,K,path,residual")?;
        for cell in &cells {
            for (i, x) in cell.residuals.iter().enumerate() {
                writeln!(
                    out,
                    "{},{},{},{i},{}",
                    cell.strategy,
                    num(cell.r),
                    cell.k,
                    num(*x)
                )?;
            }
        }
        Ok(())
    })?;

    let mut failed = 0;
    let mut err = io::stderr().lock();
    let _ = writeln!(err, "strategy,r,K,paths,mean_abs_residual,stderr,tol,pass");
    for cell in &cells {
        let (mean, se) = cell.mean_abs();
        let tol = config.tol.unwrap_or(3.0 * cell.chi_square_scale);
        let pass = mean <= tol;
        failed += usize::from(!pass);
        let _ = writeln!(
            err,
            "{},{},{},{},{},{},{},{pass}",
            cell.strategy,
            num(cell.r),
            cell.k,
            cell.residuals.len(),
            num(mean),
            num(se),
            num(tol)
        );
    }
    if failed > 0 {
        return Err(CliError::CheckFailed(format!(
            "{failed} of {} cells exceed the residual tolerance",
            cells.len()
        )));
    }
    Ok(())
}
