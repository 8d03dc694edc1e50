//! Command-line front end for `irs-core`: flag and config-file handling,
//! experiment dispatch and CSV output.

pub mod args;
pub mod commands;
pub mod config;
pub mod error;

pub use args::Cli;
pub use config::{CliConfig, CommandName, Format};
pub use error::CliError;

/// Resolve flags over the optional config file and run the command.
pub fn run(cli: Cli) -> Result<(), CliError> {
    let file = match &cli.config {
        Some(path) => CliConfig::load(path)?,
        None => CliConfig::default(),
    };
    let print = cli.print_config;
    let config = file.overlay(cli.flags());

    if print {
        print!("{}", config.to_toml());
        return Ok(());
    }
    if config.verbosity.unwrap_or(0) > 0 {
        eprint!("{}", config.to_toml());
    }

    let Some(command) = config.command else {
        return Err(CliError::Usage(
            "no command given (on the command line or as `command` in the config)".into(),
        ));
    };
    let dispatch = || match command {
        CommandName::Sweep => commands::sweep(&config),
        CommandName::Mae => commands::mae(&config),
        CommandName::Count => commands::count(&config),
        CommandName::IdentityCheck => commands::identity_check(&config),
    };
    match config.threads {
        None => dispatch(),
        Some(0) => Err(CliError::Usage("--threads must be at least 1".into())),
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .map_err(|e| CliError::Usage(format!("thread pool: {e}")))?
            .install(dispatch),
    }
}
