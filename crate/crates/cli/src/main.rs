use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use stratachi::commands;
use stratachi::fuzz::FuzzParams;
use stratachi::EXIT_INPUT_ERROR;

#[derive(Parser)]
#[command(
    name = "stratachi",
    version,
    about = "Exact Euler-characteristic calculus on stratified spaces"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Validate a space or map document
    Validate {
        path: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Print the basis transition matrices of a space
    Bases {
        path: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Expand a function in a chosen basis
    Decompose {
        path: PathBuf,
        /// Function document (stratum id → integer); defaults to the
        /// constant function 1
        #[arg(long)]
        function: Option<PathBuf>,
        /// One of: open, closed, hat, ic, hat-dense, ic-dense
        #[arg(long, default_value = "hat")]
        basis: String,
        #[arg(long)]
        json: bool,
    },
    /// Push a function forward along a map
    Pushforward {
        path: PathBuf,
        #[arg(long)]
        function: Option<PathBuf>,
        /// Build the kernel without enforcing column consistency
        #[arg(long)]
        skip_kernel_validation: bool,
        #[arg(long)]
        json: bool,
    },
    /// Check one identity on a space or map document
    Verify {
        path: PathBuf,
        /// One of: eq3 eq4 eq5 eq6 eq7 eq11 eq12 eq13 eq14 eq15 eq16 eq17
        /// eq18 c1 c2
        #[arg(long)]
        formula: String,
        #[arg(long)]
        function: Option<PathBuf>,
        #[arg(long)]
        skip_kernel_validation: bool,
        #[arg(long)]
        json: bool,
    },
    /// Run randomized verification of every identity
    Fuzz {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        trials: u64,
        /// Maximum strata per generated space
        #[arg(long, default_value_t = 8)]
        strata: usize,
        /// Perturb one kernel entry per trial to prove failures are visible
        #[arg(long)]
        inject_fault: bool,
        #[arg(long)]
        json: bool,
    },
    /// List or run the built-in worked examples
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
}

#[derive(Subcommand)]
enum CatalogAction {
    /// List the worked examples
    List {
        #[arg(long)]
        json: bool,
    },
    /// Run every check of one worked example
    Run {
        name: String,
        #[arg(long)]
        json: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.cmd {
        Cmd::Validate { path, json } => commands::cmd_validate(path, *json),
        Cmd::Bases { path, json } => commands::cmd_bases(path, *json),
        Cmd::Decompose {
            path,
            function,
            basis,
            json,
        } => commands::cmd_decompose(path, function, basis, *json),
        Cmd::Pushforward {
            path,
            function,
            skip_kernel_validation,
            json,
        } => commands::cmd_pushforward(path, function, *skip_kernel_validation, *json),
        Cmd::Verify {
            path,
            formula,
            function,
            skip_kernel_validation,
            json,
        } => commands::cmd_verify(path, formula, function, *skip_kernel_validation, *json),
        Cmd::Fuzz {
            seed,
            trials,
            strata,
            inject_fault,
            json,
        } => commands::cmd_fuzz(
            &FuzzParams {
                seed: *seed,
                trials: *trials,
                max_strata: *strata,
                inject_fault: *inject_fault,
            },
            *json,
        ),
        Cmd::Catalog { action } => match action {
            CatalogAction::List { json } => commands::cmd_catalog_list(*json),
            CatalogAction::Run { name, json } => commands::cmd_catalog_run(name, *json),
        },
    };
    match result {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_INPUT_ERROR as u8)
        }
    }
}
