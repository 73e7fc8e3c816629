use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use clusterplan::topology::BlockingBasis;
use clusterplan_cli::{render, CliError, Options, Output};

#[derive(Parser)]
#[command(
    name = "clusterplan",
    version,
    about = "Capacity and performance figures for HPC cluster descriptions"
)]
struct Cli {
    /// Output style.
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    format: Format,

    /// Ignore unknown fields in cluster files instead of rejecting them.
    #[arg(long, global = true)]
    lenient: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Table,
    Machine,
}

#[derive(Clone, Copy, ValueEnum)]
enum Basis {
    PortBudget,
    Attached,
}

#[derive(Subcommand)]
enum Command {
    /// Check every model and fabric invariant.
    Validate { spec: PathBuf },
    /// Theoretical CPU peak per node.
    Peak {
        spec: PathBuf,
        /// Partition or reference node.
        #[arg(long, default_value = "normal")]
        partition: String,
        /// Vector variant; all variants when omitted.
        #[arg(long)]
        variant: Option<String>,
        /// Clock in GHz; the base frequency when omitted.
        #[arg(long)]
        frequency: Option<f64>,
    },
    /// Compare a cluster against a baseline cluster.
    Compare {
        spec: PathBuf,
        baseline: PathBuf,
        #[arg(long, default_value = "normal")]
        node: String,
        #[arg(long, default_value = "normal")]
        baseline_node: String,
    },
    /// Port budget, blocking factor and bisection of the fabric.
    Topology {
        spec: PathBuf,
        #[arg(long, value_enum)]
        basis: Option<Basis>,
    },
    /// Storage capacity and IO500 results.
    Storage {
        spec: PathBuf,
        /// IO500 file of another system to compare against.
        #[arg(long)]
        baseline_io500: Option<PathBuf>,
    },
    /// PUE from total and IT energy.
    Pue {
        #[arg(long)]
        total: f64,
        #[arg(long)]
        it: f64,
        #[arg(long, default_value = "ad hoc")]
        label: String,
    },
    /// Every analysis the file supports.
    Report { spec: PathBuf },
    /// Print the JSON schema of cluster files.
    Schema,
}

fn emit(out: &Output, format: Format) {
    match format {
        Format::Table => print!("{}", render::text(out)),
        Format::Machine => print!("{}", out.report.to_json()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let opts = Options { lenient: cli.lenient };
    let result = match &cli.command {
        Command::Validate { spec } => clusterplan_cli::cmd_validate(spec, opts),
        Command::Peak {
            spec,
            partition,
            variant,
            frequency,
        } => clusterplan_cli::cmd_peak(spec, partition, variant.as_deref(), *frequency, opts),
        Command::Compare {
            spec,
            baseline,
            node,
            baseline_node,
        } => clusterplan_cli::cmd_compare(spec, baseline, node, baseline_node, opts),
        Command::Topology { spec, basis } => {
            let basis = basis.map(|b| match b {
                Basis::PortBudget => BlockingBasis::PortBudget,
                Basis::Attached => BlockingBasis::Attached,
            });
            clusterplan_cli::cmd_topology(spec, basis, opts)
        }
        Command::Storage { spec, baseline_io500 } => {
            clusterplan_cli::cmd_storage(spec, baseline_io500.as_deref(), opts)
        }
        Command::Pue { total, it, label } => clusterplan_cli::cmd_pue(*total, *it, label),
        Command::Report { spec } => clusterplan_cli::cmd_report(spec, opts),
        Command::Schema => {
            print!("{}", clusterplan::model::json_schema());
            return ExitCode::SUCCESS;
        }
    };
    match result {
        Ok(out) => {
            emit(&out, cli.format);
            ExitCode::from(out.exit_code() as u8)
        }
        Err(CliError::Invalid(out)) => {
            emit(&out, cli.format);
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
