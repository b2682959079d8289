use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use lawson::report::{self, RunOptions};
use lawson::{Error, Family};

#[derive(Parser)]
#[command(name = "lawson", version, about = "Bipolar surfaces of the Lawson surfaces xi and eta")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
    Md,
}

#[derive(clap::Args)]
struct Common {
    #[arg(long, value_parser = parse_family)]
    family: Family,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Run every cross-check; any failure exits with code 3.
    #[arg(long)]
    verify: bool,
    /// Permit (m, k) = (2, 2).
    #[arg(long)]
    allow_excluded: bool,
    /// Upper bound on the group order during closure.
    #[arg(long, default_value_t = lawson::group::DEFAULT_CAP)]
    cap: usize,
}

impl Common {
    fn options(&self) -> RunOptions {
        RunOptions { verify: self.verify, allow_excluded: self.allow_excluded, cap: self.cap }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Report for a single (m, k).
    Report {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        m: u32,
        #[arg(long)]
        k: u32,
        /// Write the cell complex of S to this path.
        #[arg(long)]
        export_complex: Option<PathBuf>,
    },
    /// Table over inclusive ranges of m and k.
    Batch {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        m_range: String,
        #[arg(long)]
        k_range: String,
    },
}

fn parse_family(s: &str) -> Result<Family, String> {
    s.parse()
}

fn run_report(common: &Common, m: u32, k: u32, export: Option<&PathBuf>) -> Result<String, Error> {
    let opts = common.options();
    let analysis = report::analyze(common.family, m, k, &opts)?;
    if let Some(path) = export {
        std::fs::write(path, analysis.surface.s().export()).map_err(|e| Error::Io(e.to_string()))?;
    }
    let r = analysis.report;
    let text = match common.format {
        Format::Json => report::report_json(&r),
        Format::Csv => report::report_csv(&r),
        Format::Md => report::report_markdown(&r),
    };
    if opts.verify && !r.all_checks_pass() {
        print!("{text}");
        return Err(Error::CrossCheck(r.failed_checks().join(", ")));
    }
    Ok(text)
}

fn run_batch(common: &Common, m_range: &str, k_range: &str) -> Result<(String, i32), Error> {
    let m = report::parse_range(m_range)?;
    let k = report::parse_range(k_range)?;
    let rows = report::run_batch(common.family, m, k, &common.options());
    let text = match common.format {
        Format::Json => report::batch_json(common.family, &rows),
        Format::Csv => report::batch_csv(common.family, &rows),
        Format::Md => report::batch_markdown(common.family, &rows),
    };
    Ok((text, report::batch_exit_code(&rows)))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Report { common, m, k, export_complex } => {
            run_report(common, *m, *k, export_complex.as_ref()).map(|t| (t, 0))
        }
        Command::Batch { common, m_range, k_range } => run_batch(common, m_range, k_range),
    };
    match result {
        Ok((text, code)) => {
            print!("{text}");
            if !text.ends_with('\n') {
                println!();
            }
            ExitCode::from(code as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
