use std::path::PathBuf;
use std::process::ExitCode;

use acris_core::fcrystals::{library, library_datum, library_names};
use acris_core::group_cohomology::{compute_figure, figure_fixture, render_markdown};
use acris_core::suites::{self, HwOptions};
use acris_core::verify::verify_paper;
use acris_core::{FCrystalDatum, Format, RSPair, Report, RunConfig};
use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(name = "acris", version, about = "Witt vectors, A_cris, F-crystals, Z/2 cohomology and Hasse-Witt checks")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    #[arg(long, global = true, default_value_t = 2)]
    p: u64,
    /// Residue field degree.
    #[arg(long, global = true, default_value_t = 1)]
    m: usize,
    /// Witt length of the coefficient ring.
    #[arg(long, global = true, default_value_t = 4)]
    precision: u32,
    /// Power of p allowed in divided-power denominators.
    #[arg(long, global = true, default_value_t = 4)]
    denom_depth: u32,
    #[arg(long, global = true, default_value_t = 8)]
    degree_cap: u64,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Emit JSON instead of markdown.
    #[arg(long, global = true)]
    json: bool,
    /// Overall wall-clock budget in milliseconds.
    #[arg(long, global = true)]
    budget_ms: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Witt vector identities.
    Witt {
        #[arg(long, default_value_t = 200)]
        samples: usize,
    },
    /// A_cris arithmetic, Nygaard filtration and the conucleo operator.
    Acris {
        /// Restrict the conucleo check to one coprime pair (r, s).
        #[arg(long, num_args = 2, value_names = ["R", "S"])]
        conucleo: Option<Vec<u32>>,
        #[arg(long, default_value_t = 100)]
        samples: usize,
    },
    /// Smoothness predicate of F-crystal data.
    Crystal {
        /// Library datum by name.
        #[arg(long, conflicts_with = "file")]
        datum: Option<String>,
        /// Datum in JSON form.
        #[arg(long)]
        file: Option<PathBuf>,
        /// List the library data.
        #[arg(long)]
        list: bool,
    },
    /// Spectral sequence pages of the figures.
    Spectral {
        /// e2-coherent, e3-coherent, e2-crystalline, e3-crystalline, e3-etale or a figure number.
        #[arg(long)]
        figure: String,
    },
    /// Hasse-Witt matrices, smoothness scans and hyperplane unions.
    Hw {
        /// Degree of the involution-invariant form over F_2.
        #[arg(long)]
        paper_f: Option<u32>,
        /// Ambient dimension.
        #[arg(long, default_value_t = 3)]
        n: usize,
        /// Scan for singular points over F_{p^k}, k up to this value.
        #[arg(long)]
        scan_m: Option<usize>,
        /// Form given as a polynomial in x0, x1, ... over F_{p^m}.
        #[arg(long, conflicts_with = "paper_f")]
        poly: Option<String>,
        /// Number of random general-position unions to test.
        #[arg(long, default_value_t = 0)]
        unions: usize,
    },
    /// All acceptance checks.
    VerifyPaper {
        /// Directory overriding the shipped figure fixtures.
        #[arg(long)]
        fixtures: Option<PathBuf>,
        /// Omit timing fields so that reports compare byte for byte.
        #[arg(long)]
        no_timing: bool,
    },
}

fn usage(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(2)
}

fn emit(report: Report) -> ExitCode {
    println!("{}", report.render());
    ExitCode::from(report.exit_code() as u8)
}

fn figure_number(name: &str) -> Option<u32> {
    match name {
        "e2-coherent" => Some(2),
        "e3-coherent" => Some(3),
        "e2-crystalline" => Some(4),
        "e3-crystalline" => Some(5),
        "e3-etale" => Some(7),
        n => n.parse().ok().filter(|n| figure_fixture(*n).is_some()),
    }
}

fn spectral(config: &RunConfig, figure: &str) -> ExitCode {
    let Some(n) = figure_number(figure) else {
        return usage(format!("unknown figure {figure}"));
    };
    let page = match compute_figure(n) {
        Ok(page) => page,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    let json = page.to_json();
    match config.format {
        Format::Json => print!("{json}"),
        Format::Markdown => print!("{}", render_markdown(&page)),
    }
    if figure_fixture(n) == Some(json.as_str()) {
        ExitCode::SUCCESS
    } else {
        eprintln!("figure {n}: computed page differs from the shipped fixture");
        ExitCode::from(1)
    }
}

fn crystal(config: &RunConfig, datum: Option<String>, file: Option<PathBuf>, list: bool) -> ExitCode {
    if list {
        for name in library_names() {
            println!("{name}");
        }
        return ExitCode::SUCCESS;
    }
    let data: acris_core::Result<Vec<FCrystalDatum>> = match (datum, file) {
        (Some(name), _) => match library_datum(&name) {
            Some(d) => d.map(|d| vec![d]),
            None => return usage(format!("no library datum named {name}")),
        },
        (None, Some(path)) => match std::fs::read_to_string(&path) {
            Ok(text) => FCrystalDatum::from_json(&text).map(|d| vec![d]),
            Err(e) => return usage(format!("{}: {e}", path.display())),
        },
        (None, None) => library(),
    };
    match data {
        Ok(data) => emit(suites::crystal_suite(config, &data)),
        Err(e) => usage(e),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let g = cli.global;
    let mut config = RunConfig {
        p: g.p,
        m: g.m,
        precision: g.precision,
        denom_depth: g.denom_depth,
        degree_cap: g.degree_cap,
        seed: g.seed,
        budget_ms: g.budget_ms,
        format: if g.json { Format::Json } else { Format::Markdown },
        fixtures_dir: None,
    };
    if let Err(e) = config.validate() {
        return usage(e);
    }
    match cli.command {
        Command::Witt { samples } => emit(suites::witt_suite(&config, samples)),
        Command::Acris { conucleo, samples } => {
            let pair = conucleo.map(|v| (v[0], v[1]));
            if let Some(Err(e)) = pair.map(|(r, s)| RSPair::new(r, s)) {
                return usage(e);
            }
            emit(suites::acris_suite(&config, pair, samples))
        }
        Command::Crystal { datum, file, list } => crystal(&config, datum, file, list),
        Command::Spectral { figure } => spectral(&config, &figure),
        Command::Hw { paper_f, n, scan_m, poly, unions } => {
            let opts = HwOptions { poly, paper_f, n, scan_m, unions };
            emit(suites::hw_suite(&config, &opts))
        }
        Command::VerifyPaper { fixtures, no_timing } => {
            config.fixtures_dir = fixtures;
            let report = verify_paper(&config);
            emit(if no_timing { report.without_timing() } else { report })
        }
    }
}
