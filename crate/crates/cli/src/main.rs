//! `permtab`: enumerate, count, sample and test permutation tableaux.
//!
//! Exit status is 0 on success, 1 when a verification suite finds a
//! counterexample and 2 for usage errors or unmet preconditions.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use permtab::clt::{run_mc_with_samples, ExperimentConfig, Normalization, Source, Statistic};
use permtab::dist::{distribution_pgf, format_rational, moment_formulas, pgf_of, MomentTable};
use permtab::growth::{distribution_dp, exhaustive_stat_distribution, sample_uniform_with};
use permtab::rng::{rng_from_seed, DEFAULT_SEED};
use permtab::verify::{run_suite, Suite, VerifyError};
use permtab::{enumerate, DistributionTable, Tableau, TableauStat};

#[derive(Parser, Debug)]
#[command(
    name = "permtab",
    version,
    about = "Exact and Monte Carlo statistics of permutation tableaux"
)]
struct Cli {
    /// Worker thread cap.
    #[arg(long, global = true, env = "PERMTAB_THREADS")]
    threads: Option<usize>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List every tableau of length n in canonical order.
    Enumerate {
        #[arg(long)]
        n: usize,
    },
    /// Exact distribution of one statistic.
    Dist(DistArgs),
    /// Exact means, variances and related moments.
    Moments {
        #[arg(long)]
        n: usize,
    },
    /// Uniform random tableaux.
    Sample {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        count: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// Monte Carlo experiment on a normalized statistic.
    Clt(CltArgs),
    /// Run an exact invariant suite.
    Verify {
        #[arg(long)]
        suite: String,
        #[arg(long, default_value_t = 7)]
        nmax: usize,
    },
}

#[derive(Args, Debug)]
struct DistArgs {
    #[arg(long)]
    n: usize,
    /// unrestricted | first-row | rows | columns | superfluous | total-ones
    #[arg(long)]
    stat: String,
    #[arg(long, value_enum)]
    method: Option<Method>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Method {
    Pgf,
    Dp,
    Exhaustive,
}

#[derive(Args, Debug)]
struct CltArgs {
    /// U | F | R | S | Y | pattern31_2 (or a tableau statistic name)
    #[arg(long)]
    stat: String,
    /// tableau-sampler | permutation | indicators
    #[arg(long, default_value = "tableau-sampler")]
    source: String,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 10_000)]
    trials: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// asymptotic | exact
    #[arg(long, default_value = "asymptotic")]
    normalization: String,
    /// Also write the normalized samples, one per line.
    #[arg(long)]
    samples_out: Option<PathBuf>,
}

enum Failure {
    Usage(String),
    Verify(String),
    Io(io::Error),
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

fn usage(e: impl ToString) -> Failure {
    Failure::Usage(e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verify(msg)) => {
            eprintln!("{msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    if let Some(threads) = cli.threads {
        if threads == 0 {
            return Err(usage("--threads must be at least 1"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(usage)?;
    }
    // Validate before opening the output so a bad request leaves no file.
    check_preconditions(&cli.command)?;
    let mut out: Box<dyn Write> = match &cli.out {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    let format = cli.format;
    let result = match cli.command {
        Command::Enumerate { n } => cmd_enumerate(n, format, &mut out),
        Command::Dist(args) => cmd_dist(&args, format, &mut out),
        Command::Moments { n } => cmd_moments(n, format, &mut out),
        Command::Sample { n, count, seed } => cmd_sample(n, count, seed, format, &mut out),
        Command::Clt(args) => cmd_clt(&args, format, &mut out),
        Command::Verify { suite, nmax } => cmd_verify(&suite, nmax, format, &mut out),
    };
    out.flush()?;
    result
}

fn check_preconditions(cmd: &Command) -> Result<(), Failure> {
    let n = match cmd {
        Command::Enumerate { n } | Command::Moments { n } | Command::Sample { n, .. } => *n,
        Command::Dist(a) => a.n,
        Command::Clt(a) => a.n,
        Command::Verify { .. } => 1,
    };
    if n == 0 {
        return Err(usage("--n must be at least 1"));
    }
    match cmd {
        Command::Enumerate { n } if *n > permtab::growth::MAX_ENUMERATION_LENGTH => {
            Err(usage(format!(
                "--n {n} exceeds the enumeration limit {}",
                permtab::growth::MAX_ENUMERATION_LENGTH
            )))
        }
        Command::Moments { n } if *n > permtab::dist::MAX_PGF_LENGTH => Err(usage(format!(
            "--n {n} exceeds the limit {}",
            permtab::dist::MAX_PGF_LENGTH
        ))),
        Command::Dist(a) => a.stat.parse::<TableauStat>().map(|_| ()).map_err(usage),
        Command::Verify { suite, .. } => suite.parse::<Suite>().map(|_| ()).map_err(usage),
        Command::Clt(a) => {
            clt_config(a)?.validate().map_err(usage)?;
            Ok(())
        }
        _ => Ok(()),
    }
}

fn tableau_json(index: usize, t: &Tableau) -> serde_json::Value {
    json!({
        "index": index,
        "shape": t.shape().row_lengths(),
        "rows": t.compact(),
    })
}

fn cmd_enumerate(n: usize, format: Format, out: &mut dyn Write) -> Result<(), Failure> {
    let tableaux = enumerate(n).map_err(usage)?;
    if format == Format::Csv {
        writeln!(out, "index,shape,rows")?;
    }
    let mut count = 0usize;
    for (i, t) in tableaux.enumerate() {
        match format {
            Format::Json => writeln!(out, "{}", tableau_json(i, &t))?,
            Format::Csv => writeln!(out, "{i},{},{}", shape_field(&t), t.compact())?,
        }
        count += 1;
    }
    match format {
        Format::Json => writeln!(out, "{}", json!({ "count": count }))?,
        Format::Csv => writeln!(out, "count,{count},")?,
    }
    Ok(())
}

fn shape_field(t: &Tableau) -> String {
    let parts: Vec<String> = t
        .shape()
        .row_lengths()
        .iter()
        .map(ToString::to_string)
        .collect();
    parts.join(";")
}

fn cmd_dist(args: &DistArgs, format: Format, out: &mut dyn Write) -> Result<(), Failure> {
    let stat: TableauStat = args.stat.parse().map_err(usage)?;
    let n = args.n;
    let method = args.method.unwrap_or(if pgf_of(stat, 1).is_ok() {
        Method::Pgf
    } else {
        Method::Exhaustive
    });
    let table = match method {
        Method::Pgf => distribution_pgf(stat, n).map_err(usage)?,
        Method::Dp => distribution_dp(stat, n).map_err(usage)?,
        Method::Exhaustive => {
            exhaustive_stat_distribution(n, |s| s.get(stat) as u64).map_err(usage)?
        }
    };
    let method_name = format!("{method:?}").to_lowercase();
    write_table(&table, n, stat, &method_name, format, out)
}

fn write_table(
    table: &DistributionTable,
    n: usize,
    stat: TableauStat,
    method: &str,
    format: Format,
    out: &mut dyn Write,
) -> Result<(), Failure> {
    match format {
        Format::Json => {
            let mut v = table.to_json();
            v["n"] = json!(n);
            v["stat"] = json!(stat.name());
            v["method"] = json!(method);
            writeln!(out, "{v}")?;
        }
        Format::Csv => {
            writeln!(out, "value,count")?;
            for (value, count) in table.iter() {
                writeln!(out, "{value},{count}")?;
            }
            writeln!(out, "total,{}", table.total())?;
        }
    }
    Ok(())
}

fn cmd_moments(n: usize, format: Format, out: &mut dyn Write) -> Result<(), Failure> {
    let m: MomentTable = if n <= 60 {
        // Cross-check the closed forms against the generating functions
        // where that is cheap.
        let from_pgf = permtab::dist::moments_from_pgfs(n).map_err(usage)?;
        let formula = moment_formulas(n);
        if from_pgf != formula {
            return Err(Failure::Verify(format!(
                "moment formulas disagree with pgfs at n = {n}"
            )));
        }
        formula
    } else {
        moment_formulas(n)
    };
    match format {
        Format::Json => writeln!(out, "{}", m.to_json())?,
        Format::Csv => {
            writeln!(out, "moment,value")?;
            for (name, value) in m.fields() {
                writeln!(out, "{name},{}", format_rational(value))?;
            }
        }
    }
    Ok(())
}

fn cmd_sample(
    n: usize,
    count: usize,
    seed: u64,
    format: Format,
    out: &mut dyn Write,
) -> Result<(), Failure> {
    let mut rng = rng_from_seed(seed);
    if format == Format::Csv {
        writeln!(
            out,
            "index,shape,rows,unrestricted,first_row,rows_count,columns,superfluous"
        )?;
    }
    for i in 0..count {
        let t = sample_uniform_with(n, &mut rng);
        let s = t.stats();
        match format {
            Format::Json => {
                let mut v = tableau_json(i, &t);
                v["stats"] = serde_json::to_value(s).expect("stats serialize");
                writeln!(out, "{v}")?;
            }
            Format::Csv => writeln!(
                out,
                "{i},{},{},{},{},{},{},{}",
                shape_field(&t),
                t.compact(),
                s.unrestricted,
                s.first_row_ones,
                s.rows,
                s.columns,
                s.superfluous
            )?,
        }
    }
    Ok(())
}

fn clt_config(a: &CltArgs) -> Result<ExperimentConfig, Failure> {
    Ok(ExperimentConfig {
        statistic: a.stat.parse::<Statistic>().map_err(usage)?,
        source: a.source.parse::<Source>().map_err(usage)?,
        n: a.n,
        trials: a.trials,
        seed: a.seed,
        normalization: a.normalization.parse::<Normalization>().map_err(usage)?,
    })
}

fn cmd_clt(args: &CltArgs, format: Format, out: &mut dyn Write) -> Result<(), Failure> {
    let cfg = clt_config(args)?;
    let (report, samples) = run_mc_with_samples(&cfg).map_err(usage)?;
    if let Some(path) = &args.samples_out {
        let mut w = BufWriter::new(File::create(path)?);
        for z in &samples {
            writeln!(w, "{z}")?;
        }
        w.flush()?;
    }
    match format {
        Format::Json => writeln!(out, "{}", report.to_json())?,
        Format::Csv => {
            writeln!(out, "statistic,source,n,trials,seed,normalization,center,scale,raw_mean,mean,variance,skewness,ks_distance")?;
            writeln!(
                out,
                "{},{},{},{},{},{:?},{},{},{},{},{},{},{}",
                cfg.statistic,
                cfg.source,
                cfg.n,
                cfg.trials,
                cfg.seed,
                cfg.normalization,
                report.normalization.center,
                report.normalization.scale,
                report.raw_mean,
                report.mean,
                report.variance,
                report.skewness,
                report.ks_distance
            )?;
        }
    }
    Ok(())
}

fn cmd_verify(
    suite: &str,
    nmax: usize,
    format: Format,
    out: &mut dyn Write,
) -> Result<(), Failure> {
    let suite: Suite = suite.parse().map_err(usage)?;
    match run_suite(suite, nmax) {
        Ok(report) => {
            match format {
                Format::Json => writeln!(
                    out,
                    "{}",
                    serde_json::to_value(&report).expect("report serializes")
                )?,
                Format::Csv => {
                    writeln!(out, "suite,nmax,checks,status")?;
                    writeln!(out, "{},{},{},ok", report.suite, report.nmax, report.checks)?;
                }
            }
            Ok(())
        }
        Err(VerifyError::Failure(c)) => Err(Failure::Verify(c.to_string())),
        Err(e) => Err(usage(e)),
    }
}
