use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

use denumerant::direct::{count_eq_with, count_leq_with};
use denumerant::input::{format_count, parse_coefficients, parse_decimal, parse_positive_u64};
use denumerant::oracle::DEFAULT_ORACLE_CAP;
use denumerant::table::{bounded_profile, table_from_profile, DEFAULT_MAX_MODULUS};
use denumerant::{
    load_table, save_table, Count, DirectOptions, EquationSpec, Error, Oracle, ResidueTable,
};

/// Exact counts of non-negative integer solutions of a_1 x_1 + ... + a_n x_n = b (or <= b).
#[derive(Parser)]
#[command(name = "denumerant", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Count solutions of the equation.
    Count {
        #[command(flatten)]
        instance: OptionalInstance,
        #[arg(short)]
        b: String,
        /// Answer from a residue table instead of the direct formula.
        #[arg(short = 't', long = "table")]
        table: Option<PathBuf>,
        #[arg(long)]
        budget: Option<String>,
    },
    /// Count solutions of the inequality (sum <= b).
    CountLeq {
        #[command(flatten)]
        instance: Instance,
        #[arg(short)]
        b: String,
        #[arg(long)]
        budget: Option<String>,
    },
    /// Precompute the residue table for a coefficient list.
    BuildTable {
        #[command(flatten)]
        instance: Instance,
        #[arg(short = 'o', long = "output")]
        output: PathBuf,
    },
    /// Answer a count from a saved residue table.
    Query {
        #[arg(short = 't', long = "table")]
        table: PathBuf,
        #[arg(short)]
        b: String,
    },
    /// Cross-check every route against the dynamic-programming oracle for 0 <= b <= b-max.
    Verify {
        #[command(flatten)]
        instance: Instance,
        #[arg(long = "b-max")]
        b_max: String,
        #[arg(long)]
        budget: Option<String>,
        #[arg(long = "oracle-cap")]
        oracle_cap: Option<String>,
    },
    /// Time each route on a list of right-hand sides and print CSV.
    Bench {
        #[command(flatten)]
        instance: Instance,
        /// Comma-separated right-hand sides.
        #[arg(short)]
        b: String,
        #[arg(short = 'o', long = "output")]
        output: Option<PathBuf>,
        #[arg(long)]
        budget: Option<String>,
        #[arg(long = "oracle-cap")]
        oracle_cap: Option<String>,
    },
}

#[derive(Args)]
struct Instance {
    /// Comma-separated positive coefficients, e.g. 3,5,7.
    #[arg(short = 'a', long = "coeffs")]
    coeffs: String,
    /// Common multiple of the coefficients to use instead of their lcm.
    #[arg(long)]
    modulus: Option<String>,
}

#[derive(Args)]
struct OptionalInstance {
    #[arg(short = 'a', long = "coeffs")]
    coeffs: Option<String>,
    #[arg(long)]
    modulus: Option<String>,
}

/// Verification found two routes disagreeing.
const EXIT_DIVERGENCE: u8 = 1;

enum Failure {
    Error(Error),
    Divergence,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Error(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Error(Error::Io(e))
    }
}

fn exit_code(err: &Error) -> u8 {
    match err {
        Error::InvalidInput(_) | Error::Parse { .. } | Error::Validation(_) => 2,
        Error::BudgetExceeded { .. } | Error::Resource(_) => 3,
        Error::Logic(_) => 4,
        Error::Io(_) => 5,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Divergence) => ExitCode::from(EXIT_DIVERGENCE),
        Err(Failure::Error(err)) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code(&err))
        }
    }
}

fn run(command: Command) -> Result<(), Failure> {
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match command {
        Command::Count {
            instance,
            b,
            table,
            budget,
        } => {
            let b = parse_decimal(&b, "b")?;
            let count = match table {
                Some(path) => {
                    let table = read_table(&path)?;
                    check_table_matches(&table, &instance)?;
                    table.query(&b)
                }
                None => {
                    let coeffs = instance.coeffs.ok_or_else(|| {
                        Error::InvalidInput("either -a/--coeffs or -t/--table is required".into())
                    })?;
                    let spec = make_spec(&coeffs, instance.modulus.as_deref())?;
                    count_eq_with(&spec, &b, &direct_options(budget.as_deref())?)?
                }
            };
            writeln!(out, "{}", format_count(&count))?;
        }
        Command::CountLeq {
            instance,
            b,
            budget,
        } => {
            let spec = instance.spec()?;
            let b = parse_decimal(&b, "b")?;
            let count = count_leq_with(&spec, &b, &direct_options(budget.as_deref())?)?;
            writeln!(out, "{}", format_count(&count))?;
        }
        Command::BuildTable { instance, output } => {
            let spec = instance.spec()?;
            let profile = bounded_profile(&spec)?;
            let table = table_from_profile(&profile);
            let file = File::create(&output)?;
            save_table(&table, BufWriter::new(file))?;
            let nonzero = profile.counts().iter().filter(|c| !c.is_zero()).count();
            writeln!(out, "modulus {}", table.modulus())?;
            writeln!(out, "variables {}", table.n())?;
            writeln!(out, "terms {}", spec.term_count())?;
            writeln!(out, "support {nonzero}")?;
        }
        Command::Query { table, b } => {
            let b = parse_decimal(&b, "b")?;
            let table = read_table(&table)?;
            writeln!(out, "{}", format_count(&table.query(&b)))?;
        }
        Command::Verify {
            instance,
            b_max,
            budget,
            oracle_cap,
        } => {
            let spec = instance.spec()?;
            let b_max = parse_u64_arg(&b_max, "b-max")?;
            let oracle = Oracle::with_cap(oracle_cap_arg(oracle_cap.as_deref())?);
            let opts = direct_options(budget.as_deref())?;
            verify(&spec, b_max, oracle, &opts, &mut out)?;
        }
        Command::Bench {
            instance,
            b,
            output,
            budget,
            oracle_cap,
        } => {
            let spec = instance.spec()?;
            let bs = b
                .split(',')
                .enumerate()
                .map(|(i, s)| parse_decimal(s.trim(), &format!("b[{i}]")))
                .collect::<Result<Vec<_>, _>>()?;
            let oracle = Oracle::with_cap(oracle_cap_arg(oracle_cap.as_deref())?);
            let opts = direct_options(budget.as_deref())?;
            match output {
                Some(path) => {
                    let mut file = BufWriter::new(File::create(path)?);
                    bench(&spec, &bs, oracle, &opts, &mut file)?;
                    file.flush()?;
                }
                None => bench(&spec, &bs, oracle, &opts, &mut out)?,
            }
        }
    }
    Ok(())
}

impl Instance {
    fn spec(&self) -> Result<EquationSpec, Error> {
        make_spec(&self.coeffs, self.modulus.as_deref())
    }
}

fn make_spec(coeffs: &str, modulus: Option<&str>) -> Result<EquationSpec, Error> {
    let coefficients = parse_coefficients(coeffs)?;
    let modulus = modulus.map(|m| parse_decimal(m, "modulus")).transpose()?;
    EquationSpec::new(coefficients, modulus)
}

fn parse_u64_arg(text: &str, name: &str) -> Result<u64, Error> {
    let value = parse_decimal(text, name)?;
    value
        .to_u64()
        .ok_or_else(|| Error::InvalidInput(format!("{name}: {value} exceeds 64 bits")))
}

fn direct_options(budget: Option<&str>) -> Result<DirectOptions, Error> {
    let budget = budget
        .map(|b| parse_positive_u64(b, "budget"))
        .transpose()?;
    Ok(DirectOptions {
        partitions: rayon::current_num_threads(),
        ..DirectOptions::with_budget(budget)
    })
}

fn oracle_cap_arg(cap: Option<&str>) -> Result<u64, Error> {
    Ok(cap
        .map(|c| parse_u64_arg(c, "oracle-cap"))
        .transpose()?
        .unwrap_or(DEFAULT_ORACLE_CAP))
}

fn read_table(path: &Path) -> Result<ResidueTable, Error> {
    let file = File::open(path)?;
    load_table(BufReader::new(file))
}

fn check_table_matches(table: &ResidueTable, instance: &OptionalInstance) -> Result<(), Error> {
    if let Some(coeffs) = &instance.coeffs {
        let coefficients = parse_coefficients(coeffs)?;
        if coefficients != table.coefficients() {
            return Err(Error::InvalidInput(format!(
                "table was built for coefficients {:?}, not {coefficients:?}",
                table.coefficients()
            )));
        }
    }
    if let Some(m) = &instance.modulus {
        let m = parse_decimal(m, "modulus")?;
        if m != BigUint::from(table.modulus()) {
            return Err(Error::InvalidInput(format!(
                "table modulus is {}, not {m}",
                table.modulus()
            )));
        }
    }
    Ok(())
}

fn verify<W: Write>(
    spec: &EquationSpec,
    b_max: u64,
    oracle: Oracle,
    opts: &DirectOptions,
    out: &mut W,
) -> Result<(), Failure> {
    let coefficients = spec.coefficients();
    let expected = oracle.counts_up_to(coefficients, b_max)?;
    let mut checks: u64 = 0;

    let diverged =
        |out: &mut W, b: u64, route: &str, got: &Count, want: &Count| -> Result<(), Failure> {
            writeln!(
                out,
                "DIVERGENCE b={b} route={route} got={got} expected={want}"
            )?;
            Err(Failure::Divergence)
        };

    let table = match spec.modulus().to_u64() {
        Some(m) if m <= DEFAULT_MAX_MODULUS => {
            let profile = bounded_profile(spec)?;
            let total = profile.total();
            checks += 1;
            if total != spec.term_count() {
                return Err(Error::Logic(format!(
                    "profile sums to {total}, expected {}",
                    spec.term_count()
                ))
                .into());
            }
            for (c, p) in profile.counts().iter().enumerate().take(b_max as usize + 1) {
                checks += 1;
                if p > &expected[c] {
                    return diverged(out, c as u64, "profile-domination", p, &expected[c]);
                }
            }
            Some(table_from_profile(&profile))
        }
        _ => {
            eprintln!(
                "note: modulus {} is above the table limit; table route skipped",
                spec.modulus()
            );
            None
        }
    };

    let mut cumulative = Count::zero();
    for (b, want) in expected.iter().enumerate() {
        let b_big = BigUint::from(b);
        let b = b as u64;

        let direct = count_eq_with(spec, &b_big, opts)?;
        checks += 1;
        if &direct != want {
            return diverged(out, b, "direct", &direct, want);
        }
        if let Some(table) = &table {
            let via_table = table.query(&b_big);
            checks += 1;
            if &via_table != want {
                return diverged(out, b, "table", &via_table, want);
            }
        }
        cumulative += want;
        let leq = count_leq_with(spec, &b_big, opts)?;
        checks += 1;
        if leq != cumulative {
            return diverged(out, b, "direct-leq", &leq, &cumulative);
        }
    }
    writeln!(out, "OK {checks}")?;
    Ok(())
}

fn bench<W: Write>(
    spec: &EquationSpec,
    bs: &[BigUint],
    oracle: Oracle,
    opts: &DirectOptions,
    out: &mut W,
) -> Result<(), Failure> {
    let n = spec.n();
    let terms = spec.term_count();
    let table = match spec.modulus().to_u64() {
        Some(m) if m <= DEFAULT_MAX_MODULUS => {
            let start = Instant::now();
            let profile = bounded_profile(spec)?;
            let table = table_from_profile(&profile);
            eprintln!("table build: {} ns", start.elapsed().as_nanos());
            Some(table)
        }
        _ => None,
    };
    writeln!(out, "route,b,wall_time_ns,term_count")?;
    for b in bs {
        let start = Instant::now();
        match count_eq_with(spec, b, opts) {
            Ok(_) => writeln!(out, "direct,{b},{},{terms}", start.elapsed().as_nanos())?,
            Err(err @ Error::BudgetExceeded { .. }) => {
                eprintln!("direct route skipped at b={b}: {err}")
            }
            Err(err) => return Err(err.into()),
        }
        if let Some(table) = &table {
            let start = Instant::now();
            let _ = table.query(b);
            writeln!(out, "table,{b},{},{n}", start.elapsed().as_nanos())?;
        }
        match b.to_u64().filter(|&b| b <= oracle.cap) {
            Some(small) => {
                let start = Instant::now();
                oracle.count(spec.coefficients(), small)?;
                let cells = (small as u128 + 1) * n as u128;
                writeln!(out, "oracle,{b},{},{cells}", start.elapsed().as_nanos())?;
            }
            None => eprintln!(
                "oracle route omitted at b={b}: above the cap {}",
                oracle.cap
            ),
        }
    }
    Ok(())
}
