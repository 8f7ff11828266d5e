use std::fmt::Display;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use moufang_core::catalog::{self, CatalogError};
use moufang_core::chein;
use moufang_core::code_loops::{self, PowerMap};
use moufang_core::constructions::{self, Kind, Params};
use moufang_core::explorer::{self, ClosureOptions};
use moufang_core::factor_sets::{self, FactorSetClass};
use moufang_core::par::Executor;
use moufang_core::LoopTable;

#[derive(Parser)]
#[command(name = "moufang", version, about = "Finite Moufang loop toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check that a .tbl file holds a loop.
    Validate { table: PathBuf },
    /// Print structural invariants of a loop (file or catalog name).
    Invariants { input: String },
    /// Enumerate or apply construction parameters.
    Construct {
        #[command(subcommand)]
        kind: ConstructKind,
    },
    /// The Chein double M(G, 2).
    Mg2 {
        group: String,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// M(G, inverse, h).
    Mgth {
        group: String,
        #[arg(long)]
        h: usize,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Code loop tools.
    Codeloop {
        #[command(subcommand)]
        action: CodeLoopAction,
    },
    /// Verification suites.
    Verify {
        #[command(subcommand)]
        suite: VerifySuite,
    },
    /// Test two loops for isomorphism.
    Iso { a: String, b: String },
    /// Closure under both constructions.
    Closure {
        /// Comma-separated seed names or files.
        #[arg(long, value_delimiter = ',', required = true)]
        seeds: Vec<String>,
        /// Expected order of the seeds.
        #[arg(long)]
        order: Option<usize>,
        /// Keep associative classes.
        #[arg(long)]
        include_groups: bool,
        /// Worker threads (0: all cores, 1: sequential).
        #[arg(long, env = "MOUFANG_THREADS", default_value_t = 0)]
        threads: usize,
        #[arg(long)]
        dot: Option<PathBuf>,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Number of differing cells between two tables on the same elements.
    Distance { a: String, b: String },
    /// Built-in catalog.
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
}

#[derive(Subcommand)]
enum ConstructKind {
    Cyclic(ConstructArgs),
    Dihedral(ConstructArgs),
}

#[derive(clap::Args)]
struct ConstructArgs {
    input: String,
    /// List the parameter tuples (the default).
    #[arg(long, conflicts_with = "params")]
    enumerate: bool,
    /// Apply a tuple given in text form.
    #[arg(long)]
    params: Option<String>,
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum CodeLoopAction {
    /// Symplectic analysis and code loop test.
    Analyze { input: String },
    /// Build the code loop of a power map file.
    Build {
        power_map: PathBuf,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Plan (and check) a construction path between two power maps.
    Path { from: PathBuf, to: PathBuf },
}

#[derive(Subcommand)]
enum VerifySuite {
    /// Factor-set checks for every construction tuple of a loop.
    Extensions { input: String },
}

#[derive(Subcommand)]
enum CatalogAction {
    List {
        #[arg(long, default_value_t = 16)]
        max_order: usize,
    },
    Emit {
        name: String,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
}

/// A domain failure: the error type and variant, and its message.
struct Failure {
    name: String,
    message: String,
    broken_pipe: bool,
}

impl Failure {
    fn new(name: impl Into<String>, message: impl Display) -> Self {
        Failure {
            name: name.into(),
            message: message.to_string(),
            broken_pipe: false,
        }
    }
}

fn variant_name(debug: &str) -> &str {
    debug.split(['(', ' ', '{']).next().unwrap_or(debug)
}

macro_rules! impl_failure {
    ($($t:ty),*) => {$(
        impl From<$t> for Failure {
            fn from(e: $t) -> Self {
                let debug = format!("{e:?}");
                let name = format!("{}::{}", stringify!($t).rsplit("::").next().unwrap(), variant_name(&debug));
                Failure::new(name, e)
            }
        }
    )*};
}

impl_failure!(
    CatalogError,
    chein::CheinError,
    code_loops::CodeLoopError,
    constructions::ConstructionError,
    explorer::ExplorerError,
    factor_sets::FactorSetError,
    moufang_core::LoopError
);

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        let broken_pipe = e.kind() == io::ErrorKind::BrokenPipe;
        Failure {
            broken_pipe,
            ..Failure::new("IoError", e)
        }
    }
}

macro_rules! outln {
    ($($arg:tt)*) => {
        writeln!(io::stdout().lock(), $($arg)*)?
    };
}

type Res<T> = Result<T, Failure>;

fn load(input: &str) -> Res<LoopTable> {
    if Path::new(input).is_file() {
        Ok(catalog::read_table(input)?)
    } else {
        Ok(catalog::loop_by_name(input)?)
    }
}

fn emit(text: &str, out: Option<&Path>) -> Res<()> {
    match out {
        Some(p) => fs::write(p, text)?,
        None => io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) if f.broken_pipe => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}: {}", f.name, f.message);
            ExitCode::from(1)
        }
    }
}

fn run(cmd: Command) -> Res<()> {
    match cmd {
        Command::Validate { table } => {
            let l = catalog::read_table(&table)?;
            outln!("valid loop of order {}", l.order());
        }
        Command::Invariants { input } => invariants(&load(&input)?)?,
        Command::Construct { kind } => construct(kind)?,
        Command::Mg2 { group, out } => {
            let d = chein::mg2(&load(&group)?)?;
            emit(&catalog::format_table(&d.table), out.as_deref())?;
        }
        Command::Mgth { group, h, out } => {
            let data = chein::AntiAutomorphismData::inversion(&load(&group)?, h)?;
            emit(&catalog::format_table(&chein::mg_theta_h(&data)?), out.as_deref())?;
        }
        Command::Codeloop { action } => codeloop(action)?,
        Command::Verify {
            suite: VerifySuite::Extensions { input },
        } => verify_extensions(&load(&input)?)?,
        Command::Iso { a, b } => match load(&a)?.is_isomorphic(&load(&b)?) {
            Some(m) => {
                let map: Vec<String> = m.map.iter().map(|x| x.to_string()).collect();
                outln!("isomorphic\n{}", map.join(" "));
            }
            None => outln!("not isomorphic"),
        },
        Command::Closure {
            seeds,
            order,
            include_groups,
            threads,
            dot,
            json,
        } => {
            let tables = seeds.iter().map(|s| load(s)).collect::<Res<Vec<_>>>()?;
            if let Some(n) = order {
                if let Some(t) = tables.iter().find(|t| t.order() != n) {
                    return Err(Failure::new(
                        "OrderMismatch",
                        format!("seed of order {} where {n} was requested", t.order()),
                    ));
                }
            }
            let opts = ClosureOptions {
                include_associative: include_groups,
                executor: Executor::new(threads),
            };
            let g = explorer::closure(&tables, &opts)?;
            let comps = g.components();
            outln!(
                "{} classes, {} component{}",
                g.nodes.len(),
                comps.len(),
                if comps.len() == 1 { "" } else { "s" }
            );
            for c in &comps {
                outln!(
                    "component size={} |N|={} |A|={}",
                    c.size,
                    c.nucleus,
                    c.associator_subloop
                );
            }
            if let Some(p) = dot {
                fs::write(p, g.export_dot())?;
            }
            if let Some(p) = json {
                fs::write(p, g.summary().to_json() + "\n")?;
            }
        }
        Command::Distance { a, b } => {
            let r = constructions::distance(&load(&a)?, &load(&b)?)?;
            outln!(
                "distance {} of {} cells{}",
                r.count,
                r.order * r.order,
                if r.is_quarter() { " (n^2/4)" } else { "" }
            );
        }
        Command::Catalog { action } => match action {
            CatalogAction::List { max_order } => {
                for e in catalog::generated_catalog(max_order) {
                    outln!("{}\t{}", e.name, e.table.order());
                }
            }
            CatalogAction::Emit { name, out } => {
                emit(&catalog::format_table(&catalog::loop_by_name(&name)?), out.as_deref())?;
            }
        },
    }
    Ok(())
}

fn invariants(l: &LoopTable) -> Res<()> {
    let orders: Vec<String> = l.element_orders().multiset().iter().map(|o| o.to_string()).collect();
    outln!("order {}", l.order());
    outln!("center {}", l.center().len());
    outln!("nucleus {}", l.nucleus().len());
    outln!("associator_subloop {}", l.associator_subloop().len());
    outln!("squares {}", l.squares().len());
    outln!("element_orders {}", orders.join(" "));
    outln!("moufang {}", l.is_moufang());
    outln!("associative {}", l.is_associative());
    outln!("commutative {}", l.is_commutative());
    Ok(())
}

fn construct(kind: ConstructKind) -> Res<()> {
    let (want, args) = match kind {
        ConstructKind::Cyclic(a) => (Kind::Cyclic, a),
        ConstructKind::Dihedral(a) => (Kind::Dihedral, a),
    };
    let l = load(&args.input)?;
    match args.params {
        Some(text) => {
            let p = Params::parse(&l, &text)?;
            if p.kind() != want {
                return Err(Failure::new(
                    "ConstructionError::InvalidParams",
                    format!("expected {want} parameters"),
                ));
            }
            emit(&catalog::format_table(&p.apply(&l)?), args.out.as_deref())?;
        }
        None => {
            let list: Vec<Params> = match want {
                Kind::Cyclic => constructions::find_cyclic_params(&l)
                    .into_iter()
                    .map(Params::Cyclic)
                    .collect(),
                Kind::Dihedral => constructions::find_dihedral_params(&l)
                    .into_iter()
                    .map(Params::Dihedral)
                    .collect(),
            };
            let text: String = list.iter().map(|p| p.to_text() + "\n").collect();
            emit(&text, args.out.as_deref())?;
        }
    }
    Ok(())
}

fn read_power_map(p: &Path) -> Res<PowerMap> {
    Ok(fs::read_to_string(p)?.parse::<PowerMap>()?)
}

fn codeloop(action: CodeLoopAction) -> Res<()> {
    match action {
        CodeLoopAction::Analyze { input } => {
            let l = load(&input)?;
            let code = code_loops::is_code_loop(&l);
            outln!("code_loop {code}");
            match code_loops::symplectic_analyze(&l) {
                None => outln!("symplectic false"),
                Some(d) => {
                    outln!("symplectic true");
                    outln!("z {}", d.z);
                    outln!("dim {}", d.dim());
                    outln!("power_map {}", d.power.to_text().replace('\n', " ").trim_end());
                    outln!("cdeg {}", code_loops::cdeg(&d.power));
                    if let Ok(rad) = code_loops::radical(&d.power) {
                        outln!("radical_dim {}", rad.len());
                    }
                }
            }
        }
        CodeLoopAction::Build { power_map, out } => {
            let p = read_power_map(&power_map)?;
            let l = code_loops::build_code_loop(&p)?;
            emit(&catalog::format_table(&l), out.as_deref())?;
        }
        CodeLoopAction::Path { from, to } => {
            let (p, r) = (read_power_map(&from)?, read_power_map(&to)?);
            let steps = code_loops::plan_code_path(&p, &r)?;
            for s in &steps {
                match s {
                    code_loops::CodeStep::Cyclic { functional } => outln!("cyclic functional={functional:#b}"),
                    code_loops::CodeStep::Dihedral { u, v, .. } => outln!("dihedral u={u:#b} v={v:#b}"),
                }
            }
            let start = code_loops::build_code_loop(&p)?;
            let path = code_loops::execute_code_path(&start, p.dim(), &steps)?;
            let end = path.last().unwrap_or(&start);
            let reached = code_loops::canonical_power_map(end, p.dim())? == r;
            outln!("{} steps, target reached: {reached}", steps.len());
            if !reached {
                return Err(Failure::new(
                    "CodeLoopError::ConstructionFailed",
                    "path does not reach the target",
                ));
            }
        }
    }
    Ok(())
}

fn verify_extensions(l: &LoopTable) -> Res<()> {
    let params = constructions::find_all_params(l);
    let mut failures = 0;
    for p in &params {
        let d = factor_sets::derive_from_transversal(l, p)?;
        let classes = [&d.eta, &d.eta_star, &d.mu].map(factor_sets::classify);
        let ext = factor_sets::build_extension(&d.eta)?;
        let ext_star = factor_sets::build_extension(&d.eta_star)?;
        let round_trip = d.theta.verify(&ext, l) && d.theta.verify(&ext_star, &p.apply(l)?);
        let inverse = factor_sets::check_inverse_identity(&d.eta)? && factor_sets::check_inverse_identity(&d.eta_star)?;
        let preserved = factor_sets::check_associator_preservation(&d.eta, &d.mu)?;
        let brute = factor_sets::associators_coincide(&d.eta, &d.mu)?;
        let ok = classes[2] == FactorSetClass::AssociativeFactorSet
            && classes[0] >= FactorSetClass::MoufangFactorSet
            && classes[1] >= FactorSetClass::MoufangFactorSet
            && round_trip
            && inverse
            && preserved
            && preserved == brute;
        failures += usize::from(!ok);
        outln!(
            "{} | eta={:?} eta*={:?} mu={:?} round_trip={round_trip} inverse={inverse} preserved={preserved} brute={brute}",
            p.to_text(),
            classes[0],
            classes[1],
            classes[2]
        );
    }
    outln!("{} tuples, {failures} failures", params.len());
    if failures > 0 {
        return Err(Failure::new("VerificationFailed", format!("{failures} tuples failed")));
    }
    Ok(())
}
