use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_rational::Ratio;

use freiman_core::bohr::progression_from_bohr;
use freiman_core::check::{fmt_ratio, parse_ratio, Check, Status};
use freiman_core::covering::{chang_cover, describe_eta, CoverInput};
use freiman_core::fourier::{bogolyubov_bohr, indicator_transform, BohrSpec, LogBase, EPS_NUM};
use freiman_core::generators::{explore_multiple_cover_sumset, generate, FamilySpec};
use freiman_core::model::{embed_integers, f2_shrink, minimize_model, z_model, ModelStepParams};
use freiman_core::pipeline::{
    parse_certificate, run_pipeline, verify_certificate, write_certificate, PipelineConfig, DEFAULT_MODEL_STEPS,
};
use freiman_core::sumset::{doubling, iterated_sumset};
use freiman_core::text::{
    parse_group_set, parse_progression, parse_set, write_cover_trace, write_map, write_model_trace, write_progression,
    write_set, write_spectrum, SetInput,
};
use freiman_core::{Error, GroupSet, Limits};

#[derive(Parser)]
#[command(name = "freiman", version, about = "Sumsets, Fourier analysis, Bohr sets and Freiman-type covering certificates")]
struct Cli {
    /// Largest group or set the tool may enumerate.
    #[arg(long, global = true, default_value_t = 1 << 20)]
    cap: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sizes of A, A+A, A−A, 2A−2A and the doubling constant.
    Analyze { set: PathBuf },
    /// Fourier transform of the indicator of A, one line per character.
    Fourier { set: PathBuf },
    /// Bogolyubov–Chang Bohr set of A and the progression inside it.
    Bohr {
        set: PathBuf,
        /// Radius p/q in (0, 1/4); defaults to 1/(6d).
        #[arg(long, value_parser = ratio_arg)]
        rho: Option<Ratio<i64>>,
    },
    /// Shrink A to a smaller Freiman s-isomorphic model.
    Model {
        set: PathBuf,
        #[arg(long, default_value_t = 8)]
        s: usize,
        #[arg(long, value_parser = ratio_arg)]
        delta: Option<Ratio<i64>>,
        #[arg(long, default_value_t = DEFAULT_MODEL_STEPS)]
        steps: usize,
    },
    /// Least m for which reduction mod m is a Freiman s-isomorphism.
    Zmodel {
        set: PathBuf,
        #[arg(long, default_value_t = 2)]
        s: usize,
    },
    /// Quotient F_2^m by elements outside 2A − 2A.
    F2shrink { set: PathBuf },
    /// Cover A by a coset progression built from P + H ⊆ 2A − 2A.
    Cover { set: PathBuf, progression: PathBuf },
    /// Full pipeline; prints the certificate.
    Pipeline(PipelineArgs),
    /// Re-check a certificate.
    Verify {
        certificate: PathBuf,
        /// Print only failing checks.
        #[arg(long)]
        quiet: bool,
    },
    /// Generate a set from a named family.
    Gen(GenArgs),
    /// Search S = {λ_p p : p prime in [P, 2P)} minimizing |S + S|.
    Explore {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        x: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Args)]
struct PipelineArgs {
    set: PathBuf,
    #[arg(long, default_value_t = 8)]
    s: usize,
    #[arg(long)]
    skip_model: bool,
    #[arg(long, value_parser = ratio_arg)]
    delta: Option<Ratio<i64>>,
    #[arg(long, default_value_t = EPS_NUM)]
    tolerance: f64,
    #[arg(long, default_value_t = DEFAULT_MODEL_STEPS)]
    steps: usize,
    /// Write the certificate here instead of stdout.
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct GenArgs {
    /// progression, subgroup, random, random-in-progression or counterexample
    family: String,
    /// Group orders, comma separated.
    #[arg(long, value_delimiter = ',')]
    group: Vec<u64>,
    /// Base point, comma separated coordinates.
    #[arg(long, value_delimiter = ',')]
    base: Vec<u64>,
    /// Generator `c1,c2,...` or `c1,c2,...:length`; repeatable.
    #[arg(long = "gen")]
    gens: Vec<String>,
    #[arg(long, value_parser = ratio_arg)]
    density: Option<Ratio<i64>>,
    #[arg(long, value_delimiter = ',')]
    primes: Vec<u64>,
    #[arg(long)]
    q: Option<u64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn ratio_arg(s: &str) -> Result<Ratio<i64>, String> {
    parse_ratio(s)
}

/// Exit status plus what to print.
enum Failure {
    Usage(String),
    Core(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

type Outcome = Result<bool, Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))
}

fn group_set(path: &Path) -> Result<GroupSet, Failure> {
    Ok(parse_group_set(&read(path)?)?)
}

fn print_checks(checks: &[Check], notes: &[Check]) -> bool {
    for c in checks {
        println!("{c}");
    }
    for n in notes {
        println!("note {} {} {} {}", n.name, n.status, n.lhs, n.rhs);
    }
    checks.iter().all(|c| c.status != Status::Fail)
}

fn analyze(path: &Path) -> Outcome {
    let (a, offset) = match parse_set(&read(path)?)? {
        SetInput::Group(a) => (a, None),
        SetInput::Integers(v) => {
            let (a, min) = embed_integers(&v, 2)?;
            (a, Some(min))
        }
    };
    let rep = doubling(&a)?;
    println!("group {}", join(a.spec().orders()));
    if let Some(o) = offset {
        println!("offset {o}");
    }
    println!("size {}", rep.set_size);
    println!("sumset {}", rep.sumset_size);
    println!("difference {}", iterated_sumset(&a, 1, 1)?.len());
    println!("difference2 {}", iterated_sumset(&a, 2, 2)?.len());
    println!("doubling {}", fmt_ratio(&rep.k()));
    println!("density {}", fmt_ratio(&a.density()));
    Ok(true)
}

fn fourier(path: &Path, limits: &Limits) -> Outcome {
    let a = group_set(path)?;
    let s = indicator_transform(&a, limits)?;
    print!("{}", write_spectrum(&s));
    let alpha = s.density_f64();
    let plancherel = (s.plancherel_sum() - alpha).abs() / alpha;
    let inversion = (0..a.spec().cardinality() as usize)
        .map(|x| (s.inversion_at(x) - if a.contains_idx(x) { 1.0 } else { 0.0 }).abs())
        .fold(0.0, f64::max);
    let checks = [
        Check::predicate("fourier.plancherel", plancherel <= EPS_NUM, format!("{plancherel:.3e}"), format!("{EPS_NUM:e}")),
        Check::predicate("fourier.inversion", inversion <= EPS_NUM, format!("{inversion:.3e}"), format!("{EPS_NUM:e}")),
        Check::predicate(
            "fourier.conjugate_symmetry",
            s.conjugate_symmetry_error() <= EPS_NUM,
            format!("{:.3e}", s.conjugate_symmetry_error()),
            format!("{EPS_NUM:e}"),
        ),
    ];
    Ok(print_checks(&checks, &[]))
}

fn bohr(path: &Path, rho: Option<Ratio<i64>>, limits: &Limits) -> Outcome {
    let a = group_set(path)?;
    let rep = bogolyubov_bohr(&a, LogBase::Natural, limits)?;
    let spec = a.spec();
    for &g in &rep.gamma_raw {
        println!("gamma {}", spec.character(g));
    }
    for &g in &rep.phi {
        println!("phi {}", spec.character(g));
    }
    let radius = rho.unwrap_or(rep.bohr.radius);
    println!("radius {}", fmt_ratio(&radius));
    let mut checks = rep.verify(&a, limits)?;
    let ext = progression_from_bohr(&BohrSpec::new(rep.bohr.characters.clone(), radius)?, spec, limits)?;
    if let Some(m) = &ext.minima {
        println!("minima {}", freiman_core::bohr::fmt_minima(m));
    }
    print!("{}", write_progression(&ext.progression));
    checks.extend(ext.checks);
    Ok(print_checks(&checks, &[]))
}

fn model(path: &Path, s: usize, delta: Option<Ratio<i64>>, steps: usize, limits: &Limits) -> Outcome {
    let a = group_set(path)?;
    let params = match delta {
        Some(d) => ModelStepParams::with_delta(s, d)?,
        None => ModelStepParams::new(s)?,
    };
    let trace = minimize_model(&a, &params, Ratio::from_integer(1), steps, limits)?;
    print!("{}", write_model_trace(&trace));
    print!("{}", write_map(&trace.map));
    Ok(trace.verified)
}

fn zmodel(path: &Path, s: usize, limits: &Limits) -> Outcome {
    let values = match parse_set(&read(path)?)? {
        SetInput::Integers(v) => v,
        SetInput::Group(_) => return Err(Failure::Usage("zmodel expects an `integers` set file".into())),
    };
    let m = z_model(&values, s, limits)?;
    println!("modulus {}", m.m);
    println!("note zmodel.size_bound {} {} K^6logK|A|", m.size_bound, m.m);
    print!("{}", write_set(&m.model));
    Ok(true)
}

fn f2(path: &Path, limits: &Limits) -> Outcome {
    let a = group_set(path)?;
    let trace = f2_shrink(&a, limits)?;
    print!("{}", write_model_trace(&trace));
    Ok(trace.verified)
}

fn cover(set: &Path, prog: &Path, limits: &Limits) -> Outcome {
    let a = group_set(set)?;
    let p = parse_progression(&read(prog)?, limits)?;
    let input = CoverInput::new(a, p, limits)?;
    println!("eta {}", describe_eta(&input.eta).replace(' ', ""));
    let trace = chang_cover(&input, limits)?;
    print!("{}", write_cover_trace(&trace));
    print!("{}", write_progression(&trace.q));
    Ok(trace.checks.iter().all(Check::passed))
}

fn pipeline(args: &PipelineArgs, limits: &Limits) -> Outcome {
    let input = parse_set(&read(&args.set)?)?;
    let mut config = PipelineConfig::with_order(args.s)?;
    config.skip_model = args.skip_model;
    if let Some(d) = args.delta {
        config.delta = d;
    }
    config.tolerance = args.tolerance;
    config.limits = *limits;
    config.max_model_steps = args.steps;
    let cert = run_pipeline(&input, &config)?;
    let text = write_certificate(&cert);
    match &args.output {
        Some(path) => std::fs::write(path, &text)
            .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display())))?,
        None => print!("{text}"),
    }
    Ok(cert.checks.iter().all(|c| c.status != Status::Fail))
}

fn verify(path: &Path, quiet: bool) -> Outcome {
    let cert = parse_certificate(&read(path)?)?;
    let report = verify_certificate(&cert)?;
    if quiet {
        for c in report.failures() {
            println!("{c}");
        }
    } else {
        print_checks(&report.checks, &report.notes);
    }
    let ok = report.passed();
    println!("verdict {}", if ok { "pass" } else { "fail" });
    Ok(ok)
}

fn parse_gen(s: &str) -> Result<(Vec<u64>, Option<u64>), Failure> {
    let bad = || Failure::Usage(format!("bad generator {s:?}, expected c1,c2,... or c1,c2,...:length"));
    let (coords, len) = match s.split_once(':') {
        Some((c, l)) => (c, Some(l.parse().map_err(|_| bad())?)),
        None => (s, None),
    };
    let v = coords.split(',').map(|c| c.trim().parse::<u64>()).collect::<Result<Vec<_>, _>>().map_err(|_| bad())?;
    Ok((v, len))
}

fn family(args: &GenArgs) -> Result<FamilySpec, Failure> {
    let gens: Vec<(Vec<u64>, Option<u64>)> = args.gens.iter().map(|g| parse_gen(g)).collect::<Result<_, _>>()?;
    let with_lengths = || -> Result<Vec<(Vec<u64>, u64)>, Failure> {
        gens.iter()
            .map(|(v, l)| l.map(|l| (v.clone(), l)).ok_or_else(|| Failure::Usage("progression generators need `:length`".into())))
            .collect()
    };
    let density = || args.density.ok_or_else(|| Failure::Usage("--density is required".into()));
    let group = args.group.clone();
    Ok(match args.family.as_str() {
        "progression" => {
            let base = if args.base.is_empty() { vec![0; group.len()] } else { args.base.clone() };
            FamilySpec::Progression { group, base, generators: with_lengths()? }
        }
        "subgroup" => FamilySpec::Subgroup { group, generators: gens.into_iter().map(|(v, _)| v).collect() },
        "random" => FamilySpec::Random { group, density: density()?, seed: args.seed },
        "random-in-progression" => {
            FamilySpec::RandomInProgression { group, generators: with_lengths()?, density: density()?, seed: args.seed }
        }
        "counterexample" => FamilySpec::Counterexample {
            primes: args.primes.clone(),
            q: args.q.ok_or_else(|| Failure::Usage("--q is required".into()))?,
        },
        other => return Err(Failure::Usage(format!("unknown family {other:?}"))),
    })
}

fn gen(args: &GenArgs, limits: &Limits) -> Outcome {
    let g = generate(&family(args)?, limits)?;
    println!("# doubling {}/{} = {}", g.doubling.sumset_size, g.doubling.set_size, fmt_ratio(&g.doubling.k()));
    for n in &g.notes {
        println!("# {n}");
    }
    print!("{}", write_set(&g.set));
    Ok(true)
}

fn explore(p: u64, x: u64, seed: u64) -> Outcome {
    let r = explore_multiple_cover_sumset(p, x, seed)?;
    println!("primes,{}", join(&r.primes).replace(' ', ";"));
    println!("mode,{}", r.mode);
    println!("evaluated,{}", r.evaluated);
    println!("multipliers,{}", join(&r.multipliers).replace(' ', ";"));
    println!("set,{}", join(&r.set).replace(' ', ";"));
    println!("sumset_size,{}", r.sumset_size);
    Ok(true)
}

fn join<T: ToString>(v: &[T]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let limits = Limits { enumeration: cli.cap, ..Limits::default() };
    let outcome = match &cli.command {
        Command::Analyze { set } => analyze(set),
        Command::Fourier { set } => fourier(set, &limits),
        Command::Bohr { set, rho } => bohr(set, *rho, &limits),
        Command::Model { set, s, delta, steps } => model(set, *s, *delta, *steps, &limits),
        Command::Zmodel { set, s } => zmodel(set, *s, &limits),
        Command::F2shrink { set } => f2(set, &limits),
        Command::Cover { set, progression } => cover(set, progression, &limits),
        Command::Pipeline(args) => pipeline(args, &limits),
        Command::Verify { certificate, quiet } => verify(certificate, *quiet),
        Command::Gen(args) => gen(args, &limits),
        Command::Explore { p, x, seed } => explore(*p, *x, *seed),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Core(e)) => {
            eprintln!("error: {e}");
            // a broken internal guarantee is a failed check, not a usage problem
            ExitCode::from(if matches!(e, Error::Invariant { .. }) { 1 } else { 2 })
        }
    }
}
