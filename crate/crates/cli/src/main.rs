//! `quatinv`: invariant cohomology of quaternionic reflection arrangements.
//!
//! Every command prints JSON on standard output. Exit codes: 0 on success,
//! 1 on a mismatch or invalid input, 2 when a size guard rejects the job.

mod verify;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use quatinv::equivariant::{Instance, Limits};
use quatinv::finite_groups::{admissible_pairs, build_group, resolve_subgroup, KHPair};
use quatinv::gain_arrangement::{build_arrangement, Lattice};
use quatinv::invariant_bases::verify_basis;
use quatinv::parabolic_orbits::{closed_form_poincare, orbit_representatives, rank1_orbit_count, PoincarePolynomial};
use quatinv::primitive_pipeline::{imprimitive_data, run_pipeline, ReflectionGroupData, DEFAULT_GROUP_CAP};
use quatinv::{Error, Result};

#[derive(Parser)]
#[command(name = "quatinv", version, about = "Invariant cohomology of quaternionic reflection arrangements")]
struct Cli {
    #[command(flatten)]
    opts: GlobalOpts,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Args, Clone, Copy)]
struct GlobalOpts {
    /// Refuse groups larger than this.
    #[arg(long, global = true, default_value_t = 10_000_000)]
    max_group_order: u128,
    /// Refuse arrangements with more hyperplanes than this.
    #[arg(long, global = true, default_value_t = 80)]
    max_hyperplanes: usize,
    /// Include wall-clock times in the output.
    #[arg(long, global = true)]
    timings: bool,
    /// Print tables as CSV instead of JSON.
    #[arg(long, global = true)]
    csv: bool,
}

impl GlobalOpts {
    fn limits(&self) -> Limits {
        Limits { max_group_order: self.max_group_order, max_hyperplanes: self.max_hyperplanes }
    }
}

#[derive(Args, Clone)]
struct InstanceArgs {
    /// Group K: C<d>, D<d>, T, O or I.
    #[arg(long = "K")]
    k: String,
    /// Subgroup H: a token such as C2, C4a, D2 or an index into the list.
    #[arg(long = "H")]
    h: String,
    #[arg(long)]
    n: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Direct,
    Closed,
    Both,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Imprimitive,
    Dim2,
    Complexcyclic,
    Engine,
    Primitive,
    All,
}

#[derive(Subcommand)]
enum Command {
    /// Poincaré polynomial of the invariant cohomology.
    Poincare {
        #[command(flatten)]
        inst: InstanceArgs,
        #[arg(long, value_enum, default_value = "both")]
        method: Method,
    },
    /// Intersection lattice with Möbius values (n ≤ 5, |K| ≤ 24).
    Lattice {
        #[command(flatten)]
        inst: InstanceArgs,
    },
    /// Orbit representatives of parabolic subgroups.
    Orbits {
        #[command(flatten)]
        inst: InstanceArgs,
    },
    /// Explicit invariant bases, verified degree by degree.
    Basis {
        #[command(flatten)]
        inst: InstanceArgs,
    },
    /// Run the matrix pipeline on a group given by generator matrices.
    Primitive {
        #[arg(long)]
        input: PathBuf,
    },
    /// Write matrix generators of an imprimitive group in the input format
    /// of `primitive`.
    Export {
        #[command(flatten)]
        inst: InstanceArgs,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Run a verification suite.
    Verify {
        #[arg(long, value_enum, default_value = "all")]
        suite: Suite,
        /// Directory of group data files for the primitive checks.
        #[arg(long)]
        primitive_dir: Option<PathBuf>,
    },
}

pub struct Output {
    json: Value,
    csv: Option<Vec<Vec<String>>>,
    ok: bool,
}

pub fn resolve_pair(k: &str, h: &str) -> Result<Arc<KHPair>> {
    let kg = Arc::new(build_group(k.parse()?)?);
    let pairs = admissible_pairs(&kg);
    Ok(Arc::new(resolve_subgroup(&pairs, h)?.clone()))
}

fn instance_name(pair: &KHPair, n: usize) -> String {
    format!("G_{n}({},{})", pair.k().spec(), pair.token())
}

fn poincare(opts: GlobalOpts, a: &InstanceArgs, method: Method) -> Result<Output> {
    let pair = resolve_pair(&a.k, &a.h)?;
    let start = Instant::now();
    let closed = match method {
        Method::Direct => None,
        _ => Some(closed_form_poincare(&pair, a.n)?),
    };
    let direct = match method {
        Method::Closed => None,
        _ => Some(PoincarePolynomial::new(Instance::new(pair.clone(), a.n, opts.limits())?.poincare_direct()?)),
    };
    let matched = match (&closed, &direct) {
        (Some(c), Some(d)) => Some(c.same_as(d)),
        _ => None,
    };
    let main = direct.as_ref().or(closed.as_ref()).expect("some method ran");
    let mut j = json!({
        "instance": instance_name(&pair, a.n),
        "coeffs": main.coeffs,
        "degrees": main.degrees(),
        "method": match method { Method::Direct => "direct", Method::Closed => "closed", Method::Both => "both" },
        "polynomial": main.to_string(),
    });
    if let Some(m) = matched {
        j["match"] = json!(m);
        j["closed"] = json!(closed.as_ref().unwrap().coeffs);
    }
    if opts.timings {
        j["seconds"] = json!(start.elapsed().as_secs_f64());
    }
    let csv = std::iter::once(vec!["k".into(), "degree".into(), "coefficient".into()])
        .chain(main.coeffs.iter().enumerate().map(|(k, c)| vec![k.to_string(), (3 * k).to_string(), c.to_string()]))
        .collect();
    Ok(Output { json: j, csv: Some(csv), ok: matched.unwrap_or(true) })
}

fn lattice(opts: GlobalOpts, a: &InstanceArgs) -> Result<Output> {
    let pair = resolve_pair(&a.k, &a.h)?;
    let korder = pair.k().order();
    if a.n > 5 || korder > 24 {
        return Err(Error::SizeGuard {
            what: format!("lattice output for n = {}, |K| = {korder}", a.n),
            size: (a.n.max(korder)) as u128,
            limit: if a.n > 5 { 5 } else { 24 },
        });
    }
    let coords = !pair.h_is_trivial();
    let arr = build_arrangement(pair.k().clone(), a.n, coords)?;
    if arr.num_hyperplanes() > opts.max_hyperplanes {
        return Err(Error::SizeGuard {
            what: "hyperplanes".into(),
            size: arr.num_hyperplanes() as u128,
            limit: opts.max_hyperplanes as u128,
        });
    }
    let lat = Lattice::new(&arr);
    let whitney: Vec<i64> = (0..=lat.max_rank()).map(|r| lat.whitney_abs(r)).collect();
    let counts: Vec<usize> =
        (0..=lat.max_rank()).map(|r| lat.flats.iter().filter(|f| f.rank() == r).count()).collect();
    let flats: Vec<_> = lat.flats.iter().zip(&lat.mobius).map(|(f, &m)| f.to_json(Some(m))).collect();
    let j = json!({
        "instance": instance_name(&pair, a.n),
        "hyperplanes": arr.labels().iter().map(ToString::to_string).collect::<Vec<_>>(),
        "flatCounts": counts,
        "whitney": whitney,
        "flats": flats,
    });
    let csv = std::iter::once(vec!["rank".into(), "flats".into(), "whitney".into()])
        .chain(counts.iter().zip(&whitney).enumerate().map(|(r, (c, w))| vec![r.to_string(), c.to_string(), w.to_string()]))
        .collect();
    Ok(Output { json: j, csv: Some(csv), ok: true })
}

fn orbits(a: &InstanceArgs) -> Result<Output> {
    let pair = resolve_pair(&a.k, &a.h)?;
    let reps = orbit_representatives(&pair, a.n)?;
    let mut counts = vec![0; a.n + 1];
    for r in &reps {
        counts[r.rank] += 1;
    }
    let mut j = json!({
        "instance": instance_name(&pair, a.n),
        "representatives": reps,
        "countsByRank": counts,
    });
    if a.n == 2 {
        j["rank1Orbits"] = json!(rank1_orbit_count(&pair));
    }
    let csv = std::iter::once(vec!["lambda".into(), "alpha".into(), "rank".into()])
        .chain(reps.iter().map(|r| {
            let l: Vec<String> = r.lambda.iter().map(ToString::to_string).collect();
            vec![l.join(" "), r.alpha.to_string(), r.rank.to_string()]
        }))
        .collect();
    Ok(Output { json: j, csv: Some(csv), ok: true })
}

fn basis(opts: GlobalOpts, a: &InstanceArgs) -> Result<Output> {
    let pair = resolve_pair(&a.k, &a.h)?;
    let inst = Instance::new(pair.clone(), a.n, opts.limits())?;
    let report = verify_basis(&inst)?;
    let ok = report.verified();
    let csv = std::iter::once(vec!["degree".into(), "rank".into(), "expected".into(), "verified".into()])
        .chain(report.degrees.iter().map(|d| {
            vec![(3 * d.degree).to_string(), d.rank.to_string(), d.expected.to_string(), d.verified.to_string()]
        }))
        .collect();
    let j = json!({
        "instance": instance_name(&pair, a.n),
        "degrees": report.degrees,
        "verified": ok,
    });
    Ok(Output { json: j, csv: Some(csv), ok })
}

fn primitive(opts: GlobalOpts, input: &Path) -> Result<Output> {
    let data = ReflectionGroupData::load(input)?;
    let report = run_pipeline(&data, DEFAULT_GROUP_CAP, opts.limits())?;
    let ok = report.passed();
    Ok(Output { json: serde_json::to_value(&report).expect("serializable"), csv: None, ok })
}

fn export(a: &InstanceArgs, output: Option<&Path>) -> Result<Output> {
    let pair = resolve_pair(&a.k, &a.h)?;
    let data = imprimitive_data(pair, a.n)?;
    let j = serde_json::to_value(&data).expect("serializable");
    if let Some(path) = output {
        let text = serde_json::to_string_pretty(&j).expect("serializable");
        std::fs::write(path, text + "\n")
            .map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))?;
        return Ok(Output { json: json!({ "written": path.display().to_string() }), csv: None, ok: true });
    }
    Ok(Output { json: j, csv: None, ok: true })
}

fn run(cli: &Cli) -> Result<Output> {
    let opts = cli.opts;
    match &cli.cmd {
        Command::Poincare { inst, method } => poincare(opts, inst, *method),
        Command::Lattice { inst } => lattice(opts, inst),
        Command::Orbits { inst } => orbits(inst),
        Command::Basis { inst } => basis(opts, inst),
        Command::Primitive { input } => primitive(opts, input),
        Command::Export { inst, output } => export(inst, output.as_deref()),
        Command::Verify { suite, primitive_dir } => {
            let report = verify::run_suite(*suite, primitive_dir.as_deref(), opts.limits(), opts.timings);
            Ok(report.into_output())
        }
    }
}

// Write errors (a closed pipe) are ignored.
fn print_csv(rows: &[Vec<String>]) {
    let mut w = csv::Writer::from_writer(std::io::stdout());
    for r in rows {
        if w.write_record(r).is_err() {
            return;
        }
    }
    let _ = w.flush();
}

fn print_json(v: &Value) {
    let mut out = std::io::stdout().lock();
    if serde_json::to_writer_pretty(&mut out, v).is_ok() {
        let _ = writeln!(out);
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            match (&out.csv, cli.opts.csv) {
                (Some(rows), true) => print_csv(rows),
                _ => print_json(&out.json),
            }
            if out.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e @ Error::SizeGuard { .. }) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
