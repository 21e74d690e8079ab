//! Command line front end: generalized division, gcd, Smith normal form,
//! parametric lattice point counting, the closed-form counting formulas,
//! and brute-force verification, with stable text and JSON output.

mod io;
mod seed;

use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde_json::{json, Value};

use quasipoly::ehrhart::{count_diophantine, count_hrep, count_via_snf, count_vrep, ParamSystem};
use quasipoly::formulas::{
    decompose_cone_2d, gcontfrac, popoviciu_count, two_by_three_count, PopoviciuData,
    SignedCone2D,
};
use quasipoly::gendiv::{gbezout, gdiv_poly, ggcd};
use quasipoly::gsnf::gsnf;
use quasipoly::oracle;
use quasipoly::paramgeo::v_to_h;
use quasipoly::polyring::parse_poly;
use quasipoly::{Error, EventualQP, IntPoly};

/// Default cap on brute-force candidate tuples, overridable through the
/// `QUASIPOLY_ENUM_CAP` environment variable.
const DEFAULT_ENUM_CAP: u64 = 10_000_000;

#[derive(Debug)]
pub enum CliError {
    /// Bad invocation or unparsable input: exit code 1.
    Usage(String),
    /// Domain or arithmetic failure: exit code 2.
    Math(String),
    /// A verification report failed: exit code 3.
    Mismatch,
}

impl From<Error> for CliError {
    fn from(e: Error) -> CliError {
        match e {
            Error::Parse(m) => CliError::Usage(m),
            other => CliError::Math(other.to_string()),
        }
    }
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Route {
    Direct,
    Snf,
    Both,
}

#[derive(Parser)]
#[command(name = "quasipoly", version, about = "Eventually quasi-polynomial counting")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generalized division of f by g over Z[x].
    Divide { f: String, g: String },
    /// Generalized gcd of f and g, optionally with a Bezout identity.
    Gcd {
        f: String,
        g: String,
        #[arg(long)]
        bezout: bool,
    },
    /// Generalized Smith normal form of a polynomial matrix.
    Snf { matrix: PathBuf },
    /// Count lattice points of a parametric system or polytope.
    Count {
        /// Diophantine system A x = b, x >= 0 (JSON).
        #[arg(long, conflicts_with_all = ["hrep", "vrep"])]
        system: Option<PathBuf>,
        /// Half-space description V x >= c (JSON).
        #[arg(long, conflicts_with = "vrep")]
        hrep: Option<PathBuf>,
        /// Vertex description (JSON).
        #[arg(long)]
        vrep: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Route::Direct)]
        route: Route,
        /// Verify against enumeration over an inclusive range `a..b`.
        #[arg(long)]
        verify: Option<String>,
    },
    /// Nonnegative solutions of a(n) x + b(n) y = m(n).
    Popoviciu { a: String, b: String, m: String },
    /// Nonnegative solutions of a 2x3 system with slope-ordered columns.
    T23 {
        x1: String,
        x2: String,
        x3: String,
        y1: String,
        y2: String,
        y3: String,
        m1: String,
        m2: String,
    },
    /// Continued fraction expansion of f/g.
    Cfrac { f: String, g: String },
    /// Signed unimodular decomposition of cone(u, v), generators `a,b`.
    Cone { u: String, v: String },
    /// Check a claimed count against enumeration of a system.
    Verify {
        #[arg(long)]
        claim: PathBuf,
        #[arg(long)]
        system: PathBuf,
        #[arg(long)]
        range: String,
    },
    /// Write the golden input corpus into a directory.
    SeedCorpus {
        #[arg(long, default_value = "corpus")]
        dir: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            // clap prints help/version through the error path with code 0.
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(CliError::Math(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(CliError::Mismatch) => {
            eprintln!("error: verification mismatch");
            ExitCode::from(3)
        }
    }
}

fn enum_cap() -> Result<u64, CliError> {
    match std::env::var("QUASIPOLY_ENUM_CAP") {
        Ok(s) => s
            .parse()
            .map_err(|_| CliError::Usage("QUASIPOLY_ENUM_CAP must be an integer".into())),
        Err(_) => Ok(DEFAULT_ENUM_CAP),
    }
}

fn poly(text: &str, what: &str) -> Result<IntPoly, CliError> {
    parse_poly(text).map_err(|e| CliError::Usage(format!("{what}: {e}")))
}

fn eqp_arg(text: &str, what: &str) -> Result<EventualQP, CliError> {
    Ok(EventualQP::from_poly(&poly(text, what)?))
}

fn parse_range(text: &str) -> Result<Vec<BigInt>, CliError> {
    let (a, b) = text
        .split_once("..")
        .ok_or_else(|| CliError::Usage(format!("range must be `a..b`, got `{text}`")))?;
    let a = BigInt::from_str(a.trim())
        .map_err(|_| CliError::Usage(format!("bad range start `{a}`")))?;
    let b = BigInt::from_str(b.trim())
        .map_err(|_| CliError::Usage(format!("bad range end `{b}`")))?;
    if a > b {
        return Err(CliError::Usage("empty range".into()));
    }
    let mut out = Vec::new();
    let mut n = a;
    while n <= b {
        out.push(n.clone());
        n += 1;
    }
    Ok(out)
}

fn print_eqp(e: &EventualQP, format: Format) {
    match format {
        Format::Text => println!("{e}"),
        Format::Json => io::print_json(&io::eqp_to_json(e)),
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let format = cli.format;
    match cli.command {
        Command::Divide { f, g } => {
            let res = gdiv_poly(&poly(&f, "f")?, &poly(&g, "g")?)?;
            match format {
                Format::Text => print!("{res}"),
                Format::Json => io::print_json(&json!({
                    "branches": res.branch_count,
                    "threshold": res.threshold.to_string(),
                    "quotients": res.quotients.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
                    "remainders": res.remainders.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
                })),
            }
            Ok(())
        }
        Command::Gcd { f, g, bezout } => {
            let fe = eqp_arg(&f, "f")?;
            let ge = eqp_arg(&g, "g")?;
            if bezout {
                let (h, u, v) = gbezout(&fe, &ge)?;
                match format {
                    Format::Text => {
                        println!("gcd:\n{h}");
                        println!("u:\n{u}");
                        println!("v:\n{v}");
                    }
                    Format::Json => io::print_json(&json!({
                        "gcd": io::eqp_to_json(&h),
                        "u": io::eqp_to_json(&u),
                        "v": io::eqp_to_json(&v),
                    })),
                }
            } else {
                print_eqp(&ggcd(&fe, &ge)?, format);
            }
            Ok(())
        }
        Command::Snf { matrix } => {
            let m = io::parse_poly_matrix(&io::read_json(&matrix)?)?;
            let res = gsnf(&m)?;
            let verified = res.verify(&m);
            match format {
                Format::Text => {
                    println!("D:\n{}", res.d);
                    println!("U:\n{}", res.u);
                    println!("V:\n{}", res.v);
                    println!("verified: {verified}");
                }
                Format::Json => io::print_json(&io::snf_to_json(&res, verified)),
            }
            if verified {
                Ok(())
            } else {
                Err(CliError::Mismatch)
            }
        }
        Command::Count {
            system,
            hrep,
            vrep,
            route,
            verify,
        } => run_count(system, hrep, vrep, route, verify, format),
        Command::Popoviciu { a, b, m } => {
            let e = popoviciu_count(&eqp_arg(&a, "a")?, &eqp_arg(&b, "b")?, &eqp_arg(&m, "m")?)?;
            print_eqp(&e, format);
            Ok(())
        }
        Command::T23 {
            x1,
            x2,
            x3,
            y1,
            y2,
            y3,
            m1,
            m2,
        } => {
            let data = PopoviciuData::new(
                [poly(&x1, "x1")?, poly(&x2, "x2")?, poly(&x3, "x3")?],
                [poly(&y1, "y1")?, poly(&y2, "y2")?, poly(&y3, "y3")?],
            )?;
            let (e, report) = two_by_three_count(&data, &poly(&m1, "m1")?, &poly(&m2, "m2")?)?;
            match format {
                Format::Text => {
                    println!("{e}");
                    print!("{}", io::report_to_text(&report));
                }
                Format::Json => io::print_json(&json!({
                    "count": io::eqp_to_json(&e),
                    "certificates": data.certificates.iter()
                        .map(|(f, g)| json!([f.to_string(), g.to_string()]))
                        .collect::<Vec<_>>(),
                    "report": io::report_to_json(&report),
                })),
            }
            Ok(())
        }
        Command::Cfrac { f, g } => {
            let exp = gcontfrac(&poly(&f, "f")?, &poly(&g, "g")?)?;
            match format {
                Format::Text => {
                    for c in &exp.classes {
                        let terms: Vec<String> = c
                            .terms
                            .iter()
                            .map(|t| t.display_with_var("s").to_string())
                            .collect();
                        let (head, tail) = terms.split_first().expect("nonempty expansion");
                        println!(
                            "class n = {}s + {}, n >= {}: [{}; {}]",
                            c.stride,
                            c.offset,
                            c.threshold,
                            head,
                            tail.join(", ")
                        );
                    }
                }
                Format::Json => {
                    let classes: Vec<Value> = exp
                        .classes
                        .iter()
                        .map(|c| {
                            json!({
                                "stride": c.stride,
                                "offset": c.offset,
                                "threshold": c.threshold.to_string(),
                                "terms": c.terms.iter()
                                    .map(|t| t.display_with_var("s").to_string())
                                    .collect::<Vec<_>>(),
                            })
                        })
                        .collect();
                    io::print_json(&json!({ "classes": classes }));
                }
            }
            Ok(())
        }
        Command::Cone { u, v } => {
            let u = parse_vector2(&u, "u")?;
            let v = parse_vector2(&v, "v")?;
            let dec = decompose_cone_2d(&u, &v)?;
            match format {
                Format::Text => {
                    for c in &dec.classes {
                        println!("class n = {}s + {}, n >= {}:", c.stride, c.offset, c.threshold);
                        for piece in &c.pieces {
                            match piece {
                                SignedCone2D::Cone { gens, sign } => println!(
                                    "  {} cone ({}, {}) ({}, {})",
                                    if *sign >= 0 { "+" } else { "-" },
                                    gens[0][0].display_with_var("s"),
                                    gens[0][1].display_with_var("s"),
                                    gens[1][0].display_with_var("s"),
                                    gens[1][1].display_with_var("s"),
                                ),
                                SignedCone2D::Ray { gen, coeff } => println!(
                                    "  {coeff:+} ray ({}, {})",
                                    gen[0].display_with_var("s"),
                                    gen[1].display_with_var("s"),
                                ),
                                SignedCone2D::Point { coeff } => println!("  {coeff:+} origin"),
                            }
                        }
                    }
                }
                Format::Json => {
                    let classes: Vec<Value> = dec
                        .classes
                        .iter()
                        .map(|c| {
                            let pieces: Vec<Value> = c
                                .pieces
                                .iter()
                                .map(|piece| match piece {
                                    SignedCone2D::Cone { gens, sign } => json!({
                                        "kind": "cone",
                                        "sign": sign,
                                        "gens": gens.iter().map(|g| {
                                            json!([
                                                g[0].display_with_var("s").to_string(),
                                                g[1].display_with_var("s").to_string(),
                                            ])
                                        }).collect::<Vec<_>>(),
                                    }),
                                    SignedCone2D::Ray { gen, coeff } => json!({
                                        "kind": "ray",
                                        "coeff": coeff.to_string(),
                                        "gen": [
                                            gen[0].display_with_var("s").to_string(),
                                            gen[1].display_with_var("s").to_string(),
                                        ],
                                    }),
                                    SignedCone2D::Point { coeff } => json!({
                                        "kind": "origin",
                                        "coeff": coeff.to_string(),
                                    }),
                                })
                                .collect();
                            json!({
                                "stride": c.stride,
                                "offset": c.offset,
                                "threshold": c.threshold.to_string(),
                                "pieces": pieces,
                            })
                        })
                        .collect();
                    io::print_json(&json!({ "classes": classes }));
                }
            }
            Ok(())
        }
        Command::Verify {
            claim,
            system,
            range,
        } => {
            let claimed = io::eqp_from_json(&io::read_json(&claim)?)?;
            let sys = io::parse_system(&io::read_json(&system)?)?;
            let window = parse_range(&range)?;
            let cap = enum_cap()?;
            let mut counter = |n: &BigInt| {
                let (a, b) = sys.eval(n);
                oracle::enumerate_diophantine(&a, &b, cap)
            };
            let report = oracle::verify_eqp(&claimed, &mut counter, &window)?;
            match format {
                Format::Text => print!("{}", io::report_to_text(&report)),
                Format::Json => io::print_json(&io::report_to_json(&report)),
            }
            if report.pass {
                Ok(())
            } else {
                Err(CliError::Mismatch)
            }
        }
        Command::SeedCorpus { dir } => seed::seed_corpus(&dir),
    }
}

fn parse_vector2(text: &str, what: &str) -> Result<[IntPoly; 2], CliError> {
    let (a, b) = text
        .split_once(',')
        .ok_or_else(|| CliError::Usage(format!("{what} must be `p,q`")))?;
    Ok([poly(a, what)?, poly(b, what)?])
}

enum CountInput {
    System(ParamSystem),
    HRep(quasipoly::paramgeo::HRep),
    VRep(quasipoly::paramgeo::VRep),
}

fn run_count(
    system: Option<PathBuf>,
    hrep: Option<PathBuf>,
    vrep: Option<PathBuf>,
    route: Route,
    verify: Option<String>,
    format: Format,
) -> Result<(), CliError> {
    let input = match (system, hrep, vrep) {
        (Some(p), None, None) => CountInput::System(io::parse_system(&io::read_json(&p)?)?),
        (None, Some(p), None) => CountInput::HRep(io::parse_hrep(&io::read_json(&p)?)?),
        (None, None, Some(p)) => CountInput::VRep(io::parse_vrep(&io::read_json(&p)?)?),
        _ => {
            return Err(CliError::Usage(
                "exactly one of --system, --hrep, --vrep is required".into(),
            ))
        }
    };
    if route != Route::Direct && !matches!(input, CountInput::System(_)) {
        return Err(CliError::Usage(
            "--route snf/both applies only to --system inputs".into(),
        ));
    }
    let mut results: Vec<(&str, EventualQP)> = Vec::new();
    match &input {
        CountInput::System(sys) => {
            if route != Route::Snf {
                results.push(("direct", count_diophantine(sys)?));
            }
            if route != Route::Direct {
                results.push(("snf", count_via_snf(sys)?));
            }
        }
        CountInput::HRep(h) => results.push(("direct", count_hrep(h)?)),
        CountInput::VRep(v) => results.push(("direct", count_vrep(v)?)),
    }
    let routes_agree = match results.as_slice() {
        [(_, a), (_, b)] => Some(a.eq_eventually(b)),
        _ => None,
    };

    let report = match verify {
        Some(range) => {
            let window = parse_range(&range)?;
            let cap = enum_cap()?;
            let mut counter: Box<dyn FnMut(&BigInt) -> quasipoly::Result<BigInt>> = match &input {
                CountInput::System(sys) => Box::new(move |n: &BigInt| {
                    let (a, b) = sys.eval(n);
                    oracle::enumerate_diophantine(&a, &b, cap)
                }),
                CountInput::HRep(h) => Box::new(move |n: &BigInt| {
                    let (v, c) = h.eval(n);
                    oracle::enumerate_hrep(&v, &c, cap)
                }),
                CountInput::VRep(v) => {
                    let (h, _) = v_to_h(v)?;
                    Box::new(move |n: &BigInt| {
                        let (rows, c) = h.eval(n);
                        oracle::enumerate_hrep(&rows, &c, cap)
                    })
                }
            };
            Some(oracle::verify_eqp(&results[0].1, &mut counter, &window)?)
        }
        None => None,
    };

    match format {
        Format::Text => {
            for (name, e) in &results {
                if results.len() > 1 {
                    println!("route {name}:");
                }
                println!("{e}");
            }
            if let Some(agree) = routes_agree {
                println!("routes agree: {agree}");
            }
            if let Some(r) = &report {
                print!("{}", io::report_to_text(r));
            }
        }
        Format::Json => {
            let mut pairs: Vec<(&str, Value)> = results
                .iter()
                .map(|(name, e)| (*name, io::eqp_to_json(e)))
                .collect();
            if let Some(agree) = routes_agree {
                pairs.push(("routes_agree", json!(agree)));
            }
            if let Some(r) = &report {
                pairs.push(("report", io::report_to_json(r)));
            }
            io::print_json(&io::sorted_object(pairs));
        }
    }
    if routes_agree == Some(false) || report.as_ref().is_some_and(|r| !r.pass) {
        return Err(CliError::Mismatch);
    }
    Ok(())
}
