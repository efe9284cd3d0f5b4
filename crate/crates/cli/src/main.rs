//! `clf`: command-line access to the group oracles, conjugacy procedures
//! and experiment harness of `clf-core`.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use serde_json::{json, Value};

use clf_core::conjugacy::{self, ConjugacyCertificate, SolvableCertificate};
use clf_core::lab::bounds::{bound_evaluate, BoundId, BoundParams};
use clf_core::lab::distortion::measure_distortion;
use clf_core::lab::scan::{self, InstanceSource, ScanConfig};
use clf_core::lab::search::min_conjugator;
use clf_core::lab::selftest;
use clf_core::lab::witness::FamilyTag;
use clf_core::literal::{element_json, normal_form_json, parse_element, parse_group};
use clf_core::metric;
use clf_core::{Caps, Element, Error, Group};

const LITERALS: &str = "\
GROUP SPECS
  F:r        free group of rank r
  Zr:r       free abelian group Z^r            (also Z, Z^r)
  C:q        cyclic group of order q           (also Zq)
  P3         symmetric group on 3 letters
  S:r,d      free solvable group of rank r and derived length d   (also S(r,d))
  W:A~B      restricted wreath product, A and B any of Z, Z^r, Zq, P3, S(r,d), F(r)

ELEMENT LITERALS
  words      x1 X2 x1   (X = inverse; `e` is the identity)      F:2, S:2,2
  vectors    (1,-2)     rank 1 also accepts a bare integer      Zr:2, Z
  residues   3                                                  C:5
  perms      (1 2), (1 2 3), e                                  P3
  S(r,d)     a word, or the normal-form JSON printed by `normalize`
  wreath     {\"base\":\"1\",\"lamps\":[{\"at\":\"0\",\"val\":\"1\"}]}   W:Z2~Z

EXAMPLES
  clf normalize S:2,2 \"x1 X1\"
  clf mul W:Z2~Z '{\"base\":\"1\",\"lamps\":[]}' '{\"base\":\"0\",\"lamps\":[{\"at\":\"0\",\"val\":\"1\"}]}'
  clf conj-check W:Z2~Z '{\"base\":\"1\",\"lamps\":[{\"at\":\"0\",\"val\":\"1\"}]}' '{\"base\":\"1\",\"lamps\":[{\"at\":\"3\",\"val\":\"1\"}]}'
  clf distortion S:2,2 x1 --nmax 4
  clf clf-scan W:Z2~Z --generator random --count 20 --seed 1

EXIT CODES
  0 success (negative verdicts are data), 1 failed selftest or internal error,
  2 input error, 3 resource cap exceeded or inconclusive";

#[derive(Parser)]
#[command(name = "clf", version, about = "Conjugator length experiments in wreath products and free solvable groups", after_help = LITERALS)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct CapArgs {
    /// Largest BFS radius.
    #[arg(long, default_value_t = Caps::default().bfs_radius)]
    bfs_radius: usize,
    /// Largest number of elements held in one ball.
    #[arg(long, default_value_t = Caps::default().ball_size)]
    ball_size: usize,
    /// Largest support handled by the visiting-path search.
    #[arg(long, default_value_t = Caps::default().visiting_points)]
    visiting_points: usize,
    /// Radius of the kernel search when lifting solvable conjugators.
    #[arg(long, default_value_t = Caps::default().lift_radius)]
    lift_radius: usize,
}

impl CapArgs {
    fn caps(&self) -> Caps {
        Caps {
            bfs_radius: self.bfs_radius,
            ball_size: self.ball_size,
            visiting_points: self.visiting_points,
            lift_radius: self.lift_radius,
        }
    }
}

#[derive(Clone, Copy, ValueEnum, PartialEq, Eq)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Clone, Copy, ValueEnum, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
enum Generator {
    Random,
    #[value(name = "l111")]
    #[serde(rename = "l111")]
    Distorted,
    #[value(name = "t112")]
    #[serde(rename = "t112")]
    Triangle,
    #[value(name = "p19")]
    #[serde(rename = "p19")]
    BasePair,
}

#[derive(Subcommand)]
enum Command {
    /// Print the canonical form of an element.
    Normalize {
        group: String,
        element: String,
        #[command(flatten)]
        caps: CapArgs,
    },
    /// Multiply elements left to right.
    Mul {
        group: String,
        #[arg(required = true, num_args = 1..)]
        elements: Vec<String>,
        #[command(flatten)]
        caps: CapArgs,
    },
    /// Exact word length with respect to the standard generators.
    Wordlen {
        group: String,
        element: String,
        #[command(flatten)]
        caps: CapArgs,
    },
    /// Decide conjugacy and print a verified certificate.
    ConjCheck {
        group: String,
        u: String,
        v: String,
        #[command(flatten)]
        caps: CapArgs,
    },
    /// Exhaustive search for a shortest conjugator.
    ConjSearch {
        group: String,
        u: String,
        v: String,
        /// Search radius.
        #[arg(long, default_value_t = 8)]
        cap: u64,
        #[command(flatten)]
        caps: CapArgs,
    },
    /// Distortion profile of a cyclic subgroup.
    Distortion {
        group: String,
        element: String,
        #[arg(long, default_value_t = 4)]
        nmax: u64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[command(flatten)]
        caps: CapArgs,
    },
    /// Scan instances and compare minimal conjugator lengths with the bounds.
    ClfScan(ScanArgs),
    /// Evaluate one closed-form bound.
    Bound {
        /// L15, L17, T18, T210 or C211.
        name: String,
        #[arg(long)]
        n: u64,
        #[arg(long)]
        p: Option<u64>,
        #[arg(long)]
        delta_p: Option<u64>,
        #[arg(long)]
        order: Option<u64>,
        #[arg(long, default_value_t = 0)]
        clf_a: u64,
        #[arg(long, default_value_t = 0)]
        clf_b: u64,
        #[arg(long)]
        delta_4n: Option<u64>,
    },
    /// Run the fundamental-formula, embedding-equivalence and bi-Lipschitz suites.
    Selftest {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[command(flatten)]
        caps: CapArgs,
    },
}

#[derive(Args)]
struct ScanArgs {
    /// Group spec; may instead come from the config file.
    group: Option<String>,
    /// TOML file with any of the keys below (command-line flags win).
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_enum)]
    generator: Option<Generator>,
    #[arg(long)]
    seed: Option<u64>,
    /// Number of random instances.
    #[arg(long)]
    count: Option<usize>,
    /// Longest random word for `u`.
    #[arg(long)]
    max_len: Option<usize>,
    /// Longest random conjugating word.
    #[arg(long)]
    conj_len: Option<usize>,
    /// Largest family index.
    #[arg(long)]
    nmax: Option<u64>,
    /// Radius of the exhaustive conjugator search.
    #[arg(long)]
    cap: Option<u64>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[command(flatten)]
    caps: CapArgs,
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct ScanFile {
    group: Option<String>,
    generator: Option<Generator>,
    seed: Option<u64>,
    count: Option<usize>,
    max_len: Option<usize>,
    conj_len: Option<usize>,
    nmax: Option<u64>,
    cap: Option<u64>,
}

/// Failure of a command: a library error, or an already-printed
/// inconclusive verdict.
enum Failure {
    Lib(Error),
    Exit(u8),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

type Outcome = std::result::Result<(), Failure>;

fn emit(value: &Value) {
    println!("{value}");
}

fn group_arg(spec: &str) -> Result<Group, Error> {
    parse_group(spec)
}

fn canonical_json(group: &Group, e: &Element) -> Value {
    match e {
        Element::Solvable(s) if s.depth() == 1 => json!(s.normal_form().as_vector().expect("depth-1 normal form")),
        Element::Solvable(s) => normal_form_json(s),
        _ => element_json(group, e),
    }
}

fn wreath_certificate_json(group: &Group, cert: &ConjugacyCertificate) -> Value {
    let Group::Wreath { top, base } = group else { unreachable!("wreath certificate") };
    json!({
        "conjugator": element_json(group, &cert.conjugator),
        "z": element_json(base, &cert.z),
        "branch": cert.branch.tag(),
        "pi": cert.pi_table.iter().map(|r| json!({
            "rep": element_json(base, &r.rep),
            "pi_f": element_json(top, &r.pi_f),
            "pi_g": element_json(top, &r.pi_g),
        })).collect::<Vec<_>>(),
        "alphas": cert.alphas.as_ref().map(|a| a.iter().map(|x| element_json(top, x)).collect::<Vec<_>>()),
        "verified": cert.verified,
    })
}

fn solvable_certificate_json(group: &Group, cert: &SolvableCertificate) -> Value {
    let Group::FreeSolvable { rank, depth } = *group else { unreachable!("solvable certificate") };
    let gamma = Element::solvable(cert.conjugator.clone());
    let mut out = json!({
        "conjugator": cert.conjugator.word().to_string(),
        "normal_form": canonical_json(group, &gamma),
        "method": format!("{:?}", cert.method).to_lowercase(),
        "verified": cert.verified,
    });
    if let Some(w) = &cert.wreath {
        let image_group = clf_core::magnus::normal_form_group(rank, depth);
        out["wreath"] = wreath_certificate_json(&image_group, w);
    }
    out
}

fn conj_check(group: &Group, u: &Element, v: &Element, caps: &Caps) -> Result<Value, Error> {
    let (u_len, v_len) = (metric::word_length(group, u, caps)?, metric::word_length(group, v, caps)?);
    let n = u_len + v_len;
    match group {
        Group::Wreath { base, .. } => {
            let cert = conjugacy::wreath_conjugacy(group, u, v, caps)?;
            Ok(match cert {
                Some(c) => {
                    let z_length = match c.z_length {
                        Some(k) => Some(k),
                        None => Some(metric::word_length(base, &c.z, caps)?),
                    };
                    json!({"conjugate": true, "certificate": wreath_certificate_json(group, &c), "z_length": z_length, "bound": n})
                }
                None => json!({"conjugate": false, "certificate": null, "z_length": null, "bound": n}),
            })
        }
        Group::FreeSolvable { .. } => {
            let bound = bound_evaluate(BoundId::FreeSolvable, &BoundParams { n, ..Default::default() })?;
            Ok(match conjugacy::solvable_conjugacy(group, u, v, caps)? {
                Some(c) => {
                    let z_length = c.wreath.as_ref().and_then(|w| w.z_length);
                    json!({"conjugate": true, "certificate": solvable_certificate_json(group, &c), "z_length": z_length, "bound": bound})
                }
                None => json!({"conjugate": false, "certificate": null, "z_length": null, "bound": bound}),
            })
        }
        _ => Ok(match conjugacy::base_conjugator(group, u, v, caps)? {
            Some(z) => {
                let z_length = metric::word_length(group, &z, caps)?;
                json!({"conjugate": true, "certificate": {"conjugator": element_json(group, &z), "verified": conjugacy::verify_conjugator(group, u, v, &z)?}, "z_length": z_length, "bound": n})
            }
            None => json!({"conjugate": false, "certificate": null, "z_length": null, "bound": n}),
        }),
    }
}

fn scan_config(args: &ScanArgs) -> Result<(ScanConfig, Format), Error> {
    let file: ScanFile = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::input(format!("cannot read {}: {e}", path.display())))?;
            toml::from_str(&text).map_err(|e| Error::input(format!("bad scan config: {e}")))?
        }
        None => ScanFile::default(),
    };
    let spec = args
        .group
        .clone()
        .or(file.group)
        .ok_or_else(|| Error::input("clf-scan needs a group spec"))?;
    let group = group_arg(&spec)?;
    let generator = args.generator.or(file.generator).unwrap_or(Generator::Random);
    let count = args.count.or(file.count).unwrap_or(20);
    let n_max = args.nmax.or(file.nmax).unwrap_or(3);
    let source = match generator {
        Generator::Random => InstanceSource::RandomPairs {
            count,
            max_len: args.max_len.or(file.max_len).unwrap_or(3),
            conj_len: args.conj_len.or(file.conj_len).unwrap_or(2),
        },
        Generator::Distorted => InstanceSource::Family { tag: FamilyTag::Distorted, n_max, count },
        Generator::Triangle => InstanceSource::Family { tag: FamilyTag::Triangle, n_max, count },
        Generator::BasePair => InstanceSource::Family { tag: FamilyTag::BasePair, n_max, count },
    };
    let config = ScanConfig {
        group,
        source,
        seed: args.seed.or(file.seed).unwrap_or(0),
        cap: args.cap.or(file.cap).unwrap_or(8),
        caps: args.caps.caps(),
    };
    Ok((config, args.format))
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Normalize { group, element, caps: _ } => {
            let g = group_arg(&group)?;
            let e = parse_element(&g, &element)?;
            emit(&canonical_json(&g, &e));
        }
        Command::Mul { group, elements, caps: _ } => {
            let g = group_arg(&group)?;
            let mut acc = g.identity();
            for text in &elements {
                acc = g.mul(&acc, &parse_element(&g, text)?)?;
            }
            emit(&canonical_json(&g, &acc));
        }
        Command::Wordlen { group, element, caps } => {
            let g = group_arg(&group)?;
            let e = parse_element(&g, &element)?;
            emit(&json!({"length": metric::word_length(&g, &e, &caps.caps())?}));
        }
        Command::ConjCheck { group, u, v, caps } => {
            let g = group_arg(&group)?;
            let (u, v) = (parse_element(&g, &u)?, parse_element(&g, &v)?);
            match conj_check(&g, &u, &v, &caps.caps()) {
                Ok(value) => emit(&value),
                Err(e) if e.is_resource() => {
                    emit(&json!({"conjugate": "inconclusive", "certificate": null, "z_length": null, "bound": null, "reason": e.to_string()}));
                    return Err(Failure::Exit(3));
                }
                Err(e) => return Err(e.into()),
            }
        }
        Command::ConjSearch { group, u, v, cap, caps } => {
            let g = group_arg(&group)?;
            let (u, v) = (parse_element(&g, &u)?, parse_element(&g, &v)?);
            let value = match min_conjugator(&g, &u, &v, cap, &caps.caps())? {
                Some((z, d)) => json!({"min_conj_len": d, "conjugator": canonical_json(&g, &z), "cap": cap}),
                None => json!({"min_conj_len": null, "at_least": cap + 1, "conjugator": null, "cap": cap}),
            };
            emit(&value);
        }
        Command::Distortion { group, element, nmax, format, caps } => {
            let g = group_arg(&group)?;
            let b = parse_element(&g, &element)?;
            let profile = measure_distortion(&g, &b, nmax, &caps.caps())?;
            match format {
                Format::Json => emit(&json!({
                    "element": canonical_json(&g, &b),
                    "samples": profile.samples.iter().map(|&(n, d)| json!({"n": n, "delta": d})).collect::<Vec<_>>(),
                })),
                Format::Csv => {
                    println!("n,delta");
                    for (n, d) in &profile.samples {
                        println!("{n},{d}");
                    }
                }
                Format::Text => {
                    println!("{:>4} {:>6}", "n", "delta");
                    for (n, d) in &profile.samples {
                        println!("{n:>4} {d:>6}");
                    }
                }
            }
        }
        Command::ClfScan(args) => {
            let (config, format) = scan_config(&args)?;
            let records = scan::clf_scan(&config)?;
            match format {
                Format::Csv | Format::Text => scan::write_csv(&records, std::io::stdout().lock())?,
                Format::Json => {
                    let rows: Vec<Value> = records
                        .iter()
                        .map(|r| {
                            let fields = r.csv_row();
                            let mut obj = serde_json::Map::new();
                            for (k, v) in scan::CSV_HEADER.iter().zip(fields) {
                                obj.insert(k.to_string(), Value::String(v));
                            }
                            obj.insert("lower_bound".into(), json!(r.lower_bound));
                            obj.insert("size_upper".into(), json!(r.size_upper));
                            obj.insert("size_upper_alt".into(), json!(r.size_upper_alt));
                            obj.insert("note".into(), json!(r.note));
                            Value::Object(obj)
                        })
                        .collect();
                    emit(&Value::Array(rows));
                }
            }
        }
        Command::Bound { name, n, p, delta_p, order, clf_a, clf_b, delta_4n } => {
            let id: BoundId = name.parse()?;
            let params = BoundParams { n, p, delta_p, order, clf_a, clf_b, delta_4n };
            emit(&json!({"bound": id.tag(), "value": bound_evaluate(id, &params)?}));
        }
        Command::Selftest { seed, format, caps } => {
            let reports = selftest::run_all(seed, &caps.caps())?;
            let all_pass = reports.iter().all(|r| r.passed());
            if format == Format::Json {
                emit(&Value::Array(
                    reports
                        .iter()
                        .map(|r| json!({"suite": r.name, "cases": r.cases, "passed": r.passed(), "failures": r.failures}))
                        .collect(),
                ));
            } else {
                for r in &reports {
                    let verdict = if r.passed() { "PASS" } else { "FAIL" };
                    println!("{verdict} {} ({} cases, {} failures)", r.name, r.cases, r.failures.len());
                    for f in r.failures.iter().take(5) {
                        println!("  {f}");
                    }
                }
            }
            if !all_pass {
                return Err(Failure::Exit(1));
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = run(cli);
    let _ = std::io::stdout().flush();
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Exit(code)) => ExitCode::from(code),
        Err(Failure::Lib(e)) => {
            eprintln!("clf: {e}");
            ExitCode::from(match e {
                Error::Input(_) => 2,
                Error::Resource { .. } => 3,
                Error::Logic(_) | Error::Internal(_) => 1,
            })
        }
    }
}
