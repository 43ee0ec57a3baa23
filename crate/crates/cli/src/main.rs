//! `wittvir`: batch command-line front end for exact Witt/Virasoro symbolic
//! computation. Every subcommand maps to one library operation; output is
//! deterministic, with exact rationals rendered as strings.
//!
//! Exit codes: 0 on success, 1 on parse errors (arguments, grammar, JSON),
//! 2 on domain errors.

use std::collections::BTreeMap;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use wittvir_core::dloc;
use wittvir_core::exactalg::{parse_laurent, parse_rational, rational_to_string, Rational};
use wittvir_core::liealg::{vir_bracket, witt_bracket, AlgebraTag, VirElement};
use wittvir_core::localfn::{self, LocalFunction};
use wittvir_core::subalg;
use wittvir_core::sympoisson;
use wittvir_core::weyl;
use wittvir_core::Error;

const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Parser)]
#[command(
    name = "wittvir",
    version,
    about = "Exact symbolic computation for the Witt and Virasoro Lie algebras",
    long_about = None
)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Cmd {
    /// Lie bracket of two elements, e.g. `bracket "t" "t^2" --algebra W`.
    /// Elements use the polynomial grammar, plus `+ c*z` for Vir.
    Bracket {
        a: String,
        b: String,
        /// One of W, Wgeq-1, Wgeq0, Wgeq1, Vir.
        #[arg(long)]
        algebra: String,
    },
    /// Poisson bracket of two S(W) expressions in `e_i` tokens,
    /// e.g. `poisson "e_1" "e_-1"`.
    Poisson { p: String, q: String },
    /// The Poisson morphism p_gamma applied to an S(W) expression.
    Pgamma {
        p: String,
        #[arg(long)]
        gamma: String,
    },
    /// Evaluate a local functional (JSON) on an element (grammar).
    Eval { chi: String, elem: String },
    /// Rank of the alternating form B_chi.
    Rank { chi: String },
    /// Minimal linear recurrence of a comma-separated rational sequence.
    Locality {
        #[arg(long)]
        dmax: usize,
        seq: String,
    },
    /// Canonical form of each component of a local functional, with the
    /// witness jet.
    Canonicalize { chi: String },
    /// Pseudo-orbit equality of two local functionals.
    OrbitEq { chi1: String, chi2: String },
    /// Dimension of the pseudo-orbit.
    OrbitDim { chi: String },
    /// Complete pseudo-orbit invariant.
    OrbitInvariant { chi: String },
    /// Classify a finite-codimension subalgebra presentation (JSON).
    ClassifySubalg { json: String },
    /// Express z as a bracket combination of lifted elements v_p = f t^p ∂ + lambda_p z.
    ExpressZ {
        #[arg(long)]
        f: String,
        /// JSON map p -> lambda_p, e.g. '{"0":"1/2","3":"0"}'. Missing
        /// entries default to 0.
        #[arg(long)]
        lifts: Option<String>,
    },
    /// Localized Weyl algebra operations.
    Weyl {
        #[command(subcommand)]
        cmd: WeylCmd,
    },
}

#[derive(Subcommand)]
enum WeylCmd {
    /// Normal-ordered product of two elements in `c*t^i*d^k` grammar.
    Mul { a: String, b: String },
    /// Image of a W element under pi_gamma.
    Pi {
        elem: String,
        #[arg(long)]
        gamma: String,
    },
    /// Action of a Weyl element on a module vector `{"x":"1","coeffs":["1","0"]}`.
    Act {
        elem: String,
        #[arg(long)]
        vector: String,
    },
    /// Bounded cyclic span under the gamma-twisted W action.
    Span {
        #[arg(long)]
        vector: String,
        #[arg(long)]
        gamma: String,
        #[arg(long)]
        bound: usize,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{}", e);
                return ExitCode::SUCCESS;
            }
            eprintln!("{}", e);
            return ExitCode::from(1);
        }
    };
    match run(&cli.cmd) {
        Ok(out) => {
            match cli.format {
                Format::Text => println!("{}", out.text),
                Format::Json => {
                    let mut v = out.json;
                    if let Value::Object(map) = &mut v {
                        map.insert("version".into(), json!(VERSION));
                    }
                    println!("{}", v);
                }
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {}", e);
            ExitCode::from(if e.is_parse() { 1 } else { 2 })
        }
    }
}

struct Output {
    text: String,
    json: Value,
}

impl Output {
    fn scalar(text: String, key: &str) -> Output {
        let json = json!({ key: text });
        Output { text, json }
    }
}

fn run(cmd: &Cmd) -> Result<Output, Error> {
    match cmd {
        Cmd::Bracket { a, b, algebra } => {
            let tag = AlgebraTag::parse(algebra)?;
            let u = VirElement::parse(a, tag)?;
            let v = VirElement::parse(b, tag)?;
            let out = if tag == AlgebraTag::Vir {
                vir_bracket(&u, &v)?
            } else {
                witt_bracket(&u, &v)?
            };
            Ok(Output::scalar(out.to_string(), "result"))
        }
        Cmd::Poisson { p, q } => {
            let a = sympoisson::parse_sympoly(p)?;
            let b = sympoisson::parse_sympoly(q)?;
            Ok(Output::scalar(
                sympoisson::poisson_bracket(&a, &b).to_string(),
                "result",
            ))
        }
        Cmd::Pgamma { p, gamma } => {
            let a = sympoisson::parse_sympoly(p)?;
            let g = parse_rational(gamma)?;
            Ok(Output::scalar(
                sympoisson::p_gamma_map(&a, &g).to_string(),
                "result",
            ))
        }
        Cmd::Eval { chi, elem } => {
            let c = LocalFunction::from_json_str(chi)?;
            let u = VirElement::parse(elem, c.tag())?;
            let value = localfn::eval_local(&c, &u)?;
            Ok(Output::scalar(rational_to_string(&value), "result"))
        }
        Cmd::Rank { chi } => {
            let c = LocalFunction::from_json_str(chi)?;
            let r = localfn::rank_b(&c);
            Ok(Output::scalar(r.to_string(), "rank"))
        }
        Cmd::Locality { dmax, seq } => {
            let terms: Vec<Rational> = seq
                .split(',')
                .map(|s| parse_rational(s.trim()))
                .collect::<Result<_, _>>()?;
            let h = localfn::recurrence_detect(&terms, *dmax)?;
            match h {
                None => Ok(Output {
                    text: "none".into(),
                    json: json!({ "recurrence": Value::Null }),
                }),
                Some(p) => Ok(Output {
                    text: p.to_string(),
                    json: json!({ "recurrence": p.to_string() }),
                }),
            }
        }
        Cmd::Canonicalize { chi } => {
            let c = LocalFunction::from_json_str(chi)?;
            if c.is_zero() {
                return Err(Error::ZeroFunctional);
            }
            let mut comps = Vec::new();
            let mut lines = Vec::new();
            for p in c.points() {
                let cf = dloc::canonicalize(p, c.tag())?;
                let witness: Vec<String> = cf
                    .witness
                    .jet()
                    .coeffs()
                    .iter()
                    .map(rational_to_string)
                    .collect();
                let case = match cf.case {
                    dloc::ParityCase::Even => "even",
                    dloc::ParityCase::Odd => "odd",
                    dloc::ParityCase::OrderOne => "order-one",
                };
                lines.push(format!(
                    "x = {}: order {} ({}), leading {}{}",
                    rational_to_string(p.x()),
                    cf.order,
                    case,
                    rational_to_string(&cf.leading),
                    match &cf.middle {
                        Some(b) => format!(", middle {}", rational_to_string(b)),
                        None => String::new(),
                    }
                ));
                comps.push(json!({
                    "x": rational_to_string(p.x()),
                    "order": cf.order,
                    "case": case,
                    "leading": rational_to_string(&cf.leading),
                    "middle": cf.middle.as_ref().map(rational_to_string),
                    "witness": witness,
                }));
            }
            Ok(Output {
                text: lines.join("\n"),
                json: json!({ "components": comps }),
            })
        }
        Cmd::OrbitEq { chi1, chi2 } => {
            let a = LocalFunction::from_json_str(chi1)?;
            let b = LocalFunction::from_json_str(chi2)?;
            let eq = dloc::orbit_equal(&a, &b)?;
            Ok(Output::scalar(eq.to_string(), "equal"))
        }
        Cmd::OrbitDim { chi } => {
            let c = LocalFunction::from_json_str(chi)?;
            Ok(Output::scalar(dloc::orbit_dim(&c).to_string(), "dim"))
        }
        Cmd::OrbitInvariant { chi } => {
            let c = LocalFunction::from_json_str(chi)?;
            let inv = dloc::orbit_invariant(&c)?;
            let comps: Vec<Value> = inv.components.iter().map(component_json).collect();
            let text = inv
                .components
                .iter()
                .map(component_text)
                .collect::<Vec<_>>()
                .join("; ");
            Ok(Output {
                text,
                json: json!({ "tag": inv.tag.as_str(), "components": comps }),
            })
        }
        Cmd::ClassifySubalg { json: input } => {
            let k = parse_subalg(input)?;
            let code = subalg::classify(&k)?;
            Ok(Output {
                text: code.to_string(),
                json: classification_json(&code),
            })
        }
        Cmd::ExpressZ { f, lifts } => {
            let poly = parse_laurent(f)?;
            let mut map: BTreeMap<i64, Rational> = BTreeMap::new();
            if let Some(s) = lifts {
                let v: Value = serde_json::from_str(s)
                    .map_err(|e| Error::Parse { pos: 0, msg: format!("invalid lifts JSON: {}", e) })?;
                let obj = v
                    .as_object()
                    .ok_or_else(|| Error::Parse { pos: 0, msg: "lifts must be an object".into() })?;
                for (key, val) in obj {
                    let p: i64 = key
                        .parse()
                        .map_err(|_| Error::Parse { pos: 0, msg: format!("bad index `{}`", key) })?;
                    let lam = parse_rational(val.as_str().ok_or_else(|| Error::Parse {
                        pos: 0,
                        msg: "lift values must be strings".into(),
                    })?)?;
                    map.insert(p, lam);
                }
            }
            // Missing lambda_p default to 0.
            let comb = match subalg::vir_express_z(&poly, &map) {
                Ok(c) => c,
                Err(Error::InsufficientLifts { needed, .. }) => {
                    for p in needed.split(", ") {
                        map.insert(p.parse().expect("indices from the library"), num::Zero::zero());
                    }
                    subalg::vir_express_z(&poly, &map)?
                }
                Err(e) => return Err(e),
            };
            let bracket_terms: Vec<Value> = comb
                .bracket_terms
                .iter()
                .map(|(c, p, q)| json!([rational_to_string(c), p.to_string(), q.to_string()]))
                .collect();
            let mut text = String::new();
            for (i, (c, p, q)) in comb.bracket_terms.iter().enumerate() {
                use num::Signed;
                if i == 0 {
                    if c.is_negative() {
                        text.push('-');
                    }
                } else if c.is_negative() {
                    text.push_str(" - ");
                } else {
                    text.push_str(" + ");
                }
                text.push_str(&format!(
                    "{}*[v_{}, v_{}]",
                    rational_to_string(&c.abs()),
                    p,
                    q
                ));
            }
            // sanity: the combination evaluates to z exactly
            let value = comb.evaluate(&poly, &map)?;
            debug_assert!(value == VirElement::z());
            Ok(Output {
                text: format!("z = {}", text),
                json: json!({ "bracket_terms": bracket_terms, "field_terms": [] }),
            })
        }
        Cmd::Weyl { cmd } => run_weyl(cmd),
    }
}

fn run_weyl(cmd: &WeylCmd) -> Result<Output, Error> {
    match cmd {
        WeylCmd::Mul { a, b } => {
            let x = weyl::parse_weyl(a)?;
            let y = weyl::parse_weyl(b)?;
            Ok(Output::scalar(weyl::weyl_mul(&x, &y).to_string(), "result"))
        }
        WeylCmd::Pi { elem, gamma } => {
            let u = VirElement::parse(elem, AlgebraTag::W)?;
            let g = parse_rational(gamma)?;
            Ok(Output::scalar(weyl::pi_gamma(&u, &g)?.to_string(), "result"))
        }
        WeylCmd::Act { elem, vector } => {
            let a = weyl::parse_weyl(elem)?;
            let v = weyl::NVector::from_json_str(vector)?;
            let out = weyl::weyl_act_n(&a, &v);
            Ok(Output {
                text: out.to_string(),
                json: out.to_json(),
            })
        }
        WeylCmd::Span {
            vector,
            gamma,
            bound,
        } => {
            let v = weyl::NVector::from_json_str(vector)?;
            let g = parse_rational(gamma)?;
            let report = weyl::cyclic_span(&v, &g, *bound)?;
            Ok(Output {
                text: format!(
                    "dim {} within bound; delta {}",
                    report.dim,
                    if report.delta_reached { "reached" } else { "not reached" }
                ),
                json: json!({ "dim": report.dim, "delta_reached": report.delta_reached }),
            })
        }
    }
}

fn component_text(c: &dloc::ComponentInvariant) -> String {
    use dloc::ComponentInvariant as CI;
    let r = rational_to_string;
    match c {
        CI::Gamma { b1 } => format!("(n = 1, value {})", r(b1)),
        CI::Even { n } => format!("(n = {})", n),
        CI::Odd { n, b_sq_over_c } => format!("(n = {}, b^2/c = {})", n, r(b_sq_over_c)),
        CI::AtZeroGamma { b1 } => format!("(x = 0, n = 1, value {})", r(b1)),
        CI::AtZeroEven { n } => format!("(x = 0, n = {})", n),
        CI::AtZeroOdd { n, b_sq_over_c } => {
            format!("(x = 0, n = {}, b^2/c = {})", n, r(b_sq_over_c))
        }
        CI::AtZeroUnipEven { n, c } => format!("(x = 0, n = {}, c = {})", n, r(c)),
        CI::AtZeroUnipOdd { n, c, b } => {
            format!("(x = 0, n = {}, c = {}, b = {})", n, r(c), r(b))
        }
    }
}

fn component_json(c: &dloc::ComponentInvariant) -> Value {
    use dloc::ComponentInvariant as CI;
    let r = rational_to_string;
    match c {
        CI::Gamma { b1 } => json!({"kind": "order-one", "value": r(b1)}),
        CI::Even { n } => json!({"kind": "even", "n": n}),
        CI::Odd { n, b_sq_over_c } => json!({"kind": "odd", "n": n, "b_sq_over_c": r(b_sq_over_c)}),
        CI::AtZeroGamma { b1 } => json!({"kind": "order-one", "at_zero": true, "value": r(b1)}),
        CI::AtZeroEven { n } => json!({"kind": "even", "at_zero": true, "n": n}),
        CI::AtZeroOdd { n, b_sq_over_c } => {
            json!({"kind": "odd", "at_zero": true, "n": n, "b_sq_over_c": r(b_sq_over_c)})
        }
        CI::AtZeroUnipEven { n, c } => {
            json!({"kind": "even", "at_zero": true, "n": n, "c": r(c)})
        }
        CI::AtZeroUnipOdd { n, c, b } => {
            json!({"kind": "odd", "at_zero": true, "n": n, "c": r(c), "b": r(b)})
        }
    }
}

/// Parses `{"f0":{"roots":[["1",3]]},"generators":["t - 2*t^2 + t^3"],"tag":"W"}`.
fn parse_subalg(s: &str) -> Result<subalg::SubalgebraPresentation, Error> {
    use wittvir_core::exactalg::FactoredPoly;
    let v: Value = serde_json::from_str(s)
        .map_err(|e| Error::Parse { pos: 0, msg: format!("invalid JSON: {}", e) })?;
    let obj = v
        .as_object()
        .ok_or_else(|| Error::Parse { pos: 0, msg: "expected a JSON object".into() })?;
    let tag = AlgebraTag::parse(
        obj.get("tag")
            .and_then(Value::as_str)
            .ok_or_else(|| Error::Parse { pos: 0, msg: "missing `tag`".into() })?,
    )?;
    let f0obj = obj
        .get("f0")
        .and_then(Value::as_object)
        .ok_or_else(|| Error::Parse { pos: 0, msg: "missing `f0` object".into() })?;
    let mut roots = Vec::new();
    for r in f0obj
        .get("roots")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::Parse { pos: 0, msg: "missing `roots` array".into() })?
    {
        let pair = r
            .as_array()
            .filter(|a| a.len() == 2)
            .ok_or_else(|| Error::Parse { pos: 0, msg: "roots entries are [x, mult] pairs".into() })?;
        let x = parse_rational(pair[0].as_str().ok_or_else(|| Error::Parse {
            pos: 0,
            msg: "root must be a string".into(),
        })?)?;
        let m = pair[1]
            .as_u64()
            .or_else(|| pair[1].as_str().and_then(|s| s.parse().ok()))
            .ok_or_else(|| Error::Parse { pos: 0, msg: "multiplicity must be an integer".into() })?;
        roots.push((x, m as u32));
    }
    let f0 = FactoredPoly::new(num::One::one(), roots, 0)?;
    let mut generators = Vec::new();
    if let Some(arr) = obj.get("generators").and_then(Value::as_array) {
        for g in arr {
            let s = g.as_str().ok_or_else(|| Error::Parse {
                pos: 0,
                msg: "generators must be grammar strings".into(),
            })?;
            generators.push(VirElement::parse(s, tag)?);
        }
    }
    subalg::SubalgebraPresentation::new(f0, generators, tag)
}

fn classification_json(code: &subalg::ClassificationCode) -> Value {
    use subalg::ClassificationCode as C;
    let r = rational_to_string;
    let (family, params) = match code {
        C::Wf { f } => ("W(f)", json!({ "f": f.to_string() })),
        C::W21 { x, alpha } => ("W2;1", json!({ "x": r(x), "alpha": r(alpha) })),
        C::W22 { x, alpha } => ("W2;2", json!({ "x": r(x), "alpha": r(alpha) })),
        C::W3A { x, y, alpha, beta } => (
            "W3A",
            json!({ "x": r(x), "y": r(y), "alpha": r(alpha), "beta": r(beta) }),
        ),
        C::W3B1 { x, y, alpha } => ("W3B1", json!({ "x": r(x), "y": r(y), "alpha": r(alpha) })),
        C::W3B2 { x, y, alpha } => ("W3B2", json!({ "x": r(x), "y": r(y), "alpha": r(alpha) })),
        C::W3C1 { x, alpha } => ("W3C1", json!({ "x": r(x), "alpha": r(alpha) })),
        C::W3C2 { x, alpha, beta } => (
            "W3C2",
            json!({ "x": r(x), "alpha": r(alpha), "beta": r(beta) }),
        ),
        C::W3C3 { x, alpha, beta } => (
            "W3C3",
            json!({ "x": r(x), "alpha": r(alpha), "beta": r(beta) }),
        ),
        C::W3C4 { x, alpha, beta } => (
            "W3C4",
            json!({ "x": r(x), "alpha": r(alpha), "beta": r(beta) }),
        ),
        C::W3C5 { x, alpha, beta } => (
            "W3C5",
            json!({ "x": r(x), "alpha": r(alpha), "beta": r(beta) }),
        ),
    };
    json!({ "code": code.to_string(), "family": family, "params": params })
}
