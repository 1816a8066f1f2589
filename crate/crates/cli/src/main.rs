//! `detmod`: command-line front end.
//!
//! Exit codes: 0 when the property holds or the artifact was produced, 1 when
//! the property fails (the report carries a witness), 2 on input errors.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use detmod_core::determinacy::{
    check_encoding, encode, is_s_determined, is_s_determined_oracle,
};
use detmod_core::extgrid::{alpha, beta, convex_projection, ExtCoord};
use detmod_core::format::{
    diagram_to_json, multiplicities_to_json, parse_box, parse_diagram, parse_module,
    parse_point_set, parse_presentation, point_set_to_json, point_to_json, presentation_to_json,
    render, to_json,
};
use detmod_core::presentation::{
    build_presentation, default_test_points, diagram_births_deaths, is_admissible,
    verify_presentation,
};
use detmod_core::{Error, GridBox, GridModule, PointSet, PosetDiagram, DEFAULT_MARGIN};

#[derive(Parser, Debug)]
#[command(name = "detmod", version, about = "Determinacy, encodings and presentations of modules over the extended grid")]
struct Cli {
    #[command(subcommand)]
    verb: Verb,

    /// Margin around the box for critical grids (overrides DETMOD_MARGIN).
    #[arg(long, global = true)]
    margin: Option<i64>,

    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(clap::Args, Debug)]
struct SetArg {
    /// Determining set: inline JSON or a file. Defaults to ext_box([a+u, b]).
    #[arg(long)]
    set: Option<String>,
}

#[derive(Subcommand, Debug)]
enum Verb {
    /// Check shapes and commutativity of a module or diagram file.
    Validate { input: String },
    /// Decide whether M̄ is S-determined.
    Determinacy {
        input: String,
        #[command(flatten)]
        set: SetArg,
        /// Brute force over a window instead of the critical grid.
        #[arg(long)]
        oracle: bool,
        /// Oracle window, `lo..hi` with integers or JSON arrays.
        #[arg(long, allow_hyphen_values = true)]
        window: Option<String>,
        /// Skip the support condition.
        #[arg(long)]
        no_support: bool,
    },
    /// Emit the encoding diagram on the closure of S.
    Encode {
        input: String,
        #[command(flatten)]
        set: SetArg,
    },
    /// Births and deaths of a module (through S) or of a diagram file.
    BirthsDeaths {
        input: String,
        #[command(flatten)]
        set: SetArg,
    },
    /// Build a finite presentation.
    Present {
        input: String,
        #[command(flatten)]
        set: SetArg,
    },
    /// Verify a presentation (or an encoding) against a module.
    Verify {
        input: String,
        #[arg(long, conflicts_with = "encoding")]
        presentation: Option<String>,
        #[arg(long, requires = "set")]
        encoding: Option<String>,
        #[command(flatten)]
        set: SetArg,
        /// Test points; defaults to the closure of S and the critical grid.
        #[arg(long)]
        points: Option<String>,
    },
    /// Decide whether a join-closed set is admissible.
    Admissible {
        input: String,
        #[arg(long)]
        lattice: String,
    },
    /// Tabulate α, β∘α and π for points against a box.
    Project {
        #[arg(long = "box")]
        bx: String,
        #[arg(long)]
        points: String,
    },
}

/// A report with its verdict, or an input error.
enum Outcome {
    Done(Value, bool),
    Input(String),
}

fn load(arg: &str) -> Result<Value, Error> {
    let t = arg.trim_start();
    let text = if t.starts_with('{') || t.starts_with('[') {
        arg.to_string()
    } else {
        fs::read_to_string(arg).map_err(|e| Error::Input(format!("cannot read {arg}: {e}")))?
    };
    serde_json::from_str(&text).map_err(|e| Error::Format(format!("{arg}: {e}")))
}

fn load_module(arg: &str) -> Result<GridModule, Error> {
    let m = parse_module(&load(arg)?)?;
    m.validate().map_err(|v| Error::Violation(v.to_string()))?;
    Ok(m)
}

fn default_set(bx: &GridBox) -> PointSet {
    let factors = (0..bx.dim())
        .map(|i| {
            std::iter::once(ExtCoord::NegInf)
                .chain((bx.a[i] + 1..=bx.b[i]).map(ExtCoord::Int))
                .collect()
        })
        .collect();
    PointSet::cartesian(factors)
}

fn load_set(arg: &Option<String>, m: &GridModule) -> Result<PointSet, Error> {
    match arg {
        Some(a) => parse_point_set(&load(a)?, m.dim()),
        None => Ok(default_set(m.grid_box())),
    }
}

fn parse_corner(s: &str, n: Option<usize>) -> Result<Vec<i64>, Error> {
    let bad = || Error::Input(format!("bad window corner '{s}'"));
    let s = s.trim();
    if s.starts_with('[') {
        let v: Vec<i64> = serde_json::from_str(s).map_err(|_| bad())?;
        return Ok(v);
    }
    let x: i64 = s.parse().map_err(|_| bad())?;
    Ok(vec![x; n.ok_or_else(bad)?])
}

fn parse_window(s: &str, n: usize) -> Result<GridBox, Error> {
    let (lo, hi) = s
        .split_once("..")
        .ok_or_else(|| Error::Input(format!("window '{s}' is not of the form lo..hi")))?;
    let (a, b) = (parse_corner(lo, Some(n))?, parse_corner(hi, Some(n))?);
    if a.len() != n || b.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: a.len().max(b.len()) });
    }
    GridBox::new(a, b)
}

fn margin(cli: &Cli) -> Result<i64, Error> {
    if let Some(m) = cli.margin {
        return Ok(m);
    }
    match std::env::var("DETMOD_MARGIN") {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Error::Input(format!("DETMOD_MARGIN='{v}' is not an integer"))),
        Err(_) => Ok(DEFAULT_MARGIN),
    }
}

fn witness_report(e: Error) -> Outcome {
    match e {
        Error::NotDetermined { c, d } => Outcome::Done(
            json!({ "holds": false, "witness": [point_to_json(&c), point_to_json(&d)] }),
            false,
        ),
        other => Outcome::Input(other.to_string()),
    }
}

fn is_diagram(v: &Value) -> bool {
    v.get("points").is_some() && v.get("box").is_none()
}

fn run(cli: &Cli) -> Result<Outcome, Error> {
    let margin = margin(cli)?;
    Ok(match &cli.verb {
        Verb::Validate { input } => {
            let v = load(input)?;
            let result = if is_diagram(&v) {
                parse_diagram(&v)?.validate()
            } else {
                parse_module(&v)?.validate()
            };
            match result {
                Ok(()) => Outcome::Done(json!({ "valid": true }), true),
                Err(viol) => Outcome::Done(
                    json!({ "valid": false, "violation": to_json(&viol), "message": viol.to_string() }),
                    false,
                ),
            }
        }
        Verb::Determinacy { input, set, oracle, window, no_support } => {
            let m = load_module(input)?;
            let s = load_set(&set.set, &m)?;
            let view = m.view();
            let report = if *oracle {
                let w = match window {
                    Some(w) => parse_window(w, m.dim())?,
                    None => m.grid_box().clone(),
                };
                is_s_determined_oracle(&view, &s, &w, margin, !no_support)?
            } else {
                is_s_determined(&view, &s, !no_support, margin)?
            };
            let holds = report.holds;
            let mut out = to_json(&report);
            out["set"] = point_set_to_json(&s);
            Outcome::Done(out, holds)
        }
        Verb::Encode { input, set } => {
            let m = load_module(input)?;
            let s = load_set(&set.set, &m)?;
            match encode(&m.view(), &s, margin) {
                Ok(d) => Outcome::Done(diagram_to_json(&d), true),
                Err(e) => witness_report(e),
            }
        }
        Verb::BirthsDeaths { input, set } => {
            let v = load(input)?;
            let bd = if is_diagram(&v) {
                let d: PosetDiagram = parse_diagram(&v)?;
                d.validate().map_err(|e| Error::Violation(e.to_string()))?;
                diagram_births_deaths(&d)?
            } else {
                let m = load_module(input)?;
                let s = load_set(&set.set, &m)?;
                match detmod_core::presentation::births_deaths(&m.view(), &s, margin) {
                    Ok(bd) => bd,
                    Err(e) => return Ok(witness_report(e)),
                }
            };
            Outcome::Done(
                json!({
                    "births": multiplicities_to_json(&bd.births),
                    "deaths": multiplicities_to_json(&bd.deaths),
                }),
                true,
            )
        }
        Verb::Present { input, set } => {
            let m = load_module(input)?;
            let s = load_set(&set.set, &m)?;
            match build_presentation(&m.view(), &s, margin) {
                Ok(p) => Outcome::Done(presentation_to_json(&p), true),
                Err(e) => witness_report(e),
            }
        }
        Verb::Verify { input, presentation, encoding, set, points } => {
            let m = load_module(input)?;
            let view = m.view();
            if let Some(enc) = encoding {
                let s = load_set(&set.set, &m)?;
                let n = parse_diagram(&load(enc)?)?;
                n.validate().map_err(|e| Error::Violation(e.to_string()))?;
                let r = check_encoding(&view, &s, &n, margin)?;
                let holds = r.holds;
                return Ok(Outcome::Done(to_json(&r), holds));
            }
            let Some(pres) = presentation else {
                return Err(Error::Input("verify needs --presentation or --encoding".into()));
            };
            let p = parse_presentation(&load(pres)?)?;
            let tests = match points {
                Some(pts) => parse_point_set(&load(pts)?, m.dim())?,
                None => {
                    let mut anchors = load_set(&set.set, &m)?;
                    for g in p.generators.iter().chain(&p.relations) {
                        anchors.insert(g.point.clone())?;
                    }
                    default_test_points(&view, &anchors, margin)?
                }
            };
            let r = verify_presentation(&view, &p, &tests)?;
            let holds = r.holds;
            let mut out = to_json(&r);
            out["test_points"] = json!(tests.len());
            Outcome::Done(out, holds)
        }
        Verb::Admissible { input, lattice } => {
            let m = load_module(input)?;
            let l = parse_point_set(&load(lattice)?, m.dim())?;
            let r = is_admissible(&m, &l, margin)?;
            let holds = r.admissible;
            Outcome::Done(to_json(&r), holds)
        }
        Verb::Project { bx, points } => {
            let bx = parse_box(&load(bx)?)?;
            let pts = parse_point_set(&load(points)?, bx.dim())?;
            let sbar = bx.extended();
            let boxset = bx.to_point_set();
            let mut rows = Vec::new();
            let mut all = true;
            for c in pts.iter() {
                let a = alpha(&sbar, c);
                let ba = beta(&boxset, &a)?;
                let pi = if c.is_finite() { Some(convex_projection(&bx, c)?) } else { None };
                let agrees = pi.as_ref().is_none_or(|p| p == &ba);
                all &= agrees;
                rows.push(json!({
                    "point": point_to_json(c),
                    "alpha": point_to_json(&a),
                    "beta_alpha": point_to_json(&ba),
                    "pi": pi.as_ref().map(point_to_json),
                    "identity_holds": agrees,
                }));
            }
            Outcome::Done(json!({ "identity_holds": all, "rows": rows }), all)
        }
    })
}

fn emit(cli: &Cli, v: &Value) -> Result<(), Error> {
    let text = render(v);
    match &cli.out {
        Some(p) => fs::write(p, text).map_err(|e| Error::Input(format!("cannot write {}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = run(&cli).unwrap_or_else(|e| Outcome::Input(e.to_string()));
    match outcome {
        Outcome::Done(v, holds) => match emit(&cli, &v) {
            Ok(()) => ExitCode::from(if holds { 0 } else { 1 }),
            Err(e) => {
                eprintln!("detmod: {e}");
                ExitCode::from(2)
            }
        },
        Outcome::Input(msg) => {
            eprintln!("detmod: {msg}");
            ExitCode::from(2)
        }
    }
}
