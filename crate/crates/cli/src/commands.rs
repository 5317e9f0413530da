use std::error::Error as StdError;
use std::fs;
use std::path::Path;

use lipfree_core::duality::{linearity_test, pair, LinearityOptions};
use lipfree_core::io::{
    certificate_json, linear_map_json, molecule_json, parse_molecule, parse_points, point_json,
    space_json, step_function_json,
};
use lipfree_core::mean_projection::{decompose, WindowSchedule};
use lipfree_core::quotient::{dist_to_linear, kernel_ball_sup, quotient_oracle_1d};
use lipfree_core::real_line::phi_map;
use lipfree_core::verify::{self, VerifyOptions};
use lipfree_core::{
    certify, free_norm, Body, FunctionSpec, Molecule, NormKind, Point, Rational, Scalar, Space,
};
use serde_json::{json, Value};

use crate::{plot, Cli, Command, FnSpaces, Mode};

type Result<T> = std::result::Result<T, Box<dyn StdError>>;

pub struct Outcome {
    pub report: Value,
    pub passed: bool,
}

impl Outcome {
    fn ok(report: Value) -> Self {
        Self {
            report,
            passed: true,
        }
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()).into())
}

fn mode_name<S: Scalar>() -> &'static str {
    if S::EXACT {
        "exact"
    } else {
        "float"
    }
}

fn function_text<S: Scalar>(f: &FunctionSpec<S>) -> String {
    match f.body() {
        Body::Expr(es) => es
            .iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .join("; "),
        other => format!("{other:?}"),
    }
}

fn load_function<S: Scalar>(
    text: &str,
    domain: Space,
    codomain_norm: NormKind,
) -> Result<FunctionSpec<S>> {
    let codomain = Space::new(text.split(';').count(), codomain_norm)?;
    Ok(FunctionSpec::parse(text, domain, codomain)?)
}

/// Exact unless float was asked for or the function needs sin/cos.
fn use_exact(mode: Mode, function: Option<&str>) -> bool {
    mode == Mode::Exact
        && function.is_none_or(|text| !text.contains("sin") && !text.contains("cos"))
}

pub fn run(cli: &Cli) -> Result<Outcome> {
    let plot = cli.plot_data.as_deref();
    if let Some(dir) = plot {
        fs::create_dir_all(dir).map_err(|e| format!("{}: {e}", dir.display()))?;
    }
    match &cli.command {
        Command::Norm { file } => {
            let text = read(file)?;
            if use_exact(cli.mode, None) {
                norm::<Rational>(&text, plot)
            } else {
                norm::<f64>(&text, plot)
            }
        }
        Command::Beta { file } => {
            let text = read(file)?;
            if use_exact(cli.mode, None) {
                beta::<Rational>(&text)
            } else {
                beta::<f64>(&text)
            }
        }
        Command::Pair {
            function,
            file,
            codomain_norm,
        } => {
            let text = read(file)?;
            if use_exact(cli.mode, Some(function)) {
                pairing::<Rational>(function, &text, *codomain_norm)
            } else {
                pairing::<f64>(function, &text, *codomain_norm)
            }
        }
        Command::Lintest {
            function,
            spaces,
            trials,
            tol,
            bounds,
            seed,
        } => {
            let opts = LinearityOptions {
                trials: *trials,
                tol: *tol,
                lo: bounds.0,
                hi: bounds.1,
                seed: *seed,
            };
            if use_exact(cli.mode, Some(function)) {
                lintest::<Rational>(function, spaces, &opts)
            } else {
                lintest::<f64>(function, spaces, &opts)
            }
        }
        Command::Project {
            function,
            spaces,
            bounds,
        } => project(function, spaces, *bounds, plot),
        Command::Quotient {
            function,
            spaces,
            sample,
        } => {
            if use_exact(cli.mode, Some(function)) {
                quotient::<Rational>(function, spaces, sample, plot)
            } else {
                quotient::<f64>(function, spaces, sample, plot)
            }
        }
        Command::Phi { file } => phi(&read(file)?, plot),
        Command::Verify { suite, seed, exact } => {
            let opts = VerifyOptions {
                suite: suite.parse()?,
                seed: *seed,
                exact: *exact || cli.mode == Mode::Exact,
            };
            let rep = verify::run(&opts);
            Ok(Outcome {
                passed: rep.passed,
                report: serde_json::to_value(&rep)?,
            })
        }
    }
}

fn norm<S: Scalar>(text: &str, plot_dir: Option<&Path>) -> Result<Outcome> {
    let m: Molecule<S> = parse_molecule::<S>(text)?.canonicalize();
    let cert = certify(&m)?;
    if let Some(dir) = plot_dir {
        plot::potential(dir, &cert)?;
    }
    let mut report =
        json!({ "command": "norm", "mode": mode_name::<S>(), "input": molecule_json(&m) });
    if let (Value::Object(r), Value::Object(c)) = (&mut report, certificate_json(&cert)) {
        r.extend(c);
    }
    Ok(Outcome::ok(report))
}

fn beta<S: Scalar>(text: &str) -> Result<Outcome> {
    let m: Molecule<S> = parse_molecule::<S>(text)?.canonicalize();
    let b = m.beta();
    Ok(Outcome::ok(json!({
        "command": "beta",
        "mode": mode_name::<S>(),
        "input": molecule_json(&m),
        "beta": point_json(&b),
        "norm": m.space().norm(&b)?.render(),
        "is_kernel": m.is_kernel(lipfree_core::molecule::KERNEL_TOL),
    })))
}

fn pairing<S: Scalar>(function: &str, text: &str, codomain_norm: NormKind) -> Result<Outcome> {
    let m: Molecule<S> = parse_molecule::<S>(text)?.canonicalize();
    let f = load_function::<S>(function, *m.space(), codomain_norm)?;
    let value = pair(&f, &m)?;
    Ok(Outcome::ok(json!({
        "command": "pair",
        "mode": mode_name::<S>(),
        "input": { "function": function_text(&f), "molecule": molecule_json(&m) },
        "value": point_json(&value),
    })))
}

fn lintest<S: Scalar>(
    function: &str,
    spaces: &FnSpaces,
    opts: &LinearityOptions,
) -> Result<Outcome> {
    let domain = Space::new(spaces.dim, spaces.norm)?;
    let f = load_function::<S>(function, domain, spaces.codomain_norm)?;
    let verdict = linearity_test(&f, opts)?;
    let witness = match &verdict.witness {
        Some(w) => json!({ "molecule": molecule_json(w), "pairing": point_json(&pair(&f, w)?) }),
        None => Value::Null,
    };
    Ok(Outcome {
        passed: verdict.is_linear,
        report: json!({
            "command": "lintest",
            "mode": mode_name::<S>(),
            "input": { "function": function_text(&f), "domain": space_json(&domain) },
            "trials": opts.trials,
            "tol": opts.tol,
            "box": [opts.lo, opts.hi],
            "seed": opts.seed,
            "is_linear": verdict.is_linear,
            "max_violation": verdict.max_violation,
            "witness": witness,
        }),
    })
}

/// Evenly spaced grid over the box, about 81 points in total.
fn box_sample(dim: usize, (lo, hi): (f64, f64)) -> Vec<Point<f64>> {
    let per_axis: usize = match dim {
        1 => 81,
        2 => 9,
        3 => 5,
        _ => 3,
    };
    let total = per_axis.pow(dim as u32);
    (0..total)
        .map(|mut i| {
            Point::new(
                (0..dim)
                    .map(|_| {
                        let k = i % per_axis;
                        i /= per_axis;
                        lo + (hi - lo) * k as f64 / (per_axis - 1) as f64
                    })
                    .collect(),
            )
        })
        .collect()
}

fn project(
    function: &str,
    spaces: &FnSpaces,
    bounds: (f64, f64),
    plot_dir: Option<&Path>,
) -> Result<Outcome> {
    let domain = Space::new(spaces.dim, spaces.norm)?;
    let f = load_function::<f64>(function, domain, spaces.codomain_norm)?;
    let sched = WindowSchedule::default_for(domain.dim());
    let d = decompose(&f, &box_sample(domain.dim(), bounds), &sched)?;
    if let Some(dir) = plot_dir {
        plot::levels(dir, &sched, &d.projection)?;
    }
    let columns: Vec<Value> = d
        .projection
        .columns
        .iter()
        .map(|c| json!({ "value": c.value, "converged": c.converged, "last_step": c.last_step, "levels": c.levels }))
        .collect();
    let admissible = d.projection.converged;
    Ok(Outcome {
        passed: !admissible || (d.lower_holds && d.upper_holds),
        report: json!({
            "command": "project",
            "mode": "float",
            "input": { "function": function_text(&f), "domain": space_json(&domain), "box": [bounds.0, bounds.1] },
            "schedule": sched,
            "T": linear_map_json(&d.projection.map),
            "admissible": admissible,
            "columns": columns,
            "additivity_defect": d.projection.additivity_defect,
            "bounds": {
                "lip": d.lip,
                "operator_norm": d.operator_norm,
                "residual_lip": d.residual_lip,
                "lower_holds": d.lower_holds,
                "upper_holds": d.upper_holds,
            },
        }),
    })
}

fn quotient<S: Scalar>(
    function: &str,
    spaces: &FnSpaces,
    sample: &str,
    plot_dir: Option<&Path>,
) -> Result<Outcome> {
    let domain = Space::new(spaces.dim, spaces.norm)?;
    let f = load_function::<S>(function, domain, spaces.codomain_norm)?;
    let points: Vec<Point<S>> = parse_points(sample, domain.dim())?;
    let primal = dist_to_linear(&f, &points)?;
    let dual = kernel_ball_sup(&f, &points)?;
    let gap = (primal.value.clone() - dual.value.clone()).abs();
    let passed = if S::EXACT {
        gap.is_zero()
    } else {
        gap.to_f64() <= 1e-9
    };
    let oracle = if domain.dim() == 1 {
        Some(quotient_oracle_1d(&f, &points)?.render())
    } else {
        None
    };
    if let Some(dir) = plot_dir {
        plot::sample(dir, &f, &points)?;
    }
    Ok(Outcome {
        passed,
        report: json!({
            "command": "quotient",
            "mode": mode_name::<S>(),
            "input": {
                "function": function_text(&f),
                "domain": space_json(&domain),
                "sample": points.iter().map(point_json).collect::<Vec<_>>(),
            },
            "primal": { "value": primal.value.render(), "best": linear_map_json(&primal.best) },
            "dual": { "value": dual.value.render(), "witness": molecule_json(&dual.witness) },
            "gap": gap.render(),
            "oracle_1d": oracle,
        }),
    })
}

fn phi(text: &str, plot_dir: Option<&Path>) -> Result<Outcome> {
    let m: Molecule<Rational> = parse_molecule::<Rational>(text)?.canonicalize();
    let s = phi_map(&m)?;
    let (l1, integral) = (s.l1_norm(), s.integral());
    let norm = free_norm(&m)?;
    let beta = m.beta()[0].clone();
    if let Some(dir) = plot_dir {
        plot::step(dir, &s)?;
    }
    Ok(Outcome {
        passed: l1 == norm && integral == beta,
        report: json!({
            "command": "phi",
            "mode": "exact",
            "input": molecule_json(&m),
            "phi": step_function_json(&s),
            "l1_norm": l1.render(),
            "free_norm": norm.render(),
            "integral": integral.render(),
            "beta": beta.render(),
        }),
    })
}
