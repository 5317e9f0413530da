//! Acceptance criteria, one line of output each. Run with
//! `cargo test -p lipfree-core --test acceptance`.

use std::process::ExitCode;
use std::time::Instant;

use lipfree_core::duality::{hat_norm_check, linearity_test, LinearityOptions};
use lipfree_core::mean_projection::{decompose, project_linear, WindowSchedule};
use lipfree_core::quotient::{dist_to_linear, quotient_oracle_1d, theta_isometry_check};
use lipfree_core::random;
use lipfree_core::real_line::phi_map;
use lipfree_core::{
    eta, eta_inverse, free_norm, free_norm_dual, free_norm_primal, rational, FunctionSpec,
    LinearMap, Molecule, NormKind, Point, Rational, Scalar, Space,
};
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;

fn rng(stream: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(0xacce_0000 + stream)
}

/// Norm of a coordinate vector, computed without the library.
fn oracle_norm(kind: NormKind, v: &[f64]) -> f64 {
    match kind {
        _ if v.len() == 1 => v[0].abs(),
        NormKind::L1 => v.iter().map(|x| x.abs()).sum(),
        NormKind::Linf => v.iter().fold(0.0, |m, x| m.max(x.abs())),
        NormKind::L2 => v.iter().map(|x| x * x).sum::<f64>().sqrt(),
    }
}

fn oracle_norm_exact(kind: NormKind, v: &[Rational]) -> Rational {
    match kind {
        _ if v.len() == 1 => v[0].abs(),
        NormKind::L1 => v.iter().map(|x| x.abs()).sum(),
        NormKind::Linf => v.iter().map(|x| x.abs()).max().unwrap(),
        NormKind::L2 => unreachable!("only polyhedral norms are compared exactly"),
    }
}

fn rel_close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-9 * a.abs().max(b.abs()).max(1.0)
}

fn delta_isometry() -> Check {
    let mut rng = rng(1);
    let pythagorean: [&[i64]; 4] = [&[3, 4], &[5, 12], &[2, 3, 6], &[1, 4, 8]];
    let mut exact_cases = 0;
    for i in 0..100 {
        let dim = rng.gen_range(1..=3);
        let kind = [NormKind::L1, NormKind::L2, NormKind::Linf][i % 3];
        let space = Space::new(dim, kind).unwrap();
        let x: Point<Rational> = random::point(&mut rng, dim, 6);
        let y: Point<Rational> = random::point(&mut rng, dim, 6);
        if x == y || x.is_zero() {
            continue;
        }
        if kind != NormKind::L2 || dim == 1 {
            exact_cases += 1;
            let nx = free_norm(&Molecule::delta(space, x.clone()).unwrap())
                .map_err(|e| e.to_string())?;
            if nx != oracle_norm_exact(kind, &x) {
                return Err(format!("‖δ{x}‖ = {nx} in {space}"));
            }
            let m = Molecule::delta(space, x.clone())
                .unwrap()
                .sub(&Molecule::delta(space, y.clone()).unwrap())
                .unwrap();
            let diff: Vec<Rational> = x.iter().zip(y.iter()).map(|(a, b)| a - b).collect();
            if free_norm(&m).map_err(|e| e.to_string())? != oracle_norm_exact(kind, &diff) {
                return Err(format!("‖δ{x} − δ{y}‖ in {space}"));
            }
        }
        let (xf, yf) = (x.to_f64(), y.to_f64());
        let nx =
            free_norm(&Molecule::delta(space, xf.clone()).unwrap()).map_err(|e| e.to_string())?;
        let m = Molecule::delta(space, xf.clone())
            .unwrap()
            .sub(&Molecule::delta(space, yf.clone()).unwrap())
            .unwrap();
        let nm = free_norm(&m).map_err(|e| e.to_string())?;
        let diff: Vec<f64> = xf.iter().zip(yf.iter()).map(|(a, b)| a - b).collect();
        if !rel_close(nx, oracle_norm(kind, &xf)) || !rel_close(nm, oracle_norm(kind, &diff)) {
            return Err(format!("float mismatch at {xf} {yf} in {space}"));
        }
    }
    for (k, coords) in pythagorean.iter().enumerate() {
        let space = Space::new(coords.len(), NormKind::L2).unwrap();
        let scale = rational(1, k as i64 + 2);
        let x = Point::from_i64s(coords).scale(&scale);
        let expected = rational(coords.iter().map(|c| c * c).sum::<i64>().isqrt(), 1) * scale;
        if free_norm(&Molecule::delta(space, x.clone()).unwrap()).map_err(|e| e.to_string())?
            != expected
        {
            return Err(format!("exact ℓ² norm of δ{x}"));
        }
    }
    Ok(format!(
        "100 points, {exact_cases} exact polyhedral, 4 exact ℓ² lattice points"
    ))
}

fn molecules_for_duality() -> Vec<(Molecule<Rational>, bool)> {
    let mut rng = rng(2);
    (0..200)
        .map(|i| {
            let exact = i % 4 != 3;
            let space = if exact {
                random::polyhedral_space(&mut rng, 3)
            } else {
                random::space(&mut rng, 3)
            };
            (random::molecule_upto(&mut rng, space, 6), exact)
        })
        .collect()
}

fn to_float(m: &Molecule<Rational>) -> Molecule<f64> {
    let terms = m
        .terms()
        .iter()
        .map(|t| (t.coeff.to_f64(), t.point.to_f64()))
        .collect();
    Molecule::new(*m.space(), terms).unwrap()
}

fn strong_duality(cases: &[(Molecule<Rational>, bool)]) -> Check {
    for (m, exact) in cases {
        if *exact {
            let (d, p) = (
                free_norm_dual(m).unwrap().value,
                free_norm_primal(m).unwrap().value,
            );
            if d != p {
                return Err(format!("dual {d} primal {p} for {m}"));
            }
        }
        let mf = to_float(m);
        let (d, p) = (
            free_norm_dual(&mf).unwrap().value,
            free_norm_primal(&mf).unwrap().value,
        );
        if !rel_close(d, p) {
            return Err(format!("float dual {d} primal {p} for {m}"));
        }
    }
    let exact = cases.iter().filter(|c| c.1).count();
    Ok(format!(
        "{} molecules, {exact} also in exact arithmetic",
        cases.len()
    ))
}

fn beta_contraction(cases: &[(Molecule<Rational>, bool)]) -> Check {
    for (m, exact) in cases {
        let space = *m.space();
        if *exact {
            let b = oracle_norm_exact(space.norm_kind(), &m.beta());
            if b > free_norm(m).unwrap() {
                return Err(format!("‖β‖ = {b} exceeds the norm of {m}"));
            }
        }
        let mf = to_float(m);
        let b = oracle_norm(space.norm_kind(), &mf.beta());
        if b > free_norm(&mf).unwrap() * (1.0 + 1e-9) {
            return Err(format!("float ‖β‖ = {b} for {m}"));
        }
    }
    Ok(format!("{} molecules", cases.len()))
}

/// The L¹ norm and integral of `φ(m)` from sorted partial sums, without
/// building step functions: on `(t, t')` right of the origin `φ(m)` equals
/// the mass at points `≥ t'`, and left of it minus the mass at points `≤ t`.
fn step_oracle(m: &Molecule<Rational>) -> (Rational, Rational) {
    let mut cuts: Vec<Rational> = m.terms().iter().map(|t| t.point[0].clone()).collect();
    cuts.push(Rational::zero());
    cuts.sort();
    cuts.dedup();
    let (mut l1, mut integral) = (Rational::zero(), Rational::zero());
    for w in cuts.windows(2) {
        let (a, b) = (&w[0], &w[1]);
        let value: Rational = if *a >= Rational::zero() {
            m.terms()
                .iter()
                .filter(|t| &t.point[0] >= b)
                .map(|t| t.coeff.clone())
                .sum()
        } else {
            -m.terms()
                .iter()
                .filter(|t| &t.point[0] <= a)
                .map(|t| t.coeff.clone())
                .sum::<Rational>()
        };
        l1 += value.abs() * (b - a);
        integral += value * (b - a);
    }
    (l1, integral)
}

fn line_model() -> Check {
    let mut rng = rng(3);
    let mut kernels = 0;
    for i in 0..200 {
        let mut m: Molecule<Rational> = random::molecule_upto(&mut rng, Space::real_line(), 6);
        if i % 2 == 1 {
            m = eta_inverse(&m).unwrap().kernel_part;
        }
        let s = phi_map(&m).map_err(|e| e.to_string())?;
        let (l1, integral) = step_oracle(&m);
        let norm = free_norm(&m).unwrap();
        if s.l1_norm() != l1 || l1 != norm {
            return Err(format!(
                "‖φ(m)‖₁ = {}, oracle {l1}, free norm {norm} for {m}",
                s.l1_norm()
            ));
        }
        if s.integral() != integral || integral != m.beta()[0] {
            return Err(format!(
                "∫φ(m) = {}, oracle {integral}, β = {}",
                s.integral(),
                m.beta()[0]
            ));
        }
        let in_kernel = m.is_kernel(0.0);
        kernels += in_kernel as usize;
        if in_kernel != integral.is_zero() {
            return Err(format!("kernel test disagrees with the integral for {m}"));
        }
    }
    Ok(format!(
        "200 molecules ({kernels} in the kernel), zero failures"
    ))
}

fn sampled_lip(f: &FunctionSpec<Rational>, sample: &[Point<Rational>]) -> Rational {
    let (dom, cod) = (f.domain(), f.codomain());
    let mut best = Rational::zero();
    for (i, x) in sample.iter().enumerate() {
        for y in &sample[i + 1..] {
            let fx = f.evaluate(x).unwrap();
            let fy = f.evaluate(y).unwrap();
            let dy: Vec<Rational> = fx.iter().zip(fy.iter()).map(|(a, b)| a - b).collect();
            let dx: Vec<Rational> = x.iter().zip(y.iter()).map(|(a, b)| a - b).collect();
            best = best.max(
                oracle_norm_exact(cod.norm_kind(), &dy) / oracle_norm_exact(dom.norm_kind(), &dx),
            );
        }
    }
    best
}

fn hat_norm_identity() -> Check {
    let mut rng = rng(5);
    for _ in 0..50 {
        let domain = random::polyhedral_space(&mut rng, 2);
        let codomain = random::polyhedral_space(&mut rng, 2);
        let f: FunctionSpec<Rational> = random::piecewise_affine(&mut rng, domain, codomain);
        let sample = random::anchored_sample(&mut rng, domain.dim(), 5);
        let rep = hat_norm_check(&f, &sample).map_err(|e| e.to_string())?;
        let lip = sampled_lip(&f, &sample);
        if rep.pairing_sup != lip || rep.lip_lower != lip {
            return Err(format!(
                "pairing sup {} vs Lipschitz constant {lip}",
                rep.pairing_sup
            ));
        }
    }
    Ok("50 maps on 5-point samples, gap exactly 0".into())
}

fn direct_pairing(f: &FunctionSpec<f64>, m: &Molecule<f64>) -> f64 {
    m.terms()
        .iter()
        .map(|t| t.coeff * f.evaluate(&t.point).unwrap()[0])
        .sum()
}

fn linearity_criterion() -> Check {
    let mut rng = rng(6);
    for i in 0..20 {
        let domain = random::polyhedral_space(&mut rng, 3);
        let codomain = random::polyhedral_space(&mut rng, 3);
        let t: LinearMap<Rational> = random::linear_map(&mut rng, codomain.dim(), domain.dim());
        let f = FunctionSpec::linear(t, domain, codomain).unwrap();
        let v = linearity_test(
            &f,
            &LinearityOptions {
                tol: 0.0,
                seed: i,
                ..Default::default()
            },
        )
        .unwrap();
        if !v.is_linear || v.witness.is_some() {
            return Err(format!(
                "linear map {i} flagged with violation {}",
                v.max_violation
            ));
        }
    }
    let cases = [
        ("abs(x0)", -10.0, 10.0),
        ("max(x0, 2*x0)", -10.0, 10.0),
        ("x0 + sin(x0)", -3.0, 3.0),
    ];
    let mut sizes = Vec::new();
    for (text, lo, hi) in cases {
        let f = FunctionSpec::<f64>::parse(text, Space::real_line(), Space::real_line()).unwrap();
        let v = linearity_test(
            &f,
            &LinearityOptions {
                lo,
                hi,
                tol: 1e-6,
                ..Default::default()
            },
        )
        .unwrap();
        let w = v.witness.ok_or_else(|| format!("no witness for {text}"))?;
        let size = direct_pairing(&f, &w).abs();
        if size <= 1e-3 || w.beta()[0].abs() > 1e-9 {
            return Err(format!("weak witness for {text}: {w}"));
        }
        sizes.push(format!("{text}: {size:.3}"));
    }
    Ok(format!(
        "20 linear maps clean; witnesses {}",
        sizes.join(", ")
    ))
}

fn linear_text(row: &[Rational]) -> String {
    row.iter()
        .enumerate()
        .map(|(j, c)| format!("({})*x{j}", c.render()))
        .collect::<Vec<_>>()
        .join(" + ")
}

fn projection_criterion() -> Check {
    let mut rng = rng(7);
    let mut worst_linear: f64 = 0.0;
    let mut worst_wobble: f64 = 0.0;
    let mut flagged = 0;
    let mut bound_checks = 0;
    let check_bounds =
        |f: &FunctionSpec<f64>, label: &str, flagged: &mut usize, checks: &mut usize| {
            let n = f.domain().dim();
            let sample: Vec<Point<f64>> =
                random::anchored_sample::<Rational, _>(&mut rng_for(label), n, 40)
                    .iter()
                    .map(Point::to_f64)
                    .collect();
            let d = decompose(f, &sample, &WindowSchedule::default_for(n))
                .map_err(|e| e.to_string())?;
            *checks += 1;
            if !d.projection.converged {
                *flagged += 1;
            }
            let total = d.operator_norm + d.residual_lip;
            if d.lip > total + 1e-6 || total > 3.0 * d.lip + 1e-6 {
                return Err(format!("{label}: Lip {} vs ‖T‖ + residual {total}", d.lip));
            }
            Ok(d.projection)
        };
    for _ in 0..6 {
        let (n, m) = (rng.gen_range(1..=3), rng.gen_range(1..=3));
        let t: LinearMap<Rational> = random::linear_map(&mut rng, m, n);
        let domain = Space::new(n, random::norm_kind(&mut rng)).unwrap();
        let codomain = Space::new(m, NormKind::Linf).unwrap();
        let tf = t.to_f64();
        let lin = FunctionSpec::linear(tf.clone(), domain, codomain).unwrap();
        let p = project_linear(&lin, &WindowSchedule::default_for(n)).map_err(|e| e.to_string())?;
        worst_linear = worst_linear.max(p.map.max_abs_diff(&tf));

        let rows: Vec<String> = t
            .to_rows()
            .iter()
            .map(|row| {
                let j = rng.gen_range(0..n);
                let c = random::rational_in(&mut rng, 2);
                format!("{} + ({})*sin(x{j})", linear_text(row), c.render())
            })
            .collect();
        let f = FunctionSpec::<f64>::parse(&rows.join("; "), domain, codomain).unwrap();
        let p = check_bounds(&f, &rows.join("; "), &mut flagged, &mut bound_checks)?;
        worst_wobble = worst_wobble.max(p.map.max_abs_diff(&tf));
    }
    let abs =
        FunctionSpec::<f64>::parse("abs(x0)", Space::real_line(), Space::real_line()).unwrap();
    let p = check_bounds(&abs, "abs", &mut flagged, &mut bound_checks)?;
    let abs_err = p.map.get(0, 0).abs();
    if worst_linear > 1e-12 || worst_wobble > 1e-3 || abs_err > 1e-3 {
        return Err(format!(
            "linear {worst_linear:e}, perturbed {worst_wobble:e}, abs {abs_err:e}"
        ));
    }
    Ok(format!(
        "linear error {worst_linear:e}, perturbed error {worst_wobble:.1e}, abs {abs_err:.1e}; \
         norm bounds hold on {bound_checks} maps ({flagged} not converged at tolerance)"
    ))
}

fn rng_for(label: &str) -> ChaCha8Rng {
    rng(label.bytes().map(u64::from).sum())
}

fn consecutive_slope_spread(f: &FunctionSpec<Rational>, sample: &[Point<Rational>]) -> Rational {
    let mut xs: Vec<Rational> = sample.iter().map(|p| p[0].clone()).collect();
    xs.sort();
    let slopes: Vec<Rational> = xs
        .windows(2)
        .map(|w| {
            let fa = f.evaluate(&[w[0].clone()]).unwrap()[0].clone();
            let fb = f.evaluate(&[w[1].clone()]).unwrap()[0].clone();
            (fb - fa) / (&w[1] - &w[0])
        })
        .collect();
    (slopes.iter().max().unwrap() - slopes.iter().min().unwrap()) / rational(2, 1)
}

fn theta_isometry() -> Check {
    let mut rng = rng(8);
    let mut line_cases = 0;
    for i in 0..50 {
        let dim = if i % 2 == 0 { 1 } else { 2 };
        let domain = Space::new(
            dim,
            if rng.gen_bool(0.5) {
                NormKind::L1
            } else {
                NormKind::Linf
            },
        )
        .unwrap();
        let codomain = if dim == 1 {
            Space::real_line()
        } else {
            Space::new(2, NormKind::Linf).unwrap()
        };
        let f: FunctionSpec<Rational> = random::piecewise_affine(&mut rng, domain, codomain);
        let size = rng.gen_range(2..=6);
        let sample = random::anchored_sample(&mut rng, dim, size);
        let rep = theta_isometry_check(&f, &sample, 0.0).map_err(|e| e.to_string())?;
        if !rep.gap.is_zero() {
            return Err(format!("gap {} on case {i}", rep.gap));
        }
        if dim == 1 {
            line_cases += 1;
            let oracle = consecutive_slope_spread(&f, &sample);
            let lp = dist_to_linear(&f, &sample).unwrap().value;
            if lp != oracle || quotient_oracle_1d(&f, &sample).unwrap() != oracle {
                return Err(format!("line case {i}: LP {lp}, slope spread {oracle}"));
            }
        }
    }
    Ok(format!(
        "50 maps, gap exactly 0; {line_cases} line cases match the slope oracle"
    ))
}

fn eta_bounds() -> Check {
    let mut rng = rng(9);
    let mut worst: f64 = 0.0;
    for i in 0..100 {
        let space = random::polyhedral_space(&mut rng, 3);
        let m1: Molecule<Rational> = random::molecule_upto(&mut rng, space, 5);
        let m2: Molecule<Rational> = random::molecule_upto(&mut rng, space, 5);
        let (p, q) = (eta_inverse(&m1).unwrap(), eta_inverse(&m2).unwrap());
        if eta(&p).unwrap() != m1 || eta_inverse(&eta(&p).unwrap()).unwrap() != p {
            return Err(format!("round trip broke on case {i}"));
        }
        let pair_dist = oracle_norm_exact(space.norm_kind(), &p.base.sub(&q.base))
            + free_norm(&p.kernel_part.sub(&q.kernel_part).unwrap()).unwrap();
        let mol_dist = free_norm(&m1.sub(&m2).unwrap()).unwrap();
        if mol_dist > pair_dist || pair_dist > rational(3, 1) * &mol_dist {
            return Err(format!(
                "case {i}: ‖m₁ − m₂‖ = {mol_dist}, ⊕₁ distance {pair_dist}"
            ));
        }
        if !mol_dist.is_zero() {
            worst = worst.max((pair_dist / mol_dist).to_f64());
        }
    }
    Ok(format!(
        "100 pairs, round trips exact, largest inverse ratio {worst:.3} ≤ 3"
    ))
}

type Criterion<'a> = Box<dyn Fn() -> Check + 'a>;

fn main() -> ExitCode {
    let shared = molecules_for_duality();
    let criteria: Vec<(&str, Criterion)> = vec![
        ("delta isometry", Box::new(delta_isometry)),
        ("strong duality", Box::new(|| strong_duality(&shared))),
        ("step-function model on the line", Box::new(line_model)),
        ("beta contraction", Box::new(|| beta_contraction(&shared))),
        (
            "Lipschitz norm equals pairing norm",
            Box::new(hat_norm_identity),
        ),
        (
            "linearity by kernel annihilation",
            Box::new(linearity_criterion),
        ),
        (
            "projection onto linear maps",
            Box::new(projection_criterion),
        ),
        (
            "quotient distance equals kernel supremum",
            Box::new(theta_isometry),
        ),
        ("eta decomposition bounds", Box::new(eta_bounds)),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(std::panic::AssertUnwindSafe(check))
            .unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS criterion {}: {name} ({detail}) [{secs:.2}s]", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {}: {name} ({why}) [{secs:.2}s]", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
