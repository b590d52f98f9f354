//! Acceptance criteria, one line of output per criterion.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::time::{Duration, Instant};

use conekit::arrangement::examples::complete_quadrilateral_half;
use conekit::arrangement::{PointClass, ProjLine, WeightedArrangement};
use conekit::cone_lab::{indicial_roots, mode_solution_2d, radial_solve, ModeProblem};
use conekit::cp1::{area, period_between, sc_polygon, PointConfig};
use conekit::invariants::{energy, energy_generic_closed_form, log_c2, tian_c2_generic, weighted_euler};
use conekit::pk_cone::{decay_rate_mu, holomorphic_spectrum, PkCone};
use conekit::scalar::rat;
use conekit::valuations::{
    ak_stable_range, beta_star, classify_tangent_pair, density_irreducible, density_ordinary, lct_irreducible,
    minimize_normalized_volume,
};
use conekit::Scalar;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit: f64) -> Result<(), String> {
    ensure(elapsed.as_secs_f64() < limit, || format!("took {:.2}s, limit {limit}s", elapsed.as_secs_f64()))
}

fn random_line(rng: &mut ChaCha8Rng, range: i64) -> ProjLine {
    loop {
        let c: [i64; 3] = std::array::from_fn(|_| rng.gen_range(-range..=range));
        if let Ok(l) = ProjLine::from_ints(c[0], c[1], c[2]) {
            return l;
        }
    }
}

/// Lines in general position with `sum (1 - beta) = 3`.
fn random_generic_cy(rng: &mut ChaCha8Rng) -> WeightedArrangement {
    loop {
        let n = rng.gen_range(4..=8);
        let lines: Vec<ProjLine> = (0..n).map(|_| random_line(rng, 6)).collect();
        let w: Vec<i64> = (0..n).map(|_| rng.gen_range(1..=12)).collect();
        let total: i64 = w.iter().sum();
        if w.iter().any(|&x| 3 * x >= total) {
            continue;
        }
        let betas = w.iter().map(|&x| rat(1, 1) - rat(3 * x, total)).collect();
        let Ok(arr) = WeightedArrangement::new(lines, betas) else { continue };
        if arr.multiple_points().iter().all(|p| p.multiplicity() == 2) {
            return arr;
        }
    }
}

/// `3/2 - (1/2) sum t_j^2`, `t_j = 1 - beta_j`.
fn generic_energy_oracle(arr: &WeightedArrangement) -> BigRational {
    let sq = arr.betas().iter().map(|b| (rat(1, 1) - b).pow(2)).fold(BigRational::zero(), |a, x| a + x);
    rat(3, 2) - sq / rat(2, 1)
}

fn criterion_1() -> Check {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for i in 0..200 {
        let arr = random_generic_cy(&mut rng);
        let e = energy(&arr).map_err(|e| e.to_string())?.value;
        let closed = energy_generic_closed_form(&arr).map_err(|e| e.to_string())?;
        let tian = tian_c2_generic(&arr).map_err(|e| e.to_string())?;
        let oracle = generic_energy_oracle(&arr);
        ensure(e == closed && closed == tian && tian == oracle, || {
            format!("sample {i}: energy {e}, closed form {closed}, Tian {tian}, oracle {oracle}")
        })?;
    }
    within(start.elapsed(), 10.0)?;
    Ok(format!("200 generic CY arrangements agree exactly ({:.2}s)", start.elapsed().as_secs_f64()))
}

fn criterion_2() -> Check {
    let start = Instant::now();
    let arr = complete_quadrilateral_half();
    let e = energy(&arr).map_err(|e| e.to_string())?.value;
    ensure(e.is_zero(), || format!("energy {e}"))?;
    let report = arr.regime_report();
    ensure(report.points.len() == 7, || format!("{} points", report.points.len()))?;
    ensure(report.points.iter().all(|p| p.class == PointClass::Stable), || "unstable point".into())?;
    let mut dens: Vec<BigRational> = report
        .points
        .iter()
        .map(|p| {
            let b: Vec<Scalar> = arr.incident_betas(&p.point).cloned().map(Scalar::Exact).collect();
            let cone = if b.len() == 2 {
                PkCone::product(b[0].clone(), b[1].clone())
            } else {
                PkCone::regular(b)
            };
            cone.unwrap().density().as_exact().unwrap().clone()
        })
        .collect();
    dens.sort();
    let expected = [vec![rat(1, 16); 4], vec![rat(1, 4); 3]].concat();
    ensure(dens == expected, || format!("densities {dens:?}"))?;
    within(start.elapsed(), 1.0)?;
    Ok("energy 0, seven stable points, densities 1/16 x4 and 1/4 x3".into())
}

/// Lines with small coefficients meet in many triple points; weights close
/// to 1 keep every point stable.
fn random_stable(rng: &mut ChaCha8Rng) -> WeightedArrangement {
    loop {
        let n = rng.gen_range(3..=7);
        let mut lines: Vec<ProjLine> = Vec::new();
        while lines.len() < n {
            let l = random_line(rng, 1);
            if !lines.contains(&l) {
                lines.push(l);
            }
        }
        let betas = (0..n).map(|_| rat(rng.gen_range(13..24), 24)).collect();
        let arr = WeightedArrangement::new(lines, betas).unwrap();
        if arr.regime_report().points.iter().all(|p| p.class == PointClass::Stable) {
            return arr;
        }
    }
}

/// Density from the incident weights: `gamma^2` for three or more lines,
/// `beta_1 beta_2` at a node.
fn density_oracle(b: &[BigRational]) -> BigRational {
    if b.len() == 2 {
        return &b[0] * &b[1];
    }
    let gamma = (rat(2, 1) + b.iter().map(|x| x - rat(1, 1)).fold(BigRational::zero(), |a, x| a + x)) / rat(2, 1);
    &gamma * &gamma
}

fn criterion_3() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut max_multiplicity = 0;
    for i in 0..200 {
        let arr = random_stable(&mut rng);
        let points = arr.multiple_points();
        max_multiplicity = max_multiplicity.max(points.iter().map(|p| p.multiplicity()).max().unwrap_or(0));
        let mut rhs = rat(3, 1);
        for (j, b) in arr.betas().iter().enumerate() {
            let on_line = points.iter().filter(|p| p.incident.contains(&j)).count() as i64;
            rhs += (b - rat(1, 1)) * rat(2 - on_line, 1);
        }
        for p in &points {
            let b: Vec<BigRational> = arr.incident_betas(p).cloned().collect();
            rhs += density_oracle(&b) - rat(1, 1);
        }
        let euler = weighted_euler(&arr).map_err(|e| e.to_string())?;
        let c2 = log_c2(&arr).map_err(|e| e.to_string())?;
        ensure(euler == rhs && c2 == rhs, || format!("sample {i}: weighted Euler {euler}, c2 {c2}, oracle {rhs}"))?;
    }
    Ok(format!("200 stable arrangements, multiplicities up to {max_multiplicity}, exact agreement"))
}

fn criterion_4() -> Check {
    let start = Instant::now();
    let mut worst_value: f64 = 0.0;
    let mut worst_ray: f64 = 0.0;
    for (d, e) in [(2u64, 3u64), (2, 5), (3, 4), (3, 5)] {
        let (df, ef) = (d as f64, e as f64);
        let lo = 1.0 - 1.0 / df - 1.0 / ef;
        let star = 1.0 - 1.0 / df + 1.0 / ef;
        for i in 1..=50 {
            let beta = lo + (1.0 - lo) * i as f64 / 51.0;
            let (value, ray) = if beta < star {
                ((ef + df + ef * df * (beta - 1.0)).powi(2) / (4.0 * ef * df), df / ef)
            } else {
                (df * beta + 1.0 - df, df * beta + 1.0 - df)
            };
            let m = minimize_normalized_volume(d, e, beta, 1e-12).map_err(|e| e.to_string())?;
            worst_value = worst_value.max((m.min_value - value).abs());
            worst_ray = worst_ray.max((m.minimizer_ray - ray).abs());
        }
    }
    ensure(worst_value <= 1e-9, || format!("value error {worst_value:e}"))?;
    ensure(worst_ray <= 1e-8, || format!("ray error {worst_ray:e}"))?;
    let cusp = minimize_normalized_volume(2, 3, 0.5, 1e-12).map_err(|e| e.to_string())?;
    ensure((cusp.min_value - 1.0 / 6.0).abs() <= 1e-9, || format!("cusp at 1/2: {}", cusp.min_value))?;
    let jumped = minimize_normalized_volume(2, 3, 0.9, 1e-12).map_err(|e| e.to_string())?;
    ensure((jumped.min_value - 0.8).abs() <= 1e-9, || format!("cusp at 9/10: {}", jumped.min_value))?;
    within(start.elapsed(), 5.0)?;
    Ok(format!("200 samples, max value error {worst_value:.1e}, max ray error {worst_ray:.1e}"))
}

fn q(n: i64, d: i64) -> Scalar {
    Scalar::ratio(n, d)
}

fn criterion_5() -> Check {
    let mut walls = 0;
    for (d, e) in [(2u64, 3u64), (2, 5), (2, 7), (3, 4), (3, 5), (4, 5), (5, 7)] {
        let star = Scalar::Exact(beta_star(d, e).unwrap());
        let below = Scalar::int((d * e) as i64) * {
            let g = (Scalar::ratio(1, e as i64) + Scalar::ratio(1, d as i64) + &star - Scalar::one()) / Scalar::int(2);
            &g * &g
        };
        let at = density_irreducible(d, e, &star).map_err(|e| e.to_string())?.density;
        let above = Scalar::int(d as i64) * &star + Scalar::one() - Scalar::int(d as i64);
        ensure(at == below && at == above, || format!("({d},{e}): {below} | {at} | {above}"))?;
        walls += 1;
    }
    // ordinary points on 2 beta_1 = 2 + sum (beta_j - 1)
    for n1 in 1..12i64 {
        for others in [vec![q(5, 6)], vec![q(7, 8), q(9, 10)], vec![q(11, 12), q(13, 14), q(15, 16)]] {
            let b1 = q(n1, 24);
            let partial: Scalar = others.iter().map(|b| b - Scalar::one()).sum();
            let last = &b1 - &partial;
            if !(last < Scalar::one()) || last < b1 {
                continue;
            }
            let mut betas = others.clone();
            betas.push(last);
            betas.push(b1.clone());
            let gamma = (Scalar::int(2) + betas.iter().map(|b| b - Scalar::one()).sum::<Scalar>()) / Scalar::int(2);
            let rest: Scalar = betas.iter().filter(|b| **b != b1).map(|b| Scalar::one() - b).sum();
            let gamma_star = Scalar::one() - rest;
            let nu = density_ordinary(&betas).map_err(|e| e.to_string())?.density;
            ensure(nu == &gamma * &gamma && nu == &b1 * &gamma_star, || format!("ordinary {betas:?}: {nu}"))?;
            walls += 1;
        }
    }
    // the three tangent-pair walls
    let interior = |b1: &Scalar, b2: &Scalar| {
        let t = Scalar::int(2) * b1 + Scalar::int(2) * b2 - Scalar::one();
        &t * &t / Scalar::int(8)
    };
    for n in 1..20i64 {
        let b1 = q(n, 40);
        let b2 = &b1 + q(1, 2);
        for (x, y, jumped) in [
            (b1.clone(), b2.clone(), (Scalar::int(2) * &b2 - Scalar::one()) * &b1),
            (b2.clone(), b1.clone(), (Scalar::int(2) * &b2 - Scalar::one()) * &b1),
        ] {
            let nu = classify_tangent_pair(&x, &y).map_err(|e| e.to_string())?.density;
            ensure(nu == interior(&x, &y) && nu == jumped, || format!("tangent pair ({x}, {y}): {nu}"))?;
            walls += 1;
        }
        let c1 = q(20 + n, 40);
        let c2 = q(3, 2) - &c1;
        if c2 < Scalar::one() {
            let nu = classify_tangent_pair(&c1, &c2).map_err(|e| e.to_string())?.density;
            ensure(nu == interior(&c1, &c2) && nu == &c1 + &c2 - Scalar::one(), || format!("merge ({c1}, {c2}): {nu}"))?;
            walls += 1;
        }
    }
    Ok(format!("{walls} wall points, exact equality on both sides"))
}

fn criterion_6() -> Check {
    let (lo, hi) = ak_stable_range(2).map_err(|e| e.to_string())?;
    ensure(lo == rat(1, 6) && hi == rat(5, 6), || format!("range ({lo}, {hi})"))?;
    ensure(lo == rat(1, 1) - lct_irreducible(2, 3).unwrap(), || "low end is not 1 - lct".into())?;
    ensure(hi == beta_star(2, 3).unwrap(), || "high end is not beta*".into())?;
    Ok("A_2 range (1/6, 5/6) = (1 - lct, beta*)".into())
}

fn criterion_7() -> Check {
    let start = Instant::now();
    let cfg = PointConfig::real(&[0.0, 1.0, 2.0], vec![q(1, 2), q(1, 3), q(1, 6)]).map_err(|e| e.to_string())?;
    let a = area(&cfg, 1e-9).map_err(|e| e.to_string())?.value;
    let poly = sc_polygon(&cfg, 1e-10).map_err(|e| e.to_string())?;
    let rel = (a - 2.0 * poly.shoelace_area).abs() / a;
    ensure(rel < 1e-5, || format!("area {a} vs twice shoelace {}", 2.0 * poly.shoelace_area))?;
    // side between F(a_i) and F(a_j) is opposite the remaining vertex
    let s01 = period_between(&cfg, 0, 1, 1e-10).map_err(|e| e.to_string())?.value.norm();
    let s12 = period_between(&cfg, 1, 2, 1e-10).map_err(|e| e.to_string())?.value.norm();
    let s20 = (poly.vertices[0] - poly.vertices[2]).norm();
    let sin = |b: f64| (std::f64::consts::PI * b).sin();
    let ratios = [s01 / sin(1.0 / 6.0), s12 / sin(0.5), s20 / sin(1.0 / 3.0)];
    let spread = ratios.iter().fold(0.0f64, |m, r| m.max((r / ratios[0] - 1.0).abs()));
    ensure(spread < 1e-6, || format!("law of sines ratios {ratios:?}"))?;
    let mut scaling = 0.0f64;
    for lambda in [2.0, 1.0 / 3.0] {
        let scaled = area(&cfg.scaled(Complex64::new(lambda, 0.0)).unwrap(), 1e-9).map_err(|e| e.to_string())?.value;
        scaling = scaling.max((scaled / a - lambda.powi(-2)).abs() / lambda.powi(-2));
    }
    ensure(scaling < 1e-6, || format!("scaling error {scaling:e}"))?;
    within(start.elapsed(), 30.0)?;
    Ok(format!(
        "area/polygon {rel:.1e}, law of sines {spread:.1e}, scaling {scaling:.1e} ({:.2}s)",
        start.elapsed().as_secs_f64()
    ))
}

/// Terms `c rho^a (log rho)^b cos(k theta)`.
#[derive(Clone, Debug, PartialEq)]
struct Term {
    c: BigRational,
    a: BigRational,
    b: u32,
}

/// Exact `d/d rho` of a sum of terms.
fn d_rho(terms: &[Term]) -> Vec<Term> {
    let mut out = Vec::new();
    for t in terms {
        let a1 = &t.a - rat(1, 1);
        if !t.a.is_zero() {
            out.push(Term { c: &t.c * &t.a, a: a1.clone(), b: t.b });
        }
        if t.b > 0 {
            out.push(Term { c: &t.c * rat(t.b as i64, 1), a: a1, b: t.b - 1 });
        }
    }
    out
}

fn shift(terms: &[Term], by: i64, scale: &BigRational) -> Vec<Term> {
    terms.iter().map(|t| Term { c: &t.c * scale, a: &t.a + rat(by, 1), b: t.b }).collect()
}

/// Collects like terms and drops zeros.
fn normalize(mut terms: Vec<Term>) -> Vec<Term> {
    terms.sort_by(|x, y| x.a.cmp(&y.a).then(x.b.cmp(&y.b)));
    let mut out: Vec<Term> = Vec::new();
    for t in terms {
        match out.last_mut() {
            Some(last) if last.a == t.a && last.b == t.b => last.c += t.c,
            _ => out.push(t),
        }
    }
    out.retain(|t| !t.c.is_zero());
    out
}

/// `Delta u` for `u = (sum of terms) cos(k theta)` on `C_beta`.
fn cone_laplacian(terms: &[Term], k: u64, beta: &BigRational) -> Vec<Term> {
    let first = d_rho(terms);
    let second = d_rho(&first);
    let mut all = second;
    all.extend(shift(&first, -1, &rat(1, 1)));
    let angular = -(rat(k as i64, 1) / beta).pow(2);
    all.extend(shift(terms, -2, &angular));
    normalize(all)
}

fn criterion_8() -> Check {
    for (p, qd) in [(1i64, 1i64), (3, 1), (5, 2), (7, 3), (13, 5)] {
        let lambda = Scalar::ratio(p * p - qd * qd, qd * qd);
        let pair = indicial_roots(&lambda).map_err(|e| e.to_string())?;
        ensure(&pair.delta_plus + &pair.delta_minus == Scalar::int(-2), || format!("sum at {lambda}"))?;
        ensure(&pair.delta_plus * &pair.delta_minus == -lambda.clone(), || format!("product at {lambda}"))?;
        ensure(pair.delta_plus.is_exact(), || format!("inexact roots at {lambda}"))?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let (mut resonant, mut checked, mut i) = (0, 0, 0);
    while checked < 100 {
        i += 1;
        let bq = rng.gen_range(1..=6i64);
        let beta = rat(rng.gen_range(1..=bq), bq);
        let k = rng.gen_range(0..=4u64);
        let s = if i % 4 == 0 && k > 0 {
            rat(k as i64, 1) / &beta - rat(2, 1)
        } else {
            rat(rng.gen_range(-11..=40), rng.gen_range(1..=6))
        };
        if s <= rat(-2, 1) {
            continue;
        }
        let expect_resonant = &s + rat(2, 1) == rat(k as i64, 1) / &beta;
        let sol = mode_solution_2d(&ModeProblem { beta: Scalar::Exact(beta.clone()), k, s: Scalar::Exact(s.clone()) })
            .map_err(|e| e.to_string())?;
        ensure(sol.resonant == expect_resonant, || format!("resonance flag at beta {beta}, k {k}, s {s}"))?;
        resonant += sol.resonant as usize;
        let u = vec![Term {
            c: sol.coefficient.as_exact().unwrap().clone(),
            a: sol.exponent.as_exact().unwrap().clone(),
            b: sol.resonant as u32,
        }];
        let lap = cone_laplacian(&u, k, &beta);
        let f = vec![Term { c: rat(1, 1), a: s.clone(), b: 0 }];
        ensure(lap == f, || format!("Delta u = {lap:?} at beta {beta}, k {k}, s {s}"))?;
        checked += 1;
    }
    let mut worst: f64 = 0.0;
    for lambda in [0.0, 3.0, 8.0, 2.5] {
        let pair = indicial_roots(&Scalar::Float(lambda)).unwrap();
        for delta in [pair.delta_plus.to_f64(), pair.delta_minus.to_f64()] {
            let exact = |r: f64| r.powf(delta);
            let p = radial_solve(lambda, 0.5, 2.0, exact(0.5), exact(2.0), |_| 0.0, 2000).map_err(|e| e.to_string())?;
            for (r, u) in p.r.iter().zip(&p.u) {
                worst = worst.max((u - exact(*r)).abs() / exact(*r));
            }
        }
    }
    ensure(worst < 1e-8, || format!("radial reproduction error {worst:e}"))?;
    Ok(format!("indicial symmetry exact, 100 modes ({resonant} resonant) exact, radial error {worst:.1e}"))
}

fn criterion_9() -> Check {
    let regular = PkCone::regular(vec![q(1, 2), q(1, 2), q(1, 2)]).map_err(|e| e.to_string())?;
    ensure(regular.gamma() == Some(&q(1, 4)), || "gamma of (1/2,1/2,1/2) is not 1/4".into())?;
    let degrees = holomorphic_spectrum(&regular, &Scalar::int(12)).map_err(|e| e.to_string())?;
    let want: Vec<Scalar> = [0, 4, 8, 12].iter().map(|&v| Scalar::int(v)).collect();
    ensure(degrees == want, || format!("regular spectrum {degrees:?}"))?;
    let product = PkCone::product(q(1, 2), q(1, 3)).map_err(|e| e.to_string())?;
    let degrees = holomorphic_spectrum(&product, &Scalar::int(6)).map_err(|e| e.to_string())?;
    let want: Vec<Scalar> = [0, 2, 3, 4, 5, 6, 6].iter().map(|&v| Scalar::int(v)).collect();
    ensure(degrees.len() >= 7 && degrees[..7] == want[..], || format!("product spectrum {degrees:?}"))?;
    let decay = decay_rate_mu(&PkCone::product(q(9, 10), q(4, 5)).unwrap()).map_err(|e| e.to_string())?;
    ensure(decay.mu_max == q(2, 9), || format!("mu_max {}", decay.mu_max))?;
    Ok("spectra [0,4,8,12] and [0,2,3,4,5,6,6], mu_max 2/9 exact".into())
}

fn run_cli(args: &[&str], threads: &str, dir: &std::path::Path) -> Result<(Vec<u8>, i32), String> {
    let out = Command::new(env!("CARGO_BIN_EXE_conekit"))
        .args(args)
        .current_dir(dir)
        .env("CONEKIT_THREADS", threads)
        .output()
        .map_err(|e| e.to_string())?;
    Ok((out.stdout, out.status.code().unwrap_or(-1)))
}

fn criterion_10() -> Check {
    let dir = std::env::temp_dir().join(format!("conekit-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
    std::fs::write(dir.join("cq.json"), complete_quadrilateral_half().to_json()).map_err(|e| e.to_string())?;
    std::fs::write(
        dir.join("tri.json"),
        r#"{"points":[["0","0"],["1","0"],["2","0"]],"betas":["1/2","1/3","1/6"]}"#,
    )
    .map_err(|e| e.to_string())?;
    std::fs::write(
        dir.join("roots.json"),
        r#"{"points":[[1,0],[-0.5,0.8660254037844386],[-0.5,-0.8660254037844386]],"betas":["1/3","1/3","1/3"]}"#,
    )
    .map_err(|e| e.to_string())?;
    let runs: Vec<Vec<&str>> = vec![
        vec!["analyze", "--input", "cq.json"],
        vec!["analyze", "--input", "cq.json", "--format", "csv"],
        vec!["valuation", "--kind", "irreducible", "--d", "2", "--e", "3", "--beta", "1/2"],
        vec!["valuation", "--kind", "irreducible", "--d", "3", "--e", "5", "--beta", "1/2", "--sweep", "20"],
        vec!["cp1", "--input", "tri.json", "--op", "area", "--tol", "1e-9"],
        vec!["cp1", "--input", "roots.json", "--op", "area", "--tol", "1e-8"],
        vec!["cp1", "--input", "tri.json", "--op", "polygon"],
        vec!["cp1", "--input", "tri.json", "--op", "sweep", "--index", "2", "--start", "1.5", "--end", "4", "--steps", "3", "--format", "csv"],
        vec!["cone", "--op", "scaling", "--operator", "cone2d", "--beta", "2/5", "--function", "random", "--seed", "7"],
    ];
    for args in &runs {
        let reference = run_cli(args, "1", &dir)?;
        ensure(reference.1 == 0, || format!("{args:?} exited with {}", reference.1))?;
        for threads in ["1", "4", "4"] {
            let again = run_cli(args, threads, &dir)?;
            ensure(again == reference, || format!("{args:?} differs under CONEKIT_THREADS={threads}"))?;
        }
    }
    let _ = std::fs::remove_dir_all(&dir);
    Ok(format!("{} commands byte-identical under 1 and 4 threads", runs.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Check); 10] = [
        ("1 generic CY identity", criterion_1),
        ("2 complete quadrilateral", criterion_2),
        ("3 motivic identity", criterion_3),
        ("4 valuation closed forms", criterion_4),
        ("5 wall continuity", criterion_5),
        ("6 A_k range", criterion_6),
        ("7 CP1 quadrature vs polygon", criterion_7),
        ("8 cone lab", criterion_8),
        ("9 spectrum anchors", criterion_9),
        ("10 determinism", criterion_10),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let result = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        match result {
            Ok(detail) => println!("criterion {name}: PASS ({detail})"),
            Err(detail) => {
                failed += 1;
                println!("criterion {name}: FAIL ({detail})");
            }
        }
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
    println!("all acceptance criteria passed");
}
