//! Acceptance runner: one PASS/FAIL line per criterion, exit status 1 if
//! any fails.

mod common;

use std::time::Instant;

use ibuild::building::{Direction, Group};
use ibuild::chabauty::*;
use ibuild::coxeter::{CoxeterSystem, TypeSet};
use ibuild::dynamics::*;
use ibuild::matrix::Mat;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const N: u32 = 32;
const CAP: i64 = N as i64;

type Check = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e<E: std::fmt::Display>(x: E) -> String {
    x.to_string()
}

fn coxeter_oracles() -> Check {
    let mut checks = 0;
    for name in ["A2", "A3", "B2", "G2"] {
        checks += common::coxeter_suite(name)?;
    }
    Ok(format!("{checks} exact comparisons over A2, A3, B2, G2"))
}

fn decompositions() -> Check {
    let mut worst = i64::MAX;
    for (p, n, seed) in [(3, 2, 1u64), (5, 3, 2)] {
        let g = Group::new(p, n, N).map_err(e)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..1000 {
            let x = g.random_element(&mut rng, -3, 3);
            let rs = [
                x.relative_agreement(&g.cartan_decompose(&x).map_err(e)?.recompose()),
                x.relative_agreement(&g.iwasawa_decompose(&x, Direction::Plus).map_err(e)?.recompose()),
                x.relative_agreement(&g.iwasawa_decompose(&x, Direction::Minus).map_err(e)?.recompose()),
                x.relative_agreement(&g.iwahori_coset(&x).map_err(e)?.recompose()),
            ];
            worst = worst.min(*rs.iter().min().unwrap());
        }
    }
    ensure(worst >= CAP - 2, || format!("residual {worst} < N - 2"))?;
    Ok(format!("2000 elements, 4 decompositions each, min residual {worst}"))
}

fn regular_round_trip() -> Check {
    let mut count = 0;
    for name in ["A~2", "A~3", "C~2"] {
        let s = CoxeterSystem::parse(name).map_err(e)?;
        for ty in common::proper_types(s.rank()) {
            let v = s.construct_regular_translation(ty).map_err(e)?;
            let got = s.translation_type(&v).map_err(e)?;
            ensure(got == ty, || format!("{name}: {ty} came back as {got}"))?;
            count += 1;
        }
    }
    Ok(format!("{count} proper types"))
}

fn dynamics() -> Check {
    let cases: [(usize, &[i64]); 3] = [(2, &[1, -1]), (3, &[1, 0, -1]), (3, &[1, 1, -2])];
    let mut lines = Vec::new();
    for (k, (n, exps)) in cases.iter().enumerate() {
        let g = Group::new(3, *n, N).map_err(e)?;
        let c = classify_powers(&g, exps).map_err(e)?.hyperbolic().ok_or("elliptic")?;
        let mut rng = ChaCha8Rng::seed_from_u64(40 + k as u64);
        let (mut passed, mut tried, mut worst) = (0, 0, i64::MAX);
        while passed < 50 {
            tried += 1;
            ensure(tried <= 500, || format!("{exps:?}: too few chambers satisfy the hypothesis"))?;
            let xi = g.boundary_simplex(&g.random_element(&mut rng, -2, 2), TypeSet::EMPTY).map_err(e)?;
            if !assumption_check(&g, &c, &xi).map_err(e)?.holds {
                continue;
            }
            let run = limit_boundary(&g, &c, &xi, 64, CAP / 2).map_err(e)?;
            ensure(run.consistent(CAP), || format!("{exps:?}: run {passed} inconsistent: {:?}", run.agreement))?;
            worst = worst.min(run.agreement.unwrap());
            passed += 1;
        }
        lines.push(format!("diag(3^{exps:?}) 50/{tried} min agreement {worst}"));
    }
    // eigenvalues 3 and 12 share a valuation but not an eigenline
    let g = Group::new(3, 3, N).map_err(e)?;
    let f = g.field();
    let t = [f.int(3), f.int(12), f.pow_p(-2) * f.int(4).inv().map_err(e)?];
    let c = classify_diagonal(&g, &t).map_err(e)?.hyperbolic().ok_or("elliptic")?;
    let xi = g.boundary_simplex(&Mat::from_ints(f, &[&[0, 1, 0], &[0, 1, 1], &[1, 0, 0]]), TypeSet::EMPTY).map_err(e)?;
    match limit_boundary(&g, &c, &xi, 64, CAP / 2) {
        Err(DynamicsError::HypothesisNotSatisfied(run)) => {
            ensure(run.verdict == Verdict::NoConvergence, || "crafted chamber converged".into())?;
            lines.push(format!("crafted: no convergence after {} steps", run.trace.len()));
        }
        other => return Err(format!("crafted chamber: expected a hypothesis failure, got {other:?}")),
    }
    Ok(lines.join("; "))
}

fn transit() -> Check {
    let mut out = Vec::new();
    for (n, base, r) in [(2usize, vec![1i64, -1], 6i64), (3, vec![1, 1, -2], 4)] {
        let g = Group::new(3, n, N).map_err(e)?;
        let f = g.field();
        let certs = (1..=8)
            .map(|k| {
                let ex: Vec<i64> = base.iter().map(|x| x * k).collect();
                classify_powers(&g, &ex).map_err(e)?.hyperbolic().ok_or_else(|| "elliptic".to_string())
            })
            .collect::<Result<Vec<_>, _>>()?;
        let first = &certs[0];
        let v = Neighborhood { base: g.identity(), center: first.sigma_minus.clone(), r };
        let mut rng = ChaCha8Rng::seed_from_u64(50 + n as u64);
        let mut targets = Vec::new();
        for _ in 0..20 {
            let ps: Vec<_> = (0..g.radical_dim(first.sigma_plus.ty())).map(|_| f.random(&mut rng, -4, 3)).collect();
            let u = g.radical_element(&first.sigma_plus, &ps).map_err(e)?;
            targets.push(g.act(&u, &first.sigma_minus).map_err(e)?);
        }
        let report = verify_transit(&g, &certs, &v, &targets).map_err(e)?;
        ensure(report.all_absorbed(), || format!("SL{n}: {report:?}"))?;
        let worst = report.targets.iter().filter_map(|t| t.threshold).max().unwrap_or(0);
        out.push(format!("SL{n} type {} 20/20 absorbed, max threshold {worst}", first.ty));
    }
    Ok(out.join("; "))
}

fn chabauty() -> Check {
    let g = Group::new(5, 2, N).map_err(e)?;
    let f = g.field();
    let seq = ConjugatingSequence::diagonal_powers(&g, &[-1, 1], 24).map_err(e)?;
    let cert = &seq.certs[0];
    let mut rng = ChaCha8Rng::seed_from_u64(60);
    let set = chabauty_limit(&g, &SubgroupSpec::Involution, &seq, 12, &mut rng).map_err(e)?;
    let recovered: Vec<_> =
        set.generators.iter().filter(|x| x.param_agreement.is_some_and(|a| a >= CAP - 4)).filter_map(|x| x.param.clone()).collect();
    let mut distinct: Vec<String> = recovered.iter().map(|t| t.to_string()).collect();
    distinct.sort();
    distinct.dedup();
    ensure(distinct.len() >= 8, || format!("only {} parameters recovered", distinct.len()))?;
    let gens: Vec<Mat> = set.generators.iter().map(|x| x.matrix.clone()).collect();
    let decomps = decompose_limit(&g, &gens, cert).map_err(e)?;
    let residual = decomps.iter().map(|d| d.residual).min().unwrap();
    ensure(residual >= CAP - 4, || format!("factorization residual {residual}"))?;
    ensure(normality_holds(&g, &gens, &decomps, cert).map_err(e)?, || "normality fails".into())?;
    ensure(semidirect_holds(&g, &decomps, cert).map_err(e)?, || "U and M meet".into())?;
    let us: Vec<Mat> = decomps.iter().filter(|d| !d.u_trivial).map(|d| d.u.clone()).collect();
    let mut targets = Vec::new();
    for a in &recovered {
        for b in &recovered {
            let u = Mat::from_rows(f, vec![vec![f.one(), a + b], vec![f.zero(), f.one()]]);
            targets.push(g.act(&u, &cert.sigma_minus).map_err(e)?);
        }
    }
    let hits = transitive_on(&g, &us, cert, &targets).map_err(e)?;
    ensure(hits.iter().all(|&h| h), || "U-part misses a grid target".into())?;
    Ok(format!(
        "{} parameters, min residual {residual}, transitive on {} targets",
        distinct.len(),
        targets.len()
    ))
}

fn levi() -> Check {
    let g = Group::new(3, 3, N).map_err(e)?;
    let mut out = Vec::new();
    for (k, exps) in [[1i64, 0, -1], [1, 1, -2]].iter().enumerate() {
        let c = classify_powers(&g, exps).map_err(e)?.hyperbolic().ok_or("elliptic")?;
        let rep = c.sigma_plus.rep().clone();
        let rep_inv = rep.inverse().map_err(e)?;
        let mut rng = ChaCha8Rng::seed_from_u64(70 + k as u64);
        let mut inside = 0;
        for i in 0..100 {
            let x = if rng.gen_bool(0.5) {
                &(&rep * &g.random_parabolic(&mut rng, c.sigma_plus.ty(), -2, 2)) * &rep_inv
            } else {
                g.random_element(&mut rng, -2, 2)
            };
            let member = g.parabolic_membership(&x, &c.sigma_plus).map_err(e)?;
            let bounded = conjugates_bounded(&c.gamma, &x, 20).map_err(e)?;
            ensure(member == bounded, || format!("{exps:?} element {i}: member {member}, bounded {bounded}"))?;
            inside += member as usize;
        }
        out.push(format!("type {}: 100 agree ({inside} in the parabolic)", c.ty));
    }
    Ok(out.join("; "))
}

fn main() {
    let criteria: [(&str, fn() -> Check); 7] = [
        ("1 coxeter oracles", coxeter_oracles),
        ("2 decomposition round trips", decompositions),
        ("3 strongly regular round trip", regular_round_trip),
        ("4 boundary dynamics", dynamics),
        ("5 transit", transit),
        ("6 chabauty limit", chabauty),
        ("7 levi consistency", levi),
    ];
    let mut failed = 0;
    for (name, f) in criteria {
        let t = Instant::now();
        let res = f();
        let secs = t.elapsed().as_secs_f64();
        match res {
            Ok(msg) => println!("PASS {name} ({secs:.2}s): {msg}"),
            Err(msg) => {
                failed += 1;
                println!("FAIL {name} ({secs:.2}s): {msg}");
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
