//! One function per experiment kind. Each returns plain results plus the
//! list of hard invariants it checked; the report layer does the rest.

use ibuild::building::{BuildingError, Direction, Group, IdealSimplex};
use ibuild::chabauty::{
    check_op, check_transp, chabauty_limit, decompose_limit, normality_holds, semidirect_holds, transitive_on,
    ChabautyError, ConjugatingSequence, SolverChoice, SubgroupSpec,
};
use ibuild::coxeter::{CoxeterError, CoxeterSystem, TypeSet, WeylElement};
use ibuild::dynamics::{
    classify, classify_powers, limit_boundary, serialize_gate, verify_transit, DynamicsError, HyperbolicCertificate,
    LimitRun, Neighborhood,
};
use ibuild::matrix::Mat;
use ibuild::tolerances::{LIMIT_SLACK, RECOMPOSE_SLACK};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::config::{subgroup_spec, ExperimentConfig, GroupDesc, Kind};

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Coxeter(#[from] CoxeterError),
    #[error(transparent)]
    Building(#[from] BuildingError),
    #[error(transparent)]
    Dynamics(#[from] DynamicsError),
    #[error(transparent)]
    Chabauty(#[from] ChabautyError),
}

impl RunError {
    pub fn is_precision_exhausted(&self) -> bool {
        match self {
            RunError::Coxeter(_) => false,
            RunError::Building(e) => e.is_precision_exhausted(),
            RunError::Dynamics(e) => e.is_precision_exhausted(),
            RunError::Chabauty(e) => e.is_precision_exhausted(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Invariant {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

fn invariant(name: &str, passed: bool, detail: impl Into<String>) -> Invariant {
    Invariant { name: name.into(), passed, detail: detail.into() }
}

#[derive(Debug, Clone, Default)]
pub struct Outcome {
    pub results: Value,
    pub invariants: Vec<Invariant>,
    pub summary: Vec<String>,
    /// One JSON object per line of `trace.jsonl`.
    pub trace: Vec<Value>,
    /// Some item ran out of digits; reported with its own exit code.
    pub precision_exhausted: bool,
}

pub fn run(cfg: &ExperimentConfig) -> Result<Outcome, RunError> {
    match cfg.kind {
        Kind::CoxeterOracle => coxeter_oracle(cfg),
        Kind::Decompositions => decompositions(cfg),
        Kind::Dynamics => dynamics(cfg),
        Kind::Transit => transit(cfg),
        Kind::Chabauty => chabauty(cfg),
    }
}

fn group(cfg: &ExperimentConfig) -> Result<Group, RunError> {
    match cfg.group {
        GroupDesc::Sl { n, p } => Ok(Group::new(p, n, cfg.precision)?),
        GroupDesc::Coxeter(_) => unreachable!("validated"),
    }
}

fn rng(seed: u64, stream: usize) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream as u64);
    r
}

#[derive(Debug, Default, Clone, Serialize)]
struct OracleCount {
    checked: usize,
    failed: usize,
}

impl OracleCount {
    fn record(&mut self, ok: bool) {
        self.checked += 1;
        self.failed += !ok as usize;
    }
}

/// Compares the reduction algorithms with scans over the enumerated group.
fn oracle_for(sys: &CoxeterSystem) -> Result<Value, RunError> {
    let elems = sys.enumerate()?;
    let rank = sys.rank();
    let types: Vec<TypeSet> = TypeSet::all(rank).collect();
    let mut double = OracleCount::default();
    let mut proj = OracleCount::default();
    let mut gate = OracleCount::default();
    let mut walls = OracleCount::default();
    let mut hull = OracleCount::default();
    let len = |w: &WeylElement| w.length();
    for &i in &types {
        let wi = sys.parabolic(i);
        for &j in &types {
            let wj = sys.parabolic(j);
            for w in &elems {
                let got = sys.min_double_coset(i, w, j)?;
                let best = wi
                    .iter()
                    .flat_map(|a| wj.iter().map(move |b| (a, b)))
                    .map(|(a, b)| sys.mul(&sys.mul(a, w), b))
                    .min_by_key(len)
                    .expect("parabolics are non-empty");
                double.record(got == best);
            }
        }
        for rep in &elems {
            let r = sys.residue(i, rep);
            let members = sys.residue_members(&r);
            for c in &elems {
                let p = sys.project_chamber(&r, c);
                let nearest = members.iter().min_by_key(|x| sys.distance(c, x)).expect("residue is non-empty");
                proj.record(&p == nearest);
                let dp = sys.distance(c, &p);
                gate.record(members.iter().all(|x| sys.distance(c, x) == dp + sys.distance(&p, x)));
            }
        }
    }
    for c in &elems {
        for d in &elems {
            let dist = sys.distance(c, d);
            walls.record(sys.separating_walls(c, d).len() == dist);
            let mut got = sys.convex_hull(c, d)?;
            let mut want: Vec<WeylElement> =
                elems.iter().filter(|x| sys.distance(c, x) + sys.distance(x, d) == dist).cloned().collect();
            got.sort_by(|a, b| a.word().cmp(b.word()));
            want.sort_by(|a, b| a.word().cmp(b.word()));
            hull.record(got == want);
        }
    }
    Ok(json!({
        "type": sys.name(),
        "elements": elems.len(),
        "min_double_coset": double,
        "project_chamber": proj,
        "gate_identity": gate,
        "separating_walls": walls,
        "convex_hull": hull,
    }))
}

fn coxeter_oracle(cfg: &ExperimentConfig) -> Result<Outcome, RunError> {
    let GroupDesc::Coxeter(name) = &cfg.group else { unreachable!("validated") };
    let mut names = vec![name.clone()];
    names.extend(cfg.coxeter.as_ref().expect("normalized").also.iter().cloned());
    let mut out = Outcome::default();
    let mut results = Vec::new();
    for name in names {
        let sys = CoxeterSystem::parse(&name)?;
        let r = oracle_for(&sys)?;
        let failed: u64 = ["min_double_coset", "project_chamber", "gate_identity", "separating_walls", "convex_hull"]
            .iter()
            .map(|k| r[k]["failed"].as_u64().unwrap_or(0))
            .sum();
        out.summary.push(format!("{}: {} elements, {} oracle mismatches", name, r["elements"], failed));
        out.invariants.push(invariant(&format!("{name} oracle agreement"), failed == 0, format!("{failed} mismatches")));
        results.push(r);
    }
    out.results = json!({ "systems": results });
    Ok(out)
}

#[derive(Debug, Clone, Serialize)]
struct Residuals {
    cartan: i64,
    iwasawa_plus: i64,
    iwasawa_minus: i64,
    iwahori: i64,
}

fn decompositions(cfg: &ExperimentConfig) -> Result<Outcome, RunError> {
    let g = group(cfg)?;
    let samples = cfg.decompositions.as_ref().expect("normalized").samples;
    let per: Vec<Result<Residuals, RunError>> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let x = g.random_element(&mut rng(cfg.seed, i), -3, 3);
            Ok(Residuals {
                cartan: x.relative_agreement(&g.cartan_decompose(&x)?.recompose()),
                iwasawa_plus: x.relative_agreement(&g.iwasawa_decompose(&x, Direction::Plus)?.recompose()),
                iwasawa_minus: x.relative_agreement(&g.iwasawa_decompose(&x, Direction::Minus)?.recompose()),
                iwahori: x.relative_agreement(&g.iwahori_coset(&x)?.recompose()),
            })
        })
        .collect();
    let per = per.into_iter().collect::<Result<Vec<_>, _>>()?;
    let floor = cfg.precision as i64 - RECOMPOSE_SLACK;
    let min = |f: fn(&Residuals) -> i64| per.iter().map(f).min().unwrap_or(ibuild::padic::INF);
    let mins = Residuals {
        cartan: min(|r| r.cartan),
        iwasawa_plus: min(|r| r.iwasawa_plus),
        iwasawa_minus: min(|r| r.iwasawa_minus),
        iwahori: min(|r| r.iwahori),
    };
    let mut out = Outcome::default();
    for (name, v) in [
        ("cartan", mins.cartan),
        ("iwasawa-plus", mins.iwasawa_plus),
        ("iwasawa-minus", mins.iwasawa_minus),
        ("iwahori", mins.iwahori),
    ] {
        out.invariants.push(invariant(&format!("{name} recomposes"), v >= floor, format!("min residual {v}, floor {floor}")));
        out.summary.push(format!("{name}: min residual valuation {v} over {samples} samples"));
    }
    out.results = json!({ "samples": samples, "floor": floor, "min_residual": mins });
    Ok(out)
}

#[derive(Debug, Clone, Serialize)]
struct DynamicsRecord {
    sample: usize,
    hypothesis: bool,
    hypothesis_witness: Option<String>,
    converged: bool,
    consistent: bool,
    limit: Option<String>,
    #[serde(rename = "N_first")]
    n_first: Option<usize>,
    #[serde(serialize_with = "serialize_opt")]
    agreement: Option<i64>,
    monotone: bool,
    steps: usize,
    error: Option<String>,
}

fn serialize_opt<S: serde::Serializer>(v: &Option<i64>, s: S) -> Result<S::Ok, S::Error> {
    match v {
        Some(r) => serialize_gate(r, s),
        None => s.serialize_none(),
    }
}

fn hex(s: &IdealSimplex) -> String {
    format!("{:016x}", s.fingerprint())
}

fn record_of(sample: usize, run: &LimitRun, cap: i64) -> DynamicsRecord {
    DynamicsRecord {
        sample,
        hypothesis: run.hypothesis,
        hypothesis_witness: run.witness.as_ref().map(hex),
        converged: run.verdict == ibuild::dynamics::Verdict::Converged,
        consistent: run.consistent(cap),
        limit: Some(hex(&run.iterate)),
        n_first: run.n_first,
        agreement: run.agreement,
        monotone: run.monotone,
        steps: run.trace.len(),
        error: None,
    }
}

fn dynamics(cfg: &ExperimentConfig) -> Result<Outcome, RunError> {
    let g = group(cfg)?;
    let params = cfg.dynamics.as_ref().expect("normalized");
    let cap = cfg.precision as i64;
    let cert = classify_powers(&g, &params.gamma)?.hyperbolic().expect("validated non-zero");
    let general = classify(&g, &cert.gamma)?.hyperbolic();
    let close = |a: &IdealSimplex, b: &IdealSimplex| g.gate(a, b).is_ok_and(|r| r >= cap - LIMIT_SLACK);
    let routes_agree = general
        .as_ref()
        .is_some_and(|c| c.ty == cert.ty && close(&c.sigma_plus, &cert.sigma_plus) && close(&c.sigma_minus, &cert.sigma_minus));
    let runs: Vec<(DynamicsRecord, Vec<Value>, bool)> = (0..params.samples)
        .into_par_iter()
        .map(|i| {
            let mut r = rng(cfg.seed, i);
            let xi = g.boundary_simplex(&g.random_element(&mut r, -2, 2), TypeSet::EMPTY);
            let res = xi.map_err(DynamicsError::from).and_then(|xi| limit_boundary(&g, &cert, &xi, params.max_n, 1));
            let run = match res {
                Ok(run) => run,
                Err(DynamicsError::HypothesisNotSatisfied(run)) => *run,
                Err(e) => {
                    let exhausted = e.is_precision_exhausted();
                    let rec = DynamicsRecord {
                        sample: i,
                        hypothesis: false,
                        hypothesis_witness: None,
                        converged: false,
                        consistent: false,
                        limit: None,
                        n_first: None,
                        agreement: None,
                        monotone: false,
                        steps: 0,
                        error: Some(e.to_string()),
                    };
                    return (rec, Vec::new(), exhausted);
                }
            };
            let trace = run
                .trace
                .iter()
                .map(|s| {
                    let mut v = serde_json::to_value(s).expect("trace step serializes");
                    v["sample"] = json!(i);
                    v
                })
                .collect();
            (record_of(i, &run, cap), trace, false)
        })
        .collect();
    let mut out = Outcome::default();
    let mut records = Vec::new();
    for (rec, trace, exhausted) in runs {
        out.trace.extend(trace);
        out.precision_exhausted |= exhausted;
        records.push(rec);
    }
    let holding: Vec<&DynamicsRecord> = records.iter().filter(|r| r.hypothesis).collect();
    let consistent = holding.iter().filter(|r| r.consistent).count();
    let errors = records.iter().filter(|r| r.error.is_some()).count();
    out.invariants.push(invariant("classification routes agree", routes_agree, format!("type {}", cert.ty)));
    out.invariants.push(invariant(
        "limits match retractions",
        consistent == holding.len(),
        format!("{consistent} of {} runs passing the hypothesis", holding.len()),
    ));
    out.invariants.push(invariant("runs complete", errors == 0, format!("{errors} errors")));
    out.summary.push(format!(
        "gamma = diag(p^{:?}), type {}, length {:.4}",
        params.gamma, cert.ty, cert.length
    ));
    out.summary.push(format!(
        "{} samples: {} pass the hypothesis, {} consistent, {} errors",
        records.len(),
        holding.len(),
        consistent,
        errors
    ));
    out.results = json!({
        "certificate": certificate_json(&cert),
        "routes_agree": routes_agree,
        "records": records,
    });
    Ok(out)
}

fn certificate_json(c: &HyperbolicCertificate) -> Value {
    json!({
        "type": c.ty,
        "translation": c.a,
        "denominator": c.den,
        "length": c.length,
        "sigma_plus": hex(&c.sigma_plus),
        "sigma_minus": hex(&c.sigma_minus),
    })
}

fn transit(cfg: &ExperimentConfig) -> Result<Outcome, RunError> {
    let g = group(cfg)?;
    let params = cfg.transit.as_ref().expect("normalized");
    let f = g.field();
    let certs = (1..=params.steps as i64)
        .map(|k| {
            let e: Vec<i64> = params.gamma.iter().map(|x| x * k).collect();
            Ok(classify_powers(&g, &e)?.hyperbolic().expect("validated non-zero"))
        })
        .collect::<Result<Vec<_>, RunError>>()?;
    let first = &certs[0];
    let v = Neighborhood { base: g.identity(), center: first.sigma_minus.clone(), r: params.radius };
    let targets = (0..params.targets)
        .map(|i| {
            let mut r = rng(cfg.seed, i);
            let ps: Vec<_> = (0..g.radical_dim(first.sigma_plus.ty())).map(|_| f.random(&mut r, -4, 3)).collect();
            let u = g.radical_element(&first.sigma_plus, &ps)?;
            Ok(g.act(&u, &first.sigma_minus)?)
        })
        .collect::<Result<Vec<_>, RunError>>()?;
    let report = verify_transit(&g, &certs, &v, &targets)?;
    let mut out = Outcome::default();
    let absorbed = report.targets.iter().filter(|t| t.threshold.is_some()).count();
    out.invariants.push(invariant(
        "targets absorbed",
        report.all_absorbed(),
        format!("{absorbed} of {} targets, {} route mismatches", report.targets.len(), report.route_mismatches),
    ));
    out.summary.push(format!("type {}, neighbourhood radius {}", first.ty, params.radius));
    for (i, t) in report.targets.iter().enumerate() {
        out.summary.push(format!("target {i}: threshold {:?}", t.threshold));
    }
    out.results = json!({ "certificate": certificate_json(first), "report": report });
    Ok(out)
}

fn unipotent(g: &Group, t: &ibuild::padic::Padic) -> Mat {
    let f = g.field();
    Mat::from_rows(f, vec![vec![f.one(), t.clone()], vec![f.zero(), f.one()]])
}

fn chabauty(cfg: &ExperimentConfig) -> Result<Outcome, RunError> {
    let g = group(cfg)?;
    let params = cfg.chabauty.as_ref().expect("normalized");
    let spec = subgroup_spec(&params.subgroup).expect("validated");
    let cap = cfg.precision as i64;
    let seq = ConjugatingSequence::diagonal_powers(&g, &params.exps, params.max_n)?;
    let cert = &seq.certs[0];
    let mut r = rng(cfg.seed, 0);
    let set = chabauty_limit(&g, &spec, &seq, params.budget, &mut r)?;
    let gens: Vec<Mat> = set.generators.iter().map(|e| e.matrix.clone()).collect();
    let mut out = Outcome::default();
    for (k, e) in set.generators.iter().enumerate() {
        for (n, s) in e.trace.steps.iter().enumerate() {
            out.trace.push(json!({ "generator": k, "n": n + 1, "step": s }));
        }
    }
    let decomps = match decompose_limit(&g, &gens, cert) {
        Ok(d) => d,
        Err(ChabautyError::HypothesisViolation { index }) => {
            out.invariants.push(invariant("limits fix the attracting simplex", false, format!("generator {index}")));
            out.results = json!({ "sequence": seq.descriptor(), "limit": set });
            return Ok(out);
        }
        Err(e) => return Err(e.into()),
    };
    let recovered: Vec<String> = set
        .generators
        .iter()
        .filter(|e| e.param_agreement.is_some_and(|a| a >= cap - LIMIT_SLACK))
        .filter_map(|e| e.param.as_ref().map(|t| t.to_string()))
        .collect();
    let mut distinct = recovered.clone();
    distinct.sort();
    distinct.dedup();
    let residual = decomps.iter().map(|d| d.residual).min().unwrap_or(ibuild::padic::INF);
    let normal = normality_holds(&g, &gens, &decomps, cert)?;
    let semidirect = semidirect_holds(&g, &decomps, cert)?;
    let aimed = matches!(spec, SubgroupSpec::Involution) && g.n() == 2;
    let grid: Vec<_> = set.generators.iter().filter_map(|e| e.param.clone()).collect::<Vec<_>>();
    let transitive = if aimed && g.radical_dim(cert.sigma_plus.ty()) == 1 {
        let us: Vec<Mat> = decomps.iter().filter(|d| !d.u_trivial).map(|d| d.u.clone()).collect();
        let mut targets = Vec::new();
        for a in &grid {
            for b in &grid {
                targets.push(g.act(&unipotent(&g, &(a + b)), &cert.sigma_minus)?);
            }
        }
        let hits = transitive_on(&g, &us, cert, &targets)?;
        Some((hits.iter().filter(|&&h| h).count(), hits.len()))
    } else {
        None
    };
    let op = check_op(&g, &spec, cert, &params.op_radii, params.op_per_radius, &mut r)?;
    let transp_targets: Vec<IdealSimplex> = grid
        .iter()
        .take(params.transp_targets)
        .map(|t| g.act(&unipotent(&g, t), &cert.sigma_minus))
        .collect::<Result<_, _>>()?;
    let stab = spec.stabilizer_samples(&g, seq.sigma_minus())?.len();
    let transp = check_transp(&g, &spec, &seq, &transp_targets, stab, SolverChoice::Canonical)?;

    if aimed {
        out.invariants.push(invariant(
            "unipotent parameters recovered",
            distinct.len() >= 8,
            format!("{} distinct parameters to N - {LIMIT_SLACK} digits", distinct.len()),
        ));
    }
    out.invariants.push(invariant("limit generators found", !set.inconclusive, format!("{} generators", gens.len())));
    out.invariants.push(invariant(
        "generators factor as u m",
        residual >= cap - LIMIT_SLACK,
        format!("min residual {residual}"),
    ));
    out.invariants.push(invariant("unipotent part is normalized", normal, ""));
    out.invariants.push(invariant("unipotent and Levi parts meet trivially", semidirect, ""));
    if let Some((hit, total)) = transitive {
        out.invariants.push(invariant("unipotent part is transitive on the grid", hit == total, format!("{hit} of {total}")));
    }
    out.summary.push(format!("H = {}, sequence {}", spec.name(), seq.descriptor()));
    out.summary.push(format!(
        "{} generators, {} divergent traces, {} recovered parameters: {}",
        gens.len(),
        set.divergent,
        distinct.len(),
        distinct.join(", ")
    ));
    out.summary.push(format!("OP: {:?} at radius {:?}", op.holds, op.radius));
    out.summary.push(format!(
        "TranP: {} of {} targets with a witness",
        transp.iter().filter(|v| v.outcome == ibuild::chabauty::TranspOutcome::Witness).count(),
        transp.len()
    ));
    out.results = json!({
        "sequence": seq.descriptor(),
        "certificate": certificate_json(cert),
        "limit": set,
        "recovered_parameters": distinct,
        "decompositions": decomps,
        "normality": normal,
        "semidirect": semidirect,
        "transitivity": transitive.map(|(h, t)| json!({ "hit": h, "targets": t })),
        "op": op,
        "transp": transp,
    });
    Ok(out)
}
