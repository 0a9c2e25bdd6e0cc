//! Three operations for the static demo page. Each takes plain strings and
//! numbers and returns a JSON document.

use ibuild::building::Group;
use ibuild::chabauty::{conjugate_trace, parameter_grid, so2_aimed, ConjugatingSequence};
use ibuild::coxeter::{CoxeterSystem, Residue, TypeSet};
use ibuild::dynamics::{classify_powers, limit_boundary, DynamicsError};
use ibuild::padic::INF;
use ibuild::tolerances::LIMIT_SLACK;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

fn ints<T: std::str::FromStr>(s: &str, what: &str) -> Result<Vec<T>, String> {
    s.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| t.parse().map_err(|_| format!("bad {what} entry `{t}`")))
        .collect()
}

/// Letters are 1-based generator indices.
fn word(sys: &CoxeterSystem, s: &str) -> Result<Vec<u8>, String> {
    let w: Vec<usize> = ints(s, "word")?;
    w.iter()
        .map(|&i| if (1..=sys.rank()).contains(&i) { Ok((i - 1) as u8) } else { Err(format!("no generator s{i}")) })
        .collect()
}

fn gate(r: i64) -> Value {
    if r == INF {
        json!("inf")
    } else {
        json!(r)
    }
}

pub fn coxeter_projection_json(ty: &str, residue_type: &str, residue_word: &str, chamber_word: &str) -> Result<Value, String> {
    let sys = CoxeterSystem::parse(ty).map_err(|e| e.to_string())?;
    let idx: Vec<usize> = ints(residue_type, "type")?;
    if idx.iter().any(|&i| i == 0 || i > sys.rank()) {
        return Err("residue type uses 1-based generator indices".into());
    }
    let rty = TypeSet::from_indices(&idx.iter().map(|i| i - 1).collect::<Vec<_>>());
    let rep = sys.element(&word(&sys, residue_word)?);
    let c = sys.element(&word(&sys, chamber_word)?);
    let r: Residue = sys.residue(rty, &rep);
    let members = sys.residue_members(&r);
    if members.len() > 500 {
        return Err("residue too large to list".into());
    }
    let p = sys.project_chamber(&r, &c);
    let dp = sys.distance(&c, &p);
    let rows: Vec<Value> = members
        .iter()
        .map(|x| {
            let d = sys.distance(&c, x);
            json!({ "chamber": x.to_string(), "distance": d, "via_projection": dp + sys.distance(&p, x) })
        })
        .collect();
    let gate_ok = rows.iter().all(|r| r["distance"] == r["via_projection"]);
    Ok(json!({
        "system": sys.name(),
        "chamber": c.to_string(),
        "projection": p.to_string(),
        "distance_to_projection": dp,
        "gate_property": gate_ok,
        "members": rows,
    }))
}

pub fn dynamics_trace_json(p: u32, exps: &str, seed: u64, max_n: usize) -> Result<Value, String> {
    let e: Vec<i64> = ints(exps, "exponent")?;
    let g = Group::new(p, e.len(), 32).map_err(|x| x.to_string())?;
    let cert = classify_powers(&g, &e)
        .map_err(|x| x.to_string())?
        .hyperbolic()
        .ok_or("gamma is elliptic: all exponents vanish")?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let xi = g.boundary_simplex(&g.random_element(&mut rng, -2, 2), TypeSet::EMPTY).map_err(|x| x.to_string())?;
    let run = match limit_boundary(&g, &cert, &xi, max_n.min(128), 1) {
        Ok(r) => r,
        Err(DynamicsError::HypothesisNotSatisfied(r)) => *r,
        Err(x) => return Err(x.to_string()),
    };
    let steps: Vec<Value> = run
        .trace
        .iter()
        .map(|s| json!({ "n": s.n, "gate": gate(s.gate_r), "to_limit": s.to_limit.map(gate) }))
        .collect();
    Ok(json!({
        "type": cert.ty.to_string(),
        "length": cert.length,
        "hypothesis": run.hypothesis,
        "converged": run.consistent(32),
        "n_first": run.n_first,
        "agreement": run.agreement.map(gate),
        "steps": steps,
    }))
}

pub fn so2_sweep_json(count: usize, max_n: usize) -> Result<Value, String> {
    let g = Group::new(5, 2, 32).map_err(|x| x.to_string())?;
    let seq = ConjugatingSequence::diagonal_powers(&g, &[-1, 1], max_n.clamp(8, 40)).map_err(|x| x.to_string())?;
    let mut rows = Vec::new();
    for t in parameter_grid(&g, count.min(12)) {
        let trace = conjugate_trace(&g, &seq, |n| so2_aimed(&g, &seq, &t, n, true)).map_err(|x| x.to_string())?;
        let recovered = trace.limit().map(|m| m.get(0, 1).clone());
        let agreement = recovered.as_ref().map(|r| gate((r - &t).vmin()));
        rows.push(json!({
            "t": t.to_string(),
            "limit_entry": recovered.map(|r| r.to_string()),
            "agreement": agreement,
            "steps": trace.steps.iter().map(|&s| gate(s)).collect::<Vec<_>>(),
        }));
    }
    Ok(json!({ "sequence": seq.descriptor(), "floor": 32 - LIMIT_SLACK, "rows": rows }))
}

fn export(v: Result<Value, String>) -> Result<String, JsError> {
    v.map(|x| x.to_string()).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn coxeter_projection(ty: &str, residue_type: &str, residue_word: &str, chamber_word: &str) -> Result<String, JsError> {
    export(coxeter_projection_json(ty, residue_type, residue_word, chamber_word))
}

#[wasm_bindgen]
pub fn dynamics_trace(p: u32, exps: &str, seed: u64, max_n: usize) -> Result<String, JsError> {
    export(dynamics_trace_json(p, exps, seed, max_n))
}

#[wasm_bindgen]
pub fn so2_sweep(count: usize, max_n: usize) -> Result<String, JsError> {
    export(so2_sweep_json(count, max_n))
}
