//! Limits of conjugated subgroups `a_n H a_n^-1` along a sequence of
//! regular torus elements, read off from convergent traces.
//!
//! With `a_n = diag(p^(n e_1), ..., p^(n e_k))` the attracting simplex of
//! the sequence is `sigma+` (see [`crate::dynamics`] for the sign
//! convention), limits lie in its stabilizer, and they split as
//! `u * m` with `u` in the unipotent radical of `sigma+` and `m` in the Levi
//! factor that also fixes `sigma-`.

use rand::Rng;
use serde::Serialize;
use thiserror::Error;

use crate::building::{BuildingError, Direction, Group, IdealSimplex};
use crate::dynamics::{classify_powers, DynamicsError, HyperbolicCertificate};
use crate::matrix::Mat;
use crate::padic::{Padic, PadicError, INF};
use crate::tolerances::{CAUCHY_TAIL, LIMIT_SLACK};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ChabautyError {
    #[error(transparent)]
    Building(#[from] BuildingError),
    #[error(transparent)]
    Dynamics(#[from] DynamicsError),
    #[error(transparent)]
    Padic(#[from] PadicError),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("limit generator {index} does not fix the attracting simplex")]
    HypothesisViolation { index: usize },
}

impl ChabautyError {
    pub fn is_precision_exhausted(&self) -> bool {
        match self {
            ChabautyError::Building(b) => b.is_precision_exhausted(),
            ChabautyError::Dynamics(d) => d.is_precision_exhausted(),
            ChabautyError::Padic(e) => matches!(e, PadicError::PrecisionExhausted(_)),
            _ => false,
        }
    }
}

/// A closed subgroup given by a membership test and a sampler.
#[derive(Debug, Clone, PartialEq)]
pub enum SubgroupSpec {
    Trivial,
    Full,
    UpperBorel,
    DiagonalTorus,
    /// Fixed points of `g -> (g^T)^-1`, i.e. `SO_n`.
    Involution,
    /// Generated by the listed elements; membership is tested on words of
    /// length at most [`WORD_LIMIT`].
    Generated(Vec<Mat>),
}

pub const WORD_LIMIT: usize = 4;

fn close(a: &Mat, b: &Mat, cap: i64) -> bool {
    let d = a.sub(b);
    d.entries().iter().all(Padic::is_zero) || d.min_val() >= cap - LIMIT_SLACK
}

impl SubgroupSpec {
    pub fn name(&self) -> &'static str {
        match self {
            SubgroupSpec::Trivial => "trivial",
            SubgroupSpec::Full => "full",
            SubgroupSpec::UpperBorel => "upper-borel",
            SubgroupSpec::DiagonalTorus => "diagonal-torus",
            SubgroupSpec::Involution => "involution",
            SubgroupSpec::Generated(_) => "generated",
        }
    }

    /// Membership within precision (to `N - LIMIT_SLACK` digits).
    pub fn contains(&self, g: &Group, x: &Mat) -> Result<bool, ChabautyError> {
        let cap = g.field().cap as i64;
        let n = g.n();
        let unimodular = close(&Mat::diag(g.field(), &[x.det()]), &Mat::identity(g.field(), 1), cap);
        let zero_where = |pred: &dyn Fn(usize, usize) -> bool| {
            (0..n).all(|i| (0..n).all(|j| !pred(i, j) || x.get(i, j).is_zero() || x.get(i, j).vmin() >= cap - LIMIT_SLACK))
        };
        Ok(match self {
            SubgroupSpec::Trivial => close(x, &g.identity(), cap),
            SubgroupSpec::Full => unimodular,
            SubgroupSpec::UpperBorel => unimodular && zero_where(&|i, j| i > j),
            SubgroupSpec::DiagonalTorus => unimodular && zero_where(&|i, j| i != j),
            SubgroupSpec::Involution => unimodular && close(&(&x.transpose() * x), &g.identity(), cap),
            SubgroupSpec::Generated(gens) => {
                let mut letters = gens.clone();
                for h in gens {
                    letters.push(h.inverse()?);
                }
                let mut layer = vec![g.identity()];
                for _ in 0..=WORD_LIMIT {
                    if layer.iter().any(|w| close(w, x, cap)) {
                        return Ok(true);
                    }
                    layer = layer.iter().flat_map(|w| letters.iter().map(move |l| w * l)).collect();
                }
                false
            }
        })
    }

    /// A random member.
    pub fn sample<R: Rng + ?Sized>(&self, g: &Group, rng: &mut R) -> Result<Mat, ChabautyError> {
        let f = g.field();
        let n = g.n();
        Ok(match self {
            SubgroupSpec::Trivial => g.identity(),
            SubgroupSpec::Full => g.random_element(rng, -2, 2),
            SubgroupSpec::UpperBorel | SubgroupSpec::DiagonalTorus => {
                let mut m = g.identity();
                let mut det = f.one();
                for i in 0..n - 1 {
                    let x = f.pow_p(rng.gen_range(-2..=2)) * f.random_integer(rng, 0).unit_part().unwrap_or(f.one());
                    det = det * &x;
                    m.set(i, i, x);
                }
                m.set(n - 1, n - 1, det.inv()?);
                if matches!(self, SubgroupSpec::UpperBorel) {
                    for i in 0..n {
                        for j in i + 1..n {
                            m.set(i, j, f.random(rng, -2, 2));
                        }
                    }
                }
                m
            }
            SubgroupSpec::Involution => sample_orthogonal(g, rng)?,
            SubgroupSpec::Generated(gens) => {
                let mut m = g.identity();
                for _ in 0..rng.gen_range(0..=WORD_LIMIT) {
                    let h = &gens[rng.gen_range(0..gens.len())];
                    m = if rng.gen_bool(0.5) { &m * h } else { &m * &h.inverse()? };
                }
                m
            }
        })
    }

    /// Elements of the stabilizer of `s` in this subgroup, for compensating
    /// a choice of `h` with `h s = s'`; the first is always the identity.
    pub fn stabilizer_samples(&self, g: &Group, s: &IdealSimplex) -> Result<Vec<Mat>, ChabautyError> {
        let mut out = vec![g.identity()];
        if matches!(self, SubgroupSpec::Involution) {
            let minus = g.identity().scale(&-g.field().one());
            if g.n().is_multiple_of(2) && g.parabolic_membership(&minus, s)? {
                out.push(minus);
            }
        }
        Ok(out)
    }
}

/// `SO_2`: `[[a, b], [-b, a]]` with `a = sqrt(1 - b^2)`; `SO_n`, `n > 2`,
/// through the Cayley transform of a skew matrix with entries in `pZ_p`.
fn sample_orthogonal<R: Rng + ?Sized>(g: &Group, rng: &mut R) -> Result<Mat, ChabautyError> {
    let f = g.field();
    let n = g.n();
    if n == 2 {
        loop {
            let b = f.random(rng, 0, 3);
            if let Ok(a) = (f.one() - &b * &b).sqrt() {
                let sign = if rng.gen_bool(0.5) { f.one() } else { -f.one() };
                let a = &a * &sign;
                let b = &b * &sign;
                return Ok(Mat::from_rows(f, vec![vec![a.clone(), b.clone()], vec![-b, a]]));
            }
        }
    }
    let mut s = Mat::zeros(f, n);
    for i in 0..n {
        for j in i + 1..n {
            let x = f.random(rng, 1, 4);
            s.set(i, j, x.clone());
            s.set(j, i, -x);
        }
    }
    let id = g.identity();
    Ok(&id.sub(&s) * &id.sub(&s.scale(&-f.one())).inverse()?)
}

/// `a_n = diag(p^(n e_1), ..., p^(n e_k))` for `n = 1..=max_n`.
#[derive(Debug, Clone)]
pub struct ConjugatingSequence {
    pub exps: Vec<i64>,
    pub terms: Vec<Mat>,
    pub certs: Vec<HyperbolicCertificate>,
}

impl ConjugatingSequence {
    pub fn diagonal_powers(g: &Group, exps: &[i64], max_n: usize) -> Result<Self, ChabautyError> {
        if exps.len() != g.n() || exps.iter().sum::<i64>() != 0 {
            return Err(ChabautyError::InvalidArgument("exponents must have length n and sum 0".into()));
        }
        let mut certs = Vec::new();
        for k in 1..=max_n as i64 {
            let e: Vec<i64> = exps.iter().map(|x| x * k).collect();
            let c = classify_powers(g, &e)?
                .hyperbolic()
                .ok_or_else(|| ChabautyError::InvalidArgument("exponents are all zero".into()))?;
            certs.push(c);
        }
        for w in certs.windows(2) {
            if !g.same(&w[0].sigma_plus, &w[1].sigma_plus) || w[1].length <= w[0].length {
                return Err(ChabautyError::InvalidArgument("sequence does not share its attracting simplex".into()));
            }
        }
        let terms = certs.iter().map(|c| c.gamma.clone()).collect();
        Ok(ConjugatingSequence { exps: exps.to_vec(), terms, certs })
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn sigma_plus(&self) -> &IdealSimplex {
        &self.certs[0].sigma_plus
    }

    pub fn sigma_minus(&self) -> &IdealSimplex {
        &self.certs[0].sigma_minus
    }

    pub fn descriptor(&self) -> String {
        let e: Vec<String> = self.exps.iter().map(|x| x.to_string()).collect();
        format!("diag(p^(n*[{}]))", e.join(","))
    }
}

/// The trace `a_n h_n a_n^-1` and its Cauchy gates.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Trace {
    #[serde(skip)]
    pub terms: Vec<Mat>,
    /// Agreement between successive terms.
    pub steps: Vec<i64>,
    pub converged: bool,
    /// Agreement of the last step.
    pub depth: i64,
}

impl Trace {
    fn new(terms: Vec<Mat>, cap: i64) -> Trace {
        let steps: Vec<i64> = terms.windows(2).map(|w| if close(&w[0], &w[1], INF) { INF } else { w[0].agreement(&w[1]) }).collect();
        let tail = steps.iter().rev().take_while(|&&s| s >= cap - LIMIT_SLACK).count();
        let converged = tail >= CAUCHY_TAIL;
        let depth = steps.last().copied().unwrap_or(INF);
        Trace { terms, steps, converged, depth }
    }

    pub fn limit(&self) -> Option<&Mat> {
        if self.converged {
            self.terms.last()
        } else {
            None
        }
    }
}

pub fn conjugate_trace<F>(g: &Group, seq: &ConjugatingSequence, mut select: F) -> Result<Trace, ChabautyError>
where
    F: FnMut(usize) -> Result<Mat, ChabautyError>,
{
    let mut terms = Vec::with_capacity(seq.len());
    for (k, a) in seq.terms.iter().enumerate() {
        let h = select(k + 1)?;
        terms.push(&(a * &h) * &a.inverse()?);
    }
    Ok(Trace::new(terms, g.field().cap as i64))
}

/// The `SO_2` element aimed so that `a_n h_n a_n^-1` has off-diagonal
/// entry `t` on the side contracted by the sequence; `sign` selects `h`
/// or `-h`.
pub fn so2_aimed(g: &Group, seq: &ConjugatingSequence, t: &Padic, n: usize, sign: bool) -> Result<Mat, ChabautyError> {
    let f = g.field();
    let (e0, e1) = (seq.exps[0], seq.exps[1]);
    let scale = f.pow_p(-(n as i64) * (e0 - e1));
    let b = if e0 < e1 { t * &scale } else { -(t * &f.pow_p(-(n as i64) * (e1 - e0))) };
    let a = (f.one() - &b * &b).sqrt()?;
    let s = if sign { f.one() } else { -f.one() };
    Ok(Mat::from_rows(f, vec![vec![&a * &s, &b * &s], vec![-(&b * &s), &a * &s]]))
}

/// A recovered element of the limit group.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LimitElement {
    #[serde(skip)]
    pub matrix: Mat,
    /// Label of the trace it came from.
    pub source: String,
    /// Aimed parameter and the depth to which the limit reproduces it.
    #[serde(skip)]
    pub param: Option<Padic>,
    pub param_agreement: Option<i64>,
    pub trace: Trace,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LimitSet {
    pub generators: Vec<LimitElement>,
    /// Traces that never settled (fixed `h` outside the repelling
    /// parabolic, for instance).
    pub divergent: usize,
    /// No limit element was found within the budget.
    pub inconclusive: bool,
    /// Constant-`h` traces that converged, each of whose limit was matched
    /// by a listed generator or a product of two of them.
    pub covered_subsequence_limits: usize,
    pub uncovered_subsequence_limits: usize,
}

/// Grid of parameters `p^v * u`, `v` in `-1..=2`, `u` in `1..=3`, in the
/// order used by the search.
pub fn parameter_grid(g: &Group, count: usize) -> Vec<Padic> {
    let f = g.field();
    let mut out = Vec::new();
    for v in [0, 1, -1, 2] {
        for u in 1..=3 {
            out.push(f.pow_p(v) * f.int(u));
        }
    }
    out.truncate(count);
    out
}

/// Collects limit elements of `a_n H a_n^-1`. Aimed families are used where
/// `H` has an explicit big-cell parametrization (`SO_2`); every kind also
/// gets constant traces from `budget` samples, whose limits (when they
/// converge) must be generated by what was found.
pub fn chabauty_limit<R: Rng + ?Sized>(
    g: &Group,
    spec: &SubgroupSpec,
    seq: &ConjugatingSequence,
    budget: usize,
    rng: &mut R,
) -> Result<LimitSet, ChabautyError> {
    let cap = g.field().cap as i64;
    let mut generators = Vec::new();
    let mut divergent = 0;
    if matches!(spec, SubgroupSpec::Involution) && g.n() == 2 {
        for t in parameter_grid(g, budget) {
            for sign in [true, false] {
                let trace = conjugate_trace(g, seq, |n| so2_aimed(g, seq, &t, n, sign))?;
                match trace.limit().cloned() {
                    Some(m) => {
                        let (i, j) = if seq.exps[0] < seq.exps[1] { (0, 1) } else { (1, 0) };
                        let entry = if sign { m.get(i, j).clone() } else { -m.get(i, j).clone() };
                        let diff = &entry - &t;
                        let agreement = if diff.is_zero() { INF } else { diff.vmin() };
                        generators.push(LimitElement {
                            matrix: m,
                            source: format!("so2-aimed t={:?} sign={}", t, if sign { '+' } else { '-' }),
                            param: Some(t.clone()),
                            param_agreement: Some(agreement),
                            trace,
                        });
                    }
                    None => divergent += 1,
                }
            }
        }
    }
    let mut constant = Vec::new();
    for k in 0..budget {
        let h = spec.sample(g, rng)?;
        let trace = conjugate_trace(g, seq, |_| Ok(h.clone()))?;
        match trace.limit().cloned() {
            Some(m) => constant.push((k, m, trace)),
            None => divergent += 1,
        }
    }
    let mut covered = 0;
    let mut uncovered = 0;
    for (k, m, trace) in constant {
        let known: Vec<&Mat> = generators.iter().map(|e: &LimitElement| &e.matrix).collect();
        let hit = known.iter().any(|x| close(x, &m, cap))
            || known.iter().any(|x| known.iter().any(|y| close(&(*x * *y), &m, cap)));
        if hit {
            covered += 1;
        } else {
            uncovered += 1;
            generators.push(LimitElement { matrix: m, source: format!("constant sample {k}"), param: None, param_agreement: None, trace });
        }
    }
    let inconclusive = generators.is_empty();
    Ok(LimitSet { generators, divergent, inconclusive, covered_subsequence_limits: covered, uncovered_subsequence_limits: uncovered })
}

/// `g = u * m` with `u` in the unipotent radical of `sigma+` and `m` in
/// the Levi factor fixing `sigma-`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Decomposition {
    #[serde(skip)]
    pub u: Mat,
    #[serde(skip)]
    pub m: Mat,
    /// Digits to which `u * m` reproduces the generator, relative to its
    /// largest entry.
    pub residual: i64,
    pub u_trivial: bool,
    pub m_trivial: bool,
}

pub fn decompose_limit(g: &Group, gens: &[Mat], cert: &HyperbolicCertificate) -> Result<Vec<Decomposition>, ChabautyError> {
    let cap = g.field().cap as i64;
    let frame = g.opposite_frame(&cert.sigma_plus, &cert.sigma_minus)?;
    let mut out = Vec::new();
    for (index, x) in gens.iter().enumerate() {
        // limits are only known to N - LIMIT_SLACK digits, so exact
        // membership is too strict
        if g.gate(&g.act(x, &cert.sigma_plus)?, &cert.sigma_plus)? < cap - LIMIT_SLACK {
            return Err(ChabautyError::HypothesisViolation { index });
        }
        let (u, m) = g.levi_decompose(x, &frame, cert.sigma_plus.ty())?;
        let residual = x.relative_agreement(&(&u * &m));
        let id = g.identity();
        out.push(Decomposition { u_trivial: close(&u, &id, cap), m_trivial: close(&m, &id, cap), u, m, residual });
    }
    Ok(out)
}

/// Whether `x` is block diagonal in `frame` for the type of `sigma+`,
/// checked through its Levi decomposition.
fn unipotent_part_trivial(g: &Group, frame: &Mat, cert: &HyperbolicCertificate, x: &Mat) -> Result<bool, ChabautyError> {
    let (u, _) = g.levi_decompose(x, frame, cert.sigma_plus.ty())?;
    Ok(close(&u, &g.identity(), g.field().cap as i64))
}

fn levi_part_trivial(g: &Group, frame: &Mat, cert: &HyperbolicCertificate, x: &Mat) -> Result<bool, ChabautyError> {
    let (_, m) = g.levi_decompose(x, frame, cert.sigma_plus.ty())?;
    Ok(close(&m, &g.identity(), g.field().cap as i64))
}

/// Sampled normality of the unipotent parts: every `l u l^-1` with `l` a
/// generator and `u` a unipotent part has trivial Levi part.
pub fn normality_holds(g: &Group, gens: &[Mat], decomps: &[Decomposition], cert: &HyperbolicCertificate) -> Result<bool, ChabautyError> {
    let frame = g.opposite_frame(&cert.sigma_plus, &cert.sigma_minus)?;
    for l in gens {
        let li = l.inverse()?;
        for d in decomps {
            if !levi_part_trivial(g, &frame, cert, &(&(l * &d.u) * &li))? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Sampled `U ∩ M = {e}`: unipotent parts have trivial Levi part, Levi
/// parts have trivial unipotent part, and a part that is both is `e`.
pub fn semidirect_holds(g: &Group, decomps: &[Decomposition], cert: &HyperbolicCertificate) -> Result<bool, ChabautyError> {
    let frame = g.opposite_frame(&cert.sigma_plus, &cert.sigma_minus)?;
    let cap = g.field().cap as i64;
    for d in decomps {
        if !levi_part_trivial(g, &frame, cert, &d.u)? || !unipotent_part_trivial(g, &frame, cert, &d.m)? {
            return Ok(false);
        }
        if unipotent_part_trivial(g, &frame, cert, &d.u)? && !close(&d.u, &g.identity(), cap) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// For each target, whether a product of at most two of `us` (or `e`)
/// carries `sigma-` to it.
pub fn transitive_on(g: &Group, us: &[Mat], cert: &HyperbolicCertificate, targets: &[IdealSimplex]) -> Result<Vec<bool>, ChabautyError> {
    let cap = g.field().cap as i64;
    let mut words = vec![g.identity()];
    words.extend(us.iter().cloned());
    for a in us {
        for b in us {
            words.push(a * b);
        }
    }
    let images = words.iter().map(|w| g.act(w, &cert.sigma_minus)).collect::<Result<Vec<_>, _>>()?;
    targets
        .iter()
        .map(|t| {
            for im in &images {
                if g.gate(im, t)? >= cap - LIMIT_SLACK {
                    return Ok(true);
                }
            }
            Ok(false)
        })
        .collect()
}

/// Some `h` in `H` with `h s = target`, or `None` when the subgroup has no
/// explicit solver or the equation has no solution found.
pub fn solve_orbit(g: &Group, spec: &SubgroupSpec, s: &IdealSimplex, target: &IdealSimplex) -> Result<Option<Mat>, ChabautyError> {
    let f = g.field();
    let cap = g.field().cap as i64;
    if g.same(s, target) {
        return Ok(Some(g.identity()));
    }
    let candidate = match spec {
        SubgroupSpec::Full => {
            let mut r = target.rep().clone();
            let si = s.rep().inverse()?;
            if !((&r * &si).det() - f.one()).is_zero() {
                // det is -1; flip a column inside the first block
                let c = r.col(0);
                for (i, x) in c.into_iter().enumerate() {
                    r.set(i, 0, -x);
                }
            }
            Some(&r * &si)
        }
        SubgroupSpec::UpperBorel => {
            let b = g.bruhat(target.rep(), Direction::Plus)?.left;
            let det = b.det();
            let mut h = b;
            h.scale_col(0, &det.inv()?);
            Some(h)
        }
        SubgroupSpec::Involution if g.n() == 2 => {
            let rotation = |v: Vec<Padic>| -> Result<Option<Mat>, ChabautyError> {
                let norm = &v[0] * &v[0] + &v[1] * &v[1];
                let Ok(r) = norm.sqrt() else { return Ok(None) };
                let ri = r.inv()?;
                let (b, a) = (&v[0] * &ri, &v[1] * &ri);
                Ok(Some(Mat::from_rows(f, vec![vec![a.clone(), b.clone()], vec![-b, a]])))
            };
            match (rotation(s.rep().col(0))?, rotation(target.rep().col(0))?) {
                (Some(rs), Some(rt)) => Some(&rt * &rs.inverse()?),
                _ => None,
            }
        }
        _ => None,
    };
    match candidate {
        Some(h) if spec.contains(g, &h)? && g.gate(&g.act(&h, s)?, target)? >= cap - LIMIT_SLACK => Ok(Some(h)),
        _ => Ok(None),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RadiusCount {
    pub radius: i64,
    pub tried: usize,
    pub solved: usize,
}

/// One-sided verdict: `Some(true)` with a radius, or unknown.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OpVerdict {
    pub holds: Option<bool>,
    pub radius: Option<i64>,
    pub counts: Vec<RadiusCount>,
}

/// Samples chambers `u sigma-` (`u` in the radical of `sigma+`, parameters
/// of valuation `r..r+3`) for each radius and solves `h sigma- = s'` in `H`.
pub fn check_op<R: Rng + ?Sized>(
    g: &Group,
    spec: &SubgroupSpec,
    cert: &HyperbolicCertificate,
    radii: &[i64],
    per_radius: usize,
    rng: &mut R,
) -> Result<OpVerdict, ChabautyError> {
    let f = g.field();
    let mut radii = radii.to_vec();
    radii.sort_unstable();
    let mut counts = Vec::new();
    for &r in &radii {
        let mut solved = 0;
        for _ in 0..per_radius {
            let params: Vec<Padic> = (0..g.radical_dim(cert.sigma_plus.ty())).map(|_| f.random(rng, r, r + 3)).collect();
            let target = g.act(&g.radical_element(&cert.sigma_plus, &params)?, &cert.sigma_minus)?;
            if solve_orbit(g, spec, &cert.sigma_minus, &target)?.is_some() {
                solved += 1;
            }
        }
        counts.push(RadiusCount { radius: r, tried: per_radius, solved });
    }
    let radius = (0..counts.len()).find(|&i| counts[i..].iter().all(|c| c.solved == c.tried)).map(|i| counts[i].radius);
    Ok(OpVerdict { holds: radius.map(|_| true), radius, counts })
}

/// How the orbit solver picks among the solutions `h * H_(sigma-)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SolverChoice {
    Canonical,
    /// Multiplies the canonical solution by the non-trivial stabilizer
    /// element on odd steps, so convergence needs compensation.
    Alternating,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TranspOutcome {
    Witness,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TranspVerdict {
    pub outcome: TranspOutcome,
    /// Index from which the chosen terms agree to `N - LIMIT_SLACK`.
    pub from_n: Option<usize>,
    pub trace: Trace,
}

/// For each target `s'` in `Opp(sigma+)`: solves `g_n sigma- = s'` in
/// `a_n H a_n^-1` and picks, among the `budget` first compensations by
/// `a_n H_(sigma-) a_n^-1`, the term closest to the previous one.
pub fn check_transp(
    g: &Group,
    spec: &SubgroupSpec,
    seq: &ConjugatingSequence,
    targets: &[IdealSimplex],
    budget: usize,
    choice: SolverChoice,
) -> Result<Vec<TranspVerdict>, ChabautyError> {
    let cap = g.field().cap as i64;
    let minus = seq.sigma_minus();
    let stab = spec.stabilizer_samples(g, minus)?;
    let mut out = Vec::new();
    for target in targets {
        let mut chosen: Vec<Mat> = Vec::new();
        for (k, a) in seq.terms.iter().enumerate() {
            let ai = a.inverse()?;
            let pulled = g.act(&ai, target)?;
            let Some(mut h) = solve_orbit(g, spec, minus, &pulled)? else { continue };
            if choice == SolverChoice::Alternating && k % 2 == 1 {
                h = &h * stab.last().expect("identity is always present");
            }
            let base = &(a * &h) * &ai;
            let mut best: Option<(i64, Mat)> = None;
            for c in stab.iter().take(budget.max(1)) {
                let cand = &base * &(&(a * c) * &ai);
                let score = chosen.last().map_or(0, |prev| if close(prev, &cand, INF) { INF } else { prev.agreement(&cand) });
                if best.as_ref().is_none_or(|b| score > b.0) {
                    best = Some((score, cand));
                }
            }
            chosen.push(best.expect("at least one candidate").1);
        }
        let trace = Trace::new(chosen, cap);
        let from_n = trace.converged.then(|| trace.steps.len() - trace.steps.iter().rev().take_while(|&&s| s >= cap - LIMIT_SLACK).count());
        let outcome = if trace.converged { TranspOutcome::Witness } else { TranspOutcome::Inconclusive };
        out.push(TranspVerdict { outcome, from_n, trace });
    }
    Ok(out)
}
