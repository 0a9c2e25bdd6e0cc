//! Hyperbolic elements of `SL_n(Q_p)` acting on the ideal boundary.
//!
//! Conventions: eigenvalue valuations are listed in descending order as
//! the translation vector `a`, and `I = translation_type(a)`. The
//! attracting simplex `sigma+` is the flag of eigenspaces sorted by
//! ascending valuation (the directions `gamma^n` magnifies), of type `I*`;
//! the repelling simplex `sigma-` is the descending flag, of type `I`.
//! For `diag(p, p^-1)` this makes `sigma+ = c-` and `sigma- = c+`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::building::subspace::{self, Vector};
use crate::building::{BuildingError, Group, IdealSimplex};
use crate::coxeter::{CoxeterError, TranslationVector, TypeSet};
use crate::matrix::Mat;
use crate::padic::{Padic, PadicError, INF};
use crate::tolerances::{CAUCHY_TAIL, LIMIT_SLACK};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DynamicsError {
    #[error(transparent)]
    Building(#[from] BuildingError),
    #[error(transparent)]
    Coxeter(#[from] CoxeterError),
    #[error(transparent)]
    Padic(#[from] PadicError),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("limit hypothesis fails: the projection of the chamber contains no chamber fixed by the element")]
    HypothesisNotSatisfied(Box<LimitRun>),
    #[error("power iteration stalled at gate {0}")]
    Stalled(i64),
}

impl DynamicsError {
    pub fn is_precision_exhausted(&self) -> bool {
        match self {
            DynamicsError::Building(b) => b.is_precision_exhausted(),
            DynamicsError::Padic(e) => matches!(e, PadicError::PrecisionExhausted(_)),
            DynamicsError::Stalled(_) => true,
            _ => false,
        }
    }
}

/// Serializes a gate, writing [`INF`] as the string `"inf"`.
pub fn serialize_gate<S: Serializer>(r: &i64, s: S) -> Result<S::Ok, S::Error> {
    if *r == INF {
        s.serialize_str("inf")
    } else {
        s.serialize_i64(*r)
    }
}

fn serialize_opt_gate<S: Serializer>(r: &Option<i64>, s: S) -> Result<S::Ok, S::Error> {
    match r {
        Some(x) => serialize_gate(x, s),
        None => s.serialize_none(),
    }
}

/// An eigenbasis: `gamma = h * diag(eigen) * h^-1`.
#[derive(Debug, Clone, PartialEq)]
pub struct Frame {
    pub h: Mat,
    pub eigen: Vec<Padic>,
}

impl Frame {
    /// Eigenspaces as spans of columns of `h`, grouped by equal eigenvalue.
    fn eigenspaces(&self) -> Vec<Vec<Vector>> {
        let mut groups: Vec<(Padic, Vec<Vector>)> = Vec::new();
        for (j, x) in self.eigen.iter().enumerate() {
            match groups.iter_mut().find(|(y, _)| (x - y).is_zero()) {
                Some(g) => g.1.push(self.h.col(j)),
                None => groups.push((x.clone(), vec![self.h.col(j)])),
            }
        }
        groups.into_iter().map(|g| g.1).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HyperbolicCertificate {
    pub gamma: Mat,
    /// Eigenvalue valuations in descending order, multiplied by `den`.
    pub a: Vec<i64>,
    /// Common denominator of the valuations (1 when they are integers).
    pub den: i64,
    /// Euclidean norm of `a / den`.
    pub length: f64,
    pub ty: TypeSet,
    pub sigma_plus: IdealSimplex,
    pub sigma_minus: IdealSimplex,
    /// Known eigenbasis, for inputs given as conjugated diagonal elements.
    pub frame: Option<Frame>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Classification {
    Elliptic,
    Hyperbolic(Box<HyperbolicCertificate>),
}

impl Classification {
    pub fn hyperbolic(self) -> Option<HyperbolicCertificate> {
        match self {
            Classification::Hyperbolic(c) => Some(*c),
            Classification::Elliptic => None,
        }
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    (0u32..1 << n).filter(|m| m.count_ones() as usize == k).map(|m| (0..n).filter(|&i| m >> i & 1 == 1).collect()).collect()
}

/// Coefficients `e_k` (sums of principal `k x k` minors), so that the
/// characteristic polynomial is `sum (-1)^k e_k x^(n-k)`.
pub fn char_coefficients(gamma: &Mat) -> Vec<Padic> {
    let n = gamma.n();
    (0..=n)
        .map(|k| subsets(n, k).iter().fold(gamma.field().zero(), |acc, s| acc + gamma.minor(s, s)))
        .collect()
}

/// Eigenvalue valuations in ascending order from the lower Newton polygon
/// of `(k, v(e_k))`, scaled by the returned common denominator.
pub fn newton_slopes(gamma: &Mat) -> Result<(Vec<i64>, i64), DynamicsError> {
    let e = char_coefficients(gamma);
    let n = gamma.n();
    let mut known: Vec<(i64, i64)> = Vec::new();
    let mut bounds: Vec<(i64, i64)> = Vec::new();
    for (k, x) in e.iter().enumerate() {
        match x.valuation() {
            Some(v) => known.push((k as i64, v)),
            None if x.is_exact_zero() => {}
            None => bounds.push((k as i64, x.vmin())),
        }
    }
    if known.first().map(|p| p.0) != Some(0) || known.last().map(|p| p.0) != Some(n as i64) {
        return Err(PadicError::PrecisionExhausted(e[n].vmin()).into());
    }
    let mut hull: Vec<(i64, i64)> = Vec::new();
    for &p in &known {
        while hull.len() >= 2 {
            let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            let cross = (b.0 - a.0) as i128 * (p.1 - a.1) as i128 - (b.1 - a.1) as i128 * (p.0 - a.0) as i128;
            if cross <= 0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    // an inexact coefficient below the hull could change the polygon
    for &(k, b) in &bounds {
        let seg = hull.windows(2).find(|w| w[0].0 <= k && k <= w[1].0).expect("hull spans 0..n");
        let (a, c) = (seg[0], seg[1]);
        if (b as i128) * ((c.0 - a.0) as i128) < (a.1 as i128) * ((c.0 - a.0) as i128) + ((c.1 - a.1) as i128) * ((k - a.0) as i128) {
            return Err(PadicError::PrecisionExhausted(b).into());
        }
    }
    let mut den = 1;
    for w in hull.windows(2) {
        let len = w[1].0 - w[0].0;
        let d = len / gcd(w[1].1 - w[0].1, len);
        den = den / gcd(den, d) * d;
    }
    let mut mu = Vec::with_capacity(n);
    for w in hull.windows(2) {
        let len = w[1].0 - w[0].0;
        for _ in 0..len {
            mu.push((w[1].1 - w[0].1) * den / len);
        }
    }
    Ok((mu, den))
}

fn finish(
    g: &Group,
    gamma: Mat,
    a: Vec<i64>,
    den: i64,
    sigma_plus: IdealSimplex,
    sigma_minus: IdealSimplex,
    frame: Option<Frame>,
) -> Result<HyperbolicCertificate, DynamicsError> {
    if !g.opposite(&sigma_plus, &sigma_minus)? {
        return Err(DynamicsError::InvalidArgument("attracting and repelling simplices are not opposite".into()));
    }
    let ty = g.weyl().translation_type(&TranslationVector::from_eps(&a))?;
    let length = (a.iter().map(|&x| (x * x) as f64).sum::<f64>()).sqrt() / den as f64;
    Ok(HyperbolicCertificate { gamma, a, den, length, ty, sigma_plus, sigma_minus, frame })
}

fn regularity(g: &Group, desc: &[i64]) -> Result<TypeSet, DynamicsError> {
    Ok(g.weyl().translation_type(&TranslationVector::from_eps(desc))?)
}

/// Classifies `h * diag(t) * h^-1` exactly from the diagonal.
pub fn classify_conjugate(g: &Group, h: &Mat, t: &[Padic]) -> Result<Classification, DynamicsError> {
    let f = g.field();
    if t.len() != g.n() || h.n() != g.n() {
        return Err(DynamicsError::InvalidArgument("size mismatch".into()));
    }
    let prod = t.iter().fold(f.one(), |acc, x| acc * x);
    if !(&prod - &f.one()).is_zero() {
        return Err(DynamicsError::InvalidArgument("diagonal part does not have determinant 1".into()));
    }
    let vals = t
        .iter()
        .map(|x| x.valuation().ok_or(DynamicsError::Padic(PadicError::PrecisionExhausted(x.vmin()))))
        .collect::<Result<Vec<_>, _>>()?;
    let gamma = &(h * &Mat::diag(f, t)) * &h.inverse()?;
    if vals.iter().all(|&v| v == 0) {
        return Ok(Classification::Elliptic);
    }
    let mut desc: Vec<usize> = (0..g.n()).collect();
    desc.sort_by_key(|&i| std::cmp::Reverse(vals[i]));
    let mut asc: Vec<usize> = (0..g.n()).collect();
    asc.sort_by_key(|&i| vals[i]);
    let a: Vec<i64> = desc.iter().map(|&i| vals[i]).collect();
    let ty = regularity(g, &a)?;
    let zero = vec![0; g.n()];
    let minus = g.boundary_simplex(&(h * &Mat::monomial(f, &desc, &zero)), ty)?;
    let plus = g.boundary_simplex(&(h * &Mat::monomial(f, &asc, &zero)), g.opposite_type(ty))?;
    let frame = Frame { h: h.clone(), eigen: t.to_vec() };
    Ok(Classification::Hyperbolic(Box::new(finish(g, gamma, a, 1, plus, minus, Some(frame))?)))
}

pub fn classify_diagonal(g: &Group, t: &[Padic]) -> Result<Classification, DynamicsError> {
    classify_conjugate(g, &g.identity(), t)
}

/// `diag(p^e_1, ..., p^e_n)`, classified exactly.
pub fn classify_powers(g: &Group, e: &[i64]) -> Result<Classification, DynamicsError> {
    let f = g.field();
    classify_diagonal(g, &e.iter().map(|&k| f.pow_p(k)).collect::<Vec<_>>())
}

/// Classifies an arbitrary semisimple element: valuations from the Newton
/// polygon, simplices by iterating `gamma` and `gamma^-1` on flags.
pub fn classify(g: &Group, gamma: &Mat) -> Result<Classification, DynamicsError> {
    let (mu, den) = newton_slopes(gamma)?;
    if mu.iter().all(|&m| m == 0) {
        return Ok(Classification::Elliptic);
    }
    let a: Vec<i64> = mu.iter().rev().copied().collect();
    let ty = regularity(g, &a)?;
    let gap = mu.windows(2).map(|w| w[1] - w[0]).filter(|&d| d > 0).min().unwrap_or(den);
    let plus = attracting(g, gamma, g.opposite_type(ty), gap, den)?;
    let minus = attracting(g, &gamma.inverse()?, ty, gap, den)?;
    Ok(Classification::Hyperbolic(Box::new(finish(g, gamma.clone(), a, den, plus, minus, None)?)))
}

/// The orbit `gamma^n x` of a simplex. `gamma` is kept written in the
/// current canonical basis, so each step is a similarity by a matrix of
/// `GL_n(Z_p)`; multiplying by `gamma` in fixed coordinates instead loses
/// one digit per step per unit of eigenvalue gap.
struct Orbit<'a> {
    g: &'a Group,
    x: IdealSimplex,
    local: Mat,
}

impl<'a> Orbit<'a> {
    fn new(g: &'a Group, gamma: &Mat, x: &IdealSimplex) -> Result<Self, DynamicsError> {
        let local = &(&x.rep().inverse()? * gamma) * x.rep();
        Ok(Orbit { g, x: x.clone(), local })
    }

    fn current(&self) -> &IdealSimplex {
        &self.x
    }

    fn step(&mut self) -> Result<&IdealSimplex, DynamicsError> {
        let g = self.g;
        let ty = self.x.ty();
        let y = g.boundary_simplex(&self.local, ty)?;
        let moved = self.x.rep() * y.rep();
        let next = g.boundary_simplex(&moved, ty)?;
        let mut k = &next.rep().inverse()? * &moved;
        // k lies in P_ty; its block-lower entries are zero, and leaving
        // them as inexact zeros would cost a digit on every step
        let blocks = g.blocks(ty);
        for (bi, rows) in blocks.iter().enumerate() {
            for cols in &blocks[..bi] {
                for i in rows.clone() {
                    for j in cols.clone() {
                        k.set(i, j, g.field().zero());
                    }
                }
            }
        }
        let yi = y.rep().inverse()?;
        self.local = &(&(&(&k * &yi) * &self.local) * y.rep()) * &k.inverse()?;
        self.x = next;
        Ok(&self.x)
    }
}

/// Limit of `gamma^k X` for a fixed pseudo-random start `X` of type `ty`.
fn attracting(g: &Group, gamma: &Mat, ty: TypeSet, gap: i64, den: i64) -> Result<IdealSimplex, DynamicsError> {
    let cap = g.field().cap as i64;
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let start = g.boundary_simplex(&g.random_element(&mut rng, 0, 0), ty)?;
    let mut orbit = Orbit::new(g, gamma, &start)?;
    let budget = 4 * (cap * den / gap.max(1)) as usize + 16;
    let mut last = 0;
    for _ in 0..budget {
        let prev = orbit.current().clone();
        last = g.gate(&prev, orbit.step()?)?;
        if last >= cap {
            return Ok(orbit.current().clone());
        }
    }
    Err(DynamicsError::Stalled(last))
}

/// `gamma` fixes both boundary simplices, and the first `samples` chambers
/// of its eigen-apartment when a frame is known.
pub fn fixes_min_boundary(g: &Group, cert: &HyperbolicCertificate, samples: usize) -> Result<bool, DynamicsError> {
    if !g.parabolic_membership(&cert.gamma, &cert.sigma_plus)? || !g.parabolic_membership(&cert.gamma, &cert.sigma_minus)? {
        return Ok(false);
    }
    if let Some(fr) = &cert.frame {
        for w in g.weyl().enumerate()?.iter().take(samples) {
            let c = g.boundary_simplex(&(&fr.h * &g.weyl_matrix(w)), TypeSet::EMPTY)?;
            if !g.parabolic_membership(&cert.gamma, &c)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Radius of the largest standard neighbourhood around `a`, seen from the
/// vertex `base`, that contains `b`.
#[derive(Debug, Clone, PartialEq)]
pub struct GateMeasure {
    pub base: Mat,
    pub r: i64,
}

pub fn agreement_gate(g: &Group, x: &Mat, a: &IdealSimplex, b: &IdealSimplex) -> Result<GateMeasure, DynamicsError> {
    Ok(GateMeasure { base: g.vertex(x)?, r: g.gate_at(x, a, b)? })
}

/// The standard open neighbourhood `{ s : gate_at(base, center, s) >= r }`.
#[derive(Debug, Clone, PartialEq)]
pub struct Neighborhood {
    pub base: Mat,
    pub center: IdealSimplex,
    pub r: i64,
}

impl Neighborhood {
    pub fn contains(&self, g: &Group, s: &IdealSimplex) -> Result<bool, DynamicsError> {
        Ok(g.gate_at(&self.base, &self.center, s)? >= self.r)
    }
}

/// `gamma^n V`. The base vertex is moved by `gamma^n` and, when an
/// eigenframe is known, recomputed as the frame translation
/// `h diag(t)^n h^-1` for comparison.
pub fn neighborhood_image(g: &Group, cert: &HyperbolicCertificate, v: &Neighborhood, n: u32) -> Result<Neighborhood, DynamicsError> {
    let gn = cert.gamma.pow(n);
    let base = g.vertex(&(&gn * &v.base))?;
    if let Some(fr) = &cert.frame {
        let f = g.field();
        let tn: Vec<Padic> = fr.eigen.iter().map(|x| (0..n).fold(f.one(), |acc, _| acc * x)).collect();
        let direct = g.vertex(&(&(&(&fr.h * &Mat::diag(f, &tn)) * &fr.h.inverse()?) * &v.base))?;
        if !direct.sub(&base).entries().iter().all(Padic::is_zero) {
            return Err(DynamicsError::InvalidArgument("translated base vertex disagrees with the frame translation".into()));
        }
    }
    Ok(Neighborhood { base, center: g.act(&gn, &v.center)?, r: v.r })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Assumption {
    pub holds: bool,
    /// Projection of `xi` onto the star of `sigma-`.
    pub projection: IdealSimplex,
    /// Type predicted by the Coxeter-level residue projection.
    pub predicted_type: TypeSet,
    /// A chamber containing the projection and fixed by `gamma`.
    pub witness: Option<IdealSimplex>,
    /// Eigenframe whose apartment contains the witness.
    pub witness_frame: Option<Mat>,
}

impl Assumption {
    pub fn types_agree(&self) -> bool {
        self.projection.ty() == self.predicted_type
    }
}

/// Whether the projection of `xi` onto the residue of `sigma-` meets the
/// chambers fixed by `gamma`. It does iff the projection itself is fixed;
/// a fixed chamber containing it is then built from eigenvectors.
pub fn assumption_check(g: &Group, cert: &HyperbolicCertificate, xi: &IdealSimplex) -> Result<Assumption, DynamicsError> {
    let projection = g.project(&cert.sigma_minus, xi)?;
    let w1 = g.relative_position(&cert.sigma_minus, xi)?;
    let predicted_type = g.weyl().residue_projection_type(cert.sigma_minus.ty(), xi.ty(), &w1)?.ty;
    let holds = g.parabolic_membership(&cert.gamma, &projection)?;
    let (witness, witness_frame) = match (&cert.frame, holds) {
        (Some(fr), true) => {
            let frame = eigen_adapted_frame(g, fr, &projection)?;
            (Some(g.boundary_simplex(&frame, TypeSet::EMPTY)?), Some(frame))
        }
        _ => (None, None),
    };
    Ok(Assumption { holds, projection, predicted_type, witness, witness_frame })
}

/// Eigenvectors `f_1, ..., f_n` with each subspace of `s` spanned by a
/// leading segment; `s` must be fixed by the element.
fn eigen_adapted_frame(g: &Group, fr: &Frame, s: &IdealSimplex) -> Result<Mat, DynamicsError> {
    let f = g.field();
    let n = g.n();
    let spaces = fr.eigenspaces();
    let mut dims = g.dims(s.ty());
    dims.push(n);
    let mut cols: Vec<Vector> = Vec::new();
    for k in dims {
        let target = g.subspace(s, k);
        while cols.len() < k {
            let mut next = None;
            'search: for e in &spaces {
                for v in subspace::intersect(&target, e, f)? {
                    if !subspace::contains(&cols, &v, f)? {
                        next = Some(v);
                        break 'search;
                    }
                }
            }
            cols.push(next.ok_or_else(|| DynamicsError::InvalidArgument("simplex is not spanned by eigenvectors".into()))?);
        }
    }
    let mut m = Mat::zeros(f, n);
    for (j, c) in cols.iter().enumerate() {
        for (i, x) in c.iter().enumerate() {
            m.set(i, j, x.clone());
        }
    }
    Ok(m)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TraceStep {
    pub n: usize,
    /// Gate between the `n`-th and `n+1`-st iterates.
    #[serde(serialize_with = "serialize_gate")]
    pub gate_r: i64,
    /// Gate between the `n`-th iterate and the retraction value.
    #[serde(serialize_with = "serialize_opt_gate", skip_serializing_if = "Option::is_none")]
    pub to_limit: Option<i64>,
    pub chamber_repr_hash: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Converged,
    NoConvergence,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LimitRun {
    pub verdict: Verdict,
    pub hypothesis: bool,
    pub witness: Option<IdealSimplex>,
    pub trace: Vec<TraceStep>,
    /// Last iterate.
    pub iterate: IdealSimplex,
    /// Retraction of `xi` centred at the witness, onto its eigen-apartment.
    pub retraction: Option<IdealSimplex>,
    /// Gate between the last iterate and the retraction.
    pub agreement: Option<i64>,
    /// First `n` from which every step gate stays at or above the target
    /// radius.
    pub n_first: Option<usize>,
    /// Gates to the retraction never decrease from `n_first` on.
    pub monotone: bool,
}

impl LimitRun {
    /// Converged, monotone, and the two limit computations agree to
    /// `N - LIMIT_SLACK` digits.
    pub fn consistent(&self, cap: i64) -> bool {
        self.verdict == Verdict::Converged && self.monotone && self.agreement.is_some_and(|a| a >= cap - LIMIT_SLACK)
    }
}

/// Iterates `gamma^n xi` and compares with the retraction of `xi` centred at
/// a fixed chamber of the projection. Stops once successive iterates agree
/// to the full precision, or a tail of `CAUCHY_TAIL` steps agrees to
/// `N - LIMIT_SLACK` digits (precision can cap the step gate just below `N`).
pub fn limit_boundary(
    g: &Group,
    cert: &HyperbolicCertificate,
    xi: &IdealSimplex,
    max_n: usize,
    r_target: i64,
) -> Result<LimitRun, DynamicsError> {
    if !xi.ty().is_empty() {
        return Err(DynamicsError::InvalidArgument("limit_boundary expects a chamber".into()));
    }
    let cap = g.field().cap as i64;
    let check = assumption_check(g, cert, xi)?;
    let eta = match (&check.witness, &check.witness_frame) {
        (Some(c), Some(frame)) => Some(g.retraction(frame, c, xi)?.chamber),
        _ => None,
    };
    if check.holds && eta.is_none() {
        return Err(DynamicsError::InvalidArgument("the limit comparison needs an eigenframe".into()));
    }
    let mut trace = Vec::new();
    let mut orbit = Orbit::new(g, &cert.gamma, xi)?;
    let mut x = xi.clone();
    for n in 0..=max_n {
        let next = orbit.step()?.clone();
        let gate_r = g.gate(&x, &next)?;
        let to_limit = eta.as_ref().map(|e| g.gate(&x, e)).transpose()?;
        trace.push(TraceStep { n, gate_r, to_limit, chamber_repr_hash: format!("{:016x}", x.fingerprint()) });
        let settled = trace.len() >= CAUCHY_TAIL && trace[trace.len() - CAUCHY_TAIL..].iter().all(|s| s.gate_r >= cap - LIMIT_SLACK);
        if gate_r >= cap || settled {
            break;
        }
        x = next;
    }
    // entry time: the iterates stay within `r_target` from here on
    let n_first = match trace.iter().rposition(|s| s.gate_r < r_target) {
        None => Some(0),
        Some(i) if i + 1 < trace.len() => Some(i + 1),
        Some(_) => None,
    };
    let tail = &trace[n_first.unwrap_or(trace.len())..];
    let monotone = tail.windows(2).all(|w| w[0].to_limit <= w[1].to_limit && w[0].gate_r <= w[1].gate_r);
    let converged = n_first.is_some() && trace.last().is_some_and(|s| s.gate_r >= cap - LIMIT_SLACK);
    let agreement = eta.as_ref().map(|e| g.gate(&x, e)).transpose()?;
    let run = LimitRun {
        verdict: if converged { Verdict::Converged } else { Verdict::NoConvergence },
        hypothesis: check.holds,
        witness: check.witness,
        trace,
        iterate: x,
        retraction: eta,
        agreement,
        n_first,
        monotone,
    };
    if !run.hypothesis {
        return Err(DynamicsError::HypothesisNotSatisfied(Box::new(run)));
    }
    Ok(run)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TargetTransit {
    /// Least index from which every later element absorbs the target.
    pub threshold: Option<usize>,
    pub gates: Vec<i64>,
    pub contained: Vec<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TransitReport {
    pub targets: Vec<TargetTransit>,
    /// Cases where the image neighbourhood and the pulled-back target
    /// disagree about containment.
    pub route_mismatches: usize,
}

impl TransitReport {
    pub fn all_absorbed(&self) -> bool {
        self.route_mismatches == 0 && self.targets.iter().all(|t| t.threshold.is_some())
    }
}

/// For each target in `Opp(sigma+)`, the first index `n` after which
/// `gamma_n V` contains it. Containment is decided twice: by pulling the
/// target back with `gamma_n^-1`, and by testing it against the image
/// neighbourhood.
pub fn verify_transit(
    g: &Group,
    certs: &[HyperbolicCertificate],
    v: &Neighborhood,
    targets: &[IdealSimplex],
) -> Result<TransitReport, DynamicsError> {
    let first = certs.first().ok_or_else(|| DynamicsError::InvalidArgument("empty sequence".into()))?;
    for c in certs {
        if !g.same(&c.sigma_plus, &first.sigma_plus) || !g.same(&c.sigma_minus, &first.sigma_minus) {
            return Err(DynamicsError::InvalidArgument("elements do not share their boundary simplices".into()));
        }
    }
    if certs.windows(2).any(|w| w[1].length <= w[0].length) {
        return Err(DynamicsError::InvalidArgument("translation lengths must increase".into()));
    }
    if !g.same(&v.center, &first.sigma_minus) {
        return Err(DynamicsError::InvalidArgument("neighbourhood is not centred at the repelling simplex".into()));
    }
    let mut report = TransitReport { targets: Vec::new(), route_mismatches: 0 };
    for tau in targets {
        if !g.opposite(&first.sigma_plus, tau)? {
            return Err(DynamicsError::InvalidArgument("target is not opposite the attracting simplex".into()));
        }
        let mut gates = Vec::new();
        let mut contained = Vec::new();
        for c in certs {
            let pulled = g.act(&c.gamma.inverse()?, tau)?;
            let r = g.gate_at(&v.base, &v.center, &pulled)?;
            let image = neighborhood_image(g, c, v, 1)?;
            if (r >= v.r) != image.contains(g, tau)? {
                report.route_mismatches += 1;
            }
            gates.push(r);
            contained.push(r >= v.r);
        }
        let threshold = match contained.iter().rposition(|&b| !b) {
            None => Some(0),
            Some(i) if i + 1 < contained.len() => Some(i + 1),
            Some(_) => None,
        };
        report.targets.push(TargetTransit { threshold, gates, contained });
    }
    Ok(report)
}

/// Whether `gamma^-n x gamma^n`, `n <= window`, stays as bounded as `x`.
pub fn conjugates_bounded(gamma: &Mat, x: &Mat, window: i64) -> Result<bool, DynamicsError> {
    let gi = gamma.inverse()?;
    let floor = x.min_val();
    let mut m = x.clone();
    for _ in 0..window {
        m = &(&gi * &m) * gamma;
        if m.min_val() < floor {
            return Ok(false);
        }
    }
    Ok(true)
}
