//! Curve probes: pull modules back along arcs, decide membership over `k[[t]]`,
//! extract witness hyperplanes and search curve families.

use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use num::{BigInt, BigRational, Integer, One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::jacobian::{ConditionModules, Flavor, MapGerm, Transversal};
use crate::localstd::ModuleVec;
use crate::parse::parse;
use crate::poly::{Mono, Poly, Ring};
use crate::rng::RationalStream;
use crate::scalar::{Field, Scalar};
use crate::series::{Evaluator, TruncSeries};

pub const DEFAULT_N: usize = 40;
pub const DEFAULT_GUARD: usize = 8;
pub const DEFAULT_E: u32 = 6;

/// Ring of the curve parameter.
pub fn t_ring(field: Field) -> Arc<Ring> {
    Ring::new(&["t"], field)
}

#[derive(Clone, Debug, PartialEq)]
pub enum CompSpec {
    /// Exact polynomial in `t`.
    Exact(Poly),
    /// Solved from the defining equations, starting with `lead * t^exp`.
    Solve { lead: Scalar, exp: u32 },
}

/// Replayable description of an arc: one entry per variable of the germ ring.
#[derive(Clone, Debug, PartialEq)]
pub struct CurveSpec {
    pub ring: Arc<Ring>,
    pub comps: Vec<CompSpec>,
}

impl CurveSpec {
    pub fn zero(ring: &Arc<Ring>) -> CurveSpec {
        let t = t_ring(ring.field());
        CurveSpec { ring: ring.clone(), comps: vec![CompSpec::Exact(Poly::zero(&t)); ring.nvars()] }
    }

    /// Monomial arc `v_i = c_i t^(e_i)`, `e_i = 0` meaning the zero component.
    pub fn monomial(ring: &Arc<Ring>, exps: &[u32], coeffs: Option<&[Scalar]>) -> CurveSpec {
        let t = t_ring(ring.field());
        let comps = exps
            .iter()
            .enumerate()
            .map(|(i, &e)| {
                if e == 0 {
                    CompSpec::Exact(Poly::zero(&t))
                } else {
                    let c = coeffs.map(|c| c[i].clone()).unwrap_or_else(Scalar::one);
                    CompSpec::Exact(Poly::monomial(&t, Mono::from_exps(&[e]), c))
                }
            })
            .collect();
        CurveSpec { ring: ring.clone(), comps }
    }

    /// Reads `x = t^2 + 3t^5; y = solve(-t^4)`; unmentioned variables are zero.
    pub fn parse(text: &str, ring: &Arc<Ring>) -> Result<CurveSpec> {
        let mut spec = CurveSpec::zero(ring);
        let t = t_ring(ring.field());
        for part in text.split([';', '\n']) {
            let part = part.trim();
            if part.is_empty() {
                continue;
            }
            let (name, rhs) = part
                .split_once('=')
                .ok_or_else(|| Error::Syntax { col: 1, msg: format!("expected `var = series` in `{}`", part) })?;
            let v = ring.var_index(name.trim())?;
            spec.comps[v] = CompSpec::from_text(rhs.trim(), &t)?;
        }
        Ok(spec)
    }

    pub fn solve_var(&self) -> Option<usize> {
        self.comps.iter().position(|c| matches!(c, CompSpec::Solve { .. }))
    }

    pub fn text(&self) -> String {
        (0..self.ring.nvars())
            .map(|i| format!("{} = {}", self.ring.name(i), self.comps[i]))
            .collect::<Vec<_>>()
            .join("; ")
    }
}

impl CompSpec {
    pub fn from_text(text: &str, t: &Arc<Ring>) -> Result<CompSpec> {
        if let Some(inner) = text.strip_prefix("solve(").and_then(|s| s.strip_suffix(')')) {
            let p = parse(inner, t)?;
            if p.len() != 1 || p.terms()[0].0.deg() == 0 {
                return Err(Error::Syntax { col: 1, msg: "solve(...) takes a single term c*t^e with e >= 1".into() });
            }
            let (m, c) = &p.terms()[0];
            return Ok(CompSpec::Solve { lead: c.clone(), exp: m.deg() });
        }
        let p = parse(text, t)?;
        if !p.constant_term().is_zero() {
            return Err(Error::Precondition(format!("curve component `{}` does not vanish at t = 0", text)));
        }
        Ok(CompSpec::Exact(p))
    }
}

impl fmt::Display for CompSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CompSpec::Exact(p) => write!(f, "{}", p),
            CompSpec::Solve { lead, exp } => {
                let t = t_ring(if lead.is_real() { Field::Q } else { Field::QI });
                write!(f, "solve({})", Poly::monomial(&t, Mono::from_exps(&[*exp]), lead.clone()))
            }
        }
    }
}

/// An arc through the origin with components known to tracked precision.
#[derive(Clone, Debug)]
pub struct CurveGerm {
    pub spec: CurveSpec,
    pub comps: Vec<TruncSeries>,
    pub n: usize,
    pub cap: usize,
}

impl CurveGerm {
    pub fn ring(&self) -> &Arc<Ring> {
        &self.spec.ring
    }

    pub fn text(&self) -> String {
        self.spec.text()
    }

    pub fn is_constant(&self) -> bool {
        self.comps.iter().all(|c| c.is_zero())
    }

    /// Minimal order over the components.
    pub fn ord(&self) -> Option<usize> {
        self.comps.iter().filter_map(|c| c.ord()).min()
    }

    pub fn ord_of(&self, vars: &[usize]) -> Option<usize> {
        vars.iter().filter_map(|&v| self.comps[v].ord()).min()
    }

    pub fn series_text(&self) -> Vec<String> {
        (0..self.comps.len())
            .map(|i| format!("{} = {} + O(t^{})", self.ring().name(i), self.comps[i].to_poly_string("t"), self.comps[i].prec()))
            .collect()
    }
}

pub fn pullback(phi: &CurveGerm, p: &Poly) -> TruncSeries {
    Evaluator::new(&phi.comps, phi.cap).eval(p)
}

pub fn pullback_vec(phi: &CurveGerm, v: &ModuleVec) -> Vec<TruncSeries> {
    let mut ev = Evaluator::new(&phi.comps, phi.cap);
    v.iter().map(|p| ev.eval(p)).collect()
}

/// Builds the arc, solving the `solve(...)` component (at most one) against `constraints`.
pub fn realize(spec: &CurveSpec, constraints: &[Poly], n: usize) -> Result<CurveGerm> {
    let cap = 3 * n;
    let t = t_ring(spec.ring.field());
    let mut comps = Vec::with_capacity(spec.comps.len());
    let mut solve = None;
    for (i, c) in spec.comps.iter().enumerate() {
        match c {
            CompSpec::Exact(p) => comps.push(TruncSeries::from_poly(&p.to_ring(&t)?, cap)),
            CompSpec::Solve { lead, exp } => {
                if solve.is_some() {
                    return Err(Error::Precondition("at most one component may be solved".into()));
                }
                solve = Some((i, lead.clone(), *exp));
                comps.push(TruncSeries::zero(cap));
            }
        }
    }
    if let Some((v, lead, exp)) = solve {
        let eqs = bivariate_equations(spec, v, constraints)?;
        let mut solved = None;
        for g in &eqs {
            if let Some(edge) = edge_polynomial(g, exp) {
                if edge.is_simple_root(&lead) {
                    solved = Some(hensel(g, &edge, &lead, exp, n));
                    break;
                }
            }
        }
        comps[v] = solved.ok_or_else(|| {
            Error::Precondition(format!("{} is not a simple root of an edge polynomial of slope {}", lead, exp))
        })?;
    }
    Ok(CurveGerm { spec: spec.clone(), comps, n, cap })
}

/// The constraints with every exact component substituted, as polynomials in `(t, v)`.
fn bivariate_equations(spec: &CurveSpec, solve: usize, constraints: &[Poly]) -> Result<Vec<Poly>> {
    let tv = Ring::new(&["t", "v"], spec.ring.field());
    let images = spec
        .comps
        .iter()
        .enumerate()
        .map(|(i, c)| match c {
            CompSpec::Exact(p) => p.to_ring(&tv),
            CompSpec::Solve { .. } => {
                debug_assert_eq!(i, solve);
                Ok(Poly::var(&tv, 1))
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(constraints.iter().map(|g| g.substitute(&tv, &images)).filter(|g| !g.is_zero()).collect())
}

/// `P(c) = Σ a_k c^k` over the terms `t^j v^k` of minimal weight `j + e k`.
#[derive(Clone, Debug)]
struct Edge {
    weight: usize,
    coeffs: Vec<Scalar>,
}

impl Edge {
    fn eval(&self, c: &Scalar) -> Scalar {
        let mut acc = Scalar::zero();
        for a in self.coeffs.iter().rev() {
            acc = &(&acc * c) + a;
        }
        acc
    }

    fn derivative_at(&self, c: &Scalar) -> Scalar {
        let mut acc = Scalar::zero();
        for (k, a) in self.coeffs.iter().enumerate().skip(1).rev() {
            acc = &(&acc * c) + &(a * &Scalar::from_int(k as i64));
        }
        acc
    }

    fn is_simple_root(&self, c: &Scalar) -> bool {
        !c.is_zero() && self.eval(c).is_zero() && !self.derivative_at(c).is_zero()
    }
}

fn edge_polynomial(g: &Poly, e: u32) -> Option<Edge> {
    let weight = g.terms().iter().map(|(m, _)| m.exp(0) + e * m.exp(1)).min()?;
    let kmax = g.terms().iter().map(|(m, _)| m.exp(1)).max()? as usize;
    let mut coeffs = vec![Scalar::zero(); kmax + 1];
    let mut ks = HashSet::new();
    for (m, a) in g.terms() {
        if m.exp(0) + e * m.exp(1) == weight {
            coeffs[m.exp(1) as usize] = &coeffs[m.exp(1) as usize] + a;
            ks.insert(m.exp(1));
        }
    }
    if ks.len() < 2 {
        return None;
    }
    while coeffs.last().is_some_and(|c| c.is_zero()) {
        coeffs.pop();
    }
    Some(Edge { weight: weight as usize, coeffs })
}

/// Order-by-order lift of `v = c t^e + ...` with `G(t, v) = 0`, known below `t^n`.
fn hensel(g: &Poly, edge: &Edge, c: &Scalar, e: u32, n: usize) -> TruncSeries {
    let e = e as usize;
    let dp = edge.derivative_at(c);
    let mut v = vec![Scalar::zero(); n];
    if e < n {
        v[e] = c.clone();
    }
    let len = edge.weight + n;
    for j in 1..n.saturating_sub(e) {
        let comps = [TruncSeries::monomial(Scalar::one(), 1, len), TruncSeries::from_coeffs(v.iter().cloned().chain(std::iter::repeat(Scalar::zero()).take(len - n)).collect())];
        let r = Evaluator::new(&comps, len).eval(g).coeff(edge.weight + j);
        if !r.is_zero() {
            v[e + j] = -(&r / &dp);
        }
    }
    TruncSeries::from_coeffs(v)
}

/// Nonzero simple roots in `Q` and `iQ` of `P`, in increasing (real, imaginary) order.
fn edge_roots(edge: &Edge, field: Field) -> Vec<Scalar> {
    let mut cands: Vec<Scalar> = Vec::new();
    let real = edge.coeffs.iter().all(|a| a.is_real());
    let norm: Vec<Scalar> = if real {
        edge.coeffs.clone()
    } else {
        let conj: Vec<Scalar> = edge.coeffs.iter().map(|a| a.conj()).collect();
        let mut out = vec![Scalar::zero(); edge.coeffs.len() + conj.len() - 1];
        for (i, a) in edge.coeffs.iter().enumerate() {
            for (j, b) in conj.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        out
    };
    let re: Vec<BigRational> = norm.iter().map(|a| a.re.clone()).collect();
    for q in rational_roots(&re) {
        cands.push(Scalar::from_rational(q));
    }
    if field == Field::QI {
        // P(i y) split into real and imaginary parts
        let mut pr = vec![BigRational::zero(); re.len()];
        let mut pi = vec![BigRational::zero(); re.len()];
        for (k, a) in re.iter().enumerate() {
            let sign = if (k / 2) % 2 == 0 { a.clone() } else { -a.clone() };
            if k % 2 == 0 {
                pr[k] = sign;
            } else {
                pi[k] = sign;
            }
        }
        let base = if pr.iter().any(|a| !a.is_zero()) { &pr } else { &pi };
        for y in rational_roots(base) {
            cands.push(Scalar { re: BigRational::zero(), im: y });
        }
    }
    let mut out: Vec<Scalar> = Vec::new();
    for c in cands {
        if edge.is_simple_root(&c) && !out.contains(&c) {
            out.push(c);
        }
    }
    out.sort_by(|a, b| (a.re.clone(), a.im.clone()).cmp(&(b.re.clone(), b.im.clone())));
    out
}

fn divisors(n: &BigInt) -> Option<Vec<BigInt>> {
    let n = n.abs();
    if n.bits() > 40 {
        return None;
    }
    let n = n.to_u64()?;
    let mut out = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(BigInt::from(d));
            if d * d != n {
                out.push(BigInt::from(n / d));
            }
        }
        d += 1;
    }
    Some(out)
}

/// Nonzero rational roots by the rational root theorem (skips huge coefficients).
pub fn rational_roots(coeffs: &[BigRational]) -> Vec<BigRational> {
    let lo = match coeffs.iter().position(|a| !a.is_zero()) {
        Some(i) => i,
        None => return vec![],
    };
    let hi = coeffs.iter().rposition(|a| !a.is_zero()).unwrap();
    if hi == lo {
        return vec![];
    }
    let mut l = BigInt::one();
    for a in &coeffs[lo..=hi] {
        l = l.lcm(a.denom());
    }
    let ints: Vec<BigInt> = coeffs[lo..=hi].iter().map(|a| (a * BigRational::from_integer(l.clone())).to_integer()).collect();
    let (Some(ps), Some(qs)) = (divisors(&ints[0]), divisors(&ints[ints.len() - 1])) else {
        return vec![];
    };
    let mut out = Vec::new();
    for p in &ps {
        for q in &qs {
            for s in [1, -1] {
                let r = BigRational::new(p * BigInt::from(s), q.clone());
                let mut acc = BigRational::zero();
                for a in ints.iter().rev() {
                    acc = acc * &r + BigRational::from_integer(a.clone());
                }
                if acc.is_zero() && !out.contains(&r) {
                    out.push(r);
                }
            }
        }
    }
    out.sort();
    out
}

/// Outcome of a membership test over `k[t]/t^K`.
#[derive(Clone, Debug, PartialEq)]
pub enum Membership {
    Member { tested: usize },
    NotMember(Gap),
    Indeterminate(String),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Gap {
    pub row: usize,
    pub target_order: usize,
    /// Every element of the pulled-back module has order at least this in `row`.
    pub module_order: usize,
    pub module_order_is_bound: bool,
    pub tested: usize,
    /// `ψ` with `ψ(h)` of order `target_order` and `ψ(M) ⊆ t^module_order`.
    pub psi: Option<Vec<TruncSeries>>,
}

fn axpy(v: &mut [TruncSeries], q: &TruncSeries, w: &[TruncSeries], k: usize) {
    for (a, b) in v.iter_mut().zip(w) {
        if b.is_zero() || q.is_zero() {
            continue;
        }
        *a = a.sub(&q.mul(b, k)).truncate(k);
    }
}

/// Is `h ∈ span_{k[[t]]}(gens)` (or `t * span` when strict)? `NotMember` is exact.
pub fn dvr_membership(h: &[TruncSeries], gens: &[Vec<TruncSeries>], strict: bool, guard: usize) -> Membership {
    let shift = usize::from(strict);
    let min_prec = h
        .iter()
        .map(|s| s.prec())
        .chain(gens.iter().flat_map(|g| g.iter().map(|s| s.prec() + shift)))
        .min()
        .unwrap_or(0);
    if min_prec <= guard {
        return Membership::Indeterminate(format!("precision {} does not exceed the guard {}", min_prec, guard));
    }
    let k = min_prec - guard;
    let rows = h.len();
    let mut hv: Vec<TruncSeries> = h.iter().map(|s| s.truncate(k)).collect();
    let mut gv: Vec<Vec<TruncSeries>> = gens.iter().map(|g| g.iter().map(|s| s.shift(shift).truncate(k)).collect()).collect();
    let mut used = vec![false; gv.len()];
    let mut pivoted = vec![false; rows];
    let mut pivots: Vec<(usize, Vec<TruncSeries>)> = Vec::new();
    loop {
        let mut best: Option<(usize, usize, usize)> = None;
        for i in (0..rows).filter(|&i| !pivoted[i]) {
            for (s, g) in gv.iter().enumerate().filter(|(s, _)| !used[*s]) {
                if let Some(o) = g[i].ord() {
                    if best.is_none_or(|(bo, _, _)| o < bo) {
                        best = Some((o, i, s));
                    }
                }
            }
        }
        let bound = best.map_or(k, |b| b.0);
        let low = (0..rows).filter(|&r| !pivoted[r]).filter_map(|r| hv[r].ord().map(|o| (o, r))).min();
        if let Some((o, r)) = low {
            if o < bound {
                let psi = covector(&pivots, r, rows, k);
                return Membership::NotMember(Gap {
                    row: r,
                    target_order: o,
                    module_order: bound,
                    module_order_is_bound: best.is_none(),
                    tested: k,
                    psi,
                });
            }
        }
        let Some((_, i, s)) = best else {
            return Membership::Member { tested: k };
        };
        let pv = gv[s].clone();
        if let Some(q) = hv[i].div(&pv[i]) {
            axpy(&mut hv, &q, &pv, k);
        }
        for (s2, g) in gv.iter_mut().enumerate() {
            if s2 == s || used[s2] {
                continue;
            }
            if let Some(q) = g[i].div(&pv[i]) {
                axpy(g, &q, &pv, k);
            }
        }
        used[s] = true;
        pivoted[i] = true;
        pivots.push((i, pv));
    }
}

/// `ψ = e_r - Σ λ_s e_(i_s)` annihilating every pivot vector.
fn covector(pivots: &[(usize, Vec<TruncSeries>)], r: usize, rows: usize, k: usize) -> Option<Vec<TruncSeries>> {
    let mut lambda: Vec<TruncSeries> = vec![TruncSeries::zero(k); pivots.len()];
    for s in (0..pivots.len()).rev() {
        let (is, v) = &pivots[s];
        let mut num = v[r].clone();
        for t in s + 1..pivots.len() {
            let it = pivots[t].0;
            num = num.sub(&lambda[t].mul(&v[it], k)).truncate(k);
        }
        lambda[s] = num.div(&v[*is])?;
    }
    let mut psi = vec![TruncSeries::zero(k); rows];
    psi[r] = TruncSeries::constant(Scalar::one(), k);
    for (s, (is, _)) in pivots.iter().enumerate() {
        psi[*is] = lambda[s].neg();
    }
    Some(psi)
}

/// Generic rank over `k((t))` of a matrix of series (rows are vectors).
pub fn series_rank(rows: &[Vec<TruncSeries>]) -> usize {
    let Some(first) = rows.first() else { return 0 };
    let k = rows.iter().flat_map(|r| r.iter().map(|s| s.prec())).min().unwrap_or(0);
    let cols = first.len();
    let mut m: Vec<Vec<TruncSeries>> = rows.iter().map(|r| r.iter().map(|s| s.truncate(k)).collect()).collect();
    let mut used = vec![false; m.len()];
    let mut rank = 0;
    let mut done = vec![false; cols];
    loop {
        let mut best: Option<(usize, usize, usize)> = None;
        for c in (0..cols).filter(|&c| !done[c]) {
            for (s, r) in m.iter().enumerate().filter(|(s, _)| !used[*s]) {
                if let Some(o) = r[c].ord() {
                    if best.is_none_or(|(bo, _, _)| o < bo) {
                        best = Some((o, c, s));
                    }
                }
            }
        }
        let Some((_, c, s)) = best else { return rank };
        let pv = m[s].clone();
        for (s2, r) in m.iter_mut().enumerate() {
            if s2 != s && !used[s2] {
                if let Some(q) = r[c].div(&pv[c]) {
                    axpy(r, &q, &pv, k);
                }
            }
        }
        used[s] = true;
        done[c] = true;
        rank += 1;
    }
}

fn dot(a: &[TruncSeries], b: &[TruncSeries], cap: usize) -> TruncSeries {
    let mut acc: Option<TruncSeries> = None;
    for (x, y) in a.iter().zip(b) {
        let p = x.mul(y, cap);
        acc = Some(match acc {
            None => p,
            Some(s) => s.add(&p),
        });
    }
    acc.unwrap_or_else(|| TruncSeries::zero(cap))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum Distance {
    Finite(i64),
    #[serde(serialize_with = "ser_infinite")]
    Infinite,
    #[serde(serialize_with = "ser_indeterminate")]
    Indeterminate,
}

fn ser_infinite<S: serde::Serializer>(s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str("INFINITE")
}

fn ser_indeterminate<S: serde::Serializer>(s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str("INDETERMINATE")
}

/// `min ord ω(v_small) - min ord ω(v_all)`.
pub fn order_of_distance(omega: &[TruncSeries], v_small: &[Vec<TruncSeries>], v_all: &[Vec<TruncSeries>]) -> Distance {
    let cap = omega.iter().map(|s| s.prec()).max().unwrap_or(0) * 2;
    let min_ord = |vs: &[Vec<TruncSeries>]| vs.iter().filter_map(|v| dot(omega, v, cap).ord()).min();
    let Some(all) = min_ord(v_all) else {
        return Distance::Indeterminate;
    };
    match min_ord(v_small) {
        None => Distance::Infinite,
        Some(small) => Distance::Finite(small as i64 - all as i64),
    }
}

/// Standard basis vectors `e_1..e_m` as exact series.
pub fn unit_vectors(m: usize, prec: usize) -> Vec<Vec<TruncSeries>> {
    (0..m)
        .map(|i| (0..m).map(|j| TruncSeries::constant(if i == j { Scalar::one() } else { Scalar::zero() }, prec)).collect())
        .collect()
}

/// `v_i = ∂/∂x_i + Σ_j ∂f_j/∂x_i(x(t)) ∂/∂y_j` spanning `T_(b(t))P`, in ring coordinates.
pub fn transversal_tangent_basis(germ: &MapGerm, f: &Transversal, phi: &CurveGerm) -> Vec<Vec<TruncSeries>> {
    let m = germ.ring.nvars();
    let mut ev = Evaluator::new(&phi.comps, phi.cap);
    germ.x
        .iter()
        .map(|&xi| {
            let mut v = vec![TruncSeries::zero(phi.cap); m];
            v[xi] = TruncSeries::constant(Scalar::one(), phi.cap);
            for (j, &yj) in germ.y.iter().enumerate() {
                v[yj] = ev.eval(&f.comps[j].partial_derivative(xi));
            }
            v
        })
        .collect()
}

/// `ω = ψ · dF∘φ` as a covector on the ambient space.
pub fn omega(germ: &MapGerm, psi: &[TruncSeries], phi: &CurveGerm) -> Vec<TruncSeries> {
    let mut ev = Evaluator::new(&phi.comps, phi.cap);
    let cap = phi.cap;
    (0..germ.ring.nvars())
        .map(|v| {
            let col: Vec<TruncSeries> = germ.comps.iter().map(|c| ev.eval(&c.partial_derivative(v))).collect();
            dot(psi, &col, cap)
        })
        .collect()
}

/// Lowest-order coefficient vector of a covector, i.e. the limit of `ker ω(t)`.
pub fn limit_hyperplane(omega: &[TruncSeries]) -> Option<(usize, Vec<Scalar>)> {
    let m = omega.iter().filter_map(|s| s.ord()).min()?;
    Some((m, omega.iter().map(|s| s.coeff(m)).collect()))
}

pub fn hyperplane_text(ring: &Arc<Ring>, v: &[Scalar]) -> String {
    let lin = Poly::from_terms(ring, v.iter().enumerate().map(|(i, c)| (Mono::var(ring.nvars(), i), c.clone())).collect());
    let lead = lin.leading().map(|(_, c)| c.clone()).unwrap_or_else(Scalar::one);
    format!("{} = 0", lin.scale(&lead.inv()))
}

/// Replayable certificate that a condition fails along an arc.
#[derive(Clone, Debug, Serialize)]
pub struct Witness {
    pub condition: String,
    pub generator: String,
    pub generator_index: usize,
    pub curve: String,
    pub n: usize,
    pub strict: bool,
    pub row: usize,
    pub target_order: usize,
    pub module_order: usize,
    pub module_order_is_bound: bool,
    pub tested_order: usize,
    pub hyperplane: Option<String>,
    pub hyperplane_order: Option<usize>,
    pub omega_leading: Option<Vec<String>>,
    pub rank: Option<usize>,
}

#[derive(Clone, Debug)]
pub enum CurveCheck {
    Pass { tested: usize },
    Refuted(Box<Witness>),
    Indeterminate(String),
}

pub fn on_variety(phi: &CurveGerm, constraints: &[Poly], guard: usize) -> bool {
    let mut ev = Evaluator::new(&phi.comps, phi.cap);
    constraints.iter().all(|g| {
        let s = ev.eval(g);
        s.is_zero() && s.prec() + guard >= phi.n
    })
}

/// Tests every left-hand generator against the pulled-back right-hand side.
pub fn check_condition_on_curve(cm: &ConditionModules, phi: &CurveGerm, guard: usize) -> Result<CurveCheck> {
    if !on_variety(phi, &cm.lhs.quotient, guard) {
        return Err(Error::NotOnVariety(phi.text()));
    }
    let strict = cm.flavor == Flavor::Strict;
    let rhs: Vec<Vec<TruncSeries>> = cm.rhs.gens.iter().map(|g| pullback_vec(phi, g)).collect();
    let mut indeterminate = None;
    let mut tested = usize::MAX;
    for (gi, g) in cm.lhs.gens.iter().enumerate() {
        let h = pullback_vec(phi, g);
        match dvr_membership(&h, &rhs, strict, guard) {
            Membership::Member { tested: k } => tested = tested.min(k),
            Membership::Indeterminate(why) => indeterminate = Some(why),
            Membership::NotMember(gap) => {
                return Ok(CurveCheck::Refuted(Box::new(witness(cm, phi, gi, gap, strict))));
            }
        }
    }
    Ok(match indeterminate {
        Some(why) => CurveCheck::Indeterminate(why),
        None => CurveCheck::Pass { tested: if tested == usize::MAX { phi.cap } else { tested } },
    })
}

fn witness(cm: &ConditionModules, phi: &CurveGerm, gi: usize, gap: Gap, strict: bool) -> Witness {
    let mut w = Witness {
        condition: cm.id.clone(),
        generator: cm.lhs_labels.get(gi).cloned().unwrap_or_else(|| format!("#{}", gi)),
        generator_index: gi,
        curve: phi.text(),
        n: phi.n,
        strict,
        row: gap.row,
        target_order: gap.target_order,
        module_order: gap.module_order,
        module_order_is_bound: gap.module_order_is_bound,
        tested_order: gap.tested,
        hyperplane: None,
        hyperplane_order: None,
        omega_leading: None,
        rank: None,
    };
    if let Some(germ) = &cm.germ {
        let rows: Vec<Vec<TruncSeries>> = {
            let mut ev = Evaluator::new(&phi.comps, phi.cap);
            germ.comps.iter().map(|c| (0..germ.ring.nvars()).map(|v| ev.eval(&c.partial_derivative(v))).collect()).collect()
        };
        w.rank = Some(series_rank(&rows));
        if let Some(psi) = &gap.psi {
            let om = omega(germ, psi, phi);
            if let Some((o, v)) = limit_hyperplane(&om) {
                w.hyperplane = Some(hyperplane_text(&germ.ring, &v));
                w.hyperplane_order = Some(o);
                w.omega_leading = Some(
                    om.iter()
                        .enumerate()
                        .map(|(i, s)| match s.leading() {
                            Some((e, c)) => format!("{}: {}", germ.ring.name(i), TruncSeries::monomial(c.clone(), e, e + 1).to_poly_string("t")),
                            None => format!("{}: 0", germ.ring.name(i)),
                        })
                        .collect(),
                );
            }
        }
    }
    w
}

/// Coefficient strategy and size of a finite curve family.
#[derive(Clone, Debug)]
pub struct FamilySpec {
    pub e_max: u32,
    pub n: usize,
    pub guard: usize,
    pub monomial: bool,
    pub solve: bool,
    /// Extra random arcs with up to `terms` terms per component.
    pub sampled: usize,
    pub terms: usize,
    pub skeletons: Vec<CurveSpec>,
    pub limit: usize,
    pub seed: u64,
}

impl Default for FamilySpec {
    fn default() -> FamilySpec {
        FamilySpec {
            e_max: DEFAULT_E,
            n: DEFAULT_N,
            guard: DEFAULT_GUARD,
            monomial: true,
            solve: true,
            sampled: 0,
            terms: 2,
            skeletons: vec![],
            limit: 20000,
            seed: crate::rng::DEFAULT_SEED,
        }
    }
}

/// Exponent vectors in `{0..=e}^m`, ordered by total then lexicographically; excludes all-zero.
pub fn exponent_vectors(m: usize, e: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; m];
    loop {
        if cur.iter().any(|&x| x > 0) {
            out.push(cur.clone());
        }
        let mut i = m;
        loop {
            if i == 0 {
                out.sort_by(|a, b| (a.iter().sum::<u32>(), a).cmp(&(b.iter().sum::<u32>(), b)));
                return out;
            }
            i -= 1;
            if cur[i] < e {
                cur[i] += 1;
                break;
            }
            cur[i] = 0;
        }
    }
}

/// Arcs solved from `constraints` with the given skeleton for every variable but `solve`.
pub fn solved_curves(ring: &Arc<Ring>, constraints: &[Poly], skeleton: &[u32], solve: usize) -> Vec<CurveSpec> {
    let mut spec = CurveSpec::monomial(ring, skeleton, None);
    spec.comps[solve] = CompSpec::Solve { lead: Scalar::one(), exp: 1 };
    let Ok(eqs) = bivariate_equations(&spec, solve, constraints) else {
        return vec![];
    };
    let Some(g) = eqs.first() else {
        return vec![];
    };
    let maxj = g.terms().iter().map(|(m, _)| m.exp(0)).max().unwrap_or(0);
    let mut out = Vec::new();
    for e in 1..=maxj.max(1) {
        if let Some(edge) = edge_polynomial(g, e) {
            for c in edge_roots(&edge, ring.field()) {
                let mut s = spec.clone();
                s.comps[solve] = CompSpec::Solve { lead: c, exp: e };
                out.push(s);
            }
        }
    }
    out
}

#[derive(Clone, Debug)]
pub enum RefuteOutcome {
    Refuted(Box<Witness>),
    NoWitnessFound { probed: usize, on_variety: usize, indeterminate: usize },
}

/// Walks the family in a fixed order; the first refuting arc wins.
pub fn refute(cm: &ConditionModules, fam: &FamilySpec) -> RefuteOutcome {
    let ring = cm.ring().clone();
    let constraints = cm.lhs.quotient.clone();
    let mut seen: HashSet<String> = HashSet::new();
    let (mut probed, mut onv, mut indet) = (0usize, 0usize, 0usize);
    let mut visit = |spec: CurveSpec, probed: &mut usize, onv: &mut usize, indet: &mut usize| -> Option<Box<Witness>> {
        if *probed >= fam.limit || !seen.insert(spec.text()) {
            return None;
        }
        *probed += 1;
        let phi = realize(&spec, &constraints, fam.n).ok()?;
        if phi.is_constant() || !on_variety(&phi, &constraints, fam.guard) {
            return None;
        }
        *onv += 1;
        match check_condition_on_curve(cm, &phi, fam.guard) {
            Ok(CurveCheck::Refuted(w)) => Some(w),
            Ok(CurveCheck::Indeterminate(_)) => {
                *indet += 1;
                None
            }
            _ => None,
        }
    };
    for s in &fam.skeletons {
        if let Some(w) = visit(s.clone(), &mut probed, &mut onv, &mut indet) {
            return RefuteOutcome::Refuted(w);
        }
    }
    let m = ring.nvars();
    if fam.monomial {
        for exps in exponent_vectors(m, fam.e_max) {
            if let Some(w) = visit(CurveSpec::monomial(&ring, &exps, None), &mut probed, &mut onv, &mut indet) {
                return RefuteOutcome::Refuted(w);
            }
        }
    }
    if fam.solve && !constraints.is_empty() {
        let others = if m > 1 { exponent_vectors(m - 1, fam.e_max) } else { vec![vec![]] };
        for solve in 0..m {
            for sk in &others {
                let mut exps = sk.clone();
                exps.insert(solve, 0);
                for spec in solved_curves(&ring, &constraints, &exps, solve) {
                    if let Some(w) = visit(spec, &mut probed, &mut onv, &mut indet) {
                        return RefuteOutcome::Refuted(w);
                    }
                }
            }
        }
    }
    if fam.sampled > 0 {
        let mut rng = RationalStream::derived(fam.seed, "curves");
        let t = t_ring(ring.field());
        for _ in 0..fam.sampled {
            let comps = (0..m)
                .map(|_| {
                    let mut p = Poly::zero(&t);
                    for _ in 0..fam.terms.max(1) {
                        let e = rng.next_int().re.numer().to_u32().unwrap_or(1) % fam.e_max.max(1) + 1;
                        p = &p + &Poly::monomial(&t, Mono::from_exps(&[e]), rng.next());
                    }
                    CompSpec::Exact(p)
                })
                .collect();
            if let Some(w) = visit(CurveSpec { ring: ring.clone(), comps }, &mut probed, &mut onv, &mut indet) {
                return RefuteOutcome::Refuted(w);
            }
        }
    }
    RefuteOutcome::NoWitnessFound { probed, on_variety: onv, indeterminate: indet }
}

/// Re-runs a witness at truncation `n`; `Some(w)` when the arc still refutes.
pub fn replay(cm: &ConditionModules, curve: &str, n: usize, guard: usize) -> Result<Option<Witness>> {
    let spec = CurveSpec::parse(curve, cm.ring())?;
    let phi = realize(&spec, &cm.lhs.quotient, n)?;
    match check_condition_on_curve(cm, &phi, guard)? {
        CurveCheck::Refuted(w) => Ok(Some(*w)),
        _ => Ok(None),
    }
}

/// Tangent line of `φ` lies in the plane cut out by the linear forms.
pub fn tangent_in_plane(phi: &CurveGerm, plane: &[Poly]) -> Result<bool> {
    let o = phi.ord().ok_or_else(|| Error::Precondition("zero curve has no tangent".into()))?;
    Ok(plane.iter().all(|l| pullback(phi, l).ord().is_none_or(|k| k > o)))
}

/// `ord(y - f(x)) > r * ord(x)` along `φ`.
pub fn contact_order(germ: &MapGerm, phi: &CurveGerm, f: &Transversal, r: u32) -> Result<bool> {
    let ox = phi.ord_of(&germ.x).ok_or_else(|| Error::Precondition("x(t) vanishes identically".into()))?;
    let gaps: Vec<Option<usize>> = germ
        .y
        .iter()
        .zip(&f.comps)
        .map(|(&y, fj)| pullback(phi, &(&Poly::var(&germ.ring, y) - fj)).ord())
        .collect();
    Ok(gaps.iter().all(|g| g.is_none_or(|o| o > r as usize * ox)))
}

/// Exact feasibility of `Σ λ_g a_g <= α`, `Σ λ_g = 1`, `λ >= 0` (phase-one simplex, Bland's rule).
fn in_newton_polyhedron(gens: &[Vec<i64>], alpha: &[i64]) -> bool {
    let n = alpha.len();
    let m = gens.len();
    let cols = m + n + 1;
    let rows = n + 1;
    let q = |v: i64| BigRational::from_integer(BigInt::from(v));
    let mut t: Vec<Vec<BigRational>> = vec![vec![BigRational::zero(); cols + 1]; rows];
    for i in 0..n {
        for (g, a) in gens.iter().enumerate() {
            t[i][g] = q(a[i]);
        }
        t[i][m + i] = BigRational::one();
        t[i][cols] = q(alpha[i]);
    }
    for g in 0..m {
        t[n][g] = BigRational::one();
    }
    t[n][m + n] = BigRational::one();
    t[n][cols] = BigRational::one();
    let mut basis: Vec<usize> = (m..m + n + 1).collect();
    // objective: minimise the artificial; reduced costs r_j = row n entries for j < m+n
    loop {
        let enter = (0..m + n).find(|&j| t[n][j].is_positive() && !basis.contains(&j));
        let Some(j) = enter else { break };
        let mut leave: Option<(BigRational, usize, usize)> = None;
        for (i, row) in t.iter().enumerate() {
            if row[j].is_positive() {
                let ratio = &row[cols] / &row[j];
                let better = match &leave {
                    None => true,
                    Some((r, _, b)) => ratio < *r || (ratio == *r && basis[i] < *b),
                };
                if better {
                    leave = Some((ratio, i, basis[i]));
                }
            }
        }
        let Some((_, i, _)) = leave else { break };
        let piv = t[i][j].clone();
        for c in 0..=cols {
            t[i][c] = &t[i][c] / &piv;
        }
        for r in 0..rows {
            if r != i && !t[r][j].is_zero() {
                let f = t[r][j].clone();
                for c in 0..=cols {
                    let d = &f * &t[i][c];
                    t[r][c] = &t[r][c] - &d;
                }
            }
        }
        basis[i] = j;
        if !basis.contains(&(m + n)) {
            return true;
        }
    }
    match basis.iter().position(|&b| b == m + n) {
        None => true,
        Some(i) => t[i][cols].is_zero(),
    }
}

/// Integral closure of a monomial ideal: minimal monomials in the Newton polyhedron.
pub fn monomial_closure(gens: &[Poly]) -> Result<Vec<Poly>> {
    let ring = gens.first().map(|g| g.ring().clone()).ok_or_else(|| Error::Precondition("empty ideal".into()))?;
    let n = ring.nvars();
    let mut exps: Vec<Vec<i64>> = Vec::new();
    for g in gens {
        if !g.is_monomial() {
            return Err(Error::Precondition(format!("`{}` is not a monomial", g)));
        }
        let m = &g.terms()[0].0;
        exps.push((0..n).map(|i| m.exp(i) as i64).collect());
    }
    let maxes: Vec<i64> = (0..n).map(|i| exps.iter().map(|e| e[i]).max().unwrap_or(0)).collect();
    let mut inside: Vec<Vec<i64>> = Vec::new();
    let mut cur = vec![0i64; n];
    loop {
        if in_newton_polyhedron(&exps, &cur) {
            inside.push(cur.clone());
        }
        let mut i = n;
        loop {
            if i == 0 {
                let minimal: Vec<&Vec<i64>> = inside
                    .iter()
                    .filter(|a| !inside.iter().any(|b| b != *a && b.iter().zip(a.iter()).all(|(x, y)| x <= y)))
                    .collect();
                let mut out: Vec<Poly> = minimal
                    .into_iter()
                    .map(|a| {
                        let e: Vec<u32> = a.iter().map(|&x| x as u32).collect();
                        Poly::monomial(&ring, Mono::from_exps(&e), Scalar::one())
                    })
                    .collect();
                out.sort_by(|a, b| b.terms()[0].0.cmp(&a.terms()[0].0));
                return Ok(out);
            }
            i -= 1;
            if cur[i] < maxes[i] {
                cur[i] += 1;
                break;
            }
            cur[i] = 0;
        }
    }
}

/// Does the monomial `h` lie in the integral closure of the monomial ideal?
pub fn in_monomial_closure(h: &Poly, gens: &[Poly]) -> bool {
    let n = h.ring().nvars();
    let e = |p: &Poly| -> Vec<i64> { (0..n).map(|i| p.terms()[0].0.exp(i) as i64).collect() };
    let exps: Vec<Vec<i64>> = gens.iter().map(e).collect();
    in_newton_polyhedron(&exps, &e(h))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jacobian::jm;
    use crate::localstd::Submodule;

    fn ser(v: &[i64], prec: usize) -> TruncSeries {
        let mut c: Vec<Scalar> = v.iter().map(|&a| Scalar::from_int(a)).collect();
        c.resize(prec, Scalar::zero());
        TruncSeries::from_coeffs(c)
    }

    fn curve(ring: &Arc<Ring>, text: &str) -> CurveGerm {
        realize(&CurveSpec::parse(text, ring).unwrap(), &[], DEFAULT_N).unwrap()
    }

    #[test]
    fn pullback_examples() {
        let r = Ring::new(&["x", "y"], Field::Q);
        let phi = curve(&r, "x = t^2; y = t^3");
        let s = pullback(&phi, &parse("x^2+y^2", &r).unwrap());
        assert_eq!(s.to_poly_string("t"), "t^4 + t^6");
        let rq = Ring::new(&["x", "y"], Field::QI);
        let phi = curve(&rq, "x = t; y = i*t");
        assert!(pullback(&phi, &parse("x^2+y^2", &rq).unwrap()).is_zero());
        let zero = curve(&r, "");
        assert_eq!(pullback(&zero, &parse("x + 3", &r).unwrap()).coeff(0), Scalar::from_int(3));
    }

    #[test]
    fn membership_examples() {
        let m = dvr_membership(&[ser(&[0, 0, 1], 20)], &[vec![ser(&[0, 0, 2], 20)]], false, 4);
        assert!(matches!(m, Membership::Member { .. }));
        match dvr_membership(&[ser(&[0, 1], 20)], &[vec![ser(&[0], 20)]], false, 4) {
            Membership::NotMember(g) => assert_eq!((g.target_order, g.module_order_is_bound), (1, true)),
            other => panic!("{:?}", other),
        }
        match dvr_membership(&[ser(&[0, 0, 0, 1], 20)], &[vec![ser(&[0, 0, 0, 1], 20)]], true, 4) {
            Membership::NotMember(g) => assert_eq!((g.target_order, g.module_order), (3, 4)),
            other => panic!("{:?}", other),
        }
    }

    #[test]
    fn module_membership_and_covector() {
        // h = (t, t^2) against (t^2, 0), (t, t^3): not a member since h - (t,t^3) = (0, t^2 - t^3)
        let h = vec![ser(&[0, 1], 30), ser(&[0, 0, 1], 30)];
        let g1 = vec![ser(&[0, 0, 1], 30), ser(&[0], 30)];
        let g2 = vec![ser(&[0, 1], 30), ser(&[0, 0, 0, 1], 30)];
        match dvr_membership(&h, &[g1.clone(), g2.clone()], false, 4) {
            Membership::NotMember(g) => {
                assert_eq!((g.row, g.target_order), (1, 2));
                let psi = g.psi.unwrap();
                let cap = 60;
                assert!(dot(&psi, &g1, cap).val() >= g.module_order);
                assert!(dot(&psi, &g2, cap).truncate(g.tested).is_zero());
                assert_eq!(dot(&psi, &h, cap).ord(), Some(2));
            }
            other => panic!("{:?}", other),
        }
    }

    #[test]
    fn distance_orders() {
        let om = vec![ser(&[0, 0, 0, 0, -3], 30), ser(&[0, 0, 0, 2], 30)];
        let small = vec![vec![ser(&[0], 30), ser(&[1], 30)]];
        assert_eq!(order_of_distance(&om, &small, &unit_vectors(2, 30)), Distance::Finite(0));
        let om = vec![ser(&[0], 30), ser(&[1], 30)];
        let small = vec![vec![ser(&[1], 30), ser(&[0], 30)]];
        assert_eq!(order_of_distance(&om, &small, &unit_vectors(2, 30)), Distance::Infinite);
        let shifted: Vec<TruncSeries> = om.iter().map(|s| s.shift(5)).collect();
        assert_eq!(order_of_distance(&shifted, &small, &unit_vectors(2, 30)), Distance::Infinite);
    }

    #[test]
    fn closure_of_monomial_ideals() {
        let r = Ring::new(&["x", "y"], Field::Q);
        let p = |s: &str| parse(s, &r).unwrap();
        let show = |v: Vec<Poly>| v.iter().map(|p| p.to_string()).collect::<Vec<_>>();
        assert_eq!(show(monomial_closure(&[p("x^2"), p("y^2")]).unwrap()), vec!["x^2", "x*y", "y^2"]);
        assert_eq!(show(monomial_closure(&[p("x^3"), p("y^3")]).unwrap()), vec!["x^3", "x^2*y", "x*y^2", "y^3"]);
        assert_eq!(show(monomial_closure(&[p("x")]).unwrap()), vec!["x"]);
        assert!(monomial_closure(&[p("x + y")]).is_err());
    }

    #[test]
    fn tangent_and_contact() {
        let r = Ring::new(&["x", "y"], Field::Q);
        let yeq = vec![parse("y", &r).unwrap()];
        assert!(tangent_in_plane(&curve(&r, "x = t; y = t^2"), &yeq).unwrap());
        assert!(!tangent_in_plane(&curve(&r, "x = t; y = t"), &yeq).unwrap());
        let xeq = vec![parse("x", &r).unwrap()];
        assert!(!tangent_in_plane(&curve(&r, "x = t^2; y = t^3"), &xeq).unwrap());
        let germ = MapGerm::from_names(&r, &["x"], &["y"], vec![parse("y", &r).unwrap()]).unwrap();
        let f = Transversal::new(&germ, vec![parse("x^2", &r).unwrap()]).unwrap();
        assert!(contact_order(&germ, &curve(&r, "x = t; y = t^2"), &f, 2).unwrap());
        let phi = curve(&r, "x = t; y = t^2 + t^3");
        assert!(contact_order(&germ, &phi, &f, 2).unwrap());
        assert!(!contact_order(&germ, &phi, &f, 3).unwrap());
        assert!(contact_order(&germ, &phi, &Transversal::zero(&germ), 0).unwrap());
    }

    #[test]
    fn solver_finds_gaussian_branch() {
        let r = Ring::new(&["x", "y"], Field::QI);
        let g = parse("x^2 + y^2", &r).unwrap();
        let specs = solved_curves(&r, &[g.clone()], &[1, 0], 1);
        let texts: Vec<String> = specs.iter().map(|s| s.text()).collect();
        assert_eq!(texts, vec!["x = t; y = solve(-i*t)", "x = t; y = solve(i*t)"]);
        let phi = realize(&specs[1], &[g.clone()], 20).unwrap();
        assert!(on_variety(&phi, &[g], 4));
    }

    #[test]
    fn solver_lifts_past_leading_term() {
        let r = Ring::new(&["z", "w"], Field::Q);
        let g = parse("z^4 + w^5 + z^6", &r).unwrap();
        let spec = CurveSpec::parse("z = t^5; w = solve(-t^4)", &r).unwrap();
        let phi = realize(&spec, &[g.clone()], 30).unwrap();
        assert_eq!(phi.comps[1].coeff(4), Scalar::from_int(-1));
        assert!(!phi.comps[1].coeff(14).is_zero());
        let s = pullback(&phi, &g);
        assert!(s.is_zero() && s.prec() >= 30);
    }

    #[test]
    fn rational_root_theorem() {
        let q = |a: i64, b: i64| BigRational::new(a.into(), b.into());
        // 6c^2 - c - 1 = (3c + 1)(2c - 1)
        assert_eq!(rational_roots(&[q(-1, 1), q(-1, 1), q(6, 1)]), vec![q(-1, 3), q(1, 2)]);
        assert!(rational_roots(&[q(1, 1), q(0, 1), q(1, 1)]).is_empty());
    }

    #[test]
    fn whitney_a_style_strict_refutation() {
        // cusp: ∂F/∂y for F = y^2 - x^3 is not strictly dependent on JM along (t^2, t^3)
        let r = Ring::new(&["x", "y"], Field::Q);
        let germ = MapGerm::from_names(&r, &["x"], &["y"], vec![parse("y^2 - x^3", &r).unwrap()]).unwrap();
        let j = jm(&germ);
        let lhs = Submodule { ring: r.clone(), rank: 1, gens: vec![germ.column(1)], quotient: germ.comps.clone() };
        let cm = ConditionModules {
            lhs,
            rhs: j,
            flavor: Flavor::Strict,
            id: "strict".into(),
            lhs_labels: vec!["dF/dy".into()],
            germ: Some(germ.clone()),
            transversal: None,
        };
        let phi = realize(&CurveSpec::parse("x = t^2; y = t^3", &r).unwrap(), &germ.comps, 40).unwrap();
        match check_condition_on_curve(&cm, &phi, 8).unwrap() {
            CurveCheck::Refuted(w) => {
                assert_eq!((w.target_order, w.module_order), (3, 4));
                assert_eq!(w.hyperplane.as_deref(), Some("y = 0"));
            }
            other => panic!("{:?}", other),
        }
    }
}
