//! Standard bases of submodules of `O^p` over the local ring at the origin (Mora normal form),
//! colength and Fitting ideals.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::poly::{monomials_of_degree, same_ring, Mono, Poly, Ring};
use crate::scalar::Scalar;

pub const DEFAULT_BOUND: u32 = 20;

pub type ModuleVec = Vec<Poly>;

/// Submodule of `O^p`, taken modulo `quotient * O^p`.
#[derive(Clone, Debug)]
pub struct Submodule {
    pub ring: Arc<Ring>,
    pub rank: usize,
    pub gens: Vec<ModuleVec>,
    pub quotient: Vec<Poly>,
}

impl Submodule {
    pub fn new(ring: &Arc<Ring>, rank: usize, gens: Vec<ModuleVec>, quotient: Vec<Poly>) -> Result<Submodule> {
        if rank == 0 {
            return Err(Error::Dimension("module rank must be at least 1".into()));
        }
        for g in &gens {
            if g.len() != rank {
                return Err(Error::Dimension(format!("generator of length {} in rank {}", g.len(), rank)));
            }
            if g.iter().any(|p| !same_ring(p.ring(), ring)) {
                return Err(Error::Dimension("generator over a different ring".into()));
            }
        }
        if quotient.iter().any(|p| !same_ring(p.ring(), ring)) {
            return Err(Error::Dimension("quotient ideal over a different ring".into()));
        }
        Ok(Submodule { ring: ring.clone(), rank, gens, quotient })
    }

    /// Ideal: rank-1 module.
    pub fn ideal(ring: &Arc<Ring>, gens: Vec<Poly>, quotient: Vec<Poly>) -> Submodule {
        Submodule { ring: ring.clone(), rank: 1, gens: gens.into_iter().map(|g| vec![g]).collect(), quotient }
    }

    pub fn with_quotient(mut self, q: Vec<Poly>) -> Submodule {
        self.quotient = q;
        self
    }

    /// Generators including `q * e_i` for every quotient element.
    pub fn lifted_generators(&self) -> Vec<ModuleVec> {
        let mut out: Vec<ModuleVec> = self.gens.iter().filter(|g| g.iter().any(|p| !p.is_zero())).cloned().collect();
        for q in &self.quotient {
            if q.is_zero() {
                continue;
            }
            for i in 0..self.rank {
                let mut v = vec![Poly::zero(&self.ring); self.rank];
                v[i] = q.clone();
                out.push(v);
            }
        }
        out
    }
}

/// Module element as a sorted term list, position-over-term.
#[derive(Clone, Debug, PartialEq)]
pub(crate) struct Vt {
    terms: Vec<(u32, Mono, Scalar)>,
}

fn cmp_pot(a: &(u32, Mono, Scalar), b: &(u32, Mono, Scalar)) -> Ordering {
    b.0.cmp(&a.0).then_with(|| a.1.cmp_local(&b.1))
}

impl Vt {
    fn from_vec(v: &ModuleVec, bound: Option<u32>) -> Vt {
        let mut terms = Vec::new();
        for (i, p) in v.iter().enumerate() {
            for (m, c) in p.terms() {
                if bound.map_or(true, |b| m.deg() <= b) {
                    terms.push((i as u32, m.clone(), c.clone()));
                }
            }
        }
        terms.sort_by(|a, b| cmp_pot(b, a));
        Vt { terms }
    }

    fn to_vec(&self, ring: &Arc<Ring>, rank: usize) -> ModuleVec {
        let mut parts: Vec<Vec<(Mono, Scalar)>> = vec![Vec::new(); rank];
        for (i, m, c) in &self.terms {
            parts[*i as usize].push((m.clone(), c.clone()));
        }
        parts.into_iter().map(|t| Poly::from_terms(ring, t)).collect()
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn lead(&self) -> &(u32, Mono, Scalar) {
        &self.terms[0]
    }

    fn max_deg(&self) -> u32 {
        self.terms.iter().map(|t| t.1.deg()).max().unwrap_or(0)
    }

    fn ecart(&self) -> u32 {
        self.max_deg() - self.lead().1.deg()
    }

    /// `self - c * m * o`, dropping terms of degree above `bound`.
    fn sub_mul(&self, c: &Scalar, m: &Mono, o: &Vt, bound: Option<u32>, dropped: &mut bool) -> Vt {
        let keep = |mono: &Mono| bound.map_or(true, |b| mono.deg() <= b);
        let mut out = Vec::with_capacity(self.terms.len() + o.terms.len());
        let mut i = 0;
        let mut j = 0;
        let shifted = |t: &(u32, Mono, Scalar)| (t.0, t.1.mul(m), &t.2 * c);
        let mut next_o: Option<(u32, Mono, Scalar)> = None;
        loop {
            if next_o.is_none() {
                while j < o.terms.len() {
                    let t = shifted(&o.terms[j]);
                    j += 1;
                    if keep(&t.1) {
                        next_o = Some(t);
                        break;
                    }
                    *dropped = true;
                }
            }
            match (self.terms.get(i), next_o.take()) {
                (None, None) => break,
                (Some(a), None) => {
                    out.push(a.clone());
                    i += 1;
                }
                (None, Some(b)) => out.push((b.0, b.1, -&b.2)),
                (Some(a), Some(b)) => match cmp_pot(a, &b) {
                    Ordering::Greater => {
                        out.push(a.clone());
                        i += 1;
                        next_o = Some(b);
                    }
                    Ordering::Less => out.push((b.0, b.1, -&b.2)),
                    Ordering::Equal => {
                        let s = &a.2 - &b.2;
                        if !s.is_zero() {
                            out.push((a.0, a.1.clone(), s));
                        }
                        i += 1;
                    }
                },
            }
        }
        Vt { terms: out }
    }

    fn normalize(&mut self) {
        if self.terms.is_empty() {
            return;
        }
        let inv = self.terms[0].2.inv();
        if inv.is_one() {
            return;
        }
        for t in &mut self.terms {
            t.2 = &t.2 * &inv;
        }
    }
}

/// Caps on the untruncated Mora computation.
#[derive(Clone, Copy, Debug)]
pub struct Budget {
    pub max_steps: usize,
    pub max_degree: u32,
    /// Bit size cap on coefficients.
    pub max_height: u64,
}

impl Default for Budget {
    fn default() -> Budget {
        Budget::for_bound(DEFAULT_BOUND)
    }
}

impl Budget {
    pub fn for_bound(bound: u32) -> Budget {
        Budget { max_steps: 200_000, max_degree: 3 * bound, max_height: 2048 }
    }
}

struct Meter {
    budget: Budget,
    steps: usize,
}

impl Meter {
    fn tick(&mut self, v: &Vt) -> bool {
        self.steps += 1;
        self.steps <= self.budget.max_steps
            && v.max_deg() <= self.budget.max_degree
            && v.terms.iter().all(|t| t.2.height() <= self.budget.max_height)
    }
}

struct Reducer<'a> {
    basis: &'a [Vt],
    ecarts: Vec<u32>,
}

impl<'a> Reducer<'a> {
    fn new(basis: &'a [Vt]) -> Reducer<'a> {
        Reducer { basis, ecarts: basis.iter().map(|g| g.ecart()).collect() }
    }

    /// Weak normal form. Truncated mode (`bound = Some`) is plain division in `O/m^(bound+1)`;
    /// the exact mode is Mora's écart-driven reduction. `None` when the meter runs out.
    fn reduce(&self, mut h: Vt, bound: Option<u32>, meter: &mut Option<&mut Meter>, dropped: &mut bool) -> Option<Vt> {
        let nb = self.basis.len();
        let mut extra: Vec<(Vt, u32)> = Vec::new();
        while !h.is_zero() {
            let (pos, m, c) = h.lead().clone();
            let mut best: Option<(usize, u32)> = None;
            for i in 0..nb + extra.len() {
                let (g, e) = if i < nb { (&self.basis[i], self.ecarts[i]) } else { (&extra[i - nb].0, extra[i - nb].1) };
                let (gp, gm, _) = g.lead();
                if *gp == pos && gm.divides(&m) && best.map_or(true, |(_, be)| e < be) {
                    best = Some((i, e));
                    if e == 0 {
                        break;
                    }
                }
            }
            let Some((idx, ge)) = best else { return Some(h) };
            if bound.is_none() {
                let he = h.ecart();
                if ge > he {
                    extra.push((h.clone(), he));
                }
            }
            let g = if idx < nb { &self.basis[idx] } else { &extra[idx - nb].0 };
            let (_, gm, gc) = g.lead();
            let q = gm.quotient_of(&m);
            let coef = &c / gc;
            h = h.sub_mul(&coef, &q, g, bound, dropped);
            if let Some(mt) = meter.as_deref_mut() {
                if !mt.tick(&h) {
                    return None;
                }
            }
        }
        Some(h)
    }
}

fn spoly(f: &Vt, g: &Vt, bound: Option<u32>, dropped: &mut bool) -> Vt {
    let (_, fm, fc) = f.lead();
    let (_, gm, gc) = g.lead();
    let l = fm.lcm(gm);
    let a = fm.quotient_of(&l);
    let b = gm.quotient_of(&l);
    let left = Vt { terms: Vec::new() }.sub_mul(&(&(-&Scalar::one()) / fc), &a, f, bound, dropped);
    left.sub_mul(&(&Scalar::one() / gc), &b, g, bound, dropped)
}

/// Result of a standard basis computation.
#[derive(Clone, Debug)]
pub struct StandardBasis {
    pub ring: Arc<Ring>,
    pub rank: usize,
    pub elems: Vec<ModuleVec>,
    /// `(position, monomial)` leading terms, pairwise non-divisible per position.
    pub leading: Vec<(usize, Mono)>,
    /// `Some(d)`: computed in `O^p / m^(d+1) O^p`; `None`: exact.
    pub bound: Option<u32>,
    /// Terms of degree above the bound were discarded somewhere.
    pub truncated: bool,
    internal: Vec<Vt>,
}

struct Pair {
    ecart: u32,
    id: usize,
    s: Vt,
}

fn buchberger(gens: Vec<Vt>, bound: Option<u32>, rank1: bool, mut meter: Option<&mut Meter>) -> Option<(Vec<Vt>, bool)> {
    let mut truncated = false;
    let mut basis: Vec<Vt> = Vec::new();
    let mut pairs: Vec<Pair> = Vec::new();
    let mut next_id = 0usize;
    let mut queue: Vec<Vt> = gens;
    queue.reverse();
    // Inputs enter as pseudo-pairs so they are reduced like S-vectors.
    while let Some(g) = queue.pop() {
        let e = if g.is_zero() { 0 } else { g.ecart() };
        pairs.push(Pair { ecart: e, id: next_id, s: g });
        next_id += 1;
    }
    while !pairs.is_empty() {
        let k = (0..pairs.len()).min_by(|&a, &b| (pairs[a].ecart, pairs[a].id).cmp(&(pairs[b].ecart, pairs[b].id))).unwrap();
        let pair = pairs.swap_remove(k);
        if pair.s.is_zero() {
            continue;
        }
        let red = Reducer::new(&basis);
        let mut h = red.reduce(pair.s, bound, &mut meter, &mut truncated)?;
        if h.is_zero() {
            continue;
        }
        h.normalize();
        for g in &basis {
            if g.lead().0 != h.lead().0 {
                continue;
            }
            if rank1 && g.lead().1.coprime(&h.lead().1) {
                continue;
            }
            if let (Some(b), true) = (bound, rank1) {
                if g.lead().1.lcm(&h.lead().1).deg() > b {
                    continue;
                }
            }
            let s = spoly(g, &h, bound, &mut truncated);
            let e = if s.is_zero() { 0 } else { s.ecart() };
            pairs.push(Pair { ecart: e, id: next_id, s });
            next_id += 1;
        }
        basis.push(h);
        if let Some(mt) = meter.as_deref_mut() {
            if !mt.tick(basis.last().unwrap()) {
                return None;
            }
        }
    }
    Some((minimize(basis), truncated))
}

fn minimize(basis: Vec<Vt>) -> Vec<Vt> {
    let mut keep = vec![true; basis.len()];
    for i in 0..basis.len() {
        for j in 0..basis.len() {
            if i == j || !keep[j] {
                continue;
            }
            let (pi, mi, _) = basis[i].lead();
            let (pj, mj, _) = basis[j].lead();
            if pi == pj && mj.divides(mi) && (mi != mj || j < i) {
                keep[i] = false;
                break;
            }
        }
    }
    basis.into_iter().zip(keep).filter(|(_, k)| *k).map(|(v, _)| v).collect()
}

fn finish(m: &Submodule, basis: Vec<Vt>, bound: Option<u32>, truncated: bool) -> StandardBasis {
    let elems = basis.iter().map(|v| v.to_vec(&m.ring, m.rank)).collect();
    let leading = basis.iter().map(|v| (v.lead().0 as usize, v.lead().1.clone())).collect();
    StandardBasis { ring: m.ring.clone(), rank: m.rank, elems, leading, bound, truncated, internal: basis }
}

/// Standard basis of `M + quotient*O^p + m^(bound+1) O^p`; leading terms of degree `<= bound` are exact.
pub fn standard_basis(m: &Submodule, bound: u32) -> StandardBasis {
    let gens: Vec<Vt> = m.lifted_generators().iter().map(|g| Vt::from_vec(g, Some(bound))).collect();
    let (basis, truncated) = buchberger(gens, Some(bound), m.rank == 1, None).expect("truncated mode has no meter");
    finish(m, basis, Some(bound), truncated)
}

/// Untruncated Mora standard basis; `None` when the budget runs out.
pub fn standard_basis_exact(m: &Submodule, budget: Budget) -> Option<StandardBasis> {
    let gens: Vec<Vt> = m.lifted_generators().iter().map(|g| Vt::from_vec(g, None)).collect();
    let mut meter = Meter { budget, steps: 0 };
    let (basis, _) = buchberger(gens, None, m.rank == 1, Some(&mut meter))?;
    Some(finish(m, basis, None, false))
}

impl StandardBasis {
    /// Weak normal form against this basis; `None` if an exact reduction exceeded the budget.
    pub fn reduce(&self, v: &ModuleVec, budget: Budget) -> Option<ModuleVec> {
        let h = Vt::from_vec(v, self.bound);
        let red = Reducer::new(&self.internal);
        let mut meter = Meter { budget, steps: 0 };
        let mut dropped = false;
        let out = red.reduce(h, self.bound, &mut Some(&mut meter), &mut dropped)?;
        Some(out.to_vec(&self.ring, self.rank))
    }

    pub fn reduces_to_zero(&self, v: &ModuleVec) -> Option<bool> {
        self.reduce(v, Budget::for_bound(self.bound.unwrap_or(DEFAULT_BOUND))).map(|r| r.iter().all(|p| p.is_zero()))
    }

    /// Is `(pos, m)` in the leading module?
    pub fn is_leading(&self, pos: usize, m: &Mono) -> bool {
        self.leading.iter().any(|(p, l)| *p == pos && l.divides(m))
    }

    /// Per position, the pure power exponent for each variable, if present.
    fn pure_powers(&self, pos: usize) -> Vec<Option<u32>> {
        let n = self.ring.nvars();
        (0..n)
            .map(|j| {
                self.leading
                    .iter()
                    .filter(|(p, m)| *p == pos && m.deg() == m.exp(j))
                    .map(|(_, m)| m.deg())
                    .min()
            })
            .collect()
    }

    pub fn has_all_pure_powers(&self) -> bool {
        (0..self.rank).all(|p| self.pure_powers(p).iter().all(|e| e.is_some()))
    }

    /// Number of standard monomials of degree `< d`.
    fn count_below(&self, d: u32) -> u64 {
        let n = self.ring.nvars();
        let mut count = 0u64;
        for pos in 0..self.rank {
            for k in 0..d {
                for m in monomials_of_degree(n, k) {
                    if !self.is_leading(pos, &m) {
                        count += 1;
                    }
                }
            }
        }
        count
    }

    /// Is every monomial of degree `d`, in every position, a leading term?
    fn covers_degree(&self, d: u32) -> bool {
        let n = self.ring.nvars();
        let ms = monomials_of_degree(n, d);
        (0..self.rank).all(|pos| ms.iter().all(|m| self.is_leading(pos, m)))
    }

    /// Standard monomials inside the box of pure powers (exact basis, finite colength).
    fn count_in_box(&self) -> u64 {
        let n = self.ring.nvars();
        let mut count = 0u64;
        for pos in 0..self.rank {
            let caps: Vec<u32> = self.pure_powers(pos).into_iter().map(|e| e.unwrap()).collect();
            let mut cur = vec![0u32; n];
            loop {
                let m = Mono::from_exps(&cur);
                if !self.is_leading(pos, &m) {
                    count += 1;
                }
                let mut i = 0;
                loop {
                    if i == n {
                        break;
                    }
                    cur[i] += 1;
                    if cur[i] < caps[i] {
                        break;
                    }
                    cur[i] = 0;
                    i += 1;
                }
                if i == n {
                    break;
                }
            }
        }
        count
    }

    pub fn display_elems(&self) -> Vec<String> {
        self.elems.iter().map(|v| fmt_vec(v)).collect()
    }
}

pub fn fmt_vec(v: &ModuleVec) -> String {
    if v.len() == 1 {
        v[0].to_string()
    } else {
        format!("[{}]", v.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(", "))
    }
}

/// Normal form of `v` against an arbitrary generating list, computed modulo `m^(bound+1)`.
#[derive(Clone, Debug)]
pub struct NormalForm {
    pub value: ModuleVec,
    /// Some term above the bound was discarded, so the result holds modulo `m^(bound+1)` only.
    pub truncated: bool,
}

pub fn mora_normal_form(v: &ModuleVec, basis: &[ModuleVec], bound: u32) -> NormalForm {
    let ring = v[0].ring().clone();
    let rank = v.len();
    let mut truncated = !v.iter().chain(basis.iter().flatten()).all(|p| p.degree().map_or(true, |d| d <= bound));
    let bs: Vec<Vt> = basis.iter().map(|g| Vt::from_vec(g, Some(bound))).filter(|g| !g.is_zero()).collect();
    let red = Reducer::new(&bs);
    let h = Vt::from_vec(v, Some(bound));
    let out = red.reduce(h, Some(bound), &mut None, &mut truncated).unwrap();
    NormalForm { value: out.to_vec(&ring, rank), truncated }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Colength {
    Finite(u64),
    Infinite,
    Indeterminate,
}

impl Colength {
    pub fn finite(self) -> Option<u64> {
        match self {
            Colength::Finite(n) => Some(n),
            _ => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        self == Colength::Infinite
    }
}

impl fmt::Display for Colength {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Colength::Finite(n) => write!(f, "{}", n),
            Colength::Infinite => write!(f, "INFINITE"),
            Colength::Indeterminate => write!(f, "INDETERMINATE"),
        }
    }
}

impl Serialize for Colength {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Colength::Finite(n) => s.serialize_u64(*n),
            other => s.serialize_str(&other.to_string()),
        }
    }
}

pub fn colength(m: &Submodule) -> Colength {
    colength_with(m, DEFAULT_BOUND)
}

/// Truncated passes at increasing degree first (exact once `m^D` lies in the leading module),
/// then an untruncated Mora basis under a budget.
pub fn colength_with(m: &Submodule, bound: u32) -> Colength {
    let mut schedule: Vec<u32> = [4u32, 8, 14].iter().copied().filter(|&d| d < bound).collect();
    schedule.push(bound);
    for d in schedule {
        let sb = standard_basis(m, d);
        if sb.covers_degree(d) {
            return Colength::Finite(sb.count_below(d));
        }
    }
    match standard_basis_exact(m, Budget::for_bound(bound)) {
        None => Colength::Indeterminate,
        Some(sb) => {
            if sb.has_all_pure_powers() {
                Colength::Finite(sb.count_in_box())
            } else {
                Colength::Infinite
            }
        }
    }
}

/// Exact membership of `v` in `M + quotient*O^p` (localized); `None` if the budget ran out.
pub fn is_member(v: &ModuleVec, m: &Submodule, budget: Budget) -> Option<bool> {
    if v.iter().all(|p| p.is_zero()) {
        return Some(true);
    }
    let sb = standard_basis_exact(m, budget)?;
    let r = sb.reduce(v, budget)?;
    Some(r.iter().all(|p| p.is_zero()))
}

fn det(mat: &[Vec<Poly>], ring: &Arc<Ring>) -> Poly {
    let k = mat.len();
    if k == 1 {
        return mat[0][0].clone();
    }
    if k == 2 {
        return &(&mat[0][0] * &mat[1][1]) - &(&mat[0][1] * &mat[1][0]);
    }
    let mut acc = Poly::zero(ring);
    for c in 0..k {
        if mat[0][c].is_zero() {
            continue;
        }
        let sub: Vec<Vec<Poly>> = mat[1..]
            .iter()
            .map(|row| row.iter().enumerate().filter(|(j, _)| *j != c).map(|(_, p)| p.clone()).collect())
            .collect();
        let t = &mat[0][c] * &det(&sub, ring);
        acc = if c % 2 == 0 { &acc + &t } else { &acc - &t };
    }
    acc
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// Nonzero `k x k` minors of a matrix given by rows.
pub fn minors(rows: &[Vec<Poly>], k: usize) -> Vec<Poly> {
    if rows.is_empty() || k == 0 {
        return Vec::new();
    }
    let ring = rows[0][0].ring().clone();
    let ncols = rows[0].len();
    let mut out = Vec::new();
    for rs in subsets(rows.len(), k) {
        for cs in subsets(ncols, k) {
            let mat: Vec<Vec<Poly>> = rs.iter().map(|&r| cs.iter().map(|&c| rows[r][c].clone()).collect()).collect();
            let d = det(&mat, &ring);
            if !d.is_zero() {
                out.push(d);
            }
        }
    }
    out
}

/// `k x k` minors of the `p x q` matrix whose columns are the generators; `J_0 = (1)`.
pub fn fitting_ideal(m: &Submodule, k: usize) -> Result<Vec<Poly>> {
    let q = m.gens.len();
    if k > m.rank.min(q) {
        return Err(Error::OutOfRange(format!("k = {} exceeds min(p, #generators) = {}", k, m.rank.min(q))));
    }
    if k == 0 {
        return Ok(vec![Poly::one(&m.ring)]);
    }
    let rows: Vec<Vec<Poly>> = (0..m.rank).map(|i| m.gens.iter().map(|g| g[i].clone()).collect()).collect();
    Ok(minors(&rows, k))
}
