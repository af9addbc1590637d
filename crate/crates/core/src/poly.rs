//! Sparse polynomials over `Scalar` with a local monomial order.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::scalar::{Field, Scalar};

/// Ordered variable names plus the ground field.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Ring {
    names: Vec<String>,
    field: Field,
}

impl Ring {
    pub fn new<S: AsRef<str>>(names: &[S], field: Field) -> Arc<Ring> {
        Arc::new(Ring { names: names.iter().map(|s| s.as_ref().to_string()).collect(), field })
    }

    pub fn nvars(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn var_index(&self, name: &str) -> Result<usize> {
        self.index_of(name).ok_or_else(|| Error::UndeclaredVariable(name.to_string()))
    }
}

pub fn same_ring(a: &Arc<Ring>, b: &Arc<Ring>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

/// Dense exponent vector with cached total degree.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Mono {
    e: SmallVec<[u16; 8]>,
    deg: u32,
}

impl Mono {
    pub fn one(n: usize) -> Mono {
        Mono { e: SmallVec::from_elem(0, n), deg: 0 }
    }

    pub fn var(n: usize, i: usize) -> Mono {
        let mut m = Mono::one(n);
        m.e[i] = 1;
        m.deg = 1;
        m
    }

    pub fn from_exps(e: &[u32]) -> Mono {
        let deg = e.iter().sum();
        Mono { e: e.iter().map(|&x| x as u16).collect(), deg }
    }

    pub fn exps(&self) -> Vec<u32> {
        self.e.iter().map(|&x| x as u32).collect()
    }

    pub fn exp(&self, i: usize) -> u32 {
        self.e[i] as u32
    }

    pub fn nvars(&self) -> usize {
        self.e.len()
    }

    pub fn deg(&self) -> u32 {
        self.deg
    }

    pub fn is_one(&self) -> bool {
        self.deg == 0
    }

    pub fn mul(&self, o: &Mono) -> Mono {
        Mono { e: self.e.iter().zip(&o.e).map(|(a, b)| a + b).collect(), deg: self.deg + o.deg }
    }

    pub fn divides(&self, o: &Mono) -> bool {
        self.deg <= o.deg && self.e.iter().zip(&o.e).all(|(a, b)| a <= b)
    }

    /// `o / self`, assuming `self | o`.
    pub fn quotient_of(&self, o: &Mono) -> Mono {
        Mono { e: self.e.iter().zip(&o.e).map(|(a, b)| b - a).collect(), deg: o.deg - self.deg }
    }

    pub fn lcm(&self, o: &Mono) -> Mono {
        let e: SmallVec<[u16; 8]> = self.e.iter().zip(&o.e).map(|(a, b)| *a.max(b)).collect();
        let deg = e.iter().map(|&x| x as u32).sum();
        Mono { e, deg }
    }

    pub fn coprime(&self, o: &Mono) -> bool {
        self.e.iter().zip(&o.e).all(|(a, b)| *a == 0 || *b == 0)
    }

    /// Local degree-reverse-lex order; `Greater` means larger, 1 is the largest.
    pub fn cmp_local(&self, o: &Mono) -> Ordering {
        if self.deg != o.deg {
            return o.deg.cmp(&self.deg);
        }
        for (a, b) in self.e.iter().zip(&o.e).rev() {
            if a != b {
                return b.cmp(a);
            }
        }
        Ordering::Equal
    }

    pub fn fmt_with(&self, ring: &Ring) -> String {
        let mut parts = Vec::new();
        for (i, &k) in self.e.iter().enumerate() {
            match k {
                0 => {}
                1 => parts.push(ring.name(i).to_string()),
                _ => parts.push(format!("{}^{}", ring.name(i), k)),
            }
        }
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join("*")
        }
    }
}

impl Ord for Mono {
    fn cmp(&self, o: &Self) -> Ordering {
        self.cmp_local(o)
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

pub fn compare_monomials(a: &Mono, b: &Mono) -> Ordering {
    a.cmp_local(b)
}

/// Terms are kept sorted with the largest monomial first.
#[derive(Clone, Debug)]
pub struct Poly {
    ring: Arc<Ring>,
    terms: Vec<(Mono, Scalar)>,
}

impl PartialEq for Poly {
    fn eq(&self, o: &Poly) -> bool {
        same_ring(&self.ring, &o.ring) && self.terms == o.terms
    }
}

impl Eq for Poly {}

impl Poly {
    pub fn zero(ring: &Arc<Ring>) -> Poly {
        Poly { ring: ring.clone(), terms: Vec::new() }
    }

    pub fn constant(ring: &Arc<Ring>, c: Scalar) -> Poly {
        if c.is_zero() {
            return Poly::zero(ring);
        }
        Poly { ring: ring.clone(), terms: vec![(Mono::one(ring.nvars()), c)] }
    }

    pub fn one(ring: &Arc<Ring>) -> Poly {
        Poly::constant(ring, Scalar::one())
    }

    pub fn var(ring: &Arc<Ring>, i: usize) -> Poly {
        Poly { ring: ring.clone(), terms: vec![(Mono::var(ring.nvars(), i), Scalar::one())] }
    }

    pub fn var_named(ring: &Arc<Ring>, name: &str) -> Result<Poly> {
        Ok(Poly::var(ring, ring.var_index(name)?))
    }

    pub fn monomial(ring: &Arc<Ring>, m: Mono, c: Scalar) -> Poly {
        if c.is_zero() {
            return Poly::zero(ring);
        }
        Poly { ring: ring.clone(), terms: vec![(m, c)] }
    }

    /// Builds from arbitrary terms: sorts, merges, drops zeros.
    pub fn from_terms(ring: &Arc<Ring>, mut terms: Vec<(Mono, Scalar)>) -> Poly {
        terms.sort_by(|a, b| b.0.cmp_local(&a.0));
        let mut out: Vec<(Mono, Scalar)> = Vec::with_capacity(terms.len());
        for (m, c) in terms {
            if let Some(last) = out.last_mut() {
                if last.0 == m {
                    last.1 = &last.1 + &c;
                    continue;
                }
            }
            out.push((m, c));
        }
        out.retain(|t| !t.1.is_zero());
        Poly { ring: ring.clone(), terms: out }
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn terms(&self) -> &[(Mono, Scalar)] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<(Mono, Scalar)> {
        self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn leading(&self) -> Option<&(Mono, Scalar)> {
        self.terms.first()
    }

    pub fn constant_term(&self) -> Scalar {
        match self.terms.first() {
            Some((m, c)) if m.is_one() => c.clone(),
            _ => Scalar::zero(),
        }
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(m, _)| m.is_one())
    }

    /// Total degree; `None` for zero.
    pub fn degree(&self) -> Option<u32> {
        self.terms.iter().map(|(m, _)| m.deg()).max()
    }

    /// Lowest total degree of a term; `None` for zero.
    pub fn order(&self) -> Option<u32> {
        self.terms.first().map(|(m, _)| m.deg())
    }

    pub fn coeff(&self, m: &Mono) -> Scalar {
        self.terms.iter().find(|(n, _)| n == m).map(|t| t.1.clone()).unwrap_or_else(Scalar::zero)
    }

    pub fn uses_var(&self, i: usize) -> bool {
        self.terms.iter().any(|(m, _)| m.exp(i) > 0)
    }

    pub fn scale(&self, c: &Scalar) -> Poly {
        if c.is_zero() {
            return Poly::zero(&self.ring);
        }
        Poly { ring: self.ring.clone(), terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect() }
    }

    pub fn mul_term(&self, m: &Mono, c: &Scalar) -> Poly {
        if c.is_zero() {
            return Poly::zero(&self.ring);
        }
        Poly {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(n, a)| (n.mul(m), a * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::one(&self.ring);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn partial_derivative(&self, var: usize) -> Poly {
        let mut terms = Vec::new();
        for (m, c) in &self.terms {
            let k = m.exp(var);
            if k == 0 {
                continue;
            }
            let mut e = m.exps();
            e[var] -= 1;
            terms.push((Mono::from_exps(&e), c * &Scalar::from_int(k as i64)));
        }
        Poly::from_terms(&self.ring, terms)
    }

    pub fn derivative_named(&self, name: &str) -> Result<Poly> {
        Ok(self.partial_derivative(self.ring.var_index(name)?))
    }

    /// Terms of total degree `<= d`.
    pub fn truncate(&self, d: u32) -> Poly {
        Poly {
            ring: self.ring.clone(),
            terms: self.terms.iter().filter(|(m, _)| m.deg() <= d).cloned().collect(),
        }
    }

    pub fn homogeneous_part(&self, d: u32) -> Poly {
        Poly {
            ring: self.ring.clone(),
            terms: self.terms.iter().filter(|(m, _)| m.deg() == d).cloned().collect(),
        }
    }

    /// Keeps only terms whose degree in the listed variables is `<= d`.
    pub fn truncate_in(&self, vars: &[usize], d: u32) -> Poly {
        Poly {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| vars.iter().map(|&v| m.exp(v)).sum::<u32>() <= d)
                .cloned()
                .collect(),
        }
    }

    /// Simultaneous substitution `var_i -> images[i]` into polynomials of `target`.
    pub fn substitute(&self, target: &Arc<Ring>, images: &[Poly]) -> Poly {
        assert_eq!(images.len(), self.ring.nvars());
        let mut cache: HashMap<(usize, u32), Poly> = HashMap::new();
        let mut acc: Vec<(Mono, Scalar)> = Vec::new();
        for (m, c) in &self.terms {
            let mut t = Poly::constant(target, c.clone());
            for (i, k) in m.exps().into_iter().enumerate() {
                if k == 0 || t.is_zero() {
                    continue;
                }
                let p = cache.entry((i, k)).or_insert_with(|| images[i].pow(k)).clone();
                t = &t * &p;
            }
            acc.extend(t.terms);
        }
        Poly::from_terms(target, acc)
    }

    /// Substitution by variable name; unmapped variables go to the same-named variable of `target`.
    pub fn substitute_named(&self, target: &Arc<Ring>, map: &[(&str, Poly)]) -> Result<Poly> {
        let mut images = Vec::with_capacity(self.ring.nvars());
        for (i, name) in self.ring.names().iter().enumerate() {
            if let Some((_, p)) = map.iter().find(|(n, _)| n == name) {
                images.push(p.clone());
            } else if self.uses_var(i) {
                images.push(Poly::var_named(target, name)?);
            } else {
                images.push(Poly::zero(target));
            }
        }
        Ok(self.substitute(target, &images))
    }

    /// Moves to another ring by matching variable names.
    pub fn to_ring(&self, target: &Arc<Ring>) -> Result<Poly> {
        if same_ring(&self.ring, target) {
            return Ok(self.clone());
        }
        let n = target.nvars();
        let mut idx = Vec::with_capacity(self.ring.nvars());
        for (i, name) in self.ring.names().iter().enumerate() {
            match target.index_of(name) {
                Some(j) => idx.push(Some(j)),
                None if self.uses_var(i) => return Err(Error::UndeclaredVariable(name.clone())),
                None => idx.push(None),
            }
        }
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut e = vec![0u32; n];
                for (i, j) in idx.iter().enumerate() {
                    if let Some(j) = j {
                        e[*j] = m.exp(i);
                    }
                }
                (Mono::from_exps(&e), c.clone())
            })
            .collect();
        Ok(Poly::from_terms(target, terms))
    }

    pub fn eval(&self, point: &[Scalar]) -> Scalar {
        let mut acc = Scalar::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, k) in m.exps().into_iter().enumerate() {
                if k > 0 {
                    t = &t * &point[i].pow(k);
                }
            }
            acc = &acc + &t;
        }
        acc
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let mono = m.fmt_with(&self.ring);
            let s = if m.is_one() {
                c.to_string()
            } else if c.is_one() {
                mono
            } else if (-c).is_one() {
                format!("-{}", mono)
            } else {
                format!("{}*{}", c, mono)
            };
            if k == 0 {
                write!(f, "{}", s)?;
            } else if let Some(rest) = s.strip_prefix('-') {
                write!(f, " - {}", rest)?;
            } else {
                write!(f, " + {}", s)?;
            }
        }
        Ok(())
    }
}

fn merge(a: &[(Mono, Scalar)], b: &[(Mono, Scalar)], negate_b: bool) -> Vec<(Mono, Scalar)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].0.cmp_local(&b[j].0) {
            Ordering::Greater => {
                out.push(a[i].clone());
                i += 1;
            }
            Ordering::Less => {
                let c = if negate_b { -&b[j].1 } else { b[j].1.clone() };
                out.push((b[j].0.clone(), c));
                j += 1;
            }
            Ordering::Equal => {
                let c = if negate_b { &a[i].1 - &b[j].1 } else { &a[i].1 + &b[j].1 };
                if !c.is_zero() {
                    out.push((a[i].0.clone(), c));
                }
                i += 1;
                j += 1;
            }
        }
    }
    out.extend(a[i..].iter().cloned());
    for t in &b[j..] {
        let c = if negate_b { -&t.1 } else { t.1.clone() };
        out.push((t.0.clone(), c));
    }
    out
}

impl<'a> Add<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn add(self, o: &Poly) -> Poly {
        debug_assert!(same_ring(&self.ring, &o.ring));
        Poly { ring: self.ring.clone(), terms: merge(&self.terms, &o.terms, false) }
    }
}

impl<'a> Sub<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn sub(self, o: &Poly) -> Poly {
        debug_assert!(same_ring(&self.ring, &o.ring));
        Poly { ring: self.ring.clone(), terms: merge(&self.terms, &o.terms, true) }
    }
}

impl<'a> Mul<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, o: &Poly) -> Poly {
        debug_assert!(same_ring(&self.ring, &o.ring));
        if self.is_zero() || o.is_zero() {
            return Poly::zero(&self.ring);
        }
        if self.terms.len() == 1 {
            return o.mul_term(&self.terms[0].0, &self.terms[0].1);
        }
        if o.terms.len() == 1 {
            return self.mul_term(&o.terms[0].0, &o.terms[0].1);
        }
        let mut acc: HashMap<Mono, Scalar> = HashMap::with_capacity(self.terms.len() * o.terms.len());
        for (m, a) in &self.terms {
            for (n, b) in &o.terms {
                let k = m.mul(n);
                let p = a * b;
                match acc.get_mut(&k) {
                    Some(c) => *c = &*c + &p,
                    None => {
                        acc.insert(k, p);
                    }
                }
            }
        }
        let mut terms: Vec<(Mono, Scalar)> = acc.into_iter().filter(|t| !t.1.is_zero()).collect();
        terms.sort_by(|a, b| b.0.cmp_local(&a.0));
        Poly { ring: self.ring.clone(), terms }
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly { ring: self.ring.clone(), terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }
}

impl Add for Poly {
    type Output = Poly;
    fn add(self, o: Poly) -> Poly {
        &self + &o
    }
}

impl Sub for Poly {
    type Output = Poly;
    fn sub(self, o: Poly) -> Poly {
        &self - &o
    }
}

impl Mul for Poly {
    type Output = Poly;
    fn mul(self, o: Poly) -> Poly {
        &self * &o
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

/// All monomials of total degree exactly `d` in `n` variables, in decreasing local order.
pub fn monomials_of_degree(n: usize, d: u32) -> Vec<Mono> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; n];
    fn rec(i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Mono>) {
        if i + 1 == cur.len() {
            cur[i] = left;
            out.push(Mono::from_exps(cur));
            return;
        }
        for k in (0..=left).rev() {
            cur[i] = k;
            rec(i + 1, left - k, cur, out);
        }
    }
    if n == 0 {
        if d == 0 {
            out.push(Mono::one(0));
        }
        return out;
    }
    rec(0, d, &mut cur, &mut out);
    out.sort_by(|a, b| b.cmp_local(a));
    out
}

/// Monomials of degree `d` in a subset of the variables of an `n`-variable ring.
pub fn monomials_in(n: usize, vars: &[usize], d: u32) -> Vec<Mono> {
    monomials_of_degree(vars.len(), d)
        .into_iter()
        .map(|m| {
            let mut e = vec![0u32; n];
            for (k, &v) in vars.iter().enumerate() {
                e[v] = m.exp(k);
            }
            Mono::from_exps(&e)
        })
        .collect()
}
