//! Truncated power series in one variable `t` with tracked precision.

use std::fmt;

use crate::poly::Poly;
use crate::scalar::Scalar;

/// `c_0 + c_1 t + ...`, exact in every coefficient below `prec`.
#[derive(Clone, Debug, PartialEq)]
pub struct TruncSeries {
    c: Vec<Scalar>,
}

impl TruncSeries {
    pub fn zero(prec: usize) -> TruncSeries {
        TruncSeries { c: vec![Scalar::zero(); prec] }
    }

    pub fn constant(a: Scalar, prec: usize) -> TruncSeries {
        let mut s = TruncSeries::zero(prec);
        if prec > 0 {
            s.c[0] = a;
        }
        s
    }

    /// `a t^e`.
    pub fn monomial(a: Scalar, e: usize, prec: usize) -> TruncSeries {
        let mut s = TruncSeries::zero(prec);
        if e < prec {
            s.c[e] = a;
        }
        s
    }

    pub fn from_coeffs(c: Vec<Scalar>) -> TruncSeries {
        TruncSeries { c }
    }

    /// Univariate polynomial (in its ring's only variable) to precision `prec`.
    pub fn from_poly(p: &Poly, prec: usize) -> TruncSeries {
        let mut s = TruncSeries::zero(prec);
        for (m, a) in p.terms() {
            let e = m.deg() as usize;
            if e < prec {
                s.c[e] = &s.c[e] + a;
            }
        }
        s
    }

    pub fn prec(&self) -> usize {
        self.c.len()
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.c
    }

    pub fn coeff(&self, i: usize) -> Scalar {
        self.c.get(i).cloned().unwrap_or_else(Scalar::zero)
    }

    /// Index of the first nonzero coefficient, `None` when zero to the known precision.
    pub fn ord(&self) -> Option<usize> {
        self.c.iter().position(|a| !a.is_zero())
    }

    /// `ord`, or the precision when nothing nonzero is known.
    pub fn val(&self) -> usize {
        self.ord().unwrap_or(self.prec())
    }

    pub fn is_zero(&self) -> bool {
        self.ord().is_none()
    }

    pub fn leading(&self) -> Option<(usize, &Scalar)> {
        self.ord().map(|i| (i, &self.c[i]))
    }

    pub fn truncate(&self, prec: usize) -> TruncSeries {
        TruncSeries { c: self.c[..prec.min(self.c.len())].to_vec() }
    }

    pub fn add(&self, o: &TruncSeries) -> TruncSeries {
        let p = self.prec().min(o.prec());
        TruncSeries { c: (0..p).map(|i| &self.c[i] + &o.c[i]).collect() }
    }

    pub fn sub(&self, o: &TruncSeries) -> TruncSeries {
        let p = self.prec().min(o.prec());
        TruncSeries { c: (0..p).map(|i| &self.c[i] - &o.c[i]).collect() }
    }

    pub fn neg(&self) -> TruncSeries {
        TruncSeries { c: self.c.iter().map(|a| -a).collect() }
    }

    pub fn scale(&self, a: &Scalar) -> TruncSeries {
        TruncSeries { c: self.c.iter().map(|x| x * a).collect() }
    }

    /// Product, known to `min(prec a + val b, prec b + val a)`, at most `cap`.
    pub fn mul(&self, o: &TruncSeries, cap: usize) -> TruncSeries {
        let p = (self.prec() + o.val()).min(o.prec() + self.val()).min(cap.max(self.prec().min(o.prec())));
        let mut c = vec![Scalar::zero(); p];
        let (sa, sb) = (self.val(), o.val());
        for i in sa..self.prec().min(p) {
            let a = &self.c[i];
            if a.is_zero() {
                continue;
            }
            for j in sb..o.prec().min(p - i) {
                let b = &o.c[j];
                if !b.is_zero() {
                    c[i + j] = &c[i + j] + &(a * b);
                }
            }
        }
        TruncSeries { c }
    }

    /// `t^k * self`.
    pub fn shift(&self, k: usize) -> TruncSeries {
        let mut c = vec![Scalar::zero(); k];
        c.extend(self.c.iter().cloned());
        TruncSeries { c }
    }

    /// `self / o` when `val o <= val self`; `None` when `o` is zero or divides with a pole.
    pub fn div(&self, o: &TruncSeries) -> Option<TruncSeries> {
        let ob = o.ord()?;
        let oa = self.val();
        if oa < ob {
            return None;
        }
        let qprec = (oa - ob) + (self.prec() - oa).min(o.prec() - ob);
        let lead_inv = o.c[ob].inv();
        let mut rem: Vec<Scalar> = self.c[..(qprec + ob).min(self.prec())].to_vec();
        let mut q = vec![Scalar::zero(); qprec];
        for (i, qi) in q.iter_mut().enumerate() {
            let a = rem.get(i + ob).cloned().unwrap_or_else(Scalar::zero);
            if a.is_zero() {
                continue;
            }
            let f = &a * &lead_inv;
            for j in ob..o.prec() {
                if i + j >= rem.len() {
                    break;
                }
                if !o.c[j].is_zero() {
                    rem[i + j] = &rem[i + j] - &(&f * &o.c[j]);
                }
            }
            *qi = f;
        }
        Some(TruncSeries { c: q })
    }

    pub fn pow(&self, e: u32, cap: usize) -> TruncSeries {
        let mut acc = TruncSeries::constant(Scalar::one(), cap);
        for _ in 0..e {
            acc = acc.mul(self, cap);
        }
        acc
    }

    /// Text form of the known part, `O(t^prec)` omitted.
    pub fn to_poly_string(&self, var: &str) -> String {
        let mut out = String::new();
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let mono = match i {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{}^{}", var, i),
            };
            let s = a.to_string();
            let (neg, body) = match s.strip_prefix('-') {
                Some(b) if a.is_real() => (true, b.to_string()),
                _ => (false, s),
            };
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            match (mono.is_empty(), body == "1") {
                (true, _) => out.push_str(&body),
                (false, true) => out.push_str(&mono),
                (false, false) => {
                    out.push_str(&body);
                    out.push('*');
                    out.push_str(&mono);
                }
            }
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }
}

impl fmt::Display for TruncSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + O(t^{})", self.to_poly_string("t"), self.prec())
    }
}

/// Evaluates polynomials at a tuple of series, caching powers.
pub struct Evaluator<'a> {
    comps: &'a [TruncSeries],
    cap: usize,
    powers: Vec<Vec<TruncSeries>>,
}

impl<'a> Evaluator<'a> {
    pub fn new(comps: &'a [TruncSeries], cap: usize) -> Evaluator<'a> {
        let powers = comps.iter().map(|_| vec![TruncSeries::constant(Scalar::one(), cap)]).collect();
        Evaluator { comps, cap, powers }
    }

    fn power(&mut self, v: usize, e: usize) -> TruncSeries {
        while self.powers[v].len() <= e {
            let last = self.powers[v].last().unwrap().mul(&self.comps[v], self.cap);
            self.powers[v].push(last);
        }
        self.powers[v][e].clone()
    }

    pub fn eval(&mut self, p: &Poly) -> TruncSeries {
        let mut acc = TruncSeries::zero(self.cap);
        for (m, a) in p.terms() {
            let mut term = TruncSeries::constant(a.clone(), self.cap);
            for v in 0..m.nvars() {
                let e = m.exp(v) as usize;
                if e > 0 {
                    let pw = self.power(v, e);
                    term = term.mul(&pw, self.cap);
                }
            }
            acc = acc.add(&term);
        }
        acc
    }
}
