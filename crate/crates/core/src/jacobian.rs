//! Jacobian modules and the condition modules of the (t^r), S- and family criteria.

use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::localstd::{ModuleVec, Submodule};
use crate::poly::{monomials_in, same_ring, Poly, Ring};

/// `F : (k^(n+k), 0) -> (k^p, 0)` with distinguished x- and y-variables.
#[derive(Clone, Debug)]
pub struct MapGerm {
    pub ring: Arc<Ring>,
    pub x: Vec<usize>,
    pub y: Vec<usize>,
    pub comps: Vec<Poly>,
}

impl MapGerm {
    pub fn new(ring: &Arc<Ring>, x: Vec<usize>, y: Vec<usize>, comps: Vec<Poly>) -> Result<MapGerm> {
        if comps.is_empty() {
            return Err(Error::Dimension("map has no components".into()));
        }
        for c in &comps {
            if !same_ring(c.ring(), ring) {
                return Err(Error::Dimension("component over a different ring".into()));
            }
            if !c.constant_term().is_zero() {
                return Err(Error::Precondition(format!("component `{}` does not vanish at the origin", c)));
            }
        }
        Ok(MapGerm { ring: ring.clone(), x, y, comps })
    }

    /// Uses the named variables of `ring` as x and y.
    pub fn from_names(ring: &Arc<Ring>, x: &[&str], y: &[&str], comps: Vec<Poly>) -> Result<MapGerm> {
        let xi = x.iter().map(|v| ring.var_index(v)).collect::<Result<Vec<_>>>()?;
        let yi = y.iter().map(|v| ring.var_index(v)).collect::<Result<Vec<_>>>()?;
        MapGerm::new(ring, xi, yi, comps)
    }

    pub fn n(&self) -> usize {
        self.x.len()
    }

    pub fn k(&self) -> usize {
        self.y.len()
    }

    pub fn p(&self) -> usize {
        self.comps.len()
    }

    pub fn x_names(&self) -> Vec<String> {
        self.x.iter().map(|&i| self.ring.name(i).to_string()).collect()
    }

    pub fn y_names(&self) -> Vec<String> {
        self.y.iter().map(|&i| self.ring.name(i).to_string()).collect()
    }

    /// Column `∂F/∂v`.
    pub fn column(&self, v: usize) -> ModuleVec {
        self.comps.iter().map(|c| c.partial_derivative(v)).collect()
    }

    /// `p x (n+k)` Jacobian, columns ordered x then y.
    pub fn jacobian_rows(&self) -> Vec<Vec<Poly>> {
        let vars: Vec<usize> = self.x.iter().chain(&self.y).copied().collect();
        self.comps.iter().map(|c| vars.iter().map(|&v| c.partial_derivative(v)).collect()).collect()
    }

    /// Does `F(0, y)` vanish identically?
    pub fn contains_y(&self) -> bool {
        let images: Vec<Poly> = (0..self.ring.nvars())
            .map(|i| if self.x.contains(&i) { Poly::zero(&self.ring) } else { Poly::var(&self.ring, i) })
            .collect();
        self.comps.iter().all(|c| c.substitute(&self.ring, &images).is_zero())
    }

    pub fn display(&self) -> Vec<String> {
        self.comps.iter().map(|c| c.to_string()).collect()
    }
}

/// `f : x-space -> y-space`, components in the germ's ring using x-variables only.
#[derive(Clone, Debug)]
pub struct Transversal {
    pub comps: Vec<Poly>,
    pub jet_order: Option<u32>,
}

impl Transversal {
    pub fn zero(germ: &MapGerm) -> Transversal {
        Transversal { comps: vec![Poly::zero(&germ.ring); germ.k()], jet_order: None }
    }

    pub fn new(germ: &MapGerm, comps: Vec<Poly>) -> Result<Transversal> {
        let t = Transversal { comps, jet_order: None };
        t.validate(germ)?;
        Ok(t)
    }

    pub fn validate(&self, germ: &MapGerm) -> Result<()> {
        if self.comps.len() != germ.k() {
            return Err(Error::Dimension(format!("transversal has {} components, expected k = {}", self.comps.len(), germ.k())));
        }
        for c in &self.comps {
            if !same_ring(c.ring(), &germ.ring) {
                return Err(Error::Dimension("transversal over a different ring".into()));
            }
            if !c.constant_term().is_zero() {
                return Err(Error::Precondition(format!("transversal component `{}` does not vanish at 0", c)));
            }
            for i in 0..germ.ring.nvars() {
                if !germ.x.contains(&i) && c.uses_var(i) {
                    return Err(Error::Precondition(format!("transversal component `{}` uses `{}`", c, germ.ring.name(i))));
                }
            }
        }
        Ok(())
    }

    pub fn display(&self) -> Vec<String> {
        self.comps.iter().map(|c| c.to_string()).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Flavor {
    Closure,
    Strict,
}

/// Left and right sides of an inclusion `lhs ⊆ closure(rhs)` (or `rhs†` when strict).
#[derive(Clone, Debug)]
pub struct ConditionModules {
    pub lhs: Submodule,
    pub rhs: Submodule,
    pub flavor: Flavor,
    pub id: String,
    pub lhs_labels: Vec<String>,
    /// The germ whose differential gives hyperplane data on witnesses.
    pub germ: Option<MapGerm>,
    pub transversal: Option<Transversal>,
}

impl ConditionModules {
    pub fn ring(&self) -> &Arc<Ring> {
        &self.lhs.ring
    }
}

pub fn jm(f: &MapGerm) -> Submodule {
    let gens = f.x.iter().chain(&f.y).map(|&v| f.column(v)).collect();
    Submodule { ring: f.ring.clone(), rank: f.p(), gens, quotient: f.comps.clone() }
}

pub fn jm_x(f: &MapGerm) -> Submodule {
    let gens = f.x.iter().map(|&v| f.column(v)).collect();
    Submodule { ring: f.ring.clone(), rank: f.p(), gens, quotient: f.comps.clone() }
}

pub fn jm_y(f: &MapGerm) -> Submodule {
    let gens = f.y.iter().map(|&v| f.column(v)).collect();
    Submodule { ring: f.ring.clone(), rank: f.p(), gens, quotient: f.comps.clone() }
}

fn add_vec(a: &ModuleVec, b: &ModuleVec) -> ModuleVec {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn scale_vec(c: &Poly, v: &ModuleVec) -> ModuleVec {
    v.iter().map(|p| c * p).collect()
}

/// Generators `∂F/∂x_i + Σ_j ∂f_j/∂x_i ∂F/∂y_j`.
pub fn jm_transversal(f: &MapGerm, t: &Transversal) -> Result<Submodule> {
    t.validate(f)?;
    let ycols: Vec<ModuleVec> = f.y.iter().map(|&v| f.column(v)).collect();
    let mut gens = Vec::with_capacity(f.n());
    for &xi in &f.x {
        let mut g = f.column(xi);
        for (j, col) in ycols.iter().enumerate() {
            let d = t.comps[j].partial_derivative(xi);
            if !d.is_zero() {
                g = add_vec(&g, &scale_vec(&d, col));
            }
        }
        gens.push(g);
    }
    Ok(Submodule { ring: f.ring.clone(), rank: f.p(), gens, quotient: f.comps.clone() })
}

/// `y_j - f_j`.
pub fn transversal_ideal(f: &MapGerm, t: &Transversal) -> Vec<Poly> {
    f.y.iter().zip(&t.comps).map(|(&y, c)| &Poly::var(&f.ring, y) - c).collect()
}

/// Components truncated to total degree `<= r`.
pub fn jet_truncate(t: &Transversal, r: u32) -> Transversal {
    Transversal { comps: t.comps.iter().map(|c| c.truncate(r)).collect(), jet_order: Some(r) }
}

fn mono_poly(ring: &Arc<Ring>, m: crate::poly::Mono) -> Poly {
    Poly::monomial(ring, m, crate::scalar::Scalar::one())
}

/// Inclusion `m_n^r JM_y(F) ⊆ closure(m_n JM(F)_P + I(P) JM_y(F))` (or strict dependence).
pub fn tr_condition_modules(f: &MapGerm, t: &Transversal, r: u32, flavor: Flavor) -> Result<ConditionModules> {
    let ring = &f.ring;
    let ycols: Vec<ModuleVec> = f.y.iter().map(|&v| f.column(v)).collect();
    let mut lhs = Vec::new();
    let mut labels = Vec::new();
    for m in monomials_in(ring.nvars(), &f.x, r) {
        let xm = mono_poly(ring, m.clone());
        for (j, col) in ycols.iter().enumerate() {
            lhs.push(scale_vec(&xm, col));
            labels.push(format!("{}*dF/d{}", m.fmt_with(ring), ring.name(f.y[j])));
        }
    }
    let jp = jm_transversal(f, t)?;
    let mut rhs = Vec::new();
    for &xi in &f.x {
        let xv = Poly::var(ring, xi);
        for g in &jp.gens {
            rhs.push(scale_vec(&xv, g));
        }
    }
    for h in transversal_ideal(f, t) {
        for col in &ycols {
            rhs.push(scale_vec(&h, col));
        }
    }
    let id = match flavor {
        Flavor::Closure => format!("tr-closure(r={})", r),
        Flavor::Strict => format!("tr-strict(r={})", r),
    };
    Ok(ConditionModules {
        lhs: Submodule { ring: ring.clone(), rank: f.p(), gens: lhs, quotient: f.comps.clone() },
        rhs: Submodule { ring: ring.clone(), rank: f.p(), gens: rhs, quotient: f.comps.clone() },
        flavor,
        id,
        lhs_labels: labels,
        germ: Some(f.clone()),
        transversal: Some(t.clone()),
    })
}

/// The curve-wise reduced form: `m_n^(r-1) JM_y(F)` against `JM(F)_P` for `r >= 1`,
/// `JM_y(F)` against `m_n JM(F)_P` for `r = 0`.
pub fn tr_condition_modules_reduced(f: &MapGerm, t: &Transversal, r: u32) -> Result<ConditionModules> {
    let ring = &f.ring;
    let ycols: Vec<ModuleVec> = f.y.iter().map(|&v| f.column(v)).collect();
    let jp = jm_transversal(f, t)?;
    let (lhs_deg, rhs): (u32, Vec<ModuleVec>) = if r == 0 {
        let mut rhs = Vec::new();
        for &xi in &f.x {
            let xv = Poly::var(ring, xi);
            rhs.extend(jp.gens.iter().map(|g| scale_vec(&xv, g)));
        }
        (0, rhs)
    } else {
        (r - 1, jp.gens.clone())
    };
    let mut lhs = Vec::new();
    let mut labels = Vec::new();
    for m in monomials_in(ring.nvars(), &f.x, lhs_deg) {
        let xm = mono_poly(ring, m.clone());
        for (j, col) in ycols.iter().enumerate() {
            lhs.push(scale_vec(&xm, col));
            labels.push(format!("{}*dF/d{}", m.fmt_with(ring), ring.name(f.y[j])));
        }
    }
    Ok(ConditionModules {
        lhs: Submodule { ring: ring.clone(), rank: f.p(), gens: lhs, quotient: f.comps.clone() },
        rhs: Submodule { ring: ring.clone(), rank: f.p(), gens: rhs, quotient: f.comps.clone() },
        flavor: Flavor::Closure,
        id: format!("tr-reduced(r={})", r),
        lhs_labels: labels,
        germ: Some(f.clone()),
        transversal: Some(t.clone()),
    })
}

/// Rank-one inclusion `m_n^r O_S ⊆ closure(I(P) O_S)`.
pub fn s_condition_modules(f: &MapGerm, s_ideal: &[Poly], t: &Transversal, r: u32) -> Result<ConditionModules> {
    t.validate(f)?;
    let ring = &f.ring;
    let mut lhs = Vec::new();
    let mut labels = Vec::new();
    for m in monomials_in(ring.nvars(), &f.x, r) {
        labels.push(m.fmt_with(ring));
        lhs.push(vec![mono_poly(ring, m)]);
    }
    let rhs = transversal_ideal(f, t).into_iter().map(|h| vec![h]).collect();
    Ok(ConditionModules {
        lhs: Submodule { ring: ring.clone(), rank: 1, gens: lhs, quotient: s_ideal.to_vec() },
        rhs: Submodule { ring: ring.clone(), rank: 1, gens: rhs, quotient: s_ideal.to_vec() },
        flavor: Flavor::Closure,
        id: format!("s-condition(r={})", r),
        lhs_labels: labels,
        germ: None,
        transversal: Some(t.clone()),
    })
}

/// A family of transversals `f(x, u)` with `f(0, u) = 0`.
#[derive(Clone, Debug)]
pub struct Family {
    /// Ring with the x-variables and the parameters.
    pub ring: Arc<Ring>,
    pub x: Vec<usize>,
    pub u: Vec<usize>,
    pub comps: Vec<Poly>,
}

impl Family {
    pub fn new(ring: &Arc<Ring>, x: Vec<usize>, u: Vec<usize>, comps: Vec<Poly>) -> Result<Family> {
        for c in &comps {
            for (m, _) in c.terms() {
                if x.iter().all(|&i| m.exp(i) == 0) {
                    return Err(Error::Precondition(format!("family component `{}` has a term free of x", c)));
                }
            }
        }
        Ok(Family { ring: ring.clone(), x, u, comps })
    }

    /// Member at a parameter point, as a transversal of `germ`.
    pub fn at(&self, germ: &MapGerm, point: &[crate::scalar::Scalar]) -> Result<Transversal> {
        let images: Vec<Poly> = (0..self.ring.nvars())
            .map(|i| match self.u.iter().position(|&j| j == i) {
                Some(k) => Poly::constant(&self.ring, point[k].clone()),
                None => Poly::var(&self.ring, i),
            })
            .collect();
        let comps = self
            .comps
            .iter()
            .map(|c| c.substitute(&self.ring, &images).to_ring(&germ.ring))
            .collect::<Result<Vec<_>>>()?;
        Transversal::new(germ, comps)
    }

    /// `x-degree` of the lowest parameter-dependent term; the family fixes the jet below it.
    pub fn varying_order(&self) -> Option<u32> {
        let mut best: Option<u32> = None;
        for c in &self.comps {
            for (m, _) in c.terms() {
                if self.u.iter().any(|&i| m.exp(i) > 0) {
                    let d: u32 = self.x.iter().map(|&i| m.exp(i)).sum();
                    best = Some(best.map_or(d, |b: u32| b.min(d)));
                }
            }
        }
        best
    }
}

/// `β(x, u) = (x, f(x, u))` pulled into the family ring: `F ∘ β`.
pub fn compose_family(f: &MapGerm, fam: &Family) -> Result<Vec<Poly>> {
    let images = family_images(f, fam)?;
    Ok(f.comps.iter().map(|c| c.substitute(&fam.ring, &images)).collect())
}

fn family_images(f: &MapGerm, fam: &Family) -> Result<Vec<Poly>> {
    if fam.comps.len() != f.k() {
        return Err(Error::Dimension(format!("family has {} components, expected k = {}", fam.comps.len(), f.k())));
    }
    (0..f.ring.nvars())
        .map(|i| {
            if let Some(j) = f.y.iter().position(|&y| y == i) {
                Ok(fam.comps[j].clone())
            } else {
                Poly::var_named(&fam.ring, f.ring.name(i))
            }
        })
        .collect()
}

/// Family criterion: `(∂F/∂y ∘ β)·∂f/∂u_i ⊆ closure(m_n (dF∘β)_* JM_x(β))` over `O/(F∘β)`.
pub fn verdier_family_modules(f: &MapGerm, fam: &Family) -> Result<ConditionModules> {
    let images = family_images(f, fam)?;
    let ring = &fam.ring;
    let pull = |p: &Poly| p.substitute(ring, &images);
    let ycols: Vec<ModuleVec> = f.y.iter().map(|&v| f.column(v).iter().map(pull).collect()).collect();
    let xcols: Vec<ModuleVec> = f.x.iter().map(|&v| f.column(v).iter().map(pull).collect()).collect();
    let zero = vec![Poly::zero(ring); f.p()];
    let mut lhs = Vec::new();
    let mut labels = Vec::new();
    for &ui in &fam.u {
        let mut g = zero.clone();
        for (j, col) in ycols.iter().enumerate() {
            let d = fam.comps[j].partial_derivative(ui);
            if !d.is_zero() {
                g = add_vec(&g, &scale_vec(&d, col));
            }
        }
        lhs.push(g);
        labels.push(format!("dF/dy*df/d{}", ring.name(ui)));
    }
    let mut dbeta = Vec::new();
    for (jx, &xi_f) in f.x.iter().enumerate() {
        let xi = ring.var_index(f.ring.name(xi_f))?;
        let mut g = xcols[jx].clone();
        for (j, col) in ycols.iter().enumerate() {
            let d = fam.comps[j].partial_derivative(xi);
            if !d.is_zero() {
                g = add_vec(&g, &scale_vec(&d, col));
            }
        }
        dbeta.push(g);
    }
    let mut rhs = Vec::new();
    for &xi in &fam.x {
        let xv = Poly::var(ring, xi);
        rhs.extend(dbeta.iter().map(|g| scale_vec(&xv, g)));
    }
    let quotient: Vec<Poly> = f.comps.iter().map(pull).collect();
    let germ = MapGerm { ring: ring.clone(), x: fam.x.clone(), y: fam.u.clone(), comps: quotient.clone() };
    Ok(ConditionModules {
        lhs: Submodule { ring: ring.clone(), rank: f.p(), gens: lhs, quotient: quotient.clone() },
        rhs: Submodule { ring: ring.clone(), rank: f.p(), gens: rhs, quotient },
        flavor: Flavor::Closure,
        id: "verdier-family".into(),
        lhs_labels: labels,
        germ: Some(germ),
        transversal: None,
    })
}
