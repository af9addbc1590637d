//! Grassmann modification `β(x, a) = (x, Σ_j a_ij x_j)`, family substitution and jet lifting.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::jacobian::{Family, MapGerm, Transversal};
use crate::poly::{Mono, Poly, Ring};
use crate::scalar::Scalar;

/// Substitution from a source ring into the germ's ring: every target variable gets an image.
#[derive(Clone, Debug)]
pub struct ModificationMap {
    pub source: Arc<Ring>,
    pub target: Arc<Ring>,
    pub images: Vec<Poly>,
    /// x-variables in the source ring.
    pub x: Vec<usize>,
    /// New variables (a_ij or family parameters) in the source ring, row-major for Grassmann maps.
    pub new: Vec<usize>,
}

fn fresh_name(taken: &[String], want: String) -> String {
    let mut name = want;
    while taken.contains(&name) {
        name.push('_');
    }
    name
}

/// Default coordinate names: `a` when n = k = 1, `a1 a2` for one index, `a11 a12 ...` otherwise.
pub fn grassmann_names(n: usize, k: usize) -> Vec<String> {
    let mut out = Vec::with_capacity(n * k);
    for i in 1..=k {
        for j in 1..=n {
            out.push(match (n, k) {
                (1, 1) => "a".to_string(),
                (_, 1) => format!("a{}", j),
                (1, _) => format!("a{}", i),
                _ if n < 10 && k < 10 => format!("a{}{}", i, j),
                _ => format!("a{}_{}", i, j),
            });
        }
    }
    out
}

/// The graph chart of the Grassmannian over the x-plane of `germ`.
pub fn grassmann_map(germ: &MapGerm) -> Result<ModificationMap> {
    let names = grassmann_names(germ.n(), germ.k());
    let refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
    grassmann_map_named(germ, &refs)
}

/// As [`grassmann_map`] with caller-chosen names for the `n*k` chart coordinates (row-major).
pub fn grassmann_map_named(germ: &MapGerm, names: &[&str]) -> Result<ModificationMap> {
    let (n, k) = (germ.n(), germ.k());
    if n == 0 || k == 0 {
        return Err(Error::Dimension("grassmann modification needs n, k >= 1".into()));
    }
    if names.len() != n * k {
        return Err(Error::Dimension(format!("expected {} chart coordinates, got {}", n * k, names.len())));
    }
    let mut vars: Vec<String> = germ.x_names();
    for nm in names {
        let nm = fresh_name(&vars, nm.to_string());
        vars.push(nm);
    }
    let source = Ring::new(&vars, germ.ring.field());
    let x: Vec<usize> = (0..n).collect();
    let new: Vec<usize> = (n..n + n * k).collect();
    let images = (0..germ.ring.nvars())
        .map(|v| {
            if let Some(xi) = germ.x.iter().position(|&g| g == v) {
                Poly::var(&source, xi)
            } else if let Some(i) = germ.y.iter().position(|&g| g == v) {
                let mut acc = Poly::zero(&source);
                for j in 0..n {
                    acc = &acc + &(&Poly::var(&source, new[i * n + j]) * &Poly::var(&source, j));
                }
                acc
            } else {
                Poly::zero(&source)
            }
        })
        .collect();
    Ok(ModificationMap { source, target: germ.ring.clone(), images, x, new })
}

/// `β(x, u) = (x, f(x, u))`.
pub fn family_map(germ: &MapGerm, fam: &Family) -> Result<ModificationMap> {
    if fam.comps.len() != germ.k() {
        return Err(Error::Dimension(format!("family has {} components, expected k = {}", fam.comps.len(), germ.k())));
    }
    let images = (0..germ.ring.nvars())
        .map(|v| {
            if let Some(i) = germ.y.iter().position(|&g| g == v) {
                Ok(fam.comps[i].clone())
            } else {
                Poly::var_named(&fam.ring, germ.ring.name(v))
            }
        })
        .collect::<Result<Vec<_>>>()?;
    let x = germ.x.iter().map(|&v| fam.ring.var_index(germ.ring.name(v))).collect::<Result<Vec<_>>>()?;
    Ok(ModificationMap { source: fam.ring.clone(), target: germ.ring.clone(), images, x, new: fam.u.clone() })
}

impl ModificationMap {
    pub fn apply(&self, p: &Poly) -> Poly {
        p.substitute(&self.source, &self.images)
    }

    pub fn display(&self) -> Vec<String> {
        (0..self.target.nvars())
            .map(|v| format!("{} -> {}", self.target.name(v), self.images[v]))
            .collect()
    }
}

/// `G = F ∘ β`, with the new coordinates as the parameter directions.
pub fn modify(f: &MapGerm, beta: &ModificationMap) -> Result<MapGerm> {
    if !crate::poly::same_ring(&f.ring, &beta.target) {
        return Err(Error::Dimension("modification targets a different ring".into()));
    }
    let comps = f.comps.iter().map(|c| beta.apply(c)).collect();
    MapGerm::new(&beta.source, beta.x.clone(), beta.new.clone(), comps)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TieBreak {
    Smallest,
    Largest,
}

/// Writes `q_i = Σ_j p_ij x_j`; returns `p` row-major as polynomials in the x-variables of `germ`.
pub fn lift_components(germ: &MapGerm, q: &Transversal, tie: TieBreak) -> Result<Vec<Poly>> {
    q.validate(germ)?;
    let (n, k) = (germ.n(), germ.k());
    let mut p = vec![Poly::zero(&germ.ring); n * k];
    for (i, qi) in q.comps.iter().enumerate() {
        let mut cols: Vec<Vec<(Mono, Scalar)>> = vec![Vec::new(); n];
        for (m, c) in qi.terms() {
            let support = germ.x.iter().enumerate().filter(|(_, &v)| m.exp(v) > 0).map(|(j, _)| j);
            let j = match tie {
                TieBreak::Smallest => support.min(),
                TieBreak::Largest => support.max(),
            }
            .ok_or_else(|| Error::Precondition(format!("`{}` has a term without x", qi)))?;
            let xj = Mono::var(germ.ring.nvars(), germ.x[j]);
            cols[j].push((xj.quotient_of(m), c.clone()));
        }
        for (j, terms) in cols.into_iter().enumerate() {
            p[i * n + j] = Poly::from_terms(&germ.ring, terms);
        }
    }
    Ok(p)
}

/// Lifted jet on the modified germ, recentred so it passes through the origin.
#[derive(Clone, Debug)]
pub struct Lift {
    pub germ: MapGerm,
    pub transversal: Transversal,
    /// The chart point `p(0)` the modified germ was recentred at.
    pub center: Vec<Scalar>,
}

/// Lift `q` through the Grassmann chart: `Γ(q) = β(Γ(p))`, then move `p(0)` to the origin.
pub fn lift_transversal(germ: &MapGerm, q: &Transversal, tie: TieBreak) -> Result<Lift> {
    let beta = grassmann_map(germ)?;
    let g = modify(germ, &beta)?;
    let p = lift_components(germ, q, tie)?;
    let center: Vec<Scalar> = p.iter().map(|c| c.constant_term()).collect();
    let shifted = recenter(&g, &center);
    let comps = p
        .iter()
        .zip(&center)
        .map(|(c, a)| (c - &Poly::constant(&germ.ring, a.clone())).to_ring(&g.ring))
        .collect::<Result<Vec<_>>>()?;
    let transversal = Transversal::new(&shifted, comps)?;
    Ok(Lift { germ: shifted, transversal, center })
}

/// `G(x, a + A)`.
pub fn recenter(g: &MapGerm, point: &[Scalar]) -> MapGerm {
    let images: Vec<Poly> = (0..g.ring.nvars())
        .map(|v| {
            let var = Poly::var(&g.ring, v);
            match g.y.iter().position(|&y| y == v) {
                Some(i) if !point[i].is_zero() => &var + &Poly::constant(&g.ring, point[i].clone()),
                _ => var,
            }
        })
        .collect();
    let comps = g.comps.iter().map(|c| c.substitute(&g.ring, &images)).collect();
    MapGerm { ring: g.ring.clone(), x: g.x.clone(), y: g.y.clone(), comps }
}
