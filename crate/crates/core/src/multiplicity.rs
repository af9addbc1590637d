//! Buchsbaum-Rim multiplicity through generic combinations, Milnor numbers, the μ* sequence,
//! the associated multiplicity of a germ and a transversal, and sampled generic values.

use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::jacobian::{jm_transversal, MapGerm, Transversal};
use crate::localstd::{colength_with, minors, Colength, ModuleVec, Submodule, DEFAULT_BOUND};
use crate::poly::{Poly, Ring};
use crate::rng::RationalStream;
use crate::scalar::Scalar;

pub const DEFAULT_SAMPLES: usize = 5;

/// Knobs shared by every sampled computation.
#[derive(Clone, Copy, Debug)]
pub struct Sampling {
    pub samples: usize,
    pub seed: u64,
    pub bound: u32,
}

impl Default for Sampling {
    fn default() -> Sampling {
        Sampling { samples: DEFAULT_SAMPLES, seed: crate::rng::DEFAULT_SEED, bound: DEFAULT_BOUND }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SampleRow {
    pub point: Vec<String>,
    pub value: Colength,
}

#[derive(Clone, Debug, Serialize)]
pub struct MultiplicityResult {
    pub value: Colength,
    pub samples_used: usize,
    pub samples: Vec<SampleRow>,
    pub seed: u64,
    /// Whether the value came from one exact colength rather than a min over samples.
    pub exact: bool,
}

/// Minimum of the finite values; otherwise `Infinite` if every value is, else `Indeterminate`.
pub fn generic_min(values: &[Colength]) -> Colength {
    if let Some(m) = values.iter().filter_map(|v| v.finite()).min() {
        return Colength::Finite(m);
    }
    if !values.is_empty() && values.iter().all(|v| v.is_infinite()) {
        Colength::Infinite
    } else {
        Colength::Indeterminate
    }
}

fn combine(gens: &[ModuleVec], coeffs: &[Scalar], ring: &Arc<Ring>, rank: usize) -> ModuleVec {
    let mut out = vec![Poly::zero(ring); rank];
    for (g, c) in gens.iter().zip(coeffs) {
        for (o, p) in out.iter_mut().zip(g) {
            *o = &*o + &p.scale(c);
        }
    }
    out
}

/// `e(M)` on a `d`-dimensional germ: colength of `d + p - 1` generic combinations.
pub fn br_multiplicity(m: &Submodule, d: usize, s: Sampling) -> MultiplicityResult {
    let want = (d + m.rank).saturating_sub(1).max(1);
    let gens: Vec<ModuleVec> = m.gens.iter().filter(|g| g.iter().any(|p| !p.is_zero())).cloned().collect();
    if gens.len() <= want {
        let v = colength_with(m, s.bound);
        return MultiplicityResult {
            value: v,
            samples_used: 1,
            samples: vec![SampleRow { point: vec!["generators".into()], value: v }],
            seed: s.seed,
            exact: true,
        };
    }
    let whole = colength_with(m, s.bound);
    if whole.is_infinite() {
        return MultiplicityResult {
            value: Colength::Infinite,
            samples_used: 0,
            samples: vec![SampleRow { point: vec!["module".into()], value: whole }],
            seed: s.seed,
            exact: true,
        };
    }
    let mut rng = RationalStream::derived(s.seed, "br");
    let mut rows = Vec::new();
    for _ in 0..s.samples.max(1) {
        let mut combos = Vec::with_capacity(want);
        let mut label = Vec::new();
        for _ in 0..want {
            let c = rng.vec(gens.len());
            label.push(format!("[{}]", c.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")));
            combos.push(combine(&gens, &c, &m.ring, m.rank));
        }
        let sub = Submodule { ring: m.ring.clone(), rank: m.rank, gens: combos, quotient: m.quotient.clone() };
        rows.push(SampleRow { point: label, value: colength_with(&sub, s.bound) });
    }
    let values: Vec<Colength> = rows.iter().map(|r| r.value).collect();
    MultiplicityResult { value: generic_min(&values), samples_used: rows.len(), samples: rows, seed: s.seed, exact: false }
}

/// Colength of the ideal of all partial derivatives.
pub fn milnor_number(g: &Poly, bound: u32) -> Result<Colength> {
    if !g.constant_term().is_zero() {
        return Err(Error::Precondition(format!("`{}` does not vanish at the origin", g)));
    }
    let ring = g.ring().clone();
    let partials = (0..ring.nvars()).map(|v| g.partial_derivative(v)).collect();
    Ok(colength_with(&Submodule::ideal(&ring, partials, vec![]), bound))
}

/// Rank of the linear parts; the germ is smooth when it equals the number of equations.
fn linear_rank(fs: &[Poly]) -> usize {
    let ring = match fs.first() {
        Some(f) => f.ring().clone(),
        None => return 0,
    };
    let mut rows: Vec<Vec<Scalar>> = fs
        .iter()
        .map(|f| (0..ring.nvars()).map(|v| f.coeff(&crate::poly::Mono::var(ring.nvars(), v))).collect())
        .collect();
    let mut rank = 0;
    for c in 0..ring.nvars() {
        let Some(p) = (rank..rows.len()).find(|&r| !rows[r][c].is_zero()) else { continue };
        rows.swap(rank, p);
        let inv = rows[rank][c].inv();
        for r in 0..rows.len() {
            if r != rank && !rows[r][c].is_zero() {
                let f = &rows[r][c] * &inv;
                for j in 0..ring.nvars() {
                    let d = &f * &rows[rank][j];
                    rows[r][j] = &rows[r][j] - &d;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Milnor number of an isolated complete intersection, by recursion on the number of equations:
/// `μ(f_1..f_k) + μ(f_1..f_(k-1)) = colength(f_1..f_(k-1), k x k minors of d(f_1..f_k))`.
pub fn icis_milnor(fs: &[Poly], s: Sampling) -> Result<Colength> {
    let Some(first) = fs.first() else { return Ok(Colength::Finite(0)) };
    let ring = first.ring().clone();
    if fs.iter().any(|f| !f.constant_term().is_zero()) {
        return Err(Error::Precondition("equations must vanish at the origin".into()));
    }
    if linear_rank(fs) == fs.len() {
        return Ok(Colength::Finite(0));
    }
    let k = fs.len();
    if k == 1 {
        return milnor_number(first, s.bound);
    }
    let mut rng = RationalStream::derived(s.seed, "icis");
    let mut best: Vec<Colength> = Vec::new();
    for _ in 0..s.samples.max(1) {
        let mixed: Vec<Poly> = (0..k)
            .map(|_| {
                let c = rng.vec(k);
                fs.iter().zip(&c).fold(Poly::zero(&ring), |acc, (f, a)| &acc + &f.scale(a))
            })
            .collect();
        best.push(icis_chain(&mixed, s)?);
    }
    Ok(generic_min(&best))
}

fn icis_chain(fs: &[Poly], s: Sampling) -> Result<Colength> {
    let k = fs.len();
    let ring = fs[0].ring().clone();
    if k == 0 {
        return Ok(Colength::Finite(0));
    }
    if k == 1 {
        return milnor_number(&fs[0], s.bound);
    }
    let rows: Vec<Vec<Poly>> = fs.iter().map(|f| (0..ring.nvars()).map(|v| f.partial_derivative(v)).collect()).collect();
    let mut gens = fs[..k - 1].to_vec();
    gens.extend(minors(&rows, k));
    let total = colength_with(&Submodule::ideal(&ring, gens, vec![]), s.bound);
    let lower = if linear_rank(&fs[..k - 1]) == k - 1 { Colength::Finite(0) } else { icis_chain(&fs[..k - 1], s)? };
    Ok(match (total, lower) {
        (Colength::Finite(a), Colength::Finite(b)) if a >= b => Colength::Finite(a - b),
        (Colength::Finite(_), Colength::Finite(_)) => Colength::Indeterminate,
        (Colength::Infinite, _) => Colength::Infinite,
        _ => Colength::Indeterminate,
    })
}

/// Restriction to the graph of `x_j = Σ c_jl x_l` for the last `i` variables.
pub fn generic_section(fs: &[Poly], i: usize, rng: &mut RationalStream) -> (Vec<Poly>, Vec<String>) {
    let ring = fs[0].ring().clone();
    let m = ring.nvars();
    let keep = m - i;
    let names: Vec<&str> = (0..keep).map(|v| ring.name(v)).collect();
    let sub = Ring::new(&names, ring.field());
    let mut forms = Vec::new();
    let images: Vec<Poly> = (0..m)
        .map(|v| {
            if v < keep {
                Poly::var(&sub, v)
            } else {
                let c = rng.vec(keep);
                let p = c.iter().enumerate().fold(Poly::zero(&sub), |acc, (l, a)| &acc + &Poly::var(&sub, l).scale(a));
                forms.push(format!("{} = {}", ring.name(v), p));
                p
            }
        })
        .collect();
    (fs.iter().map(|f| f.substitute(&sub, &images)).collect(), forms)
}

#[derive(Clone, Debug, Serialize)]
pub struct MuStar {
    pub sequence: Vec<Colength>,
    pub forms: Vec<Vec<String>>,
    pub seed: u64,
}

/// `μ_i = μ(X ∩ H_i)` for generic codimension-`i` planes, `i = 0..=d`, then `μ_(d+1) = 1`.
pub fn mu_star(fs: &[Poly], s: Sampling) -> Result<MuStar> {
    let ring = fs.first().ok_or_else(|| Error::Precondition("no equations".into()))?.ring().clone();
    let m = ring.nvars();
    if fs.len() > m {
        return Err(Error::Dimension("more equations than variables".into()));
    }
    let d = m - fs.len();
    let smooth = linear_rank(fs) == fs.len();
    let mut seq = Vec::with_capacity(d + 2);
    let mut forms = Vec::with_capacity(d + 2);
    seq.push(if smooth { Colength::Finite(0) } else { icis_milnor(fs, s)? });
    forms.push(vec![]);
    let mut rng = RationalStream::derived(s.seed, "sections");
    for i in 1..=d {
        if smooth {
            seq.push(Colength::Finite(0));
            forms.push(vec![]);
            continue;
        }
        let mut vals = Vec::new();
        let mut used = Vec::new();
        for _ in 0..s.samples.max(1) {
            let (sec, f) = generic_section(fs, i, &mut rng);
            vals.push(icis_milnor(&sec, Sampling { samples: 1, ..s })?);
            used = f;
        }
        seq.push(generic_min(&vals));
        forms.push(used);
    }
    seq.push(if smooth { Colength::Finite(0) } else { Colength::Finite(1) });
    forms.push(vec![]);
    Ok(MuStar { sequence: seq, forms, seed: s.seed })
}

/// `F(x, f(x))` and the generators of `JM(F)_P` restricted to `P`, over the x-variables only.
pub fn restrict_to_transversal(germ: &MapGerm, f: &Transversal) -> Result<(Arc<Ring>, Vec<Poly>, Vec<ModuleVec>)> {
    let names: Vec<String> = germ.x_names();
    let xr = Ring::new(&names, germ.ring.field());
    let images: Vec<Poly> = (0..germ.ring.nvars())
        .map(|v| {
            if let Some(j) = germ.y.iter().position(|&y| y == v) {
                f.comps[j].to_ring(&xr)
            } else if let Some(i) = germ.x.iter().position(|&x| x == v) {
                Ok(Poly::var(&xr, i))
            } else {
                Ok(Poly::zero(&xr))
            }
        })
        .collect::<Result<Vec<_>>>()?;
    let jp = jm_transversal(germ, f)?;
    let quotient = germ.comps.iter().map(|c| c.substitute(&xr, &images)).collect();
    let gens = jp.gens.iter().map(|g| g.iter().map(|p| p.substitute(&xr, &images)).collect()).collect();
    Ok((xr, quotient, gens))
}

/// `e(JM(F)_P, O_(X∩P))` with `dim X∩P = n - p`.
pub fn associated_multiplicity(germ: &MapGerm, f: &Transversal, s: Sampling) -> Result<MultiplicityResult> {
    let (xr, quotient, gens) = restrict_to_transversal(germ, f)?;
    if germ.n() < germ.p() {
        return Err(Error::Dimension(format!("X∩P would have negative dimension (n = {}, p = {})", germ.n(), germ.p())));
    }
    let d = germ.n() - germ.p();
    let m = Submodule { ring: xr, rank: germ.p(), gens, quotient };
    Ok(br_multiplicity(&m, d, s))
}

/// Generic value of an invariant over a parameter space: min over `K` sampled points.
pub fn generic_value<F>(nparams: usize, s: Sampling, label: &str, mut eval: F) -> Result<MultiplicityResult>
where
    F: FnMut(&[Scalar]) -> Result<Colength>,
{
    let mut rng = RationalStream::derived(s.seed, label);
    let mut rows = Vec::new();
    for _ in 0..s.samples.max(1) {
        let pt = rng.vec(nparams);
        let v = eval(&pt)?;
        rows.push(SampleRow { point: pt.iter().map(|c| c.to_string()).collect(), value: v });
    }
    let values: Vec<Colength> = rows.iter().map(|r| r.value).collect();
    Ok(MultiplicityResult { value: generic_min(&values), samples_used: rows.len(), samples: rows, seed: s.seed, exact: false })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse;
    use crate::scalar::Field;

    fn polys(vars: &[&str], src: &[&str]) -> Vec<Poly> {
        let r = Ring::new(vars, Field::Q);
        src.iter().map(|s| parse(s, &r).unwrap()).collect()
    }

    #[test]
    fn multiplicity_examples() {
        let s = Sampling::default();
        let g = polys(&["x", "y"], &["x", "y"]);
        let m = Submodule::ideal(g[0].ring(), g.clone(), vec![]);
        assert_eq!(br_multiplicity(&m, 2, s).value, Colength::Finite(1));
        let g = polys(&["x", "y"], &["x^2", "y^2", "x*y"]);
        let m = Submodule::ideal(g[0].ring(), g.clone(), vec![]);
        assert_eq!(br_multiplicity(&m, 2, s).value, Colength::Finite(4));
        let g = polys(&["x", "y"], &["x^2", "y^3"]);
        let m = Submodule::ideal(g[0].ring(), g.clone(), vec![]);
        let r = br_multiplicity(&m, 2, s);
        assert!(r.exact);
        assert_eq!(r.value, Colength::Finite(6));
    }

    #[test]
    fn milnor_examples() {
        let g = polys(&["x", "y", "z"], &["x^2+y^2+z^2", "x^3+y^2", "x^3+y^3+z^3"]);
        assert_eq!(milnor_number(&g[0], 20).unwrap(), Colength::Finite(1));
        assert_eq!(milnor_number(&g[1], 20).unwrap(), Colength::Infinite);
        let g = polys(&["x", "y"], &["x^3+y^2"]);
        assert_eq!(milnor_number(&g[0], 20).unwrap(), Colength::Finite(2));
        let g = polys(&["x", "y", "z"], &["x^3+y^3+z^3"]);
        assert_eq!(milnor_number(&g[0], 20).unwrap(), Colength::Finite(8));
    }

    #[test]
    fn mu_star_examples() {
        let s = Sampling::default();
        let seq = |vars: &[&str], f: &str| {
            let g = polys(vars, &[f]);
            mu_star(&g, s).unwrap().sequence.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",")
        };
        assert_eq!(seq(&["x", "y", "z"], "x^3+y^3+z^3"), "8,4,2,1");
        assert_eq!(seq(&["x", "y"], "x^2+y^2"), "1,1,1");
        assert_eq!(seq(&["x"], "x"), "0,0");
    }

    #[test]
    fn icis_curve_milnor() {
        // the space curve (x^2 - y^3, z) is the cusp: μ = 2
        let g = polys(&["x", "y", "z"], &["x^2 - y^3 + z^2", "z + x*y"]);
        assert_eq!(icis_milnor(&g, Sampling::default()).unwrap(), Colength::Finite(2));
    }

    #[test]
    fn associated_multiplicity_of_a_cone_section() {
        let r = Ring::new(&["x", "y", "z"], Field::Q);
        let germ = MapGerm::from_names(&r, &["x", "y"], &["z"], vec![parse("x^3+y^3+z^3", &r).unwrap()]).unwrap();
        let s = Sampling::default();
        assert_eq!(associated_multiplicity(&germ, &Transversal::zero(&germ), s).unwrap().value, Colength::Finite(6));
        let f = Transversal::new(&germ, vec![parse("x", &r).unwrap()]).unwrap();
        assert_eq!(associated_multiplicity(&germ, &f, s).unwrap().value, Colength::Finite(6));
        let f = Transversal::new(&germ, vec![parse("-x", &r).unwrap()]).unwrap();
        assert_eq!(associated_multiplicity(&germ, &f, s).unwrap().value, Colength::Infinite);
    }

    #[test]
    fn generic_value_of_a_pencil() {
        let r = Ring::new(&["x", "y"], Field::Q);
        let s = Sampling::default();
        let mu = |c: &Scalar| {
            let k = &Scalar::one() + &c.pow(3);
            let g = &parse("x^3", &r).unwrap() + &parse("y^3", &r).unwrap().scale(&k);
            milnor_number(&g, 20)
        };
        let res = generic_value(1, s, "pencil", |pt| mu(&pt[0])).unwrap();
        assert_eq!(res.value, Colength::Finite(4));
        assert_eq!(mu(&Scalar::from_int(-1)).unwrap(), Colength::Infinite);
    }
}
