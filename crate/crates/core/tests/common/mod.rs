//! Brute-force colength by linear algebra, independent of the standard-basis code.
//!
//! `dim O^p / (M + I O^p + m^(D+1) O^p)` is the corank of the multiplication matrix on all
//! (position, monomial) pairs of degree <= D. Two equal consecutive values mean
//! `m^(D+1) O^p ⊆ M + m^(D+2) O^p`, hence (Nakayama) the value is the colength.
#![allow(dead_code)]

use std::collections::HashMap;
use std::sync::Arc;

use eqsing::poly::monomials_of_degree;
use eqsing::{parse, Field, Poly, Ring, Scalar};

pub fn ring(names: &[&str]) -> Arc<Ring> {
    Ring::new(names, Field::Q)
}

pub fn p(s: &str, r: &Arc<Ring>) -> Poly {
    parse(s, r).unwrap_or_else(|e| panic!("{}: {}", s, e))
}

fn rank(mut rows: Vec<Vec<Scalar>>) -> usize {
    let cols = rows.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..cols {
        let Some(piv) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else { continue };
        rows.swap(r, piv);
        let inv = rows[r][c].inv();
        let pivot: Vec<Scalar> = rows[r].iter().map(|a| a * &inv).collect();
        for i in r + 1..rows.len() {
            if !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                for j in c..cols {
                    let t = &f * &pivot[j];
                    rows[i][j] = &rows[i][j] - &t;
                }
            }
        }
        rows[r] = pivot;
        r += 1;
    }
    r
}

fn truncated_dim(gens: &[Vec<Poly>], rank_p: usize, n: usize, d: u32) -> usize {
    let monos: Vec<Vec<u32>> = (0..=d).flat_map(|k| monomials_of_degree(n, k)).map(|m| m.exps()).collect();
    let mut index = HashMap::new();
    for pos in 0..rank_p {
        for m in &monos {
            let next = index.len();
            index.insert((pos, m.clone()), next);
        }
    }
    let mut rows = Vec::new();
    for g in gens {
        let Some(ord) = g.iter().filter_map(|c| c.order()).min() else { continue };
        for m in monos.iter().filter(|m| m.iter().sum::<u32>() + ord <= d) {
            let mut row = vec![Scalar::zero(); index.len()];
            for (pos, comp) in g.iter().enumerate() {
                for (gm, c) in comp.terms() {
                    let e: Vec<u32> = gm.exps().iter().zip(m).map(|(a, b)| a + b).collect();
                    if let Some(&i) = index.get(&(pos, e)) {
                        row[i] = &row[i] + c;
                    }
                }
            }
            rows.push(row);
        }
    }
    index.len() - rank(rows)
}

/// Colength of the module generated by `gens` plus `quotient * e_i`; `None` if not stable by `dmax`.
pub fn module_colength(gens: &[Vec<Poly>], quotient: &[Poly], rank_p: usize, dmax: u32) -> Option<usize> {
    let ring = gens.iter().flatten().chain(quotient).next().expect("some polynomial").ring().clone();
    let n = ring.nvars();
    let mut all: Vec<Vec<Poly>> = gens.to_vec();
    for q in quotient {
        for pos in 0..rank_p {
            let mut v = vec![Poly::zero(&ring); rank_p];
            v[pos] = q.clone();
            all.push(v);
        }
    }
    let mut prev = truncated_dim(&all, rank_p, n, 0);
    for d in 1..=dmax {
        let cur = truncated_dim(&all, rank_p, n, d);
        if cur == prev {
            return Some(cur);
        }
        prev = cur;
    }
    None
}

pub fn ideal_colength(gens: &[Poly], dmax: u32) -> Option<usize> {
    let vecs: Vec<Vec<Poly>> = gens.iter().map(|g| vec![g.clone()]).collect();
    module_colength(&vecs, &[], 1, dmax)
}

pub fn milnor(f: &Poly, dmax: u32) -> Option<usize> {
    let n = f.ring().nvars();
    let partials: Vec<Poly> = (0..n).map(|i| f.partial_derivative(i)).collect();
    ideal_colength(&partials, dmax)
}
