#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use flagsplit::exactpoly::{CoefficientRing, Monomial, Polynomial, VarId, Vars};
use flagsplit::polymatrix::PolyMatrix;
use num_rational::BigRational;
use rand::Rng;

pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

fn parity(p: &[usize]) -> i64 {
    let mut inv = 0;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if p[i] > p[j] {
                inv += 1;
            }
        }
    }
    if inv % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Leibniz formula, summed over all n! permutations.
pub fn leibniz(m: &PolyMatrix) -> Polynomial {
    let n = m.nrows();
    let ring = m.ring();
    let mut acc = Polynomial::zero(ring);
    for p in permutations(n) {
        let mut term = Polynomial::constant(ring, parity(&p));
        for (i, &j) in p.iter().enumerate() {
            term = &term * m.get(i, j);
        }
        acc = &acc + &term;
    }
    acc
}

pub fn random_poly<R: Rng>(rng: &mut R, ring: CoefficientRing, vars: &[VarId], terms: usize, max_exp: u32) -> Polynomial {
    let it = (0..terms).map(|_| {
        let m = Monomial::from_pairs(vars.iter().map(|&v| (v, rng.gen_range(0..=max_exp))));
        (m, BigRational::from_integer(rng.gen_range(-4i64..=4).into()))
    });
    Polynomial::from_terms(ring, it).unwrap()
}

/// Square matrix whose entries are sparse polynomials (constants with probability one half).
pub fn random_matrix<R: Rng>(rng: &mut R, n: usize, vars: &[VarId]) -> PolyMatrix {
    let mut m = PolyMatrix::zeros(CoefficientRing::Integers, n, n);
    for i in 0..n {
        for j in 0..n {
            let p = if rng.gen_bool(0.5) {
                Polynomial::constant(CoefficientRing::Integers, rng.gen_range(-5..=5))
            } else {
                random_poly(rng, CoefficientRing::Integers, vars, 2, 1)
            };
            m.set(i, j, p);
        }
    }
    m
}

pub fn fresh_vars(names: &[&str]) -> (Vars, Vec<VarId>) {
    let mut vars = Vars::new();
    let ids = names.iter().map(|n| vars.intern(n)).collect();
    (vars, ids)
}

/// Over ℤ/p, `f^p` equals `f` with every variable raised to the `p`-th power.
pub fn frobenius_holds(f: &Polynomial, p: u32) -> bool {
    let images: BTreeMap<VarId, Polynomial> = f
        .variables()
        .into_iter()
        .map(|v| (v, Polynomial::monomial(f.ring(), Monomial::from_pairs([(v, p)]), 1)))
        .collect();
    f.pow(p) == f.substitute(&images)
}

/// Whether some order of all variables gives a chain of exact canonical quotients ending at a nonzero constant.
pub fn exhaustive_rnc(f: &Polynomial, ids: &[VarId]) -> bool {
    permutations(ids.len()).into_iter().any(|perm| {
        let mut zeroed = BTreeSet::new();
        let mut cur = f.clone();
        for &i in &perm {
            match cur.zero_out_and_divide(&zeroed, ids[i]) {
                Ok(next) => cur = next,
                Err(_) => return false,
            }
            zeroed.insert(ids[i]);
        }
        cur.constant_value().is_some_and(|c| c != BigRational::from_integer(0.into()))
    })
}

/// Builds `f_0` backwards from `f_N = 1` via `f_{i-1} = t_i f_i + g_i` with
/// `g_i` in the ideal of `t_1..t_{i-1}`, so `f_0` has a chain in the order `ids`.
pub fn random_rnc_poly<R: Rng>(rng: &mut R, ids: &[VarId]) -> Polynomial {
    let ring = CoefficientRing::Integers;
    let mut f = Polynomial::one(ring);
    for i in (0..ids.len()).rev() {
        f = &Polynomial::var(ring, ids[i]) * &f;
        if i > 0 {
            let earlier = ids[rng.gen_range(0..i)];
            let g = random_poly(rng, ring, ids, 2, 1);
            f = &f + &(&Polynomial::var(ring, earlier) * &g);
        }
    }
    f
}
