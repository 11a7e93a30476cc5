//! Classical group data in matrix conventions where the diagonal torus is a
//! maximal torus and upper triangular matrices form a Borel subgroup.
//!
//! * `A`: `SL_n` on `k^n`.
//! * `C`: `Sp_2n` preserving `⟨e_i, e_j⟩ = ±1` when `j = i★ = 2n+1-i` (`+` for `i < j`).
//! * `D`: `SO_2n` preserving `(e_i, e_j) = 1` when `j = i★`.
//!
//! Roots are not tabulated: they are obtained by solving `XᵀJ + JX = 0`
//! (or `tr X = 0` for `SL_n`) on each torus-weight space of matrix units and
//! then sorted by sign and height. The tabulated simple roots and fundamental
//! weights are only used as cross-checks of the computed data.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactpoly::{CoefficientRing, Polynomial};
use crate::linalg::{self, q};
use crate::polymatrix::{MatrixError, PolyMatrix};

const ZZ: CoefficientRing = CoefficientRing::Integers;

#[derive(Debug, Error)]
pub enum RootDataError {
    #[error("unsupported group: family {0}, n = {1}")]
    Unsupported(Family, usize),
    #[error("unsupported parabolic for family {0}: {1}")]
    BadParabolic(Family, String),
    #[error("root data inconsistency: {0}")]
    Inconsistent(String),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

/// Classical family of the group.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    #[serde(rename = "sl")]
    A,
    #[serde(rename = "sp")]
    C,
    #[serde(rename = "so")]
    D,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::A => "sl",
            Family::C => "sp",
            Family::D => "so",
        })
    }
}

impl std::str::FromStr for Family {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "sl" | "A" | "a" => Ok(Family::A),
            "sp" | "C" | "c" => Ok(Family::C),
            "so" | "D" | "d" => Ok(Family::D),
            _ => Err(format!("unknown family '{s}' (expected sl, sp or so)")),
        }
    }
}

/// A character of the diagonal torus, stored as twice its coordinates in
/// the `χ` basis so that spin weights stay integral.
///
/// For `SL_n` weights are compared modulo `χ_1 + … + χ_n`.
#[derive(Clone, Debug, Serialize)]
pub struct Weight {
    #[serde(skip)]
    family: Family,
    doubled: Vec<i64>,
}

impl Weight {
    pub fn zero(family: Family, len: usize) -> Self {
        Weight {
            family,
            doubled: vec![0; len],
        }
    }

    pub fn from_doubled(family: Family, doubled: Vec<i64>) -> Self {
        Weight { family, doubled }
    }

    /// Integral weight from ordinary `χ` coordinates.
    pub fn from_chi(family: Family, coords: &[i64]) -> Self {
        Weight {
            family,
            doubled: coords.iter().map(|c| 2 * c).collect(),
        }
    }

    pub fn doubled(&self) -> &[i64] {
        &self.doubled
    }

    pub fn family(&self) -> Family {
        self.family
    }

    /// Canonical representative: for `SL_n` the last coordinate is shifted to zero.
    pub fn normalized(&self) -> Vec<i64> {
        match self.family {
            Family::A => {
                let last = *self.doubled.last().unwrap_or(&0);
                // Shifting by a multiple of (2,..,2) is zero on the SL torus.
                if last % 2 == 0 {
                    self.doubled.iter().map(|c| c - last).collect()
                } else {
                    self.doubled.clone()
                }
            }
            _ => self.doubled.clone(),
        }
    }

    pub fn add(&self, other: &Weight) -> Weight {
        Weight {
            family: self.family,
            doubled: self
                .doubled
                .iter()
                .zip(&other.doubled)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn neg(&self) -> Weight {
        self.scale(-1)
    }

    pub fn scale(&self, k: i64) -> Weight {
        Weight {
            family: self.family,
            doubled: self.doubled.iter().map(|a| a * k).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.normalized().iter().all(|&c| c == 0)
    }

    /// Euclidean inner product of the doubled coordinates.
    fn dot(&self, other: &Weight) -> i64 {
        self.doubled.iter().zip(&other.doubled).map(|(a, b)| a * b).sum()
    }

    /// `⟨λ, α^∨⟩ = 2(λ, α)/(α, α)`.
    pub fn pair_coroot(&self, alpha: &Weight) -> BigRational {
        BigRational::new(BigInt::from(2 * self.dot(alpha)), BigInt::from(alpha.dot(alpha)))
    }
}

impl PartialEq for Weight {
    fn eq(&self, other: &Self) -> bool {
        self.normalized() == other.normalized()
    }
}

impl Eq for Weight {}

impl PartialOrd for Weight {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Weight {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.normalized().cmp(&other.normalized())
    }
}

impl std::hash::Hash for Weight {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.normalized().hash(state)
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.doubled.iter().map(|c| c.to_string()).collect();
        write!(f, "({})/2", parts.join(","))
    }
}

/// A signed permutation of the coordinate vectors `e_1..e_m`:
/// `e_j ↦ sign_j · e_{target_j}` (0-based).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SignedPerm {
    images: Vec<(usize, i8)>,
}

impl SignedPerm {
    pub fn identity(m: usize) -> Self {
        SignedPerm {
            images: (0..m).map(|j| (j, 1)).collect(),
        }
    }

    pub fn images(&self) -> &[(usize, i8)] {
        &self.images
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(j, &(t, s))| t == j && s == 1)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &SignedPerm) -> SignedPerm {
        SignedPerm {
            images: other
                .images
                .iter()
                .map(|&(k, s)| {
                    let (t, s2) = self.images[k];
                    (t, s * s2)
                })
                .collect(),
        }
    }

    pub fn act(&self, w: &Weight) -> Weight {
        let mut out = vec![0; w.doubled.len()];
        for (j, &(t, s)) in self.images.iter().enumerate() {
            out[t] += s as i64 * w.doubled[j];
        }
        Weight::from_doubled(w.family, out)
    }

    /// 1-based one-line notation, signs dropped.
    pub fn one_line(&self) -> Vec<usize> {
        self.images.iter().map(|&(t, _)| t + 1).collect()
    }

    pub fn signs(&self) -> Vec<i8> {
        self.images.iter().map(|&(_, s)| s).collect()
    }
}

/// A Weyl group element together with a reduced word in the simple reflections (1-based).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeylWord {
    pub perm: SignedPerm,
    pub word: Vec<usize>,
}

/// A root together with a spanning vector of its root space.
#[derive(Clone, Debug)]
pub struct RootVector {
    pub root: Weight,
    pub matrix: PolyMatrix,
    pub positive: bool,
}

/// Standard maximal parabolic: all simple roots but `excluded` (1-based) lie in the Levi.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Parabolic {
    pub excluded: usize,
}

/// Complete root datum of a classical group in the conventions above.
#[derive(Clone, Debug)]
pub struct GroupDatum {
    pub family: Family,
    pub n: usize,
    /// Matrix size `N`.
    pub size: usize,
    pub rank: usize,
    /// Gram matrix of the invariant form (absent for `SL_n`).
    pub form: Option<PolyMatrix>,
    pub roots: Vec<RootVector>,
    pub positive_roots: Vec<Weight>,
    pub simple_roots: Vec<Weight>,
    /// Normalised `(X_α, X_{-α})` with `[[X_α, X_{-α}], X_α] = 2 X_α`, one per simple root.
    pub simple_pairs: Vec<(PolyMatrix, PolyMatrix)>,
    pub fundamental_weights: Vec<Weight>,
    pub rho: Weight,
    /// Negative roots with their generators, ordered by height then doubled coordinates.
    pub negative_generators: Vec<(Weight, PolyMatrix)>,
    /// Simple-root coordinates of each positive root, aligned with `positive_roots`.
    pub positive_root_coefficients: Vec<Vec<i64>>,
}

/// `k★ = 2n + 1 - k` on 1-based indices.
pub fn star(n: usize, k: usize) -> usize {
    2 * n + 1 - k
}

/// The Gram matrix of the invariant form, if any.
pub fn form_matrix(family: Family, n: usize) -> Option<PolyMatrix> {
    let size = 2 * n;
    match family {
        Family::A => None,
        Family::C => Some(PolyMatrix::generic(ZZ, size, size, |i, j| {
            let (i1, j1) = (i + 1, j + 1);
            if j1 == star(n, i1) {
                Some(Polynomial::constant(ZZ, if i1 < j1 { 1 } else { -1 }))
            } else {
                None
            }
        })),
        Family::D => Some(PolyMatrix::generic(ZZ, size, size, |i, j| {
            (j + 1 == star(n, i + 1)).then(|| Polynomial::one(ZZ))
        })),
    }
}

fn commutator(a: &PolyMatrix, b: &PolyMatrix) -> PolyMatrix {
    a.mul(b).unwrap().sub(&b.mul(a).unwrap()).unwrap()
}

fn const_int(p: &Polynomial) -> i64 {
    p.constant_value()
        .and_then(|c| c.to_integer().to_i64())
        .expect("integral constant entry")
}

impl GroupDatum {
    /// Builds and verifies the datum for `SL_n`, `Sp_2n` or `SO_2n`.
    pub fn build(family: Family, n: usize) -> Result<GroupDatum, RootDataError> {
        if !(2..=12).contains(&n) {
            return Err(RootDataError::Unsupported(family, n));
        }
        let size = match family {
            Family::A => n,
            _ => 2 * n,
        };
        let rank = match family {
            Family::A => n - 1,
            _ => n,
        };
        let form = form_matrix(family, n);
        let chi_len = n;

        // Torus weight of each off-diagonal matrix unit E_ij: χ_i - χ_j (folded).
        let basis_weight = |a: usize| -> Vec<i64> {
            let mut v = vec![0i64; chi_len];
            match family {
                Family::A => v[a - 1] = 2,
                _ => {
                    if a <= n {
                        v[a - 1] = 2;
                    } else {
                        v[star(n, a) - 1] = -2;
                    }
                }
            }
            v
        };
        let mut classes: BTreeMap<Vec<i64>, (Vec<i64>, Vec<(usize, usize)>)> = BTreeMap::new();
        for i in 1..=size {
            for j in 1..=size {
                if i == j {
                    continue;
                }
                let w: Vec<i64> = basis_weight(i)
                    .iter()
                    .zip(basis_weight(j))
                    .map(|(a, b)| a - b)
                    .collect();
                let key = Weight::from_doubled(family, w.clone()).normalized();
                classes.entry(key).or_insert_with(|| (w, Vec::new())).1.push((i - 1, j - 1));
            }
        }

        let mut roots = Vec::new();
        for (key, (raw, positions)) in &classes {
            if key.iter().all(|&c| c == 0) {
                return Err(RootDataError::Inconsistent(
                    "off-diagonal matrix unit of weight zero".into(),
                ));
            }
            // Columns: unknown coefficients at `positions`; rows: entries of the constraint.
            let constraint_of = |pos: (usize, usize)| -> Vec<BigRational> {
                let mut x = vec![vec![0i64; size]; size];
                x[pos.0][pos.1] = 1;
                match &form {
                    None => vec![q(0)],
                    Some(jm) => {
                        let jv: Vec<Vec<i64>> = (0..size)
                            .map(|a| (0..size).map(|b| const_int(jm.get(a, b))).collect())
                            .collect();
                        let mut out = Vec::with_capacity(size * size);
                        for a in 0..size {
                            for b in 0..size {
                                // (XᵀJ + JX)[a][b] = Σ_l X[l][a] J[l][b] + J[a][l] X[l][b]
                                let mut s = 0;
                                for l in 0..size {
                                    s += x[l][a] * jv[l][b] + jv[a][l] * x[l][b];
                                }
                                out.push(q(s));
                            }
                        }
                        out
                    }
                }
            };
            let cols: Vec<Vec<BigRational>> = positions.iter().map(|&p| constraint_of(p)).collect();
            let nrows = cols[0].len();
            let system: linalg::QMatrix = (0..nrows)
                .map(|r| cols.iter().map(|c| c[r].clone()).collect())
                .collect();
            let kernel = linalg::nullspace(&system, positions.len());
            match kernel.len() {
                0 => continue,
                1 => {}
                d => {
                    return Err(RootDataError::Inconsistent(format!(
                        "root space of dimension {d} for weight {key:?}"
                    )))
                }
            }
            let coeffs = linalg::primitive_integer(&kernel[0]);
            let mut m = PolyMatrix::zeros(ZZ, size, size);
            let mut upper = false;
            let mut lower = false;
            for (&(i, j), c) in positions.iter().zip(&coeffs) {
                if c.is_zero() {
                    continue;
                }
                m.set(i, j, Polynomial::constant(ZZ, c.to_i64().unwrap()));
                if i < j {
                    upper = true;
                } else {
                    lower = true;
                }
            }
            if upper == lower {
                return Err(RootDataError::Inconsistent(format!(
                    "root vector for {key:?} is neither strictly upper nor strictly lower"
                )));
            }
            roots.push(RootVector {
                root: Weight::from_doubled(family, raw.clone()),
                matrix: m,
                positive: upper,
            });
        }

        let positive_roots: Vec<Weight> = roots.iter().filter(|r| r.positive).map(|r| r.root.clone()).collect();
        let expected_dim = match family {
            Family::A => n * (n - 1) / 2,
            Family::C => n * n,
            Family::D => n * (n - 1),
        };
        if positive_roots.len() != expected_dim || roots.len() != 2 * expected_dim {
            return Err(RootDataError::Inconsistent(format!(
                "{} positive roots, expected {expected_dim}",
                positive_roots.len()
            )));
        }

        // Simple roots: positive roots that are not sums of two positive roots.
        let is_sum = |r: &Weight| {
            positive_roots.iter().any(|a| {
                let rest = Weight::from_doubled(
                    family,
                    r.doubled.iter().zip(&a.doubled).map(|(x, y)| x - y).collect(),
                );
                positive_roots.contains(&rest)
            })
        };
        let root_vec = |w: &Weight| -> &RootVector { roots.iter().find(|r| &r.root == w).unwrap() };
        let min_row = |m: &PolyMatrix| -> usize {
            (0..size)
                .find(|&i| (0..size).any(|j| !m.get(i, j).is_zero()))
                .unwrap()
        };
        let mut simple: Vec<Weight> = positive_roots.iter().filter(|r| !is_sum(r)).cloned().collect();
        simple.sort_by(|a, b| {
            (min_row(&root_vec(a).matrix), a.normalized()).cmp(&(min_row(&root_vec(b).matrix), b.normalized()))
        });

        let expected_simple = tabulated_simple_roots(family, n);
        if simple != expected_simple {
            return Err(RootDataError::Inconsistent(format!(
                "computed simple roots {:?} differ from the tabulated list",
                simple.iter().map(|w| w.to_string()).collect::<Vec<_>>()
            )));
        }

        let mut simple_pairs = Vec::with_capacity(rank);
        for a in &simple {
            let x = root_vec(a).matrix.clone();
            let y = root_vec(&a.neg()).matrix.clone();
            let h = commutator(&x, &y);
            let hx = commutator(&h, &x);
            // [H, X] = c X; find c from any nonzero entry of X.
            let (i, j) = (0..size)
                .flat_map(|i| (0..size).map(move |j| (i, j)))
                .find(|&(i, j)| !x.get(i, j).is_zero())
                .unwrap();
            let c = BigRational::new(BigInt::from(const_int(hx.get(i, j))), BigInt::from(const_int(x.get(i, j))));
            let factor = q(2) / c;
            if !factor.is_integer() {
                return Err(RootDataError::Inconsistent("sl2 normalisation is not integral".into()));
            }
            let y = y.scale(&Polynomial::constant(ZZ, factor.to_integer().to_i64().unwrap()));
            let hx2 = commutator(&commutator(&x, &y), &x);
            if hx2 != x.scale(&Polynomial::constant(ZZ, 2)) {
                return Err(RootDataError::Inconsistent("sl2 triple check failed".into()));
            }
            simple_pairs.push((x, y));
        }

        // Simple-root coordinates of positive roots.
        let simple_cols: linalg::QMatrix = (0..chi_len)
            .map(|c| simple.iter().map(|s| q(s.normalized()[c])).collect())
            .collect();
        let mut positive_root_coefficients = Vec::new();
        for r in &positive_roots {
            let rhs: Vec<BigRational> = r.normalized().iter().map(|&c| q(c)).collect();
            let sol = linalg::solve(&simple_cols, &rhs)
                .ok_or_else(|| RootDataError::Inconsistent(format!("root {r} not in the simple-root span")))?;
            let ints: Vec<i64> = sol
                .iter()
                .map(|x| {
                    if x.is_integer() && !x.to_integer().is_negative_i64() {
                        Ok(x.to_integer().to_i64().unwrap())
                    } else {
                        Err(RootDataError::Inconsistent(format!("root {r} has non-natural simple coordinates")))
                    }
                })
                .collect::<Result<_, _>>()?;
            positive_root_coefficients.push(ints);
        }

        let fundamental_weights = tabulated_fundamental_weights(family, n);
        for (i, w) in fundamental_weights.iter().enumerate() {
            for (j, a) in simple.iter().enumerate() {
                let expect = if i == j { q(1) } else { q(0) };
                if w.pair_coroot(a) != expect {
                    return Err(RootDataError::Inconsistent(format!(
                        "fundamental weight {} does not pair to δ with simple coroot {}",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        let rho = fundamental_weights
            .iter()
            .fold(Weight::zero(family, chi_len), |acc, w| acc.add(w));
        let pos_sum = positive_roots
            .iter()
            .fold(Weight::zero(family, chi_len), |acc, w| acc.add(w));
        if pos_sum != rho.scale(2) {
            return Err(RootDataError::Inconsistent("2ρ differs from the sum of positive roots".into()));
        }

        let mut negative: Vec<(i64, Vec<i64>, Weight, PolyMatrix)> = roots
            .iter()
            .filter(|r| !r.positive)
            .map(|r| {
                let beta = r.root.neg();
                let idx = positive_roots.iter().position(|p| *p == beta).unwrap();
                let height: i64 = positive_root_coefficients[idx].iter().sum();
                (height, r.root.normalized(), r.root.clone(), r.matrix.clone())
            })
            .collect();
        negative.sort_by(|a, b| (a.0, &a.1).cmp(&(b.0, &b.1)));
        let negative_generators = negative.into_iter().map(|(_, _, w, m)| (w, m)).collect();

        let datum = GroupDatum {
            family,
            n,
            size,
            rank,
            form,
            roots,
            positive_roots,
            simple_roots: simple,
            simple_pairs,
            fundamental_weights,
            rho,
            negative_generators,
            positive_root_coefficients,
        };
        datum.verify_lie_algebra()?;
        Ok(datum)
    }

    fn verify_lie_algebra(&self) -> Result<(), RootDataError> {
        for r in &self.roots {
            let x = &r.matrix;
            let ok = match &self.form {
                None => (0..self.size).all(|i| x.get(i, i).is_zero()),
                Some(j) => x.transpose().mul(j)?.add(&j.mul(x)?)?.is_zero(),
            };
            if !ok {
                return Err(RootDataError::Inconsistent(format!("root vector for {} not in the Lie algebra", r.root)));
            }
        }
        Ok(())
    }

    /// Dimension of `G/B`, i.e. the number of positive roots.
    pub fn dim_flag(&self) -> usize {
        self.positive_roots.len()
    }

    /// `D_2` is not simple; it is accepted but callers may want to flag it.
    pub fn is_simple(&self) -> bool {
        !(self.family == Family::D && self.n == 2)
    }

    /// Folded weight of the formal character `χ_a`, `a` 1-based in `1..=N`.
    pub fn chi(&self, a: usize) -> Weight {
        let mut v = vec![0i64; self.n];
        match self.family {
            Family::A => v[a - 1] = 2,
            _ => {
                if a <= self.n {
                    v[a - 1] = 2;
                } else {
                    v[star(self.n, a) - 1] = -2;
                }
            }
        }
        Weight::from_doubled(self.family, v)
    }

    /// Folds a formal sum `Σ c_a χ_a` (1-based indices into the matrix basis).
    pub fn weight_fold_and_sum(&self, terms: &[(i64, usize)]) -> Weight {
        terms
            .iter()
            .fold(Weight::zero(self.family, self.n), |acc, &(c, a)| acc.add(&self.chi(a).scale(c)))
    }

    /// The parabolic whose `P/B` carries the maximal-multiplicity claim: `P_r` for `SL_n`, `P_n` otherwise.
    pub fn target_parabolic(&self, r: Option<usize>) -> Result<Parabolic, RootDataError> {
        match (self.family, r) {
            (Family::A, Some(r)) if (1..self.n).contains(&r) => Ok(Parabolic { excluded: r }),
            (Family::A, r) => Err(RootDataError::BadParabolic(self.family, format!("r = {r:?} must satisfy 1 <= r <= n-1"))),
            (_, None) => Ok(Parabolic { excluded: self.n }),
            (_, Some(r)) if r == self.n => Ok(Parabolic { excluded: self.n }),
            (f, Some(r)) => Err(RootDataError::BadParabolic(f, format!("only P_n is supported, got P_{r}"))),
        }
    }

    /// `dim G/P`: positive roots with a nonzero coefficient on the excluded simple root.
    pub fn dim_g_mod_p(&self, p: Parabolic) -> usize {
        self.positive_root_coefficients
            .iter()
            .filter(|c| c[p.excluded - 1] != 0)
            .count()
    }

    /// The simple reflection `s_i` as a signed permutation of `e_1..e_n`.
    pub fn simple_reflection(&self, i: usize) -> SignedPerm {
        let alpha = &self.simple_roots[i - 1];
        let m = self.n;
        let images = (0..m)
            .map(|j| {
                let mut e = vec![0i64; m];
                e[j] = 2;
                let ej = Weight::from_doubled(self.family, e);
                let k = ej.pair_coroot(alpha);
                let img: Vec<BigRational> = ej
                    .doubled
                    .iter()
                    .zip(&alpha.doubled)
                    .map(|(&x, &a)| (q(x) - &k * q(a)) / q(2))
                    .collect();
                let nz: Vec<usize> = (0..m).filter(|&t| !img[t].is_zero()).collect();
                assert_eq!(nz.len(), 1, "reflection is not a signed permutation");
                let t = nz[0];
                let s = if img[t] == q(1) {
                    1
                } else {
                    assert_eq!(img[t], q(-1));
                    -1
                };
                (t, s)
            })
            .collect();
        SignedPerm { images }
    }

    pub fn is_positive_root(&self, w: &Weight) -> bool {
        self.positive_roots.contains(w)
    }

    /// Length of `w`: positive roots sent to negative roots.
    pub fn inversion_count(&self, w: &SignedPerm) -> usize {
        self.positive_roots
            .iter()
            .filter(|a| self.is_positive_root(&w.act(a).neg()))
            .count()
    }

    /// Longest element of the Levi Weyl group of `p`, with a reduced word.
    pub fn levi_longest_word(&self, p: Parabolic) -> WeylWord {
        let levi: Vec<usize> = (1..=self.rank).filter(|&i| i != p.excluded).collect();
        let mut w = SignedPerm::identity(self.n);
        let mut word = Vec::new();
        while let Some(&i) = levi
            .iter()
            .find(|&&i| self.is_positive_root(&w.act(&self.simple_roots[i - 1])))
        {
            w = w.compose(&self.simple_reflection(i));
            word.push(i);
        }
        WeylWord { perm: w, word }
    }

    /// Where `w` sends each matrix basis vector, as `(target index, sign of weight match)`, 0-based.
    pub fn basis_permutation(&self, w: &SignedPerm) -> Vec<usize> {
        match self.family {
            Family::A => w.images.iter().map(|&(t, _)| t).collect(),
            _ => (1..=self.size)
                .map(|j| {
                    let (k, s) = if j <= self.n {
                        let (t, s) = w.images[j - 1];
                        (t + 1, s)
                    } else {
                        let (t, s) = w.images[star(self.n, j) - 1];
                        (t + 1, -s)
                    };
                    if s > 0 {
                        k - 1
                    } else {
                        star(self.n, k) - 1
                    }
                })
                .collect(),
        }
    }

    /// Representative `n_α = exp(X_α) exp(-X_{-α}) exp(X_α)` of the simple reflection `s_i`.
    pub fn simple_reflection_representative(&self, i: usize) -> Result<PolyMatrix, RootDataError> {
        let (x, y) = &self.simple_pairs[i - 1];
        let one = Polynomial::one(ZZ);
        let ex = x.exp_nilpotent_with(&one)?;
        let ey = y.exp_nilpotent_with(&one.neg())?;
        Ok(ex.mul(&ey)?.mul(&ex)?)
    }

    /// Matrix representative of a Weyl word: product of the simple representatives in word order.
    pub fn word_representative(&self, w: &WeylWord) -> Result<PolyMatrix, RootDataError> {
        let mut m = PolyMatrix::identity(ZZ, self.size);
        for &i in &w.word {
            m = m.mul(&self.simple_reflection_representative(i)?)?;
        }
        Ok(m)
    }

    /// `w_0^P` and a verified matrix representative of it.
    pub fn levi_longest_representative(&self, p: Parabolic) -> Result<(WeylWord, PolyMatrix), RootDataError> {
        let w = self.levi_longest_word(p);
        if w.word.len() != self.inversion_count(&w.perm) {
            return Err(RootDataError::Inconsistent("word is not reduced".into()));
        }
        let rep = self.word_representative(&w)?;
        if !rep.is_signed_permutation() {
            return Err(RootDataError::Inconsistent("representative is not a signed permutation matrix".into()));
        }
        for (j, t) in self.basis_permutation(&w.perm).into_iter().enumerate() {
            if rep.get(t, j).is_zero() {
                return Err(RootDataError::Inconsistent(format!(
                    "representative does not send e_{} to ±e_{}",
                    j + 1,
                    t + 1
                )));
            }
        }
        if !self.is_member(&rep)? {
            return Err(RootDataError::Inconsistent("representative is not in the group".into()));
        }
        Ok((w, rep))
    }

    /// Exact membership test: `MᵀJM = J` (C, D) and `det M = 1` (A, D).
    pub fn is_member(&self, m: &PolyMatrix) -> Result<bool, RootDataError> {
        if m.nrows() != self.size || m.ncols() != self.size {
            return Ok(false);
        }
        if let Some(j) = &self.form {
            let j = j.to_ring(m.ring()).expect("form has integer entries");
            let lhs = m.transpose().mul(&j)?.mul(m)?;
            if lhs != j {
                return Ok(false);
            }
        }
        let det = match self.family {
            Family::A => m.determinant()?,
            Family::C => return Ok(true),
            // MᵀJM = J forces det² = 1, so det is constant and can be read off at the origin.
            Family::D => {
                let zero: BTreeMap<_, _> = m
                    .entries()
                    .flat_map(|e| e.variables())
                    .map(|v| (v, Polynomial::zero(m.ring())))
                    .collect();
                m.substitute(&zero).determinant()?
            }
        };
        Ok(det.is_one())
    }

    /// Diagonal `±1` matrices lying in the group (a few, for torus-twist tests).
    pub fn sign_torus_elements(&self) -> Vec<PolyMatrix> {
        let mut out = Vec::new();
        for mask in 0u32..(1 << self.n) {
            let eps: Vec<i64> = (0..self.n).map(|i| if mask & (1 << i) != 0 { -1 } else { 1 }).collect();
            let diag: Vec<i64> = match self.family {
                Family::A => eps.clone(),
                _ => eps.iter().copied().chain(eps.iter().rev().copied()).collect(),
            };
            let m = PolyMatrix::diagonal(ZZ, diag.iter().map(|&d| Polynomial::constant(ZZ, d)).collect());
            if self.is_member(&m).unwrap_or(false) {
                out.push(m);
            }
        }
        out
    }
}

trait NegI64 {
    fn is_negative_i64(&self) -> bool;
}

impl NegI64 for BigInt {
    fn is_negative_i64(&self) -> bool {
        self.sign() == num_bigint::Sign::Minus
    }
}

/// Simple roots in Bourbaki order, as listed for each family.
pub fn tabulated_simple_roots(family: Family, n: usize) -> Vec<Weight> {
    let e = |i: usize, c: i64| {
        let mut v = vec![0i64; n];
        v[i - 1] = c;
        v
    };
    let sum = |a: Vec<i64>, b: Vec<i64>| -> Weight {
        Weight::from_chi(family, &a.iter().zip(&b).map(|(x, y)| x + y).collect::<Vec<_>>())
    };
    let mut out: Vec<Weight> = Vec::new();
    let last = match family {
        Family::A => n - 1,
        _ => n - 1,
    };
    for i in 1..last {
        out.push(sum(e(i, 1), e(i + 1, -1)));
    }
    match family {
        Family::A => out.push(sum(e(n - 1, 1), e(n, -1))),
        Family::C => {
            out.push(sum(e(n - 1, 1), e(n, -1)));
            out.push(Weight::from_chi(family, &e(n, 2)));
        }
        Family::D => {
            out.push(sum(e(n - 1, 1), e(n, -1)));
            out.push(sum(e(n - 1, 1), e(n, 1)));
        }
    }
    out
}

/// Fundamental weights in Bourbaki order, as listed for each family.
pub fn tabulated_fundamental_weights(family: Family, n: usize) -> Vec<Weight> {
    let prefix = |k: usize| -> Vec<i64> { (0..n).map(|i| if i < k { 2 } else { 0 }).collect() };
    match family {
        Family::A | Family::C => {
            let count = if family == Family::A { n - 1 } else { n };
            (1..=count).map(|k| Weight::from_doubled(family, prefix(k))).collect()
        }
        Family::D => {
            let mut out: Vec<Weight> = (1..=n.saturating_sub(2)).map(|k| Weight::from_doubled(family, prefix(k))).collect();
            let mut minus = vec![1i64; n];
            minus[n - 1] = -1;
            out.push(Weight::from_doubled(family, minus));
            out.push(Weight::from_doubled(family, vec![1; n]));
            out
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn positive_root_counts() {
        for n in 2..=6 {
            assert_eq!(GroupDatum::build(Family::A, n).unwrap().dim_flag(), n * (n - 1) / 2);
        }
        for n in 2..=4 {
            assert_eq!(GroupDatum::build(Family::C, n).unwrap().dim_flag(), n * n);
            assert_eq!(GroupDatum::build(Family::D, n).unwrap().dim_flag(), n * (n - 1));
        }
        assert_eq!(GroupDatum::build(Family::A, 5).unwrap().dim_flag(), 10);
    }

    #[test]
    fn tabulated_weights() {
        let c2 = GroupDatum::build(Family::C, 2).unwrap();
        assert_eq!(c2.dim_flag(), 4);
        assert_eq!(c2.fundamental_weights[1], Weight::from_chi(Family::C, &[1, 1]));
        let d3 = GroupDatum::build(Family::D, 3).unwrap();
        assert_eq!(d3.dim_flag(), 6);
        assert_eq!(d3.fundamental_weights[2].doubled(), &[1, 1, 1]);
    }

    #[test]
    fn rho_is_sum_of_fundamental_weights() {
        let a5 = GroupDatum::build(Family::A, 5).unwrap();
        assert_eq!(a5.rho, Weight::from_chi(Family::A, &[4, 3, 2, 1, 0]));
        let c3 = GroupDatum::build(Family::C, 3).unwrap();
        assert_eq!(c3.rho, Weight::from_chi(Family::C, &[3, 2, 1]));
        let d4 = GroupDatum::build(Family::D, 4).unwrap();
        assert_eq!(d4.rho, Weight::from_chi(Family::D, &[3, 2, 1, 0]));
    }

    #[test]
    fn negative_generators() {
        let a2 = GroupDatum::build(Family::A, 2).unwrap();
        assert_eq!(a2.negative_generators.len(), 1);
        assert_eq!(a2.negative_generators[0].1, PolyMatrix::from_ints(ZZ, &[vec![0, 0], vec![1, 0]]));

        let c2 = GroupDatum::build(Family::C, 2).unwrap();
        let gens: Vec<&PolyMatrix> = c2.negative_generators.iter().map(|(_, m)| m).collect();
        assert_eq!(gens.len(), 4);
        let short = PolyMatrix::from_ints(
            ZZ,
            &[vec![0, 0, 0, 0], vec![1, 0, 0, 0], vec![0, 0, 0, 0], vec![0, 0, -1, 0]],
        );
        let long = PolyMatrix::from_ints(
            ZZ,
            &[vec![0, 0, 0, 0], vec![0, 0, 0, 0], vec![0, 0, 0, 0], vec![1, 0, 0, 0]],
        );
        assert!(gens.contains(&&short) || gens.contains(&&short.scale(&Polynomial::constant(ZZ, -1))));
        assert!(gens.contains(&&long));

        let d3 = GroupDatum::build(Family::D, 3).unwrap();
        assert_eq!(d3.negative_generators.len(), 6);
        for (_, x) in &d3.negative_generators {
            assert!(x.mul(x).unwrap().is_zero());
        }
    }

    #[test]
    fn levi_longest_elements() {
        let a5 = GroupDatum::build(Family::A, 5).unwrap();
        let p = a5.target_parabolic(Some(2)).unwrap();
        let (w, rep) = a5.levi_longest_representative(p).unwrap();
        assert_eq!(w.perm.one_line(), vec![2, 1, 5, 4, 3]);
        assert!(rep.is_signed_permutation());

        let a2 = GroupDatum::build(Family::A, 2).unwrap();
        let s = a2.simple_reflection_representative(1).unwrap();
        assert_eq!(s, PolyMatrix::from_ints(ZZ, &[vec![0, 1], vec![-1, 0]]));
        // P_1 = B in SL_2, so its Levi Weyl group is trivial.
        let (w, rep) = a2.levi_longest_representative(a2.target_parabolic(Some(1)).unwrap()).unwrap();
        assert!(w.perm.is_identity());
        assert_eq!(rep, PolyMatrix::identity(ZZ, 2));

        let c2 = GroupDatum::build(Family::C, 2).unwrap();
        let (w, _) = c2.levi_longest_representative(c2.target_parabolic(None).unwrap()).unwrap();
        assert_eq!(w.perm.one_line(), vec![2, 1]);
        assert_eq!(w.perm.signs(), vec![1, 1]);
    }

    #[test]
    fn weight_folding() {
        let a5 = GroupDatum::build(Family::A, 5).unwrap();
        let mut terms = Vec::new();
        for k in 1..=4 {
            for a in (5 - k + 1)..=5 {
                terms.push((-1, a));
            }
        }
        assert_eq!(a5.weight_fold_and_sum(&terms), a5.rho);

        let c2 = GroupDatum::build(Family::C, 2).unwrap();
        assert_eq!(c2.weight_fold_and_sum(&[(-1, 4)]), Weight::from_chi(Family::C, &[1, 0]));

        let d3 = GroupDatum::build(Family::D, 3).unwrap();
        let w = d3.weight_fold_and_sum(&[(-1, 6), (-1, 5)]);
        assert_eq!(w, Weight::from_chi(Family::D, &[1, 1, 0]));
        assert_eq!(w, d3.fundamental_weights[1].add(&d3.fundamental_weights[2]));
    }

    #[test]
    fn bad_inputs() {
        assert!(GroupDatum::build(Family::A, 1).is_err());
        let a4 = GroupDatum::build(Family::A, 4).unwrap();
        assert!(a4.target_parabolic(Some(4)).is_err());
        assert!(a4.target_parabolic(None).is_err());
        let c3 = GroupDatum::build(Family::C, 3).unwrap();
        assert!(c3.target_parabolic(Some(2)).is_err());
        assert!(!GroupDatum::build(Family::D, 2).unwrap().is_simple());
    }

    #[test]
    fn sign_torus_is_in_group() {
        for (f, n) in [(Family::A, 3), (Family::C, 2), (Family::D, 3)] {
            let g = GroupDatum::build(f, n).unwrap();
            let t = g.sign_torus_elements();
            assert!(t.len() > 1);
        }
    }
}
