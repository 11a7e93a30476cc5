//! Matrices with polynomial entries.
//!
//! The main workload is the column-initial minor `det(a_1..a_k | 1..k)`:
//! the determinant of the submatrix on the listed rows (in the listed order)
//! and the first `k` columns. It is computed by expansion along columns with
//! a memo keyed by row subsets, so a nested family of leading minors comes
//! out of a single pass.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use thiserror::Error;

use crate::exactpoly::{CoefficientRing, Polynomial, VarId, Vars};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MatrixError {
    #[error("shape mismatch: {0}x{1} vs {2}x{3}")]
    Shape(usize, usize, usize, usize),
    #[error("invalid minor rows {rows:?} for a {nrows}x{ncols} matrix")]
    BadMinor {
        rows: Vec<usize>,
        nrows: usize,
        ncols: usize,
    },
    #[error("matrix is not nilpotent")]
    NotNilpotent,
    #[error("factorial {0}! is not invertible in {1}")]
    FactorialNotInvertible(u32, CoefficientRing),
    #[error("entries of a matrix must share one coefficient ring")]
    MixedRings,
}

/// Rows `a_1..a_k` (1-based, as given) of a column-initial minor on columns `1..k`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MinorSpec {
    rows: Vec<usize>,
}

impl MinorSpec {
    pub fn new(rows: Vec<usize>) -> Self {
        MinorSpec { rows }
    }

    pub fn rows(&self) -> &[usize] {
        &self.rows
    }

    pub fn size(&self) -> usize {
        self.rows.len()
    }

    /// The minor on the first `j` listed rows.
    pub fn prefix(&self, j: usize) -> MinorSpec {
        MinorSpec {
            rows: self.rows[..j].to_vec(),
        }
    }

    pub fn validate(&self, nrows: usize, ncols: usize) -> Result<(), MatrixError> {
        let k = self.rows.len();
        let bad = || MatrixError::BadMinor {
            rows: self.rows.clone(),
            nrows,
            ncols,
        };
        if k == 0 || k > ncols || k > nrows {
            return Err(bad());
        }
        let mut seen = vec![false; nrows + 1];
        for &r in &self.rows {
            if r == 0 || r > nrows || seen[r] {
                return Err(bad());
            }
            seen[r] = true;
        }
        Ok(())
    }
}

impl fmt::Display for MinorSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self.rows.iter().map(|r| r.to_string()).collect();
        let cols: Vec<String> = (1..=self.rows.len()).map(|c| c.to_string()).collect();
        write!(f, "det({} | {})", rows.join(","), cols.join(","))
    }
}

/// Dense matrix of polynomials over a shared ring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyMatrix {
    ring: CoefficientRing,
    nrows: usize,
    ncols: usize,
    entries: Vec<Polynomial>,
}

impl PolyMatrix {
    pub fn zeros(ring: CoefficientRing, nrows: usize, ncols: usize) -> Self {
        PolyMatrix {
            ring,
            nrows,
            ncols,
            entries: vec![Polynomial::zero(ring); nrows * ncols],
        }
    }

    pub fn identity(ring: CoefficientRing, n: usize) -> Self {
        let mut m = Self::zeros(ring, n, n);
        for i in 0..n {
            m.set(i, i, Polynomial::one(ring));
        }
        m
    }

    /// From a grid of integers.
    pub fn from_ints(ring: CoefficientRing, rows: &[Vec<i64>]) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map(|r| r.len()).unwrap_or(0);
        let mut m = Self::zeros(ring, nrows, ncols);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), ncols);
            for (j, &c) in row.iter().enumerate() {
                m.set(i, j, Polynomial::constant(ring, c));
            }
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Polynomial>>) -> Result<Self, MatrixError> {
        let nrows = rows.len();
        let ncols = rows.first().map(|r| r.len()).unwrap_or(0);
        let ring = rows
            .first()
            .and_then(|r| r.first())
            .map(|p| p.ring())
            .unwrap_or(CoefficientRing::Integers);
        let mut entries = Vec::with_capacity(nrows * ncols);
        for r in rows {
            if r.len() != ncols {
                return Err(MatrixError::Shape(nrows, ncols, nrows, r.len()));
            }
            for p in r {
                if p.ring() != ring {
                    return Err(MatrixError::MixedRings);
                }
                entries.push(p);
            }
        }
        Ok(PolyMatrix {
            ring,
            nrows,
            ncols,
            entries,
        })
    }

    /// Matrix whose `(i, j)` entry (0-based) is the fresh variable `f(i, j)` or zero.
    pub fn generic<F>(ring: CoefficientRing, nrows: usize, ncols: usize, mut f: F) -> Self
    where
        F: FnMut(usize, usize) -> Option<Polynomial>,
    {
        let mut m = Self::zeros(ring, nrows, ncols);
        for i in 0..nrows {
            for j in 0..ncols {
                if let Some(p) = f(i, j) {
                    m.set(i, j, p);
                }
            }
        }
        m
    }

    /// `diag(d_1..d_n)`.
    pub fn diagonal(ring: CoefficientRing, diag: Vec<Polynomial>) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(ring, n, n);
        for (i, d) in diag.into_iter().enumerate() {
            m.set(i, i, d);
        }
        m
    }

    /// Permutation matrix of a 1-based one-line permutation: 1 at `(σ(i), i)`.
    pub fn permutation_matrix(ring: CoefficientRing, sigma: &[usize]) -> Self {
        let n = sigma.len();
        let mut m = Self::zeros(ring, n, n);
        for (i, &s) in sigma.iter().enumerate() {
            m.set(s - 1, i, Polynomial::one(ring));
        }
        m
    }

    /// The `n × n` anti-identity.
    pub fn anti_identity(ring: CoefficientRing, n: usize) -> Self {
        let sigma: Vec<usize> = (1..=n).rev().collect();
        Self::permutation_matrix(ring, &sigma)
    }

    pub fn ring(&self) -> CoefficientRing {
        self.ring
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn is_square(&self) -> bool {
        self.nrows == self.ncols
    }

    /// Entry at 0-based `(i, j)`.
    pub fn get(&self, i: usize, j: usize) -> &Polynomial {
        &self.entries[i * self.ncols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, p: Polynomial) {
        debug_assert_eq!(p.ring(), self.ring);
        self.entries[i * self.ncols + j] = p;
    }

    pub fn entries(&self) -> impl Iterator<Item = &Polynomial> {
        self.entries.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Polynomial::is_zero)
    }

    pub fn transpose(&self) -> PolyMatrix {
        let mut t = Self::zeros(self.ring, self.ncols, self.nrows);
        for i in 0..self.nrows {
            for j in 0..self.ncols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &PolyMatrix) -> Result<PolyMatrix, MatrixError> {
        if self.ncols != other.nrows {
            return Err(MatrixError::Shape(self.nrows, self.ncols, other.nrows, other.ncols));
        }
        if self.ring != other.ring {
            return Err(MatrixError::MixedRings);
        }
        let mut out = Self::zeros(self.ring, self.nrows, other.ncols);
        for i in 0..self.nrows {
            for j in 0..other.ncols {
                let mut acc = Polynomial::zero(self.ring);
                for l in 0..self.ncols {
                    let a = self.get(i, l);
                    let b = other.get(l, j);
                    if a.is_zero() || b.is_zero() {
                        continue;
                    }
                    acc = &acc + &(a * b);
                }
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &PolyMatrix) -> Result<PolyMatrix, MatrixError> {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &PolyMatrix) -> Result<PolyMatrix, MatrixError> {
        self.zip(other, |a, b| a - b)
    }

    fn zip<F>(&self, other: &PolyMatrix, f: F) -> Result<PolyMatrix, MatrixError>
    where
        F: Fn(&Polynomial, &Polynomial) -> Polynomial,
    {
        if self.nrows != other.nrows || self.ncols != other.ncols {
            return Err(MatrixError::Shape(self.nrows, self.ncols, other.nrows, other.ncols));
        }
        Ok(PolyMatrix {
            ring: self.ring,
            nrows: self.nrows,
            ncols: self.ncols,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| f(a, b))
                .collect(),
        })
    }

    pub fn scale(&self, p: &Polynomial) -> PolyMatrix {
        self.map(|e| e * p)
    }

    /// Applies `f` entrywise; the result takes the ring of the mapped entries.
    pub fn map<F: Fn(&Polynomial) -> Polynomial>(&self, f: F) -> PolyMatrix {
        let entries: Vec<Polynomial> = self.entries.iter().map(f).collect();
        PolyMatrix {
            ring: entries.first().map(|e| e.ring()).unwrap_or(self.ring),
            nrows: self.nrows,
            ncols: self.ncols,
            entries,
        }
    }

    pub fn to_ring(&self, ring: CoefficientRing) -> Result<PolyMatrix, crate::exactpoly::PolyError> {
        let entries = self.entries.iter().map(|e| e.to_ring(ring)).collect::<Result<_, _>>()?;
        Ok(PolyMatrix {
            ring,
            nrows: self.nrows,
            ncols: self.ncols,
            entries,
        })
    }

    /// Substitutes polynomials for variables in every entry.
    pub fn substitute(&self, images: &std::collections::BTreeMap<VarId, Polynomial>) -> PolyMatrix {
        self.map(|e| e.substitute(images))
    }

    /// Column-initial minor `det(a_1..a_k | 1..k)`.
    pub fn column_minor(&self, spec: &MinorSpec) -> Result<Polynomial, MatrixError> {
        Ok(self
            .nested_column_minors(spec)?
            .pop()
            .expect("minor spec is non-empty"))
    }

    /// All leading minors `det(a_1..a_j | 1..j)` for `j = 1..k`, from one memo table.
    pub fn nested_column_minors(&self, spec: &MinorSpec) -> Result<Vec<Polynomial>, MatrixError> {
        spec.validate(self.nrows, self.ncols)?;
        let rows: Vec<usize> = spec.rows().iter().map(|r| r - 1).collect();
        let k = rows.len();
        let mut memo: HashMap<u32, Polynomial> = HashMap::new();
        memo.insert(0, Polynomial::one(self.ring));
        let mut out = Vec::with_capacity(k);
        for j in 1..=k {
            out.push(self.minor_on(&rows, (1u32 << j) - 1, &mut memo));
        }
        Ok(out)
    }

    /// Determinant on the row positions in `mask` (positions into `rows`,
    /// kept in listed order) against the first `popcount(mask)` columns,
    /// expanded along the last of those columns.
    fn minor_on(&self, rows: &[usize], mask: u32, memo: &mut HashMap<u32, Polynomial>) -> Polynomial {
        if let Some(p) = memo.get(&mask) {
            return p.clone();
        }
        let size = mask.count_ones() as usize;
        let col = size - 1;
        let mut acc = Polynomial::zero(self.ring);
        let mut position = 0usize;
        for (idx, &r) in rows.iter().enumerate() {
            if mask & (1 << idx) == 0 {
                continue;
            }
            let entry = self.get(r, col);
            if !entry.is_zero() {
                let sub = self.minor_on(rows, mask & !(1 << idx), memo);
                if !sub.is_zero() {
                    let term = entry * &sub;
                    // Sign (-1)^{position + col} with both 0-based.
                    if (position + col).is_multiple_of(2) {
                        acc = &acc + &term;
                    } else {
                        acc = &acc - &term;
                    }
                }
            }
            position += 1;
        }
        memo.insert(mask, acc.clone());
        acc
    }

    /// Full determinant of a square matrix.
    pub fn determinant(&self) -> Result<Polynomial, MatrixError> {
        if !self.is_square() {
            return Err(MatrixError::Shape(self.nrows, self.ncols, self.ncols, self.nrows));
        }
        if self.nrows == 0 {
            return Ok(Polynomial::one(self.ring));
        }
        self.column_minor(&MinorSpec::new((1..=self.nrows).collect()))
    }

    /// `I + tX + t²X²/2! + …` for nilpotent `X`.
    pub fn exp_nilpotent(&self, t: VarId) -> Result<PolyMatrix, MatrixError> {
        let tv = Polynomial::var(self.ring, t);
        self.exp_nilpotent_with(&tv)
    }

    /// Same as [`exp_nilpotent`](Self::exp_nilpotent) with an arbitrary polynomial parameter.
    pub fn exp_nilpotent_with(&self, t: &Polynomial) -> Result<PolyMatrix, MatrixError> {
        if !self.is_square() {
            return Err(MatrixError::Shape(self.nrows, self.ncols, self.ncols, self.nrows));
        }
        let n = self.nrows;
        let mut powers = vec![PolyMatrix::identity(self.ring, n)];
        loop {
            let next = powers.last().unwrap().mul(self)?;
            if next.is_zero() {
                break;
            }
            if powers.len() >= n {
                return Err(MatrixError::NotNilpotent);
            }
            powers.push(next);
        }
        let mut out = PolyMatrix::zeros(self.ring, n, n);
        let mut fact = BigInt::from(1);
        let mut tpow = Polynomial::one(self.ring);
        for (k, xk) in powers.iter().enumerate() {
            if k > 0 {
                fact *= k;
                tpow = &tpow * t;
            }
            let f = BigRational::from_integer(fact.clone());
            let mut term = xk.scale(&tpow);
            if k > 1 {
                term = PolyMatrix {
                    ring: self.ring,
                    nrows: n,
                    ncols: n,
                    entries: term
                        .entries
                        .iter()
                        .map(|e| e.div_scalar(&f))
                        .collect::<Result<_, _>>()
                        .map_err(|_| MatrixError::FactorialNotInvertible(k as u32, self.ring))?,
                };
            }
            out = out.add(&term)?;
        }
        Ok(out)
    }

    /// Constant entries as rationals, if every entry is constant.
    pub fn constant_entries(&self) -> Option<Vec<Vec<BigRational>>> {
        let mut out = Vec::with_capacity(self.nrows);
        for i in 0..self.nrows {
            let mut row = Vec::with_capacity(self.ncols);
            for j in 0..self.ncols {
                row.push(self.get(i, j).constant_value()?);
            }
            out.push(row);
        }
        Some(out)
    }

    /// True if every row and column has exactly one nonzero entry and it is ±1.
    pub fn is_signed_permutation(&self) -> bool {
        let Some(c) = self.constant_entries() else {
            return false;
        };
        let one = BigRational::from_integer(1.into());
        let ok_entry = |x: &BigRational| x.is_zero() || *x == one || *x == -one.clone();
        let rows_ok = c
            .iter()
            .all(|r| r.iter().all(ok_entry) && r.iter().filter(|x| !x.is_zero()).count() == 1);
        let cols_ok = (0..self.ncols).all(|j| c.iter().filter(|r| !r[j].is_zero()).count() == 1);
        rows_ok && cols_ok
    }

    /// Row-major list of entry strings.
    pub fn to_text_rows(&self, vars: &Vars) -> Vec<Vec<String>> {
        (0..self.nrows)
            .map(|i| (0..self.ncols).map(|j| self.get(i, j).to_text(vars)).collect())
            .collect()
    }
}
