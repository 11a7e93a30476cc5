//! Sparse exact multivariate polynomials.
//!
//! Coefficients live in one of three rings: the integers, the rationals, or
//! the integers modulo an odd prime. Every coefficient is stored as a reduced
//! [`BigRational`]; the ring decides which values are admissible (integers
//! only for `Integers`, canonical residues `0..p` for `ModP`). Terms are kept
//! in a `BTreeMap` keyed by [`Monomial`] with no zero coefficients, so two
//! polynomials are equal exactly when their term maps are equal.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Identifier of a polynomial variable.
pub type VarId = u32;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("coefficient ring mismatch: {0} vs {1}")]
    RingMismatch(CoefficientRing, CoefficientRing),
    #[error("modulus {0} is not an odd prime")]
    BadModulus(u64),
    #[error("value {0} is not an element of {1}")]
    NotInRing(String, CoefficientRing),
    #[error("division by zero in {0}")]
    DivisionByZero(CoefficientRing),
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

/// The coefficient ring of a polynomial.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CoefficientRing {
    Integers,
    Rationals,
    ModP(u64),
}

impl fmt::Display for CoefficientRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoefficientRing::Integers => write!(f, "ZZ"),
            CoefficientRing::Rationals => write!(f, "QQ"),
            CoefficientRing::ModP(p) => write!(f, "ZZ/{p}"),
        }
    }
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl CoefficientRing {
    /// The ring of integers modulo an odd prime `p`.
    pub fn mod_p(p: u64) -> Result<Self, PolyError> {
        if p < 3 || !is_prime(p) {
            return Err(PolyError::BadModulus(p));
        }
        Ok(CoefficientRing::ModP(p))
    }

    pub fn has_zero_divisors(&self) -> bool {
        false
    }

    /// Maps a rational into the ring, or reports that it has no image.
    pub fn normalize(&self, c: BigRational) -> Result<BigRational, PolyError> {
        match self {
            CoefficientRing::Rationals => Ok(c),
            CoefficientRing::Integers => {
                if c.is_integer() {
                    Ok(c)
                } else {
                    Err(PolyError::NotInRing(c.to_string(), *self))
                }
            }
            CoefficientRing::ModP(p) => {
                let p = BigInt::from(*p);
                let den = c.denom().mod_floor(&p);
                if den.is_zero() {
                    return Err(PolyError::NotInRing(c.to_string(), *self));
                }
                let inv = mod_inverse(&den, &p);
                let v = (c.numer().mod_floor(&p) * inv).mod_floor(&p);
                Ok(BigRational::from_integer(v))
            }
        }
    }

    /// Exact quotient `a / b` inside the ring.
    pub fn divide(&self, a: &BigRational, b: &BigRational) -> Result<BigRational, PolyError> {
        match self {
            CoefficientRing::ModP(p) => {
                let pb = BigInt::from(*p);
                let bb = b.to_integer().mod_floor(&pb);
                if bb.is_zero() {
                    return Err(PolyError::DivisionByZero(*self));
                }
                let inv = mod_inverse(&bb, &pb);
                Ok(BigRational::from_integer(
                    (a.to_integer() * inv).mod_floor(&pb),
                ))
            }
            _ => {
                if b.is_zero() {
                    return Err(PolyError::DivisionByZero(*self));
                }
                self.normalize(a / b)
            }
        }
    }

    fn normalize_unchecked(&self, c: BigRational) -> BigRational {
        match self {
            CoefficientRing::ModP(p) => {
                debug_assert!(c.is_integer());
                BigRational::from_integer(c.to_integer().mod_floor(&BigInt::from(*p)))
            }
            _ => c,
        }
    }
}

fn mod_inverse(a: &BigInt, p: &BigInt) -> BigInt {
    let e = a.extended_gcd(p);
    debug_assert!(e.gcd.is_one());
    e.x.mod_floor(p)
}

/// A monomial: sparse exponent vector sorted by variable id, no zero entries.
///
/// Ordering is graded lexicographic: higher total degree is larger, ties are
/// broken by the exponent of the smallest variable id.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct Monomial {
    exps: Vec<(VarId, u32)>,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial { exps: Vec::new() }
    }

    pub fn var(v: VarId) -> Self {
        Monomial { exps: vec![(v, 1)] }
    }

    /// Builds a monomial from arbitrary `(var, exp)` pairs; repeated variables add up.
    pub fn from_pairs<I: IntoIterator<Item = (VarId, u32)>>(pairs: I) -> Self {
        let mut m: BTreeMap<VarId, u32> = BTreeMap::new();
        for (v, e) in pairs {
            *m.entry(v).or_insert(0) += e;
        }
        Monomial {
            exps: m.into_iter().filter(|&(_, e)| e > 0).collect(),
        }
    }

    pub fn exponents(&self) -> &[(VarId, u32)] {
        &self.exps
    }

    pub fn exponent(&self, v: VarId) -> u32 {
        match self.exps.binary_search_by_key(&v, |&(w, _)| w) {
            Ok(i) => self.exps[i].1,
            Err(_) => 0,
        }
    }

    pub fn degree(&self) -> u32 {
        self.exps.iter().map(|&(_, e)| e).sum()
    }

    pub fn is_one(&self) -> bool {
        self.exps.is_empty()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = Vec::with_capacity(self.exps.len() + other.exps.len());
        let (mut i, mut j) = (0, 0);
        while i < self.exps.len() && j < other.exps.len() {
            let (a, ea) = self.exps[i];
            let (b, eb) = other.exps[j];
            match a.cmp(&b) {
                std::cmp::Ordering::Less => {
                    out.push((a, ea));
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push((b, eb));
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    out.push((a, ea + eb));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.exps[i..]);
        out.extend_from_slice(&other.exps[j..]);
        Monomial { exps: out }
    }

    /// `self / other` if `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = Vec::with_capacity(self.exps.len());
        let mut j = 0;
        for &(v, e) in &self.exps {
            if j < other.exps.len() && other.exps[j].0 < v {
                return None;
            }
            if j < other.exps.len() && other.exps[j].0 == v {
                let f = other.exps[j].1;
                if f > e {
                    return None;
                }
                if e > f {
                    out.push((v, e - f));
                }
                j += 1;
            } else {
                out.push((v, e));
            }
        }
        if j < other.exps.len() {
            return None;
        }
        Some(Monomial { exps: out })
    }

    pub fn pow(&self, k: u32) -> Monomial {
        if k == 0 {
            return Monomial::one();
        }
        Monomial {
            exps: self.exps.iter().map(|&(v, e)| (v, e * k)).collect(),
        }
    }

    /// Drops variable `v`, returning the remaining monomial.
    pub fn without(&self, v: VarId) -> Monomial {
        Monomial {
            exps: self.exps.iter().copied().filter(|&(w, _)| w != v).collect(),
        }
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        use std::cmp::Ordering;
        match self.degree().cmp(&other.degree()) {
            Ordering::Equal => {}
            o => return o,
        }
        let (mut i, mut j) = (0, 0);
        loop {
            match (self.exps.get(i), other.exps.get(j)) {
                (None, None) => return Ordering::Equal,
                (Some(_), None) => return Ordering::Greater,
                (None, Some(_)) => return Ordering::Less,
                (Some(&(a, ea)), Some(&(b, eb))) => {
                    if a < b {
                        return Ordering::Greater;
                    }
                    if b < a {
                        return Ordering::Less;
                    }
                    match ea.cmp(&eb) {
                        Ordering::Equal => {
                            i += 1;
                            j += 1;
                        }
                        o => return o,
                    }
                }
            }
        }
    }
}

/// Result of an order-of-vanishing computation at the origin.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Order {
    Finite(u32),
    /// The polynomial is identically zero.
    Infinite,
}

impl Order {
    pub fn finite(self) -> Option<u32> {
        match self {
            Order::Finite(k) => Some(k),
            Order::Infinite => None,
        }
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Order::Finite(k) => write!(f, "{k}"),
            Order::Infinite => write!(f, "inf"),
        }
    }
}

/// Why [`Polynomial::zero_out_and_divide`] could not produce a quotient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DivisionFailure {
    /// After zeroing, nothing was left.
    Vanished,
    /// This monomial survives zeroing but is not divisible by the divisor.
    NotDivisible(Monomial),
}

/// Names for variable ids, used when printing and parsing.
#[derive(Clone, Debug, Default)]
pub struct Vars {
    names: Vec<String>,
    index: HashMap<String, VarId>,
}

impl Vars {
    pub fn new() -> Self {
        Self::default()
    }

    /// Returns the id for `name`, allocating a fresh one if needed.
    pub fn intern(&mut self, name: &str) -> VarId {
        if let Some(&v) = self.index.get(name) {
            return v;
        }
        let v = self.names.len() as VarId;
        self.names.push(name.to_string());
        self.index.insert(name.to_string(), v);
        v
    }

    pub fn get(&self, name: &str) -> Option<VarId> {
        self.index.get(name).copied()
    }

    pub fn name(&self, v: VarId) -> String {
        self.names
            .get(v as usize)
            .cloned()
            .unwrap_or_else(|| format!("x{v}"))
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }
}

/// A sparse multivariate polynomial in canonical form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Polynomial {
    ring: CoefficientRing,
    terms: BTreeMap<Monomial, BigRational>,
}

impl Polynomial {
    pub fn zero(ring: CoefficientRing) -> Self {
        Polynomial {
            ring,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(ring: CoefficientRing) -> Self {
        Self::constant(ring, 1)
    }

    /// Integer constant, reduced into the ring.
    pub fn constant(ring: CoefficientRing, c: i64) -> Self {
        Self::from_rational(ring, BigRational::from_integer(BigInt::from(c)))
            .expect("integers map into every ring")
    }

    pub fn from_rational(ring: CoefficientRing, c: BigRational) -> Result<Self, PolyError> {
        let c = ring.normalize(c)?;
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::one(), c);
        }
        Ok(Polynomial { ring, terms })
    }

    pub fn var(ring: CoefficientRing, v: VarId) -> Self {
        Self::monomial(ring, Monomial::var(v), 1)
    }

    pub fn monomial(ring: CoefficientRing, m: Monomial, c: i64) -> Self {
        let c = ring
            .normalize(BigRational::from_integer(BigInt::from(c)))
            .expect("integers map into every ring");
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Polynomial { ring, terms }
    }

    /// Builds a polynomial from `(monomial, coefficient)` pairs, combining duplicates.
    pub fn from_terms<I>(ring: CoefficientRing, it: I) -> Result<Self, PolyError>
    where
        I: IntoIterator<Item = (Monomial, BigRational)>,
    {
        let mut terms: BTreeMap<Monomial, BigRational> = BTreeMap::new();
        for (m, c) in it {
            let c = ring.normalize(c)?;
            add_term(ring, &mut terms, m, c);
        }
        Ok(Polynomial { ring, terms })
    }

    pub fn ring(&self) -> CoefficientRing {
        self.ring
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .iter()
                .next()
                .map(|(m, c)| m.is_one() && c.is_one())
                .unwrap_or(false)
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in descending graded-lex order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter().rev()
    }

    /// The set of variables that actually occur.
    pub fn variables(&self) -> BTreeSet<VarId> {
        self.terms
            .keys()
            .flat_map(|m| m.exps.iter().map(|&(v, _)| v))
            .collect()
    }

    /// Constant value if the polynomial has no variables.
    pub fn constant_value(&self) -> Option<BigRational> {
        match self.terms.len() {
            0 => Some(BigRational::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(Monomial::degree);
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    /// The homogeneous component of degree `d`.
    pub fn homogeneous_part(&self, d: u32) -> Polynomial {
        Polynomial {
            ring: self.ring,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == d)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Coefficient of `m`, zero if absent.
    pub fn coeff_of(&self, m: &Monomial) -> BigRational {
        self.terms.get(m).cloned().unwrap_or_else(BigRational::zero)
    }

    /// Minimum total degree over the stored monomials.
    pub fn order_at_origin(&self) -> Order {
        self.terms
            .keys()
            .map(Monomial::degree)
            .min()
            .map(Order::Finite)
            .unwrap_or(Order::Infinite)
    }

    fn check_ring(&self, other: &Polynomial) -> Result<(), PolyError> {
        if self.ring != other.ring {
            Err(PolyError::RingMismatch(self.ring, other.ring))
        } else {
            Ok(())
        }
    }

    pub fn checked_add(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check_ring(other)?;
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            add_term(self.ring, &mut terms, m.clone(), c.clone());
        }
        Ok(Polynomial {
            ring: self.ring,
            terms,
        })
    }

    pub fn checked_sub(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check_ring(other)?;
        self.checked_add(&other.neg())
    }

    pub fn checked_mul(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check_ring(other)?;
        let mut terms: BTreeMap<Monomial, BigRational> = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                add_term(self.ring, &mut terms, ma.mul(mb), ca * cb);
            }
        }
        Ok(Polynomial {
            ring: self.ring,
            terms,
        })
    }

    pub fn neg(&self) -> Polynomial {
        Polynomial {
            ring: self.ring,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), self.ring.normalize_unchecked(-c)))
                .collect(),
        }
    }

    /// Multiplies every coefficient by `c`.
    pub fn scale(&self, c: &BigRational) -> Result<Polynomial, PolyError> {
        let c = self.ring.normalize(c.clone())?;
        if c.is_zero() {
            return Ok(Polynomial::zero(self.ring));
        }
        Ok(Polynomial {
            ring: self.ring,
            terms: self
                .terms
                .iter()
                .map(|(m, k)| (m.clone(), self.ring.normalize_unchecked(k * &c)))
                .filter(|(_, k)| !k.is_zero())
                .collect(),
        })
    }

    /// Exact division of every coefficient by `c`.
    pub fn div_scalar(&self, c: &BigRational) -> Result<Polynomial, PolyError> {
        let mut terms = BTreeMap::new();
        for (m, k) in &self.terms {
            let q = self.ring.divide(k, c)?;
            if !q.is_zero() {
                terms.insert(m.clone(), q);
            }
        }
        Ok(Polynomial {
            ring: self.ring,
            terms,
        })
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Polynomial {
        Polynomial {
            ring: self.ring,
            terms: self
                .terms
                .iter()
                .map(|(k, c)| (k.mul(m), c.clone()))
                .collect(),
        }
    }

    /// `self^e` by repeated squaring.
    pub fn pow(&self, mut e: u32) -> Polynomial {
        let mut base = self.clone();
        let mut acc = Polynomial::one(self.ring);
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

    /// Reinterprets the coefficients in another ring.
    pub fn to_ring(&self, ring: CoefficientRing) -> Result<Polynomial, PolyError> {
        Polynomial::from_terms(
            ring,
            self.terms.iter().map(|(m, c)| (m.clone(), c.clone())),
        )
    }

    /// Sets every variable in `zeroed` to 0.
    pub fn zero_out(&self, zeroed: &BTreeSet<VarId>) -> Polynomial {
        Polynomial {
            ring: self.ring,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.exps.iter().all(|(v, _)| !zeroed.contains(v)))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Sets `zeroed` to 0 and divides the remainder exactly by `divisor`.
    pub fn zero_out_and_divide(
        &self,
        zeroed: &BTreeSet<VarId>,
        divisor: VarId,
    ) -> Result<Polynomial, DivisionFailure> {
        debug_assert!(!zeroed.contains(&divisor));
        let rest = self.zero_out(zeroed);
        if rest.is_zero() {
            return Err(DivisionFailure::Vanished);
        }
        let d = Monomial::var(divisor);
        let mut terms = BTreeMap::new();
        // Walk in ascending order so the reported monomial is deterministic.
        for (m, c) in &rest.terms {
            match m.div(&d) {
                Some(q) => {
                    terms.insert(q, c.clone());
                }
                None => return Err(DivisionFailure::NotDivisible(m.clone())),
            }
        }
        Ok(Polynomial {
            ring: self.ring,
            terms,
        })
    }

    /// Evaluates at a point; variables missing from `point` are left symbolic.
    pub fn substitute(&self, images: &BTreeMap<VarId, Polynomial>) -> Polynomial {
        let mut out = Polynomial::zero(self.ring);
        let mut pow_cache: HashMap<(VarId, u32), Polynomial> = HashMap::new();
        for (m, c) in &self.terms {
            let mut term = Polynomial {
                ring: self.ring,
                terms: BTreeMap::from([(Monomial::one(), c.clone())]),
            };
            let mut kept = Vec::new();
            for &(v, e) in &m.exps {
                match images.get(&v) {
                    Some(img) => {
                        let p = pow_cache
                            .entry((v, e))
                            .or_insert_with(|| img.pow(e))
                            .clone();
                        term = &term * &p;
                    }
                    None => kept.push((v, e)),
                }
            }
            if !kept.is_empty() {
                term = term.mul_monomial(&Monomial { exps: kept });
            }
            out = &out + &term;
        }
        out
    }

    /// Evaluates at a full rational point.
    pub fn evaluate(&self, point: &BTreeMap<VarId, BigRational>) -> Result<BigRational, PolyError> {
        let mut acc = BigRational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for &(v, e) in &m.exps {
                let x = point
                    .get(&v)
                    .ok_or_else(|| PolyError::NotInRing(format!("unassigned variable {v}"), self.ring))?;
                t *= num_traits::pow(x.clone(), e as usize);
            }
            acc += t;
        }
        self.ring.normalize(acc)
    }

    /// Restriction to the line through the origin: `x_i ↦ direction_i * s`.
    pub fn line_restrict(&self, direction: &BTreeMap<VarId, BigRational>, s: VarId) -> Polynomial {
        let zero = BTreeMap::new();
        self.affine_restrict(&zero, direction, s)
    }

    /// Restriction to the line `x_i ↦ point_i + direction_i * s`.
    ///
    /// Variables absent from both maps are sent to 0.
    pub fn affine_restrict(
        &self,
        point: &BTreeMap<VarId, BigRational>,
        direction: &BTreeMap<VarId, BigRational>,
        s: VarId,
    ) -> Polynomial {
        let ring = self.ring;
        let svar = Polynomial::var(ring, s);
        let mut images = BTreeMap::new();
        for v in self.variables() {
            let c = point.get(&v).cloned().unwrap_or_else(BigRational::zero);
            let d = direction.get(&v).cloned().unwrap_or_else(BigRational::zero);
            let cp = Polynomial::from_rational(ring, c).expect("point coordinate in ring");
            let dp = svar
                .scale(&d)
                .expect("direction coordinate in ring");
            images.insert(v, &cp + &dp);
        }
        self.substitute(&images)
    }

    /// Formal partial derivative.
    pub fn derivative(&self, v: VarId) -> Polynomial {
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            let e = m.exponent(v);
            if e == 0 {
                continue;
            }
            let mut exps = m.exps.clone();
            let i = exps.iter().position(|&(w, _)| w == v).unwrap();
            if e == 1 {
                exps.remove(i);
            } else {
                exps[i].1 = e - 1;
            }
            let k = self
                .ring
                .normalize_unchecked(c * BigRational::from_integer(BigInt::from(e)));
            if !k.is_zero() {
                add_term(self.ring, &mut terms, Monomial { exps }, k);
            }
        }
        Polynomial {
            ring: self.ring,
            terms,
        }
    }

    /// Renders with the given variable names in the text grammar.
    pub fn display<'a>(&'a self, vars: &'a Vars) -> PolyDisplay<'a> {
        PolyDisplay { poly: self, vars }
    }

    pub fn to_text(&self, vars: &Vars) -> String {
        self.display(vars).to_string()
    }

    /// Parses the text grammar: `+`/`-` separated terms, each an optional
    /// integer (or `a/b` rational) coefficient times `*`-separated `var` or
    /// `var^k` factors. Unknown names are interned into `vars`.
    pub fn parse(text: &str, ring: CoefficientRing, vars: &mut Vars) -> Result<Polynomial, PolyError> {
        Parser {
            src: text.as_bytes(),
            pos: 0,
        }
        .parse(ring, vars)
    }
}

fn add_term(
    ring: CoefficientRing,
    terms: &mut BTreeMap<Monomial, BigRational>,
    m: Monomial,
    c: BigRational,
) {
    use std::collections::btree_map::Entry;
    match terms.entry(m) {
        Entry::Vacant(e) => {
            let c = ring.normalize_unchecked(c);
            if !c.is_zero() {
                e.insert(c);
            }
        }
        Entry::Occupied(mut e) => {
            let s = ring.normalize_unchecked(e.get() + c);
            if s.is_zero() {
                e.remove();
            } else {
                *e.get_mut() = s;
            }
        }
    }
}

macro_rules! impl_binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl std::ops::$tr<&Polynomial> for &Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: &Polynomial) -> Polynomial {
                self.$checked(rhs).expect("polynomial ring mismatch")
            }
        }
        impl std::ops::$tr<Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: Polynomial) -> Polynomial {
                self.$checked(&rhs).expect("polynomial ring mismatch")
            }
        }
    };
}

impl_binop!(Add, add, checked_add);
impl_binop!(Sub, sub, checked_sub);
impl_binop!(Mul, mul, checked_mul);

impl std::ops::Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial::neg(self)
    }
}

pub struct PolyDisplay<'a> {
    poly: &'a Polynomial,
    vars: &'a Vars,
}

impl fmt::Display for PolyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.poly.terms().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mut first = true;
            if !a.is_one() || m.is_one() {
                write!(f, "{a}")?;
                first = false;
            }
            for &(v, e) in &m.exps {
                if !first {
                    write!(f, "*")?;
                }
                first = false;
                write!(f, "{}", self.vars.name(v))?;
                if e > 1 {
                    write!(f, "^{e}")?;
                }
            }
        }
        Ok(())
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display(&Vars::new()))
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err<T>(&self, msg: &str) -> Result<T, PolyError> {
        Err(PolyError::Parse {
            pos: self.pos,
            msg: msg.to_string(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn number(&mut self) -> Result<BigInt, PolyError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected integer");
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        Ok(s.parse::<BigInt>().unwrap())
    }

    fn ident(&mut self) -> Result<String, PolyError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len()
            && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
        {
            self.pos += 1;
        }
        if start == self.pos || self.src[start].is_ascii_digit() {
            return self.err("expected variable name");
        }
        Ok(std::str::from_utf8(&self.src[start..self.pos]).unwrap().to_string())
    }

    fn factor(&mut self, vars: &mut Vars, coeff: &mut BigRational, mono: &mut Vec<(VarId, u32)>) -> Result<(), PolyError> {
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let n = self.number()?;
                let mut q = BigRational::from_integer(n);
                if self.peek() == Some(b'/') {
                    self.pos += 1;
                    let d = self.number()?;
                    if d.is_zero() {
                        return self.err("zero denominator");
                    }
                    q /= BigRational::from_integer(d);
                }
                *coeff *= q;
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let name = self.ident()?;
                let v = vars.intern(&name);
                let mut e = 1u32;
                if self.peek() == Some(b'^') {
                    self.pos += 1;
                    let k = self.number()?;
                    e = match k.to_u32() {
                        Some(e) => e,
                        None => return self.err("exponent too large"),
                    };
                }
                mono.push((v, e));
            }
            _ => return self.err("expected coefficient or variable"),
        }
        Ok(())
    }

    fn parse(mut self, ring: CoefficientRing, vars: &mut Vars) -> Result<Polynomial, PolyError> {
        let mut terms = Vec::new();
        let mut sign = BigRational::one();
        match self.peek() {
            Some(b'-') => {
                sign = -sign;
                self.pos += 1;
            }
            Some(b'+') => self.pos += 1,
            None => return self.err("empty polynomial"),
            _ => {}
        }
        loop {
            let mut coeff = sign.clone();
            let mut mono = Vec::new();
            self.factor(vars, &mut coeff, &mut mono)?;
            while self.peek() == Some(b'*') {
                self.pos += 1;
                self.factor(vars, &mut coeff, &mut mono)?;
            }
            terms.push((Monomial::from_pairs(mono), coeff));
            match self.peek() {
                None => break,
                Some(b'+') => {
                    self.pos += 1;
                    sign = BigRational::one();
                }
                Some(b'-') => {
                    self.pos += 1;
                    sign = -BigRational::one();
                }
                Some(_) => return self.err("expected '+', '-' or end of input"),
            }
        }
        Polynomial::from_terms(ring, terms)
    }
}

/// Dense univariate helpers over QQ, used by the squarefreeness probe.
pub mod univariate {
    use super::*;

    /// Coefficients in ascending degree, trailing zeros trimmed.
    pub fn from_poly(p: &Polynomial, s: VarId) -> Vec<BigRational> {
        let mut out = vec![BigRational::zero(); p.total_degree().unwrap_or(0) as usize + 1];
        for (m, c) in p.terms() {
            let e = m.exponent(s) as usize;
            debug_assert_eq!(m.degree() as usize, e, "not univariate in s");
            out[e] += c;
        }
        trim(out)
    }

    fn trim(mut v: Vec<BigRational>) -> Vec<BigRational> {
        while v.last().map(|c| c.is_zero()).unwrap_or(false) {
            v.pop();
        }
        v
    }

    pub fn degree(v: &[BigRational]) -> Option<usize> {
        if v.is_empty() {
            None
        } else {
            Some(v.len() - 1)
        }
    }

    pub fn derivative(v: &[BigRational]) -> Vec<BigRational> {
        trim(
            v.iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigRational::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    fn rem(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
        let mut r = a.to_vec();
        let db = b.len() - 1;
        let lead = b[db].clone();
        while r.len() > db {
            let k = r.len() - 1;
            let q = &r[k] / &lead;
            for i in 0..=db {
                let t = &q * &b[i];
                r[k - db + i] -= t;
            }
            r = trim(r);
            if r.len() > k {
                r.truncate(k);
            }
        }
        r
    }

    /// Monic gcd over QQ.
    pub fn gcd(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
        let (mut x, mut y) = (trim(a.to_vec()), trim(b.to_vec()));
        while !y.is_empty() {
            let r = rem(&x, &y);
            x = y;
            y = r;
        }
        if let Some(l) = x.last().cloned() {
            for c in x.iter_mut() {
                *c /= &l;
            }
        }
        x
    }

    /// Squarefree over QQ (characteristic zero): `gcd(f, f') = 1`.
    pub fn is_squarefree(v: &[BigRational]) -> bool {
        let g = gcd(v, &derivative(v));
        g.len() == 1
    }
}
