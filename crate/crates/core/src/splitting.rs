//! Frobenius-splitting checks: the local coefficient criterion, residually
//! normal crossing certificates, a squarefreeness probe and the skew-form claim.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::time::Instant;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::charts::{self, ChartError};
use crate::exactpoly::{univariate, CoefficientRing, Monomial, Polynomial, VarId, Vars};
use crate::linalg::{self, q, QMatrix};
use crate::polymatrix::{MatrixError, MinorSpec, PolyMatrix};
use crate::rootdata::{Family, GroupDatum};
use crate::sections::{self, SectionError};

#[derive(Debug, Error)]
pub enum SplittingError {
    #[error(transparent)]
    Chart(#[from] ChartError),
    #[error(transparent)]
    Section(#[from] SectionError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error("prime {0} is not an odd prime")]
    BadPrime(u64),
    #[error("polynomial uses a variable outside the chart coordinates")]
    ForeignVariable,
    #[error("{0} variables do not fit the packed exponent kernel")]
    TooManyVariables(usize),
    #[error("invalid input: {0}")]
    BadInput(String),
}

/// Limits on intermediate size and wall-clock time.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Guards {
    pub max_terms: usize,
    pub max_seconds: f64,
}

impl Default for Guards {
    fn default() -> Self {
        Guards {
            max_terms: 20_000_000,
            max_seconds: 600.0,
        }
    }
}

/// Which guard stopped a computation.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GuardTrip {
    pub guard: &'static str,
    pub limit: String,
}

struct Clock {
    start: Instant,
    guards: Guards,
}

impl Clock {
    fn new(guards: Guards) -> Self {
        Clock {
            start: Instant::now(),
            guards,
        }
    }

    fn check(&self, terms: usize) -> Result<(), GuardTrip> {
        if terms > self.guards.max_terms {
            return Err(GuardTrip {
                guard: "max_terms",
                limit: self.guards.max_terms.to_string(),
            });
        }
        if self.start.elapsed().as_secs_f64() > self.guards.max_seconds {
            return Err(GuardTrip {
                guard: "max_seconds",
                limit: self.guards.max_seconds.to_string(),
            });
        }
        Ok(())
    }
}

/// Exponent vectors packed into a `u128`, one field per variable with a spare
/// top bit so that "some exponent exceeds `p-1`" is a single mask test.
#[derive(Clone, Copy, Debug)]
struct Packing {
    nvars: usize,
    bits: u32,
    top: u128,
    offset: u128,
}

impl Packing {
    fn new(nvars: usize, cap: u32) -> Option<Packing> {
        let mut bits = 2;
        while (1u64 << (bits - 1)) <= 2 * cap as u64 {
            bits += 1;
        }
        if nvars * bits as usize > 128 {
            return None;
        }
        let mut top = 0u128;
        let mut offset = 0u128;
        for i in 0..nvars {
            let shift = i as u32 * bits;
            top |= 1u128 << (shift + bits - 1);
            offset |= (((1u128 << (bits - 1)) - 1) - cap as u128) << shift;
        }
        Some(Packing {
            nvars,
            bits,
            top,
            offset,
        })
    }

    /// True if every field is at most the cap.
    fn fits(&self, k: u128) -> bool {
        (k + self.offset) & self.top == 0
    }

    fn uniform(&self, e: u32) -> u128 {
        (0..self.nvars).fold(0u128, |acc, i| acc | (e as u128) << (i as u32 * self.bits))
    }

    fn pack(&self, m: &Monomial, index: &HashMap<VarId, usize>, cap: u32) -> Result<Option<u128>, SplittingError> {
        let mut k = 0u128;
        for &(v, e) in m.exponents() {
            let i = *index.get(&v).ok_or(SplittingError::ForeignVariable)?;
            if e > cap {
                return Ok(None);
            }
            k |= (e as u128) << (i as u32 * self.bits);
        }
        Ok(Some(k))
    }
}

trait CoefOps<C> {
    fn zero(&self) -> C;
    fn one(&self) -> C;
    fn mul_add(&self, acc: &mut C, a: &C, b: &C);
    fn is_zero(&self, c: &C) -> bool;
}

struct Exact;

impl CoefOps<BigInt> for Exact {
    fn zero(&self) -> BigInt {
        BigInt::zero()
    }
    fn one(&self) -> BigInt {
        BigInt::one()
    }
    fn mul_add(&self, acc: &mut BigInt, a: &BigInt, b: &BigInt) {
        *acc += a * b;
    }
    fn is_zero(&self, c: &BigInt) -> bool {
        c.is_zero()
    }
}

struct ModP(u64);

impl CoefOps<u64> for ModP {
    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    fn mul_add(&self, acc: &mut u64, a: &u64, b: &u64) {
        *acc = ((*acc as u128 + *a as u128 * *b as u128) % self.0 as u128) as u64;
    }
    fn is_zero(&self, c: &u64) -> bool {
        *c == 0
    }
}

type Packed<C> = HashMap<u128, (u32, C)>;

/// Coefficient of `∏ t^e` in `f^e` where `f` is given by packed terms of
/// degree at most `max_deg`. Computes `f^a` and `f^b` (`a + b = e`) truncated
/// to exponents `≤ e` and degree windows that can still reach the target,
/// then pairs complementary keys.
fn power_coefficient<C: Clone, O: CoefOps<C>>(
    base: &[(u128, u32, C)],
    pk: &Packing,
    e: u32,
    max_deg: u32,
    ops: &O,
    clock: &Clock,
) -> Result<Option<C>, GuardTrip> {
    let target = pk.uniform(e);
    let target_deg = e * pk.nvars as u32;
    let b = e / 2;
    let a = e - b;
    let mut powers: Vec<Packed<C>> = Vec::with_capacity(a as usize + 1);
    let mut cur: Packed<C> = HashMap::from([(0u128, (0u32, ops.one()))]);
    powers.push(cur.clone());
    for j in 0..a {
        // After this step we hold f^{j+1}; the other e-(j+1) factors add at most that many times max_deg.
        let rest = (e - j - 1) * max_deg;
        let mut next: Packed<C> = HashMap::new();
        for (k, (d, c)) in &cur {
            for (bk, bd, bc) in base {
                let nk = k + bk;
                if !pk.fits(nk) {
                    continue;
                }
                let nd = d + bd;
                if nd + rest < target_deg {
                    continue;
                }
                let slot = next.entry(nk).or_insert_with(|| (nd, ops.zero()));
                ops.mul_add(&mut slot.1, c, bc);
            }
            clock.check(next.len())?;
        }
        next.retain(|_, (_, c)| !ops.is_zero(c));
        cur = next;
        powers.push(cur.clone());
    }
    let fa = &powers[a as usize];
    let fb = &powers[b as usize];
    let mut acc: Option<C> = None;
    for (k, (_, c)) in fa {
        let need = target.wrapping_sub(*k);
        if !pk.fits(need) || need > target {
            continue;
        }
        if let Some((_, c2)) = fb.get(&need) {
            let slot = acc.get_or_insert_with(|| ops.zero());
            ops.mul_add(slot, c, c2);
        }
    }
    Ok(acc)
}


/// Outcome of the coefficient criterion for one prime.
#[derive(Clone, Debug, Serialize)]
pub struct SplitVerdict {
    pub p: u64,
    /// Exact integer coefficient of `(t_1⋯t_N)^{p-1}` in `f^{p-1}`, when computed.
    pub coefficient: Option<String>,
    pub coefficient_mod_p: Option<u64>,
    pub splits: Option<bool>,
    pub degree: u32,
    pub nvars: usize,
    pub terms: usize,
    /// Agreement of the mod-p kernel with the exact coefficient.
    pub fast_path_agrees: Option<bool>,
    /// Agreement of the top-degree computation (only when `deg f = N`).
    pub top_degree_agrees: Option<bool>,
    pub not_computed: Option<GuardTrip>,
}

fn pack_terms(f: &Polynomial, pk: &Packing, index: &HashMap<VarId, usize>, cap: u32) -> Result<Vec<(u128, u32, BigInt)>, SplittingError> {
    let mut out = Vec::new();
    for (m, c) in f.terms() {
        if !c.is_integer() {
            return Err(SplittingError::BadInput("coefficient criterion needs integer coefficients".into()));
        }
        if let Some(k) = pk.pack(m, index, cap)? {
            out.push((k, m.degree(), c.to_integer()));
        }
    }
    Ok(out)
}

/// Coefficient criterion for `f` in the coordinates `vars`: `f^{p-1}` is
/// expanded exactly over ℤ (truncated to the exponents that can reach
/// `(t_1⋯t_N)^{p-1}`) and the coefficient is reduced mod `p` afterwards.
/// A mod-`p` kernel and, when `deg f = N`, a top-degree-only computation
/// are run as cross-checks.
pub fn splitting_coefficient(f: &Polynomial, vars: &[VarId], p: u64, guards: Guards) -> Result<SplitVerdict, SplittingError> {
    if !crate::vanishing::is_odd_prime(p) {
        return Err(SplittingError::BadPrime(p));
    }
    let n = vars.len();
    let e = (p - 1) as u32;
    let pk = Packing::new(n, e).ok_or(SplittingError::TooManyVariables(n))?;
    let index: HashMap<VarId, usize> = vars.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let degree = f.total_degree().unwrap_or(0);
    let mut verdict = SplitVerdict {
        p,
        coefficient: None,
        coefficient_mod_p: None,
        splits: None,
        degree,
        nvars: n,
        terms: f.num_terms(),
        fast_path_agrees: None,
        top_degree_agrees: None,
        not_computed: None,
    };
    let clock = Clock::new(guards);
    let base = pack_terms(f, &pk, &index, e)?;
    let exact = match power_coefficient(&base, &pk, e, degree, &Exact, &clock) {
        Ok(c) => c.unwrap_or_default(),
        Err(trip) => {
            verdict.not_computed = Some(trip);
            return Ok(verdict);
        }
    };
    let reduced = exact.mod_floor(&BigInt::from(p)).to_u64().unwrap();
    verdict.coefficient = Some(exact.to_string());
    verdict.coefficient_mod_p = Some(reduced);
    verdict.splits = Some(reduced != 0);

    let modp: Vec<(u128, u32, u64)> = base
        .iter()
        .map(|(k, d, c)| (*k, *d, c.mod_floor(&BigInt::from(p)).to_u64().unwrap()))
        .filter(|t| t.2 != 0)
        .collect();
    match power_coefficient(&modp, &pk, e, degree, &ModP(p), &clock) {
        Ok(c) => verdict.fast_path_agrees = Some(c.unwrap_or(0) == reduced),
        Err(trip) => verdict.not_computed = Some(trip),
    }
    if degree as usize == n {
        let top = f.homogeneous_part(degree);
        let tb = pack_terms(&top, &pk, &index, e)?;
        match power_coefficient(&tb, &pk, e, degree, &Exact, &clock) {
            Ok(c) => verdict.top_degree_agrees = Some(c.unwrap_or_default() == exact),
            Err(trip) => verdict.not_computed = Some(trip),
        }
    }
    Ok(verdict)
}

/// σ₋ on the big cell together with its coordinates: matrix entries for
/// `SL_n`, root coordinates (height order) for `Sp` and `SO`. σ₊ is 1 there.
pub fn big_cell_section(g: &GroupDatum) -> Result<(Polynomial, Vars, Vec<VarId>), SplittingError> {
    let chart = match g.family {
        Family::A => charts::entry_chart(g.n),
        _ => charts::big_cell_chart(g)?,
    };
    let (sp, sm) = sections::build_sigma_pair(g)?;
    if !sp.evaluate(&chart.matrix)?.is_one() {
        return Err(SplittingError::BadInput("σ₊ is not 1 on the big cell".into()));
    }
    let f = sm.evaluate(&chart.matrix)?;
    Ok((f, chart.vars, chart.variables))
}

pub fn local_splitting_coefficient(g: &GroupDatum, p: u64, guards: Guards) -> Result<SplitVerdict, SplittingError> {
    let (f, _, vars) = big_cell_section(g)?;
    splitting_coefficient(&f, &vars, p, guards)
}

/// A residually-normal-crossing chain `f_i ≡ t_{i+1} f_{i+1} mod (t_1,…,t_i)`
/// with canonical quotients; `chain[0] · unit` is the target.
#[derive(Clone, Debug, PartialEq)]
pub struct RncCertificate {
    pub order: Vec<VarId>,
    pub chain: Vec<Polynomial>,
    pub unit: BigRational,
}

impl RncCertificate {
    pub fn to_json(&self, vars: &Vars) -> Value {
        json!({
            "order": self.order.iter().map(|&v| vars.name(v)).collect::<Vec<_>>(),
            "length": self.order.len(),
            "unit": self.unit.to_string(),
            "chain": self.chain.iter().map(|f| f.to_text(vars)).collect::<Vec<_>>(),
        })
    }

    /// Text form: an `order` line followed by `f{i}: …` lines.
    pub fn to_text(&self, vars: &Vars) -> String {
        let mut s = format!(
            "order: {}\nunit: {}\n",
            self.order.iter().map(|&v| vars.name(v)).collect::<Vec<_>>().join(" "),
            self.unit
        );
        for (i, f) in self.chain.iter().enumerate() {
            s.push_str(&format!("f{i}: {}\n", f.to_text(vars)));
        }
        s
    }

    pub fn parse(text: &str, ring: CoefficientRing, vars: &mut Vars) -> Result<RncCertificate, SplittingError> {
        let mut order = Vec::new();
        let mut unit = BigRational::one();
        let mut chain = Vec::new();
        for line in text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')) {
            let (key, rest) = line
                .split_once(':')
                .ok_or_else(|| SplittingError::BadInput(format!("malformed line '{line}'")))?;
            let rest = rest.trim();
            match key.trim() {
                "order" => order = rest.split_whitespace().map(|v| vars.intern(v)).collect(),
                "unit" => {
                    unit = rest
                        .parse::<BigRational>()
                        .map_err(|_| SplittingError::BadInput(format!("bad unit '{rest}'")))?
                }
                k if k.starts_with('f') => {
                    let idx: usize = k[1..]
                        .parse()
                        .map_err(|_| SplittingError::BadInput(format!("bad chain index '{k}'")))?;
                    if idx != chain.len() {
                        return Err(SplittingError::BadInput(format!("chain index {idx} out of sequence")));
                    }
                    chain.push(
                        Polynomial::parse(rest, ring, vars).map_err(|e| SplittingError::BadInput(e.to_string()))?,
                    );
                }
                k => return Err(SplittingError::BadInput(format!("unknown key '{k}'"))),
            }
        }
        Ok(RncCertificate { order, chain, unit })
    }
}

/// Result of checking a certificate.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RncCheck {
    pub pass: bool,
    /// First failing chain equation `i` (`f_i ≢ t_{i+1} f_{i+1}`), or a structural problem.
    pub failure: Option<String>,
    pub residual: Option<String>,
}

/// Checks `chain[0]·unit = f0`, `chain[N] = 1` and every chain equation exactly.
pub fn rnc_verify(f0: &Polynomial, cert: &RncCertificate, vars: &Vars) -> RncCheck {
    let fail = |msg: String, residual: Option<&Polynomial>| RncCheck {
        pass: false,
        failure: Some(msg),
        residual: residual.map(|r| r.to_text(vars)),
    };
    let n = cert.order.len();
    if cert.chain.len() != n + 1 {
        return fail(format!("chain has {} entries for {n} variables", cert.chain.len()), None);
    }
    if cert.order.iter().collect::<BTreeSet<_>>().len() != n {
        return fail("repeated variable in order".into(), None);
    }
    let ring = cert.chain[0].ring();
    let Ok(f0r) = f0.to_ring(ring) else {
        return fail("target not representable in the chain ring".into(), None);
    };
    let Ok(head) = cert.chain[0].scale(&cert.unit) else {
        return fail("unit not in the chain ring".into(), None);
    };
    if head != f0r {
        return fail("f0 differs from the target".into(), Some(&(&head - &f0r)));
    }
    if !cert.chain[n].is_one() {
        return fail(format!("f{n} is not 1"), Some(&cert.chain[n]));
    }
    let mut zeroed = BTreeSet::new();
    for i in 0..n {
        let t = cert.order[i];
        let lhs = cert.chain[i].zero_out(&zeroed);
        let rhs = &Polynomial::var(ring, t) * &cert.chain[i + 1];
        // Equality modulo (t_1..t_i): compare after setting those variables to 0.
        let diff = (&lhs - &rhs).zero_out(&zeroed);
        if !diff.is_zero() {
            return fail(format!("chain equation {i}: f{i} ≢ {}·f{} mod previous variables", vars.name(t), i + 1), Some(&diff));
        }
        zeroed.insert(t);
    }
    RncCheck {
        pass: true,
        failure: None,
        residual: None,
    }
}

#[derive(Clone, Debug)]
pub enum RncOutcome {
    Found(RncCertificate),
    /// No chain with canonical quotients exists; this does not rule out other lifts.
    Exhausted { states: usize },
    NotComputed(GuardTrip),
}

/// Support of `f` as dense exponent rows over `vars`, with coefficients.
struct Support {
    exps: Vec<Vec<u32>>,
    coeffs: Vec<BigRational>,
}

impl Support {
    fn new(f: &Polynomial, vars: &[VarId]) -> Result<Support, SplittingError> {
        let index: HashMap<VarId, usize> = vars.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut exps = Vec::new();
        let mut coeffs = Vec::new();
        for (m, c) in f.terms() {
            let mut row = vec![0u32; vars.len()];
            for &(v, e) in m.exponents() {
                row[*index.get(&v).ok_or(SplittingError::ForeignVariable)?] = e;
            }
            exps.push(row);
            coeffs.push(c.clone());
        }
        Ok(Support { exps, coeffs })
    }

    /// Terms whose exponent is exactly 1 in every variable of `chosen`.
    fn state(&self, chosen: &[usize]) -> Vec<usize> {
        (0..self.exps.len())
            .filter(|&i| chosen.iter().all(|&t| self.exps[i][t] == 1))
            .collect()
    }
}

/// The chain state `g_S`: terms of `f` with exponent exactly 1 in each
/// variable of `S`, divided by `∏ S`, with `S` then set to 0.
pub fn chain_state(f: &Polynomial, vars: &[VarId], set: &[VarId]) -> Result<Polynomial, SplittingError> {
    let sup = Support::new(f, vars)?;
    let idx: Vec<usize> = set
        .iter()
        .map(|v| vars.iter().position(|w| w == v).ok_or(SplittingError::ForeignVariable))
        .collect::<Result<_, _>>()?;
    let ring = f.ring();
    let terms = sup.state(&idx).into_iter().map(|i| {
        let m = Monomial::from_pairs(
            vars.iter()
                .enumerate()
                .filter(|(j, _)| !idx.contains(j))
                .map(|(j, &v)| (v, sup.exps[i][j])),
        );
        (m, sup.coeffs[i].clone())
    });
    Ok(Polynomial::from_terms(ring, terms).expect("coefficients come from f"))
}

/// Chain state reached by applying canonical quotients in the given sequence,
/// or `None` if some division fails.
pub fn sequential_chain_state(f: &Polynomial, seq: &[VarId]) -> Option<Polynomial> {
    let mut zeroed = BTreeSet::new();
    let mut cur = f.clone();
    for &t in seq {
        cur = cur.zero_out_and_divide(&zeroed, t).ok()?;
        zeroed.insert(t);
    }
    Some(cur.zero_out(&zeroed))
}

/// Depth-first search over variable sets for a chain with canonical
/// quotients. Candidates are tried in ascending variable order and dead sets are memoized.
pub fn rnc_search(f0: &Polynomial, vars: &[VarId], guards: Guards) -> Result<RncOutcome, SplittingError> {
    if f0.is_zero() {
        return Err(SplittingError::BadInput("rnc search needs a nonzero polynomial".into()));
    }
    let n = vars.len();
    if n > 64 {
        return Err(SplittingError::TooManyVariables(n));
    }
    let mut sorted: Vec<VarId> = vars.to_vec();
    sorted.sort_unstable();
    let sup = Support::new(f0, &sorted)?;
    let clock = Clock::new(guards);
    let mut dead: HashSet<u64> = HashSet::new();
    let mut order = Vec::with_capacity(n);
    let all: Vec<usize> = (0..sup.exps.len()).collect();
    let found = dfs(&sup, n, 0, &all, &mut order, &mut dead, &clock);
    match found {
        Err(trip) => Ok(RncOutcome::NotComputed(trip)),
        Ok(false) => Ok(RncOutcome::Exhausted { states: dead.len() }),
        Ok(true) => {
            let order: Vec<VarId> = order.iter().map(|&i| sorted[i]).collect();
            Ok(RncOutcome::Found(build_certificate(f0, &sorted, &order)?))
        }
    }
}

fn dfs(
    sup: &Support,
    n: usize,
    mask: u64,
    live: &[usize],
    order: &mut Vec<usize>,
    dead: &mut HashSet<u64>,
    clock: &Clock,
) -> Result<bool, GuardTrip> {
    if order.len() == n {
        return Ok(live.len() == 1);
    }
    if dead.contains(&mask) {
        return Ok(false);
    }
    clock.check(dead.len())?;
    for t in 0..n {
        if mask & (1 << t) != 0 || !live.iter().all(|&i| sup.exps[i][t] >= 1) {
            continue;
        }
        let next: Vec<usize> = live.iter().copied().filter(|&i| sup.exps[i][t] == 1).collect();
        // The last quotient must be exactly a constant: nothing of higher order in t may remain.
        let last = order.len() + 1 == n;
        if next.is_empty() || (last && next.len() != live.len()) {
            continue;
        }
        order.push(t);
        if dfs(sup, n, mask | (1 << t), &next, order, dead, clock)? {
            return Ok(true);
        }
        order.pop();
    }
    dead.insert(mask);
    Ok(false)
}

/// Canonical chain along `order`, normalised so that the last entry is 1.
pub fn build_certificate(f0: &Polynomial, vars: &[VarId], order: &[VarId]) -> Result<RncCertificate, SplittingError> {
    let mut chain = vec![f0.clone()];
    let mut zeroed = BTreeSet::new();
    for &t in order {
        let next = chain
            .last()
            .unwrap()
            .zero_out_and_divide(&zeroed, t)
            .map_err(|e| SplittingError::BadInput(format!("order does not give a chain at {t}: {e:?}")))?;
        chain.push(next);
        zeroed.insert(t);
    }
    if order.len() != vars.len() {
        return Err(SplittingError::BadInput("order must use every coordinate".into()));
    }
    let unit = chain
        .last()
        .and_then(|f| f.constant_value())
        .filter(|c| !c.is_zero())
        .ok_or_else(|| SplittingError::BadInput("chain does not end in a nonzero constant".into()))?;
    let ring = if unit.abs().is_one() { f0.ring() } else { CoefficientRing::Rationals };
    let chain = chain
        .iter()
        .map(|f| f.to_ring(ring).and_then(|f| f.div_scalar(&unit)))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| SplittingError::BadInput(e.to_string()))?;
    Ok(RncCertificate {
        order: order.to_vec(),
        chain,
        unit,
    })
}

/// Heuristic evidence that `f` is squarefree: restrictions to random lines.
#[derive(Clone, Debug, Serialize)]
pub struct SquarefreeEvidence {
    pub trials: usize,
    pub passed: usize,
    pub discarded: usize,
    pub seed: u64,
    pub heuristic: bool,
}

pub fn squarefree_probe(f: &Polynomial, trials: usize, seed: u64) -> Result<SquarefreeEvidence, SplittingError> {
    if f.is_zero() {
        return Err(SplittingError::BadInput("squarefree probe needs a nonzero polynomial".into()));
    }
    let fq = f.to_ring(CoefficientRing::Rationals).map_err(|e| SplittingError::BadInput(e.to_string()))?;
    let vars: Vec<VarId> = fq.variables().into_iter().collect();
    let s = vars.iter().max().map(|m| m + 1).unwrap_or(0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut done, mut passed, mut discarded) = (0, 0, 0);
    while done < trials {
        let point: BTreeMap<VarId, BigRational> = vars.iter().map(|&v| (v, q(rng.gen_range(-20..=20)))).collect();
        let dir: BTreeMap<VarId, BigRational> = vars.iter().map(|&v| (v, q(rng.gen_range(-20..=20)))).collect();
        let line = univariate::from_poly(&fq.affine_restrict(&point, &dir, s), s);
        if univariate::degree(&line).unwrap_or(0) == 0 {
            discarded += 1;
            if discarded > 100 * trials.max(1) {
                break;
            }
            continue;
        }
        done += 1;
        if univariate::is_squarefree(&line) {
            passed += 1;
        }
    }
    Ok(SquarefreeEvidence {
        trials: done,
        passed,
        discarded,
        seed,
        heuristic: true,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct SkewClaimResult {
    pub n: usize,
    pub k: usize,
    pub minor: String,
    pub minor_terms: usize,
    pub nonzero: bool,
    pub homogeneous_degree: Option<u32>,
    /// Rows are `e_1..e_k`, then `e_{n-k+1}..e_n`.
    pub witness: Vec<Vec<String>>,
    pub pairing_matrix: Vec<Vec<String>>,
    pub pairing_determinant: String,
    /// The symbolic corner minor evaluated at the Gram matrix of the witness basis.
    pub minor_at_witness: Option<String>,
    pub agree: bool,
}

impl SkewClaimResult {
    pub fn passed(&self) -> bool {
        self.nonzero && self.homogeneous_degree == Some(self.k as u32) && self.pairing_determinant != "0" && self.agree
    }
}

/// Generic skew matrix with `b{i}_{j}` (`i > j`) below the diagonal.
pub fn generic_skew(n: usize, vars: &mut Vars) -> PolyMatrix {
    let zz = CoefficientRing::Integers;
    let mut b = PolyMatrix::zeros(zz, n, n);
    for i in 1..n {
        for j in 0..i {
            let v = vars.intern(&format!("b{}_{}", i + 1, j + 1));
            b.set(i, j, Polynomial::var(zz, v));
            b.set(j, i, Polynomial::var(zz, v).neg());
        }
    }
    b
}

fn pair(omega: &QMatrix, x: &[BigRational], y: &[BigRational]) -> BigRational {
    let mut s = BigRational::zero();
    for (i, xi) in x.iter().enumerate() {
        if xi.is_zero() {
            continue;
        }
        for (j, yj) in y.iter().enumerate() {
            if !omega[i][j].is_zero() {
                s += xi * &omega[i][j] * yj;
            }
        }
    }
    s
}

fn random_vec(rng: &mut ChaCha8Rng, n: usize) -> Vec<BigRational> {
    (0..n).map(|_| q(rng.gen_range(-3..=3))).collect()
}

/// The corner-minor claim for a generic skew `n × n` matrix (`n` odd) and its
/// constructive proof with a rank `n-1` form over ℚ.
pub fn skew_minor_claim(n: usize, k: usize, seed: u64) -> Result<SkewClaimResult, SplittingError> {
    if n.is_multiple_of(2) || k == 0 || k >= n {
        return Err(SplittingError::BadInput(format!("need n odd and 1 <= k <= n-1, got n = {n}, k = {k}")));
    }
    let mut vars = Vars::new();
    let b = generic_skew(n, &mut vars);
    // rows n-k+1..n against columns 1..k
    let rows = MinorSpec::new((n - k + 1..=n).collect());
    let minor = b.column_minor(&rows)?;
    let nonzero = !minor.is_zero();
    let homogeneous_degree = (nonzero && minor.is_homogeneous()).then(|| minor.total_degree().unwrap());

    // Rank n-1 form: hyperbolic planes on (1,2), (3,4), … and radical e_n.
    let mut omega: QMatrix = vec![vec![q(0); n]; n];
    for i in (0..n - 1).step_by(2) {
        omega[i][i + 1] = q(1);
        omega[i + 1][i] = q(-1);
    }
    let radical: Vec<BigRational> = (0..n).map(|i| q((i == n - 1) as i64)).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let overlap = (2 * k).saturating_sub(n);
    let (w, wp) = loop {
        let w: Vec<Vec<BigRational>> = (0..k).map(|_| random_vec(&mut rng, n)).collect();
        let mut with_rad = w.clone();
        with_rad.push(radical.clone());
        if linalg::rank(&w) != k || linalg::rank(&with_rad) != k + 1 {
            continue;
        }
        // W' = span(first `overlap` vectors of W, fresh random vectors).
        let mut wp: Vec<Vec<BigRational>> = w[..overlap].to_vec();
        while wp.len() < k {
            wp.push(random_vec(&mut rng, n));
        }
        let mut both = w.clone();
        both.extend(wp.iter().cloned());
        let meet = 2 * k - linalg::rank(&both);
        let pairing: QMatrix = w.iter().map(|x| wp.iter().map(|y| pair(&omega, x, y)).collect()).collect();
        // W' ∩ W^⊥ = 0 exactly when the pairing W × W' is nondegenerate.
        if linalg::rank(&wp) == k && meet == overlap && !linalg::determinant(&pairing).is_zero() {
            break (w, wp);
        }
    };
    // e_{n-k+1..k} span W ∩ W' and are shared; they sit last in W and first in W'.
    let mut e: Vec<Option<Vec<BigRational>>> = vec![None; n];
    let shared = &w[..overlap];
    let w_rest = &w[overlap..];
    let wp_rest = &wp[overlap..];
    for (i, v) in w_rest.iter().enumerate() {
        e[i] = Some(v.clone());
    }
    for (i, v) in shared.iter().enumerate() {
        e[n - k + i] = Some(v.clone());
    }
    for (i, v) in wp_rest.iter().enumerate() {
        e[n - wp_rest.len() + i] = Some(v.clone());
    }
    let first: Vec<Vec<BigRational>> = (0..k).map(|i| e[i].clone().unwrap()).collect();
    let last: Vec<Vec<BigRational>> = (n - k..n).map(|i| e[i].clone().unwrap()).collect();
    let pairing: QMatrix = first.iter().map(|x| last.iter().map(|y| pair(&omega, x, y)).collect()).collect();
    let det = linalg::determinant(&pairing);

    // Fill the unused middle slots (2k < n) to a basis and evaluate the symbolic minor on its Gram matrix.
    let mut basis: Vec<Vec<BigRational>> = e.iter().flatten().cloned().collect();
    let mut filled = e.clone();
    for slot in filled.iter_mut() {
        if slot.is_none() {
            loop {
                let v = random_vec(&mut rng, n);
                let mut trial = basis.clone();
                trial.push(v.clone());
                if linalg::rank(&trial) == trial.len() {
                    basis = trial;
                    *slot = Some(v);
                    break;
                }
            }
        }
    }
    let full: Vec<Vec<BigRational>> = filled.into_iter().map(Option::unwrap).collect();
    let minor_at_witness = if linalg::rank(&full) == n {
        let mut point = BTreeMap::new();
        for i in 1..n {
            for j in 0..i {
                let v = vars.get(&format!("b{}_{}", i + 1, j + 1)).unwrap();
                point.insert(v, pair(&omega, &full[i], &full[j]));
            }
        }
        Some(minor.to_ring(CoefficientRing::Rationals).unwrap().evaluate(&point).unwrap())
    } else {
        None
    };
    // det B[{n-k+1..n},{1..k}] is det of the transpose of the pairing block up to (-1)^k.
    let sign = if k.is_multiple_of(2) { q(1) } else { q(-1) };
    let agree = minor_at_witness.as_ref().map(|m| *m == &sign * &det).unwrap_or(false);
    let fmt = |m: &[Vec<BigRational>]| -> Vec<Vec<String>> { m.iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect() };
    let mut witness = first.clone();
    witness.extend(last.iter().cloned());
    Ok(SkewClaimResult {
        n,
        k,
        minor: minor.to_text(&vars),
        minor_terms: minor.num_terms(),
        nonzero,
        homogeneous_degree,
        witness: fmt(&witness),
        pairing_matrix: fmt(&pairing),
        pairing_determinant: det.to_string(),
        minor_at_witness: minor_at_witness.map(|m| m.to_string()),
        agree,
    })
}
