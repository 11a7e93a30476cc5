//! Coordinate charts on `G/B` and the specialization families used for upper bounds.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::exactpoly::{CoefficientRing, Polynomial, VarId, Vars};
use crate::polymatrix::{MatrixError, MinorSpec, PolyMatrix};
use crate::rootdata::{Family, GroupDatum, Parabolic, RootDataError, WeylWord};
use crate::sections;

const ZZ: CoefficientRing = CoefficientRing::Integers;

#[derive(Debug, Error)]
pub enum ChartError {
    #[error(transparent)]
    RootData(#[from] RootDataError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error("chart fails group membership: {0}")]
    Membership(String),
    #[error("invalid generator order: {0}")]
    BadOrder(String),
    #[error("invalid chart request: {0}")]
    BadInput(String),
    #[error("no specialization found: {0}")]
    NoSpecialization(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ChartKind {
    /// `U⁻` around `eB`, in root coordinates.
    BigCell,
    /// `w₀^P U⁻` around `w₀^P B`, in root coordinates.
    LeviCenter,
    /// `U⁻` for `SL_n` with the matrix entries themselves as coordinates.
    Entry,
    /// The block picture of the slice through `w₀^P` for `SL_n`.
    SlExplicit,
    /// `w₀^P L` with `L` generic lower unitriangular in `SL_N`.
    AmbientSl,
}

/// A symbolic group element in free coordinates; at the origin it is the center.
#[derive(Clone, Debug)]
pub struct Chart {
    pub kind: ChartKind,
    pub family: Family,
    pub center: Option<WeylWord>,
    pub vars: Vars,
    pub variables: Vec<VarId>,
    pub matrix: PolyMatrix,
}

impl Chart {
    pub fn dimension(&self) -> usize {
        self.variables.len()
    }

    /// The matrix at the origin.
    pub fn center_matrix(&self) -> PolyMatrix {
        let zero: BTreeMap<VarId, Polynomial> = self
            .variables
            .iter()
            .map(|&v| (v, Polynomial::zero(self.matrix.ring())))
            .collect();
        self.matrix.substitute(&zero)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "kind": self.kind,
            "center_word": self.center.as_ref().map(|w| w.word.clone()).unwrap_or_default(),
            "variables": self.variables.iter().map(|&v| self.vars.name(v)).collect::<Vec<_>>(),
            "matrix": self.matrix.to_text_rows(&self.vars),
        })
    }
}

fn letter_names(count: usize) -> Option<Vec<String>> {
    (count <= 26).then(|| (0..count).map(|i| ((b'a' + i as u8) as char).to_string()).collect())
}

/// Product `∏ exp(t_β X_β)` over the negative-root generators taken in `order`.
/// Variable `t{k}` always belongs to generator `k`, whatever the order.
fn root_product(g: &GroupDatum, vars: &mut Vars, order: &[usize]) -> Result<(Vec<VarId>, PolyMatrix), ChartError> {
    let count = g.negative_generators.len();
    let mut seen = vec![false; count];
    if order.len() != count {
        return Err(ChartError::BadOrder(format!("{} indices for {count} generators", order.len())));
    }
    for &k in order {
        if k >= count || std::mem::replace(&mut seen[k], true) {
            return Err(ChartError::BadOrder(format!("{order:?} is not a permutation of 0..{count}")));
        }
    }
    let variables: Vec<VarId> = (1..=count).map(|k| vars.intern(&format!("t{k}"))).collect();
    let mut m = PolyMatrix::identity(ZZ, g.size);
    for &k in order {
        let factor = g.negative_generators[k].1.exp_nilpotent(variables[k])?;
        m = m.mul(&factor)?;
    }
    Ok((variables, m))
}

fn identity_order(g: &GroupDatum) -> Vec<usize> {
    (0..g.negative_generators.len()).collect()
}

/// Big cell around `eB` in root coordinates, generators in height order.
pub fn big_cell_chart(g: &GroupDatum) -> Result<Chart, ChartError> {
    big_cell_chart_ordered(g, &identity_order(g))
}

pub fn big_cell_chart_ordered(g: &GroupDatum, order: &[usize]) -> Result<Chart, ChartError> {
    let mut vars = Vars::new();
    let (variables, matrix) = root_product(g, &mut vars, order)?;
    Ok(Chart {
        kind: ChartKind::BigCell,
        family: g.family,
        center: None,
        vars,
        variables,
        matrix,
    })
}

/// Chart around `w₀^P B`: `rep(w₀^P) · u(t)`.
pub fn levi_center_chart(g: &GroupDatum, p: Parabolic) -> Result<Chart, ChartError> {
    levi_center_chart_with(g, p, &identity_order(g), None)
}

/// As [`levi_center_chart`], with a generator order and an optional left twist of the representative.
pub fn levi_center_chart_with(
    g: &GroupDatum,
    p: Parabolic,
    order: &[usize],
    twist: Option<&PolyMatrix>,
) -> Result<Chart, ChartError> {
    let (word, mut rep) = g.levi_longest_representative(p)?;
    if let Some(t) = twist {
        rep = t.mul(&rep)?;
    }
    let mut vars = Vars::new();
    let (variables, u) = root_product(g, &mut vars, order)?;
    Ok(Chart {
        kind: ChartKind::LeviCenter,
        family: g.family,
        center: Some(word),
        vars,
        variables,
        matrix: rep.mul(&u)?,
    })
}

/// Generic lower unitriangular `n × n` matrix; entries named `a, b, c, …` row by row
/// (`x{i}_{j}` when there are more than 26).
pub fn entry_chart(n: usize) -> Chart {
    let count = n * (n - 1) / 2;
    let names = letter_names(count)
        .unwrap_or_else(|| (2..=n).flat_map(|i| (1..i).map(move |j| format!("x{i}_{j}"))).collect());
    let mut vars = Vars::new();
    let variables: Vec<VarId> = names.iter().map(|s| vars.intern(s)).collect();
    let mut k = 0;
    let mut matrix = PolyMatrix::identity(ZZ, n);
    for i in 1..n {
        for j in 0..i {
            matrix.set(i, j, Polynomial::var(ZZ, variables[k]));
            k += 1;
        }
    }
    Chart {
        kind: ChartKind::Entry,
        family: Family::A,
        center: None,
        vars,
        variables,
        matrix,
    }
}

/// The block picture through `w₀^P` for `SL_n/P_r`: both diagonal blocks are
/// anti-identities with free entries strictly below the anti-diagonal, the
/// bottom-left block is free and the top-right block vanishes.
pub fn sl_explicit_chart(n: usize, r: usize) -> Result<Chart, ChartError> {
    if n < 2 || r == 0 || r >= n {
        return Err(ChartError::BadInput(format!("need 1 <= r <= n-1, got n = {n}, r = {r}")));
    }
    let mut vars = Vars::new();
    let mut variables = Vec::new();
    let mut matrix = PolyMatrix::zeros(ZZ, n, n);
    let m = n - r;
    for i in 1..=n {
        for j in 1..=n {
            // 0 = zero, 1 = one, 2 = free
            let cell = match (i <= r, j <= r) {
                (true, true) => (i + j).cmp(&(r + 1)) as i8 + 1,
                (true, false) => 0,
                (false, true) => 2,
                (false, false) => (i - r + j - r).cmp(&(m + 1)) as i8 + 1,
            };
            match cell {
                1 => matrix.set(i - 1, j - 1, Polynomial::one(ZZ)),
                2 => {
                    let v = vars.intern(&format!("s{}", variables.len() + 1));
                    variables.push(v);
                    matrix.set(i - 1, j - 1, Polynomial::var(ZZ, v));
                }
                _ => {}
            }
        }
    }
    Ok(Chart {
        kind: ChartKind::SlExplicit,
        family: Family::A,
        center: None,
        vars,
        variables,
        matrix,
    })
}

/// `rep(w₀^P) · L` with `L` a generic lower unitriangular matrix of size `N`: the
/// corresponding chart of `SL_N/B`, which contains the chart of `G/B`.
pub fn ambient_sl_chart(g: &GroupDatum, p: Parabolic) -> Result<Chart, ChartError> {
    let (word, rep) = g.levi_longest_representative(p)?;
    let size = g.size;
    let mut vars = Vars::new();
    let mut variables = Vec::new();
    let mut l = PolyMatrix::identity(ZZ, size);
    for i in 1..size {
        for j in 0..i {
            let v = vars.intern(&format!("y{}_{}", i + 1, j + 1));
            variables.push(v);
            l.set(i, j, Polynomial::var(ZZ, v));
        }
    }
    Ok(Chart {
        kind: ChartKind::AmbientSl,
        family: g.family,
        center: Some(word),
        vars,
        variables,
        matrix: rep.mul(&l)?,
    })
}

/// Checks the chart lies in the group identically in its coordinates.
pub fn verify_membership(g: &GroupDatum, chart: &Chart) -> Result<(), ChartError> {
    if g.is_member(&chart.matrix)? {
        Ok(())
    } else {
        Err(ChartError::Membership(format!("{:?} chart of {}{}", chart.kind, g.family, g.n)))
    }
}

/// `count` seeded random permutations of the generator indices.
pub fn shuffled_orders(g: &GroupDatum, count: usize, seed: u64) -> Vec<Vec<usize>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let mut o = identity_order(g);
            o.shuffle(&mut rng);
            o
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SpecKind {
    SpAntidiag,
    SoEvenPaired,
    SoOddSkew,
}

impl SpecKind {
    pub fn for_group(g: &GroupDatum) -> Option<SpecKind> {
        match g.family {
            Family::A => None,
            Family::C => Some(SpecKind::SpAntidiag),
            Family::D if g.n.is_multiple_of(2) => Some(SpecKind::SoEvenPaired),
            Family::D => Some(SpecKind::SoOddSkew),
        }
    }

    /// Parameter count of the family as described in the construction.
    pub fn stated_params(self, n: usize) -> usize {
        match self {
            SpecKind::SpAntidiag => n,
            SpecKind::SoEvenPaired => n / 2,
            SpecKind::SoOddSkew => n * (n - 1) / 2,
        }
    }
}

/// How the parameters were placed in the bottom-left `n × n` block.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SignAssignment {
    /// `computed` (product of simple reflection representatives) or `permutation`.
    pub base: String,
    /// `anti-diagonal`, `diagonal`, `skew-block` or `skew-patch`.
    pub placement: String,
    /// `independent` or `paired` (position `i` shares a parameter with `n+1-i`).
    pub pairing: String,
    /// Sign of each placed entry, by position along the chosen line.
    pub signs: Vec<i8>,
}

#[derive(Clone, Debug)]
pub struct SpecializationFamily {
    pub kind: SpecKind,
    pub vars: Vars,
    pub params: Vec<VarId>,
    pub matrix: PolyMatrix,
    pub assignment: SignAssignment,
    pub stated_params: usize,
    /// Whether the first candidate tried (the unmodified placement) passed.
    pub literal_holds: bool,
    /// Candidates examined before this one was accepted.
    pub tried: usize,
}

impl SpecializationFamily {
    pub fn param_count(&self) -> usize {
        self.params.len()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "kind": self.kind,
            "params": self.params.iter().map(|&v| self.vars.name(v)).collect::<Vec<_>>(),
            "param_count": self.params.len(),
            "stated_params": self.stated_params,
            "assignment": self.assignment,
            "literal_holds": self.literal_holds,
            "candidates_tried": self.tried,
            "matrix": self.matrix.to_text_rows(&self.vars),
        })
    }
}

struct Candidate {
    assignment: SignAssignment,
    vars: Vars,
    params: Vec<VarId>,
    matrix: PolyMatrix,
}

fn line_position(n: usize, placement: &str, i: usize) -> (usize, usize) {
    // 0-based (row, col) in the full matrix of the i-th (0-based) entry of the line.
    match placement {
        "anti-diagonal" => (n + i, n - 1 - i),
        _ => (n + i, i),
    }
}

fn line_candidate(n: usize, base: (&str, &PolyMatrix), placement: &str, paired: bool, signs: &[i8]) -> Candidate {
    let mut vars = Vars::new();
    let mut params = Vec::new();
    let mut slot = vec![0usize; n];
    for i in 0..n {
        let owner = if paired { i.min(n - 1 - i) } else { i };
        if owner == i {
            slot[i] = params.len();
            params.push(vars.intern(&format!("x{}", params.len() + 1)));
        } else {
            slot[i] = slot[owner];
        }
    }
    let mut m = base.1.clone();
    for i in 0..n {
        let (r, c) = line_position(n, placement, i);
        let entry = Polynomial::var(ZZ, params[slot[i]]).scale(&BigRational::from_integer(signs[i].into())).unwrap();
        m.set(r, c, m.get(r, c) + &entry);
    }
    Candidate {
        assignment: SignAssignment {
            base: base.0.to_string(),
            placement: placement.to_string(),
            pairing: if paired { "paired" } else { "independent" }.to_string(),
            signs: signs.to_vec(),
        },
        vars,
        params,
        matrix: m,
    }
}

fn skew_candidate(n: usize, base: (&str, &PolyMatrix), through_patch: bool) -> Result<Candidate, MatrixError> {
    let mut vars = Vars::new();
    let mut params = Vec::new();
    let mut b = PolyMatrix::zeros(ZZ, n, n);
    for i in 1..n {
        for j in 0..i {
            let v = vars.intern(&format!("b{}_{}", i + 1, j + 1));
            params.push(v);
            b.set(i, j, Polynomial::var(ZZ, v));
            b.set(j, i, Polynomial::var(ZZ, v).neg());
        }
    }
    let size = 2 * n;
    let matrix = if through_patch {
        // (I + [[0,0],[ĴB,0]]) · base, which lies in the group whenever base does.
        let jhat = PolyMatrix::anti_identity(ZZ, n);
        let x = jhat.mul(&b)?;
        let mut left = PolyMatrix::identity(ZZ, size);
        for i in 0..n {
            for j in 0..n {
                left.set(n + i, j, x.get(i, j).clone());
            }
        }
        left.mul(base.1)?
    } else {
        let mut m = base.1.clone();
        for i in 0..n {
            for j in 0..n {
                m.set(n + i, j, m.get(n + i, j) + b.get(i, j));
            }
        }
        m
    };
    Ok(Candidate {
        assignment: SignAssignment {
            base: base.0.to_string(),
            placement: if through_patch { "skew-patch" } else { "skew-block" }.to_string(),
            pairing: "independent".to_string(),
            signs: Vec::new(),
        },
        vars,
        params,
        matrix,
    })
}

/// Plain permutation matrix of `w₀^P` (no signs), if it lies in the group.
fn plain_permutation(g: &GroupDatum, word: &WeylWord) -> Result<Option<PolyMatrix>, ChartError> {
    let target: Vec<usize> = g.basis_permutation(&word.perm).iter().map(|t| t + 1).collect();
    let m = PolyMatrix::permutation_matrix(ZZ, &target);
    Ok(g.is_member(&m)?.then_some(m))
}

fn sign_vectors(n: usize, paired: bool, negate_partners_first: bool) -> Vec<Vec<i8>> {
    if !paired {
        return vec![vec![1; n]];
    }
    let partners: Vec<usize> = (0..n).filter(|&i| n - 1 - i < i).collect();
    let mut out = Vec::new();
    for mask in 0u32..(1 << partners.len()) {
        let mut s = vec![1i8; n];
        for (b, &i) in partners.iter().enumerate() {
            let neg = (mask >> b) & 1 == 1;
            s[i] = if neg != negate_partners_first { -1 } else { 1 };
        }
        out.push(s);
    }
    out
}

/// Searches the finite space of bases, placements, pairings and signs for a
/// family inside the group on which every σ₋ factor is a nonzero polynomial.
///
/// The unmodified placement is tried first. A family with the stated parameter
/// count is preferred; otherwise the valid family with the most parameters is
/// returned and `param_count() != stated_params` records the gap.
pub fn specialization_family(g: &GroupDatum, kind: SpecKind) -> Result<SpecializationFamily, ChartError> {
    if SpecKind::for_group(g) != Some(kind) {
        return Err(ChartError::BadInput(format!("{kind:?} does not apply to {}{}", g.family, g.n)));
    }
    let n = g.n;
    let p = g.target_parabolic(None)?;
    let (word, rep) = g.levi_longest_representative(p)?;
    // The picture shows plain 1s at the center, so the unsigned permutation goes first.
    let mut bases: Vec<(&str, PolyMatrix)> = Vec::new();
    if let Some(perm) = plain_permutation(g, &word)? {
        if perm != rep {
            bases.push(("permutation", perm));
        }
    }
    bases.push(("computed", rep));
    let minus = sections::sigma_specs(g).1;

    let mut candidates = Vec::new();
    match kind {
        SpecKind::SoOddSkew => {
            for through_patch in [false, true] {
                for (name, m) in &bases {
                    candidates.push(skew_candidate(n, (name, m), through_patch)?);
                }
            }
        }
        _ => {
            let negated = kind == SpecKind::SoEvenPaired;
            let pairings: [bool; 2] = if negated { [true, false] } else { [false, true] };
            for placement in ["anti-diagonal", "diagonal"] {
                for &paired in &pairings {
                    for (name, m) in &bases {
                        for s in sign_vectors(n, paired, negated) {
                            candidates.push(line_candidate(n, (name, m), placement, paired, &s));
                        }
                    }
                }
            }
        }
    }

    let stated = kind.stated_params(n);
    let mut best: Option<(usize, Candidate)> = None;
    let mut literal_holds = false;
    for (idx, c) in candidates.into_iter().enumerate() {
        if !g.is_member(&c.matrix)? || !minors_nonzero(&c.matrix, &minus)? {
            continue;
        }
        if idx == 0 {
            literal_holds = true;
        }
        let better = match &best {
            None => true,
            Some((_, b)) => {
                let (bc, cc) = (b.params.len(), c.params.len());
                bc != stated && (cc == stated || cc > bc)
            }
        };
        if better {
            let done = c.params.len() == stated;
            best = Some((idx + 1, c));
            if done {
                break;
            }
        }
    }
    let (tried, c) = best.ok_or_else(|| {
        ChartError::NoSpecialization(format!("{kind:?} for {}{}: no candidate is in the group with nonzero σ₋ factors", g.family, n))
    })?;
    Ok(SpecializationFamily {
        kind,
        vars: c.vars,
        params: c.params,
        matrix: c.matrix,
        assignment: c.assignment,
        stated_params: stated,
        literal_holds,
        tried,
    })
}

fn minors_nonzero(m: &PolyMatrix, specs: &[MinorSpec]) -> Result<bool, MatrixError> {
    for s in specs {
        if m.column_minor(s)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Evaluates the family at `samples` seeded random rational points and checks
/// membership of each resulting constant matrix.
pub fn sampled_membership(g: &GroupDatum, fam: &SpecializationFamily, samples: usize, seed: u64) -> Result<bool, ChartError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..samples {
        let point: BTreeMap<VarId, Polynomial> = fam
            .params
            .iter()
            .map(|&v| {
                let num: i64 = rng.gen_range(-9..=9);
                let den: i64 = rng.gen_range(1..=5);
                let c = BigRational::new(BigInt::from(num), BigInt::from(den));
                (v, Polynomial::from_rational(CoefficientRing::Rationals, c).unwrap())
            })
            .collect();
        let m = fam.matrix.map(|e| e.to_ring(CoefficientRing::Rationals).unwrap()).substitute(&point);
        if !g.is_member(&m)? {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(f: Family, n: usize) -> GroupDatum {
        GroupDatum::build(f, n).unwrap()
    }

    #[test]
    fn big_cell_small_cases() {
        let a2 = g(Family::A, 2);
        let c = big_cell_chart(&a2).unwrap();
        let t = Polynomial::var(ZZ, c.variables[0]);
        let expect = PolyMatrix::from_rows(vec![
            vec![Polynomial::one(ZZ), Polynomial::zero(ZZ)],
            vec![t, Polynomial::one(ZZ)],
        ])
        .unwrap();
        assert_eq!(c.matrix, expect);

        let c2 = g(Family::C, 2);
        let chart = big_cell_chart(&c2).unwrap();
        assert_eq!(chart.dimension(), 4);
        verify_membership(&c2, &chart).unwrap();
        for i in 0..4 {
            assert!(chart.matrix.get(i, i).is_one());
            for j in (i + 1)..4 {
                assert!(chart.matrix.get(i, j).is_zero());
            }
        }
    }

    #[test]
    fn levi_center_charts() {
        let a5 = g(Family::A, 5);
        let p = a5.target_parabolic(Some(2)).unwrap();
        let chart = levi_center_chart(&a5, p).unwrap();
        assert_eq!(chart.dimension(), 10);
        let c0 = chart.center_matrix();
        assert!(c0.is_signed_permutation());
        // The center sends e_j to ±e_{w(j)} with w = (2,1,5,4,3).
        for (j, &t) in [2usize, 1, 5, 4, 3].iter().enumerate() {
            assert!(!c0.get(t - 1, j).is_zero());
        }
        verify_membership(&a5, &chart).unwrap();

        let d3 = g(Family::D, 3);
        let chart = levi_center_chart(&d3, d3.target_parabolic(None).unwrap()).unwrap();
        verify_membership(&d3, &chart).unwrap();
        assert!(d3.is_member(&chart.center_matrix()).unwrap());
    }

    #[test]
    fn explicit_chart_shapes() {
        let c = sl_explicit_chart(2, 1).unwrap();
        assert_eq!(c.dimension(), 1);
        assert!(c.matrix.get(0, 0).is_one());
        assert!(c.matrix.get(1, 1).is_one());
        assert!(c.matrix.get(0, 1).is_zero());

        let c = sl_explicit_chart(5, 2).unwrap();
        assert_eq!(c.dimension(), 10);
        let det = c.matrix.determinant().unwrap();
        assert!(det.constant_value().is_some());
        let at0 = c.center_matrix();
        assert!(at0.column_minor(&MinorSpec::new(vec![5, 4])).unwrap().is_zero());
        assert!(sl_explicit_chart(4, 4).is_err());
    }

    #[test]
    fn entry_chart_matches_column_ordered_product() {
        let a4 = g(Family::A, 4);
        let e = entry_chart(4);
        // Order generators by column, then row, of their single nonzero entry.
        let mut keyed: Vec<(usize, usize, usize)> = a4
            .negative_generators
            .iter()
            .enumerate()
            .map(|(k, (_, x))| {
                let (i, j) = (0..4)
                    .flat_map(|i| (0..4).map(move |j| (i, j)))
                    .find(|&(i, j)| !x.get(i, j).is_zero())
                    .unwrap();
                (j, i, k)
            })
            .collect();
        keyed.sort();
        let order: Vec<usize> = keyed.iter().map(|x| x.2).collect();
        let chart = big_cell_chart_ordered(&a4, &order).unwrap();
        // Each entry is ±(its own coordinate); compare supports.
        for i in 0..4 {
            for j in 0..4 {
                let a = chart.matrix.get(i, j);
                let b = e.matrix.get(i, j);
                assert_eq!(a.num_terms(), b.num_terms());
                assert_eq!(a.total_degree(), b.total_degree());
            }
        }
    }

    #[test]
    fn bad_orders_rejected() {
        let a3 = g(Family::A, 3);
        assert!(big_cell_chart_ordered(&a3, &[0, 1]).is_err());
        assert!(big_cell_chart_ordered(&a3, &[0, 1, 1]).is_err());
    }

    #[test]
    fn specializations() {
        let so4 = g(Family::D, 2);
        let fam = specialization_family(&so4, SpecKind::SoEvenPaired).unwrap();
        assert_eq!(fam.param_count(), 1);
        assert!(so4.is_member(&fam.matrix).unwrap());

        let so6 = g(Family::D, 3);
        let fam = specialization_family(&so6, SpecKind::SoOddSkew).unwrap();
        assert_eq!(fam.param_count(), 3);
        assert!(sampled_membership(&so6, &fam, 3, 7).unwrap());

        let sp4 = g(Family::C, 2);
        let fam = specialization_family(&sp4, SpecKind::SpAntidiag).unwrap();
        assert!(sp4.is_member(&fam.matrix).unwrap());
        assert!(specialization_family(&sp4, SpecKind::SoOddSkew).is_err());
    }
}
