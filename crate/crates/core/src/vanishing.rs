//! Orders of vanishing of σ₋ at `w₀^P B` and the maximal-multiplicity verdict.

use serde::Serialize;
use serde_json::Value;
use thiserror::Error;

use crate::charts::{self, Chart, ChartError, SpecKind};
use crate::exactpoly::Order;
use crate::polymatrix::{MatrixError, PolyMatrix};
use crate::rootdata::{Family, GroupDatum, Parabolic, RootDataError};
use crate::sections::{self, SectionError, SectionProduct};

#[derive(Debug, Error)]
pub enum VanishingError {
    #[error(transparent)]
    Chart(#[from] ChartError),
    #[error(transparent)]
    Section(#[from] SectionError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    RootData(#[from] RootDataError),
    #[error("factor {factor} vanishes identically on the {chart} chart")]
    IdenticallyZero { factor: String, chart: String },
    #[error("prime {0} is not an odd prime")]
    BadPrime(u64),
}

/// Order of each factor of `s` at the origin of `chart`.
pub fn order_at_center(s: &SectionProduct, chart: &Chart) -> Result<Vec<u32>, VanishingError> {
    let fs = s.evaluate_factors(&chart.matrix)?;
    fs.iter()
        .zip(&s.factors)
        .map(|(f, spec)| match f.order_at_origin() {
            Order::Finite(k) => Ok(k),
            Order::Infinite => Err(VanishingError::IdenticallyZero {
                factor: spec.to_string(),
                chart: format!("{:?}", chart.kind),
            }),
        })
        .collect()
}

/// Closed-form order of `det(n,…,n-k+1 | 1,…,k)` along `P_r/B` in `SL_n/B`.
pub fn sl_table_entry(n: usize, r: usize, k: usize) -> usize {
    match (k <= r, k + r <= n) {
        (true, true) => k,
        (false, true) => r,
        (false, false) => n - k,
        (true, false) => n - r,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SlTableReport {
    pub n: usize,
    pub r: usize,
    pub expected: Vec<usize>,
    pub intrinsic: Vec<u32>,
    pub explicit: Vec<u32>,
    pub total: u32,
    pub expected_total: usize,
    pub mismatches: Vec<(usize, u32, usize)>,
    pub pass: bool,
}

/// Computes the σ₋ factor orders for `SL_n/P_r` on the root chart and on the
/// block picture, and compares both with the closed-form table.
pub fn sl_order_table_check(n: usize, r: usize) -> Result<SlTableReport, VanishingError> {
    let g = GroupDatum::build(Family::A, n)?;
    let p = g.target_parabolic(Some(r))?;
    let (_, sm) = sections::build_sigma_pair(&g)?;
    let intrinsic = order_at_center(&sm, &charts::levi_center_chart(&g, p)?)?;
    let explicit = order_at_center(&sm, &charts::sl_explicit_chart(n, r)?)?;
    let expected: Vec<usize> = (1..n).map(|k| sl_table_entry(n, r, k)).collect();
    let mut mismatches = Vec::new();
    for (k, &e) in expected.iter().enumerate() {
        for got in [intrinsic[k], explicit[k]] {
            if got as usize != e {
                mismatches.push((k + 1, got, e));
            }
        }
    }
    let total: u32 = intrinsic.iter().sum();
    let expected_total = r * (n - r);
    let pass = mismatches.is_empty() && total as usize == expected_total && intrinsic == explicit;
    Ok(SlTableReport {
        n,
        r,
        expected,
        intrinsic,
        explicit,
        total,
        expected_total,
        mismatches,
        pass,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ScaledCheck {
    pub p: u64,
    /// `(p-1) · ord σ₋`.
    pub order_times: u64,
    /// `c (p-1)` with `c = dim G/P`.
    pub bound: u64,
    pub equal: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct OrderReport {
    pub family: Family,
    pub n: usize,
    pub parabolic: Parabolic,
    pub rows: Vec<Vec<usize>>,
    pub factors: Vec<u32>,
    pub total: u32,
    pub expected: usize,
    /// Value of σ₊ at the identity.
    pub sigma_plus_at_identity: String,
    pub sigma_plus_nonvanishing: bool,
    /// Orders on the block picture (`SL_n` only).
    pub explicit: Option<Vec<u32>>,
    /// Orders on the ambient `SL_N` chart (`Sp`, `SO`).
    pub lower_bound: Option<Vec<u32>>,
    /// Orders on the specialization family (`Sp`, `SO`).
    pub upper_bound: Option<Vec<u32>>,
    pub specialization: Option<Value>,
    pub bounds_consistent: bool,
    pub scaled: Vec<ScaledCheck>,
    pub maximal_multiplicity: bool,
}

pub fn is_odd_prime(p: u64) -> bool {
    p >= 3 && p % 2 == 1 && (3..).step_by(2).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

/// Orders of σ₋ at `w₀^P`, σ₊ at `e`, the bound cross-checks and the verdict.
pub fn max_multiplicity_verdict(g: &GroupDatum, p: Parabolic, primes: &[u64]) -> Result<OrderReport, VanishingError> {
    if let Some(&bad) = primes.iter().find(|&&q| !is_odd_prime(q)) {
        return Err(VanishingError::BadPrime(bad));
    }
    let (sp, sm) = sections::build_sigma_pair(g)?;
    let factors = order_at_center(&sm, &charts::levi_center_chart(g, p)?)?;
    let total: u32 = factors.iter().sum();
    let expected = g.dim_g_mod_p(p);

    let big = charts::big_cell_chart(g)?;
    let at_e = sp.evaluate(&big.center_matrix())?;
    let value = at_e.constant_value().unwrap_or_default();
    let sigma_plus_nonvanishing = !at_e.is_zero();

    let (mut explicit, mut lower, mut upper, mut specialization) = (None, None, None, None);
    let bounds_consistent = match g.family {
        Family::A => {
            let e = order_at_center(&sm, &charts::sl_explicit_chart(g.n, p.excluded)?)?;
            let ok = e == factors;
            explicit = Some(e);
            ok
        }
        _ => {
            let lo = order_at_center(&sm, &charts::ambient_sl_chart(g, p)?)?;
            let kind = SpecKind::for_group(g).expect("Sp and SO have a specialization");
            let fam = charts::specialization_family(g, kind)?;
            let hi = spec_orders(&sm, &fam.matrix)?;
            let ok = lo == factors && hi == factors;
            lower = Some(lo);
            upper = Some(hi);
            specialization = Some(fam.to_json());
            ok
        }
    };

    let scaled: Vec<ScaledCheck> = primes
        .iter()
        .map(|&q| {
            let order_times = (q - 1) * total as u64;
            let bound = (q - 1) * expected as u64;
            ScaledCheck {
                p: q,
                order_times,
                bound,
                equal: order_times == bound,
            }
        })
        .collect();
    let maximal_multiplicity = total as usize == expected && sigma_plus_nonvanishing && bounds_consistent;
    Ok(OrderReport {
        family: g.family,
        n: g.n,
        parabolic: p,
        rows: sm.row_lists(),
        factors,
        total,
        expected,
        sigma_plus_at_identity: value.to_string(),
        sigma_plus_nonvanishing,
        explicit,
        lower_bound: lower,
        upper_bound: upper,
        specialization,
        bounds_consistent,
        scaled,
        maximal_multiplicity,
    })
}

fn spec_orders(sm: &SectionProduct, m: &PolyMatrix) -> Result<Vec<u32>, VanishingError> {
    sm.evaluate_factors(m)?
        .iter()
        .zip(&sm.factors)
        .map(|(f, spec)| {
            f.order_at_origin().finite().ok_or_else(|| VanishingError::IdenticallyZero {
                factor: spec.to_string(),
                chart: "specialization".into(),
            })
        })
        .collect()
}

/// Orders on the levi-center chart for several generator orders and for the
/// representative twisted by diagonal `±1` elements of the group.
#[derive(Clone, Debug, Serialize)]
pub struct InvarianceReport {
    pub reference: Vec<u32>,
    pub reordered: Vec<Vec<u32>>,
    pub twisted: Vec<Vec<u32>>,
    pub pass: bool,
}

pub fn order_invariance(g: &GroupDatum, p: Parabolic, orders: usize, twists: usize, seed: u64) -> Result<InvarianceReport, VanishingError> {
    let (_, sm) = sections::build_sigma_pair(g)?;
    let reference = order_at_center(&sm, &charts::levi_center_chart(g, p)?)?;
    let mut reordered = Vec::new();
    for o in charts::shuffled_orders(g, orders, seed) {
        reordered.push(order_at_center(&sm, &charts::levi_center_chart_with(g, p, &o, None)?)?);
    }
    let mut twisted = Vec::new();
    for t in g.sign_torus_elements().iter().skip(1).take(twists) {
        let base: Vec<usize> = (0..g.negative_generators.len()).collect();
        twisted.push(order_at_center(&sm, &charts::levi_center_chart_with(g, p, &base, Some(t))?)?);
    }
    let pass = reordered.iter().chain(&twisted).all(|o| *o == reference);
    Ok(InvarianceReport {
        reference,
        reordered,
        twisted,
        pass,
    })
}
