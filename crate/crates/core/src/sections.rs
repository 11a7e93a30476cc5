//! The sections σ₊ and σ₋ as products of column-initial minors.

use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::exactpoly::{CoefficientRing, Monomial, Polynomial, VarId, Vars};
use crate::polymatrix::{MatrixError, MinorSpec, PolyMatrix};
use crate::rootdata::{Family, GroupDatum, Weight};

const ZZ: CoefficientRing = CoefficientRing::Integers;

#[derive(Debug, Error)]
pub enum SectionError {
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error("equivariance identity ({check}) fails for {factor}")]
    Identity { check: &'static str, factor: String },
    #[error("section weight {got} differs from expected {expected}")]
    Weight { got: String, expected: String },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Label {
    SigmaPlus,
    SigmaMinus,
}

#[derive(Clone, Debug)]
pub struct SectionProduct {
    pub label: Label,
    pub family: Family,
    pub factors: Vec<MinorSpec>,
    /// Torus weight `-(χ_{a_1} + … + χ_{a_k})` of each factor, folded.
    pub weights: Vec<Weight>,
}

/// Row lists of σ₊ and σ₋: `(1), (1,2), …` and `(N), (N,N-1), …` with
/// `n-1` factors for `SL_n` and `SO_2n`, `n` factors for `Sp_2n`.
pub fn sigma_specs(g: &GroupDatum) -> (Vec<MinorSpec>, Vec<MinorSpec>) {
    let count = match g.family {
        Family::A | Family::D => g.n - 1,
        Family::C => g.n,
    };
    let size = g.size;
    let plus = (1..=count).map(|k| MinorSpec::new((1..=k).collect())).collect();
    let minus = (1..=count)
        .map(|k| MinorSpec::new((size - k + 1..=size).rev().collect()))
        .collect();
    (plus, minus)
}

fn factor_weight(g: &GroupDatum, spec: &MinorSpec) -> Weight {
    g.weight_fold_and_sum(&spec.rows().iter().map(|&a| (-1, a)).collect::<Vec<_>>())
}

/// Builds `(σ₊, σ₋)` and checks their weights are `-ρ` and `ρ`.
pub fn build_sigma_pair(g: &GroupDatum) -> Result<(SectionProduct, SectionProduct), SectionError> {
    let (plus, minus) = sigma_specs(g);
    let make = |label, factors: Vec<MinorSpec>| SectionProduct {
        label,
        family: g.family,
        weights: factors.iter().map(|s| factor_weight(g, s)).collect(),
        factors,
    };
    let sp = make(Label::SigmaPlus, plus);
    let sm = make(Label::SigmaMinus, minus);
    for (s, expected) in [(&sp, g.rho.neg()), (&sm, g.rho.clone())] {
        let got = s.weight(g);
        if got != expected {
            return Err(SectionError::Weight {
                got: got.to_string(),
                expected: expected.to_string(),
            });
        }
    }
    Ok((sp, sm))
}

impl SectionProduct {
    pub fn weight(&self, g: &GroupDatum) -> Weight {
        self.weights
            .iter()
            .fold(Weight::zero(g.family, g.n), |acc, w| acc.add(w))
    }

    pub fn row_lists(&self) -> Vec<Vec<usize>> {
        self.factors.iter().map(|f| f.rows().to_vec()).collect()
    }

    /// How many factors use each row (1-based rows, returned 0-based by position).
    pub fn row_multiplicities(&self, size: usize) -> Vec<u32> {
        let mut c = vec![0u32; size];
        for f in &self.factors {
            for &a in f.rows() {
                c[a - 1] += 1;
            }
        }
        c
    }

    /// The factor polynomials on `m`, computed from one nested expansion
    /// when the factors are the leading minors of the last one.
    pub fn evaluate_factors(&self, m: &PolyMatrix) -> Result<Vec<Polynomial>, MatrixError> {
        let Some(last) = self.factors.last() else {
            return Ok(Vec::new());
        };
        let nested = self
            .factors
            .iter()
            .enumerate()
            .all(|(i, f)| f.size() == i + 1 && *f == last.prefix(i + 1));
        if nested {
            m.nested_column_minors(last)
        } else {
            self.factors.iter().map(|f| m.column_minor(f)).collect()
        }
    }

    /// The full product on `m`.
    pub fn evaluate(&self, m: &PolyMatrix) -> Result<Polynomial, MatrixError> {
        Ok(product(m.ring(), &self.evaluate_factors(m)?))
    }

    pub fn to_json(&self, g: &GroupDatum) -> Value {
        json!({
            "label": self.label,
            "rows": self.row_lists(),
            "weights": self.weights.iter().map(|w| w.doubled().to_vec()).collect::<Vec<_>>(),
            "total_weight": self.weight(g).doubled(),
        })
    }
}

pub fn product(ring: CoefficientRing, fs: &[Polynomial]) -> Polynomial {
    fs.iter().fold(Polynomial::one(ring), |acc, f| &acc * f)
}

/// Outcome of the four families of equivariance identities.
#[derive(Clone, Debug, Serialize)]
pub struct EquivarianceReport {
    pub diagonal_scaling: bool,
    pub column_stability: bool,
    pub left_b_law: bool,
    pub left_b_minus_law: bool,
    /// Exponent of `b_aa` in σ₋(bM) = (∏ b_aa^{c_a}) σ₋(M).
    pub sigma_minus_exponents: Vec<u32>,
    /// Same for σ₊ under lower triangular `b`.
    pub sigma_plus_exponents: Vec<u32>,
    /// Doubled coordinates of the folded weight `-Σ c_a χ_a` of σ₋, which must equal ρ.
    pub sigma_minus_weight: Vec<i64>,
    pub rho: Vec<i64>,
    /// Whether the left law also holds with the χ-coordinates of ρ as exponents.
    pub rho_coordinates_as_exponents: bool,
    pub factors_checked: usize,
}

impl EquivarianceReport {
    pub fn passed(&self) -> bool {
        self.diagonal_scaling && self.column_stability && self.left_b_law && self.left_b_minus_law
    }
}

struct Generic {
    vars: Vars,
}

impl Generic {
    fn var(&mut self, name: String) -> VarId {
        self.vars.intern(&name)
    }

    fn matrix<F: FnMut(usize, usize) -> Option<String>>(&mut self, size: usize, mut f: F) -> PolyMatrix {
        let mut m = PolyMatrix::zeros(ZZ, size, size);
        for i in 0..size {
            for j in 0..size {
                if let Some(name) = f(i, j) {
                    let v = self.var(name);
                    m.set(i, j, Polynomial::var(ZZ, v));
                }
            }
        }
        m
    }
}

fn diag_monomial(diag: &[VarId], exps: &[u32]) -> Polynomial {
    Polynomial::monomial(
        ZZ,
        Monomial::from_pairs(diag.iter().zip(exps).filter(|(_, &e)| e > 0).map(|(&v, &e)| (v, e))),
        1,
    )
}

/// Verifies, with a generic matrix `M` of free entries:
/// (i) `minor(DM) = (∏ d_a) minor(M)` for diagonal `D`;
/// (ii) `minor(Mu) = minor(M)` for upper unitriangular `u`;
/// (iii) `σ₋(bM) = (∏ b_aa^{c_a}) σ₋(M)` for upper triangular `b`;
/// (iv) `σ₊(b⁻M) = (∏ b⁻_aa^{c⁺_a}) σ₊(M)` for lower triangular `b⁻`.
pub fn equivariance_suite(g: &GroupDatum) -> Result<EquivarianceReport, SectionError> {
    let (sp, sm) = build_sigma_pair(g)?;
    let size = g.size;
    let mut gen = Generic { vars: Vars::new() };
    let m = gen.matrix(size, |i, j| Some(format!("m{}_{}", i + 1, j + 1)));
    let diag: Vec<VarId> = (0..size).map(|i| gen.var(format!("d{}", i + 1))).collect();
    let dmat = PolyMatrix::diagonal(ZZ, diag.iter().map(|&v| Polynomial::var(ZZ, v)).collect());
    let mut u = gen.matrix(size, |i, j| (i < j).then(|| format!("u{}_{}", i + 1, j + 1)));
    for i in 0..size {
        u.set(i, i, Polynomial::one(ZZ));
    }
    let b = gen.matrix(size, |i, j| (i <= j).then(|| format!("b{}_{}", i + 1, j + 1)));
    let bdiag: Vec<VarId> = (0..size).map(|i| gen.vars.get(&format!("b{}_{}", i + 1, i + 1)).unwrap()).collect();
    let l = gen.matrix(size, |i, j| (i >= j).then(|| format!("l{}_{}", i + 1, j + 1)));
    let ldiag: Vec<VarId> = (0..size).map(|i| gen.vars.get(&format!("l{}_{}", i + 1, i + 1)).unwrap()).collect();

    let dm = dmat.mul(&m)?;
    let mu = m.mul(&u)?;
    let mut factors_checked = 0;
    for s in [&sp, &sm] {
        let base = s.evaluate_factors(&m)?;
        let scaled = s.evaluate_factors(&dm)?;
        let moved = s.evaluate_factors(&mu)?;
        for (k, spec) in s.factors.iter().enumerate() {
            let mut e = vec![0u32; size];
            for &a in spec.rows() {
                e[a - 1] = 1;
            }
            if scaled[k] != &diag_monomial(&diag, &e) * &base[k] {
                return Err(SectionError::Identity {
                    check: "diagonal scaling",
                    factor: spec.to_string(),
                });
            }
            if moved[k] != base[k] {
                return Err(SectionError::Identity {
                    check: "column stability",
                    factor: spec.to_string(),
                });
            }
            factors_checked += 1;
        }
    }

    let minus_m = sm.evaluate(&m)?;
    let c_minus = sm.row_multiplicities(size);
    let lhs = sm.evaluate(&b.mul(&m)?)?;
    if lhs != &diag_monomial(&bdiag, &c_minus) * &minus_m {
        return Err(SectionError::Identity {
            check: "left B-law",
            factor: "σ₋".into(),
        });
    }
    let c_plus = sp.row_multiplicities(size);
    let plus_lhs = sp.evaluate(&l.mul(&m)?)?;
    if plus_lhs != &diag_monomial(&ldiag, &c_plus) * &sp.evaluate(&m)? {
        return Err(SectionError::Identity {
            check: "left B⁻-law",
            factor: "σ₊".into(),
        });
    }

    let folded = g.weight_fold_and_sum(
        &c_minus
            .iter()
            .enumerate()
            .map(|(a, &c)| (-(c as i64), a + 1))
            .collect::<Vec<_>>(),
    );
    if folded != g.rho {
        return Err(SectionError::Weight {
            got: folded.to_string(),
            expected: g.rho.to_string(),
        });
    }
    let rho_exps: Vec<u32> = {
        let r = g.rho.normalized();
        let mut e = vec![0u32; size];
        for (i, x) in r.iter().enumerate() {
            e[i] = (*x / 2).max(0) as u32;
        }
        e
    };
    let rho_coordinates_as_exponents = lhs == &diag_monomial(&bdiag, &rho_exps) * &minus_m;

    Ok(EquivarianceReport {
        diagonal_scaling: true,
        column_stability: true,
        left_b_law: true,
        left_b_minus_law: true,
        sigma_minus_exponents: c_minus,
        sigma_plus_exponents: c_plus,
        sigma_minus_weight: folded.normalized(),
        rho: g.rho.normalized(),
        rho_coordinates_as_exponents,
        factors_checked,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::charts;
    use num_rational::BigRational;

    fn g(f: Family, n: usize) -> GroupDatum {
        GroupDatum::build(f, n).unwrap()
    }

    #[test]
    fn row_lists() {
        let (_, sm) = build_sigma_pair(&g(Family::A, 5)).unwrap();
        assert_eq!(sm.row_lists(), vec![vec![5], vec![5, 4], vec![5, 4, 3], vec![5, 4, 3, 2]]);
        let (_, sm) = build_sigma_pair(&g(Family::C, 2)).unwrap();
        assert_eq!(sm.row_lists(), vec![vec![4], vec![4, 3]]);
        let d3 = g(Family::D, 3);
        let (_, sm) = build_sigma_pair(&d3).unwrap();
        assert_eq!(sm.row_lists(), vec![vec![6], vec![6, 5]]);
        assert_eq!(sm.weights[1], d3.fundamental_weights[1].add(&d3.fundamental_weights[2]));
    }

    #[test]
    fn sigma_plus_is_one_on_big_cell() {
        for (f, n) in [(Family::A, 4), (Family::C, 2), (Family::D, 3)] {
            let gd = g(f, n);
            let (sp, _) = build_sigma_pair(&gd).unwrap();
            let chart = charts::big_cell_chart(&gd).unwrap();
            assert!(sp.evaluate(&chart.matrix).unwrap().is_one());
        }
    }

    #[test]
    fn sigma_minus_on_identity_vanishes() {
        let gd = g(Family::A, 4);
        let (_, sm) = build_sigma_pair(&gd).unwrap();
        assert!(sm.evaluate(&PolyMatrix::identity(ZZ, 4)).unwrap().is_zero());
    }

    #[test]
    fn sl5_big_cell_factors() {
        let chart = charts::entry_chart(5);
        let (_, sm) = build_sigma_pair(&g(Family::A, 5)).unwrap();
        let mut v = chart.vars.clone();
        let expect = [
            "g",
            "d*h - g*e",
            "b*e*i - b*f*h - c*d*i + c*f*g + d*h - e*g",
        ];
        let fs = sm.evaluate_factors(&chart.matrix).unwrap();
        for (k, e) in expect.iter().enumerate() {
            let p = Polynomial::parse(e, ZZ, &mut v).unwrap();
            // Rows are listed bottom-up, so factor k carries the sign of reversing k+1 rows.
            let sign = if k.div_ceil(2) % 2 == 0 { 1 } else { -1 };
            assert_eq!(fs[k], p.scale(&BigRational::from_integer(sign.into())).unwrap(), "factor {}", k + 1);
        }
        let f = sm.evaluate(&chart.matrix).unwrap();
        assert_eq!(f.total_degree(), Some(10));
        for (k, fk) in fs.iter().enumerate() {
            assert_eq!(fk.total_degree(), Some(k as u32 + 1));
        }
    }

    #[test]
    fn equivariance_small() {
        let r = equivariance_suite(&g(Family::A, 3)).unwrap();
        assert!(r.passed());
        assert_eq!(r.sigma_minus_exponents, vec![0, 1, 2]);
        let r = equivariance_suite(&g(Family::C, 2)).unwrap();
        assert!(r.passed());
        assert_eq!(r.sigma_minus_exponents, vec![0, 0, 1, 2]);
    }
}
