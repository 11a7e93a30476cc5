//! Batch runs: configuration, the canonical check sequence and reports.

use std::fmt::Write as _;
use std::str::FromStr;
use std::time::Instant;

use num_traits::{One, Signed};
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::charts::{self, SpecKind};
use crate::exactpoly::{CoefficientRing, Monomial, Polynomial};
use crate::rootdata::{self, Family, GroupDatum};
use crate::sections;
use crate::splitting::{self, Guards, RncCertificate, RncOutcome};
use crate::vanishing;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// The shipped n = 5 chain in entry coordinates `a..j`.
pub const GOLDEN_SL5_CHAIN: &str = include_str!("../golden/sl5_chain.txt");

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("{0}")]
    Invalid(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Check {
    Weights,
    Equivariance,
    Orders,
    Specializations,
    Skew,
    Rnc,
    Splitcoeff,
    Squarefree,
}

impl Check {
    pub const ALL: [Check; 8] = [
        Check::Weights,
        Check::Equivariance,
        Check::Orders,
        Check::Specializations,
        Check::Skew,
        Check::Rnc,
        Check::Splitcoeff,
        Check::Squarefree,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Check::Weights => "weights",
            Check::Equivariance => "equivariance",
            Check::Orders => "orders",
            Check::Specializations => "specializations",
            Check::Skew => "skew",
            Check::Rnc => "rnc",
            Check::Splitcoeff => "splitcoeff",
            Check::Squarefree => "squarefree",
        }
    }

    /// Checks that apply to the group: specializations need `Sp` or `SO`,
    /// the skew claim needs `SO_2n` with `n` odd.
    pub fn applies(self, family: Family, n: usize) -> bool {
        match self {
            Check::Specializations => family != Family::A,
            Check::Skew => family == Family::D && n % 2 == 1,
            _ => true,
        }
    }

    /// Default selection. RNC certificates are only claimed for `SL_n`.
    pub fn defaults(family: Family, n: usize) -> Vec<Check> {
        Check::ALL
            .into_iter()
            .filter(|c| c.applies(family, n) && (*c != Check::Rnc || family == Family::A))
            .collect()
    }
}

impl FromStr for Check {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Check::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| format!("unknown check '{s}'"))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Json,
    Text,
}

impl FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "json" => Ok(Format::Json),
            "text" => Ok(Format::Text),
            _ => Err(format!("unknown format '{s}' (expected json or text)")),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteConfig {
    pub family: Family,
    pub n: usize,
    pub r: Option<usize>,
    pub primes: Vec<u64>,
    pub checks: Vec<Check>,
    pub seed: u64,
    pub guards: Guards,
    pub squarefree_trials: usize,
    pub timings: bool,
}

impl SuiteConfig {
    pub fn new(family: Family, n: usize, r: Option<usize>) -> SuiteConfig {
        SuiteConfig {
            family,
            n,
            r,
            primes: vec![3],
            checks: Check::defaults(family, n),
            seed: 0,
            guards: Guards::default(),
            squarefree_trials: 20,
            timings: false,
        }
    }

    /// Checks the config and puts the check list in canonical order.
    pub fn validate(mut self) -> Result<SuiteConfig, ConfigError> {
        let bad = |m: String| Err(ConfigError::Invalid(m));
        if !(2..=12).contains(&self.n) {
            return bad(format!("n = {} is outside 2..=12", self.n));
        }
        match (self.family, self.r) {
            (Family::A, None) => return bad("--r is required for sl".into()),
            (Family::A, Some(r)) if r == 0 || r >= self.n => {
                return bad(format!("r = {r} must satisfy 1 <= r <= n-1"))
            }
            (Family::C | Family::D, Some(_)) => return bad("--r only applies to sl".into()),
            _ => {}
        }
        if let Some(p) = self.primes.iter().find(|&&p| !vanishing::is_odd_prime(p)) {
            return bad(format!("{p} is not an odd prime"));
        }
        if self.guards.max_terms == 0 || self.guards.max_seconds.is_nan() || self.guards.max_seconds <= 0.0 {
            return bad("guards must be positive".into());
        }
        if let Some(c) = self.checks.iter().find(|c| !c.applies(self.family, self.n)) {
            return bad(format!("check '{}' does not apply to {}{}", c.name(), self.family, self.n));
        }
        self.checks.sort();
        self.checks.dedup();
        Ok(self)
    }

    fn echo(&self) -> Value {
        json!({
            "family": self.family,
            "n": self.n,
            "r": self.r,
            "primes": self.primes,
            "checks": self.checks,
            "seed": self.seed,
            "guards": self.guards,
            "squarefree_trials": self.squarefree_trials,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    NotComputed,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub status: Status,
    pub payload: Value,
    pub seconds: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub version: String,
    pub config: Value,
    pub checks: Vec<CheckResult>,
}

impl VerificationReport {
    pub fn exit_code(&self) -> i32 {
        if self.checks.iter().any(|c| c.status == Status::Fail) {
            1
        } else if self.checks.iter().any(|c| c.status == Status::NotComputed) {
            3
        } else {
            0
        }
    }

    pub fn check(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("flagsplit {}\nconfig: {}\n", self.version, self.config);
        for c in &self.checks {
            let status = match c.status {
                Status::Pass => "PASS",
                Status::Fail => "FAIL",
                Status::NotComputed => "NOT COMPUTED",
            };
            let _ = write!(s, "\n[{status}] {}", c.name);
            if let Some(t) = c.seconds {
                let _ = write!(s, " ({t:.3}s)");
            }
            s.push('\n');
            if let Value::Object(map) = &c.payload {
                for (k, v) in map {
                    let _ = writeln!(s, "  {k}: {v}");
                }
            }
        }
        s
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => self.to_json(),
            Format::Text => self.to_text(),
        }
    }
}

type Outcome = (Status, Value);

fn status(ok: bool) -> Status {
    if ok {
        Status::Pass
    } else {
        Status::Fail
    }
}

fn err_outcome(e: impl std::fmt::Display) -> Outcome {
    (Status::Fail, json!({ "error": e.to_string() }))
}

fn to_value<T: Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("payload serializes")
}

/// Runs the requested checks in canonical order. Every requested check
/// produces exactly one result.
pub fn run_suite(config: &SuiteConfig) -> VerificationReport {
    let mut checks = Vec::new();
    let group = GroupDatum::build(config.family, config.n);
    for &c in &config.checks {
        let start = Instant::now();
        let (status, payload) = match &group {
            Err(e) => err_outcome(e),
            Ok(g) => run_check(c, g, config),
        };
        checks.push(CheckResult {
            name: c.name().to_string(),
            status,
            payload,
            seconds: config.timings.then(|| start.elapsed().as_secs_f64()),
        });
    }
    VerificationReport {
        version: VERSION.to_string(),
        config: config.echo(),
        checks,
    }
}

fn run_check(c: Check, g: &GroupDatum, cfg: &SuiteConfig) -> Outcome {
    match c {
        Check::Weights => weights_check(g),
        Check::Equivariance => match sections::equivariance_suite(g) {
            Ok(r) => (status(r.passed()), to_value(&r)),
            Err(e) => err_outcome(e),
        },
        Check::Orders => orders_check(g, cfg),
        Check::Specializations => specializations_check(g, cfg),
        Check::Skew => skew_check(g.n, cfg.seed),
        Check::Rnc => rnc_check(g, cfg.guards),
        Check::Splitcoeff => splitcoeff_check(g, cfg),
        Check::Squarefree => squarefree_check(g, cfg),
    }
}

fn weights_check(g: &GroupDatum) -> Outcome {
    let (sp, sm) = match sections::build_sigma_pair(g) {
        Ok(pair) => pair,
        Err(e) => return err_outcome(e),
    };
    let simple_ok = g.simple_roots == rootdata::tabulated_simple_roots(g.family, g.n);
    let fund_ok = g.fundamental_weights == rootdata::tabulated_fundamental_weights(g.family, g.n);
    let rho_sum = g.fundamental_weights.iter().fold(rootdata::Weight::zero(g.family, g.n), |a, w| a.add(w));
    let rho_ok = rho_sum == g.rho;
    let weights = |ws: &[rootdata::Weight]| ws.iter().map(|w| w.doubled().to_vec()).collect::<Vec<_>>();
    (
        status(simple_ok && fund_ok && rho_ok),
        json!({
            "coordinates": "doubled chi-coordinates",
            "simple_roots": weights(&g.simple_roots),
            "fundamental_weights": weights(&g.fundamental_weights),
            "rho": g.rho.doubled(),
            "simple_roots_match_table": simple_ok,
            "fundamental_weights_match_table": fund_ok,
            "rho_is_sum_of_fundamental_weights": rho_ok,
            "sigma_plus": sp.to_json(g),
            "sigma_minus": sm.to_json(g),
            "simple": g.is_simple(),
        }),
    )
}

fn orders_check(g: &GroupDatum, cfg: &SuiteConfig) -> Outcome {
    let p = match g.target_parabolic(cfg.r) {
        Ok(p) => p,
        Err(e) => return err_outcome(e),
    };
    let report = match vanishing::max_multiplicity_verdict(g, p, &cfg.primes) {
        Ok(r) => r,
        Err(e) => return err_outcome(e),
    };
    let invariance = match vanishing::order_invariance(g, p, 3, 2, cfg.seed) {
        Ok(r) => r,
        Err(e) => return err_outcome(e),
    };
    let mut ok = report.maximal_multiplicity && invariance.pass && report.scaled.iter().all(|s| s.equal);
    let mut payload = json!({
        "factors": report.factors,
        "total": report.total,
        "expected": report.expected,
        "detail": to_value(&report),
        "invariance": to_value(&invariance),
    });
    if g.family == Family::A {
        match vanishing::sl_order_table_check(g.n, p.excluded) {
            Ok(t) => {
                ok &= t.pass;
                payload["table"] = to_value(&t);
            }
            Err(e) => return err_outcome(e),
        }
    }
    (status(ok), payload)
}

fn specializations_check(g: &GroupDatum, cfg: &SuiteConfig) -> Outcome {
    let Some(kind) = SpecKind::for_group(g) else {
        return err_outcome("no specialization for sl");
    };
    let fam = match charts::specialization_family(g, kind) {
        Ok(f) => f,
        Err(e) => return err_outcome(e),
    };
    let member = g.is_member(&fam.matrix).unwrap_or(false);
    let sampled = charts::sampled_membership(g, &fam, 5, cfg.seed).unwrap_or(false);
    let p = match g.target_parabolic(None) {
        Ok(p) => p,
        Err(e) => return err_outcome(e),
    };
    let report = match vanishing::max_multiplicity_verdict(g, p, &cfg.primes) {
        Ok(r) => r,
        Err(e) => return err_outcome(e),
    };
    let upper_ok = report.upper_bound.as_ref() == Some(&report.factors);
    let count_ok = fam.param_count() == fam.stated_params;
    (
        status(member && sampled && upper_ok && count_ok),
        json!({
            "family": fam.to_json(),
            "membership_exact": member,
            "membership_sampled": sampled,
            "param_count": fam.param_count(),
            "stated_params": fam.stated_params,
            "param_count_matches": count_ok,
            "upper_bound": report.upper_bound,
            "factors": report.factors,
            "upper_bound_matches": upper_ok,
        }),
    )
}

fn skew_check(n: usize, seed: u64) -> Outcome {
    let mut results = Vec::new();
    let mut ok = true;
    for k in 1..n {
        match splitting::skew_minor_claim(n, k, seed) {
            Ok(r) => {
                ok &= r.passed();
                results.push(to_value(&r));
            }
            Err(e) => return err_outcome(e),
        }
    }
    (status(ok), json!({ "n": n, "claims": results }))
}

fn rnc_check(g: &GroupDatum, guards: Guards) -> Outcome {
    let (f, vars, ids) = match splitting::big_cell_section(g) {
        Ok(t) => t,
        Err(e) => return err_outcome(e),
    };
    match splitting::rnc_search(&f, &ids, guards) {
        Err(e) => err_outcome(e),
        Ok(RncOutcome::NotComputed(trip)) => (Status::NotComputed, json!({ "guard": trip })),
        Ok(RncOutcome::Exhausted { states }) => (
            Status::Fail,
            json!({
                "found": false,
                "states_explored": states,
                "note": "no certificate with canonical quotients; lifts outside that class are not ruled out",
            }),
        ),
        Ok(RncOutcome::Found(cert)) => {
            let check = splitting::rnc_verify(&f, &cert, &vars);
            let product = Monomial::from_pairs(ids.iter().map(|&v| (v, 1)));
            let c = f.coeff_of(&product);
            let unit_ok = c.abs().is_one();
            (
                status(check.pass && unit_ok),
                json!({
                    "found": true,
                    "certificate": cert.to_json(&vars),
                    "verify": check,
                    "coefficient_of_product": c.to_string(),
                }),
            )
        }
    }
}

fn splitcoeff_check(g: &GroupDatum, cfg: &SuiteConfig) -> Outcome {
    let (f, _, ids) = match splitting::big_cell_section(g) {
        Ok(t) => t,
        Err(e) => return err_outcome(e),
    };
    let rnc = match g.family {
        Family::A => splitting::rnc_search(&f, &ids, cfg.guards).ok(),
        _ => None,
    };
    let rnc_found = matches!(rnc, Some(RncOutcome::Found(_)));
    let coordinates = match g.family {
        Family::A => "matrix entries",
        _ => "root coordinates",
    };
    let mut verdicts = Vec::new();
    let (mut failed, mut skipped) = (false, false);
    for &p in &cfg.primes {
        match splitting::splitting_coefficient(&f, &ids, p, cfg.guards) {
            Ok(v) => {
                if v.not_computed.is_some() {
                    skipped = true;
                }
                let consistent = v.fast_path_agrees != Some(false) && v.top_degree_agrees != Some(false);
                // Only meaningful when both routes produced an answer.
                let routes_agree = if rnc_found { v.splits } else { None };
                if v.splits == Some(false) || !consistent || routes_agree == Some(false) {
                    failed = true;
                }
                let mut val = to_value(&v);
                val["routes_agree"] = json!(routes_agree);
                verdicts.push(val);
            }
            Err(e) => return err_outcome(e),
        }
    }
    let st = if failed {
        Status::Fail
    } else if skipped {
        Status::NotComputed
    } else {
        Status::Pass
    };
    (
        st,
        json!({
            "coordinates": coordinates,
            "rnc_certificate_found": rnc_found,
            "verdicts": verdicts,
        }),
    )
}

fn squarefree_check(g: &GroupDatum, cfg: &SuiteConfig) -> Outcome {
    let f = match splitting::big_cell_section(g) {
        Ok((f, _, _)) => f,
        Err(e) => return err_outcome(e),
    };
    match splitting::squarefree_probe(&f, cfg.squarefree_trials, cfg.seed) {
        Ok(ev) => (status(ev.trials > 0 && ev.passed == ev.trials), to_value(&ev)),
        Err(e) => err_outcome(e),
    }
}

/// Result of checking the shipped n = 5 chain against σ₋ on the big cell.
#[derive(Clone, Debug, Serialize)]
pub struct GoldenChainCheck {
    pub order: Vec<String>,
    pub length: usize,
    pub verify: splitting::RncCheck,
    pub pass: bool,
}

pub fn golden_chain_check() -> Result<GoldenChainCheck, String> {
    let g = GroupDatum::build(Family::A, 5).map_err(|e| e.to_string())?;
    let (f, mut vars, _) = splitting::big_cell_section(&g).map_err(|e| e.to_string())?;
    let cert = RncCertificate::parse(GOLDEN_SL5_CHAIN, CoefficientRing::Integers, &mut vars).map_err(|e| e.to_string())?;
    let verify = splitting::rnc_verify(&f, &cert, &vars);
    Ok(GoldenChainCheck {
        order: cert.order.iter().map(|&v| vars.name(v)).collect(),
        length: cert.order.len(),
        pass: verify.pass,
        verify,
    })
}

/// Certificate for σ₋ on the `SL_n` big cell, as emitted by `rnc`.
pub fn sl_certificate(n: usize, guards: Guards) -> Result<(RncOutcome, Polynomial, crate::exactpoly::Vars), String> {
    let g = GroupDatum::build(Family::A, n).map_err(|e| e.to_string())?;
    let (f, vars, ids) = splitting::big_cell_section(&g).map_err(|e| e.to_string())?;
    let out = splitting::rnc_search(&f, &ids, guards).map_err(|e| e.to_string())?;
    Ok((out, f, vars))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_validation() {
        assert!(SuiteConfig::new(Family::A, 5, None).validate().is_err());
        assert!(SuiteConfig::new(Family::A, 5, Some(5)).validate().is_err());
        assert!(SuiteConfig::new(Family::C, 2, Some(1)).validate().is_err());
        let mut c = SuiteConfig::new(Family::C, 2, None);
        c.primes = vec![3, 4];
        assert!(c.validate().is_err());
        let mut c = SuiteConfig::new(Family::A, 3, Some(1));
        c.checks = vec![Check::Skew];
        assert!(c.validate().is_err());
        let mut c = SuiteConfig::new(Family::A, 3, Some(1));
        c.checks = vec![Check::Splitcoeff, Check::Orders, Check::Orders];
        assert_eq!(c.validate().unwrap().checks, vec![Check::Orders, Check::Splitcoeff]);
    }

    #[test]
    fn empty_check_list() {
        let mut c = SuiteConfig::new(Family::A, 3, Some(1));
        c.checks.clear();
        let r = run_suite(&c.validate().unwrap());
        assert!(r.checks.is_empty());
        assert_eq!(r.exit_code(), 0);
    }

    #[test]
    fn a5_orders_payload() {
        let mut c = SuiteConfig::new(Family::A, 5, Some(2));
        c.checks = vec![Check::Orders];
        let r = run_suite(&c.validate().unwrap());
        let p = &r.check("orders").unwrap().payload;
        assert_eq!(p["factors"], json!([1, 2, 2, 1]));
        assert_eq!(p["total"], json!(6));
        assert_eq!(p["expected"], json!(6));
        assert_eq!(r.exit_code(), 0);
    }

    #[test]
    fn golden_chain_verifies() {
        let a = golden_chain_check().unwrap();
        assert!(a.pass, "{a:?}");
        assert_eq!(a.order.join(""), "gdhbeiacfj");
    }
}
