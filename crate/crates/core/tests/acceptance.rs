//! One line per acceptance criterion; exits nonzero if any criterion fails.

mod common;

use std::process::Command;
use std::time::Instant;

use flagsplit::charts::{self, SpecKind};
use flagsplit::exactpoly::{CoefficientRing, Order, VarId};
use flagsplit::rootdata::{Family, GroupDatum};
use flagsplit::sections;
use flagsplit::splitting::{self, Guards, RncOutcome};
use flagsplit::suite::{self, SuiteConfig};
use flagsplit::vanishing;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Verdict = Result<String, String>;

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn sl_order_tables() -> Verdict {
    let mut cases = 0;
    for n in 2..=6 {
        for r in 1..n {
            let t = vanishing::sl_order_table_check(n, r).map_err(|e| e.to_string())?;
            ensure(t.pass, format!("n={n} r={r}: intrinsic {:?} explicit {:?} expected {:?}", t.intrinsic, t.explicit, t.expected))?;
            ensure(t.total as usize == r * (n - r), format!("n={n} r={r}: total {}", t.total))?;
            cases += 1;
        }
    }
    Ok(format!("{cases} (n, r) pairs match on both charts"))
}

/// Orders, bounds and specialization family for `Sp` or `SO`.
fn classical_case(fam: Family, n: usize) -> Result<(Vec<u32>, usize, usize, bool), String> {
    let g = GroupDatum::build(fam, n).map_err(|e| e.to_string())?;
    let p = g.target_parabolic(None).map_err(|e| e.to_string())?;
    let rep = vanishing::max_multiplicity_verdict(&g, p, &[3]).map_err(|e| e.to_string())?;
    let want: Vec<u32> = match fam {
        Family::C => (1..=n as u32).collect(),
        _ => (1..n as u32).collect(),
    };
    ensure(rep.factors == want, format!("{fam}{n}: orders {:?}, want {want:?}", rep.factors))?;
    ensure(rep.total as usize == rep.expected, format!("{fam}{n}: total {} vs {}", rep.total, rep.expected))?;
    ensure(rep.lower_bound.as_ref() == Some(&want), format!("{fam}{n}: lower bound {:?}", rep.lower_bound))?;
    ensure(rep.upper_bound.as_ref() == Some(&want), format!("{fam}{n}: upper bound {:?}", rep.upper_bound))?;
    let kind = SpecKind::for_group(&g).unwrap();
    let spec = charts::specialization_family(&g, kind).map_err(|e| e.to_string())?;
    let member = g.is_member(&spec.matrix).map_err(|e| e.to_string())?;
    Ok((rep.factors, spec.param_count(), spec.stated_params, member))
}

fn sp_max_multiplicity() -> Verdict {
    let mut notes = Vec::new();
    let mut problems = Vec::new();
    for n in [2, 3] {
        let (orders, params, _, member) = classical_case(Family::C, n)?;
        notes.push(format!("sp{n} orders {orders:?} params {params}"));
        if !member {
            problems.push(format!("sp{n}: specialization not in the group"));
        }
        if params != n {
            problems.push(format!("sp{n}: specialization has {params} free parameters, criterion asks for {n}"));
        }
    }
    if problems.is_empty() {
        Ok(notes.join("; "))
    } else {
        Err(format!("{} ({})", problems.join("; "), notes.join("; ")))
    }
}

fn so_max_multiplicity() -> Verdict {
    let mut notes = Vec::new();
    for n in [2, 3, 4] {
        let (orders, params, _, member) = classical_case(Family::D, n)?;
        let want = if n % 2 == 0 { n / 2 } else { n * (n - 1) / 2 };
        ensure(member, format!("so{n}: specialization not in the group"))?;
        ensure(params == want, format!("so{n}: {params} parameters, want {want}"))?;
        notes.push(format!("so{n} orders {orders:?} params {params}"));
    }
    Ok(notes.join("; "))
}

fn skew_claim() -> Verdict {
    let mut count = 0;
    for n in [3, 5, 7] {
        for k in 1..n {
            let r = splitting::skew_minor_claim(n, k, 1).map_err(|e| e.to_string())?;
            ensure(r.passed(), format!("n={n} k={k}: {r:?}"))?;
            count += 1;
        }
    }
    Ok(format!("{count} (n, k) corner minors nonzero of degree k with invertible witnesses"))
}

fn golden_and_search() -> Verdict {
    let a = suite::golden_chain_check()?;
    ensure(a.pass, format!("golden chain fails: {:?}", a.verify))?;
    let mut lens = Vec::new();
    for n in 2..=6 {
        let g = GroupDatum::build(Family::A, n).map_err(|e| e.to_string())?;
        let (f, vars, ids) = splitting::big_cell_section(&g).map_err(|e| e.to_string())?;
        match splitting::rnc_search(&f, &ids, Guards::default()).map_err(|e| e.to_string())? {
            RncOutcome::Found(c) => {
                let chk = splitting::rnc_verify(&f, &c, &vars);
                ensure(chk.pass, format!("sl{n}: found chain does not verify: {chk:?}"))?;
                lens.push(c.order.len());
            }
            other => return Err(format!("sl{n}: {other:?}")),
        }
    }
    Ok(format!("golden chain verifies; search finds chains of lengths {lens:?}"))
}

fn splitting_coefficients() -> Verdict {
    let cases: [(Family, usize, &[u64]); 6] = [
        (Family::A, 2, &[3, 5, 7]),
        (Family::A, 3, &[3, 5, 7]),
        (Family::A, 4, &[3, 5, 7]),
        (Family::A, 5, &[3]),
        (Family::C, 2, &[3, 5]),
        (Family::D, 3, &[3]),
    ];
    let mut done = 0;
    for (fam, n, primes) in cases {
        let g = GroupDatum::build(fam, n).map_err(|e| e.to_string())?;
        let (f, _, ids) = splitting::big_cell_section(&g).map_err(|e| e.to_string())?;
        let rnc = splitting::rnc_search(&f, &ids, Guards::default()).map_err(|e| e.to_string())?;
        for &p in primes {
            let v = splitting::local_splitting_coefficient(&g, p, Guards::default()).map_err(|e| e.to_string())?;
            ensure(v.not_computed.is_none(), format!("{fam}{n} p={p}: guard {:?}", v.not_computed))?;
            ensure(v.splits == Some(true), format!("{fam}{n} p={p}: coefficient {:?}", v.coefficient))?;
            ensure(v.fast_path_agrees == Some(true), format!("{fam}{n} p={p}: mod-p path disagrees"))?;
            ensure(v.top_degree_agrees != Some(false), format!("{fam}{n} p={p}: top-degree path disagrees"))?;
            if matches!(rnc, RncOutcome::Found(_)) {
                ensure(v.splits == Some(true), format!("{fam}{n} p={p}: routes disagree"))?;
            }
            done += 1;
        }
    }
    Ok(format!("{done} (group, p) cases split; exact, mod-p and top-degree paths agree"))
}

fn equivariance() -> Verdict {
    let mut done = Vec::new();
    for (fam, ns) in [(Family::A, 2..=5), (Family::C, 2..=3), (Family::D, 2..=3)] {
        for n in ns {
            let g = GroupDatum::build(fam, n).map_err(|e| e.to_string())?;
            let r = sections::equivariance_suite(&g).map_err(|e| format!("{fam}{n}: {e}"))?;
            ensure(r.passed(), format!("{fam}{n}: {r:?}"))?;
            ensure(r.sigma_minus_weight == g.rho.normalized(), format!("{fam}{n}: exponent weight is not rho"))?;
            done.push(format!("{fam}{n}"));
        }
    }
    Ok(format!("all four identity families hold for {}", done.join(", ")))
}

fn properties() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let (_, ids) = common::fresh_vars(&["x", "y", "z"]);
    for i in 0..100 {
        let n = 1 + i % 5;
        let m = common::random_matrix(&mut rng, n, &ids);
        ensure(m.determinant().unwrap() == common::leibniz(&m), format!("determinant oracle, matrix {i}"))?;
    }
    for i in 0..100 {
        let f = common::random_poly(&mut rng, CoefficientRing::Integers, &ids, 4, 3);
        let g = common::random_poly(&mut rng, CoefficientRing::Integers, &ids, 4, 3);
        let fg = (&f * &g).order_at_origin();
        let ok = match (f.order_at_origin(), g.order_at_origin()) {
            (Order::Finite(a), Order::Finite(b)) => fg == Order::Finite(a + b),
            _ => fg == Order::Infinite,
        };
        ensure(ok, format!("valuation additivity, pair {i}"))?;
    }
    for (fam, n, r) in [(Family::A, 4, Some(2)), (Family::A, 5, Some(3)), (Family::C, 2, None), (Family::C, 3, None), (Family::D, 3, None), (Family::D, 4, None)] {
        let g = GroupDatum::build(fam, n).unwrap();
        let p = g.target_parabolic(r).unwrap();
        let rep = vanishing::order_invariance(&g, p, 3, 0, 7).map_err(|e| e.to_string())?;
        ensure(rep.pass && rep.reordered.len() == 3, format!("{fam}{n}: orders change under reordering"))?;
    }
    let f3 = CoefficientRing::mod_p(3).unwrap();
    for i in 0..50 {
        let f = common::random_poly(&mut rng, f3, &ids, 5, 2);
        ensure(common::frobenius_holds(&f, 3), format!("Frobenius identity, poly {i}"))?;
    }
    let a5 = GroupDatum::build(Family::A, 5).unwrap();
    let (f, vars, big_ids) = splitting::big_cell_section(&a5).unwrap();
    let RncOutcome::Found(cert) = splitting::rnc_search(&f, &big_ids, Guards::default()).unwrap() else {
        return Err("no chain for sl5".into());
    };
    ensure(splitting::rnc_verify(&f, &cert, &vars).pass, "round trip fails on sl5")?;
    // Sets reachable by canonical quotients: prefixes of the found order, taken in shuffled orders.
    let mut compared = 0;
    for k in 1..=cert.order.len() {
        let direct = splitting::chain_state(&f, &big_ids, &cert.order[..k]).unwrap();
        let mut set = cert.order[..k].to_vec();
        for _ in 0..20 {
            set.shuffle(&mut rng);
            if let Some(s) = splitting::sequential_chain_state(&f, &set) {
                ensure(s == direct, "chain state depends on order")?;
                compared += 1;
            }
        }
    }
    for _ in 0..50 {
        let size = rng.gen_range(1..=4);
        let mut set: Vec<VarId> = big_ids.choose_multiple(&mut rng, size).copied().collect();
        let direct = splitting::chain_state(&f, &big_ids, &set).unwrap();
        for _ in 0..3 {
            set.shuffle(&mut rng);
            if let Some(s) = splitting::sequential_chain_state(&f, &set) {
                ensure(s == direct, "chain state depends on order")?;
                compared += 1;
            }
        }
    }
    let (small_vars, small) = common::fresh_vars(&["x", "y", "z", "w"]);
    let mut round_trips = 1;
    for i in 0..60 {
        // Half the inputs have a chain by construction, half are arbitrary.
        let f = if i % 2 == 0 {
            let mut order = small.clone();
            order.shuffle(&mut rng);
            common::random_rnc_poly(&mut rng, &order)
        } else {
            common::random_poly(&mut rng, CoefficientRing::Integers, &small, 4, 1)
        };
        if f.is_zero() {
            continue;
        }
        let brute = common::exhaustive_rnc(&f, &small);
        ensure(i % 2 == 1 || brute, format!("constructed poly {i} has no chain"))?;
        match splitting::rnc_search(&f, &small, Guards::default()).unwrap() {
            RncOutcome::Found(c) => {
                ensure(brute && splitting::rnc_verify(&f, &c, &small_vars).pass, format!("round trip, poly {i}"))?;
                round_trips += 1;
            }
            RncOutcome::Exhausted { .. } => ensure(!brute, format!("search missed a chain, poly {i}"))?,
            RncOutcome::NotComputed(_) => return Err("guard tripped".into()),
        }
    }
    Ok(format!("determinant, valuation, reordering, Frobenius, {compared} chain-state and {round_trips} round-trip checks"))
}

fn determinism() -> Verdict {
    let mut cfg = SuiteConfig::new(Family::A, 5, Some(2));
    cfg.primes = vec![3, 5];
    let cfg = cfg.validate().map_err(|e| e.to_string())?;
    let a = suite::run_suite(&cfg).to_json();
    let b = suite::run_suite(&cfg).to_json();
    ensure(a == b, "in-process reports differ")?;
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_flagsplit"))
            .args(["verify", "--family", "so", "--n", "3", "--p", "3", "--seed", "5"])
            .output()
            .map_err(|e| e.to_string())
    };
    let (x, y) = (run()?, run()?);
    ensure(x.status.code() == Some(0), format!("cli exit {:?}", x.status.code()))?;
    ensure(!x.stdout.is_empty() && x.stdout == y.stdout, "cli reports differ")?;
    Ok(format!("library report ({} bytes) and CLI report ({} bytes) identical across two runs", a.len(), x.stdout.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Verdict); 9] = [
        ("SL order tables", sl_order_tables),
        ("Sp maximal multiplicity", sp_max_multiplicity),
        ("SO maximal multiplicity", so_max_multiplicity),
        ("skew claim", skew_claim),
        ("golden chain and search", golden_and_search),
        ("splitting coefficients", splitting_coefficients),
        ("equivariance", equivariance),
        ("property suites", properties),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let verdict = f();
        let secs = start.elapsed().as_secs_f64();
        match verdict {
            Ok(detail) => println!("criterion {}: PASS {name} [{secs:.2}s] {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {}: FAIL {name} [{secs:.2}s] {detail}", i + 1);
            }
        }
    }
    println!("{} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
