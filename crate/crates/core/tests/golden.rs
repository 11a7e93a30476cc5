use std::collections::BTreeSet;

use flagsplit::exactpoly::{CoefficientRing, Polynomial, Vars};
use flagsplit::polymatrix::MinorSpec;
use flagsplit::rootdata::{Family, GroupDatum};
use flagsplit::splitting::{self, RncCertificate};
use flagsplit::suite;

const ZZ: CoefficientRing = CoefficientRing::Integers;

fn load() -> (Polynomial, Vars, RncCertificate) {
    let g = GroupDatum::build(Family::A, 5).unwrap();
    let (f, mut vars, _) = splitting::big_cell_section(&g).unwrap();
    let cert = RncCertificate::parse(suite::GOLDEN_SL5_CHAIN, ZZ, &mut vars).unwrap();
    (f, vars, cert)
}

fn p(text: &str, vars: &mut Vars) -> Polynomial {
    Polynomial::parse(text, ZZ, vars).unwrap()
}

#[test]
fn golden_chain_verifies() {
    let (f, vars, cert) = load();
    let names: Vec<String> = cert.order.iter().map(|&v| vars.name(v)).collect();
    assert_eq!(names.join(" "), "g d h b e i a c f j");
    assert_eq!(cert.chain.len(), 11);
    let chk = splitting::rnc_verify(&f, &cert, &vars);
    assert!(chk.pass, "{chk:?}");
}

#[test]
fn golden_chain_tail_matches_worked_example() {
    let (_, mut vars, cert) = load();
    let tail = [
        (5, "i*(a*c*f*j - a*c*i - a*e*j)"),
        (6, "a*c*f*j - a*c*i"),
        (7, "c*f*j"),
        (8, "f*j"),
        (9, "j"),
        (10, "1"),
    ];
    for (i, text) in tail {
        let expect = match text.split_once("*(") {
            Some((head, rest)) => &p(head, &mut vars) * &p(rest.trim_end_matches(')'), &mut vars),
            None => p(text, &mut vars),
        };
        assert_eq!(cert.chain[i], expect, "f{i}");
    }
}

#[test]
fn golden_chain_head_factors() {
    let (f, mut vars, cert) = load();
    assert_eq!(cert.chain[0], f);
    let chart = flagsplit::charts::entry_chart(5);
    let det4 = chart.matrix.column_minor(&MinorSpec::new(vec![2, 3, 4, 5])).unwrap();
    let id = |s: &str, v: &Vars| v.get(s).unwrap();
    let (g, d, h) = (id("g", &vars), id("d", &vars), id("h", &vars));
    // f3 = (bei - bfh) · det4 with g and d set to zero
    let f3 = &p("b*e*i - b*f*h", &mut vars) * &det4.zero_out(&BTreeSet::from([g, d]));
    assert_eq!(cert.chain[3], f3);
    // f4 = e i · det4 with g, d, h set to zero
    let f4 = &p("e*i", &mut vars) * &det4.zero_out(&BTreeSet::from([g, d, h]));
    assert_eq!(cert.chain[4], f4);
}

#[test]
fn golden_file_is_canonical_chain() {
    let g = GroupDatum::build(Family::A, 5).unwrap();
    let (f, vars, ids) = splitting::big_cell_section(&g).unwrap();
    let order: Vec<_> = "g d h b e i a c f j".split(' ').map(|s| vars.get(s).unwrap()).collect();
    let cert = splitting::build_certificate(&f, &ids, &order).unwrap();
    assert_eq!(cert.to_text(&vars), suite::GOLDEN_SL5_CHAIN);
}

#[test]
fn tampered_golden_fails() {
    let (f, mut vars, _) = load();
    let bad = suite::GOLDEN_SL5_CHAIN.replace("f7: c*f*j", "f7: c*f*j + a");
    let cert = RncCertificate::parse(&bad, ZZ, &mut vars).unwrap();
    let chk = splitting::rnc_verify(&f, &cert, &vars);
    assert!(!chk.pass);
    assert!(chk.failure.unwrap().starts_with("chain equation 6"));
}
