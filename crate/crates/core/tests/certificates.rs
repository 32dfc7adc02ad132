use std::collections::BTreeMap;

use coniveau::certificates::{
    builtin_scenarios, detect, dh_table, elementary_abelian, extraspecial_e, find_witness, g2,
    in_integral_chern_ideal, pgl_detect, reciprocity_flags, so_odd, stable_quotient,
    build_scenario, parse_scenario_file, Markdown, QModuleScenario, Report, ScenarioParams,
    Verdict,
};
use coniveau::Error;
use proptest::prelude::*;

/// Independent F_2 oracle: polynomials in x_1..x_n as exponent vectors with
/// `Q_i` the derivation `x_j ↦ x_j^{2^{i+1}}`.
type F2Poly = BTreeMap<Vec<u32>, u8>;

fn f2_add(acc: &mut F2Poly, m: Vec<u32>) {
    let c = acc.entry(m.clone()).or_insert(0);
    *c ^= 1;
    if *c == 0 {
        acc.remove(&m);
    }
}

fn f2_q(i: u32, p: &F2Poly) -> F2Poly {
    let mut out = F2Poly::new();
    for m in p.keys() {
        for j in 0..m.len() {
            // d/dx_j of x_j^e is e·x_j^{e-1}; odd exponents survive mod 2.
            if m[j] % 2 == 1 {
                let mut t = m.clone();
                t[j] += (1 << (i + 1)) - 1;
                f2_add(&mut out, t);
            }
        }
    }
    out
}

fn f2_format(p: &F2Poly) -> String {
    let terms: Vec<String> = p
        .keys()
        .map(|m| {
            let f: Vec<String> = m
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(j, &e)| if e == 1 { format!("x{}", j + 1) } else { format!("x{}^{e}", j + 1) })
                .collect();
            if f.is_empty() { "1".into() } else { f.join("*") }
        })
        .collect();
    if terms.is_empty() { "0".into() } else { terms.join(" + ") }
}

#[test]
fn elementary_abelian_q_values_match_oracle() {
    let s = elementary_abelian(2, 3, None).unwrap();
    let c = detect(&s, &s.parse("Q0(x1*x2*x3)").unwrap(), &[1]).unwrap();
    assert_eq!(c.verdict, Verdict::NotInStrongConiveau);

    let mut alpha = F2Poly::new();
    f2_add(&mut alpha, vec![1, 1, 1]);
    let expected = f2_q(1, &f2_q(0, &alpha));
    assert_eq!(expected.len(), 6);
    let oracle = s.parse(&f2_format(&expected)).unwrap();
    assert!(s.parse(c.value.as_deref().unwrap()).unwrap().equals(&oracle).unwrap());
}

#[test]
fn elementary_abelian_tables() {
    for (p, n) in [(2, 2), (2, 3), (2, 4), (3, 2), (3, 3)] {
        let s = elementary_abelian(p, n, None).unwrap();
        let t = dh_table(&s).unwrap();
        assert_eq!(t.rows.len(), (1 << n) - n - 1, "p={p} n={n}");
        assert_eq!(t.certified_count(), t.rows.len());
        assert!(t.equality && t.consistent());
        for r in &t.rows {
            assert_eq!(r.predicted_present, Some(true), "{}", r.label);
            assert!(r.certificate.replay(&s).unwrap());
        }
        assert_eq!(t.excluded.len(), n);
    }
}

#[test]
fn s_equals_two_leading_term() {
    // Q_1Q_0(x_1x_2) = y_1^p y_2 - y_1 y_2^p up to sign; both terms have
    // coefficient ±1 independently of the monomial order.
    let s = elementary_abelian(3, 2, None).unwrap();
    let c = find_witness(&s, &s.parse("Q0(x1*x2)").unwrap()).unwrap();
    assert_eq!(c.indices, vec![1]);
    let v = s.parse(c.value.as_deref().unwrap()).unwrap();
    let a = s.parse("y1^3*y2 - y1*y2^3").unwrap();
    assert!(v.equals(&a).unwrap() || v.equals(&a.neg()).unwrap());
}

#[test]
fn chern_classes_are_rejected() {
    let s = elementary_abelian(3, 2, None).unwrap();
    for i in [vec![0], vec![1], vec![0, 1]] {
        let c = detect(&s, &s.parse("y1").unwrap(), &i).unwrap();
        assert_eq!(c.verdict, Verdict::RejectedChern);
        assert!(!c.is_certified());
    }
    assert!(in_integral_chern_ideal(&s, &s.parse("y1*y2").unwrap()).unwrap());
    // x2 carries no integral lift, so y1*x2 only lies in the plain ideal.
    assert!(!in_integral_chern_ideal(&s, &s.parse("y1*x2").unwrap()).unwrap());
}

#[test]
fn reciprocity() {
    let s = elementary_abelian(3, 2, None).unwrap();
    assert!(reciprocity_flags(&s, &s.parse("y1*x2").unwrap()).unwrap());
    assert!(!reciprocity_flags(&s, &s.parse("x1*x2").unwrap()).unwrap());
    let mut bare = s.clone();
    bare.chern_flags.clear();
    assert!(matches!(
        reciprocity_flags(&bare, &bare.parse("x1").unwrap()),
        Err(Error::MissingDeclaration(_))
    ));
}

#[test]
fn g2_certificate() {
    let s = g2(None).unwrap();
    let c = detect(&s, &s.parse("w4").unwrap(), &[1]).unwrap();
    assert!(c.is_certified());
    assert_eq!(c.value.as_deref(), Some("w7"));
    assert!(c.assumptions.iter().any(|a| a.contains("N^1")));
    let chern: Vec<String> = s.chern_flags.iter().map(ToString::to_string).collect();
    assert_eq!(chern, ["w4^2", "w6^2", "w7^2"]);
    let t = dh_table(&s).unwrap();
    assert!(!t.equality);
    let open: Vec<_> = t.rows.iter().filter(|r| !r.certificate.is_certified()).map(|r| r.label.as_str()).collect();
    assert_eq!(open, ["w7", "w4*w7"]);
}

#[test]
fn so_tables() {
    let s = so_odd(1, None).unwrap();
    let t = dh_table(&s).unwrap();
    let labels: Vec<_> = t.rows.iter().map(|r| r.label.as_str()).collect();
    assert_eq!(labels, ["w3"]);
    assert!(t.equality && t.consistent());
    let s = so_odd(2, None).unwrap();
    let t = dh_table(&s).unwrap();
    assert!(t.rows.iter().filter(|r| r.label.starts_with('w') && !r.label.contains('*')).all(|r| r.certificate.is_certified()));
    let q = stable_quotient(&s).unwrap();
    assert_eq!(q.basis(), ["1", "w2", "w4"]);
}

#[test]
fn extraspecial_rows() {
    for n in [2usize, 3] {
        let s = extraspecial_e(n, 3, None).unwrap();
        let t = dh_table(&s).unwrap();
        let pairs = 2 * n * (2 * n - 1) / 2;
        assert_eq!(t.rows.len(), pairs - 1);
        assert!(t.rows.iter().all(|r| r.degree == 3));
        assert!(!t.rows.iter().any(|r| r.label.contains("x1*x2)")));
        assert_eq!(t.certified_count(), t.rows.len());
    }
}

#[test]
fn stable_quotients_are_exterior() {
    for (p, n) in [(2, 2), (2, 3), (3, 3)] {
        let q = stable_quotient(&elementary_abelian(p, n, None).unwrap()).unwrap();
        assert_eq!(q.total_dimension(), 1 << n);
        assert!(q.basis().iter().all(|b| !b.contains('y') && !b.contains('^')));
    }
}

#[test]
fn pgl_certificates() {
    for (p, x) in [(3, "x8"), (5, "x12")] {
        let m = QModuleScenario::pgl(p).unwrap();
        let c = pgl_detect(&m).unwrap();
        assert!(c.is_certified());
        assert_eq!(c.value.as_deref(), Some(x));
        let q0u2 = m.unit(m.label("Q0u2").unwrap());
        assert!(m.apply(0, &q0u2).unwrap().is_empty());
    }
}

#[test]
fn cap_overflow_is_inconclusive() {
    let s = build_scenario("elementary", ScenarioParams { p: Some(2), n: Some(3), cap: Some(5), ..Default::default() }).unwrap();
    let c = detect(&s, &s.parse("Q0(x1*x2*x3)").unwrap(), &[1]).unwrap();
    assert_eq!(c.verdict, Verdict::Inconclusive);
    assert!(c.value.is_none());
    assert!(matches!(
        build_scenario("g2", ScenarioParams { cap: Some(1000), ..Default::default() }),
        Err(Error::OutOfRange(_))
    ));
    assert!(matches!(build_scenario("nope", ScenarioParams::default()), Err(Error::UnknownScenario(_))));
}

#[test]
fn tampered_certificate_fails_replay() {
    let s = elementary_abelian(2, 3, None).unwrap();
    let mut c = detect(&s, &s.parse("Q0(x1*x2)").unwrap(), &[1]).unwrap();
    assert!(c.replay(&s).unwrap());
    c.value = Some("x1".into());
    assert!(!c.replay(&s).unwrap());
    let other = elementary_abelian(2, 2, None).unwrap();
    let c = detect(&s, &s.parse("Q0(x1*x2)").unwrap(), &[1]).unwrap();
    assert!(!c.replay(&other).unwrap());
}

#[test]
fn registry_and_reports() {
    let r = builtin_scenarios().unwrap();
    let names = r.names();
    let mut sorted = names.clone();
    sorted.sort();
    assert_eq!(names, sorted);
    assert!(names.iter().any(|n| n == "g2"));
    let s = r.get("g2").unwrap();
    let t = dh_table(s).unwrap();
    let a = Report::new("dh-table", &s.name, &s.content_hash(), t.consistent(), &t).to_json();
    let b = Report::new("dh-table", &s.name, &s.content_hash(), t.consistent(), &dh_table(s).unwrap()).to_json();
    assert_eq!(a, b);
    assert!(a.starts_with("{\n  \"schema_version\": 1,"));
    assert!(t.to_markdown().contains("| `w4` | 4 | (1) | `w7` | not-in-strong-coniveau |"));
}

#[test]
fn scenario_file_round_trip() {
    let text = "\
scenario toy
group Z/2
prime 2
cap 8
gen x1 1
gen x2 1
max_index 1
Q 0 x1 = x1^2
Q 0 x2 = x2^2
Q 1 x1 = x1^4
Q 1 x2 = x2^4
chern x1^2
chern x2^2
candidate q = Q0(x1*x2)
";
    let s = parse_scenario_file(text).unwrap();
    let c = find_witness(&s, &s.candidates[0].element).unwrap();
    assert!(c.is_certified());
    let builtin = elementary_abelian(2, 2, None).unwrap();
    let b = find_witness(&builtin, &builtin.parse("Q0(x1*x2)").unwrap()).unwrap();
    assert_eq!(c.value, b.value);
}

fn extra_flags() -> impl Strategy<Value = Vec<usize>> {
    proptest::collection::vec(0usize..10, 0..4)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Adding Chern flags never turns a rejection into a certificate.
    #[test]
    fn detect_is_monotone_in_chern_ideal(extra in extra_flags(), pick in 0usize..4) {
        let s = elementary_abelian(2, 3, None).unwrap();
        let pool: Vec<_> = s.presentation().graded_basis(2).unwrap()
            .into_iter()
            .chain(s.presentation().graded_basis(3).unwrap())
            .collect();
        let mut bigger = s.clone();
        for k in extra {
            bigger.chern_flags.push(pool[k % pool.len()].clone());
        }
        let cand = &s.candidates[pick % s.candidates.len()];
        let small = find_witness(&s, &cand.element).unwrap();
        let large = detect(&bigger, &cand.element, &small.indices).unwrap();
        if large.verdict == Verdict::NotInStrongConiveau {
            prop_assert_eq!(small.verdict, Verdict::NotInStrongConiveau);
        }
        if small.verdict == Verdict::RejectedChern {
            prop_assert_eq!(large.verdict, Verdict::RejectedChern);
        }
        prop_assert!(large.verdict == small.verdict || large.verdict == Verdict::RejectedChern);
    }
}
