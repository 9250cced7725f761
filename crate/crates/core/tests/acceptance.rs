//! One line per acceptance criterion; every comparison is exact.

use std::path::PathBuf;
use std::time::Instant;

use pointed_hopf::cocycle::{
    cocycle_suite, deform_product, deformation_suite, deformed_structure_suite, descent_suite, fif_suite,
    tau_property_suite, Sigma, SplitAlgebras, Tau,
};
use pointed_hopf::datum::{load_datum, Instance, Root, RootParameterFamily};
use pointed_hopf::hopf::{
    antipode_recursion_suite, commutation_suite, delroot_suite, hopf_axioms_suite, hopf_ideal_suite,
    normal_form_suite, CommutationSelector, Presentation,
};
use pointed_hopf::ncalg::{build_rules, enumerate_basis, parse_element, Flavor};
use pointed_hopf::par::Execution;
use pointed_hopf::report::Suite;
use pointed_hopf::scalars::CycField;

const EXEC: Execution = Execution::Parallel;
const SAMPLES: usize = 100;

fn instance(name: &str) -> Instance {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name);
    load_datum(path).unwrap()
}

struct Criteria {
    failed: Vec<usize>,
}

impl Criteria {
    fn record(&mut self, n: usize, title: &str, results: Vec<(String, bool)>) {
        let ok = results.iter().all(|(_, b)| *b);
        println!("criterion {n}: {} {title}", if ok { "pass" } else { "FAIL" });
        for (what, b) in &results {
            println!("    {} {what}", if *b { "ok  " } else { "FAIL" });
        }
        if !ok {
            self.failed.push(n);
        }
    }
}

fn suite_result(label: impl Into<String>, s: &Suite) -> (String, bool) {
    let mut label = label.into();
    if let Some(c) = s.failures().next() {
        label = format!("{label}: {} {} {} {:?}", c.identity, c.case, c.outcome.label(), c.witness);
    } else {
        label = format!("{label} ({} checks)", s.checks.len());
    }
    (label, s.passed() && !s.checks.is_empty())
}

fn dimension(name: &str, flavor: Flavor, bound: usize, expected: u128) -> (String, bool) {
    let inst = instance(name);
    let t0 = Instant::now();
    let rs = build_rules(&inst.datum, &inst.gamma, &flavor, bound).unwrap();
    let count = enumerate_basis(&rs, 1_000_000).map(|b| b.count()).unwrap_or(0);
    let label = format!("{name} {}: {count} = {expected} ({}, {:.2?})", flavor.name(), rs.status(), t0.elapsed());
    (label, count == expected && rs.is_confluent())
}

#[test]
fn acceptance() {
    let mut crit = Criteria { failed: Vec::new() };

    // |Γ| · N^{#positive roots}
    crit.record(1, "dimension of u(D) on I2", vec![dimension("i2.toml", Flavor::Small, 12, 25 * 5 * 5)]);
    crit.record(
        2,
        "dimension of A(D, γ) on I1 and I3",
        vec![dimension("i1.toml", Flavor::Lifted, 12, 25 * 5), dimension("i3.toml", Flavor::Lifted, 24, 625 * 5 * 5 * 5)],
    );

    let (i1, i2, i3) = (instance("i1.toml"), instance("i2.toml"), instance("i3.toml"));
    crit.record(
        3,
        "Hopf ideal certification",
        vec![
            suite_result("I1 A", &hopf_ideal_suite(&i1.datum, &i1.gamma, Flavor::Lifted, 12, EXEC).unwrap()),
            suite_result("I2 u", &hopf_ideal_suite(&i2.datum, &i2.gamma, Flavor::Small, 12, EXEC).unwrap()),
            suite_result("I3 A", &hopf_ideal_suite(&i3.datum, &i3.gamma, Flavor::Lifted, 24, EXEC).unwrap()),
            suite_result(
                "I3 partial i0 = 1",
                &hopf_ideal_suite(&i3.datum, &i3.gamma, Flavor::partial(&i3.datum, 0), 24, EXEC).unwrap(),
            ),
        ],
    );

    let f3 = i3.datum.field();
    let roots3 = [Root::from_one_based(1, 2), Root::from_one_based(2, 3), Root::from_one_based(1, 3)];
    let only12 = RootParameterFamily::new(&i3.datum, [(Root::from_one_based(1, 2), f3.one())]).unwrap();
    let mut c4 = vec![suite_result(
        "I1 (1,2)",
        &delroot_suite(&i1.datum, &i1.gamma, Some(&[Root::from_one_based(1, 2)]), 12, EXEC).unwrap(),
    )];
    for (label, g) in [("all γ", i3.gamma.clone()), ("γ = 0", RootParameterFamily::zero(f3)), ("γ12 only", only12)] {
        let s = delroot_suite(&i3.datum, &g, Some(&roots3), 24, EXEC).unwrap();
        c4.push(suite_result(format!("I3 (1,2) (2,3) (1,3), {label}"), &s));
        c4.push(suite_result(format!("I3 antipode recursion, {label}"), &antipode_recursion_suite(&i3.datum, &g, 24, EXEC).unwrap()));
    }
    crit.record(4, "coproduct of root-vector powers", c4);

    let mut c5 = Vec::new();
    let mut seen = std::collections::BTreeSet::new();
    for name in ["i2.toml", "a1a2_link12.toml", "a1a2_link13.toml", "i3.toml"] {
        let inst = instance(name);
        for sel in [CommutationSelector::Crucial, CommutationSelector::Techcom] {
            let s = commutation_suite(&inst.datum, sel, None, 24, EXEC).unwrap();
            if s.checks.is_empty() {
                continue;
            }
            seen.extend(s.checks.iter().map(|c| c.identity.clone()));
            c5.push(suite_result(format!("{name} {}", s.name), &s));
        }
    }
    for kind in ["crucial", "techcom-case1", "techcom-case2", "techcom-case3", "techcom-ii"] {
        c5.push((format!("{kind} exercised"), seen.contains(kind)));
    }
    let f5 = CycField::get(5);
    c5.push(("geometric_sum(ζ_5, 5) = 0".into(), f5.zeta_pow(1).geometric_sum(5).is_zero()));
    c5.push(("geometric_sum(ζ_5^2, 5) = 0".into(), f5.zeta_pow(2).geometric_sum(5).is_zero()));
    crit.record(5, "commutation suite", c5);

    let alg = SplitAlgebras::new(&i2.datum, 0).unwrap();
    let cs = cocycle_suite(&alg, 1, SAMPLES, EXEC);
    let ds = descent_suite(&alg, 1, SAMPLES);
    let mut c6 = vec![suite_result("cocycle identity, unitality, σ*σ⁻¹", &cs), suite_result("descent", &ds)];
    for case in ["chk1 z1, b = y1", "chk1 z1, b = y2", "chk1 z1, b = b2", "chk2 g1, u = z1", "chk2 g1, u = u1"] {
        let found = ds.checks.iter().any(|c| format!("{} {}", c.identity, c.case) == case && c.outcome.label() == "pass");
        c6.push((format!("{case} = ε"), found));
    }
    c6.push(("216 generator triples".into(), cs.checks.iter().any(|c| c.case == "216 generator triples")));
    crit.record(6, "cocycle and descent on the I2 split", c6);

    let (u, b, h) = (alg.u_ctx(), alg.b_ctx(), alg.h_ctx());
    let tau = Tau::new(&alg);
    let tau_inv = tau.inverse();
    let tt = Tau::zeroed(&alg);
    let tt_inv = tt.inverse();
    let (s, si) = (Sigma::new(&alg, &tau), Sigma::new(&alg, &tau_inv));
    let (st, sti) = (Sigma::new(&alg, &tt), Sigma::new(&alg, &tt_inv));
    let x = alg.pair(&u.letter(0), &b.one());
    let y = alg.pair(&u.one(), &b.letter(0));
    let q = i2.datum.q(0, 1);
    let comm = |f: &Sigma, g: &Sigma| deform_product(&alg, &x, &y, f, g).sub(&deform_product(&alg, &y, &x, f, g).scale(&q));
    let d_sigma = comm(&s, &si);
    let d_tilde = comm(&st, &sti);
    let z1 = u.group_element(u.index(&alg.split().part.group().generator(0)));
    let g2 = parse_element(b, "g[0,1]").unwrap();
    let expect = alg.one().sub(&alg.pair(&z1, &g2));
    let image = alg.coset_image(&d_sigma.sub(&d_tilde));
    crit.record(
        7,
        "deformation witness on the I2 split",
        vec![
            (format!("λ12 = 1: x·y − q y·x = {}", alg.show_pair(&d_sigma)), d_sigma == expect),
            (format!("λ = 0: x·y − q y·x = {}", alg.show_pair(&d_tilde)), d_tilde.is_zero()),
            (format!("coset image {image} = 1 - g[1,1]"), image == parse_element(h, "1 - g[1,1]").unwrap()),
            suite_result("deformation suite (both splits of I2)", &{
                let mut s = deformation_suite(&alg);
                s.checks.extend(deformation_suite(&SplitAlgebras::new(&i2.datum, 1).unwrap()).checks);
                s
            }),
        ],
    );

    crit.record(
        8,
        "f-twist identity",
        vec![
            suite_result("I1 i0 = 1", &fif_suite(&i1.datum, &i1.gamma, 0, 12, EXEC).unwrap()),
            suite_result("I3 i0 = 1", &fif_suite(&i3.datum, &i3.gamma, 0, 24, EXEC).unwrap()),
        ],
    );

    let ctx3 = Presentation::new(&i3.datum, &i3.gamma, Flavor::Lifted, 24).unwrap();
    let p2 = Presentation::new(&i2.datum, &i2.gamma, Flavor::Small, 12).unwrap();
    let c9 = vec![
        suite_result("I3 Hopf axioms", &hopf_axioms_suite(ctx3.ctx(), 42, SAMPLES, EXEC)),
        suite_result("I3 normal forms", &normal_form_suite(&ctx3, 42, SAMPLES, 8, EXEC)),
        suite_result("I2 normal forms", &normal_form_suite(&p2, 42, SAMPLES, 8, EXEC)),
        suite_result("I2 split τ properties", &tau_property_suite(&alg, 42, SAMPLES)),
        suite_result("I2 split ·_σ structure", &deformed_structure_suite(&alg, 42, SAMPLES, EXEC)),
    ];
    crit.record(9, "structural properties (seed 42)", c9);

    assert!(crit.failed.is_empty(), "failed criteria: {:?}", crit.failed);
}
