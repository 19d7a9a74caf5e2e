use semicubic::arith::int;
use semicubic::polys::{run_named, Entry, Witness, CERTIFICATE_NAMES};
use semicubic::{CertificateStatus, CoefficientTables};

/// Certificate that reads the mutated entry.
fn owner(e: Entry) -> &'static [&'static str] {
    match e {
        Entry::Zeta(_) => &CERTIFICATE_NAMES,
        Entry::Xi(_) => &["xi-table"],
        Entry::Phi(_) => &["phi-table"],
        Entry::Nu(_) => &["s-table"],
        Entry::Mu(_) => &["p-table"],
        Entry::C => &["c-table"],
        Entry::F1 | Entry::F2 => &["f1-f2"],
    }
}

fn flips(tables: &CoefficientTables, e: Entry, term: (u32, u32), delta: i64) -> bool {
    let bumped = tables.perturbed(e, term, &int(delta));
    let certs = run_named(&bumped, owner(e)).unwrap();
    certs.iter().any(|c| c.status == CertificateStatus::Fail)
}

#[test]
fn every_cheap_site_flips_a_certificate() {
    let t = CoefficientTables::builtin();
    let sites: Vec<_> = t
        .coefficient_sites()
        .into_iter()
        .filter(|(e, _)| !matches!(e, Entry::Zeta(_) | Entry::F1 | Entry::F2))
        .collect();
    assert!(sites.len() > 300);
    for (e, term) in sites {
        for delta in [1, -1] {
            assert!(flips(t, e, term, delta), "{e} {term:?} {delta:+} went unnoticed");
        }
    }
}

#[test]
fn sampled_zeta_sites_flip_a_certificate() {
    let t = CoefficientTables::builtin();
    let sites: Vec<_> = t.coefficient_sites().into_iter().filter(|(e, _)| matches!(e, Entry::Zeta(_))).collect();
    for (e, term) in sites.iter().step_by(sites.len() / 6 + 1) {
        assert!(flips(t, *e, *term, 1), "{e} {term:?} went unnoticed");
    }
}

/// High-order F terms are invisible to the numeric tier on the sample grid,
/// so a mutation there either fails or leaves only the numeric tier passing.
#[test]
fn sampled_f_sites_fail_or_downgrade() {
    let t = CoefficientTables::builtin();
    let sites: Vec<_> = t.coefficient_sites().into_iter().filter(|(e, _)| matches!(e, Entry::F1 | Entry::F2)).collect();
    let mut failed = 0;
    let mut picked: Vec<_> = sites.iter().step_by(sites.len() / 8 + 1).collect();
    picked.push(&sites[0]);
    for (e, term) in picked {
        let bumped = t.perturbed(*e, *term, &int(1));
        let c = &run_named(&bumped, &["f1-f2"]).unwrap()[0];
        assert!(!c.detail.contains("exact identity"), "{e} {term:?} still exact");
        if !c.passed() {
            failed += 1;
        }
    }
    assert!(failed >= 1);
}

#[test]
fn xi0_bump_leaves_its_own_discrepancy() {
    let t = CoefficientTables::builtin();
    let bumped = t.perturbed(Entry::Xi(0), (0, 0), &int(1));
    let c = &run_named(&bumped, &["xi-table"]).unwrap()[0];
    match &c.witness {
        // p_from_xi is -sum xi_i k^i, so the difference derived - printed is +1.
        Some(Witness::Discrepancy(d)) => assert_eq!(d.terms().count(), 1),
        other => panic!("unexpected witness {other:?}"),
    }
}

#[test]
fn flipped_phi2_top_term_gets_a_definite_verdict() {
    let t = CoefficientTables::builtin();
    let top = t.phi[2].degree().expect("nonzero") as u32;
    let c0 = t.phi[2].coeff(top as usize);
    let mut flipped = t.perturbed(Entry::Phi(2), (top, 0), &(-c0.clone() * int(2)));
    let c = &run_named(&flipped, &["phi-negativity"]).unwrap()[0];
    assert!(c.passed() || c.witness.is_some());
    flipped.phi[2] = t.phi[2].clone();
    assert!(run_named(&flipped, &["phi-negativity"]).unwrap()[0].passed());
}
