use kshuffle::exec::set_parallel;
use kshuffle::harness::*;

fn small(r: usize, max_d: i32, max_k: usize) -> Session {
    Session {
        r,
        max_d,
        max_k,
        ..Session::default()
    }
}

fn grid(rel: Relation) -> Session {
    match rel {
        Relation::R5 => small(1, 2, 2),
        Relation::R2 | Relation::R3 => small(2, 2, 2),
        Relation::R9 => small(1, 0, 3),
        _ => small(2, 2, 2),
    }
}

fn holds(rel: Relation) {
    let rep = verify(rel, &grid(rel)).unwrap();
    assert!(rep.summary.cases > 0, "{rel:?} swept nothing");
    assert!(rep.passed, "{}", rep.to_text());
}

fn broken_by_perturbation(rel: Relation) {
    let s = Session {
        perturb: Perturbation::breaking(rel),
        ..grid(rel)
    };
    let rep = verify(rel, &s).unwrap();
    assert!(!rep.passed, "{rel:?} survived {}", s.perturb.name());
}

#[test]
fn wheel_conditions() {
    holds(Relation::R1);
    broken_by_perturbation(Relation::R1);
}

#[test]
fn homomorphism() {
    holds(Relation::R2);
    broken_by_perturbation(Relation::R2);
}

#[test]
fn tableaux_against_residues() {
    holds(Relation::R3);
    broken_by_perturbation(Relation::R3);
}

#[test]
fn drinfeld() {
    holds(Relation::R4);
    broken_by_perturbation(Relation::R4);
}

#[test]
fn power_sum_commutator() {
    holds(Relation::R5);
    broken_by_perturbation(Relation::R5);
}

#[test]
fn heisenberg_holds_only_for_n_one() {
    let rep = verify(Relation::R6, &grid(Relation::R6)).unwrap();
    assert!(!rep.passed);
    for c in &rep.cases {
        assert_eq!(c.status.is_pass(), c.int("n") == Some(1), "{}", c.key);
    }
    broken_by_perturbation(Relation::R6);
}

#[test]
fn unit_class_eigenvector() {
    let rep = verify(Relation::R7, &small(2, 3, 2)).unwrap();
    assert!(!rep.passed);
    for c in &rep.cases {
        let framing = c.text("identity") == Some("eigenvalue framing");
        assert_eq!(c.status.is_pass(), !framing, "{}", c.key);
    }
    broken_by_perturbation(Relation::R7);
}

#[test]
fn geometric_operators() {
    let rep = verify(Relation::R8, &grid(Relation::R8)).unwrap();
    assert!(rep.cases_of(None).count() > 0);
    assert!(rep.cases_of(None).all(|c| c.status.is_pass()));
    assert!(rep.passing_variants().is_empty());
    broken_by_perturbation(Relation::R8);
}

#[test]
fn phi_and_vertex_constants() {
    holds(Relation::R9);
    broken_by_perturbation(Relation::R9);
}

#[test]
fn remaining_relations() {
    for rel in [Relation::R10, Relation::R11, Relation::R12] {
        holds(rel);
        broken_by_perturbation(rel);
    }
}

#[test]
fn reports_are_deterministic() {
    for rel in [Relation::R1, Relation::R4, Relation::R12] {
        let out = determinism(rel, &small(1, 2, 2)).unwrap();
        assert!(out.ok(), "{out:?}");
    }
}

#[test]
fn sequential_matches_parallel() {
    let s = small(2, 2, 2);
    set_parallel(false);
    let seq = verify(Relation::R3, &s).unwrap().to_json();
    set_parallel(true);
    let par = verify(Relation::R3, &s).unwrap().to_json();
    assert_eq!(seq, par);
}

#[test]
fn report_json_schema() {
    let rep = verify(Relation::R4, &small(1, 1, 1)).unwrap();
    let v: serde_json::Value = serde_json::from_str(&rep.to_json()).unwrap();
    assert_eq!(v["schema"], SCHEMA);
    assert_eq!(v["schema_version"], SCHEMA_VERSION);
    assert_eq!(v["relation"], "R4");
    assert!(v.get("elapsed_ms").is_none());
}

#[test]
fn relation_ids() {
    for rel in Relation::ALL {
        assert_eq!(Relation::parse(rel.id()).unwrap(), rel);
    }
    assert_eq!(Relation::parse("R0").unwrap_err().name(), "UnknownRelation");
}
