//! The twelve acceptance criteria. Prints one line per criterion.
//!
//! Three criteria fail as stated (6, 7 and the b-part of 8). For those the run
//! checks that the observed deviation is exactly the analysed one; any other
//! outcome makes the process exit nonzero.

use std::process::ExitCode;
use std::time::Instant;

use kshuffle::characters::TvForm;
use kshuffle::harness::*;
use kshuffle::kaction::*;
use kshuffle::scalars::*;
use kshuffle::shuffle::Sign;

fn session(r: usize, max_d: i32, max_k: usize) -> Session {
    Session {
        r,
        max_d,
        max_k,
        ..Session::default()
    }
}

fn counts(rep: &Report) -> String {
    format!("{}/{} cases pass", rep.summary.pass, rep.summary.cases)
}

fn first_failure(rep: &Report) -> String {
    match rep.failures().next() {
        None => String::new(),
        Some(c) => match &c.status {
            Status::Fail { witness } => format!("; first failure {} lhs = {} rhs = {}", c.key, witness.lhs, witness.rhs),
            Status::Error { error, .. } => format!("; first error {} {error}", c.key),
            Status::Pass => String::new(),
        },
    }
}

enum Verdict {
    Pass,
    Fail,
    /// Fails as stated, with the deviation matching the recorded analysis.
    Documented(String),
}

struct Line {
    n: usize,
    verdict: Verdict,
    text: String,
}

fn plain(n: usize, text: &str, reps: &[&Report]) -> Line {
    let ok = reps.iter().all(|r| r.passed);
    let detail: Vec<String> = reps.iter().map(|r| format!("{} {}{}", r.relation, counts(r), first_failure(r))).collect();
    Line {
        n,
        verdict: if ok { Verdict::Pass } else { Verdict::Fail },
        text: format!("{text} [{}]", detail.join("; ")),
    }
}

fn prod_t(r: usize) -> Monomial {
    (1..=r).fold(Monomial::one(), |a, i| a.mul(&t(i)))
}

/// Criterion 6: every failing case is `[P_{n,0}, P_{-n,0}] = n * display`.
fn heisenberg_deviation(rep: &Report) -> std::result::Result<(), String> {
    for c in &rep.cases {
        let (r, n, deg) = (
            c.int("r").unwrap() as usize,
            c.int("n").unwrap() as usize,
            c.int("deg").unwrap() as i32,
        );
        if n == 1 && !c.status.is_pass() {
            return Err(format!("n = 1 fails at {}", c.key));
        }
        if n == 1 {
            continue;
        }
        let opts = ActionOptions::default();
        let a = Operator::new(OpSpec::P { k: n, d: 0 }, Sign::Plus, r, opts);
        let b = Operator::new(OpSpec::P { k: n, d: 0 }, Sign::Minus, r, opts);
        let lhs = Operator::commutator_at(&a, &b, deg).map_err(|e| e.to_string())?;
        let scaled = heisenberg_display(n, r).scale(&int(n as i64));
        if !lhs.equals(&OperatorMatrix::scalar(r, deg, &scaled), EqMode::Exact).unwrap() {
            return Err(format!("{} is not n times the display", c.key));
        }
    }
    Ok(())
}

/// Criterion 7: the eigenvalue-one and vanishing cases hold; the framing eigenvalue is
/// `-((-1)^r t_1..t_r)^k`.
fn eigenvalue_deviation(rep: &Report) -> std::result::Result<(), String> {
    for c in &rep.cases {
        let framing = c.text("identity") == Some("eigenvalue framing");
        if !framing {
            if !c.status.is_pass() {
                return Err(format!("{} fails", c.key));
            }
            continue;
        }
        let (r, k, d, deg) = (
            c.int("r").unwrap() as usize,
            c.int("k").unwrap() as usize,
            c.int("d").unwrap() as i32,
            c.int("deg").unwrap() as i32,
        );
        let ki = k as i32;
        let m = op_matrix(&OpSpec::P { k, d }, Sign::Minus, r, deg + ki, &ActionOptions::default()).unwrap();
        let got = apply(&m, &KVector::unit_class(r, deg + ki).unwrap()).unwrap();
        let base = if r % 2 == 0 { 1 } else { -1 };
        let observed = RationalFn::from_int(-1).mul(&RationalFn::from_int(base).mul_monomial(&prod_t(r)).pow(ki).unwrap());
        let want = KVector::unit_class(r, deg).unwrap().scale(&observed);
        if got.first_difference(&want, EqMode::Exact).is_some() {
            return Err(format!("{}: eigenvalue is not -((-1)^r t)^k", c.key));
        }
    }
    Ok(())
}

/// Criterion 8: a_k passes; for both tangent forms `b_k` equals
/// `q1^{-k(k-1)/2} X_{B_k det}`, i.e. `q1^k` times the stated right side.
fn b_deviation(rep: &Report, s: &Session) -> std::result::Result<(), String> {
    if rep.cases_of(None).any(|c| !c.status.is_pass()) {
        return Err("a_k fails".into());
    }
    for r in 1..=s.r {
        for k in 1..=s.max_k {
            for sign in [Sign::Plus, Sign::Minus] {
                for d in 0..=s.max_d {
                    let base = ActionOptions::default();
                    let pref = RationalFn::mono(q1().pow(-((k * (k - 1) / 2) as i32)));
                    let sh = op_matrix(&OpSpec::B { k }, sign, r, d, &base).unwrap().scale(&pref);
                    for tv in [TvForm::Lagrangian, TvForm::Relative] {
                        let geo = op_matrix(&OpSpec::GeoB { k }, sign, r, d, &ActionOptions { tv, ..base }).unwrap();
                        if !geo.equals(&sh, EqMode::Exact).unwrap() {
                            return Err(format!("r={r} k={k} {sign} d={d} {tv:?}: not q1^k off"));
                        }
                    }
                }
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let start = Instant::now();
    let mut lines = Vec::new();

    let s1 = session(2, 5, 2);
    lines.push(plain(1, "char_W gamma = corners, |lambda| <= 5, r <= 2", &[&verify_char_w(&s1, 5)]));

    let s2 = session(2, 3, 2);
    lines.push(plain(2, "char_E tautological = explicit sum, |lambda|, |mu| <= 3, r <= 2", &[&verify_char_e(&s2, 3)]));

    let s3 = session(2, 4, 2);
    lines.push(plain(3, "tangent character has 2r|lambda| weights, none trivial, |lambda| <= 4, r <= 2", &[&verify_tangent(&s3, 4)]));

    let s4 = session(2, 3, 2);
    let r3 = verify(Relation::R3, &s4).unwrap();
    lines.push(plain(4, "tableau formula = iterated residues, X_m, k <= 2, d <= 3, r <= 2, both signs", &[&r3]));

    let s5 = session(2, 3, 2);
    let r4 = verify(Relation::R4, &s5).unwrap();
    lines.push(plain(5, "Drinfeld relation on K_<=3 incl. vacuum closed form, r <= 2", &[&r4]));

    let s6 = session(2, 3, 2);
    let r6 = verify(Relation::R6, &s6).unwrap();
    lines.push(if r6.passed {
        plain(6, "q-Heisenberg display, n <= 2, K_<=3, r <= 2", &[&r6])
    } else {
        match heisenberg_deviation(&r6) {
            Ok(()) => Line {
                n: 6,
                verdict: Verdict::Documented("commutator is n times the display; n = 1 holds".into()),
                text: format!("q-Heisenberg display, n <= 2, K_<=3, r <= 2 [R6 {}]", counts(&r6)),
            },
            Err(e) => Line {
                n: 6,
                verdict: Verdict::Fail,
                text: format!("q-Heisenberg display [{e}]"),
            },
        }
    });

    let s7 = session(2, 4, 2);
    let r7 = verify(Relation::R7, &s7).unwrap();
    lines.push(if r7.passed {
        plain(7, "unit class eigenvector, D = 4, k <= 2, r <= 2", &[&r7])
    } else {
        match eigenvalue_deviation(&r7) {
            Ok(()) => Line {
                n: 7,
                verdict: Verdict::Documented(
                    "eigenvalue one and vanishing hold; framing eigenvalue is -((-1)^r t_1..t_r)^k".into(),
                ),
                text: format!("unit class eigenvector, D = 4, k <= 2, r <= 2 [R7 {}]", counts(&r7)),
            },
            Err(e) => Line {
                n: 7,
                verdict: Verdict::Fail,
                text: format!("unit class eigenvector [{e}]"),
            },
        }
    });

    let s8 = session(2, 3, 2);
    let r8 = verify(Relation::R8, &s8).unwrap();
    let variants: Vec<String> = r8
        .variants
        .iter()
        .map(|v| format!("{} {}", v.name, if v.passed { "pass" } else { "fail" }))
        .collect();
    let a_ok = r8.cases_of(None).all(|c| c.status.is_pass());
    lines.push(if r8.passed {
        plain(8, &format!("a_k and b_k as shuffle elements; passing variant(s): {}", r8.passing_variants().join(", ")), &[&r8])
    } else {
        match b_deviation(&r8, &s8) {
            Ok(()) => Line {
                n: 8,
                verdict: Verdict::Documented("a_k holds; b_k equals q1^k times the stated side for lagrangian and relative".into()),
                text: format!(
                    "a_k {} ; b_k variants: {} [R8 {}]",
                    if a_ok { "pass" } else { "fail" },
                    variants.join(", "),
                    counts(&r8)
                ),
            },
            Err(e) => Line {
                n: 8,
                verdict: Verdict::Fail,
                text: format!("a_k, b_k [{e}]"),
            },
        }
    });

    let s9 = session(1, 0, 3);
    lines.push(plain(9, "phi(A_k), phi(B_k), phi(P_k0) for k <= 3; alpha_k, beta_k recovered for k <= 3", &[&verify(Relation::R9, &s9).unwrap()]));

    let s10 = session(1, 3, 3);
    lines.push(plain(10, "wheel conditions for P_{k,d} (k <= 3, |d| <= 3), A_k, B_k (k <= 3)", &[&verify(Relation::R1, &s10).unwrap()]));

    let s11a = session(2, 3, 2);
    let s11b = session(2, 2, 2);
    lines.push(plain(
        11,
        "homomorphism / opposite (d <= 3) and power-sum commutator (n, k <= 2, d <= 2), r <= 2",
        &[&verify(Relation::R2, &s11a).unwrap(), &verify(Relation::R5, &s11b).unwrap()],
    ));

    let s12 = Session::default();
    let outcomes: Vec<DeterminismOutcome> = Relation::ALL.into_iter().map(|r| determinism(r, &s12).unwrap()).collect();
    let bad: Vec<String> = outcomes.iter().filter(|o| !o.ok()).map(|o| format!("{}: {:?}", o.relation, o)).collect();
    lines.push(Line {
        n: 12,
        verdict: if bad.is_empty() { Verdict::Pass } else { Verdict::Fail },
        text: format!(
            "byte-identical repeated reports and randomized = exact statuses on R1..R12 (r <= 2, d <= 3, k <= 2){}",
            if bad.is_empty() { String::new() } else { format!(" [{}]", bad.join("; ")) }
        ),
    });

    let mut unexpected = 0;
    for l in &lines {
        match &l.verdict {
            Verdict::Pass => println!("criterion {:>2}: PASS  {}", l.n, l.text),
            Verdict::Fail => {
                unexpected += 1;
                println!("criterion {:>2}: FAIL  {}", l.n, l.text)
            }
            Verdict::Documented(why) => println!("criterion {:>2}: FAIL  {} (as stated; confirmed deviation: {why})", l.n, l.text),
        }
    }
    println!("acceptance finished in {:.1} s", start.elapsed().as_secs_f64());
    if unexpected == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
