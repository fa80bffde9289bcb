//! Small values recomputed by independent means: brute force enumeration,
//! hook lengths, direct expansion of the defining formulas.

use std::collections::BTreeSet;

use itertools::Itertools;
use kshuffle::characters::*;
use kshuffle::kaction::*;
use kshuffle::partitions::*;
use kshuffle::scalars::*;
use kshuffle::shuffle::*;

fn rf(s: &str) -> RationalFn {
    parse_ratfn(s).unwrap()
}

fn mp(s: &str) -> MultiPartition {
    MultiPartition::parse(s).unwrap()
}

fn assert_rf(got: &RationalFn, want: &str) {
    assert!(got.eq_exact(&rf(want)), "got {got}, want {want}");
}

fn partitions_brute(n: u32, max: u32) -> Vec<Vec<u32>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for first in (1..=n.min(max)).rev() {
        for mut rest in partitions_brute(n - first, first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

fn multipartitions_brute(r: usize, d: u32) -> usize {
    // number of ways to split d into r ordered parts, each part a partition
    (0..r).fold(vec![1usize; 1], |acc, _| {
        let mut next = vec![0usize; d as usize + 1];
        for (a, &ca) in acc.iter().enumerate() {
            for b in 0..=(d as usize - a) {
                next[a + b] += ca * partitions_brute(b as u32, b as u32).len();
            }
        }
        next
    })[d as usize]
}

#[test]
fn multipartition_counts() {
    for r in 1..=3 {
        for d in 0..=6 {
            assert_eq!(enumerate_multipartitions(r, d).len(), multipartitions_brute(r, d), "r={r} d={d}");
        }
    }
    let three: BTreeSet<String> = enumerate_multipartitions(1, 3).iter().map(|m| m.to_string()).collect();
    assert_eq!(three, ["(3)", "(2,1)", "(1,1,1)"].iter().map(|s| s.to_string()).collect());
}

fn hook_count(rows: &[u32]) -> u64 {
    let n: u32 = rows.iter().sum();
    let cols = |x: u32| rows.iter().filter(|&&r| r > x).count() as u32;
    let mut hooks = 1u64;
    for (y, &row) in rows.iter().enumerate() {
        for x in 0..row {
            hooks *= (row - x + cols(x) - y as u32 - 1) as u64;
        }
    }
    (1..=n as u64).product::<u64>() / hooks
}

/// Orders of the skew boxes in which every prefix, added to the smaller
/// shape, is again a multipartition.
fn syt_brute(lower: &MultiPartition, upper: &MultiPartition) -> usize {
    let cells = upper.skew_boxes(lower);
    cells
        .iter()
        .permutations(cells.len())
        .filter(|order| {
            let mut cur = lower.clone();
            order.iter().all(|b| match cur.add_box(b) {
                Some(next) => {
                    cur = next;
                    true
                }
                None => false,
            })
        })
        .count()
}

#[test]
fn tableau_counts() {
    for n in 1..=6 {
        for rows in partitions_brute(n, n) {
            let shape = MultiPartition::new(vec![Partition::new(rows.clone())]);
            let got = enumerate_syt(&MultiPartition::empty(1), &shape).len() as u64;
            assert_eq!(got, hook_count(&rows), "{shape}");
        }
    }
    assert_eq!(enumerate_syt(&mp("()"), &mp("(2,1)")).len(), 2);
    assert_eq!(enumerate_syt(&mp("(1)"), &mp("(2,1)")).len(), 2);
    for (lo, hi) in [("(1)|()", "(2,1)|(1)"), ("()|(1)", "(2)|(2,1)"), ("(1)|(1)", "(3,1)|(1,1)")] {
        assert_eq!(enumerate_syt(&mp(lo), &mp(hi)).len(), syt_brute(&mp(lo), &mp(hi)), "{hi}/{lo}");
    }
}

#[test]
fn corners_of_a_box() {
    let l = mp("(1)");
    let weights = |cs: Vec<CornerPoint>| -> BTreeSet<String> { cs.iter().map(|c| c.weight().to_string()).collect() };
    let expect = |pts: &[(i32, i32)]| -> BTreeSet<String> { pts.iter().map(|&(x, y)| lattice_weight(1, x, y).to_string()).collect() };
    assert_eq!(weights(l.inner_corners()), expect(&[(1, 0), (0, 1)]));
    assert_eq!(weights(l.outer_corners()), expect(&[(1, 1)]));
}

#[test]
fn characters_of_one_box() {
    let one = mp("(1)");
    for m in [WMethod::Gamma, WMethod::Corners] {
        assert_eq!(char_w(&one, m).poly(), &parse_poly("t1^-1*(q1 + q2 - q1*q2)").unwrap());
    }
    let e = char_e(&mp("()"), &one, EMethod::Tautological);
    assert_eq!(e.poly(), &parse_poly("q1^-1*q2^-1").unwrap());
    assert_rf(&g_lambda(&one).unwrap(), "(1 - q1)*(1 - q2)");
    assert_eq!(char_tangent(&one).poly(), &parse_poly("q1^-1 + q2^-1").unwrap());
}

#[test]
fn tangent_and_diagonal_ext_have_2rd_weights() {
    for r in 1..=2 {
        for d in 0..=3 {
            for l in enumerate_multipartitions(r, d) {
                let want = 2 * r as i64 * d as i64;
                let tan = char_tangent(&l);
                assert_eq!(tan.weights().iter().map(|w| w.1).sum::<i64>(), want, "{l}");
                assert!(tan.weights().iter().all(|w| w.1 > 0));
                assert_eq!(tan.trivial_multiplicity(), 0);
                let diag = char_e(&l, &l, EMethod::Tautological);
                assert_eq!(diag.weights().iter().map(|w| w.1).sum::<i64>(), want, "{l}");
            }
        }
    }
}

#[test]
fn fixed_pairs_of_the_flag_space() {
    let pairs = |r, d, k| -> Vec<(String, String)> {
        vk_fixed_pairs(r, d, k).iter().map(|(a, b)| (a.to_string(), b.to_string())).collect()
    };
    assert_eq!(pairs(1, 0, 1), vec![("()".into(), "(1)".into())]);
    assert_eq!(pairs(1, 0, 2), vec![("()".into(), "(2)".into())]);
    for r in 1..=2 {
        for (d, k) in [(1, 1), (2, 1), (1, 2), (2, 2)] {
            for (l, m) in vk_fixed_pairs(r, d, k) {
                assert!(!lambda_class(&char_tv(&l, &m).unwrap(), &RationalFn::one()).unwrap().is_zero());
            }
        }
    }
}

#[test]
fn m_polynomials() {
    for d in -2..=2 {
        assert_eq!(build_m(1, d), LaurentPoly::mono(z(1).pow(d)));
    }
    assert_eq!(build_m(2, 0), parse_poly("1 + q1*q2*z2*z1^-1").unwrap());
    assert_eq!(build_m(2, 1), parse_poly("z2").unwrap());
}

fn omega_of(i: usize, j: usize) -> RationalFn {
    omega(&RationalFn::mono(z(i).mul(&z(j).inv())))
}

#[test]
fn product_of_two_constants() {
    let p = shuffle_mul(&ShuffleElement::z_pow(0), &ShuffleElement::z_pow(0)).unwrap();
    assert!(p.sym().eq_exact(&omega_of(1, 2).add(&omega_of(2, 1))));
}

#[test]
fn triple_product_closed_form() {
    let (n1, n2, n3) = (1, 0, -1);
    let lhs = shuffle_mul(
        &shuffle_mul(&ShuffleElement::z_pow(n1), &ShuffleElement::z_pow(n2)).unwrap(),
        &ShuffleElement::z_pow(n3),
    )
    .unwrap();
    let mut rhs = RationalFn::zero();
    for perm in (1..=3).permutations(3) {
        let mon = z(perm[0]).pow(n1).mul(&z(perm[1]).pow(n2)).mul(&z(perm[2]).pow(n3));
        let mut term = RationalFn::mono(mon);
        for (a, b) in [(0, 1), (0, 2), (1, 2)] {
            term = term.mul(&omega_of(perm[a], perm[b]));
        }
        rhs = rhs.add(&term);
    }
    assert!(lhs.sym().eq_exact(&rhs));
}

#[test]
fn x_of_one_in_two_variables() {
    let x = build_x(&LaurentPoly::one(), 2).unwrap();
    let one = |i: usize, j: usize| {
        let den = &LaurentPoly::one() - &LaurentPoly::mono(z(j).mul(&q()).mul(&z(i).inv()));
        omega_of(i, j).div(&RationalFn::from_poly(den)).unwrap()
    };
    assert!(x.sym().eq_exact(&one(1, 2).add(&one(2, 1))));
}

#[test]
fn wheel_sweep() {
    for k in 1..=3 {
        for e in (0..k).map(|_| -1..=1).multi_cartesian_product() {
            if e.iter().map(|x: &i32| x.abs()).sum::<i32>() > 2 {
                continue;
            }
            let m = (0..k).fold(Monomial::one(), |acc, i| acc.mul(&z(i + 1).pow(e[i])));
            assert!(wheel_check(&build_x(&LaurentPoly::mono(m.clone()), k).unwrap()).unwrap(), "{m} k={k}");
        }
    }
    for kind in [AbKind::A, AbKind::B] {
        assert!(wheel_check(&build_ab(kind, 2).unwrap()).unwrap());
    }
}

fn block(spec: OpSpec, sign: Sign, d: i32) -> OperatorMatrix {
    op_matrix(&spec, sign, 1, d, &ActionOptions::default()).unwrap()
}

#[test]
fn single_box_matrix_coefficients() {
    let x = |sign, d| block(OpSpec::X { m: LaurentPoly::one(), k: 1 }, sign, d);
    let plus = x(Sign::Plus, 0);
    assert_eq!(plus.nnz(), 1);
    assert_rf(&plus.get(&mp("()"), &mp("(1)")), "t1");
    assert_rf(&x(Sign::Minus, 1).get(&mp("(1)"), &mp("()")), "(1 - q1)*(1 - q2)");
    let a = block(OpSpec::GeoA { k: 1 }, Sign::Plus, 0).get(&mp("()"), &mp("(1)"));
    assert_rf(&a, "(1 - q1*q2)/((1 - q1)*(1 - q2))");
    assert_rf(&block(OpSpec::A { k: 1 }, Sign::Plus, 0).get(&mp("()"), &mp("(1)")), "(1 - q1*q2)/((1 - q1)*(1 - q2))");
    let res = residue_action(&ShuffleElement::z_pow(0), Sign::Plus, &mp("()")).unwrap();
    assert_rf(&res.get(&mp("(1)")), "t1");
}

#[test]
fn vacuum_commutator() {
    let op = |sign| Operator::new(OpSpec::X { m: LaurentPoly::one(), k: 1 }, sign, 1, ActionOptions::default());
    let c = Operator::commutator_at(&op(Sign::Plus), &op(Sign::Minus), 0).unwrap();
    assert_rf(&c.get(&mp("()"), &mp("()")), "-t1*(1 - q1)*(1 - q2)");
}

#[test]
fn baranovsky_is_p_k0() {
    for r in 1..=2 {
        for k in 1..=2 {
            for sign in [Sign::Plus, Sign::Minus] {
                for d in 0..=2 {
                    let opts = ActionOptions::default();
                    let b = op_matrix(&OpSpec::Baranovsky { k }, sign, r, d, &opts).unwrap();
                    let p = op_matrix(&OpSpec::P { k, d: 0 }, sign, r, d, &opts).unwrap();
                    assert!(b.first_difference(&p, EqMode::Exact).unwrap().is_none(), "r={r} k={k} {sign} d={d}");
                }
            }
        }
    }
}
