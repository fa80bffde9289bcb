use std::collections::BTreeMap;

use num_integer::Integer;
use num_traits::{One, Zero};

use super::monomial::Monomial;
use super::poly::{Coeff, LaurentPoly};
use super::ratfn::RationalFn;

/// A Laurent polynomial split as `scalar * monomial * prod factor^mult`,
/// where each factor is normalized (see [`normalize`]).
#[derive(Clone, Debug)]
pub struct Split {
    pub scalar: Coeff,
    pub monomial: Monomial,
    pub factors: Vec<(LaurentPoly, i32)>,
}

/// Normalize a nonzero Laurent polynomial.
///
/// The normalized factors are honest polynomials with no monomial content and
/// leading coefficient 1. Binomials `M^n - 1` and `M^n + 1` with `M` primitive
/// are split into cyclotomic pieces `Phi_d(M)`, which are irreducible.
pub fn normalize(p: &LaurentPoly) -> Split {
    assert!(!p.is_zero(), "normalizing the zero polynomial");
    let shift = p.min_monomial();
    let shifted = p.mul_monomial(&shift.inv());
    let lc = shifted.leading().unwrap().1.clone();
    let monic = shifted.scale(&lc.recip());
    let mut out = Split {
        scalar: lc,
        monomial: shift,
        factors: Vec::new(),
    };
    if monic.is_one() {
        return out;
    }
    if let Some((base, pieces)) = split_binomial(&monic) {
        out.monomial = out.monomial.mul(&base);
        for piece in pieces {
            let s = piece.min_monomial();
            let q = piece.mul_monomial(&s.inv());
            let c = q.leading().unwrap().1.clone();
            out.scalar *= &c;
            out.monomial = out.monomial.mul(&s);
            out.factors.push((q.scale(&c.recip()), 1));
        }
        return out;
    }
    out.factors.push((monic, 1));
    out
}

/// For a monic binomial `A + b*B` with `b = +-1`, return its cyclotomic pieces.
fn split_binomial(monic: &LaurentPoly) -> Option<(Monomial, Vec<LaurentPoly>)> {
    let terms = monic.terms();
    if terms.len() != 2 {
        return None;
    }
    let b = &terms[1].1;
    let sign_plus = if *b == -Coeff::one() {
        false
    } else if b.is_one() {
        true
    } else {
        return None;
    };
    // monic = B * (M -+ 1) with M = A / B.
    let m = terms[0].0.div(&terms[1].0);
    let (n, root) = primitive_root(&m);
    let ds: Vec<usize> = if sign_plus {
        // M + 1 = (M^2 - 1) / (M - 1)
        divisors(2 * n).into_iter().filter(|d| n % d != 0).collect()
    } else {
        divisors(n)
    };
    if ds.len() == 1 {
        return None;
    }
    let pieces = ds.into_iter()
            .map(|d| {
                let coeffs = cyclotomic(d);
                LaurentPoly::from_terms(
                    coeffs
                        .iter()
                        .enumerate()
                        .filter(|(_, c)| **c != 0)
                        .map(|(i, c)| (root.pow(i as i32), super::poly::int(*c))),
                )
            })
            .collect();
    Some((terms[1].0.clone(), pieces))
}

/// Write `m = root^n` with `root` primitive. Integral q1 exponents are measured
/// in whole units so that integer-exponent factors never split into half powers.
fn primitive_root(m: &Monomial) -> (usize, Monomial) {
    let q1raw = m.slot(0);
    let q1_unit = if q1raw % 2 == 0 { q1raw / 2 } else { q1raw };
    let mut g: i64 = q1_unit.unsigned_abs() as i64;
    for (i, e) in m.iter_slots() {
        if i != 0 {
            g = g.gcd(&(e as i64));
        }
    }
    let g = g.max(1);
    let mut root = Monomial::one();
    for (i, e) in m.iter_slots() {
        if i != 0 {
            root.set_slot(i, e / g as i32);
        }
    }
    let q1_root = q1_unit / g as i32;
    root.set_slot(0, if q1raw % 2 == 0 { 2 * q1_root } else { q1_root });
    (g as usize, root)
}

fn divisors(n: usize) -> Vec<usize> {
    (1..=n).filter(|d| n % d == 0).collect()
}

/// Integer coefficients of the cyclotomic polynomial `Phi_d`, lowest first.
pub fn cyclotomic(d: usize) -> Vec<i64> {
    // x^d - 1 divided by Phi_e for every proper divisor e of d.
    let mut num = vec![0i64; d + 1];
    num[0] = -1;
    num[d] = 1;
    for e in divisors(d) {
        if e == d {
            continue;
        }
        num = poly_div_monic(&num, &cyclotomic(e));
    }
    num
}

fn poly_div_monic(a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut rem = a.to_vec();
    let db = b.len() - 1;
    let dq = rem.len() - 1 - db;
    let mut q = vec![0i64; dq + 1];
    for i in (0..=dq).rev() {
        let c = rem[i + db];
        q[i] = c;
        for (j, bj) in b.iter().enumerate() {
            rem[i + j] -= c * bj;
        }
    }
    debug_assert!(rem.iter().all(|x| *x == 0));
    q
}

/// A product `scalar * monomial * prod factor^e` with normalized factors and
/// nonzero integer exponents. Multiplication cancels identical factors, so
/// ratios like `g_lambda / g_mu` stay small.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Product {
    pub scalar: Coeff,
    pub monomial: Monomial,
    pub factors: BTreeMap<LaurentPoly, i32>,
}

impl Product {
    pub fn one() -> Self {
        Product {
            scalar: Coeff::one(),
            monomial: Monomial::one(),
            factors: BTreeMap::new(),
        }
    }

    pub fn zero() -> Self {
        Product {
            scalar: Coeff::zero(),
            monomial: Monomial::one(),
            factors: BTreeMap::new(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.scalar.is_zero()
    }

    pub fn scalar(c: Coeff) -> Self {
        Product {
            scalar: c,
            ..Product::one()
        }
    }

    pub fn monomial(m: Monomial) -> Self {
        Product {
            monomial: m,
            ..Product::one()
        }
    }

    /// `p^e` for a nonzero Laurent polynomial `p`.
    pub fn from_poly_pow(p: &LaurentPoly, e: i32) -> Self {
        if p.is_zero() {
            assert!(e > 0, "zero raised to a non-positive power");
            return Product::zero();
        }
        let s = normalize(p);
        let mut out = Product {
            scalar: num_traits::pow(s.scalar.clone(), e.unsigned_abs() as usize),
            monomial: s.monomial.pow(e),
            factors: BTreeMap::new(),
        };
        if e < 0 {
            out.scalar = out.scalar.recip();
        }
        for (f, m) in s.factors {
            out.push_factor(f, m * e);
        }
        out
    }

    pub fn from_poly(p: &LaurentPoly) -> Self {
        Self::from_poly_pow(p, 1)
    }

    fn push_factor(&mut self, f: LaurentPoly, e: i32) {
        if e == 0 {
            return;
        }
        match self.factors.get_mut(&f) {
            Some(v) => {
                *v += e;
                if *v == 0 {
                    self.factors.remove(&f);
                }
            }
            None => {
                self.factors.insert(f, e);
            }
        }
    }

    pub fn mul(&self, other: &Product) -> Product {
        if self.is_zero() || other.is_zero() {
            return Product::zero();
        }
        let mut out = self.clone();
        out.scalar *= &other.scalar;
        out.monomial = out.monomial.mul(&other.monomial);
        for (f, e) in &other.factors {
            out.push_factor(f.clone(), *e);
        }
        out
    }

    pub fn inv(&self) -> Product {
        assert!(!self.is_zero(), "inverting zero");
        Product {
            scalar: self.scalar.recip(),
            monomial: self.monomial.inv(),
            factors: self.factors.iter().map(|(f, e)| (f.clone(), -e)).collect(),
        }
    }

    pub fn div(&self, other: &Product) -> Product {
        self.mul(&other.inv())
    }

    pub fn pow(&self, n: i32) -> Product {
        if n == 0 {
            return Product::one();
        }
        let base = if n < 0 { self.inv() } else { self.clone() };
        let k = n.unsigned_abs();
        Product {
            scalar: num_traits::pow(base.scalar.clone(), k as usize),
            monomial: base.monomial.pow(k as i32),
            factors: base
                .factors
                .iter()
                .map(|(f, e)| (f.clone(), e * k as i32))
                .collect(),
        }
    }

    pub fn to_ratfn(&self) -> RationalFn {
        if self.is_zero() {
            return RationalFn::zero();
        }
        let mut num = LaurentPoly::term(self.monomial.clone(), self.scalar.clone());
        let mut den = Vec::new();
        for (f, e) in &self.factors {
            if *e > 0 {
                num = &num * &f.pow(*e as u32);
            } else {
                den.push((f.clone(), (-e) as u32));
            }
        }
        RationalFn::from_parts_normalized(num, den)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::monomial::Symbol;

    #[test]
    fn cyclotomic_small() {
        assert_eq!(cyclotomic(1), vec![-1, 1]);
        assert_eq!(cyclotomic(2), vec![1, 1]);
        assert_eq!(cyclotomic(3), vec![1, 1, 1]);
        assert_eq!(cyclotomic(4), vec![1, 0, 1]);
        assert_eq!(cyclotomic(6), vec![1, -1, 1]);
    }

    #[test]
    fn binomial_split_round_trip() {
        let q1 = LaurentPoly::var(Symbol::Q1);
        let q2 = LaurentPoly::var(Symbol::Q2);
        let one = LaurentPoly::one();
        for p in [
            &one - &q1.pow(6),
            &q1.pow(2) + &q2.pow(2),
            &one - &(&q1 * &q2),
            (&one - &q1) * (&one + &q2),
        ] {
            let s = normalize(&p);
            let mut back = LaurentPoly::term(s.monomial.clone(), s.scalar.clone());
            for (f, e) in &s.factors {
                back = &back * &f.pow(*e as u32);
            }
            assert_eq!(back, p);
        }
        let s = normalize(&(&one - &q1.pow(6)));
        assert_eq!(s.factors.len(), 4);
    }

    #[test]
    fn integer_q1_never_splits_into_half_powers() {
        let q1 = LaurentPoly::var(Symbol::Q1);
        let s = normalize(&(&LaurentPoly::one() - &q1));
        assert_eq!(s.factors.len(), 1);
        assert!(!s.factors[0].0.has_half_q1());
    }

    #[test]
    fn product_cancels() {
        let q1 = LaurentPoly::var(Symbol::Q1);
        let p = &LaurentPoly::one() - &q1;
        let a = Product::from_poly(&p);
        let b = Product::from_poly_pow(&(&q1 - &LaurentPoly::one()), -1);
        let c = a.mul(&b);
        assert!(c.factors.is_empty());
        assert_eq!(c.scalar, -Coeff::one());
    }
}
