use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rustc_hash::FxHashMap;

use super::monomial::{Monomial, Symbol};

pub type Coeff = BigRational;

pub fn int(n: i64) -> Coeff {
    BigRational::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> Coeff {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Sparse Laurent polynomial with exact rational coefficients.
///
/// Terms are kept sorted by decreasing monomial (graded lex), without zero
/// coefficients, so structural equality is mathematical equality.
#[derive(Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct LaurentPoly {
    terms: Vec<(Monomial, Coeff)>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Coeff::one())
    }

    pub fn constant(c: Coeff) -> Self {
        Self::term(Monomial::one(), c)
    }

    pub fn from_int(n: i64) -> Self {
        Self::constant(int(n))
    }

    pub fn term(m: Monomial, c: Coeff) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        LaurentPoly { terms: vec![(m, c)] }
    }

    pub fn mono(m: Monomial) -> Self {
        Self::term(m, Coeff::one())
    }

    pub fn var(s: Symbol) -> Self {
        Self::mono(Monomial::var(s))
    }

    /// `1 - c*m`.
    pub fn one_minus(c: Coeff, m: Monomial) -> Self {
        Self::one() - Self::term(m, c)
    }

    /// Build from arbitrary (possibly repeated, possibly zero) terms.
    pub fn from_terms<I: IntoIterator<Item = (Monomial, Coeff)>>(it: I) -> Self {
        let mut acc: FxHashMap<Monomial, Coeff> = FxHashMap::default();
        for (m, c) in it {
            if c.is_zero() {
                continue;
            }
            let e = acc.entry(m).or_insert_with(Coeff::zero);
            *e += c;
        }
        Self::from_map(acc)
    }

    fn from_map(acc: FxHashMap<Monomial, Coeff>) -> Self {
        let mut terms: Vec<_> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_unstable_by(|a, b| b.0.cmp(&a.0));
        LaurentPoly { terms }
    }

    /// Trusted constructor: terms already sorted decreasing, unique, nonzero.
    pub(crate) fn from_sorted(terms: Vec<(Monomial, Coeff)>) -> Self {
        debug_assert!(terms.windows(2).all(|w| w[0].0 > w[1].0));
        debug_assert!(terms.iter().all(|(_, c)| !c.is_zero()));
        LaurentPoly { terms }
    }

    pub fn terms(&self) -> &[(Monomial, Coeff)] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<(Monomial, Coeff)> {
        self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one() && self.terms[0].1.is_one()
    }

    pub fn as_constant(&self) -> Option<Coeff> {
        match self.terms.as_slice() {
            [] => Some(Coeff::zero()),
            [(m, c)] if m.is_one() => Some(c.clone()),
            _ => None,
        }
    }

    pub fn as_monomial(&self) -> Option<(&Monomial, &Coeff)> {
        match self.terms.as_slice() {
            [(m, c)] => Some((m, c)),
            _ => None,
        }
    }

    pub fn leading(&self) -> Option<&(Monomial, Coeff)> {
        self.terms.first()
    }

    pub fn trailing(&self) -> Option<&(Monomial, Coeff)> {
        self.terms.last()
    }

    pub fn coeff_of(&self, m: &Monomial) -> Coeff {
        self.terms
            .binary_search_by(|(x, _)| m.cmp(x))
            .map(|i| self.terms[i].1.clone())
            .unwrap_or_else(|_| Coeff::zero())
    }

    /// Componentwise minimum exponent over all terms.
    pub fn min_monomial(&self) -> Monomial {
        let mut it = self.terms.iter();
        match it.next() {
            None => Monomial::one(),
            Some((m0, _)) => it.fold(m0.clone(), |acc, (m, _)| acc.meet(m)),
        }
    }

    pub fn scale(&self, c: &Coeff) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        LaurentPoly {
            terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Self {
        LaurentPoly {
            terms: self.terms.iter().map(|(x, c)| (x.mul(m), c.clone())).collect(),
        }
    }

    pub fn mul_term(&self, m: &Monomial, c: &Coeff) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        LaurentPoly {
            terms: self.terms.iter().map(|(x, y)| (x.mul(m), y * c)).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        let mut base = self.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Invert every monomial.
    pub fn dual(&self) -> Self {
        Self::from_terms(self.terms.iter().map(|(m, c)| (m.inv(), c.clone())))
    }

    pub fn map_monomials<F: Fn(&Monomial) -> Monomial>(&self, f: F) -> Self {
        Self::from_terms(self.terms.iter().map(|(m, c)| (f(m), c.clone())))
    }

    pub fn involves(&self, s: Symbol) -> bool {
        self.terms.iter().any(|(m, _)| m.involves(s))
    }

    pub fn max_aux(&self) -> usize {
        self.terms.iter().map(|(m, _)| m.max_aux()).max().unwrap_or(0)
    }

    pub fn has_half_q1(&self) -> bool {
        self.terms.iter().any(|(m, _)| m.has_half_q1())
    }

    /// Substitute `s -> c * m` for a symbol `s`.
    pub fn subs_monomial(&self, s: Symbol, c: &Coeff, m: &Monomial) -> Self {
        let slot = s.slot();
        Self::from_terms(self.terms.iter().map(|(x, k)| {
            let mut e = x.slot(slot);
            if slot == 0 {
                assert!(e % 2 == 0, "substitution for q1 in a half-integral power");
                e /= 2;
            }
            let mut rest = x.clone();
            rest.set_slot(slot, 0);
            let coef = if e >= 0 {
                k * pow_coeff(c, e as u32)
            } else {
                k / pow_coeff(c, (-e) as u32)
            };
            (rest.mul(&m.pow(e)), coef)
        }))
    }

    /// Simultaneous substitution of several symbols by monomials.
    pub fn subs_monomials(&self, bindings: &[(Symbol, Monomial)]) -> Self {
        Self::from_terms(self.terms.iter().map(|(x, k)| {
            let mut rest = x.clone();
            for (s, _) in bindings {
                rest.set_slot(s.slot(), 0);
            }
            for (s, m) in bindings {
                let e = x.raw_exp(*s);
                if e == 0 {
                    continue;
                }
                let e = if *s == Symbol::Q1 {
                    assert!(e % 2 == 0, "half-integral q1 in monomial substitution");
                    e / 2
                } else {
                    e
                };
                rest = rest.mul(&m.pow(e));
            }
            (rest, k.clone())
        }))
    }

    /// Evaluate at a point given per-slot values (for `q1` the value of
    /// `q1^(1/2)`).
    pub fn eval(&self, point: &[Coeff]) -> Coeff {
        let mut total = Coeff::zero();
        for (m, c) in &self.terms {
            let mut v = c.clone();
            for (i, e) in m.iter_slots() {
                let x = &point[i];
                if e >= 0 {
                    v *= pow_coeff(x, e as u32);
                } else {
                    v /= pow_coeff(x, (-e) as u32);
                }
            }
            total += v;
        }
        total
    }

    /// Exact quotient `self / g`, or `None` when `g` does not divide `self`
    /// in the Laurent ring.
    pub fn div_exact(&self, g: &LaurentPoly) -> Option<LaurentPoly> {
        assert!(!g.is_zero(), "division by the zero polynomial");
        if self.is_zero() {
            return Some(Self::zero());
        }
        if let Some((m, c)) = g.as_monomial() {
            let inv = c.recip();
            return Some(self.mul_term(&m.inv(), &inv));
        }
        // Shift both to honest polynomials, then divide by leading terms.
        let fs = self.min_monomial();
        let gs = g.min_monomial();
        let f = self.mul_monomial(&fs.inv());
        let gp = g.mul_monomial(&gs.inv());
        let (glm, glc) = gp.terms[0].clone();
        let mut rem: std::collections::BTreeMap<Monomial, Coeff> = f.terms.into_iter().collect();
        let mut quot: Vec<(Monomial, Coeff)> = Vec::new();
        while let Some((lm, lc)) = rem.iter().next_back().map(|(m, c)| (m.clone(), c.clone())) {
            if !lm.divisible_by(&glm) {
                return None;
            }
            let tm = lm.div(&glm);
            let tc = &lc / &glc;
            for (m, c) in &gp.terms {
                let key = m.mul(&tm);
                let delta = c * &tc;
                let remove = match rem.get_mut(&key) {
                    Some(v) => {
                        *v -= &delta;
                        v.is_zero()
                    }
                    None => {
                        rem.insert(key.clone(), -delta);
                        false
                    }
                };
                if remove {
                    rem.remove(&key);
                }
            }
            quot.push((tm, tc));
        }
        let shift = fs.div(&gs);
        Some(LaurentPoly::from_sorted(quot).mul_monomial(&shift))
    }

    /// Number of distinct monomials counted with (integer) multiplicity, for
    /// characters with integer coefficients.
    pub fn multiplicity_sum(&self) -> BigInt {
        self.terms
            .iter()
            .map(|(_, c)| {
                assert!(c.is_integer(), "non-integral multiplicity");
                c.to_integer()
            })
            .sum()
    }

    pub fn all_coeffs_positive(&self) -> bool {
        self.terms.iter().all(|(_, c)| c.is_positive())
    }
}

pub(crate) fn pow_coeff(c: &Coeff, e: u32) -> Coeff {
    num_traits::pow(c.clone(), e as usize)
}

impl Monomial {
    /// Iterate `(slot, raw exponent)` over nonzero slots.
    pub fn iter_slots(&self) -> impl Iterator<Item = (usize, i32)> + '_ {
        (0..self.len_slots())
            .map(move |i| (i, self.slot(i)))
            .filter(|(_, e)| *e != 0)
    }
}

fn merge_add(a: &[(Monomial, Coeff)], b: &[(Monomial, Coeff)], negate_b: bool) -> LaurentPoly {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            std::cmp::Ordering::Greater => {
                out.push(a[i].clone());
                i += 1;
            }
            std::cmp::Ordering::Less => {
                let c = if negate_b { -&b[j].1 } else { b[j].1.clone() };
                out.push((b[j].0.clone(), c));
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                let c = if negate_b { &a[i].1 - &b[j].1 } else { &a[i].1 + &b[j].1 };
                if !c.is_zero() {
                    out.push((a[i].0.clone(), c));
                }
                i += 1;
                j += 1;
            }
        }
    }
    out.extend(a[i..].iter().cloned());
    for t in &b[j..] {
        let c = if negate_b { -&t.1 } else { t.1.clone() };
        out.push((t.0.clone(), c));
    }
    LaurentPoly { terms: out }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        merge_add(&self.terms, &rhs.terms, false)
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        merge_add(&self.terms, &rhs.terms, true)
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        if self.is_zero() || rhs.is_zero() {
            return LaurentPoly::zero();
        }
        if let Some((m, c)) = rhs.as_monomial() {
            return self.mul_term(m, c);
        }
        if let Some((m, c)) = self.as_monomial() {
            return rhs.mul_term(m, c);
        }
        let mut acc: FxHashMap<Monomial, Coeff> =
            FxHashMap::with_capacity_and_hasher(self.len() * rhs.len(), Default::default());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                let c = ca * cb;
                match acc.get_mut(&ma.mul(mb)) {
                    Some(v) => *v += c,
                    None => {
                        acc.insert(ma.mul(mb), c);
                    }
                }
            }
        }
        LaurentPoly::from_map(acc)
    }
}

macro_rules! owned_ops {
    ($tr:ident, $f:ident) => {
        impl $tr for LaurentPoly {
            type Output = LaurentPoly;
            fn $f(self, rhs: LaurentPoly) -> LaurentPoly {
                (&self).$f(&rhs)
            }
        }
        impl $tr<&LaurentPoly> for LaurentPoly {
            type Output = LaurentPoly;
            fn $f(self, rhs: &LaurentPoly) -> LaurentPoly {
                (&self).$f(rhs)
            }
        }
    };
}
owned_ops!(Add, add);
owned_ops!(Sub, sub);
owned_ops!(Mul, mul);

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        -&self
    }
}

impl std::iter::Sum for LaurentPoly {
    fn sum<I: Iterator<Item = LaurentPoly>>(iter: I) -> Self {
        LaurentPoly::from_terms(iter.flat_map(|p| p.terms.into_iter()))
    }
}

pub(crate) fn fmt_coeff(c: &Coeff) -> String {
    if c.is_integer() {
        c.to_integer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if i == 0 {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            if m.is_one() {
                write!(f, "{}", fmt_coeff(&a))?;
            } else if a.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{}*{m}", fmt_coeff(&a))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q1() -> LaurentPoly {
        LaurentPoly::var(Symbol::Q1)
    }
    fn q2() -> LaurentPoly {
        LaurentPoly::var(Symbol::Q2)
    }
    fn t1() -> LaurentPoly {
        LaurentPoly::var(Symbol::t(1))
    }

    #[test]
    fn additive_cancellation() {
        let a = &q1() + &t1();
        let b = &a - &t1();
        assert_eq!(b, q1());
    }

    #[test]
    fn zero_absorbs() {
        let p = &q1() + &q2();
        assert!((&LaurentPoly::zero() * &p).is_zero());
    }

    #[test]
    fn exact_division() {
        let one = LaurentPoly::one();
        let f = &one - &q1().pow(3);
        let g = &one - &q1();
        let h = f.div_exact(&g).unwrap();
        assert_eq!(h, &(&one + &q1()) + &q1().pow(2));
        assert!(g.div_exact(&(&one + &q2())).is_none());
    }

    #[test]
    fn laurent_division() {
        let one = LaurentPoly::one();
        let x = q1().mul_monomial(&Monomial::var(Symbol::t(1)).inv());
        let f = (&one - &x) * (&q2() + &t1());
        assert_eq!(f.div_exact(&(&one - &x)).unwrap(), &q2() + &t1());
    }

    #[test]
    fn substitution() {
        let z1 = LaurentPoly::var(Symbol::aux(1));
        let z2 = LaurentPoly::var(Symbol::aux(2));
        let f = &z1 - &z2;
        let m = Monomial::var(Symbol::Q1).mul(&Monomial::var(Symbol::aux(2)));
        let g = f.subs_monomial(Symbol::aux(1), &Coeff::one(), &m);
        assert_eq!(g, (&q1() - &LaurentPoly::one()) * z2);
    }
}
