use std::fmt;
use std::sync::atomic::{AtomicU8, Ordering};

use num_traits::{One, Zero};

use super::factor::Product;
use super::monomial::{Monomial, Symbol};
use super::poly::{Coeff, LaurentPoly};
use super::ScalarError;

/// When to cancel denominator factors against the numerator automatically.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GcdMode {
    On,
    Off,
    /// On when at most six symbols are active in the operands.
    Auto,
}

static GCD_MODE: AtomicU8 = AtomicU8::new(2);

/// Set the process-wide reduction mode. Intended to be called once, when a
/// session is configured; results are equal as field elements either way.
pub fn set_gcd_mode(mode: GcdMode) {
    let v = match mode {
        GcdMode::On => 0,
        GcdMode::Off => 1,
        GcdMode::Auto => 2,
    };
    GCD_MODE.store(v, Ordering::Relaxed);
}

pub fn gcd_mode() -> GcdMode {
    match GCD_MODE.load(Ordering::Relaxed) {
        0 => GcdMode::On,
        1 => GcdMode::Off,
        _ => GcdMode::Auto,
    }
}

const AUTO_SYMBOL_LIMIT: usize = 6;

/// Exact element of the fraction field.
///
/// The numerator is expanded; the denominator is kept as a sorted list of
/// normalized factors (see `factor::normalize`) with positive multiplicities. Any
/// constant and monomial content of the denominator lives in the numerator.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalFn {
    num: LaurentPoly,
    den: Vec<(LaurentPoly, u32)>,
}

impl Default for RationalFn {
    fn default() -> Self {
        RationalFn::zero()
    }
}

impl RationalFn {
    pub fn zero() -> Self {
        RationalFn {
            num: LaurentPoly::zero(),
            den: Vec::new(),
        }
    }

    pub fn one() -> Self {
        Self::from_poly(LaurentPoly::one())
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_poly(LaurentPoly::from_int(n))
    }

    pub fn constant(c: Coeff) -> Self {
        Self::from_poly(LaurentPoly::constant(c))
    }

    pub fn from_poly(p: LaurentPoly) -> Self {
        RationalFn {
            num: p,
            den: Vec::new(),
        }
    }

    pub fn mono(m: Monomial) -> Self {
        Self::from_poly(LaurentPoly::mono(m))
    }

    pub fn var(s: Symbol) -> Self {
        Self::from_poly(LaurentPoly::var(s))
    }

    /// `num / den` for arbitrary nonzero `den`.
    pub fn new(num: LaurentPoly, den: &LaurentPoly) -> Result<Self, ScalarError> {
        if den.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        let d = Product::from_poly(den).inv();
        Ok(Self::from_poly(num).mul_product(&d))
    }

    /// Trusted constructor: `den` factors already normalized.
    pub(crate) fn from_parts_normalized(num: LaurentPoly, mut den: Vec<(LaurentPoly, u32)>) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        den.sort_by(|a, b| a.0.cmp(&b.0));
        let mut merged: Vec<(LaurentPoly, u32)> = Vec::with_capacity(den.len());
        for (f, e) in den {
            match merged.last_mut() {
                Some(last) if last.0 == f => last.1 += e,
                _ => merged.push((f, e)),
            }
        }
        RationalFn { num, den: merged }
    }

    pub fn numer(&self) -> &LaurentPoly {
        &self.num
    }

    pub fn den_factors(&self) -> &[(LaurentPoly, u32)] {
        &self.den
    }

    /// The expanded denominator.
    pub fn denom(&self) -> LaurentPoly {
        self.den
            .iter()
            .fold(LaurentPoly::one(), |acc, (f, e)| &acc * &f.pow(*e))
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.den.is_empty() && self.num.is_one()
    }

    pub fn as_poly(&self) -> Option<&LaurentPoly> {
        if self.den.is_empty() {
            Some(&self.num)
        } else {
            None
        }
    }

    pub fn as_constant(&self) -> Option<Coeff> {
        self.as_poly().and_then(|p| p.as_constant())
    }

    fn active_symbols(&self) -> usize {
        let mut seen = [false; 64];
        let mut mark = |p: &LaurentPoly| {
            for (m, _) in p.terms() {
                for (i, _) in m.iter_slots() {
                    if i < 64 {
                        seen[i] = true;
                    }
                }
            }
        };
        mark(&self.num);
        for (f, _) in &self.den {
            mark(f);
        }
        seen.iter().filter(|x| **x).count()
    }

    fn auto_reduce(self) -> Self {
        let go = match gcd_mode() {
            GcdMode::On => true,
            GcdMode::Off => false,
            GcdMode::Auto => self.active_symbols() <= AUTO_SYMBOL_LIMIT,
        };
        if go {
            self.reduce()
        } else {
            self
        }
    }

    /// Cancel every denominator factor that divides the numerator. Since the
    /// normalized binomial factors are irreducible, this leaves them in lowest
    /// terms.
    pub fn reduce(mut self) -> Self {
        if self.num.is_zero() {
            self.den.clear();
            return self;
        }
        let mut den = Vec::with_capacity(self.den.len());
        for (f, mut e) in std::mem::take(&mut self.den) {
            while e > 0 {
                match self.num.div_exact(&f) {
                    Some(q) => {
                        self.num = q;
                        e -= 1;
                    }
                    None => break,
                }
            }
            if e > 0 {
                den.push((f, e));
            }
        }
        self.den = den;
        self
    }

    pub fn neg(&self) -> Self {
        RationalFn {
            num: -&self.num,
            den: self.den.clone(),
        }
    }

    pub fn scale(&self, c: &Coeff) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        RationalFn {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Self {
        RationalFn {
            num: self.num.mul_monomial(m),
            den: self.den.clone(),
        }
    }

    pub fn mul_poly(&self, p: &LaurentPoly) -> Self {
        RationalFn {
            num: &self.num * p,
            den: self.den.clone(),
        }
        .normalize_zero()
        .auto_reduce()
    }

    fn normalize_zero(mut self) -> Self {
        if self.num.is_zero() {
            self.den.clear();
        }
        self
    }

    /// Multiply by a factored product, cancelling identical denominator
    /// factors without any polynomial division.
    pub fn mul_product(&self, p: &Product) -> Self {
        if p.is_zero() || self.is_zero() {
            return Self::zero();
        }
        let mut den: std::collections::BTreeMap<LaurentPoly, i64> =
            self.den.iter().map(|(f, e)| (f.clone(), *e as i64)).collect();
        let mut num = self.num.mul_term(&p.monomial, &p.scalar);
        for (f, e) in &p.factors {
            let cur = den.entry(f.clone()).or_insert(0);
            *cur -= *e as i64;
        }
        let mut out_den = Vec::new();
        for (f, e) in den {
            if e > 0 {
                out_den.push((f, e as u32));
            } else if e < 0 {
                num = &num * &f.pow((-e) as u32);
            }
        }
        RationalFn { num, den: out_den }
    }

    pub fn mul(&self, other: &RationalFn) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let num = &self.num * &other.num;
        let mut den = self.den.clone();
        den.extend(other.den.iter().cloned());
        Self::from_parts_normalized(num, den).auto_reduce()
    }

    pub fn add(&self, other: &RationalFn) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        if self.den == other.den {
            let num = &self.num + &other.num;
            return RationalFn {
                num,
                den: self.den.clone(),
            }
            .normalize_zero()
            .auto_reduce();
        }
        // Least common multiple of the factor lists.
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.den, &other.den);
        let mut lcm = Vec::new();
        let mut fa = LaurentPoly::one();
        let mut fb = LaurentPoly::one();
        while i < a.len() || j < b.len() {
            let ord = match (a.get(i), b.get(j)) {
                (Some(x), Some(y)) => x.0.cmp(&y.0),
                (Some(_), None) => std::cmp::Ordering::Less,
                (None, Some(_)) => std::cmp::Ordering::Greater,
                (None, None) => unreachable!(),
            };
            match ord {
                std::cmp::Ordering::Less => {
                    fb = &fb * &a[i].0.pow(a[i].1);
                    lcm.push(a[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    fa = &fa * &b[j].0.pow(b[j].1);
                    lcm.push(b[j].clone());
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let (ea, eb) = (a[i].1, b[j].1);
                    if ea > eb {
                        fb = &fb * &a[i].0.pow(ea - eb);
                    } else if eb > ea {
                        fa = &fa * &b[j].0.pow(eb - ea);
                    }
                    lcm.push((a[i].0.clone(), ea.max(eb)));
                    i += 1;
                    j += 1;
                }
            }
        }
        let num = &(&self.num * &fa) + &(&other.num * &fb);
        RationalFn { num, den: lcm }.normalize_zero().auto_reduce()
    }

    pub fn sub(&self, other: &RationalFn) -> Self {
        self.add(&other.neg())
    }

    pub fn inv(&self) -> Result<Self, ScalarError> {
        if self.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        let p = Product::from_poly(&self.num).inv();
        let mut num = LaurentPoly::one();
        for (f, e) in &self.den {
            num = &num * &f.pow(*e);
        }
        Ok(RationalFn::from_poly(num).mul_product(&p))
    }

    pub fn div(&self, other: &RationalFn) -> Result<Self, ScalarError> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn pow(&self, n: i32) -> Result<Self, ScalarError> {
        if n < 0 {
            return self.inv()?.pow(-n);
        }
        let mut acc = RationalFn::one();
        for _ in 0..n {
            acc = acc.mul(self);
        }
        Ok(acc)
    }

    /// Exact equality: the difference has zero numerator.
    pub fn eq_exact(&self, other: &RationalFn) -> bool {
        self == other || self.add_raw(&other.neg()).num.is_zero()
    }

    fn add_raw(&self, other: &RationalFn) -> Self {
        let mut lcm: std::collections::BTreeMap<LaurentPoly, u32> = std::collections::BTreeMap::new();
        for (f, e) in self.den.iter().chain(other.den.iter()) {
            let v = lcm.entry(f.clone()).or_insert(0);
            *v = (*v).max(*e);
        }
        let cofactor = |den: &[(LaurentPoly, u32)]| {
            let mut c = LaurentPoly::one();
            for (f, e) in &lcm {
                let have = den.iter().find(|(g, _)| g == f).map(|x| x.1).unwrap_or(0);
                if *e > have {
                    c = &c * &f.pow(e - have);
                }
            }
            c
        };
        let num = &(&self.num * &cofactor(&self.den)) + &(&other.num * &cofactor(&other.den));
        RationalFn {
            num,
            den: lcm.into_iter().collect(),
        }
        .normalize_zero()
    }

    /// Substitute symbols by monomials.
    pub fn subs_monomials(&self, bindings: &[(Symbol, Monomial)]) -> Result<Self, ScalarError> {
        let num = self.num.subs_monomials(bindings);
        let mut out = RationalFn::from_poly(num);
        for (f, e) in &self.den {
            let g = f.subs_monomials(bindings);
            if g.is_zero() {
                return Err(ScalarError::DenominatorVanishes);
            }
            out = out.mul_product(&Product::from_poly_pow(&g, -(*e as i32)));
        }
        Ok(out.auto_reduce())
    }

    /// Simultaneous substitution of symbols by rational functions.
    pub fn substitute(&self, bindings: &[(Symbol, RationalFn)]) -> Result<Self, ScalarError> {
        if bindings.iter().all(|(_, v)| v.as_poly().and_then(|p| p.as_monomial()).is_some_and(|(_, c)| c.is_one())) {
            let mono: Vec<(Symbol, Monomial)> = bindings
                .iter()
                .map(|(s, v)| (*s, v.num.leading().unwrap().0.clone()))
                .collect();
            return self.subs_monomials(&mono);
        }
        let num = subs_poly(&self.num, bindings)?;
        let mut den = RationalFn::one();
        for (f, e) in &self.den {
            let g = subs_poly(f, bindings)?;
            if g.is_zero() {
                return Err(ScalarError::DenominatorVanishes);
            }
            den = den.mul(&g.pow(*e as i32)?);
        }
        num.div(&den)
    }

    /// Evaluate at a point (per-slot values, `q1^(1/2)` for the q1 slot);
    /// `None` when a denominator factor vanishes there.
    pub fn eval(&self, point: &[Coeff]) -> Option<Coeff> {
        let mut d = Coeff::one();
        for (f, e) in &self.den {
            let v = f.eval(point);
            if v.is_zero() {
                return None;
            }
            d *= num_traits::pow(v, *e as usize);
        }
        Some(self.num.eval(point) / d)
    }

    pub fn involves(&self, s: Symbol) -> bool {
        self.num.involves(s) || self.den.iter().any(|(f, _)| f.involves(s))
    }

    pub fn has_half_q1(&self) -> bool {
        self.num.has_half_q1() || self.den.iter().any(|(f, _)| f.has_half_q1())
    }

    pub fn max_aux(&self) -> usize {
        self.den
            .iter()
            .map(|(f, _)| f.max_aux())
            .chain(std::iter::once(self.num.max_aux()))
            .max()
            .unwrap_or(0)
    }

    /// Total absolute degree bound used by randomized equality.
    pub fn degree_bound(&self) -> u64 {
        let deg = |p: &LaurentPoly| p.terms().iter().map(|(m, _)| m.abs_degree()).max().unwrap_or(0);
        deg(&self.num) + self.den.iter().map(|(f, e)| deg(f) * *e as u64).sum::<u64>()
    }

    /// Apply `x -> 1/x` to every symbol.
    pub fn dual(&self) -> Self {
        let mut out = RationalFn::from_poly(self.num.dual());
        for (f, e) in &self.den {
            out = out.mul_product(&Product::from_poly_pow(&f.dual(), -(*e as i32)));
        }
        out
    }
}

fn subs_poly(p: &LaurentPoly, bindings: &[(Symbol, RationalFn)]) -> Result<RationalFn, ScalarError> {
    let mut total = RationalFn::zero();
    for (m, c) in p.terms() {
        let mut rest = m.clone();
        for (s, _) in bindings {
            rest.set_slot(s.slot(), 0);
        }
        let mut term = RationalFn::from_poly(LaurentPoly::term(rest, c.clone()));
        for (s, v) in bindings {
            let mut e = m.raw_exp(*s);
            if e == 0 {
                continue;
            }
            if *s == Symbol::Q1 {
                if e % 2 != 0 {
                    return Err(ScalarError::HalfExponent);
                }
                e /= 2;
            }
            term = term.mul(&v.pow(e)?);
        }
        total = total.add(&term);
    }
    Ok(total)
}

impl From<LaurentPoly> for RationalFn {
    fn from(p: LaurentPoly) -> Self {
        RationalFn::from_poly(p)
    }
}

impl From<Product> for RationalFn {
    fn from(p: Product) -> Self {
        p.to_ratfn()
    }
}

impl fmt::Display for RationalFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_empty() {
            return write!(f, "{}", self.num);
        }
        if self.num.len() > 1 {
            write!(f, "({})", self.num)?;
        } else {
            write!(f, "{}", self.num)?;
        }
        f.write_str("/(")?;
        for (i, (g, e)) in self.den.iter().enumerate() {
            if i > 0 {
                f.write_str("*")?;
            }
            if *e == 1 {
                write!(f, "({g})")?;
            } else {
                write!(f, "({g})^{e}")?;
            }
        }
        f.write_str(")")
    }
}

impl fmt::Debug for RationalFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl std::ops::Add for &RationalFn {
    type Output = RationalFn;
    fn add(self, rhs: &RationalFn) -> RationalFn {
        RationalFn::add(self, rhs)
    }
}

impl std::ops::Sub for &RationalFn {
    type Output = RationalFn;
    fn sub(self, rhs: &RationalFn) -> RationalFn {
        RationalFn::sub(self, rhs)
    }
}

impl std::ops::Mul for &RationalFn {
    type Output = RationalFn;
    fn mul(self, rhs: &RationalFn) -> RationalFn {
        RationalFn::mul(self, rhs)
    }
}

impl std::ops::Neg for &RationalFn {
    type Output = RationalFn;
    fn neg(self) -> RationalFn {
        RationalFn::neg(self)
    }
}

impl std::iter::Sum for RationalFn {
    fn sum<I: Iterator<Item = RationalFn>>(iter: I) -> Self {
        iter.fold(RationalFn::zero(), |a, b| a.add(&b))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(s: Symbol) -> RationalFn {
        RationalFn::var(s)
    }

    #[test]
    fn inverse_pair() {
        let one = RationalFn::one();
        let a = one.sub(&v(Symbol::Q1));
        let b = a.inv().unwrap().mul(&a);
        assert!(b.is_one());
    }

    #[test]
    fn additive_inverse() {
        let a = v(Symbol::Q1).div(&RationalFn::one().sub(&v(Symbol::Q2))).unwrap();
        assert!(a.add(&a.neg()).is_zero());
    }

    #[test]
    fn cancellation_after_sum() {
        // (1 - q1^2)/(1 - q1) == 1 + q1
        let one = RationalFn::one();
        let q1 = v(Symbol::Q1);
        let a = one.sub(&q1.mul(&q1)).div(&one.sub(&q1)).unwrap();
        assert!(a.eq_exact(&one.add(&q1)));
        assert!(a.clone().reduce().as_poly().is_some());
    }

    #[test]
    fn pole_substitution() {
        let z1 = v(Symbol::aux(1));
        let z2 = v(Symbol::aux(2));
        let f = RationalFn::one().div(&z1.sub(&z2.mul(&v(Symbol::Q1)))).unwrap();
        let m = Monomial::var(Symbol::Q1).mul(&Monomial::var(Symbol::aux(2)));
        assert_eq!(
            f.subs_monomials(&[(Symbol::aux(1), m)]),
            Err(ScalarError::DenominatorVanishes)
        );
    }
}
