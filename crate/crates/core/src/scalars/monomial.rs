use std::cmp::Ordering;
use std::fmt;

use smallvec::SmallVec;

use super::ScalarError;

/// Largest framing rank the slot layout reserves room for.
pub const MAX_RANK: usize = 8;

/// Largest number of auxiliary (integration / shuffle) variables.
pub const MAX_AUX: usize = 12;

const T_BASE: usize = 2;
const AUX_BASE: usize = T_BASE + MAX_RANK;

/// A ring generator: the torus parameters `q1`, `q2`, the framing parameters
/// `t1..tr`, or an auxiliary variable `z_j`/`u_j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Symbol {
    Q1,
    Q2,
    /// Framing parameter, 1-based.
    T(u8),
    /// Auxiliary variable, 1-based.
    Aux(u8),
}

impl Symbol {
    pub fn slot(self) -> usize {
        match self {
            Symbol::Q1 => 0,
            Symbol::Q2 => 1,
            Symbol::T(i) => T_BASE + i as usize - 1,
            Symbol::Aux(j) => AUX_BASE + j as usize - 1,
        }
    }

    pub fn from_slot(slot: usize) -> Symbol {
        match slot {
            0 => Symbol::Q1,
            1 => Symbol::Q2,
            s if s < AUX_BASE => Symbol::T((s - T_BASE + 1) as u8),
            s => Symbol::Aux((s - AUX_BASE + 1) as u8),
        }
    }

    pub fn t(i: usize) -> Symbol {
        assert!((1..=MAX_RANK).contains(&i), "framing index {i} out of range");
        Symbol::T(i as u8)
    }

    pub fn aux(j: usize) -> Symbol {
        assert!((1..=MAX_AUX).contains(&j), "auxiliary index {j} out of range");
        Symbol::Aux(j as u8)
    }

    pub fn name(self) -> String {
        match self {
            Symbol::Q1 => "q1".into(),
            Symbol::Q2 => "q2".into(),
            Symbol::T(i) => format!("t{i}"),
            Symbol::Aux(j) => format!("z{j}"),
        }
    }

    pub fn parse(s: &str) -> Result<Symbol, ScalarError> {
        let bad = || ScalarError::Parse(format!("unknown symbol `{s}`"));
        match s {
            "q1" => return Ok(Symbol::Q1),
            "q2" => return Ok(Symbol::Q2),
            "z" | "u" => return Ok(Symbol::Aux(1)),
            _ => {}
        }
        let (head, tail) = s.split_at(1);
        let idx: usize = tail.parse().map_err(|_| bad())?;
        match head {
            "t" if (1..=MAX_RANK).contains(&idx) => Ok(Symbol::T(idx as u8)),
            "z" | "u" if (1..=MAX_AUX).contains(&idx) => Ok(Symbol::Aux(idx as u8)),
            _ => Err(bad()),
        }
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

/// Exponent vector over the fixed slot layout `q1, q2, t1..t8, z1..`.
///
/// The `q1` slot stores twice the exponent so that `q1^(1/2)` is exact. Every
/// other slot stores the exponent itself. Trailing zero slots are never stored,
/// which makes equality structural.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    exps: SmallVec<[i32; 12]>,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial::default()
    }

    pub fn var(s: Symbol) -> Self {
        Monomial::one().with(s, 1)
    }

    /// `q1^(half/2)`.
    pub fn q1_half(half: i32) -> Self {
        let mut m = Monomial::one();
        m.set_slot(0, half);
        m
    }

    pub fn with(mut self, s: Symbol, e: i32) -> Self {
        let slot = s.slot();
        let raw = if slot == 0 { 2 * e } else { e };
        let cur = self.slot(slot);
        self.set_slot(slot, cur + raw);
        self
    }

    pub fn from_pairs(pairs: &[(Symbol, i32)]) -> Self {
        pairs.iter().fold(Monomial::one(), |m, &(s, e)| m.with(s, e))
    }

    #[inline]
    pub fn slot(&self, i: usize) -> i32 {
        self.exps.get(i).copied().unwrap_or(0)
    }

    pub fn set_slot(&mut self, i: usize, v: i32) {
        if i >= self.exps.len() {
            if v == 0 {
                return;
            }
            self.exps.resize(i + 1, 0);
        }
        self.exps[i] = v;
        self.trim();
    }

    fn trim(&mut self) {
        while let Some(&0) = self.exps.last() {
            self.exps.pop();
        }
    }

    /// Exponent of `s`; for `q1` this is the doubled exponent.
    pub fn raw_exp(&self, s: Symbol) -> i32 {
        self.slot(s.slot())
    }

    /// Integral exponent of `s`. Panics on a half-integral `q1` power.
    pub fn exp(&self, s: Symbol) -> i32 {
        let raw = self.raw_exp(s);
        if s == Symbol::Q1 {
            assert!(raw % 2 == 0, "half-integral q1 exponent");
            raw / 2
        } else {
            raw
        }
    }

    pub fn is_one(&self) -> bool {
        self.exps.is_empty()
    }

    pub fn len_slots(&self) -> usize {
        self.exps.len()
    }

    pub fn has_half_q1(&self) -> bool {
        self.slot(0) % 2 != 0
    }

    /// Iterate `(symbol, raw exponent)` over nonzero slots.
    pub fn iter(&self) -> impl Iterator<Item = (Symbol, i32)> + '_ {
        self.exps
            .iter()
            .enumerate()
            .filter(|(_, &e)| e != 0)
            .map(|(i, &e)| (Symbol::from_slot(i), e))
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let n = self.exps.len().max(other.exps.len());
        let mut exps: SmallVec<[i32; 12]> = SmallVec::with_capacity(n);
        for i in 0..n {
            exps.push(self.slot(i) + other.slot(i));
        }
        let mut m = Monomial { exps };
        m.trim();
        m
    }

    pub fn div(&self, other: &Monomial) -> Monomial {
        self.mul(&other.inv())
    }

    pub fn inv(&self) -> Monomial {
        Monomial {
            exps: self.exps.iter().map(|e| -e).collect(),
        }
    }

    pub fn pow(&self, n: i32) -> Monomial {
        let mut m = Monomial {
            exps: self.exps.iter().map(|e| e * n).collect(),
        };
        m.trim();
        m
    }

    /// Componentwise minimum.
    pub fn meet(&self, other: &Monomial) -> Monomial {
        let n = self.exps.len().max(other.exps.len());
        let mut m = Monomial {
            exps: (0..n).map(|i| self.slot(i).min(other.slot(i))).collect(),
        };
        m.trim();
        m
    }

    /// True when every exponent of `self` is at least that of `other`.
    pub fn divisible_by(&self, other: &Monomial) -> bool {
        let n = self.exps.len().max(other.exps.len());
        (0..n).all(|i| self.slot(i) >= other.slot(i))
    }

    /// Twice the total degree (so that `q1^(1/2)` contributes 1).
    pub fn doubled_degree(&self) -> i64 {
        self.exps
            .iter()
            .enumerate()
            .map(|(i, &e)| if i == 0 { e as i64 } else { 2 * e as i64 })
            .sum()
    }

    /// Sum of absolute exponents; a bound used by randomized equality.
    pub fn abs_degree(&self) -> u64 {
        self.exps.iter().map(|e| e.unsigned_abs() as u64).sum()
    }

    pub fn has_negative(&self) -> bool {
        self.exps.iter().any(|&e| e < 0)
    }

    /// Apply the duality `x -> 1/x` to the equivariant parameters only.
    pub fn dual(&self) -> Monomial {
        self.inv()
    }

    pub fn max_aux(&self) -> usize {
        if self.exps.len() > AUX_BASE {
            self.exps.len() - AUX_BASE
        } else {
            0
        }
    }

    /// Simultaneous substitution of symbols by monomials.
    pub fn subs(&self, bindings: &[(Symbol, Monomial)]) -> Monomial {
        let mut out = self.clone();
        for (s, _) in bindings {
            out.set_slot(s.slot(), 0);
        }
        for (s, m) in bindings {
            let e = self.raw_exp(*s);
            if e != 0 {
                let e = if *s == Symbol::Q1 { e / 2 } else { e };
                out = out.mul(&m.pow(e));
            }
        }
        out
    }

    pub fn involves(&self, s: Symbol) -> bool {
        self.raw_exp(s) != 0
    }
}

impl Ord for Monomial {
    /// Graded lexicographic over the slot order.
    fn cmp(&self, other: &Self) -> Ordering {
        self.doubled_degree()
            .cmp(&other.doubled_degree())
            .then_with(|| {
                let n = self.exps.len().max(other.exps.len());
                for i in 0..n {
                    match self.slot(i).cmp(&other.slot(i)) {
                        Ordering::Equal => continue,
                        o => return o,
                    }
                }
                Ordering::Equal
            })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

pub(crate) fn fmt_exp(s: Symbol, raw: i32) -> String {
    if s == Symbol::Q1 && raw % 2 != 0 {
        format!("{raw}/2")
    } else if s == Symbol::Q1 {
        format!("{}", raw / 2)
    } else {
        format!("{raw}")
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return f.write_str("1");
        }
        let mut first = true;
        for (s, raw) in self.iter() {
            if !first {
                f.write_str("*")?;
            }
            first = false;
            let e = fmt_exp(s, raw);
            if e == "1" {
                write!(f, "{s}")?;
            } else if e.contains('/') || e.starts_with('-') {
                write!(f, "{s}^({e})")?;
            } else {
                write!(f, "{s}^{e}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn half_integer_closure() {
        let h = Monomial::q1_half(1);
        assert_eq!(h.mul(&h), Monomial::var(Symbol::Q1));
        assert!(h.has_half_q1());
    }

    #[test]
    fn grlex_order() {
        let q1 = Monomial::var(Symbol::Q1);
        let q2 = Monomial::var(Symbol::Q2);
        let t1 = Monomial::var(Symbol::t(1));
        assert!(q1 > q2);
        assert!(q2 > t1);
        assert!(q1.mul(&q2) > q1);
        assert!(Monomial::one() < t1);
    }

    #[test]
    fn trailing_zeros_not_stored() {
        let z = Monomial::var(Symbol::aux(3));
        let back = z.mul(&z.inv());
        assert!(back.is_one());
        assert_eq!(back.len_slots(), 0);
    }

    #[test]
    fn symbol_round_trip() {
        for s in [Symbol::Q1, Symbol::Q2, Symbol::t(3), Symbol::aux(2)] {
            assert_eq!(Symbol::parse(&s.name()).unwrap(), s);
            assert_eq!(Symbol::from_slot(s.slot()), s);
        }
        assert!(Symbol::parse("w1").is_err());
    }
}
