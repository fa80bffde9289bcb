//! The shuffle algebra: symmetrization, the shuffle product, wheel conditions,
//! the elements `X_m`, `m_{k,d}`, `P_{k,d}`, `A_k`, `B_k` and the map `phi`.
//!
//! A `ShuffleElement` is stored through a representative `F` with
//! `P = Sym F`. Representatives are sums of terms
//! `coeff * poly(z) * prod (1 - c z_j / z_i)^e`, which keeps the action on
//! fixed points and the residue computations factor-by-factor.

use std::fmt;
use std::sync::OnceLock;

use itertools::Itertools;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::scalars::{
    int, q, q1, q2, z, Coeff, LaurentPoly, Monomial, Product, RationalFn, ScalarError, Symbol, MAX_AUX,
};

pub const DEFAULT_CAP: usize = 4;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ShuffleError {
    #[error("VariableCapExceeded: {needed} variables requested, cap is {cap}")]
    VariableCapExceeded { needed: usize, cap: usize },
    #[error("NotInShuffleForm: {0}")]
    NotInShuffleForm(String),
    #[error("BothZero: P_(0,0) is not defined")]
    BothZero,
    #[error("PoleAtEvaluation")]
    PoleAtEvaluation,
}

impl ShuffleError {
    pub fn name(&self) -> &'static str {
        match self {
            ShuffleError::VariableCapExceeded { .. } => "VariableCapExceeded",
            ShuffleError::NotInShuffleForm(_) => "NotInShuffleForm",
            ShuffleError::BothZero => "BothZero",
            ShuffleError::PoleAtEvaluation => "PoleAtEvaluation",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    /// `epsilon`: 1 for `+`, 0 for `-`.
    pub fn eps(self) -> i32 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => 0,
        }
    }

    pub fn as_i32(self) -> i32 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn parse(s: &str) -> Option<Sign> {
        match s {
            "+" | "plus" => Some(Sign::Plus),
            "-" | "minus" => Some(Sign::Minus),
            _ => None,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        })
    }
}

/// The factor `1 - c * z_j / z_i` (variables 1-based).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Kernel {
    pub c: Monomial,
    pub i: usize,
    pub j: usize,
}

impl Kernel {
    pub fn new(c: Monomial, i: usize, j: usize) -> Self {
        Kernel { c, i, j }
    }

    /// The monomial `c z_j / z_i`.
    pub fn ratio(&self) -> Monomial {
        self.c.mul(&z(self.j)).div(&z(self.i))
    }

    pub fn poly(&self) -> LaurentPoly {
        LaurentPoly::one_minus(Coeff::one(), self.ratio())
    }

    fn remap(&self, perm: &[usize]) -> Kernel {
        Kernel::new(self.c.clone(), perm[self.i - 1], perm[self.j - 1])
    }

    fn shift(&self, by: usize) -> Kernel {
        Kernel::new(self.c.clone(), self.i + by, self.j + by)
    }
}

/// `omega(z_i / z_j)` as four kernels.
pub fn omega_kernels(i: usize, j: usize) -> [(Kernel, i32); 4] {
    [
        (Kernel::new(Monomial::one(), i, j), 1),
        (Kernel::new(q(), i, j), 1),
        (Kernel::new(q1(), i, j), -1),
        (Kernel::new(q2(), i, j), -1),
    ]
}

/// `omega(x) = (x - 1)(x - q) / ((x - q1)(x - q2))`.
pub fn omega(x: &RationalFn) -> RationalFn {
    let one = RationalFn::one();
    let mq = |m: Monomial| RationalFn::mono(m);
    let num = x.sub(&one).mul(&x.sub(&mq(q())));
    let den = x.sub(&mq(q1())).mul(&x.sub(&mq(q2())));
    num.div(&den).expect("omega denominator is nonzero for a generic argument")
}

/// One summand of a representative.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RepTerm {
    pub coeff: RationalFn,
    pub poly: LaurentPoly,
    pub kernels: Vec<(Kernel, i32)>,
}

impl RepTerm {
    pub fn value(&self) -> RationalFn {
        let mut prod = Product::one();
        for (kern, e) in &self.kernels {
            prod = prod.mul(&Product::from_poly_pow(&kern.poly(), *e));
        }
        self.coeff.mul_poly(&self.poly).mul_product(&prod)
    }

    fn permuted(&self, perm: &[usize]) -> RepTerm {
        RepTerm {
            coeff: self.coeff.clone(),
            poly: self.poly.subs_monomials(&perm_bindings(perm)),
            kernels: self.kernels.iter().map(|(k, e)| (k.remap(perm), *e)).collect(),
        }
    }

    fn shifted(&self, by: usize, k: usize) -> RepTerm {
        let perm: Vec<usize> = (1..=k).map(|i| i + by).collect();
        RepTerm {
            coeff: self.coeff.clone(),
            poly: self.poly.subs_monomials(&perm_bindings(&perm)),
            kernels: self.kernels.iter().map(|(k, e)| (k.shift(by), *e)).collect(),
        }
    }
}

fn perm_bindings(perm: &[usize]) -> Vec<(Symbol, Monomial)> {
    perm.iter()
        .enumerate()
        .map(|(i, &p)| (Symbol::aux(i + 1), z(p)))
        .collect()
}

/// A shuffle element `Sym F` in `k` variables, with `F` a sum of terms.
#[derive(Clone)]
pub struct ShuffleElement {
    k: usize,
    terms: Vec<RepTerm>,
    /// `F` itself is symmetric, so `Sym F = k! F`.
    symmetric: bool,
    sym: OnceLock<RationalFn>,
    numerator: OnceLock<Result<LaurentPoly, ShuffleError>>,
}

impl fmt::Debug for ShuffleElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ShuffleElement")
            .field("k", &self.k)
            .field("terms", &self.terms)
            .finish()
    }
}

impl ShuffleElement {
    pub fn from_terms(k: usize, terms: Vec<RepTerm>, symmetric: bool) -> Result<Self, ShuffleError> {
        if k > MAX_AUX {
            return Err(ShuffleError::VariableCapExceeded { needed: k, cap: MAX_AUX });
        }
        Ok(ShuffleElement {
            k,
            terms,
            symmetric,
            sym: OnceLock::new(),
            numerator: OnceLock::new(),
        })
    }

    /// The unit, `k = 0`.
    pub fn unit() -> Self {
        Self::constant(0, RationalFn::one())
    }

    fn constant(k: usize, c: RationalFn) -> Self {
        Self::from_terms(
            k,
            vec![RepTerm {
                coeff: c,
                poly: LaurentPoly::one(),
                kernels: Vec::new(),
            }],
            true,
        )
        .expect("small k")
    }

    /// The one-variable element `z^d`.
    pub fn z_pow(d: i32) -> Self {
        Self::from_terms(
            1,
            vec![RepTerm {
                coeff: RationalFn::one(),
                poly: LaurentPoly::mono(z(1).pow(d)),
                kernels: Vec::new(),
            }],
            true,
        )
        .expect("small k")
    }

    /// A one-variable element given by a Laurent polynomial in `z1`.
    pub fn one_variable(p: LaurentPoly) -> Self {
        Self::from_terms(
            1,
            vec![RepTerm {
                coeff: RationalFn::one(),
                poly: p,
                kernels: Vec::new(),
            }],
            true,
        )
        .expect("small k")
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn terms(&self) -> &[RepTerm] {
        &self.terms
    }

    pub fn is_symmetric_rep(&self) -> bool {
        self.symmetric
    }

    /// The representative `F` as a rational function.
    pub fn rep(&self) -> RationalFn {
        self.terms.iter().map(|t| t.value()).sum()
    }

    /// `P = Sym F`, computed once.
    pub fn sym(&self) -> &RationalFn {
        self.sym.get_or_init(|| {
            if self.symmetric {
                let f: Coeff = (1..=self.k as i64).map(int).product();
                self.rep().scale(&f)
            } else {
                let mut total = RationalFn::zero();
                for perm in (1..=self.k).permutations(self.k) {
                    for t in &self.terms {
                        total = total.add(&t.permuted(&perm).value());
                    }
                }
                total.reduce()
            }
        })
    }

    pub fn scale(&self, c: &RationalFn) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|t| RepTerm {
                coeff: t.coeff.mul(c),
                ..t.clone()
            })
            .collect();
        Self::from_terms(self.k, terms, self.symmetric).expect("same k")
    }

    /// Sum of two elements with the same number of variables.
    pub fn add(&self, other: &ShuffleElement) -> Self {
        assert_eq!(self.k, other.k, "adding shuffle elements of different degree");
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        Self::from_terms(self.k, terms, self.symmetric && other.symmetric).expect("same k")
    }

    /// Multiply the representative by the symmetric monomial `(z_1..z_k)^n`.
    pub fn times_det(&self, n: i32) -> Self {
        let det = (1..=self.k).fold(Monomial::one(), |m, i| m.mul(&z(i))).pow(n);
        let terms = self
            .terms
            .iter()
            .map(|t| RepTerm {
                poly: t.poly.mul_monomial(&det),
                ..t.clone()
            })
            .collect();
        Self::from_terms(self.k, terms, self.symmetric).expect("same k")
    }

    /// Multiply the representative by the power sum `z_1^n + ... + z_k^n`.
    pub fn times_power_sum(&self, n: i32) -> Self {
        let ps: LaurentPoly = (1..=self.k).map(|i| LaurentPoly::mono(z(i).pow(n))).sum();
        let terms = self
            .terms
            .iter()
            .map(|t| RepTerm {
                poly: &t.poly * &ps,
                ..t.clone()
            })
            .collect();
        Self::from_terms(self.k, terms, self.symmetric).expect("same k")
    }

    /// The shuffle-form numerator `p`, with
    /// `P = p prod_{i != j}(z_i - z_j) / prod_{i != j}(z_i - q1 z_j)(z_i - q2 z_j)`,
    /// up to a nonzero factor free of the `z`'s.
    pub fn numerator(&self) -> Result<&LaurentPoly, ShuffleError> {
        self.numerator
            .get_or_init(|| extract_numerator(self.sym(), self.k))
            .as_ref()
            .map_err(|e| e.clone())
    }
}

fn diff(i: usize, c: Monomial, j: usize) -> LaurentPoly {
    &LaurentPoly::mono(z(i)) - &LaurentPoly::mono(c.mul(&z(j)))
}

fn standard_products(k: usize) -> (Product, Product) {
    let mut den = Product::one();
    let mut vdm = Product::one();
    for i in 1..=k {
        for j in 1..=k {
            if i != j {
                den = den.mul(&Product::from_poly(&diff(i, q1(), j)));
                den = den.mul(&Product::from_poly(&diff(i, q2(), j)));
                vdm = vdm.mul(&Product::from_poly(&diff(i, Monomial::one(), j)));
            }
        }
    }
    (den, vdm)
}

fn extract_numerator(sym: &RationalFn, k: usize) -> Result<LaurentPoly, ShuffleError> {
    let (den, vdm) = standard_products(k);
    let p = sym.mul_product(&den.div(&vdm)).reduce();
    let survivors = p.den_factors().iter().filter(|(f, _)| f.max_aux() > 0).count();
    if survivors > 0 {
        return Err(ShuffleError::NotInShuffleForm(format!(
            "{survivors} denominator factor(s) survive clearing the standard denominator"
        )));
    }
    Ok(p.numer().clone())
}

/// `Sym f` over the variables `z_1..z_k` (no `1/k!`).
pub fn symmetrize(f: &RationalFn, k: usize) -> RationalFn {
    let mut total = RationalFn::zero();
    for perm in (1..=k).permutations(k) {
        let g = f
            .subs_monomials(&perm_bindings(&perm))
            .expect("renaming variables keeps denominators nonzero");
        total = total.add(&g);
    }
    total.reduce()
}

/// Invariance under the adjacent transpositions.
pub fn is_symmetric(f: &RationalFn, k: usize) -> bool {
    (1..k).all(|i| {
        let mut perm: Vec<usize> = (1..=k).collect();
        perm.swap(i - 1, i);
        f.subs_monomials(&perm_bindings(&perm))
            .map(|g| g.eq_exact(f))
            .unwrap_or(false)
    })
}

fn check_cap(needed: usize, cap: usize) -> Result<(), ShuffleError> {
    if needed > cap {
        Err(ShuffleError::VariableCapExceeded { needed, cap })
    } else {
        Ok(())
    }
}

/// Shuffle product with the default variable cap.
pub fn shuffle_mul(p: &ShuffleElement, q: &ShuffleElement) -> Result<ShuffleElement, ShuffleError> {
    shuffle_mul_capped(p, q, DEFAULT_CAP)
}

/// `P * Q = Sym[F_P(z_1..z_k) F_Q(z_{k+1}..z_{k+l}) prod_{i<=k<j} omega(z_i/z_j)]`,
/// which equals the product with the `1/(k! l!)` normalization.
pub fn shuffle_mul_capped(
    p: &ShuffleElement,
    q: &ShuffleElement,
    cap: usize,
) -> Result<ShuffleElement, ShuffleError> {
    let (k, l) = (p.k, q.k);
    check_cap(k + l, cap)?;
    let mut cross = Vec::new();
    for i in 1..=k {
        for j in k + 1..=k + l {
            cross.extend(omega_kernels(i, j));
        }
    }
    let mut terms = Vec::new();
    for a in &p.terms {
        for b in &q.terms {
            let b = b.shifted(k, l);
            let mut kernels = a.kernels.clone();
            kernels.extend(b.kernels);
            kernels.extend(cross.iter().cloned());
            terms.push(RepTerm {
                coeff: a.coeff.mul(&b.coeff),
                poly: &a.poly * &b.poly,
                kernels,
            });
        }
    }
    let symmetric = k + l <= 1 && p.symmetric && q.symmetric;
    ShuffleElement::from_terms(k + l, terms, symmetric)
}

/// The product computed directly from the symmetric forms, summing over the
/// `(k+l)! / (k! l!)` ways to split the variables.
pub fn shuffle_mul_sym(p: &RationalFn, k: usize, q: &RationalFn, l: usize) -> RationalFn {
    let n = k + l;
    let mut total = RationalFn::zero();
    for left in (1..=n).combinations(k) {
        let right: Vec<usize> = (1..=n).filter(|i| !left.contains(i)).collect();
        let pa = p.subs_monomials(&perm_bindings(&left)).expect("renaming");
        let qb = q.subs_monomials(&perm_bindings(&right)).expect("renaming");
        let mut prod = Product::one();
        for &i in &left {
            for &j in &right {
                for (kern, e) in omega_kernels(i, j) {
                    prod = prod.mul(&Product::from_poly_pow(&kern.poly(), e));
                }
            }
        }
        total = total.add(&pa.mul(&qb).mul_product(&prod));
    }
    total.reduce()
}

/// Wheel conditions on the shuffle-form numerator.
pub fn wheel_check(p: &ShuffleElement) -> Result<bool, ShuffleError> {
    let num = p.numerator()?;
    Ok(wheel_holds(num, p.k))
}

/// `p(z, q1 z, q z, ...) = p(z, q2 z, q z, ...) = 0`.
pub fn wheel_holds(num: &LaurentPoly, k: usize) -> bool {
    if k < 3 {
        return true;
    }
    [q1(), q2()].iter().all(|c| {
        let b = [
            (Symbol::aux(2), c.mul(&z(1))),
            (Symbol::aux(3), q().mul(&z(1))),
        ];
        num.subs_monomials(&b).is_zero()
    })
}

/// `X_m = Sym[m / prod(1 - z_{i+1} q / z_i) * prod_{i<j} omega(z_i/z_j)]`.
pub fn build_x(m: &LaurentPoly, k: usize) -> Result<ShuffleElement, ShuffleError> {
    build_x_capped(m, k, DEFAULT_CAP)
}

pub fn build_x_capped(m: &LaurentPoly, k: usize, cap: usize) -> Result<ShuffleElement, ShuffleError> {
    assert!(k >= 1, "X_m needs at least one variable");
    check_cap(k, cap)?;
    if m.max_aux() > k {
        return Err(ShuffleError::NotInShuffleForm(format!("m involves z{} but k = {k}", m.max_aux())));
    }
    let mut kernels = Vec::new();
    for i in 1..k {
        kernels.push((Kernel::new(q(), i, i + 1), -1));
    }
    for i in 1..=k {
        for j in i + 1..=k {
            kernels.extend(omega_kernels(i, j));
        }
    }
    ShuffleElement::from_terms(
        k,
        vec![RepTerm {
            coeff: RationalFn::one(),
            poly: m.clone(),
            kernels,
        }],
        k <= 1,
    )
}

/// `m_{k,d}`; for `d = 0` it uses `n = k`, `a = 1`.
pub fn build_m(k: usize, d: i32) -> LaurentPoly {
    assert!(k >= 1, "m_(k,d) needs k >= 1");
    let ki = k as i32;
    let n = if d == 0 { ki } else { num_integer::gcd(ki, d) };
    let a = ki / n;
    let mut pre = Monomial::one();
    for i in 1..=ki {
        let e = (i * d).div_euclid(ki) - ((i - 1) * d).div_euclid(ki);
        pre = pre.mul(&z(i as usize).pow(e));
    }
    let mut sum = LaurentPoly::zero();
    for x in 0..n {
        let mut mono = q().pow(x);
        for s in 1..=x {
            mono = mono.mul(&z((a * (n - s) + 1) as usize)).div(&z((a * (n - s)) as usize));
        }
        sum = &sum + &LaurentPoly::mono(mono);
    }
    sum.mul_monomial(&pre)
}

/// `P_{k,d}`: a shuffle element for `k != 0`, the power-sum generator
/// `p^{sign}_n` on the vertical axis.
#[derive(Clone, Debug)]
pub enum PElement {
    Shuffle { sign: Sign, element: ShuffleElement },
    Diagonal { sign: Sign, n: u32 },
}

pub fn build_p(k: i32, d: i32) -> Result<PElement, ShuffleError> {
    match (k, d) {
        (0, 0) => Err(ShuffleError::BothZero),
        (0, d) => Ok(PElement::Diagonal {
            sign: if d > 0 { Sign::Plus } else { Sign::Minus },
            n: d.unsigned_abs(),
        }),
        (k, d) => {
            let sign = if k > 0 { Sign::Plus } else { Sign::Minus };
            let ka = k.unsigned_abs() as usize;
            Ok(PElement::Shuffle {
                sign,
                element: build_x(&build_m(ka, d), ka)?,
            })
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum AbKind {
    A,
    B,
}

/// `(1 - q) / ((1 - q1)(1 - q2))`.
pub fn alpha_one() -> RationalFn {
    crate::scalars::parse_ratfn("(1-q)/((1-q1)*(1-q2))").expect("constant")
}

/// `A_k` or `B_k`, with representative `A_k / k!` (resp. `B_k / k!`).
pub fn build_ab(kind: AbKind, k: usize) -> Result<ShuffleElement, ShuffleError> {
    check_cap(k, MAX_AUX)?;
    let kf: Coeff = (1..=k as i64).map(int).product();
    let mut kernels = Vec::new();
    let pref = match kind {
        AbKind::A => {
            for i in 1..=k {
                for j in 1..=k {
                    if i != j {
                        kernels.extend(omega_kernels(i, j));
                    }
                }
            }
            alpha_one().pow(k as i32).expect("nonzero")
        }
        AbKind::B => {
            for i in 1..=k {
                for j in 1..=k {
                    if i != j {
                        kernels.push((Kernel::new(Monomial::one(), i, j), 1));
                        kernels.push((Kernel::new(q1(), i, j), -1));
                    }
                }
            }
            let one_minus_q1 = LaurentPoly::one_minus(Coeff::one(), q1());
            RationalFn::mono(q1().pow((k * k.saturating_sub(1) / 2) as i32))
                .mul_product(&Product::from_poly_pow(&one_minus_q1, -(k as i32)))
        }
    };
    ShuffleElement::from_terms(
        k,
        vec![RepTerm {
            coeff: pref.scale(&kf.recip()),
            poly: LaurentPoly::one(),
            kernels,
        }],
        true,
    )
}

/// `A_k`, `B_k` written with the literal polynomial factors of their
/// definition (used as an independent check of the kernel form).
pub fn ab_literal(kind: AbKind, k: usize) -> RationalFn {
    let mut prod = Product::one();
    for i in 1..=k {
        for j in 1..=k {
            if i == j {
                continue;
            }
            prod = prod.mul(&Product::from_poly(&diff(i, Monomial::one(), j)));
            prod = prod.mul(&Product::from_poly_pow(&diff(i, q1(), j), -1));
            if kind == AbKind::A {
                prod = prod.mul(&Product::from_poly(&diff(i, q(), j)));
                prod = prod.mul(&Product::from_poly_pow(&diff(i, q2(), j), -1));
            }
        }
    }
    let pref = match kind {
        AbKind::A => alpha_one().pow(k as i32).expect("nonzero"),
        AbKind::B => {
            let one_minus_q1 = LaurentPoly::one_minus(Coeff::one(), q1());
            RationalFn::mono(q1().pow((k * k.saturating_sub(1) / 2) as i32))
                .mul_product(&Product::from_poly_pow(&one_minus_q1, -(k as i32)))
        }
    };
    pref.mul_product(&prod)
}

/// `phi(R)`: evaluate `R prod_{i != j}(z_i - q1 z_j)/(z_i - z_j)` at
/// `z_i = q1^{-i}`, times `q1^{-k^2/2 + k} / (1 - q2)^k prod (q1^{i-1} - q2)/(q1^i - 1)`.
pub fn phi(sym: &RationalFn, k: usize) -> Result<RationalFn, ShuffleError> {
    let mut kern = Product::one();
    for i in 1..=k {
        for j in 1..=k {
            if i != j {
                kern = kern.mul(&Product::from_poly(&diff(i, q1(), j)));
                kern = kern.mul(&Product::from_poly_pow(&diff(i, Monomial::one(), j), -1));
            }
        }
    }
    let cleared = sym.mul_product(&kern).reduce();
    let point: Vec<(Symbol, Monomial)> = (1..=k).map(|i| (Symbol::aux(i), q1().pow(-(i as i32)))).collect();
    let value = cleared.subs_monomials(&point).map_err(|e| match e {
        ScalarError::DenominatorVanishes => ShuffleError::PoleAtEvaluation,
        other => ShuffleError::NotInShuffleForm(other.to_string()),
    })?;
    let ki = k as i32;
    let mut pref = RationalFn::mono(Monomial::q1_half(-ki * ki + 2 * ki));
    let one_minus_q2 = LaurentPoly::one_minus(Coeff::one(), q2());
    pref = pref.mul_product(&Product::from_poly_pow(&one_minus_q2, -ki));
    for i in 1..=ki {
        let num = &LaurentPoly::mono(q1().pow(i - 1)) - &LaurentPoly::mono(q2());
        let den = &LaurentPoly::mono(q1().pow(i)) - &LaurentPoly::one();
        pref = pref.mul_product(&Product::from_poly(&num).div(&Product::from_poly(&den)));
    }
    Ok(value.mul(&pref).reduce())
}

impl fmt::Display for ShuffleElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.sym())
    }
}
