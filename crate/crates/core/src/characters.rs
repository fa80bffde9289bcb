//! Torus characters at fixed points: tautological bundle, universal complex,
//! Ext bundle, tangent spaces and the tangent spaces of the Lagrangian
//! correspondence `V^k`.

use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::partitions::{enumerate_multipartitions, CornerKind, MultiPartition};
use crate::scalars::{q, q1, q2, t, Coeff, LaurentPoly, Monomial, Product, RationalFn};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CharError {
    #[error("PoleAtArgument: Lambda class has a pole at the given argument")]
    PoleAtArgument,
    #[error("DegenerateTangent: trivial weight in the tangent character at {0}")]
    DegenerateTangent(String),
    #[error("NotAFixedPair: ({0}, {1}) is not a fixed point of V^k")]
    NotAFixedPair(String, String),
}

impl CharError {
    pub fn name(&self) -> &'static str {
        match self {
            CharError::PoleAtArgument => "PoleAtArgument",
            CharError::DegenerateTangent(_) => "DegenerateTangent",
            CharError::NotAFixedPair(..) => "NotAFixedPair",
        }
    }
}

/// A virtual sum of torus weights, i.e. a Laurent polynomial with integer
/// coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct VirtualCharacter(LaurentPoly);

impl VirtualCharacter {
    pub fn zero() -> Self {
        VirtualCharacter(LaurentPoly::zero())
    }

    pub fn from_poly(p: LaurentPoly) -> Self {
        debug_assert!(p.terms().iter().all(|(_, c)| c.is_integer()));
        VirtualCharacter(p)
    }

    pub fn poly(&self) -> &LaurentPoly {
        &self.0
    }

    pub fn into_poly(self) -> LaurentPoly {
        self.0
    }

    /// Weights with their (signed) multiplicities.
    pub fn weights(&self) -> Vec<(Monomial, i64)> {
        self.0
            .terms()
            .iter()
            .map(|(m, c)| {
                let n: i64 = c.to_integer().try_into().expect("multiplicity fits in i64");
                (m.clone(), n)
            })
            .collect()
    }

    /// Sum of multiplicities (the virtual rank).
    pub fn rank(&self) -> BigInt {
        self.0.multiplicity_sum()
    }

    /// Multiplicity of the trivial weight.
    pub fn trivial_multiplicity(&self) -> i64 {
        let c = self.0.coeff_of(&Monomial::one());
        c.to_integer().try_into().expect("multiplicity fits in i64")
    }

    pub fn dual(&self) -> Self {
        VirtualCharacter(self.0.dual())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
}

impl std::ops::Add for &VirtualCharacter {
    type Output = VirtualCharacter;
    fn add(self, o: &VirtualCharacter) -> VirtualCharacter {
        VirtualCharacter(&self.0 + &o.0)
    }
}

impl std::ops::Sub for &VirtualCharacter {
    type Output = VirtualCharacter;
    fn sub(self, o: &VirtualCharacter) -> VirtualCharacter {
        VirtualCharacter(&self.0 - &o.0)
    }
}

impl std::ops::Mul for &VirtualCharacter {
    type Output = VirtualCharacter;
    fn mul(self, o: &VirtualCharacter) -> VirtualCharacter {
        VirtualCharacter(&self.0 * &o.0)
    }
}

impl std::fmt::Display for VirtualCharacter {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.0.fmt(f)
    }
}

fn mono(m: Monomial) -> LaurentPoly {
    LaurentPoly::mono(m)
}

fn sum_t(r: usize, e: i32) -> LaurentPoly {
    (1..=r).map(|i| mono(t(i).pow(e))).sum()
}

/// `(1 - a)(1 - b)` for monomials `a`, `b`.
fn two_factor(a: Monomial, b: Monomial) -> LaurentPoly {
    let one = LaurentPoly::one();
    &(&one - &mono(a)) * &(&one - &mono(b))
}

pub fn char_taut(lambda: &MultiPartition) -> VirtualCharacter {
    VirtualCharacter(lambda.boxes().iter().map(|b| b.weight_poly()).sum())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum WMethod {
    /// Through the class of the tautological bundle.
    Gamma,
    /// Inner minus outer corner weights.
    Corners,
}

pub fn char_w(lambda: &MultiPartition, method: WMethod) -> VirtualCharacter {
    match method {
        WMethod::Gamma => {
            let frame = sum_t(lambda.rank(), -1);
            let taut = char_taut(lambda);
            VirtualCharacter(&frame - &(&two_factor(q1(), q2()) * taut.poly()))
        }
        WMethod::Corners => VirtualCharacter(
            lambda
                .corners()
                .iter()
                .map(|c| match c.kind {
                    CornerKind::Inner => mono(c.weight()),
                    CornerKind::Outer => -mono(c.weight()),
                })
                .sum(),
        ),
    }
}

/// `1 - u/a` for a weight `a`.
fn lambda_factor(u: &Monomial, a: &Monomial) -> LaurentPoly {
    LaurentPoly::one_minus(Coeff::one(), u.div(a))
}

/// `Lambda(V, u) = prod (1 - u/a)^m` at a monomial argument, as a factored
/// product. A vanishing factor of positive multiplicity makes the class zero;
/// one of negative multiplicity is a pole.
pub fn lambda_product(v: &VirtualCharacter, u: &Monomial) -> Result<Product, CharError> {
    let mut out = Product::one();
    let mut vanishes = false;
    for (a, m) in v.weights() {
        let f = lambda_factor(u, &a);
        if f.is_zero() {
            if m < 0 {
                return Err(CharError::PoleAtArgument);
            }
            vanishes = true;
            continue;
        }
        out = out.mul(&Product::from_poly_pow(&f, m as i32));
    }
    Ok(if vanishes { Product::zero() } else { out })
}

/// `Lambda(V, u)` for an arbitrary rational argument.
pub fn lambda_class(v: &VirtualCharacter, u: &RationalFn) -> Result<RationalFn, CharError> {
    if let Some(p) = u.as_poly() {
        if let Some((m, c)) = p.as_monomial() {
            if c.is_one() {
                return Ok(lambda_product(v, m)?.to_ratfn());
            }
        }
    }
    let mut out = RationalFn::one();
    for (a, m) in v.weights() {
        let f = RationalFn::one().sub(&u.mul_monomial(&a.inv()));
        if f.is_zero() {
            if m < 0 {
                return Err(CharError::PoleAtArgument);
            }
            return Ok(RationalFn::zero());
        }
        out = out.mul(&f.pow(m as i32).expect("nonzero factor"));
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum EMethod {
    /// Through the tautological classes of both factors.
    Tautological,
    /// The explicit sum over pairs of framing indices and rows.
    Ffnr,
}

/// Character of `E` at the pair `(lambda, mu)`, where `lambda` sits on the
/// first factor and `mu` on the second.
pub fn char_e(lambda: &MultiPartition, mu: &MultiPartition, method: EMethod) -> VirtualCharacter {
    assert_eq!(lambda.rank(), mu.rank(), "rank mismatch");
    let r = lambda.rank();
    match method {
        EMethod::Tautological => {
            let tl = char_taut(lambda).into_poly();
            let tm = char_taut(mu).into_poly().dual();
            let a = &sum_t(r, 1) * &tl;
            let b = &(&sum_t(r, -1) * &mono(q().inv())) * &tm;
            let c = &(&two_factor(q1().inv(), q2().inv()) * &tl) * &tm;
            VirtualCharacter(&(&a + &b) - &c)
        }
        EMethod::Ffnr => {
            // (x^n - 1)/(x - 1), by exact division.
            let geom = |x: &Monomial, n: i32| -> LaurentPoly {
                let num = &mono(x.pow(n)) - &LaurentPoly::one();
                let den = &mono(x.clone()) - &LaurentPoly::one();
                num.div_exact(&den).expect("geometric series divides")
            };
            let kernel = two_factor(q1().inv(), q2().inv());
            let mut total = LaurentPoly::zero();
            for i in 1..=r {
                for ip in 1..=r {
                    let ratio = mono(t(i).div(&t(ip)));
                    let lam = lambda.comp(ip);
                    let nu = mu.comp(i);
                    let mut inner = LaurentPoly::zero();
                    for (jp, &row) in lam.rows().iter().enumerate() {
                        inner = &inner + &geom(&q1(), row as i32).mul_monomial(&q2().pow(jp as i32));
                    }
                    for (j, &row) in nu.rows().iter().enumerate() {
                        let g = geom(&q1().inv(), row as i32);
                        inner = &inner + &g.mul_monomial(&q().inv().mul(&q2().pow(-(j as i32))));
                    }
                    for (jp, &a) in lam.rows().iter().enumerate() {
                        for (j, &b) in nu.rows().iter().enumerate() {
                            let g = &geom(&q1(), a as i32) * &geom(&q1().inv(), b as i32);
                            let term = &(&kernel * &g).mul_monomial(&q2().pow(jp as i32 - j as i32));
                            inner = &inner - term;
                        }
                    }
                    total = &total + &(&ratio * &inner);
                }
            }
            VirtualCharacter(total)
        }
    }
}

/// Tangent character at a fixed point.
pub fn char_tangent(lambda: &MultiPartition) -> VirtualCharacter {
    char_e(lambda, lambda, EMethod::Tautological)
}

/// `g_lambda = Lambda(T_lambda M, 1)` as a factored product.
pub fn g_product(lambda: &MultiPartition) -> Result<Product, CharError> {
    let tan = char_tangent(lambda);
    if tan.trivial_multiplicity() != 0 {
        return Err(CharError::DegenerateTangent(lambda.to_string()));
    }
    lambda_product(&tan, &Monomial::one())
}

pub fn g_lambda(lambda: &MultiPartition) -> Result<RationalFn, CharError> {
    Ok(g_product(lambda)?.to_ratfn())
}

/// The `V^k` fixed-point rule: componentwise and rowwise
/// `lambda_j <= mu_j <= lambda_{j-1}`.
pub fn is_vk_pair(lambda: &MultiPartition, mu: &MultiPartition) -> bool {
    lambda.rank() == mu.rank()
        && lambda.parts().iter().zip(mu.parts()).all(|(l, m)| {
            (0..m.len().max(l.len())).all(|j| {
                l.row(j) <= m.row(j) && (j == 0 || m.row(j) <= l.row(j - 1))
            })
        })
}

pub fn vk_fixed_pairs(r: usize, d: u32, k: u32) -> Vec<(MultiPartition, MultiPartition)> {
    let uppers = enumerate_multipartitions(r, d + k);
    let mut out = Vec::new();
    for l in enumerate_multipartitions(r, d) {
        for m in &uppers {
            if is_vk_pair(&l, m) {
                out.push((l.clone(), m.clone()));
            }
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum TvForm {
    /// `T' = taut(mu)`, `T = taut(lambda)` in the formula with the
    /// `q2^-1 T' T^v` cross term.
    Lagrangian,
    /// Tangent space of the larger factor corrected by the universal complex
    /// and `-(1 - q1^-1) l l^v`, where `l = taut(mu) - taut(lambda)`.
    Relative,
    /// `Lagrangian` with the roles of the two tautological classes swapped.
    Swapped,
}

/// Tangent character of `V^k` at the fixed pair `(lambda, mu)`,
/// `lambda` the smaller multipartition.
pub fn char_tv(lambda: &MultiPartition, mu: &MultiPartition) -> Result<VirtualCharacter, CharError> {
    char_tv_form(lambda, mu, TvForm::Lagrangian)
}

pub fn char_tv_form(
    lambda: &MultiPartition,
    mu: &MultiPartition,
    form: TvForm,
) -> Result<VirtualCharacter, CharError> {
    if !is_vk_pair(lambda, mu) {
        return Err(CharError::NotAFixedPair(lambda.to_string(), mu.to_string()));
    }
    let r = lambda.rank();
    let (tp, tt) = match form {
        TvForm::Swapped => (char_taut(lambda).into_poly(), char_taut(mu).into_poly()),
        _ => (char_taut(mu).into_poly(), char_taut(lambda).into_poly()),
    };
    let one_minus_q1 = &LaurentPoly::one() - &mono(q1().inv());
    let out = match form {
        TvForm::Lagrangian | TvForm::Swapped => {
            let a = &sum_t(r, 1) * &tp;
            let b = &(&sum_t(r, -1) * &mono(q().inv())) * &tt.dual();
            let bracket = &(&(&(&tp * &tp.dual()) + &(&tt * &tt.dual())) - &(&tt * &tp.dual()))
                - &(&tp * &tt.dual()).mul_monomial(&q2().inv());
            &(&a + &b) - &(&one_minus_q1 * &bracket)
        }
        TvForm::Relative => {
            let l = &tp - &tt;
            let tan = char_tangent(mu).into_poly();
            let w = char_w(mu, WMethod::Gamma).into_poly();
            let corr = (&w * &l.dual()).mul_monomial(&q().inv());
            &(&tan - &corr) - &(&one_minus_q1 * &(&l * &l.dual()))
        }
    };
    Ok(VirtualCharacter(out))
}

/// `Lambda(T V^k, 1)` at a fixed pair.
pub fn tv_product(lambda: &MultiPartition, mu: &MultiPartition, form: TvForm) -> Result<Product, CharError> {
    let tv = char_tv_form(lambda, mu, form)?;
    if tv.trivial_multiplicity() != 0 {
        return Err(CharError::DegenerateTangent(format!("{lambda} < {mu}")));
    }
    lambda_product(&tv, &Monomial::one())
}

/// Virtual dimension helper for tests: `2 r |lambda|`.
pub fn expected_tangent_rank(lambda: &MultiPartition) -> BigInt {
    BigInt::from(2 * lambda.rank() as u64 * lambda.size() as u64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::parse_poly;

    fn mp(s: &str) -> MultiPartition {
        MultiPartition::parse(s).unwrap()
    }

    fn ch(s: &str) -> VirtualCharacter {
        VirtualCharacter::from_poly(parse_poly(s).unwrap())
    }

    #[test]
    fn tautological_examples() {
        assert!(char_taut(&mp("()")).is_zero());
        assert_eq!(char_taut(&mp("(2,1)")), ch("t1^-1*(1+q1+q2)"));
        assert_eq!(char_taut(&mp("(1)|(1)")), ch("t1^-1+t2^-1"));
    }

    #[test]
    fn universal_complex_examples() {
        assert_eq!(char_w(&mp("()"), WMethod::Gamma), ch("t1^-1"));
        let one = ch("t1^-1*(q1+q2-q1*q2)");
        assert_eq!(char_w(&mp("(1)"), WMethod::Gamma), one);
        assert_eq!(char_w(&mp("(1)"), WMethod::Corners), one);
        let l = mp("(4,3,1)");
        assert_eq!(char_w(&l, WMethod::Gamma), char_w(&l, WMethod::Corners));
    }

    #[test]
    fn lambda_examples() {
        let u = RationalFn::var(crate::scalars::Symbol::aux(1));
        assert!(lambda_class(&VirtualCharacter::zero(), &u).unwrap().is_one());
        let v = ch("t1^-1");
        let expect = crate::scalars::parse_ratfn("1 - z1*t1").unwrap();
        assert!(lambda_class(&v, &u).unwrap().eq_exact(&expect));
        let neg = ch("-q1");
        let expect = crate::scalars::parse_ratfn("1/(1 - z1/q1)").unwrap();
        assert!(lambda_class(&neg, &u).unwrap().eq_exact(&expect));
        assert_eq!(
            lambda_class(&ch("-1"), &RationalFn::one()),
            Err(CharError::PoleAtArgument)
        );
        assert!(lambda_class(&ch("1"), &RationalFn::one()).unwrap().is_zero());
    }

    #[test]
    fn ext_examples() {
        for m in [EMethod::Tautological, EMethod::Ffnr] {
            assert!(char_e(&mp("()"), &mp("()"), m).is_zero());
            assert_eq!(char_e(&mp("()"), &mp("(1)"), m), ch("q1^-1*q2^-1"));
        }
        let a = mp("(2,1)|(1)");
        let b = mp("(1)|(2)");
        assert_eq!(char_e(&a, &b, EMethod::Tautological), char_e(&a, &b, EMethod::Ffnr));
    }

    #[test]
    fn tangent_examples() {
        assert!(g_lambda(&mp("()")).unwrap().is_one());
        let g1 = g_lambda(&mp("(1)")).unwrap();
        assert!(g1.eq_exact(&crate::scalars::parse_ratfn("(1-q1)*(1-q2)").unwrap()));
        assert_eq!(char_tangent(&mp("(1)")), ch("q1^-1+q2^-1"));
    }

    #[test]
    fn trivial_weight_off_containment() {
        let e = char_e(&mp("(1)"), &mp("(2)"), EMethod::Tautological);
        assert_eq!(e.trivial_multiplicity(), 0);
        let e = char_e(&mp("(2)"), &mp("(1,1)"), EMethod::Tautological);
        assert!(e.trivial_multiplicity() > 0);
    }

    #[test]
    fn vk_pairs_examples() {
        assert_eq!(vk_fixed_pairs(1, 0, 1), vec![(mp("()"), mp("(1)"))]);
        assert_eq!(vk_fixed_pairs(1, 0, 2), vec![(mp("()"), mp("(2)"))]);
        assert_eq!(vk_fixed_pairs(1, 1, 0), vec![(mp("(1)"), mp("(1)"))]);
        assert!(char_tv(&mp("()"), &mp("(1,1)")).is_err());
    }

    #[test]
    fn tv_forms_agree() {
        for d in 0..3 {
            for k in 0..3 {
                for (l, m) in vk_fixed_pairs(2, d, k) {
                    let a = char_tv_form(&l, &m, TvForm::Lagrangian).unwrap();
                    let b = char_tv_form(&l, &m, TvForm::Relative).unwrap();
                    assert_eq!(a, b, "{l} {m}");
                }
            }
        }
    }

    #[test]
    fn tv_empty_is_zero() {
        assert!(char_tv(&mp("()"), &mp("()")).unwrap().is_zero());
    }

    #[test]
    fn tv_has_no_trivial_weight() {
        for d in 0..3 {
            for k in 0..=(4 - d) {
                for (l, m) in vk_fixed_pairs(1, d, k) {
                    assert!(!tv_product(&l, &m, TvForm::Lagrangian).unwrap().is_zero());
                }
            }
        }
    }
}
