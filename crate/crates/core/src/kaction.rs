//! Operators on `K = (+)_d K_d` in the fixed-point basis.
//!
//! Matrix coefficients are computed three ways: over standard Young
//! tableaux (the strict route for `X_m`), over all orderings of the skew
//! boxes (for arbitrary representatives), and by iterated residues. The
//! diagonal operators `p_n`, `H_n` and the geometric operators `a_k`, `b_k`
//! live here too.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use itertools::Itertools;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::characters::{
    char_e, char_taut, char_w, g_product, is_vk_pair, lambda_product, tv_product, CharError, EMethod,
    TvForm, WMethod,
};
use crate::exec::par_map;
use crate::partitions::{enumerate_multipartitions, Box as Cell, MultiPartition};
use crate::scalars::{
    eq, int, q, q1, q2, t, z, Coeff, EqMode, LaurentPoly, Monomial, Product, RationalFn, ScalarError, Symbol,
};
use crate::shuffle::{build_ab, build_m, build_x, AbKind, RepTerm, ShuffleElement, ShuffleError, Sign};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ActionError {
    #[error("CancellationMismatch: {0}")]
    CancellationMismatch(String),
    #[error("UnenumerablePoles: {0}")]
    UnenumerablePoles(String),
    #[error("DegreeMismatch: {0}")]
    DegreeMismatch(String),
    #[error(transparent)]
    Char(#[from] CharError),
    #[error(transparent)]
    Shuffle(#[from] ShuffleError),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

impl ActionError {
    pub fn name(&self) -> &'static str {
        match self {
            ActionError::CancellationMismatch(_) => "CancellationMismatch",
            ActionError::UnenumerablePoles(_) => "UnenumerablePoles",
            ActionError::DegreeMismatch(_) => "DegreeMismatch",
            ActionError::Char(e) => e.name(),
            ActionError::Shuffle(e) => e.name(),
            ActionError::Scalar(e) => e.name(),
        }
    }
}

pub type Result<T> = std::result::Result<T, ActionError>;

/// The fixed-point basis of `K_d`; empty for negative `d`.
pub fn k_basis(r: usize, d: i32) -> Vec<MultiPartition> {
    if d < 0 {
        Vec::new()
    } else {
        enumerate_multipartitions(r, d as u32)
    }
}

/// `g_lambda`, memoized.
pub fn g_of(lambda: &MultiPartition) -> Result<Product> {
    static CACHE: OnceLock<Mutex<HashMap<MultiPartition, Product>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(p) = cache.lock().expect("g cache").get(lambda) {
        return Ok(p.clone());
    }
    let p = g_product(lambda)?;
    cache.lock().expect("g cache").insert(lambda.clone(), p.clone());
    Ok(p)
}

fn g_ratio(num: &MultiPartition, den: &MultiPartition) -> Result<Product> {
    Ok(g_of(num)?.div(&g_of(den)?))
}

/// A product `scalar * monomial * prod polys * prod (1 - N)^e` kept in
/// factored form so that factors vanishing identically can be detected before
/// anything is multiplied out.
#[derive(Clone, Debug)]
pub struct FactorProduct {
    pub scalar: RationalFn,
    pub monomial: Monomial,
    pub polys: Vec<LaurentPoly>,
    pub units: Vec<(Monomial, i32)>,
}

impl FactorProduct {
    pub fn subs(&self, b: &[(Symbol, Monomial)]) -> FactorProduct {
        FactorProduct {
            scalar: self.scalar.clone(),
            monomial: self.monomial.subs(b),
            polys: self.polys.iter().map(|p| p.subs_monomials(b)).collect(),
            units: self.units.iter().map(|(n, e)| (n.subs(b), *e)).collect(),
        }
    }

    /// Multiplicities of identically vanishing numerator and denominator
    /// factors.
    pub fn vanishing(&self) -> (u32, u32) {
        let mut num = self.polys.iter().filter(|p| p.is_zero()).count() as u32;
        let mut den = 0;
        for (n, e) in &self.units {
            if n.is_one() {
                if *e > 0 {
                    num += *e as u32;
                } else {
                    den += e.unsigned_abs();
                }
            }
        }
        (num, den)
    }

    /// Product of the factors that do not vanish.
    pub fn nonvanishing_value(&self) -> RationalFn {
        let mut prod = Product::monomial(self.monomial.clone());
        for p in self.polys.iter().filter(|p| !p.is_zero()) {
            prod = prod.mul(&Product::from_poly(p));
        }
        for (n, e) in self.units.iter().filter(|(n, _)| !n.is_one()) {
            prod = prod.mul(&Product::from_poly_pow(&LaurentPoly::one_minus(Coeff::one(), n.clone()), *e));
        }
        self.scalar.mul_product(&prod)
    }

    /// The vanishing-factor protocol: pair off vanishing numerator and
    /// denominator factors; a leftover vanishing numerator gives 0; exactly
    /// `k` vanishing denominators must remain and are dropped. With
    /// `strict = false`, fewer than `k` also gives 0.
    pub fn cancel_vanishing(&self, k: usize, strict: bool) -> Result<RationalFn> {
        let (num, den) = self.vanishing();
        let pair = num.min(den);
        let (num, den) = (num - pair, den - pair);
        if num > 0 {
            return Ok(RationalFn::zero());
        }
        let k = k as u32;
        if den == k {
            Ok(self.nonvanishing_value())
        } else if den < k && !strict {
            Ok(RationalFn::zero())
        } else {
            Err(ActionError::CancellationMismatch(format!(
                "{den} vanishing denominator factor(s) remain, expected {k}"
            )))
        }
    }
}

/// Factors of `Lambda(+-W^+-|_mu, x^{+-1} q^eps)` as `(N, e)` with the factor
/// `(1 - N)^e`.
pub fn lambda_units(mu: &MultiPartition, sign: Sign, x: &Monomial) -> Vec<(Monomial, i32)> {
    let mut out = Vec::new();
    for c in mu.corners() {
        let w = c.weight();
        let inner = c.kind == crate::partitions::CornerKind::Inner;
        match sign {
            Sign::Plus => out.push((x.mul(&q()).div(&w), if inner { 1 } else { -1 })),
            Sign::Minus => out.push((w.div(x), if inner { -1 } else { 1 })),
        }
    }
    out
}

/// The integrand of one representative term acting into `mu`, in the
/// variables `z_1..z_k`.
fn integrand(term: &RepTerm, k: usize, sign: Sign, mu: &MultiPartition) -> FactorProduct {
    let r = mu.rank() as i32;
    let mut monomial = Monomial::one();
    let mut units: Vec<(Monomial, i32)> = term.kernels.iter().map(|(kern, e)| (kern.ratio(), *e)).collect();
    for i in 1..=k {
        monomial = monomial.mul(&z(i).pow(-r * sign.eps()));
        units.extend(lambda_units(mu, sign, &z(i)));
    }
    FactorProduct {
        scalar: term.coeff.clone(),
        monomial,
        polys: vec![term.poly.clone()],
        units,
    }
}

fn bindings_for(cells: &[Cell]) -> Vec<(Symbol, Monomial)> {
    cells.iter().enumerate().map(|(i, c)| (Symbol::aux(i + 1), c.weight())).collect()
}

fn check_degrees(k: usize, sign: Sign, lambda: &MultiPartition, mu: &MultiPartition) -> Result<()> {
    let want = lambda.size() as i64 + sign.as_i32() as i64 * k as i64;
    if lambda.rank() != mu.rank() || mu.size() as i64 != want {
        return Err(ActionError::DegreeMismatch(format!(
            "|{mu}| should be |{lambda}| {sign} {k}"
        )));
    }
    Ok(())
}

/// `<mu| X^+-_m |lambda>` summed over standard Young tableaux, with the
/// strict vanishing-factor protocol.
pub fn coeff_x(m: &LaurentPoly, k: usize, sign: Sign, lambda: &MultiPartition, mu: &MultiPartition) -> Result<RationalFn> {
    let x = build_x(m, k)?;
    coeff_syt(&x, sign, lambda, mu)
}

fn coeff_syt(x: &ShuffleElement, sign: Sign, lambda: &MultiPartition, mu: &MultiPartition) -> Result<RationalFn> {
    let k = x.k();
    check_degrees(k, sign, lambda, mu)?;
    let tableaux = match sign {
        Sign::Plus => crate::partitions::enumerate_syt(lambda, mu),
        Sign::Minus => crate::partitions::enumerate_syt(mu, lambda),
    };
    if tableaux.is_empty() {
        return Ok(RationalFn::zero());
    }
    let forms: Vec<FactorProduct> = x.terms().iter().map(|t| integrand(t, k, sign, mu)).collect();
    let mut total = RationalFn::zero();
    for tab in &tableaux {
        let b = bindings_for(&tab.boxes);
        for f in &forms {
            total = total.add(&f.subs(&b).cancel_vanishing(k, true)?);
        }
    }
    Ok(total.mul_product(&g_ratio(lambda, mu)?).reduce())
}

/// `<mu| P^+- |lambda>` for an arbitrary representative, summed over all
/// orderings of the skew boxes.
pub fn coeff_shuffle(p: &ShuffleElement, sign: Sign, lambda: &MultiPartition, mu: &MultiPartition) -> Result<RationalFn> {
    let k = p.k();
    check_degrees(k, sign, lambda, mu)?;
    let (small, large) = match sign {
        Sign::Plus => (lambda, mu),
        Sign::Minus => (mu, lambda),
    };
    if !small.le(large) {
        return Ok(RationalFn::zero());
    }
    let cells = large.skew_boxes(small);
    let forms: Vec<FactorProduct> = p.terms().iter().map(|t| integrand(t, k, sign, mu)).collect();
    let mut total = RationalFn::zero();
    for perm in cells.iter().copied().permutations(k) {
        let b = bindings_for(&perm);
        for f in &forms {
            total = total.add(&f.subs(&b).cancel_vanishing(k, false)?);
        }
    }
    Ok(total.mul_product(&g_ratio(lambda, mu)?).reduce())
}

/// The cell with weight `w`, if `w` is the weight of a cell.
pub fn weight_to_cell(w: &Monomial, r: usize) -> Option<Cell> {
    if w.max_aux() > 0 || w.raw_exp(Symbol::Q1) % 2 != 0 {
        return None;
    }
    let x = w.exp(Symbol::Q1);
    let y = w.exp(Symbol::Q2);
    if x < 0 || y < 0 {
        return None;
    }
    let mut comp = None;
    for c in 1..=crate::scalars::MAX_RANK {
        match w.exp(Symbol::t(c)) {
            0 => {}
            -1 if comp.is_none() && c <= r => comp = Some(c),
            _ => return None,
        }
    }
    comp.map(|c| Cell::new(c, x as u32, y as u32))
}

/// `-Res_{u = b} F du/u` in the variable `z_idx`, other variables symbolic.
/// `None` when the residue vanishes.
fn residue_at(f: &FactorProduct, idx: usize, b: &Monomial) -> Result<Option<FactorProduct>> {
    let sym = Symbol::aux(idx);
    let bind = [(sym, b.clone())];
    let mut units = Vec::with_capacity(f.units.len());
    let mut order = 0i32;
    let mut flip = false;
    for (n, e) in &f.units {
        let n2 = n.subs(&bind);
        if !n2.is_one() {
            units.push((n2, *e));
            continue;
        }
        let s = n.raw_exp(sym);
        if s.abs() != 1 {
            return Err(ActionError::UnenumerablePoles(format!(
                "factor 1 - {n} has degree {s} in {}",
                sym.name()
            )));
        }
        order -= e;
        // Near u = b, 1 - N(u) = -s (u - b) / b + ...
        if s == 1 && e.rem_euclid(2) == 1 {
            flip = !flip;
        }
    }
    if order <= 0 {
        return Ok(None);
    }
    if order > 1 {
        return Err(ActionError::UnenumerablePoles(format!(
            "pole of order {order} at {} = {b}",
            sym.name()
        )));
    }
    let polys: Vec<LaurentPoly> = f.polys.iter().map(|p| p.subs_monomials(&bind)).collect();
    if polys.iter().any(|p| p.is_zero()) {
        return Ok(None);
    }
    let scalar = if flip { f.scalar.clone() } else { f.scalar.neg() };
    Ok(Some(FactorProduct {
        scalar,
        monomial: f.monomial.subs(&bind),
        polys,
        units,
    }))
}

/// One row of `P^+-`: all `<mu| P |lambda>` for the fixed target `mu`,
/// by iterated residues in the normal order.
pub fn residue_row(p: &ShuffleElement, sign: Sign, mu: &MultiPartition) -> Result<BTreeMap<MultiPartition, RationalFn>> {
    let k = p.k();
    let r = mu.rank();
    let base: Vec<Monomial> = match sign {
        Sign::Plus => mu.outer_corners().iter().map(|c| c.weight().div(&q())).collect(),
        Sign::Minus => mu.inner_corners().iter().map(|c| c.weight()).collect(),
    };
    let order: Vec<usize> = match sign {
        Sign::Plus => (1..=k).collect(),
        Sign::Minus => (1..=k).rev().collect(),
    };
    let lead = if sign == Sign::Minus && k % 2 == 1 {
        RationalFn::from_int(-1)
    } else {
        RationalFn::one()
    };
    let mut states: Vec<(Vec<Monomial>, FactorProduct)> = p
        .terms()
        .iter()
        .map(|t| {
            let mut f = integrand(t, k, sign, mu);
            f.scalar = f.scalar.mul(&lead);
            (Vec::new(), f)
        })
        .collect();
    for &idx in &order {
        let mut next = Vec::new();
        for (cfg, f) in &states {
            let mut cands = base.clone();
            for b in cfg {
                match sign {
                    Sign::Plus => cands.extend([b.div(&q1()), b.div(&q2())]),
                    Sign::Minus => cands.extend([b.mul(&q1()), b.mul(&q2())]),
                }
            }
            let cands: Vec<Monomial> = cands.into_iter().unique().collect();
            for b in cands {
                if let Some(g) = residue_at(f, idx, &b)? {
                    let mut c = cfg.clone();
                    c.push(b);
                    next.push((c, g));
                }
            }
        }
        states = next;
    }
    let mut acc: BTreeMap<MultiPartition, RationalFn> = BTreeMap::new();
    for (cfg, f) in states {
        let value = f.cancel_vanishing(0, true).map_err(|_| {
            ActionError::UnenumerablePoles(format!("pole left after fixing all variables at {cfg:?}"))
        })?;
        if value.is_zero() {
            continue;
        }
        let bad = || ActionError::UnenumerablePoles(format!("nonzero residue at non-tableau point {cfg:?}"));
        let mut cur = mu.clone();
        for w in &cfg {
            let cell = weight_to_cell(w, r).ok_or_else(bad)?;
            cur = match sign {
                Sign::Plus => cur.remove_box(&cell),
                Sign::Minus => cur.add_box(&cell),
            }
            .ok_or_else(bad)?;
        }
        let e = acc.entry(cur).or_insert_with(RationalFn::zero);
        *e = e.add(&value);
    }
    let mut out = BTreeMap::new();
    for (lambda, v) in acc {
        let v = v.mul_product(&g_ratio(&lambda, mu)?).reduce();
        if !v.is_zero() {
            out.insert(lambda, v);
        }
    }
    Ok(out)
}

/// `P^+- [lambda]` by iterated residues.
pub fn residue_action(p: &ShuffleElement, sign: Sign, lambda: &MultiPartition) -> Result<KVector> {
    let r = lambda.rank();
    let target = lambda.size() as i32 + sign.as_i32() * p.k() as i32;
    let mut out = KVector::zero(r, target);
    for mu in k_basis(r, target) {
        if let Some(v) = residue_row(p, sign, &mu)?.remove(lambda) {
            out.insert(mu, v);
        }
    }
    Ok(out)
}

/// Eigenvalue of `p_n^+-` at `lambda`: `+-[T]^{+-n}`.
pub fn p_eigenvalue(n: u32, sign: Sign, lambda: &MultiPartition) -> LaurentPoly {
    let e = sign.as_i32() * n as i32;
    let s: LaurentPoly = lambda.boxes().iter().map(|b| LaurentPoly::mono(b.weight().pow(e))).sum();
    if sign == Sign::Plus {
        s
    } else {
        -s
    }
}

pub fn op_p(n: u32, sign: Sign, r: usize, d: i32) -> OperatorMatrix {
    let mut m = OperatorMatrix::new(r, d, d);
    for lambda in k_basis(r, d) {
        m.insert(lambda.clone(), lambda.clone(), RationalFn::from_poly(p_eigenvalue(n, sign, &lambda)));
    }
    m
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum HConvention {
    /// Generating series from the universal complex, including its framing
    /// part `sum t_i^{-1}`.
    Framed,
    /// Exponent built from `p_n^+- = +-[T]^{+-n}` alone.
    Literal,
}

/// `H_0^+- = (-q^eps)^r t_1 ... t_r`.
pub fn h_zero(sign: Sign, r: usize) -> LaurentPoly {
    let mut m = q().pow(sign.eps() * r as i32);
    for i in 1..=r {
        m = m.mul(&t(i));
    }
    let c = if r % 2 == 0 { int(1) } else { int(-1) };
    LaurentPoly::term(m, c)
}

/// Eigenvalue of `H_n^+-` at `lambda`: `H^+(z) = sum H_n^+ z^-n` and
/// `H^-(z) = sum H_n^- z^n`, with `H^+(z) = H_0^+ exp(sum (1 - q^-n) W^[n] z^-n / n)`
/// and `H^-(z) = H_0^- exp(sum (1 - q^n) (W^v)^[n] z^n / n)`.
pub fn h_eigenvalue(n: u32, sign: Sign, lambda: &MultiPartition, conv: HConvention) -> LaurentPoly {
    let w = match conv {
        HConvention::Framed => char_w(lambda, WMethod::Corners).into_poly(),
        HConvention::Literal => {
            let kappa = &LaurentPoly::one_minus(int(1), q1()) * &LaurentPoly::one_minus(int(1), q2());
            -(&kappa * char_taut(lambda).poly())
        }
    };
    let s = sign.as_i32();
    let a: Vec<LaurentPoly> = (0..=n as i32)
        .map(|j| {
            if j == 0 {
                return LaurentPoly::zero();
            }
            let adams = w.map_monomials(|m| m.pow(s * j));
            &LaurentPoly::one_minus(int(1), q().pow(-s * j)) * &adams
        })
        .collect();
    let mut e = vec![LaurentPoly::one()];
    for m in 1..=n as usize {
        let mut acc = LaurentPoly::zero();
        for j in 1..=m {
            acc = &acc + &(&a[j] * &e[m - j]);
        }
        e.push(acc.scale(&Coeff::new(1.into(), (m as i64).into())));
    }
    &h_zero(sign, lambda.rank()) * &e[n as usize]
}

pub fn op_h(n: u32, sign: Sign, r: usize, d: i32, conv: HConvention) -> OperatorMatrix {
    let mut m = OperatorMatrix::new(r, d, d);
    for lambda in k_basis(r, d) {
        let v = h_eigenvalue(n, sign, &lambda, conv);
        m.insert(lambda.clone(), lambda, RationalFn::from_poly(v));
    }
    m
}

/// Which fixed point's `g` divides the `a_k` matrix element.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum GNorm {
    Target,
    Source,
}

/// `<mu| a_k^+- |lambda>`: `Lambda(E_{lambda,mu}, 1) / g_mu` for `+` and
/// `Lambda(E_{mu,lambda}, 1) / g_mu` for `-`.
pub fn coeff_a(k: usize, sign: Sign, lambda: &MultiPartition, mu: &MultiPartition, norm: GNorm) -> Result<RationalFn> {
    check_degrees(k, sign, lambda, mu)?;
    let e = match sign {
        Sign::Plus => char_e(lambda, mu, EMethod::Tautological),
        Sign::Minus => char_e(mu, lambda, EMethod::Tautological),
    };
    let num = lambda_product(&e, &Monomial::one())?;
    if num.is_zero() {
        return Ok(RationalFn::zero());
    }
    let g = match norm {
        GNorm::Target => g_of(mu)?,
        GNorm::Source => g_of(lambda)?,
    };
    Ok(num.div(&g).to_ratfn())
}

/// `<mu| b_k^+- |lambda>`: `g_lambda / Lambda(T V^k, 1)` at the fixed pair
/// (smaller, larger), zero off the fixed pairs.
pub fn coeff_b(k: usize, sign: Sign, lambda: &MultiPartition, mu: &MultiPartition, form: TvForm) -> Result<RationalFn> {
    check_degrees(k, sign, lambda, mu)?;
    let (small, large) = match sign {
        Sign::Plus => (lambda, mu),
        Sign::Minus => (mu, lambda),
    };
    if !is_vk_pair(small, large) {
        return Ok(RationalFn::zero());
    }
    let tv = tv_product(small, large, form)?;
    Ok(g_of(lambda)?.div(&tv).to_ratfn())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Method {
    /// Standard Young tableaux; only for elements of the form `X_m`, other
    /// elements fall back to `Orderings`.
    Syt,
    Orderings,
    Residue,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActionOptions {
    pub method: Method,
    pub h: HConvention,
    pub tv: TvForm,
    pub a_norm: GNorm,
}

impl Default for ActionOptions {
    fn default() -> Self {
        ActionOptions {
            method: Method::Syt,
            h: HConvention::Framed,
            tv: TvForm::Lagrangian,
            a_norm: GNorm::Target,
        }
    }
}

/// Operators that `op_matrix` knows how to assemble.
#[derive(Clone, Debug)]
pub enum OpSpec {
    /// `X_m` in `k` variables.
    X { m: LaurentPoly, k: usize },
    /// An arbitrary shuffle element, by its representative.
    Element(ShuffleElement),
    /// `P_{+-k,d}`; the sign is passed separately.
    P { k: usize, d: i32 },
    /// `X_{A_k (z_1..z_k)^{r eps}}`.
    A { k: usize },
    /// `X_{B_k (z_1..z_k)^{r eps}}`.
    B { k: usize },
    Power { n: u32 },
    H { n: u32 },
    GeoA { k: usize },
    GeoB { k: usize },
    /// Baranovsky operator, from its geometric class; equals `P_{k,0}`.
    Baranovsky { k: usize },
}

impl OpSpec {
    pub fn shift(&self) -> i32 {
        match self {
            OpSpec::X { k, .. }
            | OpSpec::P { k, .. }
            | OpSpec::A { k }
            | OpSpec::B { k }
            | OpSpec::GeoA { k }
            | OpSpec::GeoB { k }
            | OpSpec::Baranovsky { k } => *k as i32,
            OpSpec::Element(e) => e.k() as i32,
            OpSpec::Power { .. } | OpSpec::H { .. } => 0,
        }
    }

    pub fn label(&self) -> String {
        match self {
            OpSpec::X { m, k } => format!("X[{m}; k={k}]"),
            OpSpec::Element(e) => format!("shuffle element in {} variables", e.k()),
            OpSpec::P { k, d } => format!("P({k},{d})"),
            OpSpec::A { k } => format!("A{k}"),
            OpSpec::B { k } => format!("B{k}"),
            OpSpec::Power { n } => format!("p{n}"),
            OpSpec::H { n } => format!("H{n}"),
            OpSpec::GeoA { k } => format!("a{k}"),
            OpSpec::GeoB { k } => format!("b{k}"),
            OpSpec::Baranovsky { k } => format!("Baranovsky P({k},0)"),
        }
    }

    /// The shuffle element whose action this is, for the shuffle-type specs.
    pub fn element(&self, sign: Sign, r: usize) -> Result<Option<(ShuffleElement, bool)>> {
        let det = r as i32 * sign.eps();
        Ok(match self {
            OpSpec::X { m, k } => Some((build_x(m, *k)?, true)),
            OpSpec::Element(e) => Some((e.clone(), false)),
            OpSpec::P { k, d } => Some((build_x(&build_m(*k, *d), *k)?, true)),
            OpSpec::A { k } => Some((build_ab(AbKind::A, *k)?.times_det(det), false)),
            OpSpec::B { k } => Some((build_ab(AbKind::B, *k)?.times_det(det), false)),
            // The geometric class m_{k,0}(l_k..l_1)(l_1..l_k)^{-r eps} goes through the
            // flag-variety correspondence x_m -> X_{m(z_k..z_1)(z_1..z_k)^{r eps}}, so the
            // reversal and the determinant twist cancel.
            OpSpec::Baranovsky { k } => Some((build_x(&build_m(*k, 0), *k)?, true)),
            _ => None,
        })
    }
}

/// The block of `spec^{sign}` from `K_d` to `K_{d +- shift}`.
pub fn op_matrix(spec: &OpSpec, sign: Sign, r: usize, d: i32, opts: &ActionOptions) -> Result<OperatorMatrix> {
    match spec {
        OpSpec::Power { n } => return Ok(op_p(*n, sign, r, d)),
        OpSpec::H { n } => return Ok(op_h(*n, sign, r, d, opts.h)),
        _ => {}
    }
    let target = d + sign.as_i32() * spec.shift();
    let mut out = OperatorMatrix::new(r, d, target);
    let sources = k_basis(r, d);
    let targets = k_basis(r, target);
    if sources.is_empty() || targets.is_empty() {
        return Ok(out);
    }
    if let Some((el, is_x)) = spec.element(sign, r)? {
        if opts.method == Method::Residue {
            let rows = par_map(&targets, |mu| residue_row(&el, sign, mu));
            for (mu, row) in targets.iter().zip(rows) {
                for (lambda, v) in row? {
                    out.insert(lambda, mu.clone(), v);
                }
            }
            return Ok(out);
        }
        let strict = is_x && opts.method == Method::Syt;
        let pairs: Vec<(&MultiPartition, &MultiPartition)> = sources.iter().cartesian_product(&targets).collect();
        let vals = par_map(&pairs, |(l, m)| {
            if strict {
                coeff_syt(&el, sign, l, m)
            } else {
                coeff_shuffle(&el, sign, l, m)
            }
        });
        for ((l, m), v) in pairs.into_iter().zip(vals) {
            out.insert((*l).clone(), (*m).clone(), v?);
        }
        return Ok(out);
    }
    let pairs: Vec<(&MultiPartition, &MultiPartition)> = sources.iter().cartesian_product(&targets).collect();
    let vals = par_map(&pairs, |(l, m)| match spec {
        OpSpec::GeoA { k } => coeff_a(*k, sign, l, m, opts.a_norm),
        OpSpec::GeoB { k } => coeff_b(*k, sign, l, m, opts.tv),
        _ => unreachable!("handled above"),
    });
    for ((l, m), v) in pairs.into_iter().zip(vals) {
        out.insert((*l).clone(), (*m).clone(), v?);
    }
    Ok(out)
}

/// A block `K_source -> K_target`, stored sparsely by (source, target).
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorMatrix {
    pub rank: usize,
    pub source: i32,
    pub target: i32,
    entries: BTreeMap<(MultiPartition, MultiPartition), RationalFn>,
}

impl OperatorMatrix {
    pub fn new(rank: usize, source: i32, target: i32) -> Self {
        OperatorMatrix {
            rank,
            source,
            target,
            entries: BTreeMap::new(),
        }
    }

    /// `c` times the identity of `K_d`.
    pub fn scalar(rank: usize, d: i32, c: &RationalFn) -> Self {
        let mut m = OperatorMatrix::new(rank, d, d);
        for l in k_basis(rank, d) {
            m.insert(l.clone(), l, c.clone());
        }
        m
    }

    /// Store an entry; zeros are dropped.
    pub fn insert(&mut self, source: MultiPartition, target: MultiPartition, v: RationalFn) {
        if v.is_zero() {
            self.entries.remove(&(source, target));
        } else {
            self.entries.insert((source, target), v);
        }
    }

    pub fn get(&self, source: &MultiPartition, target: &MultiPartition) -> RationalFn {
        self.entries
            .get(&(source.clone(), target.clone()))
            .cloned()
            .unwrap_or_else(RationalFn::zero)
    }

    pub fn entries(&self) -> impl Iterator<Item = (&MultiPartition, &MultiPartition, &RationalFn)> {
        self.entries.iter().map(|((l, m), v)| (l, m, v))
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn map_entries(&self, f: impl Fn(&RationalFn) -> RationalFn) -> Self {
        let mut out = OperatorMatrix::new(self.rank, self.source, self.target);
        for ((l, m), v) in &self.entries {
            out.insert(l.clone(), m.clone(), f(v));
        }
        out
    }

    pub fn scale(&self, c: &RationalFn) -> Self {
        self.map_entries(|v| v.mul(c))
    }

    fn same_shape(&self, other: &OperatorMatrix) -> Result<()> {
        if self.rank != other.rank || self.source != other.source || self.target != other.target {
            return Err(ActionError::DegreeMismatch(format!(
                "blocks K_{} -> K_{} and K_{} -> K_{}",
                self.source, self.target, other.source, other.target
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &OperatorMatrix) -> Result<Self> {
        self.same_shape(other)?;
        let mut out = self.clone();
        for ((l, m), v) in &other.entries {
            let cur = out.get(l, m);
            out.insert(l.clone(), m.clone(), cur.add(v).reduce());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &OperatorMatrix) -> Result<Self> {
        self.add(&other.scale(&RationalFn::from_int(-1)))
    }

    /// First entry where the two blocks differ, as (source, target, self, other).
    pub fn first_difference(
        &self,
        other: &OperatorMatrix,
        mode: EqMode,
    ) -> Result<Option<(MultiPartition, MultiPartition, RationalFn, RationalFn)>> {
        self.same_shape(other)?;
        let keys: std::collections::BTreeSet<_> = self.entries.keys().chain(other.entries.keys()).collect();
        for (l, m) in keys {
            let a = self.get(l, m);
            let b = other.get(l, m);
            if !eq(&a, &b, mode) {
                return Ok(Some((l.clone(), m.clone(), a, b)));
            }
        }
        Ok(None)
    }

    pub fn equals(&self, other: &OperatorMatrix, mode: EqMode) -> Result<bool> {
        Ok(self.first_difference(other, mode)?.is_none())
    }
}

impl fmt::Display for OperatorMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "K_{} -> K_{}  (r = {}, {} nonzero)", self.source, self.target, self.rank, self.nnz())?;
        for ((l, m), v) in &self.entries {
            writeln!(f, "  <{m}| . |{l}> = {v}")?;
        }
        Ok(())
    }
}

/// `a . b` (apply `b` first).
pub fn compose(a: &OperatorMatrix, b: &OperatorMatrix) -> Result<OperatorMatrix> {
    if a.rank != b.rank || b.target != a.source {
        return Err(ActionError::DegreeMismatch(format!(
            "cannot compose K_{} -> K_{} after K_{} -> K_{}",
            a.source, a.target, b.source, b.target
        )));
    }
    let mut by_source: BTreeMap<&MultiPartition, Vec<(&MultiPartition, &RationalFn)>> = BTreeMap::new();
    for ((l, m), v) in &a.entries {
        by_source.entry(l).or_default().push((m, v));
    }
    let mut acc: BTreeMap<(MultiPartition, MultiPartition), RationalFn> = BTreeMap::new();
    for ((l, mid), v) in &b.entries {
        if let Some(row) = by_source.get(mid) {
            for (m, w) in row {
                let e = acc.entry((l.clone(), (*m).clone())).or_insert_with(RationalFn::zero);
                *e = e.add(&v.mul(w));
            }
        }
    }
    let mut out = OperatorMatrix::new(a.rank, b.source, a.target);
    for ((l, m), v) in acc {
        out.insert(l, m, v.reduce());
    }
    Ok(out)
}

/// `ab - ba` for two blocks on the same `K_d`.
pub fn commutator(a: &OperatorMatrix, b: &OperatorMatrix) -> Result<OperatorMatrix> {
    compose(a, b)?.sub(&compose(b, a)?)
}

/// An operator materialized block by block on demand.
pub struct Operator {
    pub spec: OpSpec,
    pub sign: Sign,
    pub rank: usize,
    pub opts: ActionOptions,
    blocks: Mutex<BTreeMap<i32, Arc<OperatorMatrix>>>,
}

impl Operator {
    pub fn new(spec: OpSpec, sign: Sign, rank: usize, opts: ActionOptions) -> Self {
        Operator {
            spec,
            sign,
            rank,
            opts,
            blocks: Mutex::new(BTreeMap::new()),
        }
    }

    pub fn shift(&self) -> i32 {
        self.sign.as_i32() * self.spec.shift()
    }

    pub fn block(&self, d: i32) -> Result<Arc<OperatorMatrix>> {
        if let Some(b) = self.blocks.lock().expect("block cache").get(&d) {
            return Ok(b.clone());
        }
        let b = Arc::new(op_matrix(&self.spec, self.sign, self.rank, d, &self.opts)?);
        self.blocks.lock().expect("block cache").insert(d, b.clone());
        Ok(b)
    }

    /// `(a . b)` on `K_d`.
    pub fn compose_at(a: &Operator, b: &Operator, d: i32) -> Result<OperatorMatrix> {
        compose(&*a.block(d + b.shift())?, &*b.block(d)?)
    }

    /// `[a, b]` on `K_d`.
    pub fn commutator_at(a: &Operator, b: &Operator, d: i32) -> Result<OperatorMatrix> {
        Operator::compose_at(a, b, d)?.sub(&Operator::compose_at(b, a, d)?)
    }
}

/// A class in `K_d`, by its fixed-point coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct KVector {
    pub rank: usize,
    pub degree: i32,
    entries: BTreeMap<MultiPartition, RationalFn>,
}

impl KVector {
    pub fn zero(rank: usize, degree: i32) -> Self {
        KVector {
            rank,
            degree,
            entries: BTreeMap::new(),
        }
    }

    pub fn basis(lambda: &MultiPartition) -> Self {
        let mut v = KVector::zero(lambda.rank(), lambda.size() as i32);
        v.insert(lambda.clone(), RationalFn::one());
        v
    }

    /// `1_d = sum_lambda [lambda] / g_lambda`.
    pub fn unit_class(rank: usize, degree: i32) -> Result<Self> {
        let mut v = KVector::zero(rank, degree);
        for l in k_basis(rank, degree) {
            let g = g_of(&l)?;
            v.insert(l, g.inv().to_ratfn());
        }
        Ok(v)
    }

    pub fn insert(&mut self, lambda: MultiPartition, v: RationalFn) {
        if v.is_zero() {
            self.entries.remove(&lambda);
        } else {
            self.entries.insert(lambda, v);
        }
    }

    pub fn get(&self, lambda: &MultiPartition) -> RationalFn {
        self.entries.get(lambda).cloned().unwrap_or_else(RationalFn::zero)
    }

    pub fn entries(&self) -> impl Iterator<Item = (&MultiPartition, &RationalFn)> {
        self.entries.iter()
    }

    pub fn scale(&self, c: &RationalFn) -> Self {
        let mut out = KVector::zero(self.rank, self.degree);
        for (l, v) in &self.entries {
            out.insert(l.clone(), v.mul(c).reduce());
        }
        out
    }

    pub fn first_difference(&self, other: &KVector, mode: EqMode) -> Option<(MultiPartition, RationalFn, RationalFn)> {
        let keys: std::collections::BTreeSet<_> = self.entries.keys().chain(other.entries.keys()).collect();
        keys.into_iter().find_map(|l| {
            let (a, b) = (self.get(l), other.get(l));
            (!eq(&a, &b, mode)).then(|| (l.clone(), a, b))
        })
    }
}

impl fmt::Display for KVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.entries.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.entries.iter().map(|(l, v)| format!("({v})|{l}>")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

pub fn apply(m: &OperatorMatrix, v: &KVector) -> Result<KVector> {
    if m.rank != v.rank || m.source != v.degree {
        return Err(ActionError::DegreeMismatch(format!(
            "operator on K_{} applied to a class in K_{}",
            m.source, v.degree
        )));
    }
    let mut acc: BTreeMap<MultiPartition, RationalFn> = BTreeMap::new();
    for (l, mu, c) in m.entries() {
        let x = v.get(l);
        if x.is_zero() {
            continue;
        }
        let e = acc.entry(mu.clone()).or_insert_with(RationalFn::zero);
        *e = e.add(&c.mul(&x));
    }
    let mut out = KVector::zero(m.rank, m.target);
    for (mu, val) in acc {
        out.insert(mu, val.reduce());
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::parse_ratfn;

    fn rf(s: &str) -> RationalFn {
        parse_ratfn(s).unwrap()
    }

    fn mp(s: &str) -> MultiPartition {
        MultiPartition::parse(s).unwrap()
    }

    #[test]
    fn single_box_coefficients() {
        let one = LaurentPoly::one();
        let plus = coeff_x(&one, 1, Sign::Plus, &mp("()"), &mp("(1)")).unwrap();
        assert!(plus.eq_exact(&rf("t1")));
        let minus = coeff_x(&one, 1, Sign::Minus, &mp("(1)"), &mp("()")).unwrap();
        assert!(minus.eq_exact(&rf("(1-q1)*(1-q2)")));
        assert!(coeff_x(&one, 1, Sign::Plus, &mp("(2)"), &mp("(1,1,1)")).unwrap().is_zero());
    }

    #[test]
    fn degree_mismatch() {
        let e = coeff_x(&LaurentPoly::one(), 1, Sign::Plus, &mp("()"), &mp("(2)")).unwrap_err();
        assert_eq!(e.name(), "DegreeMismatch");
    }

    #[test]
    fn residue_single_box() {
        let x = ShuffleElement::z_pow(0);
        let v = residue_action(&x, Sign::Plus, &mp("()")).unwrap();
        assert!(v.get(&mp("(1)")).eq_exact(&rf("t1")));
        let a1 = build_ab(AbKind::A, 1).unwrap().times_det(1);
        let v = residue_action(&a1, Sign::Plus, &mp("()")).unwrap();
        assert!(v.get(&mp("(1)")).eq_exact(&rf("(1-q)/((1-q1)*(1-q2))")));
        let a = coeff_a(1, Sign::Plus, &mp("()"), &mp("(1)"), GNorm::Target).unwrap();
        assert!(a.eq_exact(&rf("(1-q)/((1-q1)*(1-q2))")));
    }

    #[test]
    fn k0_commutator() {
        let opts = ActionOptions::default();
        let x = |s| Operator::new(OpSpec::X { m: LaurentPoly::one(), k: 1 }, s, 1, opts);
        let (xp, xm) = (x(Sign::Plus), x(Sign::Minus));
        let c = Operator::commutator_at(&xp, &xm, 0).unwrap();
        assert!(c.get(&mp("()"), &mp("()")).eq_exact(&rf("-t1*(1-q1)*(1-q2)")));
    }

    #[test]
    fn h_zero_values() {
        let e = mp("()");
        assert_eq!(h_eigenvalue(0, Sign::Minus, &e, HConvention::Framed), -LaurentPoly::mono(t(1)));
        assert_eq!(
            h_eigenvalue(0, Sign::Plus, &e, HConvention::Framed),
            -LaurentPoly::mono(q().mul(&t(1)))
        );
        let two = MultiPartition::parse("()|()").unwrap();
        assert_eq!(
            h_eigenvalue(0, Sign::Minus, &two, HConvention::Literal),
            LaurentPoly::mono(t(1).mul(&t(2)))
        );
    }

    #[test]
    fn p_examples() {
        assert!(p_eigenvalue(1, Sign::Plus, &mp("()")).is_zero());
        assert_eq!(p_eigenvalue(2, Sign::Minus, &mp("(1)")), -LaurentPoly::mono(t(1).pow(2)));
        let c = commutator(&op_p(1, Sign::Plus, 2, 2), &op_p(2, Sign::Plus, 2, 2)).unwrap();
        assert!(c.is_zero());
    }

    #[test]
    fn compose_checks_degrees() {
        let a = op_p(1, Sign::Plus, 1, 2);
        let b = op_p(1, Sign::Plus, 1, 1);
        assert_eq!(compose(&a, &b).unwrap_err().name(), "DegreeMismatch");
    }

    #[test]
    fn weight_cells() {
        let c = Cell::new(2, 1, 3);
        assert_eq!(weight_to_cell(&c.weight(), 2), Some(c));
        assert_eq!(weight_to_cell(&q1().inv().mul(&t(1).inv()), 2), None);
        assert_eq!(weight_to_cell(&q1(), 2), None);
    }
}
