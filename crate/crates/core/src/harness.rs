//! Relation suites, sessions and reports.
//!
//! Each relation id maps a [`Session`] to a grid of independent cases. Cases
//! run concurrently and the report is sorted by case key, so its JSON form is
//! byte-identical across runs with the same session.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};
use std::time::Instant;

use serde::Serialize;
use thiserror::Error;

use crate::characters::{char_e, char_taut, char_tangent, char_w, CharError, EMethod, TvForm, VirtualCharacter, WMethod};
use crate::exec::par_map;
use crate::kaction::{
    apply, compose, h_zero, k_basis, op_h, op_matrix, op_p, ActionError, ActionOptions, GNorm, HConvention, KVector,
    Method, OpSpec, Operator, OperatorMatrix,
};
use crate::partitions::{enumerate_multipartitions, MultiPartition};
use crate::scalars::{eq, int, parse_ratfn, q, q1, q2, t, z, EqMode, LaurentPoly, Monomial, RationalFn, ScalarError, Symbol};
use crate::shuffle::{
    build_ab, build_m, build_x_capped, phi, shuffle_mul_capped, AbKind, Kernel, RepTerm, ShuffleElement, ShuffleError,
    Sign, DEFAULT_CAP,
};

pub const SCHEMA: &str = "kshuffle.report";
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("unknown relation `{0}` (expected R1..R12)")]
    UnknownRelation(String),
    #[error(transparent)]
    Action(#[from] ActionError),
    #[error(transparent)]
    Shuffle(#[from] ShuffleError),
    #[error(transparent)]
    Char(#[from] CharError),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

impl HarnessError {
    pub fn name(&self) -> &'static str {
        match self {
            HarnessError::UnknownRelation(_) => "UnknownRelation",
            HarnessError::Action(e) => e.name(),
            HarnessError::Shuffle(e) => e.name(),
            HarnessError::Char(e) => e.name(),
            HarnessError::Scalar(e) => e.name(),
        }
    }
}

type Res<T> = Result<T, HarnessError>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Relation {
    R1,
    R2,
    R3,
    R4,
    R5,
    R6,
    R7,
    R8,
    R9,
    R10,
    R11,
    R12,
}

impl Relation {
    pub const ALL: [Relation; 12] = [
        Relation::R1,
        Relation::R2,
        Relation::R3,
        Relation::R4,
        Relation::R5,
        Relation::R6,
        Relation::R7,
        Relation::R8,
        Relation::R9,
        Relation::R10,
        Relation::R11,
        Relation::R12,
    ];

    pub fn parse(s: &str) -> Res<Relation> {
        let t = s.trim().to_ascii_uppercase();
        Relation::ALL
            .into_iter()
            .find(|r| r.id() == t)
            .ok_or_else(|| HarnessError::UnknownRelation(s.to_string()))
    }

    pub fn id(self) -> &'static str {
        match self {
            Relation::R1 => "R1",
            Relation::R2 => "R2",
            Relation::R3 => "R3",
            Relation::R4 => "R4",
            Relation::R5 => "R5",
            Relation::R6 => "R6",
            Relation::R7 => "R7",
            Relation::R8 => "R8",
            Relation::R9 => "R9",
            Relation::R10 => "R10",
            Relation::R11 => "R11",
            Relation::R12 => "R12",
        }
    }

    pub fn title(self) -> &'static str {
        match self {
            Relation::R1 => "wheel conditions",
            Relation::R2 => "action is a homomorphism (+) and anti-homomorphism (-)",
            Relation::R3 => "tableau formula equals iterated residues",
            Relation::R4 => "Drinfeld relation for degree-one generators",
            Relation::R5 => "commutation with power sums",
            Relation::R6 => "q-Heisenberg relation for P_{n,0}",
            Relation::R7 => "the unit class is an eigenvector",
            Relation::R8 => "geometric operators a_k, b_k as shuffle elements",
            Relation::R9 => "phi values and vertex coefficients",
            Relation::R10 => "character identities",
            Relation::R11 => "tautological characters separate fixed points",
            Relation::R12 => "P_{1,d} is the one-variable element z^d",
        }
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl Serialize for Relation {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.id())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Randomized,
}

/// Deliberate defects, used to show that each relation can fail.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Perturbation {
    None,
    /// `(1 - q z_j/z_i)` in omega becomes `(1 - q^2 z_j/z_i)` on the shuffle side.
    OmegaNumerator,
    /// Compose in the wrong order.
    OppositeOrder,
    /// `H^\pm` from the unframed power sums.
    LiteralH,
    /// `X_{m (z_1^{n+1} + ..)}` on the right of the power-sum commutator.
    PowerShift,
    /// Multiply the expected side by `q`.
    TwistExpected,
    /// `sum [lambda]` without the `1/g_lambda` weights.
    RawUnitClass,
    /// `a_k` normalized by the source `g`.
    SourceNorm,
    /// Set `t_2 = t_1`.
    MergeFraming,
    /// Compare `P_{1,d}` against `z^{d+1}`.
    DegreeShift,
}

impl Perturbation {
    pub const ALL: [Perturbation; 10] = [
        Perturbation::None,
        Perturbation::OmegaNumerator,
        Perturbation::OppositeOrder,
        Perturbation::LiteralH,
        Perturbation::PowerShift,
        Perturbation::TwistExpected,
        Perturbation::RawUnitClass,
        Perturbation::SourceNorm,
        Perturbation::MergeFraming,
        Perturbation::DegreeShift,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Perturbation::None => "none",
            Perturbation::OmegaNumerator => "omega-numerator",
            Perturbation::OppositeOrder => "opposite-order",
            Perturbation::LiteralH => "literal-h",
            Perturbation::PowerShift => "power-shift",
            Perturbation::TwistExpected => "twist-expected",
            Perturbation::RawUnitClass => "raw-unit-class",
            Perturbation::SourceNorm => "source-norm",
            Perturbation::MergeFraming => "merge-framing",
            Perturbation::DegreeShift => "degree-shift",
        }
    }

    pub fn parse(s: &str) -> Option<Perturbation> {
        Perturbation::ALL.into_iter().find(|p| p.name() == s)
    }

    /// The perturbation that the given relation reacts to.
    pub fn breaking(rel: Relation) -> Perturbation {
        match rel {
            Relation::R1 | Relation::R3 => Perturbation::OmegaNumerator,
            Relation::R2 => Perturbation::OppositeOrder,
            Relation::R4 => Perturbation::LiteralH,
            Relation::R5 => Perturbation::PowerShift,
            Relation::R6 | Relation::R9 | Relation::R10 => Perturbation::TwistExpected,
            Relation::R7 => Perturbation::RawUnitClass,
            Relation::R8 => Perturbation::SourceNorm,
            Relation::R11 => Perturbation::MergeFraming,
            Relation::R12 => Perturbation::DegreeShift,
        }
    }
}

/// Run configuration. `r` is the largest rank swept; ranks `1..=r` are all
/// checked.
#[derive(Clone, Debug, Serialize)]
pub struct Session {
    pub r: usize,
    pub max_d: i32,
    pub max_k: usize,
    pub cap: usize,
    pub mode: Mode,
    pub seed: u64,
    pub trials: u32,
    pub gcd: bool,
    pub perturb: Perturbation,
    #[serde(skip)]
    pub timing: bool,
}

impl Default for Session {
    fn default() -> Self {
        Session {
            r: 2,
            max_d: 3,
            max_k: 2,
            cap: DEFAULT_CAP,
            mode: Mode::Exact,
            seed: 0,
            trials: 3,
            gcd: true,
            perturb: Perturbation::None,
            timing: false,
        }
    }
}

impl Session {
    pub fn eq_mode(&self) -> EqMode {
        match self.mode {
            Mode::Exact => EqMode::Exact,
            Mode::Randomized => EqMode::Randomized {
                seed: self.seed,
                trials: self.trials,
            },
        }
    }

    fn perturbed(&self, p: Perturbation) -> bool {
        self.perturb == p
    }

    fn ranks(&self) -> std::ops::RangeInclusive<usize> {
        1..=self.r
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(untagged)]
pub enum Param {
    Int(i64),
    Text(String),
}

impl fmt::Display for Param {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Param::Int(n) => write!(f, "{n}"),
            Param::Text(s) => f.write_str(s),
        }
    }
}

impl From<i64> for Param {
    fn from(n: i64) -> Self {
        Param::Int(n)
    }
}

impl From<i32> for Param {
    fn from(n: i32) -> Self {
        Param::Int(n as i64)
    }
}

impl From<usize> for Param {
    fn from(n: usize) -> Self {
        Param::Int(n as i64)
    }
}

impl From<u32> for Param {
    fn from(n: u32) -> Self {
        Param::Int(n as i64)
    }
}

impl From<&str> for Param {
    fn from(s: &str) -> Self {
        Param::Text(s.to_string())
    }
}

impl From<String> for Param {
    fn from(s: String) -> Self {
        Param::Text(s)
    }
}

impl From<Sign> for Param {
    fn from(s: Sign) -> Self {
        Param::Text(s.to_string())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Witness {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mu: Option<String>,
    pub lhs: String,
    pub rhs: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Witness {
    pub fn values(lhs: impl ToString, rhs: impl ToString) -> Self {
        Witness {
            lambda: None,
            mu: None,
            lhs: lhs.to_string(),
            rhs: rhs.to_string(),
            note: None,
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail { witness: Witness },
    Error { error: String, message: String },
}

impl Status {
    pub fn is_pass(&self) -> bool {
        matches!(self, Status::Pass)
    }

    pub fn label(&self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail { .. } => "fail",
            Status::Error { .. } => "error",
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Case {
    pub key: String,
    pub params: BTreeMap<String, Param>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub variant: Option<String>,
    #[serde(flatten)]
    pub status: Status,
    #[serde(skip)]
    order: (Option<String>, Vec<Param>),
}

impl Case {
    pub fn param(&self, name: &str) -> Option<&Param> {
        self.params.get(name)
    }

    pub fn int(&self, name: &str) -> Option<i64> {
        match self.params.get(name) {
            Some(Param::Int(n)) => Some(*n),
            _ => None,
        }
    }

    pub fn text(&self, name: &str) -> Option<&str> {
        match self.params.get(name) {
            Some(Param::Text(s)) => Some(s),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct VariantOutcome {
    pub name: String,
    pub passed: bool,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct Summary {
    pub cases: usize,
    pub pass: usize,
    pub fail: usize,
    pub error: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub schema_version: u32,
    pub relation: Relation,
    pub title: &'static str,
    pub session: Session,
    pub grid: BTreeMap<String, String>,
    pub cases: Vec<Case>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub variants: Vec<VariantOutcome>,
    pub summary: Summary,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn failures(&self) -> impl Iterator<Item = &Case> {
        self.cases.iter().filter(|c| !c.status.is_pass())
    }

    /// Cases with the given variant tag (`None` for untagged cases).
    pub fn cases_of<'a>(&'a self, variant: Option<&'a str>) -> impl Iterator<Item = &'a Case> {
        self.cases.iter().filter(move |c| c.variant.as_deref() == variant)
    }

    pub fn passing_variants(&self) -> Vec<&str> {
        self.variants.iter().filter(|v| v.passed).map(|v| v.name.as_str()).collect()
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{} {}: {}", self.relation, self.title, if self.passed { "PASS" } else { "FAIL" });
        let grid: Vec<String> = self.grid.iter().map(|(k, v)| format!("{k}={v}")).collect();
        let _ = writeln!(s, "grid: {}", grid.join(", "));
        let _ = writeln!(
            s,
            "cases: {} pass, {} fail, {} error, {} total",
            self.summary.pass, self.summary.fail, self.summary.error, self.summary.cases
        );
        for v in &self.variants {
            let _ = writeln!(s, "variant {}: {}", v.name, if v.passed { "pass" } else { "fail" });
        }
        let width = self.cases.iter().map(|c| c.key.len()).max().unwrap_or(0);
        for c in &self.cases {
            let tag = c.variant.as_ref().map(|v| format!(" [{v}]")).unwrap_or_default();
            let _ = write!(s, "  {:<width$}{tag}  {}", c.key, c.status.label());
            match &c.status {
                Status::Pass => {}
                Status::Fail { witness: w } => {
                    if let (Some(l), Some(m)) = (&w.lambda, &w.mu) {
                        let _ = write!(s, "  at {l} -> {m}");
                    } else if let Some(l) = &w.lambda {
                        let _ = write!(s, "  at {l}");
                    }
                    let _ = write!(s, "  lhs = {}  rhs = {}", w.lhs, w.rhs);
                    if let Some(n) = &w.note {
                        let _ = write!(s, "  ({n})");
                    }
                }
                Status::Error { error, message } => {
                    let _ = write!(s, "  {error}: {message}");
                }
            }
            s.push('\n');
        }
        if let Some(ms) = self.elapsed_ms {
            let _ = writeln!(s, "elapsed: {ms} ms");
        }
        s
    }
}

type Check = Box<dyn Fn() -> Res<Option<Witness>> + Send + Sync>;

struct CaseSpec {
    params: Vec<(&'static str, Param)>,
    variant: Option<String>,
    check: Check,
}

fn case(params: Vec<(&'static str, Param)>, check: impl Fn() -> Res<Option<Witness>> + Send + Sync + 'static) -> CaseSpec {
    CaseSpec {
        params,
        variant: None,
        check: Box::new(check),
    }
}

fn variant_case(
    variant: &str,
    params: Vec<(&'static str, Param)>,
    check: impl Fn() -> Res<Option<Witness>> + Send + Sync + 'static,
) -> CaseSpec {
    CaseSpec {
        params,
        variant: Some(variant.to_string()),
        check: Box::new(check),
    }
}

macro_rules! params {
    ($($k:ident = $v:expr),* $(,)?) => {
        vec![$((stringify!($k), Param::from($v))),*]
    };
}

fn run(rel: Relation, s: &Session, grid: BTreeMap<String, String>, specs: Vec<CaseSpec>) -> Report {
    let start = Instant::now();
    let results = par_map(&specs, |c| (c.check)());
    let mut cases: Vec<Case> = specs
        .iter()
        .zip(results)
        .map(|(spec, res)| {
            let status = match res {
                Ok(None) => Status::Pass,
                Ok(Some(w)) => Status::Fail { witness: w },
                Err(e) => Status::Error {
                    error: e.name().to_string(),
                    message: e.to_string(),
                },
            };
            let key = spec
                .params
                .iter()
                .map(|(k, v)| format!("{k}={v}"))
                .collect::<Vec<_>>()
                .join(" ");
            Case {
                key,
                params: spec.params.iter().map(|(k, v)| (k.to_string(), v.clone())).collect(),
                variant: spec.variant.clone(),
                status,
                order: (spec.variant.clone(), spec.params.iter().map(|(_, v)| v.clone()).collect()),
            }
        })
        .collect();
    cases.sort_by(|a, b| a.order.cmp(&b.order).then_with(|| a.key.cmp(&b.key)));

    let mut summary = Summary {
        cases: cases.len(),
        ..Summary::default()
    };
    for c in &cases {
        match c.status {
            Status::Pass => summary.pass += 1,
            Status::Fail { .. } => summary.fail += 1,
            Status::Error { .. } => summary.error += 1,
        }
    }
    let mut variants: BTreeMap<String, bool> = BTreeMap::new();
    for c in &cases {
        if let Some(v) = &c.variant {
            let e = variants.entry(v.clone()).or_insert(true);
            *e &= c.status.is_pass();
        }
    }
    let plain_ok = cases.iter().filter(|c| c.variant.is_none()).all(|c| c.status.is_pass());
    let passed = plain_ok && (variants.is_empty() || variants.values().any(|&ok| ok));
    Report {
        schema: SCHEMA,
        schema_version: SCHEMA_VERSION,
        relation: rel,
        title: rel.title(),
        session: s.clone(),
        grid,
        cases,
        variants: variants
            .into_iter()
            .map(|(name, passed)| VariantOutcome { name, passed })
            .collect(),
        summary,
        passed,
        elapsed_ms: s.timing.then(|| start.elapsed().as_millis() as u64),
    }
}

fn grid(items: &[(&str, String)]) -> BTreeMap<String, String> {
    items.iter().map(|(k, v)| (k.to_string(), v.clone())).collect()
}

/// Run the suite for one relation over the session grid.
pub fn verify(rel: Relation, s: &Session) -> Res<Report> {
    let (g, specs) = match rel {
        Relation::R1 => wheel_suite(s),
        Relation::R2 => homomorphism_suite(s),
        Relation::R3 => cross_oracle_suite(s),
        Relation::R4 => drinfeld_suite(s),
        Relation::R5 => power_sum_suite(s),
        Relation::R6 => heisenberg_suite(s),
        Relation::R7 => eigenvector_suite(s),
        Relation::R8 => geometric_suite(s),
        Relation::R9 => phi_suite(s),
        Relation::R10 => {
            let (mut g, mut specs) = char_w_suite(s, s.max_d);
            let (g2, s2) = char_e_suite(s, s.max_d);
            let (g3, s3) = tangent_suite(s, s.max_d);
            g.extend(g2);
            g.extend(g3);
            specs.extend(s2);
            specs.extend(s3);
            (g, specs)
        }
        Relation::R11 => distinct_suite(s),
        Relation::R12 => degeneration_suite(s),
    };
    Ok(run(rel, s, g, specs))
}

/// Parse a relation id and run it.
pub fn verify_id(id: &str, s: &Session) -> Res<Report> {
    verify(Relation::parse(id)?, s)
}

/// R10, `char_W` by both methods for `|lambda| <= n`.
pub fn verify_char_w(s: &Session, n: i32) -> Report {
    let (g, specs) = char_w_suite(s, n);
    run(Relation::R10, s, g, specs)
}

/// R10, `char_E` by both methods for `|lambda|, |mu| <= n`.
pub fn verify_char_e(s: &Session, n: i32) -> Report {
    let (g, specs) = char_e_suite(s, n);
    run(Relation::R10, s, g, specs)
}

/// R10, weight count of the tangent character for `|lambda| <= n`.
pub fn verify_tangent(s: &Session, n: i32) -> Report {
    let (g, specs) = tangent_suite(s, n);
    run(Relation::R10, s, g, specs)
}

/// Every relation in order.
pub fn verify_all(s: &Session) -> Vec<Report> {
    Relation::ALL.into_iter().map(|r| verify(r, s).expect("known relation")).collect()
}

// ---------------------------------------------------------------------------
// helpers

fn signs() -> [Sign; 2] {
    [Sign::Plus, Sign::Minus]
}

fn mat_witness(lhs: &OperatorMatrix, rhs: &OperatorMatrix, mode: EqMode) -> Res<Option<Witness>> {
    Ok(lhs.first_difference(rhs, mode)?.map(|(l, m, a, b)| Witness {
        lambda: Some(l.to_string()),
        mu: Some(m.to_string()),
        lhs: a.to_string(),
        rhs: b.to_string(),
        note: None,
    }))
}

fn vec_witness(lhs: &KVector, rhs: &KVector, mode: EqMode) -> Option<Witness> {
    lhs.first_difference(rhs, mode).map(|(l, a, b)| Witness {
        lambda: Some(l.to_string()),
        mu: None,
        lhs: a.to_string(),
        rhs: b.to_string(),
        note: None,
    })
}

fn scalar_witness(lhs: &RationalFn, rhs: &RationalFn, mode: EqMode) -> Option<Witness> {
    (!eq(lhs, rhs, mode)).then(|| Witness::values(lhs, rhs))
}

fn rf(s: &str) -> RationalFn {
    parse_ratfn(s).expect("well-formed constant")
}

/// All monomials in `z_1..z_k` with exponents in `-1..=1`.
pub fn unit_monomials(k: usize) -> Vec<Monomial> {
    let mut out = vec![Monomial::one()];
    for i in 1..=k {
        out = out
            .into_iter()
            .flat_map(|m| (-1..=1).map(move |e| m.mul(&z(i).pow(e))))
            .collect();
    }
    out
}

fn prod_t(r: usize) -> Monomial {
    (1..=r).fold(Monomial::one(), |a, i| a.mul(&t(i)))
}

/// Replace omega's `(1 - q z_j/z_i)` by `(1 - q^2 z_j/z_i)` in every term.
pub fn perturb_omega(e: &ShuffleElement) -> Res<ShuffleElement> {
    let k = e.k();
    let terms = e
        .terms()
        .iter()
        .map(|term| {
            let mut kernels = term.kernels.clone();
            for i in 1..=k {
                for j in i + 1..=k {
                    kernels.push((Kernel::new(q(), i, j), -1));
                    kernels.push((Kernel::new(q().pow(2), i, j), 1));
                }
            }
            RepTerm {
                coeff: term.coeff.clone(),
                poly: term.poly.clone(),
                kernels,
            }
        })
        .collect();
    Ok(ShuffleElement::from_terms(k, terms, false)?)
}

fn twist(s: &Session, x: RationalFn) -> RationalFn {
    if s.perturbed(Perturbation::TwistExpected) {
        x.mul_monomial(&q())
    } else {
        x
    }
}

// ---------------------------------------------------------------------------
// R1

type Suite = (BTreeMap<String, String>, Vec<CaseSpec>);

fn wheel_witness(el: &ShuffleElement) -> Res<Option<Witness>> {
    let num = match el.numerator() {
        Ok(n) => n.clone(),
        Err(ShuffleError::NotInShuffleForm(msg)) => {
            return Ok(Some(
                Witness::values(el.sym(), "numerator / prod(z_i - q1 z_j)(z_i - q2 z_j)").with_note(msg),
            ))
        }
        Err(e) => return Err(e.into()),
    };
    if el.k() < 3 {
        return Ok(None);
    }
    for c in [q1(), q2()] {
        let b = [(Symbol::aux(2), c.mul(&z(1))), (Symbol::aux(3), q().mul(&z(1)))];
        let restricted = num.subs_monomials(&b);
        if !restricted.is_zero() {
            return Ok(Some(
                Witness::values(&restricted, 0).with_note(format!("numerator at z2 = {c} z1, z3 = q z1")),
            ));
        }
    }
    Ok(None)
}

fn wheel_suite(s: &Session) -> Suite {
    let (kk, dd, cap) = (s.max_k.max(1), s.max_d, s.cap);
    let pert = s.perturbed(Perturbation::OmegaNumerator);
    let mut specs = Vec::new();
    for k in 1..=kk {
        for d in -dd..=dd {
            specs.push(case(params!(element = "P", k = k, d = d), move || {
                let mut el = build_x_capped(&build_m(k, d), k, cap)?;
                if pert {
                    el = perturb_omega(&el)?;
                }
                wheel_witness(&el)
            }));
        }
        for (name, kind) in [("A", AbKind::A), ("B", AbKind::B)] {
            specs.push(case(params!(element = name, k = k, d = 0), move || {
                let mut el = build_ab(kind, k)?;
                if pert {
                    el = perturb_omega(&el)?;
                }
                wheel_witness(&el)
            }));
        }
    }
    let g = grid(&[("k", format!("1..={kk}")), ("d", format!("-{dd}..={dd}"))]);
    (g, specs)
}

// ---------------------------------------------------------------------------
// R2

fn homomorphism_suite(s: &Session) -> Suite {
    let mode = s.eq_mode();
    let swap = s.perturbed(Perturbation::OppositeOrder);
    let cap = s.cap;
    let mut specs = Vec::new();
    for r in s.ranks() {
        for sign in signs() {
            for a in -1..=1 {
                for b in -1..=1 {
                    for d in 0..=s.max_d {
                        specs.push(case(params!(r = r, sign = sign, a = a, b = b, d = d), move || {
                            let pa = ShuffleElement::z_pow(a);
                            let pb = ShuffleElement::z_pow(b);
                            let prod = shuffle_mul_capped(&pa, &pb, cap)?;
                            let ord = ActionOptions {
                                method: Method::Orderings,
                                ..ActionOptions::default()
                            };
                            let lhs = op_matrix(&OpSpec::Element(prod), sign, r, d, &ord)?;
                            let opts = ActionOptions::default();
                            let xa = OpSpec::X {
                                m: LaurentPoly::mono(z(1).pow(a)),
                                k: 1,
                            };
                            let xb = OpSpec::X {
                                m: LaurentPoly::mono(z(1).pow(b)),
                                k: 1,
                            };
                            let step = sign.as_i32();
                            // (P*Q)^+ = P^+ Q^+ and (P*Q)^- = Q^- P^-: the right factor acts first.
                            let (first, second) = match (sign, swap) {
                                (Sign::Plus, false) | (Sign::Minus, true) => (xb, xa),
                                (Sign::Minus, false) | (Sign::Plus, true) => (xa, xb),
                            };
                            let m1 = op_matrix(&first, sign, r, d, &opts)?;
                            let m2 = op_matrix(&second, sign, r, d + step, &opts)?;
                            let rhs = compose(&m2, &m1)?;
                            mat_witness(&lhs, &rhs, mode)
                        }));
                    }
                }
            }
        }
    }
    let g = grid(&[
        ("r", format!("1..={}", s.r)),
        ("P, Q", "z^a, z^b with a, b in -1..=1".into()),
        ("d", format!("0..={}", s.max_d)),
    ]);
    (g, specs)
}

// ---------------------------------------------------------------------------
// R3

fn cross_oracle_suite(s: &Session) -> Suite {
    let mode = s.eq_mode();
    let pert = s.perturbed(Perturbation::OmegaNumerator);
    let cap = s.cap;
    let mut specs = Vec::new();
    for r in s.ranks() {
        for k in 1..=s.max_k {
            for m in unit_monomials(k) {
                for sign in signs() {
                    for d in 0..=s.max_d {
                        let m = m.clone();
                        specs.push(case(
                            params!(r = r, k = k, m = m.to_string(), sign = sign, d = d),
                            move || {
                                let mp = LaurentPoly::mono(m.clone());
                                let spec = OpSpec::X { m: mp.clone(), k };
                                let syt = op_matrix(&spec, sign, r, d, &ActionOptions::default())?;
                                let res_opts = ActionOptions {
                                    method: Method::Residue,
                                    ..ActionOptions::default()
                                };
                                let res_spec = if pert {
                                    OpSpec::Element(perturb_omega(&build_x_capped(&mp, k, cap)?)?)
                                } else {
                                    spec
                                };
                                let res = op_matrix(&res_spec, sign, r, d, &res_opts)?;
                                Ok(mat_witness(&syt, &res, mode)?.map(|w| w.with_note("tableau vs residue")))
                            },
                        ));
                    }
                }
            }
        }
    }
    let g = grid(&[
        ("r", format!("1..={}", s.r)),
        ("k", format!("1..={}", s.max_k)),
        ("m", "monomials with exponents in -1..=1".into()),
        ("d", format!("0..={}", s.max_d)),
    ]);
    (g, specs)
}

// ---------------------------------------------------------------------------
// R4

/// `(1 - q1)(1 - q2) / (1 - q)`.
pub fn drinfeld_constant() -> RationalFn {
    rf("(1-q1)*(1-q2)/(1-q)")
}

fn drinfeld_suite(s: &Session) -> Suite {
    let mode = s.eq_mode();
    let conv = if s.perturbed(Perturbation::LiteralH) {
        HConvention::Literal
    } else {
        HConvention::Framed
    };
    let mut specs = Vec::new();
    for r in s.ranks() {
        for dp in -1..=1 {
            for dm in -1..=1 {
                for deg in 0..=s.max_d {
                    specs.push(case(params!(r = r, d = dp, d2 = dm, deg = deg), move || {
                        let opts = ActionOptions {
                            h: conv,
                            ..ActionOptions::default()
                        };
                        let x = |e: i32, sign| {
                            Operator::new(
                                OpSpec::X {
                                    m: LaurentPoly::mono(z(1).pow(e)),
                                    k: 1,
                                },
                                sign,
                                r,
                                opts,
                            )
                        };
                        let lhs = Operator::commutator_at(&x(dp, Sign::Plus), &x(dm, Sign::Minus), deg)?;
                        let sum = dp + dm;
                        let mut rhs = OperatorMatrix::new(r, deg, deg);
                        if sum <= 0 {
                            rhs = rhs.add(&op_h((-sum) as u32, Sign::Minus, r, deg, conv))?;
                        }
                        if sum >= 0 {
                            rhs = rhs.sub(&op_h(sum as u32, Sign::Plus, r, deg, conv))?;
                        }
                        mat_witness(&lhs, &rhs.scale(&drinfeld_constant()), mode)
                    }));
                }
            }
        }
        // [(z^0)^+, (z^0)^-] on the vacuum against the closed form.
        specs.push(case(params!(r = r, d = "closed", d2 = "closed", deg = 0), move || {
            let opts = ActionOptions {
                h: conv,
                ..ActionOptions::default()
            };
            let x = |sign| Operator::new(OpSpec::X { m: LaurentPoly::one(), k: 1 }, sign, r, opts);
            let c = Operator::commutator_at(&x(Sign::Plus), &x(Sign::Minus), 0)?;
            let vac = MultiPartition::empty(r);
            let got = c.get(&vac, &vac);
            let want = vacuum_commutator(r);
            Ok(scalar_witness(&got, &want, mode).map(|w| Witness {
                lambda: Some(vac.to_string()),
                mu: Some(vac.to_string()),
                ..w
            }))
        }));
    }
    let g = grid(&[
        ("r", format!("1..={}", s.r)),
        ("d, d2", "-1..=1".into()),
        ("deg", format!("0..={}", s.max_d)),
    ]);
    (g, specs)
}

/// `[(z^0)^+, (z^0)^-]` on the vacuum: `-t1 (1-q1)(1-q2)` for `r = 1`, and
/// `(1-q1)(1-q2)/(1-q) ((-1)^r - (-q)^r) t_1..t_r` in general.
pub fn vacuum_commutator(r: usize) -> RationalFn {
    let sign = if r % 2 == 0 { 1 } else { -1 };
    let diff = RationalFn::from_int(sign).sub(&RationalFn::from_int(sign).mul_monomial(&q().pow(r as i32)));
    drinfeld_constant().mul(&diff).mul_monomial(&prod_t(r))
}

// ---------------------------------------------------------------------------
// R5

fn power_sum_suite(s: &Session) -> Suite {
    let mode = s.eq_mode();
    let shift = u32::from(s.perturbed(Perturbation::PowerShift));
    let mut specs = Vec::new();
    for r in s.ranks() {
        for n in 1..=s.max_k as u32 {
            for k in 1..=s.max_k {
                for m in unit_monomials(k) {
                    for d in 0..=s.max_d {
                        let m = m.clone();
                        specs.push(case(params!(r = r, n = n, k = k, m = m.to_string(), d = d), move || {
                            let opts = ActionOptions::default();
                            let mp = LaurentPoly::mono(m.clone());
                            let x = op_matrix(&OpSpec::X { m: mp.clone(), k }, Sign::Plus, r, d, &opts)?;
                            let p_src = op_p(n, Sign::Plus, r, d);
                            let p_tgt = op_p(n, Sign::Plus, r, d + k as i32);
                            let lhs = compose(&p_tgt, &x)?.sub(&compose(&x, &p_src)?)?;
                            let mut power = LaurentPoly::zero();
                            for i in 1..=k {
                                power = &power + &LaurentPoly::mono(z(i).pow((n + shift) as i32));
                            }
                            let rhs = op_matrix(&OpSpec::X { m: &mp * &power, k }, Sign::Plus, r, d, &opts)?;
                            mat_witness(&lhs, &rhs, mode)
                        }));
                    }
                }
            }
        }
    }
    let g = grid(&[
        ("r", format!("1..={}", s.r)),
        ("n", format!("1..={}", s.max_k)),
        ("k", format!("1..={}", s.max_k)),
        ("m", "monomials with exponents in -1..=1".into()),
        ("d", format!("0..={}", s.max_d)),
    ]);
    (g, specs)
}

// ---------------------------------------------------------------------------
// R6

/// The displayed central term `q^{-n}(q1^n-1)(q2^n-1)/(q^{-n}-1) ((H_0^-)^n - (H_0^+)^n)`.
pub fn heisenberg_display(n: usize, r: usize) -> RationalFn {
    let c = rf(&format!("q^(-{n})*(q1^{n}-1)*(q2^{n}-1)/(q^(-{n})-1)"));
    let hm = RationalFn::from_poly(h_zero(Sign::Minus, r)).pow(n as i32).expect("nonzero");
    let hp = RationalFn::from_poly(h_zero(Sign::Plus, r)).pow(n as i32).expect("nonzero");
    c.mul(&hm.sub(&hp))
}

fn heisenberg_suite(s: &Session) -> Suite {
    let mode = s.eq_mode();
    let sc = s.clone();
    let mut specs = Vec::new();
    for r in s.ranks() {
        for n in 1..=s.max_k {
            for deg in 0..=s.max_d {
                let sc = sc.clone();
                specs.push(case(params!(r = r, n = n, deg = deg), move || {
                    let opts = ActionOptions::default();
                    let a = Operator::new(OpSpec::P { k: n, d: 0 }, Sign::Plus, r, opts);
                    let b = Operator::new(OpSpec::P { k: n, d: 0 }, Sign::Minus, r, opts);
                    let lhs = Operator::commutator_at(&a, &b, deg)?;
                    let display = twist(&sc, heisenberg_display(n, r));
                    let rhs = OperatorMatrix::scalar(r, deg, &display);
                    let w = mat_witness(&lhs, &rhs, mode)?;
                    Ok(w.map(|w| {
                        let l = k_basis(r, deg)[0].clone();
                        let got = lhs.get(&l, &l);
                        let scalar = lhs
                            .first_difference(&OperatorMatrix::scalar(r, deg, &got), EqMode::Exact)
                            .ok()
                            .flatten()
                            .is_none();
                        let ratio = got.div(&display).map(|x| x.to_string()).unwrap_or_else(|_| "undefined".into());
                        w.with_note(format!(
                            "commutator is {}a scalar; commutator / display = {ratio}",
                            if scalar { "" } else { "not " }
                        ))
                    }))
                }));
            }
        }
    }
    let g = grid(&[
        ("r", format!("1..={}", s.r)),
        ("n", format!("1..={}", s.max_k)),
        ("deg", format!("0..={}", s.max_d)),
    ]);
    (g, specs)
}

// ---------------------------------------------------------------------------
// R7

fn raw_unit(r: usize, d: i32) -> KVector {
    let mut v = KVector::zero(r, d);
    for l in k_basis(r, d) {
        v.insert(l, RationalFn::one());
    }
    v
}

/// `((-1)^r t_1..t_r)^{-k}`, the displayed eigenvalue of `P_{-k,-kr}`.
pub fn eigenvalue_display(k: usize, r: usize) -> RationalFn {
    let sign = if (k * r) % 2 == 0 { 1 } else { -1 };
    RationalFn::from_int(sign).mul_monomial(&prod_t(r).pow(-(k as i32)))
}

fn eigenvector_suite(s: &Session) -> Suite {
    let mode = s.eq_mode();
    let raw = s.perturbed(Perturbation::RawUnitClass);
    let top = s.max_d;
    let mut specs = Vec::new();
    for r in s.ranks() {
        for k in 1..=s.max_k {
            let ki = k as i32;
            let kr = ki * r as i32;
            for d in -kr..=0 {
                let eqn = if d == 0 {
                    "eigenvalue one"
                } else if d == -kr {
                    "eigenvalue framing"
                } else {
                    "vanishing"
                };
                for deg in 0..=(top - ki) {
                    specs.push(case(params!(r = r, k = k, d = d, deg = deg, identity = eqn), move || {
                        let unit = |dd: i32| -> Res<KVector> {
                            Ok(if raw { raw_unit(r, dd) } else { KVector::unit_class(r, dd)? })
                        };
                        let m = op_matrix(&OpSpec::P { k, d }, Sign::Minus, r, deg + ki, &ActionOptions::default())?;
                        let lhs = apply(&m, &unit(deg + ki)?)?;
                        let base = unit(deg)?;
                        let rhs = if d == 0 {
                            base.clone()
                        } else if d == -kr {
                            base.scale(&eigenvalue_display(k, r))
                        } else {
                            KVector::zero(r, deg)
                        };
                        Ok(vec_witness(&lhs, &rhs, mode).map(|w| {
                            if let (true, Some((l, _))) = (d == -kr, lhs.entries().next()) {
                                let ratio = lhs
                                    .get(&l)
                                    .div(&base.get(&l))
                                    .map(|x| x.to_string())
                                    .unwrap_or_else(|_| "undefined".into());
                                w.with_note(format!("observed eigenvalue {ratio}"))
                            } else {
                                w
                            }
                        }))
                    }));
                }
            }
        }
    }
    let g = grid(&[
        ("r", format!("1..={}", s.r)),
        ("k", format!("1..={}", s.max_k)),
        ("d", "-kr..=0".into()),
        ("truncation D", format!("{top}")),
    ]);
    (g, specs)
}

// ---------------------------------------------------------------------------
// R8

/// `q1^{-k(k+1)/2}`.
pub fn b_prefactor(k: usize) -> RationalFn {
    RationalFn::mono(q1().pow(-((k * (k + 1) / 2) as i32)))
}

fn tv_name(tv: TvForm) -> &'static str {
    match tv {
        TvForm::Lagrangian => "lagrangian",
        TvForm::Relative => "relative",
        TvForm::Swapped => "swapped",
    }
}

fn geometric_suite(s: &Session) -> Suite {
    let mode = s.eq_mode();
    let norm = if s.perturbed(Perturbation::SourceNorm) {
        GNorm::Source
    } else {
        GNorm::Target
    };
    let mut specs = Vec::new();
    for r in s.ranks() {
        for k in 1..=s.max_k {
            for sign in signs() {
                for d in 0..=s.max_d {
                    specs.push(case(params!(op = "a", r = r, k = k, sign = sign, d = d), move || {
                        let base = ActionOptions::default();
                        let geo = op_matrix(&OpSpec::GeoA { k }, sign, r, d, &ActionOptions { a_norm: norm, ..base })?;
                        let sh = op_matrix(&OpSpec::A { k }, sign, r, d, &base)?;
                        mat_witness(&geo, &sh, mode)
                    }));
                    for tv in [TvForm::Lagrangian, TvForm::Relative, TvForm::Swapped] {
                        specs.push(variant_case(
                            tv_name(tv),
                            params!(op = "b", r = r, k = k, sign = sign, d = d),
                            move || {
                                let base = ActionOptions::default();
                                let geo = op_matrix(&OpSpec::GeoB { k }, sign, r, d, &ActionOptions { tv, ..base })?;
                                let sh = op_matrix(&OpSpec::B { k }, sign, r, d, &base)?.scale(&b_prefactor(k));
                                Ok(geo.first_difference(&sh, mode)?.map(|(l, m, a, b)| {
                                    let ratio = a.div(&b).map(|x| x.to_string()).unwrap_or_else(|_| "undefined".into());
                                    Witness {
                                        lambda: Some(l.to_string()),
                                        mu: Some(m.to_string()),
                                        lhs: a.to_string(),
                                        rhs: b.to_string(),
                                        note: Some(format!("geometric / shuffle = {ratio}")),
                                    }
                                }))
                            },
                        ));
                    }
                }
            }
        }
    }
    let g = grid(&[
        ("r", format!("1..={}", s.r)),
        ("k", format!("1..={}", s.max_k)),
        ("d", format!("0..={}", s.max_d)),
        ("b variants", "lagrangian, relative, swapped".into()),
    ]);
    (g, specs)
}

// ---------------------------------------------------------------------------
// R9

fn phi_prefix(k: usize) -> RationalFn {
    rf(&format!("q1^({k}/2)/((1-q1)^{k}*(1-q2)^{k})"))
}

/// The displayed value of `phi(A_k)`.
pub fn phi_a_display(k: usize) -> RationalFn {
    (1..=k).fold(phi_prefix(k), |acc, i| acc.mul(&rf(&format!("(1-q1^{i}*q2)/(q1^{i}-1)"))))
}

/// The displayed value of `phi(B_k)`.
pub fn phi_b_display(k: usize) -> RationalFn {
    (1..=k).fold(phi_prefix(k), |acc, i| acc.mul(&rf(&format!("(q1^{}-q2)/(q1^{i}-1)", i - 1))))
}

/// The displayed value of `phi(P_{k,0})`.
pub fn phi_p_display(k: usize) -> RationalFn {
    let sign = if k % 2 == 0 { "" } else { "-" };
    rf(&format!("{sign}q1^({k}/2)*(1-q2^{k})/((1-q1)^{k}*(1-q2)^{k})"))
}

/// `alpha_k = (1-q^k)/((1-q1^k)(1-q2^k))`.
pub fn alpha_display(k: usize) -> RationalFn {
    rf(&format!("(1-q^{k})/((1-q1^{k})*(1-q2^{k}))"))
}

/// `beta_k = (-1)^{k-1}/(1-q1^k)`.
pub fn beta_display(k: usize) -> RationalFn {
    let sign = if k % 2 == 1 { "" } else { "-" };
    rf(&format!("{sign}1/(1-q1^{k})"))
}

/// Recover the exponential coefficients `c_1..c_n` of
/// `sum A_k x^k = exp(sum c_k P_{k,0} x^k / k)` from `k A_k = sum_j c_j P_{j,0} * A_{k-j}`.
/// Returns, per `k`, the symmetric function `c_k P_{k,0}` and `P_{k,0}`.
fn vertex_residuals(
    kind: AbKind,
    n: usize,
    cap: usize,
    coeffs: &dyn Fn(usize) -> RationalFn,
) -> Res<Vec<(RationalFn, RationalFn)>> {
    let p: Vec<ShuffleElement> = (1..=n).map(|j| build_x_capped(&build_m(j, 0), j, cap)).collect::<Result<_, _>>()?;
    let mut out = Vec::new();
    for k in 1..=n {
        let mut rest = build_ab(kind, k)?.sym().scale(&int(k as i64));
        for j in 1..k {
            let prod = shuffle_mul_capped(&p[j - 1], &build_ab(kind, k - j)?, cap)?;
            rest = rest.sub(&prod.sym().mul(&coeffs(j)));
        }
        out.push((rest, p[k - 1].sym().clone()));
    }
    Ok(out)
}

fn phi_suite(s: &Session) -> Suite {
    let mode = s.eq_mode();
    let n = s.max_k;
    let cap = s.cap;
    let mut specs = Vec::new();
    for k in 1..=n {
        for (name, el) in [("A", 0u8), ("B", 1), ("P", 2)] {
            let sc = s.clone();
            specs.push(case(params!(check = "phi", element = name, k = k), move || {
                let (sym, want) = match el {
                    0 => (build_ab(AbKind::A, k)?.sym().clone(), phi_a_display(k)),
                    1 => (build_ab(AbKind::B, k)?.sym().clone(), phi_b_display(k)),
                    _ => (build_x_capped(&build_m(k, 0), k, cap)?.sym().clone(), phi_p_display(k)),
                };
                let got = phi(&sym, k)?;
                Ok(scalar_witness(&got, &twist(&sc, want), mode))
            }));
        }
        for (name, kind) in [("alpha", AbKind::A), ("beta", AbKind::B)] {
            let sc = s.clone();
            specs.push(case(params!(check = "vertex", element = name, k = k), move || {
                let display: fn(usize) -> RationalFn = match kind {
                    AbKind::A => alpha_display,
                    AbKind::B => beta_display,
                };
                let residuals = vertex_residuals(kind, k, cap, &display)?;
                let (rest, pk) = &residuals[k - 1];
                let want = twist(&sc, display(k));
                // rest = c_k P_{k,0}; read off c_k and compare.
                let recovered = rest.div(pk)?;
                if eq(&recovered, &want, mode) && eq(rest, &pk.mul(&want), mode) {
                    Ok(None)
                } else {
                    Ok(Some(Witness::values(&recovered, &want).with_note("recovered coefficient vs display")))
                }
            }));
        }
    }
    let g = grid(&[("k", format!("1..={n}"))]);
    (g, specs)
}

// ---------------------------------------------------------------------------
// R10

fn char_witness(lambda: &MultiPartition, mu: Option<&MultiPartition>, a: &VirtualCharacter, b: &VirtualCharacter) -> Witness {
    Witness {
        lambda: Some(lambda.to_string()),
        mu: mu.map(|m| m.to_string()),
        lhs: a.poly().to_string(),
        rhs: b.poly().to_string(),
        note: None,
    }
}

fn twist_char(s: &Session, c: VirtualCharacter) -> VirtualCharacter {
    if s.perturbed(Perturbation::TwistExpected) {
        VirtualCharacter::from_poly(c.poly().mul_monomial(&q()))
    } else {
        c
    }
}

fn char_w_suite(s: &Session, n: i32) -> Suite {
    let mut specs = Vec::new();
    for r in s.ranks() {
        for d in 0..=n.max(0) as u32 {
            let sc = s.clone();
            specs.push(case(params!(check = "W", r = r, size = d), move || {
                for l in enumerate_multipartitions(r, d) {
                    let a = char_w(&l, WMethod::Gamma);
                    let b = twist_char(&sc, char_w(&l, WMethod::Corners));
                    if a != b {
                        return Ok(Some(char_witness(&l, None, &a, &b)));
                    }
                }
                Ok(None)
            }));
        }
    }
    (grid(&[("W size", format!("0..={n}"))]), specs)
}

fn char_e_suite(s: &Session, n: i32) -> Suite {
    let mut specs = Vec::new();
    for r in s.ranks() {
        for d in 0..=n.max(0) as u32 {
            for d2 in 0..=n.max(0) as u32 {
                let sc = s.clone();
                specs.push(case(params!(check = "E", r = r, size = d, size2 = d2), move || {
                    for l in enumerate_multipartitions(r, d) {
                        for m in enumerate_multipartitions(r, d2) {
                            let a = char_e(&l, &m, EMethod::Tautological);
                            let b = twist_char(&sc, char_e(&l, &m, EMethod::Ffnr));
                            if a != b {
                                return Ok(Some(char_witness(&l, Some(&m), &a, &b)));
                            }
                        }
                    }
                    Ok(None)
                }));
            }
        }
    }
    (grid(&[("E sizes", format!("0..={n}"))]), specs)
}

fn tangent_suite(s: &Session, n: i32) -> Suite {
    let mut specs = Vec::new();
    for r in s.ranks() {
        for d in 0..=n.max(0) as u32 {
            let sc = s.clone();
            specs.push(case(params!(check = "tangent", r = r, size = d), move || {
                for l in enumerate_multipartitions(r, d) {
                    let c = twist_char(&sc, char_tangent(&l));
                    let weights = c.weights();
                    let count: i64 = weights.iter().map(|(_, m)| *m).sum();
                    let all_positive = weights.iter().all(|(_, m)| *m > 0);
                    let want = 2 * r as i64 * d as i64;
                    let trivial = c.trivial_multiplicity();
                    if count != want || !all_positive || trivial != 0 {
                        return Ok(Some(Witness {
                            lambda: Some(l.to_string()),
                            mu: None,
                            lhs: format!("{count} weights, trivial multiplicity {trivial}"),
                            rhs: format!("{want} weights, trivial multiplicity 0"),
                            note: Some(c.poly().to_string()),
                        }));
                    }
                }
                Ok(None)
            }));
        }
    }
    (grid(&[("tangent size", format!("0..={n}"))]), specs)
}

// ---------------------------------------------------------------------------
// R11

fn distinct_suite(s: &Session) -> Suite {
    let merge = s.perturbed(Perturbation::MergeFraming);
    let mut specs = Vec::new();
    for r in s.ranks() {
        for d in 0..=s.max_d.max(0) as u32 {
            specs.push(case(params!(r = r, size = d), move || {
                let mut seen: BTreeMap<String, MultiPartition> = BTreeMap::new();
                for l in enumerate_multipartitions(r, d) {
                    let mut c = char_taut(&l).into_poly();
                    if merge {
                        c = c.subs_monomials(&[(Symbol::T(2), t(1))]);
                    }
                    if let Some(prev) = seen.insert(c.to_string(), l.clone()) {
                        return Ok(Some(Witness {
                            lambda: Some(prev.to_string()),
                            mu: Some(l.to_string()),
                            lhs: c.to_string(),
                            rhs: c.to_string(),
                            note: Some("equal tautological characters".into()),
                        }));
                    }
                }
                Ok(None)
            }));
        }
    }
    (grid(&[("r", format!("1..={}", s.r)), ("size", format!("0..={}", s.max_d))]), specs)
}

// ---------------------------------------------------------------------------
// R12

fn degeneration_suite(s: &Session) -> Suite {
    let mode = s.eq_mode();
    let shift = i32::from(s.perturbed(Perturbation::DegreeShift));
    let mut specs = Vec::new();
    for r in s.ranks() {
        for sign in signs() {
            for e in -s.max_d..=s.max_d {
                for deg in 0..=s.max_d {
                    specs.push(case(params!(r = r, sign = sign, d = e, deg = deg), move || {
                        let p = op_matrix(&OpSpec::P { k: 1, d: e }, sign, r, deg, &ActionOptions::default())?;
                        let ord = ActionOptions {
                            method: Method::Orderings,
                            ..ActionOptions::default()
                        };
                        let x = op_matrix(&OpSpec::Element(ShuffleElement::z_pow(e + shift)), sign, r, deg, &ord)?;
                        mat_witness(&p, &x, mode)
                    }));
                }
            }
        }
    }
    let g = grid(&[
        ("r", format!("1..={}", s.r)),
        ("d", format!("-{0}..={0}", s.max_d)),
        ("deg", format!("0..={}", s.max_d)),
    ]);
    (g, specs)
}

// ---------------------------------------------------------------------------
// determinism

/// Outcome of comparing repeated and randomized runs.
#[derive(Clone, Debug, Serialize)]
pub struct DeterminismOutcome {
    pub relation: Relation,
    pub byte_identical_exact: bool,
    pub byte_identical_randomized: bool,
    /// Case keys whose randomized status differs from the exact one.
    pub contradictions: Vec<String>,
}

impl DeterminismOutcome {
    pub fn ok(&self) -> bool {
        self.byte_identical_exact && self.byte_identical_randomized && self.contradictions.is_empty()
    }
}

/// Run `rel` twice in exact mode and twice in randomized mode.
pub fn determinism(rel: Relation, s: &Session) -> Res<DeterminismOutcome> {
    let exact = Session {
        mode: Mode::Exact,
        timing: false,
        ..s.clone()
    };
    let randomized = Session {
        mode: Mode::Randomized,
        ..exact.clone()
    };
    let e1 = verify(rel, &exact)?;
    let e2 = verify(rel, &exact)?;
    let r1 = verify(rel, &randomized)?;
    let r2 = verify(rel, &randomized)?;
    let contradictions = e1
        .cases
        .iter()
        .zip(&r1.cases)
        .filter(|(a, b)| a.key != b.key || a.variant != b.variant || a.status.label() != b.status.label())
        .map(|(a, _)| a.key.clone())
        .collect();
    Ok(DeterminismOutcome {
        relation: rel,
        byte_identical_exact: e1.to_json() == e2.to_json(),
        byte_identical_randomized: r1.to_json() == r2.to_json(),
        contradictions,
    })
}
