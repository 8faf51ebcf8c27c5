//! Direct whole-term measure families with constructive pump refutations,
//! the twelve-class barrier catalog, and the two construction escapes:
//! polynomial interpretations and the multiset path order.
//!
//! The refuters are total on their families over the duplicator: the pump
//! instantiates the duplicated step argument with a successor tower tall
//! enough that the extra right-hand copy absorbs any fixed successor-side
//! decrease. The orienters use sound sufficient criteria and report their
//! incompleteness instead of hiding it.

use crate::json::Json;
use crate::term::{Substitution, Symbol, Term};
use crate::trs::Trs;
use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};
use std::collections::{BTreeMap, BTreeSet};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MeasureError {
    #[error("symbol {0} carries no weight in the measure")]
    UnweightedSymbol(String),
    #[error(
        "affine multiplier for {symbol} argument {index} is {value}; weak monotonicity needs >= 1"
    )]
    MultiplierBelowOne {
        symbol: String,
        index: usize,
        value: u64,
    },
    #[error("polynomial for {symbol} has an exponent vector of length {found}, arity is {arity}")]
    ExponentArity {
        symbol: String,
        arity: usize,
        found: usize,
    },
    #[error("term is not ground")]
    NotGround,
    #[error("measure family does not match the operation")]
    WrongFamily,
}

/// Per-symbol affine data: a constant plus one multiplier per argument.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineEntry {
    pub constant: u64,
    pub multipliers: Vec<u64>,
}

/// One monomial of a per-symbol polynomial: `coeff * prod(arg_i ^ exp_i)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyTerm {
    pub coeff: u64,
    pub exps: Vec<u32>,
}

/// A direct whole-term measure family.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MeasureSpec {
    Additive(BTreeMap<String, u64>),
    Affine(BTreeMap<String, AffineEntry>),
    Poly(BTreeMap<String, Vec<PolyTerm>>),
}

impl MeasureSpec {
    pub fn family_name(&self) -> &'static str {
        match self {
            MeasureSpec::Additive(_) => "additive",
            MeasureSpec::Affine(_) => "affine",
            MeasureSpec::Poly(_) => "poly",
        }
    }

    /// Additive weights of 1 for every signature symbol.
    pub fn uniform_additive(trs: &Trs) -> MeasureSpec {
        MeasureSpec::Additive(
            trs.signature
                .iter()
                .map(|s| (s.name().to_string(), 1))
                .collect(),
        )
    }

    /// Affine constants of 1 with all multipliers 1.
    pub fn uniform_affine(trs: &Trs) -> MeasureSpec {
        MeasureSpec::Affine(
            trs.signature
                .iter()
                .map(|s| {
                    (
                        s.name().to_string(),
                        AffineEntry {
                            constant: 1,
                            multipliers: vec![1; s.arity()],
                        },
                    )
                })
                .collect(),
        )
    }

    fn validate(&self) -> Result<(), MeasureError> {
        if let MeasureSpec::Affine(entries) = self {
            for (name, entry) in entries {
                for (i, &m) in entry.multipliers.iter().enumerate() {
                    if m < 1 {
                        return Err(MeasureError::MultiplierBelowOne {
                            symbol: name.clone(),
                            index: i,
                            value: m,
                        });
                    }
                }
            }
        }
        Ok(())
    }
}

/// The default polynomial candidate: `[F](x,y,n) = x + (y+2)n + 1`,
/// `[G](u,v) = u + v + 1`, `[S](n) = n + 1`, `[Z] = 0`. Verified
/// symbolically by `orient_poly` before anything trusts it.
pub fn default_poly_witness() -> MeasureSpec {
    let mut weights = BTreeMap::new();
    weights.insert(
        "F".to_string(),
        vec![
            PolyTerm {
                coeff: 1,
                exps: vec![1, 0, 0],
            },
            PolyTerm {
                coeff: 1,
                exps: vec![0, 1, 1],
            },
            PolyTerm {
                coeff: 2,
                exps: vec![0, 0, 1],
            },
            PolyTerm {
                coeff: 1,
                exps: vec![0, 0, 0],
            },
        ],
    );
    weights.insert(
        "G".to_string(),
        vec![
            PolyTerm {
                coeff: 1,
                exps: vec![1, 0],
            },
            PolyTerm {
                coeff: 1,
                exps: vec![0, 1],
            },
            PolyTerm {
                coeff: 1,
                exps: vec![0, 0],
            },
        ],
    );
    weights.insert(
        "S".to_string(),
        vec![
            PolyTerm {
                coeff: 1,
                exps: vec![1],
            },
            PolyTerm {
                coeff: 1,
                exps: vec![0],
            },
        ],
    );
    weights.insert("Z".to_string(), vec![]);
    MeasureSpec::Poly(weights)
}

/// Bottom-up evaluation of a measure on a ground term.
pub fn evaluate_measure(m: &MeasureSpec, t: &Term) -> Result<BigUint, MeasureError> {
    if !t.is_ground() {
        return Err(MeasureError::NotGround);
    }
    m.validate()?;
    eval(m, t)
}

fn eval(m: &MeasureSpec, t: &Term) -> Result<BigUint, MeasureError> {
    let sym = t.head().ok_or(MeasureError::NotGround)?;
    let args: Vec<BigUint> = t
        .args()
        .iter()
        .map(|a| eval(m, a))
        .collect::<Result<_, _>>()?;
    let missing = || MeasureError::UnweightedSymbol(sym.name().to_string());
    match m {
        MeasureSpec::Additive(weights) => {
            let w = weights.get(sym.name()).ok_or_else(missing)?;
            Ok(args.into_iter().sum::<BigUint>() + BigUint::from(*w))
        }
        MeasureSpec::Affine(entries) => {
            let entry = entries.get(sym.name()).ok_or_else(missing)?;
            if entry.multipliers.len() != sym.arity() {
                return Err(MeasureError::ExponentArity {
                    symbol: sym.name().to_string(),
                    arity: sym.arity(),
                    found: entry.multipliers.len(),
                });
            }
            let mut acc = BigUint::from(entry.constant);
            for (v, &mult) in args.iter().zip(entry.multipliers.iter()) {
                acc += v * BigUint::from(mult);
            }
            Ok(acc)
        }
        MeasureSpec::Poly(polys) => {
            let terms = polys.get(sym.name()).ok_or_else(missing)?;
            let mut acc = BigUint::zero();
            for pt in terms {
                if pt.exps.len() != sym.arity() {
                    return Err(MeasureError::ExponentArity {
                        symbol: sym.name().to_string(),
                        arity: sym.arity(),
                        found: pt.exps.len(),
                    });
                }
                let mut prod = BigUint::from(pt.coeff);
                for (v, &e) in args.iter().zip(pt.exps.iter()) {
                    prod *= v.pow(e);
                }
                acc += prod;
            }
            Ok(acc)
        }
    }
}

// ---------------------------------------------------------------------------
// Symbolic linear forms for the additive and affine families
// ---------------------------------------------------------------------------

/// `constant + sum(coeff_v * mu(v))` over rule variables; exact for the
/// additive and affine families, where the measure is linear in the
/// variable measures.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearForm {
    pub constant: BigInt,
    pub coeffs: BTreeMap<String, BigInt>,
}

impl LinearForm {
    fn sub(mut self, other: LinearForm) -> LinearForm {
        self.constant -= other.constant;
        for (v, c) in other.coeffs {
            *self.coeffs.entry(v).or_insert_with(BigInt::zero) -= c;
        }
        self
    }
}

fn linear_form(
    m: &MeasureSpec,
    t: &Term,
    scale: &BigInt,
    out: &mut LinearForm,
) -> Result<(), MeasureError> {
    if let Some(v) = t.var_name() {
        *out.coeffs.entry(v.to_string()).or_insert_with(BigInt::zero) += scale;
        return Ok(());
    }
    let sym = t.head().expect("application");
    let missing = || MeasureError::UnweightedSymbol(sym.name().to_string());
    match m {
        MeasureSpec::Additive(weights) => {
            let w = weights.get(sym.name()).ok_or_else(missing)?;
            out.constant += scale * BigInt::from(*w);
            for arg in t.args() {
                linear_form(m, arg, scale, out)?;
            }
            Ok(())
        }
        MeasureSpec::Affine(entries) => {
            let entry = entries.get(sym.name()).ok_or_else(missing)?;
            out.constant += scale * BigInt::from(entry.constant);
            for (arg, &mult) in t.args().iter().zip(entry.multipliers.iter()) {
                let inner = scale * BigInt::from(mult);
                linear_form(m, arg, &inner, out)?;
            }
            Ok(())
        }
        MeasureSpec::Poly(_) => Err(MeasureError::WrongFamily),
    }
}

/// Symbolic per-rule difference `mu(lhs) - mu(rhs)` as a linear form.
pub fn rule_difference(
    m: &MeasureSpec,
    rule: &crate::trs::Rule,
) -> Result<LinearForm, MeasureError> {
    m.validate()?;
    let mut lhs = LinearForm {
        constant: BigInt::zero(),
        coeffs: BTreeMap::new(),
    };
    linear_form(m, &rule.lhs, &BigInt::one(), &mut lhs)?;
    let mut rhs = LinearForm {
        constant: BigInt::zero(),
        coeffs: BTreeMap::new(),
    };
    linear_form(m, &rule.rhs, &BigInt::one(), &mut rhs)?;
    Ok(lhs.sub(rhs))
}

// ---------------------------------------------------------------------------
// Verdicts, witnesses, certificates
// ---------------------------------------------------------------------------

/// A re-checkable non-decrease witness: the pump substitution and the two
/// measure values it produces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PumpEvidence {
    pub rule: String,
    pub substitution: Substitution,
    pub lhs_value: BigUint,
    pub rhs_value: BigUint,
    /// Tower height of the pumped variable, when the pump is a tower.
    pub tower_height: Option<u64>,
}

impl PumpEvidence {
    pub fn to_json(&self) -> Json {
        let mut bindings = BTreeMap::new();
        for (v, t) in self.substitution.bindings() {
            bindings.insert(v.to_string(), Json::from(t.to_string()));
        }
        let mut obj = Json::obj([
            ("rule", Json::from(self.rule.as_str())),
            ("substitution", Json::Obj(bindings)),
            ("lhs_value", Json::from(self.lhs_value.to_string())),
            ("rhs_value", Json::from(self.rhs_value.to_string())),
        ]);
        if let Some(h) = self.tower_height {
            obj.insert("tower_height", Json::from(h));
        }
        obj
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CertificateKind {
    ConstructivePump,
    Declared,
}

impl CertificateKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            CertificateKind::ConstructivePump => "constructive-pump",
            CertificateKind::Declared => "declared",
        }
    }
}

/// An attempt-and-failure record: one per ruled-out witness attempt.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FailureCertificate {
    pub entry_name: String,
    pub level: u8,
    pub kind: CertificateKind,
    pub pump: Option<PumpEvidence>,
    pub boundary_condition: String,
}

impl FailureCertificate {
    pub fn to_json(&self) -> Json {
        let mut obj = Json::obj([
            ("entry_name", Json::from(self.entry_name.as_str())),
            ("level", Json::from(u64::from(self.level))),
            ("kind", Json::from(self.kind.as_str())),
            (
                "boundary_condition",
                Json::from(self.boundary_condition.as_str()),
            ),
        ]);
        if let Some(p) = &self.pump {
            obj.insert("pump", p.to_json());
        }
        obj
    }
}

/// Which top-level case closed an MPO comparison.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MpoRuleEvidence {
    pub rule: String,
    pub case: &'static str,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OrientationWitness {
    Measure {
        spec: MeasureSpec,
        /// Per-rule symbolic decrease evidence.
        per_rule: Vec<(String, String)>,
    },
    Precedence {
        precedence: PrecedenceSpec,
        per_rule: Vec<MpoRuleEvidence>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OrientationVerdict {
    Oriented(OrientationWitness),
    NotOriented {
        failing_rule: String,
        reason: String,
        counterexample: Option<PumpEvidence>,
    },
}

impl OrientationVerdict {
    pub fn is_oriented(&self) -> bool {
        matches!(self, OrientationVerdict::Oriented(_))
    }

    pub fn to_json(&self) -> Json {
        match self {
            OrientationVerdict::Oriented(witness) => {
                let witness_json = match witness {
                    OrientationWitness::Measure { spec, per_rule } => Json::obj([
                        ("kind", Json::from("measure")),
                        ("family", Json::from(spec.family_name())),
                        ("spec", measure_spec_to_json(spec)),
                        (
                            "per_rule",
                            Json::arr(per_rule.iter().map(|(rule, decrease)| {
                                Json::obj([
                                    ("rule", Json::from(rule.as_str())),
                                    ("decrease", Json::from(decrease.as_str())),
                                ])
                            })),
                        ),
                    ]),
                    OrientationWitness::Precedence {
                        precedence,
                        per_rule,
                    } => Json::obj([
                        ("kind", Json::from("mpo")),
                        ("precedence", precedence.to_json()),
                        (
                            "per_rule",
                            Json::arr(per_rule.iter().map(|e| {
                                Json::obj([
                                    ("rule", Json::from(e.rule.as_str())),
                                    ("case", Json::from(e.case)),
                                ])
                            })),
                        ),
                    ]),
                };
                Json::obj([
                    ("outcome", Json::from("oriented")),
                    ("witness", witness_json),
                ])
            }
            OrientationVerdict::NotOriented {
                failing_rule,
                reason,
                counterexample,
            } => {
                let mut obj = Json::obj([
                    ("outcome", Json::from("refuted")),
                    ("failing_rule", Json::from(failing_rule.as_str())),
                    ("reason", Json::from(reason.as_str())),
                ]);
                if let Some(ce) = counterexample {
                    obj.insert("pump", ce.to_json());
                }
                obj
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Additive and affine: orientation attempts and the recursor refuters
// ---------------------------------------------------------------------------

fn decrease_summary(d: &LinearForm) -> String {
    let mut parts = vec![format!("constant {}", d.constant)];
    for (v, c) in &d.coeffs {
        if !c.is_zero() {
            parts.push(format!("{} coefficient {}", v, c));
        }
    }
    parts.join(", ")
}

/// Tries to orient every rule with the sufficient criterion for linear
/// families: difference constant >= 1 and every variable coefficient >= 0.
/// On failure, searches a constructive pump within a bounded grid.
pub fn orient_linear(trs: &Trs, m: &MeasureSpec) -> Result<OrientationVerdict, MeasureError> {
    if matches!(m, MeasureSpec::Poly(_)) {
        return Err(MeasureError::WrongFamily);
    }
    m.validate()?;
    let mut per_rule = Vec::new();
    for rule in &trs.rules {
        let d = rule_difference(m, rule)?;
        let ok = d.constant >= BigInt::one() && d.coeffs.values().all(|c| !c.is_negative());
        if !ok {
            let counterexample = search_pump(m, rule)?;
            return Ok(OrientationVerdict::NotOriented {
                failing_rule: rule.label.clone(),
                reason: format!(
                    "symbolic difference not strictly positive: {}",
                    decrease_summary(&d)
                ),
                counterexample,
            });
        }
        per_rule.push((rule.label.clone(), decrease_summary(&d)));
    }
    Ok(OrientationVerdict::Oriented(OrientationWitness::Measure {
        spec: m.clone(),
        per_rule,
    }))
}

/// Bounded pump search: every variable in turn is instantiated with a
/// successor tower (all others at Z) until the instantiated rule fails to
/// decrease.
fn search_pump(
    m: &MeasureSpec,
    rule: &crate::trs::Rule,
) -> Result<Option<PumpEvidence>, MeasureError> {
    let vars: Vec<String> = rule.lhs.vars().iter().map(|v| v.to_string()).collect();
    for height in 0..=64u64 {
        for pumped in &vars {
            let mut sigma = Substitution::new();
            for v in &vars {
                sigma.bind(
                    v,
                    if v == pumped {
                        Term::tower(height)
                    } else {
                        Term::z()
                    },
                );
            }
            let lhs_value = evaluate_measure(m, &sigma.apply(&rule.lhs))?;
            let rhs_value = evaluate_measure(m, &sigma.apply(&rule.rhs))?;
            if lhs_value <= rhs_value {
                return Ok(Some(PumpEvidence {
                    rule: rule.label.clone(),
                    substitution: sigma,
                    lhs_value,
                    rhs_value,
                    tower_height: Some(height),
                }));
            }
        }
    }
    Ok(None)
}

fn recursor_step_rule() -> crate::trs::Rule {
    Trs::recursor().rule("step").expect("step rule").clone()
}

/// The universal additive refutation on the duplicator: the fixed pump
/// `{x -> Z, n -> Z, y -> S(Z)}` yields
/// `mu(lhs) - mu(rhs) = w_S - w_G - mu(S(Z)) = -w_G - w_Z <= 0`
/// for every nonnegative weight assignment.
pub fn refute_additive(m: &MeasureSpec) -> Result<PumpEvidence, MeasureError> {
    if !matches!(m, MeasureSpec::Additive(_)) {
        return Err(MeasureError::WrongFamily);
    }
    let rule = recursor_step_rule();
    let sigma = Substitution::from([("x", Term::z()), ("n", Term::z()), ("y", Term::tower(1))]);
    let lhs_value = evaluate_measure(m, &sigma.apply(&rule.lhs))?;
    let rhs_value = evaluate_measure(m, &sigma.apply(&rule.rhs))?;
    assert!(
        lhs_value <= rhs_value,
        "additive pump must witness non-decrease"
    );
    Ok(PumpEvidence {
        rule: rule.label,
        substitution: sigma,
        lhs_value,
        rhs_value,
        tower_height: Some(1),
    })
}

/// The affine refutation on the duplicator: pumps `y` with a tower
/// `S^m(Z)`. The right-hand side carries the left-hand `y`-coefficient plus
/// a positive extra-copy term, so a tall enough tower always closes the
/// gap; the search starts at the successor constant so the extra copy
/// dominates the fixed successor-side decrease.
pub fn refute_affine(m: &MeasureSpec) -> Result<PumpEvidence, MeasureError> {
    let entries = match m {
        MeasureSpec::Affine(entries) => entries,
        _ => return Err(MeasureError::WrongFamily),
    };
    m.validate()?;
    let rule = recursor_step_rule();
    let start = entries.get("S").map(|e| e.constant).unwrap_or(0).max(1);
    for height in start..start + 100_000 {
        let sigma = Substitution::from([
            ("x", Term::z()),
            ("n", Term::z()),
            ("y", Term::tower(height)),
        ]);
        let lhs_value = evaluate_measure(m, &sigma.apply(&rule.lhs))?;
        let rhs_value = evaluate_measure(m, &sigma.apply(&rule.rhs))?;
        if lhs_value <= rhs_value {
            return Ok(PumpEvidence {
                rule: rule.label,
                substitution: sigma,
                lhs_value,
                rhs_value,
                tower_height: Some(height),
            });
        }
    }
    unreachable!("the affine pump closes the gap at the first height for multipliers >= 1")
}

// ---------------------------------------------------------------------------
// Polynomial interpretations
// ---------------------------------------------------------------------------

type Monomial = Vec<u32>;

#[derive(Debug, Clone, PartialEq, Eq)]
struct Poly {
    nvars: usize,
    terms: BTreeMap<Monomial, BigInt>,
}

impl Poly {
    fn zero(nvars: usize) -> Poly {
        Poly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    fn constant(c: BigInt, nvars: usize) -> Poly {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(vec![0; nvars], c);
        }
        Poly { nvars, terms }
    }

    fn var(idx: usize, nvars: usize) -> Poly {
        let mut mono = vec![0; nvars];
        mono[idx] = 1;
        let mut terms = BTreeMap::new();
        terms.insert(mono, BigInt::one());
        Poly { nvars, terms }
    }

    fn add_assign(&mut self, other: &Poly) {
        for (mono, c) in &other.terms {
            let entry = self.terms.entry(mono.clone()).or_insert_with(BigInt::zero);
            *entry += c;
        }
        self.terms.retain(|_, c| !c.is_zero());
    }

    fn mul(&self, other: &Poly) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let mono: Monomial = m1.iter().zip(m2.iter()).map(|(a, b)| a + b).collect();
                *out.terms.entry(mono).or_insert_with(BigInt::zero) += c1 * c2;
            }
        }
        out.terms.retain(|_, c| !c.is_zero());
        out
    }

    fn pow(&self, e: u32) -> Poly {
        let mut out = Poly::constant(BigInt::one(), self.nvars);
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    fn sub(mut self, other: &Poly) -> Poly {
        for (mono, c) in &other.terms {
            let entry = self.terms.entry(mono.clone()).or_insert_with(BigInt::zero);
            *entry -= c;
        }
        self.terms.retain(|_, c| !c.is_zero());
        self
    }

    fn constant_term(&self) -> BigInt {
        self.terms
            .iter()
            .find(|(m, _)| m.iter().all(|&e| e == 0))
            .map(|(_, c)| c.clone())
            .unwrap_or_else(BigInt::zero)
    }

    fn render(&self, vars: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut parts = Vec::new();
        for (mono, c) in &self.terms {
            let mut factors = Vec::new();
            if !c.is_one() || mono.iter().all(|&e| e == 0) {
                factors.push(c.to_string());
            }
            for (i, &e) in mono.iter().enumerate() {
                if e == 1 {
                    factors.push(vars[i].clone());
                } else if e > 1 {
                    factors.push(format!("{}^{}", vars[i], e));
                }
            }
            parts.push(factors.join("*"));
        }
        parts.join(" + ")
    }
}

fn poly_of_term(
    t: &Term,
    vars: &[String],
    polys: &BTreeMap<String, Vec<PolyTerm>>,
) -> Result<Poly, MeasureError> {
    let nvars = vars.len();
    if let Some(v) = t.var_name() {
        let idx = vars.iter().position(|w| w == v).expect("rule variable");
        return Ok(Poly::var(idx, nvars));
    }
    let sym = t.head().expect("application");
    let terms = polys
        .get(sym.name())
        .ok_or_else(|| MeasureError::UnweightedSymbol(sym.name().to_string()))?;
    let arg_polys: Vec<Poly> = t
        .args()
        .iter()
        .map(|a| poly_of_term(a, vars, polys))
        .collect::<Result<_, _>>()?;
    let mut acc = Poly::zero(nvars);
    for pt in terms {
        if pt.exps.len() != sym.arity() {
            return Err(MeasureError::ExponentArity {
                symbol: sym.name().to_string(),
                arity: sym.arity(),
                found: pt.exps.len(),
            });
        }
        let mut prod = Poly::constant(BigInt::from(pt.coeff), nvars);
        for (arg_poly, &e) in arg_polys.iter().zip(pt.exps.iter()) {
            if e > 0 {
                prod = prod.mul(&arg_poly.pow(e));
            }
        }
        acc.add_assign(&prod);
    }
    Ok(acc)
}

/// Orients rules by the nonnegative-difference-coefficients criterion: the
/// difference polynomial must have nonnegative coefficients and a strictly
/// positive constant term. The criterion is sufficient, not complete; a
/// failing rule is reported with a sampled counterexample when one exists
/// within the sample grid.
pub fn orient_poly(trs: &Trs, m: &MeasureSpec) -> Result<OrientationVerdict, MeasureError> {
    let polys = match m {
        MeasureSpec::Poly(p) => p,
        _ => return Err(MeasureError::WrongFamily),
    };
    let mut per_rule = Vec::new();
    for rule in &trs.rules {
        let vars: Vec<String> = rule.lhs.vars().iter().map(|v| v.to_string()).collect();
        let lhs = poly_of_term(&rule.lhs, &vars, polys)?;
        let rhs = poly_of_term(&rule.rhs, &vars, polys)?;
        let d = lhs.sub(&rhs);
        let ok = d.constant_term() >= BigInt::one() && d.terms.values().all(|c| !c.is_negative());
        if !ok {
            let counterexample = sample_poly_counterexample(m, rule)?;
            return Ok(OrientationVerdict::NotOriented {
                failing_rule: rule.label.clone(),
                reason: format!(
                    "difference polynomial {} fails the nonnegative-coefficients criterion",
                    d.render(&vars)
                ),
                counterexample,
            });
        }
        per_rule.push((
            rule.label.clone(),
            format!("difference {}", d.render(&vars)),
        ));
    }
    Ok(OrientationVerdict::Oriented(OrientationWitness::Measure {
        spec: m.clone(),
        per_rule,
    }))
}

/// Deterministic tower-grid search for a ground substitution on which the
/// interpreted left side fails to strictly exceed the right side.
fn sample_poly_counterexample(
    m: &MeasureSpec,
    rule: &crate::trs::Rule,
) -> Result<Option<PumpEvidence>, MeasureError> {
    let vars: Vec<String> = rule.lhs.vars().iter().map(|v| v.to_string()).collect();
    let heights_per_var = 6u64;
    let mut total: u64 = 1;
    for _ in &vars {
        total = total.saturating_mul(heights_per_var).min(1024);
    }
    for sample in 0..total {
        let mut rest = sample;
        let mut sigma = Substitution::new();
        for v in &vars {
            sigma.bind(v, Term::tower(rest % heights_per_var));
            rest /= heights_per_var;
        }
        let lhs_value = evaluate_measure(m, &sigma.apply(&rule.lhs))?;
        let rhs_value = evaluate_measure(m, &sigma.apply(&rule.rhs))?;
        if lhs_value <= rhs_value {
            return Ok(Some(PumpEvidence {
                rule: rule.label.clone(),
                substitution: sigma,
                lhs_value,
                rhs_value,
                tower_height: None,
            }));
        }
    }
    Ok(None)
}

// ---------------------------------------------------------------------------
// Multiset path order
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PrecedenceError {
    #[error("precedence is not irreflexive: {0} > {0} after closure")]
    Cycle(String),
    #[error("malformed precedence pair {0:?}; expected \"F>G\"")]
    Malformed(String),
}

/// A strict partial order on symbols, stored as its transitive closure.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PrecedenceSpec {
    greater: BTreeMap<String, BTreeSet<String>>,
}

impl PrecedenceSpec {
    pub fn new(pairs: &[(String, String)]) -> Result<PrecedenceSpec, PrecedenceError> {
        let mut greater: BTreeMap<String, BTreeSet<String>> = BTreeMap::new();
        for (hi, lo) in pairs {
            greater.entry(hi.clone()).or_default().insert(lo.clone());
        }
        loop {
            let mut added = false;
            let names: Vec<String> = greater.keys().cloned().collect();
            for hi in &names {
                let below: Vec<String> = greater[hi].iter().cloned().collect();
                for mid in below {
                    if let Some(under) = greater.get(&mid).cloned() {
                        let set = greater.get_mut(hi).expect("present");
                        for u in under {
                            added |= set.insert(u);
                        }
                    }
                }
            }
            if !added {
                break;
            }
        }
        for (hi, below) in &greater {
            if below.contains(hi) {
                return Err(PrecedenceError::Cycle(hi.clone()));
            }
        }
        Ok(PrecedenceSpec { greater })
    }

    /// Parses `"F>G,G>S"`.
    pub fn parse(text: &str) -> Result<PrecedenceSpec, PrecedenceError> {
        let mut pairs = Vec::new();
        for chunk in text.split(',') {
            let chunk = chunk.trim();
            if chunk.is_empty() {
                continue;
            }
            let (hi, lo) = chunk
                .split_once('>')
                .ok_or_else(|| PrecedenceError::Malformed(chunk.to_string()))?;
            pairs.push((hi.trim().to_string(), lo.trim().to_string()));
        }
        PrecedenceSpec::new(&pairs)
    }

    pub fn gt(&self, f: &Symbol, g: &Symbol) -> bool {
        self.greater
            .get(f.name())
            .map(|below| below.contains(g.name()))
            .unwrap_or(false)
    }

    pub fn to_json(&self) -> Json {
        Json::arr(self.greater.iter().flat_map(|(hi, below)| {
            below
                .iter()
                .map(move |lo| Json::from(format!("{}>{}", hi, lo)))
        }))
    }
}

/// Strict multiset path order: subterm, precedence, and equal-head multiset
/// cases.
pub fn mpo_gt(p: &PrecedenceSpec, s: &Term, t: &Term) -> bool {
    if let Some(v) = t.var_name() {
        return s.var_name() != Some(v) && s.count_var(v) > 0;
    }
    let (f, g) = match (s.head(), t.head()) {
        (Some(f), Some(g)) => (f, g),
        _ => return false,
    };
    // case 1: some argument of s is >= t
    if s.args().iter().any(|si| si == t || mpo_gt(p, si, t)) {
        return true;
    }
    // case 2: head precedence dominates every argument of t
    if p.gt(f, g) && t.args().iter().all(|tj| mpo_gt(p, s, tj)) {
        return true;
    }
    // case 3: equal heads, strict multiset extension on the arguments
    f == g && multiset_gt(p, s.args(), t.args())
}

fn multiset_gt(p: &PrecedenceSpec, ss: &[Term], ts: &[Term]) -> bool {
    let mut ss: Vec<&Term> = ss.iter().collect();
    let mut ts: Vec<&Term> = ts.iter().collect();
    let mut i = 0;
    while i < ts.len() {
        match ss.iter().position(|s| *s == ts[i]) {
            Some(j) => {
                ss.remove(j);
                ts.remove(i);
            }
            None => i += 1,
        }
    }
    if ss.is_empty() {
        return false;
    }
    ts.iter().all(|t| ss.iter().any(|s| mpo_gt(p, s, t)))
}

/// Checks `lhs >mpo rhs` for every rule.
pub fn orient_mpo(trs: &Trs, p: &PrecedenceSpec) -> OrientationVerdict {
    let mut per_rule = Vec::new();
    for rule in &trs.rules {
        if !mpo_gt(p, &rule.lhs, &rule.rhs) {
            return OrientationVerdict::NotOriented {
                failing_rule: rule.label.clone(),
                reason: "left-hand side is not MPO-greater under the precedence".to_string(),
                counterexample: None,
            };
        }
        let case = if rule
            .lhs
            .args()
            .iter()
            .any(|si| si == &rule.rhs || mpo_gt(p, si, &rule.rhs))
        {
            "subterm"
        } else if rule
            .lhs
            .head()
            .zip(rule.rhs.head())
            .map(|(f, g)| p.gt(f, g))
            .unwrap_or(false)
        {
            "precedence"
        } else {
            "multiset"
        };
        per_rule.push(MpoRuleEvidence {
            rule: rule.label.clone(),
            case,
        });
    }
    OrientationVerdict::Oriented(OrientationWitness::Precedence {
        precedence: p.clone(),
        per_rule,
    })
}

// ---------------------------------------------------------------------------
// The twelve-class barrier catalog
// ---------------------------------------------------------------------------

/// The twelve direct-measure barrier classes, in catalog order.
pub const BARRIER_CLASS_NAMES: [&str; 12] = [
    "additive",
    "transparent-compositional",
    "affine",
    "restricted-quadratic",
    "bounded-cross-term-quadratic",
    "bounded-multilinear",
    "generalized-bounded-polynomial",
    "max-plus",
    "tracked-componentwise",
    "tracked-primary-lexicographic",
    "balanced-mixed-coordinate",
    "weighted-scalar-projection",
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BarrierClass {
    pub name: String,
    pub implemented: bool,
    pub refuter_available: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BarrierCatalog {
    pub classes: Vec<BarrierClass>,
}

impl Default for BarrierCatalog {
    fn default() -> BarrierCatalog {
        BarrierCatalog {
            classes: BARRIER_CLASS_NAMES
                .iter()
                .map(|&name| {
                    let implemented =
                        matches!(name, "additive" | "transparent-compositional" | "affine");
                    BarrierClass {
                        name: name.to_string(),
                        implemented,
                        refuter_available: implemented,
                    }
                })
                .collect(),
        }
    }
}

impl BarrierCatalog {
    /// Restricts the catalog to the named classes, keeping catalog order.
    pub fn restricted(names: &[&str]) -> BarrierCatalog {
        let full = BarrierCatalog::default();
        BarrierCatalog {
            classes: full
                .classes
                .into_iter()
                .filter(|c| names.contains(&c.name.as_str()))
                .collect(),
        }
    }
}

/// Runs the barrier catalog against the duplicator. The three implemented
/// classes emit constructive pump certificates; the transparent
/// compositional subclass is refuted by the same pump as the additive
/// class. The remaining nine carry declared certificates naming the
/// companion barrier package.
pub fn run_barrier(
    catalog: &BarrierCatalog,
    overrides: &BTreeMap<String, MeasureSpec>,
) -> Result<Vec<FailureCertificate>, MeasureError> {
    let recursor = Trs::recursor();
    let mut out = Vec::new();
    for class in &catalog.classes {
        let cert = match class.name.as_str() {
            "additive" | "transparent-compositional" => {
                let default = MeasureSpec::uniform_additive(&recursor);
                let m = overrides.get(&class.name).unwrap_or(&default);
                let pump = refute_additive(m)?;
                FailureCertificate {
                    entry_name: class.name.clone(),
                    level: 0,
                    kind: CertificateKind::ConstructivePump,
                    boundary_condition: format!(
                        "step rule never strictly decreases: mu(lhs) = {} <= {} = mu(rhs) under the pump",
                        pump.lhs_value, pump.rhs_value
                    ),
                    pump: Some(pump),
                }
            }
            "affine" => {
                let default = MeasureSpec::uniform_affine(&recursor);
                let m = overrides.get(&class.name).unwrap_or(&default);
                let pump = refute_affine(m)?;
                FailureCertificate {
                    entry_name: class.name.clone(),
                    level: 0,
                    kind: CertificateKind::ConstructivePump,
                    boundary_condition: format!(
                        "tower pump of height {} closes the affine gap",
                        pump.tower_height.unwrap_or(0)
                    ),
                    pump: Some(pump),
                }
            }
            _ => FailureCertificate {
                entry_name: class.name.clone(),
                level: 0,
                kind: CertificateKind::Declared,
                pump: None,
                boundary_condition: "companion barrier package".to_string(),
            },
        };
        out.push(cert);
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Measure JSON
// ---------------------------------------------------------------------------

pub fn measure_spec_to_json(m: &MeasureSpec) -> Json {
    match m {
        MeasureSpec::Additive(weights) => Json::obj([
            ("family", Json::from("additive")),
            (
                "weights",
                Json::Obj(
                    weights
                        .iter()
                        .map(|(k, v)| (k.clone(), Json::from(*v)))
                        .collect(),
                ),
            ),
        ]),
        MeasureSpec::Affine(entries) => Json::obj([
            ("family", Json::from("affine")),
            (
                "weights",
                Json::Obj(
                    entries
                        .iter()
                        .map(|(k, e)| {
                            (
                                k.clone(),
                                Json::obj([
                                    ("const", Json::from(e.constant)),
                                    (
                                        "mults",
                                        Json::arr(e.multipliers.iter().map(|&m| Json::from(m))),
                                    ),
                                ]),
                            )
                        })
                        .collect(),
                ),
            ),
        ]),
        MeasureSpec::Poly(polys) => Json::obj([
            ("family", Json::from("poly")),
            (
                "weights",
                Json::Obj(
                    polys
                        .iter()
                        .map(|(k, terms)| {
                            (
                                k.clone(),
                                Json::obj([(
                                    "terms",
                                    Json::arr(terms.iter().map(|t| {
                                        Json::obj([
                                            ("coeff", Json::from(t.coeff)),
                                            (
                                                "exps",
                                                Json::arr(
                                                    t.exps
                                                        .iter()
                                                        .map(|&e| Json::from(u64::from(e))),
                                                ),
                                            ),
                                        ])
                                    })),
                                )]),
                            )
                        })
                        .collect(),
                ),
            ),
        ]),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid measure spec: {0}")]
pub struct MeasureSpecParseError(pub String);

pub fn measure_spec_from_json(v: &Json) -> Result<MeasureSpec, MeasureSpecParseError> {
    let bad = |msg: &str| MeasureSpecParseError(msg.to_string());
    let family = v
        .get("family")
        .and_then(Json::as_str)
        .ok_or_else(|| bad("missing family"))?;
    let weights = v
        .get("weights")
        .and_then(Json::as_obj)
        .ok_or_else(|| bad("missing weights object"))?;
    match family {
        "additive" | "transparent-compositional" => {
            let mut out = BTreeMap::new();
            for (k, w) in weights {
                out.insert(
                    k.clone(),
                    w.as_u64()
                        .ok_or_else(|| bad("additive weight must be a nonnegative integer"))?,
                );
            }
            Ok(MeasureSpec::Additive(out))
        }
        "affine" => {
            let mut out = BTreeMap::new();
            for (k, e) in weights {
                let constant = e
                    .get("const")
                    .and_then(Json::as_u64)
                    .ok_or_else(|| bad("affine entry needs a const"))?;
                let mults = e
                    .get("mults")
                    .and_then(Json::as_arr)
                    .ok_or_else(|| bad("affine entry needs mults"))?
                    .iter()
                    .map(|m| {
                        m.as_u64()
                            .ok_or_else(|| bad("multiplier must be an integer"))
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                out.insert(
                    k.clone(),
                    AffineEntry {
                        constant,
                        multipliers: mults,
                    },
                );
            }
            Ok(MeasureSpec::Affine(out))
        }
        "poly" => {
            let mut out = BTreeMap::new();
            for (k, e) in weights {
                let terms = e
                    .get("terms")
                    .and_then(Json::as_arr)
                    .ok_or_else(|| bad("poly entry needs terms"))?
                    .iter()
                    .map(|t| {
                        let coeff = t
                            .get("coeff")
                            .and_then(Json::as_u64)
                            .ok_or_else(|| bad("poly term needs a coeff"))?;
                        let exps = t
                            .get("exps")
                            .and_then(Json::as_arr)
                            .ok_or_else(|| bad("poly term needs exps"))?
                            .iter()
                            .map(|x| {
                                x.as_u64()
                                    .and_then(|u| u32::try_from(u).ok())
                                    .ok_or_else(|| bad("exponent must be a small integer"))
                            })
                            .collect::<Result<Vec<_>, _>>()?;
                        Ok(PolyTerm { coeff, exps })
                    })
                    .collect::<Result<Vec<_>, MeasureSpecParseError>>()?;
                out.insert(k.clone(), terms);
            }
            Ok(MeasureSpec::Poly(out))
        }
        other => Err(bad(&format!("unknown family {:?}", other))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn additive_all(w: u64) -> MeasureSpec {
        MeasureSpec::Additive(
            ["F", "G", "S", "Z"]
                .iter()
                .map(|s| (s.to_string(), w))
                .collect(),
        )
    }

    fn additive_with(overrides: &[(&str, u64)]) -> MeasureSpec {
        let mut m = match additive_all(1) {
            MeasureSpec::Additive(m) => m,
            _ => unreachable!(),
        };
        for (k, v) in overrides {
            m.insert(k.to_string(), *v);
        }
        MeasureSpec::Additive(m)
    }

    #[test]
    fn evaluate_measure_examples() {
        let m = additive_all(1);
        assert_eq!(
            evaluate_measure(&m, &Term::g(Term::z(), Term::z())).unwrap(),
            BigUint::from(3u32)
        );
        let m2 = additive_with(&[("S", 2)]);
        assert_eq!(
            evaluate_measure(&m2, &Term::tower(2)).unwrap(),
            BigUint::from(5u32)
        );
        let poly = default_poly_witness();
        assert_eq!(
            evaluate_measure(&poly, &Term::tower(3)).unwrap(),
            BigUint::from(3u32)
        );
    }

    #[test]
    fn unweighted_symbol_is_an_error() {
        let m = MeasureSpec::Additive([("Z".to_string(), 1)].into());
        let err = evaluate_measure(&m, &Term::tower(1)).unwrap_err();
        assert!(matches!(err, MeasureError::UnweightedSymbol(s) if s == "S"));
    }

    #[test]
    fn refute_additive_examples() {
        let pump = refute_additive(&additive_all(1)).unwrap();
        assert_eq!(pump.lhs_value, BigUint::from(6u32));
        assert_eq!(pump.rhs_value, BigUint::from(8u32));

        let pump = refute_additive(&additive_with(&[("S", 100)])).unwrap();
        // difference is -w_G - w_Z = -2 regardless of w_S
        assert_eq!(&pump.rhs_value - &pump.lhs_value, BigUint::from(2u32));

        let pump = refute_additive(&additive_all(0)).unwrap();
        assert_eq!(pump.lhs_value, BigUint::zero());
        assert_eq!(pump.rhs_value, BigUint::zero());
    }

    fn affine_spec(consts: &[(&str, u64)], mult_overrides: &[(&str, Vec<u64>)]) -> MeasureSpec {
        let recursor = Trs::recursor();
        let mut entries = match MeasureSpec::uniform_affine(&recursor) {
            MeasureSpec::Affine(e) => e,
            _ => unreachable!(),
        };
        for (k, c) in consts {
            entries.get_mut(*k).unwrap().constant = *c;
        }
        for (k, m) in mult_overrides {
            entries.get_mut(*k).unwrap().multipliers = m.clone();
        }
        MeasureSpec::Affine(entries)
    }

    #[test]
    fn refute_affine_examples() {
        // all constants 1, all multipliers 1: degenerates to the additive case
        let pump = refute_affine(&affine_spec(&[], &[])).unwrap();
        assert_eq!(pump.tower_height, Some(1));
        assert!(pump.lhs_value <= pump.rhs_value);
        let additive_pump = refute_additive(&additive_all(1)).unwrap();
        assert_eq!(
            &pump.rhs_value - &pump.lhs_value,
            &additive_pump.rhs_value - &additive_pump.lhs_value
        );

        // a large successor constant forces a tall tower
        let pump = refute_affine(&affine_spec(&[("S", 50)], &[])).unwrap();
        assert!(pump.tower_height.unwrap() >= 50);
        assert!(pump.lhs_value <= pump.rhs_value);

        // heavier wrapper multiplier double-counts y even harder
        let pump = refute_affine(&affine_spec(&[], &[("G", vec![2, 1])])).unwrap();
        assert_eq!(pump.tower_height, Some(1));
        assert!(pump.lhs_value <= pump.rhs_value);
    }

    #[test]
    fn multiplier_below_one_is_rejected() {
        let spec = affine_spec(&[], &[("G", vec![0, 1])]);
        assert!(matches!(
            refute_affine(&spec),
            Err(MeasureError::MultiplierBelowOne { .. })
        ));
    }

    #[test]
    fn orient_poly_default_witness_is_verified() {
        let verdict = orient_poly(&Trs::recursor(), &default_poly_witness()).unwrap();
        match verdict {
            OrientationVerdict::Oriented(OrientationWitness::Measure { per_rule, .. }) => {
                // both difference polynomials are the constant 1
                for (_, decrease) in per_rule {
                    assert_eq!(decrease, "difference 1");
                }
            }
            other => panic!("expected oriented, got {:?}", other),
        }
    }

    #[test]
    fn orient_poly_all_linear_fails_with_counterexample() {
        let mut polys = match default_poly_witness() {
            MeasureSpec::Poly(p) => p,
            _ => unreachable!(),
        };
        polys.insert(
            "F".to_string(),
            vec![
                PolyTerm {
                    coeff: 1,
                    exps: vec![1, 0, 0],
                },
                PolyTerm {
                    coeff: 1,
                    exps: vec![0, 1, 0],
                },
                PolyTerm {
                    coeff: 1,
                    exps: vec![0, 0, 1],
                },
                PolyTerm {
                    coeff: 1,
                    exps: vec![0, 0, 0],
                },
            ],
        );
        let verdict = orient_poly(&Trs::recursor(), &MeasureSpec::Poly(polys)).unwrap();
        match verdict {
            OrientationVerdict::NotOriented {
                failing_rule,
                counterexample,
                ..
            } => {
                assert_eq!(failing_rule, "step");
                let ce = counterexample.expect("sampled counterexample");
                assert!(ce.lhs_value <= ce.rhs_value);
            }
            other => panic!("expected refutation, got {:?}", other),
        }
    }

    #[test]
    fn orient_poly_empty_trs_is_vacuous() {
        let empty = Trs::new("empty", vec![]).unwrap();
        assert!(orient_poly(&empty, &default_poly_witness())
            .unwrap()
            .is_oriented());
    }

    #[test]
    fn orient_mpo_examples() {
        let recursor = Trs::recursor();
        let p = PrecedenceSpec::parse("F>G").unwrap();
        let verdict = orient_mpo(&recursor, &p);
        match &verdict {
            OrientationVerdict::Oriented(OrientationWitness::Precedence { per_rule, .. }) => {
                assert_eq!(per_rule[0].case, "subterm"); // base: x is an argument
                assert_eq!(per_rule[1].case, "precedence"); // step: F > G
            }
            other => panic!("expected oriented, got {:?}", other),
        }

        let empty = PrecedenceSpec::default();
        assert!(!orient_mpo(&recursor, &empty).is_oriented());

        let f1 = Symbol::new("f", 1);
        let proj = Trs::new(
            "proj",
            vec![crate::trs::Rule::new(
                "r0",
                Term::app(f1, vec![Term::var("x")]).unwrap(),
                Term::var("x"),
            )
            .unwrap()],
        )
        .unwrap();
        assert!(orient_mpo(&proj, &empty).is_oriented());
    }

    #[test]
    fn precedence_cycle_is_rejected() {
        let err = PrecedenceSpec::parse("F>G,G>F").unwrap_err();
        assert!(matches!(err, PrecedenceError::Cycle(_)));
    }

    #[test]
    fn mpo_is_sound_on_canonical_traces() {
        // every redex is MPO-greater than its reduct under F > G
        let p = PrecedenceSpec::parse("F>G").unwrap();
        let b = Term::tower(1);
        for k in 0..=50u64 {
            let redex = Term::f(Term::z(), b.clone(), Term::tower(k));
            let reduct = if k > 0 {
                Term::g(b.clone(), Term::f(Term::z(), b.clone(), Term::tower(k - 1)))
            } else {
                Term::z()
            };
            assert!(mpo_gt(&p, &redex, &reduct), "k = {}", k);
        }
    }

    #[test]
    fn run_barrier_default_is_three_constructive_nine_declared() {
        let certs = run_barrier(&BarrierCatalog::default(), &BTreeMap::new()).unwrap();
        assert_eq!(certs.len(), 12);
        let constructive = certs
            .iter()
            .filter(|c| c.kind == CertificateKind::ConstructivePump)
            .count();
        assert_eq!(constructive, 3);
        let declared: Vec<_> = certs
            .iter()
            .filter(|c| c.kind == CertificateKind::Declared)
            .collect();
        assert_eq!(declared.len(), 9);
        assert!(declared
            .iter()
            .all(|c| c.boundary_condition == "companion barrier package"));
        let names: BTreeSet<_> = certs.iter().map(|c| c.entry_name.clone()).collect();
        assert_eq!(names.len(), 12);
        assert_eq!(
            certs
                .iter()
                .map(|c| c.entry_name.as_str())
                .collect::<Vec<_>>(),
            BARRIER_CLASS_NAMES.to_vec()
        );
    }

    #[test]
    fn run_barrier_restricted_to_additive() {
        let catalog = BarrierCatalog::restricted(&["additive"]);
        let certs = run_barrier(&catalog, &BTreeMap::new()).unwrap();
        assert_eq!(certs.len(), 1);
        assert_eq!(certs[0].kind, CertificateKind::ConstructivePump);
    }

    #[test]
    fn pumps_are_universal_over_sampled_weights() {
        // module-scale version; the acceptance suite runs the full 10k
        let mut state = 0x2545f4914f6cdd1du64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        let step = recursor_step_rule();
        for _ in 0..1000 {
            let m = MeasureSpec::Additive(
                ["F", "G", "S", "Z"]
                    .iter()
                    .map(|s| (s.to_string(), next() % 101))
                    .collect(),
            );
            let pump = refute_additive(&m).unwrap();
            let lhs = evaluate_measure(&m, &pump.substitution.apply(&step.lhs)).unwrap();
            let rhs = evaluate_measure(&m, &pump.substitution.apply(&step.rhs)).unwrap();
            assert_eq!(lhs, pump.lhs_value);
            assert_eq!(rhs, pump.rhs_value);
            assert!(lhs <= rhs);
        }
        for _ in 0..1000 {
            let m = MeasureSpec::Affine(
                [("F", 3usize), ("G", 2), ("S", 1), ("Z", 0)]
                    .iter()
                    .map(|&(s, arity)| {
                        (
                            s.to_string(),
                            AffineEntry {
                                constant: next() % 101,
                                multipliers: (0..arity).map(|_| 1 + next() % 5).collect(),
                            },
                        )
                    })
                    .collect(),
            );
            let pump = refute_affine(&m).unwrap();
            assert!(pump.lhs_value <= pump.rhs_value);
        }
    }

    #[test]
    fn orient_linear_succeeds_on_the_linear_variant() {
        let linear = Trs::linear_recursor();
        let verdict = orient_linear(&linear, &MeasureSpec::uniform_additive(&linear)).unwrap();
        assert!(verdict.is_oriented());

        // and fails on the duplicator, with a constructive pump
        let recursor = Trs::recursor();
        let verdict = orient_linear(&recursor, &MeasureSpec::uniform_additive(&recursor)).unwrap();
        match verdict {
            OrientationVerdict::NotOriented { counterexample, .. } => {
                let ce = counterexample.expect("pump");
                assert!(ce.lhs_value <= ce.rhs_value);
            }
            other => panic!("expected refutation, got {:?}", other),
        }
    }

    #[test]
    fn witness_and_certificate_records_are_disjoint() {
        // an orientation witness never carries a license or dimension
        // field; a failure certificate never carries a measure witness;
        // a shape-based classifier separates every generated instance
        fn classify(v: &crate::json::Json) -> &'static str {
            let has = |key: &str| v.get(key).is_some();
            match (has("witness") || has("outcome"), has("boundary_condition")) {
                (true, false) => "verdict",
                (false, true) => "certificate",
                _ => "confused",
            }
        }
        let recursor = Trs::recursor();
        let linear = Trs::linear_recursor();
        let mut verdicts = vec![
            orient_mpo(&recursor, &PrecedenceSpec::parse("F>G").unwrap()),
            orient_poly(&recursor, &default_poly_witness()).unwrap(),
            orient_linear(&linear, &MeasureSpec::uniform_additive(&linear)).unwrap(),
            orient_linear(&recursor, &MeasureSpec::uniform_additive(&recursor)).unwrap(),
        ];
        for w in [0u64, 1, 7, 50] {
            verdicts.push(orient_linear(&recursor, &additive_all(w)).unwrap());
        }
        for verdict in &verdicts {
            let json = verdict.to_json();
            assert_eq!(classify(&json), "verdict");
            let text = crate::json::emit_report(&json);
            assert!(!text.contains("\"license"));
            assert!(!text.contains("\"dimension\""));
        }
        let certs = run_barrier(&BarrierCatalog::default(), &BTreeMap::new()).unwrap();
        assert_eq!(certs.len(), 12);
        for cert in certs {
            let json = cert.to_json();
            assert_eq!(classify(&json), "certificate");
            assert!(!crate::json::emit_report(&json).contains("\"witness\""));
        }
    }

    #[test]
    fn mpo_is_a_strict_order_on_sampled_ground_terms() {
        // irreflexivity, transitivity, and inclusion of the strict subterm
        // relation, sampled over small ground schema terms
        let p = PrecedenceSpec::parse("F>G,G>S,S>Z").unwrap();
        let mut state = 0x94d049bb133111ebu64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        fn gen(next: &mut impl FnMut() -> u64, depth: u64) -> Term {
            if depth == 0 {
                return Term::z();
            }
            match next() % 4 {
                0 => Term::z(),
                1 => Term::s(gen(next, depth - 1)),
                2 => Term::g(gen(next, depth - 1), gen(next, depth - 1)),
                _ => Term::f(
                    gen(next, depth - 1),
                    gen(next, depth - 1),
                    gen(next, depth - 1),
                ),
            }
        }
        let terms: Vec<Term> = (0..40)
            .map(|_| {
                let depth = 1 + next() % 3;
                gen(&mut next, depth)
            })
            .collect();
        for s in &terms {
            assert!(!mpo_gt(&p, s, s), "irreflexivity at {}", s);
            for sub in s.args() {
                assert!(mpo_gt(&p, s, sub), "subterm {} of {}", sub, s);
            }
        }
        for s in &terms {
            for t in &terms {
                for u in &terms {
                    if mpo_gt(&p, s, t) && mpo_gt(&p, t, u) {
                        assert!(mpo_gt(&p, s, u), "transitivity {} {} {}", s, t, u);
                    }
                }
            }
        }
    }

    #[test]
    fn measure_spec_round_trips_through_json() {
        for spec in [
            additive_all(3),
            affine_spec(&[("S", 50)], &[("G", vec![2, 1])]),
            default_poly_witness(),
        ] {
            let json = measure_spec_to_json(&spec);
            let text = crate::json::emit_report(&json);
            let parsed =
                measure_spec_from_json(&crate::json::parse_report(&text).unwrap()).unwrap();
            assert_eq!(parsed, spec);
        }
    }
}
