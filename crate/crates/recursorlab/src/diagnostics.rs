//! The closed-form quantitative laws of the canonical trace: confession
//! dominance, proof entropy, gauge entropy, the inefficiency coefficient,
//! description gaps, channel costs, norm triples, and the seed-carrier
//! factorization classifier.
//!
//! Polynomial formulas are computed in exact rationals; only the
//! logarithmic quantities are floating point.

use crate::json::Json;
use crate::term::Term;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DiagError {
    #[error("k must be at least 1 for {0}")]
    KTooSmall(&'static str),
    #[error("base overhead c* must be at least 2 (one F node and one Z node)")]
    BaseOverheadTooSmall,
    #[error("cell weight must be at least 1")]
    CellWeightTooSmall,
    #[error("step index must be at least 1: the wrapper stack must exist")]
    EmptyStack,
    #[error("seed list must be nonempty and the multiplicity bound at least 2")]
    BadObservableSample,
}

fn big(n: u64) -> BigInt {
    BigInt::from(n)
}

fn ratio(num: BigInt, den: BigInt) -> BigRational {
    BigRational::new(num, den)
}

/// Renders an exact rational canonically: `p/q` in lowest terms, or a bare
/// integer when the denominator is one.
pub fn rational_string(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// `floor(log2 n) + 1` for `n >= 1`: the bit length of `n`.
pub fn size2(n: u64) -> u64 {
    assert!(n >= 1, "size2 is defined for n >= 1");
    64 - u64::from(n.leading_zeros())
}

fn ceil_log2(n: u64) -> u64 {
    if n <= 1 {
        0
    } else {
        64 - u64::from((n - 1).leading_zeros())
    }
}

/// `Con(k,b) = (k+1)(k+2)/2 * |b|`: the cumulative payload size declared
/// inert across the canonical trace.
pub fn confessed_burden(k: u64, payload_size: u64) -> BigRational {
    ratio(big(k + 1) * big(k + 2) * big(payload_size), big(2))
}

/// `Con_total(k,w) = (k+1)(k+2)/2 * w` over whole wrapper cells.
pub fn confessed_burden_total(k: u64, cell_weight: u64) -> BigRational {
    ratio(big(k + 1) * big(k + 2) * big(cell_weight), big(2))
}

/// `D_i = i(|G|+|b|) + (k-i) + c* = k + c* + i*|b|`: the structural size of
/// trace step `i` (the wrapper symbol contributes one node).
pub fn step_size(k: u64, payload_size: u64, c_star: u64, i: u64) -> u64 {
    k + c_star + i * payload_size
}

/// `H_proof(t_i) = i|b| / D_i` as an exact rational.
pub fn proof_entropy(k: u64, payload_size: u64, c_star: u64, i: u64) -> BigRational {
    ratio(
        big(i) * big(payload_size),
        big(step_size(k, payload_size, c_star, i)),
    )
}

/// Gauge-orbit entropy `log2(i+1)`: the coding entropy of singling out one
/// of the `i+1` payload positions.
pub fn gauge_entropy(i: u64) -> f64 {
    ((i + 1) as f64).log2()
}

/// The inefficiency coefficient and, on odd `k = 2N+1`, the sampled lower
/// bound `eta(2N+1, w) >= N`.
#[derive(Debug, Clone, PartialEq)]
pub struct Inefficiency {
    pub eta: f64,
    pub lower_bound: Option<(u64, bool)>,
}

/// `eta(k,w) = (k+1)(k+2)w / (2 ln(k+1))`; rejects `k = 0` (ln 1 = 0).
pub fn inefficiency(k: u64, cell_weight: u64) -> Result<Inefficiency, DiagError> {
    if k < 1 {
        return Err(DiagError::KTooSmall("inefficiency"));
    }
    if cell_weight < 1 {
        return Err(DiagError::CellWeightTooSmall);
    }
    let eta =
        ((k + 1) as f64) * ((k + 2) as f64) * (cell_weight as f64) / (2.0 * ((k + 1) as f64).ln());
    let lower_bound = if k % 2 == 1 {
        let n = (k - 1) / 2;
        Some((n, eta >= n as f64))
    } else {
        None
    };
    Ok(Inefficiency { eta, lower_bound })
}

/// Explicit-description model: one seed description, one wrapper symbol, a
/// binary counter code, and fixed glue overhead.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DescriptionModel {
    pub c0: u64,
}

impl Default for DescriptionModel {
    fn default() -> DescriptionModel {
        DescriptionModel { c0: 1 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DescriptionGap {
    pub m: u64,
    pub l_exp: u64,
    pub gap: i64,
}

/// `M_i = (i+1)(|b|+|G|)` against `L_exp(i) = |b|+|G|+size2(i+1)+c0`; both
/// sides are computed independently and the identity
/// `M_i - L_exp(i) = i(|b|+|G|) - size2(i+1) - c0` is asserted.
pub fn description_gap(i: u64, payload_size: u64, model: &DescriptionModel) -> DescriptionGap {
    let cell = payload_size + 1;
    let m = (i + 1) * cell;
    let l_exp = cell + size2(i + 1) + model.c0;
    let gap = m as i64 - l_exp as i64;
    let closed_form = (i * cell) as i64 - size2(i + 1) as i64 - model.c0 as i64;
    assert_eq!(gap, closed_form, "description-gap identity must hold");
    DescriptionGap { m, l_exp, gap }
}

/// The four supervisory observer channels plus the hidden-progress and
/// terminal mutual-information quantities.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelCosts {
    /// Exact sum of all trace-state sizes: the quadratic history witness.
    pub history: u128,
    pub counting: u64,
    pub origin: u64,
    pub clocking: u64,
    pub hidden_progress_bits: f64,
    pub mi_floor: f64,
}

/// History observation stores the whole state sequence; counting, origin
/// comparison, and parallel clocking each pay the entropy floor
/// `ceil(log2(K+1))`.
pub fn channel_costs(
    k: u64,
    payload_size: u64,
    c_star: u64,
    k_max: u64,
) -> Result<ChannelCosts, DiagError> {
    if k < 1 {
        return Err(DiagError::KTooSmall("channel costs"));
    }
    let mut history: u128 = 0;
    for j in 0..=k {
        history += u128::from(step_size(k, payload_size, c_star, j));
    }
    let floor = ceil_log2(k + 1);
    Ok(ChannelCosts {
        history,
        counting: floor,
        origin: floor,
        clocking: floor,
        hidden_progress_bits: ((k + 1) as f64).log2(),
        mi_floor: (k_max.max(1) as f64).log2(),
    })
}

impl ChannelCosts {
    pub fn to_json(&self) -> Json {
        Json::obj([
            ("history", Json::Int(self.history as i128)),
            ("counting", Json::from(self.counting)),
            ("origin", Json::from(self.origin)),
            ("clocking", Json::from(self.clocking)),
            (
                "hidden_progress_bits",
                Json::from(self.hidden_progress_bits),
            ),
            ("mi_floor", Json::from(self.mi_floor)),
        ])
    }
}

/// `(l0, linf, l1) = (1, |b|, i|b|)` on the wrapper stack at step `i >= 1`,
/// with the three method tags.
pub fn norm_triple(i: u64, payload_size: u64) -> Result<(u64, u64, u64), DiagError> {
    if i < 1 {
        return Err(DiagError::EmptyStack);
    }
    Ok((1, payload_size, i * payload_size))
}

pub const NORM_METHOD_TAGS: [(&str, &str); 3] =
    [("dp", "l0"), ("coupled", "linf"), ("direct", "l1")];

// ---------------------------------------------------------------------------
// The full diagnostics report
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq)]
pub struct DiagnosticsReport {
    pub k: u64,
    pub payload_size: u64,
    pub wrapper_symbol_size: u64,
    pub cell_weight: u64,
    pub base_overhead: u64,
    pub con: BigRational,
    pub con_total: BigRational,
    pub res: u64,
    pub con_over_res: Option<BigRational>,
    /// The quadratic invariant in the closed asymptotic form
    /// `(k+1)(k+2)|b| / (2(k+1)^2)`, which tends to `|b|/2`.
    pub con_over_res_squared: Option<BigRational>,
    pub h_proof: Vec<BigRational>,
    pub h_gauge: Vec<f64>,
    pub eta: Option<f64>,
    pub norms: Vec<(u64, u64, u64)>,
    pub description_gaps: Vec<i64>,
    pub hidden_progress_bits: f64,
    pub channel: Option<ChannelCosts>,
}

/// Fills every closed-form field. `k = 0` is allowed: the ratio and
/// logarithmic fields that would divide by `Res(0) = 0` or `ln 1 = 0` are
/// absent rather than fabricated.
pub fn diagnose(k: u64, payload_size: u64, c_star: u64) -> Result<DiagnosticsReport, DiagError> {
    if c_star < 2 {
        return Err(DiagError::BaseOverheadTooSmall);
    }
    let cell_weight = payload_size + 1;
    let con = confessed_burden(k, payload_size);
    let con_total = confessed_burden_total(k, cell_weight);
    let (con_over_res, con_over_res_squared, eta, channel) = if k >= 1 {
        (
            Some(&con / ratio(big(k), BigInt::one())),
            Some(ratio(
                big(k + 1) * big(k + 2) * big(payload_size),
                big(2) * big(k + 1) * big(k + 1),
            )),
            Some(inefficiency(k, cell_weight)?.eta),
            Some(channel_costs(k, payload_size, c_star, k)?),
        )
    } else {
        (None, None, None, None)
    };
    let h_proof: Vec<BigRational> = (0..=k)
        .map(|i| proof_entropy(k, payload_size, c_star, i))
        .collect();
    let h_gauge: Vec<f64> = (0..=k).map(gauge_entropy).collect();
    let norms: Vec<(u64, u64, u64)> = (1..=k)
        .map(|i| norm_triple(i, payload_size).expect("i >= 1"))
        .collect();
    let model = DescriptionModel::default();
    let description_gaps: Vec<i64> = (0..=k)
        .map(|i| description_gap(i, payload_size, &model).gap)
        .collect();
    Ok(DiagnosticsReport {
        k,
        payload_size,
        wrapper_symbol_size: 1,
        cell_weight,
        base_overhead: c_star,
        con,
        con_total,
        res: k,
        con_over_res,
        con_over_res_squared,
        h_proof,
        h_gauge,
        eta,
        norms,
        description_gaps,
        hidden_progress_bits: ((k + 1) as f64).log2(),
        channel,
    })
}

/// Default base overhead for base term `a`: one F node, `|a|`, `|b|`, and
/// one Z node; with `a = Z` this is `|b| + 3`.
pub fn default_base_overhead(base_size: u64, payload_size: u64) -> u64 {
    2 + base_size + payload_size
}

impl DiagnosticsReport {
    pub fn to_json(&self) -> Json {
        let rational = |r: &BigRational| Json::from(rational_string(r));
        let opt_rational = |r: &Option<BigRational>| r.as_ref().map(rational).unwrap_or(Json::Null);
        let mut obj = Json::obj([
            ("k", Json::from(self.k)),
            ("payload_size", Json::from(self.payload_size)),
            ("wrapper_symbol_size", Json::from(self.wrapper_symbol_size)),
            ("cell_weight", Json::from(self.cell_weight)),
            ("base_overhead", Json::from(self.base_overhead)),
            ("con", rational(&self.con)),
            ("con_total", rational(&self.con_total)),
            ("res", Json::from(self.res)),
            ("con_over_res", opt_rational(&self.con_over_res)),
            (
                "con_over_res_squared",
                opt_rational(&self.con_over_res_squared),
            ),
            (
                "h_proof_curve",
                Json::arr(self.h_proof.iter().map(rational)),
            ),
            (
                "h_gauge_curve",
                Json::arr(self.h_gauge.iter().map(|&g| Json::from(g))),
            ),
            (
                "norm_triples",
                Json::arr(self.norms.iter().map(|&(l0, linf, l1)| {
                    Json::arr([Json::from(l0), Json::from(linf), Json::from(l1)])
                })),
            ),
            (
                "norm_method_tags",
                Json::Obj(
                    NORM_METHOD_TAGS
                        .iter()
                        .map(|&(k, v)| (k.to_string(), Json::from(v)))
                        .collect(),
                ),
            ),
            (
                "description_gap_curve",
                Json::arr(self.description_gaps.iter().map(|&g| Json::Int(g as i128))),
            ),
            (
                "hidden_progress_bits",
                Json::from(self.hidden_progress_bits),
            ),
        ]);
        obj.insert("eta", self.eta.map(Json::from).unwrap_or(Json::Null));
        obj.insert(
            "channel_costs",
            self.channel
                .as_ref()
                .map(|c| c.to_json())
                .unwrap_or(Json::Null),
        );
        obj
    }
}

// ---------------------------------------------------------------------------
// Seed-carrier factorization
// ---------------------------------------------------------------------------

/// Verdict of the multiplicity-insensitivity check: a factoring observable
/// induces a seed map; a non-factoring one is witnessed by a seed and two
/// multiplicities it distinguishes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Classification {
    Factors { induced: Vec<(String, i64)> },
    DoesNotFactor { seed: String, i: u64, j: u64 },
}

impl Classification {
    pub fn to_json(&self) -> Json {
        match self {
            Classification::Factors { induced } => Json::obj([
                ("factors", Json::from(true)),
                (
                    "induced_seed_map",
                    Json::arr(induced.iter().map(|(seed, value)| {
                        Json::obj([
                            ("seed", Json::from(seed.as_str())),
                            ("value", Json::Int(*value as i128)),
                        ])
                    })),
                ),
            ]),
            Classification::DoesNotFactor { seed, i, j } => Json::obj([
                ("factors", Json::from(false)),
                (
                    "witness",
                    Json::obj([
                        ("seed", Json::from(seed.as_str())),
                        ("i", Json::from(*i)),
                        ("j", Json::from(*j)),
                    ]),
                ),
            ]),
        }
    }
}

/// An observable on diagonal payload tuples factors through the
/// seed-collapse maps exactly when it is multiplicity-insensitive; the
/// check runs the evaluator over every seed and every multiplicity pair in
/// the sample.
pub fn classify_observable(
    evaluator: &dyn Fn(&Term, u64) -> i64,
    seeds: &[Term],
    max_multiplicity: u64,
) -> Result<Classification, DiagError> {
    if seeds.is_empty() || max_multiplicity < 2 {
        return Err(DiagError::BadObservableSample);
    }
    for seed in seeds {
        let base = evaluator(seed, 1);
        for i in 0..max_multiplicity {
            let value = evaluator(seed, i + 1);
            if value != base {
                return Ok(Classification::DoesNotFactor {
                    seed: seed.to_string(),
                    i: 0,
                    j: i,
                });
            }
        }
    }
    Ok(Classification::Factors {
        induced: seeds
            .iter()
            .map(|s| (s.to_string(), evaluator(s, 1)))
            .collect(),
    })
}

/// Exact consecutive difference of the proof-entropy curve:
/// `|b|(k + c*) / (D_i * D_{i+1})`.
pub fn proof_entropy_difference(k: u64, payload_size: u64, c_star: u64, i: u64) -> BigRational {
    ratio(
        big(payload_size) * big(k + c_star),
        big(step_size(k, payload_size, c_star, i)) * big(step_size(k, payload_size, c_star, i + 1)),
    )
}

/// The exact distance `|Con/(k+1)^2 - |b|/2| = |b| / (2(k+1))`, used by the
/// dominance checks; the bound `<= 3|b|/(2k)` holds for every `k >= 1`.
pub fn quadratic_invariant_distance(k: u64, payload_size: u64) -> BigRational {
    let ratio_sq = ratio(
        big(k + 1) * big(k + 2) * big(payload_size),
        big(2) * big(k + 1) * big(k + 1),
    );
    let half_b = ratio(big(payload_size), big(2));
    (ratio_sq - half_b).abs()
}
