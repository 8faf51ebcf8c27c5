//! Dependency-pair extraction, the four confession-route rank functions,
//! the subterm base order, and Arts-Giesl license cost accounting.
//!
//! The four routes are deliberately implemented as independent code paths;
//! their agreement on the primitive fragment is a checked property, not a
//! shared function. Off the fragment only the leftmost-innermost active
//! site is fixed; the routes are not asserted to agree there.

use crate::json::Json;
use crate::rewrite;
use crate::term::{Symbol, Term};
use crate::trs::{Rule, Trs};
use std::collections::BTreeSet;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ConfessError {
    #[error("base order failed on pair {0}; no license applies")]
    BaseOrderFailed(String),
}

/// Marked dependency pairs over fresh `#`-suffixed symbols, plus the
/// head-connectability graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DependencyPairProblem {
    pub pairs: Vec<Rule>,
    pub base: Trs,
    pub edges: Vec<(usize, usize)>,
}

fn mark(t: &Term) -> Term {
    let sym = t.head().expect("marked terms are applications");
    let marked = Symbol::new(&format!("{}#", sym.name()), sym.arity());
    Term::app(marked, t.args().to_vec()).expect("same arity")
}

/// One marked pair per defined-symbol occurrence on a right-hand side;
/// edges by head-symbol connectability, the conservative over-approximation.
pub fn extract_dependency_pairs(trs: &Trs) -> DependencyPairProblem {
    let defined: BTreeSet<String> = trs
        .rules
        .iter()
        .filter_map(|r| r.lhs.head().map(|h| h.name().to_string()))
        .collect();
    let mut pairs = Vec::new();
    for rule in &trs.rules {
        collect_pairs(&rule.lhs, &rule.rhs, &defined, &mut pairs);
    }
    let pairs: Vec<Rule> = pairs
        .into_iter()
        .enumerate()
        .map(|(i, (lhs, rhs))| Rule {
            label: format!("p{}", i),
            lhs,
            rhs,
        })
        .collect();
    let mut edges = Vec::new();
    for (i, p) in pairs.iter().enumerate() {
        for (j, q) in pairs.iter().enumerate() {
            if p.rhs.head() == q.lhs.head() {
                edges.push((i, j));
            }
        }
    }
    DependencyPairProblem {
        pairs,
        base: trs.clone(),
        edges,
    }
}

fn collect_pairs(lhs: &Term, sub: &Term, defined: &BTreeSet<String>, out: &mut Vec<(Term, Term)>) {
    if let Some(head) = sub.head() {
        if defined.contains(head.name()) {
            out.push((mark(lhs), mark(sub)));
        }
    }
    for arg in sub.args() {
        collect_pairs(lhs, arg, defined, out);
    }
}

impl DependencyPairProblem {
    pub fn to_json(&self) -> Json {
        Json::obj([
            (
                "pairs",
                Json::arr(self.pairs.iter().map(|p| {
                    Json::obj([
                        ("label", Json::from(p.label.as_str())),
                        ("lhs", Json::from(p.lhs.to_string())),
                        ("rhs", Json::from(p.rhs.to_string())),
                    ])
                })),
            ),
            (
                "edges",
                Json::arr(
                    self.edges
                        .iter()
                        .map(|&(i, j)| Json::arr([Json::from(i), Json::from(j)])),
                ),
            ),
            ("base_trs", Json::from(self.base.name.as_str())),
        ])
    }
}

// ---------------------------------------------------------------------------
// The four rank routes
// ---------------------------------------------------------------------------

/// The four confession routes. Each carries its own soundness license and
/// its own independently coded rank evaluator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum RankRoute {
    DpProjection,
    CounterProjection,
    Sct,
    ArgumentFiltering,
}

impl RankRoute {
    pub const ALL: [RankRoute; 4] = [
        RankRoute::DpProjection,
        RankRoute::CounterProjection,
        RankRoute::Sct,
        RankRoute::ArgumentFiltering,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            RankRoute::DpProjection => "dp-projection",
            RankRoute::CounterProjection => "counter-projection",
            RankRoute::Sct => "sct",
            RankRoute::ArgumentFiltering => "argument-filtering",
        }
    }

    pub fn parse(text: &str) -> Option<RankRoute> {
        match text {
            "dp-projection" => Some(RankRoute::DpProjection),
            "counter-projection" => Some(RankRoute::CounterProjection),
            "sct" => Some(RankRoute::Sct),
            "argument-filtering" => Some(RankRoute::ArgumentFiltering),
            _ => None,
        }
    }
}

/// Rank of a ground term under the chosen route. All four return the
/// counter depth of the leftmost-innermost active `F` site and 0 on
/// `F`-free terms; equality across routes is a checked property.
pub fn rank_of(route: RankRoute, t: &Term) -> u64 {
    match route {
        RankRoute::DpProjection => dp_projection_rank(t),
        RankRoute::CounterProjection => counter_projection_rank(t),
        RankRoute::Sct => sct_rank(t),
        RankRoute::ArgumentFiltering => argument_filtering_rank(t),
    }
}

/// Canonical DP projection: recursive descent to the active site, then a
/// recursive height count of its third argument.
fn dp_projection_rank(t: &Term) -> u64 {
    fn height(t: &Term) -> u64 {
        match t.head() {
            Some(sym) if sym.name() == "S" && sym.arity() == 1 => 1 + height(&t.args()[0]),
            _ => 0,
        }
    }
    rewrite::active_f(t)
        .map(|f| height(&f.args()[2]))
        .unwrap_or(0)
}

/// Subterm-criterion reading: an explicit-stack traversal locates the
/// projected argument of the marked site, then an iterative loop measures
/// it.
fn counter_projection_rank(t: &Term) -> u64 {
    // leftmost-innermost F via an explicit post-order stack
    let mut stack: Vec<(&Term, usize)> = vec![(t, 0)];
    let mut active: Option<&Term> = None;
    while let Some((node, next_arg)) = stack.pop() {
        if next_arg < node.args().len() {
            stack.push((node, next_arg + 1));
            stack.push((&node.args()[next_arg], 0));
            continue;
        }
        if active.is_none() {
            if let Some(sym) = node.head() {
                if sym.name() == "F" && sym.arity() == 3 {
                    active = Some(node);
                }
            }
        }
    }
    let mut cur = match active {
        Some(f) => &f.args()[2],
        None => return 0,
    };
    let mut rank = 0;
    while let Some(sym) = cur.head() {
        if sym.name() == "S" && sym.arity() == 1 {
            rank += 1;
            cur = &cur.args()[0];
        } else {
            break;
        }
    }
    rank
}

/// Size-change reading: the level is the length of the descending call
/// chain, measured by running the rewrite engine on the active site and
/// counting step-rule firings.
fn sct_rank(t: &Term) -> u64 {
    let active = match rewrite::active_f(t) {
        Some(f) => f.clone(),
        None => return 0,
    };
    let trs = Trs::recursor();
    // the duplicator terminates on ground terms; the bound is a backstop,
    // not the user-facing normalization fuel
    let fuel = 1_000_000_000u64;
    let mut cur = active;
    let mut level = 0;
    let mut spent = 0;
    loop {
        if spent >= fuel {
            break;
        }
        match rewrite::rewrite_once_owned(&trs, cur) {
            rewrite::StepOutcome::Stepped(next, label, _) => {
                if label == "step" {
                    level += 1;
                }
                cur = next;
                spent += 1;
            }
            rewrite::StepOutcome::Normal(_) => break,
        }
    }
    level
}

/// Argument filtering: `F` filtered to its third argument, `G` collapsed to
/// its second, then the successor height of the filtered term.
fn argument_filtering_rank(t: &Term) -> u64 {
    if !contains_f(t) {
        return 0;
    }
    fn filter(t: &Term) -> Term {
        match t.head() {
            Some(sym) if sym.name() == "F" && sym.arity() == 3 => filter(&t.args()[2]),
            Some(sym) if sym.name() == "G" && sym.arity() == 2 => filter(&t.args()[1]),
            Some(sym) if sym.name() == "S" && sym.arity() == 1 => Term::s(filter(&t.args()[0])),
            Some(sym) => {
                let args = t.args().iter().map(filter).collect();
                Term::app(sym.clone(), args).expect("arity preserved")
            }
            None => t.clone(),
        }
    }
    filter(t).successor_height()
}

fn contains_f(t: &Term) -> bool {
    match t.head() {
        Some(sym) if sym.name() == "F" && sym.arity() == 3 => true,
        _ => t.args().iter().any(contains_f),
    }
}

// ---------------------------------------------------------------------------
// Base order and cost account
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BaseOrderVerdict {
    pub oriented: bool,
    /// 1-based argument position with uniform strict subterm descent.
    pub position: Option<usize>,
    pub failing_pair: Option<String>,
}

impl BaseOrderVerdict {
    pub fn to_json(&self) -> Json {
        let mut obj = Json::obj([("oriented", Json::from(self.oriented))]);
        obj.insert(
            "position",
            self.position.map(Json::from).unwrap_or(Json::Null),
        );
        obj.insert(
            "failing_pair",
            self.failing_pair
                .as_deref()
                .map(Json::from)
                .unwrap_or(Json::Null),
        );
        obj
    }
}

/// Linear base order: strict subterm descent at one argument position,
/// uniform across the pair set. Vacuously oriented on an empty set.
pub fn check_base_order(problem: &DependencyPairProblem) -> BaseOrderVerdict {
    if problem.pairs.is_empty() {
        return BaseOrderVerdict {
            oriented: true,
            position: None,
            failing_pair: None,
        };
    }
    let max_pos = problem
        .pairs
        .iter()
        .map(|p| p.lhs.args().len().min(p.rhs.args().len()))
        .min()
        .unwrap_or(0);
    for pos in 1..=max_pos {
        let all_descend = problem.pairs.iter().all(|p| {
            let lhs_arg = &p.lhs.args()[pos - 1];
            let rhs_arg = &p.rhs.args()[pos - 1];
            lhs_arg.has_strict_subterm(rhs_arg)
        });
        if all_descend {
            return BaseOrderVerdict {
                oriented: true,
                position: Some(pos),
                failing_pair: None,
            };
        }
    }
    // name a pair that no single position orients
    let failing = problem
        .pairs
        .iter()
        .find(|p| {
            (1..=p.lhs.args().len().min(p.rhs.args().len()))
                .all(|pos| !p.lhs.args()[pos - 1].has_strict_subterm(&p.rhs.args()[pos - 1]))
        })
        .or_else(|| problem.pairs.first());
    BaseOrderVerdict {
        oriented: false,
        position: None,
        failing_pair: failing.map(|p| p.label.clone()),
    }
}

/// Proof-length accounting for one soundness-license application: a
/// construction stage quadratic in the rule count, a linear base-order
/// stage, and a residual that scales with the input counter height.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AgCostAccount {
    pub c: u64,
    pub rules: u64,
    pub signature_size: u64,
    pub pair_count: u64,
    pub construction_cost: u64,
    pub base_order_cost: u64,
    pub total_bound: u64,
    pub k: u64,
    pub residual: u64,
    pub certificate_length: u64,
}

impl AgCostAccount {
    pub fn to_json(&self) -> Json {
        Json::obj([
            ("c", Json::from(self.c)),
            ("rules", Json::from(self.rules)),
            ("signature_size", Json::from(self.signature_size)),
            ("pair_count", Json::from(self.pair_count)),
            ("construction_cost", Json::from(self.construction_cost)),
            ("base_order_cost", Json::from(self.base_order_cost)),
            ("total_bound", Json::from(self.total_bound)),
            ("k", Json::from(self.k)),
            ("residual", Json::from(self.residual)),
            ("certificate_length", Json::from(self.certificate_length)),
        ])
    }
}

/// Fills the account with construction constant `C = 1`; refuses when the
/// base order failed, since no license applies then.
pub fn ag_account(trs: &Trs, k: u64) -> Result<AgCostAccount, ConfessError> {
    ag_account_with_c(trs, k, 1)
}

pub fn ag_account_with_c(trs: &Trs, k: u64, c: u64) -> Result<AgCostAccount, ConfessError> {
    let problem = extract_dependency_pairs(trs);
    let verdict = check_base_order(&problem);
    if !verdict.oriented {
        return Err(ConfessError::BaseOrderFailed(
            verdict
                .failing_pair
                .unwrap_or_else(|| "unknown".to_string()),
        ));
    }
    let rules = trs.rules.len() as u64;
    let signature_size = trs.signature.len() as u64;
    let pair_count = problem.pairs.len() as u64;
    let construction_cost = c * rules * rules * signature_size;
    let base_order_cost = pair_count; // linear base order: L_base(n) = n
    let total_bound = construction_cost + base_order_cost;
    Ok(AgCostAccount {
        c,
        rules,
        signature_size,
        pair_count,
        construction_cost,
        base_order_cost,
        total_bound,
        k,
        residual: k,
        certificate_length: total_bound + k,
    })
}

// ---------------------------------------------------------------------------
// Forgetting witnesses
// ---------------------------------------------------------------------------

/// The external soundness license a route runs under.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct License {
    pub name: &'static str,
    /// Opaque proof-theoretic placement; never interpreted.
    pub register_annotation: &'static str,
    /// Opaque ascent-family placement; never interpreted.
    pub taxonomy: &'static str,
}

pub const REGISTER_ANNOTATION: &str = "Pi02/ISigma1; RCA0 descriptor omega^3";

pub const LICENSE_TAXONOMY: &str =
    "reflection family (Feferman-Beklemishev), not diagonal (Lawvere-Yanofsky)";

/// A certified projection: the discarded dimension, the license that
/// ratifies discarding it, and the residual rank that survives.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ForgettingWitness {
    pub route: RankRoute,
    pub dimension: &'static str,
    pub license: License,
    pub discarded_observable: &'static str,
}

impl ForgettingWitness {
    pub fn residual_rank(&self, t: &Term) -> u64 {
        rank_of(self.route, t)
    }

    pub fn to_json(&self) -> Json {
        Json::obj([
            ("route", Json::from(self.route.as_str())),
            ("dimension", Json::from(self.dimension)),
            ("license_name", Json::from(self.license.name)),
            (
                "register_annotation",
                Json::from(self.license.register_annotation),
            ),
            ("license_taxonomy", Json::from(self.license.taxonomy)),
            (
                "discarded_observable",
                Json::from(self.discarded_observable),
            ),
        ])
    }
}

/// Builds the route's witness: four distinct licenses over one shared
/// projection rank.
pub fn build_forgetting_witness(route: RankRoute) -> ForgettingWitness {
    let license = match route {
        RankRoute::DpProjection => "ArtsGiesl2000",
        RankRoute::CounterProjection => "SubtermCriterion",
        RankRoute::Sct => "LeeJonesBenAmram2001",
        RankRoute::ArgumentFiltering => "ArgumentFilteringDP",
    };
    ForgettingWitness {
        route,
        dimension: "pi_y",
        license: License {
            name: license,
            register_annotation: REGISTER_ANNOTATION,
            taxonomy: LICENSE_TAXONOMY,
        },
        discarded_observable: "ell1 wrapper/payload coordinate (i copies of the step argument)",
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rewrite::canonical_trace;

    #[test]
    fn recursor_yields_the_single_self_looping_pair() {
        let problem = extract_dependency_pairs(&Trs::recursor());
        assert_eq!(problem.pairs.len(), 1);
        let pair = &problem.pairs[0];
        assert_eq!(pair.lhs.to_string(), "F#(x,y,S(n))");
        assert_eq!(pair.rhs.to_string(), "F#(x,y,n)");
        assert_eq!(problem.edges, vec![(0, 0)]);
    }

    #[test]
    fn projection_rule_has_no_pairs() {
        let f1 = Symbol::new("f", 1);
        let trs = Trs::new(
            "proj",
            vec![Rule::new(
                "r0",
                Term::app(f1, vec![Term::var("x")]).unwrap(),
                Term::var("x"),
            )
            .unwrap()],
        )
        .unwrap();
        let problem = extract_dependency_pairs(&trs);
        assert!(problem.pairs.is_empty());
    }

    #[test]
    fn duplicated_defined_calls_give_two_pairs_and_four_edges() {
        let f1 = Symbol::new("f", 1);
        let g2 = Symbol::new("g", 2);
        let fx = Term::app(f1, vec![Term::var("x")]).unwrap();
        let trs = Trs::new(
            "dup",
            vec![Rule::new(
                "r0",
                fx.clone(),
                Term::app(g2, vec![fx.clone(), fx.clone()]).unwrap(),
            )
            .unwrap()],
        )
        .unwrap();
        let problem = extract_dependency_pairs(&trs);
        assert_eq!(problem.pairs.len(), 2);
        assert_eq!(problem.edges.len(), 4);
    }

    #[test]
    fn rank_examples_agree_across_routes() {
        let t = Term::f(Term::z(), Term::tower(1), Term::tower(3));
        for route in RankRoute::ALL {
            assert_eq!(rank_of(route, &t), 3, "{:?}", route);
        }
        // terminal record: no active F
        let terminal = Term::g(Term::tower(1), Term::g(Term::tower(1), Term::z()));
        for route in RankRoute::ALL {
            assert_eq!(rank_of(route, &terminal), 0, "{:?}", route);
        }
        // trace step t1 of k=2 with b = S(Z)
        let b = Term::tower(1);
        let t1 = Term::g(b.clone(), Term::f(Term::z(), b, Term::tower(1)));
        for route in RankRoute::ALL {
            assert_eq!(rank_of(route, &t1), 1, "{:?}", route);
        }
    }

    #[test]
    fn ranks_decrease_by_one_per_step_firing() {
        let trace = canonical_trace(&Term::z(), &Term::tower(1), 20).unwrap();
        for step in &trace.steps {
            let expected = 20u64.saturating_sub(step.index);
            for route in RankRoute::ALL {
                assert_eq!(rank_of(route, &step.term), expected);
            }
        }
    }

    #[test]
    fn rank_is_gauge_invariant_in_the_payload() {
        // rank depends only on the counter subterm
        for m in [0u64, 1, 5, 9] {
            for b in [Term::z(), Term::tower(2), Term::g(Term::z(), Term::z())] {
                for a in [Term::z(), Term::tower(3)] {
                    let mut t = Term::f(a.clone(), b.clone(), Term::tower(m));
                    for _ in 0..4 {
                        t = Term::g(b.clone(), t);
                    }
                    for route in RankRoute::ALL {
                        assert_eq!(rank_of(route, &t), m);
                    }
                }
            }
        }
    }

    #[test]
    fn base_order_orients_the_recursor_at_position_three() {
        let problem = extract_dependency_pairs(&Trs::recursor());
        let verdict = check_base_order(&problem);
        assert!(verdict.oriented);
        assert_eq!(verdict.position, Some(3));
    }

    #[test]
    fn base_order_is_vacuous_on_empty_pairs() {
        let f1 = Symbol::new("f", 1);
        let trs = Trs::new(
            "proj",
            vec![Rule::new(
                "r0",
                Term::app(f1, vec![Term::var("x")]).unwrap(),
                Term::var("x"),
            )
            .unwrap()],
        )
        .unwrap();
        let verdict = check_base_order(&extract_dependency_pairs(&trs));
        assert!(verdict.oriented);
        assert_eq!(verdict.position, None);
    }

    #[test]
    fn reflexive_pair_is_not_oriented() {
        let f1 = Symbol::new("f", 1);
        let fx = Term::app(f1, vec![Term::var("x")]).unwrap();
        let trs = Trs::new("loop", vec![Rule::new("r0", fx.clone(), fx).unwrap()]).unwrap();
        let verdict = check_base_order(&extract_dependency_pairs(&trs));
        assert!(!verdict.oriented);
        assert_eq!(verdict.failing_pair.as_deref(), Some("p0"));
    }

    #[test]
    fn ag_account_on_the_recursor() {
        let account = ag_account(&Trs::recursor(), 5).unwrap();
        assert_eq!(account.total_bound, 17); // 1 * 2^2 * 4 + 1
        assert_eq!(account.certificate_length, 22);

        let account0 = ag_account(&Trs::recursor(), 0).unwrap();
        assert_eq!(account0.certificate_length, 17);

        // L_AG is independent of K
        let account500 = ag_account(&Trs::recursor(), 500).unwrap();
        assert_eq!(account0.total_bound, account500.total_bound);
    }

    #[test]
    fn ag_account_refuses_unoriented_problems() {
        let f1 = Symbol::new("f", 1);
        let fx = Term::app(f1, vec![Term::var("x")]).unwrap();
        let trs = Trs::new("loop", vec![Rule::new("r0", fx.clone(), fx).unwrap()]).unwrap();
        assert!(matches!(
            ag_account(&trs, 3),
            Err(ConfessError::BaseOrderFailed(_))
        ));
    }

    #[test]
    fn forgetting_witnesses_carry_distinct_licenses() {
        let witnesses: Vec<_> = RankRoute::ALL
            .iter()
            .map(|&r| build_forgetting_witness(r))
            .collect();
        let names: BTreeSet<_> = witnesses.iter().map(|w| w.license.name).collect();
        assert_eq!(names.len(), 4);
        assert_eq!(
            build_forgetting_witness(RankRoute::DpProjection)
                .license
                .name,
            "ArtsGiesl2000"
        );
        assert_eq!(
            build_forgetting_witness(RankRoute::CounterProjection)
                .license
                .name,
            "SubtermCriterion"
        );
        assert_eq!(
            build_forgetting_witness(RankRoute::Sct).license.name,
            "LeeJonesBenAmram2001"
        );
        assert!(witnesses.iter().all(|w| w.dimension == "pi_y"));
        // shared projection rank despite distinct licenses
        let t = Term::f(Term::z(), Term::tower(2), Term::tower(4));
        let ranks: BTreeSet<u64> = witnesses.iter().map(|w| w.residual_rank(&t)).collect();
        assert_eq!(ranks.len(), 1);
    }

    #[test]
    fn license_overhead_is_constant_in_k() {
        for k in [0u64, 5, 50, 500] {
            let account = ag_account(&Trs::recursor(), k).unwrap();
            assert_eq!(account.certificate_length - account.residual, 17);
        }
    }
}
