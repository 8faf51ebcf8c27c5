//! One-step and multi-step leftmost-innermost rewriting, the canonical
//! trace of the duplicator, and the trace-law verifier.

use crate::term::{schema, Symbol, Term};
use crate::trs::{match_term, Trs};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TraceError {
    #[error("{which} is not ground")]
    NotGround { which: String },
    #[error("{which} is reducible; the trace law needs normal-form inputs")]
    Reducible { which: String },
    #[error("engine trace diverges from the closed form at index {index}: {detail}")]
    EngineMismatch { index: u64, detail: String },
}

/// Finds the leftmost-innermost redex: arguments are searched left to right
/// before the root, and rules are tried in catalog order at each position.
fn find_redex(
    trs: &Trs,
    t: &Term,
    pos: &mut Vec<usize>,
) -> Option<(usize, crate::term::Substitution)> {
    for (i, arg) in t.args().iter().enumerate() {
        pos.push(i);
        if let Some(found) = find_redex(trs, arg, pos) {
            return Some(found);
        }
        pos.pop();
    }
    for (idx, rule) in trs.rules.iter().enumerate() {
        if let Some(sigma) = match_term(&rule.lhs, t) {
            return Some((idx, sigma));
        }
    }
    None
}

fn rebuild(t: &Term, pos: &[usize], replacement: Term) -> Term {
    match pos.split_first() {
        None => replacement,
        Some((&i, rest)) => {
            let mut args: Vec<Term> = t.args().to_vec();
            args[i] = rebuild(&args[i], rest, replacement);
            Term::app(t.head().expect("position in application").clone(), args)
                .expect("arity preserved")
        }
    }
}

/// Reduces the unique leftmost-innermost redex, or returns `None` on a
/// normal form.
pub fn rewrite_once(trs: &Trs, t: &Term) -> Option<(Term, String, Vec<usize>)> {
    let mut pos = Vec::new();
    let (rule_idx, sigma) = find_redex(trs, t, &mut pos)?;
    let rule = &trs.rules[rule_idx];
    let contractum = sigma.apply(&rule.rhs);
    Some((rebuild(t, &pos, contractum), rule.label.clone(), pos))
}

/// Result of one owned rewrite attempt: either the reduct with the fired
/// rule and position, or the untouched normal form handed back.
#[derive(Debug, Clone)]
pub enum StepOutcome {
    Stepped(Term, String, Vec<usize>),
    Normal(Term),
}

/// Same reduction relation as [`rewrite_once`], but consumes the term so the
/// spine can be updated in place when the handle is unique. Long traces step
/// in constant allocations instead of copying the wrapper stack every step.
pub fn rewrite_once_owned(trs: &Trs, mut t: Term) -> StepOutcome {
    let mut pos = Vec::new();
    match find_redex(trs, &t, &mut pos) {
        None => StepOutcome::Normal(t),
        Some((rule_idx, sigma)) => {
            let rule = &trs.rules[rule_idx];
            let contractum = sigma.apply(&rule.rhs);
            t.replace_at_owned(&pos, contractum);
            StepOutcome::Stepped(t, rule.label.clone(), pos)
        }
    }
}

pub fn is_normal_form(trs: &Trs, t: &Term) -> bool {
    let mut pos = Vec::new();
    find_redex(trs, t, &mut pos).is_none()
}

/// Normalization fuel; `RECURSORLAB_FUEL` overrides the default of 10^6.
pub fn default_fuel() -> u64 {
    std::env::var("RECURSORLAB_FUEL")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(1_000_000)
}

/// Repeated leftmost-innermost steps until a normal form or fuel runs out.
/// The exhausted flag distinguishes a cap from a genuine normal form.
pub fn normalize(trs: &Trs, t: &Term, fuel: u64) -> (Term, u64, bool) {
    let mut cur = t.clone();
    let mut firings = 0;
    while firings < fuel {
        match rewrite_once_owned(trs, cur) {
            StepOutcome::Stepped(next, _, _) => {
                cur = next;
                firings += 1;
            }
            StepOutcome::Normal(nf) => return (nf, firings, false),
        }
    }
    let exhausted = !is_normal_form(trs, &cur);
    (cur, firings, exhausted)
}

/// One step of the canonical trace with its statistics.
#[derive(Debug, Clone)]
pub struct TraceStep {
    pub index: u64,
    pub term: Term,
    /// Successor height of the active `F`'s third argument; absent when no
    /// active `F` remains.
    pub ctr: Option<u64>,
    /// Positional payload count: wrapper first-argument slots holding the
    /// payload plus the active `F`'s second argument.
    pub pay: u64,
    /// Total number of `G` occurrences.
    pub g_frames: u64,
    pub fired_rule: String,
}

#[derive(Debug, Clone)]
pub struct CanonicalTrace {
    pub base: Term,
    pub payload: Term,
    pub k: u64,
    pub steps: Vec<TraceStep>,
    pub firings: u64,
}

/// The leftmost-innermost `F` occurrence, the unique live site on the
/// canonical trace.
pub fn active_f(t: &Term) -> Option<&Term> {
    for arg in t.args() {
        if let Some(found) = active_f(arg) {
            return Some(found);
        }
    }
    match t.head() {
        Some(sym) if sym.name() == "F" && sym.arity() == 3 => Some(t),
        _ => None,
    }
}

pub fn counter_of(t: &Term) -> Option<u64> {
    active_f(t).map(|f| f.args()[2].successor_height())
}

/// Positional payload occupancy: the wrapper stack's first-argument slots
/// plus the active `F`'s second argument. Pattern matches inside the base
/// term or deep inside the payload do not count; payload slots are
/// positions, not patterns.
pub fn payload_slots(t: &Term, payload: &Term) -> u64 {
    let mut count = 0;
    let mut cur = t;
    while let Some(sym) = cur.head() {
        if sym.name() == "G" && sym.arity() == 2 {
            if &cur.args()[0] == payload {
                count += 1;
            }
            cur = &cur.args()[1];
        } else {
            break;
        }
    }
    if let Some(f) = active_f(t) {
        if &f.args()[1] == payload {
            count += 1;
        }
    }
    count
}

pub fn g_frames(t: &Term) -> u64 {
    t.count_symbol(&schema::g())
}

/// `G^i(b, F(a, b, S^(k-i)(Z)))` for `i <= k`, and the terminal record
/// `G^k(b, a)` at `i = k+1`.
pub fn closed_form_step(a: &Term, b: &Term, k: u64, i: u64) -> Term {
    let depth = if i <= k { i } else { k };
    let mut t = if i <= k {
        Term::f(a.clone(), b.clone(), Term::tower(k - i))
    } else {
        a.clone()
    };
    for _ in 0..depth {
        t = Term::g(b.clone(), t);
    }
    t
}

fn check_inputs(a: &Term, b: &Term, trs: &Trs) -> Result<(), TraceError> {
    for (which, t) in [("base", a), ("payload", b)] {
        if !t.is_ground() {
            return Err(TraceError::NotGround {
                which: which.to_string(),
            });
        }
        if !is_normal_form(trs, t) {
            return Err(TraceError::Reducible {
                which: which.to_string(),
            });
        }
    }
    Ok(())
}

/// Walks `t` against `G^i(b, F(a, b, towers[k-i]))` (or the terminal record)
/// without allocating; shared-node checks make the payload comparisons
/// constant-time on engine-produced traces.
fn check_shape(
    t: &Term,
    a: &Term,
    b: &Term,
    k: u64,
    i: u64,
    towers: &[Term],
) -> Result<(), String> {
    let spine_len = if i <= k { i } else { k };
    let mut cur = t;
    for d in 0..spine_len {
        match cur.head() {
            Some(sym) if sym.name() == "G" && sym.arity() == 2 => {
                if &cur.args()[0] != b {
                    return Err(format!("wrapper slot {} does not hold the payload", d));
                }
                cur = &cur.args()[1];
            }
            _ => return Err(format!("expected G at wrapper depth {}", d)),
        }
    }
    if i <= k {
        match cur.head() {
            Some(sym) if sym.name() == "F" && sym.arity() == 3 => {
                if &cur.args()[0] != a {
                    return Err("active F first argument differs from base".to_string());
                }
                if &cur.args()[1] != b {
                    return Err("active F second argument differs from payload".to_string());
                }
                let expected = &towers[(k - i) as usize];
                if &cur.args()[2] != expected {
                    return Err(format!("counter is not S^{}(Z)", k - i));
                }
            }
            _ => return Err("expected the active F under the wrapper stack".to_string()),
        }
    } else if cur != a {
        return Err("terminal record does not end in the base term".to_string());
    }
    Ok(())
}

/// One-pass direct recount of (#G, payload slots, counter height); the
/// public single-statistic functions stay the reference implementations and
/// anchor this walk at the trace endpoints.
fn index_stats(t: &Term, payload: &Term) -> (u64, u64, Option<u64>) {
    fn walk<'a>(t: &'a Term, g: &mut u64, active: &mut Option<&'a Term>) {
        for arg in t.args() {
            walk(arg, g, active);
        }
        if let Some(sym) = t.head() {
            if sym.name() == "G" && sym.arity() == 2 {
                *g += 1;
            } else if active.is_none() && sym.name() == "F" && sym.arity() == 3 {
                *active = Some(t);
            }
        }
    }
    let mut g = 0;
    let mut active = None;
    walk(t, &mut g, &mut active);
    let mut pay = 0;
    let mut cur = t;
    while let Some(sym) = cur.head() {
        if sym.name() == "G" && sym.arity() == 2 {
            if &cur.args()[0] == payload {
                pay += 1;
            }
            cur = &cur.args()[1];
        } else {
            break;
        }
    }
    if let Some(f) = active {
        if &f.args()[1] == payload {
            pay += 1;
        }
    }
    (g, pay, active.map(|f| f.args()[2].successor_height()))
}

fn build_towers(k: u64) -> Vec<Term> {
    let mut towers = Vec::with_capacity(k as usize + 1);
    towers.push(Term::z());
    for j in 1..=k {
        let prev = towers[(j - 1) as usize].clone();
        towers.push(Term::s(prev));
    }
    towers
}

/// The full rewrite sequence from `F(a, b, S^k(Z))` with per-step
/// statistics. The engine-stepped trace is verified against the closed form
/// at every index; a mismatch is an error, not a silent report.
pub fn canonical_trace(a: &Term, b: &Term, k: u64) -> Result<CanonicalTrace, TraceError> {
    let trs = Trs::recursor();
    check_inputs(a, b, &trs)?;
    let towers = build_towers(k);
    let mut cur = Term::f(a.clone(), b.clone(), towers[k as usize].clone());
    let mut fired = "initial".to_string();
    let mut steps = Vec::with_capacity(k as usize + 2);
    let mut firings = 0;
    for i in 0..=(k + 1) {
        check_shape(&cur, a, b, k, i, &towers)
            .map_err(|detail| TraceError::EngineMismatch { index: i, detail })?;
        steps.push(TraceStep {
            index: i,
            term: cur.clone(),
            ctr: counter_of(&cur),
            pay: payload_slots(&cur, b),
            g_frames: g_frames(&cur),
            fired_rule: fired.clone(),
        });
        match rewrite_once(&trs, &cur) {
            Some((next, label, _)) => {
                cur = next;
                fired = label;
                firings += 1;
            }
            None => break,
        }
    }
    if steps.len() as u64 != k + 2 || firings != k + 1 {
        return Err(TraceError::EngineMismatch {
            index: steps.len() as u64,
            detail: format!(
                "expected {} steps and {} firings, got {} and {}",
                k + 2,
                k + 1,
                steps.len(),
                firings
            ),
        });
    }
    Ok(CanonicalTrace {
        base: a.clone(),
        payload: b.clone(),
        k,
        steps,
        firings,
    })
}

/// Outcome of a streaming trace-law check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceLawOutcome {
    pub k: u64,
    pub firings: u64,
    pub terminal_g: u64,
}

/// Streams the engine trace of `F(a, b, S^k(Z))` with O(k) memory, checking
/// at every index: the closed-form shape, the payload/counter statistics,
/// and the offset law `pay - g_frames = 1` on nonterminal steps. Built for
/// long sweeps; `canonical_trace` materializes the steps instead.
///
/// Once a step is verified against the closed form, its unique
/// leftmost-innermost redex is the active `F` at the bottom of the wrapper
/// stack: the rules' left-hand heads are all `F`, and the base, payload and
/// counter subterms are verified normal forms. The stepper fires that redex
/// directly and cross-checks the general search engine on a sample of
/// indices, so a full sweep stays inside the time budget without walking
/// every payload copy at every step.
pub fn verify_trace_law(a: &Term, b: &Term, k: u64) -> Result<TraceLawOutcome, TraceError> {
    let trs = Trs::recursor();
    check_inputs(a, b, &trs)?;
    debug_assert!(trs
        .rules
        .iter()
        .all(|r| r.lhs.head().map(|h| h.name() == "F").unwrap_or(false)));
    let g_in_a = a.count_symbol(&schema::g());
    let g_in_b = b.count_symbol(&schema::g());
    let towers = build_towers(k);
    if !is_normal_form(&trs, &towers[k as usize]) {
        return Err(TraceError::Reducible {
            which: "counter".to_string(),
        });
    }
    let mut cur = Term::f(a.clone(), b.clone(), towers[k as usize].clone());
    let mut firings = 0;
    let mismatch = |i: u64, detail: String| TraceError::EngineMismatch { index: i, detail };

    // Fires the steps at indices `from..to` through a mutable cursor held
    // down the wrapper spine. The borrow checker pins everything above the
    // cursor; each wrapper cell is verified as the cursor passes or creates
    // it, and each redex instance is verified against the rule's left-hand
    // side before its contractum is written.
    let run_segment = |cur: &mut Term, from: u64, to: u64| -> Result<(), TraceError> {
        let mut slot: &mut Term = cur;
        for d in 0..from {
            slot = slot.wrapper_cell_mut(b).ok_or_else(|| {
                mismatch(
                    from,
                    format!("wrapper cell {} diverges from the closed form", d),
                )
            })?;
        }
        for j in from..to {
            let m = k - j;
            match slot.head() {
                Some(sym) if sym.name() == "F" && sym.arity() == 3 => {
                    let args = slot.args();
                    if &args[0] != a || &args[1] != b || args[2] != towers[m as usize] {
                        return Err(mismatch(j, "active F arguments diverge".to_string()));
                    }
                }
                _ => return Err(mismatch(j, "expected the active F redex".to_string())),
            }
            if m > 0 {
                *slot = Term::g(
                    b.clone(),
                    Term::f(a.clone(), b.clone(), towers[(m - 1) as usize].clone()),
                );
                slot = slot
                    .wrapper_cell_mut(b)
                    .expect("freshly written wrapper cell");
            } else {
                *slot = a.clone();
            }
        }
        Ok(())
    };

    // Full closed-form comparison, direct statistic recounts, and a general
    // search-engine cross-check at index `i`.
    let full_checks = |cur: &Term, i: u64| -> Result<(), TraceError> {
        check_shape(cur, a, b, k, i, &towers).map_err(|d| mismatch(i, d))?;
        let stats = index_stats(cur, b);
        if i == 0 || i == k {
            // anchor the fused recount against the public statistics
            if stats != (g_frames(cur), payload_slots(cur, b), counter_of(cur)) {
                return Err(mismatch(i, "fused statistics walk diverged".to_string()));
            }
        }
        let (g_direct, pay, ctr) = stats;
        if pay != i + 1 {
            return Err(mismatch(i, format!("pay = {}, expected {}", pay, i + 1)));
        }
        if g_direct != i + g_in_a + (i + 1) * g_in_b {
            return Err(mismatch(i, format!("#G = {} at index {}", g_direct, i)));
        }
        if g_in_a == 0 && g_in_b == 0 && pay != g_direct + 1 {
            return Err(mismatch(i, "offset law pay - #G = 1 violated".to_string()));
        }
        if ctr != Some(k - i) {
            return Err(mismatch(i, "counter height diverged".to_string()));
        }
        let m = k - i;
        let expected_label = if m > 0 { "step" } else { "base" };
        let spine = vec![1usize; i as usize];
        let contractum = if m > 0 {
            Term::g(
                b.clone(),
                Term::f(a.clone(), b.clone(), towers[(m - 1) as usize].clone()),
            )
        } else {
            a.clone()
        };
        match rewrite_once(&trs, cur) {
            Some((reduct, label, pos)) => {
                if label != expected_label || pos != spine {
                    return Err(mismatch(i, "search engine fired a different redex".into()));
                }
                let mut expected = cur.clone();
                expected.replace_at_owned(&spine, contractum);
                if reduct != expected {
                    return Err(mismatch(i, "search engine reduct differs".into()));
                }
            }
            None => return Err(mismatch(i, "search engine found no redex".into())),
        }
        Ok(())
    };

    let interval = (k / 3).max(97);
    let mut i = 0u64;
    while i < k {
        full_checks(&cur, i)?;
        let seg_end = (i + interval).min(k);
        run_segment(&mut cur, i, seg_end)?;
        firings += seg_end - i;
        i = seg_end;
    }
    full_checks(&cur, k)?;
    run_segment(&mut cur, k, k + 1)?;
    firings += 1;

    check_shape(&cur, a, b, k, k + 1, &towers).map_err(|d| mismatch(k + 1, d))?;
    if rewrite_once(&trs, &cur).is_some() {
        return Err(mismatch(k + 1, "terminal record is reducible".to_string()));
    }
    let terminal_g = g_frames(&cur);
    if terminal_g != k + g_in_a + k * g_in_b {
        return Err(mismatch(k + 1, format!("terminal #G = {}", terminal_g)));
    }
    Ok(TraceLawOutcome {
        k,
        firings,
        terminal_g,
    })
}

/// Reconstructs the previous trace step from a step-rule reduct by removing
/// the innermost wrapper cell and re-wrapping the counter with one `S`. The
/// counter coordinate is uniquely reversible; the wrapper is not.
pub fn rewind_step(t: &Term) -> Option<Term> {
    let g = schema::g();
    match t.head() {
        Some(sym) if *sym == g => {
            let u = &t.args()[0];
            let rest = &t.args()[1];
            match rest.head() {
                Some(inner) if inner.name() == "F" && inner.arity() == 3 => {
                    // innermost wrapper cell: undo G(y, F(x, y, n)) -> F(x, y, S(n))
                    if u == &rest.args()[1] {
                        Some(Term::f(
                            rest.args()[0].clone(),
                            rest.args()[1].clone(),
                            Term::s(rest.args()[2].clone()),
                        ))
                    } else {
                        None
                    }
                }
                _ => Some(Term::g(u.clone(), rewind_step(rest)?)),
            }
        }
        _ => None,
    }
}

/// No rule of the duplicator has `G` as its left-hand head, so wrapper
/// frames are never consumed: `#G` is non-decreasing along any sequence.
pub fn wrapper_is_irreversible(trs: &Trs) -> bool {
    let g: Symbol = schema::g();
    trs.rules
        .iter()
        .all(|r| r.lhs.head().map(|h| *h != g).unwrap_or(false))
}
