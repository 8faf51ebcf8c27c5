//! Exhaustive oracle for the record-emission theorem on the minimal
//! positional right-hand-side syntax: a right-hand side containing both a
//! frame occurrence and an active-site occurrence contains at least two
//! occurrences of the generator variable.
//!
//! The generator sort is discrete, so every generator occurrence is the
//! distinguished variable `y`; frames carry one, active sites carry one.

use crate::json::Json;

/// Right-hand-side terms of the minimal positional syntax:
/// the carrier variable `x`, a frame `G(y, rest)`, or an active site
/// `F(x, y, n)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RhsTerm {
    CarrierVar,
    Frame(Box<RhsTerm>),
    Active,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RhsAnalysis {
    pub has_frame: bool,
    pub has_active: bool,
    pub y_count: u64,
    /// The theorem's implication: frame and active together force at least
    /// two generator occurrences.
    pub duplication_forced: bool,
}

pub fn analyze_rhs(r: &RhsTerm) -> RhsAnalysis {
    fn walk(r: &RhsTerm, frames: &mut u64, actives: &mut u64) {
        match r {
            RhsTerm::CarrierVar => {}
            RhsTerm::Frame(rest) => {
                *frames += 1;
                walk(rest, frames, actives);
            }
            RhsTerm::Active => *actives += 1,
        }
    }
    let mut frames = 0;
    let mut actives = 0;
    walk(r, &mut frames, &mut actives);
    let has_frame = frames > 0;
    let has_active = actives > 0;
    let y_count = frames + actives;
    RhsAnalysis {
        has_frame,
        has_active,
        y_count,
        duplication_forced: !(has_frame && has_active) || y_count >= 2,
    }
}

impl RhsAnalysis {
    pub fn to_json(&self) -> Json {
        Json::obj([
            ("has_frame", Json::from(self.has_frame)),
            ("has_active", Json::from(self.has_active)),
            ("y_count", Json::from(self.y_count)),
            ("duplication_forced", Json::from(self.duplication_forced)),
        ])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("depth {requested} exceeds the enumeration cap {cap}")]
pub struct DepthCapExceeded {
    pub requested: u64,
    pub cap: u64,
}

pub const DEPTH_CAP: u64 = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumerationOutcome {
    pub max_depth: u64,
    pub enumerated: u64,
    pub counterexamples: u64,
}

impl EnumerationOutcome {
    pub fn to_json(&self) -> Json {
        Json::obj([
            ("max_depth", Json::from(self.max_depth)),
            ("enumerated", Json::from(self.enumerated)),
            ("counterexamples", Json::from(self.counterexamples)),
        ])
    }
}

fn enumerate_depth(depth: u64) -> Vec<RhsTerm> {
    // depth-1 terms are the two leaves; a frame adds one level
    let mut out = vec![RhsTerm::CarrierVar, RhsTerm::Active];
    if depth > 1 {
        for inner in enumerate_depth(depth - 1) {
            out.push(RhsTerm::Frame(Box::new(inner)));
        }
    }
    out
}

/// Enumerates every right-hand side up to `max_depth` and checks the
/// duplication implication on each; the count of counterexamples is the
/// oracle's verdict and must be zero.
pub fn enumerate_and_verify(max_depth: u64) -> Result<EnumerationOutcome, DepthCapExceeded> {
    if max_depth > DEPTH_CAP {
        return Err(DepthCapExceeded {
            requested: max_depth,
            cap: DEPTH_CAP,
        });
    }
    let terms = enumerate_depth(max_depth.max(1));
    let mut counterexamples = 0;
    for t in &terms {
        let analysis = analyze_rhs(t);
        if !analysis.duplication_forced {
            counterexamples += 1;
        }
        // the positional identity: every frame and every active site
        // carries exactly one generator occurrence
        let (frames, actives) = count_nodes(t);
        assert_eq!(analysis.y_count, frames + actives);
    }
    Ok(EnumerationOutcome {
        max_depth,
        enumerated: terms.len() as u64,
        counterexamples,
    })
}

fn count_nodes(r: &RhsTerm) -> (u64, u64) {
    match r {
        RhsTerm::CarrierVar => (0, 0),
        RhsTerm::Active => (0, 1),
        RhsTerm::Frame(rest) => {
            let (f, a) = count_nodes(rest);
            (f + 1, a)
        }
    }
}
