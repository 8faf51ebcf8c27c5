//! The witness-language hierarchy W0/W1/W2, catalog-relative minimal
//! witness order, and the orientation-boundary predicate.
//!
//! Kappa is explicitly catalog-relative. Two named catalogs ship with the
//! crate: `barrier-confined` reproduces the boundary reading (the twelve
//! direct-measure classes fail, the imported-ordering level is declared
//! out, the confession succeeds at W2), while `full` includes the
//! succeeding W1 constructions and lands at kappa = 1.

use crate::confess::{self, RankRoute};
use crate::json::Json;
use crate::orient::{
    self, measure_spec_from_json, measure_spec_to_json, CertificateKind, FailureCertificate,
    MeasureError, MeasureSpec, OrientationVerdict, PrecedenceSpec, BARRIER_CLASS_NAMES,
};
use crate::trs::Trs;
use std::collections::BTreeMap;

/// The three witness-language levels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Level {
    W0,
    W1,
    W2,
}

impl Level {
    pub fn index(&self) -> u8 {
        match self {
            Level::W0 => 0,
            Level::W1 => 1,
            Level::W2 => 2,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Level::W0 => "W0 direct-whole",
            Level::W1 => "W1 imported-whole",
            Level::W2 => "W2 transformed-call",
        }
    }

    pub fn from_index(i: u8) -> Option<Level> {
        match i {
            0 => Some(Level::W0),
            1 => Some(Level::W1),
            2 => Some(Level::W2),
            _ => None,
        }
    }
}

/// A runnable witness attempt, or a declared catalog citation.
#[derive(Debug, Clone, PartialEq)]
pub enum AttemptSpec {
    Additive(MeasureSpec),
    Transparent(MeasureSpec),
    Affine(MeasureSpec),
    Poly(MeasureSpec),
    Mpo(PrecedenceSpec),
    Confession(RankRoute),
    Declared { note: String },
}

impl AttemptSpec {
    pub fn op_name(&self) -> &'static str {
        match self {
            AttemptSpec::Additive(_) => "additive",
            AttemptSpec::Transparent(_) => "transparent-compositional",
            AttemptSpec::Affine(_) => "affine",
            AttemptSpec::Poly(_) => "poly",
            AttemptSpec::Mpo(_) => "mpo",
            AttemptSpec::Confession(RankRoute::DpProjection) => "dp-projection",
            AttemptSpec::Confession(RankRoute::CounterProjection) => "counter-projection",
            AttemptSpec::Confession(RankRoute::Sct) => "sct",
            AttemptSpec::Confession(RankRoute::ArgumentFiltering) => "argument-filtering",
            AttemptSpec::Declared { .. } => "declared",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CatalogEntry {
    pub level: Level,
    pub name: String,
    pub attempt: AttemptSpec,
    /// Declared outcome for entries whose refuter is a companion citation
    /// rather than a constructive run. Only failure declarations exist.
    pub expected_fail: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CatalogError {
    #[error("catalog is empty")]
    Empty,
    #[error("entry {entry} is unresolvable: {reason}")]
    Unresolvable { entry: String, reason: String },
    #[error("entry {entry}: {source}")]
    Measure { entry: String, source: MeasureError },
    #[error("bad catalog JSON: {0}")]
    BadJson(String),
}

/// Outcome of one catalog attempt.
#[derive(Debug, Clone)]
pub struct AttemptOutcome {
    pub success: bool,
    pub certificate: Option<FailureCertificate>,
    pub evidence: Option<AttemptEvidence>,
}

/// Success evidence: a construction witness or a confession verdict.
#[derive(Debug, Clone)]
pub enum AttemptEvidence {
    Orientation(OrientationVerdict),
    Confession {
        route: RankRoute,
        base_order: confess::BaseOrderVerdict,
    },
}

/// Runs one entry against a system. Declared entries are recorded without
/// running; runnable entries produce a success witness or a failure
/// certificate, constructive when a pump exists.
pub fn run_attempt(trs: &Trs, entry: &CatalogEntry) -> Result<AttemptOutcome, CatalogError> {
    if entry.expected_fail {
        return Ok(AttemptOutcome {
            success: false,
            certificate: Some(FailureCertificate {
                entry_name: entry.name.clone(),
                level: entry.level.index(),
                kind: CertificateKind::Declared,
                pump: None,
                boundary_condition: match &entry.attempt {
                    AttemptSpec::Declared { note } => note.clone(),
                    _ => "declared failure".to_string(),
                },
            }),
            evidence: None,
        });
    }
    let verdict = match &entry.attempt {
        AttemptSpec::Declared { .. } => {
            return Err(CatalogError::Unresolvable {
                entry: entry.name.clone(),
                reason: "declared entries must carry expected_outcome = fails".to_string(),
            })
        }
        AttemptSpec::Additive(m) | AttemptSpec::Transparent(m) | AttemptSpec::Affine(m) => {
            orient::orient_linear(trs, m).map_err(|source| CatalogError::Measure {
                entry: entry.name.clone(),
                source,
            })?
        }
        AttemptSpec::Poly(m) => {
            orient::orient_poly(trs, m).map_err(|source| CatalogError::Measure {
                entry: entry.name.clone(),
                source,
            })?
        }
        AttemptSpec::Mpo(p) => orient::orient_mpo(trs, p),
        AttemptSpec::Confession(route) => {
            let problem = confess::extract_dependency_pairs(trs);
            let base_order = confess::check_base_order(&problem);
            if base_order.oriented {
                return Ok(AttemptOutcome {
                    success: true,
                    certificate: None,
                    evidence: Some(AttemptEvidence::Confession {
                        route: *route,
                        base_order,
                    }),
                });
            }
            return Ok(AttemptOutcome {
                success: false,
                certificate: Some(FailureCertificate {
                    entry_name: entry.name.clone(),
                    level: entry.level.index(),
                    kind: CertificateKind::Declared,
                    pump: None,
                    boundary_condition: format!(
                        "base order not oriented: pair {}",
                        base_order
                            .failing_pair
                            .unwrap_or_else(|| "unknown".to_string())
                    ),
                }),
                evidence: None,
            });
        }
    };
    match verdict {
        OrientationVerdict::Oriented(_) => Ok(AttemptOutcome {
            success: true,
            certificate: None,
            evidence: Some(AttemptEvidence::Orientation(verdict)),
        }),
        OrientationVerdict::NotOriented {
            ref failing_rule,
            ref reason,
            ref counterexample,
        } => Ok(AttemptOutcome {
            success: false,
            certificate: Some(FailureCertificate {
                entry_name: entry.name.clone(),
                level: entry.level.index(),
                kind: if counterexample.is_some() {
                    CertificateKind::ConstructivePump
                } else {
                    CertificateKind::Declared
                },
                pump: counterexample.clone(),
                boundary_condition: format!("rule {}: {}", failing_rule, reason),
            }),
            evidence: None,
        }),
    }
}

/// Minimal witness order, relative to the catalog that was run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Kappa {
    Level(u8),
    UndefinedAboveTop,
}

impl Kappa {
    pub fn as_string(&self) -> String {
        match self {
            Kappa::Level(l) => l.to_string(),
            Kappa::UndefinedAboveTop => "undefined-above-2".to_string(),
        }
    }

    /// The orientation boundary: no adequate witness at the direct
    /// whole-term level.
    pub fn ob(&self) -> bool {
        !matches!(self, Kappa::Level(0))
    }
}

#[derive(Debug, Clone)]
pub struct EntryOutcome {
    pub name: String,
    pub op: String,
    pub success: bool,
    pub certificate: Option<FailureCertificate>,
}

#[derive(Debug, Clone)]
pub struct KappaResult {
    pub kappa: Kappa,
    pub ob: bool,
    pub per_level: BTreeMap<u8, Vec<EntryOutcome>>,
}

/// Runs every entry level-by-level; all entries run even after a success,
/// so the full certificate table is populated. Kappa is the least level
/// containing a succeeded entry.
pub fn compute_kappa(trs: &Trs, catalog: &[CatalogEntry]) -> Result<KappaResult, CatalogError> {
    if catalog.is_empty() {
        return Err(CatalogError::Empty);
    }
    let mut per_level: BTreeMap<u8, Vec<EntryOutcome>> = BTreeMap::new();
    let mut least_success: Option<u8> = None;
    for level in 0..=2u8 {
        for entry in catalog.iter().filter(|e| e.level.index() == level) {
            let outcome = run_attempt(trs, entry)?;
            if outcome.success {
                least_success = Some(least_success.map_or(level, |l| l.min(level)));
            }
            per_level.entry(level).or_default().push(EntryOutcome {
                name: entry.name.clone(),
                op: entry.attempt.op_name().to_string(),
                success: outcome.success,
                certificate: outcome.certificate,
            });
        }
    }
    let kappa = match least_success {
        Some(l) => Kappa::Level(l),
        None => Kappa::UndefinedAboveTop,
    };
    Ok(KappaResult {
        kappa,
        ob: kappa.ob(),
        per_level,
    })
}

impl KappaResult {
    pub fn to_json(&self) -> Json {
        Json::obj([
            ("kappa_star", Json::from(self.kappa.as_string())),
            ("ob", Json::from(self.ob)),
            (
                "per_level",
                Json::Obj(
                    self.per_level
                        .iter()
                        .map(|(level, outcomes)| {
                            (
                                level.to_string(),
                                Json::arr(outcomes.iter().map(|o| {
                                    let mut obj = Json::obj([
                                        ("entry", Json::from(o.name.as_str())),
                                        ("op", Json::from(o.op.as_str())),
                                        (
                                            "outcome",
                                            Json::from(if o.success {
                                                "succeeded"
                                            } else {
                                                "failed"
                                            }),
                                        ),
                                    ]);
                                    if let Some(cert) = &o.certificate {
                                        obj.insert("certificate", cert.to_json());
                                    }
                                    obj
                                })),
                            )
                        })
                        .collect(),
                ),
            ),
        ])
    }
}

// ---------------------------------------------------------------------------
// Named catalogs
// ---------------------------------------------------------------------------

fn w0_entries() -> Vec<CatalogEntry> {
    let recursor = Trs::recursor();
    BARRIER_CLASS_NAMES
        .iter()
        .map(|&name| {
            let attempt = match name {
                "additive" => AttemptSpec::Additive(MeasureSpec::uniform_additive(&recursor)),
                "transparent-compositional" => {
                    AttemptSpec::Transparent(MeasureSpec::uniform_additive(&recursor))
                }
                "affine" => AttemptSpec::Affine(MeasureSpec::uniform_affine(&recursor)),
                _ => AttemptSpec::Declared {
                    note: "companion barrier package".to_string(),
                },
            };
            let expected_fail = matches!(attempt, AttemptSpec::Declared { .. });
            CatalogEntry {
                level: Level::W0,
                name: name.to_string(),
                attempt,
                expected_fail,
            }
        })
        .collect()
}

/// The barrier-confined catalog: the twelve W0 classes, a declared-out W1
/// level (KBO, linear polynomial, and the MPO exclusion marker), and the
/// dependency-pair confession at W2. Reproduces kappa = 2.
pub fn barrier_confined_catalog() -> Vec<CatalogEntry> {
    let mut entries = w0_entries();
    for name in ["kbo", "linear-poly", "mpo-excluded"] {
        entries.push(CatalogEntry {
            level: Level::W1,
            name: name.to_string(),
            attempt: AttemptSpec::Declared {
                note: "excluded from the tested imported-ordering catalog".to_string(),
            },
            expected_fail: true,
        });
    }
    entries.push(CatalogEntry {
        level: Level::W2,
        name: "dp-projection".to_string(),
        attempt: AttemptSpec::Confession(RankRoute::DpProjection),
        expected_fail: false,
    });
    entries
}

/// The full catalog: W1 includes the succeeding MPO and polynomial
/// constructions. Reproduces kappa = 1.
pub fn full_catalog() -> Vec<CatalogEntry> {
    let mut entries = w0_entries();
    entries.push(CatalogEntry {
        level: Level::W1,
        name: "mpo-f-over-g".to_string(),
        attempt: AttemptSpec::Mpo(PrecedenceSpec::parse("F>G").expect("precedence")),
        expected_fail: false,
    });
    entries.push(CatalogEntry {
        level: Level::W1,
        name: "poly-default-witness".to_string(),
        attempt: AttemptSpec::Poly(orient::default_poly_witness()),
        expected_fail: false,
    });
    entries.push(CatalogEntry {
        level: Level::W1,
        name: "kbo".to_string(),
        attempt: AttemptSpec::Declared {
            note: "excluded from the tested imported-ordering catalog".to_string(),
        },
        expected_fail: true,
    });
    entries.push(CatalogEntry {
        level: Level::W2,
        name: "dp-projection".to_string(),
        attempt: AttemptSpec::Confession(RankRoute::DpProjection),
        expected_fail: false,
    });
    entries
}

pub fn named_catalog(name: &str) -> Option<Vec<CatalogEntry>> {
    match name {
        "barrier-confined" => Some(barrier_confined_catalog()),
        "full" => Some(full_catalog()),
        _ => None,
    }
}

// ---------------------------------------------------------------------------
// Catalog JSON
// ---------------------------------------------------------------------------

pub fn entry_to_json(entry: &CatalogEntry) -> Json {
    let params = match &entry.attempt {
        AttemptSpec::Additive(m)
        | AttemptSpec::Transparent(m)
        | AttemptSpec::Affine(m)
        | AttemptSpec::Poly(m) => measure_spec_to_json(m),
        AttemptSpec::Mpo(p) => Json::obj([("precedence", p.to_json())]),
        AttemptSpec::Confession(_) => Json::obj([]),
        AttemptSpec::Declared { note } => Json::obj([("note", Json::from(note.as_str()))]),
    };
    let mut obj = Json::obj([
        ("level", Json::from(u64::from(entry.level.index()))),
        ("name", Json::from(entry.name.as_str())),
        (
            "attempt",
            Json::obj([
                ("op", Json::from(entry.attempt.op_name())),
                ("params", params),
            ]),
        ),
    ]);
    if entry.expected_fail {
        obj.insert("expected_outcome", Json::from("fails"));
    }
    obj
}

pub fn entry_from_json(v: &Json) -> Result<CatalogEntry, CatalogError> {
    let bad = |msg: &str| CatalogError::BadJson(msg.to_string());
    let level_idx = v
        .get("level")
        .and_then(Json::as_u64)
        .ok_or_else(|| bad("entry needs a level"))?;
    let level = Level::from_index(u8::try_from(level_idx).map_err(|_| bad("level out of range"))?)
        .ok_or_else(|| bad("level must be 0, 1, or 2"))?;
    let name = v
        .get("name")
        .and_then(Json::as_str)
        .ok_or_else(|| bad("entry needs a name"))?
        .to_string();
    let attempt_obj = v
        .get("attempt")
        .ok_or_else(|| bad("entry needs an attempt"))?;
    let op = attempt_obj
        .get("op")
        .and_then(Json::as_str)
        .ok_or_else(|| bad("attempt needs an op"))?;
    let params = attempt_obj.get("params").cloned().unwrap_or(Json::obj([]));
    let expected_fail = match v.get("expected_outcome").and_then(Json::as_str) {
        None => false,
        Some("fails") => true,
        Some(other) => {
            return Err(CatalogError::Unresolvable {
                entry: name,
                reason: format!("unsupported expected_outcome {:?}", other),
            })
        }
    };
    let measure = |params: &Json| {
        measure_spec_from_json(params)
            .map_err(|e| CatalogError::BadJson(format!("entry {}: {}", name, e)))
    };
    let attempt = match op {
        "additive" => AttemptSpec::Additive(measure(&params)?),
        "transparent-compositional" => AttemptSpec::Transparent(measure(&params)?),
        "affine" => AttemptSpec::Affine(measure(&params)?),
        "poly" => AttemptSpec::Poly(measure(&params)?),
        "mpo" => {
            let pairs: Vec<String> = params
                .get("precedence")
                .and_then(Json::as_arr)
                .map(|a| {
                    a.iter()
                        .filter_map(Json::as_str)
                        .map(str::to_string)
                        .collect()
                })
                .unwrap_or_default();
            let spec = PrecedenceSpec::parse(&pairs.join(",")).map_err(|e| {
                CatalogError::Unresolvable {
                    entry: name.clone(),
                    reason: e.to_string(),
                }
            })?;
            AttemptSpec::Mpo(spec)
        }
        "dp-projection" | "counter-projection" | "sct" | "argument-filtering" => {
            AttemptSpec::Confession(RankRoute::parse(op).expect("route op"))
        }
        "declared" => AttemptSpec::Declared {
            note: params
                .get("note")
                .and_then(Json::as_str)
                .unwrap_or("declared")
                .to_string(),
        },
        other => {
            return Err(CatalogError::Unresolvable {
                entry: name,
                reason: format!("unknown op {:?}", other),
            })
        }
    };
    Ok(CatalogEntry {
        level,
        name,
        attempt,
        expected_fail,
    })
}

pub fn entries_from_json(v: &Json) -> Result<Vec<CatalogEntry>, CatalogError> {
    v.as_arr()
        .ok_or_else(|| CatalogError::BadJson("catalog must be an array of entries".to_string()))?
        .iter()
        .map(entry_from_json)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn barrier_confined_gives_kappa_two() {
        let result = compute_kappa(&Trs::recursor(), &barrier_confined_catalog()).unwrap();
        assert_eq!(result.kappa, Kappa::Level(2));
        assert!(result.ob);
        // all twelve W0 entries failed, three W1 declared failures
        assert_eq!(result.per_level[&0].len(), 12);
        assert!(result.per_level[&0].iter().all(|o| !o.success));
        assert_eq!(result.per_level[&1].len(), 3);
        assert!(result.per_level[&1].iter().all(|o| !o.success));
        assert!(result.per_level[&2][0].success);
    }

    #[test]
    fn full_catalog_gives_kappa_one() {
        let result = compute_kappa(&Trs::recursor(), &full_catalog()).unwrap();
        assert_eq!(result.kappa, Kappa::Level(1));
        assert!(result.ob);
    }

    #[test]
    fn non_duplicating_variant_gives_kappa_zero() {
        let linear = Trs::linear_recursor();
        let catalog = vec![CatalogEntry {
            level: Level::W0,
            name: "additive-all-ones".to_string(),
            attempt: AttemptSpec::Additive(MeasureSpec::uniform_additive(&linear)),
            expected_fail: false,
        }];
        let result = compute_kappa(&linear, &catalog).unwrap();
        assert_eq!(result.kappa, Kappa::Level(0));
        assert!(!result.ob);
    }

    #[test]
    fn ob_iff_kappa_positive() {
        for kappa in [
            Kappa::Level(0),
            Kappa::Level(1),
            Kappa::Level(2),
            Kappa::UndefinedAboveTop,
        ] {
            assert_eq!(kappa.ob(), kappa != Kappa::Level(0));
        }
    }

    #[test]
    fn empty_catalog_is_an_error() {
        assert!(matches!(
            compute_kappa(&Trs::recursor(), &[]),
            Err(CatalogError::Empty)
        ));
    }

    #[test]
    fn declared_entry_without_expected_outcome_is_unresolvable() {
        let catalog = vec![CatalogEntry {
            level: Level::W0,
            name: "mystery".to_string(),
            attempt: AttemptSpec::Declared {
                note: "no outcome".to_string(),
            },
            expected_fail: false,
        }];
        assert!(matches!(
            compute_kappa(&Trs::recursor(), &catalog),
            Err(CatalogError::Unresolvable { .. })
        ));
    }

    fn random_entry(state: &mut u64, level: Level) -> CatalogEntry {
        let mut next = || {
            *state ^= *state << 13;
            *state ^= *state >> 7;
            *state ^= *state << 17;
            *state
        };
        let recursor = Trs::recursor();
        let pick = next() % 5;
        let name = format!("e{}", next());
        let attempt = match (level, pick) {
            (Level::W0, 0) => AttemptSpec::Additive(MeasureSpec::uniform_additive(&recursor)),
            (Level::W0, 1) => AttemptSpec::Affine(MeasureSpec::uniform_affine(&recursor)),
            (Level::W0, _) => AttemptSpec::Declared {
                note: "companion barrier package".to_string(),
            },
            (Level::W1, 0) => AttemptSpec::Mpo(PrecedenceSpec::parse("F>G").unwrap()),
            (Level::W1, 1) => AttemptSpec::Poly(orient::default_poly_witness()),
            (Level::W1, _) => AttemptSpec::Declared {
                note: "excluded".to_string(),
            },
            (Level::W2, 0) => AttemptSpec::Confession(RankRoute::DpProjection),
            (Level::W2, 1) => AttemptSpec::Confession(RankRoute::Sct),
            (Level::W2, _) => AttemptSpec::Declared {
                note: "excluded".to_string(),
            },
        };
        let expected_fail = matches!(attempt, AttemptSpec::Declared { .. });
        CatalogEntry {
            level,
            name,
            attempt,
            expected_fail,
        }
    }

    #[test]
    fn kappa_is_monotone_under_catalog_extension() {
        let mut state = 0xabcdef1234567890u64;
        let recursor = Trs::recursor();
        for _ in 0..100 {
            let mut catalog = Vec::new();
            let grow = |state: &mut u64, catalog: &mut Vec<CatalogEntry>| {
                let lvl = Level::from_index((*state % 3) as u8).unwrap();
                catalog.push(random_entry(state, lvl));
                *state = state.wrapping_mul(6364136223846793005).wrapping_add(1);
            };
            grow(&mut state, &mut catalog);
            grow(&mut state, &mut catalog);
            let before = compute_kappa(&recursor, &catalog).unwrap().kappa;
            grow(&mut state, &mut catalog);
            grow(&mut state, &mut catalog);
            let after = compute_kappa(&recursor, &catalog).unwrap().kappa;
            assert!(after <= before, "extension raised kappa");
        }
    }

    #[test]
    fn no_w0_entry_ever_succeeds_on_the_recursor() {
        let mut state = 0x123456789abcdef1u64;
        let recursor = Trs::recursor();
        for _ in 0..200 {
            let entry = random_entry(&mut state, Level::W0);
            let outcome = run_attempt(&recursor, &entry).unwrap();
            assert!(!outcome.success, "entry {:?} succeeded", entry.name);
        }
    }

    #[test]
    fn catalog_entries_round_trip_through_json() {
        for catalog in [barrier_confined_catalog(), full_catalog()] {
            let json = Json::arr(catalog.iter().map(entry_to_json));
            let text = crate::json::emit_report(&json);
            let parsed = entries_from_json(&crate::json::parse_report(&text).unwrap()).unwrap();
            assert_eq!(parsed.len(), catalog.len());
            for (a, b) in parsed.iter().zip(catalog.iter()) {
                assert_eq!(a.name, b.name);
                assert_eq!(a.level, b.level);
                assert_eq!(a.expected_fail, b.expected_fail);
                assert_eq!(a.attempt.op_name(), b.attempt.op_name());
            }
        }
    }
}
