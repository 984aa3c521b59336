//! Report records. The machine format writes one JSON object per line,
//! tagged by `"record"`; every record deserializes back to the same value.

use serde::{Deserialize, Serialize};

use crate::bijectivity::BijectivityWitness;
use crate::classifier::{
    Evidence, ExpansivityWitness, Outcome, Pattern, Property, SensitivityWitness, Verdict,
};
use crate::engine::{
    Budgets, Direction, EscapeCertificate, InfinityCertificate, OrbitResult, Presentation,
    PresentationError,
};
use crate::interval::Interval;
use crate::oracle::SweepSummary;

/// Iterates of an escape certificate printed in reports.
const SHOWN_ITERATES: usize = 6;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "record", rename_all = "kebab-case")]
pub enum Record {
    Header(Header),
    Verdict(VerdictRecord),
    Diagram(DiagramRecord),
    Orbit(OrbitRecord),
    Witness(WitnessRecord),
    Sweep(SweepRecord),
    Verify(VerifyRecord),
    Note(NoteRecord),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeneratorRecord {
    pub name: String,
    pub map: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Header {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub generators: Vec<GeneratorRecord>,
    pub max_degree: usize,
    pub budgets: Budgets,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EscapeRecord {
    pub word: String,
    pub base: i64,
    pub seed: i64,
    pub seed_word: String,
    pub bound: i64,
    pub direction: Direction,
    /// Leading iterates from the seed, in decimal.
    pub iterates: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BijectionRecord {
    pub generator: String,
    pub images: Vec<Interval>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DensityTerm {
    pub generator: String,
    #[serde(with = "decimal")]
    pub slope: i128,
}

// serde_json cannot buffer i128 inside tagged enums.
mod decimal {
    use serde::de::Error;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &i128, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(v)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<i128, D::Error> {
        String::deserialize(d)?.parse().map_err(D::Error::custom)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReachRecord {
    pub point: i64,
    pub word: String,
    pub origin: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum EvidenceRecord {
    FiniteClosure {
        size: usize,
        words: Vec<String>,
    },
    Escape {
        probe: i64,
        certificate: EscapeRecord,
    },
    NotBijective {
        generator: String,
        witness: BijectivityWitness,
    },
    Distal {
        size: usize,
        words: Vec<String>,
        bijections: Vec<BijectionRecord>,
    },
    ImageDensity {
        direction: Direction,
        terms: Vec<DensityTerm>,
        density: String,
    },
    March {
        h: Vec<i64>,
        bound: i64,
        up_word: String,
        down_word: String,
        window: Interval,
        reach: Vec<ReachRecord>,
    },
    Inconclusive {
        reason: String,
        probes: Vec<i64>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerdictRecord {
    pub property: Property,
    pub outcome: Outcome,
    pub evidence: EvidenceRecord,
    pub budgets: Budgets,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiagramRecord {
    pub region: String,
    pub equicontinuous: Outcome,
    pub distal: Outcome,
    pub sensitive: Outcome,
    pub expansive: Outcome,
}

impl DiagramRecord {
    pub fn sentence(&self) -> &'static str {
        match self.region.as_str() {
            "distal" => "is distal",
            "equicontinuous-not-distal" => "is equicontinuous and it is not distal",
            "equicontinuous" => "is equicontinuous",
            "expansive" => "is expansive",
            "sensitive-not-expansive" => "is sensitive and it is not expansive",
            "sensitive" => "is sensitive",
            _ => "is not classified within budget",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OrbitDirection {
    Forward,
    Inverse,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OrbitStatus {
    Finite,
    Infinite,
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum InfinityRecord {
    Escape(EscapeRecord),
    ConstantFiber {
        generator: String,
        interval: Interval,
        target: i64,
        target_word: String,
        base: i64,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitRecord {
    pub direction: OrbitDirection,
    pub base: i64,
    pub status: OrbitStatus,
    /// Sorted by point. Forward: `word(origin) = point`; inverse:
    /// `word(point) = origin`.
    pub points: Vec<ReachRecord>,
    pub certificate: Option<InfinityRecord>,
    pub reason: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum WitnessRecord {
    Sensitivity {
        v: i64,
        word: String,
        beta: i64,
        protected: Vec<i64>,
        x: Pattern,
        y: Pattern,
    },
    Expansivity {
        h_set: Vec<i64>,
        h: i64,
        word: String,
        w: i64,
        x: Pattern,
        y: Pattern,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub label: String,
    pub summary: SweepSummary,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NoteRecord {
    pub message: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyRecord {
    pub checked: usize,
    pub failures: Vec<String>,
}

pub fn header(p: &Presentation, command: &str, budgets: Budgets) -> Header {
    Header {
        tool: env!("CARGO_PKG_NAME").into(),
        version: env!("CARGO_PKG_VERSION").into(),
        command: command.into(),
        generators: (0..p.len())
            .map(|g| GeneratorRecord {
                name: p.name(g).into(),
                map: p.map(g).to_dsl_inline(),
            })
            .collect(),
        max_degree: p.max_degree(),
        budgets,
    }
}

pub fn escape_record(p: &Presentation, cert: &EscapeCertificate) -> EscapeRecord {
    EscapeRecord {
        word: p.render_word(&cert.word),
        base: cert.base,
        seed: cert.seed,
        seed_word: p.render_word(&cert.seed_word),
        bound: cert.bound,
        direction: cert.direction,
        iterates: cert
            .iterates(p, SHOWN_ITERATES)
            .iter()
            .map(|n| {
                let digits = n.to_string();
                if digits.len() <= 40 {
                    digits
                } else {
                    format!("<{} digits>", digits.trim_start_matches('-').len())
                }
            })
            .collect(),
    }
}

pub fn escape_from_record(
    p: &Presentation,
    r: &EscapeRecord,
) -> Result<EscapeCertificate, PresentationError> {
    Ok(EscapeCertificate {
        word: p.parse_word(&r.word)?,
        base: r.base,
        seed: r.seed,
        seed_word: p.parse_word(&r.seed_word)?,
        bound: r.bound,
        direction: r.direction,
    })
}

pub fn evidence_record(p: &Presentation, evidence: &Evidence) -> EvidenceRecord {
    let words = |ws: &[crate::engine::Word]| ws.iter().map(|w| p.render_word(w)).collect();
    match evidence {
        Evidence::FiniteClosure { words: ws } => EvidenceRecord::FiniteClosure {
            size: ws.len(),
            words: words(ws),
        },
        Evidence::Escape { probe, certificate } => EvidenceRecord::Escape {
            probe: *probe,
            certificate: escape_record(p, certificate),
        },
        Evidence::NotBijective { generator, witness } => EvidenceRecord::NotBijective {
            generator: p.name(*generator).into(),
            witness: *witness,
        },
        Evidence::Distal {
            words: ws,
            bijections,
        } => EvidenceRecord::Distal {
            size: ws.len(),
            words: words(ws),
            bijections: bijections
                .iter()
                .enumerate()
                .map(|(g, c)| BijectionRecord {
                    generator: p.name(g).into(),
                    images: c.images.clone(),
                })
                .collect(),
        },
        Evidence::ImageDensity(cert) => {
            let (num, den) = cert.density();
            EvidenceRecord::ImageDensity {
                direction: cert.direction,
                terms: cert
                    .contributions
                    .iter()
                    .map(|&(g, slope)| DensityTerm {
                        generator: p.name(g).into(),
                        slope,
                    })
                    .collect(),
                density: format!("{num}/{den}"),
            }
        }
        Evidence::March(cert) => EvidenceRecord::March {
            h: cert.h.clone(),
            bound: cert.bound,
            up_word: p.render_word(&cert.up_word),
            down_word: p.render_word(&cert.down_word),
            window: cert.window,
            reach: cert
                .reach
                .iter()
                .map(|(&point, (w, origin))| ReachRecord {
                    point,
                    word: p.render_word(w),
                    origin: *origin,
                })
                .collect(),
        },
        Evidence::Inconclusive { reason, probes } => EvidenceRecord::Inconclusive {
            reason: reason.clone(),
            probes: probes.clone(),
        },
    }
}

pub fn verdict_record(p: &Presentation, v: &Verdict) -> VerdictRecord {
    VerdictRecord {
        property: v.property,
        outcome: v.outcome,
        evidence: evidence_record(p, &v.evidence),
        budgets: v.budgets,
    }
}

/// Position in the nesting `distal ⊆ equicontinuous` and
/// `expansive ⊆ sensitive`, with equicontinuous and sensitive complementary.
pub fn diagram(
    eq: Outcome,
    distal: Outcome,
    sensitive: Outcome,
    expansive: Outcome,
) -> DiagramRecord {
    use Outcome::*;
    let region = match (eq, distal, sensitive, expansive) {
        (Yes, Yes, _, _) => "distal",
        (Yes, No, _, _) => "equicontinuous-not-distal",
        (Yes, Unknown, _, _) => "equicontinuous",
        (_, _, Yes, Yes) => "expansive",
        (_, _, Yes, No) => "sensitive-not-expansive",
        (_, _, Yes, Unknown) => "sensitive",
        _ => "undetermined",
    };
    DiagramRecord {
        region: region.into(),
        equicontinuous: eq,
        distal,
        sensitive,
        expansive,
    }
}

pub fn orbit_record(
    p: &Presentation,
    base: i64,
    direction: OrbitDirection,
    r: &OrbitResult,
) -> OrbitRecord {
    let mut rec = OrbitRecord {
        direction,
        base,
        status: OrbitStatus::Unknown,
        points: Vec::new(),
        certificate: None,
        reason: None,
    };
    match r {
        OrbitResult::Finite(o) => {
            rec.status = OrbitStatus::Finite;
            rec.points = o
                .points
                .iter()
                .map(|(&point, reach)| ReachRecord {
                    point,
                    word: p.render_word(&reach.word),
                    origin: reach.origin,
                })
                .collect();
        }
        OrbitResult::Infinite(cert) => {
            rec.status = OrbitStatus::Infinite;
            rec.certificate = Some(match cert {
                InfinityCertificate::Escape(c) => InfinityRecord::Escape(escape_record(p, c)),
                InfinityCertificate::ConstantFiber {
                    generator,
                    interval,
                    target,
                    target_word,
                    base,
                } => InfinityRecord::ConstantFiber {
                    generator: p.name(*generator).into(),
                    interval: *interval,
                    target: *target,
                    target_word: p.render_word(target_word),
                    base: *base,
                },
            });
        }
        OrbitResult::Unknown {
            explored,
            frontier,
            reason,
        } => {
            rec.reason = Some(format!(
                "{reason} ({explored} explored, {frontier} in frontier)"
            ));
        }
    }
    rec
}

pub fn sensitivity_record(p: &Presentation, w: &SensitivityWitness) -> WitnessRecord {
    WitnessRecord::Sensitivity {
        v: w.v,
        word: p.render_word(&w.word),
        beta: w.beta,
        protected: w.protected.clone(),
        x: w.x.clone(),
        y: w.y.clone(),
    }
}

pub fn expansivity_record(
    p: &Presentation,
    h_set: &[i64],
    w: &ExpansivityWitness,
) -> WitnessRecord {
    WitnessRecord::Expansivity {
        h_set: h_set.to_vec(),
        h: w.h,
        word: p.render_word(&w.word),
        w: w.w,
        x: w.x.clone(),
        y: w.y.clone(),
    }
}

pub fn to_json_line(r: &Record) -> String {
    serde_json::to_string(r).expect("records serialize")
}

pub fn from_json_line(line: &str) -> Result<Record, serde_json::Error> {
    serde_json::from_str(line)
}

fn outcome_cell(o: Outcome) -> &'static str {
    o.as_str()
}

fn evidence_summary(e: &EvidenceRecord) -> String {
    match e {
        EvidenceRecord::FiniteClosure { size, words } => {
            format!("closure T is finite, |T| = {size}: {}", abbreviate(words))
        }
        EvidenceRecord::Escape { probe, certificate: c } => format!(
            "orbit of {probe} is infinite: {} moves {} outward from {} ({} from {})",
            c.word,
            match c.direction {
                Direction::Up => format!("[{}, +inf)", c.bound),
                Direction::Down => format!("(-inf, {}]", c.bound),
            },
            c.seed,
            c.seed_word,
            c.base
        ),
        EvidenceRecord::NotBijective { generator, witness } => match witness {
            BijectivityWitness::Collision { a, b, value } => {
                format!("{generator} is not injective: {generator}({a}) = {generator}({b}) = {value}")
            }
            BijectivityWitness::Missing { value } => {
                format!("{generator} is not surjective: {value} has no preimage")
            }
        },
        EvidenceRecord::Distal { size, .. } => {
            format!("closure T is finite, |T| = {size}, every generator bijective")
        }
        EvidenceRecord::ImageDensity { direction, density, .. } => format!(
            "generator images have density {density} < 1 towards {}; the complement is infinite",
            match direction {
                Direction::Up => "+inf",
                Direction::Down => "-inf",
            }
        ),
        EvidenceRecord::March {
            h, bound, up_word, down_word, window, ..
        } => format!(
            "H = {h:?}: {up_word} is n+1 on [{bound}, +inf), {down_word} is n-1 on (-inf, -{bound}], {window} covered"
        ),
        EvidenceRecord::Inconclusive { reason, probes } => {
            if probes.is_empty() {
                reason.clone()
            } else {
                format!("{reason}; inconclusive probes {}", abbreviate_nums(probes))
            }
        }
    }
}

fn abbreviate(items: &[String]) -> String {
    if items.len() <= 6 {
        items.join(", ")
    } else {
        format!("{}, ... ({} more)", items[..6].join(", "), items.len() - 6)
    }
}

fn abbreviate_nums(items: &[i64]) -> String {
    abbreviate(&items.iter().map(|n| n.to_string()).collect::<Vec<_>>())
}

/// Human-readable rendering of one record.
pub fn to_human(r: &Record) -> String {
    match r {
        Record::Header(h) => {
            let mut s = format!("{} {} {}\n", h.tool, h.version, h.command);
            for g in &h.generators {
                s += &format!("  {}: {}\n", g.name, g.map);
            }
            s += &format!(
                "  budgets: {} orbit points, {} closure maps; max degree {}",
                h.budgets.orbit, h.budgets.closure, h.max_degree
            );
            s
        }
        Record::Verdict(v) => format!(
            "{:<16}{:<9}{}",
            v.property.as_str(),
            outcome_cell(v.outcome),
            evidence_summary(&v.evidence)
        ),
        Record::Diagram(d) => format!("diagram: {} (T {})", d.region, d.sentence()),
        Record::Orbit(o) => {
            let dir = match o.direction {
                OrbitDirection::Forward => "forward",
                OrbitDirection::Inverse => "inverse",
            };
            match o.status {
                OrbitStatus::Finite => {
                    let mut s = format!("{dir} orbit of {}: finite, {} points\n", o.base, o.points.len());
                    let lines: Vec<String> = o
                        .points
                        .iter()
                        .map(|p| format!("  {:>8}  {}", p.point, p.word))
                        .collect();
                    s += &lines.join("\n");
                    s
                }
                OrbitStatus::Infinite => match &o.certificate {
                    Some(InfinityRecord::Escape(c)) => format!(
                        "{dir} orbit of {}: infinite\n  {} escapes from {} (reached by {}), bound {}\n  iterates: {}",
                        o.base,
                        c.word,
                        c.seed,
                        c.seed_word,
                        c.bound,
                        c.iterates.join(", ")
                    ),
                    Some(InfinityRecord::ConstantFiber {
                        generator, interval, target, ..
                    }) => format!(
                        "{dir} orbit of {}: infinite\n  {generator} is constant {target} on {interval}",
                        o.base
                    ),
                    None => format!("{dir} orbit of {}: infinite", o.base),
                },
                OrbitStatus::Unknown => format!(
                    "{dir} orbit of {}: unknown ({})",
                    o.base,
                    o.reason.as_deref().unwrap_or("")
                ),
            }
        }
        Record::Witness(WitnessRecord::Sensitivity { v, word, beta, protected, x, y }) => format!(
            "sensitivity witness: v = {v}, word {word} sends {v} to beta = {beta} outside {protected:?}\n  flip x_{beta} = {} to y_{beta} = {}",
            x.get(*beta),
            y.get(*beta)
        ),
        Record::Witness(WitnessRecord::Expansivity { h_set, h, word, w, .. }) => format!(
            "expansivity witness: patterns differ at {w}; {word} sends h = {h} in {h_set:?} to {w}"
        ),
        Record::Sweep(s) => format!(
            "{}: {} instances, {} expansivity, {} modulus, {} distality checks, {} disagreements",
            s.label,
            s.summary.instances,
            s.summary.expansive_checks,
            s.summary.modulus_checks,
            s.summary.distal_checks,
            s.summary.disagreements.len()
        ),
        Record::Note(n) => format!("note: {}", n.message),
        Record::Verify(v) => {
            if v.failures.is_empty() {
                format!("verify: {} items re-checked, all valid", v.checked)
            } else {
                format!(
                    "verify: {} items re-checked, {} FAILED\n  {}",
                    v.checked,
                    v.failures.len(),
                    v.failures.join("\n  ")
                )
            }
        }
    }
}
