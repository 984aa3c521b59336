//! Offline re-checking of report records against a presentation. Nothing
//! here reuses the searches that produced the evidence: words are
//! re-parsed, evaluated and compared directly.

use std::collections::BTreeSet;

use crate::bijectivity::{bijectivity, Bijectivity};
use crate::classifier::{closure_is_closed, density_certificate, Outcome, Property};
use crate::engine::{check_escape, iterates_distinct, Presentation, Word};
use crate::interval::Interval;
use crate::poly::Poly;
use crate::report::{
    escape_from_record, EscapeRecord, EvidenceRecord, InfinityRecord, OrbitDirection, OrbitRecord,
    OrbitStatus, Record, VerdictRecord, VerifyRecord, WitnessRecord,
};

/// Iterates from an escape seed that must be pairwise distinct.
pub const DISTINCT_ITERATES: usize = 20;

pub fn verify_records(p: &Presentation, records: &[Record]) -> VerifyRecord {
    let mut out = VerifyRecord::default();
    for r in records {
        let result = match r {
            Record::Verdict(v) => verify_verdict(p, v),
            Record::Orbit(o) => verify_orbit(p, o),
            Record::Witness(w) => verify_witness(p, w),
            Record::Sweep(s) => {
                if s.summary.disagreements.is_empty() {
                    Ok(())
                } else {
                    Err(format!(
                        "{}: {} disagreements",
                        s.label,
                        s.summary.disagreements.len()
                    ))
                }
            }
            Record::Header(_) | Record::Diagram(_) | Record::Verify(_) | Record::Note(_) => {
                continue
            }
        };
        out.checked += 1;
        if let Err(e) = result {
            out.failures.push(e);
        }
    }
    out
}

fn word(p: &Presentation, text: &str) -> Result<Word, String> {
    p.parse_word(text).map_err(|e| e.to_string())
}

fn eval(p: &Presentation, w: &Word, n: i64) -> Result<i64, String> {
    p.eval_word(w, n).map_err(|e| e.to_string())
}

pub fn verify_escape(p: &Presentation, r: &EscapeRecord) -> Result<(), String> {
    let cert = escape_from_record(p, r).map_err(|e| e.to_string())?;
    check_escape(&cert, p).map_err(|e| format!("escape certificate rejected: {e}"))?;
    match iterates_distinct(&cert, p, DISTINCT_ITERATES) {
        Ok(true) => Ok(()),
        Ok(false) => Err("escape iterates repeat".into()),
        Err(e) => Err(format!("escape iterates: {e}")),
    }
}

// a table reads better than one long matches!
#[allow(clippy::match_like_matches_macro)]
fn expected_kind(property: Property, outcome: Outcome, evidence: &EvidenceRecord) -> bool {
    use EvidenceRecord as E;
    use Outcome::*;
    use Property::*;
    match (property, outcome, evidence) {
        (_, Unknown, _) => true,
        (Equicontinuous, Yes, E::FiniteClosure { .. })
        | (Sensitive, No, E::FiniteClosure { .. }) => true,
        (Equicontinuous, No, E::Escape { .. }) | (Sensitive, Yes, E::Escape { .. }) => true,
        (Distal, Yes, E::Distal { .. }) => true,
        (Distal, No, E::Escape { .. } | E::NotBijective { .. }) => true,
        (Expansive, No, E::FiniteClosure { .. } | E::ImageDensity { .. }) => true,
        (Expansive, Yes, E::March { .. }) => true,
        _ => false,
    }
}

pub fn verify_verdict(p: &Presentation, v: &VerdictRecord) -> Result<(), String> {
    let label = v.property.as_str();
    if !expected_kind(v.property, v.outcome, &v.evidence) {
        return Err(format!(
            "{label}: evidence does not support outcome {}",
            v.outcome.as_str()
        ));
    }
    let res = match &v.evidence {
        EvidenceRecord::FiniteClosure { size, words } => verify_closure(p, *size, words),
        EvidenceRecord::Escape { certificate, .. } => verify_escape(p, certificate),
        EvidenceRecord::NotBijective { generator, witness } => {
            let g = p
                .index_of(generator)
                .ok_or(format!("unknown generator {generator}"))?;
            if witness.holds_for(p.map(g)) {
                Ok(())
            } else {
                Err(format!("bijectivity witness fails for {generator}"))
            }
        }
        EvidenceRecord::Distal {
            size,
            words,
            bijections,
        } => {
            verify_closure(p, *size, words)?;
            if bijections.len() != p.len() {
                return Err("one bijection certificate per generator expected".into());
            }
            for b in bijections {
                let g = p
                    .index_of(&b.generator)
                    .ok_or(format!("unknown generator {}", b.generator))?;
                check_tiling(&b.images)?;
                match bijectivity(p.map(g)) {
                    Bijectivity::Yes(c) if c.images == b.images => {}
                    _ => return Err(format!("{} is not certified bijective", b.generator)),
                }
                for n in -64..=64 {
                    let count = p.map(g).preimages(n).map_err(|e| e.to_string())?.count();
                    if count != Some(1) {
                        return Err(format!("{} has {count:?} preimages of {n}", b.generator));
                    }
                }
            }
            Ok(())
        }
        EvidenceRecord::ImageDensity {
            direction, terms, ..
        } => {
            let cert = density_certificate(p, *direction);
            let names: Vec<(String, i128)> = cert
                .contributions
                .iter()
                .map(|&(g, s)| (p.name(g).to_string(), s))
                .collect();
            let listed: Vec<(String, i128)> = terms
                .iter()
                .map(|t| (t.generator.clone(), t.slope))
                .collect();
            if names != listed {
                Err("density terms do not match the generators".into())
            } else if !cert.below_one() {
                Err("image density is not below one".into())
            } else {
                Ok(())
            }
        }
        EvidenceRecord::March {
            h,
            bound,
            up_word,
            down_word,
            window,
            reach,
        } => verify_march(p, h, *bound, up_word, down_word, *window, reach),
        EvidenceRecord::Inconclusive { .. } => Ok(()),
    };
    res.map_err(|e| format!("{label}: {e}"))
}

fn verify_closure(p: &Presentation, size: usize, words: &[String]) -> Result<(), String> {
    if size != words.len() {
        return Err("closure size does not match its word list".into());
    }
    let ws: Vec<Word> = words.iter().map(|w| word(p, w)).collect::<Result<_, _>>()?;
    closure_is_closed(p, &ws)?;
    let maps: Vec<_> = ws
        .iter()
        .map(|w| p.word_map(w))
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    for i in 0..maps.len() {
        for j in i + 1..maps.len() {
            if maps[i] == maps[j] {
                return Err(format!("{} and {} denote the same map", words[i], words[j]));
            }
        }
    }
    Ok(())
}

/// Sorted, pairwise disjoint, contiguous, unbounded on both sides.
fn check_tiling(images: &[Interval]) -> Result<(), String> {
    let first = images.first().ok_or("no image atoms")?;
    if first.lo.is_some() || images.last().unwrap().hi.is_some() {
        return Err("image atoms do not reach both infinities".into());
    }
    for pair in images.windows(2) {
        match (pair[0].hi, pair[1].lo) {
            (Some(a), Some(b)) if b == a + 1 => {}
            _ => {
                return Err(format!(
                    "image atoms {} and {} do not abut",
                    pair[0], pair[1]
                ))
            }
        }
    }
    Ok(())
}

fn verify_march(
    p: &Presentation,
    h: &[i64],
    bound: i64,
    up_word: &str,
    down_word: &str,
    window: Interval,
    reach: &[crate::report::ReachRecord],
) -> Result<(), String> {
    let up = p.word_map(&word(p, up_word)?).map_err(|e| e.to_string())?;
    let down = p
        .word_map(&word(p, down_word)?)
        .map_err(|e| e.to_string())?;
    if *up.right_ray_poly() != Poly::affine(1, 1) || up.right_ray_start() > bound {
        return Err(format!("{up_word} is not n+1 on [{bound}, +inf)"));
    }
    if *down.left_ray_poly() != Poly::affine(1, -1) || down.left_ray_end() < -bound {
        return Err(format!("{down_word} is not n-1 on (-inf, -{bound}]"));
    }
    if !(window.contains(-bound) && window.contains(bound)) || !window.is_bounded() {
        return Err(format!(
            "window {window} does not contain [-{bound}, {bound}]"
        ));
    }
    let covered: BTreeSet<i64> = reach.iter().map(|r| r.point).collect();
    if let Some(n) = window.iter().find(|n| !covered.contains(n)) {
        return Err(format!("{n} is not reached"));
    }
    for r in reach {
        if !h.contains(&r.origin) {
            return Err(format!("{} is not in H", r.origin));
        }
        if eval(p, &word(p, &r.word)?, r.origin)? != r.point {
            return Err(format!(
                "{} does not send {} to {}",
                r.word, r.origin, r.point
            ));
        }
    }
    Ok(())
}

pub fn verify_orbit(p: &Presentation, o: &OrbitRecord) -> Result<(), String> {
    let base = o.base;
    match o.status {
        OrbitStatus::Finite => {
            let points: BTreeSet<i64> = o.points.iter().map(|r| r.point).collect();
            if !points.contains(&base) {
                return Err(format!("orbit of {base} omits the base point"));
            }
            for r in &o.points {
                let w = word(p, &r.word)?;
                let ok = match o.direction {
                    OrbitDirection::Forward => eval(p, &w, base)? == r.point,
                    OrbitDirection::Inverse => eval(p, &w, r.point)? == base,
                };
                if !ok {
                    return Err(format!(
                        "word {} does not link {} and {base}",
                        r.word, r.point
                    ));
                }
                for g in 0..p.len() {
                    match o.direction {
                        OrbitDirection::Forward => {
                            let s = p.map(g).eval(r.point).map_err(|e| e.to_string())?;
                            if !points.contains(&s) {
                                return Err(format!("{}({}) = {s} is missing", p.name(g), r.point));
                            }
                        }
                        OrbitDirection::Inverse => {
                            let pre = p.map(g).preimages(r.point).map_err(|e| e.to_string())?;
                            let pts = pre
                                .points()
                                .ok_or("infinite preimage in a finite inverse orbit")?;
                            if let Some(s) = pts.iter().find(|s| !points.contains(s)) {
                                return Err(format!("preimage {s} of {} is missing", r.point));
                            }
                        }
                    }
                }
            }
            Ok(())
        }
        OrbitStatus::Infinite => match &o.certificate {
            Some(InfinityRecord::Escape(c)) => {
                if c.base != base {
                    return Err("certificate is for a different base point".into());
                }
                verify_escape(p, c)
            }
            Some(InfinityRecord::ConstantFiber {
                generator,
                interval,
                target,
                target_word,
                base: b,
            }) => {
                let g = p
                    .index_of(generator)
                    .ok_or(format!("unknown generator {generator}"))?;
                if *b != base || eval(p, &word(p, target_word)?, *target)? != base {
                    return Err(format!("{target_word} does not send {target} to {base}"));
                }
                if interval.is_bounded() {
                    return Err("constant fiber must be unbounded".into());
                }
                let pre = p.map(g).preimages(*target).map_err(|e| e.to_string())?;
                let inside = pre
                    .intervals
                    .iter()
                    .any(|iv| iv.intersect(interval) == *interval);
                if !inside {
                    return Err(format!(
                        "{generator} is not constant {target} on {interval}"
                    ));
                }
                Ok(())
            }
            None => Err("infinite orbit without certificate".into()),
        },
        OrbitStatus::Unknown => Ok(()),
    }
}

pub fn verify_witness(p: &Presentation, w: &WitnessRecord) -> Result<(), String> {
    match w {
        WitnessRecord::Sensitivity {
            v,
            word: wd,
            beta,
            protected,
            x,
            y,
        } => crate::classifier::SensitivityWitness {
            v: *v,
            word: word(p, wd)?,
            beta: *beta,
            protected: protected.clone(),
            x: x.clone(),
            y: y.clone(),
        }
        .check(p),
        WitnessRecord::Expansivity {
            h_set,
            h,
            word: wd,
            w,
            x,
            y,
        } => {
            if x.first_difference(y) != Some(*w) {
                return Err(format!("patterns do not first differ at {w}"));
            }
            crate::classifier::ExpansivityWitness {
                word: word(p, wd)?,
                h: *h,
                w: *w,
                x: x.clone(),
                y: y.clone(),
            }
            .check(p, h_set)
        }
    }
    .map_err(|e| format!("witness: {e}"))
}
