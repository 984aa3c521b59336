//! Brute-force checks on fully finite instances: `|Γ| = m`, `|X| = k`,
//! generators given as tables. Properties are evaluated straight from their
//! definitions over every configuration and compared with the
//! combinatorial criteria on the index semigroup.
//!
//! Sensitivity is not checked here: with finite `Γ` the space `X^Γ` is
//! finite and discrete, so `{x}` is a neighborhood of `x` and no instance is
//! sensitive (see [`sensitive_definition`]).

use std::collections::{BTreeSet, HashSet, VecDeque};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Exhaustive pair scans enumerate at most this many configurations.
pub const EXHAUSTIVE_CONFIGS: usize = 4096;

pub type Table = Vec<usize>;
pub type FiniteConfig = Vec<u32>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("{configs} configurations exceed the exhaustive limit of {limit}")]
    Budget { configs: u128, limit: usize },
    #[error("invalid instance: {0}")]
    Invalid(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FiniteInstance {
    pub m: usize,
    pub k: u32,
    pub tables: Vec<Table>,
}

impl FiniteInstance {
    pub fn new(m: usize, k: u32, tables: Vec<Table>) -> Result<Self, OracleError> {
        if m == 0 || k < 2 {
            return Err(OracleError::Invalid(format!(
                "need m >= 1 and k >= 2, got m={m}, k={k}"
            )));
        }
        for t in &tables {
            if t.len() != m || t.iter().any(|&v| v >= m) {
                return Err(OracleError::Invalid(format!(
                    "table {t:?} is not a map on 0..{m}"
                )));
            }
        }
        Ok(FiniteInstance { m, k, tables })
    }

    fn config_count(&self) -> u128 {
        (self.k as u128).saturating_pow(self.m as u32)
    }

    /// Every configuration, in lexicographic order.
    pub fn configs(&self) -> Result<Vec<FiniteConfig>, OracleError> {
        let count = self.config_count();
        if count > EXHAUSTIVE_CONFIGS as u128 {
            return Err(OracleError::Budget {
                configs: count,
                limit: EXHAUSTIVE_CONFIGS,
            });
        }
        Ok((0..count as u64).map(|c| self.decode(c)).collect())
    }

    fn decode(&self, mut c: u64) -> FiniteConfig {
        let mut cfg = vec![0; self.m];
        for slot in cfg.iter_mut().rev() {
            *slot = (c % self.k as u64) as u32;
            c /= self.k as u64;
        }
        cfg
    }
}

pub fn identity_table(m: usize) -> Table {
    (0..m).collect()
}

/// `σ_φ`: `result[i] = cfg[table[i]]`.
pub fn apply_shift(table: &[usize], cfg: &[u32]) -> FiniteConfig {
    table.iter().map(|&j| cfg[j]).collect()
}

/// `f ∘ g` (apply `g` first).
pub fn compose_tables(f: &[usize], g: &[usize]) -> Table {
    g.iter().map(|&j| f[j]).collect()
}

/// The semigroup generated by the tables together with the identity,
/// identity first.
pub fn enumerate_semigroup(inst: &FiniteInstance) -> Vec<Table> {
    let id = identity_table(inst.m);
    let mut seen: HashSet<Table> = HashSet::from([id.clone()]);
    let mut out = vec![id];
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        for g in &inst.tables {
            let next = compose_tables(g, &out[i]);
            if seen.insert(next.clone()) {
                queue.push_back(out.len());
                out.push(next);
            }
        }
    }
    out
}

/// `T·H` by table closure.
pub fn orbit_of_set(inst: &FiniteInstance, h: &[usize]) -> BTreeSet<usize> {
    let mut seen: BTreeSet<usize> = h.iter().copied().collect();
    let mut queue: VecDeque<usize> = seen.iter().copied().collect();
    while let Some(t) = queue.pop_front() {
        for g in &inst.tables {
            if seen.insert(g[t]) {
                queue.push_back(g[t]);
            }
        }
    }
    seen
}

fn agree_on(x: &[u32], y: &[u32], coords: &[usize]) -> bool {
    coords.iter().all(|&c| x[c] == y[c])
}

/// Images `σ_s x` for every semigroup element `s` and configuration `x`.
fn shifted_images(semigroup: &[Table], configs: &[FiniteConfig]) -> Vec<Vec<FiniteConfig>> {
    semigroup
        .iter()
        .map(|s| configs.iter().map(|x| apply_shift(s, x)).collect())
        .collect()
}

/// Expansivity with the entourage `α_H`, by definition: every pair of
/// distinct configurations is sent outside `α_H` by some element of `S`.
pub fn expansive_definition(inst: &FiniteInstance, h: &[usize]) -> Result<bool, OracleError> {
    let configs = inst.configs()?;
    let images = shifted_images(&enumerate_semigroup(inst), &configs);
    for i in 0..configs.len() {
        for j in i + 1..configs.len() {
            if !images.iter().any(|img| !agree_on(&img[i], &img[j], h)) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// [`expansive_definition`] on `samples` random pairs instead of all pairs.
/// Sound for `false` only.
pub fn expansive_definition_sampled(
    inst: &FiniteInstance,
    h: &[usize],
    samples: usize,
    seed: u64,
) -> bool {
    let semigroup = enumerate_semigroup(inst);
    let mut rng = Lcg::new(seed);
    for _ in 0..samples {
        let x: FiniteConfig = (0..inst.m)
            .map(|_| rng.below(inst.k as u64) as u32)
            .collect();
        let mut y = x.clone();
        let at = rng.below(inst.m as u64) as usize;
        y[at] = (y[at] + 1 + rng.below(inst.k as u64 - 1) as u32) % inst.k;
        if !semigroup
            .iter()
            .any(|s| !agree_on(&apply_shift(s, &x), &apply_shift(s, &y), h))
        {
            return false;
        }
    }
    true
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Crosscheck {
    pub definition: bool,
    pub combinatorial: bool,
    pub agree: bool,
}

impl Crosscheck {
    fn new(definition: bool, combinatorial: bool) -> Self {
        Crosscheck {
            definition,
            combinatorial,
            agree: definition == combinatorial,
        }
    }
}

/// Expansive with `α_H` by definition versus `T·H = Γ`.
pub fn expansive_crosscheck(inst: &FiniteInstance, h: &[usize]) -> Result<Crosscheck, OracleError> {
    let definition = expansive_definition(inst, h)?;
    let combinatorial = orbit_of_set(inst, h).len() == inst.m;
    Ok(Crosscheck::new(definition, combinatorial))
}

/// With `H = T·H₀`: every element of `S` keeps pairs that agree on `H`
/// agreeing on `H₀`. Returns the verdict and `H`.
pub fn entourage_modulus_check(
    inst: &FiniteInstance,
    h0: &[usize],
) -> Result<(bool, Vec<usize>), OracleError> {
    let h: Vec<usize> = orbit_of_set(inst, h0).into_iter().collect();
    let configs = inst.configs()?;
    let images = shifted_images(&enumerate_semigroup(inst), &configs);
    for i in 0..configs.len() {
        for j in i + 1..configs.len() {
            if !agree_on(&configs[i], &configs[j], &h) {
                continue;
            }
            if images.iter().any(|img| !agree_on(&img[i], &img[j], h0)) {
                return Ok((false, h));
            }
        }
    }
    Ok((true, h))
}

/// The enumerated semigroup is a group versus every generator is a
/// permutation.
pub fn distal_crosscheck(inst: &FiniteInstance) -> Crosscheck {
    let semigroup = enumerate_semigroup(inst);
    let id = identity_table(inst.m);
    let group = semigroup.iter().all(|a| {
        semigroup
            .iter()
            .any(|b| compose_tables(a, b) == id && compose_tables(b, a) == id)
    });
    let bijective = inst.tables.iter().all(|t| {
        let mut seen = vec![false; inst.m];
        t.iter().all(|&v| !std::mem::replace(&mut seen[v], true))
    });
    Crosscheck::new(group, bijective)
}

/// Sensitivity by definition with the discrete neighborhoods `{x}`: some
/// `α_H` such that every `x` has a `y` in `{x}` and `s` with
/// `(σ_s x, σ_s y) ∉ α_H`. Always false, since `y = x`.
pub fn sensitive_definition(inst: &FiniteInstance) -> Result<bool, OracleError> {
    let configs = inst.configs()?;
    let semigroup = enumerate_semigroup(inst);
    let all: Vec<usize> = (0..inst.m).collect();
    for mask in 0u32..(1 << inst.m) {
        let h: Vec<usize> = all
            .iter()
            .copied()
            .filter(|&c| mask >> c & 1 == 1)
            .collect();
        let sensitive = configs.iter().all(|x| {
            let neighborhood = configs.iter().filter(|y| agree_on(x, y, &all));
            neighborhood.into_iter().any(|y| {
                semigroup
                    .iter()
                    .any(|s| !agree_on(&apply_shift(s, x), &apply_shift(s, y), &h))
            })
        });
        if sensitive {
            return Ok(true);
        }
    }
    Ok(false)
}

/// 64-bit linear congruential generator:
/// `state ← state · 6364136223846793005 + 1442695040888963407 (mod 2^64)`,
/// seeded with `state = seed`. Each draw advances once and uses the high
/// 31 bits, `state >> 33`.
#[derive(Clone, Debug)]
pub struct Lcg {
    state: u64,
}

impl Lcg {
    pub const MULTIPLIER: u64 = 6364136223846793005;
    pub const INCREMENT: u64 = 1442695040888963407;

    pub fn new(seed: u64) -> Self {
        Lcg { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self
            .state
            .wrapping_mul(Self::MULTIPLIER)
            .wrapping_add(Self::INCREMENT);
        self.state >> 33
    }

    /// Draw reduced modulo `n`.
    pub fn below(&mut self, n: u64) -> u64 {
        self.next_u64() % n
    }
}

/// `g` tables of length `m`, entries drawn in order (table by table, index
/// by index) as `(state >> 33) mod m` from [`Lcg`].
pub fn random_instance(seed: u64, m: usize, k: u32, g: usize) -> FiniteInstance {
    let mut rng = Lcg::new(seed);
    let tables = (0..g)
        .map(|_| (0..m).map(|_| rng.below(m as u64) as usize).collect())
        .collect();
    FiniteInstance { m, k, tables }
}

/// Every instance with `1 ≤ m ≤ max_m`, the given `k`, and `1 ≤ g ≤ max_g`
/// generator tables (ordered, repetitions allowed).
pub fn exhaustive_instances(max_m: usize, k: u32, max_g: usize) -> Vec<FiniteInstance> {
    let mut out = Vec::new();
    for m in 1..=max_m {
        let tables: Vec<Table> = (0..m.pow(m as u32))
            .map(|mut c| {
                (0..m)
                    .map(|_| {
                        let v = c % m;
                        c /= m;
                        v
                    })
                    .collect()
            })
            .collect();
        for g in 1..=max_g {
            let mut idx = vec![0usize; g];
            loop {
                out.push(FiniteInstance {
                    m,
                    k,
                    tables: idx.iter().map(|&i| tables[i].clone()).collect(),
                });
                let mut pos = 0;
                while pos < g {
                    idx[pos] += 1;
                    if idx[pos] < tables.len() {
                        break;
                    }
                    idx[pos] = 0;
                    pos += 1;
                }
                if pos == g {
                    break;
                }
            }
        }
    }
    out
}

/// Every subset of `0..m`.
pub fn subsets(m: usize) -> Vec<Vec<usize>> {
    (0u32..1 << m)
        .map(|mask| (0..m).filter(|&c| mask >> c & 1 == 1).collect())
        .collect()
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepSummary {
    pub instances: usize,
    pub expansive_checks: usize,
    pub modulus_checks: usize,
    pub distal_checks: usize,
    pub disagreements: Vec<String>,
}

impl SweepSummary {
    pub fn run(&mut self, inst: &FiniteInstance) -> Result<(), OracleError> {
        self.instances += 1;
        for h in subsets(inst.m) {
            let c = expansive_crosscheck(inst, &h)?;
            self.expansive_checks += 1;
            if !c.agree {
                self.disagreements.push(format!(
                    "expansivity on {inst:?} with H={h:?}: definition {} vs T·H=Γ {}",
                    c.definition, c.combinatorial
                ));
            }
            let (ok, big_h) = entourage_modulus_check(inst, &h)?;
            self.modulus_checks += 1;
            if !ok {
                self.disagreements
                    .push(format!("modulus on {inst:?} with H0={h:?}, H={big_h:?}"));
            }
        }
        let d = distal_crosscheck(inst);
        self.distal_checks += 1;
        if !d.agree {
            self.disagreements.push(format!(
                "distality on {inst:?}: group {} vs bijective {}",
                d.definition, d.combinatorial
            ));
        }
        Ok(())
    }
}

/// Exhaustive sweep over `m ≤ max_m`, `g ≤ max_g`, all `H`.
pub fn exhaustive_sweep(max_m: usize, k: u32, max_g: usize) -> Result<SweepSummary, OracleError> {
    let mut summary = SweepSummary::default();
    for inst in exhaustive_instances(max_m, k, max_g) {
        summary.run(&inst)?;
    }
    Ok(summary)
}

/// `count` instances from consecutive seeds `seed, seed+1, …`, each with
/// `1 + (seed mod max_g)` generators.
pub fn random_sweep(
    seed: u64,
    count: usize,
    m: usize,
    k: u32,
    max_g: usize,
) -> Result<SweepSummary, OracleError> {
    let mut summary = SweepSummary::default();
    for i in 0..count as u64 {
        let s = seed.wrapping_add(i);
        let inst = random_instance(s, m, k, 1 + (s % max_g as u64) as usize);
        summary.run(&inst)?;
    }
    Ok(summary)
}
