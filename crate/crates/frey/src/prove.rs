//! Replays a theorem's case analysis against fixture spaces and assembles a certificate.

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use frey_core::arith::Sieve;
use frey_core::eliminate::{
    bound_e, bound_f, bound_j, survivor_sweep, AuxiliaryPrimePlan, Bound, ETable, FTable, Family, FormData,
    GaloisSubset, JTable, JVariant, PlanMode, PrimeStatus, SurvivorReport,
};
use frey_core::ffield::DEFAULT_CAP;
use frey_core::frey::{route_descriptor, CaseDescriptor, FreyKind, Level, Route, SevenCase, Technique, TwoCase};
use frey_core::heckedata::{chi7_twist, contains_k, detect_twist_pairs, fingerprint, BaseField, NewformRecord};
use frey_core::numfield::{split_prime, EmbeddingSearch, Embeddings, KElement, NFElement, PrimeKey};
use frey_core::BigInt;
use num_traits::One;
use rayon::prelude::*;
use sha2::{Digest, Sha256};

use crate::cache::{CounterPool, SharedCache};
use crate::certificate::{
    BoundEntry, CaseEntry, Certificate, FixtureHash, FormEntry, FreyJson, PlanEntry, Tool, CERTIFICATE_FORMAT,
};
use crate::error::{io_err, Error, Result};
use crate::schema::{fixture_name, fixture_path, fixture_subdir, LevelJson, Space};
use crate::tables;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Theorem {
    MainElliptic,
    MainJmax,
    MainFastest,
    OverQ,
    OtherPart1,
    OtherPart2,
}

impl Theorem {
    pub const ALL: [Theorem; 6] = [
        Theorem::MainElliptic,
        Theorem::MainJmax,
        Theorem::MainFastest,
        Theorem::OverQ,
        Theorem::OtherPart1,
        Theorem::OtherPart2,
    ];

    pub fn id(&self) -> &'static str {
        match self {
            Theorem::MainElliptic => "main-elliptic",
            Theorem::MainJmax => "main-jmax",
            Theorem::MainFastest => "main-fastest",
            Theorem::OverQ => "overQ",
            Theorem::OtherPart1 => "other-part1",
            Theorem::OtherPart2 => "other-part2",
        }
    }

    pub fn parse(s: &str) -> Option<Theorem> {
        Theorem::ALL.into_iter().find(|t| t.id() == s)
    }

    /// The route a theorem id fixes, if any.
    pub fn implied_route(&self) -> Option<Route> {
        match self {
            Theorem::MainElliptic => Some(Route::EllipticOnly),
            Theorem::MainJmax => Some(Route::JMax),
            Theorem::MainFastest => Some(Route::Fastest),
            _ => None,
        }
    }

    /// Whether forms with identically vanishing bounds are part of the expected conclusion.
    pub fn allows_self_survivors(&self) -> bool {
        matches!(self, Theorem::OverQ | Theorem::OtherPart2)
    }
}

pub fn route_name(r: Route) -> &'static str {
    match r {
        Route::EllipticOnly => "elliptic-only",
        Route::JMax => "j-max",
        Route::Fastest => "fastest",
    }
}

pub fn parse_route(s: &str) -> Option<Route> {
    [Route::EllipticOnly, Route::JMax, Route::Fastest].into_iter().find(|r| route_name(*r) == s)
}

/// Auxiliary primes q <= 40 with q != 2, 7 and q != 1 mod 7, at which E has good reduction.
pub const OVERQ_AUX_PRIMES: [u64; 9] = [3, 5, 11, 13, 17, 19, 23, 31, 37];

pub const DEFAULT_AUX_PRIMES: [u64; 7] = [5, 11, 13, 17, 29, 41, 83];

#[derive(Debug, Clone)]
pub struct ProveOptions {
    pub fixtures: PathBuf,
    /// None selects the theorem's default list.
    pub aux_primes: Option<Vec<u64>>,
    pub max_enum: u64,
    pub sieve_bound: u64,
}

impl Default for ProveOptions {
    fn default() -> Self {
        ProveOptions {
            fixtures: PathBuf::from("fixtures"),
            aux_primes: None,
            max_enum: DEFAULT_CAP,
            sieve_bound: 100_000,
        }
    }
}

/// One elimination task: a family of Frey objects against the newforms at one level.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Job {
    pub case: String,
    pub frey: FreyKind,
    pub level: Level,
    pub chi7_twist: bool,
    pub technique: Technique,
    pub imported_facts: Vec<String>,
}

const FACT_EXPONENTS: &str = "n = p prime, p >= 5, p != 7: exponents 2, 3, 4 and 7 are settled by earlier results";
const FACT_MODULARITY: &str =
    "modularity and level lowering: the mod p representation arises from a newform at the Serre level";
const FACT_IRRED_E: &str = "the mod p representation of E is irreducible for p >= 5 (potentially good reduction at 2)";
const FACT_IRRED_F: &str =
    "the mod p representation of F is irreducible for p = 11 and p >= 17; p = 5, 13 are handled separately";
const FACT_J_LEVEL: &str = "semistability and inertia of J at q2 and q7 fix the level and the chi_7 twist";
const FACT_TWIST_RULE: &str =
    "a form whose chi_7 twist has level prime to q7 cannot match J: the mod p representation of J is ramified at q7";

fn facts_for(kind: &FreyKind) -> Vec<String> {
    let mut v = vec![FACT_EXPONENTS.to_string(), FACT_MODULARITY.to_string()];
    match kind {
        FreyKind::E => v.push(FACT_IRRED_E.to_string()),
        FreyKind::F { .. } => v.push(FACT_IRRED_F.to_string()),
        FreyKind::J => v.push(FACT_J_LEVEL.to_string()),
    }
    v
}

fn job_from_step(step: frey_core::frey::PlanStep) -> Job {
    Job {
        case: step.case.to_string(),
        imported_facts: facts_for(&step.frey),
        frey: step.frey,
        level: step.level,
        chi7_twist: step.chi7_twist,
        technique: step.technique,
    }
}

/// The jobs of a theorem, in certificate order.
pub fn plan(theorem: Theorem, route: Option<Route>) -> Result<Vec<Job>> {
    use SevenCase::*;
    use TwoCase::*;
    let e_job = |case: &str, n: u64| Job {
        case: case.to_string(),
        frey: FreyKind::E,
        level: Level::Rational(n),
        chi7_twist: false,
        technique: Technique::ClassicalE,
        imported_facts: facts_for(&FreyKind::E),
    };
    Ok(match theorem {
        Theorem::OverQ => vec![e_job("4|ab", 196), e_job("4∤ab", 392)],
        Theorem::MainElliptic | Theorem::MainJmax | Theorem::MainFastest => {
            let route = route.or(theorem.implied_route()).unwrap();
            let mut jobs = Vec::new();
            for case in CaseDescriptor::all(3) {
                for step in route_descriptor(&case, route)? {
                    jobs.push(job_from_step(step));
                }
            }
            jobs
        }
        Theorem::OtherPart1 => {
            // ab odd when 7 does not divide a + b, every 2-adic case otherwise.
            let cases = [(OddAb, NotDividing), (OddAb, Dividing), (TwoExact, Dividing), (FourDivides, Dividing)];
            let mut jobs = Vec::new();
            for (two, seven) in cases {
                let case = CaseDescriptor::new(1, two, seven)?;
                for step in route_descriptor(&case, Route::EllipticOnly)? {
                    jobs.push(job_from_step(step));
                }
            }
            jobs
        }
        Theorem::OtherPart2 => vec![Job {
            case: "d=1, 7|a+b".to_string(),
            frey: FreyKind::J,
            level: Level::k(2, 0, 2),
            chi7_twist: false,
            technique: Technique::TraceSetJ,
            imported_facts: facts_for(&FreyKind::J),
        }],
    })
}

/// Auxiliary primes of a job: those of the options minus the primes where the family is always bad.
pub fn aux_primes_for(job: &Job, opts: &ProveOptions) -> Vec<u64> {
    let default: &[u64] = if job.frey == FreyKind::E { &OVERQ_AUX_PRIMES } else { &DEFAULT_AUX_PRIMES };
    let list = opts.aux_primes.as_deref().unwrap_or(default);
    let excluded: &[u64] = match job.frey {
        FreyKind::E => &[2, 7],
        _ => &[2, 3, 7],
    };
    let mut out: Vec<u64> = list
        .iter()
        .copied()
        .filter(|q| frey_core::arith::is_prime(*q) && !excluded.contains(q) && !job.level.divisible_by(*q))
        .collect();
    out.sort_unstable();
    out.dedup();
    out
}

// ---------------------------------------------------------------------------
// Tables

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum FamilyKey {
    E,
    F(KElement),
    J,
}

pub fn family_key(kind: &FreyKind) -> FamilyKey {
    match kind {
        FreyKind::E => FamilyKey::E,
        FreyKind::F { delta } => FamilyKey::F(delta.clone()),
        FreyKind::J => FamilyKey::J,
    }
}

#[derive(Debug, Clone)]
pub enum Tables {
    E(BTreeMap<u64, ETable>),
    F(BTreeMap<u64, FTable>),
    J(BTreeMap<u64, JTable>),
}

impl Tables {
    pub fn build(key: &FamilyKey, qs: &[u64], pool: &CounterPool, cache: &SharedCache) -> Result<Tables> {
        Ok(match key {
            FamilyKey::E => Tables::E(tables::e_tables(qs, pool, cache)?),
            FamilyKey::F(delta) => Tables::F(tables::f_tables(qs, delta, pool, cache)?),
            FamilyKey::J => Tables::J(tables::j_tables(qs, pool, cache)?),
        })
    }

    pub fn family(&self) -> Family<'_> {
        match self {
            Tables::E(t) => Family::E(t),
            Tables::F(t) => Family::F(t),
            Tables::J(t) => Family::J(t),
        }
    }

    /// The plain bound at q, with the identity Galois subset and the first root of K's cubic.
    pub fn bound(&self, data: &FormData, q: u64, roots: Option<&[NFElement; 3]>) -> Result<Bound> {
        let missing = || Error::Verification(format!("no table at q = {}", q));
        Ok(match self {
            Tables::E(t) => bound_e(data, t.get(&q).ok_or_else(missing)?)?,
            Tables::F(t) => bound_f(data, t.get(&q).ok_or_else(missing)?)?,
            Tables::J(t) => {
                let theta = if split_prime(q).len() == 3 { roots.map(|r| &r[0]) } else { None };
                bound_j(data, t.get(&q).ok_or_else(missing)?, GaloisSubset::Identity, JVariant::Plain, theta)?
            }
        })
    }
}

pub fn hash_bound(b: &Bound) -> String {
    hex::encode(Sha256::digest(b.value().to_string().as_bytes()))
}

pub fn hash_bytes(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub fn bound_entry(b: &Bound, q: u64, sieve: &Sieve) -> BoundEntry {
    let s = frey_core::eliminate::Survivors::from_bound(b, q, sieve);
    BoundEntry {
        zero: b.zero,
        terms: b.terms.len(),
        value_sha256: hash_bound(b),
        primes: s.primes.iter().copied().collect(),
    }
}

// ---------------------------------------------------------------------------
// Fixtures

pub struct LoadedSpace {
    pub space: Space,
    pub fixture: FixtureHash,
}

pub fn load_space(root: &Path, level: &Level) -> Result<LoadedSpace> {
    let path = fixture_path(root, level);
    let bytes = std::fs::read(&path).map_err(io_err(&path))?;
    let text = String::from_utf8(bytes.clone()).map_err(|e| Error::Schema(e.to_string()))?;
    let space = Space::parse(&text, frey_core::heckedata::Provenance::Fixture)?;
    if &space.level != level {
        return Err(Error::Schema(format!("{} holds level {} not {}", path.display(), space.level, level)));
    }
    let rel = format!("{}/{}", fixture_subdir(level), fixture_name(level));
    Ok(LoadedSpace { space, fixture: FixtureHash { path: rel, sha256: hash_bytes(&bytes) } })
}

/// Levels of the jobs whose fixture files are absent.
pub fn missing_levels(jobs: &[Job], root: &Path) -> Vec<String> {
    let levels: BTreeSet<Level> = jobs.iter().map(|j| j.level).collect();
    levels
        .into_iter()
        .filter(|l| !fixture_path(root, l).exists())
        .map(|l| format!("{} ({})", l, fixture_path(root, &l).display()))
        .collect()
}

// ---------------------------------------------------------------------------
// Sweeps

struct Candidate {
    record: Arc<NewformRecord>,
    roots: Option<[NFElement; 3]>,
    exclusion: Option<String>,
}

fn candidates(job: &Job, space: &Space) -> Vec<Candidate> {
    space
        .records
        .par_iter()
        .map(|r| {
            let rec = if job.chi7_twist { chi7_twist(r, &r.label) } else { r.clone() };
            let mut c = Candidate { record: Arc::new(rec), roots: None, exclusion: None };
            if job.frey == FreyKind::J {
                match contains_k(&c.record, EmbeddingSearch::default()) {
                    Embeddings::Found(roots) => c.roots = Some(roots),
                    Embeddings::Absent(_) => c.exclusion = Some("K is not contained in the Hecke field".into()),
                    Embeddings::Inconclusive => {
                        c.exclusion = Some("inconclusive: K in the Hecke field undecided".into())
                    }
                }
            }
            c
        })
        .collect()
}

/// Names of the rational curves E_{1,0}, E_{1,-1} when the form's eigenvalues agree with them.
fn e_curve_name(rec: &NewformRecord, tables: &Tables) -> Option<String> {
    let Tables::E(t) = tables else { return None };
    if t.is_empty() {
        return None;
    }
    for (name, class) in [("E(1,0)", 1usize), ("E(1,-1)", usize::MAX)] {
        let agrees = t.iter().all(|(q, table)| {
            let idx = if class == usize::MAX { *q as usize } else { class };
            match (table.traces[idx], rec.eigenvalue_q(*q)) {
                (Some(a), Ok(x)) => x.is_rational() && x.coords[0] == BigInt::from(a).into(),
                _ => false,
            }
        });
        if agrees {
            return Some(name.to_string());
        }
    }
    None
}

fn form_entry(
    job: &Job,
    cand: &Candidate,
    tables: &Tables,
    qs: &[u64],
    sieve: &Sieve,
    partners: &[NewformRecord],
    allow_self: bool,
) -> Result<FormEntry> {
    let rec = &cand.record;
    let mut entry = FormEntry {
        label: rec.label.clone(),
        fingerprint: fingerprint(rec),
        degree: rec.degree(),
        status: String::new(),
        designated: None,
        survivors: vec![],
        all_survive: false,
        cofactor_sha256: None,
        equal_to_aux: vec![],
        eliminated_by: BTreeMap::new(),
        plans: vec![],
        caveats: vec![],
        note: None,
    };
    if let Some(why) = &cand.exclusion {
        entry.status = if why.starts_with("inconclusive") { "inconclusive" } else { "excluded" }.into();
        entry.note = Some(why.clone());
        return Ok(entry);
    }
    let mut plans: Vec<AuxiliaryPrimePlan> = qs.iter().map(|&q| AuxiliaryPrimePlan::standard(q)).collect();
    plans.extend(qs.iter().map(|&q| AuxiliaryPrimePlan::refined(q)));
    let report: SurvivorReport = survivor_sweep(rec, cand.roots.as_ref(), tables.family(), &plans, sieve)?;
    let data = FormData::new(rec);
    for (q, mode, after) in &report.trail {
        let bound = if *mode == PlanMode::Standard {
            Some(bound_entry(&tables.bound(&data, *q, cand.roots.as_ref())?, *q, sieve))
        } else {
            None
        };
        entry.plans.push(PlanEntry { q: *q, mode: mode_name(*mode).into(), survivors_after: after.clone(), bound });
    }
    entry.survivors = report.survivors.primes.iter().copied().collect();
    entry.all_survive = report.survivors.all;
    if !report.survivors.cofactor.is_one() {
        entry.cofactor_sha256 = Some(hash_bytes(report.survivors.cofactor.to_string().as_bytes()));
    }
    entry.equal_to_aux = report.survivors.equal_to_aux.iter().copied().collect();
    for (p, st) in &report.status {
        if let PrimeStatus::EliminatedBy { q, refined } = st {
            entry.eliminated_by.insert(p.to_string(), crate::certificate::Elimination { q: *q, refined: *refined });
        }
    }
    entry.caveats = report.caveats.clone();
    entry.status = if report.eliminated() {
        "eliminated".into()
    } else if report.survivors.all {
        entry.designated = e_curve_name(rec, tables);
        if allow_self { "self-survivor" } else { "survives" }.into()
    } else {
        "survives".into()
    };
    if entry.status == "survives" && job.frey == FreyKind::J && !partners.is_empty() {
        if let Ok((pairs, _)) = detect_twist_pairs(std::slice::from_ref(&**rec), partners) {
            if let Some(pair) = pairs.iter().find(|p| p.cross_level) {
                entry.status = "eliminated-by-twist-rule".into();
                entry.note = Some(format!("chi_7 twist of {} has level prime to q7", pair.second));
            }
        }
    }
    Ok(entry)
}

pub fn mode_name(m: PlanMode) -> &'static str {
    match m {
        PlanMode::Standard => "standard",
        PlanMode::Symmetric => "symmetric",
        PlanMode::TwistPair => "twist-pair",
        PlanMode::Refined => "refined",
    }
}

fn frey_json(kind: &FreyKind) -> FreyJson {
    match kind {
        FreyKind::E => FreyJson { kind: "E".into(), delta: None },
        FreyKind::F { delta } => {
            FreyJson { kind: "F".into(), delta: Some(delta.coords.iter().map(|c| c.to_string()).collect()) }
        }
        FreyKind::J => FreyJson { kind: "J".into(), delta: None },
    }
}

pub fn frey_from_json(f: &FreyJson) -> Result<FreyKind> {
    match (f.kind.as_str(), &f.delta) {
        ("E", None) => Ok(FreyKind::E),
        ("J", None) => Ok(FreyKind::J),
        ("F", Some(d)) if d.len() == 3 => {
            let c: Vec<frey_core::BigRational> = d
                .iter()
                .map(|s| s.parse().map_err(|_| Error::Schema(format!("bad coordinate {}", s))))
                .collect::<Result<_>>()?;
            Ok(FreyKind::F { delta: KElement::new(c[0].clone(), c[1].clone(), c[2].clone()) })
        }
        _ => Err(Error::Schema(format!("unknown Frey object {:?}", f))),
    }
}

pub fn level_json(l: &Level) -> LevelJson {
    crate::schema::level_to_json(l)
}

pub fn level_from_json(l: &LevelJson) -> Result<Level> {
    crate::schema::level_from_json_any(l)
}

pub fn technique_name(t: Technique) -> &'static str {
    match t {
        Technique::ClassicalE => "classical-E",
        Technique::StandardF => "standard-F",
        Technique::TraceSetJ => "trace-set-J",
    }
}

/// Runs a theorem; fails with `MissingData` when a level's fixture is absent.
pub fn prove(theorem: Theorem, route: Option<Route>, opts: &ProveOptions) -> Result<Certificate> {
    let route = match theorem.implied_route() {
        Some(r) => Some(route.unwrap_or(r)),
        None => None,
    };
    let jobs = plan(theorem, route)?;
    let missing = missing_levels(&jobs, &opts.fixtures);
    if !missing.is_empty() {
        return Err(Error::MissingData(missing));
    }
    let mut spaces: BTreeMap<Level, LoadedSpace> = BTreeMap::new();
    for j in &jobs {
        if !spaces.contains_key(&j.level) {
            spaces.insert(j.level, load_space(&opts.fixtures, &j.level)?);
        }
    }
    // Spaces of twist partners with level prime to q7, when present.
    let mut partners: BTreeMap<Level, Vec<NewformRecord>> = BTreeMap::new();
    for j in jobs.iter().filter(|j| j.frey == FreyKind::J) {
        if let Level::K { q2, q3, q7 } = j.level {
            let pl = Level::k(q2, q3, 0);
            if q7 > 0 && fixture_path(&opts.fixtures, &pl).exists() && !partners.contains_key(&j.level) {
                let loaded = load_space(&opts.fixtures, &pl)?;
                partners.insert(j.level, loaded.space.records.clone());
                spaces.entry(pl).or_insert(loaded);
            }
        }
    }
    let job_qs: Vec<Vec<u64>> = jobs.iter().map(|j| aux_primes_for(j, opts)).collect();
    for (j, qs) in jobs.iter().zip(&job_qs) {
        for r in &spaces[&j.level].space.records {
            for &q in qs {
                let keys: Vec<(PrimeKey, u64)> = match r.base {
                    BaseField::Q => vec![(PrimeKey { q, index: 0 }, q)],
                    BaseField::K => split_prime(q).iter().map(|p| (p.key(), p.norm())).collect(),
                };
                for (key, norm) in keys {
                    if r.eigenvalue(&key).is_err() {
                        return Err(Error::Incomplete {
                            label: r.label.clone(),
                            have: r.complete_below_norm,
                            need: norm + 1,
                        });
                    }
                }
            }
        }
    }
    let pool = CounterPool::new(3, opts.max_enum);
    let cache = SharedCache::new();
    let mut union: BTreeMap<FamilyKey, BTreeSet<u64>> = BTreeMap::new();
    for (j, qs) in jobs.iter().zip(&job_qs) {
        union.entry(family_key(&j.frey)).or_default().extend(qs.iter().copied());
    }
    let mut built: BTreeMap<FamilyKey, Tables> = BTreeMap::new();
    for (key, qs) in &union {
        let qs: Vec<u64> = qs.iter().copied().collect();
        built.insert(key.clone(), Tables::build(key, &qs, &pool, &cache)?);
    }
    let sieve = Sieve::new(opts.sieve_bound);
    let allow_self = theorem.allows_self_survivors();
    let cases: Vec<CaseEntry> = jobs
        .par_iter()
        .zip(job_qs.par_iter())
        .map(|(job, qs)| -> Result<CaseEntry> {
            let tables = &built[&family_key(&job.frey)];
            let restricted = restrict(tables, qs);
            let space = &spaces[&job.level].space;
            let cands = candidates(job, space);
            let no_partners = Vec::new();
            let partner_records = partners.get(&job.level).unwrap_or(&no_partners);
            let mut forms: Vec<FormEntry> = cands
                .par_iter()
                .map(|c| form_entry(job, c, &restricted, qs, &sieve, partner_records, allow_self))
                .collect::<Result<_>>()?;
            forms.sort_by(|a, b| (&a.fingerprint, &a.label).cmp(&(&b.fingerprint, &b.label)));
            let mut facts = job.imported_facts.clone();
            if forms.iter().any(|f| f.status == "eliminated-by-twist-rule") {
                facts.push(FACT_TWIST_RULE.to_string());
            }
            Ok(CaseEntry {
                case: job.case.clone(),
                frey: frey_json(&job.frey),
                level: level_json(&job.level),
                chi7_twist: job.chi7_twist,
                technique: technique_name(job.technique).into(),
                aux_primes: qs.clone(),
                imported_facts: facts,
                forms,
            })
        })
        .collect::<Result<_>>()?;
    let mut fixtures: Vec<FixtureHash> = spaces.values().map(|s| s.fixture.clone()).collect();
    fixtures.sort_by(|a, b| a.path.cmp(&b.path));
    let mut cert = Certificate {
        format: CERTIFICATE_FORMAT.into(),
        theorem: theorem.id().into(),
        route: route.map(|r| route_name(r).to_string()),
        tool: Tool { name: "frey".into(), version: env!("CARGO_PKG_VERSION").into() },
        fixtures,
        max_enum: opts.max_enum,
        sieve_bound: opts.sieve_bound,
        cases,
        conclusion: String::new(),
    };
    cert.conclusion = if cert.is_complete(allow_self) { "complete" } else { "incomplete" }.into();
    Ok(cert)
}

fn restrict(tables: &Tables, qs: &[u64]) -> Tables {
    fn pick<T: Clone>(m: &BTreeMap<u64, T>, qs: &[u64]) -> BTreeMap<u64, T> {
        qs.iter().filter_map(|q| m.get(q).map(|t| (*q, t.clone()))).collect()
    }
    match tables {
        Tables::E(m) => Tables::E(pick(m, qs)),
        Tables::F(m) => Tables::F(pick(m, qs)),
        Tables::J(m) => Tables::J(pick(m, qs)),
    }
}
