//! Elimination certificates and their re-verification.

use std::collections::BTreeMap;
use std::path::Path;

use frey_core::arith::Sieve;
use frey_core::eliminate::FormData;
use frey_core::frey::FreyKind;
use frey_core::numfield::{EmbeddingSearch, Embeddings};
use rand::rngs::StdRng;
use rand::SeedableRng;
use serde::{Deserialize, Serialize};

use crate::cache::{CounterPool, SharedCache};
use crate::error::{io_err, Error, Result};
use crate::prove::{bound_entry, family_key, frey_from_json, level_from_json, load_space, Tables};
use crate::schema::LevelJson;

pub const CERTIFICATE_FORMAT: &str = "frey-certificate/1";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tool {
    pub name: String,
    pub version: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FixtureHash {
    /// Relative to the fixture root.
    pub path: String,
    pub sha256: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FreyJson {
    pub kind: String,
    /// Coordinates of the twist in the basis 1, w, w^2.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundEntry {
    pub zero: bool,
    /// Number of distinct factors.
    pub terms: usize,
    /// SHA-256 of the decimal value of the product.
    pub value_sha256: String,
    /// Admissible primes p >= 5, p != 7 dividing the bound (plus q itself).
    pub primes: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlanEntry {
    pub q: u64,
    pub mode: String,
    pub survivors_after: Vec<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bound: Option<BoundEntry>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Elimination {
    pub q: u64,
    pub refined: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FormEntry {
    pub label: String,
    pub fingerprint: String,
    pub degree: usize,
    /// eliminated | eliminated-by-twist-rule | self-survivor | survives | excluded | inconclusive
    pub status: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub designated: Option<String>,
    pub survivors: Vec<u64>,
    pub all_survive: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cofactor_sha256: Option<String>,
    pub equal_to_aux: Vec<u64>,
    pub eliminated_by: BTreeMap<String, Elimination>,
    pub plans: Vec<PlanEntry>,
    pub caveats: Vec<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl FormEntry {
    pub fn settled(&self, allow_self: bool) -> bool {
        match self.status.as_str() {
            "eliminated" | "eliminated-by-twist-rule" | "excluded" => true,
            "self-survivor" => allow_self,
            _ => false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CaseEntry {
    pub case: String,
    pub frey: FreyJson,
    pub level: LevelJson,
    pub chi7_twist: bool,
    pub technique: String,
    pub aux_primes: Vec<u64>,
    pub imported_facts: Vec<String>,
    pub forms: Vec<FormEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Certificate {
    pub format: String,
    pub theorem: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub route: Option<String>,
    pub tool: Tool,
    pub fixtures: Vec<FixtureHash>,
    pub max_enum: u64,
    pub sieve_bound: u64,
    pub cases: Vec<CaseEntry>,
    /// complete | incomplete
    pub conclusion: String,
}

impl Certificate {
    pub fn is_complete(&self, allow_self: bool) -> bool {
        self.cases.iter().all(|c| c.forms.iter().all(|f| f.settled(allow_self)))
    }

    pub fn render(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }

    pub fn parse(text: &str) -> Result<Self> {
        let c: Certificate = serde_json::from_str(text)?;
        if c.format != CERTIFICATE_FORMAT {
            return Err(Error::Schema(format!("unknown certificate format {:?}", c.format)));
        }
        Ok(c)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Certificate::parse(&std::fs::read_to_string(path).map_err(io_err(path))?)
    }

    /// (label, status, designated) of every form not eliminated.
    pub fn survivors(&self) -> Vec<(String, String, Option<String>)> {
        self.cases
            .iter()
            .flat_map(|c| c.forms.iter())
            .filter(|f| !f.status.starts_with("eliminated"))
            .map(|f| (f.label.clone(), f.status.clone(), f.designated.clone()))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyReport {
    pub fixtures_checked: usize,
    pub bounds_total: usize,
    pub bounds_rechecked: usize,
}

/// Checks fixture hashes and the conclusion, then recomputes a seeded tenth of the bounds.
pub fn verify(cert: &Certificate, fixtures: &Path, seed: u64) -> Result<VerifyReport> {
    for f in &cert.fixtures {
        let path = fixtures.join(&f.path);
        let bytes = std::fs::read(&path).map_err(io_err(&path))?;
        if crate::prove::hash_bytes(&bytes) != f.sha256 {
            return Err(Error::Verification(format!("fixture {} changed", f.path)));
        }
    }
    let theorem = crate::prove::Theorem::parse(&cert.theorem)
        .ok_or_else(|| Error::Schema(format!("unknown theorem {:?}", cert.theorem)))?;
    let complete = cert.is_complete(theorem.allows_self_survivors());
    if (cert.conclusion == "complete") != complete {
        return Err(Error::Verification(format!("conclusion {:?} does not match the form statuses", cert.conclusion)));
    }
    // (case index, form index, plan index) of every recorded bound.
    let mut all = Vec::new();
    for (ci, c) in cert.cases.iter().enumerate() {
        for (fi, f) in c.forms.iter().enumerate() {
            for (pi, p) in f.plans.iter().enumerate() {
                if p.bound.is_some() {
                    all.push((ci, fi, pi));
                }
            }
        }
    }
    let want = if all.is_empty() { 0 } else { all.len().div_ceil(10) };
    let mut rng = StdRng::seed_from_u64(seed);
    let mut picked: Vec<(usize, usize, usize)> =
        rand::seq::index::sample(&mut rng, all.len(), want).into_iter().map(|i| all[i]).collect();
    picked.sort_unstable();
    let pool = CounterPool::new(3, cert.max_enum);
    let cache = SharedCache::new();
    let sieve = Sieve::new(cert.sieve_bound);
    let mut spaces = BTreeMap::new();
    for &(ci, fi, pi) in &picked {
        let case = &cert.cases[ci];
        let form = &case.forms[fi];
        let plan = &form.plans[pi];
        let level = level_from_json(&case.level)?;
        if !spaces.contains_key(&level) {
            spaces.insert(level, load_space(fixtures, &level)?.space);
        }
        let space = &spaces[&level];
        let rec = space
            .records
            .iter()
            .find(|r| r.label == form.label)
            .ok_or_else(|| Error::Verification(format!("form {} not in fixture", form.label)))?;
        let rec = if case.chi7_twist { frey_core::heckedata::chi7_twist(rec, &rec.label) } else { rec.clone() };
        let kind = frey_from_json(&case.frey)?;
        let roots = if kind == FreyKind::J {
            match frey_core::heckedata::contains_k(&rec, EmbeddingSearch::default()) {
                Embeddings::Found(r) => Some(r),
                _ => return Err(Error::Verification(format!("{}: K not found in the Hecke field", form.label))),
            }
        } else {
            None
        };
        let tables = Tables::build(&family_key(&kind), &[plan.q], &pool, &cache)?;
        let data = FormData::new(&rec);
        let b = tables.bound(&data, plan.q, roots.as_ref())?;
        let fresh = bound_entry(&b, plan.q, &sieve);
        if Some(&fresh) != plan.bound.as_ref() {
            return Err(Error::Verification(format!("bound of {} at q = {} differs", form.label, plan.q)));
        }
    }
    Ok(VerifyReport { fixtures_checked: cert.fixtures.len(), bounds_total: all.len(), bounds_rechecked: picked.len() })
}
