//! The newform space JSON format.
//!
//! ```text
//! {"field": "Q" | "3.3.49.1",
//!  "level": {"N": int} | {"q2": int, "q3": int, "q7": int},
//!  "weight": [2] | [2, 2, 2],
//!  "forms": [{"label": str, "hecke_poly": [int...],
//!             "eigenvalues": [{"q": int, "f": int, "root": int | null, "ap": [[num, den]...]}...],
//!             "complete_below_norm": int}]}
//! ```
//!
//! Integers are unbounded; `ap` lists power-basis coordinates.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use frey_core::frey::Level;
use frey_core::heckedata::{prime_from_root, prime_of_key, BaseField, NewformRecord, Provenance};
use frey_core::numfield::{residue_degree, NFElement, NumberFieldSpec, PrimeKey};
use frey_core::{BigInt, BigRational};
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{io_err, Error, Result};

mod bigint_json {
    use super::*;
    use serde::de::Error as _;
    use serde::ser::Error as _;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
        if let Some(i) = v.to_i64() {
            return s.serialize_i64(i);
        }
        let n: serde_json::Number = v.to_string().parse().map_err(S::Error::custom)?;
        n.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<BigInt, D::Error> {
        let n = serde_json::Number::deserialize(d)?;
        let s = n.to_string();
        s.parse().map_err(|_| D::Error::custom(format!("{} is not an integer", s)))
    }
}

/// An unbounded JSON integer.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Int(#[serde(with = "bigint_json")] pub BigInt);

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LevelJson {
    #[serde(rename = "N", default, skip_serializing_if = "Option::is_none")]
    pub n: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q2: Option<u8>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q3: Option<u8>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q7: Option<u8>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EigenvalueJson {
    pub q: u64,
    pub f: u8,
    pub root: Option<u64>,
    pub ap: Vec<[Int; 2]>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FormJson {
    pub label: String,
    pub hecke_poly: Vec<Int>,
    pub eigenvalues: Vec<EigenvalueJson>,
    pub complete_below_norm: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceJson {
    pub field: String,
    pub level: LevelJson,
    pub weight: Vec<u32>,
    pub forms: Vec<FormJson>,
}

/// A validated newform space: all records share the base field and level.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Space {
    pub base: BaseField,
    pub level: Level,
    pub records: Vec<NewformRecord>,
}

fn level_from_json(l: &LevelJson, base: BaseField) -> Result<Level> {
    match (base, l) {
        (BaseField::Q, LevelJson { n: Some(n), q2: None, q3: None, q7: None }) => Ok(Level::Rational(*n)),
        (BaseField::K, LevelJson { n: None, q2: Some(a), q3: Some(b), q7: Some(c) }) => Ok(Level::k(*a, *b, *c)),
        _ => Err(Error::Schema(format!("level {:?} does not match base field {}", l, base.label()))),
    }
}

pub fn level_to_json(level: &Level) -> LevelJson {
    match *level {
        Level::Rational(n) => LevelJson { n: Some(n), q2: None, q3: None, q7: None },
        Level::K { q2, q3, q7 } => LevelJson { n: None, q2: Some(q2), q3: Some(q3), q7: Some(q7) },
    }
}

/// A level in either shape, without a base-field check.
pub fn level_from_json_any(l: &LevelJson) -> Result<Level> {
    match l {
        LevelJson { n: Some(_), .. } => level_from_json(l, BaseField::Q),
        _ => level_from_json(l, BaseField::K),
    }
}

fn form_from_json(f: &FormJson, base: BaseField, level: Level, provenance: Provenance) -> Result<NewformRecord> {
    let poly: Vec<BigInt> = f.hecke_poly.iter().map(|c| c.0.clone()).collect();
    let field = NumberFieldSpec::new(poly).map_err(|e| Error::Schema(format!("{}: {}", f.label, e)))?;
    let n = field.degree();
    let mut eigenvalues = BTreeMap::new();
    for ev in &f.eigenvalues {
        if !frey_core::arith::is_prime(ev.q) {
            return Err(Error::Schema(format!("{}: {} is not prime", f.label, ev.q)));
        }
        let key = match base {
            BaseField::Q => {
                if ev.f != 1 || ev.root.is_some() {
                    return Err(Error::Schema(format!("{}: prime {} over Q has f = 1 and no root", f.label, ev.q)));
                }
                PrimeKey { q: ev.q, index: 0 }
            }
            BaseField::K => {
                if ev.f != residue_degree(ev.q) {
                    return Err(Error::Schema(format!("{}: residue degree of {} is not {}", f.label, ev.q, ev.f)));
                }
                prime_from_root(ev.q, ev.root).map_err(|e| Error::Schema(format!("{}: {}", f.label, e)))?.key()
            }
        };
        if ev.ap.len() > n {
            return Err(Error::Schema(format!(
                "{}: a at {} has {} coordinates in degree {}",
                f.label,
                ev.q,
                ev.ap.len(),
                n
            )));
        }
        let mut coords = Vec::with_capacity(n);
        for [num, den] in &ev.ap {
            if den.0.is_zero() {
                return Err(Error::Schema(format!("{}: zero denominator at {}", f.label, ev.q)));
            }
            coords.push(BigRational::new(num.0.clone(), den.0.clone()));
        }
        if eigenvalues.insert(key, NFElement::new(&field, coords)).is_some() {
            return Err(Error::Schema(format!("{}: duplicate prime {}", f.label, ev.q)));
        }
    }
    let rec = NewformRecord {
        label: f.label.clone(),
        base,
        level,
        hecke_field: field,
        eigenvalues,
        complete_below_norm: f.complete_below_norm,
        provenance,
    };
    rec.validate()?;
    Ok(rec)
}

fn form_to_json(r: &NewformRecord) -> FormJson {
    let eigenvalues = r
        .eigenvalues
        .iter()
        .map(|(key, a)| {
            let (f, root) = match r.base {
                BaseField::Q => (1, None),
                BaseField::K => {
                    let pr = prime_of_key(key);
                    (pr.f, if pr.is_split() { pr.root } else { None })
                }
            };
            let ap = a.coords.iter().map(|c| [Int(c.numer().clone()), Int(c.denom().clone())]).collect();
            EigenvalueJson { q: key.q, f, root, ap }
        })
        .collect();
    FormJson {
        label: r.label.clone(),
        hecke_poly: r.hecke_field.poly.iter().cloned().map(Int).collect(),
        eigenvalues,
        complete_below_norm: r.complete_below_norm,
    }
}

impl Space {
    pub fn from_json(json: &SpaceJson, provenance: Provenance) -> Result<Self> {
        let base = match json.field.as_str() {
            "Q" => BaseField::Q,
            "3.3.49.1" => BaseField::K,
            other => return Err(Error::Schema(format!("unknown field {:?}", other))),
        };
        let expect = if base == BaseField::Q { 1 } else { 3 };
        if json.weight.len() != expect || json.weight.iter().any(|&w| w != 2) {
            return Err(Error::Schema(format!("weight {:?} is not parallel weight 2", json.weight)));
        }
        let level = level_from_json(&json.level, base)?;
        let records =
            json.forms.iter().map(|f| form_from_json(f, base, level, provenance)).collect::<Result<Vec<_>>>()?;
        Ok(Space { base, level, records })
    }

    pub fn to_json(&self) -> SpaceJson {
        SpaceJson {
            field: self.base.label().to_string(),
            level: level_to_json(&self.level),
            weight: vec![2; if self.base == BaseField::Q { 1 } else { 3 }],
            forms: self.records.iter().map(form_to_json).collect(),
        }
    }

    pub fn parse(text: &str, provenance: Provenance) -> Result<Self> {
        let json: SpaceJson = serde_json::from_str(text)?;
        Space::from_json(&json, provenance)
    }

    pub fn render(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&self.to_json())?)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(io_err(path))?;
        Space::parse(&text, Provenance::Fixture)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.render()? + "\n").map_err(io_err(path))
    }

    /// Fails unless every record covers all primes below `bound`.
    pub fn require_complete_below(&self, bound: u64) -> Result<()> {
        for r in &self.records {
            if r.complete_below_norm < bound {
                return Err(Error::Incomplete { label: r.label.clone(), have: r.complete_below_norm, need: bound });
            }
            r.covers_norms_below(bound)?;
        }
        Ok(())
    }

    pub fn shared(self) -> Vec<Arc<NewformRecord>> {
        self.records.into_iter().map(Arc::new).collect()
    }
}

/// File name of the space at a level: `S2_N196.json`, `S2_q2q3.json`, `S2_q2cubed_q3.json`.
pub fn fixture_name(level: &Level) -> String {
    match *level {
        Level::Rational(n) => format!("S2_N{}.json", n),
        Level::K { q2, q3, q7 } => {
            let mut s = String::from("S2_");
            let mut powered = false;
            for (name, e) in [("q2", q2), ("q3", q3), ("q7", q7)] {
                if e == 0 {
                    continue;
                }
                if powered {
                    s.push('_');
                }
                s.push_str(name);
                match e {
                    1 => powered = false,
                    2 => {
                        s.push_str("squared");
                        powered = true
                    }
                    3 => {
                        s.push_str("cubed");
                        powered = true
                    }
                    e => {
                        s.push_str(&format!("pow{}", e));
                        powered = true
                    }
                }
            }
            s + ".json"
        }
    }
}

/// Directory below the fixture root holding spaces over the given base field.
pub fn fixture_subdir(level: &Level) -> &'static str {
    match level {
        Level::Rational(_) => "classical",
        Level::K { .. } => "hilbert",
    }
}

pub fn fixture_path(root: &Path, level: &Level) -> std::path::PathBuf {
    root.join(fixture_subdir(level)).join(fixture_name(level))
}
