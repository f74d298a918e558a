//! Read-only LMFDB client for classical newform data, with an on-disk response cache.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::RwLock;

use frey_core::frey::Level;
use frey_core::heckedata::{BaseField, NewformRecord, Provenance};
use frey_core::numfield::{NFElement, NumberFieldSpec, PrimeKey};
use frey_core::{BigInt, BigRational};
use serde_json::Value;

use crate::error::{io_err, Error, Result};
use crate::schema::Space;

pub const DEFAULT_BASE_URL: &str = "https://www.lmfdb.org";
pub const BASE_URL_VAR: &str = "FREY_LMFDB_URL";

/// Coefficients a_n are published for n up to this bound.
const TRACE_LIMIT: u64 = 1000;

pub struct Client {
    base: String,
    cache_dir: PathBuf,
    lock: RwLock<()>,
    retries: u32,
}

impl Client {
    pub fn new(base: &str, cache_dir: &Path) -> Self {
        Client {
            base: base.trim_end_matches('/').to_string(),
            cache_dir: cache_dir.to_path_buf(),
            lock: RwLock::new(()),
            retries: 3,
        }
    }

    /// Base URL from the environment, falling back to the public site.
    pub fn from_env(cache_dir: &Path) -> Self {
        let base = std::env::var(BASE_URL_VAR).unwrap_or_else(|_| DEFAULT_BASE_URL.to_string());
        Client::new(&base, cache_dir)
    }

    pub fn base(&self) -> &str {
        &self.base
    }

    pub fn url(&self, table: &str, query: &[(&str, String)]) -> String {
        let q: Vec<String> = query.iter().map(|(k, v)| format!("{}={}", k, v)).collect();
        format!("{}/api/{}/?{}", self.base, table, q.join("&"))
    }

    fn cache_path(&self, url: &str) -> PathBuf {
        self.cache_dir.join(format!("{}.json", crate::prove::hash_bytes(url.as_bytes())))
    }

    /// Cached response for a URL, if present.
    pub fn cached(&self, url: &str) -> Result<Option<Value>> {
        let _guard = self.lock.read().unwrap();
        let path = self.cache_path(url);
        match std::fs::read_to_string(&path) {
            Ok(text) => Ok(Some(serde_json::from_str(&text)?)),
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(None),
            Err(e) => Err(io_err(&path)(e)),
        }
    }

    pub fn store(&self, url: &str, body: &str) -> Result<()> {
        let _guard = self.lock.write().unwrap();
        std::fs::create_dir_all(&self.cache_dir).map_err(io_err(&self.cache_dir))?;
        let path = self.cache_path(url);
        let tmp = path.with_extension("tmp");
        std::fs::write(&tmp, body).map_err(io_err(&tmp))?;
        std::fs::rename(&tmp, &path).map_err(io_err(&path))
    }

    fn fetch(&self, url: &str) -> Result<String> {
        let mut last = String::new();
        for _ in 0..self.retries {
            match ureq::get(url).call() {
                Ok(mut resp) => {
                    return resp.body_mut().read_to_string().map_err(|e| Error::Network(format!("{}: {}", url, e)));
                }
                Err(e) => last = e.to_string(),
            }
        }
        Err(Error::Network(format!("{}: {}", url, last)))
    }

    pub fn get(&self, table: &str, query: &[(&str, String)]) -> Result<Value> {
        let url = self.url(table, query);
        if let Some(v) = self.cached(&url)? {
            return Ok(v);
        }
        let body = self.fetch(&url)?;
        let v: Value = serde_json::from_str(&body)?;
        self.store(&url, &body)?;
        Ok(v)
    }

    /// The weight-2 newforms with trivial character at level n, eigenvalues at primes below `below`.
    pub fn classical_space(&self, n: u64, below: u64) -> Result<Space> {
        let below = below.min(TRACE_LIMIT);
        let forms = self.get(
            "mf_newforms",
            &[
                ("level", n.to_string()),
                ("weight", "2".into()),
                ("char_order", "1".into()),
                ("_format", "json".into()),
                ("_fields", "label,dim,field_poly,traces".into()),
            ],
        )?;
        let data = forms["data"].as_array().ok_or_else(|| Error::Schema("mf_newforms: no data array".into()))?;
        let mut records = Vec::new();
        for f in data {
            let label = f["label"].as_str().ok_or_else(|| Error::Schema("newform without label".into()))?;
            let dim = f["dim"].as_u64().ok_or_else(|| Error::Schema(format!("{}: no dim", label)))?;
            let rec = if dim == 1 {
                rational_record(label, n, f, below)?
            } else {
                let nf = self.get(
                    "mf_hecke_nf",
                    &[
                        ("label", label.to_string()),
                        ("_format", "json".into()),
                        ("_fields", "ap,field_poly,hecke_ring_numerators,hecke_ring_denominators,hecke_ring_cyclotomic_generator".into()),
                    ],
                )?;
                let row = nf["data"].get(0).ok_or_else(|| Error::Schema(format!("{}: no Hecke data", label)))?;
                field_record(label, n, row, below)?
            };
            rec.validate()?;
            records.push(rec);
        }
        records.sort_by(|a, b| a.label.cmp(&b.label));
        Ok(Space { base: BaseField::Q, level: Level::Rational(n), records })
    }
}

fn int(v: &Value) -> Result<BigInt> {
    let s = match v {
        Value::Number(n) => n.to_string(),
        Value::String(s) => s.clone(),
        other => return Err(Error::Schema(format!("expected an integer, got {}", other))),
    };
    s.parse().map_err(|_| Error::Schema(format!("{} is not an integer", s)))
}

fn int_list(v: &Value) -> Result<Vec<BigInt>> {
    v.as_array().ok_or_else(|| Error::Schema(format!("expected a list, got {}", v)))?.iter().map(int).collect()
}

fn rational_record(label: &str, n: u64, f: &Value, below: u64) -> Result<NewformRecord> {
    let traces = int_list(&f["traces"])?;
    let field = NumberFieldSpec::rationals();
    let mut eig = BTreeMap::new();
    for q in frey_core::arith::primes_up_to(below - 1) {
        let a = traces.get(q as usize - 1).ok_or_else(|| Error::Schema(format!("{}: no trace at {}", label, q)))?;
        eig.insert(PrimeKey { q, index: 0 }, NFElement::from_rational(&field, BigRational::from_integer(a.clone())));
    }
    Ok(NewformRecord {
        label: label.to_string(),
        base: BaseField::Q,
        level: Level::Rational(n),
        hecke_field: field,
        eigenvalues: eig,
        complete_below_norm: below,
        provenance: Provenance::Lmfdb,
    })
}

/// a_q = sum_j ap[i][j] beta_j with beta_j = (sum_k num[j][k] x^k) / den[j].
fn field_record(label: &str, n: u64, row: &Value, below: u64) -> Result<NewformRecord> {
    if row["hecke_ring_cyclotomic_generator"].as_u64().unwrap_or(0) != 0 {
        return Err(Error::Schema(format!("{}: cyclotomic coefficient representation is not supported", label)));
    }
    let field = NumberFieldSpec::new(int_list(&row["field_poly"])?)?;
    let d = field.degree();
    let nums: Vec<Vec<BigInt>> = row["hecke_ring_numerators"]
        .as_array()
        .ok_or_else(|| Error::Schema(format!("{}: no ring numerators", label)))?
        .iter()
        .map(int_list)
        .collect::<Result<_>>()?;
    let dens = int_list(&row["hecke_ring_denominators"])?;
    if nums.len() != d || dens.len() != d {
        return Err(Error::Schema(format!("{}: ring basis has the wrong size", label)));
    }
    let ap = row["ap"].as_array().ok_or_else(|| Error::Schema(format!("{}: no ap", label)))?;
    let primes = frey_core::arith::primes_up_to(below - 1);
    let mut eig = BTreeMap::new();
    for (i, &q) in primes.iter().enumerate() {
        let c = int_list(ap.get(i).ok_or_else(|| Error::Schema(format!("{}: no ap at {}", label, q)))?)?;
        let mut coords = vec![BigRational::from_integer(BigInt::from(0)); d];
        for (j, cj) in c.iter().enumerate() {
            for (k, nk) in nums[j].iter().enumerate() {
                coords[k] += BigRational::new(cj * nk, dens[j].clone());
            }
        }
        eig.insert(PrimeKey { q, index: 0 }, NFElement::new(&field, coords));
    }
    Ok(NewformRecord {
        label: label.to_string(),
        base: BaseField::Q,
        level: Level::Rational(n),
        hecke_field: field,
        eigenvalues: eig,
        complete_below_norm: below,
        provenance: Provenance::Lmfdb,
    })
}
