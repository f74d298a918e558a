//! Per-prime trace tables built in parallel, and their CSV dump.

use std::collections::BTreeMap;
use std::io::Write;

use frey_core::eliminate::{classes, e_table, f_table, j_table, ETable, FTable, JTable};
use frey_core::numfield::KElement;
use rayon::prelude::*;

use crate::cache::{CounterPool, SharedCache};
use crate::error::Result;

pub fn e_tables(qs: &[u64], pool: &CounterPool, cache: &SharedCache) -> Result<BTreeMap<u64, ETable>> {
    qs.par_iter().map(|&q| Ok((q, e_table(&*pool.get(q)?, cache)?))).collect()
}

pub fn f_tables(
    qs: &[u64],
    delta: &KElement,
    pool: &CounterPool,
    cache: &SharedCache,
) -> Result<BTreeMap<u64, FTable>> {
    qs.par_iter().map(|&q| Ok((q, f_table(&*pool.get(q)?, delta, cache)?))).collect()
}

pub fn j_tables(qs: &[u64], pool: &CounterPool, cache: &SharedCache) -> Result<BTreeMap<u64, JTable>> {
    qs.par_iter().map(|&q| Ok((q, j_table(&*pool.get(q)?, cache)?))).collect()
}

/// Rows (q, x, y, trace set) with elements written as w-coordinates `c0:c1:c2`.
pub fn write_trace_csv<W: Write>(out: W, tables: &BTreeMap<u64, JTable>) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["q", "x", "y", "trace_set"])?;
    for (q, t) in tables {
        for ((x, y), set) in classes(*q).into_iter().zip(&t.sets) {
            let cell = match set {
                None => "bad".to_string(),
                Some(s) => s.elements.iter().map(format_k).collect::<Vec<_>>().join(" "),
            };
            w.write_record([q.to_string(), x.to_string(), y.to_string(), cell])?;
        }
    }
    w.flush().map_err(crate::error::io_err("<csv>"))?;
    Ok(())
}

pub fn format_k(u: &KElement) -> String {
    if u.is_rational() {
        return u.coords[0].to_string();
    }
    u.coords.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(":")
}
