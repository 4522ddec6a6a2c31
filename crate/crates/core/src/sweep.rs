//! Deterministic coefficient sweeps over a fixed profile.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rayon::prelude::*;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::module::{build_m, solve_constraint, CoefficientTuple, Rank2Module};
use crate::oracle::{decompose, iso_oracle, is_indecomposable};
use crate::rim::{edge_kind, EdgeKind, Profile};
use crate::series::TruncatedSeries;
use crate::structure::{classify, Verdict};

/// Edges that may carry a coefficient, i.e. the elements of `I Δ J`.
pub fn coefficient_edges(profile: &Profile) -> Vec<usize> {
    (1..=profile.n())
        .filter(|&e| {
            matches!(
                edge_kind(&profile.i, &profile.j, e),
                EdgeKind::OnlyI | EdgeKind::OnlyJ
            )
        })
        .collect()
}

fn complete(profile: &Profile, edges: &[usize], values: &[i64], order: usize) -> Option<Rank2Module> {
    let (&free, rest) = edges.split_last()?;
    let mut b = CoefficientTuple::zeros(profile.n(), order);
    for (&e, &v) in rest.iter().zip(values) {
        b.set(e, TruncatedSeries::from_int(v, order));
    }
    let b = solve_constraint(profile, &b, free).ok()?;
    build_m(profile, &b).ok()
}

/// Integer values in `lo..=hi` on every coefficient edge but the last, in
/// lexicographic order, with the last edge solved from the cycle
/// constraint. Tuples whose solution is not a power series are skipped.
pub fn lattice_modules(
    profile: &Profile,
    range: (i64, i64),
    max_tuples: usize,
    order: usize,
) -> Result<Vec<Rank2Module>> {
    let (lo, hi) = range;
    if lo > hi {
        return Err(Error::Internal(format!("empty range {lo}..={hi}")));
    }
    let edges = coefficient_edges(profile);
    let free = edges.len().saturating_sub(1);
    let mut values = vec![lo; free];
    let mut out = Vec::new();
    loop {
        if out.len() >= max_tuples {
            break;
        }
        if let Some(m) = complete(profile, &edges, &values, order) {
            out.push(m);
        }
        // odometer, last position fastest
        let mut pos = free;
        loop {
            if pos == 0 {
                return Ok(out);
            }
            pos -= 1;
            if values[pos] < hi {
                values[pos] += 1;
                break;
            }
            values[pos] = lo;
        }
    }
    Ok(out)
}

/// `count` modules with values drawn uniformly from `lo..=hi`.
pub fn random_modules(
    profile: &Profile,
    range: (i64, i64),
    count: usize,
    seed: u64,
    order: usize,
) -> Result<Vec<Rank2Module>> {
    let (lo, hi) = range;
    if lo > hi {
        return Err(Error::Internal(format!("empty range {lo}..={hi}")));
    }
    let edges = coefficient_edges(profile);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    let mut attempts = 0;
    while out.len() < count && attempts < 20 * count.max(1) {
        attempts += 1;
        let values: Vec<i64> = (1..edges.len()).map(|_| rng.gen_range(lo..=hi)).collect();
        if let Some(m) = complete(profile, &edges, &values, order) {
            out.push(m);
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SweepRow {
    pub b: Vec<String>,
    pub verdict: String,
    pub summands: Option<[String; 2]>,
    pub iso_key: String,
    /// Oracle verdict, when requested: `true` for indecomposable.
    pub oracle_indecomposable: Option<bool>,
}

impl SweepRow {
    pub fn agrees(&self) -> Option<bool> {
        let o = self.oracle_indecomposable?;
        match self.verdict.as_str() {
            "Indecomposable" => Some(o),
            "DirectSum" => Some(!o),
            _ => None,
        }
    }
}

/// Classifies every module, falling back to the oracle when the box-sum
/// criteria do not apply. With `oracle` set, the oracle verdict is recorded
/// for every row. Modules are processed in parallel; rows keep input order.
pub fn tabulate(modules: &[Rank2Module], oracle: bool) -> Result<Vec<SweepRow>> {
    modules
        .par_iter()
        .map(|m| {
            let rep = m.representation();
            let oracle_indecomposable = if oracle { Some(is_indecomposable(rep)?) } else { None };
            let row = match classify(m) {
                Ok(r) => SweepRow {
                    b: m.b().to_literals(),
                    verdict: r.verdict.name().to_string(),
                    summands: r.summands().map(|(a, b)| [a.to_string(), b.to_string()]),
                    iso_key: r.iso_key.to_string(),
                    oracle_indecomposable,
                },
                Err(Error::NotApplicable(_)) => {
                    let split = decompose(rep)?;
                    SweepRow {
                        b: m.b().to_literals(),
                        verdict: if split.is_some() { "DirectSum" } else { "Indecomposable" }.into(),
                        summands: split.map(|(_, a, b)| [a.to_string(), b.to_string()]),
                        iso_key: "oracle".into(),
                        oracle_indecomposable: oracle_indecomposable.or(Some(true)),
                    }
                }
                Err(e) => return Err(e),
            };
            Ok(row)
        })
        .collect()
}

/// Occurrences of each isomorphism key among the rows with `verdict`.
pub fn key_counts(rows: &[SweepRow], verdict: &Verdict) -> BTreeMap<String, usize> {
    let mut out = BTreeMap::new();
    for row in rows.iter().filter(|r| r.verdict == verdict.name()) {
        *out.entry(row.iso_key.clone()).or_insert(0) += 1;
    }
    out
}

/// Groups indecomposable modules into isomorphism classes using only the
/// oracle. Returns the indices of each class, in order of first appearance.
pub fn oracle_classes(modules: &[Rank2Module]) -> Result<Vec<Vec<usize>>> {
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for (idx, m) in modules.iter().enumerate() {
        let rep = m.representation();
        if !is_indecomposable(rep)? {
            continue;
        }
        let mut placed = false;
        for class in &mut classes {
            if iso_oracle(modules[class[0]].representation(), rep)? {
                class.push(idx);
                placed = true;
                break;
            }
        }
        if !placed {
            classes.push(vec![idx]);
        }
    }
    Ok(classes)
}
