//! Classification of `M(I,J)` from the box sums `P_g = B_{i_g} + B_{j_g}`.
//!
//! `B_{i_g}` is the off-diagonal entry of the product over the falling run
//! ending at `i_g` (so `b_{i_g}` has weight 1, the edge before it weight `t`,
//! ...), and `B_{j_g}` the one over the rising run starting at `j_g`
//! (`b_{j_g}` has weight 1, the next edge `t`, ...). Around the cycle the
//! sums add up to zero.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::SeriesMatrix;
use crate::module::{build_m, CoefficientTuple, Rank2Module, Representation};
use crate::oracle::{commutes, summand_rims_of_family};
use crate::rim::{profile_geometry, Profile, ProfileGeometry, Rim};
use crate::series::{Rational, TruncatedSeries};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoxSums {
    /// `B_{i_g}`, indexed by branching point.
    pub falling: Vec<TruncatedSeries>,
    /// `B_{j_g}`.
    pub rising: Vec<TruncatedSeries>,
    pub pairs: Vec<TruncatedSeries>,
    pub sizes: Vec<usize>,
    /// `m_g = min(l_{g-1}, l_g)`.
    pub thresholds: Vec<usize>,
}

impl BoxSums {
    /// `t^{m_g} | P_g` for each `g`.
    pub fn divisible(&self) -> Result<Vec<bool>> {
        self.pairs
            .iter()
            .zip(&self.thresholds)
            .map(|(p, &m)| p.divides(m))
            .collect()
    }

    /// `s_g = v(P_g)`, or `None` if some sum vanishes.
    pub fn valuations(&self) -> Option<Vec<usize>> {
        self.pairs.iter().map(|p| p.valuation().finite()).collect()
    }
}

fn half_product(rep: &Representation, edges: &[usize]) -> TruncatedSeries {
    let mut acc = SeriesMatrix::identity(2, rep.order());
    for &e in edges {
        acc = rep.x(e).mul(&acc);
    }
    acc.get(0, 1).clone()
}

pub fn box_sums(m: &Rank2Module) -> Result<BoxSums> {
    let geom = profile_geometry(&m.profile().i, &m.profile().j)?;
    box_sums_with(&geom, m)
}

/// Box sums for a module whose geometry is already known. Boxes with
/// junctions are accepted when their middle edges carry no coefficient.
pub fn box_sums_with(geom: &ProfileGeometry, m: &Rank2Module) -> Result<BoxSums> {
    if geom.r1 < 3 {
        return Err(Error::NotApplicable(format!(
            "box sums need at least 3 boxes, found {}",
            geom.r1
        )));
    }
    for bx in &geom.boxes {
        for &e in &bx.edges {
            if !bx.rising.contains(&e) && !bx.falling.contains(&e) && !m.b().get(e).is_zero() {
                return Err(Error::NotApplicable(format!(
                    "edge {e} sits between two runs and carries a coefficient"
                )));
            }
        }
    }
    let rep = m.representation();
    let r1 = geom.r1;
    let falling: Vec<_> = (0..r1)
        .map(|g| half_product(rep, &geom.box_before(g).falling))
        .collect();
    let rising: Vec<_> = (0..r1)
        .map(|g| half_product(rep, &geom.boxes[g].rising))
        .collect();
    let pairs = falling.iter().zip(&rising).map(|(a, b)| a + b).collect();
    Ok(BoxSums {
        falling,
        rising,
        pairs,
        sizes: geom.box_sizes.clone(),
        thresholds: (0..r1).map(|g| geom.threshold(g)).collect(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Indecomposable,
    DirectSum(Rim, Rim),
    NotApplicable,
}

impl Verdict {
    pub fn name(&self) -> &'static str {
        match self {
            Verdict::Indecomposable => "Indecomposable",
            Verdict::DirectSum(..) => "DirectSum",
            Verdict::NotApplicable => "NotApplicable",
        }
    }
}

/// Isomorphism invariant. Two modules on the same profile with the same
/// verdict are isomorphic iff their keys agree, except for [`IsoKey::Oracle`]
/// which leaves the question to the oracle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IsoKey {
    /// Tight 3-interlacing: a single indecomposable class.
    Unique,
    SVector(Vec<usize>),
    /// Exactly one divisible pair, at branching point `i` with `j` its partner.
    SinglePair { i: usize, j: usize },
    /// No pair divisible; the four-sums starting at these branching points are.
    FourSums(usize, usize),
    BetaSquared(Rational),
    Split(Rim, Rim),
    Oracle,
}

impl fmt::Display for IsoKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IsoKey::Unique => f.write_str("unique"),
            IsoKey::SVector(s) => {
                let parts: Vec<String> = s.iter().map(ToString::to_string).collect();
                write!(f, "s=({})", parts.join(","))
            }
            IsoKey::SinglePair { i, j } => write!(f, "M_{{{i},{j}}}"),
            IsoKey::FourSums(a, b) => write!(f, "four-sums@{a},{b}"),
            IsoKey::BetaSquared(b) => write!(f, "beta^2={b}"),
            IsoKey::Split(x, y) => write!(f, "L_{{{x}}}+L_{{{y}}}"),
            IsoKey::Oracle => f.write_str("oracle"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    /// An idempotent endomorphism, one matrix per vertex `0..n`.
    Idempotent(Vec<SeriesMatrix>),
    /// The criterion certifying indecomposability.
    Theorem(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructureReport {
    pub verdict: Verdict,
    pub case: String,
    pub s_vector: Option<Vec<usize>>,
    pub iso_key: IsoKey,
    pub witness: Witness,
    pub theorem: String,
}

impl StructureReport {
    pub fn not_applicable(reason: &str) -> Self {
        StructureReport {
            verdict: Verdict::NotApplicable,
            case: "other".into(),
            s_vector: None,
            iso_key: IsoKey::Oracle,
            witness: Witness::Theorem(reason.to_string()),
            theorem: reason.to_string(),
        }
    }

    pub fn summands(&self) -> Option<(&Rim, &Rim)> {
        match &self.verdict {
            Verdict::DirectSum(a, b) => Some((a, b)),
            _ => None,
        }
    }
}

#[derive(Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum WitnessJson {
    Idempotent { family: Vec<Vec<Vec<String>>> },
    Theorem { name: String },
}

#[derive(Serialize)]
struct ReportJson<'a> {
    verdict: &'static str,
    case: &'a str,
    summands: Option<[String; 2]>,
    s_vector: &'a Option<Vec<usize>>,
    iso_key: String,
    witness: WitnessJson,
    theorem: &'a str,
}

impl Serialize for StructureReport {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let witness = match &self.witness {
            Witness::Idempotent(f) => WitnessJson::Idempotent {
                family: f.iter().map(SeriesMatrix::to_literals).collect(),
            },
            Witness::Theorem(name) => WitnessJson::Theorem { name: name.clone() },
        };
        ReportJson {
            verdict: self.verdict.name(),
            case: &self.case,
            summands: self.summands().map(|(a, b)| [a.to_string(), b.to_string()]),
            s_vector: &self.s_vector,
            iso_key: self.iso_key.to_string(),
            witness,
            theorem: &self.theorem,
        }
        .serialize(serializer)
    }
}

/// `φ_v = P'_v φ_base P_v^{-1}` along the paths from `base`, where `P_v`
/// and `P'_v` are the path products in `source` and `target`.
pub fn propagate_family(
    source: &Representation,
    target: &Representation,
    base: usize,
    phi: &SeriesMatrix,
) -> Result<Vec<SeriesMatrix>> {
    let n = source.n();
    let order = source.order();
    let mut out = vec![phi.clone(); n];
    let mut ps = SeriesMatrix::identity(source.rank(), order);
    let mut pt = SeriesMatrix::identity(target.rank(), order);
    for step in 1..n {
        let e = (base + step - 1) % n + 1;
        ps = source.x(e).mul(&ps);
        pt = target.x(e).mul(&pt);
        let v = (base + step) % n;
        let (d, unit) = ps.det().split_unit()?;
        let num = pt.mul(phi).mul(&ps.adjugate());
        out[v] = num
            .divide_exact(d)
            .map_err(|err| match err {
                Error::NotDivisible { .. } => Error::NotIntegral(v),
                other => other,
            })?
            .scale(&unit.inverse()?);
    }
    Ok(out)
}

fn verified_family(
    source: &Representation,
    target: &Representation,
    base: usize,
    phi: &SeriesMatrix,
) -> Result<Option<Vec<SeriesMatrix>>> {
    match propagate_family(source, target, base, phi) {
        Ok(f) => Ok(commutes(source, target, &f).then_some(f)),
        Err(Error::NotIntegral(_)) => Ok(None),
        Err(e) => Err(e),
    }
}

fn is_idempotent(f: &[SeriesMatrix]) -> bool {
    f.iter().all(|e| e.mul(e).agrees_with(e))
}

fn entry(a: i64, order: usize) -> TruncatedSeries {
    TruncatedSeries::from_int(a, order)
}

/// The retraction onto `L_J`: `e_v = [[1, α_v], [0, 0]]` with
/// `α_v x^I_v = x^J_v α_{v-1} - b_v`.
fn retraction(rep: &Representation) -> Result<Option<Vec<SeriesMatrix>>> {
    let order = rep.order();
    let mut w = TruncatedSeries::zero(order);
    let (mut a_pow, mut d_pow) = (0usize, 0usize);
    let mut alpha0 = TruncatedSeries::zero(order);
    let mut best = 0;
    for e in 1..rep.n() {
        let x = rep.x(e);
        w = &(x.get(0, 0) * &w) + &x.get(0, 1).mul_t_power(d_pow);
        a_pow += x.get(0, 0).valuation().finite().unwrap_or(0);
        d_pow += x.get(1, 1).valuation().finite().unwrap_or(0);
        if a_pow >= d_pow {
            if !w.divides(d_pow)? {
                return Ok(None);
            }
        } else {
            if !w.divides(a_pow)? {
                return Ok(None);
            }
            let need = d_pow - a_pow;
            if need > best {
                best = need;
                alpha0 = w.divide_exact(a_pow)?.truncated(need).lift_exact();
            }
        }
    }
    let phi = SeriesMatrix::two_by_two(entry(1, order), alpha0, entry(0, order), entry(0, order));
    Ok(verified_family(rep, rep, 0, &phi)?.filter(|f| is_idempotent(f)))
}

/// Idempotents `[[1, 0], [c, 0]]` at a peak, `c = -t^{l}/P_m`, for the box
/// of size `l` and a non-divisible sum `P_m`.
fn peak_witness(
    rep: &Representation,
    geom: &ProfileGeometry,
    sums: &BoxSums,
    divisible: &[bool],
) -> Result<Option<Vec<SeriesMatrix>>> {
    let r1 = geom.r1;
    let order = rep.order();
    let box_order = std::iter::once(r1 - 1).chain(0..r1 - 1);
    for bx in box_order {
        let l = geom.boxes[bx].size;
        let base = geom.boxes[bx].peak_vertex;
        for m in (0..r1).filter(|&m| !divisible[m]) {
            let (s, unit) = sums.pairs[m].split_unit()?;
            if s > l {
                continue;
            }
            let c = -(&unit.inverse()?.mul_t_power(l - s));
            let phi = SeriesMatrix::two_by_two(entry(1, order), entry(0, order), c, entry(0, order));
            if let Some(f) = verified_family(rep, rep, base, &phi)? {
                if is_idempotent(&f) {
                    return Ok(Some(f));
                }
            }
        }
    }
    Ok(None)
}

fn sorted_pair(a: Rim, b: Rim) -> (Rim, Rim) {
    if a.elements() <= b.elements() {
        (a, b)
    } else {
        (b, a)
    }
}

/// Exchanges the roles of `I` and `J` on the given boxes.
fn swap_boxes(geom: &ProfileGeometry, boxes: &[usize]) -> Result<(Rim, Rim)> {
    let mut a: BTreeSet<usize> = geom.i.elements().iter().copied().collect();
    let mut b: BTreeSet<usize> = geom.j.elements().iter().copied().collect();
    for &g in boxes {
        for &e in &geom.boxes[g].edges {
            if geom.i.contains(e) {
                a.remove(&e);
                b.insert(e);
            } else {
                a.insert(e);
                b.remove(&e);
            }
        }
    }
    Ok(sorted_pair(Rim::new(geom.n(), a)?, Rim::new(geom.n(), b)?))
}

const SPLIT: &str = "explicit retraction onto L_J";
const TIGHT3: &str = "tight 3-interlacing criterion: t does not divide b_{i_g} + b_{j_g} for g = 1, 2, 3";
const THREE_BOX: &str =
    "three-box criterion: t^min(l_{g-1}, l_g) does not divide B_{i_g} + B_{j_g} for g = 1, 2, 3";
const TIGHT4_ONE: &str = "tight 4-interlacing with exactly one divisible pair sum";
const TIGHT4_NONE: &str =
    "tight 4-interlacing with no divisible pair sum and a non-divisible four-sum";

fn decomposed(
    rep: &Representation,
    case: &str,
    theorem: &str,
    expected: Option<(Rim, Rim)>,
    family: Option<Vec<SeriesMatrix>>,
    s_vector: Option<Vec<usize>>,
) -> Result<StructureReport> {
    let Some(family) = family else {
        return Err(match expected {
            Some(_) => Error::Internal(format!("{case}: no explicit idempotent found")),
            None => Error::NotApplicable(format!("{case}: no explicit idempotent found")),
        });
    };
    let walked = summand_rims_of_family(rep, &family)?;
    if let Some(expected) = expected {
        if expected != walked {
            return Err(Error::Internal(format!(
                "{case}: summands {}+{} disagree with the idempotent ({}+{})",
                expected.0, expected.1, walked.0, walked.1
            )));
        }
    }
    let (x, y) = walked;
    Ok(StructureReport {
        iso_key: IsoKey::Split(x.clone(), y.clone()),
        verdict: Verdict::DirectSum(x, y),
        case: case.into(),
        s_vector,
        witness: Witness::Idempotent(family),
        theorem: theorem.into(),
    })
}

/// Decides indecomposability, summands and the isomorphism key from the
/// box sums. Returns [`Error::NotApplicable`] outside the covered cases.
pub fn classify(m: &Rank2Module) -> Result<StructureReport> {
    let geom = profile_geometry(&m.profile().i, &m.profile().j)?;
    let rep = m.representation();
    if let Some(family) = retraction(rep)? {
        let (x, y) = sorted_pair(geom.i.clone(), geom.j.clone());
        return Ok(StructureReport {
            iso_key: IsoKey::Split(x.clone(), y.clone()),
            verdict: Verdict::DirectSum(x, y),
            case: "split".into(),
            s_vector: None,
            witness: Witness::Idempotent(family),
            theorem: SPLIT.into(),
        });
    }
    let sums = box_sums_with(&geom, m)?;
    if !geom.all_squared() {
        return Err(Error::NotApplicable("profile has junctions".into()));
    }
    let divisible = sums.divisible()?;
    if divisible.iter().all(|&d| d) {
        return Err(Error::Internal("all box sums divisible but no retraction".into()));
    }
    match geom.r1 {
        3 => classify_three(rep, &geom, &sums, &divisible),
        4 if geom.box_sizes.iter().all(|&l| l == 1) => classify_four(rep, &geom, &sums, &divisible),
        r1 => Err(Error::NotApplicable(format!(
            "{r1} boxes with sizes {:?}",
            geom.box_sizes
        ))),
    }
}

fn classify_three(
    rep: &Representation,
    geom: &ProfileGeometry,
    sums: &BoxSums,
    divisible: &[bool],
) -> Result<StructureReport> {
    let tight = geom.box_sizes.iter().all(|&l| l == 1);
    let (case, theorem) = if tight { ("tight-3", TIGHT3) } else { ("three-box", THREE_BOX) };
    let s_vector = sums.valuations();
    let div_count = divisible.iter().filter(|&&d| d).count();
    if div_count == 0 {
        let s = s_vector.clone().expect("non-divisible sums are nonzero");
        // With every s_g positive the s-vector no longer separates classes.
        let iso_key = if tight {
            IsoKey::Unique
        } else if s.contains(&0) {
            IsoKey::SVector(s)
        } else {
            IsoKey::Oracle
        };
        return Ok(StructureReport {
            verdict: Verdict::Indecomposable,
            case: case.into(),
            iso_key,
            s_vector,
            witness: Witness::Theorem(theorem.into()),
            theorem: theorem.into(),
        });
    }
    let family = peak_witness(rep, geom, sums, divisible)?;
    let units_elsewhere = (0..3).all(|g| divisible[g] || sums.pairs[g].is_unit());
    let expected = if div_count == 1 && units_elsewhere {
        let d = divisible.iter().position(|&x| x).expect("one divisible");
        Some(swap_boxes(geom, &[(d + 1) % 3])?)
    } else {
        None
    };
    if family.is_none() && expected.is_none() {
        // The peak idempotent needs a unit sum; without one the pattern
        // is left to the oracle.
        return Err(Error::NotApplicable(format!(
            "{case}: mixed divisibility with s = {:?} and no unit sum",
            s_vector
        )));
    }
    decomposed(rep, case, theorem, expected, family, s_vector)
}

fn classify_four(
    rep: &Representation,
    geom: &ProfileGeometry,
    sums: &BoxSums,
    divisible: &[bool],
) -> Result<StructureReport> {
    let s_vector = sums.valuations();
    let div: Vec<usize> = (0..4).filter(|&g| divisible[g]).collect();
    let indecomposable = |key: IsoKey, case: &str, theorem: &str| StructureReport {
        verdict: Verdict::Indecomposable,
        case: case.into(),
        s_vector: s_vector.clone(),
        iso_key: key,
        witness: Witness::Theorem(theorem.into()),
        theorem: theorem.into(),
    };
    match div.as_slice() {
        [d] => Ok(indecomposable(
            IsoKey::SinglePair {
                i: geom.branching_i[*d],
                j: geom.branching_j[*d],
            },
            "tight-4 case 1",
            TIGHT4_ONE,
        )),
        [a, b] => {
            let boxes = if (a + 1) % 4 == *b {
                vec![(a + 2) % 4]
            } else if (b + 1) % 4 == *a {
                vec![(b + 2) % 4]
            } else {
                vec![(a + 1) % 4, (a + 2) % 4]
            };
            let expected = swap_boxes(geom, &boxes)?;
            let family = peak_witness(rep, geom, sums, divisible)?;
            decomposed(
                rep,
                "tight-4 case 2",
                "tight 4-interlacing with two divisible pair sums",
                Some(expected),
                family,
                s_vector.clone(),
            )
        }
        [] => {
            let four: Vec<bool> = (0..4)
                .map(|g| (&sums.pairs[g] + &sums.pairs[(g + 1) % 4]).divides(1))
                .collect::<Result<_>>()?;
            if four.iter().all(|&d| d) {
                let expected = swap_boxes(geom, &[0, 2])?;
                let family = peak_witness(rep, geom, sums, divisible)?;
                return decomposed(
                    rep,
                    "tight-4 case 3",
                    "tight 4-interlacing with all four-sums divisible",
                    Some(expected),
                    family,
                    s_vector.clone(),
                );
            }
            let key = match four.iter().position(|&d| d) {
                Some(g) => IsoKey::FourSums(geom.branching_i[g], geom.branching_i[g + 2]),
                None => {
                    let c: Vec<&Rational> = sums.pairs.iter().map(|p| p.constant_term()).collect();
                    IsoKey::BetaSquared((c[1] * c[3]) / (c[0] * c[2]))
                }
            };
            Ok(indecomposable(key, "tight-4 case 3", TIGHT4_NONE))
        }
        _ => Err(Error::Internal(format!(
            "box sums {:?} cannot add up to zero",
            sums.pairs.iter().map(TruncatedSeries::to_literal).collect::<Vec<_>>()
        ))),
    }
}

pub fn iso_key(m: &Rank2Module) -> Result<IsoKey> {
    Ok(classify(m)?.iso_key)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IsoOutcome {
    Isomorphic {
        base_vertex: usize,
        family: Vec<SeriesMatrix>,
    },
    NonIsomorphic,
}

enum Formula {
    /// `[[α, 0], [γ, 1]]` built from three consecutive sums starting at `g0`.
    Triple(usize),
    /// `[[1, 0], [γ, δ]]`, `δ` fixed by the sums at `g0` and `g0 + 1`.
    Consecutive(usize),
    /// `[[1, 0], [γ, δ]]`, `δ` fixed by the sums at `g0` and `g0 - 1`.
    Wrap(usize),
}

fn quotient(a: &TruncatedSeries, b: &TruncatedSeries) -> Result<TruncatedSeries> {
    Ok(a * &b.inverse()?)
}

/// `t^{-s_g} P_g`; vanishing sums are kept as they are.
fn unit_parts(sums: &BoxSums) -> Result<Vec<TruncatedSeries>> {
    sums.pairs
        .iter()
        .map(|p| if p.is_zero() { Ok(p.clone()) } else { Ok(p.split_unit()?.1) })
        .collect()
}

fn formula_matrix(
    formula: &Formula,
    geom: &ProfileGeometry,
    p: &[TruncatedSeries],
    q: &[TruncatedSeries],
) -> Result<(usize, SeriesMatrix)> {
    let r1 = geom.r1;
    let order = p[0].order();
    let at = |v: &[TruncatedSeries], g: usize| v[g % r1].clone();
    match *formula {
        Formula::Triple(g0) => {
            let (p1, p2, p3) = (at(p, g0), at(p, g0 + 1), at(p, g0 + 2));
            let (q1, q2, q3) = (at(q, g0), at(q, g0 + 1), at(q, g0 + 2));
            let den = &(&p1 * &q2) * &p3;
            let alpha = quotient(&(&(&q1 * &p2) * &q3), &den)?;
            let l = geom.box_before(g0).size;
            let gamma = quotient(&(&(&q2 * &p3) - &(&p2 * &q3)), &den)?.mul_t_power(l);
            let phi = SeriesMatrix::two_by_two(alpha, entry(0, order), gamma, entry(1, order));
            Ok((geom.box_before(g0).peak_vertex, phi))
        }
        Formula::Consecutive(g0) | Formula::Wrap(g0) => {
            let (p1, q1) = (at(p, g0), at(q, g0));
            let delta = if let Formula::Consecutive(_) = formula {
                let (p2, q2) = (at(p, g0 + 1), at(q, g0 + 1));
                quotient(
                    &(&(&(&p1 + &p2) * &p1) * &q2),
                    &(&(&(&q1 + &q2) * &q1) * &p2),
                )?
            } else {
                let (pz, qz) = (at(p, g0 + r1 - 1), at(q, g0 + r1 - 1));
                quotient(
                    &(&(&(&q1 + &qz) * &p1) * &pz),
                    &(&(&(&p1 + &pz) * &q1) * &qz),
                )?
            };
            let gamma = (&quotient(&delta, &p1)? - &q1.inverse()?).mul_t_power(1);
            let phi = SeriesMatrix::two_by_two(entry(1, order), entry(0, order), gamma, delta);
            Ok((geom.box_before(g0).peak_vertex, phi))
        }
    }
}

/// An explicit isomorphism `M1 -> M2` when the keys agree.
pub fn build_iso(m1: &Rank2Module, m2: &Rank2Module) -> Result<IsoOutcome> {
    if m1.profile() != m2.profile() {
        return Err(Error::MismatchedRims);
    }
    let m2 = if m2.order() == m1.order() {
        m2.clone()
    } else {
        m2.with_order(m1.order())?
    };
    if m1.b() == m2.b() {
        let id = SeriesMatrix::identity(2, m1.order());
        return Ok(IsoOutcome::Isomorphic {
            base_vertex: 0,
            family: vec![id; m1.n()],
        });
    }
    let r1 = classify(m1)?;
    let r2 = classify(&m2)?;
    match (&r1.verdict, &r2.verdict) {
        (Verdict::Indecomposable, Verdict::Indecomposable) => {
            if r1.iso_key != r2.iso_key {
                return Ok(IsoOutcome::NonIsomorphic);
            }
        }
        (Verdict::DirectSum(a, b), Verdict::DirectSum(c, d)) if (a, b) == (c, d) => {
            return Err(Error::NotApplicable(
                "explicit isomorphisms are only built between indecomposable modules".into(),
            ));
        }
        _ => return Ok(IsoOutcome::NonIsomorphic),
    }

    let geom = profile_geometry(&m1.profile().i, &m1.profile().j)?;
    let s1 = box_sums_with(&geom, m1)?;
    let s2 = box_sums_with(&geom, &m2)?;
    let formulas: Vec<Formula> = match &r1.iso_key {
        IsoKey::Unique | IsoKey::SVector(_) => {
            let largest = (0..3).map(|g| geom.box_before(g).size).max().unwrap_or(1);
            (0..3)
                .filter(|&g| geom.box_before(g).size == largest)
                .map(Formula::Triple)
                .collect()
        }
        IsoKey::SinglePair { i, .. } => {
            let d = geom.branching_i.iter().position(|b| b == i).expect("branching point");
            vec![Formula::Triple((d + 1) % 4)]
        }
        IsoKey::FourSums(..) => {
            let four = (0..2)
                .find(|&g| {
                    !(&s1.pairs[g] + &s1.pairs[g + 1]).divides(1).unwrap_or(true)
                })
                .ok_or_else(|| Error::Internal("no non-divisible four-sum".into()))?;
            vec![Formula::Consecutive(four)]
        }
        IsoKey::BetaSquared(_) => vec![Formula::Wrap(0)],
        IsoKey::Oracle => {
            return Err(Error::NotApplicable(
                "no closed-form isomorphism for this valuation pattern".into(),
            ))
        }
        IsoKey::Split(..) => {
            return Err(Error::Internal("unexpected key for an indecomposable module".into()))
        }
    };
    let (p, q) = (unit_parts(&s1)?, unit_parts(&s2)?);
    for formula in &formulas {
        let (base, phi) = formula_matrix(formula, &geom, &p, &q)?;
        if !phi.det().is_unit() {
            continue;
        }
        if let Some(family) = verified_family(m1.representation(), m2.representation(), base, &phi)? {
            return Ok(IsoOutcome::Isomorphic {
                base_vertex: base,
                family,
            });
        }
    }
    Err(Error::Internal("the constructed map failed verification".into()))
}

/// Number of isomorphism classes of indecomposable `M(I,J)` for a three-box
/// profile with box sizes `l1 ≤ l2 ≤ l3` (any order accepted).
pub fn count_indecomposables(sizes: [usize; 3]) -> usize {
    let mut s = sizes;
    s.sort_unstable();
    let (l1, l2) = (s[0], s[1]);
    l1 * (l1.saturating_sub(1)) / 2 + l1 * l2
}

/// The one-parameter family on `1,3,5,7|2,4,6,8` with sums `(1, β, -1, -β)`.
pub fn build_m_beta(beta: &Rational, order: usize) -> Result<Rank2Module> {
    let one = Rational::from_integer(1.into());
    if beta == &Rational::from_integer(0.into()) || beta == &one || beta == &-one {
        return Err(Error::ExcludedParameter(beta.to_string()));
    }
    let profile = Profile::parse("1,3,5,7|2,4,6,8", 8)?;
    general_r_beta(&profile, beta, order)
}

/// Sums `(1, β, -1, -β)` on the first four branching points of a profile
/// with at least four boxes, placed on the `b_{i_g}`; every other
/// coefficient is zero.
pub fn general_r_beta(profile: &Profile, beta: &Rational, order: usize) -> Result<Rank2Module> {
    let geom = profile_geometry(&profile.i, &profile.j)?;
    if geom.r1 < 4 {
        return Err(Error::NotApplicable(format!("{} boxes, need 4", geom.r1)));
    }
    let one = Rational::from_integer(1.into());
    let values = [one.clone(), beta.clone(), -one, -beta.clone()];
    let mut b = CoefficientTuple::zeros(profile.n(), order);
    for (g, v) in values.into_iter().enumerate() {
        b.set(geom.branching_i[g], TruncatedSeries::constant(v, order));
    }
    build_m(profile, &b)
}

/// A module with `t ∤ P_g` at the three branching points after `start`
/// (1-based), where `P` takes the values `1, 2, -3`, and `P_g = 0` on the
/// run of branching points ending at `start`.
pub fn general_r_family(profile: &Profile, start: usize, order: usize) -> Result<Rank2Module> {
    let geom = profile_geometry(&profile.i, &profile.j)?;
    let r1 = geom.r1;
    if r1 < 3 || start == 0 || start > r1 {
        return Err(Error::NotApplicable(format!(
            "start {start} with {r1} branching points"
        )));
    }
    let mut b = CoefficientTuple::zeros(profile.n(), order);
    for (step, v) in [1, 2, -3].into_iter().enumerate() {
        let g = (start + step) % r1;
        b.set(geom.branching_i[g], TruncatedSeries::from_int(v, order));
    }
    build_m(profile, &b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::ratio;
    use crate::oracle::commutes;

    fn module(profile: &str, n: usize, b: &[&str]) -> Rank2Module {
        let p = Profile::parse(profile, n).unwrap();
        build_m(&p, &CoefficientTuple::parse(b, 4 * n).unwrap()).unwrap()
    }

    fn ints(profile: &str, n: usize, b: &[i64]) -> Rank2Module {
        let p = Profile::parse(profile, n).unwrap();
        build_m(&p, &CoefficientTuple::from_ints(b, 4 * n)).unwrap()
    }

    fn summands(r: &StructureReport) -> (String, String) {
        let (a, b) = r.summands().unwrap();
        (a.to_string(), b.to_string())
    }

    #[test]
    fn tight_three_examples() {
        let m = ints("1,3,5|2,4,6", 6, &[-2, 0, 0, 1, -1, 2]);
        let r = classify(&m).unwrap();
        assert_eq!(r.verdict, Verdict::Indecomposable);
        assert_eq!(r.iso_key, IsoKey::Unique);
        let sums = box_sums(&m).unwrap();
        let lits: Vec<String> = sums.pairs.iter().map(|p| p.to_literal()).collect();
        assert_eq!(lits, ["-2", "1", "1"]);

        let r = classify(&ints("1,3,5|2,4,6", 6, &[2, 0, -1, -1, 3, -3])).unwrap();
        assert_eq!(summands(&r), ("1,2,5".into(), "3,4,6".into()));
        let r = classify(&ints("1,3,5|2,4,6", 6, &[0; 6])).unwrap();
        assert_eq!(summands(&r), ("1,3,5".into(), "2,4,6".into()));
        assert_eq!(r.case, "split");
    }

    #[test]
    fn three_box_s_vectors() {
        let p = "1,2,5,6,8|3,4,7,9,10";
        let m1 = module(p, 10, &["0", "t", "0", "0", "0", "1", "-t", "-1", "0", "0"]);
        let m2 = module(p, 10, &["0", "1", "0", "0", "0", "1", "0", "-2", "0", "0"]);
        let r1 = classify(&m1).unwrap();
        let r2 = classify(&m2).unwrap();
        assert_eq!(r1.verdict, Verdict::Indecomposable);
        assert_eq!(r1.s_vector, Some(vec![0, 0, 1]));
        assert_eq!(r2.s_vector, Some(vec![0, 0, 0]));
        assert_eq!(build_iso(&m1, &m2).unwrap(), IsoOutcome::NonIsomorphic);
        let sums = box_sums(&m1).unwrap();
        assert_eq!(sums.sizes, vec![1, 2, 2]);
        let total = sums.pairs.iter().fold(TruncatedSeries::zero(40), |acc, p| &acc + p);
        assert!(total.is_zero());
    }

    #[test]
    fn tight_four_cases() {
        let p = "1,3,5,7|2,4,6,8";
        let r = classify(&ints(p, 8, &[0, 1, 2, 0, 0, -3, -1, 1])).unwrap();
        assert_eq!(r.iso_key.to_string(), "M_{7,8}");
        let r = classify(&ints(p, 8, &[1, 0, 2, 0, -1, 0, -2, 0])).unwrap();
        assert_eq!(r.iso_key, IsoKey::BetaSquared(ratio(4, 1)));
        let r = classify(&ints(p, 8, &[0, 0, 0, 0, 1, 0, -1, 0])).unwrap();
        assert_eq!(summands(&r), ("1,3,5,6".into(), "2,4,7,8".into()));
        let r = classify(&ints(p, 8, &[0, 0, 1, 0, 0, 0, -1, 0])).unwrap();
        assert_eq!(summands(&r), ("1,3,4,6".into(), "2,5,7,8".into()));
        let r = classify(&ints(p, 8, &[1, 0, -1, 0, 1, 0, -1, 0])).unwrap();
        assert_eq!(summands(&r), ("1,2,5,6".into(), "3,4,7,8".into()));
    }

    #[test]
    fn explicit_iso_on_tight_three() {
        let m1 = ints("1,3,5|2,4,6", 6, &[-2, 0, 0, 1, -1, 2]);
        let m2 = ints("1,3,5|2,4,6", 6, &[0, 1, -1, 2, -2, 0]);
        match build_iso(&m1, &m2).unwrap() {
            IsoOutcome::Isomorphic { base_vertex, family } => {
                assert_eq!(base_vertex, 0);
                assert_eq!(family[0].to_string(), "[[1, 0], [-3/2t, 1]]");
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn beta_family_keys() {
        let m = build_m_beta(&ratio(2, 1), 32).unwrap();
        assert_eq!(iso_key(&m).unwrap(), IsoKey::BetaSquared(ratio(4, 1)));
        let m = build_m_beta(&ratio(-2, 1), 32).unwrap();
        assert_eq!(iso_key(&m).unwrap(), IsoKey::BetaSquared(ratio(4, 1)));
        assert!(build_m_beta(&ratio(1, 1), 32).is_err());
    }

    #[test]
    fn explicit_iso_on_tight_four() {
        let iso = |a: &Rank2Module, b: &Rank2Module| match build_iso(a, b).unwrap() {
            IsoOutcome::Isomorphic { family, .. } => {
                assert!(commutes(a.representation(), b.representation(), &family));
                true
            }
            IsoOutcome::NonIsomorphic => false,
        };
        let m2 = build_m_beta(&ratio(2, 1), 32).unwrap();
        let m3 = build_m_beta(&ratio(3, 1), 32).unwrap();
        let m_2 = build_m_beta(&ratio(-2, 1), 32).unwrap();
        assert!(iso(&m2, &m_2));
        assert!(!iso(&m2, &m3));

        let p = "1,3,5,7|2,4,6,8";
        let a = ints(p, 8, &[1, 0, 1, 0, -1, 0, -1, 0]);
        let b = ints(p, 8, &[2, 0, 1, 0, -1, 0, -2, 0]);
        let c = ints(p, 8, &[1, 0, -1, 0, 2, 0, -2, 0]);
        assert_eq!(iso_key(&a).unwrap(), IsoKey::FourSums(3, 7));
        assert_eq!(iso_key(&c).unwrap(), IsoKey::FourSums(1, 5));
        assert!(iso(&a, &b));
        assert!(!iso(&a, &c));

        let d = ints(p, 8, &[0, 1, 2, 0, 0, -3, -1, 1]);
        let e = ints(p, 8, &[5, 0, 1, 0, -6, 0, 0, 0]);
        assert!(iso(&d, &e));
    }

    #[test]
    fn counts() {
        assert_eq!(count_indecomposables([1, 1, 1]), 1);
        assert_eq!(count_indecomposables([2, 2, 1]), 2);
        assert_eq!(count_indecomposables([2, 2, 2]), 5);
    }
}
