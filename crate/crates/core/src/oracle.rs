//! Brute-force endomorphism computations that look only at the matrices.
//!
//! A morphism `φ` between two Cohen-Macaulay representations is determined by
//! `φ_0`, because over the fraction field every `x_e` is invertible and
//! `φ_v = P'_v φ_0 P_v^{-1}` with `P_v = x_v ... x_1`. The Hom lattice is the
//! set of integral `φ_0` for which every `φ_v` is integral, and composition
//! of morphisms is multiplication of the `φ_0`'s.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, QPoly};
use crate::matrix::SeriesMatrix;
use crate::module::Representation;
use crate::rim::Rim;
use crate::series::{Rational, TruncatedSeries};
use num_traits::{One, Zero};

/// Paths `P_v` out of vertex 0 with their adjugates and determinant data.
#[derive(Clone, Debug)]
struct Transport {
    paths: Vec<SeriesMatrix>,
    adjugates: Vec<SeriesMatrix>,
    det_val: Vec<usize>,
    det_unit_inv: Vec<TruncatedSeries>,
}

impl Transport {
    fn new(rep: &Representation) -> Result<Self> {
        let n = rep.n();
        let mut paths = Vec::with_capacity(n);
        let mut acc = SeriesMatrix::identity(rep.rank(), rep.order());
        paths.push(acc.clone());
        for e in 1..n {
            acc = rep.x(e).mul(&acc);
            paths.push(acc.clone());
        }
        let mut adjugates = Vec::with_capacity(n);
        let mut det_val = Vec::with_capacity(n);
        let mut det_unit_inv = Vec::with_capacity(n);
        for p in &paths {
            adjugates.push(p.adjugate());
            let (v, u) = p.det().split_unit()?;
            det_val.push(v);
            det_unit_inv.push(u.inverse()?);
        }
        Ok(Transport {
            paths,
            adjugates,
            det_val,
            det_unit_inv,
        })
    }
}

fn flatten(m: &SeriesMatrix) -> Vec<TruncatedSeries> {
    m.entries().to_vec()
}

fn unflatten(entries: &[TruncatedSeries], rows: usize, cols: usize) -> SeriesMatrix {
    debug_assert_eq!(entries.len(), rows * cols);
    SeriesMatrix::from_rows(entries.chunks(cols).map(<[_]>::to_vec).collect())
}

/// A `Z`-basis of `Hom(M, M')`, each generator recorded by its component at
/// vertex 0.
#[derive(Clone, Debug)]
pub struct HomBasis {
    n: usize,
    source_rank: usize,
    target_rank: usize,
    generators: Vec<SeriesMatrix>,
    lattice: SeriesMatrix,
    source: Transport,
    target: Transport,
}

/// Computes the Hom lattice by imposing integrality at each vertex in turn.
pub fn hom_basis(source: &Representation, target: &Representation) -> Result<HomBasis> {
    if (source.n(), source.k()) != (target.n(), target.k()) {
        return Err(Error::MismatchedRims);
    }
    if source.order() != target.order() {
        return Err(Error::OrderMismatch(source.order(), target.order()));
    }
    let order = source.order();
    let (r1, r2) = (source.rank(), target.rank());
    let m = r1 * r2;
    let src = Transport::new(source)?;
    let tgt = Transport::new(target)?;
    let mut lattice = SeriesMatrix::identity(m, order);
    for v in 1..source.n() {
        let e = src.det_val[v];
        if e == 0 {
            continue;
        }
        if e >= order {
            return Err(Error::PrecisionExhausted {
                needed: e + 1,
                available: order,
            });
        }
        let columns: Vec<Vec<TruncatedSeries>> = (0..m)
            .map(|c| {
                let phi0 = unflatten(&lattice.column(c), r2, r1);
                flatten(&tgt.paths[v].mul(&phi0).mul(&src.adjugates[v]))
            })
            .collect();
        let conditions = SeriesMatrix::from_rows(
            (0..m)
                .map(|row| columns.iter().map(|col| col[row].clone()).collect())
                .collect(),
        );
        let kernel = linalg::kernel_lattice(&conditions, e)?;
        lattice = lattice.mul(&kernel);
    }
    let generators = (0..m)
        .map(|c| unflatten(&lattice.column(c), r2, r1))
        .collect();
    Ok(HomBasis {
        n: source.n(),
        source_rank: r1,
        target_rank: r2,
        generators,
        lattice,
        source: src,
        target: tgt,
    })
}

impl HomBasis {
    pub fn free_rank(&self) -> usize {
        self.generators.len()
    }

    /// Components at vertex 0.
    pub fn generators(&self) -> &[SeriesMatrix] {
        &self.generators
    }

    pub fn order(&self) -> usize {
        self.lattice.order()
    }

    /// Elementary divisor exponents of the lattice inside `M_{r'×r}(Z)`;
    /// a basis-independent fingerprint.
    pub fn invariants(&self) -> Result<Vec<usize>> {
        linalg::elementary_divisors(&self.lattice)
    }

    /// The full family `φ_v`, `v = 0..n-1`, determined by `φ_0`.
    pub fn family(&self, phi0: &SeriesMatrix) -> Result<Vec<SeriesMatrix>> {
        (0..self.n)
            .map(|v| {
                if v == 0 {
                    return Ok(phi0.clone());
                }
                let raw = self.target.paths[v]
                    .mul(phi0)
                    .mul(&self.source.adjugates[v]);
                let unit_inv = &self.source.det_unit_inv[v];
                raw.divide_exact(self.source.det_val[v])
                    .map(|m| m.scale(unit_inv))
                    .map_err(|err| match err {
                        Error::NotDivisible { .. } => Error::NotIntegral(v),
                        other => other,
                    })
            })
            .collect()
    }

    /// Coordinates of `φ_0` in the basis; fails with `NotIntegral` if `φ_0`
    /// is not a morphism.
    pub fn coordinates(&self, phi0: &SeriesMatrix) -> Result<Vec<TruncatedSeries>> {
        let rhs = SeriesMatrix::from_rows(flatten(phi0).into_iter().map(|s| vec![s]).collect());
        let x = linalg::solve_integral(&self.lattice, &rhs)?;
        Ok(x.column(0))
    }

    pub fn contains(&self, phi0: &SeriesMatrix) -> bool {
        self.family(phi0).is_ok()
    }

    pub fn source_rank(&self) -> usize {
        self.source_rank
    }

    pub fn target_rank(&self) -> usize {
        self.target_rank
    }
}

/// Whether `φ_v x_e = x'_e φ_{v-1}` and `φ_{v-1} y_e = y'_e φ_v` hold on
/// every edge, up to the known precision.
pub fn commutes(source: &Representation, target: &Representation, family: &[SeriesMatrix]) -> bool {
    let n = source.n();
    (1..=n).all(|e| {
        let prev = &family[e - 1];
        let next = &family[e % n];
        next.mul(source.x(e)).agrees_with(&target.x(e).mul(prev))
            && prev.mul(source.y(e)).agrees_with(&target.y(e).mul(next))
    })
}

/// A finite dimensional associative algebra over `Q` given by structure
/// constants: `table[a][b]` holds the coordinates of `g_a g_b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteAlgebra {
    dim: usize,
    table: Vec<Vec<Vec<Rational>>>,
    unit: Vec<Rational>,
}

impl FiniteAlgebra {
    pub fn new(table: Vec<Vec<Vec<Rational>>>, unit: Vec<Rational>) -> Self {
        FiniteAlgebra {
            dim: unit.len(),
            table,
            unit,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn unit(&self) -> &[Rational] {
        &self.unit
    }

    pub fn structure_constants(&self) -> &[Vec<Vec<Rational>>] {
        &self.table
    }

    pub fn mul(&self, x: &[Rational], y: &[Rational]) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); self.dim];
        for (a, xa) in x.iter().enumerate() {
            if xa.is_zero() {
                continue;
            }
            for (b, yb) in y.iter().enumerate() {
                if yb.is_zero() {
                    continue;
                }
                let coeff = xa * yb;
                for (c, s) in self.table[a][b].iter().enumerate() {
                    if !s.is_zero() {
                        out[c] += &coeff * s;
                    }
                }
            }
        }
        out
    }

    fn basis_vector(&self, a: usize) -> Vec<Rational> {
        let mut v = vec![Rational::zero(); self.dim];
        v[a] = Rational::one();
        v
    }

    pub fn is_associative(&self) -> bool {
        (0..self.dim).all(|a| {
            (0..self.dim).all(|b| {
                (0..self.dim).all(|c| {
                    let (ea, eb, ec) = (self.basis_vector(a), self.basis_vector(b), self.basis_vector(c));
                    self.mul(&self.mul(&ea, &eb), &ec) == self.mul(&ea, &self.mul(&eb, &ec))
                })
            })
        })
    }

    /// Trace of left multiplication by `g_c`.
    fn basis_traces(&self) -> Vec<Rational> {
        (0..self.dim)
            .map(|c| (0..self.dim).map(|d| self.table[c][d][d].clone()).sum())
            .collect()
    }

    /// Jacobson radical as the kernel of the trace form
    /// `(x, y) -> tr(L_{xy})`, valid in characteristic zero.
    pub fn radical(&self) -> Vec<Vec<Rational>> {
        let traces = self.basis_traces();
        let gram: Vec<Vec<Rational>> = (0..self.dim)
            .map(|a| {
                (0..self.dim)
                    .map(|b| {
                        self.table[a][b]
                            .iter()
                            .zip(&traces)
                            .map(|(s, tr)| s * tr)
                            .sum()
                    })
                    .collect()
            })
            .collect();
        linalg::kernel(&gram, self.dim)
    }

    pub fn radical_dim(&self) -> usize {
        self.radical().len()
    }

    pub fn semisimple_dim(&self) -> usize {
        self.dim - self.radical_dim()
    }

    pub fn in_radical(&self, x: &[Rational]) -> bool {
        let rad = self.radical();
        let mut rows: Vec<Vec<Rational>> = rad.clone();
        rows.push(x.to_vec());
        linalg::rank(&rows) == rad.len()
    }

    /// Minimal polynomial of `x`, monic.
    pub fn minimal_polynomial(&self, x: &[Rational]) -> QPoly {
        let mut powers = vec![self.unit.clone()];
        loop {
            let next = self.mul(powers.last().expect("nonempty"), x);
            powers.push(next);
            // columns are the powers; a kernel vector is a relation
            let rows: Vec<Vec<Rational>> = (0..self.dim)
                .map(|c| powers.iter().map(|p| p[c].clone()).collect())
                .collect();
            let kernel = linalg::kernel(&rows, powers.len());
            if let Some(rel) = kernel.first() {
                let lead = rel.last().expect("nonempty").clone();
                if !lead.is_zero() {
                    return QPoly::new(rel.iter().map(|c| c / &lead).collect());
                }
            }
        }
    }

    pub fn eval(&self, p: &QPoly, x: &[Rational]) -> Vec<Rational> {
        let mut acc = vec![Rational::zero(); self.dim];
        let mut power = self.unit.clone();
        for (i, c) in p.0.iter().enumerate() {
            if i > 0 {
                power = self.mul(&power, x);
            }
            if !c.is_zero() {
                for (a, pw) in acc.iter_mut().zip(&power) {
                    *a += c * pw;
                }
            }
        }
        acc
    }

    /// A nontrivial idempotent, if one with rational coordinates is found.
    ///
    /// For a candidate element with minimal polynomial `(x-λ)^m q`, `q`
    /// coprime to `x-λ` and nonconstant, the projection onto the generalised
    /// `λ`-eigenspace is `u(x) q(x)` where `s (x-λ)^m + u q = 1`.
    pub fn find_idempotent(&self) -> Option<Vec<Rational>> {
        if self.semisimple_dim() < 2 {
            return None;
        }
        self.candidates().into_iter().find_map(|x| self.split_by(&x))
    }

    fn split_by(&self, x: &[Rational]) -> Option<Vec<Rational>> {
        let p = self.minimal_polynomial(x);
        for root in p.rational_roots() {
            let m = linalg::multiplicity(&p, &root);
            let mut power = QPoly::one();
            for _ in 0..m {
                power = power.mul(&QPoly::linear(&root));
            }
            let (q, _) = p.div_rem(&power);
            if q.degree() == Some(0) {
                continue;
            }
            let (g, _, u) = power.ext_gcd(&q);
            debug_assert_eq!(g, QPoly::one());
            let e = self.eval(&u.mul(&q), x);
            if self.mul(&e, &e) == e && e.iter().any(|c| !c.is_zero()) && e != self.unit {
                return Some(e);
            }
        }
        None
    }

    /// Basis vectors, pairwise sums and differences, then a fixed sequence
    /// of small combinations.
    fn candidates(&self) -> Vec<Vec<Rational>> {
        let d = self.dim;
        let mut out: Vec<Vec<Rational>> = (0..d).map(|a| self.basis_vector(a)).collect();
        for a in 0..d {
            for b in a + 1..d {
                for sign in [1i64, -1] {
                    let mut v = self.basis_vector(a);
                    v[b] = Rational::from_integer(sign.into());
                    out.push(v);
                }
            }
        }
        for s in 0..32i64 {
            out.push(
                (0..d as i64)
                    .map(|i| Rational::from_integer((((i + 1) * (s + 3) * 7 + s * s) % 7 - 3).into()))
                    .collect(),
            );
        }
        out
    }
}

/// `End(M)` together with its reduction modulo `t`.
#[derive(Clone, Debug)]
pub struct EndRing {
    pub hom: HomBasis,
    pub algebra: FiniteAlgebra,
}

/// Structure constants of `End(M)/t End(M)`.
pub fn end_mod_t(rep: &Representation) -> Result<EndRing> {
    let hom = hom_basis(rep, rep)?;
    let m = hom.free_rank();
    let products: Vec<Vec<TruncatedSeries>> = (0..m)
        .flat_map(|a| (0..m).map(move |b| (a, b)))
        .map(|(a, b)| flatten(&hom.generators[a].mul(&hom.generators[b])))
        .collect();
    // one solve with all products as right-hand sides
    let rhs = SeriesMatrix::from_rows(
        (0..m)
            .map(|row| products.iter().map(|p| p[row].clone()).collect())
            .collect(),
    );
    let coords = linalg::solve_integral(&hom.lattice, &rhs)?;
    let mut table = vec![vec![Vec::new(); m]; m];
    for a in 0..m {
        for b in 0..m {
            table[a][b] = (0..m)
                .map(|c| coords.get(c, a * m + b).constant_term().clone())
                .collect();
        }
    }
    let identity = SeriesMatrix::identity(rep.rank(), rep.order());
    let unit = hom
        .coordinates(&identity)?
        .iter()
        .map(|s| s.constant_term().clone())
        .collect();
    Ok(EndRing {
        hom,
        algebra: FiniteAlgebra::new(table, unit),
    })
}

/// Verdict and summary numbers computed at a single precision.
#[derive(Clone, Debug, PartialEq, Eq)]
struct Analysis {
    end_rank: usize,
    radical_dim: usize,
    ss_dim: usize,
    invariants: Vec<usize>,
}

fn analyse(rep: &Representation) -> Result<(EndRing, Analysis)> {
    let ring = end_mod_t(rep)?;
    let analysis = Analysis {
        end_rank: ring.hom.free_rank(),
        radical_dim: ring.algebra.radical_dim(),
        ss_dim: ring.algebra.semisimple_dim(),
        invariants: ring.hom.invariants()?,
    };
    Ok((ring, analysis))
}

/// Runs the analysis at `N` and `N + 4` and insists that they agree.
fn stable_analysis(rep: &Representation) -> Result<(EndRing, Analysis)> {
    let (ring, a) = analyse(rep)?;
    let wider = rep.with_order(rep.order() + 4);
    let (_, b) = analyse(&wider)?;
    if a != b {
        return Err(Error::PrecisionExhausted {
            needed: rep.order() + 4,
            available: rep.order(),
        });
    }
    Ok((ring, a))
}

pub fn is_indecomposable(rep: &Representation) -> Result<bool> {
    Ok(stable_analysis(rep)?.1.ss_dim == 1)
}

/// A nontrivial idempotent endomorphism, as its component at vertex 0,
/// lifted `t`-adically to full working precision.
pub fn find_idempotent(ring: &EndRing) -> Result<Option<SeriesMatrix>> {
    let Some(e_bar) = ring.algebra.find_idempotent() else {
        return Ok(None);
    };
    let order = ring.hom.order();
    let gens = ring.hom.generators();
    let mut e = SeriesMatrix::zeros(gens[0].rows(), gens[0].cols(), order);
    for (c, g) in e_bar.iter().zip(gens) {
        if !c.is_zero() {
            e = e.add(&g.scale_rational(c));
        }
    }
    for _ in 0..=usize::BITS - order.leading_zeros() + 1 {
        let e2 = e.mul(&e);
        if e2.agrees_with(&e) {
            return Ok(Some(e));
        }
        let e3 = e2.mul(&e);
        e = e2.scale_rational(&Rational::from_integer(3.into()))
            .sub(&e3.scale_rational(&Rational::from_integer(2.into())));
    }
    Err(Error::Internal("idempotent lifting did not converge".into()))
}

/// Reads the rims of the two rank 1 summands cut out by the idempotent `e`
/// (and `1 - e`) of a rank 2 module, by following the image lines around
/// the cycle and recording where `x` acts by a unit.
pub fn summand_rims(rep: &Representation, e0: &SeriesMatrix) -> Result<(Rim, Rim)> {
    if rep.rank() != 2 {
        return Err(Error::NotApplicable("eigenline walk needs rank 2".into()));
    }
    let hom = hom_basis(rep, rep)?;
    summand_rims_of_family(rep, &hom.family(e0)?)
}

/// Summand rims read off an idempotent given at every vertex.
pub fn summand_rims_of_family(rep: &Representation, family: &[SeriesMatrix]) -> Result<(Rim, Rim)> {
    let id = SeriesMatrix::identity(rep.rank(), rep.order());
    let complement: Vec<SeriesMatrix> = family.iter().map(|e| id.sub(e)).collect();
    let x_rim = eigenline_rim(rep, family)?;
    let y_rim = eigenline_rim(rep, &complement)?;
    Ok(if x_rim.elements() <= y_rim.elements() {
        (x_rim, y_rim)
    } else {
        (y_rim, x_rim)
    })
}

fn image_generator(phi: &SeriesMatrix, v: usize) -> Result<(Vec<TruncatedSeries>, usize)> {
    for c in 0..phi.cols() {
        let col = phi.column(c);
        if let Some(pos) = col.iter().position(TruncatedSeries::is_unit) {
            return Ok((col, pos));
        }
    }
    Err(Error::EigenlineAmbiguous(v))
}

fn eigenline_rim(rep: &Representation, family: &[SeriesMatrix]) -> Result<Rim> {
    let n = rep.n();
    let lines: Vec<_> = family
        .iter()
        .enumerate()
        .map(|(v, phi)| image_generator(phi, v))
        .collect::<Result<_>>()?;
    let mut rim = Vec::new();
    for e in 1..=n {
        let (prev, _) = &lines[e - 1];
        let (next, pos) = &lines[e % n];
        let moved = rep.x(e).mul(&SeriesMatrix::from_rows(
            prev.iter().map(|s| vec![s.clone()]).collect(),
        ));
        let scalar = &moved.get(*pos, 0).clone() * &next[*pos].inverse()?;
        match scalar.known_valuation() {
            0 => rim.push(e),
            1 => {}
            _ => return Err(Error::EigenlineAmbiguous(e % n)),
        }
    }
    Rim::new(n, rim)
}

/// The oracle's decomposition: `None` for indecomposable modules, otherwise
/// the idempotent at vertex 0 and the summand rims (sorted).
pub fn decompose(rep: &Representation) -> Result<Option<(SeriesMatrix, Rim, Rim)>> {
    let (ring, analysis) = stable_analysis(rep)?;
    if analysis.ss_dim == 1 {
        return Ok(None);
    }
    let e = find_idempotent(&ring)?
        .ok_or_else(|| Error::Internal("no rational idempotent found".into()))?;
    let (x, y) = summand_rims(rep, &e)?;
    Ok(Some((e, x, y)))
}

/// Isomorphism test. Indecomposable modules are compared through Hom: they
/// are isomorphic iff some composite `M -> M' -> M` is a unit of the local
/// ring `End(M)`. Decomposable rank 2 modules are compared by their rank 1
/// summands.
pub fn iso_oracle(m1: &Representation, m2: &Representation) -> Result<bool> {
    if m1.rank() != m2.rank() || (m1.n(), m1.k()) != (m2.n(), m2.k()) {
        return Ok(false);
    }
    let (ring1, a1) = stable_analysis(m1)?;
    let (_, a2) = stable_analysis(m2)?;
    if a1.ss_dim != a2.ss_dim || a1.radical_dim != a2.radical_dim {
        return Ok(false);
    }
    if a1.ss_dim > 1 {
        let d1 = decompose(m1)?;
        let d2 = decompose(m2)?;
        return Ok(match (d1, d2) {
            (Some((_, x1, y1)), Some((_, x2, y2))) => (x1, y1) == (x2, y2),
            _ => false,
        });
    }
    let forward = hom_basis(m1, m2)?;
    let backward = hom_basis(m2, m1)?;
    for f in forward.generators() {
        for g in backward.generators() {
            let composite = g.mul(f);
            let coords: Vec<Rational> = ring1
                .hom
                .coordinates(&composite)?
                .iter()
                .map(|s| s.constant_term().clone())
                .collect();
            if !ring1.algebra.in_radical(&coords) {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

/// Semisimple dimension of `End(M1 ⊕ M2)/t`; for indecomposable `M1`, `M2`
/// it is 4 when they are isomorphic and 2 otherwise.
pub fn semisimple_dim_of_sum(m1: &Representation, m2: &Representation) -> Result<usize> {
    let sum = m1.direct_sum(m2)?;
    Ok(stable_analysis(&sum)?.1.ss_dim)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum OracleVerdict {
    Indecomposable,
    Decomposable,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleReport {
    pub end_rank: usize,
    pub end_mod_t_dim: usize,
    pub radical_dim: usize,
    pub ss_quotient_dim: usize,
    pub verdict: OracleVerdict,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub summands: Option<[String; 2]>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub idempotent: Option<Vec<Vec<String>>>,
    pub trunc_order: usize,
}

pub fn oracle_report(rep: &Representation) -> Result<OracleReport> {
    let (ring, analysis) = stable_analysis(rep)?;
    let mut report = OracleReport {
        end_rank: analysis.end_rank,
        end_mod_t_dim: ring.algebra.dim(),
        radical_dim: analysis.radical_dim,
        ss_quotient_dim: analysis.ss_dim,
        verdict: OracleVerdict::Indecomposable,
        summands: None,
        idempotent: None,
        trunc_order: rep.order(),
    };
    if analysis.ss_dim > 1 {
        report.verdict = OracleVerdict::Decomposable;
        if let Some(e) = find_idempotent(&ring)? {
            if rep.rank() == 2 {
                let (x, y) = summand_rims(rep, &e)?;
                report.summands = Some([x.to_string(), y.to_string()]);
            }
            report.idempotent = Some(e.to_literals());
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::module::{build_m, build_rank1, CoefficientTuple};
    use crate::rim::Profile;

    fn example(b: &[i64]) -> Representation {
        let p = Profile::parse("1,3,5|2,4,6", 6).unwrap();
        build_m(&p, &CoefficientTuple::from_ints(b, 24))
            .unwrap()
            .representation()
            .clone()
    }

    #[test]
    fn rank1_hom_is_free_of_rank_one() {
        let i = build_rank1(&Rim::parse("1,3,5", 6).unwrap(), 24).representation();
        let j = build_rank1(&Rim::parse("2,4,6", 6).unwrap(), 24).representation();
        let h = hom_basis(&i, &j).unwrap();
        assert_eq!(h.free_rank(), 1);
        let fam = h.family(&h.generators()[0]).unwrap();
        assert!(commutes(&i, &j, &fam));
        let ring = end_mod_t(&i).unwrap();
        assert_eq!(ring.algebra.dim(), 1);
        assert_eq!(ring.algebra.radical_dim(), 0);
    }

    #[test]
    fn example_module_is_local() {
        let m = example(&[-2, 0, 0, 1, -1, 2]);
        let ring = end_mod_t(&m).unwrap();
        assert_eq!(ring.hom.free_rank(), 4);
        assert!(ring.algebra.is_associative());
        assert_eq!(ring.algebra.semisimple_dim(), 1);
        for g in ring.hom.generators() {
            assert!(commutes(&m, &m, &ring.hom.family(g).unwrap()));
        }
        assert!(is_indecomposable(&m).unwrap());
    }

    #[test]
    fn split_module_has_two_summands() {
        let m = example(&[0, 0, 0, 0, 0, 0]);
        let (e, x, y) = decompose(&m).unwrap().unwrap();
        assert!(e.mul(&e).agrees_with(&e));
        assert_eq!((x.to_string(), y.to_string()), ("1,3,5".into(), "2,4,6".into()));
        let m = example(&[2, 0, -1, -1, 3, -3]);
        let (_, x, y) = decompose(&m).unwrap().unwrap();
        assert_eq!((x.to_string(), y.to_string()), ("1,2,5".into(), "3,4,6".into()));
    }

    #[test]
    fn upper_triangular_algebra_radical() {
        // basis e11, e12, e22 of upper triangular 2x2 matrices
        let z = || Rational::zero();
        let o = || Rational::one();
        let v = |a: usize| {
            let mut x = vec![z(), z(), z()];
            x[a] = o();
            x
        };
        let zero = vec![z(), z(), z()];
        let table = vec![
            vec![v(0), v(1), zero.clone()],
            vec![zero.clone(), zero.clone(), v(1)],
            vec![zero.clone(), zero.clone(), v(2)],
        ];
        let alg = FiniteAlgebra::new(table, vec![o(), z(), o()]);
        assert!(alg.is_associative());
        assert_eq!(alg.radical_dim(), 1);
        let e = alg.find_idempotent().unwrap();
        assert_eq!(alg.mul(&e, &e), e);
    }

    #[test]
    fn iso_of_example_pair() {
        let a = example(&[-2, 0, 0, 1, -1, 2]);
        let b = example(&[0, 1, -1, 2, -2, 0]);
        assert!(iso_oracle(&a, &b).unwrap());
        assert_eq!(semisimple_dim_of_sum(&a, &b).unwrap(), 4);
        let split = example(&[0, 0, 0, 0, 0, 0]);
        assert!(!iso_oracle(&a, &split).unwrap());
    }
}
