//! Rank 1 modules `L_I`, rank 2 modules `M(I,J)` and plain quiver
//! representations of the doubled cycle quiver.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::SeriesMatrix;
use crate::rim::{edge_kind, EdgeKind, Profile, Rim};
use crate::series::TruncatedSeries;

/// Free modules of rank `rank` at every vertex with maps `x_e: V_{e-1} -> V_e`
/// and `y_e: V_e -> V_{e-1}` for edges `e = 1..=n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Representation {
    n: usize,
    k: usize,
    rank: usize,
    x: Vec<SeriesMatrix>,
    y: Vec<SeriesMatrix>,
}

impl Representation {
    pub fn new(n: usize, k: usize, x: Vec<SeriesMatrix>, y: Vec<SeriesMatrix>) -> Result<Self> {
        if x.len() != n || y.len() != n || n == 0 {
            return Err(Error::Internal(format!("expected {n} edge maps")));
        }
        let rank = x[0].rows();
        let square = |m: &SeriesMatrix| m.rows() == rank && m.cols() == rank;
        if !x.iter().chain(&y).all(square) {
            return Err(Error::Internal("edge maps must be square of equal size".into()));
        }
        Ok(Representation { n, k, rank, x, y })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn order(&self) -> usize {
        self.x[0].order()
    }

    /// `x_e` for `e` in `1..=n`.
    pub fn x(&self, e: usize) -> &SeriesMatrix {
        &self.x[e - 1]
    }

    pub fn y(&self, e: usize) -> &SeriesMatrix {
        &self.y[e - 1]
    }

    /// `x_{v+steps} ... x_{v+1}`, the map from vertex `v` to vertex `v + steps`.
    pub fn path(&self, v: usize, steps: usize) -> SeriesMatrix {
        let mut acc = SeriesMatrix::identity(self.rank, self.order());
        for s in 1..=steps {
            let e = (v + s - 1) % self.n + 1;
            acc = self.x(e).mul(&acc);
        }
        acc
    }

    pub fn cycle_product(&self) -> SeriesMatrix {
        self.path(0, self.n)
    }

    pub fn direct_sum(&self, other: &Representation) -> Result<Representation> {
        if (self.n, self.k, self.order()) != (other.n, other.k, other.order()) {
            return Err(Error::MismatchedRims);
        }
        let x = self
            .x
            .iter()
            .zip(&other.x)
            .map(|(a, b)| SeriesMatrix::block_diag(a, b))
            .collect();
        let y = self
            .y
            .iter()
            .zip(&other.y)
            .map(|(a, b)| SeriesMatrix::block_diag(a, b))
            .collect();
        Representation::new(self.n, self.k, x, y)
    }

    pub fn with_order(&self, order: usize) -> Representation {
        Representation {
            n: self.n,
            k: self.k,
            rank: self.rank,
            x: self.x.iter().map(|m| m.with_order(order)).collect(),
            y: self.y.iter().map(|m| m.with_order(order)).collect(),
        }
    }

    /// Descriptions of every failing relation; empty when all hold.
    pub fn relation_failures(&self) -> Result<Vec<String>> {
        let order = self.order();
        if self.n - self.k >= order {
            return Err(Error::PrecisionExhausted {
                needed: self.n - self.k + 1,
                available: order,
            });
        }
        let t = TruncatedSeries::t_power(1, order);
        let t_id = SeriesMatrix::scalar(self.rank, &t);
        let mut failures = Vec::new();
        for e in 1..=self.n {
            if !self.x(e).mul(self.y(e)).agrees_with(&t_id) {
                failures.push(format!("x{e} y{e} != t"));
            }
            if !self.y(e).mul(self.x(e)).agrees_with(&t_id) {
                failures.push(format!("y{e} x{e} != t"));
            }
        }
        let power = TruncatedSeries::t_power(self.n - self.k, order);
        if !self
            .cycle_product()
            .agrees_with(&SeriesMatrix::scalar(self.rank, &power))
        {
            failures.push(format!("x^n != t^{}", self.n - self.k));
        }
        Ok(failures)
    }

    pub fn verify_relations(&self) -> Result<bool> {
        Ok(self.relation_failures()?.is_empty())
    }

    /// Flips the sign of every off-diagonal entry of every `y_e`. Used as a
    /// negative control by the regression suite.
    pub fn with_y_sign_fault(&self) -> Representation {
        let mut out = self.clone();
        for m in &mut out.y {
            for i in 0..m.rows() {
                for j in 0..m.cols() {
                    if i != j {
                        let v = -m.get(i, j);
                        m.set(i, j, v);
                    }
                }
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rank1Module {
    rim: Rim,
    x: Vec<TruncatedSeries>,
    y: Vec<TruncatedSeries>,
}

pub fn build_rank1(rim: &Rim, order: usize) -> Rank1Module {
    let one = TruncatedSeries::one(order);
    let t = TruncatedSeries::t_power(1, order);
    let (x, y) = (1..=rim.n())
        .map(|e| {
            if rim.contains(e) {
                (one.clone(), t.clone())
            } else {
                (t.clone(), one.clone())
            }
        })
        .unzip();
    Rank1Module {
        rim: rim.clone(),
        x,
        y,
    }
}

impl Rank1Module {
    pub fn rim(&self) -> &Rim {
        &self.rim
    }

    pub fn x_scalars(&self) -> &[TruncatedSeries] {
        &self.x
    }

    pub fn y_scalars(&self) -> &[TruncatedSeries] {
        &self.y
    }

    pub fn rank(&self) -> usize {
        1
    }

    pub fn representation(&self) -> Representation {
        let wrap = |s: &TruncatedSeries| SeriesMatrix::scalar(1, s);
        Representation {
            n: self.rim.n(),
            k: self.rim.k(),
            rank: 1,
            x: self.x.iter().map(wrap).collect(),
            y: self.y.iter().map(wrap).collect(),
        }
    }
}

/// Coefficients `b_e`, one per edge (zero where no coefficient is placed).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CoefficientTuple {
    values: Vec<TruncatedSeries>,
}

impl CoefficientTuple {
    pub fn zeros(n: usize, order: usize) -> Self {
        CoefficientTuple {
            values: vec![TruncatedSeries::zero(order); n],
        }
    }

    pub fn new(values: Vec<TruncatedSeries>) -> Self {
        CoefficientTuple { values }
    }

    pub fn from_ints(values: &[i64], order: usize) -> Self {
        CoefficientTuple {
            values: values
                .iter()
                .map(|&v| TruncatedSeries::from_int(v, order))
                .collect(),
        }
    }

    /// Parses series literals, one per edge.
    pub fn parse(literals: &[&str], order: usize) -> Result<Self> {
        Ok(CoefficientTuple {
            values: literals
                .iter()
                .map(|s| TruncatedSeries::parse(s, order))
                .collect::<Result<_>>()?,
        })
    }

    pub fn n(&self) -> usize {
        self.values.len()
    }

    /// `b_e` for `e` in `1..=n`.
    pub fn get(&self, e: usize) -> &TruncatedSeries {
        &self.values[e - 1]
    }

    pub fn set(&mut self, e: usize, value: TruncatedSeries) {
        self.values[e - 1] = value;
    }

    pub fn values(&self) -> &[TruncatedSeries] {
        &self.values
    }

    pub fn with_order(&self, order: usize) -> Self {
        CoefficientTuple {
            values: self.values.iter().map(|v| v.with_order(order)).collect(),
        }
    }

    pub fn scale(&self, c: &TruncatedSeries) -> Self {
        CoefficientTuple {
            values: self.values.iter().map(|v| v * c).collect(),
        }
    }

    pub fn to_literals(&self) -> Vec<String> {
        self.values.iter().map(TruncatedSeries::to_literal).collect()
    }
}

fn rank2_edge_maps(
    profile: &Profile,
    b: &CoefficientTuple,
) -> Result<(Vec<SeriesMatrix>, Vec<SeriesMatrix>)> {
    let n = profile.n();
    if b.n() != n {
        return Err(Error::Internal(format!("expected {n} coefficients, got {}", b.n())));
    }
    let order = b.get(1).order();
    let one = TruncatedSeries::one(order);
    let t = TruncatedSeries::t_power(1, order);
    let zero = TruncatedSeries::zero(order);
    let mut xs = Vec::with_capacity(n);
    let mut ys = Vec::with_capacity(n);
    for e in 1..=n {
        let be = b.get(e).clone();
        let (x, y) = match edge_kind(&profile.i, &profile.j, e) {
            EdgeKind::OnlyI => (
                SeriesMatrix::two_by_two(t.clone(), be.clone(), zero.clone(), one.clone()),
                SeriesMatrix::two_by_two(one.clone(), -be, zero.clone(), t.clone()),
            ),
            EdgeKind::OnlyJ => (
                SeriesMatrix::two_by_two(one.clone(), be.clone(), zero.clone(), t.clone()),
                SeriesMatrix::two_by_two(t.clone(), -be, zero.clone(), one.clone()),
            ),
            kind => {
                if !be.is_zero() {
                    return Err(Error::ProfileMismatch(e));
                }
                let (a, c) = if kind == EdgeKind::Both {
                    (&one, &t)
                } else {
                    (&t, &one)
                };
                (SeriesMatrix::scalar(2, a), SeriesMatrix::scalar(2, c))
            }
        };
        xs.push(x);
        ys.push(y);
    }
    Ok((xs, ys))
}

/// Off-diagonal entry of `x_n ... x_1` for the given coefficients.
pub fn cycle_off_diagonal(profile: &Profile, b: &CoefficientTuple) -> Result<TruncatedSeries> {
    let (xs, ys) = rank2_edge_maps(profile, b)?;
    let rep = Representation::new(profile.n(), profile.k(), xs, ys)?;
    Ok(rep.cycle_product().get(0, 1).clone())
}

/// `M(I,J)`: `L_J` is the first coordinate (the submodule) and `L_I` the
/// quotient, so every edge map is upper triangular.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rank2Module {
    profile: Profile,
    b: CoefficientTuple,
    rep: Representation,
}

pub fn build_m(profile: &Profile, b: &CoefficientTuple) -> Result<Rank2Module> {
    if profile.i == profile.j {
        return Err(Error::DegenerateProfile);
    }
    let (x, y) = rank2_edge_maps(profile, b)?;
    let rep = Representation::new(profile.n(), profile.k(), x, y)?;
    let z = rep.cycle_product().get(0, 1).clone();
    if profile.n() - profile.k() >= rep.order() {
        return Err(Error::PrecisionExhausted {
            needed: profile.n() - profile.k() + 1,
            available: rep.order(),
        });
    }
    if !z.is_zero() {
        return Err(Error::ConstraintViolated(z.to_literal()));
    }
    let failures = rep.relation_failures()?;
    if !failures.is_empty() {
        return Err(Error::RelationsFail(failures.join("; ")));
    }
    Ok(Rank2Module {
        profile: profile.clone(),
        b: b.clone(),
        rep,
    })
}

/// The representation built from the matrix recipe without checking the
/// cycle constraint.
pub fn build_m_unchecked(profile: &Profile, b: &CoefficientTuple) -> Result<Representation> {
    let (x, y) = rank2_edge_maps(profile, b)?;
    Representation::new(profile.n(), profile.k(), x, y)
}

impl Rank2Module {
    pub fn profile(&self) -> &Profile {
        &self.profile
    }

    pub fn b(&self) -> &CoefficientTuple {
        &self.b
    }

    pub fn n(&self) -> usize {
        self.profile.n()
    }

    pub fn k(&self) -> usize {
        self.profile.k()
    }

    pub fn order(&self) -> usize {
        self.rep.order()
    }

    pub fn rank(&self) -> usize {
        2
    }

    pub fn representation(&self) -> &Representation {
        &self.rep
    }

    pub fn x(&self, e: usize) -> &SeriesMatrix {
        self.rep.x(e)
    }

    pub fn y(&self, e: usize) -> &SeriesMatrix {
        self.rep.y(e)
    }

    pub fn with_order(&self, order: usize) -> Result<Rank2Module> {
        build_m(&self.profile, &self.b.with_order(order))
    }
}

/// Completes `partial` so that the cycle constraint holds, solving for the
/// coefficient on `free_edge`.
pub fn solve_constraint(
    profile: &Profile,
    partial: &CoefficientTuple,
    free_edge: usize,
) -> Result<CoefficientTuple> {
    if !matches!(
        edge_kind(&profile.i, &profile.j, free_edge),
        EdgeKind::OnlyI | EdgeKind::OnlyJ
    ) {
        return Err(Error::ProfileMismatch(free_edge));
    }
    let order = partial.get(1).order();
    // Extra headroom so the quotient is known to full precision.
    let wide = 2 * order + profile.n();
    let mut base = partial.with_order(wide);
    base.set(free_edge, TruncatedSeries::zero(wide));
    let z0 = cycle_off_diagonal(profile, &base)?;
    base.set(free_edge, TruncatedSeries::one(wide));
    let weight = &cycle_off_diagonal(profile, &base)? - &z0;
    let (e, unit) = weight.split_unit()?;
    let value = -(&z0.divide_exact(e)? * &unit.inverse()?);
    let mut out = partial.clone();
    out.set(free_edge, value.with_order(order));
    Ok(out)
}

/// Exponents `h_v` (vertex `v = 0..n`) of the canonical generator
/// `t^{h_v}: L_I -> L_J` of `Hom(L_I, L_J)`.
pub fn canonical_hom(i: &Rim, j: &Rim) -> Result<Vec<usize>> {
    if i.n() != j.n() || i.k() != j.k() {
        return Err(Error::MismatchedRims);
    }
    let n = i.n();
    let mut s = vec![0isize; n];
    for v in 1..n {
        s[v] = s[v - 1] + i.contains(v) as isize - j.contains(v) as isize;
    }
    let low = *s.iter().min().expect("n > 0");
    Ok(s.into_iter().map(|h| (h - low) as usize).collect())
}

#[derive(Serialize, Deserialize)]
struct ModuleJson {
    n: usize,
    k: usize,
    profile: String,
    b_tuple: Vec<String>,
    trunc_order: usize,
}

impl Serialize for Rank2Module {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        ModuleJson {
            n: self.n(),
            k: self.k(),
            profile: self.profile.to_string(),
            b_tuple: self.b.to_literals(),
            trunc_order: self.order(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Rank2Module {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = ModuleJson::deserialize(deserializer)?;
        let profile = Profile::parse(&raw.profile, raw.n).map_err(D::Error::custom)?;
        if profile.k() != raw.k {
            return Err(D::Error::custom(format!(
                "profile has k = {}, expected {}",
                profile.k(),
                raw.k
            )));
        }
        let literals: Vec<&str> = raw.b_tuple.iter().map(String::as_str).collect();
        let b = CoefficientTuple::parse(&literals, raw.trunc_order).map_err(D::Error::custom)?;
        build_m(&profile, &b).map_err(D::Error::custom)
    }
}
