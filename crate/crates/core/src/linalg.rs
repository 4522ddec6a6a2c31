//! Linear algebra over the discrete valuation ring `Q[[t]]` (truncated) and
//! over `Q`, plus a little univariate polynomial arithmetic.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::matrix::SeriesMatrix;
use crate::series::{Rational, TruncatedSeries};

fn rows_of(m: &SeriesMatrix) -> Vec<Vec<TruncatedSeries>> {
    (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| m.get(i, j).clone()).collect())
        .collect()
}

fn nonzero_known(s: &TruncatedSeries) -> Option<usize> {
    let v = s.known_valuation();
    (v < s.precision()).then_some(v)
}

fn quotient_factor(entry: &TruncatedSeries, v: usize, unit_inv: &TruncatedSeries) -> Result<TruncatedSeries> {
    Ok((&entry.divide_exact(v)? * unit_inv).lift_exact())
}

/// Basis (as columns) of the lattice `{c in Z^m : B c = 0 mod t^e}`.
///
/// Smith-style elimination with minimal-valuation pivots. Column operations
/// are accumulated; the multipliers are lifted to exact series, which is
/// harmless because any lift spans the same lattice.
pub fn kernel_lattice(b: &SeriesMatrix, e: usize) -> Result<SeriesMatrix> {
    let order = b.order();
    let m = b.cols();
    if e > order {
        return Err(Error::PrecisionExhausted {
            needed: e,
            available: order,
        });
    }
    if b.precision() < e {
        return Err(Error::PrecisionExhausted {
            needed: e,
            available: b.precision(),
        });
    }
    let rows = b.rows();
    let mut w: Vec<Vec<TruncatedSeries>> = rows_of(b)
        .into_iter()
        .map(|r| r.into_iter().map(|s| s.truncated(e)).collect())
        .collect();
    let mut c = rows_of(&SeriesMatrix::identity(m, order));
    let mut pivots: Vec<Option<usize>> = vec![None; m];

    for p in 0..rows.min(m) {
        let mut best: Option<(usize, usize, usize)> = None;
        for (i, row) in w.iter().enumerate().skip(p) {
            for (j, entry) in row.iter().enumerate().skip(p) {
                if let Some(v) = nonzero_known(entry) {
                    if best.is_none_or(|(bv, _, _)| v < bv) {
                        best = Some((v, i, j));
                    }
                }
            }
        }
        let Some((v, bi, bj)) = best else { break };
        w.swap(p, bi);
        for row in w.iter_mut() {
            row.swap(p, bj);
        }
        for row in c.iter_mut() {
            row.swap(p, bj);
        }
        let (_, unit) = w[p][p].split_unit()?;
        let unit_inv = unit.inverse()?;
        for j in p + 1..m {
            if nonzero_known(&w[p][j]).is_none() {
                continue;
            }
            let f = quotient_factor(&w[p][j], v, &unit_inv)?;
            for row in w.iter_mut() {
                let delta = &f * &row[p];
                row[j] = (&row[j] - &delta).truncated(e);
            }
            for row in c.iter_mut() {
                let delta = &f * &row[p];
                row[j] -= &delta;
            }
        }
        for i in p + 1..rows {
            if nonzero_known(&w[i][p]).is_none() {
                continue;
            }
            let f = quotient_factor(&w[i][p], v, &unit_inv)?;
            for j in p..m {
                let delta = &f * &w[p][j];
                w[i][j] = (&w[i][j] - &delta).truncated(e);
            }
        }
        pivots[p] = Some(v);
    }

    let mut basis = SeriesMatrix::from_rows(c);
    for (j, pivot) in pivots.iter().enumerate() {
        let shift = pivot.map_or(0, |v| e - v);
        if shift == 0 {
            continue;
        }
        for i in 0..m {
            let s = basis.get(i, j).mul_t_power(shift);
            basis.set(i, j, s);
        }
    }
    Ok(basis)
}

/// Valuations of the Smith diagonal of a square matrix of full rank.
pub fn elementary_divisors(g: &SeriesMatrix) -> Result<Vec<usize>> {
    let m = g.rows();
    let mut w = rows_of(g);
    let mut out = Vec::with_capacity(m);
    for p in 0..m {
        let mut best: Option<(usize, usize, usize)> = None;
        for (i, row) in w.iter().enumerate().skip(p) {
            for (j, entry) in row.iter().enumerate().skip(p) {
                if let Some(v) = nonzero_known(entry) {
                    if best.is_none_or(|(bv, _, _)| v < bv) {
                        best = Some((v, i, j));
                    }
                }
            }
        }
        let Some((v, bi, bj)) = best else {
            return Err(Error::PrecisionExhausted {
                needed: g.order() + 1,
                available: g.order(),
            });
        };
        w.swap(p, bi);
        for row in w.iter_mut() {
            row.swap(p, bj);
        }
        let (_, unit) = w[p][p].split_unit()?;
        let unit_inv = unit.inverse()?;
        for i in p + 1..m {
            if nonzero_known(&w[i][p]).is_none() {
                continue;
            }
            let f = quotient_factor(&w[i][p], v, &unit_inv)?;
            for j in p..m {
                let delta = &f * &w[p][j];
                w[i][j] -= &delta;
            }
        }
        out.push(v);
    }
    out.sort_unstable();
    Ok(out)
}

/// Solves `G X = V` for `X` with integral entries, where `G` is square of
/// full rank over the fraction field.
pub fn solve_integral(g: &SeriesMatrix, v: &SeriesMatrix) -> Result<SeriesMatrix> {
    let m = g.rows();
    assert_eq!(m, g.cols(), "square system expected");
    assert_eq!(m, v.rows(), "right-hand side has wrong height");
    let q = v.cols();
    let mut w = rows_of(g);
    let mut rhs = rows_of(v);
    let mut perm: Vec<usize> = (0..m).collect();
    let mut pivots = Vec::with_capacity(m);
    for p in 0..m {
        let mut best: Option<(usize, usize, usize)> = None;
        for (i, row) in w.iter().enumerate().skip(p) {
            for (j, entry) in row.iter().enumerate().skip(p) {
                if let Some(val) = nonzero_known(entry) {
                    if best.is_none_or(|(bv, _, _)| val < bv) {
                        best = Some((val, i, j));
                    }
                }
            }
        }
        let Some((val, bi, bj)) = best else {
            return Err(Error::PrecisionExhausted {
                needed: g.order() + 1,
                available: g.precision(),
            });
        };
        w.swap(p, bi);
        rhs.swap(p, bi);
        for row in w.iter_mut() {
            row.swap(p, bj);
        }
        perm.swap(p, bj);
        let (_, unit) = w[p][p].split_unit()?;
        let unit_inv = unit.inverse()?;
        for i in p + 1..m {
            if nonzero_known(&w[i][p]).is_none() {
                continue;
            }
            let f = quotient_factor(&w[i][p], val, &unit_inv)?;
            for j in p..m {
                let delta = &f * &w[p][j];
                w[i][j] -= &delta;
            }
            for j in 0..q {
                let delta = &f * &rhs[p][j];
                rhs[i][j] -= &delta;
            }
        }
        pivots.push((val, unit_inv));
    }
    let order = g.order();
    let mut x = vec![vec![TruncatedSeries::zero(order); q]; m];
    for p in (0..m).rev() {
        let (val, unit_inv) = &pivots[p];
        for col in 0..q {
            let mut acc = rhs[p][col].clone();
            for j in p + 1..m {
                let delta = &w[p][j] * &x[j][col];
                acc -= &delta;
            }
            let quotient = acc.divide_exact(*val).map_err(|err| match err {
                Error::NotDivisible { .. } => Error::NotIntegral(0),
                other => other,
            })?;
            x[p][col] = &quotient * unit_inv;
        }
    }
    let mut out = vec![Vec::new(); m];
    for p in 0..m {
        out[perm[p]] = std::mem::take(&mut x[p]);
    }
    Ok(SeriesMatrix::from_rows(out))
}

/// Row-reduces in place; returns the pivot columns.
pub fn rref(rows: &mut [Vec<Rational>]) -> Vec<usize> {
    let height = rows.len();
    let width = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..width {
        if r == height {
            break;
        }
        let Some(sel) = (r..height).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, sel);
        let inv = rows[r][col].recip();
        for entry in rows[r].iter_mut() {
            *entry *= &inv;
        }
        for i in 0..height {
            if i != r && !rows[i][col].is_zero() {
                let f = rows[i][col].clone();
                let (top, rest) = if i < r {
                    let (a, b) = rows.split_at_mut(r);
                    (&b[0], &mut a[i])
                } else {
                    let (a, b) = rows.split_at_mut(i);
                    (&a[r], &mut b[0])
                };
                for (dst, src) in rest.iter_mut().zip(top.iter()) {
                    if !src.is_zero() {
                        *dst -= &f * src;
                    }
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    pivots
}

pub fn rank(rows: &[Vec<Rational>]) -> usize {
    let mut copy = rows.to_vec();
    rref(&mut copy).len()
}

/// Basis of `{x : A x = 0}` for a matrix with `width` columns.
pub fn kernel(rows: &[Vec<Rational>], width: usize) -> Vec<Vec<Rational>> {
    let mut copy = rows.to_vec();
    let pivots = rref(&mut copy);
    let free: Vec<usize> = (0..width).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Rational::zero(); width];
            v[f] = Rational::one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = -copy[r][f].clone();
            }
            v
        })
        .collect()
}

/// Univariate polynomial over `Q`, coefficients from degree 0 upwards.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QPoly(pub Vec<Rational>);

impl QPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        QPoly(coeffs)
    }

    pub fn one() -> Self {
        QPoly(vec![Rational::one()])
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    /// `x - root`
    pub fn linear(root: &Rational) -> Self {
        QPoly(vec![-root.clone(), Rational::one()])
    }

    pub fn mul(&self, other: &QPoly) -> QPoly {
        if self.is_zero() || other.is_zero() {
            return QPoly(Vec::new());
        }
        let mut out = vec![Rational::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        QPoly::new(out)
    }

    pub fn sub(&self, other: &QPoly) -> QPoly {
        let len = self.0.len().max(other.0.len());
        let mut out = vec![Rational::zero(); len];
        for (i, a) in self.0.iter().enumerate() {
            out[i] += a;
        }
        for (i, b) in other.0.iter().enumerate() {
            out[i] -= b;
        }
        QPoly::new(out)
    }

    pub fn scale(&self, c: &Rational) -> QPoly {
        QPoly::new(self.0.iter().map(|a| a * c).collect())
    }

    pub fn div_rem(&self, d: &QPoly) -> (QPoly, QPoly) {
        let dd = d.degree().expect("division by zero polynomial");
        let lead = d.0[dd].clone();
        let mut rem = self.0.clone();
        if rem.len() <= dd {
            return (QPoly(Vec::new()), self.clone());
        }
        let mut quot = vec![Rational::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + dd] / &lead;
            if c.is_zero() {
                continue;
            }
            for (i, dc) in d.0.iter().enumerate() {
                rem[k + i] -= &c * dc;
            }
            quot[k] = c;
        }
        (QPoly::new(quot), QPoly::new(rem))
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.0
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * x + c)
    }

    /// `(g, s, u)` with `s*self + u*other = g`, `g` monic.
    pub fn ext_gcd(&self, other: &QPoly) -> (QPoly, QPoly, QPoly) {
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (QPoly::one(), QPoly(Vec::new()));
        let (mut u0, mut u1) = (QPoly(Vec::new()), QPoly::one());
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            let s2 = s0.sub(&q.mul(&s1));
            let u2 = u0.sub(&q.mul(&u1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s2;
            u0 = u1;
            u1 = u2;
        }
        let lead = r0.0.last().cloned().unwrap_or_else(Rational::one).recip();
        (r0.scale(&lead), s0.scale(&lead), u0.scale(&lead))
    }

    /// Rational roots, found by the rational root test. Gives up (returns
    /// what it has) when the integer coefficients are too large to factor by
    /// trial division.
    pub fn rational_roots(&self) -> Vec<Rational> {
        let mut roots = Vec::new();
        let mut coeffs = self.0.clone();
        if coeffs.is_empty() {
            return roots;
        }
        let lead_zeros = coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead_zeros > 0 {
            roots.push(Rational::zero());
            coeffs.drain(..lead_zeros);
        }
        if coeffs.len() < 2 {
            return roots;
        }
        let denom_lcm = coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = coeffs
            .iter()
            .map(|c| (c * Rational::from_integer(denom_lcm.clone())).to_integer())
            .collect();
        let (Some(a0), Some(an)) = (ints[0].abs().to_u64(), ints.last().unwrap().abs().to_u64()) else {
            return roots;
        };
        const LIMIT: u64 = 1_000_000_000_000;
        if a0 > LIMIT || an > LIMIT {
            return roots;
        }
        let poly = QPoly(coeffs);
        for p in divisors(a0) {
            for q in divisors(an) {
                for sign in [1i64, -1] {
                    let cand = Rational::new(BigInt::from(p) * sign, BigInt::from(q));
                    if poly.eval(&cand).is_zero() && !roots.contains(&cand) {
                        roots.push(cand);
                    }
                }
            }
        }
        roots
    }
}

fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// Multiplicity of `root` in `p`.
pub fn multiplicity(p: &QPoly, root: &Rational) -> usize {
    let lin = QPoly::linear(root);
    let mut cur = p.clone();
    let mut m = 0;
    loop {
        let (q, r) = cur.div_rem(&lin);
        if !r.is_zero() || cur.is_zero() {
            return m;
        }
        cur = q;
        m += 1;
    }
}

pub fn is_nonneg_integer(r: &Rational) -> bool {
    r.is_integer() && !r.is_negative()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::{rat, ratio};

    fn ser(text: &str) -> TruncatedSeries {
        TruncatedSeries::parse(text, 8).unwrap()
    }

    #[test]
    fn kernel_lattice_of_a_single_condition() {
        // c1 + t c2 = 0 mod t^2
        let b = SeriesMatrix::from_rows(vec![vec![ser("1"), ser("t")]]);
        let basis = kernel_lattice(&b, 2).unwrap();
        for j in 0..2 {
            let c1 = basis.get(0, j);
            let c2 = basis.get(1, j);
            assert!((c1 + &(&ser("t") * c2)).divides(2).unwrap());
        }
        assert_eq!(elementary_divisors(&basis).unwrap(), vec![0, 2]);
    }

    #[test]
    fn integral_solve_round_trip() {
        let g = SeriesMatrix::two_by_two(ser("t"), ser("1"), ser("0"), ser("t^2"));
        let x = SeriesMatrix::from_rows(vec![vec![ser("1+t")], vec![ser("-3")]]);
        let v = g.mul(&x);
        let back = solve_integral(&g, &v).unwrap();
        assert!(back.agrees_with(&x));
        let not_in_lattice = SeriesMatrix::from_rows(vec![vec![ser("1")], vec![ser("t")]]);
        assert!(solve_integral(&g, &not_in_lattice).is_err());
    }

    #[test]
    fn rational_kernel_and_rank() {
        let rows = vec![vec![rat(1), rat(2), rat(3)], vec![rat(2), rat(4), rat(6)]];
        assert_eq!(rank(&rows), 1);
        assert_eq!(kernel(&rows, 3).len(), 2);
    }

    #[test]
    fn polynomial_roots_and_gcd() {
        // (x - 1/2)(x + 3) x^2
        let p = QPoly::linear(&ratio(1, 2))
            .mul(&QPoly::linear(&rat(-3)))
            .mul(&QPoly::linear(&rat(0)))
            .mul(&QPoly::linear(&rat(0)));
        let mut roots = p.rational_roots();
        roots.sort();
        assert_eq!(roots, vec![rat(-3), rat(0), ratio(1, 2)]);
        assert_eq!(multiplicity(&p, &rat(0)), 2);
        let (g, s, u) = QPoly::linear(&rat(1)).ext_gcd(&QPoly::linear(&rat(2)));
        assert_eq!(g, QPoly::one());
        let combo = s.mul(&QPoly::linear(&rat(1))).sub(&u.mul(&QPoly::linear(&rat(2))).scale(&rat(-1)));
        assert_eq!(combo, QPoly::one());
    }
}
