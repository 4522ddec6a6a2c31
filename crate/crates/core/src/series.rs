//! Truncated power series `Q[t]/(t^N)` standing in for the centre `C[[t]]`.
//!
//! Every series carries a watermark: coefficients at degrees at or above the
//! watermark are unknown (they were lost to an exact division). Arithmetic
//! propagates the watermark, and any test that would need to look past it
//! reports [`Error::PrecisionExhausted`] instead of guessing.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Valuation {
    Finite(usize),
    Infinite,
}

impl Valuation {
    pub fn finite(self) -> Option<usize> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Valuation::Infinite)
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => f.write_str("inf"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TruncatedSeries {
    coeffs: Vec<Rational>,
    valid: usize,
}

impl TruncatedSeries {
    /// Zero-pads `coeffs` to length `order`.
    pub fn make_series(coeffs: Vec<Rational>, order: usize) -> Result<Self> {
        if order == 0 {
            return Err(Error::InvalidTruncation);
        }
        if coeffs.len() > order {
            return Err(Error::TooManyCoefficients {
                len: coeffs.len(),
                order,
            });
        }
        let mut coeffs = coeffs;
        coeffs.resize(order, Rational::zero());
        Ok(TruncatedSeries {
            coeffs,
            valid: order,
        })
    }

    pub fn from_ints(coeffs: &[i64], order: usize) -> Result<Self> {
        Self::make_series(coeffs.iter().map(|&c| rat(c)).collect(), order)
    }

    pub fn zero(order: usize) -> Self {
        assert!(order > 0, "truncation order must be positive");
        TruncatedSeries {
            coeffs: vec![Rational::zero(); order],
            valid: order,
        }
    }

    pub fn constant(c: Rational, order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = c;
        s
    }

    pub fn from_int(c: i64, order: usize) -> Self {
        Self::constant(rat(c), order)
    }

    pub fn one(order: usize) -> Self {
        Self::constant(Rational::one(), order)
    }

    /// `c * t^a`; zero when `a >= order`.
    pub fn monomial(c: Rational, a: usize, order: usize) -> Self {
        let mut s = Self::zero(order);
        if a < order {
            s.coeffs[a] = c;
        }
        s
    }

    pub fn t_power(a: usize, order: usize) -> Self {
        Self::monomial(Rational::one(), a, order)
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    /// Degrees below this value are known exactly.
    pub fn precision(&self) -> usize {
        self.valid
    }

    pub fn is_exact(&self) -> bool {
        self.valid == self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, d: usize) -> &Rational {
        &self.coeffs[d]
    }

    pub fn constant_term(&self) -> &Rational {
        &self.coeffs[0]
    }

    pub fn valuation(&self) -> Valuation {
        match self.coeffs[..self.valid].iter().position(|c| !c.is_zero()) {
            Some(d) => Valuation::Finite(d),
            None => Valuation::Infinite,
        }
    }

    /// First nonzero known degree, or the watermark if all known degrees vanish.
    pub(crate) fn known_valuation(&self) -> usize {
        self.coeffs[..self.valid]
            .iter()
            .position(|c| !c.is_zero())
            .unwrap_or(self.valid)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs[..self.valid].iter().all(Zero::is_zero)
    }

    pub fn is_unit(&self) -> bool {
        self.valid > 0 && !self.coeffs[0].is_zero()
    }

    /// Whether `t^a` divides the series.
    pub fn divides(&self, a: usize) -> Result<bool> {
        if a >= self.order() {
            return Err(Error::PrecisionExhausted {
                needed: a + 1,
                available: self.order(),
            });
        }
        let v = self.known_valuation();
        if v < self.valid {
            Ok(v >= a)
        } else if a <= self.valid {
            Ok(true)
        } else {
            Err(Error::PrecisionExhausted {
                needed: a,
                available: self.valid,
            })
        }
    }

    /// Exact quotient by `t^a`. The result is only known below `precision() - a`.
    pub fn divide_exact(&self, a: usize) -> Result<Self> {
        if a == 0 {
            return Ok(self.clone());
        }
        if self.is_exact() && self.is_zero() {
            return Ok(Self::zero(self.order()));
        }
        let v = self.known_valuation();
        if v < a {
            if v < self.valid {
                return Err(Error::NotDivisible { power: a });
            }
            return Err(Error::PrecisionExhausted {
                needed: a + 1,
                available: self.valid,
            });
        }
        let n = self.order();
        let mut coeffs = vec![Rational::zero(); n];
        coeffs[..self.valid - a].clone_from_slice(&self.coeffs[a..self.valid]);
        Ok(TruncatedSeries {
            coeffs,
            valid: self.valid - a,
        })
    }

    /// Multiplication by `t^a`.
    pub fn mul_t_power(&self, a: usize) -> Self {
        let n = self.order();
        let mut coeffs = vec![Rational::zero(); n];
        for d in 0..self.valid {
            if d + a >= n {
                break;
            }
            coeffs[d + a] = self.coeffs[d].clone();
        }
        TruncatedSeries {
            coeffs,
            valid: (self.valid + a).min(n),
        }
    }

    /// Writes the series as `t^v * u` with `u` a unit.
    pub fn split_unit(&self) -> Result<(usize, Self)> {
        let v = self.known_valuation();
        if v >= self.valid {
            return Err(Error::PrecisionExhausted {
                needed: self.valid + 1,
                available: self.valid,
            });
        }
        Ok((v, self.divide_exact(v)?))
    }

    pub fn inverse(&self) -> Result<Self> {
        if !self.is_unit() {
            return Err(Error::NotInvertible);
        }
        let n = self.order();
        let p = self.valid;
        let inv0 = self.coeffs[0].recip();
        let mut out = vec![Rational::zero(); n];
        out[0] = inv0.clone();
        for k in 1..p {
            let mut acc = Rational::zero();
            for j in 1..=k {
                if self.coeffs[j].is_zero() || out[k - j].is_zero() {
                    continue;
                }
                acc += &self.coeffs[j] * &out[k - j];
            }
            if !acc.is_zero() {
                out[k] = -(acc * &inv0);
            }
        }
        Ok(TruncatedSeries {
            coeffs: out,
            valid: p,
        })
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.order());
        }
        TruncatedSeries {
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
            valid: self.valid,
        }
    }

    /// Re-embeds at another truncation order. Exact series stay exact, which
    /// treats them as polynomials.
    pub fn with_order(&self, order: usize) -> Self {
        assert!(order > 0, "truncation order must be positive");
        let mut coeffs = self.coeffs.clone();
        let valid = if order >= self.order() {
            coeffs.resize(order, Rational::zero());
            if self.is_exact() {
                order
            } else {
                self.valid
            }
        } else {
            coeffs.truncate(order);
            self.valid.min(order)
        };
        TruncatedSeries { coeffs, valid }
    }

    /// Reduction modulo `t^p` (only degrees below `p` stay known).
    pub fn truncated(&self, p: usize) -> Self {
        let mut s = self.clone();
        let p = p.min(s.valid);
        for c in &mut s.coeffs[p..] {
            *c = Rational::zero();
        }
        s.valid = p;
        s
    }

    /// Declares every stored coefficient known, choosing zero for the lost
    /// degrees. Only valid where any lift of the known part will do.
    pub fn lift_exact(&self) -> Self {
        TruncatedSeries {
            coeffs: self.coeffs.clone(),
            valid: self.order(),
        }
    }

    /// Equality on the degrees known in both operands.
    pub fn agrees_with(&self, other: &Self) -> bool {
        let p = self.valid.min(other.valid);
        self.coeffs[..p] == other.coeffs[..p]
    }

    pub fn to_literal(&self) -> String {
        let mut out = String::new();
        for (d, c) in self.coeffs[..self.valid].iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let negative = c.is_negative();
            if negative {
                out.push('-');
            } else if !out.is_empty() {
                out.push('+');
            }
            let a = c.abs();
            if d == 0 || !a.is_one() {
                out.push_str(&a.to_string());
            }
            match d {
                0 => {}
                1 => out.push('t'),
                _ => {
                    out.push_str("t^");
                    out.push_str(&d.to_string());
                }
            }
        }
        if out.is_empty() {
            out.push('0');
        }
        if !self.is_exact() {
            out.push_str(&format!("+O(t^{})", self.valid));
        }
        out
    }

    pub fn parse(text: &str, order: usize) -> Result<Self> {
        let coeffs = parse_literal(text)?;
        Self::make_series(coeffs, order)
    }
}

fn literal_error(input: &str, reason: impl Into<String>) -> Error {
    Error::Parse {
        what: "series literal",
        input: input.to_string(),
        reason: reason.into(),
    }
}

fn parse_rational(input: &str, s: &str) -> Result<Rational> {
    let (p, q) = match s.split_once('/') {
        Some((p, q)) => (p, q),
        None => (s, "1"),
    };
    let p: BigInt = p
        .parse()
        .map_err(|_| literal_error(input, format!("bad coefficient `{s}`")))?;
    let q: BigInt = q
        .parse()
        .map_err(|_| literal_error(input, format!("bad coefficient `{s}`")))?;
    if q.is_zero() {
        return Err(literal_error(input, "zero denominator"));
    }
    Ok(Rational::new(p, q))
}

/// Parses literals such as `-2`, `1+3t`, `t^2-1/2t^3`, `2*t` into a dense
/// coefficient list (trailing zeros trimmed).
pub fn parse_literal(input: &str) -> Result<Vec<Rational>> {
    let text: String = input.chars().filter(|c| !c.is_whitespace()).collect();
    if text.is_empty() {
        return Err(literal_error(input, "empty"));
    }
    let mut terms: Vec<(bool, &str)> = Vec::new();
    let mut start = 0;
    let mut negative = false;
    let bytes = text.as_bytes();
    for (idx, &ch) in bytes.iter().enumerate() {
        if (ch == b'+' || ch == b'-') && idx > 0 && bytes[idx - 1] != b'^' {
            terms.push((negative, &text[start..idx]));
            negative = ch == b'-';
            start = idx + 1;
        } else if (ch == b'+' || ch == b'-') && idx == 0 {
            negative = ch == b'-';
            start = 1;
        }
    }
    terms.push((negative, &text[start..]));

    let mut coeffs: Vec<Rational> = Vec::new();
    for (negative, term) in terms {
        if term.is_empty() {
            return Err(literal_error(input, "empty term"));
        }
        let (coeff, degree) = match term.find('t') {
            None => (parse_rational(input, term)?, 0usize),
            Some(pos) => {
                let head = term[..pos].trim_end_matches('*');
                let coeff = if head.is_empty() {
                    Rational::one()
                } else {
                    parse_rational(input, head)?
                };
                let tail = &term[pos + 1..];
                let degree = if tail.is_empty() {
                    1
                } else if let Some(e) = tail.strip_prefix('^') {
                    e.parse::<usize>()
                        .map_err(|_| literal_error(input, format!("bad exponent `{e}`")))?
                } else {
                    return Err(literal_error(input, format!("unexpected `{tail}`")));
                };
                (coeff, degree)
            }
        };
        if coeffs.len() <= degree {
            coeffs.resize(degree + 1, Rational::zero());
        }
        if negative {
            coeffs[degree] -= coeff;
        } else {
            coeffs[degree] += coeff;
        }
    }
    while coeffs.last().is_some_and(Zero::is_zero) {
        coeffs.pop();
    }
    Ok(coeffs)
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_literal())
    }
}

fn check_orders(a: &TruncatedSeries, b: &TruncatedSeries) {
    assert_eq!(
        a.order(),
        b.order(),
        "series with different truncation orders combined"
    );
}

impl Add for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn add(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        check_orders(self, rhs);
        let valid = self.valid.min(rhs.valid);
        let mut coeffs = vec![Rational::zero(); self.order()];
        for d in 0..valid {
            if rhs.coeffs[d].is_zero() {
                coeffs[d] = self.coeffs[d].clone();
            } else if self.coeffs[d].is_zero() {
                coeffs[d] = rhs.coeffs[d].clone();
            } else {
                coeffs[d] = &self.coeffs[d] + &rhs.coeffs[d];
            }
        }
        TruncatedSeries { coeffs, valid }
    }
}

impl Sub for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn sub(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        check_orders(self, rhs);
        let valid = self.valid.min(rhs.valid);
        let mut coeffs = vec![Rational::zero(); self.order()];
        for d in 0..valid {
            if rhs.coeffs[d].is_zero() {
                coeffs[d] = self.coeffs[d].clone();
            } else {
                coeffs[d] = &self.coeffs[d] - &rhs.coeffs[d];
            }
        }
        TruncatedSeries { coeffs, valid }
    }
}

impl Mul for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn mul(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        check_orders(self, rhs);
        let n = self.order();
        let va = self.known_valuation();
        let vb = rhs.known_valuation();
        let valid = n
            .min(va.saturating_add(rhs.valid))
            .min(vb.saturating_add(self.valid));
        let mut coeffs = vec![Rational::zero(); n];
        for i in va..self.valid.min(valid) {
            let a = &self.coeffs[i];
            if a.is_zero() {
                continue;
            }
            for j in vb..rhs.valid {
                if i + j >= valid {
                    break;
                }
                let b = &rhs.coeffs[j];
                if b.is_zero() {
                    continue;
                }
                coeffs[i + j] += a * b;
            }
        }
        TruncatedSeries { coeffs, valid }
    }
}

impl Neg for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn neg(self) -> TruncatedSeries {
        TruncatedSeries {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
            valid: self.valid,
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for TruncatedSeries {
            type Output = TruncatedSeries;
            fn $m(self, rhs: TruncatedSeries) -> TruncatedSeries {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&TruncatedSeries> for TruncatedSeries {
            type Output = TruncatedSeries;
            fn $m(self, rhs: &TruncatedSeries) -> TruncatedSeries {
                (&self).$m(rhs)
            }
        }
        impl $tr<TruncatedSeries> for &TruncatedSeries {
            type Output = TruncatedSeries;
            fn $m(self, rhs: TruncatedSeries) -> TruncatedSeries {
                self.$m(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for TruncatedSeries {
    type Output = TruncatedSeries;
    fn neg(self) -> TruncatedSeries {
        -&self
    }
}

impl AddAssign<&TruncatedSeries> for TruncatedSeries {
    fn add_assign(&mut self, rhs: &TruncatedSeries) {
        *self = &*self + rhs;
    }
}

impl SubAssign<&TruncatedSeries> for TruncatedSeries {
    fn sub_assign(&mut self, rhs: &TruncatedSeries) {
        *self = &*self - rhs;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(text: &str) -> TruncatedSeries {
        TruncatedSeries::parse(text, 8).unwrap()
    }

    #[test]
    fn make_series_pads_and_rejects() {
        let z = TruncatedSeries::from_ints(&[0], 8).unwrap();
        assert_eq!(z.valuation(), Valuation::Infinite);
        assert_eq!(z.coeffs().len(), 8);
        let t = TruncatedSeries::from_ints(&[0, 1], 8).unwrap();
        assert_eq!(t.valuation(), Valuation::Finite(1));
        let c = TruncatedSeries::from_ints(&[-2], 24).unwrap();
        assert!(c.is_unit());
        assert_eq!(
            TruncatedSeries::from_ints(&[1], 0),
            Err(Error::InvalidTruncation)
        );
        assert!(matches!(
            TruncatedSeries::from_ints(&[1, 2, 3], 2),
            Err(Error::TooManyCoefficients { .. })
        ));
    }

    #[test]
    fn divide_exact_examples() {
        assert_eq!(s("t").divide_exact(1).unwrap().to_literal(), "1+O(t^7)");
        assert!(s("0").divide_exact(3).unwrap().is_zero());
        let q = s("t+t^2").divide_exact(1).unwrap();
        assert!(q.agrees_with(&s("1+t")));
        assert_eq!(q.precision(), 7);
        assert_eq!(s("1+t").divide_exact(1), Err(Error::NotDivisible { power: 1 }));
    }

    #[test]
    fn divides_examples() {
        assert!(!s("2").divides(1).unwrap());
        assert!(s("0").divides(1).unwrap());
        assert!(!s("t").divides(2).unwrap());
        assert!(matches!(
            s("t").divides(8),
            Err(Error::PrecisionExhausted { .. })
        ));
    }

    #[test]
    fn watermark_guards_divisibility() {
        let lost = s("t^6").divide_exact(6).unwrap() - TruncatedSeries::one(8);
        assert_eq!(lost.precision(), 2);
        assert!(lost.divides(2).unwrap());
        assert!(matches!(
            lost.divides(3),
            Err(Error::PrecisionExhausted { .. })
        ));
    }

    #[test]
    fn literals_round_trip() {
        for text in ["-2", "1+3t", "t^2-1/2t^3", "0", "-t", "7/3-t^7"] {
            assert_eq!(s(text).to_literal(), text);
        }
        assert_eq!(s("2*t + 3 - t").to_literal(), "3+t");
        assert!(TruncatedSeries::parse("t^9", 8).is_err());
        assert!(TruncatedSeries::parse("1/0", 8).is_err());
        assert!(TruncatedSeries::parse("x", 8).is_err());
    }

    #[test]
    fn inverse_of_one_minus_t() {
        let inv = s("1-t").inverse().unwrap();
        assert_eq!(inv.to_literal(), "1+t+t^2+t^3+t^4+t^5+t^6+t^7");
        assert_eq!(s("t").inverse(), Err(Error::NotInvertible));
    }

    #[test]
    fn mul_discards_high_degrees() {
        let p = s("t^5") * s("t^4");
        assert!(p.is_zero());
        assert!(p.is_exact());
    }
}
