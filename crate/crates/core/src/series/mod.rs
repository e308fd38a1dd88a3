//! Truncated formal power series with exact rational coefficients.

mod expr;

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactmath::{factorial, Rational};

pub use expr::{catalog, expand, named_sequence, SeriesId};

/// How coefficients relate to dimensions: `Ordinary` stores `dim P_n`,
/// `Exponential` stores `dim P(n) / n!`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SeriesKind {
    Ordinary,
    Exponential,
}

impl SeriesKind {
    pub fn as_str(self) -> &'static str {
        match self {
            SeriesKind::Ordinary => "ordinary",
            SeriesKind::Exponential => "exponential",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error("inner series must have zero constant term")]
    NonzeroConstant,
    #[error("linear coefficient is zero; series is not invertible for composition")]
    ZeroLinear,
    #[error("cannot mix {0} and {1} series")]
    KindMismatch(&'static str, &'static str),
    #[error("{0}")]
    Domain(String),
    #[error("no formal solution with y(0) = 0: {0}")]
    NoSolution(String),
    #[error("arity {arity} is not 1 mod {step}")]
    UnsupportedArity { arity: usize, step: usize },
    #[error("unknown series id `{0}`")]
    UnknownId(String),
    #[error("series syntax error at column {column}: {message}")]
    Syntax { column: usize, message: String },
}

/// `Σ_{n=0}^{order} c_n t^n`, truncated at `order`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PowerSeries {
    coeffs: Vec<Rational>,
    kind: SeriesKind,
}

impl PowerSeries {
    pub fn zero(order: usize, kind: SeriesKind) -> Self {
        PowerSeries { coeffs: vec![Rational::zero(); order + 1], kind }
    }

    pub fn constant(c: Rational, order: usize, kind: SeriesKind) -> Self {
        let mut s = Self::zero(order, kind);
        s.coeffs[0] = c;
        s
    }

    /// The series `t`.
    pub fn t(order: usize, kind: SeriesKind) -> Self {
        let mut s = Self::zero(order, kind);
        if order >= 1 {
            s.coeffs[1] = Rational::one();
        }
        s
    }

    /// From coefficients of `t^0, t^1, ...`; the order is `coeffs.len() - 1`.
    pub fn from_full(kind: SeriesKind, coeffs: Vec<Rational>) -> Self {
        assert!(!coeffs.is_empty(), "series needs at least a constant term");
        PowerSeries { coeffs, kind }
    }

    /// From coefficients of `t^1..t^N` with zero constant term.
    pub fn from_coefficients(kind: SeriesKind, coeffs: Vec<Rational>) -> Self {
        let mut full = Vec::with_capacity(coeffs.len() + 1);
        full.push(Rational::zero());
        full.extend(coeffs);
        PowerSeries { coeffs: full, kind }
    }

    /// From dimensions at arities `1..=N`; exponential series divide by `n!`.
    pub fn from_dims(kind: SeriesKind, dims: &[u64]) -> Self {
        let coeffs = dims
            .iter()
            .enumerate()
            .map(|(i, &d)| match kind {
                SeriesKind::Ordinary => Rational::from(d),
                SeriesKind::Exponential => &Rational::from(d) / &Rational::from(factorial(i as u64 + 1)),
            })
            .collect();
        Self::from_coefficients(kind, coeffs)
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn kind(&self) -> SeriesKind {
        self.kind
    }

    pub fn with_kind(mut self, kind: SeriesKind) -> Self {
        self.kind = kind;
        self
    }

    pub fn coefficient(&self, n: usize) -> Rational {
        self.coeffs.get(n).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn full_coefficients(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Coefficients of `t^1..t^N`.
    pub fn coefficients(&self) -> &[Rational] {
        &self.coeffs[1..]
    }

    /// Dimensions recovered from the coefficients, arities `1..=N`.
    pub fn dims(&self) -> Vec<Rational> {
        (1..=self.order())
            .map(|n| match self.kind {
                SeriesKind::Ordinary => self.coeffs[n].clone(),
                SeriesKind::Exponential => &self.coeffs[n] * &Rational::from(factorial(n as u64)),
            })
            .collect()
    }

    pub fn truncate(&self, order: usize) -> Self {
        let mut c = self.coeffs.clone();
        c.resize(order.min(self.order()) + 1, Rational::zero());
        PowerSeries { coeffs: c, kind: self.kind }
    }

    fn with_order(&self, order: usize) -> Self {
        let mut c = self.coeffs.clone();
        c.resize(order + 1, Rational::zero());
        PowerSeries { coeffs: c, kind: self.kind }
    }

    /// Index of the first nonzero coefficient, `None` for the zero series.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        let coeffs = (0..=n).map(|i| &self.coeffs[i] + &other.coeffs[i]).collect();
        PowerSeries { coeffs, kind: self.kind }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        PowerSeries { coeffs: self.coeffs.iter().map(|c| -c).collect(), kind: self.kind }
    }

    pub fn scale(&self, f: &Rational) -> Self {
        PowerSeries { coeffs: self.coeffs.iter().map(|c| c * f).collect(), kind: self.kind }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        let mut coeffs = vec![Rational::zero(); n + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(n + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(n + 1 - i) {
                if !b.is_zero() {
                    coeffs[i + j] += a * b;
                }
            }
        }
        PowerSeries { coeffs, kind: self.kind }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::constant(Rational::one(), self.order(), self.kind);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// `f(-t)`.
    pub fn negate_argument(&self) -> Self {
        let coeffs = self.coeffs.iter().enumerate().map(|(i, c)| if i % 2 == 1 { -c } else { c.clone() }).collect();
        PowerSeries { coeffs, kind: self.kind }
    }

    /// Multiplicative inverse; requires a nonzero constant term.
    pub fn recip(&self) -> Result<Self, SeriesError> {
        let c0 = &self.coeffs[0];
        if c0.is_zero() {
            return Err(SeriesError::Domain("reciprocal of a series with zero constant term".into()));
        }
        let inv0 = c0.recip();
        let n = self.order();
        let mut out = vec![Rational::zero(); n + 1];
        out[0] = inv0.clone();
        for k in 1..=n {
            let mut s = Rational::zero();
            for i in 1..=k {
                if !self.coeffs[i].is_zero() {
                    s += &self.coeffs[i] * &out[k - i];
                }
            }
            out[k] = -(&s * &inv0);
        }
        Ok(PowerSeries { coeffs: out, kind: self.kind })
    }

    /// `self / other`. Common powers of `t` are cancelled, which lowers the order.
    pub fn div(&self, other: &Self) -> Result<Self, SeriesError> {
        let v = other.valuation().ok_or_else(|| SeriesError::Domain("division by the zero series".into()))?;
        let n = self.order().min(other.order());
        if v > n {
            return Err(SeriesError::Domain("division by a series that vanishes to the working order".into()));
        }
        if let Some(u) = self.valuation() {
            if u < v {
                return Err(SeriesError::Domain("quotient is not a power series".into()));
            }
        }
        let num = self.shift_down(v, n);
        let den = other.shift_down(v, n);
        Ok(num.mul(&den.recip()?))
    }

    /// Divides by `t^v`, keeping coefficients up to the original `order`.
    fn shift_down(&self, v: usize, order: usize) -> Self {
        let coeffs = (v..=order).map(|i| self.coefficient(i)).collect();
        PowerSeries { coeffs, kind: self.kind }
    }

    pub fn shift_up(&self, v: usize) -> Self {
        let n = self.order();
        let mut coeffs = vec![Rational::zero(); n + 1];
        for i in v..=n {
            coeffs[i] = self.coeffs[i - v].clone();
        }
        PowerSeries { coeffs, kind: self.kind }
    }

    pub fn derivative(&self) -> Self {
        let n = self.order();
        let mut coeffs: Vec<Rational> = (1..=n).map(|i| &self.coeffs[i] * &Rational::from(i)).collect();
        coeffs.push(Rational::zero());
        PowerSeries { coeffs, kind: self.kind }
    }

    /// Square root with the positive square root of the constant term.
    pub fn sqrt(&self) -> Result<Self, SeriesError> {
        let c0 = &self.coeffs[0];
        let r0 = c0
            .sqrt_exact()
            .filter(|r| !r.is_zero())
            .ok_or_else(|| SeriesError::Domain(format!("constant term {c0} has no nonzero rational square root")))?;
        let n = self.order();
        let mut out = vec![Rational::zero(); n + 1];
        let two_r0_inv = (&r0 + &r0).recip();
        out[0] = r0;
        for k in 1..=n {
            let mut s = Rational::zero();
            for i in 1..k {
                s += &out[i] * &out[k - i];
            }
            out[k] = &(&self.coeffs[k] - &s) * &two_r0_inv;
        }
        Ok(PowerSeries { coeffs: out, kind: self.kind })
    }

    /// `exp` of a series with zero constant term.
    pub fn exp(&self) -> Result<Self, SeriesError> {
        if !self.coeffs[0].is_zero() {
            return Err(SeriesError::Domain("exp needs a zero constant term".into()));
        }
        // y' = f' y
        let n = self.order();
        let mut out = vec![Rational::zero(); n + 1];
        out[0] = Rational::one();
        for k in 1..=n {
            let mut s = Rational::zero();
            for i in 1..=k {
                if !self.coeffs[i].is_zero() {
                    s += &(&self.coeffs[i] * &Rational::from(i)) * &out[k - i];
                }
            }
            out[k] = &s / &Rational::from(k);
        }
        Ok(PowerSeries { coeffs: out, kind: self.kind })
    }

    /// `log` of a series with constant term 1.
    pub fn log(&self) -> Result<Self, SeriesError> {
        if !self.coeffs[0].is_one() {
            return Err(SeriesError::Domain("log needs constant term 1".into()));
        }
        let d = self.derivative().mul(&self.recip()?);
        let n = self.order();
        let mut coeffs = vec![Rational::zero(); n + 1];
        for k in 1..=n {
            coeffs[k] = &d.coeffs[k - 1] / &Rational::from(k);
        }
        Ok(PowerSeries { coeffs, kind: self.kind })
    }

    /// `self(g(t))`; `g` must have zero constant term.
    pub fn compose(&self, g: &Self) -> Result<Self, SeriesError> {
        if self.kind != g.kind {
            return Err(SeriesError::KindMismatch(self.kind.as_str(), g.kind.as_str()));
        }
        self.compose_any(g)
    }

    fn compose_any(&self, g: &Self) -> Result<Self, SeriesError> {
        if !g.coeffs[0].is_zero() {
            return Err(SeriesError::NonzeroConstant);
        }
        let n = self.order().min(g.order());
        let g = g.truncate(n);
        let mut acc = PowerSeries::constant(self.coeffs[n].clone(), n, self.kind);
        for i in (0..n).rev() {
            acc = acc.mul(&g);
            acc.coeffs[0] += &self.coeffs[i];
        }
        Ok(acc)
    }

    /// The compositional inverse.
    pub fn reversion(&self) -> Result<Self, SeriesError> {
        if !self.coeffs[0].is_zero() {
            return Err(SeriesError::NonzeroConstant);
        }
        let n = self.order();
        if n == 0 {
            return Ok(self.clone());
        }
        let f1 = &self.coeffs[1];
        if f1.is_zero() {
            return Err(SeriesError::ZeroLinear);
        }
        let inv1 = f1.recip();
        let mut g = PowerSeries::zero(n, self.kind);
        g.coeffs[1] = inv1.clone();
        // f(g) = t + e_k t^k + ...; the t^k error is cancelled by g_k -= e_k / f_1.
        for k in 2..=n {
            let fg = self.compose_any(&g)?;
            let e = &fg.coeffs[k];
            g.coeffs[k] = -(e * &inv1);
        }
        Ok(g)
    }
}

impl fmt::Display for PowerSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}*t")?,
                _ => write!(f, "{c}*t^{i}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(t^{})", self.order() + 1)
    }
}

impl fmt::Debug for PowerSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}]", self.kind.as_str(), self)
    }
}

pub fn compose(f: &PowerSeries, g: &PowerSeries) -> Result<PowerSeries, SeriesError> {
    f.compose(g)
}

pub fn reversion(f: &PowerSeries) -> Result<PowerSeries, SeriesError> {
    f.reversion()
}

/// Outcome of comparing `f_dual(-f(-t))` with `t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum KoszulSeriesOutcome {
    Holds { order: usize },
    Differs { degree: usize, expected: Rational, found: Rational },
}

impl KoszulSeriesOutcome {
    pub fn holds(&self) -> bool {
        matches!(self, KoszulSeriesOutcome::Holds { .. })
    }
}

/// Evaluates `f_dual(-f(-t))` against `t` up to the common order.
pub fn koszul_series_compare(f: &PowerSeries, f_dual: &PowerSeries) -> Result<KoszulSeriesOutcome, SeriesError> {
    if f.kind != f_dual.kind {
        return Err(SeriesError::KindMismatch(f.kind.as_str(), f_dual.kind.as_str()));
    }
    let n = f.order().min(f_dual.order());
    let inner = f.truncate(n).negate_argument().neg();
    let lhs = f_dual.truncate(n).compose(&inner)?;
    Ok(first_difference_from_t(&lhs))
}

fn first_difference_from_t(s: &PowerSeries) -> KoszulSeriesOutcome {
    for (i, c) in s.coeffs.iter().enumerate() {
        let expected = if i == 1 { Rational::one() } else { Rational::zero() };
        if *c != expected {
            return KoszulSeriesOutcome::Differs { degree: i, expected, found: c.clone() };
        }
    }
    KoszulSeriesOutcome::Holds { order: s.order() }
}

/// `true` iff `f_dual(-f(-t)) = t` to the common truncation order.
pub fn koszul_series_check(f: &PowerSeries, f_dual: &PowerSeries) -> bool {
    koszul_series_compare(f, f_dual).map(|o| o.holds()).unwrap_or(false)
}

fn check_k_ary_support(dims: &BTreeMap<usize, u64>, k: usize) -> Result<usize, SeriesError> {
    if k < 2 {
        return Err(SeriesError::Domain("generator arity must be at least 2".into()));
    }
    let step = k - 1;
    for (&a, &d) in dims {
        if a == 0 || ((a - 1) % step != 0 && d != 0) {
            return Err(SeriesError::UnsupportedArity { arity: a, step });
        }
    }
    Ok(step)
}

/// The skew-generating series, term by term as
/// `Σ_{n≥1} (-1)^k dim P((k-1)n+1) / n! · t^{(k-1)n+1}`.
pub fn skew_series(dims: &BTreeMap<usize, u64>, k: usize) -> Result<PowerSeries, SeriesError> {
    let step = check_k_ary_support(dims, k)?;
    let top = dims.keys().copied().max().unwrap_or(0);
    let mut s = PowerSeries::zero(top, SeriesKind::Ordinary);
    let sign = if k % 2 == 0 { Rational::one() } else { -Rational::one() };
    for (&a, &d) in dims {
        let n = (a - 1) / step;
        if n == 0 {
            continue;
        }
        let c = &(&sign * &Rational::from(d)) / &Rational::from(factorial(n as u64));
        s.coeffs[a] = c;
    }
    Ok(s)
}

/// Weight-graded variant: `Σ_{n≥0} (-1)^n dim P_{(k-1)n+1} · t^{(k-1)n+1}` for ns dims.
pub fn skew_series_alternating(dims: &BTreeMap<usize, u64>, k: usize) -> Result<PowerSeries, SeriesError> {
    let step = check_k_ary_support(dims, k)?;
    let top = dims.keys().copied().max().unwrap_or(0);
    let mut s = PowerSeries::zero(top, SeriesKind::Ordinary);
    for (&a, &d) in dims {
        let n = (a - 1) / step;
        let v = Rational::from(d);
        s.coeffs[a] = if n % 2 == 0 { v } else { -v };
    }
    Ok(s)
}

/// Compares `f_dual(-g(-t))` with `t` for a skew series `g`.
pub fn skew_koszul_compare(g: &PowerSeries, f_dual: &PowerSeries) -> Result<KoszulSeriesOutcome, SeriesError> {
    let n = g.order().min(f_dual.order());
    let inner = g.truncate(n).negate_argument().neg();
    let lhs = f_dual.truncate(n).with_kind(SeriesKind::Ordinary).compose(&inner.with_kind(SeriesKind::Ordinary))?;
    Ok(first_difference_from_t(&lhs))
}

/// A functional equation for `y(t)` with `y(0) = 0`.
#[derive(Clone, Debug)]
pub enum AlgebraicEquation {
    /// `Σ_k c_k(t) y^k = 0`, with `coeffs[k] = c_k`.
    Polynomial(Vec<PowerSeries>),
    /// `y = t · φ(y)`.
    Lagrange(PowerSeries),
}

/// Solves the equation coefficient by coefficient up to `order`.
pub fn solve_algebraic(eq: &AlgebraicEquation, order: usize, kind: SeriesKind) -> Result<PowerSeries, SeriesError> {
    match eq {
        AlgebraicEquation::Polynomial(cs) => {
            let cs: Vec<PowerSeries> = cs.iter().map(|c| c.with_order(order).with_kind(kind)).collect();
            let c0 = cs.first().map(|c| c.coefficient(0)).unwrap_or_else(Rational::zero);
            if !c0.is_zero() {
                return Err(SeriesError::NoSolution("the equation does not vanish at y = 0, t = 0".into()));
            }
            let c1 = cs.get(1).map(|c| c.coefficient(0)).unwrap_or_else(Rational::zero);
            if c1.is_zero() {
                return Err(SeriesError::NoSolution("the linear coefficient vanishes at t = 0; branch is ambiguous".into()));
            }
            let inv = c1.recip();
            let mut y = PowerSeries::zero(order, kind);
            // each pass fixes one more coefficient
            for _ in 0..order {
                let mut val = PowerSeries::zero(order, kind);
                let mut ypow = PowerSeries::constant(Rational::one(), order, kind);
                for c in &cs {
                    val = val.add(&c.mul(&ypow));
                    ypow = ypow.mul(&y);
                }
                if val.valuation().is_none() {
                    break;
                }
                y = y.sub(&val.scale(&inv));
            }
            Ok(y)
        }
        AlgebraicEquation::Lagrange(phi) => {
            let phi = phi.with_order(order).with_kind(kind);
            let mut y = PowerSeries::zero(order, kind);
            for _ in 0..order {
                let next = phi.compose(&y)?.shift_up(1);
                if next == y {
                    break;
                }
                y = next;
            }
            Ok(y)
        }
    }
}

/// The series `y = t + Σ_{n≥2} a_n y^n` counting planar trees with `a_n` vertex decorations of arity `n`.
pub fn free_series(counts: &BTreeMap<usize, u64>, order: usize) -> PowerSeries {
    let top = counts.keys().copied().max().unwrap_or(1).max(1);
    let kind = SeriesKind::Ordinary;
    let mut cs = vec![PowerSeries::zero(order, kind); top + 1];
    cs[0] = PowerSeries::t(order, kind);
    cs[1] = PowerSeries::constant(-Rational::one(), order, kind);
    for (&n, &a) in counts {
        if n >= 2 {
            cs[n] = PowerSeries::constant(Rational::from(a), order, kind);
        }
    }
    solve_algebraic(&AlgebraicEquation::Polynomial(cs), order, kind).expect("free series equation is always solvable")
}

/// Converts integer-valued coefficients to `BigInt`s; `None` if any is fractional.
pub fn integer_dims(s: &PowerSeries) -> Option<Vec<BigInt>> {
    s.dims().into_iter().map(|d| if d.is_integer() { Some(d.numer()) } else { None }).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    const O: SeriesKind = SeriesKind::Ordinary;
    const E: SeriesKind = SeriesKind::Exponential;

    fn q(n: i64) -> Rational {
        Rational::from_int(n)
    }

    fn ser(kind: SeriesKind, c: &[i64]) -> PowerSeries {
        PowerSeries::from_coefficients(kind, c.iter().map(|&x| q(x)).collect())
    }

    fn geometric(order: usize) -> PowerSeries {
        ser(O, &vec![1; order])
    }

    #[test]
    fn compose_identity_and_hand_expansion() {
        let f = geometric(8);
        assert_eq!(f.compose(&PowerSeries::t(8, O)).unwrap(), f);
        let a = ser(O, &[1, 1, 0, 0, 0, 0]);
        let b = ser(O, &[1, 0, 1, 0, 0, 0]);
        // t + t^3 + (t + t^3)^2 = t + t^2 + t^3 + 2t^4 + t^6
        assert_eq!(a.compose(&b).unwrap(), ser(O, &[1, 1, 1, 2, 0, 1]));
    }

    #[test]
    fn compose_rejects_constant_and_mixed_kinds() {
        let f = geometric(4);
        let g = PowerSeries::constant(q(1), 4, O);
        assert_eq!(f.compose(&g), Err(SeriesError::NonzeroConstant));
        assert!(matches!(f.compose(&PowerSeries::t(4, E)), Err(SeriesError::KindMismatch(..))));
    }

    #[test]
    fn lie_com_inverse() {
        let n = 12;
        let com = PowerSeries::t(n, E).exp().unwrap().sub(&PowerSeries::constant(q(1), n, E));
        let lie = PowerSeries::constant(q(1), n, E).sub(&PowerSeries::t(n, E)).log().unwrap().neg();
        assert!(koszul_series_check(&com, &lie));
        assert!(koszul_series_check(&lie, &com));
    }

    #[test]
    fn reversions() {
        let t = PowerSeries::t(10, O);
        assert_eq!(t.reversion().unwrap(), t);
        let r = geometric(10).reversion().unwrap();
        let expected: Vec<i64> = (1..=10).map(|i| if i % 2 == 1 { 1 } else { -1 }).collect();
        assert_eq!(r, ser(O, &expected));
        let mut c = vec![0; 10];
        c[0] = 1;
        c[1] = 1;
        let r = ser(O, &c).reversion().unwrap();
        assert_eq!(&r.coefficients()[..5], &[q(1), q(-1), q(2), q(-5), q(14)]);
        assert_eq!(ser(O, &[0, 1]).reversion(), Err(SeriesError::ZeroLinear));
    }

    /// Lagrange inversion: [t^n] g = (1/n) [u^{n-1}] (u / f(u))^n.
    fn lagrange_oracle(f: &PowerSeries) -> Vec<Rational> {
        let n = f.order();
        let h = f.shift_down(1, n).with_order(n).recip().unwrap();
        (1..=n).map(|k| &h.pow(k as u32).coefficient(k - 1) / &Rational::from(k)).collect()
    }

    #[test]
    fn reversion_matches_lagrange() {
        for f in [ser(O, &[1, 1, 0, 0, 0, 0, 0, 0]), ser(O, &[2, -1, 3, 0, 5, 1, 0, 7]), geometric(8)] {
            assert_eq!(f.reversion().unwrap().coefficients(), lagrange_oracle(&f).as_slice());
            let g = f.reversion().unwrap();
            assert_eq!(g.compose(&f).unwrap(), PowerSeries::t(8, O));
            assert_eq!(f.compose(&g).unwrap(), PowerSeries::t(8, O));
        }
    }

    #[test]
    fn koszul_checks() {
        let asso = geometric(12);
        assert!(koszul_series_check(&asso, &asso));
        let com = PowerSeries::t(12, E).exp().unwrap().sub(&PowerSeries::constant(q(1), 12, E));
        assert!(!koszul_series_check(&asso, &com));
        let wrong = geometric(12).with_kind(E);
        match koszul_series_compare(&wrong, &com).unwrap() {
            KoszulSeriesOutcome::Differs { degree, .. } => assert_eq!(degree, 2),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn dendriform_equation_gives_catalan() {
        let n = 8;
        let one = PowerSeries::constant(q(1), n, O);
        let t = PowerSeries::t(n, O);
        let linear = t.scale(&q(2)).sub(&one);
        // t y^2 - (1 - 2t) y + t = 0
        let eq = AlgebraicEquation::Polynomial(vec![t.clone(), linear.clone(), t.clone()]);
        let y = solve_algebraic(&eq, n, O).unwrap();
        assert_eq!(&y.coefficients()[..5], &[q(1), q(2), q(5), q(14), q(42)]);
        // without the factor t on y^2 the solution is a different sequence
        let eq = AlgebraicEquation::Polynomial(vec![t.clone(), linear, one]);
        let y = solve_algebraic(&eq, n, O).unwrap();
        assert_eq!(&y.coefficients()[..5], &[q(1), q(3), q(12), q(57), q(300)]);
        let lin = AlgebraicEquation::Polynomial(vec![PowerSeries::t(n, O).neg(), PowerSeries::constant(q(1), n, O)]);
        assert_eq!(solve_algebraic(&lin, n, O).unwrap(), PowerSeries::t(n, O));
    }

    #[test]
    fn lambert_fixpoint() {
        let n = 6;
        let phi = PowerSeries::t(n, E).exp().unwrap();
        let y = solve_algebraic(&AlgebraicEquation::Lagrange(phi), n, E).unwrap();
        let expected = [q(1), q(1), Rational::new(3, 2), Rational::new(8, 3), Rational::new(125, 24)];
        assert_eq!(&y.coefficients()[..5], &expected);
        assert_eq!(y.dims()[4], q(625));
    }

    #[test]
    fn solve_errors() {
        let n = 4;
        let bad = AlgebraicEquation::Polynomial(vec![PowerSeries::constant(q(1), n, O), PowerSeries::constant(q(1), n, O)]);
        assert!(solve_algebraic(&bad, n, O).is_err());
        let amb = AlgebraicEquation::Polynomial(vec![PowerSeries::t(n, O), PowerSeries::zero(n, O), PowerSeries::constant(q(1), n, O)]);
        assert!(solve_algebraic(&amb, n, O).is_err());
    }

    #[test]
    fn free_series_examples() {
        let cat = free_series(&BTreeMap::from([(2, 1)]), 8);
        assert_eq!(cat.coefficients(), &[1, 1, 2, 5, 14, 42, 132, 429].map(q));
        assert_eq!(free_series(&BTreeMap::new(), 5), PowerSeries::t(5, O));
        let fine: BTreeMap<usize, u64> = (3..=8).map(|n| (n, n as u64 - 2)).collect();
        let f = free_series(&fine, 8);
        assert_eq!(f.coefficients(), &[1, 0, 1, 2, 6, 18, 57, 186].map(q));
    }

    #[test]
    fn skew_series_forms() {
        assert_eq!(skew_series(&BTreeMap::new(), 3).unwrap().valuation(), None);
        let dims = BTreeMap::from([(1, 1), (3, 1), (5, 1)]);
        let g = skew_series(&dims, 3).unwrap();
        assert_eq!(g.coefficient(1), q(0));
        assert_eq!(g.coefficient(3), q(-1));
        assert_eq!(g.coefficient(5), Rational::new(-1, 2));
        assert!(skew_series(&BTreeMap::from([(2, 1)]), 3).is_err());
        let alt = skew_series_alternating(&dims, 3).unwrap();
        assert_eq!(alt.coefficients(), &[1, 0, -1, 0, 1].map(q));
        // k = 2 reduces to -f(-t)
        let d2 = BTreeMap::from([(1, 1), (2, 1), (3, 1)]);
        let h = skew_series_alternating(&d2, 2).unwrap();
        assert_eq!(h, geometric(3).negate_argument().neg());
    }

    #[test]
    fn sqrt_and_log() {
        let n = 6;
        let one = PowerSeries::constant(q(1), n, O);
        let f = one.sub(&PowerSeries::t(n, O).scale(&q(4)));
        let s = f.sqrt().unwrap();
        assert_eq!(s.mul(&s), f);
        let l = one.add(&PowerSeries::t(n, O)).log().unwrap();
        assert_eq!(l.exp().unwrap(), one.add(&PowerSeries::t(n, O)));
        assert!(PowerSeries::t(n, O).sqrt().is_err());
    }
}
