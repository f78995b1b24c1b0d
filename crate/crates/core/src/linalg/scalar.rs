use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::matrix::Matrix;
use super::rank;
use crate::error::{Error, Result};

/// Distance below which two float points are treated as the same point.
pub const FLOAT_POINT_TOL: f64 = 1e-8;

const SNAP_MAX_DENOM: i64 = 12;
const SNAP_TOL: f64 = 5e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Float,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::Exact => f.write_str("exact"),
            Mode::Float => f.write_str("float"),
        }
    }
}

/// Field of matrix entries. Implemented for exact Gaussian rationals ([`Qi`])
/// and for double-precision complex numbers.
pub trait Scalar:
    Clone
    + PartialEq
    + fmt::Debug
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    const MODE: Mode;

    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn conj(&self) -> Self;
    fn from_parts(re: i64, im: i64) -> Self;
    /// Converts a float pair into this field. Exact mode converts the binary
    /// value without rounding.
    fn from_f64_parts(re: f64, im: f64) -> Result<Self>;
    fn to_c64(&self) -> Complex64;
    /// Exact equality in exact mode, distance below [`FLOAT_POINT_TOL`] in float mode.
    fn same(&self, other: &Self) -> bool;
    /// Total order: real part first, then imaginary part.
    fn lex_cmp(&self, other: &Self) -> Ordering;

    fn modulus(&self) -> f64 {
        self.to_c64().norm()
    }

    /// Nearby simple value for an approximate eigenvalue: a Gaussian rational
    /// with small denominators in exact mode, the value itself in float mode.
    #[doc(hidden)]
    fn snap(z: Complex64) -> Option<Self>;
    #[doc(hidden)]
    fn rank_of(m: &Matrix<Self>, rel_tol: f64) -> usize;
    #[doc(hidden)]
    fn nullspace_of(m: &Matrix<Self>, rel_tol: f64) -> Vec<Vec<Self>>;
}

/// Exact Gaussian rational `re + i·im`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Qi {
    pub re: BigRational,
    pub im: BigRational,
}

impl Qi {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Qi { re, im }
    }

    pub fn from_ratio(re: (i64, i64), im: (i64, i64)) -> Self {
        Qi {
            re: BigRational::new(re.0.into(), re.1.into()),
            im: BigRational::new(im.0.into(), im.1.into()),
        }
    }

    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    /// Least common multiple of the two denominators.
    pub fn denom_lcm(&self) -> BigInt {
        num_integer::lcm(self.re.denom().clone(), self.im.denom().clone())
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }
}

impl fmt::Debug for Qi {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Qi {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            write!(f, "{}", self.re)
        } else if self.re.is_zero() {
            write!(f, "{}i", self.im)
        } else if self.im.is_negative() {
            write!(f, "{}-{}i", self.re, -&self.im)
        } else {
            write!(f, "{}+{}i", self.re, self.im)
        }
    }
}

fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n = BigInt::from_str(n.trim()).map_err(|e| Error::Input(format!("{s}: {e}")))?;
        let d = BigInt::from_str(d.trim()).map_err(|e| Error::Input(format!("{s}: {e}")))?;
        if d.is_zero() {
            return Err(Error::Input(format!("{s}: zero denominator")));
        }
        Ok(BigRational::new(n, d))
    } else if let Ok(n) = BigInt::from_str(s) {
        Ok(BigRational::from_integer(n))
    } else {
        parse_decimal(s).ok_or_else(|| Error::Input(format!("{s}: not a number")))
    }
}

/// `[-]digits[.digits][e[-]digits]`, read as the decimal it spells.
fn parse_decimal(s: &str) -> Option<BigRational> {
    let (mant, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (neg, mant) = match mant.strip_prefix('-') {
        Some(m) => (true, m),
        None => (false, mant.strip_prefix('+').unwrap_or(mant)),
    };
    let (int, frac) = mant.split_once('.').unwrap_or((mant, ""));
    if int.is_empty() && frac.is_empty() || !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits = BigInt::from_str(&format!("0{int}{frac}")).ok()?;
    let scale = exp - frac.len() as i32;
    let ten = BigInt::from(10);
    let mut r = if scale >= 0 {
        BigRational::from_integer(digits * num_traits::pow(ten, scale as usize))
    } else {
        BigRational::new(digits, num_traits::pow(ten, (-scale) as usize))
    };
    if neg {
        r = -r;
    }
    Some(r)
}

impl Qi {
    /// Parses `"p/q"`, an integer, or a decimal such as `"-0.125"` or
    /// `"1e-3"` for each part.
    pub fn parse_parts(re: &str, im: &str) -> Result<Self> {
        Ok(Qi::new(parse_rational(re)?, parse_rational(im)?))
    }
}

impl Add for Qi {
    type Output = Qi;
    fn add(self, o: Qi) -> Qi {
        Qi::new(self.re + o.re, self.im + o.im)
    }
}

impl Sub for Qi {
    type Output = Qi;
    fn sub(self, o: Qi) -> Qi {
        Qi::new(self.re - o.re, self.im - o.im)
    }
}

impl Mul for Qi {
    type Output = Qi;
    fn mul(self, o: Qi) -> Qi {
        if self.im.is_zero() && o.im.is_zero() {
            return Qi::new(self.re * o.re, BigRational::zero());
        }
        let re = &self.re * &o.re - &self.im * &o.im;
        let im = &self.re * &o.im + &self.im * &o.re;
        Qi::new(re, im)
    }
}

impl Div for Qi {
    type Output = Qi;
    fn div(self, o: Qi) -> Qi {
        let n = o.norm_sqr();
        assert!(!n.is_zero(), "division by zero Gaussian rational");
        let c = o.conj();
        let p = self * c;
        Qi::new(p.re / &n, p.im / n)
    }
}

impl Neg for Qi {
    type Output = Qi;
    fn neg(self) -> Qi {
        Qi::new(-self.re, -self.im)
    }
}

impl Scalar for Qi {
    const MODE: Mode = Mode::Exact;

    fn zero() -> Self {
        Qi::new(BigRational::zero(), BigRational::zero())
    }

    fn one() -> Self {
        Qi::new(BigRational::one(), BigRational::zero())
    }

    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    fn conj(&self) -> Self {
        Qi::new(self.re.clone(), -&self.im)
    }

    fn from_parts(re: i64, im: i64) -> Self {
        Qi::new(
            BigRational::from_integer(re.into()),
            BigRational::from_integer(im.into()),
        )
    }

    fn from_f64_parts(re: f64, im: f64) -> Result<Self> {
        let re = BigRational::from_float(re).ok_or(Error::NonFinite)?;
        let im = BigRational::from_float(im).ok_or(Error::NonFinite)?;
        Ok(Qi::new(re, im))
    }

    fn to_c64(&self) -> Complex64 {
        Complex64::new(
            self.re.to_f64().unwrap_or(f64::NAN),
            self.im.to_f64().unwrap_or(f64::NAN),
        )
    }

    fn same(&self, other: &Self) -> bool {
        self == other
    }

    fn lex_cmp(&self, other: &Self) -> Ordering {
        self.re.cmp(&other.re).then_with(|| self.im.cmp(&other.im))
    }

    fn snap(z: Complex64) -> Option<Self> {
        fn part(x: f64) -> Option<BigRational> {
            if !x.is_finite() {
                return None;
            }
            (1..=SNAP_MAX_DENOM).find_map(|q| {
                let r = (x * q as f64).round();
                ((x - r / q as f64).abs() < SNAP_TOL && r.abs() < 1e15)
                    .then(|| BigRational::new((r as i64).into(), q.into()))
            })
        }
        Some(Qi::new(part(z.re)?, part(z.im)?))
    }

    fn rank_of(m: &Matrix<Self>, _rel_tol: f64) -> usize {
        rank::exact_rank(m)
    }

    fn nullspace_of(m: &Matrix<Self>, _rel_tol: f64) -> Vec<Vec<Self>> {
        rank::exact_nullspace(m)
    }
}

impl Scalar for Complex64 {
    const MODE: Mode = Mode::Float;

    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }

    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }

    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }

    fn conj(&self) -> Self {
        Complex64::conj(self)
    }

    fn from_parts(re: i64, im: i64) -> Self {
        Complex64::new(re as f64, im as f64)
    }

    fn from_f64_parts(re: f64, im: f64) -> Result<Self> {
        if re.is_finite() && im.is_finite() {
            Ok(Complex64::new(re, im))
        } else {
            Err(Error::NonFinite)
        }
    }

    fn to_c64(&self) -> Complex64 {
        *self
    }

    fn same(&self, other: &Self) -> bool {
        (self - other).norm() < FLOAT_POINT_TOL
    }

    fn lex_cmp(&self, other: &Self) -> Ordering {
        self.re
            .total_cmp(&other.re)
            .then_with(|| self.im.total_cmp(&other.im))
    }

    fn snap(z: Complex64) -> Option<Self> {
        Some(z)
    }

    fn rank_of(m: &Matrix<Self>, rel_tol: f64) -> usize {
        rank::float_rank(m, rel_tol)
    }

    fn nullspace_of(m: &Matrix<Self>, rel_tol: f64) -> Vec<Vec<Self>> {
        rank::float_nullspace(m, rel_tol)
    }
}

/// A point of `ℂⁿ`.
pub type Point<F> = Vec<F>;

pub fn points_same<F: Scalar>(a: &[F], b: &[F]) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x.same(y))
}

pub fn point_lex_cmp<F: Scalar>(a: &[F], b: &[F]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.lex_cmp(y) {
            Ordering::Equal => continue,
            o => return o,
        }
    }
    a.len().cmp(&b.len())
}

pub fn point_to_c64<F: Scalar>(p: &[F]) -> Vec<Complex64> {
    p.iter().map(Scalar::to_c64).collect()
}

/// Settings for numerical or exact rank decisions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RankConfig {
    pub mode: Mode,
    /// Relative singular-value cutoff; ignored in exact mode.
    pub rel_tolerance: f64,
}

impl RankConfig {
    pub const DEFAULT_REL_TOLERANCE: f64 = 1e-10;

    pub fn exact() -> Self {
        RankConfig {
            mode: Mode::Exact,
            rel_tolerance: Self::DEFAULT_REL_TOLERANCE,
        }
    }

    pub fn float() -> Self {
        RankConfig {
            mode: Mode::Float,
            rel_tolerance: Self::DEFAULT_REL_TOLERANCE,
        }
    }

    pub fn float_with(rel_tolerance: f64) -> Result<Self> {
        if rel_tolerance > 0.0 && rel_tolerance.is_finite() {
            Ok(RankConfig {
                mode: Mode::Float,
                rel_tolerance,
            })
        } else {
            Err(Error::Input(format!(
                "float rank tolerance must be positive, got {rel_tolerance}"
            )))
        }
    }

    pub fn for_mode(mode: Mode) -> Self {
        match mode {
            Mode::Exact => Self::exact(),
            Mode::Float => Self::float(),
        }
    }

    pub(crate) fn check<F: Scalar>(&self) -> Result<()> {
        if self.mode != F::MODE {
            return Err(Error::ModeMismatch {
                expected: self.mode,
                found: F::MODE,
            });
        }
        if self.mode == Mode::Float && !(self.rel_tolerance > 0.0) {
            return Err(Error::Input("float rank tolerance must be positive".into()));
        }
        Ok(())
    }
}
