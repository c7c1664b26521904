//! Scalar abstraction so that the same formula code runs in native `f64`
//! and in 128-bit software floating point ([`Ext`], about 38 significant
//! decimal digits).

use std::cell::RefCell;
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use astro_float::{BigFloat, Consts, RoundingMode};
use serde::{Deserialize, Serialize};

use crate::ion::gamma::lanczos_gamma;

/// Working precision of an evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Precision {
    Double,
    Extended,
}

impl Precision {
    /// Pass threshold for the form-equivalence check at this precision.
    pub fn equivalence_tolerance(self) -> f64 {
        match self {
            Precision::Double => 1e-10,
            Precision::Extended => 1e-25,
        }
    }
}

impl fmt::Display for Precision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Precision::Double => "double",
            Precision::Extended => "extended",
        })
    }
}

pub trait Real:
    Clone
    + PartialOrd
    + fmt::Debug
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    /// Exact conversion (every f64 is representable in both impls).
    fn from_f64(v: f64) -> Self;
    /// Round to nearest f64.
    fn to_f64(&self) -> f64;
    fn sqrt(&self) -> Self;
    fn ln(&self) -> Self;
    fn exp(&self) -> Self;
    fn exp_m1(&self) -> Self;
    fn asin(&self) -> Self;
    /// ln Gamma(x); callers keep x inside [1, 3].
    fn ln_gamma(&self) -> Self;
    fn is_finite(&self) -> bool;
}

/// Shorthand for small exact constants inside generic formulas.
pub(crate) fn lit<T: Real>(v: f64) -> T {
    T::from_f64(v)
}

impl Real for f64 {
    fn from_f64(v: f64) -> Self {
        v
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn sqrt(&self) -> Self {
        f64::sqrt(*self)
    }
    fn ln(&self) -> Self {
        f64::ln(*self)
    }
    fn exp(&self) -> Self {
        f64::exp(*self)
    }
    fn exp_m1(&self) -> Self {
        f64::exp_m1(*self)
    }
    fn asin(&self) -> Self {
        f64::asin(*self)
    }
    fn ln_gamma(&self) -> Self {
        lanczos_gamma(*self).ln()
    }
    fn is_finite(&self) -> bool {
        f64::is_finite(*self)
    }
}

/// Mantissa width of [`Ext`] in bits.
pub const EXT_BITS: usize = 128;
const RM: RoundingMode = RoundingMode::ToEven;

thread_local! {
    static CONSTS: RefCell<Consts> =
        RefCell::new(Consts::new().expect("astro-float constants cache"));
}

fn with_consts<R>(f: impl FnOnce(&mut Consts) -> R) -> R {
    CONSTS.with(|cc| f(&mut cc.borrow_mut()))
}

/// 128-bit binary floating point backed by `astro-float`.
#[derive(Clone, PartialEq)]
pub struct Ext(BigFloat);

impl Ext {
    pub fn from_i64(v: i64) -> Self {
        Ext(BigFloat::from_i64(v, EXT_BITS))
    }

    /// Parse a decimal literal at full working precision.
    pub fn parse(s: &str) -> Self {
        let v = with_consts(|cc| BigFloat::parse(s, astro_float::Radix::Dec, EXT_BITS, RM, cc));
        assert!(!v.is_nan(), "unparseable extended literal {s:?}");
        Ext(v)
    }

    pub fn pi() -> Self {
        Ext(with_consts(|cc| cc.pi(EXT_BITS, RM)))
    }

    pub fn abs(&self) -> Self {
        Ext(self.0.abs())
    }

    pub fn powi(&self, n: usize) -> Self {
        Ext(self.0.powi(n, EXT_BITS, RM))
    }

    /// Decimal rendering with every significant digit.
    pub fn to_decimal_string(&self) -> String {
        format!("{}", self.0)
    }
}

impl fmt::Debug for Ext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ext({})", self.0)
    }
}

impl fmt::Display for Ext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl PartialOrd for Ext {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.0.partial_cmp(&other.0)
    }
}

impl Add for Ext {
    type Output = Ext;
    fn add(self, rhs: Ext) -> Ext {
        Ext(self.0.add(&rhs.0, EXT_BITS, RM))
    }
}

impl Sub for Ext {
    type Output = Ext;
    fn sub(self, rhs: Ext) -> Ext {
        Ext(self.0.sub(&rhs.0, EXT_BITS, RM))
    }
}

impl Mul for Ext {
    type Output = Ext;
    fn mul(self, rhs: Ext) -> Ext {
        Ext(self.0.mul(&rhs.0, EXT_BITS, RM))
    }
}

impl Div for Ext {
    type Output = Ext;
    fn div(self, rhs: Ext) -> Ext {
        Ext(self.0.div(&rhs.0, EXT_BITS, RM))
    }
}

impl Neg for Ext {
    type Output = Ext;
    fn neg(self) -> Ext {
        Ext(self.0.neg())
    }
}

impl Real for Ext {
    fn from_f64(v: f64) -> Self {
        Ext(BigFloat::from_f64(v, EXT_BITS))
    }

    fn to_f64(&self) -> f64 {
        if self.0.is_nan() {
            return f64::NAN;
        }
        if self.0.is_inf_pos() {
            return f64::INFINITY;
        }
        if self.0.is_inf_neg() {
            return f64::NEG_INFINITY;
        }
        // astro-float keeps its own f64 conversion private; the decimal
        // rendering carries ~39 digits, which rounds correctly in practice.
        let s = format!("{}", self.0);
        s.parse::<f64>()
            .unwrap_or_else(|_| panic!("unexpected decimal rendering {s:?}"))
    }

    fn sqrt(&self) -> Self {
        Ext(self.0.sqrt(EXT_BITS, RM))
    }

    fn ln(&self) -> Self {
        Ext(with_consts(|cc| self.0.ln(EXT_BITS, RM, cc)))
    }

    fn exp(&self) -> Self {
        Ext(with_consts(|cc| self.0.exp(EXT_BITS, RM, cc)))
    }

    fn exp_m1(&self) -> Self {
        // 128 bits leave ~1e-38 absolute error, far below any tolerance used here
        self.exp() - Ext::from_i64(1)
    }

    fn asin(&self) -> Self {
        Ext(with_consts(|cc| self.0.asin(EXT_BITS, RM, cc)))
    }

    fn ln_gamma(&self) -> Self {
        stirling_ln_gamma(self)
    }

    fn is_finite(&self) -> bool {
        !self.0.is_nan() && !self.0.is_inf()
    }
}

/// B_2, B_4, ..., B_30 as (numerator, denominator).
const BERNOULLI: [(i64, i64); 15] = [
    (1, 6),
    (-1, 30),
    (1, 42),
    (-1, 30),
    (5, 66),
    (-691, 2730),
    (7, 6),
    (-3617, 510),
    (43867, 798),
    (-174611, 330),
    (854513, 138),
    (-236364091, 2730),
    (8553103, 6),
    (-23749461029, 870),
    (8615841276005, 14322),
];

/// Arguments are shifted up by this much before the asymptotic series;
/// at z >= 40 the fifteen-term tail is below 1e-40 relative.
const STIRLING_SHIFT: i64 = 40;

/// ln Gamma(x) for x > 0 by upward recurrence and the Stirling series.
fn stirling_ln_gamma(x: &Ext) -> Ext {
    let mut shift_product = Ext::from_i64(1);
    let mut z = x.clone();
    for _ in 0..STIRLING_SHIFT {
        shift_product = shift_product * z.clone();
        z = z + Ext::from_i64(1);
    }

    let half = Ext::parse("0.5");
    let two_pi = Ext::pi() * Ext::from_i64(2);
    let mut series = (z.clone() - half.clone()) * z.ln() - z.clone() + half * two_pi.ln();

    let z_sq = z.clone() * z.clone();
    let mut z_pow = z.clone();
    for (k, &(num, den)) in BERNOULLI.iter().enumerate() {
        let two_k = 2 * (k as i64 + 1);
        let term = Ext::from_i64(num)
            / (Ext::from_i64(den) * Ext::from_i64(two_k * (two_k - 1)) * z_pow.clone());
        series = series + term;
        z_pow = z_pow * z_sq.clone();
    }

    series - shift_product.ln()
}
