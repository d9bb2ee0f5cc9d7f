//! Binary floating point with an explicit per-value precision.
//!
//! A value is `(-1)^negative * mantissa * 2^exponent` with `mantissa` odd (or
//! zero) and at most `precision` bits long. Every operation computes the exact
//! result (or enough of it plus a sticky bit) and rounds once, so results are
//! reproducible bit for bit.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Rounding direction for a single rounding step.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rounding {
    /// Round to nearest, ties to even.
    NearestEven,
    /// Toward positive infinity.
    Up,
    /// Toward negative infinity.
    Down,
}

#[derive(Clone)]
pub struct BigFloat {
    negative: bool,
    mantissa: BigUint,
    exponent: i64,
    precision: u32,
}

impl BigFloat {
    pub const MIN_PRECISION: u32 = 2;

    pub fn zero(precision: u32) -> Self {
        BigFloat {
            negative: false,
            mantissa: BigUint::zero(),
            exponent: 0,
            precision: precision.max(Self::MIN_PRECISION),
        }
    }

    pub fn one(precision: u32) -> Self {
        Self::from_int(&BigInt::one(), precision)
    }

    pub fn from_int(value: &BigInt, precision: u32) -> Self {
        let (sign, mag) = value.clone().into_parts();
        round_parts(sign == Sign::Minus, mag, 0, false, precision, Rounding::NearestEven)
    }

    pub fn from_i64(value: i64, precision: u32) -> Self {
        Self::from_int(&BigInt::from(value), precision)
    }

    /// Exact conversion; `f64` values always fit in 53 bits.
    pub fn from_f64(value: f64, precision: u32) -> Self {
        assert!(value.is_finite(), "BigFloat::from_f64 on non-finite value");
        if value == 0.0 {
            return Self::zero(precision);
        }
        let bits = value.to_bits();
        let negative = bits >> 63 == 1;
        let raw_exp = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (mant, exp) = if raw_exp == 0 {
            (frac, -1074)
        } else {
            (frac | (1u64 << 52), raw_exp - 1075)
        };
        round_parts(
            negative,
            BigUint::from(mant),
            exp,
            false,
            precision,
            Rounding::NearestEven,
        )
    }

    pub fn from_rational(value: &BigRational, precision: u32) -> Self {
        Self::from_ratio(value.numer(), value.denom(), precision, Rounding::NearestEven)
    }

    pub fn from_rational_rounded(value: &BigRational, precision: u32, mode: Rounding) -> Self {
        Self::from_ratio(value.numer(), value.denom(), precision, mode)
    }

    /// Correctly rounded `num / den`.
    pub fn from_ratio(num: &BigInt, den: &BigInt, precision: u32, mode: Rounding) -> Self {
        assert!(!den.is_zero(), "BigFloat division by zero");
        let negative = (num.sign() == Sign::Minus) != (den.sign() == Sign::Minus);
        let n = num.magnitude();
        let d = den.magnitude();
        div_magnitudes(negative && !n.is_zero(), n, 0, d, 0, precision, mode)
    }

    /// Rounds `(-1)^negative · (mag + ε) · 2^exp` where `ε ∈ (0, 1)` is present
    /// iff `sticky`; a sticky `mag` must carry at least `precision + 2` bits.
    pub(crate) fn from_parts(
        negative: bool,
        mag: BigUint,
        exp: i64,
        sticky: bool,
        precision: u32,
        mode: Rounding,
    ) -> Self {
        round_parts(negative, mag, exp, sticky, precision, mode)
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.negative
    }

    /// Re-round to a new precision.
    pub fn with_precision(&self, precision: u32) -> Self {
        self.round_to(precision, Rounding::NearestEven)
    }

    pub fn round_to(&self, precision: u32, mode: Rounding) -> Self {
        round_parts(
            self.negative,
            self.mantissa.clone(),
            self.exponent,
            false,
            precision,
            mode,
        )
    }

    pub fn abs(&self) -> Self {
        let mut out = self.clone();
        out.negative = false;
        out
    }

    pub fn neg(&self) -> Self {
        let mut out = self.clone();
        if !out.is_zero() {
            out.negative = !out.negative;
        }
        out
    }

    /// Position of the highest set bit plus one: `2^(top-1) <= |x| < 2^top`.
    /// `None` for zero.
    pub fn top_bit(&self) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            Some(self.exponent + self.mantissa.bits() as i64)
        }
    }

    /// Unit in the last place at this value's precision.
    pub fn ulp(&self) -> BigFloat {
        let top = self.top_bit().unwrap_or(0);
        BigFloat::pow2(top - self.precision as i64, self.precision)
    }

    pub fn pow2(exponent: i64, precision: u32) -> Self {
        BigFloat {
            negative: false,
            mantissa: BigUint::one(),
            exponent,
            precision: precision.max(Self::MIN_PRECISION),
        }
    }

    pub fn to_rational(&self) -> BigRational {
        let mag = BigInt::from_biguint(
            if self.negative { Sign::Minus } else { Sign::Plus },
            self.mantissa.clone(),
        );
        if self.exponent >= 0 {
            BigRational::from_integer(mag << self.exponent as usize)
        } else {
            BigRational::new(mag, BigInt::one() << (-self.exponent) as usize)
        }
    }

    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let r = self.round_to(53, Rounding::NearestEven);
        let m = r.mantissa.to_f64().unwrap_or(f64::INFINITY);
        let v = scale_f64(m, r.exponent);
        if self.negative {
            -v
        } else {
            v
        }
    }

    /// `log2 |x|`, accurate to double precision for any exponent range.
    pub fn log2_abs(&self) -> f64 {
        if self.is_zero() {
            return f64::NEG_INFINITY;
        }
        let bits = self.mantissa.bits() as i64;
        let keep = bits.min(60);
        let top = (&self.mantissa >> (bits - keep) as usize).to_u64().unwrap_or(u64::MAX) as f64;
        top.log2() + (self.exponent + bits - keep) as f64
    }

    pub fn add(&self, other: &BigFloat) -> BigFloat {
        add_signed(self, other, self.precision.max(other.precision))
    }

    pub fn sub(&self, other: &BigFloat) -> BigFloat {
        add_signed(self, &other.neg(), self.precision.max(other.precision))
    }

    pub fn mul(&self, other: &BigFloat) -> BigFloat {
        let precision = self.precision.max(other.precision);
        round_parts(
            self.negative != other.negative,
            &self.mantissa * &other.mantissa,
            self.exponent + other.exponent,
            false,
            precision,
            Rounding::NearestEven,
        )
    }

    pub fn div(&self, other: &BigFloat) -> BigFloat {
        assert!(!other.is_zero(), "BigFloat division by zero");
        let precision = self.precision.max(other.precision);
        div_magnitudes(
            self.negative != other.negative && !self.is_zero(),
            &self.mantissa,
            self.exponent,
            &other.mantissa,
            other.exponent,
            precision,
            Rounding::NearestEven,
        )
    }

    /// `self * num / den` with a single rounding.
    pub fn mul_ratio(&self, num: &BigInt, den: &BigInt) -> BigFloat {
        let negative = self.negative ^ (num.sign() == Sign::Minus) ^ (den.sign() == Sign::Minus);
        let n = &self.mantissa * num.magnitude();
        let zero = n.is_zero();
        div_magnitudes(
            negative && !zero,
            &n,
            self.exponent,
            den.magnitude(),
            0,
            self.precision,
            Rounding::NearestEven,
        )
    }

    pub fn mul_int(&self, factor: &BigInt) -> BigFloat {
        round_parts(
            self.negative ^ (factor.sign() == Sign::Minus),
            &self.mantissa * factor.magnitude(),
            self.exponent,
            false,
            self.precision,
            Rounding::NearestEven,
        )
    }

    /// Multiply by `2^k`; exact.
    pub fn mul_pow2(&self, k: i64) -> BigFloat {
        let mut out = self.clone();
        if !out.is_zero() {
            out.exponent += k;
        }
        out
    }

    /// Correctly rounded square root. Panics on negative input.
    pub fn sqrt(&self) -> BigFloat {
        assert!(!self.negative, "BigFloat::sqrt of a negative value");
        sqrt_magnitude(&self.mantissa, self.exponent, self.precision, Rounding::NearestEven)
    }

    /// Decimal rendering with `significant` significant digits, rounded half
    /// to even. Positional for moderate exponents, scientific otherwise.
    pub fn to_decimal_string(&self, significant: usize) -> String {
        let significant = significant.max(1);
        if self.is_zero() {
            return "0".to_string();
        }
        let (digits, exp10) = decimal_digits(&self.to_rational().abs(), significant);
        let sign = if self.negative { "-" } else { "" };
        format_decimal(sign, &digits, exp10)
    }
}

/// Significant decimal digits of a positive rational and the decimal exponent
/// of the leading digit.
pub(crate) fn decimal_digits(value: &BigRational, significant: usize) -> (String, i64) {
    debug_assert!(value.is_positive());
    let mut exp10 = floor_log10(value);
    let ten = BigInt::from(10u32);
    loop {
        let shift = significant as i64 - 1 - exp10;
        let scaled = if shift >= 0 {
            value * BigRational::from_integer(num_traits::pow(ten.clone(), shift as usize))
        } else {
            value / BigRational::from_integer(num_traits::pow(ten.clone(), (-shift) as usize))
        };
        let rounded = round_half_even(&scaled);
        let text = rounded.to_string();
        if text.len() > significant {
            // Rounding carried into a new leading digit.
            exp10 += 1;
            continue;
        }
        return (text, exp10);
    }
}

fn format_decimal(sign: &str, digits: &str, exp10: i64) -> String {
    let trimmed = digits.trim_end_matches('0');
    let digits = if trimmed.is_empty() { "0" } else { trimmed };
    let n = digits.len() as i64;
    if (-6..21).contains(&exp10) {
        if exp10 < 0 {
            format!("{sign}0.{}{digits}", "0".repeat((-exp10 - 1) as usize))
        } else if exp10 + 1 >= n {
            format!("{sign}{digits}{}", "0".repeat((exp10 + 1 - n) as usize))
        } else {
            let (int, frac) = digits.split_at((exp10 + 1) as usize);
            format!("{sign}{int}.{frac}")
        }
    } else if n == 1 {
        format!("{sign}{digits}e{exp10}")
    } else {
        format!("{sign}{}.{}e{exp10}", &digits[..1], &digits[1..])
    }
}

/// `floor(log10(x))` for positive rational `x`, exact.
pub(crate) fn floor_log10(value: &BigRational) -> i64 {
    let n = value.numer().magnitude().bits() as f64;
    let d = value.denom().magnitude().bits() as f64;
    let mut guess = ((n - d) * std::f64::consts::LOG10_2).floor() as i64;
    let ten = BigRational::from_integer(BigInt::from(10u32));
    let pow10 = |e: i64| -> BigRational {
        if e >= 0 {
            num_traits::pow(ten.clone(), e as usize)
        } else {
            num_traits::pow(ten.clone(), (-e) as usize).recip()
        }
    };
    while pow10(guess) > *value {
        guess -= 1;
    }
    while pow10(guess + 1) <= *value {
        guess += 1;
    }
    guess
}

pub(crate) fn round_half_even(value: &BigRational) -> BigInt {
    let floor = value.floor().to_integer();
    let frac = value - BigRational::from_integer(floor.clone());
    let half = BigRational::new(BigInt::one(), BigInt::from(2u32));
    match frac.cmp(&half) {
        Ordering::Less => floor,
        Ordering::Greater => floor + 1,
        Ordering::Equal => {
            if floor.is_even() {
                floor
            } else {
                floor + 1
            }
        }
    }
}

fn scale_f64(m: f64, exp: i64) -> f64 {
    // powi saturates cleanly; split to stay inside the i32 range.
    let mut v = m;
    let mut e = exp;
    while e > 1000 {
        v *= 2f64.powi(1000);
        e -= 1000;
        if v.is_infinite() {
            return v;
        }
    }
    while e < -1000 {
        v *= 2f64.powi(-1000);
        e += 1000;
        if v == 0.0 {
            return v;
        }
    }
    v * 2f64.powi(e as i32)
}

/// Round `(-1)^negative * (mag + sticky_fraction) * 2^exp` to `precision` bits.
///
/// When `sticky` is set, `mag` must carry at least `precision + 2` bits so the
/// discarded part lies strictly below half an ulp of the kept bits.
fn round_parts(negative: bool, mag: BigUint, exp: i64, sticky: bool, precision: u32, mode: Rounding) -> BigFloat {
    let precision = precision.max(BigFloat::MIN_PRECISION);
    if mag.is_zero() {
        debug_assert!(!sticky);
        return BigFloat::zero(precision);
    }
    let bits = mag.bits();
    debug_assert!(!sticky || bits >= precision as u64 + 2);
    let (mut kept, mut exp) = (mag, exp);
    if bits > precision as u64 {
        let shift = bits - precision as u64;
        let q = &kept >> shift as usize;
        let rem = &kept - (&q << shift as usize);
        let half = BigUint::one() << (shift - 1) as usize;
        let inexact = sticky || !rem.is_zero();
        let away = match mode {
            Rounding::NearestEven => match rem.cmp(&half) {
                Ordering::Greater => true,
                Ordering::Less => false,
                Ordering::Equal => sticky || q.is_odd(),
            },
            Rounding::Up => inexact && !negative,
            Rounding::Down => inexact && negative,
        };
        kept = if away { q + 1u32 } else { q };
        exp += shift as i64;
    }
    // Canonical form: odd mantissa.
    let tz = kept.trailing_zeros().unwrap_or(0);
    if tz > 0 {
        kept >>= tz as usize;
        exp += tz as i64;
    }
    BigFloat {
        negative,
        mantissa: kept,
        exponent: exp,
        precision,
    }
}

fn div_magnitudes(
    negative: bool,
    num: &BigUint,
    num_exp: i64,
    den: &BigUint,
    den_exp: i64,
    precision: u32,
    mode: Rounding,
) -> BigFloat {
    if num.is_zero() {
        return BigFloat::zero(precision);
    }
    let precision = precision.max(BigFloat::MIN_PRECISION);
    let k = precision as i64 + 2 + den.bits() as i64 - num.bits() as i64;
    let (q, r) = if k >= 0 {
        (num << k as usize).div_rem(den)
    } else {
        num.div_rem(&(den << (-k) as usize))
    };
    round_parts(negative, q, num_exp - den_exp - k, !r.is_zero(), precision, mode)
}

fn sqrt_magnitude(mag: &BigUint, exp: i64, precision: u32, mode: Rounding) -> BigFloat {
    if mag.is_zero() {
        return BigFloat::zero(precision);
    }
    let want = 2 * (precision as i64 + 2);
    let mut shift = (want - mag.bits() as i64).max(0);
    if (exp - shift).rem_euclid(2) != 0 {
        shift += 1;
    }
    let scaled = mag << shift as usize;
    let root = scaled.sqrt();
    let sticky = &root * &root != scaled;
    round_parts(false, root, (exp - shift) / 2, sticky, precision, mode)
}

fn add_signed(x: &BigFloat, y: &BigFloat, precision: u32) -> BigFloat {
    if x.is_zero() {
        return y.with_precision(precision);
    }
    if y.is_zero() {
        return x.with_precision(precision);
    }
    let (large, small) = if x.top_bit() >= y.top_bit() { (x, y) } else { (y, x) };
    let same_sign = large.negative == small.negative;
    let lift = (precision as i64 + 3 - large.mantissa.bits() as i64).max(0);
    let unit_exp = large.exponent - lift;
    if small.top_bit().unwrap() <= unit_exp {
        // `small` is below one unit of the lifted large operand: fold it into
        // a sticky bit instead of aligning arbitrarily far.
        let lifted = &large.mantissa << lift as usize;
        let mag = if same_sign { lifted } else { lifted - 1u32 };
        return round_parts(large.negative, mag, unit_exp, true, precision, Rounding::NearestEven);
    }
    let base = large.exponent.min(small.exponent);
    let a = &large.mantissa << (large.exponent - base) as usize;
    let b = &small.mantissa << (small.exponent - base) as usize;
    if same_sign {
        round_parts(large.negative, a + b, base, false, precision, Rounding::NearestEven)
    } else {
        match a.cmp(&b) {
            Ordering::Equal => BigFloat::zero(precision),
            Ordering::Greater => round_parts(large.negative, a - b, base, false, precision, Rounding::NearestEven),
            Ordering::Less => round_parts(small.negative, b - a, base, false, precision, Rounding::NearestEven),
        }
    }
}

impl PartialEq for BigFloat {
    fn eq(&self, other: &Self) -> bool {
        self.negative == other.negative && self.exponent == other.exponent && self.mantissa == other.mantissa
    }
}

impl PartialOrd for BigFloat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(compare(self, other))
    }
}

fn compare(x: &BigFloat, y: &BigFloat) -> Ordering {
    match (x.is_zero(), y.is_zero()) {
        (true, true) => return Ordering::Equal,
        (true, false) => {
            return if y.negative { Ordering::Greater } else { Ordering::Less };
        }
        (false, true) => {
            return if x.negative { Ordering::Less } else { Ordering::Greater };
        }
        _ => {}
    }
    if x.negative != y.negative {
        return if x.negative { Ordering::Less } else { Ordering::Greater };
    }
    let mag = match x.top_bit().cmp(&y.top_bit()) {
        Ordering::Equal => {
            let base = x.exponent.min(y.exponent);
            let a = &x.mantissa << (x.exponent - base) as usize;
            let b = &y.mantissa << (y.exponent - base) as usize;
            a.cmp(&b)
        }
        other => other,
    };
    if x.negative {
        mag.reverse()
    } else {
        mag
    }
}

impl fmt::Debug for BigFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "BigFloat({}, {} bits)",
            self.to_decimal_string(((self.precision as f64) * std::f64::consts::LOG10_2) as usize + 1),
            self.precision
        )
    }
}

impl fmt::Display for BigFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = ((self.precision as f64) * std::f64::consts::LOG10_2).floor() as usize;
        f.write_str(&self.to_decimal_string(digits.max(1)))
    }
}

/// Decimal digits representable at `bits` of precision.
pub fn decimal_digits_for_bits(bits: u32) -> usize {
    ((bits as f64) * std::f64::consts::LOG10_2).floor() as usize
}

/// Working precision for a `digits`-digit result: `ceil(digits·log2 10) + 32`.
pub fn bits_for_decimal_digits(digits: usize) -> u32 {
    ((digits as f64) * std::f64::consts::LOG2_10).ceil() as u32 + 32
}
