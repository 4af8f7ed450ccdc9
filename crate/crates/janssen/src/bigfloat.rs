//! Arbitrary-precision binary floating point with directed rounding.
//!
//! A value is `mant · 2^exp` with a [`BigInt`] mantissa, so every intermediate
//! stays exact until an explicit rounding step. Every operation takes a target
//! precision and a [`Dir`]; the result is guaranteed ≤ the exact value when
//! rounding down and ≥ it when rounding up. Enclosures are built on top of
//! this by running each endpoint in the appropriate direction.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use std::cmp::Ordering;

/// Rounding direction: toward −∞ or toward +∞.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dir {
    Down,
    Up,
}

impl Dir {
    pub fn flip(self) -> Dir {
        match self {
            Dir::Down => Dir::Up,
            Dir::Up => Dir::Down,
        }
    }
}

/// Value `mant · 2^exp`; zero is stored as mant = 0, exp = 0.
#[derive(Debug, Clone)]
pub struct BigFloat {
    mant: BigInt,
    exp: i64,
}

/// Floor division by 2^shift (toward −∞) for signed mantissas.
fn shr_floor(m: &BigInt, shift: u64) -> BigInt {
    if shift == 0 {
        return m.clone();
    }
    let mag = m.magnitude();
    let q = mag >> shift;
    if m.is_negative() {
        let exact = mag.trailing_zeros().map_or(true, |tz| tz >= shift);
        let adj = if exact { q } else { q + 1u32 };
        -BigInt::from(adj)
    } else {
        BigInt::from(q)
    }
}

/// Directed division by 2^shift.
fn shr_dir(m: &BigInt, shift: u64, dir: Dir) -> BigInt {
    match dir {
        Dir::Down => shr_floor(m, shift),
        Dir::Up => -shr_floor(&-m, shift),
    }
}

impl BigFloat {
    pub fn zero() -> Self {
        BigFloat { mant: BigInt::zero(), exp: 0 }
    }

    /// Exact constructor; strips trailing zero bits to keep mantissas short.
    pub fn new(mant: BigInt, exp: i64) -> Self {
        if mant.is_zero() {
            return Self::zero();
        }
        let tz = mant.magnitude().trailing_zeros().unwrap_or(0);
        if tz == 0 {
            return BigFloat { mant, exp };
        }
        let sign_neg = mant.is_negative();
        let mag = mant.magnitude() >> tz;
        let m = if sign_neg { -BigInt::from(mag) } else { BigInt::from(mag) };
        BigFloat { mant: m, exp: exp.checked_add(tz as i64).expect("exponent overflow") }
    }

    pub fn from_i64(v: i64) -> Self {
        Self::new(BigInt::from(v), 0)
    }

    pub fn from_u64(v: u64) -> Self {
        Self::new(BigInt::from(v), 0)
    }

    pub fn from_bigint(v: BigInt) -> Self {
        Self::new(v, 0)
    }

    /// Exact power of two.
    pub fn exp2(k: i64) -> Self {
        BigFloat { mant: BigInt::from(1), exp: k }
    }

    /// Exact decode of a finite f64.
    pub fn from_f64(x: f64) -> Option<Self> {
        if !x.is_finite() {
            return None;
        }
        if x == 0.0 {
            return Some(Self::zero());
        }
        let bits = x.to_bits();
        let neg = bits >> 63 == 1;
        let biased = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (m, e) = if biased == 0 {
            (frac, -1074)
        } else {
            (frac | (1u64 << 52), biased - 1075)
        };
        let mut mant = BigInt::from(m);
        if neg {
            mant = -mant;
        }
        Some(Self::new(mant, e))
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mant.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.mant.is_positive()
    }

    /// Significant bits of the mantissa.
    pub fn bits(&self) -> u64 {
        self.mant.magnitude().bits()
    }

    /// Position p with |value| ∈ [2^(p−1), 2^p); meaningless for zero.
    fn msb(&self) -> i64 {
        self.exp + self.bits() as i64
    }

    pub fn neg(&self) -> Self {
        BigFloat { mant: -&self.mant, exp: self.exp }
    }

    pub fn abs(&self) -> Self {
        BigFloat { mant: self.mant.abs(), exp: self.exp }
    }

    /// Exact scaling by 2^k.
    pub fn mul_exp2(&self, k: i64) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        BigFloat { mant: self.mant.clone(), exp: self.exp.checked_add(k).expect("exponent overflow") }
    }

    /// Directed rounding to at most `prec` mantissa bits.
    pub fn round_to(&self, prec: u64, dir: Dir) -> Self {
        let prec = prec.max(2);
        let b = self.bits();
        if b <= prec {
            return self.clone();
        }
        let shift = b - prec;
        let q = shr_dir(&self.mant, shift, dir);
        Self::new(q, self.exp.checked_add(shift as i64).expect("exponent overflow"))
    }

    /// One unit in the last place at `prec` significant bits, measured from
    /// the value's leading bit; independent of how the mantissa is stored.
    fn ulp_at(&self, prec: u64) -> Self {
        Self::exp2(self.msb() - prec as i64)
    }

    pub fn add(&self, other: &Self, prec: u64, dir: Dir) -> Self {
        if self.is_zero() {
            return other.round_to(prec, dir);
        }
        if other.is_zero() {
            return self.round_to(prec, dir);
        }
        let (big, small) = if self.msb() >= other.msb() { (self, other) } else { (other, self) };
        let gap = big.msb() - small.msb();
        let threshold = prec as i64 + 66;
        if gap > threshold {
            // The small addend lies beyond every retained digit; a one-ulp nudge
            // in the rounding direction keeps the result directed.
            let r0 = big.round_to(prec + 2, dir);
            let nudged = match (dir, small.is_negative()) {
                (Dir::Down, true) => r0.sub_exact(&r0.ulp_at(prec + 2)),
                (Dir::Up, false) => r0.add_exact(&r0.ulp_at(prec + 2)),
                _ => r0,
            };
            return nudged.round_to(prec, dir);
        }
        self.add_exact(other).round_to(prec, dir)
    }

    /// Exact sum; mantissa growth bounded by the exponent gap.
    fn add_exact(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let e = self.exp.min(other.exp);
        let a = &self.mant << (self.exp - e) as u64;
        let b = &other.mant << (other.exp - e) as u64;
        Self::new(a + b, e)
    }

    fn sub_exact(&self, other: &Self) -> Self {
        self.add_exact(&other.neg())
    }

    pub fn sub(&self, other: &Self, prec: u64, dir: Dir) -> Self {
        self.add(&other.neg(), prec, dir)
    }

    pub fn mul(&self, other: &Self, prec: u64, dir: Dir) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let m = &self.mant * &other.mant;
        let e = self.exp.checked_add(other.exp).expect("exponent overflow");
        Self::new(m, e).round_to(prec, dir)
    }

    pub fn mul_i64(&self, k: i64, prec: u64, dir: Dir) -> Self {
        self.mul(&Self::from_i64(k), prec, dir)
    }

    pub fn div(&self, other: &Self, prec: u64, dir: Dir) -> Self {
        assert!(!other.is_zero(), "division by zero");
        if self.is_zero() {
            return Self::zero();
        }
        let neg = self.is_negative() != other.is_negative();
        let am = self.mant.magnitude();
        let bm = other.mant.magnitude();
        let s = (prec as i64 + 2 + bm.bits() as i64 - am.bits() as i64).max(0) as u64;
        let scaled: BigUint = am << s;
        let (q, r) = scaled.div_rem(bm);
        let inexact = !r.is_zero();
        // Magnitude quotient is a floor; push away from zero when the directed
        // value demands it.
        let bump = inexact && ((neg && dir == Dir::Down) || (!neg && dir == Dir::Up));
        let q = if bump { q + 1u32 } else { q };
        let mant = if neg { -BigInt::from(q) } else { BigInt::from(q) };
        let e = self
            .exp
            .checked_sub(other.exp)
            .and_then(|v| v.checked_sub(s as i64))
            .expect("exponent overflow");
        Self::new(mant, e).round_to(prec, dir)
    }

    /// Directed square root; requires a nonnegative value.
    pub fn sqrt(&self, prec: u64, dir: Dir) -> Self {
        assert!(!self.is_negative(), "sqrt of negative value");
        if self.is_zero() {
            return Self::zero();
        }
        let b = self.bits() as i64;
        let want = 2 * (prec as i64 + 2);
        let mut t = (want - b).max(0);
        if (self.exp - t).rem_euclid(2) != 0 {
            t += 1;
        }
        let x: BigUint = self.mant.magnitude() << t as u64;
        let s = x.sqrt();
        let exact = &s * &s == x;
        let q = if exact || dir == Dir::Down { s } else { s + 1u32 };
        let e = (self.exp - t) / 2;
        Self::new(BigInt::from(q), e).round_to(prec, dir)
    }

    /// Directed conversion from an exact rational.
    pub fn from_rational(r: &BigRational, prec: u64, dir: Dir) -> Self {
        if r.is_zero() {
            return Self::zero();
        }
        let num = r.numer();
        let den = r.denom();
        let s = (prec as i64 + 2 + den.magnitude().bits() as i64 - num.magnitude().bits() as i64)
            .max(0) as u64;
        let scaled: BigInt = num << s;
        let (q, rem) = scaled.div_rem(den);
        let mut q = q;
        if !rem.is_zero() {
            // div_rem truncates toward zero; fix up to the directed value.
            match dir {
                Dir::Down => {
                    if r.is_negative() {
                        q -= 1;
                    }
                }
                Dir::Up => {
                    if !r.is_negative() {
                        q += 1;
                    }
                }
            }
        }
        Self::new(q, -(s as i64)).round_to(prec, dir)
    }

    /// Exact value as a rational.
    pub fn to_rational(&self) -> BigRational {
        if self.exp >= 0 {
            BigRational::from(&self.mant << self.exp as u64)
        } else {
            BigRational::new(self.mant.clone(), BigInt::from(1) << (-self.exp) as u64)
        }
    }

    /// Directed conversion to f64: the result is ≤ the exact value for
    /// [`Dir::Down`] and ≥ it for [`Dir::Up`], including across overflow and
    /// the subnormal range.
    pub fn to_f64(&self, dir: Dir) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let neg = self.is_negative();
        // On the magnitude, rounding away from zero corresponds to Up for
        // positive values and Down for negative ones.
        let away = matches!((neg, dir), (false, Dir::Up) | (true, Dir::Down));
        let mag = self.mant.magnitude().clone();
        let b = mag.bits() as i64;
        let msb = self.exp + b;
        let signed = |m: f64| if neg { -m } else { m };
        if msb > 1024 {
            return signed(if away { f64::INFINITY } else { f64::MAX });
        }
        if msb <= -1074 {
            return signed(if away { f64::from_bits(1) } else { 0.0 });
        }
        let avail = if msb >= -1021 { 53 } else { msb + 1074 };
        let shift = b - avail;
        let (mut q, mut e) = if shift <= 0 {
            (mag << (-shift) as u64, self.exp + shift)
        } else {
            let q0 = &mag >> shift as u64;
            let inexact = mag.trailing_zeros().map_or(false, |tz| tz < shift as u64);
            (if inexact && away { q0 + 1u32 } else { q0 }, self.exp + shift)
        };
        if q.bits() as i64 > avail {
            // Carry out of the available width; q is now a power of two.
            q >>= 1;
            e += 1;
            if e + q.bits() as i64 > 1024 {
                return signed(if away { f64::INFINITY } else { f64::MAX });
            }
        }
        let qf = q.to_u64().expect("significand fits u64") as f64;
        // Scale exactly: the first chunk keeps the intermediate normal, the
        // second lands on a representable value, so neither multiply rounds.
        let e1 = e.max(-969);
        let e2 = e - e1;
        signed(qf * pow2(e1) * pow2(e2))
    }

    /// Total order by value.
    pub fn cmp_value(&self, other: &Self) -> Ordering {
        let sa = self.mant.sign();
        let sb = other.mant.sign();
        let sign_ord = |s: num_bigint::Sign| match s {
            num_bigint::Sign::Minus => -1,
            num_bigint::Sign::NoSign => 0,
            num_bigint::Sign::Plus => 1,
        };
        match sign_ord(sa).cmp(&sign_ord(sb)) {
            Ordering::Equal => {}
            o => return o,
        }
        if self.mant.is_zero() {
            return Ordering::Equal;
        }
        let neg = self.is_negative();
        match self.msb().cmp(&other.msb()) {
            Ordering::Equal => {}
            o => return if neg { o.reverse() } else { o },
        }
        // Equal sign and magnitude class; align and compare exactly.
        let e = self.exp.min(other.exp);
        let a = &self.mant << (self.exp - e) as u64;
        let b = &other.mant << (other.exp - e) as u64;
        a.cmp(&b)
    }

    pub fn min_value(a: &Self, b: &Self) -> Self {
        if a.cmp_value(b) == Ordering::Greater { b.clone() } else { a.clone() }
    }

    pub fn max_value(a: &Self, b: &Self) -> Self {
        if a.cmp_value(b) == Ordering::Less { b.clone() } else { a.clone() }
    }
}

/// Exact power of two as f64, valid for −1074 ≤ e ≤ 1023, built bitwise.
fn pow2(e: i64) -> f64 {
    debug_assert!((-1074..=1023).contains(&e));
    if e >= -1022 {
        f64::from_bits(((e + 1023) as u64) << 52)
    } else {
        f64::from_bits(1u64 << (e + 1074) as u64)
    }
}

impl PartialEq for BigFloat {
    fn eq(&self, other: &Self) -> bool {
        self.cmp_value(other) == Ordering::Equal
    }
}

impl Eq for BigFloat {}

impl PartialOrd for BigFloat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp_value(other))
    }
}

impl Ord for BigFloat {
    fn cmp(&self, other: &Self) -> Ordering {
        self.cmp_value(other)
    }
}
