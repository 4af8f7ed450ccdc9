//! Enclosure arithmetic and certified transcendental kernels.
//!
//! An [`Enclosure`] is a pair of directed-rounded endpoints guaranteed to
//! bracket the exact real value. π and eˣ are computed from scratch at the
//! working precision (Machin series, argument-reduced Taylor) with explicit
//! remainder bounds, so every derived constant inherits certification.

use crate::bigfloat::{BigFloat, Dir};
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use std::cmp::Ordering;
use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

/// Evaluation mode: rigorous enclosures or fast point estimates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Fast,
    Certified,
}

/// Precision settings threaded through every operation; never ambient.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrecisionConfig {
    pub mode: Mode,
    pub bits: u32,
    pub target_width: f64,
}

pub const DEFAULT_TARGET_WIDTH: f64 = 1e-30;

impl PrecisionConfig {
    pub fn certified(bits: u32) -> Result<Self> {
        if bits < 53 {
            return Err(Error::InvalidParameter(format!("bits = {bits} < 53")));
        }
        Ok(PrecisionConfig { mode: Mode::Certified, bits, target_width: DEFAULT_TARGET_WIDTH })
    }

    /// Fast mode runs in machine doubles and ignores `bits`.
    pub fn fast() -> Self {
        PrecisionConfig { mode: Mode::Fast, bits: 53, target_width: DEFAULT_TARGET_WIDTH }
    }

    pub fn with_target_width(mut self, w: f64) -> Result<Self> {
        if !(w > 0.0) {
            return Err(Error::InvalidParameter(format!("target_width = {w} must be > 0")));
        }
        self.target_width = w;
        Ok(self)
    }

    /// Working mantissa bits for certified evaluation.
    pub fn working_bits(&self) -> u64 {
        (self.bits as u64).max(128)
    }

    pub fn is_fast(&self) -> bool {
        self.mode == Mode::Fast
    }
}

impl Default for PrecisionConfig {
    fn default() -> Self {
        PrecisionConfig { mode: Mode::Certified, bits: 128, target_width: DEFAULT_TARGET_WIDTH }
    }
}

/// Certified interval [lo, hi] containing the exact value.
#[derive(Debug, Clone, PartialEq)]
pub struct Enclosure {
    lo: BigFloat,
    hi: BigFloat,
}

impl Enclosure {
    pub fn from_endpoints(lo: BigFloat, hi: BigFloat) -> Self {
        debug_assert!(lo <= hi, "inverted enclosure");
        Enclosure { lo, hi }
    }

    pub fn point(x: BigFloat) -> Self {
        Enclosure { lo: x.clone(), hi: x }
    }

    pub fn zero() -> Self {
        Self::point(BigFloat::zero())
    }

    pub fn one() -> Self {
        Self::point(BigFloat::from_i64(1))
    }

    pub fn from_i64(v: i64) -> Self {
        Self::point(BigFloat::from_i64(v))
    }

    pub fn from_rational(r: &BigRational, p: u64) -> Self {
        Enclosure {
            lo: BigFloat::from_rational(r, p, Dir::Down),
            hi: BigFloat::from_rational(r, p, Dir::Up),
        }
    }

    pub fn lo(&self) -> &BigFloat {
        &self.lo
    }

    pub fn hi(&self) -> &BigFloat {
        &self.hi
    }

    pub fn lo_f64(&self) -> f64 {
        self.lo.to_f64(Dir::Down)
    }

    pub fn hi_f64(&self) -> f64 {
        self.hi.to_f64(Dir::Up)
    }

    /// Exact width hi − lo.
    pub fn width(&self) -> BigFloat {
        self.hi.sub(&self.lo, u64::MAX / 4, Dir::Up)
    }

    pub fn width_f64(&self) -> f64 {
        self.width().to_f64(Dir::Up)
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains_rational(&self, r: &BigRational) -> bool {
        self.lo.to_rational() <= *r && *r <= self.hi.to_rational()
    }

    pub fn contains_i64(&self, v: i64) -> bool {
        self.contains_rational(&BigRational::from(BigInt::from(v)))
    }

    /// Both endpoints strictly below the rational threshold.
    pub fn strictly_below(&self, r: &BigRational) -> bool {
        self.hi.to_rational() < *r
    }

    /// Both endpoints strictly above the rational threshold.
    pub fn strictly_above(&self, r: &BigRational) -> bool {
        self.lo.to_rational() > *r
    }

    pub fn neg(&self) -> Self {
        Enclosure { lo: self.hi.neg(), hi: self.lo.neg() }
    }

    pub fn abs(&self) -> Self {
        if !self.lo.is_negative() {
            self.clone()
        } else if !self.hi.is_positive() {
            self.neg()
        } else {
            Enclosure { lo: BigFloat::zero(), hi: BigFloat::max_value(&self.lo.neg(), &self.hi) }
        }
    }

    pub fn add(&self, o: &Enclosure, p: u64) -> Self {
        Enclosure { lo: self.lo.add(&o.lo, p, Dir::Down), hi: self.hi.add(&o.hi, p, Dir::Up) }
    }

    pub fn sub(&self, o: &Enclosure, p: u64) -> Self {
        self.add(&o.neg(), p)
    }

    pub fn mul(&self, o: &Enclosure, p: u64) -> Self {
        let pairs = [(&self.lo, &o.lo), (&self.lo, &o.hi), (&self.hi, &o.lo), (&self.hi, &o.hi)];
        let mut lo: Option<BigFloat> = None;
        let mut hi: Option<BigFloat> = None;
        for (a, b) in pairs {
            let d = a.mul(b, p, Dir::Down);
            let u = a.mul(b, p, Dir::Up);
            lo = Some(match lo {
                None => d,
                Some(cur) => BigFloat::min_value(&cur, &d),
            });
            hi = Some(match hi {
                None => u,
                Some(cur) => BigFloat::max_value(&cur, &u),
            });
        }
        Enclosure { lo: lo.unwrap(), hi: hi.unwrap() }
    }

    pub fn mul_i64(&self, k: i64, p: u64) -> Self {
        self.mul(&Enclosure::from_i64(k), p)
    }

    pub fn mul_rational(&self, r: &BigRational, p: u64) -> Self {
        self.mul(&Enclosure::from_rational(r, p), p)
    }

    /// Reciprocal; the interval must not contain zero.
    pub fn recip(&self, p: u64) -> Result<Self> {
        if self.contains_rational(&BigRational::zero()) {
            return Err(Error::DomainError("reciprocal of interval containing zero".into()));
        }
        let one = BigFloat::from_i64(1);
        Ok(Enclosure {
            lo: one.div(&self.hi, p, Dir::Down),
            hi: one.div(&self.lo, p, Dir::Up),
        })
    }

    pub fn div(&self, o: &Enclosure, p: u64) -> Result<Self> {
        Ok(self.mul(&o.recip(p)?, p))
    }

    /// Interval square root; requires lo ≥ 0.
    pub fn sqrt(&self, p: u64) -> Result<Self> {
        if self.lo.is_negative() {
            return Err(Error::DomainError("sqrt of interval with negative endpoint".into()));
        }
        Ok(Enclosure { lo: self.lo.sqrt(p, Dir::Down), hi: self.hi.sqrt(p, Dir::Up) })
    }

    /// Integer power by repeated interval multiplication.
    pub fn pow_u32(&self, k: u32, p: u64) -> Self {
        let mut acc = Enclosure::one();
        let mut base = self.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base, p);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base, p);
            }
        }
        acc
    }

    pub fn hull(&self, o: &Enclosure) -> Self {
        Enclosure {
            lo: BigFloat::min_value(&self.lo, &o.lo),
            hi: BigFloat::max_value(&self.hi, &o.hi),
        }
    }

    pub fn intersect(&self, o: &Enclosure) -> Option<Self> {
        let lo = BigFloat::max_value(&self.lo, &o.lo);
        let hi = BigFloat::min_value(&self.hi, &o.hi);
        if lo <= hi {
            Some(Enclosure { lo, hi })
        } else {
            None
        }
    }

    /// Symmetric widening by a nonnegative bound.
    pub fn widen_by(&self, r: &BigFloat, p: u64) -> Self {
        debug_assert!(!r.is_negative());
        Enclosure { lo: self.lo.sub(r, p, Dir::Down), hi: self.hi.add(r, p, Dir::Up) }
    }

    /// Outward rounding of both endpoints to `p` bits.
    pub fn outward(&self, p: u64) -> Self {
        Enclosure { lo: self.lo.round_to(p, Dir::Down), hi: self.hi.round_to(p, Dir::Up) }
    }
}

/// Certified π via Machin's formula 16·atan(1/5) − 4·atan(1/239), cached per
/// working precision.
pub fn pi(p: u64) -> Enclosure {
    static CACHE: OnceLock<Mutex<HashMap<u64, Enclosure>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(v) = cache.lock().unwrap().get(&p) {
        return v.clone();
    }
    let f = p + 32;
    let (lo5, hi5) = atan_recip_scaled(5, f);
    let (lo239, hi239) = atan_recip_scaled(239, f);
    let lo_int = lo5 * 16 - hi239 * 4;
    let hi_int = hi5 * 16 - lo239 * 4;
    let enc = Enclosure::from_endpoints(
        BigFloat::new(lo_int, -(f as i64)).round_to(p, Dir::Down),
        BigFloat::new(hi_int, -(f as i64)).round_to(p, Dir::Up),
    );
    cache.lock().unwrap().insert(p, enc.clone());
    enc
}

/// Integer bounds for atan(1/x)·2^f: the alternating series is summed with
/// floor divisions, so the true value lies within ±(terms + 1) of the partial
/// sum once the next term underflows the scale.
fn atan_recip_scaled(x: u64, f: u64) -> (BigInt, BigInt) {
    let scale: BigInt = BigInt::from(1) << f;
    let xx = BigInt::from(x) * BigInt::from(x);
    let mut power = BigInt::from(x);
    let mut sum = BigInt::zero();
    let mut j: u64 = 0;
    loop {
        let denom = &power * BigInt::from(2 * j + 1);
        let term = &scale / denom;
        if term.is_zero() {
            break;
        }
        if j % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
        power *= &xx;
        j += 1;
    }
    let slack = BigInt::from(j + 1);
    (&sum - &slack, sum + slack)
}

/// Certified eˣ at a point, via exact halving x = r·2^m with |r| < 1/4,
/// Taylor with remainder, then m interval squarings.
pub fn exp_point(x: &BigFloat, p: u64) -> Enclosure {
    if x.is_zero() {
        return Enclosure::one();
    }
    let w = p + 64;
    let m = (x_msb(x) + 2).max(0) as u64;
    let r = x.mul_exp2(-(m as i64));
    let r_enc = Enclosure::point(r);
    // Σ r^j / j! with tail ≤ 2·|r|^(J+1)/(J+1)! ≤ 2^(−2(J+1)+1) for |r| < 1/4.
    let terms = w / 2 + 4;
    let mut sum = Enclosure::one();
    let mut term = Enclosure::one();
    for j in 1..=terms {
        term = term.mul(&r_enc, w);
        term = Enclosure {
            lo: term.lo().div(&BigFloat::from_u64(j), w, Dir::Down),
            hi: term.hi().div(&BigFloat::from_u64(j), w, Dir::Up),
        };
        sum = sum.add(&term, w);
    }
    let rem = BigFloat::exp2(-(2 * (terms as i64 + 1)) + 1);
    let mut s = sum.widen_by(&rem, w);
    for _ in 0..m {
        s = s.mul(&s, w);
    }
    s.outward(p)
}

fn x_msb(x: &BigFloat) -> i64 {
    debug_assert!(!x.is_zero());
    // |x| < 2^msb
    let r = x.abs();
    let mut k = 0i64;
    let mut probe = BigFloat::exp2(0);
    if r >= probe {
        while r >= probe {
            k += 1;
            probe = BigFloat::exp2(k);
        }
        k
    } else {
        while r < BigFloat::exp2(k - 1) {
            k -= 1;
        }
        k
    }
}

/// Monotone interval extension of eˣ.
pub fn exp(x: &Enclosure, p: u64) -> Enclosure {
    let lo = exp_point(x.lo(), p);
    let hi = exp_point(x.hi(), p);
    Enclosure::from_endpoints(lo.lo().clone(), hi.hi().clone())
}

/// e^(r·π) for exact rational r, certified.
pub fn exp_pi_rational(r: &BigRational, p: u64) -> Enclosure {
    let w = p + 32;
    let arg = pi(w).mul_rational(r, w);
    exp(&arg, p)
}

/// (sin(πu), cos(πu)) for exact rational u, with exact mod-2 reduction.
/// Quarter-turn multiples return exact endpoints.
pub fn sin_cos_pi_rational(u: &BigRational, p: u64) -> (Enclosure, Enclosure) {
    let two = BigRational::from(BigInt::from(2));
    let v = u - (u / &two).floor() * &two;
    debug_assert!(!v.is_negative() && v < two);
    let quarter = |n: i64, d: i64| BigRational::new(BigInt::from(n), BigInt::from(d));
    if v.is_zero() {
        return (Enclosure::zero(), Enclosure::one());
    }
    if v == quarter(1, 2) {
        return (Enclosure::one(), Enclosure::zero());
    }
    if v == quarter(1, 1) {
        return (Enclosure::zero(), Enclosure::from_i64(-1));
    }
    if v == quarter(3, 2) {
        return (Enclosure::from_i64(-1), Enclosure::zero());
    }
    let w = p + 64;
    let z = pi(w).mul_rational(&v, w);
    (sin_taylor(&z, w).outward(p), cos_taylor(&z, w).outward(p))
}

/// sin z for z ∈ [0, 2π), by series with a ratio-halving remainder bound.
fn sin_taylor(z: &Enclosure, w: u64) -> Enclosure {
    let z2 = z.mul(z, w);
    let mut term = z.clone();
    let mut sum = z.clone();
    let mut j: i64 = 1;
    let eps = BigFloat::exp2(-(w as i64));
    loop {
        let denom = BigFloat::from_i64((2 * j) * (2 * j + 1));
        term = term.mul(&z2, w).neg();
        term = Enclosure::from_endpoints(
            term.lo().div(&denom, w, Dir::Down),
            term.hi().div(&denom, w, Dir::Up),
        );
        sum = sum.add(&term, w);
        let mag = term.abs();
        // Once consecutive term ratios are ≤ 1/2 the tail is below 2·|term|.
        let next_ratio_small = z2.hi() < &BigFloat::from_i64((2 * j + 2) * (2 * j + 3) / 2);
        if next_ratio_small && mag.hi() < &eps {
            let rem = mag.hi().mul_exp2(1);
            return sum.widen_by(&rem, w);
        }
        j += 1;
        assert!(j < 10_000, "sin series failed to converge");
    }
}

fn cos_taylor(z: &Enclosure, w: u64) -> Enclosure {
    let z2 = z.mul(z, w);
    let mut term = Enclosure::one();
    let mut sum = Enclosure::one();
    let mut j: i64 = 0;
    let eps = BigFloat::exp2(-(w as i64));
    loop {
        let denom = BigFloat::from_i64((2 * j + 1) * (2 * j + 2));
        term = term.mul(&z2, w).neg();
        term = Enclosure::from_endpoints(
            term.lo().div(&denom, w, Dir::Down),
            term.hi().div(&denom, w, Dir::Up),
        );
        sum = sum.add(&term, w);
        let mag = term.abs();
        let next_ratio_small = z2.hi() < &BigFloat::from_i64((2 * j + 3) * (2 * j + 4) / 2);
        if next_ratio_small && mag.hi() < &eps {
            let rem = mag.hi().mul_exp2(1);
            return sum.widen_by(&rem, w);
        }
        j += 1;
        assert!(j < 10_000, "cos series failed to converge");
    }
}

/// Ordering helper for sorting by exact rational keys.
pub fn rational_cmp(a: &BigRational, b: &BigRational) -> Ordering {
    a.cmp(b)
}
