//! Laguerre polynomials 𝓛ₙ and the certified bounds built on them.
//!
//! Evaluation at rational arguments runs the three-term recurrence in exact
//! rational arithmetic; interval arguments use the same recurrence over
//! enclosures. The bound family (Szegő, crude growth, Krasikov window,
//! incomplete-gamma tails, power-geometric tails) backs the series remainder
//! estimates elsewhere in the crate.

use crate::bigfloat::{BigFloat, Dir};
use crate::error::{Error, Result};
use crate::interval::{exp, exp_pi_rational, pi, Enclosure, PrecisionConfig};
use num_bigint::BigInt;
use num_integer::binomial;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;

/// Degree of a Laguerre polynomial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LaguerreOrder {
    pub n: u32,
}

/// Shorthand constructor for [`LaguerreOrder`].
pub const fn order(n: u32) -> LaguerreOrder {
    LaguerreOrder { n }
}

impl From<u32> for LaguerreOrder {
    fn from(n: u32) -> Self {
        LaguerreOrder { n }
    }
}

impl fmt::Display for LaguerreOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.n)
    }
}

/// Sign and log-magnitude representation sign·e^(log_mag), the fast-mode
/// value type; log_mag = −∞ encodes zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogSigned {
    pub sign: i8,
    pub log_mag: f64,
}

impl LogSigned {
    pub fn zero() -> Self {
        LogSigned { sign: 0, log_mag: f64::NEG_INFINITY }
    }

    pub fn to_f64(self) -> f64 {
        self.sign as f64 * self.log_mag.exp()
    }
}

/// 𝓛ₙ(x) in exact rational arithmetic via the recurrence
/// (k+1)𝓛ₖ₊₁ = (2k+1−x)𝓛ₖ − k𝓛ₖ₋₁.
pub fn laguerre_exact(ord: LaguerreOrder, x: &BigRational) -> BigRational {
    let n = ord.n;
    if n == 0 {
        return BigRational::one();
    }
    let mut prev = BigRational::one();
    let mut cur = BigRational::one() - x;
    for k in 1..n as i64 {
        let coeff = BigRational::from(BigInt::from(2 * k + 1)) - x;
        let next = (coeff * &cur - BigRational::from(BigInt::from(k)) * &prev)
            / BigRational::from(BigInt::from(k + 1));
        prev = cur;
        cur = next;
    }
    cur
}

/// 𝓛ₙ(x) from the closed form Σₖ C(n,k)(−x)ᵏ/k!, as an independent route to
/// the same value; capped at n ≤ 64.
pub fn laguerre_explicit(ord: LaguerreOrder, x: &BigRational) -> Result<BigRational> {
    let n = ord.n;
    if n > 64 {
        return Err(Error::OrderTooLarge(format!("explicit form capped at n = 64, got {n}")));
    }
    let mut sum = BigRational::zero();
    let mut xpow = BigRational::one();
    let mut kfact = BigInt::one();
    for k in 0..=n {
        if k > 0 {
            xpow *= x;
            kfact *= BigInt::from(k);
        }
        let c = binomial(BigInt::from(n), BigInt::from(k));
        let mut term = BigRational::new(c, kfact.clone()) * &xpow;
        if k % 2 == 1 {
            term = -term;
        }
        sum += term;
    }
    Ok(sum)
}

/// Certified enclosure of 𝓛ₙ(x) at a rational argument. Precision doubles
/// from the configured bits until the width target is met.
pub fn laguerre_eval(
    ord: LaguerreOrder,
    x: &BigRational,
    cfg: &PrecisionConfig,
) -> Result<Enclosure> {
    if cfg.is_fast() {
        let ls = laguerre_log_signed(ord, x.to_f64().unwrap_or(f64::NAN));
        let v = ls.to_f64();
        if !v.is_finite() {
            return Err(Error::PrecisionExhausted(format!(
                "fast evaluation of 𝓛_{} overflows f64",
                ord.n
            )));
        }
        return Ok(Enclosure::point(BigFloat::from_f64(v).unwrap()));
    }
    let v = laguerre_exact(ord, x);
    if v.is_zero() {
        return Ok(Enclosure::zero());
    }
    let tw = BigFloat::from_f64(cfg.target_width)
        .ok_or_else(|| Error::InvalidParameter("target width must be finite".into()))?;
    let mut bits = cfg.working_bits();
    loop {
        let enc = Enclosure::from_rational(&v, bits);
        if enc.width() <= tw {
            return Ok(enc);
        }
        if bits >= 1 << 14 {
            return Err(Error::PrecisionExhausted(format!(
                "width target {} unreachable at {} bits for 𝓛_{}",
                cfg.target_width, bits, ord.n
            )));
        }
        bits *= 2;
    }
}

/// Interval extension of the recurrence, one pass at the configured bits.
pub fn laguerre_eval_interval(ord: LaguerreOrder, x: &Enclosure, cfg: &PrecisionConfig) -> Enclosure {
    let w = cfg.working_bits();
    let n = ord.n;
    if n == 0 {
        return Enclosure::one();
    }
    let mut prev = Enclosure::one();
    let mut cur = Enclosure::one().sub(x, w);
    for k in 1..n as i64 {
        let coeff = Enclosure::from_i64(2 * k + 1).sub(x, w);
        let num = coeff.mul(&cur, w).sub(&prev.mul_i64(k, w), w);
        let next = Enclosure::from_endpoints(
            num.lo().div(&BigFloat::from_i64(k + 1), w, Dir::Down),
            num.hi().div(&BigFloat::from_i64(k + 1), w, Dir::Up),
        );
        prev = cur;
        cur = next;
    }
    cur
}

/// Fast-mode 𝓛ₙ(x): the f64 recurrence with power-of-two rescaling, so
/// intermediate growth far beyond f64 range stays representable in log form.
pub fn laguerre_log_signed(ord: LaguerreOrder, x: f64) -> LogSigned {
    const LIM: f64 = 1.3407807929942597e154; // 2^512
    const LN_LIM: f64 = 354.8912942892637; // 512·ln 2
    let n = ord.n;
    if n == 0 {
        return LogSigned { sign: 1, log_mag: 0.0 };
    }
    let mut prev = 1.0f64;
    let mut cur = 1.0 - x;
    let mut shift = 0.0f64;
    for k in 1..n as u64 {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 - x) * cur - kf * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
        let mag = cur.abs().max(prev.abs());
        if mag > LIM {
            cur /= LIM;
            prev /= LIM;
            shift += LN_LIM;
        } else if mag > 0.0 && mag < 1.0 / LIM {
            cur *= LIM;
            prev *= LIM;
            shift -= LN_LIM;
        }
    }
    if cur == 0.0 {
        return LogSigned::zero();
    }
    LogSigned { sign: if cur > 0.0 { 1 } else { -1 }, log_mag: cur.abs().ln() + shift }
}

/// Szegő bound e^(x/2) ≥ |𝓛ₙ(x)| for x ≥ 0.
pub fn szego_bound(x: &BigRational, cfg: &PrecisionConfig) -> Result<Enclosure> {
    if x.is_negative() {
        return Err(Error::NegativeArgument(format!("Szegő bound needs x ≥ 0, got {x}")));
    }
    let w = cfg.working_bits();
    let half = Enclosure::from_rational(&(x / BigRational::from(BigInt::from(2))), w);
    Ok(exp(&half, w))
}

/// Growth bound (n+1)·C(n,⌊n/2⌋)·xⁿ ≥ |𝓛ₙ(x)| for x ≥ 1, exact.
pub fn crude_bound(ord: LaguerreOrder, x: &BigRational) -> Result<BigRational> {
    if x < &BigRational::one() {
        return Err(Error::DomainError(format!("growth bound needs x ≥ 1, got {x}")));
    }
    let n = ord.n;
    let c = binomial(BigInt::from(n), BigInt::from(n / 2));
    let mut xpow = BigRational::one();
    for _ in 0..n {
        xpow *= x;
    }
    Ok(BigRational::from(BigInt::from(n as i64 + 1) * c) * xpow)
}

/// Upper bound 2n+1+√((2n+1)²+¼) on every zero of 𝓛ₙ, n ≥ 1.
pub fn largest_root_upper(ord: LaguerreOrder, cfg: &PrecisionConfig) -> Result<Enclosure> {
    let n = ord.n;
    if n < 1 {
        return Err(Error::OrderTooSmall("root bound needs n ≥ 1".into()));
    }
    let w = cfg.working_bits();
    let r = BigInt::from(2 * n as i64 + 1);
    let inner = BigRational::from(&r * &r) + BigRational::new(BigInt::one(), BigInt::from(4));
    let root = Enclosure::from_rational(&inner, w).sqrt(w)?;
    Ok(root.add(&Enclosure::from_rational(&BigRational::from(r), w), w))
}

/// The three layer constants bounding |𝓛ₙ| at −π(n+1), π(n+1), 2π(n+1) for
/// n ≥ 11:
/// B₁ = e^((π+1)(n+1)), B₂ = e^((π/2)(n+1))·√(2/n),
/// B₃ = e^(π(n+1))·√(2/π)·e^(−n/10−43/50).
pub fn krasikov_layer_bounds(
    ord: LaguerreOrder,
    cfg: &PrecisionConfig,
) -> Result<(Enclosure, Enclosure, Enclosure)> {
    let n = ord.n;
    if n < 11 {
        return Err(Error::OrderTooSmall(format!("layer bounds need n ≥ 11, got {n}")));
    }
    let w = cfg.working_bits();
    let np1 = n as i64 + 1;
    let pi_w = pi(w);

    let b1 = exp(&pi_w.add(&Enclosure::one(), w).mul_i64(np1, w), w);

    let half_np1 = BigRational::new(BigInt::from(np1), BigInt::from(2));
    let sqrt_2_over_n = Enclosure::from_rational(
        &BigRational::new(BigInt::from(2), BigInt::from(n as i64)),
        w,
    )
    .sqrt(w)?;
    let b2 = exp_pi_rational(&half_np1, w).mul(&sqrt_2_over_n, w);

    let sqrt_2_over_pi = Enclosure::from_i64(2).div(&pi_w, w)?.sqrt(w)?;
    let decay = BigRational::new(BigInt::from(-(n as i64)), BigInt::from(10))
        - BigRational::new(BigInt::from(43), BigInt::from(50));
    let b3 = exp_pi_rational(&BigRational::from(BigInt::from(np1)), w)
        .mul(&sqrt_2_over_pi, w)
        .mul(&exp(&Enclosure::from_rational(&decay, w), w), w);

    Ok((b1, b2, b3))
}

/// Oscillatory-window bound for n ≥ 2 and x ∈ [q², s²] with q = √(n+1)−√n,
/// s = √(n+1)+√n:
/// |𝓛ₙ(x)| ≤ e^(x/2)·√((s²−q²)/((x−q²)(s²−x))).
/// Arguments within the width target of either endpoint are rejected, since
/// the bound degenerates there.
pub fn kras1_bound(ord: LaguerreOrder, x: &BigRational, cfg: &PrecisionConfig) -> Result<Enclosure> {
    let n = ord.n;
    if n < 2 {
        return Err(Error::OrderTooSmall(format!("window bound needs n ≥ 2, got {n}")));
    }
    let w = cfg.working_bits();
    // q² = 2n+1 − 2√(n(n+1)), s² = 2n+1 + 2√(n(n+1)), s² − q² = 4√(n(n+1))
    let u = Enclosure::from_rational(
        &BigRational::from(BigInt::from(n as i64) * BigInt::from(n as i64 + 1)),
        w,
    )
    .sqrt(w)?
    .mul_i64(2, w);
    let mid = Enclosure::from_i64(2 * n as i64 + 1);
    let q_sq = mid.sub(&u, w);
    let s_sq = mid.add(&u, w);

    let margin = BigFloat::from_f64(cfg.target_width)
        .ok_or_else(|| Error::InvalidParameter("target width must be finite".into()))?
        .to_rational();
    let x_lo_ok = x - q_sq.hi().to_rational() >= margin;
    let x_hi_ok = s_sq.lo().to_rational() - x >= margin;
    if !(x_lo_ok && x_hi_ok) {
        return Err(Error::DomainError(format!(
            "x = {x} outside the window [q², s²] or within {} of an endpoint",
            cfg.target_width
        )));
    }

    let x_enc = Enclosure::from_rational(x, w);
    let denom = x_enc.sub(&q_sq, w).mul(&s_sq.sub(&x_enc, w), w);
    let factor = u.mul_i64(2, w).div(&denom, w)?.sqrt(w)?;
    let half_x = Enclosure::from_rational(&(x / BigRational::from(BigInt::from(2))), w);
    Ok(exp(&half_x, w).mul(&factor, w))
}

/// Incomplete-gamma bound Γ(s,x) ≤ B·x^(s−1)·e^(−x), valid for B > 1 and
/// x > B(s−1)/(B−1); integer s ≥ 1 only.
pub fn incomplete_gamma_upper(
    s: u32,
    x: &BigRational,
    b: &BigRational,
    cfg: &PrecisionConfig,
) -> Result<Enclosure> {
    if s < 1 {
        return Err(Error::InvalidParameter("gamma bound needs integer s ≥ 1".into()));
    }
    if b <= &BigRational::one() {
        return Err(Error::HypothesisViolated(format!("gamma bound needs B > 1, got {b}")));
    }
    let threshold = b * BigRational::from(BigInt::from(s as i64 - 1)) / (b - BigRational::one());
    if x <= &threshold {
        return Err(Error::HypothesisViolated(format!(
            "gamma bound needs x > B(s−1)/(B−1) = {threshold}, got x = {x}"
        )));
    }
    let w = cfg.working_bits();
    let mut front = b.clone();
    for _ in 0..s - 1 {
        front *= x;
    }
    let e = exp(&Enclosure::from_rational(&(-x), w), w);
    Ok(e.mul_rational(&front, w))
}

/// Tail bound for Σ_{k²+l²≥a²} (k²+l²)ⁿ e^(−(πγ/2)(k²+l²)) with a ≥ 2:
/// since r₂(m) ≤ 4m, the layer sum is at most 4·Σ_{m≥⌈a²⌉} m^(n+1)·qᵐ with
/// q = e^(−πγ/2), which the geometric-remainder machinery encloses.
pub fn gamma_tail_bound(
    ord: LaguerreOrder,
    gamma: &BigRational,
    a: &BigRational,
    cfg: &PrecisionConfig,
) -> Result<Enclosure> {
    if a < &BigRational::from(BigInt::from(2)) {
        return Err(Error::HypothesisViolated(format!("tail bound needs a ≥ 2, got {a}")));
    }
    gamma_tail_bound_sq(ord, gamma, &(a * a), cfg)
}

/// Same bound parametrized by a² directly, for irrational cutoff radii with
/// rational square. Requires γπa² > 2n+2 certified, keeping callers inside
/// the regime where the cutoff layer already decays.
pub fn gamma_tail_bound_sq(
    ord: LaguerreOrder,
    gamma: &BigRational,
    a_sq: &BigRational,
    cfg: &PrecisionConfig,
) -> Result<Enclosure> {
    let n = ord.n;
    if a_sq < &BigRational::from(BigInt::from(4)) {
        return Err(Error::HypothesisViolated(format!("tail bound needs a² ≥ 4, got {a_sq}")));
    }
    if !gamma.is_positive() {
        return Err(Error::HypothesisViolated("tail bound needs γ > 0".into()));
    }
    let w = cfg.working_bits();
    let pi_lo = pi(w).lo().to_rational();
    let prod = gamma * a_sq * pi_lo;
    let needed = BigRational::from(BigInt::from(2 * n as i64 + 2));
    if prod <= needed {
        return Err(Error::HypothesisViolated(format!(
            "tail bound needs γπa² > {needed}, certifiable lower bound is only {prod}"
        )));
    }
    let q = exp_pi_rational(&(-(gamma / BigRational::from(BigInt::from(2)))), w);
    let n0 = a_sq.ceil().to_integer().to_u64().ok_or_else(|| {
        Error::InvalidParameter(format!("cutoff a² = {a_sq} too large"))
    })?;
    Ok(power_geometric_tail(n + 1, &q, n0, cfg)?.mul_i64(4, w))
}

/// Enclosure of Σ_{m≥n0} mᵖ·qᵐ for certified 0 < q < 1: terms are summed
/// until the ratio test gives a geometric remainder below the relative
/// precision floor.
pub fn power_geometric_tail(
    p: u32,
    q: &Enclosure,
    n0: u64,
    cfg: &PrecisionConfig,
) -> Result<Enclosure> {
    if !q.lo().is_positive() || q.hi().to_rational() >= BigRational::one() {
        return Err(Error::HypothesisViolated(
            "geometric tail needs 0 < q < 1 certified".into(),
        ));
    }
    let w = cfg.working_bits();
    let n0_u32 = u32::try_from(n0)
        .map_err(|_| Error::InvalidParameter(format!("tail start {n0} too large")))?;
    let q_hi = q.hi().to_rational();
    let one = BigRational::one();
    let mut qpow = q.pow_u32(n0_u32, w);
    let mut partial = Enclosure::zero();
    let mut m = n0;
    loop {
        let m_pow = BigInt::from(m).pow(p);
        let term = qpow.mul_rational(&BigRational::from(m_pow), w);
        partial = partial.add(&term, w);
        if m > 0 {
            // ((m+1)/m)ᵖ·q bounds every later ratio once it drops below 1.
            let ratio = BigRational::new(BigInt::from(m + 1).pow(p), BigInt::from(m).pow(p)) * &q_hi;
            if ratio < one && partial.hi().is_positive() {
                let factor = &ratio / (&one - &ratio);
                let rem = term.hi().mul(&BigFloat::from_rational(&factor, w, Dir::Up), w, Dir::Up);
                let floor = partial.hi().mul_exp2(-(w as i64) + 8);
                if rem <= floor {
                    return Ok(Enclosure::from_endpoints(
                        partial.lo().clone(),
                        partial.hi().add(&rem, w, Dir::Up),
                    ));
                }
            }
        }
        m += 1;
        qpow = qpow.mul(q, w);
        if m - n0 > 5_000_000 {
            return Err(Error::PrecisionExhausted(
                "geometric tail failed to converge within iteration budget".into(),
            ));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn cfg() -> PrecisionConfig {
        PrecisionConfig::default()
    }

    #[test]
    fn known_small_values() {
        assert_eq!(laguerre_exact(order(1), &rat(5, 1)), rat(-4, 1));
        assert_eq!(laguerre_exact(order(3), &rat(0, 1)), rat(1, 1));
        assert_eq!(laguerre_exact(order(3), &rat(2, 1)), rat(-1, 3));
        assert_eq!(laguerre_explicit(order(1), &rat(5, 1)).unwrap(), rat(-4, 1));
        assert_eq!(laguerre_explicit(order(3), &rat(2, 1)).unwrap(), rat(-1, 3));
        assert!(laguerre_explicit(order(65), &rat(1, 1)).is_err());
    }

    #[test]
    fn sign_change_of_l15() {
        let at31 = laguerre_exact(order(15), &rat(31, 1));
        let at32 = laguerre_exact(order(15), &rat(32, 1));
        assert!(at31.is_positive() != at32.is_positive());
    }

    #[test]
    fn eval_meets_width_target() {
        let enc = laguerre_eval(order(20), &rat(377, 10), &cfg()).unwrap();
        assert!(enc.width_f64() <= 1e-30);
        assert!(enc.contains_rational(&laguerre_exact(order(20), &rat(377, 10))));
    }

    #[test]
    fn eval_fast_is_close() {
        let enc = laguerre_eval(order(12), &rat(7, 2), &PrecisionConfig::fast()).unwrap();
        let exact = laguerre_exact(order(12), &rat(7, 2));
        let v = enc.lo_f64();
        let e = exact.to_f64().unwrap();
        assert!(enc.is_point());
        assert!((v - e).abs() <= 1e-10 * e.abs());
    }

    #[test]
    fn interval_eval_contains_exact() {
        let x = Enclosure::from_rational(&rat(157, 10), 192);
        let enc = laguerre_eval_interval(order(15), &x, &cfg());
        assert!(enc.contains_rational(&laguerre_exact(order(15), &rat(157, 10))));
    }

    #[test]
    fn log_signed_matches_exact_at_moderate_order() {
        for (n, x) in [(8u32, 3.25f64), (20, 17.0), (40, 95.5), (15, 31.4)] {
            let ls = laguerre_log_signed(order(n), x);
            let exact = laguerre_exact(
                order(n),
                &BigRational::from_float(x).unwrap(),
            )
            .to_f64()
            .unwrap();
            if exact.abs() > 1e-6 {
                assert_eq!(ls.sign as f64, exact.signum());
                assert!(
                    (ls.log_mag - exact.abs().ln()).abs() < 1e-9,
                    "log mismatch at n={n}, x={x}"
                );
            }
        }
    }

    #[test]
    fn log_signed_survives_f64_overflow_range() {
        // 𝓛₁₂₀ at the corner argument of a cutoff-5 box on the diagonal
        // lattice reaches ≈ e^712, past f64::MAX ≈ e^709.8.
        let ls = laguerre_log_signed(order(120), 121.0 * std::f64::consts::PI * 50.0);
        assert!(ls.log_mag.is_finite());
        assert!(ls.sign == 1 || ls.sign == -1);
        assert!(ls.log_mag > 700.0 && ls.log_mag < 725.0);
    }

    #[test]
    fn crude_bound_example() {
        assert_eq!(crude_bound(order(4), &rat(2, 1)).unwrap(), rat(480, 1));
        assert!(crude_bound(order(4), &rat(1, 2)).is_err());
    }

    #[test]
    fn szego_rejects_negative() {
        assert!(szego_bound(&rat(-1, 2), &cfg()).is_err());
        let b = szego_bound(&rat(0, 1), &cfg()).unwrap();
        assert!(b.contains_i64(1));
    }

    #[test]
    fn gamma_upper_example() {
        // Γ(2,5) = 6e⁻⁵; the B = 2 bound is 10e⁻⁵.
        let bound = incomplete_gamma_upper(2, &rat(5, 1), &rat(2, 1), &cfg()).unwrap();
        let w = 192;
        let e5 = exp(&Enclosure::from_rational(&rat(-5, 1), w), w);
        let truth = e5.mul_i64(6, w);
        let ten = e5.mul_i64(10, w);
        assert!(bound.intersect(&ten).is_some());
        assert!(truth.hi() < bound.lo());
        assert!(incomplete_gamma_upper(2, &rat(5, 1), &rat(1, 1), &cfg()).is_err());
        assert!(incomplete_gamma_upper(3, &rat(1, 1), &rat(2, 1), &cfg()).is_err());
    }

    #[test]
    fn gamma_tail_hypothesis_checks() {
        assert!(gamma_tail_bound(order(2), &rat(3, 1), &rat(1, 1), &cfg()).is_err());
        assert!(gamma_tail_bound_sq(order(2), &rat(3, 1), &rat(3, 1), &cfg()).is_err());
        // γπa² = 12π ≈ 37.7 > 6: admissible.
        assert!(gamma_tail_bound(order(2), &rat(3, 1), &rat(2, 1), &cfg()).is_ok());
        // n = 40 at γ = 3, a = 2 needs γπa² > 82; 12π fails.
        assert!(gamma_tail_bound(order(40), &rat(3, 1), &rat(2, 1), &cfg()).is_err());
    }

    #[test]
    fn gamma_tail_dominates_brute_force() {
        let w = 192u64;
        for n in [0u32, 3, 6] {
            for g in [2i64, 5, 8] {
                for a in [2i64, 3] {
                    let gamma = rat(g, 1);
                    let bound =
                        gamma_tail_bound(order(n), &gamma, &rat(a, 1), &cfg()).unwrap();
                    // Σ over max(|k|,|l|) ≤ 60 grouped by m = k²+l².
                    let base = exp_pi_rational(&rat(-g, 2), w);
                    let mut qpow = base.pow_u32((a * a) as u32, w);
                    let mut total = Enclosure::zero();
                    for m in (a * a) as u64..=7200 {
                        let c = crate::lattice::r2(m);
                        if c > 0 {
                            let mn = BigRational::from(BigInt::from(m).pow(n));
                            let term = qpow
                                .mul_rational(&(mn * BigRational::from(BigInt::from(c))), w);
                            total = total.add(&term, w);
                        }
                        qpow = qpow.mul(&base, w);
                    }
                    assert!(
                        total.hi() < bound.lo(),
                        "tail bound not dominant at n={n}, γ={g}, a={a}"
                    );
                }
            }
        }
    }

    #[test]
    fn power_geometric_tail_examples() {
        let half = Enclosure::from_rational(&rat(1, 2), 192);
        let t = power_geometric_tail(1, &half, 1, &cfg()).unwrap();
        assert!(t.contains_i64(2));
        assert!(t.width_f64() < 1e-30);

        let t0 = power_geometric_tail(0, &half, 0, &cfg()).unwrap();
        assert!(t0.contains_i64(2));

        let bad = Enclosure::from_rational(&rat(3, 2), 192);
        assert!(power_geometric_tail(1, &bad, 1, &cfg()).is_err());
    }

    #[test]
    fn power_geometric_tail_matches_closed_form() {
        // Σ_{m≥36} m⁵qᵐ at q = e^(−5π/2), against the partial-fraction form
        // q³⁶·P(q)/(1−q)⁶ with P frozen from an independent derivation.
        let w = 420u64;
        let q = exp_pi_rational(&rat(-5, 2), w);
        let tail = power_geometric_tail(5, &q, 36, &cfg()).unwrap();

        let coeffs: [i64; 6] =
            [60466176, -293453099, 570164066, -554350974, 269695826, -52521875];
        let mut poly = Enclosure::zero();
        for &c in coeffs.iter().rev() {
            poly = poly.mul(&q, w).add(&Enclosure::from_i64(c), w);
        }
        let one_minus_q = Enclosure::one().sub(&q, w);
        let closed = q
            .pow_u32(36, w)
            .mul(&poly, w)
            .div(&one_minus_q.pow_u32(6, w), w)
            .unwrap();

        assert!(tail.intersect(&closed).is_some());
        let cap = BigRational::new(BigInt::one(), BigInt::from(10).pow(115));
        assert!(tail.hi().to_rational() <= cap);
        assert!(closed.hi().to_rational() <= cap);
        assert!(tail.lo().is_positive());
    }

    #[test]
    fn largest_root_bound_and_signs() {
        assert!(largest_root_upper(order(0), &cfg()).is_err());
        for n in [1u32, 2, 5, 9, 12] {
            let bound = largest_root_upper(order(n), &cfg()).unwrap();
            let start = bound.hi().to_rational().ceil();
            let stop = BigRational::from(BigInt::from(10 * n.max(5)));
            let mut x = start;
            while x <= stop {
                let v = laguerre_exact(order(n), &x);
                let expected_positive = n % 2 == 0;
                assert_eq!(
                    v.is_positive(),
                    expected_positive,
                    "sign violation at n={n}, x={x}"
                );
                x += BigRational::one();
            }
        }
    }

    #[test]
    fn krasikov_layer_bounds_dominate() {
        assert!(krasikov_layer_bounds(order(10), &cfg()).is_err());
        let c = cfg();
        let w = c.working_bits();
        for n in [11u32, 20, 30, 40] {
            let (b1, b2, b3) = krasikov_layer_bounds(order(n), &c).unwrap();
            let np1 = n as i64 + 1;
            let base = pi(w).mul_i64(np1, w);
            for (arg, b) in [(base.neg(), &b1), (base.clone(), &b2), (base.mul_i64(2, w), &b3)] {
                let val = laguerre_eval_interval(order(n), &arg, &c).abs();
                assert!(val.hi() < b.lo(), "layer bound fails at n={n}");
            }
        }
    }

    #[test]
    fn kras1_window_checks() {
        assert!(kras1_bound(order(1), &rat(1, 1), &cfg()).is_err());
        // Outside the window on both sides.
        assert!(kras1_bound(order(12), &rat(1, 100), &cfg()).is_err());
        assert!(kras1_bound(order(12), &rat(100, 1), &cfg()).is_err());
        // Midpoint x = 2n+1 lies well inside; the bound must dominate.
        for n in [2u32, 5, 12, 25, 40] {
            let x = rat(2 * n as i64 + 1, 1);
            let bound = kras1_bound(order(n), &x, &cfg()).unwrap();
            let val = laguerre_exact(order(n), &x).abs();
            assert!(BigRational::from(val) < bound.lo().to_rational(), "window bound at n={n}");
        }
    }

    #[test]
    fn kras1_rejects_near_endpoint() {
        // q² for n=12 is ≈ 0.0201; an argument there sits too close.
        let c = cfg();
        let w = c.working_bits();
        let u = Enclosure::from_rational(&rat(12 * 13, 1), w).sqrt(w).unwrap().mul_i64(2, w);
        let q_sq_hi = Enclosure::from_i64(25).sub(&u, w).hi().to_rational();
        let x = q_sq_hi + BigRational::new(BigInt::one(), BigInt::from(10).pow(40));
        assert!(kras1_bound(order(12), &x, &c).is_err());
    }

    #[test]
    fn certified_narrowing_across_precisions() {
        let x = rat(377, 10);
        let mut prev_width: Option<f64> = None;
        let mut prev: Option<Enclosure> = None;
        for bits in [128u32, 256, 512] {
            let c = PrecisionConfig::certified(bits).unwrap();
            let enc = laguerre_eval(order(20), &x, &c).unwrap();
            if let Some(p) = &prev {
                assert!(enc.intersect(p).is_some());
            }
            if let Some(pw) = prev_width {
                assert!(enc.width_f64() <= pw);
            }
            prev_width = Some(enc.width_f64());
            prev = Some(enc);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn recurrence_agrees_with_explicit(
            n in 0u32..=30,
            den in 1i64..=1000,
            num_scale in -50i64..=200,
            jitter in 0i64..=999,
        ) {
            // x ∈ [−50, 200] with denominator ≤ 1000
            let num = num_scale * den + jitter.min(den - 1);
            let x = BigRational::new(BigInt::from(num), BigInt::from(den));
            prop_assume!(x >= rat(-50, 1) && x <= rat(200, 1));
            let a = laguerre_exact(order(n), &x);
            let b = laguerre_explicit(order(n), &x).unwrap();
            prop_assert_eq!(&a, &b);
            let enc = laguerre_eval(order(n), &x, &cfg()).unwrap();
            prop_assert!(enc.contains_rational(&a));
        }
    }

    #[test]
    fn szego_dominates_on_grid() {
        for n in [0u32, 5, 10, 20, 30, 40] {
            let c = cfg();
            let mut j = 0i64;
            while j <= 8 * n.max(1) as i64 {
                let x = rat(j, 2);
                let val = laguerre_exact(order(n), &x).abs();
                let bound = szego_bound(&x, &c).unwrap();
                assert!(
                    BigRational::from(val) <= bound.hi().to_rational(),
                    "Szegő bound fails at n={n}, x={x}"
                );
                j += 1;
            }
        }
    }

    #[test]
    fn crude_dominates_on_grid() {
        for n in [1u32, 4, 9, 16, 25, 36] {
            for xi in 1..=(4 * n) as i64 {
                let x = rat(xi, 1);
                let val = laguerre_exact(order(n), &x).abs();
                let bound = crude_bound(order(n), &x).unwrap();
                assert!(val <= bound, "growth bound fails at n={n}, x={xi}");
            }
        }
    }
}
