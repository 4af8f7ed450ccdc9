//! Janssen sums of ambiguity-function magnitudes over adjoint lattices.
//!
//! For the Hermite window hₙ the ambiguity function at z = (x, ω) is
//! V(z) = e^(−πixω)·𝓛ₙ(π|z|²)·e^(−π|z|²/2), so the Janssen test reduces to a
//! lattice sum of |𝓛ₙ(πρ)|e^(−πρ/2) over exact rational squared norms ρ. A
//! strict certified bound Σ < 2 over the adjoint lattice proves the frame
//! property; anything else is reported as inconclusive.

use crate::bigfloat::{BigFloat, Dir};
use crate::error::{Error, Result};
use crate::interval::{exp_pi_rational, pi, sin_cos_pi_rational, Enclosure, Mode, PrecisionConfig};
use crate::lattice::RectLattice;
use crate::specfun::{
    laguerre_eval_interval, laguerre_log_signed, order, power_geometric_tail, LaguerreOrder,
};
use num_bigint::BigInt;
use num_integer::binomial;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;

/// Outcome of the Janssen test. The test is sufficient only, so a failed
/// bound never certifies the absence of a frame.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    #[serde(rename = "frame-certified")]
    FrameCertified,
    #[serde(rename = "inconclusive")]
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::FrameCertified => write!(f, "frame-certified"),
            Verdict::Inconclusive => write!(f, "inconclusive"),
        }
    }
}

/// How the series outside the finite enumeration region is bounded.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TailStrategy {
    /// Finite part over max(|k|,|l|) ≤ M; the rest bounded by the growth
    /// bound on 𝓛ₙ and a power-geometric layer sum from (M+1)².
    CrudePlusPowerGeo { max_norm: u32 },
    /// Finite part over k²+l² < R²; the rest bounded layerwise through the
    /// incomplete-gamma style tail from m = R².
    GammaIntegral { r_sq: u64 },
}

impl TailStrategy {
    pub fn cutoff_label(&self) -> String {
        match self {
            TailStrategy::CrudePlusPowerGeo { max_norm } => format!("maxnorm:{max_norm}"),
            TailStrategy::GammaIntegral { r_sq } => format!("euclid:{r_sq}"),
        }
    }

    /// Default finite region: the 11×11 max-norm box.
    pub fn default_box() -> Self {
        TailStrategy::CrudePlusPowerGeo { max_norm: 5 }
    }
}

/// Full record of one Janssen-test evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct JanssenReport {
    pub order: LaguerreOrder,
    pub lattice: RectLattice,
    pub strategy: TailStrategy,
    pub mode: Mode,
    pub finite_part: Enclosure,
    pub tail_upper: BigFloat,
    /// [finite.lo, finite.hi + tail]: encloses the exact series value.
    pub total: Enclosure,
    pub total_upper: f64,
    pub verdict: Verdict,
    pub ledger: Vec<(String, String)>,
}

fn sci(x: f64) -> String {
    format!("{x:.17e}")
}

/// |V(z)| at squared radius ρ = x²+ω²: the enclosure of |𝓛ₙ(πρ)|·e^(−πρ/2),
/// exactly [1,1] at the origin.
pub fn ambiguity_mag(ord: LaguerreOrder, rho: &BigRational, cfg: &PrecisionConfig) -> Result<Enclosure> {
    if rho.is_negative() {
        return Err(Error::InvalidParameter(format!("squared radius must be ≥ 0, got {rho}")));
    }
    if rho.is_zero() {
        return Ok(Enclosure::one());
    }
    let tw = BigFloat::from_f64(cfg.target_width)
        .ok_or_else(|| Error::InvalidParameter("target width must be finite".into()))?;
    let mut bits = cfg.working_bits();
    loop {
        let c = at_bits(cfg, bits);
        let arg = pi(bits).mul_rational(rho, bits);
        let lag = laguerre_eval_interval(ord, &arg, &c).abs();
        let decay = exp_pi_rational(&(-(rho / BigRational::from(BigInt::from(2)))), bits);
        let v = lag.mul(&decay, bits);
        if v.width() <= tw {
            return Ok(v);
        }
        if bits >= 1 << 14 {
            return Err(Error::PrecisionExhausted(format!(
                "ambiguity magnitude width target {} unreachable at {bits} bits",
                cfg.target_width
            )));
        }
        bits *= 2;
    }
}

/// Signed ambiguity value (Re, Im) at a rational point (x, ω), including the
/// phase e^(−πixω).
pub fn ambiguity_signed(
    ord: LaguerreOrder,
    x: &BigRational,
    omega: &BigRational,
    cfg: &PrecisionConfig,
) -> Result<(Enclosure, Enclosure)> {
    let w = cfg.working_bits();
    let rho = x * x + omega * omega;
    let arg = pi(w).mul_rational(&rho, w);
    let lag = laguerre_eval_interval(ord, &arg, cfg);
    let decay = exp_pi_rational(&(-(&rho / BigRational::from(BigInt::from(2)))), w);
    let base = lag.mul(&decay, w);
    let (s, c) = sin_cos_pi_rational(&(x * omega), w);
    Ok((c.mul(&base, w), s.neg().mul(&base, w)))
}

fn at_bits(cfg: &PrecisionConfig, bits: u64) -> PrecisionConfig {
    PrecisionConfig {
        mode: Mode::Certified,
        bits: bits.min(u32::MAX as u64) as u32,
        target_width: cfg.target_width,
    }
}

/// Distinct squared norms over the finite region of the strategy, with
/// multiplicities; iteration order is ascending in the exact norm.
fn collect_norms(
    lattice: &RectLattice,
    strategy: &TailStrategy,
) -> BTreeMap<BigRational, u64> {
    let mut groups: BTreeMap<BigRational, u64> = BTreeMap::new();
    match strategy {
        TailStrategy::CrudePlusPowerGeo { max_norm } => {
            let m = *max_norm as i64;
            for k in -m..=m {
                for l in -m..=m {
                    *groups.entry(lattice.norm_sq(k, l)).or_insert(0) += 1;
                }
            }
        }
        TailStrategy::GammaIntegral { r_sq } => {
            let lim = (*r_sq as f64).sqrt() as i64 + 1;
            for k in -lim..=lim {
                for l in -lim..=lim {
                    if ((k * k + l * l) as u64) < *r_sq {
                        *groups.entry(lattice.norm_sq(k, l)).or_insert(0) += 1;
                    }
                }
            }
        }
    }
    groups
}

/// Certified upper bound for the series over the strategy's tail region of
/// the adjoint lattice.
pub fn tail_bound(
    ord: LaguerreOrder,
    adjoint: &RectLattice,
    strategy: &TailStrategy,
    cfg: &PrecisionConfig,
) -> Result<BigFloat> {
    let w = cfg.working_bits();
    let n = ord.n;
    let s_sq = adjoint.min_step_sq();
    let pi_lo = pi(w).lo().to_rational();
    match strategy {
        TailStrategy::CrudePlusPowerGeo { max_norm } => {
            let m0 = (*max_norm as u64 + 1).pow(2);
            let m0_rat = BigRational::from(BigInt::from(m0));
            // Growth bound needs arguments ≥ 1 and, off the diagonal, the
            // decay factor must already dominate: πs²(M+1)² > max(1, 2n).
            let needed = BigRational::from(BigInt::from((2 * n).max(1) as i64));
            if &s_sq * &m0_rat * &pi_lo <= needed {
                return Err(Error::HypothesisViolated(format!(
                    "box tail needs πs²(M+1)² > {needed} at s² = {s_sq}, M = {max_norm}"
                )));
            }
            let front = layer_front(n, &s_sq, w);
            let q = exp_pi_rational(&(-(&s_sq / BigRational::from(BigInt::from(2)))), w);
            let series = power_geometric_tail(n + 1, &q, m0, cfg)?;
            Ok(front.mul(&series, w).mul_i64(4, w).hi().clone())
        }
        TailStrategy::GammaIntegral { r_sq } => {
            if *r_sq < 4 {
                return Err(Error::HypothesisViolated(format!(
                    "layer tail needs cutoff R² ≥ 4, got {r_sq}"
                )));
            }
            let r_rat = BigRational::from(BigInt::from(*r_sq));
            let crude_ok = if adjoint.is_square() {
                // Exact layer radii δm: the growth bound only needs πδR² ≥ 1.
                &s_sq * &r_rat * &pi_lo > BigRational::one()
            } else {
                // Min-step embedding replaces |λ|² by s²m, which is sound
                // only where y ↦ yⁿe^(−y/2) is decreasing: πs²R² > 2n.
                &s_sq * &r_rat * &pi_lo > BigRational::from(BigInt::from(2 * n as i64))
            };
            let layers = crate::specfun::gamma_tail_bound_sq(ord, &s_sq, &r_rat, cfg)?;
            let mut best: Option<BigFloat> = None;
            if crude_ok {
                let front = layer_front(n, &s_sq, w);
                best = Some(front.mul(&layers, w).hi().clone());
            }
            if adjoint.is_square() {
                // Sign-alternation route: |𝓛ₙ(πδm)| ≤ 𝓛ₙ(−πδm) ≤ mⁿ𝓛ₙ(−πδ),
                // since the coefficients of 𝓛ₙ(−x) are positive.
                let arg = pi(w).mul_rational(&s_sq, w).neg();
                let factor = laguerre_eval_interval(ord, &arg, cfg);
                let alt = factor.mul(&layers, w).hi().clone();
                best = Some(match best {
                    None => alt,
                    Some(b) => BigFloat::min_value(&b, &alt),
                });
            }
            best.ok_or_else(|| {
                Error::HypothesisViolated(format!(
                    "layer tail needs πs²R² > 2n off the diagonal; s² = {s_sq}, R² = {r_sq}"
                ))
            })
       }
    }
}

/// (n+1)·C(n,⌊n/2⌋)·(πs²)ⁿ, the growth-bound front factor.
fn layer_front(n: u32, s_sq: &BigRational, w: u64) -> Enclosure {
    let c = BigRational::from(
        BigInt::from(n as i64 + 1) * binomial(BigInt::from(n), BigInt::from(n / 2)),
    );
    pi(w).mul_rational(s_sq, w).pow_u32(n, w).mul_rational(&c, w)
}

/// Runs the Janssen test for hₙ over the adjoint of the given lattice and
/// assembles the full report.
pub fn janssen_sum(
    ord: LaguerreOrder,
    lattice: &RectLattice,
    strategy: &TailStrategy,
    cfg: &PrecisionConfig,
) -> Result<JanssenReport> {
    if cfg.is_fast() {
        return janssen_sum_fast(ord, lattice, strategy, cfg);
    }
    let adjoint = lattice.adjoint();
    let groups = collect_norms(&adjoint, strategy);
    let tw = BigFloat::from_f64(cfg.target_width)
        .ok_or_else(|| Error::InvalidParameter("target width must be finite".into()))?;
    let mut bits = cfg.working_bits();
    loop {
        let c = at_bits(cfg, bits);
        let mut finite = Enclosure::zero();
        for (rho, count) in &groups {
            let arg = pi(bits).mul_rational(rho, bits);
            let lag = laguerre_eval_interval(ord, &arg, &c).abs();
            let decay = exp_pi_rational(&(-(rho / BigRational::from(BigInt::from(2)))), bits);
            let term = lag.mul(&decay, bits).mul_rational(
                &BigRational::from(BigInt::from(*count)),
                bits,
            );
            finite = finite.add(&term, bits);
        }
        if finite.width() > tw {
            if bits >= 1 << 14 {
                return Err(Error::PrecisionExhausted(format!(
                    "finite part width target {} unreachable at {bits} bits",
                    cfg.target_width
                )));
            }
            bits *= 2;
            continue;
        }
        let tail = tail_bound(ord, &adjoint, strategy, &c)?;
        let total = Enclosure::from_endpoints(
            finite.lo().clone(),
            finite.hi().add(&tail, bits, Dir::Up),
        );
        let total_upper = total.hi_f64();
        let verdict = if total_upper < 2.0 {
            Verdict::FrameCertified
        } else {
            Verdict::Inconclusive
        };
        let ledger = vec![
            ("mode".into(), "certified".into()),
            ("strategy".into(), strategy.cutoff_label()),
            ("bits".into(), bits.to_string()),
            ("distinct-norms".into(), groups.len().to_string()),
            ("finite.lo".into(), sci(finite.lo_f64())),
            ("finite.hi".into(), sci(finite.hi_f64())),
            ("finite.width".into(), sci(finite.width_f64())),
            ("tail.upper".into(), sci(tail.to_f64(Dir::Up))),
            ("total.upper".into(), sci(total_upper)),
        ];
        return Ok(JanssenReport {
            order: ord,
            lattice: lattice.clone(),
            strategy: *strategy,
            mode: Mode::Certified,
            finite_part: finite,
            tail_upper: tail,
            total,
            total_upper,
            verdict,
            ledger,
        });
    }
}

fn janssen_sum_fast(
    ord: LaguerreOrder,
    lattice: &RectLattice,
    strategy: &TailStrategy,
    cfg: &PrecisionConfig,
) -> Result<JanssenReport> {
    let adjoint = lattice.adjoint();
    let groups = collect_norms(&adjoint, strategy);
    let n = ord.n;
    let mut finite = 0.0f64;
    for (rho, count) in &groups {
        let r = rho.to_f64().unwrap_or(f64::NAN);
        let ls = laguerre_log_signed(ord, std::f64::consts::PI * r);
        let term = (ls.log_mag - std::f64::consts::PI * r / 2.0).exp();
        finite += *count as f64 * if ls.sign == 0 { 0.0 } else { term };
    }
    let tail = fast_tail(n, &adjoint, strategy)?;
    let total_upper = finite + tail;
    if !total_upper.is_finite() {
        return Err(Error::PrecisionExhausted(
            "fast estimate overflowed; use certified mode".into(),
        ));
    }
    let fin = BigFloat::from_f64(finite).unwrap();
    let finite_enc = Enclosure::point(fin.clone());
    let tail_bf = BigFloat::from_f64(tail).unwrap();
    let verdict = if total_upper < 2.0 {
        Verdict::FrameCertified
    } else {
        Verdict::Inconclusive
    };
    let ledger = vec![
        ("mode".into(), "fast-estimate".into()),
        ("strategy".into(), strategy.cutoff_label()),
        ("distinct-norms".into(), groups.len().to_string()),
        ("finite".into(), sci(finite)),
        ("tail".into(), sci(tail)),
        ("total".into(), sci(total_upper)),
    ];
    Ok(JanssenReport {
        order: ord,
        lattice: lattice.clone(),
        strategy: *strategy,
        mode: Mode::Fast,
        finite_part: finite_enc,
        tail_upper: tail_bf.clone(),
        total: Enclosure::point(fin.add(&tail_bf, 64, Dir::Up)),
        total_upper,
        verdict,
        ledger,
    })
}

/// Log-domain tail estimate mirroring the certified bounds; underflow to
/// zero is acceptable here.
fn fast_tail(n: u32, adjoint: &RectLattice, strategy: &TailStrategy) -> Result<f64> {
    use std::f64::consts::PI;
    let s_sq = adjoint.min_step_sq().to_f64().unwrap_or(f64::NAN);
    if !(s_sq > 0.0) {
        return Err(Error::InvalidParameter("degenerate lattice step".into()));
    }
    let ln_c = binomial(BigInt::from(n), BigInt::from(n / 2))
        .to_f64()
        .map(f64::ln)
        .unwrap_or(f64::INFINITY);
    let ln_q = -PI * s_sq / 2.0;
    match strategy {
        TailStrategy::CrudePlusPowerGeo { max_norm } => {
            let m0 = (*max_norm as u64 + 1).pow(2);
            if PI * s_sq * m0 as f64 <= (2 * n).max(1) as f64 {
                return Err(Error::HypothesisViolated(format!(
                    "box tail needs πs²(M+1)² > max(1, 2n); s² = {s_sq}, M = {max_norm}"
                )));
            }
            let ln_front = ((n + 1) as f64).ln() + ln_c + n as f64 * (PI * s_sq).ln();
            Ok(series_from_log(n + 1, ln_q, m0, ln_front + 4f64.ln()))
        }
        TailStrategy::GammaIntegral { r_sq } => {
            if *r_sq < 4 {
                return Err(Error::HypothesisViolated(format!(
                    "layer tail needs cutoff R² ≥ 4, got {r_sq}"
                )));
            }
            let crude_ok = if adjoint.is_square() {
                PI * s_sq * *r_sq as f64 > 1.0
            } else {
                PI * s_sq * *r_sq as f64 > 2.0 * n as f64
            };
            let mut ln_factor = if crude_ok {
                ((n + 1) as f64).ln() + ln_c + n as f64 * (PI * s_sq).ln()
            } else {
                f64::INFINITY
            };
            if adjoint.is_square() {
                let ls = laguerre_log_signed(order(n), -PI * s_sq);
                ln_factor = ln_factor.min(ls.log_mag);
            }
            if ln_factor.is_infinite() {
                return Err(Error::HypothesisViolated(format!(
                    "layer tail needs πs²R² > 2n off the diagonal; s² = {s_sq}, R² = {r_sq}"
                )));
            }
            Ok(series_from_log(n + 1, ln_q, *r_sq, ln_factor + 4f64.ln()))
        }
    }
}

/// e^(ln_front)·Σ_{m≥m0} mᵖ·e^(m·ln_q) in log space.
fn series_from_log(p: u32, ln_q: f64, m0: u64, ln_front: f64) -> f64 {
    let ln_t = |m: u64| p as f64 * (m as f64).ln() + m as f64 * ln_q;
    let base = ln_t(m0);
    if !base.is_finite() {
        return 0.0;
    }
    let mut rel = 0.0f64;
    let mut m = m0;
    loop {
        let r = (ln_t(m) - base).exp();
        rel += r;
        m += 1;
        if (r < 1e-22 && m > m0 + 4) || m > m0 + 200_000 {
            break;
        }
    }
    let ln_total = ln_front + base + rel.ln();
    if ln_total < -740.0 {
        0.0
    } else {
        ln_total.exp()
    }
}

/// Signed Janssen series for the square lattice of density δ over the box
/// max(|k|,|l|) ≤ M, with the absolute tail bound folded into both
/// component widths. The imaginary part cancels exactly by symmetry.
pub fn signed_lattice_sum(
    ord: LaguerreOrder,
    delta: &BigRational,
    max_norm: u32,
    cfg: &PrecisionConfig,
) -> Result<(Enclosure, Enclosure)> {
    let w = cfg.working_bits();
    let lattice = RectLattice::square_from_density(delta)?;
    let adjoint = lattice.adjoint();
    let m = max_norm as i64;
    // Group the four sign choices of (±k, ±l): cos(πδkl) is even in kl, so
    // the sine parts cancel pairwise and the imaginary part is exactly zero.
    let mut re = Enclosure::zero();
    for k in 0..=m {
        for l in 0..=m {
            if k == 0 && l == 0 {
                re = re.add(&Enclosure::one(), w);
                continue;
            }
            let mult = if k == 0 || l == 0 { 2 } else { 4 };
            let rho = adjoint.norm_sq(k, l);
            let arg = pi(w).mul_rational(&rho, w);
            let lag = laguerre_eval_interval(ord, &arg, cfg);
            let decay = exp_pi_rational(&(-(&rho / BigRational::from(BigInt::from(2)))), w);
            let phase_arg = delta * BigRational::from(BigInt::from(k * l));
            let (_, c) = sin_cos_pi_rational(&phase_arg, w);
            let term = c
                .mul(&lag, w)
                .mul(&decay, w)
                .mul_rational(&BigRational::from(BigInt::from(mult)), w);
            re = re.add(&term, w);
        }
    }
    let strategy = TailStrategy::CrudePlusPowerGeo { max_norm };
    let tail = tail_bound(ord, &adjoint, &strategy, cfg)?;
    let re_final = re.widen_by(&tail, w);
    let im_final = Enclosure::zero().widen_by(&tail, w);
    Ok((re_final, im_final))
}

/// Upper bound δ·(Janssen total) for the Bessel/upper frame bound.
pub fn upper_frame_bound_estimate(report: &JanssenReport) -> f64 {
    report.lattice.density_f64() * report.total_upper
}

/// j₁(δ) = Σ |1−πδ(k²+l²)|·e^(−(π/2)δ(k²+l²)), the density profile of the
/// h₁ window on square lattices; defined here for δ ≥ 1, where every
/// off-origin term has πδm > 1.
pub fn j1(delta: &BigRational, cfg: &PrecisionConfig) -> Result<Enclosure> {
    let (value, _) = j1_with_derivative(delta, cfg)?;
    Ok(value)
}

/// dj₁/dδ = (π/2)·Σ r₂(m)·m·(3−πδm)·e^(−(π/2)δm); strictly negative for
/// δ ≥ 1 since πδm > 3 for every m ≥ 1 term.
pub fn j1_derivative(delta: &BigRational, cfg: &PrecisionConfig) -> Result<Enclosure> {
    let (_, deriv) = j1_with_derivative(delta, cfg)?;
    Ok(deriv)
}

fn j1_with_derivative(
    delta: &BigRational,
    cfg: &PrecisionConfig,
) -> Result<(Enclosure, Enclosure)> {
    if delta < &BigRational::one() {
        return Err(Error::DomainError(format!("j₁ profile needs δ ≥ 1, got {delta}")));
    }
    let w = cfg.working_bits();
    let tw = BigFloat::from_f64(cfg.target_width)
        .ok_or_else(|| Error::InvalidParameter("target width must be finite".into()))?;
    let pi_enc = pi(w);
    // πδ > 1 certified, so |1−πδm| = πδm−1 throughout.
    if pi_enc.lo().to_rational() * delta <= BigRational::one() {
        return Err(Error::PrecisionExhausted("cannot certify πδ > 1".into()));
    }
    let q = exp_pi_rational(&(-(delta / BigRational::from(BigInt::from(2)))), w);
    let pi_delta = pi_enc.mul_rational(delta, w);
    let mut cutoff = 32u64;
    loop {
        let mut value = Enclosure::one();
        let mut deriv = Enclosure::zero();
        let mut qpow = Enclosure::one();
        for m in 1..=cutoff {
            qpow = qpow.mul(&q, w);
            let c = crate::lattice::r2(m);
            if c == 0 {
                continue;
            }
            let m_rat = BigRational::from(BigInt::from(m));
            let cnt = BigRational::from(BigInt::from(c));
            let coeff = pi_delta.mul_rational(&m_rat, w).sub(&Enclosure::one(), w);
            value = value.add(&coeff.mul(&qpow, w).mul_rational(&cnt, w), w);
            let slope = Enclosure::from_i64(3).sub(&pi_delta.mul_rational(&m_rat, w), w);
            let dm = slope
                .mul(&qpow, w)
                .mul(&pi_enc, w)
                .mul_rational(&(&cnt * &m_rat / BigRational::from(BigInt::from(2))), w);
            deriv = deriv.add(&dm, w);
        }
        // |tail terms| ≤ 4m·πδm·qᵐ for the value and (π/2)·4m·m·πδm·qᵐ for
        // the derivative.
        let tail_v = power_geometric_tail(2, &q, cutoff + 1, cfg)?
            .mul(&pi_delta, w)
            .mul_i64(4, w)
            .hi()
            .clone();
        let tail_d = power_geometric_tail(3, &q, cutoff + 1, cfg)?
            .mul(&pi_enc.mul(&pi_delta, w), w)
            .mul_i64(2, w)
            .hi()
            .clone();
        let value = value.widen_by(&tail_v, w);
        let deriv = deriv.widen_by(&tail_d, w);
        if value.width() <= tw && deriv.width() <= tw {
            return Ok((value, deriv));
        }
        if cutoff >= 1 << 15 {
            return Err(Error::PrecisionExhausted(format!(
                "j₁ width target {} unreachable at cutoff {cutoff}",
                cfg.target_width
            )));
        }
        cutoff *= 2;
    }
}
