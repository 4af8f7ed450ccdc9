//! Rectangular lattices aℤ × bℤ with exact step arithmetic.
//!
//! Steps are kept as p/√d with rational p and squarefree d, so adjoint
//! lattices, squared norms, and densities stay exact rationals end to end.

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_integer::Roots;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use std::fmt;

/// Lattice step p/√d, normalized so d is squarefree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Step {
    p: BigRational,
    d: u64,
}

impl Step {
    /// Builds p/√d, extracting the square part of d into p.
    pub fn new(p: BigRational, d: u64) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidParameter("step radicand must be positive".into()));
        }
        if !p.is_positive() {
            return Err(Error::InvalidParameter("lattice step must be positive".into()));
        }
        let (s, d_free) = split_square(d);
        Ok(Step { p: p / BigRational::from(BigInt::from(s)), d: d_free })
    }

    pub fn from_rational(p: BigRational) -> Result<Self> {
        Step::new(p, 1)
    }

    pub fn rational_part(&self) -> &BigRational {
        &self.p
    }

    pub fn radicand(&self) -> u64 {
        self.d
    }

    /// Exact squared value p²/d.
    pub fn value_sq(&self) -> BigRational {
        &self.p * &self.p / BigRational::from(BigInt::from(self.d))
    }

    /// Exact reciprocal: 1/(p/√d) = (d/p)/√d.
    pub fn recip(&self) -> Step {
        Step { p: BigRational::from(BigInt::from(self.d)) / &self.p, d: self.d }
    }

    pub fn as_f64(&self) -> f64 {
        self.p.to_f64().unwrap_or(f64::NAN) / (self.d as f64).sqrt()
    }
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let x = self.p.numer();
        let y = self.p.denom();
        if self.d == 1 {
            write!(f, "{}", self.p)
        } else if y.is_one() {
            if x.is_one() {
                write!(f, "1/sqrt({})", self.d)
            } else {
                write!(f, "{}/sqrt({})", x, self.d)
            }
        } else {
            write!(f, "{}/({}*sqrt({}))", x, y, self.d)
        }
    }
}

/// Largest s with s² | d, returned with the squarefree cofactor.
fn split_square(d: u64) -> (u64, u64) {
    let mut s = 1u64;
    let mut rest = d;
    let mut f = 2u64;
    while f * f <= rest {
        while rest % (f * f) == 0 {
            s *= f;
            rest /= f * f;
        }
        f += 1;
    }
    (s, rest)
}

/// The lattice aℤ × bℤ.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RectLattice {
    pub a: Step,
    pub b: Step,
}

impl RectLattice {
    pub fn from_steps(a: Step, b: Step) -> Self {
        RectLattice { a, b }
    }

    pub fn from_rational_steps(a: BigRational, b: BigRational) -> Result<Self> {
        Ok(RectLattice { a: Step::from_rational(a)?, b: Step::from_rational(b)? })
    }

    /// Square lattice of density δ: a = b = 1/√δ for δ = s/t, kept exact as
    /// t/√(ts).
    pub fn square_from_density(delta: &BigRational) -> Result<Self> {
        if !delta.is_positive() {
            return Err(Error::InvalidParameter("density must be positive".into()));
        }
        let s = delta.numer().to_u64().ok_or_else(|| {
            Error::InvalidParameter("density numerator too large for exact step".into())
        })?;
        let t = delta.denom().to_u64().ok_or_else(|| {
            Error::InvalidParameter("density denominator too large for exact step".into())
        })?;
        let step = Step::new(
            BigRational::from(BigInt::from(t)),
            s.checked_mul(t)
                .ok_or_else(|| Error::InvalidParameter("density radicand overflow".into()))?,
        )?;
        Ok(RectLattice { a: step.clone(), b: step })
    }

    /// Adjoint lattice (1/a)ℤ × (1/b)ℤ; an exact involution.
    pub fn adjoint(&self) -> RectLattice {
        RectLattice { a: self.a.recip(), b: self.b.recip() }
    }

    /// Exact squared norm of the point (ka, lb).
    pub fn norm_sq(&self, k: i64, l: i64) -> BigRational {
        let kk = BigRational::from(BigInt::from(k) * BigInt::from(k));
        let ll = BigRational::from(BigInt::from(l) * BigInt::from(l));
        kk * self.a.value_sq() + ll * self.b.value_sq()
    }

    /// Exact squared density (1/(ab))² = 1/(a²b²).
    pub fn density_sq(&self) -> BigRational {
        (self.a.value_sq() * self.b.value_sq()).recip()
    }

    pub fn density_f64(&self) -> f64 {
        1.0 / (self.a.as_f64() * self.b.as_f64())
    }

    /// Exact density when a²b² is a perfect rational square, as for every
    /// rational-step or square lattice in use here.
    pub fn density_exact(&self) -> Option<BigRational> {
        let sq = self.density_sq();
        let n = sq.numer().sqrt();
        let d = sq.denom().sqrt();
        if &(&n * &n) == sq.numer() && &(&d * &d) == sq.denom() {
            Some(BigRational::new(n, d))
        } else {
            None
        }
    }

    pub fn is_square(&self) -> bool {
        self.a == self.b
    }

    /// Smaller of the two squared steps.
    pub fn min_step_sq(&self) -> BigRational {
        let asq = self.a.value_sq();
        let bsq = self.b.value_sq();
        if asq <= bsq {
            asq
        } else {
            bsq
        }
    }

    /// All points with max(|k|, |l|) ≤ m, k-major, both ascending.
    pub fn enumerate_box(&self, m: u32) -> Vec<LatticePoint> {
        let m = m as i64;
        let mut out = Vec::with_capacity(((2 * m + 1) * (2 * m + 1)) as usize);
        for k in -m..=m {
            for l in -m..=m {
                out.push(LatticePoint { k, l });
            }
        }
        out
    }
}

/// Integer coordinates (k, l) of the point (ka, lb).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct LatticePoint {
    pub k: i64,
    pub l: i64,
}

/// The set {k² + l² = m} with its number of representations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Layer {
    pub m: u64,
    pub count: u64,
}

/// Number of representations of m as a sum of two integer squares.
pub fn r2(m: u64) -> u64 {
    if m == 0 {
        return 1;
    }
    let mut count = 0u64;
    let kmax = m.sqrt();
    for k in 0..=kmax {
        let rem = m - k * k;
        let l = rem.sqrt();
        if l * l == rem {
            let mult = if k == 0 { 1 } else { 2 } * if l == 0 { 1 } else { 2 };
            count += mult;
        }
    }
    count
}

/// Nonempty layers with m ≤ r2max, ascending in m; the origin is excluded.
pub fn layers_upto(r2max: u64) -> Vec<Layer> {
    (1..=r2max)
        .filter_map(|m| {
            let count = r2(m);
            if count > 0 {
                Some(Layer { m, count })
            } else {
                None
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn step_normalizes_square_part() {
        // 1/√12 = 1/(2√3)
        let s = Step::new(rat(1, 1), 12).unwrap();
        assert_eq!(s.radicand(), 3);
        assert_eq!(s.rational_part(), &rat(1, 2));
        assert_eq!(s.value_sq(), rat(1, 12));
    }

    #[test]
    fn step_recip_involutive() {
        for (p, d) in [(rat(1, 1), 5), (rat(10, 3), 34), (rat(7, 2), 1), (rat(3, 1), 18)] {
            let s = Step::new(p, d).unwrap();
            assert_eq!(s.recip().recip(), s);
            // s · (1/s) = 1 exactly: (p/√d)·((d/p)/√d) = d/d
            assert_eq!(s.value_sq() * s.recip().value_sq(), rat(1, 1));
        }
    }

    #[test]
    fn adjoint_is_involution() {
        let unit = RectLattice::from_rational_steps(rat(1, 1), rat(1, 1)).unwrap();
        assert_eq!(unit.adjoint(), unit);

        let dense = RectLattice::square_from_density(&rat(5, 1)).unwrap();
        let adj = dense.adjoint();
        assert_eq!(adj.a.value_sq(), rat(5, 1));
        assert_eq!(adj.adjoint(), dense);

        let rect = RectLattice::from_rational_steps(rat(2, 1), rat(1, 3)).unwrap();
        let adj = rect.adjoint();
        assert_eq!(adj.a.rational_part(), &rat(1, 2));
        assert_eq!(adj.b.rational_part(), &rat(3, 1));
        assert_eq!(adj.adjoint(), rect);
    }

    #[test]
    fn density_from_square_construction() {
        let l5 = RectLattice::square_from_density(&rat(5, 1)).unwrap();
        assert_eq!(l5.a.value_sq(), rat(1, 5));
        assert_eq!(l5.density_exact().unwrap(), rat(5, 1));

        let l306 = RectLattice::square_from_density(&rat(153, 50)).unwrap();
        assert_eq!(l306.a.rational_part(), &rat(10, 3));
        assert_eq!(l306.a.radicand(), 34);
        assert_eq!(l306.density_exact().unwrap(), rat(153, 50));

        let rect = RectLattice::from_rational_steps(rat(1, 2), rat(1, 3)).unwrap();
        assert_eq!(rect.density_exact().unwrap(), rat(6, 1));
    }

    #[test]
    fn step_display_forms() {
        assert_eq!(Step::new(rat(2, 1), 1).unwrap().to_string(), "2");
        assert_eq!(Step::new(rat(1, 3), 1).unwrap().to_string(), "1/3");
        assert_eq!(Step::new(rat(1, 1), 5).unwrap().to_string(), "1/sqrt(5)");
        assert_eq!(Step::new(rat(5, 1), 5).unwrap().to_string(), "5/sqrt(5)");
        assert_eq!(Step::new(rat(10, 3), 34).unwrap().to_string(), "10/(3*sqrt(34))");
    }

    #[test]
    fn r2_small_values() {
        let expected = [
            (0u64, 1u64),
            (1, 4),
            (2, 4),
            (3, 0),
            (4, 4),
            (5, 8),
            (6, 0),
            (7, 0),
            (8, 4),
            (9, 4),
            (10, 8),
            (25, 12),
            (36, 4),
            (50, 12),
        ];
        for (m, want) in expected {
            assert_eq!(r2(m), want, "r2({m})");
        }
    }

    #[test]
    fn r2_divisor_formula_oracle() {
        // r₂(m) = 4·(d₁(m) − d₃(m)), divisors counted by residue mod 4.
        fn oracle(m: u64) -> u64 {
            let mut d1 = 0i64;
            let mut d3 = 0i64;
            let mut d = 1;
            while d * d <= m {
                if m % d == 0 {
                    for q in [d, m / d] {
                        if d * d == m && q != d {
                            continue;
                        }
                        match q % 4 {
                            1 => d1 += 1,
                            3 => d3 += 1,
                            _ => {}
                        }
                        if d * d == m {
                            break;
                        }
                    }
                }
                d += 1;
            }
            (4 * (d1 - d3)).max(0) as u64
        }
        for m in 1..=2000u64 {
            assert_eq!(r2(m), oracle(m), "divisor formula mismatch at m = {m}");
        }
        assert_eq!(r2(36_000_000), oracle(36_000_000));
    }

    #[test]
    fn r2_bounds_and_divisibility() {
        for m in 1..=10_000u64 {
            let c = r2(m);
            assert!(c <= 4 * m, "r2({m}) = {c} exceeds 4m");
            assert_eq!(c % 4, 0, "r2({m}) not divisible by 4");
        }
    }

    #[test]
    fn disc_count_matches_layer_sums() {
        // Points with k² + l² ≤ R² equal 1 + Σ_{1 ≤ m ≤ R²} r₂(m).
        for r2max in [1u64, 2, 10, 100, 10_000] {
            let mut brute = 0u64;
            let lim = (r2max.sqrt() + 1) as i64;
            for k in -lim..=lim {
                for l in -lim..=lim {
                    if (k * k + l * l) as u64 <= r2max {
                        brute += 1;
                    }
                }
            }
            let layered: u64 = 1 + layers_upto(r2max).iter().map(|lay| lay.count).sum::<u64>();
            assert_eq!(brute, layered, "disc count mismatch at R² = {r2max}");
        }
    }

    #[test]
    fn layers_upto_examples() {
        let l2 = layers_upto(2);
        assert_eq!(l2, vec![Layer { m: 1, count: 4 }, Layer { m: 2, count: 4 }]);
        let ms: Vec<u64> = layers_upto(7).iter().map(|l| l.m).collect();
        assert_eq!(ms, vec![1, 2, 4, 5]);
        assert!(layers_upto(0).is_empty());
    }

    #[test]
    fn box_enumeration_shape() {
        let lat = RectLattice::square_from_density(&rat(5, 1)).unwrap();
        let pts = lat.enumerate_box(2);
        assert_eq!(pts.len(), 25);
        assert_eq!(pts[0], LatticePoint { k: -2, l: -2 });
        assert_eq!(pts[24], LatticePoint { k: 2, l: 2 });
        // k-major ordering: l cycles fastest
        assert_eq!(pts[1], LatticePoint { k: -2, l: -1 });
        assert_eq!(pts[5], LatticePoint { k: -1, l: -2 });
        // closed under negation
        for p in &pts {
            assert!(pts.contains(&LatticePoint { k: -p.k, l: -p.l }));
        }
    }

    #[test]
    fn norm_sq_exact() {
        let lat = RectLattice::from_rational_steps(rat(1, 2), rat(1, 3)).unwrap();
        assert_eq!(lat.norm_sq(2, 3), rat(2, 1));
        let sq = RectLattice::square_from_density(&rat(5, 1)).unwrap();
        let adj = sq.adjoint();
        // adjoint of density 5: step √5, so the squared norm is 5(k²+l²)
        assert_eq!(adj.norm_sq(1, 2), rat(25, 1));
    }
}
