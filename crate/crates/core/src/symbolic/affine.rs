//! Exact affine maps `x ↦ m^a x + b` over the rationals.
//!
//! These give a faithful model of `BS(1,m) = ⟨g, h | h g h⁻¹ = g^m⟩` with
//! `g: x ↦ x + 1` and `h: x ↦ m x`. A word multiplies as composition of
//! maps, `(xy)(t) = x(y(t))`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AffineMap {
    pub scale_exp: i64,
    pub shift: BigRational,
}

fn m_pow(m: i64, a: i64) -> BigRational {
    let base = BigRational::from_integer(BigInt::from(m));
    if a >= 0 {
        num_traits::pow(base, a as usize)
    } else {
        num_traits::pow(base.recip(), a.unsigned_abs() as usize)
    }
}

impl AffineMap {
    pub fn identity() -> Self {
        AffineMap {
            scale_exp: 0,
            shift: BigRational::zero(),
        }
    }

    pub fn translation(t: i64) -> Self {
        AffineMap {
            scale_exp: 0,
            shift: BigRational::from_integer(t.into()),
        }
    }

    pub fn scaling(a: i64) -> Self {
        AffineMap {
            scale_exp: a,
            shift: BigRational::zero(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.scale_exp == 0 && self.shift.is_zero()
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &AffineMap, m: i64) -> AffineMap {
        AffineMap {
            scale_exp: self.scale_exp + other.scale_exp,
            shift: m_pow(m, self.scale_exp) * &other.shift + &self.shift,
        }
    }

    pub fn inverse(&self, m: i64) -> AffineMap {
        AffineMap {
            scale_exp: -self.scale_exp,
            shift: -(m_pow(m, -self.scale_exp) * &self.shift),
        }
    }

    pub fn pow(&self, k: i64, m: i64) -> AffineMap {
        let base = if k < 0 { self.inverse(m) } else { self.clone() };
        let mut acc = AffineMap::identity();
        for _ in 0..k.unsigned_abs() {
            acc = acc.compose(&base, m);
        }
        acc
    }

    pub fn apply(&self, x: &BigRational, m: i64) -> BigRational {
        m_pow(m, self.scale_exp) * x + &self.shift
    }

    /// `k` with `self = c^k`, if any.
    pub fn cyclic_exponent(&self, c: &AffineMap, m: i64) -> Option<i64> {
        let k = if c.scale_exp != 0 {
            if self.scale_exp % c.scale_exp != 0 {
                return None;
            }
            self.scale_exp / c.scale_exp
        } else if c.shift.is_zero() {
            return self.is_identity().then_some(0);
        } else {
            if self.scale_exp != 0 {
                return None;
            }
            let q = &self.shift / &c.shift;
            if !q.is_integer() {
                return None;
            }
            i64::try_from(q.to_integer()).ok()?
        };
        // Verify; powers of translations are cheap, powers of scalings are exact.
        let ck = if c.scale_exp == 0 {
            AffineMap {
                scale_exp: 0,
                shift: &c.shift * BigRational::from_integer(k.into()),
            }
        } else {
            c.pow(k, m)
        };
        (ck == *self).then_some(k)
    }
}

impl Default for AffineMap {
    fn default() -> Self {
        Self::identity()
    }
}
