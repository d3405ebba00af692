//! Exact rational scalar with an `i64` fast path, used inside the simplex.
//! Values that outgrow the fast path are promoted to `BigRational` and
//! demoted again once they fit.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

#[derive(Debug, Clone)]
pub(crate) enum Scalar {
    /// Numerator and positive denominator, coprime.
    Small(i64, i64),
    Big(BigRational),
}

impl Scalar {
    pub(crate) fn zero() -> Self {
        Scalar::Small(0, 1)
    }

    pub(crate) fn one() -> Self {
        Scalar::Small(1, 1)
    }

    #[cfg(test)]
    pub(crate) fn from_int(n: i64) -> Self {
        Scalar::Small(n, 1)
    }

    pub(crate) fn from_bigint(n: &BigInt) -> Self {
        match n.to_i64() {
            Some(v) => Scalar::Small(v, 1),
            None => Scalar::Big(BigRational::from_integer(n.clone())),
        }
    }

    pub(crate) fn from_big(q: BigRational) -> Self {
        match (q.numer().to_i64(), q.denom().to_i64()) {
            (Some(n), Some(d)) => Scalar::Small(n, d),
            _ => Scalar::Big(q),
        }
    }

    pub(crate) fn to_big(&self) -> BigRational {
        match self {
            Scalar::Small(n, d) => BigRational::new_raw(BigInt::from(*n), BigInt::from(*d)),
            Scalar::Big(q) => q.clone(),
        }
    }

    fn from_wide(n: i128, d: i128) -> Self {
        debug_assert!(d != 0);
        let (mut n, mut d) = if d < 0 { (-n, -d) } else { (n, d) };
        let g = n.gcd(&d);
        if g > 1 {
            n /= g;
            d /= g;
        }
        match (i64::try_from(n), i64::try_from(d)) {
            (Ok(n), Ok(d)) => Scalar::Small(n, d),
            _ => Scalar::Big(BigRational::new_raw(BigInt::from(n), BigInt::from(d))),
        }
    }

    pub(crate) fn is_zero(&self) -> bool {
        match self {
            Scalar::Small(n, _) => *n == 0,
            Scalar::Big(q) => q.is_zero(),
        }
    }

    pub(crate) fn is_positive(&self) -> bool {
        match self {
            Scalar::Small(n, _) => *n > 0,
            Scalar::Big(q) => q.is_positive(),
        }
    }

    pub(crate) fn is_negative(&self) -> bool {
        match self {
            Scalar::Small(n, _) => *n < 0,
            Scalar::Big(q) => q.is_negative(),
        }
    }

    pub(crate) fn neg(&self) -> Self {
        match self {
            Scalar::Small(n, d) if *n != i64::MIN => Scalar::Small(-n, *d),
            _ => Scalar::from_big(-self.to_big()),
        }
    }

    pub(crate) fn mul(&self, other: &Self) -> Self {
        if let (Scalar::Small(an, ad), Scalar::Small(bn, bd)) = (self, other) {
            if *an == 0 || *bn == 0 {
                return Scalar::zero();
            }
            let g1 = an.gcd(bd);
            let g2 = bn.gcd(ad);
            let n = i128::from(an / g1) * i128::from(bn / g2);
            let d = i128::from(ad / g2) * i128::from(bd / g1);
            return match (i64::try_from(n), i64::try_from(d)) {
                (Ok(n), Ok(d)) => Scalar::Small(n, d),
                _ => Scalar::Big(BigRational::new_raw(BigInt::from(n), BigInt::from(d))),
            };
        }
        Scalar::from_big(self.to_big() * other.to_big())
    }

    pub(crate) fn recip(&self) -> Self {
        match self {
            Scalar::Small(n, d) if *n > 0 => Scalar::Small(*d, *n),
            Scalar::Small(n, d) if *n < 0 && *n != i64::MIN => Scalar::Small(-d, -n),
            _ => Scalar::from_big(self.to_big().recip()),
        }
    }

    pub(crate) fn div(&self, other: &Self) -> Self {
        self.mul(&other.recip())
    }

    pub(crate) fn add(&self, other: &Self) -> Self {
        if let (Scalar::Small(an, ad), Scalar::Small(bn, bd)) = (self, other) {
            if *an == 0 {
                return other.clone();
            }
            if *bn == 0 {
                return self.clone();
            }
            if ad == bd {
                return Scalar::from_wide(i128::from(*an) + i128::from(*bn), i128::from(*ad));
            }
            let lhs = i128::from(*an) * i128::from(*bd);
            let rhs = i128::from(*bn) * i128::from(*ad);
            if let Some(n) = lhs.checked_add(rhs) {
                return Scalar::from_wide(n, i128::from(*ad) * i128::from(*bd));
            }
        }
        Scalar::from_big(self.to_big() + other.to_big())
    }

    pub(crate) fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    /// `self - a * b`.
    pub(crate) fn sub_mul(&self, a: &Self, b: &Self) -> Self {
        self.sub(&a.mul(b))
    }

    pub(crate) fn cmp(&self, other: &Self) -> Ordering {
        if let (Scalar::Small(an, ad), Scalar::Small(bn, bd)) = (self, other) {
            return (i128::from(*an) * i128::from(*bd)).cmp(&(i128::from(*bn) * i128::from(*ad)));
        }
        self.to_big().cmp(&other.to_big())
    }
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl From<&BigRational> for Scalar {
    fn from(q: &BigRational) -> Self {
        Scalar::from_big(q.clone())
    }
}
