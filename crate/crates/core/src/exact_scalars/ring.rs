use std::fmt;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::Result;

/// Serializable description of a coefficient ring.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum RingDescriptor {
    Rational,
    Cyclotomic {
        conductor: u32,
    },
    Padic {
        p: u64,
        #[serde(rename = "K")]
        k: u32,
    },
    Unramified {
        p: u64,
        #[serde(rename = "K")]
        k: u32,
        degree: u32,
        modulus: Vec<u64>,
    },
}

/// A commutative ring with exact (or precision-tracked) arithmetic.
///
/// The ring value carries the context (conductor, prime, precision) so that
/// elements can stay small; every operation goes through the ring.
pub trait Ring: Clone + fmt::Debug + Send + Sync {
    type Elem: Clone + fmt::Debug + PartialEq + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_i64(&self, n: i64) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn is_unit(&self, a: &Self::Elem) -> bool;
    /// Inverse of a unit.
    fn inv(&self, a: &Self::Elem) -> Result<Self::Elem>;
    /// `a / b` when the quotient lies in the ring (for local rings this needs
    /// `v(a) >= v(b)` and costs `v(b)` digits of precision).
    fn div_exact(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem>;
    /// Pivot preference: `None` for zero, lower is better. Fields answer 0.
    fn valuation(&self, a: &Self::Elem) -> Option<u32>;
    fn is_field(&self) -> bool;
    /// Working precision for truncated rings, `None` for exact fields.
    fn precision(&self) -> Option<u32> {
        None
    }
    fn descriptor(&self) -> RingDescriptor;
    fn format(&self, a: &Self::Elem) -> String;
    fn to_json(&self, a: &Self::Elem) -> Value;
    fn from_json(&self, v: &Value) -> Result<Self::Elem>;

    fn pow(&self, a: &Self::Elem, mut e: u128) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    /// Integer power allowing negative exponents for units.
    fn pow_i(&self, a: &Self::Elem, e: i64) -> Result<Self::Elem> {
        if e >= 0 {
            Ok(self.pow(a, e as u128))
        } else {
            Ok(self.pow(&self.inv(a)?, e.unsigned_abs() as u128))
        }
    }

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    fn is_one(&self, a: &Self::Elem) -> bool {
        self.is_zero(&self.sub(a, &self.one()))
    }

    fn equal(&self, a: &Self::Elem, b: &Self::Elem) -> bool {
        self.is_zero(&self.sub(a, b))
    }

    fn half(&self) -> Result<Self::Elem> {
        self.inv(&self.from_i64(2))
    }

    fn sum<'a, I>(&self, items: I) -> Self::Elem
    where
        I: IntoIterator<Item = &'a Self::Elem>,
        Self::Elem: 'a,
    {
        items.into_iter().fold(self.zero(), |acc, x| self.add(&acc, x))
    }
}

/// Rings in which unit square classes are computable.
pub trait SquareRing: Ring {
    fn is_square_unit(&self, a: &Self::Elem) -> Result<bool>;
    /// Square root of a square unit with a deterministic sign.
    fn sqrt_unit(&self, a: &Self::Elem) -> Result<Self::Elem>;
    /// Canonical representative of the square class of a unit.
    fn class_rep(&self, a: &Self::Elem) -> Result<Self::Elem>;
}

/// Complete discrete valuation rings with finite residue field, truncated
/// at a fixed precision: `Z_p / p^K` and its unramified extensions.
pub trait LocalRing: SquareRing {
    fn prime(&self) -> u64;
    fn prec(&self) -> u32;
    fn residue_degree(&self) -> u32;
    fn residue_size(&self) -> u64 {
        self.prime().pow(self.residue_degree())
    }
    /// A primitive `(q-1)`-th root of unity (Teichmüller lift of a generator).
    fn teichmuller_generator(&self) -> Self::Elem;
    /// True when `a ≡ 0 mod p`.
    fn residue_is_zero(&self, a: &Self::Elem) -> bool {
        self.valuation(a).map(|v| v > 0).unwrap_or(true)
    }
    /// Lift of a small residue-field enumeration index; used by brute-force
    /// searches over the residue field. Indices run over `0..q`.
    fn residue_element(&self, index: u64) -> Self::Elem;
}
