use std::fmt;

use serde::de::{self, Deserializer, Visitor};
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};

/// An element of the max-plus semiring: a finite real or the bottom element −∞.
///
/// Bottom is stored as `f64::NEG_INFINITY`, which makes `max` and `+` on the
/// raw floats agree with ⊕ and ⊗. NaN and +∞ are rejected on every
/// construction path, so the derived ordering is total in practice and puts
/// Bottom below every finite value.
#[derive(Clone, Copy, PartialEq, PartialOrd)]
pub struct TropicalValue(f64);

impl TropicalValue {
    /// The ⊕-identity, −∞.
    pub const BOTTOM: Self = Self(f64::NEG_INFINITY);
    /// The ⊗-identity, 0.
    pub const ZERO: Self = Self(0.0);

    pub fn finite(x: f64) -> Result<Self> {
        if x.is_finite() {
            Ok(Self(x))
        } else {
            Err(Error::InvalidValue(x))
        }
    }

    /// Accepts finite reals and −∞ (mapped to Bottom).
    pub fn from_f64(x: f64) -> Result<Self> {
        if x == f64::NEG_INFINITY {
            Ok(Self::BOTTOM)
        } else {
            Self::finite(x)
        }
    }

    #[inline]
    pub(crate) fn from_raw(x: f64) -> Self {
        debug_assert!(!x.is_nan() && x != f64::INFINITY, "raw value {x}");
        Self(x)
    }

    #[inline]
    pub fn is_bottom(self) -> bool {
        self.0 == f64::NEG_INFINITY
    }

    #[inline]
    pub fn is_finite(self) -> bool {
        !self.is_bottom()
    }

    /// The real value, or `None` for Bottom.
    #[inline]
    pub fn value(self) -> Option<f64> {
        if self.is_bottom() {
            None
        } else {
            Some(self.0)
        }
    }

    /// Raw float view: Bottom becomes `f64::NEG_INFINITY`.
    #[inline]
    pub fn to_f64(self) -> f64 {
        self.0
    }

    /// a ⊕ b = max(a, b).
    #[inline]
    pub fn oplus(self, other: Self) -> Self {
        if other.0 > self.0 {
            other
        } else {
            self
        }
    }

    /// a ⊗ b = a + b, with Bottom absorbing.
    #[inline]
    pub fn otimes(self, other: Self) -> Self {
        Self::from_raw(self.0 + other.0)
    }
}

pub fn trop_add(a: TropicalValue, b: TropicalValue) -> TropicalValue {
    a.oplus(b)
}

pub fn trop_mul(a: TropicalValue, b: TropicalValue) -> TropicalValue {
    a.otimes(b)
}

impl Default for TropicalValue {
    fn default() -> Self {
        Self::BOTTOM
    }
}

impl fmt::Debug for TropicalValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for TropicalValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.value() {
            Some(x) => write!(f, "{x}"),
            None => f.write_str("-inf"),
        }
    }
}

impl TryFrom<f64> for TropicalValue {
    type Error = Error;

    fn try_from(x: f64) -> Result<Self> {
        Self::from_f64(x)
    }
}

impl Serialize for TropicalValue {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self.value() {
            Some(x) => serializer.serialize_f64(x),
            None => serializer.serialize_str("-inf"),
        }
    }
}

impl<'de> Deserialize<'de> for TropicalValue {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        struct ValueVisitor;

        impl Visitor<'_> for ValueVisitor {
            type Value = TropicalValue;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a finite number or the string \"-inf\"")
            }

            fn visit_f64<E: de::Error>(self, v: f64) -> std::result::Result<Self::Value, E> {
                TropicalValue::finite(v).map_err(E::custom)
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Self::Value, E> {
                self.visit_f64(v as f64)
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Self::Value, E> {
                self.visit_f64(v as f64)
            }

            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Self::Value, E> {
                match v {
                    "-inf" => Ok(TropicalValue::BOTTOM),
                    other => Err(E::invalid_value(de::Unexpected::Str(other), &self)),
                }
            }
        }

        deserializer.deserialize_any(ValueVisitor)
    }
}
