use std::fmt;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::rational::{as_int, fmt_q, q, Q};

/// A weight, given by its values on `h` and `h̄`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Weight {
    #[serde(serialize_with = "crate::rational::ser_q", deserialize_with = "crate::rational::de_q")]
    pub h: Q,
    #[serde(serialize_with = "crate::rational::ser_q", deserialize_with = "crate::rational::de_q")]
    pub hbar: Q,
}

impl Weight {
    pub fn new(h: Q, hbar: Q) -> Self {
        Self { h, hbar }
    }

    pub fn ints(h: i64, hbar: i64) -> Self {
        Self::new(q(h), q(hbar))
    }

    /// The root `α = (2, 0)`.
    pub fn alpha() -> Self {
        Self::ints(2, 0)
    }

    /// `self − kα`, i.e. the weight `k` steps below.
    pub fn lowered(&self, k: i64) -> Weight {
        Weight::new(&self.h - q(2 * k), self.hbar.clone())
    }

    /// `Some(k)` with `other = self − kα`, if the two weights lie in one `Zα`-coset.
    pub fn steps_to(&self, other: &Weight) -> Option<i64> {
        if self.hbar != other.hbar {
            return None;
        }
        as_int(&((&self.h - &other.h) / q(2)))
    }

    pub fn is_degenerate(&self) -> bool {
        self.hbar.is_zero()
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", fmt_q(&self.h), fmt_q(&self.hbar))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q_frac;

    #[test]
    fn alpha_moves_h_only() {
        let w = Weight::new(q_frac(1, 2), q(3));
        assert_eq!(w.lowered(2), Weight::new(q_frac(-7, 2), q(3)));
        assert_eq!(w.steps_to(&w.lowered(-3)), Some(-3));
        assert_eq!(w.steps_to(&Weight::new(q(0), q(3))), None);
        assert_eq!(w.steps_to(&Weight::new(q_frac(1, 2), q(0))), None);
    }
}
