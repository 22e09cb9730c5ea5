use std::fmt;

use crate::{Error, Result};

/// Lévy index `α` of the fractional kinetic term, restricted to `1 < α ≤ 2`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct LevyIndex(f64);

impl LevyIndex {
    /// The conventional oscillator.
    pub const CONVENTIONAL: LevyIndex = LevyIndex(2.0);

    pub fn new(alpha: f64) -> Result<Self> {
        if alpha.is_finite() && alpha > 1.0 && alpha <= 2.0 {
            Ok(LevyIndex(alpha))
        } else {
            Err(Error::AlphaOutOfRange(alpha))
        }
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }

    /// `α/2`, the order of the factors `A` and `B`.
    #[inline]
    pub fn half(self) -> f64 {
        self.0 / 2.0
    }

    /// The sweep `α ∈ {1.1, 1.2, ..., 2.0}` used by the identity checks.
    pub fn sweep() -> Vec<LevyIndex> {
        (11..=20).map(|i| LevyIndex(i as f64 / 10.0)).collect()
    }

    pub(crate) fn same_as(self, other: LevyIndex) -> bool {
        self.0.to_bits() == other.0.to_bits()
    }
}

impl fmt::Display for LevyIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl TryFrom<f64> for LevyIndex {
    type Error = Error;

    fn try_from(value: f64) -> Result<Self> {
        LevyIndex::new(value)
    }
}
