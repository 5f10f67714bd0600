//! Inverse-CDF sampling against 64-bit uniform draws.

use crate::scalar::Scalar;

/// Cumulative thresholds scaled by `2^64`; a draw `u` selects the first
/// index whose threshold exceeds it. Rational weights compare exactly.
#[derive(Debug, Clone)]
pub struct DiscreteSampler {
    thresholds: Vec<u128>,
}

impl DiscreteSampler {
    /// Weights must be nonnegative and sum to one.
    pub fn new<T: Scalar>(weights: &[T]) -> Self {
        let mut cum = T::zero();
        let mut thresholds = Vec::with_capacity(weights.len());
        for w in weights {
            cum = cum + w.clone();
            thresholds.push(cum.sampling_threshold());
        }
        // Float round-off must not leave a gap at the top.
        if let Some(last) = weights.iter().rposition(|w| w.is_possible()) {
            for t in &mut thresholds[last..] {
                *t = 1u128 << 64;
            }
        }
        DiscreteSampler { thresholds }
    }

    /// Weights divided by their sum.
    pub fn normalized<T: Scalar>(weights: &[T]) -> Self {
        let total = weights.iter().fold(T::zero(), |acc, w| acc + w.clone());
        let scaled: Vec<T> = weights.iter().map(|w| w.clone() / total.clone()).collect();
        Self::new(&scaled)
    }

    pub fn sample(&self, draw: u64) -> usize {
        let u = draw as u128;
        self.thresholds
            .iter()
            .position(|&t| u < t)
            .unwrap_or(self.thresholds.len() - 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    #[test]
    fn exact_boundaries() {
        let s = DiscreteSampler::new(&[Rational::from_ratio(1, 2), Rational::from_ratio(1, 2)]);
        assert_eq!(s.sample(0), 0);
        assert_eq!(s.sample((1u64 << 63) - 1), 0);
        assert_eq!(s.sample(1u64 << 63), 1);
        assert_eq!(s.sample(u64::MAX), 1);
    }

    #[test]
    fn zero_weights_never_drawn() {
        let s = DiscreteSampler::new(&[0.0, 1.0, 0.0]);
        for d in [0, 1 << 40, u64::MAX] {
            assert_eq!(s.sample(d), 1);
        }
    }
}
