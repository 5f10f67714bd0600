use serde::{Deserialize, Serialize};

use super::ChannelError;

/// A product alphabet `f_0 x f_1 x ...` with a row-major flat index.
///
/// Each factor carries a display offset: the stored digit is 0-based and the
/// label shown to users is `digit + offset`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IndexSpace {
    factors: Vec<usize>,
    offsets: Vec<usize>,
}

impl IndexSpace {
    pub fn new(factors: Vec<usize>, offsets: Vec<usize>) -> Result<Self, ChannelError> {
        if factors.is_empty() || factors.contains(&0) {
            return Err(ChannelError::Parameters(format!(
                "index space factors must be nonempty and positive, got {factors:?}"
            )));
        }
        if offsets.len() != factors.len() {
            return Err(ChannelError::Parameters(format!(
                "{} offsets for {} factors",
                offsets.len(),
                factors.len()
            )));
        }
        Ok(IndexSpace { factors, offsets })
    }

    pub fn with_factors(factors: Vec<usize>) -> Result<Self, ChannelError> {
        let offsets = vec![0; factors.len()];
        Self::new(factors, offsets)
    }

    /// Single-factor space `{0..n-1}`.
    pub fn flat(n: usize) -> Self {
        IndexSpace {
            factors: vec![n],
            offsets: vec![0],
        }
    }

    pub fn factors(&self) -> &[usize] {
        &self.factors
    }

    pub fn offsets(&self) -> &[usize] {
        &self.offsets
    }

    pub fn size(&self) -> usize {
        self.factors.iter().product()
    }

    pub fn flatten(&self, digits: &[usize]) -> Result<usize, ChannelError> {
        if digits.len() != self.factors.len() {
            return Err(ChannelError::Parameters(format!(
                "tuple of length {} for {} factors",
                digits.len(),
                self.factors.len()
            )));
        }
        let mut idx = 0;
        for (&d, &f) in digits.iter().zip(&self.factors) {
            if d >= f {
                return Err(ChannelError::IndexOutOfRange { index: d, size: f });
            }
            idx = idx * f + d;
        }
        Ok(idx)
    }

    /// Like [`flatten`](Self::flatten) but takes display labels.
    pub fn flatten_labels(&self, labels: &[usize]) -> Result<usize, ChannelError> {
        let digits: Option<Vec<usize>> = labels
            .iter()
            .zip(&self.offsets)
            .map(|(&l, &o)| l.checked_sub(o))
            .collect();
        match digits {
            Some(d) if labels.len() == self.offsets.len() => self.flatten(&d),
            _ => Err(ChannelError::Parameters(format!(
                "labels {labels:?} do not fit offsets {:?}",
                self.offsets
            ))),
        }
    }

    pub fn unflatten(&self, mut idx: usize) -> Vec<usize> {
        let mut digits = vec![0; self.factors.len()];
        for (slot, &f) in digits.iter_mut().zip(&self.factors).rev() {
            *slot = idx % f;
            idx /= f;
        }
        digits
    }

    pub fn label(&self, idx: usize) -> Vec<usize> {
        self.unflatten(idx)
            .into_iter()
            .zip(&self.offsets)
            .map(|(d, o)| d + o)
            .collect()
    }

    pub fn label_string(&self, idx: usize) -> String {
        let parts: Vec<String> = self.label(idx).iter().map(|v| v.to_string()).collect();
        format!("({})", parts.join(","))
    }

    /// Concatenated factors, first space most significant.
    pub fn product(&self, other: &IndexSpace) -> IndexSpace {
        IndexSpace {
            factors: self.factors.iter().chain(&other.factors).copied().collect(),
            offsets: self.offsets.iter().chain(&other.offsets).copied().collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn labels_carry_offsets() {
        let s = IndexSpace::new(vec![4, 3], vec![1, 0]).unwrap();
        assert_eq!(s.size(), 12);
        assert_eq!(s.flatten_labels(&[1, 0]).unwrap(), 0);
        assert_eq!(s.flatten_labels(&[4, 2]).unwrap(), 11);
        assert_eq!(s.label(5), vec![2, 2]);
        assert_eq!(s.label_string(5), "(2,2)");
        assert!(s.flatten_labels(&[0, 0]).is_err());
        assert!(s.flatten(&[4, 0]).is_err());
    }

    #[test]
    fn rejects_empty_factor() {
        assert!(IndexSpace::with_factors(vec![2, 0]).is_err());
        assert!(IndexSpace::with_factors(vec![]).is_err());
    }

    proptest! {
        #[test]
        fn flatten_unflatten_round_trip(factors in prop::collection::vec(1usize..5, 1..4), seed in any::<usize>()) {
            let s = IndexSpace::with_factors(factors).unwrap();
            let i = seed % s.size();
            prop_assert_eq!(s.flatten(&s.unflatten(i)).unwrap(), i);
        }
    }
}
