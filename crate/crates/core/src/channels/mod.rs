//! Column-stochastic classical channels over tuple-labelled alphabets.

mod families;
mod index;

pub use families::{m_channel, n_channel, pi_hat, pi_perm};
pub(crate) use families::{m_block, perm_unchecked};
pub use index::IndexSpace;

use std::fmt;

use rand::RngCore;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::sampling::DiscreteSampler;
use crate::scalar::{Scalar, FLOAT_TOL, POSITIVE_EPS};

#[derive(Debug, Error, PartialEq)]
pub enum ChannelError {
    #[error("matrix shape mismatch: {0}")]
    Shape(String),
    #[error("invalid channel: {0}")]
    Invalid(ChannelReport),
    #[error("invalid parameters: {0}")]
    Parameters(String),
    #[error("index {index} out of range for {size} symbols")]
    IndexOutOfRange { index: usize, size: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub enum ChannelViolation {
    Negative { output: usize, input: usize },
    ColumnSum { input: usize, sum: String },
}

impl fmt::Display for ChannelViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ChannelViolation::Negative { output, input } => {
                write!(f, "negative entry p({output}|{input})")
            }
            ChannelViolation::ColumnSum { input, sum } => {
                write!(f, "column {input} sums to {sum}")
            }
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ChannelReport {
    pub violations: Vec<ChannelViolation>,
}

impl ChannelReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ChannelReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.violations.iter().map(|v| v.to_string()).collect();
        f.write_str(&parts.join("; "))
    }
}

/// Column-stochasticity report for raw columns (one `Vec` per input).
pub fn validate_columns<T: Scalar>(columns: &[Vec<T>]) -> ChannelReport {
    let mut report = ChannelReport::default();
    for (input, col) in columns.iter().enumerate() {
        let mut sum = T::zero();
        for (output, v) in col.iter().enumerate() {
            if *v < T::zero() && !v.close_to(&T::zero(), POSITIVE_EPS) {
                report.violations.push(ChannelViolation::Negative { output, input });
            }
            sum = sum + v.clone();
        }
        if !sum.close_to(&T::one(), FLOAT_TOL) {
            report.violations.push(ChannelViolation::ColumnSum {
                input,
                sum: sum.to_string(),
            });
        }
    }
    report
}

/// A stochastic matrix `p(o|i)`, stored one column per input.
#[derive(Debug, Clone, PartialEq)]
pub struct Channel<T> {
    input: IndexSpace,
    output: IndexSpace,
    matrix: Vec<T>,
}

impl<T: Scalar> Channel<T> {
    /// Builds a channel from columns; `columns[i][o] = p(o|i)`.
    pub fn new(
        input: IndexSpace,
        output: IndexSpace,
        columns: Vec<Vec<T>>,
    ) -> Result<Self, ChannelError> {
        if columns.len() != input.size() {
            return Err(ChannelError::Shape(format!(
                "{} columns for {} inputs",
                columns.len(),
                input.size()
            )));
        }
        if let Some((i, c)) = columns.iter().enumerate().find(|(_, c)| c.len() != output.size()) {
            return Err(ChannelError::Shape(format!(
                "column {i} has {} entries for {} outputs",
                c.len(),
                output.size()
            )));
        }
        let report = validate_columns(&columns);
        if !report.is_valid() {
            return Err(ChannelError::Invalid(report));
        }
        Ok(Channel {
            input,
            output,
            matrix: columns.into_iter().flatten().collect(),
        })
    }

    pub(crate) fn from_flat(input: IndexSpace, output: IndexSpace, matrix: Vec<T>) -> Self {
        debug_assert_eq!(matrix.len(), input.size() * output.size());
        Channel {
            input,
            output,
            matrix,
        }
    }

    /// Noiseless channel on `n` symbols.
    pub fn identity(n: usize) -> Self {
        let mut matrix = vec![T::zero(); n * n];
        for i in 0..n {
            matrix[i * n + i] = T::one();
        }
        Channel::from_flat(IndexSpace::flat(n), IndexSpace::flat(n), matrix)
    }

    pub fn input_space(&self) -> &IndexSpace {
        &self.input
    }

    pub fn output_space(&self) -> &IndexSpace {
        &self.output
    }

    pub fn input_count(&self) -> usize {
        self.input.size()
    }

    pub fn output_count(&self) -> usize {
        self.output.size()
    }

    /// `p(output | input)`.
    pub fn prob(&self, output: usize, input: usize) -> &T {
        &self.matrix[input * self.output.size() + output]
    }

    pub fn column(&self, input: usize) -> &[T] {
        let n = self.output.size();
        &self.matrix[input * n..(input + 1) * n]
    }

    /// Outputs reachable from `input` with positive probability.
    pub fn support(&self, input: usize) -> impl Iterator<Item = usize> + '_ {
        self.column(input)
            .iter()
            .enumerate()
            .filter(|(_, v)| v.is_possible())
            .map(|(o, _)| o)
    }

    pub fn validate(&self) -> ChannelReport {
        let columns: Vec<Vec<T>> = (0..self.input_count()).map(|i| self.column(i).to_vec()).collect();
        validate_columns(&columns)
    }

    /// Parallel use of two channels; inputs and outputs flatten row-major
    /// with the first channel most significant.
    pub fn tensor(&self, other: &Channel<T>) -> Channel<T> {
        let input = self.input.product(&other.input);
        let output = self.output.product(&other.output);
        let (n2_in, n2_out) = (other.input_count(), other.output_count());
        let n_out = output.size();
        let mut matrix = vec![T::zero(); input.size() * n_out];
        for i1 in 0..self.input_count() {
            for i2 in 0..n2_in {
                let col = (i1 * n2_in + i2) * n_out;
                for o1 in 0..self.output_count() {
                    let p1 = self.prob(o1, i1);
                    if p1.is_zero() {
                        continue;
                    }
                    for o2 in 0..n2_out {
                        matrix[col + o1 * n2_out + o2] = p1.clone() * other.prob(o2, i2).clone();
                    }
                }
            }
        }
        Channel::from_flat(input, output, matrix)
    }

    /// Draws one output for `input`, deterministic in `seed`.
    pub fn sample_output(&self, input: usize, seed: u64) -> Result<usize, ChannelError> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Ok(self.sampler(input)?.sample(rng.next_u64()))
    }

    pub(crate) fn sampler(&self, input: usize) -> Result<DiscreteSampler, ChannelError> {
        if input >= self.input_count() {
            return Err(ChannelError::IndexOutOfRange {
                index: input,
                size: self.input_count(),
            });
        }
        Ok(DiscreteSampler::new(self.column(input)))
    }

    pub fn map_scalar<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Channel<U> {
        Channel {
            input: self.input.clone(),
            output: self.output.clone(),
            matrix: self.matrix.iter().map(f).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    #[test]
    fn identity_is_valid() {
        let c = Channel::<Rational>::identity(5);
        assert!(c.validate().is_valid());
        assert_eq!(c.support(3).collect::<Vec<_>>(), vec![3]);
    }

    #[test]
    fn short_column_reported() {
        let columns = vec![vec![0.5, 0.4], vec![0.0, 1.0]];
        let err = Channel::new(IndexSpace::flat(2), IndexSpace::flat(2), columns).unwrap_err();
        match err {
            ChannelError::Invalid(r) => {
                assert_eq!(r.violations.len(), 1);
                assert!(matches!(r.violations[0], ChannelViolation::ColumnSum { input: 0, .. }));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn shape_mismatch() {
        let columns = vec![vec![q(1, 1)]];
        assert!(matches!(
            Channel::new(IndexSpace::flat(2), IndexSpace::flat(1), columns),
            Err(ChannelError::Shape(_))
        ));
    }

    #[test]
    fn tensor_identity() {
        let i2 = Channel::<Rational>::identity(2);
        let i3 = Channel::<Rational>::identity(3);
        let t = i2.tensor(&i3);
        for i in 0..6 {
            for o in 0..6 {
                let expected = if i == o { q(1, 1) } else { q(0, 1) };
                assert_eq!(*t.prob(o, i), expected);
            }
        }
        assert_eq!(t.input_space().factors(), &[2, 3]);
    }

    #[test]
    fn tensor_of_n2_entry() {
        let n2 = n_channel::<Rational>(2).unwrap();
        let t = n2.tensor(&n2);
        // ((1,0),(1,0)) given ((0,0),(0,0)), labels with o1 offset 1.
        let o = t.output_space().flatten_labels(&[1, 0, 1, 0]).unwrap();
        let i = t.input_space().flatten(&[0, 0, 0, 0]).unwrap();
        assert_eq!(*t.prob(o, i), q(1, 9));
        assert!(t.validate().is_valid());
    }

    #[test]
    fn identity_sampling_and_bad_input() {
        let c = Channel::<Rational>::identity(8);
        for seed in 0..20 {
            assert_eq!(c.sample_output(5, seed).unwrap(), 5);
        }
        assert!(c.sample_output(8, 0).is_err());
    }

    #[test]
    fn sampling_is_deterministic_in_seed() {
        let c = n_channel::<Rational>(3).unwrap();
        let a: Vec<_> = (0..10).map(|s| c.sample_output(0, s).unwrap()).collect();
        let b: Vec<_> = (0..10).map(|s| c.sample_output(0, s).unwrap()).collect();
        assert_eq!(a, b);
    }
}
