//! The `N_m` and `M_m` channel families and their output permutations.

use super::{Channel, ChannelError, IndexSpace};
use crate::scalar::Scalar;

/// Cyclic shift on the nonzero symbols `{1..m-1}`, fixing 0:
/// `i2 -> ((i2 - 1 + shift) mod (m - 1)) + 1`.
///
/// For `m = 3`, shift 0 is the identity and shift 1 swaps 1 and 2.
pub fn pi_perm(m: usize, shift: usize, i2: usize) -> Result<usize, ChannelError> {
    if m < 2 || i2 >= m || shift + 1 >= m {
        return Err(ChannelError::Parameters(format!(
            "pi_perm needs m >= 2, i2 < m, shift < m-1; got m={m}, shift={shift}, i2={i2}"
        )));
    }
    Ok(perm_unchecked(m, shift, i2))
}

pub(crate) fn perm_unchecked(m: usize, shift: usize, i2: usize) -> usize {
    if i2 == 0 {
        0
    } else {
        (i2 - 1 + shift) % (m - 1) + 1
    }
}

/// Additive inverse modulo `m`: `u + pi_hat(m, u) = 0 (mod m)`.
pub fn pi_hat(m: usize, u: usize) -> Result<usize, ChannelError> {
    if u >= m {
        return Err(ChannelError::IndexOutOfRange { index: u, size: m });
    }
    Ok((m - u) % m)
}

/// The channel `N_m`.
///
/// Inputs `(i1, i2)` in `{0,1} x {0..m-1}`; outputs `(o1, o2)` with `o1`
/// labelled `1..m+1` and `o2` in `{0..m-1}`. Every input spreads uniformly
/// over `o1` with weight `1/(m+1)`, and `o2` is determined by
///
/// * `o1 = 1`: `o2 = i1`
/// * `o1 = 2`: `o2 = i2`
/// * `o1 = l >= 3`: `o2 = i1 + pi_perm(m, l-3, i2) (mod m)`
///
/// For `m = 2` this is the same channel as [`m_channel`]`(2)` with the two
/// non-trivial `o1` values swapped.
pub fn n_channel<T: Scalar>(m: usize) -> Result<Channel<T>, ChannelError> {
    if m < 2 {
        return Err(ChannelError::Parameters(format!("N_m needs m >= 2, got {m}")));
    }
    let input = IndexSpace::new(vec![2, m], vec![0, 0])?;
    let output = IndexSpace::new(vec![m + 1, m], vec![1, 0])?;
    let n_out = output.size();
    let w = T::from_ratio(1, (m + 1) as i64);
    let mut matrix = vec![T::zero(); input.size() * n_out];
    for i1 in 0..2 {
        for i2 in 0..m {
            let col = input.flatten(&[i1, i2])? * n_out;
            for o1 in 0..=m {
                let o2 = match o1 {
                    0 => i1,
                    1 => i2,
                    l => (i1 + perm_unchecked(m, l - 2, i2)) % m,
                };
                matrix[col + o1 * m + o2] = w.clone();
            }
        }
    }
    Ok(Channel::from_flat(input, output, matrix))
}

/// The channel `M_m`.
///
/// Inputs `(i1, i2)` in `{0..m-1} x {0,1}`; outputs `(o1, o2)` with `o1`
/// labelled `1..m(m-1)+1` and `o2` in `{0..m-1}`, each `o1` with weight
/// `1/(m(m-1)+1)`. Label `o1 = 1` reveals `o2 = i1`. The remaining labels
/// form `m` blocks of `m-1`; block `j` covers `(m-1)j+2 ..= (m-1)j+m` and,
/// at position `s` inside the block, emits
/// `o2 = i1 + pi_perm(m, s, i2 XOR [i1 = j]) (mod m)`, with no flip in block 0.
///
/// This is the block form with the `[i1 = j]` flip; the compact main-text
/// formula without the flip does not produce the reference 21x6 matrix for
/// `m = 3` and does not support the `log m`-bit protocol, so it is not used.
pub fn m_channel<T: Scalar>(m: usize) -> Result<Channel<T>, ChannelError> {
    if m < 2 {
        return Err(ChannelError::Parameters(format!("M_m needs m >= 2, got {m}")));
    }
    let labels = m * (m - 1) + 1;
    let input = IndexSpace::new(vec![m, 2], vec![0, 0])?;
    let output = IndexSpace::new(vec![labels, m], vec![1, 0])?;
    let n_out = output.size();
    let w = T::from_ratio(1, labels as i64);
    let mut matrix = vec![T::zero(); input.size() * n_out];
    for i1 in 0..m {
        for i2 in 0..2 {
            let col = input.flatten(&[i1, i2])? * n_out;
            matrix[col + i1] = w.clone();
            for j in 0..m {
                let flipped = if j != 0 && i1 == j { i2 ^ 1 } else { i2 };
                for s in 0..m - 1 {
                    let o1 = 1 + (m - 1) * j + s;
                    let o2 = (i1 + perm_unchecked(m, s, flipped)) % m;
                    matrix[col + o1 * m + o2] = w.clone();
                }
            }
        }
    }
    Ok(Channel::from_flat(input, output, matrix))
}

/// Block index `j` and in-block position `s` of the 0-based `o1` digit of
/// `M_m`, or `None` for the first label.
pub(crate) fn m_block(m: usize, o1_digit: usize) -> Option<(usize, usize)> {
    if o1_digit == 0 {
        None
    } else {
        let k = o1_digit - 1;
        Some((k / (m - 1), k % (m - 1)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    fn p<T: Scalar>(c: &Channel<T>, out: [usize; 2], inp: [usize; 2]) -> T {
        let o = c.output_space().flatten_labels(&out).unwrap();
        let i = c.input_space().flatten(&inp).unwrap();
        c.prob(o, i).clone()
    }

    #[test]
    fn pi_perm_values() {
        assert_eq!(pi_perm(3, 1, 1).unwrap(), 2);
        assert_eq!(pi_perm(3, 1, 2).unwrap(), 1);
        for m in 2..8 {
            for s in 0..m - 1 {
                assert_eq!(pi_perm(m, s, 0).unwrap(), 0);
            }
        }
        assert!(pi_perm(3, 2, 1).is_err());
        assert!(pi_perm(3, 0, 3).is_err());
    }

    #[test]
    fn pi_perm_is_bijection() {
        for m in 2..9 {
            for s in 0..m - 1 {
                let mut seen = vec![false; m];
                for i in 0..m {
                    seen[pi_perm(m, s, i).unwrap()] = true;
                }
                assert!(seen.iter().all(|&v| v), "m={m} s={s}");
            }
        }
        assert!((0..3).all(|i| pi_perm(3, 0, i).unwrap() == i));
    }

    #[test]
    fn pi_hat_values() {
        assert_eq!(pi_hat(3, 1).unwrap(), 2);
        assert_eq!(pi_hat(3, 0).unwrap(), 0);
        assert_eq!(pi_hat(5, 3).unwrap(), 2);
        assert!(pi_hat(3, 3).is_err());
        for m in 2..8 {
            for u in 0..m {
                assert_eq!((u + pi_hat(m, u).unwrap()) % m, 0);
            }
        }
    }

    #[test]
    fn n3_spot_entries() {
        let n3 = n_channel::<Rational>(3).unwrap();
        assert_eq!(p(&n3, [1, 0], [0, 0]), q(1, 4));
        assert_eq!(p(&n3, [3, 0], [1, 2]), q(1, 4));
        assert_eq!(p(&n3, [4, 2], [0, 1]), q(1, 4));
        assert_eq!(p(&n3, [1, 1], [0, 0]), q(0, 1));
        assert_eq!(n3.input_count(), 6);
        assert_eq!(n3.output_count(), 12);
    }

    #[test]
    fn n_m_columns_have_uniform_support() {
        for m in 2..=8 {
            let c = n_channel::<Rational>(m).unwrap();
            assert!(c.validate().is_valid());
            for i in 0..c.input_count() {
                let support: Vec<_> = c.support(i).collect();
                assert_eq!(support.len(), m + 1);
                for o in support {
                    assert_eq!(*c.prob(o, i), q(1, (m + 1) as i64));
                }
            }
        }
    }

    fn shared_outputs(c: &Channel<Rational>, u: usize, v: usize) -> Vec<usize> {
        let su: Vec<_> = c.support(u).collect();
        c.support(v).filter(|o| su.contains(o)).collect()
    }

    #[test]
    fn n_m_equal_i1_pairs_share_first_label() {
        for m in 2..=8 {
            let c = n_channel::<Rational>(m).unwrap();
            for i1 in 0..2 {
                let expected = c.output_space().flatten_labels(&[1, i1]).unwrap();
                for k in 0..m {
                    for k2 in k + 1..m {
                        let u = c.input_space().flatten(&[i1, k]).unwrap();
                        let v = c.input_space().flatten(&[i1, k2]).unwrap();
                        assert_eq!(shared_outputs(&c, u, v), vec![expected], "m={m}");
                    }
                }
            }
        }
    }

    #[test]
    fn n_m_cross_pairs() {
        // Each o1 >= 2 gives exactly m collisions between the two halves, so
        // there are m^2 collisions in total for the m^2 cross pairs.
        for m in 2..=8 {
            let c = n_channel::<Rational>(m).unwrap();
            let mut total = 0;
            let mut disjoint = 0;
            for k in 0..m {
                for k2 in 0..m {
                    let u = c.input_space().flatten(&[0, k]).unwrap();
                    let v = c.input_space().flatten(&[1, k2]).unwrap();
                    let n = shared_outputs(&c, u, v).len();
                    total += n;
                    disjoint += usize::from(n == 0);
                }
            }
            assert_eq!(total, m * m, "m={m}");
            // With cyclic shifts the collisions only spread over every cross
            // pair for m <= 3; from m = 4 on, (m-1)(m-3) pairs are left
            // disjoint.
            let expected_disjoint = (m - 1) * m.saturating_sub(3);
            assert_eq!(disjoint, expected_disjoint, "m={m}");
        }
    }

    #[test]
    fn m3_spot_entries() {
        let m3 = m_channel::<Rational>(3).unwrap();
        assert_eq!(p(&m3, [2, 0], [0, 0]), q(1, 7));
        assert_eq!(p(&m3, [4, 0], [2, 1]), q(1, 7));
        assert_eq!(p(&m3, [7, 2], [0, 1]), q(1, 7));
        assert_eq!(p(&m3, [5, 0], [1, 0]), q(1, 7));
        assert_eq!(p(&m3, [5, 0], [0, 0]), q(1, 7));
    }

    #[test]
    fn m_m_structure() {
        for m in 2..=6 {
            let c = m_channel::<Rational>(m).unwrap();
            let labels = m * (m - 1) + 1;
            assert!(c.validate().is_valid());
            for i in 0..c.input_count() {
                assert_eq!(c.support(i).count(), labels);
                for o in c.support(i) {
                    assert_eq!(*c.prob(o, i), q(1, labels as i64));
                }
            }
            for o in 0..c.output_count() {
                let hits = (0..c.input_count()).filter(|&i| c.prob(o, i).is_possible()).count();
                assert_eq!(hits, 2, "m={m} output {}", c.output_space().label_string(o));
            }
        }
    }

    #[test]
    fn m3_block_sets_intersect() {
        // For each block j != 0 and each i2, the outputs reachable inside the
        // block from (j, i2) meet those from every (i1 != j, i2).
        let m = 3;
        let c = m_channel::<Rational>(m).unwrap();
        let block_support = |i1: usize, i2: usize, j: usize| -> Vec<usize> {
            let i = c.input_space().flatten(&[i1, i2]).unwrap();
            c.support(i)
                .filter(|&o| m_block(m, o / m).map(|(bj, _)| bj) == Some(j))
                .collect()
        };
        for j in 1..m {
            for i2 in 0..2 {
                let anchor = block_support(j, i2, j);
                for i1 in (0..m).filter(|&i1| i1 != j) {
                    let other = block_support(i1, i2, j);
                    assert!(other.iter().any(|o| anchor.contains(o)), "j={j} i1={i1} i2={i2}");
                }
            }
        }
    }

    #[test]
    fn n2_equals_m2_after_swapping_labels() {
        let n2 = n_channel::<Rational>(2).unwrap();
        let m2 = m_channel::<Rational>(2).unwrap();
        // o1 labels 2 and 3 trade places; o1 = 1 and all o2 stay.
        let relabel = |o: usize| -> usize {
            let (o1, o2) = (o / 2, o % 2);
            let o1 = match o1 {
                1 => 2,
                2 => 1,
                other => other,
            };
            o1 * 2 + o2
        };
        for i in 0..4 {
            for o in 0..6 {
                assert_eq!(n2.prob(o, i), m2.prob(relabel(o), i));
            }
        }
    }

    #[test]
    fn family_parameter_errors() {
        assert!(n_channel::<Rational>(1).is_err());
        assert!(m_channel::<Rational>(1).is_err());
    }
}
