//! Named behavior families: extremal no-signaling boxes and local points.

use super::{Behavior, BehaviorError, Scenario};
use crate::scalar::Scalar;

/// The full-or-partial-output extremal box in the 2-2-`m` scenario.
///
/// `p(a,b|x,y) = 1/k` when `a, b < k` and `(b - a) mod k = x*y`, zero
/// otherwise. `k = m` gives the full-output box; `m = k = 2` is the PR box.
pub fn extremal_box<T: Scalar>(m: usize, k: usize) -> Result<Behavior<T>, BehaviorError> {
    if k < 2 || k > m {
        return Err(BehaviorError::Parameters(format!(
            "extremal box needs 2 <= k <= m, got m={m}, k={k}"
        )));
    }
    let w = T::from_ratio(1, k as i64);
    Behavior::from_fn(Scenario::new(2, 2, m, m)?, |x, y, a, b| {
        if a < k && b < k && (b + k - a) % k == x * y {
            w.clone()
        } else {
            T::zero()
        }
    })
}

/// `a XOR b = x*y` with weight 1/2.
pub fn pr_box<T: Scalar>() -> Behavior<T> {
    extremal_box(2, 2).expect("2-2-2 box is well formed")
}

/// The 2-outcome, `m`-input box with `a XOR b = [x = y != 0]`.
pub fn rtilde_box<T: Scalar>(m: usize) -> Result<Behavior<T>, BehaviorError> {
    if m < 2 {
        return Err(BehaviorError::Parameters(format!("rtilde box needs m >= 2, got {m}")));
    }
    let half = T::from_ratio(1, 2);
    Behavior::from_fn(Scenario::new(m, m, 2, 2)?, |x, y, a, b| {
        let parity = usize::from(x == y && x != 0);
        if (a ^ b) == parity {
            half.clone()
        } else {
            T::zero()
        }
    })
}

/// Extremal 2-outcome box with `m1` and `m2` inputs:
/// `a XOR b = [x=1][y=1] + sum_{(i,j) in extra} [x=i][y=j] (mod 2)`.
///
/// `extra` must avoid `(1,1)` and stay inside `{1..m1-1} x {1..m2-1}`.
pub fn jones_box<T: Scalar>(
    m1: usize,
    m2: usize,
    extra: &[(usize, usize)],
) -> Result<Behavior<T>, BehaviorError> {
    if m1 < 2 || m2 < 2 {
        return Err(BehaviorError::Parameters(format!(
            "jones box needs m1, m2 >= 2, got ({m1}, {m2})"
        )));
    }
    for &(i, j) in extra {
        if (i, j) == (1, 1) || i == 0 || j == 0 || i >= m1 || j >= m2 {
            return Err(BehaviorError::Parameters(format!(
                "pair ({i}, {j}) not allowed in the extra set"
            )));
        }
    }
    let half = T::from_ratio(1, 2);
    Behavior::from_fn(Scenario::new(m1, m2, 2, 2)?, |x, y, a, b| {
        let mut parity = usize::from(x == 1 && y == 1);
        parity += extra.iter().filter(|&&(i, j)| i == x && j == y).count();
        if (a ^ b) == parity % 2 {
            half.clone()
        } else {
            T::zero()
        }
    })
}

/// `p(a,b|x,y) = [a = fa[x]] * [b = fb[y]]`.
pub fn local_deterministic<T: Scalar>(
    fa: &[usize],
    fb: &[usize],
    a_card: usize,
    b_card: usize,
) -> Result<Behavior<T>, BehaviorError> {
    if fa.iter().any(|&a| a >= a_card) || fb.iter().any(|&b| b >= b_card) {
        return Err(BehaviorError::Parameters(
            "deterministic map points outside the outcome alphabet".into(),
        ));
    }
    let scenario = Scenario::new(fa.len(), fb.len(), a_card, b_card)?;
    Behavior::from_fn(scenario, |x, y, a, b| {
        if fa[x] == a && fb[y] == b {
            T::one()
        } else {
            T::zero()
        }
    })
}

/// One input and one outcome per party: a box that carries no correlation.
pub fn degenerate_box<T: Scalar>() -> Behavior<T> {
    Behavior {
        scenario: Scenario {
            x_card: 1,
            y_card: 1,
            a_card: 1,
            b_card: 1,
        },
        p: vec![T::one()],
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    // Printed P_3 table, rows (x,y), columns (a,b) in row-major order.
    const P3_ROWS: [[(i64, i64); 9]; 4] = [
        [(1, 3), (0, 1), (0, 1), (0, 1), (1, 3), (0, 1), (0, 1), (0, 1), (1, 3)],
        [(1, 3), (0, 1), (0, 1), (0, 1), (1, 3), (0, 1), (0, 1), (0, 1), (1, 3)],
        [(1, 3), (0, 1), (0, 1), (0, 1), (1, 3), (0, 1), (0, 1), (0, 1), (1, 3)],
        [(0, 1), (1, 3), (0, 1), (0, 1), (0, 1), (1, 3), (1, 3), (0, 1), (0, 1)],
    ];

    #[test]
    fn p3_matches_reference_table() {
        let p3 = extremal_box::<Rational>(3, 3).unwrap();
        for (row, xy) in [(0, 0), (0, 1), (1, 0), (1, 1)].iter().enumerate() {
            for col in 0..9 {
                let (n, d) = P3_ROWS[row][col];
                assert_eq!(*p3.get(xy.0, xy.1, col / 3, col % 3), q(n, d), "row {xy:?} col {col}");
            }
        }
        assert_eq!(*p3.get(1, 1, 0, 1), q(1, 3));
        assert_eq!(*p3.get(0, 0, 0, 1), q(0, 1));
    }

    #[test]
    fn partial_output_box() {
        let b = extremal_box::<Rational>(4, 2).unwrap();
        assert_eq!(*b.get(1, 1, 0, 1), q(1, 2));
        assert_eq!(*b.get(0, 0, 3, 3), q(0, 1));
        assert!(b.is_no_signaling(0.0).0);
    }

    #[test]
    fn extremal_box_parameter_errors() {
        assert!(extremal_box::<Rational>(3, 1).is_err());
        assert!(extremal_box::<Rational>(3, 4).is_err());
    }

    #[test]
    fn pr_box_is_xor_rule() {
        let pr = pr_box::<Rational>();
        for x in 0..2 {
            for y in 0..2 {
                for a in 0..2 {
                    for b in 0..2 {
                        let expected = if a ^ b == x * y { q(1, 2) } else { q(0, 1) };
                        assert_eq!(*pr.get(x, y, a, b), expected);
                    }
                }
            }
        }
    }

    // Printed R~_3 table: rows (a,b), columns (x,y) row-major; entries in halves.
    const RTILDE3_HALVES: [[i64; 9]; 4] = [
        [1, 1, 1, 1, 0, 1, 1, 1, 0],
        [0, 0, 0, 0, 1, 0, 0, 0, 1],
        [0, 0, 0, 0, 1, 0, 0, 0, 1],
        [1, 1, 1, 1, 0, 1, 1, 1, 0],
    ];

    #[test]
    fn rtilde3_matches_reference_table() {
        let r = rtilde_box::<Rational>(3).unwrap();
        for ab in 0..4 {
            for xy in 0..9 {
                assert_eq!(
                    *r.get(xy / 3, xy % 3, ab / 2, ab % 2),
                    q(RTILDE3_HALVES[ab][xy], 2),
                    "ab {ab} xy {xy}"
                );
            }
        }
        assert!(rtilde_box::<Rational>(1).is_err());
    }

    #[test]
    fn jones_box_reduces_to_known_boxes() {
        assert_eq!(jones_box::<Rational>(2, 2, &[]).unwrap(), pr_box());
        assert_eq!(
            jones_box::<Rational>(3, 3, &[(2, 2)]).unwrap(),
            rtilde_box(3).unwrap()
        );
        let j = jones_box::<Rational>(3, 3, &[]).unwrap();
        assert_eq!(*j.get(2, 2, 0, 0), q(1, 2));
        assert_eq!(*j.get(2, 2, 1, 1), q(1, 2));
        assert_eq!(*j.get(2, 2, 0, 1), q(0, 1));
    }

    #[test]
    fn jones_box_rejects_bad_pairs() {
        assert!(jones_box::<Rational>(3, 3, &[(1, 1)]).is_err());
        assert!(jones_box::<Rational>(3, 3, &[(3, 1)]).is_err());
        assert!(jones_box::<Rational>(3, 3, &[(0, 2)]).is_err());
    }

    #[test]
    fn constant_deterministic_point() {
        let d = local_deterministic::<Rational>(&[0, 0], &[0, 0], 2, 2).unwrap();
        for x in 0..2 {
            for y in 0..2 {
                assert_eq!(*d.get(x, y, 0, 0), q(1, 1));
            }
        }
        assert!(local_deterministic::<Rational>(&[2], &[0], 2, 2).is_err());
    }
}
