use std::f64::consts::PI;

use crate::behaviors::{Behavior, Scenario};
use crate::scalar::{Rational, Scalar};

pub const CGLMP_ETA: f64 = 1.0 / 54.0;

fn cosec2(t: f64) -> f64 {
    1.0 / (t.sin() * t.sin())
}

// Row (x,y), then one letter per (a,b) in row-major order:
// A = cosec^2(pi/12), B = cosec^2(pi/4), C = cosec^2(5pi/12).
const CGLMP_PATTERN: [&str; 4] = ["ACBBACCBA", "ABCCABBCA", "ABCCABBCA", "BACCBAACB"];

/// The two-qutrit correlation of the maximally entangled state under the
/// optimal CGLMP measurements, from its closed form. Entries are
/// `cosec^2` values at `pi/12`, `pi/4` and `5pi/12`, scaled by 1/54.
pub fn make_cglmp_behavior() -> Behavior<f64> {
    let scenario = Scenario { x_card: 2, y_card: 2, a_card: 3, b_card: 3 };
    Behavior::from_fn(scenario, |x, y, a, b| {
        let letter = CGLMP_PATTERN[2 * x + y].as_bytes()[3 * a + b];
        let angle = match letter {
            b'A' => PI / 12.0,
            b'B' => PI / 4.0,
            _ => 5.0 * PI / 12.0,
        };
        CGLMP_ETA * cosec2(angle)
    })
    .expect("rows sum to one")
}

/// `(1/4)[1 + C^2(pi/4)/36 + C^2(5pi/12)/18 + C^2(pi/12)/6]` with `C = cosec`.
pub fn cglmp_closed_form_success() -> f64 {
    0.25 * (1.0 + cosec2(PI / 4.0) / 36.0 + cosec2(5.0 * PI / 12.0) / 18.0 + cosec2(PI / 12.0) / 6.0)
}

/// The dyadic two-qubit correlation table in the 3-3-2-2 scenario, as
/// printed: rows `(a,b)`, columns `(x,y)`.
pub fn i3322_table() -> Behavior<Rational> {
    const SAME: [(i64, i64); 9] = [(3, 8), (3, 8), (1, 2), (1, 2), (1, 8), (3, 8), (3, 8), (1, 2), (1, 8)];
    const DIFF: [(i64, i64); 9] = [(1, 8), (1, 8), (0, 1), (0, 1), (3, 8), (1, 8), (1, 8), (0, 1), (3, 8)];
    let scenario = Scenario { x_card: 3, y_card: 3, a_card: 2, b_card: 2 };
    Behavior::from_fn(scenario, |x, y, a, b| {
        let (n, d) = if a == b { SAME[3 * x + y] } else { DIFF[3 * x + y] };
        Rational::from_ratio(n, d)
    })
    .expect("columns sum to one")
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn cosecant_identity() {
        let (a, b, c) = (cosec2(PI / 12.0), cosec2(PI / 4.0), cosec2(5.0 * PI / 12.0));
        assert_abs_diff_eq!(a + b + c, 18.0, epsilon = 1e-12);
        assert_abs_diff_eq!(a, 14.928203230275509, epsilon = 1e-12);
        assert_abs_diff_eq!(b, 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(c, 1.0717967697244908, epsilon = 1e-12);
    }

    #[test]
    fn cglmp_entries_and_marginals() {
        let p = make_cglmp_behavior();
        assert_abs_diff_eq!(*p.get(0, 0, 0, 0), 14.928203230275509 / 54.0, epsilon = 1e-12);
        assert_abs_diff_eq!(*p.get(0, 0, 0, 0), 0.276448, epsilon = 1e-6);
        assert_abs_diff_eq!(*p.get(0, 0, 0, 2), 1.0 / 27.0, epsilon = 1e-12);
        let (ns, dev) = p.is_no_signaling(1e-12);
        assert!(ns, "violation {dev}");
        for x in 0..2 {
            for y in 0..2 {
                for a in 0..3 {
                    assert_abs_diff_eq!(p.marginal_alice(x, a, y).unwrap(), 1.0 / 3.0, epsilon = 1e-12);
                    assert_abs_diff_eq!(p.marginal_bob(y, a, x).unwrap(), 1.0 / 3.0, epsilon = 1e-12);
                }
            }
        }
    }

    #[test]
    fn closed_form_success_value() {
        assert_abs_diff_eq!(cglmp_closed_form_success(), 0.9008, epsilon = 5e-5);
    }

    #[test]
    fn i3322_table_entries() {
        let t = i3322_table();
        let q = Rational::from_ratio;
        assert_eq!(*t.get(1, 1, 0, 0), q(1, 8));
        assert_eq!(*t.get(2, 2, 0, 1), q(3, 8));
        assert_eq!(*t.get(0, 2, 1, 1), q(1, 2));
        assert_eq!(*t.get(2, 1, 0, 1), q(0, 1));
        assert_eq!(t.is_no_signaling(0.0), (true, 0.0));
        for x in 0..3 {
            for y in 0..3 {
                for a in 0..2 {
                    assert_eq!(t.marginal_alice(x, a, y).unwrap(), q(1, 2));
                }
            }
        }
    }
}
