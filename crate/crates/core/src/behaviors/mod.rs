//! Bipartite input/output behaviors `p(a,b|x,y)`.

mod bell;
mod families;

pub use bell::{BellFunctional, DEFAULT_LOCAL_LIMIT};
pub(crate) use bell::advance;
pub use families::{
    degenerate_box, extremal_box, jones_box, local_deterministic, pr_box, rtilde_box,
};

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scalar::{Scalar, FLOAT_TOL};

#[derive(Debug, Error, PartialEq)]
pub enum BehaviorError {
    #[error("every cardinality of a scenario must be at least 1")]
    EmptyScenario,
    #[error("table has {got} entries, scenario needs {expected}")]
    Shape { expected: usize, got: usize },
    #[error("invalid behavior: {0}")]
    Invalid(ValidationReport),
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),
    #[error("conditioning on an outcome of probability zero (x={x}, a={a})")]
    ZeroProbabilityCondition { x: usize, a: usize },
    #[error("invalid parameters: {0}")]
    Parameters(String),
    #[error("scenario mismatch: {0:?} vs {1:?}")]
    ScenarioMismatch(Scenario, Scenario),
    #[error("local bound needs {count} deterministic strategies, limit is {limit}")]
    LimitExceeded { count: u128, limit: u128 },
}

/// Cardinalities of a two-party scenario.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Scenario {
    #[serde(rename = "x")]
    pub x_card: usize,
    #[serde(rename = "y")]
    pub y_card: usize,
    #[serde(rename = "a")]
    pub a_card: usize,
    #[serde(rename = "b")]
    pub b_card: usize,
}

impl Scenario {
    pub fn new(x_card: usize, y_card: usize, a_card: usize, b_card: usize) -> Result<Self, BehaviorError> {
        if x_card == 0 || y_card == 0 || a_card == 0 || b_card == 0 {
            return Err(BehaviorError::EmptyScenario);
        }
        Ok(Scenario {
            x_card,
            y_card,
            a_card,
            b_card,
        })
    }

    pub fn len(&self) -> usize {
        self.x_card * self.y_card * self.a_card * self.b_card
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Row-major position of `(x, y, a, b)`.
    pub fn index(&self, x: usize, y: usize, a: usize, b: usize) -> usize {
        ((x * self.y_card + y) * self.a_card + a) * self.b_card + b
    }

    /// Scenario of the tensor product; each cardinality multiplies.
    pub fn product(&self, other: &Scenario) -> Scenario {
        Scenario {
            x_card: self.x_card * other.x_card,
            y_card: self.y_card * other.y_card,
            a_card: self.a_card * other.a_card,
            b_card: self.b_card * other.b_card,
        }
    }

    fn check(&self, x: usize, y: usize, a: usize, b: usize) -> Result<(), BehaviorError> {
        if x >= self.x_card || y >= self.y_card || a >= self.a_card || b >= self.b_card {
            return Err(BehaviorError::IndexOutOfRange(format!(
                "(x={x}, y={y}, a={a}, b={b}) in {self:?}"
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    Negative { x: usize, y: usize, a: usize, b: usize },
    Normalization { x: usize, y: usize, sum: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Negative { x, y, a, b } => {
                write!(f, "negative entry at x={x} y={y} a={a} b={b}")
            }
            Violation::Normalization { x, y, sum } => {
                write!(f, "row x={x} y={y} sums to {sum}")
            }
        }
    }
}

/// List of violated behavior constraints; empty means valid.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.violations.iter().map(|v| v.to_string()).collect();
        f.write_str(&parts.join("; "))
    }
}

/// Checks nonnegativity and per-`(x,y)` normalization of a raw table.
pub fn validate_table<T: Scalar>(scenario: &Scenario, p: &[T]) -> ValidationReport {
    let mut report = ValidationReport::default();
    if p.len() != scenario.len() {
        return report;
    }
    for x in 0..scenario.x_card {
        for y in 0..scenario.y_card {
            let mut sum = T::zero();
            for a in 0..scenario.a_card {
                for b in 0..scenario.b_card {
                    let v = &p[scenario.index(x, y, a, b)];
                    if *v < T::zero() && !v.close_to(&T::zero(), crate::scalar::POSITIVE_EPS) {
                        report.violations.push(Violation::Negative { x, y, a, b });
                    }
                    sum = sum + v.clone();
                }
            }
            if !sum.close_to(&T::one(), FLOAT_TOL) {
                report.violations.push(Violation::Normalization {
                    x,
                    y,
                    sum: sum.to_string(),
                });
            }
        }
    }
    report
}

/// A validated joint conditional distribution `p(a,b|x,y)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Behavior<T> {
    scenario: Scenario,
    p: Vec<T>,
}

impl<T: Scalar> Behavior<T> {
    /// Builds a behavior from a flat table in `x, y, a, b` row-major order.
    pub fn new(scenario: Scenario, p: Vec<T>) -> Result<Self, BehaviorError> {
        if p.len() != scenario.len() {
            return Err(BehaviorError::Shape {
                expected: scenario.len(),
                got: p.len(),
            });
        }
        let report = validate_table(&scenario, &p);
        if !report.is_valid() {
            return Err(BehaviorError::Invalid(report));
        }
        Ok(Behavior { scenario, p })
    }

    pub fn from_fn(
        scenario: Scenario,
        mut f: impl FnMut(usize, usize, usize, usize) -> T,
    ) -> Result<Self, BehaviorError> {
        let mut p = Vec::with_capacity(scenario.len());
        for x in 0..scenario.x_card {
            for y in 0..scenario.y_card {
                for a in 0..scenario.a_card {
                    for b in 0..scenario.b_card {
                        p.push(f(x, y, a, b));
                    }
                }
            }
        }
        Self::new(scenario, p)
    }

    /// `p(a,b|x,y) = 1/(a_card * b_card)` everywhere.
    pub fn uniform(scenario: Scenario) -> Self {
        let w = T::from_ratio(1, (scenario.a_card * scenario.b_card) as i64);
        Behavior {
            scenario,
            p: vec![w; scenario.len()],
        }
    }

    pub fn scenario(&self) -> &Scenario {
        &self.scenario
    }

    pub fn table(&self) -> &[T] {
        &self.p
    }

    pub fn get(&self, x: usize, y: usize, a: usize, b: usize) -> &T {
        &self.p[self.scenario.index(x, y, a, b)]
    }

    pub fn try_get(&self, x: usize, y: usize, a: usize, b: usize) -> Result<&T, BehaviorError> {
        self.scenario.check(x, y, a, b)?;
        Ok(self.get(x, y, a, b))
    }

    /// Always empty for a constructed behavior; kept for symmetry with
    /// [`validate_table`].
    pub fn validate(&self) -> ValidationReport {
        validate_table(&self.scenario, &self.p)
    }

    /// `p(a|x,y) = sum_b p(a,b|x,y)`.
    pub fn marginal_alice(&self, x: usize, a: usize, y: usize) -> Result<T, BehaviorError> {
        self.scenario.check(x, y, a, 0)?;
        Ok(self.alice_marginal_unchecked(x, a, y))
    }

    /// `p(b|x,y) = sum_a p(a,b|x,y)`.
    pub fn marginal_bob(&self, y: usize, b: usize, x: usize) -> Result<T, BehaviorError> {
        self.scenario.check(x, y, 0, b)?;
        Ok((0..self.scenario.a_card).fold(T::zero(), |acc, a| acc + self.get(x, y, a, b).clone()))
    }

    pub(crate) fn alice_marginal_unchecked(&self, x: usize, a: usize, y: usize) -> T {
        (0..self.scenario.b_card).fold(T::zero(), |acc, b| acc + self.get(x, y, a, b).clone())
    }

    /// `p(b | a, x, y) = p(a,b|x,y) / p(a|x,y)`.
    pub fn conditional_bob(
        &self,
        y: usize,
        b: usize,
        x: usize,
        a: usize,
    ) -> Result<T, BehaviorError> {
        self.scenario.check(x, y, a, b)?;
        let pa = self.alice_marginal_unchecked(x, a, y);
        if !pa.is_possible() {
            return Err(BehaviorError::ZeroProbabilityCondition { x, a });
        }
        Ok(self.get(x, y, a, b).clone() / pa)
    }

    /// No-signaling check in both directions.
    ///
    /// Returns the verdict and the largest marginal discrepancy. Rational
    /// behaviors are compared exactly and `tol` is ignored.
    pub fn is_no_signaling(&self, tol: f64) -> (bool, f64) {
        let s = self.scenario;
        let mut worst = T::zero();
        for x in 0..s.x_card {
            for a in 0..s.a_card {
                let reference = self.alice_marginal_unchecked(x, a, 0);
                for y in 1..s.y_card {
                    let d = (self.alice_marginal_unchecked(x, a, y) - reference.clone()).abs_val();
                    if d > worst {
                        worst = d;
                    }
                }
            }
        }
        for y in 0..s.y_card {
            for b in 0..s.b_card {
                let bob = |x: usize| {
                    (0..s.a_card).fold(T::zero(), |acc, a| acc + self.get(x, y, a, b).clone())
                };
                let reference = bob(0);
                for x in 1..s.x_card {
                    let d = (bob(x) - reference.clone()).abs_val();
                    if d > worst {
                        worst = d;
                    }
                }
            }
        }
        (worst.close_to(&T::zero(), tol), worst.to_f64())
    }

    /// Tensor product with row-major tuple flattening, first factor most
    /// significant: `x = x1 * x_card2 + x2` and likewise for `y`, `a`, `b`.
    pub fn tensor(&self, other: &Behavior<T>) -> Behavior<T> {
        let s1 = self.scenario;
        let s2 = other.scenario;
        let s = s1.product(&s2);
        let mut p = vec![T::zero(); s.len()];
        for x1 in 0..s1.x_card {
            for x2 in 0..s2.x_card {
                for y1 in 0..s1.y_card {
                    for y2 in 0..s2.y_card {
                        for a1 in 0..s1.a_card {
                            for a2 in 0..s2.a_card {
                                for b1 in 0..s1.b_card {
                                    for b2 in 0..s2.b_card {
                                        let idx = s.index(
                                            x1 * s2.x_card + x2,
                                            y1 * s2.y_card + y2,
                                            a1 * s2.a_card + a2,
                                            b1 * s2.b_card + b2,
                                        );
                                        p[idx] = self.get(x1, y1, a1, b1).clone()
                                            * other.get(x2, y2, a2, b2).clone();
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        Behavior { scenario: s, p }
    }

    /// Convex combination `sum_i w_i * b_i`. Weights must be nonnegative and
    /// sum to one.
    pub fn mixture(parts: &[(T, &Behavior<T>)]) -> Result<Behavior<T>, BehaviorError> {
        let first = parts
            .first()
            .ok_or_else(|| BehaviorError::Parameters("empty mixture".into()))?;
        let scenario = first.1.scenario;
        let mut p = vec![T::zero(); scenario.len()];
        for (w, b) in parts {
            if b.scenario != scenario {
                return Err(BehaviorError::ScenarioMismatch(scenario, b.scenario));
            }
            for (dst, src) in p.iter_mut().zip(&b.p) {
                *dst = dst.clone() + w.clone() * src.clone();
            }
        }
        Behavior::new(scenario, p)
    }

    pub fn map_scalar<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Result<Behavior<U>, BehaviorError> {
        Behavior::new(self.scenario, self.p.iter().map(f).collect())
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
    fn uniform_behavior_is_valid() {
        let s = Scenario::new(2, 3, 2, 4).unwrap();
        let b: Behavior<Rational> = Behavior::uniform(s);
        assert!(validate_table(&s, b.table()).is_valid());
    }

    #[test]
    fn corrupted_entry_reports_normalization_at_its_row() {
        let s = Scenario::new(2, 2, 2, 2).unwrap();
        let pr = pr_box::<Rational>();
        let mut table = pr.table().to_vec();
        let idx = table.iter().position(|v| *v == q(1, 2)).unwrap();
        table[idx] = q(1, 3);
        let report = validate_table(&s, &table);
        assert_eq!(report.violations.len(), 1);
        assert!(matches!(
            report.violations[0],
            Violation::Normalization { x: 0, y: 0, .. }
        ));
        assert!(matches!(
            Behavior::new(s, table),
            Err(BehaviorError::Invalid(_))
        ));
    }

    #[test]
    fn negative_entries_are_reported() {
        let s = Scenario::new(1, 1, 2, 1).unwrap();
        let report = validate_table(&s, &[q(3, 2), q(-1, 2)]);
        assert_eq!(report.violations, vec![Violation::Negative { x: 0, y: 0, a: 1, b: 0 }]);
    }

    #[test]
    fn empty_scenario_rejected() {
        assert_eq!(Scenario::new(0, 1, 1, 1), Err(BehaviorError::EmptyScenario));
    }

    #[test]
    fn signaling_table_detected() {
        // Alice's x=0 marginal is (1,0) under y=0 and (0,1) under y=1.
        let s = Scenario::new(1, 2, 2, 1).unwrap();
        let b = Behavior::new(s, vec![q(1, 1), q(0, 1), q(0, 1), q(1, 1)]).unwrap();
        assert_eq!(b.is_no_signaling(FLOAT_TOL), (false, 1.0));
    }

    #[test]
    fn marginals_of_p3() {
        let p3 = extremal_box::<Rational>(3, 3).unwrap();
        for y in 0..2 {
            assert_eq!(p3.marginal_alice(0, 1, y).unwrap(), q(1, 3));
        }
        assert!(p3.marginal_alice(2, 0, 0).is_err());
        assert!(p3.marginal_bob(0, 3, 0).is_err());
    }

    #[test]
    fn conditional_bob_on_p3() {
        let p3 = extremal_box::<Rational>(3, 3).unwrap();
        assert_eq!(p3.conditional_bob(1, 1, 0, 1).unwrap(), q(1, 1));
        assert_eq!(p3.conditional_bob(1, 1, 1, 0).unwrap(), q(1, 1));
        assert_eq!(p3.conditional_bob(1, 0, 1, 0).unwrap(), q(0, 1));
    }

    #[test]
    fn conditional_on_impossible_outcome_errors() {
        let det = local_deterministic::<Rational>(&[0, 0], &[0, 0], 2, 2).unwrap();
        assert_eq!(
            det.conditional_bob(0, 0, 0, 1),
            Err(BehaviorError::ZeroProbabilityCondition { x: 0, a: 1 })
        );
    }

    #[test]
    fn deterministic_marginals() {
        let det = local_deterministic::<Rational>(&[0, 1], &[0, 1], 2, 2).unwrap();
        assert_eq!(det.marginal_alice(1, 1, 0).unwrap(), q(1, 1));
        assert_eq!(det.marginal_alice(1, 0, 0).unwrap(), q(0, 1));
        assert_eq!(det.is_no_signaling(0.0), (true, 0.0));
    }

    #[test]
    fn tensor_of_pr_boxes() {
        let pr = pr_box::<Rational>();
        let t = pr.tensor(&pr);
        assert_eq!(t.scenario().len(), 256);
        assert_eq!(*t.get(0, 0, 0, 0), q(1, 4));
        assert!(t.validate().is_valid());
        assert_eq!(t.is_no_signaling(0.0), (true, 0.0));
    }

    #[test]
    fn tensor_with_a_point_rearranges_entries() {
        let p3 = extremal_box::<Rational>(3, 3).unwrap();
        let point = degenerate_box::<Rational>();
        assert_eq!(p3.tensor(&point), p3);
        assert_eq!(point.tensor(&p3), p3);
    }

    #[test]
    fn tensor_preserves_no_signaling_mixed_sizes() {
        let t = extremal_box::<Rational>(3, 3).unwrap().tensor(&pr_box());
        assert_eq!(t.is_no_signaling(0.0), (true, 0.0));
    }

    #[test]
    fn mixture_of_deterministic_points_is_diagonal() {
        let d0 = local_deterministic::<Rational>(&[0, 0], &[0, 0], 2, 2).unwrap();
        let d1 = local_deterministic::<Rational>(&[1, 1], &[1, 1], 2, 2).unwrap();
        let mix = Behavior::mixture(&[(q(1, 2), &d0), (q(1, 2), &d1)]).unwrap();
        for x in 0..2 {
            for y in 0..2 {
                assert_eq!(*mix.get(x, y, 0, 0), q(1, 2));
                assert_eq!(*mix.get(x, y, 1, 1), q(1, 2));
                assert_eq!(*mix.get(x, y, 0, 1), q(0, 1));
            }
        }
        assert!(mix.is_no_signaling(0.0).0);
    }
}
