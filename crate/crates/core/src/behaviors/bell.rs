use super::{Behavior, BehaviorError, Scenario};
use crate::scalar::{Rational, Scalar};

/// Refuse local-bound computations above this many deterministic strategies.
pub const DEFAULT_LOCAL_LIMIT: u128 = 100_000_000;

/// Linear functional `sum coeff(x,y,a,b) * p(a,b|x,y)` with rational weights.
#[derive(Debug, Clone, PartialEq)]
pub struct BellFunctional {
    scenario: Scenario,
    coefficients: Vec<Rational>,
}

impl BellFunctional {
    pub fn new(scenario: Scenario, coefficients: Vec<Rational>) -> Result<Self, BehaviorError> {
        if coefficients.len() != scenario.len() {
            return Err(BehaviorError::Shape {
                expected: scenario.len(),
                got: coefficients.len(),
            });
        }
        Ok(BellFunctional {
            scenario,
            coefficients,
        })
    }

    pub fn from_fn(
        scenario: Scenario,
        mut f: impl FnMut(usize, usize, usize, usize) -> Rational,
    ) -> Self {
        let mut coefficients = Vec::with_capacity(scenario.len());
        for x in 0..scenario.x_card {
            for y in 0..scenario.y_card {
                for a in 0..scenario.a_card {
                    for b in 0..scenario.b_card {
                        coefficients.push(f(x, y, a, b));
                    }
                }
            }
        }
        BellFunctional {
            scenario,
            coefficients,
        }
    }

    pub fn scenario(&self) -> &Scenario {
        &self.scenario
    }

    pub fn coefficient(&self, x: usize, y: usize, a: usize, b: usize) -> &Rational {
        &self.coefficients[self.scenario.index(x, y, a, b)]
    }

    pub fn value<T: Scalar>(&self, behavior: &Behavior<T>) -> Result<T, BehaviorError> {
        if *behavior.scenario() != self.scenario {
            return Err(BehaviorError::ScenarioMismatch(self.scenario, *behavior.scenario()));
        }
        Ok(self
            .coefficients
            .iter()
            .zip(behavior.table())
            .fold(T::zero(), |acc, (c, p)| acc + T::from_rational(c) * p.clone()))
    }

    /// Maximum over deterministic local strategies, refusing above
    /// [`DEFAULT_LOCAL_LIMIT`] strategy pairs.
    pub fn local_bound(&self) -> Result<Rational, BehaviorError> {
        self.local_bound_with_limit(DEFAULT_LOCAL_LIMIT)
    }

    /// Enumerates every Alice strategy `x -> a`; for each, Bob's best reply is
    /// chosen per input `y` independently, which covers all
    /// `a_card^x_card * b_card^y_card` pairs.
    pub fn local_bound_with_limit(&self, limit: u128) -> Result<Rational, BehaviorError> {
        let s = self.scenario;
        let count = (s.a_card as u128)
            .checked_pow(s.x_card as u32)
            .and_then(|n| n.checked_mul((s.b_card as u128).checked_pow(s.y_card as u32)?))
            .unwrap_or(u128::MAX);
        if count > limit {
            return Err(BehaviorError::LimitExceeded { count, limit });
        }
        let mut alice = vec![0usize; s.x_card];
        let mut best: Option<Rational> = None;
        loop {
            let mut total = Rational::from_ratio(0, 1);
            for y in 0..s.y_card {
                let reply = (0..s.b_card)
                    .map(|b| {
                        (0..s.x_card).fold(Rational::from_ratio(0, 1), |acc, x| {
                            acc + self.coefficient(x, y, alice[x], b).clone()
                        })
                    })
                    .max()
                    .expect("b_card >= 1");
                total += reply;
            }
            if best.as_ref().is_none_or(|b| total > *b) {
                best = Some(total);
            }
            if !advance(&mut alice, s.a_card) {
                break;
            }
        }
        Ok(best.expect("at least one strategy"))
    }
}

/// Odometer increment; false once every digit has wrapped.
pub(crate) fn advance(digits: &mut [usize], base: usize) -> bool {
    for d in digits.iter_mut() {
        *d += 1;
        if *d < base {
            return true;
        }
        *d = 0;
    }
    false
}
