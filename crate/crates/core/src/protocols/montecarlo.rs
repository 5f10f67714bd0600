use rand::RngCore;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::engine::check_compatible;
use super::{AssistedProtocol, MessagePrior, ProtocolError};
use crate::behaviors::Behavior;
use crate::channels::Channel;
use crate::sampling::DiscreteSampler;
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MonteCarloEstimate {
    pub trials: u64,
    pub successes: u64,
    pub estimate: f64,
    pub std_error: f64,
}

/// Simulates `trials` protocol runs from a ChaCha8 stream seeded with `seed`.
///
/// Each run draws the message, Alice's outcome from `p(a|x)`, the channel
/// output, and, unless Bob skips, his outcome from `p(b|a,x,y)`.
pub fn monte_carlo_success<T: Scalar>(
    channel: &Channel<T>,
    boxb: &Behavior<T>,
    protocol: &AssistedProtocol,
    prior: &MessagePrior<T>,
    trials: u64,
    seed: u64,
) -> Result<MonteCarloEstimate, ProtocolError> {
    if trials == 0 {
        return Err(ProtocolError::ZeroTrials);
    }
    check_compatible(channel, boxb, protocol, prior.len())?;
    let s = *boxb.scenario();
    let message_sampler = DiscreteSampler::new(prior.weights());
    let alice: Vec<DiscreteSampler> = (0..s.x_card)
        .map(|x| {
            let marginal: Vec<T> = (0..s.a_card).map(|a| boxb.alice_marginal_unchecked(x, a, 0)).collect();
            DiscreteSampler::new(&marginal)
        })
        .collect();
    let columns = (0..channel.input_count())
        .map(|i| channel.sampler(i))
        .collect::<Result<Vec<_>, _>>()?;
    // Bob's conditional samplers, built lazily per (x, y, a).
    let mut bob: Vec<Option<DiscreteSampler>> = vec![None; s.x_card * s.y_card * s.a_card];

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut successes = 0u64;
    for _ in 0..trials {
        let g = message_sampler.sample(rng.next_u64());
        let x = protocol.box_input(g);
        let a = alice[x].sample(rng.next_u64());
        let output = columns[protocol.channel_input(g, a)].sample(rng.next_u64());
        let b = protocol.bob_input(output).map(|y| {
            let sampler = bob[(x * s.y_card + y) * s.a_card + a].get_or_insert_with(|| {
                let row: Vec<T> = (0..s.b_card).map(|b| boxb.get(x, y, a, b).clone()).collect();
                DiscreteSampler::normalized(&row)
            });
            sampler.sample(rng.next_u64())
        });
        if protocol.decode(output, b) == g {
            successes += 1;
        }
    }
    let estimate = successes as f64 / trials as f64;
    Ok(MonteCarloEstimate {
        trials,
        successes,
        estimate,
        std_error: (estimate * (1.0 - estimate) / trials as f64).sqrt(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::behaviors::{extremal_box, rtilde_box};
    use crate::channels::{m_channel, n_channel};
    use crate::protocols::{exact_success, theorem2_protocol, theorem3_protocol};
    use crate::quantum::make_cglmp_behavior;
    use crate::scalar::Rational;

    #[test]
    fn zero_error_protocol_never_fails() {
        let c = n_channel::<Rational>(3).unwrap();
        let b = extremal_box::<Rational>(3, 3).unwrap();
        let p = theorem2_protocol(3).unwrap();
        for seed in [1, 2, 99] {
            let r = monte_carlo_success(&c, &b, &p, &MessagePrior::uniform(2), 20_000, seed).unwrap();
            assert_eq!(r.successes, r.trials);
            assert_eq!(r.estimate, 1.0);
        }
        let c = m_channel::<Rational>(4).unwrap();
        let b = rtilde_box::<Rational>(4).unwrap();
        let r = monte_carlo_success(&c, &b, &theorem3_protocol(4).unwrap(), &MessagePrior::uniform(4), 20_000, 5).unwrap();
        assert_eq!(r.estimate, 1.0);
    }

    #[test]
    fn cglmp_estimate_agrees_with_exact() {
        let c = n_channel::<Rational>(3).unwrap().map_scalar(|v| v.to_f64());
        let b = make_cglmp_behavior();
        let p = theorem2_protocol(3).unwrap();
        let prior = MessagePrior::uniform(2);
        let exact = exact_success(&c, &b, &p, &prior).unwrap().success;
        let r = monte_carlo_success(&c, &b, &p, &prior, 200_000, 7).unwrap();
        assert!((r.estimate - exact).abs() <= 4.0 * r.std_error, "{r:?} vs {exact}");
        let again = monte_carlo_success(&c, &b, &p, &prior, 200_000, 7).unwrap();
        assert_eq!(r, again);
    }

    #[test]
    fn zero_trials_rejected() {
        let c = n_channel::<Rational>(2).unwrap();
        let b = extremal_box::<Rational>(2, 2).unwrap();
        let p = theorem2_protocol(2).unwrap();
        assert_eq!(
            monte_carlo_success(&c, &b, &p, &MessagePrior::uniform(2), 0, 1),
            Err(ProtocolError::ZeroTrials)
        );
    }
}
