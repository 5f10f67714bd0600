use serde::Serialize;

use super::{AssistedProtocol, MessagePrior, ProtocolError};
use crate::behaviors::{advance, Behavior};
use crate::channels::Channel;
use crate::scalar::{Mode, Scalar};

pub const DEFAULT_ENCODER_LIMIT: u128 = 10_000_000;
pub const DEFAULT_EVALUATION_LIMIT: u128 = 1_000_000_000;

/// Best deterministic code without assistance.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UnassistedOptimum<T> {
    pub success: T,
    /// Message -> channel input.
    pub encoder: Vec<usize>,
    /// Output -> message, maximum a posteriori with ties to the smaller index.
    pub decoder: Vec<usize>,
    pub encoders_examined: u128,
}

pub fn best_unassisted_success<T: Scalar>(
    channel: &Channel<T>,
    messages: usize,
    prior: &MessagePrior<T>,
) -> Result<UnassistedOptimum<T>, ProtocolError> {
    best_unassisted_success_with_limit(channel, messages, prior, DEFAULT_ENCODER_LIMIT)
}

/// Maximizes the MAP success over all `n_in^K` encoders. The first encoder
/// in odometer order (message 0 fastest) that attains the maximum is kept.
pub fn best_unassisted_success_with_limit<T: Scalar>(
    channel: &Channel<T>,
    messages: usize,
    prior: &MessagePrior<T>,
    limit: u128,
) -> Result<UnassistedOptimum<T>, ProtocolError> {
    if messages == 0 || prior.len() != messages {
        return Err(ProtocolError::Shape(format!(
            "{messages} messages with a prior over {}",
            prior.len()
        )));
    }
    let n_in = channel.input_count();
    let count = (n_in as u128)
        .checked_pow(messages as u32)
        .filter(|&c| c <= limit)
        .ok_or(ProtocolError::LimitExceeded {
            count: (n_in as f64).powi(messages as i32) as u128,
            limit,
        })?;
    let n_out = channel.output_count();
    let mut encoder = vec![0; messages];
    let mut best: Option<(T, Vec<usize>)> = None;
    loop {
        let mut total = T::zero();
        for o in 0..n_out {
            let top = (0..messages)
                .map(|g| prior.weight(g).clone() * channel.prob(o, encoder[g]).clone())
                .fold(T::zero(), |m, v| if v > m { v } else { m });
            total = total + top;
        }
        if best.as_ref().is_none_or(|(b, _)| total > *b) {
            best = Some((total, encoder.clone()));
        }
        if !advance(&mut encoder, n_in) {
            break;
        }
    }
    let (success, encoder) = best.expect("at least one encoder");
    let decoder = (0..n_out)
        .map(|o| {
            let mut arg = 0;
            let mut top = T::zero();
            for g in 0..messages {
                let v = prior.weight(g).clone() * channel.prob(o, encoder[g]).clone();
                if v > top {
                    top = v;
                    arg = g;
                }
            }
            arg
        })
        .collect();
    Ok(UnassistedOptimum {
        success,
        encoder,
        decoder,
        encoders_examined: count,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SearchOutcome {
    pub protocol: Option<AssistedProtocol>,
    pub encoders_examined: u128,
    pub evaluations: u128,
}

impl SearchOutcome {
    pub fn found(&self) -> bool {
        self.protocol.is_some()
    }
}

pub fn exhaustive_assisted_search<T: Scalar>(
    channel: &Channel<T>,
    boxb: &Behavior<T>,
    messages: usize,
) -> Result<SearchOutcome, ProtocolError> {
    exhaustive_assisted_search_with_limit(channel, boxb, messages, DEFAULT_EVALUATION_LIMIT)
}

/// Looks for a zero-error `K`-message protocol among all deterministic maps.
///
/// For fixed encoders, a zero-error decoder exists iff every output admits a
/// box choice (skip, or some `y`) under which each `(output, b)` slot is
/// reachable from at most one message. Outputs are independent, so each one
/// takes the first admissible choice in the order skip, `y = 0, 1, ...`.
/// Encoders run in odometer order: box-input map outermost, then the channel
/// map, first digit fastest. The first success is returned.
pub fn exhaustive_assisted_search_with_limit<T: Scalar>(
    channel: &Channel<T>,
    boxb: &Behavior<T>,
    messages: usize,
    limit: u128,
) -> Result<SearchOutcome, ProtocolError> {
    if T::MODE != Mode::Rational {
        return Err(ProtocolError::RequiresExact("exhaustive search"));
    }
    if messages == 0 {
        return Err(ProtocolError::Parameters("at least one message is required".into()));
    }
    let (ns, violation) = boxb.is_no_signaling(0.0);
    if !ns {
        return Err(ProtocolError::Signaling(format!("{violation:e}")));
    }
    let s = *boxb.scenario();
    let (n_in, n_out) = (channel.input_count(), channel.output_count());
    let pairs = messages * s.a_card;
    let encoders = (s.x_card as f64).powi(messages as i32) * (n_in as f64).powi(pairs as i32);
    let per_encoder = (n_out * (s.y_card + 1) * pairs * s.b_card) as f64;
    let estimate = encoders * per_encoder;
    if estimate > limit as f64 {
        return Err(ProtocolError::LimitExceeded {
            count: estimate.min(u128::MAX as f64) as u128,
            limit,
        });
    }

    let possible_a: Vec<Vec<bool>> = (0..s.x_card)
        .map(|x| (0..s.a_card).map(|a| boxb.alice_marginal_unchecked(x, a, 0).is_possible()).collect())
        .collect();
    let supports: Vec<Vec<usize>> = (0..n_in).map(|i| channel.support(i).collect()).collect();

    let mut xs = vec![0; messages];
    let mut examined: u128 = 0;
    let mut evaluations: u128 = 0;
    loop {
        let mut inputs = vec![0; pairs];
        loop {
            examined += 1;
            let mut reach: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n_out];
            for g in 0..messages {
                for a in 0..s.a_card {
                    if possible_a[xs[g]][a] {
                        for &o in &supports[inputs[g * s.a_card + a]] {
                            reach[o].push((g, a));
                        }
                    }
                }
            }
            let mut dec_box = Vec::with_capacity(n_out);
            let mut dec_guess = Vec::with_capacity(n_out * (s.b_card + 1));
            let mut ok = true;
            for r in &reach {
                evaluations += (r.len() * (s.y_card + 1) * s.b_card.max(1)) as u128;
                match decode_output(r, &xs, boxb) {
                    Some((y, guesses)) => {
                        dec_box.push(y);
                        dec_guess.extend(guesses);
                    }
                    None => {
                        ok = false;
                        break;
                    }
                }
            }
            if ok {
                let protocol = AssistedProtocol::from_parts(
                    messages,
                    s,
                    n_in,
                    n_out,
                    xs.clone(),
                    inputs.clone(),
                    dec_box,
                    dec_guess,
                    (0..messages).collect(),
                )?;
                return Ok(SearchOutcome {
                    protocol: Some(protocol),
                    encoders_examined: examined,
                    evaluations,
                });
            }
            if !advance(&mut inputs, n_in) {
                break;
            }
        }
        if !advance(&mut xs, s.x_card) {
            break;
        }
    }
    Ok(SearchOutcome {
        protocol: None,
        encoders_examined: examined,
        evaluations,
    })
}

/// First admissible box choice for one output, with the guess for each of
/// the `b_card + 1` slots.
fn decode_output<T: Scalar>(
    reach: &[(usize, usize)],
    xs: &[usize],
    boxb: &Behavior<T>,
) -> Option<(Option<usize>, Vec<usize>)> {
    let s = boxb.scenario();
    let unique = |mut it: Box<dyn Iterator<Item = usize> + '_>| -> Result<usize, ()> {
        let first = match it.next() {
            None => return Ok(0),
            Some(g) => g,
        };
        if it.all(|g| g == first) {
            Ok(first)
        } else {
            Err(())
        }
    };
    if let Ok(g) = unique(Box::new(reach.iter().map(|&(g, _)| g))) {
        let mut guesses = vec![0; s.b_card + 1];
        guesses[s.b_card] = g;
        return Some((None, guesses));
    }
    'y: for y in 0..s.y_card {
        let mut guesses = vec![0; s.b_card + 1];
        for (b, slot) in guesses.iter_mut().enumerate().take(s.b_card) {
            let senders = reach
                .iter()
                .filter(move |&&(g, a)| boxb.get(xs[g], y, a, b).is_possible())
                .map(|&(g, _)| g);
            match unique(Box::new(senders)) {
                Ok(g) => *slot = g,
                Err(()) => continue 'y,
            }
        }
        return Some((Some(y), guesses));
    }
    None
}
