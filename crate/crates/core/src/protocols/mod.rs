//! Correlation-assisted one-shot coding: protocol maps, exact and sampled
//! success probabilities, and exhaustive searches.
//!
//! A protocol runs as follows. Alice holds message `g`, feeds `x = E_x(g)` into
//! her half of the box and gets `a`, then sends channel input `E_c(g, a)`.
//! Bob sees output `o` and either skips the box or feeds `y = D_y(o)` and gets
//! `b`. His guess is `remap(D_g(o, b))`, with a dedicated slot for `b` when he
//! skipped.

mod engine;
mod montecarlo;
mod search;

pub use engine::{
    exact_success, is_zero_error, trace_branches, Branch, SuccessReport,
};
pub use montecarlo::{monte_carlo_success, MonteCarloEstimate};
pub use search::{
    best_unassisted_success, best_unassisted_success_with_limit, exhaustive_assisted_search,
    exhaustive_assisted_search_with_limit, SearchOutcome, UnassistedOptimum,
    DEFAULT_ENCODER_LIMIT, DEFAULT_EVALUATION_LIMIT,
};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::behaviors::{BehaviorError, Scenario};
use crate::channels::{m_block, perm_unchecked};
use crate::channels::ChannelError;
use crate::scalar::{Mode, Scalar};

#[derive(Debug, Error, PartialEq)]
pub enum ProtocolError {
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("invalid protocol map: {0}")]
    InvalidMap(String),
    #[error("box is signaling (violation {0})")]
    Signaling(String),
    #[error("invalid prior: {0}")]
    Prior(String),
    #[error("{0} requires exact rational mode")]
    RequiresExact(&'static str),
    #[error("search needs {count} evaluations, limit is {limit}")]
    LimitExceeded { count: u128, limit: u128 },
    #[error("number of trials must be positive")]
    ZeroTrials,
    #[error("invalid parameters: {0}")]
    Parameters(String),
    #[error(transparent)]
    Behavior(#[from] BehaviorError),
    #[error(transparent)]
    Channel(#[from] ChannelError),
}

/// The four deterministic maps of an assisted protocol, plus the remap from
/// the extended guess alphabet onto messages.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "ProtocolFields")]
pub struct AssistedProtocol {
    messages: usize,
    box_scenario: Scenario,
    channel_inputs: usize,
    channel_outputs: usize,
    /// Message -> Alice's box input.
    enc_box_input: Vec<usize>,
    /// `message * a_card + a` -> channel input.
    enc_channel_input: Vec<usize>,
    /// Channel output -> Bob's box input, `None` to skip the box.
    dec_box_input: Vec<Option<usize>>,
    /// `output * (b_card + 1) + slot` -> extended guess; slot `b_card` is
    /// used when Bob skipped.
    dec_guess: Vec<usize>,
    /// Extended guess -> message.
    guess_remap: Vec<usize>,
}

/// Unchecked mirror of [`AssistedProtocol`] used when reading files.
#[derive(Deserialize)]
struct ProtocolFields {
    messages: usize,
    box_scenario: Scenario,
    channel_inputs: usize,
    channel_outputs: usize,
    enc_box_input: Vec<usize>,
    enc_channel_input: Vec<usize>,
    dec_box_input: Vec<Option<usize>>,
    dec_guess: Vec<usize>,
    guess_remap: Vec<usize>,
}

impl TryFrom<ProtocolFields> for AssistedProtocol {
    type Error = ProtocolError;

    fn try_from(f: ProtocolFields) -> Result<Self, ProtocolError> {
        AssistedProtocol::from_parts(
            f.messages,
            f.box_scenario,
            f.channel_inputs,
            f.channel_outputs,
            f.enc_box_input,
            f.enc_channel_input,
            f.dec_box_input,
            f.dec_guess,
            f.guess_remap,
        )
    }
}

impl AssistedProtocol {
    #[allow(clippy::too_many_arguments)]
    pub fn from_parts(
        messages: usize,
        box_scenario: Scenario,
        channel_inputs: usize,
        channel_outputs: usize,
        enc_box_input: Vec<usize>,
        enc_channel_input: Vec<usize>,
        dec_box_input: Vec<Option<usize>>,
        dec_guess: Vec<usize>,
        guess_remap: Vec<usize>,
    ) -> Result<Self, ProtocolError> {
        let p = AssistedProtocol {
            messages,
            box_scenario,
            channel_inputs,
            channel_outputs,
            enc_box_input,
            enc_channel_input,
            dec_box_input,
            dec_guess,
            guess_remap,
        };
        p.check()?;
        Ok(p)
    }

    fn check(&self) -> Result<(), ProtocolError> {
        let s = &self.box_scenario;
        let bad = |msg: String| Err(ProtocolError::InvalidMap(msg));
        if self.messages == 0 {
            return bad("at least one message is required".into());
        }
        if self.enc_box_input.len() != self.messages || self.enc_box_input.iter().any(|&x| x >= s.x_card) {
            return bad(format!("encoder box map must send {} messages into 0..{}", self.messages, s.x_card));
        }
        if self.enc_channel_input.len() != self.messages * s.a_card
            || self.enc_channel_input.iter().any(|&i| i >= self.channel_inputs)
        {
            return bad(format!(
                "encoder channel map must send {} (message, a) pairs into 0..{}",
                self.messages * s.a_card,
                self.channel_inputs
            ));
        }
        if self.dec_box_input.len() != self.channel_outputs
            || self.dec_box_input.iter().flatten().any(|&y| y >= s.y_card)
        {
            return bad(format!(
                "decoder box map must send {} outputs into 0..{} or skip",
                self.channel_outputs, s.y_card
            ));
        }
        let alphabet = self.guess_remap.len();
        if self.dec_guess.len() != self.channel_outputs * (s.b_card + 1)
            || self.dec_guess.iter().any(|&g| g >= alphabet)
        {
            return bad(format!(
                "guess map must send {} (output, slot) pairs into 0..{alphabet}",
                self.channel_outputs * (s.b_card + 1)
            ));
        }
        if alphabet < self.messages
            || (0..self.messages).any(|g| self.guess_remap[g] != g)
            || self.guess_remap.iter().any(|&g| g >= self.messages)
        {
            return bad("remap must be the identity on messages and land in the message set".into());
        }
        Ok(())
    }

    pub fn messages(&self) -> usize {
        self.messages
    }

    pub fn box_scenario(&self) -> &Scenario {
        &self.box_scenario
    }

    pub fn channel_inputs(&self) -> usize {
        self.channel_inputs
    }

    pub fn channel_outputs(&self) -> usize {
        self.channel_outputs
    }

    pub fn guess_alphabet(&self) -> usize {
        self.guess_remap.len()
    }

    pub fn box_input(&self, message: usize) -> usize {
        self.enc_box_input[message]
    }

    pub fn channel_input(&self, message: usize, a: usize) -> usize {
        self.enc_channel_input[message * self.box_scenario.a_card + a]
    }

    pub fn bob_input(&self, output: usize) -> Option<usize> {
        self.dec_box_input[output]
    }

    /// Extended guess for `output` and Bob's outcome, `None` when he skipped.
    pub fn raw_guess(&self, output: usize, b: Option<usize>) -> usize {
        let slot = b.unwrap_or(self.box_scenario.b_card);
        self.dec_guess[output * (self.box_scenario.b_card + 1) + slot]
    }

    pub fn remap(&self, guess: usize) -> usize {
        self.guess_remap[guess]
    }

    pub fn decode(&self, output: usize, b: Option<usize>) -> usize {
        self.remap(self.raw_guess(output, b))
    }

    pub fn enc_box_table(&self) -> &[usize] {
        &self.enc_box_input
    }

    pub fn enc_channel_table(&self) -> &[usize] {
        &self.enc_channel_input
    }

    pub fn dec_box_table(&self) -> &[Option<usize>] {
        &self.dec_box_input
    }

    pub fn dec_guess_table(&self) -> &[usize] {
        &self.dec_guess
    }

    pub fn remap_table(&self) -> &[usize] {
        &self.guess_remap
    }

    /// Rewrites Bob's box-input choice per output.
    pub fn with_box_choices(
        mut self,
        f: impl Fn(usize, Option<usize>) -> Option<usize>,
    ) -> Result<Self, ProtocolError> {
        for (o, y) in self.dec_box_input.iter_mut().enumerate() {
            *y = f(o, *y);
        }
        self.check()?;
        Ok(self)
    }

    /// Rewrites the extended guess per `(output, b or skip)`.
    pub fn with_guesses(
        mut self,
        f: impl Fn(usize, Option<usize>, usize) -> usize,
    ) -> Result<Self, ProtocolError> {
        let slots = self.box_scenario.b_card + 1;
        for (k, g) in self.dec_guess.iter_mut().enumerate() {
            let (o, slot) = (k / slots, k % slots);
            let b = (slot < slots - 1).then_some(slot);
            *g = f(o, b, *g);
        }
        self.check()?;
        Ok(self)
    }

    /// Runs `self` and `other` side by side on the tensor-product channel and
    /// box. Messages, box inputs/outputs, channel symbols and guesses are all
    /// paired row-major with `self` most significant. If only one component
    /// skips its box, the product box is still used with input 0 on that side
    /// and the outcome there is ignored.
    pub fn product(&self, other: &AssistedProtocol) -> AssistedProtocol {
        let (s1, s2) = (&self.box_scenario, &other.box_scenario);
        let k2 = other.messages;
        let messages = self.messages * k2;
        let box_scenario = s1.product(s2);
        let enc_box_input = (0..messages)
            .map(|g| self.box_input(g / k2) * s2.x_card + other.box_input(g % k2))
            .collect();
        let mut enc_channel_input = Vec::with_capacity(messages * box_scenario.a_card);
        for g in 0..messages {
            for a in 0..box_scenario.a_card {
                let (a1, a2) = (a / s2.a_card, a % s2.a_card);
                enc_channel_input.push(
                    self.channel_input(g / k2, a1) * other.channel_inputs + other.channel_input(g % k2, a2),
                );
            }
        }
        let channel_outputs = self.channel_outputs * other.channel_outputs;
        let split = |o: usize| (o / other.channel_outputs, o % other.channel_outputs);
        let dec_box_input: Vec<Option<usize>> = (0..channel_outputs)
            .map(|o| {
                let (o1, o2) = split(o);
                match (self.bob_input(o1), other.bob_input(o2)) {
                    (None, None) => None,
                    (y1, y2) => Some(y1.unwrap_or(0) * s2.y_card + y2.unwrap_or(0)),
                }
            })
            .collect();
        // Extended guess pairs: message pairs first so the remap stays the
        // identity on messages, then the rest in row-major order.
        let (g1, g2) = (self.guess_alphabet(), other.guess_alphabet());
        let mut pairs: Vec<(usize, usize)> = (0..g1 * g2).map(|g| (g / g2, g % g2)).collect();
        pairs.sort_by_key(|&(u, v)| (u >= self.messages || v >= k2, u, v));
        let mut pair_index = vec![0; g1 * g2];
        for (i, &(u, v)) in pairs.iter().enumerate() {
            pair_index[u * g2 + v] = i;
        }
        let mut dec_guess = Vec::with_capacity(channel_outputs * (box_scenario.b_card + 1));
        for o in 0..channel_outputs {
            let (o1, o2) = split(o);
            let (skip1, skip2) = (self.bob_input(o1).is_none(), other.bob_input(o2).is_none());
            for slot in 0..=box_scenario.b_card {
                let b = (slot < box_scenario.b_card).then_some(slot);
                let b1 = b.filter(|_| !skip1).map(|b| b / s2.b_card);
                let b2 = b.filter(|_| !skip2).map(|b| b % s2.b_card);
                dec_guess.push(pair_index[self.raw_guess(o1, b1) * g2 + other.raw_guess(o2, b2)]);
            }
        }
        let guess_remap = pairs
            .iter()
            .map(|&(u, v)| self.remap(u) * k2 + other.remap(v))
            .collect();
        AssistedProtocol {
            messages,
            box_scenario,
            channel_inputs: self.channel_inputs * other.channel_inputs,
            channel_outputs,
            enc_box_input,
            enc_channel_input,
            dec_box_input,
            dec_guess,
            guess_remap,
        }
    }
}

/// One-bit protocol over `N_m` assisted by `P_m`.
///
/// Alice sets `x = g` and sends `(g, a)`. Bob, on `o1 = 1`, skips the box and
/// guesses `o2`; on `o1 = 2` he sets `y = 1` and guesses `pi_hat(o2) + b`; on
/// `o1 = l >= 3` he sets `y = 0` and guesses `o2 + pi_hat(pi_perm(l-3, b))`,
/// all mod `m`. Guesses of 2 or more are read as 0.
pub fn theorem2_protocol(m: usize) -> Result<AssistedProtocol, ProtocolError> {
    if m < 2 {
        return Err(ProtocolError::Parameters(format!("need m >= 2, got {m}")));
    }
    let scenario = Scenario { x_card: 2, y_card: 2, a_card: m, b_card: m };
    let outputs = (m + 1) * m;
    let hat = |u: usize| (m - u) % m;
    let mut dec_box_input = Vec::with_capacity(outputs);
    let mut dec_guess = Vec::with_capacity(outputs * (m + 1));
    for digit in 0..=m {
        for o2 in 0..m {
            dec_box_input.push(match digit {
                0 => None,
                1 => Some(1),
                _ => Some(0),
            });
            for slot in 0..=m {
                let guess = match (digit, slot) {
                    (0, _) => o2,
                    (_, s) if s == m => 0,
                    (1, b) => (hat(o2) + b) % m,
                    (l, b) => (o2 + hat(perm_unchecked(m, l - 2, b))) % m,
                };
                dec_guess.push(guess);
            }
        }
    }
    let guess_remap = (0..m).map(|g| if g < 2 { g } else { 0 }).collect();
    AssistedProtocol::from_parts(
        2,
        scenario,
        2 * m,
        outputs,
        vec![0, 1],
        (0..2 * m).collect(),
        dec_box_input,
        dec_guess,
        guess_remap,
    )
}

/// `log m`-bit protocol over `M_m` assisted by the `R~_m` box.
///
/// Alice sets `x = g` and sends `(g, a)`. Bob, on `o1 = 1`, skips the box and
/// guesses `o2`; for `o1` at position `s` of block `j` he sets `y = j` and
/// guesses `o2 + pi_hat(pi_perm(s, b))` mod `m`.
pub fn theorem3_protocol(m: usize) -> Result<AssistedProtocol, ProtocolError> {
    if m < 2 {
        return Err(ProtocolError::Parameters(format!("need m >= 2, got {m}")));
    }
    let scenario = Scenario { x_card: m, y_card: m, a_card: 2, b_card: 2 };
    let labels = m * (m - 1) + 1;
    let outputs = labels * m;
    let hat = |u: usize| (m - u) % m;
    let mut dec_box_input = Vec::with_capacity(outputs);
    let mut dec_guess = Vec::with_capacity(outputs * 3);
    for digit in 0..labels {
        let block = m_block(m, digit);
        for o2 in 0..m {
            dec_box_input.push(block.map(|(j, _)| j));
            for slot in 0..3 {
                let guess = match (block, slot) {
                    (None, _) => o2,
                    (Some(_), 2) => 0,
                    (Some((_, s)), b) => (o2 + hat(perm_unchecked(m, s, b))) % m,
                };
                dec_guess.push(guess);
            }
        }
    }
    AssistedProtocol::from_parts(
        m,
        scenario,
        2 * m,
        outputs,
        (0..m).collect(),
        (0..2 * m).collect(),
        dec_box_input,
        dec_guess,
        (0..m).collect(),
    )
}

/// A distribution over messages.
#[derive(Debug, Clone, PartialEq)]
pub struct MessagePrior<T> {
    weights: Vec<T>,
}

impl<T: Scalar> MessagePrior<T> {
    pub fn new(weights: Vec<T>) -> Result<Self, ProtocolError> {
        if weights.is_empty() {
            return Err(ProtocolError::Prior("no messages".into()));
        }
        if weights.iter().any(|w| *w < T::zero()) {
            return Err(ProtocolError::Prior("negative weight".into()));
        }
        let total = weights.iter().fold(T::zero(), |acc, w| acc + w.clone());
        if !total.close_to(&T::one(), crate::scalar::FLOAT_TOL) {
            return Err(ProtocolError::Prior(format!("weights sum to {total}")));
        }
        Ok(MessagePrior { weights })
    }

    pub fn uniform(k: usize) -> Self {
        MessagePrior {
            weights: vec![T::from_ratio(1, k as i64); k],
        }
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn weight(&self, message: usize) -> &T {
        &self.weights[message]
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    pub fn mode(&self) -> Mode {
        T::MODE
    }
}
