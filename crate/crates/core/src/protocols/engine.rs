use serde::Serialize;

use super::{AssistedProtocol, MessagePrior, ProtocolError};
use crate::behaviors::Behavior;
use crate::channels::Channel;
use crate::scalar::{Mode, Scalar, FLOAT_TOL};

/// One reachable path `(g, a, output, b)` through a protocol run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Branch<T> {
    pub message: usize,
    pub x: usize,
    pub a: usize,
    pub channel_input: usize,
    pub output: usize,
    pub y: Option<usize>,
    pub b: Option<usize>,
    pub guess: usize,
    pub decoded: usize,
    /// Probability of this path given the message.
    pub weight: T,
}

impl<T> Branch<T> {
    pub fn is_correct(&self) -> bool {
        self.decoded == self.message
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuccessReport<T> {
    pub success: T,
    /// Success probability conditioned on each message.
    pub per_message: Vec<T>,
    pub branches: usize,
    pub failing_branches: usize,
    /// Every reachable branch decodes correctly.
    pub zero_error: bool,
}

pub(crate) fn check_compatible<T: Scalar>(
    channel: &Channel<T>,
    boxb: &Behavior<T>,
    protocol: &AssistedProtocol,
    messages: usize,
) -> Result<(), ProtocolError> {
    if boxb.scenario() != protocol.box_scenario() {
        return Err(ProtocolError::Shape(format!(
            "protocol expects box scenario {:?}, got {:?}",
            protocol.box_scenario(),
            boxb.scenario()
        )));
    }
    if channel.input_count() != protocol.channel_inputs() || channel.output_count() != protocol.channel_outputs() {
        return Err(ProtocolError::Shape(format!(
            "protocol expects a channel with {} inputs and {} outputs, got {} and {}",
            protocol.channel_inputs(),
            protocol.channel_outputs(),
            channel.input_count(),
            channel.output_count()
        )));
    }
    if messages != protocol.messages() {
        return Err(ProtocolError::Shape(format!(
            "prior has {messages} messages, protocol has {}",
            protocol.messages()
        )));
    }
    let tol = if T::MODE == Mode::Rational { 0.0 } else { FLOAT_TOL };
    let (ns, violation) = boxb.is_no_signaling(tol);
    if !ns {
        return Err(ProtocolError::Signaling(format!("{violation:e}")));
    }
    Ok(())
}

/// Visits every reachable branch. Weights use the joint `p(a,b|x,y)`
/// directly, or Alice's marginal when Bob skips, so nothing is divided.
fn visit<T: Scalar>(
    channel: &Channel<T>,
    boxb: &Behavior<T>,
    protocol: &AssistedProtocol,
    mut f: impl FnMut(Branch<T>),
) {
    let s = *boxb.scenario();
    for message in 0..protocol.messages() {
        let x = protocol.box_input(message);
        for a in 0..s.a_card {
            let pa = boxb.alice_marginal_unchecked(x, a, 0);
            if !pa.is_possible() {
                continue;
            }
            let input = protocol.channel_input(message, a);
            for output in channel.support(input) {
                let pc = channel.prob(output, input).clone();
                let y = protocol.bob_input(output);
                let mut emit = |b: Option<usize>, w: T| {
                    let guess = protocol.raw_guess(output, b);
                    f(Branch {
                        message,
                        x,
                        a,
                        channel_input: input,
                        output,
                        y,
                        b,
                        guess,
                        decoded: protocol.remap(guess),
                        weight: pc.clone() * w,
                    })
                };
                match y {
                    None => emit(None, pa.clone()),
                    Some(y) => {
                        for b in 0..s.b_card {
                            let pab = boxb.get(x, y, a, b);
                            if pab.is_possible() {
                                emit(Some(b), pab.clone());
                            }
                        }
                    }
                }
            }
        }
    }
}

/// All reachable branches, in message, `a`, output, `b` order.
pub fn trace_branches<T: Scalar>(
    channel: &Channel<T>,
    boxb: &Behavior<T>,
    protocol: &AssistedProtocol,
) -> Result<Vec<Branch<T>>, ProtocolError> {
    check_compatible(channel, boxb, protocol, protocol.messages())?;
    let mut out = Vec::new();
    visit(channel, boxb, protocol, |br| out.push(br));
    Ok(out)
}

/// `sum_g prior(g) sum_{a,o,b} p(a,b|x,y) p(o|E_c(g,a)) [decode = g]`.
pub fn exact_success<T: Scalar>(
    channel: &Channel<T>,
    boxb: &Behavior<T>,
    protocol: &AssistedProtocol,
    prior: &MessagePrior<T>,
) -> Result<SuccessReport<T>, ProtocolError> {
    check_compatible(channel, boxb, protocol, prior.len())?;
    let mut per_message = vec![T::zero(); protocol.messages()];
    let (mut branches, mut failing) = (0, 0);
    visit(channel, boxb, protocol, |br| {
        branches += 1;
        if br.is_correct() {
            let acc = &mut per_message[br.message];
            *acc = acc.clone() + br.weight;
        } else {
            failing += 1;
        }
    });
    let success = per_message
        .iter()
        .zip(prior.weights())
        .fold(T::zero(), |acc, (s, w)| acc + s.clone() * w.clone());
    Ok(SuccessReport {
        success,
        per_message,
        branches,
        failing_branches: failing,
        zero_error: failing == 0,
    })
}

/// Exact-mode check that every message is decoded with certainty.
pub fn is_zero_error<T: Scalar>(
    channel: &Channel<T>,
    boxb: &Behavior<T>,
    protocol: &AssistedProtocol,
) -> Result<bool, ProtocolError> {
    if T::MODE != Mode::Rational {
        return Err(ProtocolError::RequiresExact("zero-error decision"));
    }
    let report = exact_success(channel, boxb, protocol, &MessagePrior::uniform(protocol.messages()))?;
    Ok(report.zero_error && report.per_message.iter().all(|s| *s == T::one()))
}
