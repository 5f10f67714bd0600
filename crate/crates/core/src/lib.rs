//! Zero-error communication over noisy classical channels, with and without
//! the help of shared nonlocal correlations.
//!
//! The crate has two numeric modes. Exact mode uses arbitrary-precision
//! rationals and is the default for channels, no-signaling boxes and protocol
//! success probabilities, so a zero-error claim is an exact equality with 1.
//! Float mode is used for behaviors produced by the quantum kernel.

pub mod behaviors;
pub mod channels;
pub mod cli;
pub mod graphs;
pub mod io;
pub mod protocols;
pub mod quantum;
pub mod sampling;
pub mod scalar;
pub mod verify;

pub use behaviors::{Behavior, BehaviorError, BellFunctional, Scenario};
pub use channels::{Channel, ChannelError, IndexSpace};
pub use graphs::{
    confusability_graph, independence_number, zero_error_capacity_oneshot, ConfusabilityGraph,
};
pub use io::{AnyBehavior, AnyChannel, IoError};
pub use protocols::{exact_success, AssistedProtocol, MessagePrior, ProtocolError};
pub use quantum::{QuantumError, QuantumModel};
pub use scalar::{Mode, Prob, Rational, Scalar};
pub use verify::{verify_paper, VerificationReport};
