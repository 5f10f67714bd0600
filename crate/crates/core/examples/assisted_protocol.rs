//! Zero-error transmission over N_m with a P_m box and over M_m with an
//! R~_m box, traced branch by branch for m = 2.

use zeroerr::behaviors::{extremal_box, rtilde_box};
use zeroerr::channels::{m_channel, n_channel};
use zeroerr::protocols::{theorem2_protocol, theorem3_protocol, trace_branches};
use zeroerr::scalar::format_rational;
use zeroerr::{exact_success, MessagePrior, Rational};

fn main() {
    for m in 2..=6 {
        let c = n_channel::<Rational>(m).unwrap();
        let b = extremal_box::<Rational>(m, m).unwrap();
        let r = exact_success(&c, &b, &theorem2_protocol(m).unwrap(), &MessagePrior::uniform(2)).unwrap();
        println!("N_{m} + P_{m}, 1 bit: success {} ({} branches, zero-error {})", format_rational(&r.success), r.branches, r.zero_error);
    }
    for m in 2..=5 {
        let c = m_channel::<Rational>(m).unwrap();
        let b = rtilde_box::<Rational>(m).unwrap();
        let r = exact_success(&c, &b, &theorem3_protocol(m).unwrap(), &MessagePrior::uniform(m)).unwrap();
        println!("M_{m} + R~_{m}, {m} messages: success {} (zero-error {})", format_rational(&r.success), r.zero_error);
    }

    let c = n_channel::<Rational>(2).unwrap();
    let b = extremal_box::<Rational>(2, 2).unwrap();
    println!("\nbranches for N_2 + PR:");
    for br in trace_branches(&c, &b, &theorem2_protocol(2).unwrap()).unwrap() {
        println!(
            "  g={} a={} in={} out={} y={:?} b={:?} -> {}  weight {}",
            br.message,
            br.a,
            c.input_space().label_string(br.channel_input),
            c.output_space().label_string(br.output),
            br.y,
            br.b,
            br.decoded,
            format_rational(&br.weight)
        );
    }
}
