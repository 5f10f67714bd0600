//! Best success probability without any shared resource.

use zeroerr::channels::{m_channel, n_channel};
use zeroerr::protocols::best_unassisted_success;
use zeroerr::scalar::format_rational;
use zeroerr::{MessagePrior, Rational, Scalar};

fn main() {
    let n3 = n_channel::<Rational>(3).unwrap();
    let best = best_unassisted_success(&n3, 2, &MessagePrior::uniform(2)).unwrap();
    println!("N_3, 2 messages: {} with encoder {:?}", format_rational(&best.success), best.encoder);

    let m3 = m_channel::<Rational>(3).unwrap();
    let best = best_unassisted_success(&m3, 3, &MessagePrior::uniform(3)).unwrap();
    println!("M_3, 3 messages: {} with encoder {:?}", format_rational(&best.success), best.encoder);

    let skewed = MessagePrior::new(vec![Rational::from_ratio(3, 4), Rational::from_ratio(1, 4)]).unwrap();
    let best = best_unassisted_success(&n3, 2, &skewed).unwrap();
    println!("N_3, prior (3/4, 1/4): {}", format_rational(&best.success));
}
