//! Seeded Monte-Carlo estimates next to the exact values.

use zeroerr::behaviors::extremal_box;
use zeroerr::channels::n_channel;
use zeroerr::protocols::{monte_carlo_success, theorem2_protocol};
use zeroerr::quantum::{cglmp_closed_form_success, make_cglmp_behavior};
use zeroerr::{MessagePrior, Rational, Scalar};

fn main() {
    let p = theorem2_protocol(3).unwrap();
    let c = n_channel::<Rational>(3).unwrap();
    let b = extremal_box::<Rational>(3, 3).unwrap();
    let est = monte_carlo_success(&c, &b, &p, &MessagePrior::uniform(2), 10_000, 1).unwrap();
    println!("N_3 + P_3: {}/{} successes", est.successes, est.trials);

    let cf = c.map_scalar(|v| v.to_f64());
    for seed in [1, 2, 3] {
        let est = monte_carlo_success(&cf, &make_cglmp_behavior(), &p, &MessagePrior::uniform(2), 200_000, seed).unwrap();
        println!("N_3 + CGLMP, seed {seed}: {:.5} +/- {:.5}", est.estimate, est.std_error);
    }
    println!("exact: {:.5}", cglmp_closed_form_success());
}
