//! Exhaustive search over all deterministic assisted protocols.

use zeroerr::behaviors::{degenerate_box, pr_box};
use zeroerr::channels::n_channel;
use zeroerr::protocols::exhaustive_assisted_search;
use zeroerr::Rational;

fn main() {
    let c = n_channel::<Rational>(2).unwrap();
    let found = exhaustive_assisted_search(&c, &pr_box(), 2).unwrap();
    println!("N_2 with a PR box: found = {} after {} encoders", found.found(), found.encoders_examined);
    if let Some(p) = &found.protocol {
        println!("{}", serde_json::to_string_pretty(p).unwrap());
    }
    let none = exhaustive_assisted_search(&c, &degenerate_box(), 2).unwrap();
    println!("N_2 with a trivial box: found = {} after {} encoders", none.found(), none.encoders_examined);
}
