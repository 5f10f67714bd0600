//! JSON and CSV forms of channels, boxes, protocols and quantum models.

use zeroerr::behaviors::extremal_box;
use zeroerr::channels::n_channel;
use zeroerr::io::{behavior_csv, channel_csv, quantum_to_json, read_channel, write_behavior, write_channel};
use zeroerr::protocols::theorem2_protocol;
use zeroerr::quantum::make_i3322_model;
use zeroerr::{AnyChannel, Rational};

fn main() {
    let n2 = n_channel::<Rational>(2).unwrap();
    let text = write_channel(&n2);
    println!("{text}");
    assert_eq!(read_channel(&text).unwrap(), AnyChannel::Rational(n2.clone()));
    println!("{}", channel_csv(&n2, false).unwrap());

    let p2 = extremal_box::<Rational>(2, 2).unwrap();
    println!("{}", write_behavior(&p2));
    println!("{}", behavior_csv(&p2, true).unwrap());

    println!("{}", serde_json::to_string(&theorem2_protocol(2).unwrap()).unwrap());
    let q = quantum_to_json(&make_i3322_model());
    println!("\nquantum model: dims {:?}, {} settings for Alice", q.dims, q.alice.len());
}
