//! Builds the N_3 and M_3 channels and prints their stochastic matrices.

use zeroerr::channels::{m_channel, n_channel};
use zeroerr::scalar::format_rational;
use zeroerr::{Channel, Rational, Scalar};

fn print_matrix(name: &str, c: &Channel<Rational>) {
    println!("{name}: {} inputs, {} outputs", c.input_count(), c.output_count());
    print!("{:>8}", "out\\in");
    for i in 0..c.input_count() {
        print!("{:>7}", c.input_space().label_string(i));
    }
    println!();
    for o in 0..c.output_count() {
        print!("{:>8}", c.output_space().label_string(o));
        for i in 0..c.input_count() {
            let p = c.prob(o, i);
            let cell = if !p.is_possible() { "0".to_string() } else { format_rational(p) };
            print!("{cell:>7}");
        }
        println!();
    }
    println!();
}

fn main() {
    let n3 = n_channel::<Rational>(3).expect("m = 3 is supported");
    let m3 = m_channel::<Rational>(3).expect("m = 3 is supported");
    print_matrix("N_3", &n3);
    print_matrix("M_3", &m3);

    let t = n3.tensor(&Channel::identity(2));
    println!("N_3 (x) id_2: {} inputs, {} outputs, valid = {}", t.input_count(), t.output_count(), t.validate().is_valid());
}
