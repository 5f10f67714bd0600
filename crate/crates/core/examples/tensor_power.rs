//! N copies of N_m assisted by N copies of P_m carry N bits with no error,
//! while the product channel alone still has alpha = 1.

use zeroerr::behaviors::extremal_box;
use zeroerr::channels::n_channel;
use zeroerr::protocols::{is_zero_error, theorem2_protocol};
use zeroerr::{confusability_graph, independence_number, Rational};

fn main() {
    for m in [2, 3] {
        let c = n_channel::<Rational>(m).unwrap();
        let b = extremal_box::<Rational>(m, m).unwrap();
        let p = theorem2_protocol(m).unwrap();
        let (cc, bb, pp) = (c.tensor(&c), b.tensor(&b), p.product(&p));
        let g = confusability_graph(&cc);
        println!(
            "N_{m} (x) N_{m}: {} messages zero-error = {}, graph on {} vertices has alpha = {}",
            pp.messages(),
            is_zero_error(&cc, &bb, &pp).unwrap(),
            g.vertex_count(),
            independence_number(&g).unwrap()
        );
    }
}
