//! Confusability graphs, independence numbers and one-shot zero-error
//! capacity, including the strong product for two channel uses.

use zeroerr::channels::{m_channel, n_channel};
use zeroerr::graphs::{capacity_of_graph, maximum_independent_set};
use zeroerr::{confusability_graph, zero_error_capacity_oneshot, Channel, ConfusabilityGraph, Rational};

fn main() {
    for m in 2..=6 {
        let r = zero_error_capacity_oneshot(&n_channel::<Rational>(m).unwrap()).unwrap();
        println!("N_{m}: {} vertices, alpha = {}, complete = {}", r.vertices, r.alpha, r.complete);
    }
    for m in 2..=5 {
        let r = zero_error_capacity_oneshot(&m_channel::<Rational>(m).unwrap()).unwrap();
        println!("M_{m}: {} vertices, alpha = {}, complete = {}", r.vertices, r.alpha, r.complete);
    }

    // The pentagon: alpha = 2 for one use, 5 for two.
    let c5 = ConfusabilityGraph::cycle(5);
    let sq = c5.strong_product(&c5);
    let set = maximum_independent_set(&sq).unwrap();
    println!("\nC5: alpha = {}; C5 x C5: alpha = {}, witness {:?}", capacity_of_graph(&c5).unwrap().alpha, set.len(), set);

    let g = confusability_graph(&Channel::<Rational>::identity(4));
    println!("\nidentity on 4 symbols: capacity {} bits", capacity_of_graph(&g).unwrap().bits);
    println!("\nG(N_2) in DIMACS form:\n{}", confusability_graph(&n_channel::<Rational>(2).unwrap()).to_dimacs());
}
