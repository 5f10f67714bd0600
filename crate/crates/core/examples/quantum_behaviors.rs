//! Behaviors from quantum states and measurements, and the success they
//! give as assistance.

use zeroerr::channels::{m_channel, n_channel};
use zeroerr::protocols::{theorem2_protocol, theorem3_protocol};
use zeroerr::quantum::{
    behavior_from_quantum, cglmp_closed_form_success, computational_basis, i3322_table, make_cglmp_behavior,
    make_i3322_model, make_max_entangled,
};
use zeroerr::{exact_success, MessagePrior, QuantumModel, Rational, Scalar};

fn main() {
    let cglmp = make_cglmp_behavior();
    let n3 = n_channel::<Rational>(3).unwrap().map_scalar(|v| v.to_f64());
    let s = exact_success(&n3, &cglmp, &theorem2_protocol(3).unwrap(), &MessagePrior::uniform(2)).unwrap();
    println!("N_3 + CGLMP: {:.10} (closed form {:.10})", s.success, cglmp_closed_form_success());

    let m3 = m_channel::<Rational>(3).unwrap();
    let p = theorem3_protocol(3).unwrap();
    let table = exact_success(&m3, &i3322_table(), &p, &MessagePrior::uniform(3)).unwrap();
    println!("M_3 + printed singlet table: {}", table.success);
    let q = behavior_from_quantum(&make_i3322_model()).unwrap();
    let m3f = m3.map_scalar(|v| v.to_f64());
    let from_angles = exact_success(&m3f, &q, &p, &MessagePrior::uniform(3)).unwrap();
    println!("M_3 + singlet at the stated angles: {:.12}", from_angles.success);

    let phi = make_max_entangled(3).unwrap();
    let model = QuantumModel::new(phi, (3, 3), vec![computational_basis(3)], vec![computational_basis(3)]).unwrap();
    let b = behavior_from_quantum(&model).unwrap();
    println!("\nphi_3, computational basis: p(a=b) = {:.6}", (0..3).map(|a| b.get(0, 0, a, a)).sum::<f64>());
    println!("no-signaling: {:?}", b.is_no_signaling(1e-9));
}
