//! Extremal no-signaling boxes, their marginals and a CHSH evaluation.

use zeroerr::behaviors::{extremal_box, local_deterministic, pr_box, rtilde_box};
use zeroerr::scalar::format_rational;
use zeroerr::{BellFunctional, Rational, Scalar};

fn main() {
    let pr = pr_box::<Rational>();
    let q = |n: i64, d: i64| Rational::from_ratio(n, d);

    // CHSH in correlator form: sum over x,y of (-1)^(xy) <(-1)^(a+b)>.
    let chsh = BellFunctional::from_fn(*pr.scenario(), |x, y, a, b| {
        let sign = if (a ^ b ^ (x & y)) == 0 { 1 } else { -1 };
        q(sign, 1)
    });
    let local = chsh.local_bound().expect("small scenario");
    println!("CHSH: PR box = {}, local bound = {}", format_rational(&chsh.value(&pr).unwrap()), format_rational(&local));

    let det = local_deterministic::<Rational>(&[0, 1], &[0, 0], 2, 2).unwrap();
    println!("CHSH of a deterministic point: {}", format_rational(&chsh.value(&det).unwrap()));

    for m in 2..=6 {
        let p = extremal_box::<Rational>(m, m).unwrap();
        let r = rtilde_box::<Rational>(m).unwrap();
        println!(
            "m = {m}: P_m no-signaling {}, R~_m no-signaling {}, p(a=0|x=1) = {}",
            p.is_no_signaling(0.0).0,
            r.is_no_signaling(0.0).0,
            format_rational(&p.marginal_alice(1, 0, 0).unwrap())
        );
    }

    let p3 = extremal_box::<Rational>(3, 3).unwrap();
    println!("\nP_3 at (x, y) = (1, 1):");
    for a in 0..3 {
        let row: Vec<String> = (0..3).map(|b| format_rational(p3.get(1, 1, a, b))).collect();
        println!("  a = {a}: {}", row.join("  "));
    }
}
