//! Runs the full reproduction check list and prints the report.

fn main() {
    let slow = std::env::args().any(|a| a == "--slow");
    let report = zeroerr::verify_paper(slow);
    print!("{}", report.to_table());
    for c in report.failures() {
        println!("failed: {} ({})", c.name, c.provenance);
    }
}
