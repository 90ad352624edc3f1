//! Energy, faces and the perimeter identity of the hexagonal minimizers.

use stickydiscs::energy::identity_report;
use stickydiscs::graph::Analysis;
use stickydiscs::synth::hexagon_minimizer;

fn main() -> stickydiscs::Result<()> {
    println!("{:>3} {:>5} {:>6} {:>6} {:>4} {:>8}", "s", "N", "E", "E+3N", "chi", "surplus");
    for s in 1..=6 {
        let eps = 1.0 / s as f64;
        let a = Analysis::new(&hexagon_minimizer(s, eps)?)?;
        let r = identity_report(&a)?;
        println!(
            "{s:>3} {:>5} {:>6} {:>6} {:>4} {:>8.4}",
            r.n,
            r.energy,
            r.energy + 3 * r.n as i64,
            a.euler.chi,
            r.surplus
        );
    }
    Ok(())
}
