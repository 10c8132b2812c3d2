//! Bound-state counts per channel from Sturm node counting, checked against a
//! finite-difference box.

use levinson::potential::Potential;
use levinson::spectrum::{box_count, total_counts};

fn main() -> levinson::Result<()> {
    for (n, d) in [(1, 30.0), (2, 20.0), (3, 40.0), (4, 60.0)] {
        let pot = Potential::well(n, d, 1.0)?;
        let report = total_counts(&pot, 400)?;
        print!("n={n} d={d}: N = {} (", report.n);
        for (ch, count) in &report.per_channel {
            let boxed = box_count(&pot, ch, 20.0, 4000)?;
            print!(" {}×{}: {count}/{boxed}", ch.label(), ch.multiplicity);
        }
        println!(" )  resonance {:?}", report.resonance);
    }
    Ok(())
}
