//! Locates zero-energy thresholds by bisection on the growth coefficient.

use levinson::potential::Potential;
use levinson::radial::Channel;
use levinson::spectrum::{classify_zero_energy, resonance_scan};

fn main() -> levinson::Result<()> {
    let pot = Potential::well(3, 1.0, 1.0)?;
    for l in 0..2 {
        let ch = Channel::new(3, l)?;
        let roots = resonance_scan(&pot, &ch, 0.5, 40.0, 80)?;
        for d in roots {
            let class = classify_zero_energy(&pot.with_depth(d))?;
            println!(
                "l={l}: threshold at d = {d:.10}  -> {:?}, N0 = {}, N_res = {}",
                class.resonance, class.n0, class.n_res
            );
        }
    }
    Ok(())
}
