//! Spectral flow of `H₀ + tV` in a box, with and without the shift α.

use levinson::flow::{discretized_hamiltonian_flow, BoxGrid};
use levinson::potential::Potential;
use levinson::spectrum::{lowest_eigenvalue, total_counts};

fn main() -> levinson::Result<()> {
    let pot = Potential::well(3, 40.0, 1.0)?;
    let grid = BoxGrid {
        length: 20.0,
        points: 4000,
    };
    let nu = lowest_eigenvalue(&pot, grid.length, grid.points)?.min(0.0);
    let alpha = -2.0 * nu + 2.0;
    println!("lowest eigenvalue {nu:.4}, alpha = {alpha:.4}");
    for (ch, count) in total_counts(&pot, 400)?.per_channel {
        let f = discretized_hamiltonian_flow(&pot, &ch, alpha, grid)?;
        println!(
            "{:>4}: bound states {count}, sf(H_t) = {}, sf(H_t + alpha) = {}",
            ch.label(),
            f.sf_unshifted,
            f.sf_shifted
        );
    }
    Ok(())
}
