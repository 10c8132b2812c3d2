//! Both sides of the Levinson identity for a few potentials.

use levinson::cli::levinson::{levinson_report, LevinsonOptions};
use levinson::potential::Potential;

fn main() -> levinson::Result<()> {
    let cases = [
        Potential::well(1, 2.0, 1.0)?,
        Potential::bump(2, 6.0, 1.0)?,
        Potential::well(3, 4.0, 1.0)?,
        Potential::well(3, (std::f64::consts::PI / 2.0).powi(2), 1.0)?,
    ];
    for pot in &cases {
        let r = levinson_report(pot, &LevinsonOptions::for_potential(pot))?;
        println!(
            "n={} depth={:.4}: -N = {:>3}  integral = {:>9.5}  beta = {:>8.5}  N_res = {:>4}  residual = {:.2e}",
            r.dimension,
            pot.depth(),
            -(r.n as i64),
            r.integral,
            r.beta_n,
            r.n_res,
            r.residual
        );
    }
    Ok(())
}
