//! Partial-wave phase shifts of a 3D square well against the s-wave closed form.

use levinson::potential::Potential;
use levinson::radial::{phase_shift, Channel};

fn main() -> levinson::Result<()> {
    let (d, a) = (4.0, 1.0);
    let pot = Potential::well(3, d, a)?;
    println!("{:>8} {:>14} {:>14} {:>14}", "k", "delta_0", "closed form", "delta_1");
    for k in [0.1, 0.5, 1.0, 2.0, 5.0, 10.0] {
        let lambda = k * k;
        let d0 = phase_shift(&pot, &Channel::new(3, 0)?, lambda, 1e-12)?;
        let d1 = phase_shift(&pot, &Channel::new(3, 1)?, lambda, 1e-12)?;
        let kappa = (lambda + d).sqrt();
        let exact = ((k / kappa) * (kappa * a).tan()).atan() - k * a;
        let exact = exact - std::f64::consts::PI * ((exact - d0) / std::f64::consts::PI).round();
        println!("{k:>8.2} {d0:>14.10} {exact:>14.10} {d1:>14.10}");
    }
    Ok(())
}
