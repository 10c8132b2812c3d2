//! `Tr(S*S′)` against the high-energy polynomial `pₙ` for smooth bumps.

use levinson::higher::high_energy;
use levinson::potential::Potential;
use levinson::scattering::{assemble, AssembleOptions};

fn main() -> levinson::Result<()> {
    for n in [3, 4] {
        let pot = Potential::bump(n, 10.0, 1.0)?;
        let (_, curve) = assemble(&pot, &AssembleOptions::for_potential(&pot))?;
        let h = high_energy(n, &pot.moments(1e-12)?)?;
        println!("n={n}: beta = {:.6e}, coefficients {:?}", h.beta_n, h.c);
        for (i, &lam) in curve.grid.iter().enumerate().step_by(40) {
            let pn = h.pn(lam).im;
            let tr = curve.tr[i].im;
            println!(
                "  lambda {lam:>10.3e}  Im tr {tr:>12.5e}  Im p_n {pn:>12.5e}  diff {:>10.3e}",
                tr - pn
            );
        }
    }
    Ok(())
}
