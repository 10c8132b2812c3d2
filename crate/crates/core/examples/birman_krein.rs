//! Box trace `Tr(f(H) - f(H₀))` against `∫ ξ f′` for 1D potentials.

use levinson::flow::{birman_krein_desk_check, BoxGrid, BumpFunction};
use levinson::potential::Potential;

fn main() -> levinson::Result<()> {
    let f = BumpFunction {
        lo: -3.0,
        hi: 9.0,
        height: 1.0,
    };
    let grid = BoxGrid {
        length: 40.0,
        points: 8000,
    };
    for pot in [Potential::well(1, 2.0, 1.0)?, Potential::bump(1, -3.0, 1.0)?] {
        let r = birman_krein_desk_check(&pot, &f, grid, 1)?;
        println!(
            "depth {}: trace {:.6} (box x2: {:.6})  integral {:.6}  bound states {:?}",
            pot.depth(),
            r.lhs,
            r.lhs_doubled,
            r.rhs,
            r.bound_states
        );
    }
    Ok(())
}
