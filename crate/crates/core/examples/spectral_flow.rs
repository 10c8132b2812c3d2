//! Spectral flow of random Hermitian paths by the Phillips definition, the crossing
//! count, the bounded transform and the analytic formula.

use levinson::flow::{
    bounded_transform_flow, crossing_count, spectral_flow_formula, spectral_flow_phillips, MatrixPath,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> levinson::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for dim in [2, 4, 8] {
        let path = MatrixPath::random_affine(dim, &mut rng)?;
        let ph = spectral_flow_phillips(&path)?;
        println!(
            "dim {dim}: Phillips {} (partition {}), crossings {}, bounded {}, formula s=1: {:.12}",
            ph.sf,
            ph.partition.len(),
            crossing_count(&path, 2000),
            bounded_transform_flow(&path)?,
            spectral_flow_formula(&path, 1.0)?
        );
    }
    Ok(())
}
