//! Reproducible pseudo-random polygons for property checks and reports.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::geometry::Polygon;

/// Deterministic stream for a given seed.
pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// n-gon with vertices uniform in [-1, 1]^2. Resamples in the
/// measure-zero event that all vertices coincide.
pub fn random_polygon(n: usize, rng: &mut impl Rng) -> Polygon {
    assert!(n >= 3, "need at least 3 vertices");
    loop {
        let vertices: Vec<[f64; 2]> = (0..n)
            .map(|_| [rng.gen_range(-1.0..=1.0), rng.gen_range(-1.0..=1.0)])
            .collect();
        if let Ok(p) = Polygon::new(vertices) {
            return p;
        }
    }
}
