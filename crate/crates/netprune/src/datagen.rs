//! Seeded synthetic instance generators for tests, benches, and the CLI.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::geom::{Point, WeightedPoint};

fn rng_for(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `n` points uniform in the axis-aligned box `[0, extent]^dim`.
pub fn uniform_box(n: usize, dim: usize, extent: f64, seed: u64) -> Vec<WeightedPoint> {
    let mut rng = rng_for(seed);
    (0..n)
        .map(|_| {
            let coords: Vec<f64> = (0..dim).map(|_| rng.gen::<f64>() * extent).collect();
            WeightedPoint::unit(Point::from(coords))
        })
        .collect()
}

/// A mixture of `centers` Gaussian blobs with the given standard deviation,
/// centers themselves uniform in `[0, extent]^dim`.
pub fn gaussian_mixture(
    n: usize,
    dim: usize,
    centers: usize,
    extent: f64,
    sigma: f64,
    seed: u64,
) -> Vec<WeightedPoint> {
    let mut rng = rng_for(seed);
    let centers: Vec<Vec<f64>> = (0..centers.max(1))
        .map(|_| (0..dim).map(|_| rng.gen::<f64>() * extent).collect())
        .collect();
    (0..n)
        .map(|_| {
            let c = &centers[rng.gen_range(0..centers.len())];
            let coords: Vec<f64> = c
                .iter()
                .map(|&x| x + sigma * gauss(&mut rng))
                .collect();
            WeightedPoint::unit(Point::from(coords))
        })
        .collect()
}

/// Well-separated pairs: `pairs` anchor points uniform in `[0, extent]^dim`,
/// each with a partner at distance exactly `gap`. Exercises tiny
/// nearest-neighbor distances against a large spread.
pub fn tight_pairs(pairs: usize, dim: usize, extent: f64, gap: f64, seed: u64) -> Vec<WeightedPoint> {
    let mut rng = rng_for(seed);
    let mut out = Vec::with_capacity(pairs * 2);
    for _ in 0..pairs {
        let anchor: Vec<f64> = (0..dim).map(|_| rng.gen::<f64>() * extent).collect();
        let mut dir: Vec<f64> = (0..dim).map(|_| gauss(&mut rng)).collect();
        let norm = dir.iter().map(|x| x * x).sum::<f64>().sqrt().max(1e-12);
        for x in &mut dir {
            *x *= gap / norm;
        }
        let partner: Vec<f64> = anchor.iter().zip(&dir).map(|(a, d)| a + d).collect();
        out.push(WeightedPoint::unit(Point::from(anchor)));
        out.push(WeightedPoint::unit(Point::from(partner)));
    }
    out
}

/// Integer lattice points `{0, ..., side-1}^dim` (row-major, deterministic).
pub fn lattice(side: usize, dim: usize) -> Vec<WeightedPoint> {
    let mut out = Vec::new();
    let total = side.pow(dim as u32);
    for mut idx in 0..total {
        let mut coords = Vec::with_capacity(dim);
        for _ in 0..dim {
            coords.push((idx % side) as f64);
            idx /= side;
        }
        out.push(WeightedPoint::unit(Point::from(coords)));
    }
    out
}

/// Uniform points where each location is duplicated with multiplicity in
/// `1..=max_copies`, emitted as separate coincident points (not pre-merged).
/// Exercises the multiset ingestion path.
pub fn with_duplicates(
    n: usize,
    dim: usize,
    extent: f64,
    max_copies: u64,
    seed: u64,
) -> Vec<WeightedPoint> {
    let mut rng = rng_for(seed);
    let mut out = Vec::new();
    for _ in 0..n {
        let coords: Vec<f64> = (0..dim).map(|_| rng.gen::<f64>() * extent).collect();
        let copies = rng.gen_range(1..=max_copies.max(1));
        for _ in 0..copies {
            out.push(WeightedPoint::unit(Point::from(coords.clone())));
        }
    }
    out
}

fn gauss(rng: &mut ChaCha8Rng) -> f64 {
    // Box-Muller; one value per call is plenty here
    let u1: f64 = rng.gen::<f64>().max(1e-12);
    let u2: f64 = rng.gen();
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generators_are_deterministic_per_seed() {
        let a = uniform_box(50, 2, 10.0, 7);
        let b = uniform_box(50, 2, 10.0, 7);
        let c = uniform_box(50, 2, 10.0, 8);
        assert_eq!(a.len(), 50);
        assert!(a
            .iter()
            .zip(&b)
            .all(|(x, y)| x.point.same_location(&y.point)));
        assert!(a
            .iter()
            .zip(&c)
            .any(|(x, y)| !x.point.same_location(&y.point)));
    }

    #[test]
    fn tight_pairs_have_the_requested_gap() {
        let pts = tight_pairs(10, 3, 100.0, 0.01, 3);
        for pair in pts.chunks(2) {
            let d = pair[0].point.dist(&pair[1].point);
            assert!((d - 0.01).abs() < 1e-12, "{d}");
        }
    }

    #[test]
    fn lattice_has_expected_shape() {
        let pts = lattice(3, 2);
        assert_eq!(pts.len(), 9);
        assert!(pts
            .iter()
            .any(|p| p.point.coords() == [2.0, 2.0]));
    }

    #[test]
    fn duplicates_repeat_locations() {
        let pts = with_duplicates(20, 2, 5.0, 4, 11);
        assert!(pts.len() >= 20);
        let merged = crate::geom::merge_coincident(&pts);
        assert!(merged.len() <= 20);
        assert_eq!(
            merged.iter().map(|p| p.weight).sum::<u64>() as usize,
            pts.len()
        );
    }
}
