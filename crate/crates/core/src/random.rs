//! Seeded random polynomials for property suites and benchmarks.

use rand::Rng;

use crate::ring::{q, PolyFn};

/// Random polynomial with at most `nterms` terms of total degree at most
/// `max_degree` and small rational coefficients.
pub fn random_poly<R: Rng>(rng: &mut R, nvars: usize, max_degree: u32, nterms: usize) -> PolyFn {
    if nvars == 0 {
        return PolyFn::constant(0, q(rng.random_range(-5..=5), rng.random_range(1..=3)));
    }
    let terms = (0..nterms).map(|_| {
        let deg = rng.random_range(0..=max_degree);
        let mut e = vec![0u32; nvars];
        for _ in 0..deg {
            e[rng.random_range(0..nvars)] += 1;
        }
        let mut num = rng.random_range(-5i64..=5);
        if num == 0 {
            num = 1;
        }
        (e, q(num, rng.random_range(1..=3)))
    });
    PolyFn::from_terms(nvars, terms)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn degree_bound_and_determinism() {
        let mut a = ChaCha8Rng::seed_from_u64(5);
        let mut b = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let p = random_poly(&mut a, 3, 4, 6);
            assert!(p.degree().unwrap_or(0) <= 4);
            assert_eq!(p, random_poly(&mut b, 3, 4, 6));
        }
    }
}
