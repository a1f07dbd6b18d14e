use std::sync::Arc;

use aq_core::catalog;
use aq_core::fock::{bargmann_toeplitz, FockSpace};
use aq_core::ring::{q, PolyFn};
use aq_core::star::{star, total_symbol_extract, ExtractionSpec, FlatFrameConfig};

fn monomial(a: u32, b: u32) -> PolyFn {
    PolyFn::monomial(2, vec![a, b], q(1, 1))
}

#[test]
fn extracted_symbols_match_exact_product() {
    let a = catalog::tangent(1);
    let cfg = FlatFrameConfig::new(&a, &catalog::standard_omega_matrix(2, 2), None).unwrap();
    let space = Arc::new(FockSpace::new(1, 32));
    let mut pairs = Vec::new();
    for d1 in 0..=4u32 {
        for a1 in 0..=d1 {
            for d2 in 0..=4 - d1 {
                for a2 in 0..=d2 {
                    pairs.push(((a1, d1 - a1), (a2, d2 - a2)));
                }
            }
        }
    }
    let mut worst: f64 = 0.0;
    for ((a1, b1), (a2, b2)) in pairs {
        let f = monomial(a1, b1);
        let g = monomial(a2, b2);
        let exact = star(&cfg, &f.complexify(), &g.complexify(), 2).unwrap();
        let fam = |h: f64| {
            let tf = bargmann_toeplitz(&f, h, space.clone())?;
            let tg = bargmann_toeplitz(&g, h, space.clone())?;
            Ok(tf.mul(&tg))
        };
        let spec = ExtractionSpec::standard(1, 2, a1 + b1 + a2 + b2);
        let ex = total_symbol_extract(fam, space.clone(), &spec).unwrap();
        for k in 0..=2 {
            let d = ex.coeffs[k].distance_to(exact.coeff(k));
            assert!(d < 1e-4, "x^{a1} y^{b1} * x^{a2} y^{b2}, order {k}: {d:e}");
            worst = worst.max(d);
        }
    }
    assert!(worst < 1e-4);
}
