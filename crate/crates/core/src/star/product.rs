use std::collections::HashMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{FlatFrameConfig, StarError};
use crate::random::random_poly;
use crate::ring::{imag_unit, CPoly, FormalSeries, PolyFn, QI};
use crate::symplectic::poisson_bracket;

/// Truncated series `sum f_k hbar^k` with Gaussian-rational polynomial coefficients.
pub type FormalFunction = FormalSeries<QI>;

/// Memoized `D^alpha p`.
struct Derivatives<'a> {
    cfg: &'a FlatFrameConfig,
    memo: HashMap<Vec<u32>, CPoly>,
}

impl<'a> Derivatives<'a> {
    fn new(cfg: &'a FlatFrameConfig, p: &CPoly) -> Self {
        let mut memo = HashMap::new();
        memo.insert(vec![0; cfg.rank()], p.clone());
        Derivatives { cfg, memo }
    }

    fn get(&mut self, alpha: &[u32]) -> CPoly {
        if let Some(p) = self.memo.get(alpha) {
            return p.clone();
        }
        let i = alpha.iter().position(|&a| a > 0).expect("nonzero multi-index");
        let mut lower = alpha.to_vec();
        lower[i] -= 1;
        let base = self.get(&lower);
        let out = if base.is_zero() { base } else { self.cfg.apply_d(i, &base) };
        self.memo.insert(alpha.to_vec(), out.clone());
        out
    }
}

fn check_chart(cfg: &FlatFrameConfig, p: &CPoly) -> Result<(), StarError> {
    if p.nvars() != cfg.nvars() {
        return Err(StarError::ChartMismatch { expected: cfg.nvars(), found: p.nvars() });
    }
    Ok(())
}

/// Order-`k` bidifferential term `B_k(f, g)`.
fn bidiff(cfg: &FlatFrameConfig, k: usize, df: &mut Derivatives, dg: &mut Derivatives) -> CPoly {
    let mut acc = CPoly::zero(cfg.nvars());
    for (alpha, beta, coef) in cfg.kernel(k).iter() {
        let a = df.get(alpha);
        if a.is_zero() {
            continue;
        }
        let b = dg.get(beta);
        if b.is_zero() {
            continue;
        }
        acc += &(&(coef * &a) * &b);
    }
    acc
}

/// `f * g = sum_k hbar^k B_k(f, g)` through order `order`, with
/// `B_k = (1/k!) (sum Lambda^{ij} D_i (x) D_j)^k`.
pub fn star(cfg: &FlatFrameConfig, f: &CPoly, g: &CPoly, order: usize) -> Result<FormalFunction, StarError> {
    check_chart(cfg, f)?;
    check_chart(cfg, g)?;
    let mut df = Derivatives::new(cfg, f);
    let mut dg = Derivatives::new(cfg, g);
    let coeffs = (0..=order).map(|k| bidiff(cfg, k, &mut df, &mut dg)).collect();
    Ok(FormalSeries::from_coeffs(coeffs))
}

/// Star product of truncated series, extended `hbar`-bilinearly.
pub fn star_series(cfg: &FlatFrameConfig, a: &FormalFunction, b: &FormalFunction, order: usize) -> FormalFunction {
    let n = cfg.nvars();
    let mut out = vec![CPoly::zero(n); order + 1];
    let mut das: Vec<Derivatives> = (0..=order.min(a.order())).map(|i| Derivatives::new(cfg, a.coeff(i))).collect();
    let mut dbs: Vec<Derivatives> = (0..=order.min(b.order())).map(|j| Derivatives::new(cfg, b.coeff(j))).collect();
    for (i, da) in das.iter_mut().enumerate() {
        if a.coeff(i).is_zero() {
            continue;
        }
        for (j, db) in dbs.iter_mut().enumerate() {
            if i + j > order || b.coeff(j).is_zero() {
                continue;
            }
            for k in 0..=order - i - j {
                let t = bidiff(cfg, k, da, db);
                if !t.is_zero() {
                    out[i + j + k] += &t;
                }
            }
        }
    }
    FormalSeries::from_coeffs(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct AssociativityReport {
    pub trials: usize,
    pub order: usize,
    /// Lowest order at which some trial had a nonzero defect.
    pub first_nonzero_order: Option<usize>,
    /// Trial index, order and defect polynomial of the first failure.
    pub witness: Option<(usize, usize, String)>,
}

impl AssociativityReport {
    pub fn passed(&self) -> bool {
        self.first_nonzero_order.is_none()
    }
}

/// `(f*g)*h - f*(g*h)` through `order` on seeded random triples.
pub fn check_associativity(
    cfg: &FlatFrameConfig,
    order: usize,
    trials: usize,
    max_degree: u32,
    seed: u64,
) -> AssociativityReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = cfg.nvars();
    let triples: Vec<[CPoly; 3]> = (0..trials)
        .map(|_| std::array::from_fn(|_| random_poly(&mut rng, n, max_degree, 4).complexify()))
        .collect();
    use rayon::prelude::*;
    let defects: Vec<Option<(usize, String)>> = triples
        .par_iter()
        .map(|[f, g, h]| {
            let fg = star(cfg, f, g, order).expect("chart checked");
            let gh = star(cfg, g, h, order).expect("chart checked");
            let lhs = star_series(cfg, &fg, &FormalSeries::from_poly(h.clone(), order), order);
            let rhs = star_series(cfg, &FormalSeries::from_poly(f.clone(), order), &gh, order);
            (0..=order).find_map(|k| {
                let d = lhs.coeff(k) - rhs.coeff(k);
                (!d.is_zero()).then(|| (k, d.format_with(|a| cfg.algebroid().chart().name(a).to_string())))
            })
        })
        .collect();
    let mut report = AssociativityReport { trials, order, first_nonzero_order: None, witness: None };
    for (t, d) in defects.into_iter().enumerate() {
        if let Some((k, p)) = d {
            if report.first_nonzero_order.is_none_or(|m| k < m) {
                report.first_nonzero_order = Some(k);
            }
            if report.witness.is_none() {
                report.witness = Some((t, k, p));
            }
        }
    }
    report
}

#[derive(Debug, Clone, PartialEq)]
pub struct CommutatorVerdict {
    /// Order-0 coefficient equals `f g`.
    pub order0_ok: bool,
    /// Order-1 coefficient of `f*g - g*f` equals `t {f, g}`.
    pub order1_ok: bool,
    pub bracket: PolyFn,
    pub order1_commutator: CPoly,
}

impl CommutatorVerdict {
    pub fn passed(&self) -> bool {
        self.order0_ok && self.order1_ok
    }
}

/// Checks `f*g = fg + O(hbar)` and `f*g - g*f = t hbar {f, g} + O(hbar^2)`,
/// with `t = -i` for the default deformation parameter `-i hbar`.
pub fn commutator_check(cfg: &FlatFrameConfig, f: &PolyFn, g: &PolyFn, t: Option<QI>) -> Result<CommutatorVerdict, StarError> {
    let t = t.unwrap_or_else(|| -imag_unit());
    let (fc, gc) = (f.complexify(), g.complexify());
    let fg = star(cfg, &fc, &gc, 1)?;
    let gf = star(cfg, &gc, &fc, 1)?;
    let order0_ok = *fg.coeff(0) == &fc * &gc;
    let bracket = poisson_bracket(cfg.poisson(), f, g)?;
    let order1_commutator = fg.coeff(1) - gf.coeff(1);
    let order1_ok = order1_commutator == bracket.complexify().scale(&t);
    Ok(CommutatorVerdict { order0_ok, order1_ok, bracket, order1_commutator })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::ring::{gauss, parse_poly, q};
    use proptest::prelude::*;

    fn cfg_of(a: &crate::AlgebroidPresentation) -> FlatFrameConfig {
        FlatFrameConfig::new(a, &catalog::standard_omega_matrix(a.nvars(), a.rank()), None).unwrap()
    }

    #[test]
    fn unit_and_canonical_pair() {
        let a = catalog::tangent(1);
        let cfg = cfg_of(&a);
        let x = parse_poly("x", a.chart()).unwrap().complexify();
        let y = parse_poly("y", a.chart()).unwrap().complexify();
        let one = CPoly::one(2);
        let f = parse_poly("x^3*y - 2*y^2 + 1/3", a.chart()).unwrap().complexify();
        let s = star(&cfg, &f, &one, 4).unwrap();
        assert_eq!(s, FormalSeries::from_poly(f.clone(), 4));
        let xy = star(&cfg, &x, &y, 3).unwrap();
        let yx = star(&cfg, &y, &x, 3).unwrap();
        let c = &xy - &yx;
        assert!(c.coeff(0).is_zero());
        assert_eq!(*c.coeff(1), CPoly::constant(2, -imag_unit()));
        assert!(c.coeff(2).is_zero() && c.coeff(3).is_zero());
        // first-order term of x*y is Lambda^{12}
        assert_eq!(*xy.coeff(1), CPoly::constant(2, gauss(q(0, 1), q(-1, 2))));
    }

    #[test]
    fn b_frame_commutator() {
        let a = catalog::b_algebroid(1);
        let cfg = cfg_of(&a);
        let f = parse_poly("f", a.chart()).unwrap();
        let x2 = parse_poly("x2", a.chart()).unwrap();
        let v = commutator_check(&cfg, &f, &x2, None).unwrap();
        assert!(v.passed());
        assert_eq!(v.order1_commutator, f.complexify().scale(&-imag_unit()));
        let fx = star(&cfg, &f.complexify(), &x2.complexify(), 2).unwrap();
        let xf = star(&cfg, &x2.complexify(), &f.complexify(), 2).unwrap();
        // D_1^2 f = f, D_2 x2 = 1, D_2^2 x2 = 0: the second order vanishes
        assert!((&fx - &xf).coeff(2).is_zero());
        assert_eq!(*fx.coeff(2), CPoly::zero(2));
    }

    #[test]
    fn associativity_small() {
        for a in [catalog::tangent(1), catalog::b_algebroid(1)] {
            let cfg = cfg_of(&a);
            let rep = check_associativity(&cfg, 4, 5, 3, 1);
            assert!(rep.passed(), "{:?}", rep.witness);
        }
    }

    #[test]
    fn nonconstant_tensor_breaks_associativity() {
        let a = catalog::tangent(1);
        let cfg = cfg_of(&a);
        let mut lam = cfg.lambda().to_vec();
        let x = parse_poly("x", a.chart()).unwrap().complexify();
        lam[1][1] = &lam[1][1] + &x.scale(&gauss(q(-1, 1), q(0, 1)));
        let bad = cfg.clone().with_lambda(lam);
        let rep = check_associativity(&bad, 3, 10, 3, 2);
        assert!(!rep.passed());
        assert!(rep.first_nonzero_order.unwrap() <= 3);
    }

    #[test]
    fn chart_mismatch() {
        let cfg = cfg_of(&catalog::tangent(1));
        let p = CPoly::one(3);
        assert!(matches!(star(&cfg, &p, &p, 1), Err(StarError::ChartMismatch { .. })));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn hermitian_symmetry_and_axioms(seed in 0u64..1000) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for a in [catalog::tangent(1), catalog::b_algebroid(1)] {
                let cfg = cfg_of(&a);
                let f = random_poly(&mut rng, 2, 3, 4);
                let g = random_poly(&mut rng, 2, 3, 4);
                prop_assert!(commutator_check(&cfg, &f, &g, None).unwrap().passed());
                let fg = star(&cfg, &f.complexify(), &g.complexify(), 3).unwrap();
                let gf = star(&cfg, &g.complexify(), &f.complexify(), 3).unwrap();
                for k in 0..=3 {
                    prop_assert_eq!(fg.coeff(k).conj(), gf.coeff(k).clone());
                }
            }
        }
    }
}
