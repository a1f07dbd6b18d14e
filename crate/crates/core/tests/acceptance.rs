//! Acceptance suite: one line per criterion, nonzero exit status if any fails.

use std::sync::Arc;
use std::time::{Duration, Instant};

use aq_core::catalog::{self, all_examples, standard_omega_matrix};
use aq_core::fock::{
    bargmann_toeplitz, compatible_j, convergence_order_fit, purify_projector, quantize_symbol, random_near_projector,
    standard_omega, FockOperator, FockSpace, PurifyOptions, QuadratureSpec,
};
use aq_core::heisenberg::{
    bch_multiply, dilation, fiber_decompose, ground_state_symbol, GroupElement, OsculatingFiber,
};
use aq_core::linalg::PolyMatrix;
use aq_core::random::random_poly;
use aq_core::ring::q;
use aq_core::star::{
    check_associativity, commutator_check, oracle_compare, total_symbol_extract, ExtractionSpec, FlatFrameConfig,
    OracleSpec,
};
use aq_core::symplectic::{
    central_extension, contact_form_check, dirac_bracket_on_s, induced_poisson, poisson_bracket,
    schouten_jacobi, LiePoissonSign, PoissonBivector,
};
use aq_core::{ce_differential, check_axioms, parse_poly, AlgebroidPresentation, Chart, EtaLaurent, FrameKForm, PolyFn, Q};
use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond { Ok(()) } else { Err(msg()) }
}

fn within(elapsed: Duration, limit: f64, what: &str) -> Result<(), String> {
    ensure(elapsed.as_secs_f64() < limit, || format!("{what} took {:.2}s, limit {limit}s", elapsed.as_secs_f64()))
}

fn bivector(chart: &Chart, entries: &[(usize, usize, &str)]) -> PoissonBivector {
    let n = chart.dim();
    let mut pi: PolyMatrix = vec![vec![PolyFn::zero(n); n]; n];
    for &(a, b, src) in entries {
        let p = parse_poly(src, chart).expect("valid expression");
        pi[b][a] = -&p;
        pi[a][b] = p;
    }
    PoissonBivector::new(chart.clone(), pi)
}

fn same_bivector(got: &PoissonBivector, want: &PoissonBivector) -> Result<(), String> {
    ensure(got == want, || format!("got [{}], expected [{}]", got.lines().join("; "), want.lines().join("; ")))
}

fn criterion_1() -> Outcome {
    let cases: Vec<(&str, AlgebroidPresentation, Vec<(usize, usize, &str)>)> = vec![
        ("b n=1", catalog::b_algebroid(1), vec![(0, 1, "f")]),
        ("b n=2", catalog::b_algebroid(2), vec![(0, 2, "f"), (1, 3, "1")]),
        ("0 n=1", catalog::zero_algebroid(1), vec![(0, 1, "f^2")]),
    ];
    let mut lines = Vec::new();
    for (name, a, entries) in cases {
        let t = Instant::now();
        let om = standard_omega_matrix(a.nvars(), a.rank());
        let pi = induced_poisson(&a, &om).map_err(|e| format!("{name}: {e}"))?;
        same_bivector(&pi, &bivector(a.chart(), &entries)).map_err(|e| format!("{name}: {e}"))?;
        within(t.elapsed(), 1.0, name)?;
        lines.push(format!("{name}: {}", pi.lines().join(", ")));
    }
    Ok(lines.join("; "))
}

fn criterion_2() -> Outcome {
    let t = Instant::now();
    for ex in all_examples() {
        let pi = induced_poisson(&ex.algebroid, &ex.omega).map_err(|e| format!("{}: {e}", ex.name))?;
        let s = schouten_jacobi(&pi);
        ensure(s.is_zero(), || format!("{}: [pi,pi] has {}", ex.name, s.first_nonzero().unwrap_or_default()))?;
    }
    let chart = catalog::phase_space_chart(2);
    let bad = bivector(&chart, &[(0, 1, "y1"), (2, 3, "1")]);
    let s = schouten_jacobi(&bad);
    let witness = s.first_nonzero().ok_or("mutated bivector passed the Schouten check")?;
    within(t.elapsed(), 5.0, "Schouten suite")?;
    Ok(format!("{} bundled examples Poisson; mutation witness {witness}", all_examples().len()))
}

fn mutated_b2() -> (AlgebroidPresentation, PolyMatrix) {
    let a = catalog::b_algebroid(2);
    let mut om = standard_omega_matrix(4, 4);
    let x3 = parse_poly("x3", a.chart()).expect("valid expression");
    om[1][0] = -&x3;
    om[0][1] = x3;
    (a, om)
}

fn criterion_3() -> Outcome {
    let mut notes = Vec::new();
    let closed = [("b n=1", catalog::b_algebroid(1)), ("b n=2", catalog::b_algebroid(2))];
    let mut cases: Vec<(&str, AlgebroidPresentation, PolyMatrix)> = closed
        .into_iter()
        .map(|(n, a)| {
            let om = standard_omega_matrix(a.nvars(), a.rank());
            (n, a, om)
        })
        .collect();
    let (a, om) = mutated_b2();
    cases.push(("b n=2, omega_12 = x3", a, om));
    for (name, a, om) in cases {
        let form = FrameKForm::from_matrix(a.nvars(), &om);
        let d_zero = if a.rank() < 3 {
            true
        } else {
            ce_differential(&a, &form).map_err(|e| format!("{name}: {e}"))?.is_zero()
        };
        let e = central_extension(&a, &om).map_err(|e| format!("{name}: {e}"))?;
        let jac = check_axioms(&e.algebroid).jacobi.passed;
        ensure(jac == d_zero, || format!("{name}: Jacobi {jac} but d omega = 0 is {d_zero}"))?;
        notes.push(format!("{name}: d omega = 0 {d_zero}, Jacobi {jac}"));
    }
    ensure(notes.iter().any(|n| n.contains("Jacobi false")), || "no failing direction exercised".into())?;
    Ok(notes.join("; "))
}

fn criterion_4() -> Outcome {
    let mut n = 0;
    for ex in all_examples() {
        let e = central_extension(&ex.algebroid, &ex.omega).map_err(|e| format!("{}: {e}", ex.name))?;
        let v = contact_form_check(&e);
        ensure(v.matches_pullback && v.passed(), || format!("{}: {:?}", ex.name, v.witness))?;
        n += 1;
    }
    Ok(format!("d theta = pr* omega on {n} extensions"))
}

fn criterion_5() -> Outcome {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for (name, a) in [("tangent R^2", catalog::tangent(1)), ("b-frame", catalog::b_algebroid(1))] {
        let om = standard_omega_matrix(a.nvars(), a.rank());
        let pi = induced_poisson(&a, &om).map_err(|e| e.to_string())?;
        let e = central_extension(&a, &om).map_err(|e| e.to_string())?;
        for trial in 0..50 {
            let f = random_poly(&mut rng, a.nvars(), 3, 5);
            let g = random_poly(&mut rng, a.nvars(), 3, 5);
            let lhs = dirac_bracket_on_s(&e, &f, &g, LiePoissonSign::Minus).map_err(|e| e.to_string())?;
            let rhs = EtaLaurent::term(poisson_bracket(&pi, &f, &g).map_err(|e| e.to_string())?, -1);
            ensure(lhs == rhs, || format!("{name}, pair {trial}: {lhs:?} vs {rhs:?}"))?;
        }
    }
    within(t.elapsed(), 10.0, "Dirac suite")?;
    Ok("100 pairs exact".into())
}

fn criterion_6() -> Outcome {
    let mut worst_defect: f64 = 0.0;
    let mut max_iter = 0;
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for seed in 0..50 {
        let s0 = random_near_projector(20, 0.1, seed);
        let p = purify_projector(&s0, &PurifyOptions::default()).map_err(|e| format!("seed {seed}: {e}"))?;
        ensure((p.residuals[0] - 0.1).abs() < 1e-9, || format!("seed {seed}: initial defect {}", p.residuals[0]))?;
        worst_defect = worst_defect.max(p.max_identity_defect());
        max_iter = max_iter.max(p.iterations());
        let order = convergence_order_fit(&p.residuals, 1e-13).ok_or(format!("seed {seed}: too few residuals"))?;
        lo = lo.min(order);
        hi = hi.max(order);
        ensure(*p.residuals.last().unwrap() <= 1e-12, || format!("seed {seed}: final residual"))?;
    }
    ensure(worst_defect <= 1e-12, || format!("identity defect {worst_defect:e}"))?;
    ensure(max_iter <= 5, || format!("{max_iter} iterations"))?;
    ensure(lo >= 1.9 && hi <= 2.1, || format!("fitted order range [{lo:.3}, {hi:.3}]"))?;
    Ok(format!("max defect {worst_defect:.1e}, at most {max_iter} iterations, order in [{lo:.3}, {hi:.3}]"))
}

fn flat_config(a: &AlgebroidPresentation) -> Result<FlatFrameConfig, String> {
    FlatFrameConfig::new(a, &standard_omega_matrix(a.nvars(), a.rank()), None).map_err(|e| e.to_string())
}

fn criterion_7() -> Outcome {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for (name, a) in [("tangent R^2", catalog::tangent(1)), ("b-frame", catalog::b_algebroid(1))] {
        let cfg = flat_config(&a)?;
        for trial in 0..100 {
            let f = random_poly(&mut rng, 2, 4, 5);
            let g = random_poly(&mut rng, 2, 4, 5);
            let v = commutator_check(&cfg, &f, &g, None).map_err(|e| e.to_string())?;
            ensure(v.passed(), || format!("{name}, pair {trial}: {v:?}"))?;
        }
        let rep = check_associativity(&cfg, 6, 100, 4, 17);
        ensure(rep.passed(), || format!("{name}: associativity defect {:?}", rep.witness))?;
    }
    within(t.elapsed(), 60.0, "star suite")?;
    Ok("200 pairs satisfy both axioms; associativity exact through order 6 on 200 triples".into())
}

fn criterion_8() -> Outcome {
    let a = catalog::tangent(1);
    let cfg = flat_config(&a)?;
    let spec = OracleSpec::default();
    let mut notes = Vec::new();
    for (fs, gs) in [("x", "y"), ("x^2", "y^2"), ("x*y", "x + y")] {
        let f = parse_poly(fs, a.chart()).map_err(|e| e.to_string())?;
        let g = parse_poly(gs, a.chart()).map_err(|e| e.to_string())?;
        for order in [1, 2] {
            let rep = oracle_compare(&cfg, &f, &g, order, &spec).map_err(|e| e.to_string())?;
            ensure(rep.passed(), || format!("({fs}, {gs}) N={order}: slope {:?}", rep.slope))?;
            notes.push(match rep.slope {
                Some(s) => format!("({fs},{gs}) N={order} slope {s:.2}"),
                None => format!("({fs},{gs}) N={order} remainder at floor"),
            });
        }
    }
    let space = Arc::new(FockSpace::new(1, 32));
    let x = parse_poly("x", a.chart()).map_err(|e| e.to_string())?;
    let y = parse_poly("y", a.chart()).map_err(|e| e.to_string())?;
    let fam = |h: f64| {
        let tx = bargmann_toeplitz(&x, h, space.clone())?;
        let ty = bargmann_toeplitz(&y, h, space.clone())?;
        Ok(tx.commutator(&ty))
    };
    let ex = total_symbol_extract(fam, space.clone(), &ExtractionSpec::standard(1, 1, 2)).map_err(|e| e.to_string())?;
    let f1 = ex.coeffs[1].coeff(&[0, 0]);
    let err = (f1 - Complex64::new(0.0, -1.0)).norm();
    ensure(err < 1e-4, || format!("extracted f1 = {f1}"))?;
    notes.push(format!("f1 of [T_x,T_y] = {:.6}{:+.6}i", f1.re, f1.im));
    Ok(notes.join("; "))
}

fn criterion_9() -> Outcome {
    let c = compatible_j(&standard_omega(1), &DMatrix::identity(2, 2)).map_err(|e| e.to_string())?;
    let fiber = OsculatingFiber::new(vec![], vec![vec![0.0, 1.0], vec![-1.0, 0.0]]).map_err(|e| e.to_string())?;
    let jm: Vec<Vec<f64>> = (0..2).map(|i| (0..2).map(|j| c.j[(i, j)]).collect()).collect();
    let s0 = ground_state_symbol(&fiber, &jm).map_err(|e| e.to_string())?;
    let space = Arc::new(FockSpace::new(1, 16));
    let qz = quantize_symbol(&s0, 1.0, space.clone(), &c, &QuadratureSpec::default()).map_err(|e| e.to_string())?;
    let sv = qz.op.singular_values();
    let ratio = sv[1] / sv[0];
    ensure(ratio <= 1e-4, || format!("sigma2/sigma1 = {ratio:e}"))?;
    let normalized = qz.op.scale(qz.op.trace().inv());
    let dist = normalized.sub(&FockOperator::vacuum_projector(space)).norm();
    ensure(dist <= 1e-4, || format!("distance to vacuum projector {dist:e}"))?;
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let xi = [rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0)];
        let eta = rng.random_range(0.1..3.0);
        let lam: f64 = rng.random_range(0.2..5.0);
        let scaled = s0.eval(&[lam * xi[0], lam * xi[1]], lam * lam * eta);
        worst = worst.max((scaled - s0.eval(&xi, eta)).abs());
    }
    ensure(worst <= 1e-12, || format!("homogeneity defect {worst:e}"))?;
    Ok(format!("sigma2/sigma1 = {ratio:.1e}, vacuum distance {dist:.1e}, homogeneity defect {worst:.1e}"))
}

fn rand_q(rng: &mut ChaCha8Rng) -> Q {
    q(rng.random_range(-30..=30), rng.random_range(1..=8))
}

fn std_q_omega(r: usize) -> Vec<Vec<Q>> {
    let m = standard_omega_matrix(0, r);
    m.iter().map(|row| row.iter().map(|p| p.as_constant().expect("constant")).collect()).collect()
}

fn criterion_10() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let fibers: Vec<OsculatingFiber<Q>> = vec![
        OsculatingFiber::new(vec![], std_q_omega(2)).map_err(|e| e.to_string())?,
        OsculatingFiber::new(vec![], std_q_omega(4)).map_err(|e| e.to_string())?,
    ];
    for i in 0..1000 {
        let f = &fibers[i % 2];
        let r = f.dim();
        let mut el = || GroupElement::new((0..r).map(|_| rand_q(&mut rng)).collect(), rand_q(&mut rng));
        let (g, h, k) = (el(), el(), el());
        let m = |a: &GroupElement<Q>, b: &GroupElement<Q>| bch_multiply(f, a, b).expect("same fiber");
        ensure(m(&m(&g, &h), &k) == m(&g, &m(&h, &k)), || format!("associativity fails on triple {i}"))?;
        let lam = q(rng.random_range(1..=9), rng.random_range(1..=5));
        let d = |a: &GroupElement<Q>| dilation(f, &lam, a).expect("positive scale");
        ensure(d(&m(&g, &h)) == m(&d(&g), &d(&h)), || format!("dilation not a homomorphism on triple {i}"))?;
    }
    for trial in 0..40 {
        let k = 1 + trial % 2;
        let r = 2 * k + 1 + trial % 3;
        let b: Vec<Vec<Q>> = (0..2 * k).map(|_| (0..r).map(|_| rand_q(&mut rng)).collect()).collect();
        let om_k = std_q_omega(2 * k);
        let zero = Q::from_integer(BigInt::from(0));
        let mut om = vec![vec![zero.clone(); r]; r];
        for i in 0..r {
            for j in 0..r {
                let mut acc = zero.clone();
                for a in 0..2 * k {
                    for c in 0..2 * k {
                        acc += &b[a][i] * &om_k[a][c] * &b[c][j];
                    }
                }
                om[i][j] = acc;
            }
        }
        let f = OsculatingFiber::new(vec![], om.clone()).map_err(|e| e.to_string())?;
        let s = fiber_decompose(&f);
        ensure(s.v_dim() <= 2 * k && s.v_dim() + s.k_basis.len() == r, || format!("trial {trial}: bad split"))?;
        ensure(s.reconstruct() == om, || format!("trial {trial}: reconstruction differs"))?;
    }
    Ok("1000 triples associative and dilation-equivariant; 40 rank-deficient forms reconstructed".into())
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("induced Poisson tensors", criterion_1),
        ("Schouten certification", criterion_2),
        ("central extension Jacobi iff closed", criterion_3),
        ("contact form identity", criterion_4),
        ("Dirac bracket identity", criterion_5),
        ("purification", criterion_6),
        ("star product axioms", criterion_7),
        ("Toeplitz oracle consistency", criterion_8),
        ("ground-state symbol", criterion_9),
        ("osculating group", criterion_10),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let res = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let secs = t.elapsed().as_secs_f64();
        match res {
            Ok(detail) => println!("PASS {:>2} {name} ({secs:.2}s): {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name} ({secs:.2}s): {detail}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
