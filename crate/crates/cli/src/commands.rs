use std::path::Path;
use std::sync::Arc;

use aq_core::fock::{
    bargmann_toeplitz, convergence_order_fit, purify_projector, random_near_projector, FockError, FockSpace,
    PurifyOptions,
};
use aq_core::linalg::PolyMatrix;
use aq_core::random::random_poly;
use aq_core::star::{
    check_associativity, commutator_check, oracle_compare, star, total_symbol_extract, ExtractionSpec,
    FlatFrameConfig, OracleSpec,
};
use aq_core::symplectic::{
    central_extension, check_symplectic, contact_form_check, dirac_bracket_on_s, induced_poisson, poisson_bracket,
    schouten_jacobi, LiePoissonSign,
};
use aq_core::{check_axioms, parse_poly, Chart, EtaLaurent, PolyFn, Q};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::error::CliError;
use crate::report::RunReport;
use crate::specfile::{load, Loaded};

fn header(command: &str, spec: &Loaded, extra: serde_json::Value) -> RunReport {
    let mut rep = RunReport::new(command, json!({ "spec": spec.raw, "options": extra }));
    let a = &spec.algebroid;
    rep.line(format!("{}: rank {} over ({})", spec.name, a.rank(), a.chart().names().join(", ")));
    rep
}

fn poly_expr(src: &str, chart: &Chart, field: &str) -> Result<PolyFn, CliError> {
    parse_poly(src, chart).map_err(|e| CliError::Expr { field: field.to_string(), column: e.column(), msg: e.to_string() })
}

fn is_constant(m: &PolyMatrix) -> bool {
    m.iter().flatten().all(PolyFn::is_constant)
}

/// Algebroid axioms, closedness and nondegeneracy of the frame form, and the
/// same checks on the central extension. Returns whether everything passed.
fn symplectic_suite(rep: &mut RunReport, spec: &Loaded) -> Result<bool, CliError> {
    let a = &spec.algebroid;
    let chart = a.chart();
    let axioms = check_axioms(a);
    for c in axioms.checks() {
        let w = c.witness.as_ref().map(|(at, p)| format!("{at} = {}", p.to_string_with(chart)));
        rep.check(c.name, c.passed, w);
    }
    let v = check_symplectic(a, &spec.omega)?;
    let d_witness = v.d_omega.as_ref().and_then(|d| d.first_nonzero()).map(|(at, p)| format!("(d omega){at} = {}", p.to_string_with(chart)));
    rep.check("d omega = 0", v.closed, d_witness);
    let det = v.determinant.to_string_with(chart);
    rep.check(format!("det Omega = {det}"), v.nondegenerate, (!v.nondegenerate).then(|| "determinant is not a nonzero constant".to_string()));
    if !axioms.all_passed() {
        return Ok(false);
    }
    let e = central_extension(a, &spec.omega)?;
    let ext = check_axioms(&e.algebroid);
    let w = ext.jacobi.witness.as_ref().map(|(at, p)| format!("{at} = {}", p.to_string_with(chart)));
    rep.check("extension jacobi", ext.jacobi.passed, w);
    let c = contact_form_check(&e);
    let w = c.witness.as_ref().map(|(at, p)| format!("{at} = {}", p.to_string_with(chart)));
    rep.check("contact form d theta = pr* omega", c.passed(), w);
    Ok(rep.passed())
}

pub fn cmd_check(file: &Path) -> Result<RunReport, CliError> {
    let spec = load(file)?;
    let mut rep = header("check", &spec, json!({}));
    symplectic_suite(&mut rep, &spec)?;
    Ok(rep)
}

fn fmt_point(p: &[Q]) -> String {
    p.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")
}

pub fn cmd_poisson(file: &Path, seed: Option<u64>) -> Result<RunReport, CliError> {
    let spec = load(file)?;
    let seed = seed.or(spec.star.seed).unwrap_or(1);
    let trials = spec.star.trials;
    let mut rep = header("poisson", &spec, json!({ "seed": seed, "trials": trials }));
    if !symplectic_suite(&mut rep, &spec)? {
        return Ok(rep);
    }
    let a = &spec.algebroid;
    let chart = a.chart();
    let pi = induced_poisson(a, &spec.omega)?;
    let lines = pi.lines();
    if lines.is_empty() {
        rep.line("pi = 0");
    }
    for l in lines {
        rep.line(l);
    }
    let s = schouten_jacobi(&pi);
    rep.check("[pi,pi] = 0", s.is_zero(), s.first_nonzero());
    for p in &spec.points {
        let n = a.nvars();
        let mut entries = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let v = pi.entry(i, j).eval(p);
                if v != Q::from_integer(0.into()) {
                    entries.push(format!("pi[{}][{}] = {v}", i + 1, j + 1));
                }
            }
        }
        let body = if entries.is_empty() { "pi = 0".to_string() } else { entries.join(", ") };
        rep.line(format!("at ({}): {body}", fmt_point(p)));
    }
    if !is_constant(&spec.omega) {
        rep.line("dirac bracket: skipped, frame form is not constant");
        return Ok(rep);
    }
    let e = central_extension(a, &spec.omega)?;
    let n = a.nvars();
    let mut pairs: Vec<(PolyFn, PolyFn)> = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            pairs.push((PolyFn::var(n, i), PolyFn::var(n, j)));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..trials {
        pairs.push((random_poly(&mut rng, n, 3, 4), random_poly(&mut rng, n, 3, 4)));
    }
    let mut witness = None;
    for (f, g) in &pairs {
        let lhs = dirac_bracket_on_s(&e, f, g, LiePoissonSign::Minus)?;
        let rhs = EtaLaurent::term(poisson_bracket(&pi, f, g)?, -1);
        if lhs != rhs {
            witness = Some(format!("f = {}, g = {}", f.to_string_with(chart), g.to_string_with(chart)));
            break;
        }
    }
    rep.check(format!("dirac bracket = (1/eta){{f,g}} on {} pairs", pairs.len()), witness.is_none(), witness);
    Ok(rep)
}

fn flat_config(spec: &Loaded) -> Result<FlatFrameConfig, CliError> {
    Ok(FlatFrameConfig::new(&spec.algebroid, &spec.omega, spec.j.clone())?)
}

pub fn cmd_star(file: &Path, f: &str, g: &str, order: Option<usize>, seed: Option<u64>) -> Result<RunReport, CliError> {
    let spec = load(file)?;
    let order = order.unwrap_or(spec.star.order);
    let seed = seed.or(spec.star.seed).unwrap_or(1);
    let trials = spec.star.trials;
    let mut rep = header("star", &spec, json!({ "f": f, "g": g, "order": order, "seed": seed, "trials": trials }));
    let cfg = flat_config(&spec)?;
    let chart = spec.algebroid.chart();
    let fp = poly_expr(f, chart, "--f")?;
    let gp = poly_expr(g, chart, "--g")?;
    let r = cfg.rank();
    for a in 0..r {
        for b in 0..r {
            rep.line(format!("Lambda[{}][{}] = {}", a + 1, b + 1, cfg.lambda()[a][b].to_string_with(chart)));
        }
    }
    let s = star(&cfg, &fp.complexify(), &gp.complexify(), order)?;
    for (k, c) in s.coeffs().iter().enumerate() {
        rep.line(format!("order {k}: {}", c.to_string_with(chart)));
    }
    let v = commutator_check(&cfg, &fp, &gp, None)?;
    rep.line(format!("{{f,g}} = {}", v.bracket.to_string_with(chart)));
    rep.check("order 0 = f g", v.order0_ok, None);
    let w = (!v.order1_ok).then(|| format!("order-1 commutator {}", v.order1_commutator.to_string_with(chart)));
    rep.check("f*g - g*f = -i hbar {f,g} + O(hbar^2)", v.order1_ok, w);
    if trials > 0 {
        let assoc = check_associativity(&cfg, order, trials, 3, seed);
        let w = assoc.witness.as_ref().map(|(t, k, p)| format!("triple {t}, order {k}: {p}"));
        rep.check(format!("associativity through order {order} on {trials} triples"), assoc.passed(), w);
    }
    Ok(rep)
}

pub struct PurifyArgs {
    pub dim: usize,
    pub delta0: f64,
    pub tol: f64,
    pub max_iter: usize,
    pub symmetrize: bool,
    pub seed: u64,
}

pub fn cmd_purify(args: &PurifyArgs) -> Result<RunReport, CliError> {
    let mut rep = RunReport::new(
        "purify",
        json!({
            "dim": args.dim, "delta0": args.delta0, "tol": args.tol,
            "max_iter": args.max_iter, "symmetrize": args.symmetrize, "seed": args.seed,
        }),
    );
    if args.dim == 0 {
        return Err(CliError::Usage("--dim must be positive".into()));
    }
    if !(args.delta0 >= 0.0) {
        return Err(CliError::Usage("--delta0 must be nonnegative".into()));
    }
    if args.delta0 >= 0.25 {
        return Err(FockError::PurifyPrecondition(args.delta0).into());
    }
    let s0 = random_near_projector(args.dim, args.delta0, args.seed);
    let opts = PurifyOptions { tol: args.tol, max_iter: args.max_iter, symmetrize: args.symmetrize };
    let p = purify_projector(&s0, &opts)?;
    for (k, r) in p.residuals.iter().enumerate() {
        rep.line(format!("step {k}: ||S^2 - S|| = {r:.6e}"));
    }
    rep.line(format!("iterations: {}", p.iterations()));
    let defect = p.max_identity_defect();
    rep.check(
        format!("S'^2 - S' = -3 D^2 + 4 D^3 (max relative defect {defect:.3e})"),
        defect <= 1e-12,
        None,
    );
    match convergence_order_fit(&p.residuals, 1e-13) {
        Some(order) => {
            rep.check(format!("convergence order {order:.4}"), (1.9..=2.1).contains(&order), None);
        }
        None => rep.line("convergence order: too few residuals above 1e-13 to fit"),
    }
    Ok(rep)
}

pub struct OracleArgs<'a> {
    pub f: &'a str,
    pub g: &'a str,
    pub order: usize,
    pub cutoff: Option<usize>,
    pub buffer: Option<usize>,
    pub hbars: Option<Vec<f64>>,
    pub extract: bool,
}

pub fn cmd_oracle(file: &Path, args: &OracleArgs) -> Result<RunReport, CliError> {
    let spec = load(file)?;
    let mut ospec = OracleSpec {
        cutoff: args.cutoff.unwrap_or(spec.fock.cutoff),
        buffer: args.buffer.unwrap_or(spec.fock.buffer),
        ..OracleSpec::default()
    };
    if let Some(h) = &args.hbars {
        ospec.hbars = h.clone();
    }
    if ospec.hbars.len() < 2 || ospec.hbars.iter().any(|h| !(*h > 0.0)) {
        return Err(CliError::Usage("the hbar grid needs at least two positive values".into()));
    }
    if ospec.buffer >= ospec.cutoff {
        return Err(CliError::Usage("buffer must be below the cutoff".into()));
    }
    let mut rep = header(
        "oracle",
        &spec,
        json!({
            "f": args.f, "g": args.g, "order": args.order, "cutoff": ospec.cutoff,
            "buffer": ospec.buffer, "hbars": ospec.hbars, "extract": args.extract,
        }),
    );
    let cfg = flat_config(&spec)?;
    let chart = spec.algebroid.chart();
    let fp = poly_expr(args.f, chart, "--f")?;
    let gp = poly_expr(args.g, chart, "--g")?;
    let slope = oracle_compare(&cfg, &fp, &gp, args.order, &ospec)?;
    for (h, r) in &slope.points {
        rep.line(format!("hbar = {h:.6e}: R = {r:.6e}"));
    }
    let name = format!("remainder slope >= {}", args.order as f64 + 0.8);
    match slope.slope {
        Some(s) => rep.check(format!("{name} (fitted {s:.4})"), slope.passed(), None),
        None => rep.check(format!("{name} (remainder at floating-point floor)"), slope.passed(), None),
    }
    if args.extract {
        let modes = cfg.nvars() / 2;
        let space = Arc::new(FockSpace::new(modes, ospec.cutoff));
        let degree = fp.degree().unwrap_or(0) + gp.degree().unwrap_or(0);
        let exact = star(&cfg, &fp.complexify(), &gp.complexify(), args.order)?;
        let fam = |h: f64| {
            let tf = bargmann_toeplitz(&fp, h, space.clone())?;
            let tg = bargmann_toeplitz(&gp, h, space.clone())?;
            Ok(tf.mul(&tg))
        };
        let ex = total_symbol_extract(fam, space.clone(), &ExtractionSpec::standard(modes, args.order, degree))?;
        for (k, c) in ex.coeffs.iter().enumerate() {
            let dist = c.distance_to(exact.coeff(k));
            rep.check(format!("extracted order {k} matches (distance {dist:.2e})"), dist < 1e-4, None);
        }
    }
    Ok(rep)
}
