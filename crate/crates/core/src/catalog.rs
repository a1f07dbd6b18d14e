//! Ready-made presentations used by tests, benches and the CLI.

use crate::algebroid::{AlgebroidPresentation, FrameKForm};
use crate::linalg::PolyMatrix;
use crate::ring::{parse_poly, Chart, PolyFn};

/// A presentation together with a frame 2-form on it.
#[derive(Debug, Clone)]
pub struct BundledExample {
    pub name: &'static str,
    pub algebroid: AlgebroidPresentation,
    pub omega: PolyMatrix,
}

/// Darboux matrix `[[0, I], [-I, 0]]` of size `r` with polynomial entries.
pub fn standard_omega_matrix(nvars: usize, r: usize) -> PolyMatrix {
    assert!(r.is_multiple_of(2), "odd rank");
    let h = r / 2;
    let mut m = vec![vec![PolyFn::zero(nvars); r]; r];
    for j in 0..h {
        m[j][h + j] = PolyFn::one(nvars);
        m[h + j][j] = -PolyFn::one(nvars);
    }
    m
}

pub fn standard_omega(nvars: usize, r: usize) -> FrameKForm {
    FrameKForm::from_matrix(nvars, &standard_omega_matrix(nvars, r))
}

fn identity_anchor(n: usize) -> Vec<Vec<PolyFn>> {
    (0..n)
        .map(|i| (0..n).map(|a| if a == i { PolyFn::one(n) } else { PolyFn::zero(n) }).collect())
        .collect()
}

/// Coordinates `x, y` for one mode, `x1..xn, y1..yn` otherwise.
pub fn phase_space_chart(modes: usize) -> Chart {
    if modes == 1 {
        return Chart::new(["x", "y"]).expect("valid names");
    }
    let names: Vec<String> = (1..=modes)
        .map(|j| format!("x{j}"))
        .chain((1..=modes).map(|j| format!("y{j}")))
        .collect();
    Chart::new(names).expect("valid names")
}

/// Tangent algebroid of `R^{2n}` with the coordinate frame.
pub fn tangent(modes: usize) -> AlgebroidPresentation {
    let chart = phase_space_chart(modes);
    let n = chart.dim();
    AlgebroidPresentation::from_brackets(chart, identity_anchor(n), &[]).expect("well formed")
}

fn b_chart(modes: usize) -> Chart {
    let names: Vec<String> = std::iter::once("f".to_string())
        .chain((2..=2 * modes).map(|j| format!("x{j}")))
        .collect();
    Chart::new(names).expect("valid names")
}

/// b-tangent frame `f d/df, d/dx2, ..., d/dx2n` over coordinates `(f, x2, ..., x2n)`.
pub fn b_algebroid(modes: usize) -> AlgebroidPresentation {
    let chart = b_chart(modes);
    let n = chart.dim();
    let mut anchor = identity_anchor(n);
    anchor[0][0] = PolyFn::var(n, 0);
    AlgebroidPresentation::from_brackets(chart, anchor, &[]).expect("well formed")
}

/// 0-tangent frame `f d/dx_a` for every coordinate; `[e1, e_b] = e_b`.
pub fn zero_algebroid(modes: usize) -> AlgebroidPresentation {
    let chart = b_chart(modes);
    let n = chart.dim();
    let f = PolyFn::var(n, 0);
    let anchor: Vec<Vec<PolyFn>> = (0..n)
        .map(|i| (0..n).map(|a| if a == i { f.clone() } else { PolyFn::zero(n) }).collect())
        .collect();
    let brackets: Vec<_> = (1..n).map(|b| (0, b, b, PolyFn::one(n))).collect();
    AlgebroidPresentation::from_brackets(chart, anchor, &brackets).expect("well formed")
}

/// The two-dimensional non-abelian Lie algebra `[e1, e2] = e2` over a point.
pub fn affine_line_algebra() -> AlgebroidPresentation {
    let chart = Chart::point();
    AlgebroidPresentation::from_brackets(chart, vec![vec![], vec![]], &[(0, 1, 1, PolyFn::one(0))])
        .expect("well formed")
}

/// Frame `phi d/dx, phi d/dy` with `phi = 1 - x^2 - y^2`.
pub fn scaled_ball() -> AlgebroidPresentation {
    let chart = Chart::new(["x", "y"]).expect("valid names");
    let phi = parse_poly("1 - x^2 - y^2", &chart).expect("valid expression");
    let anchor = vec![
        vec![phi.clone(), PolyFn::zero(2)],
        vec![PolyFn::zero(2), phi.clone()],
    ];
    let brackets = [(0, 1, 1, phi.derive(0)), (0, 1, 0, -phi.derive(1))];
    AlgebroidPresentation::from_brackets(chart, anchor, &brackets).expect("well formed")
}

/// Every bundled symplectic example with its standard frame form.
pub fn all_examples() -> Vec<BundledExample> {
    let mk = |name, algebroid: AlgebroidPresentation| {
        let omega = standard_omega_matrix(algebroid.nvars(), algebroid.rank());
        BundledExample { name, algebroid, omega }
    };
    vec![
        mk("tangent-r2", tangent(1)),
        mk("tangent-r4", tangent(2)),
        mk("b-symplectic-n1", b_algebroid(1)),
        mk("b-symplectic-n2", b_algebroid(2)),
        mk("0-symplectic-n1", zero_algebroid(1)),
        mk("quasi-frobenius-aff1", affine_line_algebra()),
        mk("scaled-ball", scaled_ball()),
    ]
}
