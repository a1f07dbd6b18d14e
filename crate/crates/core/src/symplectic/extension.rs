use super::{check_frame_form, SymplecticError};
use crate::algebroid::{ce_differential, AlgebroidPresentation, FrameKForm};
use crate::linalg::PolyMatrix;
use crate::ring::{Chart, PolyFn};

/// The extension `A + R Z` with `[e_i, e_j] = [e_i, e_j]_A + omega_ij Z`.
/// The central generator is the last frame index.
#[derive(Debug, Clone, PartialEq)]
pub struct CentralExtension {
    pub algebroid: AlgebroidPresentation,
    /// The 2-form the extension was built from, on the original frame.
    pub omega: PolyMatrix,
}

impl CentralExtension {
    /// Rank of the original algebroid; also the frame index of `Z`.
    pub fn base_rank(&self) -> usize {
        self.algebroid.rank() - 1
    }

    pub fn chart(&self) -> &Chart {
        self.algebroid.chart()
    }

    pub fn nvars(&self) -> usize {
        self.algebroid.nvars()
    }
}

pub fn central_extension(a: &AlgebroidPresentation, omega: &PolyMatrix) -> Result<CentralExtension, SymplecticError> {
    check_frame_form(a, omega)?;
    let n = a.nvars();
    let r = a.rank();
    let (chart, mut anchor, structure) = a.clone().into_parts();
    anchor.push(vec![PolyFn::zero(n); n]);
    let mut c = vec![vec![vec![PolyFn::zero(n); r + 1]; r + 1]; r + 1];
    for i in 0..r {
        for j in 0..r {
            for k in 0..r {
                c[i][j][k] = structure[i][j][k].clone();
            }
            c[i][j][r] = omega[i][j].clone();
        }
    }
    let algebroid = AlgebroidPresentation::new(chart, anchor, c).expect("shapes preserved");
    Ok(CentralExtension { algebroid, omega: omega.clone() })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ContactVerdict {
    /// `d theta` for `theta = -Z*`.
    pub d_theta: FrameKForm,
    /// `omega` pulled back along the projection that forgets `Z`.
    pub pullback: FrameKForm,
    /// `d theta - pr* omega` is identically zero.
    pub matches_pullback: bool,
    /// `d(d theta)`, which equals `pr*(d omega)` when it is defined.
    pub dd_theta: Option<FrameKForm>,
    pub witness: Option<(String, PolyFn)>,
}

impl ContactVerdict {
    pub fn passed(&self) -> bool {
        self.witness.is_none()
    }
}

/// Verifies `d theta = pr* omega` for `theta = -Z*`, and that the pulled-back
/// form is closed, i.e. `d d theta = 0`.
pub fn contact_form_check(e: &CentralExtension) -> ContactVerdict {
    let a = &e.algebroid;
    let n = a.nvars();
    let r = e.base_rank();
    let mut theta = FrameKForm::zero(n, r + 1, 1);
    theta.set(&[r], -PolyFn::one(n));
    let d_theta = ce_differential(a, &theta).expect("rank at least one");
    let mut pullback = FrameKForm::zero(n, r + 1, 2);
    for i in 0..r {
        for j in i + 1..r {
            pullback.set(&[i, j], e.omega[i][j].clone());
        }
    }
    let defect = d_theta.sub(&pullback);
    let matches_pullback = defect.is_zero();
    let mut witness = defect.first_nonzero().map(|(at, p)| (format!("(d theta - pr* omega){at}"), p));
    let dd_theta = if r + 1 >= 3 { Some(ce_differential(a, &d_theta).expect("degree below rank")) } else { None };
    if witness.is_none() {
        if let Some(dd) = &dd_theta {
            witness = dd.first_nonzero().map(|(at, p)| (format!("(d d theta){at}"), p));
        }
    }
    ContactVerdict { d_theta, pullback, matches_pullback, dd_theta, witness }
}
