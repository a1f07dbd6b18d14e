//! JSON description of an algebroid presentation with a frame 2-form.
//!
//! Frame and coordinate indices are 1-based in the file.

use std::path::Path;

use aq_core::linalg::{PolyMatrix, QMatrix};
use aq_core::{parse_poly, AlgebroidPresentation, Chart, PolyFn, Q};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub chart: ChartSection,
    pub algebroid: AlgebroidSection,
    #[serde(default)]
    pub omega: Vec<OmegaEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fock: Option<FockSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub star: Option<StarSection>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub points: Vec<Vec<Scalar>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChartSection {
    pub coords: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebroidSection {
    pub rank: usize,
    /// Row `i` lists the components of `rho(e_i)`; a flat row-major list is accepted too.
    pub anchor: Anchor,
    #[serde(default)]
    pub structure: Vec<StructureEntry>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Anchor {
    Rows(Vec<Vec<String>>),
    Flat(Vec<String>),
}

/// `[e_i, e_j]` has `expr` as its `e_k` component.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StructureEntry {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub expr: String,
}

/// `omega(e_i, e_j)` for `i < j`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OmegaEntry {
    pub i: usize,
    pub j: usize,
    pub expr: String,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FockSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modes: Option<usize>,
    #[serde(default = "default_cutoff")]
    pub cutoff: usize,
    #[serde(default = "default_buffer")]
    pub buffer: usize,
}

impl Default for FockSection {
    fn default() -> Self {
        FockSection { modes: None, cutoff: default_cutoff(), buffer: default_buffer() }
    }
}

fn default_cutoff() -> usize {
    32
}

fn default_buffer() -> usize {
    8
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StarSection {
    #[serde(default = "default_order")]
    pub order: usize,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default = "default_trials")]
    pub trials: usize,
    /// Complex structure on the frame, rational entries, row-major.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub j: Option<Vec<Vec<Scalar>>>,
}

impl Default for StarSection {
    fn default() -> Self {
        StarSection { order: default_order(), seed: None, trials: default_trials(), j: None }
    }
}

fn default_order() -> usize {
    2
}

fn default_trials() -> usize {
    10
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Scalar {
    Int(i64),
    Text(String),
}

impl Scalar {
    fn to_q(&self, field: &str) -> Result<Q, CliError> {
        match self {
            Scalar::Int(n) => Ok(Q::from_integer((*n).into())),
            Scalar::Text(s) => s.trim().parse::<Q>().map_err(|e| CliError::Expr {
                field: field.to_string(),
                column: 1,
                msg: format!("`{s}` is not a rational number ({e})"),
            }),
        }
    }
}

/// A spec file with every expression parsed.
#[derive(Debug, Clone)]
pub struct Loaded {
    pub raw: SpecFile,
    pub name: String,
    pub algebroid: AlgebroidPresentation,
    pub omega: PolyMatrix,
    pub fock: FockSection,
    pub star: StarSection,
    pub j: Option<QMatrix>,
    pub points: Vec<Vec<Q>>,
}

fn expr(src: &str, chart: &Chart, field: String) -> Result<PolyFn, CliError> {
    parse_poly(src, chart).map_err(|e| CliError::Expr { field, column: e.column(), msg: e.to_string() })
}

fn in_range(what: &str, idx: usize, bound: usize) -> Result<usize, CliError> {
    if idx == 0 || idx > bound {
        return Err(CliError::Index(format!("{what} index {idx} out of range 1..={bound}")));
    }
    Ok(idx - 1)
}

pub fn load(path: &Path) -> Result<Loaded, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })?;
    let raw: SpecFile = serde_json::from_str(&text).map_err(|e| CliError::Json {
        path: path.to_path_buf(),
        line: e.line(),
        column: e.column(),
        msg: e.to_string(),
    })?;
    let default_name = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    build(raw, default_name)
}

pub fn build(raw: SpecFile, default_name: String) -> Result<Loaded, CliError> {
    let chart = Chart::new(raw.chart.coords.iter().cloned())?;
    let n = chart.dim();
    let r = raw.algebroid.rank;
    let rows: Vec<Vec<String>> = match &raw.algebroid.anchor {
        Anchor::Rows(rows) => rows.clone(),
        Anchor::Flat(flat) => {
            if flat.len() != r * n {
                return Err(CliError::Index(format!("anchor has {} entries, expected {r} x {n}", flat.len())));
            }
            flat.chunks(n.max(1)).take(r).map(|c| c.to_vec()).collect()
        }
    };
    if rows.len() != r || rows.iter().any(|row| row.len() != n) {
        return Err(CliError::Index(format!("anchor must have {r} rows of {n} entries")));
    }
    let anchor = rows
        .iter()
        .enumerate()
        .map(|(i, row)| {
            row.iter()
                .enumerate()
                .map(|(a, s)| expr(s, &chart, format!("algebroid.anchor[{}][{}]", i + 1, a + 1)))
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    let mut brackets = Vec::with_capacity(raw.algebroid.structure.len());
    for (t, s) in raw.algebroid.structure.iter().enumerate() {
        let i = in_range("structure i", s.i, r)?;
        let j = in_range("structure j", s.j, r)?;
        let k = in_range("structure k", s.k, r)?;
        if i == j {
            return Err(CliError::Index(format!("structure entry {} has i = j", t + 1)));
        }
        brackets.push((i, j, k, expr(&s.expr, &chart, format!("algebroid.structure[{}]", t + 1))?));
    }
    let algebroid = AlgebroidPresentation::from_brackets(chart.clone(), anchor, &brackets)?;
    let mut omega: PolyMatrix = vec![vec![PolyFn::zero(n); r]; r];
    for (t, w) in raw.omega.iter().enumerate() {
        let i = in_range("omega i", w.i, r)?;
        let j = in_range("omega j", w.j, r)?;
        if i >= j {
            return Err(CliError::Index(format!("omega entry {} must have i < j", t + 1)));
        }
        let p = expr(&w.expr, &chart, format!("omega[{}]", t + 1))?;
        omega[j][i] = -&p;
        omega[i][j] = p;
    }
    let star = raw.star.clone().unwrap_or_default();
    let j = match &star.j {
        None => None,
        Some(rows) => {
            if rows.len() != r || rows.iter().any(|row| row.len() != r) {
                return Err(CliError::Index(format!("star.j must be {r} x {r}")));
            }
            Some(
                rows.iter()
                    .map(|row| row.iter().map(|s| s.to_q("star.j")).collect::<Result<Vec<_>, _>>())
                    .collect::<Result<Vec<_>, _>>()?,
            )
        }
    };
    let points = raw
        .points
        .iter()
        .enumerate()
        .map(|(t, p)| {
            if p.len() != n {
                return Err(CliError::Index(format!("point {} has {} coordinates, expected {n}", t + 1, p.len())));
            }
            p.iter().map(|s| s.to_q(&format!("points[{}]", t + 1))).collect()
        })
        .collect::<Result<Vec<_>, _>>()?;
    let fock = raw.fock.unwrap_or_default();
    if let Some(m) = fock.modes {
        if 2 * m != n {
            return Err(CliError::Index(format!("fock.modes = {m} does not match a chart of dimension {n}")));
        }
    }
    Ok(Loaded {
        name: raw.name.clone().unwrap_or(default_name),
        fock,
        star,
        j,
        points,
        algebroid,
        omega,
        raw,
    })
}
