//! Homogeneous delta-derivations on a truncated index window.
//!
//! A homogeneous component of degree `(e1, e2, g)` sends `k_m` into the span
//! of `t_{m+g}` over the kinds `t` whose Z2 degree is `k.z2 + (e1, e2)`
//! (exactly one such kind for every catalog algebra except Virasoro). Each
//! admissible `(source, target)` pair is an unknown. For every ordered pair of
//! window basis elements `(x_m, y_n)` with `m`, `n`, `m + n` all in
//! `[-N, N]`, the expression `D[x,y] - delta([Dx,y] + [x,Dy])` is expanded
//! with the bracket and each output coefficient becomes one linear
//! constraint.
//!
//! Truncation leaves unknowns near the window edge underconstrained, so the
//! classification is read off the projection of the nullspace onto sources
//! with `|m| <= M`. Only the degrees actually scanned are covered; nothing
//! here says anything about `|g|` beyond the scan range.

use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{AlgebraPresentation, BasisElement, Element, KindId};
use crate::grading::GradingDegree;
use crate::linalg::{self, SparseMatrix, SparseRow, VectorBasis};
use crate::rational::{self, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error("window {window} too small for degree shift {gamma}: need window >= {required}")]
    WindowTooSmall {
        window: i64,
        gamma: i64,
        required: i64,
    },
    #[error("interior {interior} must lie in [0, window = {window}]")]
    BadInterior { interior: i64, window: i64 },
}

/// Smallest window accepted for a degree shift `gamma`.
pub fn min_window(gamma: i64) -> i64 {
    gamma.abs() + 2
}

/// Window at which an interior of `interior` is fully pinned down for shift
/// `gamma`: `interior + 2(|gamma| + 1)`.
pub fn recommended_window(gamma: i64, interior: i64) -> i64 {
    interior + 2 * (gamma.abs() + 1)
}

#[derive(Debug, Clone)]
pub struct HomogeneousSolveProblem<'a> {
    pub presentation: &'a AlgebraPresentation,
    pub delta: Rational,
    pub degree: GradingDegree,
    pub window: i64,
    pub interior: i64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Unknown {
    pub source: BasisElement,
    pub target: BasisElement,
    /// The target kind is the source kind itself (degree with zero Z2 part)
    /// or the first kind of the shifted Z2 sector.
    pub principal: bool,
}

/// Column layout: kinds in presentation order, then source index ascending,
/// then target kind in presentation order.
#[derive(Debug, Clone)]
pub struct UnknownLayout {
    unknowns: Vec<Unknown>,
    by_source: HashMap<BasisElement, Vec<usize>>,
}

impl UnknownLayout {
    pub fn new(p: &AlgebraPresentation, degree: GradingDegree, window: i64) -> Self {
        let shift = degree.z2();
        let mut unknowns = Vec::new();
        let mut by_source: HashMap<BasisElement, Vec<usize>> = HashMap::new();
        for source in p.window_basis(window) {
            let kind = p.kind(source.kind);
            let sector = kind.z2 + shift;
            let targets: Vec<KindId> = (0..p.kinds().len())
                .filter(|&t| p.kind(t).z2 == sector)
                .collect();
            let principal = if shift.is_zero() {
                Some(source.kind)
            } else {
                targets.first().copied()
            };
            let cols = by_source.entry(source).or_default();
            for t in targets {
                let target = BasisElement::new(t, source.index + degree.n());
                if !p.is_basis(target) {
                    continue;
                }
                cols.push(unknowns.len());
                unknowns.push(Unknown {
                    source,
                    target,
                    principal: Some(t) == principal,
                });
            }
        }
        UnknownLayout {
            unknowns,
            by_source,
        }
    }

    pub fn len(&self) -> usize {
        self.unknowns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.unknowns.is_empty()
    }

    pub fn unknowns(&self) -> &[Unknown] {
        &self.unknowns
    }

    pub fn column(&self, source: BasisElement, target: BasisElement) -> Option<usize> {
        self.by_source
            .get(&source)?
            .iter()
            .copied()
            .find(|&c| self.unknowns[c].target == target)
    }

    fn columns_of(&self, source: BasisElement) -> Option<&[usize]> {
        self.by_source.get(&source).map(Vec::as_slice)
    }

    /// Columns whose source index satisfies `|m| <= interior`.
    pub fn interior_columns(&self, interior: i64) -> Vec<usize> {
        (0..self.unknowns.len())
            .filter(|&c| self.unknowns[c].source.index.abs() <= interior)
            .collect()
    }

    /// Coefficient vector of the map `k_m -> f(k, m) * k_{m+g}` on the
    /// principal unknowns (zero elsewhere).
    pub fn principal_vector(&self, f: impl Fn(BasisElement) -> Rational) -> Vec<Rational> {
        self.unknowns
            .iter()
            .map(|u| {
                if u.principal {
                    f(u.source)
                } else {
                    Rational::zero()
                }
            })
            .collect()
    }
}

impl HomogeneousSolveProblem<'_> {
    pub fn layout(&self) -> UnknownLayout {
        UnknownLayout::new(self.presentation, self.degree, self.window)
    }

    /// Rows contributed by the ordered pair `(x, y)`, or `None` when the pair
    /// falls outside the window rule.
    pub fn pair_rows(
        &self,
        layout: &UnknownLayout,
        x: BasisElement,
        y: BasisElement,
    ) -> Option<Vec<SparseRow>> {
        let p = self.presentation;
        let n = self.window;
        if x.index.abs() > n || y.index.abs() > n || (x.index + y.index).abs() > n {
            return None;
        }
        let xy = p.bracket_basis_unchecked(x, y);
        let mut acc: BTreeMap<BasisElement, BTreeMap<usize, Rational>> = BTreeMap::new();
        let mut add = |out: BasisElement, col: usize, v: Rational| {
            let e = acc
                .entry(out)
                .or_default()
                .entry(col)
                .or_insert_with(Rational::zero);
            *e += v;
        };

        // D[x, y]
        for (t, c) in xy.terms() {
            let cols = layout.columns_of(*t)?;
            for &col in cols {
                add(layout.unknowns[col].target, col, c.clone());
            }
        }
        // -delta [Dx, y] - delta [x, Dy]
        let neg_delta = -&self.delta;
        for &col in layout.columns_of(x).unwrap_or(&[]) {
            let img = p.bracket_basis_unchecked(layout.unknowns[col].target, y);
            for (o, c) in img.terms() {
                add(*o, col, c * &neg_delta);
            }
        }
        for &col in layout.columns_of(y).unwrap_or(&[]) {
            let img = p.bracket_basis_unchecked(x, layout.unknowns[col].target);
            for (o, c) in img.terms() {
                add(*o, col, c * &neg_delta);
            }
        }

        Some(
            acc.into_values()
                .map(|row| {
                    row.into_iter()
                        .filter(|(_, v)| !v.is_zero())
                        .collect::<SparseRow>()
                })
                .filter(|row| !row.is_empty())
                .collect(),
        )
    }

    /// Constraint matrix, one row per (ordered pair, output basis element).
    pub fn assemble_with(&self, layout: &UnknownLayout) -> SparseMatrix {
        let mut m = SparseMatrix::new(layout.len());
        if layout.is_empty() {
            return m;
        }
        let basis = self.presentation.window_basis(self.window);
        for &x in &basis {
            for &y in &basis {
                if let Some(rows) = self.pair_rows(layout, x, y) {
                    for row in rows {
                        m.push_row(row);
                    }
                }
            }
        }
        m
    }

    pub fn assemble(&self) -> SparseMatrix {
        self.assemble_with(&self.layout())
    }

    fn check(&self) -> Result<(), SolveError> {
        let gamma = self.degree.n();
        if self.window < min_window(gamma) {
            return Err(SolveError::WindowTooSmall {
                window: self.window,
                gamma,
                required: min_window(gamma),
            });
        }
        if self.interior < 0 || self.interior > self.window {
            return Err(SolveError::BadInterior {
                interior: self.interior,
                window: self.window,
            });
        }
        Ok(())
    }

    pub fn solve(&self) -> Result<DegreeSolution, SolveError> {
        self.check()?;
        let layout = self.layout();
        let matrix = self.assemble_with(&layout);
        let nullspace = linalg::nullspace(&matrix);
        let interior_columns = layout.interior_columns(self.interior);
        let interior_basis = linalg::project(&nullspace, &interior_columns);
        let report = build_report(
            self,
            &layout,
            &nullspace,
            &interior_columns,
            &interior_basis,
        );
        Ok(DegreeSolution {
            report,
            layout,
            matrix,
            nullspace,
            interior_columns,
            interior_basis,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Classification {
    Zero,
    Scalar,
    Nontrivial,
}

impl Classification {
    pub fn as_str(&self) -> &'static str {
        match self {
            Classification::Zero => "zero",
            Classification::Scalar => "scalar",
            Classification::Nontrivial => "nontrivial",
        }
    }
}

impl std::fmt::Display for Classification {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Values of one `(source kind, target kind)` block of an interior basis
/// vector, for source indices `from, from + 1, ...`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockSummary {
    pub source: String,
    pub target: String,
    pub from: i64,
    #[serde(with = "rational::serde_str_vec")]
    pub values: Vec<Rational>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolveReport {
    pub degree: GradingDegree,
    #[serde(with = "rational::serde_str")]
    pub delta: Rational,
    pub window: i64,
    pub interior: i64,
    pub full_dim: usize,
    pub interior_dim: usize,
    pub basis: Vec<Vec<BlockSummary>>,
    pub classification: Classification,
}

/// Everything computed for one degree.
#[derive(Debug, Clone)]
pub struct DegreeSolution {
    pub report: SolveReport,
    pub layout: UnknownLayout,
    pub matrix: SparseMatrix,
    pub nullspace: VectorBasis,
    pub interior_columns: Vec<usize>,
    pub interior_basis: VectorBasis,
}

impl DegreeSolution {
    /// The interior basis vectors as maps on interior source elements.
    pub fn interior_operators(&self) -> Vec<BTreeMap<BasisElement, Element>> {
        self.interior_basis
            .vectors()
            .iter()
            .map(|v| {
                let mut op: BTreeMap<BasisElement, Element> = BTreeMap::new();
                for (i, &col) in self.interior_columns.iter().enumerate() {
                    let u = self.layout.unknowns()[col];
                    op.entry(u.source).or_default().add_term(u.target, &v[i]);
                }
                op.retain(|_, e| !e.is_zero());
                op
            })
            .collect()
    }
}

fn is_scalar_pattern(unknowns: &[Unknown], v: &[Rational]) -> bool {
    let mut common: Option<&Rational> = None;
    for (u, x) in unknowns.iter().zip(v) {
        if u.principal {
            if x.is_zero() || common.is_some_and(|c| c != x) {
                return false;
            }
            common = Some(x);
        } else if !x.is_zero() {
            return false;
        }
    }
    common.is_some()
}

fn build_report(
    problem: &HomogeneousSolveProblem<'_>,
    layout: &UnknownLayout,
    nullspace: &VectorBasis,
    interior_columns: &[usize],
    interior_basis: &VectorBasis,
) -> SolveReport {
    let p = problem.presentation;
    let interior_unknowns: Vec<Unknown> = interior_columns
        .iter()
        .map(|&c| layout.unknowns()[c])
        .collect();
    let classification = match interior_basis.len() {
        0 => Classification::Zero,
        1 if is_scalar_pattern(&interior_unknowns, &interior_basis.vectors()[0]) => {
            Classification::Scalar
        }
        _ => Classification::Nontrivial,
    };
    let basis = interior_basis
        .vectors()
        .iter()
        .map(|v| {
            let mut blocks: Vec<BlockSummary> = Vec::new();
            let mut order: Vec<(KindId, KindId)> = Vec::new();
            let mut by_block: HashMap<(KindId, KindId), usize> = HashMap::new();
            for (u, x) in interior_unknowns.iter().zip(v) {
                let key = (u.source.kind, u.target.kind);
                let i = *by_block.entry(key).or_insert_with(|| {
                    order.push(key);
                    blocks.push(BlockSummary {
                        source: p.kind(key.0).name.clone(),
                        target: p.kind(key.1).name.clone(),
                        from: u.source.index,
                        values: Vec::new(),
                    });
                    blocks.len() - 1
                });
                blocks[i].values.push(x.clone());
            }
            blocks
        })
        .collect();
    SolveReport {
        degree: problem.degree,
        delta: problem.delta.clone(),
        window: problem.window,
        interior: problem.interior,
        full_dim: nullspace.len(),
        interior_dim: interior_basis.len(),
        basis,
        classification,
    }
}

pub fn solve_degree(problem: &HomogeneousSolveProblem<'_>) -> Result<SolveReport, SolveError> {
    problem.solve().map(|s| s.report)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanReport {
    pub reports: Vec<SolveReport>,
    pub scalar_only: bool,
}

impl ScanReport {
    pub fn verdict(&self) -> &'static str {
        if self.scalar_only {
            "scalar-only"
        } else {
            "not-scalar-only"
        }
    }
}

/// All degrees in `{0,1} x {0,1} x [-gamma_max, gamma_max]`.
pub fn scan_degrees(gamma_max: i64) -> Vec<GradingDegree> {
    let mut out = Vec::new();
    for e1 in 0..2 {
        for e2 in 0..2 {
            for g in -gamma_max..=gamma_max {
                out.push(GradingDegree::new(e1, e2, g));
            }
        }
    }
    out
}

/// Scalar-only means: exactly one report is `scalar`, it sits at
/// `(0,0,0)`, and every other report is `zero`.
pub fn is_scalar_only(reports: &[SolveReport]) -> bool {
    let origin = GradingDegree::new(0, 0, 0);
    reports.iter().all(|r| {
        if r.degree == origin {
            r.classification == Classification::Scalar
        } else {
            r.classification == Classification::Zero
        }
    }) && reports.iter().any(|r| r.degree == origin)
}

/// Solves every degree with `|g| <= gamma_max`, in parallel, reports in
/// degree order.
pub fn scan(
    p: &AlgebraPresentation,
    delta: &Rational,
    gamma_max: i64,
    window: i64,
    interior: i64,
) -> Result<ScanReport, SolveError> {
    let reports = scan_degrees(gamma_max)
        .into_par_iter()
        .map(|degree| {
            solve_degree(&HomogeneousSolveProblem {
                presentation: p,
                delta: delta.clone(),
                degree,
                window,
                interior,
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    let scalar_only = is_scalar_only(&reports);
    Ok(ScanReport {
        reports,
        scalar_only,
    })
}

/// The identity map as a coefficient vector (1 on every principal unknown).
pub fn identity_vector(layout: &UnknownLayout) -> Vec<Rational> {
    layout.principal_vector(|_| Rational::one())
}
