//! Transposed Poisson structures on a truncated algebra.
//!
//! A transposed Poisson structure on a Lie algebra is a commutative
//! associative product `.` with `2 z.[x,y] = [z.x, y] + [x, z.y]`. Every
//! left multiplication of such a product is a 1/2-derivation of the bracket,
//! so once the 1/2-derivations are known, the candidate products are the
//! solutions of a linear system: write `z.- = sum_j c_j(z) phi_j` over a
//! basis `phi_j` of the derivation space and impose `x.y = y.x`.
//! [`check_axioms`] verifies the identities on an explicit table.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{AlgebraPresentation, BasisElement, Element};
use crate::linalg::{self, SparseMatrix};
use crate::rational::{int, ratio, Rational};
use crate::solver::{self, HomogeneousSolveProblem, SolveError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProductError {
    #[error("basis element {0:?} is outside the table window")]
    OutOfWindow(BasisElement),
    #[error("x.y and y.x given different values for the pair ({0:?}, {1:?})")]
    NotCommutative(BasisElement, BasisElement),
}

/// Commutative product on the basis elements with `|index| <= window`.
/// Keys are unordered pairs, so `x.y = y.x` by construction. Missing pairs
/// multiply to zero, or are unknown for a table built with
/// [`ProductTable::partial`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductTable {
    window: i64,
    unset_is_zero: bool,
    entries: BTreeMap<(BasisElement, BasisElement), Element>,
}

fn key(x: BasisElement, y: BasisElement) -> (BasisElement, BasisElement) {
    if x <= y {
        (x, y)
    } else {
        (y, x)
    }
}

impl ProductTable {
    pub fn new(window: i64) -> Self {
        ProductTable {
            window,
            unset_is_zero: true,
            entries: BTreeMap::new(),
        }
    }

    /// A table whose unset pairs are unknown rather than zero, for products
    /// that do not close on the window.
    pub fn partial(window: i64) -> Self {
        ProductTable {
            unset_is_zero: false,
            ..ProductTable::new(window)
        }
    }

    pub fn window(&self) -> i64 {
        self.window
    }

    fn in_window(&self, b: BasisElement) -> bool {
        b.index.abs() <= self.window
    }

    /// Sets `x.y` (and therefore `y.x`). Setting a pair twice with different
    /// values is rejected.
    pub fn set(
        &mut self,
        x: BasisElement,
        y: BasisElement,
        value: Element,
    ) -> Result<(), ProductError> {
        for b in [x, y].into_iter().chain(value.terms().map(|(b, _)| *b)) {
            if !self.in_window(b) {
                return Err(ProductError::OutOfWindow(b));
            }
        }
        let k = key(x, y);
        match self.entries.get(&k) {
            Some(existing) if existing != &value => Err(ProductError::NotCommutative(x, y)),
            _ => {
                self.entries.insert(k, value);
                Ok(())
            }
        }
    }

    pub fn get(&self, x: BasisElement, y: BasisElement) -> Option<Element> {
        if !self.in_window(x) || !self.in_window(y) {
            return None;
        }
        match self.entries.get(&key(x, y)) {
            Some(v) => Some(v.clone()),
            None if self.unset_is_zero => Some(Element::zero()),
            None => None,
        }
    }

    /// Bilinear product, `None` if it needs a pair outside the window.
    pub fn product(&self, a: &Element, b: &Element) -> Option<Element> {
        let mut out = Element::zero();
        for (x, cx) in a.terms() {
            for (y, cy) in b.terms() {
                out.add_scaled(&self.get(*x, *y)?, &(cx * cy));
            }
        }
        Some(out)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.values().all(Element::is_zero)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomReport {
    pub triples_checked: usize,
    pub triples_skipped: usize,
    pub failure: Option<String>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

/// Checks associativity and `2 z.[x,y] = [z.x, y] + [x, z.y]` on every
/// window triple whose intermediate products stay in the window; other
/// triples are skipped and counted.
pub fn check_axioms(table: &ProductTable, alg: &AlgebraPresentation) -> AxiomReport {
    let basis = alg.window_basis(table.window);
    let mut report = AxiomReport {
        triples_checked: 0,
        triples_skipped: 0,
        failure: None,
    };
    let two = int(2);
    for &x in &basis {
        for &y in &basis {
            let ex = Element::basis(x);
            let ey = Element::basis(y);
            let xy = alg.bracket_basis_unchecked(x, y);
            for &z in &basis {
                let ez = Element::basis(z);
                let checked = (|| {
                    let xy_z = table.product(&table.product(&ex, &ey)?, &ez)?;
                    let x_yz = table.product(&ex, &table.product(&ey, &ez)?)?;
                    if xy_z != x_yz {
                        return Some(Err(format!(
                            "associativity fails for ({}, {}, {})",
                            alg.basis_name(x),
                            alg.basis_name(y),
                            alg.basis_name(z)
                        )));
                    }
                    let lhs = table.product(&ez, &xy)?.scaled(&two);
                    let zx = table.product(&ez, &ex)?;
                    let zy = table.product(&ez, &ey)?;
                    let mut rhs = alg.bracket_unchecked(&zx, &ey);
                    rhs.add_scaled(&alg.bracket_unchecked(&ex, &zy), &int(1));
                    if lhs != rhs {
                        return Some(Err(format!(
                            "transposed Leibniz identity fails for x={}, y={}, z={}: {} != {}",
                            alg.basis_name(x),
                            alg.basis_name(y),
                            alg.basis_name(z),
                            lhs.display(alg),
                            rhs.display(alg)
                        )));
                    }
                    Some(Ok(()))
                })();
                match checked {
                    None => report.triples_skipped += 1,
                    Some(Ok(())) => report.triples_checked += 1,
                    Some(Err(msg)) => {
                        report.triples_checked += 1;
                        report.failure = Some(msg);
                        return report;
                    }
                }
            }
        }
    }
    report
}

/// Linear map on a finite set of basis elements; absent keys map to zero.
pub type Operator = BTreeMap<BasisElement, Element>;

#[derive(Debug, Clone)]
pub enum DerivationSpace {
    /// Multiples of the identity.
    Scalars,
    /// Span of the given operators; they need not be independent.
    Operators(Vec<Operator>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "classification", rename_all = "kebab-case")]
pub enum ProductClassification {
    /// The zero product is the only solution.
    Trivial,
    NontrivialPossible {
        dimension: usize,
    },
}

impl ProductClassification {
    pub fn label(&self) -> &'static str {
        match self {
            ProductClassification::Trivial => "trivial",
            ProductClassification::NontrivialPossible { .. } => "nontrivial possible",
        }
    }

    pub fn dimension(&self) -> usize {
        match self {
            ProductClassification::Trivial => 0,
            ProductClassification::NontrivialPossible { dimension } => *dimension,
        }
    }
}

/// Dimension of the space of commutative products on `basis` whose left
/// multiplications all lie in `space`.
pub fn classify_products(basis: &[BasisElement], space: &DerivationSpace) -> ProductClassification {
    let ops: Vec<Operator> = match space {
        DerivationSpace::Scalars => vec![basis.iter().map(|&b| (b, Element::basis(b))).collect()],
        DerivationSpace::Operators(ops) => ops.clone(),
    };
    let w = basis.len();
    let col = |j: usize, zi: usize| j * w + zi;
    let image = |j: usize, b: BasisElement| ops[j].get(&b).cloned().unwrap_or_default();

    // x.y - y.x = sum_j c_j(x) phi_j(y) - c_j(y) phi_j(x)
    let mut system = SparseMatrix::new(ops.len() * w);
    for xi in 0..w {
        for yi in xi + 1..w {
            let mut acc: BTreeMap<BasisElement, Vec<(usize, Rational)>> = BTreeMap::new();
            for j in 0..ops.len() {
                for (o, c) in image(j, basis[yi]).terms() {
                    acc.entry(*o).or_default().push((col(j, xi), c.clone()));
                }
                for (o, c) in image(j, basis[xi]).terms() {
                    acc.entry(*o).or_default().push((col(j, yi), -c));
                }
            }
            for row in acc.into_values() {
                system.push_row(row);
            }
        }
    }
    let solutions = linalg::nullspace(&system);

    // The coefficients c need not determine distinct products if the
    // operators are dependent on the window, so count products directly.
    let mut products: Vec<BTreeMap<(usize, usize, BasisElement), Rational>> = Vec::new();
    let mut keys: BTreeSet<(usize, usize, BasisElement)> = BTreeSet::new();
    for c in solutions.vectors() {
        let mut prod: BTreeMap<(usize, usize, BasisElement), Rational> = BTreeMap::new();
        for xi in 0..w {
            for (yi, &y) in basis.iter().enumerate().skip(xi) {
                for j in 0..ops.len() {
                    let cx = &c[col(j, xi)];
                    if cx.is_zero() {
                        continue;
                    }
                    for (o, v) in image(j, y).terms() {
                        *prod.entry((xi, yi, *o)).or_insert_with(Rational::zero) += cx * v;
                    }
                }
            }
        }
        prod.retain(|_, v| !v.is_zero());
        keys.extend(prod.keys().copied());
        products.push(prod);
    }
    let keys: Vec<_> = keys.into_iter().collect();
    let dense: Vec<Vec<Rational>> = products
        .iter()
        .map(|p| {
            keys.iter()
                .map(|k| p.get(k).cloned().unwrap_or_default())
                .collect()
        })
        .collect();
    let dimension = linalg::rank(&SparseMatrix::from_dense(keys.len(), &dense));
    if dimension == 0 {
        ProductClassification::Trivial
    } else {
        ProductClassification::NontrivialPossible { dimension }
    }
}

/// [`classify_products`] over every basis element with `|index| <= window`.
pub fn mult_operator_constraint(
    alg: &AlgebraPresentation,
    space: &DerivationSpace,
    window: i64,
) -> ProductClassification {
    classify_products(&alg.window_basis(window), space)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TpReport {
    pub algebra: String,
    pub window: i64,
    pub interior: i64,
    pub gamma_max: i64,
    pub operators: usize,
    pub solution_dim: usize,
    pub classification: String,
}

/// Shift range needed so that every operator between two elements of the
/// product window is representable.
pub fn tp_gamma_max(requested: i64, interior: i64) -> i64 {
    requested.max(2 * interior)
}

/// Scans the 1/2-derivations of `alg` and classifies the compatible
/// products on the basis elements with `|index| <= interior`.
///
/// Each degree `g` is solved at window `max(window, interior + 2(|g|+1))`
/// with interior `interior`, and its interior basis vectors become the
/// operators of the derivation space.
pub fn classify_structures(
    alg: &AlgebraPresentation,
    window: i64,
    interior: i64,
    gamma_max: i64,
) -> Result<TpReport, SolveError> {
    if interior < 0 || interior > window {
        return Err(SolveError::BadInterior { interior, window });
    }
    let gamma_max = tp_gamma_max(gamma_max, interior);
    let half = ratio(1, 2);
    let per_degree = solver::scan_degrees(gamma_max)
        .into_par_iter()
        .map(|degree| {
            let problem = HomogeneousSolveProblem {
                presentation: alg,
                delta: half.clone(),
                degree,
                window: window.max(solver::recommended_window(degree.n(), interior)),
                interior,
            };
            problem.solve().map(|s| s.interior_operators())
        })
        .collect::<Result<Vec<_>, _>>()?;
    let ops: Vec<Operator> = per_degree.into_iter().flatten().collect();
    let operators = ops.len();
    let result = mult_operator_constraint(alg, &DerivationSpace::Operators(ops), interior);
    Ok(TpReport {
        algebra: alg.name().to_string(),
        window,
        interior,
        gamma_max,
        operators,
        solution_dim: result.dimension(),
        classification: result.label().to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn zero_product_on_pgca_passes() {
        let p = catalog::get("pgca").unwrap();
        let r = check_axioms(&ProductTable::new(4), &p);
        assert!(r.passed());
        // triples whose bracket leaves the window are skipped
        assert_eq!(r.triples_checked + r.triples_skipped, 36 * 36 * 36);
        assert!(r.triples_skipped > 0 && r.triples_checked > r.triples_skipped);
    }

    #[test]
    fn non_commutative_table_is_rejected() {
        let p = catalog::get("abelian").unwrap();
        let (x, y) = (p.elem("E", 0), p.elem("E", 1));
        let mut t = ProductTable::new(1);
        t.set(x, y, Element::basis(x)).unwrap();
        assert_eq!(
            t.set(y, x, Element::basis(y)),
            Err(ProductError::NotCommutative(y, x))
        );
        assert_eq!(t.get(y, x), Some(Element::basis(x)));
    }

    #[test]
    fn out_of_window_entries_rejected() {
        let p = catalog::get("abelian").unwrap();
        let mut t = ProductTable::new(1);
        let e = p.elem("E", 2);
        assert_eq!(
            t.set(p.elem("E", 0), p.elem("E", 0), Element::basis(e)),
            Err(ProductError::OutOfWindow(e))
        );
    }

    #[test]
    fn abelian_checks_only_associativity() {
        let p = catalog::get("abelian").unwrap();
        let e = |i| p.elem("E", i);
        // E_0 idempotent, E_1 squares to zero: associative
        let mut t = ProductTable::new(1);
        t.set(e(0), e(0), Element::basis(e(0))).unwrap();
        t.set(e(0), e(1), Element::basis(e(1))).unwrap();
        assert!(check_axioms(&t, &p).passed());
        // (E_0.E_0).E_1 = 0 but E_0.(E_0.E_1) = E_1
        let mut t = ProductTable::new(1);
        t.set(e(0), e(0), Element::basis(e(1))).unwrap();
        t.set(e(0), e(1), Element::basis(e(0))).unwrap();
        let r = check_axioms(&t, &p);
        assert!(r.failure.unwrap().starts_with("associativity"));
    }

    #[test]
    fn out_of_window_triples_are_skipped() {
        let p = catalog::get("witt").unwrap();
        let r = check_axioms(&ProductTable::new(2), &p);
        assert!(r.passed());
        // [L_m, L_n] leaves the window when |m + n| > 2
        assert!(r.triples_skipped > 0);
        assert_eq!(r.triples_checked + r.triples_skipped, 125);
    }

    #[test]
    fn witt_shift_product_satisfies_identity() {
        // L_m . L_n = L_{m+n} is a transposed Poisson structure on Witt
        let p = catalog::get("witt").unwrap();
        let n = 3;
        let mut t = ProductTable::partial(n);
        for a in -n..=n {
            for b in -n..=n {
                if (a + b).abs() <= n {
                    t.set(
                        p.elem("L", a),
                        p.elem("L", b),
                        Element::basis(p.elem("L", a + b)),
                    )
                    .unwrap();
                }
            }
        }
        let r = check_axioms(&t, &p);
        assert!(r.passed(), "{:?}", r.failure);
        assert!(r.triples_checked > 0);
    }

    #[test]
    fn broken_leibniz_detected() {
        // L_0 . L_0 = L_0 alone: 2 L_0.[L_0, L_1] = 0 but [L_0.L_0, L_1] = -L_1
        let p = catalog::get("pgca").unwrap();
        let mut t = ProductTable::new(2);
        t.set(
            p.elem("L", 0),
            p.elem("L", 0),
            Element::basis(p.elem("L", 0)),
        )
        .unwrap();
        let r = check_axioms(&t, &p);
        assert!(r.failure.is_some());
    }

    #[test]
    fn scalars_on_pgca_are_trivial() {
        let p = catalog::get("pgca").unwrap();
        assert_eq!(
            mult_operator_constraint(&p, &DerivationSpace::Scalars, 8),
            ProductClassification::Trivial
        );
        assert_eq!(
            mult_operator_constraint(&p, &DerivationSpace::Scalars, 2),
            ProductClassification::Trivial
        );
    }

    #[test]
    fn one_element_window_admits_products() {
        let p = catalog::get("abelian").unwrap();
        assert_eq!(
            mult_operator_constraint(&p, &DerivationSpace::Scalars, 0),
            ProductClassification::NontrivialPossible { dimension: 1 }
        );
    }

    #[test]
    fn zero_operator_space_is_trivial() {
        let p = catalog::get("pgca").unwrap();
        assert_eq!(
            mult_operator_constraint(&p, &DerivationSpace::Operators(vec![]), 1),
            ProductClassification::Trivial
        );
    }
}
