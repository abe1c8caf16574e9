//! Graded Lie algebras given by families of basis elements and bracket rules.
//!
//! A presentation lists basis kinds (`L`, `H`, ...), each carrying a Z2 x Z2
//! degree, and one bracket rule per unordered pair of kinds. A basis element
//! is a kind together with an integer index; `[x_m, y_n]` is evaluated
//! lazily from the rule for any integers `m`, `n`. The reversed bracket is
//! obtained by skew-symmetry, never stored.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::grading::{GradingDegree, Z2Pair};
use crate::rational::{self, int, Rational};

pub type KindId = usize;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("unknown basis kind {0:?}")]
    UnknownKind(String),
    #[error("duplicate basis kind {0:?}")]
    DuplicateKind(String),
    #[error("more than one bracket rule for the pair ({0}, {1})")]
    DuplicateRule(String, String),
    #[error("central kind {kind:?} cannot appear on the left or right of a bracket rule")]
    CentralOperand { kind: String },
    #[error("rule [{left}, {right}]: {reason}")]
    BadTerm {
        left: String,
        right: String,
        reason: String,
    },
    #[error("element references kind id {0}, which is not part of presentation {1:?}")]
    PresentationMismatch(KindId, String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasisKind {
    pub name: String,
    pub z2: Z2Pair,
    /// Central kinds have the single index 0 and bracket to zero with
    /// everything.
    pub central: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BasisElement {
    pub kind: KindId,
    pub index: i64,
}

impl BasisElement {
    pub fn new(kind: KindId, index: i64) -> Self {
        BasisElement { kind, index }
    }
}

/// `c0 + cm*m + cn*n`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct AffinePoly {
    pub c0: Rational,
    pub cm: Rational,
    pub cn: Rational,
}

impl AffinePoly {
    pub fn new(c0: Rational, cm: Rational, cn: Rational) -> Self {
        AffinePoly { c0, cm, cn }
    }

    pub fn from_ints(c0: i64, cm: i64, cn: i64) -> Self {
        AffinePoly::new(int(c0), int(cm), int(cn))
    }

    pub fn constant(c: i64) -> Self {
        AffinePoly::from_ints(c, 0, 0)
    }

    pub fn eval(&self, m: i64, n: i64) -> Rational {
        &self.c0 + &self.cm * int(m) + &self.cn * int(n)
    }
}

/// Coefficient of one term of a bracket rule.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TermCoeff {
    Affine(AffinePoly),
    /// `scale * (m^3 - m) / 12` when `m + n + offset == 0`, else zero; the
    /// target is always the index-0 element of a central kind. This is the
    /// only non-affine coefficient admitted (the Virasoro cocycle).
    Cocycle(Rational),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BracketTerm {
    pub target: KindId,
    pub coeff: TermCoeff,
    pub offset: i64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BracketRule {
    pub left: KindId,
    pub right: KindId,
    pub terms: Vec<BracketTerm>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebraPresentation {
    name: String,
    kinds: Vec<BasisKind>,
    rules: Vec<BracketRule>,
    lookup: HashMap<(KindId, KindId), usize>,
}

type RuleSpec = (String, String, Vec<(String, TermCoeff, i64)>);

/// Name-based builder for presentations.
#[derive(Debug, Clone, Default)]
pub struct PresentationBuilder {
    name: String,
    kinds: Vec<BasisKind>,
    rules: Vec<RuleSpec>,
}

impl PresentationBuilder {
    pub fn new(name: impl Into<String>) -> Self {
        PresentationBuilder {
            name: name.into(),
            ..Default::default()
        }
    }

    pub fn kind(mut self, name: &str, z2: (u8, u8)) -> Self {
        self.kinds.push(BasisKind {
            name: name.to_string(),
            z2: Z2Pair::new(z2.0, z2.1),
            central: false,
        });
        self
    }

    pub fn central_kind(mut self, name: &str, z2: (u8, u8)) -> Self {
        self.kinds.push(BasisKind {
            name: name.to_string(),
            z2: Z2Pair::new(z2.0, z2.1),
            central: true,
        });
        self
    }

    /// Adds a rule whose terms all land on index `m + n`.
    pub fn rule(self, left: &str, right: &str, terms: Vec<(&str, TermCoeff)>) -> Self {
        let terms = terms.into_iter().map(|(t, c)| (t, c, 0)).collect();
        self.rule_with_offsets(left, right, terms)
    }

    pub fn rule_with_offsets(
        mut self,
        left: &str,
        right: &str,
        terms: Vec<(&str, TermCoeff, i64)>,
    ) -> Self {
        self.rules.push((
            left.to_string(),
            right.to_string(),
            terms
                .into_iter()
                .map(|(t, c, o)| (t.to_string(), c, o))
                .collect(),
        ));
        self
    }

    pub fn build(self) -> Result<AlgebraPresentation, AlgebraError> {
        let mut ids = HashMap::new();
        for (i, k) in self.kinds.iter().enumerate() {
            if ids.insert(k.name.clone(), i).is_some() {
                return Err(AlgebraError::DuplicateKind(k.name.clone()));
            }
        }
        let resolve = |name: &str| {
            ids.get(name)
                .copied()
                .ok_or_else(|| AlgebraError::UnknownKind(name.to_string()))
        };

        let mut rules = Vec::with_capacity(self.rules.len());
        let mut lookup = HashMap::new();
        for (left, right, terms) in &self.rules {
            let l = resolve(left)?;
            let r = resolve(right)?;
            for &k in &[l, r] {
                if self.kinds[k].central {
                    return Err(AlgebraError::CentralOperand {
                        kind: self.kinds[k].name.clone(),
                    });
                }
            }
            if lookup.contains_key(&(l, r)) || lookup.contains_key(&(r, l)) {
                return Err(AlgebraError::DuplicateRule(left.clone(), right.clone()));
            }
            let mut resolved = Vec::with_capacity(terms.len());
            for (target, coeff, offset) in terms {
                let t = resolve(target)?;
                let central = self.kinds[t].central;
                let bad = |reason: &str| AlgebraError::BadTerm {
                    left: left.clone(),
                    right: right.clone(),
                    reason: reason.to_string(),
                };
                match coeff {
                    TermCoeff::Cocycle(_) if !central => {
                        return Err(bad("cocycle terms must target a central kind"))
                    }
                    TermCoeff::Affine(_) if central => {
                        return Err(bad("central kinds can only be reached by a cocycle term"))
                    }
                    _ => {}
                }
                resolved.push(BracketTerm {
                    target: t,
                    coeff: coeff.clone(),
                    offset: *offset,
                });
            }
            lookup.insert((l, r), rules.len());
            rules.push(BracketRule {
                left: l,
                right: r,
                terms: resolved,
            });
        }
        Ok(AlgebraPresentation {
            name: self.name,
            kinds: self.kinds,
            rules,
            lookup,
        })
    }
}

impl AlgebraPresentation {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn kinds(&self) -> &[BasisKind] {
        &self.kinds
    }

    pub fn rules(&self) -> &[BracketRule] {
        &self.rules
    }

    pub fn kind(&self, id: KindId) -> &BasisKind {
        &self.kinds[id]
    }

    pub fn kind_id(&self, name: &str) -> Option<KindId> {
        self.kinds.iter().position(|k| k.name == name)
    }

    /// Basis element by kind name. Panics on an unknown name.
    pub fn elem(&self, name: &str, index: i64) -> BasisElement {
        let kind = self
            .kind_id(name)
            .unwrap_or_else(|| panic!("no kind {name:?} in {}", self.name));
        BasisElement::new(kind, index)
    }

    pub fn degree_of(&self, x: BasisElement) -> GradingDegree {
        let z2 = self.kinds[x.kind].z2;
        GradingDegree::new(z2.0 as i64, z2.1 as i64, x.index)
    }

    /// Whether `x` is an actual basis element: its kind belongs here and a
    /// central kind only carries index 0.
    pub fn is_basis(&self, x: BasisElement) -> bool {
        x.kind < self.kinds.len() && (!self.kinds[x.kind].central || x.index == 0)
    }

    /// All basis elements with index in `[-window, window]`, kinds in
    /// presentation order, indices ascending.
    pub fn window_basis(&self, window: i64) -> Vec<BasisElement> {
        let mut out = Vec::new();
        for (k, kind) in self.kinds.iter().enumerate() {
            if kind.central {
                out.push(BasisElement::new(k, 0));
            } else {
                out.extend((-window..=window).map(|m| BasisElement::new(k, m)));
            }
        }
        out
    }

    fn check(&self, x: BasisElement) -> Result<(), AlgebraError> {
        if x.kind < self.kinds.len() {
            Ok(())
        } else {
            Err(AlgebraError::PresentationMismatch(
                x.kind,
                self.name.clone(),
            ))
        }
    }

    pub fn bracket_basis(&self, x: BasisElement, y: BasisElement) -> Result<Element, AlgebraError> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.bracket_basis_unchecked(x, y))
    }

    pub(crate) fn bracket_basis_unchecked(&self, x: BasisElement, y: BasisElement) -> Element {
        let mut out = Element::zero();
        if let Some(&i) = self.lookup.get(&(x.kind, y.kind)) {
            self.apply_rule(&self.rules[i], x.index, y.index, &int(1), &mut out);
        } else if let Some(&i) = self.lookup.get(&(y.kind, x.kind)) {
            self.apply_rule(&self.rules[i], y.index, x.index, &int(-1), &mut out);
        }
        out
    }

    fn apply_rule(&self, rule: &BracketRule, m: i64, n: i64, sign: &Rational, out: &mut Element) {
        for term in &rule.terms {
            let (coeff, index) = match &term.coeff {
                TermCoeff::Affine(p) => (p.eval(m, n), m + n + term.offset),
                TermCoeff::Cocycle(scale) => {
                    if m + n + term.offset != 0 {
                        continue;
                    }
                    let mm = int(m);
                    (scale * (&mm * &mm * &mm - &mm) / int(12), 0)
                }
            };
            out.add_term(BasisElement::new(term.target, index), &(coeff * sign));
        }
    }

    /// Bilinear extension of the family rules.
    pub fn bracket(&self, x: &Element, y: &Element) -> Result<Element, AlgebraError> {
        for b in x.terms.keys().chain(y.terms.keys()) {
            self.check(*b)?;
        }
        Ok(self.bracket_unchecked(x, y))
    }

    pub(crate) fn bracket_unchecked(&self, x: &Element, y: &Element) -> Element {
        let mut out = Element::zero();
        for (a, ca) in &x.terms {
            for (b, cb) in &y.terms {
                let c = ca * cb;
                out.add_scaled(&self.bracket_basis_unchecked(*a, *b), &c);
            }
        }
        out
    }

    pub fn basis_name(&self, x: BasisElement) -> String {
        let name = self
            .kinds
            .get(x.kind)
            .map(|k| k.name.as_str())
            .unwrap_or("?");
        format!("{name}_{}", x.index)
    }
}

/// Finite formal linear combination of basis elements. Zero coefficients are
/// never stored, so structural equality is mathematical equality.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Element {
    terms: BTreeMap<BasisElement, Rational>,
}

impl Element {
    pub fn zero() -> Self {
        Element::default()
    }

    pub fn basis(b: BasisElement) -> Self {
        Element::from_terms([(b, int(1))])
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (BasisElement, Rational)>) -> Self {
        let mut e = Element::zero();
        for (b, c) in terms {
            e.add_term(b, &c);
        }
        e
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&BasisElement, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, b: BasisElement) -> Rational {
        self.terms.get(&b).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add_term(&mut self, b: BasisElement, c: &Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(b).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&b);
        }
    }

    pub fn add_scaled(&mut self, other: &Element, c: &Rational) {
        if c.is_zero() {
            return;
        }
        for (b, v) in &other.terms {
            self.add_term(*b, &(v * c));
        }
    }

    pub fn scaled(&self, c: &Rational) -> Element {
        if c.is_zero() {
            return Element::zero();
        }
        Element {
            terms: self.terms.iter().map(|(b, v)| (*b, v * c)).collect(),
        }
    }

    pub fn display<'a>(&'a self, p: &'a AlgebraPresentation) -> ElementDisplay<'a> {
        ElementDisplay { e: self, p }
    }
}

impl Add<&Element> for &Element {
    type Output = Element;

    fn add(self, rhs: &Element) -> Element {
        let mut out = self.clone();
        out.add_scaled(rhs, &Rational::one());
        out
    }
}

impl Sub<&Element> for &Element {
    type Output = Element;

    fn sub(self, rhs: &Element) -> Element {
        let mut out = self.clone();
        out.add_scaled(rhs, &-Rational::one());
        out
    }
}

impl Neg for &Element {
    type Output = Element;

    fn neg(self) -> Element {
        self.scaled(&-Rational::one())
    }
}

pub struct ElementDisplay<'a> {
    e: &'a Element,
    p: &'a AlgebraPresentation,
}

impl fmt::Display for ElementDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.e.is_zero() {
            return write!(f, "0");
        }
        for (i, (b, c)) in self.e.terms.iter().enumerate() {
            let name = self.p.basis_name(*b);
            let mag = c.abs();
            let sign = if c.is_negative() { "-" } else { "+" };
            match (i, c.is_negative()) {
                (0, false) => {}
                (0, true) => write!(f, "-")?,
                _ => write!(f, " {sign} ")?,
            }
            if mag.is_one() {
                write!(f, "{name}")?;
            } else {
                write!(f, "{}*{name}", rational::format(&mag))?;
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ValidationFailure {
    Grading {
        x: BasisElement,
        y: BasisElement,
        term: BasisElement,
    },
    SkewSymmetry {
        x: BasisElement,
        y: BasisElement,
        sum: Element,
    },
    Jacobi {
        x: BasisElement,
        y: BasisElement,
        z: BasisElement,
        residual: Element,
    },
}

impl ValidationFailure {
    pub fn describe(&self, p: &AlgebraPresentation) -> String {
        let n = |b: &BasisElement| p.basis_name(*b);
        match self {
            ValidationFailure::Grading { x, y, term } => format!(
                "grading violated: [{}, {}] has term {} of degree {}, expected {}",
                n(x),
                n(y),
                n(term),
                p.degree_of(*term),
                p.degree_of(*x) + p.degree_of(*y)
            ),
            ValidationFailure::SkewSymmetry { x, y, sum } => format!(
                "skew-symmetry violated: [{0}, {1}] + [{1}, {0}] = {2}",
                n(x),
                n(y),
                sum.display(p)
            ),
            ValidationFailure::Jacobi { x, y, z, residual } => format!(
                "Jacobi identity violated for ({}, {}, {}): cyclic sum = {}",
                n(x),
                n(y),
                n(z),
                residual.display(p)
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    pub window: i64,
    pub basis_size: usize,
    pub pairs_checked: usize,
    pub triples_checked: usize,
    pub failure: Option<ValidationFailure>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

/// Checks grading compatibility, skew-symmetry and the Jacobi identity on
/// every basis element with index in `[-window, window]`.
///
/// Jacobi is tested on strictly increasing triples only, and only once
/// skew-symmetry has passed on all pairs: under skew-symmetry the cyclic sum
/// is alternating, so every other ordered triple follows.
pub fn validate_presentation(p: &AlgebraPresentation, window: i64) -> ValidationReport {
    let basis = p.window_basis(window);
    let mut report = ValidationReport {
        window,
        basis_size: basis.len(),
        pairs_checked: 0,
        triples_checked: 0,
        failure: None,
    };

    let mut cache: HashMap<(usize, usize), Element> = HashMap::new();
    for (i, &x) in basis.iter().enumerate() {
        for (j, &y) in basis.iter().enumerate().skip(i) {
            report.pairs_checked += 1;
            let xy = p.bracket_basis_unchecked(x, y);
            let yx = p.bracket_basis_unchecked(y, x);
            let expected = p.degree_of(x) + p.degree_of(y);
            for (&term, _) in xy.terms() {
                if p.degree_of(term) != expected || !p.is_basis(term) {
                    report.failure = Some(ValidationFailure::Grading { x, y, term });
                    return report;
                }
            }
            let sum = &xy + &yx;
            if !sum.is_zero() {
                report.failure = Some(ValidationFailure::SkewSymmetry { x, y, sum });
                return report;
            }
            cache.insert((i, j), xy);
        }
    }

    let pair = |i: usize, j: usize| -> Element {
        if i <= j {
            cache[&(i, j)].clone()
        } else {
            -&cache[&(j, i)]
        }
    };
    for i in 0..basis.len() {
        for j in i + 1..basis.len() {
            for k in j + 1..basis.len() {
                report.triples_checked += 1;
                let (x, y, z) = (basis[i], basis[j], basis[k]);
                let mut residual = p.bracket_unchecked(&Element::basis(x), &pair(j, k));
                residual.add_scaled(
                    &p.bracket_unchecked(&Element::basis(y), &pair(k, i)),
                    &Rational::one(),
                );
                residual.add_scaled(
                    &p.bracket_unchecked(&Element::basis(z), &pair(i, j)),
                    &Rational::one(),
                );
                if !residual.is_zero() {
                    report.failure = Some(ValidationFailure::Jacobi { x, y, z, residual });
                    return report;
                }
            }
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::rational::ratio;

    fn pgca() -> AlgebraPresentation {
        catalog::get("pgca").unwrap()
    }

    #[test]
    fn bracket_examples() {
        let p = pgca();
        let b = |x: BasisElement, y: BasisElement| p.bracket_basis(x, y).unwrap();
        assert_eq!(
            b(p.elem("L", 2), p.elem("L", -1)),
            Element::from_terms([(p.elem("L", 1), int(3))])
        );
        assert!(b(p.elem("L", 3), p.elem("L", 3)).is_zero());
        assert_eq!(
            b(p.elem("H", 1), p.elem("I", 2)),
            Element::basis(p.elem("J", 3))
        );
        assert_eq!(
            b(p.elem("H", 1), p.elem("J", 2)),
            Element::from_terms([(p.elem("I", 3), int(-1))])
        );
        assert_eq!(
            b(p.elem("L", 2), p.elem("H", -1)),
            Element::basis(p.elem("H", 1))
        );
        // reversed pair via skew-symmetry, evaluated at swapped indices
        assert_eq!(
            b(p.elem("I", 2), p.elem("L", 5)),
            Element::from_terms([(p.elem("I", 7), int(-3))])
        );
    }

    #[test]
    fn degree_examples() {
        let p = pgca();
        assert_eq!(p.degree_of(p.elem("H", 5)), GradingDegree::new(1, 1, 5));
        assert_eq!(p.degree_of(p.elem("L", 0)), GradingDegree::new(0, 0, 0));
        assert_eq!(p.degree_of(p.elem("I", -3)), GradingDegree::new(0, 1, -3));
    }

    #[test]
    fn foreign_kind_is_rejected() {
        let p = pgca();
        let alien = BasisElement::new(17, 0);
        assert!(matches!(
            p.bracket_basis(alien, p.elem("L", 0)),
            Err(AlgebraError::PresentationMismatch(17, _))
        ));
        assert!(p
            .bracket(&Element::basis(p.elem("L", 0)), &Element::basis(alien))
            .is_err());
    }

    #[test]
    fn element_prunes_zeros() {
        let p = pgca();
        let x = p.elem("L", 1);
        let mut e = Element::from_terms([(x, ratio(1, 2))]);
        e.add_term(x, &ratio(-1, 2));
        assert!(e.is_zero());
        assert!(Element::basis(x).scaled(&int(0)).is_zero());
        let e = &Element::basis(x) - &Element::basis(x);
        assert_eq!(e, Element::zero());
    }

    #[test]
    fn element_display() {
        let p = pgca();
        let e = Element::from_terms([
            (p.elem("L", 1), int(3)),
            (p.elem("J", -2), int(-1)),
            (p.elem("H", 0), ratio(-1, 2)),
        ]);
        assert_eq!(e.display(&p).to_string(), "3*L_1 - 1/2*H_0 - J_-2");
    }

    #[test]
    fn builder_rejects_bad_input() {
        let dup = PresentationBuilder::new("x")
            .kind("A", (0, 0))
            .kind("A", (0, 1))
            .build();
        assert_eq!(dup.unwrap_err(), AlgebraError::DuplicateKind("A".into()));

        let both = PresentationBuilder::new("x")
            .kind("A", (0, 0))
            .kind("B", (0, 0))
            .rule("A", "B", vec![])
            .rule("B", "A", vec![])
            .build();
        assert!(matches!(both, Err(AlgebraError::DuplicateRule(..))));

        let unknown = PresentationBuilder::new("x")
            .kind("A", (0, 0))
            .rule("A", "Z", vec![])
            .build();
        assert_eq!(unknown.unwrap_err(), AlgebraError::UnknownKind("Z".into()));

        let cocycle_on_plain = PresentationBuilder::new("x")
            .kind("A", (0, 0))
            .rule("A", "A", vec![("A", TermCoeff::Cocycle(int(1)))])
            .build();
        assert!(matches!(
            cocycle_on_plain,
            Err(AlgebraError::BadTerm { .. })
        ));
    }

    #[test]
    fn abelian_passes_validation() {
        let p = catalog::get("abelian").unwrap();
        let r = validate_presentation(&p, 2);
        assert!(r.passed());
        assert_eq!(r.basis_size, 5);
    }

    #[test]
    fn pgca_passes_validation() {
        let r = validate_presentation(&pgca(), 4);
        assert!(r.passed(), "{:?}", r.failure);
        assert_eq!(r.basis_size, 36);
        assert_eq!(r.triples_checked, 36 * 35 * 34 / 6);
    }

    fn pgca_variant(lh: AffinePoly, hj_sign: i64) -> AlgebraPresentation {
        let a = |c0, cm, cn| TermCoeff::Affine(AffinePoly::from_ints(c0, cm, cn));
        PresentationBuilder::new("pgca-variant")
            .kind("L", (0, 0))
            .kind("H", (1, 1))
            .kind("I", (0, 1))
            .kind("J", (1, 0))
            .rule("L", "L", vec![("L", a(0, 1, -1))])
            .rule("L", "H", vec![("H", TermCoeff::Affine(lh))])
            .rule("L", "I", vec![("I", a(0, 1, -1))])
            .rule("L", "J", vec![("J", a(0, 1, -1))])
            .rule("H", "I", vec![("J", a(1, 0, 0))])
            .rule("H", "J", vec![("I", a(hj_sign, 0, 0))])
            .build()
            .unwrap()
    }

    #[test]
    fn flipped_hj_sign_is_still_a_lie_algebra() {
        // H acts on span{I, J} by any scalar matrix pattern; the sign of
        // [H, J] does not enter Jacobi.
        let p = pgca_variant(AffinePoly::from_ints(0, 0, -1), 1);
        assert!(validate_presentation(&p, 3).passed());
    }

    #[test]
    fn corrupted_lh_rule_fails_jacobi() {
        // [L_m, H_n] = (m - n) H_{m+n}: Jacobi on (L_a, H_b, I_c) leaves -a*J.
        let p = pgca_variant(AffinePoly::from_ints(0, 1, -1), -1);
        let r = validate_presentation(&p, 2);
        match r.failure {
            Some(ValidationFailure::Jacobi {
                x,
                y,
                z,
                ref residual,
            }) => {
                let kinds: Vec<_> = [x, y, z]
                    .iter()
                    .map(|b| p.kind(b.kind).name.clone())
                    .collect();
                assert!(kinds.contains(&"L".to_string()) && kinds.contains(&"H".to_string()));
                assert!(!residual.is_zero());
                let text = r.failure.as_ref().unwrap().describe(&p);
                assert!(text.starts_with("Jacobi identity violated for ("), "{text}");
            }
            other => panic!("expected a Jacobi failure, got {other:?}"),
        }
    }

    #[test]
    fn non_skew_rule_is_caught() {
        let p = PresentationBuilder::new("x")
            .kind("A", (0, 0))
            .rule(
                "A",
                "A",
                vec![("A", TermCoeff::Affine(AffinePoly::constant(1)))],
            )
            .build()
            .unwrap();
        let r = validate_presentation(&p, 2);
        assert!(matches!(
            r.failure,
            Some(ValidationFailure::SkewSymmetry { .. })
        ));
    }

    #[test]
    fn offset_breaks_grading() {
        let p = PresentationBuilder::new("x")
            .kind("A", (0, 0))
            .rule_with_offsets(
                "A",
                "A",
                vec![("A", TermCoeff::Affine(AffinePoly::from_ints(0, 1, -1)), 1)],
            )
            .build()
            .unwrap();
        let r = validate_presentation(&p, 2);
        assert!(matches!(r.failure, Some(ValidationFailure::Grading { .. })));
    }

    #[test]
    fn virasoro_cocycle_values() {
        let p = catalog::get("virasoro").unwrap();
        let c = p.elem("C", 0);
        let e = p.bracket_basis(p.elem("L", 2), p.elem("L", -2)).unwrap();
        // (8 - 2) / 12 = 1/2
        assert_eq!(
            e,
            Element::from_terms([(p.elem("L", 0), int(4)), (c, ratio(1, 2))])
        );
        let e = p.bracket_basis(p.elem("L", -3), p.elem("L", 3)).unwrap();
        assert_eq!(e.coeff(c), ratio(-2, 1));
        assert!(p
            .bracket_basis(p.elem("L", 1), p.elem("L", 1))
            .unwrap()
            .is_zero());
    }
}
