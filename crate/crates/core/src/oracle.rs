//! Hand-written recurrence systems for the planar Galilean conformal
//! algebra, one per Z2 sector of the derivation degree.
//!
//! Each system is transcribed directly from the bracket relations with
//! `L_m` on the left, with delta = 1/2 already cleared, and shares no code
//! with [`crate::solver`] beyond the nullspace routine. Conclusions derived
//! from earlier relations are never substituted into later ones: for
//! instance the `[L, H]` relation in the even sector keeps `a_m` rather
//! than a constant `a`.
//!
//! A homogeneous component of degree `(e1, e2, g)` acts on the four
//! families `L, H, I, J` by one scalar sequence each, always listed in that
//! order:
//!
//! | sector | L      | H      | I      | J      |
//! |--------|--------|--------|--------|--------|
//! | (0,0)  | a -> L | b -> H | c -> I | d -> J |
//! | (0,1)  | x -> I | y -> J | z -> L | w -> H |
//! | (1,0)  | h -> J | e -> I | f -> H | g -> L |
//! | (1,1)  | i -> H | j -> L | k -> J | l -> I |

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::grading::GradingDegree;
use crate::linalg::{self, SparseMatrix};
use crate::rational::{int, Rational};
use crate::solver::{BlockSummary, Classification, SolveReport};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("window {window} too small for degree shift {gamma}: need window >= {required}")]
    WindowTooSmall {
        window: i64,
        gamma: i64,
        required: i64,
    },
    #[error("interior {interior} must lie in [0, window = {window}]")]
    BadInterior { interior: i64, window: i64 },
    #[error("invalid sector ({0}, {1})")]
    BadSector(u8, u8),
}

/// Which sequence index a term refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum At {
    M,
    N,
    Sum,
}

type Coeff = fn(i64, i64, i64) -> i64;

/// `sum coeff(m, n, g) * family[at] = 0`.
struct Relation {
    terms: &'static [(usize, At, Coeff)],
}

/// One literal two-index linear system over named sequences.
pub struct RecurrenceSystem {
    pub id: &'static str,
    pub families: &'static [&'static str],
    relations: Vec<Relation>,
}

// Family indices inside a sector, matching the table in the module docs.
const F_L: usize = 0;
const F_H: usize = 1;
const F_I: usize = 2;
const F_J: usize = 3;

fn sector_system(sector: (u8, u8)) -> Option<RecurrenceSystem> {
    let sys = match sector {
        (0, 0) => RecurrenceSystem {
            id: "sector (0,0)",
            families: &["a", "b", "c", "d"],
            relations: vec![
                // 2(m-n) a_{m+n} = (m+g-n) a_m + (m-n-g) a_n
                Relation {
                    terms: &[
                        (F_L, At::Sum, |m, n, _| 2 * (m - n)),
                        (F_L, At::M, |m, n, g| -(m + g - n)),
                        (F_L, At::N, |m, n, g| -(m - n - g)),
                    ],
                },
                // 2(m-n) c_{m+n} = (m+g-n) a_m + (m-n-g) c_n
                Relation {
                    terms: &[
                        (F_I, At::Sum, |m, n, _| 2 * (m - n)),
                        (F_L, At::M, |m, n, g| -(m + g - n)),
                        (F_I, At::N, |m, n, g| -(m - n - g)),
                    ],
                },
                // 2(m-n) d_{m+n} = (m+g-n) a_m + (m-n-g) d_n
                Relation {
                    terms: &[
                        (F_J, At::Sum, |m, n, _| 2 * (m - n)),
                        (F_L, At::M, |m, n, g| -(m + g - n)),
                        (F_J, At::N, |m, n, g| -(m - n - g)),
                    ],
                },
                // -2n b_{m+n} = -n a_m + (-n-g) b_n
                Relation {
                    terms: &[
                        (F_H, At::Sum, |_, n, _| -2 * n),
                        (F_L, At::M, |_, n, _| n),
                        (F_H, At::N, |_, n, g| n + g),
                    ],
                },
            ],
        },
        (0, 1) => RecurrenceSystem {
            id: "sector (0,1)",
            families: &["x", "y", "z", "w"],
            relations: vec![
                // 2(m-n) x_{m+n} = (m+g-n) x_m + (m-n-g) x_n
                Relation {
                    terms: &[
                        (F_L, At::Sum, |m, n, _| 2 * (m - n)),
                        (F_L, At::M, |m, n, g| -(m + g - n)),
                        (F_L, At::N, |m, n, g| -(m - n - g)),
                    ],
                },
                // -2n y_{m+n} = -x_m + (m-n-g) y_n
                Relation {
                    terms: &[
                        (F_H, At::Sum, |_, n, _| -2 * n),
                        (F_L, At::M, |_, _, _| 1),
                        (F_H, At::N, |m, n, g| -(m - n - g)),
                    ],
                },
                // 2(m-n) z_{m+n} = (m-n-g) z_n
                Relation {
                    terms: &[
                        (F_I, At::Sum, |m, n, _| 2 * (m - n)),
                        (F_I, At::N, |m, n, g| -(m - n - g)),
                    ],
                },
                // 2(m-n) w_{m+n} = (-n-g) w_n
                Relation {
                    terms: &[
                        (F_J, At::Sum, |m, n, _| 2 * (m - n)),
                        (F_J, At::N, |_, n, g| n + g),
                    ],
                },
            ],
        },
        (1, 0) => RecurrenceSystem {
            id: "sector (1,0)",
            families: &["h", "e", "f", "g"],
            relations: vec![
                // 2(m-n) h_{m+n} = (m+g-n) h_m + (m-n-g) h_n
                Relation {
                    terms: &[
                        (F_L, At::Sum, |m, n, _| 2 * (m - n)),
                        (F_L, At::M, |m, n, g| -(m + g - n)),
                        (F_L, At::N, |m, n, g| -(m - n - g)),
                    ],
                },
                // -2n e_{m+n} = h_m + (m-n-g) e_n
                Relation {
                    terms: &[
                        (F_H, At::Sum, |_, n, _| -2 * n),
                        (F_L, At::M, |_, _, _| -1),
                        (F_H, At::N, |m, n, g| -(m - n - g)),
                    ],
                },
                // 2(m-n) f_{m+n} = (-n-g) f_n
                Relation {
                    terms: &[
                        (F_I, At::Sum, |m, n, _| 2 * (m - n)),
                        (F_I, At::N, |_, n, g| n + g),
                    ],
                },
                // 2(m-n) g_{m+n} = (m-n-g) g_n
                Relation {
                    terms: &[
                        (F_J, At::Sum, |m, n, _| 2 * (m - n)),
                        (F_J, At::N, |m, n, g| -(m - n - g)),
                    ],
                },
            ],
        },
        (1, 1) => RecurrenceSystem {
            id: "sector (1,1)",
            families: &["i", "j", "k", "l"],
            relations: vec![
                // -2n j_{m+n} = (m-n-g) j_n
                Relation {
                    terms: &[
                        (F_H, At::Sum, |_, n, _| -2 * n),
                        (F_H, At::N, |m, n, g| -(m - n - g)),
                    ],
                },
                // 2(m-n) k_{m+n} = i_m + (m-n-g) k_n
                Relation {
                    terms: &[
                        (F_I, At::Sum, |m, n, _| 2 * (m - n)),
                        (F_L, At::M, |_, _, _| -1),
                        (F_I, At::N, |m, n, g| -(m - n - g)),
                    ],
                },
                // 2(m-n) l_{m+n} = -i_m + (m-n-g) l_n
                Relation {
                    terms: &[
                        (F_J, At::Sum, |m, n, _| 2 * (m - n)),
                        (F_L, At::M, |_, _, _| 1),
                        (F_J, At::N, |m, n, g| -(m - n - g)),
                    ],
                },
                // 2(m-n) i_{m+n} = (m+g) i_m + (-n-g) i_n
                Relation {
                    terms: &[
                        (F_L, At::Sum, |m, n, _| 2 * (m - n)),
                        (F_L, At::M, |m, _, g| -(m + g)),
                        (F_L, At::N, |_, n, g| n + g),
                    ],
                },
            ],
        },
        _ => return None,
    };
    Some(sys)
}

/// The standalone single-sequence recurrences whose solution sets are
/// stated as lemmas.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Lemma {
    /// `2(m-n) a_{m+n} = (m+g-n) a_m + (m-n-g) a_n`: constants.
    LToL,
    /// `2(m-n) z_{m+n} = (m-n-g) z_n`: zero.
    IToL,
    /// `2(m-n) w_{m+n} = (-n-g) w_n`: zero.
    JToH,
    /// `-2n j_{m+n} = (m-n-g) j_n`: zero.
    HToL,
    /// `2(m-n) i_{m+n} = (m+g) i_m + (-n-g) i_n`: zero.
    LToH,
}

impl Lemma {
    pub const ALL: [Lemma; 5] = [
        Lemma::LToL,
        Lemma::IToL,
        Lemma::JToH,
        Lemma::HToL,
        Lemma::LToH,
    ];

    pub fn id(&self) -> &'static str {
        match self {
            Lemma::LToL => "L->L under [L,L]",
            Lemma::IToL => "I->L under [L,I]",
            Lemma::JToH => "J->H under [L,J]",
            Lemma::HToL => "H->L under [L,H]",
            Lemma::LToH => "L->H under [L,L]",
        }
    }

    pub fn expected(&self) -> Expected {
        match self {
            Lemma::LToL => Expected::Constants,
            _ => Expected::Zero,
        }
    }

    fn system(&self) -> RecurrenceSystem {
        let relation = match self {
            Lemma::LToL => Relation {
                terms: &[
                    (0, At::Sum, |m, n, _| 2 * (m - n)),
                    (0, At::M, |m, n, g| -(m + g - n)),
                    (0, At::N, |m, n, g| -(m - n - g)),
                ],
            },
            Lemma::IToL => Relation {
                terms: &[
                    (0, At::Sum, |m, n, _| 2 * (m - n)),
                    (0, At::N, |m, n, g| -(m - n - g)),
                ],
            },
            Lemma::JToH => Relation {
                terms: &[
                    (0, At::Sum, |m, n, _| 2 * (m - n)),
                    (0, At::N, |_, n, g| n + g),
                ],
            },
            Lemma::HToL => Relation {
                terms: &[
                    (0, At::Sum, |_, n, _| -2 * n),
                    (0, At::N, |m, n, g| -(m - n - g)),
                ],
            },
            Lemma::LToH => Relation {
                terms: &[
                    (0, At::Sum, |m, n, _| 2 * (m - n)),
                    (0, At::M, |m, _, g| -(m + g)),
                    (0, At::N, |_, n, g| n + g),
                ],
            },
        };
        RecurrenceSystem {
            id: self.id(),
            families: &["u"],
            relations: vec![relation],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Expected {
    Constants,
    Zero,
}

impl RecurrenceSystem {
    fn column(&self, family: usize, index: i64, window: i64) -> usize {
        family * (2 * window + 1) as usize + (index + window) as usize
    }

    /// One row per relation per `(m, n)` with `m`, `n`, `m + n` in the window.
    pub fn assemble(&self, gamma: i64, window: i64) -> SparseMatrix {
        let cols = self.families.len() * (2 * window + 1) as usize;
        let mut mat = SparseMatrix::new(cols);
        for m in -window..=window {
            for n in -window..=window {
                if (m + n).abs() > window {
                    continue;
                }
                for rel in &self.relations {
                    let row = rel.terms.iter().map(|(f, at, c)| {
                        let idx = match at {
                            At::M => m,
                            At::N => n,
                            At::Sum => m + n,
                        };
                        (self.column(*f, idx, window), int(c(m, n, gamma)))
                    });
                    mat.push_row(row);
                }
            }
        }
        mat
    }

    /// Interior solution space: basis of the nullspace restricted to
    /// indices `|m| <= interior` of every family.
    pub fn interior_space(&self, gamma: i64, window: i64, interior: i64) -> linalg::VectorBasis {
        let ns = linalg::nullspace(&self.assemble(gamma, window));
        let coords: Vec<usize> = (0..self.families.len())
            .flat_map(|f| (-interior..=interior).map(move |i| (f, i)))
            .map(|(f, i)| self.column(f, i, window))
            .collect();
        linalg::project(&ns, &coords)
    }
}

fn check_sizes(gamma: i64, window: i64, interior: i64) -> Result<(), OracleError> {
    let required = 2 * (gamma.abs() + 1);
    if window < required {
        return Err(OracleError::WindowTooSmall {
            window,
            gamma,
            required,
        });
    }
    if interior < 0 || interior > window {
        return Err(OracleError::BadInterior { interior, window });
    }
    Ok(())
}

fn all_equal_nonzero(v: &[Rational]) -> bool {
    v.first()
        .is_some_and(|first| !num_traits::Zero::is_zero(first) && v.iter().all(|x| x == first))
}

/// Solves the hand-written system of one sector at shift `gamma`.
pub fn solve_case(
    sector: (u8, u8),
    gamma: i64,
    window: i64,
    interior: i64,
) -> Result<SolveReport, OracleError> {
    check_sizes(gamma, window, interior)?;
    let sys = sector_system(sector).ok_or(OracleError::BadSector(sector.0, sector.1))?;
    let ns = linalg::nullspace(&sys.assemble(gamma, window));
    let space = sys.interior_space(gamma, window, interior);
    let classification = match space.len() {
        0 => Classification::Zero,
        1 if all_equal_nonzero(&space.vectors()[0]) => Classification::Scalar,
        _ => Classification::Nontrivial,
    };
    let width = (2 * interior + 1) as usize;
    let basis = space
        .vectors()
        .iter()
        .map(|v| {
            sys.families
                .iter()
                .enumerate()
                .map(|(f, name)| BlockSummary {
                    source: name.to_string(),
                    target: name.to_string(),
                    from: -interior,
                    values: v[f * width..(f + 1) * width].to_vec(),
                })
                .collect()
        })
        .collect();
    Ok(SolveReport {
        degree: GradingDegree::new(sector.0 as i64, sector.1 as i64, gamma),
        delta: crate::rational::ratio(1, 2),
        window,
        interior,
        full_dim: ns.len(),
        interior_dim: space.len(),
        basis,
        classification,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LemmaResult {
    pub lemma: String,
    pub gamma: i64,
    pub window: i64,
    pub interior: i64,
    pub interior_dim: usize,
    pub expected: Expected,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LemmaReport {
    pub window: i64,
    pub results: Vec<LemmaResult>,
    pub all_pass: bool,
}

/// Minimum window for the lemma check.
pub const LEMMA_MIN_WINDOW: i64 = 8;
/// Largest `|gamma|` covered by the lemma check.
pub const LEMMA_GAMMA_MAX: i64 = 3;

/// Checks each standalone recurrence against its stated solution set for
/// every `|gamma| <= 3`.
pub fn check_lemma_conclusions(window: i64) -> Result<LemmaReport, OracleError> {
    if window < LEMMA_MIN_WINDOW {
        return Err(OracleError::WindowTooSmall {
            window,
            gamma: LEMMA_GAMMA_MAX,
            required: LEMMA_MIN_WINDOW,
        });
    }
    let mut results = Vec::new();
    for lemma in Lemma::ALL {
        let sys = lemma.system();
        for gamma in -LEMMA_GAMMA_MAX..=LEMMA_GAMMA_MAX {
            let interior = (window / 2).min(window - 2 * (gamma.abs() + 1));
            let space = sys.interior_space(gamma, window, interior);
            let pass = match lemma.expected() {
                Expected::Zero => space.is_empty(),
                Expected::Constants => space.len() == 1 && all_equal_nonzero(&space.vectors()[0]),
            };
            results.push(LemmaResult {
                lemma: lemma.id().to_string(),
                gamma,
                window,
                interior,
                interior_dim: space.len(),
                expected: lemma.expected(),
                pass,
            });
        }
    }
    let all_pass = results.iter().all(|r| r.pass);
    Ok(LemmaReport {
        window,
        results,
        all_pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn even_sector_scalar_at_zero() {
        let r = solve_case((0, 0), 0, 12, 6).unwrap();
        assert_eq!(r.interior_dim, 1);
        assert_eq!(r.classification, Classification::Scalar);
    }

    #[test]
    fn odd_sectors_zero() {
        for sector in [(0, 1), (1, 0), (1, 1)] {
            for g in -4..=4 {
                let r = solve_case(sector, g, 12, 4).unwrap();
                assert_eq!(
                    r.classification,
                    Classification::Zero,
                    "{sector:?} gamma {g}"
                );
            }
        }
    }

    #[test]
    fn lemma_examples() {
        let sys = Lemma::LToL.system();
        let s = sys.interior_space(1, 12, 6);
        assert_eq!(s.len(), 1);
        assert!(all_equal_nonzero(&s.vectors()[0]));
        assert!(Lemma::IToL.system().interior_space(2, 12, 6).is_empty());
        assert!(Lemma::LToH.system().interior_space(0, 12, 6).is_empty());
    }

    #[test]
    fn ltol_at_zero_shift_is_constants() {
        // reduces to 2(m-n) a_{m+n} = (m-n)(a_m + a_n)
        let s = Lemma::LToL.system().interior_space(0, 10, 5);
        assert_eq!(s.len(), 1);
        assert!(s.vectors()[0].iter().all(|x| x == &int(1)));
    }

    #[test]
    fn undersized_windows_refused() {
        assert!(matches!(
            solve_case((0, 0), 4, 8, 2),
            Err(OracleError::WindowTooSmall { required: 10, .. })
        ));
        assert!(check_lemma_conclusions(4).is_err());
        assert_eq!(
            solve_case((2, 0), 0, 8, 2).unwrap_err(),
            OracleError::BadSector(2, 0)
        );
    }

    #[test]
    fn lemma_suite_passes() {
        let r = check_lemma_conclusions(12).unwrap();
        assert_eq!(r.results.len(), 35);
        assert!(
            r.all_pass,
            "{:#?}",
            r.results.iter().filter(|x| !x.pass).collect::<Vec<_>>()
        );
    }
}
