//! Isogenies of root data, stored on character lattices: `F` is the matrix
//! of `f: X → X̃` acting on column coordinate vectors, and `f^∨: Ỹ → Y` is
//! `F^T`. The group-level arrow points the other way (`G̃ → G`).

use std::fmt;

use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::intlin::{self, FinAbGroup, IntMatrix, Prime};
use crate::primes::pretty_good;
use crate::rootdatum::{adjoint, simply_connected, CartanComponent, RootDatum};

/// One failed isogeny condition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "violation", rename_all = "kebab-case")]
pub enum IsogenyViolation {
    /// `F` is not `rank(X̃) × rank(X)`.
    Shape { rows: usize, cols: usize, expected_rows: usize, expected_cols: usize },
    /// `F` is not square, so cannot be injective with finite cokernel.
    NotSquare { rows: usize, cols: usize },
    Singular,
    RootImageNotARoot { root: usize },
    RootsNotOnto { target_root: usize },
    /// `f^∨(α̃^∨) ≠ α^∨` where `f(α) = α̃`.
    CorootMismatch { root: usize },
}

impl fmt::Display for IsogenyViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IsogenyViolation::Shape {
                rows,
                cols,
                expected_rows,
                expected_cols,
            } => write!(f, "matrix is {rows}x{cols}, expected {expected_rows}x{expected_cols}"),
            IsogenyViolation::NotSquare { rows, cols } => write!(f, "matrix is {rows}x{cols}, not square"),
            IsogenyViolation::Singular => write!(f, "matrix is singular (infinite cokernel)"),
            IsogenyViolation::RootImageNotARoot { root } => write!(f, "root image ∉ Φ̃ at index {root}"),
            IsogenyViolation::RootsNotOnto { target_root } => {
                write!(f, "target root {target_root} is not an image of a root")
            }
            IsogenyViolation::CorootMismatch { root } => {
                write!(f, "transpose does not carry the matching coroot back at index {root}")
            }
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IsogenyError {
    #[error("invalid isogeny: {}", join(.0))]
    Invalid(Vec<IsogenyViolation>),
    #[error("cannot compose: target of the first is not the source of the second")]
    NotComposable,
    /// Raised only if a separable isogeny changed the pretty-good verdict,
    /// which would contradict the transfer law.
    #[error("transfer law violated at p = {p}: source {source_pg}, target {target_pg}")]
    TransferViolated { p: u64, source_pg: bool, target_pg: bool },
}

fn join(v: &[IsogenyViolation]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Isogeny {
    pub source: RootDatum,
    pub target: RootDatum,
    pub matrix: IntMatrix,
}

impl Isogeny {
    pub fn new(source: RootDatum, target: RootDatum, matrix: IntMatrix) -> Result<Self, IsogenyError> {
        let i = Isogeny { source, target, matrix };
        let v = validate_isogeny(&i);
        if v.is_empty() {
            Ok(i)
        } else {
            Err(IsogenyError::Invalid(v))
        }
    }

    pub fn identity(datum: &RootDatum) -> Self {
        Isogeny {
            source: datum.clone(),
            target: datum.clone(),
            matrix: IntMatrix::identity(datum.rank()),
        }
    }

    fn image(&self, v: &[i64]) -> Option<Vec<i64>> {
        self.matrix
            .apply(&intlin::big_vec(v))
            .iter()
            .map(ToPrimitive::to_i64)
            .collect()
    }

    fn coimage(&self, v: &[i64]) -> Option<Vec<i64>> {
        self.matrix
            .left_apply(&intlin::big_vec(v))
            .iter()
            .map(ToPrimitive::to_i64)
            .collect()
    }

    fn ensure_valid(&self) -> Result<(), IsogenyError> {
        let v = validate_isogeny(self);
        if v.is_empty() {
            Ok(())
        } else {
            Err(IsogenyError::Invalid(v))
        }
    }
}

/// Checks every isogeny condition and names each failure.
pub fn validate_isogeny(i: &Isogeny) -> Vec<IsogenyViolation> {
    let (r, rt) = (i.source.rank(), i.target.rank());
    let (rows, cols) = (i.matrix.rows(), i.matrix.cols());
    if rows != rt || cols != r {
        return vec![IsogenyViolation::Shape {
            rows,
            cols,
            expected_rows: rt,
            expected_cols: r,
        }];
    }
    let mut out = Vec::new();
    if rows != cols {
        out.push(IsogenyViolation::NotSquare { rows, cols });
    } else if i.matrix.determinant().is_zero() {
        out.push(IsogenyViolation::Singular);
    }
    let mut hit = vec![false; i.target.num_roots()];
    for k in 0..i.source.num_roots() {
        let Some(j) = i.image(i.source.root(k)).and_then(|v| i.target.root_index(&v)) else {
            out.push(IsogenyViolation::RootImageNotARoot { root: k });
            continue;
        };
        hit[j] = true;
        if i.coimage(i.target.coroot(j)).as_deref() != Some(i.source.coroot(k)) {
            out.push(IsogenyViolation::CorootMismatch { root: k });
        }
    }
    for (j, h) in hit.iter().enumerate() {
        if !h {
            out.push(IsogenyViolation::RootsNotOnto { target_root: j });
        }
    }
    out
}

/// `X̃ / f(X)`.
pub fn cokernel(i: &Isogeny) -> Result<FinAbGroup, IsogenyError> {
    i.ensure_valid()?;
    Ok(cokernel_unchecked(i))
}

fn cokernel_unchecked(i: &Isogeny) -> FinAbGroup {
    intlin::quotient_group(i.target.rank(), &i.matrix.transpose()).expect("shapes agree")
}

/// `Y / f^∨(Ỹ)`.
pub fn dual_cokernel(i: &Isogeny) -> Result<FinAbGroup, IsogenyError> {
    i.ensure_valid()?;
    Ok(dual_cokernel_unchecked(i))
}

fn dual_cokernel_unchecked(i: &Isogeny) -> FinAbGroup {
    intlin::quotient_group(i.source.rank(), &i.matrix).expect("shapes agree")
}

/// `p ∤ |coker f|`. The cokernel of `f^∨` has the same order.
pub fn separable_at(i: &Isogeny, p: Prime) -> Result<bool, IsogenyError> {
    i.ensure_valid()?;
    let c = cokernel_unchecked(i);
    let d = dual_cokernel_unchecked(i);
    assert_eq!(c.order(), d.order(), "|coker f| = |coker f^∨| = |det F|");
    Ok(c.p_torsion_free(p))
}

/// Outcome of comparing the pretty-good verdicts across an isogeny.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Transfer {
    pub source_pretty_good: bool,
    pub target_pretty_good: bool,
    /// The cokernel has no p-torsion, so the two verdicts must agree.
    pub applies: bool,
}

pub fn transfer_pretty_good(i: &Isogeny, p: Prime) -> Result<Transfer, IsogenyError> {
    let applies = separable_at(i, p)?;
    let t = Transfer {
        source_pretty_good: pretty_good(&i.source, p),
        target_pretty_good: pretty_good(&i.target, p),
        applies,
    };
    if applies && t.source_pretty_good != t.target_pretty_good {
        return Err(IsogenyError::TransferViolated {
            p: p.get(),
            source_pg: t.source_pretty_good,
            target_pg: t.target_pretty_good,
        });
    }
    Ok(t)
}

/// `second ∘ first` on character lattices.
pub fn compose(first: &Isogeny, second: &Isogeny) -> Result<Isogeny, IsogenyError> {
    if first.target != second.source {
        return Err(IsogenyError::NotComposable);
    }
    let m = second.matrix.mul(&first.matrix).map_err(|_| IsogenyError::NotComposable)?;
    Isogeny::new(first.source.clone(), second.target.clone(), m)
}

/// The natural isogeny `AD(T) → SC(T)` on character lattices (inclusion of
/// the root lattice in the weight lattice), whose matrix is the Cartan
/// matrix. At group level this is the central isogeny `SC → AD`.
pub fn adjoint_to_simply_connected(t: CartanComponent) -> Isogeny {
    let c = t.cartan_matrix();
    let m = IntMatrix::from_i64_rows(t.rank, &c).expect("Cartan matrix is square");
    Isogeny::new(adjoint(t), simply_connected(t), m).expect("the Cartan matrix maps ZΦ into Λ")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootdatum::{preset, Series};

    fn d(s: &str) -> RootDatum {
        preset(s).unwrap()
    }

    fn p(n: u64) -> Prime {
        Prime::new(n).unwrap()
    }

    fn times(k: i64) -> Isogeny {
        Isogeny {
            source: d("AD(A1)"),
            target: d("SC(A1)"),
            matrix: IntMatrix::from_i64_rows(1, &[[k]]).unwrap(),
        }
    }

    #[test]
    fn validation_examples() {
        assert!(validate_isogeny(&times(2)).is_empty());
        assert!(validate_isogeny(&Isogeny::identity(&d("SC(G2)"))).is_empty());
        let v = validate_isogeny(&times(3));
        assert!(v.contains(&IsogenyViolation::RootImageNotARoot { root: 0 }));
        assert!(v[0].to_string().contains("root image ∉ Φ̃"));
    }

    #[test]
    fn wrong_shape_is_reported() {
        let i = Isogeny {
            source: d("GL(2)"),
            target: d("SC(A1)"),
            matrix: IntMatrix::from_i64_rows(2, &[[1, 0]]).unwrap(),
        };
        assert_eq!(validate_isogeny(&i)[0], IsogenyViolation::NotSquare { rows: 1, cols: 2 });
        let j = Isogeny {
            matrix: IntMatrix::from_i64_rows(1, &[[1]]).unwrap(),
            ..i
        };
        assert!(matches!(validate_isogeny(&j)[0], IsogenyViolation::Shape { .. }));
    }

    #[test]
    fn cokernel_examples() {
        assert_eq!(cokernel(&times(2)).unwrap().to_string(), "Z/2");
        assert!(cokernel(&Isogeny::identity(&d("GL(3)"))).unwrap().is_trivial());
        let diag = Isogeny {
            source: d("Torus(2)"),
            target: d("Torus(2)"),
            matrix: IntMatrix::from_i64_rows(2, &[[1, 0], [0, 3]]).unwrap(),
        };
        assert_eq!(cokernel(&diag).unwrap().to_string(), "Z/3");
        assert!(cokernel(&times(3)).is_err());
    }

    #[test]
    fn separability_examples() {
        assert!(separable_at(&times(2), p(3)).unwrap());
        assert!(!separable_at(&times(2), p(2)).unwrap());
        for q in [2, 3, 5] {
            assert!(separable_at(&Isogeny::identity(&d("SC(B3)")), p(q)).unwrap());
        }
    }

    #[test]
    fn transfer_examples() {
        let t = transfer_pretty_good(&times(2), p(3)).unwrap();
        assert!(t.applies && t.source_pretty_good && t.target_pretty_good);
        let t = transfer_pretty_good(&times(2), p(2)).unwrap();
        assert!(!t.applies && !t.source_pretty_good && !t.target_pretty_good);
        let t = transfer_pretty_good(&Isogeny::identity(&d("SC(A2)")), p(3)).unwrap();
        assert!(t.applies && t.source_pretty_good == t.target_pretty_good);
    }

    #[test]
    fn cartan_family_is_valid_with_cokernel_the_center() {
        for n in 1..=6 {
            let t = CartanComponent::new(Series::A, n).unwrap();
            let i = adjoint_to_simply_connected(t);
            assert_eq!(cokernel(&i).unwrap().order(), Some((n as u64 + 1).into()));
        }
        for t in ["B3", "C3", "D4", "G2", "F4", "E6"] {
            let i = adjoint_to_simply_connected(CartanComponent::parse(t).unwrap());
            assert!(validate_isogeny(&i).is_empty(), "{t}");
        }
    }

    #[test]
    fn composition_multiplies_cokernel_orders() {
        let t = CartanComponent::new(Series::A, 3).unwrap();
        let a = adjoint_to_simply_connected(t);
        let id = Isogeny::identity(&a.target);
        let c = compose(&a, &id).unwrap();
        assert_eq!(cokernel(&c).unwrap().order(), Some(4.into()));
        let two = Isogeny {
            source: d("Torus(1)"),
            target: d("Torus(1)"),
            matrix: IntMatrix::from_i64_rows(1, &[[2]]).unwrap(),
        };
        let c = compose(&two, &two).unwrap();
        assert_eq!(cokernel(&c).unwrap().order(), Some(4.into()));
        assert_eq!(compose(&a, &a), Err(IsogenyError::NotComposable));
    }

    #[test]
    fn json_shape() {
        let v = serde_json::to_value(times(2)).unwrap();
        let keys: Vec<&String> = v.as_object().unwrap().keys().collect();
        assert_eq!(keys, ["matrix", "source", "target"]);
        let back: Isogeny = serde_json::from_value(v).unwrap();
        assert_eq!(back, times(2));
    }
}
