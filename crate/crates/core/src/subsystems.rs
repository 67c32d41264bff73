//! Subsets of Φ: span closures, the enumeration of all closure classes,
//! highest roots, crossing out a node of the extended diagram, Weyl
//! reflections and Coxeter elements of type-A parts.

use std::collections::{BTreeSet, HashSet};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exec::Exec;
use crate::intlin::{self, FinAbGroup, IntMatrix, Prime, RowLattice};
use crate::rootdatum::{CartanComponent, Component, DatumError, RootDatum};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SubsystemError {
    #[error("component {component} is of type {cartan}, not type A")]
    NonTypeA { component: usize, cartan: CartanComponent },
    #[error("component index {0} out of range")]
    NoSuchComponent(usize),
    #[error("node {node} out of range for a component of rank {rank}")]
    NoSuchNode { node: usize, rank: usize },
    #[error("root index {0} out of range")]
    BadIndex(usize),
    #[error(transparent)]
    Datum(#[from] DatumError),
}

/// A set of root indices, kept sorted. Serializes as the index list.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RootSubset(Vec<usize>);

impl RootSubset {
    pub fn new(mut indices: Vec<usize>) -> Self {
        indices.sort_unstable();
        indices.dedup();
        RootSubset(indices)
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0.binary_search(&i).is_ok()
    }

    pub fn is_subset_of(&self, other: &RootSubset) -> bool {
        self.0.iter().all(|&i| other.contains(i))
    }

    pub fn check(&self, datum: &RootDatum) -> Result<(), SubsystemError> {
        match self.0.iter().find(|&&i| i >= datum.num_roots()) {
            Some(&i) => Err(SubsystemError::BadIndex(i)),
            None => Ok(()),
        }
    }
}

/// `{α ∈ Φ | α ∈ ZS}`.
pub fn span_closure(datum: &RootDatum, subset: &RootSubset) -> RootSubset {
    let lattice = RowLattice::new(datum.rank(), &datum.root_matrix(subset.indices())).expect("shapes agree");
    closure_in(datum, &lattice)
}

fn closure_in(datum: &RootDatum, lattice: &RowLattice) -> RootSubset {
    RootSubset(
        (0..datum.num_roots())
            .filter(|&i| lattice.contains(&intlin::big_vec(datum.root(i))))
            .collect(),
    )
}

pub fn is_closed(datum: &RootDatum, subset: &RootSubset) -> bool {
    span_closure(datum, subset) == *subset
}

/// Every set of the form `Φ ∩ ZΦ'` for `Φ' ⊆ Φ`, each listed once, ordered
/// by size and then lexicographically.
///
/// Grows closures one root at a time from the empty set: the closure of
/// `C ∪ {α}` only depends on `ZC + Zα`, so every closure class is reached.
pub fn closed_subsets(datum: &RootDatum, exec: Exec) -> Vec<RootSubset> {
    let positives: Vec<usize> = (0..datum.num_roots()).filter(|&i| datum.is_positive(i)).collect();
    let mut seen: HashSet<RootSubset> = HashSet::new();
    let empty = RootSubset::default();
    seen.insert(empty.clone());
    let mut frontier = vec![empty];
    while !frontier.is_empty() {
        let grown: Vec<Vec<RootSubset>> = exec.map(frontier, |c| {
            positives
                .iter()
                .filter(|&&a| !c.contains(a))
                .map(|&a| {
                    let mut gens = c.indices().to_vec();
                    gens.push(a);
                    span_closure(datum, &RootSubset::new(gens))
                })
                .collect()
        });
        let mut next = Vec::new();
        for s in grown.into_iter().flatten() {
            if seen.insert(s.clone()) {
                next.push(s);
            }
        }
        frontier = next;
    }
    let mut out: Vec<RootSubset> = seen.into_iter().collect();
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HighestRoot {
    pub component: usize,
    pub cartan: CartanComponent,
    pub root: usize,
    pub coefficients: Vec<i64>,
}

pub fn highest_roots(datum: &RootDatum) -> Result<Vec<HighestRoot>, SubsystemError> {
    Ok(datum
        .components()?
        .iter()
        .enumerate()
        .map(|(k, c)| HighestRoot {
            component: k,
            cartan: c.cartan,
            root: c.highest_root,
            coefficients: c.highest_coefficients.clone(),
        })
        .collect())
}

/// The subsystem with base `(Δ \ {α_node}) ∪ {-β}`, where `β` is the highest
/// root of the chosen component and `node` is a Bourbaki node number
/// (0-based) of that component. Generated as the orbit of the new base under
/// its own reflections.
pub fn cross_out_node(datum: &RootDatum, component: usize, node: usize) -> Result<RootSubset, SubsystemError> {
    let comps = datum.components()?;
    let comp = comps.get(component).ok_or(SubsystemError::NoSuchComponent(component))?;
    if node >= comp.simple.len() {
        return Err(SubsystemError::NoSuchNode {
            node,
            rank: comp.simple.len(),
        });
    }
    let crossed = comp.simple[node];
    let mut base: Vec<usize> = datum
        .simple_system()
        .iter()
        .copied()
        .filter(|&i| i != crossed)
        .collect();
    base.push(datum.negative_of(comp.highest_root));
    Ok(reflection_orbit(datum, &base))
}

/// Closure of `seeds` under the reflections `s_γ`, `γ ∈ seeds`.
pub fn reflection_orbit(datum: &RootDatum, seeds: &[usize]) -> RootSubset {
    let mut found: BTreeSet<usize> = seeds.iter().copied().collect();
    let mut queue: Vec<usize> = seeds.to_vec();
    while let Some(i) = queue.pop() {
        for &g in seeds {
            let c = datum.pairing(i, g);
            let img: Vec<i64> = datum
                .root(i)
                .iter()
                .zip(datum.root(g))
                .map(|(x, a)| x - c * a)
                .collect();
            let j = datum.root_index(&img).expect("reflections permute Φ");
            if found.insert(j) {
                queue.push(j);
            }
        }
    }
    RootSubset(found.into_iter().collect())
}

/// A node whose crossing exposes `p`-torsion: the first component (in order)
/// with a highest-root coefficient divisible by `p`, and its first such node
/// in Bourbaki order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CrossedNode {
    pub component: usize,
    pub node: usize,
    pub coefficient: i64,
    pub subsystem: RootSubset,
}

pub fn cross_out_for_prime(datum: &RootDatum, p: Prime) -> Result<Option<CrossedNode>, SubsystemError> {
    let pp = p.get() as i64;
    for (k, comp) in datum.components()?.iter().enumerate() {
        if let Some(node) = comp.highest_coefficients.iter().position(|&m| m % pp == 0) {
            return Ok(Some(CrossedNode {
                component: k,
                node,
                coefficient: comp.highest_coefficients[node],
                subsystem: cross_out_node(datum, k, node)?,
            }));
        }
    }
    Ok(None)
}

/// An element of the Weyl group, as its matrix on `X` acting on column
/// coordinate vectors.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct WeylElement {
    pub matrix: IntMatrix,
}

impl WeylElement {
    pub fn identity(rank: usize) -> Self {
        WeylElement {
            matrix: IntMatrix::identity(rank),
        }
    }

    /// `self ∘ other`
    pub fn compose(&self, other: &WeylElement) -> WeylElement {
        WeylElement {
            matrix: self.matrix.mul(&other.matrix).expect("same rank"),
        }
    }

    pub fn apply(&self, v: &[i64]) -> Vec<BigInt> {
        self.matrix.apply(&intlin::big_vec(v))
    }

    /// The permutation of root indices induced on Φ, if the matrix does
    /// permute Φ.
    pub fn root_permutation(&self, datum: &RootDatum) -> Option<Vec<usize>> {
        let mut perm = Vec::with_capacity(datum.num_roots());
        let mut hit = vec![false; datum.num_roots()];
        for r in datum.roots() {
            let img: Option<Vec<i64>> = self.apply(r).iter().map(num_traits::ToPrimitive::to_i64).collect();
            let j = datum.root_index(&img?)?;
            if std::mem::replace(&mut hit[j], true) {
                return None;
            }
            perm.push(j);
        }
        Some(perm)
    }

    /// Smallest `k >= 1` with `w^k = 1`, searched up to `limit`.
    pub fn order(&self, limit: usize) -> Option<usize> {
        let id = IntMatrix::identity(self.matrix.rows());
        let mut acc = self.matrix.clone();
        for k in 1..=limit {
            if acc == id {
                return Some(k);
            }
            acc = acc.mul(&self.matrix).expect("square");
        }
        None
    }

    pub fn is_unimodular(&self) -> bool {
        let d = self.matrix.determinant();
        d.is_one() || (-d).is_one()
    }
}

/// `s_α: x ↦ x - <x, α^∨> α`, as the matrix `I - α (α^∨)^T`.
pub fn reflection(datum: &RootDatum, i: usize) -> Result<WeylElement, SubsystemError> {
    if i >= datum.num_roots() {
        return Err(SubsystemError::BadIndex(i));
    }
    let r = datum.rank();
    let a = datum.root(i);
    let ad = datum.coroot(i);
    let mut m = IntMatrix::identity(r);
    for row in 0..r {
        for col in 0..r {
            m[(row, col)] -= BigInt::from(a[row] * ad[col]);
        }
    }
    Ok(WeylElement { matrix: m })
}

/// Components of type A, in order. Errors on the first other type.
fn type_a_components(datum: &RootDatum) -> Result<Vec<&Component>, SubsystemError> {
    let comps = datum.components()?;
    for (k, c) in comps.iter().enumerate() {
        if !c.cartan.is_type_a() {
            return Err(SubsystemError::NonTypeA {
                component: k,
                cartan: c.cartan,
            });
        }
    }
    Ok(comps.iter().collect())
}

fn selected_components<'a>(datum: &'a RootDatum, which: &[usize]) -> Result<Vec<&'a Component>, SubsystemError> {
    let comps = datum.components()?;
    which
        .iter()
        .map(|&k| {
            let c = comps.get(k).ok_or(SubsystemError::NoSuchComponent(k))?;
            if c.cartan.is_type_a() {
                Ok(c)
            } else {
                Err(SubsystemError::NonTypeA {
                    component: k,
                    cartan: c.cartan,
                })
            }
        })
        .collect()
}

fn coxeter_product(datum: &RootDatum, comps: &[&Component]) -> WeylElement {
    let mut s = WeylElement::identity(datum.rank());
    for c in comps {
        for &i in &c.simple {
            s = s.compose(&reflection(datum, i).expect("simple roots are valid indices"));
        }
    }
    s
}

/// `s = s_1 ⋯ s_n` with `s_i = s_{i1} ⋯ s_{i m_i}` the Coxeter element of the
/// i-th component in Bourbaki order. Every component must be of type A.
pub fn coxeter_element_type_a(datum: &RootDatum) -> Result<WeylElement, SubsystemError> {
    let comps = type_a_components(datum)?;
    Ok(coxeter_product(datum, &comps))
}

/// Coxeter element over a chosen set of type-A components only.
pub fn coxeter_element_on(datum: &RootDatum, components: &[usize]) -> Result<WeylElement, SubsystemError> {
    let comps = selected_components(datum, components)?;
    Ok(coxeter_product(datum, &comps))
}

/// The same element from the closed formula
/// `s(λ) = λ - Σ_i Σ_j Σ_{k ≥ j} <λ, α_{ik}^∨> α_{ij}`.
pub fn coxeter_closed_form(datum: &RootDatum, components: &[usize]) -> Result<WeylElement, SubsystemError> {
    let comps = selected_components(datum, components)?;
    let r = datum.rank();
    let mut m = IntMatrix::identity(r);
    for l in 0..r {
        // column l is s(e_l)
        for c in &comps {
            let simple = &c.simple;
            for j in 0..simple.len() {
                let coeff: i64 = simple[j..].iter().map(|&k| datum.coroot(k)[l]).sum();
                if coeff == 0 {
                    continue;
                }
                for (row, a) in datum.root(simple[j]).iter().enumerate() {
                    m[(row, l)] -= BigInt::from(coeff * a);
                }
            }
        }
    }
    Ok(WeylElement { matrix: m })
}

/// `X/(s-1)X` together with the elementary divisors of `(s-1)X` inside `ZΦ`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoxeterTorsion {
    pub quotient: FinAbGroup,
    #[serde(with = "crate::serde_int::vec")]
    pub divisors: Vec<BigInt>,
}

/// Image lattice `(w - 1)X` as generator rows (one per basis vector of `X`).
pub fn image_of_minus_one(w: &WeylElement) -> IntMatrix {
    let r = w.matrix.rows();
    w.matrix.sub(&IntMatrix::identity(r)).transpose()
}

pub fn coxeter_fixed_torsion(datum: &RootDatum) -> Result<CoxeterTorsion, SubsystemError> {
    let s = coxeter_element_type_a(datum)?;
    Ok(torsion_of(datum, &s))
}

pub fn coxeter_fixed_torsion_on(datum: &RootDatum, components: &[usize]) -> Result<CoxeterTorsion, SubsystemError> {
    let s = coxeter_element_on(datum, components)?;
    Ok(torsion_of(datum, &s))
}

pub fn torsion_of(datum: &RootDatum, w: &WeylElement) -> CoxeterTorsion {
    let image = image_of_minus_one(w);
    let quotient = intlin::quotient_group(datum.rank(), &image).expect("shapes agree");
    let divisors = intlin::relative_divisors_in(&image, &datum.root_lattice())
        .expect("(w-1)X lies in the root lattice");
    CoxeterTorsion { quotient, divisors }
}

/// Elementary divisors of `ZΦ^∨` inside `Y`.
pub fn coroot_divisors(datum: &RootDatum) -> Vec<BigInt> {
    let y = RowLattice::new(datum.rank(), &IntMatrix::identity(datum.rank())).expect("square");
    let coroots = datum.coroot_matrix(datum.simple_system());
    let mut d = intlin::relative_divisors_in(&coroots, &y).expect("Y contains every coroot");
    d.retain(|x| !x.is_zero());
    d
}
