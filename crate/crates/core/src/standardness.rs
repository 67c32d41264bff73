//! The standardness verdict, the split of a datum into type-A, very good and
//! torus parts at a good prime, and the gluing check on the matrix `A`.

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::intlin::{self, IntMatrix, Prime};
use crate::primes::{self, Characteristic};
use crate::rootdatum::{CartanComponent, RootDatum};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StandardnessError {
    #[error("p = {0} is bad for this datum")]
    BadPrime(u64),
    #[error("A has {rows} rows but {exponents} exponents were given")]
    ExponentCount { rows: usize, exponents: usize },
    #[error("A is {rows}x{cols}; need at least as many columns as rows")]
    TooFewColumns { rows: usize, cols: usize },
    #[error("exponent at position {0} is not positive")]
    NonPositiveExponent(usize),
}

pub const STANDARD: &str = "essentially standard";
pub const NOT_STANDARD: &str = "not essentially standard";

/// Whether a reductive group with this datum is essentially standard in
/// the given characteristic. All four standardness notions agree with
/// "zero or pretty good", which is also the smooth-centralizer verdict.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub p: u64,
    pub essentially_standard: bool,
    pub verdict: String,
    pub centralizers: String,
}

pub fn classify(datum: &RootDatum, c: Characteristic) -> Verdict {
    let report = primes::report_char(datum, c);
    let standard = report.pretty_good;
    Verdict {
        p: c.get(),
        essentially_standard: standard,
        verdict: if standard { STANDARD } else { NOT_STANDARD }.to_string(),
        centralizers: report.verdict().to_string(),
    }
}

/// Components split by behaviour at a good prime `p`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Decomposition {
    pub p: u64,
    /// `rank X - rank ZΦ`.
    pub torus_rank: usize,
    /// Ranks `m` of the type-`A_m` components with `p | m + 1`.
    pub a_blocks: Vec<usize>,
    /// Components for which `p` is very good.
    pub vg_blocks: Vec<CartanComponent>,
    /// `torus_rank >= a_blocks.len()`: the central torus is large enough to
    /// glue one circle onto each type-A block. When false, a torus factor
    /// of rank `torus_augmentation` has to be added first.
    pub witness_ok: bool,
    pub torus_augmentation: usize,
}

pub fn decompose(datum: &RootDatum, p: Prime) -> Result<Decomposition, StandardnessError> {
    if primes::is_bad(datum, p) {
        return Err(StandardnessError::BadPrime(p.get()));
    }
    let mut a_blocks = Vec::new();
    let mut vg_blocks = Vec::new();
    for c in datum.components().expect("valid data have recognizable components") {
        let t = c.cartan;
        if t.is_type_a() && (t.rank as u64 + 1).is_multiple_of(p.get()) {
            a_blocks.push(t.rank);
        } else {
            vg_blocks.push(t);
        }
    }
    let torus_rank = datum.rank() - datum.semisimple_rank();
    Ok(Decomposition {
        p: p.get(),
        torus_rank,
        witness_ok: torus_rank >= a_blocks.len(),
        torus_augmentation: a_blocks.len().saturating_sub(torus_rank),
        a_blocks,
        vg_blocks,
    })
}

/// Whether `Z^r → Z^n → ⊕ Z/p^{s_i}` (the map `A` followed by reduction)
/// is onto.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GluingCheck {
    #[serde(rename = "A")]
    pub a: IntMatrix,
    pub exponents: Vec<u32>,
    pub p: u64,
    #[serde(with = "crate::serde_int::vec")]
    pub divisors: Vec<BigInt>,
    pub surjective: bool,
}

/// Computes surjectivity three ways and asserts that they agree: every
/// elementary divisor of `A` prime to `p` (with `n` of them nonzero),
/// `rank(A mod p) = n`, and the direct index of the image in
/// `⊕ Z/p^{s_i}`.
pub fn check_gluing(a: &IntMatrix, exponents: &[u32], p: Prime) -> Result<GluingCheck, StandardnessError> {
    let (n, r) = (a.rows(), a.cols());
    if exponents.len() != n {
        return Err(StandardnessError::ExponentCount {
            rows: n,
            exponents: exponents.len(),
        });
    }
    if r < n {
        return Err(StandardnessError::TooFewColumns { rows: n, cols: r });
    }
    if let Some(k) = exponents.iter().position(|&s| s == 0) {
        return Err(StandardnessError::NonPositiveExponent(k));
    }

    let divisors = intlin::smith_normal_form(a).divisors;
    let by_divisors = divisors.iter().all(|d| !d.is_zero() && !p.divides(d));
    let by_rank = intlin::rank_mod_p(a, p) == n;
    let by_index = composite_is_onto(a, exponents, p);
    assert_eq!(by_divisors, by_rank, "elementary divisors and mod-p rank disagree");
    assert_eq!(by_divisors, by_index, "elementary divisors and image index disagree");
    Ok(GluingCheck {
        a: a.clone(),
        exponents: exponents.to_vec(),
        p: p.get(),
        divisors,
        surjective: by_divisors,
    })
}

/// The image of `Z^r` in `⊕ Z/p^{s_i}` is everything iff the lattice
/// spanned by the columns of `A` and the `p^{s_i} e_i` is all of `Z^n`.
fn composite_is_onto(a: &IntMatrix, exponents: &[u32], p: Prime) -> bool {
    let n = a.rows();
    let mut gens = a.transpose().row_vecs();
    for (i, &s) in exponents.iter().enumerate() {
        let mut v = vec![BigInt::zero(); n];
        v[i] = p.to_bigint().pow(s);
        gens.push(v);
    }
    let m = IntMatrix::from_rows(n, gens).expect("rows of length n");
    intlin::quotient_group(n, &m).expect("shapes agree").is_trivial()
}
