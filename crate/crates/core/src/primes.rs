//! Bad, good, very good and pretty good primes.
//!
//! The production predicates use the classical highest-root criterion plus
//! two torsion checks. The `*_via_*` and `*_bruteforce` functions evaluate the
//! subset-quantified definitions directly and exist to cross-check them.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exec::Exec;
use crate::intlin::{FinAbGroup, Prime};
use crate::rootdatum::RootDatum;
use crate::subsystems::{closed_subsets, RootSubset};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PrimeError {
    #[error("{roots} roots exceed the exhaustive limit {limit}")]
    TooLarge { roots: usize, limit: usize },
}

/// Field characteristic: zero or a prime.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Characteristic {
    Zero,
    Prime(Prime),
}

impl Characteristic {
    pub fn new(p: u64) -> Result<Self, crate::intlin::IntLinError> {
        if p == 0 {
            Ok(Characteristic::Zero)
        } else {
            Prime::new(p).map(Characteristic::Prime)
        }
    }

    pub fn get(self) -> u64 {
        match self {
            Characteristic::Zero => 0,
            Characteristic::Prime(p) => p.get(),
        }
    }
}

impl fmt::Display for Characteristic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.get())
    }
}

impl From<Prime> for Characteristic {
    fn from(p: Prime) -> Self {
        Characteristic::Prime(p)
    }
}

/// Primes dividing some highest-root coefficient of some component.
pub fn bad_primes(datum: &RootDatum) -> BTreeSet<u64> {
    let mut out = BTreeSet::new();
    for comp in datum.components().expect("valid data have recognizable components") {
        for &m in &comp.highest_coefficients {
            out.extend(prime_factors(m as u64));
        }
    }
    out
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub fn is_bad(datum: &RootDatum, p: Prime) -> bool {
    bad_primes(datum).contains(&p.get())
}

pub fn is_good(datum: &RootDatum, p: Prime) -> bool {
    !is_bad(datum, p)
}

/// Good, and `p ∤ n+1` for every component of type `A_n`.
pub fn very_good(datum: &RootDatum, p: Prime) -> bool {
    is_good(datum, p)
        && datum
            .components()
            .expect("valid data have recognizable components")
            .iter()
            .all(|c| !c.cartan.is_type_a() || !(c.cartan.rank as u64 + 1).is_multiple_of(p.get()))
}

/// `X/ZΦ` has no p-torsion.
pub fn center_smooth(datum: &RootDatum, p: Prime) -> bool {
    datum.character_quotient(&datum.all_indices()).p_torsion_free(p)
}

/// `Y/ZΦ^∨` has no p-torsion.
pub fn dual_center_smooth(datum: &RootDatum, p: Prime) -> bool {
    datum.cocharacter_quotient(&datum.all_indices()).p_torsion_free(p)
}

/// Good for Φ, and both `X/ZΦ` and `Y/ZΦ^∨` free of p-torsion.
pub fn pretty_good(datum: &RootDatum, p: Prime) -> bool {
    is_good(datum, p) && center_smooth(datum, p) && dual_center_smooth(datum, p)
}

fn check_limit(datum: &RootDatum, limit: usize) -> Result<(), PrimeError> {
    if datum.num_roots() > limit {
        Err(PrimeError::TooLarge {
            roots: datum.num_roots(),
            limit,
        })
    } else {
        Ok(())
    }
}

/// `ZΦ/ZΦ'` is p-torsion-free for every `Φ' ⊆ Φ`. Subsets are taken up to
/// span closure, which does not change `ZΦ'`.
pub fn good_via_torsion(datum: &RootDatum, p: Prime, limit: usize, exec: Exec) -> Result<bool, PrimeError> {
    check_limit(datum, limit)?;
    let classes = closed_subsets(datum, exec);
    Ok(exec.all(classes, |s| datum.root_lattice_quotient(s.indices()).p_torsion_free(p)))
}

/// `Λ/ZΦ'` is p-torsion-free for every `Φ' ⊆ Φ`.
pub fn very_good_via_weights(datum: &RootDatum, p: Prime, limit: usize, exec: Exec) -> Result<bool, PrimeError> {
    check_limit(datum, limit)?;
    let classes = closed_subsets(datum, exec);
    Ok(exec.all(classes, |s| datum.weight_lattice_quotient(s.indices()).p_torsion_free(p)))
}

/// The definition itself: `X/ZΦ'` and `Y/ZΦ'^∨` free of p-torsion for every
/// `Φ' ⊆ Φ`.
///
/// The X-side group depends only on `ZΦ'`, so it is checked over the span
/// closures in `X`. The Y-side group depends only on `ZΦ'^∨`, which the
/// X-side closure does not preserve, so it is checked over the span closures
/// of coroot subsets in `Y`, that is, over the closures of the dual datum.
pub fn pretty_good_bruteforce(datum: &RootDatum, p: Prime, limit: usize, exec: Exec) -> Result<bool, PrimeError> {
    check_limit(datum, limit)?;
    let x_side = closed_subsets(datum, exec);
    if !exec.all(x_side, |s| datum.character_quotient(s.indices()).p_torsion_free(p)) {
        return Ok(false);
    }
    let dual = datum.dual();
    let y_side = closed_subsets(&dual, exec);
    Ok(exec.all(y_side, |s| dual.character_quotient(s.indices()).p_torsion_free(p)))
}

/// Largest `|Φ|` for which the literal `2^|Φ|` sweeps below are allowed.
pub const FULL_SWEEP_LIMIT: usize = 16;

fn all_subsets(n: usize) -> impl Iterator<Item = RootSubset> {
    (0u64..(1u64 << n)).map(move |mask| RootSubset::new((0..n).filter(|i| mask >> i & 1 == 1).collect()))
}

/// `good_via_torsion` without the closure reduction: every one of the
/// `2^|Φ|` subsets.
pub fn good_via_torsion_full(datum: &RootDatum, p: Prime, limit: usize) -> Result<bool, PrimeError> {
    check_limit(datum, limit.min(FULL_SWEEP_LIMIT))?;
    Ok(all_subsets(datum.num_roots()).all(|s| datum.root_lattice_quotient(s.indices()).p_torsion_free(p)))
}

/// `pretty_good_bruteforce` without the closure reduction.
pub fn pretty_good_full(datum: &RootDatum, p: Prime, limit: usize) -> Result<bool, PrimeError> {
    check_limit(datum, limit.min(FULL_SWEEP_LIMIT))?;
    Ok(all_subsets(datum.num_roots()).all(|s| {
        datum.character_quotient(s.indices()).p_torsion_free(p)
            && datum.cocharacter_quotient(s.indices()).p_torsion_free(p)
    }))
}

/// Every prime above `bound` is pretty good.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TorsionBound {
    pub bound: u64,
}

/// Largest highest-root coefficient or invariant factor of `X/ZΦ`, `Y/ZΦ^∨`
/// (at least 1). A prime above it is good and divides neither quotient.
pub fn failing_prime_bound(datum: &RootDatum) -> TorsionBound {
    let mut bound = 1u64;
    for comp in datum.components().expect("valid data have recognizable components") {
        for &m in &comp.highest_coefficients {
            bound = bound.max(m as u64);
        }
    }
    let all = datum.all_indices();
    let groups: [FinAbGroup; 2] = [datum.character_quotient(&all), datum.cocharacter_quotient(&all)];
    for g in &groups {
        for d in &g.torsion {
            bound = bound.max(d.to_u64().unwrap_or(u64::MAX));
        }
    }
    TorsionBound { bound }
}

/// Classification of one prime (or characteristic zero) for one datum.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeReport {
    pub p: u64,
    pub bad: bool,
    pub good: bool,
    pub very_good: bool,
    pub pretty_good: bool,
    pub center_smooth: bool,
    pub dual_center_smooth: bool,
}

impl PrimeReport {
    /// The implications `very good ⇒ pretty good ⇒ good`, `good = ¬bad`
    /// and `pretty good ⇒ both centers smooth`.
    pub fn is_consistent(&self) -> bool {
        self.good == !self.bad
            && (!self.very_good || self.pretty_good)
            && (!self.pretty_good || self.good)
            && (!self.pretty_good || (self.center_smooth && self.dual_center_smooth))
    }

    /// Whether every centralizer of a closed subgroup scheme is smooth.
    pub fn centralizers_smooth(&self) -> bool {
        self.pretty_good
    }

    pub fn verdict(&self) -> &'static str {
        if self.centralizers_smooth() {
            SMOOTH
        } else {
            NOT_SMOOTH
        }
    }
}

pub const SMOOTH: &str = "all centralizers smooth";
pub const NOT_SMOOTH: &str = "non-smooth centralizer exists";

pub fn report(datum: &RootDatum, p: Prime) -> PrimeReport {
    let bad = is_bad(datum, p);
    PrimeReport {
        p: p.get(),
        bad,
        good: !bad,
        very_good: very_good(datum, p),
        pretty_good: pretty_good(datum, p),
        center_smooth: center_smooth(datum, p),
        dual_center_smooth: dual_center_smooth(datum, p),
    }
}

/// Characteristic zero counts as pretty good.
pub fn report_char(datum: &RootDatum, c: Characteristic) -> PrimeReport {
    match c {
        Characteristic::Prime(p) => report(datum, p),
        Characteristic::Zero => PrimeReport {
            p: 0,
            bad: false,
            good: true,
            very_good: true,
            pretty_good: true,
            center_smooth: true,
            dual_center_smooth: true,
        },
    }
}

/// Reports for every prime up to `max(max_prime, failing_prime_bound)`,
/// ordered by prime.
pub fn reports_up_to(datum: &RootDatum, max_prime: u64, exec: Exec) -> Vec<PrimeReport> {
    let top = max_prime.max(failing_prime_bound(datum).bound);
    exec.map(crate::intlin::primes_up_to(top), |p| report(datum, p))
}

/// Torsion order helper used by reports: product of the p-primary factors.
pub fn p_torsion_order(g: &FinAbGroup, p: Prime) -> BigInt {
    g.p_primary(p).iter().product()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootdatum::preset;

    fn d(name: &str) -> RootDatum {
        preset(name).unwrap()
    }

    fn p(n: u64) -> Prime {
        Prime::new(n).unwrap()
    }

    const LIMIT: usize = 18;

    #[test]
    fn bad_prime_examples() {
        assert!(bad_primes(&d("GL(4)")).is_empty());
        assert!(bad_primes(&d("SC(A5)")).is_empty());
        assert_eq!(bad_primes(&d("SC(G2)")).into_iter().collect::<Vec<_>>(), vec![2, 3]);
        assert_eq!(bad_primes(&d("SC(E8)")).into_iter().collect::<Vec<_>>(), vec![2, 3, 5]);
        assert!(bad_primes(&d("Torus(2)")).is_empty());
    }

    #[test]
    fn good_via_torsion_examples() {
        for q in [2, 3, 5, 7] {
            assert!(good_via_torsion(&d("SC(A1)"), p(q), LIMIT, Exec::Sequential).unwrap());
            assert!(good_via_torsion(&d("Torus(2)"), p(q), LIMIT, Exec::Sequential).unwrap());
        }
        assert!(!good_via_torsion(&d("SC(G2)"), p(3), LIMIT, Exec::Sequential).unwrap());
        assert_eq!(
            good_via_torsion(&d("SC(D4)"), p(2), LIMIT, Exec::Sequential),
            Err(PrimeError::TooLarge { roots: 24, limit: 18 })
        );
    }

    #[test]
    fn very_good_examples() {
        assert!(!very_good(&d("GL(2)"), p(2)));
        assert!(very_good(&d("SC(G2)"), p(5)));
        assert!(very_good(&d("SC(A2)"), p(2)));
        assert!(!very_good(&d("SC(A2)"), p(3)));
    }

    #[test]
    fn pretty_good_examples() {
        assert!(pretty_good(&d("GL(2)"), p(2)));
        assert!(!pretty_good(&d("SC(A1)"), p(2)));
        assert!(pretty_good(&d("SC(A1)"), p(3)));
        assert!(pretty_good_bruteforce(&d("SC(A1)"), p(3), LIMIT, Exec::Sequential).unwrap());
        assert!(pretty_good_full(&d("SC(A1)"), p(3), LIMIT).unwrap());
    }

    #[test]
    fn pretty_good_bruteforce_examples() {
        assert!(pretty_good_bruteforce(&d("GL(2)"), p(2), LIMIT, Exec::Sequential).unwrap());
        assert!(!pretty_good_bruteforce(&d("AD(A1)"), p(2), LIMIT, Exec::Sequential).unwrap());
        assert!(!pretty_good_bruteforce(&d("Sum(SC(A1), GL(2))"), p(2), LIMIT, Exec::Sequential).unwrap());
    }

    #[test]
    fn coroot_side_needs_its_own_closures() {
        // In B2 = SO5 the short roots ±e1, ±e2 span X, so their X-closure is all
        // of Φ, but their coroots ±2e1, ±2e2 span an index-4 sublattice of Y
        // while ZΦ^∨ has index 2. The Y-side enumeration must see this.
        let b2 = d("AD(B2)");
        let dual = b2.dual();
        let y_classes = closed_subsets(&dual, Exec::Sequential);
        let worst = y_classes
            .iter()
            .map(|s| dual.character_quotient(s.indices()).torsion_order())
            .max()
            .unwrap();
        assert_eq!(worst, BigInt::from(4));
        assert_eq!(
            pretty_good_bruteforce(&b2, p(2), LIMIT, Exec::Sequential).unwrap(),
            pretty_good_full(&b2, p(2), LIMIT).unwrap()
        );
    }

    #[test]
    fn center_examples() {
        assert!(!center_smooth(&d("SC(A1)"), p(2)));
        for q in [2, 3, 5] {
            assert!(center_smooth(&d("GL(3)"), p(q)));
            assert!(center_smooth(&d("AD(E6)"), p(q)));
            assert!(center_smooth(&d("AD(B3)"), p(q)));
        }
    }

    #[test]
    fn bound_examples() {
        assert_eq!(failing_prime_bound(&d("Torus(3)")).bound, 1);
        assert_eq!(failing_prime_bound(&d("SC(A1)")).bound, 2);
        assert_eq!(failing_prime_bound(&d("SC(E8)")).bound, 6);
        assert_eq!(failing_prime_bound(&d("SC(A6)")).bound, 7);
    }

    #[test]
    fn report_examples() {
        let r = report(&d("GL(2)"), p(2));
        assert_eq!(
            r,
            PrimeReport {
                p: 2,
                bad: false,
                good: true,
                very_good: false,
                pretty_good: true,
                center_smooth: true,
                dual_center_smooth: true
            }
        );
        let r = report(&d("SC(A1)"), p(2));
        assert!(!r.pretty_good && !r.center_smooth);
        let r = report(&d("SC(G2)"), p(7));
        assert!(r.good && r.very_good && r.pretty_good && r.center_smooth && r.dual_center_smooth);
        let z = report_char(&d("SC(A1)"), Characteristic::Zero);
        assert!(z.pretty_good && z.is_consistent());
        assert_eq!(z.verdict(), SMOOTH);
    }

    #[test]
    fn report_json_has_seven_fields() {
        let v = serde_json::to_value(report(&d("GL(2)"), p(2))).unwrap();
        let keys: Vec<&String> = v.as_object().unwrap().keys().collect();
        assert_eq!(keys.len(), 7);
        for k in ["p", "bad", "good", "very_good", "pretty_good", "center_smooth", "dual_center_smooth"] {
            assert!(v.get(k).is_some(), "{k}");
        }
    }

    #[test]
    fn characteristic_parsing() {
        assert_eq!(Characteristic::new(0), Ok(Characteristic::Zero));
        assert!(Characteristic::new(4).is_err());
        assert_eq!(Characteristic::new(5).unwrap().get(), 5);
    }
}
