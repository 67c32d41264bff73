//! Machine-checkable evidence for the pretty-good verdict at a prime.
//!
//! A certificate either proves `p` pretty good (the torsion data of the fast
//! criterion) or exhibits `p`-torsion that a smooth-centralizer group could
//! not have: in the center, in `X/ZΦ'` for a crossed-out subsystem, or in
//! `X/(s-1)X` for a Coxeter element `s` of the type-A part.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::intlin::{FinAbGroup, IntMatrix, Prime};
use crate::primes;
use crate::rootdatum::RootDatum;
use crate::subsystems::{self, RootSubset, SubsystemError, WeylElement};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CertificateError {
    /// No branch produced evidence. Every datum and prime falls into one of
    /// the branches, so this signals a defect.
    #[error("no certificate branch applies at p = {p}")]
    ClassificationGap { p: u64 },
    #[error("certificate does not verify: {0}")]
    Rejected(String),
    #[error(transparent)]
    Subsystem(#[from] SubsystemError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CertificateKind {
    PrettyGoodProof,
    CenterTorsion,
    BadPrimeSubsystem,
    CoxeterTorsion,
}

/// `p` is good and both `X/ZΦ`, `Y/ZΦ^∨` are free of p-torsion.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrettyGoodProof {
    /// Highest-root coefficients, one list per component.
    pub highest_coefficients: Vec<Vec<i64>>,
    pub character_quotient: FinAbGroup,
    pub cocharacter_quotient: FinAbGroup,
}

/// `X/ZΦ` has p-torsion, so the center is not smooth.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CenterTorsion {
    pub character_quotient: FinAbGroup,
}

/// Crossing out a node with p-divisible coefficient gives `Φ'` with
/// p-torsion in `ZΦ/ZΦ'` and hence in `X/ZΦ'`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BadPrimeSubsystem {
    pub component: usize,
    pub node: usize,
    pub coefficient: i64,
    pub subsystem: RootSubset,
    pub root_quotient: FinAbGroup,
    pub character_quotient: FinAbGroup,
}

/// `X/(s-1)X` has p-torsion for the Coxeter element `s` of the listed
/// type-A components. When `dual` is set, everything refers to the dual
/// datum.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoxeterTorsion {
    pub dual: bool,
    pub components: Vec<usize>,
    pub weyl_element: WeylElement,
    pub quotient: FinAbGroup,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "payload", rename_all = "kebab-case")]
pub enum Evidence {
    PrettyGoodProof(PrettyGoodProof),
    CenterTorsion(CenterTorsion),
    BadPrimeSubsystem(BadPrimeSubsystem),
    CoxeterTorsion(CoxeterTorsion),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    #[serde(flatten)]
    pub evidence: Evidence,
    pub datum: RootDatum,
    pub p: Prime,
}

impl Certificate {
    pub fn kind(&self) -> CertificateKind {
        match self.evidence {
            Evidence::PrettyGoodProof(_) => CertificateKind::PrettyGoodProof,
            Evidence::CenterTorsion(_) => CertificateKind::CenterTorsion,
            Evidence::BadPrimeSubsystem(_) => CertificateKind::BadPrimeSubsystem,
            Evidence::CoxeterTorsion(_) => CertificateKind::CoxeterTorsion,
        }
    }

    /// The verdict this certificate proves.
    pub fn proves_pretty_good(&self) -> bool {
        self.kind() == CertificateKind::PrettyGoodProof
    }

    /// Recomputes every claim from the embedded datum.
    pub fn verify(&self) -> Result<(), CertificateError> {
        let d = &self.datum;
        let p = self.p;
        match &self.evidence {
            Evidence::PrettyGoodProof(e) => {
                ensure(e.highest_coefficients == highest_coefficients(d), "highest-root coefficients differ")?;
                ensure(
                    e.highest_coefficients.iter().flatten().all(|&m| m % p.get() as i64 != 0),
                    "p divides a highest-root coefficient",
                )?;
                ensure(e.character_quotient == whole_character_quotient(d), "X/ZΦ differs")?;
                ensure(e.cocharacter_quotient == d.cocharacter_quotient(&d.all_indices()), "Y/ZΦ^∨ differs")?;
                ensure(
                    e.character_quotient.p_torsion_free(p) && e.cocharacter_quotient.p_torsion_free(p),
                    "a quotient has p-torsion",
                )
            }
            Evidence::CenterTorsion(e) => {
                ensure(e.character_quotient == whole_character_quotient(d), "X/ZΦ differs")?;
                ensure(!e.character_quotient.p_torsion_free(p), "X/ZΦ has no p-torsion")
            }
            Evidence::BadPrimeSubsystem(e) => {
                e.subsystem.check(d)?;
                ensure(
                    e.root_quotient == d.root_lattice_quotient(e.subsystem.indices()),
                    "ZΦ/ZΦ' differs",
                )?;
                ensure(
                    e.character_quotient == d.character_quotient(e.subsystem.indices()),
                    "X/ZΦ' differs",
                )?;
                ensure(!e.character_quotient.p_torsion_free(p), "X/ZΦ' has no p-torsion")
            }
            Evidence::CoxeterTorsion(e) => {
                let on = if e.dual { d.dual() } else { d.clone() };
                let s = subsystems::coxeter_element_on(&on, &e.components)?;
                ensure(s == e.weyl_element, "matrix is not the Coxeter element of the listed components")?;
                ensure(s.root_permutation(&on).is_some(), "matrix does not permute Φ")?;
                let q = subsystems::torsion_of(&on, &s).quotient;
                ensure(q == e.quotient, "X/(s-1)X differs")?;
                ensure(!q.p_torsion_free(p), "X/(s-1)X has no p-torsion")
            }
        }
    }
}

fn ensure(ok: bool, what: &str) -> Result<(), CertificateError> {
    if ok {
        Ok(())
    } else {
        Err(CertificateError::Rejected(what.to_string()))
    }
}

fn highest_coefficients(d: &RootDatum) -> Vec<Vec<i64>> {
    d.components()
        .expect("valid data have recognizable components")
        .iter()
        .map(|c| c.highest_coefficients.clone())
        .collect()
}

fn whole_character_quotient(d: &RootDatum) -> FinAbGroup {
    d.character_quotient(&d.all_indices())
}

/// Builds a certificate, trying in order: pretty-good proof, center
/// torsion, a crossed-out subsystem at a bad prime, then a Coxeter element
/// of the p-failing type-A components of `R`, then of `dual(R)`, then of all
/// type-A components of either.
pub fn emit(datum: &RootDatum, p: Prime) -> Result<Certificate, CertificateError> {
    let wrap = |evidence| Certificate {
        evidence,
        datum: datum.clone(),
        p,
    };
    if primes::pretty_good(datum, p) {
        return Ok(wrap(Evidence::PrettyGoodProof(PrettyGoodProof {
            highest_coefficients: highest_coefficients(datum),
            character_quotient: whole_character_quotient(datum),
            cocharacter_quotient: datum.cocharacter_quotient(&datum.all_indices()),
        })));
    }
    let center = whole_character_quotient(datum);
    if !center.p_torsion_free(p) {
        return Ok(wrap(Evidence::CenterTorsion(CenterTorsion {
            character_quotient: center,
        })));
    }
    if let Some(c) = subsystems::cross_out_for_prime(datum, p)? {
        let character_quotient = datum.character_quotient(c.subsystem.indices());
        if !character_quotient.p_torsion_free(p) {
            return Ok(wrap(Evidence::BadPrimeSubsystem(BadPrimeSubsystem {
                component: c.component,
                node: c.node,
                coefficient: c.coefficient,
                root_quotient: datum.root_lattice_quotient(c.subsystem.indices()),
                character_quotient,
                subsystem: c.subsystem,
            })));
        }
    }
    let dual = datum.dual();
    let attempts: [(&RootDatum, bool, ComponentPicker); 4] = [
        (datum, false, failing_type_a),
        (&dual, true, failing_type_a),
        (datum, false, all_type_a),
        (&dual, true, all_type_a),
    ];
    for (on, is_dual, pick) in attempts {
        let components = pick(on, p);
        if components.is_empty() {
            continue;
        }
        let s = subsystems::coxeter_element_on(on, &components)?;
        let quotient = subsystems::torsion_of(on, &s).quotient;
        if !quotient.p_torsion_free(p) {
            return Ok(wrap(Evidence::CoxeterTorsion(CoxeterTorsion {
                dual: is_dual,
                components,
                weyl_element: s,
                quotient,
            })));
        }
    }
    Err(CertificateError::ClassificationGap { p: p.get() })
}

type ComponentPicker = fn(&RootDatum, Prime) -> Vec<usize>;

/// Type-`A_m` components with `p | m + 1`.
fn failing_type_a(d: &RootDatum, p: Prime) -> Vec<usize> {
    type_a_where(d, |m| (m as u64 + 1).is_multiple_of(p.get()))
}

fn all_type_a(d: &RootDatum, _p: Prime) -> Vec<usize> {
    type_a_where(d, |_| true)
}

fn type_a_where(d: &RootDatum, keep: impl Fn(usize) -> bool) -> Vec<usize> {
    d.components()
        .expect("valid data have recognizable components")
        .iter()
        .enumerate()
        .filter(|(_, c)| c.cartan.is_type_a() && keep(c.cartan.rank))
        .map(|(k, _)| k)
        .collect()
}

/// The p-primary part of the group a negative certificate exhibits.
pub fn witness_torsion(cert: &Certificate) -> Vec<BigInt> {
    let g = match &cert.evidence {
        Evidence::PrettyGoodProof(_) => return Vec::new(),
        Evidence::CenterTorsion(e) => &e.character_quotient,
        Evidence::BadPrimeSubsystem(e) => &e.character_quotient,
        Evidence::CoxeterTorsion(e) => &e.quotient,
    };
    g.p_primary(cert.p)
}

/// Matrix form of a Coxeter payload, for display.
pub fn weyl_matrix(cert: &Certificate) -> Option<&IntMatrix> {
    match &cert.evidence {
        Evidence::CoxeterTorsion(e) => Some(&e.weyl_element.matrix),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootdatum::preset;

    fn d(s: &str) -> RootDatum {
        preset(s).unwrap()
    }

    fn p(n: u64) -> Prime {
        Prime::new(n).unwrap()
    }

    fn round_trip(c: &Certificate) -> Certificate {
        serde_json::from_str(&serde_json::to_string(c).unwrap()).unwrap()
    }

    #[test]
    fn center_branch_fires_first_for_sl2() {
        let c = emit(&d("SC(A1)"), p(2)).unwrap();
        assert_eq!(c.kind(), CertificateKind::CenterTorsion);
        assert_eq!(witness_torsion(&c), vec![BigInt::from(2)]);
        c.verify().unwrap();
    }

    #[test]
    fn bad_prime_branch_for_g2() {
        let c = emit(&d("SC(G2)"), p(2)).unwrap();
        assert_eq!(c.kind(), CertificateKind::BadPrimeSubsystem);
        match &c.evidence {
            Evidence::BadPrimeSubsystem(e) => {
                assert_eq!(e.coefficient, 2);
                assert_eq!(e.root_quotient.to_string(), "Z/2");
            }
            _ => unreachable!(),
        }
        c.verify().unwrap();
        round_trip(&c).verify().unwrap();
    }

    #[test]
    fn pretty_good_proof_for_gl3() {
        let c = emit(&d("GL(3)"), p(5)).unwrap();
        assert_eq!(c.kind(), CertificateKind::PrettyGoodProof);
        assert!(c.proves_pretty_good());
        c.verify().unwrap();
    }

    #[test]
    fn coxeter_branch_for_pgl2() {
        // X/ZΦ = 0 and 2 is good, but Y/ZΦ^∨ = Z/2.
        let c = emit(&d("AD(A1)"), p(2)).unwrap();
        assert_eq!(c.kind(), CertificateKind::CoxeterTorsion);
        assert_eq!(witness_torsion(&c), vec![BigInt::from(2)]);
        assert!(weyl_matrix(&c).is_some());
        c.verify().unwrap();
        round_trip(&c).verify().unwrap();
    }

    #[test]
    fn json_shape() {
        let c = emit(&d("SC(A1)"), p(2)).unwrap();
        let v = serde_json::to_value(&c).unwrap();
        assert_eq!(v["kind"], "center-torsion");
        assert_eq!(v["p"], 2);
        assert!(v.get("payload").is_some() && v.get("datum").is_some());
        assert_eq!(round_trip(&c), c);
    }

    #[test]
    fn tampered_certificates_are_rejected() {
        let mut c = emit(&d("AD(A1)"), p(2)).unwrap();
        c.p = p(3);
        assert!(matches!(c.verify(), Err(CertificateError::Rejected(_))));

        let mut c = emit(&d("SC(G2)"), p(2)).unwrap();
        if let Evidence::BadPrimeSubsystem(e) = &mut c.evidence {
            e.subsystem = RootSubset::new(vec![0, 6]);
        }
        assert!(c.verify().is_err());

        let mut c = emit(&d("SC(A1)"), p(3)).unwrap();
        c.datum = d("SC(A2)");
        assert!(c.verify().is_err());
    }
}
