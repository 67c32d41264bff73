//! Exact lattice arithmetic for reduced root data.
//!
//! Given a root datum `(X, Φ, Y, Φ^∨)` and a prime `p`, the crate decides
//! whether `p` is bad, good, very good or pretty good, and produces explicit
//! torsion witnesses when it is not pretty good. Pretty good (or
//! characteristic zero) is exactly the condition under which every
//! scheme-theoretic centralizer in the corresponding reductive group is
//! smooth.

pub mod certificate;
pub mod exec;
pub mod intlin;
pub mod isogeny;
pub mod primes;
pub mod rootdatum;
pub mod samples;
pub mod selftest;
pub mod standardness;
pub mod subsystems;
mod serde_int;

pub use certificate::{Certificate, CertificateKind};
pub use exec::Exec;
pub use intlin::{FinAbGroup, IntMatrix, Prime, SmithForm};
pub use primes::{Characteristic, PrimeReport};
pub use rootdatum::{CartanComponent, CartanType, RootDatum};
