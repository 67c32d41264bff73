//! Property suites over the preset catalog and seeded random inputs. The
//! CLI `selftest` command runs them; the pretty-good classifier under test
//! is injectable so that a deliberately wrong one can be shown to fail.

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::certificate;
use crate::exec::Exec;
use crate::intlin::{self, IntMatrix, Prime};
use crate::isogeny::{adjoint_to_simply_connected, transfer_pretty_good};
use crate::primes::{self, Characteristic};
use crate::rootdatum::{preset, preset_catalog, CartanComponent, RootDatum, Series};
use crate::samples;
use crate::standardness::{check_gluing, classify};
use crate::subsystems;

pub type Classifier = fn(&RootDatum, Prime) -> bool;

#[derive(Clone, Copy, Debug)]
pub struct Config {
    /// Largest `|Φ|` for the subset-quantified oracles.
    pub exhaustive_limit: usize,
    pub exec: Exec,
    pub pretty_good: Classifier,
    pub seed: u64,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            exhaustive_limit: 12,
            exec: Exec::Parallel,
            pretty_good: primes::pretty_good,
            seed: 0x5eed,
        }
    }
}

impl Config {
    pub fn deep() -> Self {
        Config {
            exhaustive_limit: 18,
            ..Config::default()
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteResult {
    pub name: &'static str,
    pub passed: bool,
    pub checks: usize,
    /// First failure, if any.
    pub failure: Option<String>,
    #[serde(serialize_with = "as_millis")]
    pub elapsed: Duration,
}

fn as_millis<S: serde::Serializer>(d: &Duration, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_u128(d.as_millis())
}

/// Counts checks and keeps the first failure.
#[derive(Default)]
struct Tally {
    checks: usize,
    failure: Option<String>,
}

impl Tally {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok && self.failure.is_none() {
            self.failure = Some(what());
        }
    }

    fn merge(&mut self, results: Vec<(bool, String)>) {
        for (ok, what) in results {
            self.check(ok, || what);
        }
    }
}

const SMALL_PRIMES: [u64; 4] = [2, 3, 5, 7];

fn prime(p: u64) -> Prime {
    Prime::new(p).expect("table entries are prime")
}

fn catalog(max_rank: usize) -> Vec<(String, RootDatum)> {
    preset_catalog(max_rank)
        .into_iter()
        .map(|n| {
            let d = preset(&n).expect("catalog presets parse");
            (n, d)
        })
        .collect()
}

fn small_catalog(limit: usize) -> Vec<(String, RootDatum)> {
    catalog(3).into_iter().filter(|(_, d)| d.num_roots() <= limit).collect()
}

type Suite = fn(&Config, &mut Tally);

pub fn run(cfg: &Config) -> Vec<SuiteResult> {
    let suites: [(&'static str, Suite); 11] = [
        ("small-rank facts", facts),
        ("good: coefficients vs subset torsion", good_equivalence),
        ("very good: coefficients vs weight quotients", very_good_equivalence),
        ("pretty good: fast criterion vs definition", pretty_good_equivalence),
        ("implications, products and duality", implications),
        ("crossed-out node torsion", cross_out_law),
        ("Coxeter torsion identity", coxeter_identity),
        ("gluing: divisors vs rank mod p", gluing),
        ("Smith normal form soundness", smith),
        ("isogeny transfer", isogeny_transfer),
        ("classification and certificates", classification),
    ];
    suites
        .iter()
        .map(|(name, f)| {
            let start = Instant::now();
            let mut t = Tally::default();
            f(cfg, &mut t);
            SuiteResult {
                name,
                passed: t.failure.is_none(),
                checks: t.checks,
                failure: t.failure,
                elapsed: start.elapsed(),
            }
        })
        .collect()
}

fn facts(cfg: &Config, t: &mut Tally) {
    let gl2 = preset("GL(2)").expect("preset");
    let sl2 = preset("SC(A1)").expect("preset");
    let pgl2 = preset("AD(A1)").expect("preset");
    let two = prime(2);
    t.check((cfg.pretty_good)(&gl2, two), || "2 should be pretty good for GL2".into());
    t.check(!primes::very_good(&gl2, two), || "2 should not be very good for GL2".into());
    for p in SMALL_PRIMES.map(prime) {
        t.check(primes::is_good(&sl2, p) && primes::is_good(&pgl2, p), || {
            format!("{p} should be good for SL2 and PGL2")
        });
    }
    t.check(!(cfg.pretty_good)(&sl2, two), || "2 should not be pretty good for SL2".into());
    t.check(!(cfg.pretty_good)(&pgl2, two), || "2 should not be pretty good for PGL2".into());
}

fn each_small(cfg: &Config, t: &mut Tally, f: impl Fn(&str, &RootDatum, Prime) -> (bool, String) + Sync + Send) {
    let jobs: Vec<(String, RootDatum, Prime)> = small_catalog(cfg.exhaustive_limit)
        .into_iter()
        .flat_map(|(n, d)| SMALL_PRIMES.map(move |p| (n.clone(), d.clone(), prime(p))))
        .collect();
    t.merge(cfg.exec.map(jobs, |(n, d, p)| f(&n, &d, p)));
}

fn good_equivalence(cfg: &Config, t: &mut Tally) {
    let limit = cfg.exhaustive_limit;
    each_small(cfg, t, |n, d, p| {
        let brute = primes::good_via_torsion(d, p, limit, Exec::Sequential).expect("within limit");
        (primes::is_good(d, p) == brute, format!("{n} at {p}"))
    });
}

fn very_good_equivalence(cfg: &Config, t: &mut Tally) {
    let limit = cfg.exhaustive_limit;
    each_small(cfg, t, |n, d, p| {
        let brute = primes::very_good_via_weights(d, p, limit, Exec::Sequential).expect("within limit");
        (primes::very_good(d, p) == brute, format!("{n} at {p}"))
    });
}

fn pretty_good_equivalence(cfg: &Config, t: &mut Tally) {
    let limit = cfg.exhaustive_limit;
    let classifier = cfg.pretty_good;
    each_small(cfg, t, |n, d, p| {
        let brute = primes::pretty_good_bruteforce(d, p, limit, Exec::Sequential).expect("within limit");
        let mut ok = classifier(d, p) == brute;
        if d.num_roots() <= 12 {
            ok &= primes::pretty_good_full(d, p, limit).expect("within limit") == brute;
        }
        (ok, format!("{n} at {p}"))
    });
}

fn implications(cfg: &Config, t: &mut Tally) {
    let data = catalog(8);
    let classifier = cfg.pretty_good;
    let jobs: Vec<(String, RootDatum, Prime)> = data
        .iter()
        .flat_map(|(n, d)| [2, 3, 5, 7, 11].map(|p| (n.clone(), d.clone(), prime(p))))
        .collect();
    t.merge(cfg.exec.map(jobs, |(n, d, p)| {
        let r = primes::report(&d, p);
        let pg = classifier(&d, p);
        let mut ok = r.is_consistent() && pg == r.pretty_good;
        if d.is_semisimple() {
            ok &= pg == r.very_good;
        }
        ok &= pg == classifier(&d.dual(), p);
        (ok, format!("{n} at {p}"))
    }));

    // products of catalog pairs, chosen deterministically
    let small: Vec<&(String, RootDatum)> = data.iter().filter(|(_, d)| d.rank() <= 4).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let pairs: Vec<(usize, usize)> = (0..60)
        .map(|_| {
            use rand::Rng;
            (rng.gen_range(0..small.len()), rng.gen_range(0..small.len()))
        })
        .collect();
    t.merge(cfg.exec.map(pairs, |(i, j)| {
        let (a, b) = (&small[i].1, &small[j].1);
        let sum = a.direct_sum(b);
        let ok = SMALL_PRIMES
            .map(prime)
            .iter()
            .all(|&p| classifier(&sum, p) == (classifier(a, p) && classifier(b, p)));
        (ok, format!("{} + {}", small[i].0, small[j].0))
    }));
}

/// Data of types B, C, D4, G2, F4, E: every bad prime and every node whose
/// coefficient it divides.
fn cross_out_law(cfg: &Config, t: &mut Tally) {
    let types = ["B2", "B3", "B4", "C2", "C3", "C4", "D4", "G2", "F4", "E6", "E7", "E8"];
    let jobs: Vec<String> = types
        .iter()
        .flat_map(|ty| [format!("SC({ty})"), format!("AD({ty})")])
        .collect();
    t.merge(
        cfg.exec
            .map(jobs, |name| {
                let d = preset(&name).expect("preset");
                let comp = &d.components().expect("components")[0];
                let mut out = Vec::new();
                for &p in &primes::bad_primes(&d) {
                    let p = prime(p);
                    for (node, &m) in comp.highest_coefficients.iter().enumerate() {
                        if m % p.get() as i64 != 0 {
                            continue;
                        }
                        let sub = subsystems::cross_out_node(&d, 0, node).expect("node in range");
                        let q = d.root_lattice_quotient(sub.indices());
                        let expected = intlin::p_part(&BigInt::from(m), p);
                        let got = q.p_primary(p);
                        out.push((got == vec![expected], format!("{name} node {node} at {p}: {got:?}")));
                    }
                }
                out
            })
            .into_iter()
            .flatten()
            .collect(),
    );
}

fn coxeter_identity(cfg: &Config, t: &mut Tally) {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0xc0);
    let data: Vec<RootDatum> = (0..100).map(|_| samples::random_type_a_datum(&mut rng, 6)).collect();
    t.merge(cfg.exec.map(data, |d| {
        let s = subsystems::coxeter_element_type_a(&d).expect("type A");
        let all: Vec<usize> = (0..d.components().expect("components").len()).collect();
        let closed = subsystems::coxeter_closed_form(&d, &all).expect("type A");
        let mut lhs = subsystems::torsion_of(&d, &s).divisors;
        lhs.retain(|x| !x.is_zero());
        let rhs = subsystems::coroot_divisors(&d);
        (lhs == rhs && s == closed, format!("{d:?}"))
    }));
}

fn gluing(cfg: &Config, t: &mut Tally) {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x91);
    for _ in 0..200 {
        let (a, exps, p) = samples::random_gluing_instance(&mut rng);
        let g = check_gluing(&a, &exps, p).expect("well-formed instance");
        let by_rank = intlin::rank_mod_p(&a, p) == a.rows();
        t.check(g.surjective == by_rank, || format!("{a} at {p}"));
    }
}

fn smith(cfg: &Config, t: &mut Tally) {
    use rand::Rng;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x5f);
    for _ in 0..200 {
        let (m, n) = (rng.gen_range(1..=8), rng.gen_range(1..=8));
        let a = samples::random_matrix(&mut rng, m, n, 9);
        let s = intlin::smith_normal_form(&a);
        let d = s.u.mul(&a).and_then(|x| x.mul(&s.v)).expect("shapes");
        let unimodular = |x: &IntMatrix| x.determinant().abs().is_one();
        let chain = s.divisors.windows(2).all(|w| {
            if w[0].is_zero() {
                w[1].is_zero()
            } else {
                (&w[1] % &w[0]).is_zero()
            }
        });
        let ok = d == s.diagonal_matrix()
            && unimodular(&s.u)
            && unimodular(&s.v)
            && chain
            && s.divisors.iter().all(|x| !x.is_negative());
        t.check(ok, || format!("{a}"));
    }
}

fn isogeny_transfer(_cfg: &Config, t: &mut Tally) {
    for n in 1..=6 {
        let i = adjoint_to_simply_connected(CartanComponent { series: Series::A, rank: n });
        for p in SMALL_PRIMES.map(prime) {
            match transfer_pretty_good(&i, p) {
                Ok(tr) => t.check(tr.applies == !(n as u64 + 1).is_multiple_of(p.get()), || format!("A{n} at {p}")),
                Err(e) => t.check(false, || format!("A{n} at {p}: {e}")),
            }
        }
    }
}

fn classification(cfg: &Config, t: &mut Tally) {
    let classifier = cfg.pretty_good;
    let jobs: Vec<(String, RootDatum, Prime)> = catalog(8)
        .into_iter()
        .flat_map(|(n, d)| intlin::primes_up_to(30).into_iter().map(move |p| (n.clone(), d.clone(), p)))
        .collect();
    t.merge(cfg.exec.map(jobs, |(n, d, p)| {
        let verdict = classify(&d, Characteristic::Prime(p)).essentially_standard;
        let pg = classifier(&d, p);
        let cert = match certificate::emit(&d, p) {
            Ok(c) => c,
            Err(e) => return (false, format!("{n} at {p}: {e}")),
        };
        let json = serde_json::to_string(&cert).expect("certificates serialize");
        let back: Result<certificate::Certificate, _> = serde_json::from_str(&json);
        let ok = match back {
            Ok(b) => b == cert && b.verify().is_ok() && b.proves_pretty_good() == pg,
            Err(_) => false,
        };
        (ok && verdict == pg, format!("{n} at {p}"))
    }));
}

pub fn all_passed(results: &[SuiteResult]) -> bool {
    results.iter().all(|r| r.passed)
}
