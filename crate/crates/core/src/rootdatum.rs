//! Root data in fixed coordinates.
//!
//! A datum stores the rank `r` of `X` and `Y`, the roots as coordinate vectors
//! in a basis of `X`, and the coroots in the dual basis of `Y`, with root `i`
//! matched to coroot `i`. The pairing is the dot product.
//!
//! Cartan matrices follow `C[i][j] = <α_j, α_i^∨>`, with nodes numbered as in
//! Bourbaki's tables.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::intlin::{self, FinAbGroup, IntMatrix, RowLattice};

/// Coordinates larger than this are rejected by validation, which keeps every
/// pairing and reflection of a valid datum inside `i64`.
pub const MAX_COORDINATE: i64 = 1 << 24;
pub const MAX_RANK: usize = 64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DatumError {
    #[error("invalid root datum: {}", list_violations(.0))]
    Invalid(Vec<Violation>),
    #[error("cannot parse preset {name:?}: {reason}")]
    BadPreset { name: String, reason: String },
    #[error("unsupported Cartan type {0}")]
    UnsupportedType(String),
    #[error("component with simple roots {simple:?} matches no Cartan type")]
    NotARootSystem { simple: Vec<usize> },
    #[error("root index {0} out of range")]
    BadIndex(usize),
}

fn list_violations(v: &[Violation]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
}

/// One failed axiom, naming the offending root index where there is one.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "violation", rename_all = "kebab-case")]
pub enum Violation {
    CountMismatch { roots: usize, coroots: usize },
    WrongLength { index: usize, coroot: bool, len: usize },
    CoordinateTooLarge { index: usize, coroot: bool },
    RankTooLarge { rank: usize },
    PairingNotTwo { index: usize, pairing: i64 },
    RootsNotStable { index: usize },
    CorootsNotStable { index: usize },
    NotReduced { index: usize, half: usize },
    DuplicateRoot { index: usize, first: usize },
    NotNegationClosed { index: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::CountMismatch { roots, coroots } => {
                write!(f, "{roots} roots but {coroots} coroots")
            }
            Violation::WrongLength { index, coroot, len } => write!(
                f,
                "{} {index} has length {len}, not the rank",
                if *coroot { "coroot" } else { "root" }
            ),
            Violation::CoordinateTooLarge { index, coroot } => write!(
                f,
                "{} {index} has a coordinate beyond ±{MAX_COORDINATE}",
                if *coroot { "coroot" } else { "root" }
            ),
            Violation::RankTooLarge { rank } => write!(f, "rank {rank} exceeds {MAX_RANK}"),
            Violation::PairingNotTwo { index, pairing } => {
                write!(f, "pairing ≠ 2 at index {index} (got {pairing})")
            }
            Violation::RootsNotStable { index } => {
                write!(f, "reflection at index {index} does not permute the roots")
            }
            Violation::CorootsNotStable { index } => {
                write!(f, "reflection at index {index} does not permute the coroots")
            }
            Violation::NotReduced { index, half } => {
                write!(f, "not reduced: root {index} is twice root {half}")
            }
            Violation::DuplicateRoot { index, first } => {
                write!(f, "root {index} repeats root {first}")
            }
            Violation::NotNegationClosed { index } => {
                write!(f, "negative of root {index} is not a root")
            }
        }
    }
}

/// Unvalidated datum, the JSON exchange form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawDatum {
    pub rank: usize,
    pub roots: Vec<Vec<i64>>,
    pub coroots: Vec<Vec<i64>>,
}

pub fn pair(x: &[i64], y: &[i64]) -> i64 {
    let s: i128 = x.iter().zip(y).map(|(&a, &b)| a as i128 * b as i128).sum();
    s as i64
}

/// `x - <x, a_dual> a`, or `None` if a coordinate leaves `i64`.
fn reflect(x: &[i64], a: &[i64], a_dual: &[i64]) -> Option<Vec<i64>> {
    let c: i128 = x.iter().zip(a_dual).map(|(&u, &v)| u as i128 * v as i128).sum();
    x.iter()
        .zip(a)
        .map(|(&xi, &ai)| (xi as i128 - c * ai as i128).to_i64())
        .collect()
}

/// Checks every root datum axiom and returns all violations found.
pub fn validate(raw: &RawDatum) -> Result<(), Vec<Violation>> {
    let mut out = Vec::new();
    if raw.rank > MAX_RANK {
        out.push(Violation::RankTooLarge { rank: raw.rank });
    }
    if raw.roots.len() != raw.coroots.len() {
        out.push(Violation::CountMismatch {
            roots: raw.roots.len(),
            coroots: raw.coroots.len(),
        });
    }
    for (coroot, list) in [(false, &raw.roots), (true, &raw.coroots)] {
        for (index, v) in list.iter().enumerate() {
            if v.len() != raw.rank {
                out.push(Violation::WrongLength {
                    index,
                    coroot,
                    len: v.len(),
                });
            } else if v.iter().any(|x| x.abs() > MAX_COORDINATE) {
                out.push(Violation::CoordinateTooLarge { index, coroot });
            }
        }
    }
    if !out.is_empty() {
        return Err(out);
    }

    let roots = &raw.roots;
    let coroots = &raw.coroots;
    let root_pos: HashMap<&[i64], usize> = roots
        .iter()
        .enumerate()
        .rev()
        .map(|(i, r)| (r.as_slice(), i))
        .collect();
    let coroot_set: HashSet<&[i64]> = coroots.iter().map(Vec::as_slice).collect();

    for (i, r) in roots.iter().enumerate() {
        let first = root_pos[r.as_slice()];
        if first != i {
            out.push(Violation::DuplicateRoot { index: i, first });
        }
    }
    for i in 0..roots.len() {
        let p = pair(&roots[i], &coroots[i]);
        if p != 2 {
            out.push(Violation::PairingNotTwo {
                index: i,
                pairing: p,
            });
        }
    }
    for i in 0..roots.len() {
        if !roots.iter().all(|x| reflect(x, &roots[i], &coroots[i]).is_some_and(|v| root_pos.contains_key(v.as_slice()))) {
            out.push(Violation::RootsNotStable { index: i });
        }
        if !coroots.iter().all(|y| reflect(y, &coroots[i], &roots[i]).is_some_and(|v| coroot_set.contains(v.as_slice()))) {
            out.push(Violation::CorootsNotStable { index: i });
        }
    }
    for (i, r) in roots.iter().enumerate() {
        let neg: Vec<i64> = r.iter().map(|x| -x).collect();
        if !root_pos.contains_key(neg.as_slice()) {
            out.push(Violation::NotNegationClosed { index: i });
        }
        if r.iter().all(|x| x % 2 == 0) {
            let half: Vec<i64> = r.iter().map(|x| x / 2).collect();
            if let Some(&h) = root_pos.get(half.as_slice()) {
                out.push(Violation::NotReduced { index: i, half: h });
            }
        }
    }
    if out.is_empty() {
        Ok(())
    } else {
        Err(out)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Series {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl Series {
    fn parse(c: char) -> Option<Series> {
        Some(match c {
            'A' => Series::A,
            'B' => Series::B,
            'C' => Series::C,
            'D' => Series::D,
            'E' => Series::E,
            'F' => Series::F,
            'G' => Series::G,
            _ => return None,
        })
    }
}

/// An irreducible Cartan type such as `A3` or `E8`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CartanComponent {
    pub series: Series,
    pub rank: usize,
}

impl CartanComponent {
    pub fn new(series: Series, rank: usize) -> Result<Self, DatumError> {
        let ok = match series {
            Series::A => rank >= 1,
            Series::B | Series::C => rank >= 2,
            Series::D => rank >= 2,
            Series::E => (6..=8).contains(&rank),
            Series::F => rank == 4,
            Series::G => rank == 2,
        };
        if ok && rank <= MAX_RANK {
            Ok(CartanComponent { series, rank })
        } else {
            Err(DatumError::UnsupportedType(format!("{series:?}{rank}")))
        }
    }

    pub fn parse(s: &str) -> Result<Self, DatumError> {
        let s = s.trim();
        let mut chars = s.chars();
        let series = chars
            .next()
            .and_then(Series::parse)
            .ok_or_else(|| DatumError::UnsupportedType(s.to_string()))?;
        let rank: usize = chars
            .as_str()
            .parse()
            .map_err(|_| DatumError::UnsupportedType(s.to_string()))?;
        Self::new(series, rank)
    }

    pub fn is_type_a(&self) -> bool {
        self.series == Series::A
    }

    /// Catalog Cartan matrix in Bourbaki numbering, `C[i][j] = <α_j, α_i^∨>`.
    pub fn cartan_matrix(&self) -> Vec<Vec<i64>> {
        let n = self.rank;
        let mut c = vec![vec![0i64; n]; n];
        for (i, row) in c.iter_mut().enumerate() {
            row[i] = 2;
        }
        // (i, j, k): nodes joined by a bond of multiplicity k; when k > 1 node
        // i is the long one.
        let mut bonds: Vec<(usize, usize, i64)> = Vec::new();
        match self.series {
            Series::A => bonds.extend((1..n).map(|i| (i - 1, i, 1))),
            Series::B => {
                bonds.extend((1..n - 1).map(|i| (i - 1, i, 1)));
                bonds.push((n - 2, n - 1, 2));
            }
            Series::C => {
                bonds.extend((1..n - 1).map(|i| (i - 1, i, 1)));
                bonds.push((n - 1, n - 2, 2));
            }
            Series::D => {
                if n >= 3 {
                    bonds.extend((1..n - 2).map(|i| (i - 1, i, 1)));
                    bonds.push((n - 3, n - 2, 1));
                    bonds.push((n - 3, n - 1, 1));
                }
            }
            Series::E => {
                bonds.extend([(0, 2, 1), (2, 3, 1), (1, 3, 1)]);
                bonds.extend((4..n).map(|i| (i - 1, i, 1)));
            }
            Series::F => bonds.extend([(0, 1, 1), (1, 2, 2), (2, 3, 1)]),
            Series::G => bonds.push((1, 0, 3)),
        }
        for (long, short, k) in bonds {
            // <α_long, α_short^∨> = -k, <α_short, α_long^∨> = -1
            c[short][long] = -k;
            c[long][short] = -1;
        }
        c
    }
}

impl fmt::Display for CartanComponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}{}", self.series, self.rank)
    }
}

impl Serialize for CartanComponent {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for CartanComponent {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        CartanComponent::parse(&s).map_err(serde::de::Error::custom)
    }
}

/// Product of irreducible types.
#[derive(Clone, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CartanType {
    pub components: Vec<CartanComponent>,
}

impl CartanType {
    pub fn sorted(&self) -> Vec<CartanComponent> {
        let mut v = self.components.clone();
        v.sort();
        v
    }
}

impl fmt::Display for CartanType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.components.is_empty() {
            return write!(f, "T");
        }
        let parts: Vec<String> = self.components.iter().map(ToString::to_string).collect();
        write!(f, "{}", parts.join("x"))
    }
}

/// An irreducible component of Φ with its base in Bourbaki order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Component {
    pub cartan: CartanComponent,
    /// Every root index in the component, ascending.
    pub roots: Vec<usize>,
    /// Simple root indices, node `k` of the diagram at position `k`.
    pub simple: Vec<usize>,
    pub highest_root: usize,
    /// Coefficients of the highest root over `simple`.
    pub highest_coefficients: Vec<i64>,
}

#[derive(Debug)]
struct Structure {
    simple: Vec<usize>,
    /// Coefficients of each root over `simple`.
    coefficients: Vec<Vec<i64>>,
    components: Result<Vec<Component>, DatumError>,
}

/// A validated, reduced root datum. Immutable once built.
#[derive(Clone, Serialize)]
#[serde(into = "RawDatum")]
pub struct RootDatum {
    rank: usize,
    roots: Vec<Vec<i64>>,
    coroots: Vec<Vec<i64>>,
    #[serde(skip)]
    structure: OnceLock<std::sync::Arc<Structure>>,
}

impl From<RootDatum> for RawDatum {
    fn from(d: RootDatum) -> RawDatum {
        RawDatum {
            rank: d.rank,
            roots: d.roots,
            coroots: d.coroots,
        }
    }
}

impl TryFrom<RawDatum> for RootDatum {
    type Error = DatumError;

    fn try_from(raw: RawDatum) -> Result<Self, DatumError> {
        validate(&raw).map_err(DatumError::Invalid)?;
        Ok(RootDatum {
            rank: raw.rank,
            roots: raw.roots,
            coroots: raw.coroots,
            structure: OnceLock::new(),
        })
    }
}

impl<'de> Deserialize<'de> for RootDatum {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = RawDatum::deserialize(d)?;
        RootDatum::try_from(raw).map_err(serde::de::Error::custom)
    }
}

impl PartialEq for RootDatum {
    fn eq(&self, other: &Self) -> bool {
        self.rank == other.rank && self.roots == other.roots && self.coroots == other.coroots
    }
}

impl Eq for RootDatum {}

impl fmt::Debug for RootDatum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RootDatum")
            .field("rank", &self.rank)
            .field("roots", &self.roots)
            .field("coroots", &self.coroots)
            .finish()
    }
}

impl RootDatum {
    pub fn new(rank: usize, roots: Vec<Vec<i64>>, coroots: Vec<Vec<i64>>) -> Result<Self, DatumError> {
        RawDatum {
            rank,
            roots,
            coroots,
        }
        .try_into()
    }

    /// Parses a preset name or a JSON datum.
    pub fn parse(input: &str) -> Result<Self, DatumError> {
        let t = input.trim();
        if t.starts_with('{') {
            let raw: RawDatum = serde_json::from_str(t).map_err(|e| DatumError::BadPreset {
                name: input.to_string(),
                reason: e.to_string(),
            })?;
            raw.try_into()
        } else {
            preset(t)
        }
    }

    pub fn torus(rank: usize) -> Self {
        RootDatum {
            rank,
            roots: Vec::new(),
            coroots: Vec::new(),
            structure: OnceLock::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn num_roots(&self) -> usize {
        self.roots.len()
    }

    pub fn roots(&self) -> &[Vec<i64>] {
        &self.roots
    }

    pub fn coroots(&self) -> &[Vec<i64>] {
        &self.coroots
    }

    pub fn root(&self, i: usize) -> &[i64] {
        &self.roots[i]
    }

    pub fn coroot(&self, i: usize) -> &[i64] {
        &self.coroots[i]
    }

    /// `<α_i, α_j^∨>`
    pub fn pairing(&self, i: usize, j: usize) -> i64 {
        pair(&self.roots[i], &self.coroots[j])
    }

    pub fn root_index(&self, v: &[i64]) -> Option<usize> {
        self.roots.iter().position(|r| r == v)
    }

    pub fn coroot_index(&self, v: &[i64]) -> Option<usize> {
        self.coroots.iter().position(|r| r == v)
    }

    pub fn negative_of(&self, i: usize) -> usize {
        let neg: Vec<i64> = self.roots[i].iter().map(|x| -x).collect();
        self.root_index(&neg).expect("validated data is closed under negation")
    }

    /// Positive for the lexicographic functional: first nonzero coordinate > 0.
    ///
    /// This is the sign of `w·α` for `w = (N^{r-1}, …, N, 1)` with `N` larger
    /// than every coordinate magnitude, so it never vanishes on a root.
    pub fn is_positive(&self, i: usize) -> bool {
        self.roots[i].iter().find(|&&x| x != 0).is_some_and(|&x| x > 0)
    }

    pub fn dual(&self) -> RootDatum {
        RootDatum {
            rank: self.rank,
            roots: self.coroots.clone(),
            coroots: self.roots.clone(),
            structure: OnceLock::new(),
        }
    }

    pub fn direct_sum(&self, other: &RootDatum) -> RootDatum {
        let rank = self.rank + other.rank;
        let pad = |v: &[i64], left: usize| {
            let mut out = vec![0; rank];
            out[left..left + v.len()].copy_from_slice(v);
            out
        };
        let mut roots: Vec<Vec<i64>> = self.roots.iter().map(|r| pad(r, 0)).collect();
        roots.extend(other.roots.iter().map(|r| pad(r, self.rank)));
        let mut coroots: Vec<Vec<i64>> = self.coroots.iter().map(|r| pad(r, 0)).collect();
        coroots.extend(other.coroots.iter().map(|r| pad(r, self.rank)));
        RootDatum {
            rank,
            roots,
            coroots,
            structure: OnceLock::new(),
        }
    }

    pub fn root_matrix(&self, indices: &[usize]) -> IntMatrix {
        let rows: Vec<&Vec<i64>> = indices.iter().map(|&i| &self.roots[i]).collect();
        IntMatrix::from_i64_rows(self.rank, &rows).expect("roots have rank length")
    }

    pub fn coroot_matrix(&self, indices: &[usize]) -> IntMatrix {
        let rows: Vec<&Vec<i64>> = indices.iter().map(|&i| &self.coroots[i]).collect();
        IntMatrix::from_i64_rows(self.rank, &rows).expect("coroots have rank length")
    }

    pub fn all_indices(&self) -> Vec<usize> {
        (0..self.roots.len()).collect()
    }

    fn structure(&self) -> &Structure {
        self.structure
            .get_or_init(|| std::sync::Arc::new(compute_structure(self)))
    }

    /// Base of Φ for the lexicographic positivity: the positive roots that are
    /// not a sum of two positive roots. Indices ascending.
    pub fn simple_system(&self) -> &[usize] {
        &self.structure().simple
    }

    /// Coefficients of root `i` over [`Self::simple_system`].
    pub fn simple_coefficients(&self, i: usize) -> &[i64] {
        &self.structure().coefficients[i]
    }

    /// Rank of the root lattice `ZΦ`.
    pub fn semisimple_rank(&self) -> usize {
        self.structure().simple.len()
    }

    pub fn is_semisimple(&self) -> bool {
        self.semisimple_rank() == self.rank
    }

    /// Irreducible components, ordered by their smallest root index.
    pub fn components(&self) -> Result<&[Component], DatumError> {
        match &self.structure().components {
            Ok(c) => Ok(c),
            Err(e) => Err(e.clone()),
        }
    }

    pub fn cartan_type(&self) -> Result<CartanType, DatumError> {
        Ok(CartanType {
            components: self.components()?.iter().map(|c| c.cartan).collect(),
        })
    }

    /// Cartan matrix of a list of simple roots, `C[i][j] = <α_j, α_i^∨>`.
    pub fn cartan_matrix_of(&self, simple: &[usize]) -> Vec<Vec<i64>> {
        simple
            .iter()
            .map(|&i| simple.iter().map(|&j| self.pairing(j, i)).collect())
            .collect()
    }

    /// `X / ZΦ'` for the roots in `subset`.
    pub fn character_quotient(&self, subset: &[usize]) -> FinAbGroup {
        intlin::quotient_group(self.rank, &self.root_matrix(subset)).expect("shapes agree")
    }

    /// `Y / ZΦ'^∨` for the coroots of `subset`.
    pub fn cocharacter_quotient(&self, subset: &[usize]) -> FinAbGroup {
        intlin::quotient_group(self.rank, &self.coroot_matrix(subset)).expect("shapes agree")
    }

    /// `ZΦ / ZΦ'` as an abstract group.
    pub fn root_lattice_quotient(&self, subset: &[usize]) -> FinAbGroup {
        let lattice = self.root_lattice();
        let divisors = intlin::relative_divisors_in(&self.root_matrix(subset), &lattice)
            .expect("subsets of Φ lie in ZΦ");
        FinAbGroup::from_divisors(lattice.rank(), &divisors)
    }

    pub fn root_lattice(&self) -> RowLattice {
        RowLattice::new(self.rank, &self.root_matrix(self.simple_system())).expect("shapes agree")
    }

    pub fn coroot_lattice(&self) -> RowLattice {
        RowLattice::new(self.rank, &self.coroot_matrix(self.simple_system())).expect("shapes agree")
    }

    /// `Λ / ZΦ'` where `Λ` is the weight lattice of Φ.
    ///
    /// Pairing against the simple coroots identifies `Λ` with `Z^n`
    /// (`n = |Δ|`), carrying `ZΦ'` to the lattice spanned by the pairing
    /// vectors `(<β, α_j^∨>)_j` for `β ∈ Φ'`.
    pub fn weight_lattice_quotient(&self, subset: &[usize]) -> FinAbGroup {
        let simple = self.simple_system();
        let rows: Vec<Vec<i64>> = subset
            .iter()
            .map(|&b| simple.iter().map(|&j| self.pairing(b, j)).collect())
            .collect();
        let m = IntMatrix::from_i64_rows(simple.len(), &rows).expect("pairing rows have |Δ| entries");
        intlin::quotient_group(simple.len(), &m).expect("shapes agree")
    }

    /// Fundamental group `Λ / ZΦ`.
    pub fn fundamental_group(&self) -> FinAbGroup {
        self.weight_lattice_quotient(&self.all_indices())
    }
}

fn compute_structure(d: &RootDatum) -> Structure {
    let positive: Vec<usize> = (0..d.num_roots()).filter(|&i| d.is_positive(i)).collect();
    let pos_set: HashSet<&[i64]> = positive.iter().map(|&i| d.roots[i].as_slice()).collect();
    let simple: Vec<usize> = positive
        .iter()
        .copied()
        .filter(|&i| {
            !positive.iter().any(|&j| {
                let diff: Vec<i64> = d.roots[i].iter().zip(&d.roots[j]).map(|(a, b)| a - b).collect();
                pos_set.contains(diff.as_slice())
            })
        })
        .collect();

    let lattice = RowLattice::new(d.rank, &d.root_matrix(&simple)).expect("shapes agree");
    debug_assert_eq!(lattice.rank(), simple.len(), "simple roots are independent");
    let coefficients: Vec<Vec<i64>> = d
        .roots
        .iter()
        .map(|r| {
            lattice
                .express(&intlin::big_vec(r))
                .expect("every root is an integer combination of the base")
                .iter()
                .map(|c| c.to_i64().expect("root coefficients are small"))
                .collect()
        })
        .collect();

    let components = compute_components(d, &simple, &coefficients);
    Structure {
        simple,
        coefficients,
        components,
    }
}

fn compute_components(
    d: &RootDatum,
    simple: &[usize],
    coefficients: &[Vec<i64>],
) -> Result<Vec<Component>, DatumError> {
    let n = d.num_roots();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        let mut x = x;
        while p[x] != r {
            let next = p[x];
            p[x] = r;
            x = next;
        }
        r
    }
    for i in 0..n {
        for j in i + 1..n {
            if d.pairing(i, j) != 0 {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let mut groups: Vec<(usize, Vec<usize>)> = Vec::new();
    let mut slot: HashMap<usize, usize> = HashMap::new();
    for i in 0..n {
        let r = find(&mut parent, i);
        let k = *slot.entry(r).or_insert_with(|| {
            groups.push((r, Vec::new()));
            groups.len() - 1
        });
        groups[k].1.push(i);
    }

    let mut out = Vec::with_capacity(groups.len());
    for (_, roots) in groups {
        let members: HashSet<usize> = roots.iter().copied().collect();
        let local: Vec<usize> = simple.iter().copied().filter(|s| members.contains(s)).collect();
        let (cartan, ordered) = recognize(d, &local)?;
        let positions: Vec<usize> = ordered
            .iter()
            .map(|s| simple.iter().position(|x| x == s).expect("simple root"))
            .collect();
        let height = |i: usize| positions.iter().map(|&k| coefficients[i][k]).sum::<i64>();
        let highest_root = roots
            .iter()
            .copied()
            .max_by_key(|&i| (height(i), std::cmp::Reverse(i)))
            .expect("components are nonempty");
        let highest_coefficients = positions.iter().map(|&k| coefficients[highest_root][k]).collect();
        out.push(Component {
            cartan,
            roots,
            simple: ordered,
            highest_root,
            highest_coefficients,
        });
    }
    Ok(out)
}

/// Identifies the Cartan type of a connected base and orders it as in
/// Bourbaki. Works from the Dynkin graph (degrees, arm lengths, bond
/// multiplicities, which end is long) and then checks the reordered Cartan
/// matrix against the catalog entry.
fn recognize(d: &RootDatum, base: &[usize]) -> Result<(CartanComponent, Vec<usize>), DatumError> {
    let n = base.len();
    let fail = || DatumError::NotARootSystem {
        simple: base.to_vec(),
    };
    let c = d.cartan_matrix_of(base);
    let neighbours: Vec<Vec<usize>> = (0..n)
        .map(|i| (0..n).filter(|&j| j != i && c[i][j] != 0).collect())
        .collect();
    let bond = |i: usize, j: usize| c[i][j] * c[j][i];
    // node i shorter than node j across a bond
    let shorter = |i: usize, j: usize| c[i][j] < c[j][i];
    let edges: usize = neighbours.iter().map(Vec::len).sum::<usize>() / 2;
    if n == 0 || edges != n - 1 {
        return Err(fail());
    }
    let ends: Vec<usize> = (0..n).filter(|&i| neighbours[i].len() <= 1).collect();
    let walk = |start: usize| -> Vec<usize> {
        let mut path = vec![start];
        while let Some(next) = neighbours[*path.last().unwrap()].iter().copied().find(|x| !path.contains(x)) {
            path.push(next);
        }
        path
    };

    let multiple: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| neighbours[i].iter().map(move |&j| (i, j)))
        .filter(|&(i, j)| i < j && bond(i, j) > 1)
        .collect();
    let max_degree = neighbours.iter().map(Vec::len).max().unwrap_or(0);

    let (series, order): (Series, Vec<usize>) = if n == 1 {
        (Series::A, vec![0])
    } else if let Some(&(i, j)) = multiple.first() {
        if multiple.len() > 1 || max_degree > 2 {
            return Err(fail());
        }
        let (short, long) = if shorter(i, j) { (i, j) } else { (j, i) };
        match bond(i, j) {
            3 if n == 2 => (Series::G, vec![short, long]),
            2 if n == 2 => (Series::B, vec![long, short]),
            2 if n == 4 && neighbours[i].len() == 2 && neighbours[j].len() == 2 => {
                let before = neighbours[long].iter().copied().find(|&x| x != short).ok_or_else(fail)?;
                let after = neighbours[short].iter().copied().find(|&x| x != long).ok_or_else(fail)?;
                (Series::F, vec![before, long, short, after])
            }
            2 => {
                // double bond at the end of a path
                let (tail, inner) = if neighbours[short].len() == 1 {
                    (short, long)
                } else if neighbours[long].len() == 1 {
                    (long, short)
                } else {
                    return Err(fail());
                };
                let mut path = walk(tail);
                if path.len() != n || path[1] != inner {
                    return Err(fail());
                }
                path.reverse();
                let series = if tail == short { Series::B } else { Series::C };
                (series, path)
            }
            _ => return Err(fail()),
        }
    } else if max_degree <= 2 {
        let start = *ends.iter().min_by_key(|&&e| base[e]).ok_or_else(fail)?;
        let path = walk(start);
        if path.len() != n {
            return Err(fail());
        }
        (Series::A, path)
    } else {
        let branches: Vec<usize> = (0..n).filter(|&i| neighbours[i].len() == 3).collect();
        if branches.len() != 1 || max_degree != 3 {
            return Err(fail());
        }
        let b = branches[0];
        // arms as paths leading away from the branch node
        let mut arms: Vec<Vec<usize>> = neighbours[b]
            .iter()
            .map(|&start| {
                let mut arm = vec![start];
                let mut prev = b;
                let mut cur = start;
                while let Some(&next) = neighbours[cur].iter().find(|&&x| x != prev) {
                    arm.push(next);
                    prev = cur;
                    cur = next;
                }
                arm
            })
            .collect();
        arms.sort_by_key(|a| (a.len(), base[a[0]]));
        let lens: Vec<usize> = arms.iter().map(Vec::len).collect();
        match lens.as_slice() {
            [1, 1, _] => {
                let mut order: Vec<usize> = arms[2].iter().rev().copied().collect();
                order.push(b);
                order.push(arms[0][0]);
                order.push(arms[1][0]);
                (Series::D, order)
            }
            [1, 2, 2] | [1, 2, 3] | [1, 2, 4] => {
                let mut order = vec![arms[1][1], arms[0][0], arms[1][0], b];
                order.extend(arms[2].iter().copied());
                (Series::E, order)
            }
            _ => return Err(fail()),
        }
    };

    let cartan = CartanComponent::new(series, n).map_err(|_| fail())?;
    let reordered: Vec<Vec<i64>> = order
        .iter()
        .map(|&i| order.iter().map(|&j| c[i][j]).collect())
        .collect();
    if reordered != cartan.cartan_matrix() {
        return Err(fail());
    }
    Ok((cartan, order.iter().map(|&i| base[i]).collect()))
}

/// Root/coroot pairs generated from a Cartan matrix. `simple_roots[j]` and
/// `simple_coroots[i]` are coordinate vectors with
/// `<simple_roots[j], simple_coroots[i]> = C[i][j]`.
fn generate_from_base(
    simple_roots: &[Vec<i64>],
    simple_coroots: &[Vec<i64>],
) -> (Vec<Vec<i64>>, Vec<Vec<i64>>) {
    let n = simple_roots.len();
    // (root, coroot, coefficient vector over the base)
    let mut seen: HashMap<Vec<i64>, usize> = HashMap::new();
    let mut found: Vec<(Vec<i64>, Vec<i64>, Vec<i64>)> = Vec::new();
    let mut queue = VecDeque::new();
    for j in 0..n {
        let mut coef = vec![0; n];
        coef[j] = 1;
        let item = (simple_roots[j].clone(), simple_coroots[j].clone(), coef);
        seen.insert(item.0.clone(), found.len());
        found.push(item.clone());
        queue.push_back(item);
    }
    while let Some((root, coroot, coef)) = queue.pop_front() {
        for i in 0..n {
            let c = pair(&root, &simple_coroots[i]);
            let cd = pair(&simple_roots[i], &coroot);
            let r: Vec<i64> = root.iter().zip(&simple_roots[i]).map(|(x, a)| x - c * a).collect();
            if seen.contains_key(&r) {
                continue;
            }
            let cr: Vec<i64> = coroot.iter().zip(&simple_coroots[i]).map(|(y, a)| y - cd * a).collect();
            let mut cf = coef.clone();
            cf[i] -= c;
            seen.insert(r.clone(), found.len());
            found.push((r.clone(), cr.clone(), cf.clone()));
            queue.push_back((r, cr, cf));
        }
    }
    let mut positives: Vec<&(Vec<i64>, Vec<i64>, Vec<i64>)> =
        found.iter().filter(|(_, _, cf)| cf.iter().all(|&x| x >= 0)).collect();
    positives.sort_by(|a, b| {
        let ha: i64 = a.2.iter().sum();
        let hb: i64 = b.2.iter().sum();
        ha.cmp(&hb).then_with(|| b.2.cmp(&a.2))
    });
    let mut roots: Vec<Vec<i64>> = positives.iter().map(|p| p.0.clone()).collect();
    let mut coroots: Vec<Vec<i64>> = positives.iter().map(|p| p.1.clone()).collect();
    let negate = |v: &Vec<i64>| v.iter().map(|x| -x).collect::<Vec<i64>>();
    roots.extend(positives.iter().map(|p| negate(&p.0)));
    coroots.extend(positives.iter().map(|p| negate(&p.1)));
    (roots, coroots)
}

/// Simply connected datum of an irreducible type: simple coroots are the
/// standard basis of `Y`, so `X` is the weight lattice.
pub fn simply_connected(t: CartanComponent) -> RootDatum {
    let c = t.cartan_matrix();
    let n = t.rank;
    let simple_roots: Vec<Vec<i64>> = (0..n).map(|j| (0..n).map(|i| c[i][j]).collect()).collect();
    let simple_coroots: Vec<Vec<i64>> = (0..n).map(|i| unit(n, i)).collect();
    let (roots, coroots) = generate_from_base(&simple_roots, &simple_coroots);
    RootDatum::new(n, roots, coroots).expect("catalog data satisfies the axioms")
}

/// Adjoint datum: simple roots are the standard basis of `X`.
pub fn adjoint(t: CartanComponent) -> RootDatum {
    let c = t.cartan_matrix();
    let n = t.rank;
    let simple_roots: Vec<Vec<i64>> = (0..n).map(|j| unit(n, j)).collect();
    let simple_coroots: Vec<Vec<i64>> = c.clone();
    let (roots, coroots) = generate_from_base(&simple_roots, &simple_coroots);
    RootDatum::new(n, roots, coroots).expect("catalog data satisfies the axioms")
}

/// `GL_n`: roots and coroots `e_i - e_j`.
pub fn general_linear(n: usize) -> RootDatum {
    let mut pos: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    pos.sort_by_key(|&(i, j)| (j - i, i));
    let diff = |i: usize, j: usize| {
        let mut v = vec![0i64; n];
        v[i] = 1;
        v[j] = -1;
        v
    };
    let mut roots: Vec<Vec<i64>> = pos.iter().map(|&(i, j)| diff(i, j)).collect();
    roots.extend(pos.iter().map(|&(i, j)| diff(j, i)));
    RootDatum::new(n, roots.clone(), roots).expect("GL_n data satisfies the axioms")
}

fn unit(n: usize, i: usize) -> Vec<i64> {
    let mut v = vec![0; n];
    v[i] = 1;
    v
}

/// Expands a preset name:
/// `SC(<type>)`, `AD(<type>)`, `GL(n)`, `Torus(r)`, `Sum(p1, p2, ...)`.
pub fn preset(name: &str) -> Result<RootDatum, DatumError> {
    let mut parser = PresetParser {
        src: name,
        pos: 0,
    };
    let d = parser.datum()?;
    parser.skip_ws();
    if parser.pos != name.len() {
        return Err(parser.error("trailing input"));
    }
    Ok(d)
}

struct PresetParser<'a> {
    src: &'a str,
    pos: usize,
}

impl PresetParser<'_> {
    fn error(&self, reason: &str) -> DatumError {
        DatumError::BadPreset {
            name: self.src.to_string(),
            reason: format!("{reason} at byte {}", self.pos),
        }
    }

    fn skip_ws(&mut self) {
        while self.src[self.pos..].starts_with(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn ident(&mut self) -> &str {
        self.skip_ws();
        let start = self.pos;
        while self.src[self.pos..].starts_with(|c: char| c.is_ascii_alphanumeric()) {
            self.pos += 1;
        }
        &self.src[start..self.pos]
    }

    fn expect(&mut self, c: char) -> Result<(), DatumError> {
        self.skip_ws();
        if self.src[self.pos..].starts_with(c) {
            self.pos += c.len_utf8();
            Ok(())
        } else {
            Err(self.error(&format!("expected {c:?}")))
        }
    }

    fn number(&mut self) -> Result<usize, DatumError> {
        let word = self.ident().to_string();
        word.parse().map_err(|_| self.error("expected a number"))
    }

    fn datum(&mut self) -> Result<RootDatum, DatumError> {
        let head = self.ident().to_string();
        self.expect('(')?;
        let d = match head.as_str() {
            "SC" | "AD" => {
                let word = self.ident().to_string();
                let t = CartanComponent::parse(&word)?;
                if head == "SC" {
                    simply_connected(t)
                } else {
                    adjoint(t)
                }
            }
            "GL" => {
                let n = self.number()?;
                if n == 0 || n > MAX_RANK {
                    return Err(self.error("GL needs 1 <= n <= 64"));
                }
                general_linear(n)
            }
            "Torus" => {
                let r = self.number()?;
                if r > MAX_RANK {
                    return Err(self.error("torus rank too large"));
                }
                RootDatum::torus(r)
            }
            "Sum" => {
                let mut acc = self.datum()?;
                loop {
                    self.skip_ws();
                    if self.src[self.pos..].starts_with(',') {
                        self.pos += 1;
                        let next = self.datum()?;
                        acc = acc.direct_sum(&next);
                        if acc.rank() > MAX_RANK {
                            return Err(self.error("sum rank too large"));
                        }
                    } else {
                        break;
                    }
                }
                acc
            }
            "" => return Err(self.error("expected a preset name")),
            other => return Err(self.error(&format!("unknown preset {other:?}"))),
        };
        self.expect(')')?;
        Ok(d)
    }
}

/// All irreducible Cartan types of rank at most `max_rank`, D from rank 4.
pub fn irreducible_types(max_rank: usize) -> Vec<CartanComponent> {
    let mut out = Vec::new();
    for n in 1..=max_rank {
        out.push(CartanComponent { series: Series::A, rank: n });
        if n >= 2 {
            out.push(CartanComponent { series: Series::B, rank: n });
        }
        if n >= 3 {
            out.push(CartanComponent { series: Series::C, rank: n });
        }
        if n >= 4 {
            out.push(CartanComponent { series: Series::D, rank: n });
        }
        if (6..=8).contains(&n) {
            out.push(CartanComponent { series: Series::E, rank: n });
        }
        if n == 4 {
            out.push(CartanComponent { series: Series::F, rank: 4 });
        }
        if n == 2 {
            out.push(CartanComponent { series: Series::G, rank: 2 });
        }
    }
    out
}

/// Preset names used by sweeps: SC/AD of every irreducible type up to
/// `max_rank`, `GL(n)`, small tori and a few sums.
pub fn preset_catalog(max_rank: usize) -> Vec<String> {
    let mut names = Vec::new();
    for t in irreducible_types(max_rank) {
        names.push(format!("SC({t})"));
        names.push(format!("AD({t})"));
    }
    names.extend(["SC(C2)".to_string(), "AD(C2)".to_string()]);
    for n in 1..=max_rank.min(8) {
        names.push(format!("GL({n})"));
    }
    for r in 0..=2 {
        names.push(format!("Torus({r})"));
    }
    let sums = [
        "Sum(SC(A1), SC(A1))",
        "Sum(SC(A1), AD(A1))",
        "Sum(AD(A1), AD(A1))",
        "Sum(SC(A1), GL(2))",
        "Sum(SC(A1), Torus(1))",
        "Sum(SC(A2), SC(C2))",
        "Sum(AD(A2), SC(G2))",
        "Sum(SC(A1), SC(G2))",
        "Sum(GL(3), AD(B2))",
        "Sum(AD(A4), SC(G2))",
        "Sum(SC(A2), AD(A2), Torus(1))",
    ];
    for s in sums {
        names.push(s.to_string());
    }
    names
}

/// Integer vector helpers shared by the lattice-facing modules.
pub fn to_big(v: &[i64]) -> Vec<BigInt> {
    intlin::big_vec(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(s: &str) -> CartanComponent {
        CartanComponent::parse(s).unwrap()
    }

    fn root_set(d: &RootDatum) -> HashSet<Vec<i64>> {
        d.roots().iter().cloned().collect()
    }

    #[test]
    fn validate_sl2() {
        let raw = RawDatum {
            rank: 1,
            roots: vec![vec![2], vec![-2]],
            coroots: vec![vec![1], vec![-1]],
        };
        assert_eq!(validate(&raw), Ok(()));
    }

    #[test]
    fn validate_bad_pairing_names_index() {
        let raw = RawDatum {
            rank: 1,
            roots: vec![vec![1]],
            coroots: vec![vec![1]],
        };
        let v = validate(&raw).unwrap_err();
        assert!(v.contains(&Violation::PairingNotTwo { index: 0, pairing: 1 }));
        assert!(v.iter().any(|x| x.to_string().contains("pairing ≠ 2 at index 0")));
    }

    #[test]
    fn validate_not_reduced() {
        // BC1: roots ±1, ±2
        let raw = RawDatum {
            rank: 1,
            roots: vec![vec![1], vec![2], vec![-1], vec![-2]],
            coroots: vec![vec![2], vec![1], vec![-2], vec![-1]],
        };
        let v = validate(&raw).unwrap_err();
        assert!(v.iter().any(|x| matches!(x, Violation::NotReduced { .. })), "{v:?}");
    }

    #[test]
    fn validate_other_failures() {
        let raw = RawDatum {
            rank: 2,
            roots: vec![vec![2, 0]],
            coroots: vec![vec![1, 0]],
        };
        let v = validate(&raw).unwrap_err();
        assert!(v.contains(&Violation::RootsNotStable { index: 0 }));
        assert!(v.contains(&Violation::NotNegationClosed { index: 0 }));

        let raw = RawDatum {
            rank: 2,
            roots: vec![vec![2]],
            coroots: vec![],
        };
        let v = validate(&raw).unwrap_err();
        assert!(v.iter().any(|x| matches!(x, Violation::CountMismatch { .. })));
    }

    #[test]
    fn presets_basic() {
        let sc = preset("SC(A1)").unwrap();
        assert_eq!(sc.rank(), 1);
        assert_eq!(sc.roots(), &[vec![2], vec![-2]]);
        assert_eq!(sc.coroots(), &[vec![1], vec![-1]]);

        let gl = preset("GL(2)").unwrap();
        assert_eq!(gl.roots(), &[vec![1, -1], vec![-1, 1]]);
        assert_eq!(gl.coroots(), gl.roots());

        let tor = preset("Torus(3)").unwrap();
        assert_eq!(tor.rank(), 3);
        assert_eq!(tor.num_roots(), 0);
    }

    #[test]
    fn preset_errors() {
        for bad in ["SC(E5)", "SC(F3)", "SC(G3)", "XX(A1)", "SC(A1", "SC(A1))", "Sum()", "GL(0)", "SC(B1)"] {
            assert!(preset(bad).is_err(), "{bad} should fail");
        }
    }

    #[test]
    fn dual_examples() {
        let sc = preset("SC(A1)").unwrap();
        let ad = preset("AD(A1)").unwrap();
        assert_eq!(sc.dual(), ad);
        assert_eq!(ad.roots(), &[vec![1], vec![-1]]);
        assert_eq!(ad.coroots(), &[vec![2], vec![-2]]);
        let gl = preset("GL(2)").unwrap();
        assert_eq!(gl.dual(), gl);
        assert_eq!(RootDatum::torus(3).dual(), RootDatum::torus(3));
        let g2 = preset("SC(G2)").unwrap();
        assert_eq!(g2.dual().dual(), g2);
    }

    #[test]
    fn direct_sum_examples() {
        let d = preset("Sum(SC(A1), Torus(1))").unwrap();
        assert_eq!(d.rank(), 2);
        assert_eq!(d.roots(), &[vec![2, 0], vec![-2, 0]]);
        let r = preset("SC(B3)").unwrap();
        assert_eq!(RootDatum::torus(0).direct_sum(&r), r);
        let aa = preset("Sum(SC(A1), SC(A1))").unwrap();
        assert_eq!((aa.rank(), aa.num_roots()), (2, 4));
    }

    #[test]
    fn components_examples() {
        let gl3 = preset("GL(3)").unwrap();
        let comps = gl3.components().unwrap();
        assert_eq!(comps.len(), 1);
        assert_eq!(comps[0].cartan, t("A2"));
        assert_eq!(comps[0].roots.len(), 6);

        let d = preset("Sum(SC(A1), SC(G2))").unwrap();
        let ty: Vec<String> = d.components().unwrap().iter().map(|c| c.cartan.to_string()).collect();
        assert_eq!(ty, vec!["A1", "G2"]);

        assert!(preset("Torus(5)").unwrap().components().unwrap().is_empty());
    }

    #[test]
    fn low_rank_d_normalizes() {
        let d2 = simply_connected(t("D2"));
        let ty: Vec<String> = d2.components().unwrap().iter().map(|c| c.cartan.to_string()).collect();
        assert_eq!(ty, vec!["A1", "A1"]);
        let d3 = simply_connected(t("D3"));
        assert_eq!(d3.cartan_type().unwrap().to_string(), "A3");
    }

    #[test]
    fn simple_system_examples() {
        let sc = preset("SC(A1)").unwrap();
        assert_eq!(sc.simple_system(), &[0]);
        assert_eq!(sc.root(0), &[2]);

        let gl = preset("GL(2)").unwrap();
        let s = gl.simple_system();
        assert_eq!(s.len(), 1);
        assert_eq!(gl.root(s[0]), &[1, -1]);

        let a2 = preset("SC(A2)").unwrap();
        let s = a2.simple_system();
        assert_eq!(s.len(), 2);
        let c = a2.cartan_matrix_of(s);
        assert_eq!(c, vec![vec![2, -1], vec![-1, 2]]);
    }

    #[test]
    fn root_counts_match_classical_table() {
        let table = [
            ("A1", 2),
            ("A3", 12),
            ("B2", 8),
            ("C3", 18),
            ("B4", 32),
            ("D4", 24),
            ("D5", 40),
            ("G2", 12),
            ("F4", 48),
            ("E6", 72),
            ("E7", 126),
            ("E8", 240),
        ];
        for (name, count) in table {
            let d = simply_connected(t(name));
            assert_eq!(d.num_roots(), count, "{name}");
            assert_eq!(d.simple_system().len(), d.rank(), "{name}");
            assert_eq!(d.cartan_type().unwrap().to_string(), if name == "B2" { "B2".into() } else { name.to_string() });
        }
    }

    #[test]
    fn highest_root_coefficients() {
        let cases = [
            ("A2", vec![1, 1]),
            ("G2", vec![3, 2]),
            ("B2", vec![1, 2]),
            ("B3", vec![1, 2, 2]),
            ("C3", vec![2, 2, 1]),
            ("D5", vec![1, 2, 2, 1, 1]),
            ("F4", vec![2, 3, 4, 2]),
            ("E6", vec![1, 2, 2, 3, 2, 1]),
            ("E7", vec![2, 2, 3, 4, 3, 2, 1]),
            ("E8", vec![2, 3, 4, 6, 5, 4, 3, 2]),
        ];
        for (name, coeffs) in cases {
            for d in [simply_connected(t(name)), adjoint(t(name))] {
                let comps = d.components().unwrap();
                assert_eq!(comps.len(), 1);
                assert_eq!(comps[0].highest_coefficients, coeffs, "{name}");
            }
        }
        // C2 is reported as B2; as an unordered multiset its coefficients are {2,1}.
        let c2 = preset("SC(C2)").unwrap();
        let mut co = c2.components().unwrap()[0].highest_coefficients.clone();
        co.sort();
        assert_eq!(co, vec![1, 2]);
    }

    #[test]
    fn weight_lattice_examples() {
        for name in ["SC(A1)", "AD(A1)"] {
            let d = preset(name).unwrap();
            let g = d.fundamental_group();
            assert_eq!(g.torsion, intlin::big_vec(&[2]));
            assert_eq!(g.free_rank, 0);
        }
        let a3 = preset("SC(A3)").unwrap();
        assert_eq!(a3.weight_lattice_quotient(&[]), FinAbGroup::free(3));
        assert!(preset("SC(G2)").unwrap().fundamental_group().is_trivial());
        assert_eq!(preset("GL(3)").unwrap().fundamental_group().torsion, intlin::big_vec(&[3]));
    }

    #[test]
    fn semisimplicity() {
        assert!(preset("SC(A2)").unwrap().is_semisimple());
        assert!(!preset("GL(2)").unwrap().is_semisimple());
        assert!(!preset("Torus(1)").unwrap().is_semisimple());
        assert!(RootDatum::torus(0).is_semisimple());
    }

    #[test]
    fn quotients() {
        let sc = preset("SC(A1)").unwrap();
        assert_eq!(sc.character_quotient(&sc.all_indices()).torsion, intlin::big_vec(&[2]));
        assert!(sc.cocharacter_quotient(&sc.all_indices()).is_trivial());
        let gl = preset("GL(2)").unwrap();
        assert_eq!(gl.character_quotient(&gl.all_indices()), FinAbGroup::free(1));
    }

    #[test]
    fn json_round_trip() {
        let d = preset("SC(B2)").unwrap();
        let s = serde_json::to_string(&d).unwrap();
        assert!(s.starts_with("{\"rank\":2,\"roots\":"));
        let back: RootDatum = serde_json::from_str(&s).unwrap();
        assert_eq!(back, d);
        let bad = r#"{"rank":1,"roots":[[1]],"coroots":[[1]]}"#;
        assert!(serde_json::from_str::<RootDatum>(bad).is_err());
        assert_eq!(RootDatum::parse(&s).unwrap(), d);
    }

    #[test]
    fn sc_and_ad_share_root_system_shape() {
        for ty in irreducible_types(5) {
            let sc = simply_connected(ty);
            let ad = adjoint(ty);
            assert_eq!(sc.num_roots(), ad.num_roots());
            assert_eq!(root_set(&sc).len(), sc.num_roots());
        }
    }
}
