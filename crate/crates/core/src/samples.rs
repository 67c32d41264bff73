//! Seeded random inputs for property sweeps and benchmarks.

use num_bigint::BigInt;
use rand::Rng;

use crate::intlin::{IntMatrix, Prime, RowLattice};
use crate::rootdatum::{adjoint, CartanComponent, RootDatum, Series};

/// Random integer matrix with entries in `[-bound, bound]`.
pub fn random_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize, bound: i64) -> IntMatrix {
    let entries = (0..rows * cols)
        .map(|_| BigInt::from(rng.gen_range(-bound..=bound)))
        .collect();
    IntMatrix::new(rows, cols, entries).expect("entry count matches")
}

/// Random unimodular `r x r` matrix and its inverse, as a product of
/// elementary operations.
pub fn random_unimodular<R: Rng>(rng: &mut R, r: usize, steps: usize) -> (Vec<Vec<i64>>, Vec<Vec<i64>>) {
    let mut h: Vec<Vec<i64>> = (0..r).map(|i| (0..r).map(|j| i64::from(i == j)).collect()).collect();
    let mut hinv = h.clone();
    if r < 2 {
        if r == 1 && rng.gen_bool(0.5) {
            h[0][0] = -1;
            hinv[0][0] = -1;
        }
        return (h, hinv);
    }
    for _ in 0..steps {
        let i = rng.gen_range(0..r);
        let mut j = rng.gen_range(0..r - 1);
        if j >= i {
            j += 1;
        }
        let f: i64 = if rng.gen_bool(0.5) { 1 } else { -1 };
        // H <- E H with E = I + f e_ij (row_i += f row_j);
        // H^-1 <- H^-1 E^-1 (col_j -= f col_i).
        let source = h[j].clone();
        for (x, y) in h[i].iter_mut().zip(source) {
            *x += f * y;
        }
        for row in hinv.iter_mut() {
            row[j] -= f * row[i];
        }
        if rng.gen_bool(0.1) {
            h.swap(i, j);
            for row in hinv.iter_mut() {
                row.swap(i, j);
            }
        }
    }
    (h, hinv)
}

/// A random datum whose root system is a product of type-A components, with
/// total rank at most `max_rank`.
///
/// Starts from `AD(A_{m_1}) ⊕ … ⊕ Torus(t)`, adjoins a random vector
/// `v` with `n v` in the old lattice (`n <= 12`) and integral pairings with
/// every coroot, then applies a random change of basis of `X`. The result is
/// generally neither simply connected nor adjoint, and need not split off its
/// torus.
pub fn random_type_a_datum<R: Rng>(rng: &mut R, max_rank: usize) -> RootDatum {
    assert!(max_rank >= 1);
    loop {
        if let Some(d) = try_random_type_a(rng, max_rank) {
            return d;
        }
    }
}

fn try_random_type_a<R: Rng>(rng: &mut R, max_rank: usize) -> Option<RootDatum> {
    let total = rng.gen_range(1..=max_rank);
    let mut blocks = Vec::new();
    let mut used = 0;
    while used < total {
        if used > 0 && rng.gen_bool(0.25) {
            break;
        }
        let m = rng.gen_range(1..=total - used);
        blocks.push(m);
        used += m;
    }
    let torus = total - used;
    let mut base = RootDatum::torus(0);
    for &m in &blocks {
        base = base.direct_sum(&adjoint(CartanComponent { series: Series::A, rank: m }));
    }
    base = base.direct_sum(&RootDatum::torus(torus));
    let r = base.rank();

    // v = w / denom in the adjoint coordinates, with n v integral.
    let n: i64 = rng.gen_range(1..=12);
    let mut denom: i64 = n;
    for &m in &blocks {
        denom = lcm(denom, m as i64 + 1);
    }
    let mut w = vec![0i64; r];
    let mut offset = 0;
    for &m in &blocks {
        let h = m as i64 + 1;
        // k ϖ_1 with (m+1) | n k, where ϖ_1 = Σ_j (m+1-j)/(m+1) α_j.
        let step = h / gcd(h, n);
        let k = step * rng.gen_range(0..h);
        for j in 1..=m {
            w[offset + j - 1] = k * (h - j as i64) * (denom / h);
        }
        offset += m;
    }
    for x in w.iter_mut().skip(offset) {
        *x = rng.gen_range(0..n) * (denom / n);
    }

    // X = X_0 + Zv, held scaled by denom.
    let mut gens: Vec<Vec<i64>> = (0..r)
        .map(|i| (0..r).map(|j| if i == j { denom } else { 0 }).collect())
        .collect();
    gens.push(w);
    let lattice = RowLattice::new(r, &IntMatrix::from_i64_rows(r, &gens).ok()?).ok()?;
    let basis = lattice.basis();
    let basis_lattice = RowLattice::new(r, &basis).ok()?;
    let to_i64 = |v: &[BigInt]| -> Option<Vec<i64>> { v.iter().map(num_traits::ToPrimitive::to_i64).collect() };

    let mut roots = Vec::with_capacity(base.num_roots());
    let mut coroots = Vec::with_capacity(base.num_roots());
    for i in 0..base.num_roots() {
        let scaled: Vec<BigInt> = base.root(i).iter().map(|&x| BigInt::from(x * denom)).collect();
        roots.push(to_i64(&basis_lattice.express(&scaled)?)?);
        let y: Vec<BigInt> = crate::intlin::big_vec(base.coroot(i));
        let paired = basis.apply(&y);
        let d = BigInt::from(denom);
        let mut coords = Vec::with_capacity(r);
        for p in paired {
            if &p % &d != BigInt::from(0) {
                return None;
            }
            coords.push(num_traits::ToPrimitive::to_i64(&(p / &d))?);
        }
        coroots.push(coords);
    }

    let (h, hinv) = random_unimodular(rng, r, 3 * r);
    // roots c -> c H^-1, coroots y -> H y
    let roots: Vec<Vec<i64>> = roots
        .iter()
        .map(|c| (0..r).map(|k| (0..r).map(|l| c[l] * hinv[l][k]).sum()).collect())
        .collect();
    let coroots: Vec<Vec<i64>> = coroots
        .iter()
        .map(|y| (0..r).map(|k| (0..r).map(|l| h[k][l] * y[l]).sum()).collect())
        .collect();
    RootDatum::new(r, roots, coroots).ok()
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: i64, b: i64) -> i64 {
    a / gcd(a, b) * b
}

/// Random input for the gluing check: an `n x r` matrix (`r >= n`), positive
/// exponents and a small prime.
pub fn random_gluing_instance<R: Rng>(rng: &mut R) -> (IntMatrix, Vec<u32>, Prime) {
    let n = rng.gen_range(1..=4);
    let r = rng.gen_range(n..=6);
    let p = [2u64, 3, 5, 7][rng.gen_range(0..4)];
    let a = if rng.gen_bool(0.5) {
        random_matrix(rng, n, r, 6)
    } else {
        // bias towards singular-mod-p instances
        let mut a = random_matrix(rng, n, r, 3);
        let row = rng.gen_range(0..n);
        for c in 0..r {
            a[(row, c)] *= BigInt::from(p);
        }
        a
    };
    let exps = (0..n).map(|_| rng.gen_range(1..=3)).collect();
    (a, exps, Prime::new(p).expect("prime"))
}
