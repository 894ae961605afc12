//! Mod-p local-global laboratory for links described by a linking matrix.
//!
//! On the level of first homology, restriction of a mod-p cochain to the
//! peripheral torus of the i-th knot is plain linear algebra: the cochain
//! phi takes the value phi_i on the meridian, and — because the canonical
//! longitude is the sum of the other meridians weighted by linking
//! numbers — the value (Lambda phi)_i on the longitude.  This module builds
//! those restriction maps as explicit matrices over F_p, measures their
//! kernels and ranks (the injectivity and surjectivity statistics of the
//! local-global problem), checks the reciprocity identity forced by the
//! symmetry of the linking matrix, and runs seeded experiments on synthetic
//! linking data.
//!
//! Everything here is the finite abelianized layer: F_p coefficients,
//! trivial action, finitely many knots.  Profinite refinements are out of
//! scope, and every emitted report says so via [`SCOPE_NOTE`].

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One line carried by every experiment report, marking the boundary of
/// what is computed here.
pub const SCOPE_NOTE: &str =
    "mod-p abelianized restriction data; profinite refinements out of scope";

/// Symmetric integer matrix of pairwise linking numbers with zero diagonal
/// (the 0-framed canonical longitude of each knot in the 3-sphere).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinkingMatrix {
    n: usize,
    entries: Vec<Vec<i64>>,
}

impl LinkingMatrix {
    /// Validates squareness, symmetry, and the zero diagonal.
    pub fn new(entries: Vec<Vec<i64>>) -> Result<Self> {
        let n = entries.len();
        for (i, row) in entries.iter().enumerate() {
            if row.len() != n {
                return Err(Error::BadLinkingMatrix { i, j: row.len() });
            }
        }
        for i in 0..n {
            if entries[i][i] != 0 {
                return Err(Error::BadLinkingMatrix { i, j: i });
            }
            for j in 0..i {
                if entries[i][j] != entries[j][i] {
                    return Err(Error::BadLinkingMatrix { i, j });
                }
            }
        }
        Ok(LinkingMatrix { n, entries })
    }

    /// Skips validation.  Exists so tests can feed deliberately broken
    /// matrices to the checks that are supposed to catch them; everything
    /// else should go through [`LinkingMatrix::new`].
    pub fn new_unchecked(entries: Vec<Vec<i64>>) -> Self {
        LinkingMatrix { n: entries.len(), entries }
    }

    /// The all-zero matrix: an n-component unlink.
    pub fn zero(n: usize) -> Self {
        LinkingMatrix { n, entries: vec![vec![0; n]; n] }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn row(&self, i: usize) -> &[i64] {
        &self.entries[i]
    }

    pub fn entries(&self) -> &[Vec<i64>] {
        &self.entries
    }

    /// Plain comma-separated rows, one line per knot.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for row in &self.entries {
            let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    /// Parses [`to_csv`](Self::to_csv) output and re-validates.
    pub fn from_csv(text: &str) -> Result<Self> {
        let mut rows = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let row: Vec<i64> = line
                .split(',')
                .map(|cell| {
                    cell.trim().parse::<i64>().map_err(|e| Error::BadRecord {
                        reason: format!("line {}: {e}", lineno + 1),
                    })
                })
                .collect::<Result<_>>()?;
            rows.push(row);
        }
        LinkingMatrix::new(rows)
    }
}

/// The pair of values a mod-p cochain takes on one knot's peripheral torus:
/// `a` on the meridian, `b` on the longitude.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalPair {
    pub a: u64,
    pub b: u64,
}

/// The antisymmetric local pairing <(a1,b1),(a2,b2)> = a1 b2 - b1 a2 mod p.
pub fn local_pairing(x: LocalPair, y: LocalPair, p: u64) -> u64 {
    let pos = (x.a as u128 * y.b as u128) % p as u128;
    let neg = (x.b as u128 * y.a as u128) % p as u128;
    ((pos + p as u128 - neg) % p as u128) as u64
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn pow_mod(base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc: u128 = 1;
    let mut b = base as u128 % m as u128;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m as u128;
        }
        b = b * b % m as u128;
        exp >>= 1;
    }
    acc as u64
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

/// Dense matrix over the prime field F_p, row-major, entries reduced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FpMatrix {
    p: u64,
    rows: usize,
    cols: usize,
    entries: Vec<u64>,
}

impl FpMatrix {
    /// Builds from integer rows, reducing mod p.  All rows must share a
    /// length; `p` must be prime for rank and kernel to mean anything.
    pub fn from_rows(p: u64, rows: &[Vec<i64>]) -> Self {
        debug_assert!(is_prime(p), "FpMatrix needs a prime modulus");
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut entries = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            entries.extend(row.iter().map(|&v| v.rem_euclid(p as i64) as u64));
        }
        FpMatrix { p, rows: r, cols: c, entries }
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> u64 {
        self.entries[r * self.cols + c]
    }

    fn set(&mut self, r: usize, c: usize, v: u64) {
        self.entries[r * self.cols + c] = v;
    }

    pub fn mul_vec(&self, v: &[u64]) -> Vec<u64> {
        assert_eq!(v.len(), self.cols, "dimension mismatch");
        (0..self.rows)
            .map(|r| {
                let mut acc: u128 = 0;
                for c in 0..self.cols {
                    acc += self.get(r, c) as u128 * v[c] as u128;
                }
                (acc % self.p as u128) as u64
            })
            .collect()
    }

    /// Reduced row echelon form together with the pivot columns.
    fn echelon(&self) -> (FpMatrix, Vec<usize>) {
        let mut m = self.clone();
        let p = m.p;
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(pr) = (r..m.rows).find(|&row| m.get(row, c) != 0) else {
                continue;
            };
            for cc in 0..m.cols {
                let (a, b) = (m.get(r, cc), m.get(pr, cc));
                m.set(r, cc, b);
                m.set(pr, cc, a);
            }
            let inv = inv_mod(m.get(r, c), p);
            for cc in 0..m.cols {
                let v = (m.get(r, cc) as u128 * inv as u128 % p as u128) as u64;
                m.set(r, cc, v);
            }
            for row in 0..m.rows {
                if row == r || m.get(row, c) == 0 {
                    continue;
                }
                let factor = m.get(row, c);
                for cc in 0..m.cols {
                    let sub = (factor as u128 * m.get(r, cc) as u128) % p as u128;
                    let v = ((m.get(row, cc) as u128 + p as u128 - sub) % p as u128) as u64;
                    m.set(row, cc, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.echelon().1.len()
    }

    /// A basis of the right kernel, one vector per free column.
    pub fn kernel_basis(&self) -> Vec<Vec<u64>> {
        let (rref, pivots) = self.echelon();
        let p = self.p;
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if pivots.contains(&free) {
                continue;
            }
            let mut v = vec![0u64; self.cols];
            v[free] = 1;
            for (row, &pc) in pivots.iter().enumerate() {
                let coeff = rref.get(row, free);
                if coeff != 0 {
                    v[pc] = p - coeff;
                }
            }
            basis.push(v);
        }
        basis
    }
}

fn validate_indices(indices: &[usize], n: usize) -> Result<Vec<usize>> {
    let mut s: Vec<usize> = indices.to_vec();
    for &i in &s {
        if i >= n {
            return Err(Error::IndexOutOfRange { index: i, n });
        }
    }
    s.sort_unstable();
    s.dedup();
    Ok(s)
}

/// The restriction map F_p^n -> (meridian, longitude) pairs over the knots
/// in `s` (zero-based indices), as an explicit 2|S| x n matrix: for each
/// i in S, the row e_i followed by the row Lambda_i mod p.
pub fn restriction_map(lk: &LinkingMatrix, p: u64, s: &[usize]) -> Result<FpMatrix> {
    if !is_prime(p) {
        return Err(Error::NotPrime { p });
    }
    let s = validate_indices(s, lk.n())?;
    let mut rows = Vec::with_capacity(2 * s.len());
    for &i in &s {
        let mut meridian = vec![0i64; lk.n()];
        meridian[i] = 1;
        rows.push(meridian);
        rows.push(lk.row(i).to_vec());
    }
    if rows.is_empty() {
        // Empty S still needs the right column count for rank bookkeeping.
        return Ok(FpMatrix { p, rows: 0, cols: lk.n(), entries: Vec::new() });
    }
    Ok(FpMatrix::from_rows(p, &rows))
}

/// Dimension of the kernel of the restriction map to the complement of
/// `excluded`.  Zero means mod-p cochains are pinned down by their values
/// away from the excluded knots.
pub fn injectivity_check(lk: &LinkingMatrix, p: u64, excluded: &[usize]) -> Result<usize> {
    let excluded = validate_indices(excluded, lk.n())?;
    let s: Vec<usize> = (0..lk.n()).filter(|i| excluded.binary_search(i).is_err()).collect();
    let map = restriction_map(lk, p, &s)?;
    Ok(map.cols() - map.rank())
}

/// Whether the restriction map hits every (meridian, longitude) value pair
/// over the knots in `s`, together with its rank.  Surjective exactly when
/// the rank is 2|S|.
pub fn surjectivity_check(lk: &LinkingMatrix, p: u64, s: &[usize]) -> Result<(bool, usize)> {
    let s = validate_indices(s, lk.n())?;
    let map = restriction_map(lk, p, &s)?;
    let rank = map.rank();
    Ok((rank == 2 * s.len(), rank))
}

/// Outcome of [`reciprocity_check`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReciprocityReport {
    pub scope: String,
    pub p: u64,
    pub n: usize,
    pub trials: u32,
    pub seed: u64,
    pub violations: u32,
    /// Trial index and nonzero pairing sum of the first violation, if any.
    pub first_violation: Option<(u32, u64)>,
}

/// For `trials` random cochain pairs (phi, psi), sum the local pairings of
/// their restrictions over every knot.  The sum telescopes to
/// phi^T Lambda psi - psi^T Lambda phi, which vanishes identically for a
/// symmetric linking matrix — so any violation flags broken input, which
/// is exactly what the report is for.  Primality of `p` is not needed for
/// the identity and is not checked.
pub fn reciprocity_check(lk: &LinkingMatrix, p: u64, trials: u32, seed: u64) -> ReciprocityReport {
    assert!(p >= 2, "modulus must be at least 2");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = lk.n();
    let mut violations = 0;
    let mut first_violation = None;
    for trial in 0..trials {
        let phi: Vec<u64> = (0..n).map(|_| rng.gen_range(0..p)).collect();
        let psi: Vec<u64> = (0..n).map(|_| rng.gen_range(0..p)).collect();
        let mut total: u64 = 0;
        for i in 0..n {
            let mut lphi: u128 = 0;
            let mut lpsi: u128 = 0;
            for j in 0..n {
                let lam = lk.entries[i][j].rem_euclid(p as i64) as u128;
                lphi += lam * phi[j] as u128;
                lpsi += lam * psi[j] as u128;
            }
            let res_phi = LocalPair { a: phi[i], b: (lphi % p as u128) as u64 };
            let res_psi = LocalPair { a: psi[i], b: (lpsi % p as u128) as u64 };
            total = (total + local_pairing(res_phi, res_psi, p)) % p;
        }
        if total != 0 {
            violations += 1;
            if first_violation.is_none() {
                first_violation = Some((trial, total));
            }
        }
    }
    ReciprocityReport {
        scope: SCOPE_NOTE.to_string(),
        p,
        n,
        trials,
        seed,
        violations,
        first_violation,
    }
}

/// Exhaustive check of the duality picture on one peripheral torus: the
/// meridian-vanishing pairs {a = 0} (the unramified line, of size p inside
/// the p^2 local pairs) pair to zero among themselves and are exactly
/// their own orthogonal complement.
pub fn unramified_orthogonality(p: u64) -> bool {
    assert!(p >= 2, "modulus must be at least 2");
    let unramified: Vec<LocalPair> = (0..p).map(|b| LocalPair { a: 0, b }).collect();
    let self_orthogonal = unramified
        .iter()
        .all(|&x| unramified.iter().all(|&y| local_pairing(x, y, p) == 0));
    let mut complement = Vec::new();
    for a in 0..p {
        for b in 0..p {
            let x = LocalPair { a, b };
            if unramified.iter().all(|&y| local_pairing(x, y, p) == 0) {
                complement.push(x);
            }
        }
    }
    self_orthogonal && complement.len() as u64 == p && complement == unramified
}

/// Residue counts of an integer sequence mod a fixed modulus.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrequencyTable {
    pub modulus: u64,
    pub counts: Vec<u64>,
    pub total: u64,
}

impl FrequencyTable {
    /// Empirical frequency of each residue; zeros when the input was empty.
    pub fn frequencies(&self) -> Vec<f64> {
        self.counts
            .iter()
            .map(|&c| if self.total == 0 { 0.0 } else { c as f64 / self.total as f64 })
            .collect()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("residue,count,frequency\n");
        for (r, (&c, f)) in self.counts.iter().zip(self.frequencies()).enumerate() {
            out.push_str(&format!("{r},{c},{f}\n"));
        }
        out
    }
}

/// Tallies `values` mod `modulus`.  Equidistributed inputs should put every
/// residue near 1/modulus; the table reports, it does not judge.
pub fn linking_mod_distribution(values: &[i64], modulus: u64) -> FrequencyTable {
    assert!(modulus >= 1, "modulus must be positive");
    assert!(modulus <= 1 << 24, "residue table would be enormous");
    let mut counts = vec![0u64; modulus as usize];
    for &v in values {
        counts[v.rem_euclid(modulus as i64) as usize] += 1;
    }
    FrequencyTable { modulus, counts, total: values.len() as u64 }
}

/// Random symmetric zero-diagonal matrix with entries uniform in
/// [-bound, bound], deterministic in `seed`.  Entries are drawn in row-major
/// upper-triangle order, so the same seed always yields the same matrix.
pub fn synthetic_linking_model(n: usize, bound: i64, seed: u64) -> LinkingMatrix {
    assert!(n >= 1, "need at least one knot");
    assert!(bound >= 1, "bound must be positive");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut entries = vec![vec![0i64; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let v = rng.gen_range(-bound..=bound);
            entries[i][j] = v;
            entries[j][i] = v;
        }
    }
    LinkingMatrix { n, entries }
}

/// One surjectivity/injectivity trial, in the shape the experiment files
/// use on disk.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExperimentRecord {
    pub seed: u64,
    pub p: u64,
    pub n: usize,
    #[serde(rename = "S")]
    pub s: Vec<usize>,
    pub rank: usize,
    pub kernel_dim: usize,
    pub verdict: String,
}

/// Aggregate of a batch of seeded trials.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExperimentSummary {
    pub scope: String,
    pub p: u64,
    pub n: usize,
    pub s_size: usize,
    pub trials: u32,
    pub master_seed: u64,
    /// Trials whose restriction map hit all 2|S| local coordinates.
    pub surjective: u32,
    /// Trials where restriction away from S had kernel zero.
    pub zero_kernel: u32,
    pub records: Vec<ExperimentRecord>,
}

fn experiment_batch(
    matrix_for: impl Fn(u64) -> LinkingMatrix,
    n: usize,
    p: u64,
    s_size: usize,
    trials: u32,
    master_seed: u64,
) -> Result<ExperimentSummary> {
    if !is_prime(p) {
        return Err(Error::NotPrime { p });
    }
    if s_size > n {
        return Err(Error::IndexOutOfRange { index: s_size, n });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    let mut records = Vec::with_capacity(trials as usize);
    let mut surjective_count = 0;
    let mut zero_kernel_count = 0;
    for _ in 0..trials {
        let trial_seed = rng.gen::<u64>();
        let lk = matrix_for(trial_seed);
        let mut s = rand::seq::index::sample(&mut rng, n, s_size).into_vec();
        s.sort_unstable();
        let (surjective, rank) = surjectivity_check(&lk, p, &s)?;
        let kernel_dim = injectivity_check(&lk, p, &s)?;
        if surjective {
            surjective_count += 1;
        }
        if kernel_dim == 0 {
            zero_kernel_count += 1;
        }
        records.push(ExperimentRecord {
            seed: trial_seed,
            p,
            n,
            s,
            rank,
            kernel_dim,
            verdict: if surjective { "surjective" } else { "rank-deficient" }.to_string(),
        });
    }
    Ok(ExperimentSummary {
        scope: SCOPE_NOTE.to_string(),
        p,
        n,
        s_size,
        trials,
        master_seed,
        surjective: surjective_count,
        zero_kernel: zero_kernel_count,
        records,
    })
}

/// Seeded batch of trials on fresh synthetic linking matrices: each trial
/// draws a matrix and a random knot subset S, then records the rank of the
/// restriction onto S and the kernel dimension of the restriction away
/// from S.
pub fn synthetic_experiment_batch(
    n: usize,
    bound: i64,
    p: u64,
    s_size: usize,
    trials: u32,
    master_seed: u64,
) -> Result<ExperimentSummary> {
    experiment_batch(
        |seed| synthetic_linking_model(n, bound, seed),
        n,
        p,
        s_size,
        trials,
        master_seed,
    )
}

/// The control batch: same protocol on the n-component unlink, whose zero
/// linking matrix kills every longitude coordinate — surjectivity onto a
/// nonempty S must fail every single time.
pub fn unlink_control_batch(
    n: usize,
    p: u64,
    s_size: usize,
    trials: u32,
    master_seed: u64,
) -> Result<ExperimentSummary> {
    experiment_batch(|_| LinkingMatrix::zero(n), n, p, s_size, trials, master_seed)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hopf() -> LinkingMatrix {
        LinkingMatrix::new(vec![vec![0, 1], vec![1, 0]]).unwrap()
    }

    #[test]
    fn validation_catches_bad_matrices() {
        assert!(matches!(
            LinkingMatrix::new(vec![vec![0, 1], vec![1]]),
            Err(Error::BadLinkingMatrix { i: 1, .. })
        ));
        assert!(matches!(
            LinkingMatrix::new(vec![vec![1, 2], vec![2, 0]]),
            Err(Error::BadLinkingMatrix { i: 0, j: 0 })
        ));
        assert!(matches!(
            LinkingMatrix::new(vec![vec![0, 1], vec![2, 0]]),
            Err(Error::BadLinkingMatrix { i: 1, j: 0 })
        ));
        assert!(LinkingMatrix::new(vec![vec![0, -3], vec![-3, 0]]).is_ok());
        assert_eq!(LinkingMatrix::zero(3).row(1), &[0, 0, 0]);
    }

    #[test]
    fn csv_round_trip() {
        let lk = synthetic_linking_model(5, 7, 99);
        let back = LinkingMatrix::from_csv(&lk.to_csv()).unwrap();
        assert_eq!(back, lk);
        assert!(matches!(
            LinkingMatrix::from_csv("0,x\nx,0\n"),
            Err(Error::BadRecord { .. })
        ));
    }

    #[test]
    fn fp_rank_and_kernel_against_exhaustive_count() {
        // rank + nullity = cols, and the kernel size matches brute-force
        // enumeration of all vectors.
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for &p in &[2u64, 3] {
            for _ in 0..60 {
                let rows = rng.gen_range(1..=4usize);
                let cols = rng.gen_range(1..=5usize);
                let data: Vec<Vec<i64>> = (0..rows)
                    .map(|_| (0..cols).map(|_| rng.gen_range(-6..=6i64)).collect())
                    .collect();
                let m = FpMatrix::from_rows(p, &data);
                let basis = m.kernel_basis();
                assert_eq!(m.rank() + basis.len(), cols);
                for v in &basis {
                    assert!(m.mul_vec(v).iter().all(|&x| x == 0));
                }
                let mut kernel_size = 0u64;
                let total = p.pow(cols as u32);
                for code in 0..total {
                    let mut v = vec![0u64; cols];
                    let mut c = code;
                    for slot in v.iter_mut() {
                        *slot = c % p;
                        c /= p;
                    }
                    if m.mul_vec(&v).iter().all(|&x| x == 0) {
                        kernel_size += 1;
                    }
                }
                assert_eq!(kernel_size, p.pow(basis.len() as u32));
            }
        }
    }

    #[test]
    fn hopf_restriction_is_an_isomorphism_on_one_knot() {
        let m = restriction_map(&hopf(), 2, &[0]).unwrap();
        assert_eq!((m.rows(), m.cols()), (2, 2));
        // phi |-> (phi_1, phi_2): identity-shaped matrix.
        assert_eq!(
            [m.get(0, 0), m.get(0, 1), m.get(1, 0), m.get(1, 1)],
            [1, 0, 0, 1]
        );
        assert_eq!(m.rank(), 2);
    }

    #[test]
    fn unlink_restriction_loses_the_longitude() {
        let m = restriction_map(&LinkingMatrix::zero(2), 2, &[0]).unwrap();
        assert_eq!(m.rank(), 1);
        assert_eq!([m.get(1, 0), m.get(1, 1)], [0, 0]);

        let single = restriction_map(&LinkingMatrix::zero(1), 3, &[0]).unwrap();
        assert_eq!((single.rows(), single.cols(), single.rank()), (2, 1, 1));
        assert_eq!(single.get(1, 0), 0, "a lone knot has zero longitude value");
    }

    #[test]
    fn restriction_rejects_bad_inputs() {
        assert!(matches!(
            restriction_map(&hopf(), 4, &[0]),
            Err(Error::NotPrime { p: 4 })
        ));
        assert!(matches!(
            restriction_map(&hopf(), 1, &[0]),
            Err(Error::NotPrime { p: 1 })
        ));
        assert!(matches!(
            restriction_map(&hopf(), 2, &[2]),
            Err(Error::IndexOutOfRange { index: 2, n: 2 })
        ));
    }

    #[test]
    fn injectivity_examples() {
        // Hopf link, second knot excluded: phi_1 = 0 directly and
        // phi_2 = (Lambda phi)_1 = 0 via linking.
        assert_eq!(injectivity_check(&hopf(), 2, &[1]).unwrap(), 0);
        // Unlink on three knots, two excluded: those coordinates are free.
        assert_eq!(injectivity_check(&LinkingMatrix::zero(3), 2, &[1, 2]).unwrap(), 2);
        // Nothing excluded: meridian coordinates alone pin phi down.
        for seed in 0..5 {
            let lk = synthetic_linking_model(8, 4, seed);
            assert_eq!(injectivity_check(&lk, 3, &[]).unwrap(), 0);
        }
    }

    #[test]
    fn surjectivity_examples() {
        assert_eq!(surjectivity_check(&hopf(), 2, &[0]).unwrap(), (true, 2));
        assert_eq!(
            surjectivity_check(&LinkingMatrix::zero(2), 2, &[0]).unwrap(),
            (false, 1)
        );
        assert_eq!(surjectivity_check(&hopf(), 5, &[]).unwrap(), (true, 0));
    }

    #[test]
    fn surjectivity_is_monotone_under_shrinking_s() {
        for seed in 0..10 {
            let lk = synthetic_linking_model(12, 6, seed + 1000);
            let s = [1usize, 4, 9];
            let (full, _) = surjectivity_check(&lk, 3, &s).unwrap();
            if !full {
                continue;
            }
            for mask in 0u8..8 {
                let sub: Vec<usize> =
                    s.iter().enumerate().filter(|(k, _)| mask >> k & 1 == 1).map(|(_, &i)| i).collect();
                let (flag, rank) = surjectivity_check(&lk, 3, &sub).unwrap();
                assert!(flag, "subset {sub:?} of a surjective S must stay surjective");
                assert_eq!(rank, 2 * sub.len());
            }
        }
    }

    #[test]
    fn reciprocity_vanishes_for_symmetric_matrices() {
        for &p in &[2u64, 3, 5] {
            for &n in &[1usize, 2, 7, 40] {
                let lk = if n == 1 {
                    LinkingMatrix::zero(1)
                } else {
                    synthetic_linking_model(n, 9, p + n as u64)
                };
                let report = reciprocity_check(&lk, p, 100, 42);
                assert_eq!(report.violations, 0, "p={p} n={n}");
                assert!(report.first_violation.is_none());
            }
        }
    }

    #[test]
    fn reciprocity_detects_an_asymmetric_matrix() {
        let broken = LinkingMatrix::new_unchecked(vec![vec![0, 1], vec![2, 0]]);
        let report = reciprocity_check(&broken, 3, 100, 7);
        assert!(report.violations > 0);
        let (_, value) = report.first_violation.unwrap();
        assert!(value > 0 && value < 3);
    }

    #[test]
    fn reciprocity_report_is_deterministic() {
        let lk = synthetic_linking_model(15, 8, 3);
        let a = reciprocity_check(&lk, 5, 50, 11);
        let b = reciprocity_check(&lk, 5, 50, 11);
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    }

    #[test]
    fn unramified_line_is_its_own_complement() {
        for &p in &[2u64, 3, 5, 7] {
            assert!(unramified_orthogonality(p), "p = {p}");
        }
        // The identity pair pairs to zero with everything.
        for b in 0..5 {
            assert_eq!(local_pairing(LocalPair { a: 0, b: 0 }, LocalPair { a: 3, b }, 5), 0);
        }
    }

    #[test]
    fn residue_tables_tally_correctly() {
        let constant = linking_mod_distribution(&[4; 12], 3);
        assert_eq!(constant.counts, vec![0, 12, 0]);
        assert_eq!(constant.frequencies()[1], 1.0);

        // -1, -6, and 4 all sit on residue 4 mod 5.
        let negatives = linking_mod_distribution(&[-1, -6, 4], 5);
        assert_eq!(negatives.counts, vec![0, 0, 0, 0, 3]);

        let empty = linking_mod_distribution(&[], 4);
        assert_eq!(empty.frequencies(), vec![0.0; 4]);
        let csv = constant.to_csv();
        assert!(csv.starts_with("residue,count,frequency\n"));
        assert_eq!(csv.lines().count(), 4);
    }

    #[test]
    fn synthetic_uniform_residues_flatten_out() {
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        let values: Vec<i64> = (0..100_000).map(|_| rng.gen_range(0..5i64)).collect();
        let table = linking_mod_distribution(&values, 5);
        for f in table.frequencies() {
            assert!((f - 0.2).abs() < 0.02, "residue frequency {f} strayed from 0.2");
        }
    }

    #[test]
    fn rademacher_residues_mod_two_are_reported() {
        // Word-sum statistics of the modular family: #R - #L has the parity
        // of the word length, so the mod-2 table mirrors the length-parity
        // census — skewed toward the (even) top length block, not uniform.
        let geos = crate::orbitgen::modular_geodesics(14).unwrap();
        let values: Vec<i64> = geos.iter().map(crate::orbitgen::rademacher_class).collect();
        let table = linking_mod_distribution(&values, 2);
        let freqs = table.frequencies();
        assert_eq!(table.total, geos.len() as u64);
        assert!((freqs[0] + freqs[1] - 1.0).abs() < 1e-12);
        assert!(freqs[0] > 0.0 && freqs[1] > 0.0);
        assert!((freqs[0] - 0.5).abs() < 0.2, "even residue at {}", freqs[0]);
    }

    #[test]
    fn synthetic_model_is_deterministic_and_valid() {
        let a = synthetic_linking_model(20, 10, 5);
        let b = synthetic_linking_model(20, 10, 5);
        assert_eq!(a, b);
        assert_ne!(a, synthetic_linking_model(20, 10, 6));
        // Valid by construction: re-validating succeeds.
        assert!(LinkingMatrix::new(a.entries().to_vec()).is_ok());
        assert!(a
            .entries()
            .iter()
            .flatten()
            .all(|&v| (-10..=10).contains(&v)));
        assert_eq!(synthetic_linking_model(1, 10, 0), LinkingMatrix::zero(1));
    }

    #[test]
    fn experiment_batches_split_the_two_regimes() {
        let synthetic = synthetic_experiment_batch(10, 5, 3, 2, 20, 77).unwrap();
        assert_eq!(synthetic.trials, 20);
        assert_eq!(synthetic.records.len(), 20);
        assert!(synthetic.surjective >= 18, "got {}", synthetic.surjective);
        assert!(synthetic.zero_kernel >= 18, "got {}", synthetic.zero_kernel);
        assert_eq!(synthetic.scope, SCOPE_NOTE);
        for r in &synthetic.records {
            assert_eq!(r.s.len(), 2);
            assert_eq!(r.verdict == "surjective", r.rank == 4);
        }

        let unlink = unlink_control_batch(10, 3, 2, 20, 77).unwrap();
        assert_eq!(unlink.surjective, 0, "the unlink must never be surjective");
        assert!(unlink.records.iter().all(|r| r.verdict == "rank-deficient"));

        // Determinism: the same master seed reproduces the records.
        let again = synthetic_experiment_batch(10, 5, 3, 2, 20, 77).unwrap();
        assert_eq!(
            serde_json::to_string(&synthetic).unwrap(),
            serde_json::to_string(&again).unwrap()
        );

        assert!(matches!(
            synthetic_experiment_batch(4, 5, 3, 9, 5, 0),
            Err(Error::IndexOutOfRange { .. })
        ));
        assert!(matches!(
            synthetic_experiment_batch(4, 5, 6, 2, 5, 0),
            Err(Error::NotPrime { p: 6 })
        ));
    }

    #[test]
    fn experiment_records_serialize_with_capital_s() {
        let summary = synthetic_experiment_batch(6, 3, 2, 1, 3, 123).unwrap();
        let text = serde_json::to_string(&summary).unwrap();
        assert!(text.contains("\"S\":["));
        let back: ExperimentSummary = serde_json::from_str(&text).unwrap();
        assert_eq!(back, summary);
    }
}
