//! Primitive closed geodesics on the modular surface.
//!
//! Hyperbolic conjugacy classes in the modular group are in bijection with
//! primitive cyclic words in the two parabolic generators
//!
//! ```text
//!     R = [1 1]        L = [1 0]
//!         [0 1],           [1 1],
//! ```
//!
//! every class having a unique expression `R^{a1} L^{b1} ... R^{ak} L^{bk}`
//! (all exponents >= 1) up to cyclic rotation of the factor pairs.  We
//! enumerate one representative per class by listing Lyndon words over the
//! alphabet {R, L} with R < L: a Lyndon word is the strict lexicographic
//! minimum among its rotations, so it is automatically aperiodic, and for
//! length >= 2 it starts with R and ends with L, which is exactly the run
//! structure above.  Single-letter words are excluded — `R` and `L` have
//! trace 2 and are parabolic, not geodesics.
//!
//! The trace of the product matrix determines the geometric length of the
//! geodesic (see [`geodesic_length`](super::geodesic_length)); the word
//! length (total letter count) is the combinatorial size we sweep over.

use crate::error::{Error, Result};

/// Enumerating all classes of word length `n` touches on the order of `2^n`
/// words; past this bound the sweep stops being interactive.
pub const MAX_WORD_LENGTH: u32 = 28;

/// One primitive hyperbolic class, stored as its exponent word.
///
/// `exponents = [a1, b1, a2, b2, ...]` encodes `R^{a1} L^{b1} R^{a2} ...`;
/// the vector always has even length with every entry >= 1, and among all
/// rotations of the underlying letter word this one is lexicographically
/// least (with R < L).
///
/// The `Ord` instance is the knot ordering used throughout: word length,
/// then trace, then the letter word itself — so `RL < RRL < RLL`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GeodesicClass {
    /// Alternating R/L run lengths, starting with an R run.
    pub exponents: Vec<u32>,
    /// Trace of the product matrix; always >= 3 for these classes.
    pub trace: i64,
}

impl Ord for GeodesicClass {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.word_length(), self.trace)
            .cmp(&(other.word_length(), other.trace))
            .then_with(|| self.letter_bits().cmp(&other.letter_bits()))
    }
}

impl PartialOrd for GeodesicClass {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl GeodesicClass {
    /// Total number of letters in the word.
    pub fn word_length(&self) -> u32 {
        self.exponents.iter().sum()
    }

    /// The word spelled out, e.g. `"RRL"` for `R^2 L`.
    pub fn letters(&self) -> String {
        let mut s = String::with_capacity(self.word_length() as usize);
        for (i, &e) in self.exponents.iter().enumerate() {
            let c = if i % 2 == 0 { 'R' } else { 'L' };
            for _ in 0..e {
                s.push(c);
            }
        }
        s
    }

    /// The word as bits with R = 0 < L = 1; the comparison key for rotations.
    fn letter_bits(&self) -> Vec<u8> {
        let mut bits = Vec::with_capacity(self.word_length() as usize);
        for (i, &e) in self.exponents.iter().enumerate() {
            for _ in 0..e {
                bits.push((i % 2) as u8);
            }
        }
        bits
    }

    /// Product of the generator matrices in word order.
    pub fn matrix(&self) -> [[i64; 2]; 2] {
        let mut m = [[1i64, 0], [0, 1]];
        for (i, &e) in self.exponents.iter().enumerate() {
            let e = e as i64;
            // R^a = [[1, a], [0, 1]], L^b = [[1, 0], [b, 1]].
            let f = if i % 2 == 0 { [[1, e], [0, 1]] } else { [[1, 0], [e, 1]] };
            m = mat_mul(m, f);
        }
        m
    }

    /// Geometric length 2·arccosh(trace/2).
    pub fn geo_length(&self) -> f64 {
        super::geodesic_length(self.trace)
    }
}

fn mat_mul(x: [[i64; 2]; 2], y: [[i64; 2]; 2]) -> [[i64; 2]; 2] {
    let mut z = [[0i64; 2]; 2];
    for r in 0..2 {
        for c in 0..2 {
            z[r][c] = x[r][0]
                .checked_mul(y[0][c])
                .and_then(|t| t.checked_add(x[r][1].checked_mul(y[1][c])?))
                .expect("geodesic matrix entries stay well inside i64 at these word lengths");
        }
    }
    z
}

/// All primitive classes of word length in `2..=max_word_length`, sorted by
/// `(word length, trace, exponents)`.
///
/// The listing is complete and duplicate-free: Duval's algorithm yields every
/// Lyndon word up to the length bound exactly once, and distinct Lyndon words
/// are distinct classes.
pub fn modular_geodesics(max_word_length: u32) -> Result<Vec<GeodesicClass>> {
    if max_word_length > MAX_WORD_LENGTH {
        return Err(Error::EnumerationTooLarge {
            cells: 1u128 << max_word_length,
            bound: 1u128 << MAX_WORD_LENGTH,
        });
    }
    let mut out = Vec::new();
    for word in lyndon_words(max_word_length as usize) {
        if word.len() < 2 {
            continue; // single letters are parabolic
        }
        let exponents = run_lengths(&word);
        let trace = trace_of_runs(&exponents);
        out.push(GeodesicClass { exponents, trace });
    }
    out.sort();
    Ok(out)
}

/// Parse a letter word like `"RRL"` into its class: rotate to the
/// lexicographically least cyclic form (with R < L), then run-length
/// encode.  Case and whitespace are forgiven.  Words that use only one
/// letter or are proper powers of a shorter cyclic word are rejected —
/// they are not primitive hyperbolic classes.
pub fn parse_word(word: &str) -> Result<GeodesicClass> {
    let mut bits: Vec<u8> = Vec::with_capacity(word.len());
    for ch in word.chars() {
        match ch.to_ascii_uppercase() {
            'R' => bits.push(0),
            'L' => bits.push(1),
            c if c.is_whitespace() => {}
            c => {
                return Err(Error::BadRecord { reason: format!("unexpected letter {c:?} in word") })
            }
        }
    }
    let n = bits.len();
    if n < 2 || !bits.contains(&0) || !bits.contains(&1) {
        return Err(Error::BadRecord {
            reason: "a word must contain both R and L".to_string(),
        });
    }
    let rotations: Vec<Vec<u8>> = (0..n)
        .map(|r| (0..n).map(|i| bits[(i + r) % n]).collect())
        .collect();
    let canon = rotations.iter().min().expect("word is nonempty").clone();
    if rotations.iter().filter(|w| **w == canon).count() > 1 {
        return Err(Error::BadRecord {
            reason: "word is a proper power of a shorter cyclic word".to_string(),
        });
    }
    let exponents = run_lengths(&canon);
    let trace = trace_of_runs(&exponents);
    Ok(GeodesicClass { exponents, trace })
}

/// Duval's algorithm: every Lyndon word over {0, 1} of length <= `n`, in
/// lexicographic order.  0 stands for R and 1 for L.
fn lyndon_words(n: usize) -> Vec<Vec<u8>> {
    let mut out = Vec::new();
    if n == 0 {
        return out;
    }
    let mut w: Vec<u8> = vec![0];
    loop {
        out.push(w.clone());
        let m = w.len();
        while w.len() < n {
            let next = w[w.len() - m];
            w.push(next);
        }
        while w.last() == Some(&1) {
            w.pop();
        }
        match w.last_mut() {
            Some(last) => *last += 1,
            None => return out,
        }
    }
}

/// Run-length encode a word that starts with 0 and ends with 1.
fn run_lengths(word: &[u8]) -> Vec<u32> {
    debug_assert_eq!(word.first(), Some(&0));
    debug_assert_eq!(word.last(), Some(&1));
    let mut runs = Vec::new();
    let mut current = word[0];
    let mut count = 0u32;
    for &c in word {
        if c == current {
            count += 1;
        } else {
            runs.push(count);
            current = c;
            count = 1;
        }
    }
    runs.push(count);
    runs
}

/// Trace of `R^{a1} L^{b1} ...` via the closed form for one RL block:
/// `R^a L^b = [[1 + ab, a], [b, 1]]`.
fn trace_of_runs(exponents: &[u32]) -> i64 {
    let mut m = [[1i64, 0], [0, 1]];
    for pair in exponents.chunks(2) {
        let (a, b) = (pair[0] as i64, pair[1] as i64);
        m = mat_mul(m, [[1 + a * b, a], [b, 1]]);
    }
    m[0][0] + m[1][1]
}
