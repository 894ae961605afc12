//! The two planetary knot families and their shared plumbing.
//!
//! A "knot" is either a primitive periodic orbit of a hyperbolic torus
//! automorphism ([`cat`]) or a primitive closed geodesic on the modular
//! surface ([`modular`]).  Both live inside a 3-manifold fibering over the
//! circle, and each carries a conjugacy class in the fundamental group:
//! `(translation, period)` inside `Z^2 x| Z` for orbits, the R/L word inside
//! the modular group for geodesics.  This module supplies what the counting
//! layers need on top of the raw enumerations:
//!
//! * a deterministic total order on each family ([`order_knots`]),
//! * length assignments — the bookkeeping prime-number scheme and the
//!   geometric one ([`assign_lengths`]),
//! * Frobenius classes: images of the knot's conjugacy class in a finite
//!   quotient ([`cat_frobenius`], [`modular_frobenius`], [`frobenius_class`]),
//! * the Rademacher word sum used by the linking experiments,
//! * a JSON-lines dataset format so enumerations can be exported and fed
//!   back into density runs ([`records_to_json_lines`]).

mod cat;
mod modular;

pub use cat::{
    cat_fixed_point_count, cat_fixed_points, cat_primitive_orbits, CatFamily, CatOrbit,
    TorusPoint,
};
pub use modular::{modular_geodesics, parse_word, GeodesicClass, MAX_WORD_LENGTH};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fingroup::{semidirect_image, ConjClass, FiniteGroup, QuotientMap, SourceModel};
use crate::mat2::Mat2;

/// How knots get their lengths.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LengthScheme {
    /// The i-th knot (in canonical order) gets ln(p_i), p_i the i-th prime.
    /// Norms are then exactly the primes, so the family's counting functions
    /// mirror the classical ones by construction.
    PrimeNumber,
    /// The intrinsic length: geodesic length 2·arccosh(trace/2) for modular
    /// classes, period times the expansion exponent for torus orbits.
    Geometric,
}

/// Lengths and norms `N(K_i) = e^(l(K_i))` for an ordered knot family,
/// indexed by position.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LengthAssignment {
    pub scheme: LengthScheme,
    pub lengths: Vec<f64>,
    pub norms: Vec<f64>,
}

/// A uniform, ordered view of either knot family.
#[derive(Debug, Clone)]
pub enum KnotFamily {
    Cat(CatFamily),
    Modular(Vec<GeodesicClass>),
}

impl KnotFamily {
    pub fn len(&self) -> usize {
        match self {
            KnotFamily::Cat(fam) => fam.orbits.len(),
            KnotFamily::Modular(geos) => geos.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Sort knots into the canonical family order.  The `Ord` instances of
/// [`CatOrbit`] (period, then base point) and [`GeodesicClass`] (word
/// length, then trace, then letter word) implement exactly this order, and
/// both enumerators already emit it; this is for streams that arrive
/// shuffled, e.g. merged concurrent partitions.
pub fn order_knots<T: Ord>(knots: &mut [T]) {
    knots.sort();
}

/// ln of the larger eigenvalue of an integer matrix with det 1 and
/// |trace| > 2; the growth rate that makes `period * expansion_exponent`
/// the natural orbit length.
pub fn expansion_exponent(matrix: [[i64; 2]; 2]) -> Result<f64> {
    let a = Mat2::from_rows(matrix);
    cat::anosov_check(&a)?;
    Ok((a.trace().abs() as f64 / 2.0).acosh())
}

/// Geometric length of a closed geodesic from its trace: 2·arccosh(t/2).
/// Meaningful for t >= 2; every enumerated class has t >= 3.
pub fn geodesic_length(trace: i64) -> f64 {
    2.0 * (trace as f64 / 2.0).acosh()
}

/// The first `n` primes, smallest first.
pub fn first_n_primes(n: usize) -> Vec<u64> {
    if n == 0 {
        return Vec::new();
    }
    // p_n < n(ln n + ln ln n) for n >= 6; smaller n use a fixed floor.
    let mut bound = if n < 6 {
        16
    } else {
        let x = n as f64;
        (x * (x.ln() + x.ln().ln())).ceil() as usize + 8
    };
    loop {
        let mut composite = vec![false; bound + 1];
        let mut primes = Vec::with_capacity(n);
        for p in 2..=bound {
            if composite[p] {
                continue;
            }
            primes.push(p as u64);
            if primes.len() == n {
                return primes;
            }
            let mut q = p * p;
            while q <= bound {
                composite[q] = true;
                q += p;
            }
        }
        bound *= 2;
    }
}

/// Assign lengths to an ordered family under the given scheme.
pub fn assign_lengths(family: &KnotFamily, scheme: LengthScheme) -> LengthAssignment {
    let lengths: Vec<f64> = match scheme {
        LengthScheme::PrimeNumber => first_n_primes(family.len())
            .iter()
            .map(|&p| (p as f64).ln())
            .collect(),
        LengthScheme::Geometric => match family {
            KnotFamily::Cat(fam) => {
                let rate = expansion_exponent(fam.matrix)
                    .expect("an enumerated family always has an admissible matrix");
                fam.orbits.iter().map(|o| o.period as f64 * rate).collect()
            }
            KnotFamily::Modular(geos) => geos.iter().map(|g| g.geo_length()).collect(),
        },
    };
    let norms: Vec<f64> = match scheme {
        // Write the primes down exactly rather than exponentiating back.
        LengthScheme::PrimeNumber => {
            first_n_primes(family.len()).iter().map(|&p| p as f64).collect()
        }
        LengthScheme::Geometric => lengths.iter().map(|&l| l.exp()).collect(),
    };
    LengthAssignment { scheme, lengths, norms }
}

/// Image in a finite quotient of the group element attached to a torus
/// orbit: `x^v1 y^v2 t^period` for translation `v`.  The map must be a
/// `SemidirectZ2Z` quotient.
pub fn cat_frobenius(orbit: &CatOrbit, q: &QuotientMap) -> Result<u16> {
    semidirect_image(q, orbit.translation, orbit.period as i64)
}

/// Image of a geodesic word under explicit images of R and L.
pub fn modular_frobenius_images(geo: &GeodesicClass, g: &FiniteGroup, r: u16, l: u16) -> u16 {
    let mut acc = g.identity();
    for (i, &e) in geo.exponents.iter().enumerate() {
        let letter = if i % 2 == 0 { r } else { l };
        acc = g.mul(acc, g.pow(letter, e as i64));
    }
    acc
}

/// Image of a geodesic under a `FreeProdZ2Z3` quotient with images (s, u):
/// R maps to s·u and L to s·u², matching reduction of the generator
/// matrices in the projective convention.
pub fn modular_frobenius(geo: &GeodesicClass, q: &QuotientMap) -> Result<u16> {
    if q.source_model != SourceModel::FreeProdZ2Z3 {
        return Err(Error::ModelMismatch);
    }
    let g = &*q.target;
    let (s, u) = (q.generator_images[0], q.generator_images[1]);
    let r = g.mul(s, u);
    let l = g.mul(s, g.mul(u, u));
    Ok(modular_frobenius_images(geo, g, r, l))
}

/// The conjugacy class of an element: the Frobenius class once the element
/// is a knot image.  One-off convenience; batch callers should use
/// [`FiniteGroup::class_map`] through the `*_class_tags` functions.
pub fn frobenius_class(element: u16, g: &FiniteGroup) -> ConjClass {
    g.conjugacy_classes()
        .into_iter()
        .find(|c| c.contains(element))
        .expect("every element lies in some conjugacy class")
}

/// Class index (into `conjugacy_classes()`) of every orbit in one pass.
pub fn cat_class_tags(orbits: &[CatOrbit], q: &QuotientMap) -> Result<Vec<usize>> {
    let cmap = q.target.class_map();
    orbits
        .iter()
        .map(|o| cat_frobenius(o, q).map(|el| cmap[el as usize] as usize))
        .collect()
}

/// Class index of every geodesic in one pass.
pub fn modular_class_tags(geos: &[GeodesicClass], q: &QuotientMap) -> Result<Vec<usize>> {
    let cmap = q.target.class_map();
    geos.iter()
        .map(|g| modular_frobenius(g, q).map(|el| cmap[el as usize] as usize))
        .collect()
}

/// Class tags through reduction of the word matrices mod m, together with
/// the reduced matrix group SL(2, Z/m).
pub fn modular_class_tags_mod(
    geos: &[GeodesicClass],
    modulus: u64,
) -> (FiniteGroup, Vec<usize>) {
    let (g, r, l) = crate::library::sl2(modulus);
    let cmap = g.class_map();
    let tags = geos
        .iter()
        .map(|geo| cmap[modular_frobenius_images(geo, &g, r, l) as usize] as usize)
        .collect();
    (g, tags)
}

/// Rademacher word sum: number of R letters minus number of L letters.
/// Defined for any nonempty R/L word, canonical or not.
pub fn rademacher(word: &str) -> Result<i64> {
    let mut total = 0i64;
    let mut seen = false;
    for ch in word.chars() {
        match ch.to_ascii_uppercase() {
            'R' => {
                total += 1;
                seen = true;
            }
            'L' => {
                total -= 1;
                seen = true;
            }
            c if c.is_whitespace() => {}
            c => {
                return Err(Error::BadRecord { reason: format!("unexpected letter {c:?} in word") })
            }
        }
    }
    if !seen {
        return Err(Error::BadRecord { reason: "empty word".to_string() });
    }
    Ok(total)
}

/// The same sum read off an exponent word: R runs count +, L runs count -.
pub fn rademacher_class(geo: &GeodesicClass) -> i64 {
    geo.exponents
        .iter()
        .enumerate()
        .map(|(i, &e)| if i % 2 == 0 { e as i64 } else { -(e as i64) })
        .sum()
}

/// Which family a dataset record belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Cat,
    Modular,
}

/// Period of an orbit or letter word of a geodesic.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PeriodOrWord {
    Period(u32),
    Word(String),
}

/// Translation vector of an orbit or trace of a geodesic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TranslationOrTrace {
    Translation([i64; 2]),
    Trace(i64),
}

/// One knot as a dataset row.  Serialized as one JSON object per line;
/// `index` is the position in the canonical order and both length schemes
/// are precomputed so density runs on imported data need no enumeration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrbitRecord {
    pub family: Family,
    pub index: u64,
    pub period_or_word: PeriodOrWord,
    pub translation_or_trace: TranslationOrTrace,
    pub length_prime: f64,
    pub length_geometric: f64,
}

/// Dataset rows for an enumerated torus-orbit family.
pub fn cat_records(family: &CatFamily) -> Vec<OrbitRecord> {
    let rate = expansion_exponent(family.matrix)
        .expect("an enumerated family always has an admissible matrix");
    let primes = first_n_primes(family.orbits.len());
    family
        .orbits
        .iter()
        .enumerate()
        .map(|(i, o)| OrbitRecord {
            family: Family::Cat,
            index: i as u64,
            period_or_word: PeriodOrWord::Period(o.period),
            translation_or_trace: TranslationOrTrace::Translation(o.translation),
            length_prime: (primes[i] as f64).ln(),
            length_geometric: o.period as f64 * rate,
        })
        .collect()
}

/// Dataset rows for an enumerated geodesic family.
pub fn modular_records(geos: &[GeodesicClass]) -> Vec<OrbitRecord> {
    let primes = first_n_primes(geos.len());
    geos.iter()
        .enumerate()
        .map(|(i, g)| OrbitRecord {
            family: Family::Modular,
            index: i as u64,
            period_or_word: PeriodOrWord::Word(g.letters()),
            translation_or_trace: TranslationOrTrace::Trace(g.trace),
            length_prime: (primes[i] as f64).ln(),
            length_geometric: g.geo_length(),
        })
        .collect()
}

/// Serialize records as JSON lines, one object per row, stable field order.
pub fn records_to_json_lines(records: &[OrbitRecord]) -> String {
    let mut out = String::new();
    for r in records {
        out.push_str(&serde_json::to_string(r).expect("records always serialize"));
        out.push('\n');
    }
    out
}

/// Parse a JSON-lines dataset.  Blank lines are skipped; anything else that
/// fails to parse reports its line number.
pub fn records_from_json_lines(text: &str) -> Result<Vec<OrbitRecord>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let rec: OrbitRecord = serde_json::from_str(line)
            .map_err(|e| Error::BadRecord { reason: format!("line {}: {e}", i + 1) })?;
        out.push(rec);
    }
    if out.is_empty() {
        return Err(Error::DatasetEmpty);
    }
    Ok(out)
}

/// Frobenius image of one dataset record; the record's family must match
/// the map's source model.
pub fn record_frobenius(rec: &OrbitRecord, q: &QuotientMap) -> Result<u16> {
    match (rec.family, &rec.period_or_word, &rec.translation_or_trace) {
        (Family::Cat, PeriodOrWord::Period(nu), TranslationOrTrace::Translation(v)) => {
            semidirect_image(q, *v, *nu as i64)
        }
        (Family::Modular, PeriodOrWord::Word(w), TranslationOrTrace::Trace(t)) => {
            let geo = parse_word(w)?;
            if geo.trace != *t {
                return Err(Error::BadRecord {
                    reason: format!("stored trace {t} does not match word {w}"),
                });
            }
            modular_frobenius(&geo, q)
        }
        _ => Err(Error::BadRecord {
            reason: "family tag does not match the payload fields".to_string(),
        }),
    }
}

/// Class index of every record in one pass.
pub fn record_class_tags(records: &[OrbitRecord], q: &QuotientMap) -> Result<Vec<usize>> {
    let cmap = q.target.class_map();
    records
        .iter()
        .map(|r| record_frobenius(r, q).map(|el| cmap[el as usize] as usize))
        .collect()
}
