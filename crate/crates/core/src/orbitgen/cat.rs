//! Periodic orbits of a hyperbolic torus automorphism.
//!
//! For an integer matrix A with det 1 and |trace| > 2, the fixed points of
//! A^nu on R^2/Z^2 are the rational points (A^nu - I)^-1 Z^2 / Z^2; there are
//! exactly |det(A^nu - I)| of them. We enumerate them exactly through the
//! Smith normal form of M = A^nu - I: writing M = U diag(d1, d2) V, the
//! points are x = M^-1 U u for u in Z/d1 x Z/d2, and A acts on the u-grid by
//! the conjugated matrix U^-1 A U. Orbits of the map correspond to cycles of
//! that action; an orbit has minimal period nu exactly when its cycle length
//! is nu.

use crate::error::{Error, Result};
use crate::mat2::{smith_normal_form, unimodular_inverse, Mat2};

/// Refuse enumerations whose lattice would not fit comfortably in memory.
const MAX_CELLS: u128 = 1 << 28;

/// An exact rational point of the torus with 0 <= num < den componentwise.
/// All points of a fixed-point computation share the denominator
/// |det(A^nu - I)|, so tuples compare exactly.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct TorusPoint {
    pub num: [i64; 2],
    pub den: i64,
}

/// A primitive periodic orbit: the least period, the lexicographically
/// smallest orbit point (as the canonical lift into [0,1)^2), and the
/// integer translation picked up by that lift over one period,
/// A^period x = x + translation.
///
/// `Ord` (period first, then base point) is the knot ordering of the family.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct CatOrbit {
    pub period: u32,
    pub base: TorusPoint,
    pub translation: [i64; 2],
}

/// A full enumeration run: the acting matrix, all primitive orbits of
/// period <= the requested bound in the canonical order (period, then base
/// point), and the fixed-point count for each power.
#[derive(Debug, Clone)]
pub struct CatFamily {
    pub matrix: [[i64; 2]; 2],
    pub orbits: Vec<CatOrbit>,
    pub fixed_point_counts: Vec<i64>,
}

pub fn anosov_check(m: &Mat2) -> Result<()> {
    let det = m.det();
    if det != 1 {
        return Err(Error::NotUnimodular { det });
    }
    if m.trace().abs() <= 2 {
        return Err(Error::NotAnosov { trace: m.trace() });
    }
    Ok(())
}

/// Number of fixed points of A^nu, i.e. |det(A^nu - I)|.
pub fn cat_fixed_point_count(matrix: [[i64; 2]; 2], nu: u32) -> Result<i64> {
    let a = Mat2::from_rows(matrix);
    anosov_check(&a)?;
    Ok(a.pow(nu).sub(&Mat2::IDENTITY).det().abs())
}

/// All fixed points of A^nu on the torus, exactly.
pub fn cat_fixed_points(matrix: [[i64; 2]; 2], nu: u32) -> Result<Vec<TorusPoint>> {
    let a = Mat2::from_rows(matrix);
    anosov_check(&a)?;
    let m = a.pow(nu).sub(&Mat2::IDENTITY);
    let (u, d1, d2, _v) = smith_normal_form(&m);
    let det = m.det();
    let den = det.abs();
    if (d1 as u128) * (d2 as u128) > MAX_CELLS {
        return Err(Error::EnumerationTooLarge {
            cells: d1 as u128 * d2 as u128,
            bound: MAX_CELLS,
        });
    }
    // x = adj(M) U u / det, taken mod 1 with positive denominator |det|.
    let c = m.adjugate().mul(&u);
    let sign = det.signum() as i128;
    let mut points = Vec::with_capacity((d1 * d2) as usize);
    for u1 in 0..d1 {
        for u2 in 0..d2 {
            points.push(grid_point(&c, sign, den, u1, u2));
        }
    }
    debug_assert_eq!(points.len() as i64, den);
    Ok(points)
}

fn grid_point(c: &Mat2, sign: i128, den: i64, u1: i64, u2: i64) -> TorusPoint {
    let n1 = (sign * (c.a as i128 * u1 as i128 + c.b as i128 * u2 as i128))
        .rem_euclid(den as i128) as i64;
    let n2 = (sign * (c.c as i128 * u1 as i128 + c.d as i128 * u2 as i128))
        .rem_euclid(den as i128) as i64;
    TorusPoint { num: [n1, n2], den }
}

/// Enumerate all primitive orbits of period <= nu_max.
///
/// The orbit through the origin (the unique fixed point of A itself) is a
/// degenerate special case and is excluded unless `include_origin` is set.
pub fn cat_primitive_orbits(
    matrix: [[i64; 2]; 2],
    nu_max: u32,
    include_origin: bool,
) -> Result<CatFamily> {
    let a = Mat2::from_rows(matrix);
    anosov_check(&a)?;
    let mut orbits: Vec<CatOrbit> = Vec::new();
    let mut fixed_point_counts = Vec::with_capacity(nu_max as usize);
    for nu in 1..=nu_max {
        let m = a.pow(nu).sub(&Mat2::IDENTITY);
        let (u, d1, d2, _v) = smith_normal_form(&m);
        let det = m.det();
        let den = det.abs();
        fixed_point_counts.push(den);
        let cells = d1 as u128 * d2 as u128;
        if cells > MAX_CELLS {
            return Err(Error::EnumerationTooLarge { cells, bound: MAX_CELLS });
        }
        // A acts on the u-grid through B = U^-1 A U; the action descends to
        // Z/d1 x Z/d2 because B preserves diag(d1, d2) Z^2 (checked below),
        // so only the residues of B's entries matter.
        let b = unimodular_inverse(&u).mul(&a).mul(&u);
        assert_eq!(
            (b.c as i128 * d1 as i128).rem_euclid(d2 as i128),
            0,
            "conjugated action does not preserve the diagonal lattice"
        );
        let (ba, bb) = (b.a.rem_euclid(d1), b.b.rem_euclid(d1));
        let (bc, bd) = (b.c.rem_euclid(d2), b.d.rem_euclid(d2));
        let c = m.adjugate().mul(&u);
        let sign = det.signum() as i128;

        let idx = |u1: i64, u2: i64| (u1 * d2 + u2) as usize;
        let mut visited = vec![false; (d1 * d2) as usize];
        let mut cycle: Vec<(i64, i64)> = Vec::with_capacity(nu as usize);
        for s1 in 0..d1 {
            for s2 in 0..d2 {
                if visited[idx(s1, s2)] {
                    continue;
                }
                cycle.clear();
                let (mut u1, mut u2) = (s1, s2);
                loop {
                    visited[idx(u1, u2)] = true;
                    cycle.push((u1, u2));
                    let n1 = (ba * u1 + bb * u2).rem_euclid(d1);
                    let n2 = (bc * u1 + bd * u2).rem_euclid(d2);
                    u1 = n1;
                    u2 = n2;
                    if (u1, u2) == (s1, s2) {
                        break;
                    }
                }
                let len = cycle.len() as u32;
                debug_assert_eq!(nu % len, 0, "cycle length must divide the power");
                if len != nu {
                    continue; // lower-period point; counted at its own nu
                }
                if (s1, s2) == (0, 0) && !include_origin {
                    continue;
                }
                let base = cycle
                    .iter()
                    .map(|&(u1, u2)| grid_point(&c, sign, den, u1, u2))
                    .min()
                    .expect("cycle is nonempty");
                let translation = translation_of(&m, &base);
                orbits.push(CatOrbit { period: nu, base, translation });
            }
        }
    }
    orbits.sort();
    Ok(CatFamily { matrix, orbits, fixed_point_counts })
}

/// The integer vector (A^nu - I) x for a fixed point x of A^nu.
fn translation_of(m: &Mat2, x: &TorusPoint) -> [i64; 2] {
    let n1 = m.a as i128 * x.num[0] as i128 + m.b as i128 * x.num[1] as i128;
    let n2 = m.c as i128 * x.num[0] as i128 + m.d as i128 * x.num[1] as i128;
    let den = x.den as i128;
    assert!(n1 % den == 0 && n2 % den == 0, "translation must be integral");
    [(n1 / den) as i64, (n2 / den) as i64]
}
