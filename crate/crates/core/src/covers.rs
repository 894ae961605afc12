//! Hilbert ramification theory over finite quotient data.
//!
//! A finite branched cover of a knot complement is described, through the
//! Galois correspondence, by a finite group G together with the images of
//! the knot's peripheral pair: the meridian mu (generating inertia) and the
//! longitude lambda (whose class is the Frobenius when the knot is
//! unramified).  The two images commute because the peripheral torus has
//! abelian fundamental group — which makes the whole decomposition theory
//! here a matter of cyclic and two-generator abelian subgroups:
//!
//! * inertia I = <mu>, decomposition D = <mu, lambda>,
//! * branch index e = |I|, residue degree f = |D|/|I|, components
//!   g = |G|/|D|, so e·f·g = |G|,
//! * non-Galois subcovers for a subgroup H: the D-orbits on G/H with
//!   per-component (e_i, f_i) read off the I-suborbits,
//! * composita, totally-split class sets, a rigidity sweep over the group
//!   library, and the exact multiplicativity of f in towers.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fingroup::{ConjClass, FiniteGroup};
use crate::orbitgen::frobenius_class;

/// Meridian and longitude images in a finite group; the knot-side datum
/// from which all splitting behavior follows.
#[derive(Debug, Clone)]
pub struct PeripheralImage {
    pub mu: u16,
    pub lambda: u16,
    pub target: Arc<FiniteGroup>,
}

impl PeripheralImage {
    /// Validates that the two images commute.
    pub fn new(mu: u16, lambda: u16, target: Arc<FiniteGroup>) -> Result<Self> {
        if target.mul(mu, lambda) != target.mul(lambda, mu) {
            return Err(Error::NoncommutingPeripheral);
        }
        Ok(PeripheralImage { mu, lambda, target })
    }
}

/// Splitting of one knot in the Galois cover described by the full group.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplittingData {
    /// Branch index |I|.
    pub e: usize,
    /// Residue degree |D|/|I|.
    pub f: usize,
    /// Number of components over the knot, |G|/|D|.
    pub g: usize,
    /// Decomposition subgroup <mu, lambda>, sorted.
    pub decomposition: Vec<u16>,
    /// Inertia subgroup <mu>, sorted.
    pub inertia: Vec<u16>,
    /// Class of lambda — defined only for unramified knots (e = 1).
    pub frobenius: Option<ConjClass>,
}

/// Decomposition data of a knot in the Galois cover.
pub fn splitting_data(p: &PeripheralImage) -> SplittingData {
    let g = &*p.target;
    let inertia = g.subgroup_generated(&[p.mu]);
    let decomposition = g.subgroup_generated(&[p.mu, p.lambda]);
    let e = inertia.len();
    let f = decomposition.len() / e;
    let components = g.order() / decomposition.len();
    let frobenius = (e == 1).then(|| frobenius_class(p.lambda, g));
    SplittingData { e, f, g: components, decomposition, inertia, frobenius }
}

/// One component of a subcover: the D-orbit on G/H through `representative`
/// (the smallest element of the smallest coset in the orbit), with its
/// branch index and residue degree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Component {
    pub representative: u16,
    pub e: usize,
    pub f: usize,
    /// Orbit size e·f, the component's covering degree over the knot.
    pub size: usize,
}

/// Splitting of the knot in the intermediate (generally non-Galois) cover
/// belonging to the subgroup `h`: one entry per D-orbit on G/H, ordered by
/// representative.  The sizes always sum to [G : H].
pub fn subcover_components(p: &PeripheralImage, h: &[u16]) -> Result<Vec<Component>> {
    let g = &*p.target;
    if !g.is_subgroup(h) {
        return Err(Error::NotASubgroup);
    }
    // Label every element with the least element of its left coset xH.
    // Scanning upward means the first unseen element is its coset's label.
    let order = g.order();
    let mut rep_of = vec![u16::MAX; order];
    let mut reps: Vec<u16> = Vec::with_capacity(order / h.len());
    for x in 0..order as u16 {
        if rep_of[x as usize] != u16::MAX {
            continue;
        }
        reps.push(x);
        for &hh in h {
            rep_of[g.mul(x, hh) as usize] = x;
        }
    }
    let inertia = g.subgroup_generated(&[p.mu]);
    let decomposition = g.subgroup_generated(&[p.mu, p.lambda]);
    // D-orbits on the cosets; D is abelian (mu and lambda commute), so the
    // I-orbit size is the same at every point of a D-orbit.
    let mut seen = vec![false; order];
    let mut components = Vec::new();
    for &c in &reps {
        if seen[rep_of[c as usize] as usize] {
            continue;
        }
        let mut orbit: Vec<u16> =
            decomposition.iter().map(|&d| rep_of[g.mul(d, c) as usize]).collect();
        orbit.sort_unstable();
        orbit.dedup();
        for &m in &orbit {
            seen[m as usize] = true;
        }
        let mut i_orbit: Vec<u16> =
            inertia.iter().map(|&i| rep_of[g.mul(i, c) as usize]).collect();
        i_orbit.sort_unstable();
        i_orbit.dedup();
        let e = i_orbit.len();
        components.push(Component {
            representative: orbit[0],
            e,
            f: orbit.len() / e,
            size: orbit.len(),
        });
    }
    components.sort_by_key(|c| c.representative);
    Ok(components)
}

/// A knot splits completely (into |G| unramified components with trivial
/// Frobenius) exactly when both peripheral images are trivial.
pub fn is_totally_split(p: &PeripheralImage) -> bool {
    let e = p.target.identity();
    p.mu == e && p.lambda == e
}

/// The two length conventions for components of a cover.  They agree on
/// unramified knots (|D| = f when e = 1) and diverge on ramified ones;
/// both are reported rather than picking a side.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LengthConvention {
    /// l' = |D| · l.
    DecompOrder,
    /// l' = f · l.
    CoveringDegree,
}

/// Length of a component over a knot of length `l_base`.
pub fn induced_length(l_base: f64, data: &SplittingData, convention: LengthConvention) -> f64 {
    match convention {
        LengthConvention::DecompOrder => (data.e * data.f) as f64 * l_base,
        LengthConvention::CoveringDegree => data.f as f64 * l_base,
    }
}

fn sorted_intersection(a: &[u16], b: &[u16]) -> Vec<u16> {
    a.iter().filter(|x| b.binary_search(x).is_ok()).copied().collect()
}

/// The subgroup describing the compositum of the two covers given by normal
/// subgroups N1 and N2: their intersection (larger cover, smaller group).
pub fn compositum(g: &FiniteGroup, n1: &[u16], n2: &[u16]) -> Result<Vec<u16>> {
    if !g.is_normal(n1) || !g.is_normal(n2) {
        return Err(Error::NotNormal);
    }
    Ok(sorted_intersection(n1, n2))
}

/// The conjugacy classes whose knots split totally in the cover G/N: the
/// classes contained in N.
pub fn split_class_set(g: &FiniteGroup, n: &[u16]) -> Result<Vec<ConjClass>> {
    if !g.is_normal(n) {
        return Err(Error::NotNormal);
    }
    Ok(g.conjugacy_classes()
        .into_iter()
        .filter(|c| c.members.iter().all(|m| n.binary_search(m).is_ok()))
        .collect())
}

/// One compared pair in a rigidity sweep.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepRow {
    pub group: String,
    /// Indices into the group's normal-subgroup list, ordered by (size, set).
    pub first: usize,
    pub second: usize,
    pub first_size: usize,
    pub second_size: usize,
    /// Whether the two split-class sets differ (they always should).
    pub distinguished: bool,
}

/// Outcome of [`split_rigidity_sweep`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepReport {
    pub rows: Vec<SweepRow>,
    pub counterexamples: usize,
}

impl SweepReport {
    pub fn to_csv(&self) -> String {
        let mut out =
            String::from("group,first,second,first_size,second_size,distinguished\n");
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                r.group, r.first, r.second, r.first_size, r.second_size, r.distinguished
            ));
        }
        out
    }
}

/// For every library group up to `order_bound` and every pair of distinct
/// normal subgroups, check that their split-class sets differ — i.e. that a
/// cover is pinned down by which knot classes split totally in it.  Since a
/// normal subgroup is the union of its split classes, counterexamples are
/// expected to be impossible; the sweep verifies that reasoning
/// exhaustively.
pub fn split_rigidity_sweep(order_bound: usize) -> Result<SweepReport> {
    const SWEEP_BOUND: usize = 64;
    if order_bound > SWEEP_BOUND {
        return Err(Error::GroupTooLarge { order: order_bound, bound: SWEEP_BOUND });
    }
    let mut rows = Vec::new();
    let mut counterexamples = 0;
    for g in crate::library::library(order_bound) {
        let normals = g.normal_subgroups(SWEEP_BOUND)?;
        let class_sets: Vec<Vec<ConjClass>> = normals
            .iter()
            .map(|n| split_class_set(&g, n).expect("lattice members are normal"))
            .collect();
        for i in 0..normals.len() {
            for j in i + 1..normals.len() {
                let distinguished = class_sets[i] != class_sets[j];
                if !distinguished {
                    counterexamples += 1;
                }
                rows.push(SweepRow {
                    group: g.label().to_string(),
                    first: i,
                    second: j,
                    first_size: normals[i].len(),
                    second_size: normals[j].len(),
                    distinguished,
                });
            }
        }
    }
    Ok(SweepReport { rows, counterexamples })
}

/// The three residue degrees of a two-step tower.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FMultiplicativity {
    /// f of the knot in the full cover (group G).
    pub f_total: usize,
    /// f of the component over the intermediate cover (group N, computed
    /// from D ∩ N and I ∩ N).
    pub f_upper: usize,
    /// f of the knot in the intermediate cover (group G/N).
    pub f_lower: usize,
    pub holds: bool,
}

/// Verify f_total = f_upper · f_lower for the tower G -> G/N over one
/// peripheral image.  This is an exact index computation, no tolerance.
pub fn multiplicativity_check(p: &PeripheralImage, n: &[u16]) -> Result<FMultiplicativity> {
    let g = &*p.target;
    let (quot, proj) = g.quotient(n)?;
    let decomposition = g.subgroup_generated(&[p.mu, p.lambda]);
    let inertia = g.subgroup_generated(&[p.mu]);
    let f_total = decomposition.len() / inertia.len();
    let f_upper = sorted_intersection(&decomposition, n).len()
        / sorted_intersection(&inertia, n).len();
    let lower = PeripheralImage::new(
        proj[p.mu as usize],
        proj[p.lambda as usize],
        Arc::new(quot),
    )
    .expect("homomorphic images of commuting elements commute");
    let ld = splitting_data(&lower);
    let f_lower = ld.f;
    Ok(FMultiplicativity { f_total, f_upper, f_lower, holds: f_total == f_upper * f_lower })
}
