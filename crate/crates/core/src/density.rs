//! Counting functions and density estimators for ordered knot families.
//!
//! Once a family is enumerated, ordered, tagged with conjugacy classes, and
//! given lengths, everything here is arithmetic over the triple
//! `(lengths, norms, tags)`:
//!
//! * running natural-density series f(v) = #{j <= v : class = C} / v,
//! * prime-counting analogues pi and psi built from the norms,
//! * finite zeta partial products and their per-class relative versions,
//! * Dirichlet-density ratios on an s-grid with extrapolation to s = 1,
//! * a side-by-side natural-vs-Dirichlet comparison report.
//!
//! Everything is a finite truncation of a limit statement, so the guiding
//! rules are: exact arithmetic where the data is exact (integer norms,
//! class counts), compensated summation for the 1e4-1e6 term float sums,
//! and diagnostics (truncation sensitivity) instead of pretending a limit
//! was reached.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fingroup::FiniteGroup;
use crate::orbitgen::LengthAssignment;

/// Neumaier's compensated accumulator: tracks the rounding error of every
/// add in a second register, so sums of 10^6 terms stay at a few ulps.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

fn check_s(s: f64) -> Result<()> {
    if !(s > 1.0) {
        return Err(Error::SOutOfRange { s });
    }
    Ok(())
}

/// Running frequency series f(v) = #{skip < j <= v : tag = class} / v for
/// v = 1..=len, over a stream already in the canonical knot order.
pub fn natural_density(tags: &[usize], class: usize, skip_first: usize) -> Result<Vec<f64>> {
    if tags.is_empty() {
        return Err(Error::EmptyStream);
    }
    let mut series = Vec::with_capacity(tags.len());
    let mut count = 0usize;
    for (j, &t) in tags.iter().enumerate() {
        if j >= skip_first && t == class {
            count += 1;
        }
        series.push(count as f64 / (j + 1) as f64);
    }
    Ok(series)
}

/// The prime-counting analogues of a tagged, length-assigned family.
///
/// pi(x) counts knots of norm <= x; psi(x) adds length-weighted terms for
/// every power: psi(x) = sum over knots i and n >= 1 with N_i^n <= x of
/// l(K_i).  Integer norms (the prime scheme) are compared against x in
/// exact integer arithmetic, so boundary cases like x = 2^k come out exact.
#[derive(Debug, Clone)]
pub struct CountingFunctions {
    /// (norm, length, class tag), sorted by norm.
    entries: Vec<(f64, f64, usize)>,
}

impl CountingFunctions {
    pub fn new(assignment: &LengthAssignment, tags: &[usize]) -> Self {
        assert_eq!(
            assignment.norms.len(),
            tags.len(),
            "one class tag per knot"
        );
        let mut entries: Vec<(f64, f64, usize)> = assignment
            .norms
            .iter()
            .zip(&assignment.lengths)
            .zip(tags)
            .map(|((&n, &l), &t)| (n, l, t))
            .collect();
        entries.sort_by(|a, b| a.partial_cmp(b).expect("norms are finite"));
        CountingFunctions { entries }
    }

    /// #{i : N_i <= x}.
    pub fn pi(&self, x: f64) -> usize {
        self.entries.partition_point(|e| e.0 <= x)
    }

    /// #{i : N_i <= x, tag_i = class}.
    pub fn pi_class(&self, x: f64, class: usize) -> usize {
        self.entries[..self.pi(x)].iter().filter(|e| e.2 == class).count()
    }

    pub fn psi(&self, x: f64) -> f64 {
        let mut acc = CompensatedSum::new();
        for &(n, l, _) in &self.entries {
            acc.add(l * count_powers(n, l, x) as f64);
        }
        acc.value()
    }

    pub fn psi_class(&self, x: f64, class: usize) -> f64 {
        let mut acc = CompensatedSum::new();
        for &(n, l, t) in &self.entries {
            if t == class {
                acc.add(l * count_powers(n, l, x) as f64);
            }
        }
        acc.value()
    }
}

/// #{n >= 1 : norm^n <= x}.  Exact integer comparison when the norm is an
/// integer (prime scheme); otherwise by logarithms with a one-ulp-scale
/// guard, which only matters on exact power boundaries that float norms do
/// not hit anyway.
fn count_powers(norm: f64, length: f64, x: f64) -> usize {
    if norm > x {
        return 0;
    }
    if norm.fract() == 0.0 && norm < 9.0e15 && x < 3.4e38 {
        let m = norm as u128;
        debug_assert!(m >= 2, "norms exceed 1");
        let cap = x.floor() as u128;
        let mut count = 0;
        let mut acc: u128 = 1;
        loop {
            match acc.checked_mul(m) {
                Some(next) if next <= cap => {
                    acc = next;
                    count += 1;
                }
                _ => return count,
            }
        }
    }
    ((x.ln() / length) * (1.0 + 4.0 * f64::EPSILON)).floor() as usize
}

/// Finite zeta partial product over the first `truncation` knots:
/// prod 1/(1 - N_i^(-s)).  Computed in log space with compensated
/// summation; the empty product is 1.
pub fn zeta_partial(assignment: &LengthAssignment, s: f64, truncation: usize) -> Result<f64> {
    check_s(s)?;
    let n = assignment.norms.len();
    if truncation > n {
        return Err(Error::IndexOutOfRange { index: truncation, n });
    }
    let mut logs = CompensatedSum::new();
    for &norm in &assignment.norms[..truncation] {
        logs.add(-(-norm.powf(-s)).ln_1p());
    }
    Ok(logs.value().exp())
}

/// Zeta partial product restricted to knots with the given class tag,
/// starting past the first `skip_first` knots.
pub fn zeta_relative(
    assignment: &LengthAssignment,
    tags: &[usize],
    class: usize,
    s: f64,
    truncation: usize,
    skip_first: usize,
) -> Result<f64> {
    check_s(s)?;
    let n = assignment.norms.len();
    assert_eq!(n, tags.len(), "one class tag per knot");
    if truncation > n {
        return Err(Error::IndexOutOfRange { index: truncation, n });
    }
    let mut logs = CompensatedSum::new();
    for j in skip_first..truncation {
        if tags[j] == class {
            logs.add(-(-assignment.norms[j].powf(-s)).ln_1p());
        }
    }
    Ok(logs.value().exp())
}

/// A Dirichlet-density estimate: the subset-to-family ratio of N^(-s) sums
/// on a grid of s values, a linear extrapolation in (s - 1) down to s = 1,
/// and a truncation-sensitivity diagnostic (the same estimate from only the
/// first half of the knots).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DirichletEstimate {
    pub s_grid: Vec<f64>,
    pub ratios: Vec<f64>,
    pub extrapolated: f64,
    pub half_truncation_estimate: f64,
    pub sensitivity: f64,
}

/// Default grid: decreasing toward 1; chosen small enough that the family
/// sums are far from their tails, large enough that the extrapolation has
/// lever arm.
pub const DEFAULT_S_GRID: [f64; 4] = [1.2, 1.1, 1.05, 1.02];

fn ratio_at(assignment: &LengthAssignment, subset: &[bool], s: f64, truncation: usize) -> f64 {
    let mut num = CompensatedSum::new();
    let mut den = CompensatedSum::new();
    for j in 0..truncation {
        let weight = (-s * assignment.lengths[j]).exp();
        den.add(weight);
        if subset[j] {
            num.add(weight);
        }
    }
    num.value() / den.value()
}

/// Least-squares intercept of y against x at x = 0.
fn intercept(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    if xs.len() == 1 {
        return ys[0];
    }
    let sx: f64 = xs.iter().sum();
    let sy: f64 = ys.iter().sum();
    let sxx: f64 = xs.iter().map(|x| x * x).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| x * y).sum();
    (sy * sxx - sx * sxy) / (n * sxx - sx * sx)
}

/// Dirichlet density of the knots marked in `subset`, estimated on `s_grid`
/// (all entries > 1, decreasing toward 1).
pub fn dirichlet_density(
    assignment: &LengthAssignment,
    subset: &[bool],
    s_grid: &[f64],
) -> Result<DirichletEstimate> {
    let n = assignment.lengths.len();
    assert_eq!(n, subset.len(), "one subset flag per knot");
    if n == 0 || s_grid.is_empty() {
        return Err(Error::EmptyStream);
    }
    for &s in s_grid {
        check_s(s)?;
    }
    let estimate_on = |truncation: usize| -> (Vec<f64>, f64) {
        let ratios: Vec<f64> =
            s_grid.iter().map(|&s| ratio_at(assignment, subset, s, truncation)).collect();
        let xs: Vec<f64> = s_grid.iter().map(|&s| s - 1.0).collect();
        let fit = intercept(&xs, &ratios);
        (ratios, fit)
    };
    let (ratios, extrapolated) = estimate_on(n);
    let (_, half_truncation_estimate) = estimate_on((n / 2).max(1));
    Ok(DirichletEstimate {
        s_grid: s_grid.to_vec(),
        ratios,
        extrapolated,
        half_truncation_estimate,
        sensitivity: (extrapolated - half_truncation_estimate).abs(),
    })
}

/// Per-class |natural - dirichlet| table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EquivalenceReport {
    pub per_class: Vec<f64>,
    pub max_discrepancy: f64,
}

/// Compare natural and Dirichlet estimates computed class-by-class on the
/// same quotient and truncation.
pub fn density_equivalence_report(natural: &[f64], dirichlet: &[f64]) -> Result<EquivalenceReport> {
    if natural.len() != dirichlet.len() {
        return Err(Error::MismatchedClasses);
    }
    let per_class: Vec<f64> =
        natural.iter().zip(dirichlet).map(|(a, b)| (a - b).abs()).collect();
    let max_discrepancy = per_class.iter().cloned().fold(0.0, f64::max);
    Ok(EquivalenceReport { per_class, max_discrepancy })
}

/// One class's row in a [`DensityReport`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassRow {
    /// Minimal element of the class, as in `conjugacy_classes()`.
    pub representative: u16,
    pub class_size: usize,
    pub count: usize,
    pub natural_freq: f64,
    /// Subset ratio at each grid s, in grid order.
    pub dirichlet_ratios: Vec<f64>,
    /// Extrapolation of the ratios to s = 1.
    pub dirichlet_estimate: f64,
    /// |C| / |G|, the limit frequency a Chebotarev family would show.
    pub expected: f64,
}

/// Side-by-side density summary of one quotient run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityReport {
    pub quotient_label: String,
    pub total_knots: usize,
    pub truncation: usize,
    pub s_grid: Vec<f64>,
    pub per_class: Vec<ClassRow>,
}

/// Build the full per-class report for one quotient: counts, natural
/// frequencies, Dirichlet ratios and extrapolation, expected |C|/|G|.
pub fn density_report(
    group: &FiniteGroup,
    quotient_label: &str,
    tags: &[usize],
    assignment: &LengthAssignment,
    s_grid: &[f64],
) -> Result<DensityReport> {
    if tags.is_empty() {
        return Err(Error::EmptyStream);
    }
    assert_eq!(tags.len(), assignment.lengths.len(), "one class tag per knot");
    let classes = group.conjugacy_classes();
    let order = group.order() as f64;
    let total = tags.len();
    let mut per_class = Vec::with_capacity(classes.len());
    for (ci, class) in classes.iter().enumerate() {
        let subset: Vec<bool> = tags.iter().map(|&t| t == ci).collect();
        let count = subset.iter().filter(|&&b| b).count();
        let est = dirichlet_density(assignment, &subset, s_grid)?;
        per_class.push(ClassRow {
            representative: class.representative,
            class_size: class.size(),
            count,
            natural_freq: count as f64 / total as f64,
            dirichlet_ratios: est.ratios,
            dirichlet_estimate: est.extrapolated,
            expected: class.size() as f64 / order,
        });
    }
    Ok(DensityReport {
        quotient_label: quotient_label.to_string(),
        total_knots: total,
        truncation: total,
        s_grid: s_grid.to_vec(),
        per_class,
    })
}

impl DensityReport {
    /// One row per class; floats printed in shortest round-trip form.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("representative,class_size,count,natural_freq");
        for s in &self.s_grid {
            out.push_str(&format!(",dirichlet_s{s}"));
        }
        out.push_str(",dirichlet_estimate,expected\n");
        for row in &self.per_class {
            out.push_str(&format!(
                "{},{},{},{}",
                row.representative, row.class_size, row.count, row.natural_freq
            ));
            for r in &row.dirichlet_ratios {
                out.push_str(&format!(",{r}"));
            }
            out.push_str(&format!(",{},{}\n", row.dirichlet_estimate, row.expected));
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report always serializes")
    }
}

/// Plot-ready CSV of a running-frequency series: one `(v, frequency)` row
/// per knot.
pub fn running_series_csv(series: &[f64]) -> String {
    let mut out = String::from("nu,frequency\n");
    for (i, f) in series.iter().enumerate() {
        out.push_str(&format!("{},{f}\n", i + 1));
    }
    out
}

/// Both sides of the log-derivative identity on a finite truncation:
/// the term-wise derivative sum l_i N^(-s) / (1 - N^(-s)) on the left, and
/// the exact stepwise quadrature s * integral of psi(x) x^(-s-1) up to
/// x_max on the right.  The gap is the tail beyond x_max, so it shrinks to
/// zero as x_max grows.
pub fn log_derivative_check(
    assignment: &LengthAssignment,
    s: f64,
    x_max: f64,
) -> Result<(f64, f64)> {
    check_s(s)?;
    let mut lhs = CompensatedSum::new();
    for (&norm, &l) in assignment.norms.iter().zip(&assignment.lengths) {
        let q = norm.powf(-s);
        lhs.add(l * q / (1.0 - q));
    }
    // The integral of a step function against s x^(-s-1) dx: each jump of
    // height l at x0 <= x_max contributes l (x0^(-s) - x_max^(-s)).
    let mut rhs = CompensatedSum::new();
    let tail = x_max.powf(-s);
    for (&norm, &l) in assignment.norms.iter().zip(&assignment.lengths) {
        let n_powers = count_powers(norm, l, x_max);
        for k in 1..=n_powers {
            rhs.add(l * (norm.powf(-s * k as f64) - tail));
        }
    }
    Ok((lhs.value(), rhs.value()))
}
