//! The twelve-point verification suite behind `cheb verify`.
//!
//! Each check returns a [`Criterion`] carrying the measured numbers in its
//! detail string and never prints or exits itself; the CLI and the
//! acceptance integration tests render the same data, so the binary and
//! `cargo test` cannot disagree about what passed.

use cheblab::covers::{self, PeripheralImage};
use cheblab::density;
use cheblab::fingroup::{semidirect_quotient, DEFAULT_QUOTIENT_BOUND};
use cheblab::library;
use cheblab::localglobal;
use cheblab::orbitgen;
use cheblab::{KnotFamily, LengthScheme};

use crate::commands::{self, FamilySpec};
use crate::config::CliError;

use std::fmt::Write as _;
use std::sync::Arc;
use std::time::Instant;

/// The figure-eight monodromy, the standard worked example throughout.
pub const CAT: [[i64; 2]; 2] = [[2, 1], [1, 1]];

/// One verdict: which check, whether it held, and the measured evidence.
#[derive(Debug, Clone)]
pub struct Criterion {
    pub id: u32,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl Criterion {
    pub fn render(&self) -> String {
        format!(
            "criterion {:2} {} {}: {}",
            self.id,
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.detail
        )
    }
}

/// Knobs the `verify` subcommand exposes; everything else is pinned so the
/// suite means the same thing on every machine.
#[derive(Debug, Clone, Copy)]
pub struct VerifyConfig {
    /// Period bound for the torus-orbit equidistribution check.
    pub nu_max: u32,
    /// Word-length bound for the geodesic density checks.
    pub max_word_length: u32,
    /// Absolute tolerance for the three statistical frequency checks.
    pub tolerance: f64,
    /// Trial count for the seeded linear-algebra experiments.
    pub trials: u32,
    /// Master seed for everything randomized.
    pub seed: u64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            nu_max: 16,
            max_word_length: 18,
            tolerance: 0.05,
            trials: 200,
            seed: 2026,
        }
    }
}

// --- small independent matrix helpers for the oracles -----------------------
//
// These deliberately do not use the core matrix type: the point of an oracle
// is to reach the expected number by a different route.

fn mul2(x: [[i64; 2]; 2], y: [[i64; 2]; 2]) -> [[i64; 2]; 2] {
    let mut z = [[0i64; 2]; 2];
    for r in 0..2 {
        for c in 0..2 {
            z[r][c] = x[r][0] * y[0][c] + x[r][1] * y[1][c];
        }
    }
    z
}

fn pow2(m: [[i64; 2]; 2], k: u32) -> [[i64; 2]; 2] {
    let mut acc = [[1, 0], [0, 1]];
    for _ in 0..k {
        acc = mul2(acc, m);
    }
    acc
}

/// Fixed points of A^nu on the torus by brute scan: every fixed point is a
/// rational point with denominator dividing d = |det(A^nu - I)|, so scanning
/// the full (i/d, j/d) grid and testing A^nu x = x mod 1 counts them all.
fn brute_fixed_count(matrix: [[i64; 2]; 2], nu: u32) -> i64 {
    let p = pow2(matrix, nu);
    let det = (p[0][0] - 1) * (p[1][1] - 1) - p[0][1] * p[1][0];
    let d = det.abs();
    let mut found = 0;
    for i in 0..d {
        for j in 0..d {
            let r1 = ((p[0][0] - 1) * i + p[0][1] * j).rem_euclid(d);
            let r2 = (p[1][0] * i + (p[1][1] - 1) * j).rem_euclid(d);
            if r1 == 0 && r2 == 0 {
                found += 1;
            }
        }
    }
    found
}

/// 1: fixed-point counts of the worked matrix match both the determinant
/// formula and a brute-force rational-point scan.
pub fn criterion_1(_cfg: &VerifyConfig) -> Result<Criterion, CliError> {
    const WANT: [i64; 5] = [1, 5, 16, 45, 121];
    let family = orbitgen::cat_primitive_orbits(CAT, 5, true)?;
    let brute: Vec<i64> = (1..=5).map(|nu| brute_fixed_count(CAT, nu)).collect();
    let passed = family.fixed_point_counts == WANT && brute == WANT;
    let detail = format!(
        "enumerated={:?} brute_oracle={:?} want={:?}",
        family.fixed_point_counts, brute, WANT
    );
    Ok(Criterion { id: 1, name: "fixed-point-counts", passed, detail })
}

/// 2: class frequencies of torus orbits of period <= nu_max in the order-12
/// quotient (Z/2)^2:Z/3, each within the tolerance of |C|/12.
pub fn criterion_2(cfg: &VerifyConfig) -> Result<Criterion, CliError> {
    let start = Instant::now();
    let family = orbitgen::cat_primitive_orbits(CAT, cfg.nu_max, false)?;
    let q = semidirect_quotient(2, CAT, DEFAULT_QUOTIENT_BOUND)?;
    let tags = orbitgen::cat_class_tags(&family.orbits, &q)?;
    let classes = q.target.conjugacy_classes();
    let order = q.target.order() as f64;
    let total = tags.len() as f64;

    let mut counts = vec![0usize; classes.len()];
    for &t in &tags {
        counts[t] += 1;
    }
    let mut detail = format!("orbits={} quotient={}", tags.len(), q.target.label());
    let mut max_dev = 0.0f64;
    for (ci, class) in classes.iter().enumerate() {
        let freq = counts[ci] as f64 / total;
        let expected = class.size() as f64 / order;
        max_dev = max_dev.max((freq - expected).abs());
        write!(detail, " C{}[{}]:{:.4}/{:.4}", class.representative, class.size(), freq, expected)
            .unwrap();
    }
    let elapsed = start.elapsed();
    write!(detail, " max_dev={:.4} tol={} elapsed={:.1}s", max_dev, cfg.tolerance, elapsed.as_secs_f64())
        .unwrap();
    let passed = max_dev <= cfg.tolerance && elapsed.as_secs() < 60;
    Ok(Criterion { id: 2, name: "cat-equidistribution", passed, detail })
}

/// 3: identity-class frequency of geodesic classes mod 2 near 1/6.
pub fn criterion_3(cfg: &VerifyConfig) -> Result<Criterion, CliError> {
    let start = Instant::now();
    let geos = orbitgen::modular_geodesics(cfg.max_word_length)?;
    if geos.is_empty() {
        return Err(CliError::Invariant(cheblab::Error::EmptyStream));
    }
    let (g, tags) = orbitgen::modular_class_tags_mod(&geos, 2);
    let id_class = g.class_map()[g.identity() as usize] as usize;
    let count = tags.iter().filter(|&&t| t == id_class).count();
    let freq = count as f64 / tags.len() as f64;
    let expected = 1.0 / g.order() as f64;
    let dev = (freq - expected).abs();
    let elapsed = start.elapsed();
    let passed = dev <= cfg.tolerance && elapsed.as_secs() < 60;
    let detail = format!(
        "words={} quotient={} identity_freq={:.4} expected={:.4} dev={:.4} tol={} elapsed={:.1}s",
        tags.len(),
        g.label(),
        freq,
        expected,
        dev,
        cfg.tolerance,
        elapsed.as_secs_f64()
    );
    Ok(Criterion { id: 3, name: "modular-split-density", passed, detail })
}

/// 4: on the run of criterion 3, natural and Dirichlet-extrapolated
/// frequencies agree per class within the tolerance.
pub fn criterion_4(cfg: &VerifyConfig) -> Result<Criterion, CliError> {
    let geos = orbitgen::modular_geodesics(cfg.max_word_length)?;
    let (g, tags) = orbitgen::modular_class_tags_mod(&geos, 2);
    let family = KnotFamily::Modular(geos);
    let assignment = orbitgen::assign_lengths(&family, LengthScheme::Geometric);
    let label = g.label().to_string();
    let report =
        density::density_report(&g, &label, &tags, &assignment, &density::DEFAULT_S_GRID)?;
    let max_gap = report
        .per_class
        .iter()
        .map(|r| (r.natural_freq - r.dirichlet_estimate).abs())
        .fold(0.0f64, f64::max);
    let passed = max_gap <= cfg.tolerance;
    let detail = format!(
        "classes={} max|natural-dirichlet|={:.4} tol={}",
        report.per_class.len(),
        max_gap,
        cfg.tolerance
    );
    Ok(Criterion { id: 4, name: "density-equivalence", passed, detail })
}

/// 5: the partial zeta product equals the product of its per-class
/// relative factors to 1e-12 relative, on both families.
pub fn criterion_5(_cfg: &VerifyConfig) -> Result<Criterion, CliError> {
    const REL_TOL: f64 = 1e-12;
    const S_VALUES: [f64; 3] = [1.05, 1.1, 1.2];
    let mut detail = String::new();
    let mut worst = 0.0f64;
    for (spec, tag) in [
        (FamilySpec::Cat { matrix: CAT, nu_max: 10, include_origin: false }, "cat"),
        (FamilySpec::Modular { max_word_length: 12 }, "modular"),
    ] {
        let family = spec.build()?;
        let (group, tags) = match &family {
            KnotFamily::Cat(cat) => {
                let q = semidirect_quotient(2, cat.matrix, DEFAULT_QUOTIENT_BOUND)?;
                let tags = orbitgen::cat_class_tags(&cat.orbits, &q)?;
                ((*q.target).clone(), tags)
            }
            KnotFamily::Modular(geos) => orbitgen::modular_class_tags_mod(geos, 2),
        };
        let assignment = orbitgen::assign_lengths(&family, LengthScheme::Geometric);
        let n = assignment.lengths.len();
        let classes = group.conjugacy_classes().len();
        let mut family_worst = 0.0f64;
        for s in S_VALUES {
            let partial = density::zeta_partial(&assignment, s, n)?;
            let mut product = 1.0f64;
            for class in 0..classes {
                product *= density::zeta_relative(&assignment, &tags, class, s, n, 0)?;
            }
            family_worst = family_worst.max(((product - partial) / partial).abs());
        }
        worst = worst.max(family_worst);
        write!(detail, "{tag}: n={n} max_rel_gap={family_worst:.2e}  ").unwrap();
    }
    write!(detail, "tol={REL_TOL:.0e}").unwrap();
    Ok(Criterion { id: 5, name: "zeta-partition", passed: worst <= REL_TOL, detail })
}

/// 6: |I| = e, |D| = e*f, and e*f*g = |G| for every commuting peripheral
/// pair in every library group of order <= 24, with the component count g
/// independently re-derived from the orbit decomposition of the cover.
pub fn criterion_6(_cfg: &VerifyConfig) -> Result<Criterion, CliError> {
    let start = Instant::now();
    let mut pairs = 0usize;
    let mut groups = 0usize;
    for g in library::library(24) {
        groups += 1;
        let order = g.order();
        let identity = g.identity();
        let arc = Arc::new(g);
        for mu in 0..order as u16 {
            for lambda in 0..order as u16 {
                if arc.mul(mu, lambda) != arc.mul(lambda, mu) {
                    continue;
                }
                pairs += 1;
                let p = PeripheralImage::new(mu, lambda, Arc::clone(&arc))?;
                let data = covers::splitting_data(&p);
                let comps = covers::subcover_components(&p, &[identity])?;
                let ok = data.inertia.len() == data.e
                    && data.decomposition.len() == data.e * data.f
                    && data.e * data.f * data.g == order
                    && comps.len() == data.g
                    && comps.iter().all(|c| c.e == data.e && c.f == data.f);
                if !ok {
                    let detail = format!(
                        "FAILED at group={} mu={mu} lambda={lambda}: e={} f={} g={} |G|={order} components={}",
                        arc.label(), data.e, data.f, data.g, comps.len()
                    );
                    return Ok(Criterion { id: 6, name: "splitting-identities", passed: false, detail });
                }
            }
        }
    }
    let elapsed = start.elapsed();
    let detail = format!(
        "groups={groups} commuting_pairs={pairs} all identities exact elapsed={:.1}s",
        elapsed.as_secs_f64()
    );
    let passed = elapsed.as_secs() < 120;
    Ok(Criterion { id: 6, name: "splitting-identities", passed, detail })
}

/// 7: residue degrees multiply in towers: f through G equals f through N
/// times f through G/N, over all normal subgroups and commuting pairs of
/// every library group of order <= 24.
pub fn criterion_7(_cfg: &VerifyConfig) -> Result<Criterion, CliError> {
    let mut towers = 0usize;
    for g in library::library(24) {
        let order = g.order();
        let normals = g.normal_subgroups(64)?;
        let arc = Arc::new(g);
        for mu in 0..order as u16 {
            for lambda in 0..order as u16 {
                if arc.mul(mu, lambda) != arc.mul(lambda, mu) {
                    continue;
                }
                let p = PeripheralImage::new(mu, lambda, Arc::clone(&arc))?;
                for n in &normals {
                    towers += 1;
                    let m = covers::multiplicativity_check(&p, n)?;
                    if !m.holds || m.f_total != m.f_upper * m.f_lower {
                        let detail = format!(
                            "FAILED at group={} mu={mu} lambda={lambda} |N|={}: {} != {} * {}",
                            arc.label(), n.len(), m.f_total, m.f_upper, m.f_lower
                        );
                        return Ok(Criterion {
                            id: 7,
                            name: "f-multiplicativity",
                            passed: false,
                            detail,
                        });
                    }
                }
            }
        }
    }
    let detail = format!("towers={towers} all exactly multiplicative");
    Ok(Criterion { id: 7, name: "f-multiplicativity", passed: true, detail })
}

/// 8: no two distinct normal subgroups share a split-class set, over every
/// library group of order <= 16.
pub fn criterion_8(_cfg: &VerifyConfig) -> Result<Criterion, CliError> {
    let report = covers::split_rigidity_sweep(16)?;
    let detail = format!(
        "pairs={} counterexamples={}",
        report.rows.len(),
        report.counterexamples
    );
    Ok(Criterion {
        id: 8,
        name: "split-rigidity",
        passed: report.counterexamples == 0,
        detail,
    })
}

/// 9: the summed local pairing vanishes on random cochain pairs for every
/// configuration, and the unramified line is exactly its own orthogonal
/// complement for small p.
pub fn criterion_9(cfg: &VerifyConfig) -> Result<Criterion, CliError> {
    let mut total_violations = 0u32;
    let mut configs = 0usize;
    for p in [2u64, 3, 5] {
        for n in [2usize, 10, 40] {
            let lk = localglobal::synthetic_linking_model(n, 10, cfg.seed ^ (p * 41 + n as u64));
            let report = localglobal::reciprocity_check(&lk, p, 100, cfg.seed + configs as u64);
            total_violations += report.violations;
            configs += 1;
        }
    }
    let orthogonal = [2u64, 3, 5, 7]
        .into_iter()
        .all(localglobal::unramified_orthogonality);
    let passed = total_violations == 0 && orthogonal;
    let detail = format!(
        "configs={configs} x 100 pairs, violations={total_violations}; unramified self-orthogonality p in {{2,3,5,7}}: {orthogonal}"
    );
    Ok(Criterion { id: 9, name: "reciprocity", passed, detail })
}

/// 10: restriction maps on synthetic linking matrices are surjective onto
/// random 3-knot subsets and have zero kernel away from them in >= 90% of
/// trials, while the zero-matrix control never surjects.
pub fn criterion_10(cfg: &VerifyConfig) -> Result<Criterion, CliError> {
    let trials = cfg.trials;
    let need = (trials as f64 * 0.9).ceil() as u32;
    let synthetic = localglobal::synthetic_experiment_batch(50, 10, 3, 3, trials, cfg.seed)?;
    let control = localglobal::unlink_control_batch(50, 3, 3, trials, cfg.seed)?;
    let passed = synthetic.surjective >= need
        && synthetic.zero_kernel >= need
        && control.surjective == 0;
    let detail = format!(
        "synthetic: surjective={}/{} zero_kernel={}/{} (need {need}); unlink control surjective={}/{}",
        synthetic.surjective, trials, synthetic.zero_kernel, trials, control.surjective, trials
    );
    Ok(Criterion { id: 10, name: "local-global", passed, detail })
}

/// Dedekind sum s(d, c) scaled by 4c^2, as an exact integer.
fn dedekind_scaled(d: i64, c: i64) -> i64 {
    let mut s = 0i64;
    for k in 1..c {
        let r = (k * d).rem_euclid(c);
        if r != 0 {
            s += (2 * k - c) * (2 * r - c);
        }
    }
    s
}

/// 11: the letter-count sum of every hyperbolic R/L word of length <= 10
/// equals the classical transformation-defect formula evaluated on the
/// word's matrix: (a+d)/c - 12 s(d,c) - 3 for these all-positive matrices,
/// computed in exact integer arithmetic.
pub fn criterion_11(_cfg: &VerifyConfig) -> Result<Criterion, CliError> {
    const R: [[i64; 2]; 2] = [[1, 1], [0, 1]];
    const L: [[i64; 2]; 2] = [[1, 0], [1, 1]];
    let mut words = 0usize;
    for len in 2..=10u32 {
        for mask in 0u32..(1 << len) {
            if mask == 0 || mask == (1 << len) - 1 {
                continue; // single-letter powers are not hyperbolic
            }
            let mut word = String::with_capacity(len as usize);
            let mut m = [[1i64, 0], [0, 1]];
            for bit in 0..len {
                if mask >> bit & 1 == 0 {
                    word.push('R');
                    m = mul2(m, R);
                } else {
                    word.push('L');
                    m = mul2(m, L);
                }
            }
            let (a, c, d) = (m[0][0], m[1][0], m[1][1]);
            debug_assert!(c > 0 && a + d > 2, "mixed words give all-positive matrices");
            // (a+d)/c - 3 S / c^2 - 3, computed as one exact quotient.
            let num = c * (a + d) - 3 * dedekind_scaled(d, c) - 3 * c * c;
            if num % (c * c) != 0 {
                let detail = format!("defect formula not integral on {word}");
                return Ok(Criterion { id: 11, name: "rademacher-dedekind", passed: false, detail });
            }
            let oracle = num / (c * c);
            let sum = orbitgen::rademacher(&word)?;
            if oracle != sum {
                let detail =
                    format!("mismatch on {word}: letter sum {sum}, defect formula {oracle}");
                return Ok(Criterion { id: 11, name: "rademacher-dedekind", passed: false, detail });
            }
            words += 1;
        }
    }
    let detail = format!("words={words} letter sums all equal the Dedekind-sum formula");
    Ok(Criterion { id: 11, name: "rademacher-dedekind", passed: true, detail })
}

/// 12: every report-producing command emits byte-identical artifacts when
/// run twice with the same inputs and seed.
pub fn criterion_12(cfg: &VerifyConfig) -> Result<Criterion, CliError> {
    let mut checked = 0usize;
    let mut stable = true;
    let mut runs: Vec<(&str, Box<dyn Fn() -> Result<commands::CommandOutput, CliError>>)> =
        Vec::new();
    let seed = cfg.seed;
    runs.push((
        "density",
        Box::new(|| {
            commands::density_command(
                FamilySpec::Modular { max_word_length: 12 },
                2,
                LengthScheme::Geometric,
                &density::DEFAULT_S_GRID,
                None,
            )
        }),
    ));
    runs.push((
        "zeta",
        Box::new(|| {
            commands::zeta_command(
                FamilySpec::Cat { matrix: CAT, nu_max: 8, include_origin: false },
                2,
                LengthScheme::Geometric,
                &[1.1, 1.2],
                None,
            )
        }),
    ));
    runs.push(("sweep", Box::new(|| commands::sweep_command(12))));
    runs.push(("split", Box::new(|| commands::split_command("S4", 0, 1, Some("0,1")))));
    runs.push(("lgp", Box::new(move || commands::lgp_command(20, 10, 3, 2, 25, seed, false))));
    runs.push(("lgp-unlink", Box::new(move || commands::lgp_command(20, 10, 3, 2, 25, seed, true))));

    let mut first_diff = String::new();
    for (name, run) in &runs {
        let a = run()?;
        let b = run()?;
        checked += 1;
        if a != b {
            stable = false;
            first_diff = format!(" first difference in {name}");
            break;
        }
    }
    let detail = format!("commands={checked} re-run byte-identical={stable}{first_diff}");
    Ok(Criterion { id: 12, name: "determinism", passed: stable, detail })
}

/// Run the whole suite in order.
pub fn run_all(cfg: &VerifyConfig) -> Result<Vec<Criterion>, CliError> {
    let checks: [fn(&VerifyConfig) -> Result<Criterion, CliError>; 12] = [
        criterion_1,
        criterion_2,
        criterion_3,
        criterion_4,
        criterion_5,
        criterion_6,
        criterion_7,
        criterion_8,
        criterion_9,
        criterion_10,
        criterion_11,
        criterion_12,
    ];
    checks.iter().map(|c| c(cfg)).collect()
}
