//! The identity suite behind `verify`.
//!
//! JSON field names of [`VerificationReport`], [`CheckRecord`] and
//! [`E2Comparison`] are stable.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::time::{SystemTime, UNIX_EPOCH};

use fracfact::ladder::{
    canonical_e2, closed_form_energy, default_exclusion_radius, energy_curve, excited_state,
    ground_state, local_energy_exact, node_locations, printed_e0, printed_e1, second_state_node,
    EnergyMode,
};
use fracfact::operators::{apply_eps, apply_h, factorization_mismatch, kernel_mismatch};
use fracfact::powerexp::{PowerExpFunction, PowerSum, PowerTerm};
use fracfact::spectral::{
    residual_momentum, sample, sample_state, to_momentum, to_position, Exclusions, SampledState,
    UniformGrid,
};
use fracfact::{LevyIndex, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{RunConfig, Tolerances};
use crate::Result;

/// Randomized family members per α in the factorization check.
pub const FACTORIZATION_SAMPLES: usize = 50;
/// Highest state checked by the exact eigen-identity.
pub const EIGEN_MAX_N: usize = 8;
/// Highest state checked for `E_n = 2n+1` at α = 2.
pub const CONVENTIONAL_MAX_N: usize = 4;
/// Momenta at which the printed and canonical `E_2` are tabulated.
pub const E2_TABLE_K: [f64; 6] = [0.25, 0.5, 1.0, 1.5, 2.0, 3.0];

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct CheckRecord {
    pub check: String,
    pub alpha: Option<f64>,
    pub n: Option<usize>,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl CheckRecord {
    fn new(
        check: &str,
        alpha: Option<LevyIndex>,
        n: Option<usize>,
        residual: f64,
        tolerance: f64,
    ) -> Self {
        CheckRecord {
            check: check.to_string(),
            alpha: alpha.map(LevyIndex::value),
            n,
            residual,
            tolerance,
            pass: passes(residual, tolerance),
        }
    }
}

/// `residual ≤ tolerance` with a strictly positive tolerance; a zero
/// tolerance fails every check.
pub fn passes(residual: f64, tolerance: f64) -> bool {
    tolerance > 0.0 && residual.is_finite() && residual <= tolerance
}

/// One row of the printed-vs-canonical `E_2` comparison.
#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct E2Comparison {
    pub alpha: f64,
    pub k: f64,
    pub canonical: f64,
    pub printed: f64,
    pub relative_difference: f64,
    pub agrees: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub engine_version: String,
    /// Seconds since the Unix epoch.
    pub timestamp: u64,
    pub overall_pass: bool,
    pub total_checks: usize,
    pub failed_checks: usize,
    pub checks: Vec<CheckRecord>,
    pub e2_comparison: Vec<E2Comparison>,
}

impl VerificationReport {
    pub fn from_checks(checks: Vec<CheckRecord>, e2_comparison: Vec<E2Comparison>) -> Self {
        let failed = checks.iter().filter(|c| !c.pass).count();
        VerificationReport {
            engine_version: env!("CARGO_PKG_VERSION").to_string(),
            timestamp: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0),
            overall_pass: !checks.is_empty() && failed == 0,
            total_checks: checks.len(),
            failed_checks: failed,
            checks,
            e2_comparison,
        }
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckRecord> {
        self.checks.iter().filter(|c| !c.pass)
    }

    /// Grouped human-readable summary; failing records are listed individually.
    pub fn summary(&self, show_e2_table: bool) -> String {
        let mut groups: BTreeMap<&str, (usize, usize, f64, f64)> = BTreeMap::new();
        let mut order: Vec<&str> = Vec::new();
        for c in &self.checks {
            let entry = groups.entry(c.check.as_str()).or_insert_with(|| {
                order.push(c.check.as_str());
                (0, 0, 0.0, c.tolerance)
            });
            entry.0 += 1;
            entry.1 += c.pass as usize;
            entry.2 = entry.2.max(c.residual);
        }
        let mut s = String::new();
        for name in order {
            let (total, passed, worst, tol) = groups[name];
            let status = if passed == total { "PASS" } else { "FAIL" };
            let _ = writeln!(
                s,
                "{status} {name:<28} {passed:>3}/{total:<3} worst residual {worst:.3e} (tol {tol:.1e})"
            );
        }
        for c in self.failures() {
            let _ = writeln!(
                s,
                "  failed: {} α={} n={} residual={:.3e} tol={:.1e}",
                c.check,
                c.alpha.map_or("-".into(), |a| format!("{a:?}")),
                c.n.map_or("-".into(), |n| n.to_string()),
                c.residual,
                c.tolerance
            );
        }
        if show_e2_table {
            let _ = writeln!(s, "printed E2 (exponent 3α/2-1) vs Hφ2/φ2:");
            let _ = writeln!(
                s,
                "  {:>5} {:>6} {:>22} {:>22} {:>10}",
                "α", "k", "canonical", "printed", "rel.diff"
            );
            for r in &self.e2_comparison {
                let _ = writeln!(
                    s,
                    "  {:>5} {:>6} {:>22.15e} {:>22.15e} {:>10.2e}{}",
                    format!("{:?}", r.alpha),
                    format!("{:?}", r.k),
                    r.canonical,
                    r.printed,
                    r.relative_difference,
                    if r.agrees { "" } else { "  differs" }
                );
            }
        }
        let _ = writeln!(
            s,
            "{}: {} of {} checks passed",
            if self.overall_pass { "OK" } else { "FAILED" },
            self.total_checks - self.failed_checks,
            self.total_checks
        );
        s
    }
}

/// The sweep `{1.1, ..., 2.0}` together with any configured α outside it.
fn identity_alphas(config: &RunConfig) -> Vec<LevyIndex> {
    let mut all = LevyIndex::sweep();
    for &a in &config.alphas {
        if !all.contains(&a) {
            all.push(a);
        }
    }
    all.sort_by(|a, b| a.value().total_cmp(&b.value()));
    all
}

/// Deterministic stream of randomized family members for one α.
pub fn random_members(alpha: LevyIndex, count: usize) -> Vec<PowerExpFunction> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_u64 ^ alpha.value().to_bits());
    (0..count)
        .map(|_| {
            let terms = rng.gen_range(1..=5);
            PowerExpFunction::random(&mut rng, alpha, terms, true)
        })
        .collect()
}

fn symbolic_checks(alpha: LevyIndex, tol: &Tolerances) -> Result<Vec<CheckRecord>> {
    let a = Some(alpha);
    let mut out = Vec::new();

    out.push(CheckRecord::new(
        "kernel",
        a,
        Some(0),
        kernel_mismatch(&ground_state(alpha)),
        tol.kernel,
    ));

    let worst = random_members(alpha, FACTORIZATION_SAMPLES)
        .iter()
        .map(factorization_mismatch)
        .fold(0.0, f64::max);
    out.push(CheckRecord::new(
        "factorization",
        a,
        None,
        worst,
        tol.factorization,
    ));

    let h = alpha.half();
    let printed_phi1 = PowerExpFunction::enveloped(
        alpha,
        PowerSum::monomial(PowerTerm::odd(C64::new(0.0, -2.0), h)),
    );
    let printed_phi2 = PowerExpFunction::enveloped(
        alpha,
        PowerSum::from_terms([
            PowerTerm::even(alpha.value(), h - 1.0),
            PowerTerm::even(-4.0, alpha.value()),
        ]),
    );
    for (n, printed) in [(1, printed_phi1), (2, printed_phi2)] {
        let r = excited_state(alpha, n)?.relative_mismatch(&printed)?;
        out.push(CheckRecord::new(
            "closed_form_state",
            a,
            Some(n),
            r,
            tol.closed_form_state,
        ));
    }

    for n in 0..=EIGEN_MAX_N {
        let phi = excited_state(alpha, n)?;
        let e = local_energy_exact(alpha, n)?;
        let lhs = apply_h(&phi).mul_sum(&e.denominator);
        let rhs = phi.mul_sum(&e.numerator);
        out.push(CheckRecord::new(
            "eigen_identity",
            a,
            Some(n),
            lhs.relative_mismatch(&rhs)?,
            tol.eigen_identity,
        ));
    }

    let e0 = local_energy_exact(alpha, 0)?.coefficient_mismatch(&printed_e0(alpha));
    out.push(CheckRecord::new(
        "printed_e0",
        a,
        Some(0),
        e0,
        tol.printed_energy,
    ));
    let e1 = local_energy_exact(alpha, 1)?.coefficient_mismatch(&printed_e1(alpha));
    out.push(CheckRecord::new(
        "printed_e1",
        a,
        Some(1),
        e1,
        tol.printed_energy,
    ));
    let e2 = local_energy_exact(alpha, 2)?.coefficient_mismatch(&canonical_e2(alpha));
    out.push(CheckRecord::new(
        "canonical_e2",
        a,
        Some(2),
        e2,
        tol.printed_energy,
    ));

    let canonical = closed_form_energy(alpha, 2, 1.0, EnergyMode::Canonical)?;
    let printed = closed_form_energy(alpha, 2, 1.0, EnergyMode::PaperVerbatim)?;
    let exact = local_energy_exact(alpha, 2)?.evaluate(1.0)?;
    let r = ((printed - canonical).abs().max((exact - canonical).abs())) / canonical.abs();
    out.push(CheckRecord::new(
        "printed_e2_unit_momentum",
        a,
        Some(2),
        r,
        tol.printed_energy,
    ));

    let node = node_locations(alpha, 2)?;
    let r = match node.as_slice() {
        [k] => (k - second_state_node(alpha)).abs(),
        _ => f64::INFINITY,
    };
    out.push(CheckRecord::new("node_n2", a, Some(2), r, tol.node));
    Ok(out)
}

fn conventional_checks(grid: UniformGrid, tol: &Tolerances) -> Result<Vec<CheckRecord>> {
    let two = LevyIndex::CONVENTIONAL;
    let a = Some(two);
    let positive: Vec<f64> = grid.momenta().into_iter().filter(|k| *k > 0.0).collect();
    let radius = default_exclusion_radius(&positive);
    let mut out = Vec::new();
    for n in 0..=CONVENTIONAL_MAX_N {
        let target = 2.0 * n as f64 + 1.0;
        let symbolic = local_energy_exact(two, n)?.constant_mismatch(target);
        let curve = energy_curve(two, n, &positive, radius)?;
        let sampled = curve
            .samples
            .iter()
            .map(|&(_, e)| (e - target).abs() / target)
            .fold(0.0, f64::max);
        out.push(CheckRecord::new(
            "conventional_energy",
            a,
            Some(n),
            symbolic.max(sampled),
            tol.conventional,
        ));
    }

    let probe = excited_state(two, 3)?;
    let eps = apply_eps(&probe).relative_mismatch(&probe)?;
    out.push(CheckRecord::new(
        "conventional_eps",
        a,
        None,
        eps,
        tol.conventional,
    ));

    let printed_worst = E2_TABLE_K
        .iter()
        .map(|&k| {
            closed_form_energy(two, 2, k, EnergyMode::PaperVerbatim).map(|e| (e - 5.0).abs() / 5.0)
        })
        .try_fold(0.0f64, |m, r| r.map(|r| m.max(r)))?;
    out.push(CheckRecord::new(
        "printed_e2_conventional",
        a,
        Some(2),
        printed_worst,
        tol.printed_energy,
    ));

    let psi = to_position(&sample(&ground_state(two), grid)?)?.normalized();
    let exact =
        SampledState::from_position_fn(grid, |x| C64::new((-x * x / 2.0).exp(), 0.0)).normalized();
    let gauss = grid
        .positions()
        .iter()
        .enumerate()
        .filter(|(_, x)| x.abs() <= 5.0)
        .map(|(m, _)| (psi.values[m] - exact.values[m]).norm() / exact.values[m].norm())
        .fold(0.0, f64::max);
    out.push(CheckRecord::new(
        "gaussian_transform",
        a,
        Some(0),
        gauss,
        tol.gaussian,
    ));
    Ok(out)
}

fn numeric_checks(
    alpha: LevyIndex,
    n: usize,
    grid: UniformGrid,
    tol: &Tolerances,
) -> Result<Vec<CheckRecord>> {
    let a = Some(alpha);
    let s = sample_state(alpha, n, grid)?;
    let p = to_position(&s)?;
    let back = to_momentum(&p)?;
    let scale = s.max_abs();
    let round_trip = s
        .values
        .iter()
        .zip(&back.values)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
        / scale;
    let unitarity = (p.l2_norm() - s.l2_norm()).abs() / s.l2_norm();
    let residual = residual_momentum(alpha, n, grid, Exclusions::default())?;
    Ok(vec![
        CheckRecord::new(
            "transform_round_trip",
            a,
            Some(n),
            round_trip,
            tol.round_trip,
        ),
        CheckRecord::new("transform_unitarity", a, Some(n), unitarity, tol.round_trip),
        CheckRecord::new("residual_momentum", a, Some(n), residual, tol.residual),
    ])
}

/// Printed vs canonical `E_2` for the configured α on [`E2_TABLE_K`].
pub fn e2_comparison(alphas: &[LevyIndex]) -> Vec<E2Comparison> {
    let mut rows = Vec::new();
    for &alpha in alphas {
        for &k in &E2_TABLE_K {
            let (Ok(canonical), Ok(printed)) = (
                closed_form_energy(alpha, 2, k, EnergyMode::Canonical),
                closed_form_energy(alpha, 2, k, EnergyMode::PaperVerbatim),
            ) else {
                continue;
            };
            let rel = (printed - canonical).abs() / canonical.abs();
            rows.push(E2Comparison {
                alpha: alpha.value(),
                k,
                canonical,
                printed,
                relative_difference: rel,
                agrees: rel <= 1e-12,
            });
        }
    }
    rows
}

/// Runs every check. Records are ordered deterministically.
pub fn run_verification(config: &RunConfig) -> Result<VerificationReport> {
    let tol = config.tolerances;
    let alphas = identity_alphas(config);

    let symbolic: Vec<Vec<CheckRecord>> = alphas
        .par_iter()
        .map(|&a| symbolic_checks(a, &tol))
        .collect::<Result<_>>()?;

    let jobs: Vec<(LevyIndex, usize)> = config
        .alphas
        .iter()
        .flat_map(|&a| config.states.iter().map(move |&n| (a, n)))
        .collect();
    let numeric: Vec<Vec<CheckRecord>> = jobs
        .par_iter()
        .map(|&(a, n)| numeric_checks(a, n, config.grid, &tol))
        .collect::<Result<_>>()?;

    let mut checks: Vec<CheckRecord> = symbolic.into_iter().flatten().collect();
    checks.extend(conventional_checks(config.grid, &tol)?);
    checks.extend(numeric.into_iter().flatten());

    Ok(VerificationReport::from_checks(
        checks,
        e2_comparison(&config.alphas),
    ))
}
