//! Ladder construction `φ_n = B^n φ_0`, exact local energies
//! `E_n(k, α) = (H φ_n)(k) / φ_n(k)`, the published closed forms for
//! `n ≤ 2`, and node finding.

use num_complex::Complex64 as C64;

use crate::operators::{apply_b, apply_h};
use crate::powerexp::{Parity, PowerExpFunction, PowerSum, PowerTerm};
use crate::{Error, LevyIndex, Result};

/// Largest excitation level [`excited_state`] will build by default.
pub const DEFAULT_MAX_STATE: usize = 12;

/// Excitation level `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StateIndex(pub usize);

impl From<usize> for StateIndex {
    fn from(n: usize) -> Self {
        StateIndex(n)
    }
}

/// `φ_0(k) = exp(-2|k|^{α/2+1}/(α+2))`, the kernel of `A`.
pub fn ground_state(alpha: LevyIndex) -> PowerExpFunction {
    PowerExpFunction::envelope_only(alpha)
}

/// `B^n φ_0`, unnormalized.
pub fn excited_state(alpha: LevyIndex, n: impl Into<StateIndex>) -> Result<PowerExpFunction> {
    excited_state_with_max(alpha, n, DEFAULT_MAX_STATE)
}

pub fn excited_state_with_max(
    alpha: LevyIndex,
    n: impl Into<StateIndex>,
    max: usize,
) -> Result<PowerExpFunction> {
    let StateIndex(n) = n.into();
    if n > max {
        return Err(Error::StateIndexTooLarge { n, max });
    }
    Ok((0..n).fold(ground_state(alpha), |phi, _| apply_b(&phi)))
}

/// `numerator / denominator`, both envelope-free power sums.
#[derive(Debug, Clone)]
pub struct RationalPowerSum {
    pub numerator: PowerSum,
    pub denominator: PowerSum,
    pub alpha: LevyIndex,
}

impl RationalPowerSum {
    pub fn new(alpha: LevyIndex, numerator: PowerSum, denominator: PowerSum) -> Result<Self> {
        if denominator.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(RationalPowerSum {
            numerator,
            denominator,
            alpha,
        })
    }

    /// Divides through by the lowest-power monomial of the denominator, and by
    /// its coefficient too when the denominator is a single term.
    pub fn simplified(&self) -> Self {
        let lead = self.denominator.terms()[0];
        let mut factor = PowerTerm::new(C64::new(1.0, 0.0), -lead.power, lead.parity);
        if self.denominator.len() == 1 {
            factor.coeff = lead.coeff.inv();
        }
        let mut denominator = self.denominator.mul_term(&factor);
        if self.denominator.len() == 1 {
            // exactly one, independent of how the power shift rounded
            denominator = PowerSum::one();
        }
        RationalPowerSum {
            numerator: self.numerator.mul_term(&factor),
            denominator,
            alpha: self.alpha,
        }
    }

    pub fn evaluate_complex(&self, k: f64) -> Result<C64> {
        let den = self.denominator.evaluate(k)?;
        let num = self.numerator.evaluate(k)?;
        let scale = self
            .denominator
            .terms()
            .iter()
            .map(|t| t.evaluate(k).map(|v| v.norm()))
            .try_fold(0.0f64, |m, v| v.map(|v| m.max(v)))?;
        if den.norm() <= 1e-12 * scale || den.norm() == 0.0 {
            return Err(Error::Evaluation {
                k,
                reason: "denominator vanishes (state node)",
            });
        }
        Ok(num / den)
    }

    /// Real part of the ratio; states carry a common phase, so the ratio is real.
    pub fn evaluate(&self, k: f64) -> Result<f64> {
        self.evaluate_complex(k).map(|v| v.re)
    }

    /// Relative mismatch of the cross products `n₁ d₂` and `n₂ d₁`.
    pub fn relative_mismatch(&self, other: &RationalPowerSum) -> f64 {
        let lhs = self.numerator.mul(&other.denominator);
        let rhs = other.numerator.mul(&self.denominator);
        lhs.relative_mismatch(&rhs)
    }

    /// Coefficient-by-coefficient comparison of numerators and denominators.
    pub fn coefficient_mismatch(&self, other: &RationalPowerSum) -> f64 {
        self.numerator
            .relative_mismatch(&other.numerator)
            .max(self.denominator.relative_mismatch(&other.denominator))
    }

    /// Mismatch between the ratio and a constant, via `numerator - c·denominator`.
    pub fn constant_mismatch(&self, c: f64) -> f64 {
        let scaled = self.denominator.scale(C64::new(c, 0.0));
        self.numerator.relative_mismatch(&scaled)
    }
}

/// Exact `E_n = H φ_n / φ_n` with the envelope cancelled, simplified.
pub fn local_energy_exact(alpha: LevyIndex, n: impl Into<StateIndex>) -> Result<RationalPowerSum> {
    let phi = excited_state(alpha, n)?;
    local_energy_of(&phi)
}

/// `H f / f` for an arbitrary enveloped family member.
pub fn local_energy_of(phi: &PowerExpFunction) -> Result<RationalPowerSum> {
    let h = apply_h(phi);
    Ok(RationalPowerSum::new(phi.alpha(), h.body().clone(), phi.body().clone())?.simplified())
}

/// Published `E_0 = (α/2)|k|^{α/2-1}` as a rational power sum.
pub fn printed_e0(alpha: LevyIndex) -> RationalPowerSum {
    let h = alpha.half();
    RationalPowerSum {
        numerator: PowerSum::monomial(PowerTerm::even(h, h - 1.0)),
        denominator: PowerSum::one(),
        alpha,
    }
}

/// Published `E_1 = 3(α/2)|k|^{α/2-1} - (α/2)(α/2-1)|k|^{-2}`.
pub fn printed_e1(alpha: LevyIndex) -> RationalPowerSum {
    let h = alpha.half();
    RationalPowerSum {
        numerator: PowerSum::from_terms([
            PowerTerm::even(3.0 * h, h - 1.0),
            PowerTerm::even(-h * (h - 1.0), -2.0),
        ]),
        denominator: PowerSum::one(),
        alpha,
    }
}

/// `E_2 = [(11α²/2 - 6α)|k|^{α/2-1} - 10α|k|^α - α(α/2-1)(α/2-2)|k|^{-2}] / (α - 4|k|^{α/2+1})`.
pub fn canonical_e2(alpha: LevyIndex) -> RationalPowerSum {
    let a = alpha.value();
    let h = alpha.half();
    RationalPowerSum {
        numerator: PowerSum::from_terms([
            PowerTerm::even(5.5 * a * a - 6.0 * a, h - 1.0),
            PowerTerm::even(-10.0 * a, a),
            PowerTerm::even(-a * (h - 1.0) * (h - 2.0), -2.0),
        ]),
        denominator: PowerSum::from_terms([
            PowerTerm::even(a, 0.0),
            PowerTerm::even(-4.0, h + 1.0),
        ]),
        alpha,
    }
}

/// The published `E_2` brought over a common denominator, with the exponent
/// of the `2|k|^q` term in the first bracket as a parameter. The printed
/// value is `q = 3α/2 - 1`; the ratio `Hφ_2/φ_2` corresponds to `q = α/2 + 1`.
pub fn published_e2_with_exponent(alpha: LevyIndex, q: f64) -> RationalPowerSum {
    let a = alpha.value();
    let h = alpha.half();
    // 5(α/2)|k|^{α/2-1}(α - 1 - 2|k|^q) + (α/2)(α/2-1)|k|^{-2}(2 - α/2 + |k|^{α/2+1})
    RationalPowerSum {
        numerator: PowerSum::from_terms([
            PowerTerm::even(5.0 * h * (a - 1.0), h - 1.0),
            PowerTerm::even(-10.0 * h, h - 1.0 + q),
            PowerTerm::even(h * (h - 1.0) * (2.0 - h), -2.0),
            PowerTerm::even(h * (h - 1.0), h - 1.0),
        ]),
        denominator: PowerSum::from_terms([
            PowerTerm::even(h, 0.0),
            PowerTerm::even(-2.0, h + 1.0),
        ]),
        alpha,
    }
}

/// Which reading of the published `E_2` to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EnergyMode {
    /// The form reproduced by `Hφ_2/φ_2`.
    #[default]
    Canonical,
    /// The formula exactly as printed, exponent `3α/2 - 1` included.
    PaperVerbatim,
}

/// Scalar evaluation of the closed-form energies for `n ∈ {0, 1, 2}`.
pub fn closed_form_energy(alpha: LevyIndex, n: usize, k: f64, mode: EnergyMode) -> Result<f64> {
    if n > 2 {
        return Err(Error::NoClosedForm(n));
    }
    if k == 0.0 || !k.is_finite() {
        return Err(Error::Evaluation {
            k,
            reason: "closed-form energies are singular at the origin",
        });
    }
    let a = alpha.value();
    let h = alpha.half();
    let ak = k.abs();
    let base = a / (2.0 * ak.powf(1.0 - h));
    match n {
        0 => Ok(base),
        1 => Ok(3.0 * base - a / (2.0 * ak * ak) * (h - 1.0)),
        _ => {
            let node_den = h - 2.0 * ak.powf(h + 1.0);
            if node_den.abs() <= 1e-12 * h {
                return Err(Error::Evaluation {
                    k,
                    reason: "E_2 is singular at the node of φ_2",
                });
            }
            match mode {
                EnergyMode::Canonical => {
                    let num = (5.5 * a * a - 6.0 * a) * ak.powf(h - 1.0)
                        - 10.0 * a * ak.powf(a)
                        - a * (h - 1.0) * (h - 2.0) / (ak * ak);
                    Ok(num / (a - 4.0 * ak.powf(h + 1.0)))
                }
                EnergyMode::PaperVerbatim => {
                    let first = 5.0 * base * ((a - 1.0 - 2.0 * ak.powf(1.5 * a - 1.0)) / node_den);
                    let second =
                        a / (2.0 * ak * ak) * (h - 1.0) * ((2.0 - h + ak.powf(h + 1.0)) / node_den);
                    Ok(first + second)
                }
            }
        }
    }
}

/// Bracketing scan plus bisection for positive roots.
#[derive(Debug, Clone, Copy)]
pub struct NodeSearch {
    pub k_max: f64,
    pub scan_step: f64,
    pub root_tol: f64,
}

impl Default for NodeSearch {
    fn default() -> Self {
        NodeSearch {
            k_max: 10.0,
            scan_step: 1e-3,
            root_tol: 1e-10,
        }
    }
}

/// Positive zeros of the power-sum part of `φ_n`.
pub fn node_locations(alpha: LevyIndex, n: impl Into<StateIndex>) -> Result<Vec<f64>> {
    let phi = excited_state(alpha, n)?;
    node_locations_of(phi.body(), NodeSearch::default())
}

pub fn node_locations_of(body: &PowerSum, search: NodeSearch) -> Result<Vec<f64>> {
    let Some(lead) = body
        .terms()
        .iter()
        .max_by(|a, b| a.coeff.norm().total_cmp(&b.coeff.norm()))
    else {
        return Ok(Vec::new());
    };
    // Rotate away the common phase so the body is real for k > 0.
    let phase = (lead.coeff / lead.coeff.norm()).conj();
    let g = |k: f64| body.evaluate(k).map(|v| (v * phase).re);

    let mut roots = Vec::new();
    let steps = (search.k_max / search.scan_step).floor() as usize;
    let mut lo = search.scan_step;
    let mut g_lo = g(lo)?;
    for i in 2..=steps {
        let hi = i as f64 * search.scan_step;
        let g_hi = g(hi)?;
        if g_lo == 0.0 {
            roots.push(lo);
        } else if g_lo.signum() != g_hi.signum() && g_hi != 0.0 {
            let (mut a, mut b, mut ga) = (lo, hi, g_lo);
            while b - a > search.root_tol {
                let mid = 0.5 * (a + b);
                let gm = g(mid)?;
                if gm == 0.0 {
                    a = mid;
                    b = mid;
                    break;
                }
                if gm.signum() == ga.signum() {
                    a = mid;
                    ga = gm;
                } else {
                    b = mid;
                }
            }
            roots.push(0.5 * (a + b));
        }
        lo = hi;
        g_lo = g_hi;
    }
    Ok(roots)
}

/// `(α/4)^{2/(α+2)}`, the positive node of `φ_2`.
pub fn second_state_node(alpha: LevyIndex) -> f64 {
    let a = alpha.value();
    (a / 4.0).powf(2.0 / (a + 2.0))
}

/// Sampled `E_n(k)` with windows around the origin and the nodes removed.
#[derive(Debug, Clone)]
pub struct EnergyCurve {
    pub alpha: LevyIndex,
    pub n: usize,
    pub samples: Vec<(f64, f64)>,
    pub excluded_windows: Vec<(f64, f64)>,
}

/// Five grid steps, the default half-width of an exclusion window.
pub fn default_exclusion_radius(k_grid: &[f64]) -> f64 {
    let step = k_grid
        .windows(2)
        .map(|w| (w[1] - w[0]).abs())
        .filter(|d| *d > 0.0)
        .fold(f64::INFINITY, f64::min);
    if step.is_finite() {
        5.0 * step
    } else {
        0.0
    }
}

pub fn energy_curve(
    alpha: LevyIndex,
    n: impl Into<StateIndex>,
    k_grid: &[f64],
    exclusion_radius: f64,
) -> Result<EnergyCurve> {
    let n = n.into();
    let energy = local_energy_exact(alpha, n)?;
    let nodes = node_locations(alpha, n)?;

    let mut windows = vec![(-exclusion_radius, exclusion_radius)];
    for &node in &nodes {
        windows.push((-node - exclusion_radius, -node + exclusion_radius));
        windows.push((node - exclusion_radius, node + exclusion_radius));
    }
    windows.sort_by(|a, b| a.0.total_cmp(&b.0));

    let excluded = |k: f64| k == 0.0 || windows.iter().any(|&(lo, hi)| k >= lo && k <= hi);
    let samples = k_grid
        .iter()
        .filter(|&&k| !excluded(k))
        .map(|&k| energy.evaluate(k).map(|e| (k, e)))
        .collect::<Result<Vec<_>>>()?;
    if samples.is_empty() {
        return Err(Error::EmptyCurve);
    }
    Ok(EnergyCurve {
        alpha,
        n: n.0,
        samples,
        excluded_windows: windows,
    })
}

/// Local energy ratio evaluated directly from sampled `Hφ` and `φ`; used as
/// the numeric cross-check of [`local_energy_exact`].
pub fn ratio_at(phi: &PowerExpFunction, k: f64) -> Result<f64> {
    let h = apply_h(phi).evaluate(k)?;
    let v = phi.evaluate(k)?;
    Ok((h / v).re)
}

/// Parity of `φ_n`: even for even `n`, odd for odd `n`.
pub fn state_parity(n: usize) -> Parity {
    if n.is_multiple_of(2) {
        Parity::Even
    } else {
        Parity::Odd
    }
}
