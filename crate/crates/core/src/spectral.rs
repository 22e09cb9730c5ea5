//! Numeric layer: uniform half-offset grids, the discrete momentum ↔ position
//! transform, the spectral Riesz derivative and grid residuals of the
//! eigen-identity.
//!
//! Momentum samples sit at `k_j = (j - N/2 + ½)Δk`, so `k = 0` is never
//! sampled. The dual position grid has `Δx = 2π/(NΔk)` and the same offset.
//! The transform approximates `ψ(x) = (2π)^{-1/2} ∫ φ(k) e^{ikx} dk` and is
//! exactly unitary in the discrete L² norms `Σ|φ|²Δk` and `Σ|ψ|²Δx`.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use rustfft::FftPlanner;

use crate::ladder::{excited_state, local_energy_exact, node_locations};
use crate::powerexp::PowerExpFunction;
use crate::{Error, LevyIndex, Result};

pub const DEFAULT_K_MAX: f64 = 20.0;
pub const DEFAULT_POINTS: usize = 4096;

/// Relative size of `|φ|` at the grid edge above which a state counts as truncated.
pub const TRUNCATION_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UniformGrid {
    k_max: f64,
    n_points: usize,
}

impl Default for UniformGrid {
    fn default() -> Self {
        UniformGrid {
            k_max: DEFAULT_K_MAX,
            n_points: DEFAULT_POINTS,
        }
    }
}

impl UniformGrid {
    pub fn new(k_max: f64, n_points: usize) -> Result<Self> {
        if !(k_max.is_finite() && k_max > 0.0) {
            return Err(Error::InvalidGrid(format!(
                "k_max must be positive, got {k_max}"
            )));
        }
        if n_points < 16 || !n_points.is_power_of_two() {
            return Err(Error::InvalidGrid(format!(
                "point count must be a power of two ≥ 16, got {n_points}"
            )));
        }
        Ok(UniformGrid { k_max, n_points })
    }

    pub fn k_max(&self) -> f64 {
        self.k_max
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn dk(&self) -> f64 {
        2.0 * self.k_max / self.n_points as f64
    }

    pub fn dx(&self) -> f64 {
        2.0 * PI / (self.n_points as f64 * self.dk())
    }

    fn offset_index(&self, j: usize) -> f64 {
        j as f64 - self.n_points as f64 / 2.0 + 0.5
    }

    pub fn momentum(&self, j: usize) -> f64 {
        self.offset_index(j) * self.dk()
    }

    pub fn position(&self, m: usize) -> f64 {
        self.offset_index(m) * self.dx()
    }

    pub fn momenta(&self) -> Vec<f64> {
        (0..self.n_points).map(|j| self.momentum(j)).collect()
    }

    pub fn positions(&self) -> Vec<f64> {
        (0..self.n_points).map(|m| self.position(m)).collect()
    }

    /// Same spacing, twice the extent.
    pub fn widened(&self) -> Self {
        UniformGrid {
            k_max: 2.0 * self.k_max,
            n_points: 2 * self.n_points,
        }
    }

    /// Same extent, half the spacing.
    pub fn refined(&self) -> Self {
        UniformGrid {
            k_max: self.k_max,
            n_points: 2 * self.n_points,
        }
    }

    /// `e^{-2πi·c·j/N}` with `c = (N-1)/2`, reduced exactly before scaling.
    fn offset_phase(&self, j: usize, sign: f64) -> C64 {
        let n = self.n_points as u128;
        let num = ((n - 1) * j as u128) % (2 * n);
        C64::from_polar(1.0, sign * PI * num as f64 / n as f64)
    }

    /// `e^{2πi c²/N}`.
    fn global_phase(&self, sign: f64) -> C64 {
        let n = self.n_points as u128;
        let num = ((n - 1) * (n - 1)) % (4 * n);
        C64::from_polar(1.0, sign * PI * num as f64 / (2 * n) as f64)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Representation {
    Momentum,
    Position,
}

impl Representation {
    fn name(self) -> &'static str {
        match self {
            Representation::Momentum => "momentum",
            Representation::Position => "position",
        }
    }
}

#[derive(Debug, Clone)]
pub struct SampledState {
    pub grid: UniformGrid,
    pub values: Vec<C64>,
    pub alpha: Option<LevyIndex>,
    pub n: Option<usize>,
    pub representation: Representation,
}

impl SampledState {
    /// Samples an arbitrary position-space function on the dual grid.
    pub fn from_position_fn(grid: UniformGrid, f: impl Fn(f64) -> C64) -> Self {
        SampledState {
            values: grid.positions().into_iter().map(f).collect(),
            grid,
            alpha: None,
            n: None,
            representation: Representation::Position,
        }
    }

    pub fn coordinates(&self) -> Vec<f64> {
        match self.representation {
            Representation::Momentum => self.grid.momenta(),
            Representation::Position => self.grid.positions(),
        }
    }

    pub fn spacing(&self) -> f64 {
        match self.representation {
            Representation::Momentum => self.grid.dk(),
            Representation::Position => self.grid.dx(),
        }
    }

    pub fn l2_norm(&self) -> f64 {
        (self.values.iter().map(|v| v.norm_sqr()).sum::<f64>() * self.spacing()).sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Unit discrete L² norm; the zero state is returned unchanged.
    pub fn normalized(&self) -> Self {
        let norm = self.l2_norm();
        if norm == 0.0 {
            return self.clone();
        }
        self.map_values(|v| v / norm)
    }

    /// Rotates the global phase so that the largest-magnitude sample is real
    /// and positive. Samples within a relative 1e-9 of the maximum count as
    /// ties and the first of them is used.
    pub fn phase_fixed(&self) -> Self {
        let peak = self.max_abs();
        if peak == 0.0 {
            return self.clone();
        }
        let best = *self
            .values
            .iter()
            .find(|v| v.norm() >= peak * (1.0 - 1e-9))
            .expect("the maximum is attained");
        let rot = best.conj() / best.norm();
        self.map_values(|v| v * rot)
    }

    fn map_values(&self, f: impl Fn(C64) -> C64) -> Self {
        SampledState {
            values: self.values.iter().map(|&v| f(v)).collect(),
            ..self.clone()
        }
    }

    fn expect(&self, rep: Representation) -> Result<()> {
        if self.representation == rep {
            Ok(())
        } else {
            Err(Error::WrongRepresentation {
                expected: rep.name(),
            })
        }
    }
}

/// Pointwise evaluation on the momentum grid.
pub fn sample(f: &PowerExpFunction, grid: UniformGrid) -> Result<SampledState> {
    let values = grid
        .momenta()
        .into_iter()
        .map(|k| f.evaluate(k))
        .collect::<Result<Vec<_>>>()?;
    Ok(SampledState {
        grid,
        values,
        alpha: Some(f.alpha()),
        n: None,
        representation: Representation::Momentum,
    })
}

/// Samples `φ_n` on the grid.
pub fn sample_state(alpha: LevyIndex, n: usize, grid: UniformGrid) -> Result<SampledState> {
    let phi = excited_state(alpha, n)?;
    let mut s = sample(&phi, grid)?;
    s.n = Some(n);
    Ok(s)
}

/// `|f(±k_max)| / max|f|` on the grid.
pub fn edge_ratio(f: &PowerExpFunction, grid: UniformGrid) -> Result<f64> {
    let s = sample(f, grid)?;
    let max = s.max_abs();
    if max == 0.0 {
        return Ok(0.0);
    }
    let edge = s.values[0].norm().max(s.values[grid.n_points() - 1].norm());
    Ok(edge / max)
}

/// Widens the grid (keeping `Δk`) until `f` has decayed below
/// [`TRUNCATION_TOL`] at the edges; gives up after a few doublings.
pub fn resolve_grid(f: &PowerExpFunction, grid: UniformGrid) -> Result<UniformGrid> {
    let mut g = grid;
    for _ in 0..4 {
        let ratio = edge_ratio(f, g)?;
        if ratio <= TRUNCATION_TOL {
            return Ok(g);
        }
        g = g.widened();
    }
    Err(Error::Truncation(edge_ratio(f, g)?))
}

fn fft(values: &mut [C64], inverse: bool) {
    let mut planner = FftPlanner::new();
    let plan = if inverse {
        planner.plan_fft_inverse(values.len())
    } else {
        planner.plan_fft_forward(values.len())
    };
    plan.process(values);
}

/// Momentum samples to position samples on the dual grid.
pub fn to_position(s: &SampledState) -> Result<SampledState> {
    s.expect(Representation::Momentum)?;
    let g = s.grid;
    let mut buf: Vec<C64> = s
        .values
        .iter()
        .enumerate()
        .map(|(j, &v)| v * g.offset_phase(j, -1.0))
        .collect();
    fft(&mut buf, true);
    let pre = g.global_phase(1.0) * (g.dk() / (2.0 * PI).sqrt());
    let values = buf
        .into_iter()
        .enumerate()
        .map(|(m, v)| v * g.offset_phase(m, -1.0) * pre)
        .collect();
    Ok(SampledState {
        values,
        representation: Representation::Position,
        ..s.clone()
    })
}

/// Exact inverse of [`to_position`].
pub fn to_momentum(s: &SampledState) -> Result<SampledState> {
    s.expect(Representation::Position)?;
    let g = s.grid;
    let mut buf: Vec<C64> = s
        .values
        .iter()
        .enumerate()
        .map(|(m, &v)| v * g.offset_phase(m, 1.0))
        .collect();
    fft(&mut buf, false);
    let pre = g.global_phase(-1.0) * (g.dx() / (2.0 * PI).sqrt());
    let values = buf
        .into_iter()
        .enumerate()
        .map(|(j, v)| v * g.offset_phase(j, 1.0) * pre)
        .collect();
    Ok(SampledState {
        values,
        representation: Representation::Momentum,
        ..s.clone()
    })
}

/// `d^ν/dx^ν` in the Riesz sense: multiplication by `-|k|^ν` in momentum space.
pub fn riesz_apply(s: &SampledState, order: f64) -> Result<SampledState> {
    s.expect(Representation::Position)?;
    if !(order > 0.0 && order <= 2.0) {
        return Err(Error::RieszOrderOutOfRange(order));
    }
    let mut m = to_momentum(s)?;
    for (j, v) in m.values.iter_mut().enumerate() {
        *v *= -m.grid.momentum(j).abs().powf(order);
    }
    to_position(&m)
}

/// Eighth-order central second-difference weights, `f''(k) ≈ Σ w_i f(k + iΔk) / Δk²`.
const SECOND_DIFF_8: [f64; 9] = [
    -1.0 / 560.0,
    8.0 / 315.0,
    -1.0 / 5.0,
    8.0 / 5.0,
    -205.0 / 72.0,
    8.0 / 5.0,
    -1.0 / 5.0,
    8.0 / 315.0,
    -1.0 / 560.0,
];

/// Central second difference at interior index `j` (`4 ≤ j < N-4`).
pub fn second_difference(values: &[C64], j: usize, h: f64) -> C64 {
    SECOND_DIFF_8
        .iter()
        .enumerate()
        .map(|(i, &w)| values[j + i - 4] * w)
        .sum::<C64>()
        / (h * h)
}

/// Windows removed from residual checks: `|k| ≤ origin_radius` and
/// `||k| - node| ≤ node_radius`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Exclusions {
    pub origin_radius: f64,
    pub node_radius: f64,
}

impl Default for Exclusions {
    fn default() -> Self {
        Exclusions {
            origin_radius: 0.25,
            node_radius: 0.05,
        }
    }
}

/// Max over admitted grid points of
/// `|(|k|^α φ_n - φ_n'') - E_n(k) φ_n| / max|φ_n|`, with `φ_n''` from an
/// eighth-order stencil that never straddles the origin.
pub fn residual_momentum(
    alpha: LevyIndex,
    n: usize,
    grid: UniformGrid,
    exclusions: Exclusions,
) -> Result<f64> {
    let phi = excited_state(alpha, n)?;
    let energy = local_energy_exact(alpha, n)?;
    let nodes = node_locations(alpha, n)?;
    let s = sample(&phi, grid)?;
    let h = grid.dk();
    let n_pts = grid.n_points();

    let admitted: Vec<usize> = (4..n_pts - 4)
        .filter(|&j| {
            let k = grid.momentum(j);
            let straddles = grid.momentum(j - 4).signum() != grid.momentum(j + 4).signum();
            !straddles
                && k.abs() > exclusions.origin_radius
                && nodes
                    .iter()
                    .all(|&nd| (k.abs() - nd).abs() > exclusions.node_radius)
        })
        .collect();
    if admitted.is_empty() {
        return Err(Error::EmptyCurve);
    }
    let scale = admitted
        .iter()
        .map(|&j| s.values[j].norm())
        .fold(0.0, f64::max);
    if scale == 0.0 {
        return Ok(0.0);
    }

    let mut worst = 0.0f64;
    for &j in &admitted {
        let k = grid.momentum(j);
        let v = s.values[j];
        let lhs = v * k.abs().powf(alpha.value()) - second_difference(&s.values, j, h);
        let rhs = v * energy.evaluate(k)?;
        worst = worst.max((lhs - rhs).norm() / scale);
    }
    Ok(worst)
}
