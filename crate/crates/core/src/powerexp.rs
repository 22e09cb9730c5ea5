//! Exact arithmetic on the closed function family
//! `f(k) = (Σ c_j |k|^{p_j} sgn(k)^{s_j}) · exp(-2|k|^{α/2+1}/(α+2))`, `k ≠ 0`.
//!
//! A function is a [`PowerSum`] body with an optional [`Envelope`]. Sums are
//! kept in canonical form: one term per `(power, parity)` key, terms sorted by
//! that key, and coefficients that are negligible relative to the largest
//! input coefficient dropped.
//!
//! Derivatives are taken pointwise for `k ≠ 0`. Differentiating `sgn(k)`
//! would produce a `2δ(k)` contribution at the origin; such distributional
//! terms are not part of the family and are never generated.

use std::cmp::Ordering;
use std::fmt;

use num_complex::Complex64 as C64;
use rand::Rng;

use crate::{Error, LevyIndex, Result};

/// Default relative tolerance below which merged coefficients are dropped.
pub const DEFAULT_COMBINE_TOL: f64 = 1e-12;

/// Absolute tolerance under which two exponents are treated as the same key.
///
/// Exponents built along different paths (`(p - 1) + α/2` vs `(p + α/2) - 1`)
/// can differ in the last bit, so keys are matched with this slack.
pub const POWER_MATCH_TOL: f64 = 1e-12;

/// Whether a term carries a factor `sgn(k)`. `sgn(k)² = 1`, so parity is
/// stored modulo 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    #[inline]
    pub fn flip(self) -> Parity {
        match self {
            Parity::Even => Parity::Odd,
            Parity::Odd => Parity::Even,
        }
    }

    /// Parity of a product.
    #[inline]
    pub fn combine(self, other: Parity) -> Parity {
        if self == other {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    /// `sgn(k)^s` with `sgn(0) = 0`.
    #[inline]
    pub fn factor_at(self, k: f64) -> f64 {
        match self {
            Parity::Even => 1.0,
            Parity::Odd => {
                if k > 0.0 {
                    1.0
                } else if k < 0.0 {
                    -1.0
                } else {
                    0.0
                }
            }
        }
    }
}

/// A single monomial `coeff · |k|^power · sgn(k)^parity`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerTerm {
    pub coeff: C64,
    pub power: f64,
    pub parity: Parity,
}

impl PowerTerm {
    pub fn new(coeff: C64, power: f64, parity: Parity) -> Self {
        PowerTerm {
            coeff,
            power,
            parity,
        }
    }

    pub fn even(coeff: impl Into<C64>, power: f64) -> Self {
        PowerTerm::new(coeff.into(), power, Parity::Even)
    }

    pub fn odd(coeff: impl Into<C64>, power: f64) -> Self {
        PowerTerm::new(coeff.into(), power, Parity::Odd)
    }

    pub fn mul(&self, other: &PowerTerm) -> PowerTerm {
        PowerTerm {
            coeff: self.coeff * other.coeff,
            power: self.power + other.power,
            parity: self.parity.combine(other.parity),
        }
    }

    /// Pointwise derivative for `k ≠ 0`: `d/dk |k|^p sgn^s = p |k|^{p-1} sgn^{s+1}`.
    pub fn derivative(&self) -> PowerTerm {
        PowerTerm {
            coeff: self.coeff * self.power,
            power: self.power - 1.0,
            parity: self.parity.flip(),
        }
    }

    pub fn evaluate(&self, k: f64) -> Result<C64> {
        if k == 0.0 && self.power < 0.0 {
            return Err(Error::Evaluation {
                k,
                reason: "negative power at the origin",
            });
        }
        Ok(self.coeff * (k.abs().powf(self.power) * self.parity.factor_at(k)))
    }

    fn key_cmp(&self, other: &PowerTerm) -> Ordering {
        self.power
            .total_cmp(&other.power)
            .then(self.parity.cmp(&other.parity))
    }
}

impl fmt::Display for PowerTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}{:+}i)·|k|^{}",
            self.coeff.re, self.coeff.im, self.power
        )?;
        if self.parity == Parity::Odd {
            write!(f, "·sgn(k)")?;
        }
        Ok(())
    }
}

/// Largest coefficient magnitude of a set of terms.
fn max_abs(terms: &[PowerTerm]) -> f64 {
    terms.iter().map(|t| t.coeff.norm()).fold(0.0, f64::max)
}

/// Merge terms sharing a `(power, parity)` key; no dropping, output sorted.
fn merge(mut raw: Vec<PowerTerm>) -> Vec<PowerTerm> {
    raw.sort_by(|a, b| a.parity.cmp(&b.parity).then(a.power.total_cmp(&b.power)));
    let mut merged: Vec<PowerTerm> = Vec::with_capacity(raw.len());
    for term in raw {
        match merged.last_mut() {
            Some(last)
                if last.parity == term.parity
                    && (last.power - term.power).abs() <= POWER_MATCH_TOL =>
            {
                last.coeff += term.coeff;
            }
            _ => merged.push(term),
        }
    }
    merged.sort_by(PowerTerm::key_cmp);
    merged
}

/// A finite signed power sum `Σ c_j |k|^{p_j} sgn(k)^{s_j}` in canonical form.
#[derive(Debug, Clone)]
pub struct PowerSum {
    terms: Vec<PowerTerm>,
    combine_tol: f64,
}

impl Default for PowerSum {
    fn default() -> Self {
        PowerSum::zero()
    }
}

impl PowerSum {
    pub fn zero() -> Self {
        PowerSum {
            terms: Vec::new(),
            combine_tol: DEFAULT_COMBINE_TOL,
        }
    }

    pub fn one() -> Self {
        PowerSum::from_terms([PowerTerm::even(1.0, 0.0)])
    }

    pub fn monomial(term: PowerTerm) -> Self {
        PowerSum::from_terms([term])
    }

    pub fn from_terms(terms: impl IntoIterator<Item = PowerTerm>) -> Self {
        PowerSum::from_terms_with_tol(terms, DEFAULT_COMBINE_TOL)
    }

    pub fn from_terms_with_tol(
        terms: impl IntoIterator<Item = PowerTerm>,
        combine_tol: f64,
    ) -> Self {
        PowerSum::canonical(terms.into_iter().collect(), combine_tol)
    }

    /// Builds a canonical sum. The drop threshold is relative to the largest
    /// coefficient among the *raw* terms, so cancellation residue is removed.
    fn canonical(raw: Vec<PowerTerm>, combine_tol: f64) -> Self {
        let threshold = combine_tol * max_abs(&raw);
        let terms = merge(raw)
            .into_iter()
            .filter(|t| t.coeff.norm() > threshold && t.coeff != C64::new(0.0, 0.0))
            .collect();
        PowerSum { terms, combine_tol }
    }

    pub fn terms(&self) -> &[PowerTerm] {
        &self.terms
    }

    pub fn combine_tol(&self) -> f64 {
        self.combine_tol
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn max_abs_coeff(&self) -> f64 {
        max_abs(&self.terms)
    }

    pub fn min_power(&self) -> Option<f64> {
        self.terms.first().map(|t| t.power)
    }

    pub fn has_negative_power(&self) -> bool {
        self.terms.iter().any(|t| t.power < 0.0)
    }

    /// Re-merges and re-filters; idempotent on canonical input.
    pub fn normalize(&self) -> PowerSum {
        PowerSum::canonical(self.terms.clone(), self.combine_tol)
    }

    fn rebuild(&self, raw: Vec<PowerTerm>) -> PowerSum {
        PowerSum::canonical(raw, self.combine_tol)
    }

    pub fn add(&self, other: &PowerSum) -> PowerSum {
        let raw = self
            .terms
            .iter()
            .chain(other.terms.iter())
            .copied()
            .collect();
        self.rebuild(raw)
    }

    pub fn sub(&self, other: &PowerSum) -> PowerSum {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> PowerSum {
        self.scale(C64::new(-1.0, 0.0))
    }

    pub fn scale(&self, factor: C64) -> PowerSum {
        let raw = self
            .terms
            .iter()
            .map(|t| PowerTerm {
                coeff: t.coeff * factor,
                ..*t
            })
            .collect();
        self.rebuild(raw)
    }

    pub fn mul_term(&self, term: &PowerTerm) -> PowerSum {
        self.rebuild(self.terms.iter().map(|t| t.mul(term)).collect())
    }

    pub fn mul(&self, other: &PowerSum) -> PowerSum {
        let raw = self
            .terms
            .iter()
            .flat_map(|a| other.terms.iter().map(move |b| a.mul(b)))
            .collect();
        self.rebuild(raw)
    }

    /// Multiplies by `|k|^power sgn(k)^parity`.
    pub fn shift(&self, power: f64, parity: Parity) -> PowerSum {
        self.mul_term(&PowerTerm::new(C64::new(1.0, 0.0), power, parity))
    }

    /// Termwise pointwise derivative (no envelope).
    pub fn derivative(&self) -> PowerSum {
        self.rebuild(self.terms.iter().map(PowerTerm::derivative).collect())
    }

    pub fn evaluate(&self, k: f64) -> Result<C64> {
        self.terms
            .iter()
            .try_fold(C64::new(0.0, 0.0), |acc, t| Ok(acc + t.evaluate(k)?))
    }

    /// Largest coefficient of `self - other` after key merging (no dropping),
    /// relative to the largest coefficient of either operand. Zero when both
    /// sums are empty.
    pub fn relative_mismatch(&self, other: &PowerSum) -> f64 {
        let scale = self.max_abs_coeff().max(other.max_abs_coeff());
        if scale == 0.0 {
            return 0.0;
        }
        let raw: Vec<PowerTerm> = self
            .terms
            .iter()
            .copied()
            .chain(other.terms.iter().map(|t| PowerTerm {
                coeff: -t.coeff,
                ..*t
            }))
            .collect();
        max_abs(&merge(raw)) / scale
    }

    pub fn approx_eq(&self, other: &PowerSum, tol: f64) -> bool {
        self.relative_mismatch(other) <= tol
    }
}

impl fmt::Display for PowerSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{t}")?;
        }
        Ok(())
    }
}

/// The stretched exponential `exp(-c |k|^γ)` with `γ = α/2 + 1`, `c = 2/(α+2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Envelope {
    alpha: LevyIndex,
}

impl Envelope {
    pub fn new(alpha: LevyIndex) -> Self {
        Envelope { alpha }
    }

    pub fn alpha(&self) -> LevyIndex {
        self.alpha
    }

    pub fn gamma(&self) -> f64 {
        self.alpha.half() + 1.0
    }

    pub fn c(&self) -> f64 {
        2.0 / (self.alpha.value() + 2.0)
    }

    pub fn evaluate(&self, k: f64) -> f64 {
        (-self.c() * k.abs().powf(self.gamma())).exp()
    }

    /// `env'/env = -cγ |k|^{γ-1} sgn(k)`, with `cγ = 1` applied analytically.
    pub fn log_derivative(&self) -> PowerTerm {
        PowerTerm::odd(-1.0, self.alpha.half())
    }
}

/// Member of the closed family: a power-sum body, optionally times the
/// envelope. `α` is fixed per instance.
#[derive(Debug, Clone)]
pub struct PowerExpFunction {
    alpha: LevyIndex,
    body: PowerSum,
    has_envelope: bool,
}

impl PowerExpFunction {
    pub fn new(alpha: LevyIndex, body: PowerSum, has_envelope: bool) -> Self {
        PowerExpFunction {
            alpha,
            body,
            has_envelope,
        }
    }

    /// `body · env`.
    pub fn enveloped(alpha: LevyIndex, body: PowerSum) -> Self {
        PowerExpFunction::new(alpha, body, true)
    }

    /// The bare envelope, i.e. the ground state shape.
    pub fn envelope_only(alpha: LevyIndex) -> Self {
        PowerExpFunction::enveloped(alpha, PowerSum::one())
    }

    /// The zero function carrying the envelope flag.
    pub fn zero(alpha: LevyIndex) -> Self {
        PowerExpFunction::enveloped(alpha, PowerSum::zero())
    }

    pub fn alpha(&self) -> LevyIndex {
        self.alpha
    }

    pub fn body(&self) -> &PowerSum {
        &self.body
    }

    pub fn has_envelope(&self) -> bool {
        self.has_envelope
    }

    pub fn envelope(&self) -> Option<Envelope> {
        self.has_envelope.then(|| Envelope::new(self.alpha))
    }

    pub fn is_zero(&self) -> bool {
        self.body.is_zero()
    }

    pub fn with_body(&self, body: PowerSum) -> Self {
        PowerExpFunction {
            alpha: self.alpha,
            body,
            has_envelope: self.has_envelope,
        }
    }

    pub fn normalize(&self) -> Self {
        self.with_body(self.body.normalize())
    }

    pub fn check_compatible(&self, other: &PowerExpFunction) -> Result<()> {
        if !self.alpha.same_as(other.alpha) {
            return Err(Error::AlphaMismatch(
                self.alpha.value(),
                other.alpha.value(),
            ));
        }
        if self.has_envelope != other.has_envelope {
            return Err(Error::EnvelopeMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &PowerExpFunction) -> Result<Self> {
        self.check_compatible(other)?;
        Ok(self.with_body(self.body.add(&other.body)))
    }

    pub fn sub(&self, other: &PowerExpFunction) -> Result<Self> {
        self.check_compatible(other)?;
        Ok(self.with_body(self.body.sub(&other.body)))
    }

    pub fn scale(&self, factor: C64) -> Self {
        self.with_body(self.body.scale(factor))
    }

    pub fn neg(&self) -> Self {
        self.with_body(self.body.neg())
    }

    /// Multiplies by `|k|^power sgn(k)^parity`.
    pub fn mul_power(&self, power: f64, parity: Parity) -> Self {
        self.with_body(self.body.shift(power, parity))
    }

    pub fn mul_term(&self, term: &PowerTerm) -> Self {
        self.with_body(self.body.mul_term(term))
    }

    /// Multiplies by an envelope-free power sum.
    pub fn mul_sum(&self, factor: &PowerSum) -> Self {
        self.with_body(self.body.mul(factor))
    }

    /// Pointwise `d/dk` for `k ≠ 0`.
    pub fn differentiate(&self) -> Self {
        let mut body = self.body.derivative();
        if let Some(env) = self.envelope() {
            body = body.add(&self.body.mul_term(&env.log_derivative()));
        }
        self.with_body(body)
    }

    pub fn evaluate(&self, k: f64) -> Result<C64> {
        let value = self.body.evaluate(k)?;
        Ok(match self.envelope() {
            Some(env) => value * env.evaluate(k),
            None => value,
        })
    }

    /// See [`PowerSum::relative_mismatch`].
    pub fn relative_mismatch(&self, other: &PowerExpFunction) -> Result<f64> {
        self.check_compatible(other)?;
        Ok(self.body.relative_mismatch(&other.body))
    }

    /// Term-by-term equality within relative tolerance; incompatible operands
    /// compare unequal.
    pub fn equals(&self, other: &PowerExpFunction, tol: f64) -> bool {
        self.relative_mismatch(other).is_ok_and(|m| m <= tol)
    }

    /// A random family member with `n_terms` terms: coefficients in the unit
    /// square, exponents in `[-1, 3]`, random parities.
    pub fn random<R: Rng + ?Sized>(
        rng: &mut R,
        alpha: LevyIndex,
        n_terms: usize,
        has_envelope: bool,
    ) -> Self {
        let terms: Vec<PowerTerm> = (0..n_terms)
            .map(|_| {
                let coeff = C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                let power = rng.gen_range(-1.0..3.0);
                let parity = if rng.gen_bool(0.5) {
                    Parity::Odd
                } else {
                    Parity::Even
                };
                PowerTerm::new(coeff, power, parity)
            })
            .collect();
        PowerExpFunction::new(alpha, PowerSum::from_terms(terms), has_envelope)
    }
}

impl fmt::Display for PowerExpFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.body)?;
        if self.has_envelope {
            write!(
                f,
                "·exp(-2|k|^{}/{})",
                self.alpha.half() + 1.0,
                self.alpha.value() + 2.0
            )?;
        }
        Ok(())
    }
}
