//! Momentum-space realizations of the factor operators `A = d^{α/2} + x`,
//! `B = -d^{α/2} + x`, the Hamiltonian `H = -d^α + x²` and the operator-valued
//! factorization energy `ε = (α/2) d^{α/2-1}`, such that `H = B A + ε`.
//!
//! With `ψ(x) = (2π)^{-1/2} ∫ φ(k) e^{ikx} dk`, position acts as `x ↦ i d/dk`
//! and the three fractional derivatives act as multiplication by the symbols
//! in [`symbol`]. Only these three orders are housed.

use num_complex::Complex64 as C64;

use crate::powerexp::{PowerExpFunction, PowerSum, PowerTerm};
use crate::{Error, LevyIndex, Result};

const I: C64 = C64::new(0.0, 1.0);

/// Fractional derivative orders with a known momentum symbol.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SymbolOrder {
    /// `ν = α`
    Full,
    /// `ν = α/2`
    Half,
    /// `ν = α/2 - 1`
    HalfMinusOne,
}

/// Momentum multiplier `μ_ν(k)` of `d^ν/dx^ν`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FractionalSymbol {
    pub order: f64,
    pub multiplier: PowerTerm,
}

/// `d^α ↦ -|k|^α`, `d^{α/2} ↦ i|k|^{α/2} sgn(k)`, `d^{α/2-1} ↦ |k|^{α/2-1}`.
pub fn symbol(alpha: LevyIndex, which: SymbolOrder) -> FractionalSymbol {
    let half = alpha.half();
    match which {
        SymbolOrder::Full => FractionalSymbol {
            order: alpha.value(),
            multiplier: PowerTerm::even(-1.0, alpha.value()),
        },
        SymbolOrder::Half => FractionalSymbol {
            order: half,
            multiplier: PowerTerm::odd(I, half),
        },
        SymbolOrder::HalfMinusOne => FractionalSymbol {
            order: half - 1.0,
            multiplier: PowerTerm::even(1.0, half - 1.0),
        },
    }
}

pub fn symbol_table(alpha: LevyIndex) -> [FractionalSymbol; 3] {
    [
        symbol(alpha, SymbolOrder::Full),
        symbol(alpha, SymbolOrder::Half),
        symbol(alpha, SymbolOrder::HalfMinusOne),
    ]
}

/// Symbol of an ordinary first derivative, `d/dx ↦ ik`.
pub fn first_derivative_symbol() -> PowerTerm {
    PowerTerm::odd(I, 1.0)
}

/// `Σ c_j(k) · d^{m_j}/dk^{m_j}` with `m_j ≤ 2`.
#[derive(Debug, Clone)]
pub struct MomentumOperator {
    alpha: LevyIndex,
    parts: Vec<(PowerSum, u8)>,
}

impl MomentumOperator {
    pub fn new(alpha: LevyIndex, parts: Vec<(PowerSum, u8)>) -> Self {
        assert!(
            parts.iter().all(|(_, order)| *order <= 2),
            "momentum operators are at most second order in k"
        );
        MomentumOperator { alpha, parts }
    }

    pub fn alpha(&self) -> LevyIndex {
        self.alpha
    }

    pub fn parts(&self) -> &[(PowerSum, u8)] {
        &self.parts
    }

    /// Multiplication by a single symbol.
    fn multiplier(alpha: LevyIndex, term: PowerTerm) -> Self {
        MomentumOperator::new(alpha, vec![(PowerSum::monomial(term), 0)])
    }

    /// `x ↦ i d/dk`.
    pub fn position(alpha: LevyIndex) -> Self {
        MomentumOperator::new(
            alpha,
            vec![(PowerSum::monomial(PowerTerm::even(I, 0.0)), 1)],
        )
    }

    /// `A = d^{α/2} + x  ↦  i[|k|^{α/2} sgn(k) + d/dk]`.
    pub fn annihilation(alpha: LevyIndex) -> Self {
        Self::multiplier(alpha, symbol(alpha, SymbolOrder::Half).multiplier)
            .plus(&Self::position(alpha))
    }

    /// `B = -d^{α/2} + x  ↦  i[d/dk - |k|^{α/2} sgn(k)]`.
    pub fn creation(alpha: LevyIndex) -> Self {
        let mut s = symbol(alpha, SymbolOrder::Half).multiplier;
        s.coeff = -s.coeff;
        Self::multiplier(alpha, s).plus(&Self::position(alpha))
    }

    /// `H = -d^α + x²  ↦  |k|^α - d²/dk²`.
    pub fn hamiltonian(alpha: LevyIndex) -> Self {
        let mut s = symbol(alpha, SymbolOrder::Full).multiplier;
        s.coeff = -s.coeff;
        Self::multiplier(alpha, s).plus(&MomentumOperator::new(
            alpha,
            // (i d/dk)² = -d²/dk²
            vec![(PowerSum::monomial(PowerTerm::even(-1.0, 0.0)), 2)],
        ))
    }

    /// `ε = (α/2) d^{α/2-1}  ↦  (α/2)|k|^{α/2-1}`.
    pub fn factorization_energy(alpha: LevyIndex) -> Self {
        let mut s = symbol(alpha, SymbolOrder::HalfMinusOne).multiplier;
        s.coeff *= alpha.half();
        Self::multiplier(alpha, s)
    }

    pub fn plus(&self, other: &MomentumOperator) -> Self {
        let mut parts = self.parts.clone();
        parts.extend(other.parts.iter().cloned());
        MomentumOperator::new(self.alpha, parts)
    }

    pub fn apply(&self, f: &PowerExpFunction) -> Result<PowerExpFunction> {
        if !self.alpha.same_as(f.alpha()) {
            return Err(Error::AlphaMismatch(self.alpha.value(), f.alpha().value()));
        }
        let first = f.differentiate();
        let second = first.differentiate();
        let mut body = PowerSum::zero();
        for (coeff, order) in &self.parts {
            let target = match order {
                0 => f.body(),
                1 => first.body(),
                _ => second.body(),
            };
            body = body.add(&target.mul(coeff));
        }
        Ok(f.with_body(body))
    }
}

pub fn apply_a(f: &PowerExpFunction) -> PowerExpFunction {
    apply_infallible(&MomentumOperator::annihilation(f.alpha()), f)
}

pub fn apply_b(f: &PowerExpFunction) -> PowerExpFunction {
    apply_infallible(&MomentumOperator::creation(f.alpha()), f)
}

pub fn apply_h(f: &PowerExpFunction) -> PowerExpFunction {
    apply_infallible(&MomentumOperator::hamiltonian(f.alpha()), f)
}

pub fn apply_eps(f: &PowerExpFunction) -> PowerExpFunction {
    apply_infallible(&MomentumOperator::factorization_energy(f.alpha()), f)
}

fn apply_infallible(op: &MomentumOperator, f: &PowerExpFunction) -> PowerExpFunction {
    op.apply(f)
        .expect("operator built from the operand's own Lévy index")
}

/// Relative mismatch between the two halves of `A f`, `i|k|^{α/2}sgn(k) f`
/// and `-i f'`, before any dropping. Zero iff `f` is in the kernel of `A`.
pub fn kernel_mismatch(f: &PowerExpFunction) -> f64 {
    let multiplied = f.mul_term(&symbol(f.alpha(), SymbolOrder::Half).multiplier);
    let derivative = f.differentiate().scale(-I);
    multiplied
        .relative_mismatch(&derivative)
        .expect("operands share α and envelope")
}

/// `B A f + ε f - H f`; the zero function for every family member.
pub fn factorization_residual(f: &PowerExpFunction) -> PowerExpFunction {
    let lhs = factorized_side(f);
    lhs.sub(&apply_h(f)).expect("operands share α and envelope")
}

/// Relative coefficient mismatch between `(B A + ε) f` and `H f`, before any
/// tolerance-based dropping.
pub fn factorization_mismatch(f: &PowerExpFunction) -> f64 {
    factorized_side(f)
        .relative_mismatch(&apply_h(f))
        .expect("operands share α and envelope")
}

fn factorized_side(f: &PowerExpFunction) -> PowerExpFunction {
    apply_b(&apply_a(f))
        .add(&apply_eps(f))
        .expect("operands share α and envelope")
}
