//! The operator algebra `𝔗` spanned by symbols `T(u)`, `u ∈ ℤ²`, with
//!
//! ```text
//! [T(r), T(s)] = det(r,s) (T(r+s) − T(r) − T(s)),      T(0) = 0,
//! ```
//!
//! and its difference calculus
//!
//! ```text
//! Δ_k(r; u₁,…,u_k) = Σ_{S ⊆ {1..k}} (−1)^{|S|} T(r + Σ_{i∈S} u_i).
//! ```
//!
//! The span of all `Δ_k` is an ideal `𝔍_k`. Modulo `𝔍_{k+1}` a difference
//! `Δ_k(r; u₁,…,u_k)` no longer depends on `r` and is identified with the
//! symmetric tensor `u₁⋯u_k`, realised here as the binary form
//! `Π (u_{i,1} X + u_{i,2} Y)`. Reduction modulo `𝔍_{k+1}` works on explicit
//! [`DeltaTerm`] descriptors, never on flat [`TExpression`]s.

use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Neg, Sub};

use crate::combination::Combination;
use crate::lattice::{IntegralMatrix, LatticeVector};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TcalcError {
    #[error("order {k} is below the minimum {min}")]
    OrderTooSmall { k: usize, min: usize },
    #[error("descriptor has {found} slots, expected {expected}")]
    SlotCount { expected: usize, found: usize },
    #[error("weight {l} is outside 0..={k}")]
    WeightOutOfRange { k: usize, l: usize },
}

/// A finite combination `Σ c_u T(u)` with `T(0)` folded to zero.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct TExpression(Combination<LatticeVector>);

impl TExpression {
    pub fn zero() -> Self {
        Self::default()
    }

    /// The single symbol `T(u)`.
    pub fn t(u: LatticeVector) -> Self {
        Self::term(u, Scalar::one())
    }

    pub fn term(u: LatticeVector, coeff: Scalar) -> Self {
        let mut out = Self::zero();
        out.add_term(u, coeff);
        out
    }

    pub fn add_term(&mut self, u: LatticeVector, coeff: Scalar) {
        if !u.is_zero() {
            self.0.add_term(u, coeff);
        }
    }

    pub fn add_scaled(&mut self, other: &TExpression, c: &Scalar) {
        self.0.add_scaled(&other.0, c);
    }

    pub fn scaled(&self, c: &Scalar) -> Self {
        TExpression(self.0.scaled(c))
    }

    pub fn coefficient(&self, u: LatticeVector) -> Scalar {
        self.0.coefficient(&u)
    }

    pub fn terms(&self) -> impl Iterator<Item = (LatticeVector, &Scalar)> {
        self.0.iter().map(|(u, c)| (*u, c))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_empty(&self) -> bool {
        self.is_zero()
    }
}

impl FromIterator<(LatticeVector, Scalar)> for TExpression {
    fn from_iter<I: IntoIterator<Item = (LatticeVector, Scalar)>>(iter: I) -> Self {
        let mut out = TExpression::zero();
        for (u, c) in iter {
            out.add_term(u, c);
        }
        out
    }
}

impl fmt::Debug for TExpression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.terms()).finish()
    }
}

impl Add for &TExpression {
    type Output = TExpression;
    fn add(self, rhs: &TExpression) -> TExpression {
        let mut out = self.clone();
        out.add_scaled(rhs, &Scalar::one());
        out
    }
}

impl Sub for &TExpression {
    type Output = TExpression;
    fn sub(self, rhs: &TExpression) -> TExpression {
        let mut out = self.clone();
        out.add_scaled(rhs, &Scalar::from_int(-1));
        out
    }
}

impl Neg for &TExpression {
    type Output = TExpression;
    fn neg(self) -> TExpression {
        self.scaled(&Scalar::from_int(-1))
    }
}

/// Bilinear extension of `[T(r), T(s)] = det(r,s)(T(r+s) − T(r) − T(s))`.
pub fn t_bracket(x: &TExpression, y: &TExpression) -> TExpression {
    let mut out = TExpression::zero();
    for (r, cr) in x.terms() {
        for (s, cs) in y.terms() {
            let d = r.det(&s);
            if d == 0 {
                continue;
            }
            let c = Scalar::from_int(d) * cr * cs;
            out.add_term(r + s, c.clone());
            out.add_term(r, -c.clone());
            out.add_term(s, -c);
        }
    }
    out
}

/// `Δ_k(r; u₁,…,u_k)` with `k = us.len()`, as an alternating sum over
/// subsets enumerated in binary-mask order.
pub fn delta(r: LatticeVector, us: &[LatticeVector]) -> TExpression {
    assert!(us.len() < 31, "difference order too large to enumerate");
    let mut out = TExpression::zero();
    for mask in 0u32..(1 << us.len()) {
        let shift: LatticeVector = us
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, u)| *u)
            .sum();
        let sign = if mask.count_ones() % 2 == 0 { 1 } else { -1 };
        out.add_term(r + shift, Scalar::from_int(sign));
    }
    out
}

/// The descriptor `coeff · Δ_k(base; slots)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DeltaTerm {
    pub coeff: Scalar,
    pub base: LatticeVector,
    pub slots: Vec<LatticeVector>,
}

impl DeltaTerm {
    pub fn new(coeff: Scalar, base: LatticeVector, slots: Vec<LatticeVector>) -> Self {
        DeltaTerm { coeff, base, slots }
    }

    pub fn order(&self) -> usize {
        self.slots.len()
    }

    pub fn expand(&self) -> TExpression {
        delta(self.base, &self.slots).scaled(&self.coeff)
    }
}

/// Expands a list of descriptors into a flat expression.
pub fn expand_all(terms: &[DeltaTerm]) -> TExpression {
    let mut out = TExpression::zero();
    for t in terms {
        out.add_scaled(&delta(t.base, &t.slots), &t.coeff);
    }
    out
}

/// Reduction modulo `𝔍_{k+1}`: descriptors of order above `k` are dropped
/// and the rest are re-based at `0`.
pub fn reduce_modulo_next(k: usize, terms: &[DeltaTerm]) -> Vec<DeltaTerm> {
    terms
        .iter()
        .filter(|t| t.order() <= k && !t.coeff.is_zero())
        .map(|t| DeltaTerm::new(t.coeff.clone(), LatticeVector::ZERO, t.slots.clone()))
        .collect()
}

/// The two displayed forms of `[T(r), Δ_k(s; u₁,…,u_k)]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommutatorForm {
    /// `det(s,r) Δ_{k+1}(s; u, r) + Σ_i det(r,u_i) Δ_k(s+u_i; u∖u_i, r)`
    Shifted,
    /// `det(s+Σu, r) Δ_{k+1}(s; u, r) + Σ_i det(r,u_i) Δ_k(s; u∖u_i, r)`
    Unshifted,
}

/// Right-hand side of the commutator identity as descriptors. In each
/// order-`k` term the slot `u_i` is replaced by `r` in place.
pub fn commutator_expansion(
    r: LatticeVector,
    s: LatticeVector,
    us: &[LatticeVector],
    form: CommutatorForm,
) -> Vec<DeltaTerm> {
    let mut terms = Vec::with_capacity(us.len() + 1);
    let lead_point = match form {
        CommutatorForm::Shifted => s,
        CommutatorForm::Unshifted => s + us.iter().sum::<LatticeVector>(),
    };
    let mut extended = us.to_vec();
    extended.push(r);
    terms.push(DeltaTerm::new(Scalar::from_int(lead_point.det(&r)), s, extended));
    for (i, u) in us.iter().enumerate() {
        let mut slots = us.to_vec();
        slots[i] = r;
        let base = match form {
            CommutatorForm::Shifted => s + *u,
            CommutatorForm::Unshifted => s,
        };
        terms.push(DeltaTerm::new(Scalar::from_int(r.det(u)), base, slots));
    }
    terms
}

/// A homogeneous polynomial of degree `k` in `X, Y`; `coeffs[j]` multiplies
/// `X^j Y^{k−j}`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BinaryForm {
    coeffs: Vec<Scalar>,
}

impl BinaryForm {
    pub fn zero(k: usize) -> Self {
        BinaryForm {
            coeffs: alloc::vec![Scalar::zero(); k + 1],
        }
    }

    /// `c · X^j Y^{k−j}`.
    pub fn monomial(k: usize, j: usize, c: Scalar) -> Self {
        assert!(j <= k);
        let mut out = Self::zero(k);
        out.coeffs[j] = c;
        out
    }

    pub fn from_coeffs(coeffs: Vec<Scalar>) -> Self {
        assert!(!coeffs.is_empty(), "a form needs at least one coefficient");
        BinaryForm { coeffs }
    }

    /// The linear form `u₁X + u₂Y`.
    pub fn from_linear(u: LatticeVector) -> Self {
        BinaryForm {
            coeffs: alloc::vec![Scalar::from_int(u.r2), Scalar::from_int(u.r1)],
        }
    }

    /// `Π_i (u_{i,1}X + u_{i,2}Y)`; the empty product is `1`.
    pub fn product_of_linear(us: &[LatticeVector]) -> Self {
        us.iter().fold(Self::monomial(0, 0, Scalar::one()), |acc, u| {
            acc.mul(&Self::from_linear(*u))
        })
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn coefficient(&self, j: usize) -> &Scalar {
        &self.coeffs[j]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Scalar::is_zero)
    }

    pub fn mul(&self, other: &BinaryForm) -> BinaryForm {
        let mut out = Self::zero(self.degree() + other.degree());
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out.coeffs[i + j] += a * b;
            }
        }
        out
    }

    pub fn add_scaled(&mut self, other: &BinaryForm, c: &Scalar) {
        assert_eq!(self.degree(), other.degree(), "forms of different degree");
        for (x, y) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *x += y * c;
        }
    }

    pub fn scaled(&self, c: &Scalar) -> BinaryForm {
        BinaryForm {
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    pub fn sub(&self, other: &BinaryForm) -> BinaryForm {
        let mut out = self.clone();
        out.add_scaled(other, &Scalar::from_int(-1));
        out
    }

    /// The derivation extending `u ↦ M u` on linear forms:
    /// `D = (m₁₁X + m₂₁Y)∂_X + (m₁₂X + m₂₂Y)∂_Y`.
    pub fn apply_derivation(&self, m: &IntegralMatrix) -> BinaryForm {
        let k = self.degree();
        let mut out = Self::zero(k);
        let (m11, m12, m21, m22) = (m.a, m.b, m.c, m.d);
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            // ∂_X: j X^{j−1} Y^{k−j}
            if j > 0 {
                let dx = c * Scalar::from_int(j as i64);
                out.coeffs[j] += &dx * Scalar::from_int(m11);
                out.coeffs[j - 1] += &dx * Scalar::from_int(m21);
            }
            // ∂_Y: (k−j) X^j Y^{k−j−1}
            if j < k {
                let dy = c * Scalar::from_int((k - j) as i64);
                out.coeffs[j + 1] += &dy * Scalar::from_int(m12);
                out.coeffs[j] += &dy * Scalar::from_int(m22);
            }
        }
        out
    }
}

impl fmt::Debug for BinaryForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let k = self.degree();
        let mut first = true;
        for (j, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            write!(f, "{c}·X^{j}Y^{}", k - j)?;
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

/// `Σ coeff · Π_i (u_{i,1}X + u_{i,2}Y)` over descriptors of order `k`.
/// Base points are ignored.
pub fn sym_class(k: usize, terms: &[DeltaTerm]) -> Result<BinaryForm, TcalcError> {
    let mut out = BinaryForm::zero(k);
    for t in terms {
        if t.order() != k {
            return Err(TcalcError::SlotCount {
                expected: k,
                found: t.order(),
            });
        }
        out.add_scaled(&BinaryForm::product_of_linear(&t.slots), &t.coeff);
    }
    Ok(out)
}

/// `M_r = [[−r₁r₂, r₁²], [−r₂², r₁r₂]]`, so that `M_r u = det(r,u)·r`.
pub fn symmetric_power_matrix(r: LatticeVector) -> IntegralMatrix {
    IntegralMatrix::new(-r.r1 * r.r2, r.r1 * r.r1, -r.r2 * r.r2, r.r1 * r.r2)
}

/// Residuals of the four combinatorial identities of `Δ_k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CombinatoricsReport {
    /// First nonzero `Δ_k(r; u) − Δ_k(r; σu)` over adjacent transpositions
    /// and the reversal.
    pub permutation: TExpression,
    /// `Δ_k(r; −u₁, u₂,…) + Δ_k(r−u₁; u₁, u₂,…)`.
    pub sign: TExpression,
    /// `Δ_{k+1}(r; u, u′) − Δ_k(r; u) + Δ_k(r+u′; u)`.
    pub recursion: TExpression,
    /// `Δ_k(r; u₁+u′,…) − Δ_k(r; u₁,…) − Δ_k(r+u₁; u′,…)`.
    pub additivity: TExpression,
}

impl CombinatoricsReport {
    pub fn passed(&self) -> bool {
        self.permutation.is_zero()
            && self.sign.is_zero()
            && self.recursion.is_zero()
            && self.additivity.is_zero()
    }
}

pub fn verify_delta_combinatorics(
    r: LatticeVector,
    us: &[LatticeVector],
    u_prime: LatticeVector,
) -> Result<CombinatoricsReport, TcalcError> {
    let k = us.len();
    if k == 0 {
        return Err(TcalcError::OrderTooSmall { k, min: 1 });
    }
    let base = delta(r, us);

    let mut permutations: Vec<Vec<LatticeVector>> = (0..k.saturating_sub(1))
        .map(|i| {
            let mut p = us.to_vec();
            p.swap(i, i + 1);
            p
        })
        .collect();
    permutations.push(us.iter().rev().copied().collect());
    let permutation = permutations
        .iter()
        .map(|p| &base - &delta(r, p))
        .find(|res| !res.is_zero())
        .unwrap_or_default();

    let mut negated = us.to_vec();
    negated[0] = -us[0];
    let sign = &delta(r, &negated) + &delta(r - us[0], us);

    let mut extended = us.to_vec();
    extended.push(u_prime);
    let recursion = &(&delta(r, &extended) - &base) + &delta(r + u_prime, us);

    let mut summed = us.to_vec();
    summed[0] = us[0] + u_prime;
    let mut split = us.to_vec();
    split[0] = u_prime;
    let additivity = &(&delta(r, &summed) - &base) - &delta(r + us[0], &split);

    Ok(CombinatoricsReport {
        permutation,
        sign,
        recursion,
        additivity,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommutatorReport {
    /// `[T(r), Δ_k(s; u)]` computed by [`t_bracket`].
    pub lhs: TExpression,
    pub shifted_residual: TExpression,
    pub unshifted_residual: TExpression,
}

impl CommutatorReport {
    pub fn passed(&self) -> bool {
        self.shifted_residual.is_zero() && self.unshifted_residual.is_zero()
    }
}

pub fn verify_commutator_identity(
    r: LatticeVector,
    s: LatticeVector,
    us: &[LatticeVector],
) -> Result<CommutatorReport, TcalcError> {
    if us.len() < 2 {
        return Err(TcalcError::OrderTooSmall { k: us.len(), min: 2 });
    }
    let lhs = t_bracket(&TExpression::t(r), &delta(s, us));
    let residual = |form| &lhs - &expand_all(&commutator_expansion(r, s, us, form));
    Ok(CommutatorReport {
        shifted_residual: residual(CommutatorForm::Shifted),
        unshifted_residual: residual(CommutatorForm::Unshifted),
        lhs,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct XEigenReport {
    pub k: usize,
    /// `X·Δ_k(e₁; e₂,…,e₂)` with `X = −ad T(−e₂) ∘ ad T(−e₁)`.
    pub image: TExpression,
    /// `k·Δ_k(e₁; e₂,…,e₂)`.
    pub expected: TExpression,
    pub residual: TExpression,
}

impl XEigenReport {
    pub fn passed(&self) -> bool {
        self.residual.is_zero()
    }
}

pub fn x_eigen_check(k: usize) -> Result<XEigenReport, TcalcError> {
    if k == 0 {
        return Err(TcalcError::OrderTooSmall { k, min: 1 });
    }
    let slots = alloc::vec![LatticeVector::E2; k];
    let d = delta(LatticeVector::E1, &slots);
    let inner = t_bracket(&TExpression::t(-LatticeVector::E1), &d);
    let image = -&t_bracket(&TExpression::t(-LatticeVector::E2), &inner);
    let expected = d.scaled(&Scalar::from_int(k as i64));
    Ok(XEigenReport {
        k,
        residual: &image - &expected,
        image,
        expected,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymmetricPowerReport {
    /// Descriptor expansion minus the direct bracket; zero when the
    /// commutator identity holds.
    pub expansion_residual: TExpression,
    /// Class of `[T(r), Δ_k(0; u)]` modulo `𝔍_{k+1}`.
    pub computed: BinaryForm,
    /// `M_r` acting by derivation on `Π (u_{i,1}X + u_{i,2}Y)`.
    pub expected: BinaryForm,
    pub residual: BinaryForm,
}

impl SymmetricPowerReport {
    pub fn passed(&self) -> bool {
        self.expansion_residual.is_zero() && self.residual.is_zero()
    }
}

pub fn adjoint_on_symmetric_power(
    r: LatticeVector,
    us: &[LatticeVector],
) -> Result<SymmetricPowerReport, TcalcError> {
    let k = us.len();
    if k < 2 {
        return Err(TcalcError::OrderTooSmall { k, min: 2 });
    }
    let terms = commutator_expansion(r, LatticeVector::ZERO, us, CommutatorForm::Shifted);
    let direct = t_bracket(&TExpression::t(r), &delta(LatticeVector::ZERO, us));
    let expansion_residual = &expand_all(&terms) - &direct;
    let computed = sym_class(k, &reduce_modulo_next(k, &terms))?;
    let expected = BinaryForm::product_of_linear(us).apply_derivation(&symmetric_power_matrix(r));
    Ok(SymmetricPowerReport {
        expansion_residual,
        residual: computed.sub(&expected),
        computed,
        expected,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightReport {
    pub k: usize,
    pub l: usize,
    /// `2ℓ − k`.
    pub eigenvalue: i64,
    pub expansion_residual: TExpression,
    pub computed: BinaryForm,
    pub expected: BinaryForm,
    pub residual: BinaryForm,
}

impl WeightReport {
    pub fn passed(&self) -> bool {
        self.expansion_residual.is_zero() && self.residual.is_zero()
    }
}

/// `[T(e₁) + T(e₂) − T(e₁+e₂), Δ_k(0; e₁^ℓ, e₂^{k−ℓ})]` modulo `𝔍_{k+1}`
/// against `(2ℓ − k) X^ℓ Y^{k−ℓ}`.
pub fn weight_check(k: usize, l: usize) -> Result<WeightReport, TcalcError> {
    if k < 2 {
        return Err(TcalcError::OrderTooSmall { k, min: 2 });
    }
    if l > k {
        return Err(TcalcError::WeightOutOfRange { k, l });
    }
    let mut us = alloc::vec![LatticeVector::E1; l];
    us.resize(k, LatticeVector::E2);
    let target = delta(LatticeVector::ZERO, &us);

    let weight_element = [
        (LatticeVector::E1, 1),
        (LatticeVector::E2, 1),
        (LatticeVector::E1 + LatticeVector::E2, -1),
    ];
    let mut terms = Vec::new();
    let mut direct = TExpression::zero();
    for (r, c) in weight_element {
        let c = Scalar::from_int(c);
        direct.add_scaled(&t_bracket(&TExpression::t(r), &target), &c);
        for mut t in commutator_expansion(r, LatticeVector::ZERO, &us, CommutatorForm::Shifted) {
            t.coeff *= &c;
            terms.push(t);
        }
    }
    let expansion_residual = &expand_all(&terms) - &direct;
    let computed = sym_class(k, &reduce_modulo_next(k, &terms))?;
    let eigenvalue = 2 * l as i64 - k as i64;
    let expected = BinaryForm::monomial(k, l, Scalar::from_int(eigenvalue));
    Ok(WeightReport {
        k,
        l,
        eigenvalue,
        expansion_residual,
        residual: computed.sub(&expected),
        computed,
        expected,
    })
}
