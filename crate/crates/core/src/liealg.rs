//! Structure constants of `𝔄 ⋊ Der 𝔄`, where `𝔄 = ℚ[z₁^{±1}, z₂^{±1}]`.
//!
//! Basis: `z^r` (functions) and `z^r ∂_k` (vector fields, `∂_k = z_k ∂/∂z_k`).
//! Brackets:
//!
//! ```text
//! [z^r ∂_k, z^s ∂_l] = z^{r+s} (s_k ∂_l − r_l ∂_k)
//! [z^r ∂_k, z^s]     = s_k z^{r+s}
//! [z^r, z^s]         = 0
//! ```
//!
//! The Virasoro-like algebra is spanned by `H(r) = z^r (r₁∂₂ − r₂∂₁)`, which is
//! stored expanded in the vector-field basis.

use core::fmt;
use core::ops::{Add, Neg, Sub};

use crate::combination::Combination;
use crate::lattice::LatticeVector;
use crate::scalar::Scalar;

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Axis {
    One,
    Two,
}

impl Axis {
    pub const BOTH: [Axis; 2] = [Axis::One, Axis::Two];

    /// 1 or 2.
    pub fn index(self) -> u8 {
        match self {
            Axis::One => 1,
            Axis::Two => 2,
        }
    }

    pub fn from_index(k: u8) -> Option<Axis> {
        match k {
            1 => Some(Axis::One),
            2 => Some(Axis::Two),
            _ => None,
        }
    }

    /// The `k`-th component of `r`.
    pub fn component(self, r: LatticeVector) -> i64 {
        match self {
            Axis::One => r.r1,
            Axis::Two => r.r2,
        }
    }
}

/// A basis element of `𝔄 ⋊ Der 𝔄`. Ordered by tag, then exponent, then axis.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BasisSymbol {
    /// `z^r`
    Fun(LatticeVector),
    /// `z^r ∂_k`
    Field(LatticeVector, Axis),
}

impl fmt::Debug for BasisSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BasisSymbol::Fun(r) => write!(f, "z^{r}"),
            BasisSymbol::Field(r, k) => write!(f, "z^{r}d{}", k.index()),
        }
    }
}

/// A finite linear combination of [`BasisSymbol`]s in canonical form.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct LieElement(Combination<BasisSymbol>);

impl LieElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn basis(symbol: BasisSymbol) -> Self {
        Self::term(symbol, Scalar::one())
    }

    pub fn term(symbol: BasisSymbol, coeff: Scalar) -> Self {
        let mut out = Self::zero();
        out.add_term(symbol, coeff);
        out
    }

    /// `z^r`
    pub fn fun(r: LatticeVector) -> Self {
        Self::basis(BasisSymbol::Fun(r))
    }

    /// `z^r ∂_k`
    pub fn field(r: LatticeVector, k: Axis) -> Self {
        Self::basis(BasisSymbol::Field(r, k))
    }

    pub fn add_term(&mut self, symbol: BasisSymbol, coeff: Scalar) {
        self.0.add_term(symbol, coeff);
    }

    pub fn add_scaled(&mut self, other: &LieElement, c: &Scalar) {
        self.0.add_scaled(&other.0, c);
    }

    pub fn scaled(&self, c: &Scalar) -> Self {
        LieElement(self.0.scaled(c))
    }

    pub fn coefficient(&self, symbol: &BasisSymbol) -> Scalar {
        self.0.coefficient(symbol)
    }

    /// Terms in canonical (ascending symbol) order.
    pub fn terms(&self) -> impl Iterator<Item = (&BasisSymbol, &Scalar)> {
        self.0.iter()
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

impl FromIterator<(BasisSymbol, Scalar)> for LieElement {
    fn from_iter<I: IntoIterator<Item = (BasisSymbol, Scalar)>>(iter: I) -> Self {
        let mut out = LieElement::zero();
        for (s, c) in iter {
            out.add_term(s, c);
        }
        out
    }
}

impl fmt::Debug for LieElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.terms()).finish()
    }
}

impl Add for &LieElement {
    type Output = LieElement;
    fn add(self, rhs: &LieElement) -> LieElement {
        let mut out = self.clone();
        out.add_scaled(rhs, &Scalar::one());
        out
    }
}

impl Sub for &LieElement {
    type Output = LieElement;
    fn sub(self, rhs: &LieElement) -> LieElement {
        let mut out = self.clone();
        out.add_scaled(rhs, &Scalar::from_int(-1));
        out
    }
}

impl Neg for &LieElement {
    type Output = LieElement;
    fn neg(self) -> LieElement {
        self.scaled(&Scalar::from_int(-1))
    }
}

/// Bracket of two basis symbols, accumulated into `out` with factor `c`.
fn bracket_basis_into(x: BasisSymbol, y: BasisSymbol, c: &Scalar, out: &mut LieElement) {
    use BasisSymbol::{Field, Fun};
    match (x, y) {
        (Fun(_), Fun(_)) => {}
        (Field(r, k), Fun(s)) => {
            out.add_term(Fun(r + s), c * Scalar::from_int(k.component(s)));
        }
        (Fun(s), Field(r, k)) => {
            out.add_term(Fun(r + s), -(c * Scalar::from_int(k.component(s))));
        }
        (Field(r, k), Field(s, l)) => {
            let rs = r + s;
            out.add_term(Field(rs, l), c * Scalar::from_int(k.component(s)));
            out.add_term(Field(rs, k), -(c * Scalar::from_int(l.component(r))));
        }
    }
}

/// The Lie bracket, extended bilinearly from the structure constants.
pub fn bracket(x: &LieElement, y: &LieElement) -> LieElement {
    let mut out = LieElement::zero();
    for (sx, cx) in x.terms() {
        for (sy, cy) in y.terms() {
            bracket_basis_into(*sx, *sy, &(cx * cy), &mut out);
        }
    }
    out
}

/// `H(r) = z^r (r₁∂₂ − r₂∂₁)`.
pub fn hamiltonian(r: LatticeVector) -> LieElement {
    let mut out = LieElement::zero();
    out.add_term(BasisSymbol::Field(r, Axis::Two), Scalar::from_int(r.r1));
    out.add_term(BasisSymbol::Field(r, Axis::One), Scalar::from_int(-r.r2));
    out
}

/// `{z^r, z^s} = det(r, s) z^{r+s}`.
pub fn poisson(r: LatticeVector, s: LatticeVector) -> LieElement {
    LieElement::term(BasisSymbol::Fun(r + s), Scalar::from_int(r.det(&s)))
}

/// `[x,[y,z]] + [y,[z,x]] + [z,[x,y]]`.
pub fn jacobi_residual(x: &LieElement, y: &LieElement, z: &LieElement) -> LieElement {
    let mut out = bracket(x, &bracket(y, z));
    out.add_scaled(&bracket(y, &bracket(z, x)), &Scalar::one());
    out.add_scaled(&bracket(z, &bracket(x, y)), &Scalar::one());
    out
}
