//! The grading lattice `Γ = ℤe₁ ⊕ ℤe₂`.

use core::fmt;
use core::iter::Sum;
use core::ops::{Add, AddAssign, Mul, Neg, Sub};
use core::str::FromStr;

use alloc::string::String;

/// An element `r₁e₁ + r₂e₂` of the lattice.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct LatticeVector {
    pub r1: i64,
    pub r2: i64,
}

impl LatticeVector {
    pub const ZERO: LatticeVector = LatticeVector { r1: 0, r2: 0 };
    pub const E1: LatticeVector = LatticeVector { r1: 1, r2: 0 };
    pub const E2: LatticeVector = LatticeVector { r1: 0, r2: 1 };

    pub const fn new(r1: i64, r2: i64) -> Self {
        LatticeVector { r1, r2 }
    }

    pub fn is_zero(&self) -> bool {
        self.r1 == 0 && self.r2 == 0
    }

    /// `r₁s₂ − r₂s₁`.
    pub fn det(&self, other: &LatticeVector) -> i64 {
        self.r1 * other.r2 - self.r2 * other.r1
    }
}

/// The determinant `det(r, s) = r₁s₂ − r₂s₁`.
pub fn det(r: LatticeVector, s: LatticeVector) -> i64 {
    r.det(&s)
}

impl Add for LatticeVector {
    type Output = LatticeVector;
    fn add(self, rhs: LatticeVector) -> LatticeVector {
        LatticeVector::new(self.r1 + rhs.r1, self.r2 + rhs.r2)
    }
}

impl AddAssign for LatticeVector {
    fn add_assign(&mut self, rhs: LatticeVector) {
        self.r1 += rhs.r1;
        self.r2 += rhs.r2;
    }
}

impl Sub for LatticeVector {
    type Output = LatticeVector;
    fn sub(self, rhs: LatticeVector) -> LatticeVector {
        LatticeVector::new(self.r1 - rhs.r1, self.r2 - rhs.r2)
    }
}

impl Neg for LatticeVector {
    type Output = LatticeVector;
    fn neg(self) -> LatticeVector {
        LatticeVector::new(-self.r1, -self.r2)
    }
}

impl Mul<LatticeVector> for i64 {
    type Output = LatticeVector;
    fn mul(self, rhs: LatticeVector) -> LatticeVector {
        LatticeVector::new(self * rhs.r1, self * rhs.r2)
    }
}

impl Sum for LatticeVector {
    fn sum<I: Iterator<Item = LatticeVector>>(iter: I) -> LatticeVector {
        iter.fold(LatticeVector::ZERO, Add::add)
    }
}

impl<'a> Sum<&'a LatticeVector> for LatticeVector {
    fn sum<I: Iterator<Item = &'a LatticeVector>>(iter: I) -> LatticeVector {
        iter.copied().sum()
    }
}

impl From<(i64, i64)> for LatticeVector {
    fn from((r1, r2): (i64, i64)) -> Self {
        LatticeVector::new(r1, r2)
    }
}

impl fmt::Display for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{}]", self.r1, self.r2)
    }
}

impl fmt::Debug for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("expected a lattice vector `r1,r2` or `[r1,r2]`, got `{0}`")]
pub struct ParseLatticeError(pub String);

/// Accepts `r1,r2`, optionally wrapped in square brackets.
impl FromStr for LatticeVector {
    type Err = ParseLatticeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParseLatticeError(s.into());
        let t = s.trim();
        let t = t
            .strip_prefix('[')
            .and_then(|t| t.strip_suffix(']'))
            .unwrap_or(t);
        let (a, b) = t.split_once(',').ok_or_else(err)?;
        let r1 = a.trim().parse().map_err(|_| err())?;
        let r2 = b.trim().parse().map_err(|_| err())?;
        Ok(LatticeVector::new(r1, r2))
    }
}

/// A 2×2 integer matrix `[[a, b], [c, d]]` acting on the lattice.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct IntegralMatrix {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

impl IntegralMatrix {
    pub const IDENTITY: IntegralMatrix = IntegralMatrix::new(1, 0, 0, 1);

    pub const fn new(a: i64, b: i64, c: i64, d: i64) -> Self {
        IntegralMatrix { a, b, c, d }
    }

    pub fn apply(&self, u: LatticeVector) -> LatticeVector {
        LatticeVector::new(self.a * u.r1 + self.b * u.r2, self.c * u.r1 + self.d * u.r2)
    }

    pub fn determinant(&self) -> i64 {
        self.a * self.d - self.b * self.c
    }
}

/// `(a·u₁ + b·u₂, c·u₁ + d·u₂)` for `m = [[a, b], [c, d]]`.
pub fn apply_integral_matrix(m: &IntegralMatrix, u: LatticeVector) -> LatticeVector {
    m.apply(u)
}
