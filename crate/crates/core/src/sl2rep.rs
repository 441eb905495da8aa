//! Finite-dimensional simple `sl₂`-modules in the Chevalley basis
//! `[h,e] = 2e`, `[h,f] = −2f`, `[e,f] = h`.
//!
//! [`build_irrep`] uses the basis `v₀, …, v_λ` with
//! `h·vᵢ = (λ − 2i)vᵢ`, `f·vᵢ = vᵢ₊₁`, `e·vᵢ = i(λ − i + 1)vᵢ₋₁`, which keeps
//! every entry integral.

use alloc::vec::Vec;

use num_traits::ToPrimitive;

use crate::matrix::{nullity_with_lower_bound, ExactMatrix, MatrixError};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Sl2Error {
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error("the list of matrices is empty")]
    EmptyInput,
    #[error("H is not diagonalizable over the rationals with integer eigenvalues")]
    NotSemisimpleH,
    #[error("weight multiplicities of H are not those of a simple module")]
    NotIrreducible,
}

/// Three square matrices of equal dimension, intended to satisfy the
/// Chevalley relations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sl2Triple {
    e: ExactMatrix,
    f: ExactMatrix,
    h: ExactMatrix,
}

impl Sl2Triple {
    /// Checks shapes only; the relations are checked by [`chevalley_residuals`].
    pub fn new(e: ExactMatrix, f: ExactMatrix, h: ExactMatrix) -> Result<Self, Sl2Error> {
        if !e.is_square() {
            return Err(MatrixError::NotSquare {
                rows: e.rows(),
                cols: e.cols(),
            }
            .into());
        }
        for other in [&f, &h] {
            if other.shape() != e.shape() {
                return Err(MatrixError::DimensionMismatch {
                    op: "sl2 triple",
                    left: e.shape(),
                    right: other.shape(),
                }
                .into());
            }
        }
        Ok(Sl2Triple { e, f, h })
    }

    pub fn dim(&self) -> usize {
        self.e.rows()
    }

    pub fn e(&self) -> &ExactMatrix {
        &self.e
    }

    pub fn f(&self) -> &ExactMatrix {
        &self.f
    }

    pub fn h(&self) -> &ExactMatrix {
        &self.h
    }

    pub fn into_parts(self) -> (ExactMatrix, ExactMatrix, ExactMatrix) {
        (self.e, self.f, self.h)
    }

    /// Simultaneous conjugation `X ↦ p·X·p⁻¹`.
    pub fn conjugate_by(&self, p: &ExactMatrix, p_inv: &ExactMatrix) -> Result<Self, Sl2Error> {
        Ok(Sl2Triple {
            e: self.e.conjugate_by(p, p_inv)?,
            f: self.f.conjugate_by(p, p_inv)?,
            h: self.h.conjugate_by(p, p_inv)?,
        })
    }

    /// `EF + FE + H²/2`.
    pub fn casimir(&self) -> ExactMatrix {
        let mut c = &self.e * &self.f;
        c.add_scaled(&(&self.f * &self.e), &Scalar::one()).expect("same shape");
        c.add_scaled(&(&self.h * &self.h), &Scalar::ratio(1, 2))
            .expect("same shape");
        c
    }
}

/// The simple module `V(λ)` of dimension `λ + 1`.
pub fn build_irrep(lambda: u32) -> Sl2Triple {
    let n = lambda as usize + 1;
    let l = i64::from(lambda);
    let mut e = ExactMatrix::zeros(n, n);
    let mut f = ExactMatrix::zeros(n, n);
    let mut h = ExactMatrix::zeros(n, n);
    for i in 0..n {
        let ii = i as i64;
        h.set(i, i, Scalar::from_int(l - 2 * ii));
        if i + 1 < n {
            f.set(i + 1, i, Scalar::one());
        }
        if i > 0 {
            e.set(i - 1, i, Scalar::from_int(ii * (l - ii + 1)));
        }
    }
    Sl2Triple { e, f, h }
}

/// `([H,E] − 2E, [H,F] + 2F, [E,F] − H)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChevalleyResiduals {
    pub he: ExactMatrix,
    pub hf: ExactMatrix,
    pub ef: ExactMatrix,
}

impl ChevalleyResiduals {
    pub fn is_zero(&self) -> bool {
        self.he.is_zero() && self.hf.is_zero() && self.ef.is_zero()
    }
}

pub fn chevalley_residuals(t: &Sl2Triple) -> ChevalleyResiduals {
    let two = Scalar::from_int(2);
    let mut he = t.h.commutator(&t.e).expect("triple shapes agree");
    he.add_scaled(&t.e, &-&two).expect("same shape");
    let mut hf = t.h.commutator(&t.f).expect("triple shapes agree");
    hf.add_scaled(&t.f, &two).expect("same shape");
    let mut ef = t.e.commutator(&t.f).expect("triple shapes agree");
    ef.add_scaled(&t.h, &Scalar::from_int(-1)).expect("same shape");
    ChevalleyResiduals { he, hf, ef }
}

/// Multiplicities of the integer eigenvalues of `h`, in increasing order of
/// eigenvalue, provided `h` is diagonalizable over ℚ with integer spectrum.
pub fn integer_spectrum(h: &ExactMatrix) -> Result<Vec<(i64, usize)>, Sl2Error> {
    if !h.is_square() {
        return Err(MatrixError::NotSquare {
            rows: h.rows(),
            cols: h.cols(),
        }
        .into());
    }
    let n = h.rows();
    // For a real spectrum every eigenvalue satisfies m² ≤ Σ mᵢ² = tr(H²).
    let tr2 = (h * h).trace();
    if tr2.is_negative() {
        return Err(Sl2Error::NotSemisimpleH);
    }
    let bound = tr2.floor().sqrt().to_i64().ok_or(Sl2Error::NotSemisimpleH)?;
    let mut spectrum = Vec::new();
    let mut total = 0;
    for m in -bound..=bound {
        let mut shifted = h.clone();
        shifted.add_identity_scaled(&Scalar::from_int(-m))?;
        let mult = shifted.nullity();
        if mult > 0 {
            spectrum.push((m, mult));
            total += mult;
        }
        if total == n {
            break;
        }
    }
    if total != n {
        return Err(Sl2Error::NotSemisimpleH);
    }
    Ok(spectrum)
}

/// The highest weight `λ`, read off from the spectrum of `H`.
///
/// Expects a triple satisfying the Chevalley relations with trivial
/// commutant; reports [`Sl2Error::NotIrreducible`] when the weights are not
/// `λ, λ−2, …, −λ` each with multiplicity one.
pub fn highest_weight_of(t: &Sl2Triple) -> Result<u32, Sl2Error> {
    let spectrum = integer_spectrum(t.h())?;
    if spectrum.iter().any(|&(_, mult)| mult != 1) {
        return Err(Sl2Error::NotIrreducible);
    }
    let n = t.dim() as i64;
    let lambda = n - 1;
    let expected = (0..n).map(|i| -lambda + 2 * i);
    if !spectrum.iter().map(|&(m, _)| m).eq(expected) {
        return Err(Sl2Error::NotIrreducible);
    }
    Ok(lambda as u32)
}

/// Dimension of `{X : [X, Mᵢ] = 0 for all i}`.
pub fn commutant_dimension(matrices: &[ExactMatrix]) -> Result<usize, Sl2Error> {
    let first = matrices.first().ok_or(Sl2Error::EmptyInput)?;
    if !first.is_square() {
        return Err(MatrixError::NotSquare {
            rows: first.rows(),
            cols: first.cols(),
        }
        .into());
    }
    let n = first.rows();
    if let Some(bad) = matrices.iter().find(|m| m.shape() != first.shape()) {
        return Err(MatrixError::DimensionMismatch {
            op: "commutant",
            left: first.shape(),
            right: bad.shape(),
        }
        .into());
    }
    // Unknown X[a][b] sits at column a·n + b. Entry (i, j) of XM − MX is
    // Σ_k X[i][k] M[k][j] − Σ_k M[i][k] X[k][j].
    let mut rows = Vec::with_capacity(matrices.len() * n * n);
    for m in matrices {
        for i in 0..n {
            for j in 0..n {
                let mut row = alloc::vec![Scalar::zero(); n * n];
                for k in 0..n {
                    let a = m.get(k, j);
                    if !a.is_zero() {
                        row[i * n + k] += a;
                    }
                    let b = m.get(i, k);
                    if !b.is_zero() {
                        row[k * n + j] -= b;
                    }
                }
                if row.iter().any(|x| !x.is_zero()) {
                    rows.push(row);
                }
            }
        }
    }
    if rows.is_empty() {
        return Ok(n * n);
    }
    // The identity always commutes, so the nullity is at least one.
    Ok(nullity_with_lower_bound(rows, n * n, 1))
}
