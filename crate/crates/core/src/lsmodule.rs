//! The Larsson–Shen modules `M_μ^α(λ) = 𝔄 ⊗ V(λ)` over `𝔄 ⋊ Der 𝔄`.
//!
//! Writing `|v, s⟩` for `z^s ⊗ v`:
//!
//! ```text
//! z^r      |v,s⟩ = |v, r+s⟩
//! z^r ∂₁   |v,s⟩ = |(s₁ + α₁ + r₁μ + r₂f + (r₁/2)h) v, r+s⟩
//! z^r ∂₂   |v,s⟩ = |(s₂ + α₂ + r₂μ + r₁e − (r₂/2)h) v, r+s⟩
//! H(r)     |v,s⟩ = |(det(r, s+α) + r₁²e − r₂²f − r₁r₂h) v, r+s⟩
//! ```
//!
//! Restricted to `𝔄 ⋊ 𝔓` the module does not depend on `μ`.

use alloc::collections::btree_map::{self, BTreeMap};
use alloc::vec::Vec;
use core::fmt;

use crate::lattice::LatticeVector;
use crate::liealg::{self, Axis, BasisSymbol, LieElement};
use crate::matrix::ExactMatrix;
use crate::sampling;
use crate::scalar::Scalar;
use crate::sl2rep::{build_irrep, Sl2Triple};

/// Parameters `(λ, α, μ)` of `M_μ^α(λ)` together with the `sl₂` matrices
/// acting on `V(λ)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LsModuleSpec {
    lambda: u32,
    alpha: [Scalar; 2],
    mu: Scalar,
    triple: Sl2Triple,
}

impl LsModuleSpec {
    pub fn new(lambda: u32, alpha: [Scalar; 2], mu: Scalar) -> Self {
        LsModuleSpec {
            lambda,
            alpha,
            mu,
            triple: build_irrep(lambda),
        }
    }

    /// Uses an arbitrary triple in place of the standard `V(λ)` matrices.
    /// Intended for mutation tests; `λ` is taken to be `dim − 1`.
    pub fn with_triple(triple: Sl2Triple, alpha: [Scalar; 2], mu: Scalar) -> Self {
        LsModuleSpec {
            lambda: (triple.dim() - 1) as u32,
            alpha,
            mu,
            triple,
        }
    }

    pub fn lambda(&self) -> u32 {
        self.lambda
    }

    pub fn alpha(&self) -> &[Scalar; 2] {
        &self.alpha
    }

    pub fn mu(&self) -> &Scalar {
        &self.mu
    }

    pub fn triple(&self) -> &Sl2Triple {
        &self.triple
    }

    /// Dimension of each graded slice, `λ + 1`.
    pub fn dim(&self) -> usize {
        self.triple.dim()
    }

    /// `det(r, s + α) = r₁(s₂ + α₂) − r₂(s₁ + α₁)`.
    pub fn det_shifted(&self, r: LatticeVector, s: LatticeVector) -> Scalar {
        let x1 = Scalar::from_int(s.r1) + &self.alpha[0];
        let x2 = Scalar::from_int(s.r2) + &self.alpha[1];
        Scalar::from_int(r.r1) * x2 - Scalar::from_int(r.r2) * x1
    }

    /// The operator on `V(λ)` by which `z^r ∂_k` maps `|·, s⟩` to `|·, r+s⟩`.
    pub fn field_operator(&self, r: LatticeVector, k: Axis, s: LatticeVector) -> ExactMatrix {
        let t = &self.triple;
        let half = Scalar::ratio(1, 2);
        match k {
            Axis::One => {
                let c = Scalar::from_int(s.r1) + &self.alpha[0] + Scalar::from_int(r.r1) * &self.mu;
                let mut op = ExactMatrix::scalar(self.dim(), c);
                op.add_scaled(t.f(), &Scalar::from_int(r.r2)).expect("same shape");
                op.add_scaled(t.h(), &(Scalar::from_int(r.r1) * &half)).expect("same shape");
                op
            }
            Axis::Two => {
                let c = Scalar::from_int(s.r2) + &self.alpha[1] + Scalar::from_int(r.r2) * &self.mu;
                let mut op = ExactMatrix::scalar(self.dim(), c);
                op.add_scaled(t.e(), &Scalar::from_int(r.r1)).expect("same shape");
                op.add_scaled(t.h(), &(Scalar::from_int(-r.r2) * &half)).expect("same shape");
                op
            }
        }
    }

    /// `c·I + r₁²E − r₂²F − r₁r₂H`.
    fn quadratic_operator(&self, c: Scalar, r: LatticeVector) -> ExactMatrix {
        let t = &self.triple;
        let mut op = ExactMatrix::scalar(self.dim(), c);
        op.add_scaled(t.e(), &Scalar::from_int(r.r1 * r.r1)).expect("same shape");
        op.add_scaled(t.f(), &Scalar::from_int(-r.r2 * r.r2)).expect("same shape");
        op.add_scaled(t.h(), &Scalar::from_int(-r.r1 * r.r2)).expect("same shape");
        op
    }

    /// The operator on `V(λ)` by which `H(r)` maps `|·, s⟩` to `|·, r+s⟩`.
    pub fn hamiltonian_operator(&self, r: LatticeVector, s: LatticeVector) -> ExactMatrix {
        self.quadratic_operator(self.det_shifted(r, s), r)
    }
}

/// A finitely supported element `Σ |v_s, s⟩` of `M^α(λ)`. Degrees carrying
/// the zero vector are never stored.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ModuleVector {
    dim: usize,
    support: BTreeMap<LatticeVector, Vec<Scalar>>,
}

impl ModuleVector {
    pub fn zero(dim: usize) -> Self {
        assert!(dim > 0, "slice dimension must be positive");
        ModuleVector {
            dim,
            support: BTreeMap::new(),
        }
    }

    /// `|v_i, s⟩` for the `i`-th standard basis vector `v_i`.
    pub fn basis(dim: usize, i: usize, s: LatticeVector) -> Self {
        let mut coords = alloc::vec![Scalar::zero(); dim];
        coords[i] = Scalar::one();
        Self::homogeneous(s, coords)
    }

    pub fn homogeneous(s: LatticeVector, coords: Vec<Scalar>) -> Self {
        let mut m = Self::zero(coords.len());
        m.add_at(s, &coords);
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Adds `coords` to the component of degree `s`.
    pub fn add_at(&mut self, s: LatticeVector, coords: &[Scalar]) {
        assert_eq!(coords.len(), self.dim, "coordinate vector has wrong length");
        if coords.iter().all(Scalar::is_zero) {
            return;
        }
        match self.support.entry(s) {
            btree_map::Entry::Vacant(slot) => {
                slot.insert(coords.to_vec());
            }
            btree_map::Entry::Occupied(mut slot) => {
                for (x, y) in slot.get_mut().iter_mut().zip(coords) {
                    *x += y;
                }
                if slot.get().iter().all(Scalar::is_zero) {
                    slot.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &ModuleVector, c: &Scalar) {
        assert_eq!(self.dim, other.dim, "slice dimensions differ");
        if c.is_zero() {
            return;
        }
        for (s, coords) in &other.support {
            let scaled: Vec<Scalar> = coords.iter().map(|x| x * c).collect();
            self.add_at(*s, &scaled);
        }
    }

    pub fn scaled(&self, c: &Scalar) -> Self {
        let mut out = Self::zero(self.dim);
        out.add_scaled(self, c);
        out
    }

    pub fn sub(&self, other: &ModuleVector) -> Self {
        let mut out = self.clone();
        out.add_scaled(other, &Scalar::from_int(-1));
        out
    }

    pub fn is_zero(&self) -> bool {
        self.support.is_empty()
    }

    pub fn component(&self, s: LatticeVector) -> Option<&[Scalar]> {
        self.support.get(&s).map(Vec::as_slice)
    }

    pub fn degrees(&self) -> impl Iterator<Item = LatticeVector> + '_ {
        self.support.keys().copied()
    }

    pub fn components(&self) -> impl Iterator<Item = (LatticeVector, &[Scalar])> {
        self.support.iter().map(|(s, v)| (*s, v.as_slice()))
    }

    /// Applies a degree-dependent operator `s ↦ op(s)` and shifts degree `s`
    /// to `r + s`.
    fn map_terms(&self, r: LatticeVector, mut op: impl FnMut(LatticeVector) -> ExactMatrix) -> Self {
        let mut out = Self::zero(self.dim);
        for (s, coords) in &self.support {
            let image = op(*s).mul_vec(coords).expect("operator matches slice");
            out.add_at(r + *s, &image);
        }
        out
    }
}

impl fmt::Debug for ModuleVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.support.iter()).finish()
    }
}

/// `z^r · m`.
pub fn act_fun(spec: &LsModuleSpec, r: LatticeVector, m: &ModuleVector) -> ModuleVector {
    debug_assert_eq!(spec.dim(), m.dim());
    let mut out = ModuleVector::zero(m.dim);
    for (s, coords) in &m.support {
        out.add_at(r + *s, coords);
    }
    out
}

/// `z^r ∂_k · m`.
pub fn act_vec(spec: &LsModuleSpec, r: LatticeVector, k: Axis, m: &ModuleVector) -> ModuleVector {
    m.map_terms(r, |s| spec.field_operator(r, k, s))
}

/// `H(r) · m`.
pub fn act_ham(spec: &LsModuleSpec, r: LatticeVector, m: &ModuleVector) -> ModuleVector {
    m.map_terms(r, |s| spec.hamiltonian_operator(r, s))
}

/// Action of an arbitrary element of `𝔄 ⋊ Der 𝔄`.
pub fn act(spec: &LsModuleSpec, x: &LieElement, m: &ModuleVector) -> ModuleVector {
    let mut out = ModuleVector::zero(m.dim);
    for (symbol, c) in x.terms() {
        let image = match *symbol {
            BasisSymbol::Fun(r) => act_fun(spec, r, m),
            BasisSymbol::Field(r, k) => act_vec(spec, r, k, m),
        };
        out.add_scaled(&image, c);
    }
    out
}

/// `T(r) = z^{−r}H(r)` on the degree-zero slice:
/// `det(r, α)·I + r₁²E − r₂²F − r₁r₂H`.
pub fn t_matrix(spec: &LsModuleSpec, r: LatticeVector) -> ExactMatrix {
    spec.hamiltonian_operator(r, LatticeVector::ZERO)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Axiom {
    /// `z^r(z^s v) = z^s(z^r v) = z^{r+s} v`
    FunctionAssociativity,
    /// `z⁰ v = v`
    Unit,
    /// `[H(r), z^s] v = det(r,s) z^{r+s} v`
    HamiltonianFunctionBracket,
    /// `[H(r), H(s)] v = det(r,s) H(r+s) v`
    HamiltonianBracket,
    /// `z^r` and `H(r)` shift degrees by `r`
    Grading,
    /// `[z^r∂_k, z^s∂_l]` acts as the commutator of the actions
    FieldBracket,
    /// `[z^r∂_k, z^s]` acts as the commutator of the actions
    FieldFunctionBracket,
    /// `H(r) = r₁ z^r∂₂ − r₂ z^r∂₁`
    HamiltonianAsFields,
}

impl Axiom {
    pub fn name(self) -> &'static str {
        match self {
            Axiom::FunctionAssociativity => "function-associativity",
            Axiom::Unit => "unit",
            Axiom::HamiltonianFunctionBracket => "hamiltonian-function-bracket",
            Axiom::HamiltonianBracket => "hamiltonian-bracket",
            Axiom::Grading => "grading",
            Axiom::FieldBracket => "field-bracket",
            Axiom::FieldFunctionBracket => "field-function-bracket",
            Axiom::HamiltonianAsFields => "hamiltonian-as-fields",
        }
    }
}

/// First failing instance found by [`verify_module_axioms`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomViolation {
    pub axiom: Axiom,
    pub sample: usize,
    pub r: LatticeVector,
    pub s: LatticeVector,
    pub input: ModuleVector,
    pub lhs: ModuleVector,
    pub rhs: ModuleVector,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomReport {
    pub samples: usize,
    pub checks: usize,
    pub counterexample: Option<AxiomViolation>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }
}

/// Checks the module axioms on `sample_budget` seeded random samples,
/// stopping at the first counterexample.
///
/// Covers the `(𝔄, 𝔓)`-module axioms (associativity and unit of the `𝔄`
/// action, the two bracket compatibilities, grading) and, for the full
/// `𝔄 ⋊ Der 𝔄` action, the vector-field brackets and `H(r)` written in terms
/// of vector fields.
pub fn verify_module_axioms(spec: &LsModuleSpec, sample_budget: usize, seed: u64) -> AxiomReport {
    let mut rng = sampling::rng(seed);
    let dim = spec.dim();
    let mut checks = 0;
    for sample in 0..sample_budget {
        let r = sampling::lattice_vector(&mut rng, 4);
        let s = sampling::lattice_vector(&mut rng, 4);
        let k = sampling::axis(&mut rng);
        let l = sampling::axis(&mut rng);
        let m = sampling::module_vector(&mut rng, dim, 3, 3);
        let degree = sampling::lattice_vector(&mut rng, 3);
        let w = ModuleVector::homogeneous(degree, sampling::coordinates(&mut rng, dim));

        let mut fail = |axiom: Axiom, input: &ModuleVector, lhs: ModuleVector, rhs: ModuleVector| {
            checks += 1;
            (lhs != rhs).then(|| AxiomViolation {
                axiom,
                sample,
                r,
                s,
                input: input.clone(),
                lhs,
                rhs,
            })
        };

        let det_rs = Scalar::from_int(r.det(&s));
        let bracket = |lhs: ModuleVector, rhs: ModuleVector| lhs.sub(&rhs);

        let violation = None
            .or_else(|| {
                let rs = act_fun(spec, r, &act_fun(spec, s, &m));
                let sr = act_fun(spec, s, &act_fun(spec, r, &m));
                fail(Axiom::FunctionAssociativity, &m, rs.clone(), sr)
                    .or_else(|| fail(Axiom::FunctionAssociativity, &m, rs, act_fun(spec, r + s, &m)))
            })
            .or_else(|| fail(Axiom::Unit, &m, act_fun(spec, LatticeVector::ZERO, &m), m.clone()))
            .or_else(|| {
                let lhs = bracket(
                    act_ham(spec, r, &act_fun(spec, s, &m)),
                    act_fun(spec, s, &act_ham(spec, r, &m)),
                );
                let rhs = act_fun(spec, r + s, &m).scaled(&det_rs);
                fail(Axiom::HamiltonianFunctionBracket, &m, lhs, rhs)
            })
            .or_else(|| {
                let lhs = bracket(
                    act_ham(spec, r, &act_ham(spec, s, &m)),
                    act_ham(spec, s, &act_ham(spec, r, &m)),
                );
                let rhs = act_ham(spec, r + s, &m).scaled(&det_rs);
                fail(Axiom::HamiltonianBracket, &m, lhs, rhs)
            })
            .or_else(|| {
                let shifted = |v: &ModuleVector| {
                    let mut out = ModuleVector::zero(dim);
                    if let Some(c) = v.component(degree + r) {
                        out.add_at(degree + r, c);
                    }
                    out
                };
                let zf = act_fun(spec, r, &w);
                let hf = act_ham(spec, r, &w);
                fail(Axiom::Grading, &w, zf.clone(), shifted(&zf))
                    .or_else(|| fail(Axiom::Grading, &w, hf.clone(), shifted(&hf)))
            })
            .or_else(|| {
                let x = LieElement::field(r, k);
                let y = LieElement::field(s, l);
                let lhs = act(spec, &liealg::bracket(&x, &y), &m);
                let rhs = bracket(
                    act_vec(spec, r, k, &act_vec(spec, s, l, &m)),
                    act_vec(spec, s, l, &act_vec(spec, r, k, &m)),
                );
                fail(Axiom::FieldBracket, &m, lhs, rhs)
            })
            .or_else(|| {
                let x = LieElement::field(r, k);
                let lhs = act(spec, &liealg::bracket(&x, &LieElement::fun(s)), &m);
                let rhs = bracket(
                    act_vec(spec, r, k, &act_fun(spec, s, &m)),
                    act_fun(spec, s, &act_vec(spec, r, k, &m)),
                );
                fail(Axiom::FieldFunctionBracket, &m, lhs, rhs)
            })
            .or_else(|| {
                let lhs = act_ham(spec, r, &m);
                let mut rhs = act_vec(spec, r, Axis::Two, &m).scaled(&Scalar::from_int(r.r1));
                rhs.add_scaled(&act_vec(spec, r, Axis::One, &m), &Scalar::from_int(-r.r2));
                fail(Axiom::HamiltonianAsFields, &m, lhs, rhs)
            });

        if violation.is_some() {
            return AxiomReport {
                samples: sample + 1,
                checks,
                counterexample: violation,
            };
        }
    }
    AxiomReport {
        samples: sample_budget,
        checks,
        counterexample: None,
    }
}
