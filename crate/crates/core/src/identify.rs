//! Recovering `(α, λ)` from a finite-dimensional realization `r ↦ T(r)`.
//!
//! A realization whose matrices satisfy
//! `[T(r), T(s)] = det(r,s)(T(r+s) − T(r) − T(s))` and which is simple has
//! the quadratic shape
//!
//! ```text
//! T(r) = r₁τ₁ + r₂τ₂ + r₁²E − r₂²F − r₁r₂H
//! ```
//!
//! for scalars `τ₁, τ₂` and an `sl₂` triple `(E, F, H)` acting irreducibly.
//! [`identify`] extracts these from a handful of evaluations, reads off
//! `λ = dim − 1` and `α = (−τ₂, τ₁)`, builds the change of basis to the
//! standard `V(λ)` and then audits the result against every probe.
//!
//! Stages run in this order, each mapped to an error variant:
//!
//! 1. structural audit (dimensions, `T(0) = 0`, the probe core
//!    `±e₁, ±e₂, e₁+e₂` is available)
//! 2. `τ₁ = ½(T(e₁) − T(−e₁))`, `τ₂ = ½(T(e₂) − T(−e₂))` must be scalar
//! 3. `E = T(e₁) − τ₁`, `F = −(T(e₂) − τ₂)`, `H = T(e₁) + T(e₂) − T(e₁+e₂)`
//!    must satisfy the Chevalley relations with `E`, `F` nilpotent
//! 4. the commutant of `{E, F, H}` must be the scalars
//! 5. the quadratic formula must reproduce every probe
//! 6. the bracket relation must hold on the audited probe pairs
//!
//! The quadratic audit runs before the bracket audit so that a realization
//! carrying a higher-order term is reported as such, rather than as a
//! generic bracket failure.

use alloc::collections::{btree_map, BTreeMap};
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use crate::lattice::{IntegralMatrix, LatticeVector};
use crate::lsmodule::{t_matrix, LsModuleSpec};
use crate::matrix::{ExactMatrix, MatrixError};
use crate::sampling;
use crate::scalar::Scalar;
use crate::sl2rep::{
    build_irrep, chevalley_residuals, commutant_dimension, highest_weight_of, Sl2Error, Sl2Triple,
};
use crate::tcalc;

type EvalFn = dyn Fn(LatticeVector) -> ExactMatrix + Send + Sync;

#[derive(Clone)]
enum Source {
    Closure(Arc<EvalFn>),
    Table(BTreeMap<LatticeVector, ExactMatrix>),
}

/// A map `r ↦ T(r)` into `n×n` rational matrices, given either as a
/// function or as a finite table of samples.
#[derive(Clone)]
pub struct TRealization {
    dim: usize,
    source: Source,
}

impl fmt::Debug for TRealization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.source {
            Source::Closure(_) => f
                .debug_struct("TRealization")
                .field("dim", &self.dim)
                .finish_non_exhaustive(),
            Source::Table(t) => f
                .debug_struct("TRealization")
                .field("dim", &self.dim)
                .field("samples", &t.len())
                .finish(),
        }
    }
}

impl TRealization {
    pub fn from_fn<F>(dim: usize, eval: F) -> Self
    where
        F: Fn(LatticeVector) -> ExactMatrix + Send + Sync + 'static,
    {
        assert!(dim > 0, "realization dimension must be positive");
        TRealization {
            dim,
            source: Source::Closure(Arc::new(eval)),
        }
    }

    /// A tabulated realization. Later samples at the same point replace
    /// earlier ones. Shapes are checked by [`identify`], not here.
    pub fn from_samples<I>(dim: usize, samples: I) -> Self
    where
        I: IntoIterator<Item = (LatticeVector, ExactMatrix)>,
    {
        assert!(dim > 0, "realization dimension must be positive");
        TRealization {
            dim,
            source: Source::Table(samples.into_iter().collect()),
        }
    }

    /// `r ↦ t_matrix(spec, r)`.
    pub fn from_module(spec: &LsModuleSpec) -> Self {
        let spec = spec.clone();
        TRealization::from_fn(spec.dim(), move |r| t_matrix(&spec, r))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_tabulated(&self) -> bool {
        matches!(self.source, Source::Table(_))
    }

    /// The tabulated points, if any.
    pub fn sample_points(&self) -> Option<Vec<LatticeVector>> {
        match &self.source {
            Source::Closure(_) => None,
            Source::Table(t) => Some(t.keys().copied().collect()),
        }
    }

    /// `T(r)`, or `None` for a table without a sample at `r`. A table
    /// without an entry at the origin evaluates to zero there.
    pub fn eval(&self, r: LatticeVector) -> Option<ExactMatrix> {
        match &self.source {
            Source::Closure(f) => Some(f(r)),
            Source::Table(t) => t
                .get(&r)
                .cloned()
                .or_else(|| r.is_zero().then(|| ExactMatrix::zeros(self.dim, self.dim))),
        }
    }

    /// Evaluates at each point of `points`, skipping missing samples.
    pub fn tabulate(&self, points: &[LatticeVector]) -> Vec<(LatticeVector, ExactMatrix)> {
        points.iter().filter_map(|r| self.eval(*r).map(|m| (*r, m))).collect()
    }

    /// `r ↦ P·T(r)·P⁻¹`.
    pub fn conjugated(&self, p: &ExactMatrix, p_inv: &ExactMatrix) -> TRealization {
        let conj = |m: &ExactMatrix| m.conjugate_by(p, p_inv).expect("conjugator matches realization");
        match &self.source {
            Source::Closure(f) => {
                let (f, p, p_inv) = (f.clone(), p.clone(), p_inv.clone());
                TRealization::from_fn(self.dim, move |r| {
                    f(r).conjugate_by(&p, &p_inv).expect("conjugator matches realization")
                })
            }
            Source::Table(t) => {
                TRealization::from_samples(self.dim, t.iter().map(|(r, m)| (*r, conj(m))))
            }
        }
    }

    /// `r ↦ T(r) + g(r)·I`; used to build realizations that leave the
    /// quadratic family.
    pub fn with_scalar_term<G>(&self, g: G) -> TRealization
    where
        G: Fn(LatticeVector) -> Scalar + Send + Sync + 'static,
    {
        let add = |r: LatticeVector, mut m: ExactMatrix, g: &G| {
            m.add_identity_scaled(&g(r)).expect("square matrix");
            m
        };
        match &self.source {
            Source::Closure(f) => {
                let f = f.clone();
                TRealization::from_fn(self.dim, move |r| add(r, f(r), &g))
            }
            Source::Table(t) => {
                TRealization::from_samples(self.dim, t.iter().map(|(r, m)| (*r, add(*r, m.clone(), &g))))
            }
        }
    }
}

/// Block-diagonal sum of two realizations.
pub fn direct_sum(a: &TRealization, b: &TRealization) -> TRealization {
    let (a, b) = (a.clone(), b.clone());
    let (n, m) = (a.dim(), b.dim());
    TRealization::from_fn(n + m, move |r| {
        let x = a.eval(r).expect("closure realization");
        let y = b.eval(r).expect("closure realization");
        ExactMatrix::from_fn(n + m, n + m, |i, j| match (i < n, j < n) {
            (true, true) => x.get(i, j).clone(),
            (false, false) => y.get(i - n, j - n).clone(),
            _ => Scalar::zero(),
        })
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("det(r, s) = {det} is not ±1")]
pub struct NonUnimodular {
    pub det: i64,
}

/// `u ↦ det(r,s)·T(u₁r + u₂s)` for a unimodular pair `(r, s)`.
pub fn degree_transform(
    r: LatticeVector,
    s: LatticeVector,
    real: &TRealization,
) -> Result<TRealization, NonUnimodular> {
    let det = r.det(&s);
    if det != 1 && det != -1 {
        return Err(NonUnimodular { det });
    }
    let theta = IntegralMatrix::new(r.r1, s.r1, r.r2, s.r2);
    let sign = Scalar::from_int(det);
    match &real.source {
        Source::Closure(f) => {
            let f = f.clone();
            Ok(TRealization::from_fn(real.dim, move |u| f(theta.apply(u)).scaled(&sign)))
        }
        Source::Table(t) => {
            // Θ⁻¹ = det · [[s₂, −s₁], [−r₂, r₁]] since det = ±1.
            let inv = IntegralMatrix::new(det * s.r2, -det * s.r1, -det * r.r2, det * r.r1);
            Ok(TRealization::from_samples(
                real.dim,
                t.iter().map(|(v, m)| (inv.apply(*v), m.scaled(&sign))),
            ))
        }
    }
}

/// Which structural check of [`identify`] failed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AuditFailure {
    MissingProbe { r: LatticeVector },
    Shape { r: LatticeVector, rows: usize, cols: usize },
    NonzeroAtOrigin,
    BracketRelation { r: LatticeVector, s: LatticeVector },
}

impl fmt::Display for AuditFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AuditFailure::MissingProbe { r } => write!(f, "no sample at {r}"),
            AuditFailure::Shape { r, rows, cols } => write!(f, "sample at {r} has shape {rows}x{cols}"),
            AuditFailure::NonzeroAtOrigin => f.write_str("T(0) is not zero"),
            AuditFailure::BracketRelation { r, s } => {
                write!(f, "bracket relation fails for r = {r}, s = {s}")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum IdentifyError {
    #[error("audit failed: {0}")]
    Audit(AuditFailure),
    #[error("tau{axis} is not a scalar matrix")]
    NonScalarTau { axis: u8 },
    #[error("extracted (E, F, H) is not an sl2 triple: {reason}")]
    NotSl2Triple { reason: &'static str },
    #[error("realization is not irreducible (commutant dimension {commutant_dimension})")]
    NotIrreducible { commutant_dimension: usize },
    #[error("quadratic formula fails at r = {r}")]
    NotLarssonShen { r: LatticeVector },
}

impl IdentifyError {
    /// Process exit status used by the command-line front end.
    pub fn exit_code(&self) -> u8 {
        match self {
            IdentifyError::Audit(_) => 1,
            IdentifyError::NonScalarTau { .. } => 2,
            IdentifyError::NotSl2Triple { .. } => 3,
            IdentifyError::NotIrreducible { .. } => 4,
            IdentifyError::NotLarssonShen { .. } => 5,
        }
    }

    pub fn stage(&self) -> &'static str {
        match self {
            IdentifyError::Audit(AuditFailure::BracketRelation { .. }) => "bracket-audit",
            IdentifyError::Audit(_) => "structural-audit",
            IdentifyError::NonScalarTau { .. } => "extract-taus",
            IdentifyError::NotSl2Triple { .. } => "extract-triple",
            IdentifyError::NotIrreducible { .. } => "irreducibility",
            IdentifyError::NotLarssonShen { .. } => "quadratic-audit",
        }
    }
}

const PROBE_CORE: [LatticeVector; 5] = [
    LatticeVector::E1,
    LatticeVector::new(-1, 0),
    LatticeVector::E2,
    LatticeVector::new(0, -1),
    LatticeVector::new(1, 1),
];

fn fetch(real: &TRealization, r: LatticeVector) -> Result<ExactMatrix, IdentifyError> {
    let m = real
        .eval(r)
        .ok_or(IdentifyError::Audit(AuditFailure::MissingProbe { r }))?;
    if m.shape() != (real.dim, real.dim) {
        return Err(IdentifyError::Audit(AuditFailure::Shape {
            r,
            rows: m.rows(),
            cols: m.cols(),
        }));
    }
    Ok(m)
}

/// `(τ₁, τ₂) = (½(T(e₁) − T(−e₁)), ½(T(e₂) − T(−e₂)))`, each required to
/// be a scalar matrix.
pub fn extract_taus(real: &TRealization) -> Result<(Scalar, Scalar), IdentifyError> {
    let half = Scalar::ratio(1, 2);
    let tau = |axis: u8, u: LatticeVector| -> Result<Scalar, IdentifyError> {
        let diff = fetch(real, u)?.checked_sub(&fetch(real, -u)?).expect("shapes checked");
        diff.scaled(&half)
            .as_scalar()
            .ok_or(IdentifyError::NonScalarTau { axis })
    };
    Ok((tau(1, LatticeVector::E1)?, tau(2, LatticeVector::E2)?))
}

/// Result of [`nilpotency_witness`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NilpotencyReport {
    /// `[D, E] − δE`.
    pub premise_residual: ExactMatrix,
    /// `E^n`.
    pub power_residual: ExactMatrix,
}

impl NilpotencyReport {
    pub fn premise_holds(&self) -> bool {
        self.premise_residual.is_zero()
    }

    pub fn nilpotent(&self) -> bool {
        self.power_residual.is_zero()
    }

    pub fn passed(&self) -> bool {
        self.premise_holds() && self.nilpotent()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum NilpotencyError {
    #[error("the eigenvalue must be nonzero")]
    ZeroEigenvalue,
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

/// If `[D, E] = δE` with `δ ≠ 0` then `E` is nilpotent; checks both the
/// premise and `E^n = 0`.
pub fn nilpotency_witness(
    d: &ExactMatrix,
    e: &ExactMatrix,
    delta: &Scalar,
) -> Result<NilpotencyReport, NilpotencyError> {
    if delta.is_zero() {
        return Err(NilpotencyError::ZeroEigenvalue);
    }
    let mut premise_residual = d.commutator(e)?;
    premise_residual.add_scaled(e, &-delta)?;
    let power_residual = e.pow(e.rows() as u32)?;
    Ok(NilpotencyReport {
        premise_residual,
        power_residual,
    })
}

/// `E = T(e₁) − τ₁`, `F = −(T(e₂) − τ₂)`, `H = T(e₁) + T(e₂) − T(e₁+e₂)`,
/// accepted only if the Chevalley relations hold and `E`, `F` are nilpotent.
pub fn extract_triple(
    real: &TRealization,
    tau1: &Scalar,
    tau2: &Scalar,
) -> Result<Sl2Triple, IdentifyError> {
    let t1 = fetch(real, LatticeVector::E1)?;
    let t2 = fetch(real, LatticeVector::E2)?;
    let t12 = fetch(real, LatticeVector::E1 + LatticeVector::E2)?;

    let mut e = t1.clone();
    e.add_identity_scaled(&-tau1).expect("square");
    let mut f = t2.clone();
    f.add_identity_scaled(&-tau2).expect("square");
    let f = f.scaled(&Scalar::from_int(-1));
    let h = t1.checked_add(&t2).and_then(|m| m.checked_sub(&t12)).expect("square");

    let triple = Sl2Triple::new(e, f, h).expect("shapes checked");
    if !chevalley_residuals(&triple).is_zero() {
        return Err(IdentifyError::NotSl2Triple {
            reason: "Chevalley relations fail",
        });
    }
    let nilpotent = |x: &ExactMatrix, delta: i64| {
        nilpotency_witness(triple.h(), x, &Scalar::from_int(delta))
            .map(|w| w.passed())
            .unwrap_or(false)
    };
    if !nilpotent(triple.e(), 2) || !nilpotent(triple.f(), -2) {
        return Err(IdentifyError::NotSl2Triple {
            reason: "E or F is not nilpotent",
        });
    }
    Ok(triple)
}

/// Exact output of [`identify`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentificationResult {
    pub alpha: [Scalar; 2],
    pub lambda: u32,
    pub tau1: Scalar,
    pub tau2: Scalar,
    /// `(E, F, H)` in the input basis.
    pub triple: Sl2Triple,
    /// `C` with `C·X·C⁻¹` equal to the standard `V(λ)` matrix for each
    /// `X ∈ {E, F, H}`.
    pub change_of_basis: ExactMatrix,
}

/// The points at which [`identify`] evaluates: the fixed core
/// `e₁, −e₁, e₂, −e₂, e₁+e₂` followed by `probe_budget` seeded points with
/// components in `[−5, 5]`, or, for tabulated realizations, every sample.
pub fn probe_points(real: &TRealization, probe_budget: usize, seed: u64) -> Vec<LatticeVector> {
    let mut points = PROBE_CORE.to_vec();
    match real.sample_points() {
        Some(samples) => {
            points.extend(samples.into_iter().filter(|r| !PROBE_CORE.contains(r) && !r.is_zero()))
        }
        None => {
            let mut rng = sampling::rng(seed);
            points.extend((0..probe_budget).map(|_| sampling::lattice_vector(&mut rng, 5)));
        }
    }
    points
}

/// `v₀` spanning `ker E ∩ ker(H − λ)`, scaled so its first nonzero
/// coordinate is 1, and `P` with columns `F^i v₀`.
fn highest_weight_basis(triple: &Sl2Triple, lambda: u32) -> Option<ExactMatrix> {
    let n = triple.dim();
    let mut shifted_h = triple.h().clone();
    shifted_h.add_identity_scaled(&-Scalar::from_int(lambda as i64)).ok()?;
    let mut stacked = triple.e().to_rows();
    stacked.extend(shifted_h.to_rows());
    let kernel = ExactMatrix::from_rows(stacked).ok()?.nullspace();
    if kernel.len() != 1 {
        return None;
    }
    let mut v = kernel.into_iter().next()?;
    let lead = v.iter().find(|x| !x.is_zero())?.recip()?;
    for x in v.iter_mut() {
        *x *= &lead;
    }
    let mut columns = Vec::with_capacity(n);
    for _ in 0..n {
        let next = triple.f().mul_vec(&v).ok()?;
        columns.push(core::mem::replace(&mut v, next));
    }
    Some(ExactMatrix::from_fn(n, n, |i, j| columns[j][i].clone()))
}

/// `r₁τ₁ + r₂τ₂ + r₁²E − r₂²F − r₁r₂H`.
pub fn quadratic_form(triple: &Sl2Triple, tau1: &Scalar, tau2: &Scalar, r: LatticeVector) -> ExactMatrix {
    let c = Scalar::from_int(r.r1) * tau1 + Scalar::from_int(r.r2) * tau2;
    let mut m = ExactMatrix::scalar(triple.dim(), c);
    m.add_scaled(triple.e(), &Scalar::from_int(r.r1 * r.r1)).expect("same shape");
    m.add_scaled(triple.f(), &Scalar::from_int(-r.r2 * r.r2)).expect("same shape");
    m.add_scaled(triple.h(), &Scalar::from_int(-r.r1 * r.r2)).expect("same shape");
    m
}

/// Runs the full pipeline described in the module documentation.
pub fn identify(
    real: &TRealization,
    probe_budget: usize,
    seed: u64,
) -> Result<IdentificationResult, IdentifyError> {
    let probes = probe_points(real, probe_budget, seed);
    let mut cache: BTreeMap<LatticeVector, ExactMatrix> = BTreeMap::new();
    for &r in probes.iter().chain([LatticeVector::ZERO].iter()) {
        if let btree_map::Entry::Vacant(slot) = cache.entry(r) {
            slot.insert(fetch(real, r)?);
        }
    }
    if !cache[&LatticeVector::ZERO].is_zero() {
        return Err(IdentifyError::Audit(AuditFailure::NonzeroAtOrigin));
    }

    let (tau1, tau2) = extract_taus(real)?;
    let triple = extract_triple(real, &tau1, &tau2)?;

    let commutant = commutant_dimension(&[triple.e().clone(), triple.f().clone(), triple.h().clone()])
        .expect("square matrices of one shape");
    if commutant != 1 {
        return Err(IdentifyError::NotIrreducible {
            commutant_dimension: commutant,
        });
    }
    let lambda = highest_weight_of(&triple).map_err(|err| match err {
        Sl2Error::NotIrreducible | Sl2Error::NotSemisimpleH => IdentifyError::NotIrreducible {
            commutant_dimension: commutant,
        },
        Sl2Error::Matrix(_) | Sl2Error::EmptyInput => unreachable!("triple shapes are validated"),
    })?;
    let alpha = [-tau2.clone(), tau1.clone()];

    let p = highest_weight_basis(&triple, lambda).ok_or(IdentifyError::NotIrreducible {
        commutant_dimension: commutant,
    })?;
    let change_of_basis = p.inverse().map_err(|_| IdentifyError::NotIrreducible {
        commutant_dimension: commutant,
    })?;
    if triple.conjugate_by(&change_of_basis, &p).ok().as_ref() != Some(&build_irrep(lambda)) {
        return Err(IdentifyError::NotSl2Triple {
            reason: "no basis brings the triple to standard form",
        });
    }

    for &r in &probes {
        if cache[&r] != quadratic_form(&triple, &tau1, &tau2, r) {
            return Err(IdentifyError::NotLarssonShen { r });
        }
    }

    for (r, s) in audit_pairs(&probes) {
        let sum = r + s;
        let t_sum = match cache.get(&sum) {
            Some(m) => m.clone(),
            None if real.eval(sum).is_some() => fetch(real, sum)?,
            // A table may not cover every sum; such pairs are skipped.
            None => continue,
        };
        let lhs = cache[&r].commutator(&cache[&s]).expect("square");
        let mut rhs = t_sum;
        rhs.add_scaled(&cache[&r], &Scalar::from_int(-1)).expect("square");
        rhs.add_scaled(&cache[&s], &Scalar::from_int(-1)).expect("square");
        if lhs != rhs.scaled(&Scalar::from_int(r.det(&s))) {
            return Err(IdentifyError::Audit(AuditFailure::BracketRelation { r, s }));
        }
    }

    Ok(IdentificationResult {
        alpha,
        lambda,
        tau1,
        tau2,
        triple,
        change_of_basis,
    })
}

/// All pairs within the core, and every later probe paired with `e₁`, `e₂`
/// and its successor.
fn audit_pairs(probes: &[LatticeVector]) -> Vec<(LatticeVector, LatticeVector)> {
    let core = PROBE_CORE.len().min(probes.len());
    let mut pairs = Vec::new();
    for i in 0..core {
        for j in i + 1..core {
            pairs.push((probes[i], probes[j]));
        }
    }
    for i in core..probes.len() {
        pairs.push((probes[i], LatticeVector::E1));
        pairs.push((probes[i], LatticeVector::E2));
        if i + 1 < probes.len() {
            pairs.push((probes[i], probes[i + 1]));
        }
    }
    pairs
}

/// `Δ_k(r; u₁,…,u_k)` evaluated in the realization, or `None` if a needed
/// sample is missing.
pub fn delta_matrix(real: &TRealization, r: LatticeVector, us: &[LatticeVector]) -> Option<ExactMatrix> {
    let mut out = ExactMatrix::zeros(real.dim, real.dim);
    for (u, c) in tcalc::delta(r, us).terms() {
        out.add_scaled(&real.eval(u)?, c).ok()?;
    }
    Some(out)
}
