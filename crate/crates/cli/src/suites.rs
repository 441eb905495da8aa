//! Verification suites run by `vlike verify`.
//!
//! Every case is generated from `(seed, index)` alone, so a failure record
//! carries a self-contained witness that [`run_case`] replays exactly.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use vlike_core::identify::{delta_matrix, TRealization};
use vlike_core::liealg::{bracket, hamiltonian, jacobi_residual, poisson, Axis, BasisSymbol, LieElement};
use vlike_core::lsmodule::{act_fun, act_vec, t_matrix, verify_module_axioms, LsModuleSpec, ModuleVector};
use vlike_core::sampling::{self, case_seed, SampleRng};
use vlike_core::tcalc::{
    adjoint_on_symmetric_power, t_bracket, verify_commutator_identity, verify_delta_combinatorics,
    weight_check, x_eigen_check,
};
use vlike_core::{ExactMatrix, LatticeVector, Scalar};

use crate::formats::{
    module_vector_to_doc, unpoints, LieElementJson, LsModuleSpecJson, MatrixJson, PointJson,
    ScalarJson, TExpressionJson,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, clap::ValueEnum)]
pub enum Suite {
    Jacobi,
    PoissonConsistency,
    ModuleAxioms,
    TBracket,
    DeltaIdentities,
    CommutatorIdentity,
    XEigen,
    SymPower,
    WeightCheck,
    Delta3Vanish,
    MuIndependence,
}

impl Suite {
    pub const ALL: [Suite; 11] = [
        Suite::Jacobi,
        Suite::PoissonConsistency,
        Suite::ModuleAxioms,
        Suite::TBracket,
        Suite::DeltaIdentities,
        Suite::CommutatorIdentity,
        Suite::XEigen,
        Suite::SymPower,
        Suite::WeightCheck,
        Suite::Delta3Vanish,
        Suite::MuIndependence,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Jacobi => "jacobi",
            Suite::PoissonConsistency => "poisson-consistency",
            Suite::ModuleAxioms => "module-axioms",
            Suite::TBracket => "t-bracket",
            Suite::DeltaIdentities => "delta-identities",
            Suite::CommutatorIdentity => "commutator-identity",
            Suite::XEigen => "x-eigen",
            Suite::SymPower => "sym-power",
            Suite::WeightCheck => "weight-check",
            Suite::Delta3Vanish => "delta3-vanish",
            Suite::MuIndependence => "mu-independence",
        }
    }

    pub fn from_name(name: &str) -> Option<Suite> {
        Suite::ALL.into_iter().find(|s| s.name() == name)
    }

    /// The identity the suite checks.
    pub fn identity(self) -> &'static str {
        match self {
            Suite::Jacobi => {
                "[x,[y,z]] + [y,[z,x]] + [z,[x,y]] = 0 on A x| Der A: every basis triple with exponents in [-range,range]^2, then random 3-term triples"
            }
            Suite::PoissonConsistency => {
                "[H(r), z^s] = {z^r, z^s} = det(r,s) z^(r+s) and [H(r), H(s)] = det(r,s) H(r+s)"
            }
            Suite::ModuleAxioms => {
                "A-module associativity and unit, [H(r), z^s] and [H(r), H(s)] compatibility, grading, field brackets and H(r) = r1 z^r d2 - r2 z^r d1 on M_mu^alpha(lambda)"
            }
            Suite::TBracket => {
                "[T(r),T(s)] = det(r,s)(T(r+s) - T(r) - T(s)) is antisymmetric and satisfies Jacobi"
            }
            Suite::DeltaIdentities => {
                "Delta_k(r; u) is symmetric in u, Delta_k(r; -u1,...) = -Delta_k(r-u1; u1,...), Delta_{k+1} = Delta_k(r) - Delta_k(r+u'), additive in the first slot"
            }
            Suite::CommutatorIdentity => {
                "[T(r), Delta_k(s; u)] in both expansions: det(s,r) Delta_{k+1}(s; u, r) + sum_i det(r,u_i) Delta_k(s+u_i; u\\u_i, r) and det(s+sum u, r) Delta_{k+1}(s; u, r) + sum_i det(r,u_i) Delta_k(s; u\\u_i, r)"
            }
            Suite::XEigen => {
                "X Delta_k(e1; e2,...,e2) = k Delta_k(e1; e2,...,e2) with X = -ad T(-e2) ad T(-e1), for k = 1..max-k"
            }
            Suite::SymPower => {
                "modulo the next difference ideal, T(r) acts on Delta_k(0; u1..uk) ~ u1...uk as the derivation induced by M_r = [[-r1 r2, r1^2], [-r2^2, r1 r2]]"
            }
            Suite::WeightCheck => {
                "[T(e1) + T(e2) - T(e1+e2), Delta_k(0; e1^l, e2^(k-l))] = (2l - k) Delta_k(0; e1^l, e2^(k-l)) modulo the next difference ideal"
            }
            Suite::Delta3Vanish => "third differences of T(r) = z^(-r) H(r) vanish on M^alpha(lambda)",
            Suite::MuIndependence => {
                "z^(-r) H(r) on the degree-zero slice is the same matrix for every mu, whether computed directly or from z^r d1, z^r d2"
            }
        }
    }
}

/// Budget flags of `vlike verify`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteConfig {
    pub seed: u64,
    pub samples: usize,
    pub max_lambda: u32,
    pub max_k: usize,
    pub range: i64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            seed: 0,
            samples: 100,
            max_lambda: 6,
            max_k: 6,
            range: 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid budget: {0}")]
pub struct BudgetError(pub String);

const MAX_K: usize = 12;
const MAX_LAMBDA: u32 = 40;
const MAX_RANGE: i64 = 20;
const MAX_EXHAUSTIVE_RANGE: i64 = 3;

impl SuiteConfig {
    pub fn validate(&self, suite: Suite) -> Result<(), BudgetError> {
        let fail = |msg: String| Err(BudgetError(msg));
        if !(1..=MAX_RANGE).contains(&self.range) {
            return fail(format!("--range must be in 1..={MAX_RANGE}"));
        }
        if self.max_lambda > MAX_LAMBDA {
            return fail(format!("--max-lambda must be at most {MAX_LAMBDA}"));
        }
        if self.max_k > MAX_K {
            return fail(format!("--max-k must be at most {MAX_K}"));
        }
        match suite {
            Suite::Jacobi if self.range > MAX_EXHAUSTIVE_RANGE => fail(format!(
                "jacobi enumerates all basis triples; --range must be at most {MAX_EXHAUSTIVE_RANGE}"
            )),
            Suite::XEigen | Suite::DeltaIdentities if self.max_k < 1 => {
                fail("--max-k must be at least 1".into())
            }
            Suite::CommutatorIdentity | Suite::SymPower | Suite::WeightCheck if self.max_k < 2 => {
                fail("--max-k must be at least 2".into())
            }
            _ => Ok(()),
        }
    }
}

/// One self-contained input of a suite.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Case {
    Jacobi {
        x: LieElementJson,
        y: LieElementJson,
        z: LieElementJson,
    },
    PoissonConsistency {
        r: PointJson,
        s: PointJson,
    },
    ModuleAxioms {
        module: LsModuleSpecJson,
        seed: u64,
        samples: usize,
    },
    TBracket {
        x: TExpressionJson,
        y: TExpressionJson,
        z: TExpressionJson,
    },
    DeltaIdentities {
        r: PointJson,
        us: Vec<PointJson>,
        u_prime: PointJson,
    },
    CommutatorIdentity {
        r: PointJson,
        s: PointJson,
        us: Vec<PointJson>,
    },
    XEigen {
        k: usize,
    },
    SymPower {
        r: PointJson,
        us: Vec<PointJson>,
    },
    WeightCheck {
        k: usize,
        l: usize,
    },
    Delta3Vanish {
        module: LsModuleSpecJson,
        r: PointJson,
        us: Vec<PointJson>,
    },
    MuIndependence {
        lambda: u32,
        alpha: [ScalarJson; 2],
        mus: Vec<ScalarJson>,
        r: PointJson,
    },
}

impl Case {
    pub fn suite(&self) -> Suite {
        match self {
            Case::Jacobi { .. } => Suite::Jacobi,
            Case::PoissonConsistency { .. } => Suite::PoissonConsistency,
            Case::ModuleAxioms { .. } => Suite::ModuleAxioms,
            Case::TBracket { .. } => Suite::TBracket,
            Case::DeltaIdentities { .. } => Suite::DeltaIdentities,
            Case::CommutatorIdentity { .. } => Suite::CommutatorIdentity,
            Case::XEigen { .. } => Suite::XEigen,
            Case::SymPower { .. } => Suite::SymPower,
            Case::WeightCheck { .. } => Suite::WeightCheck,
            Case::Delta3Vanish { .. } => Suite::Delta3Vanish,
            Case::MuIndependence { .. } => Suite::MuIndependence,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Failure {
    pub index: u64,
    pub witness: Case,
    pub detail: Value,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: String,
    pub seed: u64,
    pub cases: u64,
    pub failures: Vec<Failure>,
    pub passed: bool,
}

fn vectors(rng: &mut SampleRng, n: usize, range: i64) -> Vec<PointJson> {
    (0..n)
        .map(|_| PointJson(sampling::lattice_vector(rng, range)))
        .collect()
}

fn point(rng: &mut SampleRng, range: i64) -> PointJson {
    PointJson(sampling::lattice_vector(rng, range))
}

fn mu_grid() -> [Scalar; 3] {
    [Scalar::zero(), Scalar::one(), Scalar::ratio(-2, 3)]
}

/// All cases of `suite` in index order. Random cases draw from a generator
/// seeded with [`case_seed`]`(seed, index)`.
pub fn cases(suite: Suite, cfg: &SuiteConfig) -> Box<dyn Iterator<Item = Case>> {
    let cfg = cfg.clone();
    let seed = cfg.seed;
    let range = cfg.range;
    let rng_for = move |index: usize| sampling::rng(case_seed(seed, index as u64));
    let per_order = |min_k: usize, cfg: &SuiteConfig| {
        let samples = cfg.samples;
        (min_k..=cfg.max_k).flat_map(move |k| (0..samples).map(move |i| (k, i)))
    };
    match suite {
        Suite::Jacobi => {
            let symbols: Vec<BasisSymbol> = (-range..=range)
                .flat_map(|a| (-range..=range).map(move |b| LatticeVector::new(a, b)))
                .flat_map(|r| {
                    [
                        BasisSymbol::Fun(r),
                        BasisSymbol::Field(r, Axis::One),
                        BasisSymbol::Field(r, Axis::Two),
                    ]
                })
                .collect();
            let n = symbols.len();
            let exhaustive = (0..n * n * n).map(move |i| {
                let basis = |j: usize| LieElementJson(LieElement::basis(symbols[j]));
                Case::Jacobi {
                    x: basis(i / (n * n)),
                    y: basis(i / n % n),
                    z: basis(i % n),
                }
            });
            let offset = n * n * n;
            let random = (0..cfg.samples).map(move |i| {
                let mut rng = rng_for(offset + i);
                let mut element = || LieElementJson(sampling::lie_element(&mut rng, 3, range));
                Case::Jacobi {
                    x: element(),
                    y: element(),
                    z: element(),
                }
            });
            Box::new(exhaustive.chain(random))
        }
        Suite::PoissonConsistency => Box::new((0..cfg.samples).map(move |i| {
            let mut rng = rng_for(i);
            Case::PoissonConsistency {
                r: point(&mut rng, range),
                s: point(&mut rng, range),
            }
        })),
        Suite::ModuleAxioms => {
            let samples = cfg.samples;
            Box::new(
                (0..=cfg.max_lambda)
                    .flat_map(|lambda| mu_grid().into_iter().map(move |mu| (lambda, mu)))
                    .enumerate()
                    .map(move |(i, (lambda, mu))| {
                        let mut rng = rng_for(i);
                        let alpha = sampling::alpha(&mut rng);
                        Case::ModuleAxioms {
                            module: LsModuleSpecJson(LsModuleSpec::new(lambda, alpha, mu)),
                            seed: case_seed(seed, i as u64),
                            samples,
                        }
                    }),
            )
        }
        Suite::TBracket => Box::new((0..cfg.samples).map(move |i| {
            let mut rng = rng_for(i);
            let mut expr = || TExpressionJson(sampling::t_expression(&mut rng, 3, range));
            Case::TBracket {
                x: expr(),
                y: expr(),
                z: expr(),
            }
        })),
        Suite::DeltaIdentities => Box::new(per_order(1, &cfg).enumerate().map(move |(i, (k, _))| {
            let mut rng = rng_for(i);
            Case::DeltaIdentities {
                r: point(&mut rng, range),
                us: vectors(&mut rng, k, range),
                u_prime: point(&mut rng, range),
            }
        })),
        Suite::CommutatorIdentity => Box::new(per_order(2, &cfg).enumerate().map(move |(i, (k, _))| {
            let mut rng = rng_for(i);
            Case::CommutatorIdentity {
                r: point(&mut rng, range),
                s: point(&mut rng, range),
                us: vectors(&mut rng, k, range),
            }
        })),
        Suite::XEigen => Box::new((1..=cfg.max_k).map(|k| Case::XEigen { k })),
        Suite::SymPower => Box::new(per_order(2, &cfg).enumerate().map(move |(i, (k, _))| {
            let mut rng = rng_for(i);
            Case::SymPower {
                r: point(&mut rng, range),
                us: vectors(&mut rng, k, range),
            }
        })),
        Suite::WeightCheck => {
            Box::new((2..=cfg.max_k).flat_map(|k| (0..=k).map(move |l| Case::WeightCheck { k, l })))
        }
        Suite::Delta3Vanish => {
            let samples = cfg.samples;
            Box::new(
                (0..=cfg.max_lambda)
                    .flat_map(move |lambda| (0..samples).map(move |_| lambda))
                    .enumerate()
                    .map(move |(i, lambda)| {
                        let mut rng = rng_for(i);
                        let alpha = sampling::alpha(&mut rng);
                        Case::Delta3Vanish {
                            module: LsModuleSpecJson(LsModuleSpec::new(lambda, alpha, Scalar::zero())),
                            r: point(&mut rng, range),
                            us: vectors(&mut rng, 3, range),
                        }
                    }),
            )
        }
        Suite::MuIndependence => {
            let samples = cfg.samples;
            Box::new(
                (0..=cfg.max_lambda)
                    .flat_map(move |lambda| (0..samples).map(move |_| lambda))
                    .enumerate()
                    .map(move |(i, lambda)| {
                        let mut rng = rng_for(i);
                        let [a1, a2] = sampling::alpha(&mut rng);
                        let mut mus: Vec<ScalarJson> = mu_grid().into_iter().map(ScalarJson).collect();
                        mus.push(ScalarJson(sampling::scalar(&mut rng)));
                        Case::MuIndependence {
                            lambda,
                            alpha: [ScalarJson(a1), ScalarJson(a2)],
                            mus,
                            r: point(&mut rng, range),
                        }
                    }),
            )
        }
    }
}

fn texpr(x: &vlike_core::tcalc::TExpression) -> Value {
    serde_json::to_value(TExpressionJson(x.clone())).expect("serializable")
}

fn lie(x: &LieElement) -> Value {
    serde_json::to_value(LieElementJson(x.clone())).expect("serializable")
}

fn matrix(m: &ExactMatrix) -> Value {
    serde_json::to_value(MatrixJson(m.clone())).expect("serializable")
}

fn form(f: &vlike_core::tcalc::BinaryForm) -> Value {
    serde_json::to_value(f.coeffs().iter().cloned().map(ScalarJson).collect::<Vec<_>>())
        .expect("serializable")
}

/// `z^{−r}(r₁ z^r∂₂ − r₂ z^r∂₁)` restricted to the degree-zero slice.
fn shifted_field_operator(spec: &LsModuleSpec, r: LatticeVector) -> ExactMatrix {
    let n = spec.dim();
    let columns: Vec<Vec<Scalar>> = (0..n)
        .map(|j| {
            let v = ModuleVector::basis(n, j, LatticeVector::ZERO);
            let mut image = act_vec(spec, r, Axis::Two, &v).scaled(&Scalar::from_int(r.r1));
            image.add_scaled(&act_vec(spec, r, Axis::One, &v), &Scalar::from_int(-r.r2));
            act_fun(spec, -r, &image)
                .component(LatticeVector::ZERO)
                .map(<[Scalar]>::to_vec)
                .unwrap_or_else(|| vec![Scalar::zero(); n])
        })
        .collect();
    ExactMatrix::from_fn(n, n, |i, j| columns[j][i].clone())
}

/// Runs one case; `Err` carries a JSON description of the discrepancy.
pub fn run_case(case: &Case) -> Result<(), Value> {
    match case {
        Case::Jacobi { x, y, z } => {
            let residual = jacobi_residual(&x.0, &y.0, &z.0);
            if residual.is_zero() {
                Ok(())
            } else {
                Err(json!({ "residual": lie(&residual) }))
            }
        }
        Case::PoissonConsistency { r, s } => {
            let (r, s) = (r.0, s.0);
            let expected = poisson(r, s);
            let with_function = bracket(&hamiltonian(r), &LieElement::fun(s));
            let with_hamiltonian = bracket(&hamiltonian(r), &hamiltonian(s));
            let closure = hamiltonian(r + s).scaled(&Scalar::from_int(r.det(&s)));
            if with_function != expected {
                Err(json!({ "check": "hamiltonian-function", "lhs": lie(&with_function), "rhs": lie(&expected) }))
            } else if with_hamiltonian != closure {
                Err(json!({ "check": "hamiltonian-hamiltonian", "lhs": lie(&with_hamiltonian), "rhs": lie(&closure) }))
            } else {
                Ok(())
            }
        }
        Case::ModuleAxioms { module, seed, samples } => {
            let report = verify_module_axioms(&module.0, *samples, *seed);
            match report.counterexample {
                None => Ok(()),
                Some(v) => Err(json!({
                    "axiom": v.axiom.name(),
                    "sample": v.sample,
                    "r": PointJson(v.r),
                    "s": PointJson(v.s),
                    "input": module_vector_to_doc(&v.input),
                    "lhs": module_vector_to_doc(&v.lhs),
                    "rhs": module_vector_to_doc(&v.rhs),
                })),
            }
        }
        Case::TBracket { x, y, z } => {
            let (x, y, z) = (&x.0, &y.0, &z.0);
            let antisymmetry = &t_bracket(x, y) + &t_bracket(y, x);
            let jacobi = &(&t_bracket(x, &t_bracket(y, z)) + &t_bracket(y, &t_bracket(z, x)))
                + &t_bracket(z, &t_bracket(x, y));
            if antisymmetry.is_zero() && jacobi.is_zero() {
                Ok(())
            } else {
                Err(json!({ "antisymmetry": texpr(&antisymmetry), "jacobi": texpr(&jacobi) }))
            }
        }
        Case::DeltaIdentities { r, us, u_prime } => {
            let report = verify_delta_combinatorics(r.0, &unpoints(us), u_prime.0)
                .map_err(|e| json!({ "error": e.to_string() }))?;
            if report.passed() {
                Ok(())
            } else {
                Err(json!({
                    "permutation": texpr(&report.permutation),
                    "sign": texpr(&report.sign),
                    "recursion": texpr(&report.recursion),
                    "additivity": texpr(&report.additivity),
                }))
            }
        }
        Case::CommutatorIdentity { r, s, us } => {
            let report = verify_commutator_identity(r.0, s.0, &unpoints(us))
                .map_err(|e| json!({ "error": e.to_string() }))?;
            if report.passed() {
                Ok(())
            } else {
                Err(json!({
                    "shifted_residual": texpr(&report.shifted_residual),
                    "unshifted_residual": texpr(&report.unshifted_residual),
                }))
            }
        }
        Case::XEigen { k } => {
            let report = x_eigen_check(*k).map_err(|e| json!({ "error": e.to_string() }))?;
            if report.passed() {
                Ok(())
            } else {
                Err(json!({ "residual": texpr(&report.residual) }))
            }
        }
        Case::SymPower { r, us } => {
            let report =
                adjoint_on_symmetric_power(r.0, &unpoints(us)).map_err(|e| json!({ "error": e.to_string() }))?;
            if report.passed() {
                Ok(())
            } else {
                Err(json!({
                    "expansion_residual": texpr(&report.expansion_residual),
                    "computed": form(&report.computed),
                    "expected": form(&report.expected),
                }))
            }
        }
        Case::WeightCheck { k, l } => {
            let report = weight_check(*k, *l).map_err(|e| json!({ "error": e.to_string() }))?;
            if report.passed() {
                Ok(())
            } else {
                Err(json!({
                    "eigenvalue": report.eigenvalue,
                    "expansion_residual": texpr(&report.expansion_residual),
                    "computed": form(&report.computed),
                    "expected": form(&report.expected),
                }))
            }
        }
        Case::Delta3Vanish { module, r, us } => {
            let real = TRealization::from_module(&module.0);
            let d = delta_matrix(&real, r.0, &unpoints(us)).expect("closure realization");
            if d.is_zero() {
                Ok(())
            } else {
                Err(json!({ "delta3": matrix(&d) }))
            }
        }
        Case::MuIndependence { lambda, alpha, mus, r } => {
            let alpha = [alpha[0].0.clone(), alpha[1].0.clone()];
            let specs: Vec<_> = mus
                .iter()
                .map(|mu| LsModuleSpec::new(*lambda, alpha.clone(), mu.0.clone()))
                .collect();
            let Some(first) = specs.first() else {
                return Ok(());
            };
            let reference = t_matrix(first, r.0);
            for spec in &specs {
                let direct = t_matrix(spec, r.0);
                let from_fields = shifted_field_operator(spec, r.0);
                if direct != reference || from_fields != reference {
                    return Err(json!({
                        "mu": ScalarJson(spec.mu().clone()),
                        "reference": matrix(&reference),
                        "direct": matrix(&direct),
                        "from_fields": matrix(&from_fields),
                    }));
                }
            }
            Ok(())
        }
    }
}

/// Runs every case of `suite`, keeping failures in index order.
pub fn run_suite(suite: Suite, cfg: &SuiteConfig) -> SuiteReport {
    let mut count = 0u64;
    let mut failures = Vec::new();
    for (index, case) in cases(suite, cfg).enumerate() {
        count += 1;
        if let Err(detail) = run_case(&case) {
            failures.push(Failure {
                index: index as u64,
                witness: case,
                detail,
            });
        }
    }
    SuiteReport {
        suite: suite.name().to_string(),
        seed: cfg.seed,
        passed: failures.is_empty(),
        cases: count,
        failures,
    }
}

#[derive(Debug, Error)]
pub enum ReplayError {
    #[error("replay input is not a report, failure record or case: {0}")]
    Format(#[from] serde_json::Error),
    #[error("witness belongs to suite {found}, not {expected}")]
    SuiteMismatch { expected: &'static str, found: &'static str },
}

/// Replays witnesses from a suite report, a single failure record, or a
/// bare case. Indices are taken from the input when present.
pub fn replay(suite: Suite, input: &Value) -> Result<SuiteReport, ReplayError> {
    let (seed, witnesses): (u64, Vec<(u64, Case)>) = if input.get("failures").is_some() {
        let report: SuiteReport = serde_json::from_value(input.clone())?;
        (report.seed, report.failures.into_iter().map(|f| (f.index, f.witness)).collect())
    } else if input.get("witness").is_some() {
        let failure: Failure = serde_json::from_value(input.clone())?;
        (0, vec![(failure.index, failure.witness)])
    } else {
        (0, vec![(0, serde_json::from_value(input.clone())?)])
    };
    let mut failures = Vec::new();
    for (index, case) in &witnesses {
        if case.suite() != suite {
            return Err(ReplayError::SuiteMismatch {
                expected: suite.name(),
                found: case.suite().name(),
            });
        }
        if let Err(detail) = run_case(case) {
            failures.push(Failure {
                index: *index,
                witness: case.clone(),
                detail,
            });
        }
    }
    Ok(SuiteReport {
        suite: suite.name().to_string(),
        seed,
        cases: witnesses.len() as u64,
        passed: failures.is_empty(),
        failures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> SuiteConfig {
        SuiteConfig {
            seed: 3,
            samples: 5,
            max_lambda: 2,
            max_k: 4,
            range: 1,
        }
    }

    #[test]
    fn names_round_trip() {
        for suite in Suite::ALL {
            assert_eq!(Suite::from_name(suite.name()), Some(suite));
        }
        assert_eq!(Suite::from_name("nope"), None);
    }

    #[test]
    fn case_generation_is_deterministic() {
        for suite in Suite::ALL {
            let a: Vec<_> = cases(suite, &small()).collect();
            let b: Vec<_> = cases(suite, &small()).collect();
            assert_eq!(a, b, "{}", suite.name());
            assert!(!a.is_empty(), "{}", suite.name());
            assert!(a.iter().all(|c| c.suite() == suite));
        }
    }

    #[test]
    fn small_suites_pass() {
        for suite in Suite::ALL {
            if suite == Suite::XEigen {
                continue;
            }
            let report = run_suite(suite, &small());
            assert!(report.passed, "{}: {:?}", suite.name(), report.failures.first());
        }
    }

    #[test]
    fn x_eigen_reports_the_first_order_case() {
        let report = run_suite(Suite::XEigen, &small());
        assert_eq!(report.cases, 4);
        assert_eq!(report.failures.len(), 1);
        assert_eq!(report.failures[0].witness, Case::XEigen { k: 1 });
    }

    #[test]
    fn witnesses_survive_json() {
        for suite in Suite::ALL {
            for case in cases(suite, &small()).take(3) {
                let text = serde_json::to_string(&case).unwrap();
                let back: Case = serde_json::from_str(&text).unwrap();
                assert_eq!(back, case);
            }
        }
    }

    #[test]
    fn replay_reproduces_failures() {
        let report = run_suite(Suite::XEigen, &small());
        let value = serde_json::to_value(&report).unwrap();
        let replayed = replay(Suite::XEigen, &value).unwrap();
        assert_eq!(replayed.failures, report.failures);
        let single = serde_json::to_value(&report.failures[0]).unwrap();
        assert_eq!(replay(Suite::XEigen, &single).unwrap().failures, report.failures);
        assert!(matches!(
            replay(Suite::Jacobi, &value),
            Err(ReplayError::SuiteMismatch { .. })
        ));
    }

    #[test]
    fn budgets_are_validated() {
        let mut cfg = small();
        cfg.range = 4;
        assert!(cfg.validate(Suite::Jacobi).is_err());
        assert!(cfg.validate(Suite::TBracket).is_ok());
        cfg.range = 0;
        assert!(cfg.validate(Suite::TBracket).is_err());
        let cfg = SuiteConfig { max_k: 1, ..small() };
        assert!(cfg.validate(Suite::CommutatorIdentity).is_err());
        assert!(cfg.validate(Suite::XEigen).is_ok());
    }
}
