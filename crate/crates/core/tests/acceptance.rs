//! Acceptance gate. Prints one PASS/FAIL line per criterion and exits with a
//! nonzero status if any criterion fails. All comparisons are exact.

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use vlike_core::identify::{self, direct_sum, extract_taus, IdentifyError, TRealization};
use vlike_core::liealg::{bracket, hamiltonian, jacobi_residual, Axis, BasisSymbol, LieElement};
use vlike_core::lsmodule::{
    act_fun, act_ham, act_vec, t_matrix, verify_module_axioms, LsModuleSpec, ModuleVector,
};
use vlike_core::sampling;
use vlike_core::sl2rep::{build_irrep, Sl2Triple};
use vlike_core::tcalc::{
    adjoint_on_symmetric_power, delta, verify_commutator_identity,
    verify_delta_combinatorics, weight_check, x_eigen_check, TExpression,
};
use vlike_core::{ExactMatrix, LatticeVector, Scalar};

type Outcome = Result<String, String>;

struct Criterion {
    id: u32,
    name: &'static str,
    limit: Option<Duration>,
    run: fn() -> Outcome,
}

fn lattice_grid(range: i64) -> Vec<LatticeVector> {
    (-range..=range)
        .flat_map(|a| (-range..=range).map(move |b| LatticeVector::new(a, b)))
        .collect()
}

fn int(n: i64) -> Scalar {
    Scalar::from_int(n)
}

fn jacobi() -> Outcome {
    let mut symbols = Vec::new();
    for r in lattice_grid(2) {
        symbols.push(BasisSymbol::Fun(r));
        symbols.push(BasisSymbol::Field(r, Axis::One));
        symbols.push(BasisSymbol::Field(r, Axis::Two));
    }
    let elements: Vec<LieElement> = symbols.iter().map(|s| LieElement::basis(*s)).collect();
    let mut triples = 0u64;
    for x in &elements {
        for y in &elements {
            let xy = bracket(x, y);
            for z in &elements {
                // [x,[y,z]] + [y,[z,x]] + [z,[x,y]]
                let residual = &(&bracket(x, &bracket(y, z)) + &bracket(y, &bracket(z, x)))
                    + &bracket(z, &xy);
                if !residual.is_zero() {
                    return Err(format!("basis triple {x:?} {y:?} {z:?}"));
                }
                triples += 1;
            }
        }
    }
    let mut rng = sampling::rng(1);
    for i in 0..500 {
        let x = sampling::lie_element(&mut rng, 3, 4);
        let y = sampling::lie_element(&mut rng, 3, 4);
        let z = sampling::lie_element(&mut rng, 3, 4);
        if !jacobi_residual(&x, &y, &z).is_zero() {
            return Err(format!("random triple {i}"));
        }
    }
    Ok(format!("{triples} basis triples and 500 random triples"))
}

/// `H(r) = r₁ z^r∂₂ − r₂ z^r∂₁`, assembled from fields.
fn hamiltonian_oracle(r: LatticeVector) -> LieElement {
    let mut h = LieElement::zero();
    h.add_term(BasisSymbol::Field(r, Axis::Two), int(r.r1));
    h.add_term(BasisSymbol::Field(r, Axis::One), int(-r.r2));
    h
}

fn virasoro_closure() -> Outcome {
    let grid = lattice_grid(5);
    let mut pairs = 0;
    for &r in &grid {
        let hr = hamiltonian(r);
        if hr != hamiltonian_oracle(r) {
            return Err(format!("H({r}) disagrees with its field expansion"));
        }
        for &s in &grid {
            let det = int(r.r1 * s.r2 - r.r2 * s.r1);
            if bracket(&hr, &hamiltonian(s)) != hamiltonian_oracle(r + s).scaled(&det) {
                return Err(format!("[H({r}), H({s})]"));
            }
            if bracket(&hr, &LieElement::fun(s)) != LieElement::fun(r + s).scaled(&det) {
                return Err(format!("[H({r}), z^{s}]"));
            }
            pairs += 1;
        }
    }
    Ok(format!("{pairs} pairs"))
}

fn mu_values() -> [Scalar; 3] {
    [Scalar::zero(), Scalar::one(), Scalar::ratio(-2, 3)]
}

fn module_axioms() -> Outcome {
    let mut rng = sampling::rng(3);
    let alphas: Vec<[Scalar; 2]> = (0..5).map(|_| sampling::alpha(&mut rng)).collect();
    let mut checks = 0;
    let mut consistency = 0;
    for lambda in 0..=6 {
        for mu in mu_values() {
            for (i, alpha) in alphas.iter().enumerate() {
                let spec = LsModuleSpec::new(lambda, alpha.clone(), mu.clone());
                let seed = (lambda as u64) << 8 | i as u64;
                let report = verify_module_axioms(&spec, 200, seed);
                if let Some(v) = report.counterexample {
                    return Err(format!(
                        "λ={lambda} μ={mu} α=({}, {}): {} at sample {}",
                        alpha[0],
                        alpha[1],
                        v.axiom.name(),
                        v.sample
                    ));
                }
                checks += report.checks;

                let mut g = sampling::rng(seed ^ 0xface);
                for _ in 0..200 {
                    let r = sampling::lattice_vector(&mut g, 5);
                    let m = sampling::module_vector(&mut g, spec.dim(), 2, 4);
                    let mut fields = act_vec(&spec, r, Axis::Two, &m).scaled(&int(r.r1));
                    fields.add_scaled(&act_vec(&spec, r, Axis::One, &m), &int(-r.r2));
                    if act_ham(&spec, r, &m) != fields {
                        return Err(format!("act_ham and act_vec disagree at r={r}, λ={lambda}"));
                    }
                    consistency += 1;
                }
            }
        }
    }
    Ok(format!("{checks} axiom checks, {consistency} consistency checks"))
}

/// `z^{−r}(r₁ z^r∂₂ − r₂ z^r∂₁)` on the degree-zero slice, column by column.
fn shifted_field_operator(spec: &LsModuleSpec, r: LatticeVector) -> ExactMatrix {
    let n = spec.dim();
    let columns: Vec<Vec<Scalar>> = (0..n)
        .map(|j| {
            let v = ModuleVector::basis(n, j, LatticeVector::ZERO);
            let mut image = act_vec(spec, r, Axis::Two, &v).scaled(&int(r.r1));
            image.add_scaled(&act_vec(spec, r, Axis::One, &v), &int(-r.r2));
            let back = act_fun(spec, -r, &image);
            back.component(LatticeVector::ZERO)
                .map(<[Scalar]>::to_vec)
                .unwrap_or_else(|| vec![Scalar::zero(); n])
        })
        .collect();
    ExactMatrix::from_fn(n, n, |i, j| columns[j][i].clone())
}

fn mu_independence() -> Outcome {
    let mut rng = sampling::rng(4);
    let grid = lattice_grid(5);
    let mus = [Scalar::zero(), Scalar::one(), Scalar::ratio(-2, 3), Scalar::ratio(7, 2)];
    let mut compared = 0;
    for lambda in 0..=6 {
        for _ in 0..3 {
            let alpha = sampling::alpha(&mut rng);
            let specs: Vec<_> = mus
                .iter()
                .map(|mu| LsModuleSpec::new(lambda, alpha.clone(), mu.clone()))
                .collect();
            for &r in &grid {
                let reference = t_matrix(&specs[0], r);
                for spec in &specs {
                    if t_matrix(spec, r) != reference || shifted_field_operator(spec, r) != reference {
                        return Err(format!("λ={lambda} μ={} r={r}", spec.mu()));
                    }
                    compared += 1;
                }
            }
        }
    }
    Ok(format!("{compared} comparisons"))
}

/// Flat `Σ c_u T(u)` with `T(0)` dropped, kept independent of the library
/// expression type.
type Flat = BTreeMap<(i64, i64), Scalar>;

fn flat_add(out: &mut Flat, u: LatticeVector, c: Scalar) {
    if u.is_zero() || c.is_zero() {
        return;
    }
    let slot = out.entry((u.r1, u.r2)).or_insert_with(Scalar::zero);
    *slot += c;
    if slot.is_zero() {
        out.remove(&(u.r1, u.r2));
    }
}

fn flat_delta(r: LatticeVector, us: &[LatticeVector]) -> Flat {
    // Recursive u-differences: Δ(r; u, rest) = Δ(r; rest) − Δ(r+u; rest).
    fn go(r: LatticeVector, us: &[LatticeVector], sign: i64, out: &mut Flat) {
        match us.split_first() {
            None => flat_add(out, r, int(sign)),
            Some((u, rest)) => {
                go(r, rest, sign, out);
                go(r + *u, rest, -sign, out);
            }
        }
    }
    let mut out = Flat::new();
    go(r, us, 1, &mut out);
    out
}

fn flat_bracket_single(r: LatticeVector, y: &Flat) -> Flat {
    let mut out = Flat::new();
    for (&(a, b), c) in y {
        let s = LatticeVector::new(a, b);
        let d = int(r.r1 * s.r2 - r.r2 * s.r1);
        flat_add(&mut out, r + s, &d * c);
        flat_add(&mut out, r, -(&d * c));
        flat_add(&mut out, s, -(&d * c));
    }
    out
}

fn to_flat(x: &TExpression) -> Flat {
    x.terms().map(|(u, c)| ((u.r1, u.r2), c.clone())).collect()
}

fn commutator_identity() -> Outcome {
    let mut rng = sampling::rng(5);
    let mut cases = 0;
    for k in 2..=6 {
        for i in 0..200 {
            let r = sampling::lattice_vector(&mut rng, 4);
            let s = sampling::lattice_vector(&mut rng, 4);
            let us: Vec<_> = (0..k).map(|_| sampling::lattice_vector(&mut rng, 4)).collect();
            let report = verify_commutator_identity(r, s, &us).map_err(|e| e.to_string())?;
            if to_flat(&report.lhs) != flat_bracket_single(r, &flat_delta(s, &us)) {
                return Err(format!("k={k} sample {i}: direct expansion disagrees with oracle"));
            }
            if !report.passed() {
                return Err(format!("k={k} sample {i}: r={r} s={s} us={us:?}"));
            }
            cases += 1;
        }
    }
    Ok(format!("{cases} cases, both forms"))
}

fn delta_combinatorics() -> Outcome {
    let mut rng = sampling::rng(6);
    let mut cases = 0;
    for k in 1..=6 {
        for i in 0..200 {
            let r = sampling::lattice_vector(&mut rng, 4);
            let us: Vec<_> = (0..k).map(|_| sampling::lattice_vector(&mut rng, 4)).collect();
            let u_prime = sampling::lattice_vector(&mut rng, 4);
            if to_flat(&delta(r, &us)) != flat_delta(r, &us) {
                return Err(format!("k={k} sample {i}: alternating sum disagrees with oracle"));
            }
            let report = verify_delta_combinatorics(r, &us, u_prime).map_err(|e| e.to_string())?;
            let failed: Vec<&str> = [
                ("permutation", &report.permutation),
                ("sign", &report.sign),
                ("recursion", &report.recursion),
                ("additivity", &report.additivity),
            ]
            .into_iter()
            .filter(|(_, res)| !res.is_zero())
            .map(|(name, _)| name)
            .collect();
            if !failed.is_empty() {
                return Err(format!("k={k} sample {i}: {failed:?}"));
            }
            cases += 1;
        }
    }
    Ok(format!("{cases} samples per identity over k ≤ 6"))
}

fn x_eigen() -> Outcome {
    let mut failing = Vec::new();
    for k in 1..=8 {
        let report = x_eigen_check(k).map_err(|e| e.to_string())?;
        // Independent evaluation of −[T(−e₂), [T(−e₁), Δ_k(e₁; e₂^k)]].
        let d = flat_delta(LatticeVector::E1, &vec![LatticeVector::E2; k]);
        let inner = flat_bracket_single(-LatticeVector::E1, &d);
        let mut image = flat_bracket_single(-LatticeVector::E2, &inner);
        for c in image.values_mut() {
            *c = -c.clone();
        }
        if to_flat(&report.image) != image {
            return Err(format!("k={k}: image disagrees with oracle"));
        }
        if !report.passed() {
            failing.push(format!("k={k} residual {:?}", report.residual));
        }
    }
    if failing.is_empty() {
        Ok("k = 1..8".into())
    } else {
        Err(failing.join("; "))
    }
}

/// Coefficients of `X^j Y^{k−j}` for `Π (u₁X + u₂Y)`, multiplied out in
/// test code.
fn poly_product(us: &[LatticeVector]) -> Vec<Scalar> {
    let mut acc = vec![Scalar::one()];
    for u in us {
        let mut next = vec![Scalar::zero(); acc.len() + 1];
        for (j, c) in acc.iter().enumerate() {
            next[j + 1] += c * int(u.r1);
            next[j] += c * int(u.r2);
        }
        acc = next;
    }
    acc
}

fn symmetric_power() -> Outcome {
    let mut rng = sampling::rng(8);
    let mut cases = 0;
    for k in 2..=6 {
        for i in 0..100 {
            let r = sampling::lattice_vector(&mut rng, 4);
            let us: Vec<_> = (0..k).map(|_| sampling::lattice_vector(&mut rng, 4)).collect();
            let report = adjoint_on_symmetric_power(r, &us).map_err(|e| e.to_string())?;
            // Σ_i det(r, u_i) · (slots with u_i replaced by r)
            let mut expected = vec![Scalar::zero(); k + 1];
            for (idx, u) in us.iter().enumerate() {
                let mut slots = us.clone();
                slots[idx] = r;
                let d = int(r.r1 * u.r2 - r.r2 * u.r1);
                for (e, c) in expected.iter_mut().zip(poly_product(&slots)) {
                    *e += &d * c;
                }
            }
            if report.expected.coeffs() != expected.as_slice() {
                return Err(format!("k={k} sample {i}: derivation action disagrees with oracle"));
            }
            if !report.passed() {
                return Err(format!("k={k} sample {i}: r={r} us={us:?}"));
            }
            cases += 1;
        }
    }
    let mut weights = 0;
    for k in 2..=6usize {
        for l in 0..=k {
            let report = weight_check(k, l).map_err(|e| e.to_string())?;
            let mut expected = vec![Scalar::zero(); k + 1];
            expected[l] = int(2 * l as i64 - k as i64);
            if report.expected.coeffs() != expected.as_slice() || !report.passed() {
                return Err(format!("weight k={k} ℓ={l}: computed {:?}", report.computed));
            }
            weights += 1;
        }
    }
    Ok(format!("{cases} symmetric-power samples, {weights} weight checks"))
}

fn delta3_vanishing() -> Outcome {
    let mut rng = sampling::rng(9);
    let mut cases = 0;
    for lambda in 0..=10 {
        for _ in 0..10 {
            let spec = LsModuleSpec::new(lambda, sampling::alpha(&mut rng), Scalar::zero());
            let real = TRealization::from_module(&spec);
            for i in 0..200 {
                let r = sampling::lattice_vector(&mut rng, 4);
                let us: Vec<_> = (0..3).map(|_| sampling::lattice_vector(&mut rng, 4)).collect();
                let mut sum = ExactMatrix::zeros(spec.dim(), spec.dim());
                for (&(a, b), c) in &flat_delta(r, &us) {
                    sum.add_scaled(&t_matrix(&spec, LatticeVector::new(a, b)), c)
                        .map_err(|e| e.to_string())?;
                }
                if !sum.is_zero() {
                    return Err(format!("λ={lambda} sample {i}: r={r} us={us:?}"));
                }
                if identify::delta_matrix(&real, r, &us) != Some(sum) {
                    return Err(format!("λ={lambda} sample {i}: delta_matrix disagrees"));
                }
                cases += 1;
            }
        }
    }
    Ok(format!("{cases} cases"))
}

fn round_trip() -> Outcome {
    let mut rng = sampling::rng(10);
    let mut cases = 0;
    for lambda in 0..=10 {
        for i in 0..20 {
            let alpha = sampling::alpha(&mut rng);
            let spec = LsModuleSpec::new(lambda, alpha.clone(), Scalar::zero());
            let plain = TRealization::from_module(&spec);
            let (p, p_inv) = sampling::invertible_matrix(&mut rng, spec.dim());
            let conjugated = plain.conjugated(&p, &p_inv);
            for (label, real) in [("plain", &plain), ("conjugated", &conjugated)] {
                let result = identify::identify(real, 8, i).map_err(|e| {
                    format!("λ={lambda} α=({}, {}) {label}: {e}", alpha[0], alpha[1])
                })?;
                if result.lambda != lambda || result.alpha != alpha {
                    return Err(format!("λ={lambda} {label}: recovered λ={} α={:?}", result.lambda, result.alpha));
                }
                let c = &result.change_of_basis;
                let c_inv = c.inverse().map_err(|e| e.to_string())?;
                let standard = build_irrep(lambda);
                for (x, y) in [
                    (result.triple.e(), standard.e()),
                    (result.triple.f(), standard.f()),
                    (result.triple.h(), standard.h()),
                ] {
                    if &(&(c * x) * &c_inv) != y {
                        return Err(format!("λ={lambda} {label}: change of basis is wrong"));
                    }
                }
                cases += 1;
            }
        }
    }
    Ok(format!("{cases} identifications"))
}

fn negative_paths() -> Outcome {
    let q = Scalar::ratio;
    let (e, f, h) = build_irrep(2).into_parts();
    let swapped = LsModuleSpec::with_triple(
        Sl2Triple::new(f, e, h).map_err(|e| e.to_string())?,
        [q(1, 3), q(-2, 1)],
        q(5, 1),
    );
    if verify_module_axioms(&swapped, 200, 0).passed() {
        return Err("swapped E/F passed the module axioms".into());
    }
    match identify::identify(&TRealization::from_module(&swapped), 8, 0) {
        Err(IdentifyError::NotSl2Triple { .. }) => {}
        other => return Err(format!("swapped E/F: {other:?}")),
    }

    let base = TRealization::from_module(&LsModuleSpec::new(3, [q(1, 2), q(-1, 1)], Scalar::zero()));
    let cubic = base.with_scalar_term(|r| int(r.r1.pow(3)));
    match identify::identify(&cubic, 8, 0) {
        Err(IdentifyError::NotLarssonShen { .. }) => {}
        other => return Err(format!("cubic term: {other:?}")),
    }
    let table = TRealization::from_samples(4, cubic.tabulate(&lattice_grid(2)));
    match identify::identify(&table, 0, 0) {
        Err(IdentifyError::NotLarssonShen { .. }) => {}
        other => return Err(format!("tabulated cubic term: {other:?}")),
    }

    let perturbed = {
        let base = base.clone();
        TRealization::from_fn(4, move |r| {
            let mut m = base.eval(r).expect("closure");
            if r == LatticeVector::E1 {
                m.set(1, 3, m.get(1, 3) + Scalar::one());
            }
            m
        })
    };
    match extract_taus(&perturbed) {
        Err(IdentifyError::NonScalarTau { axis: 1 }) => {}
        other => return Err(format!("perturbed τ: {other:?}")),
    }
    let other = TRealization::from_module(&LsModuleSpec::new(3, [q(3, 2), q(-1, 1)], Scalar::zero()));
    match identify::identify(&direct_sum(&base, &other), 8, 0) {
        Err(IdentifyError::NonScalarTau { axis: 2 }) => {}
        other => return Err(format!("direct sum: {other:?}")),
    }
    Ok("swapped E/F, cubic term, non-scalar τ all rejected".into())
}

fn main() -> ExitCode {
    let criteria = [
        Criterion { id: 1, name: "jacobi identity", limit: Some(Duration::from_secs(60)), run: jacobi },
        Criterion { id: 2, name: "hamiltonian closure", limit: Some(Duration::from_secs(10)), run: virasoro_closure },
        Criterion { id: 3, name: "module axioms", limit: Some(Duration::from_secs(120)), run: module_axioms },
        Criterion { id: 4, name: "mu independence", limit: None, run: mu_independence },
        Criterion { id: 5, name: "commutator identity", limit: Some(Duration::from_secs(60)), run: commutator_identity },
        Criterion { id: 6, name: "difference combinatorics", limit: None, run: delta_combinatorics },
        Criterion { id: 7, name: "x eigenvalue", limit: None, run: x_eigen },
        Criterion { id: 8, name: "symmetric power", limit: None, run: symmetric_power },
        Criterion { id: 9, name: "third differences vanish", limit: None, run: delta3_vanishing },
        Criterion { id: 10, name: "classification round trip", limit: Some(Duration::from_secs(120)), run: round_trip },
        Criterion { id: 11, name: "negative paths", limit: None, run: negative_paths },
    ];
    let mut failures = 0;
    for c in &criteria {
        let start = Instant::now();
        let outcome = (c.run)();
        let elapsed = start.elapsed();
        let outcome = match (outcome, c.limit) {
            (Ok(_), Some(limit)) if elapsed > limit => {
                Err(format!("took {elapsed:.2?}, limit {limit:?}"))
            }
            (o, _) => o,
        };
        match outcome {
            Ok(detail) => println!("PASS {:>2} {}: {detail} ({elapsed:.2?})", c.id, c.name),
            Err(detail) => {
                failures += 1;
                println!("FAIL {:>2} {}: {detail} ({elapsed:.2?})", c.id, c.name);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
