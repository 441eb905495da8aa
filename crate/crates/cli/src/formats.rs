//! JSON encodings of the core types.
//!
//! Scalars travel as `"p/q"` strings (`"p"` when `q = 1`), lattice vectors as
//! `[r1, r2]` and matrices as row-major arrays of scalar strings. Each core
//! type gets a newtype wrapper whose serde impls go through a plain document
//! struct, so the core crate stays free of serde.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use vlike_core::identify::{IdentificationResult, TRealization};
use vlike_core::liealg::{Axis, BasisSymbol, LieElement};
use vlike_core::lsmodule::{LsModuleSpec, ModuleVector};
use vlike_core::sl2rep::Sl2Triple;
use vlike_core::tcalc::{DeltaTerm, TExpression};
use vlike_core::{ExactMatrix, LatticeVector, MatrixError, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("invalid scalar {0:?}")]
    Scalar(String),
    #[error("invalid matrix: {0}")]
    Matrix(#[from] MatrixError),
    #[error("axis must be 1 or 2, got {0}")]
    Axis(u8),
    #[error("expected a {expected}x{expected} matrix, got {rows}x{cols}")]
    Shape { expected: usize, rows: usize, cols: usize },
    #[error("coordinate vector has length {found}, expected {expected}")]
    Coordinates { expected: usize, found: usize },
    #[error("dimension must be positive")]
    ZeroDimension,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "String", try_from = "ScalarRepr")]
pub struct ScalarJson(pub Scalar);

#[derive(Deserialize)]
#[serde(untagged)]
enum ScalarRepr {
    Text(String),
    Integer(i64),
}

impl From<ScalarJson> for String {
    fn from(s: ScalarJson) -> String {
        s.0.to_string()
    }
}

impl TryFrom<ScalarRepr> for ScalarJson {
    type Error = FormatError;
    fn try_from(repr: ScalarRepr) -> Result<Self, FormatError> {
        match repr {
            ScalarRepr::Integer(n) => Ok(ScalarJson(Scalar::from_int(n))),
            ScalarRepr::Text(text) => text
                .trim()
                .parse()
                .map(ScalarJson)
                .map_err(|_| FormatError::Scalar(text)),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "[i64; 2]", from = "[i64; 2]")]
pub struct PointJson(pub LatticeVector);

impl From<PointJson> for [i64; 2] {
    fn from(p: PointJson) -> Self {
        [p.0.r1, p.0.r2]
    }
}

impl From<[i64; 2]> for PointJson {
    fn from([a, b]: [i64; 2]) -> Self {
        PointJson(LatticeVector::new(a, b))
    }
}

pub fn points(vs: &[LatticeVector]) -> Vec<PointJson> {
    vs.iter().copied().map(PointJson).collect()
}

pub fn unpoints(vs: &[PointJson]) -> Vec<LatticeVector> {
    vs.iter().map(|p| p.0).collect()
}

fn scalars(xs: &[Scalar]) -> Vec<ScalarJson> {
    xs.iter().cloned().map(ScalarJson).collect()
}

fn unscalars(xs: Vec<ScalarJson>) -> Vec<Scalar> {
    xs.into_iter().map(|s| s.0).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "Vec<Vec<ScalarJson>>", try_from = "Vec<Vec<ScalarJson>>")]
pub struct MatrixJson(pub ExactMatrix);

impl From<MatrixJson> for Vec<Vec<ScalarJson>> {
    fn from(m: MatrixJson) -> Self {
        m.0.to_rows().into_iter().map(|row| scalars(&row)).collect()
    }
}

impl TryFrom<Vec<Vec<ScalarJson>>> for MatrixJson {
    type Error = FormatError;
    fn try_from(rows: Vec<Vec<ScalarJson>>) -> Result<Self, FormatError> {
        let rows = rows.into_iter().map(unscalars).collect();
        Ok(MatrixJson(ExactMatrix::from_rows(rows)?))
    }
}

fn square(m: ExactMatrix, n: usize) -> Result<ExactMatrix, FormatError> {
    if m.shape() != (n, n) {
        return Err(FormatError::Shape {
            expected: n,
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    Ok(m)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SymbolDoc {
    Fun { fun: PointJson },
    Vec { vec: PointJson, axis: u8 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LieTermDoc {
    pub symbol: SymbolDoc,
    pub coefficient: ScalarJson,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "Vec<LieTermDoc>", try_from = "Vec<LieTermDoc>")]
pub struct LieElementJson(pub LieElement);

impl From<LieElementJson> for Vec<LieTermDoc> {
    fn from(x: LieElementJson) -> Self {
        x.0.terms()
            .map(|(symbol, c)| LieTermDoc {
                symbol: match *symbol {
                    BasisSymbol::Fun(r) => SymbolDoc::Fun { fun: PointJson(r) },
                    BasisSymbol::Field(r, k) => SymbolDoc::Vec {
                        vec: PointJson(r),
                        axis: k.index(),
                    },
                },
                coefficient: ScalarJson(c.clone()),
            })
            .collect()
    }
}

impl TryFrom<Vec<LieTermDoc>> for LieElementJson {
    type Error = FormatError;
    fn try_from(terms: Vec<LieTermDoc>) -> Result<Self, FormatError> {
        let mut out = LieElement::zero();
        for term in terms {
            let symbol = match term.symbol {
                SymbolDoc::Fun { fun } => BasisSymbol::Fun(fun.0),
                SymbolDoc::Vec { vec, axis } => {
                    BasisSymbol::Field(vec.0, Axis::from_index(axis).ok_or(FormatError::Axis(axis))?)
                }
            };
            out.add_term(symbol, term.coefficient.0);
        }
        Ok(LieElementJson(out))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TTermDoc {
    pub u: PointJson,
    pub coeff: ScalarJson,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "Vec<TTermDoc>", from = "Vec<TTermDoc>")]
pub struct TExpressionJson(pub TExpression);

impl From<TExpressionJson> for Vec<TTermDoc> {
    fn from(x: TExpressionJson) -> Self {
        x.0.terms()
            .map(|(u, c)| TTermDoc {
                u: PointJson(u),
                coeff: ScalarJson(c.clone()),
            })
            .collect()
    }
}

impl From<Vec<TTermDoc>> for TExpressionJson {
    fn from(terms: Vec<TTermDoc>) -> Self {
        TExpressionJson(terms.into_iter().map(|t| (t.u.0, t.coeff.0)).collect())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeltaTermJson {
    pub coeff: ScalarJson,
    pub base: PointJson,
    pub slots: Vec<PointJson>,
}

impl From<&DeltaTerm> for DeltaTermJson {
    fn from(t: &DeltaTerm) -> Self {
        DeltaTermJson {
            coeff: ScalarJson(t.coeff.clone()),
            base: PointJson(t.base),
            slots: points(&t.slots),
        }
    }
}

impl From<DeltaTermJson> for DeltaTerm {
    fn from(t: DeltaTermJson) -> Self {
        DeltaTerm::new(t.coeff.0, t.base.0, unpoints(&t.slots))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sl2TripleDoc {
    pub dim: usize,
    #[serde(rename = "E")]
    pub e: MatrixJson,
    #[serde(rename = "F")]
    pub f: MatrixJson,
    #[serde(rename = "H")]
    pub h: MatrixJson,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "Sl2TripleDoc", try_from = "Sl2TripleDoc")]
pub struct Sl2TripleJson(pub Sl2Triple);

impl From<Sl2TripleJson> for Sl2TripleDoc {
    fn from(t: Sl2TripleJson) -> Self {
        let dim = t.0.dim();
        let (e, f, h) = t.0.into_parts();
        Sl2TripleDoc {
            dim,
            e: MatrixJson(e),
            f: MatrixJson(f),
            h: MatrixJson(h),
        }
    }
}

impl TryFrom<Sl2TripleDoc> for Sl2TripleJson {
    type Error = FormatError;
    fn try_from(doc: Sl2TripleDoc) -> Result<Self, FormatError> {
        let n = doc.dim;
        let e = square(doc.e.0, n)?;
        let f = square(doc.f.0, n)?;
        let h = square(doc.h.0, n)?;
        Ok(Sl2TripleJson(
            Sl2Triple::new(e, f, h).expect("shapes checked above"),
        ))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LsModuleSpecDoc {
    pub lambda: u32,
    pub alpha: [ScalarJson; 2],
    pub mu: ScalarJson,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "LsModuleSpecDoc", from = "LsModuleSpecDoc")]
pub struct LsModuleSpecJson(pub LsModuleSpec);

impl From<LsModuleSpecJson> for LsModuleSpecDoc {
    fn from(spec: LsModuleSpecJson) -> Self {
        let spec = spec.0;
        LsModuleSpecDoc {
            lambda: spec.lambda(),
            alpha: [ScalarJson(spec.alpha()[0].clone()), ScalarJson(spec.alpha()[1].clone())],
            mu: ScalarJson(spec.mu().clone()),
        }
    }
}

impl From<LsModuleSpecDoc> for LsModuleSpecJson {
    fn from(doc: LsModuleSpecDoc) -> Self {
        let [a1, a2] = doc.alpha;
        LsModuleSpecJson(LsModuleSpec::new(doc.lambda, [a1.0, a2.0], doc.mu.0))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuleTermDoc {
    pub degree: PointJson,
    pub coords: Vec<ScalarJson>,
}

pub fn module_vector_to_doc(m: &ModuleVector) -> Vec<ModuleTermDoc> {
    m.components()
        .map(|(s, coords)| ModuleTermDoc {
            degree: PointJson(s),
            coords: scalars(coords),
        })
        .collect()
}

/// Decodes a module vector whose slices have dimension `dim`.
pub fn module_vector_from_doc(dim: usize, terms: Vec<ModuleTermDoc>) -> Result<ModuleVector, FormatError> {
    if dim == 0 {
        return Err(FormatError::ZeroDimension);
    }
    let mut m = ModuleVector::zero(dim);
    for term in terms {
        if term.coords.len() != dim {
            return Err(FormatError::Coordinates {
                expected: dim,
                found: term.coords.len(),
            });
        }
        m.add_at(term.degree.0, &unscalars(term.coords));
    }
    Ok(m)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleDoc {
    pub r: PointJson,
    pub matrix: MatrixJson,
}

/// Offline realization: `{"dim": n, "samples": [{"r": [r1, r2], "matrix": ...}]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RealizationDoc {
    pub dim: usize,
    pub samples: Vec<SampleDoc>,
}

impl RealizationDoc {
    /// Tabulates `real` at `points`; points without a sample are skipped.
    pub fn tabulate(real: &TRealization, points: &[LatticeVector]) -> Self {
        RealizationDoc {
            dim: real.dim(),
            samples: real
                .tabulate(points)
                .into_iter()
                .map(|(r, m)| SampleDoc {
                    r: PointJson(r),
                    matrix: MatrixJson(m),
                })
                .collect(),
        }
    }

    /// Every sample must be a `dim × dim` matrix.
    pub fn into_realization(self) -> Result<TRealization, FormatError> {
        if self.dim == 0 {
            return Err(FormatError::ZeroDimension);
        }
        let n = self.dim;
        let samples = self
            .samples
            .into_iter()
            .map(|s| Ok((s.r.0, square(s.matrix.0, n)?)))
            .collect::<Result<Vec<_>, FormatError>>()?;
        Ok(TRealization::from_samples(n, samples))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentificationDoc {
    pub alpha: [ScalarJson; 2],
    pub lambda: u32,
    pub tau1: ScalarJson,
    pub tau2: ScalarJson,
    pub triple: Sl2TripleJson,
    pub change_of_basis: MatrixJson,
}

impl From<&IdentificationResult> for IdentificationDoc {
    fn from(r: &IdentificationResult) -> Self {
        IdentificationDoc {
            alpha: [ScalarJson(r.alpha[0].clone()), ScalarJson(r.alpha[1].clone())],
            lambda: r.lambda,
            tau1: ScalarJson(r.tau1.clone()),
            tau2: ScalarJson(r.tau2.clone()),
            triple: Sl2TripleJson(r.triple.clone()),
            change_of_basis: MatrixJson(r.change_of_basis.clone()),
        }
    }
}

impl TryFrom<IdentificationDoc> for IdentificationResult {
    type Error = FormatError;
    fn try_from(doc: IdentificationDoc) -> Result<Self, FormatError> {
        let [a1, a2] = doc.alpha;
        let n = doc.triple.0.dim();
        Ok(IdentificationResult {
            alpha: [a1.0, a2.0],
            lambda: doc.lambda,
            tau1: doc.tau1.0,
            tau2: doc.tau2.0,
            triple: doc.triple.0,
            change_of_basis: square(doc.change_of_basis.0, n)?,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn scalar_strings() {
        let s: ScalarJson = serde_json::from_value(json!("-6/4")).unwrap();
        assert_eq!(s.0, Scalar::ratio(-3, 2));
        assert_eq!(serde_json::to_value(&s).unwrap(), json!("-3/2"));
        let s: ScalarJson = serde_json::from_value(json!(7)).unwrap();
        assert_eq!(serde_json::to_value(&s).unwrap(), json!("7"));
        assert!(serde_json::from_value::<ScalarJson>(json!("1/0")).is_err());
        assert!(serde_json::from_value::<ScalarJson>(json!("x")).is_err());
    }

    #[test]
    fn matrix_rows() {
        let m = ExactMatrix::from_rows(vec![
            vec![Scalar::ratio(-3, 2), Scalar::one()],
            vec![Scalar::from_int(-1), Scalar::ratio(1, 2)],
        ])
        .unwrap();
        let v = serde_json::to_value(MatrixJson(m.clone())).unwrap();
        assert_eq!(v, json!([["-3/2", "1"], ["-1", "1/2"]]));
        assert_eq!(serde_json::from_value::<MatrixJson>(v).unwrap().0, m);
        assert!(serde_json::from_value::<MatrixJson>(json!([["1"], ["1", "2"]])).is_err());
    }

    #[test]
    fn lie_element_symbols() {
        let v = json!([
            {"symbol": {"fun": [1, 2]}, "coefficient": "1/2"},
            {"symbol": {"vec": [0, -1], "axis": 2}, "coefficient": "3"}
        ]);
        let x: LieElementJson = serde_json::from_value(v).unwrap();
        assert_eq!(x.0.coefficient(&BasisSymbol::Fun(LatticeVector::new(1, 2))), Scalar::ratio(1, 2));
        assert_eq!(
            x.0.coefficient(&BasisSymbol::Field(LatticeVector::new(0, -1), Axis::Two)),
            Scalar::from_int(3)
        );
        let bad = json!([{"symbol": {"vec": [0, 0], "axis": 3}, "coefficient": "1"}]);
        assert!(serde_json::from_value::<LieElementJson>(bad).is_err());
    }

    #[test]
    fn module_vector_dimension_is_checked() {
        let terms: Vec<ModuleTermDoc> =
            serde_json::from_value(json!([{"degree": [1, 0], "coords": ["1", "2"]}])).unwrap();
        assert!(module_vector_from_doc(3, terms.clone()).is_err());
        let m = module_vector_from_doc(2, terms).unwrap();
        assert_eq!(
            serde_json::to_value(module_vector_to_doc(&m)).unwrap(),
            json!([{"degree": [1, 0], "coords": ["1", "2"]}])
        );
    }

    #[test]
    fn realization_shapes_are_checked() {
        let doc: RealizationDoc = serde_json::from_value(json!({
            "dim": 2,
            "samples": [{"r": [1, 0], "matrix": [["1"]]}]
        }))
        .unwrap();
        assert_eq!(
            doc.into_realization().unwrap_err(),
            FormatError::Shape { expected: 2, rows: 1, cols: 1 }
        );
    }
}
