//! JSON wire formats.
//!
//! Complex numbers are `[re, im]` pairs; matrices are row-major. Every
//! decoder rejects unknown fields and validates shapes before building a
//! value, so a decoded object always satisfies its constructor's invariants.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hilbert::{Complex64, ComplexMatrix, ComplexVector, ToleranceConfig};
use crate::lift::{SemilinearLift, GLOBAL_PHASE_CONVENTION};
use crate::projective::RayMapOracle;
use crate::tensor::{BilinearComposition, IsomorphismResult};

type Pair = [f64; 2];

fn to_pairs(values: &[Complex64]) -> Vec<Pair> {
    values.iter().map(|z| [z.re, z.im]).collect()
}

fn from_pairs(pairs: &[Pair]) -> Result<Vec<Complex64>> {
    pairs
        .iter()
        .map(|&[re, im]| {
            if re.is_finite() && im.is_finite() {
                Ok(Complex64::new(re, im))
            } else {
                Err(Error::Decode("non-finite entry".into()))
            }
        })
        .collect()
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MatrixWire {
    rows: usize,
    cols: usize,
    data: Vec<Pair>,
}

impl MatrixWire {
    fn from_matrix(m: &ComplexMatrix) -> Self {
        Self {
            rows: m.rows(),
            cols: m.cols(),
            data: to_pairs(m.as_slice()),
        }
    }

    fn into_matrix(self) -> Result<ComplexMatrix> {
        if self.rows == 0 || self.cols == 0 {
            return Err(Error::ZeroDimension);
        }
        ComplexMatrix::new(self.rows, self.cols, from_pairs(&self.data)?)
    }
}

fn vector_from_wire(pairs: &[Pair]) -> Result<ComplexVector> {
    ComplexVector::new(from_pairs(pairs)?)
}

pub fn encode_matrix(m: &ComplexMatrix) -> String {
    serde_json::to_string(&MatrixWire::from_matrix(m)).expect("plain data serializes")
}

pub fn decode_matrix(text: &str) -> Result<ComplexMatrix> {
    serde_json::from_str::<MatrixWire>(text)?.into_matrix()
}

pub fn encode_vector(v: &ComplexVector) -> String {
    serde_json::to_string(&to_pairs(v.as_slice())).expect("plain data serializes")
}

pub fn decode_vector(text: &str) -> Result<ComplexVector> {
    vector_from_wire(&serde_json::from_str::<Vec<Pair>>(text)?)
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TablePairWire {
    #[serde(rename = "in")]
    input: Vec<Pair>,
    #[serde(rename = "out")]
    output: Vec<Pair>,
}

/// A ray map as stored on disk.
#[derive(Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
enum MapWire {
    Tabulated {
        domain_dim: usize,
        codomain_dim: usize,
        pairs: Vec<TablePairWire>,
    },
    Matrix {
        matrix: MatrixWire,
        conjugate_input: bool,
    },
}

/// Encodes a matrix-induced or tabulated oracle; composite oracles hold a
/// closure and have no wire form.
pub fn encode_oracle(oracle: &RayMapOracle) -> Result<String> {
    let wire = match oracle {
        RayMapOracle::Tabulated {
            domain_dim,
            codomain_dim,
            pairs,
        } => MapWire::Tabulated {
            domain_dim: *domain_dim,
            codomain_dim: *codomain_dim,
            pairs: pairs
                .iter()
                .map(|(i, o)| TablePairWire {
                    input: to_pairs(i.rep().as_slice()),
                    output: to_pairs(o.rep().as_slice()),
                })
                .collect(),
        },
        RayMapOracle::MatrixInduced {
            matrix,
            conjugate_input,
        } => MapWire::Matrix {
            matrix: MatrixWire::from_matrix(matrix),
            conjugate_input: *conjugate_input,
        },
        RayMapOracle::Composite(_) => {
            return Err(Error::Decode(
                "composite oracles cannot be serialized".into(),
            ))
        }
    };
    Ok(serde_json::to_string(&wire)?)
}

pub fn decode_oracle(text: &str, tol: &ToleranceConfig) -> Result<RayMapOracle> {
    match serde_json::from_str::<MapWire>(text)? {
        MapWire::Tabulated {
            domain_dim,
            codomain_dim,
            pairs,
        } => {
            let pairs = pairs
                .iter()
                .map(|p| Ok((vector_from_wire(&p.input)?, vector_from_wire(&p.output)?)))
                .collect::<Result<Vec<_>>>()?;
            RayMapOracle::tabulated(domain_dim, codomain_dim, &pairs, tol)
        }
        MapWire::Matrix {
            matrix,
            conjugate_input,
        } => RayMapOracle::matrix_induced(matrix.into_matrix()?, conjugate_input, tol),
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LiftWire {
    matrix: MatrixWire,
    antilinear: bool,
    residual: f64,
    #[serde(default)]
    global_phase_convention: Option<String>,
}

pub fn encode_lift(lift: &SemilinearLift) -> String {
    serde_json::to_string(&LiftWire {
        matrix: MatrixWire::from_matrix(lift.matrix()),
        antilinear: lift.antilinear(),
        residual: lift.residual(),
        global_phase_convention: Some(GLOBAL_PHASE_CONVENTION.to_string()),
    })
    .expect("plain data serializes")
}

pub fn decode_lift(text: &str) -> Result<SemilinearLift> {
    let wire: LiftWire = serde_json::from_str(text)?;
    if !(wire.residual.is_finite() && wire.residual >= 0.0) {
        return Err(Error::Decode(
            "residual must be finite and non-negative".into(),
        ));
    }
    match wire.global_phase_convention.as_deref() {
        None => {}
        Some(c) if c == GLOBAL_PHASE_CONVENTION => {}
        Some(c) => return Err(Error::Decode(format!("unsupported phase convention: {c}"))),
    }
    Ok(SemilinearLift::new(
        wire.matrix.into_matrix()?,
        wire.antilinear,
        wire.residual,
    ))
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BilinearWire {
    dim_a: usize,
    dim_b: usize,
    dim_c: usize,
    /// Flat `T[k][i][j]` at `k·(dim_a·dim_b) + i·dim_b + j`.
    data: Vec<Pair>,
}

pub fn encode_bilinear(m: &BilinearComposition) -> String {
    serde_json::to_string(&BilinearWire {
        dim_a: m.dim_a(),
        dim_b: m.dim_b(),
        dim_c: m.dim_c(),
        data: to_pairs(m.coeffs()),
    })
    .expect("plain data serializes")
}

pub fn decode_bilinear(text: &str) -> Result<BilinearComposition> {
    let wire: BilinearWire = serde_json::from_str(text)?;
    BilinearComposition::new(wire.dim_a, wire.dim_b, wire.dim_c, from_pairs(&wire.data)?)
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct IsomorphismWire {
    iso: MatrixWire,
    unitarity_residual: f64,
    factorization_residual: f64,
}

pub fn encode_isomorphism(r: &IsomorphismResult) -> String {
    serde_json::to_string(&IsomorphismWire {
        iso: MatrixWire::from_matrix(&r.iso),
        unitarity_residual: r.unitarity_residual,
        factorization_residual: r.factorization_residual,
    })
    .expect("plain data serializes")
}

pub fn decode_isomorphism(text: &str) -> Result<IsomorphismResult> {
    let wire: IsomorphismWire = serde_json::from_str(text)?;
    let iso = wire.iso.into_matrix()?;
    if iso.rows() != iso.cols() {
        return Err(Error::Decode("isomorphism must be square".into()));
    }
    Ok(IsomorphismResult {
        iso,
        unitarity_residual: wire.unitarity_residual,
        factorization_residual: wire.factorization_residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::random_unitary;
    use crate::lift::{lift, required_queries};
    use crate::projective::RayMap;

    fn tol() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    #[test]
    fn matrix_round_trip_is_exact() {
        let u = random_unitary(3, 5);
        assert_eq!(decode_matrix(&encode_matrix(&u)).unwrap(), u);
    }

    #[test]
    fn matrix_decode_rejects_bad_input() {
        assert!(matches!(
            decode_matrix(r#"{"rows":2,"cols":2,"data":[[1,0]]}"#),
            Err(Error::ShapeMismatch { .. })
        ));
        assert!(matches!(
            decode_matrix(r#"{"rows":1,"cols":1,"data":[[1,0]],"extra":1}"#),
            Err(Error::Decode(_))
        ));
        assert!(matches!(
            decode_matrix(r#"{"rows":0,"cols":0,"data":[]}"#),
            Err(Error::ZeroDimension)
        ));
        assert!(decode_matrix(r#"{"rows":1,"cols":1,"data":[[1e999,0]]}"#).is_err());
        assert!(decode_matrix("not json").is_err());
    }

    #[test]
    fn vector_round_trip() {
        let v = ComplexVector::from_pairs(&[(1.0, -2.0), (0.5, 0.25)]).unwrap();
        assert_eq!(decode_vector(&encode_vector(&v)).unwrap(), v);
        assert!(matches!(decode_vector("[]"), Err(Error::ZeroDimension)));
    }

    #[test]
    fn tabulated_oracle_round_trip_lifts_the_same() {
        let u = random_unitary(3, 2);
        let table = RayMapOracle::tabulate(&u, false, &required_queries(3), &tol()).unwrap();
        let text = encode_oracle(&table).unwrap();
        assert!(text.starts_with(r#"{"kind":"tabulated""#));
        let back = decode_oracle(&text, &tol()).unwrap();
        let a = lift(&table, 3, 3, &tol()).unwrap();
        let b = lift(&back, 3, 3, &tol()).unwrap();
        // Decoding re-canonicalizes each ray, which may move the last bit.
        assert_eq!(a.antilinear(), b.antilinear());
        assert!(a.matrix().max_abs_diff(b.matrix()) < 1e-14);
    }

    #[test]
    fn matrix_oracle_round_trip() {
        let m = RayMapOracle::matrix_induced(random_unitary(2, 1), true, &tol()).unwrap();
        let back = decode_oracle(&encode_oracle(&m).unwrap(), &tol()).unwrap();
        assert_eq!(back.domain_dim(), 2);
        assert!(matches!(
            back,
            RayMapOracle::MatrixInduced {
                conjugate_input: true,
                ..
            }
        ));
    }

    #[test]
    fn oracle_decode_rejects_duplicates_and_unknown_kind() {
        let dup = r#"{"kind":"tabulated","domain_dim":1,"codomain_dim":1,
            "pairs":[{"in":[[1,0]],"out":[[1,0]]},{"in":[[2,0]],"out":[[1,0]]}]}"#;
        assert!(matches!(
            decode_oracle(dup, &tol()),
            Err(Error::DuplicateRay { .. })
        ));
        assert!(decode_oracle(r#"{"kind":"other"}"#, &tol()).is_err());
        let unknown = r#"{"kind":"tabulated","domain_dim":1,"codomain_dim":1,"pairs":[],"x":0}"#;
        assert!(decode_oracle(unknown, &tol()).is_err());
    }

    #[test]
    fn lift_round_trip() {
        let l = SemilinearLift::new(random_unitary(2, 9), true, 3e-16);
        assert_eq!(decode_lift(&encode_lift(&l)).unwrap(), l);
        let bad =
            r#"{"matrix":{"rows":1,"cols":1,"data":[[1,0]]},"antilinear":false,"residual":-1}"#;
        assert!(decode_lift(bad).is_err());
    }

    #[test]
    fn bilinear_round_trip() {
        let m = BilinearComposition::from_matrix(&random_unitary(4, 3), 2, 2).unwrap();
        assert_eq!(decode_bilinear(&encode_bilinear(&m)).unwrap(), m);
        assert!(matches!(
            decode_bilinear(r#"{"dim_a":2,"dim_b":2,"dim_c":4,"data":[]}"#),
            Err(Error::ShapeMismatch { .. })
        ));
    }

    #[test]
    fn isomorphism_round_trip() {
        let r = IsomorphismResult {
            iso: random_unitary(4, 8),
            unitarity_residual: 1e-16,
            factorization_residual: 2e-16,
        };
        assert_eq!(decode_isomorphism(&encode_isomorphism(&r)).unwrap(), r);
    }
}
