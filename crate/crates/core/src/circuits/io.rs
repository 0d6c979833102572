//! JSON circuit files.
//!
//! ```json
//! {
//!   "qubits": 2,
//!   "preps": ["0", "+"],
//!   "ops": [
//!     {"kind": "h", "qubits": [0]},
//!     {"kind": "xy", "t": 0.25, "qubits": [0, 1]},
//!     {"kind": "u1", "qubits": [1], "matrix": [[[1, 0], [0, 0]], [[0, 0], [0, 1]]]}
//!   ],
//!   "measurements": ["Z", {"basis": [[[1, 0], [0, 0]], [[0, 0], [1, 0]]]}]
//! }
//! ```
//!
//! Matrix entries are `[re, im]` pairs in row-major nested arrays. Op kinds: `h s sdg t tdg x y z id u1`
//! (one qubit) and `cnot cz xy xy_signed u2` (two qubits). `xy` and `xy_signed` take `t`;
//! `xy_signed` also takes `sxx` and `syy` in `{-1, 1}`. An optional `tag` records provenance.

use super::ir::{Circuit, GateKind, Measurement, PlacedGate, Prep, Provenance};
use crate::error::{Error, Result};
use crate::{CMatrix, Complex, Unitary};
use serde::{Deserialize, Serialize};

/// Row-major `[re, im]` matrix as written in files.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MatrixRepr(pub Vec<Vec<[f64; 2]>>);

impl MatrixRepr {
    pub fn from_unitary(u: &Unitary) -> Self {
        let m = u.matrix();
        Self((0..m.rows()).map(|r| (0..m.cols()).map(|c| [m[(r, c)].re, m[(r, c)].im]).collect()).collect())
    }

    pub fn to_unitary(&self) -> Result<Unitary> {
        let n = self.0.len();
        if n == 0 || self.0.iter().any(|row| row.len() != n) {
            return Err(Error::Parse("matrix must be square and non-empty".into()));
        }
        let m = CMatrix::from_fn(n, n, |r, c| Complex::new(self.0[r][c][0], self.0[r][c][1]));
        // file values carry limited digits, so accept slightly looser unitarity
        Unitary::with_tolerance(m, 1e-8)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
enum PrepRepr {
    Label(String),
    Unitary { unitary: MatrixRepr },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
enum MeasurementRepr {
    Label(String),
    Basis { basis: MatrixRepr },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct OpRepr {
    kind: String,
    qubits: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    t: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    sxx: Option<i8>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    syy: Option<i8>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    matrix: Option<MatrixRepr>,
    #[serde(default, skip_serializing_if = "is_input")]
    tag: Provenance,
}

fn is_input(tag: &Provenance) -> bool {
    *tag == Provenance::Input
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CircuitRepr {
    qubits: usize,
    preps: Vec<PrepRepr>,
    ops: Vec<OpRepr>,
    measurements: Vec<MeasurementRepr>,
}

fn field<T>(value: Option<T>, path: &str, name: &str) -> Result<T> {
    value.ok_or_else(|| Error::Circuit(format!("{path}: missing field `{name}`")))
}

fn sign(value: Option<i8>, path: &str, name: &str) -> Result<i8> {
    match field(value, path, name)? {
        s @ (-1 | 1) => Ok(s),
        s => Err(Error::Circuit(format!("{path}.{name}: sign must be -1 or 1, got {s}"))),
    }
}

fn with_path<T>(r: Result<T>, path: &str) -> Result<T> {
    r.map_err(|e| Error::Circuit(format!("{path}: {e}")))
}

impl OpRepr {
    fn to_gate(&self, path: &str) -> Result<PlacedGate> {
        let kind = match self.kind.as_str() {
            "h" => GateKind::H,
            "s" => GateKind::S,
            "sdg" => GateKind::Sdg,
            "t" => GateKind::T,
            "tdg" => GateKind::Tdg,
            "x" => GateKind::X,
            "y" => GateKind::Y,
            "z" => GateKind::Z,
            "id" => GateKind::Identity,
            "cnot" => GateKind::Cnot,
            "cz" => GateKind::Cz,
            "xy" => GateKind::Xy { t: field(self.t, path, "t")? },
            "xy_signed" => GateKind::XySigned {
                t: field(self.t, path, "t")?,
                sxx: sign(self.sxx, path, "sxx")?,
                syy: sign(self.syy, path, "syy")?,
            },
            "u1" | "u2" => {
                let m = field(self.matrix.as_ref(), path, "matrix")?;
                let u = with_path(m.to_unitary(), &format!("{path}.matrix"))?;
                let want = if self.kind == "u1" { 2 } else { 4 };
                if u.dim() != want {
                    return Err(Error::Circuit(format!("{path}.matrix: {} needs a {want}x{want} matrix", self.kind)));
                }
                if want == 2 {
                    GateKind::U1(u)
                } else {
                    GateKind::U2(u)
                }
            }
            other => return Err(Error::Circuit(format!("{path}.kind: unknown gate kind `{other}`"))),
        };
        Ok(PlacedGate { kind, qubits: self.qubits.clone(), tag: self.tag })
    }

    fn from_gate(g: &PlacedGate) -> Self {
        let mut out = OpRepr {
            kind: g.kind.name().to_string(),
            qubits: g.qubits.clone(),
            t: None,
            sxx: None,
            syy: None,
            matrix: None,
            tag: g.tag,
        };
        match &g.kind {
            GateKind::Xy { t } => out.t = Some(*t),
            GateKind::XySigned { t, sxx, syy } => {
                out.t = Some(*t);
                out.sxx = Some(*sxx);
                out.syy = Some(*syy);
            }
            GateKind::U1(u) | GateKind::U2(u) => out.matrix = Some(MatrixRepr::from_unitary(u)),
            _ => {}
        }
        out
    }
}

fn single_qubit(u: Unitary, path: &str) -> Result<Unitary> {
    if u.dim() != 2 {
        return Err(Error::Circuit(format!("{path}: expected a 2x2 matrix")));
    }
    Ok(u)
}

impl CircuitRepr {
    fn into_circuit(self) -> Result<Circuit> {
        let preps = self
            .preps
            .iter()
            .enumerate()
            .map(|(i, p)| {
                let path = format!("preps[{i}]");
                match p {
                    PrepRepr::Label(l) => match l.as_str() {
                        "0" => Ok(Prep::Zero),
                        "1" => Ok(Prep::One),
                        "+" => Ok(Prep::Plus),
                        other => Err(Error::Circuit(format!("{path}: unknown preparation `{other}`"))),
                    },
                    PrepRepr::Unitary { unitary } => {
                        Ok(Prep::Unitary(single_qubit(with_path(unitary.to_unitary(), &path)?, &path)?))
                    }
                }
            })
            .collect::<Result<Vec<_>>>()?;
        let measurements = self
            .measurements
            .iter()
            .enumerate()
            .map(|(i, m)| {
                let path = format!("measurements[{i}]");
                match m {
                    MeasurementRepr::Label(l) if l == "Z" => Ok(Measurement::Z),
                    MeasurementRepr::Label(other) => Err(Error::Circuit(format!("{path}: unknown basis `{other}`"))),
                    MeasurementRepr::Basis { basis } => {
                        Ok(Measurement::Basis(single_qubit(with_path(basis.to_unitary(), &path)?, &path)?))
                    }
                }
            })
            .collect::<Result<Vec<_>>>()?;
        let ops = self
            .ops
            .iter()
            .enumerate()
            .map(|(i, op)| op.to_gate(&format!("ops[{i}]")))
            .collect::<Result<Vec<_>>>()?;
        let circuit = Circuit { qubits: self.qubits, preps, ops, measurements };
        circuit.validate()?;
        Ok(circuit)
    }

    fn from_circuit(c: &Circuit) -> Self {
        Self {
            qubits: c.qubits,
            preps: c
                .preps
                .iter()
                .map(|p| match p {
                    Prep::Zero => PrepRepr::Label("0".into()),
                    Prep::One => PrepRepr::Label("1".into()),
                    Prep::Plus => PrepRepr::Label("+".into()),
                    Prep::Unitary(u) => PrepRepr::Unitary { unitary: MatrixRepr::from_unitary(u) },
                })
                .collect(),
            ops: c.ops.iter().map(OpRepr::from_gate).collect(),
            measurements: c
                .measurements
                .iter()
                .map(|m| match m {
                    Measurement::Z => MeasurementRepr::Label("Z".into()),
                    Measurement::Basis(u) => MeasurementRepr::Basis { basis: MatrixRepr::from_unitary(u) },
                })
                .collect(),
        }
    }
}

/// Converts a JSON syntax or shape error into a diagnostic with line and column.
pub(crate) fn json_error(e: &serde_json::Error) -> Error {
    Error::Parse(format!("line {}, column {}: {e}", e.line(), e.column()))
}

impl Circuit {
    pub fn from_json(text: &str) -> Result<Circuit> {
        let repr: CircuitRepr = serde_json::from_str(text).map_err(|e| json_error(&e))?;
        repr.into_circuit()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&CircuitRepr::from_circuit(self)).expect("circuit serialises")
    }
}

impl Serialize for Circuit {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CircuitRepr::from_circuit(self).serialize(s)
    }
}
