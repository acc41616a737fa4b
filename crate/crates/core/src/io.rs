//! JSON file formats for states, invariant vectors and command outputs.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::invariants::{Beta, IVector};
use crate::orbitspace::{Cell3, MembershipReport};
use crate::qstate::{PureState2, PureState3};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateFile {
    pub amplitudes: Vec<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BetaFile {
    pub beta: [f64; 6],
}

/// Either kind of input accepted where a point of `X` is expected.
#[derive(Clone, Debug, PartialEq)]
pub enum InputFile {
    State(PureState3),
    Beta(Beta),
}

fn parse_json<T: serde::de::DeserializeOwned>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

fn labels(qubits: usize) -> Vec<String> {
    (0..1usize << qubits)
        .map(|i| format!("{:0width$b}", i, width = qubits))
        .collect()
}

impl StateFile {
    fn amplitudes(&self, expected: usize) -> Result<Vec<Complex64>> {
        if self.amplitudes.len() != expected {
            return Err(Error::WrongLength {
                expected,
                found: self.amplitudes.len(),
            });
        }
        if let Some(l) = &self.labels {
            if l.len() != expected {
                return Err(Error::Parse(format!(
                    "expected {expected} labels, found {}",
                    l.len()
                )));
            }
        }
        Ok(self
            .amplitudes
            .iter()
            .map(|[re, im]| Complex64::new(*re, *im))
            .collect())
    }

    pub fn from_amplitudes(amps: &[Complex64]) -> Self {
        let qubits = amps.len().trailing_zeros() as usize;
        StateFile {
            amplitudes: amps.iter().map(|a| [a.re, a.im]).collect(),
            labels: Some(labels(qubits)),
        }
    }
}

/// Parses and normalizes a three-qubit state file.
pub fn read_state3(text: &str) -> Result<PureState3> {
    let f: StateFile = parse_json(text)?;
    PureState3::from_slice(&f.amplitudes(8)?)
}

pub fn read_state2(text: &str) -> Result<PureState2> {
    let f: StateFile = parse_json(text)?;
    PureState2::from_slice(&f.amplitudes(4)?)
}

pub fn write_state3(psi: &PureState3) -> String {
    to_json(&StateFile::from_amplitudes(psi.amplitudes()))
}

pub fn write_state2(psi: &PureState2) -> String {
    to_json(&StateFile::from_amplitudes(psi.amplitudes()))
}

pub fn read_beta(text: &str) -> Result<Beta> {
    let f: BetaFile = parse_json(text)?;
    Ok(Beta(f.beta))
}

pub fn write_beta(b: &Beta) -> String {
    to_json(&BetaFile { beta: b.0 })
}

/// Accepts a state file or a beta file, told apart by their keys.
pub fn read_input(text: &str) -> Result<InputFile> {
    let value: serde_json::Value = parse_json(text)?;
    if value.get("beta").is_some() {
        read_beta(text).map(InputFile::Beta)
    } else if value.get("amplitudes").is_some() {
        read_state3(text).map(InputFile::State)
    } else {
        Err(Error::Parse(
            "expected an \"amplitudes\" or \"beta\" key".into(),
        ))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InvariantsOutput {
    #[serde(rename = "I")]
    pub i: [f64; 6],
    #[serde(rename = "J")]
    pub j: [f64; 6],
}

impl InvariantsOutput {
    pub fn new(i: &IVector, j: &Beta) -> Self {
        InvariantsOutput {
            i: i.to_array(),
            j: j.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClassificationOutput {
    pub cell: String,
    pub acin_type: String,
    pub slocc: String,
    pub orbit_dim: u8,
    pub residuals: MembershipReport,
}

impl ClassificationOutput {
    pub fn new(cell: Cell3, residuals: MembershipReport) -> Self {
        let info = cell.info();
        ClassificationOutput {
            cell: info.name.to_string(),
            acin_type: info.acin_type.unwrap_or("").to_string(),
            slocc: info.slocc_class.to_string(),
            orbit_dim: info.orbit_dimension,
            residuals,
        }
    }
}

/// Pretty JSON followed by a newline. Floats use the shortest
/// representation that parses back to the same value.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable value");
    s.push('\n');
    s
}
