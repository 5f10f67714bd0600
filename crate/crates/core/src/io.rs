//! JSON and CSV formats for behaviors, channels, quantum models, protocols
//! and results.
//!
//! Exact values are written as `"num/den"` strings, float values as JSON
//! numbers. Tuple-valued indices are flattened row-major, first factor most
//! significant.

use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::behaviors::{Behavior, BehaviorError, Scenario};
use crate::channels::{Channel, ChannelError, IndexSpace};
use crate::protocols::{ProtocolError, SuccessReport};
use crate::quantum::{CMatrix, QuantumError, QuantumModel};
use crate::scalar::{format_rational, format_sig, parse_rational, Mode, Prob, Rational, Scalar, ScalarError};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("I/O error on {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("CSV error: {0}")]
    Csv(#[from] csv::Error),
    #[error("format error: {0}")]
    Format(String),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error(transparent)]
    Behavior(#[from] BehaviorError),
    #[error(transparent)]
    Channel(#[from] ChannelError),
    #[error(transparent)]
    Quantum(#[from] QuantumError),
    #[error(transparent)]
    Protocol(#[from] ProtocolError),
}

pub fn read_file(path: &Path) -> Result<String, IoError> {
    std::fs::read_to_string(path).map_err(|source| IoError::Io {
        path: path.display().to_string(),
        source,
    })
}

pub fn write_file(path: &Path, contents: &str) -> Result<(), IoError> {
    std::fs::write(path, contents).map_err(|source| IoError::Io {
        path: path.display().to_string(),
        source,
    })
}

/// A table entry: `"num/den"` text or a plain number.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Number {
    Text(String),
    Float(f64),
}

impl Number {
    pub fn of<T: Scalar>(v: &T) -> Number {
        match v.to_prob() {
            Prob::Exact(r) => Number::Text(format_rational(&r)),
            Prob::Float(f) => Number::Float(f),
        }
    }

    fn rational(&self) -> Result<Rational, IoError> {
        match self {
            Number::Text(s) => Ok(parse_rational(s)?),
            Number::Float(f) => Err(IoError::Format(format!(
                "rational mode needs \"num/den\" strings, found {f}"
            ))),
        }
    }

    fn float(&self) -> Result<f64, IoError> {
        match self {
            Number::Float(f) => Ok(*f),
            Number::Text(s) => match s.parse::<f64>() {
                Ok(f) => Ok(f),
                Err(_) => Ok(parse_rational(s)?.to_f64()),
            },
        }
    }
}

/// Renders a value for display: `num/den` in exact mode unless `decimal`
/// is set, 12 significant digits otherwise.
pub fn render<T: Scalar>(v: &T, decimal: bool) -> String {
    match v.to_prob() {
        Prob::Exact(r) if !decimal => format_rational(&r),
        p => format_sig(p.to_f64(), 12),
    }
}

/// A behavior in whichever mode its file declared.
#[derive(Debug, Clone, PartialEq)]
pub enum AnyBehavior {
    Rational(Behavior<Rational>),
    Float(Behavior<f64>),
}

impl AnyBehavior {
    pub fn mode(&self) -> Mode {
        match self {
            AnyBehavior::Rational(_) => Mode::Rational,
            AnyBehavior::Float(_) => Mode::Float,
        }
    }

    pub fn scenario(&self) -> Scenario {
        match self {
            AnyBehavior::Rational(b) => *b.scenario(),
            AnyBehavior::Float(b) => *b.scenario(),
        }
    }

    pub fn to_float(&self) -> Behavior<f64> {
        match self {
            AnyBehavior::Rational(b) => b.map_scalar(|v| v.to_f64()).expect("conversion keeps shape"),
            AnyBehavior::Float(b) => b.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BehaviorJson {
    pub scenario: Scenario,
    pub mode: Mode,
    /// Nested in `x, y, a, b` order.
    pub p: Vec<Vec<Vec<Vec<Number>>>>,
}

pub fn behavior_to_json<T: Scalar>(b: &Behavior<T>) -> BehaviorJson {
    let s = *b.scenario();
    let p = (0..s.x_card)
        .map(|x| {
            (0..s.y_card)
                .map(|y| {
                    (0..s.a_card)
                        .map(|a| (0..s.b_card).map(|bb| Number::of(b.get(x, y, a, bb))).collect())
                        .collect()
                })
                .collect()
        })
        .collect();
    BehaviorJson { scenario: s, mode: T::MODE, p }
}

fn flatten_nested(json: &BehaviorJson) -> Result<Vec<&Number>, IoError> {
    let s = json.scenario;
    let shape_err = || IoError::Format(format!("behavior table does not match scenario {s:?}"));
    if json.p.len() != s.x_card {
        return Err(shape_err());
    }
    let mut flat = Vec::with_capacity(s.len());
    for row in &json.p {
        if row.len() != s.y_card {
            return Err(shape_err());
        }
        for block in row {
            if block.len() != s.a_card {
                return Err(shape_err());
            }
            for entries in block {
                if entries.len() != s.b_card {
                    return Err(shape_err());
                }
                flat.extend(entries);
            }
        }
    }
    Ok(flat)
}

pub fn behavior_from_json(json: &BehaviorJson) -> Result<AnyBehavior, IoError> {
    let s = Scenario::new(json.scenario.x_card, json.scenario.y_card, json.scenario.a_card, json.scenario.b_card)?;
    let flat = flatten_nested(json)?;
    Ok(match json.mode {
        Mode::Rational => AnyBehavior::Rational(Behavior::new(
            s,
            flat.iter().map(|n| n.rational()).collect::<Result<_, _>>()?,
        )?),
        Mode::Float => AnyBehavior::Float(Behavior::new(
            s,
            flat.iter().map(|n| n.float()).collect::<Result<_, _>>()?,
        )?),
    })
}

pub fn write_behavior<T: Scalar>(b: &Behavior<T>) -> String {
    serde_json::to_string_pretty(&behavior_to_json(b)).expect("serializable")
}

pub fn read_behavior(text: &str) -> Result<AnyBehavior, IoError> {
    behavior_from_json(&serde_json::from_str(text)?)
}

/// Long-form CSV with header `x,y,a,b,p`.
pub fn behavior_csv<T: Scalar>(b: &Behavior<T>, decimal: bool) -> Result<String, IoError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["x", "y", "a", "b", "p"])?;
    let s = *b.scenario();
    for x in 0..s.x_card {
        for y in 0..s.y_card {
            for a in 0..s.a_card {
                for bb in 0..s.b_card {
                    let p = render(b.get(x, y, a, bb), decimal);
                    w.write_record([x.to_string(), y.to_string(), a.to_string(), bb.to_string(), p])?;
                }
            }
        }
    }
    csv_string(w)
}

fn csv_string(w: csv::Writer<Vec<u8>>) -> Result<String, IoError> {
    let bytes = w.into_inner().map_err(|e| IoError::Format(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| IoError::Format(e.to_string()))
}

#[derive(Debug, Clone, PartialEq)]
pub enum AnyChannel {
    Rational(Channel<Rational>),
    Float(Channel<f64>),
}

impl AnyChannel {
    pub fn mode(&self) -> Mode {
        match self {
            AnyChannel::Rational(_) => Mode::Rational,
            AnyChannel::Float(_) => Mode::Float,
        }
    }

    pub fn to_float(&self) -> Channel<f64> {
        match self {
            AnyChannel::Rational(c) => c.map_scalar(|v| v.to_f64()),
            AnyChannel::Float(c) => c.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpaceJson {
    pub factors: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub offsets: Option<Vec<usize>>,
}

impl SpaceJson {
    fn of(space: &IndexSpace) -> Self {
        let offsets = space.offsets().iter().any(|&o| o != 0).then(|| space.offsets().to_vec());
        SpaceJson {
            factors: space.factors().to_vec(),
            offsets,
        }
    }

    fn space(&self) -> Result<IndexSpace, IoError> {
        let offsets = self.offsets.clone().unwrap_or_else(|| vec![0; self.factors.len()]);
        Ok(IndexSpace::new(self.factors.clone(), offsets)?)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChannelJson {
    pub inputs: SpaceJson,
    pub outputs: SpaceJson,
    pub mode: Mode,
    /// One array per input, holding `p(o|i)` for every output.
    pub matrix: Vec<Vec<Number>>,
}

pub fn channel_to_json<T: Scalar>(c: &Channel<T>) -> ChannelJson {
    ChannelJson {
        inputs: SpaceJson::of(c.input_space()),
        outputs: SpaceJson::of(c.output_space()),
        mode: T::MODE,
        matrix: (0..c.input_count())
            .map(|i| c.column(i).iter().map(Number::of).collect())
            .collect(),
    }
}

pub fn channel_from_json(json: &ChannelJson) -> Result<AnyChannel, IoError> {
    let (input, output) = (json.inputs.space()?, json.outputs.space()?);
    Ok(match json.mode {
        Mode::Rational => {
            let cols = json
                .matrix
                .iter()
                .map(|col| col.iter().map(|n| n.rational()).collect::<Result<Vec<_>, _>>())
                .collect::<Result<Vec<_>, _>>()?;
            AnyChannel::Rational(Channel::new(input, output, cols)?)
        }
        Mode::Float => {
            let cols = json
                .matrix
                .iter()
                .map(|col| col.iter().map(|n| n.float()).collect::<Result<Vec<_>, _>>())
                .collect::<Result<Vec<_>, _>>()?;
            AnyChannel::Float(Channel::new(input, output, cols)?)
        }
    })
}

pub fn write_channel<T: Scalar>(c: &Channel<T>) -> String {
    serde_json::to_string_pretty(&channel_to_json(c)).expect("serializable")
}

pub fn read_channel(text: &str) -> Result<AnyChannel, IoError> {
    channel_from_json(&serde_json::from_str(text)?)
}

/// Long-form CSV with header `input,output,p`, labels as tuples.
pub fn channel_csv<T: Scalar>(c: &Channel<T>, decimal: bool) -> Result<String, IoError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["input", "output", "p"])?;
    for i in 0..c.input_count() {
        for o in 0..c.output_count() {
            w.write_record([
                c.input_space().label_string(i),
                c.output_space().label_string(o),
                render(c.prob(o, i), decimal),
            ])?;
        }
    }
    csv_string(w)
}

type JsonMatrix = Vec<Vec<[f64; 2]>>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuantumModelJson {
    pub dims: [usize; 2],
    /// Rows of `[re, im]` pairs.
    pub state: JsonMatrix,
    /// Per input, one matrix per outcome.
    pub alice: Vec<Vec<JsonMatrix>>,
    pub bob: Vec<Vec<JsonMatrix>>,
}

fn matrix_to_json(m: &CMatrix) -> JsonMatrix {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
        .collect()
}

fn matrix_from_json(rows: &JsonMatrix) -> Result<CMatrix, IoError> {
    let n = rows.len();
    if rows.iter().any(|r| r.len() != n) {
        return Err(IoError::Format("matrices must be square".into()));
    }
    Ok(CMatrix::from_fn(n, n, |i, j| Complex64::new(rows[i][j][0], rows[i][j][1])))
}

pub fn quantum_to_json(q: &QuantumModel) -> QuantumModelJson {
    let meas = |m: &[Vec<CMatrix>]| m.iter().map(|els| els.iter().map(matrix_to_json).collect()).collect();
    QuantumModelJson {
        dims: [q.dims().0, q.dims().1],
        state: matrix_to_json(q.state()),
        alice: meas(q.alice()),
        bob: meas(q.bob()),
    }
}

pub fn quantum_from_json(json: &QuantumModelJson) -> Result<QuantumModel, IoError> {
    let meas = |m: &[Vec<JsonMatrix>]| -> Result<Vec<Vec<CMatrix>>, IoError> {
        m.iter().map(|els| els.iter().map(matrix_from_json).collect()).collect()
    };
    Ok(QuantumModel::new(
        matrix_from_json(&json.state)?,
        (json.dims[0], json.dims[1]),
        meas(&json.alice)?,
        meas(&json.bob)?,
    )?)
}

/// Success probability as a JSON record.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuccessRecord {
    pub success: Number,
    pub mode: Mode,
    pub zero_error: bool,
    pub branches: usize,
    pub failing_branches: usize,
    pub per_message: Vec<Number>,
}

impl SuccessRecord {
    pub fn of<T: Scalar>(r: &SuccessReport<T>, decimal: bool) -> Self {
        let num = |v: &T| {
            if decimal {
                Number::Text(format_sig(v.to_f64(), 12))
            } else {
                Number::of(v)
            }
        };
        SuccessRecord {
            success: num(&r.success),
            mode: T::MODE,
            zero_error: r.zero_error,
            branches: r.branches,
            failing_branches: r.failing_branches,
            per_message: r.per_message.iter().map(num).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::behaviors::extremal_box;
    use crate::channels::{m_channel, n_channel};
    use crate::protocols::{exact_success, theorem2_protocol, AssistedProtocol, MessagePrior};
    use crate::quantum::{make_cglmp_behavior, make_i3322_model};

    #[test]
    fn behavior_round_trips() {
        let p3 = extremal_box::<Rational>(3, 3).unwrap();
        let text = write_behavior(&p3);
        assert!(text.contains("\"1/3\""));
        assert!(text.contains("\"mode\": \"rational\""));
        assert_eq!(read_behavior(&text).unwrap(), AnyBehavior::Rational(p3));
        let c = make_cglmp_behavior();
        assert_eq!(read_behavior(&write_behavior(&c)).unwrap(), AnyBehavior::Float(c));
    }

    #[test]
    fn behavior_rejects_bad_files() {
        let p3 = extremal_box::<Rational>(3, 3).unwrap();
        let mut json = behavior_to_json(&p3);
        json.p[0][0][0][0] = Number::Text("1/2".into());
        assert!(matches!(behavior_from_json(&json), Err(IoError::Behavior(_))));
        json.p[0][0].pop();
        assert!(matches!(behavior_from_json(&json), Err(IoError::Format(_))));
        assert!(read_behavior("{").is_err());
        let mut json = behavior_to_json(&p3);
        json.p[0][0][0][0] = Number::Float(0.3);
        assert!(behavior_from_json(&json).is_err());
    }

    #[test]
    fn channel_round_trips() {
        let n3 = n_channel::<Rational>(3).unwrap();
        let text = write_channel(&n3);
        assert!(text.contains("\"offsets\""));
        let json: ChannelJson = serde_json::from_str(&text).unwrap();
        assert_eq!(json.matrix.len(), 6);
        assert_eq!(json.matrix[0].len(), 12);
        assert_eq!(read_channel(&text).unwrap(), AnyChannel::Rational(n3));
        let m3 = m_channel::<Rational>(3).unwrap().map_scalar(|v| v.to_f64());
        assert_eq!(read_channel(&write_channel(&m3)).unwrap(), AnyChannel::Float(m3));
    }

    #[test]
    fn hand_written_channel_file() {
        let text = r#"{"inputs":{"factors":[2]},"outputs":{"factors":[2]},"mode":"rational",
                       "matrix":[["9/10","1/10"],["0","1"]]}"#;
        let AnyChannel::Rational(c) = read_channel(text).unwrap() else { panic!() };
        assert_eq!(*c.prob(1, 0), Rational::from_ratio(1, 10));
        let bad = text.replace("1/10", "0");
        assert!(matches!(read_channel(&bad), Err(IoError::Channel(_))));
    }

    #[test]
    fn csv_exports() {
        let csv = behavior_csv(&extremal_box::<Rational>(2, 2).unwrap(), false).unwrap();
        assert!(csv.starts_with("x,y,a,b,p\n0,0,0,0,1/2\n"));
        assert_eq!(csv.lines().count(), 17);
        let csv = channel_csv(&n_channel::<Rational>(2).unwrap(), true).unwrap();
        assert!(csv.contains("\"(0,0)\",\"(1,0)\",0.333333333333"));
    }

    #[test]
    fn quantum_round_trip() {
        let q = make_i3322_model();
        let back = quantum_from_json(&quantum_to_json(&q)).unwrap();
        assert_eq!(back, q);
        let mut json = quantum_to_json(&q);
        json.state[0][0] = [0.7, 0.0];
        assert!(matches!(quantum_from_json(&json), Err(IoError::Quantum(_))));
    }

    #[test]
    fn protocol_round_trip() {
        let p = theorem2_protocol(3).unwrap();
        let text = serde_json::to_string(&p).unwrap();
        let back: AssistedProtocol = serde_json::from_str(&text).unwrap();
        assert_eq!(back, p);
        let broken = text.replace("\"guess_remap\":[0,1,0]", "\"guess_remap\":[1,0,0]");
        assert!(serde_json::from_str::<AssistedProtocol>(&broken).is_err());
    }

    #[test]
    fn success_record() {
        let c = n_channel::<Rational>(3).unwrap();
        let b = extremal_box::<Rational>(3, 3).unwrap();
        let r = exact_success(&c, &b, &theorem2_protocol(3).unwrap(), &MessagePrior::uniform(2)).unwrap();
        let rec = SuccessRecord::of(&r, false);
        assert_eq!(rec.success, Number::Text("1/1".into()));
        assert!(rec.zero_error);
        let json = serde_json::to_string(&rec).unwrap();
        assert!(json.contains("\"success\":\"1/1\""));
        assert_eq!(SuccessRecord::of(&r, true).success, Number::Text("1".into()));
    }
}
