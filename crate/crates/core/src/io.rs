//! JSON documents for states, measurements, instruments, games and boxes,
//! and deterministic structured output.
//!
//! Complex matrices are nested row-major arrays of `[re, im]` pairs; a bare
//! number is accepted as a real entry. Classical data are flat arrays.

use std::collections::BTreeMap;
use std::io;

use num::{BigInt, BigRational, One, Zero};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::ser::Formatter;
use serde_json::Value;

use crate::exclusivity::Scenario;
use crate::games::{CorrelationBox, Game};
use crate::instruments::{Dilation, Instrument, SharedDilation, Transformation};
use crate::linalg::{c, CMatrix};
use crate::model::{Data, Effect, Measurement, Model, State, System};
use crate::{Error, Result};

fn parse_json<T: DeserializeOwned>(text: &str, what: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(format!("{what}: {e}")))
}

// Entries stay as `Value`s: untagged enums cannot buffer exact-precision
// numbers.
type RawMatrix = Vec<Vec<Value>>;

fn entry(v: &Value) -> Option<crate::linalg::C64> {
    match v {
        Value::Number(n) => Some(c(n.as_f64()?, 0.0)),
        Value::Array(pair) if pair.len() == 2 => Some(c(pair[0].as_f64()?, pair[1].as_f64()?)),
        _ => None,
    }
}

fn matrix_from_raw(raw: &RawMatrix, dim: usize, what: &str) -> Result<CMatrix> {
    if raw.len() != dim || raw.iter().any(|row| row.len() != dim) {
        return Err(Error::Shape(format!("{what}: expected a {dim}x{dim} matrix")));
    }
    let mut m = CMatrix::zeros(dim, dim);
    for (i, row) in raw.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            m[(i, j)] = entry(v).ok_or_else(|| {
                Error::Parse(format!("{what}: entry ({i}, {j}) is not a number or [re, im] pair"))
            })?;
        }
    }
    Ok(m)
}

fn matrix_to_raw(m: &CMatrix) -> Vec<Vec<[f64; 2]>> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
        .collect()
}

fn data_from_value(value: &Value, system: System, what: &str) -> Result<Data> {
    match system.model() {
        Model::Quantum => {
            let raw: RawMatrix = serde_json::from_value(value.clone())
                .map_err(|e| Error::Parse(format!("{what}: {e}")))?;
            Ok(Data::Matrix(matrix_from_raw(&raw, system.dim(), what)?))
        }
        Model::Classical => {
            let v: Vec<f64> = serde_json::from_value(value.clone())
                .map_err(|e| Error::Parse(format!("{what}: {e}")))?;
            if v.len() != system.dim() {
                return Err(Error::Shape(format!(
                    "{what}: expected {} entries, found {}",
                    system.dim(),
                    v.len()
                )));
            }
            Ok(Data::Vector(v))
        }
    }
}

fn data_to_value(data: &Data) -> Value {
    match data {
        Data::Matrix(m) => serde_json::to_value(matrix_to_raw(m)),
        Data::Vector(v) => serde_json::to_value(v),
    }
    .expect("finite numbers serialise")
}

#[derive(Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct RawSystemDocument {
    model: Model,
    dimension: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    state: Option<Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    effects: Option<BTreeMap<String, Value>>,
}

impl RawSystemDocument {
    fn system(&self) -> Result<System> {
        if self.dimension == 0 {
            return Err(Error::Shape("dimension must be positive".into()));
        }
        Ok(System::new(self.model, self.dimension))
    }
}

/// A state or measurement file.
#[derive(Clone, Debug, PartialEq)]
pub enum SystemDocument {
    State(State),
    Effects(System, Vec<(String, Effect)>),
}

/// Parses a state or effects document, validating each object on its own.
/// Effects are not required to sum to the unit.
pub fn parse_system_document(text: &str) -> Result<SystemDocument> {
    let raw: RawSystemDocument = parse_json(text, "state/effects document")?;
    let system = raw.system()?;
    match (&raw.state, &raw.effects) {
        (Some(s), None) => Ok(SystemDocument::State(State::new(
            system,
            data_from_value(s, system, "state")?,
        )?)),
        (None, Some(effects)) => {
            let effects = effects
                .iter()
                .map(|(label, v)| {
                    let what = format!("effect {label:?}");
                    Ok((label.clone(), Effect::new(system, data_from_value(v, system, &what)?)?))
                })
                .collect::<Result<_>>()?;
            Ok(SystemDocument::Effects(system, effects))
        }
        _ => Err(Error::Parse(
            "document needs exactly one of \"state\" or \"effects\"".into(),
        )),
    }
}

pub fn parse_state(text: &str) -> Result<State> {
    match parse_system_document(text)? {
        SystemDocument::State(s) => Ok(s),
        SystemDocument::Effects(..) => Err(Error::Parse("expected a state document".into())),
    }
}

/// Parses the outcome-labelled effects of a document, in label order.
pub fn parse_effects(text: &str) -> Result<(System, Vec<(String, Effect)>)> {
    match parse_system_document(text)? {
        SystemDocument::Effects(system, effects) => Ok((system, effects)),
        SystemDocument::State(_) => Err(Error::Parse("expected an effects document".into())),
    }
}

/// Parses and validates a measurement (effects summing to the unit).
pub fn parse_measurement(text: &str) -> Result<Measurement> {
    let (system, effects) = parse_effects(text)?;
    Measurement::new(system, effects)
}

pub fn state_to_json(state: &State) -> String {
    let system = state.system();
    let doc = RawSystemDocument {
        model: system.model(),
        dimension: system.dim(),
        state: Some(data_to_value(state.data())),
        effects: None,
    };
    to_structured(&doc)
}

pub fn measurement_to_json(m: &Measurement) -> String {
    let system = m.system();
    let doc = RawSystemDocument {
        model: system.model(),
        dimension: system.dim(),
        state: None,
        effects: Some(
            m.iter()
                .map(|(x, e)| (x.to_string(), data_to_value(e.data())))
                .collect(),
        ),
    };
    to_structured(&doc)
}

#[derive(Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct RawRefinement {
    effects: BTreeMap<String, RawMatrix>,
    grouping: BTreeMap<String, String>,
}

#[derive(Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct RawInstrument {
    #[serde(default = "quantum_model")]
    model: Model,
    dimension: usize,
    branches: BTreeMap<String, Vec<RawMatrix>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    refinements: Vec<RawRefinement>,
}

fn quantum_model() -> Model {
    Model::Quantum
}

/// An instrument with optional refinements of its induced measurement,
/// each with the map from refined outcome to instrument outcome.
#[derive(Clone, Debug, PartialEq)]
pub struct InstrumentDocument {
    pub instrument: Instrument,
    pub refinements: Vec<(Measurement, BTreeMap<String, String>)>,
}

pub fn parse_instrument(text: &str) -> Result<InstrumentDocument> {
    let raw: RawInstrument = parse_json(text, "instrument document")?;
    if raw.model != Model::Quantum {
        return Err(Error::NotQuantum);
    }
    if raw.dimension == 0 {
        return Err(Error::Shape("dimension must be positive".into()));
    }
    let system = System::quantum(raw.dimension);
    let d = raw.dimension;
    let branches = raw
        .branches
        .iter()
        .map(|(x, ops)| {
            let ops = ops
                .iter()
                .enumerate()
                .map(|(k, op)| matrix_from_raw(op, d, &format!("branch {x:?} operator {k}")))
                .collect::<Result<Vec<_>>>()?;
            Ok((x.clone(), Transformation::new(system, ops)?))
        })
        .collect::<Result<Vec<_>>>()?;
    let instrument = Instrument::new(system, branches)?;
    let refinements = raw
        .refinements
        .iter()
        .map(|r| {
            let effects = r
                .effects
                .iter()
                .map(|(y, m)| {
                    let m = matrix_from_raw(m, d, &format!("refinement effect {y:?}"))?;
                    Ok((y.clone(), Effect::from_matrix(m)?))
                })
                .collect::<Result<Vec<_>>>()?;
            Ok((Measurement::new(system, effects)?, r.grouping.clone()))
        })
        .collect::<Result<_>>()?;
    Ok(InstrumentDocument {
        instrument,
        refinements,
    })
}

pub fn instrument_to_json(doc: &InstrumentDocument) -> String {
    let raw = RawInstrument {
        model: Model::Quantum,
        dimension: doc.instrument.system().dim(),
        branches: doc
            .instrument
            .iter()
            .map(|(x, t)| {
                let ops = t.operators().iter().map(raw_from_matrix).collect();
                (x.to_string(), ops)
            })
            .collect(),
        refinements: doc
            .refinements
            .iter()
            .map(|(m, g)| RawRefinement {
                effects: m
                    .iter()
                    .map(|(y, e)| (y.to_string(), raw_from_matrix(&e.matrix())))
                    .collect(),
                grouping: g.clone(),
            })
            .collect(),
    };
    to_structured(&raw)
}

fn raw_from_matrix(m: &CMatrix) -> RawMatrix {
    serde_json::from_value(serde_json::to_value(matrix_to_raw(m)).expect("finite numbers serialise"))
        .expect("nested arrays")
}

/// Parses `"a/b"`, integers and decimal literals (with optional exponent)
/// exactly.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let bad = || Error::Parse(format!("not a rational number: {s:?}"));
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(n, d));
    }
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (int, frac) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int.trim_start_matches(['-', '+']).is_empty() && frac.is_empty() {
        return Err(bad());
    }
    let digits: BigInt = format!("{int}{frac}").parse().map_err(|_| bad())?;
    let scale = exp - i32::try_from(frac.len()).map_err(|_| bad())?;
    let ten = BigRational::from_integer(BigInt::from(10));
    let factor = if scale >= 0 {
        num::pow(ten, scale as usize)
    } else {
        BigRational::one() / num::pow(ten, scale.unsigned_abs() as usize)
    };
    Ok(BigRational::from_integer(digits) * factor)
}

fn rational_from_value(v: &Value, what: &str) -> Result<BigRational> {
    match v {
        Value::Number(n) => parse_rational(&n.to_string()),
        Value::String(s) => parse_rational(s),
        _ => Err(Error::Parse(format!("{what}: expected a number or \"a/b\" string"))),
    }
    .map_err(|e| Error::Parse(format!("{what}: {e}")))
}

/// A count shared by all parties or one count per party.
type PerParty = Value;

fn expand(v: &PerParty, parties: usize, what: &str) -> Result<Vec<usize>> {
    let count = |v: &Value| v.as_u64().and_then(|k| usize::try_from(k).ok());
    let bad = || Error::Parse(format!("{what}: expected a count or an array of counts"));
    match v {
        Value::Array(items) => items.iter().map(|k| count(k).ok_or_else(bad)).collect(),
        _ => Ok(vec![count(v).ok_or_else(bad)?; parties]),
    }
}

fn scenario_of(parties: usize, inputs: &PerParty, outputs: &PerParty) -> Result<Scenario> {
    let inputs = expand(inputs, parties, "inputs")?;
    let outputs = expand(outputs, parties, "outputs")?;
    if inputs.len() != parties || outputs.len() != parties {
        return Err(Error::Shape(format!(
            "expected input and output counts for {parties} parties"
        )));
    }
    Scenario::new(inputs, outputs)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGame {
    parties: usize,
    inputs: PerParty,
    outputs: PerParty,
    #[serde(default)]
    prior: Option<BTreeMap<String, Value>>,
    payoff: BTreeMap<String, BTreeMap<String, Value>>,
}

/// Parses a game. A missing prior is uniform; missing payoff entries are 0.
pub fn parse_game(text: &str) -> Result<Game> {
    let raw: RawGame = parse_json(text, "game document")?;
    let s = scenario_of(raw.parties, &raw.inputs, &raw.outputs)?;
    let (nx, ny) = (s.input_count(), s.output_count());
    let prior = match &raw.prior {
        None => vec![BigRational::new(BigInt::one(), BigInt::from(nx)); nx],
        Some(map) => {
            let mut prior = vec![BigRational::zero(); nx];
            for (x, v) in map {
                prior[s.parse_input(x)?] = rational_from_value(v, &format!("prior[{x}]"))?;
            }
            prior
        }
    };
    let mut payoff = vec![vec![BigRational::zero(); ny]; nx];
    for (x, row) in &raw.payoff {
        let xi = s.parse_input(x)?;
        for (y, v) in row {
            payoff[xi][s.parse_output(y)?] = rational_from_value(v, &format!("payoff[{x}][{y}]"))?;
        }
    }
    Game::new(s, prior, payoff)
}

#[derive(Serialize)]
struct GameOut {
    parties: usize,
    inputs: Vec<usize>,
    outputs: Vec<usize>,
    prior: BTreeMap<String, String>,
    payoff: BTreeMap<String, BTreeMap<String, String>>,
}

/// Writes a game with exact `"a/b"` values, omitting zero payoffs.
pub fn game_to_json(game: &Game) -> String {
    let s = game.scenario();
    let out = GameOut {
        parties: s.parties(),
        inputs: s.inputs().to_vec(),
        outputs: s.outputs().to_vec(),
        prior: (0..s.input_count())
            .map(|x| (s.input_string(x), game.prior(x).to_string()))
            .collect(),
        payoff: (0..s.input_count())
            .map(|x| {
                let row = (0..s.output_count())
                    .filter(|&y| !game.payoff(x, y).is_zero())
                    .map(|y| (s.output_string(y), game.payoff(x, y).to_string()))
                    .collect();
                (s.input_string(x), row)
            })
            .collect(),
    };
    to_structured(&out)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawBox {
    parties: usize,
    inputs: PerParty,
    outputs: PerParty,
    p: BTreeMap<String, BTreeMap<String, Value>>,
}

/// Parses a box. Missing entries are 0; values may be `"a/b"` strings.
pub fn parse_box(text: &str) -> Result<CorrelationBox> {
    let raw: RawBox = parse_json(text, "box document")?;
    let s = scenario_of(raw.parties, &raw.inputs, &raw.outputs)?;
    let mut p = vec![vec![0.0; s.output_count()]; s.input_count()];
    for (x, row) in &raw.p {
        let xi = s.parse_input(x)?;
        for (y, v) in row {
            let r = rational_from_value(v, &format!("p[{x}][{y}]"))?;
            p[xi][s.parse_output(y)?] = crate::games::rational_to_f64(&r);
        }
    }
    CorrelationBox::new(s, p)
}

#[derive(Serialize)]
struct BoxOut {
    parties: usize,
    inputs: Vec<usize>,
    outputs: Vec<usize>,
    p: BTreeMap<String, BTreeMap<String, f64>>,
}

pub fn box_to_json(bx: &CorrelationBox) -> String {
    let s = bx.scenario();
    let out = BoxOut {
        parties: s.parties(),
        inputs: s.inputs().to_vec(),
        outputs: s.outputs().to_vec(),
        p: (0..s.input_count())
            .map(|x| {
                let row = (0..s.output_count())
                    .filter(|&y| bx.prob(x, y) != 0.0)
                    .map(|y| (s.output_string(y), bx.prob(x, y)))
                    .collect();
                (s.input_string(x), row)
            })
            .collect(),
    };
    to_structured(&out)
}

#[derive(Serialize)]
struct DilationOut<'a> {
    ancilla_dimension: usize,
    ancilla_state: Value,
    family: Vec<BTreeMap<&'a str, Value>>,
}

fn measurement_value(m: &Measurement) -> BTreeMap<&str, Value> {
    m.iter().map(|(x, e)| (x, data_to_value(e.data()))).collect()
}

/// Ancilla dimension, ancilla state and the dilated projector family.
pub fn dilation_to_json(d: &Dilation) -> String {
    let out = DilationOut {
        ancilla_dimension: d.ancilla.dim(),
        ancilla_state: data_to_value(d.ancilla_state.data()),
        family: vec![measurement_value(&d.measurement)],
    };
    to_structured(&out)
}

pub fn shared_dilation_to_json(d: &SharedDilation) -> String {
    let out = DilationOut {
        ancilla_dimension: d.ancilla.dim(),
        ancilla_state: data_to_value(d.ancilla_state.data()),
        family: d.family.iter().map(measurement_value).collect(),
    };
    to_structured(&out)
}

/// JSON formatter writing every float with 17 significant digits.
#[derive(Clone, Debug, Default)]
pub struct RoundTripFormatter {
    inner: serde_json::ser::PrettyFormatter<'static>,
}

impl Formatter for RoundTripFormatter {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        if value.is_finite() {
            write!(writer, "{value:.16e}")
        } else {
            writer.write_all(b"null")
        }
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, f64::from(value))
    }

    fn write_number_str<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: &str) -> io::Result<()> {
        match value.parse::<f64>() {
            Ok(v) if value.contains(['.', 'e', 'E']) => self.write_f64(writer, v),
            _ => writer.write_all(value.as_bytes()),
        }
    }

    fn begin_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.begin_array(w)
    }
    fn end_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.end_array(w)
    }
    fn begin_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.inner.begin_array_value(w, first)
    }
    fn end_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.end_array_value(w)
    }
    fn begin_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.begin_object(w)
    }
    fn end_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.end_object(w)
    }
    fn begin_object_key<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.inner.begin_object_key(w, first)
    }
    fn begin_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.begin_object_value(w)
    }
    fn end_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.end_object_value(w)
    }
}

/// Pretty JSON with struct-declaration / sorted-map key order and floats
/// at full round-trip precision.
pub fn to_structured<T: Serialize + ?Sized>(value: &T) -> String {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, RoundTripFormatter::default());
    value.serialize(&mut ser).expect("in-memory serialisation");
    out.push(b'\n');
    String::from_utf8(out).expect("JSON is UTF-8")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::games::{builtin_game, BuiltinGame};
    use crate::instruments::{luders_of, naimark_dilate};
    use crate::linalg;

    const TRINE: &str = r#"{
        "model": "quantum",
        "dimension": 2,
        "effects": {
            "a": [[[0.6666666666666666, 0], [0, 0]], [[0, 0], [0, 0]]],
            "b": [[0.16666666666666666, -0.28867513459481287], [-0.28867513459481287, 0.5]],
            "c": [[0.16666666666666666, 0.28867513459481287], [0.28867513459481287, 0.5]]
        }
    }"#;

    #[test]
    fn rationals() {
        let r = |n: i64, d: i64| BigRational::new(n.into(), d.into());
        assert_eq!(parse_rational("3/4").unwrap(), r(3, 4));
        assert_eq!(parse_rational("0.1").unwrap(), r(1, 10));
        assert_eq!(parse_rational("-2.5e-1").unwrap(), r(-1, 4));
        assert_eq!(parse_rational("12E2").unwrap(), r(1200, 1));
        assert_eq!(parse_rational("7").unwrap(), r(7, 1));
        for bad in ["", "1/0", "x", "1.2.3", "."] {
            assert!(parse_rational(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn trine_parses_and_round_trips() {
        let m = parse_measurement(TRINE).unwrap();
        assert_eq!(m.len(), 3);
        let again = parse_measurement(&measurement_to_json(&m)).unwrap();
        assert_eq!(again, m);
    }

    #[test]
    fn structured_output_is_stable() {
        let m = parse_measurement(TRINE).unwrap();
        let a = measurement_to_json(&m);
        assert_eq!(a, measurement_to_json(&m));
        assert!(a.contains("6.6666666666666663e-1"));
        let keys: Vec<usize> = ["\"model\"", "\"dimension\"", "\"effects\""]
            .iter()
            .map(|k| a.find(k).unwrap())
            .collect();
        assert!(keys.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn classical_documents() {
        let text = r#"{"model":"classical","dimension":2,"effects":{"0":[1,0],"1":[0,1]}}"#;
        let m = parse_measurement(text).unwrap();
        assert_eq!(parse_measurement(&measurement_to_json(&m)).unwrap(), m);
        let s = parse_state(r#"{"model":"classical","dimension":2,"state":[0.25,0.75]}"#).unwrap();
        assert_eq!(parse_state(&state_to_json(&s)).unwrap(), s);
    }

    #[test]
    fn parse_errors_carry_locations() {
        let err = parse_measurement("{\n  \"model\": \"quantum\",\n  \"dimension\": 2,\n  oops\n}").unwrap_err();
        assert!(matches!(err, Error::Parse(_)));
        assert!(err.to_string().contains("line 4"), "{err}");
        let wrong = r#"{"model":"quantum","dimension":3,"effects":{"a":[[1,0],[0,1]]}}"#;
        assert!(matches!(parse_measurement(wrong), Err(Error::Shape(_))));
        let both = r#"{"model":"quantum","dimension":1,"state":[[1]],"effects":{"a":[[1]]}}"#;
        assert!(parse_system_document(both).is_err());
    }

    #[test]
    fn instrument_round_trip() {
        let m = parse_measurement(r#"{"model":"quantum","dimension":2,"effects":{"0":[[1,0],[0,0]],"1":[[0,0],[0,1]]}}"#).unwrap();
        let doc = InstrumentDocument {
            instrument: luders_of(&m).unwrap(),
            refinements: vec![(
                m.clone(),
                BTreeMap::from([("0".into(), "0".into()), ("1".into(), "1".into())]),
            )],
        };
        let back = parse_instrument(&instrument_to_json(&doc)).unwrap();
        assert_eq!(back, doc);
    }

    #[test]
    fn instrument_dimension_errors() {
        let text = r#"{"dimension":2,"branches":{"0":[[[1,0,0],[0,0,0],[0,0,0]]]}}"#;
        assert!(matches!(parse_instrument(text), Err(Error::Shape(_))));
    }

    #[test]
    fn games_round_trip_exactly() {
        for (kind, n) in [(BuiltinGame::Chsh, 2), (BuiltinGame::Gyni, 3)] {
            let g = builtin_game(kind, n).unwrap();
            assert_eq!(parse_game(&game_to_json(&g)).unwrap(), g);
        }
        let text = r#"{"parties":2,"inputs":2,"outputs":2,
            "prior":{"00":0.25,"01":"1/4","10":0.25,"11":0.25},
            "payoff":{"00":{"00":1,"11":1},"01":{"00":1,"11":1},"10":{"00":1,"11":1},"11":{"01":1,"10":1}}}"#;
        assert_eq!(parse_game(text).unwrap(), builtin_game(BuiltinGame::Chsh, 2).unwrap());
        let bad_prior = text.replace("\"1/4\"", "0.3");
        assert!(matches!(parse_game(&bad_prior), Err(Error::InvalidGame(_))));
        let bad_input = text.replace("\"11\":{\"01\"", "\"12\":{\"01\"");
        assert!(parse_game(&bad_input).is_err());
    }

    #[test]
    fn boxes_round_trip() {
        for bx in [CorrelationBox::pr(), CorrelationBox::tsirelson()] {
            assert_eq!(parse_box(&box_to_json(&bx)).unwrap(), bx);
        }
        let signalling = r#"{"parties":2,"inputs":[2,2],"outputs":[2,2],
            "p":{"00":{"00":1},"01":{"00":1},"10":{"01":1},"11":{"01":1}}}"#;
        assert!(matches!(parse_box(signalling), Err(Error::InvalidBox(_))));
    }

    #[test]
    fn dilation_report_contains_projectors() {
        let m = parse_measurement(TRINE).unwrap();
        let d = naimark_dilate(&m).unwrap();
        let v: Value = serde_json::from_str(&dilation_to_json(&d)).unwrap();
        assert_eq!(v["ancilla_dimension"].as_u64(), Some(3));
        assert_eq!(v["family"][0].as_object().unwrap().len(), 3);
        let e = &v["family"][0]["a"];
        let raw: RawMatrix = serde_json::from_value(e.clone()).unwrap();
        let p = matrix_from_raw(&raw, 6, "a").unwrap();
        assert!(linalg::projector_residual(&p) < 1e-9);
    }
}
