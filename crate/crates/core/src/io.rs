//! JSON interchange for generators, step functions, model specs and vectors.
//!
//! Every document carries `"format": 1`. Complex numbers are `[re, im]` pairs
//! and matrices are arrays of rows. Parsers never panic: syntax and type
//! problems become [`Error::Parse`] naming the JSON path, and semantic
//! problems become the validation error of the constructor involved.

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::cocycle::StepFunction;
use crate::error::{Error, Result};
use crate::generator::BlockGenerator;
use crate::models::{self, ContractiveMode, Model, OscillatorSpec};
use crate::opcore::{CMatrix, C64};

pub const FORMAT_VERSION: u32 = 1;
/// Cap on `dim_h · (1 + dim_k)` for anything read from a file.
pub const MAX_TOTAL_DIM: usize = 1024;

type Rows = Vec<Vec<C64>>;

fn from_slice<T: DeserializeOwned>(bytes: &[u8]) -> Result<T> {
    let de = &mut serde_json::Deserializer::from_slice(bytes);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        if path == "." {
            Error::Parse(inner.to_string())
        } else {
            Error::Parse(format!("{path}: {inner}"))
        }
    })
}

fn check_format(format: u32) -> Result<()> {
    if format != FORMAT_VERSION {
        return Err(Error::Parse(format!(
            "format: unsupported version {format}, expected {FORMAT_VERSION}"
        )));
    }
    Ok(())
}

fn check_dims(dim_h: usize, dim_k: usize) -> Result<()> {
    if dim_h == 0 || dim_k == 0 {
        return Err(Error::InvalidParameter(format!(
            "dim_h and dim_k must be at least 1, got {dim_h} and {dim_k}"
        )));
    }
    let total = dim_k
        .checked_add(1)
        .and_then(|k| k.checked_mul(dim_h))
        .filter(|&t| t <= MAX_TOTAL_DIM);
    if total.is_none() {
        return Err(Error::InvalidParameter(format!(
            "dim_h · (1 + dim_k) exceeds {MAX_TOTAL_DIM}"
        )));
    }
    Ok(())
}

fn matrix(field: &'static str, rows: &Rows, expected: (usize, usize)) -> Result<CMatrix> {
    let (r, c) = expected;
    let shape_err = |found_rows: usize, found_cols: usize| Error::BlockShape {
        block: field,
        expected_rows: r,
        expected_cols: c,
        rows: found_rows,
        cols: found_cols,
    };
    if rows.len() != r {
        return Err(shape_err(rows.len(), rows.first().map_or(0, Vec::len)));
    }
    if let Some(row) = rows.iter().find(|row| row.len() != c) {
        return Err(shape_err(r, row.len()));
    }
    let flat: Vec<C64> = rows.iter().flatten().copied().collect();
    if flat.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::NonFinite(field));
    }
    CMatrix::from_row_major(r, c, &flat)
}

fn square_matrix(field: &'static str, rows: &Rows) -> Result<CMatrix> {
    let n = rows.len();
    if n == 0 || n > MAX_TOTAL_DIM {
        return Err(Error::InvalidParameter(format!(
            "{field}: needs between 1 and {MAX_TOTAL_DIM} rows, got {n}"
        )));
    }
    matrix(field, rows, (n, n))
}

fn to_rows(m: &CMatrix) -> Rows {
    (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| m.get(i, j)).collect())
        .collect()
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GeneratorDoc {
    format: u32,
    dim_h: usize,
    dim_k: usize,
    #[serde(rename = "K")]
    k: Rows,
    #[serde(rename = "L")]
    l: Rows,
    #[serde(rename = "M")]
    m: Rows,
    #[serde(rename = "C")]
    c: Rows,
}

pub fn parse_generator(bytes: &[u8]) -> Result<BlockGenerator> {
    let doc: GeneratorDoc = from_slice(bytes)?;
    check_format(doc.format)?;
    check_dims(doc.dim_h, doc.dim_k)?;
    let (h, n) = (doc.dim_h, doc.dim_h * doc.dim_k);
    BlockGenerator::assemble(
        matrix("K", &doc.k, (h, h))?,
        matrix("L", &doc.l, (n, h))?,
        matrix("M", &doc.m, (h, n))?,
        matrix("C", &doc.c, (n, n))?,
        doc.dim_h,
        doc.dim_k,
    )
}

pub fn generator_to_json(f: &BlockGenerator) -> String {
    let doc = GeneratorDoc {
        format: FORMAT_VERSION,
        dim_h: f.dim_h(),
        dim_k: f.dim_k(),
        k: to_rows(f.k()),
        l: to_rows(f.l()),
        m: to_rows(f.m()),
        c: to_rows(f.c()),
    };
    serde_json::to_string_pretty(&doc).expect("generator serializes")
}

/// A step value: a bare pair when `dim_k = 1`, otherwise a list of pairs.
#[derive(Debug, Serialize, Deserialize)]
#[serde(untagged)]
enum StepValue {
    Scalar(C64),
    Vector(Vec<C64>),
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct StepDoc {
    format: u32,
    breakpoints: Vec<f64>,
    values: Vec<StepValue>,
    support_end: f64,
}

pub fn parse_step_function(bytes: &[u8]) -> Result<StepFunction> {
    let doc: StepDoc = from_slice(bytes)?;
    check_format(doc.format)?;
    let values: Vec<Vec<C64>> = doc
        .values
        .into_iter()
        .map(|v| match v {
            StepValue::Scalar(z) => vec![z],
            StepValue::Vector(v) => v,
        })
        .collect();
    if values
        .first()
        .is_some_and(|v| v.is_empty() || v.len() > MAX_TOTAL_DIM)
    {
        return Err(Error::InvalidStep(
            "values: dimension must be between 1 and 1024".into(),
        ));
    }
    StepFunction::new(doc.breakpoints, values, doc.support_end)
}

pub fn step_function_to_json(f: &StepFunction) -> String {
    let values = f
        .values()
        .iter()
        .map(|v| match v.as_slice() {
            [z] => StepValue::Scalar(*z),
            _ => StepValue::Vector(v.clone()),
        })
        .collect();
    let doc = StepDoc {
        format: FORMAT_VERSION,
        breakpoints: f.breakpoints().to_vec(),
        values,
        support_end: f.support_end(),
    };
    serde_json::to_string_pretty(&doc).expect("step function serializes")
}

/// Recipe for a generator. On disk the variant name is the `"model"` field.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum ModelSpec {
    Oscillator {
        dim: usize,
        lambda: Vec<C64>,
        mu: Vec<f64>,
    },
    BirthDeath {
        dim: usize,
        birth: Vec<f64>,
        death: Vec<f64>,
    },
    Hlc {
        #[serde(rename = "H")]
        h: Rows,
        #[serde(rename = "L")]
        l: Rows,
        #[serde(rename = "C")]
        c: Rows,
    },
    Zero {
        dim_h: usize,
        dim_k: usize,
    },
    Random {
        dim_h: usize,
        dim_k: usize,
        seed: u64,
        mode: ContractiveMode,
    },
}

impl ModelSpec {
    pub fn build(&self) -> Result<Model> {
        let everything = |f: BlockGenerator| {
            let interior = (0..f.dim_h()).collect();
            Model {
                generator: f,
                interior,
            }
        };
        match self {
            ModelSpec::Oscillator { dim, lambda, mu } => {
                check_dims(*dim, 1)?;
                models::inverse_oscillator(&OscillatorSpec {
                    dim: *dim,
                    lambda: lambda.clone(),
                    mu: mu.clone(),
                })
            }
            ModelSpec::BirthDeath { dim, birth, death } => {
                check_dims(*dim, 2)?;
                models::birth_death(*dim, birth, death)
            }
            ModelSpec::Hlc { h, l, c } => {
                let h = square_matrix("H", h)?;
                let dim_h = h.rows();
                if l.is_empty() || l.len() % dim_h != 0 {
                    return Err(Error::InvalidModel(format!(
                        "L: needs a positive multiple of {dim_h} rows, got {}",
                        l.len()
                    )));
                }
                let dim_k = l.len() / dim_h;
                check_dims(dim_h, dim_k)?;
                let n = dim_h * dim_k;
                let l = matrix("L", l, (n, dim_h))?;
                let c = matrix("C", c, (n, n))?;
                BlockGenerator::from_hlc(&h, &l, &c).map(everything)
            }
            ModelSpec::Zero { dim_h, dim_k } => {
                check_dims(*dim_h, *dim_k)?;
                Ok(everything(BlockGenerator::zero(*dim_h, *dim_k)))
            }
            ModelSpec::Random {
                dim_h,
                dim_k,
                seed,
                mode,
            } => {
                check_dims(*dim_h, *dim_k)?;
                models::random_contractive(*dim_h, *dim_k, *seed, *mode).map(everything)
            }
        }
    }
}

pub fn parse_model_spec(bytes: &[u8]) -> Result<ModelSpec> {
    use serde_json::{Map, Value};
    let mut doc: Map<String, Value> = from_slice(bytes)?;
    let format = doc
        .remove("format")
        .ok_or_else(|| Error::Parse("missing field `format`".into()))?;
    check_format(from_value("format", format)?)?;
    let model: String = match doc.remove("model") {
        Some(m) => from_value("model", m)?,
        None => return Err(Error::Parse("missing field `model`".into())),
    };
    let tagged = Value::Object(Map::from_iter([(model.clone(), Value::Object(doc))]));
    from_value("", tagged).map_err(|e| match e {
        Error::Parse(m) => Error::Parse(
            m.strip_prefix(&format!("{model}."))
                .unwrap_or(&m)
                .to_string(),
        ),
        other => other,
    })
}

fn from_value<T: DeserializeOwned>(field: &str, v: serde_json::Value) -> Result<T> {
    serde_path_to_error::deserialize(v).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        match (field, path.as_str()) {
            ("", ".") => Error::Parse(format!("model: {inner}")),
            ("", p) => Error::Parse(format!("{p}: {inner}")),
            (f, _) => Error::Parse(format!("{f}: {inner}")),
        }
    })
}

pub fn model_spec_to_json(spec: &ModelSpec) -> String {
    let value = serde_json::to_value(spec).expect("model spec serializes");
    let mut out = serde_json::Map::new();
    out.insert("format".into(), FORMAT_VERSION.into());
    if let serde_json::Value::Object(outer) = value {
        for (model, fields) in outer {
            out.insert("model".into(), model.into());
            if let serde_json::Value::Object(fields) = fields {
                out.extend(fields);
            }
        }
    }
    serde_json::to_string_pretty(&out).expect("model spec serializes")
}

/// A bare JSON array of `[re, im]` pairs.
pub fn parse_vector(bytes: &[u8]) -> Result<Vec<C64>> {
    let v: Vec<C64> = from_slice(bytes)?;
    if v.is_empty() || v.len() > MAX_TOTAL_DIM {
        return Err(Error::InvalidParameter(format!(
            "vector length must be between 1 and {MAX_TOTAL_DIM}, got {}",
            v.len()
        )));
    }
    if v.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::NonFinite("vector"));
    }
    Ok(v)
}

pub fn vector_to_json(v: &[C64]) -> String {
    serde_json::to_string(v).expect("vector serializes")
}
