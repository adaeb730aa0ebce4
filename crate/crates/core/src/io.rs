//! Datum files: a JSON object with integer fields `c`, `r` and matrix
//! fields `A`, `B`, `I`, `J` given as arrays of rows, each entry a
//! rational string `"p"` or `"p/q"`. Bare JSON integers are accepted too.

use serde_json::{json, Map, Value};

use crate::datum::AdhmDatum;
use crate::error::{Error, Result};
use crate::ratmat::{format_scalar, parse_scalar, Matrix, Scalar};

fn field<'a>(obj: &'a Map<String, Value>, name: &str) -> Result<&'a Value> {
    obj.get(name).ok_or_else(|| Error::MissingField(name.into()))
}

fn size_field(obj: &Map<String, Value>, name: &str) -> Result<usize> {
    let v = field(obj, name)?;
    v.as_u64().map(|n| n as usize).ok_or_else(|| Error::InvalidField {
        field: name.into(),
        message: format!("expected a non-negative integer, found {v}"),
    })
}

fn entry(name: &str, v: &Value) -> Result<Scalar> {
    let text = match v {
        Value::String(s) => s.clone(),
        Value::Number(n) if n.is_i64() || n.is_u64() => n.to_string(),
        other => other.to_string(),
    };
    parse_scalar(&text).ok_or(Error::MalformedRational {
        field: name.into(),
        text,
    })
}

fn shape_error(name: &str, rows: usize, cols: usize, found: String) -> Error {
    Error::Shape {
        field: name.into(),
        expected_rows: rows,
        expected_cols: cols,
        found,
    }
}

fn matrix_field(obj: &Map<String, Value>, name: &str, rows: usize, cols: usize) -> Result<Matrix> {
    let v = field(obj, name)?;
    let outer = v.as_array().ok_or_else(|| Error::InvalidField {
        field: name.into(),
        message: "expected an array of rows".into(),
    })?;
    if outer.len() != rows {
        return Err(shape_error(name, rows, cols, format!("{} rows", outer.len())));
    }
    let mut data = Vec::with_capacity(rows * cols);
    for (i, row) in outer.iter().enumerate() {
        let row = row.as_array().ok_or_else(|| Error::InvalidField {
            field: name.into(),
            message: format!("row {i} is not an array"),
        })?;
        if row.len() != cols {
            return Err(shape_error(name, rows, cols, format!("{} entries in row {i}", row.len())));
        }
        for x in row {
            data.push(entry(name, x)?);
        }
    }
    Matrix::new(rows, cols, data)
}

pub fn datum_from_value(v: &Value) -> Result<AdhmDatum> {
    let obj = v.as_object().ok_or_else(|| Error::Document("expected a JSON object".into()))?;
    let c = size_field(obj, "c")?;
    let r = size_field(obj, "r")?;
    let a = matrix_field(obj, "A", c, c)?;
    let b = matrix_field(obj, "B", c, c)?;
    let i = matrix_field(obj, "I", c, r)?;
    let j = matrix_field(obj, "J", r, c)?;
    AdhmDatum::new(c, r, a, b, i, j)
}

pub fn parse_datum(text: &str) -> Result<AdhmDatum> {
    let v: Value = serde_json::from_str(text).map_err(|e| Error::Document(e.to_string()))?;
    datum_from_value(&v)
}

pub fn matrix_to_value(m: &Matrix) -> Value {
    Value::Array(
        (0..m.rows())
            .map(|i| Value::Array(m.row(i).iter().map(|x| Value::String(format_scalar(x))).collect()))
            .collect(),
    )
}

pub fn datum_to_value(x: &AdhmDatum) -> Value {
    json!({
        "c": x.c(),
        "r": x.r(),
        "A": matrix_to_value(x.a()),
        "B": matrix_to_value(x.b()),
        "I": matrix_to_value(x.i()),
        "J": matrix_to_value(x.j()),
    })
}

pub fn serialize_datum(x: &AdhmDatum) -> String {
    serde_json::to_string_pretty(&datum_to_value(x)).expect("JSON values always serialize")
}
