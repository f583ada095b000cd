//! On-disk formats.
//!
//! Samples are newline-delimited JSON records; reports, mixtures and
//! characteristic functionals are single JSON documents; estimates are CSV.
//! Floats are written in shortest round-trip form and non-finite numbers
//! in documents become `null`.

use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Write};

use ergmat_core::diagnostics::Detail;
use ergmat_core::{CfEvaluation, CornerMatrix, EmpiricalMixture, Field, RngHandle, SpectrumEstimate, TestReport};
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};

/// Schema version written into every record and document.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
#[serde(remote = "Field", rename_all = "lowercase")]
enum FieldDef {
    Real,
    Complex,
}

/// One sampled corner with the stream that produced it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SampleRecord {
    pub v: u32,
    pub id: String,
    #[serde(with = "FieldDef")]
    pub field: Field,
    pub n: usize,
    pub m: usize,
    pub seed: u64,
    pub stream: u64,
    /// Row-major entries; complex entries interleaved as `re, im`.
    pub data: Vec<f64>,
}

impl SampleRecord {
    pub fn from_corner(id: impl Into<String>, x: &CornerMatrix, rng: RngHandle) -> Self {
        SampleRecord {
            v: SCHEMA_VERSION,
            id: id.into(),
            field: x.field(),
            n: x.rows(),
            m: x.cols(),
            seed: rng.seed,
            stream: rng.stream,
            data: x.to_interleaved(),
        }
    }

    pub fn to_corner(&self) -> ergmat_core::Result<CornerMatrix> {
        CornerMatrix::from_interleaved(self.field, self.n, self.m, &self.data)
    }

    /// Checks the record invariants; `Err` carries the reason.
    pub fn validate(&self) -> std::result::Result<(), String> {
        if self.v != SCHEMA_VERSION {
            return Err(format!("unsupported schema version {}", self.v));
        }
        if self.n == 0 || self.m == 0 {
            return Err("n and m must be positive".into());
        }
        let per = match self.field {
            Field::Real => 1,
            Field::Complex => 2,
        };
        let expected = self.n.checked_mul(self.m).and_then(|x| x.checked_mul(per));
        if expected != Some(self.data.len()) {
            return Err(format!(
                "data has {} values, expected {} for a {} {}x{} sample",
                self.data.len(),
                per * self.n * self.m,
                self.field.as_str(),
                self.n,
                self.m
            ));
        }
        if let Some(i) = self.data.iter().position(|x| !x.is_finite()) {
            return Err(format!("data[{i}] is not finite"));
        }
        Ok(())
    }
}

/// Writes one record per line.
pub fn write_samples<W: Write>(records: &[SampleRecord], mut w: W) -> Result<()> {
    for (i, r) in records.iter().enumerate() {
        r.validate().map_err(|reason| Error::SchemaViolation { line: i + 1, reason })?;
        serde_json::to_writer(&mut w, r).map_err(io::Error::from)?;
        w.write_all(b"\n")?;
    }
    w.flush()?;
    Ok(())
}

/// Reads newline-delimited records; blank lines are skipped.
pub fn read_samples<R: BufRead>(r: R) -> Result<Vec<SampleRecord>> {
    let mut out = Vec::new();
    for (i, line) in r.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let schema = |reason: String| Error::SchemaViolation { line: i + 1, reason };
        let rec: SampleRecord = serde_json::from_str(&line).map_err(|e| schema(e.to_string()))?;
        rec.validate().map_err(schema)?;
        out.push(rec);
    }
    Ok(out)
}

/// A JSON number, or `null` when not finite.
pub fn num(x: f64) -> Value {
    serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number)
}

fn nums(xs: &[f64]) -> Value {
    Value::Array(xs.iter().map(|&x| num(x)).collect())
}

fn detail_json(d: &Detail) -> Value {
    match d {
        Detail::Num(x) => num(*x),
        Detail::Int(i) => json!(i),
        Detail::Bool(b) => json!(b),
        Detail::Text(s) => json!(s),
        Detail::List(xs) => nums(xs),
    }
}

pub fn report_json(r: &TestReport) -> Value {
    let details: Map<String, Value> = r.details.iter().map(|(k, v)| (k.clone(), detail_json(v))).collect();
    json!({
        "name": r.name,
        "statistic": num(r.statistic),
        "threshold": num(r.threshold),
        "passed": r.passed,
        "details": details,
    })
}

pub fn mixture_json(mix: &EmpiricalMixture) -> Value {
    json!({
        "m": mix.m,
        "cluster_tol": num(mix.cluster_tol),
        "raw_cloud": mix.raw_cloud,
        "total_weight": num(mix.total_weight()),
        "atoms": mix.atoms.iter().map(|a| json!({
            "s": nums(a.spec.as_slice()),
            "weight": num(a.weight),
            "count": a.count,
        })).collect::<Vec<_>>(),
    })
}

pub fn cf_json(cf: &CfEvaluation) -> Value {
    json!({
        "m": cf.grid.rank(),
        "points": cf.grid.points().iter().zip(&cf.values).zip(&cf.stderr).map(|((l, v), se)| json!({
            "lambda": nums(l.as_slice()),
            "re": num(v.re),
            "im": num(v.im),
            "stderr": num(*se),
        })).collect::<Vec<_>>(),
    })
}

/// `{"v", "kind", "config", "result"}`: a result together with the resolved
/// configuration (seed included) that regenerates it.
pub fn document(kind: &str, config: Value, result: Value) -> Value {
    json!({
        "v": SCHEMA_VERSION,
        "kind": kind,
        "config": config,
        "result": result,
    })
}

pub fn write_document<W: Write>(doc: &Value, mut w: W) -> Result<()> {
    serde_json::to_writer_pretty(&mut w, doc).map_err(io::Error::from)?;
    w.write_all(b"\n")?;
    w.flush()?;
    Ok(())
}

/// CSV with header `id, s_1..s_m, method, n, residual`.
pub fn write_estimates<W: Write>(rows: &[(String, SpectrumEstimate)], w: W) -> Result<()> {
    let m = rows.first().map_or(0, |(_, e)| e.spec.rank());
    let mut out = csv::Writer::from_writer(w);
    let mut header = vec!["id".to_string()];
    header.extend((1..=m).map(|i| format!("s_{i}")));
    header.extend(["method", "n", "residual"].map(String::from));
    out.write_record(&header)?;
    for (id, e) in rows {
        let mut rec = vec![id.clone()];
        rec.extend(e.spec.as_slice().iter().map(|x| x.to_string()));
        rec.push(e.method.as_str().to_string());
        rec.push(e.n.to_string());
        rec.push(format!("{:e}", e.residual));
        out.write_record(&rec)?;
    }
    out.flush()?;
    Ok(())
}

/// Buffered writer for a path, or stdout for `"-"`.
pub fn create_output(path: &str) -> Result<Box<dyn Write>> {
    Ok(if path == "-" {
        Box::new(BufWriter::new(io::stdout().lock()))
    } else {
        Box::new(BufWriter::new(File::create(path)?))
    })
}

/// Buffered reader for a path, or stdin for `"-"`.
pub fn open_input(path: &str) -> Result<Box<dyn BufRead>> {
    Ok(if path == "-" {
        Box::new(BufReader::new(io::stdin().lock()))
    } else {
        Box::new(BufReader::new(File::open(path)?))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use ergmat_core::matrix::Matrix;
    use ergmat_core::Complex64;

    #[test]
    fn complex_interleaving() {
        let x = CornerMatrix::Complex(Matrix::from_vec(1, 1, vec![Complex64::new(0.5, 0.25)]).unwrap());
        let r = SampleRecord::from_corner("a", &x, RngHandle::new(1, 2));
        assert_eq!(r.data, vec![0.5, 0.25]);
        let line = serde_json::to_string(&r).unwrap();
        assert_eq!(
            line,
            r#"{"v":1,"id":"a","field":"complex","n":1,"m":1,"seed":1,"stream":2,"data":[0.5,0.25]}"#
        );
    }

    #[test]
    fn non_finite_numbers_become_null() {
        assert_eq!(num(f64::INFINITY), Value::Null);
        assert_eq!(num(1.5), json!(1.5));
    }
}
