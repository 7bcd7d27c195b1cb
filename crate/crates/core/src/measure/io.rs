//! On-disk layouts for measurement operators.
//!
//! Binary layout (all integers and floats little-endian):
//!
//! ```text
//! offset  size  field
//! 0       8     magic "CRMOP\0\0\x01"
//! 8       1     kind: 0 = dense, 1 = lifted rank-one
//! 9       1     shape: 0 = vector, 1 = matrix, 2 = symmetric
//! 10      6     reserved, zero
//! 16      8     m (u64)
//! 24      8     row length (u64)
//! 32      8     shape dim a (u64)
//! 40      8     shape dim b (u64)
//! 48      8     seed (u64)
//! 56      8     alpha (f64, NaN when absent)
//! 64      8     sigma (f64, NaN when absent)
//! 72      ...   m * row length f64 values, row-major
//! ```
//!
//! CSV layout: one leading comment line
//! `# kind=<dense|lifted> shape=<vector:d|matrix:r:c|symmetric:d> seed=<u64>`
//! followed by one row per measurement (`phi_i` or `psi_i`), row-major.

use std::fs;
use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;

use nalgebra::DMatrix;

use super::{EnsembleSpec, MeasurementOperator, OperatorKind, SignalShape};
use crate::error::{Error, Result};

const MAGIC: &[u8; 8] = b"CRMOP\0\0\x01";
const HEADER_LEN: usize = 72;

fn io_err(path: &Path, source: std::io::Error) -> Error {
    Error::Io { path: path.to_path_buf(), source }
}

fn shape_code(shape: SignalShape) -> (u8, u64, u64) {
    match shape {
        SignalShape::Vector(d) => (0, d as u64, 0),
        SignalShape::Matrix(r, c) => (1, r as u64, c as u64),
        SignalShape::Symmetric(d) => (2, d as u64, 0),
    }
}

fn shape_from_code(code: u8, a: u64, b: u64) -> Result<SignalShape> {
    Ok(match code {
        0 => SignalShape::Vector(a as usize),
        1 => SignalShape::Matrix(a as usize, b as usize),
        2 => SignalShape::Symmetric(a as usize),
        c => return Err(Error::InvalidArgument(format!("unknown shape code {c}"))),
    })
}

fn ensemble_with_params(alpha: f64, sigma: f64) -> EnsembleSpec {
    let spec = EnsembleSpec::explicit();
    if alpha.is_finite() && sigma.is_finite() {
        spec.clone().with_params(alpha, sigma).unwrap_or(spec)
    } else {
        spec
    }
}

pub fn to_bytes(op: &MeasurementOperator) -> Vec<u8> {
    let rows = op.rows();
    let (m, n) = rows.shape();
    let (sc, a, b) = shape_code(op.shape());
    let mut out = Vec::with_capacity(HEADER_LEN + 8 * m * n);
    out.extend_from_slice(MAGIC);
    out.push(u8::from(op.is_lifted()));
    out.push(sc);
    out.extend_from_slice(&[0u8; 6]);
    for v in [m as u64, n as u64, a, b, op.seed()] {
        out.extend_from_slice(&v.to_le_bytes());
    }
    for v in [op.ensemble().alpha(), op.ensemble().sigma()] {
        out.extend_from_slice(&v.unwrap_or(f64::NAN).to_le_bytes());
    }
    for i in 0..m {
        for j in 0..n {
            out.extend_from_slice(&rows[(i, j)].to_le_bytes());
        }
    }
    out
}

pub fn from_bytes(bytes: &[u8]) -> Result<MeasurementOperator> {
    let bad = |msg: &str| Error::InvalidArgument(format!("operator file: {msg}"));
    if bytes.len() < HEADER_LEN || &bytes[..8] != MAGIC {
        return Err(bad("bad magic or truncated header"));
    }
    let u = |off: usize| u64::from_le_bytes(bytes[off..off + 8].try_into().expect("8 bytes"));
    let f = |off: usize| f64::from_le_bytes(bytes[off..off + 8].try_into().expect("8 bytes"));
    let lifted = match bytes[8] {
        0 => false,
        1 => true,
        _ => return Err(bad("unknown kind")),
    };
    let shape = shape_from_code(bytes[9], u(32), u(40))?;
    let (m, n) = (u(16) as usize, u(24) as usize);
    let seed = u(48);
    let expected = m
        .checked_mul(n)
        .and_then(|k| k.checked_mul(8))
        .and_then(|k| k.checked_add(HEADER_LEN))
        .ok_or_else(|| bad("size overflow"))?;
    if bytes.len() != expected {
        return Err(bad("payload length does not match header"));
    }
    let data: Vec<f64> = bytes[HEADER_LEN..]
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().expect("8 bytes")))
        .collect();
    let rows = DMatrix::from_row_slice(m, n, &data);
    build(lifted, rows, shape, seed, ensemble_with_params(f(56), f(64)))
}

fn build(lifted: bool, rows: DMatrix<f64>, shape: SignalShape, seed: u64, ens: EnsembleSpec) -> Result<MeasurementOperator> {
    let n = rows.ncols();
    let consistent = if lifted { shape == SignalShape::Symmetric(n) } else { shape.len() == n };
    if !consistent || rows.nrows() == 0 || n == 0 {
        return Err(Error::InvalidArgument("operator file: shape inconsistent with row length".into()));
    }
    let kind = if lifted { OperatorKind::LiftedRankOne(rows) } else { OperatorKind::Dense(rows) };
    Ok(MeasurementOperator::from_parts(kind, shape, seed, ens))
}

pub fn write_binary(op: &MeasurementOperator, path: &Path) -> Result<()> {
    fs::write(path, to_bytes(op)).map_err(|e| io_err(path, e))
}

pub fn read_binary(path: &Path) -> Result<MeasurementOperator> {
    let mut buf = Vec::new();
    fs::File::open(path)
        .and_then(|mut f| f.read_to_end(&mut buf))
        .map_err(|e| io_err(path, e))?;
    from_bytes(&buf)
}

fn shape_label(shape: SignalShape) -> String {
    match shape {
        SignalShape::Vector(d) => format!("vector:{d}"),
        SignalShape::Matrix(r, c) => format!("matrix:{r}:{c}"),
        SignalShape::Symmetric(d) => format!("symmetric:{d}"),
    }
}

fn parse_shape(s: &str) -> Result<SignalShape> {
    let parts: Vec<&str> = s.split(':').collect();
    let num = |p: &str| p.parse::<usize>().map_err(|_| Error::InvalidArgument(format!("bad shape '{s}'")));
    match parts.as_slice() {
        ["vector", d] => Ok(SignalShape::Vector(num(d)?)),
        ["matrix", r, c] => Ok(SignalShape::Matrix(num(r)?, num(c)?)),
        ["symmetric", d] => Ok(SignalShape::Symmetric(num(d)?)),
        _ => Err(Error::InvalidArgument(format!("bad shape '{s}'"))),
    }
}

pub fn write_csv(op: &MeasurementOperator, path: &Path) -> Result<()> {
    let mut f = fs::File::create(path).map_err(|e| io_err(path, e))?;
    let kind = if op.is_lifted() { "lifted" } else { "dense" };
    let mut text = format!("# kind={kind} shape={} seed={}\n", shape_label(op.shape()), op.seed());
    for row in op.rows().row_iter() {
        let cells: Vec<String> = row.iter().map(|v| format!("{v:e}")).collect();
        text.push_str(&cells.join(","));
        text.push('\n');
    }
    f.write_all(text.as_bytes()).map_err(|e| io_err(path, e))
}

pub fn read_csv(path: &Path) -> Result<MeasurementOperator> {
    let f = fs::File::open(path).map_err(|e| io_err(path, e))?;
    let mut lines = BufReader::new(f).lines();
    let header = lines
        .next()
        .transpose()
        .map_err(|e| io_err(path, e))?
        .ok_or_else(|| Error::InvalidArgument("empty operator csv".into()))?;
    let header = header
        .strip_prefix('#')
        .ok_or_else(|| Error::InvalidArgument("operator csv must start with a '#' header".into()))?;
    let (mut lifted, mut shape, mut seed) = (None, None, 0u64);
    for field in header.split_whitespace() {
        match field.split_once('=') {
            Some(("kind", "dense")) => lifted = Some(false),
            Some(("kind", "lifted")) => lifted = Some(true),
            Some(("shape", s)) => shape = Some(parse_shape(s)?),
            Some(("seed", s)) => seed = s.parse().map_err(|_| Error::InvalidArgument(format!("bad seed '{s}'")))?,
            _ => return Err(Error::InvalidArgument(format!("unknown header field '{field}'"))),
        }
    }
    let lifted = lifted.ok_or_else(|| Error::InvalidArgument("missing kind".into()))?;
    let shape = shape.ok_or_else(|| Error::InvalidArgument("missing shape".into()))?;
    let mut data = Vec::new();
    let mut n = None;
    let mut m = 0;
    for line in lines {
        let line = line.map_err(|e| io_err(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let row: Vec<f64> = line
            .split(',')
            .map(|c| c.trim().parse::<f64>().map_err(|_| Error::InvalidArgument(format!("bad number '{c}'"))))
            .collect::<Result<_>>()?;
        if *n.get_or_insert(row.len()) != row.len() {
            return Err(Error::InvalidArgument("ragged operator csv".into()));
        }
        data.extend(row);
        m += 1;
    }
    let rows = DMatrix::from_row_slice(m, n.unwrap_or(0), &data);
    build(lifted, rows, shape, seed, EnsembleSpec::explicit())
}
