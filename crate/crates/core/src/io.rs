//! Binary tensor and TT files, plus a plain-text tensor importer.
//!
//! Dense tensor file, all integers and scalars little-endian:
//!
//! ```text
//! "TTUTVTEN" | version: u32 = 1 | order: u32 | dims: order × u64 | payload: Π dims × f64
//! ```
//!
//! TT file:
//!
//! ```text
//! "TTUTVCOR" | version: u32 = 1 | d: u32 | ranks: (d+1) × u64 | dims: d × u64 | cores
//! ```
//!
//! Payloads are column-major (first index fastest), cores are stored in order.
//! Masks are ordinary tensor files holding `0.0` and `1.0`.

use std::fs;
use std::path::Path;

use crate::error::{ParseError, Result};
use crate::tensor::{DenseTensor, Shape};
use crate::tt::{TtCore, TtTensor};

pub const TENSOR_MAGIC: &[u8; 8] = b"TTUTVTEN";
pub const TT_MAGIC: &[u8; 8] = b"TTUTVCOR";
pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FileKind {
    Tensor,
    Tt,
}

/// Recognise a binary file by its magic; `None` for anything else.
pub fn detect(bytes: &[u8]) -> Option<FileKind> {
    match bytes.get(..8) {
        Some(m) if m == TENSOR_MAGIC => Some(FileKind::Tensor),
        Some(m) if m == TT_MAGIC => Some(FileKind::Tt),
        _ => None,
    }
}

pub fn encode_tensor(t: &DenseTensor) -> Vec<u8> {
    let mut out = Vec::with_capacity(16 + 8 * t.order() + 8 * t.numel());
    out.extend_from_slice(TENSOR_MAGIC);
    out.extend_from_slice(&FORMAT_VERSION.to_le_bytes());
    out.extend_from_slice(&(t.order() as u32).to_le_bytes());
    for &n in t.dims() {
        out.extend_from_slice(&(n as u64).to_le_bytes());
    }
    put_f64s(&mut out, t.as_slice());
    out
}

pub fn decode_tensor(bytes: &[u8]) -> std::result::Result<DenseTensor, ParseError> {
    let mut r = Reader::new(bytes);
    r.magic(TENSOR_MAGIC)?;
    r.version()?;
    let order_at = r.pos;
    let order = r.u32()? as usize;
    if order == 0 {
        return Err(ParseError::ZeroOrder { offset: order_at });
    }
    let dims = r.dims(order)?;
    let numel = checked_product(&dims).ok_or(ParseError::DimsOverflow { offset: order_at + 4 })?;
    let data = r.f64s(numel)?;
    r.finish()?;
    let shape = Shape::new(dims).map_err(|_| ParseError::DimsOverflow { offset: order_at + 4 })?;
    Ok(DenseTensor::from_vec(shape, data).expect("payload length checked"))
}

pub fn encode_tt(x: &TtTensor) -> Vec<u8> {
    let d = x.order();
    let mut out = Vec::with_capacity(16 + 16 * d + 8 + 8 * x.param_count());
    out.extend_from_slice(TT_MAGIC);
    out.extend_from_slice(&FORMAT_VERSION.to_le_bytes());
    out.extend_from_slice(&(d as u32).to_le_bytes());
    for r in x.ranks() {
        out.extend_from_slice(&(r as u64).to_le_bytes());
    }
    for n in x.dims() {
        out.extend_from_slice(&(n as u64).to_le_bytes());
    }
    for core in x.cores() {
        put_f64s(&mut out, core.as_slice());
    }
    out
}

pub fn decode_tt(bytes: &[u8]) -> std::result::Result<TtTensor, ParseError> {
    let mut r = Reader::new(bytes);
    r.magic(TT_MAGIC)?;
    r.version()?;
    let d_at = r.pos;
    let d = r.u32()? as usize;
    if d == 0 {
        return Err(ParseError::ZeroOrder { offset: d_at });
    }
    let ranks_at = r.pos;
    let ranks = r.u64s(d + 1)?;
    if ranks[0] != 1 || ranks[d] != 1 {
        return Err(ParseError::RankChain {
            offset: ranks_at,
            msg: format!("boundary ranks are {} and {}, expected 1", ranks[0], ranks[d]),
        });
    }
    if let Some(k) = ranks.iter().position(|&x| x == 0) {
        return Err(ParseError::RankChain {
            offset: ranks_at + 8 * k,
            msg: format!("rank r_{k} is 0"),
        });
    }
    let ranks = to_usizes(&ranks, ranks_at)?;
    let dims = r.dims(d)?;
    let mut cores = Vec::with_capacity(d);
    for k in 0..d {
        let len = checked_product(&[ranks[k], dims[k], ranks[k + 1]])
            .ok_or(ParseError::DimsOverflow { offset: ranks_at })?;
        let data = r.f64s(len)?;
        cores.push(TtCore::new(ranks[k], dims[k], ranks[k + 1], data).expect("sizes checked"));
    }
    r.finish()?;
    Ok(TtTensor::new(cores).expect("chain checked"))
}

pub fn write_tensor(path: impl AsRef<Path>, t: &DenseTensor) -> Result<()> {
    fs::write(path, encode_tensor(t))?;
    Ok(())
}

pub fn read_tensor(path: impl AsRef<Path>) -> Result<DenseTensor> {
    Ok(decode_tensor(&fs::read(path)?)?)
}

pub fn write_tt(path: impl AsRef<Path>, x: &TtTensor) -> Result<()> {
    fs::write(path, encode_tt(x))?;
    Ok(())
}

pub fn read_tt(path: impl AsRef<Path>) -> Result<TtTensor> {
    Ok(decode_tt(&fs::read(path)?)?)
}

/// Parse the text format: a `dims n_1 n_2 ...` header line followed by one
/// value per line in column-major order. Blank lines and `#` comments are skipped.
pub fn parse_text_tensor(text: &str) -> std::result::Result<DenseTensor, ParseError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (hline, header) = lines.next().ok_or(ParseError::Text {
        line: 1,
        msg: "missing dims header".into(),
    })?;
    let mut words = header.split_whitespace();
    if words.next() != Some("dims") {
        return Err(ParseError::Text {
            line: hline,
            msg: "header must start with `dims`".into(),
        });
    }
    let dims = words
        .map(|w| w.parse::<usize>())
        .collect::<std::result::Result<Vec<_>, _>>()
        .map_err(|e| ParseError::Text {
            line: hline,
            msg: format!("bad dimension: {e}"),
        })?;
    let shape = Shape::new(dims).map_err(|e| ParseError::Text {
        line: hline,
        msg: e.to_string(),
    })?;
    let mut data = Vec::with_capacity(shape.numel());
    for (line, l) in lines {
        let v = l.parse::<f64>().map_err(|e| ParseError::Text {
            line,
            msg: format!("bad value {l:?}: {e}"),
        })?;
        if data.len() == shape.numel() {
            return Err(ParseError::Text {
                line,
                msg: format!("more than {} values", shape.numel()),
            });
        }
        data.push(v);
    }
    if data.len() != shape.numel() {
        return Err(ParseError::Text {
            line: text.lines().count(),
            msg: format!("expected {} values, found {}", shape.numel(), data.len()),
        });
    }
    Ok(DenseTensor::from_vec(shape, data).expect("length checked"))
}

pub fn read_text_tensor(path: impl AsRef<Path>) -> Result<DenseTensor> {
    Ok(parse_text_tensor(&fs::read_to_string(path)?)?)
}

/// Binary tensor file if the magic matches, otherwise the text format.
pub fn read_tensor_any(path: impl AsRef<Path>) -> Result<DenseTensor> {
    let bytes = fs::read(path)?;
    if detect(&bytes).is_some() {
        return Ok(decode_tensor(&bytes)?);
    }
    match std::str::from_utf8(&bytes) {
        Ok(text) => Ok(parse_text_tensor(text)?),
        Err(_) => Ok(decode_tensor(&bytes)?),
    }
}

fn put_f64s(out: &mut Vec<u8>, xs: &[f64]) {
    for x in xs {
        out.extend_from_slice(&x.to_le_bytes());
    }
}

fn checked_product(xs: &[usize]) -> Option<usize> {
    xs.iter().try_fold(1usize, |acc, &x| acc.checked_mul(x))
}

fn to_usizes(xs: &[u64], at: usize) -> std::result::Result<Vec<usize>, ParseError> {
    xs.iter()
        .map(|&x| usize::try_from(x).map_err(|_| ParseError::DimsOverflow { offset: at }))
        .collect()
}

struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn new(bytes: &'a [u8]) -> Self {
        Self { bytes, pos: 0 }
    }

    fn take(&mut self, n: usize) -> std::result::Result<&'a [u8], ParseError> {
        let left = self.bytes.len() - self.pos;
        if left < n {
            return Err(ParseError::Truncated {
                offset: self.pos,
                expected: n,
                actual: left,
            });
        }
        let s = &self.bytes[self.pos..self.pos + n];
        self.pos += n;
        Ok(s)
    }

    fn magic(&mut self, want: &[u8; 8]) -> std::result::Result<(), ParseError> {
        let found = &self.bytes[..self.bytes.len().min(8)];
        if found != want {
            return Err(ParseError::BadMagic {
                offset: 0,
                expected: String::from_utf8_lossy(want).into_owned(),
                found: String::from_utf8_lossy(found).into_owned(),
            });
        }
        self.pos = 8;
        Ok(())
    }

    fn version(&mut self) -> std::result::Result<(), ParseError> {
        let at = self.pos;
        let v = self.u32()?;
        if v != FORMAT_VERSION {
            return Err(ParseError::UnsupportedVersion {
                offset: at,
                version: v,
            });
        }
        Ok(())
    }

    fn u32(&mut self) -> std::result::Result<u32, ParseError> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }

    fn u64s(&mut self, n: usize) -> std::result::Result<Vec<u64>, ParseError> {
        let raw = self.take(n.checked_mul(8).ok_or(ParseError::DimsOverflow { offset: self.pos })?)?;
        Ok(raw
            .chunks_exact(8)
            .map(|c| u64::from_le_bytes(c.try_into().unwrap()))
            .collect())
    }

    fn dims(&mut self, n: usize) -> std::result::Result<Vec<usize>, ParseError> {
        let at = self.pos;
        let raw = self.u64s(n)?;
        if let Some(k) = raw.iter().position(|&x| x == 0) {
            return Err(ParseError::ZeroDim { offset: at + 8 * k });
        }
        let dims = to_usizes(&raw, at)?;
        checked_product(&dims).ok_or(ParseError::DimsOverflow { offset: at })?;
        Ok(dims)
    }

    fn f64s(&mut self, n: usize) -> std::result::Result<Vec<f64>, ParseError> {
        let bytes = n.checked_mul(8).ok_or(ParseError::DimsOverflow { offset: self.pos })?;
        let raw = self.take(bytes)?;
        Ok(raw
            .chunks_exact(8)
            .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
            .collect())
    }

    fn finish(&self) -> std::result::Result<(), ParseError> {
        let extra = self.bytes.len() - self.pos;
        if extra > 0 {
            return Err(ParseError::TrailingBytes {
                offset: self.pos,
                extra,
            });
        }
        Ok(())
    }
}
