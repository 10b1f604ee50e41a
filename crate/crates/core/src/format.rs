//! Self-describing pattern files: one JSON header line, then the payload.
//!
//! Payload layouts: a single `{0,1}` string for binary sequences, one
//! `{0,1}` line per row for arrays, and whitespace-separated decimal codes
//! for sequences over larger alphabets. Big integers are decimal strings.

/// Serde adapter storing a `BigUint` as a decimal string.
pub mod big {
    use num_bigint::BigUint;
    use serde::{de::Error as _, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_str_radix(10))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigUint, D::Error> {
        let s = String::deserialize(d)?;
        BigUint::parse_bytes(s.as_bytes(), 10).ok_or_else(|| D::Error::custom(format!("bad integer {s:?}")))
    }
}

use std::io::{BufRead, Write};

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::bitmat::BinaryMatrix;
use crate::error::{Error, Result};
use crate::qary::MixedAlphabet;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PatternKind {
    Rps1d,
    Rpa2d,
    Rank2d,
    QaryTa,
    QaryTb,
    Crps,
    Exact,
    ExactQ,
}

impl PatternKind {
    pub fn is_array(self) -> bool {
        matches!(self, PatternKind::Rpa2d | PatternKind::Rank2d)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Layout {
    Bits,
    Rows,
    Symbols,
    /// Parameters only; windows are generated on demand.
    None,
}

/// The materialized part of an array: `rows x cols` entries starting at (row0, col0).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Region {
    #[serde(with = "big")]
    pub row0: BigUint,
    #[serde(with = "big")]
    pub col0: BigUint,
    pub rows: usize,
    pub cols: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Header {
    #[serde(rename = "type")]
    pub kind: PatternKind,
    /// Window length, or window height for arrays.
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n2: Option<usize>,
    pub d: usize,
    pub params: serde_json::Value,
    pub alphabet: MixedAlphabet,
    pub cyclic: bool,
    pub layout: Layout,
    /// Number of payload symbols (sequences) or rows (arrays).
    pub length: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub region: Option<Region>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Payload {
    Bits(Vec<u8>),
    Rows(BinaryMatrix),
    Symbols(Vec<u64>),
    Empty,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PatternFile {
    pub header: Header,
    pub payload: Payload,
}

fn bit_string(bits: &[u8]) -> String {
    bits.iter().map(|&b| char::from(b'0' + b)).collect()
}

/// Parses a `{0,1}` string, ignoring whitespace.
pub fn parse_bits(s: &str) -> Result<Vec<u8>> {
    s.chars()
        .filter(|c| !c.is_whitespace())
        .map(|c| match c {
            '0' => Ok(0),
            '1' => Ok(1),
            _ => Err(Error::Parse(format!("unexpected character {c:?} in bit string"))),
        })
        .collect()
}

pub fn write_pattern<W: Write>(mut w: W, file: &PatternFile) -> Result<()> {
    serde_json::to_writer(&mut w, &file.header)?;
    writeln!(w)?;
    match &file.payload {
        Payload::Bits(bits) => writeln!(w, "{}", bit_string(bits))?,
        Payload::Rows(m) => {
            for r in 0..m.rows() {
                writeln!(w, "{}", bit_string(&m.row_bits(r)))?;
            }
        }
        Payload::Symbols(s) => {
            let line: Vec<String> = s.iter().map(u64::to_string).collect();
            writeln!(w, "{}", line.join(" "))?;
        }
        Payload::Empty => {}
    }
    Ok(())
}

pub fn read_pattern<R: BufRead>(r: R) -> Result<PatternFile> {
    let mut lines = r.lines();
    let header_line = loop {
        match lines.next() {
            Some(line) => {
                let line = line?;
                if !line.trim().is_empty() {
                    break line;
                }
            }
            None => return Err(Error::Parse("empty pattern file".into())),
        }
    };
    let header: Header = serde_json::from_str(&header_line)?;
    let body: Vec<String> = lines
        .collect::<std::io::Result<Vec<_>>>()?
        .into_iter()
        .filter(|l| !l.trim().is_empty())
        .collect();
    let payload = match header.layout {
        Layout::None => Payload::Empty,
        Layout::Bits => Payload::Bits(parse_bits(&body.concat())?),
        Layout::Symbols => Payload::Symbols(
            body.iter()
                .flat_map(|l| l.split_whitespace())
                .map(|t| t.parse::<u64>().map_err(|e| Error::Parse(format!("bad symbol {t:?}: {e}"))))
                .collect::<Result<_>>()?,
        ),
        Layout::Rows => {
            let rows = body.iter().map(|l| parse_bits(l)).collect::<Result<Vec<_>>>()?;
            Payload::Rows(BinaryMatrix::from_rows(&rows)?)
        }
    };
    let found = match &payload {
        Payload::Bits(b) => b.len() as u64,
        Payload::Symbols(s) => s.len() as u64,
        Payload::Rows(m) => m.rows() as u64,
        Payload::Empty => header.length,
    };
    if found != header.length {
        return Err(Error::Parse(format!("header announces {} entries, payload has {found}", header.length)));
    }
    if let Payload::Symbols(s) = &payload {
        if let Some(bad) = s.iter().find(|&&c| c >= header.alphabet.size()) {
            return Err(Error::Parse(format!("symbol {bad} outside the alphabet")));
        }
    }
    Ok(PatternFile { header, payload })
}

/// Reads a raw window: lines of `{0,1}`, skipping blank lines and a leading JSON header.
pub fn parse_window(text: &str) -> Result<Vec<Vec<u8>>> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('{'))
        .map(parse_bits)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn header(layout: Layout, length: u64) -> Header {
        Header {
            kind: PatternKind::Exact,
            n: 4,
            n2: None,
            d: 2,
            params: serde_json::json!({"n": 4, "d": 2}),
            alphabet: MixedAlphabet::Field { q: 2 },
            cyclic: false,
            layout,
            length,
            region: None,
        }
    }

    fn round_trip(file: &PatternFile) -> PatternFile {
        let mut buf = Vec::new();
        write_pattern(&mut buf, file).unwrap();
        read_pattern(buf.as_slice()).unwrap()
    }

    #[test]
    fn bits_round_trip() {
        let file = PatternFile {
            header: header(Layout::Bits, 7),
            payload: Payload::Bits(vec![0, 0, 0, 1, 0, 0, 0]),
        };
        assert_eq!(round_trip(&file), file);
    }

    #[test]
    fn rows_and_symbols_round_trip() {
        let mut h = header(Layout::Rows, 2);
        h.kind = PatternKind::Rpa2d;
        h.n2 = Some(3);
        h.region = Some(Region {
            row0: BigUint::from(10u32).pow(30),
            col0: BigUint::from(5u32),
            rows: 2,
            cols: 3,
        });
        let file = PatternFile {
            header: h,
            payload: Payload::Rows(BinaryMatrix::from_rows(&[vec![1, 0, 1], vec![0, 1, 1]]).unwrap()),
        };
        assert_eq!(round_trip(&file), file);

        let mut h = header(Layout::Symbols, 4);
        h.alphabet = MixedAlphabet::Relabeled { q: 4 };
        let file = PatternFile {
            header: h,
            payload: Payload::Symbols(vec![0, 7, 3, 4]),
        };
        assert_eq!(round_trip(&file), file);
    }

    #[test]
    fn rejects_bad_payloads() {
        let h = serde_json::to_string(&header(Layout::Bits, 3)).unwrap();
        assert!(read_pattern(format!("{h}\n0102\n").as_bytes()).is_err());
        assert!(read_pattern(format!("{h}\n01\n").as_bytes()).is_err());
        assert!(read_pattern("".as_bytes()).is_err());
        let h = serde_json::to_string(&header(Layout::Symbols, 1)).unwrap();
        assert!(read_pattern(format!("{h}\n9\n").as_bytes()).is_err());
    }

    #[test]
    fn window_text() {
        assert_eq!(parse_window("{\"x\":1}\n01 1\n\n110\n").unwrap(), vec![vec![0, 1, 1], vec![1, 1, 0]]);
    }
}
