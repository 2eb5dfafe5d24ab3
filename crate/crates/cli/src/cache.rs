//! On-disk report cache.
//!
//! A record is the magic `RKSV1` followed by length-prefixed sections:
//!
//! ```text
//! "RKSV1"
//! u32 section count
//! per section: u8 tag length, tag bytes, u64 payload length, payload
//! ```
//!
//! Integers are little-endian. The `report` section holds the JSON report.
//! The optional `bases` section holds RREF bases of the realized module,
//! block by block: `u32 blocks`, then per block two matrices (numerator,
//! coset representatives), each `u32 rows, u32 cols` followed by every entry
//! as a `u16`-length-prefixed decimal string.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use ribbon_koszul::linalg::Matrix;
use ribbon_koszul::tensor::BlockedSubquotient;
use ribbon_koszul::Field;
use sha2::{Digest, Sha256};

const MAGIC: &[u8; 5] = b"RKSV1";

/// Bases of one realized module, entries already rendered as strings.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct StoredBases {
    pub blocks: Vec<(StoredMatrix, StoredMatrix)>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct StoredMatrix {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<String>,
}

impl StoredMatrix {
    fn of<F: Field>(m: &Matrix<F>) -> Self {
        StoredMatrix { rows: m.rows(), cols: m.cols(), entries: m.row_iter().flatten().map(|x| x.to_string()).collect() }
    }
}

impl StoredBases {
    pub fn of<F: Field>(sq: &BlockedSubquotient<F>) -> Self {
        let blocks = sq
            .parts
            .iter()
            .map(|p| (StoredMatrix::of(p.numerator().basis()), StoredMatrix::of(p.representatives())))
            .collect();
        StoredBases { blocks }
    }

    /// Dimension recorded by the coset representatives.
    pub fn dim(&self) -> usize {
        self.blocks.iter().map(|(_, r)| r.rows).sum()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Record {
    pub report: Vec<u8>,
    pub bases: Option<StoredBases>,
}

fn put_u32(out: &mut Vec<u8>, v: usize) {
    out.extend_from_slice(&(v as u32).to_le_bytes());
}

fn put_matrix(out: &mut Vec<u8>, m: &StoredMatrix) {
    put_u32(out, m.rows);
    put_u32(out, m.cols);
    for e in &m.entries {
        out.extend_from_slice(&(e.len() as u16).to_le_bytes());
        out.extend_from_slice(e.as_bytes());
    }
}

impl Record {
    pub fn encode(&self) -> Vec<u8> {
        let mut sections: Vec<(&str, Vec<u8>)> = vec![("report", self.report.clone())];
        if let Some(b) = &self.bases {
            let mut payload = Vec::new();
            put_u32(&mut payload, b.blocks.len());
            for (n, r) in &b.blocks {
                put_matrix(&mut payload, n);
                put_matrix(&mut payload, r);
            }
            sections.push(("bases", payload));
        }
        let mut out = MAGIC.to_vec();
        put_u32(&mut out, sections.len());
        for (tag, payload) in sections {
            out.push(tag.len() as u8);
            out.extend_from_slice(tag.as_bytes());
            out.extend_from_slice(&(payload.len() as u64).to_le_bytes());
            out.extend_from_slice(&payload);
        }
        out
    }

    pub fn decode(bytes: &[u8]) -> Option<Record> {
        let mut r = Reader { bytes, at: 0 };
        if r.take(5)? != MAGIC {
            return None;
        }
        let count = r.u32()?;
        let mut report = None;
        let mut bases = None;
        for _ in 0..count {
            let tag_len = r.take(1)?[0] as usize;
            let tag = std::str::from_utf8(r.take(tag_len)?).ok()?.to_string();
            let len = u64::from_le_bytes(r.take(8)?.try_into().ok()?) as usize;
            let payload = r.take(len)?;
            match tag.as_str() {
                "report" => report = Some(payload.to_vec()),
                "bases" => bases = Some(decode_bases(payload)?),
                _ => {}
            }
        }
        if r.at != bytes.len() {
            return None;
        }
        Some(Record { report: report?, bases })
    }
}

struct Reader<'a> {
    bytes: &'a [u8],
    at: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize) -> Option<&'a [u8]> {
        let s = self.bytes.get(self.at..self.at.checked_add(n)?)?;
        self.at += n;
        Some(s)
    }

    fn u32(&mut self) -> Option<usize> {
        Some(u32::from_le_bytes(self.take(4)?.try_into().ok()?) as usize)
    }

    fn matrix(&mut self) -> Option<StoredMatrix> {
        let rows = self.u32()?;
        let cols = self.u32()?;
        let mut entries = Vec::with_capacity(rows.saturating_mul(cols).min(1 << 20));
        for _ in 0..rows * cols {
            let len = u16::from_le_bytes(self.take(2)?.try_into().ok()?) as usize;
            entries.push(std::str::from_utf8(self.take(len)?).ok()?.to_string());
        }
        Some(StoredMatrix { rows, cols, entries })
    }
}

fn decode_bases(payload: &[u8]) -> Option<StoredBases> {
    let mut r = Reader { bytes: payload, at: 0 };
    let n = r.u32()?;
    let mut blocks = Vec::with_capacity(n.min(1 << 16));
    for _ in 0..n {
        blocks.push((r.matrix()?, r.matrix()?));
    }
    (r.at == payload.len()).then_some(StoredBases { blocks })
}

/// Hex SHA-256 of a canonical descriptor string.
pub fn key(descriptor: &str) -> String {
    hex::encode(Sha256::digest(descriptor.as_bytes()))
}

pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Cache { dir: dir.into() }
    }

    fn path(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}.rksv"))
    }

    /// A stored record, or `None` when absent or unreadable.
    pub fn load(&self, key: &str) -> Option<Record> {
        Record::decode(&fs::read(self.path(key)).ok()?)
    }

    /// Writes through a temporary file in the cache directory, then renames.
    pub fn store(&self, key: &str, record: &Record) -> std::io::Result<()> {
        fs::create_dir_all(&self.dir)?;
        let mut tmp = tempfile::NamedTempFile::new_in(&self.dir)?;
        tmp.write_all(&record.encode())?;
        tmp.flush()?;
        tmp.persist(self.path(key)).map_err(|e| e.error)?;
        Ok(())
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn record_round_trip() {
        let m = StoredMatrix { rows: 1, cols: 2, entries: vec!["1".into(), "-3/2".into()] };
        let rec = Record { report: b"{\"dim\":1}".to_vec(), bases: Some(StoredBases { blocks: vec![(m.clone(), m)] }) };
        let bytes = rec.encode();
        assert_eq!(&bytes[..5], b"RKSV1");
        assert_eq!(Record::decode(&bytes), Some(rec));
        assert_eq!(Record::decode(&bytes[..bytes.len() - 1]), None);
    }
}
