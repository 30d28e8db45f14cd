//! Portable binary dump for matrices and vectors.
//!
//! Layout (all little-endian):
//!
//! ```text
//! offset  size  field
//! 0       8     magic  b"ATSLDMP1"
//! 8       8     rows   u64
//! 16      8     cols   u64
//! 24      8*r*c entries, f64, row-major
//! ```
//!
//! Vectors are written as `n x 1` matrices.

use std::io::{Read, Write};

use thiserror::Error;

use crate::linalg::DenseMatrix;
use crate::scalar::Scalar;

pub const DUMP_MAGIC: [u8; 8] = *b"ATSLDMP1";

#[derive(Debug, Error)]
pub enum DumpError {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("bad magic {0:?}")]
    BadMagic([u8; 8]),
    #[error("invalid dump contents: {0}")]
    Invalid(String),
}

fn write_raw<W: Write>(w: &mut W, rows: usize, cols: usize, entries: impl Iterator<Item = f64>) -> Result<(), DumpError> {
    w.write_all(&DUMP_MAGIC)?;
    w.write_all(&(rows as u64).to_le_bytes())?;
    w.write_all(&(cols as u64).to_le_bytes())?;
    for v in entries {
        w.write_all(&v.to_le_bytes())?;
    }
    Ok(())
}

fn read_raw<R: Read>(r: &mut R) -> Result<(usize, usize, Vec<f64>), DumpError> {
    let mut word = [0u8; 8];
    r.read_exact(&mut word)?;
    if word != DUMP_MAGIC {
        return Err(DumpError::BadMagic(word));
    }
    r.read_exact(&mut word)?;
    let rows = u64::from_le_bytes(word) as usize;
    r.read_exact(&mut word)?;
    let cols = u64::from_le_bytes(word) as usize;
    let count = rows
        .checked_mul(cols)
        .ok_or_else(|| DumpError::Invalid(format!("{rows}x{cols} overflows")))?;
    let mut data = Vec::with_capacity(count.min(1 << 24));
    for _ in 0..count {
        r.read_exact(&mut word)?;
        data.push(f64::from_le_bytes(word));
    }
    Ok((rows, cols, data))
}

pub fn write_matrix<W: Write, T: Scalar>(w: &mut W, a: &DenseMatrix<T>) -> Result<(), DumpError> {
    write_raw(w, a.rows(), a.cols(), a.as_slice().iter().map(|v| v.as_f64()))
}

pub fn read_matrix<R: Read, T: Scalar>(r: &mut R) -> Result<DenseMatrix<T>, DumpError> {
    let (rows, cols, data) = read_raw(r)?;
    DenseMatrix::new(rows, cols, data.into_iter().map(T::lit).collect()).map_err(|e| DumpError::Invalid(e.to_string()))
}

pub fn write_vector<W: Write, T: Scalar>(w: &mut W, v: &[T]) -> Result<(), DumpError> {
    write_raw(w, v.len(), 1, v.iter().map(|x| x.as_f64()))
}

pub fn read_vector<R: Read, T: Scalar>(r: &mut R) -> Result<Vec<T>, DumpError> {
    let (rows, cols, data) = read_raw(r)?;
    if cols != 1 {
        return Err(DumpError::Invalid(format!("expected a column vector, got {rows}x{cols}")));
    }
    Ok(data.into_iter().map(T::lit).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn header_layout_is_fixed() {
        let a = DenseMatrix::from_rows(&[vec![1.0f64, 2.0]]).unwrap();
        let mut buf = Vec::new();
        write_matrix(&mut buf, &a).unwrap();
        assert_eq!(buf.len(), 24 + 16);
        assert_eq!(&buf[..8], b"ATSLDMP1");
        assert_eq!(&buf[8..16], &1u64.to_le_bytes());
        assert_eq!(&buf[16..24], &2u64.to_le_bytes());
        assert_eq!(&buf[24..32], &1.0f64.to_le_bytes());
        let back: DenseMatrix<f64> = read_matrix(&mut buf.as_slice()).unwrap();
        assert_eq!(back, a);
    }

    #[test]
    fn vector_and_errors() {
        let mut buf = Vec::new();
        write_vector(&mut buf, &[0.5f64, -3.0, 7.25]).unwrap();
        let v: Vec<f64> = read_vector(&mut buf.as_slice()).unwrap();
        assert_eq!(v, vec![0.5, -3.0, 7.25]);
        buf[0] = b'X';
        assert!(matches!(read_vector::<_, f64>(&mut buf.as_slice()), Err(DumpError::BadMagic(_))));
        let mut short = Vec::new();
        write_vector(&mut short, &[1.0f64, 2.0]).unwrap();
        short.truncate(30);
        assert!(matches!(read_vector::<_, f64>(&mut short.as_slice()), Err(DumpError::Io(_))));
    }
}
