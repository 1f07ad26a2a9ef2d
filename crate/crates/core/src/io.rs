//! Binary field dumps.
//!
//! Layout (little-endian): magic `HLAB1`, `u32` dimension, `u32` points per
//! axis, `f64` half width, `u8` space tag (0 physical, 1 frequency), then the
//! row-major samples as interleaved re/im `f64` pairs.

use crate::{CoreError, Field, Grid, Result, Space};
use num_complex::Complex64;
use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

const MAGIC: &[u8; 5] = b"HLAB1";

pub fn write_field(path: impl AsRef<Path>, field: &Field) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    w.write_all(MAGIC)?;
    w.write_all(&(field.grid().dim() as u32).to_le_bytes())?;
    w.write_all(&(field.grid().points_per_axis() as u32).to_le_bytes())?;
    w.write_all(&field.grid().half_width().to_le_bytes())?;
    let tag: u8 = match field.space() {
        Space::Physical => 0,
        Space::Frequency => 1,
    };
    w.write_all(&[tag])?;
    for z in field.data() {
        w.write_all(&z.re.to_le_bytes())?;
        w.write_all(&z.im.to_le_bytes())?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_field(path: impl AsRef<Path>) -> Result<Field> {
    let mut r = BufReader::new(File::open(path)?);
    let mut magic = [0u8; 5];
    r.read_exact(&mut magic)?;
    if &magic != MAGIC {
        return Err(CoreError::Format("bad magic, not a field dump".into()));
    }
    let mut u32buf = [0u8; 4];
    r.read_exact(&mut u32buf)?;
    let dim = u32::from_le_bytes(u32buf) as usize;
    r.read_exact(&mut u32buf)?;
    let m = u32::from_le_bytes(u32buf) as usize;
    let mut f64buf = [0u8; 8];
    r.read_exact(&mut f64buf)?;
    let half_width = f64::from_le_bytes(f64buf);
    let mut tag = [0u8; 1];
    r.read_exact(&mut tag)?;
    let space = match tag[0] {
        0 => Space::Physical,
        1 => Space::Frequency,
        t => return Err(CoreError::Format(format!("unknown space tag {t}"))),
    };
    let grid = Grid::new(dim, m, half_width)?;
    let mut data = Vec::with_capacity(grid.total_points());
    for _ in 0..grid.total_points() {
        r.read_exact(&mut f64buf)?;
        let re = f64::from_le_bytes(f64buf);
        r.read_exact(&mut f64buf)?;
        let im = f64::from_le_bytes(f64buf);
        data.push(Complex64::new(re, im));
    }
    // Trailing bytes mean the header lied about the size.
    let mut probe = [0u8; 1];
    if r.read(&mut probe)? != 0 {
        return Err(CoreError::Format("trailing bytes after sample data".into()));
    }
    Field::from_data(grid, space, data)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_bytes_exact() {
        let g = Grid::new(2, 8, 1.25).unwrap();
        let f = Field::from_fn(g, Space::Frequency, |xi| {
            Complex64::new(xi[0] * 3.0 - xi[1], xi[1].exp())
        });
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("probe.fld");
        write_field(&path, &f).unwrap();
        let back = read_field(&path).unwrap();
        assert_eq!(f, back);
    }

    #[test]
    fn rejects_garbage() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("junk.fld");
        std::fs::write(&path, b"not a field").unwrap();
        assert!(read_field(&path).is_err());
    }
}
