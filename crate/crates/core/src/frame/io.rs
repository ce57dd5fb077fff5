use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use num_complex::Complex64;

use super::grid::{Domain, Grid};
use crate::{Error, Result};

const MAGIC: &[u8; 4] = b"OTFS";
const VERSION: u16 = 1;

/// Binary container: magic, version (u16), N (u32), M (u32), domain tag (u8), then
/// row-major interleaved re/im as little-endian f64.
pub fn write_frame<D: Domain, W: Write>(frame: &Grid<D>, mut w: W) -> Result<()> {
    w.write_all(MAGIC)?;
    w.write_all(&VERSION.to_le_bytes())?;
    w.write_all(&(frame.rows() as u32).to_le_bytes())?;
    w.write_all(&(frame.cols() as u32).to_le_bytes())?;
    w.write_all(&[D::TAG])?;
    for z in frame.as_slice() {
        w.write_all(&z.re.to_le_bytes())?;
        w.write_all(&z.im.to_le_bytes())?;
    }
    Ok(())
}

pub fn read_frame<D: Domain, R: Read>(mut r: R) -> Result<Grid<D>> {
    let mut magic = [0u8; 4];
    r.read_exact(&mut magic)?;
    if &magic != MAGIC {
        return Err(Error::Config("not an OTFS frame file".into()));
    }
    let mut b2 = [0u8; 2];
    r.read_exact(&mut b2)?;
    let version = u16::from_le_bytes(b2);
    if version != VERSION {
        return Err(Error::Config(format!("unsupported frame file version {version}")));
    }
    let mut b4 = [0u8; 4];
    r.read_exact(&mut b4)?;
    let rows = u32::from_le_bytes(b4) as usize;
    r.read_exact(&mut b4)?;
    let cols = u32::from_le_bytes(b4) as usize;
    let mut tag = [0u8; 1];
    r.read_exact(&mut tag)?;
    if tag[0] != D::TAG {
        return Err(Error::Config(format!(
            "frame file holds domain tag {}, expected {} ({})",
            tag[0],
            D::TAG,
            D::NAME
        )));
    }
    let mut data = Vec::with_capacity(rows * cols);
    let mut b8 = [0u8; 8];
    for _ in 0..rows * cols {
        r.read_exact(&mut b8)?;
        let re = f64::from_le_bytes(b8);
        r.read_exact(&mut b8)?;
        let im = f64::from_le_bytes(b8);
        data.push(Complex64::new(re, im));
    }
    Grid::from_vec(rows, cols, data)
}

pub fn save_frame<D: Domain>(frame: &Grid<D>, path: impl AsRef<Path>) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    write_frame(frame, &mut w)?;
    w.flush()?;
    Ok(())
}

pub fn load_frame<D: Domain>(path: impl AsRef<Path>) -> Result<Grid<D>> {
    read_frame(BufReader::new(File::open(path)?))
}

/// One `row,col,re,im` line per entry.
pub fn write_frame_csv<D: Domain, W: Write>(frame: &Grid<D>, mut w: W) -> Result<()> {
    writeln!(w, "row,col,re,im")?;
    for r in 0..frame.rows() {
        for c in 0..frame.cols() {
            let z = frame[(r, c)];
            writeln!(w, "{r},{c},{},{}", z.re, z.im)?;
        }
    }
    Ok(())
}
