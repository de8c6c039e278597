//! GridField persistence.
//!
//! Binary layout, all values little-endian:
//!
//! | offset | type | content |
//! |--------|------|---------|
//! | 0 | `[u8; 4]` | magic `MLGF` |
//! | 4 | `u32` | format version (1) |
//! | 8 | `u32` | number of axes `d` |
//! | 12 | `d × 24` bytes | per axis: `u8` variable index (0..3 = x^ν, 4..7 = p_ν), `u8` periodic flag, `u16` zero, `u32` point count, `f64` min, `f64` extent |
//! | … | `8 × f64` | base point `x^0..x^3, p_0..p_3` |
//! | … | `f64` | time stamp |
//! | … | `u64` | sample count `N` |
//! | … | `N × 32 × f64` | samples; per sample the 16 entries in row-major order, each as `(re, im)` |
//!
//! Sample order is row-major over the axes (first axis slowest). Values are
//! always written as `f64` whatever the in-memory precision.

use std::io::{Read, Write};

use num_complex::Complex;

use super::{Axis, GridField, GridSpec, PhasePoint, Var};
use crate::clifford::ComplexMat4;
use crate::error::{Error, Result};
use crate::scalar::Real;

pub const GRID_MAGIC: [u8; 4] = *b"MLGF";
const VERSION: u32 = 1;

fn io_err(e: std::io::Error) -> Error {
    Error::Format(e.to_string())
}

pub fn write_grid_binary<T: Real, W: Write>(gf: &GridField<T>, mut w: W) -> Result<()> {
    let mut buf = Vec::with_capacity(64 + gf.samples.len() * 256);
    buf.extend_from_slice(&GRID_MAGIC);
    buf.extend_from_slice(&VERSION.to_le_bytes());
    buf.extend_from_slice(&(gf.spec.axes.len() as u32).to_le_bytes());
    for a in &gf.spec.axes {
        buf.push(a.var.index() as u8);
        buf.push(a.periodic as u8);
        buf.extend_from_slice(&0u16.to_le_bytes());
        buf.extend_from_slice(&(a.n as u32).to_le_bytes());
        buf.extend_from_slice(&a.min.as_f64().to_le_bytes());
        buf.extend_from_slice(&a.extent.as_f64().to_le_bytes());
    }
    for v in gf.spec.base.as_array() {
        buf.extend_from_slice(&v.as_f64().to_le_bytes());
    }
    buf.extend_from_slice(&gf.time.as_f64().to_le_bytes());
    buf.extend_from_slice(&(gf.samples.len() as u64).to_le_bytes());
    for m in &gf.samples {
        for row in &m.entries {
            for z in row {
                buf.extend_from_slice(&z.re.as_f64().to_le_bytes());
                buf.extend_from_slice(&z.im.as_f64().to_le_bytes());
            }
        }
    }
    w.write_all(&buf).map_err(io_err)
}

struct Cursor<'a> {
    data: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn take<const N: usize>(&mut self) -> Result<[u8; N]> {
        let end = self.pos + N;
        let slice = self
            .data
            .get(self.pos..end)
            .ok_or_else(|| Error::Format("truncated grid file".into()))?;
        self.pos = end;
        Ok(slice.try_into().unwrap())
    }
    fn u8(&mut self) -> Result<u8> {
        Ok(self.take::<1>()?[0])
    }
    fn u16(&mut self) -> Result<u16> {
        Ok(u16::from_le_bytes(self.take()?))
    }
    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take()?))
    }
    fn u64(&mut self) -> Result<u64> {
        Ok(u64::from_le_bytes(self.take()?))
    }
    fn f64(&mut self) -> Result<f64> {
        Ok(f64::from_le_bytes(self.take()?))
    }
}

pub fn read_grid_binary<T: Real, R: Read>(mut r: R) -> Result<GridField<T>> {
    let mut data = Vec::new();
    r.read_to_end(&mut data).map_err(io_err)?;
    let mut c = Cursor { data: &data, pos: 0 };
    if c.take::<4>()? != GRID_MAGIC {
        return Err(Error::Format("bad magic".into()));
    }
    let version = c.u32()?;
    if version != VERSION {
        return Err(Error::Format(format!("unsupported version {version}")));
    }
    let naxes = c.u32()? as usize;
    let mut axes = Vec::with_capacity(naxes);
    for _ in 0..naxes {
        let var = c.u8()? as usize;
        if var >= super::NVARS {
            return Err(Error::Format(format!("bad variable index {var}")));
        }
        let periodic = c.u8()? != 0;
        c.u16()?;
        let n = c.u32()? as usize;
        let min = T::of(c.f64()?);
        let extent = T::of(c.f64()?);
        axes.push(Axis {
            var: Var::from_index(var),
            min,
            extent,
            n,
            periodic,
        });
    }
    let mut base = [T::zero(); 8];
    for b in base.iter_mut() {
        *b = T::of(c.f64()?);
    }
    let time = T::of(c.f64()?);
    let count = c.u64()? as usize;
    let spec = GridSpec::new(
        axes,
        PhasePoint::new([base[0], base[1], base[2], base[3]], [base[4], base[5], base[6], base[7]]),
    )?;
    if count != spec.len() {
        return Err(Error::Format(format!(
            "sample count {count} does not match grid size {}",
            spec.len()
        )));
    }
    let mut samples = Vec::with_capacity(count);
    for _ in 0..count {
        let mut m = ComplexMat4::zero();
        for r in 0..4 {
            for col in 0..4 {
                let re = c.f64()?;
                let im = c.f64()?;
                m[(r, col)] = Complex::new(T::of(re), T::of(im));
            }
        }
        samples.push(m);
    }
    if c.pos != data.len() {
        return Err(Error::Format("trailing bytes after samples".into()));
    }
    GridField::new(spec, samples, time)
}

/// CSV with one row per sample: the grid indices followed by 32 reals
/// (`re00, im00, re01, …, im33`).
pub fn write_grid_csv<T: Real, W: Write>(gf: &GridField<T>, mut w: W) -> Result<()> {
    let mut out = String::new();
    let header: Vec<String> = (0..gf.spec.axes.len())
        .map(|d| format!("i{d}"))
        .chain((0..16).flat_map(|e| [format!("re{}{}", e / 4, e % 4), format!("im{}{}", e / 4, e % 4)]))
        .collect();
    out.push_str(&header.join(","));
    out.push('\n');
    for (flat, m) in gf.samples.iter().enumerate() {
        let idx = gf.spec.unflatten(flat);
        let mut fields: Vec<String> = idx.iter().map(|i| i.to_string()).collect();
        for row in &m.entries {
            for z in row {
                fields.push(format!("{}", z.re.as_f64()));
                fields.push(format!("{}", z.im.as_f64()));
            }
        }
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    w.write_all(out.as_bytes()).map_err(io_err)
}
