//! Binary field dumps.
//!
//! Layout, all little-endian: 16-byte magic `MVACFLD1` padded with zeros,
//! `u32` spatial dimension, `u32` matrix size `n`, one `u32` node count per
//! axis, `f64` time, `f64` spacing, then the matrix entries node by node
//! (first axis fastest), each matrix row-major.

use std::io::{self, Read, Write};

use super::field::Field;

pub const MAGIC: &[u8; 8] = b"MVACFLD1";

pub fn write_field<W: Write>(mut w: W, f: &Field) -> io::Result<()> {
    let mut magic = [0u8; 16];
    magic[..8].copy_from_slice(MAGIC);
    w.write_all(&magic)?;
    w.write_all(&(f.grid.dim as u32).to_le_bytes())?;
    w.write_all(&(f.n as u32).to_le_bytes())?;
    for _ in 0..f.grid.dim {
        w.write_all(&(f.grid.nodes_per_side() as u32).to_le_bytes())?;
    }
    w.write_all(&f.t.to_le_bytes())?;
    w.write_all(&f.grid.h().to_le_bytes())?;
    let mut buf = Vec::with_capacity(f.data.len() * 8);
    for v in &f.data {
        buf.extend_from_slice(&v.to_le_bytes());
    }
    w.write_all(&buf)
}

/// Contents of a dump, without the boundary type (which the format does not record).
#[derive(Clone, Debug, PartialEq)]
pub struct FieldDump {
    pub dim: usize,
    pub n: usize,
    pub nodes: Vec<usize>,
    pub t: f64,
    pub h: f64,
    pub data: Vec<f64>,
}

pub fn read_field<R: Read>(mut r: R) -> io::Result<FieldDump> {
    let bad = |msg: &str| io::Error::new(io::ErrorKind::InvalidData, msg.to_string());
    let mut magic = [0u8; 16];
    r.read_exact(&mut magic)?;
    if &magic[..8] != MAGIC || magic[8..].iter().any(|&b| b != 0) {
        return Err(bad("bad magic"));
    }
    let mut u = [0u8; 4];
    let mut read_u32 = |r: &mut R| -> io::Result<usize> {
        r.read_exact(&mut u)?;
        Ok(u32::from_le_bytes(u) as usize)
    };
    let dim = read_u32(&mut r)?;
    let n = read_u32(&mut r)?;
    if !(1..=2).contains(&dim) || !(2..=4).contains(&n) {
        return Err(bad("unsupported dimensions"));
    }
    let nodes = (0..dim).map(|_| read_u32(&mut r)).collect::<io::Result<Vec<_>>>()?;
    let mut d = [0u8; 8];
    r.read_exact(&mut d)?;
    let t = f64::from_le_bytes(d);
    r.read_exact(&mut d)?;
    let h = f64::from_le_bytes(d);
    let count = nodes.iter().product::<usize>() * n * n;
    let mut bytes = vec![0u8; count * 8];
    r.read_exact(&mut bytes)?;
    let data = bytes.chunks_exact(8).map(|c| f64::from_le_bytes(c.try_into().unwrap())).collect();
    Ok(FieldDump { dim, n, nodes, t, h, data })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matgeo::Mat;
    use crate::solver::{Boundary, GridSpec};

    #[test]
    fn round_trip() {
        let g = GridSpec::new(2, 4, 2.0, Boundary::Dirichlet);
        let mut f = Field::from_fn(g, 2, |i, j, _| Mat::diag(&[i as f64, -(j as f64)]));
        f.t = 0.125;
        let mut buf = Vec::new();
        write_field(&mut buf, &f).unwrap();
        assert_eq!(buf.len(), 16 + 4 * 4 + 16 + 25 * 4 * 8);
        let d = read_field(&buf[..]).unwrap();
        assert_eq!((d.dim, d.n, d.nodes.clone(), d.t, d.h), (2, 2, vec![5, 5], 0.125, 0.5));
        assert_eq!(d.data, f.data);
        buf[0] = b'X';
        assert!(read_field(&buf[..]).is_err());
    }
}
