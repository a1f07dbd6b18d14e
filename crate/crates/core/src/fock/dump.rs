use std::io::{self, Read, Write};

use num_complex::Complex64;

use super::CMatrix;

/// Row-major little-endian `f64` pairs `(re, im)`, no header.
pub fn write_binary<W: Write>(m: &CMatrix, mut w: W) -> io::Result<()> {
    for r in 0..m.nrows() {
        for c in 0..m.ncols() {
            let z = m[(r, c)];
            w.write_all(&z.re.to_le_bytes())?;
            w.write_all(&z.im.to_le_bytes())?;
        }
    }
    Ok(())
}

pub fn read_binary<R: Read>(mut r: R, rows: usize, cols: usize) -> io::Result<CMatrix> {
    let mut m = CMatrix::zeros(rows, cols);
    let mut buf = [0u8; 8];
    for i in 0..rows {
        for j in 0..cols {
            r.read_exact(&mut buf)?;
            let re = f64::from_le_bytes(buf);
            r.read_exact(&mut buf)?;
            let im = f64::from_le_bytes(buf);
            m[(i, j)] = Complex64::new(re, im);
        }
    }
    Ok(m)
}

/// One row per line, entries `re im` with 17 significant digits.
pub fn write_text<W: Write>(m: &CMatrix, mut w: W) -> io::Result<()> {
    for r in 0..m.nrows() {
        let row: Vec<String> = (0..m.ncols())
            .map(|c| {
                let z = m[(r, c)];
                format!("{:.16e} {:.16e}", z.re, z.im)
            })
            .collect();
        writeln!(w, "{}", row.join(" "))?;
    }
    Ok(())
}
