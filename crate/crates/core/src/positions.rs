use std::io::Write;

use crate::error::{Error, Result};

/// `d x n` coordinate matrix; column `i` is the position of vertex `i`.
///
/// Stored column-major so each vertex's coordinates are contiguous.
#[derive(Debug, Clone, PartialEq)]
pub struct Positions {
    dim: usize,
    n: usize,
    coords: Vec<f64>,
}

impl Positions {
    pub fn zeros(dim: usize, n: usize) -> Self {
        Self {
            dim,
            n,
            coords: vec![0.0; dim * n],
        }
    }

    /// Build from column-major storage (`coords[i * dim + k]` is coordinate `k` of vertex `i`).
    pub fn from_columns(dim: usize, coords: Vec<f64>) -> Result<Self> {
        if dim == 0 || !coords.len().is_multiple_of(dim) {
            return Err(Error::InvalidParameter(format!(
                "{} coordinates do not split into columns of dimension {dim}",
                coords.len()
            )));
        }
        Ok(Self {
            dim,
            n: coords.len() / dim,
            coords,
        })
    }

    /// Build from `dim` rows of length `n`.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let dim = rows.len();
        let n = rows.first().map_or(0, Vec::len);
        if dim == 0 || rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidParameter(
                "rows must be non-empty and of equal length".into(),
            ));
        }
        let mut p = Self::zeros(dim, n);
        for (k, row) in rows.iter().enumerate() {
            for (i, &x) in row.iter().enumerate() {
                p.coords[i * dim + k] = x;
            }
        }
        Ok(p)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn point_mut(&mut self, i: usize) -> &mut [f64] {
        &mut self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.coords
    }

    pub fn as_mut_slice(&mut self) -> &mut [f64] {
        &mut self.coords
    }

    pub fn row(&self, k: usize) -> Vec<f64> {
        (0..self.n).map(|i| self.coords[i * self.dim + k]).collect()
    }

    pub fn is_finite(&self) -> bool {
        self.coords.iter().all(|x| x.is_finite())
    }

    /// Index of the first vertex with a non-finite coordinate.
    pub fn first_non_finite(&self) -> Option<usize> {
        self.coords
            .iter()
            .position(|x| !x.is_finite())
            .map(|idx| idx / self.dim)
    }

    pub fn mean(&self) -> Vec<f64> {
        let mut mu = vec![0.0; self.dim];
        for i in 0..self.n {
            for (m, x) in mu.iter_mut().zip(self.point(i)) {
                *m += x;
            }
        }
        if self.n > 0 {
            mu.iter_mut().for_each(|m| *m /= self.n as f64);
        }
        mu
    }

    /// `(1/n) sum_i ||p_i||^2`.
    pub fn mean_square_radius(&self) -> f64 {
        if self.n == 0 {
            return 0.0;
        }
        self.coords.iter().map(|x| x * x).sum::<f64>() / self.n as f64
    }

    /// Write `vertex,x0,...,x{d-1},radial` rows with 17 significant digits.
    /// Each entry of `comments` becomes a leading `# ` line.
    pub fn write_csv<W: Write>(&self, comments: &[String], out: W) -> Result<()> {
        self.write_csv_labeled(comments, None, out)
    }

    /// [`Positions::write_csv`] with `labels[i]` in the vertex column instead of `i`.
    pub fn write_csv_labeled<W: Write>(
        &self,
        comments: &[String],
        labels: Option<&[u64]>,
        mut out: W,
    ) -> Result<()> {
        if let Some(l) = labels {
            if l.len() != self.n {
                return Err(Error::InvalidParameter(format!(
                    "{} labels for {} vertices",
                    l.len(),
                    self.n
                )));
            }
        }
        for c in comments {
            writeln!(out, "# {c}")?;
        }
        let mut header = String::from("vertex");
        for k in 0..self.dim {
            header.push_str(&format!(",x{k}"));
        }
        header.push_str(",radial");
        writeln!(out, "{header}")?;
        for i in 0..self.n {
            let p = self.point(i);
            let mut line = match labels {
                Some(l) => l[i].to_string(),
                None => i.to_string(),
            };
            for x in p {
                line.push_str(&format!(",{x:.16e}"));
            }
            let r = p.iter().map(|x| x * x).sum::<f64>().sqrt();
            line.push_str(&format!(",{r:.16e}"));
            writeln!(out, "{line}")?;
        }
        out.flush()?;
        Ok(())
    }

    /// Parse the CSV produced by [`Positions::write_csv`].
    pub fn read_csv(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty() && !l.starts_with('#'));
        let (hline, header) = lines.next().ok_or(Error::Parse {
            line: 1,
            message: "missing header".into(),
        })?;
        let cols: Vec<&str> = header.split(',').collect();
        if cols.len() < 3 || cols[0] != "vertex" || *cols.last().unwrap() != "radial" {
            return Err(Error::Parse {
                line: hline + 1,
                message: format!("unexpected header {header:?}"),
            });
        }
        let dim = cols.len() - 2;
        let mut coords = Vec::new();
        for (idx, line) in lines {
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != dim + 2 {
                return Err(Error::Parse {
                    line: idx + 1,
                    message: "wrong number of fields".into(),
                });
            }
            for f in &fields[1..=dim] {
                coords.push(f.trim().parse::<f64>().map_err(|e| Error::Parse {
                    line: idx + 1,
                    message: e.to_string(),
                })?);
            }
        }
        Self::from_columns(dim, coords)
    }
}
