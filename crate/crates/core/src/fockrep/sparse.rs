use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::scalar::Scalar;

/// A sparse matrix over [`Scalar`] with explicit zeros never stored.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    entries: BTreeMap<(usize, usize), Scalar>,
}

impl SparseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        SparseMatrix { rows, cols, entries: BTreeMap::new() }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for k in 0..n {
            m.entries.insert((k, k), Scalar::one());
        }
        m
    }

    pub fn from_triplets(rows: usize, cols: usize, triplets: impl IntoIterator<Item = (usize, usize, Scalar)>) -> Self {
        let mut m = Self::zeros(rows, cols);
        for (r, c, v) in triplets {
            m.add_at(r, c, v);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, r: usize, c: usize) -> Scalar {
        self.entries.get(&(r, c)).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn add_at(&mut self, r: usize, c: usize, v: Scalar) {
        assert!(r < self.rows && c < self.cols, "entry ({r}, {c}) outside a {}×{} matrix", self.rows, self.cols);
        if v.is_zero() {
            return;
        }
        let sum = match self.entries.remove(&(r, c)) {
            Some(old) => &old + &v,
            None => v,
        };
        if !sum.is_zero() {
            self.entries.insert((r, c), sum);
        }
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &Scalar)> + '_ {
        self.entries.iter().map(|(&(r, c), v)| (r, c, v))
    }

    /// Nonzero entries of column `c`.
    pub fn column(&self, c: usize) -> Vec<(usize, Scalar)> {
        self.entries.iter().filter(|((_, cc), _)| *cc == c).map(|(&(r, _), v)| (r, v.clone())).collect()
    }

    pub fn adjoint(&self) -> Self {
        let entries = self.entries.iter().map(|(&(r, c), v)| ((c, r), v.conj())).collect();
        SparseMatrix { rows: self.cols, cols: self.rows, entries }
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        let entries = self.entries.iter().map(|(&k, v)| (k, v * s)).filter(|(_, v)| !v.is_zero()).collect();
        SparseMatrix { rows: self.rows, cols: self.cols, entries }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch");
        let mut out = self.clone();
        for (&(r, c), v) in &other.entries {
            out.add_at(r, c, v.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&Scalar::from_int(-1)))
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "shape mismatch");
        let mut by_row: BTreeMap<usize, Vec<(usize, &Scalar)>> = BTreeMap::new();
        for (&(r, c), v) in &other.entries {
            by_row.entry(r).or_default().push((c, v));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for (&(r, k), a) in &self.entries {
            if let Some(row) = by_row.get(&k) {
                for &(c, b) in row {
                    out.add_at(r, c, a * b);
                }
            }
        }
        out
    }

    /// The submatrix on the given rows and columns, in the given order.
    pub fn compress(&self, rows: &[usize], cols: &[usize]) -> Self {
        let rpos: BTreeMap<usize, usize> = rows.iter().enumerate().map(|(k, &r)| (r, k)).collect();
        let cpos: BTreeMap<usize, usize> = cols.iter().enumerate().map(|(k, &c)| (c, k)).collect();
        let entries = self
            .entries
            .iter()
            .filter_map(|(&(r, c), v)| Some(((*rpos.get(&r)?, *cpos.get(&c)?), v.clone())))
            .collect();
        SparseMatrix { rows: rows.len(), cols: cols.len(), entries }
    }

    /// Largest entry of `self - other` within the given columns.
    pub fn deviation_on_columns(&self, other: &Self, cols: &[usize]) -> f64 {
        let wanted: std::collections::BTreeSet<usize> = cols.iter().copied().collect();
        let mut worst: f64 = 0.0;
        for (&(r, c), _) in self.entries.iter().chain(other.entries.iter()) {
            if wanted.contains(&c) {
                worst = worst.max(self.get(r, c).distance(&other.get(r, c)));
            }
        }
        worst
    }

    pub fn deviation(&self, other: &Self) -> f64 {
        let all: Vec<usize> = (0..self.cols.max(other.cols)).collect();
        self.deviation_on_columns(other, &all)
    }

    /// Triplet dump: a `% rows cols nnz` header, then one `row col value`
    /// line per nonzero entry, zero-based, sorted by row then column.
    pub fn to_triplets(&self) -> String {
        let mut out = String::new();
        writeln!(out, "% {} {} {}", self.rows, self.cols, self.entries.len()).unwrap();
        for (&(r, c), v) in &self.entries {
            writeln!(out, "{r} {c} {v}").unwrap();
        }
        out
    }

    pub fn from_triplet_text(text: &str) -> crate::error::Result<Self> {
        use crate::error::Error;
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines.next().ok_or_else(|| Error::Parse("empty triplet file".into()))?;
        let dims: Vec<usize> = header
            .trim_start_matches('%')
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| Error::Parse(format!("bad header {header:?}"))))
            .collect::<Result<_, _>>()?;
        if dims.len() != 3 {
            return Err(Error::Parse(format!("bad header {header:?}")));
        }
        let mut m = Self::zeros(dims[0], dims[1]);
        for line in lines {
            let parts: Vec<&str> = line.split_whitespace().collect();
            if parts.len() != 3 {
                return Err(Error::Parse(format!("bad triplet line {line:?}")));
            }
            let r: usize = parts[0].parse().map_err(|_| Error::Parse(format!("bad row in {line:?}")))?;
            let c: usize = parts[1].parse().map_err(|_| Error::Parse(format!("bad column in {line:?}")))?;
            if r >= m.rows || c >= m.cols {
                return Err(Error::Parse(format!("entry out of range in {line:?}")));
            }
            m.add_at(r, c, parts[2].parse()?);
        }
        Ok(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic() {
        let a = SparseMatrix::from_triplets(2, 2, [(0, 1, Scalar::from_int(2)), (1, 0, Scalar::from_int(3))]);
        let p = a.mul(&a);
        assert_eq!(p, SparseMatrix::from_triplets(2, 2, [(0, 0, Scalar::from_int(6)), (1, 1, Scalar::from_int(6))]));
        assert_eq!(a.adjoint().adjoint(), a);
        assert!(a.sub(&a).nnz() == 0);
        assert_eq!(a.deviation(&SparseMatrix::zeros(2, 2)), 3.0);
        assert_eq!(a.deviation_on_columns(&SparseMatrix::zeros(2, 2), &[1]), 2.0);
    }

    #[test]
    fn triplet_round_trip() {
        let a = SparseMatrix::from_triplets(3, 2, [(0, 1, Scalar::ratio(1, 2)), (2, 0, Scalar::root_of_unity(4, 1))]);
        let text = a.to_triplets();
        assert!(text.starts_with("% 3 2 2\n"));
        assert_eq!(SparseMatrix::from_triplet_text(&text).unwrap(), a);
    }
}
