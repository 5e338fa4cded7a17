//! Dense matrices whose entries are [`IntPoly`] values over a shared
//! variable list.

use std::fmt;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::poly::{IntPoly, Vars};

#[derive(Clone, PartialEq, Eq)]
pub struct PolyMatrix {
    rows: usize,
    cols: usize,
    vars: Vars,
    entries: Vec<IntPoly>,
}

impl PolyMatrix {
    /// Row-major construction. All entries are re-expressed over the union of
    /// their variable lists, in first-seen order.
    pub fn new(rows: usize, cols: usize, entries: Vec<IntPoly>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::Precondition(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        let mut names: Vec<String> = Vec::new();
        for e in &entries {
            for v in e.vars().iter() {
                if !names.contains(v) {
                    names.push(v.clone());
                }
            }
        }
        let vars: Vars = names.into();
        let entries = entries
            .into_iter()
            .map(|e| e.with_vars(vars.clone()))
            .collect::<Result<Vec<_>>>()?;
        Ok(PolyMatrix {
            rows,
            cols,
            vars,
            entries,
        })
    }

    /// Like [`new`](Self::new) but with an explicit variable list.
    pub fn with_vars(rows: usize, cols: usize, vars: Vars, entries: Vec<IntPoly>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::Precondition(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        let entries = entries
            .into_iter()
            .map(|e| e.with_vars(vars.clone()))
            .collect::<Result<Vec<_>>>()?;
        Ok(PolyMatrix {
            rows,
            cols,
            vars,
            entries,
        })
    }

    pub fn from_rows(rows: Vec<Vec<IntPoly>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Precondition("ragged rows".into()));
        }
        PolyMatrix::new(r, c, rows.into_iter().flatten().collect())
    }

    pub fn zeros(rows: usize, cols: usize, vars: Vars) -> Self {
        PolyMatrix {
            rows,
            cols,
            entries: vec![IntPoly::zero(vars.clone()); rows * cols],
            vars,
        }
    }

    pub fn identity(n: usize, vars: Vars) -> Self {
        let mut m = PolyMatrix::zeros(n, n, vars.clone());
        for i in 0..n {
            m.entries[i * n + i] = IntPoly::one(vars.clone());
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn get(&self, i: usize, j: usize) -> &IntPoly {
        &self.entries[i * self.cols + j]
    }

    pub fn entries(&self) -> &[IntPoly] {
        &self.entries
    }

    pub fn column(&self, j: usize) -> Vec<IntPoly> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    fn compatible(&self, other: &PolyMatrix) -> Result<(PolyMatrix, PolyMatrix)> {
        if self.vars == other.vars {
            return Ok((self.clone(), other.clone()));
        }
        let mut names: Vec<String> = self.vars.to_vec();
        for v in other.vars.iter() {
            if !names.contains(v) {
                names.push(v.clone());
            }
        }
        let vars: Vars = names.into();
        Ok((
            PolyMatrix::with_vars(self.rows, self.cols, vars.clone(), self.entries.clone())?,
            PolyMatrix::with_vars(other.rows, other.cols, vars, other.entries.clone())?,
        ))
    }

    pub fn mul(&self, other: &PolyMatrix) -> Result<PolyMatrix> {
        if self.cols != other.rows {
            return Err(Error::Precondition("dimension mismatch in product".into()));
        }
        let (a, b) = self.compatible(other)?;
        let mut out = PolyMatrix::zeros(a.rows, b.cols, a.vars.clone());
        for i in 0..a.rows {
            for k in 0..a.cols {
                let aik = a.get(i, k);
                if aik.is_zero() {
                    continue;
                }
                for j in 0..b.cols {
                    let bkj = b.get(k, j);
                    if bkj.is_zero() {
                        continue;
                    }
                    let idx = i * b.cols + j;
                    out.entries[idx] = &out.entries[idx] + &(aik * bkj);
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &PolyMatrix) -> Result<PolyMatrix> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::Precondition("dimension mismatch in sum".into()));
        }
        let (a, b) = self.compatible(other)?;
        let entries = a.entries.iter().zip(&b.entries).map(|(x, y)| x + y).collect();
        Ok(PolyMatrix { entries, ..a })
    }

    pub fn sub(&self, other: &PolyMatrix) -> Result<PolyMatrix> {
        self.add(&other.scale(&BigInt::from(-1)))
    }

    pub fn scale(&self, c: &BigInt) -> PolyMatrix {
        PolyMatrix {
            rows: self.rows,
            cols: self.cols,
            vars: self.vars.clone(),
            entries: self.entries.iter().map(|e| e.scale(c)).collect(),
        }
    }

    pub fn scale_poly(&self, p: &IntPoly) -> Result<PolyMatrix> {
        let entries = self.entries.iter().map(|e| e * p).collect();
        PolyMatrix::new(self.rows, self.cols, entries)
    }

    /// Applies `f` to every entry (e.g. a specialization).
    pub fn try_map<F>(&self, f: F) -> Result<PolyMatrix>
    where
        F: Fn(&IntPoly) -> Result<IntPoly>,
    {
        let entries = self.entries.iter().map(f).collect::<Result<Vec<_>>>()?;
        PolyMatrix::new(self.rows, self.cols, entries)
    }

    pub fn mul_vec(&self, v: &[IntPoly]) -> Result<Vec<IntPoly>> {
        if v.len() != self.cols {
            return Err(Error::Precondition("vector length mismatch".into()));
        }
        Ok((0..self.rows)
            .map(|i| {
                let mut acc = IntPoly::zero(self.vars.clone());
                for (j, x) in v.iter().enumerate() {
                    let a = self.get(i, j);
                    if !a.is_zero() && !x.is_zero() {
                        acc = &acc + &(a * x);
                    }
                }
                acc
            })
            .collect())
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(IntPoly::is_zero)
    }

    pub fn max_bitsize(&self) -> u64 {
        self.entries.iter().map(IntPoly::bitsize).max().unwrap_or(0)
    }

    /// Maximum over entries of the summed degree in the named variables.
    pub fn max_degree_in(&self, names: &[&str]) -> u32 {
        let idxs: Vec<usize> = names
            .iter()
            .filter_map(|n| self.vars.iter().position(|v| v == n))
            .collect();
        self.entries
            .iter()
            .map(|e| e.degree_in_vars(&idxs))
            .max()
            .unwrap_or(0)
    }
}

impl fmt::Display for PolyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for i in 0..self.rows {
            if i > 0 {
                f.write_str(", ")?;
            }
            f.write_str("[")?;
            for j in 0..self.cols {
                if j > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            f.write_str("]")?;
        }
        f.write_str("]")
    }
}

impl fmt::Debug for PolyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PolyMatrix<{}x{} over {}>{}", self.rows, self.cols, self.vars.join(","), self)
    }
}
