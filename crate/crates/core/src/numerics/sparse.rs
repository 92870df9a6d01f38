use num_complex::Complex64;
use rayon::prelude::*;

use crate::bits::{gather, scatter};
use crate::error::NumericsError;
use crate::hamiltonian::{Hamiltonian, StoquasticCheck};

/// Compressed sparse row matrix over `Complex64`.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseMatrix {
    dim: usize,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<Complex64>,
}

/// Largest register ever assembled, regardless of caller caps.
pub const SPARSE_QUBIT_CAP: usize = 22;

impl SparseMatrix {
    /// Assembles `H` (times `norm_scale` when `scaled`). Entries of a row are
    /// merged in term order, so the result is bitwise reproducible.
    pub fn assemble(
        h: &Hamiltonian,
        scaled: bool,
        qubit_cap: usize,
    ) -> Result<Self, NumericsError> {
        let n = h.n_total();
        let cap = qubit_cap.min(SPARSE_QUBIT_CAP);
        if n > cap {
            return Err(NumericsError::DimensionCap {
                qubits: n,
                cap,
                kind: "sparse",
            });
        }
        let dim = 1usize << n;
        let factor = if scaled { h.norm_scale() } else { 1.0 };
        let structures: Vec<(&[usize], Vec<Vec<(usize, Complex64)>>)> = h
            .terms()
            .iter()
            .map(|t| (t.qubits(), t.row_structure()))
            .collect();
        let rows: Vec<Vec<(usize, Complex64)>> = (0..dim)
            .into_par_iter()
            .map(|z| {
                let mut row: Vec<(usize, Complex64)> = Vec::new();
                for (qubits, structure) in &structures {
                    let local = gather(z, qubits);
                    for &(c, v) in &structure[local] {
                        row.push((scatter(z, qubits, c), v));
                    }
                }
                row.sort_by_key(|&(c, _)| c);
                let mut merged: Vec<(usize, Complex64)> = Vec::with_capacity(row.len());
                for (c, v) in row {
                    match merged.last_mut() {
                        Some(last) if last.0 == c => last.1 += v,
                        _ => merged.push((c, v)),
                    }
                }
                if factor != 1.0 {
                    for e in &mut merged {
                        e.1 *= factor;
                    }
                }
                merged
            })
            .collect();
        let mut row_ptr = Vec::with_capacity(dim + 1);
        row_ptr.push(0);
        let nnz: usize = rows.iter().map(Vec::len).sum();
        let mut cols = Vec::with_capacity(nnz);
        let mut vals = Vec::with_capacity(nnz);
        for row in rows {
            for (c, v) in row {
                cols.push(c);
                vals.push(v);
            }
            row_ptr.push(cols.len());
        }
        Ok(SparseMatrix {
            dim,
            row_ptr,
            cols,
            vals,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    pub fn row(&self, r: usize) -> impl Iterator<Item = (usize, Complex64)> + '_ {
        let span = self.row_ptr[r]..self.row_ptr[r + 1];
        self.cols[span.clone()]
            .iter()
            .copied()
            .zip(self.vals[span].iter().copied())
    }

    pub fn diagonal(&self) -> Vec<Complex64> {
        (0..self.dim)
            .map(|r| {
                self.row(r)
                    .find(|&(c, _)| c == r)
                    .map_or(Complex64::new(0.0, 0.0), |(_, v)| v)
            })
            .collect()
    }

    /// First off-diagonal entry in row-major order that is not real and
    /// `≤ tol`.
    pub fn stoquastic_check(&self, tol: f64) -> StoquasticCheck {
        let witness = (0..self.dim).find_map(|r| {
            self.row(r)
                .find(|&(c, v)| c != r && (v.re > tol || v.im.abs() > tol))
                .map(|(c, v)| (r, c, v))
        });
        StoquasticCheck {
            stoquastic: witness.is_none(),
            witness,
        }
    }

    pub fn is_real(&self, tol: f64) -> bool {
        self.vals.iter().all(|v| v.im.abs() <= tol)
    }

    /// `y = A x`.
    pub fn matvec(&self, x: &[Complex64], y: &mut [Complex64]) {
        assert_eq!(x.len(), self.dim);
        assert_eq!(y.len(), self.dim);
        y.par_iter_mut().enumerate().for_each(|(r, out)| {
            let mut acc = Complex64::new(0.0, 0.0);
            for (c, v) in self.row(r) {
                acc += v * x[c];
            }
            *out = acc;
        });
    }

    pub fn apply(&self, x: &[Complex64]) -> Vec<Complex64> {
        let mut y = vec![Complex64::new(0.0, 0.0); self.dim];
        self.matvec(x, &mut y);
        y
    }

    /// `⟨x|A|x⟩` (real part).
    pub fn expectation(&self, x: &[Complex64]) -> f64 {
        let y = self.apply(x);
        x.iter().zip(&y).map(|(a, b)| (a.conj() * b).re).sum()
    }

    /// Largest absolute row sum.
    pub fn norm_bound(&self) -> f64 {
        (0..self.dim)
            .map(|r| self.row(r).map(|(_, v)| v.norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// Row-major dense copy.
    pub fn to_dense(&self) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); self.dim * self.dim];
        for r in 0..self.dim {
            for (c, v) in self.row(r) {
                out[r * self.dim + c] = v;
            }
        }
        out
    }
}
