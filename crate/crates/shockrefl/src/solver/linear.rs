//! Sparse direct solves with a cached symbolic factorization.

use faer::prelude::*;
use faer::sparse::linalg::solvers::{Lu, SymbolicLu};
use faer::sparse::{Argsort, Pair, SparseColMat, SymbolicSparseColMat};
use faer::Mat;

use crate::error::{Error, Result};

/// Reuses the sparsity analysis while the pattern stays the same.
#[derive(Default)]
pub struct SparseLuCache {
    pattern: Option<Pattern>,
}

struct Pattern {
    n: usize,
    len: usize,
    symbolic: SymbolicSparseColMat<usize>,
    argsort: Argsort<usize>,
    lu: SymbolicLu<usize>,
}

impl SparseLuCache {
    pub fn new() -> Self {
        Self::default()
    }

    /// Solves `A x = b` where `A` is given as (possibly repeated) triplets;
    /// repeated entries are summed.
    pub fn solve(&mut self, n: usize, pairs: &[(usize, usize)], vals: &[f64], rhs: &[f64]) -> Result<Vec<f64>> {
        let stale = match &self.pattern {
            Some(p) => p.n != n || p.len != pairs.len(),
            None => true,
        };
        if stale {
            let idx: Vec<Pair<usize, usize>> = pairs.iter().map(|&(row, col)| Pair { row, col }).collect();
            let (symbolic, argsort) = SymbolicSparseColMat::try_new_from_indices(n, n, &idx)
                .map_err(|e| Error::LinearSolver(format!("{e:?}")))?;
            let lu = SymbolicLu::try_new(symbolic.as_ref()).map_err(|e| Error::LinearSolver(format!("{e:?}")))?;
            self.pattern = Some(Pattern { n, len: pairs.len(), symbolic, argsort, lu });
        }
        let p = self.pattern.as_ref().expect("pattern initialized above");
        let mat = SparseColMat::<usize, f64>::new_from_argsort(p.symbolic.clone(), &p.argsort, vals)
            .map_err(|e| Error::LinearSolver(format!("{e:?}")))?;
        let lu = Lu::try_new_with_symbolic(p.lu.clone(), mat.as_ref())
            .map_err(|e| Error::LinearSolver(format!("{e:?}")))?;
        let b = Mat::<f64>::from_fn(n, 1, |i, _| rhs[i]);
        let x = lu.solve(&b);
        let out: Vec<f64> = (0..n).map(|i| x[(i, 0)]).collect();
        if out.iter().any(|v| !v.is_finite()) {
            return Err(Error::LinearSolver("non-finite solution (singular Jacobian)".into()));
        }
        Ok(out)
    }
}
