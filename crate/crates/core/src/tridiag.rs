//! Thomas algorithm for tridiagonal systems.

use crate::real::Real;

/// Tridiagonal matrix stored by diagonals: `lower[i]` multiplies `x[i-1]`,
/// `upper[i]` multiplies `x[i+1]` (`lower[0]` and `upper[n-1]` are unused).
#[derive(Debug, Clone, PartialEq)]
pub struct Tridiagonal<S> {
    pub lower: Vec<S>,
    pub diag: Vec<S>,
    pub upper: Vec<S>,
}

impl<S: Real> Tridiagonal<S> {
    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    /// Solves `A x = rhs` in place. Returns `false` on a zero pivot.
    pub fn solve_in_place(&self, rhs: &mut [S], scratch: &mut Vec<S>) -> bool {
        let n = self.diag.len();
        assert_eq!(rhs.len(), n);
        if n == 0 {
            return true;
        }
        scratch.clear();
        scratch.resize(n, S::zero());
        let mut pivot = self.diag[0];
        if pivot == S::zero() {
            return false;
        }
        rhs[0] /= pivot;
        for i in 1..n {
            scratch[i] = self.upper[i - 1] / pivot;
            pivot = self.diag[i] - self.lower[i] * scratch[i];
            if pivot == S::zero() {
                return false;
            }
            rhs[i] = (rhs[i] - self.lower[i] * rhs[i - 1]) / pivot;
        }
        for i in (0..n - 1).rev() {
            let next = rhs[i + 1];
            rhs[i] -= scratch[i + 1] * next;
        }
        true
    }

    /// `A x`.
    pub fn apply(&self, x: &[S]) -> Vec<S> {
        let n = self.diag.len();
        (0..n)
            .map(|i| {
                let mut v = self.diag[i] * x[i];
                if i > 0 {
                    v += self.lower[i] * x[i - 1];
                }
                if i + 1 < n {
                    v += self.upper[i] * x[i + 1];
                }
                v
            })
            .collect()
    }
}
