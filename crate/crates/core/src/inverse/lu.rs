//! Dense LU factorization with partial pivoting for the Nyström systems.

use crate::scalar::Real;

/// Row-major `n × n` matrix factored in place as `PA = LU`.
pub(crate) struct Lu<T> {
    n: usize,
    a: Vec<T>,
    perm: Vec<usize>,
}

impl<T: Real> Lu<T> {
    /// Factors `a`; returns `None` for an exactly singular matrix.
    pub(crate) fn factor(mut a: Vec<T>, n: usize) -> Option<Self> {
        debug_assert_eq!(a.len(), n * n);
        let mut perm: Vec<usize> = (0..n).collect();
        for col in 0..n {
            let pivot = (col..n)
                .max_by(|&i, &j| a[i * n + col].abs().partial_cmp(&a[j * n + col].abs()).unwrap_or(std::cmp::Ordering::Equal))?;
            if a[pivot * n + col] == T::zero() || !a[pivot * n + col].is_finite() {
                return None;
            }
            if pivot != col {
                for c in 0..n {
                    a.swap(pivot * n + c, col * n + c);
                }
                perm.swap(pivot, col);
            }
            let inv = T::one() / a[col * n + col];
            let (head, tail) = a.split_at_mut((col + 1) * n);
            let pivot_row = &head[col * n..];
            for row in tail.chunks_exact_mut(n) {
                let factor = row[col] * inv;
                if factor == T::zero() {
                    continue;
                }
                row[col] = factor;
                for c in col + 1..n {
                    row[c] = row[c] - factor * pivot_row[c];
                }
            }
        }
        Some(Self { n, a, perm })
    }

    pub(crate) fn solve(&self, b: &[T]) -> Vec<T> {
        let n = self.n;
        let mut x: Vec<T> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let row = &self.a[i * n..i * n + i];
            let s = row.iter().zip(&x[..i]).fold(T::zero(), |acc, (l, v)| acc + *l * *v);
            x[i] = x[i] - s;
        }
        for i in (0..n).rev() {
            let row = &self.a[i * n + i + 1..(i + 1) * n];
            let s = row.iter().zip(&x[i + 1..]).fold(T::zero(), |acc, (u, v)| acc + *u * *v);
            x[i] = (x[i] - s) / self.a[i * n + i];
        }
        x
    }

    /// `max|U_ii| / min|U_ii|`, a cheap lower bound on the condition number.
    pub(crate) fn condition_estimate(&self) -> T {
        let diag = (0..self.n).map(|i| self.a[i * self.n + i].abs());
        let (lo, hi) = diag.fold((T::infinity(), T::zero()), |(lo, hi), d| (lo.min(d), hi.max(d)));
        if self.n == 0 {
            T::one()
        } else {
            hi / lo
        }
    }
}
