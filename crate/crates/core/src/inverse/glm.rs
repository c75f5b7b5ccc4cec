//! Nyström solution of `F(x+y) + E(x,y) + ∫₀^Y F(x+y+z) E(x,z) dz = 0` and
//! reconstruction `q = -∂ₓE(x,0)`.

use rayon::prelude::*;

use crate::error::InverseError;
use crate::inverse::kernel::{marchenko_kernel, MarchenkoKernel};
use crate::inverse::lu::Lu;
use crate::inverse::{HalfLine, InverseChain, InverseConfig};
use crate::grid::SpatialGrid;
use crate::scalar::Real;

/// Quadrature layout in `y`: nodes `y_m = m·stride·h`, `m = 0..=n_y`, so
/// every argument `x + y + z` of the kernel falls on a spatial node.
#[derive(Debug, Clone, PartialEq)]
pub struct GlmGrid {
    pub stride: usize,
    pub n_y: usize,
    /// Weights (in units of `Δy`) of the first nodes; later nodes weigh 1.
    pub start_weights: Vec<f64>,
}

/// Nyström weights in `z`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GlmQuadrature {
    /// Plain trapezoid rule, second order.
    Trapezoid,
    /// Trapezoid with Gregory corrections on the first `m` nodes (order
    /// `m + 1`, `2 <= m <= 8`). The far end needs none: the kernel has
    /// vanished there.
    Gregory(usize),
}

impl Default for GlmQuadrature {
    fn default() -> Self {
        GlmQuadrature::Gregory(6)
    }
}

/// Start corrections `c_j` of the unit-weight rule on `[0, ∞)`: they cancel
/// the Euler–Maclaurin defect `Σ_{j≥0} p(j) - ∫₀^∞ p` for polynomials of
/// degree `< m`, which is `1/2` for `p = 1` and `ζ(-d) = -B_{d+1}/(d+1)` for
/// `p = z^d`.
pub fn gregory_corrections(m: usize) -> Vec<f64> {
    const DEFECT: [f64; 8] = [0.5, -1.0 / 12.0, 0.0, 1.0 / 120.0, 0.0, -1.0 / 252.0, 0.0, 1.0 / 240.0];
    assert!((2..=8).contains(&m), "Gregory corrections need 2 <= m <= 8");
    // Vandermonde system Σ_j c_j j^d = -DEFECT[d], solved by elimination.
    let mut a: Vec<Vec<f64>> = (0..m)
        .map(|d| {
            let mut row: Vec<f64> = (0..m).map(|j| if d == 0 { 1.0 } else { (j as f64).powi(d as i32) }).collect();
            row.push(-DEFECT[d]);
            row
        })
        .collect();
    for col in 0..m {
        let pivot = (col..m).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs())).unwrap();
        a.swap(col, pivot);
        for row in 0..m {
            if row != col {
                let pivot_row = a[col].clone();
                let f = a[row][col] / pivot_row[col];
                for (x, p) in a[row][col..].iter_mut().zip(&pivot_row[col..]) {
                    *x -= f * p;
                }
            }
        }
    }
    (0..m).map(|j| a[j][m] / a[j][j]).collect()
}

impl GlmGrid {
    pub fn new<T: Real>(grid: &SpatialGrid<T>, config: &InverseConfig) -> Result<Self, InverseError> {
        let h = grid.step().as_f64();
        let y_max = config.y_max.unwrap_or(2.0 * grid.half_width().as_f64());
        let y_step = y_max / config.n_y as f64;
        let ratio = y_step / h;
        let stride = ratio.round();
        if config.n_y == 0 || !(stride >= 1.0) || (ratio - stride).abs() > 1e-9 * ratio {
            return Err(InverseError::QuadratureStep { y_step, grid_step: h });
        }
        let corrections = match config.quadrature {
            GlmQuadrature::Trapezoid => vec![-0.5],
            GlmQuadrature::Gregory(m) => gregory_corrections(m),
        };
        Ok(Self {
            stride: stride as usize,
            n_y: config.n_y,
            start_weights: corrections.iter().map(|c| 1.0 + c).collect(),
        })
    }
}

/// `E(x_i, y_m)` for one spatial node.
#[derive(Debug, Clone)]
pub struct GlmSolution<T> {
    pub node: usize,
    /// Values at `y_m`; nodes with `x + y_m >= L` are omitted (they vanish).
    pub e: Vec<T>,
    pub condition: T,
}

fn weight<T: Real>(m: usize, layout: &GlmGrid, dy: T) -> T {
    if let Some(w) = layout.start_weights.get(m) {
        dy * T::lit(*w)
    } else if m == layout.n_y {
        dy / T::lit(2.0)
    } else {
        dy
    }
}

fn active_nodes(n: usize, node: usize, layout: &GlmGrid) -> usize {
    if node >= n {
        0
    } else {
        ((n - node).div_ceil(layout.stride)).min(layout.n_y + 1)
    }
}

/// Solves the discretized equation at the spatial node `node` (`0..=n`).
pub fn glm_solve<T: Real>(
    kernel: &MarchenkoKernel<T>,
    node: usize,
    layout: &GlmGrid,
    config: &InverseConfig,
) -> Result<GlmSolution<T>, InverseError> {
    let n = kernel.grid.len();
    let size = active_nodes(n, node, layout);
    if size == 0 {
        return Ok(GlmSolution {
            node,
            e: Vec::new(),
            condition: T::one(),
        });
    }
    let p = layout.stride;
    let dy = kernel.grid.step() * T::from_usize_lossy(p);
    let mut a = vec![T::zero(); size * size];
    for m in 0..size {
        for l in 0..size {
            a[m * size + l] = weight(l, layout, dy) * kernel.at(node + (m + l) * p);
        }
        a[m * size + m] = a[m * size + m] + T::one();
    }
    let rhs: Vec<T> = (0..size).map(|m| -kernel.at(node + m * p)).collect();
    let x = kernel.grid.node(0).as_f64() + node as f64 * kernel.grid.step().as_f64();
    let lu = Lu::factor(a, size).ok_or(InverseError::NearSingular {
        x,
        condition: f64::INFINITY,
    })?;
    let condition = lu.condition_estimate();
    if condition.as_f64() > config.condition_limit {
        return Err(InverseError::NearSingular {
            x,
            condition: condition.as_f64(),
        });
    }
    Ok(GlmSolution {
        node,
        e: lu.solve(&rhs),
        condition,
    })
}

/// `max_m |E_m + Σ_l w_l F(x+y_m+y_l) E_l + F(x+y_m)| / max(sup|F|, sup|E|)`.
pub fn glm_residual<T: Real>(kernel: &MarchenkoKernel<T>, solution: &GlmSolution<T>, layout: &GlmGrid) -> T {
    let p = layout.stride;
    let dy = kernel.grid.step() * T::from_usize_lossy(p);
    let node = solution.node;
    let e = &solution.e;
    let scale = e
        .iter()
        .fold(T::zero(), |m, v| m.max(v.abs()))
        .max(kernel.values.iter().fold(T::zero(), |m, v| m.max(v.abs())))
        .max(T::min_positive_value());
    (0..e.len())
        .map(|m| {
            let conv = (0..e.len()).fold(T::zero(), |acc, l| {
                acc + weight(l, layout, dy) * kernel.at(node + (m + l) * p) * e[l]
            });
            (e[m] + conv + kernel.at(node + m * p)).abs()
        })
        .fold(T::zero(), T::max)
        / scale
}

/// Half-line reconstruction in the original orientation.
#[derive(Debug, Clone)]
pub struct HalfReconstruction<T> {
    pub side: HalfLine,
    pub cut: T,
    /// First spatial node covered.
    pub first: usize,
    pub values: Vec<T>,
    /// `E(x,0)` at the covered nodes, in the solver's orientation.
    pub e_at_zero: Vec<T>,
    pub max_condition: T,
}

impl<T: Real> HalfReconstruction<T> {
    pub fn value_at(&self, node: usize) -> Option<T> {
        node.checked_sub(self.first).and_then(|i| self.values.get(i).copied())
    }

    pub fn nodes(&self) -> std::ops::Range<usize> {
        self.first..self.first + self.values.len()
    }
}

pub fn reconstruct_half<T: Real>(
    chain: &InverseChain<T>,
    grid: &SpatialGrid<T>,
    side: HalfLine,
    cut: T,
    config: &InverseConfig,
) -> Result<HalfReconstruction<T>, InverseError> {
    let kernel = marchenko_kernel(chain, side, grid, config)?;
    reconstruct_from_kernel(&kernel, cut, config)
}

/// Solves the GLM equation at every node of the half-line beyond `cut` and
/// differentiates `E(x,0)` with fourth-order differences.
pub fn reconstruct_from_kernel<T: Real>(
    kernel: &MarchenkoKernel<T>,
    cut: T,
    config: &InverseConfig,
) -> Result<HalfReconstruction<T>, InverseError> {
    let grid = &kernel.grid;
    let n = grid.len();
    let layout = GlmGrid::new(grid, config)?;
    let oriented_cut = match kernel.side {
        HalfLine::Plus => cut,
        HalfLine::Minus => -cut,
    };
    // Leftmost node at or below the cut, with room for the stencil.
    let start = ((oriented_cut - grid.node(0)) / grid.step()).floor().to_usize().unwrap_or(0).min(n - 4);
    let solutions: Vec<GlmSolution<T>> = (start..=n)
        .into_par_iter()
        .map(|i| glm_solve(kernel, i, &layout, config))
        .collect::<Result<_, _>>()?;
    let max_condition = solutions.iter().fold(T::one(), |m, s| m.max(s.condition));
    let e_at_zero: Vec<T> = solutions.iter().map(|s| s.e.first().copied().unwrap_or(T::zero())).collect();
    let oriented: Vec<T> = fourth_order_derivative(&e_at_zero, grid.step()).into_iter().map(|d| -d).collect();
    let (first, values) = match kernel.side {
        HalfLine::Plus => (start, oriented[..oriented.len() - 1].to_vec()),
        // Solver node i corresponds to original node n - i.
        HalfLine::Minus => (0, oriented.iter().rev().copied().collect()),
    };
    Ok(HalfReconstruction {
        side: kernel.side,
        cut,
        first,
        values,
        e_at_zero,
        max_condition,
    })
}

/// Fourth-order first derivative of uniform samples; one-sided at the ends.
pub(crate) fn fourth_order_derivative<T: Real>(f: &[T], h: T) -> Vec<T> {
    let n = f.len();
    assert!(n >= 5, "fourth-order stencil needs five samples");
    let c = |v: f64| T::lit(v);
    let twelve_h = c(12.0) * h;
    let forward0 = |g: &dyn Fn(usize) -> T| {
        (c(-25.0) * g(0) + c(48.0) * g(1) - c(36.0) * g(2) + c(16.0) * g(3) - c(3.0) * g(4)) / twelve_h
    };
    let forward1 = |g: &dyn Fn(usize) -> T| {
        (c(-3.0) * g(0) - c(10.0) * g(1) + c(18.0) * g(2) - c(6.0) * g(3) + g(4)) / twelve_h
    };
    let mut out = vec![T::zero(); n];
    for i in 2..n - 2 {
        out[i] = (f[i - 2] - c(8.0) * f[i - 1] + c(8.0) * f[i + 1] - f[i + 2]) / twelve_h;
    }
    out[0] = forward0(&|j| f[j]);
    out[1] = forward1(&|j| f[j]);
    out[n - 1] = -forward0(&|j| f[n - 1 - j]);
    out[n - 2] = -forward1(&|j| f[n - 1 - j]);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gregory_corrections_reproduce_classic_weights() {
        let c = gregory_corrections(3);
        for (ci, w) in c.iter().zip([3.0 / 8.0, 7.0 / 6.0, 23.0 / 24.0]) {
            assert!((1.0 + ci - w).abs() < 1e-14);
        }
    }

    #[test]
    fn gregory_rule_integrates_decaying_exponential() {
        let h = 0.1;
        let exact = 1.0 / 3.0;
        let mut errors = Vec::new();
        for m in [2, 4, 6, 8] {
            let c = gregory_corrections(m);
            let sum: f64 = (0..2000)
                .map(|j| (1.0 + c.get(j).copied().unwrap_or(0.0)) * (-3.0 * j as f64 * h).exp())
                .sum::<f64>()
                * h;
            errors.push((sum - exact).abs());
        }
        assert!(errors.windows(2).all(|w| w[1] < w[0]), "{errors:?}");
        assert!(errors[3] < 5e-8, "{errors:?}");
    }

    #[test]
    fn derivative_exact_on_quartics() {
        let h = 0.1;
        let f: Vec<f64> = (0..9).map(|i| (i as f64 * h).powi(4)).collect();
        let d = fourth_order_derivative(&f, h);
        for (i, di) in d.iter().enumerate() {
            let x = i as f64 * h;
            assert!((di - 4.0 * x.powi(3)).abs() < 1e-11, "i = {i}");
        }
    }
}
