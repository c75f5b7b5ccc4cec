//! Normalized Jost solutions.
//!
//! `m₁(x,k) = e^{-ikx} f₁(x,k)` solves `m'' + 2ik m' = q m` with `m → 1`,
//! `m' → 0` as `x → +∞`; `m₂(x,k) = e^{ikx} f₂(x,k)` solves
//! `m'' - 2ik m' = q m` with the same normalization at `-∞`. Both are
//! bounded for `Im k >= 0` and regular at `k = 0`, so the same marching
//! scheme covers the real line and the positive imaginary axis.
//!
//! The ODE is marched with classical RK4 on a sub-grid of the potential
//! grid; `q` between nodes comes from the potential's continuation rule.

use num_complex::Complex;

use crate::error::JostError;
use crate::grid::{Potential, SpatialGrid};
use crate::scalar::{Cplx, Real};

/// Which Jost family a field belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// `m₁`, normalized at `x = +L`.
    Right,
    /// `m₂`, normalized at `x = -L`.
    Left,
}

/// Step control for the marching scheme.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JostConfig {
    /// Upper bound on `2|k|·h_sub`, the phase advance per RK4 step.
    pub max_phase_step: f64,
    /// Fixed number of RK4 steps per grid cell; overrides `max_phase_step`.
    pub substeps: Option<usize>,
}

impl Default for JostConfig {
    fn default() -> Self {
        Self {
            max_phase_step: 0.25,
            substeps: None,
        }
    }
}

impl JostConfig {
    /// RK4 steps per grid cell for wavenumbers up to `|k|`.
    pub fn substeps_for<T: Real>(&self, k_abs: T, h: T) -> usize {
        if let Some(s) = self.substeps {
            return s.max(1);
        }
        let phase = (T::lit(2.0) * k_abs * h).as_f64();
        ((phase / self.max_phase_step).ceil() as usize).max(1)
    }
}

/// Samples of `m` and `∂ₓm` at every node of the potential grid.
#[derive(Debug, Clone, PartialEq)]
pub struct JostField<T> {
    pub grid: SpatialGrid<T>,
    pub k: Cplx<T>,
    pub side: Side,
    pub m: Vec<Cplx<T>>,
    pub dm_dx: Vec<Cplx<T>>,
}

/// The potential evaluated on the half-step sub-grid used by RK4:
/// `fine[p] = q(x_0 + p·h/(2s))`, `p = 0..=2sn` (periodic wrap at the end).
#[derive(Debug, Clone)]
pub(crate) struct Continuation<T> {
    pub grid: SpatialGrid<T>,
    pub substeps: usize,
    pub fine: Vec<T>,
}

impl<T: Real> Continuation<T> {
    pub fn new(q: &Potential<T>, substeps: usize) -> Self {
        let per_cell = 2 * substeps;
        let n = q.grid().len();
        let shifted: Vec<Vec<T>> = (0..per_cell)
            .map(|r| q.shifted_samples(T::from_usize_lossy(r) / T::from_usize_lossy(per_cell)))
            .collect();
        let mut fine = Vec::with_capacity(n * per_cell + 1);
        for j in 0..n {
            for row in &shifted {
                fine.push(row[j]);
            }
        }
        fine.push(q.values()[0]);
        Self {
            grid: *q.grid(),
            substeps,
            fine,
        }
    }

    fn sub_step(&self) -> T {
        self.grid.step() / T::from_usize_lossy(self.substeps)
    }

    /// Fine index of grid node `j`.
    fn fine_index(&self, j: usize) -> usize {
        j * 2 * self.substeps
    }
}

/// Marching direction and the sign of the first-order term.
#[derive(Clone, Copy)]
struct Scheme<T> {
    /// `m'' = q m - c m'` with `c = 2ik` (right) or `-2ik` (left).
    c: Cplx<T>,
    /// +1 marching towards larger x, -1 towards smaller x.
    forward: bool,
}

impl<T: Real> Scheme<T> {
    fn for_side(side: Side, k: Cplx<T>) -> Self {
        let two_ik = Complex::new(T::zero(), T::lit(2.0)) * k;
        match side {
            Side::Right => Self { c: two_ik, forward: false },
            Side::Left => Self { c: -two_ik, forward: true },
        }
    }

    #[inline]
    fn rhs(&self, q: T, m: Cplx<T>, p: Cplx<T>) -> (Cplx<T>, Cplx<T>) {
        (p, m * q - self.c * p)
    }

    /// One RK4 step of signed length `dx`, with `q` at the start, midpoint
    /// and end of the step.
    #[inline]
    fn step(&self, (m, p): (Cplx<T>, Cplx<T>), dx: T, q0: T, q_mid: T, q1: T) -> (Cplx<T>, Cplx<T>) {
        let half = dx * T::lit(0.5);
        let (a1, b1) = self.rhs(q0, m, p);
        let (a2, b2) = self.rhs(q_mid, m + a1 * half, p + b1 * half);
        let (a3, b3) = self.rhs(q_mid, m + a2 * half, p + b2 * half);
        let (a4, b4) = self.rhs(q1, m + a3 * dx, p + b3 * dx);
        let sixth = dx / T::lit(6.0);
        (
            m + (a1 + (a2 + a3) * T::lit(2.0) + a4) * sixth,
            p + (b1 + (b2 + b3) * T::lit(2.0) + b4) * sixth,
        )
    }
}

/// Marches from the normalization end to every node; `visit(j, m, m')` is
/// called at each grid node in marching order until it returns `false`.
fn march<T: Real>(
    cont: &Continuation<T>,
    side: Side,
    k: Cplx<T>,
    mut visit: impl FnMut(usize, Cplx<T>, Cplx<T>) -> bool,
) -> Result<(), JostError> {
    let scheme = Scheme::for_side(side, k);
    let n = cont.grid.len();
    let s = cont.substeps;
    let dx = cont.sub_step();
    let one = Complex::new(T::one(), T::zero());
    let zero = Complex::new(T::zero(), T::zero());
    let mut state = (one, zero);
    if scheme.forward {
        // From x_0 = -L up to x_{n-1}.
        if !visit(0, state.0, state.1) {
            return Ok(());
        }
        let mut p = 0usize;
        for j in 1..n {
            for _ in 0..s {
                state = scheme.step(state, dx, cont.fine[p], cont.fine[p + 1], cont.fine[p + 2]);
                p += 2;
            }
            check_finite(state, cont.grid.node(j))?;
            if !visit(j, state.0, state.1) {
                return Ok(());
            }
        }
    } else {
        // From x_n = +L (periodic image of x_0) down to x_0.
        let mut p = cont.fine_index(n);
        for j in (0..n).rev() {
            for _ in 0..s {
                state = scheme.step(state, -dx, cont.fine[p], cont.fine[p - 1], cont.fine[p - 2]);
                p -= 2;
            }
            check_finite(state, cont.grid.node(j))?;
            if !visit(j, state.0, state.1) {
                return Ok(());
            }
        }
    }
    Ok(())
}

fn check_finite<T: Real>((m, p): (Cplx<T>, Cplx<T>), x: T) -> Result<(), JostError> {
    if m.re.is_finite() && m.im.is_finite() && p.re.is_finite() && p.im.is_finite() {
        Ok(())
    } else {
        Err(JostError::Overflow { x: x.as_f64() })
    }
}

fn validate_k<T: Real>(k: Cplx<T>) -> Result<(), JostError> {
    if k.im < T::zero() || !k.re.is_finite() || !k.im.is_finite() {
        return Err(JostError::LowerHalfPlane { im_k: k.im.as_f64() });
    }
    Ok(())
}

pub(crate) fn solve_with<T: Real>(cont: &Continuation<T>, side: Side, k: Cplx<T>) -> Result<JostField<T>, JostError> {
    validate_k(k)?;
    let n = cont.grid.len();
    let zero = Complex::new(T::zero(), T::zero());
    let mut m = vec![zero; n];
    let mut dm = vec![zero; n];
    march(cont, side, k, |j, a, b| {
        m[j] = a;
        dm[j] = b;
        true
    })?;
    Ok(JostField {
        grid: cont.grid,
        k,
        side,
        m,
        dm_dx: dm,
    })
}

/// `(m, ∂ₓm)` at the node `x = 0` only.
pub(crate) fn at_origin<T: Real>(cont: &Continuation<T>, side: Side, k: Cplx<T>) -> Result<(Cplx<T>, Cplx<T>), JostError> {
    validate_k(k)?;
    let origin = cont.grid.origin();
    let zero = Complex::new(T::zero(), T::zero());
    let mut out = (zero, zero);
    march(cont, side, k, |j, a, b| {
        if j == origin {
            out = (a, b);
            false
        } else {
            true
        }
    })?;
    Ok(out)
}

fn solve<T: Real>(q: &Potential<T>, k: Cplx<T>, side: Side, config: &JostConfig) -> Result<JostField<T>, JostError> {
    q.check_decay(crate::grid::DEFAULT_BOUNDARY_DECAY)?;
    let cont = Continuation::new(q, config.substeps_for(k.norm(), q.grid().step()));
    solve_with(&cont, side, k)
}

/// `m₁(·,k)` and its derivative on every node, marching in from `x = +L`.
pub fn solve_m1<T: Real>(q: &Potential<T>, k: Cplx<T>) -> Result<JostField<T>, JostError> {
    solve(q, k, Side::Right, &JostConfig::default())
}

/// `m₂(·,k)` and its derivative on every node, marching in from `x = -L`.
pub fn solve_m2<T: Real>(q: &Potential<T>, k: Cplx<T>) -> Result<JostField<T>, JostError> {
    solve(q, k, Side::Left, &JostConfig::default())
}

/// [`solve_m1`] / [`solve_m2`] with explicit step control.
pub fn solve_jost<T: Real>(
    q: &Potential<T>,
    k: Cplx<T>,
    side: Side,
    config: &JostConfig,
) -> Result<JostField<T>, JostError> {
    solve(q, k, side, config)
}

/// `W(q, iκ)`, real for real `q`. Uses `2ik = -2κ` in the Wronskian.
pub fn w_imag_axis<T: Real>(q: &Potential<T>, kappa: T) -> Result<T, JostError> {
    q.check_decay(crate::grid::DEFAULT_BOUNDARY_DECAY)?;
    let cont = Continuation::new(q, JostConfig::default().substeps_for(kappa, q.grid().step()));
    w_imag_axis_with(&cont, kappa)
}

pub(crate) fn w_imag_axis_with<T: Real>(cont: &Continuation<T>, kappa: T) -> Result<T, JostError> {
    let k = Complex::new(T::zero(), kappa);
    let (m1, dm1) = at_origin(cont, Side::Right, k)?;
    let (m2, dm2) = at_origin(cont, Side::Left, k)?;
    let w = Complex::new(T::zero(), T::lit(2.0)) * k * m2 * m1 + m2 * dm1 - dm2 * m1;
    Ok(w.re)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gaussian(amp: f64) -> Potential<f64> {
        let g = SpatialGrid::new(20.0, 2048).unwrap();
        Potential::from_fn(g, |x: f64| amp * (-x * x).exp()).unwrap()
    }

    #[test]
    fn free_solution_is_identically_one() {
        let q = Potential::zero(SpatialGrid::new(10.0, 256).unwrap());
        for side in [Side::Right, Side::Left] {
            let f = solve_jost(&q, Complex::new(1.3, 0.0), side, &JostConfig::default()).unwrap();
            assert!(f.m.iter().all(|v| *v == Complex::new(1.0, 0.0)));
            assert!(f.dm_dx.iter().all(|v| *v == Complex::new(0.0, 0.0)));
        }
    }

    #[test]
    fn free_wronskian_on_axis() {
        let q = Potential::zero(SpatialGrid::new(10.0, 256).unwrap());
        assert_eq!(w_imag_axis(&q, 1.0).unwrap(), -2.0);
    }

    #[test]
    fn lower_half_plane_rejected() {
        let q = gaussian(0.3);
        assert!(matches!(solve_m1(&q, Complex::new(1.0, -0.5)), Err(JostError::LowerHalfPlane { .. })));
    }

    #[test]
    fn reality_and_mirror_symmetry() {
        let q = gaussian(0.3);
        let k = 1.7;
        let a = solve_m1(&q, Complex::new(k, 0.0)).unwrap();
        let b = solve_m1(&q, Complex::new(-k, 0.0)).unwrap();
        let c = solve_m2(&q, Complex::new(k, 0.0)).unwrap();
        let n = q.grid().len();
        for j in 1..n {
            assert!((a.m[j] - b.m[j].conj()).norm() < 1e-10);
            // Even q: m₂(-x) = m₁(x); node x_j mirrors x_{n-j}.
            assert!((c.m[n - j] - a.m[j]).norm() < 1e-10);
        }
    }

    #[test]
    fn repulsive_barrier_has_negative_axis_wronskian() {
        let q = gaussian(0.3);
        for kappa in [0.0, 0.5, 2.0, 10.0] {
            assert!(w_imag_axis(&q, kappa).unwrap() < 0.0);
        }
    }
}
