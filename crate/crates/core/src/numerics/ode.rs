//! Dormand–Prince 5(4) integrator for complex linear and nonlinear systems.

use crate::error::{Error, Result};
use num_complex::Complex64;

use crate::numerics::CVector;

const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const B5: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];
const MAX_STEPS: usize = 200_000;

#[derive(Clone, Debug)]
pub struct OdeSolution {
    pub y: CVector,
    pub steps: usize,
    pub rejected: usize,
}

/// Integrates `y' = f(x, y)` from `x0` to `x1` with mixed error control
/// `|err_i| ≤ tol · (1 + |y_i|)`.
pub fn dopri5<F>(f: F, x0: f64, x1: f64, y0: &CVector, tol: f64) -> Result<OdeSolution>
where
    F: Fn(f64, &CVector) -> CVector,
{
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidInput(format!("ODE tolerance must be positive, got {tol}")));
    }
    let span = x1 - x0;
    if span == 0.0 {
        return Ok(OdeSolution { y: y0.clone(), steps: 0, rejected: 0 });
    }
    let dir = span.signum();
    let mut x = x0;
    let mut y = y0.clone();
    let mut h = dir * (span.abs() * 1e-3).max(1e-12);
    let mut k1 = f(x, &y);
    let (mut steps, mut rejected) = (0, 0);
    while (x1 - x) * dir > 0.0 {
        if steps + rejected > MAX_STEPS {
            return Err(Error::NumericalFailure(format!("ODE step limit reached at x = {x}")));
        }
        if (x + h - x1) * dir > 0.0 {
            h = x1 - x;
        }
        let mut k = vec![k1.clone()];
        for s in 1..7 {
            let mut ys = y.clone();
            for (j, kj) in k.iter().enumerate() {
                if A[s][j] != 0.0 {
                    ys.axpy(Complex64::new(h * A[s][j], 0.0), kj, Complex64::new(1.0, 0.0));
                }
            }
            k.push(f(x + C[s] * h, &ys));
        }
        let mut y5 = y.clone();
        let mut err = CVector::zeros(y.len());
        for s in 0..7 {
            y5 += &k[s] * Complex64::new(h * B5[s], 0.0);
            err += &k[s] * Complex64::new(h * (B5[s] - B4[s]), 0.0);
        }
        let ratio = err
            .iter()
            .zip(y.iter().zip(y5.iter()))
            .map(|(e, (a, b))| e.norm() / (tol * (1.0 + a.norm().max(b.norm()))))
            .fold(0.0, f64::max);
        if !ratio.is_finite() {
            return Err(Error::NumericalFailure(format!("non-finite ODE state at x = {x}")));
        }
        if ratio <= 1.0 {
            x += h;
            y = y5;
            k1 = k.pop().expect("seven stages");
            steps += 1;
        } else {
            rejected += 1;
        }
        let factor = if ratio == 0.0 { 5.0 } else { (0.9 * ratio.powf(-0.2)).clamp(0.2, 5.0) };
        h *= factor;
        if h.abs() < 1e-14 * x.abs().max(1.0) {
            return Err(Error::NumericalFailure(format!("ODE step size underflow at x = {x}")));
        }
    }
    Ok(OdeSolution { y, steps, rejected })
}
