use num_complex::Complex64;

use crate::error::{Error, Result};

// Gauss–Kronrod 7/15 abscissae and weights on [-1, 1].
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Result of an adaptive integration.
#[derive(Clone, Copy, Debug)]
pub struct Quadrature {
    pub value: Complex64,
    pub error: f64,
    pub intervals: usize,
}

struct Panel {
    a: f64,
    b: f64,
    value: Complex64,
    error: f64,
}

fn gk15<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64) -> Panel {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for (j, &x) in XGK.iter().take(7).enumerate() {
        let pair = f(center - half * x) + f(center + half * x);
        kronrod += pair * WGK[j];
        if j % 2 == 1 {
            gauss += pair * WG[j / 2];
        }
    }
    let value = kronrod * half;
    let error = ((kronrod - gauss) * half).norm();
    Panel { a, b, value, error }
}

/// Globally adaptive Gauss–Kronrod integration of a complex integrand.
///
/// The panel with the largest error estimate is bisected until the summed
/// estimate falls below `tol` (or below the rounding floor of the result).
pub fn adaptive_quadrature<F>(f: F, a: f64, b: f64, tol: f64) -> Result<Quadrature>
where
    F: Fn(f64) -> Complex64,
{
    const MAX_PANELS: usize = 4000;
    if a == b {
        return Ok(Quadrature { value: Complex64::new(0.0, 0.0), error: 0.0, intervals: 0 });
    }
    let mut panels = vec![gk15(&f, a, b)];
    loop {
        let value: Complex64 = panels.iter().map(|p| p.value).sum();
        let error: f64 = panels.iter().map(|p| p.error).sum();
        if !(value.re.is_finite() && value.im.is_finite() && error.is_finite()) {
            return Err(Error::QuadratureFailure { intervals: panels.len(), error: f64::INFINITY });
        }
        let floor = 64.0 * f64::EPSILON * panels.iter().map(|p| p.value.norm()).sum::<f64>();
        if error <= tol.max(floor) {
            return Ok(Quadrature { value, error, intervals: panels.len() });
        }
        if panels.len() >= MAX_PANELS {
            return Err(Error::QuadratureFailure { intervals: panels.len(), error });
        }
        let worst = panels
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.error.total_cmp(&y.1.error))
            .map(|(i, _)| i)
            .expect("non-empty");
        let p = panels.swap_remove(worst);
        let mid = 0.5 * (p.a + p.b);
        panels.push(gk15(&f, p.a, mid));
        panels.push(gk15(&f, mid, p.b));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::c64;

    #[test]
    fn polynomial() {
        let q = adaptive_quadrature(|x| c64(x * x, 0.0), 0.0, 1.0, 1e-12).unwrap();
        assert!((q.value - c64(1.0 / 3.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn oscillatory_power() {
        // ∫₀¹ x^{i} dx = 1/(1+i)
        let q = adaptive_quadrature(|x| c64(0.0, x.ln()).exp(), 1e-300, 1.0, 1e-10);
        let q = q.unwrap();
        assert!((q.value - c64(1.0, 0.0) / c64(1.0, 1.0)).norm() < 1e-9, "{:?}", q.value);
    }

    #[test]
    fn reports_failure_for_singular_integrand() {
        let r = adaptive_quadrature(|x| c64(1.0 / x, 0.0), 0.0, 1.0, 1e-12);
        assert!(matches!(r, Err(Error::QuadratureFailure { .. })));
    }
}
