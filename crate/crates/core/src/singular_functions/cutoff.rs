use serde::{Deserialize, Serialize};

use super::jet::Jet;
use crate::error::{Error, Result};

/// Smooth cutoff `ω` with `ω ≡ 1` on `[0, plateau_end]` and `ω ≡ 0` on
/// `[support_end, ∞)`, bridged by the `exp(−1/s)` transition.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CutoffSpec {
    pub plateau_end: f64,
    pub support_end: f64,
}

impl Default for CutoffSpec {
    fn default() -> Self {
        Self { plateau_end: 0.25, support_end: 0.5 }
    }
}

fn bump(s: &Jet) -> Jet {
    if s.0[0] <= 0.0 {
        Jet::constant(0.0, s.order())
    } else {
        s.recip().affine(-1.0, 0.0).exp()
    }
}

impl CutoffSpec {
    pub fn new(plateau_end: f64, support_end: f64) -> Result<Self> {
        if !(plateau_end > 0.0 && plateau_end < support_end && support_end.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "cutoff needs 0 < plateau_end < support_end, got ({plateau_end}, {support_end})"
            )));
        }
        Ok(Self { plateau_end, support_end })
    }

    /// Jet of `ω(x(s))` given the jet of `x`.
    fn compose(&self, x: &Jet) -> Jet {
        let order = x.order();
        if x.0[0] <= self.plateau_end {
            return Jet::constant(1.0, order);
        }
        if x.0[0] >= self.support_end {
            return Jet::constant(0.0, order);
        }
        let width = self.support_end - self.plateau_end;
        let s = x.affine(1.0 / width, -self.plateau_end / width);
        let rising = bump(&s);
        let falling = bump(&s.affine(-1.0, 1.0));
        let step = rising.mul(&rising.add(&falling).recip());
        step.affine(-1.0, 1.0)
    }

    pub fn value(&self, x: f64) -> f64 {
        self.compose(&Jet(vec![x])).0[0]
    }

    /// `ω^{(k)}(x)` for `k = 0..=order`.
    pub fn derivatives(&self, x: f64, order: usize) -> Vec<f64> {
        let mut v = vec![0.0; order + 1];
        v[0] = x;
        if order > 0 {
            v[1] = 1.0;
        }
        self.compose(&Jet(v)).derivatives()
    }

    /// Derivatives in the logarithmic variable: `∂_t^k [ω(e^t)]` for `k = 0..=order`.
    pub fn log_derivatives(&self, t: f64, order: usize) -> Vec<f64> {
        self.compose(&Jet::exp_of_variable(t, order)).derivatives()
    }
}
