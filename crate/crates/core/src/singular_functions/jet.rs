//! Truncated Taylor series, used to differentiate the cutoff exactly.

#[derive(Clone, Debug, PartialEq)]
pub(crate) struct Jet(pub Vec<f64>);

impl Jet {
    pub fn constant(c: f64, order: usize) -> Self {
        let mut v = vec![0.0; order + 1];
        v[0] = c;
        Self(v)
    }

    /// Jet of `t ↦ e^t` at `t0`.
    pub fn exp_of_variable(t0: f64, order: usize) -> Self {
        let base = t0.exp();
        let mut v = Vec::with_capacity(order + 1);
        let mut fact = 1.0;
        for k in 0..=order {
            if k > 0 {
                fact *= k as f64;
            }
            v.push(base / fact);
        }
        Self(v)
    }

    pub fn order(&self) -> usize {
        self.0.len() - 1
    }

    pub fn affine(&self, scale: f64, shift: f64) -> Self {
        let mut v: Vec<f64> = self.0.iter().map(|c| c * scale).collect();
        v[0] += shift;
        Self(v)
    }

    pub fn add(&self, other: &Self) -> Self {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.0.len();
        Self((0..n).map(|k| (0..=k).map(|j| self.0[j] * other.0[k - j]).sum()).collect())
    }

    pub fn recip(&self) -> Self {
        let n = self.0.len();
        let mut r = vec![0.0; n];
        r[0] = 1.0 / self.0[0];
        for k in 1..n {
            let s: f64 = (1..=k).map(|j| self.0[j] * r[k - j]).sum();
            r[k] = -s * r[0];
        }
        Self(r)
    }

    pub fn exp(&self) -> Self {
        let n = self.0.len();
        let mut h = vec![0.0; n];
        h[0] = self.0[0].exp();
        for k in 1..n {
            let s: f64 = (1..=k).map(|j| j as f64 * self.0[j] * h[k - j]).sum();
            h[k] = s / k as f64;
        }
        Self(h)
    }

    /// Derivatives `f^{(k)}(t0)` from the Taylor coefficients.
    pub fn derivatives(&self) -> Vec<f64> {
        let mut fact = 1.0;
        self.0
            .iter()
            .enumerate()
            .map(|(k, c)| {
                if k > 0 {
                    fact *= k as f64;
                }
                c * fact
            })
            .collect()
    }
}
