//! Gamma and chi-square variates.
//!
//! Marsaglia & Tsang (2000) squeeze/rejection for shape ≥ 1. Shapes below
//! one draw `Gamma(shape + 1)` and multiply by `U^(1/shape)`; χ²(1) needs
//! this path since its shape is 1/2.

use rand::Rng;
use rand_distr::{Distribution, Open01, StandardNormal};

#[derive(Debug, Clone, Copy)]
pub struct GammaSampler {
    d: f64,
    c: f64,
    inv_shape: Option<f64>,
}

impl GammaSampler {
    /// Unit-scale gamma with the given shape. Panics unless `shape > 0`.
    pub fn new(shape: f64) -> Self {
        assert!(
            shape > 0.0 && shape.is_finite(),
            "gamma shape must be positive"
        );
        let (base, inv_shape) = if shape < 1.0 {
            (shape + 1.0, Some(1.0 / shape))
        } else {
            (shape, None)
        };
        let d = base - 1.0 / 3.0;
        Self {
            d,
            c: 1.0 / (9.0 * d).sqrt(),
            inv_shape,
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let g = loop {
            let x: f64 = StandardNormal.sample(rng);
            let v = 1.0 + self.c * x;
            if v <= 0.0 {
                continue;
            }
            let v = v * v * v;
            let u: f64 = Open01.sample(rng);
            let x2 = x * x;
            if u < 1.0 - 0.0331 * x2 * x2 || u.ln() < 0.5 * x2 + self.d * (1.0 - v + v.ln()) {
                break self.d * v;
            }
        };
        match self.inv_shape {
            Some(inv) => {
                let u: f64 = Open01.sample(rng);
                g * u.powf(inv)
            }
            None => g,
        }
    }
}

/// Draws `S² = σ² X / ν` with `X ~ χ²(ν)`.
#[derive(Debug, Clone, Copy)]
pub struct ComponentVarianceSampler {
    gamma: GammaSampler,
    scale: f64,
}

impl ComponentVarianceSampler {
    pub fn new(nu: f64, sigma_sq: f64) -> Self {
        assert!(nu > 0.0 && nu.is_finite(), "dof must be positive");
        assert!(
            sigma_sq > 0.0 && sigma_sq.is_finite(),
            "sigma_sq must be positive"
        );
        Self {
            gamma: GammaSampler::new(nu / 2.0),
            // χ²(ν) = 2 · Gamma(ν/2)
            scale: 2.0 * sigma_sq / nu,
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        self.scale * self.gamma.sample(rng)
    }
}

/// One scaled chi-square variance estimate: `E[S²] = σ²`, `Var[S²] = 2σ⁴/ν`.
pub fn sample_component_variance<R: Rng + ?Sized>(nu: f64, sigma_sq: f64, rng: &mut R) -> f64 {
    ComponentVarianceSampler::new(nu, sigma_sq).sample(rng)
}
