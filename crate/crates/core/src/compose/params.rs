use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Knobs of the masking pipeline. `Default` is the reference configuration:
/// 500 px working size, lightness weight 0.6, blur kernel 5, 250 px output.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ComposeParams {
    /// Side of the square working canvas the face is upscaled to.
    pub target_side: u32,
    /// Weight pulling the mask's mean lightness toward the face's.
    pub alpha: f64,
    /// Odd Gaussian kernel size for the mask boundary.
    pub beta: usize,
    /// Radius of the top-of-face offset, as a fraction of interocular distance.
    pub perturb_face_top: f64,
    /// Radius of the top-of-mask offset, as a fraction of the mask points' height.
    pub perturb_mask_top: f64,
    pub seed: u64,
    pub output_side: u32,
}

impl Default for ComposeParams {
    fn default() -> Self {
        Self {
            target_side: 500,
            alpha: 0.6,
            beta: 5,
            perturb_face_top: 0.1,
            perturb_mask_top: 0.1,
            seed: 0,
            output_side: 250,
        }
    }
}

impl ComposeParams {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.alpha) {
            return Err(Error::invalid(format!("alpha must lie in [0, 1], got {}", self.alpha)));
        }
        if self.beta == 0 || self.beta % 2 == 0 {
            return Err(Error::invalid(format!("beta must be odd and >= 1, got {}", self.beta)));
        }
        if self.output_side == 0 {
            return Err(Error::invalid("output side must be positive"));
        }
        if self.target_side < self.output_side {
            return Err(Error::invalid(format!(
                "target side {} is smaller than output side {}",
                self.target_side, self.output_side
            )));
        }
        for (name, v) in [
            ("perturb_face_top", self.perturb_face_top),
            ("perturb_mask_top", self.perturb_mask_top),
        ] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::invalid(format!("{name} must be finite and >= 0, got {v}")));
            }
        }
        Ok(())
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    /// Disables both landmark perturbations.
    pub fn without_perturbation(mut self) -> Self {
        self.perturb_face_top = 0.0;
        self.perturb_mask_top = 0.0;
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_reference_configuration() {
        let p = ComposeParams::default();
        assert_eq!((p.target_side, p.alpha, p.beta, p.output_side), (500, 0.6, 5, 250));
        p.validate().unwrap();
    }

    #[test]
    fn invalid_values_rejected() {
        let base = ComposeParams::default();
        for bad in [
            ComposeParams { alpha: 1.5, ..base },
            ComposeParams { beta: 4, ..base },
            ComposeParams { beta: 0, ..base },
            ComposeParams { target_side: 200, ..base },
            ComposeParams { perturb_face_top: -0.1, ..base },
            ComposeParams { perturb_mask_top: f64::NAN, ..base },
        ] {
            assert!(bad.validate().is_err(), "{bad:?}");
        }
    }
}
