//! Run constants and the bucket-size threshold `f`.
//!
//! Paper mode derives `h = exp(1/ε)` and `c = exp(h)`, which overflows an `f64` once
//! `ε` drops below about 0.152 and makes every bound astronomically large well before that.
//! Surrogate mode takes `h` and `c` as given. Either way `b = c k`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gamma::GammaBase;

/// Below this magnitude direct products are replaced by `exp` of the log-space value.
pub const LOG_SPACE_SWITCH: f64 = 1e-300;

/// Relative slack when comparing an integer count against a real threshold.
pub const THRESHOLD_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Paper,
    Surrogate,
}

/// The constants file: `{mode, epsilon, h, c, k, m}` plus an optional `famSize`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstantsFile {
    pub mode: Mode,
    pub epsilon: f64,
    #[serde(default)]
    pub h: Option<f64>,
    #[serde(default)]
    pub c: Option<f64>,
    pub k: usize,
    pub m: usize,
    #[serde(default, rename = "famSize", alias = "fam_size")]
    pub fam_size: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Constants {
    pub mode: Mode,
    pub epsilon: f64,
    pub h: f64,
    pub c: f64,
    pub k: usize,
    pub m: usize,
    /// Reference cardinality `|F|` used by the thresholds.
    pub fam_size: usize,
}

impl Constants {
    pub fn surrogate(epsilon: f64, h: f64, c: f64, k: usize, m: usize, fam_size: usize) -> Result<Self> {
        let out = Constants {
            mode: Mode::Surrogate,
            epsilon,
            h,
            c,
            k,
            m,
            fam_size,
        };
        out.validate()?;
        Ok(out)
    }

    pub fn paper(epsilon: f64, k: usize, m: usize, fam_size: usize) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon < 1.0) {
            return Err(Error::InvalidArgument(format!("epsilon must lie in (0,1), got {epsilon}")));
        }
        let h = (1.0 / epsilon).exp();
        let c = h.exp();
        if !c.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "c = exp(exp(1/epsilon)) overflows for epsilon = {epsilon}; use surrogate constants"
            )));
        }
        let out = Constants {
            mode: Mode::Paper,
            epsilon,
            h,
            c,
            k,
            m,
            fam_size,
        };
        out.validate()?;
        Ok(out)
    }

    /// `fam_size` from the file wins over `default_fam_size`.
    pub fn from_file(file: &ConstantsFile, default_fam_size: usize) -> Result<Self> {
        let fam_size = file.fam_size.unwrap_or(default_fam_size);
        match file.mode {
            Mode::Paper => Self::paper(file.epsilon, file.k, file.m, fam_size),
            Mode::Surrogate => {
                let (h, c) = file.h.zip(file.c).ok_or_else(|| {
                    Error::InvalidArgument("surrogate constants need both h and c".into())
                })?;
                Self::surrogate(file.epsilon, h, c, file.k, file.m, fam_size)
            }
        }
    }

    pub fn parse_json(text: &str, default_fam_size: usize) -> Result<Self> {
        let file: ConstantsFile = serde_json::from_str(text)?;
        Self::from_file(&file, default_fam_size)
    }

    pub fn with_fam_size(mut self, fam_size: usize) -> Self {
        self.fam_size = fam_size;
        self
    }

    fn validate(&self) -> Result<()> {
        if !(self.epsilon > 0.0 && self.epsilon < 1.0) {
            return Err(Error::InvalidArgument(format!("epsilon must lie in (0,1), got {}", self.epsilon)));
        }
        if !(self.h > 1.0 && self.c > 1.0 && self.h.is_finite() && self.c.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "h and c must be finite and exceed 1, got h = {}, c = {}",
                self.h, self.c
            )));
        }
        if self.k < 2 {
            return Err(Error::InvalidArgument(format!("k must be at least 2, got {}", self.k)));
        }
        if self.m < 1 {
            return Err(Error::InvalidArgument("m must be positive".into()));
        }
        Ok(())
    }

    /// `b = c k`.
    pub fn b(&self) -> f64 {
        self.c * self.k as f64
    }

    pub fn gamma_base(&self) -> Result<GammaBase> {
        GammaBase::from_f64(self.b())
    }

    pub fn threshold(&self) -> ThresholdF {
        ThresholdF { constants: self.clone() }
    }

    fn ln_k(&self) -> f64 {
        (self.k as f64).ln()
    }

    /// `ln(c^h k ln k)`, the per-unit decay of `f`.
    pub fn ln_decay(&self) -> f64 {
        self.h * self.c.ln() + self.ln_k() + self.ln_k().ln()
    }

    /// `ln(c^c k ln k)`, the base of the spreadness hypothesis on the input family.
    pub fn ln_spread_base(&self) -> f64 {
        self.c * self.c.ln() + self.ln_k() + self.ln_k().ln()
    }

    /// `ln(ε^m |F|)`, the floor for a base-free piece.
    pub fn ln_floor(&self) -> f64 {
        self.m as f64 * self.epsilon.ln() + (self.fam_size as f64).ln()
    }

    /// `ε^m |F|`.
    pub fn floor(&self) -> f64 {
        from_log(self.ln_floor(), || self.epsilon.powi(self.m as i32) * self.fam_size as f64)
    }

    pub fn admits_floor(&self, count: usize) -> bool {
        admits(count, self.ln_floor())
    }
}

/// `f(x) = k^-5 ε^{2m} (c^h k ln k)^-x |F|`.
#[derive(Debug, Clone, PartialEq)]
pub struct ThresholdF {
    constants: Constants,
}

impl ThresholdF {
    pub fn ln_eval(&self, x: usize) -> f64 {
        let c = &self.constants;
        -5.0 * c.ln_k() + 2.0 * c.m as f64 * c.epsilon.ln() - x as f64 * c.ln_decay() + (c.fam_size as f64).ln()
    }

    pub fn eval(&self, x: usize) -> f64 {
        let c = &self.constants;
        from_log(self.ln_eval(x), || {
            let decay = c.c.powf(c.h) * c.k as f64 * (c.k as f64).ln();
            (c.k as f64).powi(-5) * c.epsilon.powi(2 * c.m as i32) * decay.powi(-(x as i32)) * c.fam_size as f64
        })
    }

    /// `count >= f(x)`, up to [`THRESHOLD_TOLERANCE`].
    pub fn admits(&self, count: usize, x: usize) -> bool {
        admits(count, self.ln_eval(x))
    }
}

fn from_log(ln_value: f64, direct: impl FnOnce() -> f64) -> f64 {
    if ln_value < LOG_SPACE_SWITCH.ln() {
        return ln_value.exp();
    }
    let value = direct();
    if value.is_finite() && value >= LOG_SPACE_SWITCH {
        value
    } else {
        ln_value.exp()
    }
}

fn admits(count: usize, ln_threshold: f64) -> bool {
    if count == 0 {
        return false;
    }
    (count as f64).ln() >= ln_threshold + (1.0 - THRESHOLD_TOLERANCE).ln()
}
