use super::ModelError;

/// Per-agent response function `f_j`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InteractionFunction {
    /// `f(t) = min(max(offset + gain·t, lower), upper)`; clamps may be
    /// infinite.
    ClampedAffine {
        offset: f64,
        gain: f64,
        lower: f64,
        upper: f64,
    },
    /// `f(t) = beta·t` below `threshold`, `cap` at or above it.
    RogersVeraart { beta: f64, threshold: f64, cap: f64 },
}

impl InteractionFunction {
    pub fn clamped_affine(
        offset: f64,
        gain: f64,
        lower: f64,
        upper: f64,
    ) -> Result<Self, ModelError> {
        if !offset.is_finite() {
            return Err(ModelError::invalid("offset", "must be finite"));
        }
        if !(gain >= 0.0) || !gain.is_finite() {
            return Err(ModelError::invalid("gain", "must be finite and nonnegative"));
        }
        if lower.is_nan() || upper.is_nan() || lower == f64::INFINITY || upper == f64::NEG_INFINITY
        {
            return Err(ModelError::invalid("lower/upper", "invalid clamp"));
        }
        if !(lower < upper) {
            return Err(ModelError::invalid("lower/upper", "lower clamp must be below upper"));
        }
        Ok(InteractionFunction::ClampedAffine {
            offset,
            gain,
            lower,
            upper,
        })
    }

    pub fn identity() -> Self {
        Self::linear(1.0)
    }

    /// `f(t) = gain·t` with no clamps.
    pub fn linear(gain: f64) -> Self {
        InteractionFunction::ClampedAffine {
            offset: 0.0,
            gain,
            lower: f64::NEG_INFINITY,
            upper: f64::INFINITY,
        }
    }

    /// `f(t) = min(max(t, lower), upper)`.
    pub fn bounded_identity(lower: f64, upper: f64) -> Result<Self, ModelError> {
        if !lower.is_finite() || !upper.is_finite() {
            return Err(ModelError::invalid("lower/upper", "bounds must be finite"));
        }
        Self::clamped_affine(0.0, 1.0, lower, upper)
    }

    pub fn rogers_veraart(beta: f64, threshold: f64, cap: f64) -> Result<Self, ModelError> {
        if !(beta > 0.0 && beta < 1.0) {
            return Err(ModelError::invalid("beta", "must lie in (0, 1)"));
        }
        if !threshold.is_finite() {
            return Err(ModelError::invalid("threshold", "must be finite"));
        }
        if !(cap > 0.0) || !cap.is_finite() {
            return Err(ModelError::invalid("cap", "must be positive and finite"));
        }
        Ok(InteractionFunction::RogersVeraart {
            beta,
            threshold,
            cap,
        })
    }

    pub fn eval(&self, t: f64) -> f64 {
        match *self {
            InteractionFunction::ClampedAffine {
                offset,
                gain,
                lower,
                upper,
            } => (offset + gain * t).max(lower).min(upper),
            InteractionFunction::RogersVeraart {
                beta,
                threshold,
                cap,
            } => {
                if t < threshold {
                    beta * t
                } else {
                    cap
                }
            }
        }
    }

    /// Lipschitz constant; `None` for the discontinuous Rogers-Veraart map.
    pub fn lipschitz(&self) -> Option<f64> {
        match *self {
            InteractionFunction::ClampedAffine { gain, .. } => Some(gain),
            InteractionFunction::RogersVeraart { .. } => None,
        }
    }

    pub fn is_monotone(&self) -> bool {
        match *self {
            InteractionFunction::ClampedAffine { gain, .. } => gain >= 0.0,
            InteractionFunction::RogersVeraart {
                beta,
                threshold,
                cap,
            } => beta * threshold <= cap,
        }
    }

    pub fn is_bounded(&self) -> bool {
        match *self {
            InteractionFunction::ClampedAffine { lower, upper, .. } => {
                lower.is_finite() && upper.is_finite()
            }
            InteractionFunction::RogersVeraart { .. } => false,
        }
    }

    /// Closed interval containing the range, when finite at both ends.
    pub fn range_bounds(&self) -> Option<(f64, f64)> {
        match *self {
            InteractionFunction::ClampedAffine { lower, upper, .. } if self.is_bounded() => {
                Some((lower, upper))
            }
            _ => None,
        }
    }

    /// Upper end of the range (`+∞` when unbounded above).
    pub fn sup(&self) -> f64 {
        match *self {
            InteractionFunction::ClampedAffine { upper, .. } => upper,
            InteractionFunction::RogersVeraart {
                beta,
                threshold,
                cap,
            } => (beta * threshold).max(cap),
        }
    }

    /// `min(max(t, ℓ), u)` with finite `ℓ < u`.
    pub fn is_bounded_identity(&self) -> bool {
        matches!(*self, InteractionFunction::ClampedAffine { offset, gain, .. }
            if offset == 0.0 && gain == 1.0 && self.is_bounded())
    }

    /// Derivative at `t`. At a clamp breakpoint the one-sided value from
    /// inside the unclamped region is used, so a bounded identity has
    /// `f'(u) = 1`. `None` for Rogers-Veraart.
    pub fn derivative(&self, t: f64) -> Option<f64> {
        match *self {
            InteractionFunction::ClampedAffine {
                offset,
                gain,
                lower,
                upper,
            } => {
                if gain == 0.0 {
                    return Some(0.0);
                }
                let y = offset + gain * t;
                Some(if y >= lower && y <= upper { gain } else { 0.0 })
            }
            InteractionFunction::RogersVeraart { .. } => None,
        }
    }
}
