use std::fmt;

use num_traits::Signed;

use crate::error::{domain, Result};
use crate::rational::{parse_rational, rat, Rational};

/// The pair `(alpha, sigma)` of the Poisson-type law on `alpha * N_0`
/// with intensity `sigma / alpha^2`. Both are strictly positive.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ModelParams {
    alpha: Rational,
    sigma: Rational,
}

impl ModelParams {
    pub fn new(alpha: Rational, sigma: Rational) -> Result<Self> {
        if !alpha.is_positive() {
            return domain(format!("alpha must be positive, got {alpha}"));
        }
        if !sigma.is_positive() {
            return domain(format!("sigma must be positive, got {sigma}"));
        }
        Ok(ModelParams { alpha, sigma })
    }

    pub fn parse(alpha: &str, sigma: &str) -> Result<Self> {
        ModelParams::new(parse_rational(alpha)?, parse_rational(sigma)?)
    }

    pub fn alpha(&self) -> &Rational {
        &self.alpha
    }

    pub fn sigma(&self) -> &Rational {
        &self.sigma
    }

    /// `sigma / alpha^2`.
    pub fn intensity(&self) -> Rational {
        &self.sigma / (&self.alpha * &self.alpha)
    }

    /// `sigma / alpha`, the mean of the law and the shift in `S = E_{sigma/alpha} T_alpha`.
    pub fn mean(&self) -> Rational {
        &self.sigma / &self.alpha
    }

    /// `(1, 1)`, `(1/2, 3/4)`, `(2, 5)`.
    pub fn standard_sets() -> Vec<ModelParams> {
        vec![
            ModelParams::new(rat(1, 1), rat(1, 1)).unwrap(),
            ModelParams::new(rat(1, 2), rat(3, 4)).unwrap(),
            ModelParams::new(rat(2, 1), rat(5, 1)).unwrap(),
        ]
    }
}

impl fmt::Debug for ModelParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(alpha={}, sigma={})", self.alpha, self.sigma)
    }
}

impl fmt::Display for ModelParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn positivity_is_enforced() {
        assert!(ModelParams::new(rat(0, 1), rat(1, 1)).is_err());
        assert!(ModelParams::new(rat(1, 1), rat(-1, 2)).is_err());
        let p = ModelParams::parse("0.5", "3/4").unwrap();
        assert_eq!(p.intensity(), rat(3, 1));
        assert_eq!(p.mean(), rat(3, 2));
    }
}
