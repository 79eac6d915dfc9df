//! Truncated formal power series in one variable `t`.
//!
//! A series of order `N` stores the exact coefficients of `t^0..=t^N`.
//! Binary operations truncate to the smaller order.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::error::{domain, Result};
use crate::rational::Rational;

#[derive(Clone, PartialEq, Eq)]
pub struct Series {
    order: usize,
    coeffs: Vec<Rational>,
}

impl Series {
    /// Pads with zeros or truncates to exactly `order + 1` coefficients.
    pub fn new(order: usize, mut coeffs: Vec<Rational>) -> Self {
        coeffs.resize(order + 1, Rational::zero());
        Series { order, coeffs }
    }

    pub fn from_fn(order: usize, f: impl FnMut(usize) -> Rational) -> Self {
        Series {
            order,
            coeffs: (0..=order).map(f).collect(),
        }
    }

    pub fn zero(order: usize) -> Self {
        Series::new(order, Vec::new())
    }

    pub fn constant(order: usize, c: Rational) -> Self {
        Series::new(order, vec![c])
    }

    /// The series `t`.
    pub fn variable(order: usize) -> Self {
        Series::new(order, vec![Rational::zero(), Rational::one()])
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> &Rational {
        &self.coeffs[k]
    }

    pub fn truncate(&self, order: usize) -> Series {
        Series::new(order.min(self.order), self.coeffs.clone())
    }

    pub fn scale(&self, s: &Rational) -> Series {
        Series {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    pub fn derivative(&self) -> Series {
        Series::from_fn(self.order, |k| {
            if k < self.order {
                &self.coeffs[k + 1] * Rational::from_integer((k + 1).into())
            } else {
                Rational::zero()
            }
        })
    }

    /// `exp(A)` for `A(0) = 0`, from `E' = A' E`.
    pub fn exp(&self) -> Result<Series> {
        if !self.coeffs[0].is_zero() {
            return domain("series exp needs a zero constant term");
        }
        let n_max = self.order;
        let mut e = vec![Rational::zero(); n_max + 1];
        e[0] = Rational::one();
        for n in 1..=n_max {
            let mut acc = Rational::zero();
            for k in 1..=n {
                if self.coeffs[k].is_zero() {
                    continue;
                }
                acc += &self.coeffs[k] * Rational::from_integer(k.into()) * &e[n - k];
            }
            e[n] = acc / Rational::from_integer(n.into());
        }
        Ok(Series::new(n_max, e))
    }

    /// `log(A)` for `A(0) = 1`, from `A L' = A'`.
    pub fn log(&self) -> Result<Series> {
        if !self.coeffs[0].is_one() {
            return domain("series log needs constant term 1");
        }
        let n_max = self.order;
        let mut l = vec![Rational::zero(); n_max + 1];
        for n in 1..=n_max {
            let mut acc = &self.coeffs[n] * Rational::from_integer(n.into());
            for k in 1..n {
                if l[k].is_zero() {
                    continue;
                }
                acc -= Rational::from_integer(k.into()) * &l[k] * &self.coeffs[n - k];
            }
            l[n] = acc / Rational::from_integer(n.into());
        }
        Ok(Series::new(n_max, l))
    }

    /// `self(inner(t))`, Horner over series. Requires `inner(0) = 0`.
    pub fn compose(&self, inner: &Series) -> Result<Series> {
        if !inner.coeffs[0].is_zero() {
            return domain("series composition needs an inner series with zero constant term");
        }
        let order = self.order.min(inner.order);
        let inner = inner.truncate(order);
        let mut acc = Series::zero(order);
        for c in self.coeffs[..=order].iter().rev() {
            acc = &acc * &inner;
            acc.coeffs[0] += c;
        }
        Ok(acc)
    }

    /// Compositional inverse `C` with `B(C(t)) = t`, solved one order at a
    /// time. Requires `B(0) = 0` and `B'(0) != 0`.
    pub fn reversion(&self) -> Result<Series> {
        if !self.coeffs[0].is_zero() {
            return domain("series reversion needs a zero constant term");
        }
        if self.order == 0 {
            return domain("series reversion needs order >= 1");
        }
        if self.coeffs[1].is_zero() {
            return domain("series reversion needs a nonzero linear coefficient");
        }
        let order = self.order;
        let lead_inv = self.coeffs[1].recip();
        let mut c = Series::zero(order);
        c.coeffs[1] = lead_inv.clone();
        for n in 2..=order {
            // With c_n still zero, t^n of B(C) must be cancelled by b_1 c_n.
            let residual = self.truncate(n).compose(&c.truncate(n))?;
            c.coeffs[n] = -(&residual.coeffs[n] * &lead_inv);
        }
        Ok(c)
    }
}

impl Add for &Series {
    type Output = Series;

    fn add(self, rhs: &Series) -> Series {
        let order = self.order.min(rhs.order);
        Series::from_fn(order, |k| &self.coeffs[k] + &rhs.coeffs[k])
    }
}

impl Sub for &Series {
    type Output = Series;

    fn sub(self, rhs: &Series) -> Series {
        let order = self.order.min(rhs.order);
        Series::from_fn(order, |k| &self.coeffs[k] - &rhs.coeffs[k])
    }
}

impl Neg for &Series {
    type Output = Series;

    fn neg(self) -> Series {
        Series {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Mul for &Series {
    type Output = Series;

    fn mul(self, rhs: &Series) -> Series {
        let order = self.order.min(rhs.order);
        let mut coeffs = vec![Rational::zero(); order + 1];
        for (i, a) in self.coeffs[..=order].iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs[..=order - i].iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Series { order, coeffs }
    }
}

impl fmt::Debug for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Series[order {}](", self.order)?;
        for (k, c) in self.coeffs.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// `log(1 + a t) / a`.
pub fn log_one_plus_scaled(a: &Rational, order: usize) -> Series {
    Series::from_fn(order, |k| {
        if k == 0 {
            return Rational::zero();
        }
        let sign = if k % 2 == 1 { Rational::one() } else { -Rational::one() };
        sign * num_traits::pow(a.clone(), k - 1) / Rational::from_integer(k.into())
    })
}

/// `(exp(a t) - 1) / a`.
pub fn expm1_scaled(a: &Rational, order: usize) -> Series {
    let mut fact = Rational::one();
    Series::from_fn(order, |k| {
        if k == 0 {
            return Rational::zero();
        }
        fact *= Rational::from_integer(k.into());
        num_traits::pow(a.clone(), k - 1) / &fact
    })
}
