//! Linear operators on polynomials, stored as exact images of the monomials
//! `1, z, ..., z^cap`.
//!
//! Every operator declares a degree-growth bound `g` (`deg A z^n <= n + g`).
//! Composition `A B` only reads images of `A` that `B` can reach, so it
//! requires `A.cap >= B.cap + B.growth`; the product keeps `B.cap`.

use std::ops::{Add, Neg, Sub};

use num_traits::{One, Zero};

use crate::combinatorics::{generalized_factorial, stirling_second, touchard_scaled};
use crate::error::{domain, Error, Result};
use crate::params::ModelParams;
use crate::poly::Poly;
use crate::rational::{factorial, pow, Rational};

#[derive(Clone, Debug)]
pub struct PolyOperator {
    growth: usize,
    images: Vec<Poly>,
}

impl PartialEq for PolyOperator {
    /// Equal caps and equal images; the declared growth is only a bound.
    fn eq(&self, other: &Self) -> bool {
        self.images == other.images
    }
}

impl PolyOperator {
    /// Validates `deg images[n] <= n + growth`.
    pub fn from_images(images: Vec<Poly>, growth: usize) -> Result<Self> {
        if images.is_empty() {
            return domain("an operator needs at least the image of 1");
        }
        for (n, img) in images.iter().enumerate() {
            if let Some(d) = img.degree() {
                if d > n + growth {
                    return domain(format!(
                        "image of z^{n} has degree {d}, above declared growth {growth}"
                    ));
                }
            }
        }
        Ok(PolyOperator { growth, images })
    }

    fn build(cap: usize, growth: usize, f: impl FnMut(usize) -> Poly) -> Self {
        PolyOperator {
            growth,
            images: (0..=cap).map(f).collect(),
        }
    }

    pub fn identity(cap: usize) -> Self {
        PolyOperator::build(cap, 0, Poly::monomial)
    }

    pub fn zero(cap: usize) -> Self {
        PolyOperator::build(cap, 0, |_| Poly::zero())
    }

    /// `c * id`.
    pub fn scalar(c: &Rational, cap: usize) -> Self {
        PolyOperator::build(cap, 0, |n| Poly::monomial(n).scale(c))
    }

    pub fn cap(&self) -> usize {
        self.images.len() - 1
    }

    pub fn growth(&self) -> usize {
        self.growth
    }

    pub fn images(&self) -> &[Poly] {
        &self.images
    }

    pub fn image(&self, n: usize) -> Option<&Poly> {
        self.images.get(n)
    }

    /// Linear extension over the stored images.
    pub fn apply(&self, p: &Poly) -> Result<Poly> {
        if let Some(d) = p.degree() {
            if d > self.cap() {
                return Err(Error::Cap {
                    op: "apply",
                    required: d,
                    available: self.cap(),
                });
            }
        }
        let mut out = Poly::zero();
        for (c, img) in p.coeffs().iter().zip(&self.images) {
            if !c.is_zero() {
                out = &out + &img.scale(c);
            }
        }
        Ok(out)
    }

    /// Same operator with only the images of `z^0..=z^cap`.
    pub fn restrict(&self, cap: usize) -> Result<Self> {
        if cap > self.cap() {
            return Err(Error::Cap {
                op: "restrict",
                required: cap,
                available: self.cap(),
            });
        }
        Ok(PolyOperator {
            growth: self.growth,
            images: self.images[..=cap].to_vec(),
        })
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &PolyOperator) -> Result<Self> {
        let required = inner.cap() + inner.growth;
        if self.cap() < required {
            return Err(Error::Cap {
                op: "compose",
                required,
                available: self.cap(),
            });
        }
        let images = inner
            .images
            .iter()
            .map(|img| self.apply(img))
            .collect::<Result<Vec<_>>>()?;
        Ok(PolyOperator {
            growth: self.growth + inner.growth,
            images,
        })
    }

    /// `self^n`; the result has cap `cap - (n - 1) * growth`.
    pub fn power(&self, n: usize) -> Result<Self> {
        if n == 0 {
            return Ok(PolyOperator::identity(self.cap()));
        }
        let mut acc = self.clone();
        for k in 1..n {
            let target = self.cap().checked_sub(k * self.growth).ok_or(Error::Cap {
                op: "power",
                required: k * self.growth,
                available: self.cap(),
            })?;
            acc = self.compose(&acc.restrict(target)?)?;
        }
        Ok(acc)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        PolyOperator {
            growth: self.growth,
            images: self.images.iter().map(|p| p.scale(c)).collect(),
        }
    }

    /// Lowest `n` whose images differ, comparing up to the smaller cap.
    pub fn first_difference(&self, other: &PolyOperator) -> Option<usize> {
        self.images
            .iter()
            .zip(&other.images)
            .position(|(a, b)| a != b)
    }

    /// True when both agree on every monomial up to the smaller cap.
    pub fn agrees_with(&self, other: &PolyOperator) -> bool {
        self.first_difference(other).is_none()
    }

    fn zip_with(&self, rhs: &PolyOperator, f: impl Fn(&Poly, &Poly) -> Poly) -> PolyOperator {
        PolyOperator {
            growth: self.growth.max(rhs.growth),
            images: self.images.iter().zip(&rhs.images).map(|(a, b)| f(a, b)).collect(),
        }
    }
}

/// Sums and differences live on the smaller cap.
impl Add for &PolyOperator {
    type Output = PolyOperator;

    fn add(self, rhs: &PolyOperator) -> PolyOperator {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl Sub for &PolyOperator {
    type Output = PolyOperator;

    fn sub(self, rhs: &PolyOperator) -> PolyOperator {
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl Neg for &PolyOperator {
    type Output = PolyOperator;

    fn neg(self) -> PolyOperator {
        self.scale(&-Rational::one())
    }
}

/// `AB - BA` on the largest cap where both products are defined.
pub fn commutator(a: &PolyOperator, b: &PolyOperator) -> Result<PolyOperator> {
    let cap_ab = a.cap().checked_sub(b.growth());
    let cap_ba = b.cap().checked_sub(a.growth());
    let cap = match (cap_ab, cap_ba) {
        (Some(x), Some(y)) => x.min(y),
        _ => {
            return Err(Error::Cap {
                op: "commutator",
                required: a.growth().max(b.growth()),
                available: a.cap().min(b.cap()),
            })
        }
    };
    let ab = a.compose(&b.restrict(cap)?)?;
    let ba = b.compose(&a.restrict(cap)?)?;
    Ok(&ab - &ba)
}

/// `D z^n = n z^(n-1)`.
pub fn diff(cap: usize) -> PolyOperator {
    PolyOperator::build(cap, 0, |n| Poly::monomial(n).derivative())
}

/// `Z z^n = z^(n+1)`.
pub fn mulz(cap: usize) -> PolyOperator {
    PolyOperator::build(cap, 1, |n| Poly::monomial(n + 1))
}

/// `(E_h p)(z) = p(z + h)`, by binomial expansion.
pub fn shift(h: &Rational, cap: usize) -> PolyOperator {
    PolyOperator::build(cap, 0, |n| Poly::monomial(n).shift(h))
}

/// `sum_{k <= cap} h^k D^k / k!`, which equals `E_h` on degrees `<= cap`.
pub fn shift_by_taylor(h: &Rational, cap: usize) -> PolyOperator {
    let d = diff(cap);
    let mut d_pow = PolyOperator::identity(cap);
    let mut acc = PolyOperator::zero(cap);
    for k in 0..=cap {
        let coeff = pow(h, k) / Rational::from_integer(factorial(k));
        acc = &acc + &d_pow.scale(&coeff);
        d_pow = d.compose(&d_pow).expect("growth 0 keeps the cap");
    }
    acc
}

/// Umbral operator `z^n -> T_{alpha,n}(z)` (scaled Touchard).
pub fn umbral_touchard(params: &ModelParams, cap: usize) -> PolyOperator {
    PolyOperator::build(cap, 0, |n| touchard_scaled(n, params.alpha()))
}

/// Umbral operator `z^n -> (z | alpha)_n`, inverse of [`umbral_touchard`].
pub fn umbral_factorial(params: &ModelParams, cap: usize) -> PolyOperator {
    PolyOperator::build(cap, 0, |n| generalized_factorial(n, params.alpha()))
}

/// The transform restricted to polynomials, built from its monomial images
/// `z^n -> T_{alpha,n}(z + sigma/alpha)`.
///
/// Since `S c_n = z^n`, the monomial coefficients of `S p` are the
/// coordinates of `p` in the Charlier basis.
pub fn sheffer_s(params: &ModelParams, cap: usize) -> PolyOperator {
    let mean = params.mean();
    PolyOperator::build(cap, 0, |n| touchard_scaled(n, params.alpha()).shift(&mean))
}

/// `E_{sigma/alpha} ∘ T_alpha`.
pub fn sheffer_s_factored(params: &ModelParams, cap: usize) -> PolyOperator {
    shift(&params.mean(), cap)
        .compose(&umbral_touchard(params, cap))
        .expect("growth 0 keeps the cap")
}

/// `F_alpha ∘ E_{-sigma/alpha}`; image `n` is the Charlier polynomial `c_n`.
pub fn sheffer_s_inv(params: &ModelParams, cap: usize) -> PolyOperator {
    umbral_factorial(params, cap)
        .compose(&shift(&-params.mean(), cap))
        .expect("growth 0 keeps the cap")
}

/// Generators `U = Z + sigma/alpha` and `V = alpha D + 1` with `[V, U] = alpha`.
#[derive(Clone, Debug)]
pub struct WeylPair {
    pub u: PolyOperator,
    pub v: PolyOperator,
}

impl WeylPair {
    pub fn new(params: &ModelParams, cap: usize) -> Self {
        let u = &mulz(cap) + &PolyOperator::scalar(&params.mean(), cap);
        let v = &diff(cap).scale(params.alpha()) + &PolyOperator::identity(cap);
        WeylPair { u, v }
    }

    /// `rho = U V`, on cap `cap - 1`.
    pub fn rho(&self) -> Result<PolyOperator> {
        let cap = self.u.cap().min(self.v.cap());
        self.u.compose(&self.v.restrict(cap.saturating_sub(1))?)
    }
}

#[derive(Clone, Debug)]
pub struct KatrielReport {
    pub n: usize,
    /// Highest monomial on which both sides were compared.
    pub working_cap: usize,
    pub lhs: PolyOperator,
    pub rhs: PolyOperator,
    pub first_discrepancy: Option<usize>,
}

impl KatrielReport {
    pub fn holds(&self) -> bool {
        self.first_discrepancy.is_none()
    }
}

/// Compares `(UV)^n` with `sum_k S(n,k) alpha^(n-k) U^k V^k`, both built by
/// brute-force composition, on monomials up to `cap - n`.
pub fn katriel_check(params: &ModelParams, n: usize, cap: usize) -> Result<KatrielReport> {
    let working_cap = cap.checked_sub(n).ok_or(Error::Cap {
        op: "katriel_check",
        required: n,
        available: cap,
    })?;
    let pair = WeylPair::new(params, cap);
    let lhs = if n == 0 {
        PolyOperator::identity(working_cap)
    } else {
        pair.rho()?.power(n)?.restrict(working_cap)?
    };

    let mut rhs = PolyOperator::zero(working_cap);
    for k in 0..=n {
        let s = stirling_second(n, k)?;
        if s.is_zero() {
            continue;
        }
        let coeff = Rational::from_integer(s) * pow(params.alpha(), n - k);
        let uk = pair.u.power(k)?;
        let vk = pair.v.power(k)?.restrict(working_cap)?;
        let term = uk.compose(&vk)?.restrict(working_cap)?;
        rhs = &rhs + &term.scale(&coeff);
    }
    let first_discrepancy = lhs.first_difference(&rhs);
    Ok(KatrielReport {
        n,
        working_cap,
        lhs,
        rhs,
        first_discrepancy,
    })
}

/// Lowering operator of the Charlier sequence, `(E_alpha - 1) / alpha`.
pub fn lowering_charlier(params: &ModelParams, cap: usize) -> PolyOperator {
    let diff = &shift(params.alpha(), cap) - &PolyOperator::identity(cap);
    diff.scale(&params.alpha().recip())
}

/// Raising operator of the Charlier sequence: convert monomial coordinates
/// to Charlier coordinates with `S`, shift the index with `Z`, convert back
/// with `S^{-1}`.
pub fn raising_charlier(params: &ModelParams, cap: usize) -> PolyOperator {
    let to_charlier = sheffer_s(params, cap);
    let shifted = mulz(cap).compose(&to_charlier).expect("Z cap equals S cap");
    sheffer_s_inv(params, cap + 1)
        .compose(&shifted)
        .expect("S^-1 stores one extra image")
}

/// Images of the Weyl generators under conjugation by the transform,
/// `U = d+ + sigma/alpha` and `V = alpha d- + 1`, as ladder expressions.
pub fn conjugated_weyl_pair(params: &ModelParams, cap: usize) -> WeylPair {
    let u = &raising_charlier(params, cap) + &PolyOperator::scalar(&params.mean(), cap);
    let v = &lowering_charlier(params, cap).scale(params.alpha()) + &PolyOperator::identity(cap);
    WeylPair { u, v }
}
