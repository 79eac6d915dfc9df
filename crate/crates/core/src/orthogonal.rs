//! Charlier-type and Hermite polynomial sequences.
//!
//! The three-term recurrences are the canonical constructions. The explicit
//! sums and the generating-function expansions here are independent routes
//! used to cross-check them.

use num_traits::{One, Signed, Zero};

use crate::combinatorics::{
    gaussian_moment, generalized_factorial, shared_table, stirling_first, touchard_scaled,
    StirlingKind,
};
use crate::error::{domain, Error, Result};
use crate::params::ModelParams;
use crate::poly::Poly;
use crate::rational::{binomial, factorial, pow, Rational};
use crate::series::Series;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Family {
    /// Monic orthogonal polynomials of the Poisson-type law.
    Charlier(ModelParams),
    /// Monic Hermite polynomials of the centered Gaussian with this variance.
    Hermite(Rational),
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::Charlier(_) => "charlier",
            Family::Hermite(_) => "hermite",
        }
    }
}

/// Monic basis `p_0..=p_cap` with exact conversions to and from monomials.
#[derive(Clone, Debug)]
pub struct OrthogonalBasis {
    family: Family,
    polys: Vec<Poly>,
    /// Row `n`: coordinates of `z^n` in this basis.
    from_monomial: Vec<Vec<Rational>>,
}

impl OrthogonalBasis {
    fn new(family: Family, polys: Vec<Poly>) -> Self {
        let from_monomial = invert_monic_triangular(&polys);
        OrthogonalBasis {
            family,
            polys,
            from_monomial,
        }
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn cap(&self) -> usize {
        self.polys.len() - 1
    }

    pub fn polys(&self) -> &[Poly] {
        &self.polys
    }

    pub fn poly(&self, n: usize) -> &Poly {
        &self.polys[n]
    }

    /// Coordinates of `z^n` in this basis.
    pub fn monomial_coordinates(&self, n: usize) -> &[Rational] {
        &self.from_monomial[n]
    }

    /// `sum_n coords[n] p_n` in the monomial basis.
    pub fn to_monomial(&self, coords: &[Rational]) -> Result<Poly> {
        if coords.len() > self.polys.len() {
            return domain(format!(
                "{} coordinates exceed basis cap {}",
                coords.len(),
                self.cap()
            ));
        }
        Ok(coords
            .iter()
            .zip(&self.polys)
            .filter(|(c, _)| !c.is_zero())
            .fold(Poly::zero(), |acc, (c, p)| &acc + &p.scale(c)))
    }

    /// Coordinates of `p` in this basis, length `deg p + 1`.
    pub fn coordinates(&self, p: &Poly) -> Result<Vec<Rational>> {
        let Some(deg) = p.degree() else {
            return Ok(Vec::new());
        };
        if deg > self.cap() {
            return Err(Error::Cap {
                op: "coordinates",
                required: deg,
                available: self.cap(),
            });
        }
        let mut out = vec![Rational::zero(); deg + 1];
        for (n, c) in p.coeffs().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (slot, m) in out.iter_mut().zip(&self.from_monomial[n]) {
                *slot += c * m;
            }
        }
        Ok(out)
    }
}

/// Row `n` holds the coordinates of `z^n` in the monic basis `polys`.
fn invert_monic_triangular(polys: &[Poly]) -> Vec<Vec<Rational>> {
    let mut rows: Vec<Vec<Rational>> = Vec::with_capacity(polys.len());
    for (n, p) in polys.iter().enumerate() {
        debug_assert!(p.is_monic() && p.degree() == Some(n));
        // z^n = p_n - sum_{k<n} p_n[k] z^k
        let mut row = vec![Rational::zero(); n + 1];
        row[n] = Rational::one();
        for k in 0..n {
            let c = p.coeff(k);
            if c.is_zero() {
                continue;
            }
            for (slot, m) in row.iter_mut().zip(&rows[k]) {
                *slot -= &c * m;
            }
        }
        rows.push(row);
    }
    rows
}

/// `c_0 = 1`, `c_1 = z - sigma/alpha`, then
/// `z c_n = c_{n+1} + (alpha n + sigma/alpha) c_n + sigma n c_{n-1}`.
pub fn charlier_recurrence(params: &ModelParams, cap: usize) -> OrthogonalBasis {
    let mean = params.mean();
    let mut polys = vec![Poly::one()];
    let mut prev = Poly::zero();
    for n in 0..cap {
        let n_r = Rational::from_integer(n.into());
        let diag = params.alpha() * &n_r + &mean;
        let cur = &polys[n];
        let next = &(&Poly::linear(&diag) * cur) - &prev.scale(&(params.sigma() * &n_r));
        prev = cur.clone();
        polys.push(next);
    }
    OrthogonalBasis::new(Family::Charlier(params.clone()), polys)
}

/// `c_n(z) = sum_k C(n,k) (-sigma/alpha)^(n-k) (z | alpha)_k`.
pub fn charlier_explicit(params: &ModelParams, n: usize) -> Poly {
    let neg_mean = -params.mean();
    (0..=n).fold(Poly::zero(), |acc, k| {
        let c = Rational::from_integer(binomial(n, k)) * pow(&neg_mean, n - k);
        &acc + &generalized_factorial(k, params.alpha()).scale(&c)
    })
}

/// Fully expanded monomial coefficients:
/// `[z^i] c_n = sum_{k=0}^{n-i} C(n,k) s(n-k,i) alpha^(n-2k-i) (-sigma)^k`
/// for `i >= 1`, and constant term `(-sigma/alpha)^n`.
pub fn charlier_expanded(params: &ModelParams, n: usize) -> Poly {
    let alpha = params.alpha();
    let neg_sigma = -params.sigma();
    let mut coeffs = vec![pow(&-params.mean(), n)];
    for i in 1..=n {
        let mut acc = Rational::zero();
        for k in 0..=n - i {
            let s = stirling_first(n - k, i).expect("i <= n - k");
            // alpha exponent n - 2k - i may be negative
            let e = n as i64 - 2 * k as i64 - i as i64;
            let alpha_pow = if e >= 0 {
                pow(alpha, e as usize)
            } else {
                pow(alpha, (-e) as usize).recip()
            };
            acc += Rational::from_integer(binomial(n, k) * s) * alpha_pow * pow(&neg_sigma, k);
        }
        coeffs.push(acc);
    }
    Poly::new(coeffs)
}

/// Coordinates of `z^n` in the Charlier basis:
/// `[c_0] = T_{alpha,n}(sigma/alpha)` and
/// `[c_i] = sum_{k=i}^n C(n,k) T_{alpha,n-k}(sigma/alpha) S(k,i) alpha^(k-i)`.
pub fn monomial_in_charlier(params: &ModelParams, n: usize) -> Vec<Rational> {
    let alpha = params.alpha();
    let mean = params.mean();
    let touchard_at_mean: Vec<Rational> = (0..=n)
        .map(|m| touchard_scaled(m, alpha).eval(&mean))
        .collect();
    let second = shared_table(StirlingKind::Second, n);
    let mut coords = vec![touchard_at_mean[n].clone()];
    for i in 1..=n {
        let mut acc = Rational::zero();
        for k in i..=n {
            let s = second.get(k, i).expect("i <= k <= n");
            acc += Rational::from_integer(binomial(n, k) * s)
                * &touchard_at_mean[n - k]
                * pow(alpha, k - i);
        }
        coords.push(acc);
    }
    coords
}

/// `h_0 = 1`, `h_1 = z`, `z h_n = h_{n+1} + sigma n h_{n-1}`.
pub fn hermite_recurrence(sigma: &Rational, cap: usize) -> Result<OrthogonalBasis> {
    if !sigma.is_positive() {
        return domain(format!("sigma must be positive, got {sigma}"));
    }
    let mut polys = vec![Poly::one()];
    let mut prev = Poly::zero();
    for n in 0..cap {
        let n_r = Rational::from_integer(n.into());
        let cur = &polys[n];
        let next = &(&Poly::monomial(1) * cur) - &prev.scale(&(sigma * n_r));
        prev = cur.clone();
        polys.push(next);
    }
    Ok(OrthogonalBasis::new(Family::Hermite(sigma.clone()), polys))
}

/// `h~_n(z) = sum_k C(n,k) z^(n-k) m_k`, with `m_k` the Gaussian moments.
pub fn hermite_tilde(sigma: &Rational, n: usize) -> Result<Poly> {
    if !sigma.is_positive() {
        return domain(format!("sigma must be positive, got {sigma}"));
    }
    let mut coeffs = vec![Rational::zero(); n + 1];
    for k in 0..=n {
        coeffs[n - k] = Rational::from_integer(binomial(n, k)) * gaussian_moment(k, sigma);
    }
    Ok(Poly::new(coeffs))
}

/// `h~_n(z) = i^n h_n(-i z)`: coefficient `k` picks up `i^(n-k)`, which is
/// `+-1` because `h_n` only has terms with `n - k` even.
pub fn hermite_tilde_by_twist(h_n: &Poly) -> Result<Poly> {
    let n = h_n.degree().unwrap_or(0);
    let coeffs = h_n
        .coeffs()
        .iter()
        .enumerate()
        .map(|(k, c)| {
            let gap = n - k;
            if c.is_zero() {
                Ok(Rational::zero())
            } else if gap % 2 == 1 {
                domain(format!("coefficient of z^{k} in a degree-{n} Hermite polynomial is nonzero"))
            } else if gap % 4 == 0 {
                Ok(c.clone())
            } else {
                Ok(-c)
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Poly::new(coeffs))
}

/// Reads `p_n(z) = n! [t^n] G(z, t)` for `n <= order` by evaluating the
/// series at `z = 0..=order` and interpolating each coefficient. The
/// degree of `p_n` is at most `n`, so the nodes determine it exactly.
fn expand_egf(
    order: usize,
    series_at: impl Fn(&Rational) -> Result<Series>,
) -> Result<Vec<Poly>> {
    let nodes: Vec<Rational> = (0..=order).map(|j| Rational::from_integer(j.into())).collect();
    let values = nodes.iter().map(&series_at).collect::<Result<Vec<_>>>()?;
    Ok((0..=order)
        .map(|n| {
            let n_fact = Rational::from_integer(factorial(n));
            let points: Vec<(Rational, Rational)> = nodes
                .iter()
                .zip(&values)
                .map(|(z, s)| (z.clone(), s.coeff(n) * &n_fact))
                .collect();
            Poly::interpolate(&points)
        })
        .collect())
}

/// Expands `exp((z/alpha) log(1 + alpha t) - sigma t / alpha)`.
pub fn charlier_egf(params: &ModelParams, order: usize) -> Result<Vec<Poly>> {
    let alpha = params.alpha();
    let log_term = Series::new(order, vec![Rational::one(), alpha.clone()]).log()?;
    let drift = Series::variable(order).scale(&params.mean());
    expand_egf(order, |z| (&log_term.scale(&(z / alpha)) - &drift).exp())
}

/// Expands `exp(z t + sign * sigma t^2 / 2)`; `sign = -1` gives the Hermite
/// polynomials and `sign = +1` their twisted companions.
fn gaussian_egf(sigma: &Rational, order: usize, sign: i64) -> Result<Vec<Poly>> {
    let quad = Series::new(
        order,
        vec![
            Rational::zero(),
            Rational::zero(),
            sigma * Rational::new(sign.into(), 2.into()),
        ],
    );
    expand_egf(order, |z| (&Series::variable(order).scale(z) + &quad).exp())
}

/// Expands `exp(z t - sigma t^2 / 2)`.
pub fn hermite_egf(sigma: &Rational, order: usize) -> Result<Vec<Poly>> {
    gaussian_egf(sigma, order, -1)
}

/// Expands `exp(z t + sigma t^2 / 2)`.
pub fn hermite_tilde_egf(sigma: &Rational, order: usize) -> Result<Vec<Poly>> {
    gaussian_egf(sigma, order, 1)
}

#[derive(Clone, Debug)]
pub struct GeneratingFunctionReport {
    pub family: &'static str,
    pub order: usize,
    pub first_mismatch: Option<usize>,
}

impl GeneratingFunctionReport {
    pub fn passed(&self) -> bool {
        self.first_mismatch.is_none()
    }
}

/// Compares `polys[n]` with `n! [t^n]` of the family's generating function
/// for every `n <= order`.
pub fn generating_function_check(
    basis: &OrthogonalBasis,
    order: usize,
) -> Result<GeneratingFunctionReport> {
    if order > basis.cap() {
        return Err(Error::Cap {
            op: "generating_function_check",
            required: order,
            available: basis.cap(),
        });
    }
    let expanded = match basis.family() {
        Family::Charlier(params) => charlier_egf(params, order)?,
        Family::Hermite(sigma) => hermite_egf(sigma, order)?,
    };
    let first_mismatch = expanded
        .iter()
        .zip(basis.polys())
        .position(|(a, b)| a != b);
    Ok(GeneratingFunctionReport {
        family: basis.family().name(),
        order,
        first_mismatch,
    })
}
