//! The Segal-Bargmann transform for the Poisson-type law `pi_{alpha,sigma}`
//! and its Gaussian counterpart.
//!
//! Exact routes (polynomial images, inner products through the moment
//! oracle) live next to floating routes (the summation formula on the
//! lattice `alpha * N_0`, coherent states, quadrature), so that each can be
//! checked against the other.

use std::f64::consts::PI;

use num_complex::Complex64;
use num_traits::{One, Zero};

use crate::combinatorics::{gaussian_moment, poisson_type_moments};
use crate::error::{domain, Result};
use crate::operator::{lowering_charlier, sheffer_s, PolyOperator};
use crate::orthogonal::{charlier_recurrence, hermite_tilde};
use crate::params::ModelParams;
use crate::poly::Poly;
use crate::quadrature::gauss_laguerre;
use crate::rational::{binomial, factorial, pow, to_f64, Rational};

/// Relative stopping threshold for series-defined integrands.
pub const SERIES_REL_TOL: f64 = 1e-14;

const MAX_SERIES_TERMS: usize = 100_000;

/// `e^{-lambda} sum_n lambda^n / n! delta_{alpha n}`, `lambda = sigma / alpha^2`.
#[derive(Clone, Debug)]
pub struct PoissonTypeMeasure {
    params: ModelParams,
    intensity: Rational,
}

impl PoissonTypeMeasure {
    pub fn new(params: &ModelParams) -> Self {
        PoissonTypeMeasure {
            intensity: params.intensity(),
            params: params.clone(),
        }
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    pub fn intensity(&self) -> &Rational {
        &self.intensity
    }

    pub fn atom(&self, n: usize) -> Rational {
        self.params.alpha() * Rational::from_integer(n.into())
    }

    /// `lambda^n / n!`; the common factor `e^{-lambda}` is left out.
    pub fn weight_exact(&self, n: usize) -> Rational {
        pow(&self.intensity, n) / Rational::from_integer(factorial(n))
    }

    /// Full weight `e^{-lambda} lambda^n / n!`, computed in log space.
    pub fn weight(&self, n: usize) -> f64 {
        let lambda = to_f64(&self.intensity);
        let log_fact: f64 = (1..=n).map(|k| (k as f64).ln()).sum();
        (n as f64 * lambda.ln() - lambda - log_fact).exp()
    }

    /// Upper bound on the mass of atoms beyond `n = m`, from the ratio
    /// `lambda / (k + 1)` of consecutive weights. Infinite while `m + 1 <= lambda`.
    pub fn tail_bound(&self, m: usize) -> f64 {
        let ratio = to_f64(&self.intensity) / (m as f64 + 1.0);
        if ratio >= 1.0 {
            return f64::INFINITY;
        }
        self.weight(m) * ratio / (1.0 - ratio)
    }
}

/// `<p, q>` in `L^2(pi_{alpha,sigma})`, contracting monomials against the
/// exact raw moments.
pub fn inner_product_l2pi(p: &Poly, q: &Poly, params: &ModelParams) -> Rational {
    let (Some(dp), Some(dq)) = (p.degree(), q.degree()) else {
        return Rational::zero();
    };
    let moments = poisson_type_moments(dp + dq, params);
    let mut acc = Rational::zero();
    for (i, a) in p.coeffs().iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        for (j, b) in q.coeffs().iter().enumerate() {
            if !b.is_zero() {
                acc += a * b * &moments[i + j];
            }
        }
    }
    acc
}

/// Gram matrix `<p_i, p_j>` for a list of polynomials, sharing one moment table.
pub fn gram_matrix_l2pi(polys: &[Poly], params: &ModelParams) -> Vec<Vec<Rational>> {
    let max_deg = polys.iter().filter_map(Poly::degree).max().unwrap_or(0);
    let moments = poisson_type_moments(2 * max_deg, params);
    let pair = |p: &Poly, q: &Poly| {
        let mut acc = Rational::zero();
        for (i, a) in p.coeffs().iter().enumerate() {
            for (j, b) in q.coeffs().iter().enumerate() {
                acc += a * b * &moments[i + j];
            }
        }
        acc
    };
    polys
        .iter()
        .map(|p| polys.iter().map(|q| pair(p, q)).collect())
        .collect()
}

/// `<p, q>` in `L^2(mu_sigma)` through the exact Gaussian moments.
pub fn inner_product_gaussian(p: &Poly, q: &Poly, sigma: &Rational) -> Rational {
    let mut acc = Rational::zero();
    for (i, a) in p.coeffs().iter().enumerate() {
        for (j, b) in q.coeffs().iter().enumerate() {
            if (i + j) % 2 == 0 && !a.is_zero() && !b.is_zero() {
                acc += a * b * gaussian_moment(i + j, sigma);
            }
        }
    }
    acc
}

/// Values `f(alpha n)` for `n = 0..=M`; zero beyond `M`.
#[derive(Clone, Debug, PartialEq)]
pub struct GridFunction {
    values: Vec<Complex64>,
}

impl GridFunction {
    pub fn new(values: Vec<Complex64>) -> Self {
        GridFunction { values }
    }

    pub fn from_fn(support: usize, f: impl FnMut(usize) -> Complex64) -> Self {
        GridFunction {
            values: (0..=support).map(f).collect(),
        }
    }

    /// Samples a polynomial exactly on `alpha * {0..=support}`, then rounds.
    pub fn sample(p: &Poly, params: &ModelParams, support: usize) -> Self {
        GridFunction::from_fn(support, |n| {
            let x = params.alpha() * Rational::from_integer(n.into());
            Complex64::new(to_f64(&p.eval(&x)), 0.0)
        })
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    /// Highest stored index, `None` when empty.
    pub fn support(&self) -> Option<usize> {
        self.values.len().checked_sub(1)
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }
}

/// `f(z) = sum_n f_n z^n` in the Bargmann space with weight `n! sigma^n`.
#[derive(Clone, Debug, PartialEq)]
pub struct BargmannElement {
    pub coeffs: Vec<Complex64>,
    pub sigma: Rational,
}

impl BargmannElement {
    pub fn new(coeffs: Vec<Complex64>, sigma: Rational) -> Self {
        BargmannElement { coeffs, sigma }
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::zero(), |acc, c| acc * z + c)
    }

    pub fn norm_squared(&self) -> f64 {
        bargmann_weights(&self.sigma, self.coeffs.len())
            .iter()
            .zip(&self.coeffs)
            .map(|(w, c)| w * c.norm_sqr())
            .sum()
    }
}

fn bargmann_weights(sigma: &Rational, len: usize) -> Vec<f64> {
    let s = to_f64(sigma);
    let mut w = 1.0;
    (0..len)
        .map(|n| {
            if n > 0 {
                w *= n as f64 * s;
            }
            w
        })
        .collect()
}

/// `sum_n f_n conj(g_n) n! sigma^n`.
pub fn bargmann_inner(f: &BargmannElement, g: &BargmannElement) -> Result<Complex64> {
    if f.sigma != g.sigma {
        return domain(format!(
            "Bargmann inner product needs equal sigma, got {} and {}",
            f.sigma, g.sigma
        ));
    }
    let len = f.coeffs.len().min(g.coeffs.len());
    Ok(bargmann_weights(&f.sigma, len)
        .iter()
        .zip(f.coeffs.iter().zip(&g.coeffs))
        .map(|(w, (a, b))| a * b.conj() * *w)
        .sum())
}

/// Closed-form coherent state `(1 + alpha z / sigma)^n exp(-z / alpha)` at
/// the atom `alpha n`.
pub fn coherent_state_charlier(params: &ModelParams, n: usize, z: Complex64) -> Complex64 {
    let alpha = to_f64(params.alpha());
    let sigma = to_f64(params.sigma());
    (Complex64::one() + z * (alpha / sigma)).powu(n as u32) * (-z / alpha).exp()
}

/// Partial sum `sum_{k <= truncation} z^k / (k! sigma^k) c_k(alpha n)`.
pub fn coherent_state_charlier_series(
    params: &ModelParams,
    n: usize,
    z: Complex64,
    truncation: usize,
) -> Complex64 {
    let x = params.alpha() * Rational::from_integer(n.into());
    let values: Vec<f64> = charlier_values(params, &x, truncation).iter().map(to_f64).collect();
    scaled_partial_sum(&values, to_f64(params.sigma()), z)
}

/// `c_0(x), ..., c_cap(x)` by running the three-term recurrence at `x`.
pub fn charlier_values(params: &ModelParams, x: &Rational, cap: usize) -> Vec<Rational> {
    let mean = params.mean();
    let mut out: Vec<Rational> = Vec::with_capacity(cap + 1);
    out.push(Rational::one());
    for k in 0..cap {
        let kr = Rational::from_integer(k.into());
        let mut next = (x - params.alpha() * &kr - &mean) * &out[k];
        if k > 0 {
            next -= params.sigma() * &kr * &out[k - 1];
        }
        out.push(next);
    }
    out
}

/// `exp(-(z^2 - 2 x z) / (2 sigma))`.
pub fn coherent_state_hermite(sigma: &Rational, x: Complex64, z: Complex64) -> Complex64 {
    let s = to_f64(sigma);
    (-(z * z - x * z * 2.0) / (2.0 * s)).exp()
}

/// Partial sum `sum_{k <= truncation} z^k / (k! sigma^k) h_k(x)`.
pub fn coherent_state_hermite_series(
    sigma: &Rational,
    x: Complex64,
    z: Complex64,
    truncation: usize,
) -> Result<Complex64> {
    if *sigma <= Rational::zero() {
        return domain(format!("sigma must be positive, got {sigma}"));
    }
    let s = to_f64(sigma);
    // h_{k+1}(x) = x h_k(x) - sigma k h_{k-1}(x), run at the point
    let (mut prev, mut cur) = (Complex64::zero(), Complex64::one());
    let mut coeff = Complex64::one();
    let mut acc = cur;
    for k in 0..truncation {
        let next = x * cur - prev * (s * k as f64);
        prev = cur;
        cur = next;
        coeff *= z / ((k + 1) as f64 * s);
        acc += coeff * cur;
    }
    Ok(acc)
}

fn scaled_partial_sum(values: &[f64], sigma: f64, z: Complex64) -> Complex64 {
    let mut coeff = Complex64::one();
    let mut acc = Complex64::zero();
    for (k, v) in values.iter().enumerate() {
        if k > 0 {
            coeff *= z / (k as f64 * sigma);
        }
        acc += coeff * v;
    }
    acc
}

/// Value of the transform at one point with a certified bound on what the
/// summation left out.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TransformValue {
    pub value: Complex64,
    /// Bound on the omitted terms of the series.
    pub tail_bound: f64,
    /// Bound on floating error in the terms that were summed.
    pub rounding_bound: f64,
    pub terms: usize,
}

/// Recursive-summation error bound `2 (n + 1) eps sum |term|`, covering the
/// weight recurrence and the accumulation.
fn rounding_bound(terms: usize, abs_sum: f64) -> f64 {
    2.0 * (terms as f64 + 1.0) * f64::EPSILON * abs_sum
}

/// `lambda' = (sigma + alpha z) / alpha^2`, the intensity of the shifted law.
fn shifted_intensity(params: &ModelParams, z: Complex64) -> Complex64 {
    let alpha = to_f64(params.alpha());
    (z * alpha + to_f64(params.sigma())) / (alpha * alpha)
}

/// Bound on `sum_{k > n} |w_k|` given `|w_n|`, valid when `|lambda'| < n + 1`.
fn kernel_tail(last_weight: f64, lambda_abs: f64, n: usize) -> f64 {
    let ratio = lambda_abs / (n as f64 + 1.0);
    if ratio >= 1.0 {
        f64::INFINITY
    } else {
        last_weight * ratio / (1.0 - ratio)
    }
}

/// `(S f)(z) = e^{-lambda'} sum_n f(alpha n) lambda'^n / n!`, summed over the
/// stored support. `tail_bound` bounds `sup|f| * sum_{n > M} |w_n|`, the
/// change if `f` continued past `M` with the same sup norm.
pub fn transform_apply(f: &GridFunction, params: &ModelParams, z: Complex64) -> TransformValue {
    let lambda = shifted_intensity(params, z);
    let mut weight = (-lambda).exp();
    let mut acc = Complex64::zero();
    let Some(support) = f.support() else {
        return TransformValue {
            value: acc,
            tail_bound: 0.0,
            rounding_bound: 0.0,
            terms: 0,
        };
    };
    let mut abs_sum = 0.0;
    for (n, v) in f.values().iter().enumerate() {
        if n > 0 {
            weight *= lambda / n as f64;
        }
        let term = v * weight;
        abs_sum += term.norm();
        acc += term;
    }
    TransformValue {
        value: acc,
        tail_bound: f.sup_norm() * kernel_tail(weight.norm(), lambda.norm(), support),
        rounding_bound: rounding_bound(support + 1, abs_sum),
        terms: support + 1,
    }
}

/// Transform of a function given by its lattice values with `|f| <= sup_bound`.
/// Summation stops once `n + 1 > 2 |lambda'|` and the certified tail falls
/// below [`SERIES_REL_TOL`] times the accumulated value.
pub fn transform_apply_series(
    f: impl Fn(usize) -> Complex64,
    sup_bound: f64,
    params: &ModelParams,
    z: Complex64,
) -> TransformValue {
    let lambda = shifted_intensity(params, z);
    let lambda_abs = lambda.norm();
    let mut weight = (-lambda).exp();
    let mut acc = Complex64::zero();
    let mut tail = f64::INFINITY;
    let mut abs_sum = 0.0;
    let mut n = 0;
    loop {
        if n > 0 {
            weight *= lambda / n as f64;
        }
        let term = f(n) * weight;
        abs_sum += term.norm();
        acc += term;
        if (n + 1) as f64 > 2.0 * lambda_abs {
            tail = sup_bound * kernel_tail(weight.norm(), lambda_abs, n);
            if tail <= SERIES_REL_TOL * acc.norm() || tail == 0.0 {
                break;
            }
        }
        if n + 1 >= MAX_SERIES_TERMS {
            break;
        }
        n += 1;
    }
    TransformValue {
        value: acc,
        tail_bound: tail,
        rounding_bound: rounding_bound(n + 1, abs_sum),
        terms: n + 1,
    }
}

/// The same sum with a fixed number of terms and no stopping rule.
pub fn transform_apply_fixed(
    f: impl Fn(usize) -> Complex64,
    params: &ModelParams,
    z: Complex64,
    terms: usize,
) -> Complex64 {
    let lambda = shifted_intensity(params, z);
    let mut weight = (-lambda).exp();
    let mut acc = Complex64::zero();
    for n in 0..terms {
        if n > 0 {
            weight *= lambda / n as f64;
        }
        acc += f(n) * weight;
    }
    acc
}

/// `S p` exactly, through `S = E_{sigma/alpha} T_alpha`.
pub fn transform_poly(p: &Poly, params: &ModelParams) -> Poly {
    let cap = p.degree().unwrap_or(0);
    sheffer_s(params, cap)
        .apply(p)
        .expect("operator built to the degree of p")
}

#[derive(Clone, Debug)]
pub struct UnitarityReport {
    /// `<p, q>` in `L^2(pi_{alpha,sigma})`.
    pub l2_side: Rational,
    /// `sum_n a_n b_n n! sigma^n` over Charlier coordinates.
    pub bargmann_side: Rational,
}

impl UnitarityReport {
    pub fn passed(&self) -> bool {
        self.l2_side == self.bargmann_side
    }
}

/// Compares the two sides of `<p, q>_{L^2} = (S p, S q)_{Bargmann}` exactly.
/// The monomial coefficients of `S p` are the Charlier coordinates of `p`.
pub fn transform_unitarity_check(p: &Poly, q: &Poly, params: &ModelParams) -> UnitarityReport {
    let a = transform_poly(p, params);
    let b = transform_poly(q, params);
    let mut weight = Rational::one();
    let mut bargmann_side = Rational::zero();
    for (n, (x, y)) in a.coeffs().iter().zip(b.coeffs()).enumerate() {
        if n > 0 {
            weight *= Rational::from_integer(n.into()) * params.sigma();
        }
        bargmann_side += x * y * &weight;
    }
    UnitarityReport {
        l2_side: inner_product_l2pi(p, q, params),
        bargmann_side,
    }
}

/// `(S p)(z) = int p(x + z) mu_sigma(dx)`: expand `p(x + z)` and contract
/// powers of `x` against the Gaussian moments.
pub fn gaussian_transform_poly(p: &Poly, sigma: &Rational) -> Result<Poly> {
    if *sigma <= Rational::zero() {
        return domain(format!("sigma must be positive, got {sigma}"));
    }
    let mut out = vec![Rational::zero(); p.coeffs().len()];
    for (j, c) in p.coeffs().iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        for k in (0..=j).step_by(2) {
            out[j - k] += c * Rational::from_integer(binomial(j, k)) * gaussian_moment(k, sigma);
        }
    }
    Ok(Poly::new(out))
}

/// Operator with monomial images `h~_n`.
pub fn gaussian_transform_operator(sigma: &Rational, cap: usize) -> Result<PolyOperator> {
    let images = (0..=cap)
        .map(|n| hermite_tilde(sigma, n))
        .collect::<Result<Vec<_>>>()?;
    PolyOperator::from_images(images, 0)
}

/// `(z^m, z^n)` in `L^2(C, nu_sigma)` by polar quadrature: a trapezoid rule
/// over the angle (exact for the trigonometric integrand) and an
/// `radial_nodes`-point Gauss-Laguerre rule in `u = r^2 / sigma`.
pub fn nu_sigma_monomial_inner(m: usize, n: usize, sigma: &Rational, radial_nodes: usize) -> Result<Complex64> {
    if *sigma <= Rational::zero() {
        return domain(format!("sigma must be positive, got {sigma}"));
    }
    if radial_nodes == 0 {
        return domain("radial quadrature needs at least one node");
    }
    let s = to_f64(sigma);
    let angular_points = m + n + 1;
    let freq = m as f64 - n as f64;
    let angular: Complex64 = (0..angular_points)
        .map(|j| {
            let theta = 2.0 * PI * j as f64 / angular_points as f64;
            Complex64::from_polar(1.0, freq * theta)
        })
        .sum::<Complex64>()
        / angular_points as f64;
    let half = (m + n) as f64 / 2.0;
    let radial: f64 = gauss_laguerre(radial_nodes)
        .iter()
        .map(|(u, w)| w * u.powf(half))
        .sum();
    Ok(angular * radial * s.powf(half))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CharacteristicValue {
    /// Characteristic function of the centered Poisson-type law.
    pub centered: Complex64,
    /// `exp(-sigma y^2 / 2)`.
    pub gaussian: f64,
}

impl CharacteristicValue {
    pub fn gap(&self) -> f64 {
        (self.centered - self.gaussian).norm()
    }

    pub fn modulus_gap(&self) -> f64 {
        (self.centered.norm() - self.gaussian).abs()
    }
}

/// `exp((sigma / alpha^2) (e^{i alpha y} - 1 - i alpha y))` next to its
/// Gaussian limit.
pub fn centered_char_function(params: &ModelParams, y: f64) -> CharacteristicValue {
    let alpha = to_f64(params.alpha());
    let sigma = to_f64(params.sigma());
    let lambda = sigma / (alpha * alpha);
    let t = alpha * y;
    let half_sin = (t / 2.0).sin();
    let re = -2.0 * half_sin * half_sin;
    let im = t.sin() - t;
    CharacteristicValue {
        centered: (Complex64::new(re, im) * lambda).exp(),
        gaussian: (-sigma * y * y / 2.0).exp(),
    }
}

#[derive(Clone, Debug)]
pub struct EigenfunctionReport {
    pub truncation: usize,
    /// `sigma d- E_N = z E_{N-1}` coefficientwise in powers of `z`.
    pub exact_identity_holds: bool,
    /// First power of `z` where the exact identity failed.
    pub first_failure: Option<usize>,
    /// Whether the identity also holds without the factor `sigma`.
    pub unscaled_identity_holds: bool,
    /// Largest `|sigma d- E_N - z E_{N-1}|` over the sampled atoms.
    pub max_numeric_residual: f64,
    pub note: String,
}

/// Checks the partial-sum eigen-relation of the coherent state.
///
/// With `E_N(x) = sum_{n <= N} z^n / (n! sigma^n) c_n(x)`, the lowering
/// operator gives `sigma d- E_N = z E_{N-1}` term by term; the eigenvalue of
/// `d-` alone is `z / sigma`.
pub fn lowering_eigenfunction_check(
    params: &ModelParams,
    z: Complex64,
    truncation: usize,
) -> Result<EigenfunctionReport> {
    if truncation == 0 {
        return domain("eigenfunction check needs truncation >= 1");
    }
    let sigma = params.sigma();
    let basis = charlier_recurrence(params, truncation);
    let lower = lowering_charlier(params, truncation);
    let coeff = |n: usize| (Rational::from_integer(factorial(n)) * pow(sigma, n)).recip();

    // z^n coefficient (a polynomial in x) of each side
    let mut lhs = Vec::with_capacity(truncation + 1);
    let mut rhs = Vec::with_capacity(truncation + 1);
    let mut unscaled_lhs = Vec::with_capacity(truncation + 1);
    for n in 0..=truncation {
        let lowered = lower.apply(basis.poly(n))?.scale(&coeff(n));
        lhs.push(lowered.scale(sigma));
        unscaled_lhs.push(lowered);
        rhs.push(if n == 0 {
            Poly::zero()
        } else {
            basis.poly(n - 1).scale(&coeff(n - 1))
        });
    }
    let first_failure = lhs.iter().zip(&rhs).position(|(a, b)| a != b);
    let unscaled_identity_holds = unscaled_lhs == rhs;

    let mut max_numeric_residual: f64 = 0.0;
    for k in 0..=truncation {
        let x = params.alpha() * Rational::from_integer(k.into());
        let eval = |side: &[Poly]| {
            side.iter()
                .enumerate()
                .fold(Complex64::zero(), |acc, (n, p)| acc + z.powu(n as u32) * to_f64(&p.eval(&x)))
        };
        max_numeric_residual = max_numeric_residual.max((eval(&lhs) - eval(&rhs)).norm());
    }

    let note = if unscaled_identity_holds {
        "d- E = z E holds here because sigma = 1".to_string()
    } else {
        format!("d- alone has eigenvalue z/sigma (sigma = {sigma}); the relation holds for sigma d-")
    };
    Ok(EigenfunctionReport {
        truncation,
        exact_identity_holds: first_failure.is_none(),
        first_failure,
        unscaled_identity_holds,
        max_numeric_residual,
        note,
    })
}

/// Coefficient route for the inverse transform: `f(alpha k) = sum_n f_n c_n(alpha k)`
/// for `k = 0..=support`.
pub fn inverse_transform(
    element: &BargmannElement,
    params: &ModelParams,
    support: usize,
) -> Result<GridFunction> {
    if &element.sigma != params.sigma() {
        return domain(format!(
            "Bargmann element has sigma {}, model has {}",
            element.sigma,
            params.sigma()
        ));
    }
    let cap = element.coeffs.len().saturating_sub(1);
    let basis = charlier_recurrence(params, cap);
    Ok(GridFunction::from_fn(support, |k| {
        let x = params.alpha() * Rational::from_integer(k.into());
        element
            .coeffs
            .iter()
            .zip(basis.polys())
            .map(|(f, c)| f * to_f64(&c.eval(&x)))
            .sum()
    }))
}

/// `(sum_n |f_n|^2 (n!)^2 2^{n l})^{1/2}` for a finite expansion `sum_n f_n s_n`.
pub fn hilbertian_norm(coords: &[Complex64], l: u32) -> f64 {
    let mut fact = 1.0f64;
    let scale = 2f64.powi(l as i32);
    let mut level = 1.0f64;
    coords
        .iter()
        .enumerate()
        .map(|(n, f)| {
            if n > 0 {
                fact *= n as f64;
                level *= scale;
            }
            f.norm_sqr() * fact * fact * level
        })
        .sum::<f64>()
        .sqrt()
}
