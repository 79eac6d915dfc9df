//! Identity verification suites.
//!
//! Each check is a pure function of [`VerifyConfig`]; checks in a suite run
//! on the rayon pool and the report keeps their declared order.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use num_complex::Complex64;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::combinatorics::{
    gaussian_moment, generalized_factorial, poisson_type_moment, stirling_first, touchard, StirlingKind,
    StirlingTable,
};
use crate::error::{Error, Result};
use crate::operator::{
    commutator, conjugated_weyl_pair, diff, katriel_check, lowering_charlier, mulz, sheffer_s, sheffer_s_factored,
    sheffer_s_inv, shift, shift_by_taylor, PolyOperator, WeylPair,
};
use crate::orthogonal::{
    charlier_explicit, charlier_expanded, charlier_recurrence, generating_function_check, hermite_recurrence,
    hermite_tilde, hermite_tilde_by_twist, hermite_tilde_egf, monomial_in_charlier,
};
use crate::params::ModelParams;
use crate::poly::Poly;
use crate::rational::{factorial, pow, rat, to_f64, Rational};
use crate::series::{expm1_scaled, log_one_plus_scaled, Series};
use crate::transform::{
    centered_char_function, coherent_state_charlier, coherent_state_charlier_series, coherent_state_hermite,
    coherent_state_hermite_series, gaussian_transform_operator, gaussian_transform_poly, gram_matrix_l2pi,
    inner_product_gaussian, lowering_eigenfunction_check, nu_sigma_monomial_inner, transform_apply,
    transform_apply_fixed, transform_apply_series, transform_poly, transform_unitarity_check, GridFunction,
};

/// Seed used when none is given.
pub const DEFAULT_SEED: u64 = 0x5eed_2024;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    All,
    Series,
    Operators,
    Orthogonality,
    Katriel,
    Transform,
    Hermite,
}

impl Suite {
    pub const NAMES: [&'static str; 7] = [
        "all",
        "series",
        "operators",
        "orthogonality",
        "katriel",
        "transform",
        "hermite",
    ];

    fn parts(self) -> Vec<Suite> {
        match self {
            Suite::All => vec![
                Suite::Series,
                Suite::Operators,
                Suite::Katriel,
                Suite::Orthogonality,
                Suite::Hermite,
                Suite::Transform,
            ],
            s => vec![s],
        }
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "all" => Suite::All,
            "series" => Suite::Series,
            "operators" => Suite::Operators,
            "orthogonality" => Suite::Orthogonality,
            "katriel" => Suite::Katriel,
            "transform" => Suite::Transform,
            "hermite" => Suite::Hermite,
            _ => {
                return Err(Error::Parse {
                    what: "suite",
                    input: s.to_string(),
                    reason: format!("expected one of {}", Suite::NAMES.join(", ")),
                })
            }
        })
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let i = match self {
            Suite::All => 0,
            Suite::Series => 1,
            Suite::Operators => 2,
            Suite::Orthogonality => 3,
            Suite::Katriel => 4,
            Suite::Transform => 5,
            Suite::Hermite => 6,
        };
        f.write_str(Suite::NAMES[i])
    }
}

/// Numeric tolerances; exact checks ignore them.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Tolerances {
    /// Relative error of the summation formula on Charlier polynomials and
    /// of the operator route against the summation route.
    pub transform_relative: f64,
    /// Absolute error of the transform of the constant function.
    pub transform_constant: f64,
    /// Coherent-state closed forms against their partial sums.
    pub coherent_state: f64,
    /// Monomial inner products under `nu_sigma`.
    pub quadrature: f64,
    /// Poisson-type moments against floating summation, relative.
    pub moment_relative: f64,
    /// Minimum shrink factor of the characteristic-function gap per halving of alpha.
    pub convergence_factor: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            transform_relative: 1e-9,
            transform_constant: 1e-12,
            coherent_state: 1e-10,
            quadrature: 1e-8,
            moment_relative: 1e-10,
            convergence_factor: 1.6,
        }
    }
}

impl Tolerances {
    pub const NAMES: [&'static str; 6] = [
        "transform_relative",
        "transform_constant",
        "coherent_state",
        "quadrature",
        "moment_relative",
        "convergence_factor",
    ];

    /// Overrides one field by name.
    pub fn set(&mut self, name: &str, value: f64) -> Result<()> {
        if !value.is_finite() || value <= 0.0 {
            return Err(Error::Parse {
                what: "tolerance",
                input: format!("{name}={value}"),
                reason: "must be a positive finite number".into(),
            });
        }
        let slot = match name {
            "transform_relative" => &mut self.transform_relative,
            "transform_constant" => &mut self.transform_constant,
            "coherent_state" => &mut self.coherent_state,
            "quadrature" => &mut self.quadrature,
            "moment_relative" => &mut self.moment_relative,
            "convergence_factor" => &mut self.convergence_factor,
            _ => {
                return Err(Error::Parse {
                    what: "tolerance",
                    input: name.to_string(),
                    reason: format!("expected one of {}", Tolerances::NAMES.join(", ")),
                })
            }
        };
        *slot = value;
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct VerifyConfig {
    pub params: Vec<ModelParams>,
    /// Operator cap for the normal-ordering suite.
    pub katriel_cap: usize,
    pub seed: u64,
    pub tolerances: Tolerances,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            params: ModelParams::standard_sets(),
            katriel_cap: 20,
            seed: DEFAULT_SEED,
            tolerances: Tolerances::default(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Numeric,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub suite: String,
    pub name: String,
    pub anchor: String,
    pub status: Status,
    pub mode: Mode,
    pub elapsed_ms: f64,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub suite: String,
    pub seed: u64,
    pub passed: usize,
    pub failed: usize,
    pub checks: Vec<CheckResult>,
}

impl Report {
    pub fn all_passed(&self) -> bool {
        self.failed == 0
    }
}

/// Outcome of one check body: `Ok(detail)` passes, `Err(detail)` fails.
type Outcome = std::result::Result<String, String>;

struct Check {
    suite: Suite,
    name: String,
    anchor: &'static str,
    mode: Mode,
    body: Box<dyn Fn(&VerifyConfig) -> Outcome + Send + Sync>,
}

fn check(
    suite: Suite,
    name: impl Into<String>,
    anchor: &'static str,
    mode: Mode,
    body: impl Fn(&VerifyConfig) -> Outcome + Send + Sync + 'static,
) -> Check {
    Check {
        suite,
        name: name.into(),
        anchor,
        mode,
        body: Box::new(body),
    }
}

/// Runs every check of `suite`.
pub fn run(suite: Suite, config: &VerifyConfig) -> Report {
    let checks: Vec<Check> = suite.parts().into_iter().flat_map(|s| checks_for(s, config)).collect();
    let results: Vec<CheckResult> = checks
        .par_iter()
        .map(|c| {
            let start = Instant::now();
            let outcome = (c.body)(config);
            let elapsed_ms = start.elapsed().as_secs_f64() * 1e3;
            let (status, detail) = match outcome {
                Ok(d) => (Status::Pass, d),
                Err(d) => (Status::Fail, d),
            };
            CheckResult {
                suite: c.suite.to_string(),
                name: c.name.clone(),
                anchor: c.anchor.to_string(),
                status,
                mode: c.mode,
                elapsed_ms,
                detail,
            }
        })
        .collect();
    let failed = results.iter().filter(|r| r.status == Status::Fail).count();
    Report {
        suite: suite.to_string(),
        seed: config.seed,
        passed: results.len() - failed,
        failed,
        checks: results,
    }
}

fn checks_for(suite: Suite, config: &VerifyConfig) -> Vec<Check> {
    let mut out = Vec::new();
    match suite {
        Suite::All => unreachable!("expanded by Suite::parts"),
        Suite::Series => series_checks(&mut out),
        Suite::Operators => operator_checks(config, &mut out),
        Suite::Katriel => katriel_checks(config, &mut out),
        Suite::Orthogonality => orthogonality_checks(config, &mut out),
        Suite::Hermite => hermite_checks(config, &mut out),
        Suite::Transform => transform_checks(config, &mut out),
    }
    out
}

fn label(p: &ModelParams) -> String {
    format!("alpha={}, sigma={}", p.alpha(), p.sigma())
}

fn ensure(ok: bool, pass: impl Into<String>, fail: impl FnOnce() -> String) -> Outcome {
    if ok {
        Ok(pass.into())
    } else {
        Err(fail())
    }
}

fn exact_err(e: Error) -> String {
    format!("error: {e}")
}

fn rng_for(config: &VerifyConfig, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    rng.set_stream(stream);
    rng
}

fn random_rational(rng: &mut impl Rng) -> Rational {
    rat(rng.gen_range(-9..=9), rng.gen_range(1..=9))
}

fn random_poly(rng: &mut impl Rng, max_degree: usize) -> Poly {
    let degree = rng.gen_range(0..=max_degree);
    Poly::new((0..=degree).map(|_| random_rational(rng)).collect())
}

// ---------------------------------------------------------------- series

fn series_checks(out: &mut Vec<Check>) {
    out.push(check(
        Suite::Series,
        "B_alpha and C_alpha are mutual inverses to order 24",
        "B(C(t)) = C(B(t)) = t",
        Mode::Exact,
        |cfg| {
            for p in &cfg.params {
                let a = p.alpha();
                let b = expm1_scaled(a, 24);
                let c = log_one_plus_scaled(a, 24);
                let t = Series::variable(24);
                let bc = b.compose(&c).map_err(exact_err)?;
                let cb = c.compose(&b).map_err(exact_err)?;
                if bc != t || cb != t {
                    return Err(format!("alpha={a}: composition differs from t"));
                }
                if b.reversion().map_err(exact_err)? != c {
                    return Err(format!("alpha={a}: reversion of B differs from C"));
                }
            }
            Ok(format!("{} values of alpha", cfg.params.len()))
        },
    ));
    out.push(check(
        Suite::Series,
        "log(exp(A)) = A on random series, order 24",
        "series exp/log inverse pair",
        Mode::Exact,
        |cfg| {
            let mut rng = rng_for(cfg, 1);
            for case in 0..20 {
                let a = Series::from_fn(24, |k| if k == 0 { Rational::zero() } else { random_rational(&mut rng) });
                let back = a.exp().and_then(|e| e.log()).map_err(exact_err)?;
                if back != a {
                    return Err(format!("case {case}: log(exp(A)) != A"));
                }
            }
            Ok("20 random series".into())
        },
    ));
    out.push(check(
        Suite::Series,
        "series reversion is a two-sided inverse",
        "compositional inverse of a delta series",
        Mode::Exact,
        |cfg| {
            let mut rng = rng_for(cfg, 2);
            for case in 0..20 {
                let b = Series::from_fn(12, |k| match k {
                    0 => Rational::zero(),
                    1 => loop {
                        let r = random_rational(&mut rng);
                        if !r.is_zero() {
                            break r;
                        }
                    },
                    _ => random_rational(&mut rng),
                });
                let inv = b.reversion().map_err(exact_err)?;
                let t = Series::variable(12);
                if b.compose(&inv).map_err(exact_err)? != t || inv.compose(&b).map_err(exact_err)? != t {
                    return Err(format!("case {case}: reversion not two-sided"));
                }
            }
            Ok("20 random delta series".into())
        },
    ));
    out.push(check(
        Suite::Series,
        "Stirling inverse relation for n, m <= 24",
        "sum_k S(n,k) s(k,m) = delta_{n,m}",
        Mode::Exact,
        |_| {
            let first = StirlingTable::new(StirlingKind::First, 24);
            let second = StirlingTable::new(StirlingKind::Second, 24);
            for n in 0..=24 {
                for m in 0..=24 {
                    let mut sum = num_bigint::BigInt::zero();
                    for k in m..=n {
                        sum += second.get(n, k).map_err(exact_err)? * first.get(k, m).map_err(exact_err)?;
                    }
                    let expected = if n == m { 1 } else { 0 };
                    if sum != expected.into() {
                        return Err(format!("n={n}, m={m}: got {sum}"));
                    }
                }
            }
            Ok("625 entries".into())
        },
    ));
    out.push(check(
        Suite::Series,
        "generalized factorial coefficients are s(n,k) alpha^(n-k)",
        "(z|alpha)_n = sum_k s(n,k) alpha^(n-k) z^k",
        Mode::Exact,
        |cfg| {
            for p in &cfg.params {
                for n in 0..=16 {
                    let g = generalized_factorial(n, p.alpha());
                    for k in 0..=n {
                        let s = stirling_first(n, k).map_err(exact_err)?;
                        if g.coeff(k) != Rational::from_integer(s) * pow(p.alpha(), n - k) {
                            return Err(format!("alpha={}, n={n}, k={k}", p.alpha()));
                        }
                    }
                }
            }
            Ok("n <= 16".into())
        },
    ));
    out.push(check(
        Suite::Series,
        "Touchard generating function exp(z(e^t - 1)) to order 12",
        "sum_n T_n(z) t^n / n! = exp(z(e^t - 1))",
        Mode::Exact,
        |_| {
            let order = 12;
            let e_minus_one = expm1_scaled(&Rational::one(), order);
            for z in [rat(0, 1), rat(1, 1), rat(-2, 3), rat(5, 2), rat(7, 11)] {
                let g = e_minus_one.scale(&z).exp().map_err(exact_err)?;
                for n in 0..=order {
                    let lhs = g.coeff(n) * Rational::from_integer(factorial(n));
                    if lhs != touchard(n).eval(&z) {
                        return Err(format!("z={z}, n={n}"));
                    }
                }
            }
            Ok("5 rational z".into())
        },
    ));
    out.push(check(
        Suite::Series,
        "Poisson-type moments against floating summation, m <= 10",
        "int x^m dpi = alpha^m T_m(sigma / alpha^2)",
        Mode::Numeric,
        |cfg| {
            let tol = cfg.tolerances.moment_relative;
            let mut worst: f64 = 0.0;
            for p in &cfg.params {
                let lambda = to_f64(&p.intensity());
                let alpha = to_f64(p.alpha());
                for m in 0..=10 {
                    let mut weight = (-lambda).exp();
                    let mut sum = 0.0;
                    for n in 0..400 {
                        if n > 0 {
                            weight *= lambda / n as f64;
                        }
                        sum += weight * (alpha * n as f64).powi(m as i32);
                    }
                    let exact = to_f64(&poisson_type_moment(m, p));
                    worst = worst.max((sum - exact).abs() / exact.abs().max(f64::MIN_POSITIVE));
                }
            }
            ensure(worst <= tol, format!("max relative error {worst:.3e}"), || {
                format!("max relative error {worst:.3e} > {tol:e}")
            })
        },
    ));
}

// ---------------------------------------------------------------- operators

fn operator_checks(config: &VerifyConfig, out: &mut Vec<Check>) {
    out.push(check(
        Suite::Operators,
        "Boole series equals the shift on cap 16",
        "E_h = sum_k h^k D^k / k!",
        Mode::Exact,
        |cfg| {
            for p in &cfg.params {
                for h in [p.mean(), p.alpha().clone(), -p.alpha().clone()] {
                    if shift(&h, 16) != shift_by_taylor(&h, 16) {
                        return Err(format!("h={h}"));
                    }
                }
            }
            Ok("h in {sigma/alpha, alpha, -alpha}".into())
        },
    ));
    for p in &config.params {
        let p = p.clone();
        out.push(check(
            Suite::Operators,
            format!("Weyl relation [V, U] = alpha on cap 20 ({})", label(&p)),
            "[V, U] = alpha",
            Mode::Exact,
            move |_| {
                let pair = WeylPair::new(&p, 20);
                let c = commutator(&pair.v, &pair.u).map_err(exact_err)?;
                let expected = PolyOperator::scalar(p.alpha(), c.cap());
                ensure(c == expected, format!("holds on cap {}", c.cap()), || {
                    format!("first difference at z^{:?}", c.first_difference(&expected))
                })
            },
        ));
    }
    out.push(check(
        Suite::Operators,
        "S = E_{sigma/alpha} T_alpha, S^-1 = F_alpha E_{-sigma/alpha}, S S^-1 = id on cap 16",
        "S = E_{sigma/alpha} T_alpha",
        Mode::Exact,
        |cfg| {
            for p in &cfg.params {
                let s = sheffer_s(p, 16);
                if s != sheffer_s_factored(p, 16) {
                    return Err(format!("{}: S differs from its factorization", label(p)));
                }
                let inv = sheffer_s_inv(p, 16);
                let id = PolyOperator::identity(16);
                if s.compose(&inv).map_err(exact_err)? != id || inv.compose(&s).map_err(exact_err)? != id {
                    return Err(format!("{}: S and S^-1 are not inverse", label(p)));
                }
                let basis = charlier_recurrence(p, 16);
                if inv.images() != basis.polys() {
                    return Err(format!("{}: S^-1 images differ from c_n", label(p)));
                }
            }
            Ok("three factorizations agree".into())
        },
    ));
    out.push(check(
        Suite::Operators,
        "S Z = rho S with rho = U V on cap 16",
        "rho = S Z S^-1",
        Mode::Exact,
        |cfg| {
            for p in &cfg.params {
                let s = sheffer_s(p, 17);
                let lhs = s.compose(&mulz(16)).map_err(exact_err)?;
                let rho = WeylPair::new(p, 17).rho().map_err(exact_err)?;
                let rhs = rho.compose(&s.restrict(16).map_err(exact_err)?).map_err(exact_err)?;
                if lhs != rhs {
                    return Err(format!("{}: first difference at z^{:?}", label(p), lhs.first_difference(&rhs)));
                }
            }
            Ok("holds".into())
        },
    ));
    out.push(check(
        Suite::Operators,
        "V = E_alpha, U = Z E_{-alpha}, Z = U V, d- = (E_alpha - 1)/alpha on cap 16",
        "Z = U V",
        Mode::Exact,
        |cfg| {
            for p in &cfg.params {
                let a = p.alpha();
                let pair = conjugated_weyl_pair(p, 17);
                let v = pair.v.restrict(16).map_err(exact_err)?;
                if v != shift(a, 16) {
                    return Err(format!("{}: V != E_alpha", label(p)));
                }
                let u = pair.u.restrict(16).map_err(exact_err)?;
                let z_shift = mulz(16).compose(&shift(&-a.clone(), 16)).map_err(exact_err)?;
                if u != z_shift {
                    return Err(format!("{}: U != Z E_-alpha", label(p)));
                }
                let uv = pair.u.compose(&v).map_err(exact_err)?;
                if uv != mulz(16) {
                    return Err(format!("{}: U V != Z", label(p)));
                }
                let lower = lowering_charlier(p, 16);
                let basis = charlier_recurrence(p, 16);
                for n in 0..=16 {
                    let got = lower.apply(basis.poly(n)).map_err(exact_err)?;
                    let expected = if n == 0 {
                        Poly::zero()
                    } else {
                        basis.poly(n - 1).scale(&Rational::from_integer(n.into()))
                    };
                    if got != expected {
                        return Err(format!("{}: d- c_{n} != n c_(n-1)", label(p)));
                    }
                }
                let raise = crate::operator::raising_charlier(p, 15);
                for n in 0..=15 {
                    if raise.apply(basis.poly(n)).map_err(exact_err)? != *basis.poly(n + 1) {
                        return Err(format!("{}: d+ c_{n} != c_(n+1)", label(p)));
                    }
                }
            }
            Ok("all four identities hold".into())
        },
    ));
    out.push(check(
        Suite::Operators,
        "derivative operator is nilpotent on bounded degree",
        "D^(d+1) = 0 on degree <= d",
        Mode::Exact,
        |_| {
            let d = diff(12);
            let p = d.power(13).map_err(exact_err)?;
            ensure(p == PolyOperator::zero(12), "D^13 = 0 on cap 12", || "D^13 != 0".into())
        },
    ));
}

fn katriel_checks(config: &VerifyConfig, out: &mut Vec<Check>) {
    for p in &config.params {
        for n in 0..=8usize {
            let p = p.clone();
            out.push(check(
                Suite::Katriel,
                format!("normal ordering of (UV)^{n} ({})", label(&p)),
                "(UV)^n = sum_k S(n,k) alpha^(n-k) U^k V^k",
                Mode::Exact,
                move |cfg| {
                    let r = katriel_check(&p, n, cfg.katriel_cap).map_err(exact_err)?;
                    ensure(r.holds(), format!("holds on z^0..z^{}", r.working_cap), || {
                        format!("first difference at z^{:?}", r.first_discrepancy)
                    })
                },
            ));
        }
    }
}

// ---------------------------------------------------------------- orthogonality

fn orthogonality_checks(config: &VerifyConfig, out: &mut Vec<Check>) {
    for p in &config.params {
        let p = p.clone();
        out.push(check(
            Suite::Orthogonality,
            format!("Gram matrix of c_0..c_12 is diag(n! sigma^n) ({})", label(&p)),
            "||c_n||^2 = n! sigma^n",
            Mode::Exact,
            move |_| {
                let basis = charlier_recurrence(&p, 12);
                let gram = gram_matrix_l2pi(basis.polys(), &p);
                for (m, row) in gram.iter().enumerate() {
                    for (n, v) in row.iter().enumerate() {
                        let expected = if m == n {
                            Rational::from_integer(factorial(n)) * pow(p.sigma(), n)
                        } else {
                            Rational::zero()
                        };
                        if *v != expected {
                            return Err(format!("entry ({m}, {n}) = {v}, expected {expected}"));
                        }
                    }
                }
                Ok("13x13 exact".into())
            },
        ));
    }
    out.push(check(
        Suite::Orthogonality,
        "recurrence, explicit and expanded Charlier forms agree for n <= 16",
        "c_n = sum_k C(n,k) (-sigma/alpha)^(n-k) (z|alpha)_k",
        Mode::Exact,
        |cfg| {
            for p in &cfg.params {
                let basis = charlier_recurrence(p, 16);
                for n in 0..=16 {
                    let c = basis.poly(n);
                    if *c != charlier_explicit(p, n) || *c != charlier_expanded(p, n) {
                        return Err(format!("{}: disagreement at n={n}", label(p)));
                    }
                }
            }
            Ok("three forms agree".into())
        },
    ));
    out.push(check(
        Suite::Orthogonality,
        "monomial expansion in the Charlier basis for n <= 16",
        "z^n = T_{alpha,n}(sigma/alpha) + sum_i (...) c_i",
        Mode::Exact,
        |cfg| {
            for p in &cfg.params {
                let basis = charlier_recurrence(p, 16);
                for n in 0..=16 {
                    let coords = monomial_in_charlier(p, n);
                    if basis.to_monomial(&coords).map_err(exact_err)? != Poly::monomial(n) {
                        return Err(format!("{}: z^{n} not reproduced", label(p)));
                    }
                }
            }
            Ok("z^0..z^16 reproduced".into())
        },
    ));
    out.push(check(
        Suite::Orthogonality,
        "Charlier generating function to order 12",
        "exp((z/alpha) log(1 + alpha t) - sigma t / alpha)",
        Mode::Exact,
        |cfg| {
            for p in &cfg.params {
                let r = generating_function_check(&charlier_recurrence(p, 12), 12).map_err(exact_err)?;
                if !r.passed() {
                    return Err(format!("{}: mismatch at n={:?}", label(p), r.first_mismatch));
                }
            }
            Ok("order 12".into())
        },
    ));
}

// ---------------------------------------------------------------- hermite

fn sigmas(config: &VerifyConfig) -> Vec<Rational> {
    let mut out: Vec<Rational> = config.params.iter().map(|p| p.sigma().clone()).collect();
    out.dedup();
    out
}

fn hermite_checks(config: &VerifyConfig, out: &mut Vec<Check>) {
    for sigma in sigmas(config) {
        let s = sigma.clone();
        out.push(check(
            Suite::Hermite,
            format!("twisted Hermite companions: moments vs parity twist, n <= 16 (sigma={sigma})"),
            "h~_n(z) = i^n h_n(-iz)",
            Mode::Exact,
            move |_| {
                let basis = hermite_recurrence(&s, 16).map_err(exact_err)?;
                for n in 0..=16 {
                    let by_moments = hermite_tilde(&s, n).map_err(exact_err)?;
                    if by_moments != hermite_tilde_by_twist(basis.poly(n)).map_err(exact_err)? {
                        return Err(format!("n={n}"));
                    }
                }
                Ok("n <= 16".into())
            },
        ));
        let s = sigma.clone();
        out.push(check(
            Suite::Hermite,
            format!("Hermite generating functions to order 10 (sigma={sigma})"),
            "exp(zt - sigma t^2 / 2), exp(zt + sigma t^2 / 2)",
            Mode::Exact,
            move |_| {
                let basis = hermite_recurrence(&s, 10).map_err(exact_err)?;
                let r = generating_function_check(&basis, 10).map_err(exact_err)?;
                if !r.passed() {
                    return Err(format!("h_n mismatch at n={:?}", r.first_mismatch));
                }
                let tilde = hermite_tilde_egf(&s, 10).map_err(exact_err)?;
                for (n, g) in tilde.iter().enumerate() {
                    if *g != hermite_tilde(&s, n).map_err(exact_err)? {
                        return Err(format!("h~_n mismatch at n={n}"));
                    }
                }
                Ok("both match".into())
            },
        ));
        let s = sigma.clone();
        out.push(check(
            Suite::Hermite,
            format!("Gaussian transform maps h_n to z^n and z^n to h~_n, n <= 12 (sigma={sigma})"),
            "S h_n = z^n",
            Mode::Exact,
            move |_| {
                let op = gaussian_transform_operator(&s, 12).map_err(exact_err)?;
                let basis = hermite_recurrence(&s, 12).map_err(exact_err)?;
                for n in 0..=12 {
                    let h = basis.poly(n);
                    if op.apply(h).map_err(exact_err)? != Poly::monomial(n) {
                        return Err(format!("matrix route: h_{n} not sent to z^{n}"));
                    }
                    if gaussian_transform_poly(h, &s).map_err(exact_err)? != Poly::monomial(n) {
                        return Err(format!("integral route: h_{n} not sent to z^{n}"));
                    }
                }
                Ok("n <= 12".into())
            },
        ));
        let s = sigma.clone();
        out.push(check(
            Suite::Hermite,
            format!("Gaussian orthogonality of h_0..h_12 (sigma={sigma})"),
            "||h_n||^2 = n! sigma^n",
            Mode::Exact,
            move |_| {
                let basis = hermite_recurrence(&s, 12).map_err(exact_err)?;
                for m in 0..=12 {
                    for n in 0..=12 {
                        let v = inner_product_gaussian(basis.poly(m), basis.poly(n), &s);
                        let expected = if m == n {
                            Rational::from_integer(factorial(n)) * pow(&s, n)
                        } else {
                            Rational::zero()
                        };
                        if v != expected {
                            return Err(format!("entry ({m}, {n}) = {v}"));
                        }
                    }
                }
                Ok("13x13 exact".into())
            },
        ));
    }
    out.push(check(
        Suite::Hermite,
        "Gaussian moments (2k-1)!! sigma^k",
        "int x^(2k) dmu_sigma = (2k-1)!! sigma^k",
        Mode::Exact,
        |_| {
            let s = rat(3, 4);
            let ok = gaussian_moment(4, &s) == rat(27, 16) && gaussian_moment(5, &s).is_zero();
            ensure(ok, "spot values", || "moment mismatch".into())
        },
    ));
}

// ---------------------------------------------------------------- transform

/// Ten points on each of the circles `|z| = 1` and `|z| = 2`.
pub fn sample_points() -> Vec<Complex64> {
    [1.0, 2.0]
        .iter()
        .flat_map(|r| {
            (0..10).map(move |k| Complex64::from_polar(*r, (k as f64 + 0.5) / 10.0 * std::f64::consts::TAU))
        })
        .collect()
}

/// Relative error with the magnitude floored at 1.
fn rel_err(got: Complex64, expected: Complex64) -> f64 {
    (got - expected).norm() / expected.norm().max(1.0)
}

fn transform_checks(_config: &VerifyConfig, out: &mut Vec<Check>) {
    out.push(check(
        Suite::Transform,
        "summation formula sends c_n to z^n, n <= 6, 20 points",
        "(S f)(z) = int f dpi_{alpha, sigma + alpha z}",
        Mode::Numeric,
        |cfg| {
            let tol = cfg.tolerances.transform_relative;
            let mut worst: f64 = 0.0;
            for p in &cfg.params {
                let basis = charlier_recurrence(p, 6);
                for n in 0..=6 {
                    let f = GridFunction::sample(basis.poly(n), p, 80);
                    for z in sample_points() {
                        let v = transform_apply(&f, p, z);
                        worst = worst.max(rel_err(v.value, z.powu(n as u32)));
                    }
                }
            }
            ensure(worst <= tol, format!("max relative error {worst:.3e}"), || {
                format!("max relative error {worst:.3e} > {tol:e}")
            })
        },
    ));
    out.push(check(
        Suite::Transform,
        "transform of the constant 1 is 1",
        "S 1 = 1",
        Mode::Numeric,
        |cfg| {
            let tol = cfg.tolerances.transform_constant;
            let mut worst: f64 = 0.0;
            for p in &cfg.params {
                for z in sample_points() {
                    let v = transform_apply_series(|_| Complex64::one(), 1.0, p, z);
                    worst = worst.max((v.value - 1.0).norm());
                }
            }
            ensure(worst <= tol, format!("max error {worst:.3e}"), || {
                format!("max error {worst:.3e} > {tol:e}")
            })
        },
    ));
    out.push(check(
        Suite::Transform,
        "operator route and summation route agree on degree <= 8",
        "S = E_{sigma/alpha} T_alpha vs summation formula",
        Mode::Numeric,
        |cfg| {
            let tol = cfg.tolerances.transform_relative;
            let points: Vec<Complex64> = sample_points().into_iter().step_by(2).chain([
                Complex64::new(0.5, 0.0),
                Complex64::new(-0.25, 0.0),
            ]).collect();
            let mut worst: f64 = 0.0;
            for p in &cfg.params {
                for d in 0..=8 {
                    let poly = Poly::monomial(d);
                    let image = transform_poly(&poly, p);
                    let f = GridFunction::sample(&poly, p, 80);
                    for z in &points {
                        let v = transform_apply(&f, p, *z);
                        worst = worst.max(rel_err(v.value, image.eval_complex(*z)));
                    }
                }
            }
            ensure(worst <= tol, format!("max relative error {worst:.3e} at 12 points"), || {
                format!("max relative error {worst:.3e} > {tol:e}")
            })
        },
    ));
    out.push(check(
        Suite::Transform,
        "unitarity on 50 random rational polynomials of degree <= 10",
        "S is unitary onto the Bargmann space",
        Mode::Exact,
        |cfg| {
            let mut rng = rng_for(cfg, 3);
            for case in 0..50 {
                let p = &cfg.params[case % cfg.params.len()];
                let a = random_poly(&mut rng, 10);
                let b = random_poly(&mut rng, 10);
                let r = transform_unitarity_check(&a, &b, p);
                if !r.passed() {
                    return Err(format!("case {case}: {} != {}", r.l2_side, r.bargmann_side));
                }
            }
            Ok("50 random pairs".into())
        },
    ));
    out.push(check(
        Suite::Transform,
        "certified tail bound survives doubling the truncation, 100 cases",
        "ratio bound on the Poisson tail",
        Mode::Numeric,
        |cfg| {
            let mut rng = rng_for(cfg, 4);
            let mut worst_ratio: f64 = 0.0;
            for case in 0..100 {
                let p = &cfg.params[case % cfg.params.len()];
                let z = Complex64::from_polar(rng.gen_range(0.0..2.0), rng.gen_range(0.0..std::f64::consts::TAU));
                let freq: f64 = rng.gen_range(0.0..3.0);
                let damp: f64 = rng.gen_range(0.5..1.0);
                let f = move |n: usize| Complex64::from_polar(damp.powi(n as i32 % 7), freq * n as f64);
                let v = transform_apply_series(f, 1.0, p, z);
                let doubled = transform_apply_fixed(f, p, z, 2 * v.terms);
                let change = (doubled - v.value).norm();
                let bound = v.tail_bound + v.rounding_bound;
                if change > bound {
                    return Err(format!("case {case}: change {change:.3e} > bound {bound:.3e}"));
                }
                if bound > 0.0 {
                    worst_ratio = worst_ratio.max(change / bound);
                }
            }
            Ok(format!("largest change/bound {worst_ratio:.3}"))
        },
    ));
    out.push(check(
        Suite::Transform,
        "coherent states match their partial sums at truncation 40",
        "E(alpha n, z) = (1 + alpha z / sigma)^n e^(-z/alpha)",
        Mode::Numeric,
        |cfg| {
            let tol = cfg.tolerances.coherent_state;
            let points: Vec<Complex64> = sample_points().into_iter().take(10).chain([Complex64::new(0.3, 0.2)]).collect();
            let mut worst: f64 = 0.0;
            for p in &cfg.params {
                for n in 0..=6 {
                    for z in &points {
                        let closed = coherent_state_charlier(p, n, *z);
                        let series = coherent_state_charlier_series(p, n, *z, 40);
                        worst = worst.max((closed - series).norm());
                    }
                }
                for x in [-1.5, 0.0, 0.75, 2.0] {
                    for z in &points {
                        let x = Complex64::new(x, 0.0);
                        let closed = coherent_state_hermite(p.sigma(), x, *z);
                        let series = coherent_state_hermite_series(p.sigma(), x, *z, 40).map_err(exact_err)?;
                        worst = worst.max((closed - series).norm());
                    }
                }
            }
            ensure(worst <= tol, format!("max error {worst:.3e}"), || {
                format!("max error {worst:.3e} > {tol:e}")
            })
        },
    ));
    out.push(check(
        Suite::Transform,
        "partial-sum eigen-relation sigma d- E_N = z E_(N-1), N <= 12",
        "coherent state is an eigenfunction of the lowering operator",
        Mode::Exact,
        |cfg| {
            let mut notes = Vec::new();
            for p in &cfg.params {
                for n in 1..=12 {
                    let r = lowering_eigenfunction_check(p, Complex64::new(0.4, -0.3), n).map_err(exact_err)?;
                    if !r.exact_identity_holds {
                        return Err(format!("{}: N={n} fails at z^{:?}", label(p), r.first_failure));
                    }
                    if n == 12 {
                        notes.push(format!("{}: {}", label(p), r.note));
                    }
                }
            }
            Ok(notes.join("; "))
        },
    ));
    out.push(check(
        Suite::Transform,
        "nu_sigma monomial inner products, m, n <= 8",
        "(z^m, z^n) = delta_{m,n} n! sigma^n",
        Mode::Numeric,
        |cfg| {
            let tol = cfg.tolerances.quadrature;
            let mut worst: f64 = 0.0;
            for sigma in [Rational::one(), rat(3, 4)] {
                for m in 0..=8 {
                    for n in 0..=8 {
                        let v = nu_sigma_monomial_inner(m, n, &sigma, 16).map_err(exact_err)?;
                        let expected = if m == n { to_f64(&(Rational::from_integer(factorial(n)) * pow(&sigma, n))) } else { 0.0 };
                        worst = worst.max((v - expected).norm() / expected.max(1.0));
                    }
                }
            }
            ensure(worst <= tol, format!("max relative error {worst:.3e}"), || {
                format!("max relative error {worst:.3e} > {tol:e}")
            })
        },
    ));
    out.push(check(
        Suite::Transform,
        "characteristic-function gap shrinks as alpha halves",
        "centered pi_{alpha,sigma} converges weakly to mu_sigma",
        Mode::Numeric,
        |cfg| {
            let factor = cfg.tolerances.convergence_factor;
            let mut lines = Vec::new();
            for sigma in sigmas(cfg) {
                let gaps = convergence_gaps(&sigma, &[rat(1, 1), rat(1, 2), rat(1, 4), rat(1, 8)]).map_err(exact_err)?;
                for w in gaps.windows(2) {
                    if w[1] > w[0] || w[0] < factor * w[1] {
                        return Err(format!("sigma={sigma}: gaps {} shrink by less than {factor}", fmt_gaps(&gaps)));
                    }
                }
                lines.push(format!("sigma={sigma}: gaps {}", fmt_gaps(&gaps)));
            }
            Ok(lines.join("; "))
        },
    ));
}

fn fmt_gaps(gaps: &[f64]) -> String {
    let parts: Vec<String> = gaps.iter().map(|g| format!("{g:.3e}")).collect();
    format!("[{}]", parts.join(", "))
}

/// `y` grid `0.25, 0.5, ..., 3`.
pub fn convergence_grid() -> Vec<f64> {
    (1..=12).map(|k| k as f64 * 0.25).collect()
}

/// Max over [`convergence_grid`] of `|phi_alpha(y) - exp(-sigma y^2 / 2)|` for each alpha.
pub fn convergence_gaps(sigma: &Rational, alphas: &[Rational]) -> Result<Vec<f64>> {
    let ys = convergence_grid();
    alphas
        .iter()
        .map(|a| {
            let p = ModelParams::new(a.clone(), sigma.clone())?;
            Ok(ys.iter().map(|y| centered_char_function(&p, *y).gap()).fold(0.0, f64::max))
        })
        .collect()
}
