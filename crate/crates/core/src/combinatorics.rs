//! Stirling numbers, factorial-type polynomials, Touchard polynomials and
//! exact moments of the Poisson-type and Gaussian laws.

use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{domain, Error, Result};
use crate::params::ModelParams;
use crate::poly::Poly;
use crate::rational::{pow, Rational};

/// Default number of rows kept in the shared tables.
pub const DEFAULT_STIRLING_CAP: usize = 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StirlingKind {
    /// Signed `s(n, k)`: `(z)_n = sum_k s(n, k) z^k`.
    First,
    /// `S(n, k)`: `z^n = sum_k S(n, k) (z)_k`.
    Second,
}

/// Triangular table `0 <= k <= n <= cap`.
#[derive(Debug, Clone)]
pub struct StirlingTable {
    kind: StirlingKind,
    rows: Vec<Vec<BigInt>>,
}

impl StirlingTable {
    pub fn new(kind: StirlingKind, cap: usize) -> Self {
        let mut rows: Vec<Vec<BigInt>> = Vec::with_capacity(cap + 1);
        rows.push(vec![BigInt::one()]);
        for n in 1..=cap {
            let prev = &rows[n - 1];
            let at = |k: usize| prev.get(k).cloned().unwrap_or_else(BigInt::zero);
            let row = (0..=n)
                .map(|k| {
                    let diag = if k > 0 { at(k - 1) } else { BigInt::zero() };
                    match kind {
                        StirlingKind::First => diag - BigInt::from(n - 1) * at(k),
                        StirlingKind::Second => diag + BigInt::from(k) * at(k),
                    }
                })
                .collect();
            rows.push(row);
        }
        StirlingTable { kind, rows }
    }

    pub fn kind(&self) -> StirlingKind {
        self.kind
    }

    pub fn cap(&self) -> usize {
        self.rows.len() - 1
    }

    pub fn get(&self, n: usize, k: usize) -> Result<&BigInt> {
        if k > n || n > self.cap() {
            return domain(format!(
                "Stirling index ({n}, {k}) outside 0 <= k <= n <= {}",
                self.cap()
            ));
        }
        Ok(&self.rows[n][k])
    }

    pub fn row(&self, n: usize) -> Result<&[BigInt]> {
        self.rows.get(n).map(Vec::as_slice).ok_or(Error::Domain(format!(
            "Stirling row {n} above cap {}",
            self.cap()
        )))
    }
}

static FIRST: Mutex<Option<Arc<StirlingTable>>> = Mutex::new(None);
static SECOND: Mutex<Option<Arc<StirlingTable>>> = Mutex::new(None);

/// Process-wide table holding at least rows `0..=min_cap`. Tables only
/// grow; readers keep their `Arc` snapshot.
pub fn shared_table(kind: StirlingKind, min_cap: usize) -> Arc<StirlingTable> {
    let slot = match kind {
        StirlingKind::First => &FIRST,
        StirlingKind::Second => &SECOND,
    };
    let mut guard = slot.lock().unwrap_or_else(|e| e.into_inner());
    match guard.as_ref() {
        Some(table) if table.cap() >= min_cap => Arc::clone(table),
        _ => {
            let cap = min_cap.max(DEFAULT_STIRLING_CAP);
            let table = Arc::new(StirlingTable::new(kind, cap));
            *guard = Some(Arc::clone(&table));
            table
        }
    }
}

pub fn stirling_first(n: usize, k: usize) -> Result<BigInt> {
    shared_table(StirlingKind::First, n).get(n, k).cloned()
}

pub fn stirling_second(n: usize, k: usize) -> Result<BigInt> {
    shared_table(StirlingKind::Second, n).get(n, k).cloned()
}

/// `(z)_n = z (z - 1) ... (z - n + 1)` by direct product.
pub fn falling_factorial(n: usize) -> Poly {
    generalized_factorial(n, &Rational::one())
}

/// `(z | a)_n = z (z - a) ... (z - (n - 1) a)` by direct product.
pub fn generalized_factorial(n: usize, increment: &Rational) -> Poly {
    (0..n).fold(Poly::one(), |acc, j| {
        let root = increment * Rational::from_integer(j.into());
        &acc * &Poly::linear(&root)
    })
}

/// `T_n(z) = sum_k S(n, k) z^k`, with `T_0 = 1`.
pub fn touchard(n: usize) -> Poly {
    touchard_scaled(n, &Rational::one())
}

/// `T_{a,n}(z) = sum_k S(n, k) a^(n-k) z^k`.
pub fn touchard_scaled(n: usize, a: &Rational) -> Poly {
    let table = shared_table(StirlingKind::Second, n);
    let row = table.row(n).expect("table grown to n");
    Poly::new(
        row.iter()
            .enumerate()
            .map(|(k, s)| Rational::from_integer(s.clone()) * pow(a, n - k))
            .collect(),
    )
}

/// `int x^m d pi_{a,s} = a^m T_m(s / a^2)`.
pub fn poisson_type_moment(m: usize, params: &ModelParams) -> Rational {
    let alpha = params.alpha();
    touchard(m).eval(&params.intensity()) * pow(alpha, m)
}

/// Raw moments `0..=max` in one pass.
pub fn poisson_type_moments(max: usize, params: &ModelParams) -> Vec<Rational> {
    let lambda = params.intensity();
    let table = shared_table(StirlingKind::Second, max);
    let mut alpha_pow = Rational::one();
    (0..=max)
        .map(|m| {
            let row = table.row(m).expect("table grown to max");
            let t = Poly::new(row.iter().cloned().map(Rational::from_integer).collect());
            let value = t.eval(&lambda) * &alpha_pow;
            alpha_pow *= params.alpha();
            value
        })
        .collect()
}

/// Centered Gaussian with variance `sigma`: zero for odd `m`,
/// `(2k - 1)!! sigma^k` for `m = 2k`.
pub fn gaussian_moment(m: usize, sigma: &Rational) -> Rational {
    if m % 2 == 1 {
        return Rational::zero();
    }
    let k = m / 2;
    let double_fact = (1..=k).fold(BigInt::one(), |acc, j| acc * BigInt::from(2 * j - 1));
    Rational::from_integer(double_fact) * pow(sigma, k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn poly(cs: &[Rational]) -> Poly {
        Poly::new(cs.to_vec())
    }

    #[test]
    fn stirling_values() {
        assert_eq!(stirling_first(3, 2).unwrap(), BigInt::from(-3));
        assert_eq!(stirling_first(3, 1).unwrap(), BigInt::from(2));
        assert_eq!(stirling_second(3, 2).unwrap(), BigInt::from(3));
        assert_eq!(stirling_second(4, 2).unwrap(), BigInt::from(7));
        for n in 0..20 {
            assert!(stirling_first(n, n).unwrap().is_one());
            assert!(stirling_second(n, n).unwrap().is_one());
        }
        for n in 1..20 {
            assert!(stirling_second(n, 1).unwrap().is_one());
        }
    }

    #[test]
    fn stirling_out_of_range() {
        assert!(stirling_first(2, 3).is_err());
        assert!(StirlingTable::new(StirlingKind::Second, 5).get(6, 1).is_err());
    }

    #[test]
    fn shared_table_grows() {
        let t = shared_table(StirlingKind::Second, 40);
        assert!(t.cap() >= 40);
        assert_eq!(stirling_second(40, 39).unwrap(), BigInt::from(780));
    }

    #[test]
    fn stirling_inverse_relation() {
        let first = StirlingTable::new(StirlingKind::First, 24);
        let second = StirlingTable::new(StirlingKind::Second, 24);
        for n in 0..=24 {
            for m in 0..=24 {
                let sum: BigInt = (m..=n)
                    .map(|k| second.get(n, k).unwrap() * first.get(k, m).unwrap())
                    .sum();
                let expected = if n == m { BigInt::one() } else { BigInt::zero() };
                assert_eq!(sum, expected, "n={n} m={m}");
            }
        }
    }

    #[test]
    fn factorial_polynomials() {
        assert_eq!(falling_factorial(0), Poly::one());
        assert_eq!(falling_factorial(2), poly(&[int(0), int(-1), int(1)]));
        assert_eq!(falling_factorial(3), poly(&[int(0), int(2), int(-3), int(1)]));
        assert_eq!(generalized_factorial(2, &rat(1, 2)), poly(&[int(0), rat(-1, 2), int(1)]));
        assert_eq!(generalized_factorial(0, &int(3)), Poly::one());
        for n in 0..10 {
            assert_eq!(generalized_factorial(n, &int(1)), falling_factorial(n));
        }
    }

    #[test]
    fn falling_factorial_matches_first_kind_row() {
        for n in 0..=16 {
            let row: Vec<Rational> = (0..=n)
                .map(|k| Rational::from_integer(stirling_first(n, k).unwrap()))
                .collect();
            assert_eq!(falling_factorial(n), Poly::new(row));
        }
    }

    #[test]
    fn generalized_factorial_coefficients() {
        for a in [rat(1, 2), int(2), rat(3, 4)] {
            for n in 0..=16 {
                let g = generalized_factorial(n, &a);
                for k in 0..=n {
                    let expected = Rational::from_integer(stirling_first(n, k).unwrap()) * pow(&a, n - k);
                    assert_eq!(g.coeff(k), expected);
                }
            }
        }
    }

    #[test]
    fn touchard_polynomials() {
        assert_eq!(touchard(0), Poly::one());
        assert_eq!(touchard(2), poly(&[int(0), int(1), int(1)]));
        assert_eq!(touchard(3), poly(&[int(0), int(1), int(3), int(1)]));
        assert_eq!(touchard_scaled(2, &rat(1, 2)), poly(&[int(0), rat(1, 2), int(1)]));
        assert_eq!(touchard_scaled(1, &rat(7, 3)), Poly::monomial(1));
        for n in 0..10 {
            assert_eq!(touchard_scaled(n, &int(1)), touchard(n));
        }
    }

    #[test]
    fn touchard_scaling_identity() {
        // T_{a,n}(z) = a^n T_n(z / a)
        let a = rat(2, 3);
        for n in 0..=12 {
            let inner = Poly::new(vec![int(0), a.recip()]);
            let rhs = touchard(n).compose(&inner).scale(&pow(&a, n));
            assert_eq!(touchard_scaled(n, &a), rhs);
        }
    }

    #[test]
    fn moments() {
        let p11 = ModelParams::new(int(1), int(1)).unwrap();
        let p25 = ModelParams::new(int(2), int(5)).unwrap();
        assert_eq!(poisson_type_moment(0, &p25), int(1));
        assert_eq!(poisson_type_moment(1, &p11), int(1));
        assert_eq!(poisson_type_moment(2, &p25), rat(45, 4));
        let all = poisson_type_moments(10, &p25);
        for (m, v) in all.iter().enumerate() {
            assert_eq!(v, &poisson_type_moment(m, &p25));
        }
        assert_eq!(gaussian_moment(1, &rat(3, 4)), int(0));
        assert_eq!(gaussian_moment(2, &rat(3, 4)), rat(3, 4));
        assert_eq!(gaussian_moment(4, &int(1)), int(3));
        assert_eq!(gaussian_moment(6, &int(2)), int(120));
    }
}
