//! Gauss-Laguerre rule for `int_0^inf g(u) e^{-u} du`.

/// Nodes and weights of the `n`-point rule, exact for polynomials of
/// degree `< 2n`. Nodes by Newton iteration on `L_n`.
pub fn gauss_laguerre(n: usize) -> Vec<(f64, f64)> {
    assert!(n > 0, "Gauss-Laguerre needs at least one node");
    let nf = n as f64;
    let mut nodes: Vec<f64> = Vec::with_capacity(n);
    for i in 0..n {
        let mut z = match i {
            0 => 3.0 / (1.0 + 2.4 * nf),
            1 => nodes[0] + 15.0 / (1.0 + 2.5 * nf),
            _ => {
                let ai = (i - 1) as f64;
                nodes[i - 1] + (1.0 + 2.55 * ai) / (1.9 * ai) * (nodes[i - 1] - nodes[i - 2])
            }
        };
        for _ in 0..100 {
            let (ln, ln_1) = laguerre_pair(n, z);
            let deriv = nf * (ln - ln_1) / z;
            let step = ln / deriv;
            z -= step;
            if step.abs() <= 1e-15 * z.abs().max(1.0) {
                break;
            }
        }
        nodes.push(z);
    }
    // w_i = x_i / ((n + 1)^2 L_{n+1}(x_i)^2)
    nodes
        .into_iter()
        .map(|x| {
            let next = laguerre_pair(n + 1, x).0;
            (x, x / ((nf + 1.0) * (nf + 1.0) * next * next))
        })
        .collect()
}

/// `(L_n(x), L_{n-1}(x))` by the three-term recurrence.
fn laguerre_pair(n: usize, x: f64) -> (f64, f64) {
    let mut p_prev = 0.0;
    let mut p = 1.0;
    for j in 1..=n {
        let jf = j as f64;
        let next = ((2.0 * jf - 1.0 - x) * p - (jf - 1.0) * p_prev) / jf;
        p_prev = p;
        p = next;
    }
    (p, p_prev)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integrates_polynomial_moments_exactly() {
        for n in [1usize, 4, 10, 20] {
            let rule = gauss_laguerre(n);
            assert_eq!(rule.len(), n);
            let mut fact = 1.0;
            for k in 0..2 * n {
                if k > 0 {
                    fact *= k as f64;
                }
                let q: f64 = rule.iter().map(|(x, w)| w * x.powi(k as i32)).sum();
                assert!((q - fact).abs() <= 1e-10 * fact, "n={n} k={k} q={q} expected={fact}");
            }
        }
    }

    #[test]
    fn nodes_are_distinct_and_increasing() {
        let rule = gauss_laguerre(16);
        assert!(rule.windows(2).all(|w| w[0].0 < w[1].0));
        assert!(rule.iter().all(|(x, w)| *x > 0.0 && *w > 0.0));
    }
}
