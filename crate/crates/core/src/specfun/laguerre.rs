/// Generalized Laguerre polynomial L_n^a(x) by the three-term recurrence
///
/// (k + 1) L_{k+1} = (2k + 1 + a − x) L_k − (k + a) L_{k−1}.
pub fn laguerre(n: u32, a: f64, x: f64) -> f64 {
    let mut prev = 1.0;
    if n == 0 {
        return prev;
    }
    let mut cur = 1.0 + a - x;
    for k in 1..n {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 + a - x) * cur - (kf + a) * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// L_n^a(0) = (a + 1)_n / n! = C(n + a, n).
pub fn laguerre_at_zero(n: u32, a: f64) -> f64 {
    (1..=n).fold(1.0, |acc, k| acc * (a + k as f64) / k as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Σ_k (−1)^k C(n+a, n−k) x^k / k!, with the generalized binomial as a
    /// product so that it never touches the recurrence.
    fn monomial_oracle(n: u32, a: f64, x: f64) -> f64 {
        let binom = |top: f64, k: u32| -> f64 { (0..k).fold(1.0, |acc, j| acc * (top - j as f64) / (j as f64 + 1.0)) };
        let mut sum = 0.0;
        let mut xk_over_kfact = 1.0;
        for k in 0..=n {
            if k > 0 {
                xk_over_kfact *= x / k as f64;
            }
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            sum += sign * binom(n as f64 + a, n - k) * xk_over_kfact;
        }
        sum
    }

    #[test]
    fn low_orders() {
        assert_eq!(laguerre(0, 0.5, 7.0), 1.0);
        assert_eq!(laguerre(1, 0.5, 2.0), -0.5);
    }

    #[test]
    fn order_four_matches_monomial_expansion() {
        let got = laguerre(4, 0.5, 1.3);
        let want = monomial_oracle(4, 0.5, 1.3);
        assert!((got - want).abs() < 1e-13 * want.abs().max(1.0));
    }

    #[test]
    fn recurrence_matches_oracle_on_grid() {
        for n in 0..=12u32 {
            for &a in &[0.0, 0.5, 1.0] {
                for i in 0..=40 {
                    let x = 10.0 * i as f64 / 40.0;
                    let got = laguerre(n, a, x);
                    let want = monomial_oracle(n, a, x);
                    let scale = want.abs().max(1e-3);
                    assert!((got - want).abs() <= 1e-9 * scale, "n={n} a={a} x={x}: {got} vs {want}");
                }
            }
        }
    }

    #[test]
    fn value_at_zero_is_binomial() {
        for n in 0..10 {
            assert!((laguerre(n, 2.5, 0.0) - laguerre_at_zero(n, 2.5)).abs() < 1e-12 * laguerre_at_zero(n, 2.5));
        }
    }
}
