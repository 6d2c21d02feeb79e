//! Symmetric q-integers, q-factorials and Gaussian binomials.

use super::laurent::QLaurent;
use super::rational::Rational;

/// `[n] = (q^n - q^{-n}) / (q - q^{-1})`, defined for all integers `n`.
pub fn q_int(n: i64) -> QLaurent {
    if n == 0 {
        return QLaurent::zero();
    }
    let m = n.unsigned_abs() as i32;
    let sign = if n < 0 { Rational::from_int(-1) } else { Rational::one() };
    QLaurent::from_terms((0..m).map(|k| (m - 1 - 2 * k, sign.clone())).collect())
}

/// `[n]! = [1][2]...[n]`.
pub fn q_factorial(n: u32) -> QLaurent {
    (1..=n as i64).fold(QLaurent::one(), |acc, k| &acc * &q_int(k))
}

/// `[n choose k] = [n]! / ([k]! [n-k]!)`, zero outside `0 <= k <= n`.
pub fn gauss_binomial(n: i64, k: i64) -> QLaurent {
    if k < 0 || n < 0 || k > n {
        return QLaurent::zero();
    }
    let (n, k) = (n as u32, k as u32);
    q_factorial(n)
        .exact_div(&(&q_factorial(k) * &q_factorial(n - k)))
        .expect("gaussian binomial is a Laurent polynomial")
}

/// Gaussian binomial `(v)_n / ((v)_k (v)_{n-k})` as integer coefficients of `1, v, v^2, ...`;
/// empty (zero) outside `0 <= k <= n`.
pub fn gauss_binomial_v(n: i64, k: i64) -> Vec<i64> {
    if k < 0 || n < 0 || k > n {
        return Vec::new();
    }
    // Pascal rule [n,k] = [n-1,k-1] + v^k [n-1,k]
    let mut rows: Vec<Vec<Vec<i64>>> = vec![vec![vec![1]]];
    for m in 1..=n as usize {
        let prev = &rows[m - 1];
        let mut row = Vec::with_capacity(m + 1);
        for j in 0..=m {
            let mut c = vec![0i64; j * (m - j) + 1];
            if j >= 1 {
                for (d, x) in prev[j - 1].iter().enumerate() {
                    c[d] += x;
                }
            }
            if j < m {
                for (d, x) in prev[j].iter().enumerate() {
                    c[d + j] += x;
                }
            }
            row.push(c);
        }
        rows.push(row);
    }
    rows[n as usize][k as usize].clone()
}

/// `q - q^{-1}`.
pub fn q_minus_qinv() -> QLaurent {
    QLaurent::from_terms(vec![(1, Rational::one()), (-1, Rational::from_int(-1))])
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn small_values() {
        assert_eq!(q_int(2).to_string(), "q + q^-1");
        assert_eq!(q_int(-2), -&q_int(2));
        assert_eq!(gauss_binomial(4, 2).to_string(), "q^4 + q^2 + 2 + q^-2 + q^-4");
        assert_eq!(
            &q_int(3) * &q_minus_qinv(),
            QLaurent::from_terms(vec![(3, Rational::one()), (-3, Rational::from_int(-1))])
        );
    }

    #[test]
    fn binomial_in_v() {
        assert_eq!(gauss_binomial_v(2, 1), vec![1, 1]);
        assert_eq!(gauss_binomial_v(4, 2), vec![1, 1, 2, 1, 1]);
        assert!(gauss_binomial_v(3, 5).is_empty());
    }

    proptest! {
        #[test]
        fn v_binomial_is_palindromic_and_nonnegative(n in 0i64..9, k in 0i64..9) {
            prop_assume!(k <= n);
            let c = gauss_binomial_v(n, k);
            prop_assert!(c.iter().all(|x| *x >= 0));
            let mut r = c.clone();
            r.reverse();
            prop_assert_eq!(c, r);
        }

        #[test]
        fn q_int_times_q_minus_qinv(n in -20i64..=20) {
            let lhs = &q_int(n) * &q_minus_qinv();
            let rhs = &QLaurent::q_pow(n as i32) - &QLaurent::q_pow(-(n as i32));
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn pascal_rule(n in 1i64..9, k in 0i64..10) {
            let lhs = gauss_binomial(n, k);
            let rhs = &gauss_binomial(n - 1, k).shift(-(k as i32)) + &gauss_binomial(n - 1, k - 1).shift((n - k) as i32);
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn symmetric_under_bar(n in 0i64..9, k in 0i64..9) {
            let b = gauss_binomial(n, k);
            prop_assert_eq!(b.bar(), b);
        }
    }
}
