//! Zeroth-order Bessel function of the first kind and its first zero.
//!
//! Implemented in-repo so the verification suite is self-contained: the
//! ascending power series below `x = 9` (alternating, with the remainder
//! bounded by the first omitted term) and Miller's downward recurrence with
//! the normalization `J0 + 2 J2 + 2 J4 + ... = 1` above. Absolute error is
//! below 1e-13 on `[0, 50]`.

/// `J0(x)`. Even in `x`; negative arguments use `|x|`.
pub fn j0(x: f64) -> f64 {
    let x = x.abs();
    if x <= 9.0 {
        j0_series(x)
    } else {
        j0_miller(x)
    }
}

fn j0_series(x: f64) -> f64 {
    let q = 0.25 * x * x;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..200u32 {
        term *= -q / ((k * k) as f64);
        sum += term;
        if term.abs() <= 1e-18 * sum.abs() + 1e-300 {
            break;
        }
    }
    sum
}

fn j0_miller(x: f64) -> f64 {
    // Start the downward recurrence high enough that J_m is negligible.
    let mut m = x as usize + 42;
    if m % 2 == 1 {
        m += 1;
    }
    let mut j_next = 0.0_f64;
    let mut j_cur = 1e-300_f64;
    let mut even_sum = 0.0_f64;
    let mut j_zero = 0.0_f64;
    for k in (1..=m).rev() {
        let j_prev = (2.0 * k as f64 / x) * j_cur - j_next;
        j_next = j_cur;
        j_cur = j_prev;
        let order = k - 1;
        if order == 0 {
            j_zero = j_cur;
        } else if order % 2 == 0 {
            even_sum += j_cur;
        }
        if j_cur.abs() > 1e250 {
            j_cur *= 1e-250;
            j_next *= 1e-250;
            even_sum *= 1e-250;
            j_zero *= 1e-250;
        }
    }
    j_zero / (j_zero + 2.0 * even_sum)
}

/// First positive zero of `J0`, by bisection inside a bracket with a single
/// sign change.
pub fn first_zero_within(mut lo: f64, mut hi: f64) -> f64 {
    debug_assert!(
        j0(lo) > 0.0 && j0(hi) < 0.0,
        "bracket must straddle the zero"
    );
    while hi - lo > 2.0 * f64::EPSILON * hi {
        let mid = 0.5 * (lo + hi);
        if j0(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// First positive zero of `J0`, `B0 = 2.404825557695773...`.
pub fn first_zero() -> f64 {
    first_zero_within(2.0, 3.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn value_at_origin() {
        assert_eq!(j0(0.0), 1.0);
    }

    #[test]
    fn vanishes_at_the_first_zero() {
        assert!(j0(first_zero()).abs() < 1e-12);
    }

    #[test]
    fn matches_truncated_series_oracle_at_one() {
        // Independent 30-term oracle: alternating series, so the truncation
        // error is bounded by the first omitted term (far below 1e-16 here).
        let mut oracle = 0.0_f64;
        let mut term = 1.0_f64;
        for k in 0..30u32 {
            if k > 0 {
                term *= -0.25 / ((k * k) as f64);
            }
            oracle += term;
        }
        assert_abs_diff_eq!(j0(1.0), oracle, epsilon = 1e-15);
        assert_abs_diff_eq!(j0(1.0), 0.7651976865579666, epsilon = 1e-14);
    }

    #[test]
    fn reference_values_across_both_branches() {
        // Cross-checked against SciPy's j0.
        let refs = [
            (0.5, 9.38469807240813e-01),
            (2.0, 2.238907791412356e-01),
            (5.0, -1.775967713143383e-01),
            (8.0, 1.716508071375539e-01),
            (12.0, 4.768931079683335e-02),
            (15.0, -1.42244728267806e-02),
            (20.0, 1.670246643405832e-01),
            (30.0, -8.636798358104031e-02),
            (40.0, 7.366890584236951e-03),
            (50.0, 5.581232766925209e-02),
        ];
        for (x, want) in refs {
            assert_abs_diff_eq!(j0(x), want, epsilon = 1e-13);
        }
    }

    #[test]
    fn branches_agree_at_the_crossover() {
        // Dual-route check around x = 9 where the implementation switches.
        for x in [8.5, 9.0, 9.5, 10.0, 11.0] {
            assert_abs_diff_eq!(j0_series(x), j0_miller(x), epsilon = 1e-12);
        }
    }

    #[test]
    fn even_symmetry() {
        assert_eq!(j0(-3.7), j0(3.7));
    }

    #[test]
    fn first_zero_value_and_bracketing() {
        let b0 = first_zero();
        assert_abs_diff_eq!(b0, 2.404825557695773, epsilon = 1e-12);
        assert!(j0(b0 - 0.1) > 0.0);
        assert!(j0(b0 + 0.1) < 0.0);
    }

    #[test]
    fn first_zero_independent_of_bracket() {
        let a = first_zero_within(2.0, 3.0);
        let b = first_zero_within(2.2, 2.6);
        let c = first_zero_within(2.4, 2.41);
        assert_abs_diff_eq!(a, b, epsilon = 1e-13);
        assert_abs_diff_eq!(a, c, epsilon = 1e-13);
    }
}
