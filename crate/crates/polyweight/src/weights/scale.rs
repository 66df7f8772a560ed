//! Scale functions `x0`, `x1` and the combinatorial/summation facts built on them.

use serde::Serialize;

use super::catalog::FSpec;
use super::WeightError;

const LN_FLOOR: f64 = -690.7755278982137; // ln(1e-300)
const MAX_BISECTIONS: usize = 200;
const RESIDUAL_TOL: f64 = 1e-12;

/// Bisection on `u = ln x` for a decreasing `h(u)`; expands the lower end until `h > 0`.
fn bisect_decreasing(h: impl Fn(f64) -> f64, upper: f64) -> Option<f64> {
    if h(upper) > 0.0 {
        return None;
    }
    let mut lo = LN_FLOOR.min(upper - 1.0);
    let mut expansions = 0;
    while h(lo) <= 0.0 {
        lo *= 2.0;
        expansions += 1;
        if expansions > 60 {
            return None;
        }
    }
    let mut hi = upper;
    for _ in 0..MAX_BISECTIONS {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if h(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some(0.5 * (lo + hi))
}

/// Unique positive root of `F(x) = n`.
pub fn solve_x0(f: &FSpec, n: f64) -> Result<f64, WeightError> {
    let ln_n = n.ln();
    let u = bisect_decreasing(|u| f.ln_value_at_ln(u) - ln_n, f.cap.ln()).ok_or(
        WeightError::NoBracket {
            what: "x0",
            target: n,
        },
    )?;
    let x = u.exp();
    let residual = (f.ln_value_at_ln(u) - ln_n).exp_m1().abs();
    if x == 0.0 || residual > RESIDUAL_TOL {
        return Err(WeightError::NoBracket {
            what: "x0",
            target: n,
        });
    }
    Ok(x)
}

/// Unique positive root of `F(x) = n x`.
pub fn solve_x1(f: &FSpec, n: f64) -> Result<f64, WeightError> {
    let ln_n = n.ln();
    let u = bisect_decreasing(|u| f.ln_value_at_ln(u) - u - ln_n, f.cap.ln()).ok_or(
        WeightError::NoBracket {
            what: "x1",
            target: n,
        },
    )?;
    let x = u.exp();
    let residual = (f.ln_value_at_ln(u) - u - ln_n).exp_m1().abs();
    if x == 0.0 || residual > RESIDUAL_TOL {
        return Err(WeightError::NoBracket {
            what: "x1",
            target: n,
        });
    }
    Ok(x)
}

/// Empirical bounds `A2 <= |F'(x)| x / F(x) <= A1` on a log-spaced grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EmpiricalConstants {
    pub a1: f64,
    pub a2: f64,
    pub grid_top: f64,
}

pub const GRID_POINTS: usize = 512;
pub const GRID_BOTTOM: f64 = 1e-12;

pub fn log_grid(top: f64) -> impl Iterator<Item = f64> {
    let (lo, hi) = (GRID_BOTTOM.ln(), top.ln());
    (0..GRID_POINTS).map(move |i| (lo + (hi - lo) * i as f64 / (GRID_POINTS - 1) as f64).exp())
}

impl EmpiricalConstants {
    pub fn estimate(f: &FSpec) -> Self {
        let top = f.verified_top();
        let (mut a1, mut a2) = (f64::NEG_INFINITY, f64::INFINITY);
        for x in log_grid(top) {
            let e = f.elasticity(x);
            a1 = a1.max(e);
            a2 = a2.min(e);
        }
        EmpiricalConstants {
            a1,
            a2,
            grid_top: top,
        }
    }

    /// `eps = min{1/(1+2 A1), A2/(1+A2)} / 2`.
    pub fn sandwich_eps(&self) -> f64 {
        0.5 * (1.0 / (1.0 + 2.0 * self.a1)).min(self.a2 / (1.0 + self.a2))
    }
}

/// Two-sided power envelope anchored at the top of the verified grid:
/// `F(x0) (x0/x)^{A2} <= F(x) <= F(x0) (x0/x)^{A1}` for `x <= x0`.
pub fn envelope_holds(f: &FSpec, c: &EmpiricalConstants) -> bool {
    let top = c.grid_top;
    let ln_f_top = f.ln_value(top);
    log_grid(top).all(|x| {
        let ln_f = f.ln_value(x);
        let r = (top / x).ln();
        let slack = 1e-9 * ln_f.abs().max(1.0);
        ln_f_top + c.a2 * r <= ln_f + slack && ln_f <= ln_f_top + c.a1 * r + slack
    })
}

/// `(1 + eps) x1(2n) < x1(n) < (2 - eps) x1(2n)`.
pub fn sandwich_holds(f: &FSpec, c: &EmpiricalConstants, n: f64) -> Result<bool, WeightError> {
    let eps = c.sandwich_eps();
    let a = solve_x1(f, n)?;
    let b = solve_x1(f, 2.0 * n)?;
    Ok((1.0 + eps) * b < a && a < (2.0 - eps) * b)
}

/// Sum of multinomials `k!/(m1!...mk!(k - sum m)!)` over `m1 + 2 m2 + ... + k mk = k`.
pub fn lemma0_sum(k: u32) -> Result<u128, WeightError> {
    if k == 0 || k > 25 {
        return Err(WeightError::Overflow { k });
    }
    fn binom(n: u128, r: u128) -> Option<u128> {
        let mut acc: u128 = 1;
        for i in 0..r {
            acc = acc.checked_mul(n - i)? / (i + 1);
        }
        Some(acc)
    }
    // choose which of the k slots get part j; remaining slots take the constant term
    fn walk(part: u32, remaining_weight: u32, free_slots: u128, k: u32) -> Option<u128> {
        if remaining_weight == 0 {
            return Some(1);
        }
        if part > k || part > remaining_weight {
            return Some(0);
        }
        let mut total: u128 = 0;
        let max_m = remaining_weight / part;
        for m in 0..=max_m {
            if u128::from(m) > free_slots {
                break;
            }
            let ways = binom(free_slots, u128::from(m))?;
            let rest = walk(
                part + 1,
                remaining_weight - m * part,
                free_slots - u128::from(m),
                k,
            )?;
            total = total.checked_add(ways.checked_mul(rest)?)?;
        }
        Some(total)
    }
    walk(1, k, u128::from(k), k).ok_or(WeightError::Overflow { k })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OptimalK {
    pub k: u64,
    /// `n x1(n) / C^2`
    pub lower_bound: f64,
    pub lower_bound_holds: bool,
}

/// Minimal `k` with `C k / (n x0(k)) > 1/e`.
pub fn optimal_fourier_k(f: &FSpec, n: u64, c: f64) -> Result<OptimalK, WeightError> {
    const CAP: u64 = 1_000_000_000;
    let ln_target = -1.0 + (n as f64).ln() - c.ln();
    let holds = |k: u64| -> Result<bool, WeightError> {
        let x0 = solve_x0(f, k as f64)?;
        Ok((k as f64).ln() - x0.ln() > ln_target)
    };
    let start = (f.value(f.cap).ceil() as u64).max(1);
    let k = if holds(start)? {
        start
    } else {
        let mut lo = start;
        let mut hi = start.saturating_mul(2).max(start + 1);
        while !holds(hi)? {
            lo = hi;
            hi = hi.saturating_mul(2);
            if hi > CAP {
                return Err(WeightError::NotFound { cap: CAP });
            }
        }
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            if holds(mid)? {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        hi
    };
    let lower_bound = n as f64 * solve_x1(f, n as f64)? / (c * c);
    Ok(OptimalK {
        k,
        lower_bound,
        lower_bound_holds: k as f64 >= lower_bound,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TailSum {
    /// log of the tail sum (an upper estimate once block bounds kick in)
    pub lhs: f64,
    pub rhs: f64,
    pub pass: bool,
}

/// `log sum_{v >= n} exp(-c v x1(v))` against `-c n x1(n) / 2`.
pub fn tail_sum_check(f: &FSpec, n: u64, c: f64) -> Result<TailSum, WeightError> {
    const EXACT_TERMS: u64 = 100_000;
    let term = |v: u64| -> Result<f64, WeightError> { Ok(-c * v as f64 * solve_x1(f, v as f64)?) };
    let rhs = term(n)? / 2.0;
    let mut lhs = f64::NEG_INFINITY;
    let mut v = n;
    // exact terms first; they decrease, so stop once negligible
    while v < n + EXACT_TERMS {
        let t = term(v)?;
        lhs = crate::logmath::log_add_exp(lhs, t);
        if t < lhs - 50.0 {
            return Ok(TailSum {
                lhs,
                rhs,
                pass: lhs <= rhs,
            });
        }
        v += 1;
    }
    // then blocks of doubling length, each bounded by length times its first term
    let mut block = EXACT_TERMS;
    loop {
        let t = term(v)? + (block as f64).ln();
        lhs = crate::logmath::log_add_exp(lhs, t);
        if t < lhs - 50.0 {
            break;
        }
        v = v.saturating_add(block);
        block = block.saturating_mul(2);
        if v > u64::MAX / 4 {
            break;
        }
    }
    Ok(TailSum {
        lhs,
        rhs,
        pass: lhs <= rhs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_forms() {
        assert!((solve_x0(&FSpec::power(2.0), 4.0).unwrap() - 0.5).abs() < 1e-15);
        assert!((solve_x0(&FSpec::power(1.0), 10.0).unwrap() - 0.1).abs() < 1e-15);
        assert!((solve_x1(&FSpec::power(2.0), 8.0).unwrap() - 0.5).abs() < 1e-15);
        assert!((solve_x1(&FSpec::power(1.0), 4.0).unwrap() - 0.5).abs() < 1e-15);
        assert!((solve_x1(&FSpec::power(2.0), 1e6).unwrap() - 0.01).abs() < 1e-16);
    }

    #[test]
    fn power_log_residual() {
        let f = FSpec::power_log(1.0, 1.0);
        let x = solve_x0(&f, 50.0).unwrap();
        assert!((f.value(x) - 50.0).abs() / 50.0 <= 1e-12);
    }

    #[test]
    fn no_bracket_below_range() {
        assert!(matches!(
            solve_x0(&FSpec::power(1.0), 0.5),
            Err(WeightError::NoBracket { .. })
        ));
        assert!(solve_x1(&FSpec::power(1.0).with_cap(0.5), 3.0).is_err());
    }

    #[test]
    fn x0_monotone_and_nx1_increasing() {
        for f in [
            FSpec::power(1.0),
            FSpec::power_log(1.0, 0.5).with_cap(0.5),
            FSpec::exp_power(1.0),
        ] {
            let mut prev_x0 = f64::INFINITY;
            let mut prev_nx1 = 0.0;
            for k in 1..40 {
                let n = 10.0 * 1.5_f64.powi(k);
                let x0 = solve_x0(&f, n).unwrap();
                assert!(x0 < prev_x0);
                prev_x0 = x0;
                let nx1 = n * solve_x1(&f, n).unwrap();
                assert!(nx1 > prev_nx1);
                prev_nx1 = nx1;
            }
        }
    }

    #[test]
    fn empirical_constants_for_power() {
        let c = EmpiricalConstants::estimate(&FSpec::power(2.0));
        assert_eq!((c.a1, c.a2), (2.0, 2.0));
        assert!((c.sandwich_eps() - 0.1).abs() < 1e-15);
    }

    #[test]
    fn multinomial_sum_small() {
        assert_eq!(lemma0_sum(1).unwrap(), 1);
        assert_eq!(lemma0_sum(2).unwrap(), 3);
        assert_eq!(lemma0_sum(3).unwrap(), 10);
        assert!(lemma0_sum(25).is_ok());
        assert!(matches!(lemma0_sum(26), Err(WeightError::Overflow { .. })));
    }

    #[test]
    fn optimal_k_example() {
        let r = optimal_fourier_k(&FSpec::power(1.0), 2700, 3.0).unwrap();
        assert_eq!(r.k, 19);
        assert!(r.lower_bound_holds);
        assert!((r.lower_bound - 2700f64.sqrt() / 9.0).abs() < 1e-9);
    }

    #[test]
    fn optimal_k_is_minimal() {
        let f = FSpec::power(2.0);
        let (n, c) = (1_000_000u64, 3.0);
        let k = optimal_fourier_k(&f, n, c).unwrap().k;
        let crit =
            |k: u64| c * k as f64 / (n as f64 * solve_x0(&f, k as f64).unwrap()) > (-1.0f64).exp();
        assert!(crit(k));
        assert!(!crit(k - 1));
    }

    #[test]
    fn tail_sums() {
        let direct: f64 = (400..200_000)
            .map(|v: u64| (-(v as f64).sqrt()).exp())
            .sum();
        let r = tail_sum_check(&FSpec::power(1.0), 400, 1.0).unwrap();
        assert!((r.lhs - direct.ln()).abs() < 1e-9);
        assert!(r.pass);
        assert!(tail_sum_check(&FSpec::power(2.0), 1000, 5.0).unwrap().pass);
        let loose = tail_sum_check(&FSpec::power(1.0), 4, 0.01).unwrap();
        assert!(loose.lhs.is_finite());
    }
}
