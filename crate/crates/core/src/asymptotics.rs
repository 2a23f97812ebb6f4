//! Saddle-point asymptotics of `T_n`.
//!
//! The saddle point `r` is the positive root of `f(r) = r(e^{mr} + c) = x`.
//! `T_n` is compared with its asymptotic form in log scale only:
//!
//! `log T_n ≈ mnr - n + n/(mr) + 2cr - (1+c)/m - ½ log(mr + 1)`.

use num_bigint::BigUint;

use crate::bigmath::ln_biguint;
use crate::enumeration::total;
use crate::error::{Error, Result};
use crate::params::ColorParams;

/// Iteration cap for the bracketed Newton solver.
pub const MAX_ITERATIONS: usize = 200;
/// Residual bound `|f(r) - x| <= SADDLE_TOLERANCE · x`.
pub const SADDLE_TOLERANCE: f64 = 1e-12;
/// Tighter bound used for the nodes `t_0, t_1, t_2` of the lemma residuals.
pub const LEMMA_TOLERANCE: f64 = 1e-13;

/// Parameters of `f(r) = r(e^{mr} + c)`. Unlike [`ColorParams`], `c = 0`
/// is allowed here.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SaddleParams {
    pub c: u32,
    pub m: u32,
}

impl SaddleParams {
    pub fn new(c: u32, m: u32) -> Result<Self> {
        if m == 0 {
            return Err(Error::Domain {
                op: "saddle parameters",
                requirement: "m >= 1",
                got: format!("m={m}"),
            });
        }
        Ok(Self { c, m })
    }

    fn m(&self) -> f64 {
        self.m as f64
    }

    fn c(&self) -> f64 {
        self.c as f64
    }

    /// `f(r) = r(e^{mr} + c)`.
    pub fn f(&self, r: f64) -> f64 {
        r * ((self.m() * r).exp() + self.c())
    }

    /// `f'(r) = e^{mr}(1 + mr) + c`.
    pub fn df(&self, r: f64) -> f64 {
        (self.m() * r).exp() * (1.0 + self.m() * r) + self.c()
    }

    /// `f(t + δ) - f(t)` without cancellation for small `δ`.
    fn increment(&self, t: f64, delta: f64) -> f64 {
        let e = (self.m() * t).exp();
        delta * (e + self.c()) + (t + delta) * e * (self.m() * delta).exp_m1()
    }
}

impl From<ColorParams> for SaddleParams {
    fn from(p: ColorParams) -> Self {
        Self { c: p.c(), m: p.m() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SaddlePoint {
    pub params: SaddleParams,
    pub x: f64,
    pub r: f64,
    /// `f(r) - x`.
    pub residual: f64,
    pub iterations: usize,
}

/// Solves `r(e^{mr} + c) = x` for `x >= 1`.
pub fn solve_saddle(params: impl Into<SaddleParams>, x: f64) -> Result<SaddlePoint> {
    solve_with_tolerance(params.into(), x, SADDLE_TOLERANCE)
}

fn solve_with_tolerance(params: SaddleParams, x: f64, tolerance: f64) -> Result<SaddlePoint> {
    if x.is_nan() || x < 1.0 || !x.is_finite() {
        return Err(Error::Domain {
            op: "solve_saddle",
            requirement: "finite x >= 1",
            got: x.to_string(),
        });
    }
    let m = params.m();
    // f(0) = 0 < x, and f(u) >= e^{mu} >= x once u >= max(1, ln x / m).
    let (mut lo, mut hi) = (0.0f64, (x.ln() / m).max(1.0));
    let mut r = (x.max(2.0).ln() / m).clamp(lo, hi);
    for iteration in 1..=MAX_ITERATIONS {
        let residual = params.f(r) - x;
        if residual.abs() <= tolerance * x {
            return Ok(SaddlePoint {
                params,
                x,
                r,
                residual,
                iterations: iteration,
            });
        }
        if residual < 0.0 {
            lo = r;
        } else {
            hi = r;
        }
        let newton = r - residual / params.df(r);
        r = if newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
    }
    Err(Error::NoConvergence {
        x,
        iterations: MAX_ITERATIONS,
    })
}

/// Terms of the asymptotic log-estimate, summed into `log_value`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogEstimate {
    pub n: usize,
    pub r: f64,
    pub log_value: f64,
    /// `m·n·r`
    pub mnr: f64,
    /// `-n`
    pub minus_n: f64,
    /// `n / (m·r)`
    pub n_over_mr: f64,
    /// `2c·r`
    pub two_cr: f64,
    /// `-(1 + c)/m`
    pub constant: f64,
    /// `-½ log(m·r + 1)`
    pub prefactor: f64,
}

impl LogEstimate {
    pub fn terms(&self) -> [f64; 6] {
        [
            self.mnr,
            self.minus_n,
            self.n_over_mr,
            self.two_cr,
            self.constant,
            self.prefactor,
        ]
    }
}

pub fn log_total_asymptotic(params: impl Into<SaddleParams>, n: usize) -> Result<LogEstimate> {
    let params = params.into();
    if n < 2 {
        return Err(Error::Domain {
            op: "log_total_asymptotic",
            requirement: "n >= 2",
            got: n.to_string(),
        });
    }
    let r = solve_saddle(params, n as f64)?.r;
    let (m, c, nf) = (params.m(), params.c(), n as f64);
    let mnr = m * nf * r;
    let minus_n = -nf;
    let n_over_mr = nf / (m * r);
    let two_cr = 2.0 * c * r;
    let constant = -(1.0 + c) / m;
    let prefactor = -0.5 * (m * r).ln_1p();
    Ok(LogEstimate {
        n,
        r,
        log_value: mnr + minus_n + n_over_mr + two_cr + constant + prefactor,
        mnr,
        minus_n,
        n_over_mr,
        two_cr,
        constant,
        prefactor,
    })
}

/// `ln T_n` from the exact integer.
pub fn log_total_exact(params: ColorParams, n: usize) -> f64 {
    ln_biguint(&total(params, n))
}

/// `ln` of an already computed total.
pub fn log_of_total(value: &BigUint) -> f64 {
    ln_biguint(value)
}

/// Growth diagnostics for the saddle point at `x = n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GrowthDiagnostics {
    pub n: usize,
    pub r: f64,
    /// `|m r / ln n - 1|`
    pub d1: f64,
    /// `|n ln(n/r) - (m r n + c r)|`
    pub d2: f64,
}

pub fn saddle_growth_check(params: impl Into<SaddleParams>, n: usize) -> Result<GrowthDiagnostics> {
    let params = params.into();
    if n < 3 {
        return Err(Error::Domain {
            op: "saddle_growth_check",
            requirement: "n >= 3",
            got: n.to_string(),
        });
    }
    let nf = n as f64;
    let r = solve_saddle(params, nf)?.r;
    let (m, c) = (params.m(), params.c());
    Ok(GrowthDiagnostics {
        n,
        r,
        d1: (m * r / nf.ln() - 1.0).abs(),
        d2: (nf * (nf / r).ln() - (m * r * nf + c * r)).abs(),
    })
}

/// Nodes `t_i` with `f(t_i) = n + i` and the four remainder quantities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LemmaResiduals {
    pub n: usize,
    pub t0: f64,
    pub t1: f64,
    pub t2: f64,
    /// `(t1 - t0) - 1/(mn) + 1/(m² n t0)`
    pub res61: f64,
    /// `(t2 - t1) - 1/(mn) + 1/(m² n t0)`
    pub res62: f64,
    /// `(2 t1 - t0 - t2) - 1/(m n²)`
    pub res63: f64,
    /// `1/t0 + 1/t2 - 2/t1`
    pub res64: f64,
}

impl LemmaResiduals {
    /// Residuals scaled by their claimed orders:
    /// `n log²n`, `n log²n`, `n² log n`, `n² log²n`.
    pub fn scaled(&self) -> [f64; 4] {
        let nf = self.n as f64;
        let l = nf.ln();
        [
            self.res61.abs() * nf * l * l,
            self.res62.abs() * nf * l * l,
            self.res63.abs() * nf * nf * l,
            self.res64.abs() * nf * nf * l * l,
        ]
    }
}

/// Positive `δ` with `f(t + δ) - f(t) = target`. Newton from the upper bound
/// `target / f'(t)` decreases monotonically since `f` is convex.
fn solve_increment(params: SaddleParams, t: f64, target: f64) -> Result<f64> {
    let mut delta = target / params.df(t);
    for _ in 0..MAX_ITERATIONS {
        let step = (params.increment(t, delta) - target) / params.df(t + delta);
        delta -= step;
        if step.abs() <= 4.0 * f64::EPSILON * delta.abs() {
            return Ok(delta);
        }
    }
    Err(Error::NoConvergence {
        x: target,
        iterations: MAX_ITERATIONS,
    })
}

/// The differences `t1 - t0` and `t2 - t1` come from increment solves, so
/// `2 t1 - t0 - t2` and `1/t0 + 1/t2 - 2/t1` never subtract nearly equal
/// roots directly.
pub fn lemma_residuals(params: impl Into<SaddleParams>, n: usize) -> Result<LemmaResiduals> {
    let params = params.into();
    if n < 3 {
        return Err(Error::Domain {
            op: "lemma_residuals",
            requirement: "n >= 3",
            got: n.to_string(),
        });
    }
    let nf = n as f64;
    let t0 = solve_with_tolerance(params, nf, LEMMA_TOLERANCE)?.r;
    let offset = params.f(t0) - nf;
    let d1 = solve_increment(params, t0, 1.0 - offset)?;
    let t1 = t0 + d1;
    let d2 = solve_increment(params, t1, 1.0)?;
    let t2 = t1 + d2;
    let m = params.m();
    let main = 1.0 / (m * nf) - 1.0 / (m * m * nf * t0);
    Ok(LemmaResiduals {
        n,
        t0,
        t1,
        t2,
        res61: d1 - main,
        res62: d2 - main,
        res63: (d1 - d2) - 1.0 / (m * nf * nf),
        res64: d1 / (t0 * t1) - d2 / (t1 * t2),
    })
}

/// `h(a)/((a-b)(a-c)) + h(b)/((b-a)(b-c)) + h(c)/((c-a)(c-b))`, which equals
/// `h''(s)/2` for some `s` between the nodes.
pub fn second_divided_difference(h: impl Fn(f64) -> f64, a: f64, b: f64, c: f64) -> Result<f64> {
    if a == b || a == c || b == c || !(a.is_finite() && b.is_finite() && c.is_finite()) {
        return Err(Error::Domain {
            op: "second_divided_difference",
            requirement: "three distinct finite nodes",
            got: format!("({a}, {b}, {c})"),
        });
    }
    Ok(h(a) / ((a - b) * (a - c)) + h(b) / ((b - a) * (b - c)) + h(c) / ((c - a) * (c - b)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::E;

    fn sp(c: u32, m: u32) -> SaddleParams {
        SaddleParams::new(c, m).unwrap()
    }

    #[test]
    fn closed_form_saddles() {
        let r = solve_saddle(sp(0, 1), E).unwrap();
        assert!((r.r - 1.0).abs() < 1e-12);
        let r = solve_saddle(sp(0, 1), 2.0 * E * E).unwrap();
        assert!((r.r - 2.0).abs() < 1e-12);
        let r = solve_saddle(sp(1, 2), E * E + 1.0).unwrap();
        assert!((r.r - 1.0).abs() < 1e-12);
    }

    #[test]
    fn solver_rejects_small_targets() {
        assert!(matches!(
            solve_saddle(sp(1, 1), 0.5),
            Err(Error::Domain { .. })
        ));
        assert!(solve_saddle(sp(1, 1), f64::NAN).is_err());
        assert!(solve_saddle(sp(1, 1), f64::INFINITY).is_err());
        assert!(SaddleParams::new(1, 0).is_err());
    }

    #[test]
    fn solver_handles_x_equal_one() {
        let s = solve_saddle(sp(3, 3), 1.0).unwrap();
        assert!(s.residual.abs() <= 1e-12);
        assert!(s.r > 0.0);
    }

    #[test]
    fn estimate_terms_sum() {
        let est = log_total_asymptotic(ColorParams::new(2, 3).unwrap(), 50).unwrap();
        let sum: f64 = est.terms().iter().sum();
        assert_eq!(sum, est.log_value);
        assert!(log_total_asymptotic(sp(1, 1), 1).is_err());
    }

    #[test]
    fn exact_logs() {
        let p = ColorParams::new(2, 2).unwrap();
        assert_eq!(log_total_exact(p, 0), 0.0);
        assert!((log_total_exact(p, 2) - 11f64.ln()).abs() < 1e-15);
        assert!((log_total_exact(p, 3) - 49f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn growth_check_zero_c_is_exact() {
        let g = saddle_growth_check(sp(0, 1), 1000).unwrap();
        // n ln(n/r) = n m r exactly when c = 0, up to solver tolerance.
        assert!(g.d2 < 1e-6, "{}", g.d2);
        assert!(saddle_growth_check(sp(0, 1), 2).is_err());
    }

    #[test]
    fn lemma_nodes_are_ordered_and_accurate() {
        for (c, m) in [(0, 1), (1, 1), (2, 3)] {
            let params = sp(c, m);
            let res = lemma_residuals(params, 500).unwrap();
            assert!(res.t0 < res.t1 && res.t1 < res.t2);
            for (i, t) in [res.t0, res.t1, res.t2].into_iter().enumerate() {
                let target = 500.0 + i as f64;
                assert!((params.f(t) - target).abs() <= 1e-12 * target);
            }
        }
    }

    #[test]
    fn divided_difference_of_polynomials() {
        let dd = second_divided_difference(|x| x * x, -1.0, 3.0, 0.5).unwrap();
        assert!((dd - 1.0).abs() < 1e-14);
        let dd = second_divided_difference(|x| 4.0 * x - 7.0, 0.0, 2.0, 1.0).unwrap();
        assert!(dd.abs() < 1e-14);
        let dd = second_divided_difference(|x| x * x * x, 1.0, 2.0, 1.5).unwrap();
        assert!((dd - 4.5).abs() < 1e-13);
        assert!(second_divided_difference(|x| x, 1.0, 1.0, 2.0).is_err());
    }
}
