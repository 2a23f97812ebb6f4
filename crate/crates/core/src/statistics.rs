//! Exact law of `ξ_n`, the number of non-zero blocks in a uniformly random
//! colored partition: `P(ξ_n = k) = T_{n,k} / T_n`.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::bigmath::{ratio_to_f64, rational_to_f64, to_bigint};
use crate::enumeration::Rows;
use crate::error::{Error, Result};
use crate::params::ColorParams;

/// Exact mean and variance of `ξ_n`, with `f64` shadows.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentPair {
    pub n: usize,
    pub mean: BigRational,
    pub variance: BigRational,
    pub mean_f64: f64,
    pub variance_f64: f64,
}

impl MomentPair {
    fn new(n: usize, mean: BigRational, variance: BigRational) -> Self {
        Self {
            n,
            mean_f64: rational_to_f64(&mean),
            variance_f64: rational_to_f64(&variance),
            mean,
            variance,
        }
    }

    /// Same exact values, ignoring the float shadows.
    pub fn exact_eq(&self, other: &MomentPair) -> bool {
        self.n == other.n && self.mean == other.mean && self.variance == other.variance
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DistributionSummary {
    pub n: usize,
    pub pmf: Vec<BigRational>,
    pub cdf: Vec<BigRational>,
    pub moments: MomentPair,
    /// Distance to the fitted normal; `None` when the variance is zero.
    pub ks: Option<f64>,
}

fn ratio(num: &BigUint, den: &BigUint) -> BigRational {
    BigRational::new(to_bigint(num), to_bigint(den))
}

fn row(params: ColorParams, n: usize) -> Vec<BigUint> {
    Rows::new(params).nth(n).expect("row stream is infinite")
}

/// Moments from a table row by direct summation.
pub fn moments_from_row(row: &[BigUint]) -> MomentPair {
    let n = row.len() - 1;
    let total: BigUint = row.iter().sum();
    let mut first = BigUint::zero();
    let mut second = BigUint::zero();
    for (k, t) in row.iter().enumerate() {
        let kt = t * k as u64;
        second += &kt * k as u64;
        first += kt;
    }
    let mean = ratio(&first, &total);
    let variance = ratio(&second, &total) - &mean * &mean;
    MomentPair::new(n, mean, variance)
}

/// `E = Σ k T_{n,k} / T_n`, `V = Σ k² T_{n,k} / T_n - E²`.
pub fn moments_direct(params: ColorParams, n: usize) -> MomentPair {
    moments_from_row(&row(params, n))
}

/// Moments from three consecutive totals `T_n, T_{n+1}, T_{n+2}`:
/// `E = T_{n+1}/(m T_n) - (1+c)/m` and
/// `V = T_{n+2}/(m² T_n) - T_{n+1}²/(m² T_n²) - 1/m`.
pub fn moments_from_totals(params: ColorParams, n: usize, totals: [&BigUint; 3]) -> MomentPair {
    let m = BigInt::from(params.m());
    let c = BigInt::from(params.c());
    let [t0, t1, t2] = totals;
    let r1 = ratio(t1, t0);
    let r2 = ratio(t2, t0);
    let m_sq = &m * &m;
    let mean = &r1 / &m - BigRational::new(BigInt::one() + c, m.clone());
    let variance = r2 / &m_sq - &r1 * &r1 / &m_sq - BigRational::new(BigInt::one(), m);
    MomentPair::new(n, mean, variance)
}

pub fn moments_ratio(params: ColorParams, n: usize) -> MomentPair {
    let totals: Vec<BigUint> = Rows::new(params)
        .skip(n)
        .take(3)
        .map(|r| r.iter().sum())
        .collect();
    moments_from_totals(params, n, [&totals[0], &totals[1], &totals[2]])
}

/// `erfc(x)` for `x >= 0`, absolute error near 1e-16.
fn erfc_nonnegative(x: f64) -> f64 {
    const FRAC_2_SQRT_PI: f64 = std::f64::consts::FRAC_2_SQRT_PI;
    if x < 3.0 {
        // erf(x) = 2/√π · e^{-x²} · Σ 2^n x^{2n+1} / (2n+1)!!, all terms positive.
        let x2 = x * x;
        let mut term = x;
        let mut sum = x;
        let mut n = 0.0;
        while term > 1e-17 * sum {
            n += 1.0;
            term *= 2.0 * x2 / (2.0 * n + 1.0);
            sum += term;
        }
        1.0 - FRAC_2_SQRT_PI * (-x2).exp() * sum
    } else {
        // Continued fraction erfc(x) = e^{-x²}/√π · 1/(x + (1/2)/(x + 1/(x + (3/2)/(x + ...)))),
        // evaluated with the modified Lentz method.
        let tiny = 1e-300;
        let mut f = x;
        let mut c = x;
        let mut d = 0.0;
        for j in 1..500 {
            let a = j as f64 / 2.0;
            d = x + a * d;
            d = if d.abs() < tiny { tiny } else { d };
            c = x + a / c;
            c = if c.abs() < tiny { tiny } else { c };
            d = 1.0 / d;
            let delta = c * d;
            f *= delta;
            if (delta - 1.0).abs() < 1e-16 {
                break;
            }
        }
        0.5 * FRAC_2_SQRT_PI * (-x * x).exp() / f
    }
}

/// Standard normal cdf, absolute error near 1e-16.
pub fn normal_cdf(z: f64) -> f64 {
    let t = z / std::f64::consts::SQRT_2;
    if t <= 0.0 {
        0.5 * erfc_nonnegative(-t)
    } else {
        1.0 - 0.5 * erfc_nonnegative(t)
    }
}

/// `sup_k |P(ξ ≤ k) - Φ((k + 1/2 - E)/√V)|` for a row of counts.
pub fn ks_from_row(row: &[BigUint], moments: &MomentPair) -> Result<f64> {
    let n = row.len() - 1;
    if moments.variance.is_zero() {
        return Err(Error::Degenerate { n });
    }
    let total: BigUint = row.iter().sum();
    let sd = moments.variance_f64.sqrt();
    let mut cumulative = BigUint::zero();
    let mut sup = 0f64;
    for (k, t) in row.iter().enumerate() {
        cumulative += t;
        let empirical = ratio_to_f64(&cumulative, &total);
        let fitted = normal_cdf((k as f64 + 0.5 - moments.mean_f64) / sd);
        sup = sup.max((empirical - fitted).abs());
    }
    Ok(sup)
}

pub fn ks_to_normal(params: ColorParams, n: usize) -> Result<f64> {
    let row = row(params, n);
    ks_from_row(&row, &moments_from_row(&row))
}

/// Exact pmf and cdf from a table row.
pub fn summary_from_row(row: &[BigUint]) -> DistributionSummary {
    let n = row.len() - 1;
    let total: BigUint = row.iter().sum();
    let pmf: Vec<BigRational> = row.iter().map(|t| ratio(t, &total)).collect();
    let mut running = BigRational::zero();
    let cdf = pmf
        .iter()
        .map(|p| {
            running += p;
            running.clone()
        })
        .collect();
    let moments = moments_from_row(row);
    let ks = ks_from_row(row, &moments).ok();
    DistributionSummary {
        n,
        pmf,
        cdf,
        moments,
        ks,
    }
}

pub fn exact_pmf(params: ColorParams, n: usize) -> DistributionSummary {
    summary_from_row(&row(params, n))
}

/// Pearson goodness-of-fit result.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChiSquare {
    pub statistic: f64,
    pub dof: usize,
    pub p_value: f64,
}

/// Pearson chi-square of `observed` counts against probabilities `probs`.
/// Adjacent cells are pooled until each expected count reaches 5.
pub fn chi_square_gof(observed: &[u64], probs: &[f64]) -> ChiSquare {
    assert_eq!(observed.len(), probs.len());
    let total: u64 = observed.iter().sum();
    let mut cells: Vec<(f64, f64)> = Vec::new();
    let mut pending = (0.0, 0.0);
    for (&o, &p) in observed.iter().zip(probs) {
        pending.0 += o as f64;
        pending.1 += p * total as f64;
        if pending.1 >= 5.0 {
            cells.push(pending);
            pending = (0.0, 0.0);
        }
    }
    if pending.1 > 0.0 || pending.0 > 0.0 {
        match cells.last_mut() {
            Some(last) => {
                last.0 += pending.0;
                last.1 += pending.1;
            }
            None => cells.push(pending),
        }
    }
    let statistic: f64 = cells.iter().map(|(o, e)| (o - e) * (o - e) / e).sum();
    let dof = cells.len().saturating_sub(1);
    let p_value = if dof == 0 {
        1.0
    } else {
        ChiSquared::new(dof as f64)
            .expect("positive degrees of freedom")
            .sf(statistic)
    };
    ChiSquare {
        statistic,
        dof,
        p_value,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: u32, m: u32) -> ColorParams {
        ColorParams::new(c, m).unwrap()
    }

    fn q(a: i64, b: i64) -> BigRational {
        BigRational::new(BigInt::from(a), BigInt::from(b))
    }

    #[test]
    fn direct_moments() {
        let mp = moments_direct(p(2, 2), 1);
        assert_eq!((mp.mean.clone(), mp.variance.clone()), (q(1, 3), q(2, 9)));
        assert!((mp.mean_f64 - 1.0 / 3.0).abs() < 1e-15);
        let zero = moments_direct(p(4, 3), 0);
        assert!(zero.mean.is_zero() && zero.variance.is_zero());
        // row [1, 3, 1]: (0·1 + 1·3 + 2·1)/5 = 1
        assert_eq!(moments_direct(p(1, 1), 2).mean, q(1, 1));
    }

    #[test]
    fn ratio_moments() {
        let mp = moments_ratio(p(2, 2), 1);
        assert_eq!(mp.mean, q(1, 3));
        assert_eq!(mp.variance, q(2, 9));
        for (c, m) in [(1, 1), (3, 2), (2, 5)] {
            assert!(moments_ratio(p(c, m), 0).mean.is_zero());
        }
    }

    #[test]
    fn pmf_values() {
        let s = exact_pmf(p(1, 1), 1);
        assert_eq!(s.pmf, vec![q(1, 2), q(1, 2)]);
        let s = exact_pmf(p(2, 2), 2);
        assert_eq!(s.pmf, vec![q(4, 11), q(6, 11), q(1, 11)]);
        assert_eq!(s.cdf.last().unwrap(), &BigRational::one());
        let s = exact_pmf(p(1, 2), 3);
        assert_eq!(s.pmf, vec![q(1, 24), q(13, 24), q(9, 24), q(1, 24)]);
        assert!(exact_pmf(p(1, 1), 0).ks.is_none());
    }

    #[test]
    fn ks_single_step() {
        // pmf (1/2, 1/2), E = 1/2, V = 1/4: the sup sits at k = 1, |1 - Φ(2)|.
        let ks = ks_to_normal(p(1, 1), 1).unwrap();
        assert!((ks - 0.022_750_131_948_179_2).abs() < 1e-12, "{ks}");
        assert_eq!(ks_to_normal(p(1, 1), 0), Err(Error::Degenerate { n: 0 }));
    }

    #[test]
    fn chi_square_pools_sparse_cells() {
        let perfect = chi_square_gof(&[250, 500, 250], &[0.25, 0.5, 0.25]);
        assert_eq!(perfect.statistic, 0.0);
        assert_eq!(perfect.dof, 2);
        assert!((perfect.p_value - 1.0).abs() < 1e-12);
        // The two sparse tail cells merge into the last full cell.
        let pooled = chi_square_gof(&[50, 48, 1, 1], &[0.5, 0.48, 0.01, 0.01]);
        assert_eq!(pooled.dof, 1);
        let skewed = chi_square_gof(&[900, 100], &[0.5, 0.5]);
        assert!(skewed.p_value < 1e-12);
    }

    #[test]
    fn erfc_against_reference_values() {
        // Reference values to 15+ significant digits.
        let cases = [
            (0.0, 1.0),
            (0.5, 0.479_500_122_186_953_5),
            (1.0, 0.157_299_207_050_285_13),
            (2.0, 0.004_677_734_981_047_266),
            (2.999, 2.223_016_859_983_405_7e-5),
            (3.0, 2.209_049_699_858_544e-5),
            (5.0, 1.537_459_794_428_035e-12),
        ];
        for (x, expected) in cases {
            let got = erfc_nonnegative(x);
            assert!((got - expected).abs() < 1e-15, "erfc({x}) = {got:e}");
            assert!((got - expected).abs() <= 1e-12 * expected, "erfc({x}) rel");
        }
    }

    #[test]
    fn normal_cdf_reference_points() {
        assert_eq!(normal_cdf(0.0), 0.5);
        // Φ(1.96) and Φ(-3) to 1e-12.
        assert!((normal_cdf(1.96) - 0.975_002_104_851_779_5).abs() < 1e-12);
        assert!((normal_cdf(-3.0) - 0.001_349_898_031_630_093_3).abs() < 1e-14);
    }
}
