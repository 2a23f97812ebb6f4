//! Exact counts `T_{n,k}` of colored partitions with `k` non-zero blocks.
//!
//! [`count_table`] is the production path, driven by
//! `T_{n,k} = T_{n-1,k-1} + (mk + c) T_{n-1,k}` with `T_{n,0} = c^n`. The
//! other totals ([`closed_form_total`], [`egf_series_total`],
//! [`brute_force_total`]) share no code with it and exist to cross-check it.

use std::io::Write;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::params::ColorParams;
use crate::partition::{ColoredPartition, Tagged};

/// Largest `n` accepted by [`brute_force_total`].
pub const BRUTE_FORCE_TOTAL_CAP: usize = 10;
/// Largest `n` accepted by [`brute_force_enumerate`].
pub const BRUTE_FORCE_LIST_CAP: usize = 7;

/// Triangular table of `T_{n,k}` for `0 <= k <= n <= n_max`, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountTable {
    params: ColorParams,
    rows: Vec<Vec<BigUint>>,
}

/// Streams the rows of the count table one at a time, holding only the
/// current row in memory.
#[derive(Debug, Clone)]
pub struct Rows {
    params: ColorParams,
    next: Option<Vec<BigUint>>,
}

impl Rows {
    pub fn new(params: ColorParams) -> Self {
        Self {
            params,
            next: Some(vec![BigUint::one()]),
        }
    }
}

/// Row `n` from row `n - 1`.
fn next_row(params: &ColorParams, prev: &[BigUint]) -> Vec<BigUint> {
    let n = prev.len();
    let (c, m) = (params.c() as u64, params.m() as u64);
    let mut row = Vec::with_capacity(n + 1);
    for k in 0..=n {
        let mut entry = if k < n {
            &prev[k] * (m * k as u64 + c)
        } else {
            BigUint::zero()
        };
        if k >= 1 {
            entry += &prev[k - 1];
        }
        row.push(entry);
    }
    row
}

impl Iterator for Rows {
    type Item = Vec<BigUint>;

    fn next(&mut self) -> Option<Vec<BigUint>> {
        let current = self.next.take()?;
        self.next = Some(next_row(&self.params, &current));
        Some(current)
    }
}

pub fn count_table(params: ColorParams, n_max: usize) -> CountTable {
    let mut rows = Vec::with_capacity(n_max + 1);
    rows.push(vec![BigUint::one()]);
    for n in 1..=n_max {
        let row = next_row(&params, &rows[n - 1]);
        rows.push(row);
    }
    CountTable { params, rows }
}

impl CountTable {
    pub fn params(&self) -> ColorParams {
        self.params
    }

    pub fn n_max(&self) -> usize {
        self.rows.len() - 1
    }

    /// Row `n` as `[T_{n,0}, ..., T_{n,n}]`.
    pub fn row(&self, n: usize) -> Result<&[BigUint]> {
        self.rows
            .get(n)
            .map(Vec::as_slice)
            .ok_or(Error::BeyondTable {
                n,
                n_max: self.n_max(),
            })
    }

    pub fn rows(&self) -> impl Iterator<Item = &[BigUint]> {
        self.rows.iter().map(Vec::as_slice)
    }

    /// `T_{n,k}`, zero when `k > n`. Fails only when `n` exceeds the table.
    pub fn get(&self, n: usize, k: usize) -> Result<BigUint> {
        Ok(self.row(n)?.get(k).cloned().unwrap_or_default())
    }

    /// `T_n = Σ_k T_{n,k}`.
    pub fn total(&self, n: usize) -> Result<BigUint> {
        Ok(self.row(n)?.iter().sum())
    }

    /// Writes the table as CSV with header `n,k,T`, decimal values.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "n,k,T")?;
        for (n, row) in self.rows.iter().enumerate() {
            for (k, value) in row.iter().enumerate() {
                writeln!(out, "{n},{k},{value}")?;
            }
        }
        Ok(())
    }
}

/// `T_n`, streaming rows so only one row is alive at a time.
pub fn total(params: ColorParams, n: usize) -> BigUint {
    Rows::new(params)
        .nth(n)
        .expect("row stream is infinite")
        .iter()
        .sum()
}

/// Stirling numbers of the second kind from the standard triangle.
pub fn stirling2(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let mut row = vec![BigUint::one()];
    for i in 1..=n {
        let mut next = vec![BigUint::zero(); i + 1];
        for j in 1..=i {
            let mut v = &row.get(j).cloned().unwrap_or_default() * j as u64;
            v += &row[j - 1];
            next[j] = v;
        }
        row = next;
    }
    row.swap_remove(k)
}

fn binomial_row(n: usize) -> Vec<BigUint> {
    let mut row = vec![BigUint::one()];
    for k in 1..=n {
        let v = &row[k - 1] * (n - k + 1) as u64 / k as u64;
        row.push(v);
    }
    row
}

/// `Σ_k C(n,k) c^{n-k} Σ_j m^{k-j} S(k,j)`.
pub fn closed_form_total(params: ColorParams, n: usize) -> BigUint {
    let (c, m) = (BigUint::from(params.c()), BigUint::from(params.m()));
    let binom = binomial_row(n);
    // Stirling triangle rows 0..=n, built once.
    let mut stirling: Vec<Vec<BigUint>> = vec![vec![BigUint::one()]];
    for i in 1..=n {
        let prev = &stirling[i - 1];
        let row: Vec<BigUint> = (0..=i)
            .map(|j| {
                let mut v = prev.get(j).map(|s| s * j as u64).unwrap_or_default();
                if j >= 1 {
                    v += &prev[j - 1];
                }
                v
            })
            .collect();
        stirling.push(row);
    }
    (0..=n)
        .map(|k| {
            let inner: BigUint = (0..=k)
                .map(|j| m.pow((k - j) as u32) * &stirling[k][j])
                .sum();
            &binom[k] * c.pow((n - k) as u32) * inner
        })
        .sum()
}

/// `n!·[z^n] exp((e^{mz} - 1)/m + cz)` for `n = 0..=n_max`, using exact
/// rational series arithmetic.
pub fn egf_series_total(params: ColorParams, n_max: usize) -> Result<Vec<BigUint>> {
    let m = BigInt::from(params.m());
    // Argument g(z): g_1 = 1 + c, g_j = m^{j-1}/j! for j >= 2, g_0 = 0.
    let mut g = vec![BigRational::zero(); n_max + 1];
    let mut factorial = BigInt::one();
    for (j, coeff) in g.iter_mut().enumerate().skip(1) {
        factorial *= j;
        *coeff = BigRational::new(m.pow(j as u32 - 1), factorial.clone());
    }
    if n_max >= 1 {
        g[1] += BigRational::from_integer(BigInt::from(params.c()));
    }
    // exp of a series with zero constant term: n f_n = Σ_{j=1}^n j g_j f_{n-j}.
    let mut f = vec![BigRational::one()];
    for n in 1..=n_max {
        let mut acc = BigRational::zero();
        for j in 1..=n {
            acc += &g[j] * &f[n - j] * BigInt::from(j);
        }
        f.push(acc / BigInt::from(n));
    }
    let mut out = Vec::with_capacity(n_max + 1);
    let mut factorial = BigInt::one();
    for (n, coeff) in f.iter().enumerate() {
        if n > 0 {
            factorial *= n;
        }
        let scaled = coeff * &factorial;
        if !scaled.is_integer() {
            return Err(Error::NonIntegralCoefficient { n });
        }
        let value = scaled
            .to_integer()
            .to_biguint()
            .ok_or(Error::NonIntegralCoefficient { n })?;
        out.push(value);
    }
    Ok(out)
}

/// Restricted growth strings of length `len`: `labels[0] = 0` and each
/// label is at most one more than the maximum before it. Visits every set
/// partition of `{0, ..., len-1}` once.
fn for_each_set_partition(len: usize, mut visit: impl FnMut(&[usize], usize)) {
    if len == 0 {
        visit(&[], 0);
        return;
    }
    let mut labels = vec![0usize; len];
    // prefix_max[i] = max(labels[..i]) + 1, number of blocks used before i
    let mut prefix_max = vec![0usize; len + 1];
    prefix_max[1] = 1;
    for i in 1..len {
        prefix_max[i + 1] = prefix_max[i];
    }
    loop {
        visit(&labels, prefix_max[len]);
        // Find the rightmost position that can still be incremented.
        let mut i = len - 1;
        loop {
            if i == 0 {
                return;
            }
            if labels[i] < prefix_max[i] {
                break;
            }
            i -= 1;
        }
        labels[i] += 1;
        prefix_max[i + 1] = prefix_max[i].max(labels[i] + 1);
        for j in i + 1..len {
            labels[j] = 0;
            prefix_max[j + 1] = prefix_max[j];
        }
    }
}

fn check_cap(n: usize, cap: usize) -> Result<()> {
    if n > cap {
        return Err(Error::BruteForceCap { n, cap });
    }
    Ok(())
}

/// Sums coloring weights over every set partition of `[n] ∪ {0}`.
pub fn brute_force_total(params: ColorParams, n: usize) -> Result<BigUint> {
    check_cap(n, BRUTE_FORCE_TOTAL_CAP)?;
    let (c, m) = (params.c() as u128, params.m() as u128);
    let mut sizes = vec![0u32; n + 1];
    let mut sum = BigUint::zero();
    for_each_set_partition(n + 1, |labels, blocks| {
        sizes[..blocks].iter_mut().for_each(|s| *s = 0);
        for &l in labels {
            sizes[l] += 1;
        }
        // Label 0 is the block holding the element 0.
        let mut weight = BigUint::from(c).pow(sizes[0] - 1);
        for &s in &sizes[1..blocks] {
            weight *= BigUint::from(m).pow(s - 1);
        }
        sum += weight;
    });
    Ok(sum)
}

/// Lists every colored partition of `[n]` once.
pub fn brute_force_enumerate(params: ColorParams, n: usize) -> Result<Vec<ColoredPartition>> {
    check_cap(n, BRUTE_FORCE_LIST_CAP)?;
    let mut out = Vec::new();
    for_each_set_partition(n + 1, |labels, blocks| {
        // Elements of [n] that need a free color choice, with palette size.
        let mut free: Vec<(usize, u32)> = Vec::new();
        let mut first_seen = vec![false; blocks];
        first_seen[0] = true;
        for (e, &l) in labels.iter().enumerate().skip(1) {
            if l == 0 {
                free.push((e, params.c()));
            } else if first_seen[l] {
                free.push((e, params.m()));
            } else {
                first_seen[l] = true;
            }
        }
        let mut colors = vec![1u32; free.len()];
        loop {
            let mut zero_block = Vec::new();
            let mut nonzero: Vec<Vec<Tagged>> = vec![Vec::new(); blocks.saturating_sub(1)];
            let mut cursor = 0;
            for (e, &l) in labels.iter().enumerate().skip(1) {
                let color = if cursor < free.len() && free[cursor].0 == e {
                    cursor += 1;
                    colors[cursor - 1]
                } else {
                    1
                };
                let tagged = Tagged::new(e, color);
                if l == 0 {
                    zero_block.push(tagged);
                } else {
                    nonzero[l - 1].push(tagged);
                }
            }
            out.push(ColoredPartition {
                n,
                zero_block,
                nonzero_blocks: nonzero,
            });
            // Odometer over the free colors.
            let mut i = 0;
            while i < colors.len() && colors[i] == free[i].1 {
                colors[i] = 1;
                i += 1;
            }
            if i == colors.len() {
                break;
            }
            colors[i] += 1;
        }
    });
    Ok(out)
}
