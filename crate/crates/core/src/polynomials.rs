//! Block-count polynomials `T_n(x) = Σ_k T_{n,k} x^k` and exact certificates
//! that each has `n` distinct negative real roots.
//!
//! Root counting uses a Sturm chain over the integers: each link is the
//! negated pseudo-remainder scaled by a positive factor and reduced to its
//! primitive part, so signs are preserved and coefficients stay small.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::bigmath::to_bigint;
use crate::enumeration::{CountTable, Rows};
use crate::error::Result;
use crate::params::ColorParams;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockPolynomial {
    pub params: ColorParams,
    pub n: usize,
    /// `[T_{n,0}, ..., T_{n,n}]`, ascending in `k`.
    pub coeffs: Vec<BigUint>,
}

impl BlockPolynomial {
    pub fn from_table(table: &CountTable, n: usize) -> Result<Self> {
        Ok(Self {
            params: table.params(),
            n,
            coeffs: table.row(n)?.to_vec(),
        })
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Exact value at a nonnegative integer point.
    pub fn eval(&self, x: u64) -> BigUint {
        self.coeffs
            .iter()
            .rev()
            .fold(BigUint::zero(), |acc, c| acc * x + c)
    }

    /// Writes the coefficients as CSV with header `k,coeff`.
    pub fn write_csv<W: std::io::Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "k,coeff")?;
        for (k, c) in self.coeffs.iter().enumerate() {
            writeln!(out, "{k},{c}")?;
        }
        Ok(())
    }
}

pub fn block_polynomial(params: ColorParams, n: usize) -> BlockPolynomial {
    let coeffs = Rows::new(params).nth(n).expect("row stream is infinite");
    BlockPolynomial { params, n, coeffs }
}

/// Checks `T_n(x) = (x + c) T_{n-1}(x) + m x T'_{n-1}(x)` coefficientwise.
pub fn verify_poly_recurrence(params: ColorParams, n: usize) -> bool {
    if n == 0 {
        return false;
    }
    let mut rows = Rows::new(params).skip(n - 1);
    let prev = rows.next().expect("infinite");
    let current = rows.next().expect("infinite");
    poly_recurrence_holds(params, &prev, &current)
}

pub(crate) fn poly_recurrence_holds(
    params: ColorParams,
    prev: &[BigUint],
    current: &[BigUint],
) -> bool {
    if current.len() != prev.len() + 1 {
        return false;
    }
    let (c, m) = (params.c() as u64, params.m() as u64);
    let coeff = |k: usize| prev.get(k).cloned().unwrap_or_default();
    // x·P(x) shifts up; c·P(x) stays; m·x·P'(x) has coefficient m·k·P_k at x^k.
    (0..current.len()).all(|k| {
        let mut rhs = &coeff(k) * (c + m * k as u64);
        if k >= 1 {
            rhs += coeff(k - 1);
        }
        rhs == current[k]
    })
}

/// Result of a Sturm-chain root count on `(-∞, 0)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RootCount {
    /// Distinct real roots strictly below zero.
    pub distinct_negative: usize,
    /// Degree of `gcd(p, p')`; zero exactly when `p` is square-free.
    pub gcd_degree: usize,
}

impl RootCount {
    pub fn is_square_free(&self) -> bool {
        self.gcd_degree == 0
    }
}

type IntPoly = Vec<BigInt>;

fn trim(p: &mut IntPoly) {
    while p.len() > 1 && p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
}

fn is_zero_poly(p: &IntPoly) -> bool {
    p.iter().all(Zero::is_zero)
}

fn derivative(p: &IntPoly) -> IntPoly {
    let mut d: IntPoly = p
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, c)| c * BigInt::from(k))
        .collect();
    if d.is_empty() {
        d.push(BigInt::zero());
    }
    d
}

/// Divides out the positive content, keeping signs.
fn primitive_part(mut p: IntPoly) -> IntPoly {
    let content = p.iter().fold(BigInt::zero(), |acc, v| acc.gcd(v));
    if !content.is_zero() && !content.is_one() {
        for c in &mut p {
            *c /= &content;
        }
    }
    p
}

/// `lc(b)^{δ+1} · a mod b` with `δ = deg a - deg b`, requires `deg a >= deg b`.
fn pseudo_remainder(a: &IntPoly, b: &IntPoly) -> IntPoly {
    let (da, db) = (a.len() - 1, b.len() - 1);
    let lead = b.last().expect("nonempty");
    let mut r = a.clone();
    for pos in (db..=da).rev() {
        let top = r[pos].clone();
        for c in r.iter_mut() {
            *c *= lead;
        }
        for (j, bc) in b.iter().enumerate() {
            r[pos - db + j] -= &top * bc;
        }
    }
    r.truncate(db.max(1));
    trim(&mut r);
    r
}

/// Sturm chain `p, p', -rem(p, p'), ...` with primitive-part reduction.
fn sturm_chain(p: &IntPoly) -> Vec<IntPoly> {
    let mut chain = vec![primitive_part(p.clone()), primitive_part(derivative(p))];
    loop {
        let (a, b) = (&chain[chain.len() - 2], &chain[chain.len() - 1]);
        if b.len() == 1 {
            break;
        }
        let mut r = pseudo_remainder(a, b);
        if is_zero_poly(&r) {
            break;
        }
        let lead = b.last().expect("nonempty");
        let delta = a.len() - b.len();
        let multiplier_negative = lead.is_negative() && (delta + 1) % 2 == 1;
        // -rem(a, b) up to a positive factor.
        if !multiplier_negative {
            for c in r.iter_mut() {
                *c = -&*c;
            }
        }
        chain.push(primitive_part(r));
    }
    chain
}

fn sign_changes(signs: impl IntoIterator<Item = Sign>) -> usize {
    let mut last = Sign::NoSign;
    let mut changes = 0;
    for s in signs {
        if s == Sign::NoSign {
            continue;
        }
        if last != Sign::NoSign && s != last {
            changes += 1;
        }
        last = s;
    }
    changes
}

fn sign_at_neg_infinity(p: &IntPoly) -> Sign {
    let lead = p.last().expect("nonempty").sign();
    if (p.len() - 1) % 2 == 1 {
        -lead
    } else {
        lead
    }
}

/// Counts distinct real roots in `(-∞, 0)` with an exact Sturm chain.
pub fn count_distinct_negative_roots(poly: &BlockPolynomial) -> RootCount {
    let mut p: IntPoly = poly.coeffs.iter().map(to_bigint).collect();
    trim(&mut p);
    if p.len() <= 1 {
        return RootCount {
            distinct_negative: 0,
            gcd_degree: 0,
        };
    }
    let chain = sturm_chain(&p);
    let at_neg_inf = sign_changes(chain.iter().map(sign_at_neg_infinity));
    let at_zero = sign_changes(chain.iter().map(|q| q[0].sign()));
    RootCount {
        distinct_negative: at_neg_inf - at_zero,
        gcd_degree: chain.last().map_or(0, |g| g.len() - 1),
    }
}

/// `T_k^2 · k(n-k) ≥ T_{k-1} T_{k+1} (k+1)(n-k+1)` for `1 ≤ k ≤ n-1`.
pub fn newton_inequalities(poly: &BlockPolynomial) -> bool {
    let a = &poly.coeffs;
    let n = a.len() - 1;
    (1..n).all(|k| {
        let lhs = &a[k] * &a[k] * BigUint::from(k * (n - k));
        let rhs = &a[k - 1] * &a[k + 1] * BigUint::from((k + 1) * (n - k + 1));
        lhs >= rhs
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: u32, m: u32) -> ColorParams {
        ColorParams::new(c, m).unwrap()
    }

    fn nums(v: &[u64]) -> Vec<BigUint> {
        v.iter().map(|&x| BigUint::from(x)).collect()
    }

    fn from_coeffs(v: &[u64]) -> BlockPolynomial {
        BlockPolynomial {
            params: p(1, 1),
            n: v.len() - 1,
            coeffs: nums(v),
        }
    }

    #[test]
    fn displayed_low_degree_polynomials() {
        for (c, m) in [(1u64, 1u64), (2, 3), (3, 2), (5, 7)] {
            let params = p(c as u32, m as u32);
            assert_eq!(block_polynomial(params, 1).coeffs, nums(&[c, 1]));
            assert_eq!(
                block_polynomial(params, 3).coeffs,
                nums(&[c * c * c, m * m + 3 * c * m + 3 * c * c, 3 * m + 3 * c, 1])
            );
        }
        assert_eq!(
            block_polynomial(p(2, 2), 4).coeffs,
            nums(&[16, 120, 100, 20, 1])
        );
    }

    #[test]
    fn recurrence_checks() {
        assert!(verify_poly_recurrence(p(2, 2), 2));
        assert!(verify_poly_recurrence(p(1, 1), 1));
        assert!(verify_poly_recurrence(p(3, 2), 25));
        assert!(!poly_recurrence_holds(
            p(2, 2),
            &nums(&[2, 1]),
            &nums(&[4, 7, 1])
        ));
    }

    #[test]
    fn sturm_counts_small_cases() {
        let lin = block_polynomial(p(4, 1), 1);
        assert_eq!(count_distinct_negative_roots(&lin).distinct_negative, 1);
        let quad = block_polynomial(p(2, 2), 2);
        assert_eq!(quad.coeffs, nums(&[4, 6, 1]));
        assert_eq!(count_distinct_negative_roots(&quad).distinct_negative, 2);
        let big = block_polynomial(p(1, 2), 40);
        let count = count_distinct_negative_roots(&big);
        assert_eq!(count.distinct_negative, 40);
        assert!(count.is_square_free());
    }

    #[test]
    fn sturm_on_non_real_rooted_and_repeated_roots() {
        // x^2 + x + 1: no real roots.
        assert_eq!(
            count_distinct_negative_roots(&from_coeffs(&[1, 1, 1])).distinct_negative,
            0
        );
        // (x+1)^2 (x+2) = x^3 + 4x^2 + 5x + 2: two distinct, gcd degree 1.
        let r = count_distinct_negative_roots(&from_coeffs(&[2, 5, 4, 1]));
        assert_eq!(r.distinct_negative, 2);
        assert_eq!(r.gcd_degree, 1);
        // (x+1)(x+2)(x+3)(x^2+1): three negative roots.
        let r = count_distinct_negative_roots(&from_coeffs(&[6, 11, 12, 12, 6, 1]));
        assert_eq!(r.distinct_negative, 3);
    }

    #[test]
    fn newton_checks() {
        assert!(newton_inequalities(&from_coeffs(&[4, 6, 1])));
        assert!(newton_inequalities(&from_coeffs(&[1, 3, 1])));
        // x^2 + x + 1 is not real-rooted and fails: 1·1·4 > 1.
        assert!(!newton_inequalities(&from_coeffs(&[1, 1, 1])));
    }

    #[test]
    fn evaluation_at_one_is_total() {
        let params = p(2, 3);
        for n in 0..12 {
            assert_eq!(block_polynomial(params, n).eval(1), crate::total(params, n));
        }
    }

    #[test]
    fn csv_dump() {
        let mut buf = Vec::new();
        block_polynomial(p(2, 2), 2).write_csv(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "k,coeff\n0,4\n1,6\n2,1\n");
    }
}
