//! The `verify` suite: every oracle and identity at one palette.

use std::collections::HashSet;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use serde::Serialize;

use dowling::polynomials::BlockPolynomial;
use dowling::statistics::{moments_from_row, moments_from_totals};
use dowling::{
    brute_force_enumerate, brute_force_total, closed_form_total, count_distinct_negative_roots,
    count_table, egf_series_total, newton_inequalities, validate, verify_poly_recurrence,
    ColorParams, CountTable, Sampler,
};

/// Largest n used for brute-force totals inside `verify`.
const BRUTE_TOTAL_LIMIT: usize = 8;
/// Largest n for the exhaustive bijection check.
const BIJECTION_LIMIT: usize = 6;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerifyRow {
    pub check: String,
    pub c: u32,
    pub m: u32,
    pub n_max: usize,
    pub status: String,
    pub detail: String,
}

fn outcome(check: &str, params: ColorParams, n_max: usize, failure: Option<String>) -> VerifyRow {
    VerifyRow {
        check: check.to_owned(),
        c: params.c(),
        m: params.m(),
        n_max,
        status: if failure.is_none() { "pass" } else { "fail" }.to_owned(),
        detail: failure.unwrap_or_default(),
    }
}

fn first_mismatch(
    range: impl IntoIterator<Item = usize>,
    mut check: impl FnMut(usize) -> Option<String>,
) -> Option<String> {
    range.into_iter().find_map(&mut check)
}

fn totals(table: &CountTable) -> Vec<BigUint> {
    (0..=table.n_max())
        .map(|n| table.total(n).expect("in range"))
        .collect()
}

/// Bell numbers `B_0..=B_len` from the Bell triangle.
fn bell_numbers(len: usize) -> Vec<BigUint> {
    let mut out = vec![BigUint::one()];
    let mut row = vec![BigUint::one()];
    for _ in 0..len {
        let mut next = vec![row.last().expect("nonempty").clone()];
        for value in &row {
            let v = next.last().expect("nonempty") + value;
            next.push(v);
        }
        out.push(next[0].clone());
        row = next;
    }
    out
}

fn check_bijection(params: ColorParams, table: &CountTable, n: usize) -> Option<String> {
    let sampler = Sampler::from_table(table.clone());
    let size = table.total(n).ok()?.to_u64()?;
    let mut seen = HashSet::new();
    let mut per_k = vec![0u64; n + 1];
    for r in 0..size {
        let rank = BigUint::from(r);
        let partition = match sampler.unrank(n, &rank) {
            Ok(p) => p,
            Err(e) => return Some(format!("n={n} rank={r}: {e}")),
        };
        if !validate(&params, &partition) {
            return Some(format!("n={n} rank={r}: invalid {partition}"));
        }
        match sampler.rank(&partition) {
            Ok(back) if back == rank => {}
            Ok(back) => return Some(format!("n={n}: rank(unrank({r})) = {back}")),
            Err(e) => return Some(format!("n={n} rank={r}: {e}")),
        }
        per_k[partition.k()] += 1;
        if !seen.insert(partition.to_string()) {
            return Some(format!("n={n}: duplicate {partition}"));
        }
    }
    for (k, &count) in per_k.iter().enumerate() {
        if BigUint::from(count) != table.get(n, k).ok()? {
            return Some(format!("n={n}: {count} partitions with k={k}"));
        }
    }
    let listed: HashSet<String> = brute_force_enumerate(params, n)
        .ok()?
        .iter()
        .map(ToString::to_string)
        .collect();
    (listed != seen).then(|| format!("n={n}: unranked set differs from brute-force listing"))
}

/// Runs the whole suite; one row per check.
pub fn run_suite(params: ColorParams, n_max: usize) -> Vec<VerifyRow> {
    let table = count_table(params, n_max + 2);
    let totals = totals(&table);
    let mut rows = Vec::new();

    let brute = first_mismatch(0..=n_max.min(BRUTE_TOTAL_LIMIT), |n| {
        let value = brute_force_total(params, n).ok()?;
        (value != totals[n]).then(|| format!("n={n}: brute force {value} vs table {}", totals[n]))
    });
    rows.push(outcome("oracle_brute_force", params, n_max, brute));

    let closed = first_mismatch(0..=n_max, |n| {
        let value = closed_form_total(params, n);
        (value != totals[n]).then(|| format!("n={n}: closed form {value} vs table {}", totals[n]))
    });
    rows.push(outcome("oracle_closed_form", params, n_max, closed));

    let egf = match egf_series_total(params, n_max) {
        Ok(series) => first_mismatch(0..=n_max, |n| {
            (series[n] != totals[n])
                .then(|| format!("n={n}: series {} vs table {}", series[n], totals[n]))
        }),
        Err(e) => Some(e.to_string()),
    };
    rows.push(outcome("oracle_egf_series", params, n_max, egf));

    if params.c() == 1 && params.m() == 1 {
        let bell = bell_numbers(n_max + 1);
        let failure = first_mismatch(0..=n_max, |n| {
            (bell[n + 1] != totals[n])
                .then(|| format!("n={n}: Bell {} vs {}", bell[n + 1], totals[n]))
        });
        rows.push(outcome("bell_numbers", params, n_max, failure));
    }

    let recurrence = first_mismatch(1..=n_max, |n| {
        (!verify_poly_recurrence(params, n)).then(|| format!("n={n}"))
    });
    rows.push(outcome("poly_recurrence", params, n_max, recurrence));

    let polys: Vec<BlockPolynomial> = (0..=n_max)
        .map(|n| BlockPolynomial::from_table(&table, n).expect("in range"))
        .collect();
    let sturm = first_mismatch(1..=n_max, |n| {
        let count = count_distinct_negative_roots(&polys[n]);
        (count.distinct_negative != n || !count.is_square_free()).then(|| {
            format!(
                "n={n}: {} distinct negative roots, gcd degree {}",
                count.distinct_negative, count.gcd_degree
            )
        })
    });
    rows.push(outcome("sturm_roots", params, n_max, sturm));

    let newton = first_mismatch(2..=n_max, |n| {
        (!newton_inequalities(&polys[n])).then(|| format!("n={n}"))
    });
    rows.push(outcome("newton_inequalities", params, n_max, newton));

    let moments = first_mismatch(0..=n_max, |n| {
        let direct = moments_from_row(table.row(n).ok()?);
        let ratio = moments_from_totals(params, n, [&totals[n], &totals[n + 1], &totals[n + 2]]);
        (!direct.exact_eq(&ratio)).then(|| {
            format!(
                "n={n}: direct ({}, {}) vs ratio ({}, {})",
                direct.mean, direct.variance, ratio.mean, ratio.variance
            )
        })
    });
    rows.push(outcome("moments_identity", params, n_max, moments));

    let bijection = first_mismatch(0..=n_max.min(BIJECTION_LIMIT), |n| {
        check_bijection(params, &table, n)
    });
    rows.push(outcome("bijection", params, n_max, bijection));

    rows
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bell_triangle() {
        let b: Vec<u64> = bell_numbers(6)
            .iter()
            .map(|x| x.to_u64().unwrap())
            .collect();
        assert_eq!(b, vec![1, 1, 2, 5, 15, 52, 203]);
    }

    #[test]
    fn suite_passes_on_small_palettes() {
        for (c, m) in [(1, 1), (2, 3)] {
            let rows = run_suite(ColorParams::new(c, m).unwrap(), 7);
            assert!(rows.iter().all(|r| r.status == "pass"), "{rows:?}");
        }
    }
}
