//! Finite approximations of equivariant cohomology.
//!
//! The stable answer is the Hilbert series of the Stanley-Reisner ring of
//! the fan, computed combinatorially from face counts. The m-th
//! approximation is the quotient by the non-face ideal plus the (m+1)-st
//! powers of the character linear forms; its graded dimensions are computed
//! by the same degreewise row reduction as ordinary cohomology, and they
//! must agree with the Betti numbers of the associated approximation
//! bundle, which is itself a twisted product. The consistency check runs
//! all three pipelines and compares.

use crate::cohomology::{betti_numbers, graded_basis, linear_ideal, sr_ideal};
use crate::error::{Error, Result};
use crate::fan::Fan;
use crate::linalg::binomial;
use crate::poly::Polynomial;
use crate::twist::borel_fan;

/// Graded dimensions of the Stanley-Reisner ring, from the closed form
/// sum_i f_{i-1} t^i / (1-t)^i: the coefficient of t^d for d >= 1 is
/// sum_i f_{i-1} C(d-1, i-1).
pub fn sr_hilbert_coeffs(fan: &Fan, d_max: usize) -> Vec<usize> {
    let f = fan.enumerate_faces().f_vector;
    (0..=d_max)
        .map(|d| {
            if d == 0 {
                return 1;
            }
            let mut total = num::BigInt::from(0);
            for (i, &count) in f.iter().enumerate().skip(1) {
                total += num::BigInt::from(count as i64) * binomial(d - 1, i - 1);
            }
            usize::try_from(u64::try_from(total).expect("desk scale")).expect("fits usize")
        })
        .collect()
}

/// Per-degree dimensions of the quotient by the non-face ideal plus the
/// (m+1)-st powers of the standard character forms.
pub fn truncated_quotient_dims(fan: &Fan, m: usize, d_max: usize) -> Vec<usize> {
    let num_vars = fan.rays().len();
    let monomial_gens = sr_ideal(fan);
    let power_gens: Vec<Polynomial> = linear_ideal(fan)
        .into_iter()
        .map(|form| form.pow((m + 1) as u32))
        .collect();
    (0..=d_max)
        .map(|d| graded_basis(num_vars, &monomial_gens, &power_gens, d).dimension())
        .collect()
}

/// The three-way consistency report for the m-th approximation.
#[derive(Debug, Clone)]
pub struct EquivariantReport {
    pub m: usize,
    /// Dimensions of the truncated quotient, degrees 0..=d_max.
    pub truncated_dims: Vec<usize>,
    /// Stanley-Reisner Hilbert coefficients over the same degree range.
    pub sr_coeffs: Vec<usize>,
    /// Betti numbers of the twisted product of the approximation data.
    pub borel_betti: Vec<usize>,
    pub consistent: bool,
    pub mismatches: Vec<String>,
}

/// Compare (a) the truncated quotient against the Stanley-Reisner
/// coefficients in degrees <= m, (b) the truncated quotient against the
/// Betti numbers of the approximation bundle fan in all degrees, and (c)
/// monotone stabilization in m at each fixed degree.
pub fn equivariant_consistency_check(fan: &Fan, m: usize) -> Result<EquivariantReport> {
    let n = fan.rank();
    let total_rank = n * (m + 1);
    if total_rank > 5 {
        return Err(Error::TooLarge(format!(
            "approximation bundle fan would have rank {total_rank}; the degreewise \
             row reduction is kept to rank <= 5"
        )));
    }
    let d_max = total_rank + 1;
    let truncated_dims = truncated_quotient_dims(fan, m, d_max);
    let sr_coeffs = sr_hilbert_coeffs(fan, d_max);
    let data = borel_fan(fan, m)?;
    let borel_betti = betti_numbers(&data.twisted_product())?;

    let mut mismatches = Vec::new();
    for d in 0..=m.min(d_max) {
        if truncated_dims[d] != sr_coeffs[d] {
            mismatches.push(format!(
                "degree {d}: truncated dimension {} != stable coefficient {}",
                truncated_dims[d], sr_coeffs[d]
            ));
        }
    }
    for d in 0..=d_max {
        let betti = borel_betti.get(d).copied().unwrap_or(0);
        if truncated_dims[d] != betti {
            mismatches.push(format!(
                "degree {d}: truncated dimension {} != bundle Betti number {betti}",
                truncated_dims[d]
            ));
        }
    }
    // Monotone stabilization in m at each degree, with equality to the
    // stable coefficients once m reaches the degree.
    let mut previous: Option<Vec<usize>> = None;
    for j in 0..=m {
        let dims_j = if j == m {
            truncated_dims.clone()
        } else {
            truncated_quotient_dims(fan, j, d_max)
        };
        if let Some(prev) = &previous {
            for d in 0..=d_max {
                if dims_j[d] < prev[d] {
                    mismatches.push(format!(
                        "degree {d}: dimension dropped from {} to {} between m = {} and m = {j}",
                        prev[d],
                        dims_j[d],
                        j - 1
                    ));
                }
            }
        }
        for d in 0..=j.min(d_max) {
            if dims_j[d] != sr_coeffs[d] {
                mismatches.push(format!(
                    "degree {d} at m = {j}: dimension {} has not stabilized to {}",
                    dims_j[d], sr_coeffs[d]
                ));
            }
        }
        previous = Some(dims_j);
    }

    Ok(EquivariantReport {
        m,
        truncated_dims,
        sr_coeffs,
        borel_betti,
        consistent: mismatches.is_empty(),
        mismatches,
    })
}
