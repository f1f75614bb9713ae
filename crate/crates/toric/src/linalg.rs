//! Exact linear algebra over arbitrary-precision integers and rationals.
//!
//! Everything in this crate reduces to small dense systems, so the routines
//! here are straightforward Gaussian/Smith eliminations with no pivoting
//! heuristics beyond determinism. No floating point anywhere.

use num::{BigInt, BigRational, Integer, One, Signed, Zero};

pub type Int = BigInt;
pub type Rat = BigRational;

pub fn int(v: i64) -> Int {
    Int::from(v)
}

pub fn rat(v: i64) -> Rat {
    Rat::from_integer(Int::from(v))
}

pub fn rat_frac(p: i64, q: i64) -> Rat {
    Rat::new(Int::from(p), Int::from(q))
}

/// gcd of a slice, zero for the empty slice or all-zero input.
pub fn gcd_all(values: &[Int]) -> Int {
    values
        .iter()
        .fold(Int::zero(), |acc, v| acc.gcd(&v.abs()))
}

/// Lexicographic comparison of integer vectors.
pub fn lex_cmp_int(a: &[Int], b: &[Int]) -> std::cmp::Ordering {
    a.cmp(b)
}

/// Reduced row echelon form of a rational matrix, in place.
/// Returns the pivot column of each (nonzero) row in order; rows are left
/// normalized with leading 1s, zero rows dropped.
pub fn rref(rows: &mut Vec<Vec<Rat>>) -> Vec<usize> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(src) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, src);
        let inv = rows[r][c].clone();
        for x in rows[r].iter_mut() {
            if !x.is_zero() {
                *x = &*x / &inv;
            }
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                for j in c..ncols {
                    let delta = &f * &rows[r][j];
                    if !delta.is_zero() {
                        rows[i][j] = &rows[i][j] - delta;
                    }
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    pivots
}

pub fn rank(matrix: &[Vec<Rat>]) -> usize {
    let mut rows = matrix.to_vec();
    rref(&mut rows).len()
}

/// Solve A·x = b exactly where A has full column rank (columns independent).
/// Returns None when the system is inconsistent.
pub fn solve_full_column_rank(a: &[Vec<Rat>], b: &[Rat]) -> Option<Vec<Rat>> {
    let nrows = a.len();
    let ncols = a.first().map_or(0, Vec::len);
    debug_assert_eq!(nrows, b.len());
    let mut aug: Vec<Vec<Rat>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    // Inconsistent iff some pivot lands in the augmented column.
    if pivots.iter().any(|&c| c == ncols) {
        return None;
    }
    if pivots.len() != ncols {
        return None; // columns were not independent after all
    }
    let mut x = vec![Rat::zero(); ncols];
    for (row, &c) in aug.iter().zip(&pivots) {
        x[c] = row[ncols].clone();
    }
    Some(x)
}

/// Basis of the right kernel { x : A·x = 0 } of a rational matrix with
/// `ncols` columns (the matrix may have no rows).
pub fn kernel_basis(a: &[Vec<Rat>], ncols: usize) -> Vec<Vec<Rat>> {
    debug_assert!(a.iter().all(|row| row.len() == ncols));
    if a.is_empty() {
        return (0..ncols)
            .map(|j| {
                let mut v = vec![Rat::zero(); ncols];
                v[j] = Rat::one();
                v
            })
            .collect();
    }
    let mut rows = a.to_vec();
    let pivots = rref(&mut rows);
    let pivot_set: std::collections::HashSet<usize> = pivots.iter().copied().collect();
    let mut basis = Vec::new();
    for free in 0..ncols {
        if pivot_set.contains(&free) {
            continue;
        }
        let mut v = vec![Rat::zero(); ncols];
        v[free] = Rat::one();
        for (row, &p) in rows.iter().zip(&pivots) {
            v[p] = -row[free].clone();
        }
        basis.push(v);
    }
    basis
}

/// Inverse of a square rational matrix, None when singular.
pub fn inverse(matrix: &[Vec<Rat>]) -> Option<Vec<Vec<Rat>>> {
    let n = matrix.len();
    let mut aug: Vec<Vec<Rat>> = matrix
        .iter()
        .enumerate()
        .map(|(i, row)| {
            debug_assert_eq!(row.len(), n);
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Rat::one() } else { Rat::zero() }));
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.len() != n || pivots.iter().enumerate().any(|(i, &p)| p != i) {
        return None;
    }
    Some(aug.into_iter().map(|row| row[n..].to_vec()).collect())
}

/// Determinant of a square rational matrix by fraction Gaussian elimination.
pub fn det(matrix: &[Vec<Rat>]) -> Rat {
    let n = matrix.len();
    if n == 0 {
        return Rat::one();
    }
    let mut m = matrix.to_vec();
    let mut acc = Rat::one();
    for c in 0..n {
        let Some(src) = (c..n).find(|&i| !m[i][c].is_zero()) else {
            return Rat::zero();
        };
        if src != c {
            m.swap(c, src);
            acc = -acc;
        }
        acc *= m[c][c].clone();
        let inv = m[c][c].clone();
        for i in c + 1..n {
            if m[i][c].is_zero() {
                continue;
            }
            let f = &m[i][c] / &inv;
            for j in c..n {
                let delta = &f * &m[c][j];
                m[i][j] = &m[i][j] - delta;
            }
        }
    }
    acc
}

pub fn det_int(matrix: &[Vec<Int>]) -> Int {
    let rows: Vec<Vec<Rat>> = matrix
        .iter()
        .map(|r| r.iter().map(|v| Rat::from_integer(v.clone())).collect())
        .collect();
    let d = det(&rows);
    debug_assert!(d.is_integer());
    d.to_integer()
}

/// Row echelon form over the integers (not reduced): rows are combined by
/// cross-multiplication and gcd-normalized, so entries stay modest. Returns
/// pivot columns. Used where only the rank / pivot set matters.
pub fn row_echelon_int(rows: &mut Vec<Vec<Int>>) -> Vec<usize> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(src) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, src);
        normalize_int_row(&mut rows[r]);
        let pivot_val = rows[r][c].clone();
        for i in r + 1..rows.len() {
            if rows[i][c].is_zero() {
                continue;
            }
            let f = rows[i][c].clone();
            for j in c..ncols {
                let v = &pivot_val * &rows[i][j] - &f * &rows[r][j];
                rows[i][j] = v;
            }
            normalize_int_row(&mut rows[i]);
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    pivots
}

fn normalize_int_row(row: &mut [Int]) {
    let g = gcd_all(row);
    if g.is_zero() || g.is_one() {
        return;
    }
    for x in row.iter_mut() {
        *x = &*x / &g;
    }
}

/// Diagonal of the Smith normal form of an integer matrix (nonnegative
/// entries, each dividing the next, trailing zeros for rank deficiency).
pub fn smith_normal_form(mut m: Vec<Vec<Int>>) -> Vec<Int> {
    let nrows = m.len();
    let ncols = m.first().map_or(0, Vec::len);
    let n = nrows.min(ncols);
    let mut diag = Vec::with_capacity(n);
    let mut top = 0;
    while top < n {
        // Find the entry of smallest absolute value in the remaining block.
        let mut best: Option<(usize, usize)> = None;
        for i in top..nrows {
            for j in top..ncols {
                if m[i][j].is_zero() {
                    continue;
                }
                match best {
                    Some((bi, bj)) if m[bi][bj].abs() <= m[i][j].abs() => {}
                    _ => best = Some((i, j)),
                }
            }
        }
        let Some((bi, bj)) = best else {
            break; // remaining block is zero
        };
        m.swap(top, bi);
        for row in m.iter_mut() {
            row.swap(top, bj);
        }
        // Reduce the pivot row and column; repeat until both are clear.
        loop {
            let mut dirty = false;
            for i in top + 1..nrows {
                if m[i][top].is_zero() {
                    continue;
                }
                let q = div_round(&m[i][top], &m[top][top]);
                for j in top..ncols {
                    let v = &m[i][j] - &q * &m[top][j];
                    m[i][j] = v;
                }
                if !m[i][top].is_zero() {
                    // Remainder smaller than the pivot: swap up and restart.
                    m.swap(top, i);
                    dirty = true;
                }
            }
            for j in top + 1..ncols {
                if m[top][j].is_zero() {
                    continue;
                }
                let q = div_round(&m[top][j], &m[top][top]);
                for row in m.iter_mut().take(nrows).skip(top) {
                    let v = &row[j] - &q * &row[top];
                    row[j] = v;
                }
                if !m[top][j].is_zero() {
                    for row in m.iter_mut() {
                        row.swap(top, j);
                    }
                    dirty = true;
                }
            }
            if !dirty {
                break;
            }
        }
        diag.push(m[top][top].abs());
        top += 1;
    }
    while diag.len() < n {
        diag.push(Int::zero());
    }
    // Fix the divisibility chain d1 | d2 | ... by gcd/lcm folding.
    for i in 0..diag.len() {
        for j in i + 1..diag.len() {
            if diag[i].is_zero() && diag[j].is_zero() {
                continue;
            }
            let g = diag[i].gcd(&diag[j]);
            if g == diag[i] {
                continue;
            }
            let l = if g.is_zero() {
                Int::zero()
            } else {
                (&diag[i] * &diag[j]) / &g
            };
            diag[i] = g;
            diag[j] = l;
        }
    }
    diag
}

fn div_round(a: &Int, b: &Int) -> Int {
    // Round-to-nearest division keeps remainders at most |b|/2.
    let (q, r) = a.div_rem(b);
    let two_r: Int = &r * 2;
    if two_r.abs() > b.abs() {
        if (r.sign() == b.sign()) || r.is_zero() {
            q + 1
        } else {
            q - 1
        }
    } else {
        q
    }
}

/// n! as a big integer.
pub fn factorial(n: usize) -> Int {
    (1..=n).fold(Int::one(), |acc, k| acc * Int::from(k))
}

/// Binomial coefficient C(n, k).
pub fn binomial(n: usize, k: usize) -> Int {
    if k > n {
        return Int::zero();
    }
    let k = k.min(n - k);
    let mut num = Int::one();
    let mut den = Int::one();
    for i in 0..k {
        num *= Int::from(n - i);
        den *= Int::from(i + 1);
    }
    num / den
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rmat(m: &[&[i64]]) -> Vec<Vec<Rat>> {
        m.iter().map(|r| r.iter().map(|&v| rat(v)).collect()).collect()
    }

    fn imat(m: &[&[i64]]) -> Vec<Vec<Int>> {
        m.iter().map(|r| r.iter().map(|&v| int(v)).collect()).collect()
    }

    #[test]
    fn rref_identifies_pivots_and_rank() {
        let mut m = rmat(&[&[1, 2, 3], &[2, 4, 6], &[0, 1, 1]]);
        let pivots = rref(&mut m);
        assert_eq!(pivots, vec![0, 1]);
        assert_eq!(m.len(), 2);
        assert_eq!(m[0], vec![rat(1), rat(0), rat(1)]);
        assert_eq!(m[1], vec![rat(0), rat(1), rat(1)]);
    }

    #[test]
    fn solve_recovers_exact_solution() {
        let a = rmat(&[&[2, 1], &[1, 3]]);
        let b = vec![rat(5), rat(10)];
        let x = solve_full_column_rank(&a, &b).unwrap();
        assert_eq!(x, vec![rat(1), rat(3)]);
    }

    #[test]
    fn solve_detects_inconsistency() {
        let a = rmat(&[&[1, 0], &[1, 0], &[0, 1]]);
        let b = vec![rat(1), rat(2), rat(0)];
        assert!(solve_full_column_rank(&a, &b).is_none());
    }

    #[test]
    fn kernel_of_rank_deficient_matrix() {
        let a = rmat(&[&[1, 1, 0], &[0, 0, 1]]);
        let k = kernel_basis(&a, 3);
        assert_eq!(k.len(), 1);
        assert_eq!(k[0], vec![rat(-1), rat(1), rat(0)]);
    }

    #[test]
    fn det_matches_cofactor_expansion() {
        let m = rmat(&[&[1, 2], &[3, 4]]);
        assert_eq!(det(&m), rat(-2));
        assert_eq!(det_int(&imat(&[&[2, 0], &[7, 3]])), int(6));
        assert_eq!(det(&[]), rat(1));
    }

    #[test]
    fn smith_form_diagonal_divisibility() {
        // Classic example: diag(1, 2) after reduction.
        let d = smith_normal_form(imat(&[&[2, 4, 4], &[-6, 6, 12], &[10, 4, 16]]));
        assert_eq!(d, vec![int(2), int(2), int(156)]);
        let d2 = smith_normal_form(imat(&[&[1, 0], &[1, 2]]));
        assert_eq!(d2, vec![int(1), int(2)]);
        let d3 = smith_normal_form(imat(&[&[1, 3]]));
        assert_eq!(d3, vec![int(1)]);
    }

    #[test]
    fn echelon_int_rank() {
        let mut m = imat(&[&[2, 4], &[1, 2], &[0, 3]]);
        let pivots = row_echelon_int(&mut m);
        assert_eq!(pivots, vec![0, 1]);
    }

    #[test]
    fn factorial_binomial() {
        assert_eq!(factorial(0), int(1));
        assert_eq!(factorial(5), int(120));
        assert_eq!(binomial(6, 2), int(15));
        assert_eq!(binomial(3, 5), int(0));
    }
}
