//! Exact determinant and inverse for the integer family.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;

use super::sparse::{Entry, SparseIntMatrix};
use crate::error::{Error, Result};
use crate::exact::bareiss_determinant;

/// Exact determinant of a sparse integer matrix.
///
/// Gaussian elimination restricted to `±1` pivots needs no division, so it is
/// fraction-free and stays in the integers. Pivots are picked by Markowitz
/// cost to limit fill. If the active block runs out of unit pivots the rest
/// is finished by dense Bareiss elimination over `BigInt`.
pub fn determinant(m: &SparseIntMatrix) -> Result<BigInt> {
    let d = m.dim();
    let mut rows: Vec<BTreeMap<usize, i128>> = vec![BTreeMap::new(); d];
    let mut cols: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); d];
    for e in m.entries() {
        rows[e.row - 1].insert(e.col - 1, e.value as i128);
        cols[e.col - 1].insert(e.row - 1);
    }
    let mut active_row = vec![true; d];
    let mut active_col = vec![true; d];
    let mut row_order = Vec::with_capacity(d);
    let mut col_order = Vec::with_capacity(d);
    let mut sign_product: i128 = 1;

    if rows.iter().any(BTreeMap::is_empty) {
        return Ok(BigInt::from(0));
    }
    for _ in 0..d {
        let Some((pr, pc)) = choose_unit_pivot(&rows, &cols, &active_row) else {
            break;
        };
        let pivot = rows[pr][&pc];
        sign_product *= pivot;
        active_row[pr] = false;
        active_col[pc] = false;
        row_order.push(pr);
        col_order.push(pc);

        let pivot_row: Vec<(usize, i128)> = rows[pr].iter().map(|(&c, &v)| (c, v)).collect();
        for &(c, _) in &pivot_row {
            cols[c].remove(&pr);
        }
        let targets: Vec<usize> = cols[pc].iter().copied().filter(|&r| active_row[r]).collect();
        for r in targets {
            // pivot is ±1, so dividing by it is multiplying by it.
            let factor = rows[r][&pc] * pivot;
            for &(c, v) in &pivot_row {
                let slot = rows[r].entry(c).or_insert(0);
                *slot = v
                    .checked_mul(factor)
                    .and_then(|t| slot.checked_sub(t))
                    .ok_or(Error::Overflow)?;
                if *slot == 0 {
                    rows[r].remove(&c);
                    cols[c].remove(&r);
                } else {
                    cols[c].insert(r);
                }
            }
            if rows[r].is_empty() {
                return Ok(BigInt::from(0));
            }
        }
    }

    let rest_rows: Vec<usize> = (0..d).filter(|&r| active_row[r]).collect();
    let rest_cols: Vec<usize> = (0..d).filter(|&c| active_col[c]).collect();
    let block_det = if rest_rows.is_empty() {
        BigInt::from(1)
    } else {
        let block: Vec<Vec<BigInt>> = rest_rows
            .iter()
            .map(|&r| {
                rest_cols
                    .iter()
                    .map(|c| BigInt::from(rows[r].get(c).copied().unwrap_or(0)))
                    .collect()
            })
            .collect();
        bareiss_determinant(block)
    };
    row_order.extend(rest_rows);
    col_order.extend(rest_cols);
    let sign = permutation_sign(&row_order) * permutation_sign(&col_order);
    Ok(block_det * BigInt::from(sign_product * sign as i128))
}

fn choose_unit_pivot(
    rows: &[BTreeMap<usize, i128>],
    cols: &[BTreeSet<usize>],
    active_row: &[bool],
) -> Option<(usize, usize)> {
    let mut best: Option<(usize, (usize, usize))> = None;
    for (r, row) in rows.iter().enumerate() {
        if !active_row[r] || row.is_empty() {
            continue;
        }
        let row_cost = row.len() - 1;
        for (&c, &v) in row {
            if v.abs() != 1 {
                continue;
            }
            let cost = row_cost * (cols[c].len() - 1);
            if best.is_none_or(|(b, _)| cost < b) {
                best = Some((cost, (r, c)));
                if cost == 0 {
                    return Some((r, c));
                }
            }
        }
    }
    best.map(|(_, p)| p)
}

/// Sign of a permutation of `0..len` given in one-line notation.
fn permutation_sign(p: &[usize]) -> i64 {
    let mut seen = vec![false; p.len()];
    let mut sign = 1;
    for start in 0..p.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut k = start;
        while !seen[k] {
            seen[k] = true;
            k = p[k];
            len += 1;
        }
        if len % 2 == 0 {
            sign = -sign;
        }
    }
    sign
}

/// Exact inverse of a unit upper Hessenberg integer matrix with determinant
/// `±1`.
///
/// Rows `2..=d` of `M x = e_j` give `x_{i-1}` from `x_i, …, x_d` without
/// division, so every column is `a + t b` with `b` the shared homogeneous
/// solution (`b_d = 1`) and `t` fixed by row 1. Costs `O(nnz)` per column.
pub fn unit_hessenberg_inverse(m: &SparseIntMatrix) -> Result<SparseIntMatrix> {
    let d = m.dim();
    for e in m.entries() {
        if e.row > e.col + 1 {
            return Err(Error::StructureViolation(format!(
                "entry ({}, {}) below the subdiagonal",
                e.row, e.col
            )));
        }
    }
    for i in 2..=d {
        if m.get(i, i - 1) != 1 {
            return Err(Error::StructureViolation(format!(
                "subdiagonal entry ({i}, {}) is not 1",
                i - 1
            )));
        }
    }

    // Row i (i >= 2) without its subdiagonal pivot.
    let upper = |i: usize| m.row(i).iter().filter(move |e| e.col >= i);
    let row_dot = |i: usize, x: &[i64]| -> Result<i64> {
        upper(i).try_fold(0i64, |acc, e| {
            e.value
                .checked_mul(x[e.col - 1])
                .and_then(|t| acc.checked_add(t))
                .ok_or(Error::Overflow)
        })
    };

    let mut b = vec![0i64; d];
    b[d - 1] = 1;
    for i in (2..=d).rev() {
        b[i - 2] = row_dot(i, &b)?.checked_neg().ok_or(Error::Overflow)?;
    }
    let first_row = |x: &[i64]| -> Result<i64> {
        m.row(1).iter().try_fold(0i64, |acc, e| {
            e.value
                .checked_mul(x[e.col - 1])
                .and_then(|t| acc.checked_add(t))
                .ok_or(Error::Overflow)
        })
    };
    let g = first_row(&b)?;
    if g.abs() != 1 {
        return Err(Error::Domain(format!(
            "determinant is {}, inverse is not integral",
            if d % 2 == 1 { g } else { -g }
        )));
    }

    let mut columns: Vec<Vec<(usize, i64)>> = Vec::with_capacity(d);
    let mut a = vec![0i64; d];
    for j in 1..=d {
        a.iter_mut().for_each(|v| *v = 0);
        for i in (2..=j).rev() {
            let delta = i64::from(i == j);
            a[i - 2] = delta.checked_sub(row_dot(i, &a)?).ok_or(Error::Overflow)?;
        }
        let t = (i64::from(j == 1) - first_row(&a)?) * g;
        let col: Vec<(usize, i64)> = (0..d)
            .filter_map(|k| {
                let v = a[k] + t * b[k];
                (v != 0).then_some((k + 1, v))
            })
            .collect();
        columns.push(col);
    }
    let entries = columns
        .into_iter()
        .enumerate()
        .flat_map(|(j, col)| {
            col.into_iter().map(move |(row, value)| Entry {
                row,
                col: j + 1,
                value,
            })
        });
    SparseIntMatrix::from_entries(d, entries)
}
