//! Exact linear algebra over the rationals.
//!
//! Rows are cleared to integers and reduced with fraction-free (Bareiss)
//! elimination, so every intermediate entry is a minor of the input and
//! the only divisions are exact. Pivots are chosen per column as the entry
//! with the smallest bit length.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::scalar::Rational;

/// Row echelon form of an integer matrix together with its pivot columns.
#[derive(Debug, Clone)]
pub struct Echelon {
    pub rows: Vec<Vec<BigInt>>,
    pub pivots: Vec<usize>,
    pub cols: usize,
}

impl Echelon {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

/// Scales a rational row by the lcm of its denominators.
fn integer_row(row: &[Rational]) -> Vec<BigInt> {
    let lcm = row.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    row.iter().map(|q| q.numer() * (&lcm / q.denom())).collect()
}

pub fn echelon(matrix: &[Vec<Rational>], cols: usize) -> Echelon {
    let mut a: Vec<Vec<BigInt>> = matrix
        .iter()
        .inspect(|r| assert_eq!(r.len(), cols, "ragged matrix"))
        .filter(|r| r.iter().any(|q| !q.is_zero()))
        .map(|r| integer_row(r))
        .collect();
    let m = a.len();
    let mut prev = BigInt::one();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == m {
            break;
        }
        let Some(p) = (r..m)
            .filter(|&i| !a[i][c].is_zero())
            .min_by_key(|&i| a[i][c].bits())
        else {
            continue;
        };
        a.swap(r, p);
        let (top, rest) = a.split_at_mut(r + 1);
        let pivot_row = &top[r];
        for row in rest.iter_mut() {
            let lead = std::mem::take(&mut row[c]);
            for j in c + 1..cols {
                let num = &pivot_row[c] * &row[j] - &lead * &pivot_row[j];
                let (q, rem) = num.div_rem(&prev);
                debug_assert!(rem.is_zero(), "inexact fraction-free division");
                row[j] = q;
            }
        }
        prev = pivot_row[c].clone();
        pivots.push(c);
        r += 1;
    }
    a.truncate(r);
    Echelon {
        rows: a,
        pivots,
        cols,
    }
}

pub fn rank(matrix: &[Vec<Rational>], cols: usize) -> usize {
    echelon(matrix, cols).rank()
}

/// Basis of `{x : A x = 0}`, one vector per free column.
pub fn nullspace(matrix: &[Vec<Rational>], cols: usize) -> Vec<Vec<Rational>> {
    let ech = echelon(matrix, cols);
    let free: Vec<usize> = (0..cols).filter(|c| !ech.pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut x = vec![Rational::zero(); cols];
            x[f] = Rational::one();
            back_substitute(&ech, &mut x);
            x
        })
        .collect()
}

/// Fills the pivot unknowns of `x` so that every echelon row is satisfied,
/// given the free unknowns already in place. `rhs` (if any) is the last column.
fn back_substitute(ech: &Echelon, x: &mut [Rational]) {
    let n = x.len();
    for (row, &p) in ech.rows.iter().zip(&ech.pivots).rev() {
        let mut acc = Rational::zero();
        for j in p + 1..n {
            if !row[j].is_zero() && !x[j].is_zero() {
                acc += Rational::from_integer(row[j].clone()) * &x[j];
            }
        }
        if ech.cols > n && !row[n].is_zero() {
            acc -= Rational::from_integer(row[n].clone());
        }
        x[p] = -acc / Rational::from_integer(row[p].clone());
    }
}

/// Outcome of solving `A x = b` exactly.
#[derive(Debug, Clone, PartialEq)]
pub enum LinearSolution {
    /// A particular solution (free unknowns set to zero) and the nullity of `A`.
    Solved {
        x: Vec<Rational>,
        nullity: usize,
    },
    Inconsistent,
}

pub fn solve(matrix: &[Vec<Rational>], rhs: &[Rational], cols: usize) -> LinearSolution {
    assert_eq!(matrix.len(), rhs.len());
    let augmented: Vec<Vec<Rational>> = matrix
        .iter()
        .zip(rhs)
        .map(|(r, b)| {
            let mut row = r.clone();
            row.push(b.clone());
            row
        })
        .collect();
    let ech = echelon(&augmented, cols + 1);
    if ech.pivots.last() == Some(&cols) {
        return LinearSolution::Inconsistent;
    }
    let mut x = vec![Rational::zero(); cols];
    back_substitute(&ech, &mut x);
    LinearSolution::Solved {
        x,
        nullity: cols - ech.rank(),
    }
}
