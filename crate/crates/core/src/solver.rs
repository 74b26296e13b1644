//! Exact solution of the overdetermined system for the orbit-class
//! coefficients by fraction-free elimination.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::SolveError;
use crate::exact::Rational;
use crate::families::FamilyRelation;

/// Coefficients of v1^4, v1^2 v2, v1 v3, v2^2, v4 in the orbit class.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct OrbitClassVector(pub [Rational; 5]);

impl OrbitClassVector {
    pub fn entries(&self) -> &[Rational; 5] {
        &self.0
    }

    pub fn is_integral(&self) -> bool {
        self.0.iter().all(|c| c.is_integer())
    }
}

impl fmt::Display for OrbitClassVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|r| r.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SystemSolution {
    pub x: Vec<Rational>,
    pub rank: usize,
    /// `row · x - rhs` for every input row, in input order.
    pub residuals: Vec<Rational>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Solution {
    pub solution: OrbitClassVector,
    pub rank: usize,
    pub residuals: Vec<Rational>,
}

/// Multiplies a rational row by the lcm of its denominators.
fn integer_row(row: &[Rational]) -> Vec<BigInt> {
    let lcm = row.iter().fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
    row.iter().map(|r| r.numer() * (&lcm / r.denom())).collect()
}

struct Echelon {
    rows: Vec<Vec<BigInt>>,
    /// input index of each echelon row
    origin: Vec<usize>,
    pivots: Vec<usize>,
}

/// Bareiss elimination on the augmented integer matrix; pivots are the
/// first nonzero entry at or below the current row, scanning columns in order.
fn bareiss(mut rows: Vec<Vec<BigInt>>, cols: usize) -> Echelon {
    let m = rows.len();
    let mut origin: Vec<usize> = (0..m).collect();
    let mut pivots = Vec::new();
    let mut prev = BigInt::one();
    let mut r = 0;
    for col in 0..cols {
        if r == m {
            break;
        }
        let Some(p) = (r..m).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        origin.swap(r, p);
        for i in r + 1..m {
            for j in col + 1..rows[i].len() {
                let num = &rows[r][col] * &rows[i][j] - &rows[i][col] * &rows[r][j];
                debug_assert!((&num % &prev).is_zero(), "Bareiss division must be exact");
                rows[i][j] = num / &prev;
            }
            rows[i][col] = BigInt::zero();
        }
        prev = rows[r][col].clone();
        pivots.push(col);
        r += 1;
    }
    Echelon { rows, origin, pivots }
}

/// Rank of a rational matrix.
pub fn rank(matrix: &[Vec<Rational>]) -> usize {
    let cols = matrix.first().map_or(0, Vec::len);
    bareiss(matrix.iter().map(|r| integer_row(r)).collect(), cols).pivots.len()
}

/// Solves `matrix · x = rhs` exactly; requires full column rank and zero residuals.
pub fn solve_system(matrix: &[Vec<Rational>], rhs: &[Rational]) -> Result<SystemSolution, SolveError> {
    let cols = match matrix.first() {
        Some(r) => r.len(),
        None => return Err(SolveError::Empty),
    };
    for (i, row) in matrix.iter().enumerate() {
        if row.len() != cols {
            return Err(SolveError::Shape { row: i, expected: cols, got: row.len() });
        }
    }
    if rhs.len() != matrix.len() {
        return Err(SolveError::Shape { row: matrix.len(), expected: matrix.len(), got: rhs.len() });
    }

    let augmented: Vec<Vec<BigInt>> = matrix
        .iter()
        .zip(rhs)
        .map(|(row, b)| {
            let mut full = row.clone();
            full.push(b.clone());
            integer_row(&full)
        })
        .collect();
    let ech = bareiss(augmented, cols);
    let rank = ech.pivots.len();

    let mut bad: Vec<usize> =
        (rank..ech.rows.len()).filter(|&i| !ech.rows[i][cols].is_zero()).map(|i| ech.origin[i]).collect();
    if !bad.is_empty() {
        bad.sort_unstable();
        return Err(SolveError::Inconsistent { rows: bad });
    }
    if rank < cols {
        return Err(SolveError::Underdetermined { rank, nullity: cols - rank });
    }

    let mut x = vec![Rational::zero(); cols];
    for (r, &col) in ech.pivots.iter().enumerate().rev() {
        let row = &ech.rows[r];
        let mut acc = Rational::from_integer(row[cols].clone());
        for j in col + 1..cols {
            acc -= Rational::from_integer(row[j].clone()) * &x[j];
        }
        x[col] = acc / Rational::from_integer(row[col].clone());
    }

    let residuals: Vec<Rational> = matrix
        .iter()
        .zip(rhs)
        .map(|(row, b)| row.iter().zip(&x).map(|(a, xi)| a * xi).sum::<Rational>() - b)
        .collect();
    // elimination is exact, so a consistent full-rank system leaves no residual
    let bad: Vec<usize> = residuals.iter().enumerate().filter(|(_, r)| !r.is_zero()).map(|(i, _)| i).collect();
    if !bad.is_empty() {
        return Err(SolveError::Inconsistent { rows: bad });
    }
    Ok(SystemSolution { x, rank, residuals })
}

/// Solves for the five orbit-class coefficients from family relations.
pub fn solve_exact(relations: &[FamilyRelation]) -> Result<Solution, SolveError> {
    if relations.is_empty() {
        return Err(SolveError::Empty);
    }
    let matrix: Vec<Vec<Rational>> = relations.iter().map(|r| r.vector.entries().to_vec()).collect();
    let rhs: Vec<Rational> = relations.iter().map(|r| r.rhs.clone()).collect();
    let sol = solve_system(&matrix, &rhs)?;
    let coeffs: [Rational; 5] = sol.x.try_into().expect("five unknowns");
    Ok(Solution { solution: OrbitClassVector(coeffs), rank: sol.rank, residuals: sol.residuals })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, ratio};

    fn m(rows: &[&[i64]]) -> Vec<Vec<Rational>> {
        rows.iter().map(|r| r.iter().map(|&v| rat(v)).collect()).collect()
    }

    #[test]
    fn square_system() {
        let a = m(&[&[2, 1], &[1, 3]]);
        let b = vec![rat(5), rat(10)];
        let s = solve_system(&a, &b).unwrap();
        assert_eq!(s.x, vec![rat(1), rat(3)]);
        assert_eq!(s.rank, 2);
    }

    #[test]
    fn rational_entries() {
        let a = vec![vec![ratio(1, 2), ratio(1, 3)], vec![ratio(1, 4), rat(1)]];
        let b = vec![rat(1), rat(2)];
        let s = solve_system(&a, &b).unwrap();
        assert!(s.residuals.iter().all(Zero::is_zero));
    }

    #[test]
    fn inconsistent_rows_reported() {
        let a = m(&[&[1, 0], &[0, 1], &[1, 1]]);
        let b = vec![rat(1), rat(1), rat(3)];
        assert_eq!(solve_system(&a, &b), Err(SolveError::Inconsistent { rows: vec![2] }));
    }

    #[test]
    fn underdetermined_reports_nullity() {
        let a = m(&[&[1, 1, 0], &[2, 2, 0]]);
        let b = vec![rat(1), rat(2)];
        assert_eq!(solve_system(&a, &b), Err(SolveError::Underdetermined { rank: 1, nullity: 2 }));
    }

    #[test]
    fn empty_and_ragged_inputs() {
        assert_eq!(solve_system(&[], &[]), Err(SolveError::Empty));
        let a = vec![vec![rat(1)], vec![rat(1), rat(2)]];
        assert!(matches!(solve_system(&a, &[rat(0), rat(0)]), Err(SolveError::Shape { .. })));
        assert_eq!(solve_exact(&[]), Err(SolveError::Empty));
    }

    #[test]
    fn rank_of_dependent_rows() {
        assert_eq!(rank(&m(&[&[1, 2, 3], &[2, 4, 6], &[0, 1, 1]])), 2);
    }
}
