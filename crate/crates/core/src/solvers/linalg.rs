//! Exact Gaussian elimination over the rationals.

use num_traits::{One, Zero};

use crate::numeric::Rational;

/// Solution structure of `A·x = b`.
#[derive(Clone, Debug, PartialEq)]
pub enum LinearSolution {
    /// Exactly one solution.
    Unique(Vec<Rational>),
    /// No solution.
    Inconsistent,
    /// A solution family: `x = particular + Σ t_k·direction_k` over the free variables.
    Family {
        /// Solution with every free variable set to zero.
        particular: Vec<Rational>,
        /// Free variable indices.
        free: Vec<usize>,
        /// For each free variable, the change of `x` per unit increase.
        directions: Vec<Vec<Rational>>,
    },
}

/// Solves `A·x = b` exactly by reduction to reduced row echelon form.
pub fn solve_linear(mut a: Vec<Vec<Rational>>, mut b: Vec<Rational>) -> LinearSolution {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        if row == rows {
            break;
        }
        let Some(p) = (row..rows).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(row, p);
        b.swap(row, p);
        let inv = Rational::one() / &a[row][col];
        for x in a[row].iter_mut().skip(col) {
            *x *= &inv;
        }
        b[row] *= &inv;
        for r in 0..rows {
            if r != row && !a[r][col].is_zero() {
                let factor = a[r][col].clone();
                for c in col..cols {
                    let delta = &factor * &a[row][c];
                    a[r][c] -= delta;
                }
                let delta = &factor * &b[row];
                b[r] -= delta;
            }
        }
        pivots.push(col);
        row += 1;
    }
    if b.iter().skip(row).any(|v| !v.is_zero()) {
        return LinearSolution::Inconsistent;
    }
    let mut particular = vec![Rational::zero(); cols];
    for (r, &c) in pivots.iter().enumerate() {
        particular[c] = b[r].clone();
    }
    if pivots.len() == cols {
        return LinearSolution::Unique(particular);
    }
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    let directions = free
        .iter()
        .map(|&f| {
            let mut d = vec![Rational::zero(); cols];
            d[f] = Rational::one();
            for (r, &c) in pivots.iter().enumerate() {
                d[c] = -a[r][f].clone();
            }
            d
        })
        .collect();
    LinearSolution::Family {
        particular,
        free,
        directions,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::{int, rat};

    #[test]
    fn unique_solution() {
        let a = vec![vec![int(2), int(1)], vec![int(1), int(3)]];
        let b = vec![int(3), int(5)];
        assert_eq!(
            solve_linear(a, b),
            LinearSolution::Unique(vec![rat(4, 5), rat(7, 5)])
        );
    }

    #[test]
    fn inconsistent_and_family() {
        let a = vec![vec![int(1), int(1)], vec![int(2), int(2)]];
        assert_eq!(
            solve_linear(a.clone(), vec![int(1), int(3)]),
            LinearSolution::Inconsistent
        );
        match solve_linear(a, vec![int(1), int(2)]) {
            LinearSolution::Family {
                particular,
                free,
                directions,
            } => {
                assert_eq!(particular, vec![int(1), int(0)]);
                assert_eq!(free, vec![1]);
                assert_eq!(directions[0], vec![int(-1), int(1)]);
            }
            other => panic!("unexpected {other:?}"),
        }
    }
}
