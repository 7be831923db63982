//! Exact dense linear algebra over the integers and their fraction field.
//!
//! The routines are generic over any signed integer type so the same code runs
//! on `i64`, `i128` or big integers.

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Signed, Zero};

/// Fraction-free (Bareiss) determinant of a square matrix.
pub fn determinant<T>(mut m: Vec<Vec<T>>) -> T
where
    T: Integer + Signed + Clone,
{
    let n = m.len();
    if n == 0 {
        return T::one();
    }
    let mut sign = T::one();
    let mut prev = T::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return T::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = m[i][j].clone() * m[k][k].clone() - m[i][k].clone() * m[k][j].clone();
                m[i][j] = num / prev.clone();
            }
        }
        prev = m[k][k].clone();
    }
    sign * m[n - 1][n - 1].clone()
}

/// Solves `a x = b` for square nonsingular `a`; `None` when `a` is singular.
pub fn solve<T>(a: &[Vec<T>], b: &[T]) -> Option<Vec<Ratio<T>>>
where
    T: Integer + Signed + Clone,
{
    let n = a.len();
    let mut m: Vec<Vec<Ratio<T>>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            row.iter()
                .cloned()
                .chain(std::iter::once(rhs.clone()))
                .map(Ratio::from_integer)
                .collect()
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, piv);
        let inv = Ratio::one() / m[col][col].clone();
        for j in col..=n {
            m[col][j] = m[col][j].clone() * inv.clone();
        }
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let factor = m[r][col].clone();
                for j in col..=n {
                    let v = m[col][j].clone() * factor.clone();
                    m[r][j] = m[r][j].clone() - v;
                }
            }
        }
    }
    Some(m.into_iter().map(|row| row[n].clone()).collect())
}

/// Integral solution of `a x = b` if the unique rational solution is integral.
pub fn solve_integral<T>(a: &[Vec<T>], b: &[T]) -> Option<Vec<T>>
where
    T: Integer + Signed + Clone,
{
    solve(a, b)?
        .into_iter()
        .map(|x| x.is_integer().then(|| x.to_integer()))
        .collect()
}
