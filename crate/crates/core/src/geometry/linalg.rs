//! Exact linear algebra over the rationals, with right-hand sides in the
//! log-rational tower (systems stay solvable there because elimination only
//! ever multiplies tower values by rationals).

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::numerics::logrational::LogRational;
use crate::numerics::rational::Rational;

pub type Matrix = Vec<Vec<Rational>>;

pub fn rank(a: &Matrix) -> usize {
    let mut m = a.clone();
    let rows = m.len();
    if rows == 0 {
        return 0;
    }
    let cols = m[0].len();
    let mut r = 0;
    for c in 0..cols {
        let piv = (r..rows).find(|&i| !m[i][c].is_zero());
        let Some(piv) = piv else { continue };
        m.swap(r, piv);
        let inv = m[r][c].recip();
        for k in c..cols {
            m[r][k] = &m[r][k] * &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for k in c..cols {
                    let sub = &f * &m[r][k];
                    m[i][k] = &m[i][k] - sub;
                }
            }
        }
        r += 1;
        if r == rows {
            break;
        }
    }
    r
}

pub fn det(a: &Matrix) -> Rational {
    let n = a.len();
    let mut m = a.clone();
    let mut sign = Rational::one();
    let mut acc = Rational::one();
    for c in 0..n {
        let piv = (c..n).find(|&i| !m[i][c].is_zero());
        let Some(piv) = piv else {
            return Rational::zero();
        };
        if piv != c {
            m.swap(piv, c);
            sign = -sign;
        }
        acc *= m[c][c].clone();
        let inv = m[c][c].recip();
        for i in c + 1..n {
            if !m[i][c].is_zero() {
                let f = &m[i][c] * &inv;
                for k in c..n {
                    let sub = &f * &m[c][k];
                    m[i][k] = &m[i][k] - sub;
                }
            }
        }
    }
    acc * sign
}

/// Solves the square system `A x = b` with log-rational right-hand side.
/// Returns `None` when `A` is singular.
pub fn solve_square(a: &Matrix, b: &[LogRational]) -> Option<Vec<LogRational>> {
    let n = a.len();
    debug_assert!(a.iter().all(|row| row.len() == n));
    let mut m = a.clone();
    let mut rhs = b.to_vec();
    for c in 0..n {
        let piv = (c..n).find(|&i| !m[i][c].is_zero())?;
        m.swap(c, piv);
        rhs.swap(c, piv);
        let inv = m[c][c].recip();
        for k in c..n {
            m[c][k] = &m[c][k] * &inv;
        }
        rhs[c] = rhs[c].scale(&inv);
        for i in 0..n {
            if i != c && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for k in c..n {
                    let sub = &f * &m[c][k];
                    m[i][k] = &m[i][k] - sub;
                }
                let sub = rhs[c].scale(&f);
                rhs[i] = rhs[i].clone() - sub;
            }
        }
    }
    Some(rhs)
}

pub fn solve_square_rational(a: &Matrix, b: &[Rational]) -> Option<Vec<Rational>> {
    let blr: Vec<LogRational> = b.iter().map(|x| LogRational::from_rational(x.clone())).collect();
    let sol = solve_square(a, &blr)?;
    Some(
        sol.into_iter()
            .map(|x| x.as_rational().expect("rational system").clone())
            .collect(),
    )
}

/// Basis of the right nullspace `{x : A x = 0}`.
pub fn nullspace(a: &Matrix) -> Vec<Vec<Rational>> {
    let rows = a.len();
    if rows == 0 {
        return Vec::new();
    }
    let cols = a[0].len();
    let mut m = a.clone();
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let piv = (r..rows).find(|&i| !m[i][c].is_zero());
        let Some(piv) = piv else { continue };
        m.swap(r, piv);
        let inv = m[r][c].recip();
        for k in 0..cols {
            m[r][k] = &m[r][k] * &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for k in 0..cols {
                    let sub = &f * &m[r][k];
                    m[i][k] = &m[i][k] - sub;
                }
            }
        }
        pivots.push((r, c));
        r += 1;
        if r == rows {
            break;
        }
    }
    let pivot_cols: Vec<usize> = pivots.iter().map(|&(_, c)| c).collect();
    let mut basis = Vec::new();
    for free in 0..cols {
        if pivot_cols.contains(&free) {
            continue;
        }
        let mut v = vec![Rational::zero(); cols];
        v[free] = Rational::one();
        for &(pr, pc) in &pivots {
            v[pc] = -m[pr][free].clone();
        }
        basis.push(v);
    }
    basis
}

/// Column-style Hermite reduction: returns a basis of the integer kernel
/// `{x in Z^n : A x = 0}` for an integer matrix `A` (rows are equations).
pub fn integer_kernel(a: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    if a.is_empty() {
        return Vec::new();
    }
    let rows = a.len();
    let cols = a[0].len();
    // work: (rows x cols) matrix, u: (cols x cols) unimodular column transform
    let mut work: Vec<Vec<BigInt>> = a.to_vec();
    let mut u: Vec<Vec<BigInt>> = (0..cols)
        .map(|i| {
            (0..cols)
                .map(|j| if i == j { BigInt::one() } else { BigInt::zero() })
                .collect()
        })
        .collect();
    // u is stored column-major: u[j] is the j-th column of the transform.
    let mut pivot_row = 0usize;
    let mut pivot_col = 0usize;
    while pivot_row < rows && pivot_col < cols {
        // bring gcd of row `pivot_row` (cols >= pivot_col) into pivot_col
        loop {
            let mut idx: Option<usize> = None;
            for j in pivot_col..cols {
                if !work[pivot_row][j].is_zero() {
                    idx = match idx {
                        None => Some(j),
                        Some(k)
                            if work[pivot_row][j].abs() < work[pivot_row][k].abs() =>
                        {
                            Some(j)
                        }
                        other => other,
                    };
                }
            }
            let Some(min_j) = idx else { break };
            if min_j != pivot_col {
                for r in 0..rows {
                    work[r].swap(pivot_col, min_j);
                }
                u.swap(pivot_col, min_j);
            }
            let mut reduced_any = false;
            for j in pivot_col + 1..cols {
                if !work[pivot_row][j].is_zero() {
                    let q = floor_div(&work[pivot_row][j], &work[pivot_row][pivot_col]);
                    if !q.is_zero() {
                        for r in 0..rows {
                            let sub = &q * &work[r][pivot_col];
                            work[r][j] -= sub;
                        }
                        for r in 0..cols {
                            let sub = &q * &u[pivot_col][r];
                            u[j][r] -= sub;
                        }
                    }
                    if !work[pivot_row][j].is_zero() {
                        reduced_any = true;
                    }
                }
            }
            if !reduced_any {
                break;
            }
        }
        if !work[pivot_row][pivot_col].is_zero() {
            pivot_col += 1;
        }
        pivot_row += 1;
    }
    // kernel = columns that vanish on every row
    let mut kernel = Vec::new();
    for j in 0..cols {
        if (0..rows).all(|r| work[r][j].is_zero()) {
            kernel.push(u[j].clone());
        }
    }
    kernel
}

fn floor_div(a: &BigInt, b: &BigInt) -> BigInt {
    num_integer::Integer::div_floor(a, b)
}

/// Basis of the saturated lattice `Z^n ∩ span_Q(directions)`, as integer
/// vectors. Empty input gives the empty basis.
pub fn saturated_lattice_basis(directions: &[Vec<Rational>]) -> Vec<Vec<BigInt>> {
    if directions.is_empty() {
        return Vec::new();
    }
    let n = directions[0].len();
    // normal space of the span
    let normals = nullspace(&directions.to_vec());
    if normals.is_empty() {
        // full span: standard basis
        return (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { BigInt::one() } else { BigInt::zero() })
                    .collect()
            })
            .collect();
    }
    let int_normals: Vec<Vec<BigInt>> = normals
        .iter()
        .map(|v| crate::numerics::rational::primitive_direction(v).expect("nonzero normal"))
        .collect();
    integer_kernel(&int_normals)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::rational::{rat, rat_int};

    fn m(rows: &[&[i64]]) -> Matrix {
        rows.iter()
            .map(|r| r.iter().map(|&x| rat_int(x)).collect())
            .collect()
    }

    #[test]
    fn rank_and_det() {
        assert_eq!(rank(&m(&[&[1, 2], &[2, 4]])), 1);
        assert_eq!(rank(&m(&[&[1, 0], &[0, 1]])), 2);
        assert_eq!(det(&m(&[&[2, 1], &[1, 1]])), rat_int(1));
        assert_eq!(det(&m(&[&[1, 2], &[2, 4]])), rat_int(0));
    }

    #[test]
    fn solve_with_log_rhs() {
        use crate::numerics::logrational::LogRational;
        // x + y = log2, x - y = 1  =>  x = (1 + log2)/2
        let a = m(&[&[1, 1], &[1, -1]]);
        let b = vec![
            LogRational::log_term(2, rat(1, 1)),
            LogRational::from_rational(rat(1, 1)),
        ];
        let sol = solve_square(&a, &b).unwrap();
        let x = &sol[0];
        assert_eq!(x.rational_part(), &rat(1, 2));
        assert_eq!(x.log_coefficients()[&2], rat(1, 2));
    }

    #[test]
    fn nullspace_of_plane_normal() {
        let ns = nullspace(&m(&[&[1, 1, 1]]));
        assert_eq!(ns.len(), 2);
        for v in &ns {
            assert!(dotr(v, &[rat_int(1), rat_int(1), rat_int(1)]).is_zero());
        }
    }

    fn dotr(a: &[Rational], b: &[Rational]) -> Rational {
        crate::numerics::rational::dot(a, b)
    }

    #[test]
    fn integer_kernel_saturation() {
        // direction (1,1)/2: saturation must contain (1,1) itself
        let dirs = vec![vec![rat(1, 2), rat(1, 2)]];
        let basis = saturated_lattice_basis(&dirs);
        assert_eq!(basis.len(), 1);
        let v = &basis[0];
        assert_eq!(v[0].abs(), BigInt::one());
        assert_eq!(v[0], v[1]);
    }

    #[test]
    fn integer_kernel_2d_in_3d() {
        // x + 2y + 3z = 0 over Z has a rank-2 kernel with determinant-like
        // invariant: the kernel must contain (2,-1,0) and (3,0,-1) combos
        let a = vec![vec![BigInt::from(1), BigInt::from(2), BigInt::from(3)]];
        let k = integer_kernel(&a);
        assert_eq!(k.len(), 2);
        for v in &k {
            let s: BigInt = &v[0] + BigInt::from(2) * &v[1] + BigInt::from(3) * &v[2];
            assert!(s.is_zero());
        }
    }
}
