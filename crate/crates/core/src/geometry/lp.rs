//! Exact two-phase simplex for linear programs with rational constraint
//! matrix and objective, and right-hand sides in the log-rational tower.
//!
//! Pivoting only ever multiplies tower values by rationals, so the tableau
//! body and reduced costs stay rational while the right-hand column stays
//! log-rational; every comparison the method needs is certified. Bland's
//! rule guarantees termination.
//!
//! Problem form: maximize c.x subject to A x >= b, x free.

use std::cmp::Ordering;

use num_traits::{Signed, Zero};

use crate::numerics::logrational::LogRational;
use crate::numerics::rational::Rational;

#[derive(Debug, Clone)]
pub enum LpOutcome {
    Infeasible,
    Unbounded,
    Optimal {
        point: Vec<LogRational>,
        value: LogRational,
    },
}

pub struct LinearProgram {
    /// rows of A (each with `dim` entries); constraint `<row, x> >= offset`
    pub rows: Vec<Vec<Rational>>,
    pub offsets: Vec<LogRational>,
    pub objective: Vec<Rational>,
    pub dim: usize,
}

struct Tableau {
    body: Vec<Vec<Rational>>, // m x n
    rhs: Vec<LogRational>,    // m
    obj: Vec<Rational>,       // n, stores z_j - c_j
    basis: Vec<usize>,        // m
    n: usize,
}

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize) {
        let inv = self.body[r][c].recip();
        for k in 0..self.n {
            self.body[r][k] = &self.body[r][k] * &inv;
        }
        self.rhs[r] = self.rhs[r].scale(&inv);
        for i in 0..self.body.len() {
            if i != r && !self.body[i][c].is_zero() {
                let f = self.body[i][c].clone();
                for k in 0..self.n {
                    let sub = &f * &self.body[r][k];
                    self.body[i][k] = &self.body[i][k] - sub;
                }
                let sub = self.rhs[r].scale(&f);
                self.rhs[i] = self.rhs[i].clone() - sub;
            }
        }
        if !self.obj[c].is_zero() {
            let f = self.obj[c].clone();
            for k in 0..self.n {
                let sub = &f * &self.body[r][k];
                self.obj[k] = &self.obj[k] - sub;
            }
        }
        self.basis[r] = c;
    }

    /// One simplex phase with Bland's rule; maximizes, i.e. enters columns
    /// with negative `z_j - c_j`. Returns false on unboundedness.
    fn run(&mut self) -> bool {
        loop {
            let entering = (0..self.n).find(|&j| self.obj[j].is_negative());
            let Some(c) = entering else { return true };
            let mut leave: Option<usize> = None;
            for r in 0..self.body.len() {
                if self.body[r][c].is_positive() {
                    leave = match leave {
                        None => Some(r),
                        Some(best) => {
                            // compare rhs[r]/body[r][c] with rhs[best]/body[best][c]
                            let lhs = self.rhs[r].scale(&self.body[best][c]);
                            let rhs = self.rhs[best].scale(&self.body[r][c]);
                            match lhs.certified_cmp(&rhs) {
                                Ordering::Less => Some(r),
                                Ordering::Greater => Some(best),
                                Ordering::Equal => {
                                    // Bland tie-break on basis variable index
                                    if self.basis[r] < self.basis[best] {
                                        Some(r)
                                    } else {
                                        Some(best)
                                    }
                                }
                            }
                        }
                    };
                }
            }
            match leave {
                None => return false,
                Some(r) => self.pivot(r, c),
            }
        }
    }
}

pub fn solve(lp: &LinearProgram) -> LpOutcome {
    let m = lp.rows.len();
    let d = lp.dim;
    // variables: x+ (d), x- (d), slack (m), artificial (m)
    let n = 2 * d + 2 * m;
    let mut body = vec![vec![Rational::zero(); n]; m];
    let mut rhs: Vec<LogRational> = Vec::with_capacity(m);
    for i in 0..m {
        let flip = lp.offsets[i].sign() < 0;
        let s = if flip { -1 } else { 1 };
        let sr = Rational::from_integer(s.into());
        for j in 0..d {
            body[i][j] = &lp.rows[i][j] * &sr;
            body[i][d + j] = -&body[i][j];
        }
        // slack: A x - s = b
        body[i][2 * d + i] = -&sr;
        body[i][2 * d + m + i] = Rational::from_integer(1.into());
        rhs.push(if flip {
            -lp.offsets[i].clone()
        } else {
            lp.offsets[i].clone()
        });
    }
    // Phase 1: maximize -(sum of artificials)
    let mut obj = vec![Rational::zero(); n];
    for i in 0..m {
        // z_j - c_j with c = -1 on artificials: start from c row then
        // eliminate basic columns
        obj[2 * d + m + i] = Rational::from_integer(1.into());
    }
    // eliminate basic artificial columns from obj: obj -= sum of rows
    for i in 0..m {
        for k in 0..n {
            let sub = body[i][k].clone();
            obj[k] = &obj[k] - sub;
        }
    }
    let mut t = Tableau {
        body,
        rhs,
        obj,
        basis: (2 * d + m..2 * d + 2 * m).collect(),
        n,
    };
    let ok = t.run();
    debug_assert!(ok, "phase 1 cannot be unbounded");
    // phase-1 optimum: all artificials zero?
    let mut infeasible = false;
    for r in 0..m {
        if t.basis[r] >= 2 * d + m && t.rhs[r].sign() != 0 {
            infeasible = true;
        }
    }
    if infeasible {
        return LpOutcome::Infeasible;
    }
    // Drive basic artificials (at zero level) out of the basis if possible.
    for r in 0..m {
        if t.basis[r] >= 2 * d + m {
            if let Some(c) = (0..2 * d + m).find(|&j| !t.body[r][j].is_zero()) {
                t.pivot(r, c);
            }
        }
    }
    // Phase 2: forbid artificials, install the real objective.
    for r in 0..t.body.len() {
        for j in 2 * d + m..n {
            t.body[r][j] = Rational::zero();
        }
    }
    let mut obj = vec![Rational::zero(); n];
    for j in 0..d {
        obj[j] = -lp.objective[j].clone();
        obj[d + j] = lp.objective[j].clone();
    }
    // eliminate the basic columns
    for r in 0..t.body.len() {
        let bj = t.basis[r];
        if bj < 2 * d + m && !obj[bj].is_zero() {
            let f = obj[bj].clone();
            for k in 0..n {
                let sub = &f * &t.body[r][k];
                obj[k] = &obj[k] - sub;
            }
        }
    }
    t.obj = obj;
    if !t.run() {
        return LpOutcome::Unbounded;
    }
    let mut x = vec![LogRational::zero(); d];
    for r in 0..t.body.len() {
        let b = t.basis[r];
        if b < d {
            x[b] = x[b].clone() + t.rhs[r].clone();
        } else if b < 2 * d {
            x[b - d] = x[b - d].clone() - t.rhs[r].clone();
        }
    }
    let mut value = LogRational::zero();
    for j in 0..d {
        value = value + x[j].scale(&lp.objective[j]);
    }
    LpOutcome::Optimal { point: x, value }
}

/// Convenience: maximize `objective` over `{x : rows.x >= offsets}`.
pub fn maximize(
    rows: &[Vec<Rational>],
    offsets: &[LogRational],
    objective: &[Rational],
) -> LpOutcome {
    solve(&LinearProgram {
        rows: rows.to_vec(),
        offsets: offsets.to_vec(),
        objective: objective.to_vec(),
        dim: objective.len(),
    })
}

pub fn is_feasible(rows: &[Vec<Rational>], offsets: &[LogRational], dim: usize) -> bool {
    !matches!(
        solve(&LinearProgram {
            rows: rows.to_vec(),
            offsets: offsets.to_vec(),
            objective: vec![Rational::zero(); dim],
            dim,
        }),
        LpOutcome::Infeasible
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::rational::{rat, rat_int};

    fn lr(n: i64, d: i64) -> LogRational {
        LogRational::from_rational(rat(n, d))
    }

    fn rows(data: &[&[i64]]) -> Vec<Vec<Rational>> {
        data.iter()
            .map(|r| r.iter().map(|&x| rat_int(x)).collect())
            .collect()
    }

    #[test]
    fn simplex_triangle_max() {
        // triangle x>=0, y>=0, x+y<=1; maximize x + 2y -> 2 at (0,1)
        let a = rows(&[&[1, 0], &[0, 1], &[-1, -1]]);
        let b = vec![lr(0, 1), lr(0, 1), lr(-1, 1)];
        match maximize(&a, &b, &[rat_int(1), rat_int(2)]) {
            LpOutcome::Optimal { point, value } => {
                assert_eq!(value.as_rational().unwrap(), &rat_int(2));
                assert_eq!(point[0].as_rational().unwrap(), &rat_int(0));
                assert_eq!(point[1].as_rational().unwrap(), &rat_int(1));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn infeasible_strip() {
        // x >= 1 and -x >= 0
        let a = rows(&[&[1], &[-1]]);
        let b = vec![lr(1, 1), lr(0, 1)];
        assert!(matches!(
            maximize(&a, &b, &[rat_int(0)]),
            LpOutcome::Infeasible
        ));
    }

    #[test]
    fn unbounded_ray() {
        let a = rows(&[&[1]]);
        let b = vec![lr(0, 1)];
        assert!(matches!(
            maximize(&a, &b, &[rat_int(1)]),
            LpOutcome::Unbounded
        ));
    }

    #[test]
    fn log_rational_offsets() {
        // x >= log2, -x >= -log3 (i.e. x <= log3); maximize x -> log3
        let a = rows(&[&[1], &[-1]]);
        let b = vec![
            LogRational::log_term(2, rat(1, 1)),
            -LogRational::log_term(3, rat(1, 1)),
        ];
        match maximize(&a, &b, &[rat_int(1)]) {
            LpOutcome::Optimal { value, .. } => {
                assert_eq!(value, LogRational::log_term(3, rat(1, 1)));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn degenerate_vertex_terminates() {
        // many constraints through the origin plus a box
        let a = rows(&[&[1, 1], &[1, -1], &[-1, 1], &[1, 0], &[0, 1], &[-1, 0], &[0, -1]]);
        let b = vec![
            lr(0, 1),
            lr(0, 1),
            lr(0, 1),
            lr(0, 1),
            lr(0, 1),
            lr(-1, 1),
            lr(-1, 1),
        ];
        match maximize(&a, &b, &[rat_int(1), rat_int(1)]) {
            LpOutcome::Optimal { value, .. } => {
                assert_eq!(value.as_rational().unwrap(), &rat_int(2));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn negative_orthant_reachable() {
        // maximize -x subject to x >= -5 -> value 5 at x=-5 (needs x- vars)
        let a = rows(&[&[1]]);
        let b = vec![lr(-5, 1)];
        match maximize(&a, &b, &[rat_int(-1)]) {
            LpOutcome::Optimal { point, value } => {
                assert_eq!(point[0].as_rational().unwrap(), &rat_int(-5));
                assert_eq!(value.as_rational().unwrap(), &rat_int(5));
            }
            other => panic!("unexpected {other:?}"),
        }
    }
}
