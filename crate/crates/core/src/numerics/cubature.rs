//! Deterministic adaptive cubature over simplices.
//!
//! The base rule is the degree-2 symmetric simplex rule with nodes at the
//! vertices and edge midpoints:
//!
//! ```text
//!   I(f) ~ vol * [ (2-n)/((n+1)(n+2)) * sum_i f(v_i)
//!                + 4/((n+1)(n+2))     * sum_{i<j} f((v_i+v_j)/2) ]
//! ```
//!
//! (exact for quadratics in any dimension). The error estimate for a cell is
//! the difference between the rule and its one-level refinement obtained by
//! bisecting the longest edge; cells are split until the estimate meets the
//! volume-proportional share of the tolerance. Evaluation order is a fixed
//! binary tree, so results are bit-identical regardless of thread count.

use rayon::join;

use super::rational::{rational_to_f64, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CubatureError {
    /// The subdivision budget ran out before the tolerance was met.
    BudgetExceeded,
}

impl std::fmt::Display for CubatureError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CubatureError::BudgetExceeded => write!(f, "cubature subdivision budget exceeded"),
        }
    }
}

impl std::error::Error for CubatureError {}

#[derive(Clone, Debug)]
pub struct Simplex {
    /// n+1 vertices in R^n.
    pub vertices: Vec<Vec<f64>>,
}

impl Simplex {
    pub fn from_rational_vertices(vertices: &[Vec<Rational>]) -> Self {
        Simplex {
            vertices: vertices
                .iter()
                .map(|v| v.iter().map(rational_to_f64).collect())
                .collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn volume(&self) -> f64 {
        let n = self.dim();
        if n == 0 {
            return 1.0;
        }
        let mut m: Vec<Vec<f64>> = (1..=n)
            .map(|i| {
                (0..n)
                    .map(|k| self.vertices[i][k] - self.vertices[0][k])
                    .collect()
            })
            .collect();
        // Gaussian elimination with partial pivoting.
        let mut det = 1.0f64;
        for c in 0..n {
            let mut piv = c;
            for r in c + 1..n {
                if m[r][c].abs() > m[piv][c].abs() {
                    piv = r;
                }
            }
            if m[piv][c] == 0.0 {
                return 0.0;
            }
            if piv != c {
                m.swap(piv, c);
                det = -det;
            }
            det *= m[c][c];
            for r in c + 1..n {
                let f = m[r][c] / m[c][c];
                for k in c..n {
                    m[r][k] -= f * m[c][k];
                }
            }
        }
        let mut fact = 1.0;
        for k in 1..=n {
            fact *= k as f64;
        }
        det.abs() / fact
    }

    fn longest_edge(&self) -> (usize, usize) {
        let mut best = (0usize, 1usize);
        let mut best_len = -1.0f64;
        for i in 0..self.vertices.len() {
            for j in i + 1..self.vertices.len() {
                let len: f64 = self.vertices[i]
                    .iter()
                    .zip(&self.vertices[j])
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum();
                if len > best_len {
                    best_len = len;
                    best = (i, j);
                }
            }
        }
        best
    }

    fn bisect(&self) -> (Simplex, Simplex) {
        let (i, j) = self.longest_edge();
        let mid: Vec<f64> = self.vertices[i]
            .iter()
            .zip(&self.vertices[j])
            .map(|(a, b)| 0.5 * (a + b))
            .collect();
        let mut a = self.clone();
        let mut b = self.clone();
        a.vertices[j] = mid.clone();
        b.vertices[i] = mid;
        (a, b)
    }
}

fn rule_degree2(f: &(dyn Fn(&[f64]) -> f64 + Sync), s: &Simplex, vol: f64) -> f64 {
    let n = s.dim();
    if n == 0 {
        return f(&s.vertices[0]);
    }
    let denom = ((n + 1) * (n + 2)) as f64;
    let w_vertex = (2.0 - n as f64) / denom;
    let w_edge = 4.0 / denom;
    let mut acc = 0.0;
    for v in &s.vertices {
        acc += w_vertex * f(v);
    }
    let mut mid = vec![0.0; n];
    for i in 0..s.vertices.len() {
        for j in i + 1..s.vertices.len() {
            for k in 0..n {
                mid[k] = 0.5 * (s.vertices[i][k] + s.vertices[j][k]);
            }
            acc += w_edge * f(&mid);
        }
    }
    acc * vol
}

pub struct CubatureOptions {
    pub tol: f64,
    /// Cap on the number of cell subdivisions.
    pub max_subdivisions: u64,
    pub parallel: bool,
}

impl Default for CubatureOptions {
    fn default() -> Self {
        CubatureOptions {
            tol: 1e-9,
            max_subdivisions: 40_000_000,
            parallel: true,
        }
    }
}

struct Budget {
    used: std::sync::atomic::AtomicU64,
    cap: u64,
}

impl Budget {
    fn take(&self) -> bool {
        use std::sync::atomic::Ordering::Relaxed;
        self.used.fetch_add(1, Relaxed) < self.cap
    }
}

/// Integrates `f` over the simplex to the requested absolute tolerance.
/// Deterministic: same inputs give the same bits regardless of threading.
pub fn adaptive_integrate(
    f: &(dyn Fn(&[f64]) -> f64 + Sync),
    simplex: &Simplex,
    opts: &CubatureOptions,
) -> Result<f64, CubatureError> {
    let vol = simplex.volume();
    if vol == 0.0 {
        return Ok(0.0);
    }
    let budget = Budget {
        used: std::sync::atomic::AtomicU64::new(0),
        cap: opts.max_subdivisions,
    };
    let coarse = rule_degree2(f, simplex, vol);
    recurse(f, simplex, vol, coarse, opts.tol, 0, &budget, opts.parallel)
}

#[allow(clippy::too_many_arguments)]
fn recurse(
    f: &(dyn Fn(&[f64]) -> f64 + Sync),
    s: &Simplex,
    vol: f64,
    coarse: f64,
    tol: f64,
    depth: u32,
    budget: &Budget,
    parallel: bool,
) -> Result<f64, CubatureError> {
    let (a, b) = s.bisect();
    let (va, vb) = (0.5 * vol, 0.5 * vol);
    let fa = rule_degree2(f, &a, va);
    let fb = rule_degree2(f, &b, vb);
    let refined = fa + fb;
    let est = (refined - coarse).abs();
    // Fully converged cells (est == 0) also stop; guards flat integrands.
    if est <= tol || depth >= 60 {
        return Ok(refined);
    }
    if !budget.take() {
        return Err(CubatureError::BudgetExceeded);
    }
    let half_tol = 0.5 * tol;
    if parallel && depth < 6 {
        let (ra, rb) = join(
            || recurse(f, &a, va, fa, half_tol, depth + 1, budget, parallel),
            || recurse(f, &b, vb, fb, half_tol, depth + 1, budget, parallel),
        );
        Ok(ra? + rb?)
    } else {
        let ra = recurse(f, &a, va, fa, half_tol, depth + 1, budget, false)?;
        let rb = recurse(f, &b, vb, fb, half_tol, depth + 1, budget, false)?;
        Ok(ra + rb)
    }
}

/// Fixed-shape binary-tree sum; the reduction order depends only on `len`.
pub fn tree_sum(values: &[f64]) -> f64 {
    match values.len() {
        0 => 0.0,
        1 => values[0],
        n => {
            let mid = n / 2;
            tree_sum(&values[..mid]) + tree_sum(&values[mid..])
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::rational::rat;

    fn unit_simplex(n: usize) -> Simplex {
        let mut verts = vec![vec![0.0; n]];
        for i in 0..n {
            let mut v = vec![0.0; n];
            v[i] = 1.0;
            verts.push(v);
        }
        Simplex { vertices: verts }
    }

    #[test]
    fn constant_over_standard_simplex() {
        let s = unit_simplex(2);
        let opts = CubatureOptions {
            tol: 1e-12,
            ..Default::default()
        };
        let v = adaptive_integrate(&|_: &[f64]| 1.0, &s, &opts).unwrap();
        assert!((v - 0.5).abs() <= 1e-12);
    }

    #[test]
    fn coordinate_moment() {
        // integral of x1 over the standard 2-simplex is 1/6
        let s = unit_simplex(2);
        let opts = CubatureOptions {
            tol: 1e-10,
            ..Default::default()
        };
        let v = adaptive_integrate(&|x: &[f64]| x[0], &s, &opts).unwrap();
        assert!((v - 1.0 / 6.0).abs() <= 1e-10);
    }

    #[test]
    fn entropy_integral() {
        // integral over [0,1] of -(1/2)(x log x + (1-x)log(1-x)) = 1/4
        let s = Simplex::from_rational_vertices(&[vec![rat(0, 1)], vec![rat(1, 1)]]);
        let f = |x: &[f64]| {
            let t = x[0];
            let h = |y: f64| if y <= 0.0 { 0.0 } else { y * y.ln() };
            -0.5 * (h(t) + h(1.0 - t))
        };
        let opts = CubatureOptions {
            tol: 1e-9,
            ..Default::default()
        };
        let v = adaptive_integrate(&f, &s, &opts).unwrap();
        assert!((v - 0.25).abs() <= 1e-9, "got {v}");
    }

    #[test]
    fn affine_matches_centroid_rule() {
        // For affine f the integral is vol * f(centroid), exactly.
        let s = Simplex {
            vertices: vec![vec![0.5, -1.0], vec![2.0, 0.25], vec![-0.5, 3.0]],
        };
        let f = |x: &[f64]| 3.0 * x[0] - 0.7 * x[1] + 0.2;
        let vol = s.volume();
        let centroid = [
            (0.5 + 2.0 - 0.5) / 3.0,
            (-1.0 + 0.25 + 3.0) / 3.0,
        ];
        let expect = vol * f(&centroid);
        let opts = CubatureOptions {
            tol: 1e-11,
            ..Default::default()
        };
        let v = adaptive_integrate(&f, &s, &opts).unwrap();
        assert!((v - expect).abs() <= 1e-11);
    }

    #[test]
    fn split_additivity() {
        // splitting [0,1] at 1/3 and summing agrees within 2*tol
        let f = |x: &[f64]| (3.0 * x[0]).sin() + x[0] * x[0];
        let tol = 1e-9;
        let opts = CubatureOptions {
            tol,
            ..Default::default()
        };
        let seg = |a: f64, b: f64| Simplex {
            vertices: vec![vec![a], vec![b]],
        };
        let whole = adaptive_integrate(&f, &seg(0.0, 1.0), &opts).unwrap();
        let parts = adaptive_integrate(&f, &seg(0.0, 1.0 / 3.0), &opts).unwrap()
            + adaptive_integrate(&f, &seg(1.0 / 3.0, 1.0), &opts).unwrap();
        assert!((whole - parts).abs() <= 2.0 * tol);
    }

    #[test]
    fn budget_is_enforced() {
        let s = unit_simplex(1);
        let opts = CubatureOptions {
            tol: 1e-300,
            max_subdivisions: 10,
            parallel: false,
        };
        let r = adaptive_integrate(&|x: &[f64]| (50.0 * x[0]).sin().abs(), &s, &opts);
        assert_eq!(r.unwrap_err(), CubatureError::BudgetExceeded);
    }

    #[test]
    fn deterministic_across_thread_counts() {
        let s = unit_simplex(2);
        let f = |x: &[f64]| (x[0] * 7.3).cos() * (x[1] * 3.1).exp();
        let opts = CubatureOptions {
            tol: 1e-7,
            ..Default::default()
        };
        let v1 = adaptive_integrate(&f, &s, &opts).unwrap();
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap();
        let v2 = pool.install(|| adaptive_integrate(&f, &s, &opts).unwrap());
        assert_eq!(v1.to_bits(), v2.to_bits());
    }
}
