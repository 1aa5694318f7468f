//! H- and V-representations of rational polyhedra.
//!
//! Normals are rational vectors; offsets live in the log-rational tower, so
//! quasi-rational polytopes (rational facet directions, real offsets in the
//! span of prime logarithms) are first-class. Vertices are computed by exact
//! enumeration of basic solutions; predicates route through the exact LP.

use std::cmp::Ordering;

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::linalg;
use super::lp::{self, LpOutcome};
use crate::numerics::logrational::LogRational;
use crate::numerics::rational::{lex_cmp, rational_to_f64, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GeometryError {
    Empty,
    Unbounded,
    NotFullDimensional,
    IrrationalData,
    InvalidInput(String),
}

impl std::fmt::Display for GeometryError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            GeometryError::Empty => write!(f, "polyhedron is empty"),
            GeometryError::Unbounded => write!(f, "polyhedron is unbounded"),
            GeometryError::NotFullDimensional => write!(f, "polytope is not full-dimensional"),
            GeometryError::IrrationalData => {
                write!(f, "operation requires rational coordinates")
            }
            GeometryError::InvalidInput(s) => write!(f, "invalid input: {s}"),
        }
    }
}

impl std::error::Error for GeometryError {}

/// `<normal, x> >= offset`
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constraint {
    pub normal: Vec<Rational>,
    pub offset: LogRational,
}

impl Constraint {
    pub fn new(normal: Vec<Rational>, offset: LogRational) -> Self {
        Constraint { normal, offset }
    }

    pub fn eval(&self, x: &[LogRational]) -> LogRational {
        let mut acc = LogRational::zero();
        for (c, xi) in self.normal.iter().zip(x.iter()) {
            acc = acc + xi.scale(c);
        }
        acc - self.offset.clone()
    }

    pub fn eval_rational_point(&self, x: &[Rational]) -> LogRational {
        let v = crate::numerics::rational::dot(&self.normal, x);
        LogRational::from_rational(v) - self.offset.clone()
    }
}

#[derive(Debug, Clone)]
pub struct HPolyhedron {
    pub dim: usize,
    pub constraints: Vec<Constraint>,
}

impl HPolyhedron {
    pub fn new(dim: usize, constraints: Vec<Constraint>) -> Self {
        HPolyhedron { dim, constraints }
    }

    fn rows(&self) -> Vec<Vec<Rational>> {
        self.constraints.iter().map(|c| c.normal.clone()).collect()
    }

    fn offsets(&self) -> Vec<LogRational> {
        self.constraints.iter().map(|c| c.offset.clone()).collect()
    }

    pub fn is_feasible(&self) -> bool {
        lp::is_feasible(&self.rows(), &self.offsets(), self.dim)
    }

    pub fn maximize(&self, objective: &[Rational]) -> LpOutcome {
        lp::maximize(&self.rows(), &self.offsets(), objective)
    }

    pub fn minimize(&self, objective: &[Rational]) -> LpOutcome {
        let neg: Vec<Rational> = objective.iter().map(|c| -c.clone()).collect();
        match lp::maximize(&self.rows(), &self.offsets(), &neg) {
            LpOutcome::Optimal { point, value } => LpOutcome::Optimal {
                point,
                value: -value,
            },
            other => other,
        }
    }

    /// Bounded iff every coordinate is bounded in both directions.
    pub fn is_bounded(&self) -> bool {
        if !self.is_feasible() {
            return true;
        }
        for i in 0..self.dim {
            for s in [1i64, -1] {
                let mut obj = vec![Rational::zero(); self.dim];
                obj[i] = Rational::from_integer(s.into());
                if matches!(self.maximize(&obj), LpOutcome::Unbounded) {
                    return false;
                }
            }
        }
        true
    }

    pub fn contains(&self, x: &[LogRational]) -> bool {
        self.constraints.iter().all(|c| c.eval(x).sign() >= 0)
    }

    pub fn contains_rational(&self, x: &[Rational]) -> bool {
        self.constraints
            .iter()
            .all(|c| c.eval_rational_point(x).sign() >= 0)
    }

    pub fn contains_strictly_rational(&self, x: &[Rational]) -> bool {
        self.constraints
            .iter()
            .all(|c| c.eval_rational_point(x).sign() > 0)
    }

    /// Indices of constraints that hold with equality on the whole set.
    pub fn implicit_equalities(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for (i, c) in self.constraints.iter().enumerate() {
            match self.maximize(&c.normal) {
                LpOutcome::Optimal { value, .. } => {
                    if value.certified_cmp(&c.offset) == Ordering::Equal {
                        out.push(i);
                    }
                }
                _ => {}
            }
        }
        out
    }

    /// Affine dimension, or None when empty.
    pub fn affine_dim(&self) -> Option<usize> {
        if !self.is_feasible() {
            return None;
        }
        let eqs = self.implicit_equalities();
        if eqs.is_empty() {
            return Some(self.dim);
        }
        let mat: Vec<Vec<Rational>> = eqs
            .iter()
            .map(|&i| self.constraints[i].normal.clone())
            .collect();
        Some(self.dim - linalg::rank(&mat))
    }

    /// Basic feasible solutions: every vertex appears (extra non-vertex
    /// points never do, since basic solutions of the full system are
    /// exactly the zero-dimensional faces).
    pub fn vertices(&self) -> Vec<Vec<LogRational>> {
        let m = self.constraints.len();
        let n = self.dim;
        let mut out: Vec<Vec<LogRational>> = Vec::new();
        if n == 0 {
            if self.is_feasible() {
                out.push(Vec::new());
            }
            return out;
        }
        for subset in (0..m).combinations(n) {
            let a: Vec<Vec<Rational>> = subset
                .iter()
                .map(|&i| self.constraints[i].normal.clone())
                .collect();
            if linalg::rank(&a) < n {
                continue;
            }
            let b: Vec<LogRational> = subset
                .iter()
                .map(|&i| self.constraints[i].offset.clone())
                .collect();
            let Some(x) = linalg::solve_square(&a, &b) else {
                continue;
            };
            if self.contains(&x) && !out.contains(&x) {
                out.push(x);
            }
        }
        out.sort_by(|a, b| {
            for (x, y) in a.iter().zip(b.iter()) {
                match x.certified_cmp(y) {
                    Ordering::Equal => continue,
                    o => return o,
                }
            }
            Ordering::Equal
        });
        out
    }

    /// Removes constraints implied by the others (deterministic order).
    pub fn canonicalized(&self) -> HPolyhedron {
        let mut kept: Vec<Constraint> = self.constraints.clone();
        let mut i = 0;
        while i < kept.len() {
            if kept.len() == 1 {
                break;
            }
            let mut trial: Vec<Constraint> = kept.clone();
            let c = trial.remove(i);
            let rows: Vec<Vec<Rational>> = trial.iter().map(|k| k.normal.clone()).collect();
            let offs: Vec<LogRational> = trial.iter().map(|k| k.offset.clone()).collect();
            let neg: Vec<Rational> = c.normal.iter().map(|x| -x.clone()).collect();
            let redundant = match lp::maximize(&rows, &offs, &neg) {
                // min <u,x> over the others >= offset?
                LpOutcome::Optimal { value, .. } => {
                    (-value).certified_cmp(&c.offset) != Ordering::Less
                }
                LpOutcome::Unbounded => false,
                LpOutcome::Infeasible => false,
            };
            if redundant {
                kept.remove(i);
            } else {
                i += 1;
            }
        }
        HPolyhedron {
            dim: self.dim,
            constraints: kept,
        }
    }

    /// A rational point in the relative interior. Uses an inscribed-ball LP
    /// (L1-normalized) on the non-equality constraints, then rationalizes.
    pub fn relative_interior_rational_point(&self) -> Option<Vec<Rational>> {
        if !self.is_feasible() {
            return None;
        }
        let eqs = self.implicit_equalities();
        let n = self.dim;
        // variables (x, t); maximize t
        let mut rows: Vec<Vec<Rational>> = Vec::new();
        let mut offs: Vec<LogRational> = Vec::new();
        for (i, c) in self.constraints.iter().enumerate() {
            let mut row: Vec<Rational> = c.normal.clone();
            if eqs.contains(&i) {
                // keep as equality: <u,x> >= off and <-u,x> >= -off
                row.push(Rational::zero());
                rows.push(row);
                offs.push(c.offset.clone());
                let mut neg: Vec<Rational> = c.normal.iter().map(|x| -x.clone()).collect();
                neg.push(Rational::zero());
                rows.push(neg);
                offs.push(-c.offset.clone());
            } else {
                let norm1: Rational = c.normal.iter().map(|x| x.abs()).sum();
                row.push(-norm1);
                rows.push(row);
                offs.push(c.offset.clone());
            }
        }
        // bound t from above to keep the LP bounded
        let mut trow = vec![Rational::zero(); n + 1];
        trow[n] = -Rational::one();
        rows.push(trow);
        offs.push(LogRational::from_int(-1));
        let mut obj = vec![Rational::zero(); n + 1];
        obj[n] = Rational::one();
        match lp::maximize(&rows, &offs, &obj) {
            LpOutcome::Optimal { point, value } => {
                if value.sign() < 0 {
                    return None;
                }
                let x = &point[..n];
                // exact when already rational
                if let Some(xr) = lr_vec_as_rational(x) {
                    return Some(xr);
                }
                // rationalize by dyadic rounding and certify strict interiority
                for k in [20u32, 30, 40, 50, 60] {
                    let scale = (1u64 << k) as f64;
                    let approx: Vec<Rational> = x
                        .iter()
                        .map(|v| {
                            let num = BigInt::from((v.to_f64() * scale).round() as i128);
                            Rational::new(num, BigInt::from(1u64) << k)
                        })
                        .collect();
                    if self.strictly_inside_non_eq(&approx, &eqs) {
                        return Some(approx);
                    }
                }
                None
            }
            _ => None,
        }
    }

    fn strictly_inside_non_eq(&self, x: &[Rational], eqs: &[usize]) -> bool {
        for (i, c) in self.constraints.iter().enumerate() {
            let v = c.eval_rational_point(x);
            if eqs.contains(&i) {
                if v.sign() != 0 {
                    return false;
                }
            } else if v.sign() <= 0 {
                return false;
            }
        }
        true
    }
}

pub fn lr_vec_as_rational(x: &[LogRational]) -> Option<Vec<Rational>> {
    x.iter().map(|v| v.as_rational().cloned()).collect()
}

pub fn rational_vec_to_lr(x: &[Rational]) -> Vec<LogRational> {
    x.iter()
        .map(|v| LogRational::from_rational(v.clone()))
        .collect()
}

/// A bounded, nonempty rational polyhedron with canonical H-representation
/// and enumerated vertex set.
#[derive(Debug, Clone)]
pub struct RationalPolytope {
    hrep: HPolyhedron,
    vertices: Vec<Vec<LogRational>>,
    dim: usize,
}

impl RationalPolytope {
    pub fn from_hrep(h: &HPolyhedron) -> Result<Self, GeometryError> {
        if !h.is_feasible() {
            return Err(GeometryError::Empty);
        }
        if !h.is_bounded() {
            return Err(GeometryError::Unbounded);
        }
        let canon = h.canonicalized();
        let vertices = canon.vertices();
        debug_assert!(!vertices.is_empty());
        let dim = canon.affine_dim().unwrap_or(0);
        Ok(RationalPolytope {
            hrep: canon,
            vertices,
            dim,
        })
    }

    /// Convex hull of rational points (exact facet enumeration).
    pub fn from_rational_vertices(points: &[Vec<Rational>]) -> Result<Self, GeometryError> {
        if points.is_empty() {
            return Err(GeometryError::Empty);
        }
        let n = points[0].len();
        let constraints = hull_constraints(points, n)?;
        Self::from_hrep(&HPolyhedron::new(n, constraints))
    }

    pub fn ambient_dim(&self) -> usize {
        self.hrep.dim
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn hrep(&self) -> &HPolyhedron {
        &self.hrep
    }

    pub fn vertices(&self) -> &[Vec<LogRational>] {
        &self.vertices
    }

    pub fn vertices_rational(&self) -> Result<Vec<Vec<Rational>>, GeometryError> {
        self.vertices
            .iter()
            .map(|v| lr_vec_as_rational(v).ok_or(GeometryError::IrrationalData))
            .collect()
    }

    pub fn is_rational(&self) -> bool {
        self.vertices.iter().all(|v| v.iter().all(|x| x.is_rational()))
    }

    pub fn contains(&self, x: &[LogRational]) -> bool {
        self.hrep.contains(x)
    }

    pub fn contains_rational(&self, x: &[Rational]) -> bool {
        self.hrep.contains_rational(x)
    }

    /// Support value `min_{x in P} <x, u>`; exact via the vertex set.
    pub fn support_min(&self, u: &[Rational]) -> LogRational {
        self.vertices
            .iter()
            .map(|v| {
                let mut acc = LogRational::zero();
                for (x, c) in v.iter().zip(u.iter()) {
                    acc = acc + x.scale(c);
                }
                acc
            })
            .min()
            .expect("nonempty polytope")
    }

    /// The face on which `<x,u>` is minimal, as a polytope.
    pub fn min_face(&self, u: &[Rational]) -> RationalPolytope {
        let gamma = self.support_min(u);
        let mut cons = self.hrep.constraints.clone();
        cons.push(Constraint::new(u.to_vec(), gamma.clone()));
        let neg: Vec<Rational> = u.iter().map(|x| -x.clone()).collect();
        cons.push(Constraint::new(neg, -gamma));
        RationalPolytope::from_hrep(&HPolyhedron::new(self.hrep.dim, cons))
            .expect("face of a polytope is a nonempty polytope")
    }

    /// All lattice points of `scale * P`.
    pub fn lattice_points(&self, scale: u64) -> Vec<Vec<BigInt>> {
        let n = self.hrep.dim;
        let s = Rational::from_integer(BigInt::from(scale));
        // conservative bounding box from the (possibly irrational) vertices
        let mut lo = vec![i64::MAX; n];
        let mut hi = vec![i64::MIN; n];
        for v in &self.vertices {
            for (k, x) in v.iter().enumerate() {
                let f = x.to_f64() * scale as f64;
                lo[k] = lo[k].min(f.floor() as i64 - 1);
                hi[k] = hi[k].max(f.ceil() as i64 + 1);
            }
        }
        let scaled: Vec<Constraint> = self
            .hrep
            .constraints
            .iter()
            .map(|c| Constraint::new(c.normal.clone(), c.offset.scale(&s)))
            .collect();
        let mut out = Vec::new();
        let mut cursor = lo.clone();
        'outer: loop {
            let point: Vec<Rational> = cursor
                .iter()
                .map(|&k| Rational::from_integer(BigInt::from(k)))
                .collect();
            if scaled
                .iter()
                .all(|c| c.eval_rational_point(&point).sign() >= 0)
            {
                out.push(cursor.iter().map(|&k| BigInt::from(k)).collect());
            }
            // odometer increment
            for k in 0..n {
                cursor[k] += 1;
                if cursor[k] <= hi[k] {
                    continue 'outer;
                }
                cursor[k] = lo[k];
            }
            break;
        }
        out
    }

    pub fn translate_rational(&self, by: &[Rational]) -> RationalPolytope {
        let cons: Vec<Constraint> = self
            .hrep
            .constraints
            .iter()
            .map(|c| {
                let shift = crate::numerics::rational::dot(&c.normal, by);
                Constraint::new(
                    c.normal.clone(),
                    c.offset.clone() + LogRational::from_rational(shift),
                )
            })
            .collect();
        RationalPolytope::from_hrep(&HPolyhedron::new(self.hrep.dim, cons))
            .expect("translate preserves boundedness")
    }

    /// `center + factor * (P - center)` for rational data.
    pub fn shrink_about(&self, center: &[Rational], factor: &Rational) -> RationalPolytope {
        let cons: Vec<Constraint> = self
            .hrep
            .constraints
            .iter()
            .map(|c| {
                let cu = crate::numerics::rational::dot(&c.normal, center);
                // <u, c + f(x-c)> >= gamma  <=>  <u,x> >= c.u + (gamma - c.u)/f
                // rearranged for the new polytope directly:
                let off = c.offset.clone().scale(factor)
                    + LogRational::from_rational(&cu * &(Rational::one() - factor));
                Constraint::new(c.normal.clone(), off)
            })
            .collect();
        RationalPolytope::from_hrep(&HPolyhedron::new(self.hrep.dim, cons))
            .expect("shrink preserves boundedness")
    }

    pub fn interior_rational_point(&self) -> Option<Vec<Rational>> {
        self.hrep.relative_interior_rational_point()
    }

    /// Centroid of the vertex set (a relative-interior point).
    pub fn vertex_centroid(&self) -> Vec<LogRational> {
        let n = self.hrep.dim;
        let k = Rational::new(BigInt::one(), BigInt::from(self.vertices.len() as u64));
        let mut acc = vec![LogRational::zero(); n];
        for v in &self.vertices {
            for i in 0..n {
                acc[i] = acc[i].clone() + v[i].scale(&k);
            }
        }
        acc
    }

    /// Minkowski sum, rational path.
    pub fn minkowski_sum(&self, other: &RationalPolytope) -> Result<RationalPolytope, GeometryError> {
        let a = self.vertices_rational()?;
        let b = other.vertices_rational()?;
        let mut sums = Vec::new();
        for x in &a {
            for y in &b {
                let s: Vec<Rational> = x.iter().zip(y.iter()).map(|(p, q)| p + q).collect();
                if !sums.contains(&s) {
                    sums.push(s);
                }
            }
        }
        RationalPolytope::from_rational_vertices(&sums)
    }

    pub fn to_f64_vertices(&self) -> Vec<Vec<f64>> {
        self.vertices
            .iter()
            .map(|v| v.iter().map(|x| x.to_f64()).collect())
            .collect()
    }
}

/// Facet constraints of the convex hull of rational points, including the
/// affine-hull equality pairs when the hull is lower-dimensional.
fn hull_constraints(
    points: &[Vec<Rational>],
    n: usize,
) -> Result<Vec<Constraint>, GeometryError> {
    let mut constraints: Vec<Constraint> = Vec::new();
    // affine hull
    let base = &points[0];
    let dirs: Vec<Vec<Rational>> = points[1..]
        .iter()
        .map(|p| p.iter().zip(base.iter()).map(|(a, b)| a - b).collect())
        .collect();
    let d = if dirs.is_empty() { 0 } else { linalg::rank(&dirs) };
    let hull_normals: Vec<Vec<Rational>> = if d == n {
        Vec::new()
    } else if dirs.is_empty() {
        (0..n)
            .map(|i| {
                let mut v = vec![Rational::zero(); n];
                v[i] = Rational::one();
                v
            })
            .collect()
    } else {
        linalg::nullspace(&dirs)
    };
    for w in &hull_normals {
        let off = crate::numerics::rational::dot(w, base);
        constraints.push(Constraint::new(
            w.clone(),
            LogRational::from_rational(off.clone()),
        ));
        constraints.push(Constraint::new(
            w.iter().map(|x| -x.clone()).collect(),
            LogRational::from_rational(-off),
        ));
    }
    if d == 0 {
        return Ok(constraints);
    }
    // A facet of the d-dimensional hull is spanned by d affinely independent
    // points. Its normal within the hull direction space is the unique (up
    // to sign) solution orthogonal to the facet span and to the hull's
    // normal space.
    for subset in (0..points.len()).combinations(d) {
        let p0 = &points[subset[0]];
        let span: Vec<Vec<Rational>> = subset[1..]
            .iter()
            .map(|&i| {
                points[i]
                    .iter()
                    .zip(p0.iter())
                    .map(|(a, b)| a - b)
                    .collect()
            })
            .collect();
        if !span.is_empty() && linalg::rank(&span) < d - 1 {
            continue;
        }
        let mut sys: Vec<Vec<Rational>> = span.clone();
        sys.extend(hull_normals.iter().cloned());
        if sys.is_empty() {
            // d == 1 and full-dimensional line: n == 1
            sys.push(vec![Rational::zero(); n]);
        }
        let mut candidates = linalg::nullspace(&sys);
        candidates.retain(|w| !w.iter().all(|x| x.is_zero()));
        if candidates.len() != 1 {
            continue;
        }
        let w = crate::numerics::rational::primitive_direction(&candidates.pop().unwrap())
            .expect("nonzero normal");
        let w: Vec<Rational> = w.into_iter().map(Rational::from_integer).collect();
        let off = crate::numerics::rational::dot(&w, p0);
        let mut pos = false;
        let mut neg = false;
        for p in points {
            match crate::numerics::rational::dot(&w, p).cmp(&off) {
                Ordering::Greater => pos = true,
                Ordering::Less => neg = true,
                Ordering::Equal => {}
            }
        }
        if pos && neg {
            continue;
        }
        let (normal, offset) = if neg {
            (
                w.iter().map(|x| -x.clone()).collect::<Vec<_>>(),
                -off.clone(),
            )
        } else {
            (w, off)
        };
        let cons = Constraint::new(normal, LogRational::from_rational(offset));
        if !constraints.contains(&cons) {
            constraints.push(cons);
        }
    }
    Ok(constraints)
}

/// f64 view of a vertex list, for numeric paths.
pub fn vertices_to_f64(vertices: &[Vec<LogRational>]) -> Vec<Vec<f64>> {
    vertices
        .iter()
        .map(|v| v.iter().map(|x| x.to_f64()).collect())
        .collect()
}

/// Deterministic lexicographic sort key for rational vertex lists.
pub fn sort_rational_points(points: &mut [Vec<Rational>]) {
    points.sort_by(|a, b| lex_cmp(a, b));
}

pub fn point_to_f64(x: &[Rational]) -> Vec<f64> {
    x.iter().map(rational_to_f64).collect()
}
