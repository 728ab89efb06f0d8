//! F-subsets of ℚ^e_{≥0} (e ≤ 2) in canonical vertex form.

use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact_algebra::qinf::point_serde;
use crate::exact_algebra::QInf;

/// A point of ℚ^e serialized as a list of "a/b" strings.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Point(#[serde(with = "point_serde")] pub Vec<BigRational>);

impl Point {
    pub fn coord_sum(&self) -> BigRational {
        self.0.iter().fold(BigRational::zero(), |a, b| a + b)
    }
}

impl std::fmt::Display for Point {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|q| QInf::Fin(q.clone()).to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// The F-subset conv(∪ (v_i + ℝ^e_{≥0})) given by its vertices; an empty vertex list is ∅.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FPolyhedron {
    pub dim: usize,
    pub vertices: Vec<Point>,
}

fn cross(o: &[BigRational], a: &[BigRational], b: &[BigRational]) -> BigRational {
    (&a[0] - &o[0]) * (&b[1] - &o[1]) - (&a[1] - &o[1]) * (&b[0] - &o[0])
}

impl FPolyhedron {
    pub fn empty(dim: usize) -> Self {
        FPolyhedron { dim, vertices: Vec::new() }
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Canonical form of the smallest F-subset containing `points`.
    pub fn from_points(dim: usize, points: impl IntoIterator<Item = Vec<BigRational>>) -> Self {
        let mut pts: Vec<Vec<BigRational>> = points.into_iter().collect();
        for p in &pts {
            assert_eq!(p.len(), dim, "point dimension mismatch");
        }
        pts.sort();
        pts.dedup();
        let vertices = match dim {
            0 => {
                if pts.is_empty() {
                    Vec::new()
                } else {
                    vec![Vec::new()]
                }
            }
            1 => pts.into_iter().take(1).collect(),
            2 => {
                // Pareto frontier: increasing abscissa, strictly decreasing ordinate.
                let mut frontier: Vec<Vec<BigRational>> = Vec::new();
                for p in pts {
                    if frontier.last().is_none_or(|q| p[1] < q[1]) {
                        frontier.push(p);
                    }
                }
                let mut hull: Vec<Vec<BigRational>> = Vec::new();
                for p in frontier {
                    while hull.len() >= 2 && cross(&hull[hull.len() - 2], &hull[hull.len() - 1], &p) <= BigRational::zero() {
                        hull.pop();
                    }
                    hull.push(p);
                }
                hull
            }
            _ => panic!("F-subsets are supported in dimension ≤ 2"),
        };
        FPolyhedron { dim, vertices: vertices.into_iter().map(Point).collect() }
    }

    /// Membership test for a point of ℚ^e.
    pub fn contains(&self, p: &[BigRational]) -> bool {
        if self.vertices.is_empty() {
            return false;
        }
        match self.dim {
            0 => true,
            1 => p[0] >= self.vertices[0].0[0],
            _ => {
                let vs = &self.vertices;
                let first = &vs[0].0;
                let last = &vs[vs.len() - 1].0;
                if p[0] < first[0] || p[1] < last[1] {
                    return false;
                }
                if p[0] >= last[0] {
                    return true;
                }
                for w in vs.windows(2) {
                    let (a, b) = (&w[0].0, &w[1].0);
                    if p[0] >= a[0] && p[0] <= b[0] {
                        // p lies on or above the segment a–b.
                        return cross(a, b, p) >= BigRational::zero();
                    }
                }
                true
            }
        }
    }

    /// True when `other ⊆ self`.
    pub fn contains_polyhedron(&self, other: &FPolyhedron) -> bool {
        other.vertices.iter().all(|v| self.contains(&v.0))
    }

    /// δ: the minimal coordinate sum; ∞ for the empty set.
    pub fn delta(&self) -> QInf {
        self.vertices.iter().map(|v| v.coord_sum()).min().map(QInf::Fin).unwrap_or(QInf::Inf)
    }

    /// The same polyhedron with the two coordinates swapped.
    pub fn swapped(&self) -> Result<Self> {
        if self.dim != 2 {
            return Err(Error::Domain("coordinate swap needs e = 2".into()));
        }
        Ok(Self::from_points(2, self.vertices.iter().map(|v| vec![v.0[1].clone(), v.0[0].clone()])))
    }

    /// Lexicographically smallest vertex.
    pub fn min_vertex(&self) -> Option<&Point> {
        self.vertices.iter().min()
    }

    pub fn has_vertex(&self, v: &[BigRational]) -> bool {
        self.vertices.iter().any(|w| w.0 == v)
    }
}

impl std::fmt::Display for FPolyhedron {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.vertices.is_empty() {
            return write!(f, "∅");
        }
        let parts: Vec<String> = self.vertices.iter().map(|v| v.to_string()).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

/// Independent oracle: a point is a vertex iff it is not dominated by a convex combination of
/// two other points (brute force over all pairs).
pub fn brute_force_vertices(points: &[Vec<BigRational>]) -> Vec<Vec<BigRational>> {
    let mut pts = points.to_vec();
    pts.sort();
    pts.dedup();
    let mut out = Vec::new();
    'outer: for (i, p) in pts.iter().enumerate() {
        for (j, a) in pts.iter().enumerate() {
            if j == i {
                continue;
            }
            for (k, b) in pts.iter().enumerate() {
                if k == i {
                    continue;
                }
                if segment_dominates(a, b, p) {
                    continue 'outer;
                }
            }
        }
        out.push(p.clone());
    }
    out
}

/// Whether some λ ∈ [0,1] gives λa + (1−λ)b ≤ p coordinatewise.
fn segment_dominates(a: &[BigRational], b: &[BigRational], p: &[BigRational]) -> bool {
    let (mut lo, mut hi) = (BigRational::zero(), BigRational::from_integer(1.into()));
    for t in 0..p.len() {
        // λ(a_t − b_t) ≤ p_t − b_t
        let c = &a[t] - &b[t];
        let r = &p[t] - &b[t];
        if c.is_zero() {
            if r < BigRational::zero() {
                return false;
            }
        } else if c > BigRational::zero() {
            let bound = r / c;
            if bound < hi {
                hi = bound;
            }
        } else {
            let bound = r / c;
            if bound > lo {
                lo = bound;
            }
        }
    }
    lo <= hi
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn cusp_boundary_hull() {
        let pts = vec![
            vec![q(0, 1), q(3, 2)],
            vec![q(1, 2), q(1, 1)],
            vec![q(1, 1), q(1, 2)],
            vec![q(3, 2), q(0, 1)],
            vec![q(7, 2), q(0, 1)],
        ];
        let h = FPolyhedron::from_points(2, pts.clone());
        assert_eq!(h.vertices, vec![Point(vec![q(0, 1), q(3, 2)]), Point(vec![q(3, 2), q(0, 1)])]);
        assert_eq!(h.delta(), QInf::frac(3, 2));
        assert!(h.contains(&[q(3, 4), q(3, 4)]));
        assert!(!h.contains(&[q(1, 2), q(1, 2)]));
        let oracle = brute_force_vertices(&pts);
        assert_eq!(oracle.len(), 2);
    }

    #[test]
    fn empty_and_low_dimensions() {
        let e = FPolyhedron::empty(2);
        assert_eq!(e.delta(), QInf::Inf);
        let one = FPolyhedron::from_points(1, vec![vec![q(5, 2)], vec![q(3, 1)]]);
        assert_eq!(one.vertices, vec![Point(vec![q(5, 2)])]);
        let zero = FPolyhedron::from_points(0, vec![vec![]]);
        assert_eq!(zero.delta(), QInf::int(0));
    }
}
