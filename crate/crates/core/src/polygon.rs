//! Exact convex polygons in the plane: canonical CCW vertex form, half-plane
//! clipping, separation tests, and point distances, all on rationals.

use crate::geometry::Point;
use crate::num::Q;
use serde::{Deserialize, Serialize};

/// Closed half-plane {x : n . x <= c}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HalfPlane {
    pub normal: Point,
    pub offset: Q,
}

impl HalfPlane {
    /// The side of the bisector of (a, b) closer to a:
    /// |x-a|^2 <= |x-b|^2  <=>  2(b-a).x <= |b|^2 - |a|^2.
    pub fn bisector_toward(a: &Point, b: &Point) -> HalfPlane {
        let n = b.sub(a).scale(&Q::from_int(2));
        let c = b.norm_sq() - a.norm_sq();
        HalfPlane { normal: n, offset: c }
    }

    pub fn contains(&self, x: &Point) -> bool {
        self.normal.dot(x) <= self.offset
    }

    fn value(&self, x: &Point) -> Q {
        self.normal.dot(x) - &self.offset
    }
}

fn cross(o: &Point, a: &Point, b: &Point) -> Q {
    let u = a.sub(o);
    let v = b.sub(o);
    &u.0[0] * &v.0[1] - &u.0[1] * &v.0[0]
}

/// Convex polygon with positive area, stored as canonical CCW vertices
/// (no collinear triples, starting at the lexicographically least vertex).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ConvexPolygon {
    pub vertices: Vec<Point>,
}

impl ConvexPolygon {
    /// Builds from vertices in order (CW or CCW); returns None when the hull
    /// is degenerate (fewer than 3 corners or zero area).
    pub fn new(mut vertices: Vec<Point>) -> Option<ConvexPolygon> {
        vertices.dedup();
        if vertices.len() >= 2 && vertices.first() == vertices.last() {
            vertices.pop();
        }
        if vertices.len() < 3 {
            return None;
        }
        // Orient CCW by signed area.
        let mut area2 = Q::zero();
        for i in 0..vertices.len() {
            let a = &vertices[i];
            let b = &vertices[(i + 1) % vertices.len()];
            area2 += &a.0[0] * &b.0[1] - &b.0[0] * &a.0[1];
        }
        if area2.is_zero() {
            return None;
        }
        if area2.is_negative() {
            vertices.reverse();
        }
        // Drop collinear vertices.
        let n = vertices.len();
        let kept: Vec<Point> = (0..n)
            .filter(|&i| {
                let prev = &vertices[(i + n - 1) % n];
                let next = &vertices[(i + 1) % n];
                !cross(prev, &vertices[i], next).is_zero()
            })
            .map(|i| vertices[i].clone())
            .collect();
        if kept.len() < 3 {
            return None;
        }
        // Canonical start.
        let start = kept
            .iter()
            .enumerate()
            .min_by(|(_, a), (_, b)| a.cmp(b))
            .map(|(i, _)| i)
            .unwrap();
        let rotated: Vec<Point> = kept[start..].iter().chain(&kept[..start]).cloned().collect();
        Some(ConvexPolygon { vertices: rotated })
    }

    pub fn axis_square(center: &Point, half_width: &Q) -> ConvexPolygon {
        let (cx, cy) = (&center.0[0], &center.0[1]);
        ConvexPolygon::new(vec![
            Point(vec![cx - half_width, cy - half_width]),
            Point(vec![cx + half_width, cy - half_width]),
            Point(vec![cx + half_width, cy + half_width]),
            Point(vec![cx - half_width, cy + half_width]),
        ])
        .expect("square is nondegenerate")
    }

    pub fn contains_closed(&self, x: &Point) -> bool {
        let n = self.vertices.len();
        (0..n).all(|i| !cross(&self.vertices[i], &self.vertices[(i + 1) % n], x).is_negative())
    }

    pub fn contains_open(&self, x: &Point) -> bool {
        let n = self.vertices.len();
        (0..n).all(|i| cross(&self.vertices[i], &self.vertices[(i + 1) % n], x).is_positive())
    }

    /// Clips by a closed half-plane (one Sutherland-Hodgman step); None when
    /// the intersection has empty interior.
    pub fn clip(&self, hp: &HalfPlane) -> Option<ConvexPolygon> {
        let n = self.vertices.len();
        let mut out: Vec<Point> = Vec::with_capacity(n + 1);
        for i in 0..n {
            let cur = &self.vertices[i];
            let next = &self.vertices[(i + 1) % n];
            let vc = hp.value(cur);
            let vn = hp.value(next);
            if !vc.is_positive() {
                out.push(cur.clone());
            }
            if (vc.is_positive() && vn.is_negative()) || (vc.is_negative() && vn.is_positive()) {
                // Exact rational intersection of the edge with the boundary.
                let t = &vc / &(&vc - &vn);
                let p = Point(vec![
                    &cur.0[0] + &(&t * &(&next.0[0] - &cur.0[0])),
                    &cur.0[1] + &(&t * &(&next.0[1] - &cur.0[1])),
                ]);
                out.push(p);
            }
        }
        ConvexPolygon::new(out)
    }

    /// Squared distance from a point to the closed polygon (0 when inside).
    pub fn dist_sq_to_point(&self, x: &Point) -> Q {
        if self.contains_closed(x) {
            return Q::zero();
        }
        let n = self.vertices.len();
        let mut best: Option<Q> = None;
        for i in 0..n {
            let a = &self.vertices[i];
            let b = &self.vertices[(i + 1) % n];
            let d = segment_dist_sq(a, b, x);
            best = Some(match best {
                None => d,
                Some(cur) => cur.min(d),
            });
        }
        best.unwrap()
    }

    /// Max squared distance from a point to the polygon (attained at a vertex).
    pub fn max_dist_sq_to_point(&self, x: &Point) -> Q {
        self.vertices
            .iter()
            .map(|v| v.dist_sq(x))
            .max()
            .expect("nonempty polygon")
    }

    pub fn diameter_sq(&self) -> Q {
        let mut best = Q::zero();
        for (i, a) in self.vertices.iter().enumerate() {
            for b in &self.vertices[i + 1..] {
                let d = a.dist_sq(b);
                if d > best {
                    best = d;
                }
            }
        }
        best
    }

    /// Average of the vertices; equivariant under isometries.
    pub fn vertex_centroid(&self) -> Point {
        let n = Q::from_int(self.vertices.len() as i64);
        let mut acc = Point::origin(2);
        for v in &self.vertices {
            acc = acc.add(v);
        }
        acc.scale(&n.recip())
    }

    /// True iff the open interiors are disjoint (touching boundaries allowed),
    /// by exact separating-axis search over both edge normal sets.
    pub fn open_disjoint_from(&self, other: &ConvexPolygon) -> bool {
        separating_axis(self, other) || separating_axis(other, self)
    }

    /// Edge outward normals with offsets, as closed half-planes containing
    /// the polygon.
    pub fn half_planes(&self) -> Vec<HalfPlane> {
        let n = self.vertices.len();
        (0..n)
            .map(|i| {
                let a = &self.vertices[i];
                let b = &self.vertices[(i + 1) % n];
                // CCW: outward normal is the edge rotated by -90.
                let e = b.sub(a);
                let normal = Point(vec![e.0[1].clone(), -&e.0[0]]);
                let offset = normal.dot(a);
                HalfPlane { normal, offset }
            })
            .collect()
    }
}

fn separating_axis(p: &ConvexPolygon, q: &ConvexPolygon) -> bool {
    for hp in p.half_planes() {
        // Axis separates when q lies fully in the outside closed half-plane.
        let max_p = hp.offset.clone();
        let min_q = q
            .vertices
            .iter()
            .map(|v| hp.normal.dot(v))
            .min()
            .expect("nonempty");
        if min_q >= max_p {
            return true;
        }
    }
    false
}

/// Squared distance from point x to the closed segment [a, b].
pub fn segment_dist_sq(a: &Point, b: &Point, x: &Point) -> Q {
    let ab = b.sub(a);
    let len_sq = ab.norm_sq();
    if len_sq.is_zero() {
        return a.dist_sq(x);
    }
    let t = x.sub(a).dot(&ab) / &len_sq;
    let t = if t.is_negative() {
        Q::zero()
    } else if t > Q::one() {
        Q::one()
    } else {
        t
    };
    let proj = a.add(&ab.scale(&t));
    proj.dist_sq(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(x: (i64, i64), y: (i64, i64)) -> Point {
        Point(vec![Q::ratio(x.0, x.1), Q::ratio(y.0, y.1)])
    }

    fn unit_square() -> ConvexPolygon {
        ConvexPolygon::new(vec![
            pt((0, 1), (0, 1)),
            pt((1, 1), (0, 1)),
            pt((1, 1), (1, 1)),
            pt((0, 1), (1, 1)),
        ])
        .unwrap()
    }

    #[test]
    fn canonical_form_is_orientation_independent() {
        let a = unit_square();
        let b = ConvexPolygon::new(vec![
            pt((0, 1), (1, 1)),
            pt((1, 1), (1, 1)),
            pt((1, 1), (0, 1)),
            pt((0, 1), (0, 1)),
        ])
        .unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn clipping_halves_the_square() {
        let sq = unit_square();
        // x <= 1/2
        let hp = HalfPlane {
            normal: pt((1, 1), (0, 1)),
            offset: Q::ratio(1, 2),
        };
        let clipped = sq.clip(&hp).unwrap();
        assert!(clipped.contains_closed(&pt((1, 2), (1, 2))));
        assert!(!clipped.contains_closed(&pt((3, 4), (1, 2))));
        assert_eq!(clipped.vertices.len(), 4);
    }

    #[test]
    fn clip_to_empty() {
        let sq = unit_square();
        let hp = HalfPlane {
            normal: pt((1, 1), (0, 1)),
            offset: Q::from_int(-1),
        };
        assert!(sq.clip(&hp).is_none());
    }

    #[test]
    fn point_distance_and_diameter() {
        let sq = unit_square();
        assert_eq!(sq.dist_sq_to_point(&pt((1, 2), (1, 2))), Q::zero());
        assert_eq!(sq.dist_sq_to_point(&pt((2, 1), (0, 1))), Q::one());
        assert_eq!(sq.dist_sq_to_point(&pt((2, 1), (2, 1))), Q::from_int(2));
        assert_eq!(sq.diameter_sq(), Q::from_int(2));
        assert_eq!(sq.vertex_centroid(), pt((1, 2), (1, 2)));
    }

    #[test]
    fn disjointness_allows_shared_edges() {
        let a = unit_square();
        let b = ConvexPolygon::new(vec![
            pt((1, 1), (0, 1)),
            pt((2, 1), (0, 1)),
            pt((2, 1), (1, 1)),
            pt((1, 1), (1, 1)),
        ])
        .unwrap();
        assert!(a.open_disjoint_from(&b));
        let c = ConvexPolygon::new(vec![
            pt((1, 2), (0, 1)),
            pt((3, 2), (0, 1)),
            pt((3, 2), (1, 1)),
            pt((1, 2), (1, 1)),
        ])
        .unwrap();
        assert!(!a.open_disjoint_from(&c));
    }

    #[test]
    fn bisector_half_plane() {
        let hp = HalfPlane::bisector_toward(&pt((0, 1), (0, 1)), &pt((1, 1), (0, 1)));
        assert!(hp.contains(&pt((1, 4), (0, 1))));
        assert!(hp.contains(&pt((1, 2), (5, 1)))); // boundary
        assert!(!hp.contains(&pt((3, 4), (0, 1))));
    }
}
