//! Exact rational Euclidean geometry in dimension 1..=3: points, closed
//! balls, windows (finite intersections of closed balls), orthogonal matrices,
//! isometries and finite point groups, and the metric on the isometry group.

use crate::error::{Error, Result};
use crate::num::{sqrt_ceil, sqrt_leq, sqrt_sum_leq, Q};
use serde::{Deserialize, Serialize};
use std::fmt;

pub const MAX_DIM: usize = 3;
/// Cap on point-group closure computation; signed permutation groups in
/// d <= 3 have at most 48 elements.
const POINT_GROUP_CAP: usize = 64;

/// A point of R^d with exact rational coordinates.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Point(pub Vec<Q>);

impl Point {
    pub fn origin(dim: usize) -> Point {
        Point(vec![Q::zero(); dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn add(&self, other: &Point) -> Point {
        Point(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    pub fn sub(&self, other: &Point) -> Point {
        Point(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a - b)
                .collect(),
        )
    }

    pub fn neg(&self) -> Point {
        Point(self.0.iter().map(|a| -a).collect())
    }

    pub fn scale(&self, k: &Q) -> Point {
        Point(self.0.iter().map(|a| a * k).collect())
    }

    pub fn dot(&self, other: &Point) -> Q {
        self.0
            .iter()
            .zip(&other.0)
            .fold(Q::zero(), |acc, (a, b)| acc + a * b)
    }

    pub fn norm_sq(&self) -> Q {
        self.dot(self)
    }

    pub fn dist_sq(&self, other: &Point) -> Q {
        self.sub(other).norm_sq()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Q::is_zero)
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// Closed ball B(center, radius) = {y : rho(center, y) <= radius}.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Ball {
    pub center: Point,
    pub radius: Q,
}

impl Ball {
    pub fn new(center: Point, radius: Q) -> Ball {
        assert!(!radius.is_negative(), "ball radius must be nonnegative");
        Ball { center, radius }
    }

    pub fn contains(&self, x: &Point) -> bool {
        self.center.dist_sq(x) <= self.radius.square()
    }

    /// Closed-ball-in-closed-ball test, decided on squares.
    pub fn subset_of(&self, outer: &Ball) -> bool {
        let slack = &outer.radius - &self.radius;
        sqrt_leq(&self.center.dist_sq(&outer.center), &slack)
    }

    /// True iff the two closed balls are disjoint.
    pub fn disjoint_from(&self, other: &Ball) -> bool {
        let sum = &self.radius + &other.radius;
        self.center.dist_sq(&other.center) > sum.square()
    }
}

/// Closed ball in the isometry group under the (Frobenius-surrogate) metric
/// rho(a, b) + |A - B|_F.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct GroupBall {
    pub center: Isometry,
    pub radius: Q,
}

impl GroupBall {
    pub fn contains(&self, g: &Isometry) -> bool {
        let (trans_sq, rot_sq) = self.center.metric_sq(g);
        sqrt_sum_leq(&trans_sq, &rot_sq, &self.radius)
    }
}

/// A computable window: ALL, EMPTY, or a finite intersection of closed balls.
/// Plan-kind patterns live over the isometry group and use `GroupBalls`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Window {
    All,
    Empty,
    Balls(Vec<Ball>),
    GroupBalls(Vec<GroupBall>),
}

impl Window {
    pub fn ball(center: Point, radius: Q) -> Window {
        Window::Balls(vec![Ball::new(center, radius)])
    }

    pub fn group_ball(center: Isometry, radius: Q) -> Window {
        Window::GroupBalls(vec![GroupBall { center, radius }])
    }

    /// Canonical form: sorted, deduplicated ball list; an empty list is ALL.
    pub fn canonical(self) -> Window {
        match self {
            Window::Balls(mut bs) => {
                bs.sort();
                bs.dedup();
                if bs.is_empty() {
                    Window::All
                } else {
                    Window::Balls(bs)
                }
            }
            Window::GroupBalls(mut bs) => {
                bs.sort();
                bs.dedup();
                if bs.is_empty() {
                    Window::All
                } else {
                    Window::GroupBalls(bs)
                }
            }
            w => w,
        }
    }

    /// Intersection by list concatenation; EMPTY absorbs, ALL is the identity.
    pub fn intersect(&self, other: &Window) -> Result<Window> {
        Ok(match (self, other) {
            (Window::Empty, _) | (_, Window::Empty) => Window::Empty,
            (Window::All, w) | (w, Window::All) => w.clone(),
            (Window::Balls(a), Window::Balls(b)) => {
                Window::Balls(a.iter().chain(b).cloned().collect()).canonical()
            }
            (Window::GroupBalls(a), Window::GroupBalls(b)) => {
                Window::GroupBalls(a.iter().chain(b).cloned().collect()).canonical()
            }
            _ => {
                return Err(Error::Unsupported(
                    "cannot intersect a Euclidean window with a group window".into(),
                ))
            }
        })
    }

    pub fn contains_point(&self, x: &Point) -> bool {
        match self {
            Window::All => true,
            Window::Empty => false,
            Window::Balls(bs) => bs.iter().all(|b| b.contains(x)),
            Window::GroupBalls(_) => false,
        }
    }

    pub fn contains_isometry(&self, g: &Isometry) -> bool {
        match self {
            Window::All => true,
            Window::Empty => false,
            Window::GroupBalls(bs) => bs.iter().all(|b| b.contains(g)),
            Window::Balls(_) => false,
        }
    }

    /// True for ALL; bounded windows are ball intersections (possibly empty).
    pub fn is_all(&self) -> bool {
        matches!(self, Window::All)
    }

    pub fn is_empty_window(&self) -> bool {
        matches!(self, Window::Empty)
    }

    /// Image under an isometry; closed balls map to closed balls and the
    /// group metric is left-invariant.
    pub fn transform(&self, g: &Isometry) -> Window {
        match self {
            Window::All => Window::All,
            Window::Empty => Window::Empty,
            Window::Balls(bs) => Window::Balls(
                bs.iter()
                    .map(|b| Ball::new(g.apply(&b.center), b.radius.clone()))
                    .collect(),
            )
            .canonical(),
            Window::GroupBalls(bs) => Window::GroupBalls(
                bs.iter()
                    .map(|b| GroupBall {
                        center: g.compose(&b.center),
                        radius: b.radius.clone(),
                    })
                    .collect(),
            )
            .canonical(),
        }
    }
}

/// Square rational matrix, stored as rows.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Mat(pub Vec<Vec<Q>>);

impl Mat {
    pub fn identity(dim: usize) -> Mat {
        Mat((0..dim)
            .map(|i| {
                (0..dim)
                    .map(|j| if i == j { Q::one() } else { Q::zero() })
                    .collect()
            })
            .collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn is_identity(&self) -> bool {
        *self == Mat::identity(self.dim())
    }

    pub fn mul(&self, other: &Mat) -> Mat {
        let n = self.dim();
        Mat((0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        (0..n).fold(Q::zero(), |acc, k| acc + &self.0[i][k] * &other.0[k][j])
                    })
                    .collect()
            })
            .collect())
    }

    pub fn transpose(&self) -> Mat {
        let n = self.dim();
        Mat((0..n)
            .map(|i| (0..n).map(|j| self.0[j][i].clone()).collect())
            .collect())
    }

    pub fn apply(&self, x: &Point) -> Point {
        Point(
            self.0
                .iter()
                .map(|row| {
                    row.iter()
                        .zip(&x.0)
                        .fold(Q::zero(), |acc, (m, c)| acc + m * c)
                })
                .collect(),
        )
    }

    pub fn det(&self) -> Q {
        match self.dim() {
            1 => self.0[0][0].clone(),
            2 => &self.0[0][0] * &self.0[1][1] - &self.0[0][1] * &self.0[1][0],
            3 => {
                let m = &self.0;
                &m[0][0] * (&m[1][1] * &m[2][2] - &m[1][2] * &m[2][1])
                    - &m[0][1] * (&m[1][0] * &m[2][2] - &m[1][2] * &m[2][0])
                    + &m[0][2] * (&m[1][0] * &m[2][1] - &m[1][1] * &m[2][0])
            }
            n => panic!("unsupported dimension {n}"),
        }
    }

    /// Inverse via Gauss-Jordan elimination; None if singular.
    pub fn inverse(&self) -> Option<Mat> {
        let n = self.dim();
        let mut a: Vec<Vec<Q>> = self.0.clone();
        let mut inv = Mat::identity(n).0;
        for col in 0..n {
            let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
            a.swap(col, pivot);
            inv.swap(col, pivot);
            let p = a[col][col].clone();
            for j in 0..n {
                a[col][j] = &a[col][j] / &p;
                inv[col][j] = &inv[col][j] / &p;
            }
            for r in 0..n {
                if r != col && !a[r][col].is_zero() {
                    let f = a[r][col].clone();
                    for j in 0..n {
                        a[r][j] = &a[r][j] - &(&f * &a[col][j]);
                        inv[r][j] = &inv[r][j] - &(&f * &inv[col][j]);
                    }
                }
            }
        }
        Some(Mat(inv))
    }

    /// Squared Frobenius distance to another matrix.
    pub fn frobenius_dist_sq(&self, other: &Mat) -> Q {
        let mut acc = Q::zero();
        for (r1, r2) in self.0.iter().zip(&other.0) {
            for (a, b) in r1.iter().zip(r2) {
                acc += (a - b).square();
            }
        }
        acc
    }
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// Element of the point group: an exact rational orthogonal matrix.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct PointGroupElement(pub Mat);

impl PointGroupElement {
    pub fn identity(dim: usize) -> PointGroupElement {
        PointGroupElement(Mat::identity(dim))
    }

    pub fn new(m: Mat) -> Result<PointGroupElement> {
        let g = PointGroupElement(m);
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.0.dim();
        if n == 0 || n > MAX_DIM {
            return Err(Error::InvalidGroup(format!("unsupported dimension {n}")));
        }
        if self.0 .0.iter().any(|row| row.len() != n) {
            return Err(Error::InvalidGroup("matrix is not square".into()));
        }
        if !self.0.transpose().mul(&self.0).is_identity() {
            return Err(Error::InvalidGroup("matrix is not orthogonal".into()));
        }
        let det = self.0.det();
        if det != Q::one() && det != -Q::one() {
            return Err(Error::InvalidGroup("determinant must be +-1".into()));
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn apply(&self, x: &Point) -> Point {
        self.0.apply(x)
    }

    pub fn compose(&self, other: &PointGroupElement) -> PointGroupElement {
        PointGroupElement(self.0.mul(&other.0))
    }

    /// Orthogonal inverse = transpose.
    pub fn inverse(&self) -> PointGroupElement {
        PointGroupElement(self.0.transpose())
    }

    pub fn is_identity(&self) -> bool {
        self.0.is_identity()
    }

    /// Rotation by 90 degrees in d = 2.
    pub fn rot90() -> PointGroupElement {
        PointGroupElement(Mat(vec![
            vec![Q::zero(), Q::from_int(-1)],
            vec![Q::one(), Q::zero()],
        ]))
    }

    /// Point reflection -I in the given dimension.
    pub fn minus_identity(dim: usize) -> PointGroupElement {
        PointGroupElement(Mat((0..dim)
            .map(|i| {
                (0..dim)
                    .map(|j| if i == j { Q::from_int(-1) } else { Q::zero() })
                    .collect()
            })
            .collect()))
    }

    /// Reflection across the axis hyperplane that negates coordinate `k`.
    pub fn axis_reflection(dim: usize, k: usize) -> PointGroupElement {
        PointGroupElement(Mat((0..dim)
            .map(|i| {
                (0..dim)
                    .map(|j| {
                        if i == j {
                            if i == k {
                                Q::from_int(-1)
                            } else {
                                Q::one()
                            }
                        } else {
                            Q::zero()
                        }
                    })
                    .collect()
            })
            .collect()))
    }
}

impl fmt::Debug for PointGroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// Isometry (a, A): x -> A x + a.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Isometry {
    pub translation: Point,
    pub rotation: PointGroupElement,
}

impl Isometry {
    pub fn identity(dim: usize) -> Isometry {
        Isometry {
            translation: Point::origin(dim),
            rotation: PointGroupElement::identity(dim),
        }
    }

    pub fn translate(v: Point) -> Isometry {
        let dim = v.dim();
        Isometry {
            translation: v,
            rotation: PointGroupElement::identity(dim),
        }
    }

    pub fn new(translation: Point, rotation: PointGroupElement) -> Isometry {
        assert_eq!(translation.dim(), rotation.dim());
        Isometry {
            translation,
            rotation,
        }
    }

    pub fn dim(&self) -> usize {
        self.translation.dim()
    }

    pub fn is_identity(&self) -> bool {
        self.translation.is_zero() && self.rotation.is_identity()
    }

    pub fn is_translation(&self) -> bool {
        self.rotation.is_identity()
    }

    pub fn apply(&self, x: &Point) -> Point {
        self.rotation.apply(x).add(&self.translation)
    }

    /// (a, A) o (b, B) = (A b + a, A B).
    pub fn compose(&self, other: &Isometry) -> Isometry {
        Isometry {
            translation: self.rotation.apply(&other.translation).add(&self.translation),
            rotation: self.rotation.compose(&other.rotation),
        }
    }

    /// (a, A)^-1 = (-A^-1 a, A^-1).
    pub fn inverse(&self) -> Isometry {
        let rot_inv = self.rotation.inverse();
        Isometry {
            translation: rot_inv.apply(&self.translation).neg(),
            rotation: rot_inv,
        }
    }

    /// Squared translation distance and squared Frobenius rotation distance to
    /// another isometry. Comparisons against bounds are done on these squares.
    pub fn metric_sq(&self, other: &Isometry) -> (Q, Q) {
        (
            self.translation.dist_sq(&other.translation),
            self.rotation.0.frobenius_dist_sq(&other.rotation.0),
        )
    }
}

impl fmt::Debug for Isometry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?}, {:?})", self.translation, self.rotation)
    }
}

/// Rational upper bound on the rotation-part contribution 2*sqrt(d) to the
/// group metric (the Frobenius analogue of the constant 2 in the bound
/// rho(g 0, h 0) <= rho_Gamma(g, h) <= rho(g 0, h 0) + 2). Margins consume
/// this bound, so widening is sound.
pub fn rotation_metric_margin(dim: usize) -> Q {
    match dim {
        1 => Q::from_int(2),
        2 => Q::ratio(29, 10), // 2*sqrt(2) < 2.9
        3 => Q::ratio(7, 2),   // 2*sqrt(3) < 3.5
        _ => panic!("unsupported dimension"),
    }
}

/// Gamma = R^d x| G0 for a finite point group G0 given by exact rational
/// orthogonal matrices.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct GroupSpec {
    pub dimension: usize,
    pub point_group: Vec<PointGroupElement>,
}

impl GroupSpec {
    /// Translation-only group.
    pub fn translations(dim: usize) -> GroupSpec {
        GroupSpec {
            dimension: dim,
            point_group: vec![PointGroupElement::identity(dim)],
        }
    }

    /// Translations plus the point reflection -I.
    pub fn with_minus_identity(dim: usize) -> GroupSpec {
        GroupSpec {
            dimension: dim,
            point_group: vec![
                PointGroupElement::identity(dim),
                PointGroupElement::minus_identity(dim),
            ],
        }
    }

    /// Cyclic group generated by the 90-degree rotation (d = 2).
    pub fn rot4() -> GroupSpec {
        let r = PointGroupElement::rot90();
        GroupSpec {
            dimension: 2,
            point_group: vec![
                PointGroupElement::identity(2),
                r.clone(),
                r.compose(&r),
                r.compose(&r.compose(&r)),
            ],
        }
    }

    /// Full signed-permutation dihedral group of order 8 (d = 2).
    pub fn dihedral8() -> GroupSpec {
        let r = PointGroupElement::rot90();
        let m = PointGroupElement::axis_reflection(2, 1);
        let mut elems = vec![PointGroupElement::identity(2)];
        for k in 1..4 {
            let mut a = PointGroupElement::identity(2);
            for _ in 0..k {
                a = r.compose(&a);
            }
            elems.push(a);
        }
        let rots = elems.clone();
        for a in rots {
            elems.push(a.compose(&m));
        }
        GroupSpec {
            dimension: 2,
            point_group: elems,
        }
    }

    /// Builds the group generated by the given elements, rejecting generating
    /// sets whose closure exceeds the finite cap (such as rational rotations
    /// of infinite order).
    pub fn generated(dim: usize, generators: Vec<PointGroupElement>) -> Result<GroupSpec> {
        for g in &generators {
            g.validate()?;
            if g.dim() != dim {
                return Err(Error::DimensionMismatch(dim, g.dim()));
            }
        }
        let mut elems = vec![PointGroupElement::identity(dim)];
        // Breadth-first closure keeps word length (and hence coefficient
        // size) linear in the number of discovered elements before the cap
        // trips on infinite-order generators.
        let mut frontier: std::collections::VecDeque<PointGroupElement> =
            generators.into_iter().collect();
        while let Some(g) = frontier.pop_front() {
            if elems.contains(&g) {
                continue;
            }
            elems.push(g.clone());
            if elems.len() > POINT_GROUP_CAP {
                return Err(Error::InvalidGroup(
                    "point group closure exceeds the finite cap".into(),
                ));
            }
            frontier.push_back(g.inverse());
            let snapshot: Vec<_> = elems.clone();
            for h in snapshot {
                frontier.push_back(g.compose(&h));
                frontier.push_back(h.compose(&g));
            }
        }
        elems.sort();
        Ok(GroupSpec {
            dimension: dim,
            point_group: elems,
        })
    }

    pub fn validate(&self) -> Result<()> {
        if self.dimension == 0 || self.dimension > MAX_DIM {
            return Err(Error::InvalidGroup(format!(
                "unsupported dimension {}",
                self.dimension
            )));
        }
        if self.point_group.is_empty() {
            return Err(Error::InvalidGroup("empty point group".into()));
        }
        let id = PointGroupElement::identity(self.dimension);
        if !self.point_group.contains(&id) {
            return Err(Error::InvalidGroup("missing identity".into()));
        }
        for g in &self.point_group {
            g.validate()?;
            if g.dim() != self.dimension {
                return Err(Error::DimensionMismatch(self.dimension, g.dim()));
            }
            if !self.point_group.contains(&g.inverse()) {
                return Err(Error::InvalidGroup("not closed under inverse".into()));
            }
            for h in &self.point_group {
                if !self.point_group.contains(&g.compose(h)) {
                    return Err(Error::InvalidGroup("not closed under product".into()));
                }
            }
        }
        Ok(())
    }

    pub fn contains(&self, g: &PointGroupElement) -> bool {
        self.point_group.contains(g)
    }

    pub fn order(&self) -> usize {
        self.point_group.len()
    }
}

impl fmt::Debug for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "GroupSpec(d={}, |G0|={})",
            self.dimension,
            self.point_group.len()
        )
    }
}

/// A closed shape whose containment in a window is decidable exactly.
pub enum Region<'a> {
    Ball(&'a Ball),
    /// Convex hull of the listed vertices (d = 2 polygon, d = 1 segment).
    Hull(&'a [Point]),
}

/// True iff the closed region is a subset of the window. Convex hulls are
/// tested through their vertices, closed balls through center distance plus
/// radius, both in squared form.
pub fn region_contained_in_window(region: &Region, w: &Window) -> bool {
    match w {
        Window::All => true,
        Window::Empty => false,
        Window::GroupBalls(_) => false,
        Window::Balls(balls) => match region {
            Region::Ball(b) => balls.iter().all(|outer| b.subset_of(outer)),
            Region::Hull(vs) => balls
                .iter()
                .all(|outer| vs.iter().all(|v| outer.contains(v))),
        },
    }
}

/// Closed Euclidean ball enclosing the window, if it is bounded.
pub fn window_bounding_ball(w: &Window) -> Option<Ball> {
    match w {
        Window::Balls(bs) => bs.first().cloned(),
        Window::Empty => Some(Ball::new(Point::origin(1), Q::zero())),
        _ => None,
    }
}

/// A rational bound r such that the window is contained in B(center, r) for
/// the first ball's center; used to size enumeration boxes.
pub fn enumeration_bound(w: &Window) -> Option<(Point, Q)> {
    match w {
        Window::Balls(bs) => {
            let b = bs.first()?;
            Some((b.center.clone(), b.radius.clone()))
        }
        _ => None,
    }
}

/// Sound rational upper bound on the Euclidean norm of a point.
pub fn norm_upper_bound(p: &Point) -> Q {
    sqrt_ceil(&p.norm_sq())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(coords: &[i64]) -> Point {
        Point(coords.iter().map(|&c| Q::from_int(c)).collect())
    }

    #[test]
    fn isometry_algebra_examples() {
        // Pure translation moves the origin to the vector.
        let v = pt(&[3, -4]);
        let g = Isometry::translate(v.clone());
        assert_eq!(g.apply(&Point::origin(2)), v);

        // (rot90 about 0) composed with translate((1,0)) sends 0 to (0,1).
        let g = Isometry::new(Point::origin(2), PointGroupElement::rot90());
        let h = Isometry::translate(pt(&[1, 0]));
        assert_eq!(g.compose(&h).apply(&Point::origin(2)), pt(&[0, 1]));

        // The inverse of the point reflection about (1,2)... maps (1,2) to (0,0)?
        // gamma = ((1,2), -I): gamma^-1(x) = (1,2) - x, so gamma^-1((1,2)) = 0.
        let g = Isometry::new(pt(&[1, 2]), PointGroupElement::minus_identity(2));
        assert_eq!(g.inverse().apply(&pt(&[1, 2])), Point::origin(2));
        assert!(g.inverse().compose(&g).is_identity());
    }

    #[test]
    fn gamma_metric_squares() {
        let e = Isometry::identity(2);
        assert_eq!(e.metric_sq(&e), (Q::zero(), Q::zero()));

        let g = Isometry::translate(pt(&[3, 4]));
        assert_eq!(e.metric_sq(&g), (Q::from_int(25), Q::zero()));

        let m = Isometry::new(Point::origin(2), PointGroupElement::minus_identity(2));
        assert_eq!(e.metric_sq(&m), (Q::zero(), Q::from_int(8)));
    }

    #[test]
    fn window_intersection_semantics() {
        let b1 = Window::ball(pt(&[0, 0]), Q::one());
        assert_eq!(b1.intersect(&Window::All).unwrap(), b1);
        assert_eq!(b1.intersect(&Window::Empty).unwrap(), Window::Empty);

        // Disjoint balls: no sampled rational point is a member.
        let far = Window::ball(pt(&[3, 0]), Q::one());
        let inter = b1.intersect(&far).unwrap();
        for x in [pt(&[0, 0]), pt(&[1, 0]), pt(&[2, 0]), pt(&[3, 0])] {
            assert!(!inter.contains_point(&x));
        }

        // Overlapping balls contain (1/2, 0).
        let b2 = Window::ball(pt(&[0, 0]), Q::from_int(2));
        let b3 = Window::ball(pt(&[1, 0]), Q::from_int(2));
        let inter = b2.intersect(&b3).unwrap();
        assert!(inter.contains_point(&Point(vec![Q::ratio(1, 2), Q::zero()])));
    }

    #[test]
    fn window_intersect_commutes_and_associates_on_membership() {
        let w1 = Window::ball(pt(&[0, 0]), Q::from_int(2));
        let w2 = Window::ball(pt(&[1, 1]), Q::from_int(2));
        let w3 = Window::ball(pt(&[-1, 0]), Q::from_int(3));
        let a = w1.intersect(&w2).unwrap().intersect(&w3).unwrap();
        let b = w1.intersect(&w3.intersect(&w2).unwrap()).unwrap();
        for i in -3..=3 {
            for j in -3..=3 {
                let x = Point(vec![Q::ratio(i, 2), Q::ratio(j, 2)]);
                assert_eq!(a.contains_point(&x), b.contains_point(&x));
            }
        }
        assert_eq!(a, b);
    }

    #[test]
    fn region_containment_examples() {
        // Unit square inside B((1/2,1/2), 1): vertex distance^2 = 1/2 <= 1.
        let square = [pt(&[0, 0]), pt(&[1, 0]), pt(&[1, 1]), pt(&[0, 1])];
        let w = Window::ball(Point(vec![Q::ratio(1, 2), Q::ratio(1, 2)]), Q::one());
        assert!(region_contained_in_window(&Region::Hull(&square), &w));

        let b = Ball::new(pt(&[0, 0]), Q::one());
        let small = Window::ball(pt(&[0, 0]), Q::ratio(1, 2));
        assert!(!region_contained_in_window(&Region::Ball(&b), &small));
        assert!(region_contained_in_window(&Region::Ball(&b), &Window::All));
    }

    #[test]
    fn group_closure_and_validation() {
        assert!(GroupSpec::dihedral8().validate().is_ok());
        assert!(GroupSpec::rot4().validate().is_ok());
        assert!(GroupSpec::with_minus_identity(1).validate().is_ok());

        let gen = GroupSpec::generated(2, vec![PointGroupElement::rot90()]).unwrap();
        assert_eq!(gen.order(), 4);

        // The rational 3-4-5 rotation is orthogonal but generates an infinite
        // group; the closure cap rejects it.
        let m = Mat(vec![
            vec![Q::ratio(3, 5), Q::ratio(-4, 5)],
            vec![Q::ratio(4, 5), Q::ratio(3, 5)],
        ]);
        let g = PointGroupElement::new(m).unwrap();
        assert!(GroupSpec::generated(2, vec![g]).is_err());
    }

    #[test]
    fn isometries_preserve_squared_distances() {
        let g = Isometry::new(pt(&[2, -1]), PointGroupElement::rot90());
        let x = Point(vec![Q::ratio(1, 3), Q::ratio(-2, 7)]);
        let y = Point(vec![Q::ratio(5, 2), Q::ratio(1, 9)]);
        assert_eq!(g.apply(&x).dist_sq(&g.apply(&y)), x.dist_sq(&y));
    }

    #[test]
    fn translation_part_never_exceeds_full_group_metric() {
        // If sqrt(trans_sq) + sqrt(rot_sq) <= L then sqrt(trans_sq) <= L.
        let g = Isometry::new(pt(&[1, 2]), PointGroupElement::rot90());
        let e = Isometry::identity(2);
        let (t, r) = g.metric_sq(&e);
        let l = Q::from_int(6);
        assert!(sqrt_sum_leq(&t, &r, &l));
        assert!(sqrt_leq(&t, &l));
        let tight = Q::from_int(2);
        assert!(!sqrt_sum_leq(&t, &r, &tight));
    }
}
