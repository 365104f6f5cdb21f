//! Map patterns: vector-valued functions on R^d represented as placed
//! radial atoms with optional clipping windows, evaluated exactly.
//!
//! A placement denotes the function that equals its atom profile inside
//! `clip` and the zero vector elsewhere. Cutting accumulates clip balls;
//! canonicalization drops redundant clips (balls containing the whole atom
//! support) and zero placements (clips disjoint from the support, or tangent
//! where the atom vanishes).

use crate::error::{Error, Result};
use crate::geometry::{Ball, GroupSpec, Isometry, Mat, Point, PointGroupElement, Window};
use crate::lattice::Lattice;
use crate::num::{Q, Value};
use crate::rep::{Component, Rep};
use serde::{Deserialize, Serialize};

/// Rational representation of the point group on value vectors.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Representation {
    pub dimension: usize,
    pub table: Vec<(PointGroupElement, Mat)>,
}

impl Representation {
    pub fn trivial(group: &GroupSpec, dimension: usize) -> Representation {
        Representation {
            dimension,
            table: group
                .point_group
                .iter()
                .map(|g| (g.clone(), Mat::identity(dimension)))
                .collect(),
        }
    }

    /// One-dimensional sign representation by determinant.
    pub fn determinant_sign(group: &GroupSpec) -> Representation {
        Representation {
            dimension: 1,
            table: group
                .point_group
                .iter()
                .map(|g| (g.clone(), Mat(vec![vec![g.0.det()]])))
                .collect(),
        }
    }

    pub fn matrix_for(&self, g: &PointGroupElement) -> Result<&Mat> {
        self.table
            .iter()
            .find(|(h, _)| h == g)
            .map(|(_, m)| m)
            .ok_or(Error::RotationOutsideGroup)
    }

    /// Checks the homomorphism property on all pairs and invertibility.
    pub fn validate(&self, group: &GroupSpec) -> Result<()> {
        for g in &group.point_group {
            self.matrix_for(g)?;
        }
        for (g, m) in &self.table {
            if m.dim() != self.dimension {
                return Err(Error::InvalidPayload("representation dimension".into()));
            }
            if m.inverse().is_none() {
                return Err(Error::InvalidPayload(
                    "representation matrix is singular".into(),
                ));
            }
            if g.is_identity() && !m.is_identity() {
                return Err(Error::InvalidPayload(
                    "identity must map to the identity matrix".into(),
                ));
            }
        }
        for (g, mg) in &self.table {
            for (h, mh) in &self.table {
                let gh = g.compose(h);
                let expected = mg.mul(mh);
                if self.matrix_for(&gh)? != &expected {
                    return Err(Error::InvalidPayload(
                        "representation is not a homomorphism".into(),
                    ));
                }
            }
        }
        Ok(())
    }

    /// A nonzero rational vector fixed by every matrix, if one exists.
    pub fn fixed_vector(&self) -> Option<Vec<Q>> {
        let m = self.dimension;
        // Solve (phi(g) - I) v = 0 for all g simultaneously by Gaussian
        // elimination on the stacked system.
        let mut rows: Vec<Vec<Q>> = Vec::new();
        for (_, mat) in &self.table {
            for i in 0..m {
                let mut row = mat.0[i].clone();
                row[i] = &row[i] - &Q::one();
                if row.iter().any(|c| !c.is_zero()) {
                    rows.push(row);
                }
            }
        }
        // Reduce.
        let mut pivots: Vec<usize> = Vec::new();
        let mut reduced: Vec<Vec<Q>> = Vec::new();
        for row in rows {
            let mut r = row;
            for (p, pr) in pivots.iter().zip(&reduced) {
                if !r[*p].is_zero() {
                    let f = r[*p].clone();
                    for j in 0..m {
                        r[j] = &r[j] - &(&f * &pr[j]);
                    }
                }
            }
            if let Some(p) = (0..m).find(|&j| !r[j].is_zero()) {
                let lead = r[p].clone();
                for c in r.iter_mut() {
                    *c = &*c / &lead;
                }
                pivots.push(p);
                reduced.push(r);
            }
        }
        let free = (0..m).find(|j| !pivots.contains(j))?;
        // Back-substitute with the free variable set to 1.
        let mut v = vec![Q::zero(); m];
        v[free] = Q::one();
        // Solve in reverse pivot order.
        let mut order: Vec<usize> = (0..pivots.len()).collect();
        order.sort_by_key(|&i| std::cmp::Reverse(pivots[i]));
        for i in order {
            let p = pivots[i];
            let mut acc = Q::zero();
            for j in 0..m {
                if j != p {
                    acc = acc + &reduced[i][j] * &v[j];
                }
            }
            v[p] = -acc;
        }
        Some(v)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Profile {
    /// Radial piecewise-linear bump: v * max(0, 1 - |x-c|/r); peak v at c.
    Tent,
    /// Smooth bump v * exp(-1/(r^2 - |x-c|^2)) inside |x-c| < r, 0 outside.
    Exp,
    /// v on the closed ball B(c, r).
    Indicator,
    /// v at the single point c.
    Kronecker,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct AtomSpec {
    pub profile: Profile,
    pub radius: Q,
    pub value: Vec<Q>,
}

impl AtomSpec {
    pub fn tent(radius: Q, value: Vec<Q>) -> AtomSpec {
        AtomSpec {
            profile: Profile::Tent,
            radius,
            value,
        }
    }

    pub fn exp(radius: Q, value: Vec<Q>) -> AtomSpec {
        AtomSpec {
            profile: Profile::Exp,
            radius,
            value,
        }
    }

    pub fn kronecker(value: Vec<Q>) -> AtomSpec {
        AtomSpec {
            profile: Profile::Kronecker,
            radius: Q::zero(),
            value,
        }
    }

    pub fn indicator(radius: Q, value: Vec<Q>) -> AtomSpec {
        AtomSpec {
            profile: Profile::Indicator,
            radius,
            value,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.value.iter().all(Q::is_zero) {
            return Err(Error::InvalidPayload("atom with zero value".into()));
        }
        match self.profile {
            Profile::Kronecker => {
                if !self.radius.is_zero() {
                    return Err(Error::InvalidPayload(
                        "kronecker atoms have radius zero".into(),
                    ));
                }
            }
            _ => {
                if !self.radius.is_positive() {
                    return Err(Error::InvalidPayload("atom needs positive radius".into()));
                }
            }
        }
        Ok(())
    }

    /// Does the atom vanish on the boundary sphere of its support ball?
    fn vanishes_at_boundary(&self) -> bool {
        matches!(self.profile, Profile::Tent | Profile::Exp)
    }

    /// Value at squared distance s from the center (ignoring clips).
    fn eval_at_dist_sq(&self, s: &Q) -> Value {
        let m = self.value.len();
        let r_sq = self.radius.square();
        match self.profile {
            Profile::Tent => {
                if *s >= r_sq {
                    Value::zero(m)
                } else {
                    // v * (1 - sqrt(s)/r)
                    let b: Vec<Q> = self.value.iter().map(|v| -(v / &self.radius)).collect();
                    Value::quad(self.value.clone(), b, s.clone())
                }
            }
            Profile::Exp => {
                if *s >= r_sq {
                    Value::zero(m)
                } else {
                    let inner = -(&r_sq - s).recip();
                    Value::exp(self.value.clone(), inner)
                }
            }
            Profile::Indicator => {
                if *s <= r_sq {
                    Value::Rat(self.value.clone())
                } else {
                    Value::zero(m)
                }
            }
            Profile::Kronecker => {
                if s.is_zero() {
                    Value::Rat(self.value.clone())
                } else {
                    Value::zero(m)
                }
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Placement {
    pub center: Point,
    pub atom: AtomSpec,
    #[serde(default = "window_all", skip_serializing_if = "Window::is_all")]
    pub clip: Window,
}

fn window_all() -> Window {
    Window::All
}

impl Placement {
    pub fn new(center: Point, atom: AtomSpec) -> Placement {
        Placement {
            center,
            atom,
            clip: Window::All,
        }
    }

    /// Normalizes the clip against the atom support ball; None when the
    /// clipped placement denotes the zero function.
    fn normalized(mut self) -> Option<Placement> {
        let support = Ball::new(self.center.clone(), self.atom.radius.clone());
        match self.clip.clone().canonical() {
            Window::All => {
                self.clip = Window::All;
                Some(self)
            }
            Window::Empty => None,
            Window::GroupBalls(_) => None,
            Window::Balls(balls) => {
                let mut kept = Vec::new();
                for b in balls {
                    if support.subset_of(&b) {
                        continue; // redundant clip
                    }
                    if support.disjoint_from(&b) {
                        return None; // clipped away entirely
                    }
                    let sum = &support.radius + &b.radius;
                    if support.center.dist_sq(&b.center) == sum.square() {
                        // Tangent contact: the visible set is one point on the
                        // support sphere where vanishing atoms are zero.
                        if self.atom.vanishes_at_boundary() {
                            return None;
                        }
                    }
                    kept.push(b);
                }
                self.clip = Window::Balls(kept).canonical();
                Some(self)
            }
        }
    }

    pub fn eval(&self, x: &Point) -> Value {
        let m = self.atom.value.len();
        if !self.clip.contains_point(x) {
            return Value::zero(m);
        }
        self.atom.eval_at_dist_sq(&self.center.dist_sq(x))
    }

    /// Membership of x in the support of the clipped placement
    /// (sound over-approximation on clip boundaries is avoided by exactness).
    pub fn support_contains(&self, x: &Point) -> bool {
        if !self.clip.contains_point(x) {
            return false;
        }
        x.dist_sq(&self.center) <= self.atom.radius.square()
    }

    fn transformed(&self, g: &Isometry, phi: Option<&Representation>) -> Result<Placement> {
        let value = match phi {
            None => self.atom.value.clone(),
            Some(rep) => {
                let m = rep.matrix_for(&g.rotation)?;
                match Value::Rat(self.atom.value.clone()).linear_map(&m.0) {
                    Value::Rat(v) => v,
                    _ => unreachable!("rational matrix on rational vector"),
                }
            }
        };
        Ok(Placement {
            center: g.apply(&self.center),
            atom: AtomSpec {
                profile: self.atom.profile,
                radius: self.atom.radius.clone(),
                value,
            },
            clip: self.clip.transform(g),
        })
    }
}

impl Component for Placement {
    fn anchor(&self) -> Point {
        self.center.clone()
    }

    fn translated(&self, v: &Point) -> Placement {
        Placement {
            center: self.center.add(v),
            atom: self.atom.clone(),
            clip: self.clip.transform(&Isometry::translate(v.clone())),
        }
    }

    fn radius_sq_bound(&self) -> Q {
        self.atom.radius.square()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct MapPayload {
    /// Value dimension m (the target is C^m restricted to rational vectors).
    pub value_dim: usize,
    pub placements: Rep<Placement>,
    /// Twisting representation of the point group; None acts untwisted.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi: Option<Representation>,
}

impl MapPayload {
    pub fn finite(value_dim: usize, placements: Vec<Placement>) -> MapPayload {
        MapPayload {
            value_dim,
            placements: Rep::Finite(
                placements
                    .into_iter()
                    .filter_map(Placement::normalized)
                    .collect(),
            )
            .canonical(),
            phi: None,
        }
    }

    pub fn periodic(value_dim: usize, lattice: Lattice, motif: Vec<Placement>) -> MapPayload {
        MapPayload {
            value_dim,
            placements: Rep::Periodic {
                lattice,
                motif: motif
                    .into_iter()
                    .filter_map(Placement::normalized)
                    .collect(),
            }
            .canonical(),
            phi: None,
        }
    }

    pub fn with_representation(mut self, phi: Representation) -> MapPayload {
        self.phi = Some(phi);
        self
    }

    pub fn zero(value_dim: usize) -> MapPayload {
        MapPayload {
            value_dim,
            placements: Rep::empty(),
            phi: None,
        }
    }

    pub fn canonical(mut self) -> MapPayload {
        let placements = match self.placements {
            Rep::Finite(v) => {
                Rep::Finite(v.into_iter().filter_map(Placement::normalized).collect())
            }
            Rep::Periodic { lattice, motif } => Rep::Periodic {
                lattice,
                motif: motif
                    .into_iter()
                    .filter_map(Placement::normalized)
                    .collect(),
            },
        };
        self.placements = placements.canonical();
        self
    }

    pub fn validate(&self) -> Result<()> {
        for p in self.placements.motif() {
            p.atom.validate()?;
            if p.atom.value.len() != self.value_dim {
                return Err(Error::InvalidPayload("value dimension mismatch".into()));
            }
        }
        // Pairwise compatibility of placements: equal, support-disjoint, or
        // agreeing at a tangency point; overlaps of constant atoms with equal
        // values are also fine.
        let motif = self.placements.motif();
        let reach = crate::num::sqrt_ceil(&self.placements.max_component_radius_sq())
            * Q::from_int(2)
            + Q::one();
        for a in motif {
            let near = self.placements.components_near(&a.center, &reach);
            for b in &near {
                if a == b {
                    continue;
                }
                if !placements_compatible(a, b) {
                    return Err(Error::InvalidPayload(format!(
                        "placements at {:?} and {:?} disagree on their overlap",
                        a.center, b.center
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn eval(&self, x: &Point) -> Value {
        let reach = crate::num::sqrt_ceil(&self.placements.max_component_radius_sq()) + Q::one();
        for p in self.placements.components_near(x, &reach) {
            let v = p.eval(x);
            if !v.is_zero() {
                return v;
            }
        }
        Value::zero(self.value_dim)
    }

    pub fn cut(&self, w: &Window) -> Result<MapPayload> {
        let placements = match w {
            Window::All => self.placements.clone(),
            Window::Empty => Rep::empty(),
            Window::Balls(balls) => {
                let b0 = &balls[0];
                let margin = crate::num::sqrt_ceil(&self.placements.max_component_radius_sq());
                let near = self
                    .placements
                    .components_near(&b0.center, &(&b0.radius + &margin));
                Rep::Finite(
                    near.into_iter()
                        .filter_map(|mut p| {
                            p.clip = p.clip.intersect(w).ok()?;
                            p.normalized()
                        })
                        .collect(),
                )
            }
            Window::GroupBalls(_) => {
                return Err(Error::Unsupported(
                    "maps live over Euclidean space, not the group".into(),
                ))
            }
        };
        Ok(MapPayload {
            value_dim: self.value_dim,
            placements: placements.canonical(),
            phi: self.phi.clone(),
        })
    }

    pub fn act(&self, g: &Isometry) -> Result<MapPayload> {
        let phi = self.phi.as_ref();
        let placements = match &self.placements {
            Rep::Finite(v) => Rep::Finite(
                v.iter()
                    .map(|p| p.transformed(g, phi))
                    .collect::<Result<Vec<_>>>()?,
            ),
            Rep::Periodic { lattice, motif } => {
                let basis: Vec<Point> = lattice
                    .basis()
                    .iter()
                    .map(|b| g.rotation.apply(b))
                    .collect();
                Rep::Periodic {
                    lattice: Lattice::from_generators(g.dim(), &basis)
                        .expect("rotated basis spans"),
                    motif: motif
                        .iter()
                        .map(|p| p.transformed(g, phi))
                        .collect::<Result<Vec<_>>>()?,
                }
            }
        };
        Ok(MapPayload {
            value_dim: self.value_dim,
            placements: placements.canonical(),
            phi: self.phi.clone(),
        })
    }

    pub fn support_contains(&self, x: &Point) -> bool {
        let reach = crate::num::sqrt_ceil(&self.placements.max_component_radius_sq()) + Q::one();
        self.placements
            .components_near(x, &reach)
            .iter()
            .any(|p| p.support_contains(x))
    }
}

/// Decidable compatibility of two placed atoms: equality, support
/// disjointness, tangency with agreeing values, or constant atoms agreeing on
/// the whole overlap. Distinct non-constant atoms with open overlap disagree
/// somewhere and are rejected.
pub fn placements_compatible(a: &Placement, b: &Placement) -> bool {
    if a == b {
        return true;
    }
    let sa = Ball::new(a.center.clone(), a.atom.radius.clone());
    let sb = Ball::new(b.center.clone(), b.atom.radius.clone());
    if sa.disjoint_from(&sb) {
        return true;
    }
    let dist_sq = a.center.dist_sq(&b.center);
    let sum = &sa.radius + &sb.radius;
    if dist_sq == sum.square() {
        // Single tangency point; exact rational coordinates.
        if sum.is_zero() {
            // Two kronecker atoms at the same point.
            return a.atom.value == b.atom.value;
        }
        let t = &sa.radius / &sum;
        let touch = a.center.add(&b.center.sub(&a.center).scale(&t));
        return a.eval(&touch).eq_exact(&b.eval(&touch));
    }
    // Open overlap. Clips could make the visible parts disjoint, but we use
    // the sound support balls; constant atoms with equal values agree anyway.
    if a.atom.profile == Profile::Indicator
        && b.atom.profile == Profile::Indicator
        && a.atom.value == b.atom.value
        && a.clip.is_all()
        && b.clip.is_all()
    {
        return true;
    }
    // A kronecker atom inside another atom's support: compare at the point.
    if a.atom.profile == Profile::Kronecker {
        return a.eval(&a.center).eq_exact(&b.eval(&a.center));
    }
    if b.atom.profile == Profile::Kronecker {
        return a.eval(&b.center).eq_exact(&b.eval(&b.center));
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt1(n: i64, d: i64) -> Point {
        Point(vec![Q::ratio(n, d)])
    }

    #[test]
    fn tent_atom_evaluation() {
        let f = MapPayload::finite(
            1,
            vec![Placement::new(pt1(0, 1), AtomSpec::tent(Q::ratio(1, 4), vec![Q::one()]))],
        );
        assert!(f.eval(&pt1(0, 1)).eq_exact(&Value::Rat(vec![Q::one()])));
        assert!(f
            .eval(&pt1(1, 8))
            .eq_exact(&Value::Rat(vec![Q::ratio(1, 2)])));
        assert!(f.eval(&pt1(1, 4)).is_zero());
        assert!(f.eval(&pt1(5, 1)).is_zero());
    }

    #[test]
    fn exp_atom_vanishes_outside_and_is_symbolic_inside() {
        let f = MapPayload::finite(
            1,
            vec![Placement::new(pt1(0, 1), AtomSpec::exp(Q::one(), vec![Q::one()]))],
        );
        assert!(f.eval(&pt1(1, 1)).is_zero());
        assert!(f.eval(&pt1(2, 1)).is_zero());
        let at_zero = f.eval(&pt1(0, 1));
        assert!(at_zero.eq_exact(&Value::exp(vec![Q::one()], Q::from_int(-1))));
    }

    #[test]
    fn cut_then_uncut_is_identity_when_window_covers_support() {
        let f = MapPayload::finite(
            1,
            vec![Placement::new(pt1(0, 1), AtomSpec::tent(Q::one(), vec![Q::one()]))],
        );
        let cut = f.cut(&Window::ball(pt1(0, 1), Q::from_int(5))).unwrap();
        assert_eq!(f, cut);
        let clipped = f.cut(&Window::ball(pt1(1, 1), Q::ratio(1, 2))).unwrap();
        assert_ne!(f, clipped);
        assert!(clipped.eval(&pt1(3, 4)).eq_exact(&Value::Rat(vec![Q::ratio(1, 4)])));
        assert!(clipped.eval(&pt1(0, 1)).is_zero());
    }

    #[test]
    fn incompatible_overlap_is_rejected() {
        let a = Placement::new(pt1(0, 1), AtomSpec::tent(Q::one(), vec![Q::one()]));
        let b = Placement::new(pt1(1, 2), AtomSpec::tent(Q::one(), vec![Q::one()]));
        let f = MapPayload {
            value_dim: 1,
            placements: Rep::Finite(vec![a, b]),
            phi: None,
        };
        assert!(f.validate().is_err());

        // Tangent tents agree (both vanish at the touch point).
        let a = Placement::new(pt1(0, 1), AtomSpec::tent(Q::one(), vec![Q::one()]));
        let b = Placement::new(pt1(2, 1), AtomSpec::tent(Q::one(), vec![Q::from_int(3)]));
        let f = MapPayload {
            value_dim: 1,
            placements: Rep::Finite(vec![a, b]),
            phi: None,
        };
        f.validate().unwrap();
    }

    #[test]
    fn fixed_vector_of_sign_representation() {
        let group = GroupSpec::with_minus_identity(1);
        let phi = Representation::determinant_sign(&group);
        phi.validate(&group).unwrap();
        assert!(phi.fixed_vector().is_none());
        let triv = Representation::trivial(&group, 2);
        assert_eq!(triv.fixed_vector().unwrap().len(), 2);
    }
}
