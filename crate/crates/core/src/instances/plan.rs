//! Plans: tuples of isometry sets, treated as an abstract pattern over the
//! isometry group itself (a product of power spaces of the group). Cutting
//! uses balls in the group metric; the action is left multiplication.

use crate::error::{Error, Result};
use crate::geometry::{Isometry, Point, Window};
use crate::lattice::Lattice;
use crate::num::Q;
use crate::rep::{Component, Rep};
use serde::{Deserialize, Serialize};

impl Component for Isometry {
    fn anchor(&self) -> Point {
        self.translation.clone()
    }
    fn translated(&self, v: &Point) -> Isometry {
        Isometry {
            translation: self.translation.add(v),
            rotation: self.rotation.clone(),
        }
    }
    fn radius_sq_bound(&self) -> Q {
        Q::zero()
    }
}

/// One entry of a plan: a finite or lattice-periodic set of isometries
/// (periodicity translates the translation part, fixing the rotation part).
pub type IsoSet = Rep<Isometry>;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct PlanPayload {
    pub entries: Vec<IsoSet>,
}

impl PlanPayload {
    pub fn new(entries: Vec<IsoSet>) -> PlanPayload {
        PlanPayload { entries }.canonical()
    }

    pub fn canonical(mut self) -> PlanPayload {
        self.entries = self.entries.into_iter().map(Rep::canonical).collect();
        // The unique zero plan is the empty tuple.
        if self.entries.iter().all(Rep::is_empty) {
            self.entries.clear();
        }
        self
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn validate(&self) -> Result<()> {
        // Anchor points across all entries must be pairwise disjoint: one
        // anchor belongs to exactly one placed component.
        let mut anchors: Vec<(usize, Point)> = Vec::new();
        for (i, e) in self.entries.iter().enumerate() {
            for iso in e.motif() {
                anchors.push((i, iso.translation.clone()));
            }
        }
        for (k, (i, a)) in anchors.iter().enumerate() {
            for (j, b) in &anchors[k + 1..] {
                if i != j && a == b {
                    return Err(Error::InvalidPayload(
                        "plan entries share an anchor point".into(),
                    ));
                }
            }
        }
        // Periodic entries with shared anchor points across lattice translates.
        for (i, e) in self.entries.iter().enumerate() {
            for (j, f) in self.entries.iter().enumerate() {
                if i >= j {
                    continue;
                }
                if let (Some(la), Some(_lb)) = (e.lattice(), f.lattice()) {
                    let la = la.clone();
                    for iso in e.motif() {
                        for other in f.motif() {
                            let diff = other.translation.sub(&iso.translation);
                            if la.contains(&diff) && f.lattice().unwrap().contains(&diff) {
                                return Err(Error::InvalidPayload(
                                    "plan entries share an anchor orbit".into(),
                                ));
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Cut each entry by a group window.
    pub fn cut(&self, w: &Window) -> Result<PlanPayload> {
        let entries = self
            .entries
            .iter()
            .map(|e| cut_iso_set(e, w))
            .collect::<Result<Vec<_>>>()?;
        Ok(PlanPayload { entries }.canonical_preserving_arity(self.entries.len()))
    }

    /// Keeps the tuple arity unless every entry is empty (the zero plan).
    fn canonical_preserving_arity(mut self, arity: usize) -> PlanPayload {
        self.entries = self.entries.into_iter().map(Rep::canonical).collect();
        if self.entries.iter().all(Rep::is_empty) {
            self.entries.clear();
        } else {
            debug_assert_eq!(self.entries.len(), arity);
        }
        self
    }

    /// Left multiplication by g on every entry.
    pub fn act(&self, g: &Isometry) -> PlanPayload {
        let entries = self
            .entries
            .iter()
            .map(|e| act_iso_set(e, g))
            .collect::<Vec<_>>();
        PlanPayload { entries }.canonical_preserving_arity(self.entries.len())
    }

    pub fn support_contains(&self, g: &Isometry) -> bool {
        self.entries.iter().any(|e| e.contains_component(g))
    }

    /// All anchor isometries within the group ball, across entries.
    pub fn members_near(&self, center: &Isometry, radius: &Q) -> Vec<(usize, Isometry)> {
        let mut out = Vec::new();
        for (i, e) in self.entries.iter().enumerate() {
            for iso in iso_set_near(e, center, radius) {
                out.push((i, iso));
            }
        }
        out.sort();
        out
    }
}

/// Isometries of the set within Euclidean distance `radius` of the center's
/// translation part (a superset of any group ball of that radius).
pub fn iso_set_near(set: &IsoSet, center: &Isometry, radius: &Q) -> Vec<Isometry> {
    match set {
        Rep::Finite(v) => v
            .iter()
            .filter(|iso| iso.translation.dist_sq(&center.translation) <= radius.square())
            .cloned()
            .collect(),
        Rep::Periodic { lattice, motif } => {
            let mut out = Vec::new();
            for m in motif {
                for l in lattice.points_in_ball(
                    &center.translation.sub(&m.translation),
                    radius,
                ) {
                    out.push(m.translated(&l));
                }
            }
            out.sort();
            out
        }
    }
}

pub fn cut_iso_set(set: &IsoSet, w: &Window) -> Result<IsoSet> {
    Ok(match w {
        Window::All => set.clone(),
        Window::Empty => Rep::empty(),
        Window::GroupBalls(balls) => {
            let b0 = &balls[0];
            // Translation distance never exceeds the group metric.
            let near = iso_set_near(set, &b0.center, &b0.radius);
            Rep::Finite(
                near.into_iter()
                    .filter(|iso| w.contains_isometry(iso))
                    .collect(),
            )
            .canonical()
        }
        Window::Balls(_) => {
            return Err(Error::Unsupported(
                "plans live over the isometry group; cut them with group balls".into(),
            ))
        }
    })
}

pub fn act_iso_set(set: &IsoSet, g: &Isometry) -> IsoSet {
    match set {
        Rep::Finite(v) => Rep::Finite(v.iter().map(|iso| g.compose(iso)).collect()).canonical(),
        Rep::Periodic { lattice, motif } => {
            let basis: Vec<Point> = lattice
                .basis()
                .iter()
                .map(|b| g.rotation.apply(b))
                .collect();
            Rep::Periodic {
                lattice: Lattice::from_generators(g.dim(), &basis).expect("rotated basis spans"),
                motif: motif.iter().map(|iso| g.compose(iso)).collect(),
            }
            .canonical()
        }
    }
}

/// g P subset relation for entries.
pub fn iso_set_subset(a: &IsoSet, b: &IsoSet) -> bool {
    a.subset_of(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::PointGroupElement;

    fn trans1(n: i64, d: i64) -> Isometry {
        Isometry::translate(Point(vec![Q::ratio(n, d)]))
    }

    fn z_entry() -> IsoSet {
        Rep::Periodic {
            lattice: Lattice::from_generators(1, &[Point(vec![Q::one()])]).unwrap(),
            motif: vec![Isometry::identity(1)],
        }
        .canonical()
    }

    #[test]
    fn cut_by_group_ball() {
        let plan = PlanPayload::new(vec![z_entry()]);
        let w = Window::group_ball(Isometry::identity(1), Q::ratio(5, 2));
        let cut = plan.cut(&w).unwrap();
        assert_eq!(cut.entries[0].motif().len(), 5); // translations by -2..=2
    }

    #[test]
    fn left_action_translates_entries() {
        let plan = PlanPayload::new(vec![z_entry()]);
        let moved = plan.act(&trans1(1, 2));
        assert!(moved.support_contains(&trans1(3, 2)));
        assert!(!moved.support_contains(&trans1(1, 1)));
        // Lattice translations stabilize the integer plan.
        assert_eq!(plan.act(&trans1(1, 1)), plan);
    }

    #[test]
    fn rotation_entries_are_distinct_members() {
        let refl = Isometry::new(Point(vec![Q::zero()]), PointGroupElement::minus_identity(1));
        let e: IsoSet = Rep::Finite(vec![Isometry::identity(1), refl.clone()]).canonical();
        assert!(e.contains_component(&refl));
        let w = Window::group_ball(Isometry::identity(1), Q::one());
        let cut = cut_iso_set(&e, &w).unwrap();
        // The reflection sits at group distance |I - (-I)|_F = 2 > 1.
        assert_eq!(cut.motif(), &[Isometry::identity(1)]);
    }
}
