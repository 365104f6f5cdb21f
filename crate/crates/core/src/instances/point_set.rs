//! Point-set payloads: finite or lattice-periodic subsets of R^d, uniformly
//! discrete by construction (distinct points, exact minimum separation).

use crate::error::{Error, Result};
use crate::geometry::{Ball, Isometry, Point, Window};
use crate::lattice::Lattice;
use crate::num::Q;
use crate::rep::Rep;
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct PointSetPayload {
    pub rep: Rep<Point>,
    /// Declared bounded extent for finite sets that stand in for a Delone set
    /// on a region (used by Delone-parameter extraction).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub extent: Option<Ball>,
}

impl PointSetPayload {
    pub fn finite(points: Vec<Point>) -> PointSetPayload {
        PointSetPayload {
            rep: Rep::Finite(points).canonical(),
            extent: None,
        }
    }

    pub fn periodic(lattice: Lattice, motif: Vec<Point>) -> PointSetPayload {
        PointSetPayload {
            rep: Rep::Periodic { lattice, motif }.canonical(),
            extent: None,
        }
    }

    pub fn integer_lattice(dim: usize) -> PointSetPayload {
        let basis: Vec<Point> = (0..dim)
            .map(|i| {
                Point(
                    (0..dim)
                        .map(|j| if i == j { Q::one() } else { Q::zero() })
                        .collect(),
                )
            })
            .collect();
        PointSetPayload::periodic(
            Lattice::from_generators(dim, &basis).expect("unit basis spans"),
            vec![Point::origin(dim)],
        )
    }

    pub fn canonical(mut self) -> PointSetPayload {
        self.rep = self.rep.canonical();
        self
    }

    pub fn validate(&self) -> Result<()> {
        // Canonical reps carry no duplicates; check separation is positive.
        if let Some(min) = self.rep.min_anchor_dist_sq() {
            if min.is_zero() {
                return Err(Error::InvalidPayload("duplicate points".into()));
            }
        }
        Ok(())
    }

    /// Squared minimum pairwise separation; 0 only for degenerate payloads,
    /// None for fewer than two points.
    pub fn min_sep_sq(&self) -> Option<Q> {
        self.rep.min_anchor_dist_sq()
    }

    pub fn contains(&self, x: &Point) -> bool {
        self.rep.contains_component(x)
    }

    pub fn cut(&self, w: &Window) -> Result<PointSetPayload> {
        let rep = match w {
            Window::All => self.rep.clone(),
            Window::Empty => Rep::empty(),
            Window::Balls(balls) => {
                let b0 = &balls[0];
                let near = self.rep.components_near(&b0.center, &b0.radius);
                Rep::Finite(
                    near.into_iter()
                        .filter(|p| w.contains_point(p))
                        .collect(),
                )
            }
            Window::GroupBalls(_) => {
                return Err(Error::Unsupported(
                    "point sets live over Euclidean space, not the group".into(),
                ))
            }
        };
        Ok(PointSetPayload {
            rep: rep.canonical(),
            extent: self.extent.clone(),
        })
    }

    pub fn act(&self, g: &Isometry) -> PointSetPayload {
        let rep = match &self.rep {
            Rep::Finite(v) => Rep::Finite(v.iter().map(|p| g.apply(p)).collect()),
            Rep::Periodic { lattice, motif } => {
                let basis: Vec<Point> = lattice
                    .basis()
                    .iter()
                    .map(|b| g.rotation.apply(b))
                    .collect();
                Rep::Periodic {
                    lattice: Lattice::from_generators(g.dim(), &basis)
                        .expect("rotated basis spans"),
                    motif: motif.iter().map(|p| g.apply(p)).collect(),
                }
            }
        };
        PointSetPayload {
            rep: rep.canonical(),
            extent: self
                .extent
                .as_ref()
                .map(|b| Ball::new(g.apply(&b.center), b.radius.clone())),
        }
    }

    /// Support membership: for point sets the support is the set itself.
    pub fn support_contains(&self, x: &Point) -> bool {
        self.contains(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt1(n: i64, d: i64) -> Point {
        Point(vec![Q::ratio(n, d)])
    }

    #[test]
    fn integer_lattice_cut_by_ball() {
        let z = PointSetPayload::integer_lattice(1);
        let cut = z.cut(&Window::ball(pt1(0, 1), Q::ratio(5, 2))).unwrap();
        let pts: Vec<Point> = (-2..=2).map(|n| pt1(n, 1)).collect();
        assert_eq!(cut, PointSetPayload::finite(pts));
    }

    #[test]
    fn fifth_shift_separation() {
        let lat = Lattice::from_generators(1, &[pt1(1, 1)]).unwrap();
        let d = PointSetPayload::periodic(lat, vec![pt1(1, 5), pt1(-1, 5)]);
        assert_eq!(d.min_sep_sq().unwrap(), Q::ratio(4, 25));
        assert!(d.contains(&pt1(6, 5)));
        assert!(!d.contains(&pt1(1, 2)));
    }
}
