//! Dirac combs: pure-point measures supported on a uniformly discrete set,
//! with nonzero rational weights.

use crate::error::{Error, Result};
use crate::geometry::{Isometry, Point, Window};
use crate::instances::point_set::PointSetPayload;
use crate::lattice::Lattice;
use crate::num::Q;
use crate::rep::{Component, Rep};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct WeightedPoint {
    pub point: Point,
    pub weight: Q,
}

impl Component for WeightedPoint {
    fn anchor(&self) -> Point {
        self.point.clone()
    }
    fn translated(&self, v: &Point) -> WeightedPoint {
        WeightedPoint {
            point: self.point.add(v),
            weight: self.weight.clone(),
        }
    }
    fn radius_sq_bound(&self) -> Q {
        Q::zero()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct DiracCombPayload {
    pub atoms: Rep<WeightedPoint>,
}

impl DiracCombPayload {
    pub fn from_point_set(d: &PointSetPayload, weight: Q) -> Result<DiracCombPayload> {
        if weight.is_zero() {
            return Err(Error::ZeroWeight);
        }
        Ok(DiracCombPayload {
            atoms: d
                .rep
                .map(|p| WeightedPoint {
                    point: p.clone(),
                    weight: weight.clone(),
                })
                .canonical(),
        })
    }

    pub fn finite(atoms: Vec<WeightedPoint>) -> DiracCombPayload {
        DiracCombPayload {
            atoms: Rep::Finite(atoms).canonical(),
        }
    }

    pub fn periodic(lattice: Lattice, motif: Vec<WeightedPoint>) -> DiracCombPayload {
        DiracCombPayload {
            atoms: Rep::Periodic { lattice, motif }.canonical(),
        }
    }

    pub fn canonical(mut self) -> DiracCombPayload {
        self.atoms = self.atoms.canonical();
        self
    }

    pub fn validate(&self) -> Result<()> {
        for a in self.atoms.motif() {
            if a.weight.is_zero() {
                return Err(Error::ZeroWeight);
            }
        }
        if let Some(min) = self.atoms.min_anchor_dist_sq() {
            if min.is_zero() {
                return Err(Error::InvalidPayload(
                    "comb atoms at coincident points".into(),
                ));
            }
        }
        Ok(())
    }

    /// The support as a plain point set (total-variation support extraction).
    pub fn support_point_set(&self) -> PointSetPayload {
        PointSetPayload {
            rep: self.atoms.map(|a| a.point.clone()).canonical(),
            extent: None,
        }
    }

    pub fn cut(&self, w: &Window) -> Result<DiracCombPayload> {
        let atoms = match w {
            Window::All => self.atoms.clone(),
            Window::Empty => Rep::empty(),
            Window::Balls(balls) => {
                let b0 = &balls[0];
                Rep::Finite(
                    self.atoms
                        .components_near(&b0.center, &b0.radius)
                        .into_iter()
                        .filter(|a| w.contains_point(&a.point))
                        .collect(),
                )
            }
            Window::GroupBalls(_) => {
                return Err(Error::Unsupported(
                    "combs live over Euclidean space, not the group".into(),
                ))
            }
        };
        Ok(DiracCombPayload {
            atoms: atoms.canonical(),
        })
    }

    pub fn act(&self, g: &Isometry) -> DiracCombPayload {
        let atoms = match &self.atoms {
            Rep::Finite(v) => Rep::Finite(
                v.iter()
                    .map(|a| WeightedPoint {
                        point: g.apply(&a.point),
                        weight: a.weight.clone(),
                    })
                    .collect(),
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
                        .map(|a| WeightedPoint {
                            point: g.apply(&a.point),
                            weight: a.weight.clone(),
                        })
                        .collect(),
                }
            }
        };
        DiracCombPayload {
            atoms: atoms.canonical(),
        }
    }

    pub fn support_contains(&self, x: &Point) -> bool {
        self.atoms
            .components_near(x, &Q::zero())
            .iter()
            .any(|a| &a.point == x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn comb_on_integers_cut_matches_point_intersection() {
        let z = PointSetPayload::integer_lattice(1);
        let comb = DiracCombPayload::from_point_set(&z, Q::one()).unwrap();
        let cut = comb
            .cut(&Window::ball(Point(vec![Q::zero()]), Q::ratio(3, 2)))
            .unwrap();
        assert_eq!(cut.atoms.motif().len(), 3);
        assert_eq!(comb.support_point_set(), z);
    }

    #[test]
    fn zero_weight_rejected() {
        let z = PointSetPayload::integer_lattice(1);
        assert!(DiracCombPayload::from_point_set(&z, Q::zero()).is_err());
    }
}
