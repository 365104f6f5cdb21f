//! Patches: sets of pairwise-disjoint open bounded tiles, optionally labeled
//! and punctured. Tiles are open intervals (d = 1), open convex rational
//! polygons (d = 2) or open balls.

use crate::error::{Error, Result};
use crate::geometry::{Ball, Isometry, Point, Region, Window};
use crate::lattice::Lattice;
use crate::num::{sqrt_lt, Q};
use crate::polygon::ConvexPolygon;
use crate::rep::{Component, Rep};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Shape {
    /// Open interval (lo, hi), d = 1.
    Interval { lo: Q, hi: Q },
    /// Open convex polygon, d = 2.
    Polygon(ConvexPolygon),
    /// Open ball, any dimension.
    Ball(Ball),
}

impl Shape {
    pub fn dim(&self) -> usize {
        match self {
            Shape::Interval { .. } => 1,
            Shape::Polygon(_) => 2,
            Shape::Ball(b) => b.center.dim(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Shape::Interval { lo, hi } => {
                if lo >= hi {
                    return Err(Error::InvalidPayload("empty interval tile".into()));
                }
            }
            Shape::Polygon(p) => {
                if p.vertices.len() < 3 {
                    return Err(Error::InvalidPayload("degenerate polygon tile".into()));
                }
            }
            Shape::Ball(b) => {
                if !b.radius.is_positive() {
                    return Err(Error::InvalidPayload("empty ball tile".into()));
                }
            }
        }
        Ok(())
    }

    pub fn contains_open(&self, x: &Point) -> bool {
        match self {
            Shape::Interval { lo, hi } => lo < &x.0[0] && &x.0[0] < hi,
            Shape::Polygon(p) => p.contains_open(x),
            Shape::Ball(b) => x.dist_sq(&b.center) < b.radius.square(),
        }
    }

    pub fn contains_closure(&self, x: &Point) -> bool {
        match self {
            Shape::Interval { lo, hi } => lo <= &x.0[0] && &x.0[0] <= hi,
            Shape::Polygon(p) => p.contains_closed(x),
            Shape::Ball(b) => b.contains(x),
        }
    }

    /// Translation-equivariant geometric anchor.
    pub fn centroid(&self) -> Point {
        match self {
            Shape::Interval { lo, hi } => Point(vec![(lo + hi) * Q::ratio(1, 2)]),
            Shape::Polygon(p) => p.vertex_centroid(),
            Shape::Ball(b) => b.center.clone(),
        }
    }

    pub fn diameter_sq(&self) -> Q {
        match self {
            Shape::Interval { lo, hi } => (hi - lo).square(),
            Shape::Polygon(p) => p.diameter_sq(),
            Shape::Ball(b) => (&b.radius * Q::from_int(2)).square(),
        }
    }

    /// Squared radius bound around the centroid.
    pub fn radius_sq_around_centroid(&self) -> Q {
        match self {
            Shape::Interval { lo, hi } => ((hi - lo) * Q::ratio(1, 2)).square(),
            Shape::Polygon(p) => {
                let c = p.vertex_centroid();
                p.max_dist_sq_to_point(&c)
            }
            Shape::Ball(b) => b.radius.square(),
        }
    }

    pub fn translated(&self, v: &Point) -> Shape {
        match self {
            Shape::Interval { lo, hi } => Shape::Interval {
                lo: lo + &v.0[0],
                hi: hi + &v.0[0],
            },
            Shape::Polygon(p) => Shape::Polygon(
                ConvexPolygon::new(p.vertices.iter().map(|q| q.add(v)).collect())
                    .expect("translation preserves polygons"),
            ),
            Shape::Ball(b) => Shape::Ball(Ball::new(b.center.add(v), b.radius.clone())),
        }
    }

    pub fn transformed(&self, g: &Isometry) -> Shape {
        match self {
            Shape::Interval { lo, hi } => {
                let a = g.apply(&Point(vec![lo.clone()])).0[0].clone();
                let b = g.apply(&Point(vec![hi.clone()])).0[0].clone();
                let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
                Shape::Interval { lo, hi }
            }
            Shape::Polygon(p) => Shape::Polygon(
                ConvexPolygon::new(p.vertices.iter().map(|q| g.apply(q)).collect())
                    .expect("isometries preserve polygons"),
            ),
            Shape::Ball(b) => Shape::Ball(Ball::new(g.apply(&b.center), b.radius.clone())),
        }
    }

    /// Is the CLOSURE of the shape contained in the window?
    pub fn closure_in_window(&self, w: &Window) -> bool {
        match self {
            Shape::Interval { lo, hi } => {
                let vs = [Point(vec![lo.clone()]), Point(vec![hi.clone()])];
                crate::geometry::region_contained_in_window(&Region::Hull(&vs), w)
            }
            Shape::Polygon(p) => {
                crate::geometry::region_contained_in_window(&Region::Hull(&p.vertices), w)
            }
            Shape::Ball(b) => crate::geometry::region_contained_in_window(&Region::Ball(b), w),
        }
    }

    /// Does the OPEN shape meet the window? Exact for ALL, EMPTY, point
    /// windows and single-ball windows (the forms the meet operation is
    /// specified for); multi-ball windows are rejected.
    pub fn meets_window(&self, w: &Window) -> Result<bool> {
        match w {
            Window::All => Ok(true),
            Window::Empty => Ok(false),
            Window::GroupBalls(_) => Err(Error::Unsupported(
                "tiles live over Euclidean space, not the group".into(),
            )),
            Window::Balls(balls) => {
                if balls.len() != 1 {
                    return Err(Error::Unsupported(
                        "open-overlap test supports single-ball windows only".into(),
                    ));
                }
                let b = &balls[0];
                Ok(match self {
                    Shape::Interval { lo, hi } => {
                        let wl = &b.center.0[0] - &b.radius;
                        let wh = &b.center.0[0] + &b.radius;
                        // Open interval meets closed interval.
                        lo < &wh && &wl < hi
                    }
                    Shape::Polygon(p) => {
                        if b.radius.is_zero() {
                            p.contains_open(&b.center)
                        } else {
                            sqrt_lt(&p.dist_sq_to_point(&b.center), &b.radius)
                                || p.contains_open(&b.center)
                        }
                    }
                    Shape::Ball(tile) => {
                        // Open ball meets closed ball iff center distance < r + R,
                        // or the tile is a superset corner case handled by the
                        // same comparison.
                        let sum = &tile.radius + &b.radius;
                        tile.center.dist_sq(&b.center) < sum.square()
                    }
                })
            }
        }
    }

    /// True iff the open shapes are disjoint (shared boundary allowed).
    pub fn open_disjoint_from(&self, other: &Shape) -> bool {
        match (self, other) {
            (Shape::Interval { lo, hi }, Shape::Interval { lo: lo2, hi: hi2 }) => {
                hi <= lo2 || hi2 <= lo
            }
            (Shape::Polygon(a), Shape::Polygon(b)) => a.open_disjoint_from(b),
            (Shape::Polygon(p), Shape::Ball(b)) | (Shape::Ball(b), Shape::Polygon(p)) => {
                p.dist_sq_to_point(&b.center) >= b.radius.square()
            }
            (Shape::Ball(a), Shape::Ball(b)) => {
                let sum = &a.radius + &b.radius;
                a.center.dist_sq(&b.center) >= sum.square()
            }
            (Shape::Interval { .. }, _) | (_, Shape::Interval { .. }) => {
                panic!("mixed-dimension shapes")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Tile {
    pub shape: Shape,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub punctures: Vec<Point>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

impl Tile {
    pub fn new(shape: Shape) -> Tile {
        Tile {
            shape,
            punctures: Vec::new(),
            label: None,
        }
    }

    pub fn with_label(mut self, label: &str) -> Tile {
        self.label = Some(label.to_string());
        self
    }

    pub fn with_puncture(mut self, p: Point) -> Tile {
        self.punctures.push(p);
        self.punctures.sort();
        self
    }

    pub fn validate(&self) -> Result<()> {
        self.shape.validate()?;
        for p in &self.punctures {
            if !self.shape.contains_open(p) {
                return Err(Error::InvalidPayload(
                    "puncture is not strictly interior to its tile".into(),
                ));
            }
        }
        Ok(())
    }

    /// Membership in the tile as a point set (open shape minus punctures).
    pub fn contains(&self, x: &Point) -> bool {
        self.shape.contains_open(x) && !self.punctures.contains(x)
    }

    pub fn transformed(&self, g: &Isometry) -> Tile {
        let mut punctures: Vec<Point> = self.punctures.iter().map(|p| g.apply(p)).collect();
        punctures.sort();
        Tile {
            shape: self.shape.transformed(g),
            punctures,
            label: self.label.clone(),
        }
    }
}

impl Component for Tile {
    fn anchor(&self) -> Point {
        // Punctured tiles are anchored at their first puncture (the cell
        // owner for Voronoi tiles); plain tiles at the shape centroid.
        self.punctures
            .first()
            .cloned()
            .unwrap_or_else(|| self.shape.centroid())
    }

    fn translated(&self, v: &Point) -> Tile {
        let mut punctures: Vec<Point> = self.punctures.iter().map(|p| p.add(v)).collect();
        punctures.sort();
        Tile {
            shape: self.shape.translated(v),
            punctures,
            label: self.label.clone(),
        }
    }

    fn radius_sq_bound(&self) -> Q {
        match self {
            t if t.punctures.is_empty() => t.shape.radius_sq_around_centroid(),
            t => {
                // Anchor is a puncture: bound by max distance from it.
                let a = t.anchor();
                match &t.shape {
                    Shape::Interval { lo, hi } => (&a.0[0] - lo)
                        .square()
                        .max((hi - &a.0[0]).square()),
                    Shape::Polygon(p) => p.max_dist_sq_to_point(&a),
                    Shape::Ball(b) => {
                        // dist(a, farthest) <= dist(a, center) + radius.
                        let d = crate::num::sqrt_ceil(&a.dist_sq(&b.center)) + &b.radius;
                        d.square()
                    }
                }
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PatchRep {
    Tiles(Rep<Tile>),
    /// The pattern {X} whose single member is the whole space; it has
    /// unbounded support and no bounded-components certificate.
    WholeSpace,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct PatchPayload {
    pub rep: PatchRep,
}

impl PatchPayload {
    pub fn finite(tiles: Vec<Tile>) -> PatchPayload {
        PatchPayload {
            rep: PatchRep::Tiles(Rep::Finite(tiles).canonical()),
        }
    }

    pub fn periodic(lattice: Lattice, motif: Vec<Tile>) -> PatchPayload {
        PatchPayload {
            rep: PatchRep::Tiles(Rep::Periodic { lattice, motif }.canonical()),
        }
    }

    pub fn whole_space() -> PatchPayload {
        PatchPayload {
            rep: PatchRep::WholeSpace,
        }
    }

    pub fn tiles(&self) -> Option<&Rep<Tile>> {
        match &self.rep {
            PatchRep::Tiles(r) => Some(r),
            PatchRep::WholeSpace => None,
        }
    }

    pub fn canonical(self) -> PatchPayload {
        match self.rep {
            PatchRep::Tiles(r) => PatchPayload {
                rep: PatchRep::Tiles(r.canonical()),
            },
            w => PatchPayload { rep: w },
        }
    }

    pub fn is_empty(&self) -> bool {
        match &self.rep {
            PatchRep::Tiles(r) => r.is_empty(),
            PatchRep::WholeSpace => false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let PatchRep::Tiles(rep) = &self.rep else {
            return Ok(());
        };
        for t in rep.motif() {
            t.validate()?;
        }
        // Pairwise disjointness of distinct tiles. For periodic payloads,
        // check motif tiles against all neighbors within reach.
        match rep {
            Rep::Finite(tiles) => {
                for (i, a) in tiles.iter().enumerate() {
                    for b in &tiles[i + 1..] {
                        if !a.shape.open_disjoint_from(&b.shape) {
                            return Err(Error::InvalidPayload(format!(
                                "overlapping tiles at {:?} and {:?}",
                                a.anchor(),
                                b.anchor()
                            )));
                        }
                    }
                }
            }
            Rep::Periodic { motif, .. } => {
                let reach = crate::num::sqrt_ceil(&rep.max_component_radius_sq())
                    * Q::from_int(2)
                    + Q::one();
                for a in motif {
                    let near = rep.components_near(&a.anchor(), &reach);
                    for b in near {
                        if b == *a {
                            continue;
                        }
                        if !a.shape.open_disjoint_from(&b.shape) {
                            return Err(Error::InvalidPayload(format!(
                                "overlapping tiles at {:?} and {:?}",
                                a.anchor(),
                                b.anchor()
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Patch cut: keep tiles whose closure lies inside the window.
    pub fn cut(&self, w: &Window) -> Result<PatchPayload> {
        let rep = match &self.rep {
            PatchRep::WholeSpace => {
                return Ok(match w {
                    Window::All => self.clone(),
                    _ => PatchPayload::finite(vec![]),
                });
            }
            PatchRep::Tiles(rep) => rep,
        };
        let out = match w {
            Window::All => rep.clone(),
            Window::Empty => Rep::empty(),
            Window::Balls(balls) => {
                let b0 = &balls[0];
                let margin = crate::num::sqrt_ceil(&rep.max_component_radius_sq());
                let near = rep.components_near(&b0.center, &(&b0.radius + &margin));
                Rep::Finite(
                    near.into_iter()
                        .filter(|t| t.shape.closure_in_window(w))
                        .collect(),
                )
            }
            Window::GroupBalls(_) => {
                return Err(Error::Unsupported(
                    "patches live over Euclidean space, not the group".into(),
                ))
            }
        };
        Ok(PatchPayload {
            rep: PatchRep::Tiles(out.canonical()),
        })
    }

    /// Meet operation: tiles whose open shape intersects the window.
    pub fn sqcap(&self, w: &Window) -> Result<Vec<Tile>> {
        let rep = match &self.rep {
            PatchRep::WholeSpace => {
                return Err(Error::UnboundedRequest("whole-space pattern".into()))
            }
            PatchRep::Tiles(rep) => rep,
        };
        match w {
            Window::All => Ok(rep.finite_components()?.to_vec()),
            Window::Empty => Ok(vec![]),
            Window::Balls(balls) => {
                let b0 = &balls[0];
                let margin = crate::num::sqrt_ceil(&rep.max_component_radius_sq());
                let near = rep.components_near(&b0.center, &(&b0.radius + &margin + Q::one()));
                let mut out = Vec::new();
                for t in near {
                    if t.shape.meets_window(w)? {
                        out.push(t);
                    }
                }
                out.sort();
                Ok(out)
            }
            Window::GroupBalls(_) => Err(Error::Unsupported(
                "patches live over Euclidean space, not the group".into(),
            )),
        }
    }

    pub fn act(&self, g: &Isometry) -> PatchPayload {
        let rep = match &self.rep {
            PatchRep::WholeSpace => PatchRep::WholeSpace,
            PatchRep::Tiles(Rep::Finite(v)) => {
                PatchRep::Tiles(Rep::Finite(v.iter().map(|t| t.transformed(g)).collect()))
            }
            PatchRep::Tiles(Rep::Periodic { lattice, motif }) => {
                let basis: Vec<Point> = lattice
                    .basis()
                    .iter()
                    .map(|b| g.rotation.apply(b))
                    .collect();
                PatchRep::Tiles(Rep::Periodic {
                    lattice: Lattice::from_generators(g.dim(), &basis)
                        .expect("rotated basis spans"),
                    motif: motif.iter().map(|t| t.transformed(g)).collect(),
                })
            }
        };
        PatchPayload { rep }.canonical()
    }

    /// Support membership: union of tile closures.
    pub fn support_contains(&self, x: &Point) -> bool {
        match &self.rep {
            PatchRep::WholeSpace => true,
            PatchRep::Tiles(rep) => {
                let margin = crate::num::sqrt_ceil(&rep.max_component_radius_sq()) + Q::one();
                rep.components_near(x, &margin)
                    .iter()
                    .any(|t| t.shape.contains_closure(x))
            }
        }
    }
}

/// The checkerboard tiling of R^d (d = 1: alternating two-letter tiling):
/// unit cubes at integer anchors, labeled by coordinate-sum parity.
pub fn checkerboard(dim: usize) -> PatchPayload {
    assert!(dim == 1 || dim == 2);
    let unit = |anchor: &[i64]| -> Shape {
        match dim {
            1 => Shape::Interval {
                lo: Q::from_int(anchor[0]),
                hi: Q::from_int(anchor[0] + 1),
            },
            _ => Shape::Polygon(
                ConvexPolygon::new(vec![
                    Point(vec![Q::from_int(anchor[0]), Q::from_int(anchor[1])]),
                    Point(vec![Q::from_int(anchor[0] + 1), Q::from_int(anchor[1])]),
                    Point(vec![Q::from_int(anchor[0] + 1), Q::from_int(anchor[1] + 1)]),
                    Point(vec![Q::from_int(anchor[0]), Q::from_int(anchor[1] + 1)]),
                ])
                .unwrap(),
            ),
        }
    };
    let label = |sum: i64| if sum % 2 == 0 { "black" } else { "white" };
    let (basis, motif): (Vec<Point>, Vec<Tile>) = match dim {
        1 => (
            vec![Point(vec![Q::from_int(2)])],
            vec![
                Tile::new(unit(&[0])).with_label(label(0)),
                Tile::new(unit(&[1])).with_label(label(1)),
            ],
        ),
        _ => (
            vec![
                Point(vec![Q::from_int(2), Q::zero()]),
                Point(vec![Q::zero(), Q::from_int(2)]),
            ],
            vec![
                Tile::new(unit(&[0, 0])).with_label(label(0)),
                Tile::new(unit(&[1, 0])).with_label(label(1)),
                Tile::new(unit(&[0, 1])).with_label(label(1)),
                Tile::new(unit(&[1, 1])).with_label(label(0)),
            ],
        ),
    };
    PatchPayload::periodic(
        Lattice::from_generators(dim, &basis).unwrap(),
        motif,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_square_tiling_cut_by_small_ball_is_zero() {
        let board = checkerboard(2);
        let cut = board
            .cut(&Window::ball(Point::origin(2), Q::ratio(1, 2)))
            .unwrap();
        assert!(cut.is_empty());
        // But the support still meets the small ball.
        assert!(board.support_contains(&Point::origin(2)));
    }

    #[test]
    fn checkerboard_is_valid_and_period_two() {
        let board = checkerboard(2);
        board.validate().unwrap();
        let PatchRep::Tiles(Rep::Periodic { lattice, motif }) = &board.rep else {
            panic!("expected periodic")
        };
        // The maximal lattice of the checkerboard is the even sublattice D2.
        assert_eq!(lattice.covolume(), Q::from_int(2));
        assert_eq!(motif.len(), 2);
    }

    #[test]
    fn sqcap_counts_touching_tiles() {
        let board = checkerboard(2);
        let touching = board
            .sqcap(&Window::ball(Point::origin(2), Q::ratio(1, 2)))
            .unwrap();
        assert_eq!(touching.len(), 4); // 2^d squares around the origin
        let all_zero = board.sqcap(&Window::Empty).unwrap();
        assert!(all_zero.is_empty());
    }

    #[test]
    fn overlapping_tiles_fail_validation() {
        let t1 = Tile::new(Shape::Interval {
            lo: Q::zero(),
            hi: Q::one(),
        });
        let t2 = Tile::new(Shape::Interval {
            lo: Q::ratio(1, 2),
            hi: Q::from_int(2),
        });
        let p = PatchPayload::finite(vec![t1, t2]);
        assert!(p.validate().is_err());
    }
}
