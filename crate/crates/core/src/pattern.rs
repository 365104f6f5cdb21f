//! The uniform abstract-pattern contract: cutting-off, support, group action,
//! order, compatibility, supremum and zero elements, over all instance kinds.

use crate::error::{Error, Result};
use crate::geometry::{Ball, GroupSpec, Isometry, Point, Window};
use crate::instances::{
    DiracCombPayload, MapPayload, PatchPayload, PatchRep, PlanPayload, PointSetPayload,
    Representation, SubsetPayload, Tile,
};
use crate::lattice::Lattice;
use crate::num::{sqrt_ceil, Q, Value};
use crate::rep::{Component, Rep};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PatternKind {
    PointSet,
    Patch,
    LabeledPatch,
    MapPattern,
    DiracComb,
    /// A map payload with measure cut semantics (a density against Lebesgue
    /// measure); distinguished from MapPattern by its derivation margins.
    Density,
    Plan,
    Product,
    Subset,
}

impl PatternKind {
    pub fn name(&self) -> &'static str {
        match self {
            PatternKind::PointSet => "point_set",
            PatternKind::Patch => "patch",
            PatternKind::LabeledPatch => "labeled_patch",
            PatternKind::MapPattern => "map_pattern",
            PatternKind::DiracComb => "dirac_comb",
            PatternKind::Density => "density",
            PatternKind::Plan => "plan",
            PatternKind::Product => "product",
            PatternKind::Subset => "subset",
        }
    }

    pub fn is_glueable(&self) -> bool {
        // Every shipped kind admits suprema of locally finite pairwise
        // compatible families in its representable fragment.
        true
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Payload {
    PointSet(PointSetPayload),
    Patch(PatchPayload),
    Map(MapPayload),
    DiracComb(DiracCombPayload),
    Plan(PlanPayload),
    Product(Vec<AbstractPattern>),
    Subset(SubsetPayload),
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct AbstractPattern {
    pub kind: PatternKind,
    pub dimension: usize,
    pub group: GroupSpec,
    pub payload: Payload,
}

/// Identifies a pattern space: kind, ambient group, and for map kinds the
/// value dimension and twisting representation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpaceSpec {
    pub kind: PatternKind,
    pub group: GroupSpec,
    pub value_dim: usize,
    pub phi: Option<Representation>,
}

impl SpaceSpec {
    pub fn new(kind: PatternKind, group: GroupSpec) -> SpaceSpec {
        SpaceSpec {
            kind,
            group,
            value_dim: 1,
            phi: None,
        }
    }
}

/// Certificate that every component of the pattern fits in a ball of the
/// given radius around any of its support points.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundedComponentsCertificate {
    /// Exact squared component diameter bound.
    pub radius_sq: Q,
    /// Rational upper bound on the radius, used in margin arithmetic.
    pub radius_bound: Q,
}

/// A family of patterns to glue.
#[derive(Clone, Debug)]
pub enum PatternFamily {
    Finite(Vec<AbstractPattern>),
    /// The uncountable orbit {translate(t) base : |t - center| <= radius},
    /// which is never locally finite for nonempty base and positive radius.
    ContinuumTranslates { base: AbstractPattern, region: Ball },
}

impl AbstractPattern {
    fn build(
        kind: PatternKind,
        dimension: usize,
        group: GroupSpec,
        payload: Payload,
    ) -> AbstractPattern {
        AbstractPattern {
            kind,
            dimension,
            group,
            payload,
        }
    }

    pub fn point_set(group: GroupSpec, payload: PointSetPayload) -> AbstractPattern {
        let dimension = group.dimension;
        AbstractPattern::build(
            PatternKind::PointSet,
            dimension,
            group,
            Payload::PointSet(payload.canonical()),
        )
    }

    pub fn patch(group: GroupSpec, payload: PatchPayload) -> AbstractPattern {
        let dimension = group.dimension;
        AbstractPattern::build(
            PatternKind::Patch,
            dimension,
            group,
            Payload::Patch(payload.canonical()),
        )
    }

    pub fn labeled_patch(group: GroupSpec, payload: PatchPayload) -> AbstractPattern {
        let dimension = group.dimension;
        AbstractPattern::build(
            PatternKind::LabeledPatch,
            dimension,
            group,
            Payload::Patch(payload.canonical()),
        )
    }

    pub fn map_pattern(group: GroupSpec, payload: MapPayload) -> AbstractPattern {
        let dimension = group.dimension;
        AbstractPattern::build(
            PatternKind::MapPattern,
            dimension,
            group,
            Payload::Map(payload.canonical()),
        )
    }

    pub fn density(group: GroupSpec, payload: MapPayload) -> AbstractPattern {
        let dimension = group.dimension;
        AbstractPattern::build(
            PatternKind::Density,
            dimension,
            group,
            Payload::Map(payload.canonical()),
        )
    }

    pub fn dirac_comb(group: GroupSpec, payload: DiracCombPayload) -> AbstractPattern {
        let dimension = group.dimension;
        AbstractPattern::build(
            PatternKind::DiracComb,
            dimension,
            group,
            Payload::DiracComb(payload.canonical()),
        )
    }

    pub fn plan(group: GroupSpec, payload: PlanPayload) -> AbstractPattern {
        let dimension = group.dimension;
        AbstractPattern::build(
            PatternKind::Plan,
            dimension,
            group,
            Payload::Plan(payload.canonical()),
        )
    }

    pub fn product(group: GroupSpec, components: Vec<AbstractPattern>) -> AbstractPattern {
        let dimension = group.dimension;
        AbstractPattern::build(PatternKind::Product, dimension, group, Payload::Product(components))
    }

    pub fn subset(group: GroupSpec, payload: SubsetPayload) -> AbstractPattern {
        let dimension = group.dimension;
        AbstractPattern::build(
            PatternKind::Subset,
            dimension,
            group,
            Payload::Subset(payload.canonical()),
        )
    }

    pub fn space(&self) -> SpaceSpec {
        let (value_dim, phi) = match &self.payload {
            Payload::Map(m) => (m.value_dim, m.phi.clone()),
            _ => (1, None),
        };
        SpaceSpec {
            kind: self.kind,
            group: self.group.clone(),
            value_dim,
            phi,
        }
    }

    /// The zero element of this pattern's own space.
    pub fn zero_like(&self) -> AbstractPattern {
        match &self.payload {
            Payload::Product(comps) => AbstractPattern::product(
                self.group.clone(),
                comps.iter().map(|c| c.zero_like()).collect(),
            ),
            Payload::Map(m) => {
                let mut z = MapPayload::zero(m.value_dim);
                z.phi = m.phi.clone();
                let ctor = if self.kind == PatternKind::Density {
                    AbstractPattern::density
                } else {
                    AbstractPattern::map_pattern
                };
                ctor(self.group.clone(), z)
            }
            _ => zero_of(self.kind, &self.group),
        }
    }

    pub fn is_zero(&self) -> bool {
        match &self.payload {
            Payload::PointSet(p) => p.rep.is_empty(),
            Payload::Patch(p) => p.is_empty(),
            Payload::Map(m) => m.placements.is_empty(),
            Payload::DiracComb(c) => c.atoms.is_empty(),
            Payload::Plan(p) => p.is_empty(),
            Payload::Product(comps) => comps.iter().all(AbstractPattern::is_zero),
            Payload::Subset(s) => s.is_empty(),
        }
    }

    /// Cutting-off operation. Bounded windows materialize periodic payloads
    /// into finite ones; ALL is the identity; EMPTY yields the zero element.
    pub fn cut(&self, w: &Window) -> Result<AbstractPattern> {
        let payload = match &self.payload {
            Payload::PointSet(p) => Payload::PointSet(p.cut(w)?),
            Payload::Patch(p) => Payload::Patch(p.cut(w)?),
            Payload::Map(m) => Payload::Map(m.cut(w)?),
            Payload::DiracComb(c) => Payload::DiracComb(c.cut(w)?),
            Payload::Plan(p) => Payload::Plan(p.cut(w)?),
            Payload::Product(comps) => Payload::Product(
                comps
                    .iter()
                    .map(|c| c.cut(w))
                    .collect::<Result<Vec<_>>>()?,
            ),
            Payload::Subset(s) => Payload::Subset(s.cut(w)?),
        };
        Ok(AbstractPattern::build(
            self.kind,
            self.dimension,
            self.group.clone(),
            payload,
        ))
    }

    /// Group action. The rotation part must belong to the point group.
    pub fn act(&self, g: &Isometry) -> Result<AbstractPattern> {
        if g.dim() != self.dimension {
            return Err(Error::DimensionMismatch(self.dimension, g.dim()));
        }
        if !self.group.contains(&g.rotation) {
            return Err(Error::RotationOutsideGroup);
        }
        let payload = match &self.payload {
            Payload::PointSet(p) => Payload::PointSet(p.act(g)),
            Payload::Patch(p) => Payload::Patch(p.act(g)),
            Payload::Map(m) => Payload::Map(m.act(g)?),
            Payload::DiracComb(c) => Payload::DiracComb(c.act(g)),
            Payload::Plan(p) => Payload::Plan(p.act(g)),
            Payload::Product(comps) => Payload::Product(
                comps
                    .iter()
                    .map(|c| c.act(g))
                    .collect::<Result<Vec<_>>>()?,
            ),
            Payload::Subset(s) => Payload::Subset(s.act(g)),
        };
        Ok(AbstractPattern::build(
            self.kind,
            self.dimension,
            self.group.clone(),
            payload,
        ))
    }

    pub fn translate_by(&self, v: &Point) -> AbstractPattern {
        self.act(&Isometry::translate(v.clone()))
            .expect("translations act on every pattern")
    }

    /// Support membership for Euclidean-space patterns.
    pub fn support_contains(&self, x: &Point) -> bool {
        match &self.payload {
            Payload::PointSet(p) => p.support_contains(x),
            Payload::Patch(p) => p.support_contains(x),
            Payload::Map(m) => m.support_contains(x),
            Payload::DiracComb(c) => c.support_contains(x),
            Payload::Plan(_) => false,
            Payload::Product(comps) => comps.iter().any(|c| c.support_contains(x)),
            Payload::Subset(s) => s.support_contains(&x.0[0]),
        }
    }

    /// Exact decision of supp(self) subset-of w, matched to the cut fixpoint
    /// so that axiom 2 (cut(p, w) = p iff w contains supp p) holds.
    pub fn support_in_window(&self, w: &Window) -> Result<bool> {
        if w.is_all() {
            return Ok(true);
        }
        if self.is_zero() {
            return Ok(true);
        }
        match &self.payload {
            Payload::PointSet(p) => Ok(match &p.rep {
                Rep::Finite(pts) => pts.iter().all(|x| w.contains_point(x)),
                Rep::Periodic { .. } => false,
            }),
            Payload::Patch(p) => Ok(match &p.rep {
                PatchRep::WholeSpace => false,
                PatchRep::Tiles(Rep::Finite(tiles)) => {
                    tiles.iter().all(|t| t.shape.closure_in_window(w))
                }
                PatchRep::Tiles(Rep::Periodic { .. }) => false,
            }),
            Payload::DiracComb(c) => Ok(match &c.atoms {
                Rep::Finite(atoms) => atoms.iter().all(|a| w.contains_point(&a.point)),
                Rep::Periodic { .. } => false,
            }),
            Payload::Plan(p) => Ok(p.entries.iter().all(|e| match e {
                Rep::Finite(isos) => isos.iter().all(|g| w.contains_isometry(g)),
                Rep::Periodic { motif, .. } => motif.is_empty(),
            })),
            Payload::Map(m) => match &m.placements {
                Rep::Periodic { .. } => Ok(false),
                Rep::Finite(pls) => {
                    if pls.iter().all(|p| p.clip.is_all()) {
                        // Unclipped supports are exactly the atom balls.
                        Ok(pls.iter().all(|p| {
                            let b = Ball::new(p.center.clone(), p.atom.radius.clone());
                            crate::geometry::region_contained_in_window(
                                &crate::geometry::Region::Ball(&b),
                                w,
                            )
                        }))
                    } else {
                        // Clipped supports are structural; fall back to the
                        // cut fixpoint, which is the defining condition.
                        Ok(self.cut(w)? == *self)
                    }
                }
            },
            Payload::Product(comps) => {
                for c in comps {
                    if !c.support_in_window(w)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            Payload::Subset(s) => Ok(match w {
                Window::Balls(balls) => balls.iter().all(|b| {
                    let lo = &b.center.0[0] - &b.radius;
                    let hi = &b.center.0[0] + &b.radius;
                    s.intervals.iter().all(|iv| lo <= iv.lo && iv.hi <= hi)
                }),
                Window::Empty => s.is_empty(),
                _ => false,
            }),
        }
    }

    /// A ball around the origin enclosing the support, for bounded patterns.
    pub fn support_enclosure(&self) -> Option<Ball> {
        fn from_rep<T: Component>(dim: usize, rep: &Rep<T>) -> Option<Ball> {
            match rep {
                Rep::Periodic { motif, .. } if !motif.is_empty() => None,
                _ => {
                    let mut bound = Q::zero();
                    for c in rep.motif() {
                        let b = sqrt_ceil(&c.anchor().norm_sq()) + sqrt_ceil(&c.radius_sq_bound());
                        if b > bound {
                            bound = b;
                        }
                    }
                    Some(Ball::new(Point::origin(dim), bound))
                }
            }
        }
        match &self.payload {
            Payload::PointSet(p) => from_rep(self.dimension, &p.rep),
            Payload::Patch(p) => match &p.rep {
                PatchRep::WholeSpace => None,
                PatchRep::Tiles(rep) => from_rep(self.dimension, rep),
            },
            Payload::Map(m) => from_rep(self.dimension, &m.placements),
            Payload::DiracComb(c) => from_rep(self.dimension, &c.atoms),
            Payload::Plan(p) => {
                let mut bound = Q::zero();
                for e in &p.entries {
                    match e {
                        Rep::Periodic { motif, .. } if !motif.is_empty() => return None,
                        _ => {
                            for iso in e.motif() {
                                let b = sqrt_ceil(&iso.translation.norm_sq())
                                    + crate::geometry::rotation_metric_margin(self.dimension);
                                if b > bound {
                                    bound = b;
                                }
                            }
                        }
                    }
                }
                Some(Ball::new(Point::origin(self.dimension), bound))
            }
            Payload::Product(comps) => {
                let mut bound = Q::zero();
                for c in comps {
                    let b = c.support_enclosure()?;
                    let reach = sqrt_ceil(&b.center.norm_sq()) + b.radius;
                    if reach > bound {
                        bound = reach;
                    }
                }
                Some(Ball::new(Point::origin(self.dimension), bound))
            }
            Payload::Subset(s) => {
                let mut bound = Q::zero();
                for iv in &s.intervals {
                    let b = iv.lo.abs().max(iv.hi.abs());
                    if b > bound {
                        bound = b;
                    }
                }
                Some(Ball::new(Point::origin(self.dimension), bound))
            }
        }
    }

    /// Finitely supported patterns can be materialized as-is; periodic ones
    /// need a bounded window.
    pub fn is_finitely_supported(&self) -> bool {
        self.support_enclosure().is_some()
    }

    /// The finite pattern equal to cut(self, w); errors on an unbounded
    /// request against a periodic payload.
    pub fn materialize_window(&self, w: &Window) -> Result<AbstractPattern> {
        if w.is_all() && !self.is_finitely_supported() {
            return Err(Error::UnboundedRequest(
                "cannot materialize an infinite pattern on the ALL window".into(),
            ));
        }
        self.cut(w)
    }

    /// Bounded-components certificate, when one exists.
    pub fn bounded_component_radius(&self) -> Option<BoundedComponentsCertificate> {
        let cert = |radius_sq: Q| {
            let radius_bound = sqrt_ceil(&radius_sq).max(Q::one());
            BoundedComponentsCertificate {
                radius_sq,
                radius_bound,
            }
        };
        match &self.payload {
            Payload::PointSet(_) | Payload::DiracComb(_) | Payload::Plan(_) => {
                Some(cert(Q::one()))
            }
            Payload::Patch(p) => match &p.rep {
                PatchRep::WholeSpace => None,
                PatchRep::Tiles(rep) => {
                    let max = rep
                        .motif()
                        .iter()
                        .map(|t| t.shape.diameter_sq())
                        .max()
                        .unwrap_or(Q::one());
                    Some(cert(max.max(Q::one())))
                }
            },
            Payload::Map(m) => {
                let max = m
                    .placements
                    .motif()
                    .iter()
                    .map(|p| (&p.atom.radius * Q::from_int(2)).square())
                    .max()
                    .unwrap_or(Q::one());
                Some(cert(max.max(Q::one())))
            }
            Payload::Product(comps) => {
                let mut max = Q::one();
                for c in comps {
                    let b = c.bounded_component_radius()?;
                    if b.radius_sq > max {
                        max = b.radius_sq;
                    }
                }
                Some(cert(max))
            }
            Payload::Subset(_) => Some(cert(Q::one())),
        }
    }

    fn require_same_space(&self, other: &AbstractPattern) -> Result<()> {
        if self.kind != other.kind {
            return Err(Error::KindMismatch(
                self.kind.name().into(),
                other.kind.name().into(),
            ));
        }
        if self.dimension != other.dimension {
            return Err(Error::DimensionMismatch(self.dimension, other.dimension));
        }
        Ok(())
    }

    /// Order: is self below other? For set-like kinds this is inclusion; for
    /// subsets it is the closure-restriction identity; uniformly it realizes
    /// other AND supp(self) = self.
    pub fn is_leq(&self, other: &AbstractPattern) -> Result<bool> {
        self.require_same_space(other)?;
        Ok(match (&self.payload, &other.payload) {
            (Payload::PointSet(a), Payload::PointSet(b)) => a.rep.subset_of(&b.rep),
            (Payload::Patch(a), Payload::Patch(b)) => match (&a.rep, &b.rep) {
                (PatchRep::Tiles(ra), PatchRep::Tiles(rb)) => ra.subset_of(rb),
                (PatchRep::WholeSpace, PatchRep::WholeSpace) => true,
                (PatchRep::Tiles(ra), PatchRep::WholeSpace) => ra.is_empty(),
                (PatchRep::WholeSpace, PatchRep::Tiles(_)) => false,
            },
            (Payload::Map(a), Payload::Map(b)) => a.placements.subset_of(&b.placements),
            (Payload::DiracComb(a), Payload::DiracComb(b)) => a.atoms.subset_of(&b.atoms),
            (Payload::Plan(a), Payload::Plan(b)) => {
                if a.is_empty() {
                    true
                } else if a.entries.len() != b.entries.len() {
                    false
                } else {
                    a.entries
                        .iter()
                        .zip(&b.entries)
                        .all(|(x, y)| x.subset_of(y))
                }
            }
            (Payload::Product(xs), Payload::Product(ys)) => {
                xs.len() == ys.len()
                    && xs
                        .iter()
                        .zip(ys)
                        .map(|(x, y)| x.is_leq(y))
                        .collect::<Result<Vec<_>>>()?
                        .into_iter()
                        .all(|b| b)
            }
            (Payload::Subset(a), Payload::Subset(b)) => b.intersect(&a.closure()) == *a,
            _ => {
                return Err(Error::KindMismatch(
                    self.kind.name().into(),
                    other.kind.name().into(),
                ))
            }
        })
    }

    /// Existence of a common majorant, decided natively per kind.
    pub fn are_compatible(&self, other: &AbstractPattern) -> Result<bool> {
        self.require_same_space(other)?;
        Ok(match (&self.payload, &other.payload) {
            (Payload::PointSet(_), Payload::PointSet(_)) => true,
            (Payload::Patch(a), Payload::Patch(b)) => patches_compatible(a, b),
            (Payload::Map(a), Payload::Map(b)) => maps_compatible(a, b),
            (Payload::DiracComb(a), Payload::DiracComb(b)) => combs_compatible(a, b),
            (Payload::Plan(a), Payload::Plan(b)) => {
                a.is_empty() || b.is_empty() || a.entries.len() == b.entries.len()
            }
            (Payload::Product(xs), Payload::Product(ys)) => {
                xs.len() == ys.len()
                    && xs
                        .iter()
                        .zip(ys)
                        .map(|(x, y)| x.are_compatible(y))
                        .collect::<Result<Vec<_>>>()?
                        .into_iter()
                        .all(|b| b)
            }
            (Payload::Subset(a), Payload::Subset(b)) => a.compatible_with(b),
            _ => {
                return Err(Error::KindMismatch(
                    self.kind.name().into(),
                    other.kind.name().into(),
                ))
            }
        })
    }

    /// Map evaluation (MapPattern and Density kinds).
    pub fn eval_map(&self, x: &Point) -> Result<Value> {
        match &self.payload {
            Payload::Map(m) => Ok(m.eval(x)),
            _ => Err(Error::KindMismatch(
                self.kind.name().into(),
                "map_pattern".into(),
            )),
        }
    }

    /// Tiles meeting the window (patch kinds).
    pub fn sqcap(&self, w: &Window) -> Result<Vec<Tile>> {
        match &self.payload {
            Payload::Patch(p) => p.sqcap(w),
            _ => Err(Error::KindMismatch(self.kind.name().into(), "patch".into())),
        }
    }

    /// Payload invariants (disjointness, reductions, placement agreement).
    pub fn validate(&self) -> Result<()> {
        self.group.validate()?;
        match &self.payload {
            Payload::PointSet(p) => p.validate(),
            Payload::Patch(p) => {
                p.validate()?;
                if let PatchRep::Tiles(rep) = &p.rep {
                    let labeled = self.kind == PatternKind::LabeledPatch;
                    for t in rep.motif() {
                        if labeled && t.label.is_none() {
                            return Err(Error::InvalidPayload(
                                "labeled patch contains an unlabeled tile".into(),
                            ));
                        }
                        if !labeled && t.label.is_some() {
                            return Err(Error::InvalidPayload(
                                "plain patch contains a labeled tile".into(),
                            ));
                        }
                    }
                }
                Ok(())
            }
            Payload::Map(m) => {
                if let Some(phi) = &m.phi {
                    phi.validate(&self.group)?;
                }
                m.validate()
            }
            Payload::DiracComb(c) => c.validate(),
            Payload::Plan(p) => p.validate(),
            Payload::Product(comps) => {
                for c in comps {
                    c.validate()?;
                }
                Ok(())
            }
            Payload::Subset(s) => {
                if self.dimension != 1 {
                    return Err(Error::Unsupported(
                        "interval subsets are one-dimensional".into(),
                    ));
                }
                s.validate()
            }
        }
    }

    /// Anchor points of components within `radius` of `center` (Euclidean
    /// kinds), used for candidate generation and rule application.
    pub fn anchor_points_near(&self, center: &Point, radius: &Q) -> Vec<Point> {
        let mut out = match &self.payload {
            Payload::PointSet(p) => p
                .rep
                .components_near(center, radius)
                .into_iter()
                .collect::<Vec<_>>(),
            Payload::Patch(p) => match &p.rep {
                PatchRep::WholeSpace => vec![],
                PatchRep::Tiles(rep) => rep
                    .components_near(center, radius)
                    .into_iter()
                    .map(|t| t.anchor())
                    .collect(),
            },
            Payload::Map(m) => m
                .placements
                .components_near(center, radius)
                .into_iter()
                .map(|p| p.center)
                .collect(),
            Payload::DiracComb(c) => c
                .atoms
                .components_near(center, radius)
                .into_iter()
                .map(|a| a.point)
                .collect(),
            Payload::Plan(p) => p
                .members_near(&Isometry::translate(center.clone()), radius)
                .into_iter()
                .map(|(_, iso)| iso.translation)
                .collect(),
            Payload::Product(comps) => comps
                .iter()
                .flat_map(|c| c.anchor_points_near(center, radius))
                .collect(),
            Payload::Subset(s) => s
                .intervals
                .iter()
                .map(|iv| Point(vec![(&iv.lo + &iv.hi) * Q::ratio(1, 2)]))
                .filter(|p| p.dist_sq(center) <= radius.square())
                .collect(),
        };
        out.sort();
        out.dedup();
        out
    }

    /// Motif anchor representatives (all anchors for finite payloads).
    pub fn motif_anchor_points(&self) -> Vec<Point> {
        let mut out = match &self.payload {
            Payload::PointSet(p) => p.rep.motif().to_vec(),
            Payload::Patch(p) => match &p.rep {
                PatchRep::WholeSpace => vec![],
                PatchRep::Tiles(rep) => rep.motif().iter().map(|t| t.anchor()).collect(),
            },
            Payload::Map(m) => m.placements.motif().iter().map(|p| p.center.clone()).collect(),
            Payload::DiracComb(c) => c.atoms.motif().iter().map(|a| a.point.clone()).collect(),
            Payload::Plan(p) => p
                .entries
                .iter()
                .flat_map(|e| e.motif().iter().map(|iso| iso.translation.clone()))
                .collect(),
            Payload::Product(comps) => comps
                .iter()
                .flat_map(AbstractPattern::motif_anchor_points)
                .collect(),
            Payload::Subset(s) => s
                .intervals
                .iter()
                .map(|iv| Point(vec![(&iv.lo + &iv.hi) * Q::ratio(1, 2)]))
                .collect(),
        };
        out.sort();
        out.dedup();
        out
    }

    /// Canonical maximal translation period lattice for periodic payloads;
    /// for tuple kinds the common period (intersection over the entries).
    pub fn period_lattice(&self) -> Option<Lattice> {
        fn common(lats: Vec<Option<Lattice>>) -> Option<Lattice> {
            let mut acc: Option<Lattice> = None;
            for l in lats {
                let l = l?;
                acc = Some(match acc {
                    None => l,
                    Some(cur) => cur.intersect(&l).ok()?,
                });
            }
            acc
        }
        match &self.payload {
            Payload::PointSet(p) => p.rep.lattice().cloned(),
            Payload::Patch(p) => match &p.rep {
                PatchRep::WholeSpace => None,
                PatchRep::Tiles(rep) => rep.lattice().cloned(),
            },
            Payload::Map(m) => m.placements.lattice().cloned(),
            Payload::DiracComb(c) => c.atoms.lattice().cloned(),
            Payload::Plan(p) => common(
                p.entries
                    .iter()
                    .map(|e| match e {
                        Rep::Periodic { lattice, .. } => Some(lattice.clone()),
                        Rep::Finite(v) if v.is_empty() => {
                            // Empty entries impose no period constraint; they
                            // are dropped by canonicalization anyway.
                            None
                        }
                        Rep::Finite(_) => None,
                    })
                    .collect(),
            ),
            Payload::Product(comps) => common(
                comps
                    .iter()
                    .map(AbstractPattern::period_lattice)
                    .collect(),
            ),
            Payload::Subset(_) => None,
        }
    }
}

fn patches_compatible(a: &PatchPayload, b: &PatchPayload) -> bool {
    let (Some(ra), Some(rb)) = (a.tiles(), b.tiles()) else {
        // {X} is only compatible with itself and zero.
        return a.rep == PatchRep::WholeSpace && b.rep == PatchRep::WholeSpace
            || a.is_empty()
            || b.is_empty();
    };
    // Every pair of tiles equal or disjoint; for periodic payloads compare
    // motif tiles against the other's tiles within reach.
    let reach = sqrt_ceil(&ra.max_component_radius_sq())
        + sqrt_ceil(&rb.max_component_radius_sq())
        + Q::one();
    let check = |from: &Rep<Tile>, against: &Rep<Tile>| {
        from.motif().iter().all(|t| {
            against
                .components_near(&t.anchor(), &reach)
                .iter()
                .all(|s| s == t || s.shape.open_disjoint_from(&t.shape))
        })
    };
    check(ra, rb) && check(rb, ra)
}

fn maps_compatible(a: &MapPayload, b: &MapPayload) -> bool {
    if a.value_dim != b.value_dim || a.phi != b.phi {
        return false;
    }
    let reach = sqrt_ceil(&a.placements.max_component_radius_sq())
        + sqrt_ceil(&b.placements.max_component_radius_sq())
        + Q::one();
    let check = |from: &MapPayload, against: &MapPayload| {
        from.placements.motif().iter().all(|p| {
            against
                .placements
                .components_near(&p.center, &reach)
                .iter()
                .all(|q| crate::instances::map::placements_compatible(p, q))
        })
    };
    check(a, b) && check(b, a)
}

fn combs_compatible(a: &DiracCombPayload, b: &DiracCombPayload) -> bool {
    let reach = Q::one();
    let check = |from: &DiracCombPayload, against: &DiracCombPayload| {
        from.atoms.motif().iter().all(|x| {
            against
                .atoms
                .components_near(&x.point, &reach)
                .iter()
                .all(|y| y.point != x.point || y.weight == x.weight)
        })
    };
    check(a, b) && check(b, a)
}

/// The zero element of a glueable kind.
pub fn zero_of(kind: PatternKind, group: &GroupSpec) -> AbstractPattern {
    let g = group.clone();
    match kind {
        PatternKind::PointSet => AbstractPattern::point_set(g, PointSetPayload::finite(vec![])),
        PatternKind::Patch => AbstractPattern::patch(g, PatchPayload::finite(vec![])),
        PatternKind::LabeledPatch => {
            AbstractPattern::labeled_patch(g, PatchPayload::finite(vec![]))
        }
        PatternKind::MapPattern => AbstractPattern::map_pattern(g, MapPayload::zero(1)),
        PatternKind::Density => AbstractPattern::density(g, MapPayload::zero(1)),
        PatternKind::DiracComb => AbstractPattern::dirac_comb(g, DiracCombPayload::finite(vec![])),
        PatternKind::Plan => AbstractPattern::plan(g, PlanPayload::new(vec![])),
        PatternKind::Product => AbstractPattern::product(g, vec![]),
        PatternKind::Subset => AbstractPattern::subset(g, SubsetPayload::empty()),
    }
}

/// Least upper bound of a family, in the given space. Families must be
/// pairwise compatible and locally finite.
pub fn supremum(space: &SpaceSpec, family: &PatternFamily) -> Result<AbstractPattern> {
    let items: Vec<AbstractPattern> = match family {
        PatternFamily::Finite(xs) => xs.clone(),
        PatternFamily::ContinuumTranslates { base, region } => {
            if base.is_zero() {
                return Ok(zero_of(space.kind, &space.group));
            }
            if region.radius.is_positive() {
                // Uncountably many distinct translates meet any window around
                // the region: witness a ball that sees infinitely many cuts.
                let bound = base
                    .support_enclosure()
                    .map(|b| b.radius)
                    .unwrap_or(Q::one());
                let witness = Window::ball(
                    region.center.clone(),
                    &region.radius + &bound + Q::one(),
                );
                return Err(Error::NotLocallyFinite { witness });
            }
            vec![base.translate_by(&region.center)]
        }
    };
    if !space.kind.is_glueable() {
        return Err(Error::NotGlueable(space.kind.name().into()));
    }
    for x in &items {
        if x.kind != space.kind {
            return Err(Error::KindMismatch(
                space.kind.name().into(),
                x.kind.name().into(),
            ));
        }
    }
    for (i, a) in items.iter().enumerate() {
        for b in &items[i + 1..] {
            if !a.are_compatible(b)? {
                return Err(Error::NotPairwiseCompatible(format!(
                    "members {} are incompatible",
                    space.kind.name()
                )));
            }
        }
    }
    let mut acc = match space.kind {
        PatternKind::MapPattern | PatternKind::Density => {
            let mut z = MapPayload::zero(space.value_dim);
            z.phi = space.phi.clone();
            if space.kind == PatternKind::Density {
                AbstractPattern::density(space.group.clone(), z)
            } else {
                AbstractPattern::map_pattern(space.group.clone(), z)
            }
        }
        k => zero_of(k, &space.group),
    };
    for item in items {
        acc = glue_pair(&acc, &item)?;
    }
    Ok(acc)
}

/// Glues a family known to be pairwise compatible (members of a common
/// majorant), skipping the quadratic compatibility sweep. Families of
/// finitely supported patterns are merged in one bulk pass.
pub(crate) fn glue_known_compatible(
    space: &SpaceSpec,
    items: &[AbstractPattern],
) -> Result<AbstractPattern> {
    let all_finite = items
        .iter()
        .all(|p| matches!(payload_finite_components(p), Some(_)));
    if !all_finite {
        let mut acc = match items.first() {
            Some(first) => first.zero_like(),
            None => zero_of(space.kind, &space.group),
        };
        for item in items {
            acc = glue_pair(&acc, item)?;
        }
        return Ok(acc);
    }
    let mut merged: Option<AbstractPattern> = None;
    for item in items {
        merged = Some(match merged {
            None => item.clone(),
            Some(acc) => bulk_merge_finite(&acc, item)?,
        });
    }
    Ok(match merged {
        Some(m) => m,
        None => zero_of(space.kind, &space.group),
    })
}

fn payload_finite_components(p: &AbstractPattern) -> Option<()> {
    match &p.payload {
        Payload::PointSet(x) => matches!(x.rep, Rep::Finite(_)).then_some(()),
        Payload::Patch(x) => match &x.rep {
            PatchRep::Tiles(Rep::Finite(_)) => Some(()),
            _ => None,
        },
        Payload::Map(x) => matches!(x.placements, Rep::Finite(_)).then_some(()),
        Payload::DiracComb(x) => matches!(x.atoms, Rep::Finite(_)).then_some(()),
        Payload::Plan(x) => x
            .entries
            .iter()
            .all(|e| matches!(e, Rep::Finite(_)))
            .then_some(()),
        Payload::Subset(_) => Some(()),
        Payload::Product(_) => None,
    }
}

fn bulk_merge_finite(a: &AbstractPattern, b: &AbstractPattern) -> Result<AbstractPattern> {
    fn merge<T: crate::rep::Component>(x: &Rep<T>, y: &Rep<T>) -> Rep<T> {
        let mut v: Vec<T> = x.motif().to_vec();
        v.extend_from_slice(y.motif());
        Rep::Finite(v).canonical()
    }
    let payload = match (&a.payload, &b.payload) {
        (Payload::PointSet(x), Payload::PointSet(y)) => Payload::PointSet(PointSetPayload {
            rep: merge(&x.rep, &y.rep),
            extent: x.extent.clone(),
        }),
        (Payload::Patch(x), Payload::Patch(y)) => {
            let (Some(rx), Some(ry)) = (x.tiles(), y.tiles()) else {
                return glue_pair(a, b);
            };
            Payload::Patch(PatchPayload {
                rep: PatchRep::Tiles(merge(rx, ry)),
            })
        }
        (Payload::Map(x), Payload::Map(y)) => Payload::Map(MapPayload {
            value_dim: x.value_dim,
            placements: merge(&x.placements, &y.placements),
            phi: x.phi.clone(),
        }),
        (Payload::DiracComb(x), Payload::DiracComb(y)) => Payload::DiracComb(DiracCombPayload {
            atoms: merge(&x.atoms, &y.atoms),
        }),
        (Payload::Plan(x), Payload::Plan(y)) => {
            if x.is_empty() {
                Payload::Plan(y.clone())
            } else if y.is_empty() {
                Payload::Plan(x.clone())
            } else if x.entries.len() != y.entries.len() {
                return Err(Error::NotPairwiseCompatible("plan arities differ".into()));
            } else {
                Payload::Plan(
                    PlanPayload {
                        entries: x
                            .entries
                            .iter()
                            .zip(&y.entries)
                            .map(|(e, f)| merge(e, f))
                            .collect(),
                    }
                    .canonical(),
                )
            }
        }
        (Payload::Subset(x), Payload::Subset(y)) => Payload::Subset(x.union(y)),
        _ => return glue_pair(a, b),
    };
    Ok(AbstractPattern {
        kind: a.kind,
        dimension: a.dimension,
        group: a.group.clone(),
        payload,
    })
}

fn glue_pair(a: &AbstractPattern, b: &AbstractPattern) -> Result<AbstractPattern> {
    if a.is_zero() {
        return Ok(b.clone());
    }
    if b.is_zero() {
        return Ok(a.clone());
    }
    if a.is_leq(b)? {
        return Ok(b.clone());
    }
    if b.is_leq(a)? {
        return Ok(a.clone());
    }
    let payload = match (&a.payload, &b.payload) {
        (Payload::PointSet(x), Payload::PointSet(y)) => Payload::PointSet(PointSetPayload {
            rep: x.rep.union(&y.rep)?,
            extent: x.extent.clone(),
        }),
        (Payload::Patch(x), Payload::Patch(y)) => {
            let (Some(rx), Some(ry)) = (x.tiles(), y.tiles()) else {
                return Err(Error::Unsupported(
                    "cannot glue the whole-space pattern".into(),
                ));
            };
            Payload::Patch(PatchPayload {
                rep: PatchRep::Tiles(rx.union(ry)?),
            })
        }
        (Payload::Map(x), Payload::Map(y)) => {
            let mut m = MapPayload {
                value_dim: x.value_dim,
                placements: x.placements.union(&y.placements)?,
                phi: x.phi.clone(),
            };
            m = m.canonical();
            Payload::Map(m)
        }
        (Payload::DiracComb(x), Payload::DiracComb(y)) => Payload::DiracComb(DiracCombPayload {
            atoms: x.atoms.union(&y.atoms)?,
        }),
        (Payload::Plan(x), Payload::Plan(y)) => {
            if x.entries.len() != y.entries.len() {
                return Err(Error::NotPairwiseCompatible(
                    "plan arities differ".into(),
                ));
            }
            let entries = x
                .entries
                .iter()
                .zip(&y.entries)
                .map(|(e, f)| e.union(f))
                .collect::<Result<Vec<_>>>()?;
            Payload::Plan(PlanPayload { entries }.canonical())
        }
        (Payload::Product(xs), Payload::Product(ys)) => {
            if xs.len() != ys.len() {
                return Err(Error::NotPairwiseCompatible(
                    "product arities differ".into(),
                ));
            }
            Payload::Product(
                xs.iter()
                    .zip(ys)
                    .map(|(x, y)| glue_pair(x, y))
                    .collect::<Result<Vec<_>>>()?,
            )
        }
        (Payload::Subset(x), Payload::Subset(y)) => Payload::Subset(x.union(y)),
        _ => {
            return Err(Error::KindMismatch(
                a.kind.name().into(),
                b.kind.name().into(),
            ))
        }
    };
    Ok(AbstractPattern {
        kind: a.kind,
        dimension: a.dimension,
        group: a.group.clone(),
        payload,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::{checkerboard, AtomSpec, Placement};

    fn z1() -> AbstractPattern {
        AbstractPattern::point_set(
            GroupSpec::translations(1),
            PointSetPayload::integer_lattice(1),
        )
    }

    fn pt1(n: i64, d: i64) -> Point {
        Point(vec![Q::ratio(n, d)])
    }

    #[test]
    fn cut_axioms_on_the_integer_lattice() {
        let p = z1();
        let w1 = Window::ball(pt1(0, 1), Q::ratio(5, 2));
        let w2 = Window::ball(pt1(1, 1), Q::ratio(3, 2));
        let lhs = p.cut(&w1).unwrap().cut(&w2).unwrap();
        let rhs = p.cut(&w1.intersect(&w2).unwrap()).unwrap();
        assert_eq!(lhs, rhs);
        assert_eq!(p.cut(&Window::All).unwrap(), p);
        assert!(p.cut(&Window::Empty).unwrap().is_zero());
    }

    #[test]
    fn unit_square_tiling_cut_example() {
        let board = AbstractPattern::labeled_patch(GroupSpec::translations(2), checkerboard(2));
        let cut = board
            .cut(&Window::ball(Point::origin(2), Q::ratio(1, 2)))
            .unwrap();
        assert!(cut.is_zero());
        assert_eq!(cut, board.zero_like());
    }

    #[test]
    fn act_identity_and_lattice_invariance() {
        let p = z1();
        assert_eq!(p.act(&Isometry::identity(1)).unwrap(), p);
        let moved = p.translate_by(&pt1(1, 1));
        assert_eq!(moved, p);
        let shifted = p.translate_by(&pt1(1, 2));
        assert_ne!(shifted, p);
    }

    #[test]
    fn order_is_inclusion_for_patches() {
        let board = AbstractPattern::labeled_patch(GroupSpec::translations(2), checkerboard(2));
        let window = Window::ball(Point::origin(2), Q::from_int(3));
        let small = board.cut(&window).unwrap();
        assert!(small.is_leq(&board).unwrap());
        assert!(!board.is_leq(&small).unwrap());
        assert!(small.is_leq(&small).unwrap());
        assert!(board.zero_like().is_leq(&small).unwrap());
    }

    #[test]
    fn incomparable_bumps_with_shared_support() {
        // Two maps that agree except at one point of their common support.
        let g = GroupSpec::translations(1);
        let mk = |v: Q| {
            AbstractPattern::map_pattern(
                g.clone(),
                MapPayload::finite(
                    1,
                    vec![
                        Placement::new(pt1(0, 1), AtomSpec::kronecker(vec![v])),
                        Placement::new(pt1(1, 1), AtomSpec::indicator(Q::ratio(1, 4), vec![Q::one()])),
                    ],
                ),
            )
        };
        let fa = mk(Q::from_int(2));
        let fb = mk(Q::from_int(3));
        assert!(!fa.is_leq(&fb).unwrap());
        assert!(!fb.is_leq(&fa).unwrap());
        assert!(!fa.are_compatible(&fb).unwrap());
    }

    #[test]
    fn compatibility_examples() {
        let g = GroupSpec::translations(1);
        // Subsets (0,1) and [1,2) are incompatible.
        let a = AbstractPattern::subset(
            g.clone(),
            SubsetPayload::new(vec![crate::instances::Interval::open(Q::zero(), Q::one())]),
        );
        let b = AbstractPattern::subset(
            g.clone(),
            SubsetPayload::new(vec![crate::instances::Interval::half_open(
                Q::one(),
                Q::from_int(2),
            )]),
        );
        assert!(!a.are_compatible(&b).unwrap());

        // Kronecker atoms at 0 and 1 are compatible (disjoint supports).
        let d0 = AbstractPattern::map_pattern(
            g.clone(),
            MapPayload::finite(1, vec![Placement::new(pt1(0, 1), AtomSpec::kronecker(vec![Q::one()]))]),
        );
        let d1 = AbstractPattern::map_pattern(
            g.clone(),
            MapPayload::finite(1, vec![Placement::new(pt1(1, 1), AtomSpec::kronecker(vec![Q::one()]))]),
        );
        assert!(d0.are_compatible(&d1).unwrap());
    }

    #[test]
    fn supremum_of_patches_is_union_and_commutes_with_cut() {
        let board = AbstractPattern::labeled_patch(GroupSpec::translations(2), checkerboard(2));
        let w1 = Window::ball(Point::origin(2), Q::from_int(2));
        let w2 = Window::ball(Point(vec![Q::from_int(2), Q::zero()]), Q::from_int(2));
        let a = board.cut(&w1).unwrap();
        let b = board.cut(&w2).unwrap();
        let space = a.space();
        let sup = supremum(&space, &PatternFamily::Finite(vec![a.clone(), b.clone()])).unwrap();
        // Glue law against a third window.
        let c = Window::ball(Point(vec![Q::one(), Q::zero()]), Q::from_int(2));
        let lhs = supremum(
            &space,
            &PatternFamily::Finite(vec![a.cut(&c).unwrap(), b.cut(&c).unwrap()]),
        )
        .unwrap();
        assert_eq!(lhs, sup.cut(&c).unwrap());
    }

    #[test]
    fn supremum_of_empty_family_is_zero_and_zero_is_neutral() {
        let space = SpaceSpec::new(PatternKind::Patch, GroupSpec::translations(2));
        let z = supremum(&space, &PatternFamily::Finite(vec![])).unwrap();
        assert!(z.is_zero());
        let board = AbstractPattern::labeled_patch(GroupSpec::translations(2), checkerboard(2));
        let cutp = board.cut(&Window::ball(Point::origin(2), Q::from_int(2))).unwrap();
        let space = cutp.space();
        let sup = supremum(
            &space,
            &PatternFamily::Finite(vec![cutp.clone(), cutp.zero_like()]),
        )
        .unwrap();
        assert_eq!(sup, cutp);
    }

    #[test]
    fn continuum_orbit_is_not_locally_finite() {
        let g = GroupSpec::translations(1);
        let delta = AbstractPattern::map_pattern(
            g.clone(),
            MapPayload::finite(1, vec![Placement::new(pt1(0, 1), AtomSpec::kronecker(vec![Q::one()]))]),
        );
        let space = delta.space();
        let fam = PatternFamily::ContinuumTranslates {
            base: delta,
            region: Ball::new(pt1(1, 2), Q::ratio(1, 2)),
        };
        match supremum(&space, &fam) {
            Err(Error::NotLocallyFinite { .. }) => {}
            other => panic!("expected NotLocallyFinite, got {other:?}"),
        }
    }

    #[test]
    fn zero_uniqueness_via_empty_cut() {
        for kind in [
            PatternKind::PointSet,
            PatternKind::Patch,
            PatternKind::LabeledPatch,
            PatternKind::MapPattern,
            PatternKind::DiracComb,
            PatternKind::Plan,
        ] {
            let g = GroupSpec::translations(2);
            let z = zero_of(kind, &g);
            assert!(z.is_zero());
            assert_eq!(z.cut(&Window::Empty).unwrap(), z);
        }
        let p = z1();
        assert_eq!(p.cut(&Window::Empty).unwrap(), p.zero_like());
    }

    #[test]
    fn support_window_axiom() {
        let p = z1();
        let w = Window::ball(pt1(0, 1), Q::from_int(3));
        // Periodic support is never inside a bounded window.
        assert!(!p.support_in_window(&w).unwrap());
        assert_ne!(p.cut(&w).unwrap(), p);
        let finite = p.cut(&w).unwrap();
        let big = Window::ball(pt1(0, 1), Q::from_int(10));
        assert!(finite.support_in_window(&big).unwrap());
        assert_eq!(finite.cut(&big).unwrap(), finite);
    }

    #[test]
    fn bounded_components_certificates() {
        let board = AbstractPattern::labeled_patch(GroupSpec::translations(2), checkerboard(2));
        let cert = board.bounded_component_radius().unwrap();
        assert_eq!(cert.radius_sq, Q::from_int(2));
        let p = z1();
        assert_eq!(p.bounded_component_radius().unwrap().radius_sq, Q::one());
        let whole = AbstractPattern::patch(GroupSpec::translations(2), PatchPayload::whole_space());
        assert!(whole.bounded_component_radius().is_none());
    }
}
