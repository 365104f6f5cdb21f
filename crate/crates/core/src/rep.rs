//! Finite and lattice-periodic representations of pattern payloads, generic
//! over the component type (points, tiles, atom placements, isometries).
//!
//! Periodic representations are canonicalized to the maximal translation
//! lattice of the pattern with the motif reduced into the fundamental domain,
//! so structural equality of canonical forms is pattern equality.

use crate::error::{Error, Result};
use crate::geometry::Point;
use crate::lattice::Lattice;
use crate::num::{sqrt_ceil, Q};
use serde::{Deserialize, Serialize};
use std::fmt::Debug;
use std::hash::Hash;

/// A payload component that can be placed by translations.
pub trait Component: Clone + Ord + Eq + Hash + Debug {
    /// Translation-equivariant anchor point.
    fn anchor(&self) -> Point;
    fn translated(&self, v: &Point) -> Self;
    /// Squared radius bound: the component's support lies in
    /// B(anchor, sqrt(bound)).
    fn radius_sq_bound(&self) -> Q;
}

impl Component for Point {
    fn anchor(&self) -> Point {
        self.clone()
    }
    fn translated(&self, v: &Point) -> Point {
        self.add(v)
    }
    fn radius_sq_bound(&self) -> Q {
        Q::zero()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Rep<T> {
    Finite(Vec<T>),
    Periodic { lattice: Lattice, motif: Vec<T> },
}

impl<T: Component> Rep<T> {
    pub fn empty() -> Rep<T> {
        Rep::Finite(Vec::new())
    }

    pub fn is_empty(&self) -> bool {
        match self {
            Rep::Finite(v) => v.is_empty(),
            Rep::Periodic { motif, .. } => motif.is_empty(),
        }
    }

    pub fn is_periodic(&self) -> bool {
        matches!(self, Rep::Periodic { .. })
    }

    pub fn motif(&self) -> &[T] {
        match self {
            Rep::Finite(v) => v,
            Rep::Periodic { motif, .. } => motif,
        }
    }

    pub fn lattice(&self) -> Option<&Lattice> {
        match self {
            Rep::Finite(_) => None,
            Rep::Periodic { lattice, .. } => Some(lattice),
        }
    }

    /// Canonical form: sorted deduplicated components; periodic payloads are
    /// reduced modulo their maximal translation lattice.
    pub fn canonical(self) -> Rep<T> {
        match self {
            Rep::Finite(mut v) => {
                v.sort();
                v.dedup();
                Rep::Finite(v)
            }
            Rep::Periodic { lattice, motif } => {
                if motif.is_empty() {
                    return Rep::Finite(Vec::new());
                }
                let mut lat = lattice;
                let mut motif = reduce_motif(&lat, motif);
                loop {
                    let base = motif[0].anchor();
                    let mut grew = false;
                    let candidates: Vec<Point> = motif
                        .iter()
                        .map(|c| c.anchor().sub(&base))
                        .filter(|t| !t.is_zero())
                        .collect();
                    let mut gens = lat.basis().to_vec();
                    for t in candidates {
                        if lat.contains(&t) {
                            continue;
                        }
                        if is_period(&lat, &motif, &t) {
                            gens.push(t);
                            grew = true;
                        }
                    }
                    if !grew {
                        break;
                    }
                    lat = Lattice::from_generators(lat.dim(), &gens)
                        .expect("period enlargement keeps full rank");
                    motif = reduce_motif(&lat, motif);
                }
                Rep::Periodic {
                    lattice: lat,
                    motif,
                }
            }
        }
    }

    /// All components whose anchor lies within `radius` of `center`
    /// (closed condition, radius rational).
    pub fn components_near(&self, center: &Point, radius: &Q) -> Vec<T> {
        match self {
            Rep::Finite(v) => v
                .iter()
                .filter(|c| c.anchor().dist_sq(center) <= radius.square())
                .cloned()
                .collect(),
            Rep::Periodic { lattice, motif } => {
                let mut out = Vec::new();
                for m in motif {
                    let a = m.anchor();
                    for l in lattice.points_in_ball(&center.sub(&a), radius) {
                        out.push(m.translated(&l));
                    }
                }
                out.sort();
                out
            }
        }
    }

    /// True iff every component of `self` is a component of `other`.
    pub fn subset_of(&self, other: &Rep<T>) -> bool {
        match (self, other) {
            (Rep::Finite(a), _) => a.iter().all(|c| other.contains_component(c)),
            (Rep::Periodic { .. }, Rep::Finite(_)) => self.is_empty(),
            (
                Rep::Periodic {
                    lattice: la,
                    motif: ma,
                },
                Rep::Periodic { lattice: lb, .. },
            ) => {
                // Every translate m + l (l in la) must lie in other; membership
                // only depends on l modulo la meet lb.
                let Ok(meet) = la.intersect(lb) else {
                    return false;
                };
                let reps = la.coset_representatives(&meet);
                ma.iter().all(|m| {
                    reps.iter()
                        .all(|r| other.contains_component(&m.translated(r)))
                })
            }
        }
    }

    pub fn contains_component(&self, c: &T) -> bool {
        match self {
            Rep::Finite(v) => v.contains(c),
            Rep::Periodic { lattice, motif } => {
                let (_, l) = lattice.reduce(&c.anchor());
                let shifted = c.translated(&l.neg());
                motif.contains(&shifted)
            }
        }
    }

    pub fn map<U: Component>(&self, f: impl Fn(&T) -> U) -> Rep<U> {
        match self {
            Rep::Finite(v) => Rep::Finite(v.iter().map(f).collect()),
            Rep::Periodic { lattice, motif } => Rep::Periodic {
                lattice: lattice.clone(),
                motif: motif.iter().map(f).collect(),
            },
        }
    }

    /// Finite list of all components (error for periodic payloads).
    pub fn finite_components(&self) -> Result<&[T]> {
        match self {
            Rep::Finite(v) => Ok(v),
            Rep::Periodic { .. } => Err(Error::UnboundedRequest(
                "periodic payload has infinitely many components".into(),
            )),
        }
    }

    /// Merges two payloads; periodic parts are rebuilt on the common
    /// refinement lattice (rational lattices are always commensurate).
    pub fn union(&self, other: &Rep<T>) -> Result<Rep<T>> {
        let rep = match (self, other) {
            (Rep::Finite(a), Rep::Finite(b)) => {
                Rep::Finite(a.iter().chain(b).cloned().collect())
            }
            (Rep::Periodic { .. }, Rep::Finite(b)) if b.is_empty() => self.clone(),
            (Rep::Finite(a), Rep::Periodic { .. }) if a.is_empty() => other.clone(),
            (Rep::Finite(_), Rep::Periodic { .. }) | (Rep::Periodic { .. }, Rep::Finite(_)) => {
                return Err(Error::Unsupported(
                    "union of a finite and an infinite payload is not representable".into(),
                ))
            }
            (
                Rep::Periodic {
                    lattice: la,
                    motif: ma,
                },
                Rep::Periodic {
                    lattice: lb,
                    motif: mb,
                },
            ) => {
                let meet = la.intersect(lb)?;
                let mut motif = Vec::new();
                for r in la.coset_representatives(&meet) {
                    for m in ma {
                        motif.push(m.translated(&r));
                    }
                }
                for r in lb.coset_representatives(&meet) {
                    for m in mb {
                        motif.push(m.translated(&r));
                    }
                }
                Rep::Periodic {
                    lattice: meet,
                    motif,
                }
            }
        };
        Ok(rep.canonical())
    }

    /// Minimum squared distance between distinct component anchors
    /// (None when fewer than two components exist).
    pub fn min_anchor_dist_sq(&self) -> Option<Q> {
        match self {
            Rep::Finite(v) => {
                let mut best: Option<Q> = None;
                for (i, a) in v.iter().enumerate() {
                    for b in &v[i + 1..] {
                        let d = a.anchor().dist_sq(&b.anchor());
                        best = Some(match best.take() {
                            None => d,
                            Some(cur) => cur.min(d),
                        });
                    }
                }
                best
            }
            Rep::Periodic { lattice, motif } => {
                let shortest = lattice.shortest_vector_sq();
                let mut best = shortest.clone();
                // Distinct translates of motif anchors: differences a_i - a_j + l.
                let search = sqrt_ceil(&best)
                    + motif
                        .iter()
                        .map(|m| sqrt_ceil(&m.anchor().norm_sq()))
                        .max()
                        .unwrap_or(Q::zero())
                        * Q::from_int(2);
                for (i, a) in motif.iter().enumerate() {
                    for (j, b) in motif.iter().enumerate() {
                        let diff = a.anchor().sub(&b.anchor());
                        for l in lattice.points_in_ball(&diff.neg(), &search) {
                            if i == j && l.is_zero() {
                                continue;
                            }
                            let d = diff.add(&l).norm_sq();
                            if d.is_zero() && i != j {
                                // Distinct components share an anchor point.
                                return Some(Q::zero());
                            }
                            if !d.is_zero() && d < best {
                                best = d.clone();
                            }
                        }
                    }
                }
                Some(best)
            }
        }
    }

    /// Largest squared component radius bound over the motif.
    pub fn max_component_radius_sq(&self) -> Q {
        self.motif()
            .iter()
            .map(|c| c.radius_sq_bound())
            .max()
            .unwrap_or(Q::zero())
    }
}

fn reduce_motif<T: Component>(lattice: &Lattice, motif: Vec<T>) -> Vec<T> {
    let mut out: Vec<T> = motif
        .into_iter()
        .map(|c| {
            let (_, l) = lattice.reduce(&c.anchor());
            c.translated(&l.neg())
        })
        .collect();
    out.sort();
    out.dedup();
    out
}

fn is_period<T: Component>(lattice: &Lattice, motif: &[T], t: &Point) -> bool {
    motif.iter().all(|c| {
        let moved = c.translated(t);
        let (_, l) = lattice.reduce(&moved.anchor());
        let reduced = moved.translated(&l.neg());
        motif.contains(&reduced)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(coords: &[(i64, i64)]) -> Point {
        Point(coords.iter().map(|&(n, d)| Q::ratio(n, d)).collect())
    }

    fn lat(vs: &[&[(i64, i64)]]) -> Lattice {
        let gens: Vec<Point> = vs.iter().map(|v| pt(v)).collect();
        Lattice::from_generators(gens[0].dim(), &gens).unwrap()
    }

    #[test]
    fn canonicalization_finds_the_maximal_lattice() {
        // Z represented on the coarse lattice 2Z with motif {0, 1}.
        let rep = Rep::Periodic {
            lattice: lat(&[&[(2, 1)]]),
            motif: vec![pt(&[(0, 1)]), pt(&[(1, 1)])],
        }
        .canonical();
        let expected = Rep::Periodic {
            lattice: lat(&[&[(1, 1)]]),
            motif: vec![pt(&[(0, 1)])],
        };
        assert_eq!(rep, expected);
    }

    #[test]
    fn canonicalization_keeps_genuine_motifs() {
        // {0, 1/5} + Z has no period smaller than 1.
        let rep = Rep::Periodic {
            lattice: lat(&[&[(1, 1)]]),
            motif: vec![pt(&[(0, 1)]), pt(&[(1, 5)])],
        }
        .canonical();
        match &rep {
            Rep::Periodic { lattice, motif } => {
                assert_eq!(lattice, &lat(&[&[(1, 1)]]));
                assert_eq!(motif.len(), 2);
            }
            _ => panic!("expected periodic"),
        }
    }

    #[test]
    fn empty_periodic_collapses_to_finite_zero() {
        let rep: Rep<Point> = Rep::Periodic {
            lattice: lat(&[&[(1, 1)]]),
            motif: vec![],
        }
        .canonical();
        assert_eq!(rep, Rep::Finite(vec![]));
    }

    #[test]
    fn near_and_membership() {
        let z2 = Rep::Periodic {
            lattice: lat(&[&[(1, 1), (0, 1)], &[(0, 1), (1, 1)]]),
            motif: vec![pt(&[(0, 1), (0, 1)])],
        }
        .canonical();
        let near = z2.components_near(&pt(&[(0, 1), (0, 1)]), &Q::ratio(3, 2));
        assert_eq!(near.len(), 9);
        assert!(z2.contains_component(&pt(&[(7, 1), (-3, 1)])));
        assert!(!z2.contains_component(&pt(&[(1, 2), (0, 1)])));
    }

    #[test]
    fn subset_and_union_across_lattices() {
        let z = Rep::Periodic {
            lattice: lat(&[&[(1, 1)]]),
            motif: vec![pt(&[(0, 1)])],
        }
        .canonical();
        let half = Rep::Periodic {
            lattice: lat(&[&[(1, 2)]]),
            motif: vec![pt(&[(0, 1)])],
        }
        .canonical();
        assert!(z.subset_of(&half));
        assert!(!half.subset_of(&z));
        let evens = Rep::Periodic {
            lattice: lat(&[&[(2, 1)]]),
            motif: vec![pt(&[(0, 1)])],
        }
        .canonical();
        let odds = Rep::Periodic {
            lattice: lat(&[&[(2, 1)]]),
            motif: vec![pt(&[(1, 1)])],
        }
        .canonical();
        assert_eq!(evens.union(&odds).unwrap(), z);
    }

    #[test]
    fn min_separation() {
        let fifth = Rep::Periodic {
            lattice: lat(&[&[(1, 1)]]),
            motif: vec![pt(&[(1, 5)]), pt(&[(-1, 5)])],
        }
        .canonical();
        assert_eq!(fifth.min_anchor_dist_sq().unwrap(), Q::ratio(4, 25));
    }
}
