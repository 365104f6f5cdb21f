//! One-dimensional subsets: finite unions of rational intervals with open or
//! closed endpoints, plus isolated points. This is the computable fragment of
//! the space of all subsets used for order and compatibility semantics that
//! depend on closures.

use crate::error::{Error, Result};
use crate::geometry::{Isometry, Point, Window};
use crate::num::Q;
use serde::{Deserialize, Serialize};

/// Interval with endpoint flags; lo == hi with both ends closed is a point.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Interval {
    pub lo: Q,
    pub hi: Q,
    pub lo_closed: bool,
    pub hi_closed: bool,
}

impl Interval {
    pub fn closed(lo: Q, hi: Q) -> Interval {
        Interval {
            lo,
            hi,
            lo_closed: true,
            hi_closed: true,
        }
    }

    pub fn open(lo: Q, hi: Q) -> Interval {
        Interval {
            lo,
            hi,
            lo_closed: false,
            hi_closed: false,
        }
    }

    pub fn half_open(lo: Q, hi: Q) -> Interval {
        Interval {
            lo,
            hi,
            lo_closed: true,
            hi_closed: false,
        }
    }

    pub fn point(x: Q) -> Interval {
        Interval::closed(x.clone(), x)
    }

    pub fn is_valid(&self) -> bool {
        self.lo < self.hi || (self.lo == self.hi && self.lo_closed && self.hi_closed)
    }

    pub fn contains(&self, x: &Q) -> bool {
        let lo_ok = if self.lo_closed {
            &self.lo <= x
        } else {
            &self.lo < x
        };
        let hi_ok = if self.hi_closed {
            x <= &self.hi
        } else {
            x < &self.hi
        };
        lo_ok && hi_ok
    }

    pub fn closure(&self) -> Interval {
        Interval::closed(self.lo.clone(), self.hi.clone())
    }

    fn intersect(&self, other: &Interval) -> Option<Interval> {
        let (lo, lo_closed) = match self.lo.cmp(&other.lo) {
            std::cmp::Ordering::Greater => (self.lo.clone(), self.lo_closed),
            std::cmp::Ordering::Less => (other.lo.clone(), other.lo_closed),
            std::cmp::Ordering::Equal => (self.lo.clone(), self.lo_closed && other.lo_closed),
        };
        let (hi, hi_closed) = match self.hi.cmp(&other.hi) {
            std::cmp::Ordering::Less => (self.hi.clone(), self.hi_closed),
            std::cmp::Ordering::Greater => (other.hi.clone(), other.hi_closed),
            std::cmp::Ordering::Equal => (self.hi.clone(), self.hi_closed && other.hi_closed),
        };
        let out = Interval {
            lo,
            hi,
            lo_closed,
            hi_closed,
        };
        out.is_valid().then_some(out)
    }

    /// Can the two be merged into one interval (overlapping or touching with
    /// at least one closed endpoint)? Assumes self.lo <= other.lo.
    fn mergeable(&self, other: &Interval) -> bool {
        if other.lo < self.hi {
            return true;
        }
        if other.lo == self.hi {
            return self.hi_closed || other.lo_closed;
        }
        false
    }

    fn merge(&self, other: &Interval) -> Interval {
        debug_assert!(self.mergeable(other));
        let (hi, hi_closed) = match self.hi.cmp(&other.hi) {
            std::cmp::Ordering::Less => (other.hi.clone(), other.hi_closed),
            std::cmp::Ordering::Greater => (self.hi.clone(), self.hi_closed),
            std::cmp::Ordering::Equal => (self.hi.clone(), self.hi_closed || other.hi_closed),
        };
        Interval {
            lo: self.lo.clone(),
            hi,
            lo_closed: self.lo_closed,
            hi_closed,
        }
    }
}

/// Canonical finite union of disjoint, non-mergeable intervals, sorted.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SubsetPayload {
    pub intervals: Vec<Interval>,
}

impl SubsetPayload {
    pub fn new(intervals: Vec<Interval>) -> SubsetPayload {
        SubsetPayload { intervals }.canonical()
    }

    pub fn empty() -> SubsetPayload {
        SubsetPayload { intervals: vec![] }
    }

    pub fn canonical(mut self) -> SubsetPayload {
        self.intervals.retain(Interval::is_valid);
        self.intervals.sort();
        let mut out: Vec<Interval> = Vec::new();
        for iv in self.intervals.drain(..) {
            match out.last_mut() {
                Some(last) if last.mergeable(&iv) => {
                    *last = last.merge(&iv);
                }
                _ => out.push(iv),
            }
        }
        SubsetPayload { intervals: out }
    }

    pub fn validate(&self) -> Result<()> {
        for iv in &self.intervals {
            if !iv.is_valid() {
                return Err(Error::InvalidPayload("empty interval in subset".into()));
            }
        }
        Ok(())
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn contains(&self, x: &Q) -> bool {
        self.intervals.iter().any(|iv| iv.contains(x))
    }

    pub fn closure(&self) -> SubsetPayload {
        SubsetPayload::new(self.intervals.iter().map(Interval::closure).collect())
    }

    pub fn intersect(&self, other: &SubsetPayload) -> SubsetPayload {
        let mut out = Vec::new();
        for a in &self.intervals {
            for b in &other.intervals {
                if let Some(c) = a.intersect(b) {
                    out.push(c);
                }
            }
        }
        SubsetPayload::new(out)
    }

    pub fn union(&self, other: &SubsetPayload) -> SubsetPayload {
        SubsetPayload::new(
            self.intervals
                .iter()
                .chain(&other.intervals)
                .cloned()
                .collect(),
        )
    }

    pub fn is_subset_of(&self, other: &SubsetPayload) -> bool {
        self.intersect(other) == *self
    }

    /// Compatibility of subsets: closure(A) meet B inside A and A meet
    /// closure(B) inside B.
    pub fn compatible_with(&self, other: &SubsetPayload) -> bool {
        self.closure().intersect(other).is_subset_of(self)
            && self.intersect(&other.closure()).is_subset_of(other)
    }

    pub fn cut(&self, w: &Window) -> Result<SubsetPayload> {
        Ok(match w {
            Window::All => self.clone(),
            Window::Empty => SubsetPayload::empty(),
            Window::Balls(balls) => {
                let mut out = self.clone();
                for b in balls {
                    let iv = Interval::closed(&b.center.0[0] - &b.radius, &b.center.0[0] + &b.radius);
                    out = out.intersect(&SubsetPayload::new(vec![iv]));
                }
                out
            }
            Window::GroupBalls(_) => {
                return Err(Error::Unsupported(
                    "subsets live over Euclidean space, not the group".into(),
                ))
            }
        })
    }

    pub fn act(&self, g: &Isometry) -> SubsetPayload {
        let flip = !g.rotation.is_identity();
        SubsetPayload::new(
            self.intervals
                .iter()
                .map(|iv| {
                    let a = g.apply(&Point(vec![iv.lo.clone()])).0[0].clone();
                    let b = g.apply(&Point(vec![iv.hi.clone()])).0[0].clone();
                    if flip {
                        Interval {
                            lo: b,
                            hi: a,
                            lo_closed: iv.hi_closed,
                            hi_closed: iv.lo_closed,
                        }
                    } else {
                        Interval {
                            lo: a,
                            hi: b,
                            lo_closed: iv.lo_closed,
                            hi_closed: iv.hi_closed,
                        }
                    }
                })
                .collect(),
        )
    }

    pub fn support_contains(&self, x: &Q) -> bool {
        self.closure().contains(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Q {
        Q::ratio(n, d)
    }

    #[test]
    fn open_and_half_open_compatibility() {
        // A = (0,1), B = [1,2): closure(A) meets B at {1} which is not in A.
        let a = SubsetPayload::new(vec![Interval::open(q(0, 1), q(1, 1))]);
        let b = SubsetPayload::new(vec![Interval::half_open(q(1, 1), q(2, 1))]);
        assert!(!a.compatible_with(&b));

        // A = (0,1), B = (1,2) are compatible (closures only share a non-member).
        let c = SubsetPayload::new(vec![Interval::open(q(1, 1), q(2, 1))]);
        assert!(a.compatible_with(&c));
        assert!(a.compatible_with(&a));
    }

    #[test]
    fn canonical_merge() {
        let u = SubsetPayload::new(vec![
            Interval::open(q(0, 1), q(1, 1)),
            Interval::half_open(q(1, 1), q(2, 1)),
        ]);
        assert_eq!(u.intervals.len(), 1);
        assert!(u.contains(&q(1, 1)));
        assert!(!u.contains(&q(0, 1)));
        assert!(!u.contains(&q(2, 1)));

        // Two open intervals touching at a point do not merge.
        let v = SubsetPayload::new(vec![
            Interval::open(q(0, 1), q(1, 1)),
            Interval::open(q(1, 1), q(2, 1)),
        ]);
        assert_eq!(v.intervals.len(), 2);
    }

    #[test]
    fn reflection_swaps_endpoint_flags() {
        let a = SubsetPayload::new(vec![Interval::half_open(q(0, 1), q(1, 1))]);
        let refl = Isometry::new(
            Point(vec![Q::zero()]),
            crate::geometry::PointGroupElement::minus_identity(1),
        );
        let b = a.act(&refl);
        assert!(b.contains(&q(0, 1)));
        assert!(!b.contains(&q(-1, 1)));
        assert!(b.contains(&q(-1, 2)));
    }
}
