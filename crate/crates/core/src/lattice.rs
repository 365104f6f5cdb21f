//! Rational lattices in R^d: canonical (Hermite normal form) bases, sums and
//! intersections, membership and fundamental-domain reduction, coset
//! enumeration, and exact enumeration of lattice points in balls.

use crate::error::{Error, Result};
use crate::geometry::{Mat, Point};
use crate::num::{sqrt_ceil, Q};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

/// A full-rank rational lattice, stored through its canonical HNF basis
/// (rows, lower triangular with positive diagonal and reduced sub-diagonal).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Lattice {
    basis: Vec<Point>,
}

fn lcm_big(a: &BigInt, b: &BigInt) -> BigInt {
    if a.is_zero() || b.is_zero() {
        return BigInt::one();
    }
    (a * b).abs() / a.gcd(b)
}

/// Row-style Hermite normal form of an integer matrix. Returns the nonzero
/// rows: lower triangular after column permutation is NOT applied -- we keep
/// natural column order, positive pivots, and entries above each pivot reduced.
fn hnf_rows(mut rows: Vec<Vec<BigInt>>, cols: usize) -> Vec<Vec<BigInt>> {
    let mut pivot_row = 0;
    for col in 0..cols {
        // Eliminate below by gcd steps.
        loop {
            let mut best: Option<usize> = None;
            for r in pivot_row..rows.len() {
                if !rows[r][col].is_zero() {
                    let mag = rows[r][col].abs();
                    best = match best {
                        None => Some(r),
                        Some(b) if mag < rows[b][col].abs() => Some(r),
                        keep => keep,
                    };
                }
            }
            let Some(b) = best else { break };
            rows.swap(pivot_row, b);
            let mut done = true;
            let pivot = rows[pivot_row][col].clone();
            for r in pivot_row + 1..rows.len() {
                if !rows[r][col].is_zero() {
                    let q = rows[r][col].div_floor(&pivot);
                    for c in 0..cols {
                        let sub = &q * &rows[pivot_row][c];
                        rows[r][c] -= sub;
                    }
                    if !rows[r][col].is_zero() {
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
        if pivot_row < rows.len() && !rows[pivot_row][col].is_zero() {
            if rows[pivot_row][col].is_negative() {
                for c in 0..cols {
                    rows[pivot_row][c] = -rows[pivot_row][c].clone();
                }
            }
            // Reduce the rows above against this pivot.
            let pivot = rows[pivot_row][col].clone();
            for r in 0..pivot_row {
                let q = rows[r][col].div_floor(&pivot);
                if !q.is_zero() {
                    for c in 0..cols {
                        let sub = &q * &rows[pivot_row][c];
                        rows[r][c] -= sub;
                    }
                }
            }
            pivot_row += 1;
        }
    }
    rows.truncate(pivot_row);
    rows
}

impl Lattice {
    /// Builds the lattice generated by the given vectors; they must span R^d.
    pub fn from_generators(dim: usize, generators: &[Point]) -> Result<Lattice> {
        if generators.iter().any(|g| g.dim() != dim) {
            return Err(Error::InvalidPayload("generator dimension mismatch".into()));
        }
        // Common denominator scaling to integers.
        let mut denom = BigInt::one();
        for g in generators {
            for c in &g.0 {
                denom = lcm_big(&denom, c.0.denom());
            }
        }
        let rows: Vec<Vec<BigInt>> = generators
            .iter()
            .map(|g| {
                g.0.iter()
                    .map(|c| (&c.0 * BigRational::from_integer(denom.clone())).to_integer())
                    .collect()
            })
            .collect();
        let h = hnf_rows(rows, dim);
        if h.len() != dim {
            return Err(Error::InvalidPayload(
                "lattice generators do not span the space".into(),
            ));
        }
        let basis = h
            .into_iter()
            .map(|row| {
                Point(
                    row.into_iter()
                        .map(|n| Q(BigRational::new(n, denom.clone())))
                        .collect(),
                )
            })
            .collect();
        Ok(Lattice { basis })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Point] {
        &self.basis
    }

    /// Basis matrix with basis vectors as rows.
    fn basis_mat(&self) -> Mat {
        Mat(self.basis.iter().map(|b| b.0.clone()).collect())
    }

    /// Coordinates of x in the basis: solves c * B = x (row convention).
    pub fn coords(&self, x: &Point) -> Vec<Q> {
        let inv = self
            .basis_mat()
            .transpose()
            .inverse()
            .expect("lattice basis is invertible");
        inv.apply(x).0
    }

    pub fn from_coords(&self, coords: &[Q]) -> Point {
        let mut acc = Point::origin(self.dim());
        for (c, b) in coords.iter().zip(&self.basis) {
            acc = acc.add(&b.scale(c));
        }
        acc
    }

    pub fn contains(&self, x: &Point) -> bool {
        self.coords(x).iter().all(Q::is_integer)
    }

    /// Splits x as l + r with l in the lattice and r in the fundamental domain
    /// (coordinates in [0, 1)); returns (reduced remainder, lattice part).
    pub fn reduce(&self, x: &Point) -> (Point, Point) {
        let coords = self.coords(x);
        let int_part: Vec<Q> = coords.iter().map(|c| Q(BigRational::from(c.floor()))).collect();
        let l = self.from_coords(&int_part);
        (x.sub(&l), l)
    }

    /// |det| of the basis matrix (covolume).
    pub fn covolume(&self) -> Q {
        self.basis_mat().det().abs()
    }

    /// Smallest lattice containing both.
    pub fn sum(&self, other: &Lattice) -> Result<Lattice> {
        let gens: Vec<Point> = self
            .basis
            .iter()
            .chain(other.basis.iter())
            .cloned()
            .collect();
        Lattice::from_generators(self.dim(), &gens)
    }

    /// Dual lattice {y : <y, x> in Z for all x in L}.
    pub fn dual(&self) -> Lattice {
        let inv = self
            .basis_mat()
            .inverse()
            .expect("lattice basis is invertible");
        // Rows of (B^-1)^T = columns of B^-1 generate the dual.
        let cols = inv.transpose();
        Lattice {
            basis: cols.0.into_iter().map(Point).collect(),
        }
        .canonicalized()
    }

    fn canonicalized(self) -> Lattice {
        Lattice::from_generators(self.dim(), &self.basis).expect("basis spans")
    }

    /// Largest lattice contained in both: the dual of the sum of the duals.
    pub fn intersect(&self, other: &Lattice) -> Result<Lattice> {
        Ok(self.dual().sum(&other.dual())?.dual())
    }

    /// True iff other is a sublattice of self.
    pub fn contains_lattice(&self, other: &Lattice) -> bool {
        other.basis.iter().all(|b| self.contains(b))
    }

    /// Representatives of self / sub (sub must be a sublattice of self).
    pub fn coset_representatives(&self, sub: &Lattice) -> Vec<Point> {
        debug_assert!(self.contains_lattice(sub));
        // Write sub's basis in self-coordinates: integer matrix M; cosets of
        // M Z^d in Z^d enumerate via the HNF diagonal.
        let rows: Vec<Vec<BigInt>> = sub
            .basis
            .iter()
            .map(|b| {
                self.coords(b)
                    .iter()
                    .map(|c| {
                        debug_assert!(c.is_integer());
                        c.floor()
                    })
                    .collect()
            })
            .collect();
        let h = hnf_rows(rows, self.dim());
        debug_assert_eq!(h.len(), self.dim());
        let diag: Vec<BigInt> = (0..self.dim()).map(|i| h[i][i].clone()).collect();
        let mut reps = vec![vec![BigInt::zero(); self.dim()]];
        for (i, d) in diag.iter().enumerate() {
            let mut next = Vec::new();
            let mut k = BigInt::zero();
            while &k < d {
                for r in &reps {
                    let mut r2 = r.clone();
                    r2[i] = k.clone();
                    next.push(r2);
                }
                k += 1;
            }
            reps = next;
        }
        reps.into_iter()
            .map(|r| {
                let coords: Vec<Q> = r.into_iter().map(|n| Q(BigRational::from(n))).collect();
                self.from_coords(&coords)
            })
            .collect()
    }

    /// All lattice points l with |l - center| <= radius (radius rational).
    pub fn points_in_ball(&self, center: &Point, radius: &Q) -> Vec<Point> {
        if radius.is_negative() {
            return Vec::new();
        }
        let dim = self.dim();
        let inv = self
            .basis_mat()
            .transpose()
            .inverse()
            .expect("lattice basis is invertible");
        // |c_i| bound: c = B^-T x ; |c_i - c_i(center)| <= |row_i| * radius.
        let center_coords = inv.apply(center);
        let mut ranges = Vec::with_capacity(dim);
        for i in 0..dim {
            let row = Point(inv.0[i].clone());
            let row_norm = sqrt_ceil(&row.norm_sq());
            let slack = &row_norm * radius;
            let lo = (&center_coords.0[i] - &slack).ceil();
            let hi = (&center_coords.0[i] + &slack).floor();
            ranges.push((lo, hi));
        }
        let mut out = Vec::new();
        let mut idx: Vec<BigInt> = ranges.iter().map(|(lo, _)| lo.clone()).collect();
        let r_sq = radius.square();
        'outer: loop {
            let coords: Vec<Q> = idx.iter().map(|n| Q(BigRational::from(n.clone()))).collect();
            let p = self.from_coords(&coords);
            if p.dist_sq(center) <= r_sq {
                out.push(p);
            }
            // Odometer increment.
            for i in 0..dim {
                idx[i] += 1;
                if idx[i] <= ranges[i].1 {
                    continue 'outer;
                }
                idx[i] = ranges[i].0.clone();
                if i == dim - 1 {
                    break 'outer;
                }
            }
            if dim == 0 {
                break;
            }
        }
        out.sort();
        out
    }

    /// Shortest nonzero squared vector length (exact, by bounded enumeration).
    pub fn shortest_vector_sq(&self) -> Q {
        // Any basis vector bounds the shortest vector.
        let bound = self
            .basis
            .iter()
            .map(|b| b.norm_sq())
            .min()
            .expect("nonempty basis");
        let radius = sqrt_ceil(&bound);
        let mut best = bound.clone();
        for p in self.points_in_ball(&Point::origin(self.dim()), &radius) {
            if !p.is_zero() && p.norm_sq() < best {
                best = p.norm_sq();
            }
        }
        best
    }

    /// A rational bound r such that every point of R^d lies within r of the
    /// lattice (crude but sound: half the sum of basis lengths).
    pub fn covering_bound(&self) -> Q {
        let mut acc = Q::zero();
        for b in &self.basis {
            acc = acc + sqrt_ceil(&b.norm_sq());
        }
        acc * Q::ratio(1, 2) + Q::ratio(1, 100)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(coords: &[(i64, i64)]) -> Point {
        Point(coords.iter().map(|&(n, d)| Q::ratio(n, d)).collect())
    }

    fn zsq() -> Lattice {
        Lattice::from_generators(2, &[pt(&[(1, 1), (0, 1)]), pt(&[(0, 1), (1, 1)])]).unwrap()
    }

    #[test]
    fn canonical_basis_is_independent_of_generators() {
        let a = zsq();
        let b = Lattice::from_generators(2, &[pt(&[(1, 1), (0, 1)]), pt(&[(1, 1), (1, 1)])])
            .unwrap();
        assert_eq!(a, b);
        let c = Lattice::from_generators(
            2,
            &[
                pt(&[(2, 1), (1, 1)]),
                pt(&[(1, 1), (1, 1)]),
                pt(&[(3, 1), (0, 1)]),
            ],
        )
        .unwrap();
        assert_eq!(a, c);
    }

    #[test]
    fn membership_and_reduction() {
        let l = zsq();
        assert!(l.contains(&pt(&[(3, 1), (-5, 1)])));
        assert!(!l.contains(&pt(&[(1, 2), (0, 1)])));
        let (r, lp) = l.reduce(&pt(&[(7, 2), (-3, 4)]));
        assert!(l.contains(&lp));
        assert_eq!(r.add(&lp), pt(&[(7, 2), (-3, 4)]));
        assert_eq!(r, pt(&[(1, 2), (1, 4)]));
    }

    #[test]
    fn sum_and_intersection() {
        let l = zsq();
        let half = Lattice::from_generators(2, &[pt(&[(1, 2), (0, 1)]), pt(&[(0, 1), (1, 1)])])
            .unwrap();
        let s = l.sum(&half).unwrap();
        assert_eq!(s, half);
        let i = l.intersect(&half).unwrap();
        assert_eq!(i, l);

        // Checkerboard lattice D2 = {z : z1+z2 even} meets (2Z)^2 correctly.
        let d2 = Lattice::from_generators(2, &[pt(&[(1, 1), (1, 1)]), pt(&[(1, 1), (-1, 1)])])
            .unwrap();
        assert!(l.contains_lattice(&d2));
        assert_eq!(d2.covolume(), Q::from_int(2));
        let reps = l.coset_representatives(&d2);
        assert_eq!(reps.len(), 2);
    }

    #[test]
    fn ball_enumeration_matches_hand_count() {
        let l = zsq();
        let pts = l.points_in_ball(&Point::origin(2), &Q::ratio(3, 2));
        assert_eq!(pts.len(), 9); // {-1,0,1}^2
        let pts = l.points_in_ball(&Point::origin(2), &Q::one());
        assert_eq!(pts.len(), 5); // origin + 4 unit neighbors
    }

    #[test]
    fn shortest_vector() {
        let d2 = Lattice::from_generators(2, &[pt(&[(1, 1), (1, 1)]), pt(&[(1, 1), (-1, 1)])])
            .unwrap();
        assert_eq!(d2.shortest_vector_sq(), Q::from_int(2));
    }
}
