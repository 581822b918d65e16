//! Rational vectors and overlattices of the integer lattice.
//!
//! A [`Lattice`] is always a finite-index overlattice of `Z^D`, stored by the
//! upper-triangular column Hermite normal form of its basis. Two lattices are
//! equal exactly when their stored bases are equal.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::rational::{common_denominator, int, is_integer, parse_rat, Rat};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RatVec<const D: usize>(pub [Rat; D]);

pub type RatVec2 = RatVec<2>;
pub type RatVec3 = RatVec<3>;

impl<const D: usize> RatVec<D> {
    pub fn zero() -> Self {
        RatVec(std::array::from_fn(|_| Rat::zero()))
    }

    pub fn from_ints(coords: [i64; D]) -> Self {
        RatVec(coords.map(int))
    }

    /// Vector `coords / denom`.
    pub fn from_fracs(coords: [i64; D], denom: i64) -> Self {
        RatVec(coords.map(|c| Rat::new(BigInt::from(c), BigInt::from(denom))))
    }

    pub fn unit(axis: usize) -> Self {
        RatVec(std::array::from_fn(|i| if i == axis { Rat::one() } else { Rat::zero() }))
    }

    pub fn coords(&self) -> &[Rat; D] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn scale(&self, factor: &Rat) -> Self {
        RatVec(std::array::from_fn(|i| &self.0[i] * factor))
    }

    pub fn add(&self, other: &Self) -> Self {
        RatVec(std::array::from_fn(|i| &self.0[i] + &other.0[i]))
    }

    pub fn sub(&self, other: &Self) -> Self {
        RatVec(std::array::from_fn(|i| &self.0[i] - &other.0[i]))
    }

    pub fn sum(&self) -> Rat {
        self.0.iter().sum()
    }

    /// The primitive integer vector on the ray through `self`.
    pub fn integer_direction(&self) -> Result<[BigInt; D]> {
        if self.is_zero() {
            return Err(Error::ZeroVector);
        }
        let denom = Rat::from_integer(common_denominator(self.0.iter()));
        let ints: [BigInt; D] = std::array::from_fn(|i| (&self.0[i] * &denom).to_integer());
        let g = ints.iter().fold(BigInt::zero(), |acc, v| acc.gcd(v));
        Ok(ints.map(|v| v / &g))
    }
}

impl RatVec2 {
    pub fn cross(&self, other: &Self) -> Rat {
        &self.0[0] * &other.0[1] - &self.0[1] * &other.0[0]
    }

    /// Angular comparison of two nonzero directions in the closed first
    /// quadrant, counter-clockwise from the positive first axis.
    pub fn angle_cmp(&self, other: &Self) -> std::cmp::Ordering {
        other.cross(self).cmp(&Rat::zero())
    }
}

impl<const D: usize> fmt::Debug for RatVec<D> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl<const D: usize> fmt::Display for RatVec<D> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl<const D: usize> Serialize for RatVec<D> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.0.iter().map(|c| c.to_string()))
    }
}

impl<'de, const D: usize> Deserialize<'de> for RatVec<D> {
    fn deserialize<De: Deserializer<'de>>(d: De) -> std::result::Result<Self, De::Error> {
        let texts = Vec::<String>::deserialize(d)?;
        if texts.len() != D {
            return Err(serde::de::Error::custom(format!(
                "expected {D} coordinates, found {}",
                texts.len()
            )));
        }
        let mut coords = Vec::with_capacity(D);
        for t in &texts {
            coords.push(parse_rat(t).map_err(serde::de::Error::custom)?);
        }
        Ok(RatVec(coords.try_into().expect("length checked")))
    }
}

/// Upper-triangular column Hermite normal form of the lattice spanned by
/// integer `columns` in `Z^d`. Column `j` of the result has nonzero entries
/// only in rows `0..=j`, a positive diagonal, and `0 <= H[i][j] < H[i][i]`
/// for `i < j`. Returns `None` when the columns do not span a full-rank lattice.
pub fn column_hnf(d: usize, columns: &[Vec<BigInt>]) -> Option<Vec<Vec<BigInt>>> {
    let mut pool: Vec<Vec<BigInt>> = columns
        .iter()
        .filter(|c| c.iter().any(|x| !x.is_zero()))
        .cloned()
        .collect();
    let mut basis: Vec<Option<Vec<BigInt>>> = vec![None; d];
    for row in (0..d).rev() {
        loop {
            let mut active: Vec<usize> = (0..pool.len()).filter(|&j| !pool[j][row].is_zero()).collect();
            if active.is_empty() {
                return None;
            }
            if active.len() == 1 {
                let mut pivot = pool.swap_remove(active[0]);
                if pivot[row].is_negative() {
                    pivot.iter_mut().for_each(|x| *x = -x.clone());
                }
                basis[row] = Some(pivot);
                break;
            }
            active.sort_by(|&a, &b| pool[a][row].abs().cmp(&pool[b][row].abs()));
            let smallest = pool[active[0]].clone();
            for &j in &active[1..] {
                let q = pool[j][row].div_floor(&smallest[row]);
                for (x, s) in pool[j].iter_mut().zip(&smallest) {
                    *x -= &q * s;
                }
            }
        }
        pool.retain(|c| c.iter().any(|x| !x.is_zero()));
    }
    let mut basis: Vec<Vec<BigInt>> = basis.into_iter().map(|c| c.expect("pivot per row")).collect();
    for j in 0..d {
        for i in (0..j).rev() {
            let q = basis[j][i].div_floor(&basis[i][i]);
            if !q.is_zero() {
                let col_i = basis[i].clone();
                for (x, s) in basis[j].iter_mut().zip(&col_i) {
                    *x -= &q * s;
                }
            }
        }
    }
    Some(basis)
}

/// A lattice `L` with `Z^D ⊆ L ⊂ Q^D`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Lattice<const D: usize> {
    /// Basis columns in canonical Hermite normal form.
    columns: [RatVec<D>; D],
}

pub type Lattice2 = Lattice<2>;
pub type Lattice3 = Lattice<3>;

impl<const D: usize> Lattice<D> {
    pub fn integer() -> Self {
        Lattice { columns: std::array::from_fn(RatVec::unit) }
    }

    /// `Z^D + sum Z * g` for the given generators, in canonical form.
    pub fn from_generators(gens: &[RatVec<D>]) -> Self {
        let denom = common_denominator(gens.iter().flat_map(|g| g.0.iter()));
        let scale = Rat::from_integer(denom.clone());
        let mut columns: Vec<Vec<BigInt>> = (0..D)
            .map(|i| (0..D).map(|k| if k == i { denom.clone() } else { BigInt::zero() }).collect())
            .collect();
        for g in gens {
            columns.push(g.0.iter().map(|c| (c * &scale).to_integer()).collect());
        }
        let hnf = column_hnf(D, &columns).expect("contains a scaled copy of Z^D");
        let columns = std::array::from_fn(|j| {
            RatVec(std::array::from_fn(|i| Rat::new(hnf[j][i].clone(), denom.clone())))
        });
        Lattice { columns }
    }

    pub fn basis(&self) -> &[RatVec<D>; D] {
        &self.columns
    }

    /// `|det(basis)|`, the covolume; equal to `1 / [L : Z^D]`.
    pub fn index(&self) -> Rat {
        (0..D).map(|i| self.columns[i].0[i].clone()).product()
    }

    /// `[L : Z^D]`.
    pub fn quotient_order(&self) -> usize {
        (Rat::one() / self.index())
            .to_integer()
            .to_usize()
            .expect("small quotient")
    }

    /// Coordinates of `v` in the stored basis.
    pub fn coordinates(&self, v: &RatVec<D>) -> [Rat; D] {
        let mut x: [Rat; D] = std::array::from_fn(|_| Rat::zero());
        for j in (0..D).rev() {
            let mut rest = v.0[j].clone();
            for k in j + 1..D {
                rest -= &self.columns[k].0[j] * &x[k];
            }
            x[j] = rest / &self.columns[j].0[j];
        }
        x
    }

    pub fn contains(&self, v: &RatVec<D>) -> bool {
        self.coordinates(v).iter().all(is_integer)
    }

    /// The lattice point on the ray `R_{>=0} v` closest to the origin.
    pub fn primitive(&self, v: &RatVec<D>) -> Result<RatVec<D>> {
        let dir = RatVec(v.integer_direction()?.map(Rat::from_integer));
        let order = self.quotient_order() as i64;
        let k = (1..=order)
            .rev()
            .find(|&k| self.contains(&dir.scale(&Rat::new(BigInt::one(), BigInt::from(k)))))
            .expect("Z^D is contained in the lattice");
        Ok(dir.scale(&Rat::new(BigInt::one(), BigInt::from(k))))
    }

    pub fn is_primitive(&self, v: &RatVec<D>) -> bool {
        self.contains(v) && self.primitive(v).map(|p| &p == v).unwrap_or(false)
    }

    /// Representatives of `L / Z^D` with coordinates in `[0, 1)`, sorted.
    pub fn coset_representatives(&self) -> Vec<RatVec<D>> {
        let reduce = |v: &RatVec<D>| RatVec(std::array::from_fn(|i| &v.0[i] - v.0[i].floor()));
        let mut reps = vec![RatVec::<D>::zero()];
        let mut frontier = reps.clone();
        while let Some(r) = frontier.pop() {
            for b in &self.columns {
                let next = reduce(&r.add(b));
                if !reps.contains(&next) {
                    reps.push(next.clone());
                    frontier.push(next);
                }
            }
        }
        reps.sort();
        reps
    }

    /// Every lattice point in the closed box `[lo, hi]`, lexicographically sorted.
    pub fn points_in_box(&self, lo: &RatVec<D>, hi: &RatVec<D>) -> Vec<RatVec<D>> {
        let mut out = Vec::new();
        for rep in self.coset_representatives() {
            let ranges: [(i64, i64); D] = std::array::from_fn(|i| {
                let a = (&lo.0[i] - &rep.0[i]).ceil().to_integer().to_i64().expect("small box");
                let b = (&hi.0[i] - &rep.0[i]).floor().to_integer().to_i64().expect("small box");
                (a, b)
            });
            if ranges.iter().any(|(a, b)| a > b) {
                continue;
            }
            let mut shift: [i64; D] = ranges.map(|(a, _)| a);
            loop {
                out.push(rep.add(&RatVec::from_ints(shift)));
                let mut axis = 0;
                loop {
                    if axis == D {
                        break;
                    }
                    if shift[axis] < ranges[axis].1 {
                        shift[axis] += 1;
                        break;
                    }
                    shift[axis] = ranges[axis].0;
                    axis += 1;
                }
                if axis == D {
                    break;
                }
            }
        }
        out.sort();
        out
    }

    fn scan_triangle(
        &self,
        corners: [&RatVec<D>; 3],
        barycentric: impl Fn(&RatVec<D>) -> Option<[Rat; 3]>,
    ) -> Vec<RatVec<D>> {
        let lo = RatVec(std::array::from_fn(|i| {
            corners.iter().map(|c| c.0[i].clone()).min().expect("three corners")
        }));
        let hi = RatVec(std::array::from_fn(|i| {
            corners.iter().map(|c| c.0[i].clone()).max().expect("three corners")
        }));
        self.points_in_box(&lo, &hi)
            .into_iter()
            .filter(|p| barycentric(p).is_some_and(|l| l.iter().all(|x| !x.is_negative())))
            .collect()
    }
}

impl Lattice2 {
    /// `det[u v] / det(basis)`; the pair is a lattice basis iff this is `±1`.
    pub fn pair_determinant(&self, u: &RatVec2, v: &RatVec2) -> Rat {
        u.cross(v) / self.index()
    }

    /// Lattice points of the closed triangle `abc`, lexicographically sorted.
    pub fn points_in_triangle(&self, a: &RatVec2, b: &RatVec2, c: &RatVec2) -> Result<Vec<RatVec2>> {
        let area = b.sub(a).cross(&c.sub(a));
        if area.is_zero() {
            return Err(Error::DegenerateTriangle);
        }
        Ok(self.scan_triangle([a, b, c], |p| {
            Some([
                b.sub(p).cross(&c.sub(p)) / &area,
                c.sub(p).cross(&a.sub(p)) / &area,
                a.sub(p).cross(&b.sub(p)) / &area,
            ])
        }))
    }
}

impl Lattice3 {
    /// Lattice points of the closed triangle `abc`, which must span a plane
    /// not passing through the origin (such as the junior plane).
    pub fn points_in_triangle(&self, a: &RatVec3, b: &RatVec3, c: &RatVec3) -> Result<Vec<RatVec3>> {
        let det = det3(a, b, c);
        if det.is_zero() {
            return Err(Error::DegenerateTriangle);
        }
        Ok(self.scan_triangle([a, b, c], |p| {
            let l = [det3(p, b, c) / &det, det3(a, p, c) / &det, det3(a, b, p) / &det];
            let total: Rat = l.iter().sum();
            total.is_one().then_some(l)
        }))
    }

    /// `det[a b c] / det(basis)`: the normalized volume of the cone on `a, b, c`.
    pub fn triple_determinant(&self, a: &RatVec3, b: &RatVec3, c: &RatVec3) -> Rat {
        det3(a, b, c) / self.index()
    }
}

pub fn det3(a: &RatVec3, b: &RatVec3, c: &RatVec3) -> Rat {
    let [a0, a1, a2] = &a.0;
    let [b0, b1, b2] = &b.0;
    let [c0, c1, c2] = &c.0;
    a0 * (b1 * c2 - b2 * c1) - a1 * (b0 * c2 - b2 * c0) + a2 * (b0 * c1 - b1 * c0)
}

impl<const D: usize> fmt::Debug for Lattice<D> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Lattice").field("basis", &self.columns).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn v2(p: i64, q: i64, d: i64) -> RatVec2 {
        RatVec::from_fracs([p, q], d)
    }

    #[test]
    fn hnf_of_one_third_one_one() {
        let l = Lattice2::from_generators(&[v2(1, 1, 3)]);
        assert_eq!(l.basis()[0], v2(1, 0, 1));
        assert_eq!(l.basis()[1], v2(1, 1, 3));
        assert_eq!(l.index(), rat(1, 3));
    }

    #[test]
    fn empty_generators_give_integer_lattice() {
        let l = Lattice2::from_generators(&[]);
        assert_eq!(l, Lattice2::integer());
        assert_eq!(l.index(), int(1));
    }

    #[test]
    fn index_of_one_eighth_one_three() {
        assert_eq!(Lattice2::from_generators(&[v2(1, 3, 8)]).index(), rat(1, 8));
    }

    #[test]
    fn membership() {
        let third = Lattice2::from_generators(&[v2(1, 1, 3)]);
        assert!(!third.contains(&v2(2, 1, 3)));
        assert!(Lattice2::integer().contains(&v2(1, 0, 1)));
        let eighth = Lattice2::from_generators(&[v2(1, 3, 8)]);
        assert!(eighth.contains(&v2(1, 1, 2)));
    }

    #[test]
    fn primitive_representatives() {
        let half = Lattice2::from_generators(&[v2(1, 0, 2)]);
        assert_eq!(half.primitive(&v2(1, 0, 1)).unwrap(), v2(1, 0, 2));
        assert_eq!(Lattice2::integer().primitive(&v2(2, 2, 1)).unwrap(), v2(1, 1, 1));
        let eighth = Lattice2::from_generators(&[v2(1, 3, 8)]);
        assert_eq!(eighth.primitive(&v2(1, 3, 4)).unwrap(), v2(1, 3, 8));
        assert_eq!(eighth.primitive(&RatVec2::zero()), Err(Error::ZeroVector));
    }

    #[test]
    fn pair_determinants() {
        let eighth = Lattice2::from_generators(&[v2(1, 3, 8)]);
        assert_eq!(eighth.pair_determinant(&v2(3, 1, 8), &v2(1, 1, 2)), int(1));
        let z = Lattice2::integer();
        assert_eq!(z.pair_determinant(&v2(1, 0, 1), &v2(0, 1, 1)), int(1));
        assert_eq!(z.pair_determinant(&v2(3, 1, 1), &v2(0, 1, 1)), int(3));
    }

    #[test]
    fn triangle_points_of_one_eighth() {
        let eighth = Lattice2::from_generators(&[v2(1, 3, 8)]);
        let pts = eighth
            .points_in_triangle(&v2(0, 0, 1), &v2(1, 0, 1), &v2(0, 1, 1))
            .unwrap();
        // brute force: (p/8, q/8) with q = 3p mod 8, p, q >= 0, p + q <= 8
        let mut expected = Vec::new();
        for p in 0..=8i64 {
            for q in 0..=8 - p {
                if (q - 3 * p).rem_euclid(8) == 0 {
                    expected.push(v2(p, q, 8));
                }
            }
        }
        expected.sort();
        assert_eq!(pts, expected);
        assert_eq!(pts.len(), 8);
    }

    #[test]
    fn unit_triangle_has_only_vertices() {
        let pts = Lattice2::integer()
            .points_in_triangle(&v2(0, 0, 1), &v2(1, 0, 1), &v2(0, 1, 1))
            .unwrap();
        assert_eq!(pts.len(), 3);
    }

    #[test]
    fn junior_plane_points_of_one_eighth() {
        let n3 = Lattice3::from_generators(&[RatVec::from_fracs([1, 3, 4], 8)]);
        let e = |i| RatVec3::unit(i);
        let pts = n3.points_in_triangle(&e(0), &e(1), &e(2)).unwrap();
        let mut expected = vec![
            e(0),
            e(1),
            e(2),
            RatVec::from_fracs([1, 3, 4], 8),
            RatVec::from_fracs([3, 1, 4], 8),
            RatVec::from_fracs([1, 3, 0], 4),
            RatVec::from_fracs([3, 1, 0], 4),
            RatVec::from_fracs([1, 1, 0], 2),
        ];
        expected.sort();
        assert_eq!(pts, expected);
    }

    #[test]
    fn degenerate_triangles_are_rejected() {
        let z = Lattice2::integer();
        assert_eq!(
            z.points_in_triangle(&v2(0, 0, 1), &v2(1, 1, 1), &v2(2, 2, 1)),
            Err(Error::DegenerateTriangle)
        );
    }

    #[test]
    fn hnf_matches_hand_computation() {
        let cols: Vec<Vec<BigInt>> = [[3, 0], [0, 3], [1, 1]]
            .iter()
            .map(|c| c.iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        let h = column_hnf(2, &cols).unwrap();
        let expect: Vec<Vec<BigInt>> = [[3, 0], [1, 1]]
            .iter()
            .map(|c| c.iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        assert_eq!(h, expect);
    }
}
