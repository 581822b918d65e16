//! Diagonal abelian actions on the plane and toric resolutions of the quotient.
//!
//! The quotient `C^2/G` is the affine toric variety of the first quadrant in
//! the overlattice `N2 = Z^2 + sum Z (a_g, b_g)/n`. A resolution is a
//! subdivision of the quadrant by primitive rays `v_0, ..., v_s` with
//! consecutive pairs forming lattice bases; the exceptional ray
//! `v_i = (alpha, beta)` has discrepancy `alpha + beta - 1` with respect to
//! the pair `(C^2/G, B)`.

use std::collections::BTreeSet;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{Lattice2, Lattice3, RatVec, RatVec2};
use crate::rational::{int, serde_rat_vec, Rat};

/// Most optional rays admitted by [`enumerate_admissible_resolutions`].
pub const MAX_OPTIONAL_RAYS: usize = 20;

/// Wire form of an action: `{"n": 8, "gens": [[1, 3]]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActionSpec {
    pub n: u32,
    pub gens: Vec<[u32; 2]>,
}

/// A finite abelian group acting diagonally by `g = diag(ζ^a, ζ^b)`, `ζ = e^{2πi/n}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "ActionSpec", into = "ActionSpec")]
pub struct AbelianAction {
    n: u32,
    gens: Vec<[u32; 2]>,
    elements: Vec<[u32; 2]>,
}

impl TryFrom<ActionSpec> for AbelianAction {
    type Error = Error;

    fn try_from(spec: ActionSpec) -> Result<Self> {
        AbelianAction::new(spec.n, &spec.gens)
    }
}

impl From<AbelianAction> for ActionSpec {
    fn from(action: AbelianAction) -> Self {
        ActionSpec { n: action.n, gens: action.gens }
    }
}

impl AbelianAction {
    pub fn new(n: u32, gens: &[[u32; 2]]) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidAction("n must be positive".into()));
        }
        let gens: Vec<[u32; 2]> = gens.iter().map(|g| [g[0] % n, g[1] % n]).collect();
        let mut elements = BTreeSet::from([[0, 0]]);
        let mut frontier = vec![[0u32, 0u32]];
        while let Some(e) = frontier.pop() {
            for g in &gens {
                let next = [(e[0] + g[0]) % n, (e[1] + g[1]) % n];
                if elements.insert(next) {
                    frontier.push(next);
                }
            }
        }
        Ok(AbelianAction { n, gens, elements: elements.into_iter().collect() })
    }

    /// The cyclic group `1/n(a, b)`.
    pub fn cyclic(n: u32, a: u32, b: u32) -> Result<Self> {
        Self::new(n, &[[a, b]])
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn gens(&self) -> &[[u32; 2]] {
        &self.gens
    }

    /// Group elements as weight pairs, sorted.
    pub fn elements(&self) -> &[[u32; 2]] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn exponent(&self) -> u32 {
        self.elements
            .iter()
            .map(|&[a, b]| self.n / self.n.gcd(&a).gcd(&b))
            .fold(1, |acc, o| acc.lcm(&o))
    }

    /// No nonidentity element has eigenvalue 1.
    pub fn is_small(&self) -> bool {
        self.elements.iter().all(|&[a, b]| (a == 0) == (b == 0))
    }

    /// Whether every element has determinant 1.
    pub fn is_special_linear(&self) -> bool {
        self.elements.iter().all(|&[a, b]| (a + b) % self.n == 0)
    }

    pub fn n2(&self) -> Lattice2 {
        let gens: Vec<RatVec2> = self
            .elements
            .iter()
            .map(|&[a, b]| RatVec::from_fracs([a as i64, b as i64], self.n as i64))
            .collect();
        Lattice2::from_generators(&gens)
    }

    /// The lattice of the embedding `g -> diag(ζ^a, ζ^b, ζ^{-a-b})` into `SL(3)`.
    pub fn n3(&self) -> Lattice3 {
        let gens: Vec<_> = self
            .elements
            .iter()
            .map(|&[a, b]| RatVec::from_fracs([a as i64, b as i64, -(a as i64) - b as i64], self.n as i64))
            .collect();
        Lattice3::from_generators(&gens)
    }

    pub fn boundary_divisor(&self) -> BoundaryDivisor {
        let n2 = self.n2();
        let multiplicity = |axis: usize| {
            let e = RatVec2::unit(axis);
            let prim = n2.primitive(&e).expect("nonzero");
            (Rat::one() / &prim.0[axis]).to_integer().try_into().expect("small multiplicity")
        };
        BoundaryDivisor { m1: multiplicity(0), m2: multiplicity(1) }
    }

    /// The stabilizer of the point `(1, 0)`: elements acting trivially on the first coordinate.
    pub fn first_axis_stabilizer(&self) -> Vec<[u32; 2]> {
        self.elements.iter().copied().filter(|e| e[0] == 0).collect()
    }

    pub fn spec(&self) -> ActionSpec {
        self.clone().into()
    }
}

/// `B = (m1-1)/m1 B_1 + (m2-1)/m2 B_2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundaryDivisor {
    pub m1: u32,
    pub m2: u32,
}

impl BoundaryDivisor {
    pub fn coefficients(&self) -> [Rat; 2] {
        [self.m1, self.m2].map(|m| Rat::new((m as i64 - 1).into(), (m as i64).into()))
    }

    pub fn is_zero(&self) -> bool {
        self.m1 == 1 && self.m2 == 1
    }
}

impl std::fmt::Display for BoundaryDivisor {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let terms: Vec<String> = self
            .coefficients()
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| format!("{c}*B{}", i + 1))
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

/// A toric resolution of `C^2/G`: rays `v_0 = e1'`, ..., `v_s = e2'`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Resolution {
    rays: Vec<RatVec2>,
    /// Discrepancies of the exceptional rays `v_1, ..., v_{s-1}`.
    #[serde(with = "serde_rat_vec")]
    discrepancies: Vec<Rat>,
}

pub fn discrepancy(ray: &RatVec2) -> Rat {
    ray.sum() - int(1)
}

impl Resolution {
    /// Validates the ray sequence against `n2` and computes discrepancies.
    pub fn from_rays(n2: &Lattice2, rays: Vec<RatVec2>) -> Result<Self> {
        let res = Resolution {
            discrepancies: rays
                .get(1..rays.len().saturating_sub(1))
                .unwrap_or(&[])
                .iter()
                .map(discrepancy)
                .collect(),
            rays,
        };
        res.validate(n2)?;
        Ok(res)
    }

    pub fn validate(&self, n2: &Lattice2) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidResolution(msg));
        if self.rays.len() < 2 {
            return bad("fewer than two rays".into());
        }
        let e1 = n2.primitive(&RatVec2::unit(0))?;
        let e2 = n2.primitive(&RatVec2::unit(1))?;
        if self.rays[0] != e1 || self.rays[self.rays.len() - 1] != e2 {
            return bad(format!("rays must run from {e1} to {e2}"));
        }
        for ray in &self.rays {
            if ray.0.iter().any(Signed::is_negative) || !n2.is_primitive(ray) {
                return bad(format!("{ray} is not a primitive lattice vector of the quadrant"));
            }
        }
        for pair in self.rays.windows(2) {
            if !pair[0].cross(&pair[1]).is_positive() {
                return bad(format!("{} and {} are not in increasing angle", pair[0], pair[1]));
            }
            let det = n2.pair_determinant(&pair[0], &pair[1]);
            if !det.is_one() {
                return bad(format!("{} and {} span a cone of index {det}", pair[0], pair[1]));
            }
        }
        let expected: Vec<Rat> = self.exceptional().iter().map(discrepancy).collect();
        if expected != self.discrepancies {
            return bad("discrepancies disagree with the rays".into());
        }
        Ok(())
    }

    pub fn rays(&self) -> &[RatVec2] {
        &self.rays
    }

    pub fn exceptional(&self) -> &[RatVec2] {
        &self.rays[1..self.rays.len() - 1]
    }

    pub fn discrepancies(&self) -> &[Rat] {
        &self.discrepancies
    }

    /// Number of two-dimensional cones, `s`.
    pub fn cone_count(&self) -> usize {
        self.rays.len() - 1
    }

    /// Dominated by the maximal resolution: every exceptional ray lies in
    /// `alpha + beta <= 1`, i.e. all discrepancies are nonpositive.
    pub fn is_dominated_by_max(&self) -> bool {
        self.discrepancies.iter().all(|a| !a.is_positive())
    }
}

/// Nonzero lattice points of the triangle `alpha, beta >= 0, alpha + beta <= 1`.
pub fn delta_prime_points(n2: &Lattice2) -> Vec<RatVec2> {
    n2.points_in_triangle(&RatVec2::zero(), &RatVec2::unit(0), &RatVec2::unit(1))
        .expect("nondegenerate")
        .into_iter()
        .filter(|p| !p.is_zero())
        .collect()
}

fn sort_by_angle(points: &mut [RatVec2]) {
    points.sort_by(|a, b| a.angle_cmp(b));
}

/// Hirzebruch–Jung resolution: every lattice point on the compact boundary of
/// the convex hull of the nonzero lattice points in the quadrant.
pub fn minimal_resolution(n2: &Lattice2) -> Resolution {
    let candidates: Vec<RatVec2> = delta_prime_points(n2).into_iter().filter(|p| n2.is_primitive(p)).collect();
    let start = n2.primitive(&RatVec2::unit(0)).expect("nonzero");
    let stop = n2.primitive(&RatVec2::unit(1)).expect("nonzero");
    let mut rays = vec![start.clone()];
    let mut current = start;
    while current != stop {
        let ahead: Vec<&RatVec2> = candidates.iter().filter(|r| current.cross(r).is_positive()).collect();
        let mut best = ahead[0];
        for &r in &ahead[1..] {
            let orient = best.sub(&current).cross(&r.sub(&current));
            let closer = || {
                let d = |x: &RatVec2| {
                    let v = x.sub(&current);
                    &v.0[0] * &v.0[0] + &v.0[1] * &v.0[1]
                };
                d(r) < d(best)
            };
            if orient.is_positive() || (orient.is_zero() && closer()) {
                best = r;
            }
        }
        current = best.clone();
        rays.push(current.clone());
    }
    Resolution::from_rays(n2, rays).expect("Hirzebruch-Jung fans are smooth")
}

/// All primitive lattice points with `alpha + beta <= 1`.
pub fn maximal_resolution(n2: &Lattice2) -> Resolution {
    let mut rays: Vec<RatVec2> = delta_prime_points(n2).into_iter().filter(|p| n2.is_primitive(p)).collect();
    sort_by_angle(&mut rays);
    Resolution::from_rays(n2, rays).expect("the maximal fan is smooth")
}

/// Every resolution whose rays lie between the minimal and the maximal ray sets.
/// Ordered by number of rays, then by the lexicographic order of the chosen optional rays.
pub fn enumerate_admissible_resolutions(n2: &Lattice2) -> Result<Vec<Resolution>> {
    let min = minimal_resolution(n2);
    let max = maximal_resolution(n2);
    let optional: Vec<RatVec2> = max.rays().iter().filter(|r| !min.rays().contains(r)).cloned().collect();
    if optional.len() > MAX_OPTIONAL_RAYS {
        return Err(Error::TooLarge { order: optional.len(), limit: MAX_OPTIONAL_RAYS });
    }
    let mut masks: Vec<u32> = (0..1u32 << optional.len()).collect();
    let chosen = |m: u32| (0..optional.len()).filter(move |i| m >> i & 1 == 1);
    masks.sort_by_key(|&m| (m.count_ones(), chosen(m).collect::<Vec<_>>()));
    let mut out = Vec::new();
    for m in masks {
        let mut rays = min.rays().to_vec();
        rays.extend(chosen(m).map(|i| optional[i].clone()));
        sort_by_angle(&mut rays);
        if let Ok(res) = Resolution::from_rays(n2, rays) {
            out.push(res);
        }
    }
    Ok(out)
}

/// Whether the quadrant is itself a smooth cone of `n2`, i.e. `C^2/G` is smooth.
pub fn is_quotient_smooth(n2: &Lattice2) -> bool {
    let e1 = n2.primitive(&RatVec2::unit(0)).expect("nonzero");
    let e2 = n2.primitive(&RatVec2::unit(1)).expect("nonzero");
    n2.pair_determinant(&e1, &e2).is_one()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn v(p: i64, q: i64, d: i64) -> RatVec2 {
        RatVec::from_fracs([p, q], d)
    }

    #[test]
    fn building_actions() {
        let g = AbelianAction::cyclic(8, 1, 3).unwrap();
        assert_eq!(g.order(), 8);
        let expected: BTreeSet<[u32; 2]> = (0..8).map(|k| [k, (3 * k) % 8]).collect();
        assert_eq!(g.elements(), expected.into_iter().collect::<Vec<_>>().as_slice());
        assert_eq!(AbelianAction::new(1, &[]).unwrap().order(), 1);
        let klein = AbelianAction::new(2, &[[1, 1], [1, 0]]).unwrap();
        assert_eq!(klein.order(), 4);
        assert_eq!(klein.exponent(), 2);
        assert!(AbelianAction::new(0, &[]).is_err());
    }

    #[test]
    fn smallness() {
        assert!(AbelianAction::cyclic(8, 1, 3).unwrap().is_small());
        assert!(!AbelianAction::cyclic(2, 1, 0).unwrap().is_small());
        assert!(AbelianAction::new(1, &[]).unwrap().is_small());
    }

    #[test]
    fn n2_lattices() {
        let third = AbelianAction::cyclic(3, 1, 1).unwrap().n2();
        for p in -3..6 {
            for q in -3..6 {
                assert_eq!(third.contains(&v(p, q, 3)), (p - q).rem_euclid(3) == 0);
            }
        }
        assert_eq!(AbelianAction::new(1, &[]).unwrap().n2(), Lattice2::integer());
        let half = AbelianAction::cyclic(2, 1, 0).unwrap().n2();
        assert_eq!(half, Lattice2::from_generators(&[v(1, 0, 2)]));
        assert_eq!(AbelianAction::cyclic(8, 1, 3).unwrap().n2().index(), rat(1, 8));
    }

    #[test]
    fn boundary_divisors() {
        let b = AbelianAction::cyclic(2, 1, 0).unwrap().boundary_divisor();
        assert_eq!(b, BoundaryDivisor { m1: 2, m2: 1 });
        assert_eq!(b.coefficients(), [rat(1, 2), int(0)]);
        assert_eq!(b.to_string(), "1/2*B1");
        assert!(AbelianAction::cyclic(8, 1, 3).unwrap().boundary_divisor().is_zero());
        assert!(AbelianAction::new(1, &[]).unwrap().boundary_divisor().is_zero());
    }

    #[test]
    fn minimal_resolutions() {
        let min = minimal_resolution(&AbelianAction::cyclic(8, 1, 3).unwrap().n2());
        assert_eq!(min.exceptional(), &[v(3, 1, 8), v(1, 3, 8)]);
        assert_eq!(min.discrepancies(), &[rat(-1, 2), rat(-1, 2)]);
        let trivial = minimal_resolution(&Lattice2::integer());
        assert!(trivial.exceptional().is_empty());
        let third = minimal_resolution(&AbelianAction::cyclic(3, 1, 1).unwrap().n2());
        assert_eq!(third.exceptional(), &[v(1, 1, 3)]);
        assert_eq!(third.discrepancies(), &[rat(-1, 3)]);
    }

    #[test]
    fn maximal_resolutions() {
        let max = maximal_resolution(&AbelianAction::cyclic(8, 1, 3).unwrap().n2());
        assert_eq!(max.exceptional(), &[v(3, 1, 8), v(1, 1, 2), v(1, 3, 8)]);
        assert_eq!(max.discrepancies(), &[rat(-1, 2), int(0), rat(-1, 2)]);
        let n2 = AbelianAction::cyclic(3, 1, 1).unwrap().n2();
        assert_eq!(maximal_resolution(&n2), minimal_resolution(&n2));
        let reflection = maximal_resolution(&AbelianAction::cyclic(2, 1, 0).unwrap().n2());
        assert!(reflection.exceptional().is_empty());
        assert_eq!(reflection.rays(), &[v(1, 0, 2), v(0, 1, 1)]);
    }

    #[test]
    fn admissible_counts() {
        let count = |n, a, b| enumerate_admissible_resolutions(&AbelianAction::cyclic(n, a, b).unwrap().n2()).unwrap();
        let eighth = count(8, 1, 3);
        assert_eq!(eighth.len(), 2);
        let n2 = AbelianAction::cyclic(8, 1, 3).unwrap().n2();
        assert_eq!(eighth[0], minimal_resolution(&n2));
        assert_eq!(eighth[1], maximal_resolution(&n2));
        assert_eq!(count(3, 1, 1).len(), 1);
        assert_eq!(enumerate_admissible_resolutions(&Lattice2::integer()).unwrap().len(), 1);
    }

    #[test]
    fn domination() {
        let n2 = AbelianAction::cyclic(8, 1, 3).unwrap().n2();
        assert!(maximal_resolution(&n2).is_dominated_by_max());
        let half = AbelianAction::cyclic(2, 1, 0).unwrap().n2();
        let blown_up = Resolution::from_rays(&half, vec![v(1, 0, 2), v(1, 2, 2), v(0, 1, 1)]).unwrap();
        assert_eq!(blown_up.discrepancies(), &[rat(1, 2)]);
        assert!(!blown_up.is_dominated_by_max());
        assert!(minimal_resolution(&half).is_dominated_by_max());
    }

    #[test]
    fn invalid_resolutions_are_rejected() {
        let n2 = AbelianAction::cyclic(8, 1, 3).unwrap().n2();
        // skipping the exceptional rays leaves a singular cone
        assert!(Resolution::from_rays(&n2, vec![v(1, 0, 1), v(0, 1, 1)]).is_err());
        // wrong angular order
        assert!(Resolution::from_rays(&n2, vec![v(1, 0, 1), v(1, 3, 8), v(3, 1, 8), v(0, 1, 1)]).is_err());
        // non-primitive ray
        assert!(Resolution::from_rays(&n2, vec![v(1, 0, 1), v(3, 1, 4), v(0, 1, 1)]).is_err());
    }

    #[test]
    fn smooth_quotients() {
        assert!(is_quotient_smooth(&AbelianAction::cyclic(2, 1, 0).unwrap().n2()));
        assert!(!is_quotient_smooth(&AbelianAction::cyclic(3, 1, 1).unwrap().n2()));
    }

    #[test]
    fn json_shapes() {
        let g = AbelianAction::cyclic(8, 1, 3).unwrap();
        assert_eq!(serde_json::to_string(&g).unwrap(), r#"{"n":8,"gens":[[1,3]]}"#);
        let back: AbelianAction = serde_json::from_str(r#"{"n":8,"gens":[[9,3]]}"#).unwrap();
        assert_eq!(back, g);
        let min = minimal_resolution(&g.n2());
        let json = serde_json::to_string(&min).unwrap();
        assert_eq!(
            json,
            r#"{"rays":[["1","0"],["3/8","1/8"],["1/8","3/8"],["0","1"]],"discrepancies":["-1/2","-1/2"]}"#
        );
        let parsed: Resolution = serde_json::from_str(&json).unwrap();
        parsed.validate(&g.n2()).unwrap();
        assert_eq!(parsed, min);
    }
}
