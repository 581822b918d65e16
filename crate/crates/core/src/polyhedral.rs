//! Projection of polyhedra by Fourier–Motzkin elimination, and closed cones
//! in the first quadrant of the plane.

use std::collections::BTreeSet;

use num_traits::{Signed, Zero};

use crate::lattice::{RatVec, RatVec2};
use crate::rational::{normalize_row, Rat};

/// `coeffs · x >= rhs` (or `= rhs` for equalities).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Row {
    pub coeffs: Vec<Rat>,
    pub rhs: Rat,
}

impl Row {
    pub fn new(coeffs: Vec<Rat>, rhs: Rat) -> Self {
        Row { coeffs, rhs }
    }

    fn normalized(&self) -> Row {
        let mut all = self.coeffs.clone();
        all.push(self.rhs.clone());
        let mut all = normalize_row(&all);
        let rhs = all.pop().expect("nonempty");
        Row { coeffs: all, rhs }
    }

    fn is_trivial(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }
}

#[derive(Clone, Debug, Default)]
pub struct LinearSystem {
    pub num_vars: usize,
    pub equalities: Vec<Row>,
    pub inequalities: Vec<Row>,
}

impl LinearSystem {
    pub fn new(num_vars: usize) -> Self {
        LinearSystem { num_vars, ..Default::default() }
    }

    pub fn add_equality(&mut self, coeffs: Vec<Rat>, rhs: Rat) {
        self.equalities.push(Row::new(coeffs, rhs));
    }

    pub fn add_inequality(&mut self, coeffs: Vec<Rat>, rhs: Rat) {
        self.inequalities.push(Row::new(coeffs, rhs));
    }

    pub fn satisfied_by(&self, x: &[Rat]) -> bool {
        let eval = |r: &Row| r.coeffs.iter().zip(x).map(|(a, v)| a * v).sum::<Rat>();
        self.equalities.iter().all(|r| eval(r) == r.rhs) && self.inequalities.iter().all(|r| eval(r) >= r.rhs)
    }

    /// Projects onto the variables not listed in `eliminate`, keeping their
    /// original relative order. Returns `None` when the system is infeasible.
    pub fn project_out(&self, eliminate: &[usize]) -> Option<LinearSystem> {
        let mut eqs: Vec<Row> = self.equalities.clone();
        let mut ineqs: Vec<Row> = self.inequalities.clone();
        for &var in eliminate {
            if let Some(pos) = eqs.iter().position(|r| !r.coeffs[var].is_zero()) {
                let pivot = eqs.swap_remove(pos);
                let a = pivot.coeffs[var].clone();
                let reduce = |r: &mut Row| {
                    let c = r.coeffs[var].clone();
                    if c.is_zero() {
                        return;
                    }
                    let f = c / &a;
                    for (x, p) in r.coeffs.iter_mut().zip(&pivot.coeffs) {
                        *x -= &f * p;
                    }
                    r.rhs -= &f * &pivot.rhs;
                };
                eqs.iter_mut().for_each(reduce);
                ineqs.iter_mut().for_each(reduce);
            } else {
                let (mut pos, mut neg, mut zero) = (Vec::new(), Vec::new(), Vec::new());
                for r in ineqs {
                    if r.coeffs[var].is_positive() {
                        pos.push(r);
                    } else if r.coeffs[var].is_negative() {
                        neg.push(r);
                    } else {
                        zero.push(r);
                    }
                }
                for p in &pos {
                    for q in &neg {
                        let fp = -q.coeffs[var].clone();
                        let fq = p.coeffs[var].clone();
                        let coeffs = p.coeffs.iter().zip(&q.coeffs).map(|(x, y)| x * &fp + y * &fq).collect();
                        zero.push(Row::new(coeffs, &p.rhs * &fp + &q.rhs * &fq));
                    }
                }
                ineqs = zero;
            }
            for r in &eqs {
                if r.is_trivial() && !r.rhs.is_zero() {
                    return None;
                }
            }
            eqs.retain(|r| !r.is_trivial());
            let mut seen = BTreeSet::new();
            let mut kept = Vec::new();
            for r in ineqs {
                if r.is_trivial() {
                    if r.rhs.is_positive() {
                        return None;
                    }
                    continue;
                }
                let n = r.normalized();
                if seen.insert(n.clone()) {
                    kept.push(n);
                }
            }
            ineqs = kept;
        }
        let keep: Vec<usize> = (0..self.num_vars).filter(|v| !eliminate.contains(v)).collect();
        let restrict = |r: Row| Row::new(keep.iter().map(|&j| r.coeffs[j].clone()).collect(), r.rhs);
        Some(LinearSystem {
            num_vars: keep.len(),
            equalities: eqs.into_iter().map(restrict).collect(),
            inequalities: ineqs.into_iter().map(restrict).collect(),
        })
    }
}

/// A closed convex cone in the closed first quadrant, spanned by the
/// directions `start` and `end` with `start` not after `end` in angle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cone2 {
    pub start: RatVec2,
    pub end: RatVec2,
}

impl Cone2 {
    /// The cone `{u >= 0 : a · u >= 0 for each a}`; `None` when only the origin survives.
    pub fn from_halfplanes(normals: &[[Rat; 2]]) -> Option<Cone2> {
        let in_cone = |u: &RatVec2| {
            !u.0[0].is_negative()
                && !u.0[1].is_negative()
                && normals.iter().all(|a| !(&a[0] * &u.0[0] + &a[1] * &u.0[1]).is_negative())
        };
        let mut candidates = vec![RatVec2::unit(0), RatVec2::unit(1)];
        for a in normals {
            candidates.push(RatVec([a[1].clone(), -a[0].clone()]));
            candidates.push(RatVec([-a[1].clone(), a[0].clone()]));
        }
        let feasible: Vec<RatVec2> = candidates.into_iter().filter(|u| !u.is_zero() && in_cone(u)).collect();
        let start = feasible.iter().min_by(|a, b| a.angle_cmp(b))?.clone();
        let end = feasible.iter().max_by(|a, b| a.angle_cmp(b))?.clone();
        Some(Cone2 { start, end })
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.start.cross(&self.end).is_positive()
    }

    /// Whether `u` lies strictly inside the cone.
    pub fn contains_interior(&self, u: &RatVec2) -> bool {
        self.start.cross(u).is_positive() && u.cross(&self.end).is_positive()
    }

    pub fn contains(&self, u: &RatVec2) -> bool {
        !self.start.cross(u).is_negative() && !u.cross(&self.end).is_negative()
    }
}
