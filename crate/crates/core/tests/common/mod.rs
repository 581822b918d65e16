//! Brute-force references written against the definitions, sharing no code
//! with the library beyond its input types. Points of `(1/n) Z^2` are kept
//! as integer pairs scaled by `n`.
#![allow(dead_code)]

pub mod invariants;

use std::collections::{BTreeSet, VecDeque};

use clab_core::quiver::McKayQuiver;
use clab_core::{Rat, RatVec2, Theta};
use num_traits::{Signed, Zero};

pub type Pt = (i64, i64);

pub fn group_elements(n: i64, gens: &[(i64, i64)]) -> BTreeSet<Pt> {
    let mut seen = BTreeSet::from([(0, 0)]);
    let mut queue = vec![(0, 0)];
    while let Some((p, q)) = queue.pop() {
        for &(a, b) in gens {
            let next = ((p + a).rem_euclid(n), (q + b).rem_euclid(n));
            if seen.insert(next) {
                queue.push(next);
            }
        }
    }
    seen
}

pub fn in_n2(n: i64, elements: &BTreeSet<Pt>, p: Pt) -> bool {
    elements.contains(&(p.0.rem_euclid(n), p.1.rem_euclid(n)))
}

fn cross(u: Pt, v: Pt) -> i64 {
    u.0 * v.1 - u.1 * v.0
}

/// Nonzero points of the triangle `alpha, beta >= 0, alpha + beta <= 1`
/// that are primitive in `N2`, in counterclockwise order from the first axis.
pub fn maximal_rays(n: i64, gens: &[(i64, i64)]) -> Vec<Pt> {
    let elements = group_elements(n, gens);
    let mut rays = Vec::new();
    for p in 0..=n {
        for q in 0..=n - p {
            if (p, q) == (0, 0) || !in_n2(n, &elements, (p, q)) {
                continue;
            }
            let divisible = (2..=n).any(|k| p % k == 0 && q % k == 0 && in_n2(n, &elements, (p / k, q / k)));
            if !divisible {
                rays.push((p, q));
            }
        }
    }
    rays.sort_by(|&u, &v| 0.cmp(&cross(u, v)));
    rays
}

/// Hirzebruch–Jung chain for `1/n(1, q)`, `gcd(n, q) = 1`, ordered from the first axis.
pub fn hirzebruch_jung_rays(n: i64, q: i64) -> Vec<Pt> {
    let mut rays = vec![(0, n), (1, q)];
    let (mut a, mut b) = (n, q);
    while b != 0 {
        let c = (a + b - 1) / b;
        let (u, v) = (rays[rays.len() - 1], rays[rays.len() - 2]);
        rays.push((c * u.0 - v.0, c * u.1 - v.1));
        (a, b) = (b, c * b - a);
    }
    rays.reverse();
    rays
}

/// A cone `{u, v}` is basic in `N2` when `|det| = n^2 / |G|` in scaled coordinates.
pub fn unimodular(n: i64, order: i64, u: Pt, v: Pt) -> bool {
    cross(u, v).abs() * order == n * n
}

/// Every subsequence of the maximal rays, keeping both axis rays, whose
/// consecutive cones are basic.
pub fn admissible_ray_sets(n: i64, gens: &[(i64, i64)]) -> Vec<Vec<Pt>> {
    let order = group_elements(n, gens).len() as i64;
    let rays = maximal_rays(n, gens);
    let inner = rays.len() - 2;
    let mut out = Vec::new();
    for mask in 0u32..1 << inner {
        let mut chosen = vec![rays[0]];
        chosen.extend((0..inner).filter(|i| mask >> i & 1 == 1).map(|i| rays[i + 1]));
        chosen.push(rays[rays.len() - 1]);
        if chosen.windows(2).all(|w| unimodular(n, order, w[0], w[1])) {
            out.push(chosen);
        }
    }
    out
}

pub fn scaled(n: i64, v: &RatVec2) -> Pt {
    let c = |x: &Rat| {
        let y = x * Rat::from_integer(n.into());
        assert!(y.is_integer(), "{x} is not in (1/{n})Z");
        i64::try_from(y.to_integer()).unwrap()
    };
    (c(&v.0[0]), c(&v.0[1]))
}

pub fn scaled_rays(n: i64, rays: &[RatVec2]) -> Vec<Pt> {
    rays.iter().map(|v| scaled(n, v)).collect()
}

/// Lattice points of the junior simplex: `(a, b, c)/n`, `a + b + c = n`, in `N3`.
pub fn junior_point_count(n: i64, gens: &[(i64, i64)]) -> usize {
    let elements = group_elements(n, gens);
    (0..=n).flat_map(|a| (0..=n - a).map(move |b| (a, b))).filter(|&p| in_n2(n, &elements, p)).count()
}

fn weight(arrow: usize) -> Pt {
    if arrow % 2 == 0 {
        (1, 0)
    } else {
        (0, 1)
    }
}

/// Gauge potential on the vertices with `pot(head) - pot(tail) = weight` on
/// every arrow of `support`; `None` if the support is disconnected or a cycle
/// has nonzero weight.
pub fn support_potential(q: &McKayQuiver, support: &BTreeSet<usize>) -> Option<Vec<Pt>> {
    let n = q.order();
    let mut pot: Vec<Option<Pt>> = vec![None; n];
    pot[0] = Some((0, 0));
    let mut queue = VecDeque::from([0]);
    while let Some(v) = queue.pop_front() {
        let pv = pot[v].unwrap();
        for &a in support {
            let (t, h, w) = (q.tail(a), q.head(a), weight(a));
            let step = if t == v {
                Some((h, (pv.0 + w.0, pv.1 + w.1)))
            } else if h == v {
                Some((t, (pv.0 - w.0, pv.1 - w.1)))
            } else {
                None
            };
            if let Some((u, pu)) = step {
                match pot[u] {
                    None => {
                        pot[u] = Some(pu);
                        queue.push_back(u);
                    }
                    Some(existing) if existing != pu => return None,
                    _ => {}
                }
            }
        }
    }
    pot.into_iter().collect()
}

/// `xy = yx` at every vertex for the representation with value 1 on `support`.
pub fn commutes(q: &McKayQuiver, support: &BTreeSet<usize>) -> bool {
    (0..q.order()).all(|v| {
        let (x, y) = (2 * v, 2 * v + 1);
        let xy = support.contains(&x) && support.contains(&(2 * q.head(x) + 1));
        let yx = support.contains(&y) && support.contains(&(2 * q.head(y)));
        xy == yx
    })
}

/// Every proper nonempty vertex set closed under the support arrows has positive weight.
pub fn king_stable(q: &McKayQuiver, support: &BTreeSet<usize>, theta: &Theta) -> bool {
    let n = q.order();
    for mask in 1u32..(1 << n) - 1 {
        let inside = |v: usize| mask >> v & 1 == 1;
        let closed = support.iter().all(|&a| !inside(q.tail(a)) || inside(q.head(a)));
        if closed {
            let total: Rat = (0..n).filter(|&v| inside(v)).map(|v| theta.values()[v].clone()).sum();
            if !total.is_positive() {
                return false;
            }
        }
    }
    true
}

/// All torus-fixed `theta`-stable supports, by exhausting arrow subsets.
pub fn fixed_stable_supports(q: &McKayQuiver, theta: &Theta) -> BTreeSet<Vec<usize>> {
    let arrows = q.num_arrows();
    assert!(arrows <= 16, "brute force limited to 2^16 subsets");
    let mut found = BTreeSet::new();
    for mask in 0u32..1 << arrows {
        let support: BTreeSet<usize> = (0..arrows).filter(|a| mask >> a & 1 == 1).collect();
        if commutes(q, &support) && support_potential(q, &support).is_some() && king_stable(q, &support, theta) {
            found.insert(support.into_iter().collect());
        }
    }
    found
}

/// Directions bounding `{u >= 0 : c . u >= 0 for every normal c}`, or `None`
/// when the set is a single ray or the origin.
pub fn quadrant_cone(normals: &[Pt]) -> Option<(Pt, Pt)> {
    let feasible = |u: Pt| u.0 >= 0 && u.1 >= 0 && normals.iter().all(|c| c.0 * u.0 + c.1 * u.1 >= 0);
    let mut candidates = vec![(1, 0), (0, 1)];
    for c in normals {
        candidates.push((c.1, -c.0));
        candidates.push((-c.1, c.0));
    }
    candidates.retain(|&u| u != (0, 0) && feasible(u));
    let start = *candidates.iter().min_by(|&&u, &&v| 0.cmp(&cross(u, v)))?;
    let end = *candidates.iter().max_by(|&&u, &&v| 0.cmp(&cross(u, v)))?;
    (cross(start, end) > 0).then_some((start, end))
}

/// Cone of directions along which the generic orbit degenerates to the
/// fixed point with this support: arrows off the support must have
/// nonnegative gauged weight.
pub fn limit_cone_closed_form(q: &McKayQuiver, support: &BTreeSet<usize>) -> Option<(Pt, Pt)> {
    let pot = support_potential(q, support)?;
    let normals: Vec<Pt> = (0..q.num_arrows())
        .filter(|a| !support.contains(a))
        .map(|a| {
            let (t, h, w) = (pot[q.tail(a)], pot[q.head(a)], weight(a));
            (w.0 + t.0 - h.0, w.1 + t.1 - h.1)
        })
        .collect();
    quadrant_cone(&normals)
}

pub fn same_direction(u: Pt, v: &RatVec2) -> bool {
    let (a, b) = (Rat::from_integer(u.0.into()), Rat::from_integer(u.1.into()));
    (&a * &v.0[1] - &b * &v.0[0]).is_zero() && !(&a * &v.0[0] + &b * &v.0[1]).is_negative()
}
