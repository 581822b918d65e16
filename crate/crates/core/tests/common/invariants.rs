//! Invariant checks shared by the property suite and the acceptance run.

use clab_core::junior::{build_containing_triangulation, build_junior, project_p12};
use clab_core::quiver::{build_mckay_quiver, moduli_fan_detailed};
use clab_core::surface::{delta_prime_points, enumerate_admissible_resolutions, maximal_resolution, minimal_resolution};
use clab_core::theta::{sample_generic, sample_generic_stream};
use clab_core::{AbelianAction, Lattice2, Lattice3, Rat, RatVec, RatVec2};
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use proptest::sample::Index;
use proptest::test_runner::TestCaseError;

pub type Check = Result<(), TestCaseError>;

/// Cyclic actions `1/n(a, b)` with `n <= 12`.
pub fn cyclic() -> impl Strategy<Value = AbelianAction> {
    (1u32..=12, 0u32..12, 0u32..12).prop_map(|(n, a, b)| AbelianAction::cyclic(n, a % n, b % n).unwrap())
}

pub fn hnf_input() -> impl Strategy<Value = (AbelianAction, i64, (i64, i64), Vec<usize>)> {
    (cyclic(), 1i64..12, (-3i64..=3, -3i64..=3), Just(vec![0usize, 1, 2]).prop_shuffle())
}

pub fn primitive_input() -> impl Strategy<Value = (AbelianAction, i64, i64, i64)> {
    (cyclic(), 0i64..12, 0i64..4, 0i64..4)
}

pub fn sampling_input() -> impl Strategy<Value = (AbelianAction, u64, u64)> {
    (cyclic(), any::<u64>(), 0u64..1000)
}

pub fn seeded() -> impl Strategy<Value = (AbelianAction, u64)> {
    (cyclic(), any::<u64>())
}

pub fn resolution_pick() -> impl Strategy<Value = (AbelianAction, Index)> {
    (cyclic(), any::<Index>())
}

fn frac(v: i64, n: u32) -> Rat {
    Rat::new(v.into(), (n as i64).into())
}

fn unimodular(l: &Lattice2, u: &RatVec2, v: &RatVec2) -> bool {
    u.cross(v).abs() == l.index()
}

/// Permuted, redundant and translated generators give the same normal form.
pub fn hnf_is_canonical((action, k, shift, order): (AbelianAction, i64, (i64, i64), Vec<usize>)) -> Check {
    let n = action.n();
    let [a, b] = action.gens()[0];
    let g = RatVec([frac(a as i64, n), frac(b as i64, n)]);
    let base = Lattice2::from_generators(std::slice::from_ref(&g));
    let extra = [g.scale(&Rat::from_integer(k.into())), g.add(&RatVec::from_ints([shift.0, shift.1])), RatVec2::unit(0)];
    let shuffled: Vec<RatVec2> = order.iter().map(|&i| extra[i].clone()).chain([g.clone()]).collect();
    prop_assert_eq!(&Lattice2::from_generators(&shuffled), &base);
    prop_assert_eq!(&action.n2(), &base);
    let basis = base.basis();
    prop_assert!(basis[0].0[1].is_zero());
    prop_assert!(basis[0].0[0].is_positive() && basis[1].0[1].is_positive());
    prop_assert!(!basis[1].0[0].is_negative() && basis[1].0[0] < basis[0].0[0]);
    prop_assert_eq!(base.quotient_order(), action.order());

    let h = RatVec([frac(a as i64, n), frac(b as i64, n), frac(-(a as i64) - b as i64, n)]);
    let l3 = Lattice3::from_generators(std::slice::from_ref(&h));
    let redundant = [h.scale(&Rat::from_integer((-k).into())), h.clone(), RatVec::unit(2)];
    prop_assert_eq!(&Lattice3::from_generators(&redundant), &l3);
    prop_assert_eq!(&action.n3(), &l3);
    Ok(())
}

/// `primitive` is idempotent and returns the first lattice point on the ray.
pub fn primitive_is_idempotent((action, k, x, y): (AbelianAction, i64, i64, i64)) -> Check {
    let n = action.n();
    let [a, b] = action.gens()[0];
    let v = RatVec([frac(k * a as i64 + x * n as i64, n), frac(k * b as i64 + y * n as i64, n)]);
    if v.is_zero() {
        return Ok(());
    }
    let l = action.n2();
    prop_assert!(l.contains(&v));
    let p = l.primitive(&v).unwrap();
    prop_assert_eq!(&l.primitive(&p).unwrap(), &p);
    prop_assert!(l.is_primitive(&p));
    prop_assert!(p.cross(&v).is_zero());
    let ratio = if p.0[0].is_zero() { &v.0[1] / &p.0[1] } else { &v.0[0] / &p.0[0] };
    prop_assert!(ratio.is_integer() && ratio >= Rat::one());
    for d in 2..=2 * n as i64 {
        prop_assert!(!l.contains(&p.scale(&Rat::new(1.into(), d.into()))));
    }
    Ok(())
}

pub fn maximal_fan_is_unimodular(action: AbelianAction) -> Check {
    let l = action.n2();
    let y = maximal_resolution(&l);
    prop_assert!(y.rays().windows(2).all(|w| unimodular(&l, &w[0], &w[1])));
    prop_assert!(y.rays().windows(2).all(|w| w[0].cross(&w[1]).is_positive()));
    prop_assert!(y.discrepancies().iter().all(|a| !a.is_positive()));
    let n = action.n() as i64;
    let gens: Vec<(i64, i64)> = action.gens().iter().map(|g| (g[0] as i64, g[1] as i64)).collect();
    prop_assert_eq!(super::scaled_rays(n, y.rays()), super::maximal_rays(n, &gens));
    Ok(())
}

pub fn minimal_within_maximal(action: AbelianAction) -> Check {
    let l = action.n2();
    let min = minimal_resolution(&l);
    let max = maximal_resolution(&l);
    for v in min.rays() {
        prop_assert!(max.rays().contains(v), "{} missing from the maximal fan", v);
    }
    prop_assert!(min.rays().windows(2).all(|w| unimodular(&l, &w[0], &w[1])));
    prop_assert_eq!(min.rays().first(), max.rays().first());
    prop_assert_eq!(min.rays().last(), max.rays().last());
    Ok(())
}

pub fn lift_then_project(action: AbelianAction) -> Check {
    let junior = build_junior(&action);
    for v in delta_prime_points(&action.n2()) {
        let w = junior.lift(&v).unwrap();
        prop_assert_eq!(&project_p12(&w), &v);
        prop_assert_eq!(w.sum(), Rat::one());
    }
    Ok(())
}

pub fn sampling_is_deterministic((action, seed, stream): (AbelianAction, u64, u64)) -> Check {
    let a = sample_generic_stream(&action, seed, stream).unwrap();
    let b = sample_generic_stream(&action, seed, stream).unwrap();
    prop_assert_eq!(&a, &b);
    prop_assert_eq!(a.len(), action.order());
    prop_assert!(a.values().iter().sum::<Rat>().is_zero());
    prop_assert_eq!(sample_generic(&action, seed).unwrap(), sample_generic(&action, seed).unwrap());
    Ok(())
}

/// Limit cones of a sampled parameter tile the quadrant edge to edge.
pub fn moduli_cones_tile((action, seed): (AbelianAction, u64)) -> Check {
    let q = build_mckay_quiver(&action);
    let theta = sample_generic(&action, seed).unwrap();
    let fan = moduli_fan_detailed(&q, &theta).unwrap();
    let cones = &fan.cones;
    prop_assert!(cones[0].1.start.cross(&RatVec2::unit(0)).is_zero());
    prop_assert!(cones[cones.len() - 1].1.end.cross(&RatVec2::unit(1)).is_zero());
    for c in cones {
        prop_assert!(c.1.start.cross(&c.1.end).is_positive());
    }
    for w in cones.windows(2) {
        prop_assert!(w[0].1.end.cross(&w[1].1.start).is_zero());
    }
    let rays = fan.resolution.rays();
    prop_assert_eq!(rays.len(), cones.len() + 1);
    let l = action.n2();
    prop_assert!(rays.windows(2).all(|w| unimodular(&l, &w[0], &w[1])));
    prop_assert!(fan.resolution.is_dominated_by_max());
    Ok(())
}

/// A basic triangulation of the junior simplex has normalized area `|G|`.
pub fn triangle_count_is_order((action, pick): (AbelianAction, Index)) -> Check {
    let all = enumerate_admissible_resolutions(&action.n2()).unwrap();
    let y = &all[pick.index(all.len())];
    let junior = build_junior(&action);
    let tri = build_containing_triangulation(&junior, y).unwrap();
    prop_assert!(tri.is_basic());
    prop_assert!(tri.contains_resolution(&junior, y).unwrap());
    prop_assert_eq!(tri.triangles().len(), action.order());
    Ok(())
}
