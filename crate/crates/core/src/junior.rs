//! The junior simplex of the `SL(3)` embedding `g -> diag(ζ^a, ζ^b, ζ^{-a-b})`
//! and its basic triangulations.
//!
//! All plane geometry happens after the projection `p12`, which maps the
//! junior plane affinely and bijectively onto the plane of `N2`.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{Lattice3, RatVec, RatVec2, RatVec3};
use crate::lp::{LinearProgram, LpOutcome, Relation};
use crate::rational::{int, serde_rat, serde_rat_vec, Rat};
use crate::surface::{AbelianAction, Resolution};

pub const E1: usize = 0;
pub const E2: usize = 1;
pub const E3: usize = 2;

#[derive(Clone, Debug)]
pub struct JuniorSimplex {
    action: AbelianAction,
    lattice: Lattice3,
    /// `e1, e2, e3` first, then the remaining lattice points in lexicographic order.
    points: Vec<RatVec3>,
}

pub fn build_junior(action: &AbelianAction) -> JuniorSimplex {
    let lattice = action.n3();
    let vertices = [0, 1, 2].map(RatVec3::unit);
    let mut points = vertices.to_vec();
    let all = lattice
        .points_in_triangle(&vertices[0], &vertices[1], &vertices[2])
        .expect("the junior simplex is nondegenerate");
    points.extend(all.into_iter().filter(|p| !vertices.contains(p)));
    JuniorSimplex { action: action.clone(), lattice, points }
}

pub fn project_p12(w: &RatVec3) -> RatVec2 {
    RatVec([w.0[0].clone(), w.0[1].clone()])
}

fn in_delta_prime(v: &RatVec2) -> bool {
    !v.0[0].is_negative() && !v.0[1].is_negative() && v.sum() <= Rat::one()
}

impl JuniorSimplex {
    pub fn action(&self) -> &AbelianAction {
        &self.action
    }

    pub fn lattice(&self) -> &Lattice3 {
        &self.lattice
    }

    pub fn points(&self) -> &[RatVec3] {
        &self.points
    }

    pub fn index_of(&self, p: &RatVec3) -> Option<usize> {
        self.points.iter().position(|q| q == p)
    }

    /// `(alpha, beta) -> (alpha, beta, 1 - alpha - beta)`, checked against `N3`.
    pub fn lift(&self, v: &RatVec2) -> Result<RatVec3> {
        if !in_delta_prime(v) {
            return Err(Error::NotDominated(v.to_string()));
        }
        let w = RatVec([v.0[0].clone(), v.0[1].clone(), Rat::one() - v.sum()]);
        if !self.lattice.contains(&w) {
            return Err(Error::NotInLattice(w.to_string()));
        }
        Ok(w)
    }

    fn flat(&self, i: usize) -> RatVec2 {
        project_p12(&self.points[i])
    }

    /// Barycentric coordinates of point `x` in the triangle of point indices `t`.
    fn barycentric(&self, t: [usize; 3], x: usize) -> [Rat; 3] {
        let [a, b, c] = t.map(|i| self.flat(i));
        barycentric_2d(&a, &b, &c, &self.flat(x))
    }

    fn is_degenerate(&self, t: [usize; 3]) -> bool {
        let [a, b, c] = t.map(|i| self.flat(i));
        b.sub(&a).cross(&c.sub(&a)).is_zero()
    }

    fn points_of(&self, t: [usize; 3]) -> Vec<usize> {
        (0..self.points.len())
            .filter(|&x| self.barycentric(t, x).iter().all(|l| !l.is_negative()))
            .collect()
    }
}

pub fn lift_to_junior(junior: &JuniorSimplex, v: &RatVec2) -> Result<RatVec3> {
    junior.lift(v)
}

fn barycentric_2d(a: &RatVec2, b: &RatVec2, c: &RatVec2, x: &RatVec2) -> [Rat; 3] {
    let area = b.sub(a).cross(&c.sub(a));
    let lb = x.sub(a).cross(&c.sub(a)) / &area;
    let lc = b.sub(a).cross(&x.sub(a)) / &area;
    [Rat::one() - &lb - &lc, lb, lc]
}

fn barycentric_3d(t: &[RatVec3; 3], w: &RatVec3) -> Result<[Rat; 3]> {
    let [a, b, c] = t.each_ref().map(project_p12);
    if b.sub(&a).cross(&c.sub(&a)).is_zero() {
        return Err(Error::DegenerateTriangle);
    }
    Ok(barycentric_2d(&a, &b, &c, &project_p12(w)))
}

/// Star subdivision of `t = (a, b, c)` at `w`: the triangles `wbc`, `wac`,
/// `wab`, omitting degenerate ones.
pub fn star_subdivide(t: &[RatVec3; 3], w: &RatVec3) -> Result<Vec<[RatVec3; 3]>> {
    let l = barycentric_3d(t, w)?;
    if l.iter().any(Signed::is_negative) {
        return Err(Error::OutsideTriangle(w.to_string()));
    }
    if t.contains(w) {
        return Err(Error::IsVertex(w.to_string()));
    }
    let [a, b, c] = t.clone();
    let pieces = [[w.clone(), b.clone(), c.clone()], [w.clone(), a.clone(), c], [w.clone(), a, b]];
    Ok(pieces.into_iter().zip(l).filter(|(_, li)| li.is_positive()).map(|(p, _)| p).collect())
}

fn sorted(mut t: [usize; 3]) -> [usize; 3] {
    t.sort_unstable();
    t
}

/// A triangulation of the junior simplex by triangles on its lattice points.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Triangulation {
    points: Vec<RatVec3>,
    /// Sorted index triples, in sorted order.
    triangles: Vec<[usize; 3]>,
    /// Covolume of `N3`; a triangle is basic when its determinant equals it.
    #[serde(with = "serde_rat")]
    cell_volume: Rat,
}

impl Triangulation {
    /// Checks that the triangles tile the junior simplex.
    pub fn new(junior: &JuniorSimplex, triangles: Vec<[usize; 3]>) -> Result<Self> {
        let mut triangles: Vec<[usize; 3]> = triangles.into_iter().map(sorted).collect();
        triangles.sort_unstable();
        let t = Triangulation { points: junior.points.clone(), triangles, cell_volume: junior.lattice.index() };
        t.validate()?;
        Ok(t)
    }

    pub fn points(&self) -> &[RatVec3] {
        &self.points
    }

    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    fn flat(&self, i: usize) -> RatVec2 {
        project_p12(&self.points[i])
    }

    fn signed_area(&self, t: &[usize; 3]) -> Rat {
        let [a, b, c] = t.map(|i| self.flat(i));
        b.sub(&a).cross(&c.sub(&a))
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::MalformedTriangulation(m));
        if self.points.len() < 3 || self.points[..3] != [0, 1, 2].map(RatVec3::unit) {
            return bad("points must start with e1, e2, e3".into());
        }
        for p in &self.points {
            if p.0.iter().any(Signed::is_negative) || !p.sum().is_one() {
                return bad(format!("{p} is not in the junior simplex"));
            }
        }
        let mut seen = BTreeSet::new();
        for t in &self.triangles {
            if t.iter().any(|&i| i >= self.points.len()) {
                return bad(format!("triangle {t:?} refers to a missing point"));
            }
            if self.signed_area(t).is_zero() {
                return bad(format!("triangle {t:?} is degenerate"));
            }
            if !seen.insert(*t) {
                return bad(format!("triangle {t:?} is repeated"));
            }
        }
        let total: Rat = self.triangles.iter().map(|t| self.signed_area(t).abs()).sum();
        if !total.is_one() {
            return bad(format!("triangle areas sum to {total} times the simplex"));
        }
        for (i, s) in self.triangles.iter().enumerate() {
            for t in &self.triangles[i + 1..] {
                if self.interiors_meet(s, t) {
                    return bad(format!("triangles {s:?} and {t:?} overlap"));
                }
            }
        }
        Ok(())
    }

    /// Separating-axis test on the edges of both triangles.
    fn interiors_meet(&self, s: &[usize; 3], t: &[usize; 3]) -> bool {
        let ps = s.map(|i| self.flat(i));
        let pt = t.map(|i| self.flat(i));
        let separated_by = |own: &[RatVec2; 3], other: &[RatVec2; 3]| {
            (0..3).any(|k| {
                let (a, b, c) = (&own[k], &own[(k + 1) % 3], &own[(k + 2) % 3]);
                let side = |x: &RatVec2| b.sub(a).cross(&x.sub(a));
                let inner = side(c);
                other.iter().all(|x| !(side(x) * &inner).is_positive())
            })
        };
        !(separated_by(&ps, &pt) || separated_by(&pt, &ps))
    }

    /// Every triangle is unimodular in `N3`.
    pub fn is_basic(&self) -> bool {
        self.triangles.iter().all(|t| {
            let [a, b, c] = t.map(|i| &self.points[i]);
            crate::lattice::det3(a, b, c).abs() == self.cell_volume
        })
    }

    /// Point indices joined to `v` by an edge.
    pub fn neighbours(&self, v: usize) -> BTreeSet<usize> {
        self.triangles
            .iter()
            .filter(|t| t.contains(&v))
            .flat_map(|t| t.iter().copied())
            .filter(|&i| i != v)
            .collect()
    }

    pub fn used_points(&self) -> BTreeSet<usize> {
        self.triangles.iter().flatten().copied().collect()
    }

    /// Whether the toric variety of the triangulation contains the surface
    /// resolution: the neighbours of `e3` are exactly the lifts of its rays.
    pub fn contains_resolution(&self, junior: &JuniorSimplex, y: &Resolution) -> Result<bool> {
        let mut lifts = BTreeSet::new();
        for v in y.rays() {
            let w = junior.lift(v)?;
            match self.points.iter().position(|p| *p == w) {
                Some(i) => lifts.insert(i),
                None => return Ok(false),
            };
        }
        Ok(self.neighbours(E3) == lifts)
    }

    /// Interior edges `(a, b)` with the opposite vertices `c`, `d` of the two
    /// adjacent triangles, together with the affine coordinates of `d` in `abc`.
    fn interior_edges(&self) -> Vec<InteriorEdge> {
        let mut by_edge: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
        for t in &self.triangles {
            for k in 0..3 {
                let (a, b, c) = (t[k], t[(k + 1) % 3], t[(k + 2) % 3]);
                by_edge.entry((a.min(b), a.max(b))).or_default().push(c);
            }
        }
        by_edge
            .into_iter()
            .filter(|(_, opp)| opp.len() == 2)
            .map(|((a, b), opp)| {
                let (c, d) = (opp[0], opp[1]);
                let coeffs = barycentric_2d(&self.flat(a), &self.flat(b), &self.flat(c), &self.flat(d));
                InteriorEdge { edge: [a, b], opposite: [c, d], coeffs }
            })
            .collect()
    }

    /// Height variables: used points other than the three vertices.
    fn height_variables(&self) -> Vec<usize> {
        self.used_points().into_iter().filter(|&i| i > E3).collect()
    }

    /// Convexity rows `h(d) - sum lambda h(abc) >= 0` over the height variables.
    fn convexity_rows(&self, vars: &[usize]) -> Vec<(InteriorEdge, Vec<Rat>)> {
        let slot: BTreeMap<usize, usize> = vars.iter().enumerate().map(|(k, &i)| (i, k)).collect();
        self.interior_edges()
            .into_iter()
            .map(|e| {
                let mut row = vec![Rat::zero(); vars.len()];
                let [a, b] = e.edge;
                let [c, d] = e.opposite;
                for (p, coeff) in [(d, Rat::one()), (a, -e.coeffs[0].clone()), (b, -e.coeffs[1].clone()), (c, -e.coeffs[2].clone())] {
                    if let Some(&k) = slot.get(&p) {
                        row[k] += coeff;
                    }
                }
                (e, row)
            })
            .collect()
    }
}

#[derive(Clone, Debug)]
struct InteriorEdge {
    edge: [usize; 2],
    opposite: [usize; 2],
    coeffs: [Rat; 3],
}

/// Heights on the points of a triangulation (vertices at height zero) whose
/// piecewise-linear interpolation is strictly convex across every interior edge.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PLSupportFunction {
    #[serde(with = "serde_rat_vec")]
    pub heights: Vec<Rat>,
}

impl PLSupportFunction {
    pub fn certifies(&self, tri: &Triangulation) -> bool {
        self.heights.len() == tri.points.len()
            && tri.interior_edges().iter().all(|e| {
                let [a, b] = e.edge;
                let [c, d] = e.opposite;
                let h = &self.heights;
                let affine = &e.coeffs[0] * &h[a] + &e.coeffs[1] * &h[b] + &e.coeffs[2] * &h[c];
                h[d] > affine
            })
    }
}

/// Interior edges whose convexity conditions cannot hold simultaneously,
/// with nonnegative multipliers combining them into `0 >= 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Refusal {
    pub edges: Vec<[usize; 2]>,
    #[serde(with = "serde_rat_vec")]
    pub multipliers: Vec<Rat>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Regularity {
    Regular(PLSupportFunction),
    NotRegular(Refusal),
}

impl Regularity {
    pub fn is_regular(&self) -> bool {
        matches!(self, Regularity::Regular(_))
    }
}

pub fn regularity_certificate(tri: &Triangulation) -> Regularity {
    let vars = tri.height_variables();
    let rows = tri.convexity_rows(&vars);
    let mut lp = LinearProgram::new(vars.len());
    for (_, row) in &rows {
        lp.add(row.clone(), Relation::Ge, int(1));
    }
    match lp.solve() {
        LpOutcome::Optimal { point, .. } => {
            let mut heights = vec![Rat::zero(); tri.points.len()];
            for (k, &i) in vars.iter().enumerate() {
                heights[i] = point[k].clone();
            }
            Regularity::Regular(PLSupportFunction { heights })
        }
        LpOutcome::Unbounded => unreachable!("feasibility program has a zero objective"),
        LpOutcome::Infeasible => {
            let y = lp.farkas().expect("an infeasible program has a Farkas certificate");
            let (edges, multipliers) = rows
                .iter()
                .zip(y)
                .filter(|(_, m)| !m.is_zero())
                .map(|((e, _), m)| (e.edge, m))
                .unzip();
            Regularity::NotRegular(Refusal { edges, multipliers })
        }
    }
}

/// Convex support functions modulo affine functions, in coordinates given by
/// the heights of the non-vertex points (vertices normalized to height zero).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NefCone {
    /// Point index of each coordinate.
    pub variables: Vec<usize>,
    /// Each row `r` imposes `r · h >= 0`.
    pub rows: Vec<Vec<Rat>>,
    pub dimension: usize,
}

impl NefCone {
    pub fn contains(&self, h: &[Rat]) -> bool {
        self.rows.iter().all(|r| !dot(r, h).is_negative())
    }

    /// The ample cone is nonempty exactly when the nef cone is full-dimensional.
    pub fn has_interior(&self) -> bool {
        self.dimension == self.variables.len()
    }
}

fn dot(a: &[Rat], b: &[Rat]) -> Rat {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn nef_cone(tri: &Triangulation) -> NefCone {
    let variables = tri.height_variables();
    let rows: Vec<Vec<Rat>> = tri.convexity_rows(&variables).into_iter().map(|(_, r)| r).collect();
    let n = variables.len();
    let mut implicit = Vec::new();
    for r in &rows {
        let mut lp = LinearProgram::new(n);
        for s in &rows {
            lp.add(s.clone(), Relation::Ge, Rat::zero());
        }
        lp.add(r.clone(), Relation::Le, Rat::one());
        lp.maximize(r.clone());
        let tight = match lp.solve() {
            LpOutcome::Optimal { value, .. } => value.is_zero(),
            _ => unreachable!("the origin is feasible and the objective is capped"),
        };
        if tight {
            implicit.push(r.clone());
        }
    }
    let dimension = n - rank(implicit);
    NefCone { variables, rows, dimension }
}

fn rank(mut rows: Vec<Vec<Rat>>) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..cols {
        let Some(p) = (rank..rows.len()).find(|&i| !rows[i][col].is_zero()) else { continue };
        rows.swap(rank, p);
        let pivot = rows[rank].clone();
        for row in rows.iter_mut().skip(rank + 1) {
            if !row[col].is_zero() {
                let f = &row[col] / &pivot[col];
                for (x, y) in row.iter_mut().zip(&pivot) {
                    *x -= &f * y;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Points of the edge `e2 e3` in order from `e2` to `e3`: the fan of the
/// minimal resolution `W` of `C^2/Z`, `Z` the stabilizer of `(1, 0)`.
pub fn w_fan(tri: &Triangulation) -> Vec<usize> {
    let mut edge: Vec<usize> = (0..tri.points.len()).filter(|&i| tri.points[i].0[0].is_zero()).collect();
    edge.sort_by(|&i, &j| tri.points[j].0[1].cmp(&tri.points[i].0[1]));
    edge
}

/// Whether restriction `Amp(U) -> Amp(W)` is surjective, `U` the crepant
/// resolution of the triangulation.
pub fn amp_restriction_surjective(tri: &Triangulation, action: &AbelianAction) -> Result<bool> {
    let used = tri.used_points();
    for (v, name) in [(E1, "e1"), (E2, "e2"), (E3, "e3")] {
        if !used.contains(&v) {
            return Err(Error::MalformedTriangulation(format!("{name} is not a vertex")));
        }
    }
    let edge = w_fan(tri);
    let expected = action.first_axis_stabilizer().len() + 1;
    if edge.len() != expected {
        return Err(Error::Internal(format!(
            "edge e2e3 carries {} lattice points, expected {expected}",
            edge.len()
        )));
    }
    if edge.iter().any(|i| !used.contains(i)) {
        return Ok(false);
    }
    let nef = nef_cone(tri);
    if !nef.has_interior() {
        return Ok(false);
    }
    let slot: BTreeMap<usize, usize> = nef.variables.iter().enumerate().map(|(k, &i)| (i, k)).collect();
    let n = nef.variables.len();
    // Second differences of the heights along the edge.
    let restriction: Vec<Vec<Rat>> = edge
        .windows(3)
        .map(|w| {
            let mut row = vec![Rat::zero(); n];
            for (p, c) in [(w[0], int(1)), (w[1], int(-2)), (w[2], int(1))] {
                if let Some(&k) = slot.get(&p) {
                    row[k] += c;
                }
            }
            row
        })
        .collect();
    for target in 0..restriction.len() {
        let mut lp = LinearProgram::new(n);
        for r in &nef.rows {
            lp.add(r.clone(), Relation::Ge, Rat::zero());
        }
        for (i, r) in restriction.iter().enumerate() {
            lp.add(r.clone(), Relation::Eq, if i == target { int(1) } else { int(0) });
        }
        if !lp.solve().is_feasible() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A basic regular triangulation whose crepant resolution contains `y`.
pub fn build_containing_triangulation(junior: &JuniorSimplex, y: &Resolution) -> Result<Triangulation> {
    y.validate(&junior.action.n2())?;
    if let Some(v) = y.exceptional().iter().find(|v| !in_delta_prime(v)) {
        return Err(Error::NotDominated(v.to_string()));
    }
    let chain: Vec<usize> = y
        .rays()
        .iter()
        .map(|v| {
            let w = junior.lift(v)?;
            junior.index_of(&w).ok_or_else(|| Error::Internal(format!("lift {w} missing from the simplex")))
        })
        .collect::<Result<_>>()?;
    let mut triangles = Vec::new();
    build_recursive(junior, [E1, E2, E3], &chain, &mut triangles)?;
    let tri = Triangulation::new(junior, triangles).map_err(|e| Error::Internal(e.to_string()))?;
    if !tri.is_basic() {
        return Err(Error::Internal("constructed triangulation is not basic".into()));
    }
    if !tri.contains_resolution(junior, y)? {
        return Err(Error::Internal("neighbours of e3 differ from the lifted rays".into()));
    }
    Ok(tri)
}

/// Triangulates `(p, q, r)`, `r = e3`, so that the neighbours of `r` are
/// exactly `chain`, which runs from the edge `pr` to the edge `qr`.
fn build_recursive(junior: &JuniorSimplex, t: [usize; 3], chain: &[usize], out: &mut Vec<[usize; 3]>) -> Result<()> {
    let [p, q, r] = t;
    let s = chain.len() - 1;
    let candidates: Vec<usize> = chain[..s].iter().copied().filter(|&c| c != p).collect();
    if candidates.is_empty() {
        // Every other point lies on qr; fan out from p.
        let mut edge = Vec::new();
        for x in junior.points_of(t) {
            if x == p {
                continue;
            }
            let l = junior.barycentric(t, x);
            if !l[0].is_zero() {
                return Err(Error::Internal(format!("base triangle {t:?} has a point off the edge qr")));
            }
            edge.push((l[2].clone(), x));
        }
        edge.sort();
        for pair in edge.windows(2) {
            out.push([p, pair[0].1, pair[1].1]);
        }
        return Ok(());
    }
    let w = *candidates
        .iter()
        .min_by(|&&a, &&b| {
            let ka = &junior.barycentric(t, a)[2];
            let kb = &junior.barycentric(t, b)[2];
            ka.cmp(kb).then_with(|| junior.points[a].cmp(&junior.points[b]))
        })
        .expect("nonempty");
    let j = chain.iter().position(|&c| c == w).expect("w is on the chain");
    build_recursive(junior, [w, q, r], &chain[j..], out)?;
    if !junior.is_degenerate([p, w, r]) {
        build_recursive(junior, [p, w, r], &chain[..=j], out)?;
    }
    if !junior.is_degenerate([p, q, w]) {
        out.extend(placing_triangulation(junior, [p, q, w]));
    }
    Ok(())
}

/// Inserts every lattice point of `t` in lexicographic order, star-subdividing
/// the cells that contain it.
fn placing_triangulation(junior: &JuniorSimplex, t: [usize; 3]) -> Vec<[usize; 3]> {
    let mut cells = vec![t];
    let mut inner: Vec<usize> = junior.points_of(t).into_iter().filter(|x| !t.contains(x)).collect();
    inner.sort_by(|&a, &b| junior.points[a].cmp(&junior.points[b]));
    for x in inner {
        let mut next = Vec::with_capacity(cells.len() + 2);
        for cell in cells {
            let l = junior.barycentric(cell, x);
            if l.iter().any(Signed::is_negative) {
                next.push(cell);
                continue;
            }
            let [a, b, c] = cell;
            for (piece, li) in [[x, b, c], [a, x, c], [a, b, x]].into_iter().zip(&l) {
                if li.is_positive() {
                    next.push(piece);
                }
            }
        }
        cells = next;
    }
    cells
}
