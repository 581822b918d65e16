//! The McKay quiver of a diagonal abelian action, torus-fixed stable
//! representations, and the toric fan of the moduli space `M_θ`.
//!
//! Characters are `Z^2 / M` with `M` the lattice of invariant monomial
//! exponents. The `x`-arrow at `χ` goes to `χ + [x]` and the `y`-arrow to
//! `χ + [y]`. Arrow `2χ` is the `x`-arrow at `χ`, arrow `2χ + 1` the `y`-arrow.
//! A vertex subset is a subrepresentation support when it is closed under
//! heads of support arrows.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{column_hnf, Lattice2, RatVec2};
use crate::lp::{LinearProgram, Relation};
use crate::polyhedral::{Cone2, LinearSystem};
use crate::rational::{common_denominator, int, serde_rat_vec, Rat};
use crate::surface::{AbelianAction, Resolution};

/// Largest group handled by exhaustive support enumeration.
pub const MAX_ENUMERATION_ORDER: usize = 16;
/// Largest group whose subset walls are checked exhaustively by [`is_generic`].
pub const MAX_GENERICITY_ORDER: usize = 24;

pub const WEIGHT_X: [i64; 2] = [1, 0];
pub const WEIGHT_Y: [i64; 2] = [0, 1];

#[derive(Clone, Debug)]
pub struct McKayQuiver {
    action: AbelianAction,
    n2: Lattice2,
    /// Column Hermite normal form `(h00, 0), (h01, h11)` of `M`.
    hnf: [[i64; 2]; 2],
    head_x: Vec<usize>,
    head_y: Vec<usize>,
}

pub fn build_mckay_quiver(action: &AbelianAction) -> McKayQuiver {
    let n2 = action.n2();
    let [b0, b1] = n2.basis().clone();
    // Rows of the inverse basis matrix generate the dual lattice M.
    let det = b0.cross(&b1);
    let inverse_rows = [[&b1.0[1] / &det, -&b1.0[0] / &det], [-&b0.0[1] / &det, &b0.0[0] / &det]];
    let columns: Vec<Vec<BigInt>> = inverse_rows
        .iter()
        .map(|r| r.iter().map(|x| x.to_integer()).collect())
        .collect();
    let h = column_hnf(2, &columns).expect("M has full rank");
    let small = |x: &BigInt| x.to_i64().expect("small character lattice");
    let hnf = [[small(&h[0][0]), small(&h[0][1])], [small(&h[1][0]), small(&h[1][1])]];
    let mut quiver = McKayQuiver { action: action.clone(), n2, hnf, head_x: Vec::new(), head_y: Vec::new() };
    let order = quiver.order();
    quiver.head_x = (0..order).map(|v| quiver.shift(v, WEIGHT_X)).collect();
    quiver.head_y = (0..order).map(|v| quiver.shift(v, WEIGHT_Y)).collect();
    quiver
}

impl McKayQuiver {
    pub fn action(&self) -> &AbelianAction {
        &self.action
    }

    pub fn n2(&self) -> &Lattice2 {
        &self.n2
    }

    /// Number of vertices, `|G|`.
    pub fn order(&self) -> usize {
        (self.hnf[0][0] * self.hnf[1][1]) as usize
    }

    pub fn num_arrows(&self) -> usize {
        2 * self.order()
    }

    /// Canonical index of the character of the monomial `x^p y^q`.
    pub fn character_index(&self, exponent: [i64; 2]) -> usize {
        let [[h00, _], [h01, h11]] = self.hnf;
        let [mut p, q] = exponent;
        let k = Integer::div_floor(&q, &h11);
        p -= k * h01;
        let q = q - k * h11;
        (q * h00 + p.rem_euclid(h00)) as usize
    }

    /// The exponent representative `(p, q)` of a vertex.
    pub fn representative(&self, v: usize) -> [i64; 2] {
        let h00 = self.hnf[0][0];
        [v as i64 % h00, v as i64 / h00]
    }

    fn shift(&self, v: usize, w: [i64; 2]) -> usize {
        let [p, q] = self.representative(v);
        self.character_index([p + w[0], q + w[1]])
    }

    pub fn tail(&self, arrow: usize) -> usize {
        arrow / 2
    }

    pub fn head(&self, arrow: usize) -> usize {
        let v = arrow / 2;
        if arrow % 2 == 0 {
            self.head_x[v]
        } else {
            self.head_y[v]
        }
    }

    pub fn weight(&self, arrow: usize) -> [i64; 2] {
        if arrow % 2 == 0 {
            WEIGHT_X
        } else {
            WEIGHT_Y
        }
    }

    /// `(tail, head)` of every arrow, by arrow id.
    pub fn arrows(&self) -> Vec<(usize, usize)> {
        (0..self.num_arrows()).map(|a| (self.tail(a), self.head(a))).collect()
    }
}

/// A stability parameter: one rational per character, summing to zero.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "ThetaValues", into = "ThetaValues")]
pub struct Theta {
    values: Vec<Rat>,
}

#[derive(Serialize, Deserialize)]
#[serde(transparent)]
struct ThetaValues(#[serde(with = "serde_rat_vec")] Vec<Rat>);

impl TryFrom<ThetaValues> for Theta {
    type Error = Error;

    fn try_from(v: ThetaValues) -> Result<Self> {
        Theta::new(v.0)
    }
}

impl From<Theta> for ThetaValues {
    fn from(t: Theta) -> Self {
        ThetaValues(t.values)
    }
}

impl Theta {
    pub fn new(values: Vec<Rat>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidTheta("no values".into()));
        }
        let total: Rat = values.iter().sum();
        if !total.is_zero() {
            return Err(Error::InvalidTheta(format!("values sum to {total}, not 0")));
        }
        Ok(Theta { values })
    }

    pub fn from_ints(values: &[i64]) -> Result<Self> {
        Self::new(values.iter().map(|&v| int(v)).collect())
    }

    pub fn values(&self) -> &[Rat] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn subset_sum(&self, subset: &[usize]) -> Rat {
        subset.iter().map(|&i| &self.values[i]).sum()
    }

    /// Integer multiple of the values, for fast subset arithmetic.
    pub(crate) fn scaled(&self) -> Result<Vec<i128>> {
        let d = Rat::from_integer(common_denominator(self.values.iter()));
        self.values
            .iter()
            .map(|v| {
                (v * &d)
                    .to_integer()
                    .to_i128()
                    .ok_or_else(|| Error::InvalidTheta("values too large".into()))
            })
            .collect()
    }

    fn check_against(&self, quiver: &McKayQuiver) -> Result<()> {
        if self.len() != quiver.order() {
            return Err(Error::InvalidTheta(format!("{} values for {} characters", self.len(), quiver.order())));
        }
        Ok(())
    }
}

impl std::fmt::Display for Theta {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.values.iter().map(|v| v.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// A nonempty subset avoiding vertex 0 with zero weight, if any. Subsets
/// containing vertex 0 are complements of these, so they add no walls.
pub fn non_generic_witness(theta: &Theta) -> Result<Option<Vec<usize>>> {
    let n = theta.len();
    if n > MAX_GENERICITY_ORDER {
        return Err(Error::TooLarge { order: n, limit: MAX_GENERICITY_ORDER });
    }
    let values = theta.scaled()?;
    let rest = n - 1;
    let mut sums = vec![0i128; 1 << rest];
    for mask in 1usize..1 << rest {
        let low = mask.trailing_zeros() as usize;
        sums[mask] = sums[mask & (mask - 1)] + values[low + 1];
        if sums[mask] == 0 {
            return Ok(Some((0..rest).filter(|i| mask >> i & 1 == 1).map(|i| i + 1).collect()));
        }
    }
    Ok(None)
}

/// Conservative genericity: every nonempty proper subset has nonzero weight.
/// Parameters with too many characters to check are never certified.
pub fn is_generic(theta: &Theta) -> bool {
    matches!(non_generic_witness(theta), Ok(None))
}

fn require_generic(theta: &Theta) -> Result<()> {
    match non_generic_witness(theta)? {
        None => Ok(()),
        Some(subset) => Err(Error::NonGeneric { subset }),
    }
}

/// A torus-fixed representation, recorded by the arrows carrying a nonzero value.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FixedConstellation {
    /// Sorted arrow ids.
    pub arrows: Vec<usize>,
}

impl FixedConstellation {
    pub fn new(mut arrows: Vec<usize>) -> Self {
        arrows.sort_unstable();
        arrows.dedup();
        FixedConstellation { arrows }
    }

    pub fn contains(&self, arrow: usize) -> bool {
        self.arrows.binary_search(&arrow).is_ok()
    }

    /// Whether `x y = y x` holds at every vertex.
    pub fn is_square_compatible(&self, q: &McKayQuiver) -> bool {
        (0..q.order()).all(|v| {
            let xy = self.contains(2 * v) && self.contains(2 * q.head_x[v] + 1);
            let yx = self.contains(2 * v + 1) && self.contains(2 * q.head_y[v]);
            xy == yx
        })
    }

    /// A potential `c` with `c(head) - c(tail) = weight` on every support
    /// arrow and `c(0) = 0`, when the support is connected and admits one.
    pub fn potential(&self, q: &McKayQuiver) -> Option<Vec<[i64; 2]>> {
        let n = q.order();
        let mut c: Vec<Option<[i64; 2]>> = vec![None; n];
        c[0] = Some([0, 0]);
        let mut stack = vec![0];
        while let Some(v) = stack.pop() {
            let cv = c[v].expect("visited");
            for &a in &self.arrows {
                let (t, h, w) = (q.tail(a), q.head(a), q.weight(a));
                let (other, value) = if t == v {
                    (h, [cv[0] + w[0], cv[1] + w[1]])
                } else if h == v {
                    (t, [cv[0] - w[0], cv[1] - w[1]])
                } else {
                    continue;
                };
                match c[other] {
                    None => {
                        c[other] = Some(value);
                        stack.push(other);
                    }
                    Some(existing) if existing != value => return None,
                    Some(_) => {}
                }
            }
        }
        c.into_iter().collect()
    }

    /// Whether every nonempty proper head-closed vertex subset has positive weight.
    pub fn is_stable(&self, q: &McKayQuiver, theta: &Theta) -> Result<bool> {
        theta.check_against(q)?;
        let n = q.order();
        if n > MAX_ENUMERATION_ORDER {
            return Err(Error::TooLarge { order: n, limit: MAX_ENUMERATION_ORDER });
        }
        let mut succ = vec![0u32; n];
        for &a in &self.arrows {
            succ[q.tail(a)] |= 1 << q.head(a);
        }
        Ok(stable_by_subsets(&succ, &theta.scaled()?))
    }
}

fn stable_by_subsets(succ: &[u32], theta: &[i128]) -> bool {
    let n = succ.len();
    let full: u32 = if n == 32 { u32::MAX } else { (1 << n) - 1 };
    let mut sums = vec![0i128; 1 << n];
    for s in 1u32..full {
        let low = s.trailing_zeros() as usize;
        sums[s as usize] = sums[(s & (s - 1)) as usize] + theta[low];
        if sums[s as usize] > 0 {
            continue;
        }
        let closed = (0..n).all(|v| s >> v & 1 == 0 || succ[v] & !s == 0);
        if closed {
            return false;
        }
    }
    true
}

/// Union–find with `Z^2` offsets `c(v) - c(parent(v))` and an undo log.
struct PotentialForest {
    parent: Vec<usize>,
    offset: Vec<[i64; 2]>,
    size: Vec<usize>,
    log: Vec<(usize, usize)>,
}

impl PotentialForest {
    fn new(n: usize) -> Self {
        PotentialForest { parent: (0..n).collect(), offset: vec![[0, 0]; n], size: vec![1; n], log: Vec::new() }
    }

    fn find(&self, mut v: usize) -> (usize, [i64; 2]) {
        let mut off = [0, 0];
        while self.parent[v] != v {
            off[0] += self.offset[v][0];
            off[1] += self.offset[v][1];
            v = self.parent[v];
        }
        (v, off)
    }

    /// Imposes `c(b) - c(a) = w`; false on contradiction.
    fn link(&mut self, a: usize, b: usize, w: [i64; 2]) -> bool {
        let (ra, oa) = self.find(a);
        let (rb, ob) = self.find(b);
        if ra == rb {
            return ob[0] - oa[0] == w[0] && ob[1] - oa[1] == w[1];
        }
        // c(rb) - c(ra) = w + oa - ob
        let d = [w[0] + oa[0] - ob[0], w[1] + oa[1] - ob[1]];
        let (child, root, off) = if self.size[ra] >= self.size[rb] { (rb, ra, d) } else { (ra, rb, [-d[0], -d[1]]) };
        self.parent[child] = root;
        self.offset[child] = off;
        self.size[root] += self.size[child];
        self.log.push((child, root));
        true
    }

    fn rollback(&mut self, mark: usize) {
        while self.log.len() > mark {
            let (child, root) = self.log.pop().expect("nonempty log");
            self.parent[child] = child;
            self.offset[child] = [0, 0];
            self.size[root] -= self.size[child];
        }
    }

    fn components(&self) -> usize {
        (0..self.parent.len()).filter(|&v| self.parent[v] == v).count()
    }
}

struct Search<'a> {
    q: &'a McKayQuiver,
    theta: Vec<i128>,
    order: Vec<usize>,
    tail_x: Vec<usize>,
    tail_y: Vec<usize>,
    /// Per vertex: `None` undecided, else `(x present, y present)`.
    bits: Vec<Option<(bool, bool)>>,
    forest: PotentialForest,
    found: Vec<FixedConstellation>,
}

impl Search<'_> {
    fn x(&self, v: usize) -> Option<bool> {
        self.bits[v].map(|b| b.0)
    }

    fn y(&self, v: usize) -> Option<bool> {
        self.bits[v].map(|b| b.1)
    }

    fn square_ok(&self, base: usize) -> bool {
        let q = self.q;
        let (Some(x0), Some(y1), Some(y0), Some(x1)) =
            (self.x(base), self.y(q.head_x[base]), self.y(base), self.x(q.head_y[base]))
        else {
            return true;
        };
        (x0 && y1) == (y0 && x1)
    }

    fn source_ok(&self, v: usize) -> bool {
        match (self.x(self.tail_x[v]), self.y(self.tail_y[v])) {
            (Some(false), Some(false)) => self.theta[v] < 0,
            _ => true,
        }
    }

    fn locally_ok(&self, v: usize) -> bool {
        let q = self.q;
        let multi = self.theta.len() > 1;
        if multi && self.bits[v] == Some((false, false)) && self.theta[v] <= 0 {
            return false;
        }
        if multi && ![v, q.head_x[v], q.head_y[v]].iter().all(|&w| self.source_ok(w)) {
            return false;
        }
        [v, self.tail_x[v], self.tail_y[v]].iter().all(|&b| self.square_ok(b))
    }

    fn run(&mut self, depth: usize) {
        if depth == self.order.len() {
            self.leaf();
            return;
        }
        let v = self.order[depth];
        let q = self.q;
        for choice in [(false, false), (true, false), (false, true), (true, true)] {
            let mark = self.forest.log.len();
            let linked = (!choice.0 || self.forest.link(v, q.head_x[v], WEIGHT_X))
                && (!choice.1 || self.forest.link(v, q.head_y[v], WEIGHT_Y));
            self.bits[v] = Some(choice);
            if linked && self.locally_ok(v) {
                self.run(depth + 1);
            }
            self.bits[v] = None;
            self.forest.rollback(mark);
        }
    }

    fn leaf(&mut self) {
        if self.forest.components() != 1 {
            return;
        }
        let n = self.q.order();
        let mut succ = vec![0u32; n];
        let mut arrows = Vec::new();
        for v in 0..n {
            let (x, y) = self.bits[v].expect("decided");
            if x {
                succ[v] |= 1 << self.q.head_x[v];
                arrows.push(2 * v);
            }
            if y {
                succ[v] |= 1 << self.q.head_y[v];
                arrows.push(2 * v + 1);
            }
        }
        if stable_by_subsets(&succ, &self.theta) {
            self.found.push(FixedConstellation::new(arrows));
        }
    }
}

/// Every torus-fixed θ-stable support, sorted.
pub fn enumerate_fixed_stable(q: &McKayQuiver, theta: &Theta) -> Result<Vec<FixedConstellation>> {
    theta.check_against(q)?;
    let n = q.order();
    if n > MAX_ENUMERATION_ORDER {
        return Err(Error::TooLarge { order: n, limit: MAX_ENUMERATION_ORDER });
    }
    let mut tail_x = vec![0; n];
    let mut tail_y = vec![0; n];
    for v in 0..n {
        tail_x[q.head_x[v]] = v;
        tail_y[q.head_y[v]] = v;
    }
    // Breadth-first order keeps squares closing early.
    let mut order = vec![0];
    let mut seen = vec![false; n];
    seen[0] = true;
    let mut i = 0;
    while i < order.len() {
        let v = order[i];
        for w in [q.head_x[v], q.head_y[v], tail_x[v], tail_y[v]] {
            if !seen[w] {
                seen[w] = true;
                order.push(w);
            }
        }
        i += 1;
    }
    let mut search = Search {
        q,
        theta: theta.scaled()?,
        order,
        tail_x,
        tail_y,
        bits: vec![None; n],
        forest: PotentialForest::new(n),
        found: Vec::new(),
    };
    search.run(0);
    let mut found = search.found;
    found.sort();
    Ok(found)
}

fn pairing(u: &RatVec2, w: [i64; 2]) -> Rat {
    &u.0[0] * int(w[0]) + &u.0[1] * int(w[1])
}

/// Whether some `c` makes `<u, w(a)> + c(head) - c(tail)` vanish on the
/// support and stay positive off it.
pub fn is_limit_along(q: &McKayQuiver, support: &FixedConstellation, u: &RatVec2) -> bool {
    let n = q.order();
    let t = n;
    let mut lp = LinearProgram::new(n + 1);
    lp.set_nonneg(t);
    lp.add_sparse(&[(t, Rat::one())], Relation::Ge, Rat::one());
    for a in 0..q.num_arrows() {
        let (tail, head) = (q.tail(a), q.head(a));
        let mut terms = vec![(t, pairing(u, q.weight(a)))];
        if tail != head {
            terms.push((head, Rat::one()));
            terms.push((tail, -Rat::one()));
        }
        if support.contains(a) {
            lp.add_sparse(&terms, Relation::Eq, Rat::zero());
        } else {
            lp.add_sparse(&terms, Relation::Ge, Rat::one());
        }
    }
    lp.solve().is_feasible()
}

/// Indices of the supports that are limits along `u`.
pub fn feasible_limit_supports(q: &McKayQuiver, supports: &[FixedConstellation], u: &RatVec2) -> Vec<usize> {
    (0..supports.len()).filter(|&i| is_limit_along(q, &supports[i], u)).collect()
}

fn check_direction(q: &McKayQuiver, u: &RatVec2) -> Result<()> {
    if !u.0[0].is_positive() || !u.0[1].is_positive() {
        return Err(Error::NoFeasibleSupport(format!("{u} is not in the open quadrant")));
    }
    if !q.n2.contains(u) {
        return Err(Error::NotInLattice(u.to_string()));
    }
    Ok(())
}

/// The limit support along `u` among already enumerated stable supports.
pub fn limit_among(q: &McKayQuiver, supports: &[FixedConstellation], u: &RatVec2) -> Result<FixedConstellation> {
    check_direction(q, u)?;
    let feasible = feasible_limit_supports(q, supports, u);
    match feasible.as_slice() {
        [i] => Ok(supports[*i].clone()),
        [] => Err(Error::NoFeasibleSupport(u.to_string())),
        many => Err(Error::MultipleFeasibleSupports { direction: u.to_string(), count: many.len() }),
    }
}

/// The torus-fixed point of `M_θ` reached along the one-parameter subgroup `u`.
pub fn ps_limit(q: &McKayQuiver, theta: &Theta, u: &RatVec2) -> Result<FixedConstellation> {
    require_generic(theta)?;
    check_direction(q, u)?;
    let supports = enumerate_fixed_stable(q, theta)?;
    limit_among(q, &supports, u)
}

/// The closed cone of directions along which `support` is the limit.
pub fn limit_cone(q: &McKayQuiver, support: &FixedConstellation) -> Option<Cone2> {
    let n = q.order();
    let mut system = LinearSystem::new(n + 2);
    for a in 0..q.num_arrows() {
        let mut row = vec![Rat::zero(); n + 2];
        let w = q.weight(a);
        row[0] = int(w[0]);
        row[1] = int(w[1]);
        let (tail, head) = (q.tail(a), q.head(a));
        if tail != head {
            row[2 + head] += Rat::one();
            row[2 + tail] -= Rat::one();
        }
        if support.contains(a) {
            system.add_equality(row, Rat::zero());
        } else {
            system.add_inequality(row, Rat::zero());
        }
    }
    let eliminate: Vec<usize> = (2..n + 2).collect();
    let projected = system.project_out(&eliminate)?;
    let mut normals: Vec<[Rat; 2]> = Vec::new();
    for r in &projected.equalities {
        normals.push([r.coeffs[0].clone(), r.coeffs[1].clone()]);
        normals.push([-r.coeffs[0].clone(), -r.coeffs[1].clone()]);
    }
    for r in &projected.inequalities {
        normals.push([r.coeffs[0].clone(), r.coeffs[1].clone()]);
    }
    Cone2::from_halfplanes(&normals)
}

#[derive(Clone, Debug)]
pub struct ModuliFan {
    pub resolution: Resolution,
    /// Stable supports with their maximal cones, in angular order.
    pub cones: Vec<(FixedConstellation, Cone2)>,
}

/// The fan of `M_θ`, assembled from the limit cones of the stable supports.
pub fn moduli_fan_detailed(q: &McKayQuiver, theta: &Theta) -> Result<ModuliFan> {
    require_generic(theta)?;
    let supports = enumerate_fixed_stable(q, theta)?;
    let mut cones = Vec::new();
    for s in supports {
        match limit_cone(q, &s) {
            Some(c) if c.is_full_dimensional() => cones.push((s, c)),
            _ => return Err(Error::Tiling(format!("support {:?} has no full-dimensional cone", s.arrows))),
        }
    }
    cones.sort_by(|a, b| a.1.start.angle_cmp(&b.1.start));
    let same_ray = |u: &RatVec2, v: &RatVec2| u.cross(v).is_zero();
    let (first, last) = match (cones.first(), cones.last()) {
        (Some(f), Some(l)) => (f, l),
        _ => return Err(Error::Tiling("no stable supports".into())),
    };
    if !same_ray(&first.1.start, &RatVec2::unit(0)) || !same_ray(&last.1.end, &RatVec2::unit(1)) {
        return Err(Error::Tiling("cones do not reach both axes".into()));
    }
    let mut rays = vec![q.n2.primitive(&RatVec2::unit(0))?];
    for pair in cones.windows(2) {
        let (prev, next) = (&pair[0].1, &pair[1].1);
        if !same_ray(&prev.end, &next.start) {
            let kind = if prev.end.angle_cmp(&next.start).is_lt() { "gap" } else { "overlap" };
            return Err(Error::Tiling(format!("{kind} between {} and {}", prev.end, next.start)));
        }
        rays.push(q.n2.primitive(&prev.end)?);
    }
    rays.push(q.n2.primitive(&RatVec2::unit(1))?);
    let resolution = Resolution::from_rays(&q.n2, rays).map_err(|e| Error::Tiling(e.to_string()))?;
    Ok(ModuliFan { resolution, cones })
}

pub fn moduli_fan(q: &McKayQuiver, theta: &Theta) -> Result<Resolution> {
    moduli_fan_detailed(q, theta).map(|f| f.resolution)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::RatVec;
    use crate::surface::{maximal_resolution, minimal_resolution};

    fn quiver(n: u32, a: u32, b: u32) -> McKayQuiver {
        build_mckay_quiver(&AbelianAction::cyclic(n, a, b).unwrap())
    }

    fn trivial() -> McKayQuiver {
        build_mckay_quiver(&AbelianAction::new(1, &[]).unwrap())
    }

    fn theta(v: &[i64]) -> Theta {
        Theta::from_ints(v).unwrap()
    }

    #[test]
    fn quiver_shapes() {
        let q = quiver(3, 1, 1);
        assert_eq!(q.order(), 3);
        assert_eq!(q.arrows(), vec![(0, 1), (0, 1), (1, 2), (1, 2), (2, 0), (2, 0)]);
        let q = quiver(8, 1, 3);
        assert_eq!(q.order(), 8);
        for v in 0..8 {
            assert_eq!(q.head(2 * v), (v + 1) % 8);
            assert_eq!(q.head(2 * v + 1), (v + 3) % 8);
        }
        let t = trivial();
        assert_eq!(t.arrows(), vec![(0, 0), (0, 0)]);
        let klein = build_mckay_quiver(&AbelianAction::new(2, &[[1, 0], [0, 1]]).unwrap());
        assert_eq!(klein.order(), 4);
        for v in 0..4 {
            let mut degree = [0; 2];
            for (t, h) in klein.arrows() {
                degree[0] += (t == v) as usize;
                degree[1] += (h == v) as usize;
            }
            assert_eq!(degree, [2, 2]);
        }
    }

    #[test]
    fn theta_validation() {
        assert!(Theta::from_ints(&[1, 1]).is_err());
        assert!(Theta::from_ints(&[]).is_err());
        let q = quiver(3, 1, 1);
        assert!(enumerate_fixed_stable(&q, &theta(&[1, -1])).is_err());
    }

    #[test]
    fn genericity() {
        assert!(is_generic(&theta(&[-2, 1, 1])));
        assert!(!is_generic(&theta(&[0, 0, 0])));
        assert_eq!(non_generic_witness(&theta(&[-1, 1, 0])).unwrap(), Some(vec![2]));
        assert!(is_generic(&theta(&[0])));
    }

    #[test]
    fn stable_supports_of_one_third() {
        let q = quiver(3, 1, 1);
        let found = enumerate_fixed_stable(&q, &theta(&[-2, 1, 1])).unwrap();
        assert_eq!(found, vec![FixedConstellation::new(vec![0, 2]), FixedConstellation::new(vec![1, 3])]);
        assert_eq!(enumerate_fixed_stable(&q, &theta(&[1, -2, 1])).unwrap().len(), 2);
        let t = trivial();
        assert_eq!(enumerate_fixed_stable(&t, &theta(&[0])).unwrap(), vec![FixedConstellation::new(vec![])]);
    }

    #[test]
    fn doubled_chain_is_not_fixed() {
        let q = quiver(3, 1, 1);
        let doubled = FixedConstellation::new(vec![0, 1, 2, 3]);
        assert!(doubled.is_square_compatible(&q));
        assert!(doubled.is_stable(&q, &theta(&[-2, 1, 1])).unwrap());
        assert!(doubled.potential(&q).is_none());
        let mixed = FixedConstellation::new(vec![0, 3]);
        assert!(!mixed.is_square_compatible(&q));
    }

    #[test]
    fn limits_of_one_third() {
        let q = quiver(3, 1, 1);
        let th = theta(&[-2, 1, 1]);
        let y_chain = ps_limit(&q, &th, &RatVec::from_fracs([4, 1], 3)).unwrap();
        assert_eq!(y_chain.arrows, vec![1, 3]);
        let x_chain = ps_limit(&q, &th, &RatVec::from_fracs([1, 4], 3)).unwrap();
        assert_eq!(x_chain.arrows, vec![0, 2]);
        assert!(matches!(ps_limit(&q, &th, &RatVec::from_fracs([1, 1], 3)), Err(Error::NoFeasibleSupport(_))));
        assert!(matches!(ps_limit(&q, &th, &RatVec::from_fracs([1, 2], 3)), Err(Error::NotInLattice(_))));
        assert!(matches!(ps_limit(&q, &theta(&[0, 0, 0]), &RatVec::from_ints([1, 1])), Err(Error::NonGeneric { .. })));
        let t = trivial();
        assert!(ps_limit(&t, &theta(&[0]), &RatVec::from_ints([2, 5])).unwrap().arrows.is_empty());
    }

    #[test]
    fn fans() {
        let q = quiver(3, 1, 1);
        let n2 = q.n2().clone();
        assert_eq!(moduli_fan(&q, &theta(&[-2, 1, 1])).unwrap(), minimal_resolution(&n2));
        let t = trivial();
        assert_eq!(moduli_fan(&t, &theta(&[0])).unwrap(), minimal_resolution(&Lattice2::integer()));
        let q = quiver(8, 1, 3);
        let max = maximal_resolution(q.n2());
        let detailed = moduli_fan_detailed(&q, &theta(&[-7, 1, 1, 1, 1, 1, 1, 1])).unwrap();
        assert_eq!(detailed.cones.len(), detailed.resolution.cone_count());
        assert!(detailed.resolution.exceptional().iter().all(|r| max.rays().contains(r)));
    }

    #[test]
    fn character_indices() {
        let q = quiver(8, 1, 3);
        assert_eq!(q.character_index([0, 0]), 0);
        assert_eq!(q.character_index([1, 0]), 1);
        assert_eq!(q.character_index([0, 1]), 3);
        assert_eq!(q.character_index([1, 3]), 2);
        for v in 0..8 {
            assert_eq!(q.character_index(q.representative(v)), v);
        }
    }

    #[test]
    fn theta_json() {
        let th = Theta::new(vec![crate::rational::rat(-1, 2), crate::rational::rat(1, 2)]).unwrap();
        let text = serde_json::to_string(&th).unwrap();
        assert_eq!(text, r#"["-1/2","1/2"]"#);
        assert_eq!(serde_json::from_str::<Theta>(&text).unwrap(), th);
        assert!(serde_json::from_str::<Theta>(r#"["1","1"]"#).is_err());
        let s = FixedConstellation::new(vec![3, 1]);
        assert_eq!(serde_json::to_string(&s).unwrap(), "[1,3]");
    }
}
