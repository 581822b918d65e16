//! Exact linear programming over the rationals.
//!
//! A dense two-phase tableau simplex with Bland's anti-cycling rule. Free
//! variables that occur in equality rows are eliminated by substitution
//! before the simplex runs, which keeps the tableaux for the small systems
//! used in this crate tiny. Infeasibility can be certified by a Farkas
//! multiplier vector that [`LinearProgram::verify_farkas`] re-checks.

use num_traits::{One, Signed, Zero};

use crate::rational::Rat;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Ge,
    Le,
    Eq,
}

#[derive(Clone, Debug)]
pub struct Constraint {
    pub coeffs: Vec<Rat>,
    pub relation: Relation,
    pub rhs: Rat,
}

#[derive(Clone, Debug, PartialEq)]
pub enum LpOutcome {
    Optimal { point: Vec<Rat>, value: Rat },
    Infeasible,
    Unbounded,
}

impl LpOutcome {
    pub fn point(&self) -> Option<&[Rat]> {
        match self {
            LpOutcome::Optimal { point, .. } => Some(point),
            _ => None,
        }
    }

    pub fn is_feasible(&self) -> bool {
        !matches!(self, LpOutcome::Infeasible)
    }
}

/// Minimize `objective · x` subject to the constraints. Variables are free
/// unless marked nonnegative.
#[derive(Clone, Debug)]
pub struct LinearProgram {
    num_vars: usize,
    nonneg: Vec<bool>,
    constraints: Vec<Constraint>,
    objective: Vec<Rat>,
}

impl LinearProgram {
    pub fn new(num_vars: usize) -> Self {
        LinearProgram {
            num_vars,
            nonneg: vec![false; num_vars],
            constraints: Vec::new(),
            objective: vec![Rat::zero(); num_vars],
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn set_nonneg(&mut self, var: usize) {
        self.nonneg[var] = true;
    }

    pub fn add(&mut self, coeffs: Vec<Rat>, relation: Relation, rhs: Rat) {
        assert_eq!(coeffs.len(), self.num_vars, "constraint width");
        self.constraints.push(Constraint { coeffs, relation, rhs });
    }

    pub fn add_sparse(&mut self, terms: &[(usize, Rat)], relation: Relation, rhs: Rat) {
        let mut coeffs = vec![Rat::zero(); self.num_vars];
        for (var, c) in terms {
            coeffs[*var] += c;
        }
        self.add(coeffs, relation, rhs);
    }

    pub fn minimize(&mut self, objective: Vec<Rat>) {
        assert_eq!(objective.len(), self.num_vars, "objective width");
        self.objective = objective;
    }

    pub fn maximize(&mut self, objective: Vec<Rat>) {
        self.minimize(objective.into_iter().map(|c| -c).collect());
    }

    /// Whether `x` satisfies every constraint and sign restriction.
    pub fn is_feasible_point(&self, x: &[Rat]) -> bool {
        x.len() == self.num_vars
            && x.iter().zip(&self.nonneg).all(|(v, &nn)| !nn || !v.is_negative())
            && self.constraints.iter().all(|c| {
                let lhs: Rat = c.coeffs.iter().zip(x).map(|(a, v)| a * v).sum();
                match c.relation {
                    Relation::Ge => lhs >= c.rhs,
                    Relation::Le => lhs <= c.rhs,
                    Relation::Eq => lhs == c.rhs,
                }
            })
    }

    pub fn solve(&self) -> LpOutcome {
        let presolved = match Presolved::new(self) {
            Some(p) => p,
            None => return LpOutcome::Infeasible,
        };
        presolved.solve()
    }

    /// Multipliers `y` (one per constraint) proving infeasibility, or `None`
    /// when the program is feasible.
    pub fn farkas(&self) -> Option<Vec<Rat>> {
        let m = self.constraints.len();
        let mut dual = LinearProgram::new(m);
        // Ge rows carry y >= 0, Le rows y <= 0 (stored negated), Eq rows free.
        let flip: Vec<Rat> = self
            .constraints
            .iter()
            .map(|c| if c.relation == Relation::Le { -Rat::one() } else { Rat::one() })
            .collect();
        for (i, c) in self.constraints.iter().enumerate() {
            if c.relation != Relation::Eq {
                dual.set_nonneg(i);
            }
        }
        for j in 0..self.num_vars {
            let coeffs: Vec<Rat> = (0..m).map(|i| &self.constraints[i].coeffs[j] * &flip[i]).collect();
            let relation = if self.nonneg[j] { Relation::Le } else { Relation::Eq };
            dual.add(coeffs, relation, Rat::zero());
        }
        let rhs: Vec<Rat> = (0..m).map(|i| &self.constraints[i].rhs * &flip[i]).collect();
        dual.add(rhs, Relation::Eq, Rat::one());
        let point = dual.solve().point()?.to_vec();
        Some(point.into_iter().zip(flip).map(|(y, f)| y * f).collect())
    }

    /// Independent check of a Farkas certificate.
    pub fn verify_farkas(&self, y: &[Rat]) -> bool {
        if y.len() != self.constraints.len() {
            return false;
        }
        let signs_ok = self.constraints.iter().zip(y).all(|(c, yi)| match c.relation {
            Relation::Ge => !yi.is_negative(),
            Relation::Le => !yi.is_positive(),
            Relation::Eq => true,
        });
        let combo_ok = (0..self.num_vars).all(|j| {
            let s: Rat = self.constraints.iter().zip(y).map(|(c, yi)| &c.coeffs[j] * yi).sum();
            if self.nonneg[j] {
                !s.is_positive()
            } else {
                s.is_zero()
            }
        });
        let bound: Rat = self.constraints.iter().zip(y).map(|(c, yi)| &c.rhs * yi).sum();
        signs_ok && combo_ok && bound.is_positive()
    }
}

/// The program after eliminating free variables through equality rows.
struct Presolved {
    num_vars: usize,
    /// `(var, expression)` with `x_var = expr[..n] · x + expr[n]`, in elimination order.
    substitutions: Vec<(usize, Vec<Rat>)>,
    rows: Vec<(Vec<Rat>, Relation, Rat)>,
    objective: Vec<Rat>,
    objective_constant: Rat,
    nonneg: Vec<bool>,
}

fn substitute(row: &mut [Rat], rhs: &mut Rat, var: usize, expr: &[Rat]) {
    let coeff = std::mem::replace(&mut row[var], Rat::zero());
    if coeff.is_zero() {
        return;
    }
    let n = row.len();
    for j in 0..n {
        if !expr[j].is_zero() {
            row[j] += &coeff * &expr[j];
        }
    }
    *rhs -= &coeff * &expr[n];
}

impl Presolved {
    fn new(lp: &LinearProgram) -> Option<Self> {
        let n = lp.num_vars;
        let mut substitutions: Vec<(usize, Vec<Rat>)> = Vec::new();
        let mut rows = Vec::new();
        let mut eliminated = vec![false; n];
        for c in lp.constraints.iter().filter(|c| c.relation == Relation::Eq) {
            let mut row = c.coeffs.clone();
            let mut rhs = c.rhs.clone();
            for (var, expr) in &substitutions {
                substitute(&mut row, &mut rhs, *var, expr);
            }
            let pivot = (0..n).find(|&j| !lp.nonneg[j] && !eliminated[j] && !row[j].is_zero());
            match pivot {
                Some(k) => {
                    let a = row[k].clone();
                    let mut expr: Vec<Rat> = row.iter().map(|x| -x / &a).collect();
                    expr[k] = Rat::zero();
                    expr.push(&rhs / &a);
                    eliminated[k] = true;
                    substitutions.push((k, expr));
                }
                None if row.iter().all(Zero::is_zero) => {
                    if !rhs.is_zero() {
                        return None;
                    }
                }
                None => rows.push((row, Relation::Eq, rhs)),
            }
        }
        let mut finished_rows = Vec::new();
        let inequalities = lp
            .constraints
            .iter()
            .filter(|c| c.relation != Relation::Eq)
            .map(|c| (c.coeffs.clone(), c.relation, c.rhs.clone()));
        for (mut row, rel, mut rhs) in rows.into_iter().chain(inequalities) {
            for (var, expr) in &substitutions {
                substitute(&mut row, &mut rhs, *var, expr);
            }
            if row.iter().all(Zero::is_zero) {
                let ok = match rel {
                    Relation::Ge => !rhs.is_positive(),
                    Relation::Le => !rhs.is_negative(),
                    Relation::Eq => rhs.is_zero(),
                };
                if !ok {
                    return None;
                }
                continue;
            }
            finished_rows.push((row, rel, rhs));
        }
        let mut objective = lp.objective.clone();
        let mut neg_constant = Rat::zero();
        for (var, expr) in &substitutions {
            substitute(&mut objective, &mut neg_constant, *var, expr);
        }
        Some(Presolved {
            num_vars: n,
            substitutions,
            rows: finished_rows,
            objective,
            objective_constant: -neg_constant,
            nonneg: lp.nonneg.clone(),
        })
    }

    fn solve(&self) -> LpOutcome {
        let n = self.num_vars;
        let eliminated: Vec<bool> = {
            let mut e = vec![false; n];
            for (v, _) in &self.substitutions {
                e[*v] = true;
            }
            e
        };
        // Column layout: each surviving variable maps to one column (nonneg)
        // or two (free, split as x = p - q).
        let mut columns: Vec<(usize, bool)> = Vec::new();
        for j in (0..n).filter(|&j| !eliminated[j]) {
            columns.push((j, true));
            if !self.nonneg[j] {
                columns.push((j, false));
            }
        }
        let structural = columns.len();
        let slack_count = self.rows.iter().filter(|r| r.1 != Relation::Eq).count();
        let width = structural + slack_count;
        let mut a: Vec<Vec<Rat>> = Vec::with_capacity(self.rows.len());
        let mut b: Vec<Rat> = Vec::with_capacity(self.rows.len());
        let mut slack = structural;
        for (row, rel, rhs) in &self.rows {
            let mut line = vec![Rat::zero(); width];
            for (col, (var, positive)) in columns.iter().enumerate() {
                line[col] = if *positive { row[*var].clone() } else { -row[*var].clone() };
            }
            match rel {
                Relation::Ge => {
                    line[slack] = -Rat::one();
                    slack += 1;
                }
                Relation::Le => {
                    line[slack] = Rat::one();
                    slack += 1;
                }
                Relation::Eq => {}
            }
            let mut rhs = rhs.clone();
            if rhs.is_negative() {
                line.iter_mut().for_each(|x| *x = -x.clone());
                rhs = -rhs;
            }
            a.push(line);
            b.push(rhs);
        }
        let mut cost = vec![Rat::zero(); width];
        for (col, (var, positive)) in columns.iter().enumerate() {
            cost[col] = if *positive {
                self.objective[*var].clone()
            } else {
                -self.objective[*var].clone()
            };
        }
        match standard_simplex(a, b, &cost) {
            StandardOutcome::Infeasible => LpOutcome::Infeasible,
            StandardOutcome::Unbounded => LpOutcome::Unbounded,
            StandardOutcome::Optimal(y) => {
                let mut x = vec![Rat::zero(); n];
                for (col, (var, positive)) in columns.iter().enumerate() {
                    if *positive {
                        x[*var] += &y[col];
                    } else {
                        x[*var] -= &y[col];
                    }
                }
                for (var, expr) in self.substitutions.iter().rev() {
                    let mut value = expr[n].clone();
                    for j in 0..n {
                        if !expr[j].is_zero() {
                            value += &expr[j] * &x[j];
                        }
                    }
                    x[*var] = value;
                }
                let value: Rat =
                    self.objective.iter().zip(&x).map(|(c, v)| c * v).sum::<Rat>() + &self.objective_constant;
                LpOutcome::Optimal { point: x, value }
            }
        }
    }
}

enum StandardOutcome {
    Optimal(Vec<Rat>),
    Infeasible,
    Unbounded,
}

struct Tableau {
    rows: Vec<Vec<Rat>>,
    /// Reduced costs; the last entry is minus the objective value.
    costs: Vec<Rat>,
    basis: Vec<usize>,
}

impl Tableau {
    fn pivot(&mut self, r: usize, col: usize) {
        let p = self.rows[r][col].clone();
        self.rows[r].iter_mut().for_each(|x| *x /= &p);
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i != r && !row[col].is_zero() {
                let f = row[col].clone();
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    if !y.is_zero() {
                        *x -= &f * y;
                    }
                }
            }
        }
        if !self.costs[col].is_zero() {
            let f = self.costs[col].clone();
            for (x, y) in self.costs.iter_mut().zip(&pivot_row) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        self.basis[r] = col;
    }

    /// Bland's rule iterations over columns `< allowed`. Returns false when unbounded.
    fn optimize(&mut self, allowed: usize) -> bool {
        loop {
            let Some(col) = (0..allowed).find(|&j| self.costs[j].is_negative()) else {
                return true;
            };
            let last = self.rows.first().map_or(0, |r| r.len() - 1);
            let mut best: Option<(Rat, usize, usize)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if row[col].is_positive() {
                    let ratio = &row[last] / &row[col];
                    let better = match &best {
                        None => true,
                        Some((r, _, bvar)) => ratio < *r || (ratio == *r && self.basis[i] < *bvar),
                    };
                    if better {
                        best = Some((ratio, i, self.basis[i]));
                    }
                }
            }
            match best {
                Some((_, r, _)) => self.pivot(r, col),
                None => return false,
            }
        }
    }
}

/// Minimize `cost · x` subject to `a x = b`, `x >= 0`, with `b >= 0`.
fn standard_simplex(a: Vec<Vec<Rat>>, b: Vec<Rat>, cost: &[Rat]) -> StandardOutcome {
    let m = a.len();
    let width = cost.len();
    if m == 0 {
        return if cost.iter().any(|c| c.is_negative()) {
            StandardOutcome::Unbounded
        } else {
            StandardOutcome::Optimal(vec![Rat::zero(); width])
        };
    }
    let total = width + m;
    let mut rows = Vec::with_capacity(m);
    for (i, (line, rhs)) in a.into_iter().zip(b).enumerate() {
        let mut row = line;
        row.resize(total, Rat::zero());
        row[width + i] = Rat::one();
        row.push(rhs);
        rows.push(row);
    }
    let mut costs = vec![Rat::zero(); total + 1];
    for row in &rows {
        for j in 0..width {
            costs[j] -= &row[j];
        }
        costs[total] -= &row[total];
    }
    let mut t = Tableau { rows, costs, basis: (width..total).collect() };
    t.optimize(total);
    if !t.costs[total].is_zero() {
        return StandardOutcome::Infeasible;
    }
    // Drive artificial variables out of the basis; drop redundant rows.
    let mut r = 0;
    while r < t.rows.len() {
        if t.basis[r] >= width {
            match (0..width).find(|&j| !t.rows[r][j].is_zero()) {
                Some(col) => t.pivot(r, col),
                None => {
                    t.rows.remove(r);
                    t.basis.remove(r);
                    continue;
                }
            }
        }
        r += 1;
    }
    for row in &mut t.rows {
        row.drain(width..total);
    }
    let mut costs: Vec<Rat> = cost.to_vec();
    costs.push(Rat::zero());
    for (i, row) in t.rows.iter().enumerate() {
        let cb = &cost[t.basis[i]];
        if !cb.is_zero() {
            for (c, x) in costs.iter_mut().zip(row) {
                *c -= cb * x;
            }
        }
    }
    t.costs = costs;
    if !t.optimize(width) {
        return StandardOutcome::Unbounded;
    }
    let mut x = vec![Rat::zero(); width];
    for (i, row) in t.rows.iter().enumerate() {
        x[t.basis[i]] = row[width].clone();
    }
    StandardOutcome::Optimal(x)
}
