//! Two-phase tableau simplex with Bland's rule.
//!
//! Runs over any [`Field`]. With exact fields the result is exact: optimal
//! points satisfy every constraint with no tolerance, and infeasible programs
//! come with a Farkas certificate read off the phase-one duals.

use super::{Field, Sign};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

#[derive(Clone, Debug)]
pub struct Constraint<F> {
    pub coeffs: Vec<F>,
    pub relation: Relation,
    pub rhs: F,
}

#[derive(Clone, Debug)]
pub enum Objective<F> {
    Maximize(Vec<F>),
    Feasibility,
}

/// `maximize c·x` subject to linear constraints, with every variable
/// non-negative unless declared free.
#[derive(Clone, Debug)]
pub struct LinearProgram<F> {
    num_vars: usize,
    free: Vec<bool>,
    constraints: Vec<Constraint<F>>,
    objective: Objective<F>,
}

#[derive(Clone, Debug)]
pub enum LpResult<F> {
    Optimal {
        value: F,
        point: Vec<F>,
    },
    /// `certificate[i]` multiplies constraint `i`; see [`LinearProgram::verify_certificate`].
    Infeasible {
        certificate: Vec<F>,
    },
    /// A feasible point and a ray along which the objective grows without bound.
    Unbounded {
        point: Vec<F>,
        ray: Vec<F>,
    },
}

impl<F> LpResult<F> {
    fn map(self, f: impl Fn(&F) -> F) -> LpResult<F> {
        let all = |v: Vec<F>| v.iter().map(&f).collect();
        match self {
            LpResult::Optimal { value, point } => LpResult::Optimal { value: f(&value), point: all(point) },
            LpResult::Infeasible { certificate } => LpResult::Infeasible { certificate: all(certificate) },
            LpResult::Unbounded { point, ray } => LpResult::Unbounded { point: all(point), ray: all(ray) },
        }
    }

    pub fn is_optimal(&self) -> bool {
        matches!(self, LpResult::Optimal { .. })
    }

    pub fn is_infeasible(&self) -> bool {
        matches!(self, LpResult::Infeasible { .. })
    }

    pub fn point(&self) -> Option<&[F]> {
        match self {
            LpResult::Optimal { point, .. } | LpResult::Unbounded { point, .. } => Some(point),
            LpResult::Infeasible { .. } => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LpError {
    #[error("constraint {index} has {found} coefficients, expected {expected}")]
    ConstraintWidth { index: usize, expected: usize, found: usize },
    #[error("objective has {found} coefficients, expected {expected}")]
    ObjectiveWidth { expected: usize, found: usize },
    #[error("variable index {index} out of range for {num_vars} variables")]
    VariableIndex { index: usize, num_vars: usize },
}

impl<F: Field> LinearProgram<F> {
    pub fn new(num_vars: usize) -> Self {
        LinearProgram {
            num_vars,
            free: vec![false; num_vars],
            constraints: Vec::new(),
            objective: Objective::Feasibility,
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn constraints(&self) -> &[Constraint<F>] {
        &self.constraints
    }

    pub fn objective(&self) -> &Objective<F> {
        &self.objective
    }

    pub fn maximize(mut self, coeffs: Vec<F>) -> Self {
        self.objective = Objective::Maximize(coeffs);
        self
    }

    pub fn set_objective(&mut self, objective: Objective<F>) {
        self.objective = objective;
    }

    /// Declares variable `index` unrestricted in sign.
    pub fn set_free(&mut self, index: usize) -> Result<(), LpError> {
        if index >= self.num_vars {
            return Err(LpError::VariableIndex { index, num_vars: self.num_vars });
        }
        self.free[index] = true;
        Ok(())
    }

    pub fn all_free(mut self) -> Self {
        self.free = vec![true; self.num_vars];
        self
    }

    pub fn is_free(&self, index: usize) -> bool {
        self.free[index]
    }

    pub fn add_constraint(&mut self, coeffs: Vec<F>, relation: Relation, rhs: F) {
        self.constraints.push(Constraint { coeffs, relation, rhs });
    }

    pub fn with_constraint(mut self, coeffs: Vec<F>, relation: Relation, rhs: F) -> Self {
        self.add_constraint(coeffs, relation, rhs);
        self
    }

    fn validate(&self) -> Result<(), LpError> {
        for (index, c) in self.constraints.iter().enumerate() {
            if c.coeffs.len() != self.num_vars {
                return Err(LpError::ConstraintWidth { index, expected: self.num_vars, found: c.coeffs.len() });
            }
        }
        if let Objective::Maximize(c) = &self.objective {
            if c.len() != self.num_vars {
                return Err(LpError::ObjectiveWidth { expected: self.num_vars, found: c.len() });
            }
        }
        Ok(())
    }

    /// Solves the program; deterministic for a given input.
    ///
    /// Programs with enclosure data are solved at the centres of the
    /// enclosures, carried at raised precision, and tableau entries within
    /// the input precision of zero count as zero. Pivoting on the inputs
    /// directly lets the radii grow with every pivot, and pivoting on rounding
    /// noise blows them up.
    pub fn solve(&self) -> Result<LpResult<F>, LpError> {
        self.validate()?;
        if let Some(like) = self.inexact_entry() {
            let centred = self.map(F::sharpened);
            let mut t = Tableau::build(&centred);
            t.tolerance = like.zero_tolerance();
            return Ok(t.run(&centred).map(F::restored));
        }
        Ok(Tableau::build(self).run(self))
    }

    fn inexact_entry(&self) -> Option<&F> {
        let objective = match &self.objective {
            Objective::Maximize(c) => c.as_slice(),
            Objective::Feasibility => &[],
        };
        self.constraints.iter().flat_map(|c| c.coeffs.iter().chain([&c.rhs])).chain(objective).find(|v| v.is_inexact())
    }

    fn map(&self, f: impl Fn(&F) -> F) -> LinearProgram<F> {
        LinearProgram {
            num_vars: self.num_vars,
            free: self.free.clone(),
            constraints: self
                .constraints
                .iter()
                .map(|c| Constraint { coeffs: c.coeffs.iter().map(&f).collect(), relation: c.relation, rhs: f(&c.rhs) })
                .collect(),
            objective: match &self.objective {
                Objective::Maximize(c) => Objective::Maximize(c.iter().map(&f).collect()),
                Objective::Feasibility => Objective::Feasibility,
            },
        }
    }

    /// Feasibility of the constraint set alone, with the same witness or
    /// certificate `solve` would produce under a zero objective.
    pub fn feasible(&self) -> Result<LpResult<F>, LpError> {
        let mut copy = self.clone();
        copy.objective = Objective::Feasibility;
        copy.solve()
    }

    fn row_value(&self, c: &Constraint<F>, x: &[F]) -> F {
        c.coeffs.iter().zip(x).fold(F::zero_value(), |acc, (a, v)| acc.plus(&a.times(v)))
    }

    pub fn objective_value(&self, x: &[F]) -> F {
        match &self.objective {
            Objective::Maximize(c) => c.iter().zip(x).fold(F::zero_value(), |acc, (a, v)| acc.plus(&a.times(v))),
            Objective::Feasibility => F::zero_value(),
        }
    }

    /// True when `x` satisfies every constraint and sign restriction.
    pub fn is_feasible_point(&self, x: &[F]) -> bool {
        if x.len() != self.num_vars {
            return false;
        }
        let signs_ok = x.iter().zip(&self.free).all(|(v, free)| *free || !v.is_negative_value());
        signs_ok
            && self.constraints.iter().all(|c| {
                let diff = self.row_value(c, x).minus(&c.rhs);
                match c.relation {
                    Relation::Le => !diff.is_positive_value(),
                    Relation::Ge => !diff.is_negative_value(),
                    Relation::Eq => diff.is_zero_value(),
                }
            })
    }

    /// Checks a Farkas certificate `y`: `y_i ≥ 0` on `≤` rows, `y_i ≤ 0` on
    /// `≥` rows, `(yᵀA)_j ≥ 0` for non-negative variables, `= 0` for free
    /// ones, and `yᵀb < 0`. Any feasible `x` would give `0 ≤ yᵀAx ≤ yᵀb < 0`.
    pub fn verify_certificate(&self, y: &[F]) -> bool {
        if y.len() != self.constraints.len() {
            return false;
        }
        let multipliers_ok = self.constraints.iter().zip(y).all(|(c, yi)| match c.relation {
            Relation::Le => !yi.is_negative_value(),
            Relation::Ge => !yi.is_positive_value(),
            Relation::Eq => true,
        });
        if !multipliers_ok {
            return false;
        }
        let columns_ok = (0..self.num_vars).all(|j| {
            let col =
                self.constraints.iter().zip(y).fold(F::zero_value(), |acc, (c, yi)| acc.plus(&yi.times(&c.coeffs[j])));
            if self.free[j] {
                col.is_zero_value()
            } else {
                !col.is_negative_value()
            }
        });
        let rhs = self.constraints.iter().zip(y).fold(F::zero_value(), |acc, (c, yi)| acc.plus(&yi.times(&c.rhs)));
        columns_ok && rhs.is_negative_value()
    }
}

/// Dense tableau `B⁻¹[A | I_art | b]` over the standardized program.
struct Tableau<F> {
    rows: Vec<Vec<F>>,
    basis: Vec<usize>,
    /// Row sign flips applied to make every right-hand side non-negative.
    flips: Vec<bool>,
    /// Original constraint index of each tableau row.
    origin: Vec<usize>,
    art_start: usize,
    num_cols: usize,
    /// For each original variable: (positive column, optional negative column).
    var_cols: Vec<(usize, Option<usize>)>,
    /// Magnitude below which entries count as zero.
    tolerance: Option<F>,
}

impl<F: Field> Tableau<F> {
    fn build(lp: &LinearProgram<F>) -> Self {
        let mut var_cols = Vec::with_capacity(lp.num_vars);
        let mut next = 0;
        for j in 0..lp.num_vars {
            if lp.free[j] {
                var_cols.push((next, Some(next + 1)));
                next += 2;
            } else {
                var_cols.push((next, None));
                next += 1;
            }
        }
        let num_struct = next;
        let num_slack = lp.constraints.iter().filter(|c| c.relation != Relation::Eq).count();
        let m = lp.constraints.len();
        let art_start = num_struct + num_slack;
        let num_cols = art_start + m;

        let mut rows = Vec::with_capacity(m);
        let mut flips = Vec::with_capacity(m);
        let mut slack = num_struct;
        for (i, c) in lp.constraints.iter().enumerate() {
            let mut row = vec![F::zero_value(); num_cols + 1];
            for (j, a) in c.coeffs.iter().enumerate() {
                let (pos, neg) = var_cols[j];
                row[pos] = a.clone();
                if let Some(neg) = neg {
                    row[neg] = a.negated();
                }
            }
            match c.relation {
                Relation::Le => {
                    row[slack] = F::one_value();
                    slack += 1;
                }
                Relation::Ge => {
                    row[slack] = F::one_value().negated();
                    slack += 1;
                }
                Relation::Eq => {}
            }
            row[num_cols] = c.rhs.clone();
            let flip = c.rhs.is_negative_value();
            if flip {
                for v in row.iter_mut() {
                    *v = v.negated();
                }
            }
            row[art_start + i] = F::one_value();
            rows.push(row);
            flips.push(flip);
        }
        Tableau {
            rows,
            basis: (art_start..art_start + m).collect(),
            flips,
            origin: (0..m).collect(),
            art_start,
            num_cols,
            var_cols,
            tolerance: None,
        }
    }

    fn sign(&self, v: &F) -> Sign {
        match &self.tolerance {
            Some(t) if !v.minus(t).is_positive_value() && !v.plus(t).is_negative_value() => Sign::Zero,
            _ => v.sign(),
        }
    }

    fn rhs(&self, r: usize) -> &F {
        &self.rows[r][self.num_cols]
    }

    fn pivot(&mut self, r: usize, col: usize) {
        let p = self.rows[r][col].clone();
        for v in self.rows[r].iter_mut() {
            *v = v.over(&p);
        }
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[col].is_zero_value() {
                continue;
            }
            let factor = row[col].clone();
            for (v, pv) in row.iter_mut().zip(&pivot_row) {
                if !pv.is_zero_value() {
                    *v = v.minus(&factor.times(pv));
                }
            }
            // keep the eliminated entry structurally zero
            row[col] = F::zero_value();
        }
        self.basis[r] = col;
    }

    /// Minimizes `costs·x` over the current basis. Returns the entering
    /// column of an unbounded direction, if any.
    fn optimize(&mut self, costs: &[F], allowed: usize) -> Option<usize> {
        loop {
            let cb: Vec<F> = self.basis.iter().map(|&b| costs[b].clone()).collect();
            // Bland: lowest-index column with negative reduced cost
            let entering = (0..allowed).find(|&j| {
                if self.basis.contains(&j) {
                    return false;
                }
                let z = self.rows.iter().zip(&cb).fold(F::zero_value(), |acc, (row, c)| acc.plus(&c.times(&row[j])));
                self.sign(&costs[j].minus(&z)) == Sign::Negative
            });
            let col = entering?;
            let mut leave: Option<(usize, F)> = None;
            for r in 0..self.rows.len() {
                let a = &self.rows[r][col];
                if self.sign(a) != Sign::Positive {
                    continue;
                }
                let ratio = self.rhs(r).over(a);
                leave = match leave {
                    None => Some((r, ratio)),
                    Some((best, best_ratio)) => match self.sign(&ratio.minus(&best_ratio)).to_ordering() {
                        std::cmp::Ordering::Less => Some((r, ratio)),
                        std::cmp::Ordering::Equal if self.basis[r] < self.basis[best] => Some((r, ratio)),
                        _ => Some((best, best_ratio)),
                    },
                };
            }
            match leave {
                Some((r, _)) => self.pivot(r, col),
                None => return Some(col),
            }
        }
    }

    fn basic_solution(&self) -> Vec<F> {
        let mut x = vec![F::zero_value(); self.num_cols];
        for (r, &b) in self.basis.iter().enumerate() {
            x[b] = self.rhs(r).clone();
        }
        x
    }

    fn to_original(&self, cols: &[F]) -> Vec<F> {
        self.var_cols
            .iter()
            .map(|&(pos, neg)| match neg {
                Some(neg) => cols[pos].minus(&cols[neg]),
                None => cols[pos].clone(),
            })
            .collect()
    }

    fn run(mut self, lp: &LinearProgram<F>) -> LpResult<F> {
        let m = self.rows.len();
        // phase one: minimize the sum of artificials
        let mut phase1 = vec![F::zero_value(); self.num_cols];
        for c in phase1.iter_mut().skip(self.art_start) {
            *c = F::one_value();
        }
        let unbounded = self.optimize(&phase1, self.num_cols);
        debug_assert!(unbounded.is_none(), "phase one is bounded below by zero");
        let infeasibility =
            self.basis.iter().enumerate().fold(F::zero_value(), |acc, (r, &b)| acc.plus(&phase1[b].times(self.rhs(r))));
        if self.sign(&infeasibility) == Sign::Positive {
            // π = c_Bᵀ B⁻¹; B⁻¹ sits in the artificial columns
            let certificate = (0..m)
                .map(|i| {
                    let pi = self.basis.iter().enumerate().fold(F::zero_value(), |acc, (r, &b)| {
                        acc.plus(&phase1[b].times(&self.rows[r][self.art_start + i]))
                    });
                    if self.flips[i] {
                        pi
                    } else {
                        pi.negated()
                    }
                })
                .collect();
            return LpResult::Infeasible { certificate };
        }

        // drive zero-level artificials out of the basis, dropping redundant rows
        let mut r = 0;
        while r < self.rows.len() {
            if self.basis[r] >= self.art_start {
                let replacement = (0..self.art_start).find(|&j| self.sign(&self.rows[r][j]) != Sign::Zero);
                match replacement {
                    Some(col) => {
                        self.pivot(r, col);
                        r += 1;
                    }
                    None => {
                        self.rows.remove(r);
                        self.basis.remove(r);
                        self.origin.remove(r);
                    }
                }
            } else {
                r += 1;
            }
        }

        let coeffs = match &lp.objective {
            Objective::Feasibility => {
                let point = self.to_original(&self.basic_solution());
                return LpResult::Optimal { value: F::zero_value(), point };
            }
            Objective::Maximize(c) => c,
        };
        let mut phase2 = vec![F::zero_value(); self.num_cols];
        for (j, c) in coeffs.iter().enumerate() {
            let (pos, neg) = self.var_cols[j];
            phase2[pos] = c.negated();
            if let Some(neg) = neg {
                phase2[neg] = c.clone();
            }
        }
        match self.optimize(&phase2, self.art_start) {
            None => {
                let point = self.to_original(&self.basic_solution());
                let value = lp.objective_value(&point);
                LpResult::Optimal { value, point }
            }
            Some(col) => {
                let point = self.to_original(&self.basic_solution());
                let mut dir = vec![F::zero_value(); self.num_cols];
                dir[col] = F::one_value();
                for (r, &b) in self.basis.iter().enumerate() {
                    dir[b] = self.rows[r][col].negated();
                }
                let ray = self.to_original(&dir);
                LpResult::Unbounded { point, ray }
            }
        }
    }
}
