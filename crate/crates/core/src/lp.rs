//! Exact linear programming.
//!
//! Minimizes `c·x` subject to rows `a·x ≥ b` or `a·x = b` over free
//! variables. Solutions are always vertices of the feasible polyhedron, so
//! the set of tight rows has full rank.

use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RowKind {
    AtLeast,
    Equal,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Row<T> {
    pub coeffs: Vec<T>,
    pub rhs: T,
    pub kind: RowKind,
}

impl<T: Scalar> Row<T> {
    pub fn value(&self, x: &[T]) -> T {
        dot(&self.coeffs, x)
    }

    pub fn is_satisfied(&self, x: &[T]) -> bool {
        let v = self.value(x);
        match self.kind {
            RowKind::AtLeast => v >= self.rhs,
            RowKind::Equal => v == self.rhs,
        }
    }

    pub fn is_tight(&self, x: &[T]) -> bool {
        self.value(x) == self.rhs
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearProgram<T> {
    num_vars: usize,
    objective: Vec<T>,
    rows: Vec<Row<T>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasicSolution<T> {
    pub x: Vec<T>,
    pub objective: T,
    pub tight_rows: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpOutcome<T> {
    Optimal(BasicSolution<T>),
    Infeasible,
    Unbounded,
    /// Bounded and feasible, but the feasible region contains a line, so
    /// there is no vertex to report.
    NoVertex,
}

impl<T> LpOutcome<T> {
    pub fn optimal(self) -> Option<BasicSolution<T>> {
        match self {
            LpOutcome::Optimal(s) => Some(s),
            _ => None,
        }
    }
}

impl<T: Scalar> LinearProgram<T> {
    /// An LP in `num_vars` free variables with a zero objective.
    pub fn new(num_vars: usize) -> Self {
        LinearProgram { num_vars, objective: vec![T::zero(); num_vars], rows: Vec::new() }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn objective(&self) -> &[T] {
        &self.objective
    }

    pub fn rows(&self) -> &[Row<T>] {
        &self.rows
    }

    pub fn set_objective(&mut self, objective: Vec<T>) {
        assert_eq!(objective.len(), self.num_vars, "objective length");
        self.objective = objective;
    }

    pub fn set_cost(&mut self, var: usize, cost: T) {
        self.objective[var] = cost;
    }

    /// Adds a dense row and returns its index.
    pub fn add_row(&mut self, coeffs: Vec<T>, kind: RowKind, rhs: T) -> usize {
        assert_eq!(coeffs.len(), self.num_vars, "row length");
        self.rows.push(Row { coeffs, rhs, kind });
        self.rows.len() - 1
    }

    /// Adds `Σ coeff·x_var ≥ rhs` (or `=`) from sparse terms.
    pub fn add_sparse(&mut self, terms: &[(usize, T)], kind: RowKind, rhs: T) -> usize {
        let mut coeffs = vec![T::zero(); self.num_vars];
        for (var, c) in terms {
            coeffs[*var] += c;
        }
        self.add_row(coeffs, kind, rhs)
    }

    pub fn is_feasible(&self, x: &[T]) -> bool {
        x.len() == self.num_vars && self.rows.iter().all(|r| r.is_satisfied(x))
    }

    pub fn objective_value(&self, x: &[T]) -> T {
        dot(&self.objective, x)
    }

    pub fn tight_rows(&self, x: &[T]) -> Vec<usize> {
        (0..self.rows.len()).filter(|&i| self.rows[i].is_tight(x)).collect()
    }

    pub fn solve(&self) -> LpOutcome<T> {
        solve_basic(self)
    }
}

fn dot<T: Scalar>(a: &[T], x: &[T]) -> T {
    let mut acc = T::zero();
    for (ai, xi) in a.iter().zip(x) {
        if !ai.is_zero() && !xi.is_zero() {
            acc += ai.clone() * xi;
        }
    }
    acc
}

/// Dense simplex tableau. The last entry of every row is the right-hand
/// side; `cost` holds reduced costs with `-z` in its last entry.
struct Tableau<T> {
    rows: Vec<Vec<T>>,
    cost: Vec<T>,
    basis: Vec<usize>,
    blocked: Vec<bool>,
}

enum Pivoting {
    Optimal,
    Unbounded,
}

impl<T: Scalar> Tableau<T> {
    fn width(&self) -> usize {
        self.cost.len() - 1
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.rows[r][c].clone();
        if !p.is_one() {
            for e in self.rows[r].iter_mut() {
                if !e.is_zero() {
                    *e /= &p;
                }
            }
        }
        let support: Vec<usize> = (0..self.rows[r].len()).filter(|&j| !self.rows[r][j].is_zero()).collect();
        let pivot_row = std::mem::take(&mut self.rows[r]);
        let eliminate = |target: &mut Vec<T>| {
            let f = target[c].clone();
            if f.is_zero() {
                return;
            }
            for &j in &support {
                let delta = f.clone() * &pivot_row[j];
                target[j] -= delta;
            }
        };
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i != r {
                eliminate(row);
            }
        }
        eliminate(&mut self.cost);
        self.rows[r] = pivot_row;
        self.basis[r] = c;
    }

    /// Bland's rule: lowest-index improving column enters; ratio ties go to
    /// the lowest-index basic variable.
    fn run(&mut self) -> Pivoting {
        loop {
            let entering = (0..self.width()).find(|&j| !self.blocked[j] && self.cost[j].is_negative());
            let Some(c) = entering else { return Pivoting::Optimal };
            let last = self.width();
            let mut best: Option<(usize, T)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if !row[c].is_positive() {
                    continue;
                }
                let ratio = row[last].clone() / &row[c];
                let better = match &best {
                    None => true,
                    Some((bi, br)) => ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi]),
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            match best {
                Some((r, _)) => self.pivot(r, c),
                None => return Pivoting::Unbounded,
            }
        }
    }
}

/// Solves the LP exactly and returns an optimal vertex.
pub fn solve_basic<T: Scalar>(lp: &LinearProgram<T>) -> LpOutcome<T> {
    let n = lp.num_vars;
    let num_rows = lp.rows.len();
    // Columns: x⁺ (n), x⁻ (n), one surplus per inequality row, artificials.
    let num_surplus = lp.rows.iter().filter(|r| r.kind == RowKind::AtLeast).count();
    let mut rows: Vec<Vec<T>> = Vec::with_capacity(num_rows);
    let mut basis = vec![usize::MAX; num_rows];
    let mut needs_artificial = Vec::new();
    let mut surplus_col = 2 * n;
    for (i, row) in lp.rows.iter().enumerate() {
        let mut t = Vec::with_capacity(2 * n + num_surplus + 1);
        let flip = row.rhs.is_negative();
        let sign = |v: &T| if flip { -v.clone() } else { v.clone() };
        t.extend(row.coeffs.iter().map(sign));
        t.extend(row.coeffs.iter().map(|v| -sign(v)));
        t.extend((0..num_surplus).map(|_| T::zero()));
        if row.kind == RowKind::AtLeast {
            t[surplus_col] = if flip { T::one() } else { -T::one() };
            if flip {
                basis[i] = surplus_col;
            }
            surplus_col += 1;
        }
        t.push(sign(&row.rhs));
        if basis[i] == usize::MAX {
            needs_artificial.push(i);
        }
        rows.push(t);
    }
    let structural = 2 * n + num_surplus;
    let width = structural + needs_artificial.len();
    for row in rows.iter_mut() {
        let rhs = row.pop().expect("rhs");
        row.extend((0..needs_artificial.len()).map(|_| T::zero()));
        row.push(rhs);
    }
    for (k, &i) in needs_artificial.iter().enumerate() {
        rows[i][structural + k] = T::one();
        basis[i] = structural + k;
    }

    // Phase 1: minimize the sum of artificials.
    let mut cost = vec![T::zero(); width + 1];
    for &i in &needs_artificial {
        for (j, e) in rows[i].iter().enumerate() {
            if j < structural || j == width {
                if !e.is_zero() {
                    cost[j] -= e;
                }
            }
        }
    }
    let mut tab = Tableau { rows, cost, basis, blocked: vec![false; width] };
    if !needs_artificial.is_empty() {
        tab.run();
        if tab.cost[width].is_negative() {
            return LpOutcome::Infeasible;
        }
        // Drive remaining artificials out of the basis; drop redundant rows.
        let mut r = 0;
        while r < tab.rows.len() {
            if tab.basis[r] >= structural {
                match (0..structural).find(|&j| !tab.rows[r][j].is_zero()) {
                    Some(c) => tab.pivot(r, c),
                    None => {
                        tab.rows.remove(r);
                        tab.basis.remove(r);
                        continue;
                    }
                }
            }
            r += 1;
        }
        for j in structural..width {
            tab.blocked[j] = true;
        }
    }

    // Phase 2.
    let mut cost = vec![T::zero(); width + 1];
    for j in 0..n {
        cost[j] = lp.objective[j].clone();
        cost[n + j] = -lp.objective[j].clone();
    }
    for (r, &b) in tab.basis.iter().enumerate() {
        let cb = cost[b].clone();
        if cb.is_zero() {
            continue;
        }
        for j in 0..=width {
            let e = &tab.rows[r][j];
            if !e.is_zero() {
                let delta = cb.clone() * e;
                cost[j] -= delta;
            }
        }
    }
    tab.cost = cost;
    if let Pivoting::Unbounded = tab.run() {
        return LpOutcome::Unbounded;
    }

    let mut x = vec![T::zero(); n];
    for (r, &b) in tab.basis.iter().enumerate() {
        let value = &tab.rows[r][width];
        if b < n {
            x[b] += value;
        } else if b < 2 * n {
            x[b - n] -= value;
        }
    }
    match purify(lp, x) {
        Some(x) => {
            let objective = lp.objective_value(&x);
            let tight_rows = lp.tight_rows(&x);
            LpOutcome::Optimal(BasicSolution { x, objective, tight_rows })
        }
        None => LpOutcome::NoVertex,
    }
}

/// Moves an optimal point along directions that keep every tight row tight
/// until the tight rows have full rank. Returns `None` if the feasible
/// region contains a line through the point.
fn purify<T: Scalar>(lp: &LinearProgram<T>, mut x: Vec<T>) -> Option<Vec<T>> {
    let n = lp.num_vars;
    loop {
        let tight = lp.tight_rows(&x);
        let matrix: Vec<Vec<T>> = tight.iter().map(|&i| lp.rows[i].coeffs.clone()).collect();
        let (reduced, pivots) = row_echelon(matrix, n);
        if pivots.len() == n {
            return Some(x);
        }
        let free = (0..n).find(|j| !pivots.contains(j)).expect("free column");
        let mut d = vec![T::zero(); n];
        d[free] = T::one();
        for (row, &pc) in reduced.iter().zip(&pivots) {
            d[pc] = -row[free].clone();
        }
        let slope = lp.objective_value(&d);
        let directions = if slope.is_positive() { [true, false] } else { [false, true] };
        let mut moved = false;
        for negate in directions {
            let dir: Vec<T> = if negate { d.iter().map(|v| -v.clone()).collect() } else { d.clone() };
            let mut step: Option<T> = None;
            for row in &lp.rows {
                let rate = dot(&row.coeffs, &dir);
                if !rate.is_negative() {
                    continue;
                }
                let slack = row.value(&x) - &row.rhs;
                let t = slack / -rate;
                if step.as_ref().map_or(true, |s| t < *s) {
                    step = Some(t);
                }
            }
            if let Some(t) = step {
                for (xi, di) in x.iter_mut().zip(&dir) {
                    if !di.is_zero() {
                        *xi += t.clone() * di;
                    }
                }
                moved = true;
                break;
            }
        }
        if !moved {
            return None;
        }
    }
}

/// Reduced row echelon form; returns the nonzero rows and their pivot
/// columns.
fn row_echelon<T: Scalar>(mut m: Vec<Vec<T>>, cols: usize) -> (Vec<Vec<T>>, Vec<usize>) {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let pv = m[r][c].clone();
        for e in m[r].iter_mut() {
            *e /= &pv;
        }
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..cols {
                    if !m[r][j].is_zero() {
                        let delta = f.clone() * &m[r][j];
                        m[i][j] -= delta;
                    }
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == m.len() {
            break;
        }
    }
    m.truncate(r);
    (m, pivots)
}

/// Rank of an arbitrary matrix.
pub fn rank<T: Scalar>(matrix: &[Vec<T>], cols: usize) -> usize {
    row_echelon(matrix.to_vec(), cols).1.len()
}

/// Rank of the rows of `lp` that are tight at `solution.x`.
pub fn count_tight_independent<T: Scalar>(solution: &BasicSolution<T>, lp: &LinearProgram<T>) -> usize {
    let tight: Vec<Vec<T>> = lp.tight_rows(&solution.x).into_iter().map(|i| lp.rows[i].coeffs.clone()).collect();
    rank(&tight, lp.num_vars)
}
