//! Dense two-phase simplex over exact rationals.
//!
//! Solves `minimize c.x` subject to `A x = b`, `x >= 0`. Pivoting follows
//! Bland's rule, so the method terminates and is deterministic.

use num_traits::{Signed, Zero};

use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq)]
pub enum LpOutcome {
    Optimal { x: Vec<Rational>, value: Rational },
    Infeasible,
    Unbounded,
}

impl LpOutcome {
    pub fn solution(&self) -> Option<&[Rational]> {
        match self {
            LpOutcome::Optimal { x, .. } => Some(x),
            _ => None,
        }
    }
}

/// Equality-form linear program.
#[derive(Clone, Debug)]
pub struct LinearProgram {
    pub a: Vec<Vec<Rational>>,
    pub b: Vec<Rational>,
    pub c: Vec<Rational>,
}

struct Tableau {
    rows: Vec<Vec<Rational>>,
    basis: Vec<usize>,
}

impl Tableau {
    fn rhs(&self, i: usize) -> &Rational {
        self.rows[i].last().expect("rhs column")
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let p = self.rows[row][col].clone();
        for v in self.rows[row].iter_mut() {
            *v = &*v / &p;
        }
        let pivot_row = self.rows[row].clone();
        for (i, r) in self.rows.iter_mut().enumerate() {
            if i == row || r[col].is_zero() {
                continue;
            }
            let f = r[col].clone();
            for (v, p) in r.iter_mut().zip(pivot_row.iter()) {
                if !p.is_zero() {
                    *v = &*v - &f * p;
                }
            }
        }
        self.basis[row] = col;
    }

    /// Runs Bland's-rule simplex for `cost` over the columns `< ncols`.
    /// Returns `false` when unbounded.
    fn optimize(&mut self, cost: &[Rational], ncols: usize) -> bool {
        loop {
            let entering = (0..ncols).find(|&j| {
                if self.basis.contains(&j) {
                    return false;
                }
                let mut r = cost[j].clone();
                for (i, &bi) in self.basis.iter().enumerate() {
                    if !self.rows[i][j].is_zero() && !cost[bi].is_zero() {
                        r -= &cost[bi] * &self.rows[i][j];
                    }
                }
                r.is_negative()
            });
            let Some(col) = entering else { return true };
            let mut best: Option<(usize, Rational)> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][col];
                if !a.is_positive() {
                    continue;
                }
                let ratio = self.rhs(i) / a;
                let better = match &best {
                    None => true,
                    Some((bi, br)) => ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi]),
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            match best {
                Some((row, _)) => self.pivot(row, col),
                None => return false,
            }
        }
    }
}

impl LinearProgram {
    pub fn new(a: Vec<Vec<Rational>>, b: Vec<Rational>, c: Vec<Rational>) -> Self {
        LinearProgram { a, b, c }
    }

    pub fn solve(&self) -> LpOutcome {
        let m = self.a.len();
        let n = self.c.len();
        let zero = Rational::zero();
        let one = crate::rational::one();
        // Columns: n structural, m artificial, then the right-hand side.
        let mut rows = Vec::with_capacity(m);
        for (i, row) in self.a.iter().enumerate() {
            let flip = self.b[i].is_negative();
            let mut r: Vec<Rational> = row.iter().map(|v| if flip { -v } else { v.clone() }).collect();
            r.extend((0..m).map(|k| if k == i { one.clone() } else { zero.clone() }));
            r.push(if flip { -&self.b[i] } else { self.b[i].clone() });
            rows.push(r);
        }
        let mut t = Tableau { rows, basis: (n..n + m).collect() };
        let phase1: Vec<Rational> = (0..n + m).map(|j| if j >= n { one.clone() } else { zero.clone() }).collect();
        t.optimize(&phase1, n + m);
        let infeasibility: Rational = (0..m).filter(|&i| t.basis[i] >= n).map(|i| t.rhs(i).clone()).sum();
        if infeasibility.is_positive() {
            return LpOutcome::Infeasible;
        }
        // Drive remaining (zero-level) artificials out or drop redundant rows.
        let mut i = 0;
        while i < t.rows.len() {
            if t.basis[i] >= n {
                match (0..n).find(|&j| !t.rows[i][j].is_zero()) {
                    Some(j) => {
                        t.pivot(i, j);
                        i += 1;
                    }
                    None => {
                        t.rows.remove(i);
                        t.basis.remove(i);
                    }
                }
            } else {
                i += 1;
            }
        }
        let mut cost = self.c.clone();
        cost.extend((0..m).map(|_| zero.clone()));
        if !t.optimize(&cost, n) {
            return LpOutcome::Unbounded;
        }
        let mut x = vec![zero.clone(); n];
        for (i, &bi) in t.basis.iter().enumerate() {
            if bi < n {
                x[bi] = t.rhs(i).clone();
            }
        }
        let value = x.iter().zip(self.c.iter()).map(|(a, b)| a * b).sum();
        LpOutcome::Optimal { x, value }
    }
}
