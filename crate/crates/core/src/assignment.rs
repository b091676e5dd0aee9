//! Minimum-cost linear assignment over rectangular matrices with forbidden
//! entries.
//!
//! The solver maximises the number of allowed pairs first and minimises total
//! cost second. Internally every entry carries a lexicographic cost
//! `(penalty, cost)` where forbidden entries have penalty 1, so a single run of
//! the shortest-augmenting-path Hungarian method handles both objectives
//! without a large "infinity" constant polluting the float costs.

use std::cmp::Ordering;
use std::ops::{Add, AddAssign, Sub, SubAssign};

/// Row-major cost matrix; `None` entries are forbidden.
#[derive(Debug, Clone, PartialEq)]
pub struct CostMatrix {
    n_rows: usize,
    n_cols: usize,
    cost: Vec<f64>,
    forbidden: Vec<bool>,
}

impl CostMatrix {
    /// All entries forbidden.
    pub fn forbidden(n_rows: usize, n_cols: usize) -> Self {
        Self { n_rows, n_cols, cost: vec![0.0; n_rows * n_cols], forbidden: vec![true; n_rows * n_cols] }
    }

    pub fn from_fn(n_rows: usize, n_cols: usize, mut f: impl FnMut(usize, usize) -> Option<f64>) -> Self {
        let mut m = Self::forbidden(n_rows, n_cols);
        for i in 0..n_rows {
            for j in 0..n_cols {
                if let Some(c) = f(i, j) {
                    m.set(i, j, c);
                }
            }
        }
        m
    }

    /// Dense matrix; non-finite values become forbidden.
    pub fn from_rows(rows: &[Vec<f64>]) -> Self {
        let n_cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == n_cols), "ragged cost matrix");
        Self::from_fn(rows.len(), n_cols, |i, j| Some(rows[i][j]).filter(|c| c.is_finite()))
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    /// Sets an allowed entry. Panics on a non-finite cost.
    pub fn set(&mut self, row: usize, col: usize, cost: f64) {
        assert!(cost.is_finite(), "costs must be finite; use forbid()");
        let k = row * self.n_cols + col;
        self.cost[k] = cost;
        self.forbidden[k] = false;
    }

    pub fn forbid(&mut self, row: usize, col: usize) {
        self.forbidden[row * self.n_cols + col] = true;
    }

    pub fn get(&self, row: usize, col: usize) -> Option<f64> {
        let k = row * self.n_cols + col;
        (!self.forbidden[k]).then_some(self.cost[k])
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.n_cols, self.n_rows, |i, j| self.get(j, i))
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Assignment {
    /// Matched `(row, col)` pairs in ascending row order.
    pub pairs: Vec<(usize, usize)>,
    pub unmatched_rows: Vec<usize>,
    pub unmatched_cols: Vec<usize>,
    /// Sum of pair costs, accumulated in row order.
    pub total_cost: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Lex {
    penalty: i64,
    cost: f64,
}

impl Lex {
    const ZERO: Lex = Lex { penalty: 0, cost: 0.0 };
    const INF: Lex = Lex { penalty: i64::MAX / 4, cost: 0.0 };
}

impl PartialOrd for Lex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match self.penalty.cmp(&other.penalty) {
            Ordering::Equal => self.cost.partial_cmp(&other.cost),
            o => Some(o),
        }
    }
}

impl Add for Lex {
    type Output = Lex;
    fn add(self, o: Lex) -> Lex {
        Lex { penalty: self.penalty + o.penalty, cost: self.cost + o.cost }
    }
}

impl Sub for Lex {
    type Output = Lex;
    fn sub(self, o: Lex) -> Lex {
        Lex { penalty: self.penalty - o.penalty, cost: self.cost - o.cost }
    }
}

impl AddAssign for Lex {
    fn add_assign(&mut self, o: Lex) {
        *self = *self + o;
    }
}

impl SubAssign for Lex {
    fn sub_assign(&mut self, o: Lex) {
        *self = *self - o;
    }
}

/// Assigns every row of an `n × m` matrix (`n <= m`) to a distinct column.
/// Returns the column of each row.
fn hungarian(n: usize, m: usize, entry: impl Fn(usize, usize) -> Lex) -> Vec<usize> {
    debug_assert!(n <= m);
    // 1-based potentials; column 0 is the virtual source.
    let mut u = vec![Lex::ZERO; n + 1];
    let mut v = vec![Lex::ZERO; m + 1];
    let mut owner = vec![0usize; m + 1];
    let mut way = vec![0usize; m + 1];
    let mut minv = vec![Lex::INF; m + 1];
    let mut used = vec![false; m + 1];

    for i in 1..=n {
        owner[0] = i;
        let mut j0 = 0usize;
        minv.fill(Lex::INF);
        used.fill(false);
        loop {
            used[j0] = true;
            let i0 = owner[j0];
            let mut delta = Lex::INF;
            let mut j1 = 0usize;
            for j in 1..=m {
                if used[j] {
                    continue;
                }
                let cur = entry(i0 - 1, j - 1) - u[i0] - v[j];
                if cur < minv[j] {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if minv[j] < delta {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for j in 0..=m {
                if used[j] {
                    u[owner[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if owner[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            owner[j0] = owner[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }

    let mut col_of_row = vec![usize::MAX; n];
    for j in 1..=m {
        if owner[j] != 0 {
            col_of_row[owner[j] - 1] = j - 1;
        }
    }
    col_of_row
}

/// Maximum-cardinality, minimum-cost matching that avoids forbidden entries.
pub fn solve(m: &CostMatrix) -> Assignment {
    let (rows, cols) = (m.n_rows, m.n_cols);
    let lex = |i: usize, j: usize| match m.get(i, j) {
        Some(cost) => Lex { penalty: 0, cost },
        None => Lex { penalty: 1, cost: 0.0 },
    };

    let mut col_of_row: Vec<Option<usize>> = vec![None; rows];
    if rows > 0 && cols > 0 {
        if rows <= cols {
            for (i, j) in hungarian(rows, cols, lex).into_iter().enumerate() {
                col_of_row[i] = Some(j);
            }
        } else {
            for (j, i) in hungarian(cols, rows, |a, b| lex(b, a)).into_iter().enumerate() {
                col_of_row[i] = Some(j);
            }
        }
    }

    let mut out = Assignment::default();
    let mut col_used = vec![false; cols];
    for (i, slot) in col_of_row.iter().enumerate() {
        match slot.and_then(|j| m.get(i, j).map(|c| (j, c))) {
            Some((j, c)) => {
                out.pairs.push((i, j));
                out.total_cost += c;
                col_used[j] = true;
            }
            None => out.unmatched_rows.push(i),
        }
    }
    out.unmatched_cols = (0..cols).filter(|&j| !col_used[j]).collect();
    out
}
