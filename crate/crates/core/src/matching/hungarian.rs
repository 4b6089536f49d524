//! Rectangular linear assignment with forbidden pairs.
//!
//! Infeasible entries never enter an assignment. The objective is
//! lexicographic: first the number of feasible pairs is maximized, then the
//! total cost of those pairs is minimized. Costs are carried as an exact
//! ordered triple instead of a large finite sentinel.

use std::cmp::Ordering;
use std::ops::{Add, AddAssign, Sub, SubAssign};

use crate::matching::CostMatrix;

/// Optimal assignment between the rows and columns of a cost matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Assignment {
    row_to_col: Vec<Option<usize>>,
    col_to_row: Vec<Option<usize>>,
}

impl Assignment {
    pub fn row_to_col(&self) -> &[Option<usize>] {
        &self.row_to_col
    }

    pub fn col_to_row(&self) -> &[Option<usize>] {
        &self.col_to_row
    }

    /// Assigned `(row, col)` pairs in row order.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.row_to_col
            .iter()
            .enumerate()
            .filter_map(|(r, c)| c.map(|c| (r, c)))
    }

    pub fn len(&self) -> usize {
        self.pairs().count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Sum of the assigned costs, accumulated in row order.
    pub fn total_cost(&self, costs: &CostMatrix) -> f64 {
        self.pairs()
            .map(|(r, c)| costs.get(r, c).expect("assigned pairs are feasible"))
            .sum()
    }
}

/// Solves the assignment problem on `costs`.
pub fn hungarian(costs: &CostMatrix) -> Assignment {
    solve_tiered(costs, &[], &[])
}

/// Like [`hungarian`], with an extra lexicographic tier between cardinality
/// and cost: an assigned pair `(r, c)` is charged `row_tier[r] + col_tier[c]`
/// surplus units, and solutions with fewer surplus units win before cost is
/// compared. Missing tier entries count as zero.
pub(crate) fn solve_tiered(costs: &CostMatrix, row_tier: &[u32], col_tier: &[u32]) -> Assignment {
    let (rows, cols) = (costs.rows(), costs.cols());
    let mut assignment = Assignment {
        row_to_col: vec![None; rows],
        col_to_row: vec![None; cols],
    };
    for (comp_rows, comp_cols) in feasible_components(costs) {
        let n = comp_rows.len().max(comp_cols.len());
        let mut sub = vec![LexCost::ZERO; n * n];
        for (i, &r) in comp_rows.iter().enumerate() {
            for (j, &c) in comp_cols.iter().enumerate() {
                sub[i * n + j] = match costs.get(r, c) {
                    Some(cost) => LexCost {
                        infeasible: 0,
                        surplus: (tier(row_tier, r) + tier(col_tier, c)) as i64,
                        cost,
                    },
                    None => LexCost::INFEASIBLE,
                };
            }
        }
        for (i, j) in solve_square(n, &sub).into_iter().enumerate() {
            if i >= comp_rows.len() || j >= comp_cols.len() {
                continue;
            }
            let (r, c) = (comp_rows[i], comp_cols[j]);
            if costs.get(r, c).is_some() {
                assignment.row_to_col[r] = Some(c);
                assignment.col_to_row[c] = Some(r);
            }
        }
    }
    assignment
}

fn tier(t: &[u32], i: usize) -> u32 {
    t.get(i).copied().unwrap_or(0)
}

/// Connected components of the bipartite feasibility graph that contain at
/// least one row and one column, ordered by their smallest row.
fn feasible_components(costs: &CostMatrix) -> Vec<(Vec<usize>, Vec<usize>)> {
    let (rows, cols) = (costs.rows(), costs.cols());
    let mut parent: Vec<usize> = (0..rows + cols).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let mut has_edge = vec![false; rows + cols];
    for r in 0..rows {
        for c in 0..cols {
            if costs.get(r, c).is_some() {
                has_edge[r] = true;
                has_edge[rows + c] = true;
                let (a, b) = (find(&mut parent, r), find(&mut parent, rows + c));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let mut slot = vec![usize::MAX; rows + cols];
    let mut comps: Vec<(Vec<usize>, Vec<usize>)> = Vec::new();
    for node in (0..rows + cols).filter(|&n| has_edge[n]) {
        let root = find(&mut parent, node);
        if slot[root] == usize::MAX {
            slot[root] = comps.len();
            comps.push((Vec::new(), Vec::new()));
        }
        let comp = &mut comps[slot[root]];
        if node < rows {
            comp.0.push(node);
        } else {
            comp.1.push(node - rows);
        }
    }
    comps
}

/// Lexicographically ordered cost: (infeasible count, surplus, cost).
#[derive(Debug, Clone, Copy)]
struct LexCost {
    infeasible: i64,
    surplus: i64,
    cost: f64,
}

impl LexCost {
    const ZERO: LexCost = LexCost {
        infeasible: 0,
        surplus: 0,
        cost: 0.0,
    };
    const INFEASIBLE: LexCost = LexCost {
        infeasible: 1,
        surplus: 0,
        cost: 0.0,
    };
    const INF: LexCost = LexCost {
        infeasible: i64::MAX / 4,
        surplus: 0,
        cost: 0.0,
    };
}

impl PartialEq for LexCost {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for LexCost {}

impl PartialOrd for LexCost {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for LexCost {
    fn cmp(&self, other: &Self) -> Ordering {
        self.infeasible
            .cmp(&other.infeasible)
            .then(self.surplus.cmp(&other.surplus))
            .then(self.cost.total_cmp(&other.cost))
    }
}

impl Add for LexCost {
    type Output = LexCost;
    fn add(self, o: LexCost) -> LexCost {
        LexCost {
            infeasible: self.infeasible + o.infeasible,
            surplus: self.surplus + o.surplus,
            cost: self.cost + o.cost,
        }
    }
}

impl Sub for LexCost {
    type Output = LexCost;
    fn sub(self, o: LexCost) -> LexCost {
        LexCost {
            infeasible: self.infeasible - o.infeasible,
            surplus: self.surplus - o.surplus,
            cost: self.cost - o.cost,
        }
    }
}

impl AddAssign for LexCost {
    fn add_assign(&mut self, o: LexCost) {
        *self = *self + o;
    }
}

impl SubAssign for LexCost {
    fn sub_assign(&mut self, o: LexCost) {
        *self = *self - o;
    }
}

/// Shortest-augmenting-path Hungarian method on a dense `n × n` matrix.
/// Returns the column assigned to each row.
fn solve_square(n: usize, a: &[LexCost]) -> Vec<usize> {
    // 1-based potentials and matching, index 0 is the virtual start column
    let mut u = vec![LexCost::ZERO; n + 1];
    let mut v = vec![LexCost::ZERO; n + 1];
    let mut p = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    for i in 1..=n {
        p[0] = i;
        let mut j0 = 0;
        let mut minv = vec![LexCost::INF; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = p[j0];
            let mut delta = LexCost::INF;
            let mut j1 = 0;
            for j in 1..=n {
                if used[j] {
                    continue;
                }
                let cur = a[(i0 - 1) * n + (j - 1)] - u[i0] - v[j];
                if cur < minv[j] {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if minv[j] < delta {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if p[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut row_to_col = vec![0; n];
    for j in 1..=n {
        if p[j] > 0 {
            row_to_col[p[j] - 1] = j - 1;
        }
    }
    row_to_col
}
