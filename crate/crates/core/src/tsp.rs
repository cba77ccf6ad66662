//! Shortest Hamiltonian path machinery shared by the planar sweep and the
//! spherical path planners: exact Held–Karp dynamic programming, the greedy
//! nearest-neighbor chain, and 2-opt / Or-opt local search for open paths
//! with a fixed start.
//!
//! Ties are always broken toward the lowest index so every routine is
//! deterministic.

use crate::error::{Error, Result};

/// Largest instance the exact solvers accept. The DP table for 22 targets
/// holds 2²² × 22 costs (~740 MB of `f64`).
pub const MAX_EXACT_TARGETS: usize = 22;

/// Dense square matrix of pairwise costs.
#[derive(Debug, Clone, PartialEq)]
pub struct SquareMatrix {
    n: usize,
    data: Vec<f64>,
}

impl SquareMatrix {
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        Self { n, data }
    }

    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidInput("matrix rows must all have length n".into()));
        }
        Ok(Self {
            n,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: f64) {
        self.data[i * self.n + j] = value;
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn max_entry(&self) -> f64 {
        self.data.iter().copied().fold(0.0, f64::max)
    }
}

/// An open-path instance: `n` targets, the cost from the fixed start to each
/// target, and target-to-target costs. Paths do not return to the start.
#[derive(Debug, Clone)]
pub struct OpenPath {
    start_cost: Vec<f64>,
    matrix: SquareMatrix,
    symmetric: bool,
}

impl OpenPath {
    pub fn new(start_cost: Vec<f64>, matrix: SquareMatrix) -> Result<Self> {
        if start_cost.len() != matrix.len() {
            return Err(Error::InvalidInput(format!(
                "{} start costs for {} targets",
                start_cost.len(),
                matrix.len()
            )));
        }
        let symmetric = matrix.is_symmetric();
        Ok(Self {
            start_cost,
            matrix,
            symmetric,
        })
    }

    pub fn len(&self) -> usize {
        self.start_cost.len()
    }

    pub fn is_empty(&self) -> bool {
        self.start_cost.is_empty()
    }

    pub fn start_cost(&self, j: usize) -> f64 {
        self.start_cost[j]
    }

    pub fn cost(&self, i: usize, j: usize) -> f64 {
        self.matrix.get(i, j)
    }

    /// Per-leg costs of `order`, the first leg leaving the start.
    pub fn legs(&self, order: &[usize]) -> Vec<f64> {
        let mut legs = Vec::with_capacity(order.len());
        if let Some(&first) = order.first() {
            legs.push(self.start_cost[first]);
        }
        legs.extend(order.windows(2).map(|w| self.matrix.get(w[0], w[1])));
        legs
    }

    pub fn length(&self, order: &[usize]) -> f64 {
        self.legs(order).iter().sum()
    }

    /// Exact shortest open path by Held–Karp over target subsets.
    pub fn held_karp(&self) -> Result<(Vec<usize>, f64)> {
        held_karp_core(self.len(), &self.start_cost, &self.matrix, None)
    }

    /// Greedy chain: from the current position always visit the nearest
    /// unvisited target, lowest index on ties.
    pub fn nearest_neighbor(&self) -> Vec<usize> {
        let n = self.len();
        let mut visited = vec![false; n];
        let mut order = Vec::with_capacity(n);
        let mut costs: &[f64] = &self.start_cost;
        for _ in 0..n {
            let mut best: Option<(usize, f64)> = None;
            for (j, &c) in costs.iter().enumerate() {
                if visited[j] {
                    continue;
                }
                if best.is_none_or(|(_, b)| c < b) {
                    best = Some((j, c));
                }
            }
            let (j, _) = best.expect("an unvisited target remains");
            visited[j] = true;
            order.push(j);
            costs = self.matrix.row(j);
        }
        order
    }

    /// Runs 2-opt and Or-opt moves (first improvement) until neither finds
    /// a strictly shorter path.
    pub fn local_search(&self, mut order: Vec<usize>) -> Vec<usize> {
        loop {
            let a = self.two_opt_pass(&mut order);
            let b = self.or_opt_pass(&mut order);
            if !a && !b {
                return order;
            }
        }
    }

    /// 2-opt only, to a local optimum.
    pub fn two_opt(&self, mut order: Vec<usize>) -> Vec<usize> {
        while self.two_opt_pass(&mut order) {}
        order
    }

    // Cost between two path slots where `None` stands for the fixed start.
    #[inline]
    fn link(&self, from: Option<usize>, to: usize) -> f64 {
        match from {
            None => self.start_cost[to],
            Some(i) => self.matrix.get(i, to),
        }
    }

    fn two_opt_pass(&self, order: &mut [usize]) -> bool {
        let n = order.len();
        let mut improved = false;
        for i in 0..n {
            for j in (i + 1)..n {
                let prev = if i == 0 { None } else { Some(order[i - 1]) };
                let before_head = self.link(prev, order[i]);
                let after_head = self.link(prev, order[j]);
                let (before_tail, after_tail) = if j + 1 < n {
                    (
                        self.matrix.get(order[j], order[j + 1]),
                        self.matrix.get(order[i], order[j + 1]),
                    )
                } else {
                    (0.0, 0.0)
                };
                // Reversal also flips the inner legs (nonzero only for
                // asymmetric costs).
                let inner = self.inner_reversal_delta(&order[i..=j]);
                let delta = after_head + after_tail + inner - before_head - before_tail;
                if delta < -1e-12 {
                    order[i..=j].reverse();
                    improved = true;
                }
            }
        }
        improved
    }

    fn inner_reversal_delta(&self, segment: &[usize]) -> f64 {
        if self.symmetric {
            return 0.0;
        }
        let forward: f64 = segment.windows(2).map(|w| self.matrix.get(w[0], w[1])).sum();
        let backward: f64 = segment.windows(2).map(|w| self.matrix.get(w[1], w[0])).sum();
        backward - forward
    }

    fn or_opt_pass(&self, order: &mut Vec<usize>) -> bool {
        let n = order.len();
        if n < 3 {
            return false;
        }
        let mut improved = false;
        for seg_len in 1..=3usize.min(n - 1) {
            let mut i = 0;
            while i + seg_len <= order.len() {
                if let Some(new_order) = self.try_move_segment(order, i, seg_len) {
                    *order = new_order;
                    improved = true;
                }
                i += 1;
            }
        }
        improved
    }

    /// Tries relocating `order[i..i+len]` (either orientation) to every other
    /// gap; applies the best strictly improving relocation.
    fn try_move_segment(&self, order: &[usize], i: usize, len: usize) -> Option<Vec<usize>> {
        let n = order.len();
        let first = order[i];
        let last = order[i + len - 1];
        let prev = if i == 0 { None } else { Some(order[i - 1]) };
        let next = order.get(i + len).copied();
        let removal_gain = self.link(prev, first)
            + next.map_or(0.0, |nx| self.matrix.get(last, nx))
            - next.map_or(0.0, |nx| self.link(prev, nx));

        let rest: Vec<usize> = order[..i].iter().chain(&order[i + len..]).copied().collect();
        let seg: Vec<usize> = order[i..i + len].to_vec();
        let seg_forward: f64 = seg.windows(2).map(|w| self.matrix.get(w[0], w[1])).sum();
        let seg_backward: f64 = seg.windows(2).map(|w| self.matrix.get(w[1], w[0])).sum();

        let mut best: Option<(f64, usize, bool)> = None;
        for k in 0..=rest.len() {
            if k == i {
                continue; // original position
            }
            let a = if k == 0 { None } else { Some(rest[k - 1]) };
            let b = rest.get(k).copied();
            let base = b.map_or(0.0, |b| self.link(a, b));
            for reversed in [false, true] {
                let (head, tail, inner) = if reversed {
                    (last, first, seg_backward - seg_forward)
                } else {
                    (first, last, 0.0)
                };
                let insert = self.link(a, head) + b.map_or(0.0, |b| self.matrix.get(tail, b)) - base;
                let delta = insert + inner - removal_gain;
                if delta < -1e-12 && best.is_none_or(|(d, _, _)| delta < d) {
                    best = Some((delta, k, reversed));
                }
            }
        }
        let (_, k, reversed) = best?;
        let mut out = Vec::with_capacity(n);
        out.extend_from_slice(&rest[..k]);
        if reversed {
            out.extend(seg.iter().rev());
        } else {
            out.extend_from_slice(&seg);
        }
        out.extend_from_slice(&rest[k..]);
        Some(out)
    }
}

/// Exact minimum closed tour through every node of `matrix`, starting and
/// ending at node 0. Returns the node sequence beginning with 0 (the closing
/// leg back to 0 is implied) and the tour length.
pub fn held_karp_tour(matrix: &SquareMatrix) -> Result<(Vec<usize>, f64)> {
    let n = matrix.len();
    if n == 0 {
        return Ok((Vec::new(), 0.0));
    }
    if n == 1 {
        return Ok((vec![0], 0.0));
    }
    let inner = n - 1;
    let start_cost: Vec<f64> = (1..n).map(|j| matrix.get(0, j)).collect();
    let sub = SquareMatrix::from_fn(inner, |i, j| matrix.get(i + 1, j + 1));
    let end_cost: Vec<f64> = (1..n).map(|j| matrix.get(j, 0)).collect();
    let (order, total) = held_karp_core(inner, &start_cost, &sub, Some(&end_cost))?;
    let mut tour = Vec::with_capacity(n);
    tour.push(0);
    tour.extend(order.into_iter().map(|j| j + 1));
    Ok((tour, total))
}

fn held_karp_core(
    n: usize,
    start_cost: &[f64],
    matrix: &SquareMatrix,
    end_cost: Option<&[f64]>,
) -> Result<(Vec<usize>, f64)> {
    if n > MAX_EXACT_TARGETS {
        return Err(Error::InstanceTooLarge {
            n,
            max: MAX_EXACT_TARGETS,
        });
    }
    if n == 0 {
        return Ok((Vec::new(), 0.0));
    }
    let full = (1usize << n) - 1;
    let mut cost = vec![f64::INFINITY; (full + 1) * n];
    let mut parent = vec![u8::MAX; (full + 1) * n];
    for j in 0..n {
        cost[(1 << j) * n + j] = start_cost[j];
    }
    for mask in 1..=full {
        for j in 0..n {
            if mask & (1 << j) == 0 {
                continue;
            }
            let prev_mask = mask ^ (1 << j);
            if prev_mask == 0 {
                continue;
            }
            let mut best = f64::INFINITY;
            let mut best_k = u8::MAX;
            let row = prev_mask * n;
            for k in 0..n {
                if prev_mask & (1 << k) == 0 {
                    continue;
                }
                let c = cost[row + k] + matrix.get(k, j);
                if c < best {
                    best = c;
                    best_k = k as u8;
                }
            }
            cost[mask * n + j] = best;
            parent[mask * n + j] = best_k;
        }
    }
    let mut best = f64::INFINITY;
    let mut last = 0;
    for j in 0..n {
        let c = cost[full * n + j] + end_cost.map_or(0.0, |e| e[j]);
        if c < best {
            best = c;
            last = j;
        }
    }
    let mut order = Vec::with_capacity(n);
    let mut mask = full;
    let mut j = last;
    loop {
        order.push(j);
        let p = parent[mask * n + j];
        mask ^= 1 << j;
        if mask == 0 {
            break;
        }
        j = p as usize;
    }
    order.reverse();
    Ok((order, best))
}
