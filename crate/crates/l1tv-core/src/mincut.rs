//! Exact global minimization of the discrete energy by min-cut.
//!
//! The energy is submodular (nonnegative Potts pairwise terms), so it
//! reduces to a minimum s-t cut on the grid graph: one node per cell, a
//! terminal link of capacity `lambda h^2` toward the terminal matching the
//! input's value at that cell, pairwise capacities equal to the stencil
//! weight in both directions, and border costs folded into the sink link.
//! With this construction the cut value equals the energy directly — the
//! constant offset absorbed into the construction is zero — so the reported
//! flow value must equal the recomputed energy exactly.
//!
//! Edges are implicit in the grid layout (no adjacency lists): per offset
//! family two flat residual arrays, indexed by the lower endpoint.
//!
//! The default algorithm is the vision-standard augmenting-path search with
//! search-tree reuse; a push-relabel fallback is available behind a flag.
//! Both produce exact integral max flows. Canonical minimizers are read off
//! the final residual graph by breadth-first search, which also makes the
//! smallest/largest tie-breaking rule independent of solver internals.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use crate::energy::{energy_with, EnergyParams, EnergyReport, EnergyScale};
use crate::error::{Error, Result};
use crate::grid::BinaryMask;
use crate::oracle::{self, OracleResult};
use crate::perimeter::{BorderPolicy, Stencil};
use crate::Exact;

/// Which canonical minimizer to return when ties exist.
///
/// Minimum cuts form a lattice; the smallest minimizer is the intersection
/// of all of them (source-side residual reachability) and the largest is
/// their union.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MinimizerSide {
    #[default]
    Smallest,
    Largest,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FlowAlgo {
    /// Augmenting paths with S/T search-tree reuse.
    #[default]
    TreeReuse,
    /// FIFO push-relabel, run to a genuine flow (not just a preflow).
    PushRelabel,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct SolveOptions {
    pub side: MinimizerSide,
    pub algo: FlowAlgo,
    pub border: BorderPolicy,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct SolveStats {
    pub augmentations: u64,
    pub orphans_processed: u64,
    pub pushes: u64,
    pub relabels: u64,
    pub wall: Option<core::time::Duration>,
}

#[derive(Debug, Clone)]
pub struct SolveResult {
    pub sigma: BinaryMask,
    pub report: EnergyReport,
    /// Max-flow value in exact energy units; equals `report.total`.
    pub flow_value: Exact,
    pub stats: SolveStats,
}

const TREE_FREE: u8 = 0;
const TREE_S: u8 = 1;
const TREE_T: u8 = 2;

const PARENT_NONE: u8 = 0xFF;
const PARENT_TERMINAL: u8 = 0xFE;

/// Residual grid graph with implicit edges.
struct GridFlow {
    w: i64,
    h: i64,
    offsets: Vec<(i64, i64)>,
    /// cap_fwd[k][p]: residual p -> p+o_k (0 if p+o_k off-grid).
    cap_fwd: Vec<Vec<i64>>,
    /// cap_bwd[k][p]: residual p+o_k -> p.
    cap_bwd: Vec<Vec<i64>>,
    /// Signed terminal residual: >0 from source, <0 toward sink.
    tr: Vec<i64>,
    /// Flow absorbed when opposing terminal links cancel at a node.
    base_flow: i128,
    pushed: i128,
}

impl GridFlow {
    fn build(
        omega: &BinaryMask,
        scale: &EnergyScale,
        stencil: &Stencil,
        border: BorderPolicy,
    ) -> Result<Self> {
        let geom = omega.geom();
        let (w, h) = (i64::from(geom.width()), i64::from(geom.height()));
        let n = (w * h) as usize;
        let fid = scale.fidelity_units();
        let k_fams = stencil.offsets().len();

        let offsets: Vec<(i64, i64)> = stencil
            .offsets()
            .iter()
            .map(|&(x, y)| (i64::from(x), i64::from(y)))
            .collect();
        let mut cap_fwd = vec![vec![0i64; n]; k_fams];
        let mut cap_bwd = vec![vec![0i64; n]; k_fams];
        let mut cap_s = vec![0i64; n];
        let mut cap_t = vec![0i64; n];

        let mut cap_budget: i128 = 0;
        for y in 0..h {
            for x in 0..w {
                let p = (y * w + x) as usize;
                if omega.get(x as u32, y as u32) {
                    cap_s[p] = fid;
                } else {
                    cap_t[p] = fid;
                }
                cap_budget += i128::from(fid);
            }
        }
        for (k, &(dx, dy)) in offsets.iter().enumerate() {
            let wu = scale.pair_units()[k];
            for y in 0..h {
                for x in 0..w {
                    let p = (y * w + x) as usize;
                    let (nx, ny) = (x + dx, y + dy);
                    if nx >= 0 && ny >= 0 && nx < w && ny < h {
                        cap_fwd[k][p] = wu;
                        cap_bwd[k][p] = wu;
                        cap_budget += 2 * i128::from(wu);
                    } else if border == BorderPolicy::OutsideBackground {
                        cap_t[p] += wu;
                        cap_budget += i128::from(wu);
                    }
                    if border == BorderPolicy::OutsideBackground {
                        let (px, py) = (x - dx, y - dy);
                        if px < 0 || py < 0 || px >= w || py >= h {
                            cap_t[p] += wu;
                            cap_budget += i128::from(wu);
                        }
                    }
                }
            }
        }
        if cap_budget > i128::from(i64::MAX / 4) {
            return Err(Error::ScaleOverflow);
        }

        let mut tr = vec![0i64; n];
        let mut base_flow: i128 = 0;
        for p in 0..n {
            let absorbed = cap_s[p].min(cap_t[p]);
            base_flow += i128::from(absorbed);
            tr[p] = cap_s[p] - cap_t[p];
        }
        Ok(GridFlow {
            w,
            h,
            offsets,
            cap_fwd,
            cap_bwd,
            tr,
            base_flow,
            pushed: 0,
        })
    }

    #[inline]
    fn n(&self) -> usize {
        (self.w * self.h) as usize
    }

    #[inline]
    fn arc_count(&self) -> u8 {
        (self.offsets.len() * 2) as u8
    }

    /// Neighbor reached by arc `code` (= 2k + dir) from `p`, if on-grid.
    #[inline]
    fn neighbor(&self, p: usize, code: u8) -> Option<usize> {
        let k = (code >> 1) as usize;
        let (mut dx, mut dy) = self.offsets[k];
        if code & 1 == 1 {
            dx = -dx;
            dy = -dy;
        }
        let x = (p as i64 % self.w) + dx;
        let y = (p as i64 / self.w) + dy;
        if x < 0 || y < 0 || x >= self.w || y >= self.h {
            None
        } else {
            Some((y * self.w + x) as usize)
        }
    }

    /// Residual of the arc `p -> neighbor(p, code)`.
    #[inline]
    fn residual_from(&self, p: usize, code: u8) -> i64 {
        let k = (code >> 1) as usize;
        if code & 1 == 0 {
            self.cap_fwd[k][p]
        } else {
            match self.neighbor(p, code) {
                Some(q) => self.cap_bwd[k][q],
                None => 0,
            }
        }
    }

    /// Residual of the arc `neighbor(p, code) -> p`.
    #[inline]
    fn residual_to(&self, p: usize, code: u8) -> i64 {
        let k = (code >> 1) as usize;
        if code & 1 == 0 {
            self.cap_bwd[k][p]
        } else {
            match self.neighbor(p, code) {
                Some(q) => self.cap_fwd[k][q],
                None => 0,
            }
        }
    }

    /// Pushes `f` along `p -> neighbor(p, code)`.
    #[inline]
    fn push_from(&mut self, p: usize, code: u8, f: i64) {
        let k = (code >> 1) as usize;
        if code & 1 == 0 {
            self.cap_fwd[k][p] -= f;
            self.cap_bwd[k][p] += f;
        } else {
            let q = self.neighbor(p, code).expect("push along off-grid arc");
            self.cap_bwd[k][q] -= f;
            self.cap_fwd[k][q] += f;
        }
    }

    /// Pushes `f` along `neighbor(p, code) -> p`.
    #[inline]
    fn push_to(&mut self, p: usize, code: u8, f: i64) {
        let q = self.neighbor(p, code).expect("push along off-grid arc");
        self.push_from(q, opposite(code), f);
    }

    fn flow_units(&self) -> i128 {
        self.base_flow + self.pushed
    }

    /// Smallest source side: cells residually reachable from the source.
    fn source_side(&self) -> Vec<bool> {
        let n = self.n();
        let mut seen = vec![false; n];
        let mut queue: VecDeque<usize> = VecDeque::new();
        for (p, &t) in self.tr.iter().enumerate() {
            if t > 0 {
                seen[p] = true;
                queue.push_back(p);
            }
        }
        while let Some(p) = queue.pop_front() {
            for code in 0..self.arc_count() {
                if self.residual_from(p, code) > 0 {
                    if let Some(q) = self.neighbor(p, code) {
                        if !seen[q] {
                            seen[q] = true;
                            queue.push_back(q);
                        }
                    }
                }
            }
        }
        // Max-flow certificate: no residual path from source to sink.
        debug_assert!(
            seen.iter().zip(&self.tr).all(|(&s, &t)| !(s && t < 0)),
            "residual augmenting path remains"
        );
        seen
    }

    /// Cells with a residual path to the sink; their complement is the
    /// largest source side.
    fn sink_side(&self) -> Vec<bool> {
        let n = self.n();
        let mut seen = vec![false; n];
        let mut queue: VecDeque<usize> = VecDeque::new();
        for (p, &t) in self.tr.iter().enumerate() {
            if t < 0 {
                seen[p] = true;
                queue.push_back(p);
            }
        }
        while let Some(p) = queue.pop_front() {
            for code in 0..self.arc_count() {
                if self.residual_to(p, code) > 0 {
                    if let Some(q) = self.neighbor(p, code) {
                        if !seen[q] {
                            seen[q] = true;
                            queue.push_back(q);
                        }
                    }
                }
            }
        }
        debug_assert!(
            seen.iter().zip(&self.tr).all(|(&s, &t)| !(s && t > 0)),
            "residual augmenting path remains"
        );
        seen
    }
}

#[inline]
fn opposite(code: u8) -> u8 {
    code ^ 1
}

/// Augmenting-path max flow with S/T search-tree reuse.
struct TreeSolver {
    g: GridFlow,
    tree: Vec<u8>,
    /// Arc code from a node to its parent; PARENT_TERMINAL at tree roots.
    parent: Vec<u8>,
    dist: Vec<u32>,
    ts: Vec<u32>,
    time: u32,
    active: VecDeque<u32>,
    orphans: VecDeque<u32>,
    stats: SolveStats,
}

impl TreeSolver {
    fn new(g: GridFlow) -> Self {
        let n = g.n();
        let mut s = TreeSolver {
            g,
            tree: vec![TREE_FREE; n],
            parent: vec![PARENT_NONE; n],
            dist: vec![0; n],
            ts: vec![0; n],
            time: 0,
            active: VecDeque::new(),
            orphans: VecDeque::new(),
            stats: SolveStats::default(),
        };
        for p in 0..n {
            if s.g.tr[p] > 0 {
                s.tree[p] = TREE_S;
                s.parent[p] = PARENT_TERMINAL;
                s.dist[p] = 1;
                s.active.push_back(p as u32);
            } else if s.g.tr[p] < 0 {
                s.tree[p] = TREE_T;
                s.parent[p] = PARENT_TERMINAL;
                s.dist[p] = 1;
                s.active.push_back(p as u32);
            }
        }
        s
    }

    fn run(&mut self) {
        let arcs = self.g.arc_count();
        'grow: while let Some(p32) = self.active.pop_front() {
            let p = p32 as usize;
            let side = self.tree[p];
            if side == TREE_FREE {
                continue;
            }
            let mut code = 0u8;
            while code < arcs {
                let res = if side == TREE_S {
                    self.g.residual_from(p, code)
                } else {
                    self.g.residual_to(p, code)
                };
                if res > 0 {
                    if let Some(q) = self.g.neighbor(p, code) {
                        match self.tree[q] {
                            TREE_FREE => {
                                self.tree[q] = side;
                                self.parent[q] = opposite(code);
                                self.dist[q] = self.dist[p] + 1;
                                self.ts[q] = self.ts[p];
                                self.active.push_back(q as u32);
                            }
                            t if t != side => {
                                // Bridge found; orient it S -> T.
                                let (s_node, bridge) = if side == TREE_S {
                                    (p, code)
                                } else {
                                    (q, opposite(code))
                                };
                                self.augment(s_node, bridge);
                                self.time += 1;
                                self.adopt();
                                if self.tree[p] != side {
                                    continue 'grow;
                                }
                                code = 0;
                                continue;
                            }
                            _ => {}
                        }
                    }
                }
                code += 1;
            }
        }
    }

    /// Pushes the bottleneck along root(S) -> ... -> s_node -> q -> ... ->
    /// root(T), where `bridge` is the arc code from `s_node` into the T
    /// tree.
    fn augment(&mut self, s_node: usize, bridge: u8) {
        let t_node = self.g.neighbor(s_node, bridge).expect("bridge endpoint");
        // Bottleneck.
        let mut bn = self.g.residual_from(s_node, bridge);
        let mut p = s_node;
        while self.parent[p] != PARENT_TERMINAL {
            let c = self.parent[p];
            bn = bn.min(self.g.residual_to(p, c));
            p = self.g.neighbor(p, c).expect("tree arc");
        }
        bn = bn.min(self.g.tr[p]);
        let s_root = p;
        let mut p = t_node;
        while self.parent[p] != PARENT_TERMINAL {
            let c = self.parent[p];
            bn = bn.min(self.g.residual_from(p, c));
            p = self.g.neighbor(p, c).expect("tree arc");
        }
        bn = bn.min(-self.g.tr[p]);
        let t_root = p;
        debug_assert!(bn > 0);

        // Push and collect orphans at saturated tree arcs.
        self.g.push_from(s_node, bridge, bn);
        let mut p = s_node;
        while self.parent[p] != PARENT_TERMINAL {
            let c = self.parent[p];
            self.g.push_to(p, c, bn);
            let next = self.g.neighbor(p, c).expect("tree arc");
            if self.g.residual_to(p, c) == 0 {
                self.parent[p] = PARENT_NONE;
                self.orphans.push_back(p as u32);
            }
            p = next;
        }
        self.g.tr[s_root] -= bn;
        if self.g.tr[s_root] == 0 {
            self.parent[s_root] = PARENT_NONE;
            self.orphans.push_back(s_root as u32);
        }
        let mut p = t_node;
        while self.parent[p] != PARENT_TERMINAL {
            let c = self.parent[p];
            self.g.push_from(p, c, bn);
            let next = self.g.neighbor(p, c).expect("tree arc");
            if self.g.residual_from(p, c) == 0 {
                self.parent[p] = PARENT_NONE;
                self.orphans.push_back(p as u32);
            }
            p = next;
        }
        self.g.tr[t_root] += bn;
        if self.g.tr[t_root] == 0 {
            self.parent[t_root] = PARENT_NONE;
            self.orphans.push_back(t_root as u32);
        }

        self.g.pushed += i128::from(bn);
        self.stats.augmentations += 1;
    }

    /// Distance of `q` to its terminal if its parent chain is rooted, with
    /// timestamp memoization for the current round.
    fn origin_dist(&mut self, q: usize) -> Option<u32> {
        let mut p = q;
        let mut steps = 0u32;
        loop {
            if self.ts[p] == self.time {
                break;
            }
            match self.parent[p] {
                PARENT_NONE => return None,
                PARENT_TERMINAL => break,
                c => {
                    steps += 1;
                    p = self.g.neighbor(p, c).expect("tree arc");
                }
            }
        }
        let anchor = if self.ts[p] == self.time {
            self.dist[p]
        } else {
            1
        };
        if self.ts[p] != self.time {
            self.ts[p] = self.time;
            self.dist[p] = 1;
        }
        // Re-walk, stamping distances.
        let total = anchor + steps;
        let mut p = q;
        let mut d = total;
        while self.ts[p] != self.time {
            self.ts[p] = self.time;
            self.dist[p] = d;
            d -= 1;
            match self.parent[p] {
                PARENT_TERMINAL | PARENT_NONE => break,
                c => p = self.g.neighbor(p, c).expect("tree arc"),
            }
        }
        Some(total)
    }

    fn adopt(&mut self) {
        let arcs = self.g.arc_count();
        while let Some(o32) = self.orphans.pop_front() {
            let o = o32 as usize;
            self.stats.orphans_processed += 1;
            let side = self.tree[o];
            debug_assert_ne!(side, TREE_FREE);
            let mut best: Option<(u8, u32)> = None;
            for code in 0..arcs {
                let Some(q) = self.g.neighbor(o, code) else {
                    continue;
                };
                if self.tree[q] != side {
                    continue;
                }
                let res = if side == TREE_S {
                    self.g.residual_to(o, code)
                } else {
                    self.g.residual_from(o, code)
                };
                if res == 0 {
                    continue;
                }
                if let Some(d) = self.origin_dist(q) {
                    if best.is_none_or(|(_, bd)| d < bd) {
                        best = Some((code, d));
                    }
                }
            }
            match best {
                Some((code, d)) => {
                    self.parent[o] = code;
                    self.dist[o] = d + 1;
                    self.ts[o] = self.time;
                }
                None => {
                    // o leaves its tree; children become orphans and
                    // neighbors that might reconnect become active.
                    for code in 0..arcs {
                        let Some(q) = self.g.neighbor(o, code) else {
                            continue;
                        };
                        if self.tree[q] != side {
                            continue;
                        }
                        let res = if side == TREE_S {
                            self.g.residual_to(o, code)
                        } else {
                            self.g.residual_from(o, code)
                        };
                        if res > 0 {
                            self.active.push_back(q as u32);
                        }
                        if self.parent[q] < PARENT_TERMINAL
                            && self.g.neighbor(q, self.parent[q]) == Some(o)
                        {
                            self.parent[q] = PARENT_NONE;
                            self.orphans.push_back(q as u32);
                        }
                    }
                    self.tree[o] = TREE_FREE;
                    self.parent[o] = PARENT_NONE;
                }
            }
        }
    }
}

/// Single-phase FIFO push-relabel run to completion, so the final arc state
/// is a genuine max flow and residual BFS applies unchanged.
struct PushRelabelSolver {
    g: GridFlow,
    excess: Vec<i64>,
    height: Vec<u32>,
    /// Residual of the return arc p -> source.
    back_to_s: Vec<i64>,
    stats: SolveStats,
}

impl PushRelabelSolver {
    fn new(mut g: GridFlow) -> Self {
        let n = g.n();
        let mut excess = vec![0i64; n];
        let mut back_to_s = vec![0i64; n];
        for p in 0..n {
            if g.tr[p] > 0 {
                excess[p] = g.tr[p];
                back_to_s[p] = g.tr[p];
                g.tr[p] = 0;
            }
        }
        // Exact residual distance to the sink as the initial labeling;
        // nodes that cannot reach the sink start at the return height.
        let height_s = (n as u32) + 2;
        let mut height = vec![height_s + 1; n];
        let mut queue: VecDeque<usize> = VecDeque::new();
        for (p, &t) in g.tr.iter().enumerate() {
            if t < 0 {
                height[p] = 1;
                queue.push_back(p);
            }
        }
        while let Some(p) = queue.pop_front() {
            for code in 0..g.arc_count() {
                if g.residual_to(p, code) > 0 {
                    if let Some(q) = g.neighbor(p, code) {
                        if height[q] == height_s + 1 {
                            height[q] = height[p] + 1;
                            queue.push_back(q);
                        }
                    }
                }
            }
        }
        PushRelabelSolver {
            g,
            excess,
            height,
            back_to_s,
            stats: SolveStats::default(),
        }
    }

    fn run(&mut self) {
        let n = self.g.n();
        let height_s = (n as u32) + 2;
        let arcs = self.g.arc_count();
        // Occupancy per level for the gap heuristic; heights can exceed the
        // return level transiently, clamp the accounting there.
        let levels = (height_s + 2) as usize;
        let mut count = vec![0u32; levels + 1];
        for &h in &self.height {
            count[(h as usize).min(levels)] += 1;
        }
        let mut queue: VecDeque<u32> = (0..n)
            .filter(|&p| self.excess[p] > 0)
            .map(|p| p as u32)
            .collect();
        while let Some(p32) = queue.pop_front() {
            let p = p32 as usize;
            while self.excess[p] > 0 {
                let mut lowest: Option<u32> = None;
                // Sink link: height 0.
                if self.g.tr[p] < 0 {
                    if self.height[p] == 1 {
                        let f = self.excess[p].min(-self.g.tr[p]);
                        self.g.tr[p] += f;
                        self.excess[p] -= f;
                        self.g.pushed += i128::from(f);
                        self.stats.pushes += 1;
                        continue;
                    }
                    lowest = Some(1);
                }
                let mut moved = false;
                for code in 0..arcs {
                    let res = self.g.residual_from(p, code);
                    if res == 0 {
                        continue;
                    }
                    let Some(q) = self.g.neighbor(p, code) else {
                        continue;
                    };
                    if self.height[p] == self.height[q] + 1 {
                        let f = self.excess[p].min(res);
                        self.g.push_from(p, code, f);
                        self.excess[p] -= f;
                        if self.excess[q] == 0 {
                            queue.push_back(q as u32);
                        }
                        self.excess[q] += f;
                        self.stats.pushes += 1;
                        moved = true;
                        break;
                    }
                    let cand = self.height[q] + 1;
                    if lowest.is_none_or(|l| cand < l) {
                        lowest = Some(cand);
                    }
                }
                if moved {
                    continue;
                }
                // Return link toward the source: one above the source level.
                if self.back_to_s[p] > 0 {
                    if self.height[p] == height_s + 1 {
                        let f = self.excess[p].min(self.back_to_s[p]);
                        self.back_to_s[p] -= f;
                        self.g.tr[p] += f;
                        self.excess[p] -= f;
                        self.stats.pushes += 1;
                        continue;
                    }
                    let cand = height_s + 1;
                    if lowest.is_none_or(|l| cand < l) {
                        lowest = Some(cand);
                    }
                }
                match lowest {
                    Some(hn) => {
                        let old = self.height[p] as usize;
                        count[old.min(levels)] -= 1;
                        count[(hn as usize).min(levels)] += 1;
                        self.height[p] = hn;
                        self.stats.relabels += 1;
                        // Gap: if the vacated level below the sink-reachable
                        // ceiling emptied, nothing above it can reach the
                        // sink anymore; lift that whole band to the return
                        // level in one step.
                        let ceiling = n as u32 + 1;
                        if (old as u32) < ceiling && count[old] == 0 {
                            for q in 0..n {
                                let h = self.height[q];
                                if h > old as u32 && h <= ceiling {
                                    count[(h as usize).min(levels)] -= 1;
                                    count[(height_s + 1) as usize] += 1;
                                    self.height[q] = height_s + 1;
                                    if self.excess[q] > 0 && q != p {
                                        queue.push_back(q as u32);
                                    }
                                }
                            }
                        }
                    }
                    None => break, // isolated excess cannot happen, but stay safe
                }
            }
        }
    }
}

/// Computes an exact global minimizer of the discrete energy.
///
/// Among the possibly many minimizers, returns the canonical one selected
/// by `options.side`; the default is the smallest (intersection of all
/// minimizers).
pub fn minimize_with(
    omega: &BinaryMask,
    params: &EnergyParams,
    stencil: &Stencil,
    options: &SolveOptions,
) -> Result<SolveResult> {
    #[cfg(feature = "std")]
    let start = std::time::Instant::now();

    let geom = omega.geom();
    let scale = EnergyScale::build(stencil, params, geom.spacing())?;
    let graph = GridFlow::build(omega, &scale, stencil, options.border)?;

    let (graph, stats) = match options.algo {
        FlowAlgo::TreeReuse => {
            let mut solver = TreeSolver::new(graph);
            solver.run();
            (solver.g, solver.stats)
        }
        FlowAlgo::PushRelabel => {
            let mut solver = PushRelabelSolver::new(graph);
            solver.run();
            (solver.g, solver.stats)
        }
    };

    let side = match options.side {
        MinimizerSide::Smallest => graph.source_side(),
        MinimizerSide::Largest => {
            let t = graph.sink_side();
            t.iter().map(|&b| !b).collect()
        }
    };
    let w = geom.width();
    let sigma = BinaryMask::from_fn(geom, |x, y| side[(y * w + x) as usize]);
    let flow_value = scale.to_exact(graph.flow_units());
    let report = energy_with(&sigma, omega, params, stencil, options.border)?;
    debug_assert_eq!(report.total, flow_value);

    #[cfg(feature = "std")]
    let stats = SolveStats {
        wall: Some(start.elapsed()),
        ..stats
    };
    Ok(SolveResult {
        sigma,
        report,
        flow_value,
        stats,
    })
}

/// [`minimize_with`] under default options (tree-reuse algorithm, smallest
/// minimizer, outside-is-background border convention).
pub fn minimize(
    omega: &BinaryMask,
    params: &EnergyParams,
    stencil: &Stencil,
) -> Result<SolveResult> {
    minimize_with(omega, params, stencil, &SolveOptions::default())
}

/// Outcome of cross-checking the solver against exhaustive enumeration.
#[derive(Debug, Clone)]
pub struct OptimalityProof {
    pub solver: SolveResult,
    pub oracle: OracleResult,
    /// Exact equality of solver energy and enumerated minimum.
    pub energies_match: bool,
    /// The canonical smallest minimizer appears in the enumerated list.
    pub solver_in_minimizer_set: bool,
}

/// Asserts the solver's minimum equals the exhaustive minimum on a tiny
/// grid (combinatorial blow-up guard: at most [`oracle::MAX_CELLS`] cells).
pub fn verify_optimality_small(
    omega: &BinaryMask,
    params: &EnergyParams,
    stencil: &Stencil,
) -> Result<OptimalityProof> {
    let geom = omega.geom();
    if geom.cells() > oracle::MAX_CELLS {
        return Err(Error::TooManyCells {
            cells: geom.cells(),
            cap: oracle::MAX_CELLS,
        });
    }
    let solver = minimize(omega, params, stencil)?;
    let oracle = oracle::brute_force_minimize(omega, params, stencil)?;
    let energies_match = solver.report.total == oracle.min_energy;
    let solver_in_minimizer_set = oracle.minimizers.contains(&solver.sigma);
    Ok(OptimalityProof {
        solver,
        oracle,
        energies_match,
        solver_in_minimizer_set,
    })
}
