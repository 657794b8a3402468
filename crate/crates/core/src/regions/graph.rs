use std::collections::VecDeque;
use std::fmt::Write as _;

use rustc_hash::FxHashMap;

use super::region::{Region, RegionError, RegionGuard};
use super::{LassoStep, SymbolicLasso, DEFAULT_REGION_BUDGET};
use crate::model::{Automaton, StateId};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegionNode {
    pub state: StateId,
    pub region: Region,
    /// The initial node, from which a zero first delay is also allowed.
    pub root: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegionEdge {
    pub target: usize,
    pub transition: usize,
    /// Region reached by the delay, before the resets of `transition`.
    pub delayed: Region,
}

/// Reachable part of the region automaton. Each edge stands for a delay
/// followed by one discrete transition.
#[derive(Clone, Debug)]
pub struct RegionAutomaton {
    pub automaton: Automaton,
    pub max: u32,
    pub nodes: Vec<RegionNode>,
    pub edges: Vec<Vec<RegionEdge>>,
    pub initial: usize,
    index: FxHashMap<(StateId, Region, bool), usize>,
}

impl RegionAutomaton {
    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.iter().map(Vec::len).sum()
    }

    pub fn is_accepting(&self, n: usize) -> bool {
        self.automaton.is_accepting(self.nodes[n].state)
    }

    /// Non-root node for `(q, r)`, if reachable.
    pub fn find(&self, q: StateId, r: &Region) -> Option<usize> {
        self.index.get(&(q, r.clone(), false)).copied()
    }

    /// Whether `(q, r)` is the initial node or some reachable node.
    pub fn contains(&self, q: StateId, r: &Region) -> bool {
        let root = &self.nodes[self.initial];
        (root.state == q && &root.region == r) || self.find(q, r).is_some()
    }

    pub fn node_label(&self, n: usize) -> String {
        let node = &self.nodes[n];
        format!("{} | {}", self.automaton.state_name(node.state), node.region.display_with(&self.automaton.clocks))
    }

    /// Graph description in DOT syntax; accepting nodes are double circles.
    pub fn to_dot(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "digraph \"{}\" {{", self.automaton.name.replace('"', "'"));
        let _ = writeln!(out, "  rankdir=LR;");
        let _ = writeln!(out, "  __start [shape=point];");
        for n in 0..self.nodes.len() {
            let shape = if self.is_accepting(n) { "doublecircle" } else { "circle" };
            let label = self.node_label(n).replace('"', "'");
            let _ = writeln!(out, "  n{n} [shape={shape}, label=\"{label}\"];");
        }
        let _ = writeln!(out, "  __start -> n{};", self.initial);
        for (n, es) in self.edges.iter().enumerate() {
            for e in es {
                let t = &self.automaton.transitions[e.transition];
                let letter = &self.automaton.alphabet[t.letter.0];
                let _ = writeln!(out, "  n{n} -> n{} [label=\"t{} {letter}\"];", e.target, e.transition);
            }
        }
        out.push_str("}\n");
        out
    }
}

pub(crate) fn compile_guards(a: &Automaton, max: u32) -> Result<Vec<RegionGuard>, RegionError> {
    if a.has_params() {
        return Err(RegionError::Parametric);
    }
    a.transitions.iter().map(|t| RegionGuard::compile(&t.guard, max)).collect()
}

/// Builds the reachable region automaton with the default node budget.
pub fn build_region_automaton(a: &Automaton, m: u32) -> Result<RegionAutomaton, RegionError> {
    build_region_automaton_with_budget(a, m, DEFAULT_REGION_BUDGET)
}

pub fn build_region_automaton_with_budget(
    a: &Automaton,
    m: u32,
    budget: usize,
) -> Result<RegionAutomaton, RegionError> {
    let guards = compile_guards(a, m)?;
    let mut ra = RegionAutomaton {
        automaton: a.clone(),
        max: m,
        nodes: Vec::new(),
        edges: Vec::new(),
        initial: 0,
        index: FxHashMap::default(),
    };
    let zero = Region::zero(a.clocks.len(), m);
    ra.nodes.push(RegionNode { state: a.initial, region: zero.clone(), root: true });
    ra.edges.push(Vec::new());
    ra.index.insert((a.initial, zero, true), 0);

    let mut queue = VecDeque::from([0usize]);
    while let Some(n) = queue.pop_front() {
        let RegionNode { state, region, root } = ra.nodes[n].clone();
        let mut delayed = Vec::new();
        if root {
            delayed.push(region.clone());
        }
        for r in region.positive_delay_successors() {
            if !delayed.contains(&r) {
                delayed.push(r);
            }
        }
        let mut out: Vec<RegionEdge> = Vec::new();
        for d in &delayed {
            for (ti, t) in a.outgoing(state) {
                if !guards[ti].eval(d) {
                    continue;
                }
                let next = d.reset(&t.resets);
                let key = (t.target, next, false);
                let target = match ra.index.get(&key) {
                    Some(&id) => id,
                    None => {
                        if ra.nodes.len() >= budget {
                            return Err(RegionError::RegionBudgetExceeded(budget));
                        }
                        let id = ra.nodes.len();
                        ra.nodes.push(RegionNode { state: key.0, region: key.1.clone(), root: false });
                        ra.edges.push(Vec::new());
                        ra.index.insert(key, id);
                        queue.push_back(id);
                        id
                    }
                };
                if !out.iter().any(|e| e.target == target && e.transition == ti) {
                    out.push(RegionEdge { target, transition: ti, delayed: d.clone() });
                }
            }
        }
        ra.edges[n] = out;
    }
    Ok(ra)
}

/// Strongly connected components by an iterative Tarjan; returns the
/// component id of every node.
pub fn tarjan_scc(succ: &[Vec<usize>]) -> Vec<usize> {
    const UNSEEN: usize = usize::MAX;
    let n = succ.len();
    let mut index = vec![UNSEEN; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut comp = vec![UNSEEN; n];
    let mut stack = Vec::new();
    let mut next_index = 0;
    let mut next_comp = 0;
    for root in 0..n {
        if index[root] != UNSEEN {
            continue;
        }
        let mut call: Vec<(usize, usize)> = vec![(root, 0)];
        index[root] = next_index;
        low[root] = next_index;
        next_index += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(&mut (v, ref mut pos)) = call.last_mut() {
            if *pos < succ[v].len() {
                let w = succ[v][*pos];
                *pos += 1;
                if index[w] == UNSEEN {
                    index[w] = next_index;
                    low[w] = next_index;
                    next_index += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                call.pop();
                if let Some(&(parent, _)) = call.last() {
                    low[parent] = low[parent].min(low[v]);
                }
                if low[v] == index[v] {
                    loop {
                        let w = stack.pop().unwrap();
                        on_stack[w] = false;
                        comp[w] = next_comp;
                        if w == v {
                            break;
                        }
                    }
                    next_comp += 1;
                }
            }
        }
    }
    comp
}

/// Node and edge indices of a path found by breadth-first search.
fn bfs_path(
    ra: &RegionAutomaton,
    from: usize,
    allowed: impl Fn(usize) -> bool,
    goal: impl Fn(usize) -> bool,
) -> Option<Vec<(usize, usize)>> {
    let mut parent: FxHashMap<usize, (usize, usize)> = FxHashMap::default();
    let mut queue = VecDeque::from([from]);
    let mut seen = vec![false; ra.nodes.len()];
    seen[from] = true;
    while let Some(n) = queue.pop_front() {
        for (ei, e) in ra.edges[n].iter().enumerate() {
            if !allowed(e.target) {
                continue;
            }
            if goal(e.target) {
                let mut path = vec![(n, ei)];
                let mut cur = n;
                while cur != from {
                    let (p, pe) = parent[&cur];
                    path.push((p, pe));
                    cur = p;
                }
                path.reverse();
                return Some(path);
            }
            if !seen[e.target] {
                seen[e.target] = true;
                parent.insert(e.target, (n, ei));
                queue.push_back(e.target);
            }
        }
    }
    None
}

/// `(node, edge index)` pairs along a path.
pub type NodePath = Vec<(usize, usize)>;

/// An accepting lasso of the region automaton, or `None` when its Büchi
/// language is empty.
pub fn buchi_nonempty(ra: &RegionAutomaton) -> Option<SymbolicLasso> {
    buchi_lasso_nodes(ra).map(|(stem, cycle)| {
        let to_steps = |path: &[(usize, usize)]| -> Vec<LassoStep> {
            path.iter()
                .map(|&(n, ei)| {
                    let e = &ra.edges[n][ei];
                    let tgt = &ra.nodes[e.target];
                    LassoStep {
                        transition: e.transition,
                        delayed: e.delayed.clone(),
                        state: tgt.state,
                        region: tgt.region.clone(),
                    }
                })
                .collect()
        };
        let root = &ra.nodes[ra.initial];
        SymbolicLasso {
            start_state: root.state,
            start_region: root.region.clone(),
            stem: to_steps(&stem),
            cycle: to_steps(&cycle),
        }
    })
}

/// Stem and cycle of an accepting lasso as `(node, edge index)` lists.
pub fn buchi_lasso_nodes(ra: &RegionAutomaton) -> Option<(NodePath, NodePath)> {
    let succ: Vec<Vec<usize>> = ra.edges.iter().map(|es| es.iter().map(|e| e.target).collect()).collect();
    let comp = tarjan_scc(&succ);
    let nontrivial = |n: usize| succ[n].iter().any(|&m| comp[m] == comp[n]);
    let acc = (0..ra.nodes.len()).find(|&n| ra.is_accepting(n) && nontrivial(n))?;
    let stem = if acc == ra.initial { Vec::new() } else { bfs_path(ra, ra.initial, |_| true, |m| m == acc)? };
    let c = comp[acc];
    let cycle = bfs_path(ra, acc, |m| comp[m] == c, |m| m == acc)?;
    Some((stem, cycle))
}
