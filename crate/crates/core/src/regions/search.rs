//! On-the-fly Büchi emptiness over the region graph.
//!
//! Nodes are `(state, region, fresh)`. A fresh node was just entered by a
//! discrete transition and may only let time pass; a non-fresh node has
//! already let some positive time pass (or is the initial node) and may
//! either keep delaying or fire a transition. Every cycle therefore
//! contains a discrete step, and a path corresponds to a run whose delays
//! are positive except possibly the first one.

use rustc_hash::FxHashMap;

use super::graph::compile_guards;
use super::region::{Region, RegionError, RegionGuard};
use super::{LassoStep, SymbolicLasso};
use crate::model::{Automaton, StateId};

const WHITE: u8 = 0;
const CYAN: u8 = 1;
const BLUE: u8 = 2;
const RED: u8 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Label {
    Delay,
    Action(u32),
}

type Key = (u32, bool, Region);
type Succs = Vec<(u32, Label)>;

#[derive(Debug, Clone)]
pub struct SearchOutcome {
    pub lasso: Option<SymbolicLasso>,
    /// Nodes of the split graph discovered before the search stopped.
    pub nodes: usize,
}

struct Graph<'a> {
    a: &'a Automaton,
    guards: Vec<RegionGuard>,
    outgoing: Vec<Vec<usize>>,
    index: FxHashMap<Key, u32>,
    keys: Vec<Key>,
    color: Vec<u8>,
    budget: usize,
}

impl<'a> Graph<'a> {
    fn intern(&mut self, key: Key) -> Result<u32, RegionError> {
        if let Some(&id) = self.index.get(&key) {
            return Ok(id);
        }
        if self.keys.len() >= self.budget {
            return Err(RegionError::RegionBudgetExceeded(self.budget));
        }
        let id = self.keys.len() as u32;
        self.keys.push(key.clone());
        self.color.push(WHITE);
        self.index.insert(key, id);
        Ok(id)
    }

    fn accepting(&self, n: u32) -> bool {
        self.a.is_accepting(StateId(self.keys[n as usize].0 as usize))
    }

    fn post(&mut self, n: u32) -> Result<Succs, RegionError> {
        let (q, fresh, region) = self.keys[n as usize].clone();
        let mut out = Vec::new();
        let succ = region.time_successor();
        if fresh {
            let target = if region.is_time_open() { Some(region.clone()) } else { succ };
            if let Some(r) = target {
                out.push((self.intern((q, false, r))?, Label::Delay));
            }
            return Ok(out);
        }
        for i in 0..self.outgoing[q as usize].len() {
            let ti = self.outgoing[q as usize][i];
            if self.guards[ti].eval(&region) {
                let t = &self.a.transitions[ti];
                let key = (t.target.0 as u32, true, region.reset(&t.resets));
                out.push((self.intern(key)?, Label::Action(ti as u32)));
            }
        }
        if let Some(r) = succ {
            out.push((self.intern((q, false, r))?, Label::Delay));
        }
        Ok(out)
    }
}

/// Searches for an accepting lasso of a parameter-free automaton with
/// region bound `m`, stopping at the first one found.
pub fn search_lasso(a: &Automaton, m: u32, budget: usize) -> Result<SearchOutcome, RegionError> {
    let guards = compile_guards(a, m)?;
    let mut outgoing = vec![Vec::new(); a.states.len()];
    for (i, t) in a.transitions.iter().enumerate() {
        outgoing[t.source.0].push(i);
    }
    let mut g = Graph { a, guards, outgoing, index: FxHashMap::default(), keys: Vec::new(), color: Vec::new(), budget };
    let start = g.intern((a.initial.0 as u32, false, Region::zero(a.clocks.len(), m)))?;
    let found = nested_dfs(&mut g, start)?;
    let lasso = found.map(|(stem, cycle)| to_lasso(&g, start, stem, cycle));
    Ok(SearchOutcome { lasso, nodes: g.keys.len() })
}

/// A path segment: nodes and the labels of the edges between them.
type Path = (Vec<u32>, Vec<Label>);

fn nested_dfs(g: &mut Graph<'_>, start: u32) -> Result<Option<(Path, Path)>, RegionError> {
    // Blue stack: node, successors, next position.
    let mut stack: Vec<(u32, Succs, usize)> = Vec::new();
    g.color[start as usize] = CYAN;
    let s0 = g.post(start)?;
    stack.push((start, s0, 0));
    while let Some(top) = stack.last_mut() {
        let s = top.0;
        if top.2 < top.1.len() {
            let (t, label) = top.1[top.2];
            top.2 += 1;
            let ct = g.color[t as usize];
            if ct == CYAN && (g.accepting(s) || g.accepting(t)) {
                let (nodes, labels) = blue_path(&stack);
                let j = nodes.iter().position(|&n| n == t).unwrap();
                let stem = (nodes[..=j].to_vec(), labels[..j].to_vec());
                let mut cyc_nodes = nodes[j..].to_vec();
                let mut cyc_labels = labels[j..].to_vec();
                cyc_nodes.push(t);
                cyc_labels.push(label);
                return Ok(Some((stem, (cyc_nodes, cyc_labels))));
            }
            if ct == WHITE {
                g.color[t as usize] = CYAN;
                let st = g.post(t)?;
                stack.push((t, st, 0));
            }
            continue;
        }
        if g.accepting(s) {
            if let Some((red_nodes, red_labels)) = red_dfs(g, s)? {
                let (nodes, labels) = blue_path(&stack);
                let hit = *red_nodes.last().unwrap();
                let j = nodes.iter().position(|&n| n == hit).unwrap();
                let stem = (nodes[..=j].to_vec(), labels[..j].to_vec());
                let mut cyc_nodes = nodes[j..].to_vec();
                let mut cyc_labels = labels[j..].to_vec();
                cyc_nodes.extend_from_slice(&red_nodes[1..]);
                cyc_labels.extend(red_labels);
                return Ok(Some((stem, (cyc_nodes, cyc_labels))));
            }
            g.color[s as usize] = RED;
        } else {
            g.color[s as usize] = BLUE;
        }
        stack.pop();
    }
    Ok(None)
}

fn blue_path(stack: &[(u32, Succs, usize)]) -> Path {
    let nodes = stack.iter().map(|f| f.0).collect();
    let labels = stack[..stack.len() - 1].iter().map(|f| f.1[f.2 - 1].1).collect();
    (nodes, labels)
}

/// Red search from `seed`; returns the path from `seed` to a cyan node.
fn red_dfs(g: &mut Graph<'_>, seed: u32) -> Result<Option<Path>, RegionError> {
    let s0 = g.post(seed)?;
    let mut stack: Vec<(u32, Succs, usize)> = vec![(seed, s0, 0)];
    while let Some(top) = stack.last_mut() {
        if top.2 < top.1.len() {
            let (t, label) = top.1[top.2];
            top.2 += 1;
            match g.color[t as usize] {
                CYAN => {
                    let (mut nodes, mut labels) = blue_path(&stack);
                    nodes.push(t);
                    labels.push(label);
                    return Ok(Some((nodes, labels)));
                }
                BLUE => {
                    g.color[t as usize] = RED;
                    let st = g.post(t)?;
                    stack.push((t, st, 0));
                }
                _ => {}
            }
        } else {
            stack.pop();
        }
    }
    Ok(None)
}

fn to_lasso(g: &Graph<'_>, start: u32, stem: Path, cycle: Path) -> SymbolicLasso {
    // Re-anchor the cycle at a fresh node so each step starts right after
    // a discrete transition.
    let (mut stem_nodes, mut stem_labels) = stem;
    let (cyc_nodes, cyc_labels) = cycle;
    let len = cyc_labels.len();
    let k = (0..len).find(|&i| g.keys[cyc_nodes[i] as usize].1).expect("cycle has an action");
    for i in 0..k {
        stem_nodes.push(cyc_nodes[i + 1]);
        stem_labels.push(cyc_labels[i]);
    }
    let mut rot_nodes = Vec::with_capacity(len + 1);
    let mut rot_labels = Vec::with_capacity(len);
    for i in 0..len {
        rot_nodes.push(cyc_nodes[(k + i) % len]);
        rot_labels.push(cyc_labels[(k + i) % len]);
    }
    rot_nodes.push(cyc_nodes[k]);

    let steps = |nodes: &[u32], labels: &[Label]| -> Vec<LassoStep> {
        labels
            .iter()
            .enumerate()
            .filter_map(|(i, l)| match l {
                Label::Delay => None,
                Label::Action(t) => {
                    let src = &g.keys[nodes[i] as usize];
                    let dst = &g.keys[nodes[i + 1] as usize];
                    Some(LassoStep {
                        transition: *t as usize,
                        delayed: src.2.clone(),
                        state: StateId(dst.0 as usize),
                        region: dst.2.clone(),
                    })
                }
            })
            .collect()
    };
    let s = &g.keys[start as usize];
    SymbolicLasso {
        start_state: StateId(s.0 as usize),
        start_region: s.2.clone(),
        stem: steps(&stem_nodes, &stem_labels),
        cycle: steps(&rot_nodes, &rot_labels),
    }
}
