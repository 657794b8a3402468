#![allow(dead_code)]

use std::path::PathBuf;

use pnta::format::parse_automaton;
use pnta::Automaton;

pub fn model_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("models").join(name)
}

pub fn load(name: &str) -> Automaton {
    let text = std::fs::read_to_string(model_path(name)).expect("model file");
    parse_automaton(&text).expect("model parses")
}

use std::collections::{HashMap, VecDeque};

use pnta::model::eval_constraint;
use pnta::{rat, ClockValuation, ParamValuation, Rational};

/// Pairs `(i, j)` with `t_j - t_i = 1`.
pub fn unit_distance_pairs(stamps: &[Rational]) -> usize {
    let one = rat(1, 1);
    let mut n = 0;
    for i in 0..stamps.len() {
        for j in i + 1..stamps.len() {
            if &stamps[j] - &stamps[i] == one {
                n += 1;
            }
        }
    }
    n
}

/// Büchi nonemptiness over runs whose delays are multiples of `1/k`.
/// Values above `max` are collapsed to `max + 1/k`, which no integer
/// guard up to `max` can tell apart. A lasso here is a real lasso.
pub fn grid_nonempty(a: &Automaton, max: i64, k: i64) -> bool {
    let cap = max * k + 1;
    let none = ParamValuation::empty();
    type Node = (usize, Vec<i64>, bool);
    let start: Node = (a.initial.0, vec![0; a.clocks.len()], true);
    let mut index: HashMap<Node, usize> = HashMap::new();
    let mut nodes: Vec<Node> = Vec::new();
    let mut succ: Vec<Vec<usize>> = Vec::new();
    index.insert(start.clone(), 0);
    nodes.push(start);
    succ.push(Vec::new());
    let mut queue = VecDeque::from([0]);
    while let Some(n) = queue.pop_front() {
        let (q, vals, first) = nodes[n].clone();
        let mut out = Vec::new();
        for d in (if first { 0 } else { 1 })..=cap {
            let moved: Vec<i64> = vals.iter().map(|v| (v + d).min(cap)).collect();
            let cv = ClockValuation(moved.iter().map(|&v| rat(v, k)).collect());
            for t in a.transitions.iter().filter(|t| t.source.0 == q) {
                if !eval_constraint(&t.guard, &cv, &none).unwrap() {
                    continue;
                }
                let mut next = moved.clone();
                for z in &t.resets {
                    next[z.0] = 0;
                }
                let key = (t.target.0, next, false);
                let id = *index.entry(key.clone()).or_insert_with(|| {
                    nodes.push(key);
                    succ.push(Vec::new());
                    queue.push_back(nodes.len() - 1);
                    nodes.len() - 1
                });
                if !out.contains(&id) {
                    out.push(id);
                }
            }
        }
        succ[n] = out;
    }
    (0..nodes.len()).filter(|&n| a.accepting.contains(&pnta::StateId(nodes[n].0))).any(|n| {
        let mut seen = vec![false; nodes.len()];
        let mut stack = succ[n].clone();
        while let Some(m) = stack.pop() {
            if m == n {
                return true;
            }
            if !std::mem::replace(&mut seen[m], true) {
                stack.extend(&succ[m]);
            }
        }
        false
    })
}
