//! Reference interpreter and generators for circuits.

use std::collections::{BTreeMap, BTreeSet};

use groundup::chemical::HandlerId;
use groundup::circuit::{Circuit, NodeId, NodeKind, SwitchState};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Fired handlers and blocked switches, straight from the traversal rules
/// using an explicit work stack.
pub fn reference(c: &Circuit, event: &str) -> (Vec<HandlerId>, Vec<NodeId>) {
    let kinds: BTreeMap<NodeId, NodeKind> = c.nodes().map(|(id, k)| (id, k.clone())).collect();
    let wires: Vec<(NodeId, NodeId)> = c.wires().iter().map(|w| (w.from, w.to)).collect();
    let source = kinds
        .iter()
        .find(|(_, k)| **k == NodeKind::Source(event.to_string()))
        .map(|(id, _)| *id)
        .expect("source");
    let succ = |n: NodeId| -> Vec<NodeId> { wires.iter().filter(|w| w.0 == n).map(|w| w.1).collect() };
    let segment = |start: NodeId| -> u64 {
        let mut sum = 0;
        let mut path = vec![];
        let mut n = start;
        loop {
            if path.contains(&n) {
                return sum;
            }
            path.push(n);
            match &kinds[&n] {
                NodeKind::Handler { resistance, .. } => sum += *resistance as u64,
                NodeKind::Switch(_) => {}
                _ => return sum,
            }
            let s = succ(n);
            if s.len() != 1 {
                return sum;
            }
            n = s[0];
        }
    };

    let mut fired = Vec::new();
    let mut blocked = Vec::new();
    let mut visited = BTreeSet::new();
    let mut stack = vec![source];
    while let Some(n) = stack.pop() {
        if visited.contains(&n) {
            continue;
        }
        if kinds[&n] == NodeKind::Switch(SwitchState::Open) {
            blocked.push(n);
            continue;
        }
        visited.insert(n);
        match &kinds[&n] {
            NodeKind::Ground => continue,
            NodeKind::Handler { id, .. } if !fired.contains(id) => fired.push(*id),
            _ => {}
        }
        let mut order: Vec<(usize, NodeId)> = succ(n).into_iter().enumerate().collect();
        if kinds[&n] == NodeKind::Parallel {
            // selection by (segment resistance, wire position)
            let mut sorted = Vec::new();
            while !order.is_empty() {
                let mut best = 0;
                for i in 1..order.len() {
                    let (a, b) = ((segment(order[i].1), order[i].0), (segment(order[best].1), order[best].0));
                    if a < b {
                        best = i;
                    }
                }
                sorted.push(order.remove(best));
            }
            order = sorted;
        }
        for (_, m) in order.into_iter().rev() {
            stack.push(m);
        }
    }
    (fired, blocked)
}

/// A circuit of at most `max_nodes` nodes with one source "e" and one ground,
/// random middle parts, switch states and wiring. Not always valid.
pub fn random_circuit(rng: &mut ChaCha8Rng, max_nodes: usize) -> Circuit {
    let mut c = Circuit::new();
    let n = rng.random_range(2..=max_nodes);
    let source = c.add(NodeKind::Source("e".into()));
    let mut middle = Vec::new();
    for _ in 0..n - 2 {
        let kind = match rng.random_range(0..6) {
            0 | 1 => NodeKind::handler(rng.random_range(1..8), rng.random_range(0..4)),
            2 => NodeKind::Switch(if rng.random_bool(0.3) { SwitchState::Open } else { SwitchState::Closed }),
            3 => NodeKind::Series,
            _ => NodeKind::Parallel,
        };
        middle.push(c.add(kind));
    }
    let ground = c.add(NodeKind::Ground);
    if !middle.is_empty() {
        c.connect(source, middle[rng.random_range(0..middle.len())]);
    }
    for _ in 0..rng.random_range(0..=n * 2) {
        let from = if rng.random_bool(0.15) || middle.is_empty() { source } else { middle[rng.random_range(0..middle.len())] };
        let to = if rng.random_bool(0.3) || middle.is_empty() { ground } else { middle[rng.random_range(0..middle.len())] };
        c.connect(from, to);
    }
    c
}

/// Like [`random_circuit`] but retried until it validates.
pub fn valid_circuit(rng: &mut ChaCha8Rng, max_nodes: usize) -> Circuit {
    loop {
        let c = random_circuit(rng, max_nodes);
        if c.validate().is_ok() {
            return c;
        }
    }
}

/// Switch node ids, ascending.
pub fn switches(c: &Circuit) -> Vec<NodeId> {
    c.nodes().filter(|(_, k)| matches!(k, NodeKind::Switch(_))).map(|(id, _)| id).collect()
}
