//! The events current circuit: an event scheduler whose handler order and
//! gating are wired up as a graph of electrical parts.
//!
//! The mapping from the metaphor:
//!
//! * a [`NodeKind::Series`] junction runs its outgoing wires one at a time in
//!   insertion order, exhausting each before the next;
//! * a [`NodeKind::Parallel`] junction fans out to its branches in ascending
//!   order of resistance along each branch's first segment (lower first);
//! * a [`NodeKind::Switch`] gates everything behind it while open;
//! * [`NodeKind::Ground`] is the completion sink.
//!
//! A handler fires at most once per injection, so feedback wiring is allowed
//! but cannot loop. Handlers may mutate the payload and flip switches through
//! the [`Control`] they are given; flips only affect parts of the graph that
//! current has not reached yet.

mod text;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::chemical::{ChemSystem, HandlerId, ParseError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeId(pub u32);

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SwitchState {
    Open,
    Closed,
}

impl SwitchState {
    pub fn is_open(self) -> bool {
        self == SwitchState::Open
    }

    pub fn toggled(self) -> Self {
        match self {
            SwitchState::Open => SwitchState::Closed,
            SwitchState::Closed => SwitchState::Open,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NodeKind {
    Source(String),
    Handler { id: HandlerId, resistance: u32 },
    Switch(SwitchState),
    Series,
    Parallel,
    Ground,
}

impl NodeKind {
    pub fn handler(id: HandlerId, resistance: u32) -> Self {
        NodeKind::Handler { id, resistance }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Wire {
    pub from: NodeId,
    pub to: NodeId,
}

/// A structural problem found by [`Circuit::validate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Defect {
    DanglingWire { index: usize, from: NodeId, to: NodeId },
    SourceWithInputs(NodeId),
    GroundWithOutputs(NodeId),
    /// No path from this source reaches ground, even with every switch closed.
    UnreachableGround(NodeId),
    DuplicateSource(String),
}

impl fmt::Display for Defect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Defect::DanglingWire { index, from, to } => write!(f, "dangling wire #{index} {from}->{to}"),
            Defect::SourceWithInputs(n) => write!(f, "source {n} has inputs"),
            Defect::GroundWithOutputs(n) => write!(f, "ground {n} has outputs"),
            Defect::UnreachableGround(n) => write!(f, "unreachable ground from source {n}"),
            Defect::DuplicateSource(e) => write!(f, "duplicate source for event {e:?}"),
        }
    }
}

#[derive(Debug, Error)]
pub enum CircuitError {
    #[error("unknown node {0}")]
    UnknownNode(NodeId),
    #[error("node {0} is not a switch")]
    NotASwitch(NodeId),
    #[error("node {0} already exists")]
    DuplicateNode(NodeId),
    #[error("no wire {0}->{1}")]
    UnknownWire(NodeId, NodeId),
    #[error("no source for event {0:?}")]
    UnknownEvent(String),
    #[error("invalid circuit: {}", .0.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Defect>),
    #[error(transparent)]
    Parse(#[from] ParseError),
}

/// One structural change applied by [`Circuit::rewire`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Edit {
    AddNode(NodeId, NodeKind),
    /// Removes the node and every wire touching it.
    RemoveNode(NodeId),
    AddWire(NodeId, NodeId),
    /// Removes the earliest wire with these endpoints.
    RemoveWire(NodeId, NodeId),
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Circuit {
    nodes: BTreeMap<NodeId, NodeKind>,
    wires: Vec<Wire>,
}

impl Circuit {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds a node under the next free id.
    pub fn add(&mut self, kind: NodeKind) -> NodeId {
        let id = NodeId(self.nodes.keys().next_back().map_or(1, |n| n.0 + 1));
        self.nodes.insert(id, kind);
        id
    }

    pub fn insert(&mut self, id: NodeId, kind: NodeKind) -> Result<(), CircuitError> {
        if self.nodes.contains_key(&id) {
            return Err(CircuitError::DuplicateNode(id));
        }
        self.nodes.insert(id, kind);
        Ok(())
    }

    /// Appends a wire. Endpoints are not checked here; see [`Circuit::validate`].
    pub fn connect(&mut self, from: NodeId, to: NodeId) {
        self.wires.push(Wire { from, to });
    }

    /// Wires the nodes into a chain, in order.
    pub fn chain(&mut self, nodes: &[NodeId]) {
        for pair in nodes.windows(2) {
            self.connect(pair[0], pair[1]);
        }
    }

    pub fn node(&self, id: NodeId) -> Option<&NodeKind> {
        self.nodes.get(&id)
    }

    pub fn nodes(&self) -> impl Iterator<Item = (NodeId, &NodeKind)> {
        self.nodes.iter().map(|(id, k)| (*id, k))
    }

    pub fn wires(&self) -> &[Wire] {
        &self.wires
    }

    /// Targets of `id`'s outgoing wires, in insertion order.
    pub fn outgoing(&self, id: NodeId) -> impl Iterator<Item = NodeId> + '_ {
        self.wires.iter().filter(move |w| w.from == id).map(|w| w.to)
    }

    pub fn source_for(&self, event: &str) -> Option<NodeId> {
        self.nodes.iter().find_map(|(id, k)| match k {
            NodeKind::Source(e) if e == event => Some(*id),
            _ => None,
        })
    }

    pub fn switch_state(&self, id: NodeId) -> Result<SwitchState, CircuitError> {
        match self.nodes.get(&id) {
            Some(NodeKind::Switch(s)) => Ok(*s),
            Some(_) => Err(CircuitError::NotASwitch(id)),
            None => Err(CircuitError::UnknownNode(id)),
        }
    }

    pub fn set_switch(&mut self, id: NodeId, state: SwitchState) -> Result<(), CircuitError> {
        match self.nodes.get_mut(&id) {
            Some(NodeKind::Switch(s)) => {
                *s = state;
                Ok(())
            }
            Some(_) => Err(CircuitError::NotASwitch(id)),
            None => Err(CircuitError::UnknownNode(id)),
        }
    }

    pub fn validate(&self) -> Result<(), Vec<Defect>> {
        let mut defects = Vec::new();
        for (index, w) in self.wires.iter().enumerate() {
            if !self.nodes.contains_key(&w.from) || !self.nodes.contains_key(&w.to) {
                defects.push(Defect::DanglingWire { index, from: w.from, to: w.to });
            }
        }
        let live = |w: &&Wire| self.nodes.contains_key(&w.from) && self.nodes.contains_key(&w.to);
        let mut events = BTreeSet::new();
        for (&id, kind) in &self.nodes {
            match kind {
                NodeKind::Source(event) => {
                    if self.wires.iter().filter(live).any(|w| w.to == id) {
                        defects.push(Defect::SourceWithInputs(id));
                    }
                    if !events.insert(event.as_str()) {
                        defects.push(Defect::DuplicateSource(event.clone()));
                    }
                    if !self.reaches_ground(id) {
                        defects.push(Defect::UnreachableGround(id));
                    }
                }
                NodeKind::Ground => {
                    if self.wires.iter().filter(live).any(|w| w.from == id) {
                        defects.push(Defect::GroundWithOutputs(id));
                    }
                }
                _ => {}
            }
        }
        if defects.is_empty() {
            Ok(())
        } else {
            Err(defects)
        }
    }

    fn reaches_ground(&self, from: NodeId) -> bool {
        let mut seen = BTreeSet::from([from]);
        let mut stack = vec![from];
        while let Some(n) = stack.pop() {
            if self.nodes.get(&n) == Some(&NodeKind::Ground) {
                return true;
            }
            for next in self.outgoing(n) {
                if self.nodes.contains_key(&next) && seen.insert(next) {
                    stack.push(next);
                }
            }
        }
        false
    }

    /// Applies `edits` in order, keeping the result only if it validates.
    pub fn rewire(&mut self, edits: &[Edit]) -> Result<(), CircuitError> {
        let mut next = self.clone();
        for edit in edits {
            match edit {
                Edit::AddNode(id, kind) => next.insert(*id, kind.clone())?,
                Edit::RemoveNode(id) => {
                    if next.nodes.remove(id).is_none() {
                        return Err(CircuitError::UnknownNode(*id));
                    }
                    next.wires.retain(|w| w.from != *id && w.to != *id);
                }
                Edit::AddWire(from, to) => {
                    for n in [from, to] {
                        if !next.nodes.contains_key(n) {
                            return Err(CircuitError::UnknownNode(*n));
                        }
                    }
                    next.connect(*from, *to);
                }
                Edit::RemoveWire(from, to) => {
                    let i = next
                        .wires
                        .iter()
                        .position(|w| w.from == *from && w.to == *to)
                        .ok_or(CircuitError::UnknownWire(*from, *to))?;
                    next.wires.remove(i);
                }
            }
        }
        next.validate().map_err(CircuitError::Invalid)?;
        *self = next;
        Ok(())
    }

    /// Sum of handler resistances along the chain starting at `start`, which
    /// continues while each node has exactly one outgoing wire and stops at
    /// junctions, ground, sources and revisits.
    pub fn first_segment_resistance(&self, start: NodeId) -> u64 {
        let mut total = 0u64;
        let mut seen = BTreeSet::new();
        let mut cur = start;
        while seen.insert(cur) {
            match self.nodes.get(&cur) {
                Some(NodeKind::Handler { resistance, .. }) => total += u64::from(*resistance),
                Some(NodeKind::Switch(_)) => {}
                _ => break,
            }
            let mut outs = self.outgoing(cur);
            match (outs.next(), outs.next()) {
                (Some(next), None) => cur = next,
                _ => break,
            }
        }
        total
    }

    /// Runs one injection of `event`, calling `exec` for each handler reached.
    pub fn inject<E: Executor + ?Sized>(
        &mut self,
        event: &str,
        payload: ChemSystem,
        exec: &mut E,
    ) -> Result<CurrentTrace, CircuitError> {
        self.validate().map_err(CircuitError::Invalid)?;
        let source = self
            .source_for(event)
            .ok_or_else(|| CircuitError::UnknownEvent(event.to_owned()))?;
        let mut run = Run {
            circuit: self,
            visited: BTreeSet::new(),
            fired: BTreeSet::new(),
            trace: CurrentTrace {
                event: event.to_owned(),
                steps: Vec::new(),
                snapshots: Vec::new(),
                requests: Vec::new(),
                payload,
            },
        };
        run.visit(source, exec);
        Ok(run.trace)
    }

    /// Injects `event`, then every injection requested along the way, in
    /// request order, until none remain.
    pub fn inject_all<E: Executor + ?Sized>(
        &mut self,
        event: &str,
        payload: ChemSystem,
        exec: &mut E,
    ) -> Result<Vec<CurrentTrace>, CircuitError> {
        let mut pending = std::collections::VecDeque::from([(event.to_owned(), payload)]);
        let mut traces = Vec::new();
        while let Some((event, payload)) = pending.pop_front() {
            let mut trace = self.inject(&event, payload, exec)?;
            pending.extend(trace.requests.drain(..));
            traces.push(trace);
        }
        Ok(traces)
    }

    pub fn to_text(&self) -> String {
        text::write(self)
    }

    pub fn parse(input: &str) -> Result<Self, CircuitError> {
        Ok(text::parse(input)?)
    }
}

struct Run<'c> {
    circuit: &'c mut Circuit,
    visited: BTreeSet<NodeId>,
    fired: BTreeSet<HandlerId>,
    trace: CurrentTrace,
}

impl Run<'_> {
    fn visit<E: Executor + ?Sized>(&mut self, node: NodeId, exec: &mut E) {
        if self.visited.contains(&node) {
            return;
        }
        let kind = match self.circuit.nodes.get(&node) {
            Some(k) => k.clone(),
            None => return,
        };
        if kind == NodeKind::Switch(SwitchState::Open) {
            self.trace.steps.push(Step::Blocked(node));
            return;
        }
        self.visited.insert(node);
        match kind {
            NodeKind::Ground => return,
            NodeKind::Handler { id, .. } if self.fired.insert(id) => {
                let mut ctl = Control {
                    circuit: self.circuit,
                    requests: &mut self.trace.requests,
                };
                exec.fire(id, &mut self.trace.payload, &mut ctl);
                self.trace.steps.push(Step::Fire(id));
                self.trace.snapshots.push(self.trace.payload.clone());
            }
            _ => {}
        }
        let mut next: Vec<(usize, NodeId)> = self.circuit.outgoing(node).enumerate().collect();
        if kind == NodeKind::Parallel {
            next.sort_by_key(|&(i, n)| (self.circuit.first_segment_resistance(n), i));
        }
        for (_, n) in next {
            self.visit(n, exec);
        }
    }
}

/// What a handler may do to the circuit while it runs.
pub struct Control<'a> {
    circuit: &'a mut Circuit,
    requests: &'a mut Vec<(String, ChemSystem)>,
}

impl Control<'_> {
    pub fn set_switch(&mut self, id: NodeId, state: SwitchState) -> Result<(), CircuitError> {
        self.circuit.set_switch(id, state)
    }

    pub fn switch_state(&self, id: NodeId) -> Result<SwitchState, CircuitError> {
        self.circuit.switch_state(id)
    }

    /// Queues an injection to run after the current one completes.
    pub fn request_injection(&mut self, event: &str, payload: ChemSystem) {
        self.requests.push((event.to_owned(), payload));
    }
}

/// Runs handlers on behalf of [`Circuit::inject`].
pub trait Executor {
    fn fire(&mut self, handler: HandlerId, payload: &mut ChemSystem, ctl: &mut Control<'_>);
}

impl<F> Executor for F
where
    F: FnMut(HandlerId, &mut ChemSystem, &mut Control<'_>),
{
    fn fire(&mut self, handler: HandlerId, payload: &mut ChemSystem, ctl: &mut Control<'_>) {
        self(handler, payload, ctl)
    }
}

/// An executor that does nothing; useful for observing order alone.
pub struct Inert;

impl Executor for Inert {
    fn fire(&mut self, _: HandlerId, _: &mut ChemSystem, _: &mut Control<'_>) {}
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Step {
    Fire(HandlerId),
    /// Current stopped at this open switch.
    Blocked(NodeId),
}

/// The observable record of one injection.
#[derive(Debug, Clone, PartialEq)]
pub struct CurrentTrace {
    pub event: String,
    pub steps: Vec<Step>,
    /// Payload after each fired handler, parallel to [`CurrentTrace::fired`].
    pub snapshots: Vec<ChemSystem>,
    /// Injections requested by handlers, not yet run.
    pub requests: Vec<(String, ChemSystem)>,
    /// The payload as it left the last handler.
    pub payload: ChemSystem,
}

impl CurrentTrace {
    pub fn fired(&self) -> Vec<HandlerId> {
        self.steps
            .iter()
            .filter_map(|s| match s {
                Step::Fire(h) => Some(*h),
                _ => None,
            })
            .collect()
    }

    pub fn blocked(&self) -> Vec<NodeId> {
        self.steps
            .iter()
            .filter_map(|s| match s {
                Step::Blocked(n) => Some(*n),
                _ => None,
            })
            .collect()
    }

    /// Line-oriented dump: `inject <event>` then `fire <id>` / `blocked <node>`.
    pub fn dump(&self) -> String {
        let mut out = format!("inject {}\n", self.event);
        for step in &self.steps {
            match step {
                Step::Fire(h) => out += &format!("fire {h}\n"),
                Step::Blocked(n) => out += &format!("blocked {n}\n"),
            }
        }
        out
    }
}
