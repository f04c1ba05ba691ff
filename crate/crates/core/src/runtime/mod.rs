//! The deterministic event loop.
//!
//! One [`Runtime::pump`] drains the input queue (each event is injected into
//! the event circuit, whose built-in handlers are the shell's input
//! [`Stage`]s), steps every runnable task once in creation order, recomposes
//! once if anything was damaged, and advances the virtual clock one tick.
//! External producers hand events over through [`Runtime::handoff`]; they are
//! moved into the queue at the start of a pump.

use std::collections::{BTreeMap, VecDeque};
use std::sync::mpsc::{self, Receiver, Sender};

use crate::chemical::{ChemSystem, Electron, HandlerId};
use crate::circuit::{Circuit, CircuitError, Control, Edit, NodeId, NodeKind};
use crate::desktop::{Call, Shell, Stage};
use crate::input::{RawInputEvent, Script, ScriptError};

/// Circuit source that raw input is injected at.
pub const INPUT_EVENT: &str = "input";
/// First id handed out by [`Runtime::register_handler`].
pub const FIRST_USER_HANDLER: HandlerId = 100;
/// Bound on handler calls that may queue further calls within one event.
const CALL_ROUNDS: usize = 64;

/// Monotonic tick counter, advanced only by [`Runtime::pump`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct VirtualClock {
    tick: u64,
}

impl VirtualClock {
    pub fn now(&self) -> u64 {
        self.tick
    }

    fn advance(&mut self) {
        self.tick += 1;
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct TaskId(pub u32);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TaskState {
    Runnable,
    /// Resumes at the first pump whose tick is at least this.
    Sleeping(u64),
    Done,
}

/// What a task step asks for next.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TaskStep {
    Continue,
    /// Skip this many further pumps.
    Sleep(u64),
    Done,
}

/// What a task may touch while it steps.
pub struct TaskCtx<'a> {
    pub shell: &'a mut Shell,
    pub tick: u64,
    posted: &'a mut Vec<RawInputEvent>,
}

impl TaskCtx<'_> {
    /// Queues input; it is processed in a later pump.
    pub fn post(&mut self, ev: RawInputEvent) {
        self.posted.push(ev);
    }
}

pub type TaskFn = Box<dyn FnMut(&mut TaskCtx<'_>) -> TaskStep>;
/// A user event handler, run for each [`Call`] addressed to it.
pub type HandlerFn = Box<dyn FnMut(&mut Shell, &Call)>;
pub type LaunchFn = Box<dyn FnMut(&mut Shell)>;
/// A handler run inline while current flows, with the event payload.
pub type FilterFn = Box<dyn FnMut(&mut Shell, &mut ChemSystem, &mut Control<'_>)>;

struct Task {
    id: TaskId,
    state: TaskState,
    step: TaskFn,
}

/// The outcome of one pump.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StepReport {
    pub tick: u64,
    pub events: usize,
    pub tasks: usize,
    pub recomposed: bool,
    /// Frame hash after recomposition.
    pub hash: Option<u64>,
}

impl std::fmt::Display for StepReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "tick {} events {} tasks {} recomposed {}", self.tick, self.events, self.tasks, self.recomposed)?;
        if let Some(h) = self.hash {
            write!(f, " {h:016x}")?;
        }
        Ok(())
    }
}

/// The circuit every runtime starts with: the four stages in series.
pub fn default_circuit() -> Circuit {
    let mut c = Circuit::new();
    let src = c.add(NodeKind::Source(INPUT_EVENT.into()));
    let mut chain = vec![src];
    for s in Stage::ALL {
        chain.push(c.add(NodeKind::handler(s.handler(), 0)));
    }
    chain.push(c.add(NodeKind::Ground));
    c.chain(&chain);
    c
}

pub struct Runtime {
    pub shell: Shell,
    circuit: Circuit,
    handlers: BTreeMap<HandlerId, HandlerFn>,
    filters: BTreeMap<HandlerId, FilterFn>,
    launchers: BTreeMap<u64, LaunchFn>,
    next_handler: HandlerId,
    tasks: Vec<Task>,
    queue: VecDeque<RawInputEvent>,
    tx: Sender<RawInputEvent>,
    rx: Receiver<RawInputEvent>,
    clock: VirtualClock,
    posted: u64,
    processed: u64,
}

impl Runtime {
    pub fn new(shell: Shell) -> Runtime {
        let (tx, rx) = mpsc::channel();
        Runtime {
            shell,
            circuit: default_circuit(),
            handlers: BTreeMap::new(),
            filters: BTreeMap::new(),
            launchers: BTreeMap::new(),
            next_handler: FIRST_USER_HANDLER,
            tasks: Vec::new(),
            queue: VecDeque::new(),
            tx,
            rx,
            clock: VirtualClock::default(),
            posted: 0,
            processed: 0,
        }
    }

    pub fn clock(&self) -> VirtualClock {
        self.clock
    }

    pub fn circuit(&self) -> &Circuit {
        &self.circuit
    }

    /// The event circuit; handlers wired in besides the stages are queued as
    /// calls with the injected payload.
    pub fn circuit_mut(&mut self) -> &mut Circuit {
        &mut self.circuit
    }

    pub fn register_handler(&mut self, f: impl FnMut(&mut Shell, &Call) + 'static) -> HandlerId {
        let id = self.next_handler;
        self.next_handler += 1;
        self.handlers.insert(id, Box::new(f));
        id
    }

    /// Registers a handler that runs inline when current reaches it; wire
    /// it into [`Runtime::circuit_mut`]. Setting the payload's `consumed`
    /// field stops the stages after it.
    pub fn register_filter(&mut self, f: impl FnMut(&mut Shell, &mut ChemSystem, &mut Control<'_>) + 'static) -> HandlerId {
        let id = self.next_handler;
        self.next_handler += 1;
        self.filters.insert(id, Box::new(f));
        id
    }

    /// Wires `handler` into the circuit directly in front of `stage`.
    /// Returns false when the stage is not in the circuit.
    pub fn splice_before(&mut self, stage: Stage, handler: HandlerId) -> Result<bool, CircuitError> {
        let c = &mut self.circuit;
        let Some(target) = c.nodes().find(|(_, k)| matches!(k, NodeKind::Handler { id, .. } if *id == stage.handler())).map(|(n, _)| n) else {
            return Ok(false);
        };
        let node = NodeId(c.nodes().map(|(n, _)| n.0).max().unwrap_or(0) + 1);
        let mut edits = vec![Edit::AddNode(node, NodeKind::handler(handler, 0))];
        for w in c.wires().iter().filter(|w| w.to == target) {
            edits.push(Edit::RemoveWire(w.from, target));
            edits.push(Edit::AddWire(w.from, node));
        }
        edits.push(Edit::AddWire(node, target));
        c.rewire(&edits).map(|()| true)
    }

    /// Runs `f` whenever a launch of `action` is delivered.
    pub fn on_launch(&mut self, action: u64, f: impl FnMut(&mut Shell) + 'static) {
        self.launchers.insert(action, Box::new(f));
    }

    pub fn spawn_task(&mut self, step: impl FnMut(&mut TaskCtx<'_>) -> TaskStep + 'static) -> TaskId {
        let id = TaskId(self.tasks.len() as u32 + 1);
        self.tasks.push(Task {
            id,
            state: TaskState::Runnable,
            step: Box::new(step),
        });
        id
    }

    pub fn task_state(&self, id: TaskId) -> Option<TaskState> {
        self.tasks.iter().find(|t| t.id == id).map(|t| t.state)
    }

    /// A sender other threads may use to feed input.
    pub fn handoff(&self) -> Sender<RawInputEvent> {
        self.tx.clone()
    }

    /// Queues an event, clamping its coordinates to the screen.
    pub fn post_event(&mut self, ev: RawInputEvent) {
        let s = self.shell.wm.screen();
        self.queue.push_back(RawInputEvent::new(ev.tick, ev.kind.clamped(s.w, s.h)));
        self.posted += 1;
    }

    pub fn posted(&self) -> u64 {
        self.posted
    }

    pub fn processed(&self) -> u64 {
        self.processed
    }

    pub fn pending(&self) -> usize {
        self.queue.len()
    }

    fn process(&mut self, ev: RawInputEvent) {
        let tick = self.clock.now();
        self.shell.begin_event(tick, ev.kind);
        let payload = ChemSystem::pack([("tick", Electron::Int(tick as i64)), ("consumed", Electron::Bool(false))]);
        let shell = &mut self.shell;
        let filters = &mut self.filters;
        let mut exec = |h: HandlerId, p: &mut ChemSystem, ctl: &mut Control<'_>| {
            if let Some(stage) = Stage::from_handler(h) {
                shell.stage(stage, p);
            } else if let Some(f) = filters.get_mut(&h) {
                f(shell, p, ctl);
            } else {
                shell.queue_call(Call {
                    handler: h,
                    topic: INPUT_EVENT.into(),
                    payload: p.clone(),
                });
            }
        };
        // the default circuit is valid; a user rewire that breaks it drops input
        let _ = self.circuit.inject_all(INPUT_EVENT, payload, &mut exec);
        self.shell.end_event();
        self.run_calls();
        self.processed += 1;
    }

    fn run_calls(&mut self) {
        for _ in 0..CALL_ROUNDS {
            let calls = self.shell.take_calls();
            let launches = self.shell.take_launches();
            if calls.is_empty() && launches.is_empty() {
                return;
            }
            for call in calls {
                if let Some(h) = self.handlers.get_mut(&call.handler) {
                    h(&mut self.shell, &call);
                }
            }
            for a in launches {
                if let Some(f) = self.launchers.get_mut(&a) {
                    f(&mut self.shell);
                }
            }
        }
    }

    /// One cycle: input, tasks, render, tick.
    pub fn pump(&mut self) -> StepReport {
        while let Ok(ev) = self.rx.try_recv() {
            self.post_event(ev);
        }
        let tick = self.clock.now();
        let batch: Vec<RawInputEvent> = self.queue.drain(..).collect();
        let events = batch.len();
        for ev in batch {
            self.process(ev);
        }

        let mut stepped = 0;
        let mut posted = Vec::new();
        for t in &mut self.tasks {
            if let TaskState::Sleeping(until) = t.state {
                if tick < until {
                    continue;
                }
                t.state = TaskState::Runnable;
            }
            if t.state != TaskState::Runnable {
                continue;
            }
            let mut ctx = TaskCtx {
                shell: &mut self.shell,
                tick,
                posted: &mut posted,
            };
            t.state = match (t.step)(&mut ctx) {
                TaskStep::Continue => TaskState::Runnable,
                TaskStep::Sleep(n) => TaskState::Sleeping(tick + 1 + n),
                TaskStep::Done => TaskState::Done,
            };
            stepped += 1;
        }
        for ev in posted {
            self.post_event(ev);
        }
        self.run_calls();

        let recomposed = self.shell.compose();
        self.clock.advance();
        StepReport {
            tick,
            events,
            tasks: stepped,
            recomposed,
            hash: recomposed.then(|| self.shell.hash()),
        }
    }

    /// Feeds a script at its ticks, pumping until it is exhausted and the
    /// queue is empty. Returns every pump's report.
    pub fn run_reports(&mut self, script: &Script) -> Vec<StepReport> {
        let mut reports = Vec::new();
        self.run_observed(script, |_, r| reports.push(*r));
        reports
    }

    /// Like [`Runtime::run_reports`], handing each pump's report and the
    /// shell it left behind to `observe`.
    pub fn run_observed(&mut self, script: &Script, mut observe: impl FnMut(&Shell, &StepReport)) {
        let mut events = script.events.iter().peekable();
        while events.peek().is_some() || !self.queue.is_empty() {
            let now = self.clock.now();
            while let Some(ev) = events.next_if(|e| e.tick <= now) {
                self.post_event(*ev);
            }
            let report = self.pump();
            observe(&self.shell, &report);
        }
    }

    /// Runs a script, returning the frame hash after each recomposition.
    pub fn run_script(&mut self, script: &Script) -> Vec<u64> {
        self.run_reports(script).into_iter().filter_map(|r| r.hash).collect()
    }

    /// Parses, then runs, a script; nothing is pumped on a parse error.
    pub fn run_script_text(&mut self, text: &str) -> Result<Vec<u64>, ScriptError> {
        let script = Script::parse(text)?;
        Ok(self.run_script(&script))
    }
}
