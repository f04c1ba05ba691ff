//! The veto message bus: priority-ordered interception where an interceptor
//! may block a message only if its power meets the message's strength.
//!
//! Participants register with a fixed power (0–255). They subscribe to topic
//! patterns either as interceptors, which see a message in descending
//! priority order and may pass, modify or veto it, or as listeners, which
//! receive the final payload once nobody effectively vetoed it. A veto from a
//! participant whose power is below the message strength is recorded as
//! [`LogAction::AttemptedVeto`] and otherwise treated as a pass.
//!
//! The [`wire`] submodule exposes the bus to other processes over a
//! line-oriented protocol.

pub mod wire;

use std::collections::VecDeque;
use std::fmt;

use thiserror::Error;

use crate::chemical::{ChemSystem, Electron, NamePattern};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ParticipantId(pub u32);

impl fmt::Display for ParticipantId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Message {
    pub topic: String,
    pub payload: ChemSystem,
    pub strength: u8,
    pub sender: Option<ParticipantId>,
}

impl Message {
    pub fn new(topic: impl Into<String>, payload: ChemSystem, strength: u8) -> Self {
        Message {
            topic: topic.into(),
            payload,
            strength,
            sender: None,
        }
    }

    pub fn from_sender(mut self, sender: ParticipantId) -> Self {
        self.sender = Some(sender);
        self
    }
}

/// An interceptor's answer.
#[derive(Debug, Clone, PartialEq)]
pub enum Action {
    Pass,
    Modify(ChemSystem),
    Veto,
}

/// How a participant reacts to traffic. Both methods default to doing nothing.
pub trait Behavior {
    fn intercept(&mut self, _msg: &Message) -> Action {
        Action::Pass
    }

    fn deliver(&mut self, _topic: &str, _payload: &ChemSystem) {}
}

/// Adapts an interception closure into a [`Behavior`].
pub struct Intercept<F>(pub F);

impl<F: FnMut(&Message) -> Action> Behavior for Intercept<F> {
    fn intercept(&mut self, msg: &Message) -> Action {
        (self.0)(msg)
    }
}

/// Adapts a delivery closure into a [`Behavior`].
pub struct Deliver<F>(pub F);

impl<F: FnMut(&str, &ChemSystem)> Behavior for Deliver<F> {
    fn deliver(&mut self, topic: &str, payload: &ChemSystem) {
        (self.0)(topic, payload)
    }
}

struct Passive;

impl Behavior for Passive {}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LogAction {
    Pass,
    Modify,
    Veto,
    /// A veto from a participant too weak for the message strength.
    AttemptedVeto,
}

impl LogAction {
    pub fn as_str(self) -> &'static str {
        match self {
            LogAction::Pass => "pass",
            LogAction::Modify => "modify",
            LogAction::Veto => "veto",
            LogAction::AttemptedVeto => "attempted-veto",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "pass" => LogAction::Pass,
            "modify" => LogAction::Modify,
            "veto" => LogAction::Veto,
            "attempted-veto" => LogAction::AttemptedVeto,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Outcome {
    Delivered {
        payload: ChemSystem,
        recipients: Vec<ParticipantId>,
    },
    Vetoed {
        by: ParticipantId,
        /// Index into the interception log.
        step: usize,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Ruling {
    pub outcome: Outcome,
    pub log: Vec<(ParticipantId, LogAction)>,
}

impl Ruling {
    pub fn is_vetoed(&self) -> bool {
        matches!(self.outcome, Outcome::Vetoed { .. })
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum VetoError {
    #[error("unknown participant {0}")]
    UnknownParticipant(ParticipantId),
    #[error("message topic is empty")]
    EmptyTopic,
}

/// One line of bus history.
#[derive(Debug, Clone, PartialEq)]
pub struct Record {
    pub topic: String,
    pub strength: u8,
    pub vetoed_by: Option<ParticipantId>,
    pub recipients: usize,
}

struct Participant {
    name: String,
    power: u8,
    behavior: Box<dyn Behavior>,
}

struct Subscription {
    participant: ParticipantId,
    topic: NamePattern,
    priority: i32,
}

const HISTORY_LIMIT: usize = 256;

#[derive(Default)]
pub struct Bus {
    participants: Vec<Participant>,
    interceptors: Vec<Subscription>,
    listeners: Vec<Subscription>,
    history: VecDeque<Record>,
}

impl fmt::Debug for Bus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Bus")
            .field("participants", &self.participants.len())
            .field("interceptors", &self.interceptors.len())
            .field("listeners", &self.listeners.len())
            .finish()
    }
}

impl Bus {
    pub fn new() -> Self {
        Self::default()
    }

    /// Registers a participant that passes everything.
    pub fn register(&mut self, name: &str, power: u8) -> ParticipantId {
        self.register_with(name, power, Passive)
    }

    pub fn register_with(&mut self, name: &str, power: u8, behavior: impl Behavior + 'static) -> ParticipantId {
        self.participants.push(Participant {
            name: name.to_owned(),
            power,
            behavior: Box::new(behavior),
        });
        ParticipantId(self.participants.len() as u32)
    }

    pub fn set_behavior(&mut self, id: ParticipantId, behavior: impl Behavior + 'static) -> Result<(), VetoError> {
        self.participant_mut(id)?.behavior = Box::new(behavior);
        Ok(())
    }

    fn participant_mut(&mut self, id: ParticipantId) -> Result<&mut Participant, VetoError> {
        (id.0 as usize)
            .checked_sub(1)
            .and_then(|i| self.participants.get_mut(i))
            .ok_or(VetoError::UnknownParticipant(id))
    }

    fn participant(&self, id: ParticipantId) -> Result<&Participant, VetoError> {
        (id.0 as usize)
            .checked_sub(1)
            .and_then(|i| self.participants.get(i))
            .ok_or(VetoError::UnknownParticipant(id))
    }

    pub fn name(&self, id: ParticipantId) -> Result<&str, VetoError> {
        Ok(&self.participant(id)?.name)
    }

    pub fn power(&self, id: ParticipantId) -> Result<u8, VetoError> {
        Ok(self.participant(id)?.power)
    }

    pub fn len(&self) -> usize {
        self.participants.len()
    }

    pub fn is_empty(&self) -> bool {
        self.participants.is_empty()
    }

    /// Subscribes as an interceptor on topics matching `topic` (a glob).
    pub fn subscribe(&mut self, id: ParticipantId, topic: &str, priority: i32) -> Result<(), VetoError> {
        self.participant(id)?;
        self.interceptors.push(Subscription {
            participant: id,
            topic: NamePattern::new(topic),
            priority,
        });
        Ok(())
    }

    /// Subscribes as a listener receiving delivered payloads.
    pub fn listen(&mut self, id: ParticipantId, topic: &str) -> Result<(), VetoError> {
        self.participant(id)?;
        self.listeners.push(Subscription {
            participant: id,
            topic: NamePattern::new(topic),
            priority: 0,
        });
        Ok(())
    }

    /// Drops every subscription of `id` whose pattern is exactly `topic`.
    pub fn unsubscribe(&mut self, id: ParticipantId, topic: &str) {
        let pat = NamePattern::new(topic);
        self.interceptors.retain(|s| s.participant != id || s.topic != pat);
        self.listeners.retain(|s| s.participant != id || s.topic != pat);
    }

    /// Interceptors for `topic`: descending priority, then subscription order.
    pub fn interceptors_for(&self, topic: &str) -> Vec<ParticipantId> {
        let mut subs: Vec<&Subscription> = self.interceptors.iter().filter(|s| s.topic.matches(topic)).collect();
        subs.sort_by_key(|s| std::cmp::Reverse(s.priority));
        subs.iter().map(|s| s.participant).collect()
    }

    pub fn listeners_for(&self, topic: &str) -> Vec<ParticipantId> {
        self.listeners.iter().filter(|s| s.topic.matches(topic)).map(|s| s.participant).collect()
    }

    pub fn has_subscribers(&self, topic: &str) -> bool {
        self.interceptors.iter().chain(&self.listeners).any(|s| s.topic.matches(topic))
    }

    pub fn send(&mut self, mut msg: Message) -> Result<Ruling, VetoError> {
        if msg.topic.is_empty() {
            return Err(VetoError::EmptyTopic);
        }
        if let Some(s) = msg.sender {
            self.participant(s)?;
        }
        let mut log = Vec::new();
        let mut outcome = None;
        for pid in self.interceptors_for(&msg.topic) {
            let p = self.participant_mut(pid)?;
            let action = p.behavior.intercept(&msg);
            let step = log.len();
            match action {
                Action::Pass => log.push((pid, LogAction::Pass)),
                Action::Modify(payload) => {
                    msg.payload = payload;
                    log.push((pid, LogAction::Modify));
                }
                Action::Veto if p.power >= msg.strength => {
                    log.push((pid, LogAction::Veto));
                    outcome = Some(Outcome::Vetoed { by: pid, step });
                    break;
                }
                Action::Veto => log.push((pid, LogAction::AttemptedVeto)),
            }
        }
        let outcome = match outcome {
            Some(o) => o,
            None => {
                let recipients = self.listeners_for(&msg.topic);
                for &pid in &recipients {
                    self.participant_mut(pid)?.behavior.deliver(&msg.topic, &msg.payload);
                }
                Outcome::Delivered {
                    payload: msg.payload,
                    recipients,
                }
            }
        };
        if self.history.len() == HISTORY_LIMIT {
            self.history.pop_front();
        }
        self.history.push_back(Record {
            topic: msg.topic,
            strength: msg.strength,
            vetoed_by: match outcome {
                Outcome::Vetoed { by, .. } => Some(by),
                _ => None,
            },
            recipients: match &outcome {
                Outcome::Delivered { recipients, .. } => recipients.len(),
                _ => 0,
            },
        });
        Ok(Ruling { outcome, log })
    }

    /// The most recent rulings, oldest first (bounded).
    pub fn history(&self) -> impl Iterator<Item = &Record> {
        self.history.iter()
    }
}

/// The bus served by the command-line `serve` subcommand:
///
/// * `guard` (power 200, priority 100, all topics) vetoes `shutdown`;
/// * `censor` (power 120, priority 75, `chat`) vetoes payloads whose `text`
///   argument contains `secret`;
/// * `stamper` (power 50, priority 50, all topics) increments the `stamps`
///   argument;
/// * `logger` (power 0, priority 10, all topics) tries to veto payloads with a
///   true `deny` argument, which only succeeds at strength 0;
/// * `sink` listens on `chat` and `note.*`.
pub fn demo_bus() -> Bus {
    let mut bus = Bus::new();
    let guard = bus.register_with(
        "guard",
        200,
        Intercept(|m: &Message| if m.topic == "shutdown" { Action::Veto } else { Action::Pass }),
    );
    let censor = bus.register_with(
        "censor",
        120,
        Intercept(|m: &Message| match m.payload.arg("text").as_text() {
            Some(t) if t.contains("secret") => Action::Veto,
            _ => Action::Pass,
        }),
    );
    let stamper = bus.register_with(
        "stamper",
        50,
        Intercept(|m: &Message| {
            let mut p = m.payload.clone();
            let n = p.arg("stamps").as_int().unwrap_or(0);
            p.set_arg("stamps", Electron::Int(n + 1));
            Action::Modify(p)
        }),
    );
    let logger = bus.register_with(
        "logger",
        0,
        Intercept(|m: &Message| if m.payload.arg("deny").as_bool() == Some(true) { Action::Veto } else { Action::Pass }),
    );
    let sink = bus.register("sink", 0);
    // subscription errors are impossible for freshly registered ids
    bus.subscribe(guard, "*", 100).unwrap();
    bus.subscribe(censor, "chat", 75).unwrap();
    bus.subscribe(stamper, "*", 50).unwrap();
    bus.subscribe(logger, "*", 10).unwrap();
    bus.listen(sink, "chat").unwrap();
    bus.listen(sink, "note.*").unwrap();
    bus
}
