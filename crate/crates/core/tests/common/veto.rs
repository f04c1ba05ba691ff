//! Reference evaluator and scenario generators for the veto bus.

use groundup::chemical::{ChemSystem, Electron};
use groundup::veto::{Action, Bus, Intercept, LogAction, Message, Outcome, ParticipantId, Ruling};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Act {
    Pass,
    Append(i64),
    Veto,
}

#[derive(Debug, Clone)]
pub struct Member {
    pub power: u8,
    pub priority: i32,
    pub act: Act,
}

#[derive(Debug, Clone)]
pub struct Scenario {
    pub members: Vec<Member>,
    pub listeners: usize,
    pub strength: u8,
}

fn append(payload: &ChemSystem, token: i64) -> ChemSystem {
    let mut p = payload.clone();
    let mut l = p.arg("tokens").as_list().map(<[Electron]>::to_vec).unwrap_or_default();
    l.push(Electron::Int(token));
    p.set_arg("tokens", Electron::List(l));
    p
}

pub fn random_scenario(rng: &mut ChaCha8Rng) -> Scenario {
    let members = (0..rng.random_range(0..=6))
        .map(|_| Member {
            power: rng.random(),
            priority: rng.random_range(-3..=3),
            act: match rng.random_range(0..3) {
                0 => Act::Pass,
                1 => Act::Append(rng.random_range(0..100)),
                _ => Act::Veto,
            },
        })
        .collect();
    Scenario {
        members,
        listeners: rng.random_range(0..3),
        strength: rng.random(),
    }
}

pub fn build_bus(s: &Scenario) -> Bus {
    let mut bus = Bus::new();
    for (i, m) in s.members.iter().enumerate() {
        let act = m.act;
        let id = bus.register_with(
            &format!("m{i}"),
            m.power,
            Intercept(move |msg: &Message| match act {
                Act::Pass => Action::Pass,
                Act::Append(t) => Action::Modify(append(&msg.payload, t)),
                Act::Veto => Action::Veto,
            }),
        );
        bus.subscribe(id, "topic", m.priority).unwrap();
    }
    for i in 0..s.listeners {
        let id = bus.register(&format!("l{i}"), 0);
        bus.listen(id, "topic").unwrap();
    }
    bus
}

/// Straight-line evaluation of the rules: stable sort by descending
/// priority, then walk until an effective veto.
pub fn evaluate(s: &Scenario, payload: &ChemSystem) -> Ruling {
    let mut order: Vec<usize> = (0..s.members.len()).collect();
    // insertion sort keeps ties in subscription order
    for i in 1..order.len() {
        let mut j = i;
        while j > 0 && s.members[order[j - 1]].priority < s.members[order[j]].priority {
            order.swap(j - 1, j);
            j -= 1;
        }
    }
    let mut payload = payload.clone();
    let mut log = Vec::new();
    for (step, &i) in order.iter().enumerate() {
        let pid = ParticipantId(i as u32 + 1);
        let m = &s.members[i];
        match m.act {
            Act::Pass => log.push((pid, LogAction::Pass)),
            Act::Append(t) => {
                payload = append(&payload, t);
                log.push((pid, LogAction::Modify));
            }
            Act::Veto => {
                if m.power >= s.strength {
                    log.push((pid, LogAction::Veto));
                    return Ruling {
                        outcome: Outcome::Vetoed { by: pid, step },
                        log,
                    };
                }
                log.push((pid, LogAction::AttemptedVeto));
            }
        }
    }
    let first_listener = s.members.len() as u32 + 1;
    Ruling {
        outcome: Outcome::Delivered {
            payload,
            recipients: (0..s.listeners as u32).map(|i| ParticipantId(first_listener + i)).collect(),
        },
        log,
    }
}

pub enum Scripted {
    Send(&'static str, u8, ChemSystem),
    /// Raw bytes and the error reason they must provoke.
    Raw(&'static str, &'static str),
}

impl Scripted {
    pub fn wire(&self) -> String {
        match self {
            Scripted::Send(t, s, p) => groundup::veto::wire::encode_request(t, *s, p),
            Scripted::Raw(text, _) => text.to_string(),
        }
    }
}

/// A fixed 20-request session for the demo bus, including malformed input.
pub fn scripted_session() -> Vec<Scripted> {
    use Scripted::*;
    let p = |fields: &[(&str, Electron)]| ChemSystem::pack(fields.iter().cloned());
    vec![
        Send("ping", 1, ChemSystem::new()),
        Send("chat", 10, p(&[("text", "hello".into())])),
        Send("chat", 10, p(&[("text", "a secret plan".into())])),
        Send("chat", 121, p(&[("text", "another secret".into())])),
        Send("shutdown", 200, ChemSystem::new()),
        Send("shutdown", 201, ChemSystem::new()),
        Raw("garbage line\n", "parse"),
        Send("note.1", 0, p(&[("deny", true.into())])),
        Send("note.2", 1, p(&[("deny", true.into())])),
        Send("note.3", 5, p(&[("stamps", 41.into())])),
        Raw("SEND broken 999\n0:\n", "strength"),
        Send("void", 3, ChemSystem::new()),
        Send("chat", 255, p(&[("text", "multi\nline secret".into())])),
        Raw("SEND x 1\n4:ATOM\n", "payload"),
        Send("note.x", 9, p(&[("list", vec![Electron::Int(1), Electron::Null].into())])),
        Raw("\n", "parse"),
        Send("chat", 75, p(&[("text", "ok".into()), ("deny", false.into())])),
        Send("shutdown", 255, p(&[("why", "tests".into())])),
        Send("ping", 0, p(&[("blob", Electron::Blob(vec![0, 255, 16]))])),
        Send("note.last", 100, ChemSystem::new()),
    ]
}

/// The transcript obtained by calling `send` directly for each request.
pub fn direct_transcript(bus: &mut Bus, script: &[Scripted]) -> String {
    use groundup::veto::wire::encode_ruling;
    let mut out = String::new();
    for item in script {
        match item {
            Scripted::Send(t, s, p) => out += &encode_ruling(&bus.send(Message::new(*t, p.clone(), *s)).unwrap()),
            Scripted::Raw(_, reason) => out += &format!("ERR {reason}\n"),
        }
    }
    out
}
