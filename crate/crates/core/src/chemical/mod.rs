//! The chemical system: a schemaless container of named records ("atoms")
//! holding typed values ("electrons") and directed, ordered links ("bonds").
//!
//! One structure serves four roles:
//!
//! * a relational-style store: atoms sharing a name are rows, queried with
//!   [`ChemSystem::select`] and changed with [`ChemSystem::update`] /
//!   [`ChemSystem::delete`];
//! * a message queue: [`ChemSystem::enqueue`] / [`ChemSystem::dequeue`] are
//!   strict FIFO per queue name;
//! * an event registry: [`ChemSystem::bind_handler`] /
//!   [`ChemSystem::handlers_for`] map event names to opaque handler ids;
//! * an argument pack: [`ChemSystem::pack`] builds a single `args` atom.
//!
//! Everything round-trips through a line-oriented text format; see
//! [`ChemSystem::serialize`].

mod query;
mod text;

use std::fmt;

use indexmap::IndexMap;
use thiserror::Error;

pub use query::{Cmp, Condition, NamePattern, Query};
pub use text::ParseError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AtomId(pub u64);

impl fmt::Display for AtomId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Opaque handler identifier. The store only routes; it never holds code.
pub type HandlerId = u64;

/// A tagged value.
#[derive(Debug, Clone)]
pub enum Electron {
    Null,
    Bool(bool),
    Int(i64),
    Real(f64),
    Text(String),
    Blob(Vec<u8>),
    List(Vec<Electron>),
    AtomRef(AtomId),
}

impl PartialEq for Electron {
    fn eq(&self, other: &Self) -> bool {
        use Electron::*;
        match (self, other) {
            (Null, Null) => true,
            (Bool(a), Bool(b)) => a == b,
            (Int(a), Int(b)) => a == b,
            // bitwise, so NaN payloads and signed zeros survive round trips
            (Real(a), Real(b)) => a.to_bits() == b.to_bits(),
            (Text(a), Text(b)) => a == b,
            (Blob(a), Blob(b)) => a == b,
            (List(a), List(b)) => a == b,
            (AtomRef(a), AtomRef(b)) => a == b,
            _ => false,
        }
    }
}

impl Electron {
    pub fn tag(&self) -> &'static str {
        match self {
            Electron::Null => "null",
            Electron::Bool(_) => "bool",
            Electron::Int(_) => "int",
            Electron::Real(_) => "real",
            Electron::Text(_) => "text",
            Electron::Blob(_) => "blob",
            Electron::List(_) => "list",
            Electron::AtomRef(_) => "ref",
        }
    }

    pub fn as_int(&self) -> Option<i64> {
        match self {
            Electron::Int(v) => Some(*v),
            _ => None,
        }
    }

    pub fn as_bool(&self) -> Option<bool> {
        match self {
            Electron::Bool(v) => Some(*v),
            _ => None,
        }
    }

    pub fn as_text(&self) -> Option<&str> {
        match self {
            Electron::Text(s) => Some(s),
            _ => None,
        }
    }

    pub fn as_list(&self) -> Option<&[Electron]> {
        match self {
            Electron::List(v) => Some(v),
            _ => None,
        }
    }

    pub fn is_null(&self) -> bool {
        matches!(self, Electron::Null)
    }
}

impl From<bool> for Electron {
    fn from(v: bool) -> Self {
        Electron::Bool(v)
    }
}

impl From<i64> for Electron {
    fn from(v: i64) -> Self {
        Electron::Int(v)
    }
}

impl From<i32> for Electron {
    fn from(v: i32) -> Self {
        Electron::Int(v as i64)
    }
}

impl From<u32> for Electron {
    fn from(v: u32) -> Self {
        Electron::Int(v as i64)
    }
}

impl From<u64> for Electron {
    fn from(v: u64) -> Self {
        Electron::Int(v as i64)
    }
}

impl From<f64> for Electron {
    fn from(v: f64) -> Self {
        Electron::Real(v)
    }
}

impl From<&str> for Electron {
    fn from(v: &str) -> Self {
        Electron::Text(v.to_owned())
    }
}

impl From<String> for Electron {
    fn from(v: String) -> Self {
        Electron::Text(v)
    }
}

impl From<Vec<Electron>> for Electron {
    fn from(v: Vec<Electron>) -> Self {
        Electron::List(v)
    }
}

impl From<AtomId> for Electron {
    fn from(v: AtomId) -> Self {
        Electron::AtomRef(v)
    }
}

static NULL: Electron = Electron::Null;

/// A named record of electrons with outgoing bonds.
#[derive(Debug, Clone, PartialEq)]
pub struct Atom {
    id: AtomId,
    name: String,
    electrons: IndexMap<String, Electron>,
    bonds: Vec<AtomId>,
}

impl Atom {
    pub fn id(&self) -> AtomId {
        self.id
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Field value; absent fields read as `Null`.
    pub fn get(&self, field: &str) -> &Electron {
        self.electrons.get(field).unwrap_or(&NULL)
    }

    pub fn has(&self, field: &str) -> bool {
        self.electrons.contains_key(field)
    }

    /// Fields in insertion order.
    pub fn fields(&self) -> impl Iterator<Item = (&str, &Electron)> {
        self.electrons.iter().map(|(k, v)| (k.as_str(), v))
    }

    pub fn bonds(&self) -> &[AtomId] {
        &self.bonds
    }

    /// Sets a field, keeping the original position when it already exists.
    pub fn set(&mut self, field: impl Into<String>, value: Electron) {
        self.electrons.insert(field.into(), value);
    }

    pub fn remove_field(&mut self, field: &str) -> Option<Electron> {
        self.electrons.shift_remove(field)
    }

    fn order_eq(&self, other: &Atom) -> bool {
        self.id == other.id
            && self.name == other.name
            && self.bonds == other.bonds
            && self.electrons.len() == other.electrons.len()
            && self.electrons.iter().zip(other.electrons.iter()).all(|(a, b)| a == b)
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ChemError {
    #[error("atom {0} not found")]
    NotFound(AtomId),
}

const BINDING: &str = "binding";
const ARGS: &str = "args";

/// The chemical system container.
#[derive(Debug, Clone)]
pub struct ChemSystem {
    atoms: IndexMap<AtomId, Atom>,
    next_id: u64,
}

impl Default for ChemSystem {
    fn default() -> Self {
        Self::new()
    }
}

/// Observational equality: same atoms, fields, bonds, and insertion order.
/// The id counter is not observable and is ignored.
impl PartialEq for ChemSystem {
    fn eq(&self, other: &Self) -> bool {
        self.atoms.len() == other.atoms.len()
            && self.atoms.values().zip(other.atoms.values()).all(|(a, b)| a.order_eq(b))
    }
}

impl ChemSystem {
    pub fn new() -> Self {
        Self {
            atoms: IndexMap::new(),
            next_id: 1,
        }
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    /// Atoms in insertion order.
    pub fn atoms(&self) -> impl Iterator<Item = &Atom> {
        self.atoms.values()
    }

    pub fn atom(&self, id: AtomId) -> Option<&Atom> {
        self.atoms.get(&id)
    }

    pub fn atom_mut(&mut self, id: AtomId) -> Option<&mut Atom> {
        self.atoms.get_mut(&id)
    }

    pub fn contains(&self, id: AtomId) -> bool {
        self.atoms.contains_key(&id)
    }

    pub fn add_atom<K, I>(&mut self, name: &str, fields: I) -> AtomId
    where
        K: Into<String>,
        I: IntoIterator<Item = (K, Electron)>,
    {
        let id = AtomId(self.next_id);
        self.next_id += 1;
        self.insert_with_id(id, name.to_owned(), fields.into_iter().map(|(k, v)| (k.into(), v)).collect());
        id
    }

    fn insert_with_id(&mut self, id: AtomId, name: String, electrons: IndexMap<String, Electron>) {
        self.next_id = self.next_id.max(id.0 + 1);
        self.atoms.insert(
            id,
            Atom {
                id,
                name,
                electrons,
                bonds: Vec::new(),
            },
        );
    }

    /// Removes an atom and every bond pointing at it.
    pub fn remove_atom(&mut self, id: AtomId) -> Result<Atom, ChemError> {
        let atom = self.atoms.shift_remove(&id).ok_or(ChemError::NotFound(id))?;
        for other in self.atoms.values_mut() {
            other.bonds.retain(|&b| b != id);
        }
        Ok(atom)
    }

    /// Appends a directed bond `from -> to`.
    pub fn bond(&mut self, from: AtomId, to: AtomId) -> Result<(), ChemError> {
        if !self.atoms.contains_key(&to) {
            return Err(ChemError::NotFound(to));
        }
        self.atoms.get_mut(&from).ok_or(ChemError::NotFound(from))?.bonds.push(to);
        Ok(())
    }

    /// Removes the first bond `from -> to`; returns whether one existed.
    pub fn unbond(&mut self, from: AtomId, to: AtomId) -> Result<bool, ChemError> {
        let atom = self.atoms.get_mut(&from).ok_or(ChemError::NotFound(from))?;
        Ok(match atom.bonds.iter().position(|&b| b == to) {
            Some(i) => {
                atom.bonds.remove(i);
                true
            }
            None => false,
        })
    }

    /// Ids of atoms matching `name` and `pred`, in insertion order.
    pub fn select<F>(&self, name: &NamePattern, pred: F) -> Vec<AtomId>
    where
        F: Fn(&Atom) -> bool,
    {
        self.atoms
            .values()
            .filter(|a| name.matches(&a.name) && pred(a))
            .map(|a| a.id)
            .collect()
    }

    /// Runs a declarative query.
    pub fn query(&self, q: &Query) -> Vec<AtomId> {
        self.select(&q.name, |a| q.matches(a))
    }

    /// Sets `field` on every selected atom; returns how many were touched.
    pub fn update(&mut self, selection: &[AtomId], field: &str, value: Electron) -> usize {
        let mut n = 0;
        for id in selection {
            if let Some(a) = self.atoms.get_mut(id) {
                a.set(field, value.clone());
                n += 1;
            }
        }
        n
    }

    /// Removes every selected atom (with bond cleanup); returns how many existed.
    pub fn delete(&mut self, selection: &[AtomId]) -> usize {
        selection.iter().filter(|&&id| self.remove_atom(id).is_ok()).count()
    }

    pub fn enqueue<K, I>(&mut self, queue: &str, payload: I) -> AtomId
    where
        K: Into<String>,
        I: IntoIterator<Item = (K, Electron)>,
    {
        self.add_atom(queue, payload)
    }

    /// Removes and returns the oldest atom of `queue`.
    pub fn dequeue(&mut self, queue: &str) -> Option<Atom> {
        let id = self.atoms.values().find(|a| a.name == queue)?.id;
        self.remove_atom(id).ok()
    }

    pub fn queue_len(&self, queue: &str) -> usize {
        self.atoms.values().filter(|a| a.name == queue).count()
    }

    /// Appends a binding; duplicates are kept and fire once per binding.
    pub fn bind_handler(&mut self, event: &str, handler: HandlerId) -> AtomId {
        self.add_atom(
            BINDING,
            [("event", Electron::from(event)), ("handler", Electron::Int(handler as i64))],
        )
    }

    /// Removes the earliest binding of `handler` to `event`.
    pub fn unbind_handler(&mut self, event: &str, handler: HandlerId) -> bool {
        let found = self
            .atoms
            .values()
            .find(|a| {
                a.name == BINDING
                    && a.get("event").as_text() == Some(event)
                    && a.get("handler").as_int() == Some(handler as i64)
            })
            .map(|a| a.id);
        match found {
            Some(id) => self.remove_atom(id).is_ok(),
            None => false,
        }
    }

    /// Handlers bound to `event`, in binding order.
    pub fn handlers_for(&self, event: &str) -> Vec<HandlerId> {
        self.atoms
            .values()
            .filter(|a| a.name == BINDING && a.get("event").as_text() == Some(event))
            .filter_map(|a| a.get("handler").as_int())
            .map(|h| h as HandlerId)
            .collect()
    }

    /// A single-atom argument pack.
    pub fn pack<K, I>(fields: I) -> Self
    where
        K: Into<String>,
        I: IntoIterator<Item = (K, Electron)>,
    {
        let mut sys = ChemSystem::new();
        sys.add_atom(ARGS, fields);
        sys
    }

    /// Reads a field of the first `args` atom.
    pub fn arg(&self, field: &str) -> &Electron {
        self.atoms
            .values()
            .find(|a| a.name == ARGS)
            .map(|a| a.get(field))
            .unwrap_or(&NULL)
    }

    /// Writes a field of the first `args` atom, creating it when missing.
    pub fn set_arg(&mut self, field: &str, value: Electron) {
        let id = match self.atoms.values().find(|a| a.name == ARGS) {
            Some(a) => a.id,
            None => self.add_atom::<String, _>(ARGS, []),
        };
        if let Some(a) = self.atoms.get_mut(&id) {
            a.set(field, value);
        }
    }

    pub fn serialize(&self) -> String {
        text::serialize(self)
    }

    pub fn deserialize(input: &str) -> Result<Self, ParseError> {
        text::deserialize(input)
    }
}
