use std::cmp::Ordering;

use super::{Atom, Electron};

/// Glob over atom names: `*` matches any run, `?` one character.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NamePattern(String);

impl NamePattern {
    pub fn new(pattern: &str) -> Self {
        NamePattern(pattern.to_owned())
    }

    pub fn any() -> Self {
        NamePattern("*".into())
    }

    pub fn matches(&self, name: &str) -> bool {
        glob(&self.0.chars().collect::<Vec<_>>(), &name.chars().collect::<Vec<_>>())
    }
}

impl From<&str> for NamePattern {
    fn from(s: &str) -> Self {
        NamePattern::new(s)
    }
}

fn glob(p: &[char], s: &[char]) -> bool {
    // iterative with single backtrack point
    let (mut pi, mut si) = (0, 0);
    let mut star: Option<(usize, usize)> = None;
    while si < s.len() {
        if pi < p.len() && (p[pi] == '?' || p[pi] == s[si]) {
            pi += 1;
            si += 1;
        } else if pi < p.len() && p[pi] == '*' {
            star = Some((pi, si));
            pi += 1;
        } else if let Some((sp, ss)) = star {
            pi = sp + 1;
            si = ss + 1;
            star = Some((sp, ss + 1));
        } else {
            return false;
        }
    }
    p[pi..].iter().all(|&c| c == '*')
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Cmp {
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
}

/// One field comparison. Missing fields read as null; ordering comparisons
/// are false unless both sides are numbers or both are text.
#[derive(Debug, Clone, PartialEq)]
pub struct Condition {
    pub field: String,
    pub cmp: Cmp,
    pub value: Electron,
}

impl Condition {
    pub fn holds(&self, atom: &Atom) -> bool {
        let lhs = atom.get(&self.field);
        match self.cmp {
            Cmp::Eq => loose_eq(lhs, &self.value),
            Cmp::Ne => !loose_eq(lhs, &self.value),
            Cmp::Lt => order(lhs, &self.value) == Some(Ordering::Less),
            Cmp::Le => matches!(order(lhs, &self.value), Some(Ordering::Less | Ordering::Equal)),
            Cmp::Gt => order(lhs, &self.value) == Some(Ordering::Greater),
            Cmp::Ge => matches!(order(lhs, &self.value), Some(Ordering::Greater | Ordering::Equal)),
        }
    }
}

fn numeric(e: &Electron) -> Option<f64> {
    match e {
        Electron::Int(v) => Some(*v as f64),
        Electron::Real(v) => Some(*v),
        _ => None,
    }
}

fn loose_eq(a: &Electron, b: &Electron) -> bool {
    match (a, b) {
        (Electron::Int(x), Electron::Int(y)) => x == y,
        _ => match (numeric(a), numeric(b)) {
            (Some(x), Some(y)) => x == y,
            _ => a == b,
        },
    }
}

fn order(a: &Electron, b: &Electron) -> Option<Ordering> {
    match (a, b) {
        (Electron::Int(x), Electron::Int(y)) => Some(x.cmp(y)),
        (Electron::Text(x), Electron::Text(y)) => Some(x.cmp(y)),
        _ => numeric(a)?.partial_cmp(&numeric(b)?),
    }
}

/// A name pattern plus a conjunction of field conditions.
#[derive(Debug, Clone, PartialEq)]
pub struct Query {
    pub name: NamePattern,
    pub conditions: Vec<Condition>,
}

impl Query {
    pub fn named(pattern: &str) -> Self {
        Query {
            name: NamePattern::new(pattern),
            conditions: Vec::new(),
        }
    }

    pub fn and(mut self, field: &str, cmp: Cmp, value: impl Into<Electron>) -> Self {
        self.conditions.push(Condition {
            field: field.to_owned(),
            cmp,
            value: value.into(),
        });
        self
    }

    pub fn matches(&self, atom: &Atom) -> bool {
        self.conditions.iter().all(|c| c.holds(atom))
    }
}
