//! Naive reference models for the chemical store.

use std::collections::{BTreeMap, VecDeque};

use groundup::chemical::{AtomId, ChemSystem, Cmp, Electron, Query};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Replays an op log against plain adjacency lists.
#[derive(Default, Debug)]
pub struct BondOracle {
    pub live: Vec<u64>,
    pub adj: BTreeMap<u64, Vec<u64>>,
}

#[derive(Debug, Clone)]
pub enum GraphOp {
    Add,
    Remove(usize),
    Bond(usize, usize),
}

/// Runs `n` seeded ops on both the store and the oracle, returning both.
pub fn graph_session(rng: &mut ChaCha8Rng, n: usize) -> (ChemSystem, BondOracle) {
    let mut sys = ChemSystem::new();
    let mut oracle = BondOracle::default();
    let mut next = 1u64;
    for _ in 0..n {
        let op = match rng.random_range(0..10) {
            0..=3 => GraphOp::Add,
            4..=5 => GraphOp::Remove(rng.random_range(0..64)),
            _ => GraphOp::Bond(rng.random_range(0..64), rng.random_range(0..64)),
        };
        match op {
            GraphOp::Add => {
                let id = sys.add_atom::<&str, _>("node", []);
                assert_eq!(id, AtomId(next));
                oracle.live.push(next);
                oracle.adj.insert(next, Vec::new());
                next += 1;
            }
            GraphOp::Remove(i) => {
                if oracle.live.is_empty() {
                    assert!(sys.remove_atom(AtomId(next + 100)).is_err());
                    continue;
                }
                let id = oracle.live.remove(i % oracle.live.len());
                oracle.adj.remove(&id);
                for list in oracle.adj.values_mut() {
                    list.retain(|&t| t != id);
                }
                sys.remove_atom(AtomId(id)).unwrap();
            }
            GraphOp::Bond(a, b) => {
                if oracle.live.is_empty() {
                    continue;
                }
                let from = oracle.live[a % oracle.live.len()];
                let to = oracle.live[b % oracle.live.len()];
                oracle.adj.get_mut(&from).unwrap().push(to);
                sys.bond(AtomId(from), AtomId(to)).unwrap();
            }
        }
    }
    (sys, oracle)
}

pub fn graph_matches(sys: &ChemSystem, oracle: &BondOracle) -> bool {
    let ids: Vec<u64> = sys.atoms().map(|a| a.id().0).collect();
    if ids != oracle.live {
        return false;
    }
    sys.atoms().all(|a| {
        let bonds: Vec<u64> = a.bonds().iter().map(|b| b.0).collect();
        oracle.adj.get(&a.id().0) == Some(&bonds)
    })
}

/// A row table: per-row optional integer columns.
pub type Row = (u64, String, BTreeMap<String, i64>);

pub const COLS: [&str; 3] = ["a", "b", "c"];
pub const NAMES: [&str; 3] = ["row", "rec", "other"];

pub fn random_table(rng: &mut ChaCha8Rng) -> (ChemSystem, Vec<Row>) {
    let mut sys = ChemSystem::new();
    let mut rows = Vec::new();
    for _ in 0..rng.random_range(0..=50) {
        let name = NAMES[rng.random_range(0..NAMES.len())];
        let mut cols = BTreeMap::new();
        for c in COLS {
            if rng.random_bool(0.8) {
                cols.insert(c.to_string(), rng.random_range(-5..=5));
            }
        }
        let id = sys.add_atom(name, cols.iter().map(|(k, v)| (k.clone(), Electron::Int(*v))));
        rows.push((id.0, name.to_string(), cols));
    }
    (sys, rows)
}

#[derive(Debug, Clone)]
pub struct RandomPredicate {
    pub name: Option<&'static str>,
    pub terms: Vec<(&'static str, Cmp, i64)>,
}

pub fn random_predicate(rng: &mut ChaCha8Rng) -> RandomPredicate {
    let ops = [Cmp::Eq, Cmp::Ne, Cmp::Lt, Cmp::Le, Cmp::Gt, Cmp::Ge];
    RandomPredicate {
        name: if rng.random_bool(0.7) { Some(NAMES[rng.random_range(0..NAMES.len())]) } else { None },
        terms: (0..rng.random_range(0..=3))
            .map(|_| (COLS[rng.random_range(0..COLS.len())], ops[rng.random_range(0..ops.len())], rng.random_range(-5..=5)))
            .collect(),
    }
}

pub fn to_query(p: &RandomPredicate) -> Query {
    let mut q = Query::named(p.name.unwrap_or("*"));
    for &(f, c, v) in &p.terms {
        q = q.and(f, c, v);
    }
    q
}

/// Full scan with SQL-ish null handling written out longhand.
pub fn oracle_select(rows: &[Row], p: &RandomPredicate) -> Vec<u64> {
    let mut out = Vec::new();
    'rows: for (id, name, cols) in rows {
        if let Some(n) = p.name {
            if name != n {
                continue;
            }
        }
        for &(f, cmp, v) in &p.terms {
            let ok = match cols.get(f) {
                None => matches!(cmp, Cmp::Ne),
                Some(&x) => match cmp {
                    Cmp::Eq => x == v,
                    Cmp::Ne => x != v,
                    Cmp::Lt => x < v,
                    Cmp::Le => x <= v,
                    Cmp::Gt => x > v,
                    Cmp::Ge => x >= v,
                },
            };
            if !ok {
                continue 'rows;
            }
        }
        out.push(*id);
    }
    out
}

pub fn table_matches(sys: &ChemSystem, rows: &[Row]) -> bool {
    let actual: Vec<Row> = sys
        .atoms()
        .map(|a| {
            let cols = a.fields().map(|(k, v)| (k.to_string(), v.as_int().expect("int column"))).collect();
            (a.id().0, a.name().to_string(), cols)
        })
        .collect();
    actual == rows
}

/// One select/update/delete round against the oracle; returns false on mismatch.
pub fn sql_round(rng: &mut ChaCha8Rng) -> bool {
    let (mut sys, mut rows) = random_table(rng);
    let p = random_predicate(rng);
    let expect = oracle_select(&rows, &p);
    let got: Vec<u64> = sys.query(&to_query(&p)).iter().map(|a| a.0).collect();
    if got != expect {
        return false;
    }
    if sys.query(&to_query(&p)) != sys.query(&to_query(&p)) {
        return false;
    }
    let sel: Vec<AtomId> = got.iter().map(|&i| AtomId(i)).collect();
    if rng.random_bool(0.5) {
        let col = COLS[rng.random_range(0..COLS.len())];
        let v = rng.random_range(-5..=5);
        sys.update(&sel, col, Electron::Int(v));
        for (id, _, cols) in rows.iter_mut() {
            if expect.contains(id) {
                cols.insert(col.to_string(), v);
            }
        }
    } else {
        sys.delete(&sel);
        rows.retain(|(id, _, _)| !expect.contains(id));
    }
    table_matches(&sys, &rows)
}

/// Interleaved enqueue/dequeue across three queues versus `VecDeque`s.
pub fn queue_round(rng: &mut ChaCha8Rng, ops: usize) -> bool {
    let mut sys = ChemSystem::new();
    let mut reference: BTreeMap<&str, VecDeque<i64>> = BTreeMap::new();
    let queues = ["q1", "q2", "q3"];
    for step in 0..ops {
        let q = queues[rng.random_range(0..queues.len())];
        if rng.random_bool(0.55) {
            sys.enqueue(q, [("v", Electron::Int(step as i64))]);
            reference.entry(q).or_default().push_back(step as i64);
        } else {
            let got = sys.dequeue(q).map(|a| a.get("v").as_int().unwrap());
            let want = reference.entry(q).or_default().pop_front();
            if got != want {
                return false;
            }
        }
    }
    queues.iter().all(|q| sys.queue_len(q) == reference.get(q).map_or(0, |d| d.len()))
}

/// Seeded bind/unbind ops versus a map of lists.
pub fn registry_round(rng: &mut ChaCha8Rng, ops: usize) -> bool {
    let mut sys = ChemSystem::new();
    let mut reference: BTreeMap<String, Vec<u64>> = BTreeMap::new();
    for _ in 0..ops {
        let ev = format!("ev{}", rng.random_range(0..10));
        let h = rng.random_range(0..6u64);
        if rng.random_bool(0.6) {
            sys.bind_handler(&ev, h);
            reference.entry(ev).or_default().push(h);
        } else {
            let list = reference.entry(ev.clone()).or_default();
            let expect = match list.iter().position(|&x| x == h) {
                Some(i) => {
                    list.remove(i);
                    true
                }
                None => false,
            };
            if sys.unbind_handler(&ev, h) != expect {
                return false;
            }
        }
    }
    (0..10).all(|i| {
        let ev = format!("ev{i}");
        sys.handlers_for(&ev) == reference.get(&ev).cloned().unwrap_or_default()
    })
}

pub fn random_electron(rng: &mut ChaCha8Rng, depth: u32, max_ref: u64) -> Electron {
    let top = if depth == 0 { 7 } else { 8 };
    match rng.random_range(0..top) {
        0 => Electron::Null,
        1 => Electron::Bool(rng.random()),
        2 => Electron::Int(rng.random()),
        3 => Electron::Real(f64::from_bits(rng.random::<u64>() & !(0x7ff << 52)) * rng.random_range(-1e6..1e6)),
        4 => {
            let pool = ["", "x", "hello world", "a:b", "line\nbreak", "tab\there", "ünï", "12:34", "#hash"];
            Electron::from(pool[rng.random_range(0..pool.len())])
        }
        5 => Electron::Blob((0..rng.random_range(0..6)).map(|_| rng.random()).collect()),
        6 => Electron::AtomRef(AtomId(rng.random_range(1..=max_ref.max(1)))),
        _ => Electron::List((0..rng.random_range(0..4)).map(|_| random_electron(rng, depth - 1, max_ref)).collect()),
    }
}

pub fn random_system(rng: &mut ChaCha8Rng) -> ChemSystem {
    let mut sys = ChemSystem::new();
    let n = rng.random_range(0..12);
    let mut ids = Vec::new();
    for _ in 0..n {
        let names = ["a", "row", "with space", "colon:name", "x"];
        let name = names[rng.random_range(0..names.len())];
        let fields: Vec<(String, Electron)> = (0..rng.random_range(0..5))
            .map(|i| (format!("f{i}{}", if rng.random_bool(0.2) { " sp" } else { "" }), random_electron(rng, 2, n as u64)))
            .collect();
        ids.push(sys.add_atom(name, fields));
    }
    if rng.random_bool(0.3) && !ids.is_empty() {
        let victim = ids.remove(rng.random_range(0..ids.len()));
        sys.remove_atom(victim).unwrap();
    }
    for _ in 0..rng.random_range(0..10) {
        if ids.is_empty() {
            break;
        }
        let a = ids[rng.random_range(0..ids.len())];
        let b = ids[rng.random_range(0..ids.len())];
        sys.bond(a, b).unwrap();
    }
    sys
}
