//! Truth of formulas on the pure equality structure `{0, …, m-1}`.
//!
//! A Henkin prefix `(A, E, D)` holds when there are choice functions, one per
//! existential and taking only that existential's dependencies as arguments,
//! under which the matrix holds for every assignment to the universals.
//! Two engines decide this:
//!
//! * [`Evaluator::evaluate`] searches the choice tables with chronological
//!   backtracking. Universal tuples are visited in lexicographic order (the
//!   last declared universal varies fastest); each tuple fills only the table
//!   entries it reads, and the matrix is checked three-valued after every
//!   assignment so a conflict is seen as soon as it is decided.
//! * [`Evaluator::evaluate_naive`] enumerates every combination of complete
//!   tables. It shares no code with the first engine and is used to check it.
//!
//! Both stop with [`EvalError::BudgetExceeded`] once their node budget is
//! spent, which is never reported as `false`.

mod naive;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::syntax::{validate, Formula, Variable};

/// Default number of search nodes an evaluation may spend.
pub const DEFAULT_BUDGET: u64 = 50_000_000;

/// Size of the domain `{0, …, m-1}`; never zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DomainSize(u32);

impl DomainSize {
    pub fn new(m: u32) -> Result<Self, EvalError> {
        if m == 0 {
            Err(EvalError::EmptyDomain)
        } else {
            Ok(DomainSize(m))
        }
    }

    pub fn get(self) -> u32 {
        self.0
    }
}

impl fmt::Display for DomainSize {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Values for free variables.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Valuation(BTreeMap<Variable, u32>);

impl Valuation {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, v: Variable, value: u32) -> Self {
        self.0.insert(v, value);
        self
    }

    pub fn insert(&mut self, v: Variable, value: u32) {
        self.0.insert(v, value);
    }

    pub fn get(&self, v: &Variable) -> Option<u32> {
        self.0.get(v).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Variable, u32)> {
        self.0.iter().map(|(k, v)| (k, *v))
    }
}

impl FromIterator<(Variable, u32)> for Valuation {
    fn from_iter<I: IntoIterator<Item = (Variable, u32)>>(iter: I) -> Self {
        Valuation(iter.into_iter().collect())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("search budget of {budget} nodes exhausted")]
    BudgetExceeded { budget: u64 },
    #[error("free variable `{0}` has no value")]
    Unbound(Variable),
    #[error("value {value} of `{var}` lies outside a domain of size {size}")]
    OutOfRange {
        var: Variable,
        value: u32,
        size: u32,
    },
    #[error("invalid formula: {0}")]
    Invalid(String),
    #[error("domain size must be at least 1")]
    EmptyDomain,
}

/// A choice function given as a lookup table. Entries are indexed by the
/// dependency tuple read as a base-`m` numeral, first dependency most
/// significant, so entry order is lexicographic tuple order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkolemTable {
    owner: Variable,
    arity: usize,
    size: u32,
    entries: Vec<u32>,
}

impl SkolemTable {
    pub fn new(owner: Variable, arity: usize, size: u32, entries: Vec<u32>) -> Self {
        assert_eq!(entries.len(), (size as usize).pow(arity as u32));
        assert!(entries.iter().all(|&e| e < size));
        SkolemTable {
            owner,
            arity,
            size,
            entries,
        }
    }

    pub fn owner(&self) -> &Variable {
        &self.owner
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    pub fn get(&self, args: &[u32]) -> u32 {
        assert_eq!(args.len(), self.arity);
        let idx = args
            .iter()
            .fold(0usize, |acc, &a| acc * self.size as usize + a as usize);
        self.entries[idx]
    }

    fn tuple(&self, mut idx: usize) -> Vec<u32> {
        let m = self.size as usize;
        let mut t = vec![0; self.arity];
        for slot in t.iter_mut().rev() {
            *slot = (idx % m) as u32;
            idx /= m;
        }
        t
    }
}

/// `y1: (0,0)->1 (0,1)->0 …`
impl fmt::Display for SkolemTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:", self.owner)?;
        for (i, out) in self.entries.iter().enumerate() {
            let args: Vec<String> = self.tuple(i).iter().map(u32::to_string).collect();
            write!(f, " ({})->{}", args.join(","), out)?;
        }
        Ok(())
    }
}

/// Choice tables that make a sentence true: one arity-0 table per leading
/// first-order existential, then the tables of the outermost Henkin prefix.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Witness {
    pub tables: Vec<SkolemTable>,
}

impl Witness {
    pub fn table(&self, owner: &Variable) -> Option<&SkolemTable> {
        self.tables.iter().find(|t| &t.owner == owner)
    }
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for t in &self.tables {
            writeln!(f, "{t}")?;
        }
        Ok(())
    }
}

/// A failed model search, with the domain size being tried.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("at domain size {size}: {source}")]
pub struct SearchError {
    pub size: u32,
    #[source]
    pub source: EvalError,
}

/// Evaluation settings. `Evaluator::default()` uses [`DEFAULT_BUDGET`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Evaluator {
    budget: u64,
}

impl Default for Evaluator {
    fn default() -> Self {
        Evaluator {
            budget: DEFAULT_BUDGET,
        }
    }
}

impl Evaluator {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_budget(budget: u64) -> Self {
        Evaluator { budget }
    }

    pub fn budget(&self) -> u64 {
        self.budget
    }

    /// Backtracking evaluation.
    pub fn evaluate(
        &self,
        f: &Formula,
        size: DomainSize,
        env: &Valuation,
    ) -> Result<bool, EvalError> {
        let (program, mut engine) = self.prepare(f, size, env)?;
        Ok(engine.eval(&program.root)? == Tri::True)
    }

    /// Backtracking evaluation that also returns the first witness found.
    /// `Ok(None)` means the formula is false.
    pub fn evaluate_with_witness(
        &self,
        f: &Formula,
        size: DomainSize,
        env: &Valuation,
    ) -> Result<Option<Witness>, EvalError> {
        let (program, mut engine) = self.prepare(f, size, env)?;
        engine.witness(&program.root)
    }

    /// Exhaustive evaluation over complete tables; the reference semantics.
    pub fn evaluate_naive(
        &self,
        f: &Formula,
        size: DomainSize,
        env: &Valuation,
    ) -> Result<bool, EvalError> {
        check_input(f, size, env)?;
        naive::evaluate(f, size.get(), env, self.budget)
    }

    /// Smallest `m <= max_size` at which the sentence is true.
    pub fn find_min_model(
        &self,
        f: &Formula,
        max_size: u32,
    ) -> Result<Option<DomainSize>, SearchError> {
        let empty = Valuation::new();
        for m in 1..=max_size {
            let size = DomainSize(m);
            if self
                .evaluate(f, size, &empty)
                .map_err(|source| SearchError { size: m, source })?
            {
                return Ok(Some(size));
            }
        }
        Ok(None)
    }

    fn prepare(
        &self,
        f: &Formula,
        size: DomainSize,
        env: &Valuation,
    ) -> Result<(Program, Engine), EvalError> {
        check_input(f, size, env)?;
        let program = Program::compile(f);
        let mut engine = Engine {
            m: size.get(),
            budget: self.budget,
            nodes: 0,
            env: vec![UNSET; program.slots],
        };
        for (v, slot) in &program.inputs {
            engine.env[*slot] = env.get(v).expect("checked");
        }
        Ok((program, engine))
    }
}

fn check_input(f: &Formula, size: DomainSize, env: &Valuation) -> Result<(), EvalError> {
    if let Some(d) = validate(f).into_iter().find(|d| d.is_error()) {
        return Err(EvalError::Invalid(d.message));
    }
    for v in f.free_variables() {
        match env.get(&v) {
            None => return Err(EvalError::Unbound(v)),
            Some(value) if value >= size.get() => {
                return Err(EvalError::OutOfRange {
                    var: v,
                    value,
                    size: size.get(),
                })
            }
            Some(_) => {}
        }
    }
    Ok(())
}

/// [`Evaluator::evaluate`] with the default budget.
pub fn evaluate(f: &Formula, size: DomainSize, env: &Valuation) -> Result<bool, EvalError> {
    Evaluator::new().evaluate(f, size, env)
}

/// [`Evaluator::evaluate_naive`] with the default budget.
pub fn evaluate_naive(f: &Formula, size: DomainSize, env: &Valuation) -> Result<bool, EvalError> {
    Evaluator::new().evaluate_naive(f, size, env)
}

/// [`Evaluator::find_min_model`] with the default budget.
pub fn find_min_model(f: &Formula, max_size: u32) -> Result<Option<DomainSize>, SearchError> {
    Evaluator::new().find_min_model(f, max_size)
}

const UNSET: u32 = u32::MAX;

type Slot = usize;

enum Node {
    Const(bool),
    Eq(Slot, Slot),
    Not(Box<Node>),
    And(Vec<Node>),
    Or(Vec<Node>),
    Implies(Box<Node>, Box<Node>),
    Iff(Box<Node>, Box<Node>),
    Quant(Box<QuantNode>),
    Branch(Box<BranchNode>),
}

struct QuantNode {
    universal: bool,
    names: Vec<Variable>,
    bound: Vec<Slot>,
    /// Slots read by the node but bound outside it.
    free: Vec<Slot>,
    body: Node,
}

struct Choice {
    owner: Variable,
    slot: Slot,
    /// Positions in the branch's universal list, in declared order.
    deps: Vec<usize>,
}

struct BranchNode {
    universals: Vec<Slot>,
    choices: Vec<Choice>,
    free: Vec<Slot>,
    matrix: Node,
}

/// A formula with every binding occurrence mapped to its own env slot.
struct Program {
    root: Node,
    slots: usize,
    inputs: Vec<(Variable, Slot)>,
}

impl Program {
    fn compile(f: &Formula) -> Program {
        let mut c = Compiler::default();
        for v in f.free_variables() {
            let slot = c.fresh();
            c.scope.push((v.clone(), slot));
            c.inputs.push((v, slot));
        }
        let (root, _) = c.node(f);
        Program {
            root,
            slots: c.next,
            inputs: c.inputs,
        }
    }
}

#[derive(Default)]
struct Compiler {
    scope: Vec<(Variable, Slot)>,
    inputs: Vec<(Variable, Slot)>,
    next: Slot,
}

impl Compiler {
    fn fresh(&mut self) -> Slot {
        self.next += 1;
        self.next - 1
    }

    fn lookup(&self, v: &Variable) -> Slot {
        self.scope
            .iter()
            .rev()
            .find(|(name, _)| name == v)
            .map(|(_, s)| *s)
            .expect("free variables are bound at the top")
    }

    fn bind(&mut self, vars: &[Variable]) -> Vec<Slot> {
        vars.iter()
            .map(|v| {
                let s = self.fresh();
                self.scope.push((v.clone(), s));
                s
            })
            .collect()
    }

    fn node(&mut self, f: &Formula) -> (Node, BTreeSet<Slot>) {
        match f {
            Formula::True => (Node::Const(true), BTreeSet::new()),
            Formula::False => (Node::Const(false), BTreeSet::new()),
            Formula::Eq(a, b) => {
                let (a, b) = (self.lookup(a), self.lookup(b));
                (Node::Eq(a, b), [a, b].into())
            }
            Formula::Not(g) => {
                let (g, free) = self.node(g);
                (Node::Not(Box::new(g)), free)
            }
            Formula::And(gs) | Formula::Or(gs) => {
                let mut free = BTreeSet::new();
                let nodes = gs
                    .iter()
                    .map(|g| {
                        let (n, fv) = self.node(g);
                        free.extend(fv);
                        n
                    })
                    .collect();
                let node = if matches!(f, Formula::And(_)) {
                    Node::And(nodes)
                } else {
                    Node::Or(nodes)
                };
                (node, free)
            }
            Formula::Implies(a, b) | Formula::Iff(a, b) => {
                let (a, mut free) = self.node(a);
                let (b, fb) = self.node(b);
                free.extend(fb);
                let node = if matches!(f, Formula::Implies(..)) {
                    Node::Implies(Box::new(a), Box::new(b))
                } else {
                    Node::Iff(Box::new(a), Box::new(b))
                };
                (node, free)
            }
            Formula::ForAll(vs, body) | Formula::Exists(vs, body) => {
                let mark = self.scope.len();
                let bound = self.bind(vs);
                let (body, mut free) = self.node(body);
                self.scope.truncate(mark);
                for s in &bound {
                    free.remove(s);
                }
                let node = QuantNode {
                    universal: matches!(f, Formula::ForAll(..)),
                    names: vs.clone(),
                    bound,
                    free: free.iter().copied().collect(),
                    body,
                };
                (Node::Quant(Box::new(node)), free)
            }
            Formula::Branch(prefix, body) => {
                let mark = self.scope.len();
                let universals = self.bind(prefix.universals());
                let existentials = self.bind(prefix.existentials());
                let (matrix, mut free) = self.node(body);
                self.scope.truncate(mark);
                for s in universals.iter().chain(&existentials) {
                    free.remove(s);
                }
                let choices = prefix
                    .dependencies()
                    .zip(existentials)
                    .map(|((owner, deps), slot)| Choice {
                        owner: owner.clone(),
                        slot,
                        deps: deps
                            .iter()
                            .map(|d| prefix.universals().iter().position(|u| u == d).unwrap())
                            .collect(),
                    })
                    .collect();
                let node = BranchNode {
                    universals,
                    choices,
                    free: free.iter().copied().collect(),
                    matrix,
                };
                (Node::Branch(Box::new(node)), free)
            }
        }
    }
}

/// Three-valued truth for partially filled choice tables.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Tri {
    False,
    True,
    Unknown,
}

impl From<bool> for Tri {
    fn from(b: bool) -> Self {
        if b {
            Tri::True
        } else {
            Tri::False
        }
    }
}

struct Engine {
    m: u32,
    budget: u64,
    nodes: u64,
    env: Vec<u32>,
}

impl Engine {
    fn tick(&mut self) -> Result<(), EvalError> {
        self.nodes += 1;
        if self.nodes > self.budget {
            Err(EvalError::BudgetExceeded {
                budget: self.budget,
            })
        } else {
            Ok(())
        }
    }

    fn all_set(&self, slots: &[Slot]) -> bool {
        slots.iter().all(|&s| self.env[s] != UNSET)
    }

    fn eval(&mut self, node: &Node) -> Result<Tri, EvalError> {
        Ok(match node {
            Node::Const(b) => (*b).into(),
            Node::Eq(a, b) => {
                let (a, b) = (self.env[*a], self.env[*b]);
                if a == UNSET || b == UNSET {
                    Tri::Unknown
                } else {
                    (a == b).into()
                }
            }
            Node::Not(g) => match self.eval(g)? {
                Tri::True => Tri::False,
                Tri::False => Tri::True,
                Tri::Unknown => Tri::Unknown,
            },
            Node::And(gs) => {
                let mut acc = Tri::True;
                for g in gs {
                    match self.eval(g)? {
                        Tri::False => return Ok(Tri::False),
                        Tri::Unknown => acc = Tri::Unknown,
                        Tri::True => {}
                    }
                }
                acc
            }
            Node::Or(gs) => {
                let mut acc = Tri::False;
                for g in gs {
                    match self.eval(g)? {
                        Tri::True => return Ok(Tri::True),
                        Tri::Unknown => acc = Tri::Unknown,
                        Tri::False => {}
                    }
                }
                acc
            }
            Node::Implies(a, b) => match self.eval(a)? {
                Tri::False => Tri::True,
                ta => match (ta, self.eval(b)?) {
                    (_, Tri::True) => Tri::True,
                    (Tri::True, Tri::False) => Tri::False,
                    _ => Tri::Unknown,
                },
            },
            Node::Iff(a, b) => match (self.eval(a)?, self.eval(b)?) {
                (Tri::Unknown, _) | (_, Tri::Unknown) => Tri::Unknown,
                (x, y) => (x == y).into(),
            },
            Node::Quant(q) => {
                if !self.all_set(&q.free) {
                    return Ok(Tri::Unknown);
                }
                let body = &q.body;
                self.quantify(q, &mut |e| Ok(e.eval(body)? == Tri::True))?
                    .into()
            }
            Node::Branch(b) => {
                if !self.all_set(&b.free) {
                    return Ok(Tri::Unknown);
                }
                self.search(b)?.is_some().into()
            }
        })
    }

    /// Runs `leaf` on the assignments of a first-order block. Elements that
    /// no free variable of the block holds are interchangeable (the logic
    /// cannot tell them apart), so only the first such element is tried at
    /// each position.
    fn quantify(
        &mut self,
        q: &QuantNode,
        leaf: &mut dyn FnMut(&mut Engine) -> Result<bool, EvalError>,
    ) -> Result<bool, EvalError> {
        let mut used = vec![false; self.m as usize];
        for &s in &q.free {
            used[self.env[s] as usize] = true;
        }
        let r = self.quantify_from(q, 0, &mut used, leaf);
        for &s in &q.bound {
            self.env[s] = UNSET;
        }
        r
    }

    fn quantify_from(
        &mut self,
        q: &QuantNode,
        i: usize,
        used: &mut [bool],
        leaf: &mut dyn FnMut(&mut Engine) -> Result<bool, EvalError>,
    ) -> Result<bool, EvalError> {
        if i == q.bound.len() {
            return leaf(self);
        }
        let mut fresh_tried = false;
        for v in 0..self.m {
            let was_used = used[v as usize];
            if !was_used {
                if fresh_tried {
                    continue;
                }
                fresh_tried = true;
            }
            self.tick()?;
            self.env[q.bound[i]] = v;
            used[v as usize] = true;
            let r = self.quantify_from(q, i + 1, used, leaf);
            used[v as usize] = was_used;
            let r = r?;
            if r != q.universal {
                return Ok(r);
            }
        }
        Ok(q.universal)
    }

    /// Searches choice tables for a Henkin prefix whose outer variables are
    /// all set. Returns the completed tables on success.
    fn search(&mut self, b: &BranchNode) -> Result<Option<Vec<Vec<u32>>>, EvalError> {
        let m = self.m as u64;
        let n = b.universals.len();
        let total = match m.checked_pow(n as u32) {
            Some(t) => t,
            None => {
                return Err(EvalError::BudgetExceeded {
                    budget: self.budget,
                })
            }
        };
        let mut tables: Vec<Vec<u32>> = b
            .choices
            .iter()
            .map(|c| vec![UNSET; (self.m as usize).pow(c.deps.len() as u32)])
            .collect();
        let mut cursor = vec![0usize; b.choices.len()];
        let mut digits = vec![0u32; n];
        // (choice, entry, tuple at which the entry was first demanded)
        let mut trail: Vec<(usize, usize, u64)> = Vec::new();
        let mut t: u64 = 0;
        self.load(b, t, &mut digits, &mut cursor, &tables);

        let outcome = 'search: loop {
            // Extend: fill entries demanded by tuple t, checking as we go.
            let consistent = loop {
                if self.eval(&b.matrix)? == Tri::False {
                    break false;
                }
                if let Some(c) = (0..b.choices.len()).find(|&c| tables[c][cursor[c]] == UNSET) {
                    self.tick()?;
                    tables[c][cursor[c]] = 0;
                    self.env[b.choices[c].slot] = 0;
                    trail.push((c, cursor[c], t));
                    continue;
                }
                t += 1;
                if t == total {
                    break 'search true;
                }
                self.load(b, t, &mut digits, &mut cursor, &tables);
            };
            debug_assert!(!consistent);
            // Backtrack: next value for the most recent assignment.
            loop {
                let Some(&(c, entry, t0)) = trail.last() else {
                    break 'search false;
                };
                let next = tables[c][entry] + 1;
                if next < self.m {
                    self.tick()?;
                    tables[c][entry] = next;
                    t = t0;
                    self.load(b, t, &mut digits, &mut cursor, &tables);
                    break;
                }
                tables[c][entry] = UNSET;
                trail.pop();
            }
        };
        for &s in b.universals.iter().chain(b.choices.iter().map(|c| &c.slot)) {
            self.env[s] = UNSET;
        }
        Ok(outcome.then_some(tables))
    }

    /// Sets universals to tuple `t` and existentials to their current entries.
    fn load(
        &mut self,
        b: &BranchNode,
        mut t: u64,
        digits: &mut [u32],
        cursor: &mut [usize],
        tables: &[Vec<u32>],
    ) {
        let m = self.m as u64;
        for d in digits.iter_mut().rev() {
            *d = (t % m) as u32;
            t /= m;
        }
        for (&slot, &d) in b.universals.iter().zip(digits.iter()) {
            self.env[slot] = d;
        }
        for (i, c) in b.choices.iter().enumerate() {
            let entry = c
                .deps
                .iter()
                .fold(0usize, |acc, &p| acc * self.m as usize + digits[p] as usize);
            cursor[i] = entry;
            self.env[c.slot] = tables[i][entry];
        }
    }

    fn witness(&mut self, node: &Node) -> Result<Option<Witness>, EvalError> {
        match node {
            Node::Quant(q) if !q.universal => {
                let mut found = None;
                let body = &q.body;
                self.quantify(q, &mut |e| {
                    let Some(mut w) = e.witness(body)? else {
                        return Ok(false);
                    };
                    let heads =
                        q.names.iter().zip(&q.bound).map(|(name, &s)| {
                            SkolemTable::new(name.clone(), 0, e.m, vec![e.env[s]])
                        });
                    w.tables.splice(0..0, heads);
                    found = Some(w);
                    Ok(true)
                })?;
                Ok(found)
            }
            Node::Branch(b) => Ok(self.search(b)?.map(|tables| Witness {
                tables: b
                    .choices
                    .iter()
                    .zip(tables)
                    .map(|(c, entries)| {
                        SkolemTable::new(c.owner.clone(), c.deps.len(), self.m, entries)
                    })
                    .collect(),
            })),
            _ => Ok((self.eval(node)? == Tri::True).then(Witness::default)),
        }
    }
}
