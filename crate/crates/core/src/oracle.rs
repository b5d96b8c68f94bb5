//! Brute-force semigroup side of the word problem: look for unary functions
//! `f_c` on `{0..m-1}`, one per letter, such that every equation of the
//! presentation holds pointwise while the query words differ at some point.
//!
//! Nothing here touches formulas, so agreement with the evaluator on
//! compiled sentences is independent evidence that the compiler is right.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::reducer::{Equation, Letter, Presentation, Word};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("search budget of {budget} nodes exhausted")]
    BudgetExceeded { budget: u64 },
    #[error("domain size must be at least 1")]
    EmptyDomain,
}

/// One unary function per letter, all on the same domain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FunctionTable {
    size: u32,
    maps: BTreeMap<Letter, Vec<u32>>,
}

impl FunctionTable {
    pub fn new(size: u32) -> Self {
        FunctionTable {
            size,
            maps: BTreeMap::new(),
        }
    }

    /// Sets `f_letter(p) = values[p]`.
    pub fn with(mut self, letter: Letter, values: Vec<u32>) -> Self {
        self.insert(letter, values);
        self
    }

    pub fn insert(&mut self, letter: Letter, values: Vec<u32>) {
        assert_eq!(values.len(), self.size as usize, "function must be total");
        assert!(
            values.iter().all(|&v| v < self.size),
            "value outside the domain"
        );
        self.maps.insert(letter, values);
    }

    /// The table where every letter of `alphabet` is the identity.
    pub fn identity(size: u32, alphabet: impl IntoIterator<Item = Letter>) -> Self {
        let id: Vec<u32> = (0..size).collect();
        alphabet
            .into_iter()
            .fold(Self::new(size), |t, l| t.with(l, id.clone()))
    }

    pub fn size(&self) -> u32 {
        self.size
    }

    pub fn get(&self, letter: Letter) -> Option<&[u32]> {
        self.maps.get(&letter).map(Vec::as_slice)
    }

    pub fn letters(&self) -> impl Iterator<Item = Letter> + '_ {
        self.maps.keys().copied()
    }

    fn covers(&self, word: &Word) -> bool {
        word.letters().iter().all(|l| self.maps.contains_key(l))
    }
}

/// `a: 0->1 1->1 2->0`, one line per letter.
impl fmt::Display for FunctionTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (letter, values) in &self.maps {
            write!(f, "{letter}:")?;
            for (p, v) in values.iter().enumerate() {
                write!(f, " {p}->{v}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Functions satisfying a presentation plus a point where the query words
/// act differently.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub tables: FunctionTable,
    pub point: u32,
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}point: {}", self.tables, self.point)
    }
}

/// `tr(c1…ck)(p) = f_c1(f_c2(…f_ck(p)…))`: the last letter acts first.
pub fn tr_apply(word: &Word, p: u32, tables: &FunctionTable) -> u32 {
    word.letters().iter().rev().fold(p, |x, l| {
        tables
            .maps
            .get(l)
            .expect("table covers every letter of the word")[x as usize]
    })
}

fn holds_everywhere(eq: &Equation, tables: &FunctionTable) -> bool {
    (0..tables.size).all(|p| tr_apply(&eq.lhs, p, tables) == tr_apply(&eq.rhs, p, tables))
}

fn separating_point(q: &Equation, tables: &FunctionTable) -> Option<u32> {
    (0..tables.size).find(|&p| tr_apply(&q.lhs, p, tables) != tr_apply(&q.rhs, p, tables))
}

/// True iff the candidate's functions satisfy every equation at every point
/// and separate the query at the candidate's point.
pub fn check_witness(e: &Presentation, q: &Equation, cand: &Witness) -> bool {
    let t = &cand.tables;
    if cand.point >= t.size
        || !e
            .equations()
            .iter()
            .all(|eq| t.covers(&eq.lhs) && t.covers(&eq.rhs))
        || !(t.covers(&q.lhs) && t.covers(&q.rhs))
    {
        return false;
    }
    e.equations().iter().all(|eq| holds_everywhere(eq, t))
        && tr_apply(&q.lhs, cand.point, t) != tr_apply(&q.rhs, cand.point, t)
}

/// Exhaustive witness search with a node budget.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Oracle {
    budget: u64,
}

impl Default for Oracle {
    fn default() -> Self {
        Oracle {
            budget: crate::eval::DEFAULT_BUDGET,
        }
    }
}

impl Oracle {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_budget(budget: u64) -> Self {
        Oracle { budget }
    }

    /// The first witness in the fixed order: letters alphabetically, each
    /// letter's functions in lexicographic order of `(f(0), …, f(m-1))`, and
    /// the smallest separating point. An equation is checked as soon as all
    /// of its letters have functions.
    pub fn find_witness(
        &self,
        e: &Presentation,
        q: &Equation,
        m: u32,
    ) -> Result<Option<Witness>, OracleError> {
        if m == 0 {
            return Err(OracleError::EmptyDomain);
        }
        let letters: Vec<Letter> = e
            .alphabet()
            .iter()
            .copied()
            .chain(q.letters())
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let rank = |l: &Letter| letters.iter().position(|x| x == l).unwrap();
        let decided_at = |eq: &Equation| eq.letters().iter().map(rank).max().unwrap();
        let mut checks: Vec<Vec<&Equation>> = vec![Vec::new(); letters.len()];
        for eq in e.equations() {
            checks[decided_at(eq)].push(eq);
        }
        let mut search = Search {
            m,
            budget: self.budget,
            nodes: 0,
            letters: &letters,
            checks,
            query: q,
            query_at: decided_at(q),
            tables: FunctionTable::new(m),
        };
        if search.extend(0)? {
            let point = separating_point(q, &search.tables).expect("query separated");
            Ok(Some(Witness {
                tables: search.tables,
                point,
            }))
        } else {
            Ok(None)
        }
    }
}

/// [`Oracle::find_witness`] with the default budget.
pub fn find_witness(
    e: &Presentation,
    q: &Equation,
    m: u32,
) -> Result<Option<Witness>, OracleError> {
    Oracle::new().find_witness(e, q, m)
}

struct Search<'a> {
    m: u32,
    budget: u64,
    nodes: u64,
    letters: &'a [Letter],
    /// Equations to check right after the letter at each index is fixed.
    checks: Vec<Vec<&'a Equation>>,
    query: &'a Equation,
    query_at: usize,
    tables: FunctionTable,
}

impl Search<'_> {
    fn extend(&mut self, i: usize) -> Result<bool, OracleError> {
        if i == self.letters.len() {
            return Ok(true);
        }
        let letter = self.letters[i];
        let mut values = vec![0u32; self.m as usize];
        loop {
            self.nodes += 1;
            if self.nodes > self.budget {
                return Err(OracleError::BudgetExceeded {
                    budget: self.budget,
                });
            }
            self.tables.maps.insert(letter, values.clone());
            let ok = self.checks[i]
                .iter()
                .all(|eq| holds_everywhere(eq, &self.tables))
                && (i != self.query_at || separating_point(self.query, &self.tables).is_some());
            if ok && self.extend(i + 1)? {
                return Ok(true);
            }
            if !next_function(&mut values, self.m) {
                self.tables.maps.remove(&letter);
                return Ok(false);
            }
        }
    }
}

fn next_function(values: &mut [u32], m: u32) -> bool {
    for v in values.iter_mut().rev() {
        *v += 1;
        if *v < m {
            return true;
        }
        *v = 0;
    }
    false
}
