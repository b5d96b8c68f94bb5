//! Compiler from a semigroup word-problem instance `(E, v = w)` to a Henkin
//! sentence that has a model of size `m` exactly when some family of unary
//! functions on `{0..m-1}` satisfies every equation of `E` pointwise while
//! separating `v` from `w` at some point.
//!
//! Each letter occurrence gets its own `∀u ∃e` row whose choice function
//! plays the role of that letter's function. Rows of the same letter are tied
//! together so they all choose the same function; each equation's chain of
//! rows forces the two composites to agree; and a block of plain first-order
//! witnesses `t0..tl`, `s0..sk` traces both query words from a common point
//! to two different endpoints.
//!
//! Words act on points with the last letter applied first:
//! `tr(c1…ck)(x) = f_c1(f_c2(…f_ck(x)…))`.

use std::collections::BTreeSet;
use std::fmt;

use crate::syntax::{var, Formula, HenkinPrefix, Variable};

/// A generator, one of `a..=z`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter(u8);

impl Letter {
    pub fn new(c: char) -> Option<Self> {
        c.is_ascii_lowercase().then_some(Letter(c as u8))
    }

    pub fn as_char(self) -> char {
        self.0 as char
    }
}

impl fmt::Debug for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

/// A nonempty word over `a..=z`. Semigroups have no empty word.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn new(letters: Vec<Letter>) -> Option<Self> {
        (!letters.is_empty()).then_some(Word(letters))
    }

    /// Parses a bare word such as `"cca"`.
    pub fn parse(s: &str) -> Option<Self> {
        s.chars()
            .map(Letter::new)
            .collect::<Option<Vec<_>>>()
            .and_then(Word::new)
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn concat(&self, other: &Word) -> Word {
        Word(self.0.iter().chain(&other.0).copied().collect())
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.0 {
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Equation {
    pub lhs: Word,
    pub rhs: Word,
}

impl Equation {
    pub fn new(lhs: Word, rhs: Word) -> Self {
        Equation { lhs, rhs }
    }

    /// Builds `lhs = rhs` from two bare words; panics on a malformed word.
    pub fn of(lhs: &str, rhs: &str) -> Self {
        let word = |s| Word::parse(s).unwrap_or_else(|| panic!("not a word: {s:?}"));
        Equation::new(word(lhs), word(rhs))
    }

    pub fn letters(&self) -> BTreeSet<Letter> {
        self.lhs
            .letters()
            .iter()
            .chain(self.rhs.letters())
            .copied()
            .collect()
    }

    /// `|lhs| + |rhs|`
    pub fn total_len(&self) -> usize {
        self.lhs.len() + self.rhs.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.lhs == self.rhs
    }
}

impl fmt::Display for Equation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {}", self.lhs, self.rhs)
    }
}

/// A finite set of defining equations. The alphabet always contains every
/// letter used and may be extended with unused generators.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Presentation {
    equations: Vec<Equation>,
    alphabet: BTreeSet<Letter>,
}

impl Presentation {
    pub fn new(equations: Vec<Equation>) -> Self {
        let alphabet = equations.iter().flat_map(Equation::letters).collect();
        Presentation {
            equations,
            alphabet,
        }
    }

    pub fn with_alphabet(mut self, extra: impl IntoIterator<Item = Letter>) -> Self {
        self.alphabet.extend(extra);
        self
    }

    pub fn equations(&self) -> &[Equation] {
        &self.equations
    }

    pub fn alphabet(&self) -> &BTreeSet<Letter> {
        &self.alphabet
    }

    /// `Σ (|v_i| + |w_i|)`
    pub fn total_len(&self) -> usize {
        self.equations.iter().map(Equation::total_len).sum()
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for eq in &self.equations {
            writeln!(f, "{eq}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// Where a row comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RowOrigin {
    /// Letter occurrence at 1-based `position` of one side of equation
    /// `equation` (0-based index into the presentation).
    Equation {
        equation: usize,
        side: Side,
        position: usize,
    },
    /// The designated row for a query letter.
    Query,
}

/// One `∀universal ∃existential` row; the existential depends on the
/// universal only.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Row {
    pub universal: Variable,
    pub existential: Variable,
    pub letter: Letter,
    pub origin: RowOrigin,
}

/// Row layout and variable naming for one compilation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RowPlan {
    rows: Vec<Row>,
    query: Equation,
    /// `t0..tl`, with `l = |v|`.
    pub t: Vec<Variable>,
    /// `s0..sk`, with `k = |w|`.
    pub s: Vec<Variable>,
}

impl RowPlan {
    pub fn rows(&self) -> &[Row] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn query(&self) -> &Equation {
        &self.query
    }

    fn equation_row(&self, equation: usize, side: Side, position: usize) -> &Row {
        self.rows
            .iter()
            .find(|r| {
                r.origin
                    == RowOrigin::Equation {
                        equation,
                        side,
                        position,
                    }
            })
            .expect("plan has a row for every equation letter")
    }

    /// The designated row of a query letter.
    pub fn query_row(&self, letter: Letter) -> &Row {
        self.rows
            .iter()
            .find(|r| r.origin == RowOrigin::Query && r.letter == letter)
            .expect("plan has a designated row for every query letter")
    }

    /// The Henkin prefix: rows in plan order, each existential depending on
    /// its own row's universal.
    pub fn prefix(&self) -> HenkinPrefix {
        let universals = self.rows.iter().map(|r| r.universal.clone()).collect();
        let existentials = self.rows.iter().map(|r| r.existential.clone()).collect();
        let deps = self
            .rows
            .iter()
            .map(|r| (r.existential.clone(), vec![r.universal.clone()]));
        HenkinPrefix::new(universals, existentials, deps).expect("plan names are distinct")
    }
}

/// Lays out one row per letter occurrence of every equation, then one
/// designated row per distinct query letter (alphabetical).
///
/// Names: left side of equation `i` (1-based) at position `j` is
/// `x{i}_{j}`/`y{i}_{j}`, the right side `z{i}_{j}`/`r{i}_{j}`; designated rows
/// are `u_c`/`e_c`; witnesses are `t0..tl` and `s0..sk`.
pub fn plan_rows(presentation: &Presentation, query: &Equation) -> RowPlan {
    let mut rows = Vec::with_capacity(presentation.total_len() + query.letters().len());
    for (i, eq) in presentation.equations().iter().enumerate() {
        let sides = [
            (Side::Left, &eq.lhs, "x", "y"),
            (Side::Right, &eq.rhs, "z", "r"),
        ];
        for (side, word, u, e) in sides {
            for (j, &letter) in word.letters().iter().enumerate() {
                rows.push(Row {
                    universal: var(&format!("{u}{}_{}", i + 1, j + 1)),
                    existential: var(&format!("{e}{}_{}", i + 1, j + 1)),
                    letter,
                    origin: RowOrigin::Equation {
                        equation: i,
                        side,
                        position: j + 1,
                    },
                });
            }
        }
    }
    for letter in query.letters() {
        rows.push(Row {
            universal: var(&format!("u_{letter}")),
            existential: var(&format!("e_{letter}")),
            letter,
            origin: RowOrigin::Query,
        });
    }
    let (t, s) = trace_variables(query);
    RowPlan {
        rows,
        query: query.clone(),
        t,
        s,
    }
}

/// Ties same-letter rows: `(u_i = u_j -> e_i = e_j)` for every unordered pair
/// of rows carrying the same letter.
pub fn build_phi0(plan: &RowPlan) -> Formula {
    let rows = plan.rows();
    let mut parts = Vec::new();
    for (i, a) in rows.iter().enumerate() {
        for b in rows[i + 1..].iter().filter(|b| b.letter == a.letter) {
            parts.push(
                Formula::eq(&a.universal, &b.universal)
                    .implies(Formula::eq(&a.existential, &b.existential)),
            );
        }
    }
    Formula::and(parts)
}

/// The chain formula for equation `index` of the presentation:
/// `(chains) -> (x_|v| = z_|w| -> y_1 = r_1)`, where the chains link each
/// row's universal to the next row's choice. The antecedent is dropped when
/// both words have length one.
pub fn build_phi_eq(index: usize, eq: &Equation, plan: &RowPlan) -> Formula {
    let mut chain = Vec::new();
    for (side, word) in [(Side::Left, &eq.lhs), (Side::Right, &eq.rhs)] {
        for i in 1..word.len() {
            let here = plan.equation_row(index, side, i);
            let next = plan.equation_row(index, side, i + 1);
            chain.push(Formula::eq(&here.universal, &next.existential));
        }
    }
    let left_last = plan.equation_row(index, Side::Left, eq.lhs.len());
    let right_last = plan.equation_row(index, Side::Right, eq.rhs.len());
    let left_first = plan.equation_row(index, Side::Left, 1);
    let right_first = plan.equation_row(index, Side::Right, 1);
    let conclusion = Formula::eq(&left_last.universal, &right_last.universal).implies(Formula::eq(
        &left_first.existential,
        &right_first.existential,
    ));
    match Formula::and(chain) {
        Formula::True => conclusion,
        antecedent => antecedent.implies(conclusion),
    }
}

/// The separation gadget: `t_l ↦ … ↦ t_0` follows `v`, `s_k ↦ … ↦ s_0`
/// follows `w`, the start points coincide and the end points differ.
pub fn build_phi_neq(query: &Equation, plan: &RowPlan) -> Formula {
    separation_gadget(
        query,
        |letter| {
            let row = plan.query_row(letter);
            (row.universal.clone(), row.existential.clone())
        },
        &plan.t,
        &plan.s,
    )
}

/// `t0..tl` and `s0..sk` for a query `v = w` with `l = |v|`, `k = |w|`.
pub fn trace_variables(query: &Equation) -> (Vec<Variable>, Vec<Variable>) {
    let t = (0..=query.lhs.len())
        .map(|i| var(&format!("t{i}")))
        .collect();
    let s = (0..=query.rhs.len())
        .map(|i| var(&format!("s{i}")))
        .collect();
    (t, s)
}

/// [`build_phi_neq`] over any rows: `row_of(c)` names the `(universal,
/// existential)` pair whose choice function stands for letter `c`.
pub fn separation_gadget(
    query: &Equation,
    row_of: impl Fn(Letter) -> (Variable, Variable),
    t: &[Variable],
    s: &[Variable],
) -> Formula {
    let mut parts = Vec::new();
    for (word, trace) in [(&query.lhs, t), (&query.rhs, s)] {
        for (i, &letter) in word.letters().iter().enumerate() {
            let (u, e) = row_of(letter);
            parts.push(Formula::eq(&u, &trace[i + 1]).implies(Formula::eq(&e, &trace[i])));
        }
    }
    parts.push(Formula::eq(t.last().unwrap(), s.last().unwrap()));
    parts.push(Formula::neq(&t[0], &s[0]));
    Formula::And(parts)
}

/// A deliberate fault injected into [`compile_with`], used to check that the
/// cross-check harness notices a broken compiler.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Mutation {
    #[default]
    None,
    /// Drop the `t0 != s0` conjunct from the separation gadget.
    DropSeparation,
}

/// `∃ t0…tl s0…sk  H(rows) . (φ0 ∧ φ_{v1=w1} ∧ … ∧ φ_{v≠w})`
pub fn compile(presentation: &Presentation, query: &Equation) -> Formula {
    compile_with(presentation, query, Mutation::None)
}

pub fn compile_with(presentation: &Presentation, query: &Equation, mutation: Mutation) -> Formula {
    let plan = plan_rows(presentation, query);
    let mut matrix = vec![build_phi0(&plan)];
    for (i, eq) in presentation.equations().iter().enumerate() {
        matrix.push(build_phi_eq(i, eq, &plan));
    }
    let mut neq = build_phi_neq(query, &plan);
    if mutation == Mutation::DropSeparation {
        if let Formula::And(parts) = &mut neq {
            parts.pop();
        }
    }
    matrix.push(neq);
    let witnesses = plan.t.iter().chain(&plan.s).cloned().collect();
    Formula::exists(
        witnesses,
        Formula::branch(plan.prefix(), Formula::And(matrix)),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::validate;
    use crate::text::{parse_formula, print_formula};

    fn pres(eqs: &[(&str, &str)]) -> Presentation {
        Presentation::new(eqs.iter().map(|(l, r)| Equation::of(l, r)).collect())
    }

    fn conjuncts(f: &Formula) -> usize {
        match f {
            Formula::True => 0,
            Formula::And(parts) => parts.len(),
            _ => 1,
        }
    }

    #[test]
    fn words() {
        assert!(Word::parse("").is_none());
        assert!(Word::parse("aB").is_none());
        assert_eq!(
            Word::parse("ab")
                .unwrap()
                .concat(&Word::parse("c").unwrap())
                .to_string(),
            "abc"
        );
        assert!(Equation::of("ab", "ab").is_trivial());
        let p = pres(&[("ac", "ca")]).with_alphabet([Letter::new('z').unwrap()]);
        assert_eq!(p.alphabet().len(), 3);
    }

    #[test]
    fn row_counts() {
        let e = pres(&[("aa", "a"), ("bb", "b")]);
        assert_eq!(plan_rows(&e, &Equation::of("ab", "ba")).len(), 8);
        assert_eq!(
            plan_rows(&Presentation::default(), &Equation::of("a", "a")).len(),
            1
        );
        let ceitin = pres(&[
            ("ac", "ca"),
            ("ad", "da"),
            ("bc", "cb"),
            ("bd", "db"),
            ("eca", "ce"),
            ("edb", "de"),
            ("cca", "ccae"),
        ]);
        assert_eq!(ceitin.total_len(), 33);
        assert_eq!(plan_rows(&ceitin, &Equation::of("a", "b")).len(), 35);
    }

    #[test]
    fn plan_names_are_distinct() {
        let e = pres(&[("aa", "a"), ("bb", "b")]);
        let plan = plan_rows(&e, &Equation::of("ab", "ba"));
        let mut names: Vec<&Variable> = plan
            .rows()
            .iter()
            .flat_map(|r| [&r.universal, &r.existential])
            .chain(plan.t.iter())
            .chain(plan.s.iter())
            .collect();
        let total = names.len();
        names.sort();
        names.dedup();
        assert_eq!(names.len(), total);
        assert_eq!(plan.rows()[0].universal, var("x1_1"));
        assert_eq!(plan.rows()[2].existential, var("r1_1"));
        assert_eq!(
            plan.query_row(Letter::new('b').unwrap()).existential,
            var("e_b")
        );
    }

    #[test]
    fn phi0_ties_same_letter_rows() {
        let plan = plan_rows(&pres(&[("aa", "b")]), &Equation::of("c", "d"));
        let phi0 = build_phi0(&plan);
        assert_eq!(phi0, parse_formula("x1_1 = x1_2 -> y1_1 = y1_2").unwrap());

        let plan = plan_rows(&Presentation::default(), &Equation::of("a", "b"));
        assert_eq!(build_phi0(&plan), Formula::True);

        // four a-rows and four b-rows, counting the designated ones
        let plan = plan_rows(
            &pres(&[("aa", "a"), ("bb", "b")]),
            &Equation::of("ab", "ba"),
        );
        assert_eq!(conjuncts(&build_phi0(&plan)), 6 + 6);
    }

    #[test]
    fn phi_eq_shapes() {
        let e = pres(&[("aa", "a")]);
        let plan = plan_rows(&e, &Equation::of("a", "a"));
        assert_eq!(
            build_phi_eq(0, &e.equations()[0], &plan),
            parse_formula("x1_1 = y1_2 -> x1_2 = z1_1 -> y1_1 = r1_1").unwrap()
        );

        let e = pres(&[("a", "a")]);
        let plan = plan_rows(&e, &Equation::of("a", "a"));
        assert_eq!(
            build_phi_eq(0, &e.equations()[0], &plan),
            parse_formula("x1_1 = z1_1 -> y1_1 = r1_1").unwrap()
        );

        let e = pres(&[("ab", "ba")]);
        let plan = plan_rows(&e, &Equation::of("a", "a"));
        let Formula::Implies(antecedent, _) = build_phi_eq(0, &e.equations()[0], &plan) else {
            panic!()
        };
        assert_eq!(
            *antecedent,
            parse_formula("x1_1 = y1_2 & z1_1 = r1_2").unwrap()
        );
    }

    #[test]
    fn phi_neq_shapes() {
        let q = Equation::of("a", "b");
        let plan = plan_rows(&Presentation::default(), &q);
        assert_eq!(
            build_phi_neq(&q, &plan),
            parse_formula("(u_a = t1 -> e_a = t0) & (u_b = s1 -> e_b = s0) & t1 = s1 & t0 != s0")
                .unwrap()
        );

        let q = Equation::of("ab", "ba");
        let plan = plan_rows(&Presentation::default(), &q);
        assert_eq!(conjuncts(&build_phi_neq(&q, &plan)), 4 + 2);
    }

    #[test]
    fn compiled_sentences_are_closed_and_valid() {
        let cases = [
            (pres(&[("aa", "a"), ("bb", "b")]), Equation::of("ab", "ba")),
            (Presentation::default(), Equation::of("a", "a")),
            (pres(&[("ab", "ba")]), Equation::of("ab", "ba")),
        ];
        for (e, q) in &cases {
            let f = compile(e, q);
            assert!(f.is_sentence());
            assert!(validate(&f).is_empty(), "{:?}", validate(&f));
            let Formula::Exists(ws, body) = &f else {
                panic!()
            };
            assert_eq!(ws.len(), q.total_len() + 2);
            let Formula::Branch(prefix, _) = &**body else {
                panic!()
            };
            assert_eq!(prefix.universals().len(), plan_rows(e, q).len());
            assert!(prefix.dependencies().all(|(_, d)| d.len() == 1));
            assert_eq!(parse_formula(&print_formula(&f)).unwrap(), f);
        }
    }

    #[test]
    fn mutation_drops_the_disequality() {
        let e = pres(&[("ab", "ba")]);
        let q = Equation::of("ab", "ba");
        let good = print_formula(&compile(&e, &q));
        let bad = print_formula(&compile_with(&e, &q, Mutation::DropSeparation));
        assert!(good.contains("t0 != s0"));
        assert!(!bad.contains("t0 != s0"));
    }
}
