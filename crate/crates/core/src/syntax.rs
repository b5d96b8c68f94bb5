//! Abstract syntax for first-order logic with Henkin prefixes over the empty
//! vocabulary with equality.
//!
//! A [`HenkinPrefix`] is a triple `(A, E, D)`: universals, existentials and a
//! dependency relation telling which universals each existential may observe.
//! Dependency lists are kept in declaration order so that choice-function
//! tables have a canonical tuple layout.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

/// Words that the concrete syntax reserves and that therefore cannot name a
/// variable.
pub const RESERVED_WORDS: [&str; 4] = ["forall", "exists", "true", "false"];

/// A variable name: ASCII letters, digits, `_` and `'`, starting with a letter.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Variable(String);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NameError {
    #[error("variable name is empty")]
    Empty,
    #[error("variable name `{0}` must start with an ASCII letter")]
    BadStart(String),
    #[error("variable name `{name}` contains illegal character {ch:?}")]
    IllegalChar { name: String, ch: char },
    #[error("`{0}` is a reserved word")]
    Reserved(String),
}

impl Variable {
    pub fn new(name: impl Into<String>) -> Result<Self, NameError> {
        let name = name.into();
        let mut chars = name.chars();
        match chars.next() {
            None => return Err(NameError::Empty),
            Some(c) if !c.is_ascii_alphabetic() => return Err(NameError::BadStart(name)),
            Some(_) => {}
        }
        if let Some(ch) = chars.find(|c| !is_ident_char(*c)) {
            return Err(NameError::IllegalChar { name, ch });
        }
        if RESERVED_WORDS.contains(&name.as_str()) {
            return Err(NameError::Reserved(name));
        }
        Ok(Variable(name))
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

pub(crate) fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '\''
}

impl fmt::Display for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Shorthand for building variables from names known to be well formed.
///
/// Panics on an invalid name; meant for fixtures, tests and examples.
pub fn var(name: &str) -> Variable {
    Variable::new(name).unwrap_or_else(|e| panic!("invalid variable name: {e}"))
}

/// One violated [`HenkinPrefix`] invariant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PrefixViolation {
    DuplicateUniversal(Variable),
    DuplicateExistential(Variable),
    /// The name is both universal and existential.
    Overlap(Variable),
    /// `existential` depends on a name that is not a universal of the prefix.
    UnknownDependency {
        existential: Variable,
        target: Variable,
    },
    DuplicateDependency {
        existential: Variable,
        target: Variable,
    },
    MissingDependencies(Variable),
    /// A dependency entry for a name that is not an existential.
    StrayDependencies(Variable),
    DuplicateDependencyEntry(Variable),
    Empty,
}

impl fmt::Display for PrefixViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use PrefixViolation::*;
        match self {
            DuplicateUniversal(v) => write!(f, "duplicate universal `{v}`"),
            DuplicateExistential(v) => write!(f, "duplicate existential `{v}`"),
            Overlap(v) => write!(f, "`{v}` is both universal and existential"),
            UnknownDependency { existential, target } => write!(
                f,
                "existential `{existential}` depends on `{target}`, which is not a universal of the prefix"
            ),
            DuplicateDependency { existential, target } => write!(
                f,
                "existential `{existential}` lists dependency `{target}` more than once"
            ),
            MissingDependencies(v) => write!(f, "no dependency list for existential `{v}`"),
            StrayDependencies(v) => {
                write!(f, "dependency list given for `{v}`, which is not an existential")
            }
            DuplicateDependencyEntry(v) => {
                write!(f, "more than one dependency list for existential `{v}`")
            }
            Empty => write!(f, "prefix binds no variables"),
        }
    }
}

/// Every invariant a candidate prefix violates.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid Henkin prefix: {}", list_violations(.0))]
pub struct PrefixError(pub Vec<PrefixViolation>);

fn list_violations(vs: &[PrefixViolation]) -> String {
    vs.iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}

/// A branched quantifier prefix `(A, E, D)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct HenkinPrefix {
    universals: Vec<Variable>,
    existentials: Vec<Variable>,
    deps: Vec<Vec<Variable>>,
}

impl HenkinPrefix {
    /// Validates and builds a prefix. `deps` must hold exactly one entry per
    /// existential; the prefix keeps the existentials' declared order.
    pub fn new<I>(
        universals: Vec<Variable>,
        existentials: Vec<Variable>,
        deps: I,
    ) -> Result<Self, PrefixError>
    where
        I: IntoIterator<Item = (Variable, Vec<Variable>)>,
    {
        let mut violations = Vec::new();
        let entries: Vec<(Variable, Vec<Variable>)> = deps.into_iter().collect();
        let mut ordered = Vec::with_capacity(existentials.len());
        for e in &existentials {
            let mut found = entries.iter().filter(|(name, _)| name == e);
            match found.next() {
                Some((_, list)) => ordered.push(list.clone()),
                None => {
                    violations.push(PrefixViolation::MissingDependencies(e.clone()));
                    ordered.push(Vec::new());
                }
            }
            if found.next().is_some() && !existentials_repeat(&existentials, e) {
                violations.push(PrefixViolation::DuplicateDependencyEntry(e.clone()));
            }
        }
        for (name, _) in &entries {
            if !existentials.contains(name) {
                violations.push(PrefixViolation::StrayDependencies(name.clone()));
            }
        }
        let prefix = HenkinPrefix {
            universals,
            existentials,
            deps: ordered,
        };
        violations.extend(prefix.violations());
        if violations.is_empty() {
            Ok(prefix)
        } else {
            Err(PrefixError(violations))
        }
    }

    /// Builds a prefix from parallel existential/dependency lists without
    /// checking anything. [`validate`] still reports the violations.
    pub fn new_unchecked(
        universals: Vec<Variable>,
        existentials: Vec<Variable>,
        deps: Vec<Vec<Variable>>,
    ) -> Self {
        assert_eq!(
            existentials.len(),
            deps.len(),
            "one dependency list per existential"
        );
        HenkinPrefix {
            universals,
            existentials,
            deps,
        }
    }

    /// Invariant violations of an already assembled prefix.
    pub fn violations(&self) -> Vec<PrefixViolation> {
        let mut out = Vec::new();
        if self.universals.is_empty() && self.existentials.is_empty() {
            out.push(PrefixViolation::Empty);
        }
        for (i, u) in self.universals.iter().enumerate() {
            if self.universals[..i].contains(u) {
                out.push(PrefixViolation::DuplicateUniversal(u.clone()));
            }
        }
        for (i, e) in self.existentials.iter().enumerate() {
            if self.existentials[..i].contains(e) {
                out.push(PrefixViolation::DuplicateExistential(e.clone()));
            }
            if self.universals.contains(e) {
                out.push(PrefixViolation::Overlap(e.clone()));
            }
        }
        for (e, list) in self.existentials.iter().zip(&self.deps) {
            for (j, d) in list.iter().enumerate() {
                if !self.universals.contains(d) {
                    out.push(PrefixViolation::UnknownDependency {
                        existential: e.clone(),
                        target: d.clone(),
                    });
                } else if list[..j].contains(d) {
                    out.push(PrefixViolation::DuplicateDependency {
                        existential: e.clone(),
                        target: d.clone(),
                    });
                }
            }
        }
        out
    }

    pub fn universals(&self) -> &[Variable] {
        &self.universals
    }

    pub fn existentials(&self) -> &[Variable] {
        &self.existentials
    }

    /// Dependency list of the `i`-th existential.
    pub fn deps_of(&self, i: usize) -> &[Variable] {
        &self.deps[i]
    }

    pub fn dependencies(&self) -> impl Iterator<Item = (&Variable, &[Variable])> {
        self.existentials
            .iter()
            .zip(self.deps.iter().map(Vec::as_slice))
    }

    /// All variables bound by the prefix, universals first.
    pub fn bound(&self) -> impl Iterator<Item = &Variable> {
        self.universals.iter().chain(&self.existentials)
    }

    /// Number of `∀x ∃y` rows when the prefix has the row shape of `H_n`,
    /// i.e. every existential depends on exactly one universal of its own.
    pub fn row_count(&self) -> Option<usize> {
        let row_shaped = self.universals.len() == self.existentials.len()
            && self
                .deps
                .iter()
                .zip(&self.universals)
                .all(|(d, u)| d.len() == 1 && &d[0] == u);
        row_shaped.then_some(self.universals.len())
    }
}

fn existentials_repeat(existentials: &[Variable], e: &Variable) -> bool {
    existentials.iter().filter(|x| *x == e).count() > 1
}

impl fmt::Debug for HenkinPrefix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "H{{ forall")?;
        for u in &self.universals {
            write!(f, " {u}")?;
        }
        write!(f, " ;")?;
        for (i, (e, d)) in self.dependencies().enumerate() {
            let sep = if i == 0 { " " } else { ", " };
            write!(f, "{sep}{e}({d:?})")?;
        }
        write!(f, " }}")
    }
}

/// `mk_prefix`: same as [`HenkinPrefix::new`].
pub fn mk_prefix<I>(
    universals: Vec<Variable>,
    existentials: Vec<Variable>,
    deps: I,
) -> Result<HenkinPrefix, PrefixError>
where
    I: IntoIterator<Item = (Variable, Vec<Variable>)>,
{
    HenkinPrefix::new(universals, existentials, deps)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("quantifier family index must be at least 1")]
pub struct ZeroRows;

/// `H_n`: rows `∀x_i ∃y_i` with `y_i` depending only on `x_i`.
pub fn build_hn(n: usize) -> Result<HenkinPrefix, ZeroRows> {
    if n == 0 {
        return Err(ZeroRows);
    }
    let xs: Vec<Variable> = (1..=n).map(|i| var(&format!("x{i}"))).collect();
    let ys: Vec<Variable> = (1..=n).map(|i| var(&format!("y{i}"))).collect();
    let deps = ys.iter().cloned().zip(xs.iter().map(|x| vec![x.clone()]));
    Ok(HenkinPrefix::new(xs.clone(), ys.clone(), deps).expect("H_n is well formed"))
}

/// `E_n`: `∀x_1 ∃y_1…y_n` beside `∀x_2 ∃z_1…z_n`.
pub fn build_en(n: usize) -> Result<HenkinPrefix, ZeroRows> {
    if n == 0 {
        return Err(ZeroRows);
    }
    let (x1, x2) = (var("x1"), var("x2"));
    let ys = (1..=n).map(|i| var(&format!("y{i}")));
    let zs = (1..=n).map(|i| var(&format!("z{i}")));
    let mut existentials = Vec::with_capacity(2 * n);
    let mut deps = Vec::with_capacity(2 * n);
    for y in ys {
        existentials.push(y.clone());
        deps.push((y, vec![x1.clone()]));
    }
    for z in zs {
        existentials.push(z.clone());
        deps.push((z, vec![x2.clone()]));
    }
    Ok(HenkinPrefix::new(vec![x1, x2], existentials, deps).expect("E_n is well formed"))
}

/// Sentences and formulas. The vocabulary is empty: the only atoms are
/// equalities between variables and the two constants.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    Eq(Variable, Variable),
    True,
    False,
    Not(Box<Formula>),
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    ForAll(Vec<Variable>, Box<Formula>),
    Exists(Vec<Variable>, Box<Formula>),
    Branch(HenkinPrefix, Box<Formula>),
}

impl Formula {
    pub fn eq(a: &Variable, b: &Variable) -> Self {
        Formula::Eq(a.clone(), b.clone())
    }

    pub fn neq(a: &Variable, b: &Variable) -> Self {
        Formula::Eq(a.clone(), b.clone()).not()
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(self) -> Self {
        Formula::Not(Box::new(self))
    }

    pub fn implies(self, rhs: Formula) -> Self {
        Formula::Implies(Box::new(self), Box::new(rhs))
    }

    pub fn iff(self, rhs: Formula) -> Self {
        Formula::Iff(Box::new(self), Box::new(rhs))
    }

    /// Conjunction; an empty list gives `True` and a singleton its only member.
    pub fn and(mut parts: Vec<Formula>) -> Self {
        match parts.len() {
            0 => Formula::True,
            1 => parts.pop().unwrap(),
            _ => Formula::And(parts),
        }
    }

    /// Disjunction; an empty list gives `False` and a singleton its only member.
    pub fn or(mut parts: Vec<Formula>) -> Self {
        match parts.len() {
            0 => Formula::False,
            1 => parts.pop().unwrap(),
            _ => Formula::Or(parts),
        }
    }

    pub fn forall(vars: Vec<Variable>, body: Formula) -> Self {
        Formula::ForAll(vars, Box::new(body))
    }

    pub fn exists(vars: Vec<Variable>, body: Formula) -> Self {
        Formula::Exists(vars, Box::new(body))
    }

    pub fn branch(prefix: HenkinPrefix, body: Formula) -> Self {
        Formula::Branch(prefix, Box::new(body))
    }

    pub fn free_variables(&self) -> BTreeSet<Variable> {
        let mut out = BTreeSet::new();
        let mut bound = Vec::new();
        collect_free(self, &mut bound, &mut out);
        out
    }

    pub fn is_sentence(&self) -> bool {
        self.free_variables().is_empty()
    }
}

/// `free_variables`: same as [`Formula::free_variables`].
pub fn free_variables(f: &Formula) -> BTreeSet<Variable> {
    f.free_variables()
}

fn collect_free<'a>(f: &'a Formula, bound: &mut Vec<&'a Variable>, out: &mut BTreeSet<Variable>) {
    match f {
        Formula::Eq(a, b) => {
            for v in [a, b] {
                if !bound.contains(&v) {
                    out.insert(v.clone());
                }
            }
        }
        Formula::True | Formula::False => {}
        Formula::Not(g) => collect_free(g, bound, out),
        Formula::And(gs) | Formula::Or(gs) => {
            for g in gs {
                collect_free(g, bound, out);
            }
        }
        Formula::Implies(a, b) | Formula::Iff(a, b) => {
            collect_free(a, bound, out);
            collect_free(b, bound, out);
        }
        Formula::ForAll(vs, body) | Formula::Exists(vs, body) => {
            let mark = bound.len();
            bound.extend(vs.iter());
            collect_free(body, bound, out);
            bound.truncate(mark);
        }
        Formula::Branch(prefix, body) => {
            let mark = bound.len();
            bound.extend(prefix.bound());
            collect_free(body, bound, out);
            bound.truncate(mark);
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Severity {
    Warning,
    Error,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub severity: Severity,
    pub message: String,
}

impl Diagnostic {
    fn error(message: String) -> Self {
        Diagnostic {
            severity: Severity::Error,
            message,
        }
    }

    fn warning(message: String) -> Self {
        Diagnostic {
            severity: Severity::Warning,
            message,
        }
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.severity {
            Severity::Warning => "warning",
            Severity::Error => "error",
        };
        write!(f, "{tag}: {}", self.message)
    }
}

/// Checks every structural invariant. Inner binders that shadow an outer
/// binder produce warnings; everything else is an error.
pub fn validate(f: &Formula) -> Vec<Diagnostic> {
    let mut diags = Vec::new();
    let mut scope = Vec::new();
    validate_into(f, &mut scope, &mut diags);
    diags
}

/// True when [`validate`] reports no errors (warnings are allowed).
pub fn is_valid(f: &Formula) -> bool {
    validate(f).iter().all(|d| !d.is_error())
}

fn check_binder<'a>(
    kind: &str,
    vars: impl Iterator<Item = &'a Variable>,
    scope: &[&'a Variable],
    diags: &mut Vec<Diagnostic>,
) {
    let mut seen: Vec<&Variable> = Vec::new();
    for v in vars {
        if seen.contains(&v) {
            diags.push(Diagnostic::error(format!("{kind} binds `{v}` twice")));
        } else if scope.contains(&v) {
            diags.push(Diagnostic::warning(format!(
                "{kind} binding of `{v}` shadows an outer binder"
            )));
        }
        seen.push(v);
    }
}

fn validate_into<'a>(f: &'a Formula, scope: &mut Vec<&'a Variable>, diags: &mut Vec<Diagnostic>) {
    match f {
        Formula::Eq(..) | Formula::True | Formula::False => {}
        Formula::Not(g) => validate_into(g, scope, diags),
        Formula::And(gs) | Formula::Or(gs) => {
            if gs.len() < 2 {
                let op = if matches!(f, Formula::And(_)) {
                    "conjunction"
                } else {
                    "disjunction"
                };
                diags.push(Diagnostic::error(format!(
                    "{op} with {} operand(s); use the constant or the operand itself",
                    gs.len()
                )));
            }
            for g in gs {
                validate_into(g, scope, diags);
            }
        }
        Formula::Implies(a, b) | Formula::Iff(a, b) => {
            validate_into(a, scope, diags);
            validate_into(b, scope, diags);
        }
        Formula::ForAll(vs, body) | Formula::Exists(vs, body) => {
            let kind = if matches!(f, Formula::ForAll(..)) {
                "forall"
            } else {
                "exists"
            };
            if vs.is_empty() {
                diags.push(Diagnostic::error(format!("{kind} binds no variables")));
            }
            check_binder(kind, vs.iter(), scope, diags);
            let mark = scope.len();
            scope.extend(vs.iter());
            validate_into(body, scope, diags);
            scope.truncate(mark);
        }
        Formula::Branch(prefix, body) => {
            for v in prefix.violations() {
                diags.push(Diagnostic::error(v.to_string()));
            }
            let mut shadowed: Vec<&Variable> = Vec::new();
            for v in prefix.bound() {
                if scope.contains(&v) && !shadowed.contains(&v) {
                    diags.push(Diagnostic::warning(format!(
                        "Henkin prefix binding of `{v}` shadows an outer binder"
                    )));
                    shadowed.push(v);
                }
            }
            let mark = scope.len();
            scope.extend(prefix.bound());
            validate_into(body, scope, diags);
            scope.truncate(mark);
        }
    }
}
