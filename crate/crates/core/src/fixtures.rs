//! Hand-built sentences: the five-generator, seven-equation semigroup with an
//! undecidable word problem, its descriptions under a 12-row Henkin prefix and
//! under a two-row `E_10`-shaped prefix, and the finiteness sentence.
//!
//! The Ceitin formulas are transcribed clause by clause. Every clause keeps
//! an identifier so that tests can point at the exact conjunct that fails.

use crate::eval::{evaluate, DomainSize, Valuation};
use crate::reducer::{separation_gadget, trace_variables, Equation, Letter, Presentation};
use crate::syntax::{var, Formula, HenkinPrefix, Variable};

/// One conjunct of a fixture's matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Clause {
    pub id: &'static str,
    pub formula: Formula,
}

fn clause(id: &'static str, formula: Formula) -> Clause {
    Clause { id, formula }
}

fn eq(a: &str, b: &str) -> Formula {
    Formula::eq(&var(a), &var(b))
}

/// `(a1 = b1 ∧ … ) -> (c = d)`
fn rule(premises: &[(&str, &str)], conclusion: (&str, &str)) -> Formula {
    let antecedent = Formula::and(premises.iter().map(|(a, b)| eq(a, b)).collect());
    antecedent.implies(eq(conclusion.0, conclusion.1))
}

/// `ac=ca, ad=da, bc=cb, bd=db, eca=ce, edb=de, cca=ccae`
pub fn ceitin_presentation() -> Presentation {
    Presentation::new(vec![
        Equation::of("ac", "ca"),
        Equation::of("ad", "da"),
        Equation::of("bc", "cb"),
        Equation::of("bd", "db"),
        Equation::of("eca", "ce"),
        Equation::of("edb", "de"),
        Equation::of("cca", "ccae"),
    ])
}

const H12_TAGS: [&str; 6] = ["a", "b", "c", "d", "e", "cc"];

/// Rows `∀x_q ∃y_q`, `∀x_q' ∃y_q'` for `q` in `a, b, c, d, e, cc`.
pub fn ceitin_h12_prefix() -> HenkinPrefix {
    let mut universals = Vec::new();
    let mut existentials = Vec::new();
    for q in H12_TAGS {
        for prime in ["", "'"] {
            universals.push(var(&format!("x_{q}{prime}")));
            existentials.push(var(&format!("y_{q}{prime}")));
        }
    }
    let deps: Vec<_> = existentials
        .iter()
        .cloned()
        .zip(universals.iter().map(|u| vec![u.clone()]))
        .collect();
    HenkinPrefix::new(universals, existentials, deps).expect("rows are distinct")
}

/// The 14 top-level conjuncts: six `psi` clauses making each primed row
/// choose the same function as its unprimed twin, `phi` making `y_cc` the
/// square of `y_c`, and `phi0..phi6` for the seven equations.
pub fn ceitin_h12_clauses() -> Vec<Clause> {
    let psi_ids = ["psi.a", "psi.b", "psi.c", "psi.d", "psi.e", "psi.cc"];
    let mut out: Vec<Clause> = H12_TAGS
        .iter()
        .zip(psi_ids)
        .map(|(q, id)| {
            let (x, x2) = (format!("x_{q}"), format!("x_{q}'"));
            let (y, y2) = (format!("y_{q}"), format!("y_{q}'"));
            clause(id, rule(&[(&x, &x2)], (&y, &y2)))
        })
        .collect();
    out.push(clause(
        "phi",
        rule(&[("x_c", "x_cc"), ("y_c", "x_c'")], ("y_c'", "y_cc")),
    ));
    out.push(clause(
        "phi0",
        rule(
            &[("x_a", "x_c"), ("x_a'", "y_c"), ("x_c'", "y_a")],
            ("y_c'", "y_a'"),
        ),
    ));
    out.push(clause(
        "phi1",
        rule(
            &[("x_a", "x_d"), ("x_a'", "y_d"), ("x_d'", "y_a")],
            ("y_d'", "y_a'"),
        ),
    ));
    out.push(clause(
        "phi2",
        rule(
            &[("x_b", "x_c"), ("x_b'", "y_c"), ("x_c'", "y_b")],
            ("y_c'", "y_b'"),
        ),
    ));
    out.push(clause(
        "phi3",
        rule(
            &[("x_b", "x_d"), ("x_b'", "y_d"), ("x_d'", "y_b")],
            ("y_d'", "y_b'"),
        ),
    ));
    out.push(clause(
        "phi4",
        rule(
            &[
                ("x_a", "x_e'"),
                ("y_a", "x_c"),
                ("y_e'", "x_c'"),
                ("x_e", "y_c"),
            ],
            ("y_e", "y_c'"),
        ),
    ));
    out.push(clause(
        "phi5",
        rule(
            &[
                ("x_b", "x_e'"),
                ("y_b", "x_d"),
                ("y_d", "x_e"),
                ("y_e'", "x_d'"),
            ],
            ("y_e", "y_d'"),
        ),
    ));
    out.push(clause(
        "phi6",
        rule(
            &[
                ("x_a", "x_e'"),
                ("y_a", "x_cc"),
                ("y_e'", "x_a'"),
                ("y_a'", "x_cc'"),
            ],
            ("y_cc", "y_cc'"),
        ),
    ));
    out
}

pub fn ceitin_h12() -> Formula {
    let matrix = ceitin_h12_clauses()
        .into_iter()
        .map(|c| c.formula)
        .collect();
    Formula::branch(ceitin_h12_prefix(), Formula::And(matrix))
}

const E10_FIRST: [&str; 10] = [
    "y_a", "y_ca", "y_da", "y_b", "y_cb", "y_db", "y_e", "y_eca", "y_de", "y_cca",
];
const E10_SECOND: [&str; 8] = [
    "y_c", "y_ac", "y_d", "y_ad", "y_bc", "y_bd", "y_e'", "y_cca'",
];

/// `∀x1 ∃y_a … ∃y_cca` beside `∀x2 ∃y_c … ∃y_cca'` (10 and 8 existentials).
pub fn ceitin_e10_prefix() -> HenkinPrefix {
    let (x1, x2) = (var("x1"), var("x2"));
    let first = E10_FIRST.iter().map(|n| (var(n), vec![x1.clone()]));
    let second = E10_SECOND.iter().map(|n| (var(n), vec![x2.clone()]));
    let deps: Vec<(Variable, Vec<Variable>)> = first.chain(second).collect();
    let existentials = deps.iter().map(|(e, _)| e.clone()).collect();
    HenkinPrefix::new(vec![x1, x2], existentials, deps).expect("rows are distinct")
}

/// The 13 implications of `gamma`, which tie each composite-named
/// existential to the composition its subscript spells.
pub fn ceitin_e10_gamma() -> Vec<Clause> {
    vec![
        clause("gamma.1", rule(&[("y_a", "x2")], ("y_c", "y_ca"))),
        clause("gamma.2", rule(&[("y_c", "x1")], ("y_a", "y_ac"))),
        clause("gamma.3", rule(&[("y_a", "x2")], ("y_da", "y_d"))),
        clause("gamma.4", rule(&[("y_d", "x1")], ("y_ad", "y_a"))),
        clause("gamma.5", rule(&[("y_b", "x2")], ("y_cb", "y_c"))),
        clause("gamma.6", rule(&[("y_c", "x1")], ("y_b", "y_bc"))),
        clause("gamma.7", rule(&[("y_b", "x2")], ("y_db", "y_d"))),
        clause("gamma.8", rule(&[("y_d", "x1")], ("y_bd", "y_b"))),
        clause("gamma.9", rule(&[("x1", "x2")], ("y_e", "y_e'"))),
        clause("gamma.10", rule(&[("y_ca", "x2")], ("y_eca", "y_e'"))),
        clause("gamma.11", rule(&[("y_e", "x2")], ("y_de", "y_d"))),
        clause("gamma.12", rule(&[("y_ca", "x2")], ("y_cca", "y_c"))),
        clause("gamma.13", rule(&[("x1", "x2")], ("y_cca", "y_cca'"))),
    ]
}

/// `gamma0123` (the four commutation equations grouped), then `gamma4..6`.
pub fn ceitin_e10_axioms() -> Vec<Clause> {
    vec![
        clause(
            "gamma0123",
            eq("x1", "x2").implies(Formula::And(vec![
                eq("y_ca", "y_ac"),
                eq("y_ad", "y_da"),
                eq("y_bc", "y_cb"),
                eq("y_db", "y_bd"),
            ])),
        ),
        clause("gamma4", rule(&[("y_e", "x2")], ("y_eca", "y_c"))),
        clause("gamma5", rule(&[("y_db", "x2")], ("y_de", "y_e'"))),
        clause("gamma6", rule(&[("y_e", "x2")], ("y_cca", "y_cca'"))),
    ]
}

/// Every conjunct of the E-form matrix, `gamma` clauses first.
pub fn ceitin_e10_clauses() -> Vec<Clause> {
    let mut out = ceitin_e10_gamma();
    out.extend(ceitin_e10_axioms());
    out
}

/// `gamma ∧ gamma0123 ∧ gamma4 ∧ gamma5 ∧ gamma6` under the two-row prefix;
/// `gamma` stays one nested conjunction.
pub fn ceitin_e10() -> Formula {
    let gamma = Formula::And(ceitin_e10_gamma().into_iter().map(|c| c.formula).collect());
    let mut matrix = vec![gamma];
    matrix.extend(ceitin_e10_axioms().into_iter().map(|c| c.formula));
    Formula::branch(ceitin_e10_prefix(), Formula::And(matrix))
}

/// The H-form fixture extended with the separation gadget for `query`, using
/// the unprimed row of each letter, under a first-order block `∃ t.. s..`.
/// Returns `None` when the query uses a letter outside `a..=e`.
pub fn ceitin_h12_with_query(query: &Equation) -> Option<Formula> {
    if !query
        .letters()
        .iter()
        .all(|l| ('a'..='e').contains(&l.as_char()))
    {
        return None;
    }
    let (t, s) = trace_variables(query);
    let row_of = |l: Letter| (var(&format!("x_{l}")), var(&format!("y_{l}")));
    let mut matrix: Vec<Formula> = ceitin_h12_clauses()
        .into_iter()
        .map(|c| c.formula)
        .collect();
    matrix.push(separation_gadget(query, row_of, &t, &s));
    let witnesses = t.into_iter().chain(s).collect();
    Some(Formula::exists(
        witnesses,
        Formula::branch(ceitin_h12_prefix(), Formula::And(matrix)),
    ))
}

/// The simplest branched prefix: `y` sees only `x`, `w` sees only `z`.
pub fn simple_henkin_prefix() -> HenkinPrefix {
    HenkinPrefix::new(
        vec![var("x"), var("z")],
        vec![var("y"), var("w")],
        [(var("y"), vec![var("x")]), (var("w"), vec![var("z")])],
    )
    .expect("well formed")
}

/// `∃t H (y = w <-> x = z) ∧ t != y`: some injective self-map misses a point.
pub fn infinity_sentence() -> Formula {
    let matrix = Formula::And(vec![eq("y", "w").iff(eq("x", "z")), eq("t", "y").not()]);
    Formula::exists(
        vec![var("t")],
        Formula::branch(simple_henkin_prefix(), matrix),
    )
}

/// The negation of [`infinity_sentence`]; true exactly on finite domains.
pub fn ehrenfeucht_finiteness() -> Formula {
    infinity_sentence().not()
}

/// For each clause, whether it holds at every universal tuple of size `m`
/// when every existential copies its first dependency (the identity choice).
pub fn identity_witness_report(
    prefix: &HenkinPrefix,
    clauses: &[Clause],
    m: u32,
) -> Vec<(&'static str, bool)> {
    let size = DomainSize::new(m).expect("positive size");
    let n = prefix.universals().len();
    let mut tuple = vec![0u32; n];
    let mut ok = vec![true; clauses.len()];
    loop {
        let mut env = Valuation::new();
        for (u, &x) in prefix.universals().iter().zip(&tuple) {
            env.insert(u.clone(), x);
        }
        for (e, deps) in prefix.dependencies() {
            let x = env.get(&deps[0]).expect("dependency is universal");
            env.insert(e.clone(), x);
        }
        for (c, flag) in clauses.iter().zip(ok.iter_mut()) {
            if *flag && !evaluate(&c.formula, size, &env).expect("clause is quantifier-free") {
                *flag = false;
            }
        }
        let mut k = n;
        loop {
            if k == 0 {
                return clauses.iter().map(|c| c.id).zip(ok).collect();
            }
            k -= 1;
            tuple[k] += 1;
            if tuple[k] < m {
                break;
            }
            tuple[k] = 0;
        }
    }
}
