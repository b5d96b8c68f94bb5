//! Generators and helpers shared by the integration test targets.

#![allow(dead_code)]

use henkin::reducer::{Equation, Letter, Presentation, Word};
use henkin::syntax::{var, Formula, HenkinPrefix, Variable};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::Rng;

/// A Branch prefix as plain data, so tests can permute and extend it before
/// building the real thing.
#[derive(Debug, Clone)]
pub struct PrefixShape {
    pub universals: Vec<Variable>,
    pub existentials: Vec<Variable>,
    /// Indices into `universals`, in declaration order.
    pub deps: Vec<Vec<usize>>,
}

impl PrefixShape {
    pub fn build(&self) -> HenkinPrefix {
        HenkinPrefix::new(
            self.universals.clone(),
            self.existentials.clone(),
            self.existentials.iter().cloned().zip(
                self.deps
                    .iter()
                    .map(|d| d.iter().map(|&i| self.universals[i].clone()).collect()),
            ),
        )
        .expect("generated prefixes are valid")
    }

    pub fn bound(&self) -> Vec<Variable> {
        self.universals
            .iter()
            .chain(&self.existentials)
            .cloned()
            .collect()
    }

    /// Total number of table entries at domain size `m`.
    pub fn table_entries(&self, m: u32) -> u64 {
        self.deps
            .iter()
            .map(|d| (m as u64).pow(d.len() as u32))
            .sum()
    }
}

fn names(stem: &str, n: usize) -> Vec<Variable> {
    (1..=n).map(|i| var(&format!("{stem}{i}"))).collect()
}

pub fn prefix_shape(max_univ: usize, max_exist: usize) -> impl Strategy<Value = PrefixShape> {
    (1..=max_univ, 1..=max_exist).prop_flat_map(|(n, k)| {
        prop::collection::vec(prop::collection::vec(any::<bool>(), n), k).prop_map(move |masks| {
            PrefixShape {
                universals: names("x", n),
                existentials: names("y", k),
                deps: masks
                    .iter()
                    .map(|mask| (0..n).filter(|&i| mask[i]).collect())
                    .collect(),
            }
        })
    })
}

/// Quantifier-free formulas over `vars`, every operand count legal.
pub fn matrix(vars: Vec<Variable>, depth: u32) -> BoxedStrategy<Formula> {
    let v = vars.clone();
    let leaf = prop_oneof![
        8 => (0..v.len(), 0..v.len()).prop_map(move |(i, j)| Formula::Eq(v[i].clone(), v[j].clone())),
        1 => Just(Formula::True),
        1 => Just(Formula::False),
    ];
    leaf.prop_recursive(depth, 24, 3, |inner| {
        prop_oneof![
            inner.clone().prop_map(|f| Formula::Not(Box::new(f))),
            prop::collection::vec(inner.clone(), 2..=3).prop_map(Formula::And),
            prop::collection::vec(inner.clone(), 2..=3).prop_map(Formula::Or),
            (inner.clone(), inner.clone())
                .prop_map(|(a, b)| Formula::Implies(Box::new(a), Box::new(b))),
            (inner.clone(), inner).prop_map(|(a, b)| Formula::Iff(Box::new(a), Box::new(b))),
        ]
    })
    .boxed()
}

pub fn branch_formula(
    max_univ: usize,
    max_exist: usize,
) -> impl Strategy<Value = (PrefixShape, Formula)> {
    prefix_shape(max_univ, max_exist).prop_flat_map(|shape| {
        let bound = shape.bound();
        (Just(shape), matrix(bound, 3))
    })
}

/// Arbitrary formulas, possibly open, mixing first-order and Branch blocks.
pub fn any_formula() -> BoxedStrategy<Formula> {
    let pool: Vec<Variable> = ["a", "b", "c", "u", "v"].iter().map(|s| var(s)).collect();
    let p = pool.clone();
    let atoms = matrix(pool.clone(), 2);
    atoms
        .prop_recursive(3, 40, 3, move |inner| {
            let p1 = p.clone();
            let p2 = p.clone();
            prop_oneof![
                inner.clone().prop_map(|f| Formula::Not(Box::new(f))),
                prop::collection::vec(inner.clone(), 2..=3).prop_map(Formula::And),
                prop::collection::vec(inner.clone(), 2..=3).prop_map(Formula::Or),
                (inner.clone(), inner.clone())
                    .prop_map(|(a, b)| Formula::Implies(Box::new(a), Box::new(b))),
                (inner.clone(), inner.clone())
                    .prop_map(|(a, b)| Formula::Iff(Box::new(a), Box::new(b))),
                (
                    any::<bool>(),
                    prop::sample::subsequence(p1, 1..=2),
                    inner.clone()
                )
                    .prop_map(|(universal, vs, body)| {
                        if universal {
                            Formula::ForAll(vs, Box::new(body))
                        } else {
                            Formula::Exists(vs, Box::new(body))
                        }
                    }),
                (prop::sample::subsequence(p2, 2..=4), inner, any::<u8>()).prop_map(
                    |(vs, body, bits)| {
                        let (univ, exist) = vs.split_at(vs.len() / 2);
                        let deps = exist.iter().enumerate().map(|(i, e)| {
                            let d = univ
                                .iter()
                                .enumerate()
                                .filter(|(j, _)| bits >> ((i * 2 + j) % 8) & 1 == 1)
                                .map(|(_, u)| u.clone())
                                .collect();
                            (e.clone(), d)
                        });
                        let prefix = HenkinPrefix::new(univ.to_vec(), exist.to_vec(), deps)
                            .expect("disjoint names");
                        Formula::Branch(prefix, Box::new(body))
                    }
                ),
            ]
        })
        .boxed()
}

/// Renames every bound variable `v` to `v_r`. Free variables are kept.
pub fn alpha_rename(f: &Formula) -> Formula {
    fn go(f: &Formula, bound: &[Variable]) -> Formula {
        let r = |v: &Variable| {
            if bound.contains(v) {
                var(&format!("{}_r", v.name()))
            } else {
                v.clone()
            }
        };
        match f {
            Formula::Eq(a, b) => Formula::Eq(r(a), r(b)),
            Formula::True => Formula::True,
            Formula::False => Formula::False,
            Formula::Not(g) => Formula::Not(Box::new(go(g, bound))),
            Formula::And(gs) => Formula::And(gs.iter().map(|g| go(g, bound)).collect()),
            Formula::Or(gs) => Formula::Or(gs.iter().map(|g| go(g, bound)).collect()),
            Formula::Implies(a, b) => {
                Formula::Implies(Box::new(go(a, bound)), Box::new(go(b, bound)))
            }
            Formula::Iff(a, b) => Formula::Iff(Box::new(go(a, bound)), Box::new(go(b, bound))),
            Formula::ForAll(vs, body) | Formula::Exists(vs, body) => {
                let mut inner = bound.to_vec();
                inner.extend(vs.iter().cloned());
                let body = Box::new(go(body, &inner));
                let vs = vs.iter().map(|v| var(&format!("{}_r", v.name()))).collect();
                if matches!(f, Formula::ForAll(..)) {
                    Formula::ForAll(vs, body)
                } else {
                    Formula::Exists(vs, body)
                }
            }
            Formula::Branch(prefix, body) => {
                let mut inner = bound.to_vec();
                inner.extend(prefix.bound().cloned());
                let rn = |v: &Variable| var(&format!("{}_r", v.name()));
                let renamed = HenkinPrefix::new(
                    prefix.universals().iter().map(rn).collect(),
                    prefix.existentials().iter().map(rn).collect(),
                    prefix
                        .dependencies()
                        .map(|(e, d)| (rn(e), d.iter().map(rn).collect())),
                )
                .expect("renaming preserves validity");
                Formula::Branch(renamed, Box::new(go(body, &inner)))
            }
        }
    }
    go(f, &[])
}

/// First-order reading of a full-dependency prefix: all universals, then all
/// existentials.
pub fn full_collapse(shape: &PrefixShape, body: &Formula) -> Formula {
    Formula::ForAll(
        shape.universals.clone(),
        Box::new(Formula::Exists(
            shape.existentials.clone(),
            Box::new(body.clone()),
        )),
    )
}

/// `forall x1 . exists y1 . ... forall xn . exists yn . body`
pub fn alternating(shape: &PrefixShape, body: &Formula) -> Formula {
    let mut f = body.clone();
    for (x, y) in shape.universals.iter().zip(&shape.existentials).rev() {
        f = Formula::ForAll(
            vec![x.clone()],
            Box::new(Formula::Exists(vec![y.clone()], Box::new(f))),
        );
    }
    f
}

pub fn full_shape(n: usize, k: usize) -> PrefixShape {
    PrefixShape {
        universals: names("x", n),
        existentials: names("y", k),
        deps: vec![(0..n).collect(); k],
    }
}

pub fn triangular_shape(n: usize) -> PrefixShape {
    PrefixShape {
        universals: names("x", n),
        existentials: names("y", n),
        deps: (1..=n).map(|i| (0..i).collect()).collect(),
    }
}

/// Random quantifier-free matrix over `vars`, for seeded (non-proptest) use.
pub fn random_matrix<R: Rng>(rng: &mut R, vars: &[Variable], depth: u32) -> Formula {
    if depth == 0 || rng.gen_bool(0.25) {
        let a = vars.choose(rng).unwrap().clone();
        let b = vars.choose(rng).unwrap().clone();
        return Formula::Eq(a, b);
    }
    match rng.gen_range(0..5) {
        0 => Formula::Not(Box::new(random_matrix(rng, vars, depth - 1))),
        1 => Formula::And(
            (0..rng.gen_range(2..=3))
                .map(|_| random_matrix(rng, vars, depth - 1))
                .collect(),
        ),
        2 => Formula::Or(
            (0..rng.gen_range(2..=3))
                .map(|_| random_matrix(rng, vars, depth - 1))
                .collect(),
        ),
        3 => Formula::Implies(
            Box::new(random_matrix(rng, vars, depth - 1)),
            Box::new(random_matrix(rng, vars, depth - 1)),
        ),
        _ => Formula::Iff(
            Box::new(random_matrix(rng, vars, depth - 1)),
            Box::new(random_matrix(rng, vars, depth - 1)),
        ),
    }
}

pub fn letter(c: char) -> Letter {
    Letter::new(c).unwrap()
}

pub fn word() -> impl Strategy<Value = Word> {
    prop::collection::vec(prop::sample::select(vec!['a', 'b']), 1..=3)
        .prop_map(|cs| Word::new(cs.into_iter().map(letter).collect()).unwrap())
}

/// Small instances over {a, b}: up to two equations of total length at most
/// six and a query of length at most four.
pub fn instance() -> impl Strategy<Value = (Presentation, Equation)> {
    let eq = || (word(), word()).prop_map(|(l, r)| Equation::new(l, r));
    (
        prop::collection::vec(eq(), 0..=2).prop_filter("total length at most 6", |es| {
            es.iter().map(Equation::total_len).sum::<usize>() <= 6
        }),
        eq().prop_filter("query length at most 4", |q| q.total_len() <= 4),
    )
        .prop_map(|(es, q)| (Presentation::new(es), q))
}

/// The fixed reduction corpus: presentation text, query text, and the
/// expected smallest size (within 1..=3) at which a witness exists.
pub const REDUCTION_CORPUS: &[(&str, &str, Option<u32>)] = &[
    ("aa = a\nbb = b", "ab = ba", Some(2)),
    ("", "a = a", None),
    ("ab = ba", "ab = ba", None),
    ("", "a = b", Some(2)),
    ("a = b", "a = b", None),
    ("aa = a", "a = aa", None),
    ("ab = ba", "aab = aba", None),
    ("aa = a", "ab = ba", Some(2)),
    ("ab = b", "ba = b", Some(3)),
    ("aaa = a", "aa = a", Some(2)),
    ("ab = a\nba = b", "aa = a", None),
    ("aa = a", "aaa = a", None),
];
