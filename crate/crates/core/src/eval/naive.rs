//! Reference engine: every quantifier ranges over the whole domain and every
//! Henkin prefix is decided by trying all combinations of complete choice
//! tables. Slow, and deliberately independent of the backtracking engine.

use super::{EvalError, Valuation};
use crate::syntax::{Formula, HenkinPrefix, Variable};

pub(super) fn evaluate(
    f: &Formula,
    m: u32,
    env: &Valuation,
    budget: u64,
) -> Result<bool, EvalError> {
    let mut naive = Naive {
        m,
        budget,
        steps: 0,
        scope: env.iter().map(|(v, x)| (v.clone(), x)).collect(),
    };
    naive.eval(f)
}

struct Naive {
    m: u32,
    budget: u64,
    steps: u64,
    /// Innermost binding last.
    scope: Vec<(Variable, u32)>,
}

impl Naive {
    fn step(&mut self) -> Result<(), EvalError> {
        self.steps += 1;
        if self.steps > self.budget {
            return Err(EvalError::BudgetExceeded {
                budget: self.budget,
            });
        }
        Ok(())
    }

    fn value(&self, v: &Variable) -> u32 {
        self.scope
            .iter()
            .rev()
            .find(|(name, _)| name == v)
            .map(|(_, x)| *x)
            .expect("inputs were checked for free variables")
    }

    fn eval(&mut self, f: &Formula) -> Result<bool, EvalError> {
        Ok(match f {
            Formula::True => true,
            Formula::False => false,
            Formula::Eq(a, b) => self.value(a) == self.value(b),
            Formula::Not(g) => !self.eval(g)?,
            Formula::And(gs) => {
                for g in gs {
                    if !self.eval(g)? {
                        return Ok(false);
                    }
                }
                true
            }
            Formula::Or(gs) => {
                for g in gs {
                    if self.eval(g)? {
                        return Ok(true);
                    }
                }
                false
            }
            Formula::Implies(a, b) => !self.eval(a)? || self.eval(b)?,
            Formula::Iff(a, b) => self.eval(a)? == self.eval(b)?,
            Formula::ForAll(vs, body) => self.block(vs, body, true)?,
            Formula::Exists(vs, body) => self.block(vs, body, false)?,
            Formula::Branch(prefix, body) => self.branch(prefix, body)?,
        })
    }

    fn block(
        &mut self,
        vs: &[Variable],
        body: &Formula,
        universal: bool,
    ) -> Result<bool, EvalError> {
        let mark = self.scope.len();
        self.scope.extend(vs.iter().map(|v| (v.clone(), 0)));
        let mut result = universal;
        let mut values = vec![0u32; vs.len()];
        loop {
            self.step()?;
            for (k, &x) in values.iter().enumerate() {
                self.scope[mark + k].1 = x;
            }
            let r = self.eval(body)?;
            if r != universal {
                result = r;
                break;
            }
            if !odometer(&mut values, self.m) {
                break;
            }
        }
        self.scope.truncate(mark);
        Ok(result)
    }

    fn branch(&mut self, prefix: &HenkinPrefix, body: &Formula) -> Result<bool, EvalError> {
        let m = self.m as usize;
        let n = prefix.universals().len();
        let positions: Vec<Vec<usize>> = prefix
            .dependencies()
            .map(|(_, deps)| {
                deps.iter()
                    .map(|d| prefix.universals().iter().position(|u| u == d).unwrap())
                    .collect()
            })
            .collect();
        let sizes: Vec<usize> = positions.iter().map(|p| m.pow(p.len() as u32)).collect();
        let offsets: Vec<usize> = sizes
            .iter()
            .scan(0, |acc, s| {
                let o = *acc;
                *acc += s;
                Some(o)
            })
            .collect();
        let mut tables = vec![0u32; sizes.iter().sum()];

        let mark = self.scope.len();
        self.scope.extend(prefix.bound().map(|v| (v.clone(), 0)));
        let found = loop {
            if self.all_tuples_hold(n, &positions, &offsets, &tables, mark, body)? {
                break true;
            }
            if !odometer(&mut tables, self.m) {
                break false;
            }
        };
        self.scope.truncate(mark);
        Ok(found)
    }

    fn all_tuples_hold(
        &mut self,
        n: usize,
        positions: &[Vec<usize>],
        offsets: &[usize],
        tables: &[u32],
        mark: usize,
        body: &Formula,
    ) -> Result<bool, EvalError> {
        let mut tuple = vec![0u32; n];
        loop {
            self.step()?;
            for (k, &x) in tuple.iter().enumerate() {
                self.scope[mark + k].1 = x;
            }
            for (i, deps) in positions.iter().enumerate() {
                let mut idx = 0usize;
                for &p in deps {
                    idx = idx * self.m as usize + tuple[p] as usize;
                }
                self.scope[mark + n + i].1 = tables[offsets[i] + idx];
            }
            if !self.eval(body)? {
                return Ok(false);
            }
            if !odometer(&mut tuple, self.m) {
                return Ok(true);
            }
        }
    }
}

/// Advances a base-`m` counter, last digit fastest. False once it wraps.
fn odometer(digits: &mut [u32], m: u32) -> bool {
    for d in digits.iter_mut().rev() {
        *d += 1;
        if *d < m {
            return true;
        }
        *d = 0;
    }
    false
}
