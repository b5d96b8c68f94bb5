//! First-order logic with Henkin (branched) quantifiers over the empty
//! vocabulary with equality.
//!
//! * [`syntax`]: formulas and Henkin prefixes `(A, E, D)`, plus the `H_n` and
//!   `E_n` families.
//! * [`text`]: a parser and canonical printer for formulas, and the
//!   line-oriented format for semigroup presentations.
//! * [`eval`]: truth on finite domains by choice-table search, with an
//!   exhaustive reference engine beside the backtracking one.
//! * [`reducer`]: compiles a word-problem instance `E ⊭ v = w` into a Henkin
//!   sentence that is satisfiable on the same domain sizes.
//! * [`oracle`]: brute-force search for unary functions witnessing `E ⊭ v = w`,
//!   used to cross-check the compiler.
//! * [`fixtures`]: the Ceitin semigroup, its 12-row and two-row Henkin
//!   descriptions, and the finiteness sentence.
//! * [`cli`]: the `henkin` command-line tool.
//!
//! ```
//! use henkin::eval::{evaluate, DomainSize, Valuation};
//! use henkin::fixtures::ehrenfeucht_finiteness;
//!
//! let finite = ehrenfeucht_finiteness();
//! let m = DomainSize::new(3).unwrap();
//! assert!(evaluate(&finite, m, &Valuation::new()).unwrap());
//! ```

pub mod cli;
pub mod eval;
pub mod fixtures;
pub mod oracle;
pub mod reducer;
pub mod syntax;
pub mod text;

pub use eval::{evaluate, evaluate_naive, find_min_model, DomainSize, Evaluator, Valuation};
pub use reducer::{compile, Equation, Presentation};
pub use syntax::{Formula, HenkinPrefix, Variable};
pub use text::{parse_formula, print_formula};
