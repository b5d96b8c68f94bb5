//! Ask the backtracking engine for choice tables, then read them back.
//!
//! `y` may only look at `x` and `w` only at `z`, yet the two must coincide
//! exactly when `x = z`. On a finite domain the identity functions do it.

use henkin::eval::{DomainSize, Evaluator, Valuation};
use henkin::syntax::var;
use henkin::text::parse_formula;

fn main() {
    let f = parse_formula("H{ forall x z ; y(x), w(z) } . (y = w <-> x = z)").unwrap();
    let evaluator = Evaluator::with_budget(1_000_000);
    for m in 1..=3 {
        let size = DomainSize::new(m).unwrap();
        match evaluator.evaluate_with_witness(&f, size, &Valuation::new()) {
            Ok(Some(w)) => {
                println!("m = {m}: true");
                print!("{w}");
                let y = w.table(&var("y")).unwrap();
                let images: Vec<u32> = (0..m).map(|x| y.get(&[x])).collect();
                println!("y is injective: {}", {
                    let mut s = images.clone();
                    s.sort();
                    s.dedup();
                    s.len() == images.len()
                });
            }
            Ok(None) => println!("m = {m}: false"),
            Err(e) => println!("m = {m}: {e}"),
        }
    }

    // A budget that is too small is reported, never mistaken for `false`.
    let tight = Evaluator::with_budget(3);
    let r = tight.evaluate(&f, DomainSize::new(3).unwrap(), &Valuation::new());
    println!("with budget 3: {r:?}");
}
