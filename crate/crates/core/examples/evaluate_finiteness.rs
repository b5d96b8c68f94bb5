//! The finiteness sentence holds on every finite domain and its companion,
//! which asserts a Dedekind-infinite domain, holds on none.

use henkin::eval::{evaluate, evaluate_naive, DomainSize, Valuation};
use henkin::fixtures::{ehrenfeucht_finiteness, infinity_sentence};
use henkin::text::print_formula;

fn main() {
    let finite = ehrenfeucht_finiteness();
    let infinite = infinity_sentence();
    println!("finite:   {}", print_formula(&finite));
    println!("infinite: {}", print_formula(&infinite));
    println!();
    println!("m  finite  infinite  (naive engine agrees)");
    for m in 1..=4 {
        let size = DomainSize::new(m).unwrap();
        let env = Valuation::new();
        let a = evaluate(&finite, size, &env).unwrap();
        let b = evaluate(&infinite, size, &env).unwrap();
        let agree = a == evaluate_naive(&finite, size, &env).unwrap()
            && b == evaluate_naive(&infinite, size, &env).unwrap();
        println!("{m}  {a:<6}  {b:<8}  {agree}");
    }
}
