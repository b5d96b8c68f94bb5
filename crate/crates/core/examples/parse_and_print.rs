//! Parse a formula, inspect it, and print it back in canonical form.
//!
//! Run with: `cargo run --example parse_and_print -- "forall x . exists y . x != y"`

use henkin::syntax::validate;
use henkin::text::{parse_formula, print_formula};

fn main() {
    let text = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "H{ forall x z ; y(x), w(z) } . (y = w <-> x = z)".to_string());

    let f = match parse_formula(&text) {
        Ok(f) => f,
        Err(e) => {
            eprintln!("parse error at {e}");
            std::process::exit(2);
        }
    };
    println!("canonical: {}", print_formula(&f));

    let free: Vec<String> = f.free_variables().iter().map(ToString::to_string).collect();
    if free.is_empty() {
        println!("closed sentence");
    } else {
        println!("free variables: {}", free.join(", "));
    }
    for d in validate(&f) {
        println!("{d}");
    }

    let again = parse_formula(&print_formula(&f)).expect("printer output reparses");
    assert_eq!(again, f);
    println!("round-trip ok");
}
