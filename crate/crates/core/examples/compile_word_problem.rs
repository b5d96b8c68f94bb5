//! Compile "does {aa = a, bb = b} fail to entail ab = ba?" into a Henkin
//! sentence and show how its rows were allocated.

use henkin::reducer::{compile, plan_rows, RowOrigin};
use henkin::text::{parse_equation, parse_presentation, print_formula};

fn main() {
    let e = parse_presentation("aa = a\nbb = b\n").unwrap();
    let q = parse_equation("ab = ba").unwrap();

    let plan = plan_rows(&e, &q);
    println!("{} rows:", plan.len());
    for row in plan.rows() {
        let origin = match &row.origin {
            RowOrigin::Equation {
                equation,
                side,
                position,
            } => format!("equation {} {:?} letter {position}", equation + 1, side),
            RowOrigin::Query => "query".to_string(),
        };
        println!(
            "  {}/{}  letter {}  ({origin})",
            row.universal,
            row.existential,
            row.letter.as_char()
        );
    }

    let f = compile(&e, &q);
    println!();
    println!("{}", print_formula(&f));
}
