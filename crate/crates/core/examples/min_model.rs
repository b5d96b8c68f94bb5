//! Smallest domain on which a sentence holds.

use henkin::eval::{find_min_model, DomainSize};
use henkin::fixtures::infinity_sentence;
use henkin::reducer::compile;
use henkin::text::{parse_equation, parse_formula, parse_presentation};

fn show(found: Option<DomainSize>, max: u32) -> String {
    found.map_or(format!("none up to {max}"), |m| m.to_string())
}

fn main() {
    let three = parse_formula("exists a b c . a != b & b != c & a != c").unwrap();
    println!(
        "three distinct elements: {}",
        show(find_min_model(&three, 5).unwrap(), 5)
    );

    let e = parse_presentation("aa = a\nbb = b").unwrap();
    let q = parse_equation("ab = ba").unwrap();
    println!(
        "{{aa = a, bb = b}} does not entail ab = ba from size {}",
        show(find_min_model(&compile(&e, &q), 3).unwrap(), 3)
    );

    println!(
        "infinity sentence: {}",
        show(find_min_model(&infinity_sentence(), 4).unwrap(), 4)
    );
}
