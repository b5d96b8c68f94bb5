//! Search for unary functions that satisfy a presentation but separate a
//! query, and check the result independently.

use henkin::oracle::{check_witness, find_witness, tr_apply};
use henkin::reducer::Word;
use henkin::text::{parse_equation, parse_presentation};

fn main() {
    let e = parse_presentation("aa = a\nbb = b\n").unwrap();
    let q = parse_equation("ab = ba").unwrap();
    for m in 1..=3 {
        match find_witness(&e, &q, m).unwrap() {
            None => println!("m = {m}: none"),
            Some(w) => {
                println!("m = {m}:");
                println!("{w}");
                assert!(check_witness(&e, &q, &w));
                let ab = Word::parse("ab").unwrap();
                let ba = Word::parse("ba").unwrap();
                println!(
                    "  ab({p}) = {}, ba({p}) = {}",
                    tr_apply(&ab, w.point, &w.tables),
                    tr_apply(&ba, w.point, &w.tables),
                    p = w.point
                );
            }
        }
    }
}
