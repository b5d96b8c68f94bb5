//! Compare the compiled sentence with the brute-force oracle on a handful of
//! small instances, size by size.

use henkin::eval::{evaluate, DomainSize, Valuation};
use henkin::oracle::find_witness;
use henkin::reducer::compile;
use henkin::text::{parse_equation, parse_presentation};

const INSTANCES: &[(&str, &str)] = &[
    ("aa = a\nbb = b", "ab = ba"),
    ("", "a = a"),
    ("ab = ba", "ab = ba"),
    ("", "a = b"),
    ("ab = b", "ba = b"),
    ("aaa = a", "aa = a"),
];

fn main() {
    let mut mismatches = 0;
    for (pres, query) in INSTANCES {
        let e = parse_presentation(pres).unwrap();
        let q = parse_equation(query).unwrap();
        let f = compile(&e, &q);
        let mut line = format!("{{{}}} / {q}:", pres.replace('\n', ", "));
        for m in 1..=3 {
            let truth = evaluate(&f, DomainSize::new(m).unwrap(), &Valuation::new()).unwrap();
            let found = find_witness(&e, &q, m).unwrap().is_some();
            if truth != found {
                mismatches += 1;
            }
            line.push_str(&format!(
                " m{m}={}",
                if truth == found {
                    truth.to_string()
                } else {
                    "MISMATCH".into()
                }
            ));
        }
        println!("{line}");
    }
    std::process::exit(if mismatches == 0 { 0 } else { 3 });
}
