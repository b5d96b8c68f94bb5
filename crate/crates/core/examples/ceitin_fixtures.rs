//! The Ceitin semigroup and its two Henkin descriptions: one with twelve
//! one-dependency rows, one with two rows of width ten and eight.

use henkin::eval::{evaluate, DomainSize, Valuation};
use henkin::fixtures::{
    ceitin_e10, ceitin_e10_clauses, ceitin_e10_prefix, ceitin_h12, ceitin_h12_clauses,
    ceitin_h12_prefix, ceitin_presentation, identity_witness_report,
};

fn main() {
    println!("presentation:\n{}", ceitin_presentation());

    let h = ceitin_h12_prefix();
    println!(
        "H-form: {} rows, {} clauses",
        h.row_count().unwrap(),
        ceitin_h12_clauses().len()
    );
    let e = ceitin_e10_prefix();
    let widths: Vec<usize> = (0..2)
        .map(|r| {
            e.existentials()
                .iter()
                .enumerate()
                .filter(|(i, _)| e.deps_of(*i)[0] == e.universals()[r])
                .count()
        })
        .collect();
    println!(
        "E-form: rows of width {:?}, {} clauses",
        widths,
        ceitin_e10_clauses().len()
    );

    for (name, prefix, clauses) in [
        ("h12", h, ceitin_h12_clauses()),
        ("e10", e, ceitin_e10_clauses()),
    ] {
        let failing: Vec<&str> = identity_witness_report(&prefix, &clauses, 2)
            .into_iter()
            .filter(|(_, ok)| !ok)
            .map(|(id, _)| id)
            .collect();
        println!("{name}: clauses failing under identity tables at m=2: {failing:?}");
    }

    for m in 1..=2 {
        let size = DomainSize::new(m).unwrap();
        let env = Valuation::new();
        println!(
            "m = {m}: h12 {}, e10 {}",
            evaluate(&ceitin_h12(), size, &env).unwrap(),
            evaluate(&ceitin_e10(), size, &env).unwrap()
        );
    }
}
