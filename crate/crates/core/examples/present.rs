//! Presentation of U(D) for a generic datum with linking.

use nichols::datum::{emit_presentation, expected_census, validate_datum, DatumInput, Link};
use nichols::scalars::Field;

fn main() {
    let s = |x: &str| x.to_string();
    let raw = DatumInput {
        rank: 3,
        a: vec![vec![2, -1, 0], vec![-1, 2, 0], vec![0, 0, 2]],
        d: None,
        q: vec![s("q"), s("q^-1")],
        g: vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]],
        chi: vec![
            vec![s("q"), s("1"), s("q")],
            vec![s("q^-1"), s("q"), s("1")],
            vec![s("q^-1"), s("1"), s("q^-1")],
        ],
        lambda: vec![Link { i: 1, j: 3, value: 1 }, Link { i: 2, j: 3, value: 0 }],
    };
    let datum = validate_datum(&Field::generic_q(), &raw).unwrap();
    let p = emit_presentation(&datum).unwrap();
    print!("{}", p.to_text());
    println!("census {:?}", expected_census(&datum));
}
