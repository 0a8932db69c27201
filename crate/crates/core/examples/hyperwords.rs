//! Braided brackets, hyperwords, coproducts and skew derivations in the free algebra.

use nichols::freealg::{ad_power, hyperword, BraidingSpec, FreeElement};
use nichols::scalars::Field;
use nichols::words::Word;

fn main() {
    let f = Field::generic_q();
    let spec = BraidingSpec::parse(&f, &[vec!["q", "q^-1"], vec!["1", "q"]]).unwrap();
    let x1 = FreeElement::letter(&spec, 0);
    let x2 = FreeElement::letter(&spec, 1);

    println!("[x1, x2]_c = {}", x1.braided_bracket(&x2).unwrap());
    for u in [vec![0, 1], vec![0, 0, 1], vec![0, 1, 1], vec![0, 1, 0, 1, 1]] {
        let u = Word::new(u);
        println!("[{u}] = {}", hyperword(&spec, &u).unwrap());
    }

    let serre = ad_power(&spec, 0, 1, 2).unwrap();
    println!("(ad x1)^2(x2) = {serre}");
    for i in 0..2 {
        println!("  d_{}^R = {}", i + 1, serre.skew_derivative_right(i));
    }

    let delta = hyperword(&spec, &Word::new(vec![0, 1])).unwrap().coproduct();
    println!("coproduct of [x1 x2]:");
    for ((l, r), c) in delta.terms() {
        println!("  ({c}) {l} (x) {r}");
    }
}
