//! Arithmetic in Q(zeta_N)(q_1, ..., q_m).

use nichols::scalars::{q_binomial, Field, FieldSpec, PowerSearch};

fn main() {
    let f = Field::new(FieldSpec::new(6, &["q", "p"])).unwrap();
    let a = f.parse("(q^2 - zeta*p)/(q + 1)").unwrap();
    let b = f.parse("zeta^5 + q^-1").unwrap();
    println!("a = {a}");
    println!("b = {b}");
    println!("a + b = {}", &a + &b);
    println!("a * b = {}", &a * &b);
    println!("a / a = {}", &a * &a.inv());

    for text in ["zeta^2", "-zeta", "q^3", "q - 1", "-1"] {
        let x = f.parse(text).unwrap();
        println!("order of {text}: {:?}", x.unit_order().unwrap());
    }

    let z = f.zeta_pow(1);
    match z.solve_power(&f.parse("zeta^4").unwrap(), 50) {
        PowerSearch::Found(k) => println!("zeta^{k} = zeta^4"),
        other => println!("{other:?}"),
    }

    let q = f.param("q").unwrap();
    println!("binom(4, 2)_q = {}", q_binomial(4, 2, &q));
    println!("binom(6, 3) at zeta = {}", q_binomial(6, 3, &z));
}
