//! Lyndon words, factorizations and Shirshov splits.

use nichols::words::{is_lyndon, lyndon_factorize, lyndon_words, shirshov_split, Word};

fn main() {
    let w = Word::new(vec![0, 1, 0, 1, 1, 0, 0, 1]);
    let factors: Vec<String> = lyndon_factorize(&w).unwrap().iter().map(|u| u.to_string()).collect();
    println!("{w} = {}", factors.join(" . "));

    let u = Word::new(vec![0, 0, 1, 0, 1]);
    println!("{u} lyndon: {}", is_lyndon(&u).unwrap());
    let (v, t) = shirshov_split(&u).unwrap();
    println!("shirshov split of {u}: ({v}, {t})");

    for n in 1..=6 {
        let count = lyndon_words(2, n).iter().filter(|l| l.len() == n).count();
        println!("lyndon words of length {n} on two letters: {count}");
    }
}
