//! The modular and the exact elimination engines side by side.

use std::time::Instant;

use nichols::freealg::BraidingSpec;
use nichols::pbw::{nichols_truncate, nichols_truncate_exact};
use nichols::scalars::{Field, FieldSpec};

fn main() {
    let f = Field::new(FieldSpec::new(5, &["q"])).unwrap();
    let spec = BraidingSpec::parse(&f, &[vec!["q", "zeta*q^-1"], vec!["zeta^-1", "q"]]).unwrap();
    let d = 6;

    let t = Instant::now();
    let m = nichols_truncate(&spec, d).unwrap();
    println!("modular: {:?} in {:?}, primes {:?}", m.dims(), t.elapsed(), m.primes());

    let t = Instant::now();
    let e = nichols_truncate_exact(&spec, d).unwrap();
    println!("exact:   {:?} in {:?}", e.dims(), t.elapsed());

    let same = e.blocks().all(|b| m.block(&b.degree).map(|c| &c.basis) == Some(&b.basis));
    println!("identical bases: {same}");
}
