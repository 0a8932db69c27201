//! Truncated Nichols algebra: Hilbert function, PBW generators with heights, roots.

use nichols::freealg::BraidingSpec;
use nichols::pbw::{nichols_truncate, pbw_count_check, pbw_extract};
use nichols::scalars::{Field, FieldSpec};

fn show(name: &str, spec: &BraidingSpec, d: usize) {
    let t = nichols_truncate(spec, d).unwrap();
    let r = pbw_extract(&t);
    println!("{name}: dims {:?}", t.dims());
    for g in &r.generators {
        println!("  [{}] degree {:?} q_uu = {} height {}", g.word, g.degree, g.q_uu, g.height);
    }
    let roots: Vec<_> = r.roots.iter().map(|e| e.vector.clone()).collect();
    println!("  roots {roots:?}, count check {}", pbw_count_check(&t, &r).passed());
}

fn main() {
    let fq = Field::generic_q();
    show("A2", &BraidingSpec::parse(&fq, &[vec!["q", "q^-1"], vec!["1", "q"]]).unwrap(), 6);
    show("G2", &BraidingSpec::parse(&fq, &[vec!["q", "q^-3"], vec!["1", "q^3"]]).unwrap(), 10);

    let f5 = Field::new(FieldSpec::new(5, &[])).unwrap();
    let xi = BraidingSpec::parse(&f5, &[vec!["-1", "-zeta"], vec!["zeta", "zeta^-2"]]).unwrap();
    show("order five, non-Cartan", &xi, 8);
}
