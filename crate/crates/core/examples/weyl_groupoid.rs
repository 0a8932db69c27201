//! Reflections of braiding matrices and the Weyl groupoid.

use nichols::freealg::BraidingSpec;
use nichols::scalars::{Field, FieldSpec};
use nichols::weyl::{explore, reflect, weyl_equivalent, GroupoidState, Verdict};

fn main() {
    let f5 = Field::new(FieldSpec::new(5, &[])).unwrap();
    let xi = BraidingSpec::parse(&f5, &[vec!["-1", "-zeta"], vec!["zeta", "zeta^-2"]]).unwrap();
    let start = GroupoidState::initial(&xi, 50);
    println!("m table: {} {}", start.m.get(0, 1), start.m.get(1, 0));
    let next = reflect(&start, 0, 50).unwrap();
    let q: Vec<Vec<String>> = next.q.iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect();
    println!("after s_1: {q:?}");

    let report = explore(&xi, 1000, 50);
    println!(
        "{} states, {} arrows, {} roots, standard = {}",
        report.state_count(),
        report.arrows.len(),
        report.roots.len(),
        report.standard
    );

    let fq = Field::generic_q();
    let b2 = BraidingSpec::parse(&fq, &[vec!["q^2", "q^-2"], vec!["1", "q"]]).unwrap();
    let r = explore(&b2, 1000, 50);
    println!("B2: {} states, |W0| = {:?}", r.state_count(), r.w0_order);

    let affine = BraidingSpec::parse(&fq, &[vec!["q", "q^-2"], vec!["1", "q"]]).unwrap();
    match explore(&affine, 100, 50).verdict {
        Verdict::Finite => println!("affine: finite"),
        Verdict::ExceededCap(n) => println!("affine: more than {n} states"),
    }

    let reflected = BraidingSpec::new(&f5, next.q.clone()).unwrap();
    println!("xi against its reflection: {:?}", weyl_equivalent(&xi, &reflected, 100, 50));
    let b2_swapped = BraidingSpec::parse(&fq, &[vec!["q", "1"], vec!["q^-2", "q^2"]]).unwrap();
    println!("B2 against its relabelling: {:?}", weyl_equivalent(&b2, &b2_swapped, 100, 50));
}
