//! Cartan type detection and the finite/infinite GK dimension decision.

use nichols::cartan::{decide_gk, detect_cartan, dj_normal_form, GrowthWitnessKind, Verdict};
use nichols::freealg::BraidingSpec;
use nichols::scalars::{Field, FieldSpec};

fn main() {
    let fq = Field::generic_q();
    let fqp = Field::new(FieldSpec::new(1, &["q", "p"])).unwrap();
    let cases = [
        ("B2", BraidingSpec::parse(&fq, &[vec!["q^2", "q^-2"], vec!["1", "q"]]).unwrap()),
        ("G2", BraidingSpec::parse(&fq, &[vec!["q", "q^-3"], vec!["1", "q^3"]]).unwrap()),
        ("affine", BraidingSpec::parse(&fq, &[vec!["q", "q^-2"], vec!["1", "q"]]).unwrap()),
        ("independent", BraidingSpec::parse(&fqp, &[vec!["q", "p"], vec!["1", "q"]]).unwrap()),
        ("trivial", BraidingSpec::parse(&fq, &[vec!["1", "1"], vec!["1", "1"]]).unwrap()),
    ];
    for (name, spec) in &cases {
        match decide_gk(spec, true, 50) {
            Verdict::FiniteGk { cartan, serre_relations } => {
                println!("{name}: finite GK, type {:?}, a = {:?}", cartan.labels, cartan.a);
                for r in serre_relations {
                    println!("  (ad x{})^{}(x{}) = {}", r.i + 1, r.power, r.j + 1, r.element);
                }
                if let Ok(forms) = dj_normal_form(spec, &cartan) {
                    println!("  {}", serde_json::to_string(&forms).unwrap());
                }
            }
            Verdict::InfiniteGk { witness: GrowthWitnessKind::AdString { pair } } => {
                println!("{name}: infinite GK, (ad x{})^m(x{}) never vanishes", pair.0 + 1, pair.1 + 1)
            }
            Verdict::InfiniteGk { witness } => println!("{name}: infinite GK, {witness:?}"),
            Verdict::NotCartan { witness } => println!("{name}: not of Cartan type, {witness}"),
            Verdict::Undecided { reason } => println!("{name}: undecided, {reason}"),
        }
    }
    let c = detect_cartan(&cases[0].1, 50).unwrap();
    println!("B2 symmetrizer {:?}", c.symmetrizer);
}
