//! Products of q-numbers as multigraded series, factorization and reflection.

use nichols::series::{expand_product, factor_series, reflect_series, Height, RootFactor};

fn main() {
    let a2 = vec![
        RootFactor::new(vec![1, 0], Height::Infinite),
        RootFactor::new(vec![1, 1], Height::Infinite),
        RootFactor::new(vec![0, 1], Height::Infinite),
    ];
    let s = expand_product(&a2, 2, 6).unwrap();
    println!("A2 series by total degree: {:?}", s.by_total_degree());

    let restricted = vec![
        RootFactor::new(vec![1, 0], Height::Finite(3)),
        RootFactor::new(vec![1, 1], Height::Finite(3)),
        RootFactor::new(vec![0, 1], Height::Finite(3)),
    ];
    let s = expand_product(&restricted, 2, 6).unwrap();
    println!("A2 at a cube root: {:?}", s.by_total_degree());
    let back = factor_series(&s, &|_| Height::Finite(3)).unwrap();
    let degs: Vec<_> = back.factors.iter().map(|f| f.alpha.clone()).collect();
    println!("recovered factors {degs:?}, certified through degree {}", back.certified_through);

    let reflected = reflect_series(&a2, 0, &[None, Some(1)]).unwrap();
    let degs: Vec<_> = reflected.iter().map(|f| f.alpha.clone()).collect();
    println!("s_1 applied to the A2 roots: {degs:?}");
}
