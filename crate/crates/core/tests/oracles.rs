//! Independent recomputations of what the library derives.

use std::collections::{BTreeMap, HashMap};

use nichols::cartan::{decide_gk, detect_cartan, Verdict as Gk};
use nichols::cli::JobFile;
use nichols::datum::{validate_datum, DatumInput, Link};
use nichols::freealg::{ad_power, hyperword, BraidingSpec, FreeElement};
use nichols::pbw::{growth_family, growth_witness, nichols_truncate, nichols_truncate_exact, pbw_count_check, pbw_extract, star_height};
use nichols::scalars::{Field, FieldSpec, Scalar};
use nichols::series::{expand_product, Height, RootFactor};
use nichols::weyl::{m_table, reflect, GroupoidState, MEntry};
use nichols::words::{words_of_degree, Word};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn spec(f: &Field, rows: &[&[&str]]) -> BraidingSpec {
    let rows: Vec<Vec<&str>> = rows.iter().map(|r| r.to_vec()).collect();
    BraidingSpec::parse(f, &rows).unwrap()
}

type Vector = BTreeMap<Word, Scalar>;

fn add_into(v: &mut Vector, w: Word, c: Scalar) {
    let e = v.entry(w.clone()).or_insert_with(|| c.zero_like());
    *e = &*e + &c;
    if e.is_zero() {
        v.remove(&w);
    }
}

/// Quantum symmetrizer on a word, built as (id (x) Omega_{n-1}) composed with
/// 1 + c_1 + c_1 c_2 + ... : each letter is moved to the front in turn.
fn symmetrizer(s: &BraidingSpec, w: &Word, memo: &mut HashMap<Word, Vector>) -> Vector {
    if let Some(v) = memo.get(w) {
        return v.clone();
    }
    let l = w.letters();
    let mut out = Vector::new();
    if l.len() <= 1 {
        out.insert(w.clone(), s.field().one());
    } else {
        for k in 0..l.len() {
            let mut c = s.field().one();
            for &x in &l[..k] {
                c = &c * s.q(x, l[k]);
            }
            for (u, d) in symmetrizer(s, &w.remove_at(k), memo) {
                add_into(&mut out, Word::letter(l[k]).concat(&u), &c * &d);
            }
        }
    }
    memo.insert(w.clone(), out.clone());
    out
}

/// Rank of a list of sparse vectors, by elimination over the scalar field.
fn rank(rows: Vec<Vector>) -> usize {
    let mut pivots: Vec<(Word, Vector)> = Vec::new();
    for mut v in rows {
        for (p, row) in &pivots {
            if let Some(c) = v.get(p).cloned() {
                for (w, x) in row {
                    add_into(&mut v, w.clone(), -&(&c * x));
                }
            }
        }
        if let Some((p, c)) = v.iter().next().map(|(p, c)| (p.clone(), c.clone())) {
            let inv = c.inv();
            let row: Vector = v.into_iter().map(|(w, x)| (w, &x * &inv)).collect();
            pivots.push((p, row));
        }
    }
    pivots.len()
}

fn braidings() -> Vec<(&'static str, BraidingSpec, usize)> {
    let fq = Field::generic_q();
    let f5 = Field::new(FieldSpec::new(5, &[])).unwrap();
    let f3 = Field::new(FieldSpec::new(3, &[])).unwrap();
    let fqp = Field::new(FieldSpec::new(1, &["q", "p"])).unwrap();
    vec![
        ("A2", spec(&fq, &[&["q", "q^-1"], &["1", "q"]]), 5),
        ("B2", spec(&fq, &[&["q^2", "q^-2"], &["1", "q"]]), 5),
        ("affine", spec(&fq, &[&["q", "q^-2"], &["1", "q"]]), 5),
        ("xi5", spec(&f5, &[&["-1", "-zeta"], &["zeta", "zeta^-2"]]), 5),
        ("A2 at zeta3", spec(&f3, &[&["zeta", "zeta^-1"], &["1", "zeta"]]), 5),
        ("super", spec(&fq, &[&["-1", "q"], &["1", "q^-1"]]), 5),
        ("independent", spec(&fqp, &[&["q", "p"], &["1", "q"]]), 4),
        ("A3", spec(&fq, &[&["q", "q^-1", "1"], &["1", "q", "q^-1"], &["1", "1", "q"]]), 4),
        ("rank three at -1", spec(&f3, &[&["-1", "zeta", "1"], &["1", "-1", "zeta"], &["zeta", "1", "-1"]]), 4),
    ]
}

#[test]
fn block_dimensions_equal_symmetrizer_ranks() {
    for (name, s, d) in braidings() {
        let t = nichols_truncate(&s, d).unwrap();
        let mut memo = HashMap::new();
        for (deg, dim) in t.dims_by_multidegree() {
            let rows = words_of_degree(&deg).iter().map(|w| symmetrizer(&s, w, &mut memo)).collect();
            assert_eq!(rank(rows), dim, "{name} at {deg:?}");
        }
    }
}

#[test]
fn exact_and_modular_engines_agree() {
    for (name, s, d) in braidings() {
        let d = d.min(4);
        let m = nichols_truncate(&s, d).unwrap();
        let e = nichols_truncate_exact(&s, d).unwrap();
        for b in e.blocks() {
            assert_eq!(m.block(&b.degree).unwrap().basis, b.basis, "{name} at {:?}", b.degree);
        }
    }
}

/// u is a basis word iff [u] is not congruent, modulo the ideal, to a
/// combination of greater hyperwords of the same degree.
#[test]
fn basis_words_are_hyperword_independent() {
    for (name, s, _) in braidings().into_iter().filter(|(_, s, _)| s.theta() == 2).take(3) {
        let t = nichols_truncate(&s, 4).unwrap();
        let mut memo = HashMap::new();
        let image = |x: &FreeElement, memo: &mut HashMap<Word, Vector>| {
            let mut v = Vector::new();
            for (w, c) in x.terms() {
                for (u, d) in symmetrizer(&s, w, memo) {
                    add_into(&mut v, u, c * &d);
                }
            }
            v
        };
        for deg in t.dims_by_multidegree().keys() {
            let words = words_of_degree(deg);
            for u in &words {
                let greater: Vec<Vector> = words
                    .iter()
                    .filter(|v| *v > u)
                    .map(|v| image(&hyperword(&s, v).unwrap(), &mut memo))
                    .collect();
                let mut with_u = greater.clone();
                with_u.push(image(&hyperword(&s, u).unwrap(), &mut memo));
                let independent = rank(with_u) > rank(greater);
                assert_eq!(independent, t.is_basis_word(u), "{name}: {u}");
            }
        }
    }
}

#[test]
fn observed_heights_are_orders() {
    for (name, s, d) in braidings() {
        let r = pbw_extract(&nichols_truncate(&s, d).unwrap());
        for g in &r.generators {
            if let Some(h) = g.observed_height {
                assert_eq!(star_height(&g.q_uu), Height::Finite(h), "{name}: [{}]", g.word);
                assert_eq!(g.height, Height::Finite(h));
            }
        }
    }
}

#[test]
fn power_of_a_nilpotent_generator_vanishes() {
    let f = Field::new(FieldSpec::new(5, &[])).unwrap();
    let s = spec(&f, &[&["zeta^2"]]);
    let t = nichols_truncate(&s, 6).unwrap();
    let x5 = FreeElement::word(&s, Word::letter(0).pow(5));
    assert!(t.reduces_to_zero(&x5).unwrap());
    assert!(!t.reduces_to_zero(&FreeElement::word(&s, Word::letter(0).pow(4))).unwrap());
}

#[test]
fn cartan_exponents_give_vanishing_ad_strings() {
    let fq = Field::generic_q();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for n in [1u32, 3, 4, 5, 7] {
        let f = if n == 1 { fq.clone() } else { Field::new(FieldSpec::new(n, &[])).unwrap() };
        for _ in 0..6 {
            let qii = if n == 1 { f.param("q").unwrap().pow(rng.gen_range(1..=2)) } else { f.zeta_pow(1) };
            let bound = if n == 1 { 4 } else { n as i64 };
            let r = -rng.gen_range(0..bound.min(4));
            let q12 = if n == 1 { f.param("q").unwrap().pow(rng.gen_range(-2..=2)) } else { f.zeta_pow(rng.gen_range(0..n as i64)) };
            let q21 = &qii.pow(r) * &q12.inv();
            let s = BraidingSpec::new(&f, vec![vec![qii.clone(), q12], vec![q21, f.from_int(3)]]).unwrap();
            let x = ad_power(&s, 0, 1, (1 - r) as usize).unwrap();
            let t = nichols_truncate(&s, (2 - r) as usize).unwrap();
            assert!(t.reduces_to_zero(&x).unwrap(), "q_ii = {qii}, r = {r}");
        }
    }
}

#[test]
fn cartan_fixtures() {
    let f = Field::generic_q();
    let cases = [
        spec(&f, &[&["q", "q^-1"], &["1", "q"]]),
        spec(&f, &[&["q^2", "q^-2"], &["1", "q"]]),
        spec(&f, &[&["q", "q^-3"], &["1", "q^3"]]),
        spec(&f, &[&["q", "q^2"], &["q^-2", "q"]]),
        spec(&f, &[&["q^2", "q^-2", "1"], &["1", "q^2", "q^-2"], &["1", "1", "q"]]),
    ];
    for s in cases {
        let c = detect_cartan(&s, 50).unwrap();
        let m = m_table(s.matrix(), 50);
        for i in 0..s.theta() {
            for j in 0..s.theta() {
                if i != j {
                    assert_eq!(m.get(i, j), MEntry::Defined(-c.a[i][j]));
                }
            }
        }
        let Gk::FiniteGk { serre_relations, .. } = decide_gk(&s, true, 50) else {
            panic!("expected finite GK dimension")
        };
        let top = serre_relations.iter().map(|r| r.power + 1).max().unwrap();
        let t = nichols_truncate(&s, top).unwrap();
        for r in &serre_relations {
            assert!(t.reduces_to_zero(&r.element).unwrap(), "({}, {})", r.i + 1, r.j + 1);
        }
        let r = pbw_extract(&nichols_truncate(&s, 6).unwrap());
        assert!(pbw_count_check(&nichols_truncate(&s, 6).unwrap(), &r).passed());
    }
}

#[test]
fn growth_family_is_independent() {
    let f = Field::new(FieldSpec::new(1, &["q", "p"])).unwrap();
    let s = spec(&f, &[&["q", "p"], &["1", "q"]]);
    let t = nichols_truncate(&s, 6).unwrap();
    for n in 1..=6 {
        let wit = growth_witness(&s, n, 50).unwrap();
        assert_eq!(wit.pair, (0, 1));
        let fam = growth_family(wit.pair, n);
        assert_eq!(fam.len() as u64, wit.lower_bound);
        assert!(fam.iter().all(|w| t.is_basis_word(w)));
        assert!(t.dims()[n] as u64 >= wit.lower_bound);
    }
}

#[test]
fn reflected_diagonal_entry() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let mut seen = 0;
    while seen < 100 {
        let n = rng.gen_range(3..=12u32);
        let f = Field::new(FieldSpec::new(n, &[])).unwrap();
        let q: Vec<Vec<Scalar>> = (0..2)
            .map(|_| (0..2).map(|_| f.zeta_pow(rng.gen_range(0..n as i64))).collect())
            .collect();
        let s = BraidingSpec::new(&f, q).unwrap();
        let st = GroupoidState::initial(&s, 50);
        let (i, j) = (0, 1);
        let Ok(next) = reflect(&st, i, 50) else { continue };
        let m = st.m.get(i, j).value().unwrap();
        let q = &st.q;
        let want = &(&(&q[i][i].pow(m) * &q[j][i]) * &q[i][j]).pow(m) * &q[j][j];
        assert_eq!(next.q[j][j], want);
        seen += 1;
    }
}

#[test]
fn datum_braiding_is_of_its_own_cartan_type() {
    let f = Field::generic_q();
    let raw = DatumInput {
        rank: 3,
        a: vec![vec![2, -1, 0], vec![-2, 2, 0], vec![0, 0, 2]],
        d: None,
        q: vec!["q".into(), "q^-2".into()],
        g: vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]],
        chi: vec![
            vec!["q^2".into(), "q^-2".into(), "q^2".into()],
            vec!["1".into(), "q".into(), "q^-2".into()],
            vec!["q^-2".into(), "q^2".into(), "q^-2".into()],
        ],
        lambda: vec![Link { i: 1, j: 3, value: 1 }],
    };
    let d = validate_datum(&f, &raw).unwrap();
    let c = detect_cartan(&d.braiding().unwrap(), 50).unwrap();
    assert_eq!(c.a, raw.a);
    assert!(c.finite_type);
    let json = serde_json::to_string(&d.to_input()).unwrap();
    let back: DatumInput = serde_json::from_str(&json).unwrap();
    assert_eq!(back, d.to_input());
    let toml_text = toml::to_string(&d.to_input()).unwrap();
    assert_eq!(toml::from_str::<DatumInput>(&toml_text).unwrap(), d.to_input());
    assert_eq!(validate_datum(&f, &back).unwrap().lambda(0, 2), 1);

    let path = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/datum_a2xa1.toml");
    let job = JobFile::load(&path).unwrap();
    let raw = job.datum.as_ref().unwrap();
    let d = validate_datum(&job.field().unwrap(), raw).unwrap();
    assert_eq!(detect_cartan(&d.braiding().unwrap(), 50).unwrap().a, raw.a);
}

fn brute_force(factors: &[RootFactor], theta: usize, cap: usize) -> BTreeMap<Vec<i64>, i64> {
    let mut out = BTreeMap::new();
    fn rec(k: usize, fs: &[RootFactor], cur: Vec<i64>, cap: usize, out: &mut BTreeMap<Vec<i64>, i64>) {
        if cur.iter().sum::<i64>() as usize > cap {
            return;
        }
        if k == fs.len() {
            *out.entry(cur).or_insert(0) += 1;
            return;
        }
        let limit = match fs[k].height {
            Height::Finite(h) => h as i64 - 1,
            Height::Infinite => cap as i64,
        };
        for e in 0..=limit {
            let next: Vec<i64> = cur.iter().zip(&fs[k].alpha).map(|(a, b)| a + e * b).collect();
            rec(k + 1, fs, next, cap, out);
        }
    }
    rec(0, factors, vec![0; theta], cap, &mut out);
    out
}

proptest! {
    #[test]
    fn expansion_counts_tuples(
        theta in 1usize..=3,
        raw in prop::collection::vec((prop::collection::vec(0i64..=2, 3), prop_oneof![Just(2u64), Just(3), Just(0)]), 1..=5),
    ) {
        let factors: Vec<RootFactor> = raw
            .into_iter()
            .filter_map(|(a, h)| {
                let alpha: Vec<i64> = a[..theta].to_vec();
                let height = if h == 0 { Height::Infinite } else { Height::Finite(h) };
                alpha.iter().any(|&x| x > 0).then(|| RootFactor::new(alpha, height))
            })
            .collect();
        let got = expand_product(&factors, theta, 7).unwrap();
        let want = brute_force(&factors, theta, 7);
        prop_assert_eq!(got.coeffs.iter().filter(|(_, c)| **c != 0).map(|(k, c)| (k.clone(), *c)).collect::<BTreeMap<_, _>>(), want);
    }
}
