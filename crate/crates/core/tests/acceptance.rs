//! One line per criterion; exits nonzero if any fails.

use std::collections::BTreeMap;
use std::path::Path;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use nichols::cartan::{decide_gk, Verdict as Gk};
use nichols::cli::JobFile;
use nichols::datum::{emit_presentation, expected_census, validate_datum, Census, RelationKind};
use nichols::freealg::{ad_power, hyperword, word_coproduct, BraidingSpec, FreeElement};
use nichols::pbw::{nichols_truncate, pbw_count_check, pbw_extract};
use nichols::scalars::{Field, FieldSpec, Scalar};
use nichols::series::{expand_product, factor_series, Height, RootFactor};
use nichols::weyl::{braiding_at_basis, explore, m_table, reflect, GroupoidReport, GroupoidState, MEntry, Verdict};
use nichols::words::{words_of_length, Word};

type Check = Result<String, String>;

const M_CAP: u64 = 50;

fn spec(f: &Field, rows: &[&[&str]]) -> BraidingSpec {
    let rows: Vec<Vec<&str>> = rows.iter().map(|r| r.to_vec()).collect();
    BraidingSpec::parse(f, &rows).unwrap()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(t: Instant, limit: Duration, what: &str) -> Result<(), String> {
    let e = t.elapsed();
    ensure(e < limit, || format!("{what} took {e:?}, limit {limit:?}"))
}

fn xi_spec() -> BraidingSpec {
    let f = Field::new(FieldSpec::new(5, &[])).unwrap();
    spec(&f, &[&["-1", "-zeta"], &["zeta", "zeta^-2"]])
}

fn criterion_1() -> Check {
    let t = Instant::now();
    let s = xi_spec();
    let f = s.field().clone();
    let src = GroupoidState::initial(&s, M_CAP);
    let dst = reflect(&src, 0, M_CAP).map_err(|e| e.to_string())?;
    let want = spec(&f, &[&["-1", "zeta^-1"], &["-zeta^-1", "1"]]);
    ensure(dst.q == want.matrix(), || format!("reflected matrix {:?}", dst.q))?;
    ensure(matches!(dst.m.get(1, 0), MEntry::Undefined { .. }), || {
        format!("m21 = {} at the new state", dst.m.get(1, 0))
    })?;
    let rep = explore(&s, 10_000, M_CAP);
    ensure(!rep.standard, || "reported standard".into())?;
    within(t, Duration::from_secs(1), "criterion 1")?;
    Ok(format!("m21 {}, {} states, standard = false", dst.m.get(1, 0), rep.state_count()))
}

fn cartan_cases() -> Vec<(&'static str, BraidingSpec, usize, usize, usize)> {
    let f = Field::generic_q();
    vec![
        ("A1xA1", spec(&f, &[&["q", "q^2"], &["q^-2", "q"]]), 6, 2, 4),
        ("A2", spec(&f, &[&["q", "q^-1"], &["1", "q"]]), 6, 3, 6),
        ("B2", spec(&f, &[&["q^2", "q^-2"], &["1", "q"]]), 6, 4, 8),
        ("G2", spec(&f, &[&["q", "q^-3"], &["1", "q^3"]]), 10, 6, 12),
    ]
}

fn criterion_2() -> Check {
    let mut out = Vec::new();
    for (name, s, d, roots, _) in cartan_cases() {
        let t = Instant::now();
        let tq = nichols_truncate(&s, d).map_err(|e| e.to_string())?;
        let r = pbw_extract(&tq);
        let check = pbw_count_check(&tq, &r);
        ensure(r.root_count() == roots, || format!("{name}: {} roots", r.root_count()))?;
        ensure(check.passed(), || format!("{name}: count check fails at {:?}", check.first_mismatch))?;
        let limit = if name == "G2" { 300 } else { 10 };
        within(t, Duration::from_secs(limit), name)?;
        out.push(format!("{name} {roots}"));
    }
    Ok(out.join(", "))
}

fn criterion_3() -> Check {
    let mut out = Vec::new();
    for (name, s, _, _, states) in cartan_cases() {
        let t = Instant::now();
        let rep = explore(&s, 10_000, M_CAP);
        ensure(rep.verdict == Verdict::Finite, || format!("{name}: {:?}", rep.verdict))?;
        ensure(rep.state_count() == states, || format!("{name}: {} states", rep.state_count()))?;
        ensure(rep.standard, || format!("{name}: not standard"))?;
        ensure(rep.w0_order == Some(states as u64), || format!("{name}: w0 {:?}", rep.w0_order))?;
        within(t, Duration::from_secs(1), name)?;
        out.push(format!("{name} {states}"));
    }
    Ok(out.join(", "))
}

fn criterion_4() -> Check {
    let t = Instant::now();
    let f = Field::new(FieldSpec::new(1, &["q", "p"])).unwrap();
    let s = spec(&f, &[&["q", "p"], &["1", "q"]]);
    let v = decide_gk(&s, false, M_CAP);
    ensure(matches!(v, Gk::InfiniteGk { .. }), || format!("verdict {v:?}"))?;
    let dims = nichols_truncate(&s, 6).map_err(|e| e.to_string())?.dims();
    for n in 1..=6 {
        ensure(dims[n] >= 1 << (n - 1), || format!("dim B^{n} = {} < 2^{}", dims[n], n - 1))?;
    }
    within(t, Duration::from_secs(60), "criterion 4")?;
    Ok(format!("dims {:?}", &dims[1..]))
}

/// (r)!_q prod_{k<r} (1 - q^k p), computed from scratch.
fn scalar_criterion(q: &Scalar, p: &Scalar, r: usize) -> Scalar {
    let one = q.one_like();
    let mut acc = one.clone();
    for n in 1..=r {
        let mut qn = q.zero_like();
        let mut pw = one.clone();
        for _ in 0..n {
            qn = &qn + &pw;
            pw = &pw * q;
        }
        acc = &acc * &qn;
    }
    let mut pw = one.clone();
    for _ in 0..r {
        acc = &acc * &(&one - &(&pw * p));
        pw = &pw * q;
    }
    acc
}

fn random_rational(f: &Field, rng: &mut ChaCha8Rng) -> Scalar {
    loop {
        let n: i64 = rng.gen_range(-5..=5);
        let d: i64 = rng.gen_range(1..=4);
        if n != 0 && n.abs() != d {
            return f.from_ratio(n, d);
        }
    }
}

fn criterion_5() -> Check {
    let t = Instant::now();
    let f = Field::rationals();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut vanishing = 0;
    for case in 0..100 {
        let q11 = random_rational(&f, &mut rng);
        let q22 = random_rational(&f, &mut rng);
        let i = rng.gen_range(0..2);
        let qii = if i == 0 { &q11 } else { &q22 };
        let r: usize = rng.gen_range(1..=4);
        let p = if rng.gen_bool(0.5) {
            qii.pow(-rng.gen_range(0..r as i64))
        } else {
            random_rational(&f, &mut rng)
        };
        let q12 = random_rational(&f, &mut rng);
        let q21 = &p * &q12.inv();
        let s = BraidingSpec::new(&f, vec![vec![q11.clone(), q12], vec![q21, q22.clone()]]).unwrap();
        let x = ad_power(&s, i, 1 - i, r).map_err(|e| e.to_string())?;
        let tq = nichols_truncate(&s, r + 1).map_err(|e| e.to_string())?;
        let symbolic = tq.reduces_to_zero(&x).map_err(|e| e.to_string())?;
        let scalar = scalar_criterion(qii, &p, r).is_zero();
        ensure(symbolic == scalar, || format!("case {case}: symbolic {symbolic}, scalar {scalar}, r = {r}"))?;
        vanishing += symbolic as usize;
    }
    within(t, Duration::from_secs(120), "criterion 5")?;
    Ok(format!("100 agree, {vanishing} vanishing"))
}

fn criterion_6() -> Check {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let heights = [Height::Finite(2), Height::Finite(3), Height::Infinite];
    for case in 0..100 {
        let theta = rng.gen_range(1..=3);
        let mut table: BTreeMap<Vec<i64>, Height> = BTreeMap::new();
        let mut input = Vec::new();
        for _ in 0..rng.gen_range(1..=6) {
            let alpha = loop {
                let a: Vec<i64> = (0..theta).map(|_| rng.gen_range(0..=2)).collect();
                if a.iter().any(|&x| x > 0) {
                    break a;
                }
            };
            let h = *table
                .entry(alpha.clone())
                .or_insert_with(|| *heights.choose(&mut rng).unwrap());
            input.push(RootFactor::new(alpha, h));
        }
        let series = expand_product(&input, theta, 10).map_err(|e| e.to_string())?;
        let height_of = |a: &[i64]| table.get(a).copied().unwrap_or(Height::Infinite);
        let got = factor_series(&series, &height_of).map_err(|e| format!("case {case}: {e}"))?;
        input.sort();
        ensure(got.factors == input, || format!("case {case}: {:?} vs {:?}", got.factors, input))?;
    }
    within(t, Duration::from_secs(30), "criterion 6")?;
    Ok("100 round-trips".into())
}

fn criterion_7() -> Check {
    let t = Instant::now();
    let f = Field::new(FieldSpec::new(1, &["q", "p"])).unwrap();
    let s = spec(&f, &[&["q", "p"], &["1", "q"]]);
    for n in 1..=5 {
        let words = words_of_length(2, n);
        let mut rank = 0;
        for u in &words {
            let h = hyperword(&s, u).map_err(|e| e.to_string())?;
            ensure(h.coefficient(u).is_one(), || format!("[{u}] has leading coefficient {}", h.coefficient(u)))?;
            for v in h.terms().keys() {
                ensure(v >= u, || format!("[{u}] contains the smaller word {v}"))?;
            }
            rank += 1;
        }
        ensure(rank == 1 << n, || format!("{rank} hyperwords in degree {n}"))?;
    }
    let dims = nichols_truncate(&s, 5).map_err(|e| e.to_string())?.dims();
    ensure(dims == [1, 2, 4, 8, 16, 32], || format!("dims {dims:?}"))?;
    within(t, Duration::from_secs(10), "criterion 7")?;
    Ok("unitriangular through degree 5, dims 2^n".into())
}

fn random_braiding(f: &Field, theta: usize, rng: &mut ChaCha8Rng) -> BraidingSpec {
    let q = f.param("q").unwrap();
    let rows = (0..theta)
        .map(|_| {
            (0..theta)
                .map(|_| {
                    let x = q.pow(rng.gen_range(-3..=3));
                    if rng.gen_bool(0.2) {
                        -&x
                    } else {
                        x
                    }
                })
                .collect()
        })
        .collect();
    BraidingSpec::new(f, rows).unwrap().with_max_degree(16)
}

fn random_homogeneous(s: &BraidingSpec, rng: &mut ChaCha8Rng) -> FreeElement {
    let f = s.field();
    let q = f.param("q").unwrap();
    let n = rng.gen_range(1..=5);
    let base: Vec<usize> = (0..n).map(|_| rng.gen_range(0..s.theta())).collect();
    let mut x = FreeElement::zero(s);
    for _ in 0..rng.gen_range(1..=3) {
        let mut letters = base.clone();
        letters.shuffle(rng);
        let c = &f.from_int(rng.gen_range(-3..=3)) + &q.pow(rng.gen_range(-2..=2));
        x = &x + &FreeElement::term(s, Word::new(letters), c);
    }
    if x.is_zero() {
        FreeElement::word(s, Word::new(base))
    } else {
        x
    }
}

type Triple = BTreeMap<(Word, Word, Word), Scalar>;

fn add_to(m: &mut Triple, k: (Word, Word, Word), c: Scalar) {
    let e = m.entry(k.clone()).or_insert_with(|| c.zero_like());
    *e = &*e + &c;
    if e.is_zero() {
        m.remove(&k);
    }
}

fn criterion_8() -> Check {
    let t = Instant::now();
    let f = Field::generic_q();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let e = |x: Result<FreeElement, _>| x.map_err(|e: nichols::freealg::FreeAlgError| e.to_string());
    for case in 0..200 {
        let s = random_braiding(&f, rng.gen_range(2..=3), &mut rng);
        let (u, v, w) = (
            random_homogeneous(&s, &mut rng),
            random_homogeneous(&s, &mut rng),
            random_homogeneous(&s, &mut rng),
        );
        let deg = |x: &FreeElement| x.homogeneous_degree().unwrap();
        let quv = s.chi(&deg(&u), &deg(&v));
        let qvw = s.chi(&deg(&v), &deg(&w));
        let uv = e(u.braided_bracket(&v))?;
        let uw = e(u.braided_bracket(&w))?;
        let vw = e(v.braided_bracket(&w))?;
        let jac_l = e(uv.braided_bracket(&w))?;
        let jac_r = &(&e(u.braided_bracket(&vw))? - &e(v.multiply(&uw))?.scale(&quv)) + &e(uw.multiply(&v))?.scale(&qvw);
        ensure(jac_l == jac_r, || format!("case {case}: braided Jacobi"))?;
        let der_l = e(u.braided_bracket(&e(v.multiply(&w))?))?;
        let der_r = &e(uv.multiply(&w))? + &e(v.multiply(&uw))?.scale(&quv);
        ensure(der_l == der_r, || format!("case {case}: [u, vw]"))?;
        let der2_l = e(e(u.multiply(&v))?.braided_bracket(&w))?;
        let der2_r = &e(uw.multiply(&v))?.scale(&qvw) + &e(u.multiply(&vw))?;
        ensure(der2_l == der2_r, || format!("case {case}: [uv, w]"))?;
    }
    for case in 0..100 {
        let s = random_braiding(&f, rng.gen_range(2..=3), &mut rng);
        let x = random_homogeneous(&s, &mut rng);
        let d = x.coproduct();
        ensure(d.counit_left() == x && d.counit_right() == x, || format!("case {case}: counit"))?;
        let (mut left, mut right) = (Triple::new(), Triple::new());
        for ((a, b), c) in d.terms() {
            for ((a1, a2), c1) in word_coproduct(&s, a) {
                add_to(&mut left, (a1, a2, b.clone()), c * &c1);
            }
            for ((b1, b2), c2) in word_coproduct(&s, b) {
                add_to(&mut right, (a.clone(), b1, b2), c * &c2);
            }
        }
        ensure(left == right, || format!("case {case}: coassociativity"))?;
    }
    within(t, Duration::from_secs(120), "criterion 8")?;
    Ok("200 triples, 100 coproducts".into())
}

/// Formula against chi on the new basis, and s_i s_i = id.
fn check_arrow(s: &BraidingSpec, from: &GroupoidState, i: usize, to: Option<&GroupoidState>) -> Result<(), String> {
    let r = reflect(from, i, M_CAP).map_err(|e| e.to_string())?;
    ensure(r.q == braiding_at_basis(s, &r.basis), || format!("formula disagrees with chi at {:?}", r.basis))?;
    if let Some(to) = to {
        ensure(r.basis == to.basis && r.q == to.q, || "arrow target differs".into())?;
    }
    let back = reflect(&r, i, M_CAP).map_err(|e| e.to_string())?;
    ensure(back == *from, || format!("s_{} s_{} is not the identity at {:?}", i + 1, i + 1, from.basis))
}

fn check_report(s: &BraidingSpec, rep: &GroupoidReport) -> Result<usize, String> {
    for a in &rep.arrows {
        check_arrow(s, &rep.states[a.from], a.index, Some(&rep.states[a.to]))?;
    }
    Ok(rep.arrows.len())
}

fn criterion_9() -> Check {
    let mut arrows = check_report(&xi_spec(), &explore(&xi_spec(), 10_000, M_CAP))?;
    for (_, s, _, _, _) in cartan_cases() {
        arrows += check_report(&s, &explore(&s, 10_000, M_CAP))?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut tested = 0;
    while tested < 200 {
        let n = *[3u32, 4, 5, 6, 8, 12].choose(&mut rng).unwrap();
        let f = Field::new(FieldSpec::new(n, &[])).unwrap();
        let theta = rng.gen_range(2..=3);
        let q: Vec<Vec<Scalar>> = (0..theta)
            .map(|_| (0..theta).map(|_| f.zeta_pow(rng.gen_range(0..n as i64))).collect())
            .collect();
        let s = BraidingSpec::new(&f, q).unwrap();
        let mut state = GroupoidState::initial(&s, M_CAP);
        for _ in 0..rng.gen_range(0..=3) {
            let i = rng.gen_range(0..theta);
            if let Ok(next) = reflect(&state, i, M_CAP) {
                state = next;
            }
        }
        let i = rng.gen_range(0..theta);
        if state.m.row_defined(i).is_none() {
            continue;
        }
        ensure(state.m == m_table(&state.q, M_CAP), || "stale m-table".into())?;
        check_arrow(&s, &state, i, None)?;
        tested += 1;
    }
    Ok(format!("{arrows} explored arrows, {tested} random states"))
}

fn criterion_10() -> Check {
    let t = Instant::now();
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/datum_a2xa1.toml");
    let job = JobFile::load(&path).map_err(|e| e.to_string())?;
    let f = job.field().map_err(|e| e.to_string())?;
    let d = validate_datum(&f, job.datum.as_ref().unwrap()).map_err(|e| e.to_string())?;
    let again = validate_datum(&f, &d.to_input()).map_err(|e| e.to_string())?;
    ensure(again.to_input() == d.to_input(), || "datum does not round-trip".into())?;
    let p = emit_presentation(&d).map_err(|e| e.to_string())?;
    let want = Census {
        group: 6,
        commutation: 9,
        serre: 2,
        linking: 2,
    };
    ensure(p.census == want && expected_census(&d) == want, || format!("census {:?}", p.census))?;
    let linked: Vec<&str> = p
        .of_kind(RelationKind::Linking)
        .map(|r| r.text.as_str())
        .collect();
    ensure(linked.contains(&"a1*a3 - q^-1*a3*a1 = 1 - y1*y3"), || format!("linking relations {linked:?}"))?;
    ensure(linked.contains(&"a2*a3 - a3*a2 = 0"), || format!("linking relations {linked:?}"))?;
    let s = d.braiding().map_err(|e| e.to_string())?;
    let tq = nichols_truncate(&s, 3).map_err(|e| e.to_string())?;
    let mut serre = 0;
    for i in 0..3 {
        for j in 0..3 {
            if i != j && d.connected(i, j) {
                let r = (1 - d.cartan.a[i][j]) as usize;
                let x = ad_power(&s, i, j, r).map_err(|e| e.to_string())?;
                ensure(tq.reduces_to_zero(&x).map_err(|e| e.to_string())?, || {
                    format!("Serre relation ({}, {}) survives", i + 1, j + 1)
                })?;
                serre += 1;
            }
        }
    }
    ensure(serre == 2, || format!("{serre} Serre relations"))?;
    within(t, Duration::from_secs(30), "criterion 10")?;
    Ok("census 6/9/2/2, Serre relations vanish".into())
}

fn main() {
    let criteria: [(usize, fn() -> Check); 10] = [
        (1, criterion_1),
        (2, criterion_2),
        (3, criterion_3),
        (4, criterion_4),
        (5, criterion_5),
        (6, criterion_6),
        (7, criterion_7),
        (8, criterion_8),
        (9, criterion_9),
        (10, criterion_10),
    ];
    let mut failed = 0;
    for (n, f) in criteria {
        let t = Instant::now();
        match f() {
            Ok(detail) => println!("criterion {n:>2}: PASS  {detail} ({:.2?})", t.elapsed()),
            Err(e) => {
                failed += 1;
                println!("criterion {n:>2}: FAIL  {e} ({:.2?})", t.elapsed());
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
