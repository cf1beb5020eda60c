//! Acceptance criteria, one PASS/FAIL line each.
//!
//! Run with `cargo test --test acceptance`. Set `GOLDEN_BLESS=1` to rewrite
//! the CLI golden files instead of comparing against them.

mod common;

use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use virtualk::detfun::{
    block_extension, det_of_quasi_iso, direct_sum, grayson_check, nine_diagram_check, predicted_ses_sign,
    ses_multiplicativity, torsion, ComplexMap,
};
use virtualk::field::{binomial, ratio, Field, PrimeField, Rationals};
use virtualk::gersten::{self, Cycle0, Place, QPoly, RatFn};
use virtualk::kring::{self, FilDegree, KElement, KRing, KRingPresentation};
use virtualk::pushpull::{euler_characteristic, grr_check};

type Outcome = Result<String, String>;

struct Criterion {
    id: u32,
    name: &'static str,
    limit: Option<Duration>,
    run: fn() -> Outcome,
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn ring(s: &str) -> KRing {
    KRingPresentation::parse(s).unwrap()
}

fn random_element(r: &KRing, rng: &mut ChaCha8Rng) -> KElement {
    let coeffs = (0..r.size())
        .map(|_| {
            let num = rng.gen_range(-4i64..=4);
            let den = if rng.gen_bool(0.2) { rng.gen_range(2i64..=3) } else { 1 };
            ratio(num, den)
        })
        .collect();
    KElement::from_coeffs(r, coeffs)
}

fn rank_zero(r: &KRing, rng: &mut ChaCha8Rng) -> KElement {
    let u = random_element(r, rng);
    &u - &KElement::constant(r, u.rank())
}

// 1. ------------------------------------------------------------------------

fn chi_table() -> Outcome {
    // χ_n(d) from χ_0 = 1, χ_n(0) = 1 and χ_n(d) = χ_n(d−1) + χ_{n−1}(d),
    // run upwards for d > 0 and downwards for d < 0.
    let (max_n, lo, hi) = (5usize, -10i64, 10i64);
    let width = (hi - lo + 1) as usize;
    let idx = |d: i64| (d - lo) as usize;
    let mut table = vec![vec![BigInt::zero(); width]; max_n + 1];
    for d in lo..=hi {
        table[0][idx(d)] = BigInt::one();
    }
    for n in 1..=max_n {
        table[n][idx(0)] = BigInt::one();
        for d in 1..=hi {
            table[n][idx(d)] = &table[n][idx(d - 1)] + &table[n - 1][idx(d)];
        }
        for d in (lo..0).rev() {
            table[n][idx(d)] = &table[n][idx(d + 1)] - &table[n - 1][idx(d + 1)];
        }
    }
    let mut count = 0;
    for n in 0..=max_n {
        for d in lo..=hi {
            let got = euler_characteristic(n, d).map_err(|e| e.to_string())?;
            let closed = if d >= 0 {
                binomial(n as i64 + d, n as i64)
            } else {
                let b = binomial(-d - 1, n as i64);
                if n % 2 == 1 { -b } else { b }
            };
            ensure(got == table[n][idx(d)] && got == closed, || {
                format!("χ({n}, {d}) = {got}, recurrence {}, closed form {closed}", table[n][idx(d)])
            })?;
            count += 1;
        }
    }
    Ok(format!("{count} values match the recurrence and the closed forms"))
}

// 2. ------------------------------------------------------------------------

fn grr() -> Outcome {
    let twists: Vec<i64> = (-5..=5).collect();
    let mut bundles: Vec<Vec<i64>> = Vec::new();
    for &a in &twists {
        bundles.push(vec![a]);
        for &b in &twists {
            bundles.push(vec![a, b]);
            for &c in &twists {
                bundles.push(vec![a, b, c]);
            }
        }
    }
    let mut count = 0;
    for n in 1..=5 {
        for b in &bundles {
            let r = grr_check(n, b).map_err(|e| e.to_string())?;
            ensure(r.holds(), || format!("n = {n}, bundle {b:?}: {} != {}", r.lhs, r.rhs))?;
            count += 1;
        }
    }
    Ok(format!("{count} bundles on P1..P5"))
}

// 3. ------------------------------------------------------------------------

const RINGS: [&str; 5] = ["P1", "P2", "P3", "P4", "P2xP2"];

fn adams_laws() -> Outcome {
    let mut rng = common::rng(301);
    let ks = [2i64, 3, 4, 5];
    let mut count = 0;
    for name in RINGS {
        let r = ring(name);
        for _ in 0..100 {
            let u = random_element(&r, &mut rng);
            let v = random_element(&r, &mut rng);
            for &k in &ks {
                let pk = |x: &KElement| kring::adams(k, x).unwrap();
                ensure(pk(&(&u * &v)) == &pk(&u) * &pk(&v), || format!("Ψ^{k} not multiplicative on {name}: {u}, {v}"))?;
                for &k2 in &ks {
                    ensure(kring::adams_compose_check(k, k2, &u).unwrap(), || {
                        format!("Ψ^{k}Ψ^{k2} != Ψ^{} on {name}: {u}", k * k2)
                    })?;
                    count += 1;
                }
            }
        }
    }
    Ok(format!("{count} composition and 2000 product identities"))
}

// 4. ------------------------------------------------------------------------

fn newton_gamma() -> Outcome {
    let mut rng = common::rng(401);
    let mut split = 0;
    for name in ["P3", "P1xP2"] {
        let r = ring(name);
        for _ in 0..30 {
            let m = rng.gen_range(1..=6);
            let lines: Vec<KElement> = (0..m)
                .map(|_| {
                    let tw: Vec<i64> = (0..r.num_factors()).map(|_| rng.gen_range(-3..=3)).collect();
                    kring::twisting_sheaf(&r, &tw).unwrap()
                })
                .collect();
            let sum = lines.iter().fold(KElement::zero(&r), |acc, l| &acc + l);
            for k in 0..=6usize {
                // Elementary symmetric polynomial by subset expansion.
                let mut e = KElement::zero(&r);
                for mask in 0u32..(1 << m) {
                    if mask.count_ones() as usize == k {
                        let term = (0..m).filter(|j| mask >> j & 1 == 1).fold(KElement::one(&r), |acc, j| &acc * &lines[j]);
                        e = &e + &term;
                    }
                }
                let lam = kring::lambda_op(k as i64, &sum).map_err(|e| e.to_string())?;
                ensure(lam == e, || format!("λ^{k} of {m} lines on {name}: {lam} != {e}"))?;
                split += 1;
            }
        }
    }
    let mut gammas = 0;
    for (i, name) in ["P2", "P3", "P1xP1"].iter().cycle().take(100).enumerate() {
        let r = ring(name);
        let u = random_element(&r, &mut rng);
        let k = (i % 5 + 1) as i64;
        let g = kring::gamma_op(k, &u).map_err(|e| e.to_string())?;
        let shifted = &u + &KElement::int(&r, k - 1);
        let l = kring::lambda_op(k, &shifted).map_err(|e| e.to_string())?;
        ensure(g == l, || format!("γ^{k}({u}) = {g} but λ^{k}(u + {}) = {l}", k - 1))?;
        gammas += 1;
    }
    Ok(format!("{split} split λ^k cases, {gammas} γ^k cases"))
}

// 5. ------------------------------------------------------------------------

fn nilpotence() -> Outcome {
    let mut rng = common::rng(501);
    let mut count = 0;
    for d in 0..=4usize {
        let r = ring(&if d == 0 { "pt".to_string() } else { format!("P{d}") });
        let mut samples: Vec<KElement> = (1..=d)
            .flat_map(|i| {
                let x = KElement::var(&r, 0).pow(i as u64);
                [x.clone(), x.scale(&ratio(-1, 1))]
            })
            .collect();
        samples.extend((0..100).map(|_| rank_zero(&r, &mut rng)));
        for u in &samples {
            for k in [2i64, 3] {
                ensure(kring::nilpotence_check(u, k).map_err(|e| e.to_string())?, || {
                    format!("γ^{}({u}) != 0 on P{d}", d as i64 + k)
                })?;
                count += 1;
            }
        }
    }
    Ok(format!("{count} rank-0 cases on pt..P4"))
}

// 6. ------------------------------------------------------------------------

fn eigenspaces() -> Outcome {
    let mut rng = common::rng(601);
    let mut count = 0;
    for name in RINGS {
        let r = ring(name);
        for _ in 0..100 {
            let u = random_element(&r, &mut rng);
            let parts = kring::adams_decomposition(&u).map_err(|e| e.to_string())?;
            let total = parts.iter().fold(KElement::zero(&r), |acc, p| &acc + p);
            ensure(total == u, || format!("components of {u} sum to {total}"))?;
            for (i, p) in parts.iter().enumerate() {
                let again = kring::adams_eigenspace(p, i as i64).map_err(|e| e.to_string())?;
                ensure(&again == p, || format!("projector {i} not idempotent on {u}"))?;
                let three = BigRational::from_integer(num_traits::pow(BigInt::from(3), i));
                ensure(kring::adams(3, p).unwrap() == p.scale(&three), || format!("Ψ³ on weight {i} of {u}"))?;
                if !p.is_zero() {
                    let fd = kring::gamma_filtration_degree(p);
                    ensure(fd == FilDegree::Finite(i), || format!("weight {i} part {p} has filtration degree {fd}"))?;
                }
            }
            count += 1;
        }
    }
    Ok(format!("{count} elements on {}", RINGS.join(", ")))
}

// 7. ------------------------------------------------------------------------

fn koszul() -> Outcome {
    let mut rng = common::rng(701);
    let mut count = 0;
    for name in ["P3", "P1xP2", "P2xP2"] {
        let r = ring(name);
        for d in 1..=3 {
            for _ in 0..4 {
                let lines: Vec<Vec<i64>> = (0..d)
                    .map(|_| loop {
                        let tw: Vec<i64> = (0..r.num_factors()).map(|_| rng.gen_range(-3..=3)).collect();
                        if tw.iter().any(|&a| a != 0) {
                            break tw;
                        }
                    })
                    .collect();
                for k in 1..=5 {
                    let ok = kring::koszul_adams_check(&r, &lines, k).map_err(|e| e.to_string())?;
                    ensure(ok, || format!("Ψ^{k} on the Koszul class of {lines:?} on {name}"))?;
                    count += 1;
                }
            }
        }
    }
    Ok(format!("{count} (lines, k) cases with d <= 3, k <= 5"))
}

// 8. ------------------------------------------------------------------------

fn determinants() -> Outcome {
    for n in 1..=10 {
        for k in 1..=10 {
            let g = grayson_check(n, k).map_err(|e| e.to_string())?;
            ensure(g == BigInt::from(n), || format!("grayson_check({n}, {k}) = {g}"))?;
        }
    }
    let mut rng = common::rng(801);
    let err = |e: virtualk::detfun::DetError| e.to_string();

    for _ in 0..100 {
        let a = common::any_acyclic(&Rationals, &mut rng, -2..=1, 1..=4, 3);
        let b = common::any_acyclic(&Rationals, &mut rng, -2..=1, 1..=4, 3);
        let sign = virtualk::field::rat(predicted_ses_sign(&a, &b));
        let sum = torsion(&direct_sum(&a, &b).map_err(err)?).map_err(err)?;
        ensure(sum == sign * torsion(&a).map_err(err)? * torsion(&b).map_err(err)?, || "direct sum".into())?;
        let (mid, i, p) = block_extension(&a, &b, &[]).map_err(err)?;
        let sigma = ses_multiplicativity(&a, &mid, &b, &i, &p).map_err(err)?;
        ensure(sigma == virtualk::field::rat(predicted_ses_sign(&a, &b)), || format!("extension ratio {sigma}"))?;
    }

    for trial in 0..200 {
        let field = PrimeField::new([5u64, 7, 11][trial % 3]).unwrap();
        let c = common::any_acyclic(&field, &mut rng, -2..=2, 1..=4, 4);
        let bases: Vec<_> = c.dims().iter().map(|&d| common::random_invertible(&field, &mut rng, d)).collect();
        let mut expected = torsion(&c).map_err(err)?;
        for (i, u) in bases.iter().enumerate() {
            let e = if (c.lowest() + i as i64).rem_euclid(2) == 0 { 1 } else { -1 };
            expected = field.mul(&expected, &field.pow(&u.det(&field), e).unwrap());
        }
        let got = torsion(&c.change_basis(&bases).map_err(err)?).map_err(err)?;
        ensure(got == expected, || format!("base change trial {trial}"))?;
    }

    for _ in 0..100 {
        let n = rng.gen_range(1..=4);
        let f = common::random_invertible(&Rationals, &mut rng, n);
        let g = common::random_invertible(&Rationals, &mut rng, n);
        let mf = ComplexMap::automorphism(Rationals, f.clone()).map_err(err)?;
        let mg = ComplexMap::automorphism(Rationals, g.clone()).map_err(err)?;
        let d = det_of_quasi_iso(&mf.then(&mg).map_err(err)?).map_err(err)?;
        ensure(d == g.mul(&Rationals, &f).det(&Rationals), || "quasi-iso determinant".into())?;
        ensure(det_of_quasi_iso(&mf).map_err(err)? == f.det(&Rationals), || "quasi-iso determinant".into())?;
    }

    let f7 = PrimeField::new(7).unwrap();
    for _ in 0..50 {
        ensure(nine_diagram_check(&common::random_grid(&Rationals, &mut rng, false)).map_err(err)?, || "grid over Q".into())?;
        ensure(nine_diagram_check(&common::random_grid(&f7, &mut rng, false)).map_err(err)?, || "grid over F7".into())?;
        ensure(!nine_diagram_check(&common::random_grid(&f7, &mut rng, true)).map_err(err)?, || "corrupted grid".into())?;
    }
    Ok("grayson 10x10, 100 sums/extensions, 200 base changes, 100 quasi-isos, 100 grids".into())
}

// 9. ------------------------------------------------------------------------

fn small_poly(rng: &mut ChaCha8Rng) -> QPoly {
    let d = rng.gen_range(1..=3);
    let mut cs: Vec<i64> = (0..=d).map(|_| rng.gen_range(-10..=10)).collect();
    if cs[d] == 0 {
        cs[d] = 1;
    }
    QPoly::from_ints(&cs)
}

fn random_ratfn(rng: &mut ChaCha8Rng) -> RatFn {
    let c = rng.gen_range(1i64..=10) * if rng.gen_bool(0.5) { 1 } else { -1 };
    let mut f = RatFn::constant(ratio(c, 1)).unwrap();
    for _ in 0..rng.gen_range(0..=3) {
        let e = [-2i64, -1, 1, 2][rng.gen_range(0..4)];
        f = f.mul(&RatFn::from_poly(&small_poly(rng)).unwrap().pow(e));
    }
    f
}

fn random_cycle(rng: &mut ChaCha8Rng) -> Cycle0 {
    let mut z = Cycle0::zero();
    for _ in 0..rng.gen_range(0..=3) {
        let p = loop {
            if rng.gen_bool(0.2) {
                break Place::Infinity;
            }
            if let Ok(p) = Place::finite(&small_poly(rng)) {
                break p;
            }
        };
        z = z.add(&Cycle0::point(p, rng.gen_range(-3..=3)));
    }
    z
}

fn gersten_suite() -> Outcome {
    let mut rng = common::rng(901);
    for _ in 0..500 {
        let f = random_ratfn(&mut rng);
        ensure(gersten::degree(&gersten::divisor(&f)) == 0, || format!("deg div({f}) != 0"))?;
    }
    for _ in 0..500 {
        let (f, g) = (random_ratfn(&mut rng), random_ratfn(&mut rng));
        ensure(gersten::weil_reciprocity_check(&f, &g), || format!("Weil fails for {f}, {g}"))?;
    }
    let mut steinberg = 0;
    while steinberg < 100 {
        let f = random_ratfn(&mut rng);
        let Some(h) = f.one_minus().map_err(|e| e.to_string())? else { continue };
        for p in gersten::support(&f, &h) {
            let r = gersten::tame_symbol(&f, &h, &p);
            ensure(r.value == QPoly::one(), || format!("∂_{p}{{{f}, 1 - f}} = {r}"))?;
        }
        steinberg += 1;
    }
    for _ in 0..200 {
        let (d, e) = (rng.gen_range(-6..=6), rng.gen_range(-6..=6));
        let (s, s2) = (random_ratfn(&mut rng), random_ratfn(&mut rng));
        ensure(gersten::c1_additivity_check(d, e, &s, &s2), || format!("c1 additivity d={d} e={e}"))?;
        ensure(gersten::degree(&gersten::c1_cap(d, &s)) == d, || format!("deg c1({d}) != {d}"))?;
    }
    let mut equal = 0;
    for _ in 0..200 {
        let z = random_cycle(&mut rng);
        let z2 = if rng.gen_bool(0.5) {
            z.add(&gersten::divisor(&random_ratfn(&mut rng)))
        } else {
            random_cycle(&mut rng)
        };
        let same = gersten::degree(&z) == gersten::degree(&z2);
        match gersten::hom_witness(&z, &z2) {
            Some(w) => {
                ensure(same, || format!("witness between {z} and {z2}"))?;
                ensure(gersten::divisor(&w) == z2.sub(&z), || format!("div of witness for {z} -> {z2}"))?;
                equal += 1;
            }
            None => ensure(!same, || format!("no witness between {z} and {z2}"))?,
        }
    }
    Ok(format!("500 divisors, 500 Weil pairs, 100 Steinberg, 200 c1, 200 cycle pairs ({equal} equal degree)"))
}

// 10. -----------------------------------------------------------------------

const COMPLEX_Q: &str = r#"{"field":"Q","lowest":-1,"dims":[1,3,2],"maps":[[["1"],["2"],["3"]],[["0","3","-2"],["3","0","-1"]]]}"#;
const COMPLEX_F7: &str = r#"{"field":"Fp","p":7,"lowest":0,"dims":[2,2],"maps":[[[1,2],[3,4]]]}"#;

fn golden_commands() -> Vec<(&'static str, Vec<&'static str>, &'static str)> {
    vec![
        ("kring_eval_psi", vec!["kring", "eval", "--ring", "P2", "psi(2, O(-1))"], ""),
        ("kring_eval_lambda", vec!["kring", "eval", "--ring", "P1xP2", "lambda(2, O(1,1) + O(0,-2) + 1)"], ""),
        ("kring_eval_gamma_json", vec!["--json", "kring", "eval", "--ring", "P3", "gamma(3, O(1) - 1)"], ""),
        ("kring_eval_rational", vec!["kring", "eval", "--ring", "P2", "1/2*O(2) - rank(O(2))/2"], ""),
        ("kring_check_adams", vec!["kring", "check-adams", "--ring", "P2xP2", "--k", "3", "--k2", "4", "O(1,-1) - 2", "O(0,2)"], ""),
        ("kring_eigen", vec!["kring", "eigen", "--ring", "P3", "O(2) - O(-1)"], ""),
        ("kring_fildeg", vec!["kring", "fildeg", "--ring", "P4", "(O(1) - 1)^3"], ""),
        ("det_torsion_q", vec!["det", "torsion"], COMPLEX_Q),
        ("det_torsion_f7", vec!["--json", "det", "torsion"], COMPLEX_F7),
        ("det_axioms", vec!["det", "axioms"], COMPLEX_Q),
        ("chi_positive", vec!["chi", "--n", "2", "--d", "3"], ""),
        ("chi_negative", vec!["chi", "--n", "3", "--d", "-7"], ""),
        ("grr_example", vec!["grr", "--n", "3", "--bundle", "-1,2"], ""),
        ("grr_json", vec!["--json", "grr", "--n", "5", "--bundle", "5,-5,0"], ""),
        ("gersten_div", vec!["gersten", "div", "(t^2-1)/(t+3)"], ""),
        ("gersten_tame", vec!["gersten", "tame", "t^2+1", "t", "t^2+1"], ""),
        ("gersten_tame_inf", vec!["gersten", "tame", "t", "t-1", "inf"], ""),
        ("gersten_weil", vec!["gersten", "weil", "(t^2+2)/(t-3)^2", "t^3-t"], ""),
        ("gersten_c1", vec!["gersten", "c1", "--d", "-2", "--section", "t^3-2"], ""),
        ("error_not_irreducible", vec!["gersten", "tame", "t", "t", "t^2-1"], ""),
    ]
}

fn invoke(args: &[&str], stdin: &str) -> Result<String, String> {
    use std::io::Write;
    let mut child = Command::new(env!("CARGO_BIN_EXE_virtualk"))
        .args(args)
        .env_remove("VIRTUALK_MAX_DEGREE")
        .stdin(std::process::Stdio::piped())
        .stdout(std::process::Stdio::piped())
        .stderr(std::process::Stdio::piped())
        .spawn()
        .map_err(|e| e.to_string())?;
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).map_err(|e| e.to_string())?;
    let out = child.wait_with_output().map_err(|e| e.to_string())?;
    Ok(format!(
        "exit: {}\n--- stdout\n{}--- stderr\n{}",
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr)
    ))
}

fn cli_golden() -> Outcome {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden");
    let bless = std::env::var_os("GOLDEN_BLESS").is_some();
    let commands = golden_commands();
    for (name, args, stdin) in &commands {
        let first = invoke(args, stdin)?;
        let second = invoke(args, stdin)?;
        ensure(first == second, || format!("{name}: runs differ"))?;
        let path = dir.join(format!("{name}.txt"));
        if bless {
            std::fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
            std::fs::write(&path, &first).map_err(|e| e.to_string())?;
        }
        let golden = std::fs::read_to_string(&path).map_err(|e| format!("{}: {e}", path.display()))?;
        ensure(golden == first, || format!("{name}: output differs from golden file\n{first}"))?;
    }
    Ok(format!("{} commands, two runs each", commands.len()))
}

fn main() {
    let criteria = [
        Criterion { id: 1, name: "euler characteristic table", limit: Some(Duration::from_secs(1)), run: chi_table },
        Criterion { id: 2, name: "Grothendieck-Riemann-Roch on P^n", limit: Some(Duration::from_secs(10)), run: grr },
        Criterion { id: 3, name: "Adams operation laws", limit: None, run: adams_laws },
        Criterion { id: 4, name: "Newton and gamma identities", limit: None, run: newton_gamma },
        Criterion { id: 5, name: "gamma nilpotence", limit: None, run: nilpotence },
        Criterion { id: 6, name: "Adams eigenspace decomposition", limit: None, run: eigenspaces },
        Criterion { id: 7, name: "Koszul classes", limit: None, run: koszul },
        Criterion { id: 8, name: "determinant functor suite", limit: Some(Duration::from_secs(5)), run: determinants },
        Criterion { id: 9, name: "Gersten suite", limit: Some(Duration::from_secs(30)), run: gersten_suite },
        Criterion { id: 10, name: "CLI determinism", limit: None, run: cli_golden },
    ];
    let mut failed = 0;
    for c in &criteria {
        let start = Instant::now();
        let result = (c.run)();
        let elapsed = start.elapsed();
        let timing = match c.limit {
            Some(l) => format!("{:.2}s, limit {}s", elapsed.as_secs_f64(), l.as_secs()),
            None => format!("{:.2}s", elapsed.as_secs_f64()),
        };
        let result = match (result, c.limit) {
            (Ok(_), Some(l)) if elapsed > l => Err("time limit exceeded".to_string()),
            (r, _) => r,
        };
        match result {
            Ok(detail) => println!("PASS {:>2} {}: {detail} ({timing})", c.id, c.name),
            Err(msg) => {
                failed += 1;
                println!("FAIL {:>2} {}: {msg} ({timing})", c.id, c.name);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
