//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any
//! failure.

use std::process::Command;
use std::time::Instant;

use prodbase::product_space::reshape_2xn;
use prodbase::{
    check_groupable, classify, factorize, generate_from_type, inner, kron, left_classify, mu_check,
    named_family, orthonormalize, partition_count, partitions_of, random_unitary,
    singular_values_2xn, subspace_equal, type_count_lower_bound, verify_orthonormal,
    verify_product_basis, ComplexVector, Factorization, FamilyParams, FamilyTag, ProductBasis,
    Tolerances, TypeSpec,
};

type Verdict = Result<String, String>;
type Criterion = (&'static str, fn() -> Verdict);

// `!(x < tol)` also rejects NaN.
macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        #[allow(clippy::neg_cmp_op_on_partial_ord)]
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

const SEEDS: u64 = 20;

fn tol() -> Tolerances {
    Tolerances::default()
}

fn all_generated() -> Vec<(prodbase::Partition, u64, ProductBasis)> {
    let mut out = Vec::new();
    for n in 1..=6 {
        for partition in partitions_of(n).unwrap() {
            for seed in 0..SEEDS {
                let basis = generate_from_type(&TypeSpec::new(partition.clone(), seed)).unwrap();
                out.push((partition.clone(), seed, basis));
            }
        }
    }
    out
}

fn criterion_1() -> Verdict {
    let all = all_generated();
    let partitions: std::collections::BTreeSet<_> = all.iter().map(|(p, _, _)| p.clone()).collect();
    // p(1) + ... + p(6) = 1 + 2 + 3 + 5 + 7 + 11
    ensure!(
        partitions.len() == 29,
        "expected 29 partitions, got {}",
        partitions.len()
    );
    let mut worst: f64 = 0.0;
    for (partition, seed, basis) in &all {
        let mut local = basis.clone();
        let check = verify_product_basis(&mut local, &tol());
        ensure!(
            check.ok,
            "{partition} seed {seed}: verify_product_basis failed"
        );
        ensure!(
            check.gram_residual < 1e-12,
            "{partition} seed {seed}: residual {}",
            check.gram_residual
        );
        worst = worst.max(check.gram_residual);
        let report = classify(basis, &tol());
        ensure!(
            report.right_type.as_ref() == Some(partition),
            "{partition} seed {seed}: classified as {:?}",
            report.right_type
        );
    }
    Ok(format!(
        "{} bases, max Gram residual {worst:.2e}",
        all.len()
    ))
}

fn criterion_2() -> Verdict {
    let all = all_generated();
    for (partition, seed, basis) in &all {
        let report = classify(basis, &tol());
        ensure!(report.valid, "{partition} seed {seed}: invalid");
        for class in &report.ray_classes {
            let partners = report
                .ray_classes
                .iter()
                .filter(|other| {
                    inner(&class.representative, &other.representative)
                        .unwrap()
                        .norm()
                        <= tol().orth
                })
                .count();
            ensure!(
                partners == 1,
                "{partition} seed {seed}: ray class has {partners} partners"
            );
        }
        ensure!(
            report.ray_classes.len() == 2 * report.r(),
            "{partition} seed {seed}: unpaired classes"
        );
        let mut total = 0;
        for block in &report.blocks {
            ensure!(
                block.group_a.len() == block.group_a_perp.len()
                    && block.group_a.len() == block.multiplicity,
                "{partition} seed {seed}: |A(a)| != |A(a⊥)|"
            );
            let span_a = orthonormalize(&block.group_a, &tol()).unwrap();
            let span_perp = orthonormalize(&block.group_a_perp, &tol()).unwrap();
            ensure!(
                subspace_equal(&span_a, &span_perp, &tol()).unwrap(),
                "{partition} seed {seed}: spans differ"
            );
            total += block.multiplicity;
        }
        ensure!(
            total == partition.n(),
            "{partition} seed {seed}: Σm = {total}"
        );
    }
    Ok(format!(
        "{} bases: unique partners, equal groups, equal spans, Σm = n",
        all.len()
    ))
}

fn criterion_3() -> Verdict {
    let mut basis = named_family(&FamilyParams::new(FamilyTag::Counterexample1_4))
        .map_err(|e| e.to_string())?
        .single()
        .unwrap();
    let (ok, residual) = verify_orthonormal(&basis, &tol());
    ensure!(!ok, "counterexample passed orthonormality");
    ensure!((residual - 0.5).abs() <= 1e-12, "off-diagonal {residual}");
    basis.factor(&tol()).map_err(|e| e.to_string())?;
    ensure!(check_groupable(&basis, &tol()).unwrap(), "not groupable");
    Ok(format!(
        "groupable = true, orthonormal = false, Gram off-diagonal {residual:.15}"
    ))
}

fn triple_deviation(tag: FamilyTag, d: usize) -> Verdict {
    let bases = named_family(&FamilyParams::new(tag))
        .map_err(|e| e.to_string())?
        .into_bases();
    ensure!(bases.len() == 3, "expected three bases");
    let target = 1.0 / d as f64;
    let mut worst: f64 = 0.0;
    for i in 0..3 {
        for j in (i + 1)..3 {
            let (ok, dev) = mu_check(bases[i].vectors(), bases[j].vectors(), &tol())
                .map_err(|e| e.to_string())?;
            ensure!(ok && dev < 1e-12, "pair ({i},{j}) deviation {dev}");
            for x in bases[i].vectors() {
                for y in bases[j].vectors() {
                    let sq = inner(x, y).unwrap().norm_sqr();
                    ensure!((sq - target).abs() < 1e-12, "overlap² {sq} != 1/{d}");
                }
            }
            worst = worst.max(dev);
        }
    }
    Ok(format!("3 pairs, max |overlap² - 1/{d}| = {worst:.2e}"))
}

fn criterion_4() -> Verdict {
    triple_deviation(FamilyTag::D4MupbTriple, 4)
}

fn criterion_5() -> Verdict {
    triple_deviation(FamilyTag::D6MubTriple, 6)
}

fn criterion_6() -> Verdict {
    let expected = [
        (FamilyTag::D4B0, "1+1", false),
        (FamilyTag::D4B1, "2", false),
        (FamilyTag::D4B2, "2", true),
        (FamilyTag::D6B0, "1+1+1", false),
        (FamilyTag::D6B1, "2+1", false),
        (FamilyTag::D6B2, "3", false),
        (FamilyTag::D6B3, "3", true),
    ];
    let family = |tag| {
        named_family(&FamilyParams::new(tag))
            .unwrap()
            .single()
            .unwrap()
    };
    for (tag, right, direct) in expected {
        let report = classify(&family(tag), &tol());
        let got = report.right_type.as_ref().map(ToString::to_string);
        ensure!(
            got.as_deref() == Some(right),
            "{tag}: right type {got:?}, expected {right}"
        );
        ensure!(
            report.is_direct_product == direct,
            "{tag}: direct = {}",
            report.is_direct_product
        );
    }
    let left = |tag| left_classify(&family(tag), &tol()).map(|p| p.to_string());
    ensure!(
        left(FamilyTag::D4B0).as_deref() == Some("2"),
        "d4_B0 left type {:?}",
        left(FamilyTag::D4B0)
    );
    ensure!(
        left(FamilyTag::D4B1).as_deref() == Some("1+1"),
        "d4_B1 left type {:?}",
        left(FamilyTag::D4B1)
    );
    ensure!(
        left(FamilyTag::D4B2).as_deref() == Some("2"),
        "d4_B2 left type {:?}",
        left(FamilyTag::D4B2)
    );
    for tag in [
        FamilyTag::D6B0,
        FamilyTag::D6B1,
        FamilyTag::D6B2,
        FamilyTag::D6B3,
    ] {
        ensure!(left(tag).is_none(), "{tag}: left type should be undefined");
    }
    Ok("7 families typed; left types [2], [1,1], [2] for d=4, undefined for d=6".into())
}

/// p(n) from Euler's pentagonal-number recurrence.
fn pentagonal_counts(max: usize) -> Vec<i128> {
    let mut p = vec![0i128; max + 1];
    p[0] = 1;
    for n in 1..=max {
        let mut total = 0i128;
        for k in 1.. {
            let k = k as i128;
            let g1 = (k * (3 * k - 1) / 2) as usize;
            if g1 > n {
                break;
            }
            let sign = if k % 2 == 1 { 1 } else { -1 };
            total += sign * p[n - g1];
            let g2 = (k * (3 * k + 1) / 2) as usize;
            if g2 <= n {
                total += sign * p[n - g2];
            }
        }
        p[n] = total;
    }
    p
}

fn criterion_7() -> Verdict {
    for n in 1..=20 {
        let listed = partitions_of(n).unwrap().len() as u64;
        let counted = partition_count(n).unwrap();
        ensure!(
            listed == counted,
            "n = {n}: {listed} listed vs p(n) = {counted}"
        );
    }
    let oracle = pentagonal_counts(64);
    for (n, &expected) in oracle.iter().enumerate().skip(1) {
        let counted = partition_count(n).unwrap() as i128;
        ensure!(
            counted == expected,
            "n = {n}: {counted} vs pentagonal {expected}"
        );
        ensure!(
            type_count_lower_bound(n).unwrap() as i128 == expected + 1,
            "n = {n}: bound"
        );
    }
    ensure!(type_count_lower_bound(6).unwrap() == 12, "bound at n = 6");
    Ok(format!(
        "enumeration = count for n ≤ 20; pentagonal agreement n ≤ 64 (p(64) = {}); bound(6) = 12",
        oracle[64]
    ))
}

fn criterion_8() -> Verdict {
    let mut worst: f64 = 0.0;
    for seed in 0..1000u64 {
        let n = 2 + (seed % 5) as usize;
        let a = random_unitary(2, 2 * seed).column(0);
        let b = random_unitary(n, 2 * seed + 1).column(0);
        let v = kron(&a, &b);
        let f = factorize(&v, &tol()).map_err(|e| e.to_string())?;
        let p = f
            .product()
            .ok_or(format!("seed {seed}: product rejected"))?;
        let err =
            p.a.max_abs_diff(&a.canonical_phase())
                .max(p.b.max_abs_diff(&b.canonical_phase()));
        ensure!(err < 1e-10, "seed {seed}: round-trip error {err}");
        worst = worst.max(err);
    }

    let mut min_sigma2 = f64::INFINITY;
    let mut rejected = 0;
    for seed in 0..1000u64 {
        let n = 2 + (seed % 5) as usize;
        let v = random_unitary(2 * n, 10_000 + seed).column(0);
        let (_, measured) = singular_values_2xn(&reshape_2xn(&v).unwrap()).unwrap();
        min_sigma2 = min_sigma2.min(measured);
        match factorize(&v, &tol()).map_err(|e| e.to_string())? {
            Factorization::NotProduct { sigma2 } => {
                ensure!(
                    (sigma2 - measured).abs() < 1e-15,
                    "seed {seed}: reported σ₂ {sigma2} vs {measured}"
                );
                rejected += 1;
            }
            Factorization::Product(_) => {
                ensure!(
                    measured <= 1e-4,
                    "seed {seed}: accepted with σ₂ = {measured}"
                );
            }
        }
    }

    let r = std::f64::consts::FRAC_1_SQRT_2;
    let bell = ComplexVector::from_real(&[r, 0.0, 0.0, r]);
    let bell_sigma2 = match factorize(&bell, &tol()).map_err(|e| e.to_string())? {
        Factorization::NotProduct { sigma2 } => sigma2,
        Factorization::Product(_) => return Err("Bell vector accepted".into()),
    };
    ensure!((bell_sigma2 - r).abs() <= 1e-12, "Bell σ₂ = {bell_sigma2}");
    Ok(format!(
        "1000 products, max error {worst:.2e}; {rejected}/1000 Haar vectors rejected (min σ₂ {min_sigma2:.3e}); Bell σ₂ = {bell_sigma2:.15}"
    ))
}

fn criterion_9() -> Verdict {
    let dir = std::env::temp_dir().join(format!("prodbase-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
    let bin = env!("CARGO_BIN_EXE_prodbase");
    let run = |args: &[&str]| -> Result<(), String> {
        let out = Command::new(bin)
            .args(args)
            .output()
            .map_err(|e| e.to_string())?;
        ensure!(out.status.success(), "prodbase {args:?} failed");
        Ok(())
    };
    let path = |name: &str| dir.join(name).to_string_lossy().into_owned();
    let invocations: [(&[&str], &str); 4] = [
        (&["generate", "6", "3+2+1", "--seed", "1"], "gen"),
        (
            &[
                "generate",
                "5",
                "2+2+1",
                "--seed",
                "42",
                "--mode",
                "equal",
                "--subspaces",
                "identity",
            ],
            "eq",
        ),
        (
            &["family", "d6_B1", "--alpha", "0.6", "--beta", "0,0.8"],
            "b1",
        ),
        (&["family", "d6_mub_triple"], "mub"),
    ];
    let mut compared = 0;
    for (args, stem) in invocations {
        for run_idx in 0..2 {
            let out = path(&format!("{stem}-{run_idx}.json"));
            let mut full: Vec<&str> = args.to_vec();
            full.extend(["--out", &out]);
            run(&full)?;
        }
        let names: Vec<String> = if stem == "mub" {
            (0..3).map(|k| format!("{stem}-{{}}.{k}.json")).collect()
        } else {
            vec![format!("{stem}-{{}}.json")]
        };
        for name in names {
            let first = std::fs::read(path(&name.replace("{}", "0"))).map_err(|e| e.to_string())?;
            let second =
                std::fs::read(path(&name.replace("{}", "1"))).map_err(|e| e.to_string())?;
            ensure!(first == second, "{name}: outputs differ");
            compared += 1;
        }
    }
    std::fs::remove_dir_all(&dir).ok();
    Ok(format!("{compared} file pairs byte-identical"))
}

fn main() {
    let criteria: [Criterion; 9] = [
        (
            "1 structure round trip over all partitions of n ≤ 6",
            criterion_1,
        ),
        ("2 antipodal pairing and equal-span groups", criterion_2),
        ("3 groupable-but-not-a-basis counterexample", criterion_3),
        ("4 d=4 mutually unbiased product-basis triple", criterion_4),
        ("5 d=6 mutually unbiased basis triple", criterion_5),
        ("6 named family right/left types", criterion_6),
        ("7 partition enumeration and counts", criterion_7),
        ("8 product factorization oracle", criterion_8),
        ("9 CLI determinism", criterion_9),
    ];
    let mut failures = 0;
    for (name, check) in criteria {
        let start = Instant::now();
        let verdict = check();
        let elapsed = start.elapsed().as_secs_f64();
        match verdict {
            Ok(detail) => println!("[PASS] criterion {name} ({elapsed:.2}s): {detail}"),
            Err(detail) => {
                failures += 1;
                println!("[FAIL] criterion {name} ({elapsed:.2}s): {detail}");
            }
        }
    }
    if failures > 0 {
        println!("{failures} acceptance criteria failed");
        std::process::exit(1);
    }
    println!("all acceptance criteria passed");
}
