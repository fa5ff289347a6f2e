//! Acceptance suite. Each criterion prints one line:
//! `criterion N [PASS|FAIL] description (time)`, and the binary exits
//! nonzero if any criterion fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::time::{Duration, Instant};

use koszul_dual::ainf::{MorphismId, SignedTerm};
use koszul_dual::combinatorics::{
    check_dagger_bound, check_inversion, ext_sequence, sequence_shape_violations, Flavor,
};
use koszul_dual::diagram::{
    admissible_chains, check_chain_bijection, marked_order, relation_polygon, MarkedPoint,
};
use koszul_dual::dual::{
    adjudicate_sign, build_dual, compare_quadratic, compare_with_closed_form, HomTable,
    SignConvention,
};
use koszul_dual::ext::{oracle_agreement, resolution_length};
use koszul_dual::pattern::{
    enumerate_patterns, enumerate_patterns_up_to, fixtures, RelationPattern,
};
use koszul_dual::service::{cmd_analyze, cmd_diagram, cmd_sweep, render, Format, Options};

type Check = Result<String, String>;
type Criterion = fn() -> Check;
type Case = (RelationPattern, Vec<(usize, usize)>, Vec<Vec<usize>>);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit: Duration) -> Result<(), String> {
    ensure(elapsed < limit, || {
        format!("took {elapsed:.2?}, limit {limit:?}")
    })
}

fn q(j: usize, i: usize) -> MarkedPoint {
    MarkedPoint::new(j, i)
}

fn c1_sequences() -> Check {
    let start = Instant::now();
    let a3 = fixtures::a3();
    let expected: [&[usize]; 7] = [
        &[0],
        &[1, 0],
        &[2, 1],
        &[3, 2, 0],
        &[4, 3, 2, 0],
        &[5, 4],
        &[6, 5, 3, 2, 0],
    ];
    for (p, e) in expected.iter().enumerate() {
        let got = ext_sequence(&a3, p).values;
        ensure(got == *e, || format!("a^({p}) = {got:?}, expected {e:?}"))?;
    }
    within(start.elapsed(), Duration::from_secs(1))?;
    Ok("seven sequences of the three-relation example reproduced".into())
}

fn c2_orders() -> Check {
    let a3 = fixtures::a3();
    let expected: [Vec<MarkedPoint>; 7] = [
        vec![],
        vec![q(1, 0)],
        vec![q(2, 1)],
        vec![q(3, 0), q(3, 2)],
        vec![q(4, 2), q(4, 0), q(4, 3)],
        vec![q(5, 4)],
        vec![q(6, 3), q(6, 0), q(6, 2), q(6, 5)],
    ];
    for (p, e) in expected.iter().enumerate() {
        let got = marked_order(&a3, p).plain_side();
        ensure(&got == e, || format!("curve {p}: {got:?}, expected {e:?}"))?;
    }
    Ok("plain-side orders of curves 0..6 reproduced".into())
}

fn c3_small_duals() -> Check {
    // (pattern, degree-2 morphisms, products as vertex chains j_0 > ... > j_d)
    let cases: [Case; 2] = [
        (fixtures::a1(), vec![(3, 0)], vec![vec![3, 2, 1, 0]]),
        (
            fixtures::a2(),
            vec![(3, 0), (6, 3)],
            vec![vec![3, 2, 1, 0], vec![6, 5, 4, 3]],
        ),
    ];
    for (pattern, deg2, products) in cases {
        let dual = build_dual(&pattern, SignConvention::default());
        let n = pattern.n();
        let mut expected = std::collections::BTreeMap::new();
        for p in 0..=n {
            expected.insert((p, p, 0), 1);
            if p > 0 {
                expected.insert((p, p - 1, 1), 1);
            }
        }
        for &(p, q) in &deg2 {
            expected.insert((p, q, 2), 1);
        }
        let got = dual.hom_table();
        ensure(got == HomTable(expected.clone()), || {
            format!("{pattern}: hom table {got:?}, expected {expected:?}")
        })?;
        let got: Vec<(Vec<usize>, SignedTerm)> = dual.nontrivial_products();
        let want: Vec<(Vec<usize>, SignedTerm)> = products
            .iter()
            .map(|c| {
                (
                    c.clone(),
                    SignedTerm::signed(0, dual.morphism(c[0], *c.last().unwrap()).unwrap()),
                )
            })
            .collect();
        ensure(got == want, || {
            format!("{pattern}: products {got:?}, expected {want:?}")
        })?;
        // μ^3(q_{j-2,j-3}, q_{j-1,j-2}, q_{j,j-1}) = +q_{j,j-3}, arguments last-applied first.
        for c in &products {
            let args: Vec<MorphismId> = c
                .windows(2)
                .rev()
                .map(|w| dual.morphism(w[0], w[1]).unwrap())
                .collect();
            let v = dual.category().mu_eval(&args).map_err(|e| e.to_string())?;
            ensure(
                v == SignedTerm::signed(0, dual.morphism(c[0], c[3]).unwrap()),
                || format!("{pattern}: {v:?}"),
            )?;
        }
    }
    Ok(
        "one- and two-relation duals: hom tables and the two μ^3 products with coefficient +1"
            .into(),
    )
}

fn c4_closed_forms() -> Check {
    let start = Instant::now();
    for (n, k) in [(4, 2), (5, 2), (6, 3), (4, 4), (6, 6)] {
        let r =
            compare_with_closed_form(n, k, SignConvention::default()).map_err(|e| e.to_string())?;
        ensure(r.passed, || format!("(n, k) = ({n}, {k}): {r:?}"))?;
    }
    within(start.elapsed(), Duration::from_secs(10))?;
    Ok("closed forms for (4,2), (5,2), (6,3), (4,4), (6,6)".into())
}

fn c5_quadratic() -> Check {
    let start = Instant::now();
    let mut count = 0;
    for p in enumerate_patterns_up_to(8)
        .iter()
        .filter(|p| p.is_quadratic())
    {
        let r = compare_quadratic(p, SignConvention::default()).map_err(|e| e.to_string())?;
        ensure(r.passed, || format!("{p}: {r:?}"))?;
        count += 1;
    }
    within(start.elapsed(), Duration::from_secs(60))?;
    Ok(format!(
        "{count} all-quadratic patterns with n <= 8 match the graded opposite of the complement"
    ))
}

fn c6_lemmas() -> Check {
    let start = Instant::now();
    let patterns = enumerate_patterns_up_to(9);
    for p in &patterns {
        let shape = sequence_shape_violations(p);
        ensure(shape.is_empty(), || format!("{p}: shape {shape:?}"))?;
        let inv = check_inversion(p);
        ensure(inv.passed(), || {
            format!("{p}: inversion {:?}", inv.counterexamples)
        })?;
        let bound = check_dagger_bound(p);
        ensure(bound.passed(), || {
            format!("{p}: dagger bound {:?}", bound.counterexamples)
        })?;
        let t = p.sequences();
        let (a, b) = (
            t.total_length(Flavor::Plain),
            t.total_length(Flavor::Dagger),
        );
        ensure(a == b, || format!("{p}: length sums {a} vs {b}"))?;
    }
    within(start.elapsed(), Duration::from_secs(60))?;
    Ok(format!(
        "shape, inversion, dagger bound, counting duality on {} patterns with n <= 9",
        patterns.len()
    ))
}

fn c7_ainfty() -> Check {
    let start = Instant::now();
    let a = adjudicate_sign(7).map_err(|e| e.to_string())?;
    let chosen = a.default_convention().map_err(|e| e.to_string())?;
    let v = a.verdict(chosen);
    ensure(v.failures.is_empty(), || {
        format!("{chosen}: {:?}", v.failures.first())
    })?;
    let other: Vec<String> = a
        .verdicts
        .iter()
        .map(|v| {
            format!(
                "{} failing on {}/{}",
                v.convention,
                v.failures.len(),
                v.patterns_checked
            )
        })
        .collect();
    within(start.elapsed(), Duration::from_secs(600))?;
    Ok(format!("adjudicated {chosen}; {}", other.join(", ")))
}

fn c8_oracle() -> Check {
    let start = Instant::now();
    let patterns = enumerate_patterns_up_to(6);
    for p in &patterns {
        let dual = build_dual(p, SignConvention::default());
        let r = oracle_agreement(&dual).map_err(|e| e.to_string())?;
        ensure(r.passed(), || format!("{p}: {r:?}"))?;
        for v in p.vertices() {
            let len = resolution_length(p, v).map_err(|e| e.to_string())?;
            let l = p.sequences().plain[v].length();
            ensure(len == l, || {
                format!("{p}: resolution length of S({v}) is {len}, l = {l}")
            })?;
        }
    }
    within(start.elapsed(), Duration::from_secs(600))?;
    Ok(format!(
        "Ext dimensions equal hom dimensions on {} patterns with n <= 6",
        patterns.len()
    ))
}

fn c9_polygons() -> Check {
    let cases = [
        (fixtures::a1(), vec![4]),
        (fixtures::a2(), vec![4, 4]),
        (fixtures::a3(), vec![4, 3, 4]),
    ];
    for (p, sides) in cases {
        let got: Vec<usize> = (1..=p.m())
            .map(|j| relation_polygon(&p, j).unwrap().sides())
            .collect();
        ensure(got == sides, || {
            format!("{p}: polygon sides {got:?}, expected {sides:?}")
        })?;
    }
    let a1 = fixtures::a1();
    let chains = admissible_chains(&a1, &build_dual(&a1, SignConvention::default()));
    ensure(
        chains.len() == 1 && chains[0].vertices == [0, 1, 2, 3],
        || format!("{chains:?}"),
    )?;
    let patterns = enumerate_patterns_up_to(6);
    for p in &patterns {
        let b = check_chain_bijection(p, &build_dual(p, SignConvention::default()));
        ensure(b.passed(), || format!("{p}: {b:?}"))?;
    }
    Ok(format!(
        "polygon inventories 1x4, 2x4, 2x4+1x3; chains match products on {} patterns",
        patterns.len()
    ))
}

fn c10_determinism() -> Check {
    let docs = [
        r#"{"n": 3, "relations": [[0, 3]]}"#,
        r#"{"n": 6, "relations": [[0, 3], [3, 6]]}"#,
        r#"{"n": 6, "relations": [[0, 3], [2, 4], [3, 6]]}"#,
    ];
    let opts = Options::default();
    for d in docs {
        for format in [Format::Human, Format::Machine] {
            let a = render(&cmd_analyze(d, &opts).map_err(|e| e.to_string())?, format);
            let b = render(&cmd_analyze(d, &opts).map_err(|e| e.to_string())?, format);
            ensure(a == b, || format!("analyze output differs for {d}"))?;
        }
        let a = cmd_diagram(d).map_err(|e| e.to_string())?;
        let b = cmd_diagram(d).map_err(|e| e.to_string())?;
        ensure(a == b, || format!("diagram output differs for {d}"))?;
    }

    let dir = std::env::temp_dir().join(format!("koszul-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
    let input = dir.join("a3.json");
    std::fs::write(&input, docs[2]).map_err(|e| e.to_string())?;
    let run = |args: &[&str]| -> Result<Vec<u8>, String> {
        let out = Command::new(env!("CARGO_BIN_EXE_koszul"))
            .args(args)
            .output()
            .map_err(|e| e.to_string())?;
        ensure(out.status.success(), || {
            format!("{args:?} exited with {}", out.status)
        })?;
        Ok(out.stdout)
    };
    let path = input.to_str().unwrap();
    for args in [
        vec!["analyze", path, "--format", "machine"],
        vec!["analyze", path],
        vec!["diagram", path],
    ] {
        let a = run(&args)?;
        let b = run(&args)?;
        ensure(a == b && !a.is_empty(), || {
            format!("binary output differs for {args:?}")
        })?;
    }
    let _ = std::fs::remove_dir_all(&dir);

    let sweep = |threads| {
        cmd_sweep(&Options {
            n_max: Some(6),
            threads: Some(threads),
            ..Options::default()
        })
        .map(|r| render(&r, Format::Machine))
        .map_err(|e| e.to_string())
    };
    let serial = sweep(1)?;
    let parallel = sweep(4)?;
    ensure(serial == parallel, || {
        "4-thread sweep differs from serial sweep".into()
    })?;
    Ok(
        "analyze and diagram repeat byte for byte; 4-thread sweep equals serial sweep (n <= 6)"
            .into(),
    )
}

fn c11_units() -> Check {
    let mut count = 0;
    for n in 0..=7 {
        for p in enumerate_patterns(n) {
            for c in SignConvention::ALL {
                let dual = build_dual(&p, c);
                let cat = dual.category();
                for (i, m) in cat.morphisms().iter().enumerate() {
                    let a = MorphismId(i);
                    let right = cat
                        .mu_eval(&[a, cat.identity(m.source)])
                        .map_err(|e| e.to_string())?;
                    let left = cat
                        .mu_eval(&[cat.identity(m.target), a])
                        .map_err(|e| e.to_string())?;
                    ensure(right == SignedTerm::signed(0, a), || {
                        format!("{p} {c}: μ^2({}, 1)", cat.label(a))
                    })?;
                    ensure(left == SignedTerm::signed(m.degree, a), || {
                        format!("{p} {c}: μ^2(1, {})", cat.label(a))
                    })?;
                    count += 1;
                }
            }
        }
    }
    Ok(format!("{count} morphism/convention pairs with n <= 7"))
}

fn main() {
    let criteria: [(&str, Criterion); 11] = [
        ("sequence fixture", c1_sequences),
        ("marked-order fixture", c2_orders),
        ("small dual structure", c3_small_duals),
        ("closed forms", c4_closed_forms),
        ("quadratic duality", c5_quadratic),
        ("combinatorial lemmas", c6_lemmas),
        ("A-infinity soundness", c7_ainfty),
        ("oracle agreement", c8_oracle),
        ("polygon inventory", c9_polygons),
        ("determinism", c10_determinism),
        ("unitality", c11_units),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let elapsed = start.elapsed();
        match outcome {
            Ok(detail) => println!(
                "criterion {:>2} [PASS] {name}: {detail} ({elapsed:.2?})",
                i + 1
            ),
            Err(detail) => {
                failed += 1;
                println!(
                    "criterion {:>2} [FAIL] {name}: {detail} ({elapsed:.2?})",
                    i + 1
                );
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
