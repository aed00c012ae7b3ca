//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fail.
//!
//! Random instances draw every rational from `{1..10}/{1..10}` (signed where a
//! sequence may change sign) with a fixed seed per criterion.

use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use num::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sumkit_core::classes::{
    characterize_with, reduction_roundtrip, transform_bbar, transform_btilde, verify_reduction_roundtrip, ClassReport,
    ConditionId, SpaceRef,
};
use sumkit_core::duals::{beta_dual_check, gamma_dual_check, pairing_identity_check};
use sumkit_core::operators::{
    apply_triangle, basis_column, classical_matrix, gamma_inverse_closed_form, invert_triangle_oracle, make_gamma,
    make_sigma, sigma_inverse_closed_form, ClassicalKind, DomainName, RowExtent, Structure, TriangleOperator,
    WeightPair,
};
use sumkit_core::spaces::{ak_tail_norm, domain_norm, embed_from_l1, DomainSpace};
use sumkit_core::{ConditionVerdict, Exact, LazySequence, Scalar, SpaceTag, Status, TruncationSchedule};

type Outcome = Result<String, String>;
type Criterion = fn() -> Outcome;

const SPACES: [DomainName; 2] = [DomainName::IntBv, DomainName::DBv];

fn positive(rng: &mut ChaCha8Rng) -> Exact {
    Exact::from_frac(rng.gen_range(1..=10), rng.gen_range(1..=10))
}

fn signed(rng: &mut ChaCha8Rng) -> Exact {
    let v = positive(rng);
    if rng.gen_bool(0.5) {
        -v
    } else {
        v
    }
}

fn weights(rng: &mut ChaCha8Rng, len: usize) -> WeightPair<Exact> {
    let u = (0..len).map(|_| positive(rng)).collect();
    let w = (0..=len).map(|_| positive(rng)).collect();
    WeightPair::new(LazySequence::from_vec(u), LazySequence::from_vec(w))
}

fn vector(rng: &mut ChaCha8Rng, len: usize) -> Vec<Exact> {
    (0..len).map(|_| signed(rng)).collect()
}

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, budget: Duration) -> Result<(), String> {
    let t = start.elapsed();
    check(t <= budget, || format!("took {:.2}s, budget {:.0}s", t.as_secs_f64(), budget.as_secs_f64()))
}

fn lib<T>(r: sumkit_core::Result<T>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

/// Inverse roundtrip, both triangles, 50 weight pairs × 50 sequences of support 128.
fn roundtrip() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let support = 128;
    let mut count = 0;
    for _ in 0..50 {
        let wp = weights(&mut rng, support + 1);
        let (gamma, sigma) = (make_gamma(&wp), make_sigma(&wp));
        for _ in 0..50 {
            let xs = vector(&mut rng, support);
            let x = LazySequence::from_vec(xs.clone());
            let back = gamma_inverse_closed_form(&wp, &lib(apply_triangle(&gamma, &x))?);
            check(lib(back.try_take(support))? == xs, || format!("Γ roundtrip differs (instance {count})"))?;
            let back = sigma_inverse_closed_form(&wp, &lib(apply_triangle(&sigma, &x))?);
            check(lib(back.try_take(support))? == xs, || format!("Σ roundtrip differs (instance {count})"))?;
            count += 1;
        }
    }
    within(start, Duration::from_secs(10))?;
    Ok(format!("{count} sequences per triangle, {:.2}s", start.elapsed().as_secs_f64()))
}

/// Closed-form inverses against back-substitution, column by column on 64×64.
fn closed_form_vs_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let size = 64;
    for pair in 0..20 {
        let wp = weights(&mut rng, size + 1);
        for space in SPACES {
            let t = space.triangle(&wp);
            for k in 1..=size {
                let e = LazySequence::unit(k);
                let closed = lib(space.inverse(&wp, &e).try_take(size))?;
                let oracle = lib(lib(invert_triangle_oracle(&t, &e))?.try_take(size))?;
                if let Some(n) = (0..size).find(|&n| closed[n] != oracle[n]) {
                    return Err(format!("{space} pair {pair}: entry ({}, {k}) differs", n + 1));
                }
            }
        }
    }
    Ok("20 pairs, both inverses, 64×64".into())
}

/// T·b⁽ᵏ⁾ = e⁽ᵏ⁾ for k <= 32, checked on the first 64 coordinates.
fn basis_identity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let horizon = 64;
    for pair in 0..10 {
        let wp = weights(&mut rng, horizon + 1);
        for space in SPACES {
            let t = space.triangle(&wp);
            for k in 1..=32 {
                let image = lib(lib(apply_triangle(&t, &lib(basis_column(space, &wp, k))?))?.try_take(horizon))?;
                let unit = LazySequence::<Exact>::unit(k).take(horizon);
                check(image == unit, || format!("{space} pair {pair}: T b({k}) is not e({k})"))?;
            }
        }
    }
    Ok("10 pairs, both spaces, k <= 32".into())
}

/// ||embed(y)|| at every truncation from the support on equals sum |y_k|.
fn norm_preservation() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut cases = 0;
    for _ in 0..20 {
        let s = rng.gen_range(1..=40);
        let ys = vector(&mut rng, s);
        let expected = ys.iter().fold(Exact::zero(), |acc, v| acc + v.abs());
        let y = LazySequence::from_vec(ys);
        let wp = weights(&mut rng, s + 50);
        for space in SPACES {
            let ds = DomainSpace::new(space, wp.clone());
            let x = embed_from_l1(&ds, &y);
            for n in s..=s + 40 {
                let norm = lib(domain_norm(&ds, &x, n))?;
                check(norm == expected, || format!("{space} support {s}: norm at {n} is {norm}, expected {expected}"))?;
                cases += 1;
            }
        }
    }
    Ok(format!("{cases} (instance, truncation) pairs"))
}

/// AK tail of x_k = 2^-k in d(bv) with unit weights, m = 0..40.
fn ak_decay() -> Outcome {
    let ds = DomainSpace::d_bv(WeightPair::<Exact>::ones());
    let half = Exact::from_frac(1, 2);
    let x = LazySequence::geometric(half.clone());
    let n_eval = 200;
    let mut prev: Option<Exact> = None;
    let mut last = 0.0;
    for m in 0..=40 {
        let tail = lib(ak_tail_norm(&ds, &x, m, n_eval))?;
        // With unit weights (Σx)_n = 2^-n / n.
        let oracle = (m + 1..=n_eval).fold(Exact::zero(), |acc, n| {
            acc + half.pow_int(n as i64) / Exact::from_usize(n)
        });
        check(tail == oracle, || format!("tail at m = {m} differs from the direct sum"))?;
        if let Some(p) = &prev {
            check(tail < *p, || format!("tail does not decrease at m = {m}"))?;
        }
        last = Scalar::to_f64(&tail);
        prev = Some(tail);
    }
    check(last < 1e-9, || format!("tail at m = 40 is {last:e}"))?;
    Ok(format!("strictly decreasing, {last:.3e} at m = 40"))
}

/// sum_{k<=n} a_k x_k = (Hy)_n exactly for n <= 100.
fn pairing_identity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let size = 100;
    for space in SPACES {
        for inst in 0..20 {
            let wp = weights(&mut rng, size + 1);
            let a = LazySequence::from_vec(vector(&mut rng, size));
            let y = LazySequence::from_vec(vector(&mut rng, size));
            for n in 1..=size {
                let (l, r) = lib(pairing_identity_check(&a, &y, &wp, space, n))?;
                check(l == r, || format!("{space} instance {inst}: sides differ at n = {n}"))?;
            }
        }
    }
    Ok("20 instances per space, n <= 100".into())
}

fn dense_product(left: &[Vec<Exact>], right: &[Vec<Exact>]) -> Vec<Vec<Exact>> {
    let size = left.len();
    (0..size)
        .map(|n| {
            (0..size)
                .map(|k| (0..size).fold(Exact::zero(), |acc, j| acc + left[n][j].clone() * right[j][k].clone()))
                .collect()
        })
        .collect()
}

/// b̄ = Γ·A and b̃ = Σ·A on 32×32 blocks against a dense product.
fn transform_products() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let size = 32;
    for inst in 0..10 {
        let wp = weights(&mut rng, size + 1);
        let block: Vec<Vec<Exact>> = (0..size).map(|_| vector(&mut rng, size)).collect();
        let a = TriangleOperator::from_dense(block.clone());
        for (name, got, left) in [
            ("b̄", lib(transform_bbar(&a, &wp))?, make_gamma(&wp)),
            ("b̃", lib(transform_btilde(&a, &wp))?, make_sigma(&wp)),
        ] {
            let expected = dense_product(&lib(left.block(size, size))?, &block);
            check(lib(got.block(size, size))? == expected, || format!("{name} differs from the dense product (instance {inst})"))?;
        }
    }
    Ok("10 instances, 32×32".into())
}

/// (Ax)_n = (By)_n for A = B·T, n <= 64, B with finite rows of varying length.
fn reduction() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let rows = 64;
    for inst in 0..10 {
        let block: Vec<Vec<Exact>> = (0..rows)
            .map(|_| {
                let len = rng.gen_range(1..=80);
                vector(&mut rng, len)
            })
            .collect();
        let b = TriangleOperator::from_dense(block);
        let wp = weights(&mut rng, 81);
        let y = LazySequence::from_vec(vector(&mut rng, 80));
        for n in 1..=rows {
            let (ax, by) = lib(verify_reduction_roundtrip(&b, &wp, &y, n))?;
            check(ax == by, || format!("int-bv instance {inst}: sides differ at n = {n}"))?;
            let (ax, by) = lib(reduction_roundtrip(DomainName::DBv, &b, &wp, &y, n))?;
            check(ax == by, || format!("d-bv instance {inst}: sides differ at n = {n}"))?;
        }
    }
    Ok("10 matrices, n <= 64, both spaces".into())
}

fn condition(report: &ClassReport, id: ConditionId) -> Result<&ConditionVerdict, String> {
    report
        .conditions
        .iter()
        .find(|c| c.id == id)
        .map(|c| &c.verdict)
        .ok_or_else(|| format!("{id} missing from the report"))
}

fn all_exact_one(v: &ConditionVerdict) -> bool {
    v.trace.iter().all(|p| p.exact.as_deref() == Some("1"))
}

/// Batteries on four matrices with known answers.
fn battery_sanity() -> Outcome {
    let start = Instant::now();
    let sched = TruncationSchedule::default();
    let ones = WeightPair::<Exact>::ones();
    let l1 = SpaceRef::Classical(SpaceTag::L1);
    let linf = SpaceRef::Classical(SpaceTag::Linf);

    let id = TriangleOperator::<Exact>::identity();
    let r = lib(characterize_with(&id, l1, l1, Some(1), None, &ones, &sched))?;
    let c13 = condition(&r, ConditionId::C13)?;
    check(r.overall == Status::HoldsAtTruncation && all_exact_one(c13), || format!("identity in (l1:l1): {} {:?}", r.overall, c13.trace))?;

    let cesaro = lib(classical_matrix::<Exact>(&ClassicalKind::Cesaro))?;
    let r = lib(characterize_with(&cesaro, l1, linf, Some(1), None, &ones, &sched))?;
    let c11 = condition(&r, ConditionId::C11)?;
    check(r.overall == Status::HoldsAtTruncation && all_exact_one(c11), || format!("Cesàro in (l1:linf): {} {:?}", r.overall, c11.trace))?;

    let growing = TriangleOperator::<Exact>::from_entries(
        Structure::RowEvaluable(RowExtent::Lower),
        |n, k| if k <= n { Exact::from_usize(n) } else { Exact::zero() },
    );
    let r = lib(characterize_with(&growing, l1, linf, Some(1), None, &ones, &sched))?;
    check(r.overall == Status::DivergenceEvidence, || format!("a_nk = n in (l1:linf): {}", r.overall))?;

    let fone = WeightPair::<f64>::ones();
    let double = TriangleOperator::<f64>::from_entries(
        Structure::RowEvaluable(RowExtent::Infinite),
        |n, k| 2f64.powi(-((n + k) as i32)),
    );
    let r = lib(characterize_with(&double, linf, l1, Some(2), None, &fone, &sched))?;
    let c20 = condition(&r, ConditionId::C20)?;
    let upper = c20.trace.iter().map(|p| p.value).fold(f64::MIN, f64::max);
    check(r.overall == Status::HoldsAtTruncation && upper <= 1.0, || format!("2^(-n-k) in (linf:l1): {} upper {upper}", r.overall))?;

    within(start, Duration::from_secs(5))?;
    Ok(format!("4 matrices, {:.2}s", start.elapsed().as_secs_f64()))
}

/// β/γ verdicts with unit weights, and their stability under one more doubling.
fn dual_sanity() -> Outcome {
    let sched = TruncationSchedule::default();
    let longer = sched.extended();
    let ones = WeightPair::<f64>::ones();
    let space = DomainName::IntBv;
    let cases: [(&str, LazySequence<f64>, bool, Status); 3] = [
        ("β, a_k = 1/k²", LazySequence::power(-2), true, Status::HoldsAtTruncation),
        ("β, a_k = 1", LazySequence::ones(), true, Status::DivergenceEvidence),
        ("γ, a_k = (-1)^k", LazySequence::alternating(), false, Status::DivergenceEvidence),
    ];
    for (name, a, beta, want) in cases {
        let run = |s: &TruncationSchedule| {
            if beta {
                beta_dual_check(space, &a, &ones, s)
            } else {
                gamma_dual_check(space, &a, &ones, s)
            }
        };
        let (v, w) = (lib(run(&sched))?, lib(run(&longer))?);
        check(v.status == want, || format!("{name}: {} instead of {want}", v.status))?;
        check(w.status == want, || format!("{name}: {} after one more doubling", w.status))?;
    }
    Ok("3 verdicts, stable under extension".into())
}

/// Splits a README command line; double quotes group, nothing else is special.
fn split_words(line: &str) -> Vec<String> {
    let (mut words, mut cur, mut quoted) = (Vec::new(), String::new(), false);
    for c in line.chars() {
        match c {
            '"' => quoted = !quoted,
            c if c.is_whitespace() && !quoted => {
                if !cur.is_empty() {
                    words.push(std::mem::take(&mut cur));
                }
            }
            c => cur.push(c),
        }
    }
    if !cur.is_empty() {
        words.push(cur);
    }
    words
}

/// Every `sumkit ...` line in the README's shell blocks, plus the three
/// reference invocations.
fn documented_invocations() -> Vec<Vec<String>> {
    let mut out: Vec<Vec<String>> = [
        "transform --space int-bv --u ones --w harmonic --x e1 --n 4",
        "inverse --space int-bv --u ones --w ones --y 1,2,3 --n 3",
        "class-check --table 1 --source l1 --target c --matrix identity",
    ]
    .iter()
    .map(|s| split_words(s))
    .collect();
    let readme = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../README.md");
    if let Ok(text) = std::fs::read_to_string(readme) {
        let mut in_shell = false;
        for line in text.lines() {
            if line.starts_with("```") {
                in_shell = line.trim() == "```sh";
                continue;
            }
            if let Some(rest) = line.trim().strip_prefix("sumkit ").filter(|_| in_shell) {
                let words = split_words(rest);
                if words.iter().any(|w| w.starts_with("--out") || w.starts_with("--csv-dir")) || words[0].starts_with("--") {
                    continue;
                }
                if !out.contains(&words) {
                    out.push(words);
                }
            }
        }
    }
    out
}

fn cli_determinism() -> Outcome {
    let invocations = documented_invocations();
    for args in &invocations {
        let run = || {
            Command::new(env!("CARGO_BIN_EXE_sumkit"))
                .args(args)
                .env_remove("SUMKIT_SCHEDULE")
                .output()
                .map_err(|e| e.to_string())
        };
        let (a, b) = (run()?, run()?);
        check(!a.stdout.is_empty(), || format!("no report from {args:?}: {}", String::from_utf8_lossy(&a.stderr)))?;
        check(a.stdout == b.stdout && a.status.code() == b.status.code(), || format!("{args:?} differs between runs"))?;
    }
    Ok(format!("{} invocations byte-identical", invocations.len()))
}

fn main() {
    let criteria: [(&str, Criterion); 11] = [
        ("inverse roundtrip", roundtrip),
        ("closed form vs back-substitution", closed_form_vs_oracle),
        ("basis identity", basis_identity),
        ("norm preservation", norm_preservation),
        ("AK tail decay", ak_decay),
        ("pairing identity", pairing_identity),
        ("transform products", transform_products),
        ("reduction soundness", reduction),
        ("condition-battery sanity", battery_sanity),
        ("dual-set sanity", dual_sanity),
        ("CLI determinism", cli_determinism),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
