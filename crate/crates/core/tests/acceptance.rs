//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.
//!
//! Run with `cargo test -p gntt-core --test acceptance`.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use gntt_core::bench::{median, score, speedup, ParamSuite};
use gntt_core::engine::{make_engine, EngineKind, NttEngine};
use gntt_core::matrix::{
    build_matrices_lut, build_matrices_naive, matvec_mod, matvec_mod_wide, ResidueMatrix,
    TransformMatrices,
};
use gntt_core::modarith::validate_params;
use gntt_core::poly::{nwc_schoolbook, random_polynomial};
use gntt_core::NttParams;
use rand::{Rng, SeedableRng};

const FIXTURE_TOLERANCE: f64 = 0.01;
const PRECOMPUTE_MAX_RATIO: f64 = 1.0 / 5.0;
const ASYMPTOTIC_MIN_SPEEDUP: f64 = 10.0;
const TRIALS: u64 = 100;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn registry() -> Vec<NttParams> {
    ParamSuite::all()
        .entries
        .into_iter()
        .map(|(q, n)| NttParams::new(q, n).expect("registry entry is valid"))
        .collect()
}

fn mul(x: u64, y: u64, q: u64) -> u64 {
    (x as u128 * y as u128 % q as u128) as u64
}

fn pow(mut b: u64, mut e: u64, q: u64) -> u64 {
    let mut r = 1 % q;
    while e > 0 {
        if e & 1 == 1 {
            r = mul(r, b, q);
        }
        b = mul(b, b, q);
        e >>= 1;
    }
    r
}

/// Reduces after every multiplication and every addition.
fn reference_matvec(m: &ResidueMatrix, v: &[u32], q: u32) -> Vec<u32> {
    let q = q as u64;
    (0..m.rows())
        .map(|i| {
            m.row(i)
                .iter()
                .zip(v)
                .fold(0u64, |acc, (&x, &y)| (acc + mul(x as u64, y as u64, q)) % q)
                as u32
        })
        .collect()
}

fn identity_holds(m: &TransformMatrices) -> bool {
    let p = m.params();
    let (n, q) = (p.n(), p.q() as u64);
    (0..n).all(|i| {
        (0..n).all(|j| {
            let dot = (0..n).fold(0u64, |acc, k| {
                (acc + mul(m.w_intt().get(i, k) as u64, m.w_ntt().get(k, j) as u64, q)) % q
            });
            mul(dot, p.n_inv() as u64, q) == u64::from(i == j)
        })
    })
}

struct Table3Row {
    label: &'static str,
    t_ntt: f64,
    t_intt: f64,
    speedup: f64,
    memory_mib: f64,
    score: Option<f64>,
}

struct Table3Block {
    label: &'static str,
    cpu: (f64, f64),
    rows: [Table3Row; 4],
}

const fn row(
    label: &'static str,
    t_ntt: f64,
    t_intt: f64,
    speedup: f64,
    memory_mib: f64,
    score: Option<f64>,
) -> Table3Row {
    Table3Row {
        label,
        t_ntt,
        t_intt,
        speedup,
        memory_mib,
        score,
    }
}

/// Raw and derived columns of the large-parameter evaluation table.
fn table3() -> [Table3Block; 3] {
    [
        Table3Block {
            label: "q=2^23-2^13+1 n=2048",
            cpu: (2.365035, 1.433533),
            rows: [
                row("GNTT4", 0.045315, 0.026255, 53.07, 222.7, None),
                row("FNTT-o1", 1.516539, 0.757572, 1.67, 278.0, Some(0.83)),
                row("FNTT-o3", 0.287637, 0.336224, 6.09, 217.5, Some(1.14)),
                row("FNTT-DS", 0.071202, 0.014727, 44.21, 236.6, Some(1.77)),
            ],
        },
        Table3Block {
            label: "q=2^30-2^18+1 n=1024",
            cpu: (0.924408, 0.585499),
            rows: [
                row("GNTT4", 0.040413, 0.028420, 21.94, 217.1, None),
                row("FNTT-o1", 0.762433, 0.379534, 1.32, 277.5, Some(0.84)),
                row("FNTT-o3", 0.154871, 0.166861, 4.69, 217.2, Some(1.21)),
                row("FNTT-DS", 0.067743, 0.013848, 18.51, 236.5, Some(1.76)),
            ],
        },
        Table3Block {
            label: "q=2^30-2^18+1 n=2048",
            cpu: (2.370426, 1.432466),
            rows: [
                row("GNTT4", 0.045228, 0.026296, 53.17, 226.0, None),
                row("FNTT-o1", 1.521742, 0.761007, 1.67, 278.0, Some(0.84)),
                row("FNTT-o3", 0.285375, 0.33635, 6.12, 217.6, Some(1.15)),
                row("FNTT-DS", 0.070627, 0.015392, 44.21, 236.6, Some(1.79)),
            ],
        },
    ]
}

fn formula_reproduction() -> Outcome {
    let mut checked = 0;
    for block in table3() {
        let (c_ntt, c_intt) = block.cpu;
        let base = &block.rows[0];
        let s_base = speedup(c_ntt, c_intt, base.t_ntt, base.t_intt).map_err(|e| e.to_string())?;
        for r in &block.rows {
            let s = speedup(c_ntt, c_intt, r.t_ntt, r.t_intt).map_err(|e| e.to_string())?;
            ensure((s - r.speedup).abs() <= FIXTURE_TOLERANCE, || {
                format!(
                    "{} {}: speedup {s:.4} vs printed {}",
                    block.label, r.label, r.speedup
                )
            })?;
            checked += 1;
            if let Some(expected) = r.score {
                let v =
                    score(s, s_base, base.memory_mib, r.memory_mib).map_err(|e| e.to_string())?;
                ensure((v - expected).abs() <= FIXTURE_TOLERANCE, || {
                    format!(
                        "{} {}: score {v:.4} vs printed {expected}",
                        block.label, r.label
                    )
                })?;
                checked += 1;
            }
        }
    }
    Ok(format!(
        "{checked} derived values within ±{FIXTURE_TOLERANCE}"
    ))
}

fn oracle_equivalence() -> Outcome {
    let mut products = 0;
    for p in registry().into_iter().filter(|p| p.n() <= 2048) {
        let kinds: Vec<EngineKind> = EngineKind::ALL
            .into_iter()
            .filter(|&k| k != EngineKind::MatrixNaive || p.n() <= 512)
            .collect();
        let engines: Vec<_> = kinds.iter().map(|&k| make_engine(k, &p)).collect();
        for t in 0..TRIALS {
            let a = random_polynomial(&p, 1_000 + 2 * t);
            let b = random_polynomial(&p, 1_001 + 2 * t);
            let expected = nwc_schoolbook(&a, &b).map_err(|e| e.to_string())?;
            for e in &engines {
                let got = e.polymul(&a, &b).map_err(|e| e.to_string())?;
                ensure(got == expected, || {
                    format!(
                        "{} differs from schoolbook at q={} n={} trial {t}",
                        e.kind(),
                        p.q(),
                        p.n()
                    )
                })?;
                products += 1;
            }
        }
    }
    Ok(format!("{products} products exactly equal to schoolbook"))
}

fn matrix_identity() -> Outcome {
    let mut checked = 0;
    for q in [17u64, 7681, 12289, 8_380_417] {
        for n in [2u64, 4, 8, 16, 32, 64] {
            if (q - 1) % (2 * n) != 0 {
                ensure(validate_params(q, n).is_err(), || {
                    format!("({q}, {n}) should be rejected")
                })?;
                continue;
            }
            let p = NttParams::new(q, n).map_err(|e| e.to_string())?;
            for (name, m) in [
                ("naive", build_matrices_naive(&p)),
                ("lut", build_matrices_lut(&p)),
            ] {
                ensure(identity_holds(&m), || {
                    format!("{name} identity fails at q={q} n={n}")
                })?;
                checked += 1;
            }
        }
    }
    Ok(format!(
        "{checked} (builder, q, n) combinations; q=17 limited to n<=8 (2n | q-1)"
    ))
}

fn roundtrip() -> Outcome {
    let mut count = 0;
    for p in registry() {
        for kind in EngineKind::ALL {
            let e = make_engine(kind, &p);
            for t in 0..TRIALS {
                let a = random_polynomial(&p, 50_000 + t);
                let back = e
                    .inverse(&e.forward(&a).map_err(|e| e.to_string())?)
                    .map_err(|e| e.to_string())?;
                ensure(back == a, || {
                    format!(
                        "{kind} roundtrip fails at q={} n={} trial {t}",
                        p.q(),
                        p.n()
                    )
                })?;
                count += 1;
            }
        }
    }
    Ok(format!("{count} exact roundtrips"))
}

fn builder_equivalence() -> Outcome {
    let mut moduli: Vec<u64> = ParamSuite::all().entries.iter().map(|&(q, _)| q).collect();
    moduli.dedup();
    let mut checked = 0;
    for q in moduli {
        for n in (1..=8).map(|k| 1u64 << k) {
            let p = NttParams::new(q, n).map_err(|e| e.to_string())?;
            ensure(build_matrices_lut(&p) == build_matrices_naive(&p), || {
                format!("builders differ at q={q} n={n}")
            })?;
            checked += 1;
        }
    }
    Ok(format!("{checked} (q, n) pairs bit-identical"))
}

fn median_secs(runs: usize, mut f: impl FnMut()) -> f64 {
    let samples: Vec<f64> = (0..runs)
        .map(|_| {
            let start = Instant::now();
            f();
            start.elapsed().as_secs_f64()
        })
        .collect();
    median(&samples)
}

fn precompute_speed() -> Outcome {
    let p = NttParams::new(12289, 1024).map_err(|e| e.to_string())?;
    let naive = median_secs(5, || {
        std::hint::black_box(build_matrices_naive(&p));
    });
    let lut = median_secs(5, || {
        std::hint::black_box(build_matrices_lut(&p));
    });
    let ratio = lut / naive;
    ensure(ratio <= PRECOMPUTE_MAX_RATIO, || {
        format!("lut {lut:.4}s / naive {naive:.4}s = {ratio:.3} > {PRECOMPUTE_MAX_RATIO}")
    })?;
    Ok(format!(
        "naive {naive:.4}s, lut {lut:.4}s, ratio {ratio:.4} (<= 0.2), {:.1}x",
        naive / lut
    ))
}

fn asymptotic_win() -> Outcome {
    let p = NttParams::new(12289, 2048).map_err(|e| e.to_string())?;
    let e = make_engine(EngineKind::Fast, &p);
    let a = random_polynomial(&p, 7);
    let b = random_polynomial(&p, 8);
    let fast = median_secs(11, || {
        std::hint::black_box(e.polymul(&a, &b).unwrap());
    });
    let school = median_secs(11, || {
        std::hint::black_box(nwc_schoolbook(&a, &b).unwrap());
    });
    let ratio = school / fast;
    ensure(ratio >= ASYMPTOTIC_MIN_SPEEDUP, || {
        format!("schoolbook/fast = {ratio:.2} < 10")
    })?;
    Ok(format!(
        "fast {:.3}ms, schoolbook {:.3}ms, {ratio:.1}x (>= 10x)",
        fast * 1e3,
        school * 1e3
    ))
}

fn overflow_stress() -> Outcome {
    let p = NttParams::new((1 << 30) - (1 << 18) + 1, 2048).map_err(|e| e.to_string())?;
    let m = build_matrices_lut(&p);
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2048);
    for t in 0..20 {
        let v: Vec<u32> = (0..p.n()).map(|_| rng.gen_range(0..p.q())).collect();
        let mat = if t % 2 == 0 { m.w_ntt() } else { m.w_intt() };
        let expected = reference_matvec(mat, &v, p.q());
        let narrow = matvec_mod(mat, &v, p.q()).map_err(|e| e.to_string())?;
        let wide = matvec_mod_wide(mat, &v, p.q()).map_err(|e| e.to_string())?;
        ensure(narrow == expected && wide == expected, || {
            format!("vector {t} mismatches reference")
        })?;
    }
    Ok("20 vectors exact for per-product and deferred accumulation".into())
}

fn root_primitivity() -> Outcome {
    for p in registry() {
        let (q, n, psi) = (p.q() as u64, p.n() as u64, p.psi() as u64);
        ensure(pow(psi, n, q) == q - 1, || {
            format!("psi^n != -1 at q={q} n={n}")
        })?;
        ensure(pow(psi, 2 * n, q) == 1, || {
            format!("psi^2n != 1 at q={q} n={n}")
        })?;
        let mut k = 1;
        while k < 2 * n {
            ensure(pow(psi, k, q) != 1, || {
                format!("psi^{k} = 1 at q={q} n={n}")
            })?;
            k *= 2;
        }
    }
    Ok(format!("{} registry roots primitive", registry().len()))
}

type Criterion = (&'static str, fn() -> Outcome, Duration);

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        (
            "1 formula reproduction",
            formula_reproduction,
            Duration::from_secs(1),
        ),
        (
            "2 oracle equivalence",
            oracle_equivalence,
            Duration::from_secs(300),
        ),
        (
            "3 matrix identity",
            matrix_identity,
            Duration::from_secs(10),
        ),
        ("4 roundtrip", roundtrip, Duration::from_secs(120)),
        (
            "5 builder equivalence",
            builder_equivalence,
            Duration::from_secs(60),
        ),
        (
            "6 precompute speed",
            precompute_speed,
            Duration::from_secs(120),
        ),
        ("7 asymptotic win", asymptotic_win, Duration::from_secs(60)),
        (
            "8 overflow stress",
            overflow_stress,
            Duration::from_secs(60),
        ),
        (
            "9 root primitivity",
            root_primitivity,
            Duration::from_secs(5),
        ),
    ];
    let mut failures = 0;
    for (name, check, budget) in criteria {
        let start = Instant::now();
        let outcome = check();
        let elapsed = start.elapsed();
        let within = elapsed <= budget;
        match (&outcome, within) {
            (Ok(detail), true) => {
                println!("PASS  {name}: {detail} [{:.2}s]", elapsed.as_secs_f64())
            }
            (Ok(detail), false) => {
                failures += 1;
                println!(
                    "FAIL  {name}: {detail} but took {:.2}s (budget {}s)",
                    elapsed.as_secs_f64(),
                    budget.as_secs()
                );
            }
            (Err(why), _) => {
                failures += 1;
                println!("FAIL  {name}: {why} [{:.2}s]", elapsed.as_secs_f64());
            }
        }
    }
    println!("{} of 9 criteria passed", 9 - failures);
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
