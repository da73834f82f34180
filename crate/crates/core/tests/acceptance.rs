//! Acceptance criteria. Each test prints one `[PASS]`/`[FAIL]` line; run with
//! `cargo test --test acceptance -- --nocapture --test-threads=1` to see them.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use rbk::bott::{AffineIsometry, BottMatrix};
use rbk::census::{enumerate_bott, run_census, CensusOptions, CensusReport};
use rbk::f2poly::F2Polynomial;

fn criterion(id: u32, name: &str, result: Result<String, String>) {
    match result {
        Ok(detail) => println!("[PASS] AC{id} {name}: {detail}"),
        Err(why) => {
            println!("[FAIL] AC{id} {name}: {why}");
            panic!("AC{id} failed: {why}");
        }
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn sweep() -> impl Iterator<Item = BottMatrix> {
    (1..=6).flat_map(|n| enumerate_bott(n, 6).unwrap())
}

#[test]
fn ac1_worked_example() {
    let result = (|| {
        let start = Instant::now();
        let a: BottMatrix = "001111\n001111\n000011\n000011\n000000\n000000\n"
            .parse()
            .map_err(|e| format!("load failed: {e}"))?;
        let kahler = a.is_kahler();
        let reduced = a.reduce().map_err(|e| e.to_string())?;
        let spin_theorem = a.spin_main_theorem().map_err(|e| e.to_string())?;
        let spin_oracle = a.spin_oracle();
        let elapsed = start.elapsed();

        ensure(kahler, || "not Kähler".into())?;
        let sums: Vec<u8> = reduced.row_sums.iter().map(|&b| b as u8).collect();
        ensure(sums == [0, 0, 1, 1, 0, 0], || format!("row sums {sums:?}"))?;
        ensure(!spin_theorem, || "theorem says spin".into())?;
        ensure(!spin_oracle, || "oracle says spin".into())?;
        ensure(elapsed < Duration::from_secs(1), || {
            format!("took {elapsed:?}")
        })?;
        Ok(format!("S̃ = {sums:?}, no spin by both routes, {elapsed:?}"))
    })();
    criterion(1, "worked 6x6 example", result);
}

#[test]
fn ac2_theorem_matches_oracle() {
    let result = (|| {
        let mut details = Vec::new();
        for n in [2, 4, 6] {
            let start = Instant::now();
            let r = run_census(n, &CensusOptions::default()).map_err(|e| e.to_string())?;
            ensure(r.total == 1u64 << (n * (n - 1) / 2), || {
                format!("n={n}: total {}", r.total)
            })?;
            ensure(r.mismatch_count == 0, || {
                format!("n={n}: {} mismatches", r.mismatch_count)
            })?;
            ensure(
                r.spin_by_oracle_kahler_count == Some(r.spin_by_theorem_count),
                || format!("n={n}: counts differ"),
            )?;
            ensure(start.elapsed() < Duration::from_secs(180), || {
                format!("n={n} too slow")
            })?;
            details.push(format!(
                "n={n}: {} Kähler, {} spin",
                r.kahler_count, r.spin_by_theorem_count
            ));
        }
        // regression fixtures from an independent enumeration
        let six = run_census(6, &CensusOptions::default()).unwrap();
        ensure(
            (six.kahler_count, six.spin_by_theorem_count) == (192, 76),
            || {
                format!(
                    "n=6 counts {} / {}",
                    six.kahler_count, six.spin_by_theorem_count
                )
            },
        )?;
        Ok(format!("0 mismatches; {}", details.join("; ")))
    })();
    criterion(2, "spin criterion equals cohomological oracle", result);
}

#[test]
fn ac3_torus_baselines() {
    let result = (|| {
        for n in [2, 4, 6] {
            let a = BottMatrix::zero(n);
            let p = a.to_pmatrix();
            ensure(a.is_kahler(), || format!("n={n} not Kähler"))?;
            ensure(p.is_orientable(), || format!("n={n} not orientable"))?;
            ensure(a.spin_main_theorem() == Ok(true), || {
                format!("n={n} theorem")
            })?;
            ensure(a.spin_oracle(), || format!("n={n} oracle"))?;
            ensure(p.sw_data().w2 == F2Polynomial::zero(), || {
                format!("n={n} w2 ≠ 0")
            })?;
        }
        Ok("n = 2, 4, 6".into())
    })();
    criterion(3, "torus baselines", result);
}

/// Dimension-8 Kähler matrix whose nonzero columns form groups of four equal
/// columns. Column value for a group must be supported above its first index.
fn four_group_matrix(rng: &mut impl Rng) -> BottMatrix {
    let n = 8;
    let mut cols = vec![0u64; n];
    // column 1 is always zero, so at most one group of four fits in 2..=8
    if rng.random_bool(0.9) {
        let mut idx: Vec<usize> = (1..n).collect();
        for k in (1..idx.len()).rev() {
            idx.swap(k, rng.random_range(0..=k));
        }
        let group = &idx[..4];
        let lo = *group.iter().min().unwrap();
        let mask = (1u64 << lo) - 1;
        let v = loop {
            let v = rng.random::<u64>() & mask;
            if v != 0 {
                break v;
            }
        };
        for &j in group {
            cols[j] = v;
        }
    }
    BottMatrix::from_columns(cols).unwrap()
}

#[test]
fn ac4_four_element_groups() {
    let result = (|| {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_b077);
        let mut nonzero = 0;
        for k in 0..200 {
            let a = four_group_matrix(&mut rng);
            nonzero += (a.columns().iter().any(|&c| c != 0)) as usize;
            ensure(a.is_kahler(), || format!("#{k} {a:?} not Kähler"))?;
            ensure(a.corollary_check() == Ok(true), || {
                format!("#{k} {a:?} corollary")
            })?;
            ensure(a.spin_main_theorem() == Ok(true), || {
                format!("#{k} {a:?} theorem")
            })?;
            ensure(a.spin_oracle(), || format!("#{k} {a:?} oracle"))?;
        }
        ensure(nonzero > 150, || {
            format!("only {nonzero} nontrivial samples")
        })?;
        Ok(format!("200 samples ({nonzero} with a nonzero group)"))
    })();
    criterion(4, "four-element column groups are spin", result);
}

#[test]
fn ac5_rbk_orientable() {
    let result = (|| {
        let mut count = 0;
        for a in sweep().filter(BottMatrix::is_kahler) {
            count += 1;
            ensure(a.to_pmatrix().sw_data().w1.is_zero(), || {
                format!("{a:?} has w1 ≠ 0")
            })?;
        }
        ensure(count == 1 + 6 + 192, || {
            format!("saw {count} Kähler matrices")
        })?;
        Ok(format!("{count} Kähler matrices, all w1 = 0"))
    })();
    criterion(5, "Kähler Bott manifolds are orientable", result);
}

#[test]
fn ac6_structural_invariants() {
    let result = (|| {
        let mut count = 0;
        for a in sweep() {
            count += 1;
            let p = a.to_pmatrix();
            ensure(p.is_free_action(), || format!("{a:?} action not free"))?;
            ensure(!p.has_full_holonomy(), || format!("{a:?} full holonomy"))?;
            let n = a.dim();
            for (i, s) in a.generators().iter().enumerate() {
                let mut e = vec![0; n];
                e[i] = 2;
                let unit = AffineIsometry::new(vec![1; n], e).unwrap();
                ensure(s.compose(s).unwrap() == unit, || {
                    format!("{a:?}: s{}^2", i + 1)
                })?;
            }
        }
        Ok(format!("{count} matrices"))
    })();
    criterion(6, "free action, non-full holonomy, s_i^2 = e_i", result);
}

#[test]
fn ac7_klein_bottle() {
    let result = (|| {
        let a = BottMatrix::parse_inline("01;00").map_err(|e| e.to_string())?;
        ensure(!a.is_kahler(), || "Kähler".into())?;
        ensure(!a.to_pmatrix().is_orientable(), || "orientable".into())?;
        ensure(!a.spin_oracle(), || "spin".into())?;
        Ok("not Kähler, not orientable, not spin".into())
    })();
    criterion(7, "Klein bottle", result);
}

fn normalized(mut r: CensusReport) -> String {
    r.elapsed_seconds = 0.0;
    r.to_json()
}

fn cli_census_json(workers: &str) -> String {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = rbk::cli::run(
        ["rbk", "census", "--dim", "6", "--workers", workers],
        &mut out,
        &mut err,
    );
    assert_eq!(code, 0);
    let mut v: serde_json::Value = serde_json::from_slice(&out).unwrap();
    v["elapsed_seconds"] = 0.0.into();
    v.to_string()
}

#[test]
fn ac8_determinism() {
    let result = (|| {
        let reports: Vec<String> = [1, 2, 8]
            .iter()
            .map(|&workers| {
                normalized(
                    run_census(
                        6,
                        &CensusOptions {
                            workers,
                            ..Default::default()
                        },
                    )
                    .unwrap(),
                )
            })
            .collect();
        ensure(reports.windows(2).all(|w| w[0] == w[1]), || {
            "library reports differ".into()
        })?;
        let again = normalized(run_census(6, &CensusOptions::default()).unwrap());
        ensure(again == reports[0], || "rerun differs".into())?;

        let cli: Vec<String> = ["1", "2", "8"].iter().map(|w| cli_census_json(w)).collect();
        ensure(cli.windows(2).all(|w| w[0] == w[1]), || {
            "CLI reports differ".into()
        })?;
        Ok("workers 1, 2, 8 give identical reports".into())
    })();
    criterion(8, "deterministic census", result);
}
