//! Census counts, frozen from an independent brute-force enumeration
//! (explicit polynomial products, exhaustive pairing search and subset sums
//! of the theta classes), and checked for every worker count.

use rbk::census::{run_census, CensusOptions};

struct Fixture {
    n: usize,
    total: u64,
    kahler: u64,
    spin: u64,
    oracle_all: u64,
    orientable: u64,
}

const FIXTURES: &[Fixture] = &[
    Fixture {
        n: 1,
        total: 1,
        kahler: 0,
        spin: 0,
        oracle_all: 1,
        orientable: 1,
    },
    Fixture {
        n: 2,
        total: 2,
        kahler: 1,
        spin: 1,
        oracle_all: 1,
        orientable: 1,
    },
    Fixture {
        n: 3,
        total: 8,
        kahler: 0,
        spin: 0,
        oracle_all: 2,
        orientable: 2,
    },
    Fixture {
        n: 4,
        total: 64,
        kahler: 6,
        spin: 6,
        oracle_all: 8,
        orientable: 8,
    },
    Fixture {
        n: 5,
        total: 1024,
        kahler: 0,
        spin: 0,
        oracle_all: 30,
        orientable: 64,
    },
    Fixture {
        n: 6,
        total: 32768,
        kahler: 192,
        spin: 76,
        oracle_all: 176,
        orientable: 1024,
    },
];

#[test]
fn counts_match_fixtures() {
    for f in FIXTURES {
        for workers in [1, 3] {
            let r = run_census(
                f.n,
                &CensusOptions {
                    workers,
                    ..Default::default()
                },
            )
            .unwrap();
            assert_eq!(r.total, f.total, "n = {}", f.n);
            assert_eq!(r.kahler_count, f.kahler, "n = {}", f.n);
            assert_eq!(r.spin_by_theorem_count, f.spin, "n = {}", f.n);
            assert_eq!(r.spin_by_oracle_kahler_count, Some(f.spin), "n = {}", f.n);
            assert_eq!(r.spin_by_oracle_count, Some(f.oracle_all), "n = {}", f.n);
            assert_eq!(r.orientable_count, f.orientable, "n = {}", f.n);
            assert_eq!(r.mismatch_count, 0);
            assert!(r.mismatches.is_empty() && !r.mismatches_truncated);
        }
    }
}

#[test]
fn theorem_only_path_agrees() {
    for f in FIXTURES {
        let r = run_census(
            f.n,
            &CensusOptions {
                oracle: false,
                workers: 2,
                max_dim: None,
            },
        )
        .unwrap();
        assert_eq!(r.kahler_count, f.kahler);
        assert_eq!(r.spin_by_theorem_count, f.spin);
        assert_eq!(r.orientable_count, f.orientable);
        assert_eq!(r.spin_by_oracle_count, None);
    }
}

#[test]
fn odd_dimensions_have_no_kahler_matrices() {
    for n in [1, 3, 5, 7] {
        let r = run_census(
            n,
            &CensusOptions {
                oracle: false,
                workers: 4,
                max_dim: None,
            },
        )
        .unwrap();
        assert_eq!(r.kahler_count, 0, "n = {n}");
    }
}
