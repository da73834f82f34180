use proptest::prelude::*;

use rbk::bott::{AffineIsometry, BottMatrix};

fn arb_bott(max_n: usize) -> impl Strategy<Value = BottMatrix> {
    (1..=max_n).prop_flat_map(|n| {
        prop::collection::vec(any::<u64>(), n).prop_map(move |raw| {
            let cols = raw
                .iter()
                .enumerate()
                .map(|(j, &c)| {
                    if j == 0 {
                        0
                    } else {
                        c & (u64::MAX >> (64 - j))
                    }
                })
                .collect();
            BottMatrix::from_columns(cols).unwrap()
        })
    })
}

/// A random Kähler Bott matrix of dimension `2 * half`: a random pairing of
/// the columns, each pair sharing one value supported above both.
fn arb_kahler(max_half: usize) -> impl Strategy<Value = BottMatrix> {
    (1..=max_half).prop_flat_map(|half| {
        let n = 2 * half;
        (
            Just((0..n).collect::<Vec<usize>>()).prop_shuffle(),
            prop::collection::vec(any::<u64>(), half),
        )
            .prop_map(move |(perm, raw)| {
                let mut cols = vec![0u64; n];
                for (k, pair) in perm.chunks(2).enumerate() {
                    let lo = pair[0].min(pair[1]);
                    let v = if lo == 0 {
                        0
                    } else {
                        raw[k] & (u64::MAX >> (64 - lo))
                    };
                    cols[pair[0]] = v;
                    cols[pair[1]] = v;
                }
                BottMatrix::from_columns(cols).unwrap()
            })
    })
}

// Exhaustive search for a pairing of equal columns.
fn has_pairing(cols: &[u64]) -> bool {
    match cols.split_first() {
        None => true,
        Some((first, rest)) => rest.iter().enumerate().any(|(k, c)| {
            c == first && {
                let mut others = rest.to_vec();
                others.remove(k);
                has_pairing(&others)
            }
        }),
    }
}

// Row sums of Ã when the LARGEST indices of each equal class are kept.
fn row_sums_keeping_last(a: &BottMatrix) -> Vec<bool> {
    let n = a.dim();
    let mut parity = 0u64;
    for j in 0..n {
        let c = a.column(j);
        let before = (0..j).filter(|&k| a.column(k) == c).count();
        let total = (0..n).filter(|&k| a.column(k) == c).count();
        if before >= total / 2 {
            parity ^= c;
        }
    }
    (0..n).map(|i| parity >> i & 1 == 1).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn action_is_free_without_full_holonomy(a in arb_bott(10)) {
        let p = a.to_pmatrix();
        prop_assert!(p.is_free_action());
        prop_assert!(!p.has_full_holonomy());
    }

    #[test]
    fn orientability_routes_agree(a in arb_bott(10)) {
        prop_assert_eq!(a.is_orientable(), a.to_pmatrix().is_orientable());
        prop_assert_eq!(a.is_orientable(), a.to_pmatrix().sw_data().w1.is_zero());
    }

    #[test]
    fn kahler_parity_matches_pairing_search(a in arb_bott(8)) {
        let expected = a.dim() % 2 == 0 && has_pairing(a.columns());
        prop_assert_eq!(a.is_kahler(), expected);
    }

    #[test]
    fn kahler_generator_is_kahler(a in arb_kahler(6)) {
        prop_assert!(a.is_kahler());
    }

    #[test]
    fn kahler_manifolds_are_orientable(a in arb_kahler(6)) {
        prop_assert!(a.to_pmatrix().sw_data().w1.is_zero());
    }

    #[test]
    fn theorem_matches_oracle(a in arb_kahler(6)) {
        prop_assert_eq!(a.spin_main_theorem().unwrap(), a.spin_oracle());
    }

    #[test]
    fn row_sums_ignore_pairing_choice(a in arb_kahler(6)) {
        let r = a.reduce().unwrap();
        prop_assert_eq!(r.row_sums, row_sums_keeping_last(&a));
    }

    #[test]
    fn reduced_matrix_halves_multiplicities(a in arb_kahler(6)) {
        let r = a.reduce().unwrap();
        prop_assert_eq!(r.columns.len(), a.dim() / 2);
        for &c in a.columns() {
            let full = a.columns().iter().filter(|&&x| x == c).count();
            let kept = r.columns.iter().filter(|&&x| x == c).count();
            prop_assert_eq!(full, 2 * kept);
        }
    }

    #[test]
    fn corollary_implies_spin(a in arb_kahler(6)) {
        if a.corollary_check().unwrap() {
            prop_assert!(a.spin_main_theorem().unwrap());
        }
    }

    #[test]
    fn squares_of_generators(a in arb_bott(10)) {
        let n = a.dim();
        for (i, s) in a.generators().iter().enumerate() {
            let mut e = vec![0; n];
            e[i] = 2;
            prop_assert_eq!(s.compose(s).unwrap(), AffineIsometry::new(vec![1; n], e).unwrap());
        }
    }

    #[test]
    fn text_roundtrip(a in arb_bott(12)) {
        prop_assert_eq!(a.to_string().parse::<BottMatrix>().unwrap(), a.clone());
        let with_header = format!("{}\n{}", a.dim(), a);
        prop_assert_eq!(with_header.parse::<BottMatrix>().unwrap(), a);
    }
}
