use std::cmp::Ordering;

use proptest::prelude::*;
use shift_decomp::algebra::{compare, entropy, q_census};
use shift_decomp::codes::{apply, compose, BlockMap};
use shift_decomp::json::{entropy_from_json, entropy_to_json, shift_from_json, shift_to_json};
use shift_decomp::shift::{forbid, higher_block, in_language, is_subshift_of, language_eq, words};
use shift_decomp::{Alphabet, Error, ShiftSpace, Word};

const SYMS: [&str; 3] = ["a", "b", "c"];

fn alphabet(n: usize) -> Alphabet {
    Alphabet::new(SYMS[..n].iter().map(|s| s.to_string()).collect()).unwrap()
}

fn word_strategy(n: usize, len: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = Word> {
    prop::collection::vec(0..n, len).prop_map(|v| v.into_iter().map(|i| SYMS[i].to_string()).collect())
}

fn sft_strategy() -> impl Strategy<Value = ShiftSpace> {
    (2usize..=3).prop_flat_map(|n| {
        prop::collection::vec(word_strategy(n, 1..=3), 0..5)
            .prop_map(move |f| ShiftSpace::sft(alphabet(n), f).unwrap())
            .prop_filter("empty shifts are rejected by design", |x| x.canon().is_ok())
    })
}

fn forbidden_of(x: &ShiftSpace) -> Vec<Word> {
    match x.kind() {
        shift_decomp::ShiftKind::Sft { forbidden, .. } => forbidden.clone(),
        _ => unreachable!(),
    }
}

// x^∞ avoids every forbidden word iff it is a periodic point of the SFT.
fn periodic_allowed(x: &[String], forbidden: &[Word]) -> bool {
    let reps = 4 / x.len() + 2;
    let long: Vec<String> = x.iter().cycle().take(x.len() * reps + 3).cloned().collect();
    !forbidden.iter().any(|f| long.windows(f.len()).any(|w| w == f.as_slice()))
}

fn brute_fixed(n: usize, k: usize, forbidden: &[Word]) -> u64 {
    let mut count = 0;
    let mut idx = vec![0usize; k];
    loop {
        let w: Vec<String> = idx.iter().map(|&i| SYMS[i].to_string()).collect();
        if periodic_allowed(&w, forbidden) {
            count += 1;
        }
        let mut j = 0;
        loop {
            if j == k {
                return count;
            }
            idx[j] += 1;
            if idx[j] < n {
                break;
            }
            idx[j] = 0;
            j += 1;
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn census_matches_enumeration(x in sft_strategy()) {
        let n = x.alphabet().len();
        let f = forbidden_of(&x);
        let c = q_census(&x, 6).unwrap();
        for k in 1..=6 {
            prop_assert_eq!(c.fixed_by(k), brute_fixed(n, k, &f).into(), "k = {}", k);
        }
    }

    #[test]
    fn shift_json_round_trip(x in sft_strategy()) {
        let back = shift_from_json(&shift_to_json(&x)).unwrap();
        prop_assert!(language_eq(&x, &back).unwrap());
        prop_assert_eq!(shift_to_json(&back), shift_to_json(&x));
    }

    #[test]
    fn forbid_shrinks(x in sft_strategy(), extra in prop::collection::vec(word_strategy(2, 1..=3), 1..3)) {
        let y = match forbid(&x, &extra) {
            Err(Error::EmptyShift) => return Ok(()),
            r => r.unwrap(),
        };
        prop_assert!(is_subshift_of(&y, &x).unwrap());
        for w in words(&y, 4).unwrap() {
            prop_assert!(in_language(&x, &w).unwrap());
        }
        let (hx, hy) = (entropy(&x).unwrap(), entropy(&y).unwrap());
        prop_assert_ne!(compare(&hy, &hx), Ordering::Greater);
        let again = entropy_from_json(&entropy_to_json(&hy)).unwrap();
        prop_assert_eq!(compare(&again, &hy), Ordering::Equal);
    }

    #[test]
    fn composition_is_sliding(
        x in sft_strategy(),
        t1 in prop::collection::vec(0..2usize, 9),
        t2 in prop::collection::vec(0..3usize, 4),
        probe in word_strategy(3, 3..=7),
    ) {
        let n = x.alphabet().len();
        let f = BlockMap::from_fn(x.clone(), 1, 0, |w| {
            let i = SYMS.iter().position(|s| *s == w[0]).unwrap() * n + SYMS.iter().position(|s| *s == w[1]).unwrap();
            ["0", "1"][t1[i]].to_string()
        });
        prop_assume!(f.is_ok());
        let f = f.unwrap();
        let full2 = ShiftSpace::sft(Alphabet::new(vec!["0".into(), "1".into()]).unwrap(), vec![]).unwrap();
        let g = BlockMap::from_fn(full2, 0, 1, |w| {
            let i = (w[0] == "1") as usize * 2 + (w[1] == "1") as usize;
            ["x", "y", "z"][t2[i]].to_string()
        }).unwrap();
        let gf = compose(&g, &f).unwrap();
        prop_assert_eq!(gf.window(), 3);
        let probe: Vec<String> = probe.into_iter().filter(|s| x.alphabet().index_of(s).is_some()).collect();
        prop_assume!(probe.len() >= 3 && in_language(&x, &probe).unwrap());
        let direct = apply(&gf, &probe).unwrap();
        let staged = apply(&g, &apply(&f, &probe).unwrap()).unwrap();
        prop_assert_eq!(direct, staged);
    }

    #[test]
    fn higher_block_is_a_conjugacy(x in sft_strategy(), n in 2usize..=3) {
        let hb = higher_block(&x, n).unwrap();
        prop_assert_eq!(q_census(&hb, 6).unwrap(), q_census(&x, 6).unwrap());
        prop_assert_eq!(compare(&entropy(&hb).unwrap(), &entropy(&x).unwrap()), Ordering::Equal);
    }
}
