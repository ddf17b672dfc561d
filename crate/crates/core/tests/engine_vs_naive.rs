//! Cross-checks the bitset engine against the naive collection-based
//! reference on a corpus of random small arrays, tuple by tuple.

use shatterscan_core::oracles::naive_shatter_check;
use shatterscan_core::randgen::{gen_perm_array, gen_word_array, SeedSpec};
use shatterscan_core::shatter::{
    count_unshattered, is_covering, patterns_present, words_present, DEFAULT_WITNESS_CAP,
};
use shatterscan_core::types::{Array, ColumnTuple};

fn all_tuples(n: usize, t: usize) -> Vec<ColumnTuple> {
    fn rec(start: u32, n: u32, left: usize, cur: &mut Vec<u32>, out: &mut Vec<ColumnTuple>) {
        if left == 0 {
            out.push(ColumnTuple::from_zero_based(cur.clone()).unwrap());
            return;
        }
        for c in start..=(n - left as u32) {
            cur.push(c);
            rec(c + 1, n, left - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n as u32, t, &mut Vec::new(), &mut out);
    out
}

#[test]
fn engine_agrees_with_naive_reference_on_1000_instances() {
    // Deterministic parameter sweep over (n, k, q, t) with several seeds
    // each; exceeds 1000 random instances in total.
    let mut instances = 0u32;
    let mut seed = 0u64;
    while instances < 1000 {
        for n in 2..=6usize {
            for k in 0..=8usize {
                for q in 2..=3u32 {
                    for t in 1..=3u32 {
                        if t as usize > n {
                            continue;
                        }
                        seed += 1;
                        instances += 1;

                        let words = gen_word_array(n, k, q, SeedSpec::new(seed)).unwrap();
                        let perms = gen_perm_array(n, k, SeedSpec::new(seed)).unwrap();
                        let wa = Array::Words(words.clone());
                        let pa = Array::Perms(perms.clone());

                        let mut x_words = 0u64;
                        let mut x_perms = 0u64;
                        for cols in all_tuples(n, t as usize) {
                            let engine_w = words_present(&words, &cols).unwrap().is_full();
                            let naive_w = naive_shatter_check(&wa, &cols).unwrap();
                            assert_eq!(
                                engine_w,
                                naive_w,
                                "words n={n} k={k} q={q} t={t} seed={seed} cols={:?}",
                                cols.one_based()
                            );
                            x_words += !engine_w as u64;

                            let engine_p = patterns_present(&perms, &cols).unwrap().is_full();
                            let naive_p = naive_shatter_check(&pa, &cols).unwrap();
                            assert_eq!(
                                engine_p,
                                naive_p,
                                "perms n={n} k={k} t={t} seed={seed} cols={:?}",
                                cols.one_based()
                            );
                            x_perms += !engine_p as u64;
                        }

                        // Aggregate counts and the covering decision agree too.
                        let rw = count_unshattered(&wa, t, DEFAULT_WITNESS_CAP).unwrap();
                        assert_eq!(rw.x_count, x_words);
                        assert_eq!(is_covering(&wa, t).unwrap(), x_words == 0);
                        let rp = count_unshattered(&pa, t, DEFAULT_WITNESS_CAP).unwrap();
                        assert_eq!(rp.x_count, x_perms);
                        assert_eq!(is_covering(&pa, t).unwrap(), x_perms == 0);
                    }
                }
            }
        }
    }
}
