//! Small worked values. Each expected value was produced by the brute-force
//! tables in `common` and is frozen here; the tests check both the oracle
//! and the library against it.

mod common;

use common::{left_power, tower, Backward, Forward};
use laver_core::backward::{b_period, b_row, bs, bs_iter, subalg, template_embed};
use laver_core::forward::{compose, lift_shift, period_length, reduce_mod, star, star_prime};
use laver_core::struct_iso::{
    cor42_fast_row, lemma43_max_period, lemma44_shift, lemma45_period_bound, lemma47_step, lemma48_step,
    thm41_image, validate_params,
};
use laver_core::terms::{eval_term, f_of, j_sup};
use laver_core::{GammaIndex, LdTerm, Level};

fn lvl(n: u32) -> Level {
    Level::new(n).unwrap()
}

#[test]
fn forward_level_two() {
    let frozen = [[2, 4, 2, 4], [3, 4, 3, 4], [4, 4, 4, 4], [1, 2, 3, 4]];
    let f = Forward::new(2);
    for a in 1..=4u64 {
        assert_eq!(f.row(a), frozen[a as usize - 1]);
        for b in 1..=4u64 {
            assert_eq!(star_prime(lvl(2), a, b).unwrap(), frozen[a as usize - 1][b as usize - 1]);
        }
    }
    let periods: Vec<u64> = (1..=4).map(|a| period_length(lvl(2), a).unwrap()).collect();
    assert_eq!(periods, [2, 2, 1, 4]);
    assert_eq!(periods, (1..=4).map(|a| f.period(a)).collect::<Vec<_>>());
}

#[test]
fn forward_level_four_rows() {
    let f = Forward::new(4);
    assert_eq!(&f.row(12)[..4], [13, 14, 15, 16]);
    assert_eq!(&f.row(1)[..4], [2, 12, 14, 16]);
    assert_eq!((f.period(12), f.period(1)), (4, 4));
    assert_eq!(period_length(lvl(4), 12).unwrap(), 4);
    assert_eq!(period_length(lvl(4), 1).unwrap(), 4);
}

#[test]
fn zero_based_and_compose() {
    let f = Forward::new(3);
    for a in 0..8 {
        for b in 0..8 {
            assert_eq!(star(lvl(3), a, b).unwrap(), f.star_zero(a, b));
            let want = (f.star_zero(a, (b + 1) % 8) + 7) % 8;
            assert_eq!(compose(lvl(3), a, b).unwrap(), want);
        }
    }
    assert_eq!(star(lvl(2), 0, 3).unwrap(), 3);
    assert_eq!(star(lvl(2), 3, 0).unwrap(), 0);
}

#[test]
fn reduction_and_shift() {
    // lift(1 *_2 1) = 2 + 4 = 6 = 5 *_3 5
    let f3 = Forward::new(3);
    assert_eq!(f3.star(5, 5), 6);
    assert_eq!(lift_shift(lvl(2), star_prime(lvl(2), 1, 1).unwrap()).unwrap(), 6);
    assert_eq!(star_prime(lvl(3), 5, 5).unwrap(), 6);
    assert_eq!(reduce_mod(lvl(3), lvl(2), 8).unwrap(), 4);
    assert_eq!(reduce_mod(lvl(3), lvl(2), 5).unwrap(), 1);
    assert!(reduce_mod(lvl(2), lvl(3), 1).is_err());
}

#[test]
fn backward_values() {
    let b2 = Backward::new(2);
    assert_eq!(b2.row(3), [0, 2]);
    assert_eq!(b_row(3).unwrap(), [0, 2]);
    assert_eq!((b2.bs(2, 1), b2.bs(2, 2), b2.bs(2, 3)), (1, 0, 1));
    assert_eq!((bs(2, 1).unwrap(), bs(2, 2).unwrap(), bs(2, 3).unwrap()), (1, 0, 1));
    let b3 = Backward::new(3);
    assert_eq!(b3.bs(4, 3), 3);
    assert_eq!(bs(4, 3).unwrap(), 3);
    assert_eq!(b3.row(4), [0, 1, 2, 3]);
    assert_eq!(b_period(4).unwrap(), 4);
    assert_eq!(b3.row(5).len(), 2);
    assert_eq!(subalg(3).unwrap().elements(), [0, 1, 2, 3]);
    // x \ x = 0 for x = 2, and x \ x \ x = x \ 0 = 0
    assert_eq!(bs_iter(2, 1).unwrap(), 2);
    assert_eq!(bs_iter(2, 2).unwrap(), b2.bs(2, 2));
    assert_eq!(bs_iter(3, 2).unwrap(), b2.bs(3, 3));
    assert_eq!(bs_iter(3, 3).unwrap(), b2.bs(b2.bs(3, 3), 3));
    assert_eq!(template_embed(3, 2).unwrap(), 2);
}

#[test]
fn iterated_self_product_reads_from_next_row() {
    let b = Backward::new(9);
    for x in 0..256u64 {
        let next = b.row(x + 1);
        let p = next.len() as u64;
        let mut v = x;
        for r in 1..=2 * p + 1 {
            // K - r for K the least multiple of p that is >= r
            assert_eq!(v, next[((p - r % p) % p) as usize], "x={x} r={r}");
            assert_eq!(bs_iter(x, r).unwrap(), v, "x={x} r={r}");
            v = b.bs(v, x);
        }
    }
}

#[test]
fn block_theorem_values() {
    let b4 = Backward::new(4);
    // the row of 13 is 0, 4, 8, 12
    assert_eq!(b4.row(13), [0, 4, 8, 12]);
    let p = validate_params(0, 3, 1, 2).unwrap();
    assert_eq!(cor42_fast_row(&p).unwrap(), b4.row(13));
    for i in 0..16 {
        assert_eq!(thm41_image(&p, i).unwrap(), b4.bs(13, i));
    }
    let p = validate_params(0, 1, 1, 1).unwrap();
    assert_eq!(thm41_image(&p, 1).unwrap(), b4.bs(3, 1));
    assert_eq!(b4.bs(3, 1), 2);
    let p = validate_params(4, 1, 1, 1).unwrap();
    assert_eq!((p.l(), b4.row(5).len()), (1, 2));

    // periods of 3 and 13 are 2 and 4, the largest possible
    assert!(lemma43_max_period(1, 2).unwrap());
    assert!(lemma43_max_period(2, 4).unwrap());
    assert!(lemma43_max_period(3, 3).unwrap());
    assert_eq!(lemma44_shift(0, 2, 0, 3).unwrap(), b4.bs(4, 3));
    assert_eq!(lemma44_shift(0, 1, 0, 1).unwrap(), b4.bs(2, 1));
    // period of 5 divides 4
    assert!(lemma45_period_bound(4, 2).unwrap());
    assert!(4 % b4.row(5).len() == 0);
    assert!(lemma45_period_bound(1, 1).is_err());
    assert_eq!(lemma47_step(0, 1, 0, 1, 1).unwrap(), b4.bs(2, 2));
    assert_eq!(lemma47_step(0, 2, 0, 0, 2).unwrap(), b4.bs(2, 3));
    assert_eq!(b4.bs(2, 3), 1);
    assert_eq!(lemma48_step(0, 4, 1, 1).unwrap(), b4.bs(0, 6));
    assert_eq!(lemma48_step(0, 0, 0, 1).unwrap(), 1);
    // the suggested instance x' = x = 2, m = n = 1 fails 4 | 2
    assert!(lemma48_step(2, 2, 1, 1).is_err());
}

#[test]
fn towers_and_f() {
    // j^(2) = 1 * (1 * 1) = 1 * 2 in A_3
    let f3 = Forward::new(3);
    assert_eq!(tower(&f3, 2), f3.star_zero(1, 2));
    assert_eq!(j_sup(2, lvl(3)).unwrap().top(), tower(&f3, 2));
    assert_eq!(eval_term(&LdTerm::tower(2), lvl(3)).unwrap(), tower(&f3, 2));
    assert_eq!(left_power(&Forward::new(2), 3), 3);
    // F(0..=3) from the brute-force tables: the largest zero level of j^(n)
    let tables: Vec<Forward> = (0..=8).map(Forward::new).collect();
    let frozen = [0, 1, 2, 4];
    for (n, &want) in frozen.iter().enumerate() {
        let oracle = common::largest_zero_level(8, |lv| tower(&tables[lv as usize], n as u64));
        assert_eq!(oracle, Some(want));
        assert_eq!(f_of(n as u64, lvl(8)).unwrap(), GammaIndex::At(want));
    }
}
