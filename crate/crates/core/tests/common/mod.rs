#![allow(dead_code)]

use pldyn::{r, PLMap, Rational};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn g22() -> PLMap {
    "0,0; 3/8,3/4; 3/4,1; 7/8,3/4; 1,0".parse().unwrap()
}

pub fn psi23() -> PLMap {
    "0,0; 1/4,3/4; 1/2,1; 3/4,3/4; 5/6,0; 11/12,3/4; 1,1".parse().unwrap()
}

pub fn h_half_three_quarters() -> PLMap {
    "0,0; 1/2,3/4; 1,1".parse().unwrap()
}

/// `k` distinct sorted fractions in `(0,1)` with denominator `den`.
fn interior_grid(rng: &mut ChaCha8Rng, k: usize, den: i64) -> Vec<Rational> {
    let mut nums: Vec<i64> = (1..den).collect();
    nums.shuffle(rng);
    let mut picked: Vec<i64> = nums.into_iter().take(k).collect();
    picked.sort();
    picked.into_iter().map(|p| r(p, den)).collect()
}

/// Random increasing PL homeomorphism with up to `max_kinks` kinks.
pub fn random_homeomorphism(rng: &mut ChaCha8Rng, max_kinks: usize) -> PLMap {
    let k = rng.gen_range(1..=max_kinks);
    let den = rng.gen_range((k as i64 + 2)..=24);
    let xs = interior_grid(rng, k, den);
    let den2 = rng.gen_range((k as i64 + 2)..=24);
    let ys = interior_grid(rng, k, den2);
    let mut pts = vec![(r(0, 1), r(0, 1))];
    pts.extend(xs.into_iter().zip(ys));
    pts.push((r(1, 1), r(1, 1)));
    PLMap::new(pts).unwrap()
}

/// `p/q` with `lo < p/q < hi`, denominator at most `max_den`.
pub fn random_between(rng: &mut ChaCha8Rng, lo: &Rational, hi: &Rational, max_den: i64) -> Rational {
    loop {
        let q = rng.gen_range(2..=max_den);
        let p = rng.gen_range(1..q);
        let x = r(p, q);
        if &x > lo && &x < hi {
            return x;
        }
    }
}

pub fn fig9_params(rng: &mut ChaCha8Rng) -> Vec<Rational> {
    vec![random_between(rng, &r(0, 1), &r(1, 1), 97)]
}

pub fn fig11_params(rng: &mut ChaCha8Rng) -> Vec<Rational> {
    let a = random_between(rng, &r(0, 1), &r(1, 1), 97);
    let b = random_between(rng, &a, &r(1, 1), 97);
    vec![a, b]
}

pub fn fig18_params(rng: &mut ChaCha8Rng) -> Vec<Rational> {
    let a = random_between(rng, &r(0, 1), &r(1, 2), 97);
    let hi = &a * r(3, 2);
    let b = random_between(rng, &a, &hi, 401);
    vec![a, b]
}

pub fn params_for(id: &str, rng: &mut ChaCha8Rng) -> Vec<Rational> {
    match id {
        "fig9" => fig9_params(rng),
        "fig11" => fig11_params(rng),
        "fig18" => fig18_params(rng),
        other => panic!("unknown family {other}"),
    }
}
