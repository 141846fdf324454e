#![allow(dead_code)]

use capped_proj::{random_instance, InstanceSpec, ProjectionInput};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).fold(0.0, |m, (u, v)| m.max((u - v).abs()))
}

pub fn norm2(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(u, v)| (u - v) * (u - v))
        .sum::<f64>()
        .sqrt()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Generator instance with integer s.
pub fn integer_s(d: usize, seed: u64) -> ProjectionInput {
    random_instance(InstanceSpec { d, seed }).unwrap()
}

/// Same y distribution, s uniform on [0, D].
pub fn real_s(d: usize, seed: u64) -> ProjectionInput {
    let mut r = rng(seed ^ 0x5eed_0000_0000_0000);
    let y: Vec<f64> = (0..d).map(|_| r.gen::<f64>() - 0.5).collect();
    let s = r.gen::<f64>() * d as f64;
    ProjectionInput::new(y, s).unwrap()
}

/// Wider y spread than the generator, so every segment shows up often.
pub fn wide(d: usize, r: &mut ChaCha8Rng) -> ProjectionInput {
    let y: Vec<f64> = (0..d).map(|_| r.gen_range(-2.0..3.0)).collect();
    let s = if r.gen_bool(0.3) {
        r.gen_range(0..=d) as f64
    } else {
        r.gen::<f64>() * d as f64
    };
    ProjectionInput::new(y, s).unwrap()
}
