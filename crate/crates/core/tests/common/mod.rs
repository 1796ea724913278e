#![allow(dead_code)]

pub mod supermatrix;

use std::collections::BTreeSet;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use uhfree_core::poly::{int, rat, Poly, Rat};
use uhfree_core::presentation::Mat2;

pub fn small_rat(rng: &mut ChaCha8Rng) -> Rat {
    rat(rng.gen_range(-4..=4), rng.gen_range(1..=3))
}

pub fn nonzero_rat(rng: &mut ChaCha8Rng) -> Rat {
    loop {
        let r = small_rat(rng);
        if r != int(0) {
            return r;
        }
    }
}

/// `c_0 + c_1 h` in one variable.
pub fn linear(rng: &mut ChaCha8Rng, nvars: usize) -> Poly {
    let var = rng.gen_range(0..nvars);
    &Poly::constant(nvars, small_rat(rng)) + &Poly::var(nvars, var).scale(&small_rat(rng))
}

/// `diag(c, 1/c) · [1, f; 0, 1] · [1, 0; g, 1]` or the mirrored product:
/// determinant 1, entries of degree at most 2.
pub fn unimodular(rng: &mut ChaCha8Rng, nvars: usize) -> Mat2 {
    let c = nonzero_rat(rng);
    let d = Mat2::diag(Poly::constant(nvars, c.clone()), Poly::constant(nvars, c.recip()));
    let one = Poly::one(nvars);
    let zero = Poly::zero(nvars);
    let up = Mat2::new(one.clone(), linear(rng, nvars), zero.clone(), one.clone());
    let lo = Mat2::new(one.clone(), zero, linear(rng, nvars), one);
    if rng.gen_bool(0.5) {
        &(&d * &up) * &lo
    } else {
        &(&d * &lo) * &up
    }
}

pub fn random_params(rng: &mut ChaCha8Rng, m: usize) -> Vec<Rat> {
    (0..m).map(|_| nonzero_rat(rng)).collect()
}

pub fn subsets(m: usize) -> Vec<BTreeSet<usize>> {
    (0..1u32 << m)
        .map(|bits| (1..=m).filter(|i| bits & (1 << (i - 1)) != 0).collect())
        .collect()
}
