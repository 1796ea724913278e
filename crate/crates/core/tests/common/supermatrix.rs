//! Honest `(m+n) × (m+n)` supermatrices for the structure-constant oracle.

use num_traits::{One, Zero};
use uhfree_core::poly::Rat;
use uhfree_core::superlie::{super_bracket, BasisIndex, Combination, Idx, Parity};

pub const SHAPES: [(usize, usize); 4] = [(1, 1), (2, 1), (3, 1), (2, 2)];

pub type Dense = Vec<Vec<Rat>>;

pub fn zeros(d: usize) -> Dense {
    vec![vec![Rat::zero(); d]; d]
}

pub fn pos(i: Idx, m: usize) -> usize {
    match i {
        Idx::Plain(k) => k - 1,
        Idx::Bar(k) => m + k - 1,
    }
}

pub fn unit(d: usize, r: usize, c: usize) -> Dense {
    let mut e = zeros(d);
    e[r][c] = Rat::one();
    e
}

pub fn add(a: &Dense, b: &Dense, scale: &Rat) -> Dense {
    a.iter()
        .zip(b)
        .map(|(ra, rb)| ra.iter().zip(rb).map(|(x, y)| x + y * scale).collect())
        .collect()
}

pub fn mul(a: &Dense, b: &Dense) -> Dense {
    let d = a.len();
    let mut out = zeros(d);
    for i in 0..d {
        for k in 0..d {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..d {
                out[i][j] += &a[i][k] * &b[k][j];
            }
        }
    }
    out
}

/// `h_i = e_ii + e_{n̄n̄}`, `h_j̄ = e_j̄j̄ + e_mm`, roots are matrix units.
pub fn dense(b: BasisIndex, m: usize, n: usize) -> Dense {
    let d = m + n;
    match b {
        BasisIndex::Cartan(i @ Idx::Plain(_)) => {
            add(&unit(d, pos(i, m), pos(i, m)), &unit(d, d - 1, d - 1), &Rat::one())
        }
        BasisIndex::Cartan(j) => add(&unit(d, pos(j, m), pos(j, m)), &unit(d, m - 1, m - 1), &Rat::one()),
        BasisIndex::Root(i, j) => unit(d, pos(i, m), pos(j, m)),
    }
}

pub fn dense_comb(c: &Combination, m: usize, n: usize) -> Dense {
    c.iter()
        .fold(zeros(m + n), |acc, (b, x)| add(&acc, &dense(*b, m, n), x))
}

pub fn supercommutator(x: &Dense, px: Parity, y: &Dense, py: Parity) -> Dense {
    let sign = Rat::from_integer(px.sign(py).into());
    add(&mul(x, y), &mul(y, x), &-sign)
}

pub fn bracket_comb(x: &Combination, y: &Combination, m: usize, n: usize) -> Combination {
    let mut out = Combination::new();
    for (a, ca) in x {
        for (b, cb) in y {
            for (r, cr) in super_bracket(*a, *b, m, n).unwrap() {
                let e = out.entry(r).or_insert_with(Rat::zero);
                *e += ca * cb * cr;
            }
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

pub fn single(b: BasisIndex) -> Combination {
    Combination::from([(b, Rat::one())])
}

pub fn scaled(c: &Combination, s: &Rat) -> Combination {
    c.iter()
        .map(|(b, x)| (*b, x * s))
        .filter(|(_, x)| !x.is_zero())
        .collect()
}

pub fn sum(a: &Combination, b: &Combination) -> Combination {
    let mut out = a.clone();
    for (k, v) in b {
        let e = out.entry(*k).or_insert_with(Rat::zero);
        *e += v;
    }
    out.retain(|_, c| !c.is_zero());
    out
}
