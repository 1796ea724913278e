//! Truncated string modules over the two-loop quiver with relations
//! `x² = y² = 0`, and the maps identifying them with the two `sl(1|1)`
//! classes.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::normalform::Sl11Class;
use crate::poly::{Monomial, Poly, Rat};
use crate::presentation::{act, VecF};
use crate::superlie::{BasisIndex, Idx};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    X,
    Y,
}

impl Letter {
    pub fn other(self) -> Letter {
        match self {
            Letter::X => Letter::Y,
            Letter::Y => Letter::X,
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Letter::X => "x",
            Letter::Y => "y",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Gen {
    X,
    Y,
    H,
}

impl Gen {
    pub const ALL: [Gen; 3] = [Gen::X, Gen::Y, Gen::H];
}

impl fmt::Display for Gen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Gen::X => "x",
            Gen::Y => "y",
            Gen::H => "h",
        })
    }
}

/// A finite combination `Σ c_i u_i`; `truncated` marks a dropped term past `N`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct StringVec {
    pub terms: BTreeMap<usize, Rat>,
    pub truncated: bool,
}

impl StringVec {
    pub fn basis(i: usize) -> Self {
        StringVec {
            terms: BTreeMap::from([(i, Rat::one())]),
            truncated: false,
        }
    }

    fn add(&mut self, i: usize, c: Rat) {
        let e = self.terms.entry(i).or_insert_with(Rat::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&i);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

/// `u_1 → u_2 → …` with arrows alternating `x, y` (variant 1) or `y, x`
/// (variant 2); `swapped` exchanges the labels as a negative control.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StringModule {
    pub variant: u8,
    pub n: usize,
    pub swapped: bool,
}

impl StringModule {
    pub fn new(variant: u8, n: usize) -> Result<Self> {
        if variant != 1 && variant != 2 {
            return Err(Error::Precondition(format!("variant must be 1 or 2, got {variant}")));
        }
        Ok(StringModule {
            variant,
            n,
            swapped: false,
        })
    }

    pub fn swapped(mut self) -> Self {
        self.swapped = !self.swapped;
        self
    }

    /// Label of the arrow leaving `u_k`.
    pub fn arrow(&self, k: usize) -> Letter {
        let first = if (self.variant == 1) != self.swapped {
            Letter::X
        } else {
            Letter::Y
        };
        if k % 2 == 1 {
            first
        } else {
            first.other()
        }
    }

    fn letter_act(&self, l: Letter, v: &StringVec) -> StringVec {
        let mut out = StringVec {
            truncated: v.truncated,
            ..Default::default()
        };
        for (&k, c) in &v.terms {
            if self.arrow(k) == l {
                if k < self.n {
                    out.add(k + 1, c.clone());
                } else {
                    out.truncated = true;
                }
            }
        }
        out
    }

    pub fn act_vec(&self, g: Gen, v: &StringVec) -> StringVec {
        match g {
            Gen::X => self.letter_act(Letter::X, v),
            Gen::Y => self.letter_act(Letter::Y, v),
            Gen::H => {
                let xy = self.letter_act(Letter::X, &self.letter_act(Letter::Y, v));
                let yx = self.letter_act(Letter::Y, &self.letter_act(Letter::X, v));
                let mut out = xy;
                out.truncated |= yx.truncated;
                for (k, c) in yx.terms {
                    out.add(k, c);
                }
                out
            }
        }
    }

    /// `(u_k, label, u_{k+1})` for every arrow inside the truncation.
    pub fn listing(&self) -> Vec<(usize, Letter, usize)> {
        (1..self.n).map(|k| (k, self.arrow(k), k + 1)).collect()
    }
}

/// `g · u_i`, with `h = xy + yx`.
pub fn string_act(s: &StringModule, g: Gen, i: usize) -> Result<StringVec> {
    if i == 0 || i > s.n {
        return Err(Error::InvalidIndex(format!("u_{i} outside 1..{}", s.n)));
    }
    Ok(s.act_vec(g, &StringVec::basis(i)))
}

/// The basis index that `h^d` in component `slot` maps to.
fn phi_index(variant: u8, slot: usize, d: usize) -> usize {
    let first_slot = if variant == 1 { 1 } else { 0 };
    if slot == first_slot {
        2 * d + 1
    } else {
        2 * d + 2
    }
}

/// `Φ`: variant 1 sends `(0, h^i)` to `u_{2i+1}` and `(h^i, 0)` to `u_{2i+2}`;
/// variant 2 swaps the components.
pub fn phi_map(variant: u8, v: &VecF, n: usize) -> Result<StringVec> {
    if variant != 1 && variant != 2 {
        return Err(Error::Precondition(format!("variant must be 1 or 2, got {variant}")));
    }
    if v.nvars() != 1 {
        return Err(Error::Precondition("string modules live over sl(1|1)".into()));
    }
    let mut out = StringVec::default();
    for slot in 0..2 {
        for (m, c) in v.f[slot].terms() {
            let idx = phi_index(variant, slot, m.exponents()[0] as usize);
            if idx > n {
                return Err(Error::Truncation { index: idx, limit: n });
            }
            out.add(idx, c.clone());
        }
    }
    Ok(out)
}

/// `Φ^{-1}(u_i)`.
pub fn phi_inverse(variant: u8, i: usize) -> VecF {
    let d = ((i - 1) / 2) as u32;
    let odd_slot = if variant == 1 { 1 } else { 0 };
    let slot = if i % 2 == 1 { odd_slot } else { 1 - odd_slot };
    VecF::unit(slot, Poly::monomial(Monomial::from_exponents(vec![d]), Rat::one()))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntertwiningFailure {
    pub gen: Gen,
    /// `Φ(v)` is `u_index`.
    pub index: usize,
    pub lhs: StringVec,
    pub rhs: StringVec,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct IntertwiningVerdict {
    pub checked: usize,
    pub failures: Vec<IntertwiningFailure>,
}

impl IntertwiningVerdict {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks `Φ(g·v) = g·Φ(v)` for `g ∈ {x, y, h}` and every monomial vector
/// of degree at most `max_deg`, in order of `Φ(v)`.
pub fn check_intertwining_module(s: &StringModule, max_deg: usize) -> Result<IntertwiningVerdict> {
    // h raises the index of u_{2d+2} to u_{2d+4}
    if s.n < 2 * max_deg + 4 {
        return Err(Error::Precondition(format!(
            "truncation {} too small for degree {max_deg}; need at least {}",
            s.n,
            2 * max_deg + 4
        )));
    }
    let class = if s.variant == 1 {
        Sl11Class::One
    } else {
        Sl11Class::Two
    };
    let p = class.presentation();
    let gen_index = |g: Gen| match g {
        Gen::X => BasisIndex::Root(Idx::Plain(1), Idx::Bar(1)),
        Gen::Y => BasisIndex::Root(Idx::Bar(1), Idx::Plain(1)),
        Gen::H => BasisIndex::Cartan(Idx::Plain(1)),
    };
    let mut verdict = IntertwiningVerdict::default();
    for i in 1..=(2 * max_deg + 2) {
        let v = phi_inverse(s.variant, i);
        let image = phi_map(s.variant, &v, s.n)?;
        for g in Gen::ALL {
            let lhs = phi_map(s.variant, &act(&p, gen_index(g), &v)?, s.n)?;
            let rhs = s.act_vec(g, &image);
            verdict.checked += 1;
            if lhs != rhs {
                verdict.failures.push(IntertwiningFailure {
                    gen: g,
                    index: i,
                    lhs,
                    rhs,
                });
            }
        }
    }
    Ok(verdict)
}

pub fn check_intertwining(variant: u8, n: usize, max_deg: usize) -> Result<IntertwiningVerdict> {
    check_intertwining_module(&StringModule::new(variant, n)?, max_deg)
}

/// Linear combinations of words in `x, y` modulo the two-sided ideal `(x², y²)`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct QuiverElem {
    pub terms: BTreeMap<Vec<Letter>, Rat>,
}

impl QuiverElem {
    pub fn word(w: &[Letter]) -> Self {
        let mut e = QuiverElem::default();
        e.add(w.to_vec(), Rat::one());
        e
    }

    /// `h = xy + yx`.
    pub fn h() -> Self {
        let mut e = QuiverElem::word(&[Letter::X, Letter::Y]);
        e.add(vec![Letter::Y, Letter::X], Rat::one());
        e
    }

    fn add(&mut self, w: Vec<Letter>, c: Rat) {
        if w.windows(2).any(|p| p[0] == p[1]) {
            return;
        }
        let e = self.terms.entry(w.clone()).or_insert_with(Rat::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&w);
        }
    }

    pub fn mul(&self, other: &QuiverElem) -> QuiverElem {
        let mut out = QuiverElem::default();
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                let mut w = a.clone();
                w.extend(b);
                out.add(w, ca * cb);
            }
        }
        out
    }

    pub fn sub(&self, other: &QuiverElem) -> QuiverElem {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add(w.clone(), -c);
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

/// Every word in `x, y` of length at most `max_len`.
pub fn all_words(max_len: usize) -> Vec<Vec<Letter>> {
    let mut out = vec![Vec::new()];
    let mut layer = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &layer {
            for l in [Letter::X, Letter::Y] {
                let mut v: Vec<Letter> = w.clone();
                v.push(l);
                next.push(v);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// Words `w` of length at most `max_len` with `h·w ≠ w·h`; empty when `h` is central.
pub fn central_check(max_len: usize) -> Vec<Vec<Letter>> {
    let h = QuiverElem::h();
    all_words(max_len)
        .into_iter()
        .filter(|w| {
            let e = QuiverElem::word(w);
            !h.mul(&e).sub(&e.mul(&h)).is_zero()
        })
        .collect()
}

/// Basis vectors `u_i` with `x²·u_i ≠ 0` or `y²·u_i ≠ 0`.
pub fn nilpotency_check(s: &StringModule) -> Vec<usize> {
    (1..=s.n)
        .filter(|&i| {
            let u = StringVec::basis(i);
            let xx = s.act_vec(Gen::X, &s.act_vec(Gen::X, &u));
            let yy = s.act_vec(Gen::Y, &s.act_vec(Gen::Y, &u));
            !xx.is_zero() || !yy.is_zero()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn single(i: usize) -> StringVec {
        StringVec::basis(i)
    }

    #[test]
    fn act_examples() {
        let s = StringModule::new(1, 10).unwrap();
        assert_eq!(string_act(&s, Gen::X, 1).unwrap(), single(2));
        assert!(string_act(&s, Gen::X, 2).unwrap().is_zero());
        assert_eq!(string_act(&s, Gen::H, 1).unwrap(), single(3));
        assert!(string_act(&s, Gen::X, 11).is_err());
        assert!(string_act(&s, Gen::H, 10).unwrap().truncated);
    }

    #[test]
    fn phi_examples() {
        let h = Poly::var(1, 0);
        let v = VecF::new(Poly::zero(1), Poly::one(1));
        assert_eq!(phi_map(1, &v, 10).unwrap(), single(1));
        let w = VecF::new(h.clone(), Poly::zero(1));
        assert_eq!(phi_map(1, &w, 10).unwrap(), single(4));
        let z = VecF::new(h.pow(2), Poly::zero(1));
        assert_eq!(phi_map(2, &z, 10).unwrap(), single(5));
        assert_eq!(
            phi_map(1, &VecF::new(h.pow(9), Poly::zero(1)), 10),
            Err(Error::Truncation { index: 20, limit: 10 })
        );
    }

    #[test]
    fn phi_inverse_is_inverse() {
        for variant in [1, 2] {
            for i in 1..=12 {
                assert_eq!(phi_map(variant, &phi_inverse(variant, i), 12).unwrap(), single(i));
            }
        }
    }

    #[test]
    fn intertwining_examples() {
        assert!(check_intertwining(1, 25, 10).unwrap().passed());
        assert!(check_intertwining(2, 25, 10).unwrap().passed());
        let neg = check_intertwining_module(&StringModule::new(1, 25).unwrap().swapped(), 10).unwrap();
        assert!(!neg.passed());
        assert_eq!(neg.failures[0].index, 1);
        assert!(check_intertwining(1, 10, 10).is_err());
    }

    #[test]
    fn quiver_relations() {
        assert!(central_check(6).is_empty());
        let x = QuiverElem::word(&[Letter::X]);
        assert!(x.mul(&x).is_zero());
        assert!(nilpotency_check(&StringModule::new(2, 15).unwrap()).is_empty());
    }

    #[test]
    fn listing_alternates() {
        let s = StringModule::new(2, 4).unwrap();
        assert_eq!(
            s.listing(),
            vec![(1, Letter::Y, 2), (2, Letter::X, 3), (3, Letter::Y, 4)]
        );
    }
}
