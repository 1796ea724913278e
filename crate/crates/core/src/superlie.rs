//! The fixed basis of `sl(m|n)`: indices, parity, weight shifts and the
//! supercommutator expressed back in that basis.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::poly::{int, Poly, Rat, ShiftMap};

/// A row/column label of the defining supermatrix: `Plain(i)` is `i`,
/// `Bar(j)` is `j̄`. Both are 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Idx {
    Plain(usize),
    Bar(usize),
}

impl Idx {
    pub fn is_bar(self) -> bool {
        matches!(self, Idx::Bar(_))
    }

    pub fn number(self) -> usize {
        match self {
            Idx::Plain(k) | Idx::Bar(k) => k,
        }
    }

    pub fn valid(self, m: usize, n: usize) -> bool {
        match self {
            Idx::Plain(k) => (1..=m).contains(&k),
            Idx::Bar(k) => (1..=n).contains(&k),
        }
    }

    /// Position in the `(m+n)`-dimensional defining representation.
    pub fn position(self, m: usize) -> usize {
        match self {
            Idx::Plain(k) => k - 1,
            Idx::Bar(k) => m + k - 1,
        }
    }

    /// Unicode rendering with a combining macron on barred indices.
    pub fn pretty(self) -> String {
        match self {
            Idx::Plain(k) => k.to_string(),
            Idx::Bar(k) => format!("{k}\u{0304}"),
        }
    }
}

impl fmt::Display for Idx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Idx::Plain(k) => write!(f, "{k}"),
            Idx::Bar(k) => write!(f, "b{k}"),
        }
    }
}

impl FromStr for Idx {
    type Err = Error;
    fn from_str(s: &str) -> Result<Idx> {
        let s = s.trim();
        let (bar, digits) = match s.strip_prefix('b') {
            Some(rest) => (true, rest.trim()),
            None => (false, s),
        };
        let k: usize = digits
            .parse()
            .map_err(|_| Error::InvalidIndex(format!("bad index '{s}'")))?;
        if k == 0 {
            return Err(Error::InvalidIndex(format!("indices start at 1: '{s}'")));
        }
        Ok(if bar { Idx::Bar(k) } else { Idx::Plain(k) })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn is_odd(self) -> bool {
        self == Parity::Odd
    }

    /// `(-1)^{|x||y|}`.
    pub fn sign(self, other: Parity) -> i64 {
        if self.is_odd() && other.is_odd() {
            -1
        } else {
            1
        }
    }
}

/// A basis element: `h_ι` or the root vector `e_IJ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BasisIndex {
    Cartan(Idx),
    Root(Idx, Idx),
}

impl BasisIndex {
    pub fn root(i: Idx, j: Idx) -> Self {
        BasisIndex::Root(i, j)
    }

    pub fn parity(self) -> Parity {
        match self {
            BasisIndex::Cartan(_) => Parity::Even,
            BasisIndex::Root(i, j) if i.is_bar() != j.is_bar() => Parity::Odd,
            BasisIndex::Root(..) => Parity::Even,
        }
    }

    pub fn validate(self, m: usize, n: usize) -> Result<()> {
        if m == 0 || n == 0 {
            return Err(Error::InvalidIndex(format!("sl({m}|{n}) needs m, n >= 1")));
        }
        match self {
            BasisIndex::Cartan(iota) => {
                let ok = match iota {
                    Idx::Plain(k) => (1..=m).contains(&k),
                    Idx::Bar(k) => (1..n).contains(&k),
                };
                if !ok {
                    return Err(Error::InvalidIndex(format!(
                        "{self} is not a Cartan basis element of sl({m}|{n})"
                    )));
                }
            }
            BasisIndex::Root(i, j) => {
                if i == j {
                    return Err(Error::InvalidIndex(format!("{self} is diagonal")));
                }
                if !i.valid(m, n) || !j.valid(m, n) {
                    return Err(Error::InvalidIndex(format!(
                        "{self} out of range for sl({m}|{n})"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn pretty(self) -> String {
        match self {
            BasisIndex::Cartan(i) => format!("h_{}", i.pretty()),
            BasisIndex::Root(i, j) => format!("e_{}{}", i.pretty(), j.pretty()),
        }
    }
}

impl fmt::Display for BasisIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BasisIndex::Cartan(i) => write!(f, "h[{i}]"),
            BasisIndex::Root(i, j) => write!(f, "e[{i},{j}]"),
        }
    }
}

impl FromStr for BasisIndex {
    type Err = Error;
    fn from_str(s: &str) -> Result<BasisIndex> {
        let t = s.trim();
        let bad = || Error::InvalidIndex(format!("bad basis element '{s}'"));
        if let Some(body) = t.strip_prefix("h[").and_then(|r| r.strip_suffix(']')) {
            return Ok(BasisIndex::Cartan(body.parse()?));
        }
        let body = t
            .strip_prefix("e[")
            .and_then(|r| r.strip_suffix(']'))
            .ok_or_else(bad)?;
        let (a, b) = body.split_once(',').ok_or_else(bad)?;
        Ok(BasisIndex::Root(a.parse()?, b.parse()?))
    }
}

/// All labels `1..m, 1̄..n̄` in the defining order.
pub fn labels(m: usize, n: usize) -> Vec<Idx> {
    (1..=m)
        .map(Idx::Plain)
        .chain((1..=n).map(Idx::Bar))
        .collect()
}

pub fn cartan_basis(m: usize, n: usize) -> Vec<BasisIndex> {
    (1..=m)
        .map(|k| BasisIndex::Cartan(Idx::Plain(k)))
        .chain((1..n).map(|k| BasisIndex::Cartan(Idx::Bar(k))))
        .collect()
}

pub fn root_vectors(m: usize, n: usize) -> Vec<BasisIndex> {
    let ls = labels(m, n);
    let mut out = Vec::new();
    for &i in &ls {
        for &j in &ls {
            if i != j {
                out.push(BasisIndex::Root(i, j));
            }
        }
    }
    out
}

/// `e_{ij̄}` and `e_{j̄i}` for every `i`, `j̄`.
pub fn odd_generators(m: usize, n: usize) -> Vec<BasisIndex> {
    let mut out = Vec::new();
    for i in 1..=m {
        for j in 1..=n {
            out.push(BasisIndex::Root(Idx::Plain(i), Idx::Bar(j)));
            out.push(BasisIndex::Root(Idx::Bar(j), Idx::Plain(i)));
        }
    }
    out
}

pub fn full_basis(m: usize, n: usize) -> Vec<BasisIndex> {
    let mut b = cartan_basis(m, n);
    b.extend(root_vectors(m, n));
    b
}

/// The two diagonal positions whose matrix units add up to `h_ι`.
pub fn cartan_expr(iota: Idx, m: usize, n: usize) -> Result<(Idx, Idx)> {
    BasisIndex::Cartan(iota).validate(m, n)?;
    Ok(match iota {
        Idx::Plain(_) => (iota, Idx::Bar(n)),
        Idx::Bar(_) => (iota, Idx::Plain(m)),
    })
}

/// Diagonal of `h_ι` in the defining representation, indexed by label position.
fn cartan_diagonal(iota: Idx, m: usize, n: usize) -> Vec<i64> {
    let (a, b) = cartan_expr(iota, m, n).expect("valid Cartan index");
    let mut d = vec![0; m + n];
    d[a.position(m)] += 1;
    d[b.position(m)] += 1;
    d
}

/// Variable position of `h_ι` in the polynomial ring.
pub fn cartan_var(iota: Idx, m: usize) -> usize {
    match iota {
        Idx::Plain(k) => k - 1,
        Idx::Bar(k) => m + k - 1,
    }
}

/// The shift applied to the argument when `b` acts: entry ι is the
/// `ad(h_ι)`-eigenvalue of `b`, so that `τ(h_ι) = h_ι − eigenvalue`.
pub fn weight_shift(b: BasisIndex, m: usize, n: usize) -> Result<ShiftMap> {
    b.validate(m, n)?;
    let BasisIndex::Root(i, j) = b else {
        return Err(Error::InvalidIndex(format!(
            "{b} is a Cartan element and carries no shift"
        )));
    };
    let shifts = cartan_basis(m, n)
        .into_iter()
        .map(|h| {
            let BasisIndex::Cartan(iota) = h else { unreachable!() };
            let d = cartan_diagonal(iota, m, n);
            d[i.position(m)] - d[j.position(m)]
        })
        .collect();
    Ok(ShiftMap::new(shifts))
}

/// A finite linear combination of basis elements.
pub type Combination = BTreeMap<BasisIndex, Rat>;

fn push(comb: &mut Combination, b: BasisIndex, c: Rat) {
    if c.is_zero() {
        return;
    }
    let entry = comb.entry(b).or_insert_with(Rat::zero);
    *entry += c;
    if entry.is_zero() {
        comb.remove(&b);
    }
}

/// Rewrites a trace-zero diagonal `Σ d_X e_XX` in the `h_ι` basis.
fn diagonal_to_cartan(d: &[Rat], m: usize, n: usize) -> Combination {
    let mut out = Combination::new();
    let mut bar_sum = Rat::zero();
    for j in 1..n {
        let c = d[Idx::Bar(j).position(m)].clone();
        bar_sum += &c;
        push(&mut out, BasisIndex::Cartan(Idx::Bar(j)), c);
    }
    for k in 1..m {
        push(
            &mut out,
            BasisIndex::Cartan(Idx::Plain(k)),
            d[Idx::Plain(k).position(m)].clone(),
        );
    }
    push(
        &mut out,
        BasisIndex::Cartan(Idx::Plain(m)),
        &d[Idx::Plain(m).position(m)] - &bar_sum,
    );
    out
}

/// The supercommutator `[b1, b2]` in the fixed basis.
pub fn super_bracket(b1: BasisIndex, b2: BasisIndex, m: usize, n: usize) -> Result<Combination> {
    b1.validate(m, n)?;
    b2.validate(m, n)?;
    let mut out = Combination::new();
    match (b1, b2) {
        (BasisIndex::Cartan(_), BasisIndex::Cartan(_)) => {}
        (BasisIndex::Cartan(iota), BasisIndex::Root(..)) => {
            let s = weight_shift(b2, m, n)?;
            push(&mut out, b2, int(s.shifts()[cartan_var(iota, m)]));
        }
        (BasisIndex::Root(..), BasisIndex::Cartan(iota)) => {
            let s = weight_shift(b1, m, n)?;
            push(&mut out, b1, -int(s.shifts()[cartan_var(iota, m)]));
        }
        (BasisIndex::Root(i, j), BasisIndex::Root(k, l)) => {
            let sign = int(b1.parity().sign(b2.parity()));
            let mut diag = vec![Rat::zero(); m + n];
            let mut has_diag = false;
            // δ_JK e_IL
            if j == k {
                if i == l {
                    diag[i.position(m)] += Rat::one();
                    has_diag = true;
                } else {
                    push(&mut out, BasisIndex::Root(i, l), Rat::one());
                }
            }
            // −(−1)^{|x||y|} δ_LI e_KJ
            if l == i {
                if k == j {
                    diag[k.position(m)] -= &sign;
                    has_diag = true;
                } else {
                    push(&mut out, BasisIndex::Root(k, j), -sign.clone());
                }
            }
            if has_diag {
                for (b, c) in diagonal_to_cartan(&diag, m, n) {
                    push(&mut out, b, c);
                }
            }
        }
    }
    Ok(out)
}

/// The Cartan part of a combination as a polynomial `Σ c_ι h_ι`.
pub fn cartan_poly(comb: &Combination, m: usize, n: usize) -> Poly {
    let nvars = m + n - 1;
    let mut p = Poly::zero(nvars);
    for (b, c) in comb {
        if let BasisIndex::Cartan(iota) = b {
            p = &p + &Poly::var(nvars, cartan_var(*iota, m)).scale(c);
        }
    }
    p
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Vars;

    fn p(i: usize) -> Idx {
        Idx::Plain(i)
    }
    fn b(j: usize) -> Idx {
        Idx::Bar(j)
    }

    #[test]
    fn cartan_expressions() {
        assert_eq!(cartan_expr(p(2), 3, 2).unwrap(), (p(2), b(2)));
        assert_eq!(cartan_expr(b(1), 3, 2).unwrap(), (b(1), p(3)));
        assert!(cartan_expr(b(2), 3, 2).is_err());
    }

    #[test]
    fn shift_of_odd_root_for_n_one() {
        // σ_i Δ^{-1}: every variable but h_i moves to h + 1
        let s = weight_shift(BasisIndex::Root(p(2), b(1)), 3, 1).unwrap();
        assert_eq!(s.shifts(), &[-1, 0, -1]);
        let t = weight_shift(BasisIndex::Root(b(1), p(2)), 3, 1).unwrap();
        assert_eq!(t, s.inverse());
    }

    #[test]
    fn shift_of_m_nbar_root() {
        // Δ_m^{-1} Δ̄ for (m, n) = (2, 3)
        let s = weight_shift(BasisIndex::Root(p(2), b(3)), 2, 3).unwrap();
        let vars = Vars::new(2, 3);
        let h1 = vars.parse("h1").unwrap();
        let h2 = vars.parse("h2").unwrap();
        let hb1 = vars.parse("hb1").unwrap();
        assert_eq!(s.apply(&h1), vars.parse("h1 + 1").unwrap());
        assert_eq!(s.apply(&h2), h2);
        assert_eq!(s.apply(&hb1), vars.parse("hb1 - 1").unwrap());
    }

    #[test]
    fn cartan_inputs_have_no_shift() {
        assert!(weight_shift(BasisIndex::Cartan(p(1)), 2, 1).is_err());
    }

    #[test]
    fn bracket_examples() {
        let h = super_bracket(
            BasisIndex::Root(p(1), b(1)),
            BasisIndex::Root(b(1), p(1)),
            2,
            1,
        )
        .unwrap();
        assert_eq!(h, Combination::from([(BasisIndex::Cartan(p(1)), int(1))]));
        let z = super_bracket(
            BasisIndex::Root(p(2), b(1)),
            BasisIndex::Root(p(2), b(1)),
            2,
            1,
        )
        .unwrap();
        assert!(z.is_empty());
        let e = super_bracket(
            BasisIndex::Root(p(1), b(1)),
            BasisIndex::Root(b(1), p(2)),
            2,
            1,
        )
        .unwrap();
        assert_eq!(e, Combination::from([(BasisIndex::Root(p(1), p(2)), int(1))]));
    }

    #[test]
    fn basis_strings_round_trip() {
        for x in full_basis(2, 3) {
            let s = x.to_string();
            assert_eq!(s.parse::<BasisIndex>().unwrap(), x);
        }
        assert_eq!(
            "e[b 2, 1]".parse::<BasisIndex>().unwrap(),
            BasisIndex::Root(b(2), p(1))
        );
        assert!("e[1]".parse::<BasisIndex>().is_err());
        assert!("h[0]".parse::<BasisIndex>().is_err());
    }

    #[test]
    fn basis_counts() {
        assert_eq!(full_basis(2, 2).len(), 15);
        assert_eq!(odd_generators(3, 1).len(), 6);
        assert_eq!(BasisIndex::Root(p(1), b(2)).parity(), Parity::Odd);
        assert_eq!(BasisIndex::Root(b(1), b(2)).parity(), Parity::Even);
    }
}
