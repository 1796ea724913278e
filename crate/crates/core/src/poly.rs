//! Exact multivariate polynomials over the rationals.
//!
//! Variables are ordered `h1..hm, hb1..hb(n-1)`; a polynomial only records
//! how many variables it lives in, the naming is supplied by [`Vars`] when
//! printing or parsing.  Terms are kept in a graded-lexicographic map, so two
//! polynomials are equal exactly when their term maps are equal.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rat = BigRational;

pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Exponent vector, ordered graded-lexicographically with `h1 > h2 > ...`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, index: usize) -> Self {
        let mut e = vec![0; nvars];
        e[index] = 1;
        Monomial(e)
    }

    pub fn from_exponents(exps: Vec<u32>) -> Self {
        Monomial(exps)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `self / other` when `other` divides `self`.
    fn checked_div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = Vec::with_capacity(self.0.len());
        for (a, b) in self.0.iter().zip(&other.0) {
            if a < b {
                return None;
            }
            out.push(a - b);
        }
        Some(Monomial(out))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A polynomial in `nvars` variables with rational coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Monomial, Rat>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Rat::one())
    }

    pub fn constant(nvars: usize, c: Rat) -> Self {
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(nvars), c);
        }
        p
    }

    /// The variable `h_index` (0-based position in the variable order).
    pub fn var(nvars: usize, index: usize) -> Self {
        assert!(index < nvars, "variable {index} out of range for {nvars}");
        let mut p = Self::zero(nvars);
        p.terms.insert(Monomial::var(nvars, index), Rat::one());
        p
    }

    pub fn monomial(mono: Monomial, c: Rat) -> Self {
        let nvars = mono.0.len();
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(mono, c);
        }
        p
    }

    /// Builds a polynomial from `(exponents, coefficient)` pairs; like terms are combined.
    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Vec<u32>, Rat)>) -> Self {
        let mut p = Self::zero(nvars);
        for (e, c) in terms {
            assert_eq!(e.len(), nvars, "exponent vector length");
            p.add_term(Monomial(e), c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.as_constant().is_some_and(|c| c.is_one())
    }

    /// `Some(c)` when the polynomial is the constant `c` (including 0).
    pub fn as_constant(&self) -> Option<Rat> {
        match self.terms.len() {
            0 => Some(Rat::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn is_constant(&self) -> bool {
        self.as_constant().is_some()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rat)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, mono: &Monomial) -> Rat {
        self.terms.get(mono).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &Rat)> {
        self.terms.iter().next_back()
    }

    pub fn leading_coeff(&self) -> Rat {
        self.leading_term()
            .map(|(_, c)| c.clone())
            .unwrap_or_else(Rat::zero)
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|m| m.0[var]).max().unwrap_or(0)
    }

    pub fn uses_var(&self, var: usize) -> bool {
        self.terms.keys().any(|m| m.0[var] > 0)
    }

    fn add_term(&mut self, mono: Monomial, c: Rat) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(mono) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get() + &c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    fn check_vars(&self, other: &Poly) -> Result<()> {
        if self.nvars != other.nvars {
            return Err(Error::VarMismatch {
                left: self.nvars,
                right: other.nvars,
            });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Poly) -> Result<Poly> {
        self.check_vars(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Poly) -> Result<Poly> {
        self.checked_add(&-other)
    }

    pub fn checked_mul(&self, other: &Poly) -> Result<Poly> {
        self.check_vars(other)?;
        let mut out = Poly::zero(self.nvars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rat) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.nvars);
        }
        Poly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, x)| (m.clone(), x * c))
                .collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::one(self.nvars);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Scales so that the graded-lex leading coefficient is 1; zero stays zero.
    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&self.leading_coeff().recip())
    }

    pub fn eval(&self, point: &[Rat]) -> Rat {
        assert_eq!(point.len(), self.nvars, "evaluation point length");
        let mut acc = Rat::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(&m.0) {
                for _ in 0..e {
                    t *= x;
                }
            }
            acc += t;
        }
        acc
    }

    /// Substitutes the univariate polynomial `self(X)` at `X = g`.
    pub fn compose_univariate(&self, g: &Poly) -> Poly {
        assert_eq!(self.nvars, 1, "compose_univariate needs a univariate polynomial");
        let deg = self.degree_in(0);
        let mut acc = Poly::zero(g.nvars);
        for k in (0..=deg).rev() {
            let c = self.coeff(&Monomial(vec![k]));
            acc = &(&acc * g) + &Poly::constant(g.nvars, c);
        }
        acc
    }

    /// Writes `self` as `sum_k coeffs[k] * h_var^k` with coefficients free of `h_var`.
    pub fn to_univariate(&self, var: usize) -> Vec<Poly> {
        let deg = self.degree_in(var) as usize;
        let mut out = vec![Poly::zero(self.nvars); deg + 1];
        for (m, c) in &self.terms {
            let k = m.0[var] as usize;
            let mut e = m.0.clone();
            e[var] = 0;
            out[k].add_term(Monomial(e), c.clone());
        }
        while out.len() > 1 && out.last().is_some_and(Poly::is_zero) {
            out.pop();
        }
        out
    }

    pub fn from_univariate(coeffs: &[Poly], var: usize, nvars: usize) -> Poly {
        let mut out = Poly::zero(nvars);
        for (k, c) in coeffs.iter().enumerate() {
            for (m, x) in &c.terms {
                let mut e = m.0.clone();
                e[var] += k as u32;
                out.add_term(Monomial(e), x.clone());
            }
        }
        out
    }

    /// Exact quotient `self / d`, or `None` when `d` does not divide `self`.
    pub fn divides_into(&self, d: &Poly) -> Result<Option<Poly>> {
        divides_exactly(d, self)
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        self.checked_add(rhs).expect("polynomial addition")
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self.checked_sub(rhs).expect("polynomial subtraction")
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        self.checked_mul(rhs).expect("polynomial multiplication")
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

pub fn poly_add(p: &Poly, q: &Poly) -> Result<Poly> {
    p.checked_add(q)
}

pub fn poly_mul(p: &Poly, q: &Poly) -> Result<Poly> {
    p.checked_mul(q)
}

/// Exact division: `Some(q)` with `p = d * q`, or `None` when `d` does not divide `p`.
///
/// With a single divisor the graded-lex division algorithm leaves a zero
/// remainder exactly when the division is exact, so the first leading term
/// that `lt(d)` fails to divide settles the question.
pub fn divides_exactly(d: &Poly, p: &Poly) -> Result<Option<Poly>> {
    d.check_vars(p)?;
    let (dm, dc) = d.leading_term().ok_or(Error::DivisionByZero)?;
    let (dm, dc) = (dm.clone(), dc.clone());
    let mut rest = p.clone();
    let mut quot = Poly::zero(p.nvars);
    while let Some((rm, rc)) = rest.leading_term() {
        let Some(qm) = rm.checked_div(&dm) else {
            return Ok(None);
        };
        let qc = rc / &dc;
        let t = Poly::monomial(qm, qc);
        rest = &rest - &(&t * d);
        quot = &quot + &t;
    }
    Ok(Some(quot))
}

/// Greatest common divisor, normalized to graded-lex leading coefficient 1.
///
/// Recursive primitive-part Euclid: the inputs are viewed as univariate in
/// their last active variable over the ring of the remaining ones.
pub fn poly_gcd(p: &Poly, q: &Poly) -> Result<Poly> {
    p.check_vars(q)?;
    Ok(gcd_inner(p, q))
}

fn gcd_inner(p: &Poly, q: &Poly) -> Poly {
    if p.is_zero() {
        return q.monic();
    }
    if q.is_zero() {
        return p.monic();
    }
    let nvars = p.nvars;
    let Some(var) = (0..nvars).rev().find(|&v| p.uses_var(v) || q.uses_var(v)) else {
        return Poly::one(nvars);
    };
    let mut a = p.to_univariate(var);
    let mut b = q.to_univariate(var);
    let ca = content(&a);
    let cb = content(&b);
    let cont = gcd_inner(&ca, &cb);
    a = divide_coeffs(&a, &ca);
    b = divide_coeffs(&b, &cb);
    if a.len() < b.len() {
        std::mem::swap(&mut a, &mut b);
    }
    while !(b.len() == 1 && b[0].is_zero()) {
        let r = pseudo_rem(&a, &b);
        a = b;
        b = if r.len() == 1 && r[0].is_zero() {
            r
        } else {
            let c = content(&r);
            divide_coeffs(&r, &c)
        };
    }
    let pp = divide_coeffs(&a, &content(&a));
    (&cont * &Poly::from_univariate(&pp, var, nvars)).monic()
}

fn content(coeffs: &[Poly]) -> Poly {
    coeffs
        .iter()
        .fold(Poly::zero(coeffs[0].nvars), |g, c| gcd_inner(&g, c))
}

fn divide_coeffs(coeffs: &[Poly], d: &Poly) -> Vec<Poly> {
    coeffs
        .iter()
        .map(|c| {
            divides_exactly(d, c)
                .expect("matching variables")
                .expect("content divides every coefficient")
        })
        .collect()
}

fn pseudo_rem(a: &[Poly], b: &[Poly]) -> Vec<Poly> {
    let db = b.len() - 1;
    let lb = &b[db];
    let mut r: Vec<Poly> = a.to_vec();
    let mut e = (a.len() as i64) - (b.len() as i64) + 1;
    while r.len() > db && !(r.len() == 1 && r[0].is_zero()) {
        let dr = r.len() - 1;
        let lr = r[dr].clone();
        let shift = dr - db;
        let mut next: Vec<Poly> = r.iter().map(|c| c * lb).collect();
        for (k, bc) in b.iter().enumerate() {
            next[k + shift] = &next[k + shift] - &(&lr * bc);
        }
        while next.len() > 1 && next.last().is_some_and(Poly::is_zero) {
            next.pop();
        }
        r = next;
        e -= 1;
        if r.len() == 1 && r[0].is_zero() {
            break;
        }
    }
    let factor = lb.pow(e.max(0) as u32);
    r.iter().map(|c| c * &factor).collect()
}

/// An integer shift vector: entry `s_i` substitutes `h_i -> h_i - s_i`.
///
/// `sigma_i` is the unit vector at `i`; composition adds vectors.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ShiftMap(Vec<i64>);

impl ShiftMap {
    pub fn new(shifts: Vec<i64>) -> Self {
        ShiftMap(shifts)
    }

    pub fn identity(nvars: usize) -> Self {
        ShiftMap(vec![0; nvars])
    }

    /// `sigma_index^power`.
    pub fn sigma(nvars: usize, index: usize, power: i64) -> Self {
        let mut s = vec![0; nvars];
        s[index] = power;
        ShiftMap(s)
    }

    pub fn shifts(&self) -> &[i64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().all(|&s| s == 0)
    }

    pub fn compose(&self, other: &ShiftMap) -> ShiftMap {
        assert_eq!(self.0.len(), other.0.len(), "shift lengths");
        ShiftMap(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn inverse(&self) -> ShiftMap {
        ShiftMap(self.0.iter().map(|s| -s).collect())
    }

    pub fn apply(&self, p: &Poly) -> Poly {
        apply_shift(self, p).expect("shift length")
    }
}

/// Applies the ring automorphism `h_i -> h_i - s_i`.
pub fn apply_shift(s: &ShiftMap, p: &Poly) -> Result<Poly> {
    if s.0.len() != p.nvars {
        return Err(Error::ShiftLength {
            shift: s.0.len(),
            nvars: p.nvars,
        });
    }
    if s.is_identity() {
        return Ok(p.clone());
    }
    let nvars = p.nvars;
    let mut out = Poly::zero(nvars);
    for (m, c) in &p.terms {
        // expand prod_i (h_i - s_i)^{e_i} term by term
        let mut acc: Vec<(Vec<u32>, Rat)> = vec![(vec![0; nvars], c.clone())];
        for (i, &e) in m.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            let shift = -int(s.0[i]);
            if shift.is_zero() {
                for (exps, _) in acc.iter_mut() {
                    exps[i] = e;
                }
                continue;
            }
            let mut next = Vec::with_capacity(acc.len() * (e as usize + 1));
            let mut binom = BigInt::one();
            for k in 0..=e {
                // C(e, k) h_i^k shift^(e-k)
                let mut coeff = Rat::from_integer(binom.clone());
                for _ in 0..(e - k) {
                    coeff *= &shift;
                }
                for (exps, x) in &acc {
                    let mut ex = exps.clone();
                    ex[i] = k;
                    next.push((ex, x * &coeff));
                }
                binom = binom * BigInt::from(e - k) / BigInt::from(k + 1);
            }
            acc = next;
        }
        for (e, x) in acc {
            out.add_term(Monomial(e), x);
        }
    }
    Ok(out)
}

/// Variable naming for `sl(m|n)`: `h1..hm` followed by `hb1..hb(n-1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Vars {
    pub m: usize,
    pub n: usize,
}

impl Vars {
    pub fn new(m: usize, n: usize) -> Self {
        assert!(m >= 1 && n >= 1, "sl(m|n) needs m, n >= 1");
        Vars { m, n }
    }

    pub fn nvars(&self) -> usize {
        self.m + self.n - 1
    }

    pub fn name(&self, index: usize) -> String {
        if index < self.m {
            format!("h{}", index + 1)
        } else {
            format!("hb{}", index - self.m + 1)
        }
    }

    fn lookup(&self, barred: bool, k: usize) -> Option<usize> {
        if barred {
            (k >= 1 && k < self.n).then(|| self.m + k - 1)
        } else {
            (k >= 1 && k <= self.m).then(|| k - 1)
        }
    }

    /// Canonical text: graded-lex descending, `3/2*h1^2*h2 - h1 + 1`.
    pub fn format(&self, p: &Poly) -> String {
        assert_eq!(p.nvars, self.nvars(), "polynomial lives in a different ring");
        if p.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (idx, (m, c)) in p.terms.iter().rev().enumerate() {
            let negative = c.is_negative();
            if idx == 0 {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            let abs = c.abs();
            let mut factors: Vec<String> = Vec::new();
            if !abs.is_one() || m.is_one() {
                factors.push(abs.to_string());
            }
            for (i, &e) in m.0.iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(self.name(i)),
                    _ => factors.push(format!("{}^{}", self.name(i), e)),
                }
            }
            out.push_str(&factors.join("*"));
        }
        out
    }

    /// Parses the polynomial text grammar. Whitespace is insignificant and a
    /// leading sign is accepted on the first term.
    pub fn parse(&self, text: &str) -> Result<Poly> {
        Parser {
            vars: *self,
            chars: text.chars().collect(),
            pos: 0,
        }
        .poly()
    }
}

struct Parser {
    vars: Vars,
    chars: Vec<char>,
    pos: usize,
}

impl Parser {
    fn err<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            column: self.pos + 1,
            message: message.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn digits(&mut self) -> Result<String> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected digits");
        }
        Ok(self.chars[start..self.pos].iter().collect())
    }

    fn poly(&mut self) -> Result<Poly> {
        let nvars = self.vars.nvars();
        let mut acc = Poly::zero(nvars);
        let mut sign = Rat::one();
        match self.peek() {
            Some('-') => {
                sign = -sign;
                self.pos += 1;
            }
            Some('+') => self.pos += 1,
            _ => {}
        }
        loop {
            let t = self.term()?;
            acc = &acc + &t.scale(&sign);
            match self.peek() {
                None => return Ok(acc),
                Some('+') => {
                    sign = Rat::one();
                    self.pos += 1;
                }
                Some('-') => {
                    sign = -Rat::one();
                    self.pos += 1;
                }
                Some(c) => return self.err(format!("unexpected character '{c}'")),
            }
        }
    }

    fn term(&mut self) -> Result<Poly> {
        let nvars = self.vars.nvars();
        let mut coeff = Rat::one();
        let mut exps = vec![0u32; nvars];
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let num: BigInt = self.digits()?.parse().expect("digits");
                let mut value = Rat::from_integer(num);
                if self.peek() == Some('/') {
                    self.pos += 1;
                    let den: BigInt = self.digits()?.parse().expect("digits");
                    if den.is_zero() {
                        return self.err("zero denominator");
                    }
                    value /= Rat::from_integer(den);
                }
                coeff = value;
            }
            Some('h') => self.factor(&mut exps)?,
            Some(c) => return self.err(format!("expected a term, found '{c}'")),
            None => return self.err("expected a term, found end of input"),
        }
        while self.peek() == Some('*') {
            self.pos += 1;
            self.factor(&mut exps)?;
        }
        Ok(Poly::monomial(Monomial(exps), coeff))
    }

    fn factor(&mut self, exps: &mut [u32]) -> Result<()> {
        if self.peek() != Some('h') {
            return self.err("expected a variable");
        }
        let start = self.pos;
        self.pos += 1;
        let barred = self.chars.get(self.pos) == Some(&'b');
        if barred {
            self.pos += 1;
        }
        if !self.chars.get(self.pos).is_some_and(char::is_ascii_digit) {
            return self.err("expected a variable index");
        }
        let k: usize = match self.digits()?.parse() {
            Ok(k) => k,
            Err(_) => return self.err("variable index too large"),
        };
        let Some(index) = self.vars.lookup(barred, k) else {
            self.pos = start;
            let name = if barred { format!("hb{k}") } else { format!("h{k}") };
            return self.err(format!(
                "unknown variable {name} for sl({}|{})",
                self.vars.m, self.vars.n
            ));
        };
        let mut power = 1u32;
        if self.peek() == Some('^') {
            self.pos += 1;
            power = match self.digits()?.parse() {
                Ok(p) if p > 0 => p,
                _ => return self.err("exponent must be a positive integer"),
            };
        }
        exps[index] += power;
        Ok(())
    }
}

impl fmt::Display for Poly {
    /// Generic display with `x1, x2, ...`; use [`Vars::format`] for the file grammar.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(m, c)| {
                let vars: Vec<String> = m
                    .0
                    .iter()
                    .enumerate()
                    .filter(|(_, &e)| e > 0)
                    .map(|(i, &e)| {
                        if e == 1 {
                            format!("x{}", i + 1)
                        } else {
                            format!("x{}^{}", i + 1, e)
                        }
                    })
                    .collect();
                if vars.is_empty() {
                    format!("({c})")
                } else {
                    format!("({c})*{}", vars.join("*"))
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v21() -> Vars {
        Vars::new(2, 1)
    }

    fn p(s: &str) -> Poly {
        v21().parse(s).unwrap()
    }

    #[test]
    fn add_examples() {
        assert!(poly_add(&p("h1"), &p("-h1")).unwrap().is_zero());
        assert_eq!(poly_add(&p("h1 + 1"), &p("h2")).unwrap(), p("h1 + h2 + 1"));
        assert_eq!(poly_add(&p("1/2*h1^2"), &p("1/2*h1^2")).unwrap(), p("h1^2"));
    }

    #[test]
    fn mul_examples() {
        assert_eq!(poly_mul(&p("h1 - 1"), &p("h1 + 1")).unwrap(), p("h1^2 - 1"));
        assert!(poly_mul(&p("h1*h2 + 3"), &Poly::zero(2)).unwrap().is_zero());
        assert_eq!(
            poly_mul(&p("h1 + h2"), &p("h1 + h2")).unwrap(),
            p("h1^2 + 2*h1*h2 + h2^2")
        );
    }

    #[test]
    fn mismatched_variable_counts_are_errors() {
        let a = Poly::one(2);
        let b = Poly::one(3);
        assert_eq!(
            poly_add(&a, &b),
            Err(Error::VarMismatch { left: 2, right: 3 })
        );
        assert!(poly_mul(&a, &b).is_err());
        assert!(poly_gcd(&a, &b).is_err());
        assert!(apply_shift(&ShiftMap::identity(3), &a).is_err());
    }

    #[test]
    fn shift_examples() {
        let sigma1 = ShiftMap::sigma(2, 0, 1);
        assert_eq!(sigma1.apply(&p("h1")), p("h1 - 1"));
        assert_eq!(sigma1.apply(&p("h2")), p("h2"));
        let delta = ShiftMap::new(vec![1, 1]);
        assert_eq!(delta.apply(&p("h1*h2")), p("h1*h2 - h1 - h2 + 1"));
        let inv = ShiftMap::new(vec![-2, 0]);
        assert_eq!(inv.apply(&p("h1^3")), p("h1^3 + 6*h1^2 + 12*h1 + 8"));
    }

    #[test]
    fn gcd_examples() {
        assert_eq!(poly_gcd(&p("h1^2 - 1"), &p("h1 - 1")).unwrap(), p("h1 - 1"));
        assert_eq!(poly_gcd(&p("h1"), &p("h2")).unwrap(), p("1"));
        assert_eq!(
            poly_gcd(&p("h1*h2 + h2"), &p("h1^2 - 1")).unwrap(),
            p("h1 + 1")
        );
        assert_eq!(poly_gcd(&p("3*h1 + 6"), &Poly::zero(2)).unwrap(), p("h1 + 2"));
        assert!(poly_gcd(&Poly::zero(2), &Poly::zero(2)).unwrap().is_zero());
        assert_eq!(
            poly_gcd(&p("h1^2*h2 - h2"), &p("2*h1*h2^2 + 2*h2^2")).unwrap(),
            p("h1*h2 + h2")
        );
    }

    #[test]
    fn exact_division_examples() {
        assert_eq!(divides_exactly(&p("h1 - 1"), &p("h1^2 - 1")).unwrap(), Some(p("h1 + 1")));
        assert_eq!(divides_exactly(&p("h1"), &p("h2")).unwrap(), None);
        assert_eq!(
            divides_exactly(&p("h1 + h2"), &p("h1^2 + 2*h1*h2 + h2^2")).unwrap(),
            Some(p("h1 + h2"))
        );
        assert_eq!(
            divides_exactly(&Poly::zero(2), &p("h1")),
            Err(Error::DivisionByZero)
        );
    }

    #[test]
    fn printing_is_canonical() {
        let vars = Vars::new(2, 2);
        let q = vars.parse("  -1 + hb1 - 3/2 * h2*h1^2 ").unwrap();
        assert_eq!(vars.format(&q), "-3/2*h1^2*h2 + hb1 - 1");
        assert_eq!(vars.parse(&vars.format(&q)).unwrap(), q);
        assert_eq!(vars.format(&Poly::zero(3)), "0");
        assert_eq!(vars.format(&vars.parse("h1 + hb1 - h2").unwrap()), "h1 - h2 + hb1");
    }

    #[test]
    fn parse_errors_carry_columns() {
        let vars = Vars::new(2, 1);
        match vars.parse("h1 + hb1") {
            Err(Error::Parse { column, .. }) => assert_eq!(column, 6),
            other => panic!("expected parse error, got {other:?}"),
        }
        assert!(matches!(vars.parse("h1 +"), Err(Error::Parse { .. })));
        assert!(matches!(vars.parse("h1^0"), Err(Error::Parse { .. })));
        assert!(matches!(vars.parse("2/0"), Err(Error::Parse { .. })));
        assert!(matches!(vars.parse("h1 h2"), Err(Error::Parse { .. })));
    }

    #[test]
    fn compose_univariate_substitutes() {
        let f = Poly::from_terms(1, vec![(vec![2], int(1)), (vec![0], int(-1))]);
        let g = p("h1 + h2 + 1");
        assert_eq!(f.compose_univariate(&g), &(&g * &g) - &Poly::one(2));
    }
}
