//! Rank-2 presentations: the matrices `E_x` through which each odd root
//! vector acts on `C[h] ⊕ C[h]`, the derived even actions, and exact
//! verification of every supercommutation relation.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::poly::{int, Monomial, Poly, Rat, ShiftMap, Vars};
use crate::superlie::{
    cartan_poly, cartan_var, full_basis, odd_generators, super_bracket, weight_shift, BasisIndex,
    Combination, Idx, Parity,
};

/// A 2×2 matrix of polynomials sharing one variable count.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Mat2 {
    e: [[Poly; 2]; 2],
}

impl Mat2 {
    pub fn new(a: Poly, b: Poly, c: Poly, d: Poly) -> Self {
        let nv = a.nvars();
        assert!(
            b.nvars() == nv && c.nvars() == nv && d.nvars() == nv,
            "matrix entries live in different rings"
        );
        Mat2 {
            e: [[a, b], [c, d]],
        }
    }

    pub fn zero(nvars: usize) -> Self {
        let z = Poly::zero(nvars);
        Mat2::new(z.clone(), z.clone(), z.clone(), z)
    }

    pub fn identity(nvars: usize) -> Self {
        Mat2::scalar(Poly::one(nvars))
    }

    pub fn scalar(p: Poly) -> Self {
        let z = Poly::zero(p.nvars());
        Mat2::new(p.clone(), z.clone(), z, p)
    }

    pub fn diag(a: Poly, d: Poly) -> Self {
        let z = Poly::zero(a.nvars());
        Mat2::new(a, z.clone(), z, d)
    }

    pub fn upper(u: Poly) -> Self {
        let z = Poly::zero(u.nvars());
        Mat2::new(z.clone(), u, z.clone(), z)
    }

    pub fn lower(v: Poly) -> Self {
        let z = Poly::zero(v.nvars());
        Mat2::new(z.clone(), z.clone(), v, z)
    }

    /// A constant matrix with rational entries.
    pub fn constant(nvars: usize, rows: [[Rat; 2]; 2]) -> Self {
        let [[a, b], [c, d]] = rows;
        Mat2::new(
            Poly::constant(nvars, a),
            Poly::constant(nvars, b),
            Poly::constant(nvars, c),
            Poly::constant(nvars, d),
        )
    }

    /// The odd equivalence `[0, −1; 1, 0]`.
    pub fn j(nvars: usize) -> Self {
        Mat2::constant(nvars, [[int(0), int(-1)], [int(1), int(0)]])
    }

    pub fn nvars(&self) -> usize {
        self.e[0][0].nvars()
    }

    pub fn get(&self, r: usize, c: usize) -> &Poly {
        &self.e[r][c]
    }

    pub fn entries(&self) -> &[[Poly; 2]; 2] {
        &self.e
    }

    pub fn map(&self, f: impl Fn(&Poly) -> Poly) -> Mat2 {
        Mat2 {
            e: [
                [f(&self.e[0][0]), f(&self.e[0][1])],
                [f(&self.e[1][0]), f(&self.e[1][1])],
            ],
        }
    }

    pub fn shift(&self, s: &ShiftMap) -> Mat2 {
        self.map(|p| s.apply(p))
    }

    pub fn scale(&self, c: &Rat) -> Mat2 {
        self.map(|p| p.scale(c))
    }

    pub fn scale_poly(&self, q: &Poly) -> Mat2 {
        self.map(|p| p * q)
    }

    pub fn is_zero(&self) -> bool {
        self.e.iter().flatten().all(Poly::is_zero)
    }

    pub fn is_diagonal(&self) -> bool {
        self.e[0][1].is_zero() && self.e[1][0].is_zero()
    }

    pub fn is_antidiagonal(&self) -> bool {
        self.e[0][0].is_zero() && self.e[1][1].is_zero()
    }

    /// Only the upper-right entry may be nonzero.
    pub fn is_strict_upper(&self) -> bool {
        self.is_antidiagonal() && self.e[1][0].is_zero()
    }

    /// Only the lower-left entry may be nonzero.
    pub fn is_strict_lower(&self) -> bool {
        self.is_antidiagonal() && self.e[0][1].is_zero()
    }

    pub fn is_constant(&self) -> bool {
        self.e.iter().flatten().all(Poly::is_constant)
    }

    pub fn det(&self) -> Poly {
        &(&self.e[0][0] * &self.e[1][1]) - &(&self.e[0][1] * &self.e[1][0])
    }

    /// Inverse over the polynomial ring; requires a nonzero constant determinant.
    pub fn inverse(&self) -> Result<Mat2> {
        let det = self.det();
        match det.as_constant() {
            Some(c) if !c.is_zero() => {
                let inv = c.recip();
                Ok(Mat2::new(
                    self.e[1][1].scale(&inv),
                    (-&self.e[0][1]).scale(&inv),
                    (-&self.e[1][0]).scale(&inv),
                    self.e[0][0].scale(&inv),
                ))
            }
            _ => Err(Error::Precondition(
                "matrix is not invertible over the polynomial ring".into(),
            )),
        }
    }

    pub fn apply(&self, v: &VecF) -> VecF {
        VecF::new(
            &(&self.e[0][0] * &v.f[0]) + &(&self.e[0][1] * &v.f[1]),
            &(&self.e[1][0] * &v.f[0]) + &(&self.e[1][1] * &v.f[1]),
        )
    }

    /// Twisted conjugation `W^{-1} E τ(W)`; a right action in `W`.
    pub fn conj(&self, w: &Mat2, tau: &ShiftMap) -> Result<Mat2> {
        Ok(&(&w.inverse()? * self) * &w.shift(tau))
    }

    pub fn format(&self, vars: &Vars) -> [[String; 2]; 2] {
        [
            [vars.format(&self.e[0][0]), vars.format(&self.e[0][1])],
            [vars.format(&self.e[1][0]), vars.format(&self.e[1][1])],
        ]
    }

    pub fn parse(vars: &Vars, rows: &[[String; 2]; 2]) -> Result<Mat2> {
        Ok(Mat2::new(
            vars.parse(&rows[0][0])?,
            vars.parse(&rows[0][1])?,
            vars.parse(&rows[1][0])?,
            vars.parse(&rows[1][1])?,
        ))
    }

    pub fn display(&self, vars: &Vars) -> String {
        let f = self.format(vars);
        format!("[{}, {}; {}, {}]", f[0][0], f[0][1], f[1][0], f[1][1])
    }
}

impl Mul for &Mat2 {
    type Output = Mat2;
    fn mul(self, rhs: &Mat2) -> Mat2 {
        let a = &self.e;
        let b = &rhs.e;
        let cell = |r: usize, c: usize| &(&a[r][0] * &b[0][c]) + &(&a[r][1] * &b[1][c]);
        Mat2 {
            e: [[cell(0, 0), cell(0, 1)], [cell(1, 0), cell(1, 1)]],
        }
    }
}

impl Add for &Mat2 {
    type Output = Mat2;
    fn add(self, rhs: &Mat2) -> Mat2 {
        Mat2 {
            e: [
                [&self.e[0][0] + &rhs.e[0][0], &self.e[0][1] + &rhs.e[0][1]],
                [&self.e[1][0] + &rhs.e[1][0], &self.e[1][1] + &rhs.e[1][1]],
            ],
        }
    }
}

impl Sub for &Mat2 {
    type Output = Mat2;
    fn sub(self, rhs: &Mat2) -> Mat2 {
        self + &(-rhs)
    }
}

impl Neg for &Mat2 {
    type Output = Mat2;
    fn neg(self) -> Mat2 {
        self.map(|p| -p)
    }
}

/// An element `(f_1, f_2)` of the free module.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VecF {
    pub f: [Poly; 2],
}

impl VecF {
    pub fn new(f1: Poly, f2: Poly) -> Self {
        assert_eq!(f1.nvars(), f2.nvars(), "vector components in different rings");
        VecF { f: [f1, f2] }
    }

    pub fn zero(nvars: usize) -> Self {
        VecF::new(Poly::zero(nvars), Poly::zero(nvars))
    }

    /// `mono` placed in component `slot` (0 or 1).
    pub fn unit(slot: usize, mono: Poly) -> Self {
        let z = Poly::zero(mono.nvars());
        if slot == 0 {
            VecF::new(mono, z)
        } else {
            VecF::new(z, mono)
        }
    }

    pub fn nvars(&self) -> usize {
        self.f[0].nvars()
    }

    pub fn is_zero(&self) -> bool {
        self.f[0].is_zero() && self.f[1].is_zero()
    }

    pub fn shift(&self, s: &ShiftMap) -> VecF {
        VecF::new(s.apply(&self.f[0]), s.apply(&self.f[1]))
    }

    pub fn scale_poly(&self, g: &Poly) -> VecF {
        VecF::new(&self.f[0] * g, &self.f[1] * g)
    }

    pub fn scale(&self, c: &Rat) -> VecF {
        VecF::new(self.f[0].scale(c), self.f[1].scale(c))
    }
}

impl Add for &VecF {
    type Output = VecF;
    fn add(self, rhs: &VecF) -> VecF {
        VecF::new(&self.f[0] + &rhs.f[0], &self.f[1] + &rhs.f[1])
    }
}

impl Sub for &VecF {
    type Output = VecF;
    fn sub(self, rhs: &VecF) -> VecF {
        VecF::new(&self.f[0] - &rhs.f[0], &self.f[1] - &rhs.f[1])
    }
}

/// An operator `v ↦ A · s(v)`. Operators compose by
/// `(A, s) ∘ (B, t) = (A · s(B), s + t)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwistedOp {
    pub mat: Mat2,
    pub shift: ShiftMap,
}

impl TwistedOp {
    pub fn new(mat: Mat2, shift: ShiftMap) -> Self {
        TwistedOp { mat, shift }
    }

    pub fn compose(&self, other: &TwistedOp) -> TwistedOp {
        TwistedOp {
            mat: &self.mat * &other.mat.shift(&self.shift),
            shift: self.shift.compose(&other.shift),
        }
    }

    pub fn apply(&self, v: &VecF) -> VecF {
        self.mat.apply(&v.shift(&self.shift))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Grading {
    Ungraded,
    /// Graded with `E_{ij̄}` in the upper-right corner.
    G11,
    /// Graded with `E_{ij̄}` in the lower-left corner.
    G11Bar,
}

impl Grading {
    pub fn is_graded(self) -> bool {
        self != Grading::Ungraded
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Grading::Ungraded => "ungraded",
            Grading::G11 => "g11",
            Grading::G11Bar => "g11bar",
        }
    }

    pub fn parse(s: &str) -> Result<Grading> {
        match s {
            "ungraded" => Ok(Grading::Ungraded),
            "g11" => Ok(Grading::G11),
            "g11bar" => Ok(Grading::G11Bar),
            _ => Err(Error::Format(format!("unknown grading '{s}'"))),
        }
    }
}

impl fmt::Display for Grading {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A rank-2 module presentation over `sl(m|n)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presentation {
    pub m: usize,
    pub n: usize,
    pub grading: Grading,
    odd: BTreeMap<BasisIndex, Mat2>,
}

impl Presentation {
    /// An empty presentation; fill it with [`Presentation::set`].
    pub fn new(m: usize, n: usize, grading: Grading) -> Result<Self> {
        if m == 0 || n == 0 {
            return Err(Error::InvalidIndex(format!("sl({m}|{n}) needs m, n >= 1")));
        }
        Ok(Presentation {
            m,
            n,
            grading,
            odd: BTreeMap::new(),
        })
    }

    pub fn nvars(&self) -> usize {
        self.m + self.n - 1
    }

    pub fn vars(&self) -> Vars {
        Vars::new(self.m, self.n)
    }

    pub fn set(&mut self, x: BasisIndex, mat: Mat2) -> Result<()> {
        x.validate(self.m, self.n)?;
        if x.parity() != Parity::Odd {
            return Err(Error::InvalidIndex(format!(
                "{x} is even; only odd generators are stored"
            )));
        }
        if mat.nvars() != self.nvars() {
            return Err(Error::VarMismatch {
                left: mat.nvars(),
                right: self.nvars(),
            });
        }
        self.odd.insert(x, mat);
        Ok(())
    }

    pub fn with(mut self, x: BasisIndex, mat: Mat2) -> Result<Self> {
        self.set(x, mat)?;
        Ok(self)
    }

    pub fn get(&self, x: BasisIndex) -> Result<&Mat2> {
        self.odd
            .get(&x)
            .ok_or_else(|| Error::MissingGenerator(x.to_string()))
    }

    pub fn generators(&self) -> impl Iterator<Item = (&BasisIndex, &Mat2)> {
        self.odd.iter()
    }

    pub fn missing(&self) -> Vec<BasisIndex> {
        odd_generators(self.m, self.n)
            .into_iter()
            .filter(|x| !self.odd.contains_key(x))
            .collect()
    }

    pub fn shift_of(&self, x: BasisIndex) -> Result<ShiftMap> {
        weight_shift(x, self.m, self.n)
    }

    /// The matrix of any root vector, deriving even ones.
    pub fn matrix(&self, x: BasisIndex) -> Result<Mat2> {
        x.validate(self.m, self.n)?;
        match x {
            BasisIndex::Cartan(_) => Err(Error::InvalidIndex(format!(
                "{x} acts by multiplication, not through a matrix"
            ))),
            BasisIndex::Root(i, j) if x.parity() == Parity::Even => derive_even(self, i, j),
            _ => self.get(x).cloned(),
        }
    }

    /// The action of `x` as a twisted operator.
    pub fn op(&self, x: BasisIndex) -> Result<TwistedOp> {
        x.validate(self.m, self.n)?;
        match x {
            BasisIndex::Cartan(iota) => Ok(TwistedOp::new(
                Mat2::scalar(Poly::var(self.nvars(), cartan_var(iota, self.m))),
                ShiftMap::identity(self.nvars()),
            )),
            BasisIndex::Root(..) => Ok(TwistedOp::new(self.matrix(x)?, self.shift_of(x)?)),
        }
    }

    /// Applies `W^{-1} E_x τ_x(W)` to every stored generator.
    pub fn conjugate(&self, w: &Mat2) -> Result<Presentation> {
        let winv = w.inverse()?;
        let mut out = Presentation::new(self.m, self.n, self.grading)?;
        for (&x, e) in &self.odd {
            let tau = self.shift_of(x)?;
            out.odd.insert(x, &(&winv * e) * &w.shift(&tau));
        }
        Ok(out)
    }

    pub fn with_grading(mut self, grading: Grading) -> Self {
        self.grading = grading;
        self
    }
}

/// `x · v`: Cartan elements multiply, root vectors act by `E_x · τ_x(v)`.
pub fn act(p: &Presentation, b: BasisIndex, v: &VecF) -> Result<VecF> {
    if v.nvars() != p.nvars() {
        return Err(Error::VarMismatch {
            left: v.nvars(),
            right: p.nvars(),
        });
    }
    Ok(p.op(b)?.apply(v))
}

/// Acts by a linear combination of basis elements.
pub fn act_combination(p: &Presentation, comb: &Combination, v: &VecF) -> Result<VecF> {
    let mut acc = VecF::zero(p.nvars());
    for (&b, c) in comb {
        acc = &acc + &act(p, b, v)?.scale(c);
    }
    Ok(acc)
}

fn default_intermediate(i: Idx) -> Idx {
    if i.is_bar() {
        Idx::Plain(1)
    } else {
        Idx::Bar(1)
    }
}

/// `E_IJ` for an even root vector, through the default odd intermediate
/// (`1̄` for unbarred pairs, `1` for barred pairs).
pub fn derive_even(p: &Presentation, i: Idx, j: Idx) -> Result<Mat2> {
    derive_even_via(p, i, j, default_intermediate(i))
}

/// `E_IK τ_IK(E_KJ) + E_KJ τ_KJ(E_IK)` for an odd intermediate `K`.
pub fn derive_even_via(p: &Presentation, i: Idx, j: Idx, k: Idx) -> Result<Mat2> {
    if i == j {
        return Err(Error::InvalidIndex(format!(
            "derive_even needs distinct indices, got {i} twice"
        )));
    }
    if i.is_bar() != j.is_bar() {
        return Err(Error::InvalidIndex(format!("e[{i},{j}] is odd")));
    }
    if k.is_bar() == i.is_bar() {
        return Err(Error::InvalidIndex(format!(
            "intermediate {k} must have the opposite parity to {i}"
        )));
    }
    BasisIndex::Root(i, j).validate(p.m, p.n)?;
    let ik = BasisIndex::Root(i, k);
    let kj = BasisIndex::Root(k, j);
    ik.validate(p.m, p.n)?;
    kj.validate(p.m, p.n)?;
    let e_ik = p.get(ik)?;
    let e_kj = p.get(kj)?;
    let t_ik = p.shift_of(ik)?;
    let t_kj = p.shift_of(kj)?;
    Ok(&(e_ik * &e_kj.shift(&t_ik)) + &(e_kj * &e_ik.shift(&t_kj)))
}

fn combination_op(p: &Presentation, comb: &Combination, shift: &ShiftMap) -> Result<Mat2> {
    let mut mat = Mat2::scalar(cartan_poly(comb, p.m, p.n));
    for (&b, c) in comb {
        if let BasisIndex::Root(..) = b {
            let s = p.shift_of(b)?;
            if &s != shift {
                return Err(Error::InvariantBreach {
                    what: "bracket weight".into(),
                    detail: format!("{b} has a different weight from the bracket"),
                });
            }
            mat = &mat + &p.matrix(b)?.scale(c);
        }
    }
    Ok(mat)
}

/// One failed identity `[x, y] = z` with both sides as twisted operators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationFailure {
    pub x: BasisIndex,
    pub y: BasisIndex,
    pub lhs: Mat2,
    pub rhs: Mat2,
}

impl RelationFailure {
    pub fn describe(&self, vars: &Vars) -> String {
        format!(
            "[{}, {}]: lhs {} != rhs {}",
            self.x,
            self.y,
            self.lhs.display(vars),
            self.rhs.display(vars)
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RelationVerdict {
    pub missing: Vec<BasisIndex>,
    pub failures: Vec<RelationFailure>,
    pub checked: usize,
}

impl RelationVerdict {
    pub fn passed(&self) -> bool {
        self.missing.is_empty() && self.failures.is_empty()
    }
}

/// Checks `X ∘ Y − (−1)^{|x||y|} Y ∘ X = [x, y]` as exact twisted matrix
/// identities for every pair of basis elements.
pub fn verify_relations(p: &Presentation) -> RelationVerdict {
    let mut verdict = RelationVerdict {
        missing: p.missing(),
        ..Default::default()
    };
    if !verdict.missing.is_empty() {
        return verdict;
    }
    let basis = full_basis(p.m, p.n);
    let ops: Vec<TwistedOp> = match basis.iter().map(|&b| p.op(b)).collect() {
        Ok(ops) => ops,
        Err(_) => return verdict,
    };
    for a in 0..basis.len() {
        for b in a..basis.len() {
            let (x, y) = (basis[a], basis[b]);
            let sign = int(x.parity().sign(y.parity()));
            let xy = ops[a].compose(&ops[b]);
            let yx = ops[b].compose(&ops[a]);
            let lhs = &xy.mat - &yx.mat.scale(&sign);
            let comb = super_bracket(x, y, p.m, p.n).expect("valid basis");
            let rhs = combination_op(p, &comb, &xy.shift).expect("bracket respects weights");
            verdict.checked += 1;
            if lhs != rhs {
                verdict.failures.push(RelationFailure { x, y, lhs, rhs });
            }
        }
    }
    verdict
}

/// Monomials of total degree at most `deg` in `nvars` variables.
pub fn monomials_up_to(nvars: usize, deg: u32) -> Vec<Monomial> {
    fn rec(nvars: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if cur.len() == nvars {
            out.push(Monomial::from_exponents(cur.clone()));
            return;
        }
        for e in 0..=left {
            cur.push(e);
            rec(nvars, left - e, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(nvars, deg, &mut Vec::new(), &mut out);
    out.sort();
    out
}

/// The pointwise cross-check: the bracket identity applied to every
/// monomial vector of degree at most `deg`. Returns the failing `(x, y, v)`.
pub fn verify_pointwise(p: &Presentation, deg: u32) -> Result<Vec<(BasisIndex, BasisIndex, VecF)>> {
    let basis = full_basis(p.m, p.n);
    let mut vectors = Vec::new();
    for mono in monomials_up_to(p.nvars(), deg) {
        let q = Poly::monomial(mono, Rat::one());
        vectors.push(VecF::unit(0, q.clone()));
        vectors.push(VecF::unit(1, q));
    }
    let mut failures = Vec::new();
    for &x in &basis {
        for &y in &basis {
            let sign = int(x.parity().sign(y.parity()));
            let comb = super_bracket(x, y, p.m, p.n)?;
            for v in &vectors {
                let xy = act(p, x, &act(p, y, v)?)?;
                let yx = act(p, y, &act(p, x, v)?)?;
                let lhs = &xy - &yx.scale(&sign);
                if lhs != act_combination(p, &comb, v)? {
                    failures.push((x, y, v.clone()));
                }
            }
        }
    }
    Ok(failures)
}

fn check_params(m: usize, a: &[Rat], s: &BTreeSet<usize>) -> Result<()> {
    if m == 0 {
        return Err(Error::InvalidIndex("m must be at least 1".into()));
    }
    if a.len() != m {
        return Err(Error::Precondition(format!(
            "expected {m} parameters, got {}",
            a.len()
        )));
    }
    if let Some(k) = a.iter().position(Zero::is_zero) {
        return Err(Error::ZeroParameter(k + 1));
    }
    if let Some(&k) = s.iter().find(|&&k| k == 0 || k > m) {
        return Err(Error::InvalidIndex(format!("S contains {k}, outside 1..{m}")));
    }
    Ok(())
}

fn mas_entries(m: usize, i: usize, a: &Rat, in_s: bool) -> (Poly, Poly) {
    let h = Poly::var(m, i - 1);
    let inv = a.recip();
    if in_s {
        (h.scale(a), Poly::constant(m, inv))
    } else {
        (Poly::constant(m, a.clone()), h.scale(&inv))
    }
}

/// `M(a, S)` over `sl(m|1)`.
pub fn build_mas(m: usize, a: &[Rat], s: &BTreeSet<usize>) -> Result<Presentation> {
    check_params(m, a, s)?;
    let mut p = Presentation::new(m, 1, Grading::G11)?;
    for i in 1..=m {
        let (b, e) = mas_entries(m, i, &a[i - 1], s.contains(&i));
        p.set(BasisIndex::Root(Idx::Plain(i), Idx::Bar(1)), Mat2::upper(b))?;
        p.set(BasisIndex::Root(Idx::Bar(1), Idx::Plain(i)), Mat2::lower(e))?;
    }
    Ok(p)
}

/// `M̄(a, S)`: the same entries in the transposed corners.
pub fn build_mas_bar(m: usize, a: &[Rat], s: &BTreeSet<usize>) -> Result<Presentation> {
    check_params(m, a, s)?;
    let mut p = Presentation::new(m, 1, Grading::G11Bar)?;
    for i in 1..=m {
        let (b, e) = mas_entries(m, i, &a[i - 1], s.contains(&i));
        p.set(BasisIndex::Root(Idx::Plain(i), Idx::Bar(1)), Mat2::lower(b))?;
        p.set(BasisIndex::Root(Idx::Bar(1), Idx::Plain(i)), Mat2::upper(e))?;
    }
    Ok(p)
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ParityVerdict {
    pub violations: Vec<String>,
}

impl ParityVerdict {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Confirms that a graded presentation has the corner pattern its flag claims
/// and that the derived even matrices are diagonal.
pub fn parity_check(p: &Presentation) -> Result<ParityVerdict> {
    if !p.grading.is_graded() {
        return Err(Error::NotGraded);
    }
    let mut out = ParityVerdict::default();
    let vars = p.vars();
    for (&x, e) in p.generators() {
        let BasisIndex::Root(i, _) = x else { continue };
        let upper_expected = (p.grading == Grading::G11) != i.is_bar();
        let ok = if upper_expected {
            e.is_strict_upper()
        } else {
            e.is_strict_lower()
        };
        if !ok {
            let want = if upper_expected { "upper-right" } else { "lower-left" };
            out.violations.push(format!(
                "{x} should have only its {want} entry, got {}",
                e.display(&vars)
            ));
        }
    }
    for x in full_basis(p.m, p.n) {
        if let BasisIndex::Root(i, j) = x {
            if x.parity() == Parity::Even {
                match derive_even(p, i, j) {
                    Ok(e) if e.is_diagonal() => {}
                    Ok(e) => out
                        .violations
                        .push(format!("{x} should be diagonal, got {}", e.display(&vars))),
                    Err(err) => out.violations.push(format!("{x}: {err}")),
                }
            }
        }
    }
    Ok(out)
}

/// Checks `W E_src(x) = ± E_dst(x) τ_x(W)` for every odd generator, with the
/// minus sign for odd maps. Returns the generators that fail.
pub fn check_intertwiner(
    src: &Presentation,
    dst: &Presentation,
    w: &Mat2,
    parity: Parity,
) -> Result<Vec<BasisIndex>> {
    if (src.m, src.n) != (dst.m, dst.n) {
        return Err(Error::Precondition(format!(
            "presentations over sl({}|{}) and sl({}|{})",
            src.m, src.n, dst.m, dst.n
        )));
    }
    let sign = if parity.is_odd() { int(-1) } else { int(1) };
    let mut bad = Vec::new();
    for x in odd_generators(src.m, src.n) {
        let tau = src.shift_of(x)?;
        let lhs = w * src.get(x)?;
        let rhs = (dst.get(x)? * &w.shift(&tau)).scale(&sign);
        if lhs != rhs {
            bad.push(x);
        }
    }
    Ok(bad)
}
