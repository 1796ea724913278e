//! Certificates that no rank-2 module exists over `sl(m|n)` for `m, n ≥ 2`.
//!
//! Every odd pair `(E_{xj̄}, E_{j̄x})` involved is put in one of its two
//! triangular forms with a formal unit scalar `α_{xj̄}`. For each index
//! `i < m` all sixteen branch combinations of the pairs `(i,1̄)`, `(m,1̄)`,
//! `(i,n̄)`, `(m,n̄)` are enumerated, and each one is shown to give two
//! non-proportional values for `E_{im}` or `E_{mi}` depending on whether the
//! odd intermediate is `1̄` or `n̄`.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::normalform::canonicalize_pair;
use crate::poly::{int, rat, Poly, Rat, Vars};
use crate::presentation::{derive_even_via, Grading, Mat2, Presentation};
use crate::superlie::{cartan_poly, super_bracket, weight_shift, BasisIndex, Idx};

pub const CERT_FORMAT: &str = "uhfree-emptiness-certificate";
pub const CERT_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Branch {
    /// `E_{xj̄} = α [0, L; 0, 0]`, `E_{j̄x} = α^{-1} [0, 0; 1, 0]`
    Up,
    /// `E_{xj̄} = α [0, 1; 0, 0]`, `E_{j̄x} = α^{-1} [0, 0; L, 0]`
    Down,
}

impl Branch {
    pub fn as_str(self) -> &'static str {
        match self {
            Branch::Up => "up",
            Branch::Down => "down",
        }
    }

    fn parse(s: &str) -> Result<Branch> {
        match s {
            "up" => Ok(Branch::Up),
            "down" => Ok(Branch::Down),
            _ => Err(Error::Format(format!("unknown branch '{s}'"))),
        }
    }
}

/// A Laurent monomial in the formal scalars `α_{xj̄}`, keyed by `(x, j)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct AlphaMono(BTreeMap<(usize, usize), i32>);

impl AlphaMono {
    pub fn alpha(x: usize, j: usize, power: i32) -> Self {
        AlphaMono(BTreeMap::from([((x, j), power)]))
    }

    pub fn mul(&self, other: &AlphaMono) -> AlphaMono {
        let mut out = self.0.clone();
        for (k, e) in &other.0 {
            let v = out.entry(*k).or_insert(0);
            *v += e;
            if *v == 0 {
                out.remove(k);
            }
        }
        AlphaMono(out)
    }

    pub fn eval(&self, values: &BTreeMap<(usize, usize), Rat>) -> Rat {
        let mut acc = Rat::one();
        for (k, &e) in &self.0 {
            let v = &values[k];
            for _ in 0..e.unsigned_abs() {
                if e > 0 {
                    acc *= v;
                } else {
                    acc /= v;
                }
            }
        }
        acc
    }
}

impl fmt::Display for AlphaMono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = |(x, j): (usize, usize), e: i32| {
            let base = format!("a[{x},b{j}]");
            if e.abs() == 1 {
                base
            } else {
                format!("{base}^{}", e.abs())
            }
        };
        let num: Vec<String> = self.0.iter().filter(|(_, &e)| e > 0).map(|(&k, &e)| name(k, e)).collect();
        let den: Vec<String> = self.0.iter().filter(|(_, &e)| e < 0).map(|(&k, &e)| name(k, e)).collect();
        let num = if num.is_empty() { "1".to_string() } else { num.join("*") };
        if den.is_empty() {
            write!(f, "{num}")
        } else {
            write!(f, "{num}/{}", den.join("/"))
        }
    }
}

/// `scalar · mat` with a formal unit scalar.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Scaled {
    pub scalar: AlphaMono,
    pub mat: Mat2,
}

impl Scaled {
    pub fn instantiate(&self, values: &BTreeMap<(usize, usize), Rat>) -> Mat2 {
        self.mat.scale(&self.scalar.eval(values))
    }
}

/// The four pairs of one branch family, in the order `(i,1̄)`, `(m,1̄)`, `(i,n̄)`, `(m,n̄)`.
pub fn pair_keys(m: usize, n: usize, i: usize) -> [(usize, usize); 4] {
    [(i, 1), (m, 1), (i, n), (m, n)]
}

fn odd(x: usize, j: usize) -> BasisIndex {
    BasisIndex::Root(Idx::Plain(x), Idx::Bar(j))
}

fn odd_back(x: usize, j: usize) -> BasisIndex {
    BasisIndex::Root(Idx::Bar(j), Idx::Plain(x))
}

/// `L_{xj̄}`: the Cartan element `{e_{xj̄}, e_{j̄x}}` as a polynomial.
pub fn pair_form(m: usize, n: usize, x: usize, j: usize) -> Poly {
    cartan_poly(
        &super_bracket(odd(x, j), odd_back(x, j), m, n).expect("valid pair"),
        m,
        n,
    )
}

/// `(E_{xj̄}, E_{j̄x})` in the given branch.
pub fn pair_matrices(m: usize, n: usize, x: usize, j: usize, branch: Branch) -> (Scaled, Scaled) {
    let nvars = m + n - 1;
    let l = pair_form(m, n, x, j);
    let one = Poly::one(nvars);
    let (u, v) = match branch {
        Branch::Up => (l, one),
        Branch::Down => (one, l),
    };
    (
        Scaled {
            scalar: AlphaMono::alpha(x, j, 1),
            mat: Mat2::upper(u),
        },
        Scaled {
            scalar: AlphaMono::alpha(x, j, -1),
            mat: Mat2::lower(v),
        },
    )
}

type PairTable = BTreeMap<BasisIndex, Scaled>;

fn pair_table(m: usize, n: usize, i: usize, choices: &[Branch; 4]) -> PairTable {
    let mut t = PairTable::new();
    for (&(x, j), &b) in pair_keys(m, n, i).iter().zip(choices) {
        let (e, f) = pair_matrices(m, n, x, j, b);
        t.insert(odd(x, j), e);
        t.insert(odd_back(x, j), f);
    }
    t
}

/// `E_IK τ_IK(E_KJ) + E_KJ τ_KJ(E_IK)` on formally scaled matrices.
fn route(m: usize, n: usize, table: &PairTable, i: Idx, j: Idx, k: Idx) -> Result<Scaled> {
    let ik = BasisIndex::Root(i, k);
    let kj = BasisIndex::Root(k, j);
    let missing = |x: BasisIndex| Error::MissingGenerator(x.to_string());
    let a = table.get(&ik).ok_or_else(|| missing(ik))?;
    let b = table.get(&kj).ok_or_else(|| missing(kj))?;
    let t_ik = weight_shift(ik, m, n)?;
    let t_kj = weight_shift(kj, m, n)?;
    let first = &a.mat * &b.mat.shift(&t_ik);
    let second = &b.mat * &a.mat.shift(&t_kj);
    Ok(Scaled {
        scalar: a.scalar.mul(&b.scalar),
        mat: &first + &second,
    })
}

/// `Some(λ)` with `a = λ b`; two zero matrices count as proportional.
pub fn proportional(a: &Mat2, b: &Mat2) -> Option<Rat> {
    if a.is_zero() && b.is_zero() {
        return Some(Rat::one());
    }
    let mut lambda = None;
    for r in 0..2 {
        for c in 0..2 {
            let (pa, pb) = (a.get(r, c), b.get(r, c));
            if pa.is_zero() != pb.is_zero() {
                return None;
            }
            if lambda.is_none() && !pa.is_zero() {
                lambda = Some(pa.leading_coeff() / pb.leading_coeff());
            }
        }
    }
    let lambda = lambda?;
    (a == &b.scale(&lambda)).then_some(lambda)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    A,
    B,
}

/// A monomial present in one route's entry and absent from the other's.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SupportWitness {
    pub entry: [usize; 2],
    pub monomial: String,
    pub side: Side,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EvalKind {
    /// One route vanishes at `entries[0]`, the other does not.
    Vanishing,
    /// `A_e1 B_e2 − A_e2 B_e1 ≠ 0` for `entries = [e1, e2]`.
    CrossDeterminant,
}

/// An integer point at which the two routes cannot be proportional.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EvalWitness {
    pub point: Vec<i64>,
    pub kind: EvalKind,
    pub entries: Vec<[usize; 2]>,
}

/// Prefers the highest degree, then the highest power of a single variable.
pub fn support_witness(a: &Mat2, b: &Mat2, vars: &Vars) -> Option<SupportWitness> {
    let mut best: Option<((u32, u32), SupportWitness)> = None;
    for (side, x, y) in [(Side::A, a, b), (Side::B, b, a)] {
        for [r, c] in ENTRIES {
            for (mono, _) in x.get(r, c).terms() {
                if !y.get(r, c).coeff(mono).is_zero() {
                    continue;
                }
                let score = (mono.degree(), mono.exponents().iter().copied().max().unwrap_or(0));
                if best.as_ref().is_some_and(|(s, _)| *s >= score) {
                    continue;
                }
                let term = Poly::monomial(mono.clone(), Rat::one());
                best = Some((
                    score,
                    SupportWitness {
                        entry: [r, c],
                        monomial: vars.format(&term),
                        side,
                    },
                ));
            }
        }
    }
    best.map(|(_, w)| w)
}

fn check_support(w: &SupportWitness, a: &Mat2, b: &Mat2, vars: &Vars) -> Result<bool> {
    let mono = vars.parse(&w.monomial)?;
    let Some((m, _)) = mono.leading_term().filter(|_| mono.num_terms() == 1) else {
        return Ok(false);
    };
    let [r, c] = w.entry;
    if r > 1 || c > 1 {
        return Ok(false);
    }
    let (x, y) = match w.side {
        Side::A => (a, b),
        Side::B => (b, a),
    };
    Ok(!x.get(r, c).coeff(m).is_zero() && y.get(r, c).coeff(m).is_zero())
}

const ENTRIES: [[usize; 2]; 4] = [[0, 0], [0, 1], [1, 0], [1, 1]];

fn values_at(x: &Mat2, point: &[Rat]) -> [Rat; 4] {
    ENTRIES.map(|[r, c]| x.get(r, c).eval(point))
}

fn eval_at(point: &[Rat], a: &Mat2, b: &Mat2) -> (Option<[usize; 2]>, Option<[[usize; 2]; 2]>) {
    let va = values_at(a, point);
    let vb = values_at(b, point);
    let mut vanishing = None;
    for (k, e) in ENTRIES.iter().enumerate() {
        if va[k].is_zero() != vb[k].is_zero() {
            vanishing = Some(*e);
            break;
        }
    }
    let mut cross = None;
    'outer: for p in 0..4 {
        for q in (p + 1)..4 {
            if !(&va[p] * &vb[q] - &va[q] * &vb[p]).is_zero() {
                cross = Some([ENTRIES[p], ENTRIES[q]]);
                break 'outer;
            }
        }
    }
    (vanishing, cross)
}

/// Searches integer points of `[-4, 4]^nvars`, nearest coordinates first.
pub fn evaluation_witness(a: &Mat2, b: &Mat2) -> Option<EvalWitness> {
    let nvars = a.nvars();
    let order: [i64; 9] = [0, 1, -1, 2, -2, 3, -3, 4, -4];
    let mut first_cross: Option<EvalWitness> = None;
    let total = 9usize.pow(nvars as u32);
    for code in 0..total {
        let mut rest = code;
        let mut point = vec![0i64; nvars];
        for slot in point.iter_mut().rev() {
            *slot = order[rest % 9];
            rest /= 9;
        }
        let rp: Vec<Rat> = point.iter().map(|&x| int(x)).collect();
        let (vanishing, cross) = eval_at(&rp, a, b);
        if let Some(e) = vanishing {
            return Some(EvalWitness {
                point,
                kind: EvalKind::Vanishing,
                entries: vec![e],
            });
        }
        if first_cross.is_none() {
            if let Some([e1, e2]) = cross {
                first_cross = Some(EvalWitness {
                    point,
                    kind: EvalKind::CrossDeterminant,
                    entries: vec![e1, e2],
                });
            }
        }
        // a vanishing witness is preferred but a cross-determinant one is enough
        if first_cross.is_some() && code > 9 * 9 {
            break;
        }
    }
    first_cross
}

fn check_eval(w: &EvalWitness, a: &Mat2, b: &Mat2) -> bool {
    if w.point.len() != a.nvars() {
        return false;
    }
    let rp: Vec<Rat> = w.point.iter().map(|&x| int(x)).collect();
    let at = |x: &Mat2, [r, c]: [usize; 2]| x.get(r, c).eval(&rp);
    let valid = |e: &[usize; 2]| e[0] < 2 && e[1] < 2;
    if !w.entries.iter().all(valid) {
        return false;
    }
    match (w.kind, w.entries.as_slice()) {
        (EvalKind::Vanishing, [e]) => at(a, *e).is_zero() != at(b, *e).is_zero(),
        (EvalKind::CrossDeterminant, [e1, e2]) => {
            !(at(a, *e1) * at(b, *e2) - at(a, *e2) * at(b, *e1)).is_zero()
        }
        _ => false,
    }
}

/// Three independent reasons why `A ≠ λ B` for every nonzero `λ`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NonProportional {
    /// Matching leading coefficients forces a single candidate `λ`, which fails.
    pub algebraic: bool,
    pub support: Option<SupportWitness>,
    pub evaluation: Option<EvalWitness>,
}

impl NonProportional {
    pub fn establish(a: &Mat2, b: &Mat2, vars: &Vars) -> Option<NonProportional> {
        if proportional(a, b).is_some() {
            return None;
        }
        Some(NonProportional {
            algebraic: true,
            support: support_witness(a, b, vars),
            evaluation: evaluation_witness(a, b),
        })
    }

    /// Re-checks every recorded witness against the given matrices.
    pub fn recheck(&self, a: &Mat2, b: &Mat2, vars: &Vars) -> Result<bool> {
        let algebraic = self.algebraic && proportional(a, b).is_none();
        let support = match &self.support {
            Some(w) => check_support(w, a, b, vars)?,
            None => true,
        };
        let evaluation = self.evaluation.as_ref().is_some_and(|w| check_eval(w, a, b));
        Ok(algebraic && support && evaluation)
    }
}

/// Which even matrix a branch dies on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Target {
    /// `E_{im}`
    Im,
    /// `E_{mi}`
    Mi,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BranchRecord {
    pub i: usize,
    pub choices: [Branch; 4],
    pub target: Target,
    /// `E_{im}` through `1̄` and `n̄` were proportional before `E_{mi}` failed.
    pub survived_im: bool,
    pub route_a: Scaled,
    pub route_b: Scaled,
    pub witness: NonProportional,
}

impl BranchRecord {
    pub fn target_index(&self, m: usize) -> BasisIndex {
        match self.target {
            Target::Im => BasisIndex::Root(Idx::Plain(self.i), Idx::Plain(m)),
            Target::Mi => BasisIndex::Root(Idx::Plain(m), Idx::Plain(self.i)),
        }
    }
}

/// Conjugate one canonical `(m, n̄)` pair, then bring it back with the canonicalizer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CanonDemo {
    pub conjugator: Mat2,
    pub u: Poly,
    pub v: Poly,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmptinessCertificate {
    pub m: usize,
    pub n: usize,
    pub graded: bool,
    pub branches: Vec<BranchRecord>,
    pub canon_demo: CanonDemo,
    pub reductions: Vec<String>,
    /// Routes re-derived through the presentation layer at rational scalars agree.
    pub rechecked: bool,
    /// Each branch's pairs satisfy their own relations.
    pub pairs_checked: bool,
}

impl EmptinessCertificate {
    pub fn vars(&self) -> Vars {
        Vars::new(self.m, self.n)
    }

    /// The branch with `E_{im}` scalar on both routes, for `i = 1`.
    pub fn displayed(&self) -> Option<&BranchRecord> {
        self.branches.iter().find(|b| b.i == 1 && b.survived_im)
    }

    pub fn all_dead(&self) -> bool {
        let expected = 16 * (self.m - 1);
        self.branches.len() == expected
    }

    pub fn report(&self) -> String {
        let vars = self.vars();
        let mut out = String::new();
        let kind = if self.graded { "graded and ungraded" } else { "ungraded" };
        out.push_str(&format!(
            "emptiness certificate for sl({}|{}) ({kind})\n",
            self.m, self.n
        ));
        out.push_str("imported reductions:\n");
        for r in &self.reductions {
            out.push_str(&format!("  - {r}\n"));
        }
        out.push_str(&format!(
            "canonical pair replay: conjugator {} -> u = {}, v = {} ({})\n",
            self.canon_demo.conjugator.display(&vars),
            vars.format(&self.canon_demo.u),
            vars.format(&self.canon_demo.v),
            if self.canon_demo.passed { "ok" } else { "FAILED" }
        ));
        out.push_str(&format!("branches: {} (all contradictory)\n", self.branches.len()));
        for b in &self.branches {
            let keys = pair_keys(self.m, self.n, b.i);
            let choices: Vec<String> = keys
                .iter()
                .zip(&b.choices)
                .map(|(&(x, j), c)| format!("{}={}", odd(x, j), c.as_str()))
                .collect();
            out.push_str(&format!(
                "  i={} [{}] {} via b1: ({}) {}  via b{}: ({}) {}\n",
                b.i,
                choices.join(" "),
                b.target_index(self.m),
                b.route_a.scalar,
                b.route_a.mat.display(&vars),
                self.n,
                b.route_b.scalar,
                b.route_b.mat.display(&vars),
            ));
            if let Some(s) = &b.witness.support {
                out.push_str(&format!(
                    "      support: {} in entry ({},{}) of route {:?} only\n",
                    s.monomial,
                    s.entry[0] + 1,
                    s.entry[1] + 1,
                    s.side
                ));
            }
            if let Some(e) = &b.witness.evaluation {
                out.push_str(&format!("      evaluation: {:?} at {:?}\n", e.kind, e.point));
            }
        }
        out.push_str(&format!(
            "re-derived through the presentation layer: {}\n",
            if self.rechecked { "agree" } else { "DISAGREE" }
        ));
        out
    }
}

fn all_choices() -> Vec<[Branch; 4]> {
    (0..16u8)
        .map(|bits| {
            let pick = |k: u8| if bits & (1 << k) == 0 { Branch::Up } else { Branch::Down };
            [pick(0), pick(1), pick(2), pick(3)]
        })
        .collect()
}

fn reductions(m: usize, n: usize) -> Vec<String> {
    vec![
        format!(
            "(E[{m},b{n}], E[b{n},{m}]) is conjugate to a triangular pair with u*tau(v) = h{m} (canonicalize_pair, replayed)"
        ),
        format!(
            "with E[{m},b{n}] triangular, every pair (E[x,bj], E[bj,x]) for j in {{1, {n}}} is triangular with entries alpha*L or alpha and 1/alpha or L/alpha, L = {{e[x,bj], e[bj,x]}}"
        ),
        "each even E[I,J] equals E[I,K] tau(E[K,J]) + E[K,J] tau(E[I,K]) for every odd intermediate K".to_string(),
    ]
}

fn alpha_values(m: usize, n: usize, i: usize) -> BTreeMap<(usize, usize), Rat> {
    pair_keys(m, n, i)
        .iter()
        .enumerate()
        .map(|(k, &key)| (key, rat(2 * k as i64 + 3, k as i64 + 2)))
        .collect()
}

fn check_pairs(m: usize, n: usize, table: &PairTable, i: usize) -> Result<bool> {
    for &(x, j) in &pair_keys(m, n, i) {
        let p = &table[&odd(x, j)].mat;
        let q = &table[&odd_back(x, j)].mat;
        let tp = weight_shift(odd(x, j), m, n)?;
        let tq = tp.inverse();
        let l = pair_form(m, n, x, j);
        if !(p * &p.shift(&tp)).is_zero()
            || !(q * &q.shift(&tq)).is_zero()
            || &(p * &q.shift(&tp)) + &(q * &p.shift(&tq)) != Mat2::scalar(l)
        {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Re-derives both routes through [`derive_even_via`] at rational scalars.
fn recheck_routes(m: usize, n: usize, rec: &BranchRecord) -> Result<bool> {
    let table = pair_table(m, n, rec.i, &rec.choices);
    let values = alpha_values(m, n, rec.i);
    let mut p = Presentation::new(m, n, Grading::Ungraded)?;
    for (&x, s) in &table {
        p.set(x, s.instantiate(&values))?;
    }
    let BasisIndex::Root(a, b) = rec.target_index(m) else {
        unreachable!()
    };
    let via_1 = derive_even_via(&p, a, b, Idx::Bar(1))?;
    let via_n = derive_even_via(&p, a, b, Idx::Bar(n))?;
    Ok(via_1 == rec.route_a.instantiate(&values) && via_n == rec.route_b.instantiate(&values))
}

fn canon_demo(m: usize, n: usize) -> Result<CanonDemo> {
    let nvars = m + n - 1;
    let (e, f) = pair_matrices(m, n, m, n, Branch::Up);
    let values = BTreeMap::from([((m, n), int(2))]);
    let (p, q) = (e.instantiate(&values), f.instantiate(&values));
    let conjugator = Mat2::new(
        Poly::one(nvars),
        Poly::var(nvars, 0),
        Poly::zero(nvars),
        Poly::one(nvars),
    );
    let tp = weight_shift(odd(m, n), m, n)?;
    let p2 = p.conj(&conjugator, &tp)?;
    let q2 = q.conj(&conjugator, &tp.inverse())?;
    let a = pair_form(m, n, m, n);
    let canon = canonicalize_pair(&p2, &q2, &tp, &a)?;
    let back_p = p2.conj(&canon.witness, &tp)?;
    let hm = Poly::var(nvars, m - 1);
    let form_ok = (canon.v.is_constant() && !canon.v.is_zero() && canon.u == hm.scale(&canon.v.as_constant().unwrap().recip()))
        || (canon.u.is_constant() && !canon.u.is_zero() && canon.v == hm.scale(&canon.u.as_constant().unwrap().recip()));
    Ok(CanonDemo {
        conjugator,
        u: canon.u,
        v: canon.v,
        passed: back_p == canon.p && form_ok,
    })
}

fn build_certificate(m: usize, n: usize, graded: bool) -> Result<EmptinessCertificate> {
    if m < 2 || n < 2 {
        return Err(Error::OutOfScope(format!(
            "emptiness needs m, n >= 2, got sl({m}|{n}); use the classifier for n = 1"
        )));
    }
    let vars = Vars::new(m, n);
    let mut branches = Vec::new();
    let mut pairs_checked = true;
    for i in 1..m {
        for choices in all_choices() {
            let table = pair_table(m, n, i, &choices);
            pairs_checked &= check_pairs(m, n, &table, i)?;
            let (pi, pm) = (Idx::Plain(i), Idx::Plain(m));
            let im_a = route(m, n, &table, pi, pm, Idx::Bar(1))?;
            let im_b = route(m, n, &table, pi, pm, Idx::Bar(n))?;
            let (target, survived_im, ra, rb) =
                if proportional(&im_a.mat, &im_b.mat).is_none() {
                    (Target::Im, false, im_a, im_b)
                } else {
                    let mi_a = route(m, n, &table, pm, pi, Idx::Bar(1))?;
                    let mi_b = route(m, n, &table, pm, pi, Idx::Bar(n))?;
                    (Target::Mi, true, mi_a, mi_b)
                };
            let witness = NonProportional::establish(&ra.mat, &rb.mat, &vars).ok_or_else(|| {
                Error::InvariantBreach {
                    what: "emptiness".into(),
                    detail: format!("branch i={i} {choices:?} is consistent on both routes"),
                }
            })?;
            if witness.evaluation.is_none() {
                return Err(Error::InvariantBreach {
                    what: "emptiness".into(),
                    detail: format!("no evaluation witness for branch i={i} {choices:?}"),
                });
            }
            branches.push(BranchRecord {
                i,
                choices,
                target,
                survived_im,
                route_a: ra,
                route_b: rb,
                witness,
            });
        }
    }
    let mut rechecked = true;
    for b in &branches {
        rechecked &= recheck_routes(m, n, b)?;
    }
    Ok(EmptinessCertificate {
        m,
        n,
        graded,
        branches,
        canon_demo: canon_demo(m, n)?,
        reductions: reductions(m, n),
        rechecked,
        pairs_checked,
    })
}

pub fn emptiness_certificate(m: usize, n: usize) -> Result<EmptinessCertificate> {
    build_certificate(m, n, false)
}

/// A graded module is in particular an ungraded one, so the same certificate applies.
pub fn graded_emptiness(m: usize, n: usize) -> Result<EmptinessCertificate> {
    build_certificate(m, n, true)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RouteFile {
    pub via: String,
    pub scalar: String,
    pub matrix: [[String; 2]; 2],
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BranchFile {
    pub i: usize,
    pub choices: BTreeMap<String, String>,
    pub target: String,
    pub route_a: RouteFile,
    pub route_b: RouteFile,
    pub witness: NonProportional,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertificateFile {
    pub format: String,
    pub version: u32,
    pub m: usize,
    pub n: usize,
    pub graded: bool,
    pub reductions: Vec<String>,
    pub branches: Vec<BranchFile>,
}

impl EmptinessCertificate {
    pub fn to_file(&self) -> CertificateFile {
        let vars = self.vars();
        let branches = self
            .branches
            .iter()
            .map(|b| {
                let choices = pair_keys(self.m, self.n, b.i)
                    .iter()
                    .zip(&b.choices)
                    .map(|(&(x, j), c)| (odd(x, j).to_string(), c.as_str().to_string()))
                    .collect();
                BranchFile {
                    i: b.i,
                    choices,
                    target: b.target_index(self.m).to_string(),
                    route_a: RouteFile {
                        via: "b1".into(),
                        scalar: b.route_a.scalar.to_string(),
                        matrix: b.route_a.mat.format(&vars),
                    },
                    route_b: RouteFile {
                        via: format!("b{}", self.n),
                        scalar: b.route_b.scalar.to_string(),
                        matrix: b.route_b.mat.format(&vars),
                    },
                    witness: b.witness.clone(),
                }
            })
            .collect();
        CertificateFile {
            format: CERT_FORMAT.into(),
            version: CERT_VERSION,
            m: self.m,
            n: self.n,
            graded: self.graded,
            reductions: self.reductions.clone(),
            branches,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("certificate serializes")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CertificateCheck {
    pub problems: Vec<String>,
    pub branches: usize,
}

impl CertificateCheck {
    pub fn passed(&self) -> bool {
        self.problems.is_empty()
    }
}

/// Re-verifies a stored certificate: the recorded witnesses must hold on the
/// recorded polynomials, the routes must match a fresh computation, and every
/// branch must be present.
pub fn verify_certificate(file: &CertificateFile) -> Result<CertificateCheck> {
    if file.format != CERT_FORMAT {
        return Err(Error::Format(format!("unexpected format '{}'", file.format)));
    }
    if file.version != CERT_VERSION {
        return Err(Error::Format(format!(
            "unsupported certificate version {}",
            file.version
        )));
    }
    let (m, n) = (file.m, file.n);
    if m < 2 || n < 2 {
        return Err(Error::OutOfScope(format!("sl({m}|{n}) is outside the theorem")));
    }
    let vars = Vars::new(m, n);
    let mut check = CertificateCheck::default();
    let mut seen = std::collections::BTreeSet::new();
    for (k, b) in file.branches.iter().enumerate() {
        let tag = format!("branch {k}");
        if b.i == 0 || b.i >= m {
            check.problems.push(format!("{tag}: index i = {} out of range", b.i));
            continue;
        }
        let keys = pair_keys(m, n, b.i);
        let mut choices = [Branch::Up; 4];
        let mut ok = b.choices.len() == 4;
        for (slot, &(x, j)) in keys.iter().enumerate() {
            match b.choices.get(&odd(x, j).to_string()).map(|s| Branch::parse(s)) {
                Some(Ok(c)) => choices[slot] = c,
                _ => ok = false,
            }
        }
        if !ok {
            check.problems.push(format!("{tag}: malformed branch choices"));
            continue;
        }
        seen.insert((b.i, choices));
        let a = Mat2::parse(&vars, &b.route_a.matrix)?;
        let bb = Mat2::parse(&vars, &b.route_b.matrix)?;
        if !b.witness.recheck(&a, &bb, &vars)? {
            check.problems.push(format!("{tag}: recorded witness does not hold"));
        }
        let table = pair_table(m, n, b.i, &choices);
        let target: BasisIndex = b.target.parse()?;
        let BasisIndex::Root(ti, tj) = target else {
            check.problems.push(format!("{tag}: bad target"));
            continue;
        };
        let expected_targets = [
            BasisIndex::Root(Idx::Plain(b.i), Idx::Plain(m)),
            BasisIndex::Root(Idx::Plain(m), Idx::Plain(b.i)),
        ];
        if !expected_targets.contains(&target) {
            check.problems.push(format!("{tag}: unexpected target {target}"));
            continue;
        }
        if target == expected_targets[1] {
            // E_im must have been consistent for the branch to reach E_mi
            let im_a = route(m, n, &table, Idx::Plain(b.i), Idx::Plain(m), Idx::Bar(1))?;
            let im_b = route(m, n, &table, Idx::Plain(b.i), Idx::Plain(m), Idx::Bar(n))?;
            if proportional(&im_a.mat, &im_b.mat).is_none() {
                check.problems.push(format!("{tag}: E_im already inconsistent"));
            }
        }
        let ra = route(m, n, &table, ti, tj, Idx::Bar(1))?;
        let rb = route(m, n, &table, ti, tj, Idx::Bar(n))?;
        if ra.mat != a || rb.mat != bb {
            check.problems.push(format!("{tag}: recorded routes differ from recomputation"));
        }
        if ra.scalar.to_string() != b.route_a.scalar || rb.scalar.to_string() != b.route_b.scalar {
            check.problems.push(format!("{tag}: recorded scalars differ"));
        }
    }
    let expected = 16 * (m - 1);
    if seen.len() != expected {
        check
            .problems
            .push(format!("{} distinct branches, expected {expected}", seen.len()));
    }
    check.branches = file.branches.len();
    Ok(check)
}
