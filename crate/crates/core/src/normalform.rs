//! Normal forms under twisted conjugation and the classification of
//! rank-2 modules over `sl(1|1)` and `sl(m|1)`.

use std::collections::BTreeSet;
use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::poly::{divides_exactly, int, poly_gcd, Poly, Rat, ShiftMap};
use crate::presentation::{
    build_mas, build_mas_bar, check_intertwiner, parity_check, verify_relations, Grading, Mat2,
    Presentation,
};
use crate::superlie::{cartan_poly, super_bracket, weight_shift, BasisIndex, Idx, Parity};

/// `P = θ · (τα, τβ)ᵀ (β, −α)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NilParams {
    pub theta: Poly,
    pub alpha: Poly,
    pub beta: Poly,
}

impl NilParams {
    pub fn reconstruct(&self, tau: &ShiftMap) -> Mat2 {
        let ta = tau.apply(&self.alpha);
        let tb = tau.apply(&self.beta);
        let t = &self.theta;
        Mat2::new(
            &(t * &self.beta) * &ta,
            &(&(-t) * &self.alpha) * &ta,
            &(t * &self.beta) * &tb,
            &(&(-t) * &self.alpha) * &tb,
        )
    }
}

fn exact(d: &Poly, p: &Poly, what: &str) -> Result<Poly> {
    divides_exactly(d, p)?.ok_or_else(|| Error::InvariantBreach {
        what: what.into(),
        detail: "expected exact division".into(),
    })
}

/// Factors a matrix with `P · τ^{-1}(P) = 0` as `θ (τα, τβ)ᵀ (β, −α)` with
/// `gcd(α, β) = 1`; `α` is monic when nonzero, otherwise `β` is.
pub fn nil_factor(p: &Mat2, tau: &ShiftMap) -> Result<NilParams> {
    let nvars = p.nvars();
    if tau.len() != nvars {
        return Err(Error::ShiftLength {
            shift: tau.len(),
            nvars,
        });
    }
    if !(p * &p.shift(&tau.inverse())).is_zero() {
        return Err(Error::Precondition(
            "matrix does not square to zero under the given twist".into(),
        ));
    }
    if p.is_zero() {
        return Ok(NilParams {
            theta: Poly::zero(nvars),
            alpha: Poly::one(nvars),
            beta: Poly::zero(nvars),
        });
    }
    let row = if p.get(0, 0).is_zero() && p.get(0, 1).is_zero() {
        1
    } else {
        0
    };
    let (r0, r1) = (p.get(row, 0), p.get(row, 1));
    let g = poly_gcd(r0, r1)?;
    let mut beta = exact(&g, r0, "row gcd")?;
    let mut alpha = -&exact(&g, r1, "row gcd")?;
    let unit = if alpha.is_zero() {
        beta.leading_coeff()
    } else {
        alpha.leading_coeff()
    };
    let inv = unit.recip();
    alpha = alpha.scale(&inv);
    beta = beta.scale(&inv);
    // each row is λ_k (β, −α)
    let lambda = |k: usize| -> Result<Poly> {
        if !beta.is_zero() {
            exact(&beta, p.get(k, 0), "row multiplier")
        } else {
            exact(&-&alpha, p.get(k, 1), "row multiplier")
        }
    };
    let theta = if !alpha.is_zero() {
        exact(&tau.apply(&alpha), &lambda(0)?, "theta")?
    } else {
        exact(&tau.apply(&beta), &lambda(1)?, "theta")?
    };
    let out = NilParams { theta, alpha, beta };
    if &out.reconstruct(tau) != p {
        return Err(Error::InvariantBreach {
            what: "nil_factor".into(),
            detail: "reconstruction does not reproduce the input".into(),
        });
    }
    Ok(out)
}

/// A pair in the form `([0, u; 0, 0], [0, 0; v, 0])` and the matrix `W`
/// with `W^{-1} P τ_P(W)` and `W^{-1} Q τ_Q(W)` equal to it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CanonicalPair {
    pub p: Mat2,
    pub q: Mat2,
    pub u: Poly,
    pub v: Poly,
    pub witness: Mat2,
}

/// Brings a pair satisfying
/// `P τ_P(P) = Q τ_Q(Q) = 0`, `P τ_P(Q) + Q τ_Q(P) = a·I` (with
/// `τ_Q = τ_P^{-1}`) to strictly triangular form. `a` must be linear.
pub fn canonicalize_pair(p: &Mat2, q: &Mat2, p_shift: &ShiftMap, a: &Poly) -> Result<CanonicalPair> {
    let nvars = p.nvars();
    if q.nvars() != nvars || a.nvars() != nvars {
        return Err(Error::VarMismatch {
            left: nvars,
            right: q.nvars().max(a.nvars()),
        });
    }
    if a.total_degree() != Some(1) {
        return Err(Error::Precondition(
            "the scalar must be a degree-1 polynomial".into(),
        ));
    }
    let tp = p_shift.clone();
    let tq = p_shift.inverse();
    if !(p * &p.shift(&tp)).is_zero() || !(q * &q.shift(&tq)).is_zero() {
        return Err(Error::Precondition("pair does not square to zero".into()));
    }
    if &(p * &q.shift(&tp)) + &(q * &p.shift(&tq)) != Mat2::scalar(a.clone()) {
        return Err(Error::Precondition(
            "anticommutator of the pair is not the requested scalar".into(),
        ));
    }
    let witness = if p.is_strict_upper() && q.is_strict_lower() {
        Mat2::identity(nvars)
    } else {
        let np = nil_factor(p, &tq)?;
        let nq = nil_factor(q, &tp)?;
        // rows (τ_P γ, −τ_P δ) and (τ_Q β, −τ_Q α) kill Q and P respectively
        let g = Mat2::new(
            tp.apply(&nq.beta),
            -&tp.apply(&nq.alpha),
            tq.apply(&np.beta),
            -&tq.apply(&np.alpha),
        );
        g.inverse().map_err(|_| Error::InvariantBreach {
            what: "canonicalize_pair".into(),
            detail: "conjugator has a non-constant determinant".into(),
        })?
    };
    let cp = p.conj(&witness, &tp)?;
    let cq = q.conj(&witness, &tq)?;
    if !cp.is_strict_upper() || !cq.is_strict_lower() {
        return Err(Error::InvariantBreach {
            what: "canonicalize_pair".into(),
            detail: "conjugated pair is not triangular".into(),
        });
    }
    let u = cp.get(0, 1).clone();
    let v = cq.get(1, 0).clone();
    if &(&u * &tp.apply(&v)) != a {
        return Err(Error::InvariantBreach {
            what: "canonicalize_pair".into(),
            detail: "u·τ(v) differs from the scalar".into(),
        });
    }
    Ok(CanonicalPair {
        p: cp,
        q: cq,
        u,
        v,
        witness,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sl11Class {
    /// `([0, 1; 0, 0], [0, 0; h, 0])`
    One,
    /// `([0, h; 0, 0], [0, 0; 1, 0])`
    Two,
}

impl Sl11Class {
    pub fn label(self) -> &'static str {
        match self {
            Sl11Class::One => "class-1",
            Sl11Class::Two => "class-2",
        }
    }

    pub fn pair(self) -> (Mat2, Mat2) {
        let h = Poly::var(1, 0);
        match self {
            Sl11Class::One => (Mat2::upper(Poly::one(1)), Mat2::lower(h)),
            Sl11Class::Two => (Mat2::upper(h), Mat2::lower(Poly::one(1))),
        }
    }

    pub fn presentation(self) -> Presentation {
        let s: BTreeSet<usize> = match self {
            Sl11Class::One => BTreeSet::new(),
            Sl11Class::Two => BTreeSet::from([1]),
        };
        build_mas(1, &[Rat::one()], &s).expect("valid parameters")
    }
}

impl fmt::Display for Sl11Class {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

fn x11() -> BasisIndex {
    BasisIndex::Root(Idx::Plain(1), Idx::Bar(1))
}

fn y11() -> BasisIndex {
    BasisIndex::Root(Idx::Bar(1), Idx::Plain(1))
}

fn require_verified(p: &Presentation) -> Result<()> {
    let verdict = verify_relations(p);
    if !verdict.passed() {
        let vars = p.vars();
        let detail = if let Some(x) = verdict.missing.first() {
            format!("missing {x}")
        } else {
            verdict.failures[0].describe(&vars)
        };
        return Err(Error::Unverified(detail));
    }
    Ok(())
}

/// Classifies an `sl(1|1)` presentation; `W` carries the class's
/// canonical pair onto the input.
pub fn classify_sl11(p: &Presentation) -> Result<(Sl11Class, Mat2)> {
    if (p.m, p.n) != (1, 1) {
        return Err(Error::Precondition(format!(
            "expected sl(1|1), got sl({}|{})",
            p.m, p.n
        )));
    }
    require_verified(p)?;
    let h = Poly::var(1, 0);
    let canon = canonicalize_pair(
        p.get(x11())?,
        p.get(y11())?,
        &ShiftMap::identity(1),
        &h,
    )?;
    let (class, k) = match canon.u.as_constant() {
        Some(k) => (Sl11Class::One, k),
        None => {
            let k = divides_exactly(&h, &canon.u)?
                .and_then(|c| c.as_constant())
                .ok_or_else(|| Error::InvariantBreach {
                    what: "classify_sl11".into(),
                    detail: "upper entry is neither constant nor a multiple of h".into(),
                })?;
            (Sl11Class::Two, k)
        }
    };
    let d = Mat2::diag(Poly::one(1), Poly::constant(1, k.recip()));
    let w = &canon.witness * &d;
    let (cp, cq) = class.pair();
    let tau = ShiftMap::identity(1);
    if p.get(x11())?.conj(&w, &tau)? != cp || p.get(y11())?.conj(&w, &tau)? != cq {
        return Err(Error::InvariantBreach {
            what: "classify_sl11".into(),
            detail: "witness does not reproduce the canonical pair".into(),
        });
    }
    Ok((class, w))
}

/// Parameters of `M(a, S)` or `M̄(a, S)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CanonParams {
    pub a: Vec<Rat>,
    pub s: BTreeSet<usize>,
    pub bar: bool,
}

impl CanonParams {
    pub fn build(&self) -> Result<Presentation> {
        let m = self.a.len();
        if self.bar {
            build_mas_bar(m, &self.a, &self.s)
        } else {
            build_mas(m, &self.a, &self.s)
        }
    }

    /// The representative with `a_1 = 1`.
    pub fn normalized(&self) -> CanonParams {
        let inv = self.a[0].recip();
        CanonParams {
            a: self.a.iter().map(|x| x * &inv).collect(),
            s: self.s.clone(),
            bar: self.bar,
        }
    }

    /// `Some(γ)` with `self.a = γ · other.a`.
    pub fn scalar_ratio(&self, other: &CanonParams) -> Option<Rat> {
        if self.a.len() != other.a.len() || self.a.is_empty() {
            return None;
        }
        let gamma = &self.a[0] / &other.a[0];
        self.a
            .iter()
            .zip(&other.a)
            .all(|(x, y)| x == &(y * &gamma))
            .then_some(gamma)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Classification {
    pub params: CanonParams,
    /// Even for graded inputs; `conj(input, W)` is the canonical presentation.
    pub witness: Mat2,
    pub normalized: CanonParams,
}

fn breach(detail: impl Into<String>) -> Error {
    Error::InvariantBreach {
        what: "classify_sl_m1".into(),
        detail: detail.into(),
    }
}

/// Classifies a verified presentation over `sl(m|1)` as `M(a, S)`, or as
/// `M̄(a, S)` when a graded input needs the swapped corners.
pub fn classify_sl_m1(p: &Presentation) -> Result<Classification> {
    if p.n != 1 {
        return Err(Error::OutOfScope(format!(
            "classification needs n = 1, got sl({}|{})",
            p.m, p.n
        )));
    }
    require_verified(p)?;
    if p.grading.is_graded() {
        let verdict = parity_check(p)?;
        if !verdict.passed() {
            return Err(Error::Precondition(format!(
                "grading flag disagrees with the matrices: {}",
                verdict.violations[0]
            )));
        }
    }
    let m = p.m;
    let nvars = p.nvars();
    let xm = BasisIndex::Root(Idx::Plain(m), Idx::Bar(1));
    let ym = BasisIndex::Root(Idx::Bar(1), Idx::Plain(m));
    let a = cartan_poly(&super_bracket(xm, ym, m, 1)?, m, 1);
    let canon = canonicalize_pair(p.get(xm)?, p.get(ym)?, &weight_shift(xm, m, 1)?, &a)?;
    let conj = p.conjugate(&canon.witness)?;
    let mut params = Vec::with_capacity(m);
    let mut s = BTreeSet::new();
    let vars = p.vars();
    for i in 1..=m {
        let xi = conj.get(BasisIndex::Root(Idx::Plain(i), Idx::Bar(1)))?;
        let yi = conj.get(BasisIndex::Root(Idx::Bar(1), Idx::Plain(i)))?;
        if !xi.is_strict_upper() || !yi.is_strict_lower() {
            return Err(breach(format!(
                "after canonicalization e[{i},b1] = {} and e[b1,{i}] = {} are not triangular",
                xi.display(&vars),
                yi.display(&vars)
            )));
        }
        let b = xi.get(0, 1);
        let e = yi.get(1, 0);
        let h = Poly::var(nvars, i - 1);
        if let Some(c) = e.as_constant().filter(|c| !c.is_zero()) {
            let ai = c.recip();
            if b == &h.scale(&ai) {
                params.push(ai);
                s.insert(i);
                continue;
            }
        }
        if let Some(ai) = b.as_constant().filter(|c| !c.is_zero()) {
            if e == &h.scale(&ai.recip()) {
                params.push(ai);
                continue;
            }
        }
        return Err(breach(format!(
            "entries ({}, {}) for index {i} fit neither branch",
            vars.format(b),
            vars.format(e)
        )));
    }
    let mut params = CanonParams {
        a: params,
        s,
        bar: false,
    };
    let mut witness = canon.witness;
    if p.grading.is_graded() && !witness.is_diagonal() {
        if !witness.is_antidiagonal() {
            return Err(breach("graded input produced a mixed-parity conjugator"));
        }
        // J^{-1} M̄(a) J = M(−a), so undo J to land on M̄ with an even witness
        params.bar = true;
        params.a = params.a.iter().map(|x| -x).collect();
        witness = &witness * &Mat2::j(nvars).inverse()?;
    }
    let target = params.build()?;
    let mut check = p.conjugate(&witness)?;
    check.grading = target.grading;
    if check != target {
        return Err(breach("witness does not reproduce the canonical presentation"));
    }
    if p.grading.is_graded() && (params.bar != (p.grading == Grading::G11Bar)) {
        return Err(breach("bar flag disagrees with the input grading"));
    }
    let normalized = params.normalized();
    Ok(Classification {
        params,
        witness,
        normalized,
    })
}

/// The odd map `[0, −1; 1, 0]` from `M(a, S)` to `M̄(a, S)` and whether it intertwines.
pub fn graded_equiv_witness(m: usize, a: &[Rat], s: &BTreeSet<usize>) -> Result<(Mat2, bool)> {
    let src = build_mas(m, a, s)?;
    let dst = build_mas_bar(m, a, s)?;
    let j = Mat2::j(m);
    let ok = check_intertwiner(&src, &dst, &j, Parity::Odd)?.is_empty();
    Ok((j, ok))
}

/// `a_i` read back from integers, a convenience for tests and the CLI.
pub fn rationals(xs: &[i64]) -> Vec<Rat> {
    xs.iter().map(|&x| int(x)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{rat, Vars};

    fn set(xs: &[usize]) -> BTreeSet<usize> {
        xs.iter().copied().collect()
    }

    fn sl11(p: Mat2, q: Mat2) -> Presentation {
        Presentation::new(1, 1, Grading::Ungraded)
            .unwrap()
            .with(x11(), p)
            .unwrap()
            .with(y11(), q)
            .unwrap()
    }

    #[test]
    fn nil_factor_examples() {
        let tau = ShiftMap::identity(2);
        let z = nil_factor(&Mat2::zero(2), &tau).unwrap();
        assert_eq!(
            (z.theta, z.alpha, z.beta),
            (Poly::zero(2), Poly::one(2), Poly::zero(2))
        );
        let e = nil_factor(&Mat2::upper(Poly::one(2)), &ShiftMap::new(vec![1, -1])).unwrap();
        assert_eq!(
            (e.theta, e.alpha, e.beta),
            (Poly::constant(2, int(-1)), Poly::one(2), Poly::zero(2))
        );
        let vars = Vars::new(2, 1);
        let delta = ShiftMap::new(vec![1, 1]);
        let params = NilParams {
            theta: vars.parse("h1").unwrap(),
            alpha: vars.parse("h2").unwrap(),
            beta: vars.parse("1").unwrap(),
        };
        let back = nil_factor(&params.reconstruct(&delta), &delta).unwrap();
        assert_eq!(back, params);
    }

    #[test]
    fn nil_factor_rejects_non_nilpotent() {
        let m = Mat2::identity(1);
        assert!(matches!(
            nil_factor(&m, &ShiftMap::identity(1)),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn canonicalize_case_one_from_the_proof() {
        // P = [0, α; 0, 0], Q = [h v, −α h v²; α^{-1} h, −h v] with α = 2, v = h
        let vars = Vars::new(1, 1);
        let p = Mat2::upper(Poly::constant(1, int(2)));
        let q = Mat2::new(
            vars.parse("h1^2").unwrap(),
            vars.parse("-2*h1^3").unwrap(),
            vars.parse("1/2*h1").unwrap(),
            vars.parse("-h1^2").unwrap(),
        );
        let h = Poly::var(1, 0);
        let canon = canonicalize_pair(&p, &q, &ShiftMap::identity(1), &h).unwrap();
        assert!(canon.u.is_constant());
        let (class, w) = classify_sl11(&sl11(p.clone(), q.clone())).unwrap();
        assert_eq!(class, Sl11Class::One);
        // the proof's W = [1, v; 0, α^{-1}] up to a scalar
        let expected = Mat2::new(
            Poly::one(1),
            h.clone(),
            Poly::zero(1),
            Poly::constant(1, rat(1, 2)),
        );
        let ratio = w.get(0, 0).as_constant().unwrap();
        assert_eq!(w, expected.scale(&ratio));
    }

    #[test]
    fn canonical_pairs_need_no_conjugation() {
        let (p, q) = Sl11Class::One.pair();
        let c = canonicalize_pair(&p, &q, &ShiftMap::identity(1), &Poly::var(1, 0)).unwrap();
        assert_eq!(c.witness, Mat2::identity(1));
    }

    #[test]
    fn conjugates_of_class_two_come_back() {
        let (p, q) = Sl11Class::Two.pair();
        let vars = Vars::new(1, 1);
        let w0 = Mat2::new(
            Poly::one(1),
            vars.parse("h1^2").unwrap(),
            Poly::zero(1),
            Poly::one(1),
        );
        let tau = ShiftMap::identity(1);
        let input = sl11(p.conj(&w0, &tau).unwrap(), q.conj(&w0, &tau).unwrap());
        let (class, w) = classify_sl11(&input).unwrap();
        assert_eq!(class, Sl11Class::Two);
        assert_eq!(input.get(x11()).unwrap().conj(&w, &tau).unwrap(), p);
    }

    #[test]
    fn classify_sl11_examples() {
        let h = Poly::var(1, 0);
        let (c, w) = classify_sl11(&Sl11Class::One.presentation()).unwrap();
        assert_eq!((c, w), (Sl11Class::One, Mat2::identity(1)));
        let three = sl11(
            Mat2::upper(Poly::constant(1, int(3))),
            Mat2::lower(h.scale(&rat(1, 3))),
        );
        assert_eq!(classify_sl11(&three).unwrap().0, Sl11Class::One);
        let two = sl11(
            Mat2::upper(h.scale(&int(2))),
            Mat2::lower(Poly::constant(1, rat(1, 2))),
        );
        assert_eq!(classify_sl11(&two).unwrap().0, Sl11Class::Two);
        let bad = sl11(Mat2::zero(1), Mat2::zero(1));
        assert!(matches!(classify_sl11(&bad), Err(Error::Unverified(_))));
    }

    #[test]
    fn classify_m1_examples() {
        let p = build_mas(2, &rationals(&[1, 2]), &set(&[2])).unwrap();
        let c = classify_sl_m1(&p).unwrap();
        assert_eq!(c.params.a, rationals(&[1, 2]));
        assert_eq!(c.params.s, set(&[2]));
        assert_eq!(c.witness, Mat2::identity(2));

        let base = build_mas(2, &rationals(&[1, 3]), &set(&[1])).unwrap();
        let w0 = Mat2::scalar(Poly::constant(2, int(2)));
        let conj = base.conjugate(&w0).unwrap();
        let c = classify_sl_m1(&conj).unwrap();
        assert_eq!(c.params.s, set(&[1]));
        let gamma = &c.params.a[0] / int(1);
        assert_eq!(c.params.a[1], &gamma * int(3));

        let bar = build_mas_bar(2, &rationals(&[1, 1]), &set(&[])).unwrap();
        let c = classify_sl_m1(&bar).unwrap();
        assert!(c.params.bar);
        assert_eq!(c.params.a, rationals(&[1, 1]));
        assert!(c.params.s.is_empty());
        assert!(c.witness.is_diagonal());
    }

    #[test]
    fn graded_equivalence_examples() {
        let (j, ok) = graded_equiv_witness(2, &rationals(&[1, 1]), &set(&[1])).unwrap();
        assert!(ok);
        assert_eq!(j, Mat2::j(2));
        assert_eq!(&j * &j, Mat2::scalar(Poly::constant(2, int(-1))));
    }
}
