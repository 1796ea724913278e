//! Homomorphisms between presentations, isomorphism testing, endomorphism
//! rings and submodule filtrations.

use std::collections::HashMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::{nullspace, rank, solve_in_span};
use crate::normalform::{classify_sl_m1, Sl11Class};
use crate::poly::{divides_exactly, int, Monomial, Poly, Rat};
use crate::presentation::{
    act, check_intertwiner, monomials_up_to, Mat2, Presentation, VecF,
};
use crate::superlie::{full_basis, odd_generators, Parity};

/// Which maps count as morphisms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Category {
    /// Ungraded modules, all module maps.
    Ungraded,
    /// Graded modules, even and odd maps.
    Super,
    /// Graded modules, even maps only.
    Even,
}

impl Category {
    pub fn parse(s: &str) -> Result<Category> {
        match s {
            "ungraded" | "M2" => Ok(Category::Ungraded),
            "super" | "M11" => Ok(Category::Super),
            "even" | "M0" => Ok(Category::Even),
            _ => Err(Error::Format(format!("unknown category '{s}'"))),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Category::Ungraded => "ungraded",
            Category::Super => "super",
            Category::Even => "even",
        }
    }

    fn default_for(src: &Presentation, dst: &Presentation) -> Category {
        if src.grading.is_graded() && dst.grading.is_graded() {
            Category::Super
        } else {
            Category::Ungraded
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum HomParity {
    Even,
    Odd,
    Mixed,
}

impl HomParity {
    pub fn of(w: &Mat2) -> HomParity {
        if w.is_diagonal() {
            HomParity::Even
        } else if w.is_antidiagonal() {
            HomParity::Odd
        } else {
            HomParity::Mixed
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            HomParity::Even => "even",
            HomParity::Odd => "odd",
            HomParity::Mixed => "mixed",
        }
    }
}

impl fmt::Display for HomParity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// `Φ(f) = W f`, a module map from the source to the target.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomSolution {
    pub w: Mat2,
    pub parity: HomParity,
}

fn same_algebra(src: &Presentation, dst: &Presentation) -> Result<()> {
    if (src.m, src.n) != (dst.m, dst.n) {
        return Err(Error::Precondition(format!(
            "presentations over sl({}|{}) and sl({}|{})",
            src.m, src.n, dst.m, dst.n
        )));
    }
    Ok(())
}

const ENTRIES_FULL: [(usize, usize); 4] = [(0, 0), (0, 1), (1, 0), (1, 1)];
const ENTRIES_EVEN: [(usize, usize); 2] = [(0, 0), (1, 1)];
const ENTRIES_ODD: [(usize, usize); 2] = [(0, 1), (1, 0)];

fn placed(nvars: usize, (r, c): (usize, usize), p: Poly) -> Mat2 {
    let mut e = [
        Poly::zero(nvars),
        Poly::zero(nvars),
        Poly::zero(nvars),
        Poly::zero(nvars),
    ];
    e[r * 2 + c] = p;
    let [a, b, cc, d] = e;
    Mat2::new(a, b, cc, d)
}

/// Solves `W E_src(x) = ± E_dst(x) τ_x(W)` over `W` with the given entries
/// supported, entries of total degree at most `bound`.
fn solve_part(
    src: &Presentation,
    dst: &Presentation,
    bound: u32,
    entries: &[(usize, usize)],
    odd: bool,
) -> Result<Vec<Mat2>> {
    let nvars = src.nvars();
    let monos = monomials_up_to(nvars, bound);
    let gens = odd_generators(src.m, src.n);
    let sign = if odd { int(-1) } else { int(1) };
    let mut unknowns = Vec::new();
    for &pos in entries {
        for mono in &monos {
            unknowns.push((pos, mono.clone()));
        }
    }
    let ncols = unknowns.len();
    let mut row_of: HashMap<(usize, usize, Monomial), usize> = HashMap::new();
    let mut rows: Vec<Vec<Rat>> = Vec::new();
    for (gi, &x) in gens.iter().enumerate() {
        let es = src.get(x)?;
        let ed = dst.get(x)?;
        let tau = src.shift_of(x)?;
        for (col, (pos, mono)) in unknowns.iter().enumerate() {
            let wu = placed(nvars, *pos, Poly::monomial(mono.clone(), Rat::one()));
            let res = &(&wu * es) - &(ed * &wu.shift(&tau)).scale(&sign);
            for r in 0..2 {
                for c in 0..2 {
                    for (m, coeff) in res.get(r, c).terms() {
                        let key = (gi, r * 2 + c, m.clone());
                        let idx = *row_of.entry(key).or_insert_with(|| {
                            rows.push(vec![Rat::zero(); ncols]);
                            rows.len() - 1
                        });
                        rows[idx][col] += coeff;
                    }
                }
            }
        }
    }
    Ok(nullspace(&rows, ncols)
        .into_iter()
        .map(|v| {
            let mut w = Mat2::zero(nvars);
            for ((pos, mono), c) in unknowns.iter().zip(v) {
                if !c.is_zero() {
                    w = &w + &placed(nvars, *pos, Poly::monomial(mono.clone(), c));
                }
            }
            w
        })
        .collect())
}

/// A spanning set of module maps `src → dst` with entries of degree at
/// most `degree_bound`, in the category picked from the grading flags.
pub fn solve_hom(src: &Presentation, dst: &Presentation, degree_bound: u32) -> Result<Vec<HomSolution>> {
    solve_hom_in(src, dst, degree_bound, Category::default_for(src, dst))
}

pub fn solve_hom_in(
    src: &Presentation,
    dst: &Presentation,
    degree_bound: u32,
    category: Category,
) -> Result<Vec<HomSolution>> {
    same_algebra(src, dst)?;
    let mut out = Vec::new();
    match category {
        Category::Ungraded => {
            for w in solve_part(src, dst, degree_bound, &ENTRIES_FULL, false)? {
                out.push(HomSolution {
                    parity: HomParity::of(&w),
                    w,
                });
            }
        }
        Category::Super | Category::Even => {
            for w in solve_part(src, dst, degree_bound, &ENTRIES_EVEN, false)? {
                out.push(HomSolution {
                    w,
                    parity: HomParity::Even,
                });
            }
            if category == Category::Super {
                for w in solve_part(src, dst, degree_bound, &ENTRIES_ODD, true)? {
                    out.push(HomSolution {
                        w,
                        parity: HomParity::Odd,
                    });
                }
            }
        }
    }
    for s in &out {
        let convention = if category != Category::Ungraded && s.parity == HomParity::Odd {
            Parity::Odd
        } else {
            Parity::Even
        };
        if !check_intertwiner(src, dst, &s.w, convention)?.is_empty() {
            return Err(Error::InvariantBreach {
                what: "solve_hom".into(),
                detail: "a nullspace vector fails the intertwining identities".into(),
            });
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Iso {
    /// `a_src = γ · a_dst`.
    pub gamma: Rat,
    pub witness: Mat2,
    pub parity: Parity,
}

/// Decides isomorphism through classification; the witness maps `src` to `dst`.
pub fn iso_test(src: &Presentation, dst: &Presentation, category: Category) -> Result<Option<Iso>> {
    same_algebra(src, dst)?;
    let cs = classify_sl_m1(src)?;
    let cd = classify_sl_m1(dst)?;
    if cs.params.s != cd.params.s {
        return Ok(None);
    }
    let Some(gamma) = cs.params.scalar_ratio(&cd.params) else {
        return Ok(None);
    };
    let (bs, bd) = (cs.params.bar, cd.params.bar);
    if bs != bd && category != Category::Super {
        return Ok(None);
    }
    let nvars = src.nvars();
    let one = Poly::one(nvars);
    let g = Poly::constant(nvars, gamma.clone());
    let j = Mat2::j(nvars);
    let (core, parity) = match (bs, bd) {
        (false, false) => (Mat2::diag(one, g), Parity::Even),
        (true, true) => (Mat2::diag(g, one), Parity::Even),
        (false, true) => (&Mat2::diag(g, one) * &j, Parity::Odd),
        (true, false) => (&Mat2::diag(one, g) * &j.inverse()?, Parity::Odd),
    };
    let witness = &(&cd.witness * &core) * &cs.witness.inverse()?;
    if !check_intertwiner(src, dst, &witness, parity)?.is_empty() || witness.inverse().is_err() {
        return Err(Error::InvariantBreach {
            what: "iso_test".into(),
            detail: "assembled witness does not intertwine".into(),
        });
    }
    Ok(Some(Iso {
        gamma,
        witness,
        parity,
    }))
}

/// `c = h_1 + … + h_m`.
pub fn cartan_sum(m: usize, nvars: usize) -> Poly {
    (0..m).fold(Poly::zero(nvars), |acc, j| &acc + &Poly::var(nvars, j))
}

fn require_m1(p: &Presentation) -> Result<()> {
    if p.n != 1 {
        return Err(Error::OutOfScope(format!(
            "endomorphism rings are described for n = 1, got sl({}|{})",
            p.m, p.n
        )));
    }
    Ok(())
}

/// `diag((c+m−1)^k, c^k)` for `k = 0..=degree_bound`.
pub fn endo_ring_basis(p: &Presentation, degree_bound: u32) -> Result<Vec<Mat2>> {
    require_m1(p)?;
    let nvars = p.nvars();
    let c = cartan_sum(p.m, nvars);
    let c1 = &c + &Poly::constant(nvars, int(p.m as i64 - 1));
    Ok((0..=degree_bound)
        .map(|k| Mat2::diag(c1.pow(k), c.pow(k)))
        .collect())
}

fn flatten(w: &Mat2, monos: &[Monomial]) -> Vec<Rat> {
    let mut out = Vec::with_capacity(monos.len() * 4);
    for r in 0..2 {
        for c in 0..2 {
            for m in monos {
                out.push(w.get(r, c).coeff(m));
            }
        }
    }
    out
}

/// Coordinates of each solution in the endomorphism basis; fails when a
/// solution falls outside its span.
pub fn endo_coordinates(p: &Presentation, degree_bound: u32) -> Result<Vec<Vec<Rat>>> {
    let basis = endo_ring_basis(p, degree_bound)?;
    let sols = solve_hom(p, p, degree_bound)?;
    let monos = monomials_up_to(p.nvars(), degree_bound);
    let bvecs: Vec<Vec<Rat>> = basis.iter().map(|b| flatten(b, &monos)).collect();
    sols.iter()
        .map(|s| {
            solve_in_span(&bvecs, &flatten(&s.w, &monos)).ok_or_else(|| Error::InvariantBreach {
                what: "endomorphism shape".into(),
                detail: "solution outside diag(F(c+m-1), F(c))".into(),
            })
        })
        .collect()
}

/// True when the solver's span equals the span of [`endo_ring_basis`].
pub fn endo_span_matches(p: &Presentation, degree_bound: u32) -> Result<bool> {
    let basis = endo_ring_basis(p, degree_bound)?;
    let sols = solve_hom(p, p, degree_bound)?;
    let monos = monomials_up_to(p.nvars(), degree_bound);
    let bvecs: Vec<Vec<Rat>> = basis.iter().map(|b| flatten(b, &monos)).collect();
    let svecs: Vec<Vec<Rat>> = sols.iter().map(|s| flatten(&s.w, &monos)).collect();
    let ncols = monos.len() * 4;
    let mut both = bvecs.clone();
    both.extend(svecs.iter().cloned());
    let rb = rank(&bvecs, ncols);
    Ok(rb == bvecs.len() && rank(&svecs, ncols) == rb && rank(&both, ncols) == rb)
}

/// The idempotents of the endomorphism span: `W = Σ t_k B_k` is idempotent
/// iff `F(X) = Σ t_k X^k` satisfies `F² = F`, which forces `F ∈ {0, 1}`.
pub fn idempotent_scan(p: &Presentation, degree_bound: u32) -> Result<Vec<Mat2>> {
    let coords = endo_coordinates(p, degree_bound)?;
    let basis = endo_ring_basis(p, degree_bound)?;
    let nvars = p.nvars();
    let mut target = vec![Rat::zero(); basis.len()];
    target[0] = Rat::one();
    let unit_reachable = solve_in_span(&coords, &target).is_some();
    let mut out = vec![Mat2::zero(nvars)];
    if unit_reachable {
        out.push(Mat2::identity(nvars));
    }
    for w in &out {
        if &(w * w) != w {
            return Err(Error::InvariantBreach {
                what: "idempotent_scan".into(),
                detail: "candidate is not idempotent".into(),
            });
        }
    }
    Ok(out)
}

/// `M_F = F(c+m−1) C[h] ⊕ F(c) C[h]` for a univariate `F`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Submod {
    pub f: Poly,
}

impl Submod {
    pub fn new(f: Poly) -> Result<Self> {
        if f.nvars() != 1 {
            return Err(Error::Precondition("F must be univariate".into()));
        }
        if f.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Submod { f })
    }

    /// `(F(c+m−1), F(c))` in `nvars` variables.
    pub fn generators(&self, m: usize, nvars: usize) -> (Poly, Poly) {
        let c = cartan_sum(m, nvars);
        let c1 = &c + &Poly::constant(nvars, int(m as i64 - 1));
        (self.f.compose_univariate(&c1), self.f.compose_univariate(&c))
    }

    /// Coefficients of `F` from degree 0 up.
    pub fn coefficients(&self) -> Vec<Rat> {
        (0..=self.f.degree_in(0))
            .map(|k| self.f.coeff(&Monomial::from_exponents(vec![k])))
            .collect()
    }
}

pub fn submodule_member(s: &Submod, m: usize, v: &VecF) -> Result<bool> {
    let (g1, g2) = s.generators(m, v.nvars());
    Ok(divides_exactly(&g1, &v.f[0])?.is_some() && divides_exactly(&g2, &v.f[1])?.is_some())
}

/// Acting by every basis element on the two generators of `M_F` stays in `M_F`.
pub fn submodule_closed(p: &Presentation, s: &Submod) -> Result<bool> {
    require_m1(p)?;
    let nvars = p.nvars();
    let (g1, g2) = s.generators(p.m, nvars);
    let gens = [VecF::unit(0, g1), VecF::unit(1, g2)];
    for x in full_basis(p.m, p.n) {
        for g in &gens {
            if !submodule_member(s, p.m, &act(p, x, g)?)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Filtration {
    pub steps: Vec<Submod>,
    /// `separators[r]` lies in `steps[r]` but not in `steps[r + 1]`.
    pub separators: Vec<VecF>,
}

/// `M_{F_0} ⊋ … ⊋ M_{F_k}` with `F_k = Π_{r ≤ k} (X − λ_r)`, strictness checked.
pub fn filtration(p: &Presentation, lambdas: &[Rat], k: usize) -> Result<Filtration> {
    require_m1(p)?;
    if k > lambdas.len() {
        return Err(Error::Precondition(format!(
            "filtration of length {k} needs {k} values, got {}",
            lambdas.len()
        )));
    }
    let nvars = p.nvars();
    let x = Poly::var(1, 0);
    let mut f = Poly::one(1);
    let mut steps = vec![Submod::new(f.clone())?];
    for lam in &lambdas[..k] {
        f = &f * &(&x - &Poly::constant(1, lam.clone()));
        steps.push(Submod::new(f.clone())?);
    }
    let mut separators = Vec::new();
    for r in 0..k {
        let (g1, _) = steps[r].generators(p.m, nvars);
        let v = VecF::unit(0, g1);
        if !submodule_member(&steps[r], p.m, &v)? || submodule_member(&steps[r + 1], p.m, &v)? {
            return Err(Error::InvariantBreach {
                what: "filtration".into(),
                detail: format!("step {r} is not strict"),
            });
        }
        separators.push(v);
    }
    Ok(Filtration { steps, separators })
}

/// `gen1 C[h] ⊕ gen2 C[h]` inside an `sl(1|1)` module.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sl11Shape {
    pub first: Poly,
    pub second: Poly,
}

impl Sl11Shape {
    pub fn contains(&self, v: &VecF) -> Result<bool> {
        Ok(divides_exactly(&self.first, &v.f[0])?.is_some()
            && divides_exactly(&self.second, &v.f[1])?.is_some())
    }

    /// Closed under `x`, `y` and `h` of the class's canonical pair.
    pub fn closed_under(&self, class: Sl11Class) -> Result<bool> {
        let p = class.presentation();
        let gens = [
            VecF::unit(0, self.first.clone()),
            VecF::unit(1, self.second.clone()),
        ];
        for x in full_basis(1, 1) {
            for g in &gens {
                if !self.contains(&act(&p, x, g)?)? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// The two admissible shapes for `J = gen·C[h]`: `J⊕J` and `J⊕hJ` for
/// class 1, `J⊕J` and `hJ⊕J` for class 2.
pub fn sl11_submodule_shape(class: Sl11Class, gen: &Poly) -> Result<[Sl11Shape; 2]> {
    if gen.nvars() != 1 {
        return Err(Error::Precondition("generator must be a polynomial in h".into()));
    }
    if gen.is_zero() {
        return Err(Error::DivisionByZero);
    }
    let hj = &Poly::var(1, 0) * gen;
    let jj = Sl11Shape {
        first: gen.clone(),
        second: gen.clone(),
    };
    let other = match class {
        Sl11Class::One => Sl11Shape {
            first: gen.clone(),
            second: hj,
        },
        Sl11Class::Two => Sl11Shape {
            first: hj,
            second: gen.clone(),
        },
    };
    Ok([jj, other])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::normalform::rationals;
    use crate::poly::{rat, Vars};
    use crate::presentation::{build_mas, build_mas_bar};
    use std::collections::BTreeSet;

    fn set(xs: &[usize]) -> BTreeSet<usize> {
        xs.iter().copied().collect()
    }

    #[test]
    fn hom_examples() {
        let p = build_mas(2, &rationals(&[1, 1]), &set(&[])).unwrap();
        let sols = solve_hom(&p, &p, 2).unwrap();
        assert_eq!(sols.len(), 3);
        assert!(sols.iter().all(|s| s.parity == HomParity::Even));
        let vars = p.vars();
        let basis = endo_ring_basis(&p, 2).unwrap();
        assert_eq!(basis[0], Mat2::identity(2));
        assert_eq!(
            basis[1],
            Mat2::diag(vars.parse("h1 + h2 + 1").unwrap(), vars.parse("h1 + h2").unwrap())
        );
        assert!(endo_span_matches(&p, 2).unwrap());

        let s1 = build_mas(2, &rationals(&[1, 1]), &set(&[1])).unwrap();
        let s2 = build_mas(2, &rationals(&[1, 1]), &set(&[2])).unwrap();
        for bound in 0..=2 {
            assert!(solve_hom(&s1, &s2, bound).unwrap().is_empty());
        }

        let src = build_mas(2, &rationals(&[2, 4]), &set(&[])).unwrap();
        let dst = build_mas(2, &rationals(&[1, 2]), &set(&[])).unwrap();
        let sols = solve_hom(&src, &dst, 0).unwrap();
        assert_eq!(sols.len(), 1);
        let w = &sols[0].w;
        let ratio = &w.get(1, 1).as_constant().unwrap() / &w.get(0, 0).as_constant().unwrap();
        assert_eq!(ratio, int(2));
    }

    #[test]
    fn iso_examples() {
        let a = build_mas(2, &rationals(&[1, 2]), &set(&[1])).unwrap();
        let b = build_mas(2, &rationals(&[3, 6]), &set(&[1])).unwrap();
        let iso = iso_test(&a, &b, Category::Even).unwrap().unwrap();
        assert_eq!(iso.gamma, rat(1, 3));
        let c = build_mas(2, &rationals(&[1, 2]), &set(&[2])).unwrap();
        assert!(iso_test(&a, &c, Category::Super).unwrap().is_none());
        let same = iso_test(&a, &a, Category::Even).unwrap().unwrap();
        assert_eq!(same.gamma, int(1));
        assert_eq!(same.witness, Mat2::identity(2));

        let m = build_mas(2, &rationals(&[1, 1]), &set(&[])).unwrap();
        let mbar = build_mas_bar(2, &rationals(&[1, 1]), &set(&[])).unwrap();
        assert!(iso_test(&m, &mbar, Category::Even).unwrap().is_none());
        let odd = iso_test(&m, &mbar, Category::Super).unwrap().unwrap();
        assert_eq!(odd.parity, Parity::Odd);
        let j = Mat2::j(2);
        assert!(odd.witness == j || odd.witness == -&j);
        let back = iso_test(&mbar, &m, Category::Super).unwrap().unwrap();
        assert_eq!(back.parity, Parity::Odd);
    }

    #[test]
    fn idempotents_are_trivial() {
        let p = build_mas(2, &rationals(&[1, 1]), &set(&[])).unwrap();
        let idem = idempotent_scan(&p, 3).unwrap();
        assert_eq!(idem, vec![Mat2::zero(2), Mat2::identity(2)]);
        let q = build_mas(3, &rationals(&[1, 2, 3]), &set(&[2])).unwrap();
        assert_eq!(idempotent_scan(&q, 2).unwrap().len(), 2);
    }

    #[test]
    fn membership_examples() {
        let vars = Vars::new(2, 1);
        let whole = Submod::new(Poly::one(1)).unwrap();
        let any = VecF::new(vars.parse("h1^2 + 3").unwrap(), vars.parse("h2").unwrap());
        assert!(submodule_member(&whole, 2, &any).unwrap());
        let x = Submod::new(Poly::var(1, 0)).unwrap();
        let v = VecF::new(vars.parse("h1 + h2 + 1").unwrap(), Poly::zero(2));
        assert!(submodule_member(&x, 2, &v).unwrap());
        let w = VecF::new(Poly::one(2), Poly::zero(2));
        assert!(!submodule_member(&x, 2, &w).unwrap());
    }

    #[test]
    fn filtration_examples() {
        let p = build_mas(2, &rationals(&[1, 1]), &set(&[1])).unwrap();
        let f0 = filtration(&p, &[], 0).unwrap();
        assert_eq!(f0.steps.len(), 1);
        let f1 = filtration(&p, &[int(0)], 1).unwrap();
        assert_eq!(f1.separators[0], VecF::new(Poly::one(2), Poly::zero(2)));
        assert_eq!(f1.steps[1].f, Poly::var(1, 0));
        let vars = p.vars();
        let next = VecF::new(vars.parse("h1 + h2 + 1").unwrap(), Poly::zero(2));
        assert!(submodule_member(&f1.steps[1], 2, &next).unwrap());
        assert!(filtration(&p, &[int(0)], 2).is_err());
        assert!(submodule_closed(&p, &f1.steps[1]).unwrap());
    }

    #[test]
    fn sl11_shapes() {
        let h = Poly::var(1, 0);
        let [jj, jhj] = sl11_submodule_shape(Sl11Class::One, &h).unwrap();
        assert_eq!((jj.first.clone(), jj.second.clone()), (h.clone(), h.clone()));
        assert_eq!(jhj.second, h.pow(2));
        assert!(jj.closed_under(Sl11Class::One).unwrap());
        assert!(jhj.closed_under(Sl11Class::One).unwrap());
        let [a, b] = sl11_submodule_shape(Sl11Class::Two, &Poly::one(1)).unwrap();
        assert_eq!(a.first, Poly::one(1));
        assert_eq!(b.first, h);
        assert!(b.closed_under(Sl11Class::Two).unwrap());
        let wrong = Sl11Shape {
            first: h.clone(),
            second: Poly::one(1),
        };
        assert!(!wrong.closed_under(Sl11Class::One).unwrap());
    }
}
