//! Matrix Lie algebras gl(n) and sl(n), the su(3) and su(5) hypercomplex
//! data with their complex Poisson bivectors, and stems of type-A root
//! systems.

use std::collections::BTreeSet;
use std::sync::Arc;

use crate::context::{ContextBuilder, Del, FrameContext};
use crate::error::{Error, Result};
use crate::exterior::{invert_bivector, type_project, BasisSpec, FormField, LinearOperator, Multivector};
use crate::linalg::Matrix;
use crate::report::Report;
use crate::scalar::{Scalar, Var};
use crate::schouten::{check_duality, is_complex_poisson, schouten_coordinate, schouten_leibniz};

/// Name of the elementary matrix `E_ij` (1-based indices).
pub fn e_name(i: usize, j: usize) -> String {
    format!("E{i}{j}")
}

/// The formal real parameter `a` of `b = 1 + ia`.
pub fn param_a() -> Var {
    Var::real("a")
}

/// A frame context realized by explicit `n×n` matrices.
#[derive(Clone, Debug)]
pub struct MatrixAlgebra {
    pub n: usize,
    pub basis: Arc<BasisSpec>,
    pub matrices: Vec<Matrix>,
}

impl MatrixAlgebra {
    pub fn new(n: usize, elements: Vec<(String, Matrix)>) -> Result<MatrixAlgebra> {
        let names: Vec<String> = elements.iter().map(|(s, _)| s.clone()).collect();
        let covs: Vec<String> = names.iter().map(|s| format!("d{s}")).collect();
        let basis = BasisSpec::new(names, covs)?;
        Ok(MatrixAlgebra { n, basis, matrices: elements.into_iter().map(|(_, m)| m).collect() })
    }

    fn flat(&self, m: &Matrix) -> Vec<Scalar> {
        (0..self.n).flat_map(|i| (0..self.n).map(move |j| (i, j))).map(|(i, j)| m.get(i, j).clone()).collect()
    }

    /// Components of a matrix in this basis.
    pub fn decompose(&self, m: &Matrix) -> Result<Multivector> {
        let d = self.matrices.len();
        let cols: Vec<Vec<Scalar>> = self.matrices.iter().map(|b| self.flat(b)).collect();
        let mb = Matrix::from_fn(self.n * self.n, d, |r, c| cols[c][r].clone());
        let g = mb.transpose().mul(&mb);
        let c = g.inverse()?.mul_vec(&mb.transpose().mul_vec(&self.flat(m)));
        if mb.mul_vec(&c) != self.flat(m) {
            return Err(Error::InvalidContext("matrix outside the span of the basis".into()));
        }
        Ok(Multivector::from_components(&self.basis, &c))
    }

    /// Context with brackets from matrix commutators and the compact
    /// real form `X ↦ −X̄ᵀ` as conjugation.
    pub fn builder(&self, name: &str) -> Result<ContextBuilder> {
        let d = self.matrices.len();
        let mut b = ContextBuilder::new(name, self.basis.clone());
        for i in 0..d {
            for j in i + 1..d {
                let (x, y) = (&self.matrices[i], &self.matrices[j]);
                let comm = x.mul(y).sub(&y.mul(x));
                if !comm.is_zero() {
                    b = b.bracket(i, j, self.decompose(&comm)?);
                }
            }
        }
        let mut conj = Matrix::zeros(d, d);
        for (k, m) in self.matrices.iter().enumerate() {
            let image = self.decompose(&m.conj().transpose().scale(&Scalar::from_int(-1)))?;
            for (r, v) in image.components().into_iter().enumerate() {
                conj.set(r, k, v);
            }
        }
        Ok(b.conjugation(conj))
    }

    /// Image of a multivector in another matrix algebra of the same size.
    pub fn push_to(&self, x: &Multivector, target: &MatrixAlgebra) -> Result<Multivector> {
        let images = self.matrices.iter().map(|m| target.decompose(m)).collect::<Result<Vec<_>>>()?;
        Ok(x.transform(&images))
    }

    pub fn vector(&self, name: &str) -> Multivector {
        Multivector::named(&self.basis, name).expect("known basis name")
    }
}

fn elementary(n: usize, i: usize, j: usize) -> Matrix {
    let mut m = Matrix::zeros(n, n);
    m.set(i, j, Scalar::one());
    m
}

fn diagonal(entries: &[i64]) -> Matrix {
    let n = entries.len();
    Matrix::from_fn(n, n, |i, j| if i == j { Scalar::from_int(entries[i]) } else { Scalar::zero() })
}

/// `gl(n)` with basis `E_ij` in row-major order.
pub fn gl_algebra(n: usize) -> Result<MatrixAlgebra> {
    if n < 2 {
        return Err(Error::InvalidContext("gl(n) needs n >= 2".into()));
    }
    let mut els = Vec::new();
    for i in 0..n {
        for j in 0..n {
            els.push((e_name(i + 1, j + 1), elementary(n, i, j)));
        }
    }
    MatrixAlgebra::new(n, els)
}

pub fn gl_context(n: usize) -> Result<FrameContext> {
    gl_algebra(n)?.builder(&format!("gl{n}"))?.build()
}

/// `sl(n)` with the given diagonal Cartan elements, then `E_ij` for `i < j`,
/// then `E_ij` for `i > j`.
pub fn sl_algebra(n: usize, cartan: &[(&str, Vec<i64>)]) -> Result<MatrixAlgebra> {
    let mut els: Vec<(String, Matrix)> = cartan.iter().map(|(s, d)| (s.to_string(), diagonal(d))).collect();
    for i in 0..n {
        for j in i + 1..n {
            els.push((e_name(i + 1, j + 1), elementary(n, i, j)));
        }
    }
    for i in 0..n {
        for j in 0..i {
            els.push((e_name(i + 1, j + 1), elementary(n, i, j)));
        }
    }
    MatrixAlgebra::new(n, els)
}

/// `sl(3)` with `A = E11 − E33` and `B = E11 + E33 − 2E22`.
pub fn su3_algebra() -> MatrixAlgebra {
    sl_algebra(3, &[("A", vec![1, 0, -1]), ("B", vec![1, -2, 1])]).expect("fixed basis")
}

/// `sl(2)` with `H = E11 − E22`.
pub fn sl2_algebra() -> MatrixAlgebra {
    sl_algebra(2, &[("H", vec![1, -1])]).expect("fixed basis")
}

/// `sl(5)` with `A1 = E11 − E55`, `A2 = E22 − E44`, `B1 = E11 + E55 − 2E33`,
/// `B2 = E22 + E44 − 2E33`.
pub fn su5_algebra() -> MatrixAlgebra {
    sl_algebra(
        5,
        &[("A1", vec![1, 0, 0, 0, -1]), ("A2", vec![0, 1, 0, -1, 0]), ("B1", vec![1, 0, -2, 0, 1]), ("B2", vec![0, 1, -2, 1, 0])],
    )
    .expect("fixed basis")
}

/// `b = 1 + ia`.
pub fn b_param(a: &Scalar) -> Scalar {
    Scalar::one() + Scalar::i() * a
}

/// The Cartan factor `bE_kk − b̄E_ll − (b − b̄)E_mm` in `gl(n)`.
pub fn cartan_factor_gl(gl: &MatrixAlgebra, a: &Scalar, k: usize, m: usize, l: usize) -> Multivector {
    let b = b_param(a);
    let bb = b.conj();
    gl.vector(&e_name(k, k))
        .scale(&b)
        .sub(&gl.vector(&e_name(l, l)).scale(&bb))
        .sub(&gl.vector(&e_name(m, m)).scale(&(&b - &bb)))
}

/// Effective parameter: `a = 0` is replaced by `1` in the operators
/// unless `strict` is set, in which case it is an error.
fn operator_parameter(a: &Scalar, strict: bool) -> Result<Scalar> {
    if a.is_zero() {
        if strict {
            return Err(Error::DegenerateParameter("a = 0 makes I singular on the Cartan part".into()));
        }
        return Ok(Scalar::one());
    }
    Ok(a.clone())
}

/// `I` on an `sl(n)` algebra: `±i` on `E_ij` for `i ≶ j`, and on each Cartan
/// pair `(A_k, B_k)`: `I(A_k) = −aB_k`, `I(B_k) = A_k/a`.
fn sl_complex_structure(alg: &MatrixAlgebra, pairs: &[(&str, &str)], a: &Scalar) -> Result<LinearOperator> {
    let basis = &alg.basis;
    let names = basis.vector_names();
    let mut images = Vec::new();
    for (k, name) in names.iter().enumerate() {
        let e = Multivector::basis_element(basis, k);
        let img = if let Some((_, bn)) = pairs.iter().find(|(an, _)| an == name) {
            alg.vector(bn).scale(&-a)
        } else if let Some((an, _)) = pairs.iter().find(|(_, bn)| bn == name) {
            alg.vector(an).scale(&a.inv()?)
        } else {
            let digits: Vec<u32> = name[1..].chars().filter_map(|c| c.to_digit(10)).collect();
            if digits[0] < digits[1] {
                e.scale(&Scalar::i())
            } else {
                e.scale(&-Scalar::i())
            }
        };
        images.push(img);
    }
    Ok(LinearOperator::from_images(basis, &images))
}

/// `su(3)` with the complex structure `I(a)` and the completion of `J` fixed
/// by `J(A + iaB) = 2E31`, `J(E12) = E32`, `J² = −1` and commuting with the
/// conjugation; `K = IJ`.
pub fn su3_structure(a: &Scalar, strict: bool) -> Result<FrameContext> {
    let alg = su3_algebra();
    let ao = operator_parameter(a, strict)?;
    let i_op = sl_complex_structure(&alg, &[("A", "B")], &ao)?;
    let v = |s: &str| alg.vector(s);
    let ia_inv = (Scalar::i() * &ao).inv()?;
    let images = [
        ("A", v("E31").add(&v("E13"))),
        ("B", v("E31").sub(&v("E13")).scale(&ia_inv)),
        ("E13", v("A").sub(&v("B").scale(&(Scalar::i() * &ao))).scale(&Scalar::ratio(-1, 2))),
        ("E31", v("A").add(&v("B").scale(&(Scalar::i() * &ao))).scale(&Scalar::ratio(-1, 2))),
        ("E12", v("E32")),
        ("E32", v("E12").neg()),
        ("E23", v("E21").neg()),
        ("E21", v("E23")),
    ];
    let imgs: Vec<Multivector> = alg
        .basis
        .vector_names()
        .iter()
        .map(|n| images.iter().find(|(k, _)| k == n).expect("all names covered").1.clone())
        .collect();
    let j_op = LinearOperator::from_images(&alg.basis, &imgs);
    let k_op = i_op.compose(&j_op);
    alg.builder("su3")?.var(&param_a()).structure(0, i_op).structure(1, j_op).structure(2, k_op).build()
}

/// `P = ½(A + iaB)∧E13 + E12∧E23` in the `su(3)` frame.
pub fn su3_bivector(a: &Scalar) -> Multivector {
    let alg = su3_algebra();
    let t = alg.vector("A").add(&alg.vector("B").scale(&(Scalar::i() * a)));
    t.wedge(&alg.vector("E13"))
        .expect("same basis")
        .scale(&Scalar::ratio(1, 2))
        .add(&alg.vector("E12").wedge(&alg.vector("E23")).expect("same basis"))
}

/// `2P = (bE11 − b̄E33 − (b − b̄)E22)∧E13 + 2E12∧E23` in `gl(3)`.
pub fn su3_bivector_gl(gl: &MatrixAlgebra, a: &Scalar) -> Multivector {
    let cart = cartan_factor_gl(gl, a, 1, 2, 3);
    cart.wedge(&gl.vector("E13"))
        .expect("same basis")
        .add(&gl.vector("E12").wedge(&gl.vector("E23")).expect("same basis").scale_int(2))
        .scale(&Scalar::ratio(1, 2))
}

/// `su(5)` with `I(a)`.
pub fn su5_structure(a: &Scalar, strict: bool) -> Result<FrameContext> {
    let alg = su5_algebra();
    let ao = operator_parameter(a, strict)?;
    let i_op = sl_complex_structure(&alg, &[("A1", "B1"), ("A2", "B2")], &ao)?;
    alg.builder("su5")?.var(&param_a()).structure(0, i_op).build()
}

/// `P₁` and `P₂` in the `su(5)` frame:
/// `P₁ = T₁∧E15 + 2(E12∧E25 + E13∧E35 + E14∧E45)`, `P₂ = T₂∧E24 + 2E23∧E34`
/// with `T_k = A_k + iaB_k`.
pub fn su5_bivectors(a: &Scalar) -> (Multivector, Multivector) {
    let alg = su5_algebra();
    let v = |s: &str| alg.vector(s);
    let w = |x: &str, y: &str| v(x).wedge(&v(y)).expect("same basis");
    let ia = Scalar::i() * a;
    let t1 = v("A1").add(&v("B1").scale(&ia));
    let t2 = v("A2").add(&v("B2").scale(&ia));
    let p1 = t1
        .wedge(&v("E15"))
        .expect("same basis")
        .add(&w("E12", "E25").add(&w("E13", "E35")).add(&w("E14", "E45")).scale_int(2));
    let p2 = t2.wedge(&v("E24")).expect("same basis").add(&w("E23", "E34").scale_int(2));
    (p1, p2)
}

/// The printed `P₁`, `P₂` over `gl(5)`.
pub fn su5_bivectors_gl(gl: &MatrixAlgebra, a: &Scalar) -> (Multivector, Multivector) {
    let v = |s: &str| gl.vector(s);
    let w = |x: &str, y: &str| v(x).wedge(&v(y)).expect("same basis");
    let p1 = cartan_factor_gl(gl, a, 1, 3, 5)
        .wedge(&v("E15"))
        .expect("same basis")
        .add(&w("E12", "E25").add(&w("E13", "E35")).add(&w("E14", "E45")).scale_int(2));
    let p2 = cartan_factor_gl(gl, a, 2, 3, 4).wedge(&v("E24")).expect("same basis").add(&w("E23", "E34").scale_int(2));
    (p1, p2)
}

/// Relabels `E_ij ↦ E_{map[i] map[j]}` from `gl(k)` into a larger `gl(n)`
/// (1-based indices in `map`).
pub fn relabel(x: &Multivector, from: &MatrixAlgebra, to: &MatrixAlgebra, map: &[usize]) -> Result<Multivector> {
    let images = (0..from.n)
        .flat_map(|i| (0..from.n).map(move |j| (i, j)))
        .map(|(i, j)| Multivector::named(&to.basis, &e_name(map[i], map[j])))
        .collect::<Result<Vec<_>>>()?;
    Ok(x.transform(&images))
}

/// Positive roots and a candidate stem of a type-A root system, as integer
/// vectors in `ℤ^{rank+1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StemData {
    pub roots: Vec<Vec<i64>>,
    pub stem: Vec<Vec<i64>>,
}

/// `e_i − e_j` for `i < j`.
pub fn root(dim: usize, i: usize, j: usize) -> Vec<i64> {
    let mut v = vec![0; dim];
    v[i - 1] += 1;
    v[j - 1] -= 1;
    v
}

/// Positive roots of `A_rank`.
pub fn positive_roots_a(rank: usize) -> Vec<Vec<i64>> {
    let d = rank + 1;
    let mut out = Vec::new();
    for i in 1..=d {
        for j in i + 1..=d {
            out.push(root(d, i, j));
        }
    }
    out
}

/// The nested stem `θ_k = e_k − e_{n+1−k}` of `A_{n−1}`.
pub fn standard_stem(rank: usize) -> StemData {
    let d = rank + 1;
    let stem = (1..=d / 2).map(|k| root(d, k, d + 1 - k)).collect();
    StemData { roots: positive_roots_a(rank), stem }
}

fn is_type_a_root(v: &[i64]) -> bool {
    let plus = v.iter().filter(|&&x| x == 1).count();
    let minus = v.iter().filter(|&&x| x == -1).count();
    let zero = v.iter().filter(|&&x| x == 0).count();
    plus == 1 && minus == 1 && zero == v.len() - 2
}

/// `Φ_γ = {α ∈ R : γ − α ∈ R}`.
pub fn phi(roots: &[Vec<i64>], gamma: &[i64]) -> Vec<Vec<i64>> {
    let set: BTreeSet<&Vec<i64>> = roots.iter().collect();
    roots
        .iter()
        .filter(|a| {
            let diff: Vec<i64> = gamma.iter().zip(a.iter()).map(|(g, x)| g - x).collect();
            set.contains(&diff)
        })
        .cloned()
        .collect()
}

fn fmt_root(v: &[i64]) -> String {
    let i = v.iter().position(|&x| x == 1).map(|p| p + 1).unwrap_or(0);
    let j = v.iter().position(|&x| x == -1).map(|p| p + 1).unwrap_or(0);
    format!("e{i}-e{j}")
}

/// Checks `R = Γ ∪ ⋃_γ Φ_γ` as a disjoint union.
pub fn stem_validate(data: &StemData, check_id: &str) -> Result<Report> {
    let dim = data.roots.first().map(|r| r.len()).ok_or_else(|| Error::MalformedRootSystem("no roots".into()))?;
    for r in data.roots.iter().chain(data.stem.iter()) {
        if r.len() != dim || !is_type_a_root(r) {
            return Err(Error::MalformedRootSystem(format!("{r:?} is not a root of type A")));
        }
    }
    let all: BTreeSet<&Vec<i64>> = data.roots.iter().collect();
    if all.len() != data.roots.len() {
        return Err(Error::MalformedRootSystem("repeated root".into()));
    }
    for g in &data.stem {
        if !all.contains(g) {
            return Err(Error::MalformedRootSystem(format!("stem element {} is not a positive root", fmt_root(g))));
        }
    }
    let mut pieces: Vec<Vec<i64>> = data.stem.clone();
    let mut parts = vec![format!("G = {{{}}}", data.stem.iter().map(|r| fmt_root(r)).collect::<Vec<_>>().join(", "))];
    for g in &data.stem {
        let ph = phi(&data.roots, g);
        parts.push(format!("Phi({}) = {{{}}}", fmt_root(g), ph.iter().map(|r| fmt_root(r)).collect::<Vec<_>>().join(", ")));
        pieces.extend(ph);
    }
    let covered: BTreeSet<&Vec<i64>> = pieces.iter().collect();
    let overlap = covered.len() != pieces.len();
    let missing: Vec<String> = data.roots.iter().filter(|r| !covered.contains(r)).map(|r| fmt_root(r)).collect();
    let ok = !overlap && missing.is_empty();
    Ok(Report::holds(
        check_id,
        ok,
        parts.join("; "),
        format!("R has {} roots", data.roots.len()),
        || {
            if overlap {
                "pieces overlap".to_string()
            } else {
                format!("uncovered roots {}", missing.join(", "))
            }
        },
    ))
}

fn bracket_both(ctx: &FrameContext, p: &Multivector, q: &Multivector, id: &str, want: &Multivector) -> Result<Vec<Report>> {
    Ok(vec![
        Report::identity(&format!("{id}.coordinate"), &schouten_coordinate(ctx, p, q)?, want),
        Report::identity(&format!("{id}.leibniz"), &schouten_leibniz(ctx, p, q)?, want),
    ])
}

fn quaternionic_report(ctx: &FrameContext, id: &str) -> Result<Report> {
    let (i, j, k) = (ctx.i_op()?, ctx.j_op()?, ctx.k_op()?);
    let minus = LinearOperator::identity(ctx.basis()).scale(&-Scalar::one());
    let checks = [
        ("I^2", i.compose(i), minus.clone()),
        ("J^2", j.compose(j), minus.clone()),
        ("K^2", k.compose(k), minus),
        ("IJ", i.compose(j), k.clone()),
        ("JI", j.compose(i), k.scale(&-Scalar::one())),
    ];
    let bad = checks.iter().find(|(_, x, y)| x != y).map(|(n, _, _)| n.to_string());
    Ok(Report::holds(id, bad.is_none(), "I^2, J^2, K^2, IJ, JI".into(), "-1, -1, -1, K, -K".into(), || {
        format!("{} fails", bad.clone().unwrap_or_default())
    }))
}

/// The `su(3)` scenario at parameter `a`: the printed `gl(3)` brackets,
/// the quaternionic identities, the `gl(3)` form of `P`, type purity and
/// `[P,P] = 0`.
pub fn su3_checks(a: &Scalar) -> Result<Vec<Report>> {
    let gl = gl_algebra(3)?;
    let glc = gl.builder("gl3")?.var(&param_a()).build()?;
    let v = |s: &str| gl.vector(s);
    let q = v("E12").wedge(&v("E23"))?;
    let triple = Multivector::wedge_all(&gl.basis, &[v("E12"), v("E13"), v("E23")])?;
    let mut out = bracket_both(&glc, &q, &q, "su3.printed.e12e23_e12e23", &triple.scale_int(-2))?;
    let c = cartan_factor_gl(&gl, a, 1, 2, 3).wedge(&v("E13"))?;
    out.extend(bracket_both(&glc, &c, &q, "su3.printed.cartan_e13_e12e23", &triple.scale_int(2))?);

    let ctx = su3_structure(a, false)?;
    out.push(quaternionic_report(&ctx, "su3.quaternionic")?);
    let p = su3_bivector(a);
    out.push(Report::identity("su3.gl_form", &su3_algebra().push_to(&p, &gl)?, &su3_bivector_gl(&gl, a)));
    out.extend(is_complex_poisson(&ctx, &p, ctx.i_op()?, "su3.poisson"));
    out.push(Report::identity("su3.poisson.bracket_leibniz", &schouten_leibniz(&ctx, &p, &p)?, &Multivector::zero(ctx.basis())));
    Ok(out)
}

/// The `su(5)` scenario: `[P₁,P₁] = [P₂,P₂] = [P₁,P₂] = 0`, type purity of
/// both, the printed `gl(5)` forms and `P₂` as twice the relabelled `su(3)`
/// bivector.
pub fn su5_checks(a: &Scalar) -> Result<Vec<Report>> {
    let ctx = su5_structure(a, false)?;
    let i = ctx.i_op()?;
    let (p1, p2) = su5_bivectors(a);
    let zero = Multivector::zero(ctx.basis());
    let mut out = Vec::new();
    for (id, x, y) in [("su5.bracket.p1_p1", &p1, &p1), ("su5.bracket.p2_p2", &p2, &p2), ("su5.bracket.p1_p2", &p1, &p2)] {
        out.push(Report::identity(id, &schouten_coordinate(&ctx, x, y)?, &zero));
    }
    out.push(Report::identity("su5.bracket.p1_p2.leibniz", &schouten_leibniz(&ctx, &p1, &p2)?, &zero));
    for (id, x) in [("su5.type_purity.p1", &p1), ("su5.type_purity.p2", &p2)] {
        out.push(Report::identity(id, &type_project(x, i, 2, 0)?, x));
    }
    let gl5 = gl_algebra(5)?;
    let (g1, g2) = su5_bivectors_gl(&gl5, a);
    let alg = su5_algebra();
    out.push(Report::identity("su5.gl_form.p1", &alg.push_to(&p1, &gl5)?, &g1));
    out.push(Report::identity("su5.gl_form.p2", &alg.push_to(&p2, &gl5)?, &g2));
    let gl3 = gl_algebra(3)?;
    let moved = relabel(&su3_bivector_gl(&gl3, a), &gl3, &gl5, &[2, 3, 4])?.scale_int(2);
    out.push(Report::identity("su5.p2_from_su3", &g2, &moved));
    Ok(out)
}

/// `P + εT∧E12` with `T = A + iaB` and a formal real `ε`. The bracket
/// picks up `3ε(1 − ia)A∧E12∧E13 + …`, so `[P,P] ≠ 0`. Adding `εE12∧E13`
/// instead would not do: that bivector commutes with `P`.
pub fn perturbed_su3_bivector(a: &Scalar) -> Multivector {
    let alg = su3_algebra();
    let eps = Scalar::var(&Var::real("eps"));
    let t = alg.vector("A").add(&alg.vector("B").scale(&(Scalar::i() * a)));
    su3_bivector(a).add(&t.wedge(&alg.vector("E12")).expect("same basis").scale(&eps))
}

/// The duality scenario: `∂(P⁻¹) = 0` and `[P,P] = 0` for the `su(3)`
/// family, both nonzero after the `ε`-perturbation.
pub fn duality_checks(a: &Scalar) -> Result<Vec<Report>> {
    let ctx = su3_structure(a, false)?;
    let i = ctx.i_op()?;
    let mut out = Vec::new();
    for (name, p, vanish) in [("family", su3_bivector(a), true), ("perturbed", perturbed_su3_bivector(a), false)] {
        let prefix = format!("duality.{name}");
        out.push(check_duality(&ctx, &p, i, &format!("{prefix}.equivalence"))?);
        let omega = invert_bivector(&p, Some(i))?;
        let del = ctx.del_operator(i, &omega, Del::Holomorphic)?;
        let pp = schouten_coordinate(&ctx, &p, &p)?;
        if vanish {
            out.push(Report::identity(&format!("{prefix}.del_omega"), &del, &FormField::zero(ctx.basis())));
            out.push(Report::identity(&format!("{prefix}.bracket"), &pp, &Multivector::zero(ctx.basis())));
        } else {
            out.push(Report::holds(&format!("{prefix}.del_omega"), !del.is_zero(), format!("del(P^-1) = {del}"), "nonzero".into(), || {
                "del(P^-1) vanishes".into()
            }));
            out.push(Report::holds(&format!("{prefix}.bracket"), !pp.is_zero(), format!("[P,P] = {pp}"), "nonzero".into(), || {
                "[P,P] vanishes".into()
            }));
        }
    }
    Ok(out)
}

/// Stems of `A₂` and `A₄`, and the empty stem as a negative control.
pub fn stem_checks() -> Result<Vec<Report>> {
    let a2 = standard_stem(2);
    let mut out = vec![stem_validate(&a2, "stem.a2")?, stem_validate(&standard_stem(4), "stem.a4")?];
    let empty = StemData { roots: a2.roots.clone(), stem: vec![] };
    let control = stem_validate(&empty, "stem.control_empty")?;
    out.push(Report::holds("stem.control_empty", !control.passed(), control.lhs, "rejected".into(), || {
        "the empty set was accepted as a stem".into()
    }));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gl3_brackets() {
        let ctx = gl_context(3).unwrap();
        let v = |s: &str| ctx.vector(s).unwrap();
        assert_eq!(ctx.lie_bracket(&v("E12"), &v("E23")).unwrap(), v("E13"));
        assert_eq!(ctx.lie_bracket(&v("E12"), &v("E21")).unwrap(), v("E11").sub(&v("E22")));
        assert!(ctx.lie_bracket(&v("E12"), &v("E12")).unwrap().is_zero());
    }

    #[test]
    fn printed_su3_brackets() {
        let gl = gl_algebra(3).unwrap();
        let ctx = gl.builder("gl3").unwrap().build().unwrap();
        let v = |s: &str| gl.vector(s);
        let q = v("E12").wedge(&v("E23")).unwrap();
        let triple = v("E12").wedge(&v("E13")).unwrap().wedge(&v("E23")).unwrap();
        assert_eq!(schouten_coordinate(&ctx, &q, &q).unwrap(), triple.scale_int(-2));
        let a = Scalar::var(&param_a());
        let c = cartan_factor_gl(&gl, &a, 1, 2, 3).wedge(&v("E13")).unwrap();
        assert_eq!(schouten_coordinate(&ctx, &c, &q).unwrap(), triple.scale_int(2));
        assert_eq!(schouten_leibniz(&ctx, &c, &q).unwrap(), triple.scale_int(2));
    }

    #[test]
    fn su3_structure_and_bivector() {
        let a = Scalar::var(&param_a());
        let ctx = su3_structure(&a, true).unwrap();
        let p = su3_bivector(&a);
        assert!(schouten_coordinate(&ctx, &p, &p).unwrap().is_zero());
        let gl = gl_algebra(3).unwrap();
        assert_eq!(su3_algebra().push_to(&p, &gl).unwrap(), su3_bivector_gl(&gl, &a));
        assert!(matches!(su3_structure(&Scalar::zero(), true), Err(Error::DegenerateParameter(_))));
        assert!(su3_structure(&Scalar::zero(), false).is_ok());
    }

    #[test]
    fn stems() {
        let a2 = standard_stem(2);
        assert_eq!(phi(&a2.roots, &a2.stem[0]), vec![root(3, 1, 2), root(3, 2, 3)]);
        assert!(stem_validate(&a2, "a2").unwrap().passed());
        assert!(stem_validate(&standard_stem(4), "a4").unwrap().passed());
        let empty = StemData { roots: a2.roots.clone(), stem: vec![] };
        assert!(!stem_validate(&empty, "empty").unwrap().passed());
        assert!(stem_checks().unwrap().iter().all(Report::passed));
    }

    #[test]
    fn su3_scenario_formal_and_degenerate() {
        let a = Scalar::var(&param_a());
        let rs = su3_checks(&a).unwrap();
        assert!(rs.iter().all(Report::passed), "{rs:#?}");
        let rs = su3_checks(&Scalar::zero()).unwrap();
        let failed: Vec<&str> = rs.iter().filter(|r| !r.passed()).map(|r| r.check_id.as_str()).collect();
        assert_eq!(failed, vec!["su3.poisson.type_purity"]);
    }

    #[test]
    fn e12_e13_perturbation_stays_poisson() {
        let a = Scalar::var(&param_a());
        let ctx = su3_structure(&a, false).unwrap();
        let alg = su3_algebra();
        let eps = Scalar::var(&Var::real("eps"));
        let p = su3_bivector(&a).add(&alg.vector("E12").wedge(&alg.vector("E13")).unwrap().scale(&eps));
        assert!(schouten_coordinate(&ctx, &p, &p).unwrap().is_zero());
        assert!(schouten_leibniz(&ctx, &p, &p).unwrap().is_zero());
    }

    #[test]
    fn duality_scenario() {
        let rs = duality_checks(&Scalar::var(&param_a())).unwrap();
        assert!(rs.iter().all(Report::passed), "{rs:#?}");
    }
}
