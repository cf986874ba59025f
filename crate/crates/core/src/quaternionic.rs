//! The sphere of complex structures `aI + bJ + cK` on flat `ℍ^m`,
//! λ-frames, the HKT bivector and the `(2,0)`-projection identity.

use std::sync::Arc;

use crate::context::{ContextBuilder, FrameContext};
use crate::error::{Error, Result};
use crate::exterior::{
    invert_form, pair, type_project, BasisSpec, FormField, LinearOperator, Multivector,
};
use crate::linalg::Matrix;
use crate::report::Report;
use crate::scalar::{RootRelation, Scalar, Var};

/// The paired indeterminates `λ, λ̄`.
pub fn lam_vars() -> (Var, Var) {
    Var::pair("lam", "lamb")
}

/// `s² = 1 + λλ̄`.
pub fn s_relation() -> Arc<RootRelation> {
    let (l, lb) = lam_vars();
    RootRelation::new("s", &(Scalar::one() + Scalar::var(&l) * Scalar::var(&lb))).expect("valid radicand")
}

/// Unit vector `(a, b, c)` with rational-function entries.
#[derive(Clone, Debug, PartialEq)]
pub struct SpherePoint {
    pub a: Scalar,
    pub b: Scalar,
    pub c: Scalar,
}

impl SpherePoint {
    pub fn new(a: Scalar, b: Scalar, c: Scalar) -> Self {
        SpherePoint { a, b, c }
    }

    pub fn norm_sqr(&self) -> Scalar {
        &(&self.a * &self.a + &self.b * &self.b) + &(&self.c * &self.c)
    }

    pub fn dot(&self, o: &SpherePoint) -> Scalar {
        &(&self.a * &o.a + &self.b * &o.b) + &(&self.c * &o.c)
    }

    pub fn cross(&self, o: &SpherePoint) -> SpherePoint {
        SpherePoint {
            a: &self.b * &o.c - &self.c * &o.b,
            b: &self.c * &o.a - &self.a * &o.c,
            c: &self.a * &o.b - &self.b * &o.a,
        }
    }

    pub fn substitute(&self, lam: &Scalar) -> Result<SpherePoint> {
        let (l, lb) = lam_vars();
        let map = [(l, lam.clone()), (lb, lam.conj())].into_iter().collect();
        Ok(SpherePoint {
            a: self.a.substitute(&map, None)?,
            b: self.b.substitute(&map, None)?,
            c: self.c.substitute(&map, None)?,
        })
    }

    pub fn components(&self) -> [Scalar; 3] {
        [self.a.clone(), self.b.clone(), self.c.clone()]
    }
}

impl std::fmt::Display for SpherePoint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {}, {})", self.a, self.b, self.c)
    }
}

impl crate::report::Witness for SpherePoint {
    fn difference(&self, other: &Self) -> Option<String> {
        let names = ["a", "b", "c"];
        self.components()
            .iter()
            .zip(other.components().iter())
            .zip(names)
            .find_map(|((x, y), n)| (x != y).then(|| format!("component {n} differs by {}", x - y)))
    }
}

fn norm(lam: &Scalar) -> Scalar {
    Scalar::one() + lam * &lam.conj()
}

/// `St(λ) = ((|λ|²−1), i(λ̄−λ), −(λ+λ̄)) / (1+|λ|²)`.
pub fn stereographic(lam: &Scalar) -> Result<SpherePoint> {
    let lb = lam.conj();
    let n = norm(lam).inv()?;
    Ok(SpherePoint {
        a: (lam * &lb - Scalar::one()) * &n,
        b: Scalar::i() * (&lb - lam) * &n,
        c: -(lam + &lb) * &n,
    })
}

/// The point `λ = ∞` of the second chart.
pub fn stereographic_at_infinity() -> SpherePoint {
    SpherePoint::new(Scalar::one(), Scalar::zero(), Scalar::zero())
}

/// The point whose structure has the λ-frame as `(1,0)` basis:
/// `St(λ)` with the third component reversed.
pub fn frame_point(lam: &Scalar) -> Result<SpherePoint> {
    let p = stereographic(lam)?;
    Ok(SpherePoint { c: -p.c, ..p })
}

/// `𝐛 = (i(λ̄−λ), 1 + ½(λ²+λ̄²), (i/2)(λ²−λ̄²)) / (1+|λ|²)`.
pub fn printed_b(lam: &Scalar) -> Result<SpherePoint> {
    let lb = lam.conj();
    let n = norm(lam).inv()?;
    let half = Scalar::ratio(1, 2);
    let sq = lam * lam;
    let sqb = &lb * &lb;
    Ok(SpherePoint {
        a: Scalar::i() * (&lb - lam) * &n,
        b: (Scalar::one() + &half * &(&sq + &sqb)) * &n,
        c: Scalar::i() * &half * (&sq - &sqb) * &n,
    })
}

/// `𝐜 = (−(λ̄+λ), (i/2)(λ²−λ̄²), −1 + ½(λ²+λ̄²)) / (1+|λ|²)` as printed.
pub fn printed_c(lam: &Scalar) -> Result<SpherePoint> {
    let lb = lam.conj();
    let n = norm(lam).inv()?;
    let half = Scalar::ratio(1, 2);
    let sq = lam * lam;
    let sqb = &lb * &lb;
    Ok(SpherePoint {
        a: -(&lb + lam) * &n,
        b: Scalar::i() * &half * (&sq - &sqb) * &n,
        c: (Scalar::from_int(-1) + &half * &(&sq + &sqb)) * &n,
    })
}

/// `𝐜` with the sign of the middle component reversed, equal to
/// `frame_point × 𝐛`.
pub fn corrected_c(lam: &Scalar) -> Result<SpherePoint> {
    let c = printed_c(lam)?;
    Ok(SpherePoint { b: -c.b, ..c })
}

/// `(𝐚, 𝐛, 𝐜)` as the columns of a 3×3 matrix.
pub fn frame_matrix(a: &SpherePoint, b: &SpherePoint, c: &SpherePoint) -> Matrix {
    let cols = [a.components(), b.components(), c.components()];
    Matrix::from_fn(3, 3, |i, j| cols[j][i].clone())
}

/// Flat `ℍ^m` with the quaternionic-Hermitian frame `Z_i, W_i, Z̄_i, W̄_i`,
/// `I = diag(i, −i)`, `J(Z) = W̄`, `J(W) = −Z̄`, `K = IJ` and
/// `g(Z_i, Z̄_i) = g(W_i, W̄_i) = ½`. With `lambda` the context also carries
/// `λ, λ̄` and the root `s`.
pub fn quaternionic_context(m: usize, lambda: bool) -> Result<FrameContext> {
    if m == 0 {
        return Err(Error::InvalidContext("m must be positive".into()));
    }
    let mut vecs = Vec::new();
    let mut covs = Vec::new();
    for bar in ["", "b"] {
        for i in 1..=m {
            vecs.push(format!("Z{bar}{i}"));
            vecs.push(format!("W{bar}{i}"));
            covs.push(format!("sigma{bar}{i}"));
            covs.push(format!("delta{bar}{i}"));
        }
    }
    let basis = BasisSpec::new(vecs, covs)?;
    let n = 4 * m;
    let h = 2 * m;
    let e = |k: usize| Multivector::basis_element(&basis, k);
    let (zi, wi, zbi, wbi) = (|i: usize| 2 * i, |i: usize| 2 * i + 1, |i: usize| h + 2 * i, |i: usize| h + 2 * i + 1);
    let i_op = LinearOperator::from_images(
        &basis,
        &(0..n).map(|k| e(k).scale(&if k < h { Scalar::i() } else { -Scalar::i() })).collect::<Vec<_>>(),
    );
    let mut j_images = vec![Multivector::zero(&basis); n];
    let mut conj = Matrix::zeros(n, n);
    let mut g = Matrix::zeros(n, n);
    for i in 0..m {
        j_images[zi(i)] = e(wbi(i));
        j_images[wi(i)] = e(zbi(i)).neg();
        j_images[zbi(i)] = e(wi(i));
        j_images[wbi(i)] = e(zi(i)).neg();
        for (x, y) in [(zi(i), zbi(i)), (wi(i), wbi(i))] {
            conj.set(x, y, Scalar::one());
            conj.set(y, x, Scalar::one());
            g.set(x, y, Scalar::ratio(1, 2));
            g.set(y, x, Scalar::ratio(1, 2));
        }
    }
    let j_op = LinearOperator::from_images(&basis, &j_images);
    let k_op = i_op.compose(&j_op);
    let mut b = ContextBuilder::new(&format!("flat{m}"), basis.clone())
        .conjugation(conj)
        .metric(g)
        .structure(0, i_op)
        .structure(1, j_op)
        .structure(2, k_op);
    if lambda {
        b = b.var_pair(&lam_vars()).root(&s_relation());
    }
    b.build()
}

/// `aI + bJ + cK`.
pub fn sphere_operator(ctx: &FrameContext, p: &SpherePoint) -> Result<LinearOperator> {
    let (i, j, k) = (ctx.i_op()?, ctx.j_op()?, ctx.k_op()?);
    Ok(i.scale(&p.a).add(&j.scale(&p.b)).add(&k.scale(&p.c)))
}

/// A quaternionic-Hermitian frame and its dual coframe.
#[derive(Clone, Debug, PartialEq)]
pub struct QuaternionicBasis {
    pub z: Vec<Multivector>,
    pub w: Vec<Multivector>,
    pub sigma: Vec<FormField>,
    pub delta: Vec<FormField>,
}

/// The frame `Z_i, W_i` of [`quaternionic_context`].
pub fn standard_basis(ctx: &FrameContext) -> Result<QuaternionicBasis> {
    let m = ctx.dim() / 4;
    let get = |f: &dyn Fn(usize) -> String| -> Result<Vec<Multivector>> { (1..=m).map(|i| ctx.vector(&f(i))).collect() };
    let getf = |f: &dyn Fn(usize) -> String| -> Result<Vec<FormField>> { (1..=m).map(|i| ctx.covector(&f(i))).collect() };
    Ok(QuaternionicBasis {
        z: get(&|i| format!("Z{i}"))?,
        w: get(&|i| format!("W{i}"))?,
        sigma: getf(&|i| format!("sigma{i}"))?,
        delta: getf(&|i| format!("delta{i}"))?,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct LambdaFrame {
    pub z: Vec<Multivector>,
    pub w: Vec<Multivector>,
    pub zb: Vec<Multivector>,
    pub wb: Vec<Multivector>,
    pub sigma: Vec<FormField>,
    pub delta: Vec<FormField>,
    pub sigmab: Vec<FormField>,
    pub deltab: Vec<FormField>,
}

impl LambdaFrame {
    pub fn m(&self) -> usize {
        self.z.len()
    }

    /// `Σ Z_i^λ∧W_i^λ`.
    pub fn sum_zw(&self) -> Result<Multivector> {
        sum_wedges(&self.z, &self.w)
    }

    /// `Σ (Z_i^λ∧Z̄_i^λ + W_i^λ∧W̄_i^λ)`.
    pub fn sum_hermitian(&self) -> Result<Multivector> {
        Ok(sum_wedges(&self.z, &self.zb)?.add(&sum_wedges(&self.w, &self.wb)?))
    }

    /// `Σ σ_i^λ∧δ_i^λ`.
    pub fn sum_sigma_delta(&self) -> Result<FormField> {
        sum_wedges(&self.sigma, &self.delta)
    }

    /// `Σ (σ_i^λ∧σ̄_i^λ + δ_i^λ∧δ̄_i^λ)`.
    pub fn sum_hermitian_forms(&self) -> Result<FormField> {
        Ok(sum_wedges(&self.sigma, &self.sigmab)?.add(&sum_wedges(&self.delta, &self.deltab)?))
    }
}

pub fn sum_wedges<K: crate::exterior::Kind>(
    xs: &[crate::exterior::Exterior<K>],
    ys: &[crate::exterior::Exterior<K>],
) -> Result<crate::exterior::Exterior<K>> {
    let basis = xs.first().map(|x| x.basis().clone()).ok_or_else(|| Error::InvalidContext("empty frame".into()))?;
    let mut acc = crate::exterior::Exterior::zero(&basis);
    for (x, y) in xs.iter().zip(ys) {
        acc = acc.add(&x.wedge(y)?);
    }
    Ok(acc)
}

/// `Z^λ = (λ̄Z − W̄)/s`, `W^λ = (λ̄W + Z̄)/s`, `σ^λ = (λσ − δ̄)/s`,
/// `δ^λ = (λδ + σ̄)/s` for the symbolic `λ` of `ctx`.
pub fn lambda_frame(ctx: &FrameContext, basis: &QuaternionicBasis) -> Result<LambdaFrame> {
    let j = ctx.j_op()?;
    let root = ctx.root().ok_or_else(|| Error::InvalidContext("context has no root s".into()))?;
    let (l, lb) = (Scalar::var(&ctx.var("lam")?), Scalar::var(&ctx.var("lamb")?));
    let sinv = Scalar::root(root).inv()?;
    let mut f = LambdaFrame {
        z: vec![],
        w: vec![],
        zb: vec![],
        wb: vec![],
        sigma: vec![],
        delta: vec![],
        sigmab: vec![],
        deltab: vec![],
    };
    for i in 0..basis.z.len() {
        let (z, w) = (&basis.z[i], &basis.w[i]);
        let (zb, wb) = (ctx.conj_vector(z)?, ctx.conj_vector(w)?);
        if j.apply(z)? != wb || j.apply(w)? != zb.neg() {
            return Err(Error::NotQuaternionicHermitian(format!("J(Z{0}) != W{0}bar or J(W{0}) != -Z{0}bar", i + 1)));
        }
        let (s, d) = (&basis.sigma[i], &basis.delta[i]);
        let (sb, db) = (ctx.conj_form(s)?, ctx.conj_form(d)?);
        let zl = z.scale(&lb).sub(&wb).scale(&sinv);
        let wl = w.scale(&lb).add(&zb).scale(&sinv);
        let sl = s.scale(&l).sub(&db).scale(&sinv);
        let dl = d.scale(&l).add(&sb).scale(&sinv);
        f.zb.push(ctx.conj_vector(&zl)?);
        f.wb.push(ctx.conj_vector(&wl)?);
        f.sigmab.push(ctx.conj_form(&sl)?);
        f.deltab.push(ctx.conj_form(&dl)?);
        f.z.push(zl);
        f.w.push(wl);
        f.sigma.push(sl);
        f.delta.push(dl);
    }
    Ok(f)
}

/// The bivector `ω⁻¹(α, β) = β(ω⁻¹(α))` with `i_{ω⁻¹(α)}ω = α`.
pub fn inverse_bivector(w: &FormField) -> Result<Multivector> {
    Ok(invert_form(w, None)?.neg())
}

/// `P = ¼(ω_J⁻¹ − iω_K⁻¹)`.
pub fn hkt_bivector(ctx: &FrameContext) -> Result<Multivector> {
    let wj = ctx.fundamental_form(ctx.j_op()?)?;
    let wk = ctx.fundamental_form(ctx.k_op()?)?;
    let pj = inverse_bivector(&wj)?;
    let pk = inverse_bivector(&wk)?;
    Ok(pj.sub(&pk.scale(&Scalar::i())).scale(&Scalar::ratio(1, 4)))
}

/// `P_I = −2iΣ(Z_i∧Z̄_i + W_i∧W̄_i)`.
pub fn p_i(ctx: &FrameContext) -> Result<Multivector> {
    let qb = standard_basis(ctx)?;
    let zb = qb.z.iter().map(|z| ctx.conj_vector(z)).collect::<Result<Vec<_>>>()?;
    let wb = qb.w.iter().map(|w| ctx.conj_vector(w)).collect::<Result<Vec<_>>>()?;
    Ok(sum_wedges(&qb.z, &zb)?.add(&sum_wedges(&qb.w, &wb)?).scale(&Scalar::from_int(-2).scale(&crate::GaussRat::i())))
}

/// The dual bivector of the fundamental form of `op`.
pub fn dual_bivector(ctx: &FrameContext, op: &LinearOperator) -> Result<Multivector> {
    invert_form(&ctx.fundamental_form(op)?, None)
}

/// Checks of the λ-frame: duality, `(1,0)` type for the frame point, the
/// inverse relations and the fundamental-form identities.
pub fn lambda_frame_checks(ctx: &FrameContext, prefix: &str) -> Result<Vec<Report>> {
    let qb = standard_basis(ctx)?;
    let f = lambda_frame(ctx, &qb)?;
    let lam = Scalar::var(&ctx.var("lam")?);
    let sinv = Scalar::root(ctx.root().expect("checked by lambda_frame")).inv()?;
    let ia = sphere_operator(ctx, &frame_point(&lam)?)?;
    let mut out = Vec::new();

    let mut dual_ok = true;
    let mut bad = String::new();
    for i in 0..f.m() {
        for j in 0..f.m() {
            let want = if i == j { Scalar::one() } else { Scalar::zero() };
            let checks = [
                (pair(&f.z[j], &f.sigma[i])?, want.clone(), "sigma(Z)"),
                (pair(&f.w[j], &f.delta[i])?, want.clone(), "delta(W)"),
                (pair(&f.w[j], &f.sigma[i])?, Scalar::zero(), "sigma(W)"),
                (pair(&f.z[j], &f.delta[i])?, Scalar::zero(), "delta(Z)"),
            ];
            for (got, want, what) in checks {
                if got != want {
                    dual_ok = false;
                    bad = format!("{what} at ({}, {}) is {got}", i + 1, j + 1);
                }
            }
        }
    }
    out.push(Report::holds(&format!("{prefix}.coframe_duality"), dual_ok, "<sigma_i, Z_j> etc.".into(), "delta_ij".into(), || bad));

    let mut typed = true;
    let mut witness = String::new();
    for x in f.z.iter().chain(f.w.iter()) {
        let p = type_project(x, &ia, 1, 0)?;
        if &p != x {
            typed = false;
            witness = format!("{x} has (0,1) part {}", x.sub(&p));
        }
    }
    out.push(Report::holds(
        &format!("{prefix}.frame_type_10"),
        typed,
        "pi10(Z^lam), pi10(W^lam)".into(),
        "Z^lam, W^lam".into(),
        || witness,
    ));

    // Z = (λZ^λ + W̄^λ)/s, W = (λW^λ − Z̄^λ)/s
    for i in 0..f.m() {
        let zi = f.z[i].scale(&lam).add(&f.wb[i]).scale(&sinv);
        let wi = f.w[i].scale(&lam).sub(&f.zb[i]).scale(&sinv);
        out.push(Report::identity(&format!("{prefix}.inverse_z{}", i + 1), &qb.z[i], &zi));
        out.push(Report::identity(&format!("{prefix}.inverse_w{}", i + 1), &qb.w[i], &wi));
    }

    let fa = ctx.fundamental_form(&ia)?;
    let fa_frame = f.sum_hermitian_forms()?.scale(&Scalar::ratio(1, 2).scale(&crate::GaussRat::i()));
    out.push(Report::identity(&format!("{prefix}.f_a_frame"), &fa, &fa_frame));
    let pa = invert_form(&fa, None)?;
    let pa_frame = f.sum_hermitian()?.scale(&Scalar::from_int(-2).scale(&crate::GaussRat::i()));
    out.push(Report::identity(&format!("{prefix}.p_a_dual"), &pa, &pa_frame));
    Ok(out)
}

/// Sphere-point checks: values of `St`, unit norm and the orthonormal
/// frame `(𝐚, 𝐛, 𝐜)`.
pub fn stereo_checks() -> Result<Vec<Report>> {
    let (l, _) = lam_vars();
    let lam = Scalar::var(&l);
    let mut out = Vec::new();
    let p = |a: i64, b: i64, c: i64| SpherePoint::new(Scalar::from_int(a), Scalar::from_int(b), Scalar::from_int(c));
    out.push(Report::identity("stereo.st_i", &stereographic(&Scalar::i())?, &p(0, 1, 0)));
    out.push(Report::identity("stereo.st_minus_1", &stereographic(&Scalar::from_int(-1))?, &p(0, 0, 1)));
    out.push(Report::identity("stereo.st_0", &stereographic(&Scalar::zero())?, &p(-1, 0, 0)));
    out.push(Report::identity("stereo.st_infinity", &stereographic_at_infinity(), &p(1, 0, 0)));
    let a = stereographic(&lam)?;
    out.push(Report::identity("stereo.unit_norm", &a.norm_sqr(), &Scalar::one()));
    let b = printed_b(&lam)?;
    out.push(Report::identity("stereo.b_unit_norm", &b.norm_sqr(), &Scalar::one()));
    let c = printed_c(&lam)?;
    let id = Matrix::identity(3);
    let printed = frame_matrix(&a, &b, &c);
    let gram = printed.transpose().mul(&printed);
    out.push(Report::printed("stereo.printed_frame_orthogonal", &gram, &id));
    let ap = frame_point(&lam)?;
    let cc = corrected_c(&lam)?;
    let corrected = frame_matrix(&ap, &b, &cc);
    out.push(Report::identity("stereo.frame_orthogonal", &corrected.transpose().mul(&corrected), &id));
    out.push(Report::identity("stereo.frame_determinant", &corrected.determinant(), &Scalar::one()));
    out.push(Report::identity("stereo.c_is_a_cross_b", &ap.cross(&b), &cc));
    out.push(Report::printed("stereo.printed_c", &cc, &c));
    Ok(out)
}

/// The three parts of the `(2,0)`-projection identity for `P_I`, plus
/// the `λ = 0` and `λ = i` specializations.
pub fn p20_identity(ctx: &FrameContext, prefix: &str) -> Result<Vec<Report>> {
    let qb = standard_basis(ctx)?;
    let f = lambda_frame(ctx, &qb)?;
    let (lv, lbv) = (ctx.var("lam")?, ctx.var("lamb")?);
    let lam = Scalar::var(&lv);
    let lamb = Scalar::var(&lbv);
    let n = Scalar::one() + &lam * &lamb;
    let ninv = n.inv()?;
    let mi2 = Scalar::from_int(-2) * Scalar::i();
    let mut out = Vec::new();

    let pi = p_i(ctx)?;
    let expansion = f
        .sum_hermitian()?
        .scale(&(&lam * &lamb - Scalar::one()))
        .add(&f.sum_zw()?.scale(&(Scalar::from_int(2) * &lam)))
        .sub(&sum_wedges(&f.zb, &f.wb)?.scale(&(Scalar::from_int(2) * &lamb)))
        .scale(&(&mi2 * &ninv));
    out.push(Report::identity(&format!("{prefix}.expansion"), &pi, &expansion));

    let ia = sphere_operator(ctx, &frame_point(&lam)?)?;
    let p20 = type_project(&pi, &ia, 2, 0)?;
    let factor = Scalar::from_int(-4) * Scalar::i() * &lam * &ninv;
    let zw = f.sum_zw()?;
    out.push(Report::identity(&format!("{prefix}.part20"), &p20, &zw.scale(&factor)));

    let ib = sphere_operator(ctx, &printed_b(&lam)?)?;
    let pb = dual_bivector(ctx, &ib)?;
    let pc_printed = dual_bivector(ctx, &sphere_operator(ctx, &printed_c(&lam)?)?)?;
    out.push(Report::printed(&format!("{prefix}.pb_plus_ipc"), &pb.add(&pc_printed.scale(&Scalar::i())), &zw));
    let pc = dual_bivector(ctx, &sphere_operator(ctx, &corrected_c(&lam)?)?)?;
    let combo = pb.sub(&pc.scale(&Scalar::i())).scale(&Scalar::ratio(1, 4));
    out.push(Report::identity(&format!("{prefix}.pb_minus_ipc_quarter"), &combo, &zw));

    let fb = ctx.fundamental_form(&ib)?;
    let fc = ctx.fundamental_form(&sphere_operator(ctx, &corrected_c(&lam)?)?)?;
    let fc_printed = ctx.fundamental_form(&sphere_operator(ctx, &printed_c(&lam)?)?)?;
    let sd = f.sum_sigma_delta()?;
    out.push(Report::printed(&format!("{prefix}.fb_plus_ifc"), &fb.add(&fc_printed.scale(&Scalar::i())), &sd));
    out.push(Report::identity(&format!("{prefix}.fb_plus_ifc_corrected"), &fb.add(&fc.scale(&Scalar::i())), &sd));

    // λ = 0: the (2,0) part vanishes
    let at = |x: &Multivector, v: &Scalar| -> Result<Multivector> {
        let map = [(lv.clone(), v.clone()), (lbv.clone(), v.conj())].into_iter().collect();
        x.try_map_coeffs(|c| c.substitute(&map, None))
    };
    out.push(Report::identity(&format!("{prefix}.lambda_0_vanishes"), &at(&p20, &Scalar::zero())?, &Multivector::zero(ctx.basis())));
    // λ = i: the frame point is (0, 1, 0), so the projection is w.r.t. J
    let direct = type_project(&pi, ctx.j_op()?, 2, 0)?;
    out.push(Report::identity(&format!("{prefix}.lambda_i_matches_j"), &at(&p20, &Scalar::i())?, &direct));
    Ok(out)
}

/// Operator identities relating `♯`, `I, J, K` and `ω⁻¹` on every basis covector.
pub fn hkt_operator_checks(ctx: &FrameContext, prefix: &str) -> Result<Vec<Report>> {
    let (i, j, k) = (ctx.i_op()?, ctx.j_op()?, ctx.k_op()?);
    let wi = ctx.fundamental_form(i)?;
    let wj = ctx.fundamental_form(j)?;
    let wk = ctx.fundamental_form(k)?;
    let inv = |w: &FormField, a: &FormField| ctx.form_inverse_map(w, a);
    let mut sharp_ok = (true, String::new());
    let mut ijk_ok = (true, String::new());
    let mut anti_ok = (true, String::new());
    let mut prod_ok = (true, String::new());
    let mut prod_printed = (true, String::new());
    let mut kill_ok = (true, String::new());
    for t in 0..ctx.dim() {
        let a = ctx.dual(t);
        let sh = ctx.sharp(&a)?;
        for (op, w) in [(i, &wi), (j, &wj), (k, &wk)] {
            let v = op.apply(&inv(w, &a)?)?;
            if v != sh {
                sharp_ok = (false, format!("on {a}: {v} vs {sh}"));
            }
        }
        let lhs = i.apply(&inv(&wj, &a)?)?;
        let rhs = inv(&wk, &a)?;
        if lhs != rhs {
            ijk_ok = (false, format!("on {a}: {lhs} vs {rhs}"));
        }
        let x = ctx.form_map(&wj, &inv(&wk, &a)?)?;
        let y = ctx.form_map(&wk, &inv(&wj, &a)?)?;
        if x != y.neg() {
            anti_ok = (false, format!("on {a}: {x} vs {}", y.neg()));
        }
        let combo = inv(&wj, &a)?.sub(&inv(&wk, &a)?.scale(&Scalar::i()));
        let back = ctx.form_map(&wj, &combo)?.add(&ctx.form_map(&wk, &combo)?.scale(&Scalar::i()));
        let printed = a.scale_int(2).add(&i.apply_form(&a)?.scale(&Scalar::from_int(2).scale(&crate::GaussRat::i())));
        if back != printed {
            prod_ok = (false, format!("on {a}: {back} vs {printed}"));
        }
        let a10 = type_project(&a, i, 1, 0)?;
        if back != a10.scale_int(2) {
            prod_printed = (false, format!("on {a}: {back} = 4*pi10 while 2*pi10 = {}", a10.scale_int(2)));
        }
        if !type_project(&a, i, 0, 1)?.sub(&a).is_zero() || a.is_zero() {
            continue;
        }
        if !combo.is_zero() {
            kill_ok = (false, format!("on {a}: {combo}"));
        }
    }
    let mut out = vec![
        Report::holds(&format!("{prefix}.sharp"), sharp_ok.0, "I w_I^-1, J w_J^-1, K w_K^-1".into(), "sharp".into(), || sharp_ok.1),
        Report::holds(&format!("{prefix}.i_wj_inv"), ijk_ok.0, "I w_J^-1".into(), "w_K^-1".into(), || ijk_ok.1),
        Report::holds(&format!("{prefix}.wj_wk_inv"), anti_ok.0, "w_J w_K^-1".into(), "-w_K w_J^-1".into(), || anti_ok.1),
        Report::holds(&format!("{prefix}.omega_product"), prod_ok.0, "(w_J + i w_K)(w_J^-1 - i w_K^-1)".into(), "2 + 2iI".into(), || prod_ok.1),
        Report::holds(&format!("{prefix}.kills_01"), kill_ok.0, "(w_J^-1 - i w_K^-1) on (0,1)-forms".into(), "0".into(), || kill_ok.1),
    ];
    let printed = if prod_printed.0 {
        Report::holds(&format!("{prefix}.omega_product_10"), true, "(w_J + i w_K)(w_J^-1 - i w_K^-1)".into(), "2 pi10".into(), String::new)
    } else {
        Report::new(
            &format!("{prefix}.omega_product_10"),
            crate::Status::DiscrepancyNoted,
            "4 pi10".into(),
            "2 pi10".into(),
            Some(prod_printed.1),
        )
    };
    out.push(printed);
    let p = hkt_bivector(ctx)?;
    out.push(Report::identity(&format!("{prefix}.type_20"), &type_project(&p, i, 2, 0)?, &p));
    Ok(out)
}

/// The λ-frame expansion of `P_I` and its `(2,0)` part on flat `ℍ^m`, with
/// the frame and operator identities they rest on.
pub fn eq2_checks(m: usize) -> Result<Vec<Report>> {
    let ctx = quaternionic_context(m, true)?;
    let prefix = format!("eq2.m{m}");
    let mut out = lambda_frame_checks(&ctx, &format!("{prefix}.frame"))?;
    out.extend(p20_identity(&ctx, &prefix)?);
    out.extend(hkt_operator_checks(&ctx, &format!("{prefix}.hkt"))?);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn show(rs: &[Report]) {
        for r in rs {
            println!("{r}");
        }
    }

    #[test]
    fn flat_m1() {
        show(&stereo_checks().unwrap());
        let ctx = quaternionic_context(1, true).unwrap();
        show(&lambda_frame_checks(&ctx, "frame").unwrap());
        show(&p20_identity(&ctx, "eq2").unwrap());
        show(&hkt_operator_checks(&ctx, "hkt").unwrap());
        println!("P = {}", hkt_bivector(&ctx).unwrap());
    }
}
