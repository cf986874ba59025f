//! Flat twistor space `ℝ^{4m} × S²`: holomorphic charts, the global
//! W-fields and the holomorphic Poisson family, the λ-derivatives of the
//! twisted frame over a hyperkähler base, and the contraction of `H₋` into
//! `V ⊗ Ω̄`.

use std::collections::HashMap;
use std::sync::Arc;

use crate::context::{coordinate_builder, ContextBuilder, FrameContext};
use crate::error::{Error, Result};
use crate::exterior::{
    bivector_as_map, form_interior, pair, type_project, BasisSpec, FormField, LinearOperator, Multivector,
    VectorValuedForm,
};
use crate::linalg::Matrix;
use crate::quaternionic::{self, frame_point, lam_vars, s_relation, SpherePoint};
use crate::report::Report;
use crate::scalar::{Scalar, Var};
use crate::schouten::schouten_coordinate;

/// Affine chart of `ℂP¹`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum Chart {
    /// `λ₁ ≠ 0`, coordinate `λ̃ = λ₂/λ₁`.
    One,
    /// `λ₂ ≠ 0`, coordinate `λ = λ₁/λ₂`.
    Two,
}

impl Chart {
    pub fn from_index(k: u8) -> Result<Chart> {
        match k {
            1 => Ok(Chart::One),
            2 => Ok(Chart::Two),
            _ => Err(Error::InvalidContext(format!("no chart {k}"))),
        }
    }

    fn suffix(self) -> &'static str {
        match self {
            Chart::One => "chart1",
            Chart::Two => "chart2",
        }
    }
}

/// Product coordinates `z₁^a, z₂^a`, their conjugates and the fiber
/// coordinate of one chart.
#[derive(Clone, Debug, PartialEq)]
pub struct TwistorContext {
    pub m: usize,
    pub chart: Chart,
    pub ctx: FrameContext,
    coords: Vec<Var>,
}

fn base_coords(m: usize) -> Vec<Var> {
    let mut out = Vec::with_capacity(4 * m);
    for a in 1..=m {
        for j in 1..=2 {
            let (v, vb) = Var::pair(&format!("z{j}_{a}"), &format!("z{j}b_{a}"));
            out.push(v);
            out.push(vb);
        }
    }
    out
}

fn fiber_vars(chart: Chart) -> (Var, Var) {
    match chart {
        Chart::Two => lam_vars(),
        Chart::One => Var::pair("lamt", "lamtb"),
    }
}

/// Offset of `z_j^a` (or its conjugate) inside a block of four.
fn slot(j: usize, bar: bool, a: usize) -> usize {
    4 * (a - 1) + 2 * (j - 1) + usize::from(bar)
}

impl TwistorContext {
    pub fn new(m: usize, chart: Chart) -> Result<TwistorContext> {
        if m == 0 {
            return Err(Error::InvalidContext("m must be positive".into()));
        }
        let mut coords = base_coords(m);
        let (l, lb) = fiber_vars(chart);
        coords.push(l);
        coords.push(lb);
        let ctx = FrameContext::coordinates(&format!("twistor{m}.{}", chart.suffix()), &coords, None)?;
        Ok(TwistorContext { m, chart, ctx, coords })
    }

    pub fn basis(&self) -> &Arc<BasisSpec> {
        self.ctx.basis()
    }

    pub fn coords(&self) -> &[Var] {
        &self.coords
    }

    /// The coordinate function `z_j^a` or `z̄_j^a`.
    pub fn z(&self, j: usize, bar: bool, a: usize) -> Scalar {
        Scalar::var(&self.coords[slot(j, bar, a)])
    }

    pub fn del_z(&self, j: usize, bar: bool, a: usize) -> Multivector {
        self.ctx.e(slot(j, bar, a))
    }

    pub fn dz(&self, j: usize, bar: bool, a: usize) -> FormField {
        self.ctx.dual(slot(j, bar, a))
    }

    /// The affine fiber coordinate `λ` (chart 2) or `λ̃` (chart 1).
    pub fn lam(&self) -> Scalar {
        Scalar::var(&self.coords[4 * self.m])
    }

    pub fn del_lam(&self, bar: bool) -> Multivector {
        self.ctx.e(4 * self.m + usize::from(bar))
    }

    /// Homogeneous representative `(λ₁, λ₂)`: `(λ, 1)` or `(1, λ̃)`.
    pub fn homogeneous(&self) -> (Scalar, Scalar) {
        match self.chart {
            Chart::Two => (self.lam(), Scalar::one()),
            Chart::One => (Scalar::one(), self.lam()),
        }
    }

    /// The point of `S²` whose complex structure makes the chart's
    /// holomorphic coordinates holomorphic.
    pub fn fiber_point(&self) -> Result<SpherePoint> {
        let (l, _) = lam_vars();
        let p = frame_point(&Scalar::var(&l))?;
        match self.chart {
            Chart::Two => Ok(p),
            Chart::One => p.substitute(&self.lam().inv()?),
        }
    }

    /// `I, J, K` on the base directions, zero on `∂/∂λ, ∂/∂λ̄`. Identifies
    /// `∂/∂z₁^a, ∂/∂z₂^a` with the frame `Z_a, W_a` of flat `ℍ^m`.
    pub fn structures(&self) -> Result<[LinearOperator; 3]> {
        let flat = quaternionic::quaternionic_context(self.m, false)?;
        let emb = |op: &LinearOperator| embed_operator(self.basis(), op, self.m);
        Ok([emb(flat.i_op()?)?, emb(flat.j_op()?)?, emb(flat.k_op()?)?])
    }

    /// `aI + bJ + cK` at the fiber point, on the base directions only.
    pub fn base_structure(&self) -> Result<LinearOperator> {
        let p = self.fiber_point()?;
        let [i, j, k] = self.structures()?;
        Ok(i.scale(&p.a).add(&j.scale(&p.b)).add(&k.scale(&p.c)))
    }

    /// The twistor complex structure `(I_𝐚, I_{S²})`.
    pub fn complex_structure(&self) -> Result<LinearOperator> {
        let base = self.base_structure()?;
        let mut mat = base.matrix().clone();
        let n = 4 * self.m;
        mat.set(n, n, Scalar::i());
        mat.set(n + 1, n + 1, -Scalar::i());
        LinearOperator::new(self.basis(), mat)
    }

    /// Moves an element of flat `ℍ^m` onto the coordinate frame.
    pub fn embed(&self, x: &Multivector) -> Result<Multivector> {
        let m = self.m;
        if x.basis().dim() != 4 * m {
            return Err(Error::BasisMismatch);
        }
        let images: Vec<Multivector> = (0..4 * m).map(|k| self.ctx.e(flat_to_coordinate(k, m))).collect();
        Ok(x.transform(&images))
    }
}

/// Index in the `Z, W, Z̄, W̄` ordering of flat `ℍ^m` ↦ coordinate slot.
fn flat_to_coordinate(k: usize, m: usize) -> usize {
    let bar = k >= 2 * m;
    let r = k % (2 * m);
    slot(r % 2 + 1, bar, r / 2 + 1)
}

fn embed_operator(basis: &Arc<BasisSpec>, op: &LinearOperator, m: usize) -> Result<LinearOperator> {
    let mut mat = Matrix::zeros(basis.dim(), basis.dim());
    for r in 0..4 * m {
        for c in 0..4 * m {
            let v = op.matrix().get(r, c);
            if !v.is_zero() {
                mat.set(flat_to_coordinate(r, m), flat_to_coordinate(c, m), v.clone());
            }
        }
    }
    LinearOperator::new(basis, mat)
}

/// A change of coordinates between two coordinate contexts, with the
/// forward map (target coordinates in source variables) and its inverse.
#[derive(Clone, Debug)]
pub struct CoordinateChange {
    pub source: FrameContext,
    pub target: FrameContext,
    source_coords: Vec<Var>,
    target_coords: Vec<Var>,
    forward: Vec<Scalar>,
    inverse: Vec<Scalar>,
}

impl CoordinateChange {
    pub fn new(
        source: FrameContext,
        source_coords: Vec<Var>,
        target: FrameContext,
        target_coords: Vec<Var>,
        forward: Vec<Scalar>,
        inverse: Vec<Scalar>,
    ) -> Result<CoordinateChange> {
        let n = source_coords.len();
        if source.dim() != n || target.dim() != n || target_coords.len() != n || forward.len() != n || inverse.len() != n
        {
            return Err(Error::InvalidContext("coordinate change has inconsistent sizes".into()));
        }
        Ok(CoordinateChange { source, target, source_coords, target_coords, forward, inverse })
    }

    pub fn forward(&self) -> &[Scalar] {
        &self.forward
    }

    pub fn inverse(&self) -> &[Scalar] {
        &self.inverse
    }

    /// The inverse change.
    pub fn reversed(&self) -> CoordinateChange {
        CoordinateChange {
            source: self.target.clone(),
            target: self.source.clone(),
            source_coords: self.target_coords.clone(),
            target_coords: self.source_coords.clone(),
            forward: self.inverse.clone(),
            inverse: self.forward.clone(),
        }
    }

    /// Rewrites a function of the target coordinates in source coordinates.
    pub fn to_source(&self, f: &Scalar) -> Result<Scalar> {
        let map: HashMap<Var, Scalar> = self.target_coords.iter().cloned().zip(self.forward.iter().cloned()).collect();
        f.substitute(&map, None)
    }

    /// Rewrites a function of the source coordinates in target coordinates.
    pub fn to_target(&self, f: &Scalar) -> Result<Scalar> {
        let map: HashMap<Var, Scalar> = self.source_coords.iter().cloned().zip(self.inverse.iter().cloned()).collect();
        f.substitute(&map, None)
    }

    /// Coordinates whose round trip `inverse∘forward` (source side) and
    /// `forward∘inverse` (target side) is not the identity.
    pub fn round_trip_failures(&self) -> Result<Vec<String>> {
        let mut bad = Vec::new();
        for (v, g) in self.source_coords.iter().zip(&self.inverse) {
            if self.to_source(g)? != Scalar::var(v) {
                bad.push(v.to_string());
            }
        }
        for (v, f) in self.target_coords.iter().zip(&self.forward) {
            if self.to_target(f)? != Scalar::var(v) {
                bad.push(v.to_string());
            }
        }
        Ok(bad)
    }

    /// `d(target_k)` in the source coframe.
    pub fn differential(&self, k: usize) -> FormField {
        let comps: Vec<Scalar> = self.source_coords.iter().map(|v| self.forward[k].partial(v)).collect();
        FormField::from_components(self.source.basis(), &comps)
    }

    /// Pushforward with coefficients still in source coordinates.
    pub fn push_raw(&self, x: &Multivector) -> Result<Multivector> {
        if x.basis() != self.source.basis() {
            return Err(Error::BasisMismatch);
        }
        let images: Vec<Multivector> = self
            .source_coords
            .iter()
            .map(|v| {
                let comps: Vec<Scalar> = self.forward.iter().map(|f| f.partial(v)).collect();
                Multivector::from_components(self.target.basis(), &comps)
            })
            .collect();
        Ok(x.transform(&images))
    }

    /// Pushforward expressed entirely in target coordinates.
    pub fn push(&self, x: &Multivector) -> Result<Multivector> {
        self.push_raw(x)?.try_map_coeffs(|c| self.to_target(c))
    }

    /// A multivector on the target frame rewritten on the source frame,
    /// computed from the inverse Jacobian.
    pub fn pull(&self, y: &Multivector) -> Result<Multivector> {
        if y.basis() != self.target.basis() {
            return Err(Error::BasisMismatch);
        }
        let images: Vec<Multivector> = self
            .target_coords
            .iter()
            .map(|t| {
                let comps: Vec<Scalar> = self.inverse.iter().map(|g| g.partial(t)).collect();
                Multivector::from_components(self.source.basis(), &comps)
            })
            .collect();
        y.transform(&images).try_map_coeffs(|c| self.to_source(c))
    }
}

fn holo_names(chart: Chart) -> (&'static str, &'static str) {
    match chart {
        Chart::Two => ("w", "zeta"),
        Chart::One => ("wt", "zetat"),
    }
}

fn holo_coord_vars(m: usize, chart: Chart) -> Vec<Var> {
    let (w, z) = holo_names(chart);
    let mut out = Vec::with_capacity(4 * m + 2);
    for a in 1..=m {
        for j in 1..=2 {
            let (v, vb) = Var::pair(&format!("{w}{j}_{a}"), &format!("{w}{j}b_{a}"));
            out.push(v);
            out.push(vb);
        }
    }
    let (v, vb) = Var::pair(z, &format!("{z}b"));
    out.push(v);
    out.push(vb);
    out
}

/// Holomorphic coordinates of one chart. The vector and covector names are
/// `Dw1_1, …, Dzeta` (chart 2) and `Dwt1_1, …, Dzetat` (chart 1).
pub fn holomorphic_context(m: usize, chart: Chart) -> Result<FrameContext> {
    FrameContext::coordinates(&format!("holomorphic{m}.{}", chart.suffix()), &holo_coord_vars(m, chart), None)
}

/// `w₁ = λz₁ − z̄₂, w₂ = λz₂ + z̄₁, ζ = λ` (chart 2) or
/// `w̃₁ = z₁ − λ̃z̄₂, w̃₂ = z₂ + λ̃z̄₁, ζ̃ = λ̃` (chart 1), with the inverse
/// `z₁ = (ζ̄w₁ + w̄₂)/(1+|ζ|²), z₂ = (ζ̄w₂ − w̄₁)/(1+|ζ|²)` and its chart-1
/// analogue `z₁ = (w̃₁ + ζ̃w̃̄₂)/(1+|ζ̃|²), z₂ = (w̃₂ − ζ̃w̃̄₁)/(1+|ζ̃|²)`.
pub fn holo_coords(tc: &TwistorContext) -> Result<CoordinateChange> {
    let m = tc.m;
    let target = holomorphic_context(m, tc.chart)?;
    let tv = holo_coord_vars(m, tc.chart);
    let l = tc.lam();
    let lb = l.conj();
    let zeta = Scalar::var(&tv[4 * m]);
    let zetab = zeta.conj();
    let den = Scalar::one() + &zeta * &zetab;
    let mut forward = Vec::with_capacity(4 * m + 2);
    let mut inverse = Vec::with_capacity(4 * m + 2);
    for a in 1..=m {
        let (z1, z1b, z2, z2b) = (tc.z(1, false, a), tc.z(1, true, a), tc.z(2, false, a), tc.z(2, true, a));
        let w = |j: usize, bar: bool| Scalar::var(&tv[slot(j, bar, a)]);
        let (w1, w1b, w2, w2b) = (w(1, false), w(1, true), w(2, false), w(2, true));
        let (f1, f2, g1, g2) = match tc.chart {
            Chart::Two => (
                &(&l * &z1) - &z2b,
                &(&l * &z2) + &z1b,
                (&(&zetab * &w1) + &w2b).checked_div(&den)?,
                (&(&zetab * &w2) - &w1b).checked_div(&den)?,
            ),
            Chart::One => (
                &z1 - &(&l * &z2b),
                &z2 + &(&l * &z1b),
                (&w1 + &(&zeta * &w2b)).checked_div(&den)?,
                (&w2 - &(&zeta * &w1b)).checked_div(&den)?,
            ),
        };
        forward.extend([f1.clone(), f1.conj(), f2.clone(), f2.conj()]);
        inverse.extend([g1.clone(), g1.conj(), g2.clone(), g2.conj()]);
    }
    forward.extend([l.clone(), lb.clone()]);
    inverse.extend([zeta, zetab]);
    CoordinateChange::new(tc.ctx.clone(), tc.coords.clone(), target, tv, forward, inverse)
}

/// Holomorphic chart 2 to chart 1: `w̃ = w/ζ`, `ζ̃ = 1/ζ`.
pub fn chart_transition(m: usize) -> Result<CoordinateChange> {
    let sv = holo_coord_vars(m, Chart::Two);
    let tv = holo_coord_vars(m, Chart::One);
    let zeta = Scalar::var(&sv[4 * m]);
    let zetat = Scalar::var(&tv[4 * m]);
    let mut forward = Vec::with_capacity(4 * m + 2);
    let mut inverse = Vec::with_capacity(4 * m + 2);
    for k in 0..4 * m {
        let bar = k % 2 == 1;
        let (zs, zt) = if bar { (zeta.conj(), zetat.conj()) } else { (zeta.clone(), zetat.clone()) };
        forward.push(Scalar::var(&sv[k]).checked_div(&zs)?);
        inverse.push(Scalar::var(&tv[k]).checked_div(&zt)?);
    }
    let (zi, zti) = (zeta.inv()?, zetat.inv()?);
    forward.extend([zi.clone(), zi.conj()]);
    inverse.extend([zti.clone(), zti.conj()]);
    CoordinateChange::new(
        holomorphic_context(m, Chart::Two)?,
        sv,
        holomorphic_context(m, Chart::One)?,
        tv,
        forward,
        inverse,
    )
}

/// `V_j^a` on the holomorphic frame: `(1/λ₂)∂/∂w_j^a` or `(1/λ₁)∂/∂w̃_j^a`.
/// Both normalizing factors are 1 in their own chart.
pub fn v_holomorphic(holo: &FrameContext, j: usize, a: usize) -> Multivector {
    holo.e(slot(j, false, a))
}

/// `(λ₁, λ₂)` written in the holomorphic fiber coordinate of `chart`.
fn homogeneous_holo(chart: Chart, m: usize) -> (Scalar, Scalar) {
    let z = Scalar::var(&holo_coord_vars(m, chart)[4 * m]);
    match chart {
        Chart::Two => (z, Scalar::one()),
        Chart::One => (Scalar::one(), z),
    }
}

/// `W₀ = λ₁V₁ + λ₂V₂`, `W₁ = i(λ₁V₁ − λ₂V₂)`, `W₂ = λ₁V₂ − λ₂V₁`,
/// `W₃ = i(λ₁V₂ + λ₂V₁)` from given `V₁, V₂` and `(λ₁, λ₂)`.
pub fn w_from_v(v1: &Multivector, v2: &Multivector, l1: &Scalar, l2: &Scalar) -> [Multivector; 4] {
    let i = Scalar::i();
    let (a, b) = (v1.scale(l1), v2.scale(l2));
    let (c, d) = (v2.scale(l1), v1.scale(l2));
    [a.add(&b), a.sub(&b).scale(&i), c.sub(&d), c.add(&d).scale(&i)]
}

/// `W_k^a = ½(I_k ∂/∂x − i I_𝐚 I_k ∂/∂x)` with `∂/∂x = ∂/∂z₁^a + ∂/∂z̄₁^a`
/// and `I₀ = 1, I₁ = I, I₂ = J, I₃ = K`, on the product frame.
pub fn w_fields(tc: &TwistorContext, a: usize) -> Result<[Multivector; 4]> {
    let [i, j, k] = tc.structures()?;
    let ia = tc.base_structure()?;
    let dx = tc.del_z(1, false, a).add(&tc.del_z(1, true, a));
    let half = Scalar::ratio(1, 2);
    let one = |x: Multivector| -> Result<Multivector> {
        Ok(x.sub(&ia.apply(&x)?.scale(&Scalar::i())).scale(&half))
    };
    Ok([one(dx.clone())?, one(i.apply(&dx)?)?, one(j.apply(&dx)?)?, one(k.apply(&dx)?)?])
}

/// `λ₁^{2−ℓ} λ₂^ℓ Σ_a V₁^a∧V₂^a` assembled from the W-fields of
/// [`w_fields`] through `λ₁V₁ = (W₀ − iW₁)/2`, `λ₂V₂ = (W₀ + iW₁)/2`,
/// `λ₁V₂ = (W₂ − iW₃)/2`, `λ₂V₁ = −(W₂ + iW₃)/2`.
pub fn poisson_family(tc: &TwistorContext, ell: usize) -> Result<Multivector> {
    if ell > 2 {
        return Err(Error::InvalidContext(format!("family index {ell} is not in 0..=2")));
    }
    let half = Scalar::ratio(1, 2);
    let i = Scalar::i();
    let mut acc = Multivector::zero(tc.basis());
    for a in 1..=tc.m {
        let [w0, w1, w2, w3] = w_fields(tc, a)?;
        let l1v1 = w0.sub(&w1.scale(&i)).scale(&half);
        let l2v2 = w0.add(&w1.scale(&i)).scale(&half);
        let l1v2 = w2.sub(&w3.scale(&i)).scale(&half);
        let l2v1 = w2.add(&w3.scale(&i)).scale(&half).neg();
        let term = match ell {
            0 => l1v1.wedge(&l1v2)?,
            1 => l1v1.wedge(&l2v2)?,
            _ => l2v1.wedge(&l2v2)?,
        };
        acc = acc.add(&term);
    }
    Ok(acc)
}

/// `λ₁^{2−ℓ} λ₂^ℓ Σ V₁^a∧V₂^a` written directly on the holomorphic frame.
pub fn poisson_family_holomorphic(holo: &FrameContext, chart: Chart, m: usize, ell: usize) -> Result<Multivector> {
    let (l1, l2) = homogeneous_holo(chart, m);
    let c = &l1.pow(2 - ell as i32)? * &l2.pow(ell as i32)?;
    let mut acc = Multivector::zero(holo.basis());
    for a in 1..=m {
        acc = acc.add(&v_holomorphic(holo, 1, a).wedge(&v_holomorphic(holo, 2, a))?);
    }
    Ok(acc.scale(&c))
}

/// Why `x` on the holomorphic frame of `chart` fails to be a holomorphic
/// multivector depending on the fiber coordinate alone, if it does.
pub fn holomorphy_defect(x: &Multivector, m: usize, chart: Chart) -> Option<String> {
    let vars = holo_coord_vars(m, chart);
    let fiber = &vars[4 * m];
    for (blade, c) in x.terms() {
        if let Some(&k) = blade.iter().find(|&&k| k % 2 == 1) {
            return Some(format!("component along the antiholomorphic direction {}", vars[k as usize]));
        }
        if let Some(v) = c.vars().into_iter().find(|v| v != fiber) {
            return Some(format!("coefficient {c} depends on {v}"));
        }
        if !c.partial(&fiber.conj()).is_zero() {
            return Some(format!("coefficient {c} is not annihilated by the conjugate fiber derivative"));
        }
        if !c.den().is_constant() {
            return Some(format!("coefficient {c} is not a polynomial"));
        }
    }
    None
}

fn first_nonzero<'a>(items: impl IntoIterator<Item = (String, &'a Multivector)>) -> Option<String> {
    items.into_iter().find(|(_, x)| !x.is_zero()).map(|(id, x)| format!("{id} = {x}"))
}

/// The flat-twistor scenario: coordinate round trips, the displayed field
/// formulas, W-field commutators, the Poisson family with its holomorphy
/// certificate, `𝒫` from `P_I` and the vanishing on the fibers over 0, ∞.
pub fn flat_twistor_checks(m: usize) -> Result<Vec<Report>> {
    let mut out = Vec::new();
    let t2 = TwistorContext::new(m, Chart::Two)?;
    let t1 = TwistorContext::new(m, Chart::One)?;
    let h2 = holo_coords(&t2)?;
    let h1 = holo_coords(&t1)?;
    let tr = chart_transition(m)?;
    for (id, ch) in [("flat.round_trip.chart2", &h2), ("flat.round_trip.chart1", &h1), ("flat.round_trip.transition", &tr)]
    {
        let bad = ch.round_trip_failures()?;
        out.push(Report::holds(
            id,
            bad.is_empty(),
            "inverse(forward(x))".into(),
            "x".into(),
            || format!("round trip moves {}", bad.join(", ")),
        ));
    }

    // λ = 0
    let (lv, lbv) = lam_vars();
    let at0: HashMap<Var, Scalar> = [(lv.clone(), Scalar::zero()), (lbv.clone(), Scalar::zero())].into_iter().collect();
    let w1_0 = h2.forward()[slot(1, false, 1)].substitute(&at0, None)?;
    let w2_0 = h2.forward()[slot(2, false, 1)].substitute(&at0, None)?;
    out.push(Report::identity("flat.lambda_0.w1", &w1_0, &-t2.z(2, true, 1)));
    out.push(Report::identity("flat.lambda_0.w2", &w2_0, &t2.z(1, true, 1)));

    // holomorphic differentials have type (1,0)
    for (tc, ch) in [(&t2, &h2), (&t1, &h1)] {
        let cs = tc.complex_structure()?;
        let mut bad = None;
        for k in (0..4 * m + 2).filter(|k| k % 2 == 0) {
            let dw = ch.differential(k);
            let p = type_project(&dw, &cs, 1, 0)?;
            if p != dw {
                bad = Some(format!("d{} has a (0,1) part {}", ch.target.basis().covector_names()[k], dw.sub(&p)));
                break;
            }
        }
        out.push(Report::holds(
            &format!("flat.dw_type_10.{}", tc.chart.suffix()),
            bad.is_none(),
            "pi10(dw)".into(),
            "dw".into(),
            || bad.clone().unwrap_or_default(),
        ));
    }

    // displayed ∂/∂w expansions
    let l = t2.lam();
    let lb = l.conj();
    let nrm = Scalar::one() + &l * &lb;
    let ninv = nrm.inv()?;
    let lbn = &lb * &ninv;
    for a in 1..=m {
        let dw1 = h2.pull(&h2.target.e(slot(1, false, a)))?;
        let dw2 = h2.pull(&h2.target.e(slot(2, false, a)))?;
        let p1 = t2.del_z(1, false, a).scale(&lbn).sub(&t2.del_z(2, true, a).scale(&ninv));
        let p2 = t2.del_z(2, false, a).scale(&lbn).add(&t2.del_z(1, true, a).scale(&ninv));
        out.push(Report::identity(&format!("flat.del_w1.a{a}"), &dw1, &p1));
        out.push(Report::identity(&format!("flat.del_w2.a{a}"), &dw2, &p2));
    }

    // displayed ∂/∂ζ̄ with squared denominators
    let dzetab = h2.pull(&h2.target.e(4 * m + 1))?;
    let n2inv = &ninv * &ninv;
    let mut printed = t2.del_lam(true);
    for a in 1..=m {
        let t_a = t2.del_z(1, false, a).add(&t2.del_z(2, true, a).scale(&l)).scale(&(&t2.z(2, true, a) * &n2inv));
        let t_b = t2.del_z(2, false, a).sub(&t2.del_z(1, true, a).scale(&l)).scale(&(&t2.z(1, true, a) * &n2inv));
        printed = printed.sub(&t_a).sub(&t_b);
    }
    out.push(Report::printed("flat.del_zetab", &dzetab, &printed));

    // ∂/∂λ̄ = ∂/∂ζ̄ + Σ(z̄₂ ∂/∂w̄₂ + z̄₁ ∂/∂w̄₁)
    let pushed = h2.push(&t2.del_lam(true))?;
    let mut rhs = h2.target.e(4 * m + 1);
    for a in 1..=m {
        let z2b = h2.to_target(&t2.z(2, true, a))?;
        let z1b = h2.to_target(&t2.z(1, true, a))?;
        rhs = rhs.add(&h2.target.e(slot(2, true, a)).scale(&z2b)).add(&h2.target.e(slot(1, true, a)).scale(&z1b));
    }
    out.push(Report::identity("flat.del_lambdab", &pushed, &rhs));

    // V_j: (1/λ₂)∂/∂w_j = (1/λ₁)∂/∂w̃_j for the representative (ζ, 1)
    let zt = Scalar::var(&holo_coord_vars(m, Chart::One)[4 * m]);
    for a in 1..=m {
        for j in 1..=2 {
            let lhs = tr.push(&v_holomorphic(&tr.source, j, a))?;
            let rhs = v_holomorphic(&tr.target, j, a).scale(&zt);
            out.push(Report::identity(&format!("flat.v_transition.a{a}.v{j}"), &lhs, &rhs));
        }
    }

    // W-fields: operator formula against the V-combinations, in both charts
    let mut w2_fields = Vec::new();
    for (tc, ch) in [(&t2, &h2), (&t1, &h1)] {
        let (l1, l2) = homogeneous_holo(tc.chart, m);
        for a in 1..=m {
            let ws = w_fields(tc, a)?;
            let vs =
                w_from_v(&v_holomorphic(&ch.target, 1, a), &v_holomorphic(&ch.target, 2, a), &l1, &l2);
            for k in 0..4 {
                let pushed = ch.push(&ws[k])?;
                out.push(Report::identity(&format!("flat.w_fields.{}.a{a}.w{k}", tc.chart.suffix()), &pushed, &vs[k]));
            }
            if tc.chart == Chart::Two {
                w2_fields.extend(ws.iter().enumerate().map(|(k, w)| (format!("W{k}^{a}"), w.clone())));
                for (k, v) in vs.iter().enumerate() {
                    let (l1t, l2t) = homogeneous_holo(Chart::One, m);
                    let other = w_from_v(&v_holomorphic(&h1.target, 1, a), &v_holomorphic(&h1.target, 2, a), &l1t, &l2t);
                    out.push(Report::identity(&format!("flat.w_transition.a{a}.w{k}"), &tr.push(v)?, &other[k]));
                }
            }
        }
    }
    let mut brackets = Vec::new();
    for x in 0..w2_fields.len() {
        for y in x + 1..w2_fields.len() {
            let br = t2.ctx.lie_bracket(&w2_fields[x].1, &w2_fields[y].1)?;
            brackets.push((format!("[{}, {}]", w2_fields[x].0, w2_fields[y].0), br));
        }
    }
    let defect = first_nonzero(brackets.iter().map(|(id, b)| (id.clone(), b)));
    out.push(Report::holds(
        "flat.w_commute",
        defect.is_none(),
        format!("{} brackets", brackets.len()),
        "0".into(),
        || defect.clone().unwrap_or_default(),
    ));

    // the Poisson family
    for ell in 0..=2 {
        let mut holo_images = Vec::new();
        for (tc, ch) in [(&t2, &h2), (&t1, &h1)] {
            let b = poisson_family(tc, ell)?;
            let sfx = tc.chart.suffix();
            let br = schouten_coordinate(&tc.ctx, &b, &b)?;
            out.push(Report::identity(&format!("flat.family.l{ell}.{sfx}.bracket"), &br, &Multivector::zero(tc.basis())));
            let pushed = ch.push(&b)?;
            let defect = holomorphy_defect(&pushed, m, tc.chart);
            out.push(Report::holds(
                &format!("flat.family.l{ell}.{sfx}.holomorphic"),
                defect.is_none(),
                pushed.to_string(),
                "polynomial in the fiber coordinate".into(),
                || defect.clone().unwrap_or_default(),
            ));
            let formula = poisson_family_holomorphic(&ch.target, tc.chart, m, ell)?;
            out.push(Report::identity(&format!("flat.family.l{ell}.{sfx}.formula"), &pushed, &formula));
            holo_images.push(pushed);
        }
        out.push(Report::identity(&format!("flat.family.l{ell}.transition"), &tr.push(&holo_images[0])?, &holo_images[1]));
    }

    // 𝒫 = (s_𝐚)_* P_I^{(2,0)} is −4i times the ℓ = 1 member
    let flat = quaternionic::quaternionic_context(m, false)?;
    let pi = t2.embed(&quaternionic::p_i(&flat)?)?;
    let p20 = type_project(&pi, &t2.complex_structure()?, 2, 0)?;
    let b1 = poisson_family(&t2, 1)?;
    out.push(Report::identity("flat.p_from_p_i", &p20, &b1.scale(&Scalar::from_int(-4).scale(&crate::GaussRat::i()))));

    // vanishing at λ = 0 and λ̃ = 0
    for (id, ch, chart) in [("flat.p_vanishes.lambda_0", &h2, Chart::Two), ("flat.p_vanishes.lambda_inf", &h1, Chart::One)] {
        let b = poisson_family_holomorphic(&ch.target, chart, m, 1)?;
        let vars = holo_coord_vars(m, chart);
        let map: HashMap<Var, Scalar> =
            [(vars[4 * m].clone(), Scalar::zero()), (vars[4 * m + 1].clone(), Scalar::zero())].into_iter().collect();
        let at = b.try_map_coeffs(|c| c.substitute(&map, None))?;
        out.push(Report::identity(id, &at, &Multivector::zero(ch.target.basis())));
    }
    Ok(out)
}

/// Flat `ℍ^m` frame `Z, W, Z̄, W̄` extended by `∂/∂λ, ∂/∂λ̄`, acting on the
/// indeterminates `λ, λ̄`; the base frame is parallel and carries no
/// derivations. Covectors `sigma, delta, …, dlam, dlamb`.
pub fn section5_context(m: usize) -> Result<FrameContext> {
    if m == 0 {
        return Err(Error::InvalidContext("m must be positive".into()));
    }
    let flat = quaternionic::quaternionic_context(m, false)?;
    let fb = flat.basis();
    let mut vecs = fb.vector_names().to_vec();
    let mut covs = fb.covector_names().to_vec();
    vecs.extend(["Dlam".to_string(), "Dlamb".to_string()]);
    covs.extend(["dlam".to_string(), "dlamb".to_string()]);
    let basis = BasisSpec::new(vecs, covs)?;
    let n = 4 * m + 2;
    let fc = flat.conjugation().ok_or_else(|| Error::InvalidContext("flat context has no conjugation".into()))?;
    let mut conj = Matrix::zeros(n, n);
    for r in 0..4 * m {
        for c in 0..4 * m {
            conj.set(r, c, fc.get(r, c).clone());
        }
    }
    conj.set(n - 2, n - 1, Scalar::one());
    conj.set(n - 1, n - 2, Scalar::one());
    let (l, lb) = lam_vars();
    ContextBuilder::new(&format!("hyperkahler{m}"), basis)
        .var_pair(&(l.clone(), lb.clone()))
        .root(&s_relation())
        .derivation(n - 2, &l, Scalar::one())
        .derivation(n - 1, &lb, Scalar::one())
        .conjugation(conj)
        .build()
}

/// Twisted frame `Z^λ = (λ̄Z − W̄)/ν`, `W^λ = (λ̄W + Z̄)/ν` for the
/// normalization `ν` (either `s` or `1+|λ|²`), with conjugates.
#[derive(Clone, Debug)]
pub struct TwistedFrame {
    pub z: Vec<Multivector>,
    pub w: Vec<Multivector>,
    pub zb: Vec<Multivector>,
    pub wb: Vec<Multivector>,
}

pub fn twisted_frame(ctx: &FrameContext, nu: &Scalar) -> Result<TwistedFrame> {
    let m = (ctx.dim() - 2) / 4;
    let lb = Scalar::var(&ctx.var("lamb")?);
    let inv = nu.inv()?;
    let mut f = TwistedFrame { z: vec![], w: vec![], zb: vec![], wb: vec![] };
    for i in 1..=m {
        let (z, w) = (ctx.vector(&format!("Z{i}"))?, ctx.vector(&format!("W{i}"))?);
        let (zb, wb) = (ctx.vector(&format!("Zb{i}"))?, ctx.vector(&format!("Wb{i}"))?);
        let zl = z.scale(&lb).sub(&wb).scale(&inv);
        let wl = w.scale(&lb).add(&zb).scale(&inv);
        f.zb.push(ctx.conj_vector(&zl)?);
        f.wb.push(ctx.conj_vector(&wl)?);
        f.z.push(zl);
        f.w.push(wl);
    }
    Ok(f)
}

/// The twistor complex structure on [`section5_context`]: `I_𝐚` at the
/// frame point on the base, `i` on `∂/∂λ`.
pub fn section5_structure(ctx: &FrameContext) -> Result<LinearOperator> {
    let m = (ctx.dim() - 2) / 4;
    let flat = quaternionic::quaternionic_context(m, false)?;
    let (l, _) = lam_vars();
    let base = quaternionic::sphere_operator(&flat, &frame_point(&Scalar::var(&l))?)?;
    let n = ctx.dim();
    let mut mat = Matrix::zeros(n, n);
    for r in 0..4 * m {
        for c in 0..4 * m {
            mat.set(r, c, base.matrix().get(r, c).clone());
        }
    }
    mat.set(n - 2, n - 2, Scalar::i());
    mat.set(n - 1, n - 1, -Scalar::i());
    LinearOperator::new(ctx.basis(), mat)
}

/// The closed combinations `Θ₁ = Σ(σ∧σ̄ + δ∧δ̄)`, `Θ₂ = Σσ∧δ`, `Θ₃ = Σσ̄∧δ̄`.
pub fn parallel_coframe(ctx: &FrameContext) -> Result<[FormField; 3]> {
    let m = (ctx.dim() - 2) / 4;
    let cv = |s: &str| ctx.covector(s);
    let mut t = [FormField::zero(ctx.basis()), FormField::zero(ctx.basis()), FormField::zero(ctx.basis())];
    for i in 1..=m {
        let (s, d) = (cv(&format!("sigma{i}"))?, cv(&format!("delta{i}"))?);
        let (sb, db) = (cv(&format!("sigmab{i}"))?, cv(&format!("deltab{i}"))?);
        t[0] = t[0].add(&s.wedge(&sb)?).add(&d.wedge(&db)?);
        t[1] = t[1].add(&s.wedge(&d)?);
        t[2] = t[2].add(&sb.wedge(&db)?);
    }
    Ok(t)
}

/// Exterior derivative of `Σ f_k(λ, λ̄) Θ_k`, using only `dΘ_k = 0`.
/// Fails when the form is not such a combination.
pub fn d_parallel(ctx: &FrameContext, f: &FormField) -> Result<FormField> {
    let theta = parallel_coframe(ctx)?;
    let mut rest = f.clone();
    let mut out = FormField::zero(ctx.basis());
    let n = ctx.dim();
    let (dl, dlb) = (ctx.dual(n - 2), ctx.dual(n - 1));
    let (l, lb) = (ctx.var("lam")?, ctx.var("lamb")?);
    for t in &theta {
        let (blade, c0) = t.terms().next().map(|(b, c)| (b.clone(), c.clone())).ok_or(Error::GradeError("empty".into()))?;
        let coeff = f.coefficient(&blade).checked_div(&c0)?;
        rest = rest.sub(&t.scale(&coeff));
        let df = dl.scale(&coeff.partial(&l)).add(&dlb.scale(&coeff.partial(&lb)));
        out = out.add(&df.wedge(t)?);
    }
    if !rest.is_zero() {
        return Err(Error::GradeError(format!("form is not a combination of the parallel coframe: {rest}")));
    }
    Ok(out)
}

/// The hyperkähler scenario: the brackets of `∂/∂λ̄` with the twisted frame
/// and with `𝒫`, the vanishing `(2,0)`-part, and `dF_λ`.
pub fn section5_checks(m: usize) -> Result<Vec<Report>> {
    let ctx = section5_context(m)?;
    let n = ctx.dim();
    let mut out = Vec::new();
    let (l, lb) = (Scalar::var(&ctx.var("lam")?), Scalar::var(&ctx.var("lamb")?));
    let nrm = Scalar::one() + &l * &lb;
    let ninv = nrm.inv()?;
    let dlb = ctx.e(n - 1);

    let sanity: Vec<(String, Multivector)> = (0..4 * m)
        .map(|k| Ok((format!("[Dlamb, {}]", ctx.basis().vector_names()[k]), ctx.lie_bracket(&dlb, &ctx.e(k))?)))
        .collect::<Result<_>>()?;
    let defect = first_nonzero(sanity.iter().map(|(id, b)| (id.clone(), b)));
    out.push(Report::holds("section5.context_sanity", defect.is_none(), "[Dlamb, e_k]".into(), "0".into(), || {
        defect.clone().unwrap_or_default()
    }));

    let f = twisted_frame(&ctx, &nrm)?;
    for i in 0..m {
        let id = i + 1;
        let bz = ctx.lie_bracket(&dlb, &f.z[i])?;
        let zi = ctx.vector(&format!("Z{id}"))?;
        let wbi = ctx.vector(&format!("Wb{id}"))?;
        let middle = zi.add(&wbi.scale(&l)).scale(&(&ninv * &ninv));
        out.push(Report::identity(&format!("section5.bracket_z{id}.middle"), &bz, &middle));
        out.push(Report::identity(&format!("section5.bracket_z{id}"), &bz, &f.wb[i].scale(&ninv)));
        let bw = ctx.lie_bracket(&dlb, &f.w[i])?;
        out.push(Report::identity(&format!("section5.bracket_w{id}"), &bw, &f.zb[i].scale(&ninv).neg()));
    }
    let p = quaternionic::sum_wedges(&f.z, &f.w)?;
    let bp = crate::schouten::schouten_leibniz(&ctx, &dlb, &p)?;
    let herm = quaternionic::sum_wedges(&f.z, &f.zb)?.add(&quaternionic::sum_wedges(&f.w, &f.wb)?);
    out.push(Report::identity("section5.bracket_p", &bp, &herm.scale(&ninv).neg()));
    let cs = section5_structure(&ctx)?;
    let p20 = type_project(&bp, &cs, 2, 0)?;
    out.push(Report::identity("section5.bracket_p_20", &p20, &Multivector::zero(ctx.basis())));

    // the s-normalized frame leaves a multiple of Z^λ
    let s = Scalar::root(ctx.root().ok_or_else(|| Error::InvalidContext("no root".into()))?);
    let fs = twisted_frame(&ctx, &s)?;
    let bzs = ctx.lie_bracket(&dlb, &fs.z[0])?;
    out.push(Report::printed("section5.bracket_z1.s_frame", &bzs, &fs.wb[0].scale(&ninv)));

    // dF_λ
    let qb = quaternionic_like_lambda(&ctx, &s)?;
    let mut fl = FormField::zero(ctx.basis());
    let mut sd = FormField::zero(ctx.basis());
    let mut sdb = FormField::zero(ctx.basis());
    for (sig, del, sigb, delb) in &qb {
        fl = fl.add(&sig.wedge(sigb)?).add(&del.wedge(delb)?);
        sd = sd.add(&sig.wedge(del)?);
        sdb = sdb.add(&sigb.wedge(delb)?);
    }
    let df = ctx.d_frame(&fl)?;
    let dp = d_parallel(&ctx, &fl)?;
    out.push(Report::identity("section5.df.parallel_matches_frame", &dp, &df));
    let [t1, t2, t3] = parallel_coframe(&ctx)?;
    let (dl, dlbf) = (ctx.dual(n - 2), ctx.dual(n - 1));
    let two_n2 = Scalar::from_int(2) * &ninv * &ninv;
    let inter_l = t1.scale(&lb).sub(&t2).sub(&t3.scale(&(&lb * &lb)));
    let inter_lb = t1.scale(&l).add(&t2.scale(&(&l * &l))).add(&t3);
    let inter = dl.wedge(&inter_l)?.add(&dlbf.wedge(&inter_lb)?).scale(&two_n2);
    out.push(Report::identity("section5.df.intermediate", &dp, &inter));
    let two_n = Scalar::from_int(2) * &ninv;
    let printed = dl.wedge(&sdb)?.sub(&dlbf.wedge(&sd)?).scale(&two_n);
    out.push(Report::printed("section5.df.printed", &dp, &printed));
    let corrected = dlbf.wedge(&sd)?.sub(&dl.wedge(&sdb)?).scale(&two_n);
    out.push(Report::identity("section5.df", &dp, &corrected));
    Ok(out)
}

/// `(σ^λ, δ^λ, σ̄^λ, δ̄^λ)` with `σ^λ = (λσ − δ̄)/s`, `δ^λ = (λδ + σ̄)/s`.
fn quaternionic_like_lambda(ctx: &FrameContext, s: &Scalar) -> Result<Vec<(FormField, FormField, FormField, FormField)>> {
    let m = (ctx.dim() - 2) / 4;
    let l = Scalar::var(&ctx.var("lam")?);
    let sinv = s.inv()?;
    (1..=m)
        .map(|i| {
            let (sg, dl) = (ctx.covector(&format!("sigma{i}"))?, ctx.covector(&format!("delta{i}"))?);
            let (sgb, dlb) = (ctx.covector(&format!("sigmab{i}"))?, ctx.covector(&format!("deltab{i}"))?);
            let a = sg.scale(&l).sub(&dlb).scale(&sinv);
            let b = dl.scale(&l).add(&sgb).scale(&sinv);
            let (ab, bb) = (ctx.conj_form(&a)?, ctx.conj_form(&b)?);
            Ok((a, b, ab, bb))
        })
        .collect()
}

/// Base coordinates with homogeneous fiber parameters `λ₁, λ₂` (named
/// `l1, l2`) and no fiber directions.
#[derive(Clone, Debug)]
pub struct HomogeneousContext {
    pub m: usize,
    pub ctx: FrameContext,
}

impl HomogeneousContext {
    pub fn new(m: usize) -> Result<HomogeneousContext> {
        if m == 0 {
            return Err(Error::InvalidContext("m must be positive".into()));
        }
        let ctx = coordinate_builder(&format!("homogeneous{m}"), &base_coords(m))?
            .var_pair(&Var::pair("l1", "l1b"))
            .var_pair(&Var::pair("l2", "l2b"))
            .build()?;
        Ok(HomogeneousContext { m, ctx })
    }

    pub fn lambdas(&self) -> Result<(Scalar, Scalar)> {
        Ok((Scalar::var(&self.ctx.var("l1")?), Scalar::var(&self.ctx.var("l2")?)))
    }

    fn norm_inv(&self) -> Result<Scalar> {
        let (l1, l2) = self.lambdas()?;
        (&l1 * &l1.conj() + &l2 * &l2.conj()).inv()
    }

    pub fn dz(&self, j: usize, bar: bool, a: usize) -> FormField {
        self.ctx.dual(slot(j, bar, a))
    }

    pub fn del_z(&self, j: usize, bar: bool, a: usize) -> Multivector {
        self.ctx.e(slot(j, bar, a))
    }

    /// `V₁^a = (λ̄₁∂/∂z₁ − λ̄₂∂/∂z̄₂)/N`, `V₂^a = (λ̄₁∂/∂z₂ + λ̄₂∂/∂z̄₁)/N`.
    pub fn v(&self, j: usize, a: usize) -> Result<Multivector> {
        let (l1, l2) = self.lambdas()?;
        let ni = self.norm_inv()?;
        let (c1, c2) = (&l1.conj() * &ni, &l2.conj() * &ni);
        Ok(match j {
            1 => self.del_z(1, false, a).scale(&c1).sub(&self.del_z(2, true, a).scale(&c2)),
            _ => self.del_z(2, false, a).scale(&c1).add(&self.del_z(1, true, a).scale(&c2)),
        })
    }

    /// `λ₁^{2−ℓ} λ₂^ℓ Σ V₁^a∧V₂^a`.
    pub fn poisson(&self, ell: usize) -> Result<Multivector> {
        let (l1, l2) = self.lambdas()?;
        let c = &l1.pow(2 - ell as i32)? * &l2.pow(ell as i32)?;
        let mut acc = Multivector::zero(self.ctx.basis());
        for a in 1..=self.m {
            acc = acc.add(&self.v(1, a)?.wedge(&self.v(2, a)?)?);
        }
        Ok(acc.scale(&c))
    }
}

/// `Ω̄₁^a = (λ̄₁dz̄₁ − λ̄₂dz₂)/N`, `Ω̄₂^a = (λ̄₁dz̄₂ + λ̄₂dz₁)/N`, ordered
/// `Ω̄₁^1, Ω̄₂^1, Ω̄₁^2, …`.
pub fn omega_basis(hc: &HomogeneousContext) -> Result<Vec<FormField>> {
    let (l1, l2) = hc.lambdas()?;
    let ni = hc.norm_inv()?;
    let (c1, c2) = (&l1.conj() * &ni, &l2.conj() * &ni);
    let mut out = Vec::with_capacity(2 * hc.m);
    for a in 1..=hc.m {
        out.push(hc.dz(1, true, a).scale(&c1).sub(&hc.dz(2, false, a).scale(&c2)));
        out.push(hc.dz(2, true, a).scale(&c1).add(&hc.dz(1, false, a).scale(&c2)));
    }
    Ok(out)
}

/// `𝒫(ω)`: the endomorphism `X ↦ 𝒫(ω(·, X))`.
pub fn contract(p: &Multivector, omega: &FormField) -> Result<VectorValuedForm> {
    if p.basis() != omega.basis() {
        return Err(Error::BasisMismatch);
    }
    let basis = p.basis().clone();
    let mut out = VectorValuedForm::zero(&basis);
    for j in 0..basis.dim() {
        let ej = Multivector::basis_element(&basis, j);
        let beta = form_interior(&ej, &omega.homogeneous(2))?.neg();
        if beta.is_zero() {
            continue;
        }
        let img = bivector_as_map(p, &beta)?;
        out = out.add(&VectorValuedForm::tensor(&img, &FormField::basis_element(&basis, j))?);
    }
    Ok(out)
}

/// `(X∧Y)(α∧β) = α(X) Y⊗β − α(Y) X⊗β − β(X) Y⊗α + β(Y) X⊗α`.
pub fn contract_decomposable(
    x: &Multivector,
    y: &Multivector,
    alpha: &FormField,
    beta: &FormField,
) -> Result<VectorValuedForm> {
    let t = |v: &Multivector, f: &FormField, c: Scalar| -> Result<VectorValuedForm> {
        Ok(VectorValuedForm::tensor(v, f)?.scale(&c))
    };
    Ok(t(y, beta, pair(x, alpha)?)?
        .sub(&t(x, beta, pair(y, alpha)?)?)
        .sub(&t(y, alpha, pair(x, beta)?)?)
        .add(&t(x, alpha, pair(y, beta)?)?))
}

/// The printed expansion with its third term read as `−β(X) α⊗Y`:
/// `α(Y) β⊗X − α(X) β⊗Y − β(X) α⊗Y + β(Y) α⊗X`.
pub fn contract_decomposable_printed(
    x: &Multivector,
    y: &Multivector,
    alpha: &FormField,
    beta: &FormField,
) -> Result<VectorValuedForm> {
    let t = |v: &Multivector, f: &FormField, c: Scalar| -> Result<VectorValuedForm> {
        Ok(VectorValuedForm::tensor(v, f)?.scale(&c))
    };
    Ok(t(x, beta, pair(y, alpha)?)?
        .sub(&t(y, beta, pair(x, alpha)?)?)
        .sub(&t(y, alpha, pair(x, beta)?)?)
        .add(&t(x, alpha, pair(y, beta)?)?))
}

/// The spanning family of `H₋`: `dz₁^a∧dz̄₁^b + dz̄₂^a∧dz₂^b` for all
/// `a, b`, and `dz₁^a∧dz̄₂^b − dz̄₂^a∧dz₁^b`, `dz₂^a∧dz̄₁^b − dz̄₁^a∧dz₂^b`
/// for `a ≤ b` (both are symmetric in `a, b`).
pub fn hminus_family(hc: &HomogeneousContext) -> Result<Vec<(String, FormField)>> {
    let m = hc.m;
    let dz = |j, bar, a| hc.dz(j, bar, a);
    let mut out = Vec::new();
    for a in 1..=m {
        for b in 1..=m {
            let w = dz(1, false, a).wedge(&dz(1, true, b))?.add(&dz(2, true, a).wedge(&dz(2, false, b))?);
            out.push((format!("A{a}{b}"), w));
        }
    }
    for a in 1..=m {
        for b in a..=m {
            let w = dz(1, false, a).wedge(&dz(2, true, b))?.sub(&dz(2, true, a).wedge(&dz(1, false, b))?);
            out.push((format!("B{a}{b}"), w));
        }
    }
    for a in 1..=m {
        for b in a..=m {
            let w = dz(2, false, a).wedge(&dz(1, true, b))?.sub(&dz(1, true, a).wedge(&dz(2, false, b))?);
            out.push((format!("C{a}{b}"), w));
        }
    }
    Ok(out)
}

/// Dimension of the joint fixed space of `I*` and `J*` on 2-forms.
pub fn hminus_dimension(hc: &HomogeneousContext) -> Result<usize> {
    let basis = hc.ctx.basis();
    let n = basis.dim();
    let flat = quaternionic::quaternionic_context(hc.m, false)?;
    let i = embed_operator(basis, flat.i_op()?, hc.m)?;
    let j = embed_operator(basis, flat.j_op()?, hc.m)?;
    let blades = crate::context::combinations(n, 2);
    let idx: HashMap<Vec<u16>, usize> = blades.iter().cloned().enumerate().map(|(k, b)| (b, k)).collect();
    let nb = blades.len();
    let mut mat = Matrix::zeros(2 * nb, nb);
    for (c, b) in blades.iter().enumerate() {
        let e = FormField::blade(basis, &[b[0] as usize, b[1] as usize], Scalar::one());
        for (r0, op) in [(0, &i), (nb, &j)] {
            let d = op.pullback(&e)?.sub(&e);
            for (bl, v) in d.terms() {
                mat.set(r0 + idx[bl], c, v.clone());
            }
        }
    }
    Ok(nb - mat.rank())
}

fn forms_matrix(forms: &[FormField]) -> Matrix {
    let n = forms.first().map(|f| f.basis().dim()).unwrap_or(0);
    let blades = crate::context::combinations(n, 2);
    Matrix::from_fn(forms.len(), blades.len(), |r, c| forms[r].coefficient(&blades[c]))
}

fn images_matrix(images: &[VectorValuedForm]) -> Matrix {
    let rows: Vec<Vec<Scalar>> = images.iter().map(|x| x.to_row()).collect();
    let width = rows.first().map(|r| r.len()).unwrap_or(0);
    // keep only columns that are nonzero somewhere
    let cols: Vec<usize> = (0..width).filter(|&c| rows.iter().any(|r| !r[c].is_zero())).collect();
    Matrix::from_fn(rows.len(), cols.len(), |r, c| rows[r][cols[c]].clone())
}

fn rank_report(id: &str, images: &[VectorValuedForm], expected: usize, want_full: bool) -> Report {
    let cert = images_matrix(images).rank_certificate();
    let ok = if want_full { cert.rank == expected } else { cert.rank < expected };
    let minor = format!("nonzero minor on rows {:?}: {}", cert.rows, cert.minor);
    let lhs = format!("rank {}; {minor}", cert.rank);
    let rhs = if want_full { format!("{expected}") } else { format!("< {expected}") };
    Report::holds(id, ok, lhs, rhs, || minor)
}

/// The injectivity scenario: `H₋` dimension, contraction images and their
/// rank for each family member, the image identities and the printed
/// contraction displays.
pub fn injectivity_checks(m: usize, ells: &[usize]) -> Result<Vec<Report>> {
    let hc = HomogeneousContext::new(m)?;
    let mut out = Vec::new();
    let expected = 2 * m * m + m;
    let family = hminus_family(&hc)?;
    let forms: Vec<FormField> = family.iter().map(|(_, w)| w.clone()).collect();

    let dim = hminus_dimension(&hc)?;
    out.push(Report::holds("injectivity.hminus_dimension", dim == expected, dim.to_string(), expected.to_string(), || {
        format!("joint fixed space of I* and J* has dimension {dim}")
    }));
    let flat = quaternionic::quaternionic_context(m, false)?;
    let i = embed_operator(hc.ctx.basis(), flat.i_op()?, m)?;
    let j = embed_operator(hc.ctx.basis(), flat.j_op()?, m)?;
    let mut outside = None;
    for (name, w) in &family {
        if i.pullback(w)? != *w || j.pullback(w)? != *w {
            outside = Some(name.clone());
            break;
        }
    }
    out.push(Report::holds(
        "injectivity.hminus_invariant",
        outside.is_none(),
        "I*w, J*w".into(),
        "w".into(),
        || format!("{} is not fixed", outside.clone().unwrap_or_default()),
    ));
    let span = forms_matrix(&forms).rank();
    out.push(Report::holds("injectivity.hminus_span", span == expected, span.to_string(), expected.to_string(), || {
        format!("family spans a space of dimension {span}")
    }));

    for &ell in ells {
        let p = hc.poisson(ell)?;
        let images: Vec<VectorValuedForm> = forms.iter().map(|w| contract(&p, w)).collect::<Result<_>>()?;
        out.push(rank_report(&format!("injectivity.rank.l{ell}"), &images, expected, true));
    }
    if m >= 2 {
        let p = hc.v(1, 1)?.wedge(&hc.v(2, 1)?)?;
        let images: Vec<VectorValuedForm> = forms.iter().map(|w| contract(&p, w)).collect::<Result<_>>()?;
        out.push(rank_report("injectivity.rank.degenerate_control", &images, expected, false));
    }

    // image identities for 𝒫 = Σ V₁∧V₂
    let p = hc.poisson(2)?.scale(&hc.lambdas()?.1.pow(-2)?);
    let om = omega_basis(&hc)?;
    let ob = |j: usize, a: usize| &om[2 * (a - 1) + j - 1];
    let tensor = |v: &Multivector, f: &FormField| VectorValuedForm::tensor(v, f);
    let (a, b) = (1, m);
    let dz = |j, bar, a| hc.dz(j, bar, a);
    let v = |j, a| hc.v(j, a);
    let w1 = dz(1, false, a).wedge(&dz(1, true, b))?.add(&dz(2, true, a).wedge(&dz(2, false, b))?);
    let e1 = tensor(&v(2, a)?, ob(1, b))?.add(&tensor(&v(1, b)?, ob(2, a))?);
    out.push(Report::identity("injectivity.image.a", &contract(&p, &w1)?, &e1));
    let w2 = dz(1, false, a).wedge(&dz(2, true, b))?.sub(&dz(2, true, a).wedge(&dz(1, false, b))?);
    let e2 = tensor(&v(2, a)?, ob(2, b))?.add(&tensor(&v(2, b)?, ob(2, a))?);
    out.push(Report::identity("injectivity.image.b", &contract(&p, &w2)?, &e2));
    let w3 = dz(2, false, a).wedge(&dz(1, true, b))?.sub(&dz(1, true, a).wedge(&dz(2, false, b))?);
    let e3 = tensor(&v(1, a)?, ob(1, b))?.add(&tensor(&v(1, b)?, ob(1, a))?).scale(&Scalar::from_int(-1));
    out.push(Report::identity("injectivity.image.c", &contract(&p, &w3)?, &e3));

    // the four printed contraction displays
    let (l1, l2) = hc.lambdas()?;
    let ni = hc.norm_inv()?;
    let (c1, c2) = (&l1.conj() * &ni, &l2.conj() * &ni);
    let displays: [(&str, (usize, usize), Multivector, FormField, Multivector, FormField, Scalar); 4] = [
        ("z1_z1b", (1, 1), v(2, a)?, dz(1, true, b), v(1, b)?, dz(1, true, a), Scalar::one()),
        ("z1_z2b", (1, 2), v(2, a)?, dz(2, true, b), v(2, b)?, dz(1, true, a), Scalar::one()),
        ("z2_z1b", (2, 1), v(1, a)?, dz(1, true, b), v(2, b)?, dz(2, true, a), Scalar::from_int(-1)),
        ("z2_z2b", (2, 2), v(1, a)?, dz(2, true, b), v(2, b)?, dz(2, true, a), Scalar::one()),
    ];
    for (name, (j, k), x1, f1, x2, f2, sign) in displays {
        let w = dz(j, false, a).wedge(&dz(k, true, b))?;
        let printed = tensor(&x1, &f1)?.scale(&(&sign * &c1)).add(&tensor(&x2, &f2)?.scale(&c2));
        out.push(Report::printed(&format!("injectivity.display.{name}"), &contract(&p, &w)?, &printed));
    }

    // decomposable rule, computed against the compositional definition
    let (x, y) = (v(1, a)?.add(&hc.del_z(2, true, b)), v(2, b)?.sub(&hc.del_z(1, false, a).scale(&l2)));
    let (al, be) = (dz(1, false, a).add(&dz(2, true, b).scale(&l1)), dz(1, true, b).sub(&dz(2, false, a)));
    let composed = contract(&x.wedge(&y)?, &al.wedge(&be)?)?;
    out.push(Report::identity("injectivity.expansion_rule", &composed, &contract_decomposable(&x, &y, &al, &be)?));
    out.push(Report::printed(
        "injectivity.expansion_rule.printed",
        &composed,
        &contract_decomposable_printed(&x, &y, &al, &be)?,
    ));

    // Ω̄-forms
    let at01: HashMap<Var, Scalar> = [
        (hc.ctx.var("l1")?, Scalar::zero()),
        (hc.ctx.var("l1b")?, Scalar::zero()),
        (hc.ctx.var("l2")?, Scalar::one()),
        (hc.ctx.var("l2b")?, Scalar::one()),
    ]
    .into_iter()
    .collect();
    let o1 = ob(1, 1).try_map_coeffs(|c| c.substitute(&at01, None))?;
    out.push(Report::identity("injectivity.omega.at_0_1", &o1, &dz(2, false, 1).neg()));
    let mut pairing_bad = None;
    for a in 1..=m {
        for j in 1..=2 {
            for k in 1..=2 {
                let vb = hc.ctx.conj_vector(&v(k, a)?)?;
                let want = if j == k { ni.clone() } else { Scalar::zero() };
                let got = pair(&vb, ob(j, a))?;
                let got_v = pair(&v(k, a)?, ob(j, a))?;
                if got != want || !got_v.is_zero() {
                    pairing_bad = Some(format!("Omegab{j}^{a} on V{k}^{a}: {got}, {got_v}"));
                }
            }
        }
    }
    out.push(Report::holds(
        "injectivity.omega.pairing",
        pairing_bad.is_none(),
        "Omegab_j(conj V_k), Omegab_j(V_k)".into(),
        "delta_jk/N, 0".into(),
        || pairing_bad.clone().unwrap_or_default(),
    ));
    // degree-0 objects λ_iΩ̄_j, λ_iV_j are unchanged under (λ₁, λ₂) ↦ (cλ₁, cλ₂)
    let (c, cb) = Var::pair("c", "cb");
    let scaling: HashMap<Var, Scalar> = [
        (hc.ctx.var("l1")?, &Scalar::var(&c) * &l1),
        (hc.ctx.var("l1b")?, &Scalar::var(&cb) * &l1.conj()),
        (hc.ctx.var("l2")?, &Scalar::var(&c) * &l2),
        (hc.ctx.var("l2b")?, &Scalar::var(&cb) * &l2.conj()),
    ]
    .into_iter()
    .collect();
    let mut moved = None;
    for lam in [&l1, &l2] {
        for w in &om {
            let x = w.scale(lam);
            if x.try_map_coeffs(|q| q.substitute(&scaling, None))? != x {
                moved = Some(format!("{x}"));
            }
        }
        for a in 1..=m {
            for j in 1..=2 {
                let x = v(j, a)?.scale(lam);
                if x.try_map_coeffs(|q| q.substitute(&scaling, None))? != x {
                    moved = Some(format!("{x}"));
                }
            }
        }
    }
    out.push(Report::holds(
        "injectivity.chart_covariance",
        moved.is_none(),
        "lambda_i Omegab_j, lambda_i V_j at (c l1, c l2)".into(),
        "unchanged".into(),
        || moved.clone().unwrap_or_default(),
    ));
    // homogeneous V at (λ, 1) against the chart-2 ∂/∂w
    let t2 = TwistorContext::new(m, Chart::Two)?;
    let h2 = holo_coords(&t2)?;
    let (lv, lbv) = lam_vars();
    let to_chart: HashMap<Var, Scalar> = [
        (hc.ctx.var("l1")?, Scalar::var(&lv)),
        (hc.ctx.var("l1b")?, Scalar::var(&lbv)),
        (hc.ctx.var("l2")?, Scalar::one()),
        (hc.ctx.var("l2b")?, Scalar::one()),
    ]
    .into_iter()
    .collect();
    let mut mismatch = None;
    for a in 1..=m {
        for j in 1..=2 {
            let hv = v(j, a)?.components();
            let cv = h2.pull(&h2.target.e(slot(j, false, a)))?.components();
            for k in 0..4 * m {
                if hv[k].substitute(&to_chart, None)? != cv[k] {
                    mismatch = Some(format!("V{j}^{a} component {k}"));
                }
            }
        }
    }
    out.push(Report::holds(
        "injectivity.v_matches_chart",
        mismatch.is_none(),
        "V_j(lam, 1)".into(),
        "d/dw_j".into(),
        || mismatch.clone().unwrap_or_default(),
    ));
    // (0,2)-forms contract to zero
    let w02 = ob(1, 1).wedge(ob(2, 1))?;
    out.push(Report::identity(
        "injectivity.kills_02",
        &contract(&hc.poisson(1)?, &w02)?,
        &VectorValuedForm::zero(hc.ctx.basis()),
    ));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::Status;

    fn noted(rs: &[Report]) -> Vec<&str> {
        assert!(rs.iter().all(|r| r.passed()), "{:?}", rs.iter().filter(|r| !r.passed()).collect::<Vec<_>>());
        rs.iter().filter(|r| r.status == Status::DiscrepancyNoted).map(|r| r.check_id.as_str()).collect()
    }

    #[test]
    fn flat_twistor_m1() {
        let rs = flat_twistor_checks(1).unwrap();
        assert_eq!(noted(&rs), ["flat.del_zetab"]);
    }

    #[test]
    fn section5_m1() {
        let rs = section5_checks(1).unwrap();
        assert_eq!(noted(&rs), ["section5.bracket_z1.s_frame", "section5.df.printed"]);
    }

    #[test]
    fn injectivity_m1() {
        let rs = injectivity_checks(1, &[0, 1, 2]).unwrap();
        assert_eq!(
            noted(&rs),
            [
                "injectivity.display.z1_z1b",
                "injectivity.display.z1_z2b",
                "injectivity.display.z2_z1b",
                "injectivity.display.z2_z2b",
                "injectivity.expansion_rule.printed"
            ]
        );
    }

    #[test]
    fn w0_is_lambda_dw1_plus_dw2() {
        let tc = TwistorContext::new(1, Chart::Two).unwrap();
        let h = holo_coords(&tc).unwrap();
        let w0 = h.push(&w_fields(&tc, 1).unwrap()[0]).unwrap();
        let zeta = Scalar::var(&h.target.var("zeta").unwrap());
        let want = h.target.e(0).scale(&zeta).add(&h.target.e(2));
        assert_eq!(w0, want);
    }

    #[test]
    fn transition_moves_dw_by_zetat() {
        let tr = chart_transition(1).unwrap();
        let zt = Scalar::var(&tr.target.var("zetat").unwrap());
        assert_eq!(tr.push(&tr.source.e(0)).unwrap(), tr.target.e(0).scale(&zt));
    }

    #[test]
    fn contraction_of_decomposable() {
        let hc = HomogeneousContext::new(1).unwrap();
        let (x, y) = (hc.del_z(1, false, 1), hc.del_z(2, false, 1));
        let (a, b) = (hc.dz(1, false, 1), hc.dz(2, true, 1));
        // ω(·, X) = α β(X) − β α(X); P(α) = α(X) Y − α(Y) X
        let got = contract(&x.wedge(&y).unwrap(), &a.wedge(&b).unwrap()).unwrap();
        assert_eq!(got, VectorValuedForm::tensor(&y, &b).unwrap());
    }

    #[test]
    fn degenerate_control_loses_rank() {
        let rs = injectivity_checks(2, &[]).unwrap();
        let r = rs.iter().find(|r| r.check_id == "injectivity.rank.degenerate_control").unwrap();
        assert_eq!(r.status, Status::Pass);
        let rank: usize = r.lhs[5..].split(';').next().unwrap().parse().unwrap();
        assert!(r.lhs.starts_with("rank ") && rank < 10);
    }
}
