//! Randomized algebraic properties shared by the property suites and the
//! acceptance harness. Each check returns the first counterexample found.

use crate::context::{ContextBuilder, FrameContext};
use crate::exterior::{invert_bivector, invert_form, type_project, BasisSpec, FormField, LinearOperator, Multivector};
use crate::linalg::Matrix;
use crate::sample::Sampler;
use crate::schouten::{schouten_coordinate, schouten_leibniz};

pub type Outcome = std::result::Result<(), String>;

fn engine<T>(r: crate::Result<T>, what: &str) -> std::result::Result<T, String> {
    r.map_err(|e| format!("{what}: {e}"))
}

/// Coordinate and Leibniz brackets agree on random bivector pairs.
pub fn cross_oracle(ctx: &FrameContext, sampler: &mut Sampler, count: usize) -> Outcome {
    for _ in 0..count {
        let p: Multivector = sampler.in_context(ctx, 2, 3);
        let q: Multivector = sampler.in_context(ctx, 2, 3);
        let a = engine(schouten_coordinate(ctx, &p, &q), "coordinate bracket")?;
        let b = engine(schouten_leibniz(ctx, &p, &q), "Leibniz bracket")?;
        if a != b {
            return Err(format!("P = {p}, Q = {q}: coordinate {a} vs Leibniz {b}"));
        }
    }
    Ok(())
}

/// `d∘d = 0` on random forms of degree 0 to 2.
pub fn d_squared(ctx: &FrameContext, sampler: &mut Sampler, count: usize) -> Outcome {
    for t in 0..count {
        let k = t % 3;
        let w: FormField = sampler.in_context(ctx, k, 3);
        let dw = engine(ctx.d_frame(&w), "d")?;
        let ddw = engine(ctx.d_frame(&dw), "d")?;
        if !ddw.is_zero() {
            return Err(format!("d(d({w})) = {ddw}"));
        }
    }
    Ok(())
}

/// The same frame after the constant change `f_j = Σ_i A_ij e_i`, named
/// `F0, F1, …`.
pub fn changed_frame(ctx: &FrameContext, a: &Matrix) -> crate::Result<FrameContext> {
    let n = ctx.dim();
    let names: Vec<String> = (0..n).map(|i| format!("F{i}")).collect();
    let covs: Vec<String> = (0..n).map(|i| format!("f{i}")).collect();
    let basis = BasisSpec::new(names, covs)?;
    let ainv = a.inverse()?;
    let to_new: Vec<Multivector> = (0..n).map(|i| Multivector::from_components(&basis, &ainv.col(i))).collect();
    let old_images: Vec<Multivector> = (0..n).map(|j| Multivector::from_components(ctx.basis(), &a.col(j))).collect();
    let mut b = ContextBuilder::new(&format!("{}.changed", ctx.name()), basis.clone());
    for v in ctx.vars().vars() {
        b = b.var(v);
    }
    if let Some(r) = ctx.root() {
        b = b.root(r);
    }
    for x in 0..n {
        for y in x + 1..n {
            let br = ctx.lie_bracket(&old_images[x], &old_images[y])?;
            b = b.bracket(x, y, br.transform(&to_new));
        }
    }
    for (x, img) in old_images.iter().enumerate() {
        for v in ctx.vars().vars() {
            let f = crate::Scalar::var(v);
            b = b.derivation(x, v, ctx.apply_vector(img, &f)?);
        }
    }
    b.build()
}

/// Brackets computed in a randomly changed frame and moved back agree with
/// the originals.
pub fn frame_change_invariance(ctx: &FrameContext, sampler: &mut Sampler, count: usize) -> Outcome {
    let n = ctx.dim();
    for _ in 0..count {
        let a = sampler.invertible_matrix(n);
        let changed = engine(changed_frame(ctx, &a), "changed frame")?;
        let ainv = engine(a.inverse(), "inverse")?;
        let to_new: Vec<Multivector> = (0..n).map(|i| Multivector::from_components(changed.basis(), &ainv.col(i))).collect();
        let back: Vec<Multivector> = (0..n).map(|j| Multivector::from_components(ctx.basis(), &a.col(j))).collect();
        let p: Multivector = sampler.in_context(ctx, 2, 3);
        let q: Multivector = sampler.in_context(ctx, 2, 3);
        let direct = engine(schouten_coordinate(ctx, &p, &q), "bracket")?;
        let moved = engine(schouten_coordinate(&changed, &p.transform(&to_new), &q.transform(&to_new)), "bracket")?;
        let returned = moved.transform(&back);
        if returned != direct {
            return Err(format!("P = {p}, Q = {q}: {direct} vs {returned} after the change"));
        }
    }
    Ok(())
}

/// The type projectors of `op` on grade-`k` elements are idempotent,
/// mutually annihilating and sum to the identity.
pub fn projector_algebra(ctx: &FrameContext, op: &LinearOperator, sampler: &mut Sampler, count: usize) -> Outcome {
    for t in 0..count {
        let k = 1 + t % 3;
        let x: Multivector = sampler.in_context(ctx, k, 3);
        let w: FormField = sampler.in_context(ctx, k, 3);
        projector_case(&x, op, k)?;
        projector_case(&w, op, k)?;
    }
    Ok(())
}

fn projector_case<K: crate::exterior::Kind>(x: &crate::exterior::Exterior<K>, op: &LinearOperator, k: usize) -> Outcome
where
    crate::exterior::Exterior<K>: crate::exterior::ProjectorImages,
{
    let parts: Vec<_> = (0..=k)
        .map(|p| engine(type_project(x, op, p, k - p), "projection"))
        .collect::<std::result::Result<_, _>>()?;
    let mut sum = crate::exterior::Exterior::<K>::zero(x.basis());
    for (p, part) in parts.iter().enumerate() {
        sum = sum.add(part);
        for q in 0..=k {
            let again = engine(type_project(part, op, q, k - q), "projection")?;
            let want = if p == q { part.clone() } else { crate::exterior::Exterior::<K>::zero(x.basis()) };
            if again != want {
                return Err(format!("pi({q},{}) pi({p},{}) fails on {x}", k - q, k - p));
            }
        }
    }
    if &sum != x {
        return Err(format!("projections of {x} sum to {sum}"));
    }
    Ok(())
}

/// `invert_form ∘ invert_bivector = id` on random nondegenerate bivectors
/// with one coefficient depending on an indeterminate, with and without a
/// complex structure (then on `(2,0)` bivectors; the `(1,0)` block must
/// have even dimension).
pub fn invert_round_trip(ctx: &FrameContext, op: Option<&LinearOperator>, sampler: &mut Sampler, count: usize) -> Outcome {
    let n = ctx.dim();
    let mut done = 0;
    let mut attempts = 0;
    while done < count {
        attempts += 1;
        if attempts > 20 * count {
            return Err("could not sample nondegenerate bivectors".into());
        }
        let dense: Multivector = sampler.element(ctx.basis(), 2, n * n, &[]);
        let vars: Vec<crate::Var> = ctx.vars().vars().take(1).cloned().collect();
        let raw = dense.add(&sampler.element(ctx.basis(), 2, 1, &vars));
        let p = match op {
            Some(i) => engine(type_project(&raw, i, 2, 0), "projection")?,
            None => raw,
        };
        let w = match invert_bivector(&p, op) {
            Ok(w) => w,
            Err(crate::Error::DegenerateBivector { .. }) => continue,
            Err(e) => return Err(format!("invert_bivector: {e}")),
        };
        let back = engine(invert_form(&w, op), "invert_form")?;
        if back != p {
            return Err(format!("P = {p}: round trip gives {back}"));
        }
        done += 1;
    }
    Ok(())
}
