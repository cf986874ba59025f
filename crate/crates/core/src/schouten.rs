//! Schouten–Nijenhuis brackets, the complex Poisson predicate and the
//! bivector/2-form duality check.

use crate::context::FrameContext;
use crate::error::{Error, Result};
use crate::exterior::{invert_bivector, type_project, LinearOperator, Multivector};
use crate::report::{Report, Status};
use crate::scalar::Scalar;
use crate::Del;

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Algorithm {
    Coordinate,
    Leibniz,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BracketResult {
    pub value: Multivector,
    pub algorithm: Algorithm,
}

fn bivector_check(ctx: &FrameContext, p: &Multivector) -> Result<()> {
    if !(std::sync::Arc::ptr_eq(ctx.basis(), p.basis()) || **ctx.basis() == **p.basis()) {
        return Err(Error::BasisMismatch);
    }
    match p.grade() {
        Some(2) | None => Ok(()),
        Some(g) => Err(Error::GradeError(format!("coordinate bracket needs bivectors, got grade {g}"))),
    }
}

/// Component form of the bracket of two bivectors:
/// `[P,Q]^{ijk} = Σ_cyc (P^{ih} e_h(Q^{jk}) + Q^{ih} e_h(P^{jk}))` plus the
/// alternation of `Σ_{a,c} P^{ab} Q^{cd} c^m_{ac}` over `(m, b, d)`.
pub fn schouten_coordinate(ctx: &FrameContext, p: &Multivector, q: &Multivector) -> Result<Multivector> {
    bivector_check(ctx, p)?;
    bivector_check(ctx, q)?;
    let n = ctx.dim();
    let comp = |x: &Multivector| {
        let mut m = vec![vec![Scalar::zero(); n]; n];
        for (b, c) in x.terms() {
            if b.len() == 2 {
                let (i, j) = (b[0] as usize, b[1] as usize);
                m[i][j] = c.clone();
                m[j][i] = -c;
            }
        }
        m
    };
    let (pm, qm) = (comp(p), comp(q));
    // e_h(X^{jk}) for every h carrying derivations
    let derived = |xm: &Vec<Vec<Scalar>>| {
        let mut out: Vec<Option<Vec<Vec<Scalar>>>> = vec![None; n];
        for (h, slot) in out.iter_mut().enumerate() {
            if !ctx.has_derivations(h) {
                continue;
            }
            let mut d = vec![vec![Scalar::zero(); n]; n];
            let mut any = false;
            for j in 0..n {
                for k in j + 1..n {
                    if !xm[j][k].is_zero() {
                        let v = ctx.derive(h, &xm[j][k]);
                        if !v.is_zero() {
                            d[k][j] = -&v;
                            d[j][k] = v;
                            any = true;
                        }
                    }
                }
            }
            if any {
                *slot = Some(d);
            }
        }
        out
    };
    let (dp, dq) = (derived(&pm), derived(&qm));

    // T[m][b][d] = Σ_{a,c} P^{ab} Q^{cd} c^m_{ac}
    let mut t: std::collections::HashMap<(usize, usize, usize), Scalar> = std::collections::HashMap::new();
    for (a, c, br) in ctx.bracket_table() {
        for (x, y, sign) in [(a, c, 1i64), (c, a, -1i64)] {
            for b in 0..n {
                if pm[x][b].is_zero() {
                    continue;
                }
                for d in 0..n {
                    if qm[y][d].is_zero() {
                        continue;
                    }
                    let f = &pm[x][b] * &qm[y][d];
                    for (bm, cm) in br.terms() {
                        let v = &f * cm;
                        let e = t.entry((bm[0] as usize, b, d)).or_insert_with(Scalar::zero);
                        if sign > 0 {
                            *e += &v;
                        } else {
                            *e -= &v;
                        }
                    }
                }
            }
        }
    }

    let mut out = Multivector::zero(ctx.basis());
    let mut triples: Vec<[usize; 3]> = Vec::new();
    let has_derivs = dp.iter().chain(dq.iter()).any(|d| d.is_some());
    if has_derivs {
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    triples.push([i, j, k]);
                }
            }
        }
    } else {
        let mut seen: Vec<[usize; 3]> = t
            .keys()
            .filter_map(|&(m, b, d)| {
                let mut s = [m, b, d];
                s.sort_unstable();
                (s[0] != s[1] && s[1] != s[2]).then_some(s)
            })
            .collect();
        seen.sort_unstable();
        seen.dedup();
        triples = seen;
    }
    const PERMS: [([usize; 3], i64); 6] =
        [([0, 1, 2], 1), ([1, 2, 0], 1), ([2, 0, 1], 1), ([1, 0, 2], -1), ([0, 2, 1], -1), ([2, 1, 0], -1)];
    for [i, j, k] in triples {
        let mut val = Scalar::zero();
        if has_derivs {
            for (x, y, z) in [(i, j, k), (j, k, i), (k, i, j)] {
                for h in 0..n {
                    if let Some(d) = &dq[h] {
                        if !pm[x][h].is_zero() && !d[y][z].is_zero() {
                            val += &(&pm[x][h] * &d[y][z]);
                        }
                    }
                    if let Some(d) = &dp[h] {
                        if !qm[x][h].is_zero() && !d[y][z].is_zero() {
                            val += &(&qm[x][h] * &d[y][z]);
                        }
                    }
                }
            }
        }
        let idx = [i, j, k];
        for (perm, sign) in PERMS {
            if let Some(v) = t.get(&(idx[perm[0]], idx[perm[1]], idx[perm[2]])) {
                if sign > 0 {
                    val += v;
                } else {
                    val -= v;
                }
            }
        }
        if !val.is_zero() {
            out.add_blade(vec![i as u16, j as u16, k as u16], val);
        }
    }
    Ok(out)
}

/// Splits each term into vector factors, with the coefficient on the first.
fn decomposables(ctx: &FrameContext, x: &Multivector) -> Vec<Vec<Multivector>> {
    x.terms()
        .map(|(b, c)| {
            b.iter()
                .enumerate()
                .map(|(pos, &i)| {
                    let e = ctx.e(i as usize);
                    if pos == 0 {
                        e.scale(c)
                    } else {
                        e
                    }
                })
                .collect()
        })
        .collect()
}

/// Bracket by bilinear extension from decomposables,
/// `[X₁∧…∧X_a, Y₁∧…∧Y_b] = Σ (−1)^{i+j} [X_i,Y_j]∧X₁…X̂_i…X_a∧Y₁…Ŷ_j…Y_b`,
/// with Lie brackets on the vector factors. Grades must be at least 1.
pub fn schouten_leibniz(ctx: &FrameContext, p: &Multivector, q: &Multivector) -> Result<Multivector> {
    for x in [p, q] {
        if !(std::sync::Arc::ptr_eq(ctx.basis(), x.basis()) || **ctx.basis() == **x.basis()) {
            return Err(Error::BasisMismatch);
        }
        if x.terms().any(|(b, _)| b.is_empty()) {
            return Err(Error::GradeError("Leibniz bracket needs grade at least 1".into()));
        }
    }
    let mut out = Multivector::zero(ctx.basis());
    let (dp, dq) = (decomposables(ctx, p), decomposables(ctx, q));
    for xs in &dp {
        for ys in &dq {
            for (i, xi) in xs.iter().enumerate() {
                for (j, yj) in ys.iter().enumerate() {
                    let br = ctx.lie_bracket(xi, yj)?;
                    if br.is_zero() {
                        continue;
                    }
                    let mut parts = vec![br];
                    parts.extend(xs.iter().enumerate().filter(|&(k, _)| k != i).map(|(_, v)| v.clone()));
                    parts.extend(ys.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, v)| v.clone()));
                    let w = Multivector::wedge_all(ctx.basis(), &parts)?;
                    out = if (i + j) % 2 == 0 { out.add(&w) } else { out.sub(&w) };
                }
            }
        }
    }
    Ok(out)
}

/// Bracket by the requested route.
pub fn schouten(ctx: &FrameContext, p: &Multivector, q: &Multivector, algorithm: Algorithm) -> Result<BracketResult> {
    let value = match algorithm {
        Algorithm::Coordinate => schouten_coordinate(ctx, p, q)?,
        Algorithm::Leibniz => schouten_leibniz(ctx, p, q)?,
    };
    Ok(BracketResult { value, algorithm })
}

/// Type purity `π_{2,0}P = P` and `[P,P] = 0`, as two reports
/// `<prefix>.type_purity` and `<prefix>.bracket`.
pub fn is_complex_poisson(ctx: &FrameContext, p: &Multivector, op: &LinearOperator, prefix: &str) -> Vec<Report> {
    let purity = match type_project(p, op, 2, 0) {
        Ok(p20) => {
            let rest = p.sub(&p20);
            Report::holds(
                &format!("{prefix}.type_purity"),
                rest.is_zero(),
                format!("pi20(P) = {p20}"),
                format!("P = {p}"),
                || format!("non-(2,0) part {}", rest.leading_term().map(|t| t.to_string()).unwrap_or_default()),
            )
        }
        Err(e) => Report::error(&format!("{prefix}.type_purity"), e),
    };
    let bracket = match schouten_coordinate(ctx, p, p) {
        Ok(pp) => Report::identity(&format!("{prefix}.bracket"), &pp, &Multivector::zero(ctx.basis())),
        Err(e) => Report::error(&format!("{prefix}.bracket"), e),
    };
    vec![purity, bracket]
}

/// `∂(P⁻¹) = 0` if and only if `[P,P] = 0`, for `P` nondegenerate on the
/// `(1,0)` block of `op`.
pub fn check_duality(ctx: &FrameContext, p: &Multivector, op: &LinearOperator, check_id: &str) -> Result<Report> {
    let omega = invert_bivector(p, Some(op))?;
    let del = ctx.del_operator(op, &omega, Del::Holomorphic)?;
    let pp = schouten_coordinate(ctx, p, p)?;
    let lhs = format!("del(P^-1) = {del}");
    let rhs = format!("[P,P] = {pp}");
    let status = if del.is_zero() == pp.is_zero() { Status::Pass } else { Status::Fail };
    let witness = (status == Status::Fail).then(|| {
        format!(
            "del(P^-1) {} but [P,P] {}",
            if del.is_zero() { "vanishes" } else { "does not vanish" },
            if pp.is_zero() { "vanishes" } else { "does not vanish" }
        )
    });
    Ok(Report::new(check_id, status, lhs, rhs, witness))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exterior::BasisSpec;
    use crate::scalar::Var;
    use crate::ContextBuilder;

    #[test]
    fn abelian_constant_bracket_vanishes() {
        let basis = BasisSpec::with_dual_prefix(&["x", "y", "z", "w"]);
        let ctx = ContextBuilder::new("ab", basis.clone()).build().unwrap();
        let p = Multivector::blade(&basis, &[0, 1], Scalar::from_int(3))
            .add(&Multivector::blade(&basis, &[2, 3], Scalar::i()));
        assert!(schouten_coordinate(&ctx, &p, &p).unwrap().is_zero());
        assert!(schouten_leibniz(&ctx, &p, &p).unwrap().is_zero());
    }

    #[test]
    fn coordinate_matches_leibniz_with_derivatives() {
        let coords: Vec<Var> = ["w", "x", "y", "z"].iter().map(|s| Var::real(s)).collect();
        let ctx = FrameContext::coordinates("r4", &coords, None).unwrap();
        let z = Scalar::var(&coords[3]);
        let p = Multivector::blade(ctx.basis(), &[1, 2], z).add(&Multivector::blade(ctx.basis(), &[3, 0], Scalar::one()));
        let a = schouten_coordinate(&ctx, &p, &p).unwrap();
        let b = schouten_leibniz(&ctx, &p, &p).unwrap();
        assert_eq!(a, b);
        // [P,P] = 2 P^{zw} ∂_z(P^{xy}) up to ordering: −2 ∂x∧∂y∧∂w
        assert_eq!(a, Multivector::blade(ctx.basis(), &[0, 1, 2], Scalar::from_int(-2)));
    }

    #[test]
    fn vector_bracket_is_lie_bracket() {
        let coords = [Var::real("x"), Var::real("y")];
        let ctx = FrameContext::coordinates("r2", &coords, None).unwrap();
        let x = ctx.e(0).scale(&Scalar::var(&coords[1]));
        let y = ctx.e(1);
        assert_eq!(schouten_leibniz(&ctx, &x, &y).unwrap(), ctx.lie_bracket(&x, &y).unwrap());
    }
}
