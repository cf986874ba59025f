//! Frame contexts: a finite frame with a bracket table and derivation actions
//! on indeterminates, standing in for a Lie group or a coordinate chart.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exterior::{form_interior, type_project, BasisSpec, FormField, LinearOperator, Multivector};
use crate::linalg::Matrix;
use crate::scalar::{RootRelation, Scalar, Var, VarTable};

/// Grade-1 multivector over a context frame.
pub type VectorField = Multivector;

/// Which half of `d` to keep.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Del {
    /// `∂ = π_{p+1,q}∘d`
    Holomorphic,
    /// `∂̄ = π_{p,q+1}∘d`
    Antiholomorphic,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FrameContext {
    name: String,
    vars: VarTable,
    basis: Arc<BasisSpec>,
    brackets: BTreeMap<(u16, u16), Multivector>,
    derivations: Vec<BTreeMap<Var, Scalar>>,
    conjugation: Option<Matrix>,
    structures: [Option<LinearOperator>; 3],
    metric: Option<Matrix>,
}

#[derive(Clone, Debug)]
pub struct ContextBuilder {
    name: String,
    vars: VarTable,
    basis: Arc<BasisSpec>,
    brackets: BTreeMap<(u16, u16), Multivector>,
    derivations: Vec<BTreeMap<Var, Scalar>>,
    conjugation: Option<Matrix>,
    structures: [Option<LinearOperator>; 3],
    metric: Option<Matrix>,
}

impl ContextBuilder {
    pub fn new(name: &str, basis: Arc<BasisSpec>) -> Self {
        let n = basis.dim();
        ContextBuilder {
            name: name.to_string(),
            vars: VarTable::new(),
            basis,
            brackets: BTreeMap::new(),
            derivations: vec![BTreeMap::new(); n],
            conjugation: None,
            structures: [None, None, None],
            metric: None,
        }
    }

    pub fn basis(&self) -> &Arc<BasisSpec> {
        &self.basis
    }

    pub fn var(mut self, v: &Var) -> Self {
        self.vars.insert(v.clone());
        self
    }

    pub fn var_pair(self, pair: &(Var, Var)) -> Self {
        self.var(&pair.0).var(&pair.1)
    }

    pub fn root(mut self, r: &Arc<RootRelation>) -> Self {
        self.vars.set_root(r.clone());
        self
    }

    /// Sets `[e_i, e_j] = v` and `[e_j, e_i] = −v`.
    pub fn bracket(mut self, i: usize, j: usize, v: Multivector) -> Self {
        self.brackets.insert((j as u16, i as u16), v.neg());
        self.brackets.insert((i as u16, j as u16), v);
        self
    }

    /// Sets one ordered entry only; antisymmetry is checked by [`build`](Self::build).
    pub fn bracket_entry(mut self, i: usize, j: usize, v: Multivector) -> Self {
        self.brackets.insert((i as u16, j as u16), v);
        self
    }

    /// `e_i(x) = value`.
    pub fn derivation(mut self, i: usize, x: &Var, value: Scalar) -> Self {
        if !value.is_zero() {
            self.derivations[i].insert(x.clone(), value);
        }
        self
    }

    /// Column `j` holds the components of `conj(e_j)`.
    pub fn conjugation(mut self, c: Matrix) -> Self {
        self.conjugation = Some(c);
        self
    }

    /// `k = 0, 1, 2` for `I, J, K`.
    pub fn structure(mut self, k: usize, op: LinearOperator) -> Self {
        self.structures[k] = Some(op);
        self
    }

    pub fn metric(mut self, g: Matrix) -> Self {
        self.metric = Some(g);
        self
    }

    pub fn build(self) -> Result<FrameContext> {
        let n = self.basis.dim();
        let name_of = |i: u16| self.basis.vector_names()[i as usize].clone();
        let mut brackets = BTreeMap::new();
        for (&(i, j), v) in &self.brackets {
            if v.basis() != &self.basis {
                return Err(Error::BasisMismatch);
            }
            if v.is_zero() {
                continue;
            }
            if i == j {
                return Err(Error::InvalidContext(format!("[{0}, {0}] must vanish", name_of(i))));
            }
            if let Some(w) = self.brackets.get(&(j, i)) {
                if &w.neg() != v {
                    return Err(Error::InvalidContext(format!(
                        "bracket table not antisymmetric for pair ({}, {})",
                        name_of(i),
                        name_of(j)
                    )));
                }
            }
            if v.grade() != Some(1) {
                return Err(Error::InvalidContext(format!("[{}, {}] is not a vector", name_of(i), name_of(j))));
            }
            let (a, b, w) = if i < j { (i, j, v.clone()) } else { (j, i, v.neg()) };
            brackets.insert((a, b), w);
        }
        let ctx = FrameContext {
            name: self.name,
            vars: self.vars,
            basis: self.basis,
            brackets,
            derivations: self.derivations,
            conjugation: self.conjugation,
            structures: self.structures,
            metric: self.metric,
        };
        ctx.validate(n)?;
        Ok(ctx)
    }
}

impl FrameContext {
    /// Coordinate context with one frame vector `D<x>` per coordinate `x`,
    /// acting as `∂/∂x`; all brackets vanish. Paired coordinates get the
    /// swapping conjugation.
    pub fn coordinates(name: &str, coords: &[Var], root: Option<&Arc<RootRelation>>) -> Result<FrameContext> {
        let mut b = coordinate_builder(name, coords)?;
        if let Some(r) = root {
            b = b.root(r);
        }
        b.build()
    }

    fn validate(&self, n: usize) -> Result<()> {
        let name_of = |i: usize| self.basis.vector_names()[i].clone();
        // derivations must respect brackets: [e_i, e_j](x) = e_i e_j x − e_j e_i x
        let all_vars: Vec<Var> = {
            let mut v: Vec<Var> = self.derivations.iter().flat_map(|d| d.keys().cloned()).collect();
            v.sort();
            v.dedup();
            v
        };
        for i in 0..n {
            for j in i + 1..n {
                let br = self.bracket_basis(i, j);
                for x in &all_vars {
                    let xs = Scalar::var(x);
                    let lhs = self.apply_vector(&br, &xs)?;
                    let rhs = &self.derive(i, &self.derive(j, &xs)) - &self.derive(j, &self.derive(i, &xs));
                    if lhs != rhs {
                        return Err(Error::InvalidContext(format!(
                            "derivations of {} and {} do not respect their bracket on {x}",
                            name_of(i),
                            name_of(j)
                        )));
                    }
                }
            }
        }
        let jacobi = |i: usize, j: usize, k: usize| -> Result<()> {
            let e = |a: usize| Multivector::basis_element(&self.basis, a);
            let t1 = self.lie_bracket(&self.lie_bracket(&e(i), &e(j))?, &e(k))?;
            let t2 = self.lie_bracket(&self.lie_bracket(&e(j), &e(k))?, &e(i))?;
            let t3 = self.lie_bracket(&self.lie_bracket(&e(k), &e(i))?, &e(j))?;
            if !t1.add(&t2).add(&t3).is_zero() {
                return Err(Error::InvalidContext(format!(
                    "Jacobi identity fails for ({}, {}, {})",
                    name_of(i),
                    name_of(j),
                    name_of(k)
                )));
            }
            Ok(())
        };
        if !self.brackets.is_empty() {
            if n <= 16 {
                for i in 0..n {
                    for j in i + 1..n {
                        for k in j + 1..n {
                            jacobi(i, j, k)?;
                        }
                    }
                }
            } else {
                let mut rng = ChaCha8Rng::seed_from_u64(0x4a61636f6269);
                for _ in 0..400 {
                    let (i, j, k) = (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n));
                    if i != j && j != k && i != k {
                        jacobi(i, j, k)?;
                    }
                }
            }
        }
        if let Some(c) = &self.conjugation {
            if c.rows() != n || !c.is_square() {
                return Err(Error::InvalidContext("conjugation matrix has the wrong size".into()));
            }
            if c.mul(&c.conj()) != Matrix::identity(n) {
                return Err(Error::InvalidContext("conjugation is not an involution".into()));
            }
        }
        for (k, s) in self.structures.iter().enumerate() {
            if let Some(op) = s {
                if op.basis() != &self.basis {
                    return Err(Error::BasisMismatch);
                }
                if !op.is_complex_structure() {
                    return Err(Error::InvalidContext(format!("{} does not square to -1", ["I", "J", "K"][k])));
                }
            }
        }
        if let [Some(i), Some(j), Some(k)] = &self.structures {
            if i.compose(j) != *k {
                return Err(Error::InvalidContext("IJ != K".into()));
            }
            if j.compose(i) != k.scale(&Scalar::from_int(-1)) {
                return Err(Error::InvalidContext("JI != -K".into()));
            }
        }
        if let Some(g) = &self.metric {
            if g.rows() != n || !g.is_square() {
                return Err(Error::InvalidContext("metric has the wrong size".into()));
            }
            if g.transpose() != *g {
                return Err(Error::InvalidContext("metric is not symmetric".into()));
            }
            if let Some(c) = &self.conjugation {
                if c.transpose().mul(g).mul(c) != g.conj() {
                    return Err(Error::InvalidContext("metric is not compatible with conjugation".into()));
                }
            }
        }
        Ok(())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn basis(&self) -> &Arc<BasisSpec> {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    pub fn vars(&self) -> &VarTable {
        &self.vars
    }

    pub fn var(&self, name: &str) -> Result<Var> {
        self.vars.get(name).cloned().ok_or_else(|| Error::UnknownSymbol(name.to_string()))
    }

    pub fn root(&self) -> Option<&Arc<RootRelation>> {
        self.vars.root()
    }

    pub fn conjugation(&self) -> Option<&Matrix> {
        self.conjugation.as_ref()
    }

    pub fn metric(&self) -> Option<&Matrix> {
        self.metric.as_ref()
    }

    pub fn structure(&self, k: usize) -> Option<&LinearOperator> {
        self.structures[k].as_ref()
    }

    pub fn i_op(&self) -> Result<&LinearOperator> {
        self.structure(0).ok_or(Error::MissingStructures)
    }

    pub fn j_op(&self) -> Result<&LinearOperator> {
        self.structure(1).ok_or(Error::MissingStructures)
    }

    pub fn k_op(&self) -> Result<&LinearOperator> {
        self.structure(2).ok_or(Error::MissingStructures)
    }

    /// Nonzero bracket entries `[e_i, e_j]` with `i < j`.
    pub fn bracket_table(&self) -> impl Iterator<Item = (usize, usize, &Multivector)> {
        self.brackets.iter().map(|(&(i, j), v)| (i as usize, j as usize, v))
    }

    /// Nonzero derivation entries `e_i(x)`.
    pub fn derivation_table(&self) -> impl Iterator<Item = (usize, &Var, &Scalar)> {
        self.derivations.iter().enumerate().flat_map(|(i, d)| d.iter().map(move |(x, v)| (i, x, v)))
    }

    pub fn vector(&self, name: &str) -> Result<Multivector> {
        Multivector::named(&self.basis, name)
    }

    pub fn covector(&self, name: &str) -> Result<FormField> {
        FormField::named(&self.basis, name)
    }

    pub fn e(&self, i: usize) -> Multivector {
        Multivector::basis_element(&self.basis, i)
    }

    pub fn dual(&self, i: usize) -> FormField {
        FormField::basis_element(&self.basis, i)
    }

    /// `[e_i, e_j]`.
    pub fn bracket_basis(&self, i: usize, j: usize) -> Multivector {
        use std::cmp::Ordering::*;
        match i.cmp(&j) {
            Equal => Multivector::zero(&self.basis),
            Less => self.brackets.get(&(i as u16, j as u16)).cloned().unwrap_or_else(|| Multivector::zero(&self.basis)),
            Greater => self
                .brackets
                .get(&(j as u16, i as u16))
                .map(|v| v.neg())
                .unwrap_or_else(|| Multivector::zero(&self.basis)),
        }
    }

    /// Structure function `c^m_{ij}`: component of `[e_i, e_j]` along `e_m`.
    pub fn structure_constant(&self, m: usize, i: usize, j: usize) -> Scalar {
        self.bracket_basis(i, j).coefficient(&[m as u16])
    }

    /// Frame vector `e_i` acting on a scalar.
    pub fn derive(&self, i: usize, f: &Scalar) -> Scalar {
        let mut acc = Scalar::zero();
        for (x, v) in &self.derivations[i] {
            if f.depends_on(x) {
                acc += &(v * &f.partial(x));
            }
        }
        acc
    }

    pub fn has_derivations(&self, i: usize) -> bool {
        !self.derivations[i].is_empty()
    }

    /// `X(f)` for a vector field `X`.
    pub fn apply_vector(&self, x: &VectorField, f: &Scalar) -> Result<Scalar> {
        let mut acc = Scalar::zero();
        for (b, c) in x.terms() {
            if b.len() != 1 {
                return Err(Error::GradeError("expected a vector field".into()));
            }
            let d = self.derive(b[0] as usize, f);
            if !d.is_zero() {
                acc += &(c * &d);
            }
        }
        Ok(acc)
    }

    fn check_basis(&self, b: &Arc<BasisSpec>) -> Result<()> {
        if Arc::ptr_eq(&self.basis, b) || *self.basis == **b {
            Ok(())
        } else {
            Err(Error::BasisMismatch)
        }
    }

    /// `[X, Y]` with `[fX, gY] = fg[X,Y] + f X(g) Y − g Y(f) X`.
    pub fn lie_bracket(&self, x: &VectorField, y: &VectorField) -> Result<VectorField> {
        self.check_basis(x.basis())?;
        self.check_basis(y.basis())?;
        let mut r = Multivector::zero(&self.basis);
        for (bx, cx) in x.terms() {
            for (by, cy) in y.terms() {
                if bx.len() != 1 || by.len() != 1 {
                    return Err(Error::GradeError("lie_bracket expects vector fields".into()));
                }
                let (a, b) = (bx[0] as usize, by[0] as usize);
                let br = self.bracket_basis(a, b);
                if !br.is_zero() {
                    r = r.add(&br.scale(&(cx * cy)));
                }
                let xg = self.derive(a, cy);
                if !xg.is_zero() {
                    r.add_blade(vec![b as u16], cx * &xg);
                }
                let yf = self.derive(b, cx);
                if !yf.is_zero() {
                    r.add_blade(vec![a as u16], -(cy * &yf));
                }
            }
        }
        Ok(r)
    }

    /// Exterior derivative by the invariant (Koszul) formula on frame tuples.
    pub fn d_frame(&self, alpha: &FormField) -> Result<FormField> {
        self.check_basis(alpha.basis())?;
        let n = self.dim();
        let mut out = FormField::zero(&self.basis);
        let mut grades: Vec<usize> = alpha.terms().map(|(b, _)| b.len()).collect();
        grades.sort_unstable();
        grades.dedup();
        for p in grades {
            let a = alpha.homogeneous(p);
            if p + 1 > n {
                continue;
            }
            let value = |blade: &[u16]| a.coefficient(blade);
            for t in combinations(n, p + 1) {
                let mut val = Scalar::zero();
                for r in 0..=p {
                    let h = t[r] as usize;
                    if !self.has_derivations(h) {
                        continue;
                    }
                    let mut rest = t.clone();
                    rest.remove(r);
                    let c = value(&rest);
                    if c.is_zero() {
                        continue;
                    }
                    let dv = self.derive(h, &c);
                    if r % 2 == 0 {
                        val += &dv;
                    } else {
                        val -= &dv;
                    }
                }
                for r in 0..=p {
                    for s in r + 1..=p {
                        let br = self.bracket_basis(t[r] as usize, t[s] as usize);
                        if br.is_zero() {
                            continue;
                        }
                        let mut rest = t.clone();
                        rest.remove(s);
                        rest.remove(r);
                        for (bm, cm) in br.terms() {
                            let mut idx = vec![bm[0]];
                            idx.extend_from_slice(&rest);
                            let Some((sign, sorted)) = crate::exterior::sort_blade(idx) else { continue };
                            let c = value(&sorted);
                            if c.is_zero() {
                                continue;
                            }
                            let term = cm * &c;
                            if ((r + s) % 2 == 0) == (sign > 0) {
                                val += &term;
                            } else {
                                val -= &term;
                            }
                        }
                    }
                }
                if !val.is_zero() {
                    out.add_blade(t, val);
                }
            }
        }
        Ok(out)
    }

    /// `∂` or `∂̄` with respect to the complex structure `op`, applied
    /// componentwise over the type decomposition of `alpha`.
    pub fn del_operator(&self, op: &LinearOperator, alpha: &FormField, variant: Del) -> Result<FormField> {
        let mut out = FormField::zero(&self.basis);
        let mut grades: Vec<usize> = alpha.terms().map(|(b, _)| b.len()).collect();
        grades.sort_unstable();
        grades.dedup();
        for k in grades {
            let a = alpha.homogeneous(k);
            for p in 0..=k {
                let comp = type_project(&a, op, p, k - p)?;
                if comp.is_zero() {
                    continue;
                }
                let dc = self.d_frame(&comp)?;
                let part = match variant {
                    Del::Holomorphic => type_project(&dc, op, p + 1, k - p)?,
                    Del::Antiholomorphic => type_project(&dc, op, p, k - p + 1)?,
                };
                out = out.add(&part);
            }
        }
        Ok(out)
    }

    /// `ω_A(X, Y) = g(AX, Y)`.
    pub fn fundamental_form(&self, a: &LinearOperator) -> Result<FormField> {
        let g = self.metric.as_ref().ok_or(Error::MissingMetric)?;
        let am = a.matrix();
        if am.transpose().mul(g).mul(am) != *g {
            return Err(Error::NotCompatible);
        }
        let om = am.transpose().mul(g);
        if om.transpose() != om.scale(&Scalar::from_int(-1)) {
            return Err(Error::NotCompatible);
        }
        Ok(crate::exterior::form_from_matrix(&self.basis, &om))
    }

    /// Metric dual: `g(♯α, Y) = α(Y)`.
    pub fn sharp(&self, alpha: &FormField) -> Result<VectorField> {
        let g = self.metric.as_ref().ok_or(Error::MissingMetric)?;
        let ginv = g.inverse()?;
        Ok(Multivector::from_components(&self.basis, &ginv.mul_vec(&alpha.components())))
    }

    /// `X ↦ i_X ω`.
    pub fn form_map(&self, omega: &FormField, x: &VectorField) -> Result<FormField> {
        form_interior(x, omega)
    }

    /// Inverse of [`form_map`](Self::form_map): the `X` with `i_X ω = α`.
    pub fn form_inverse_map(&self, omega: &FormField, alpha: &FormField) -> Result<VectorField> {
        let om = crate::exterior::form_matrix(omega);
        let inv = om.transpose().inverse()?;
        Ok(Multivector::from_components(&self.basis, &inv.mul_vec(&alpha.components())))
    }

    fn conj_matrix(&self) -> Result<&Matrix> {
        self.conjugation.as_ref().ok_or_else(|| Error::InvalidContext("context has no conjugation".into()))
    }

    /// Complex conjugate of a multivector.
    pub fn conj_vector(&self, x: &Multivector) -> Result<Multivector> {
        let c = self.conj_matrix()?;
        let images: Vec<Multivector> =
            (0..self.dim()).map(|j| Multivector::from_components(&self.basis, &c.col(j))).collect();
        Ok(x.map_coeffs(|s| s.conj()).transform(&images))
    }

    /// Complex conjugate of a form: `conj(eⁱ) = Σ_j conj(C_ij) e^j`.
    pub fn conj_form(&self, w: &FormField) -> Result<FormField> {
        let c = self.conj_matrix()?;
        let images: Vec<FormField> = (0..self.dim())
            .map(|i| FormField::from_components(&self.basis, &c.row(i).iter().map(|x| x.conj()).collect::<Vec<_>>()))
            .collect();
        Ok(w.map_coeffs(|s| s.conj()).transform(&images))
    }
}

/// All strictly increasing `k`-tuples from `0..n`.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<u16>> {
    let mut out = Vec::new();
    let mut cur: Vec<u16> = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<u16>, out: &mut Vec<Vec<u16>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i as u16);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// Builder for [`FrameContext::coordinates`], open for extra parameters.
pub fn coordinate_builder(name: &str, coords: &[Var]) -> Result<ContextBuilder> {
    let vecs: Vec<String> = coords.iter().map(|v| format!("D{v}")).collect();
    let covs: Vec<String> = coords.iter().map(|v| format!("d{v}")).collect();
    let basis = BasisSpec::new(vecs, covs)?;
    let n = coords.len();
    let mut b = ContextBuilder::new(name, basis);
    for (i, v) in coords.iter().enumerate() {
        b = b.var(v).derivation(i, v, Scalar::one());
    }
    let mut c = Matrix::zeros(n, n);
    for (j, v) in coords.iter().enumerate() {
        let k = coords
            .iter()
            .position(|w| *w == v.conj())
            .ok_or_else(|| Error::InvalidContext(format!("partner of {v} is not a coordinate")))?;
        c.set(k, j, Scalar::one());
    }
    Ok(b.conjugation(c))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sl2() -> FrameContext {
        let basis = BasisSpec::new(
            vec!["H".into(), "E".into(), "F".into()],
            vec!["eH".into(), "eE".into(), "eF".into()],
        )
        .unwrap();
        let v = |i| Multivector::basis_element(&basis, i);
        ContextBuilder::new("sl2", basis.clone())
            .bracket(0, 1, v(1).scale_int(2))
            .bracket(0, 2, v(2).scale_int(-2))
            .bracket(1, 2, v(0))
            .build()
            .unwrap()
    }

    #[test]
    fn chevalley_eilenberg_on_sl2() {
        let ctx = sl2();
        let de = ctx.d_frame(&ctx.dual(1)).unwrap();
        // dα(X, Y) = −α([X, Y]) gives de^E(H, E) = −2
        assert_eq!(de, FormField::blade(ctx.basis(), &[0, 1], Scalar::from_int(-2)));
        let dd = ctx.d_frame(&de).unwrap();
        assert!(dd.is_zero());
    }

    #[test]
    fn bracket_with_coefficients() {
        let lam = Var::pair("lam", "lamb");
        let ctx = FrameContext::coordinates("flat", &[Var::real("x"), lam.0.clone(), lam.1.clone()], None).unwrap();
        let dlb = ctx.vector("Dlamb").unwrap();
        let e1 = ctx.vector("Dx").unwrap();
        assert!(ctx.lie_bracket(&dlb, &e1.scale(&Scalar::var(&lam.0))).unwrap().is_zero());
        assert_eq!(ctx.lie_bracket(&dlb, &e1.scale(&Scalar::var(&lam.1))).unwrap(), e1);
    }

    #[test]
    fn non_antisymmetric_table_is_rejected() {
        let basis = BasisSpec::with_dual_prefix(&["X", "Y"]);
        let v = |i| Multivector::basis_element(&basis, i);
        let err = ContextBuilder::new("bad", basis.clone())
            .bracket_entry(0, 1, v(0))
            .bracket_entry(1, 0, v(0))
            .build()
            .unwrap_err();
        assert!(matches!(err, Error::InvalidContext(m) if m.contains("(X, Y)") || m.contains("(Y, X)")));
    }

    #[test]
    fn jacobi_failure_is_rejected() {
        let basis = BasisSpec::with_dual_prefix(&["X", "Y", "Z"]);
        let v = |i| Multivector::basis_element(&basis, i);
        let err = ContextBuilder::new("bad", basis.clone())
            .bracket(0, 1, v(1))
            .bracket(1, 2, v(0))
            .build()
            .unwrap_err();
        assert!(matches!(err, Error::InvalidContext(m) if m.contains("Jacobi")));
    }
}

