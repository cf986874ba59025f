//! Sparse exterior algebra of multivectors and forms over a fixed finite
//! basis, with pairing, contraction, operator action, type decomposition and
//! bivector inversion.
//!
//! Conventions:
//! * `⟨X₁∧…∧X_k, α₁∧…∧α_k⟩ = det⟨αᵢ, X_j⟩`.
//! * A bivector acts on a covector through its first slot:
//!   `(e₁∧e₂)(e¹) = e₂`, `(e₁∧e₂)(e²) = −e₁`, and `P(α, β) = ⟨β, P(α)⟩`.
//! * `invert_bivector` returns the 2-form with `ω(P(α), P(β)) = P(α, β)`;
//!   in matrix terms `Ω = −Π⁻¹`.
//! * Operators act on vectors by the matrix, on forms by pushforward
//!   (inverse transpose); [`LinearOperator::pullback`] gives `α ↦ α∘A`.

use std::collections::BTreeMap;
use std::fmt;
use std::marker::PhantomData;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::{GaussRat, Scalar};

/// Names of a vector basis and its dual coframe.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BasisSpec {
    vectors: Vec<String>,
    covectors: Vec<String>,
}

impl BasisSpec {
    pub fn new(vectors: Vec<String>, covectors: Vec<String>) -> Result<Arc<BasisSpec>> {
        if vectors.len() != covectors.len() {
            return Err(Error::InvalidContext("vector and covector name lists differ in length".into()));
        }
        let mut all: Vec<&String> = vectors.iter().chain(covectors.iter()).collect();
        all.sort();
        if all.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidContext("basis names are not unique".into()));
        }
        if vectors.len() > u16::MAX as usize {
            return Err(Error::InvalidContext("basis too large".into()));
        }
        Ok(Arc::new(BasisSpec { vectors, covectors }))
    }

    /// Covector names default to `d<name>`.
    pub fn with_dual_prefix(vectors: &[&str]) -> Arc<BasisSpec> {
        let v: Vec<String> = vectors.iter().map(|s| s.to_string()).collect();
        let c: Vec<String> = vectors.iter().map(|s| format!("d{s}")).collect();
        BasisSpec::new(v, c).expect("generated names are unique")
    }

    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    pub fn vector_names(&self) -> &[String] {
        &self.vectors
    }

    pub fn covector_names(&self) -> &[String] {
        &self.covectors
    }

    pub fn vector_index(&self, name: &str) -> Option<usize> {
        self.vectors.iter().position(|n| n == name)
    }

    pub fn covector_index(&self, name: &str) -> Option<usize> {
        self.covectors.iter().position(|n| n == name)
    }
}

/// Marker distinguishing multivectors from forms.
pub trait Kind: Copy + Clone + fmt::Debug + Default + PartialEq + Eq + Send + Sync + 'static {
    const FORM: bool;
}

#[derive(Copy, Clone, Debug, Default, PartialEq, Eq)]
pub struct Vectors;
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq)]
pub struct Covectors;

impl Kind for Vectors {
    const FORM: bool = false;
}
impl Kind for Covectors {
    const FORM: bool = true;
}

/// Strictly increasing index tuple.
pub type Blade = Vec<u16>;

/// Sorts indices, returning the permutation sign, or `None` on a repeat.
pub fn sort_blade(mut idx: Vec<u16>) -> Option<(i64, Blade)> {
    let mut sign = 1;
    for i in 1..idx.len() {
        let mut j = i;
        while j > 0 && idx[j - 1] > idx[j] {
            idx.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    if idx.windows(2).any(|w| w[0] == w[1]) {
        None
    } else {
        Some((sign, idx))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Exterior<K: Kind> {
    basis: Arc<BasisSpec>,
    terms: BTreeMap<Blade, Scalar>,
    kind: PhantomData<K>,
}

pub type Multivector = Exterior<Vectors>;
pub type FormField = Exterior<Covectors>;

impl<K: Kind> Exterior<K> {
    pub fn zero(basis: &Arc<BasisSpec>) -> Self {
        Exterior { basis: basis.clone(), terms: BTreeMap::new(), kind: PhantomData }
    }

    pub fn scalar(basis: &Arc<BasisSpec>, c: Scalar) -> Self {
        let mut x = Self::zero(basis);
        x.add_blade(Vec::new(), c);
        x
    }

    pub fn basis_element(basis: &Arc<BasisSpec>, i: usize) -> Self {
        assert!(i < basis.dim(), "basis index out of range");
        let mut x = Self::zero(basis);
        x.terms.insert(vec![i as u16], Scalar::one());
        x
    }

    /// Element `c·e_{i₁}∧…∧e_{i_k}` from unsorted indices.
    pub fn blade(basis: &Arc<BasisSpec>, idx: &[usize], c: Scalar) -> Self {
        let mut x = Self::zero(basis);
        x.add_blade(idx.iter().map(|&i| i as u16).collect(), c);
        x
    }

    /// Basis element by name (vector or covector name according to kind).
    pub fn named(basis: &Arc<BasisSpec>, name: &str) -> Result<Self> {
        let idx = if K::FORM { basis.covector_index(name) } else { basis.vector_index(name) };
        idx.map(|i| Self::basis_element(basis, i)).ok_or_else(|| Error::UnknownSymbol(name.to_string()))
    }

    /// Grade-1 element with the given components.
    pub fn from_components(basis: &Arc<BasisSpec>, comps: &[Scalar]) -> Self {
        assert_eq!(comps.len(), basis.dim(), "component count differs from dimension");
        let mut x = Self::zero(basis);
        for (i, c) in comps.iter().enumerate() {
            if !c.is_zero() {
                x.terms.insert(vec![i as u16], c.clone());
            }
        }
        x
    }

    /// Components of the grade-1 part.
    pub fn components(&self) -> Vec<Scalar> {
        (0..self.basis.dim()).map(|i| self.coefficient(&[i as u16])).collect()
    }

    /// Adds `c` times the blade given by unsorted indices.
    pub fn add_blade(&mut self, idx: Vec<u16>, c: Scalar) {
        if c.is_zero() {
            return;
        }
        let Some((sign, b)) = sort_blade(idx) else { return };
        let c = if sign < 0 { -c } else { c };
        match self.terms.get_mut(&b) {
            Some(x) => {
                *x += &c;
                if x.is_zero() {
                    self.terms.remove(&b);
                }
            }
            None => {
                self.terms.insert(b, c);
            }
        }
    }

    pub fn basis(&self) -> &Arc<BasisSpec> {
        &self.basis
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Blade, &Scalar)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, blade: &[u16]) -> Scalar {
        self.terms.get(blade).cloned().unwrap_or_else(Scalar::zero)
    }

    /// Grade if homogeneous and nonzero.
    pub fn grade(&self) -> Option<usize> {
        let mut it = self.terms.keys().map(|b| b.len());
        let g = it.next()?;
        if it.all(|h| h == g) {
            Some(g)
        } else {
            None
        }
    }

    pub fn homogeneous(&self, k: usize) -> Self {
        Exterior {
            basis: self.basis.clone(),
            terms: self.terms.iter().filter(|(b, _)| b.len() == k).map(|(b, c)| (b.clone(), c.clone())).collect(),
            kind: PhantomData,
        }
    }

    fn check_basis(&self, o: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.basis, &o.basis) || self.basis == o.basis {
            Ok(())
        } else {
            Err(Error::BasisMismatch)
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        self.check_basis(o).expect("adding elements over different bases");
        let mut r = self.clone();
        for (b, c) in &o.terms {
            r.add_blade(b.clone(), c.clone());
        }
        r
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        self.map_coeffs(|c| -c)
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        if c.is_zero() {
            return Self::zero(&self.basis);
        }
        self.map_coeffs(|x| x * c)
    }

    pub fn scale_int(&self, n: i64) -> Self {
        self.scale(&Scalar::from_int(n))
    }

    pub fn map_coeffs(&self, f: impl Fn(&Scalar) -> Scalar) -> Self {
        let mut r = Self::zero(&self.basis);
        for (b, c) in &self.terms {
            let v = f(c);
            if !v.is_zero() {
                r.terms.insert(b.clone(), v);
            }
        }
        r
    }

    pub fn try_map_coeffs(&self, f: impl Fn(&Scalar) -> Result<Scalar>) -> Result<Self> {
        let mut r = Self::zero(&self.basis);
        for (b, c) in &self.terms {
            let v = f(c)?;
            if !v.is_zero() {
                r.terms.insert(b.clone(), v);
            }
        }
        Ok(r)
    }

    pub fn wedge(&self, o: &Self) -> Result<Self> {
        self.check_basis(o)?;
        let mut r = Self::zero(&self.basis);
        for (b1, c1) in &self.terms {
            for (b2, c2) in &o.terms {
                let mut idx = b1.clone();
                idx.extend_from_slice(b2);
                r.add_blade(idx, c1 * c2);
            }
        }
        Ok(r)
    }

    /// Wedge of a list of elements, left to right.
    pub fn wedge_all(basis: &Arc<BasisSpec>, parts: &[Self]) -> Result<Self> {
        let mut acc = Self::scalar(basis, Scalar::one());
        for p in parts {
            acc = acc.wedge(p)?;
        }
        Ok(acc)
    }

    /// Replaces every basis element `e_i` by `images[i]` in each blade.
    pub fn transform(&self, images: &[Self]) -> Self {
        let mut r = Self::zero(&images.first().map(|x| x.basis.clone()).unwrap_or_else(|| self.basis.clone()));
        for (b, c) in &self.terms {
            let mut acc = Self::scalar(&r.basis, c.clone());
            for &i in b {
                acc = acc.wedge(&images[i as usize]).expect("images share a basis");
                if acc.is_zero() {
                    break;
                }
            }
            r = r.add(&acc);
        }
        r
    }

    /// Moves the element onto another basis with identical index layout.
    pub fn rebase(&self, basis: &Arc<BasisSpec>) -> Self {
        assert_eq!(basis.dim(), self.basis.dim());
        Exterior { basis: basis.clone(), terms: self.terms.clone(), kind: PhantomData }
    }

    /// First nonzero term, for witnesses.
    pub fn leading_term(&self) -> Option<Self> {
        self.terms.iter().next().map(|(b, c)| {
            let mut x = Self::zero(&self.basis);
            x.terms.insert(b.clone(), c.clone());
            x
        })
    }

    fn name(&self, i: u16) -> &str {
        if K::FORM {
            &self.basis.covectors[i as usize]
        } else {
            &self.basis.vectors[i as usize]
        }
    }
}

pub(crate) fn coeff_text(c: &Scalar) -> String {
    let t = c.to_string();
    if t.contains(' ') || t.contains('/') || t.starts_with('(') && !t.ends_with(')') {
        format!("({t})")
    } else {
        t
    }
}

impl<K: Kind> fmt::Display for Exterior<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut parts = Vec::new();
        for (b, c) in &self.terms {
            let names: Vec<&str> = b.iter().map(|&i| self.name(i)).collect();
            let blade = names.join("^");
            let text = if b.is_empty() {
                coeff_text(c)
            } else if c.is_one() {
                blade
            } else if (-c).is_one() {
                format!("-{blade}")
            } else {
                format!("{}*{blade}", coeff_text(c))
            };
            parts.push(text);
        }
        f.write_str(&parts.join(" + "))
    }
}

fn check_same(a: &Arc<BasisSpec>, b: &Arc<BasisSpec>) -> Result<()> {
    if Arc::ptr_eq(a, b) || a == b {
        Ok(())
    } else {
        Err(Error::BasisMismatch)
    }
}

/// Full contraction with the determinant convention.
pub fn pair(a: &Multivector, w: &FormField) -> Result<Scalar> {
    check_same(&a.basis, &w.basis)?;
    if let (Some(ga), Some(gw)) = (a.grade(), w.grade()) {
        if ga != gw {
            return Err(Error::GradeMismatch(ga, gw));
        }
    }
    let mut acc = Scalar::zero();
    for (b, c) in &a.terms {
        if let Some(d) = w.terms.get(b) {
            acc += &(c * d);
        }
    }
    Ok(acc)
}

/// Evaluates a form on a list of vectors: `ω(X₁, …, X_k)`.
pub fn evaluate_form(w: &FormField, xs: &[Multivector]) -> Result<Scalar> {
    let basis = w.basis.clone();
    let wedge = Multivector::wedge_all(&basis, xs)?;
    pair(&wedge, &w.homogeneous(xs.len()))
}

/// Contraction of a covector into the first slot of a multivector.
pub fn interior(alpha: &FormField, x: &Multivector) -> Result<Multivector> {
    check_same(&alpha.basis, &x.basis)?;
    let a = alpha.components();
    let mut r = Multivector::zero(&x.basis);
    for (b, c) in &x.terms {
        for (pos, &j) in b.iter().enumerate() {
            let aj = &a[j as usize];
            if aj.is_zero() {
                continue;
            }
            let mut rest = b.clone();
            rest.remove(pos);
            let v = c * aj;
            r.add_blade(rest, if pos % 2 == 0 { v } else { -v });
        }
    }
    Ok(r)
}

/// Contraction of a vector into the first slot of a form: `i_X ω`.
pub fn form_interior(x: &Multivector, w: &FormField) -> Result<FormField> {
    check_same(&x.basis, &w.basis)?;
    let xv = x.components();
    let mut r = FormField::zero(&w.basis);
    for (b, c) in &w.terms {
        for (pos, &j) in b.iter().enumerate() {
            let xj = &xv[j as usize];
            if xj.is_zero() {
                continue;
            }
            let mut rest = b.clone();
            rest.remove(pos);
            let v = c * xj;
            r.add_blade(rest, if pos % 2 == 0 { v } else { -v });
        }
    }
    Ok(r)
}

/// `P(α)`: the covector enters the first slot of the bivector.
pub fn bivector_as_map(p: &Multivector, alpha: &FormField) -> Result<Multivector> {
    if let Some(g) = p.grade() {
        if g != 2 {
            return Err(Error::GradeMismatch(g, 2));
        }
    }
    interior(alpha, p)
}

/// Antisymmetric coefficient matrix `Π` with `Π_jk` the coefficient of `e_j∧e_k`.
pub fn bivector_matrix(p: &Multivector) -> Matrix {
    antisym_matrix(p.basis.dim(), p.homogeneous(2).terms.iter())
}

pub fn form_matrix(w: &FormField) -> Matrix {
    antisym_matrix(w.basis.dim(), w.homogeneous(2).terms.iter())
}

fn antisym_matrix<'a>(n: usize, terms: impl Iterator<Item = (&'a Blade, &'a Scalar)>) -> Matrix {
    let mut m = Matrix::zeros(n, n);
    for (b, c) in terms {
        let (j, k) = (b[0] as usize, b[1] as usize);
        m.set(j, k, c.clone());
        m.set(k, j, -c);
    }
    m
}

pub fn bivector_from_matrix(basis: &Arc<BasisSpec>, m: &Matrix) -> Multivector {
    from_antisym(basis, m)
}

pub fn form_from_matrix(basis: &Arc<BasisSpec>, m: &Matrix) -> FormField {
    from_antisym(basis, m)
}

fn from_antisym<K: Kind>(basis: &Arc<BasisSpec>, m: &Matrix) -> Exterior<K> {
    let mut x = Exterior::zero(basis);
    for j in 0..m.rows() {
        for k in j + 1..m.cols() {
            x.add_blade(vec![j as u16, k as u16], m.get(j, k).clone());
        }
    }
    x
}

/// Square matrix acting on the vector basis; column `j` is the image of `e_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearOperator {
    basis: Arc<BasisSpec>,
    matrix: Matrix,
}

impl LinearOperator {
    pub fn new(basis: &Arc<BasisSpec>, matrix: Matrix) -> Result<Self> {
        if !matrix.is_square() || matrix.rows() != basis.dim() {
            return Err(Error::BasisMismatch);
        }
        Ok(LinearOperator { basis: basis.clone(), matrix })
    }

    pub fn identity(basis: &Arc<BasisSpec>) -> Self {
        LinearOperator { basis: basis.clone(), matrix: Matrix::identity(basis.dim()) }
    }

    /// Operator with `A(e_j) = images[j]`.
    pub fn from_images(basis: &Arc<BasisSpec>, images: &[Multivector]) -> Self {
        let n = basis.dim();
        assert_eq!(images.len(), n);
        let m = Matrix::from_fn(n, n, |i, j| images[j].coefficient(&[i as u16]));
        LinearOperator { basis: basis.clone(), matrix: m }
    }

    pub fn basis(&self) -> &Arc<BasisSpec> {
        &self.basis
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn image(&self, j: usize) -> Multivector {
        Multivector::from_components(&self.basis, &self.matrix.col(j))
    }

    pub fn compose(&self, o: &LinearOperator) -> LinearOperator {
        LinearOperator { basis: self.basis.clone(), matrix: self.matrix.mul(&o.matrix) }
    }

    pub fn add(&self, o: &LinearOperator) -> LinearOperator {
        LinearOperator { basis: self.basis.clone(), matrix: self.matrix.add(&o.matrix) }
    }

    pub fn scale(&self, c: &Scalar) -> LinearOperator {
        LinearOperator { basis: self.basis.clone(), matrix: self.matrix.scale(c) }
    }

    pub fn inverse(&self) -> Result<LinearOperator> {
        Ok(LinearOperator { basis: self.basis.clone(), matrix: self.matrix.inverse()? })
    }

    pub fn is_complex_structure(&self) -> bool {
        let sq = self.matrix.mul(&self.matrix);
        sq.add(&Matrix::identity(self.basis.dim())).is_zero()
    }

    pub fn apply(&self, x: &Multivector) -> Result<Multivector> {
        check_same(&self.basis, &x.basis)?;
        let images: Vec<Multivector> = (0..self.basis.dim()).map(|j| self.image(j)).collect();
        Ok(x.transform(&images))
    }

    /// Pushforward of forms, `α ↦ α∘A⁻¹`.
    pub fn apply_form(&self, w: &FormField) -> Result<FormField> {
        check_same(&self.basis, &w.basis)?;
        let inv = self.matrix.inverse()?;
        Ok(w.transform(&covector_images(&self.basis, &inv)))
    }

    /// Pullback of forms, `α ↦ α∘A`.
    pub fn pullback(&self, w: &FormField) -> Result<FormField> {
        check_same(&self.basis, &w.basis)?;
        Ok(w.transform(&covector_images(&self.basis, &self.matrix)))
    }
}

/// Images `e^i ↦ Σ_j M_ij e^j`.
fn covector_images(basis: &Arc<BasisSpec>, m: &Matrix) -> Vec<FormField> {
    (0..basis.dim()).map(|i| FormField::from_components(basis, &m.row(i))).collect()
}

/// Generic operator action selecting the right rule for the element kind.
pub trait OperatorAction: Sized {
    fn act(&self, a: &LinearOperator) -> Result<Self>;
}

impl OperatorAction for Multivector {
    fn act(&self, a: &LinearOperator) -> Result<Self> {
        a.apply(self)
    }
}

impl OperatorAction for FormField {
    fn act(&self, a: &LinearOperator) -> Result<Self> {
        a.apply_form(self)
    }
}

pub fn apply_operator<T: OperatorAction>(a: &LinearOperator, x: &T) -> Result<T> {
    x.act(a)
}

/// `π^{1,0} = ½(1 − iI)` and `π^{0,1} = ½(1 + iI)` on vectors.
pub fn type_projectors(op: &LinearOperator) -> Result<(Matrix, Matrix)> {
    if !op.is_complex_structure() {
        return Err(Error::NotAComplexStructure);
    }
    let n = op.basis.dim();
    let id = Matrix::identity(n);
    let half = Scalar::ratio(1, 2);
    let ii = op.matrix.scale(&Scalar::i());
    Ok((id.sub(&ii).scale(&half), id.add(&ii).scale(&half)))
}

/// Images of the basis under a type projector.
pub trait ProjectorImages: Sized {
    fn images(basis: &Arc<BasisSpec>, m: &Matrix) -> Vec<Self>;
}

impl ProjectorImages for Multivector {
    fn images(basis: &Arc<BasisSpec>, m: &Matrix) -> Vec<Self> {
        (0..basis.dim()).map(|j| Multivector::from_components(basis, &m.col(j))).collect()
    }
}

impl ProjectorImages for FormField {
    fn images(basis: &Arc<BasisSpec>, m: &Matrix) -> Vec<Self> {
        // pullback by the projector: e^i ↦ Σ_j M_ij e^j
        covector_images(basis, m)
    }
}

/// Type-`(p, q)` component with respect to the complex structure `op`.
pub fn type_project<K: Kind>(x: &Exterior<K>, op: &LinearOperator, p: usize, q: usize) -> Result<Exterior<K>>
where
    Exterior<K>: ProjectorImages,
{
    check_same(&x.basis, &op.basis)?;
    let (p10, p01) = type_projectors(op)?;
    let u = <Exterior<K> as ProjectorImages>::images(&x.basis, &p10);
    let v = <Exterior<K> as ProjectorImages>::images(&x.basis, &p01);
    let mut r = Exterior::<K>::zero(&x.basis);
    for (b, c) in &x.terms {
        if b.len() != p + q {
            continue;
        }
        // states indexed by number of (1,0) factors chosen so far
        let mut states: Vec<Option<Exterior<K>>> = vec![None; p + 1];
        states[0] = Some(Exterior::scalar(&x.basis, c.clone()));
        for (pos, &i) in b.iter().enumerate() {
            let mut next: Vec<Option<Exterior<K>>> = vec![None; p + 1];
            for (k, st) in states.iter().enumerate() {
                let Some(w) = st else { continue };
                if k < p {
                    let t = w.wedge(&u[i as usize])?;
                    next[k + 1] = Some(match next[k + 1].take() {
                        Some(acc) => acc.add(&t),
                        None => t,
                    });
                }
                if pos - k < q {
                    let t = w.wedge(&v[i as usize])?;
                    next[k] = Some(match next[k].take() {
                        Some(acc) => acc.add(&t),
                        None => t,
                    });
                }
            }
            states = next;
        }
        if let Some(w) = states[p].take() {
            r = r.add(&w);
        }
    }
    Ok(r)
}

/// Adapted basis `[ker(I − i) | ker(I + i)]` as columns.
fn adapted_basis(op: &LinearOperator) -> Result<(Matrix, usize)> {
    let n = op.basis.dim();
    let id = Matrix::identity(n);
    let ii = id.scale(&Scalar::i());
    let plus = op.matrix.sub(&ii).nullspace();
    let minus = op.matrix.add(&ii).nullspace();
    if plus.len() + minus.len() != n {
        return Err(Error::NotAComplexStructure);
    }
    let k = plus.len();
    let cols: Vec<Vec<Scalar>> = plus.into_iter().chain(minus).collect();
    let b = Matrix::from_fn(n, n, |i, j| cols[j][i].clone());
    Ok((b, k))
}

fn invert_block(m: &Matrix, k: usize) -> Result<Matrix> {
    let idx: Vec<usize> = (0..k).collect();
    let block = m.select(&idx, &idx);
    let inv = block.inverse().map_err(|_| Error::DegenerateBivector { rank: block.rank(), size: k })?;
    let n = m.rows();
    let mut out = Matrix::zeros(n, n);
    for i in 0..k {
        for j in 0..k {
            out.set(i, j, -inv.get(i, j));
        }
    }
    Ok(out)
}

/// The 2-form `ω` with `ω(P(α), P(β)) = P(α, β)`. With a complex structure
/// the inversion happens on the `(1,0)` block and `ω` has type `(2,0)`.
pub fn invert_bivector(p: &Multivector, complex: Option<&LinearOperator>) -> Result<FormField> {
    let pi = bivector_matrix(p);
    let n = p.basis.dim();
    match complex {
        None => {
            let om = invert_block(&pi, n)?;
            Ok(form_from_matrix(&p.basis, &om))
        }
        Some(op) => {
            check_same(&p.basis, &op.basis)?;
            let (b, k) = adapted_basis(op)?;
            let binv = b.inverse()?;
            let local = binv.mul(&pi).mul(&binv.transpose());
            let om_local = invert_block(&local, k)?;
            let om = binv.transpose().mul(&om_local).mul(&binv);
            Ok(form_from_matrix(&p.basis, &om))
        }
    }
}

/// Inverse of [`invert_bivector`].
pub fn invert_form(w: &FormField, complex: Option<&LinearOperator>) -> Result<Multivector> {
    let om = form_matrix(w);
    let n = w.basis.dim();
    match complex {
        None => {
            let pi = invert_block(&om, n)?;
            Ok(bivector_from_matrix(&w.basis, &pi))
        }
        Some(op) => {
            check_same(&w.basis, &op.basis)?;
            let (b, k) = adapted_basis(op)?;
            let local = b.transpose().mul(&om).mul(&b);
            let pi_local = invert_block(&local, k)?;
            let pi = b.mul(&pi_local).mul(&b.transpose());
            Ok(bivector_from_matrix(&w.basis, &pi))
        }
    }
}

/// Sparse sum of `vector ⊗ covector` terms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VectorValuedForm {
    basis: Arc<BasisSpec>,
    terms: BTreeMap<(u16, u16), Scalar>,
}

impl VectorValuedForm {
    pub fn zero(basis: &Arc<BasisSpec>) -> Self {
        VectorValuedForm { basis: basis.clone(), terms: BTreeMap::new() }
    }

    /// `X ⊗ α` for grade-1 inputs.
    pub fn tensor(x: &Multivector, alpha: &FormField) -> Result<Self> {
        check_same(&x.basis, &alpha.basis)?;
        let mut r = Self::zero(&x.basis);
        for (bx, cx) in &x.terms {
            for (ba, ca) in &alpha.terms {
                if bx.len() != 1 || ba.len() != 1 {
                    return Err(Error::GradeError("tensor expects grade-1 factors".into()));
                }
                r.add_term(bx[0], ba[0], cx * ca);
            }
        }
        Ok(r)
    }

    fn add_term(&mut self, i: u16, j: u16, c: Scalar) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry((i, j)).or_insert_with(Scalar::zero);
        *e += &c;
        if e.is_zero() {
            self.terms.remove(&(i, j));
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut r = self.clone();
        for (&(i, j), c) in &o.terms {
            r.add_term(i, j, c.clone());
        }
        r
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&Scalar::from_int(-1)))
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        let mut r = Self::zero(&self.basis);
        for (&(i, j), x) in &self.terms {
            r.add_term(i, j, x * c);
        }
        r
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn basis(&self) -> &Arc<BasisSpec> {
        &self.basis
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u16, u16), &Scalar)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, i: usize, j: usize) -> Scalar {
        self.terms.get(&(i as u16, j as u16)).cloned().unwrap_or_else(Scalar::zero)
    }

    /// Flattened coefficients, row-major over (vector, covector).
    pub fn to_row(&self) -> Vec<Scalar> {
        let n = self.basis.dim();
        let mut v = vec![Scalar::zero(); n * n];
        for (&(i, j), c) in &self.terms {
            v[i as usize * n + j as usize] = c.clone();
        }
        v
    }

    pub fn leading_term(&self) -> Option<Self> {
        self.terms.iter().next().map(|(&(i, j), c)| {
            let mut r = Self::zero(&self.basis);
            r.add_term(i, j, c.clone());
            r
        })
    }
}

impl fmt::Display for VectorValuedForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(&(i, j), c)| {
                let t = format!("{}(x){}", self.basis.vectors[i as usize], self.basis.covectors[j as usize]);
                if c.is_one() {
                    t
                } else {
                    format!("{}*{t}", coeff_text(c))
                }
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

impl fmt::Display for LinearOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.matrix)
    }
}

/// Convenience: Gaussian-rational scalar.
pub fn gauss(re: (i64, i64), im: (i64, i64)) -> Scalar {
    Scalar::from_gauss(GaussRat::complex(re, im))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn basis(n: usize) -> Arc<BasisSpec> {
        let names: Vec<String> = (1..=n).map(|i| format!("e{i}")).collect();
        let refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
        BasisSpec::with_dual_prefix(&refs)
    }

    fn v(b: &Arc<BasisSpec>, i: usize) -> Multivector {
        Multivector::basis_element(b, i)
    }

    fn c(b: &Arc<BasisSpec>, i: usize) -> FormField {
        FormField::basis_element(b, i)
    }

    #[test]
    fn wedge_laws() {
        let b = basis(3);
        let e12 = v(&b, 0).wedge(&v(&b, 1)).unwrap();
        let e21 = v(&b, 1).wedge(&v(&b, 0)).unwrap();
        assert!(e12.add(&e21).is_zero());
        let e123 = e12.wedge(&v(&b, 2)).unwrap();
        assert_eq!(e123, Multivector::blade(&b, &[0, 1, 2], Scalar::one()));
        assert!(e12.wedge(&e12).unwrap().is_zero());
    }

    #[test]
    fn pairing_convention() {
        let b = basis(3);
        let e12 = Multivector::blade(&b, &[0, 1], Scalar::one());
        assert_eq!(pair(&e12, &FormField::blade(&b, &[0, 1], Scalar::one())).unwrap(), Scalar::one());
        assert_eq!(pair(&e12, &FormField::blade(&b, &[1, 0], Scalar::one())).unwrap(), Scalar::from_int(-1));
        assert_eq!(pair(&e12, &FormField::blade(&b, &[0, 2], Scalar::one())).unwrap(), Scalar::zero());
        assert_eq!(pair(&e12, &c(&b, 0)), Err(Error::GradeMismatch(2, 1)));
    }

    #[test]
    fn bivector_map_convention() {
        let b = basis(3);
        let e12 = Multivector::blade(&b, &[0, 1], Scalar::one());
        assert_eq!(bivector_as_map(&e12, &c(&b, 0)).unwrap(), v(&b, 1));
        assert_eq!(bivector_as_map(&e12, &c(&b, 1)).unwrap(), v(&b, 0).neg());
        assert!(bivector_as_map(&e12, &c(&b, 2)).unwrap().is_zero());
    }

    #[test]
    fn inversion_identity_and_degeneracy() {
        let b = basis(4);
        let p = Multivector::blade(&b, &[0, 1], Scalar::one()).add(&Multivector::blade(&b, &[2, 3], Scalar::from_int(3)));
        let w = invert_bivector(&p, None).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let pa = bivector_as_map(&p, &c(&b, i)).unwrap();
                let pb = bivector_as_map(&p, &c(&b, j)).unwrap();
                let lhs = evaluate_form(&w, &[pa, pb]).unwrap();
                let rhs = pair(&bivector_as_map(&p, &c(&b, i)).unwrap(), &c(&b, j)).unwrap();
                assert_eq!(lhs, rhs);
            }
        }
        assert_eq!(invert_form(&w, None).unwrap(), p);
        let deg = Multivector::blade(&b, &[0, 1], Scalar::one());
        assert_eq!(invert_bivector(&deg, None), Err(Error::DegenerateBivector { rank: 2, size: 4 }));
    }

    #[test]
    fn operator_action() {
        let b = basis(2);
        let i_op = LinearOperator::from_images(&b, &[v(&b, 1), v(&b, 0).neg()]);
        let e12 = Multivector::blade(&b, &[0, 1], Scalar::one());
        assert_eq!(i_op.apply(&e12).unwrap(), e12);
        assert_eq!(LinearOperator::identity(&b).apply(&e12).unwrap(), e12);
        let x = v(&b, 0);
        assert_eq!(i_op.apply(&i_op.apply(&x).unwrap()).unwrap(), x.neg());
        let alpha = c(&b, 0);
        let pushed = i_op.apply_form(&alpha).unwrap();
        assert_eq!(pair(&i_op.apply(&x).unwrap(), &pushed).unwrap(), pair(&x, &alpha).unwrap());
    }

    #[test]
    fn type_projection_of_complex_basis() {
        // basis Z, Zb with I Z = i Z
        let b = BasisSpec::with_dual_prefix(&["Z", "Zb"]);
        let i_op = LinearOperator::from_images(&b, &[v(&b, 0).scale(&Scalar::i()), v(&b, 1).scale(&-Scalar::i())]);
        let zz = Multivector::blade(&b, &[0, 1], Scalar::one());
        assert_eq!(type_project(&zz, &i_op, 1, 1).unwrap(), zz);
        assert!(type_project(&zz, &i_op, 2, 0).unwrap().is_zero());
        let bad = LinearOperator::identity(&b);
        assert_eq!(type_project(&zz, &bad, 1, 1), Err(Error::NotAComplexStructure));
    }
}
