//! Sparse multivariate polynomials over the Gaussian rationals.
//!
//! Monomials are ordered lexicographically with indeterminate names sorted
//! ascending, the smallest name being the most significant variable.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use super::gauss::GaussRat;

/// A named indeterminate, either self-conjugate (real) or paired with a
/// conjugate partner.
#[derive(Clone, Debug)]
pub struct Var {
    name: Arc<str>,
    partner: Option<Arc<str>>,
}

impl Var {
    pub fn real(name: &str) -> Var {
        Var { name: Arc::from(name), partner: None }
    }

    /// A conjugate pair `(x, x̄)`.
    pub fn pair(name: &str, conj_name: &str) -> (Var, Var) {
        assert_ne!(name, conj_name, "a paired indeterminate needs a distinct partner");
        (
            Var { name: Arc::from(name), partner: Some(Arc::from(conj_name)) },
            Var { name: Arc::from(conj_name), partner: Some(Arc::from(name)) },
        )
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn partner(&self) -> Option<&str> {
        self.partner.as_deref()
    }

    pub fn is_real(&self) -> bool {
        self.partner.is_none()
    }

    pub fn conj(&self) -> Var {
        match &self.partner {
            None => self.clone(),
            Some(p) => Var { name: p.clone(), partner: Some(self.name.clone()) },
        }
    }
}

impl PartialEq for Var {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name
    }
}
impl Eq for Var {}
impl Hash for Var {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.name.hash(state)
    }
}
impl PartialOrd for Var {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Var {
    fn cmp(&self, other: &Self) -> Ordering {
        self.name.cmp(&other.name)
    }
}
impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

/// Power product, sorted by variable, exponents positive.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Monomial(Vec<(Var, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(v: &Var, e: u32) -> Self {
        if e == 0 {
            Monomial::one()
        } else {
            Monomial(vec![(v.clone(), e)])
        }
    }

    pub fn from_pairs(mut pairs: Vec<(Var, u32)>) -> Self {
        pairs.retain(|(_, e)| *e > 0);
        pairs.sort_by(|a, b| a.0.cmp(&b.0));
        let mut out: Vec<(Var, u32)> = Vec::with_capacity(pairs.len());
        for (v, e) in pairs {
            match out.last_mut() {
                Some((w, f)) if *w == v => *f += e,
                _ => out.push((v, e)),
            }
        }
        Monomial(out)
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn factors(&self) -> &[(Var, u32)] {
        &self.0
    }

    pub fn degree_in(&self, v: &Var) -> u32 {
        self.0.iter().find(|(w, _)| w == v).map(|(_, e)| *e).unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| e).sum()
    }

    pub fn mul(&self, o: &Monomial) -> Monomial {
        let (a, b) = (&self.0, &o.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a[i].0.clone(), a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial(out)
    }

    /// `self / o` when `o` divides `self`.
    pub fn div(&self, o: &Monomial) -> Option<Monomial> {
        let mut out = Vec::with_capacity(self.0.len());
        let mut j = 0;
        for (v, e) in &self.0 {
            if j < o.0.len() && o.0[j].0 < *v {
                return None;
            }
            if j < o.0.len() && o.0[j].0 == *v {
                let f = o.0[j].1;
                j += 1;
                match e.cmp(&f) {
                    Ordering::Less => return None,
                    Ordering::Equal => {}
                    Ordering::Greater => out.push((v.clone(), e - f)),
                }
            } else {
                out.push((v.clone(), *e));
            }
        }
        if j < o.0.len() {
            return None;
        }
        Some(Monomial(out))
    }

    /// Componentwise minimum of exponents.
    pub fn gcd(&self, o: &Monomial) -> Monomial {
        let mut out = Vec::new();
        let mut j = 0;
        for (v, e) in &self.0 {
            while j < o.0.len() && o.0[j].0 < *v {
                j += 1;
            }
            if j < o.0.len() && o.0[j].0 == *v {
                out.push((v.clone(), (*e).min(o.0[j].1)));
            }
        }
        Monomial(out)
    }

    /// Removes `v` entirely, returning its exponent and the remainder.
    pub fn split_off(&self, v: &Var) -> (u32, Monomial) {
        let mut e = 0;
        let rest = self
            .0
            .iter()
            .filter(|(w, f)| {
                if w == v {
                    e = *f;
                    false
                } else {
                    true
                }
            })
            .cloned()
            .collect();
        (e, Monomial(rest))
    }

    pub fn conj(&self) -> Monomial {
        Monomial::from_pairs(self.0.iter().map(|(v, e)| (v.conj(), *e)).collect())
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        let (a, b) = (&self.0, &other.0);
        let (mut i, mut j) = (0, 0);
        loop {
            match (a.get(i), b.get(j)) {
                (None, None) => return Ordering::Equal,
                (Some(_), None) => return Ordering::Greater,
                (None, Some(_)) => return Ordering::Less,
                (Some((va, ea)), Some((vb, eb))) => match va.cmp(vb) {
                    Ordering::Less => return Ordering::Greater,
                    Ordering::Greater => return Ordering::Less,
                    Ordering::Equal => {
                        if ea != eb {
                            return ea.cmp(eb);
                        }
                        i += 1;
                        j += 1;
                    }
                },
            }
        }
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|(v, e)| if *e == 1 { v.to_string() } else { format!("{v}^{e}") })
            .collect();
        f.write_str(&parts.join("*"))
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Poly {
    terms: BTreeMap<Monomial, GaussRat>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn one() -> Self {
        Poly::constant(GaussRat::one())
    }

    pub fn constant(c: GaussRat) -> Self {
        let mut p = Poly::zero();
        if !c.is_zero() {
            p.terms.insert(Monomial::one(), c);
        }
        p
    }

    pub fn var(v: &Var) -> Self {
        Poly::term(Monomial::var(v, 1), GaussRat::one())
    }

    pub fn term(m: Monomial, c: GaussRat) -> Self {
        let mut p = Poly::zero();
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.as_constant().map(|c| c.is_one()).unwrap_or(false)
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms.keys().next().unwrap().is_one())
    }

    pub fn as_constant(&self) -> Option<GaussRat> {
        if self.terms.is_empty() {
            Some(GaussRat::zero())
        } else if self.is_constant() {
            self.terms.values().next().cloned()
        } else {
            None
        }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &GaussRat)> {
        self.terms.iter()
    }

    pub fn leading(&self) -> Option<(&Monomial, &GaussRat)> {
        self.terms.iter().next_back()
    }

    pub fn leading_coeff(&self) -> GaussRat {
        self.leading().map(|(_, c)| c.clone()).unwrap_or_else(GaussRat::zero)
    }

    pub fn vars(&self) -> Vec<Var> {
        let mut vs: Vec<Var> = self.terms.keys().flat_map(|m| m.0.iter().map(|(v, _)| v.clone())).collect();
        vs.sort();
        vs.dedup();
        vs
    }

    pub fn contains_var(&self, v: &Var) -> bool {
        self.terms.keys().any(|m| m.degree_in(v) > 0)
    }

    pub fn degree_in(&self, v: &Var) -> u32 {
        self.terms.keys().map(|m| m.degree_in(v)).max().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.total_degree()).max().unwrap_or(0)
    }

    fn add_term(&mut self, m: Monomial, c: GaussRat) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(x) => {
                *x = &*x + &c;
                if x.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let (mut big, small) = if self.len() >= o.len() { (self.clone(), o) } else { (o.clone(), self) };
        for (m, c) in &small.terms {
            big.add_term(m.clone(), c.clone());
        }
        big
    }

    pub fn neg(&self) -> Poly {
        Poly { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        let mut r = self.clone();
        for (m, c) in &o.terms {
            r.add_term(m.clone(), -c);
        }
        r
    }

    pub fn scale(&self, c: &GaussRat) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly { terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect() }
    }

    pub fn mul_term(&self, m: &Monomial, c: &GaussRat) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly { terms: self.terms.iter().map(|(n, x)| (n.mul(m), x * c)).collect() }
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        if let Some(c) = o.as_constant() {
            return self.scale(&c);
        }
        if let Some(c) = self.as_constant() {
            return o.scale(&c);
        }
        let mut r = Poly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                r.add_term(m1.mul(m2), c1 * c2);
            }
        }
        r
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut r = Poly::one();
        for _ in 0..e {
            r = r.mul(self);
        }
        r
    }

    pub fn conj(&self) -> Poly {
        let mut r = Poly::zero();
        for (m, c) in &self.terms {
            r.add_term(m.conj(), c.conj());
        }
        r
    }

    pub fn partial(&self, v: &Var) -> Poly {
        let mut r = Poly::zero();
        for (m, c) in &self.terms {
            let (e, rest) = m.split_off(v);
            if e > 0 {
                let nm = rest.mul(&Monomial::var(v, e - 1));
                r.add_term(nm, c * &GaussRat::from_int(e as i64));
            }
        }
        r
    }

    /// Divides by the leading coefficient; returns that coefficient too.
    pub fn monic(&self) -> (GaussRat, Poly) {
        let lc = self.leading_coeff();
        match lc.inv() {
            None => (GaussRat::zero(), Poly::zero()),
            Some(inv) => (lc, self.scale(&inv)),
        }
    }

    /// Exact quotient `self / d`, or `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        if d.is_zero() {
            return None;
        }
        if let Some(c) = d.as_constant() {
            return Some(self.scale(&c.inv()?));
        }
        let (dm, dc) = d.leading().map(|(m, c)| (m.clone(), c.clone()))?;
        let dci = dc.inv()?;
        let mut r = self.clone();
        let mut q = Poly::zero();
        while let Some((rm, rc)) = r.leading().map(|(m, c)| (m.clone(), c.clone())) {
            let tm = rm.div(&dm)?;
            let tc = &rc * &dci;
            r = r.sub(&d.mul_term(&tm, &tc));
            q.add_term(tm, tc);
        }
        Some(q)
    }

    /// Coefficients with respect to `x`, indexed by power of `x`.
    pub fn to_uni(&self, x: &Var) -> Vec<Poly> {
        let mut out: Vec<Poly> = vec![Poly::zero(); self.degree_in(x) as usize + 1];
        for (m, c) in &self.terms {
            let (e, rest) = m.split_off(x);
            out[e as usize].add_term(rest, c.clone());
        }
        out
    }

    pub fn from_uni(coeffs: &[Poly], x: &Var) -> Poly {
        let mut r = Poly::zero();
        for (e, p) in coeffs.iter().enumerate() {
            let xm = Monomial::var(x, e as u32);
            for (m, c) in &p.terms {
                r.add_term(m.mul(&xm), c.clone());
            }
        }
        r
    }

    /// Gcd of all monomials appearing.
    pub fn monomial_content(&self) -> Monomial {
        let mut it = self.terms.keys();
        let first = match it.next() {
            Some(m) => m.clone(),
            None => return Monomial::one(),
        };
        it.fold(first, |acc, m| acc.gcd(m))
    }

    pub fn map_coeffs(&self, f: impl Fn(&GaussRat) -> GaussRat) -> Poly {
        let mut r = Poly::zero();
        for (m, c) in &self.terms {
            r.add_term(m.clone(), f(c));
        }
        r
    }

    /// Printed size, used as a pivoting heuristic.
    pub fn weight(&self) -> usize {
        self.terms.keys().map(|m| 1 + m.total_degree() as usize).sum()
    }
}

/// Greatest common divisor, normalized to leading coefficient 1.
pub fn gcd(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() {
        return b.monic().1;
    }
    if b.is_zero() {
        return a.monic().1;
    }
    if a.is_constant() || b.is_constant() {
        return Poly::one();
    }
    if a == b {
        return a.monic().1;
    }
    if a.len() == 1 || b.len() == 1 {
        let m = a.monomial_content().gcd(&b.monomial_content());
        return Poly::term(m, GaussRat::one());
    }
    let va = a.vars();
    let vb = b.vars();
    if let Some(x) = va.iter().find(|v| !vb.contains(v)) {
        return gcd(&content(&a.to_uni(x)), b);
    }
    if let Some(x) = vb.iter().find(|v| !va.contains(v)) {
        return gcd(a, &content(&b.to_uni(x)));
    }
    let x = va
        .iter()
        .min_by_key(|v| a.degree_in(v).max(b.degree_in(v)))
        .expect("non-constant polynomial has a variable")
        .clone();
    let ua = a.to_uni(&x);
    let ub = b.to_uni(&x);
    let ca = content(&ua);
    let cb = content(&ub);
    let c = gcd(&ca, &cb);
    let mut p = primitive(&ua, &ca);
    let mut q = primitive(&ub, &cb);
    if p.len() < q.len() {
        std::mem::swap(&mut p, &mut q);
    }
    loop {
        if q.is_empty() {
            break;
        }
        if q.len() == 1 {
            p = vec![Poly::one()];
            break;
        }
        let r = prem(&p, &q);
        p = q;
        q = if r.is_empty() {
            Vec::new()
        } else {
            let cr = content(&r);
            primitive(&r, &cr)
        };
    }
    let g = Poly::from_uni(&p, &x).mul(&c);
    g.monic().1
}

fn content(u: &[Poly]) -> Poly {
    let mut g = Poly::zero();
    let mut sorted: Vec<&Poly> = u.iter().filter(|p| !p.is_zero()).collect();
    sorted.sort_by_key(|p| p.len());
    for p in sorted {
        g = gcd(&g, p);
        if g.is_one() {
            break;
        }
    }
    g
}

fn primitive(u: &[Poly], c: &Poly) -> Vec<Poly> {
    let mut out: Vec<Poly> = u
        .iter()
        .map(|p| p.div_exact(c).expect("content divides every coefficient"))
        .collect();
    trim(&mut out);
    out
}

fn trim(u: &mut Vec<Poly>) {
    while u.last().map(|p| p.is_zero()).unwrap_or(false) {
        u.pop();
    }
}

/// Pseudo-remainder of univariate views; empty vector means zero.
fn prem(p: &[Poly], q: &[Poly]) -> Vec<Poly> {
    let mut r: Vec<Poly> = p.to_vec();
    trim(&mut r);
    let dq = q.len() - 1;
    let lq = q[dq].clone();
    while !r.is_empty() && r.len() > dq {
        let shift = r.len() - 1 - dq;
        let lr = r[r.len() - 1].clone();
        let mut next: Vec<Poly> = r.iter().map(|c| c.mul(&lq)).collect();
        for (k, qc) in q.iter().enumerate() {
            next[k + shift] = next[k + shift].sub(&qc.mul(&lr));
        }
        trim(&mut next);
        r = next;
    }
    r
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            let neg = c.is_negative_display();
            let abs = if neg { -c } else { c.clone() };
            let body = if m.is_one() {
                abs.to_string()
            } else if abs.is_one() {
                m.to_string()
            } else {
                format!("{abs}*{m}")
            };
            if first {
                if neg {
                    write!(f, "-{body}")?;
                } else {
                    write!(f, "{body}")?;
                }
                first = false;
            } else if neg {
                write!(f, " - {body}")?;
            } else {
                write!(f, " + {body}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> Var {
        Var::real("x")
    }
    fn y() -> Var {
        Var::real("y")
    }

    #[test]
    fn lex_order_puts_smaller_names_first() {
        let mx = Monomial::var(&x(), 1);
        let my2 = Monomial::var(&y(), 2);
        assert!(mx > my2);
        assert!(Monomial::var(&x(), 2) > mx.mul(&my2));
    }

    #[test]
    fn gcd_of_products() {
        let px = Poly::var(&x());
        let py = Poly::var(&y());
        let one = Poly::one();
        let f = px.add(&py).mul(&px.sub(&one));
        let g = px.add(&py).mul(&py.add(&one)).mul(&py);
        let d = gcd(&f, &g);
        assert_eq!(d, px.add(&py));
    }

    #[test]
    fn exact_division_detects_remainder() {
        let px = Poly::var(&x());
        let py = Poly::var(&y());
        let f = px.mul(&px).sub(&py.mul(&py));
        assert_eq!(f.div_exact(&px.sub(&py)), Some(px.add(&py)));
        assert_eq!(f.div_exact(&px), None);
    }

    #[test]
    fn display_formats() {
        let px = Poly::var(&x());
        let p = px.mul(&px).scale(&GaussRat::ratio(-3, 2)).add(&Poly::constant(GaussRat::i()));
        assert_eq!(p.to_string(), "-3/2*x^2 + i");
    }
}
