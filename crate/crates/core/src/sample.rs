//! Seeded random scalars, multivectors and forms for property checks.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::context::FrameContext;
use crate::exterior::{BasisSpec, Exterior, Kind};
use crate::linalg::Matrix;
use crate::scalar::{GaussRat, RootRelation, Scalar, Var};

pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Sampler {
        Sampler { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    pub fn index(&mut self, n: usize) -> usize {
        self.rng.gen_range(0..n)
    }

    pub fn chance(&mut self, p: f64) -> bool {
        self.rng.gen_bool(p)
    }

    /// Small Gaussian rational, never zero.
    pub fn gauss(&mut self) -> GaussRat {
        loop {
            let re = (self.rng.gen_range(-4..=4), self.rng.gen_range(1..=3));
            let im = if self.chance(0.4) { (self.rng.gen_range(-3..=3), self.rng.gen_range(1..=2)) } else { (0, 1) };
            let c = GaussRat::complex(re, im);
            if !c.is_zero() {
                return c;
            }
        }
    }

    /// Polynomial in `vars` of total degree at most 2, with a few terms.
    pub fn polynomial(&mut self, vars: &[Var]) -> Scalar {
        let mut s = Scalar::from_gauss(self.gauss());
        if vars.is_empty() {
            return s;
        }
        for _ in 0..self.rng.gen_range(0..3) {
            let mut t = Scalar::from_gauss(self.gauss());
            for _ in 0..self.rng.gen_range(1..=2) {
                t = t * Scalar::var(&vars[self.index(vars.len())]);
            }
            s = s + t;
        }
        s
    }

    /// A polynomial, sometimes divided by `1 + v·v̄` or times the root.
    pub fn scalar(&mut self, vars: &[Var], root: Option<&Arc<RootRelation>>) -> Scalar {
        let mut s = self.polynomial(vars);
        if !vars.is_empty() && self.chance(0.2) {
            let v = &vars[self.index(vars.len())];
            let d = Scalar::one() + Scalar::var(v) * Scalar::var(&v.conj());
            s = s.checked_div(&d).expect("1 + |v|² is a nonzero polynomial");
        }
        if let Some(r) = root {
            if self.chance(0.3) {
                s = s * Scalar::root(r);
            }
        }
        s
    }

    /// Random element of grade `k` with up to `terms` blades.
    pub fn element<K: Kind>(&mut self, basis: &Arc<BasisSpec>, k: usize, terms: usize, vars: &[Var]) -> Exterior<K> {
        let n = basis.dim();
        let mut x = Exterior::<K>::zero(basis);
        if k > n {
            return x;
        }
        for _ in 0..terms.max(1) {
            let mut idx: Vec<usize> = Vec::with_capacity(k);
            while idx.len() < k {
                let i = self.index(n);
                if !idx.contains(&i) {
                    idx.push(i);
                }
            }
            let c = self.polynomial(vars);
            x = x.add(&Exterior::blade(basis, &idx, c));
        }
        x
    }

    /// Random grade-`k` element over a context, with coefficients in its
    /// indeterminates.
    pub fn in_context<K: Kind>(&mut self, ctx: &FrameContext, k: usize, terms: usize) -> Exterior<K> {
        let vars: Vec<Var> = ctx.vars().vars().cloned().collect();
        self.element(ctx.basis(), k, terms, &vars)
    }

    /// Invertible matrix with small rational entries: a product of a unit
    /// lower and a unit upper triangular matrix with a random diagonal.
    pub fn invertible_matrix(&mut self, n: usize) -> Matrix {
        let mut lower = Matrix::identity(n);
        let mut upper = Matrix::identity(n);
        for i in 0..n {
            upper.set(i, i, Scalar::from_int(self.rng.gen_range(1..=3)));
            for j in 0..i {
                if self.chance(0.5) {
                    lower.set(i, j, Scalar::from_int(self.rng.gen_range(-2..=2)));
                }
                if self.chance(0.5) {
                    upper.set(j, i, Scalar::ratio(self.rng.gen_range(-2..=2), 2));
                }
            }
        }
        lower.mul(&upper)
    }
}
