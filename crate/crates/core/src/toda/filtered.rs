//! n-filtered objects and witnesses for the filtered-object bracket.

use serde::Serialize;

use super::higher::standard_chains;
use crate::error::{Error, Result};
use crate::stcat::{Triangle, Triangulated};

/// `0 = F_0 -> F_1 -> ... -> F_n` based on `(λ_{n-1}, ..., λ_1)`, with
/// triangles `F_j -i_j-> F_{j+1} -q_{j+1}-> Σ^j Y_{n-1-j} -e_j-> ΣF_j`.
/// Vectors are indexed from 1 in the names: `i[0] = i_1`, `q[0] = q_1`.
#[derive(Clone, Debug, Serialize)]
pub struct FilteredObject<M> {
    pub n: usize,
    /// `λ_1, ..., λ_{n-1}` with `λ_k: Y_{k-1} -> Y_k`
    pub lambdas: Vec<M>,
    pub i: Vec<M>,
    pub q: Vec<M>,
    pub e: Vec<M>,
}

impl<M: Clone + PartialEq + std::fmt::Debug> FilteredObject<M> {
    /// `σ: F_n -> Σ^{n-1} Y_0`
    pub fn sigma(&self) -> &M {
        &self.q[self.n - 1]
    }

    /// `σ': Y_{n-1} ≅ F_1 -> F_n`
    pub fn sigma_prime<C: Triangulated<Map = M>>(&self, cat: &C) -> Result<M> {
        let q1 = &self.q[0];
        let f1 = cat.source(q1);
        let inv = cat
            .extensions(q1, &cat.identity(&f1))?
            .ok_or_else(|| Error::Verification("q_1 is not invertible".into()))?;
        let mut acc = cat.from_coords(&cat.target(q1), &f1, inv.representative().to_vec());
        for i in &self.i {
            acc = cat.compose(i, &acc)?;
        }
        Ok(acc)
    }

    /// Checks every defining condition.
    pub fn verify<C: Triangulated<Map = M>>(&self, cat: &C, cap: usize) -> Result<()> {
        let n = self.n;
        if self.lambdas.len() != n - 1 || self.i.len() != n - 1 || self.q.len() != n || self.e.len() != n - 1 {
            return Err(Error::Verification("filtered object has the wrong number of maps".into()));
        }
        if !cat.is_iso(&self.q[0])? {
            return Err(Error::Verification("q_1 is not an isomorphism".into()));
        }
        for j in 1..n {
            let t = Triangle { f: self.i[j - 1].clone(), g: self.q[j].clone(), h: self.e[j - 1].clone() };
            if !cat.is_distinguished(&t, cap)? {
                return Err(Error::Verification(format!("triangle {j} is not distinguished")));
            }
            let lhs = cat.compose(&cat.suspend(&self.q[j - 1]), &self.e[j - 1])?;
            let rhs = cat.shift(&self.lambdas[n - j - 1], j as i32);
            if lhs != rhs {
                return Err(Error::Verification(format!("(Σq_{j}) e_{j} differs from Σ^{j} λ_{}", n - j)));
            }
        }
        Ok(())
    }
}

/// A filtered object together with the maps `a`, `b` exhibiting one element
/// `b ∘ a` of the filtered-object bracket.
#[derive(Clone, Debug, Serialize)]
pub struct FilteredWitness<M> {
    pub object: FilteredObject<M>,
    pub a: M,
    pub b: M,
}

/// Builds, from the standard computation of `⟨f_n, ..., f_1⟩`
/// (`maps[0] = f_n`), an `(n-1)`-filtered object on `(f_{n-1}, ..., f_2)`
/// and maps `a`, `b` with `σ a = Σ^{n-2} f_1`, `b σ' = f_n` and
/// `b a = element`. `None` when no path of the computation produces it.
pub fn filtered_witness<C: Triangulated>(
    cat: &C,
    maps: &[C::Map],
    element: &[u32],
    cap: usize,
) -> Result<Option<FilteredWitness<C::Map>>> {
    let n = maps.len();
    let f = |j: usize| &maps[n - j];
    for ch in standard_chains(cat, maps, cap)? {
        let a = ch.alphas.last().expect("n >= 3").clone();
        let b = ch.betas.last().expect("n >= 3").clone();
        if cat.coords(&cat.compose(&b, &a)?) != element {
            continue;
        }
        let lambdas = (1..n - 1).map(|k| f(k + 1).clone()).collect();
        let mut i = Vec::new();
        let mut q = vec![cat.identity(&cat.source(f(n)))];
        let mut e = Vec::new();
        for t in &ch.triangles {
            i.push(t.g.clone());
            q.push(cat.neg(&t.h));
            e.push(cat.suspend(&t.f));
        }
        let object = FilteredObject { n: n - 1, lambdas, i, q, e };
        object.verify(cat, cap)?;
        if cat.compose(object.sigma(), &a)? != cat.shift(f(1), n as i32 - 2) {
            return Err(Error::Verification("σ a differs from Σ^{n-2} f_1".into()));
        }
        if cat.compose(&b, &object.sigma_prime(cat)?)? != *f(n) {
            return Err(Error::Verification("b σ' differs from f_n".into()));
        }
        return Ok(Some(FilteredWitness { object, a, b }));
    }
    Ok(None)
}
