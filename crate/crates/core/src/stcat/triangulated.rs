//! Triangulated-category interface shared by the stable category and its
//! opposite, with the generic lifting and recognition routines built on it.

use std::fmt::Debug;

use serde::Serialize;

use super::{Obj, StMap, StMod};
use crate::error::{Error, Result};
use crate::linalg::{solve_affine, vec_add, vec_scale, AffineSpace, FpMatrix};

/// `X -f-> Y -g-> Z -h-> ΣX`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Triangle<M> {
    pub f: M,
    pub g: M,
    pub h: M,
}

pub trait Triangulated {
    type Obj: Clone + PartialEq + Debug;
    type Map: Clone + PartialEq + Debug;

    fn p(&self) -> u32;
    fn source(&self, f: &Self::Map) -> Self::Obj;
    fn target(&self, f: &Self::Map) -> Self::Obj;
    fn hom_dim(&self, a: &Self::Obj, b: &Self::Obj) -> usize;
    fn coords(&self, f: &Self::Map) -> Vec<u32>;
    fn from_coords(&self, a: &Self::Obj, b: &Self::Obj, c: Vec<u32>) -> Self::Map;
    /// `g ∘ f`
    fn compose(&self, g: &Self::Map, f: &Self::Map) -> Result<Self::Map>;
    fn identity(&self, a: &Self::Obj) -> Self::Map;
    fn suspend_obj(&self, a: &Self::Obj) -> Self::Obj;
    fn desuspend_obj(&self, a: &Self::Obj) -> Self::Obj;
    fn suspend(&self, f: &Self::Map) -> Self::Map;
    fn desuspend(&self, f: &Self::Map) -> Self::Map;
    /// The standard triangle on `f`.
    fn cone(&self, f: &Self::Map) -> Triangle<Self::Map>;
    /// Whether two objects are isomorphic.
    fn isomorphic(&self, a: &Self::Obj, b: &Self::Obj) -> bool;
    /// Human-readable label of a coordinate.
    fn label(&self, a: &Self::Obj, b: &Self::Obj, k: usize) -> String;

    fn zero(&self, a: &Self::Obj, b: &Self::Obj) -> Self::Map {
        self.from_coords(a, b, vec![0; self.hom_dim(a, b)])
    }

    fn is_zero(&self, f: &Self::Map) -> bool {
        self.coords(f).iter().all(|&c| c == 0)
    }

    fn basis(&self, a: &Self::Obj, b: &Self::Obj) -> Vec<Self::Map> {
        let d = self.hom_dim(a, b);
        (0..d)
            .map(|k| {
                let mut c = vec![0; d];
                c[k] = 1;
                self.from_coords(a, b, c)
            })
            .collect()
    }

    fn add(&self, f: &Self::Map, g: &Self::Map) -> Result<Self::Map> {
        let (a, b) = (self.source(f), self.target(f));
        if a != self.source(g) || b != self.target(g) {
            return Err(Error::NotComposable("sum of maps with different ends".into()));
        }
        Ok(self.from_coords(&a, &b, vec_add(&self.coords(f), &self.coords(g), self.p())))
    }

    fn scale(&self, f: &Self::Map, c: u32) -> Self::Map {
        let (a, b) = (self.source(f), self.target(f));
        self.from_coords(&a, &b, vec_scale(&self.coords(f), c % self.p(), self.p()))
    }

    fn neg(&self, f: &Self::Map) -> Self::Map {
        self.scale(f, self.p() - 1)
    }

    fn sub(&self, f: &Self::Map, g: &Self::Map) -> Result<Self::Map> {
        self.add(f, &self.neg(g))
    }

    /// `maps[0] ∘ maps[1] ∘ ...`
    fn compose_all(&self, maps: &[&Self::Map]) -> Result<Self::Map> {
        let (last, rest) = maps.split_last().expect("at least one map");
        let mut acc = (*last).clone();
        for g in rest.iter().rev() {
            acc = self.compose(g, &acc)?;
        }
        Ok(acc)
    }

    /// `Σ^n f` for signed `n`.
    fn shift(&self, f: &Self::Map, n: i32) -> Self::Map {
        let mut g = f.clone();
        for _ in 0..n.unsigned_abs() {
            g = if n > 0 { self.suspend(&g) } else { self.desuspend(&g) };
        }
        g
    }

    fn shift_obj(&self, a: &Self::Obj, n: i32) -> Self::Obj {
        let mut b = a.clone();
        for _ in 0..n.unsigned_abs() {
            b = if n > 0 { self.suspend_obj(&b) } else { self.desuspend_obj(&b) };
        }
        b
    }

    /// Matrix of `α ↦ g ∘ α` on `T(x, source g)`.
    fn postcompose_matrix(&self, g: &Self::Map, x: &Self::Obj) -> Result<FpMatrix> {
        let y = self.source(g);
        let z = self.target(g);
        let cols = self
            .basis(x, &y)
            .iter()
            .map(|e| Ok(self.coords(&self.compose(g, e)?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(FpMatrix::from_columns(self.p(), self.hom_dim(x, &z), &cols))
    }

    /// Matrix of `β ↦ β ∘ q` on `T(target q, z)`.
    fn precompose_matrix(&self, q: &Self::Map, z: &Self::Obj) -> Result<FpMatrix> {
        let x = self.source(q);
        let y = self.target(q);
        let cols = self
            .basis(&y, z)
            .iter()
            .map(|e| Ok(self.coords(&self.compose(e, q)?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(FpMatrix::from_columns(self.p(), self.hom_dim(&x, z), &cols))
    }

    /// All `α` with `g ∘ α = t`, as an affine space of coordinates in
    /// `T(source t, source g)`.
    fn lifts(&self, g: &Self::Map, t: &Self::Map) -> Result<Option<AffineSpace>> {
        if self.target(g) != self.target(t) {
            return Err(Error::NotComposable("lift target mismatch".into()));
        }
        let mat = self.postcompose_matrix(g, &self.source(t))?;
        solve_affine(&mat, &self.coords(t))
    }

    /// All `β` with `β ∘ q = t`, in `T(target q, target t)`.
    fn extensions(&self, q: &Self::Map, t: &Self::Map) -> Result<Option<AffineSpace>> {
        if self.source(q) != self.source(t) {
            return Err(Error::NotComposable("extension source mismatch".into()));
        }
        let mat = self.precompose_matrix(q, &self.target(t))?;
        solve_affine(&mat, &self.coords(t))
    }

    /// Whether `f` is an isomorphism: the ends are isomorphic and `f` has a
    /// left inverse.
    fn is_iso(&self, f: &Self::Map) -> Result<bool> {
        let (a, b) = (self.source(f), self.target(f));
        if !self.isomorphic(&a, &b) {
            return Ok(false);
        }
        Ok(self.extensions(f, &self.identity(&a))?.is_some())
    }

    /// Rotation `(f, g, h) ↦ (g, h, -Σf)`.
    fn rotate(&self, t: &Triangle<Self::Map>) -> Triangle<Self::Map> {
        Triangle { f: t.g.clone(), g: t.h.clone(), h: self.neg(&self.suspend(&t.f)) }
    }

    /// Inverse rotation `(f, g, h) ↦ (-Σ^{-1}h, f, g)`.
    fn rotate_back(&self, t: &Triangle<Self::Map>) -> Triangle<Self::Map> {
        Triangle { f: self.neg(&self.desuspend(&t.h)), g: t.f.clone(), h: t.g.clone() }
    }

    fn check_triangle(&self, t: &Triangle<Self::Map>) -> Result<()> {
        let sx = self.suspend_obj(&self.source(&t.f));
        if self.target(&t.f) != self.source(&t.g)
            || self.target(&t.g) != self.source(&t.h)
            || self.target(&t.h) != sx
        {
            return Err(Error::MalformedTriangle("maps do not chain to the suspension".into()));
        }
        Ok(())
    }

    /// Whether a candidate triangle is isomorphic to the standard triangle
    /// on its first map, by searching for a comparison `φ: C_f -> Z` with
    /// `φ q = g`, `h φ = ι` that is an isomorphism.
    fn is_distinguished(&self, t: &Triangle<Self::Map>, cap: usize) -> Result<bool> {
        self.check_triangle(t)?;
        let c = self.cone(&t.f);
        let cf = self.target(&c.g);
        let z = self.target(&t.g);
        if !self.isomorphic(&cf, &z) {
            return Ok(false);
        }
        // φ q = g and h φ = ι, stacked
        let a1 = self.precompose_matrix(&c.g, &z)?;
        let a2 = self.postcompose_matrix(&t.h, &cf)?;
        let sys = a1.vstack(&a2)?;
        let mut rhs = self.coords(&t.g);
        rhs.extend(self.coords(&c.h));
        let Some(space) = solve_affine(&sys, &rhs)? else {
            return Ok(false);
        };
        for v in space.enumerate_points(cap)? {
            let phi = self.from_coords(&cf, &z, v);
            if self.is_iso(&phi)? {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

impl Triangulated for StMod {
    type Obj = Obj;
    type Map = StMap;

    fn p(&self) -> u32 {
        self.ring.p
    }

    fn source(&self, f: &StMap) -> Obj {
        f.src.clone()
    }

    fn target(&self, f: &StMap) -> Obj {
        f.tgt.clone()
    }

    fn hom_dim(&self, a: &Obj, b: &Obj) -> usize {
        self.dim(a, b)
    }

    fn coords(&self, f: &StMap) -> Vec<u32> {
        f.coeffs.clone()
    }

    fn from_coords(&self, a: &Obj, b: &Obj, c: Vec<u32>) -> StMap {
        self.map(a, b, c).expect("coordinate vector of the right length")
    }

    fn compose(&self, g: &StMap, f: &StMap) -> Result<StMap> {
        StMod::compose(self, g, f)
    }

    fn identity(&self, a: &Obj) -> StMap {
        StMod::identity(self, a)
    }

    fn suspend_obj(&self, a: &Obj) -> Obj {
        StMod::suspend_obj(self, a)
    }

    // Ω = Σ here: both send R/x^a to R/x^{m-a}, and the composite is the
    // identity on the nose.
    fn desuspend_obj(&self, a: &Obj) -> Obj {
        StMod::suspend_obj(self, a)
    }

    fn suspend(&self, f: &StMap) -> StMap {
        StMod::suspend(self, f)
    }

    fn desuspend(&self, f: &StMap) -> StMap {
        StMod::suspend(self, f)
    }

    fn cone(&self, f: &StMap) -> Triangle<StMap> {
        StMod::cone(self, f)
    }

    fn isomorphic(&self, a: &Obj, b: &Obj) -> bool {
        a.same_type(b)
    }

    fn label(&self, a: &Obj, b: &Obj, k: usize) -> String {
        StMod::label(self, a, b, k)
    }
}
