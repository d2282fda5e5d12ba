//! The opposite category. An op map `A -> B` is a map `B -> A`; the
//! suspension is the desuspension, and an op triangle `(g1, g2, g3)` is
//! distinguished exactly when `(g3, g2, g1)` is.

use super::{Triangle, Triangulated};
use crate::error::Result;

#[derive(Clone, Copy, Debug)]
pub struct Op<'a, C>(pub &'a C);

impl<C: Triangulated> Triangulated for Op<'_, C> {
    type Obj = C::Obj;
    type Map = C::Map;

    fn p(&self) -> u32 {
        self.0.p()
    }

    fn source(&self, f: &C::Map) -> C::Obj {
        self.0.target(f)
    }

    fn target(&self, f: &C::Map) -> C::Obj {
        self.0.source(f)
    }

    fn hom_dim(&self, a: &C::Obj, b: &C::Obj) -> usize {
        self.0.hom_dim(b, a)
    }

    fn coords(&self, f: &C::Map) -> Vec<u32> {
        self.0.coords(f)
    }

    fn from_coords(&self, a: &C::Obj, b: &C::Obj, c: Vec<u32>) -> C::Map {
        self.0.from_coords(b, a, c)
    }

    fn compose(&self, g: &C::Map, f: &C::Map) -> Result<C::Map> {
        self.0.compose(f, g)
    }

    fn identity(&self, a: &C::Obj) -> C::Map {
        self.0.identity(a)
    }

    fn suspend_obj(&self, a: &C::Obj) -> C::Obj {
        self.0.desuspend_obj(a)
    }

    fn desuspend_obj(&self, a: &C::Obj) -> C::Obj {
        self.0.suspend_obj(a)
    }

    fn suspend(&self, f: &C::Map) -> C::Map {
        self.0.desuspend(f)
    }

    fn desuspend(&self, f: &C::Map) -> C::Map {
        self.0.suspend(f)
    }

    /// From the standard triangle `B -f-> A -q-> C -ι-> ΣB` below, rotated
    /// back twice to `Σ^{-1}A -(-Σ^{-1}q)-> Σ^{-1}C -(-Σ^{-1}ι)-> B -f-> A`.
    fn cone(&self, f: &C::Map) -> Triangle<C::Map> {
        let t = self.0.cone(f);
        let g = self.0.neg(&self.0.desuspend(&t.h));
        let h = self.0.neg(&self.0.desuspend(&t.g));
        Triangle { f: f.clone(), g, h }
    }

    fn isomorphic(&self, a: &C::Obj, b: &C::Obj) -> bool {
        self.0.isomorphic(a, b)
    }

    fn label(&self, a: &C::Obj, b: &C::Obj, k: usize) -> String {
        self.0.label(b, a, k)
    }
}
