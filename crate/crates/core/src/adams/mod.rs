//! Ghost projective classes, Adams resolutions and their spectral sequences.
//!
//! Resolutions are stored in injective form, `Y_s -p-> I_s -δ-> ΣY_{s+1}
//! -Σi-> ΣY_s`, over any triangulated category. The ghost projective class
//! of the stable category is an injective class of its opposite, so
//! projective resolutions are built and analysed in `Op`.

mod forms;
mod pages;

pub use forms::{dr_bracket_forms, D2Variants, DrForms, WFiltration};
pub use pages::{PageEntry, SSPage, SpectralSequence};

use serde::Serialize;

use crate::error::Result;
use crate::stcat::{Obj, Op, StMap, StMod, Triangle, Triangulated};

/// The projective class generated by one object.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProjectiveClass {
    pub generator: Obj,
    /// smallest `k >= 1` with `Σ^k G ≅ G`
    pub period: usize,
}

impl ProjectiveClass {
    pub fn new(cat: &StMod, generator: Obj) -> Self {
        let mut period = 1;
        while !cat.shift_obj(&generator, period as i32).same_type(&generator) {
            period += 1;
        }
        ProjectiveClass { generator, period }
    }

    /// `Σ^n G` for `n` over one period.
    pub fn shifts(&self, cat: &StMod) -> Vec<Obj> {
        (0..self.period).map(|n| cat.shift_obj(&self.generator, n as i32)).collect()
    }

    /// Whether `f` is onto on every `T(Σ^n G, -)`.
    pub fn is_epic(&self, cat: &StMod, f: &StMap) -> Result<bool> {
        for g in self.shifts(cat) {
            let mat = cat.postcompose_matrix(f, &g)?;
            if mat.rank() != mat.rows() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Whether `f` is killed by every `T(Σ^n G, -)`.
    pub fn is_null(&self, cat: &StMod, f: &StMap) -> Result<bool> {
        for g in self.shifts(cat) {
            if !cat.postcompose_matrix(f, &g)?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// `P -> M` with one summand `Σ^n G` per basis element of `T(Σ^n G, M)`.
pub fn ghost_cover(cat: &StMod, class: &ProjectiveClass, m: &Obj) -> Result<(Obj, StMap)> {
    let mut maps = Vec::new();
    for g in class.shifts(cat) {
        maps.extend(cat.basis(&g, m));
    }
    let p = cat.row(m, &maps)?;
    Ok((p.src().clone(), p))
}

/// An Adams resolution in injective form.
#[derive(Clone, Debug, Serialize)]
pub struct Resolution<O, M> {
    /// `Y_0, ..., Y_len`
    pub y: Vec<O>,
    /// `I_0, ..., I_{len-1}`
    pub inj: Vec<O>,
    /// `p_s: Y_s -> I_s`
    pub p: Vec<M>,
    /// `δ_s: I_s -> ΣY_{s+1}`
    pub delta: Vec<M>,
    /// `i_s: Y_{s+1} -> Y_s`
    pub i: Vec<M>,
}

impl<O: Clone, M: Clone> Resolution<O, M> {
    pub fn len(&self) -> usize {
        self.inj.len()
    }

    pub fn is_empty(&self) -> bool {
        self.inj.is_empty()
    }

    /// `Y_s -> I_s -> ΣY_{s+1} -> ΣY_s`
    pub fn triangle<C: Triangulated<Obj = O, Map = M>>(&self, cat: &C, s: usize) -> Triangle<M> {
        Triangle { f: self.p[s].clone(), g: self.delta[s].clone(), h: cat.suspend(&self.i[s]) }
    }

    /// `d_1 = (Σp_{s+1}) δ_s: I_s -> ΣI_{s+1}`
    pub fn d1<C: Triangulated<Obj = O, Map = M>>(&self, cat: &C, s: usize) -> Result<M> {
        cat.compose(&cat.suspend(&self.p[s + 1]), &self.delta[s])
    }
}

/// Resolves `y` by iterating `envelope` and the standard triangle.
pub fn resolve<C, F>(cat: &C, y: &C::Obj, len: usize, envelope: F) -> Result<Resolution<C::Obj, C::Map>>
where
    C: Triangulated,
    F: Fn(&C::Obj) -> Result<(C::Obj, C::Map)>,
{
    let mut res = Resolution { y: vec![y.clone()], inj: Vec::new(), p: Vec::new(), delta: Vec::new(), i: Vec::new() };
    for s in 0..len {
        let (inj, p) = envelope(&res.y[s])?;
        let t = cat.cone(&p);
        let next = cat.desuspend_obj(&cat.target(&t.g));
        res.i.push(cat.desuspend(&t.h));
        res.delta.push(t.g);
        res.p.push(p);
        res.inj.push(inj);
        res.y.push(next);
    }
    Ok(res)
}

/// The Adams resolution of `m` for the ghost class, as an injective
/// resolution in the opposite category.
pub fn ghost_resolution(cat: &StMod, class: &ProjectiveClass, m: &Obj, len: usize) -> Result<Resolution<Obj, StMap>> {
    resolve(&Op(cat), m, len, |y| ghost_cover(cat, class, y))
}

/// Graded stable endomorphisms of a generator over a window of degrees.
#[derive(Clone, Debug, Serialize)]
pub struct SparseReport {
    pub generator: Obj,
    pub n: usize,
    /// `(degree, dim T(Σ^d G, G))` for `d` in the window
    pub degrees: Vec<(i32, usize)>,
    pub nonzero: Vec<i32>,
    pub sparse: bool,
}

/// Whether `T(Σ^* G, G)` is concentrated in degrees divisible by `n`,
/// judged over `-window..=window`.
pub fn sparse_check(cat: &StMod, g: &Obj, n: usize, window: usize) -> SparseReport {
    let w = window as i32;
    let degrees: Vec<(i32, usize)> = (-w..=w).map(|d| (d, cat.dim(&cat.shift_obj(g, d), g))).collect();
    let nonzero: Vec<i32> = degrees.iter().filter(|(_, k)| *k > 0).map(|(d, _)| *d).collect();
    let sparse = nonzero.iter().all(|d| d.rem_euclid(n as i32) == 0);
    SparseReport { generator: g.clone(), n, degrees, nonzero, sparse }
}
