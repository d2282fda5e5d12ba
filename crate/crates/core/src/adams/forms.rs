//! `d_r` as Toda brackets built from the resolution.
//!
//! All bracket forms live in `T(Σ^{r-1}Σ^u X, Σ^r I_{s+r})` and are moved to
//! `E_1^{s+r,u-1}` by desuspending `r` times.

use std::collections::BTreeSet;

use serde::Serialize;

use super::SpectralSequence;
use crate::error::{Error, Result};
use crate::stcat::{Triangle, Triangulated};
use crate::toda::{
    bracket3, higher_bracket, restricted_higher_bracket, suspend_triangle, BracketSet, Defn, FilteredObject,
    RestrictedBracketTrace, RestrictedInput,
};

/// The `r`-filtered object `W` read off the restricted computation, with
/// the extension `b = -(Σ^r p_{s+r}) β_r`.
#[derive(Clone, Debug, Serialize)]
pub struct WFiltration<M> {
    pub object: FilteredObject<M>,
    pub b: M,
    /// `b σ' = Σ^{r-1} d_1`
    pub b_extends: bool,
    /// `{b a : σ a = Σ^{r-1} x}`, desuspended into `E_1`
    pub elements: Vec<Vec<u32>>,
}

/// The `r = 2` variants and inclusion chain, all desuspended into `E_1`.
#[derive(Clone, Debug, Serialize)]
pub struct D2Variants<O> {
    /// `⟨Σd_1, Σp_{s+1}, δ_s x⟩`
    pub lift_form: BracketSet<O>,
    /// `(Σ²p_{s+2}) ⟨Σδ_{s+1}, Σp_{s+1}, δ_s x⟩`
    pub composed_form: BracketSet<O>,
    /// `(Σ²p_{s+2}) ⟨Σδ_{s+1}, d_1, x⟩`
    pub middle: BracketSet<O>,
    /// `⟨Σd_1, d_1, x⟩`
    pub outer: BracketSet<O>,
    pub dr_in_middle: bool,
    pub middle_in_outer: bool,
    pub middle_proper: bool,
    pub outer_proper: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct DrForms<O, M> {
    pub s: usize,
    pub u: i32,
    pub r: usize,
    /// (a) the exact-couple set
    pub dr: BracketSet<O>,
    /// (b) `⟨Σ^{r-1}d_1, ..., Σd_1, Σp_{s+1}, δ_s x⟩`
    pub full: BracketSet<O>,
    /// (c) `⟨Σ^{r-1}d_1 ! ... ! d_1, x⟩`
    pub restricted: BracketSet<O>,
    /// (d), only for `r = 2`
    pub d2: Option<D2Variants<O>>,
    /// (e), only for `r >= 2`
    pub w: Option<WFiltration<M>>,
    pub full_equal: bool,
    pub restricted_equal: bool,
    pub w_equal: bool,
}

impl<O, M> DrForms<O, M> {
    pub fn all_equal(&self) -> bool {
        self.full_equal && self.restricted_equal && self.w_equal && self.d2.as_ref().is_none_or(|d| d.all_hold())
    }
}

impl<O> D2Variants<O> {
    pub fn all_hold(&self) -> bool {
        self.dr_in_middle && self.middle_in_outer
    }
}

/// Moves a set by `Σ^{-k}`.
fn desuspended<C: Triangulated>(cat: &C, b: &BracketSet<C::Obj>, k: i32) -> Result<BracketSet<C::Obj>> {
    let (src, tgt) = (cat.shift_obj(&b.src, -k), cat.shift_obj(&b.tgt, -k));
    b.map_elements(src, tgt, |e| {
        let f = cat.from_coords(&b.src, &b.tgt, e.to_vec());
        Ok(cat.coords(&cat.shift(&f, -k)))
    })
}

fn post<C: Triangulated>(cat: &C, g: &C::Map, b: &BracketSet<C::Obj>) -> Result<BracketSet<C::Obj>> {
    b.map_elements(b.src.clone(), cat.target(g), |e| {
        let f = cat.from_coords(&b.src, &b.tgt, e.to_vec());
        Ok(cat.coords(&cat.compose(g, &f)?))
    })
}

/// `Σ^j` of resolution triangle `s + j`, for `j < r`.
fn triangles<C: Triangulated>(ss: &SpectralSequence<C>, s: usize, r: usize) -> Vec<Triangle<C::Map>> {
    (0..r)
        .map(|j| {
            let mut t = ss.res.triangle(ss.cat, s + j);
            for _ in 0..j {
                t = suspend_triangle(ss.cat, &t);
            }
            t
        })
        .collect()
}

fn w_filtration<C: Triangulated>(
    ss: &SpectralSequence<C>,
    s: usize,
    r: usize,
    x: &C::Map,
    trace: &RestrictedBracketTrace<C::Map>,
    cap: usize,
) -> Result<WFiltration<C::Map>> {
    let c = ss.cat;
    let stages = &trace.stages;
    if stages.len() != r - 1 {
        return Err(Error::Verification("restricted trace has the wrong length".into()));
    }
    let d1 = |k: usize| -> Result<C::Map> { Ok(c.shift(&ss.res.d1(c, s + k)?, k as i32)) };
    let lambdas = (0..r - 1).map(d1).collect::<Result<Vec<_>>>()?;
    let w1 = c.source(&stages[0].row.g);
    let mut i = Vec::new();
    let mut q = vec![c.neg(&c.identity(&w1))];
    let mut e = Vec::new();
    for st in stages {
        i.push(st.row.g.clone());
        q.push(st.row.h.clone());
        e.push(c.neg(&c.suspend(&st.row.f)));
    }
    let object = FilteredObject { n: r, lambdas, i, q, e };
    object.verify(c, cap)?;

    let last = stages.last().expect("r >= 2");
    let sp = c.shift(&ss.res.p[s + r], r as i32);
    let b = c.neg(&c.compose(&sp, &last.beta)?);
    let b_extends = c.compose(&b, &object.sigma_prime(c)?)? == d1(r - 1)?;

    let sx = c.shift(x, r as i32 - 1);
    let mut elements = BTreeSet::new();
    if let Some(space) = c.lifts(object.sigma(), &sx)? {
        let wr = c.source(object.sigma());
        for v in space.enumerate_points(cap)? {
            let a = c.from_coords(&c.source(&sx), &wr, v);
            elements.insert(c.coords(&c.shift(&c.compose(&b, &a)?, -(r as i32))));
        }
    }
    Ok(WFiltration { object, b, b_extends, elements: elements.into_iter().collect() })
}

fn d2_variants<C: Triangulated>(
    ss: &SpectralSequence<C>,
    s: usize,
    x: &C::Map,
    dr: &BracketSet<C::Obj>,
    cap: usize,
) -> Result<D2Variants<C::Obj>> {
    let c = ss.cat;
    let res = ss.res;
    let delta_x = c.compose(&res.delta[s], x)?;
    let sp1 = c.suspend(&res.p[s + 1]);
    let sd1 = c.suspend(&res.d1(c, s + 1)?);
    let sdelta1 = c.suspend(&res.delta[s + 1]);
    let s2p2 = c.shift(&res.p[s + 2], 2);
    let d1 = res.d1(c, s)?;

    let lift_form = desuspended(c, &bracket3(c, &sd1, &sp1, &delta_x, Defn::Fc, cap)?, 2)?;
    let composed = post(c, &s2p2, &bracket3(c, &sdelta1, &sp1, &delta_x, Defn::Fc, cap)?)?;
    let composed_form = desuspended(c, &composed, 2)?;
    let middle = post(c, &s2p2, &bracket3(c, &sdelta1, &d1, x, Defn::Fc, cap)?)?;
    let middle = desuspended(c, &middle, 2)?;
    let outer = desuspended(c, &bracket3(c, &sd1, &d1, x, Defn::Fc, cap)?, 2)?;
    Ok(D2Variants {
        dr_in_middle: dr.is_subset(&middle),
        middle_in_outer: middle.is_subset(&outer),
        middle_proper: middle.len() > dr.len(),
        outer_proper: outer.len() > middle.len(),
        lift_form,
        composed_form,
        middle,
        outer,
    })
}

/// Computes `d_r[x]` for `x ∈ E_1^{s,u}` in every available form.
pub fn dr_bracket_forms<C: Triangulated>(
    ss: &SpectralSequence<C>,
    s: usize,
    u: i32,
    x: &C::Map,
    r: usize,
    cap: usize,
) -> Result<DrForms<C::Obj, C::Map>> {
    if r < 2 {
        return Err(Error::Verification("bracket forms need r >= 2".into()));
    }
    let c = ss.cat;
    let res = ss.res;
    let dr = ss.dr_set(s, u, x, r, cap)?;
    let ri = r as i32;

    // (b)
    let mut maps = (1..r).rev().map(|k| Ok(c.shift(&res.d1(c, s + k)?, k as i32))).collect::<Result<Vec<_>>>()?;
    maps.push(c.suspend(&res.p[s + 1]));
    maps.push(c.compose(&res.delta[s], x)?);
    let full = desuspended(c, &higher_bracket(c, &maps, None, cap)?, ri)?;

    // (c)
    let input = RestrictedInput { triangles: triangles(ss, s, r), g: c.shift(&res.p[s + r], ri), x: x.clone() };
    let (rb, trace) = restricted_higher_bracket(c, &input, cap)?;
    let restricted = desuspended(c, &rb, ri)?;

    // (d), (e)
    let d2 = if r == 2 { Some(d2_variants(ss, s, x, &dr, cap)?) } else { None };
    let w = w_filtration(ss, s, r, x, &trace, cap)?;

    Ok(DrForms {
        s,
        u,
        r,
        full_equal: full.elements == dr.elements,
        restricted_equal: restricted.elements == dr.elements,
        w_equal: w.elements == dr.elements,
        dr,
        full,
        restricted,
        d2,
        w: Some(w),
    })
}
