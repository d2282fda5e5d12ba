//! Restricted Toda families and brackets built from factorization data.

use std::collections::BTreeSet;

use serde::Serialize;

use super::{points, BracketSet, EmptyReason};
use crate::error::{Error, Result};
use crate::linalg::solve_affine;
use crate::stcat::{Triangle, Triangulated};

/// The dotted part of the octahedron on `g1 h0`, where
/// `Z0 -g0-> J0 -h0-> Z1 -k0-> ΣZ0` and `Z1 -g1-> J1 -h1-> Z2 -k1-> ΣZ1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Octahedron<M> {
    /// the standard triangle `(g1 h0, q, ι)`
    pub row: Triangle<M>,
    /// `α: ΣZ0 -> W`
    pub alpha: M,
    /// `β: W -> Z2`
    pub beta: M,
    /// `γ = (Σk0) k1`
    pub gamma: M,
}

/// All fillers `(α, β)` of the octahedron whose column
/// `ΣZ0 -α-> W -β-> Z2 -γ-> Σ²Z0` is distinguished.
pub fn octahedron<C: Triangulated>(
    cat: &C,
    t0: &Triangle<C::Map>,
    t1: &Triangle<C::Map>,
    cap: usize,
) -> Result<Vec<Octahedron<C::Map>>> {
    cat.check_triangle(t0)?;
    cat.check_triangle(t1)?;
    if cat.target(&t0.g) != cat.source(&t1.f) {
        return Err(Error::NotComposable("triangles do not share Z1".into()));
    }
    let f = cat.compose(&t1.f, &t0.g)?;
    let row = cat.cone(&f);
    let (q, iota) = (&row.g, &row.h);
    let w = cat.target(q);
    let sz0 = cat.target(&t0.h);
    let z2 = cat.target(&t1.g);
    let gamma = cat.compose(&cat.suspend(&t0.h), &t1.h)?;

    // α k0 = q g1, ι α = -Σg0
    let a_sys = cat.precompose_matrix(&t0.h, &w)?.vstack(&cat.postcompose_matrix(iota, &sz0)?)?;
    let mut a_rhs = cat.coords(&cat.compose(q, &t1.f)?);
    a_rhs.extend(cat.coords(&cat.neg(&cat.suspend(&t0.f))));
    // β q = h1, k1 β = (Σh0) ι
    let b_sys = cat.precompose_matrix(q, &z2)?.vstack(&cat.postcompose_matrix(&t1.h, &w)?)?;
    let mut b_rhs = cat.coords(&t1.g);
    b_rhs.extend(cat.coords(&cat.compose(&cat.suspend(&t0.g), iota)?));

    let (Some(alphas), Some(betas)) = (solve_affine(&a_sys, &a_rhs)?, solve_affine(&b_sys, &b_rhs)?)
    else {
        return Err(Error::Octahedron("the commuting squares have no solution".into()));
    };
    super::check_pairs(alphas.cardinality(), betas.cardinality(), cap)?;
    let mut out = Vec::new();
    for a in points(cat, &alphas, &sz0, &w, cap)? {
        for b in points(cat, &betas, &w, &z2, cap)? {
            let col = Triangle { f: a.clone(), g: b.clone(), h: gamma.clone() };
            if cat.is_distinguished(&col, cap)? {
                out.push(Octahedron { row: row.clone(), alpha: a.clone(), beta: b, gamma: gamma.clone() });
            }
        }
    }
    if out.is_empty() {
        return Err(Error::Octahedron("no filler makes the column distinguished".into()));
    }
    Ok(out)
}

/// Factorization data for `⟨g h_{n-1} ! g_{n-1} h_{n-2} ! ... ! g_2 h_1, x⟩`:
/// `triangles[i]` is `Z_{i+1} -g-> J_{i+1} -h-> Z_{i+2} -k-> ΣZ_{i+1}`.
#[derive(Clone, Debug)]
pub struct RestrictedInput<M> {
    pub triangles: Vec<Triangle<M>>,
    pub g: M,
    pub x: M,
}

impl<M: Clone> RestrictedInput<M> {
    /// The maps of the bracket, leftmost first.
    pub fn maps<C: Triangulated<Map = M>>(&self, cat: &C) -> Result<Vec<M>> {
        let n = self.triangles.len();
        let mut out = vec![cat.compose(&self.g, &self.triangles[n - 1].g)?];
        for i in (0..n - 1).rev() {
            out.push(cat.compose(&self.triangles[i + 1].f, &self.triangles[i].g)?);
        }
        out.push(self.x.clone());
        Ok(out)
    }
}

/// The octahedra met along the first branch of the recursion.
#[derive(Clone, Debug, Serialize)]
pub struct RestrictedBracketTrace<M> {
    pub stages: Vec<Octahedron<M>>,
}

/// `(Σf, Σg, -Σh)`
pub fn suspend_triangle<C: Triangulated>(cat: &C, t: &Triangle<C::Map>) -> Triangle<C::Map> {
    Triangle { f: cat.suspend(&t.f), g: cat.suspend(&t.g), h: cat.neg(&cat.suspend(&t.h)) }
}

fn recurse<C: Triangulated>(
    cat: &C,
    input: &RestrictedInput<C::Map>,
    cap: usize,
    set: &mut BTreeSet<Vec<u32>>,
    trace: &mut Option<Vec<Octahedron<C::Map>>>,
    path: &mut Vec<Octahedron<C::Map>>,
) -> Result<()> {
    let tris = &input.triangles;
    let n = tris.len() + 1;
    if n == 2 {
        let v = cat.compose_all(&[&input.g, &tris[0].g, &input.x])?;
        set.insert(cat.coords(&v));
        trace.get_or_insert_with(|| path.clone());
        return Ok(());
    }
    let octs = octahedron(cat, &tris[n - 3], &tris[n - 2], cap)?;
    for oct in octs {
        path.push(oct.clone());
        if n == 3 {
            // Σα runs over the lifts of -Σx through ι
            let sx = cat.neg(&cat.suspend(&input.x));
            let b = cat.compose(&input.g, &oct.beta)?;
            if let Some(space) = cat.lifts(&oct.row.h, &sx)? {
                let w = cat.source(&oct.row.h);
                for a in points(cat, &space, &cat.source(&sx), &w, cap)? {
                    set.insert(cat.coords(&cat.compose(&b, &a)?));
                }
                trace.get_or_insert_with(|| path.clone());
            }
        } else {
            let mut next: Vec<Triangle<C::Map>> =
                tris[..n - 3].iter().map(|t| suspend_triangle(cat, t)).collect();
            next.push(Triangle { f: oct.alpha.clone(), g: oct.beta.clone(), h: oct.gamma.clone() });
            let sub = RestrictedInput { triangles: next, g: input.g.clone(), x: cat.suspend(&input.x) };
            recurse(cat, &sub, cap, set, trace, path)?;
        }
        path.pop();
        if set.len() > cap {
            return Err(Error::EnumerationOverflow { needed: set.len() as u128, cap });
        }
    }
    Ok(())
}

/// The restricted bracket, a subset of `T(Σ^{n-2}B, A)`.
pub fn restricted_higher_bracket<C: Triangulated>(
    cat: &C,
    input: &RestrictedInput<C::Map>,
    cap: usize,
) -> Result<(BracketSet<C::Obj>, RestrictedBracketTrace<C::Map>)> {
    let tris = &input.triangles;
    if tris.is_empty() {
        return Err(Error::NotComposable("at least one triangle is needed".into()));
    }
    for t in tris {
        cat.check_triangle(t)?;
    }
    for w in tris.windows(2) {
        if cat.target(&w[0].g) != cat.source(&w[1].f) {
            return Err(Error::NotComposable("consecutive triangles do not chain".into()));
        }
    }
    if cat.target(&input.x) != cat.source(&tris[0].g) || cat.source(&input.g) != cat.target(&tris[tris.len() - 1].g) {
        return Err(Error::NotComposable("g or x does not fit the triangles".into()));
    }
    let n = tris.len() + 1;
    let src = cat.shift_obj(&cat.source(&input.x), n as i32 - 2);
    let tgt = cat.target(&input.g);
    let mut set = BTreeSet::new();
    let mut trace = None;
    recurse(cat, input, cap, &mut set, &mut trace, &mut Vec::new())?;
    let mut out = BracketSet::new(src, tgt, set, "restricted");
    if out.is_empty() {
        out.empty_reason = Some(EmptyReason::NoFiller);
    }
    Ok((out, RestrictedBracketTrace { stages: trace.unwrap_or_default() }))
}
