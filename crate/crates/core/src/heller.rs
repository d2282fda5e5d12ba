//! Recognising distinguished triangles by exactness and a Toda bracket.
//!
//! `X -f-> Y -g-> Z -h-> ΣX` is distinguished iff
//! `T(A, Σ^{-1}Z) -> T(A, X) -> T(A, Y) -> T(A, Z) -> T(A, ΣX)` is exact for
//! every `A` and `1_{ΣX} ∈ ⟨h, g, f⟩`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::FpMatrix;
use crate::stcat::{Obj, StMod, Triangle, Triangulated};
use crate::toda::{bracket3, BracketSet, Defn};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Spot {
    X,
    Y,
    Z,
}

/// Where exactness of `T(A, -)` breaks.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExactnessFailure<O> {
    pub test_object: O,
    pub spot: Spot,
    /// `dim ker - dim im` at the spot; `None` when the composite is nonzero
    pub defect: Option<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct HellerVerdict<O> {
    pub distinguished: bool,
    pub exactness_failure: Option<ExactnessFailure<O>>,
    pub bracket: Option<BracketSet<O>>,
    pub contains_identity: bool,
}

/// The indecomposable non-projective modules, which are closed under Σ.
pub fn test_objects(cat: &StMod) -> Vec<Obj> {
    (1..cat.ring().m).map(|i| cat.obj(&[i]).expect("part below m")).collect()
}

fn exact_at(inc: &FpMatrix, out: &FpMatrix) -> Result<Option<Option<usize>>> {
    if !out.mul(inc)?.is_zero() {
        return Ok(Some(None));
    }
    let ker = out.cols() - out.rank();
    let im = inc.rank();
    Ok((ker != im).then_some(Some(ker - im)))
}

/// The exactness condition for `T(A, -)`.
pub fn check_exactness<C: Triangulated>(
    cat: &C,
    t: &Triangle<C::Map>,
    a: &C::Obj,
) -> Result<Option<ExactnessFailure<C::Obj>>> {
    let mats = [
        cat.postcompose_matrix(&cat.desuspend(&t.h), a)?,
        cat.postcompose_matrix(&t.f, a)?,
        cat.postcompose_matrix(&t.g, a)?,
        cat.postcompose_matrix(&t.h, a)?,
    ];
    for (k, spot) in [Spot::X, Spot::Y, Spot::Z].into_iter().enumerate() {
        if let Some(defect) = exact_at(&mats[k], &mats[k + 1])? {
            return Ok(Some(ExactnessFailure { test_object: a.clone(), spot, defect }));
        }
    }
    Ok(None)
}

/// Decides whether `t` is distinguished, testing exactness on `objects`.
pub fn heller_check<C: Triangulated>(
    cat: &C,
    t: &Triangle<C::Map>,
    objects: &[C::Obj],
    cap: usize,
) -> Result<HellerVerdict<C::Obj>> {
    let x = cat.source(&t.f);
    if cat.target(&t.f) != cat.source(&t.g)
        || cat.target(&t.g) != cat.source(&t.h)
        || cat.target(&t.h) != cat.suspend_obj(&x)
    {
        return Err(Error::MalformedTriangle("maps do not form X -> Y -> Z -> ΣX".into()));
    }
    for a in objects {
        if let Some(fail) = check_exactness(cat, t, a)? {
            return Ok(HellerVerdict {
                distinguished: false,
                exactness_failure: Some(fail),
                bracket: None,
                contains_identity: false,
            });
        }
    }
    let b = bracket3(cat, &t.h, &t.g, &t.f, Defn::Fc, cap)?;
    let contains_identity = b.contains(&cat.coords(&cat.identity(&cat.target(&t.h))));
    Ok(HellerVerdict { distinguished: contains_identity, exactness_failure: None, bracket: Some(b), contains_identity })
}
