//! Toda brackets in a triangulated category: the three 3-fold definitions,
//! Toda families, higher brackets, restricted brackets and filtered objects.

mod filtered;
mod higher;
mod restricted;

pub use filtered::{filtered_witness, FilteredObject, FilteredWitness};
pub use higher::{all_j_sequences, higher_bracket, j_sequence_sign, standard_chains, Chain};
pub use restricted::{
    octahedron, restricted_higher_bracket, suspend_triangle, Octahedron, RestrictedBracketTrace, RestrictedInput,
};

use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{Subspace, AffineSpace};
use crate::stcat::{Triangle, Triangulated};

pub const DEFAULT_CAP: usize = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Defn {
    Cc,
    Fc,
    Ff,
}

impl std::str::FromStr for Defn {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "cc" => Ok(Defn::Cc),
            "fc" => Ok(Defn::Fc),
            "ff" => Ok(Defn::Ff),
            _ => Err(format!("unknown bracket definition `{s}`")),
        }
    }
}

/// Why a bracket came out empty.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EmptyReason {
    /// `f2 ∘ f1 ≠ 0`
    LowerComposite,
    /// `f3 ∘ f2 ≠ 0`
    UpperComposite,
    /// composites vanish but some later stage has no filler
    NoFiller,
}

/// A set of maps `src -> tgt`, stored as sorted coordinate vectors.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BracketSet<O> {
    pub src: O,
    pub tgt: O,
    pub elements: Vec<Vec<u32>>,
    /// Basis of the indeterminacy subgroup, when known.
    pub indeterminacy: Option<Vec<Vec<u32>>>,
    pub empty_reason: Option<EmptyReason>,
    pub definition: String,
    pub j_sequence: Vec<usize>,
    /// Number of candidate fillers examined.
    pub enumerated: usize,
}

impl<O: Clone> BracketSet<O> {
    pub(crate) fn new(src: O, tgt: O, elements: BTreeSet<Vec<u32>>, definition: &str) -> Self {
        BracketSet {
            src,
            tgt,
            elements: elements.into_iter().collect(),
            indeterminacy: None,
            empty_reason: None,
            definition: definition.to_string(),
            j_sequence: Vec::new(),
            enumerated: 0,
        }
    }

    pub(crate) fn empty(src: O, tgt: O, reason: EmptyReason, definition: &str) -> Self {
        let mut b = Self::new(src, tgt, BTreeSet::new(), definition);
        b.empty_reason = Some(reason);
        b
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, v: &[u32]) -> bool {
        self.elements.binary_search_by(|e| e.as_slice().cmp(v)).is_ok()
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.elements.iter().all(|e| other.contains(e))
    }

    pub fn same_elements(&self, other: &Self) -> bool {
        self.elements == other.elements
    }

    /// Whether the elements form exactly one coset of `span(basis)`.
    pub fn is_coset_of(&self, p: u32, basis: &[Vec<u32>]) -> Result<bool> {
        let Some(first) = self.elements.first() else {
            return Ok(false);
        };
        let sub = Subspace::span(p, first.len(), basis)?;
        let expected = (p as u128).pow(sub.dim() as u32);
        if expected != self.elements.len() as u128 {
            return Ok(false);
        }
        Ok(self.elements.iter().all(|e| {
            let d: Vec<u32> = e.iter().zip(first).map(|(a, b)| (a + p - b) % p).collect();
            sub.contains(&d)
        }))
    }

    /// The set with every element replaced by its image under a map of
    /// coordinate vectors.
    pub fn map_elements<P: Clone>(
        &self,
        src: P,
        tgt: P,
        f: impl Fn(&[u32]) -> Result<Vec<u32>>,
    ) -> Result<BracketSet<P>> {
        let elements = self.elements.iter().map(|e| f(e)).collect::<Result<BTreeSet<_>>>()?;
        let mut out = BracketSet::new(src, tgt, elements, &self.definition);
        out.empty_reason = self.empty_reason;
        out.j_sequence = self.j_sequence.clone();
        out.enumerated = self.enumerated;
        Ok(out)
    }
}

/// One element `(β, Σα)` of a Toda family, with the triangle on `f2` used.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TodaFamilyElement<M> {
    pub triangle: Triangle<M>,
    pub sigma_alpha: M,
    pub beta: M,
}

pub(crate) fn check_chain<C: Triangulated>(cat: &C, maps: &[&C::Map]) -> Result<()> {
    for w in maps.windows(2) {
        if cat.source(w[0]) != cat.target(w[1]) {
            return Err(Error::NotComposable(format!(
                "{:?} does not land in the source of {:?}",
                cat.target(w[1]),
                cat.source(w[0])
            )));
        }
    }
    Ok(())
}

fn points<C: Triangulated>(
    cat: &C,
    space: &AffineSpace,
    a: &C::Obj,
    b: &C::Obj,
    cap: usize,
) -> Result<Vec<C::Map>> {
    Ok(space
        .enumerate_points(cap)?
        .into_iter()
        .map(|v| cat.from_coords(a, b, v))
        .collect())
}

fn check_pairs(left: u128, right: u128, cap: usize) -> Result<()> {
    let needed = left.saturating_mul(right);
    if needed > cap as u128 {
        return Err(Error::EnumerationOverflow { needed, cap });
    }
    Ok(())
}

/// `(f3)_* T(ΣX0, X2) + (Σf1)^* T(ΣX1, X3)`, as a basis in RREF.
pub fn indeterminacy<C: Triangulated>(
    cat: &C,
    f3: &C::Map,
    f2: &C::Map,
    f1: &C::Map,
) -> Result<Vec<Vec<u32>>> {
    check_chain(cat, &[f3, f2, f1])?;
    let sx0 = cat.suspend_obj(&cat.source(f1));
    let x3 = cat.target(f3);
    let left = cat.postcompose_matrix(f3, &sx0)?;
    let right = cat.precompose_matrix(&cat.suspend(f1), &x3)?;
    let mut gens = left.columns();
    gens.extend(right.columns());
    let sub = Subspace::span(cat.p(), cat.hom_dim(&sx0, &x3), &gens)?;
    Ok(sub.basis().to_vec())
}

/// Nonemptiness test shared by the 3-fold brackets.
fn empty_reason<C: Triangulated>(
    cat: &C,
    f3: &C::Map,
    f2: &C::Map,
    f1: &C::Map,
) -> Result<Option<EmptyReason>> {
    if !cat.is_zero(&cat.compose(f2, f1)?) {
        return Ok(Some(EmptyReason::LowerComposite));
    }
    if !cat.is_zero(&cat.compose(f3, f2)?) {
        return Ok(Some(EmptyReason::UpperComposite));
    }
    Ok(None)
}

/// The spaces of `Σα` and `β` through the standard triangle on `f2`:
/// `ι Σα = -Σf1` and `β q = f3`.
pub(crate) fn family_spaces<C: Triangulated>(
    cat: &C,
    f3: &C::Map,
    f2: &C::Map,
    f1: &C::Map,
) -> Result<(Triangle<C::Map>, Option<AffineSpace>, Option<AffineSpace>)> {
    let t = cat.cone(f2);
    let alphas = cat.lifts(&t.h, &cat.neg(&cat.suspend(f1)))?;
    let betas = cat.extensions(&t.g, f3)?;
    Ok((t, alphas, betas))
}

/// The Toda family `T(f3, f2, f1)` on the standard triangle of `f2`.
pub fn toda_family<C: Triangulated>(
    cat: &C,
    f3: &C::Map,
    f2: &C::Map,
    f1: &C::Map,
    cap: usize,
) -> Result<Vec<TodaFamilyElement<C::Map>>> {
    check_chain(cat, &[f3, f2, f1])?;
    let (t, alphas, betas) = family_spaces(cat, f3, f2, f1)?;
    let (Some(alphas), Some(betas)) = (alphas, betas) else {
        return Ok(Vec::new());
    };
    check_pairs(alphas.cardinality(), betas.cardinality(), cap)?;
    let c = cat.target(&t.g);
    let sx0 = cat.suspend_obj(&cat.source(f1));
    let x3 = cat.target(f3);
    let sa = points(cat, &alphas, &sx0, &c, cap)?;
    let bs = points(cat, &betas, &c, &x3, cap)?;
    let mut out = Vec::with_capacity(sa.len() * bs.len());
    for beta in &bs {
        for a in &sa {
            out.push(TodaFamilyElement {
                triangle: t.clone(),
                sigma_alpha: a.clone(),
                beta: beta.clone(),
            });
        }
    }
    Ok(out)
}

/// The 3-fold bracket `⟨f3, f2, f1⟩ ⊆ T(ΣX0, X3)` by one of the three
/// definitions.
pub fn bracket3<C: Triangulated>(
    cat: &C,
    f3: &C::Map,
    f2: &C::Map,
    f1: &C::Map,
    defn: Defn,
    cap: usize,
) -> Result<BracketSet<C::Obj>> {
    check_chain(cat, &[f3, f2, f1])?;
    let src = cat.suspend_obj(&cat.source(f1));
    let tgt = cat.target(f3);
    let name = match defn {
        Defn::Cc => "cc",
        Defn::Fc => "fc",
        Defn::Ff => "ff",
    };
    let mut out = if let Some(r) = empty_reason(cat, f3, f2, f1)? {
        BracketSet::empty(src, tgt, r, name)
    } else {
        let (elements, n) = match defn {
            Defn::Fc => fc_elements(cat, f3, f2, f1, cap)?,
            Defn::Cc => cc_elements(cat, f3, f2, f1, cap)?,
            Defn::Ff => ff_elements(cat, f3, f2, f1, cap)?,
        };
        let mut b = BracketSet::new(src, tgt, elements, name);
        b.enumerated = n;
        if b.is_empty() {
            b.empty_reason = Some(EmptyReason::NoFiller);
        }
        b
    };
    out.indeterminacy = Some(indeterminacy(cat, f3, f2, f1)?);
    Ok(out)
}

type Elements = (BTreeSet<Vec<u32>>, usize);

fn fc_elements<C: Triangulated>(
    cat: &C,
    f3: &C::Map,
    f2: &C::Map,
    f1: &C::Map,
    cap: usize,
) -> Result<Elements> {
    let fam = toda_family(cat, f3, f2, f1, cap)?;
    let mut set = BTreeSet::new();
    for e in &fam {
        set.insert(cat.coords(&cat.compose(&e.beta, &e.sigma_alpha)?));
    }
    Ok((set, fam.len()))
}

// top row X0 -f1-> X1 -q1-> C1 -ι1-> ΣX0; φ q1 = f2, ψ ι1 = f3 φ
fn cc_elements<C: Triangulated>(
    cat: &C,
    f3: &C::Map,
    f2: &C::Map,
    f1: &C::Map,
    cap: usize,
) -> Result<Elements> {
    let t = cat.cone(f1);
    let c1 = cat.target(&t.g);
    let x2 = cat.target(f2);
    let sx0 = cat.suspend_obj(&cat.source(f1));
    let x3 = cat.target(f3);
    let Some(phis) = cat.extensions(&t.g, f2)? else {
        return Ok((BTreeSet::new(), 0));
    };
    let mut set = BTreeSet::new();
    let mut n = 0;
    for phi in points(cat, &phis, &c1, &x2, cap)? {
        let Some(psis) = cat.extensions(&t.h, &cat.compose(f3, &phi)?)? else {
            continue;
        };
        check_pairs(phis.cardinality(), psis.cardinality(), cap)?;
        for psi in points(cat, &psis, &sx0, &x3, cap)? {
            n += 1;
            set.insert(cat.coords(&psi));
        }
    }
    Ok((set, n))
}

// bottom row Σ^{-1}X3 -(-Σ^{-1}q3)-> Σ^{-1}C3 -(-Σ^{-1}ι3)-> X2 -f3-> X3;
// (-Σ^{-1}ι3) γ = f2, (-Σ^{-1}q3) δ = γ f1, result Σδ
fn ff_elements<C: Triangulated>(
    cat: &C,
    f3: &C::Map,
    f2: &C::Map,
    f1: &C::Map,
    cap: usize,
) -> Result<Elements> {
    let t = cat.cone(f3);
    let lower_q = cat.neg(&cat.desuspend(&t.g));
    let lower_i = cat.neg(&cat.desuspend(&t.h));
    let x1 = cat.source(f2);
    let x0 = cat.source(f1);
    let dc3 = cat.source(&lower_i);
    let dx3 = cat.source(&lower_q);
    let Some(gammas) = cat.lifts(&lower_i, f2)? else {
        return Ok((BTreeSet::new(), 0));
    };
    let mut set = BTreeSet::new();
    let mut n = 0;
    for gamma in points(cat, &gammas, &x1, &dc3, cap)? {
        let Some(deltas) = cat.lifts(&lower_q, &cat.compose(&gamma, f1)?)? else {
            continue;
        };
        check_pairs(gammas.cardinality(), deltas.cardinality(), cap)?;
        for delta in points(cat, &deltas, &x0, &dx3, cap)? {
            n += 1;
            set.insert(cat.coords(&cat.suspend(&delta)));
        }
    }
    Ok((set, n))
}

/// A prescribed filler for the fc bracket.
#[derive(Clone, Debug)]
pub enum Prescribed<M> {
    /// `Σα: ΣX0 -> C_{f2}` on the standard triangle of `f2`
    SigmaAlpha(M),
    /// `β: C_{f2} -> X3`
    Beta(M),
}

/// The fc bracket with one filler fixed.
pub fn bracket3_restricted<C: Triangulated>(
    cat: &C,
    f3: &C::Map,
    f2: &C::Map,
    f1: &C::Map,
    prescribed: &Prescribed<C::Map>,
    cap: usize,
) -> Result<BracketSet<C::Obj>> {
    check_chain(cat, &[f3, f2, f1])?;
    let (t, alphas, betas) = family_spaces(cat, f3, f2, f1)?;
    let c = cat.target(&t.g);
    let sx0 = cat.suspend_obj(&cat.source(f1));
    let x3 = cat.target(f3);
    let (name, fixed_ok, others) = match prescribed {
        Prescribed::SigmaAlpha(a) => {
            if cat.source(a) != sx0 || cat.target(a) != c {
                return Err(Error::PrescribedMapInvalid("Σα has the wrong ends".into()));
            }
            let ok = cat.compose(&t.h, a)? == cat.neg(&cat.suspend(f1));
            ("fc, prescribed alpha", ok, betas)
        }
        Prescribed::Beta(b) => {
            if cat.source(b) != c || cat.target(b) != x3 {
                return Err(Error::PrescribedMapInvalid("β has the wrong ends".into()));
            }
            let ok = cat.compose(b, &t.g)? == *f3;
            ("fc, prescribed beta", ok, alphas)
        }
    };
    if !fixed_ok {
        return Err(Error::PrescribedMapInvalid(name.to_string()));
    }
    let mut set = BTreeSet::new();
    let mut n = 0;
    if let Some(space) = others {
        match prescribed {
            Prescribed::SigmaAlpha(a) => {
                for b in points(cat, &space, &c, &x3, cap)? {
                    n += 1;
                    set.insert(cat.coords(&cat.compose(&b, a)?));
                }
            }
            Prescribed::Beta(b) => {
                for a in points(cat, &space, &sx0, &c, cap)? {
                    n += 1;
                    set.insert(cat.coords(&cat.compose(b, &a)?));
                }
            }
        }
    }
    let mut out = BracketSet::new(sx0, x3, set, name);
    out.enumerated = n;
    if out.is_empty() {
        out.empty_reason = Some(EmptyReason::NoFiller);
    }
    Ok(out)
}
