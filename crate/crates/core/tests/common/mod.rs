//! Bracket identities checked on random chains. Shared by the property and
//! acceptance targets.
#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use todakit::linalg::vec_neg;
use todakit::modrep::Ring;
use todakit::sample::random_null_chain;
use todakit::stcat::{Obj, Op, StMap, StMod, Triangulated};
use todakit::toda::{
    all_j_sequences, bracket3, higher_bracket, j_sequence_sign, BracketSet, Defn, DEFAULT_CAP,
};

pub const CAP: usize = DEFAULT_CAP;
pub const RINGS: [(u32, usize); 6] = [(2, 2), (2, 3), (2, 4), (3, 2), (3, 3), (3, 4)];

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn cat(p: u32, m: usize) -> StMod {
    StMod::new(Ring::new(p, m).unwrap())
}

pub fn random_cat<R: Rng>(rng: &mut R) -> StMod {
    let (p, m) = RINGS[rng.gen_range(0..RINGS.len())];
    cat(p, m)
}

/// Transport of a coordinate set along a coordinate map, sorted.
pub fn transported(b: &BracketSet<Obj>, f: impl Fn(&[u32]) -> Vec<u32>) -> Vec<Vec<u32>> {
    let mut v: Vec<Vec<u32>> = b.elements.iter().map(|e| f(e)).collect();
    v.sort();
    v
}

pub fn scaled(c: &StMod, b: &BracketSet<Obj>, s: u32) -> Vec<Vec<u32>> {
    let p = c.ring().p;
    transported(b, |e| e.iter().map(|x| x * s % p).collect())
}

/// cc = fc = ff; returns whether the bracket was nonempty.
pub fn definitions_agree(c: &StMod, m: &[StMap]) -> Result<bool, String> {
    let fc = bracket3(c, &m[0], &m[1], &m[2], Defn::Fc, CAP).map_err(|e| e.to_string())?;
    for d in [Defn::Cc, Defn::Ff] {
        let other = bracket3(c, &m[0], &m[1], &m[2], d, CAP).map_err(|e| e.to_string())?;
        if other.elements != fc.elements {
            return Err(format!("{d:?} differs from fc on {m:?}"));
        }
    }
    Ok(!fc.is_empty())
}

pub fn is_coset(c: &StMod, m: &[StMap]) -> Result<(), String> {
    let b = bracket3(c, &m[0], &m[1], &m[2], Defn::Fc, CAP).map_err(|e| e.to_string())?;
    if b.is_empty() {
        return Ok(());
    }
    let basis = b.indeterminacy.clone().unwrap();
    if !b.is_coset_of(c.ring().p, &basis).map_err(|e| e.to_string())? {
        return Err(format!("bracket is not a coset of its indeterminacy on {m:?}"));
    }
    Ok(())
}

fn fc(c: &StMod, f3: &StMap, f2: &StMap, f1: &StMap) -> Result<BracketSet<Obj>, String> {
    bracket3(c, f3, f2, f1, Defn::Fc, CAP).map_err(|e| e.to_string())
}

fn subset(a: &[Vec<u32>], b: &BracketSet<Obj>) -> bool {
    a.iter().all(|e| b.contains(e))
}

/// The four juggling inclusions on `(f4, f3, f2, f1)`.
pub fn juggling(c: &StMod, m: &[StMap]) -> Result<(), String> {
    let (f4, f3, f2, f1) = (&m[0], &m[1], &m[2], &m[3]);
    let comp = |g: &StMap, f: &StMap| c.compose(g, f).unwrap();
    let map_of = |b: &BracketSet<Obj>, e: &[u32]| c.map(&b.src, &b.tgt, e.to_vec()).unwrap();

    let inner = fc(c, f3, f2, f1)?;
    let left: Vec<Vec<u32>> =
        inner.elements.iter().map(|e| comp(f4, &map_of(&inner, e)).coeffs().to_vec()).collect();
    if !subset(&left, &fc(c, &comp(f4, f3), f2, f1)?) {
        return Err(format!("f4⟨f3,f2,f1⟩ ⊄ ⟨f4f3,f2,f1⟩ on {m:?}"));
    }
    let upper = fc(c, f4, f3, f2)?;
    let sf1 = c.suspend(f1);
    let left: Vec<Vec<u32>> =
        upper.elements.iter().map(|e| comp(&map_of(&upper, e), &sf1).coeffs().to_vec()).collect();
    if !subset(&left, &fc(c, f4, f3, &comp(f2, f1))?) {
        return Err(format!("⟨f4,f3,f2⟩Σf1 ⊄ ⟨f4,f3,f2f1⟩ on {m:?}"));
    }
    let middle = fc(c, f4, &comp(f3, f2), f1)?;
    if !fc(c, &comp(f4, f3), f2, f1)?.is_subset(&middle) {
        return Err(format!("⟨f4f3,f2,f1⟩ ⊄ ⟨f4,f3f2,f1⟩ on {m:?}"));
    }
    if !fc(c, f4, f3, &comp(f2, f1))?.is_subset(&middle) {
        return Err(format!("⟨f4,f3,f2f1⟩ ⊄ ⟨f4,f3f2,f1⟩ on {m:?}"));
    }
    Ok(())
}

/// `⟨Σf3, Σf2, Σf1⟩ = -Σ⟨f3, f2, f1⟩`.
pub fn suspension_law(c: &StMod, m: &[StMap]) -> Result<(), String> {
    let b = fc(c, &m[0], &m[1], &m[2])?;
    let sb = fc(c, &c.suspend(&m[0]), &c.suspend(&m[1]), &c.suspend(&m[2]))?;
    let p = c.ring().p;
    let expect = transported(&b, |e| {
        vec_neg(c.suspend(&c.map(&b.src, &b.tgt, e.to_vec()).unwrap()).coeffs(), p)
    });
    if sb.elements != expect {
        return Err(format!("suspension law fails on {m:?}"));
    }
    Ok(())
}

/// The bracket of the reversed chain in the opposite category, moved by
/// `Σ^{n-2}`, equals the bracket. Returns nonemptiness.
pub fn self_dual(c: &StMod, m: &[StMap]) -> Result<bool, String> {
    let n = m.len();
    let b = higher_bracket(c, m, None, CAP).map_err(|e| e.to_string())?;
    let rev: Vec<StMap> = m.iter().rev().cloned().collect();
    let op = Op(c);
    let ob = higher_bracket(&op, &rev, None, CAP).map_err(|e| e.to_string())?;
    // op bracket lives in T(X_0, Σ^{-(n-2)} X_n)
    let moved = transported(&ob, |e| {
        let f = c.map(&ob.tgt, &ob.src, e.to_vec()).unwrap();
        c.shift(&f, n as i32 - 2).coeffs().to_vec()
    });
    if moved != b.elements {
        return Err(format!("op bracket differs on {m:?}: {moved:?} vs {:?}", b.elements));
    }
    Ok(!b.is_empty())
}

/// Every j-sequence gives `(-1)^{Σj}` times the standard bracket. Returns
/// nonemptiness.
pub fn sign_law(c: &StMod, m: &[StMap]) -> Result<bool, String> {
    let p = c.ring().p;
    let std = higher_bracket(c, m, None, CAP).map_err(|e| e.to_string())?;
    for js in all_j_sequences(m.len()) {
        let b = higher_bracket(c, m, Some(&js), CAP).map_err(|e| e.to_string())?;
        if scaled(c, &b, j_sequence_sign(p, &js)) != std.elements {
            return Err(format!("j-sequence {js:?} breaks the sign law on {m:?}"));
        }
    }
    Ok(!std.is_empty())
}

pub fn chain<R: Rng>(c: &StMod, rng: &mut R, n: usize) -> Vec<StMap> {
    random_null_chain(c, rng, n, 6)
}

/// Whether a failure is only the enumeration cap being hit.
pub fn is_overflow(msg: &str) -> bool {
    msg.starts_with("enumeration overflow")
}
