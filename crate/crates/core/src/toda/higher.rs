//! Higher Toda brackets by iterated Toda families.

use std::collections::BTreeSet;

use super::{check_chain, family_spaces, points, BracketSet, EmptyReason};
use crate::error::{Error, Result};
use crate::stcat::{Triangle, Triangulated};

/// Checks `0 <= j_i < i`. The sequence is written `(j_1, ..., j_{n-2})`.
fn check_j_sequence(n: usize, js: &[usize]) -> Result<()> {
    if js.len() != n - 2 {
        return Err(Error::InvalidJSequence(format!(
            "{n} maps need {} entries, got {}",
            n - 2,
            js.len()
        )));
    }
    for (k, &j) in js.iter().enumerate() {
        if j > k {
            return Err(Error::InvalidJSequence(format!("j_{} = {j} is not below {}", k + 1, k + 1)));
        }
    }
    Ok(())
}

/// All `(n-2)!` admissible sequences, in lexicographic order.
pub fn all_j_sequences(n: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for i in 1..n.saturating_sub(1) {
        out = out
            .into_iter()
            .flat_map(|s| {
                (0..i).map(move |j| {
                    let mut t = s.clone();
                    t.push(j);
                    t
                })
            })
            .collect();
    }
    out
}

/// `(-1)^{Σ j_i}` as an element of F_p.
pub fn j_sequence_sign(p: u32, js: &[usize]) -> u32 {
    if js.iter().sum::<usize>() % 2 == 0 {
        1
    } else {
        p - 1
    }
}

fn tuple_key<C: Triangulated>(cat: &C, t: &[C::Map]) -> String {
    let mut key = String::new();
    for f in t {
        key.push_str(&format!("{:?}>{:?}:{:?};", cat.source(f), cat.target(f), cat.coords(f)));
    }
    key
}

/// `T_j` applied to one tuple: the entries at `j, j+1, j+2` (counted from
/// the left) are replaced by the pairs of their Toda family, and the
/// entries to their right are suspended.
fn apply_tj<C: Triangulated>(
    cat: &C,
    tuple: &[C::Map],
    j: usize,
    cap: usize,
) -> Result<Vec<Vec<C::Map>>> {
    let (f3, f2, f1) = (&tuple[j], &tuple[j + 1], &tuple[j + 2]);
    let (t, alphas, betas) = family_spaces(cat, f3, f2, f1)?;
    let (Some(alphas), Some(betas)) = (alphas, betas) else {
        return Ok(Vec::new());
    };
    super::check_pairs(alphas.cardinality(), betas.cardinality(), cap)?;
    let c = cat.target(&t.g);
    let sa = points(cat, &alphas, &cat.suspend_obj(&cat.source(f1)), &c, cap)?;
    let bs = points(cat, &betas, &c, &cat.target(f3), cap)?;
    let tail: Vec<C::Map> = tuple[j + 3..].iter().map(|f| cat.suspend(f)).collect();
    let mut out = Vec::with_capacity(sa.len() * bs.len());
    for b in &bs {
        for a in &sa {
            let mut next = tuple[..j].to_vec();
            next.push(b.clone());
            next.push(a.clone());
            next.extend(tail.iter().cloned());
            out.push(next);
        }
    }
    Ok(out)
}

/// The n-fold bracket `⟨f_n, ..., f_1⟩` (with `maps[0] = f_n`) computed
/// along `T_{j_1} T_{j_2} ... T_{j_{n-2}}`. `None` gives the standard
/// bracket. The result lies in `T(Σ^{n-2} X_0, X_n)`.
pub fn higher_bracket<C: Triangulated>(
    cat: &C,
    maps: &[C::Map],
    j_sequence: Option<&[usize]>,
    cap: usize,
) -> Result<BracketSet<C::Obj>> {
    let n = maps.len();
    if n < 2 {
        return Err(Error::NotComposable("a bracket needs at least two maps".into()));
    }
    let refs: Vec<&C::Map> = maps.iter().collect();
    check_chain(cat, &refs)?;
    let src = cat.shift_obj(&cat.source(&maps[n - 1]), n as i32 - 2);
    let tgt = cat.target(&maps[0]);
    if n == 2 {
        let set = BTreeSet::from([cat.coords(&cat.compose(&maps[0], &maps[1])?)]);
        return Ok(BracketSet::new(src, tgt, set, "composite"));
    }
    let zeros = vec![0; n - 2];
    let js = j_sequence.unwrap_or(&zeros);
    check_j_sequence(n, js)?;

    let mut tuples = vec![maps.to_vec()];
    let mut enumerated = 0;
    for &j in js.iter().rev() {
        let mut seen = BTreeSet::new();
        let mut next = Vec::new();
        for t in &tuples {
            for u in apply_tj(cat, t, j, cap)? {
                enumerated += 1;
                if seen.insert(tuple_key(cat, &u)) {
                    next.push(u);
                }
            }
            if next.len() > cap {
                return Err(Error::EnumerationOverflow { needed: next.len() as u128, cap });
            }
        }
        tuples = next;
    }
    let mut set = BTreeSet::new();
    for t in &tuples {
        set.insert(cat.coords(&cat.compose(&t[0], &t[1])?));
    }
    let mut out = BracketSet::new(src, tgt, set, "toda families");
    out.j_sequence = js.to_vec();
    out.enumerated = enumerated;
    if out.is_empty() {
        out.empty_reason = Some(
            if n == 3 && !cat.is_zero(&cat.compose(&maps[1], &maps[2])?) {
                EmptyReason::LowerComposite
            } else if n == 3 && !cat.is_zero(&cat.compose(&maps[0], &maps[1])?) {
                EmptyReason::UpperComposite
            } else {
                EmptyReason::NoFiller
            },
        );
    }
    Ok(out)
}

/// One path through the standard bracket: the triangles on `f_{n-1}, a_1,
/// a_2, ...` together with the chosen `a_k = Σα` and `β_k`.
#[derive(Clone, Debug)]
pub struct Chain<M> {
    pub triangles: Vec<Triangle<M>>,
    pub alphas: Vec<M>,
    pub betas: Vec<M>,
}

/// All paths of the standard bracket computation (`j = 0` throughout).
pub fn standard_chains<C: Triangulated>(
    cat: &C,
    maps: &[C::Map],
    cap: usize,
) -> Result<Vec<Chain<C::Map>>> {
    let n = maps.len();
    if n < 3 {
        return Err(Error::NotComposable("chains need at least three maps".into()));
    }
    let refs: Vec<&C::Map> = maps.iter().collect();
    check_chain(cat, &refs)?;
    let start = Chain { triangles: Vec::new(), alphas: Vec::new(), betas: Vec::new() };
    let mut chains = vec![(start, maps.to_vec())];
    for _ in 0..n - 2 {
        let mut next = Vec::new();
        for (ch, tuple) in &chains {
            let (f3, f2, f1) = (&tuple[0], &tuple[1], &tuple[2]);
            let (t, alphas, betas) = family_spaces(cat, f3, f2, f1)?;
            let (Some(alphas), Some(betas)) = (alphas, betas) else {
                continue;
            };
            super::check_pairs(alphas.cardinality(), betas.cardinality(), cap)?;
            let c = cat.target(&t.g);
            let sa = points(cat, &alphas, &cat.suspend_obj(&cat.source(f1)), &c, cap)?;
            let bs = points(cat, &betas, &c, &cat.target(f3), cap)?;
            for b in &bs {
                for a in &sa {
                    let mut ch2 = ch.clone();
                    ch2.triangles.push(t.clone());
                    ch2.alphas.push(a.clone());
                    ch2.betas.push(b.clone());
                    let mut u = vec![b.clone(), a.clone()];
                    u.extend(tuple[3..].iter().map(|f| cat.suspend(f)));
                    next.push((ch2, u));
                }
            }
            if next.len() > cap {
                return Err(Error::EnumerationOverflow { needed: next.len() as u128, cap });
            }
        }
        chains = next;
    }
    Ok(chains.into_iter().map(|(c, _)| c).collect())
}
