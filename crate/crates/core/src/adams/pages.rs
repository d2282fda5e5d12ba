//! Pages of the Adams spectral sequence of `T(X, -)` on a resolution.
//!
//! `E_1^{s,u} = T(Σ^u X, I_s)` and `d_r: E_r^{s,u} -> E_r^{s+r,u-1}`, where
//! `u = t - s`. `E_r^{s,u}` is computed as the subquotient `Z_r / B_r` of
//! `E_1^{s,u}`: `Z_r` are the classes whose `δ_s x` lifts through the
//! `(r-1)`-fold composite of the `i`, `B_r` are the images under `p_s` of maps
//! into `Y_s` killed by the `(r-1)`-fold composite below `s`.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::Resolution;
use crate::error::{Error, Result};
use crate::linalg::{FpMatrix, Subspace};
use crate::stcat::Triangulated;
use crate::toda::BracketSet;

pub struct SpectralSequence<'a, C: Triangulated> {
    pub cat: &'a C,
    pub res: &'a Resolution<C::Obj, C::Map>,
    pub x: C::Obj,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PageEntry {
    pub s: usize,
    pub u: i32,
    pub e1_dim: usize,
    pub cycles_dim: usize,
    pub boundaries_dim: usize,
    pub dim: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct SSPage {
    pub r: usize,
    pub entries: Vec<PageEntry>,
}

impl<'a, C: Triangulated> SpectralSequence<'a, C> {
    pub fn new(cat: &'a C, res: &'a Resolution<C::Obj, C::Map>, x: C::Obj) -> Self {
        SpectralSequence { cat, res, x }
    }

    /// `Σ^u X`
    pub fn source(&self, u: i32) -> C::Obj {
        self.cat.shift_obj(&self.x, u)
    }

    pub fn e1_dim(&self, s: usize, u: i32) -> usize {
        self.cat.hom_dim(&self.source(u), &self.res.inj[s])
    }

    /// `i_a ∘ ... ∘ i_{b-1}: Y_b -> Y_a`
    fn i_chain(&self, a: usize, b: usize) -> C::Map {
        let mut acc = self.cat.identity(&self.res.y[b]);
        for k in (a..b).rev() {
            acc = self.cat.compose(&self.res.i[k], &acc).expect("resolution maps chain");
        }
        acc
    }

    fn need(&self, top: usize) -> Result<()> {
        if top > self.res.len() {
            return Err(Error::ResolutionTooShort { needed: top, have: self.res.len() });
        }
        Ok(())
    }

    /// `Z_r^{s,u}`: classes on which `d_r` is defined.
    pub fn cycles(&self, s: usize, u: i32, r: usize) -> Result<Subspace> {
        self.need(s + r)?;
        let c = self.cat;
        let src = self.source(u);
        let dm = c.postcompose_matrix(&self.res.delta[s], &src)?;
        let chain = c.suspend(&self.i_chain(s + 1, s + r));
        let lm = c.postcompose_matrix(&chain, &src)?;
        let n = dm.cols();
        let sys = dm.hstack(&lm.neg())?;
        let vecs: Vec<Vec<u32>> = sys.kernel_basis().into_iter().map(|v| v[..n].to_vec()).collect();
        Subspace::span(c.p(), n, &vecs)
    }

    /// `B_r^{s,u}`: classes hit by some `d_k`, `k < r`.
    pub fn boundaries(&self, s: usize, u: i32, r: usize) -> Result<Subspace> {
        self.need(s + 1)?;
        let c = self.cat;
        let src = self.source(u);
        let k = (r - 1).min(s);
        let chain = self.i_chain(s - k, s);
        let ker = c.postcompose_matrix(&chain, &src)?.kernel_basis();
        let pm = c.postcompose_matrix(&self.res.p[s], &src)?;
        let vecs = ker.iter().map(|v| pm.mul_vec(v)).collect::<Result<Vec<_>>>()?;
        Subspace::span(c.p(), pm.rows(), &vecs)
    }

    pub fn entry(&self, s: usize, u: i32, r: usize) -> Result<PageEntry> {
        let z = self.cycles(s, u, r)?;
        let b = self.boundaries(s, u, r)?;
        if b.basis().iter().any(|v| !z.contains(v)) {
            return Err(Error::Verification(format!("boundaries are not cycles at ({s},{u})")));
        }
        Ok(PageEntry {
            s,
            u,
            e1_dim: z.ambient(),
            cycles_dim: z.dim(),
            boundaries_dim: b.dim(),
            dim: z.dim() - b.dim(),
        })
    }

    /// Pages `E_1 ... E_{r_max}` for `s + r_max <= len` and the given `u`.
    pub fn pages(&self, r_max: usize, us: &[i32]) -> Result<Vec<SSPage>> {
        self.need(r_max)?;
        let mut out = Vec::new();
        for r in 1..=r_max {
            let mut entries = Vec::new();
            for s in 0..=self.res.len() - r_max {
                for &u in us {
                    entries.push(self.entry(s, u, r)?);
                }
            }
            out.push(SSPage { r, entries });
        }
        Ok(out)
    }

    /// First `k` with `x ∉ Z_{k+1}`, if below `r`.
    fn failing_stage(&self, s: usize, u: i32, x: &[u32], r: usize) -> Result<Option<usize>> {
        for k in 1..r {
            if !self.cycles(s, u, k + 1)?.contains(x) {
                return Ok(Some(k));
            }
        }
        Ok(None)
    }

    /// Every `E_1` representative of `d_r[x]`, in `E_1^{s+r, u-1}`, with the
    /// boundary group `B_r^{s+r,u-1}` as indeterminacy.
    pub fn dr_set(&self, s: usize, u: i32, x: &C::Map, r: usize, cap: usize) -> Result<BracketSet<C::Obj>> {
        self.need(s + r + 1)?;
        let c = self.cat;
        let xc = c.coords(x);
        if let Some(k) = self.failing_stage(s, u, &xc, r)? {
            return Err(Error::NotACycle { stage: k });
        }
        let t = c.compose(&self.res.delta[s], x)?;
        let chain = c.suspend(&self.i_chain(s + 1, s + r));
        let lifts = c
            .lifts(&chain, &t)?
            .ok_or_else(|| Error::Verification("cycle without a lift".into()))?;
        let sp = c.suspend(&self.res.p[s + r]);
        let src = self.source(u);
        let mut set = BTreeSet::new();
        let mut n = 0;
        for v in lifts.enumerate_points(cap)? {
            n += 1;
            let xt = c.from_coords(&src, &c.source(&chain), v);
            let rep = c.desuspend(&c.compose(&sp, &xt)?);
            set.insert(c.coords(&rep));
        }
        let mut out = BracketSet::new(self.source(u - 1), self.res.inj[s + r].clone(), set, "d_r");
        out.indeterminacy = Some(self.boundaries(s + r, u - 1, r)?.basis().to_vec());
        out.enumerated = n;
        Ok(out)
    }

    /// A representative of `d_r` on each basis vector of `Z_r^{s,u}`.
    fn dr_matrix(&self, s: usize, u: i32, r: usize) -> Result<(Subspace, Vec<Vec<u32>>)> {
        let z = self.cycles(s, u, r)?;
        let src = self.source(u);
        let mut images = Vec::new();
        for b in z.basis() {
            let x = self.cat.from_coords(&src, &self.res.inj[s], b.clone());
            let d = self.dr_set(s, u, &x, r, usize::MAX)?;
            images.push(d.elements[0].clone());
        }
        Ok((z, images))
    }

    /// Checks that `d_r d_r` lands in the boundaries and that `E_{r+1}` is
    /// the homology of `(E_r, d_r)` at `(s, u)`. Needs `s + 2r` within the
    /// resolution.
    pub fn check_page_identities(&self, s: usize, u: i32, r: usize) -> Result<()> {
        let c = self.cat;
        let p = c.p();
        // d_r d_r ⊆ B_r
        let (_, images) = self.dr_matrix(s, u, r)?;
        let tgt_src = self.source(u - 1);
        let b2 = self.boundaries(s + 2 * r, u - 2, r)?;
        for y in &images {
            let ym = c.from_coords(&tgt_src, &self.res.inj[s + r], y.clone());
            for e in &self.dr_set(s + r, u - 1, &ym, r, usize::MAX)?.elements {
                if !b2.contains(e) {
                    return Err(Error::Verification(format!("d_{r} d_{r} is not zero at ({s},{u})")));
                }
            }
        }
        // homology at (s, u): incoming from (s - r, u + 1), outgoing to (s + r, u - 1)
        let z = self.cycles(s, u, r)?;
        let b = self.boundaries(s, u, r)?;
        let (zb, out_images) = self.dr_matrix(s, u, r)?;
        let b_out = self.boundaries(s + r, u - 1, r)?;
        // kernel of d_r on Z_r modulo B_r
        let qdim = b_out.ambient();
        let reduced: Vec<Vec<u32>> = out_images.iter().map(|y| b_out.reduce(y)).collect();
        let mat = FpMatrix::from_columns(p, qdim, &reduced);
        let ker: Vec<Vec<u32>> = mat
            .kernel_basis()
            .into_iter()
            .map(|coef| {
                let mut v = vec![0; z.ambient()];
                for (cf, bv) in coef.iter().zip(zb.basis()) {
                    crate::linalg::vec_axpy(&mut v, *cf, bv, p);
                }
                v
            })
            .collect();
        let ker_dim = Subspace::span(p, z.ambient(), &ker)?.sum(&b)?.dim() - b.dim();
        let im_dim = if s >= r {
            let (_, in_images) = self.dr_matrix(s - r, u + 1, r)?;
            Subspace::span(p, z.ambient(), &in_images)?.sum(&b)?.dim() - b.dim()
        } else {
            0
        };
        let next = self.entry(s, u, r + 1)?;
        if next.dim != ker_dim - im_dim {
            return Err(Error::Verification(format!(
                "E_{} at ({s},{u}) has dimension {} but the homology has {}",
                r + 1,
                next.dim,
                ker_dim - im_dim
            )));
        }
        Ok(())
    }
}
