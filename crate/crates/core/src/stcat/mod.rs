//! The stable module category of `R = F_p[x]/x^m`.
//!
//! Objects are reduced: sums of blocks `R/x^a` with `1 <= a < m`, listed in a
//! fixed order. A stable map between single blocks `R/x^a -> R/x^b` is a
//! combination of `μ_{x^l}` for `max(0, b-a) <= l < min(b, m-a)`; larger `l`
//! factor through `R` and vanish stably. Stable maps are stored by these
//! coefficients, so equal maps have equal data.

mod general;
mod op;
mod triangulated;

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{add_mod, mul_mod, FpMatrix};
use crate::modrep::{self, canonical, cokernel_with_section, kernel, RMap, RModule, Ring};

pub use general::{reduce, stable_hom, stable_map_from_rmap, Reduced, StableHomSpace};
pub use op::Op;
pub use triangulated::{Triangle, Triangulated};

/// A reduced object: the block sizes, in order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Obj(Vec<usize>);

impl Obj {
    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    fn offsets(&self) -> Vec<usize> {
        let mut off = Vec::with_capacity(self.0.len());
        let mut acc = 0;
        for &a in &self.0 {
            off.push(acc);
            acc += a;
        }
        off
    }

    /// Same blocks up to reordering.
    pub fn same_type(&self, other: &Obj) -> bool {
        let mut a = self.0.clone();
        let mut b = other.0.clone();
        a.sort_unstable();
        b.sort_unstable();
        a == b
    }

    pub fn concat(&self, other: &Obj) -> Obj {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Obj(v)
    }
}

impl fmt::Display for Obj {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.0.iter().map(|a| a.to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

/// A stable map between reduced objects.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StMap {
    src: Obj,
    tgt: Obj,
    coeffs: Vec<u32>,
}

impl StMap {
    pub fn src(&self) -> &Obj {
        &self.src
    }

    pub fn tgt(&self) -> &Obj {
        &self.tgt
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }
}

/// One block of a stable hom space: target block `j`, source block `i`,
/// exponents `lo..hi`, stored from `offset`.
#[derive(Clone, Copy, Debug)]
struct Block {
    j: usize,
    i: usize,
    lo: usize,
    hi: usize,
    offset: usize,
}

/// The stable module category of one ring.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StMod {
    ring: Ring,
}

impl StMod {
    pub fn new(ring: Ring) -> Self {
        StMod { ring }
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    /// Object with the given parts; parts equal to `m` are projective and
    /// dropped.
    pub fn obj(&self, parts: &[usize]) -> Result<Obj> {
        let m = self.ring.m;
        if let Some(&bad) = parts.iter().find(|&&a| a == 0 || a > m) {
            return Err(Error::InvalidModule(format!("part {bad} outside [1, {m}]")));
        }
        Ok(Obj(parts.iter().copied().filter(|&a| a < m).collect()))
    }

    pub fn zero_obj(&self) -> Obj {
        Obj(Vec::new())
    }

    /// Exponent range of stable `μ_{x^l}: R/x^a -> R/x^b`.
    pub fn exponent_range(&self, a: usize, b: usize) -> (usize, usize) {
        let lo = b.saturating_sub(a);
        let hi = b.min(self.ring.m - a);
        (lo, hi.max(lo))
    }

    fn blocks(&self, src: &Obj, tgt: &Obj) -> Vec<Block> {
        let mut out = Vec::new();
        let mut offset = 0;
        for (j, &b) in tgt.0.iter().enumerate() {
            for (i, &a) in src.0.iter().enumerate() {
                let (lo, hi) = self.exponent_range(a, b);
                out.push(Block { j, i, lo, hi, offset });
                offset += hi - lo;
            }
        }
        out
    }

    fn block(&self, src: &Obj, tgt: &Obj, j: usize, i: usize) -> Block {
        self.blocks(src, tgt)[j * src.len() + i]
    }

    pub fn dim(&self, src: &Obj, tgt: &Obj) -> usize {
        self.blocks(src, tgt).iter().map(|b| b.hi - b.lo).sum()
    }

    pub fn zero(&self, src: &Obj, tgt: &Obj) -> StMap {
        StMap { src: src.clone(), tgt: tgt.clone(), coeffs: vec![0; self.dim(src, tgt)] }
    }

    /// Builds a map from coefficient vectors.
    pub fn map(&self, src: &Obj, tgt: &Obj, coeffs: Vec<u32>) -> Result<StMap> {
        if coeffs.len() != self.dim(src, tgt) {
            return Err(Error::DimensionMismatch(format!(
                "{} coordinates for a stable hom space of dimension {}",
                coeffs.len(),
                self.dim(src, tgt)
            )));
        }
        let p = self.ring.p;
        Ok(StMap { src: src.clone(), tgt: tgt.clone(), coeffs: coeffs.into_iter().map(|c| c % p).collect() })
    }

    /// `c · μ_{x^l}` between single blocks.
    pub fn mu(&self, a: usize, b: usize, l: usize) -> Result<StMap> {
        let src = self.obj(&[a])?;
        let tgt = self.obj(&[b])?;
        self.from_entries(&src, &tgt, &[vec![vec![(1, l)]]])
    }

    /// Builds a map from a block matrix of polynomials: `entries[j][i]` lists
    /// `(coefficient, exponent)` terms of the entry from source block `i` to
    /// target block `j`. Terms that factor through a projective are dropped;
    /// terms that are not R-linear are rejected.
    pub fn from_entries(
        &self,
        src: &Obj,
        tgt: &Obj,
        entries: &[Vec<Vec<(i64, usize)>>],
    ) -> Result<StMap> {
        let p = self.ring.p;
        if entries.len() != tgt.len() || entries.iter().any(|row| row.len() != src.len()) {
            return Err(Error::DimensionMismatch(format!(
                "block matrix must be {}x{}",
                tgt.len(),
                src.len()
            )));
        }
        let mut out = self.zero(src, tgt);
        for blk in self.blocks(src, tgt) {
            for &(c, l) in &entries[blk.j][blk.i] {
                let (a, b) = (src.0[blk.i], tgt.0[blk.j]);
                if l < blk.lo {
                    return Err(Error::NotLinear(format!(
                        "x^{l} is not well defined from R/x^{a} to R/x^{b}"
                    )));
                }
                if l < blk.hi {
                    let k = blk.offset + l - blk.lo;
                    out.coeffs[k] = add_mod(out.coeffs[k], crate::linalg::reduce_i64(c, p), p);
                }
            }
        }
        Ok(out)
    }

    /// The coefficient of `μ_{x^l}` from source block `i` to target block `j`.
    pub fn entry(&self, f: &StMap, j: usize, i: usize, l: usize) -> u32 {
        let blk = self.block(&f.src, &f.tgt, j, i);
        if l < blk.lo || l >= blk.hi {
            0
        } else {
            f.coeffs[blk.offset + l - blk.lo]
        }
    }

    pub fn identity(&self, a: &Obj) -> StMap {
        let mut f = self.zero(a, a);
        for blk in self.blocks(a, a) {
            if blk.i == blk.j && blk.lo == 0 && blk.hi > 0 {
                f.coeffs[blk.offset] = 1;
            }
        }
        f
    }

    /// `g ∘ f`, multiplying truncated polynomials blockwise.
    pub fn compose(&self, g: &StMap, f: &StMap) -> Result<StMap> {
        if f.tgt != g.src {
            return Err(Error::NotComposable(format!("{} -> {} then {} -> {}", f.src, f.tgt, g.src, g.tgt)));
        }
        let p = self.ring.p;
        let fb = self.blocks(&f.src, &f.tgt);
        let gb = self.blocks(&g.src, &g.tgt);
        let mut out = self.zero(&f.src, &g.tgt);
        for ob in self.blocks(&f.src, &g.tgt) {
            if ob.hi == ob.lo {
                continue;
            }
            for mid in 0..f.tgt.len() {
                let bf = fb[mid * f.src.len() + ob.i];
                let bg = gb[ob.j * g.src.len() + mid];
                for l in bf.lo..bf.hi {
                    let cf = f.coeffs[bf.offset + l - bf.lo];
                    if cf == 0 {
                        continue;
                    }
                    for l2 in bg.lo..bg.hi {
                        let cg = g.coeffs[bg.offset + l2 - bg.lo];
                        let e = l + l2;
                        if cg == 0 || e >= ob.hi {
                            continue;
                        }
                        let k = ob.offset + e - ob.lo;
                        out.coeffs[k] = add_mod(out.coeffs[k], mul_mod(cf, cg, p), p);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn suspend_obj(&self, a: &Obj) -> Obj {
        Obj(a.0.iter().map(|&x| self.ring.m - x).collect())
    }

    /// `Σ(μ_{x^l}: R/x^a -> R/x^b) = μ_{x^{l+a-b}}: R/x^{m-a} -> R/x^{m-b}`.
    pub fn suspend(&self, f: &StMap) -> StMap {
        let src = self.suspend_obj(&f.src);
        let tgt = self.suspend_obj(&f.tgt);
        let mut out = self.zero(&src, &tgt);
        let old = self.blocks(&f.src, &f.tgt);
        for (ob, nb) in old.iter().zip(self.blocks(&src, &tgt)) {
            let (a, b) = (f.src.0[ob.i], f.tgt.0[ob.j]);
            for l in ob.lo..ob.hi {
                let l2 = l + a - b;
                out.coeffs[nb.offset + l2 - nb.lo] = f.coeffs[ob.offset + l - ob.lo];
            }
        }
        out
    }

    /// Direct sum of objects with the inclusions and projections.
    pub fn biproduct(&self, a: &Obj, b: &Obj) -> (Obj, [StMap; 2], [StMap; 2]) {
        let s = a.concat(b);
        let na = a.len();
        let mut incl = [self.zero(a, &s), self.zero(b, &s)];
        let mut proj = [self.zero(&s, a), self.zero(&s, b)];
        for blk in self.blocks(a, &s) {
            if blk.j == blk.i && blk.lo == 0 && blk.hi > 0 {
                incl[0].coeffs[blk.offset] = 1;
            }
        }
        for blk in self.blocks(b, &s) {
            if blk.j == blk.i + na && blk.lo == 0 && blk.hi > 0 {
                incl[1].coeffs[blk.offset] = 1;
            }
        }
        for blk in self.blocks(&s, a) {
            if blk.i == blk.j && blk.lo == 0 && blk.hi > 0 {
                proj[0].coeffs[blk.offset] = 1;
            }
        }
        for blk in self.blocks(&s, b) {
            if blk.i == blk.j + na && blk.lo == 0 && blk.hi > 0 {
                proj[1].coeffs[blk.offset] = 1;
            }
        }
        (s, incl, proj)
    }

    /// `[g_1 ... g_k]: A_1 ⊕ ... ⊕ A_k -> B`.
    pub fn row(&self, tgt: &Obj, maps: &[StMap]) -> Result<StMap> {
        if maps.iter().any(|g| &g.tgt != tgt) {
            return Err(Error::NotComposable("row entries need a common target".into()));
        }
        let src = maps.iter().fold(self.zero_obj(), |acc, g| acc.concat(&g.src));
        let mut out = self.zero(&src, tgt);
        let mut base = 0;
        for g in maps {
            for j in 0..tgt.len() {
                for i in 0..g.src.len() {
                    let ob = self.block(&g.src, tgt, j, i);
                    let nb = self.block(&src, tgt, j, base + i);
                    let n = ob.hi - ob.lo;
                    out.coeffs[nb.offset..nb.offset + n].copy_from_slice(&g.coeffs[ob.offset..ob.offset + n]);
                }
            }
            base += g.src.len();
        }
        Ok(out)
    }

    /// `[g_1; ...; g_k]: A -> B_1 ⊕ ... ⊕ B_k`.
    pub fn column(&self, src: &Obj, maps: &[StMap]) -> Result<StMap> {
        if maps.iter().any(|g| &g.src != src) {
            return Err(Error::NotComposable("column entries need a common source".into()));
        }
        let tgt = maps.iter().fold(self.zero_obj(), |acc, g| acc.concat(&g.tgt));
        let mut out = self.zero(src, &tgt);
        let mut base = 0;
        for g in maps {
            for j in 0..g.tgt.len() {
                for i in 0..src.len() {
                    let ob = self.block(src, &g.tgt, j, i);
                    let nb = self.block(src, &tgt, base + j, i);
                    let n = ob.hi - ob.lo;
                    out.coeffs[nb.offset..nb.offset + n].copy_from_slice(&g.coeffs[ob.offset..ob.offset + n]);
                }
            }
            base += g.tgt.len();
        }
        Ok(out)
    }

    /// Label of a coordinate, e.g. `mu(x^2)` or `[1,0]mu(x)`.
    pub fn label(&self, src: &Obj, tgt: &Obj, k: usize) -> String {
        for blk in self.blocks(src, tgt) {
            if k >= blk.offset && k < blk.offset + blk.hi - blk.lo {
                let l = blk.lo + k - blk.offset;
                let m = match l {
                    0 => "mu(1)".to_string(),
                    1 => "mu(x)".to_string(),
                    _ => format!("mu(x^{l})"),
                };
                return if src.len() == 1 && tgt.len() == 1 {
                    m
                } else {
                    format!("[{},{}]{m}", blk.j, blk.i)
                };
            }
        }
        String::new()
    }

    // --- module-level realizations ---

    pub fn module(&self, a: &Obj) -> RModule {
        canonical(self.ring, &a.0)
    }

    /// An R-linear representative of a stable map on the canonical modules.
    pub fn matrix_of(&self, f: &StMap) -> FpMatrix {
        let so = f.src.offsets();
        let to = f.tgt.offsets();
        let mut mat = FpMatrix::zeros(self.ring.p, f.tgt.dim(), f.src.dim());
        for blk in self.blocks(&f.src, &f.tgt) {
            let (a, b) = (f.src.0[blk.i], f.tgt.0[blk.j]);
            for l in blk.lo..blk.hi {
                let c = f.coeffs[blk.offset + l - blk.lo];
                if c == 0 {
                    continue;
                }
                for k in 0..a {
                    if k + l < b {
                        let r = to[blk.j] + k + l;
                        let col = so[blk.i] + k;
                        mat.set(r, col, add_mod(mat.get(r, col), c, self.ring.p));
                    }
                }
            }
        }
        mat
    }

    pub fn rmap_of(&self, f: &StMap) -> RMap {
        RMap::raw(self.module(&f.src), self.module(&f.tgt), self.matrix_of(f))
    }

    /// Reads the stable class of an R-linear matrix between canonical
    /// modules: the image of each block generator, truncated to the stable
    /// range.
    pub fn from_matrix(&self, src: &Obj, tgt: &Obj, mat: &FpMatrix) -> StMap {
        let so = src.offsets();
        let to = tgt.offsets();
        let mut out = self.zero(src, tgt);
        for blk in self.blocks(src, tgt) {
            for l in blk.lo..blk.hi {
                out.coeffs[blk.offset + l - blk.lo] = mat.get(to[blk.j] + l, so[blk.i]);
            }
        }
        out
    }

    /// Embedding matrix of the canonical injective envelope of a canonical
    /// module with arbitrary parts (free parts included).
    fn envelope_matrix(&self, parts: &[usize]) -> FpMatrix {
        let m = self.ring.m;
        let dim: usize = parts.iter().sum();
        let mut e = FpMatrix::zeros(self.ring.p, parts.len() * m, dim);
        let mut off = 0;
        for (t, &a) in parts.iter().enumerate() {
            for k in 0..a {
                e.set(t * m + m - a + k, off + k, 1);
            }
            off += a;
        }
        e
    }

    /// Projection `R^s -> ⊕ R/x^{m-a}` onto the canonical suspension.
    fn suspension_projection(&self, parts: &[usize]) -> FpMatrix {
        let m = self.ring.m;
        let dim: usize = parts.iter().map(|&a| m - a).sum();
        let mut pr = FpMatrix::zeros(self.ring.p, dim, parts.len() * m);
        let mut off = 0;
        for (t, &a) in parts.iter().enumerate() {
            for k in 0..m - a {
                pr.set(off + k, t * m + k, 1);
            }
            off += m - a;
        }
        pr
    }

    /// Projective cover matrix `R^t -> ⊕ R/x^b` sending generators to
    /// block generators.
    fn cover_matrix(&self, parts: &[usize]) -> FpMatrix {
        let m = self.ring.m;
        let dim: usize = parts.iter().sum();
        let mut c = FpMatrix::zeros(self.ring.p, dim, parts.len() * m);
        let mut off = 0;
        for (t, &b) in parts.iter().enumerate() {
            for k in 0..b {
                c.set(off + k, t * m + k, 1);
            }
            off += b;
        }
        c
    }

    /// The standard triangle `A -f-> B -q-> C_f -ι-> ΣA`: `C_f` is the
    /// cokernel of `(f, ι_A): A -> B ⊕ I(A)` and `ι` is induced by the
    /// projection to `I(A)/A = ΣA`.
    pub fn cone(&self, f: &StMap) -> Triangle<StMap> {
        let ring = self.ring;
        let m = ring.m;
        let (a, b) = (&f.src, &f.tgt);
        let (da, db) = (a.dim(), b.dim());
        let s = a.len();
        let mono = self.matrix_of(f).vstack(&self.envelope_matrix(&a.0)).unwrap();
        let mut big_parts = b.0.clone();
        big_parts.extend(std::iter::repeat_n(m, s));
        let big = canonical(ring, &big_parts);
        let mono = RMap::raw(self.module(a), big, mono);
        let (c, proj, section) = cokernel_with_section(&mono);
        let mut incl_b = FpMatrix::zeros(ring.p, db + s * m, db);
        for k in 0..db {
            incl_b.set(k, k, 1);
        }
        let q_mat = proj.matrix().mul_unchecked(&incl_b);
        let mut to_i = FpMatrix::zeros(ring.p, s * m, db + s * m);
        for k in 0..s * m {
            to_i.set(k, db + k, 1);
        }
        let h_mat = self
            .suspension_projection(&a.0)
            .mul_unchecked(&to_i)
            .mul_unchecked(&section);
        let red = reduce(&c);
        let g = self.from_matrix(b, &red.obj, &red.to.matrix().mul_unchecked(&q_mat));
        let sa = self.suspend_obj(a);
        let h = self.from_matrix(&red.obj, &sa, &h_mat.mul_unchecked(red.from.matrix()));
        debug_assert_eq!(da, mono.src().dim());
        Triangle { f: f.clone(), g, h }
    }

    /// The triangle `K -k-> A -f-> B -w-> ΣK` from the short exact sequence
    /// `0 -> K -> A ⊕ P(B) -> B -> 0`, with `w` induced by extending
    /// `K -> I(K)` over `A ⊕ P(B)`.
    pub fn fiber(&self, f: &StMap) -> Result<Triangle<StMap>> {
        let ring = self.ring;
        let (p, m) = (ring.p, ring.m);
        let (a, b) = (&f.src, &f.tgt);
        let (da, db) = (a.dim(), b.dim());
        let t = b.len();
        let surj = self.matrix_of(f).hstack(&self.cover_matrix(&b.0))?;
        let mut big_parts = a.0.clone();
        big_parts.extend(std::iter::repeat_n(m, t));
        let big = canonical(ring, &big_parts);
        let surj_map = RMap::raw(big.clone(), self.module(b), surj.clone());
        let (kmod, incl) = kernel(&surj_map);
        let (kparts, pk) = modrep::jordan_change_of_basis(&kmod);
        let kcan = canonical(ring, &kparts);
        let j = incl.matrix().mul_unchecked(&pk);
        // extension E: big -> I(K) with E j = ι_K
        let env = self.envelope_matrix(&kparts);
        let ik = modrep::free(ring, kparts.len());
        let homs = modrep::hom_basis(&big, &ik)?;
        let cols: Vec<Vec<u32>> = homs.iter().map(|h| h.matrix().mul_unchecked(&j).data().to_vec()).collect();
        let sys = FpMatrix::from_columns(p, env.rows() * env.cols(), &cols);
        let sol = crate::linalg::solve_affine(&sys, env.data())?
            .ok_or_else(|| Error::Verification("no extension to the injective envelope".into()))?;
        let mut e = FpMatrix::zeros(p, ik.dim(), big.dim());
        for (h, &c) in homs.iter().zip(sol.representative()) {
            if c != 0 {
                e = e.add(&h.matrix().scale(c))?;
            }
        }
        // w: a preimage of each basis vector of B, pushed through E
        let mut pre = Vec::with_capacity(db);
        for k in 0..db {
            let mut ek = vec![0; db];
            ek[k] = 1;
            let sol = crate::linalg::solve_affine(&surj, &ek)?
                .ok_or_else(|| Error::Verification("cover map is not surjective".into()))?;
            pre.push(sol.representative().to_vec());
        }
        let section = FpMatrix::from_columns(p, big.dim(), &pre);
        let w_full = self.suspension_projection(&kparts).mul_unchecked(&e).mul_unchecked(&section);
        // drop free blocks of K
        let kobj = Obj(kparts.iter().copied().filter(|&x| x < m).collect());
        let mut from = FpMatrix::zeros(p, kcan.dim(), kobj.dim());
        let (mut src_off, mut dst_off) = (0, 0);
        for &x in &kparts {
            if x < m {
                for l in 0..x {
                    from.set(src_off + l, dst_off + l, 1);
                }
                dst_off += x;
            }
            src_off += x;
        }
        let mut to_a = FpMatrix::zeros(p, da, big.dim());
        for k in 0..da {
            to_a.set(k, k, 1);
        }
        let k_mat = to_a.mul_unchecked(&j).mul_unchecked(&from);
        let kmap = self.from_matrix(&kobj, a, &k_mat);
        let w = self.from_matrix(b, &self.suspend_obj(&kobj), &w_full);
        Ok(Triangle { f: kmap, g: f.clone(), h: w })
    }
}

#[cfg(test)]
mod tests;
