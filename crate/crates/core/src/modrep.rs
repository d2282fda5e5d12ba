//! Modules over the truncated polynomial ring `R = F_p[x]/x^m`.
//!
//! A module is a vector space with a nilpotent operator `X` (the action of
//! `x`); maps are matrices commuting with the operators.

use crate::error::{Error, Result};
use crate::linalg::{self, check_prime, solve_affine, FpMatrix, Subspace};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Ring {
    pub p: u32,
    pub m: usize,
}

impl Ring {
    pub fn new(p: u32, m: usize) -> Result<Self> {
        check_prime(p)?;
        if m == 0 {
            return Err(Error::InvalidModule("truncation exponent must be at least 1".into()));
        }
        Ok(Ring { p, m })
    }

    fn check_same(&self, other: &Ring) -> Result<()> {
        if self != other {
            return Err(Error::RingMismatch(format!(
                "F_{}[x]/x^{} vs F_{}[x]/x^{}",
                self.p, self.m, other.p, other.m
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RModule {
    ring: Ring,
    x: FpMatrix,
}

impl RModule {
    /// Validates that `x` is square over the right field and `x^m = 0`.
    pub fn new(ring: Ring, x: FpMatrix) -> Result<Self> {
        if x.p() != ring.p {
            return Err(Error::ModulusMismatch(x.p(), ring.p));
        }
        if x.rows() != x.cols() {
            return Err(Error::InvalidModule("action of x must be square".into()));
        }
        if !x.pow(ring.m).is_zero() {
            return Err(Error::InvalidModule(format!("x^{} does not act as zero", ring.m)));
        }
        Ok(RModule { ring, x })
    }

    pub fn zero(ring: Ring) -> Self {
        RModule { ring, x: FpMatrix::zeros(ring.p, 0, 0) }
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn dim(&self) -> usize {
        self.x.rows()
    }

    pub fn x(&self) -> &FpMatrix {
        &self.x
    }

    pub fn direct_sum(&self, other: &RModule) -> Result<RModule> {
        self.ring.check_same(&other.ring)?;
        Ok(RModule { ring: self.ring, x: self.x.block_diag(&other.x)? })
    }

    pub fn is_projective(&self) -> bool {
        jordan_type(self).iter().all(|&a| a == self.ring.m)
    }
}

/// Canonical module with one lower-shift block per part: `X e_l = e_{l+1}`.
pub fn module_from_partition(ring: Ring, parts: &[usize]) -> Result<RModule> {
    if let Some(&bad) = parts.iter().find(|&&a| a == 0 || a > ring.m) {
        return Err(Error::InvalidModule(format!("part {bad} outside [1, {}]", ring.m)));
    }
    Ok(canonical(ring, parts))
}

pub(crate) fn canonical(ring: Ring, parts: &[usize]) -> RModule {
    let n: usize = parts.iter().sum();
    let mut x = FpMatrix::zeros(ring.p, n, n);
    let mut off = 0;
    for &a in parts {
        for l in 0..a.saturating_sub(1) {
            x.set(off + l + 1, off + l, 1);
        }
        off += a;
    }
    RModule { ring, x }
}

/// Block sizes, descending.
pub fn jordan_type(m: &RModule) -> Vec<usize> {
    let n = m.dim();
    // ranks[j] = rank X^j
    let mut ranks = vec![n];
    let mut pw = FpMatrix::identity(m.ring.p, n);
    while *ranks.last().unwrap() > 0 {
        pw = pw.mul_unchecked(&m.x);
        ranks.push(pw.rank());
    }
    ranks.push(0);
    let mut parts = Vec::new();
    for j in (1..ranks.len() - 1).rev() {
        let at_least_j = ranks[j - 1] - ranks[j];
        let at_least_j1 = ranks[j] - ranks[j + 1];
        for _ in 0..(at_least_j - at_least_j1) {
            parts.push(j);
        }
    }
    parts
}

/// A Jordan basis: block sizes and the generator of each block. Sizes are
/// descending unless the module is already canonical, in which case its own
/// block order is kept.
/// The columns `v, Xv, ..., X^{s-1}v` of every block, concatenated, form an
/// invertible change of basis to the canonical module.
pub fn jordan_basis(m: &RModule) -> (Vec<usize>, Vec<Vec<u32>>) {
    let p = m.ring.p;
    let n = m.dim();
    if let Some(parts) = canonical_parts(m) {
        let mut gens = Vec::new();
        let mut off = 0;
        for &a in &parts {
            let mut v = vec![0; n];
            v[off] = 1;
            gens.push(v);
            off += a;
        }
        // already canonical: keep the given block order
        return (parts, gens);
    }
    let mut powers = vec![FpMatrix::identity(p, n)];
    while !powers.last().unwrap().is_zero() {
        let next = powers.last().unwrap().mul_unchecked(&m.x);
        powers.push(next);
    }
    let top = powers.len() - 1;
    let mut chosen: Vec<(usize, Vec<u32>)> = Vec::new();
    for j in (1..=top).rev() {
        let ker_j = powers[j].kernel_basis();
        let mut span: Vec<Vec<u32>> = powers[j - 1].kernel_basis();
        for (s, v) in &chosen {
            for l in (s - j)..*s {
                span.push(powers[l].mul_vec(v).unwrap());
            }
        }
        let mut sub = Subspace::span(p, n, &span).unwrap();
        for w in ker_j {
            if !sub.contains(&w) {
                chosen.push((j, w.clone()));
                sub = sub.sum(&Subspace::span(p, n, &[w]).unwrap()).unwrap();
            }
        }
    }
    chosen.into_iter().unzip()
}

/// Detects a module already in canonical block form, returning its parts.
fn canonical_parts(m: &RModule) -> Option<Vec<usize>> {
    let n = m.dim();
    let mut parts = Vec::new();
    let mut start = 0;
    for i in 0..n {
        // column i is e_{i+1} (same block continues) or zero (block ends)
        let col = m.x.column(i);
        let nz: Vec<usize> = (0..n).filter(|&r| col[r] != 0).collect();
        match nz.as_slice() {
            [] => {
                parts.push(i + 1 - start);
                start = i + 1;
            }
            [r] if *r == i + 1 && col[*r] == 1 => {}
            _ => return None,
        }
    }
    if parts.iter().any(|&a| a > m.ring.m) {
        return None;
    }
    Some(parts)
}

/// Change of basis to canonical form: `(parts, P)` with the columns of `P`
/// the Jordan basis, so `P^{-1} X P` is the canonical operator.
pub fn jordan_change_of_basis(m: &RModule) -> (Vec<usize>, FpMatrix) {
    let (parts, gens) = jordan_basis(m);
    let mut cols = Vec::with_capacity(m.dim());
    for (s, g) in parts.iter().zip(&gens) {
        let mut v = g.clone();
        for _ in 0..*s {
            cols.push(v.clone());
            v = m.x.mul_vec(&v).unwrap();
        }
    }
    (parts, FpMatrix::from_columns(m.ring.p, m.dim(), &cols))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RMap {
    src: RModule,
    tgt: RModule,
    a: FpMatrix,
}

impl RMap {
    /// Validates shape and R-linearity.
    pub fn new(src: RModule, tgt: RModule, a: FpMatrix) -> Result<Self> {
        src.ring.check_same(&tgt.ring)?;
        if a.p() != src.ring.p {
            return Err(Error::ModulusMismatch(a.p(), src.ring.p));
        }
        if a.rows() != tgt.dim() || a.cols() != src.dim() {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} matrix for a map from dimension {} to {}",
                a.rows(),
                a.cols(),
                src.dim(),
                tgt.dim()
            )));
        }
        if a.mul_unchecked(&src.x) != tgt.x.mul_unchecked(&a) {
            return Err(Error::NotLinear("A X_src != X_tgt A".into()));
        }
        Ok(RMap { src, tgt, a })
    }

    pub(crate) fn raw(src: RModule, tgt: RModule, a: FpMatrix) -> Self {
        debug_assert!(a.mul_unchecked(&src.x) == tgt.x.mul_unchecked(&a));
        RMap { src, tgt, a }
    }

    pub fn identity(m: &RModule) -> Self {
        RMap { src: m.clone(), tgt: m.clone(), a: FpMatrix::identity(m.ring.p, m.dim()) }
    }

    pub fn zero(src: &RModule, tgt: &RModule) -> Self {
        RMap {
            src: src.clone(),
            tgt: tgt.clone(),
            a: FpMatrix::zeros(src.ring.p, tgt.dim(), src.dim()),
        }
    }

    pub fn src(&self) -> &RModule {
        &self.src
    }

    pub fn tgt(&self) -> &RModule {
        &self.tgt
    }

    pub fn matrix(&self) -> &FpMatrix {
        &self.a
    }

    /// `other ∘ self`
    pub fn then(&self, other: &RMap) -> Result<RMap> {
        if self.tgt != other.src {
            return Err(Error::NotComposable("target and source modules differ".into()));
        }
        Ok(RMap { src: self.src.clone(), tgt: other.tgt.clone(), a: other.a.mul_unchecked(&self.a) })
    }

    pub fn add(&self, other: &RMap) -> Result<RMap> {
        if self.src != other.src || self.tgt != other.tgt {
            return Err(Error::NotComposable("sum of maps with different ends".into()));
        }
        Ok(RMap { a: self.a.add(&other.a)?, ..self.clone() })
    }

    pub fn scale(&self, c: u32) -> RMap {
        RMap { a: self.a.scale(c), ..self.clone() }
    }

    pub fn is_injective(&self) -> bool {
        self.a.rank() == self.src.dim()
    }

    pub fn is_surjective(&self) -> bool {
        self.a.rank() == self.tgt.dim()
    }
}

/// Multiplication by `x^l` from `R/x^a` to `R/x^b`.
pub fn mu(ring: Ring, a: usize, b: usize, l: usize) -> Result<RMap> {
    let src = module_from_partition(ring, &[a])?;
    let tgt = module_from_partition(ring, &[b])?;
    if a + l < b {
        return Err(Error::NotLinear(format!("x^{l} is not well defined from R/x^{a} to R/x^{b}")));
    }
    let mut mat = FpMatrix::zeros(ring.p, b, a);
    for k in 0..a {
        if k + l < b {
            mat.set(k + l, k, 1);
        }
    }
    Ok(RMap { src, tgt, a: mat })
}

/// Basis of `Hom_R(M, N)`, from the kernel of `A ↦ A X_M − X_N A`.
pub fn hom_basis(m: &RModule, n: &RModule) -> Result<Vec<RMap>> {
    m.ring.check_same(&n.ring)?;
    let p = m.ring.p;
    let (dm, dn) = (m.dim(), n.dim());
    let vars = dm * dn;
    // unknown A[i][j] at index i*dm + j; one equation per entry of the commutator
    let mut sys = FpMatrix::zeros(p, vars, vars);
    for i in 0..dn {
        for j in 0..dm {
            let eq = i * dm + j;
            for k in 0..dm {
                let c = m.x.get(k, j);
                if c != 0 {
                    let idx = i * dm + k;
                    sys.set(eq, idx, linalg::add_mod(sys.get(eq, idx), c, p));
                }
            }
            for k in 0..dn {
                let c = n.x.get(i, k);
                if c != 0 {
                    let idx = k * dm + j;
                    sys.set(eq, idx, linalg::sub_mod(sys.get(eq, idx), c, p));
                }
            }
        }
    }
    Ok(sys
        .kernel_basis()
        .into_iter()
        .map(|v| RMap { src: m.clone(), tgt: n.clone(), a: FpMatrix::raw(p, dn, dm, v) })
        .collect())
}

/// Free module of rank `r`.
pub fn free(ring: Ring, r: usize) -> RModule {
    canonical(ring, &vec![ring.m; r])
}

/// Projective cover `p: P -> M`, free generators sent to the Jordan block
/// generators of `M`.
pub fn projective_cover(m: &RModule) -> (RModule, RMap) {
    let ring = m.ring;
    let (parts, gens) = jordan_basis(m);
    let big = free(ring, parts.len());
    let mut cols = Vec::with_capacity(big.dim());
    for g in &gens {
        let mut v = g.clone();
        for _ in 0..ring.m {
            cols.push(v.clone());
            v = m.x.mul_vec(&v).unwrap();
        }
    }
    let a = FpMatrix::from_columns(ring.p, m.dim(), &cols);
    (big.clone(), RMap { src: big, tgt: m.clone(), a })
}

/// Injective envelope `ι: M -> I`, each block `R/x^s` embedded by `x^{m-s}`.
pub fn injective_envelope(m: &RModule) -> (RModule, RMap) {
    let ring = m.ring;
    let (parts, pmat) = jordan_change_of_basis(m);
    let big = free(ring, parts.len());
    let mut emb = FpMatrix::zeros(ring.p, big.dim(), m.dim());
    let mut off = 0;
    for (b, &s) in parts.iter().enumerate() {
        for l in 0..s {
            emb.set(b * ring.m + ring.m - s + l, off + l, 1);
        }
        off += s;
    }
    let inv = pmat.inverse().expect("Jordan basis is invertible");
    let a = emb.mul_unchecked(&inv);
    (big.clone(), RMap { src: m.clone(), tgt: big, a })
}

/// Kernel of a map, with its inclusion.
pub fn kernel(f: &RMap) -> (RModule, RMap) {
    let basis = f.a.kernel_basis();
    submodule(&f.src, &basis)
}

/// Submodule spanned by linearly independent vectors closed under `X`.
fn submodule(m: &RModule, basis: &[Vec<u32>]) -> (RModule, RMap) {
    let ring = m.ring;
    let b = FpMatrix::from_columns(ring.p, m.dim(), basis);
    let mut xs = FpMatrix::zeros(ring.p, basis.len(), basis.len());
    for (j, v) in basis.iter().enumerate() {
        let xv = m.x.mul_vec(v).unwrap();
        let sol = solve_affine(&b, &xv).unwrap().expect("subspace is x-stable");
        for (i, &c) in sol.representative().iter().enumerate() {
            xs.set(i, j, c);
        }
    }
    let sub = RModule { ring, x: xs };
    (sub.clone(), RMap { src: sub, tgt: m.clone(), a: b })
}

/// Cokernel of a map, with its projection. The quotient basis is the set of
/// standard vectors off the pivots of the image.
pub fn cokernel(f: &RMap) -> (RModule, RMap) {
    let (quot, proj, _) = cokernel_with_section(f);
    (quot, proj)
}

/// Cokernel together with the linear (not R-linear) section picking the
/// standard basis vector behind each quotient basis vector.
pub fn cokernel_with_section(f: &RMap) -> (RModule, RMap, FpMatrix) {
    let ring = f.src.ring;
    let n = f.tgt.dim();
    let image = Subspace::span(ring.p, n, &f.a.columns()).unwrap();
    let q = image.quotient_dim();
    let proj_cols: Vec<Vec<u32>> = (0..n)
        .map(|j| {
            let mut e = vec![0; n];
            e[j] = 1;
            image.quotient_coords(&e)
        })
        .collect();
    let proj = FpMatrix::from_columns(ring.p, q, &proj_cols);
    let mut pivot = vec![false; n];
    for &c in image.pivots() {
        pivot[c] = true;
    }
    let reps: Vec<usize> = (0..n).filter(|&c| !pivot[c]).collect();
    let xcols: Vec<Vec<u32>> = reps
        .iter()
        .map(|&c| image.quotient_coords(&f.tgt.x.column(c)))
        .collect();
    let mut section = FpMatrix::zeros(ring.p, n, q);
    for (i, &c) in reps.iter().enumerate() {
        section.set(c, i, 1);
    }
    let quot = RModule { ring, x: FpMatrix::from_columns(ring.p, q, &xcols) };
    (quot.clone(), RMap { src: f.tgt.clone(), tgt: quot, a: proj }, section)
}

/// `Ω M` with the inclusion into the projective cover and the cover itself.
pub fn omega(m: &RModule) -> (RModule, RMap, RMap) {
    let (_, cover) = projective_cover(m);
    let (k, incl) = kernel(&cover);
    (k, incl, cover)
}

/// `Σ M` with the injective envelope and the projection onto the cokernel.
pub fn sigma(m: &RModule) -> (RModule, RMap, RMap) {
    let (_, env) = injective_envelope(m);
    let (c, proj) = cokernel(&env);
    (c, env, proj)
}

/// An isomorphism `M -> N`, if one exists.
pub fn find_isomorphism(m: &RModule, n: &RModule) -> Option<RMap> {
    if m.ring != n.ring {
        return None;
    }
    let (pm, bm) = jordan_change_of_basis(m);
    let (pn, bn) = jordan_change_of_basis(n);
    if pm != pn {
        return None;
    }
    let a = bn.mul_unchecked(&bm.inverse()?);
    Some(RMap { src: m.clone(), tgt: n.clone(), a })
}
