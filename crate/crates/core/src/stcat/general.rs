//! Stable homs between arbitrary modules, by linear algebra on hom spaces.

use super::{Obj, StMap, StMod};
use crate::error::{Error, Result};
use crate::linalg::{solve_affine, FpMatrix, Subspace};
use crate::modrep::{self, hom_basis, jordan_change_of_basis, RMap, RModule};

/// A module with its reduced object and the comparison maps.
#[derive(Clone, Debug)]
pub struct Reduced {
    pub obj: Obj,
    /// `M -> canonical(obj)`, projecting away free blocks.
    pub to: RMap,
    /// `canonical(obj) -> M`, including the non-free blocks.
    pub from: RMap,
}

pub fn reduce(module: &RModule) -> Reduced {
    let ring = module.ring();
    let (p, m) = (ring.p, ring.m);
    let (parts, pmat) = jordan_change_of_basis(module);
    let pinv = pmat.inverse().expect("Jordan basis is invertible");
    let kept: Vec<usize> = parts.iter().copied().filter(|&a| a < m).collect();
    let small: usize = kept.iter().sum();
    // selection of the non-free coordinates
    let mut sel = FpMatrix::zeros(p, small, module.dim());
    let (mut src_off, mut dst_off) = (0, 0);
    for &a in &parts {
        if a < m {
            for l in 0..a {
                sel.set(dst_off + l, src_off + l, 1);
            }
            dst_off += a;
        }
        src_off += a;
    }
    let canon = modrep::canonical(ring, &kept);
    let to = RMap::raw(module.clone(), canon.clone(), sel.mul_unchecked(&pinv));
    let from = RMap::raw(canon, module.clone(), pmat.mul_unchecked(&sel.transpose()));
    Reduced { obj: Obj(kept), to, from }
}

/// The stable class of an R-linear map between arbitrary modules.
pub fn stable_map_from_rmap(cat: &StMod, f: &RMap) -> StMap {
    let rs = reduce(f.src());
    let rt = reduce(f.tgt());
    let mat = rt
        .to
        .matrix()
        .mul_unchecked(f.matrix())
        .mul_unchecked(rs.from.matrix());
    cat.from_matrix(&rs.obj, &rt.obj, &mat)
}

/// `Hom(M, N)` modulo the maps factoring through a projective.
#[derive(Clone, Debug)]
pub struct StableHomSpace {
    src: RModule,
    tgt: RModule,
    hom: Vec<RMap>,
    /// vectorized hom basis, as columns
    hom_cols: FpMatrix,
    /// projective-factoring maps, in hom-basis coordinates
    phom: Subspace,
}

pub fn stable_hom(src: &RModule, tgt: &RModule) -> Result<StableHomSpace> {
    let hom = hom_basis(src, tgt)?;
    let p = src.ring().p;
    let n = src.dim() * tgt.dim();
    let cols: Vec<Vec<u32>> = hom.iter().map(|h| h.matrix().data().to_vec()).collect();
    let hom_cols = FpMatrix::from_columns(p, n, &cols);
    // a map factors through a projective iff it lifts along the cover of N
    let (_, cover) = modrep::projective_cover(tgt);
    let lifts = hom_basis(src, cover.src())?;
    let mut gens = Vec::with_capacity(lifts.len());
    for h in &lifts {
        let v = cover.matrix().mul_unchecked(h.matrix());
        let c = solve_affine(&hom_cols, v.data())?
            .ok_or_else(|| Error::Verification("composite left the hom space".into()))?;
        gens.push(c.representative().to_vec());
    }
    let phom = Subspace::span(p, hom.len(), &gens)?;
    Ok(StableHomSpace { src: src.clone(), tgt: tgt.clone(), hom, hom_cols, phom })
}

impl StableHomSpace {
    pub fn src(&self) -> &RModule {
        &self.src
    }

    pub fn tgt(&self) -> &RModule {
        &self.tgt
    }

    pub fn hom_basis(&self) -> &[RMap] {
        &self.hom
    }

    pub fn hom_dim(&self) -> usize {
        self.hom.len()
    }

    pub fn phom_dim(&self) -> usize {
        self.phom.dim()
    }

    pub fn dim(&self) -> usize {
        self.phom.quotient_dim()
    }

    fn hom_coords(&self, f: &RMap) -> Result<Vec<u32>> {
        if f.src() != &self.src || f.tgt() != &self.tgt {
            return Err(Error::DimensionMismatch("map does not belong to this hom space".into()));
        }
        Ok(solve_affine(&self.hom_cols, f.matrix().data())?
            .expect("R-linear maps lie in the hom space")
            .representative()
            .to_vec())
    }

    /// Coordinates of the stable class.
    pub fn coords(&self, f: &RMap) -> Result<Vec<u32>> {
        Ok(self.phom.quotient_coords(&self.hom_coords(f)?))
    }

    pub fn is_stably_zero(&self, f: &RMap) -> Result<bool> {
        Ok(self.phom.contains(&self.hom_coords(f)?))
    }

    pub fn stably_equal(&self, f: &RMap, g: &RMap) -> Result<bool> {
        let d = f.add(&g.scale(self.src.ring().p - 1))?;
        self.is_stably_zero(&d)
    }
}
