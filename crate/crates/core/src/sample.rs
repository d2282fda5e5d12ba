//! Random objects, maps and composable chains for property checks.

use rand::Rng;

use crate::linalg::vec_axpy;
use crate::stcat::{Obj, StMap, StMod, Triangle, Triangulated};

/// A random reduced object with 1 to `max_blocks` blocks and total
/// dimension at most `max_dim`.
pub fn random_obj<R: Rng>(cat: &StMod, rng: &mut R, max_blocks: usize, max_dim: usize) -> Obj {
    let m = cat.ring().m;
    loop {
        let k = rng.gen_range(1..=max_blocks);
        let parts: Vec<usize> = (0..k).map(|_| rng.gen_range(1..m)).collect();
        if parts.iter().sum::<usize>() <= max_dim {
            return cat.obj(&parts).expect("parts below m");
        }
    }
}

pub fn random_map<R: Rng>(cat: &StMod, rng: &mut R, a: &Obj, b: &Obj) -> StMap {
    let p = cat.ring().p;
    let c = (0..cat.dim(a, b)).map(|_| rng.gen_range(0..p)).collect();
    cat.map(a, b, c).expect("right length")
}

/// A random `g: target f -> z` with `g ∘ f = 0` (in any category).
pub fn random_annihilator<C: Triangulated, R: Rng>(cat: &C, rng: &mut R, f: &C::Map, z: &C::Obj) -> C::Map {
    let p = cat.p();
    let y = cat.target(f);
    let ker = cat.precompose_matrix(f, z).expect("matrix").kernel_basis();
    let mut v = vec![0; cat.hom_dim(&y, z)];
    for b in &ker {
        vec_axpy(&mut v, rng.gen_range(0..p), b, p);
    }
    cat.from_coords(&y, z, v)
}

/// Maps `f_n, ..., f_1` (leftmost first) between random objects with every
/// consecutive composite zero.
pub fn random_null_chain<R: Rng>(cat: &StMod, rng: &mut R, n: usize, max_dim: usize) -> Vec<StMap> {
    let x0 = random_obj(cat, rng, 2, max_dim);
    let x1 = random_obj(cat, rng, 2, max_dim);
    let mut maps = vec![random_map(cat, rng, &x0, &x1)];
    for _ in 1..n {
        let z = random_obj(cat, rng, 2, max_dim);
        let g = random_annihilator(cat, rng, maps.last().unwrap(), &z);
        maps.push(g);
    }
    maps.reverse();
    maps
}

/// A candidate triangle: a cone triangle, a rotation of one, or one with a
/// map zeroed or negated. Returns the candidate and its kind.
pub fn random_triangle_candidate<R: Rng>(cat: &StMod, rng: &mut R) -> (Triangle<StMap>, &'static str) {
    let a = random_obj(cat, rng, 2, 8);
    let b = random_obj(cat, rng, 2, 8);
    let t = cat.cone(&random_map(cat, rng, &a, &b));
    let which = rng.gen_range(0..3);
    let pick = |t: &Triangle<StMap>, f: &dyn Fn(&StMap) -> StMap| {
        let mut t = t.clone();
        match which {
            0 => t.f = f(&t.f),
            1 => t.g = f(&t.g),
            _ => t.h = f(&t.h),
        }
        t
    };
    match rng.gen_range(0..5) {
        0 => (t, "cone"),
        1 => (cat.rotate(&t), "rotation"),
        2 => (cat.rotate_back(&t), "inverse rotation"),
        3 => (pick(&t, &|f| cat.zero(f.src(), f.tgt())), "zeroed map"),
        _ => (pick(&t, &|f| cat.neg(f)), "negated map"),
    }
}
