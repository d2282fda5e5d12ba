use super::*;
use crate::modrep::{jordan_type, module_from_partition, mu};
use proptest::prelude::*;

const CAP: usize = 4096;

fn cat(p: u32, m: usize) -> StMod {
    StMod::new(Ring::new(p, m).unwrap())
}

#[test]
fn f2c4_stable_homs() {
    let c = cat(2, 4);
    let ring = c.ring();
    let k = module_from_partition(ring, &[1]).unwrap();
    let m2 = module_from_partition(ring, &[2]).unwrap();
    let ok = module_from_partition(ring, &[3]).unwrap();
    let s = stable_hom(&k, &m2).unwrap();
    assert_eq!(s.dim(), 1);
    assert!(!s.is_stably_zero(&mu(ring, 1, 2, 1).unwrap()).unwrap());
    let s = stable_hom(&ok, &m2).unwrap();
    assert_eq!((s.hom_dim(), s.dim()), (2, 1));
    assert!(!s.is_stably_zero(&mu(ring, 3, 2, 0).unwrap()).unwrap());
    assert!(s.is_stably_zero(&mu(ring, 3, 2, 1).unwrap()).unwrap());
    let sum = mu(ring, 3, 2, 0).unwrap().add(&mu(ring, 3, 2, 1).unwrap()).unwrap();
    assert!(s.stably_equal(&sum, &mu(ring, 3, 2, 0).unwrap()).unwrap());
    // closed form agrees
    let (kk, mm, oo) = (c.obj(&[1]).unwrap(), c.obj(&[2]).unwrap(), c.obj(&[3]).unwrap());
    assert_eq!(c.dim(&kk, &mm), 1);
    assert_eq!(c.dim(&oo, &mm), 1);
    assert_eq!(c.label(&oo, &mm, 0), "mu(1)");
    assert_eq!(c.label(&kk, &mm, 0), "mu(x)");
    assert!(c.mu(3, 2, 1).unwrap().coeffs().iter().all(|&x| x == 0));
}

#[test]
fn projective_source_has_no_stable_maps() {
    let ring = Ring::new(3, 3).unwrap();
    let r = module_from_partition(ring, &[3]).unwrap();
    for parts in [vec![1], vec![2, 1], vec![3, 2]] {
        let n = module_from_partition(ring, &parts).unwrap();
        assert_eq!(stable_hom(&r, &n).unwrap().dim(), 0);
    }
}

#[test]
fn mu_x_on_m_is_null_at_three() {
    let ring = Ring::new(3, 3).unwrap();
    let m2 = module_from_partition(ring, &[2]).unwrap();
    let s = stable_hom(&m2, &m2).unwrap();
    assert!(s.is_stably_zero(&mu(ring, 2, 2, 1).unwrap()).unwrap());
    let id = RMap::identity(&m2);
    assert!(!s.stably_equal(&id, &RMap::zero(&m2, &m2)).unwrap());
    assert!(cat(3, 3).mu(2, 2, 1).unwrap().coeffs().iter().all(|&x| x == 0));
}

#[test]
fn closed_form_matches_linear_algebra() {
    for (p, m) in [(2u32, 2usize), (2, 3), (2, 4), (3, 3), (3, 4)] {
        let c = cat(p, m);
        let objs: Vec<Vec<usize>> = vec![vec![1], vec![m - 1], vec![1, m - 1], vec![m / 2 + 1, 1]];
        for a in &objs {
            for b in &objs {
                let (oa, ob) = (c.obj(a).unwrap(), c.obj(b).unwrap());
                let ma = module_from_partition(c.ring(), oa.parts()).unwrap();
                let mb = module_from_partition(c.ring(), ob.parts()).unwrap();
                let space = stable_hom(&ma, &mb).unwrap();
                assert_eq!(c.dim(&oa, &ob), space.dim(), "{a:?} -> {b:?} at p={p} m={m}");
                // every closed-form basis element is stably nonzero, and the
                // matrix route reads the same coordinates back
                for f in c.basis(&oa, &ob) {
                    let r = c.rmap_of(&f);
                    assert!(RMap::new(r.src().clone(), r.tgt().clone(), r.matrix().clone()).is_ok());
                    assert!(!space.is_stably_zero(&r).unwrap());
                    assert_eq!(stable_map_from_rmap(&c, &r), f);
                }
            }
        }
    }
}

#[test]
fn free_summands_do_not_change_stable_dims() {
    let ring = Ring::new(2, 3).unwrap();
    let a = module_from_partition(ring, &[2, 1]).unwrap();
    let b = module_from_partition(ring, &[1]).unwrap();
    let a2 = module_from_partition(ring, &[2, 3, 1]).unwrap();
    let b2 = module_from_partition(ring, &[3, 1, 3]).unwrap();
    let d = stable_hom(&a, &b).unwrap().dim();
    assert_eq!(stable_hom(&a2, &b).unwrap().dim(), d);
    assert_eq!(stable_hom(&a, &b2).unwrap().dim(), d);
    assert_eq!(stable_hom(&a2, &b2).unwrap().dim(), d);
}

#[test]
fn suspension_is_an_involution_on_blocks() {
    let c = cat(3, 3);
    let s = c.suspend(&c.mu(2, 1, 0).unwrap());
    assert_eq!(s, c.mu(1, 2, 1).unwrap());
    let c4 = cat(2, 4);
    let f = c4.mu(3, 2, 0).unwrap();
    assert_eq!(c4.suspend(&c4.suspend(&f)), f);
}

#[test]
fn cone_of_identity_and_zero() {
    let c = cat(3, 4);
    let a = c.obj(&[1, 3]).unwrap();
    let t = c.cone(&c.identity(&a));
    assert!(c.target(&t.g).is_empty());
    let b = c.obj(&[2]).unwrap();
    let t = c.cone(&c.zero(&a, &b));
    let expect = b.concat(&c.suspend_obj(&a));
    assert!(c.target(&t.g).same_type(&expect));
}

#[test]
fn c3_middle_row() {
    // the standard triangle on μ_x: k -> M at p = 3 is (μ_x, μ_1, μ_x)
    let c = cat(3, 3);
    let f = c.mu(1, 2, 1).unwrap();
    let t = c.cone(&f);
    assert_eq!(t.g, c.mu(2, 1, 0).unwrap());
    assert_eq!(t.h, c.mu(1, 2, 1).unwrap());
}

fn ghost_cover_map(c: &StMod) -> StMap {
    let src = c.obj(&[1, 3]).unwrap();
    let tgt = c.obj(&[2]).unwrap();
    c.from_entries(&src, &tgt, &[vec![vec![(1, 1)], vec![(1, 0)]]]).unwrap()
}

#[test]
fn ghost_cover_fiber_and_cone() {
    let c = cat(2, 4);
    let p = ghost_cover_map(&c);
    let t = c.cone(&p);
    assert_eq!(c.target(&t.g), c.obj(&[2]).unwrap());
    let fib = c.fiber(&p).unwrap();
    assert_eq!(c.source(&fib.f), c.obj(&[2]).unwrap());
    assert_eq!(fib.h, c.mu(2, 2, 1).unwrap());
    assert!(c.is_distinguished(&fib, CAP).unwrap());
}

#[test]
fn iso_examples() {
    let c = cat(2, 4);
    let a = c.obj(&[3]).unwrap();
    assert!(c.is_iso(&c.identity(&a)).unwrap());
    assert!(!c.is_iso(&c.zero(&a, &a)).unwrap());
    assert!(!c.is_iso(&c.mu(3, 2, 0).unwrap()).unwrap());
}

#[test]
fn rotation_round_trip() {
    let c = cat(3, 3);
    let f = c.mu(1, 2, 1).unwrap();
    let t = c.cone(&f);
    assert_eq!(c.rotate_back(&c.rotate(&t)), t);
    assert_eq!(c.rotate(&c.rotate_back(&t)), t);
    let t3 = c.rotate(&c.rotate(&c.rotate(&t)));
    assert_eq!(t3.f, c.neg(&c.suspend(&t.f)));
    assert_eq!(t3.g, c.neg(&c.suspend(&t.g)));
    assert_eq!(t3.h, c.neg(&c.suspend(&t.h)));
}

#[test]
fn single_negation_breaks_distinguishedness_at_three() {
    let c = cat(3, 3);
    let t = c.cone(&c.mu(1, 2, 1).unwrap());
    assert!(c.is_distinguished(&t, CAP).unwrap());
    let bad = Triangle { f: t.f.clone(), g: t.g.clone(), h: c.neg(&t.h) };
    assert!(!c.is_distinguished(&bad, CAP).unwrap());
    let twice = Triangle { f: c.neg(&t.f), g: t.g.clone(), h: c.neg(&t.h) };
    assert!(c.is_distinguished(&twice, CAP).unwrap());
}

#[test]
fn op_view_basics() {
    let c = cat(3, 3);
    let op = Op(&c);
    let opop = Op(&op);
    let f = c.mu(2, 1, 0).unwrap();
    assert_eq!(op.source(&f), c.target(&f));
    assert_eq!(opop.source(&f), c.source(&f));
    // the doubled view is the category itself, up to the chosen triangles
    assert!(c.is_distinguished(&opop.cone(&f), CAP).unwrap());
    let t = op.cone(&f);
    assert!(op.is_distinguished(&t, CAP).unwrap());
    let rev = Triangle { f: t.h.clone(), g: t.g.clone(), h: t.f.clone() };
    assert!(c.is_distinguished(&rev, CAP).unwrap());
    // op cone third object is the fiber of f in T, up to iso
    let fib = c.fiber(&f).unwrap();
    assert!(op.target(&t.g).same_type(&c.source(&fib.f)));
}

fn small_obj(m: usize) -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(1..m, 0..3)
}

fn map_case() -> impl Strategy<Value = (StMod, StMap)> {
    (prop::sample::select(vec![2u32, 3]), 2usize..5)
        .prop_flat_map(|(p, m)| (Just(p), Just(m), small_obj(m), small_obj(m), prop::collection::vec(0..p, 32)))
        .prop_map(|(p, m, a, b, noise)| {
            let c = cat(p, m);
            let (oa, ob) = (c.obj(&a).unwrap(), c.obj(&b).unwrap());
            let d = c.dim(&oa, &ob);
            let f = c.map(&oa, &ob, noise[..d].to_vec()).unwrap();
            (c, f)
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn cone_triangles_are_exact_and_rotate((c, f) in map_case()) {
        let t = c.cone(&f);
        prop_assert!(c.is_zero(&c.compose(&t.g, &t.f).unwrap()));
        prop_assert!(c.is_zero(&c.compose(&t.h, &t.g).unwrap()));
        prop_assert!(c.is_distinguished(&t, CAP).unwrap());
        prop_assert!(c.is_distinguished(&c.rotate(&t), CAP).unwrap());
        prop_assert!(c.is_distinguished(&c.rotate_back(&t), CAP).unwrap());
    }

    #[test]
    fn fiber_is_rotated_cone((c, f) in map_case()) {
        let fib = c.fiber(&f).unwrap();
        prop_assert!(c.is_distinguished(&fib, CAP).unwrap());
        let back = c.rotate_back(&c.cone(&f));
        prop_assert!(c.source(&fib.f).same_type(&c.source(&back.f)));
    }

    #[test]
    fn composition_matches_matrices((c, f) in map_case(), noise in prop::collection::vec(0u32..3, 32)) {
        let b = c.target(&f);
        let a = c.source(&f);
        let g = c.map(&b, &a, noise[..c.dim(&b, &a)].iter().map(|x| x % c.ring().p).collect()).unwrap();
        let gf = c.compose(&g, &f).unwrap();
        let mat = c.matrix_of(&g).mul(&c.matrix_of(&f)).unwrap();
        prop_assert_eq!(c.from_matrix(&a, &a, &mat), gf);
        prop_assert_eq!(c.suspend(&c.compose(&g, &f).unwrap()), c.compose(&c.suspend(&g), &c.suspend(&f)).unwrap());
    }

    #[test]
    fn iso_iff_two_sided_inverse((c, f) in map_case()) {
        let (a, b) = (c.source(&f), c.target(&f));
        let left = c.extensions(&f, &c.identity(&a)).unwrap();
        let right = c.lifts(&f, &c.identity(&b)).unwrap();
        let two_sided = match (left, right) {
            (Some(l), Some(r)) => {
                let g = c.from_coords(&b, &a, l.representative().to_vec());
                let h = c.from_coords(&b, &a, r.representative().to_vec());
                g == h || (c.compose(&f, &g).unwrap() == c.identity(&b))
            }
            _ => false,
        };
        prop_assert_eq!(c.is_iso(&f).unwrap(), two_sided);
        // cone of an iso is zero
        prop_assert_eq!(c.is_iso(&f).unwrap(), c.target(&c.cone(&f).g).is_empty());
    }

    #[test]
    fn general_route_sees_cones((c, f) in map_case()) {
        let t = c.cone(&f);
        let r = c.rmap_of(&t.g).then(&c.rmap_of(&t.h)).unwrap();
        let space = stable_hom(r.src(), r.tgt()).unwrap();
        prop_assert!(space.is_stably_zero(&r).unwrap());
        let cm = c.module(&c.target(&t.g));
        prop_assert!(jordan_type(&cm).iter().all(|&x| x < c.ring().m));
    }
}
