//! End-to-end acceptance run. Prints one line per criterion and exits
//! nonzero if the set of failing criteria is not exactly `KNOWN_FAILURES`.

mod common;

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::Instant;

use common::*;
use todakit::adams::{dr_bracket_forms, ghost_cover, ghost_resolution, sparse_check, ProjectiveClass, SpectralSequence};
use todakit::heller::{heller_check, test_objects};
use todakit::modrep::{jordan_type, module_from_partition, omega};
use todakit::sample::random_triangle_candidate;
use todakit::stcat::{stable_hom, Obj, Op, StMap, StMod, Triangulated};
use todakit::toda::{bracket3, toda_family, Defn};

/// Criteria whose stated values the engine does not reproduce. Criterion 3
/// states `⟨κ, d_1, δ⟩ = {1_M}`, but `[μ_1 0] Σδ = μ_x` is stably nonzero,
/// so the bracket is the coset `1_M + span(μ_x)`.
const KNOWN_FAILURES: [usize; 1] = [3];

type Verdict = Result<String, String>;

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn entries(c: &StMod, a: &Obj, b: &Obj, e: &[Vec<Vec<(i64, usize)>>]) -> StMap {
    c.from_entries(a, b, e).unwrap()
}

struct Fixture {
    c: StMod,
    k: Obj,
    m: Obj,
    p: Obj,
    class: ProjectiveClass,
}

fn fixture() -> Fixture {
    let c = cat(2, 4);
    let k = c.obj(&[1]).unwrap();
    let class = ProjectiveClass::new(&c, k.clone());
    Fixture { m: c.obj(&[2]).unwrap(), p: c.obj(&[1, 3]).unwrap(), k, class, c }
}

fn structure() -> Verdict {
    let Fixture { c, k, m, .. } = fixture();
    let ring = c.ring();
    // Ω from kernels of projective covers, outside the stable category
    let km = module_from_partition(ring, &[1]).unwrap();
    let mm = module_from_partition(ring, &[2]).unwrap();
    let (ok, _, _) = omega(&km);
    let (o2k, _, _) = omega(&ok);
    let (om, _, _) = omega(&mm);
    ensure(jordan_type(&ok) == vec![3] && ok.dim() == 3, format!("Ωk has type {:?}", jordan_type(&ok)))?;
    ensure(jordan_type(&o2k) == vec![1], format!("Ω²k has type {:?}", jordan_type(&o2k)))?;
    ensure(jordan_type(&om) == vec![2], format!("ΩM has type {:?}", jordan_type(&om)))?;
    ensure(c.desuspend_obj(&k) == c.obj(&[3]).unwrap(), "Σ^{-1}k in the stable category")?;
    ensure(c.desuspend_obj(&m) == m, "Σ^{-1}M in the stable category")?;
    // stable Hom by the general quotient and by the block formula
    for (src, module, label) in [(&k, &km, "mu(x)"), (&c.obj(&[3]).unwrap(), &ok, "mu(1)")] {
        let general = stable_hom(module, &mm).unwrap().dim();
        ensure(general == 1 && c.dim(src, &m) == 1, format!("T({src}, M) has dimension {general}"))?;
        ensure(c.label(src, &m, 0) == label, format!("T({src}, M) is spanned by {}", c.label(src, &m, 0)))?;
    }
    Ok("Ωk = [3], Ω²k = [1], ΩM = [2]; T(k,M) = <μ_x>, T(Ωk,M) = <μ_1>".into())
}

fn resolution() -> Verdict {
    let Fixture { c, m, p, class, .. } = fixture();
    let (cover_obj, cover) = ghost_cover(&c, &class, &m).unwrap();
    ensure(cover_obj == p, format!("cover is {cover_obj}"))?;
    let want = entries(&c, &p, &m, &[vec![vec![(1, 1)], vec![(1, 0)]]]);
    ensure(cover == want, format!("p = {:?}", cover.coeffs()))?;
    let t = c.fiber(&cover).unwrap();
    let fib = Triangulated::source(&c, &t.f);
    ensure(fib == m, format!("fiber is {fib}"))?;
    let res = ghost_resolution(&c, &class, &m, 6).unwrap();
    ensure(res.y.iter().all(|y| y == &m), "Y_s = M throughout")?;
    let op = Op(&c);
    let sp = c.suspend_obj(&p);
    let swap = entries(&c, &p, &sp, &[vec![vec![], vec![(1, 0)]], vec![vec![(1, 0)], vec![]]]);
    let d1 = c.compose(&res.d1(&op, 0).unwrap(), &swap).unwrap();
    let want = entries(&c, &p, &p, &[vec![vec![], vec![(1, 0)]], vec![vec![(1, 2)], vec![]]]);
    ensure(d1 == want, format!("d_1 = {:?}", d1.coeffs()))?;
    Ok("cover k⊕Ωk, p = [μ_x, μ_1], fiber M, d_1 = [[0, μ_1], [μ_{x²}, 0]]".into())
}

fn kappa_brackets() -> Verdict {
    let Fixture { c, m, p, class, .. } = fixture();
    let kappa = entries(&c, &p, &m, &[vec![vec![(1, 1)], vec![]]]);
    let d1 = entries(&c, &p, &p, &[vec![vec![], vec![(1, 0)]], vec![vec![(1, 2)], vec![]]]);
    let delta = entries(&c, &m, &p, &[vec![vec![(1, 0)]], vec![vec![(1, 1)]]]);
    let cover = entries(&c, &p, &m, &[vec![vec![(1, 1)], vec![(1, 0)]]]);
    let sp = c.suspend_obj(&p);
    let row = |b: i64| entries(&c, &sp, &m, &[vec![vec![(1, 0)], vec![(b, 1)]]]);

    let inner = bracket3(&c, &kappa, &d1, &delta, Defn::Fc, CAP).unwrap();
    let scover = c.suspend(&cover);
    let composed: BTreeSet<Vec<u32>> = inner
        .elements
        .iter()
        .map(|e| c.coords(&c.compose(&c.map(&inner.src, &inner.tgt, e.clone()).unwrap(), &scover).unwrap()))
        .collect();
    assert_eq!(composed.into_iter().collect::<Vec<_>>(), vec![c.coords(&row(1))], "⟨κ,d_1,δ⟩ Σp");

    let res = ghost_resolution(&c, &class, &m, 6).unwrap();
    let op = Op(&c);
    let ss = SpectralSequence::new(&op, &res, m.clone());
    let d2 = ss.dr_set(0, 0, &kappa, 2, CAP).unwrap();
    let d2_native: Vec<Vec<u32>> = d2
        .elements
        .iter()
        .map(|e| c.coords(&c.suspend(&c.map(&d2.tgt, &d2.src, e.clone()).unwrap())))
        .collect();
    assert_eq!(d2_native, vec![c.coords(&row(1))], "d_2[κ]");

    let wide = bracket3(&c, &kappa, &d1, &d1, Defn::Fc, CAP).unwrap();
    let mut want: Vec<Vec<u32>> = (0..2).map(|b| c.coords(&row(b))).collect();
    want.sort();
    assert_eq!(wide.elements, want, "⟨κ,d_1,d_1⟩");
    assert!(d2_native.iter().all(|e| wide.contains(e)) && d2_native.len() < wide.len(), "restricted ⊊ full");
    let forms = dr_bracket_forms(&ss, 0, 0, &kappa, 2, CAP).unwrap();
    assert!(forms.all_equal() && forms.d2.as_ref().unwrap().outer_proper);

    let one = c.coords(&c.identity(&m));
    if inner.elements != vec![one] {
        return Err(format!(
            "⟨κ,d_1,δ⟩ = {:?} (1_M and 1_M + μ_x), expected {{1_M}}; ⟨κ,d_1,δ⟩Σp = d_2[κ] = {{[μ_1 μ_x]}}, \
             ⟨κ,d_1,d_1⟩ has 2 elements and restricted ⊊ full all hold",
            inner.elements
        ));
    }
    Ok("⟨κ,d_1,δ⟩ = {1_M}; d_2[κ] = {[μ_1 μ_x]}; |⟨κ,d_1,d_1⟩| = 2; restricted ⊊ full".into())
}

fn c3() -> Verdict {
    let c = cat(3, 3);
    let (f3, f2, f1) = (c.mu(2, 1, 0).unwrap(), c.mu(1, 2, 1).unwrap(), c.mu(2, 1, 0).unwrap());
    let minus_one = vec![vec![2u32]];
    for d in [Defn::Fc, Defn::Cc, Defn::Ff] {
        let b = bracket3(&c, &f3, &f2, &f1, d, CAP).unwrap();
        ensure(b.elements == minus_one, format!("{d:?} bracket is {:?}", b.elements))?;
        ensure(b.elements != vec![vec![1u32]], "bracket equals its negative")?;
    }
    let fam = toda_family(&c, &f3, &f2, &f1, CAP).unwrap();
    ensure(fam.len() == 1, format!("{} fillers", fam.len()))?;
    ensure(fam[0].sigma_alpha.coeffs() == [2] && fam[0].beta.coeffs() == [1], "fillers are not Σα = -1, β = 1")?;
    Ok("⟨μ_1, μ_x, μ_1⟩ = {-1_k} by cc, fc, ff; unique Σα = -1_k, β = 1_k; {1_k} ≠ {-1_k}".into())
}

fn degenerate() -> Verdict {
    let mut seen = Vec::new();
    for (p, m, xs, ys, zs) in [(2, 4, vec![1], vec![2], vec![3, 1]), (3, 3, vec![2], vec![1, 2], vec![1])] {
        let c = cat(p, m);
        let (x, y, z) = (c.obj(&xs).unwrap(), c.obj(&ys).unwrap(), c.obj(&zs).unwrap());
        let b = bracket3(&c, &c.zero(&y, &z), &c.identity(&y), &c.zero(&x, &y), Defn::Fc, CAP).unwrap();
        let zero = c.coords(&c.zero(&c.suspend_obj(&x), &z));
        ensure(b.elements == vec![zero], format!("⟨0,1,0⟩ = {:?}", b.elements))?;
        let b = bracket3(&c, &c.identity(&z), &c.zero(&y, &z), &c.zero(&x, &y), Defn::Fc, CAP).unwrap();
        let dim = c.dim(&c.suspend_obj(&x), &z);
        ensure(dim > 0 && b.len() == (p as usize).pow(dim as u32), format!("⟨1,0,0⟩ has {} elements", b.len()))?;
        seen.push(format!("|T(ΣX,Z)| = {}", b.len()));
    }
    Ok(format!("⟨0,1_Y,0⟩ = {{0}}; ⟨1_Z,0,0⟩ = T(ΣX,Z) ({})", seen.join(", ")))
}

#[derive(Default)]
struct Tally {
    run: usize,
    skipped: usize,
    nonempty: usize,
}

impl Tally {
    fn record(&mut self, r: Result<bool, String>) -> Result<(), String> {
        match r {
            Ok(nonempty) => {
                self.run += 1;
                self.nonempty += usize::from(nonempty);
                Ok(())
            }
            Err(e) if is_overflow(&e) => {
                self.skipped += 1;
                Ok(())
            }
            Err(e) => Err(e),
        }
    }
}

fn properties() -> Verdict {
    let mut r = rng(2024);
    let (mut three, mut jug, mut dual, mut sign4, mut sign5) =
        (Tally::default(), Tally::default(), Tally::default(), Tally::default(), Tally::default());
    let mut rings = BTreeSet::new();
    for _ in 0..240 {
        let c = random_cat(&mut r);
        rings.insert((c.ring().p, c.ring().m));
        let m = chain(&c, &mut r, 3);
        three.record(definitions_agree(&c, &m).and_then(|ne| {
            is_coset(&c, &m)?;
            suspension_law(&c, &m)?;
            Ok(ne)
        }))?;
    }
    for _ in 0..60 {
        let c = random_cat(&mut r);
        let m = chain(&c, &mut r, 4);
        jug.record(juggling(&c, &m).map(|_| true))?;
    }
    for n in [3, 4] {
        for _ in 0..30 {
            let c = random_cat(&mut r);
            let m = chain(&c, &mut r, n);
            dual.record(self_dual(&c, &m))?;
        }
    }
    // sample until both lengths have enough nonempty brackets
    let mut tries = 0;
    while (sign4.nonempty < 20 || sign5.nonempty < 20) && tries < 3000 {
        tries += 1;
        let n = if sign4.nonempty < 20 && (tries % 2 == 0 || sign5.nonempty >= 20) { 4 } else { 5 };
        let c = random_cat(&mut r);
        let m = chain(&c, &mut r, n);
        let t = if n == 4 { &mut sign4 } else { &mut sign5 };
        t.record(sign_law(&c, &m))?;
    }
    ensure(rings.len() == RINGS.len(), "not every ring was sampled")?;
    ensure(three.run >= 200, format!("only {} three-fold cases ran", three.run))?;
    ensure(sign4.nonempty >= 20 && sign5.nonempty >= 20, "too few nonempty sign-law instances")?;
    Ok(format!(
        "3-fold {} cases ({} skipped), juggling {}, self-dual {}, sign law n=4 {} ({} nonempty), n=5 {} ({} nonempty)",
        three.run, three.skipped, jug.run, dual.run, sign4.run, sign4.nonempty, sign5.run, sign5.nonempty
    ))
}

fn coherence() -> Verdict {
    let Fixture { c, m, class, .. } = fixture();
    let res = ghost_resolution(&c, &class, &m, 6).unwrap();
    let op = Op(&c);
    let ss = SpectralSequence::new(&op, &res, m.clone());
    let mut checked = 0;
    for r in 1..=2 {
        for s in 0..res.len() {
            if s + 2 * r + 1 > res.len() {
                continue;
            }
            for u in -1..=1 {
                ss.check_page_identities(s, u, r).map_err(|e| format!("({s},{u}) r={r}: {e}"))?;
                checked += 1;
            }
        }
    }
    // E_2 from ranks of d_1 composites, independently of the page code
    for s in 0..res.len() - 2 {
        for u in -1..=1 {
            let rank_out = |s: usize, u: i32| {
                let d1 = res.d1(&op, s).unwrap();
                op.postcompose_matrix(&d1, &ss.source(u)).unwrap().rank()
            };
            let incoming = if s == 0 { 0 } else { rank_out(s - 1, u + 1) };
            let e2 = ss.e1_dim(s, u) - rank_out(s, u) - incoming;
            let got = ss.entry(s, u, 2).unwrap().dim;
            ensure(got == e2, format!("E_2^({s},{u}) = {got}, homology gives {e2}"))?;
        }
    }
    let mut classes = 0;
    for (r, top) in [(2, 3), (3, 2)] {
        for s in 0..=top {
            for u in -1..=1 {
                let src = ss.source(u);
                for v in 0..(1u32 << ss.e1_dim(s, u)) {
                    let coords: Vec<u32> = (0..ss.e1_dim(s, u)).map(|b| (v >> b) & 1).collect();
                    let x = op.from_coords(&src, &res.inj[s], coords);
                    match dr_bracket_forms(&ss, s, u, &x, r, CAP) {
                        Ok(f) => {
                            ensure(f.full_equal && f.restricted_equal, format!("forms differ at ({s},{u}) r={r}"))?;
                            classes += 1;
                        }
                        Err(todakit::Error::NotACycle { .. }) if r == 3 => {}
                        Err(e) => return Err(format!("({s},{u}) r={r}: {e}")),
                    }
                }
            }
        }
    }
    Ok(format!("{checked} page identities, E_2 = H(E_1, d_1), (a) = (b) = (c) on {classes} classes"))
}

fn heller() -> Verdict {
    let mut r = rng(99);
    let mut kinds = BTreeSet::new();
    let (mut n, mut distinguished, mut sign_p3) = (0, 0, 0);
    for (p, m) in RINGS {
        let c = cat(p, m);
        let objs = test_objects(&c);
        for _ in 0..20 {
            let (t, kind) = random_triangle_candidate(&c, &mut r);
            let truth = c.is_distinguished(&t, CAP).map_err(|e| e.to_string())?;
            let v = heller_check(&c, &t, &objs, CAP).map_err(|e| e.to_string())?;
            ensure(v.distinguished == truth, format!("{kind} candidate at p={p} m={m} disagrees"))?;
            n += 1;
            distinguished += usize::from(truth);
            sign_p3 += usize::from(p == 3 && kind.contains("negated") && !truth);
            kinds.insert(kind);
        }
    }
    ensure(n >= 100 && kinds.len() >= 4 && sign_p3 > 0, format!("coverage: {n} cases, kinds {kinds:?}"))?;
    Ok(format!("{n}/{n} agree ({distinguished} distinguished, {sign_p3} rejected sign flips at p=3; kinds: {})", kinds.into_iter().collect::<Vec<_>>().join(", ")))
}

fn sparseness() -> Verdict {
    let c = cat(2, 4);
    let k = c.obj(&[1]).unwrap();
    for n in 2..=8 {
        let r = sparse_check(&c, &k, n, 4);
        ensure(!r.sparse, format!("k reported {n}-sparse"))?;
    }
    let free = c.obj(&[4]).unwrap();
    let r = sparse_check(&c, &free, 2, 4);
    ensure(r.sparse && r.nonzero.is_empty(), "projective generator is not vacuously sparse")?;
    Ok(format!("k is not N-sparse for N = 2..8 (nonzero degrees {:?}); R is vacuously sparse", sparse_check(&c, &k, 2, 4).nonzero))
}

fn main() -> ExitCode {
    let criteria: [(usize, &str, fn() -> Verdict); 9] = [
        (1, "module structure", structure),
        (2, "ghost resolution", resolution),
        (3, "brackets on kappa", kappa_brackets),
        (4, "negative bracket at p=3", c3),
        (5, "degenerate brackets", degenerate),
        (6, "property suite", properties),
        (7, "spectral sequence coherence", coherence),
        (8, "heller checker", heller),
        (9, "sparseness", sparseness),
    ];
    let start = Instant::now();
    let mut failed = Vec::new();
    for (n, name, check) in criteria {
        let t = Instant::now();
        let (tag, detail) = match check() {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed.push(n);
                ("FAIL", d)
            }
        };
        println!("criterion {n} ({name}): {tag} [{:.1}s] {detail}", t.elapsed().as_secs_f64());
    }
    println!("total {:.1}s; failing: {failed:?}; known: {KNOWN_FAILURES:?}", start.elapsed().as_secs_f64());
    if failed == KNOWN_FAILURES {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
