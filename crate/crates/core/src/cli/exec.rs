//! Validation and execution of parsed sessions.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::parse::{parse_session, Command, MapDef, ModuleDef, Stmt, Term};
use super::{
    BracketOut, CliError, CmdOutput, D2Out, MapOut, NamedObject, Options, Output, PropcheckLine, Report,
    ResolutionStage, RingInfo,
};
use crate::adams::{dr_bracket_forms, ghost_resolution, sparse_check, ProjectiveClass, Resolution, SpectralSequence};
use crate::error::{Error, Result};
use crate::heller::{heller_check, test_objects};
use crate::linalg::FpMatrix;
use crate::modrep::{module_from_partition, RMap, RModule, Ring};
use crate::sample::{random_null_chain, random_triangle_candidate};
use crate::stcat::{reduce, Obj, Op, StMap, StMod, Triangle, Triangulated};
use crate::toda::{bracket3, higher_bracket, BracketSet, Defn, EmptyReason};

/// A failed run: the error, and the report up to the failing command when
/// the session got that far.
#[derive(Clone, Debug)]
pub struct Failure {
    pub error: CliError,
    pub partial: Option<Report>,
}

struct Module {
    obj: Obj,
    module: RModule,
    /// declared basis -> canonical basis of `obj`
    to: FpMatrix,
    from: FpMatrix,
    free: usize,
}

struct Env {
    cat: StMod,
    modules: HashMap<String, Module>,
    maps: HashMap<String, StMap>,
    order: Vec<String>,
}

impl Env {
    fn obj(&self, name: &str) -> &Obj {
        &self.modules[name].obj
    }

    fn map(&self, name: &str) -> &StMap {
        &self.maps[name]
    }
}

struct Adams {
    module: Obj,
    res: Resolution<Obj, StMap>,
}

fn bad(line: usize, msg: impl Into<String>) -> CliError {
    CliError::Parse { line, col: 1, msg: msg.into() }
}

fn line_of(st: &Stmt) -> usize {
    match st {
        Stmt::Ring { line, .. } | Stmt::Module { line, .. } | Stmt::Map { line, .. } | Stmt::Command { line, .. } => {
            *line
        }
    }
}

fn build_module(cat: &StMod, def: &ModuleDef) -> std::result::Result<Module, String> {
    let ring = cat.ring();
    let (p, m) = (ring.p, ring.m);
    match def {
        ModuleDef::Parts(parts) => {
            let module = module_from_partition(ring, parts).map_err(|e| e.to_string())?;
            let kept: Vec<usize> = parts.iter().copied().filter(|&a| a < m).collect();
            let obj = cat.obj(&kept).map_err(|e| e.to_string())?;
            let mut to = FpMatrix::zeros(p, obj.dim(), module.dim());
            let (mut src, mut dst) = (0, 0);
            for &a in parts {
                if a < m {
                    for l in 0..a {
                        to.set(dst + l, src + l, 1);
                    }
                    dst += a;
                }
                src += a;
            }
            let free = parts.len() - kept.len();
            Ok(Module { obj, module, from: to.transpose(), to, free })
        }
        ModuleDef::Matrix(rows) => {
            let x = FpMatrix::from_rows(p, rows).map_err(|e| e.to_string())?;
            let module = RModule::new(ring, x).map_err(|e| e.to_string())?;
            let red = reduce(&module);
            let free = (module.dim() - red.obj.dim()) / m;
            Ok(Module { obj: red.obj, module, to: red.to.matrix().clone(), from: red.from.matrix().clone(), free })
        }
    }
}

fn pairs(terms: &[Term]) -> Vec<(i64, usize)> {
    terms.iter().map(|t| (t.coeff, t.exp)).collect()
}

fn build_map(env: &Env, a: &Module, b: &Module, def: &MapDef) -> std::result::Result<StMap, String> {
    let c = &env.cat;
    let s = |r: Result<StMap>| r.map_err(|e| e.to_string());
    let f = match def {
        MapDef::Mu(terms) if terms.is_empty() => c.zero(&a.obj, &b.obj),
        MapDef::Mu(terms) => {
            if a.obj.len() != 1 || b.obj.len() != 1 {
                return Err("mu(...) needs single-block modules; use blocks [[...]]".into());
            }
            s(c.from_entries(&a.obj, &b.obj, &[vec![pairs(terms)]]))?
        }
        MapDef::Blocks(rows) => {
            let entries: Vec<Vec<Vec<(i64, usize)>>> =
                rows.iter().map(|r| r.iter().map(|t| pairs(t)).collect()).collect();
            s(c.from_entries(&a.obj, &b.obj, &entries))?
        }
        MapDef::Matrix(rows) => {
            let mat = FpMatrix::from_rows(c.ring().p, rows).map_err(|e| e.to_string())?;
            let f = RMap::new(a.module.clone(), b.module.clone(), mat).map_err(|e| e.to_string())?;
            let reduced = b.to.mul(f.matrix()).and_then(|t| t.mul(&a.from)).map_err(|e| e.to_string())?;
            c.from_matrix(&a.obj, &b.obj, &reduced)
        }
        MapDef::Compose(names) => {
            let mut acc = env.maps[names.last().expect("two or more")].clone();
            for n in names.iter().rev().skip(1) {
                acc = s(c.compose(&env.maps[n], &acc))?;
            }
            acc
        }
        MapDef::Suspend(n, k) => Triangulated::shift(c, &env.maps[n], *k),
        MapDef::Identity => c.identity(&a.obj),
    };
    if f.src() != &a.obj || f.tgt() != &b.obj {
        return Err(format!("the definition gives a map {} -> {}, not {} -> {}", f.src(), f.tgt(), a.obj, b.obj));
    }
    Ok(f)
}

fn map_refs(def: &MapDef) -> Vec<&String> {
    match def {
        MapDef::Compose(ns) => ns.iter().collect(),
        MapDef::Suspend(n, _) => vec![n],
        _ => Vec::new(),
    }
}

/// Checks names and prerequisites of a command.
fn check_command(env: &Env, cmd: &Command, adams_seen: bool) -> std::result::Result<(), String> {
    let module = |n: &String| env.modules.contains_key(n).then_some(()).ok_or(format!("unknown module `{n}`"));
    let map = |n: &String| env.maps.contains_key(n).then_some(()).ok_or(format!("unknown map `{n}`"));
    let needs_adams = || adams_seen.then_some(()).ok_or("needs a preceding `adams` command".to_string());
    match cmd {
        Command::Sthom(a, b) => module(a).and(module(b)),
        Command::Cone(f) | Command::Fiber(f) => map(f),
        Command::Bracket(_, fs) | Command::Heller(fs) => fs.iter().try_for_each(map),
        Command::Nbracket(_, fs) => fs.iter().try_for_each(map),
        Command::Adams { module: m, gen, len } => {
            module(m)?;
            module(gen)?;
            if *len == 0 {
                return Err("resolution length must be positive".into());
            }
            Ok(())
        }
        Command::Page(r) => {
            needs_adams()?;
            if *r == 0 {
                return Err("pages start at r = 1".into());
            }
            Ok(())
        }
        Command::Dr { x, r, .. } | Command::Drforms { x, r, .. } => {
            needs_adams()?;
            map(x)?;
            let least = if matches!(cmd, Command::Dr { .. }) { 1 } else { 2 };
            if *r < least {
                return Err(format!("r must be at least {least}"));
            }
            Ok(())
        }
        Command::Sparse { gen, n, .. } => {
            module(gen)?;
            if *n == 0 {
                return Err("N must be positive".into());
            }
            Ok(())
        }
        Command::Propcheck(_) => Ok(()),
    }
}

type Commands = Vec<(usize, String, Command)>;

/// First pass: the ring, every declaration and every name.
fn load(stmts: &[Stmt]) -> std::result::Result<(Env, Commands), CliError> {
    let ring = match stmts.first() {
        Some(Stmt::Ring { line, p, m }) => Ring::new(*p, *m).map_err(|e| bad(*line, e.to_string()))?,
        Some(other) => return Err(bad(line_of(other), "the session must start with `ring p=<prime> m=<int>`")),
        None => return Err(bad(1, "empty session")),
    };
    let mut env = Env { cat: StMod::new(ring), modules: HashMap::new(), maps: HashMap::new(), order: Vec::new() };
    let mut cmds = Vec::new();
    let mut adams_seen = false;
    for st in &stmts[1..] {
        let line = line_of(st);
        let fresh = |env: &Env, n: &str| {
            if env.modules.contains_key(n) || env.maps.contains_key(n) {
                Err(bad(line, format!("`{n}` is already declared")))
            } else {
                Ok(())
            }
        };
        match st {
            Stmt::Ring { .. } => return Err(bad(line, "ring declared twice")),
            Stmt::Module { name, def, .. } => {
                fresh(&env, name)?;
                let m = build_module(&env.cat, def).map_err(|e| bad(line, e))?;
                env.modules.insert(name.clone(), m);
                env.order.push(name.clone());
            }
            Stmt::Map { name, src, tgt, def, .. } => {
                fresh(&env, name)?;
                for n in [src, tgt] {
                    if !env.modules.contains_key(n) {
                        return Err(bad(line, format!("unknown module `{n}`")));
                    }
                }
                if let Some(n) = map_refs(def).into_iter().find(|n| !env.maps.contains_key(*n)) {
                    return Err(bad(line, format!("unknown map `{n}`")));
                }
                let f = build_map(&env, &env.modules[src], &env.modules[tgt], def).map_err(|e| bad(line, e))?;
                env.maps.insert(name.clone(), f);
            }
            Stmt::Command { text, cmd, .. } => {
                check_command(&env, cmd, adams_seen).map_err(|e| bad(line, e))?;
                adams_seen |= matches!(cmd, Command::Adams { .. });
                cmds.push((line, text.clone(), cmd.clone()));
            }
        }
    }
    Ok((env, cmds))
}

/// Parses, validates and runs a session.
pub fn run_session(src: &str, opts: &Options) -> std::result::Result<Report, Failure> {
    let fail = |error| Failure { error, partial: None };
    let stmts = parse_session(src).map_err(fail)?;
    let (env, cmds) = load(&stmts).map_err(fail)?;
    let ring = env.cat.ring();
    let objects = env
        .order
        .iter()
        .map(|n| {
            let m = &env.modules[n];
            NamedObject { name: n.clone(), parts: m.obj.parts().to_vec(), free: m.free }
        })
        .collect();
    let mut report = Report { ring: RingInfo { p: ring.p, m: ring.m }, objects, results: Vec::new() };
    let mut adams = None;
    for (line, command, cmd) in cmds {
        match execute(&env, &mut adams, &cmd, opts) {
            Ok(output) => report.results.push(CmdOutput { line, command, output }),
            Err(e) => {
                let error = CliError::Engine { line, command, msg: e.to_string() };
                return Err(Failure { error, partial: Some(report) });
            }
        }
    }
    Ok(report)
}

// --- rendering of maps ---

fn mu_name(l: usize) -> String {
    match l {
        0 => "mu(1)".into(),
        1 => "mu(x)".into(),
        _ => format!("mu(x^{l})"),
    }
}

/// A polynomial in the `μ`s; coefficients above `p/2` print as negatives.
fn poly(p: u32, terms: impl Iterator<Item = (u32, usize)>) -> String {
    let mut s = String::new();
    for (c, l) in terms.filter(|t| t.0 != 0) {
        let (neg, mag) = if c > p / 2 { (true, p - c) } else { (false, c) };
        if s.is_empty() {
            if neg {
                s.push('-');
            }
        } else {
            s.push_str(if neg { " - " } else { " + " });
        }
        if mag != 1 {
            s.push_str(&mag.to_string());
        }
        s.push_str(&mu_name(l));
    }
    if s.is_empty() {
        "0".into()
    } else {
        s
    }
}

/// Single blocks print as a polynomial, larger objects as a block matrix
/// in the `blocks` input syntax.
fn map_text(c: &StMod, f: &StMap) -> String {
    let (a, b) = (f.src(), f.tgt());
    let p = c.ring().p;
    let m = c.ring().m;
    let entry = |j: usize, i: usize| poly(p, (0..m).map(|l| (c.entry(f, j, i, l), l)));
    if a.is_empty() || b.is_empty() {
        return "0".into();
    }
    if a.len() == 1 && b.len() == 1 {
        return entry(0, 0);
    }
    let rows: Vec<String> = (0..b.len())
        .map(|j| format!("[{}]", (0..a.len()).map(|i| entry(j, i)).collect::<Vec<_>>().join(", ")))
        .collect();
    format!("[{}]", rows.join(", "))
}

fn map_out(c: &StMod, f: &StMap) -> MapOut {
    MapOut { src: f.src().parts().to_vec(), tgt: f.tgt().parts().to_vec(), coords: f.coeffs().to_vec(), text: map_text(c, f) }
}

fn labels(c: &StMod, a: &Obj, b: &Obj) -> Vec<String> {
    (0..c.dim(a, b)).map(|k| c.label(a, b, k)).collect()
}

fn coords_text(c: &StMod, a: &Obj, b: &Obj, e: &[u32]) -> String {
    map_text(c, &c.map(a, b, e.to_vec()).expect("coordinates match the hom space"))
}

/// `flip` reads a set computed in the opposite category as stable maps.
fn bracket_out(c: &StMod, b: &BracketSet<Obj>, flip: bool) -> BracketOut {
    let (src, tgt) = if flip { (&b.tgt, &b.src) } else { (&b.src, &b.tgt) };
    BracketOut {
        src: src.parts().to_vec(),
        tgt: tgt.parts().to_vec(),
        definition: b.definition.clone(),
        j_sequence: b.j_sequence.clone(),
        basis_labels: labels(c, src, tgt),
        elements: b.elements.clone(),
        rendered: b.elements.iter().map(|e| coords_text(c, src, tgt, e)).collect(),
        indeterminacy_rank: b.indeterminacy.as_ref().map(Vec::len),
        empty_reason: b.empty_reason.map(|r| {
            match r {
                EmptyReason::LowerComposite => "lower composite is nonzero",
                EmptyReason::UpperComposite => "upper composite is nonzero",
                EmptyReason::NoFiller => "no filler exists",
            }
            .to_string()
        }),
    }
}

fn triangle_out(c: &StMod, t: &Triangle<StMap>) -> Output {
    Output::Triangle { f: map_out(c, &t.f), g: map_out(c, &t.g), h: map_out(c, &t.h) }
}

// --- commands ---

/// `(s, u)` of a class `x: P_s -> Σ^{-u} M`.
fn locate(c: &StMod, a: &Adams, x: &StMap, s: Option<usize>) -> Result<(usize, i32)> {
    let s = match s {
        Some(s) => s,
        None => a.res.inj.iter().position(|i| i == x.src()).ok_or_else(|| {
            Error::Verification(format!("the source {} of the class is not a P_s of the resolution", x.src()))
        })?,
    };
    if a.res.inj.get(s) != Some(x.src()) {
        return Err(Error::Verification(format!("the class does not start at P_{s}")));
    }
    let op = Op(c);
    let u = [0, 1]
        .into_iter()
        .find(|&u| &op.shift_obj(&a.module, u) == x.tgt())
        .ok_or_else(|| Error::Verification(format!("the class does not land in M or a shift of it: {}", x.tgt())))?;
    Ok((s, u))
}

fn execute(env: &Env, adams: &mut Option<Adams>, cmd: &Command, opts: &Options) -> Result<Output> {
    let c = &env.cat;
    let cap = opts.max_enumerate;
    let op = Op(c);
    Ok(match cmd {
        Command::Sthom(a, b) => {
            let (a, b) = (env.obj(a), env.obj(b));
            Output::Sthom {
                src: a.parts().to_vec(),
                tgt: b.parts().to_vec(),
                dim: c.dim(a, b),
                basis_labels: labels(c, a, b),
            }
        }
        Command::Cone(f) => triangle_out(c, &c.cone(env.map(f))),
        Command::Fiber(f) => triangle_out(c, &c.fiber(env.map(f))?),
        Command::Bracket(d, [f3, f2, f1]) => {
            let b = bracket3(c, env.map(f3), env.map(f2), env.map(f1), *d, cap)?;
            Output::Bracket { bracket: bracket_out(c, &b, false) }
        }
        Command::Nbracket(js, names) => {
            let maps: Vec<StMap> = names.iter().map(|n| env.map(n).clone()).collect();
            let b = higher_bracket(c, &maps, js.as_deref(), cap)?;
            Output::Bracket { bracket: bracket_out(c, &b, false) }
        }
        Command::Adams { module, gen, len } => {
            let m = env.obj(module).clone();
            let class = ProjectiveClass::new(c, env.obj(gen).clone());
            let res = ghost_resolution(c, &class, &m, *len)?;
            let stages = (0..res.len())
                .map(|s| {
                    Ok(ResolutionStage {
                        s,
                        y: res.y[s].parts().to_vec(),
                        p_obj: res.inj[s].parts().to_vec(),
                        p: map_out(c, &res.p[s]),
                        delta: map_out(c, &res.delta[s]),
                        d1: if s + 1 < res.len() { Some(map_out(c, &res.d1(&op, s)?)) } else { None },
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            let out = Output::Adams {
                module: m.parts().to_vec(),
                generator: class.generator.parts().to_vec(),
                period: class.period,
                stages,
            };
            *adams = Some(Adams { module: m, res });
            out
        }
        Command::Page(r) => {
            let a = adams.as_ref().expect("checked when loading");
            let ss = SpectralSequence::new(&op, &a.res, a.module.clone());
            let len = a.res.len();
            if *r > len {
                return Err(Error::ResolutionTooShort { needed: *r, have: len });
            }
            let mut entries = Vec::new();
            for s in 0..=len - r {
                for u in -1..=1 {
                    entries.push(ss.entry(s, u, *r)?);
                }
            }
            Output::Page { r: *r, entries }
        }
        Command::Dr { x, r, s } => {
            let a = adams.as_ref().expect("checked when loading");
            let x = env.map(x);
            let (s, u) = locate(c, a, x, *s)?;
            let ss = SpectralSequence::new(&op, &a.res, a.module.clone());
            let set = ss.dr_set(s, u, x, *r, cap)?;
            let normalized = set
                .elements
                .iter()
                .map(|e| {
                    let f = c.map(&set.tgt, &set.src, e.clone())?;
                    Ok(map_out(c, &Triangulated::shift(c, &f, u - 1)))
                })
                .collect::<Result<Vec<_>>>()?;
            Output::Dr { s, u, r: *r, set: bracket_out(c, &set, true), normalized }
        }
        Command::Drforms { x, r, s } => {
            let a = adams.as_ref().expect("checked when loading");
            let x = env.map(x);
            let (s, u) = locate(c, a, x, *s)?;
            let ss = SpectralSequence::new(&op, &a.res, a.module.clone());
            let f = dr_bracket_forms(&ss, s, u, x, *r, cap)?;
            let filtered = f
                .w
                .as_ref()
                .map(|w| w.elements.iter().map(|e| coords_text(c, &f.dr.tgt, &f.dr.src, e)).collect())
                .unwrap_or_default();
            let d2 = f.d2.as_ref().map(|d| D2Out {
                lift_form: bracket_out(c, &d.lift_form, true),
                composed_form: bracket_out(c, &d.composed_form, true),
                middle: bracket_out(c, &d.middle, true),
                outer: bracket_out(c, &d.outer, true),
                dr_in_middle: d.dr_in_middle,
                middle_in_outer: d.middle_in_outer,
                middle_proper: d.middle_proper,
                outer_proper: d.outer_proper,
            });
            Output::Drforms {
                s,
                u,
                r: *r,
                dr: bracket_out(c, &f.dr, true),
                full: bracket_out(c, &f.full, true),
                restricted: bracket_out(c, &f.restricted, true),
                filtered,
                d2,
                full_equal: f.full_equal,
                restricted_equal: f.restricted_equal,
                filtered_equal: f.w_equal,
            }
        }
        Command::Heller([f, g, h]) => {
            let t = Triangle { f: env.map(f).clone(), g: env.map(g).clone(), h: env.map(h).clone() };
            let v = heller_check(c, &t, &test_objects(c), cap)?;
            Output::Heller {
                distinguished: v.distinguished,
                exactness_failure: v.exactness_failure.map(|e| {
                    let defect = e.defect.map_or("composite is nonzero".to_string(), |d| format!("defect {d}"));
                    format!("T({}, -) at {:?}: {defect}", e.test_object, e.spot)
                }),
                contains_identity: v.contains_identity,
                bracket: v.bracket.as_ref().map(|b| bracket_out(c, b, false)),
            }
        }
        Command::Sparse { gen, n, window } => {
            let r = sparse_check(c, env.obj(gen), *n, *window);
            Output::Sparse {
                generator: r.generator.parts().to_vec(),
                n: r.n,
                degrees: r.degrees,
                nonzero: r.nonzero,
                sparse: r.sparse,
            }
        }
        Command::Propcheck(cases) => {
            Output::Propcheck { seed: opts.seed, cases: *cases, lines: propcheck(opts.seed, *cases, cap) }
        }
    })
}

// --- randomized checks ---

const RINGS: [(u32, usize); 6] = [(2, 2), (2, 3), (2, 4), (3, 2), (3, 3), (3, 4)];

/// `Some(nonempty)` on success, `None` on a counterexample.
type Check = Result<Option<bool>>;

fn definitions_agree(c: &StMod, m: &[StMap], cap: usize) -> Check {
    let fc = bracket3(c, &m[0], &m[1], &m[2], Defn::Fc, cap)?;
    for d in [Defn::Cc, Defn::Ff] {
        if bracket3(c, &m[0], &m[1], &m[2], d, cap)?.elements != fc.elements {
            return Ok(None);
        }
    }
    Ok(Some(!fc.is_empty()))
}

fn is_coset(c: &StMod, m: &[StMap], cap: usize) -> Check {
    let b = bracket3(c, &m[0], &m[1], &m[2], Defn::Fc, cap)?;
    match &b.indeterminacy {
        _ if b.is_empty() => Ok(Some(false)),
        Some(basis) => Ok(b.is_coset_of(c.ring().p, basis)?.then_some(true)),
        None => Ok(None),
    }
}

fn suspension_law(c: &StMod, m: &[StMap], cap: usize) -> Check {
    let b = bracket3(c, &m[0], &m[1], &m[2], Defn::Fc, cap)?;
    let sb = bracket3(c, &c.suspend(&m[0]), &c.suspend(&m[1]), &c.suspend(&m[2]), Defn::Fc, cap)?;
    let mut want = b
        .elements
        .iter()
        .map(|e| Ok(c.coords(&c.neg(&c.suspend(&c.map(&b.src, &b.tgt, e.clone())?)))))
        .collect::<Result<Vec<_>>>()?;
    want.sort();
    Ok((sb.elements == want).then_some(!b.is_empty()))
}

fn heller_agrees(c: &StMod, t: &Triangle<StMap>, cap: usize) -> Check {
    let truth = c.is_distinguished(t, cap)?;
    let v = heller_check(c, t, &test_objects(c), cap)?;
    Ok((v.distinguished == truth).then_some(truth))
}

fn propcheck(seed: u64, cases: usize, cap: usize) -> Vec<PropcheckLine> {
    let names = ["cc = fc = ff", "bracket is a coset", "suspension law", "heller agrees with cones"];
    let mut lines: Vec<PropcheckLine> = names
        .iter()
        .map(|n| PropcheckLine { name: n.to_string(), passed: 0, failed: 0, nonempty: 0, skipped: 0 })
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..cases {
        let (p, m) = RINGS[rng.gen_range(0..RINGS.len())];
        let c = StMod::new(Ring::new(p, m).expect("listed rings are valid"));
        let chain = random_null_chain(&c, &mut rng, 3, 6);
        let (t, _) = random_triangle_candidate(&c, &mut rng);
        let checks = [
            definitions_agree(&c, &chain, cap),
            is_coset(&c, &chain, cap),
            suspension_law(&c, &chain, cap),
            heller_agrees(&c, &t, cap),
        ];
        for (line, check) in lines.iter_mut().zip(checks) {
            match check {
                Ok(Some(nonempty)) => {
                    line.passed += 1;
                    line.nonempty += usize::from(nonempty);
                }
                Ok(None) => line.failed += 1,
                Err(Error::EnumerationOverflow { .. }) => line.skipped += 1,
                Err(_) => line.failed += 1,
            }
        }
    }
    lines
}
