//! Plain-text tables for a report. Everything printed is read from the
//! report itself, so a JSON document renders to the same text.

use std::fmt::Write;

use super::{BracketOut, MapOut, Output, Report};

fn obj(parts: &[usize]) -> String {
    format!("[{}]", parts.iter().map(|a| a.to_string()).collect::<Vec<_>>().join(","))
}

fn coords(v: &[u32]) -> String {
    format!("({})", v.iter().map(|a| a.to_string()).collect::<Vec<_>>().join(" "))
}

fn flag(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn map_line(out: &mut String, name: &str, f: &MapOut) {
    let _ = writeln!(out, "  {name}: {} -> {} = {}  {}", obj(&f.src), obj(&f.tgt), f.text, coords(&f.coords));
}

fn bracket(out: &mut String, title: &str, b: &BracketOut) {
    let mut head = format!("  {title}: T({}, {})", obj(&b.src), obj(&b.tgt));
    if !b.definition.is_empty() {
        let _ = write!(head, " [{}]", b.definition);
    }
    if !b.j_sequence.is_empty() {
        let _ = write!(head, " j={:?}", b.j_sequence);
    }
    let _ = writeln!(out, "{head}");
    let _ = writeln!(out, "    basis: {}", if b.basis_labels.is_empty() { "-".into() } else { b.basis_labels.join(", ") });
    if b.elements.is_empty() {
        let why = b.empty_reason.as_deref().unwrap_or("empty");
        let _ = writeln!(out, "    elements: none ({why})");
    } else {
        let _ = writeln!(out, "    elements ({}):", b.elements.len());
        for (e, r) in b.elements.iter().zip(&b.rendered) {
            let _ = writeln!(out, "      {}  {r}", coords(e));
        }
    }
    if let Some(k) = b.indeterminacy_rank {
        let _ = writeln!(out, "    indeterminacy rank: {k}");
    }
}

fn output(out: &mut String, o: &Output) {
    match o {
        Output::Sthom { src, tgt, dim, basis_labels } => {
            let _ = writeln!(out, "  T({}, {}) has dimension {dim}", obj(src), obj(tgt));
            if !basis_labels.is_empty() {
                let _ = writeln!(out, "  basis: {}", basis_labels.join(", "));
            }
        }
        Output::Triangle { f, g, h } => {
            map_line(out, "f", f);
            map_line(out, "g", g);
            map_line(out, "h", h);
        }
        Output::Bracket { bracket: b } => bracket(out, "bracket", b),
        Output::Adams { module, generator, period, stages } => {
            let _ = writeln!(out, "  resolving {} by the ghost class of {} (period {period})", obj(module), obj(generator));
            for st in stages {
                let _ = writeln!(out, "  s={}: Y = {}, P = {}", st.s, obj(&st.y), obj(&st.p_obj));
                map_line(out, "  p", &st.p);
                map_line(out, "  delta", &st.delta);
                if let Some(d) = &st.d1 {
                    map_line(out, "  d1", d);
                }
            }
        }
        Output::Page { r, entries } => {
            let _ = writeln!(out, "  E_{r}:   s   u  E_1  Z  B  dim");
            for e in entries {
                let _ = writeln!(
                    out,
                    "        {:>3} {:>3} {:>4} {:>2} {:>2} {:>4}",
                    e.s, e.u, e.e1_dim, e.cycles_dim, e.boundaries_dim, e.dim
                );
            }
        }
        Output::Dr { s, u, r, set, normalized } => {
            bracket(out, &format!("d_{r} on (s,u) = ({s},{u})"), set);
            if !normalized.is_empty() {
                let _ = writeln!(out, "    into the module:");
                for f in normalized {
                    let _ = writeln!(out, "      {} -> {} = {}", obj(&f.src), obj(&f.tgt), f.text);
                }
            }
        }
        Output::Drforms {
            s,
            u,
            r,
            dr,
            full,
            restricted,
            filtered,
            d2,
            full_equal,
            restricted_equal,
            filtered_equal,
        } => {
            let _ = writeln!(out, "  d_{r} on (s,u) = ({s},{u})");
            bracket(out, "(a) exact couple", dr);
            bracket(out, "(b) full bracket", full);
            bracket(out, "(c) restricted bracket", restricted);
            let _ = writeln!(out, "  (e) filtered object: {{{}}}", filtered.join(", "));
            if let Some(d) = d2 {
                bracket(out, "(d) lift form", &d.lift_form);
                bracket(out, "(d) composed form", &d.composed_form);
                bracket(out, "(d) middle", &d.middle);
                bracket(out, "(d) outer", &d.outer);
                let _ = writeln!(
                    out,
                    "  d_2 in middle: {}, middle in outer: {}, middle proper: {}, outer proper: {}",
                    flag(d.dr_in_middle),
                    flag(d.middle_in_outer),
                    flag(d.middle_proper),
                    flag(d.outer_proper)
                );
                let _ = writeln!(out, "  proper inclusion: {}", flag(d.middle_proper || d.outer_proper));
            }
            let _ = writeln!(
                out,
                "  equal to (a): full {}, restricted {}, filtered {}",
                flag(*full_equal),
                flag(*restricted_equal),
                flag(*filtered_equal)
            );
        }
        Output::Heller { distinguished, exactness_failure, contains_identity, bracket: b } => {
            let _ = writeln!(out, "  distinguished: {}", flag(*distinguished));
            match exactness_failure {
                Some(e) => {
                    let _ = writeln!(out, "  exactness fails: {e}");
                }
                None => {
                    let _ = writeln!(out, "  exact on every test object");
                }
            }
            let _ = writeln!(out, "  identity in <h, g, f>: {}", flag(*contains_identity));
            if let Some(b) = b {
                bracket(out, "<h, g, f>", b);
            }
        }
        Output::Sparse { generator, n, degrees, nonzero, sparse } => {
            let degs: Vec<String> = degrees.iter().map(|(d, k)| format!("{d}:{k}")).collect();
            let _ = writeln!(out, "  T(Σ^d {}, {}) by degree: {}", obj(generator), obj(generator), degs.join(" "));
            let _ = writeln!(out, "  nonzero degrees: {nonzero:?}");
            let _ = writeln!(out, "  {n}-sparse: {}", flag(*sparse));
        }
        Output::Propcheck { seed, cases, lines } => {
            let _ = writeln!(out, "  seed {seed}, {cases} cases");
            for l in lines {
                let _ = writeln!(
                    out,
                    "  {:<26} passed {:>4}  failed {:>3}  nonempty {:>4}  skipped {:>3}",
                    l.name, l.passed, l.failed, l.nonempty, l.skipped
                );
            }
        }
    }
}

pub fn render_text(r: &Report) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "ring p={} m={}", r.ring.p, r.ring.m);
    for o in &r.objects {
        let free = if o.free > 0 { format!("  (+{} free)", o.free) } else { String::new() };
        let _ = writeln!(out, "module {} = {}{free}", o.name, obj(&o.parts));
    }
    for c in &r.results {
        let _ = writeln!(out, "\n[line {}] {}", c.line, c.command);
        output(&mut out, &c.output);
    }
    out
}
