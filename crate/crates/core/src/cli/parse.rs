//! Line-oriented session grammar.

use super::CliError;
use crate::toda::Defn;

/// `coeff * mu(x^exp)`
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Term {
    pub coeff: i64,
    pub exp: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ModuleDef {
    Parts(Vec<usize>),
    /// the action of `x`, as rows
    Matrix(Vec<Vec<i64>>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MapDef {
    Mu(Vec<Term>),
    /// `blocks[j][i]`: entry from source block `i` to target block `j`
    Blocks(Vec<Vec<Vec<Term>>>),
    /// an R-linear matrix in the declared bases, as rows
    Matrix(Vec<Vec<i64>>),
    /// `compose g f` is `g ∘ f`
    Compose(Vec<String>),
    Suspend(String, i32),
    Identity,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Command {
    Sthom(String, String),
    Cone(String),
    Fiber(String),
    Bracket(Defn, [String; 3]),
    Nbracket(Option<Vec<usize>>, Vec<String>),
    Adams { module: String, gen: String, len: usize },
    Page(usize),
    /// `s` defaults to the first stage whose `P_s` is the source of `x`
    Dr { x: String, r: usize, s: Option<usize> },
    Drforms { x: String, r: usize, s: Option<usize> },
    Heller([String; 3]),
    Sparse { gen: String, n: usize, window: usize },
    Propcheck(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Stmt {
    Ring { line: usize, p: u32, m: usize },
    Module { line: usize, name: String, def: ModuleDef },
    Map { line: usize, name: String, src: String, tgt: String, def: MapDef },
    Command { line: usize, text: String, cmd: Command },
}

fn err(line: usize, col: usize, msg: impl Into<String>) -> CliError {
    CliError::Parse { line, col, msg: msg.into() }
}

/// Whitespace-separated words with their 1-based columns.
fn words(s: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in s.char_indices() {
        match (ch.is_whitespace(), start) {
            (true, Some(b)) => {
                out.push((b, &s[b..i]));
                start = None;
            }
            (false, None) => start = Some(i),
            _ => {}
        }
    }
    if let Some(b) = start {
        out.push((b, &s[b..]));
    }
    out.into_iter().map(|(b, w)| (s[..b].chars().count() + 1, w)).collect()
}

fn is_name(s: &str) -> bool {
    let mut chars = s.chars();
    chars.next().is_some_and(|c| c.is_alphabetic() || c == '_')
        && chars.all(|c| c.is_alphanumeric() || c == '_' || c == '\'')
}

/// Splits at `sep` outside brackets and parentheses.
fn split_top(s: &str, sep: char) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, ch) in s.char_indices() {
        match ch {
            '[' | '(' => depth += 1,
            ']' | ')' => depth -= 1,
            c if c == sep && depth == 0 => {
                out.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(&s[start..]);
    out
}

fn parse_mu_arg(a: &str) -> Option<usize> {
    match a {
        "1" => Some(0),
        "x" => Some(1),
        _ => a.strip_prefix("x^")?.parse().ok(),
    }
}

/// `0`, or a signed sum of `[c][*]mu(1|x|x^k)`.
fn parse_terms(s: &str) -> Result<Vec<Term>, String> {
    let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if s == "0" {
        return Ok(Vec::new());
    }
    let mut pieces = Vec::new();
    let mut cur = String::new();
    let mut depth = 0;
    for ch in s.chars() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            '+' | '-' if depth == 0 && !cur.is_empty() => pieces.push(std::mem::take(&mut cur)),
            _ => {}
        }
        cur.push(ch);
    }
    pieces.push(cur);
    let mut out = Vec::new();
    for piece in pieces {
        let (sign, body) = match piece.strip_prefix('-') {
            Some(b) => (-1, b),
            None => (1, piece.strip_prefix('+').unwrap_or(&piece)),
        };
        let k = body.find("mu(").ok_or_else(|| format!("expected mu(...) in `{piece}`"))?;
        let coeff = match body[..k].trim_end_matches('*') {
            "" => 1,
            c => c.parse::<i64>().map_err(|_| format!("bad coefficient `{c}`"))?,
        };
        let arg = body[k + 3..].strip_suffix(')').ok_or_else(|| format!("unclosed mu( in `{piece}`"))?;
        let exp = parse_mu_arg(arg).ok_or_else(|| format!("bad mu argument `{arg}`"))?;
        out.push(Term { coeff: sign * coeff, exp });
    }
    Ok(out)
}

fn parse_blocks(s: &str) -> Result<Vec<Vec<Vec<Term>>>, String> {
    let s = s.trim();
    let inner = s
        .strip_prefix('[')
        .and_then(|t| t.strip_suffix(']'))
        .ok_or("blocks must be written [[...], ...]")?;
    let mut rows = Vec::new();
    for row in split_top(inner, ',') {
        let row = row.trim();
        let cells = row.strip_prefix('[').and_then(|t| t.strip_suffix(']')).ok_or("each block row is [...]")?;
        let cells = if cells.trim().is_empty() { Vec::new() } else { split_top(cells, ',') };
        rows.push(cells.into_iter().map(parse_terms).collect::<Result<Vec<_>, _>>()?);
    }
    Ok(rows)
}

fn number<T: std::str::FromStr>(line: usize, (col, w): (usize, &str), what: &str) -> Result<T, CliError> {
    w.parse().map_err(|_| err(line, col, format!("expected {what}, found `{w}`")))
}

fn key_value<'a>(line: usize, (col, w): (usize, &'a str), key: &str) -> Result<(usize, &'a str), CliError> {
    w.strip_prefix(key)
        .and_then(|r| r.strip_prefix('='))
        .map(|v| (col + key.len() + 1, v))
        .ok_or_else(|| err(line, col, format!("expected {key}=<value>, found `{w}`")))
}

fn name(line: usize, (col, w): (usize, &str)) -> Result<String, CliError> {
    if is_name(w) {
        Ok(w.to_string())
    } else {
        Err(err(line, col, format!("`{w}` is not a valid name")))
    }
}

fn arity(line: usize, ws: &[(usize, &str)], n: usize, usage: &str) -> Result<(), CliError> {
    if ws.len() != n + 1 {
        let col = ws.get(n + 1).map_or(ws[0].0, |w| w.0);
        return Err(err(line, col, format!("usage: {usage}")));
    }
    Ok(())
}

fn optional_s(line: usize, ws: &[(usize, &str)], at: usize) -> Result<Option<usize>, CliError> {
    match ws.get(at) {
        None => Ok(None),
        Some(&w) => number(line, key_value(line, w, "s")?, "a filtration degree").map(Some),
    }
}

fn parse_command(line: usize, ws: &[(usize, &str)]) -> Result<Command, CliError> {
    let (col, head) = ws[0];
    let names = |from: usize| ws[from..].iter().map(|&w| name(line, w)).collect::<Result<Vec<_>, _>>();
    Ok(match head {
        "sthom" => {
            arity(line, ws, 2, "sthom A B")?;
            Command::Sthom(name(line, ws[1])?, name(line, ws[2])?)
        }
        "cone" | "fiber" => {
            arity(line, ws, 1, &format!("{head} f"))?;
            let f = name(line, ws[1])?;
            if head == "cone" {
                Command::Cone(f)
            } else {
                Command::Fiber(f)
            }
        }
        "bracket" => {
            arity(line, ws, 4, "bracket <cc|fc|ff> f3 f2 f1")?;
            let defn = ws[1].1.parse::<Defn>().map_err(|e| err(line, ws[1].0, e.to_string()))?;
            let n = names(2)?;
            Command::Bracket(defn, [n[0].clone(), n[1].clone(), n[2].clone()])
        }
        "nbracket" => {
            let (js, from) = match ws.get(1) {
                Some(&(c, w)) if w.starts_with('[') => {
                    let js: Vec<usize> =
                        serde_json::from_str(w).map_err(|_| err(line, c, format!("bad j-sequence `{w}`")))?;
                    (Some(js), 2)
                }
                _ => (None, 1),
            };
            let maps = names(from)?;
            if maps.len() < 2 {
                return Err(err(line, col, "usage: nbracket [j-sequence] fn ... f1"));
            }
            Command::Nbracket(js, maps)
        }
        "adams" => {
            arity(line, ws, 3, "adams M gen=<G> len=<n>")?;
            let (gc, g) = key_value(line, ws[2], "gen")?;
            Command::Adams {
                module: name(line, ws[1])?,
                gen: name(line, (gc, g))?,
                len: number(line, key_value(line, ws[3], "len")?, "a length")?,
            }
        }
        "page" => {
            arity(line, ws, 1, "page r")?;
            Command::Page(number(line, ws[1], "a page number")?)
        }
        "dr" | "drforms" => {
            if ws.len() != 3 && ws.len() != 4 {
                return Err(err(line, col, format!("usage: {head} x r [s=<s>]")));
            }
            let x = name(line, ws[1])?;
            let r = number(line, ws[2], "a page number")?;
            let s = optional_s(line, ws, 3)?;
            if head == "dr" {
                Command::Dr { x, r, s }
            } else {
                Command::Drforms { x, r, s }
            }
        }
        "heller" => {
            arity(line, ws, 3, "heller f g h")?;
            let n = names(1)?;
            Command::Heller([n[0].clone(), n[1].clone(), n[2].clone()])
        }
        "sparse" => {
            arity(line, ws, 3, "sparse G N window")?;
            Command::Sparse {
                gen: name(line, ws[1])?,
                n: number(line, ws[2], "a positive integer")?,
                window: number(line, ws[3], "a window size")?,
            }
        }
        "propcheck" => {
            arity(line, ws, 1, "propcheck <cases>")?;
            Command::Propcheck(number(line, ws[1], "a case count")?)
        }
        _ => return Err(err(line, col, format!("unknown command `{head}`"))),
    })
}

fn parse_module(line: usize, rest: &str, col0: usize) -> Result<Stmt, CliError> {
    let (lhs, rhs) = rest.split_once('=').ok_or_else(|| err(line, col0, "usage: module <Name> = [parts]"))?;
    let nm = name(line, (col0, lhs.trim()))?;
    let rhs = rhs.trim();
    let rcol = col0 + rest.find('=').unwrap() + 2;
    let def = if let Some(m) = rhs.strip_prefix("matrix") {
        ModuleDef::Matrix(serde_json::from_str(m.trim()).map_err(|_| err(line, rcol, "bad matrix literal"))?)
    } else {
        ModuleDef::Parts(serde_json::from_str(rhs).map_err(|_| err(line, rcol, "expected a list of parts like [2,1]"))?)
    };
    Ok(Stmt::Module { line, name: nm, def })
}

fn parse_map(line: usize, rest: &str, col0: usize) -> Result<Stmt, CliError> {
    let usage = "usage: map <f>: <A> -> <B> = <definition>";
    let (head, def) = rest.split_once('=').ok_or_else(|| err(line, col0, usage))?;
    let (nm, objs) = head.split_once(':').ok_or_else(|| err(line, col0, usage))?;
    let (a, b) = objs.split_once("->").ok_or_else(|| err(line, col0, usage))?;
    let dcol = col0 + rest.find('=').unwrap() + 2;
    let def = def.trim();
    let bad = |m: String| err(line, dcol, m);
    let (kw, body) = def.split_once(char::is_whitespace).unwrap_or((def, ""));
    let body = body.trim();
    let parsed = match kw {
        "blocks" => MapDef::Blocks(parse_blocks(body).map_err(bad)?),
        "matrix" => MapDef::Matrix(serde_json::from_str(body).map_err(|_| bad("bad matrix literal".into()))?),
        "compose" => {
            let ns: Vec<String> = body.split_whitespace().map(String::from).collect();
            if ns.len() < 2 || !ns.iter().all(|n| is_name(n)) {
                return Err(bad("usage: compose g f ...".into()));
            }
            MapDef::Compose(ns)
        }
        "suspend" => {
            let ws: Vec<&str> = body.split_whitespace().collect();
            let k = match ws.get(1) {
                None => 1,
                Some(k) => k.parse().map_err(|_| bad(format!("bad suspension count `{k}`")))?,
            };
            match ws.first() {
                Some(f) if is_name(f) && ws.len() <= 2 => MapDef::Suspend(f.to_string(), k),
                _ => return Err(bad("usage: suspend f [k]".into())),
            }
        }
        "identity" if body.is_empty() => MapDef::Identity,
        _ => MapDef::Mu(parse_terms(def).map_err(bad)?),
    };
    Ok(Stmt::Map {
        line,
        name: name(line, (col0, nm.trim()))?,
        src: name(line, (col0, a.trim()))?,
        tgt: name(line, (col0, b.trim()))?,
        def: parsed,
    })
}

/// Parses a whole session; `#` starts a comment.
pub fn parse_session(src: &str) -> Result<Vec<Stmt>, CliError> {
    let mut out = Vec::new();
    for (i, raw) in src.lines().enumerate() {
        let line = i + 1;
        let text = raw.split('#').next().unwrap_or("").trim_end();
        let ws = words(text);
        let Some(&(col, head)) = ws.first() else { continue };
        let rest_at = text.find(head).unwrap() + head.len();
        let rest = &text[rest_at..];
        let rest_col = col + head.chars().count() + 1;
        match head {
            "ring" => {
                arity(line, &ws, 2, "ring p=<prime> m=<int>")?;
                let p = number(line, key_value(line, ws[1], "p")?, "a prime")?;
                let m = number(line, key_value(line, ws[2], "m")?, "an exponent")?;
                out.push(Stmt::Ring { line, p, m });
            }
            "module" => out.push(parse_module(line, rest.trim_start(), rest_col)?),
            "map" => out.push(parse_map(line, rest.trim_start(), rest_col)?),
            _ => out.push(Stmt::Command { line, text: text.trim().to_string(), cmd: parse_command(line, &ws)? }),
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn terms() {
        assert_eq!(parse_terms("mu(x)").unwrap(), vec![Term { coeff: 1, exp: 1 }]);
        assert_eq!(
            parse_terms("-mu(1) + 2*mu(x^3)").unwrap(),
            vec![Term { coeff: -1, exp: 0 }, Term { coeff: 2, exp: 3 }]
        );
        assert!(parse_terms("0").unwrap().is_empty());
        assert!(parse_terms("mu(y)").is_err());
    }

    #[test]
    fn blocks() {
        let b = parse_blocks("[[0, mu(1)], [mu(x^2), 0]]").unwrap();
        assert_eq!(b.len(), 2);
        assert_eq!(b[1][0], vec![Term { coeff: 1, exp: 2 }]);
        assert!(b[0][0].is_empty());
    }

    #[test]
    fn session() {
        let s = "ring p=2 m=4\nmodule M = [2]  # comment\nmap f: M -> M = mu(x)\nnbracket [0,1] f f f f\ndr f 2 s=1\n";
        let st = parse_session(s).unwrap();
        assert_eq!(st.len(), 5);
        assert_eq!(st[0], Stmt::Ring { line: 1, p: 2, m: 4 });
        assert!(matches!(&st[3], Stmt::Command { cmd: Command::Nbracket(Some(j), m), .. } if j == &[0, 1] && m.len() == 4));
        assert!(matches!(&st[4], Stmt::Command { cmd: Command::Dr { s: Some(1), r: 2, .. }, .. }));
    }

    #[test]
    fn errors_have_positions() {
        let e = parse_session("ring p=2 m=4\nbracket xx f g h").unwrap_err();
        assert_eq!(e, CliError::Parse { line: 2, col: 9, msg: "unknown bracket definition `xx`".into() });
        let e = parse_session("frobnicate a").unwrap_err();
        assert!(matches!(e, CliError::Parse { line: 1, col: 1, .. }));
    }
}
