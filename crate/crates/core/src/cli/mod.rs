//! Session files: declarations of a ring, modules and maps, followed by
//! commands that each call one engine operation.
//!
//! ```text
//! ring p=2 m=4
//! module M = [2]
//! module P = [1,3]
//! map p: P -> M = blocks [[mu(x), mu(1)]]
//! sthom P M
//! adams M gen=K len=6
//! ```

mod exec;
mod parse;
mod render;

pub use exec::{run_session, Failure};
pub use parse::{parse_session, Stmt};
pub use render::render_text;

pub use parse::{Command, MapDef, ModuleDef, Term};

use serde::{Deserialize, Serialize};

use crate::adams::PageEntry;

#[derive(Clone, Debug)]
pub struct Options {
    pub max_enumerate: usize,
    pub seed: u64,
}

impl Default for Options {
    fn default() -> Self {
        Options { max_enumerate: crate::toda::DEFAULT_CAP, seed: 0 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CliError {
    /// malformed line or failed validation; exit code 2
    Parse { line: usize, col: usize, msg: String },
    /// an engine operation failed; exit code 1
    Engine { line: usize, command: String, msg: String },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse { .. } => 2,
            CliError::Engine { .. } => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Parse { line, col, msg } => write!(f, "error at {line}:{col}: {msg}"),
            CliError::Engine { line, command, msg } => write!(f, "line {line}: `{command}` failed: {msg}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub ring: RingInfo,
    pub objects: Vec<NamedObject>,
    pub results: Vec<CmdOutput>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RingInfo {
    pub p: u32,
    pub m: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NamedObject {
    pub name: String,
    /// canonical non-projective parts
    pub parts: Vec<usize>,
    /// projective summands dropped from the declaration
    pub free: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CmdOutput {
    pub line: usize,
    pub command: String,
    pub output: Output,
}

/// A stable map, with its coordinates and their rendering.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapOut {
    pub src: Vec<usize>,
    pub tgt: Vec<usize>,
    pub coords: Vec<u32>,
    pub text: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BracketOut {
    pub src: Vec<usize>,
    pub tgt: Vec<usize>,
    pub definition: String,
    pub j_sequence: Vec<usize>,
    pub basis_labels: Vec<String>,
    pub elements: Vec<Vec<u32>>,
    pub rendered: Vec<String>,
    pub indeterminacy_rank: Option<usize>,
    pub empty_reason: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResolutionStage {
    pub s: usize,
    pub y: Vec<usize>,
    pub p_obj: Vec<usize>,
    /// `P_s -> Y_s`
    pub p: MapOut,
    /// `Y_{s+1} -> P_s`, from the fiber of `p_s`
    pub delta: MapOut,
    /// `d_1`
    pub d1: Option<MapOut>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct D2Out {
    pub lift_form: BracketOut,
    pub composed_form: BracketOut,
    pub middle: BracketOut,
    pub outer: BracketOut,
    pub dr_in_middle: bool,
    pub middle_in_outer: bool,
    pub middle_proper: bool,
    pub outer_proper: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PropcheckLine {
    pub name: String,
    pub passed: usize,
    pub failed: usize,
    pub nonempty: usize,
    pub skipped: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Output {
    Sthom { src: Vec<usize>, tgt: Vec<usize>, dim: usize, basis_labels: Vec<String> },
    Triangle { f: MapOut, g: MapOut, h: MapOut },
    Bracket { bracket: BracketOut },
    Adams { module: Vec<usize>, generator: Vec<usize>, period: usize, stages: Vec<ResolutionStage> },
    Page { r: usize, entries: Vec<PageEntry> },
    Dr {
        s: usize,
        u: i32,
        r: usize,
        set: BracketOut,
        /// the elements moved by `Σ^{u-1}` so that they land in the module
        normalized: Vec<MapOut>,
    },
    Drforms {
        s: usize,
        u: i32,
        r: usize,
        dr: BracketOut,
        full: BracketOut,
        restricted: BracketOut,
        filtered: Vec<String>,
        d2: Option<D2Out>,
        full_equal: bool,
        restricted_equal: bool,
        filtered_equal: bool,
    },
    Heller {
        distinguished: bool,
        exactness_failure: Option<String>,
        contains_identity: bool,
        bracket: Option<BracketOut>,
    },
    Sparse { generator: Vec<usize>, n: usize, degrees: Vec<(i32, usize)>, nonzero: Vec<i32>, sparse: bool },
    Propcheck { seed: u64, cases: usize, lines: Vec<PropcheckLine> },
}
