use gsc_core::link::MetricLinkGraph;
use serde::Serialize;

use crate::instance::BackendDesc;

pub const EXACT: &str = "exact";

pub fn radius_tag(r: usize) -> String {
    format!("radius {r}")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum Verdict {
    #[serde(rename = "pass")]
    Pass,
    #[serde(rename = "fail")]
    Fail,
    #[serde(rename = "inconclusive")]
    Inconclusive,
    #[serde(rename = "not attempted")]
    NotAttempted,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Inconclusive => "inconclusive",
            Verdict::NotAttempted => "not attempted",
        }
    }

    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Pass | Verdict::NotAttempted => 0,
            Verdict::Fail => 1,
            Verdict::Inconclusive => 2,
        }
    }

    /// Fail beats inconclusive beats pass; skipped sections do not count.
    pub fn combine(verdicts: impl IntoIterator<Item = Verdict>) -> Verdict {
        let mut out = Verdict::Pass;
        for v in verdicts {
            out = match (out, v) {
                (Verdict::Fail, _) | (_, Verdict::Fail) => Verdict::Fail,
                (Verdict::Inconclusive, _) | (_, Verdict::Inconclusive) => Verdict::Inconclusive,
                _ => Verdict::Pass,
            };
        }
        out
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Section<T> {
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certification: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub data: Option<T>,
}

impl<T> Section<T> {
    pub fn skipped(note: impl Into<String>) -> Self {
        Section { verdict: Verdict::NotAttempted, note: Some(note.into()), certification: None, data: None }
    }

    pub fn done(verdict: Verdict, certification: impl Into<String>, data: T) -> Self {
        Section { verdict, note: None, certification: Some(certification.into()), data: Some(data) }
    }

    pub fn failed(verdict: Verdict, stage: &str, err: impl std::fmt::Display) -> Self {
        Section { verdict, note: Some(format!("{stage}: {err}")), certification: None, data: None }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Tool {
    pub name: &'static str,
    pub version: &'static str,
}

#[derive(Clone, Debug, Serialize)]
pub struct InstanceEcho {
    pub backend: BackendDesc,
    pub family: Vec<String>,
    pub lambda: String,
    pub radius: Option<usize>,
    pub precision: u32,
}

#[derive(Clone, Debug, Serialize)]
pub struct MemberOut {
    pub word: String,
    pub root: String,
    pub exponent: u32,
    pub translation_length: usize,
    pub hyperbolic: bool,
    pub rf2: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct FamilyOut {
    pub members: Vec<MemberOut>,
    pub r_min: Option<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CancellationOut {
    pub l_max: Option<usize>,
    pub r_min: Option<usize>,
    pub lambda: String,
    /// `λ·R_min`, the strict upper bound for `l_max`.
    pub bound: Option<String>,
    pub witness: Option<String>,
    pub theta_c_over_pi: Option<String>,
    /// Comparison of `θ_c` with `π/3`.
    pub theta_c_vs_third: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct PolygonOut {
    pub member: usize,
    pub polygon_edges: usize,
    pub rotation_step: usize,
    pub rotation_order: u32,
    pub inner_ratio: String,
    pub outer_ratio: String,
    pub ribbon_avoids_slices: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ComplexOut {
    pub region_vertices: usize,
    pub region_edges: usize,
    pub region_depth: usize,
    pub cones: usize,
    pub cone_triangles: usize,
    /// Pairs of cone regions identified by a slice.
    pub identified_pairs: usize,
    pub euler_characteristic: i64,
    pub subdivision: &'static str,
    pub polygons: Vec<PolygonOut>,
}

#[derive(Clone, Debug, Serialize)]
pub struct GirthOut {
    pub x_lo: String,
    pub x_hi: String,
    pub at_lo_over_pi: Option<String>,
    pub at_hi_over_pi: Option<String>,
    pub cycle_edges: usize,
    pub certification: &'static str,
}

#[derive(Clone, Debug, Serialize)]
pub struct LinkOut {
    pub name: String,
    pub at: String,
    pub cones: usize,
    pub vertices: usize,
    pub edges: usize,
    pub structure: String,
    pub girth: Option<GirthOut>,
    pub passes: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct CircleOut {
    pub member: usize,
    pub edges: usize,
    pub length_over_pi: String,
    pub passes: bool,
    pub certification: &'static str,
}

#[derive(Clone, Debug, Serialize)]
pub struct LinksOut {
    pub k_centres: Vec<CircleOut>,
    pub apices: String,
    pub interior: Vec<LinkOut>,
    pub tree_vertices: Vec<LinkOut>,
    /// Interior links where three or more cones meet, glued by the
    /// transitive closure of pairwise slice identifications; worth a look
    /// by hand.
    pub multi_cone_interior: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct StabilizerOut {
    pub member: usize,
    pub point: String,
    pub kind: String,
    pub order: usize,
    pub interval: Option<(i64, i64)>,
    pub elements: Vec<String>,
    pub in_vertex_group: bool,
    pub verified: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct StabilizersOut {
    pub points: usize,
    pub nontrivial: usize,
    pub table: Vec<StabilizerOut>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ScwolCounts {
    pub vertices: usize,
    pub edges: usize,
    pub composable_pairs: usize,
    pub max_local_order: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct CogOut {
    pub centre: ScwolCounts,
    pub discs: Vec<ScwolCounts>,
    pub amalgam: ScwolCounts,
    pub fundamental_group_abelianization: String,
    pub matches_quotient: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct QuotientOut {
    pub generators: Vec<String>,
    pub relators: Vec<String>,
    pub presentation: String,
    pub abelianization: String,
    pub rank: usize,
    pub torsion: Vec<u64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub tool: Tool,
    pub command: String,
    pub verdict: Verdict,
    pub instance: InstanceEcho,
    pub warnings: Vec<String>,
    pub rotation_family: Section<FamilyOut>,
    pub small_cancellation: Section<CancellationOut>,
    pub complex: Section<ComplexOut>,
    pub links: Section<LinksOut>,
    pub stabilizers: Section<StabilizersOut>,
    pub complex_of_groups: Section<CogOut>,
    pub quotient: Section<QuotientOut>,
    /// Link graphs for DOT export, named as in `links`.
    #[serde(skip)]
    pub graphs: Vec<(String, MetricLinkGraph)>,
}

impl Report {
    pub fn section_verdicts(&self) -> [(&'static str, Verdict); 7] {
        [
            ("rotation family", self.rotation_family.verdict),
            ("small cancellation", self.small_cancellation.verdict),
            ("complex", self.complex.verdict),
            ("links", self.links.verdict),
            ("stabilizers", self.stabilizers.verdict),
            ("complex of groups", self.complex_of_groups.verdict),
            ("quotient", self.quotient.verdict),
        ]
    }
}
