use std::collections::BTreeSet;

use gsc_core::complex::{
    build_coned_off, build_polygonal_data, certified_region, compute_slice_gluings, required_radius, ComplexError, ConedComplex,
    StabilizerKind, SUBDIVISION,
};
use gsc_core::cx::{abelianization, backend_presentation, build_y_slices, cog_presentation, ComplexOfGroups, CxError};
use gsc_core::geom::{ConeGeometry, ConePoint, GeomError, Precision};
use gsc_core::group::{GroupBackend, GroupError, TreeVertex};
use gsc_core::link::{link_at_k_center, validate_structure, verify_link_condition, MetricLinkGraph};
use gsc_core::rotation::{check_rf2, check_small_cancellation, compute_l_max, CancellationVerdict, RotationFamily, Rf2Verdict};
use num_rational::Rational64;
use rayon::prelude::*;

use crate::instance::InstanceSpec;
use crate::report::*;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Command {
    /// Rotation family axioms and the small cancellation test.
    Check,
    /// Also the coned-off complex and the slice complex of groups.
    Build,
    /// Also every sampled link and the point stabilizers.
    Links,
    /// Quotient presentation and abelianization only.
    Quotient,
    All,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Check => "check",
            Command::Build => "build",
            Command::Links => "links",
            Command::Quotient => "quotient",
            Command::All => "all",
        }
    }

    fn wants(self, stage: Stage) -> bool {
        use Stage::*;
        match self {
            Command::Check => matches!(stage, Family),
            Command::Build => matches!(stage, Family | Complex | Cog),
            Command::Links => matches!(stage, Family | Complex | Links | Stabilizers),
            Command::Quotient => matches!(stage, Quotient),
            Command::All => true,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Stage {
    Family,
    Complex,
    Links,
    Stabilizers,
    Cog,
    Quotient,
}

const NOT_REQUESTED: &str = "not requested";

/// Every stage.
pub fn run_pipeline(spec: &InstanceSpec) -> Report {
    run_command(spec, Command::All)
}

pub fn run_command(spec: &InstanceSpec, command: Command) -> Report {
    let b = &spec.backend;
    let mut report = Report {
        tool: Tool { name: "gsc", version: env!("CARGO_PKG_VERSION") },
        command: command.name().into(),
        verdict: Verdict::Pass,
        instance: InstanceEcho {
            backend: spec.desc.clone(),
            family: spec.words.clone(),
            lambda: spec.lambda.to_string(),
            radius: spec.radius,
            precision: spec.precision,
        },
        warnings: spec.warnings.clone(),
        rotation_family: Section::skipped(NOT_REQUESTED),
        small_cancellation: Section::skipped(NOT_REQUESTED),
        complex: Section::skipped(NOT_REQUESTED),
        links: Section::skipped(NOT_REQUESTED),
        stabilizers: Section::skipped(NOT_REQUESTED),
        complex_of_groups: Section::skipped(NOT_REQUESTED),
        quotient: Section::skipped(NOT_REQUESTED),
        graphs: Vec::new(),
    };
    if command.wants(Stage::Quotient) {
        report.quotient = quotient_section(spec);
    }
    if command.wants(Stage::Family) {
        run_geometric(spec, b, command, &mut report);
    }
    report.verdict = Verdict::combine(report.section_verdicts().map(|(_, v)| v));
    report
}

fn run_geometric(spec: &InstanceSpec, b: &GroupBackend, command: Command, report: &mut Report) {
    let (section, family) = family_section(spec);
    report.rotation_family = section;
    let Some(family) = family else {
        gate(command, report, "rotation family axioms fail");
        return;
    };
    let (section, l_max) = cancellation_section(b, &family, spec.lambda);
    report.small_cancellation = section;
    let Some(l_max) = l_max else {
        gate(command, report, "C'' gate failed");
        return;
    };
    if family.is_empty() {
        gate(command, report, "empty family: nothing is coned off");
        return;
    }
    let cx = match construct(spec, b, &family, l_max) {
        Ok(cx) => cx,
        Err(section) => {
            if command.wants(Stage::Complex) {
                report.complex = section;
            }
            gate(command, report, "construction did not complete");
            if command.wants(Stage::Cog) {
                report.complex_of_groups = cog_section(b, &family, l_max);
            }
            return;
        }
    };
    if command.wants(Stage::Complex) {
        report.complex = complex_section(&cx, &family);
    }
    if command.wants(Stage::Links) {
        let (section, graphs) = links_section(b, &cx, &family);
        report.links = section;
        report.graphs = graphs;
    }
    if command.wants(Stage::Stabilizers) {
        report.stabilizers = stabilizer_section(b, &cx, &family);
    }
    if command.wants(Stage::Cog) {
        report.complex_of_groups = cog_section(b, &family, l_max);
    }
}

/// Marks the later requested stages as skipped.
fn gate(command: Command, report: &mut Report, why: &str) {
    if command.wants(Stage::Complex) && report.complex.note.as_deref() == Some(NOT_REQUESTED) {
        report.complex = Section::skipped(why);
    }
    if command.wants(Stage::Links) {
        report.links = Section::skipped(why);
    }
    if command.wants(Stage::Stabilizers) {
        report.stabilizers = Section::skipped(why);
    }
    if command.wants(Stage::Cog) {
        report.complex_of_groups = Section::skipped(why);
    }
}

fn family_section(spec: &InstanceSpec) -> (Section<FamilyOut>, Option<RotationFamily>) {
    let b = &spec.backend;
    let mut members = Vec::new();
    let mut elements = Vec::new();
    for w in &spec.words {
        let g = match b.element(w) {
            Ok(g) => g,
            Err(e) => return (Section::failed(Verdict::Fail, "rotation family", e), None),
        };
        match RotationFamily::new(b, std::slice::from_ref(&g)) {
            Ok(f) => {
                let m = &f.members()[0];
                let rf2 = match check_rf2(b, &m.axis) {
                    Rf2Verdict::Certified => "certified".to_string(),
                    Rf2Verdict::PointwiseFixer { witness } => format!("{} fixes the axis pointwise", b.display(&witness)),
                    Rf2Verdict::Reflection { witness, .. } => format!("{} reverses the axis", b.display(&witness)),
                };
                members.push(MemberOut {
                    word: w.clone(),
                    root: display(b, &m.root),
                    exponent: m.exponent,
                    translation_length: m.length,
                    hyperbolic: true,
                    rf2,
                });
            }
            Err(GroupError::Elliptic(_)) => members.push(MemberOut {
                word: w.clone(),
                root: String::new(),
                exponent: 0,
                translation_length: 0,
                hyperbolic: false,
                rf2: "not applicable".into(),
            }),
            Err(e) => return (Section::failed(Verdict::Inconclusive, "rotation family", e), None),
        }
        elements.push(g);
    }
    let ok = members.iter().all(|m| m.hyperbolic && m.rf2 == "certified");
    let family = if members.iter().all(|m| m.hyperbolic) {
        RotationFamily::new(b, &elements).ok()
    } else {
        None
    };
    let r_min = family.as_ref().and_then(|f| f.r_min());
    let verdict = if ok { Verdict::Pass } else { Verdict::Fail };
    (Section::done(verdict, EXACT, FamilyOut { members, r_min }), family.filter(|_| ok))
}

/// The section and, when the gate opens, `l_max` (0 for the empty family).
fn cancellation_section(b: &GroupBackend, family: &RotationFamily, lambda: Rational64) -> (Section<CancellationOut>, Option<usize>) {
    let rep = match compute_l_max(b, family) {
        Ok(r) => r,
        Err(e) => return (Section::failed(Verdict::Fail, "small cancellation", e), None),
    };
    let c = check_small_cancellation(family, lambda, &rep);
    let theta = c.l_max.zip(c.r_min).map(|(l, r)| gsc_core::geom::critical_angle(l, r));
    let out = CancellationOut {
        l_max: c.l_max,
        r_min: c.r_min,
        lambda: lambda.to_string(),
        bound: c.r_min.map(|r| (lambda * Rational64::from_integer(r as i64)).to_string()),
        witness: c.witness.as_ref().map(|w| {
            format!("members {} and {} share {} edges after translating by {}", w.first, w.second, w.edges, b.display(&w.element))
        }),
        theta_c_over_pi: theta.map(|t| t.over_pi.to_string()),
        theta_c_vs_third: theta.map(|t| format!("{:?}", t.cmp_third()).to_lowercase()),
    };
    match c.verdict {
        CancellationVerdict::Pass => (Section::done(Verdict::Pass, EXACT, out), c.l_max),
        CancellationVerdict::Vacuous => (Section::done(Verdict::Pass, EXACT, out).with_note("empty family"), Some(0)),
        CancellationVerdict::Fail => (Section::done(Verdict::Fail, EXACT, out), None),
    }
}

fn stage_verdict(e: &ComplexError) -> Verdict {
    match e {
        ComplexError::Geom(GeomError::Inconclusive(_)) | ComplexError::BallTooSmall { .. } => Verdict::Inconclusive,
        ComplexError::OverlapExceeds { .. } => Verdict::Fail,
        _ => Verdict::Inconclusive,
    }
}

fn construct(spec: &InstanceSpec, b: &GroupBackend, family: &RotationFamily, l_max: usize) -> Result<ConedComplex, Section<ComplexOut>> {
    let needed = required_radius(b, family, l_max);
    if let Some(r) = spec.radius {
        if r < needed {
            return Err(Section::failed(
                Verdict::Inconclusive,
                "complex",
                format!("radius {r} is below the {needed} needed to certify the family"),
            ));
        }
    }
    let r_min = family.r_min().expect("non-empty family");
    let geometry = ConeGeometry::new(r_min)
        .map_err(|e| Section::failed(Verdict::Inconclusive, "complex", e))?
        .with_precision(Precision { start: Precision::default().start.min(spec.precision), max: spec.precision });
    let ball = certified_region(b, family, l_max).map_err(|e| Section::failed(Verdict::Inconclusive, "complex", e))?;
    build_coned_off(b, &ball, family, geometry, l_max)
        .and_then(|cx| compute_slice_gluings(b, cx))
        .map_err(|e| Section::failed(stage_verdict(&e), "complex", e))
}

fn complex_section(cx: &ConedComplex, family: &RotationFamily) -> Section<ComplexOut> {
    let polygons = build_polygonal_data(family, cx.theta)
        .into_iter()
        .map(|p| PolygonOut {
            member: p.member,
            polygon_edges: p.polygon_edges,
            rotation_step: p.rotation_step,
            rotation_order: p.rotation_order,
            inner_ratio: p.inner_ratio.to_string(),
            outer_ratio: p.outer_ratio.to_string(),
            ribbon_avoids_slices: p.ribbon_avoids_slices,
        })
        .collect();
    let out = ComplexOut {
        region_vertices: cx.ball.len(),
        region_edges: cx.ball.edge_count(),
        region_depth: cx.ball.radius(),
        cones: cx.charts.len(),
        cone_triangles: cx.charts.iter().map(|c| c.triangles()).sum(),
        identified_pairs: cx.slices.iter().map(|s| s.len()).sum::<usize>() / 2,
        euler_characteristic: cx.euler_characteristic(),
        subdivision: SUBDIVISION,
        polygons,
    };
    Section::done(Verdict::Pass, radius_tag(cx.ball.radius()), out)
}

fn display(b: &GroupBackend, g: &gsc_core::group::Element) -> String {
    let s = b.display(g);
    if s.is_empty() {
        "1".into()
    } else {
        s
    }
}

fn frac(x: Rational64) -> String {
    x.to_string()
}

fn certify(name: String, at: String, cones: usize, g: &MetricLinkGraph) -> LinkOut {
    let structure = match validate_structure(g) {
        Ok(()) => "ok".to_string(),
        Err(v) => v.to_string(),
    };
    let (girth, passes) = match verify_link_condition(g) {
        Ok(c) => (
            Some(GirthOut {
                x_lo: frac(g.x_lo),
                x_hi: frac(g.x_hi),
                at_lo_over_pi: c.at_lo.length.map(frac),
                at_hi_over_pi: c.at_hi.length.map(frac),
                cycle_edges: c.at_lo.cycle.len(),
                certification: EXACT,
            }),
            c.passes,
        ),
        Err(_) => (None, false),
    };
    let passes = passes && structure == "ok";
    LinkOut { name, at, cones, vertices: g.vertex_count(), edges: g.edges.len(), structure, girth, passes }
}

fn point_label(u: &ConePoint) -> String {
    let r = &u.radius;
    format!("phi={}pi c={} alpha={}pi psi={}pi", u.phi, r.c, r.alpha, r.psi)
}

fn vertex_label(b: &GroupBackend, v: &TreeVertex) -> String {
    let steps: Vec<String> = v.0.iter().map(|s| format!("{}.{}", s.s, s.y)).collect();
    format!("type {} [{}]", b.vertex_type(v), steps.join(" "))
}

fn links_section(b: &GroupBackend, cx: &ConedComplex, family: &RotationFamily) -> (Section<LinksOut>, Vec<(String, MetricLinkGraph)>) {
    let r_min = cx.geometry.r_min();
    let mut k_centres = Vec::new();
    for (i, m) in family.members().iter().enumerate() {
        match link_at_k_center(m.length, r_min) {
            Ok(c) => k_centres.push(CircleOut {
                member: i,
                edges: c.edges,
                length_over_pi: frac(c.length),
                passes: c.passes,
                certification: EXACT,
            }),
            Err(e) => return (Section::failed(Verdict::Fail, "links", e), Vec::new()),
        }
    }
    let interior = match cx.interior_samples() {
        Ok(s) => s,
        Err(e) => return (Section::failed(stage_verdict(&e), "links", e), Vec::new()),
    };
    let tree = match cx.tree_vertex_samples(b) {
        Ok(s) => s,
        Err(e) => return (Section::failed(stage_verdict(&e), "links", e), Vec::new()),
    };
    let mut graphs = Vec::new();
    let mut jobs = Vec::new();
    for (i, s) in interior.iter().enumerate() {
        let name = format!("interior_{i}");
        graphs.push((name.clone(), s.link.clone()));
        jobs.push((name, format!("member {} at {}", s.member, point_label(&s.point)), s.cones, &s.link));
    }
    let split = jobs.len();
    for (i, s) in tree.iter().enumerate() {
        let name = format!("tree_vertex_{i}");
        graphs.push((name.clone(), s.link.clone()));
        jobs.push((name, vertex_label(b, &s.vertex), s.cones, &s.link));
    }
    let mut done: Vec<LinkOut> = jobs.into_par_iter().map(|(n, at, c, g)| certify(n, at, c, g)).collect();
    let tree_out = done.split_off(split);
    let passes = k_centres.iter().all(|c| c.passes) && done.iter().chain(&tree_out).all(|l| l.passes);
    let multi_cone_interior = done.iter().filter(|l| l.cones >= 3).map(|l| l.name.clone()).collect();
    let out = LinksOut { k_centres, apices: "no cycles".into(), interior: done, tree_vertices: tree_out, multi_cone_interior };
    let verdict = if passes { Verdict::Pass } else { Verdict::Fail };
    (Section::done(verdict, EXACT, out), graphs)
}

fn stabilizer_section(b: &GroupBackend, cx: &ConedComplex, family: &RotationFamily) -> Section<StabilizersOut> {
    let geom = &cx.geometry;
    let mut table = Vec::new();
    for (m, member) in family.members().iter().enumerate() {
        let mut points = match cx.arrangement_points(m) {
            Ok(p) => p,
            Err(e) => return Section::failed(stage_verdict(&e), "stabilizers", e),
        };
        let len = member.root_length() as i64;
        for k in 0..len {
            points.push(ConePoint::tree_vertex(geom, k));
            let mid = (geom.vertex_direction(k) + geom.vertex_direction(k + 1)) / Rational64::from_integer(2);
            points.push(ConePoint::tree(geom, mid));
        }
        for u in &points {
            let st = match cx.point_stabilizer(b, m, u) {
                Ok(s) => s,
                Err(e) => return Section::failed(stage_verdict(&e), "stabilizers", e),
            };
            let in_vertex_group = match &st.ends {
                _ if st.kind == StabilizerKind::Trivial => true,
                Some((va, vb)) => {
                    let elements: BTreeSet<_> = st.elements.iter().collect();
                    (0..=b.distance(va, vb)).any(|k| {
                        let v = b.geodesic_point(va, vb, k);
                        let group: BTreeSet<_> = b.vertex_stabilizer(&v).into_iter().collect();
                        elements.iter().all(|g| group.contains(*g))
                    })
                }
                None => false,
            };
            table.push(StabilizerOut {
                member: m,
                point: point_label(u),
                kind: match st.kind {
                    StabilizerKind::Trivial => "trivial",
                    StabilizerKind::Fixers => "fixes I_u",
                    StabilizerKind::WithFlips => "flips I_u",
                }
                .into(),
                order: st.order(),
                interval: st.interval,
                elements: st.elements.iter().map(|g| display(b, g)).collect(),
                in_vertex_group,
                verified: st.verified,
            });
        }
    }
    let passes = table.iter().all(|s| s.verified && s.in_vertex_group);
    let out = StabilizersOut { points: table.len(), nontrivial: table.iter().filter(|s| s.order > 1).count(), table };
    Section::done(if passes { Verdict::Pass } else { Verdict::Fail }, EXACT, out)
}

fn counts(cog: &ComplexOfGroups) -> ScwolCounts {
    let s = &cog.scwol;
    ScwolCounts {
        vertices: s.vertex_count(),
        edges: s.edges.len(),
        composable_pairs: s.composable_pairs().count(),
        max_local_order: cog.groups.iter().map(|g| g.order()).max().unwrap_or(1),
    }
}

fn cog_section(b: &GroupBackend, family: &RotationFamily, l_max: usize) -> Section<CogOut> {
    let y = match build_y_slices(b, family, l_max) {
        Ok(y) => y,
        Err(CxError::Unsupported(why)) => return Section::skipped(why),
        Err(e @ CxError::Violation(_)) => return Section::failed(Verdict::Fail, "complex of groups", e),
        Err(e) => return Section::failed(Verdict::Inconclusive, "complex of groups", e),
    };
    let valid = y.centre.cog.validate().is_ok() && y.amalgam.cog.validate().is_ok();
    let pi1 = abelianization(&cog_presentation(&y.amalgam.cog));
    let quotient = abelianization(&quotient_of(b, family.members().iter().map(|m| &m.element)));
    let out = CogOut {
        centre: counts(&y.centre.cog),
        discs: y.discs.iter().map(|d| counts(&d.1.cog)).collect(),
        amalgam: counts(&y.amalgam.cog),
        fundamental_group_abelianization: pi1.to_string(),
        matches_quotient: pi1 == quotient,
    };
    let verdict = if valid && out.matches_quotient { Verdict::Pass } else { Verdict::Fail };
    Section::done(verdict, EXACT, out)
}

fn quotient_of<'a>(b: &GroupBackend, elements: impl Iterator<Item = &'a gsc_core::group::Element>) -> gsc_core::cx::GroupPresentation {
    let mut p = backend_presentation(b);
    for g in elements {
        p.add_relator(&b.word_of(g));
    }
    p
}

fn quotient_section(spec: &InstanceSpec) -> Section<QuotientOut> {
    let b = &spec.backend;
    let elements: Result<Vec<_>, _> = spec.words.iter().map(|w| b.element(w)).collect();
    let elements = match elements {
        Ok(e) => e,
        Err(e) => return Section::failed(Verdict::Fail, "quotient", e),
    };
    let p = quotient_of(b, elements.iter());
    let ab = abelianization(&p);
    let out = QuotientOut {
        generators: p.generators.clone(),
        relators: p.relators.iter().map(|r| p.format_word(r)).collect(),
        presentation: p.to_string(),
        abelianization: ab.to_string(),
        rank: ab.rank,
        torsion: ab.torsion.clone(),
    };
    Section::done(Verdict::Pass, EXACT, out)
}
