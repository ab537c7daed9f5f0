use std::io::Write;
use std::path::Path;

use crate::report::{Report, Section};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Dot,
    Text,
}

pub fn render(report: &Report, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(report).expect("reports serialize");
            s.push('\n');
            s
        }
        Format::Dot => dot(report),
        Format::Text => text(report),
    }
}

/// Writes to `path`, or to stdout without one.
pub fn emit(report: &Report, format: Format, path: Option<&Path>) -> std::io::Result<()> {
    let out = render(report, format);
    match path {
        Some(p) => std::fs::write(p, out),
        None => std::io::stdout().lock().write_all(out.as_bytes()),
    }
}

/// One undirected graph per sampled link.
fn dot(report: &Report) -> String {
    if report.graphs.is_empty() {
        return format!("// no link graphs: links {}\n", report.links.verdict.as_str());
    }
    let mut out = String::new();
    for (name, g) in &report.graphs {
        let body = g.to_dot();
        let body = body.strip_prefix("graph link {").expect("link graphs open with `graph link {`");
        out.push_str(&format!("graph \"{name}\" {{{body}"));
    }
    out
}

fn status<T>(s: &Section<T>) -> String {
    let mut out = s.verdict.as_str().to_string();
    if let Some(c) = &s.certification {
        out.push_str(&format!(" ({c})"));
    }
    if let Some(n) = &s.note {
        out.push_str(&format!(": {n}"));
    }
    out
}

fn text(r: &Report) -> String {
    let mut lines = vec![format!("verdict: {}", r.verdict.as_str())];
    lines.push(format!("{} {}, command {}", r.tool.name, r.tool.version, r.command));
    lines.extend(r.warnings.iter().map(|w| format!("warning: {w}")));
    let mut push = |name: &str, s: String, detail: Option<String>| {
        lines.push(match detail {
            Some(d) => format!("{name}: {s}; {d}"),
            None => format!("{name}: {s}"),
        })
    };
    push("rotation family", status(&r.rotation_family), r.rotation_family.data.as_ref().map(|f| {
        format!("{} members, R_min = {}", f.members.len(), f.r_min.map_or("none".into(), |x| x.to_string()))
    }));
    push("small cancellation", status(&r.small_cancellation), r.small_cancellation.data.as_ref().map(|c| {
        let show = |x: Option<usize>| x.map_or("none".into(), |v| v.to_string());
        format!("l_max = {}, R_min = {}, lambda = {}", show(c.l_max), show(c.r_min), c.lambda)
    }));
    push("complex", status(&r.complex), r.complex.data.as_ref().map(|c| {
        format!("{} cones, {} identified pairs, {} region vertices", c.cones, c.identified_pairs, c.region_vertices)
    }));
    push("links", status(&r.links), r.links.data.as_ref().map(|l| {
        let failing = l.interior.iter().chain(&l.tree_vertices).filter(|x| !x.passes).count();
        format!(
            "{} circles, {} interior, {} tree vertex links, {failing} failing",
            l.k_centres.len(),
            l.interior.len(),
            l.tree_vertices.len()
        )
    }));
    push("stabilizers", status(&r.stabilizers), r.stabilizers.data.as_ref().map(|s| {
        format!("{} points, {} non-trivial", s.points, s.nontrivial)
    }));
    push("complex of groups", status(&r.complex_of_groups), r.complex_of_groups.data.as_ref().map(|c| {
        format!("{} cells, pi_1 abelianizes to {}", c.amalgam.vertices, c.fundamental_group_abelianization)
    }));
    push("quotient", status(&r.quotient), r.quotient.data.as_ref().map(|q| {
        format!("{}, abelianization {}", q.presentation, q.abelianization)
    }));
    let mut out = lines.join("\n");
    out.push('\n');
    out
}

impl Report {
    pub fn exit_code(&self) -> i32 {
        self.verdict.exit_code()
    }
}
