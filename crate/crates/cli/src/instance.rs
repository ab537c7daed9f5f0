//! Instance files: a TOML document describing the backend, the family
//! words and the verification budget. Rationals are `"p/q"` strings.

use std::collections::BTreeMap;
use std::ops::Range;
use std::path::Path;

use gsc_core::group::{EdgeSpec, FiniteGroup, GroupBackend, GroupError, VertexSpec};
use num_rational::Rational64;
use serde::Deserialize;
use toml::Spanned;

pub const DEFAULT_PRECISION: u32 = 1024;
const MIN_PRECISION: u32 = 64;

#[derive(Debug, thiserror::Error)]
pub enum InstanceError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}, {field}: {message}")]
    Semantic { line: usize, field: String, message: String },
    /// A command-line override that does not parse.
    #[error("--{flag}: {message}")]
    Flag { flag: String, message: String },
}

/// How the backend was described, echoed into reports.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BackendDesc {
    Free { generators: Vec<String> },
    GraphOfGroups { vertices: Vec<(String, usize)>, edges: Vec<(String, String, String, usize)> },
}

#[derive(Clone, Debug)]
pub struct InstanceSpec {
    pub desc: BackendDesc,
    pub backend: GroupBackend,
    pub words: Vec<String>,
    pub lambda: Rational64,
    /// Ball radius budget; `None` uses whatever the family needs.
    pub radius: Option<usize>,
    pub precision: u32,
    pub warnings: Vec<String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FileToml {
    backend: BackendToml,
    #[serde(default)]
    family: FamilyToml,
    #[serde(default)]
    verify: VerifyToml,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct BackendToml {
    free_rank: Option<Spanned<usize>>,
    generators: Option<Spanned<Vec<String>>>,
    #[serde(default)]
    vertex: Vec<Spanned<VertexToml>>,
    #[serde(default)]
    edge: Vec<Spanned<EdgeToml>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct VertexToml {
    name: String,
    cyclic: Option<usize>,
    table: Option<Vec<Vec<u32>>>,
    #[serde(default)]
    generators: BTreeMap<String, u32>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct EdgeToml {
    name: String,
    from: String,
    to: String,
    cyclic: Option<usize>,
    table: Option<Vec<Vec<u32>>>,
    alpha: Vec<u32>,
    omega: Vec<u32>,
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct FamilyToml {
    #[serde(default)]
    words: Vec<Spanned<String>>,
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct VerifyToml {
    lambda: Option<Spanned<String>>,
    radius: Option<Spanned<i64>>,
    precision: Option<Spanned<i64>>,
}

pub fn parse_instance(path: &Path) -> Result<InstanceSpec, InstanceError> {
    let text = std::fs::read_to_string(path)
        .map_err(|source| InstanceError::Io { path: path.display().to_string(), source })?;
    parse_instance_str(&text)
}

struct Locator<'a> {
    text: &'a str,
}

impl Locator<'_> {
    fn line(&self, span: Range<usize>) -> usize {
        self.text[..span.start.min(self.text.len())].matches('\n').count() + 1
    }

    fn err(&self, span: Range<usize>, field: &str, message: impl Into<String>) -> InstanceError {
        InstanceError::Semantic { line: self.line(span), field: field.into(), message: message.into() }
    }
}

pub fn parse_instance_str(text: &str) -> Result<InstanceSpec, InstanceError> {
    let loc = Locator { text };
    let file: FileToml = toml::from_str(text).map_err(|e| InstanceError::Syntax {
        line: e.span().map_or(1, |s| loc.line(s)),
        message: e.message().to_string(),
    })?;
    let (desc, backend) = build_backend(&loc, file.backend)?;

    let mut words = Vec::with_capacity(file.family.words.len());
    for w in &file.family.words {
        match backend.parse_word(w.get_ref()) {
            Ok(_) => words.push(w.get_ref().trim().to_string()),
            Err(GroupError::UnknownLetter(name)) => {
                return Err(loc.err(w.span(), "family.words", format!("undeclared generator {name:?}")))
            }
            Err(e) => return Err(loc.err(w.span(), "family.words", e.to_string())),
        }
    }

    let mut spec = InstanceSpec {
        desc,
        backend,
        words,
        lambda: Rational64::new(1, 6),
        radius: None,
        precision: DEFAULT_PRECISION,
        warnings: Vec::new(),
    };
    if let Some(l) = &file.verify.lambda {
        let value = parse_rational(l.get_ref()).map_err(|m| loc.err(l.span(), "verify.lambda", m))?;
        spec.set_lambda(value);
    }
    if let Some(r) = &file.verify.radius {
        let value = usize::try_from(*r.get_ref()).map_err(|_| loc.err(r.span(), "verify.radius", "must be non-negative"))?;
        spec.radius = Some(value);
    }
    if let Some(p) = &file.verify.precision {
        spec.precision = check_precision(*p.get_ref()).map_err(|m| loc.err(p.span(), "verify.precision", m))?;
    }
    Ok(spec)
}

impl InstanceSpec {
    pub fn set_lambda(&mut self, lambda: Rational64) {
        self.lambda = lambda;
        self.warnings.retain(|w| !w.starts_with("lambda"));
        if lambda > Rational64::new(1, 6) {
            self.warnings.push(format!("lambda = {lambda} exceeds 1/6; a pass does not give the curvature bound"));
        }
    }

    /// Applies `--lambda`, `--radius` and `--precision`.
    pub fn apply_flags(&mut self, lambda: Option<&str>, radius: Option<usize>, precision: Option<i64>) -> Result<(), InstanceError> {
        if let Some(l) = lambda {
            let value = parse_rational(l).map_err(|message| InstanceError::Flag { flag: "lambda".into(), message })?;
            self.set_lambda(value);
        }
        if radius.is_some() {
            self.radius = radius;
        }
        if let Some(p) = precision {
            self.precision = check_precision(p).map_err(|message| InstanceError::Flag { flag: "precision".into(), message })?;
        }
        Ok(())
    }
}

fn check_precision(bits: i64) -> Result<u32, String> {
    match u32::try_from(bits) {
        Ok(b) if b >= MIN_PRECISION => Ok(b),
        _ => Err(format!("precision must be at least {MIN_PRECISION} bits")),
    }
}

/// `"p/q"` or `"p"`, positive.
pub fn parse_rational(text: &str) -> Result<Rational64, String> {
    let t = text.trim();
    let (p, q) = match t.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (t, "1"),
    };
    let p: i64 = p.parse().map_err(|_| format!("{text:?} is not a rational p/q"))?;
    let q: i64 = q.parse().map_err(|_| format!("{text:?} is not a rational p/q"))?;
    if q == 0 {
        return Err(format!("{text:?} has zero denominator"));
    }
    let r = Rational64::new(p, q);
    if r <= Rational64::from_integer(0) {
        return Err(format!("{text:?} must be positive"));
    }
    Ok(r)
}

fn group_of(cyclic: Option<usize>, table: &Option<Vec<Vec<u32>>>) -> Result<FiniteGroup, String> {
    match (cyclic, table) {
        (Some(0), None) => Err("cyclic group of order 0".into()),
        (Some(n), None) => Ok(FiniteGroup::cyclic(n)),
        (None, Some(rows)) => FiniteGroup::from_rows(rows).map_err(|e| e.to_string()),
        (None, None) => Ok(FiniteGroup::trivial()),
        (Some(_), Some(_)) => Err("give either `cyclic` or `table`, not both".into()),
    }
}

fn build_backend(loc: &Locator, b: BackendToml) -> Result<(BackendDesc, GroupBackend), InstanceError> {
    // the table itself may be implicit, so errors about it point at its first entry
    let span = b
        .free_rank
        .as_ref()
        .map(|r| r.span())
        .or_else(|| b.generators.as_ref().map(|g| g.span()))
        .or_else(|| b.vertex.first().map(|v| v.span()))
        .unwrap_or(0..0);
    let free = b.free_rank.is_some() || b.generators.is_some();
    if free && (!b.vertex.is_empty() || !b.edge.is_empty()) {
        return Err(loc.err(span, "backend", "a free backend has no vertex or edge tables"));
    }
    if free {
        let backend = match (&b.free_rank, &b.generators) {
            (Some(r), None) => GroupBackend::free_rank(*r.get_ref()).map_err(|e| loc.err(r.span(), "backend.free_rank", e.to_string()))?,
            (None, Some(g)) => {
                let names: Vec<&str> = g.get_ref().iter().map(|s| s.as_str()).collect();
                if let Some(bad) = names.iter().find(|n| !valid_name(n)) {
                    return Err(loc.err(g.span(), "backend.generators", format!("invalid generator name {bad:?}")));
                }
                GroupBackend::free(&names).map_err(|e| loc.err(g.span(), "backend.generators", e.to_string()))?
            }
            (Some(r), Some(g)) => {
                if *r.get_ref() != g.get_ref().len() {
                    return Err(loc.err(r.span(), "backend.free_rank", "rank differs from the number of generators"));
                }
                let names: Vec<&str> = g.get_ref().iter().map(|s| s.as_str()).collect();
                GroupBackend::free(&names).map_err(|e| loc.err(g.span(), "backend.generators", e.to_string()))?
            }
            (None, None) => unreachable!(),
        };
        let generators = backend.letters().iter().map(|l| l.name.clone()).collect();
        return Ok((BackendDesc::Free { generators }, backend));
    }
    if b.vertex.is_empty() {
        return Err(loc.err(span, "backend", "give `free_rank` or at least one [[backend.vertex]]"));
    }
    let mut index = BTreeMap::new();
    let mut vertices = Vec::new();
    for v in &b.vertex {
        let (s, v) = (v.span(), v.get_ref());
        if index.insert(v.name.clone(), vertices.len()).is_some() {
            return Err(loc.err(s, "backend.vertex", format!("vertex {:?} declared twice", v.name)));
        }
        let group = group_of(v.cyclic, &v.table).map_err(|m| loc.err(s.clone(), "backend.vertex", m))?;
        if let Some(bad) = v.generators.keys().find(|n| !valid_name(n)) {
            return Err(loc.err(s, "backend.vertex.generators", format!("invalid generator name {bad:?}")));
        }
        let gens = v.generators.iter().map(|(n, &g)| (n.clone(), g)).collect();
        vertices.push(VertexSpec { name: v.name.clone(), group, gens });
    }
    let mut edges = Vec::new();
    for e in &b.edge {
        let (s, e) = (e.span(), e.get_ref());
        let end = |name: &str| {
            index.get(name).copied().ok_or_else(|| loc.err(s.clone(), "backend.edge", format!("undeclared vertex {name:?}")))
        };
        let (origin, terminus) = (end(&e.from)?, end(&e.to)?);
        let group = group_of(e.cyclic, &e.table).map_err(|m| loc.err(s.clone(), "backend.edge", m))?;
        edges.push(EdgeSpec { name: e.name.clone(), origin, terminus, group, alpha: e.alpha.clone(), omega: e.omega.clone() });
    }
    let desc = BackendDesc::GraphOfGroups {
        vertices: vertices.iter().map(|v| (v.name.clone(), v.group.order())).collect(),
        edges: edges
            .iter()
            .map(|e| (e.name.clone(), vertices[e.origin].name.clone(), vertices[e.terminus].name.clone(), e.group.order()))
            .collect(),
    };
    let backend = GroupBackend::graph_of_groups(vertices, edges).map_err(|e| loc.err(span.clone(), "backend", e.to_string()))?;
    Ok((desc, backend))
}

fn valid_name(n: &str) -> bool {
    let mut c = n.chars();
    c.next().is_some_and(|x| x.is_ascii_alphabetic()) && c.all(|x| x.is_ascii_alphanumeric() || x == '_')
}

#[cfg(test)]
mod tests {
    use super::*;

    const A7: &str = "[backend]\nfree_rank = 2\n\n[family]\nwords = [\"a^7\"]\n";

    #[test]
    fn minimal_free_instance() {
        let spec = parse_instance_str(A7).unwrap();
        assert_eq!(spec.words, vec!["a^7"]);
        assert_eq!(spec.lambda, Rational64::new(1, 6));
        assert_eq!(spec.desc, BackendDesc::Free { generators: vec!["a".into(), "b".into()] });
        assert!(spec.warnings.is_empty());
    }

    #[test]
    fn undeclared_letter_is_named_with_its_line() {
        let text = "[backend]\nfree_rank = 2\n\n[family]\nwords = [\n  \"a^7\",\n  \"a c\",\n]\n";
        let err = parse_instance_str(text).unwrap_err();
        match &err {
            InstanceError::Semantic { line, field, message } => {
                assert_eq!((*line, field.as_str()), (7, "family.words"));
                assert!(message.contains("\"c\""), "{message}");
            }
            e => panic!("{e}"),
        }
    }

    #[test]
    fn large_lambda_warns() {
        let spec = parse_instance_str(&format!("{A7}\n[verify]\nlambda = \"7/6\"\n")).unwrap();
        assert_eq!(spec.lambda, Rational64::new(7, 6));
        assert_eq!(spec.warnings.len(), 1);
        let mut spec = spec;
        spec.apply_flags(Some("1/8"), None, None).unwrap();
        assert!(spec.warnings.is_empty());
    }

    #[test]
    fn syntax_errors_have_lines() {
        let err = parse_instance_str("[backend]\nfree_rank = 2\nwords = [\n").unwrap_err();
        assert!(matches!(err, InstanceError::Syntax { .. }), "{err}");
        let err = parse_instance_str("[backend]\nfree_rank = 2\n[verify]\nlambda = \"x/6\"\n").unwrap_err();
        assert!(matches!(err, InstanceError::Semantic { line: 4, .. }), "{err}");
        let err = parse_instance_str("[backend]\nfree_rank = 2\n[verify]\nprecision = 3\n").unwrap_err();
        assert!(matches!(err, InstanceError::Semantic { line: 4, .. }), "{err}");
        let err = parse_instance_str("[backend]\nfree_rank = 2\nbogus = 1\n").unwrap_err();
        assert!(matches!(err, InstanceError::Syntax { .. }), "{err}");
    }

    #[test]
    fn graph_of_groups_instance() {
        let text = r#"
[[backend.vertex]]
name = "U"
cyclic = 3
generators = { s = 1 }

[[backend.vertex]]
name = "W"
cyclic = 5
generators = { t = 1 }

[[backend.edge]]
name = "e"
from = "U"
to = "W"
alpha = [0]
omega = [0]

[family]
words = ["(s t)^7"]
"#;
        let spec = parse_instance_str(text).unwrap();
        assert_eq!(spec.backend.vertices().len(), 2);
        assert_eq!(spec.words, vec!["(s t)^7"]);
        let bad = text.replace("to = \"W\"", "to = \"X\"");
        let err = parse_instance_str(&bad).unwrap_err();
        assert!(err.to_string().contains("\"X\""), "{err}");
    }

    #[test]
    fn rationals() {
        assert_eq!(parse_rational("1/6"), Ok(Rational64::new(1, 6)));
        assert_eq!(parse_rational(" 2 "), Ok(Rational64::from_integer(2)));
        assert!(parse_rational("0").is_err());
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("0.5").is_err());
    }
}
