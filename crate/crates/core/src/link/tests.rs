use num_rational::Rational64;
use proptest::prelude::*;

use super::*;
use crate::geom::{critical_angle, SliceRelation};

fn q(n: i64, d: i64) -> Rational64 {
    Rational64::new(n, d)
}

fn constant_graph(n: usize, edges: &[(usize, usize, Rational64)]) -> MetricLinkGraph {
    let mut g = MetricLinkGraph::new(LinkClass::Circle, q(0, 1), q(0, 1));
    for i in 0..n {
        g.add_vertex(format!("v{i}"), VertexKind::Circle);
    }
    for &(u, v, w) in edges {
        g.add_edge(u, v, Affine::constant(w));
    }
    g
}

#[test]
fn triangle_girth() {
    let one = q(1, 1);
    let g = constant_graph(3, &[(0, 1, one), (1, 2, one), (2, 0, one)]);
    let girth = weighted_girth(&g, q(0, 1)).unwrap();
    assert_eq!(girth.length, Some(q(3, 1)));
    assert_eq!(girth.cycle.len(), 3);
}

#[test]
fn forest_has_no_girth() {
    let g = constant_graph(4, &[(0, 1, q(1, 1)), (1, 2, q(1, 1)), (1, 3, q(1, 1))]);
    assert_eq!(weighted_girth(&g, q(0, 1)).unwrap().length, None);
    assert!(verify_link_condition(&g).unwrap().passes);
}

#[test]
fn negative_weight_is_rejected() {
    let g = constant_graph(2, &[(0, 1, q(-1, 3))]);
    assert!(matches!(weighted_girth(&g, q(0, 1)), Err(LinkError::NegativeWeight(0, 1, _))));
}

#[test]
fn shortest_cycle_is_chosen() {
    // a square with a cheap chord
    let g = constant_graph(
        4,
        &[(0, 1, q(1, 1)), (1, 2, q(1, 1)), (2, 3, q(1, 1)), (3, 0, q(1, 1)), (0, 2, q(1, 10))],
    );
    let girth = weighted_girth(&g, q(0, 1)).unwrap();
    assert_eq!(girth.length, Some(q(21, 10)));
}

#[test]
fn single_cone_interior_link() {
    let th = critical_angle(1, 7);
    let g = link_at_interior_point(&InteriorLinkData { cones: 1, gluings: vec![] }, th).unwrap();
    assert_eq!(g.labels, ["a", "b", "c1", "d1"]);
    validate_structure(&g).unwrap();
    let cert = verify_link_condition(&g).unwrap();
    assert!(cert.passes);
    assert_eq!(cert.at_lo.length, Some(q(2, 1)));
    assert_eq!(cert.at_hi.length, Some(q(2, 1)));
}

#[test]
fn boundary_gluing_gives_theta_graph() {
    let th = critical_angle(2, 13);
    let data = InteriorLinkData { cones: 2, gluings: vec![(0, 1, SliceRelation::StartBoundary, true)] };
    let g = link_at_interior_point(&data, th).unwrap();
    // a, b and c are shared; each cone keeps its own d
    assert_eq!(g.labels, ["a", "b", "c1", "d1", "d2"]);
    assert_eq!(g.edges.len(), 6);
    validate_structure(&g).unwrap();
    let cert = verify_link_condition(&g).unwrap();
    assert_eq!(cert.girth(), Some(q(2, 1)));
    // the same slice seen from a reversed second cone
    let flipped = InteriorLinkData { cones: 2, gluings: vec![(0, 1, SliceRelation::StartBoundary, false)] };
    let h = link_at_interior_point(&flipped, th).unwrap();
    assert_eq!(h.vertex_count(), 5);
    validate_structure(&h).unwrap();
}

#[test]
fn slice_interior_identifies_fully() {
    let th = critical_angle(2, 13);
    for same in [true, false] {
        let data = InteriorLinkData { cones: 2, gluings: vec![(0, 1, SliceRelation::Interior, same)] };
        let g = link_at_interior_point(&data, th).unwrap();
        assert_eq!(g.vertex_count(), 4);
        assert_eq!(g.edges.len(), 4);
    }
}

#[test]
fn corner_keeps_inward_directions_apart() {
    let th = critical_angle(2, 13);
    let data = InteriorLinkData {
        cones: 3,
        gluings: vec![(0, 1, SliceRelation::Corner, true), (1, 2, SliceRelation::EndBoundary, false)],
    };
    let g = link_at_interior_point(&data, th).unwrap();
    validate_structure(&g).unwrap();
    assert_eq!(verify_link_condition(&g).unwrap().girth(), Some(q(2, 1)));
}

#[test]
fn inconsistent_orientations_are_reported() {
    let th = critical_angle(2, 13);
    let data = InteriorLinkData {
        cones: 2,
        gluings: vec![(0, 1, SliceRelation::Interior, true), (1, 0, SliceRelation::Corner, false)],
    };
    assert!(matches!(link_at_interior_point(&data, th), Err(LinkError::Inconsistent(_))));
}

#[test]
fn mutations_flip_verdicts() {
    let th = critical_angle(2, 13);
    let data = InteriorLinkData { cones: 2, gluings: vec![(0, 1, SliceRelation::EndBoundary, true)] };
    let g = link_at_interior_point(&data, th).unwrap();
    // an extra a-c edge breaks bipartiteness
    let mut bad = g.clone();
    let (a, c) = (bad.find("a").unwrap(), bad.find("c1").unwrap());
    bad.add_edge(a, c, Affine::constant(q(1, 3)));
    assert!(matches!(validate_structure(&bad), Err(StructureViolation::SameSide(..))));
    // shortening any edge of a minimal cycle drops the girth below 2π
    let cert = verify_link_condition(&g).unwrap();
    let cycle = &cert.at_lo.cycle;
    for e in 0..g.edges.len() {
        let (u, v) = (g.edges[e].u, g.edges[e].v);
        let on_cycle = (0..cycle.len()).any(|k| {
            let (x, y) = (cycle[k], cycle[(k + 1) % cycle.len()]);
            (x, y) == (u, v) || (x, y) == (v, u)
        });
        if !on_cycle {
            continue;
        }
        let mut m = g.clone();
        m.edges[e].weight = m.edges[e].weight.add(&Affine::constant(q(-1, 100)));
        // at x = 1/2 the short edges vanish, so shortening one makes it negative
        assert!(!matches!(verify_link_condition(&m), Ok(c) if c.passes), "edge {e}");
    }
}

fn three_cone_star(l_max: usize, r_min: usize) -> TreeVertexLinkData {
    // cones through e0-e1, e1-e2, e2-e0, each pair sharing one tree edge
    TreeVertexLinkData {
        tree_edges: 4,
        cones: vec![(0, 1), (1, 2), (2, 0)],
        gluings: vec![(0, 1, TreeGlue::Start, false), (1, 2, TreeGlue::Start, false), (2, 0, TreeGlue::Start, false)],
        l_max,
        r_min,
    }
}

#[test]
fn tree_vertex_hexagon() {
    let g = link_at_tree_vertex(&three_cone_star(1, 7)).unwrap();
    validate_structure(&g).unwrap();
    let cert = verify_link_condition(&g).unwrap();
    assert!(cert.passes);
    assert_eq!(cert.girth(), Some(q(15, 7)));
    let cycle = &cert.at_lo.cycle;
    assert_eq!(cycle.len(), 6);
    for k in 0..6 {
        let kinds = [g.kinds[cycle[k]], g.kinds[cycle[(k + 1) % 6]]];
        assert!(kinds.contains(&VertexKind::TreeB) && kinds.contains(&VertexKind::TreeC));
    }
}

#[test]
fn tree_vertex_boundary_and_violation() {
    let at = link_at_tree_vertex(&three_cone_star(1, 6)).unwrap();
    let c = verify_link_condition(&at).unwrap();
    assert!(c.passes);
    assert_eq!(c.girth(), Some(q(2, 1)));
    let below = link_at_tree_vertex(&three_cone_star(1, 5)).unwrap();
    let c = verify_link_condition(&below).unwrap();
    assert!(!c.passes);
    assert_eq!(c.girth(), Some(q(9, 5)));
}

#[test]
fn single_cone_tree_link_is_a_path() {
    let data = TreeVertexLinkData { tree_edges: 4, cones: vec![(0, 2)], gluings: vec![], l_max: 2, r_min: 13 };
    let g = link_at_tree_vertex(&data).unwrap();
    validate_structure(&g).unwrap();
    // A0 - B0 - C0 - B1 - A2, with A1 and A3 isolated
    assert_eq!(g.edges.len(), 4);
    assert_eq!(weighted_girth(&g, g.x_lo).unwrap().length, None);
    let total: Rational64 = g.edges.iter().map(|e| e.weight.at(g.x_lo)).sum();
    // the two base angles of the model triangles
    assert_eq!(total, q(2, 1) * (q(1, 2) - q(1, 13)));
}

#[test]
fn two_cones_glued_at_a_tree_vertex_have_no_cycle() {
    for glue in [TreeGlue::Interior, TreeGlue::Start, TreeGlue::End] {
        let cones = match glue {
            TreeGlue::Interior => vec![(0, 1), (0, 1)],
            TreeGlue::Start => vec![(0, 1), (1, 2)],
            TreeGlue::End => vec![(0, 1), (0, 2)],
        };
        let same = glue != TreeGlue::Start;
        let data = TreeVertexLinkData { tree_edges: 3, cones, gluings: vec![(0, 1, glue, same)], l_max: 2, r_min: 13 };
        let g = link_at_tree_vertex(&data).unwrap();
        validate_structure(&g).unwrap();
        assert_eq!(weighted_girth(&g, g.x_lo).unwrap().length, None, "{glue:?}");
    }
}

#[test]
fn l_max_zero_tree_link() {
    let data = TreeVertexLinkData { tree_edges: 4, cones: vec![(0, 1), (2, 3)], gluings: vec![], l_max: 0, r_min: 7 };
    let g = link_at_tree_vertex(&data).unwrap();
    validate_structure(&g).unwrap();
    assert_eq!(g.edges.len(), 4);
}

#[test]
fn unglued_shared_edge_is_flagged() {
    let data = TreeVertexLinkData { tree_edges: 3, cones: vec![(0, 1), (1, 2)], gluings: vec![], l_max: 2, r_min: 13 };
    let g = link_at_tree_vertex(&data).unwrap();
    assert!(matches!(validate_structure(&g), Err(StructureViolation::Valence { .. })));
}

#[test]
fn circle_and_apex() {
    let c = link_at_k_center(7, 7).unwrap();
    assert_eq!(c.length, q(2, 1));
    assert!(c.passes);
    assert_eq!(link_at_k_center(10, 7).unwrap().length, q(20, 7));
    assert!(link_at_k_center(6, 7).is_err());
    assert_eq!(link_at_apex(7, None), ApexLink::Line { period: 7 });
    assert_eq!(link_at_apex(7, Some(5)).girth(), None);
}

#[test]
fn affine_display() {
    assert_eq!(Affine::new(q(1, 1), q(-2, 1)).to_string(), "(1 - 2·x)·π");
    assert_eq!(Affine::new(q(0, 1), q(2, 1)).to_string(), "(0 + 2·x)·π");
    assert_eq!(Affine::constant(q(5, 14)).to_string(), "(5/14 + 0·x)·π");
}

/// Minimal reader for the DOT subset written by `to_dot`.
fn read_dot(text: &str) -> (Vec<String>, Vec<(String, String, String)>) {
    let mut nodes = Vec::new();
    let mut edges = Vec::new();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.first(), Some(&"graph link {"));
    assert_eq!(lines.last(), Some(&"}"));
    for line in &lines[1..lines.len() - 1] {
        let line = line.trim().strip_suffix(';').expect("statement ends with ;");
        let quoted: Vec<&str> = line.split('"').collect();
        if line.contains(" -- ") {
            edges.push((quoted[1].to_string(), quoted[3].to_string(), quoted[5].to_string()));
        } else {
            nodes.push(quoted[1].to_string());
        }
    }
    (nodes, edges)
}

#[test]
fn dot_round_trip() {
    let g = link_at_tree_vertex(&three_cone_star(1, 7)).unwrap();
    let (nodes, edges) = read_dot(&g.to_dot());
    assert_eq!(nodes, g.labels);
    assert_eq!(edges.len(), g.edges.len());
    for (e, (u, v, w)) in g.edges.iter().zip(&edges) {
        assert_eq!((&g.labels[e.u], &g.labels[e.v], &e.weight.to_string()), (u, v, w));
    }
}

fn relation() -> impl Strategy<Value = SliceRelation> {
    prop_oneof![
        Just(SliceRelation::Interior),
        Just(SliceRelation::StartBoundary),
        Just(SliceRelation::EndBoundary),
        Just(SliceRelation::Corner),
    ]
}

proptest! {
    // any tree of pairwise gluings yields a valid link of girth exactly 2π
    #[test]
    fn glued_interior_links(
        parents in proptest::collection::vec((any::<prop::sample::Index>(), relation(), any::<bool>()), 0..6),
        l in 2usize..4,
    ) {
        let th = critical_angle(l, 6 * l + 1);
        let gluings = parents
            .iter()
            .enumerate()
            .map(|(k, (p, rel, same))| (p.index(k + 1), k + 1, *rel, *same))
            .collect();
        let data = InteriorLinkData { cones: parents.len() + 1, gluings };
        let g = link_at_interior_point(&data, th).unwrap();
        prop_assert_eq!(validate_structure(&g), Ok(()));
        let cert = verify_link_condition(&g).unwrap();
        prop_assert!(cert.passes);
        prop_assert_eq!(cert.girth(), Some(q(2, 1)));
    }
}
