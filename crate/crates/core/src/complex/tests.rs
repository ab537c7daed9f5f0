use std::collections::{BTreeSet, HashMap};

use num_rational::Rational64;

use super::*;
use crate::geom::ConeGeometry;
use crate::group::z3_z5;
use crate::link::{validate_structure, verify_link_condition};
use crate::rotation::compute_l_max;

const PASSING: &str = "a^-1 b^-1 a b^-1 b^-1 a^-1 a^-1 b^-1 b^-1 a b a b";

fn free2() -> GroupBackend {
    GroupBackend::free_rank(2).unwrap()
}

fn complex(b: &GroupBackend, words: &[&str], ball: Option<usize>) -> ConedComplex {
    let fam = RotationFamily::from_words(b, words).unwrap();
    let l = compute_l_max(b, &fam).unwrap().l_max.unwrap();
    let ball = match ball {
        Some(r) => TreeBall::build(b, r).unwrap(),
        None => certified_region(b, &fam, l).unwrap(),
    };
    let geom = ConeGeometry::new(fam.r_min().unwrap().max(3)).unwrap();
    compute_slice_gluings(b, build_coned_off(b, &ball, &fam, geom, l).unwrap()).unwrap()
}

#[test]
fn empty_family() {
    let b = free2();
    let ball = TreeBall::build(&b, 3).unwrap();
    let fam = RotationFamily::from_words(&b, &[]).unwrap();
    let cx = build_coned_off(&b, &ball, &fam, ConeGeometry::new(7).unwrap(), 0).unwrap();
    assert!(cx.charts.is_empty());
    assert_eq!(cx.ball.len(), ball.len());
    assert_eq!(cx.euler_characteristic(), 1);
}

#[test]
fn a7_charts_match_coset_lines() {
    let b = free2();
    let cx = complex(&b, &["a^7"], Some(8));
    // oracle: join each vertex v to v·a inside the ball; lines with an edge
    let a = b.element("a").unwrap();
    let verts = cx.ball.vertices();
    let index: HashMap<_, _> = verts.iter().enumerate().map(|(i, v)| (v.clone(), i)).collect();
    let mut parent: Vec<usize> = (0..verts.len()).collect();
    fn root(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            x = p[x];
        }
        x
    }
    let mut edges = 0;
    for (i, v) in verts.iter().enumerate() {
        let w = b.act(&b.mul(&b.vertex_as_path(v), &a), &TreeVertex::root());
        if let Some(&j) = index.get(&w) {
            edges += 1;
            let (ri, rj) = (root(&mut parent, i), root(&mut parent, j));
            parent[ri.max(rj)] = ri.min(rj);
        }
    }
    let sizes = (0..verts.len()).fold(HashMap::new(), |mut m, i| {
        *m.entry(root(&mut parent, i)).or_insert(0) += 1;
        m
    });
    let lines = sizes.values().filter(|&&n| n >= 2).count();
    assert_eq!(cx.charts.len(), lines);
    assert_eq!(cx.charts.iter().map(ConeChart::triangles).sum::<usize>(), edges);
    assert!(cx.edge_classes(&b).values().all(|c| c.len() == 1));
    assert_eq!(cx.slice_count(), 0);
    assert_eq!(cx.euler_characteristic(), 1);
}

#[test]
fn one_shared_edge_gives_one_slice() {
    let b = free2();
    let cx = complex(&b, &["a b b", "a b^-1 b^-1"], None);
    let (x, y) = (cx.member_charts[0], cx.member_charts[1]);
    let links: Vec<_> = cx.slices[x].iter().filter(|l| l.other == y).collect();
    assert_eq!(links.len(), 1);
    assert_eq!((links[0].start, links[0].end, links[0].other_start, links[0].same_orientation), (0, 1, 0, true));
    let back = cx.slices[y].iter().find(|l| l.other == x).unwrap();
    assert_eq!((back.start, back.end), (0, 1));
}

#[test]
fn three_slices_over_one_edge_close_up() {
    let b = free2();
    let cx = complex(&b, &["a b b", "a b^-1 b^-1", "a a b"], None);
    let e = (TreeVertex::root(), b.act(&b.element("a").unwrap(), &TreeVertex::root()));
    let class = &cx.edge_classes(&b)[&e];
    for m in &cx.member_charts {
        assert!(class.contains(m));
    }
    // a point high over the shared edge lies in all three slices
    let g = &cx.geometry;
    let mid = g.vertex_direction(1) / 2;
    let u = ConePoint::radial(g, mid, Rational64::new(99, 100));
    let glued = cx.glued_class(cx.member_charts[0], &u).unwrap();
    let charts: BTreeSet<usize> = glued.members.iter().map(|m| m.0).collect();
    assert!(cx.member_charts.iter().all(|m| charts.contains(m)));
    assert_eq!(charts.len(), class.len());
}

#[test]
fn transfer_preserves_tree_coordinates() {
    let b = free2();
    let cx = complex(&b, &[PASSING], None);
    let g = &cx.geometry;
    let step = g.vertex_direction(1);
    for (x, links) in cx.slices.iter().enumerate() {
        for l in links {
            for k in l.start..=l.end {
                let p = l.transfer(g, &ConePoint::tree_vertex(g, k));
                let k2 = (p.phi / step).to_integer();
                assert_eq!(p.phi, g.vertex_direction(k2));
                assert_eq!(cx.charts[x].axis.point(&b, k), cx.charts[l.other].axis.point(&b, k2));
            }
            let u = ConePoint::radial(g, (g.vertex_direction(l.start) + g.vertex_direction(l.end)) / 2, Rational64::new(9, 10));
            let back = cx.slices[l.other].iter().find(|m| m.other == x).unwrap();
            assert_eq!(back.transfer(g, &l.transfer(g, &u)), u);
        }
    }
}

#[test]
fn glued_classes_are_symmetric() {
    let b = free2();
    let cx = complex(&b, &[PASSING], None);
    for u in cx.arrangement_points(0).unwrap().iter().step_by(7) {
        let class = cx.glued_class(cx.member_charts[0], u).unwrap();
        for &(c, p) in &class.members {
            let other = cx.glued_class(c, &p).unwrap();
            assert_eq!(other.members.len(), class.members.len());
            assert!(other.members.iter().any(|&(d, q)| d == cx.member_charts[0] && q == *u));
        }
    }
}

#[test]
fn errors() {
    let b = free2();
    let fam = RotationFamily::from_words(&b, &[PASSING]).unwrap();
    let small = TreeBall::build(&b, 2).unwrap();
    let geom = ConeGeometry::new(13).unwrap();
    assert!(matches!(build_coned_off(&b, &small, &fam, geom, 2), Err(ComplexError::BallTooSmall { .. })));
    let region = certified_region(&b, &fam, 2).unwrap();
    let cx = build_coned_off(&b, &region, &fam, geom, 1).unwrap();
    assert!(matches!(compute_slice_gluings(&b, cx), Err(ComplexError::OverlapExceeds { edges: 2, l_max: 1, .. })));
}

#[test]
fn polygonal_data() {
    let b = free2();
    let fam = RotationFamily::from_words(&b, &["a^7", "a b a b^-1 b^-1"]).unwrap();
    let theta = crate::geom::critical_angle(0, 5);
    let data = build_polygonal_data(&fam, theta);
    assert_eq!((data[0].polygon_edges, data[0].rotation_step, data[0].rotation_order), (7, 1, 7));
    assert_eq!((data[1].polygon_edges, data[1].rotation_step, data[1].rotation_order), (5, 5, 1));
    assert!(data.iter().all(|d| d.ribbon_avoids_slices));
    assert!(!build_polygonal_data(&fam, crate::geom::critical_angle(2, 6))[0].ribbon_avoids_slices);
}

#[test]
fn sampled_links_of_passing_relator() {
    let b = free2();
    let cx = complex(&b, &[PASSING], None);
    let samples = cx.interior_samples().unwrap();
    assert!(samples.iter().any(|s| s.cones >= 3));
    for s in &samples {
        validate_structure(&s.link).unwrap();
        let cert = verify_link_condition(&s.link).unwrap();
        assert!(cert.passes);
        assert_eq!(cert.at_lo.length, Some(Rational64::from_integer(2)));
        assert_eq!(cert.at_hi.length, Some(Rational64::from_integer(2)));
    }
    let tree = cx.tree_vertex_samples(&b).unwrap();
    assert_eq!(tree.len(), 1);
    validate_structure(&tree[0].link).unwrap();
    assert_eq!(verify_link_condition(&tree[0].link).unwrap().girth(), Some(Rational64::new(27, 13)));
}

#[test]
fn free_stabilizers_are_trivial() {
    let b = free2();
    let cx = complex(&b, &[PASSING], None);
    let mut points = cx.arrangement_points(0).unwrap();
    points.extend((0..13).map(|k| ConePoint::tree_vertex(&cx.geometry, k)));
    for u in &points {
        let st = cx.point_stabilizer(&b, 0, u).unwrap();
        assert_eq!(st.kind, StabilizerKind::Trivial);
        assert!(st.verified);
    }
}

#[test]
fn amalgam_stabilizers_lie_in_vertex_groups() {
    let b = z3_z5();
    let cx = complex(&b, &["(s t)^7", "(s t^2)^7"], None);
    assert_eq!(cx.l_max, 2);
    for m in 0..2 {
        let mut points = cx.arrangement_points(m).unwrap();
        assert!(!points.is_empty());
        points.extend((0..=2).map(|k| ConePoint::tree_vertex(&cx.geometry, k)));
        for u in &points {
            let st = cx.point_stabilizer(&b, m, u).unwrap();
            assert!(st.verified);
            if st.kind == StabilizerKind::Trivial {
                continue;
            }
            let (va, vb) = st.ends.clone().unwrap();
            assert_eq!(va, vb, "only vertices have non-trivial stabilizers here");
            let group: BTreeSet<_> = b.vertex_stabilizer(&va).into_iter().collect();
            assert!(st.elements.iter().all(|g| group.contains(g)));
            assert_eq!(st.order(), group.len());
        }
    }
}
