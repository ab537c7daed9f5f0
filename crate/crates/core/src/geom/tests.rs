use super::*;
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use std::f64::consts::PI;

fn q(n: i64, d: i64) -> Rational64 {
    Rational64::new(n, d)
}

fn bq(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// f64 planar model: apex at the origin, vertex k at angle 2kπ/R.
struct Plane {
    r: f64,
    beta: f64,
    theta_c: f64,
}

impl Plane {
    fn new(r_min: usize, l_max: usize) -> Self {
        let beta = 2.0 * PI / r_min as f64;
        Plane { r: 1.0 / (2.0 * (PI / r_min as f64).sin()), beta, theta_c: PI / 2.0 - PI * l_max as f64 / r_min as f64 }
    }

    fn vertex(&self, k: i64) -> (f64, f64) {
        let a = self.beta * k as f64;
        (self.r * a.cos(), self.r * a.sin())
    }

    fn point(&self, geom: &ConeGeometry, u: &ConePoint) -> (f64, f64) {
        let rho = u.radius.relative(60).to_f64() * self.r;
        let a = PI * (*u.phi.numer() as f64) / (*u.phi.denom() as f64);
        let _ = geom;
        (rho * a.cos(), rho * a.sin())
    }

    /// Angle at vertex k between the apex and u.
    fn angle_at(&self, k: i64, u: (f64, f64)) -> f64 {
        let x = self.vertex(k);
        let a = (-x.0, -x.1);
        let b = (u.0 - x.0, u.1 - x.1);
        let c = (a.0 * b.0 + a.1 * b.1) / ((a.0.hypot(a.1)) * (b.0.hypot(b.1)));
        c.clamp(-1.0, 1.0).acos()
    }
}

#[test]
fn radius_examples() {
    assert!(cone_radius(6, 64).unwrap().contains(&bq(1, 1)));
    let r4 = cone_radius(4, 64).unwrap();
    assert!(r4.square().contains(&bq(1, 2)));
    let r12 = cone_radius(12, 80).unwrap();
    let oracle = 1.0 / (2.0 * (PI / 12.0).sin());
    assert!((r12.to_f64() - oracle).abs() < 1e-14);
    assert!((r12.to_f64() - 1.93185).abs() < 1e-5);
    assert_eq!(cone_radius(2, 64), Err(GeomError::RMinTooSmall(2)));
}

#[test]
fn radius_grows_with_r_min() {
    let mut prev = cone_radius(3, 64).unwrap();
    assert!(prev.lo() > bq(1, 2));
    for r in 4..40 {
        let cur = cone_radius(r, 64).unwrap();
        assert_eq!(prev.cmp_certain(&cur), Some(Ordering::Less));
        prev = cur;
    }
}

#[test]
fn critical_angle_examples() {
    assert_eq!(critical_angle(1, 6).over_pi, q(1, 3));
    assert_eq!(critical_angle(1, 7).over_pi, q(5, 14));
    assert_eq!(critical_angle(0, 7).over_pi, q(1, 2));
    assert_eq!(critical_angle(1, 6).cmp_third(), Ordering::Equal);
    assert_eq!(critical_angle(1, 7).cmp_third(), Ordering::Greater);
}

#[test]
fn sector_layout() {
    let g = ConeGeometry::new(8).unwrap();
    let s = develop_sector(&g, 2, 80).unwrap();
    let r = g.radius(80);
    for k in 0..=2 {
        assert!(s.squared_leg(k).sub(&r.square()).contains(&bq(0, 1)));
    }
    for k in 0..2 {
        assert!(s.squared_distance(k, k + 1).contains(&bq(1, 1)));
    }
    // apex sector π/2: the chord satisfies c² = 2r²(1 − cos(π/2))
    let chord = s.squared_distance(0, 2);
    assert!(chord.sub(&r.square().scale(&bq(2, 1))).contains(&bq(0, 1)));
    assert_eq!(develop_sector(&g, 0, 64).unwrap().base.len(), 1);
    assert!(develop_sector(&g, 8, 64).is_err());
}

#[test]
fn model_triangle_law_of_cosines() {
    for r_min in [3, 5, 7, 12, 30] {
        let g = ConeGeometry::new(r_min).unwrap();
        let r = g.radius(96);
        let c = Interval::cos_pi(g.apex_angle(), 96);
        // 1 = 2r²(1 − cos β)
        let one = r.square().scale(&bq(2, 1)).mul(&Interval::int(1).sub(&c));
        assert!(one.contains(&bq(1, 1)), "{r_min}");
    }
}

#[test]
fn slice_examples() {
    let (r_min, l_max) = (7, 1);
    let g = ConeGeometry::new(r_min).unwrap();
    let th = critical_angle(l_max, r_min);
    let s = SliceRegion::new(0, 1);
    let x2 = ConePoint::tree_vertex(&g, 1);
    assert!(s.contains(&g, th, &x2).unwrap());
    assert_eq!(sees(&g, th, 0, Heading::Forward, &x2).unwrap(), Ordering::Equal);
    assert!(!s.relation(&g, th, &ConePoint::apex()).unwrap().contains());
    for phi in [q(0, 1), q(1, 14), q(1, 7), q(3, 14), q(2, 7)] {
        assert!(s.contains(&g, th, &ConePoint::tree(&g, phi)).unwrap());
    }
    assert_eq!(s.relation(&g, th, &s.corner(&g, th)).unwrap(), SliceRelation::Corner);
    // just below the corner along the radius is outside
    let below = ConePoint { phi: q(1, 7), radius: s.corner(&g, th).radius.scaled(q(99, 100)) };
    assert_eq!(s.relation(&g, th, &below).unwrap(), SliceRelation::Outside);
    assert!(s.contains(&g, th, &ConePoint::tree_vertex(&g, 3)).is_err());
}

#[test]
fn slice_boundary_lines() {
    let (r_min, l_max) = (13, 2);
    let g = ConeGeometry::new(r_min).unwrap();
    let th = critical_angle(l_max, r_min);
    let s = SliceRegion::new(0, 2);
    let phi = q(1, 13);
    let on_start = ConePoint::on_line(&g, th, 0, Heading::Forward, phi);
    assert_eq!(s.relation(&g, th, &on_start).unwrap(), SliceRelation::StartBoundary);
    let on_end = ConePoint::on_line(&g, th, 2, Heading::Backward, q(3, 13));
    assert_eq!(s.relation(&g, th, &on_end).unwrap(), SliceRelation::EndBoundary);
    // boundary lines depend only on their base vertex
    let s2 = SliceRegion::new(0, 1);
    let near = ConePoint::on_line(&g, th, 0, Heading::Forward, q(1, 26));
    assert_eq!(s.relation(&g, th, &near).unwrap(), SliceRelation::StartBoundary);
    assert_eq!(s2.relation(&g, th, &near).unwrap(), SliceRelation::StartBoundary);
    // over one edge, the midpoint of the start line is the corner
    assert_eq!(s2.relation(&g, th, &on_start).unwrap(), SliceRelation::Corner);
    // the corner of a shorter interval is above the floor
    let c2 = s2.corner(&g, th);
    assert_eq!(g.cmp_radius(&c2.radius, &floor_radius(th)).unwrap(), Ordering::Greater);
    assert_eq!(g.cmp_radius(&s.corner(&g, th).radius, &floor_radius(th)).unwrap(), Ordering::Equal);
}

#[test]
fn relation_mirrors() {
    let (r_min, l_max) = (13, 2);
    let g = ConeGeometry::new(r_min).unwrap();
    let th = critical_angle(l_max, r_min);
    let s = SliceRegion::new(0, 2);
    let m = SliceRegion::new(-2, 0);
    for u in [
        ConePoint::on_line(&g, th, 0, Heading::Forward, q(1, 13)),
        ConePoint::radial(&g, q(3, 26), q(19, 20)),
        s.corner(&g, th),
    ] {
        let a = s.relation(&g, th, &u).unwrap();
        let b = m.relation(&g, th, &u.mirrored()).unwrap();
        let swapped = match a {
            SliceRelation::StartBoundary => SliceRelation::EndBoundary,
            SliceRelation::EndBoundary => SliceRelation::StartBoundary,
            x => x,
        };
        assert_eq!(b, swapped);
    }
}

#[test]
fn sees_matches_planar_oracle() {
    for (r_min, l_max) in [(7, 1), (13, 2), (20, 3)] {
        let g = ConeGeometry::new(r_min).unwrap();
        let th = critical_angle(l_max, r_min);
        let p = Plane::new(r_min, l_max);
        for num in 1..(8 * l_max as i64) {
            let phi = q(num, 4 * r_min as i64);
            for c in [q(3, 4), q(17, 20), q(9, 10), q(19, 20), q(99, 100)] {
                let u = ConePoint::radial(&g, phi, c);
                let xy = p.point(&g, &u);
                for k in -1..=(l_max as i64 + 1) {
                    let heading = if g.vertex_direction(k) <= phi { Heading::Forward } else { Heading::Backward };
                    let ang = p.angle_at(k, xy);
                    if (ang - p.theta_c).abs() < 1e-9 {
                        continue;
                    }
                    let exact = sees(&g, th, k, heading, &u).unwrap();
                    // vertices far behind the point never see it at θ_c
                    if heading == Heading::Forward && (phi - g.vertex_direction(k)) >= q(1, 2) {
                        continue;
                    }
                    assert_eq!(exact == Ordering::Less, ang < p.theta_c, "R={r_min} phi={phi} c={c} k={k}");
                }
            }
        }
    }
}

#[test]
fn theta_of_t_values() {
    let (r_min, l_max) = (7, 1);
    let g = ConeGeometry::new(r_min).unwrap();
    let th = critical_angle(l_max, r_min);
    let r = g.radius(80);
    let floor = r.mul(&Interval::sin_pi(th.over_pi, 80));
    let at_floor = theta_of_t(&g, th, &floor, 40).unwrap();
    assert!((at_floor.to_f64() - PI / 2.0).abs() < 1e-9);
    let at_r = theta_of_t(&g, th, &r, 40).unwrap();
    assert!((at_r.to_f64() - 5.0 * PI / 14.0).abs() < 1e-9);
    let below = floor.scale(&bq(9, 10));
    assert_eq!(theta_of_t(&g, th, &below, 40), Err(GeomError::BelowFloor));
}

#[test]
fn theta_of_t_against_planar_construction() {
    // walk along the line from x_0 at angle θ_c and measure the angle with
    // the radius directly
    for (r_min, l_max) in [(7, 1), (13, 2), (25, 4)] {
        let p = Plane::new(r_min, l_max);
        let g = ConeGeometry::new(r_min).unwrap();
        let th = critical_angle(l_max, r_min);
        let x = p.vertex(0);
        let d = (-p.theta_c.cos(), p.theta_c.sin());
        let foot = p.r * p.theta_c.cos();
        let mut prev = 0.0;
        for i in 1..20 {
            let s = foot * i as f64 / 20.0;
            let u = (x.0 + s * d.0, x.1 + s * d.1);
            let t = u.0.hypot(u.1);
            let direct = ((d.0 * u.0 + d.1 * u.1) / t).abs().acos();
            let direct = direct.min(PI - direct);
            let tq = BigRational::from_float(t).unwrap();
            let computed = theta_of_t(&g, th, &Interval::point(tq), 40).unwrap().to_f64();
            assert!((computed - direct).abs() < 1e-9, "R={r_min} i={i}");
            // θ(t) increases as t decreases along the line
            assert!(computed > prev);
            prev = computed;
        }
    }
}

#[test]
fn i_u_examples() {
    let (r_min, l_max) = (7, 1);
    let g = ConeGeometry::new(r_min).unwrap();
    let th = critical_angle(l_max, r_min);
    assert_eq!(interval_i_u(&g, th, &ConePoint::tree_vertex(&g, 3), 10).unwrap(), (3, 3));
    assert_eq!(interval_i_u(&g, th, &ConePoint::tree(&g, q(5, 7)), 10).unwrap(), (2, 3));
    // at the slice floor both seeing points are the ends of the interval
    let s = SliceRegion::new(0, 1);
    assert_eq!(interval_i_u(&g, th, &s.corner(&g, th), 10).unwrap(), (0, 1));
    assert_eq!(interval_i_u(&g, th, &ConePoint::radial(&g, q(1, 7), q(1, 4)), 2), Err(GeomError::NotInSlice));
}

fn slice_point() -> impl Strategy<Value = (usize, usize, i64, i64, i64, i64)> {
    // (R_min, l_max, interval length, direction numerator over 4R, c numerator over 1000)
    (1usize..4).prop_flat_map(|l_max| {
        (6 * l_max + 1..6 * l_max + 12).prop_flat_map(move |r_min| {
            (Just(r_min), Just(l_max), 0..=l_max as i64).prop_flat_map(move |(r, l, len)| {
                (Just(r), Just(l), Just(len), 0..=(4 * len), 850i64..1000, Just(0))
            })
        })
    })
}

proptest! {
    #[test]
    fn slice_points_lie_above_floor((r_min, l_max, len, num, c, _) in slice_point()) {
        let g = ConeGeometry::new(r_min).unwrap();
        let th = critical_angle(l_max, r_min);
        let s = SliceRegion::new(0, len);
        let u = ConePoint::radial(&g, q(num, 2 * r_min as i64), q(c, 1000));
        if s.contains(&g, th, &u).unwrap() {
            prop_assert_ne!(g.cmp_radius(&u.radius, &floor_radius(th)).unwrap(), Ordering::Less);
            // and √3/2 < sin θ_c
            let sin = Interval::sin_pi(th.over_pi, 64);
            prop_assert!(sin.square().lo() > bq(3, 4));
            let (a, b) = interval_i_u(&g, th, &u, 2 * r_min as i64).unwrap();
            prop_assert!(0 <= a && b <= len, "I_u = [{a}, {b}] escapes [0, {len}]");
            prop_assert!(b - a <= l_max as i64 + 1);
        }
    }

    #[test]
    fn theta_c_above_third_on_random_pairs(l_max in 0usize..50, extra in 1usize..200) {
        let r_min = 6 * l_max + extra;
        prop_assert_eq!(critical_angle(l_max, r_min).cmp_third(), Ordering::Greater);
    }
}

