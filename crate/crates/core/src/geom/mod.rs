//! Exact geometry of the cones attached along axes.
//!
//! A cone over an axis is developed into the plane with its apex at the
//! origin and base vertex `k` at direction `2kπ/R_min`, distance `r`. All
//! directions used by the pipeline are rational multiples of π; distances
//! from the apex are products `r·c·sin(απ)/cos(ψπ)` with rational `c, α, ψ`,
//! which covers base edges, slice boundary lines and their homothetic images
//! while keeping coincidences exactly decidable.

pub mod interval;

use std::cmp::Ordering;

use num_rational::Rational64;
use num_traits::{One, Signed, Zero};

pub use interval::Interval;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GeomError {
    #[error("R_min = {0} is below 3; cones need an apex angle below 2π/3")]
    RMinTooSmall(usize),
    #[error("a sector of {edges} edges spans at least 2π for R_min = {r_min}")]
    SectorTooWide { edges: usize, r_min: usize },
    #[error("distance from the apex is below the slice floor r·sin θ_c")]
    BelowFloor,
    #[error("point does not lie over the interval [{0}, {1}]")]
    NotOverInterval(i64, i64),
    #[error("no vertex sees the point at the critical angle; not a slice point")]
    NotInSlice,
    #[error("comparison undecided at {0} bits")]
    Inconclusive(u32),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Precision {
    pub start: u32,
    pub max: u32,
}

impl Default for Precision {
    fn default() -> Self {
        Precision { start: 64, max: 1024 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ConeGeometry {
    r_min: usize,
    pub precision: Precision,
}

impl ConeGeometry {
    pub fn new(r_min: usize) -> Result<Self, GeomError> {
        if r_min < 3 {
            return Err(GeomError::RMinTooSmall(r_min));
        }
        Ok(ConeGeometry { r_min, precision: Precision::default() })
    }

    pub fn with_precision(mut self, precision: Precision) -> Self {
        self.precision = precision;
        self
    }

    pub fn r_min(&self) -> usize {
        self.r_min
    }

    /// Apex angle of one triangle, in units of π.
    pub fn apex_angle(&self) -> Rational64 {
        Rational64::new(2, self.r_min as i64)
    }

    /// Direction of base vertex `k`, in units of π.
    pub fn vertex_direction(&self, k: i64) -> Rational64 {
        Rational64::new(2 * k, self.r_min as i64)
    }

    /// Angle at `x_0` between `O` and `x_k` in the developed cone, in units
    /// of π: the base angle of an isosceles triangle with apex `kβ`.
    pub fn base_angle(&self, k: usize) -> Rational64 {
        Rational64::new(1, 2) - Rational64::new(k as i64, self.r_min as i64)
    }

    /// Enclosure of `r = 1/(2 sin(π/R_min))`.
    pub fn radius(&self, prec: u32) -> Interval {
        let s = Interval::sin_pi(Rational64::new(1, self.r_min as i64), prec + 8);
        s.scale(&num_rational::BigRational::from_integer(2.into())).recip().expect("sin(π/R) > 0").round(prec)
    }

    /// Index of the base edge or vertex under direction `phi`.
    pub fn foot(&self, phi: Rational64) -> Foot {
        let q = phi / self.apex_angle();
        if q.is_integer() {
            Foot::Vertex(q.to_integer())
        } else {
            Foot::Edge(q.floor().to_integer())
        }
    }

    /// Comparison of two apex distances at a common direction.
    pub fn cmp_radius(&self, a: &Radius, b: &Radius) -> Result<Ordering, GeomError> {
        if a.c.is_zero() || b.c.is_zero() {
            return Ok(a.c.cmp(&b.c));
        }
        if a.c == b.c {
            let mut fa = [(Rational64::new(1, 2) - a.alpha).abs(), b.psi.abs()];
            let mut fb = [(Rational64::new(1, 2) - b.alpha).abs(), a.psi.abs()];
            fa.sort();
            fb.sort();
            if fa == fb {
                return Ok(Ordering::Equal);
            }
            if a.alpha == b.alpha {
                return Ok(a.psi.abs().cmp(&b.psi.abs()));
            }
        }
        let mut prec = self.precision.start;
        loop {
            let x = a.relative(prec);
            let y = b.relative(prec);
            if let Some(o) = x.cmp_certain(&y) {
                return Ok(o);
            }
            if prec >= self.precision.max {
                return Err(GeomError::Inconclusive(prec));
            }
            prec *= 2;
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Foot {
    Vertex(i64),
    /// Open edge from vertex `k` to `k + 1`.
    Edge(i64),
}

impl Foot {
    pub fn left_vertex(self) -> i64 {
        match self {
            Foot::Vertex(k) | Foot::Edge(k) => k,
        }
    }

    pub fn right_vertex(self) -> i64 {
        match self {
            Foot::Vertex(k) => k,
            Foot::Edge(k) => k + 1,
        }
    }
}

pub fn cone_radius(r_min: usize, prec: u32) -> Result<Interval, GeomError> {
    Ok(ConeGeometry::new(r_min)?.radius(prec))
}

/// `θ_c = π/2 − π·l_max/R_min`, stored in units of π.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct CriticalAngle {
    pub over_pi: Rational64,
}

impl CriticalAngle {
    pub fn value(&self, prec: u32) -> Interval {
        Interval::pi_mul(self.over_pi, prec)
    }

    /// Exact comparison with π/3.
    pub fn cmp_third(&self) -> Ordering {
        self.over_pi.cmp(&Rational64::new(1, 3))
    }
}

pub fn critical_angle(l_max: usize, r_min: usize) -> CriticalAngle {
    assert!(r_min >= 1, "R_min must be positive");
    CriticalAngle { over_pi: Rational64::new(1, 2) - Rational64::new(l_max as i64, r_min as i64) }
}

/// Apex distance `r·c·sin(απ)/cos(ψπ)`, with `0 < α ≤ 1/2`, `|ψ| < 1/2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Radius {
    pub c: Rational64,
    pub alpha: Rational64,
    pub psi: Rational64,
}

impl Radius {
    pub const APEX: Radius = Radius { c: Rational64::new_raw(0, 1), alpha: Rational64::new_raw(1, 2), psi: Rational64::new_raw(0, 1) };

    pub fn fraction(c: Rational64) -> Self {
        Radius { c, alpha: Rational64::new(1, 2), psi: Rational64::zero() }
    }

    /// Distance divided by `r`.
    pub fn relative(&self, prec: u32) -> Interval {
        if self.c.is_zero() {
            return Interval::int(0);
        }
        let s = Interval::sin_pi(self.alpha, prec + 8).regrid(prec + 8);
        let c = Interval::cos_pi(self.psi, prec + 8).regrid(prec + 8);
        s.div(&c).expect("|ψ| < 1/2").scale(&interval::big(self.c)).round(prec)
    }

    pub fn scaled(&self, k: Rational64) -> Self {
        Radius { c: self.c * k, ..*self }
    }
}

/// A point of a developed cone: direction from the apex (units of π,
/// relative to base vertex 0 of the chart) and apex distance.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ConePoint {
    pub phi: Rational64,
    pub radius: Radius,
}

/// Which way a boundary line leaves its base vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Heading {
    /// Towards increasing positions: the boundary at the start of a slice.
    Forward,
    Backward,
}

impl Heading {
    fn sign(self) -> i64 {
        match self {
            Heading::Forward => 1,
            Heading::Backward => -1,
        }
    }
}

impl ConePoint {
    pub fn apex() -> Self {
        ConePoint { phi: Rational64::zero(), radius: Radius::APEX }
    }

    pub fn tree_vertex(geom: &ConeGeometry, k: i64) -> Self {
        ConePoint { phi: geom.vertex_direction(k), radius: Radius::fraction(Rational64::one()) }
    }

    /// The base point in direction `phi`.
    pub fn tree(geom: &ConeGeometry, phi: Rational64) -> Self {
        ConePoint { phi, radius: tree_radius(geom, phi) }
    }

    /// `c` times the base point in direction `phi`.
    pub fn radial(geom: &ConeGeometry, phi: Rational64, c: Rational64) -> Self {
        ConePoint { phi, radius: tree_radius(geom, phi).scaled(c) }
    }

    /// The point in direction `phi` on the line through base vertex `k` at
    /// angle `θ_c` from the radius `[x_k, O]`.
    pub fn on_line(geom: &ConeGeometry, theta: CriticalAngle, k: i64, heading: Heading, phi: Rational64) -> Self {
        ConePoint { phi, radius: line_radius(geom, theta, k, heading, phi).expect("direction within the line's range") }
    }

    pub fn foot(&self, geom: &ConeGeometry) -> Foot {
        geom.foot(self.phi)
    }

    pub fn is_apex(&self) -> bool {
        self.radius.c.is_zero()
    }

    pub fn is_on_tree(&self, geom: &ConeGeometry) -> Result<bool, GeomError> {
        Ok(geom.cmp_radius(&self.radius, &tree_radius(geom, self.phi))? == Ordering::Equal)
    }

    pub fn apex_distance(&self, geom: &ConeGeometry, prec: u32) -> Interval {
        self.radius.relative(prec + 4).mul(&geom.radius(prec + 4)).round(prec)
    }

    /// Image under the reflection reversing the chart orientation.
    pub fn mirrored(&self) -> Self {
        ConePoint { phi: -self.phi, radius: Radius { psi: -self.radius.psi, ..self.radius } }
    }

    pub fn shifted(&self, geom: &ConeGeometry, k: i64) -> Self {
        ConePoint { phi: self.phi + geom.vertex_direction(k), ..*self }
    }
}

fn tree_radius(geom: &ConeGeometry, phi: Rational64) -> Radius {
    match geom.foot(phi) {
        Foot::Vertex(_) => Radius::fraction(Rational64::one()),
        Foot::Edge(k) => {
            let mid = Rational64::new(2 * k + 1, geom.r_min as i64);
            Radius { c: Rational64::one(), alpha: Rational64::new(1, 2) - Rational64::new(1, geom.r_min as i64), psi: phi - mid }
        }
    }
}

/// Apex distance at direction `phi` of the boundary line from vertex `k`;
/// `None` when the line does not reach that direction.
fn line_radius(geom: &ConeGeometry, theta: CriticalAngle, k: i64, heading: Heading, phi: Rational64) -> Option<Radius> {
    let foot = geom.vertex_direction(k) + Rational64::from_integer(heading.sign()) * (Rational64::new(1, 2) - theta.over_pi);
    let psi = phi - foot;
    (psi.abs() < Rational64::new(1, 2)).then_some(Radius { c: Rational64::one(), alpha: theta.over_pi, psi })
}

/// Does base vertex `k` see `u` and the apex at an angle of at least `θ_c`?
/// `heading` is the direction from `k` towards `u`.
pub fn sees(geom: &ConeGeometry, theta: CriticalAngle, k: i64, heading: Heading, u: &ConePoint) -> Result<Ordering, GeomError> {
    match line_radius(geom, theta, k, heading, u.phi) {
        Some(line) => geom.cmp_radius(&u.radius, &line),
        None => Ok(Ordering::Less),
    }
}

/// Planar layout of the cone over `edges` consecutive base edges.
#[derive(Clone, Debug)]
pub struct Sector {
    pub edges: usize,
    /// Base vertices `x_0, …, x_k` with the apex at the origin; each entry
    /// is `(x, y)`.
    pub base: Vec<(Interval, Interval)>,
}

pub fn develop_sector(geom: &ConeGeometry, edges: usize, prec: u32) -> Result<Sector, GeomError> {
    if edges >= geom.r_min {
        return Err(GeomError::SectorTooWide { edges, r_min: geom.r_min });
    }
    let r = geom.radius(prec + 8);
    let base = (0..=edges as i64)
        .map(|k| {
            let phi = geom.vertex_direction(k);
            (r.mul(&Interval::cos_pi(phi, prec + 8)).round(prec), r.mul(&Interval::sin_pi(phi, prec + 8)).round(prec))
        })
        .collect();
    Ok(Sector { edges, base })
}

impl Sector {
    pub fn squared_distance(&self, i: usize, j: usize) -> Interval {
        let (a, b) = (&self.base[i], &self.base[j]);
        a.0.sub(&b.0).square().add(&a.1.sub(&b.1).square())
    }

    pub fn squared_leg(&self, i: usize) -> Interval {
        let p = &self.base[i];
        p.0.square().add(&p.1.square())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SliceRelation {
    Outside,
    Interior,
    /// On the boundary line from the start vertex only.
    StartBoundary,
    EndBoundary,
    /// On both boundary lines: the innermost point of the slice.
    Corner,
}

impl SliceRelation {
    pub fn contains(self) -> bool {
        self != SliceRelation::Outside
    }
}

/// The slice of a cone over the axis interval `[start, end]` (chart
/// vertex indices).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SliceRegion {
    pub start: i64,
    pub end: i64,
}

impl SliceRegion {
    pub fn new(start: i64, end: i64) -> Self {
        assert!(start <= end);
        SliceRegion { start, end }
    }

    pub fn edges(&self) -> usize {
        (self.end - self.start) as usize
    }

    pub fn lies_over(&self, geom: &ConeGeometry, u: &ConePoint) -> bool {
        geom.vertex_direction(self.start) <= u.phi && u.phi <= geom.vertex_direction(self.end)
    }

    pub fn relation(&self, geom: &ConeGeometry, theta: CriticalAngle, u: &ConePoint) -> Result<SliceRelation, GeomError> {
        if !self.lies_over(geom, u) || u.is_apex() {
            return Ok(SliceRelation::Outside);
        }
        let a = sees(geom, theta, self.start, Heading::Forward, u)?;
        let b = sees(geom, theta, self.end, Heading::Backward, u)?;
        let mid = (geom.vertex_direction(self.start) + geom.vertex_direction(self.end)) / Rational64::from_integer(2);
        Ok(match (a, b) {
            (Ordering::Less, _) | (_, Ordering::Less) => SliceRelation::Outside,
            // over l_max edges both boundary lines are the chord; which one
            // bounds the slice at u depends on the side of the midpoint
            (Ordering::Equal, Ordering::Equal) => match u.phi.cmp(&mid) {
                Ordering::Less => SliceRelation::StartBoundary,
                Ordering::Greater => SliceRelation::EndBoundary,
                Ordering::Equal => SliceRelation::Corner,
            },
            (Ordering::Equal, _) => SliceRelation::StartBoundary,
            (_, Ordering::Equal) => SliceRelation::EndBoundary,
            _ => SliceRelation::Interior,
        })
    }

    /// Closed membership: both endpoint angles at least `θ_c`.
    pub fn contains(&self, geom: &ConeGeometry, theta: CriticalAngle, u: &ConePoint) -> Result<bool, GeomError> {
        if !self.lies_over(geom, u) {
            return Err(GeomError::NotOverInterval(self.start, self.end));
        }
        Ok(self.relation(geom, theta, u)?.contains())
    }

    /// The innermost point, where the two boundary lines meet.
    pub fn corner(&self, geom: &ConeGeometry, theta: CriticalAngle) -> ConePoint {
        let phi = (geom.vertex_direction(self.start) + geom.vertex_direction(self.end)) / Rational64::from_integer(2);
        ConePoint::on_line(geom, theta, self.start, Heading::Forward, phi)
    }
}

/// Slice floor `r·sin θ_c`, as a fraction of `r`.
pub fn floor_radius(theta: CriticalAngle) -> Radius {
    Radius { c: Rational64::one(), alpha: theta.over_pi, psi: Rational64::zero() }
}

/// `θ(t)`: the angle at `u` between the geodesic to a vertex seeing `u` at
/// `θ_c` and the radius. By the sine rule in the triangle `(O, x, u)` with
/// `|Ox| = r`, `sin θ(t) = (r/t)·sin θ_c`, taken in `[θ_c, π/2]`.
pub fn theta_of_t(geom: &ConeGeometry, theta: CriticalAngle, t: &Interval, prec: u32) -> Result<Interval, GeomError> {
    // asin is steep near 1, so y needs twice the bits
    let r = geom.radius(2 * prec + 16);
    let y = r.mul(&Interval::sin_pi(theta.over_pi, 2 * prec + 16)).div(t).ok_or(GeomError::BelowFloor)?;
    let one = Interval::int(1);
    match y.cmp_certain(&one) {
        Some(Ordering::Greater) => Err(GeomError::BelowFloor),
        _ => {
            let clipped = if y.hi() > one.hi() { Interval::new(y.lo().min(one.lo()), one.hi()) } else { y };
            Ok(Interval::asin_on(&clipped, theta.over_pi, prec))
        }
    }
}

/// `I_u`: from the foot of `u`, the nearest base vertex on each side that
/// sees `O` and `u` at an angle of at least `θ_c`. Base points give the
/// minimal subcomplex containing them. `reach` bounds the search.
pub fn interval_i_u(geom: &ConeGeometry, theta: CriticalAngle, u: &ConePoint, reach: i64) -> Result<(i64, i64), GeomError> {
    let foot = u.foot(geom);
    if u.is_on_tree(geom)? {
        return Ok((foot.left_vertex(), foot.right_vertex()));
    }
    let mut left = None;
    for k in (foot.left_vertex() - reach..=foot.left_vertex()).rev() {
        if sees(geom, theta, k, Heading::Forward, u)? != Ordering::Less {
            left = Some(k);
            break;
        }
    }
    let mut right = None;
    for k in foot.right_vertex()..=foot.right_vertex() + reach {
        if sees(geom, theta, k, Heading::Backward, u)? != Ordering::Less {
            right = Some(k);
            break;
        }
    }
    match (left, right) {
        (Some(a), Some(b)) => Ok((a, b)),
        _ => Err(GeomError::NotInSlice),
    }
}

#[cfg(test)]
mod tests;
