//! Geometric small cancellation over groups acting on trees: rotation
//! families, coned-off complexes with slice identifications, complexes of
//! groups and exact link-girth certificates.

pub mod group;
pub mod link;
pub mod geom;
pub mod rotation;
pub mod complex;
pub mod cx;
