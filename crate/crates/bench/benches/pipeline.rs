use criterion::{criterion_group, criterion_main, BatchSize, Criterion};
use gsc_core::complex::{build_coned_off, certified_region, compute_slice_gluings};
use gsc_core::geom::ConeGeometry;
use gsc_core::group::GroupBackend;
use gsc_core::link::verify_link_condition;
use gsc_core::rotation::{compute_l_max, RotationFamily};

const PASSING: &str = "a^-1 b^-1 a b^-1 b^-1 a^-1 a^-1 b^-1 b^-1 a b a b";

fn cases() -> Vec<(&'static str, GroupBackend, RotationFamily)> {
    let free2 = GroupBackend::free_rank(2).unwrap();
    let free3 = GroupBackend::free_rank(3).unwrap();
    let a7 = RotationFamily::from_words(&free2, &["a^7"]).unwrap();
    let sc = RotationFamily::from_words(&free2, &[PASSING]).unwrap();
    let hex = RotationFamily::from_words(&free3, &["c a^-1 b b c a b^-1"]).unwrap();
    vec![("a7", free2.clone(), a7), ("passing", free2, sc), ("hexagon", free3, hex)]
}

fn stages(c: &mut Criterion) {
    for (name, b, fam) in cases() {
        let l = compute_l_max(&b, &fam).unwrap().l_max.unwrap();
        let geom = ConeGeometry::new(fam.r_min().unwrap()).unwrap();
        c.bench_function(&format!("{name}/l_max"), |x| x.iter(|| compute_l_max(&b, &fam).unwrap()));
        c.bench_function(&format!("{name}/region"), |x| x.iter(|| certified_region(&b, &fam, l).unwrap()));
        let ball = certified_region(&b, &fam, l).unwrap();
        c.bench_function(&format!("{name}/cone_off"), |x| {
            x.iter_batched(
                || ball.clone(),
                |ball| compute_slice_gluings(&b, build_coned_off(&b, &ball, &fam, geom, l).unwrap()).unwrap(),
                BatchSize::SmallInput,
            )
        });
        let cx = compute_slice_gluings(&b, build_coned_off(&b, &ball, &fam, geom, l).unwrap()).unwrap();
        let links: Vec<_> = cx.tree_vertex_samples(&b).unwrap().into_iter().map(|t| t.link).collect();
        c.bench_function(&format!("{name}/tree_vertex_links"), |x| {
            x.iter(|| links.iter().all(|g| verify_link_condition(g).unwrap().passes))
        });
    }
}

criterion_group!(benches, stages);
criterion_main!(benches);
