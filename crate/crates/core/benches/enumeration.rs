use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use pwlgen::bivariate::{build_bivariate, six_stencil_cover, Diagonal, GridTriangulation};
use pwlgen::geometry::enumerate_vertices_with;
use pwlgen::par::Exec;
use pwlgen::sos2::{build_sos2, sos2_family, Method};
use pwlgen::verify::{check_disjunctive_faces_with, lambda_family, FaceImage};

const MODES: [(&str, Exec); 2] = [
    ("sequential", Exec::Sequential),
    ("parallel", Exec::Parallel),
];

fn vertices(c: &mut Criterion) {
    let mut group = c.benchmark_group("relaxation_vertices");
    group.sample_size(10);
    let gt = GridTriangulation::uniform(2, 2, Diagonal::Senw).unwrap();
    let cases = [
        ("dlog_d8", build_sos2(Method::DLog, 8).unwrap()),
        ("cc_d9", build_sos2(Method::Cc, 9).unwrap()),
        (
            "bivariate_2x2_zzi",
            build_bivariate(
                &gt,
                Some(Method::Zzi),
                Some(Method::Zzi),
                &six_stencil_cover(&gt),
            )
            .unwrap(),
        ),
    ];
    for (name, frag) in &cases {
        let p = frag.relaxation();
        for (mode, exec) in MODES {
            group.bench_with_input(BenchmarkId::new(*name, mode), &p, |b, p| {
                b.iter(|| enumerate_vertices_with(black_box(p), exec).unwrap())
            });
        }
    }
    group.finish();
}

fn faces(c: &mut Criterion) {
    let mut group = c.benchmark_group("code_faces");
    group.sample_size(10);
    let frag = build_sos2(Method::Zzi, 9).unwrap();
    let family = lambda_family(10, &sos2_family(9));
    for (mode, exec) in MODES {
        group.bench_function(BenchmarkId::new("zzi_d9", mode), |b| {
            b.iter(|| {
                check_disjunctive_faces_with(black_box(&frag), &family, FaceImage::Lambda, exec)
                    .unwrap()
            })
        });
    }
    group.finish();
}

criterion_group!(benches, vertices, faces);
criterion_main!(benches);
