use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use shapekit::buildings::{obstruction_scan, AreaRule, Scenario};
use shapekit::ech::{grading, OrbitSet};
use shapekit::exactnum::{q, qi};
use shapekit::fredholm::{rigid_negative_degree, RigidFamily};
use shapekit::linf::pairing_coefficient;
use shapekit::reeb::Ellipsoid;
use shapekit::shape::{includes, plot, reduce_basis, reduced_shape, Domain4D};
use shapekit::PerturbedRational;

fn ech(c: &mut Criterion) {
    let e = Ellipsoid::unit_k(5);
    c.bench_function("grading E(1,5+e) a1^40 a2^8", |b| {
        b.iter(|| grading(black_box(&e), &OrbitSet::new(40, 8)).unwrap())
    });
    c.bench_function("rigid degree k=10 m=20", |b| {
        b.iter(|| rigid_negative_degree(black_box(10), 20, RigidFamily::Pure).unwrap())
    });
}

fn shapes(c: &mut Criterion) {
    let (w1, w2) = (q(355, 113), q(1103, 113));
    c.bench_function("reduce_basis", |b| b.iter(|| reduce_basis(black_box(&w1), black_box(&w2)).unwrap()));
    let x = reduced_shape(&Domain4D::polydisk(qi(1), qi(6)).unwrap());
    let y = reduced_shape(&Domain4D::ellipsoid(q(3, 2), qi(6)).unwrap());
    c.bench_function("includes P(1,6) in E(3/2,6)", |b| b.iter(|| includes(black_box(&x), black_box(&y)).unwrap()));
    let e = reduced_shape(&Domain4D::ellipsoid(qi(2), qi(4)).unwrap());
    c.bench_function("svg E(2,4)", |b| b.iter(|| plot::to_svg(black_box(&e), &qi(5))));
}

fn buildings(c: &mut Criterion) {
    let a = PerturbedRational::from_rational(q(3, 2));
    let bb = &a.times(3) + &PerturbedRational::eps();
    c.bench_function("obstruction scan a=3/2 k=3 x=5", |b| {
        b.iter(|| obstruction_scan(&a, &bb, &qi(5), Scenario::Full, 15, AreaRule::default()).unwrap())
    });
}

fn linf(c: &mut Criterion) {
    c.bench_function("pairing coefficient k=8", |b| b.iter(|| pairing_coefficient(black_box(8)).unwrap()));
}

criterion_group!(kernels, ech, shapes, buildings, linf);
criterion_main!(kernels);
