use criterion::{black_box, criterion_group, criterion_main, Criterion};
use entrochar::entropy_lp::GroundSet;
use entrochar::netcode::AuxSpec;
use entrochar::{
    elemental_inequalities, enumerate_partitions, example_network, feasibility, joint_entropy, membership,
    oracle_from_distribution, reconstruct_scalar, vector_equivalent, DiscreteDistribution, LinearConstraint,
    RandomVectorDistribution, VarSet,
};

fn skewed(n: usize) -> DiscreteDistribution {
    let w: Vec<f64> = (1..=n).map(|i| 1.0 / i as f64).collect();
    let z: f64 = w.iter().sum();
    DiscreteDistribution::new((0..n).map(|i| format!("s{i}")).collect(), w.iter().map(|x| x / z).collect()).unwrap()
}

fn twin_pair() -> (RandomVectorDistribution, RandomVectorDistribution) {
    let build = |rows: [(&str, &str); 8]| {
        RandomVectorDistribution::new(
            rows.iter().map(|(a, b)| vec![a.to_string(), b.to_string()]).collect(),
            vec![0.125; 8],
        )
        .unwrap()
    };
    (
        build([("a", "1"), ("a", "2"), ("b", "1"), ("b", "2"), ("c", "3"), ("c", "4"), ("d", "3"), ("d", "4")]),
        build([("a", "1"), ("a", "2"), ("b", "2"), ("b", "3"), ("c", "3"), ("c", "4"), ("d", "1"), ("d", "4")]),
    )
}

fn partitions(c: &mut Criterion) {
    let d = skewed(10);
    let fam = enumerate_partitions(10).unwrap();
    c.bench_function("joint entropy of three partitions, n=10", |b| {
        b.iter(|| joint_entropy(&d, black_box(&fam.partitions()[100..103]), VarSet::EMPTY).unwrap())
    });
    c.bench_function("enumerate partitions, n=16", |b| b.iter(|| enumerate_partitions(black_box(16)).unwrap()));
}

fn identification(c: &mut Criterion) {
    for n in [4, 8, 12] {
        let d = skewed(n);
        c.bench_function(&format!("reconstruct from a fresh oracle, n={n}"), |b| {
            b.iter(|| {
                let oracle = oracle_from_distribution(&d).unwrap();
                reconstruct_scalar(&oracle, n).unwrap()
            })
        });
    }
    let (x, xs) = twin_pair();
    c.bench_function("vector equivalence, 4x4 alphabets", |b| {
        b.iter(|| vector_equivalent(black_box(&x), black_box(&xs)).unwrap())
    });
}

fn lp(c: &mut Criterion) {
    c.bench_function("elemental inequalities, 8 variables", |b| {
        let g = GroundSet::numbered(8).unwrap();
        b.iter(|| elemental_inequalities(black_box(&g)))
    });
    let g = GroundSet::numbered(4).unwrap();
    let mut cons = elemental_inequalities(&g).unwrap();
    for i in 0..4 {
        cons.push(LinearConstraint::fix(VarSet::singleton(i), 1.0).unwrap());
    }
    cons.push(LinearConstraint::at_most(g.full(), 3.5).unwrap());
    c.bench_function("feasibility, 4 variables", |b| b.iter(|| feasibility(black_box(&cons), &g).unwrap()));

    let (net, src, _) = example_network();
    let mut group = c.benchmark_group("network");
    group.sample_size(10);
    group.bench_function("five-node example without auxiliaries", |b| {
        b.iter(|| membership(&net, &src, &AuxSpec::none(), &[1.0; 4]).unwrap())
    });
    group.finish();
}

criterion_group!(benches, partitions, identification, lp);
criterion_main!(benches);
