use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

use diffclass::classify::{tally_path, BayesClassifier, EstimatedClassifier, RiskTally};
use diffclass::estimate::constant_estimators;
use diffclass::model::MixtureModel;
use diffclass::par;
use diffclass::simulate::PathGenerator;

fn dataset_generation(c: &mut Criterion) {
    let model = MixtureModel::bump_example();
    let mut group = c.benchmark_group("generate");
    group.sample_size(10);
    for &count in &[256usize, 2048] {
        let gen = PathGenerator::new(&model, 200, 11);
        group.bench_with_input(BenchmarkId::new("parallel", count), &count, |b, &count| {
            b.iter(|| par::try_map_indexed(count, |j| gen.path(j)).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("sequential", count), &count, |b, &count| {
            b.iter(|| {
                par::map_indexed_seq(count, |j| gen.path(j))
                    .into_iter()
                    .collect::<Result<Vec<_>, _>>()
                    .unwrap()
            })
        });
    }
    group.finish();
}

fn risk_evaluation(c: &mut Criterion) {
    let model = MixtureModel::constant(0.0, 1.0, 1.0, 0.5).unwrap();
    let train = PathGenerator::new(&model, 500, 1).dataset(500).unwrap();
    let plugin = EstimatedClassifier::from_constant(&constant_estimators(&train, 500).unwrap());
    let bayes = BayesClassifier::new(model.clone()).unwrap();
    let test = PathGenerator::new(&model, 500, 2).dataset(4000).unwrap();

    let tally_one = |j: usize| {
        let mut t = RiskTally::default();
        tally_path(&mut t, &test.paths[j], &plugin, &bayes).unwrap();
        t
    };
    let merge = |ts: Vec<RiskTally>| {
        let mut total = RiskTally::default();
        ts.iter().for_each(|t| total.merge(t));
        total
    };

    let mut group = c.benchmark_group("excess_risk");
    group.sample_size(10);
    group.bench_function("parallel", |b| {
        b.iter(|| black_box(merge(par::map_indexed(test.len(), tally_one))))
    });
    group.bench_function("sequential", |b| {
        b.iter(|| black_box(merge(par::map_indexed_seq(test.len(), tally_one))))
    });
    group.finish();
}

criterion_group!(benches, dataset_generation, risk_evaluation);
criterion_main!(benches);
