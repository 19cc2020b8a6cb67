//! Prints prequential accuracy and size of the three learners on the
//! synthetic streams: `cargo run --release --example compare [instances] [tau] [seed] [mc|nb] [retain]`.

use svfdt_core::eval::{prequential_run, EvalOptions};
use svfdt_core::streams::{
    LedGenerator, RbfConfig, RbfGenerator, SeaConfig, SeaGenerator, StreamSource,
};
use svfdt_core::{Algorithm, HoeffdingTree, LeafPrediction, TreeConfig};

type MakeStream = Box<dyn Fn() -> Box<dyn StreamSource>>;

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let n: u64 = args.get(1).map_or(200_000, |s| s.parse().unwrap());
    let tau: f64 = args.get(2).map_or(0.05, |s| s.parse().unwrap());
    let seed: u64 = args.get(3).map_or(1, |s| s.parse().unwrap());
    let leaf_prediction = match args.get(4).map(String::as_str) {
        Some("nb") => LeafPrediction::NaiveBayes,
        _ => LeafPrediction::MajorityClass,
    };
    let retain_deactivated = args.get(5).is_some_and(|s| s == "retain");
    let config = TreeConfig {
        tie_threshold: tau,
        leaf_prediction,
        retain_deactivated,
        ..TreeConfig::default()
    };
    let streams: Vec<(&str, MakeStream)> = vec![
        (
            "led_0",
            Box::new(move || Box::new(LedGenerator::new(0.0, 17, seed, n).unwrap())),
        ),
        (
            "led_10",
            Box::new(move || Box::new(LedGenerator::new(0.1, 17, seed, n).unwrap())),
        ),
        (
            "led_20",
            Box::new(move || Box::new(LedGenerator::new(0.2, 17, seed, n).unwrap())),
        ),
        (
            "sea",
            Box::new(move || Box::new(SeaGenerator::new(SeaConfig::default(), seed, n).unwrap())),
        ),
        (
            "rbf",
            Box::new(move || Box::new(RbfGenerator::new(RbfConfig::default(), seed, n).unwrap())),
        ),
    ];
    for (name, make) in &streams {
        for algorithm in Algorithm::ALL {
            let stream = make();
            let schema = stream.schema().clone();
            let classes = schema.class_count();
            let mut tree = HoeffdingTree::new(schema, config.clone(), algorithm).unwrap();
            let result =
                prequential_run(&mut tree, stream, classes, EvalOptions::default()).unwrap();
            let r = &result.final_record;
            println!(
                "{name:8} {algorithm:9} acc {:.4} kappa {:>7.4} nodes {:5} depth {:3} time {:.2}s",
                r.accuracy,
                r.kappa_m.unwrap_or(f64::NAN),
                r.node_count,
                r.depth,
                r.elapsed_train_seconds
            );
        }
    }
}
