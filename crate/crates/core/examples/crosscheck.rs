// Dev-time cross-check: export one encoded train/test split plus this
// crate's metrics so an external reference implementation can be compared.
use idsbench::classifier::{Classifier, ClassifierKind, ClassifierSpec};
use idsbench::data::{split_holdout, synth, Preprocessor};
use idsbench::eval::metrics::auc;

fn main() {
    let ds = synth::generate(4000, 1400, 77);
    let (train, test) = split_holdout(&ds, 0.6, 5).unwrap();
    let pre = Preprocessor::fit(&train).unwrap();
    let train = pre.transform(&train).unwrap();
    let test = pre.transform(&test).unwrap();

    let dump = |name: &str, d: &idsbench::data::Dataset| {
        let mut out = String::new();
        for (row, label) in d.rows().iter().zip(d.labels()) {
            let cells: Vec<String> = row.iter().map(|v| format!("{v}")).collect();
            out.push_str(&format!("{},{}\n", cells.join(","), label));
        }
        std::fs::write(format!("/tmp/xchk_{name}.csv"), out).unwrap();
    };
    dump("train", &train);
    dump("test", &test);

    for kind in [
        ClassifierKind::Cart,
        ClassifierKind::RandomForest,
        ClassifierKind::AdaBoost,
        ClassifierKind::Gbm,
        ClassifierKind::RegularizedGb,
        ClassifierKind::ExtraTrees,
        ClassifierKind::Mlp,
    ] {
        let spec = ClassifierSpec::published_default(kind).desk_scale();
        let model = spec.fit(&train, 3).unwrap();
        let mut correct = 0usize;
        let mut scores = Vec::new();
        for (row, &y) in test.rows().iter().zip(test.labels()) {
            let (label, score) = model.predict(row).unwrap();
            correct += usize::from(label == y);
            scores.push(score);
        }
        let acc = correct as f64 / test.n_rows() as f64;
        let auc_v = auc(&scores, test.labels()).unwrap();
        println!("{} acc={acc:.4} auc={auc_v:.6}", kind.name());
    }

    // Fixed score vector for an exact AUC comparison.
    let fixed_scores: Vec<f64> = (0..200).map(|i| ((i * 37) % 101) as f64 / 101.0).collect();
    let fixed_labels: Vec<u8> = (0..200).map(|i| u8::from((i * 53) % 7 < 3)).collect();
    let mut line = String::new();
    for (s, l) in fixed_scores.iter().zip(&fixed_labels) {
        line.push_str(&format!("{s},{l}\n"));
    }
    std::fs::write("/tmp/xchk_auc.csv", line).unwrap();
    println!("AUC_FIXED {:.15}", auc(&fixed_scores, &fixed_labels).unwrap());
}
