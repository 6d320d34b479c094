//! End-to-end checks of the binary's surface: file formats, the
//! gen/label/kernel/train/predict pipeline and experiment configs.

use std::path::Path;
use std::process::Command;

fn qclassify(args: &[&str], dir: &Path) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_qclassify"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn assert_ok(out: &std::process::Output, what: &str) {
    assert!(
        out.status.success(),
        "{what} failed:\nstdout: {}\nstderr: {}",
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr)
    );
}

#[test]
fn gen_is_deterministic_and_labels_fill_in() {
    let dir = tempfile::tempdir().unwrap();
    let args = [
        "gen",
        "--family",
        "werner",
        "--bell",
        "psi-minus",
        "--n",
        "20",
        "--seed",
        "7",
        "-o",
        "a.jsonl",
    ];
    assert_ok(&qclassify(&args, dir.path()), "gen");
    let mut args2 = args;
    args2[args.len() - 1] = "b.jsonl";
    assert_ok(&qclassify(&args2, dir.path()), "gen again");
    let a = std::fs::read(dir.path().join("a.jsonl")).unwrap();
    let b = std::fs::read(dir.path().join("b.jsonl")).unwrap();
    assert_eq!(a, b, "same seed must give byte-identical datasets");

    assert_ok(
        &qclassify(
            &[
                "label",
                "--task",
                "entanglement",
                "-i",
                "a.jsonl",
                "-o",
                "labeled.jsonl",
            ],
            dir.path(),
        ),
        "label",
    );
    let records = qclassify::io::read_records(dir.path().join("labeled.jsonl")).unwrap();
    for rec in &records {
        let label = rec.label_ent.expect("label filled");
        let expected = qclassify::entanglement_label(&rec.dm).unwrap();
        assert_eq!(label, expected.value);
        assert!((rec.measure.unwrap() - expected.concurrence).abs() <= 1e-12);
    }
}

#[test]
fn full_pipeline_produces_predictions() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert_ok(
        &qclassify(
            &[
                "gen",
                "--family",
                "werner",
                "--bell",
                "psi-minus",
                "--n",
                "30",
                "--seed",
                "3",
                "-o",
                "train.jsonl",
            ],
            d,
        ),
        "gen train",
    );
    assert_ok(
        &qclassify(
            &[
                "gen",
                "--family",
                "horodecki",
                "--bell",
                "psi-minus",
                "--n",
                "10",
                "--seed",
                "4",
                "-o",
                "test.jsonl",
            ],
            d,
        ),
        "gen test",
    );
    assert_ok(
        &qclassify(
            &[
                "label",
                "--task",
                "entanglement",
                "-i",
                "train.jsonl",
                "-o",
                "train.jsonl",
            ],
            d,
        ),
        "label train",
    );
    assert_ok(
        &qclassify(
            &[
                "kernel",
                "--type",
                "quantum",
                "--alpha",
                "3.14159265358979",
                "-i",
                "train.jsonl",
                "-o",
                "K.csv",
            ],
            d,
        ),
        "train gram",
    );
    assert_ok(
        &qclassify(
            &[
                "kernel",
                "--type",
                "quantum",
                "--alpha",
                "3.14159265358979",
                "-i",
                "train.jsonl",
                "-j",
                "test.jsonl",
                "-o",
                "Kx.csv",
            ],
            d,
        ),
        "cross gram",
    );
    let gram = qclassify::io::read_gram_csv(d.join("K.csv")).unwrap();
    assert!(gram.symmetric);
    assert_eq!((gram.rows, gram.cols), (30, 30));
    let cross = qclassify::io::read_gram_csv(d.join("Kx.csv")).unwrap();
    assert_eq!((cross.rows, cross.cols), (10, 30));

    assert_ok(
        &qclassify(
            &[
                "train",
                "--kernel",
                "K.csv",
                "--data",
                "train.jsonl",
                "--task",
                "entanglement",
                "--C",
                "1.0",
                "-o",
                "model.json",
            ],
            d,
        ),
        "train",
    );
    let model: qclassify::SvmModel = qclassify::io::read_json(d.join("model.json")).unwrap();
    assert_eq!(model.alphas.len(), 30);
    assert!(!model.support_idx.is_empty());

    assert_ok(
        &qclassify(
            &[
                "predict",
                "--model",
                "model.json",
                "--kernel",
                "Kx.csv",
                "--data",
                "test.jsonl",
                "-o",
                "preds.json",
            ],
            d,
        ),
        "predict",
    );
    let preds: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(d.join("preds.json")).unwrap()).unwrap();
    let rows = preds.as_array().unwrap();
    assert_eq!(rows.len(), 10);
    for row in rows {
        assert!(row.get("id").is_some());
        assert!(row.get("decision").is_some());
        assert!(row.get("label").is_some());
        assert!(row.get("probability").is_some());
    }
}

#[test]
fn gen_accepts_negative_ranges() {
    let dir = tempfile::tempdir().unwrap();
    let out = qclassify(
        &[
            "gen", "--family", "bell-diagonal", "--zero-discord", "--t-min", "-1", "--t-max",
            "0", "--n", "5", "--seed", "1", "-o", "zd.jsonl",
        ],
        dir.path(),
    );
    assert_ok(&out, "gen with negative t range");
    let records = qclassify::io::read_records(dir.path().join("zd.jsonl")).unwrap();
    assert_eq!(records.len(), 5);
    for rec in &records {
        assert!(qclassify::geometric_discord(&rec.dm).unwrap() <= 1e-12);
    }
}

#[test]
fn rotate_preserves_labels() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert_ok(
        &qclassify(
            &[
                "gen", "--family", "werner", "--bell", "phi-plus", "--n", "15", "--seed", "9",
                "-o", "w.jsonl",
            ],
            d,
        ),
        "gen",
    );
    assert_ok(
        &qclassify(
            &["rotate", "--seed", "21", "-i", "w.jsonl", "-o", "wr.jsonl"],
            d,
        ),
        "rotate",
    );
    let before = qclassify::io::read_records(d.join("w.jsonl")).unwrap();
    let after = qclassify::io::read_records(d.join("wr.jsonl")).unwrap();
    for (b, a) in before.iter().zip(&after) {
        let cb = qclassify::concurrence(&b.dm).unwrap();
        let ca = qclassify::concurrence(&a.dm).unwrap();
        assert!((cb - ca).abs() <= 1e-9);
        assert_eq!(b.family, a.family);
    }
}

#[test]
fn mlp_subcommand_reports_accuracy() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert_ok(
        &qclassify(
            &[
                "gen",
                "--family",
                "werner",
                "--bell",
                "psi-minus",
                "--n",
                "40",
                "--seed",
                "1",
                "-o",
                "train.jsonl",
            ],
            d,
        ),
        "gen train",
    );
    assert_ok(
        &qclassify(
            &[
                "gen",
                "--family",
                "werner",
                "--bell",
                "psi-plus",
                "--n",
                "10",
                "--seed",
                "2",
                "-o",
                "test.jsonl",
            ],
            d,
        ),
        "gen test",
    );
    assert_ok(
        &qclassify(
            &[
                "mlp",
                "--hidden",
                "8",
                "--epochs",
                "50",
                "--lr",
                "0.1",
                "--seed",
                "5",
                "--train",
                "train.jsonl",
                "--test",
                "test.jsonl",
                "--task",
                "entanglement",
                "-o",
                "mlp.json",
            ],
            d,
        ),
        "mlp",
    );
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(d.join("mlp.json")).unwrap()).unwrap();
    assert!(report["train_accuracy"].as_f64().unwrap() >= 0.5);
    assert_eq!(report["predictions"].as_array().unwrap().len(), 10);
    assert_eq!(report["loss_trace"].as_array().unwrap().len(), 50);
}

#[test]
fn experiment_config_and_plot_data_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let config = serde_json::json!({
        "name": "cli-check",
        "task": "entanglement",
        "model": {"type": "csvm", "kernel": "linear", "scheme": "dm16"},
        "train": {"family": "werner", "bell": "psi-minus", "p_min": 0.0, "p_max": 1.0, "n": 24, "seed": 5},
        "test": {"family": "werner", "bell": "phi-plus", "p_min": 0.0, "p_max": 1.0, "n": 12, "seed": 6},
        "grid": {"c": [1.0], "alpha": [1.0]}
    });
    std::fs::write(
        d.join("cfg.json"),
        serde_json::to_string_pretty(&config).unwrap(),
    )
    .unwrap();
    assert_ok(
        &qclassify(
            &[
                "experiment",
                "--config",
                "cfg.json",
                "-o",
                "report.json",
                "--plot-data",
                "plot.csv",
            ],
            d,
        ),
        "experiment",
    );
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(d.join("report.json")).unwrap()).unwrap();
    assert_eq!(report["report_type"], "experiment");
    assert!(report["report"]["wall_time_s"].is_null());
    assert_eq!(report["report"]["version"], env!("CARGO_PKG_VERSION"));

    // recount oracle: metrics recomputed from the plot CSV match the report
    let plot = std::fs::read_to_string(d.join("plot.csv")).unwrap();
    let mut lines = plot.lines();
    assert_eq!(
        lines.next().unwrap(),
        "id,param_p_or_t,true_label,pred_label,probability"
    );
    let mut truth = vec![];
    let mut preds = vec![];
    for line in lines {
        let cols: Vec<&str> = line.split(',').collect();
        assert_eq!(cols.len(), 5);
        truth.push(cols[2].parse::<i8>().unwrap());
        preds.push(cols[3].parse::<i8>().unwrap());
    }
    assert_eq!(truth.len(), 12);
    let recount = qclassify::compute_metrics(&truth, &preds).unwrap();
    assert_eq!(
        recount.accuracy,
        report["report"]["metrics"]["accuracy"].as_f64().unwrap()
    );
    let confusion = &report["report"]["metrics"]["confusion"];
    assert_eq!(
        recount.confusion.tp as u64,
        confusion["tp"].as_u64().unwrap()
    );
    assert_eq!(
        recount.confusion.fneg as u64,
        confusion["fn"].as_u64().unwrap()
    );
}

#[test]
fn experiment_rejects_overlapping_domains() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let config = serde_json::json!({
        "name": "bad",
        "task": "entanglement",
        "model": {"type": "qsvm", "scheme": "dm16", "reps": 2},
        "train": {"family": "werner", "bell": "psi-minus", "n": 10, "seed": 1},
        "test": {"family": "werner", "bell": "psi-minus", "n": 10, "seed": 2}
    });
    std::fs::write(d.join("bad.json"), config.to_string()).unwrap();
    let out = qclassify(&["experiment", "--config", "bad.json", "-o", "r.json"], d);
    assert!(!out.status.success());
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("same domain"), "stderr: {stderr}");
}
