use dmnn::formats::*;
use dmnn_core::channel::Dataset;
use dmnn_core::harness::{self, ExperimentConfig, Filter, Method};
use dmnn_core::mlp::{Activation, LayerSpec};

fn small() -> (ExperimentConfig, Dataset) {
    let mut config = ExperimentConfig::default();
    config.layout.num_offices = 4;
    config.train_per_office = 10;
    config.method_config.hidden = vec![
        LayerSpec::new(6, Activation::Relu),
        LayerSpec::new(5, Activation::Sigmoid),
    ];
    config.method_config.train.epochs = 3;
    config.method_config.svm.epochs = 3;
    let seed = harness::trial_seed(config.seed, 0);
    let channel = harness::trial_channel(&config, seed).unwrap();
    let data = harness::trial_train_set(&config, &channel, seed).unwrap();
    (config, data)
}

#[test]
fn dataset_round_trip_is_exact() {
    let (_, data) = small();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("d.csv");
    write_dataset(&path, &data).unwrap();
    assert!(meta_path(&path).exists());
    let back = read_dataset(&path).unwrap();
    assert_eq!(back, data);

    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("office,sample,feat_0,"));
    assert!(text.lines().nth(1).unwrap().starts_with("1,1,"));
    assert!(text.lines().last().unwrap().starts_with("4,10,"));
}

#[test]
fn dataset_without_sidecar() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("d.csv");
    std::fs::write(&path, "office,sample,feat_0,feat_1\n1,1,0.5,-1\n3,1,2,3e-3\n").unwrap();
    let data = read_dataset(&path).unwrap();
    assert_eq!(data.num_classes(), 3);
    assert_eq!(data.labels(), &[0, 2]);
    assert_eq!(data.input(1), &[2.0, 0.003]);
    assert!(data.meta.is_none());

    std::fs::write(&path, "office,sample,feat_0\n0,1,0.5\n").unwrap();
    assert!(read_dataset(&path).is_err());
    std::fs::write(&path, "office,sample,feat_0\n1,1,x\n").unwrap();
    assert!(read_dataset(&path).is_err());
    std::fs::write(&path, "id,sample,feat_0\n1,1,1\n").unwrap();
    assert!(read_dataset(&path).is_err());
}

#[test]
fn pipelines_round_trip_is_exact() {
    let (config, data) = small();
    for method in Method::ALL {
        let pipeline = harness::train_method(method, &data, &config.method_config).unwrap();
        let text = pipeline_to_string(&pipeline);
        assert!(text.starts_with(PIPELINE_MAGIC));
        assert_eq!(pipeline_from_str(&text).unwrap(), pipeline, "{method}");

        let filter_text = filter_to_string(method, &pipeline.filter);
        assert_eq!(
            filter_from_str(&filter_text).unwrap(),
            (method, pipeline.filter.clone())
        );
    }
}

#[test]
fn malformed_model_files_are_rejected() {
    assert!(filter_from_str("").is_err());
    assert!(filter_from_str("dmnn-filter v2\nmethod MNN\nfilter identity\n").is_err());
    assert!(filter_from_str("dmnn-filter v1\nmethod XYZ\nfilter identity\n").is_err());
    assert!(filter_from_str("dmnn-filter v1\nmethod MNN\nfilter identity\nextra\n").is_err());
    assert!(filter_from_str(
        "dmnn-filter v1\nmethod QMNN\nfilter quantizer 2\nsource 0 1\ndistortion 0.3\nlevels 1 -1\n"
    )
    .is_err());
    assert_eq!(
        filter_from_str("dmnn-filter v1\n\nmethod MNN\nfilter identity\n").unwrap(),
        (Method::Mnn, Filter::Identity)
    );
    let truncated = "dmnn-pipeline v1\nmethod MNN\nfilter identity\nclassifier mlp 1\nlayer 2 1 sigmoid\nbias 0\n";
    assert!(pipeline_from_str(truncated).is_err());
    let wrong_width =
        "dmnn-pipeline v1\nmethod MNN\nfilter identity\nclassifier mlp 1\nlayer 2 1 sigmoid\nbias 0\nrow 1 2 3\n";
    assert!(pipeline_from_str(wrong_width).is_err());
    let ok = "dmnn-pipeline v1\nmethod MNN\nfilter identity\nclassifier mlp 1\nlayer 2 1 sigmoid\nbias 0\nrow 1 2\n";
    assert!(pipeline_from_str(ok).is_ok());
}
