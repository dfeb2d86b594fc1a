use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use seqtag::corpus::{parse_conll, Dataset, Sentence, SourceFormat, TagInventory, Token, Vocabulary, UNK_ID};
use seqtag::embed::{seeded_uniform, EmbeddingTable};
use seqtag::eval::chunk_prf;
use seqtag::nn::{CellType, Matrix, NetworkConfig, ParamStore};
use seqtag::synthetic::{generate_task, SyntheticConfig, SyntheticTask};
use seqtag::train::{
    adam_step, batch_plan, make_batches, train_ner, AdamConfig, EmbeddingInit, Tagger, TrainConfig, MAX_SENTENCE_LEN,
};

/// Bias-corrected Adam on plain vectors, one coordinate at a time.
struct StraightAdam {
    m: Vec<f64>,
    v: Vec<f64>,
    t: i32,
}

impl StraightAdam {
    fn step(&mut self, x: &mut [f64], g: &[f64], lr: f64, b1: f64, b2: f64, eps: f64) {
        self.t += 1;
        for i in 0..x.len() {
            self.m[i] = b1 * self.m[i] + (1.0 - b1) * g[i];
            self.v[i] = b2 * self.v[i] + (1.0 - b2) * g[i] * g[i];
            let mh = self.m[i] / (1.0 - b1.powi(self.t));
            let vh = self.v[i] / (1.0 - b2.powi(self.t));
            x[i] -= lr * mh / (vh.sqrt() + eps);
        }
    }
}

#[test]
fn adam_matches_straight_line_update() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let init: Vec<f64> = (0..12).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let bias: Vec<f64> = (0..5).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let mut store: ParamStore<f64> = ParamStore::new();
    let w = store.add("w", Matrix::from_vec(3, 4, init.clone()).unwrap()).unwrap();
    let b = store.add("b", Matrix::from_vec(1, 5, bias.clone()).unwrap()).unwrap();
    let cfg = AdamConfig {
        learning_rate: 0.01,
        ..Default::default()
    };
    let (mut xw, mut xb) = (init, bias);
    let mut ow = StraightAdam { m: vec![0.0; 12], v: vec![0.0; 12], t: 0 };
    let mut ob = StraightAdam { m: vec![0.0; 5], v: vec![0.0; 5], t: 0 };
    for _ in 0..100 {
        let gw: Vec<f64> = (0..12).map(|_| rng.gen_range(-2.0..2.0)).collect();
        let gb: Vec<f64> = (0..5).map(|_| rng.gen_range(-2.0..2.0)).collect();
        store.grad_mut(w).data_mut().copy_from_slice(&gw);
        store.grad_mut(b).data_mut().copy_from_slice(&gb);
        adam_step(&mut store, &cfg).unwrap();
        ow.step(&mut xw, &gw, 0.01, 0.9, 0.999, 1e-8);
        ob.step(&mut xb, &gb, 0.01, 0.9, 0.999, 1e-8);
        for (got, want) in store.value(w).data().iter().zip(&xw).chain(store.value(b).data().iter().zip(&xb)) {
            assert!((got - want).abs() <= 1e-12, "{got} vs {want}");
        }
        assert!(store.grad(w).data().iter().all(|&g| g == 0.0));
    }
    assert_eq!(store.step(), 100);
}

#[test]
fn adam_first_step_moves_by_learning_rate() {
    let mut store: ParamStore<f64> = ParamStore::new();
    let id = store.add("p", Matrix::from_vec(1, 3, vec![0.5, 0.5, 0.5]).unwrap()).unwrap();
    store.grad_mut(id).data_mut().copy_from_slice(&[3.0, -0.2, 0.0]);
    adam_step(&mut store, &AdamConfig::default()).unwrap();
    let v = store.value(id).data();
    assert!((v[0] - (0.5 - 0.001)).abs() < 1e-9);
    assert!((v[1] - (0.5 + 0.001)).abs() < 1e-9);
    assert_eq!(v[2], 0.5);
}

#[test]
fn adam_with_zero_gradients_and_frozen_arrays() {
    let mut store: ParamStore<f64> = ParamStore::new();
    let a = store.add("a", Matrix::from_vec(2, 2, vec![1.0, 2.0, 3.0, 4.0]).unwrap()).unwrap();
    let f = store.add("f", Matrix::from_vec(1, 2, vec![5.0, 6.0]).unwrap()).unwrap();
    store.set_frozen(f, true);
    for _ in 0..10 {
        adam_step(&mut store, &AdamConfig::default()).unwrap();
    }
    assert_eq!(store.value(a).data(), &[1.0, 2.0, 3.0, 4.0]);
    store.grad_mut(f).data_mut().fill(1.0);
    adam_step(&mut store, &AdamConfig::default()).unwrap();
    assert_eq!(store.value(f).data(), &[5.0, 6.0]);
    store.grad_mut(a).data_mut()[0] = f64::NAN;
    let err = adam_step(&mut store, &AdamConfig::default()).unwrap_err();
    assert!(err.to_string().contains('a'), "{err}");
}

fn tiny_dataset() -> Dataset {
    parse_conll("a NN B-PER\nb VB O\n\nc NN O\nd JJ O\ne NN B-LOC\n\nf NN O\n\ng NN O\nh NN O\n\nzz NN O\n").unwrap()
}

#[test]
fn batches_cover_every_sentence() {
    let d = tiny_dataset();
    let vocab = Vocabulary::from_dataset(&d, 1).unwrap();
    let tags = d.tag_inventory().clone();
    let batches = make_batches(&d, &vocab, &tags, 2, 4).unwrap();
    let sizes: Vec<usize> = batches.iter().map(|b| b.batch_size()).collect();
    assert_eq!(sizes, vec![2, 2, 1]);
    assert_eq!(batches.iter().map(|b| b.token_count()).sum::<usize>(), d.token_count());
    assert_eq!(make_batches(&d, &vocab, &tags, 2, 4).unwrap(), batches);
    assert!(make_batches(&d, &vocab, &tags, 0, 4).is_err());

    let plan = batch_plan(&[3, 1, 4, 1, 5, 9, 2, 6], 3, 9);
    assert_eq!(plan.last().unwrap().len(), 2);
    let mut all: Vec<usize> = plan.concat();
    all.sort_unstable();
    assert_eq!(all, (0..8).collect::<Vec<_>>());
}

#[test]
fn unknown_words_map_to_unk() {
    let d = tiny_dataset();
    let vocab = Vocabulary::from_ordered(["a", "b"]);
    let tags = d.tag_inventory().clone();
    let batches = make_batches(&d, &vocab, &tags, 8, 0).unwrap();
    let b = &batches[0];
    let words = b.words();
    let known = words.iter().zip(b.mask()).filter(|(_, &m)| m).filter(|(&w, _)| w != UNK_ID).count();
    assert_eq!(known, 2);
}

#[test]
fn overlong_sentences_are_rejected() {
    let tokens: Vec<Token> = (0..MAX_SENTENCE_LEN + 1).map(|_| Token::new("x", "NN", "O").unwrap()).collect();
    let d = Dataset::new(vec![Sentence::new(tokens).unwrap()], SourceFormat::Conll);
    let vocab = Vocabulary::from_dataset(&d, 1).unwrap();
    let err = make_batches(&d, &vocab, &TagInventory::from_sentences(d.sentences()), 4, 0).unwrap_err();
    assert!(err.to_string().contains("limit is 512"), "{err}");
    let err = train_ner::<f64>(&d, &d, &EmbeddingInit::Random, &small_net(), &small_cfg(1)).unwrap_err();
    assert!(err.to_string().contains("limit is 512"), "{err}");
}

fn task() -> SyntheticTask {
    generate_task(&SyntheticConfig {
        train: 60,
        dev: 20,
        test: 20,
        unlabeled: 0,
        seed: 3,
    })
}

fn small_net() -> NetworkConfig {
    NetworkConfig {
        cell: CellType::Lstm,
        bidirectional: true,
        hidden: 6,
        embed_dim: 5,
        dropout: 0.2,
        ..Default::default()
    }
}

fn small_cfg(epochs: usize) -> TrainConfig {
    TrainConfig {
        batch_size: 8,
        max_epochs: epochs,
        learning_rate: 5e-3,
        ..Default::default()
    }
}

#[test]
fn zero_epochs_return_initial_parameters() {
    let t = task();
    let out = train_ner::<f64>(&t.train, &t.dev, &EmbeddingInit::Random, &small_net(), &small_cfg(0)).unwrap();
    assert!(out.history.is_empty());
    assert_eq!(out.best_dev_f1, None);
    let emb = out.checkpoint.store.by_name("embedding").unwrap().value().data();
    assert_eq!(emb, &seeded_uniform(out.checkpoint.vocab.len(), 5, 1)[..]);
    assert_eq!(out.checkpoint.store.step(), 0);
}

#[test]
fn frozen_pretrained_embeddings_do_not_move() {
    let t = task();
    let words: Vec<String> = t.train.sentences().iter().flat_map(|s| s.tokens()).map(|t| t.surface.clone()).take(30).collect();
    let vocab = Vocabulary::from_ordered(&words);
    let table = EmbeddingTable::random(vocab, 4, 17).unwrap();
    let cfg = TrainConfig {
        freeze_embeddings: true,
        ..small_cfg(2)
    };
    let out = train_ner::<f64>(&t.train, &t.dev, &EmbeddingInit::Pretrained(table.clone()), &small_net(), &cfg).unwrap();
    let emb = out.final_params.by_name("embedding").unwrap();
    assert!(emb.is_frozen());
    let rows = table.as_slice().len();
    assert_eq!(&emb.value().data()[..rows], table.as_slice());
    assert_eq!(out.checkpoint.config.embed_dim, 4);
    assert!(out.final_params.step() > 0);
}

#[test]
fn training_is_deterministic() {
    let t = task();
    let run = || train_ner::<f64>(&t.train, &t.dev, &EmbeddingInit::Random, &small_net(), &small_cfg(3)).unwrap();
    let (a, b) = (run(), run());
    assert_eq!(a.history.deterministic_columns(), b.history.deterministic_columns());
    let bits = |s: &ParamStore<f64>| -> Vec<u64> { s.iter().flat_map(|p| p.value().data().iter().map(|x| x.to_bits())).collect() };
    assert_eq!(bits(&a.final_params), bits(&b.final_params));
    let other = train_ner::<f64>(&t.train, &t.dev, &EmbeddingInit::Random, &small_net(), &TrainConfig { seed: 2, ..small_cfg(3) }).unwrap();
    assert_ne!(bits(&a.final_params), bits(&other.final_params));
}

#[test]
fn selected_checkpoint_has_best_dev_score() {
    let t = task();
    let out = train_ner::<f64>(&t.train, &t.dev, &EmbeddingInit::Random, &small_net(), &small_cfg(4)).unwrap();
    let best = out.history.records.iter().map(|r| r.dev_chunk_f1.unwrap()).fold(f64::MIN, f64::max);
    assert_eq!(out.best_dev_f1, Some(best));
    let epoch = out.history.best_epoch.unwrap();
    assert_eq!(out.history.records[epoch - 1].dev_chunk_f1, Some(best));
    assert_eq!(out.checkpoint.metadata["best_epoch"], epoch.to_string());
    assert_eq!(out.checkpoint.metadata["label_scheme"], "IOB2");
    let tagger = Tagger::new(out.checkpoint.clone()).unwrap();
    let pred = tagger.predict(t.dev.sentences()).unwrap();
    assert_eq!(chunk_prf(&t.dev.labels(), &pred).unwrap().total.f1, best);
}

#[test]
fn prediction_does_not_depend_on_batching() {
    let t = generate_task(&SyntheticConfig {
        train: 40,
        dev: 10,
        test: 150,
        unlabeled: 0,
        seed: 5,
    });
    let out = train_ner::<f32>(&t.train, &t.dev, &EmbeddingInit::Random, &small_net(), &small_cfg(1)).unwrap();
    let tagger = Tagger::new(out.checkpoint).unwrap();
    let all = tagger.predict(t.test.sentences()).unwrap();
    let single: Vec<Vec<String>> = t.test.sentences().iter().flat_map(|s| tagger.predict(std::slice::from_ref(s)).unwrap()).collect();
    assert_eq!(all, single);
    assert!(tagger.predict(&[]).unwrap().is_empty());
    let relabeled = tagger.predict_dataset(&t.test).unwrap();
    assert_eq!(relabeled.labels(), all);
}

#[test]
fn dev_labels_must_appear_in_training() {
    let train = parse_conll("a NN B-PER\nb NN O\n").unwrap();
    let dev = parse_conll("a NN B-LOC\n").unwrap();
    let err = train_ner::<f64>(&train, &dev, &EmbeddingInit::Random, &small_net(), &small_cfg(1)).unwrap_err();
    assert!(err.to_string().contains("tag mismatch"), "{err}");
}

#[test]
fn raw_labels_select_on_token_f1() {
    let t = task();
    let strip = |d: &Dataset| {
        let labels: Vec<Vec<String>> = d.labels().iter().map(|r| r.iter().map(|l| l.trim_start_matches("B-").trim_start_matches("I-").to_string()).collect()).collect();
        d.with_labels(&labels).unwrap()
    };
    let out = train_ner::<f64>(&strip(&t.train), &strip(&t.dev), &EmbeddingInit::Random, &small_net(), &small_cfg(2)).unwrap();
    assert!(out.history.records.iter().all(|r| r.dev_chunk_f1.is_none()));
    assert_eq!(out.checkpoint.metadata["selection_metric"], "token_f1");
    assert!(out.history.to_tsv().contains("\tNA\t"));
}
