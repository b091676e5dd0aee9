mod support;

use std::collections::VecDeque;

use gazetrack::filtering::{predict, KalmanTrackState, MotionModel};
use gazetrack::geometry::BBox;
use gazetrack::simworld::{generate, DetectorModel, SynthDetector};
use gazetrack::tracker::{
    appearance_cost, cascade_match, iou_match, Detection, StepOutput, Track, TrackStatus, Tracker, TrackerConfig,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn unit(dim: usize, k: usize) -> Vec<f64> {
    (0..dim).map(|i| if i == k { 1.0 } else { 0.0 }).collect()
}

fn track(id: u64, b: BBox, tsu: u32, gallery: Vec<Vec<f64>>) -> Track {
    let model = MotionModel::default();
    Track {
        id,
        state: predict(&KalmanTrackState::initiate(&b, &model), &model),
        status: TrackStatus::Confirmed,
        hits: 5,
        age: 10,
        time_since_update: tsu,
        class_id: 0,
        confidence: 0.9,
        gallery: VecDeque::from(gallery),
    }
}

#[test]
fn stationary_target_keeps_one_id_and_confirms_at_n_init() {
    let config = TrackerConfig::default();
    let mut t = Tracker::new(config.clone());
    let b = BBox::new(400.0, 300.0, 80.0, 60.0);
    let outs: Vec<StepOutput> = (0..10).map(|_| t.step(&[Detection::new(b, 0.9)])).collect();
    let ids: Vec<u64> = outs.iter().flat_map(|o| o.active.iter().map(|s| s.id)).collect();
    assert!(ids.iter().all(|&id| id == 1), "{ids:?}");
    let confirmed_at = outs.iter().position(|o| o.confirmed.contains(&1)).unwrap();
    assert_eq!(confirmed_at + 1, config.n_init as usize);
    assert!(outs[..confirmed_at].iter().all(|o| o.reported().count() == 0));
    assert!(outs[confirmed_at..].iter().all(|o| o.reported().count() == 1));
}

fn confirmed_then_missing(missed: usize, max_age: u32) -> (Vec<StepOutput>, Tracker) {
    let mut t = Tracker::new(TrackerConfig { max_age, ..TrackerConfig::default() });
    let b = BBox::new(400.0, 300.0, 80.0, 60.0);
    let mut outs: Vec<StepOutput> = (0..5).map(|_| t.step(&[Detection::new(b, 0.9)])).collect();
    outs.extend((0..missed).map(|_| t.step(&[])));
    (outs, t)
}

#[test]
fn occlusion_bound_is_exact() {
    for max_age in [1u32, 5, 30] {
        let (outs, t) = confirmed_then_missing(max_age as usize, max_age);
        assert!(outs.iter().all(|o| o.deleted.is_empty()), "max_age {max_age}: deleted too early");
        assert_eq!(t.tracks().len(), 1);
        assert_eq!(t.tracks()[0].time_since_update, max_age);

        let (outs, t) = confirmed_then_missing(max_age as usize + 1, max_age);
        assert_eq!(outs.last().unwrap().deleted, vec![1]);
        assert!(t.tracks().is_empty());
    }
}

#[test]
fn reappearance_after_max_age_minus_one_keeps_id() {
    let config = TrackerConfig::default();
    let mut t = Tracker::new(config.clone());
    let feature = unit(8, 3);
    let at = |f: usize| BBox::new(200.0 + 3.0 * f as f64, 300.0, 80.0, 60.0);
    for f in 0..10 {
        t.step(&[Detection::new(at(f), 0.9).with_appearance(feature.clone())]);
    }
    let gap = config.max_age as usize - 1;
    for _ in 0..gap {
        t.step(&[]);
    }
    let out = t.step(&[Detection::new(at(10 + gap), 0.9).with_appearance(feature)]);
    let reported: Vec<u64> = out.reported().map(|s| s.id).collect();
    assert_eq!(reported, vec![1]);
    assert!(out.created.is_empty());
}

#[test]
fn appearance_cost_examples() {
    let b = BBox::new(0.0, 0.0, 10.0, 10.0);
    let t = track(1, b, 1, vec![unit(4, 0)]);
    assert_eq!(appearance_cost(&t, &Detection::new(b, 1.0).with_appearance(unit(4, 0))).unwrap(), 0.0);
    assert_eq!(appearance_cost(&t, &Detection::new(b, 1.0).with_appearance(unit(4, 1))).unwrap(), 1.0);
    assert!(appearance_cost(&t, &Detection::new(b, 1.0)).is_err());

    // gallery of three random unit vectors: min over pairwise distances
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let rand_unit = |rng: &mut ChaCha8Rng| {
        use rand::Rng;
        let v: Vec<f64> = (0..16).map(|_| rng.random_range(-1.0..1.0)).collect();
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        v.into_iter().map(|x| x / n).collect::<Vec<f64>>()
    };
    let gallery: Vec<Vec<f64>> = (0..3).map(|_| rand_unit(&mut rng)).collect();
    let q = rand_unit(&mut rng);
    let expected =
        gallery.iter().map(|g| 1.0 - g.iter().zip(&q).map(|(a, b)| a * b).sum::<f64>()).fold(f64::INFINITY, f64::min);
    let t = track(1, b, 1, gallery);
    let got = appearance_cost(&t, &Detection::new(b, 1.0).with_appearance(q)).unwrap();
    assert!((got - expected).abs() < 1e-15);
}

#[test]
fn cascade_examples() {
    let config = TrackerConfig::default();
    let boxes =
        [BBox::new(100.0, 100.0, 50.0, 40.0), BBox::new(400.0, 100.0, 50.0, 40.0), BBox::new(100.0, 400.0, 50.0, 40.0)];
    let tracks: Vec<Track> = (0..3).map(|i| track(i as u64 + 1, boxes[i], 1, vec![unit(3, i)])).collect();
    let dets: Vec<Detection> =
        (0..3).rev().map(|i| Detection::new(boxes[i], 0.9).with_appearance(unit(3, i))).collect();
    let m = cascade_match(&tracks, &[0, 1, 2], &dets, &[0, 1, 2], &config);
    assert_eq!(m.pairs, vec![(0, 2), (1, 1), (2, 0)]);

    // equal appearance cost, the more recently seen track wins
    let b = boxes[0];
    let f = unit(3, 0);
    let tracks = vec![track(1, b, 3, vec![f.clone()]), track(2, b, 1, vec![f.clone()])];
    let dets = vec![Detection::new(b, 0.9).with_appearance(f.clone())];
    let m = cascade_match(&tracks, &[0, 1], &dets, &[0], &config);
    assert_eq!(m.pairs, vec![(1, 0)]);
    assert_eq!(m.unmatched_tracks, vec![0]);

    // far outside the gate
    let dets = vec![Detection::new(BBox::new(1500.0, 900.0, 50.0, 40.0), 0.9).with_appearance(f)];
    let m = cascade_match(&tracks, &[0, 1], &dets, &[0], &config);
    assert!(m.pairs.is_empty());
    assert_eq!(m.unmatched_detections, vec![0]);
}

#[test]
fn iou_stage_examples() {
    let config = TrackerConfig::default();
    let model = MotionModel::default();
    let b = BBox::new(100.0, 100.0, 60.0, 40.0);
    let mut t = track(1, b, 1, vec![]);
    t.state = KalmanTrackState::initiate(&b, &model);
    let m = iou_match(&[t.clone()], &[0], &[Detection::new(b, 0.9)], &[0], &config);
    assert_eq!(m.pairs, vec![(0, 0)]);

    let m = iou_match(&[t], &[0], &[Detection::new(BBox::new(500.0, 500.0, 60.0, 40.0), 0.9)], &[0], &config);
    assert!(m.pairs.is_empty());

    // three tracks, three detections with hand-built overlaps. The greedy pick
    // (track 0 -> det 0, IoU 0.82) strands track 1; the optimum pairs all three.
    let tb = [BBox::new(0.0, 0.0, 40.0, 40.0), BBox::new(14.0, 0.0, 40.0, 40.0), BBox::new(200.0, 0.0, 40.0, 40.0)];
    let db = [BBox::new(4.0, 0.0, 40.0, 40.0), BBox::new(-14.0, 0.0, 40.0, 40.0), BBox::new(205.0, 0.0, 40.0, 40.0)];
    let tracks: Vec<Track> = tb
        .iter()
        .enumerate()
        .map(|(i, &bb)| {
            let mut t = track(i as u64 + 1, bb, 1, vec![]);
            t.state = KalmanTrackState::initiate(&bb, &model);
            t
        })
        .collect();
    let dets: Vec<Detection> = db.iter().map(|&bb| Detection::new(bb, 0.9)).collect();
    let m = iou_match(&tracks, &[0, 1, 2], &dets, &[0, 1, 2], &config);

    let cost = |ti: usize, di: usize| {
        let v = gazetrack::geometry::iou(&tb[ti], &db[di]);
        (v >= config.iou_match_threshold).then_some(1.0 - v)
    };
    let rows: Vec<Vec<Option<f64>>> = (0..3).map(|i| (0..3).map(|j| cost(i, j)).collect()).collect();
    let (card, best) = support::brute_force_assignment(&rows, 3);
    let got: f64 = m.pairs.iter().map(|&(i, j)| cost(i, j).unwrap()).sum();
    assert_eq!(m.pairs.len(), card);
    assert!((got - best).abs() < 1e-12);
    assert_eq!(m.pairs, vec![(0, 1), (1, 0), (2, 2)]);
}

/// Detections for a few targets with noise, misses and false positives.
fn noisy_stream(seed: u64, frames: usize) -> Vec<Vec<Detection>> {
    let mut scenario = support::crossing_scenario(
        frames,
        vec![[40, 55]],
        DetectorModel { p_miss: 0.1, fp_rate: 0.5, ..DetectorModel::default() },
        seed,
    );
    let mut second = scenario.targets[0].clone();
    second.id = 2;
    second.motion = gazetrack::simworld::Motion::ConstantVelocity { start: [1500.0, 300.0], velocity: [-3.0, 1.0] };
    second.occlusions = vec![];
    scenario.targets.push(second);
    let det = SynthDetector::new(&scenario);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    generate(&scenario).map(|f| det.detect(&f, &mut rng)).collect()
}

fn run_stream(stream: &[Vec<Detection>]) -> Vec<StepOutput> {
    let mut t = Tracker::new(TrackerConfig::default());
    stream.iter().map(|d| t.step(d)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn lifecycle_and_id_invariants(seed in 0u64..10_000) {
        let stream = noisy_stream(seed, 150);
        let outs = run_stream(&stream);
        let mut last_created = 0u64;
        let mut seen_confirmed = std::collections::HashSet::new();
        for (out, dets) in outs.iter().zip(&stream) {
            // monotone ids
            for &id in &out.created {
                prop_assert!(id > last_created);
                last_created = id;
            }
            // no deleted track in the active list
            prop_assert!(out.active.iter().all(|s| s.status != TrackStatus::Deleted));
            prop_assert!(out.active.iter().all(|s| !out.deleted.contains(&s.id)));
            // tracks are born tentative
            for s in out.active.iter().filter(|s| out.created.contains(&s.id)) {
                prop_assert!(s.status == TrackStatus::Tentative || s.hits >= TrackerConfig::default().n_init);
                prop_assert!(!seen_confirmed.contains(&s.id));
            }
            for s in out.active.iter().filter(|s| s.status == TrackStatus::Confirmed) {
                prop_assert!(s.hits >= TrackerConfig::default().n_init);
                seen_confirmed.insert(s.id);
            }
            // one track per detection and vice versa: tracks updated this frame
            // never outnumber detections, and ids are unique
            let updated = out.active.iter().filter(|s| s.time_since_update == 0).count();
            prop_assert!(updated <= dets.len());
            let mut ids: Vec<u64> = out.active.iter().map(|s| s.id).collect();
            ids.sort_unstable();
            ids.dedup();
            prop_assert_eq!(ids.len(), out.active.len());
        }
    }

    #[test]
    fn identical_streams_identical_outputs(seed in 0u64..10_000) {
        let stream = noisy_stream(seed, 80);
        prop_assert_eq!(run_stream(&stream), run_stream(&stream));
    }
}

#[test]
fn invalid_detections_are_ignored() {
    let mut t = Tracker::new(TrackerConfig::default());
    let out = t.step(&[
        Detection::new(BBox::new(0.0, 0.0, 0.0, 10.0), 0.9),
        Detection::new(BBox::new(f64::NAN, 0.0, 5.0, 5.0), 0.9),
    ]);
    assert!(out.created.is_empty());
}

#[test]
fn multi_class_never_mixes_classes() {
    let config = TrackerConfig { multi_class: true, ..TrackerConfig::default() };
    let mut t = Tracker::new(config);
    let b = BBox::new(300.0, 300.0, 60.0, 40.0);
    for _ in 0..4 {
        t.step(&[Detection::new(b, 0.9).with_class(2)]);
    }
    let out = t.step(&[Detection::new(b, 0.9).with_class(5)]);
    assert_eq!(out.created.len(), 1);
    let class_of_new = out.active.iter().find(|s| s.id == out.created[0]).unwrap().class_id;
    assert_eq!(class_of_new, 5);
}
