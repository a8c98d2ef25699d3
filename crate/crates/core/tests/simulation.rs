use vosground::datagen::{simulate_scene, CorruptionSpec, SimulationSpec};
use vosground::metrics::track_miou;
use vosground::rerank::{gt_as_proposals, raw_select, rerank_scores, select_track, RerankOptions};

fn sweep(scenes: usize, seed: u64) -> Vec<(f64, f64)> {
    let sim = SimulationSpec {
        scenes,
        seed,
        ..SimulationSpec::default()
    };
    let corruption = CorruptionSpec {
        seed,
        ..CorruptionSpec::default()
    };
    (0..scenes)
        .map(|i| {
            let s = simulate_scene(&sim, &corruption, i).unwrap();
            let vp = &s.proposals[0];
            let gt = &s.gt.objects[0].boxes;
            let reranked = select_track(&rerank_scores(vp, &RerankOptions::default()));
            (
                track_miou(&reranked, gt).unwrap(),
                track_miou(&raw_select(vp), gt).unwrap(),
            )
        })
        .collect()
}

#[test]
fn reranking_beats_raw_selection_on_simulated_scenes() {
    let results = sweep(40, 5);
    let n = results.len() as f64;
    let mean_rerank = results.iter().map(|r| r.0).sum::<f64>() / n;
    let mean_raw = results.iter().map(|r| r.1).sum::<f64>() / n;
    let wins = results.iter().filter(|r| r.0 > r.1).count();
    assert!(mean_rerank > mean_raw, "{mean_rerank} vs {mean_raw}");
    assert!(wins >= 34, "wins {wins}/40");
}

#[test]
fn ground_truth_pool_is_exact() {
    let sim = SimulationSpec {
        scenes: 5,
        random_objects: 2,
        ..SimulationSpec::default()
    };
    for i in 0..sim.scenes {
        let s = simulate_scene(&sim, &CorruptionSpec::default(), i).unwrap();
        for (k, obj) in s.gt.objects.iter().enumerate() {
            let vp = gt_as_proposals(&s.video_id, format!("obj{k}"), &obj.boxes);
            let track = select_track(&rerank_scores(&vp, &RerankOptions::default()));
            assert_eq!(track_miou(&track, &obj.boxes).unwrap(), 1.0);
        }
    }
}

#[test]
fn single_frame_scene() {
    let sim = SimulationSpec {
        num_frames: 1,
        ..SimulationSpec::default()
    };
    let s = simulate_scene(&sim, &CorruptionSpec::default(), 0).unwrap();
    let vp = &s.proposals[0];
    assert_eq!(vp.num_frames(), 1);
    let scored = rerank_scores(vp, &RerankOptions::default());
    assert!(scored.frames.values().flatten().all(|p| p.new_score == 0.0));
    // all-zero scores fall back to the raw ordering
    assert_eq!(select_track(&scored), raw_select(vp));
}

#[test]
fn seeds_are_reproducible() {
    assert_eq!(sweep(3, 9), sweep(3, 9));
    assert_ne!(sweep(3, 9), sweep(3, 10));
}
