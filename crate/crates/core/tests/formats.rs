use std::collections::BTreeMap;

use vosground::datagen::{generate_scene, SceneSpec};
use vosground::exprstats::{corpus_stats, tag_corpus, Lexicons, SAMPLE_CORPUS};
use vosground::io::{
    encode_mask_set, read_attributes, read_corpus, read_mask_set, read_proposals, read_tracks,
    write_attributes, write_files, write_proposals, write_track, MaskFormat, MaskSet,
};
use vosground::metrics::{evaluate_masks, AnnotationType};
use vosground::rerank::{raw_select, rerank_scores, select_track, RerankOptions};
use vosground::QueryKey;

const TOY: &str = "\
{\"video\":\"toy\",\"query\":\"q\",\"frame\":1,\"x\":0,\"y\":0,\"w\":10,\"h\":10,\"score\":0.9,\"objectness\":0.8,\"id\":1}
{\"video\":\"toy\",\"query\":\"q\",\"frame\":1,\"x\":20,\"y\":0,\"w\":10,\"h\":10,\"score\":0.5,\"objectness\":0.9,\"id\":2}
{\"video\":\"toy\",\"query\":\"q\",\"frame\":2,\"x\":0,\"y\":0,\"w\":10,\"h\":10,\"score\":0.4,\"objectness\":0.8,\"id\":3}
{\"video\":\"toy\",\"query\":\"q\",\"frame\":2,\"x\":20,\"y\":0,\"w\":10,\"h\":10,\"score\":0.8,\"objectness\":0.9,\"id\":4}
";

#[test]
fn toy_file_to_tracks() {
    let (vps, warnings) = read_proposals(TOY).unwrap();
    assert!(warnings.is_empty());
    let vp = &vps[0];
    let reranked = select_track(&rerank_scores(vp, &RerankOptions::default()));
    let raw = raw_select(vp);
    let xs = |t: &vosground::Track| {
        t.entries()
            .iter()
            .map(|b| b.unwrap().x())
            .collect::<Vec<_>>()
    };
    assert_eq!(xs(&reranked), [20.0, 20.0]);
    assert_eq!(xs(&raw), [0.0, 20.0]);

    let (back, _) = read_tracks(&write_track(&reranked)).unwrap();
    assert_eq!(back[&reranked.key()], reranked);
    assert_eq!(read_proposals(&write_proposals(vp)).unwrap().0[0], *vp);
}

#[test]
fn scene_masks_survive_disk_in_both_formats() {
    let spec = SceneSpec::random(48, 32, 6, 2, 0.05, 21).unwrap();
    let gt = generate_scene(&spec).unwrap();
    let mut set = MaskSet::new();
    for (k, obj) in gt.objects.iter().enumerate() {
        let frames: BTreeMap<u32, _> = obj
            .masks
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, m)| (i as u32 + 1, m))
            .collect();
        set.insert(QueryKey::new("scene", format!("obj{k}")), frames);
    }
    let dir = tempfile::tempdir().unwrap();
    for format in [MaskFormat::Rle, MaskFormat::Pbm] {
        let root = dir.path().join(format.extension());
        write_files(&root, &encode_mask_set(&set, format)).unwrap();
        let back = read_mask_set(&root).unwrap();
        assert_eq!(back, set);
        for frames in back.values() {
            let masks: Vec<_> = frames.values().cloned().collect();
            let report = evaluate_masks(&masks, &masks, None).unwrap();
            assert_eq!((report.j.mean, report.f.mean, report.jf), (1.0, 1.0, 1.0));
        }
    }
}

#[test]
fn sample_corpus_through_files() {
    let (qs, warnings) = read_corpus(SAMPLE_CORPUS).unwrap();
    assert!(warnings.is_empty());
    let lex = Lexicons::bundled();
    let stats = corpus_stats(&qs, &lex).unwrap();
    let total: usize = stats.groups.values().map(|g| g.count).sum();
    assert_eq!(total, qs.len());
    assert_eq!(stats.groups[&AnnotationType::FirstFrame].count, 20);
    assert_eq!(stats.groups[&AnnotationType::FullVideo].count, 10);

    let tags = tag_corpus(&qs, &lex).unwrap();
    let rows: Vec<_> = qs.iter().map(|q| (q.clone(), tags[&q.key()])).collect();
    let (back, _) = read_attributes(&write_attributes(&rows)).unwrap();
    assert_eq!(back, tags);
}
