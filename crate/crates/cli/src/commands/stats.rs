use std::path::PathBuf;

use vosground::exprstats::{
    corpus_stats, tag_corpus, Lexicons, REFERENCE_MEAN_TOKENS, SAMPLE_CORPUS,
};
use vosground::io::{read_corpus, write_attributes};
use vosground::metrics::report::ReportDocument;

use super::{read_text, require_paths, warn_all, Outputs};

#[derive(Debug, clap::Args)]
pub struct Args {
    /// Corpus JSON Lines file; the bundled sample corpus when absent.
    #[arg(long)]
    pub corpus: Option<PathBuf>,
    /// Directory holding `spatial.txt` and `verbs.txt`; bundled lists when absent.
    #[arg(long)]
    pub lexicons: Option<PathBuf>,
    /// Output directory.
    #[arg(long)]
    pub out: PathBuf,
}

pub fn run(a: Args) -> anyhow::Result<()> {
    let lexicon_files = a
        .lexicons
        .as_ref()
        .map(|d| [d.join("spatial.txt"), d.join("verbs.txt")]);
    require_paths(
        a.corpus
            .iter()
            .chain(lexicon_files.iter().flatten())
            .map(|p| p.as_path()),
    )?;
    let lex = match &lexicon_files {
        Some([spatial, verbs]) => Lexicons::from_texts(&read_text(spatial)?, &read_text(verbs)?)?,
        None => Lexicons::bundled(),
    };
    let records = match &a.corpus {
        Some(p) => {
            let (r, w) = read_corpus(&read_text(p)?)?;
            warn_all(p, &w);
            r
        }
        None => read_corpus(SAMPLE_CORPUS)?.0,
    };

    let stats = corpus_stats(&records, &lex)?;
    let tags = tag_corpus(&records, &lex)?;

    let mut doc = ReportDocument::new();
    doc.section("corpus")
        .put("queries", stats.total)
        .put("spatial_fraction", stats.spatial_fraction);
    for (t, g) in &stats.groups {
        let s = doc.section(t.as_str());
        s.put("count", g.count)
            .put("mean_tokens", g.mean_tokens)
            .put("min_tokens", g.min_tokens)
            .put("max_tokens", g.max_tokens)
            .put("verb_fraction", g.verb_fraction)
            .put("spatial_fraction", g.spatial_fraction);
        if let Some((_, r)) = REFERENCE_MEAN_TOKENS.iter().find(|(rt, _)| rt == t) {
            s.put("reference_mean_tokens", *r);
        }
    }

    let rows: Vec<_> = records
        .iter()
        .map(|q| (q.clone(), tags[&q.key()]))
        .collect();
    let mut out = Outputs::default();
    out.add("stats.txt", doc.to_text());
    out.add("stats.json", doc.to_json());
    out.add("attributes.jsonl", write_attributes(&rows));
    out.commit(&a.out)?;
    print!("{}", doc.to_text());
    Ok(())
}
