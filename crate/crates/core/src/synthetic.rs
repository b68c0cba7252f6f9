//! Seeded synthetic candidate profiles, with a matching encoding config and
//! synonym lexicon, for demos and end-to-end tests.
//!
//! Each candidate draws a latent quality in [0, 1]. Experience, education,
//! skills, the self-description, the job title, the expert rating and the
//! reference performance value all increase with it, each with its own noise.

use std::fs;
use std::path::{Path, PathBuf};

use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};
use crate::preprocess::SynonymLexicon;
use crate::profile::{write_profiles, CandidateProfile, Dataset, EncodingConfig};
use crate::rng;

const EDUCATION: [&str; 4] = ["Diploma", "Bachelor", "Master", "PhD"];

const JOB_TITLES: [&str; 5] = [
    "Intern",
    "Junior Developer",
    "Software Engineer",
    "Senior Engineer",
    "Lead Architect",
];

/// Skill name and tier (1 basic, 2 common, 3 advanced).
const SKILLS: [(&str, i64); 11] = [
    ("excel", 1),
    ("word processing", 1),
    ("email", 1),
    ("python", 2),
    ("sql", 2),
    ("java", 2),
    ("git", 2),
    ("rust", 3),
    ("distributed systems", 3),
    ("kubernetes", 3),
    ("machine learning", 3),
];

const ABOUT: [[&str; 2]; 4] = [
    [
        "Eager to learn and looking for a first opportunity.",
        "Recent graduate seeking an entry level role.",
    ],
    [
        "Reliable team member with solid practical experience.",
        "Dependable developer who enjoys steady collaborative work.",
    ],
    [
        "Skilled engineer who delivers robust projects on time.",
        "Experienced professional building efficient scalable systems.",
    ],
    [
        "Expert leader who architected large systems and mentored strong teams.",
        "Seasoned architect driving innovative products across global teams.",
    ],
];

pub const LEXICON: &str = "\
# word\tsynonyms
eager\tkeen;enthusiastic
learn\tstudy;grow
looking\tsearching;hoping
opportunity\topening;chance
recent\tnew;fresh
seeking\tpursuing;wanting
reliable\tdependable;trustworthy
solid\tsound;firm
practical\tapplied;pragmatic
dependable\treliable;steady
enjoys\tlikes;relishes
steady\tconsistent;stable
skilled\tadept;proficient
delivers\tships;provides
robust\tsturdy;resilient
projects\tinitiatives;programs
experienced\tseasoned;veteran
building\tconstructing;creating
efficient\teffective;streamlined
expert\tspecialist;authority
leader\tmanager;head
large\tbig;sizable
mentored\tcoached;guided
strong\tcapable;powerful
seasoned\tveteran;experienced
driving\tleading;steering
innovative\tinventive;creative
teams\tgroups;squads
systems\tplatforms;architectures
";

/// Profiles plus the declared artifacts needed to encode and augment them.
#[derive(Debug, Clone)]
pub struct SyntheticCorpus {
    pub dataset: Dataset,
    pub encoding: EncodingConfig,
    pub lexicon: SynonymLexicon,
}

/// Where [`SyntheticCorpus::write_files`] put each input file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusFiles {
    pub profiles: PathBuf,
    pub encoding: PathBuf,
    pub lexicon: PathBuf,
}

impl SyntheticCorpus {
    /// Writes `profiles.csv`, `encoding.toml` and `lexicon.tsv` into `dir`.
    pub fn write_files(&self, dir: &Path) -> Result<CorpusFiles> {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        let files = CorpusFiles {
            profiles: dir.join("profiles.csv"),
            encoding: dir.join("encoding.toml"),
            lexicon: dir.join("lexicon.tsv"),
        };
        let mut csv = Vec::new();
        write_profiles(&self.dataset, &mut csv)?;
        for (path, bytes) in [
            (&files.profiles, csv),
            (&files.encoding, self.encoding.to_toml()?.into_bytes()),
            (&files.lexicon, LEXICON.as_bytes().to_vec()),
        ] {
            fs::write(path, bytes).map_err(|e| Error::io(path, e))?;
        }
        Ok(files)
    }
}

pub fn encoding_config() -> EncodingConfig {
    let tiered = |items: &[&str]| {
        items
            .iter()
            .enumerate()
            .map(|(i, s)| (s.to_lowercase(), i as i64 + 1))
            .collect()
    };
    EncodingConfig {
        education: Some(tiered(&EDUCATION)),
        job_title: Some(tiered(&JOB_TITLES)),
        // Distinct codes, ascending with skill tier.
        skills: Some(
            SKILLS
                .iter()
                .enumerate()
                .map(|(i, (s, _))| (s.to_string(), i as i64 + 1))
                .collect(),
        ),
        about: Some(
            ABOUT
                .iter()
                .flatten()
                .enumerate()
                .map(|(i, t)| (t.to_lowercase(), i as i64 + 1))
                .collect(),
        ),
        ..EncodingConfig::default()
    }
}

pub fn lexicon() -> SynonymLexicon {
    SynonymLexicon::parse(LEXICON).expect("built-in lexicon is valid")
}

fn tier<R: Rng>(rng: &mut R, quality: f64, levels: usize, spread: f64) -> usize {
    let noise = Normal::new(0.0, spread).expect("positive spread");
    let top = (levels - 1) as f64;
    (quality * top + noise.sample(rng)).round().clamp(0.0, top) as usize
}

pub fn profile<R: Rng>(rng: &mut R, id: String) -> CandidateProfile {
    // Skewed towards stronger candidates, so positives are the majority.
    let quality: f64 = rng.gen::<f64>().powf(0.7);
    let unit = Normal::new(0.0, 1.0).expect("unit normal");

    let experience = (quality * 12.0 + 1.5 * unit.sample(rng)).max(0.0);
    let experience_years = (experience * 2.0).round() / 2.0;

    let skill_tier = tier(rng, quality, 3, 0.5) as i64 + 1;
    let n_skills = 2 + tier(rng, quality, 4, 0.8);
    let mut pool: Vec<&str> = SKILLS
        .iter()
        .filter(|(_, c)| (*c - skill_tier).abs() <= 1)
        .map(|(s, _)| *s)
        .collect();
    pool.shuffle(rng);
    let skills = pool.into_iter().take(n_skills).map(str::to_string).collect();

    let about_tier = tier(rng, quality, 4, 0.6);
    let about = ABOUT[about_tier][rng.gen_range(0..2)].to_string();

    let score = (quality * 5.0 + 0.6 * unit.sample(rng)).round().clamp(0.0, 5.0) as u8;
    let reference = (20.0 + 75.0 * quality + 4.0 * unit.sample(rng)).max(1.0);

    CandidateProfile {
        id,
        experience_years,
        education: EDUCATION[tier(rng, quality, 4, 0.7)].to_string(),
        skills,
        about,
        job_title: JOB_TITLES[tier(rng, quality, 5, 0.6)].to_string(),
        overall_score: score,
        reference_score: Some((reference * 10.0).round() / 10.0),
    }
}

/// `n` profiles with ids `c001`, `c002`, ...
pub fn generate(n: usize, seed: u64) -> Result<SyntheticCorpus> {
    let mut rng = rng::seeded(rng::derive_seed(seed, rng::Stream::Synthetic));
    let profiles = (1..=n).map(|i| profile(&mut rng, format!("c{i:03}"))).collect();
    Ok(SyntheticCorpus {
        dataset: Dataset::new(profiles)?,
        encoding: encoding_config().normalized()?,
        lexicon: lexicon(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::preprocess::{label_counts, LabeledRow};
    use crate::profile::encode_features;

    #[test]
    fn generated_corpus_is_valid_and_encodable() {
        let corpus = generate(100, 7).unwrap();
        assert_eq!(corpus.dataset.len(), 100);
        let fm = encode_features(&corpus.dataset, &corpus.encoding).unwrap();
        assert_eq!(fm.values.nrows(), 100);
        let rows: Vec<LabeledRow> = corpus
            .dataset
            .profiles()
            .iter()
            .cloned()
            .map(|p| LabeledRow::from_profile(p).unwrap())
            .collect();
        let (neg, pos) = label_counts(&rows);
        assert!(neg > 10 && pos > neg, "{neg} negatives, {pos} positives");
    }

    #[test]
    fn same_seed_same_profiles() {
        assert_eq!(generate(20, 3).unwrap().dataset, generate(20, 3).unwrap().dataset);
        assert_ne!(generate(20, 3).unwrap().dataset, generate(20, 4).unwrap().dataset);
    }

    #[test]
    fn written_files_load_back() {
        let corpus = generate(12, 1).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let files = corpus.write_files(dir.path()).unwrap();
        let text = std::fs::read(&files.profiles).unwrap();
        let loaded = crate::profile::load_profiles(&text[..], &Default::default()).unwrap();
        assert_eq!(loaded, corpus.dataset);
        assert_eq!(EncodingConfig::load(&files.encoding).unwrap(), corpus.encoding);
        assert_eq!(SynonymLexicon::load(&files.lexicon).unwrap(), corpus.lexicon);
    }

    #[test]
    fn lexicon_covers_about_texts() {
        let lex = lexicon();
        for text in ABOUT.iter().flatten() {
            assert!(
                crate::text::tokenize(text).iter().any(|t| lex.synonyms(t).is_some()),
                "{text}"
            );
        }
    }
}
