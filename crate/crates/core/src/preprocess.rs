//! Training-data preparation: score-to-label mapping, synonym augmentation,
//! minority resampling, class weights and the train/test split.

use std::collections::BTreeMap;
use std::fmt;
use std::io::{Read, Write};
use std::path::Path;

use rand::seq::index;
use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::profile::{csv_reader, profile_cells, CandidateProfile, ColumnIndex, ProfileSchema, PROFILE_HEADER};
use crate::rng;
use crate::text::{segments, Segment};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(into = "u8", try_from = "u8")]
pub enum BinaryLabel {
    Negative,
    Positive,
}

impl BinaryLabel {
    pub fn value(self) -> u8 {
        match self {
            BinaryLabel::Negative => 0,
            BinaryLabel::Positive => 1,
        }
    }

    pub fn is_positive(self) -> bool {
        self == BinaryLabel::Positive
    }

    /// +1 for positive, -1 for negative.
    pub fn sign(self) -> f64 {
        match self {
            BinaryLabel::Negative => -1.0,
            BinaryLabel::Positive => 1.0,
        }
    }
}

impl From<BinaryLabel> for u8 {
    fn from(l: BinaryLabel) -> u8 {
        l.value()
    }
}

impl TryFrom<u8> for BinaryLabel {
    type Error = Error;

    fn try_from(v: u8) -> Result<Self> {
        match v {
            0 => Ok(BinaryLabel::Negative),
            1 => Ok(BinaryLabel::Positive),
            _ => Err(Error::range("label", format!("{v} is not 0 or 1"))),
        }
    }
}

impl fmt::Display for BinaryLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value())
    }
}

/// Scores 0-2 are negative, 3-5 positive.
pub fn map_score_to_label(overall_score: i64) -> Result<BinaryLabel> {
    match overall_score {
        0..=2 => Ok(BinaryLabel::Negative),
        3..=5 => Ok(BinaryLabel::Positive),
        s => Err(Error::range("overall_score", format!("{s} must be 0-5"))),
    }
}

/// Anything carrying a binary label.
pub trait Labeled {
    fn label(&self) -> BinaryLabel;
}

impl Labeled for BinaryLabel {
    fn label(&self) -> BinaryLabel {
        *self
    }
}

/// A profile with its derived label.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabeledRow {
    pub profile: CandidateProfile,
    pub label: BinaryLabel,
}

impl LabeledRow {
    pub fn from_profile(profile: CandidateProfile) -> Result<Self> {
        let label = map_score_to_label(profile.overall_score as i64)?;
        Ok(LabeledRow { profile, label })
    }

    pub fn text(&self) -> String {
        self.profile.document()
    }
}

impl Labeled for LabeledRow {
    fn label(&self) -> BinaryLabel {
        self.label
    }
}

pub fn label_counts<T: Labeled>(rows: &[T]) -> (usize, usize) {
    let positives = rows.iter().filter(|r| r.label().is_positive()).count();
    (rows.len() - positives, positives)
}

/// Word-to-synonyms table. Keys are lowercase single tokens; every synonym
/// is itself a single token so replacement never changes the token count.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SynonymLexicon {
    entries: BTreeMap<String, Vec<String>>,
}

impl SynonymLexicon {
    pub fn new<I, S, L>(entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, L)>,
        S: AsRef<str>,
        L: IntoIterator,
        L::Item: AsRef<str>,
    {
        let mut map = BTreeMap::new();
        for (word, syns) in entries {
            let word = word.as_ref().trim().to_lowercase();
            check_single_token(&word, &word)?;
            let syns: Vec<String> = syns
                .into_iter()
                .map(|s| s.as_ref().trim().to_string())
                .filter(|s| !s.is_empty())
                .collect();
            for s in &syns {
                check_single_token(&word, s)?;
            }
            if syns.is_empty() {
                return Err(Error::Config(format!("lexicon: `{word}` has no synonyms")));
            }
            if syns.len() == 1 && syns[0].to_lowercase() == word {
                return Err(Error::Config(format!(
                    "lexicon: `{word}` lists only itself as synonym"
                )));
            }
            if map.insert(word.clone(), syns).is_some() {
                return Err(Error::Config(format!("lexicon: `{word}` defined twice")));
            }
        }
        Ok(SynonymLexicon { entries: map })
    }

    /// Parses `word<TAB>syn1;syn2;...` lines; `#` starts a comment line.
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim_end_matches('\r');
            if line.trim().is_empty() || line.trim_start().starts_with('#') {
                continue;
            }
            let (word, syns) = line.split_once('\t').ok_or_else(|| Error::Parse {
                row: i + 1,
                message: "expected `word<TAB>synonyms`".into(),
            })?;
            entries.push((word.to_string(), syns.split(';').map(str::to_string).collect::<Vec<_>>()));
        }
        Self::new(entries)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text)
    }

    pub fn synonyms(&self, word: &str) -> Option<&[String]> {
        self.entries.get(&word.to_lowercase()).map(Vec::as_slice)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

fn check_single_token(word: &str, token: &str) -> Result<()> {
    if token.is_empty() || !token.chars().all(char::is_alphanumeric) {
        return Err(Error::Config(format!(
            "lexicon: `{token}` (entry `{word}`) is not a single alphanumeric token"
        )));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AugmentationConfig {
    /// Fraction of lexicon-covered tokens to replace, in (0, 1].
    pub replacement_fraction: f64,
    pub rng_seed: u64,
}

impl AugmentationConfig {
    pub fn new(replacement_fraction: f64, rng_seed: u64) -> Result<Self> {
        let c = AugmentationConfig {
            replacement_fraction,
            rng_seed,
        };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        let f = self.replacement_fraction;
        if !(f > 0.0 && f <= 1.0) {
            return Err(Error::range("replacement_fraction", format!("{f} not in (0, 1]")));
        }
        Ok(())
    }
}

/// Replaces `ceil(fraction * k)` of the `k` lexicon-covered words with a
/// synonym, leaving all other text untouched. Same inputs, same output.
pub fn augment_with_synonyms(
    text: &str,
    lexicon: &SynonymLexicon,
    config: &AugmentationConfig,
) -> Result<String> {
    config.validate()?;
    let mut rng = rng::seeded(config.rng_seed);
    Ok(augment_with_rng(text, lexicon, config.replacement_fraction, &mut rng))
}

fn augment_with_rng<R: Rng>(text: &str, lexicon: &SynonymLexicon, fraction: f64, rng: &mut R) -> String {
    let segs = segments(text);
    let covered: Vec<usize> = segs
        .iter()
        .enumerate()
        .filter_map(|(i, s)| match s {
            Segment::Word(w) if lexicon.synonyms(w).is_some() => Some(i),
            _ => None,
        })
        .collect();
    if covered.is_empty() {
        return text.to_string();
    }
    let k = covered.len();
    let take = ((fraction * k as f64).ceil() as usize).clamp(1, k);
    let mut picked: Vec<usize> = index::sample(rng, k, take).into_vec();
    picked.sort_unstable();

    let mut replacement: BTreeMap<usize, String> = BTreeMap::new();
    for p in picked {
        let seg = covered[p];
        let Segment::Word(original) = segs[seg] else { unreachable!() };
        let choices = lexicon.synonyms(original).expect("covered word");
        let chosen = &choices[rng.gen_range(0..choices.len())];
        replacement.insert(seg, match_case(original, chosen));
    }

    let mut out = String::with_capacity(text.len());
    for (i, s) in segs.iter().enumerate() {
        match (replacement.get(&i), s) {
            (Some(r), _) => out.push_str(r),
            (None, Segment::Word(w) | Segment::Separator(w)) => out.push_str(w),
        }
    }
    out
}

/// Carries an initial capital (or full upper case) over to the synonym.
fn match_case(original: &str, synonym: &str) -> String {
    let letters: Vec<char> = original.chars().filter(|c| c.is_alphabetic()).collect();
    if letters.len() > 1 && letters.iter().all(|c| c.is_uppercase()) {
        return synonym.to_uppercase();
    }
    match original.chars().next() {
        Some(c) if c.is_uppercase() => {
            let mut chars = synonym.chars();
            match chars.next() {
                Some(first) => first.to_uppercase().chain(chars).collect(),
                None => String::new(),
            }
        }
        _ => synonym.to_string(),
    }
}

/// Returns the input rows followed by one augmented variant of each, in the
/// same order and with the same labels. Variants rewrite the `about` text
/// and get the id suffix `:aug`.
pub fn augment_dataset(
    rows: &[LabeledRow],
    lexicon: &SynonymLexicon,
    config: &AugmentationConfig,
) -> Result<Vec<LabeledRow>> {
    config.validate()?;
    let mut rng = rng::seeded(config.rng_seed);
    let mut out = rows.to_vec();
    out.reserve(rows.len());
    for row in rows {
        let mut variant = row.clone();
        variant.profile.id = format!("{}:aug", row.profile.id);
        variant.profile.about =
            augment_with_rng(&row.profile.about, lexicon, config.replacement_fraction, &mut rng);
        out.push(variant);
    }
    Ok(out)
}

/// Oversamples the minority class with replacement until both classes have
/// the majority count. Original rows come first, in input order.
pub fn balance_classes<T: Labeled + Clone>(rows: &[T], rng_seed: u64) -> Result<Vec<T>> {
    let (neg, pos) = label_counts(rows);
    if neg == 0 || pos == 0 {
        return Err(Error::SingleClass(format!(
            "cannot resample with {neg} negatives and {pos} positives"
        )));
    }
    let minority = if neg < pos {
        BinaryLabel::Negative
    } else {
        BinaryLabel::Positive
    };
    let deficit = neg.abs_diff(pos);
    let pool: Vec<&T> = rows.iter().filter(|r| r.label() == minority).collect();
    let mut rng = rng::seeded(rng_seed);
    let mut out = rows.to_vec();
    out.reserve(deficit);
    for _ in 0..deficit {
        out.push(pool[rng.gen_range(0..pool.len())].clone());
    }
    Ok(out)
}

/// Shuffles with the seed, then puts the first `round(fraction * n)` rows in
/// train and the remainder in test.
pub fn train_test_split<T: Clone>(rows: &[T], train_fraction: f64, rng_seed: u64) -> Result<(Vec<T>, Vec<T>)> {
    if !(train_fraction > 0.0 && train_fraction < 1.0) {
        return Err(Error::range("train_fraction", format!("{train_fraction} not in (0, 1)")));
    }
    if rows.len() < 2 {
        return Err(Error::Empty(format!("split needs at least 2 rows, got {}", rows.len())));
    }
    let mut order: Vec<usize> = (0..rows.len()).collect();
    order.shuffle(&mut rng::seeded(rng_seed));
    let n_train = (train_fraction * rows.len() as f64).round() as usize;
    let train = order[..n_train].iter().map(|&i| rows[i].clone()).collect();
    let test = order[n_train..].iter().map(|&i| rows[i].clone()).collect();
    Ok((train, test))
}

/// Per-class loss multipliers, `n / (2 * n_class)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassWeights {
    pub negative: f64,
    pub positive: f64,
}

impl ClassWeights {
    pub fn new(negative: f64, positive: f64) -> Result<Self> {
        for (name, w) in [("negative", negative), ("positive", positive)] {
            if !(w.is_finite() && w > 0.0) {
                return Err(Error::range("class weight", format!("{name} weight {w} must be positive")));
            }
        }
        Ok(ClassWeights { negative, positive })
    }

    pub fn uniform() -> Self {
        ClassWeights {
            negative: 1.0,
            positive: 1.0,
        }
    }

    pub fn weight(&self, label: BinaryLabel) -> f64 {
        match label {
            BinaryLabel::Negative => self.negative,
            BinaryLabel::Positive => self.positive,
        }
    }
}

pub fn compute_class_weights<T: Labeled>(labels: &[T]) -> Result<ClassWeights> {
    let (neg, pos) = label_counts(labels);
    if neg == 0 || pos == 0 {
        return Err(Error::SingleClass(format!(
            "class weights need both classes, got {neg} negatives and {pos} positives"
        )));
    }
    let n = labels.len() as f64;
    ClassWeights::new(n / (2.0 * neg as f64), n / (2.0 * pos as f64))
}

/// Reads a labeled-rows file: the profile columns plus `label`. Ids may
/// repeat (resampled duplicates).
pub fn read_labeled_rows<R: Read>(source: R) -> Result<Vec<LabeledRow>> {
    let mut reader = csv_reader(source);
    let headers = reader
        .headers()
        .map_err(|e| Error::format("labeled rows header", e))?
        .clone();
    let columns = ColumnIndex::resolve(&headers, &ProfileSchema::default())?;
    let label_col = headers
        .iter()
        .position(|h| h == "label")
        .ok_or_else(|| Error::MissingColumn("label".into()))?;
    let mut rows = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let row = i + 1;
        let record = record.map_err(|e| Error::Parse {
            row,
            message: e.to_string(),
        })?;
        let profile = columns.profile(&record, row)?;
        let raw = record.get(label_col).unwrap_or("").trim();
        let label = raw
            .parse::<u8>()
            .map_err(|_| ())
            .and_then(|v| BinaryLabel::try_from(v).map_err(|_| ()))
            .map_err(|_| Error::Parse {
                row,
                message: format!("label `{raw}` must be 0 or 1"),
            })?;
        rows.push(LabeledRow { profile, label });
    }
    Ok(rows)
}

pub fn write_labeled_rows<W: Write>(rows: &[LabeledRow], sink: W) -> Result<()> {
    let with_reference = rows.iter().any(|r| r.profile.reference_score.is_some());
    let mut header: Vec<&str> = PROFILE_HEADER.to_vec();
    if with_reference {
        header.push("reference_score");
    }
    header.push("label");
    let ctx = |e: csv::Error| Error::format("writing labeled rows", e);
    let mut writer = csv::Writer::from_writer(sink);
    writer.write_record(&header).map_err(ctx)?;
    for r in rows {
        let mut cells = profile_cells(&r.profile, with_reference);
        cells.push(r.label.to_string());
        writer.write_record(cells).map_err(ctx)?;
    }
    writer
        .flush()
        .map_err(|e| Error::format("writing labeled rows", e))
}
