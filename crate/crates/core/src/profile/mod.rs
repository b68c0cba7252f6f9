//! Candidate profiles: data model, delimited-file ingestion, ordinal feature
//! encoding and feature correlation.

mod correlation;
mod encoding;

use std::collections::HashSet;
use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use correlation::{pearson, pearson_correlation_matrix, CorrelationMatrix};
pub use encoding::{encode_features, EncodingConfig, FeatureMatrix, UnknownPolicy};

/// One candidate as collected from a professional-network profile.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CandidateProfile {
    pub id: String,
    pub experience_years: f64,
    pub education: String,
    pub skills: Vec<String>,
    pub about: String,
    pub job_title: String,
    /// Senior-expert rating, 0 to 5.
    pub overall_score: u8,
    /// Optional expert performance value that TOPSIS results are validated
    /// against. Read from the `reference_score` column when present.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reference_score: Option<f64>,
}

impl CandidateProfile {
    pub fn validate(&self) -> Result<()> {
        if self.id.trim().is_empty() {
            return Err(Error::range("id", "must be non-empty"));
        }
        if !self.experience_years.is_finite() || self.experience_years < 0.0 {
            return Err(Error::range(
                "experience_years",
                format!(
                    "`{}` has {}, expected a finite value >= 0",
                    self.id, self.experience_years
                ),
            ));
        }
        if self.overall_score > 5 {
            return Err(Error::range(
                "overall_score",
                format!("`{}` has {}, must be 0-5", self.id, self.overall_score),
            ));
        }
        if let Some(r) = self.reference_score {
            if !r.is_finite() {
                return Err(Error::range(
                    "reference_score",
                    format!("`{}` has a non-finite value", self.id),
                ));
            }
        }
        Ok(())
    }

    /// The free-text document the text scorer sees.
    pub fn document(&self) -> String {
        format!(
            "{}. {}. {}. {}",
            self.job_title,
            self.education,
            self.skills.join(", "),
            self.about
        )
    }
}

/// Ordered collection of profiles with unique ids.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Dataset {
    profiles: Vec<CandidateProfile>,
}

impl Dataset {
    pub fn new(profiles: Vec<CandidateProfile>) -> Result<Self> {
        let mut seen = HashSet::with_capacity(profiles.len());
        for p in &profiles {
            p.validate()?;
            if !seen.insert(p.id.as_str()) {
                return Err(Error::DuplicateId(p.id.clone()));
            }
        }
        Ok(Dataset { profiles })
    }

    pub fn profiles(&self) -> &[CandidateProfile] {
        &self.profiles
    }

    pub fn len(&self) -> usize {
        self.profiles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.profiles.is_empty()
    }

    pub fn ids(&self) -> impl Iterator<Item = &str> {
        self.profiles.iter().map(|p| p.id.as_str())
    }

    pub fn into_profiles(self) -> Vec<CandidateProfile> {
        self.profiles
    }
}

/// Maps each profile field to the header name it is read from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct ProfileSchema {
    pub id: String,
    pub experience_years: String,
    pub education: String,
    pub skills: String,
    pub about: String,
    pub job_title: String,
    pub overall_score: String,
    /// Optional column; profiles without it carry no reference score.
    pub reference_score: String,
}

impl Default for ProfileSchema {
    fn default() -> Self {
        ProfileSchema {
            id: "id".into(),
            experience_years: "experience_years".into(),
            education: "education".into(),
            skills: "skills".into(),
            about: "about".into(),
            job_title: "job_title".into(),
            overall_score: "overall_score".into(),
            reference_score: "reference_score".into(),
        }
    }
}

pub(crate) struct ColumnIndex {
    id: usize,
    experience_years: usize,
    education: usize,
    skills: usize,
    about: usize,
    job_title: usize,
    overall_score: usize,
    reference_score: Option<usize>,
}

impl ColumnIndex {
    pub(crate) fn resolve(headers: &csv::StringRecord, schema: &ProfileSchema) -> Result<Self> {
        let find = |name: &str| {
            headers
                .iter()
                .position(|h| h.trim() == name)
                .ok_or_else(|| Error::MissingColumn(name.to_string()))
        };
        Ok(ColumnIndex {
            id: find(&schema.id)?,
            experience_years: find(&schema.experience_years)?,
            education: find(&schema.education)?,
            skills: find(&schema.skills)?,
            about: find(&schema.about)?,
            job_title: find(&schema.job_title)?,
            overall_score: find(&schema.overall_score)?,
            reference_score: find(&schema.reference_score).ok(),
        })
    }

    /// Parses one record. `row` is the 1-based data row number used in errors.
    pub(crate) fn profile(&self, record: &csv::StringRecord, row: usize) -> Result<CandidateProfile> {
        let cell = |i: usize| record.get(i).unwrap_or("").trim();
        let parse_err = |message: String| Error::Parse { row, message };

        let experience_years: f64 = cell(self.experience_years).parse().map_err(|_| {
            parse_err(format!(
                "experience_years `{}` is not a number",
                cell(self.experience_years)
            ))
        })?;
        let raw_score = cell(self.overall_score);
        let score: i64 = raw_score
            .parse()
            .map_err(|_| parse_err(format!("overall_score `{raw_score}` is not an integer")))?;
        if !(0..=5).contains(&score) {
            return Err(Error::range(
                "overall_score",
                format!("row {row}: {score} must be 0-5"),
            ));
        }
        let reference_score = match self.reference_score.map(cell) {
            None | Some("") => None,
            Some(raw) => Some(raw.parse::<f64>().map_err(|_| {
                parse_err(format!("reference_score `{raw}` is not a number"))
            })?),
        };
        let profile = CandidateProfile {
            id: cell(self.id).to_string(),
            experience_years,
            education: cell(self.education).to_string(),
            skills: split_skills(cell(self.skills)),
            about: cell(self.about).to_string(),
            job_title: cell(self.job_title).to_string(),
            overall_score: score as u8,
            reference_score,
        };
        profile.validate().map_err(|e| parse_err(e.to_string()))?;
        Ok(profile)
    }
}

fn split_skills(cell: &str) -> Vec<String> {
    cell.split(';')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(str::to_string)
        .collect()
}

pub(crate) fn csv_reader<R: Read>(source: R) -> csv::Reader<R> {
    csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::Headers)
        .from_reader(source)
}

/// Reads a comma-delimited profile file. Rows keep file order.
pub fn load_profiles<R: Read>(source: R, schema: &ProfileSchema) -> Result<Dataset> {
    let mut reader = csv_reader(source);
    let headers = reader
        .headers()
        .map_err(|e| Error::format("profile header", e))?
        .clone();
    let columns = ColumnIndex::resolve(&headers, schema)?;
    let mut profiles = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let row = i + 1;
        let record = record.map_err(|e| Error::Parse {
            row,
            message: e.to_string(),
        })?;
        profiles.push(columns.profile(&record, row)?);
    }
    Dataset::new(profiles)
}

pub(crate) const PROFILE_HEADER: [&str; 7] = [
    "id",
    "experience_years",
    "education",
    "skills",
    "about",
    "job_title",
    "overall_score",
];

pub(crate) fn profile_cells(p: &CandidateProfile, with_reference: bool) -> Vec<String> {
    let mut cells = vec![
        p.id.clone(),
        p.experience_years.to_string(),
        p.education.clone(),
        p.skills.join(";"),
        p.about.clone(),
        p.job_title.clone(),
        p.overall_score.to_string(),
    ];
    if with_reference {
        cells.push(p.reference_score.map(|r| r.to_string()).unwrap_or_default());
    }
    cells
}

/// Writes `dataset` in the canonical column layout read by [`load_profiles`].
/// The `reference_score` column is emitted only when some profile has one.
pub fn write_profiles<W: Write>(dataset: &Dataset, sink: W) -> Result<()> {
    let with_reference = dataset.profiles.iter().any(|p| p.reference_score.is_some());
    let mut writer = csv::Writer::from_writer(sink);
    let mut header: Vec<&str> = PROFILE_HEADER.to_vec();
    if with_reference {
        header.push("reference_score");
    }
    let ctx = |e: csv::Error| Error::format("writing profiles", e);
    writer.write_record(&header).map_err(ctx)?;
    for p in &dataset.profiles {
        writer.write_record(profile_cells(p, with_reference)).map_err(ctx)?;
    }
    writer
        .flush()
        .map_err(|e| Error::format("writing profiles", e))?;
    Ok(())
}
