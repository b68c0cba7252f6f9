use std::collections::HashSet;
use std::path::Path;

use indexmap::IndexMap;
use ndarray::Array2;
use serde::{Deserialize, Serialize};

use super::{CandidateProfile, Dataset};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum UnknownPolicy {
    /// Fail on any category missing from the field's map.
    #[default]
    Reject,
    /// Encode missing categories as the reserved code.
    Reserved,
}

/// Declared ordinal maps turning categorical profile fields into numbers.
///
/// Lookups are case-insensitive on the trimmed cell text. A field without a
/// map is left out of the feature matrix. `skills` is encoded as the sum of
/// the codes of every listed skill.
///
/// ```toml
/// unknown_policy = "reject"
///
/// [education]
/// diploma = 1
/// bachelor = 2
/// ```
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EncodingConfig {
    #[serde(default)]
    pub unknown_policy: UnknownPolicy,
    #[serde(default = "default_reserved_code")]
    pub reserved_code: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub education: Option<IndexMap<String, i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub skills: Option<IndexMap<String, i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub about: Option<IndexMap<String, i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub job_title: Option<IndexMap<String, i64>>,
}

fn default_reserved_code() -> i64 {
    -1
}

impl Default for EncodingConfig {
    fn default() -> Self {
        EncodingConfig {
            unknown_policy: UnknownPolicy::Reject,
            reserved_code: default_reserved_code(),
            education: None,
            skills: None,
            about: None,
            job_title: None,
        }
    }
}

impl EncodingConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let raw: EncodingConfig =
            toml::from_str(text).map_err(|e| Error::format("encoding config", e))?;
        raw.normalized()
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml(&text)
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::format("encoding config", e))
    }

    /// Lowercases keys and checks code uniqueness and reserved-code collisions.
    pub fn normalized(self) -> Result<Self> {
        let reserved = self.reserved_code;
        let policy = self.unknown_policy;
        let fix = |field: &str, map: Option<IndexMap<String, i64>>| -> Result<_> {
            let Some(map) = map else { return Ok(None) };
            let mut out = IndexMap::with_capacity(map.len());
            let mut codes = HashSet::new();
            for (k, code) in map {
                let key = k.trim().to_lowercase();
                if out.insert(key.clone(), code).is_some() {
                    return Err(Error::Config(format!(
                        "{field}: category `{key}` listed twice"
                    )));
                }
                if !codes.insert(code) {
                    return Err(Error::Config(format!(
                        "{field}: code {code} assigned to more than one category"
                    )));
                }
            }
            if policy == UnknownPolicy::Reserved && codes.contains(&reserved) {
                return Err(Error::Config(format!(
                    "{field}: reserved code {reserved} collides with an assigned code"
                )));
            }
            Ok(Some(out))
        };
        Ok(EncodingConfig {
            education: fix("education", self.education)?,
            skills: fix("skills", self.skills)?,
            about: fix("about", self.about)?,
            job_title: fix("job_title", self.job_title)?,
            ..self
        })
    }

    fn code(&self, field: &str, map: &IndexMap<String, i64>, value: &str) -> Result<i64> {
        match map.get(value.trim().to_lowercase().as_str()) {
            Some(&c) => Ok(c),
            None => match self.unknown_policy {
                UnknownPolicy::Reserved => Ok(self.reserved_code),
                UnknownPolicy::Reject => Err(Error::UnknownCategory {
                    field: field.to_string(),
                    value: value.to_string(),
                }),
            },
        }
    }
}

/// Rows follow dataset order; columns are named encoded features.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureMatrix {
    pub columns: Vec<String>,
    pub row_ids: Vec<String>,
    pub values: Array2<f64>,
}

impl FeatureMatrix {
    pub fn new(columns: Vec<String>, row_ids: Vec<String>, values: Array2<f64>) -> Result<Self> {
        if values.nrows() != row_ids.len() || values.ncols() != columns.len() {
            return Err(Error::Shape(format!(
                "{}x{} values for {} rows and {} columns",
                values.nrows(),
                values.ncols(),
                row_ids.len(),
                columns.len()
            )));
        }
        let unique: HashSet<&String> = columns.iter().collect();
        if unique.len() != columns.len() {
            return Err(Error::Shape("duplicate column name".into()));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::range("feature", "all entries must be finite"));
        }
        Ok(FeatureMatrix {
            columns,
            row_ids,
            values,
        })
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }
}

type FieldEncoder<'a> = (&'static str, Box<dyn Fn(&CandidateProfile) -> Result<f64> + 'a>);

/// Encodes every profile into one numeric row.
///
/// Column order: `experience_years`, then `education`, `skills`, `about`,
/// `job_title` for whichever have a map, then `overall_score`.
pub fn encode_features(dataset: &Dataset, config: &EncodingConfig) -> Result<FeatureMatrix> {
    let mut encoders: Vec<FieldEncoder<'_>> = vec![(
        "experience_years",
        Box::new(|p: &CandidateProfile| Ok(p.experience_years)),
    )];
    if let Some(map) = &config.education {
        encoders.push((
            "education",
            Box::new(move |p| config.code("education", map, &p.education).map(|c| c as f64)),
        ));
    }
    if let Some(map) = &config.skills {
        encoders.push((
            "skills",
            Box::new(move |p| {
                p.skills.iter().try_fold(0.0, |acc, s| {
                    config.code("skills", map, s).map(|c| acc + c as f64)
                })
            }),
        ));
    }
    if let Some(map) = &config.about {
        encoders.push((
            "about",
            Box::new(move |p| config.code("about", map, &p.about).map(|c| c as f64)),
        ));
    }
    if let Some(map) = &config.job_title {
        encoders.push((
            "job_title",
            Box::new(move |p| config.code("job_title", map, &p.job_title).map(|c| c as f64)),
        ));
    }
    encoders.push((
        "overall_score",
        Box::new(|p: &CandidateProfile| Ok(p.overall_score as f64)),
    ));

    let rows = dataset.len();
    let mut values = Array2::zeros((rows, encoders.len()));
    for (i, profile) in dataset.profiles().iter().enumerate() {
        for (j, (_, encode)) in encoders.iter().enumerate() {
            values[[i, j]] = encode(profile)?;
        }
    }
    FeatureMatrix::new(
        encoders.iter().map(|(n, _)| n.to_string()).collect(),
        dataset.ids().map(str::to_string).collect(),
        values,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profile::tests::TWO_ROWS;
    use crate::profile::{load_profiles, ProfileSchema};

    const CONFIG: &str = r#"
unknown_policy = "reject"

[education]
Diploma = 1
bachelor = 2

[skills]
rust = 3
sql = 2
excel = 1

[job_title]
analyst = 1
"software engineer" = 2
"#;

    fn dataset() -> Dataset {
        load_profiles(TWO_ROWS.as_bytes(), &ProfileSchema::default()).unwrap()
    }

    #[test]
    fn codes_substitute_directly() {
        let config = EncodingConfig::from_toml(CONFIG).unwrap();
        let fm = encode_features(&dataset(), &config).unwrap();
        assert_eq!(
            fm.columns,
            ["experience_years", "education", "skills", "job_title", "overall_score"]
        );
        assert_eq!(fm.values.row(0).to_vec(), [4.0, 2.0, 5.0, 2.0, 4.0]);
        assert_eq!(fm.values.row(1).to_vec(), [1.5, 1.0, 1.0, 1.0, 2.0]);
    }

    #[test]
    fn encoding_is_deterministic() {
        let config = EncodingConfig::from_toml(CONFIG).unwrap();
        let ds = dataset();
        assert_eq!(
            encode_features(&ds, &config).unwrap(),
            encode_features(&ds, &config).unwrap()
        );
    }

    #[test]
    fn unknown_category_rejected_by_default() {
        let config = EncodingConfig::from_toml(CONFIG).unwrap();
        let text = TWO_ROWS.replace("Diploma", "Bootcamp");
        let ds = load_profiles(text.as_bytes(), &ProfileSchema::default()).unwrap();
        match encode_features(&ds, &config).unwrap_err() {
            Error::UnknownCategory { field, value } => {
                assert_eq!(field, "education");
                assert_eq!(value, "Bootcamp");
            }
            other => panic!("unexpected {other}"),
        }
    }

    #[test]
    fn reserved_policy_assigns_reserved_code() {
        let config = EncodingConfig::from_toml(
            &CONFIG.replace("\"reject\"", "\"reserved\"\nreserved_code = 0"),
        )
        .unwrap();
        let text = TWO_ROWS.replace("Diploma", "Bootcamp");
        let ds = load_profiles(text.as_bytes(), &ProfileSchema::default()).unwrap();
        let fm = encode_features(&ds, &config).unwrap();
        assert_eq!(fm.values[[1, 1]], 0.0);
    }

    #[test]
    fn duplicate_codes_and_reserved_collision_rejected() {
        let dup = CONFIG.replace("bachelor = 2", "bachelor = 1");
        assert!(matches!(EncodingConfig::from_toml(&dup), Err(Error::Config(_))));
        let clash = CONFIG.replace("\"reject\"", "\"reserved\"\nreserved_code = 2");
        assert!(matches!(EncodingConfig::from_toml(&clash), Err(Error::Config(_))));
    }

    #[test]
    fn toml_round_trip() {
        let config = EncodingConfig::from_toml(CONFIG).unwrap();
        let again = EncodingConfig::from_toml(&config.to_toml().unwrap()).unwrap();
        assert_eq!(config, again);
    }
}
