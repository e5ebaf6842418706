use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use thiserror::Error;

use super::{ModelError, Observation};

/// An ordered list of observations tagged with the label of the model they
/// are meant for.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    observations: Vec<Observation>,
    model_label: String,
}

impl Dataset {
    pub fn new(model_label: impl Into<String>, observations: Vec<Observation>) -> Self {
        Dataset {
            observations,
            model_label: model_label.into(),
        }
    }

    /// `successes` ones followed by `failures` zeros.
    pub fn bernoulli(successes: usize, failures: usize) -> Self {
        let mut obs = vec![Observation::Category(1); successes];
        obs.extend(std::iter::repeat_n(Observation::Category(0), failures));
        Dataset::new("bernoulli", obs)
    }

    pub fn empty(model_label: impl Into<String>) -> Self {
        Dataset::new(model_label, Vec::new())
    }

    pub fn series(model_label: impl Into<String>, values: Vec<f64>) -> Self {
        Dataset::new(model_label, values.into_iter().map(Observation::Value).collect())
    }

    pub fn pairs(model_label: impl Into<String>, pairs: Vec<(f64, f64)>) -> Self {
        Dataset::new(
            model_label,
            pairs.into_iter().map(|(a, b)| Observation::Pair(a, b)).collect(),
        )
    }

    pub fn observations(&self) -> &[Observation] {
        &self.observations
    }

    pub fn model_label(&self) -> &str {
        &self.model_label
    }

    pub fn len(&self) -> usize {
        self.observations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.observations.is_empty()
    }

    /// Counts of categories 1 and 0.
    pub fn success_failure_counts(&self) -> (usize, usize) {
        self.observations.iter().fold((0, 0), |(s, f), y| match y {
            Observation::Category(1) => (s + 1, f),
            Observation::Category(0) => (s, f + 1),
            _ => (s, f),
        })
    }

    /// The observations as a real series.
    pub fn values(&self) -> Result<Vec<f64>, ModelError> {
        self.observations
            .iter()
            .enumerate()
            .map(|(index, y)| match y {
                Observation::Value(v) => Ok(*v),
                other => Err(ModelError::BadObservation {
                    index,
                    observation: other.to_string(),
                    model: self.model_label.clone(),
                }),
            })
            .collect()
    }

    /// `self` followed by `other`.
    pub fn concat(&self, other: &Dataset) -> Result<Dataset, ModelError> {
        if self.model_label != other.model_label {
            return Err(ModelError::LabelMismatch {
                expected: self.model_label.clone(),
                found: other.model_label.clone(),
            });
        }
        let mut obs = self.observations.clone();
        obs.extend_from_slice(&other.observations);
        Ok(Dataset::new(self.model_label.clone(), obs))
    }

    /// Parses the text format: a header line with the model label, then one
    /// observation per line (pairs comma-separated). Blank lines and lines
    /// starting with `#` are skipped.
    pub fn parse(text: &str) -> Result<Dataset, DatasetParseError> {
        let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim()));
        let (line, header) = lines
            .by_ref()
            .find(|(_, l)| !l.is_empty() && !l.starts_with('#'))
            .ok_or(DatasetParseError {
                line: 1,
                message: "missing header line".to_string(),
            })?;
        let family: ModelFamily = header.parse().map_err(|message| DatasetParseError {
            line,
            message,
        })?;
        let mut observations = Vec::new();
        for (line, text) in lines {
            if text.is_empty() || text.starts_with('#') {
                continue;
            }
            let y = family
                .parse_observation(text)
                .map_err(|message| DatasetParseError { line, message })?;
            observations.push(y);
        }
        Ok(Dataset::new(header, observations))
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Dataset, DatasetParseError> {
        let text = fs::read_to_string(path.as_ref()).map_err(|e| DatasetParseError {
            line: 0,
            message: format!("cannot read {}: {e}", path.as_ref().display()),
        })?;
        Dataset::parse(&text)
    }

    /// Inverse of [`Dataset::parse`]; reals use the shortest round-tripping
    /// representation.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.model_label);
        out.push('\n');
        for y in &self.observations {
            out.push_str(&y.to_string());
            out.push('\n');
        }
        out
    }
}

/// A malformed dataset file, with the 1-based line of the first bad record.
#[derive(Debug, Error, Clone, PartialEq)]
#[error("line {line}: {message}")]
pub struct DatasetParseError {
    pub line: usize,
    pub message: String,
}

/// The model families a dataset header can name.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelFamily {
    Bernoulli,
    Multinomial(usize),
    Correlation,
    Ar1,
}

impl fmt::Display for ModelFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelFamily::Bernoulli => f.write_str("bernoulli"),
            ModelFamily::Multinomial(k) => write!(f, "multinomial-{k}"),
            ModelFamily::Correlation => f.write_str("correlation"),
            ModelFamily::Ar1 => f.write_str("ar1"),
        }
    }
}

impl FromStr for ModelFamily {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "bernoulli" => Ok(ModelFamily::Bernoulli),
            "correlation" => Ok(ModelFamily::Correlation),
            "ar1" => Ok(ModelFamily::Ar1),
            other => match other.strip_prefix("multinomial-").map(str::parse::<usize>) {
                Some(Ok(k)) if k >= 2 => Ok(ModelFamily::Multinomial(k)),
                _ => Err(format!("unknown model label '{other}'")),
            },
        }
    }
}

fn parse_real(s: &str) -> Result<f64, String> {
    let v: f64 = s.trim().parse().map_err(|_| format!("'{}' is not a number", s.trim()))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("'{}' is not finite", s.trim()))
    }
}

impl ModelFamily {
    fn parse_observation(&self, text: &str) -> Result<Observation, String> {
        match self {
            ModelFamily::Bernoulli | ModelFamily::Multinomial(_) => {
                let k = match self {
                    ModelFamily::Multinomial(k) => *k,
                    _ => 2,
                };
                let c: usize = text
                    .parse()
                    .map_err(|_| format!("'{text}' is not a category index"))?;
                if c < k {
                    Ok(Observation::Category(c))
                } else {
                    Err(format!("category {c} outside 0..{k}"))
                }
            }
            ModelFamily::Correlation => {
                let (a, b) = text
                    .split_once(',')
                    .ok_or_else(|| format!("expected 'y1,y2', got '{text}'"))?;
                Ok(Observation::Pair(parse_real(a)?, parse_real(b)?))
            }
            ModelFamily::Ar1 => Ok(Observation::Value(parse_real(text)?)),
        }
    }
}
