//! On-disk JSON formats for mechanisms and priors, and the conversions into
//! library types. Databases are encoded by adding `entry_alphabet` and `n`
//! next to the channel; rows follow the row-major database ordering.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use pml_core::database::{DatabaseMechanism, DatabaseSchema};
use pml_core::{Channel, Pmf};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MechanismFile {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub entry_alphabet: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub input_labels: Option<Vec<String>>,
    pub output_labels: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PriorFile {
    pub labels: Vec<String>,
    pub probs: Vec<f64>,
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, String> {
    let text = fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| format!("cannot parse {}: {e}", path.display()))
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), String> {
    let mut text = serde_json::to_string_pretty(value)
        .map_err(|e| format!("cannot serialize {}: {e}", path.display()))?;
    text.push('\n');
    fs::write(path, text).map_err(|e| format!("cannot write {}: {e}", path.display()))
}

impl MechanismFile {
    /// Plain channel view; database files use their database labels as the
    /// input alphabet.
    pub fn to_channel(&self) -> Result<Channel, String> {
        let input_labels = match (&self.input_labels, self.schema()?) {
            (Some(labels), None) => labels.clone(),
            (None, Some(schema)) => schema.database_labels().to_vec(),
            (Some(labels), Some(schema)) => {
                if labels != schema.database_labels() {
                    return Err(
                        "input_labels disagree with the database ordering implied by \
                         entry_alphabet and n"
                            .into(),
                    );
                }
                labels.clone()
            }
            (None, None) => {
                return Err("mechanism needs input_labels, or entry_alphabet with n".into())
            }
        };
        Channel::new(input_labels, self.output_labels.clone(), self.rows.clone())
            .map_err(|e| e.to_string())
    }

    pub fn to_database_mechanism(&self) -> Result<DatabaseMechanism, String> {
        let schema = self
            .schema()?
            .ok_or_else(|| "mechanism file lacks entry_alphabet and n".to_string())?;
        let channel = self.to_channel()?;
        DatabaseMechanism::new(schema, channel).map_err(|e| e.to_string())
    }

    fn schema(&self) -> Result<Option<DatabaseSchema>, String> {
        match (&self.entry_alphabet, self.n) {
            (Some(alphabet), Some(n)) => DatabaseSchema::new(alphabet.clone(), n)
                .map(Some)
                .map_err(|e| e.to_string()),
            (None, None) => Ok(None),
            _ => Err("entry_alphabet and n must be given together".into()),
        }
    }

    pub fn from_channel(c: &Channel) -> Self {
        MechanismFile {
            entry_alphabet: None,
            n: None,
            input_labels: Some(c.input_labels().to_vec()),
            output_labels: c.output_labels().to_vec(),
            rows: (0..c.input_len()).map(|x| c.row(x).to_vec()).collect(),
        }
    }
}

impl PriorFile {
    pub fn to_pmf(&self) -> Result<Pmf, String> {
        Pmf::new(self.labels.clone(), self.probs.clone()).map_err(|e| e.to_string())
    }

    pub fn from_pmf(p: &Pmf) -> Self {
        PriorFile {
            labels: p.labels().to_vec(),
            probs: p.probs().to_vec(),
        }
    }
}

/// Instance file for the verification suites; each check reads the fields it
/// needs and rejects files missing them.
#[derive(Debug, Clone, Default, Deserialize)]
pub struct InstanceFile {
    pub mechanism: Option<MechanismFile>,
    pub prior: Option<PriorFile>,
    pub u_kernel: Option<MechanismFile>,
    pub disclosed: Option<String>,
    pub lambda: Option<f64>,
    pub alpha: Option<f64>,
}
