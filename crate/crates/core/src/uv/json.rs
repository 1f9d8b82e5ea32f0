use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::{JointRange, Symbol, Tuple, UvError};

/// On-disk shape of a joint range:
/// `{"variables": [..], "alphabets": {"X": [..]}, "support": [[..], ..]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JointRangeFile {
    pub variables: Vec<String>,
    #[serde(default)]
    pub alphabets: BTreeMap<String, Vec<Symbol>>,
    pub support: Vec<Tuple>,
}

impl TryFrom<JointRangeFile> for JointRange {
    type Error = UvError;

    fn try_from(file: JointRangeFile) -> Result<Self, UvError> {
        for name in file.alphabets.keys() {
            if !file.variables.contains(name) {
                return Err(UvError::UnknownVariable(name.clone()));
            }
        }
        if file.alphabets.is_empty() {
            return JointRange::from_support(file.variables, file.support);
        }
        let mut alphabets = Vec::with_capacity(file.variables.len());
        for v in &file.variables {
            let a = file
                .alphabets
                .get(v)
                .ok_or_else(|| UvError::Malformed(format!("no alphabet for `{v}`")))?;
            alphabets.push(a.iter().cloned().collect::<BTreeSet<_>>());
        }
        JointRange::new(file.variables, alphabets, file.support)
    }
}

impl From<JointRange> for JointRangeFile {
    fn from(j: JointRange) -> Self {
        let alphabets = j
            .variables
            .iter()
            .cloned()
            .zip(j.alphabets.iter().map(|a| a.iter().cloned().collect()))
            .collect();
        JointRangeFile {
            variables: j.variables,
            alphabets,
            support: j.support.into_iter().collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let text = r#"{"variables":["X","Y"],"alphabets":{"X":[0,1,2],"Y":["a","b"]},
                       "support":[[0,"a"],[1,"a"],[1,"b"]]}"#;
        let j: JointRange = serde_json::from_str(text).unwrap();
        assert_eq!(j.len(), 3);
        assert_eq!(j.alphabet("X").unwrap().len(), 3);
        let back: JointRange = serde_json::from_str(&serde_json::to_string(&j).unwrap()).unwrap();
        assert_eq!(back, j);
    }

    #[test]
    fn rejects_bad_symbols() {
        let text = r#"{"variables":["X"],"alphabets":{"X":[0]},"support":[[1]]}"#;
        let err = serde_json::from_str::<JointRange>(text).unwrap_err();
        assert!(err.to_string().contains("not in the alphabet"));
        let text = r#"{"variables":["X"],"support":[]}"#;
        assert!(serde_json::from_str::<JointRange>(text).is_err());
    }
}
