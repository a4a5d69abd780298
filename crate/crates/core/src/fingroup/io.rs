use serde::{Deserialize, Serialize};

use super::{Perm, PermGroup};
use crate::error::{Error, Result};

/// Optional character table carried by a group file. `irreducibles[i][c]`
/// is the coefficient vector (power basis of `ζ_conductor`) of the value of
/// irreducible `i` on the class of `classes[c]`. Coefficients are integers
/// or `"p/q"` strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuppliedCharacterTable {
    pub classes: Vec<Perm>,
    #[serde(default)]
    pub conductor: Option<usize>,
    pub irreducibles: Vec<Vec<Vec<serde_json::Value>>>,
}

/// On-disk group description.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupFile {
    pub degree: usize,
    pub generators: Vec<Perm>,
    #[serde(default)]
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub character_table: Option<SuppliedCharacterTable>,
}

impl GroupFile {
    pub fn parse(text: &str, location: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::parse(location, e.to_string()))
    }

    pub fn into_group(self) -> Result<PermGroup> {
        let name = if self.name.is_empty() { "G".to_string() } else { self.name };
        let mut g = PermGroup::new(name, self.degree, self.generators)?;
        g.supplied_table = self.character_table;
        Ok(g)
    }
}

impl PermGroup {
    pub fn from_json(text: &str, location: &str) -> Result<Self> {
        GroupFile::parse(text, location)?.into_group()
    }

    pub fn to_file(&self) -> GroupFile {
        GroupFile {
            degree: self.degree(),
            generators: self.generators().to_vec(),
            name: self.name().to_string(),
            character_table: self.supplied_table.clone(),
        }
    }

    pub fn supplied_character_table(&self) -> Option<&SuppliedCharacterTable> {
        self.supplied_table.as_ref()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let g = PermGroup::from_json(r#"{"degree":3,"generators":[[1,0,2],[1,2,0]],"name":"S3"}"#, "inline").unwrap();
        assert_eq!(g.order(), 6);
        let text = serde_json::to_string(&g.to_file()).unwrap();
        let h = PermGroup::from_json(&text, "inline").unwrap();
        assert_eq!(h.elements(), g.elements());
    }

    #[test]
    fn parse_errors_carry_location() {
        match PermGroup::from_json("{\"degree\":", "g.json") {
            Err(Error::Parse { location, .. }) => assert_eq!(location, "g.json"),
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            PermGroup::from_json(r#"{"degree":2,"generators":[[0,0]]}"#, "x"),
            Err(Error::InvalidGroup(_))
        ));
    }
}
