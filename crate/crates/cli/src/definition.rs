//! System definition files: `space`, `system` and named `measures`.

use std::collections::BTreeMap;
use std::path::Path;

use indyn_core::error::Error as CoreError;
use indyn_core::measure::{AtomRecord, DiscreteMeasure};
use indyn_core::space::{Point, SpaceDescriptor};
use indyn_core::systems::{SystemDef, SystemDescriptor};
use serde::Deserialize;

use crate::CliError;

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DefinitionFile {
    /// Omitted for zoo systems, which bring their own space.
    #[serde(default)]
    pub space: Option<SpaceDescriptor>,
    pub system: SystemDescriptor,
    #[serde(default)]
    pub measures: BTreeMap<String, Vec<AtomRecord>>,
}

pub struct Definition {
    pub system: SystemDef,
    pub measures: BTreeMap<String, DiscreteMeasure>,
}

impl Definition {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let file: DefinitionFile = serde_json::from_str(text).map_err(|e| {
            CliError::Usage(format!(
                "definition file: {e} (line {}, column {})",
                e.line(),
                e.column()
            ))
        })?;
        let system = SystemDef::from_descriptor(file.space.as_ref(), &file.system)
            .map_err(|e| CliError::Usage(format!("definition file, field `system`: {e}")))?;
        let measures = file
            .measures
            .iter()
            .map(|(name, recs)| {
                DiscreteMeasure::from_records(system.space(), recs)
                    .map(|m| (name.clone(), m))
                    .map_err(|e| CliError::Usage(format!("definition file, measure `{name}`: {e}")))
            })
            .collect::<Result<_, _>>()?;
        Ok(Definition { system, measures })
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
        Definition::parse(&text)
    }

    pub fn measure(&self, name: &str) -> Result<&DiscreteMeasure, CliError> {
        self.measures
            .get(name)
            .ok_or_else(|| CliError::Usage(format!("no measure named `{name}` in the definition file")))
    }

    pub fn point(&self, label: &str) -> Result<Point, CliError> {
        self.system
            .space()
            .resolve(label)
            .map_err(|e: CoreError| CliError::Usage(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_exact_and_float_numbers() {
        let text = r#"{
            "space": {"kind": "interval", "lo": {"num": -1, "den": 1}, "hi": 1, "q": 8},
            "system": {"generator": "autonomous", "map": {"kind": "piecewise_linear",
                "knots": [[-1, 0], [{"num": -1, "den": 2}, 1], [0, 0], [1, -1]]}},
            "measures": {"mu": [{"point": "-1/2", "num": 1, "den": 1}]}
        }"#;
        let d = Definition::parse(text).unwrap();
        assert_eq!(d.system.space().len(), 9);
        assert_eq!(d.measure("mu").unwrap().support_len(), 1);
    }

    #[test]
    fn reports_position_of_syntax_errors() {
        let err = Definition::parse("{\n  \"system\": }").err().unwrap();
        match err {
            CliError::Usage(msg) => assert!(msg.contains("line 2"), "{msg}"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn zoo_definition_needs_no_space() {
        let d = Definition::parse(r#"{"system": {"generator": "zoo", "name": "swap2"}}"#).unwrap();
        assert_eq!(d.system.space().len(), 2);
    }
}
