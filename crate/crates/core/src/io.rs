//! JSON instance files.

use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::distance::{DistanceKind, DistanceSpec};
use crate::error::{Error, Result};
use crate::formula::{parse_formula, Formula, Profile, Universe};
use crate::merge::{merge_scheme, multi_source_merge, Instance, MergeResult, SourceProfile};
use crate::weights::{WeightScheme, WeightVector};

fn default_constraints() -> String {
    "true".into()
}

/// On-disk instance: formulae are strings in the formula grammar. Exactly
/// one of `profile` and `sources` must be present.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub variables: Vec<String>,
    #[serde(default = "default_constraints")]
    pub constraints: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub profile: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sources: Option<Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub distance: Option<DistanceSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scheme: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Body {
    Profile(Instance),
    Sources(SourceProfile),
}

/// A validated instance file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Loaded {
    pub universe: Universe,
    pub constraints: Formula,
    pub body: Body,
    pub distance: Option<DistanceKind>,
    pub scheme: Option<WeightScheme>,
}

impl Loaded {
    /// The single-formula-per-source instance, or the flattened sources.
    pub fn flat_instance(&self) -> Result<Instance> {
        match &self.body {
            Body::Profile(inst) => Ok(inst.clone()),
            Body::Sources(sp) => Instance::new(
                self.universe.clone(),
                self.constraints.clone(),
                Profile::new(sp.flatten())?,
            ),
        }
    }

    /// Merges the profile, or the sources with one weight per source.
    pub fn merge(&self, scheme: &WeightScheme, kind: &DistanceKind) -> Result<MergeResult> {
        match &self.body {
            Body::Profile(inst) => merge_scheme(inst, scheme, kind),
            Body::Sources(sp) => multi_source_merge(&self.universe, &self.constraints, sp, scheme, kind),
        }
    }
}

/// Integer entries as JSON numbers, falling back to strings past `u64`.
pub fn weight_json(w: &WeightVector) -> Value {
    match w.as_integers() {
        Some(ints) => Value::Array(
            ints.iter()
                .map(|i| match u64::try_from(i) {
                    Ok(v) => json!(v),
                    Err(_) => json!(i.to_string()),
                })
                .collect(),
        ),
        None => json!(w.to_string()),
    }
}

/// `{"models": [{"literals": [...], "witness": [...] | null}, ...]}` in model
/// order.
pub fn result_json(u: &Universe, r: &MergeResult, with_witness: bool) -> Value {
    let models: Vec<Value> = r
        .models
        .iter()
        .map(|m| {
            let witness = match (with_witness, r.witnesses.get(m)) {
                (true, Some(w)) => weight_json(w),
                _ => Value::Null,
            };
            json!({ "literals": m.literals(u), "witness": witness })
        })
        .collect();
    json!({ "models": models })
}

impl InstanceFile {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn read(path: &Path) -> Result<Self> {
        InstanceFile::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("instance files serialize");
        s.push('\n');
        s
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json())?;
        Ok(())
    }

    pub fn from_instance(inst: &Instance, distance: Option<&DistanceKind>, scheme: Option<&WeightScheme>) -> Self {
        let u = inst.universe();
        InstanceFile {
            variables: u.names(),
            constraints: inst.constraints().to_text(u),
            profile: Some(inst.profile().entries().iter().map(|f| f.to_text(u)).collect()),
            sources: None,
            distance: distance.map(DistanceKind::to_spec),
            scheme: scheme.map(ToString::to_string),
        }
    }

    pub fn load(&self) -> Result<Loaded> {
        let universe = Universe::new(&self.variables)?;
        let constraints = parse_formula(&self.constraints, &universe)?;
        let parse_all = |texts: &[String]| -> Result<Vec<Formula>> {
            texts.iter().map(|t| parse_formula(t, &universe)).collect()
        };
        let body = match (&self.profile, &self.sources) {
            (Some(p), None) => Body::Profile(Instance::new(
                universe.clone(),
                constraints.clone(),
                Profile::new(parse_all(p)?)?,
            )?),
            (None, Some(s)) => {
                let sources = s.iter().map(|src| parse_all(src)).collect::<Result<Vec<_>>>()?;
                let sp = SourceProfile::new(sources)?;
                // validate consistency of the constraints and every formula
                Instance::new(universe.clone(), constraints.clone(), Profile::new(sp.flatten())?)?;
                Body::Sources(sp)
            }
            _ => {
                return Err(Error::InvalidInstance(
                    "exactly one of `profile` and `sources` is required".into(),
                ))
            }
        };
        Ok(Loaded {
            universe,
            constraints,
            body,
            distance: self.distance.clone().map(DistanceSpec::into_kind).transpose()?,
            scheme: self.scheme.as_deref().map(WeightScheme::parse).transpose()?,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instancegen::{random_instance, realize, VectorSpec};
    use num_rational::BigRational;

    #[test]
    fn parses_a_profile_file() {
        let text = r#"{
            "variables": ["a", "b"],
            "constraints": "a | b",
            "profile": ["a", "!a & b"],
            "distance": {"table": [[0,0],[1,1]], "default": 2},
            "scheme": "expert:3"
        }"#;
        let loaded = InstanceFile::from_json(text).unwrap().load().unwrap();
        let Body::Profile(inst) = &loaded.body else { panic!("expected a profile") };
        assert_eq!(inst.m(), 2);
        assert_eq!(loaded.scheme, Some(WeightScheme::Expert(Some(3))));
        assert!(matches!(loaded.distance, Some(DistanceKind::Table(_))));
    }

    #[test]
    fn parses_sources() {
        let text = r#"{"variables": ["x","y"], "sources": [["x","y"],["!x","!y"]]}"#;
        let loaded = InstanceFile::from_json(text).unwrap().load().unwrap();
        let Body::Sources(sp) = &loaded.body else { panic!("expected sources") };
        assert_eq!(sp.len(), 2);
        assert_eq!(loaded.flat_instance().unwrap().m(), 4);
        assert_eq!(loaded.constraints, Formula::Const(true));
    }

    #[test]
    fn rejects_bad_files() {
        let cases = [
            r#"{"variables": ["x"], "profile": ["x"], "sources": [["x"]]}"#,
            r#"{"variables": ["x"]}"#,
            r#"{"variables": ["x"], "profile": ["y"]}"#,
            r#"{"variables": ["x"], "profile": ["x &"]}"#,
            r#"{"variables": ["x"], "profile": ["x & !x"]}"#,
            r#"{"variables": ["x"], "constraints": "false", "profile": ["x"]}"#,
            r#"{"variables": ["x"], "profile": ["x"], "scheme": "maybe"}"#,
            r#"{"variables": ["x"], "profile": ["x"], "distance": "manhattan"}"#,
            r#"{"variables": ["x"], "profile": ["x"], "extra": 1}"#,
            r#"{"variables": ["x", "x"], "profile": ["x"]}"#,
            r#"not json"#,
        ];
        for c in cases {
            let r = InstanceFile::from_json(c).and_then(|f| f.load());
            assert!(r.is_err(), "{c}");
            assert_eq!(r.unwrap_err().exit_code(), 2);
        }
    }

    #[test]
    fn round_trips() {
        let half = BigRational::new(1.into(), 2.into());
        for seed in 0..20 {
            let inst = random_instance(4, 3, seed, &half).unwrap();
            let file = InstanceFile::from_instance(&inst, Some(&DistanceKind::Hamming), Some(&WeightScheme::AllPositive));
            let back = InstanceFile::from_json(&file.to_json()).unwrap();
            assert_eq!(back, file);
            let loaded = back.load().unwrap();
            assert_eq!(loaded.body, Body::Profile(inst));
        }
        let inst = realize(&VectorSpec::parse("3,0;1,1;0,3").unwrap(), None).unwrap();
        let file = InstanceFile::from_instance(&inst, None, None);
        assert_eq!(file.load().unwrap().flat_instance().unwrap(), inst);
    }
}
