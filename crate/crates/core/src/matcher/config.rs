//! Matcher configuration: the pattern file format and its compiled form.
//!
//! The file is TOML. Each `[[attribute]]` section declares one attribute,
//! either `kind = "lexicon"` (matched by searching the text for the MR's
//! own value) or `kind = "pattern"` with one `[[attribute.class]]` block
//! per value-equivalence class:
//!
//! ```toml
//! schema_version = 1
//!
//! [options]
//! ignore_eattype_restaurant_omission = false
//!
//! [[attribute]]
//! name = "priceRange"
//! kind = "pattern"
//! values = ["cheap", "less than £20"]   # inventory check, optional
//!
//!   [[attribute.class]]
//!   id = "low"
//!   members = ["less than £20", "cheap"] # first member is canonical
//!   patterns = ["cheap(?:er|est|ly)?", "less than £20"]
//!   priority = 0                         # optional, default 0
//! ```
//!
//! Patterns are regular expressions evaluated against the space-joined
//! lowercase token stream; matches must start and end on token boundaries.
//! Members are the MR surface values the class stands for; a value may
//! belong to at most one class per attribute.

use std::collections::HashMap;
use std::path::Path;

use regex::Regex;
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::mr::Attribute;
use crate::tokenize::normalize;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    schema_version: u32,
    #[serde(default)]
    options: RawOptions,
    #[serde(rename = "attribute")]
    attributes: Vec<RawAttribute>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOptions {
    #[serde(default)]
    ignore_eattype_restaurant_omission: bool,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawAttribute {
    name: String,
    kind: RawKind,
    #[serde(default)]
    values: Vec<String>,
    #[serde(default, rename = "class")]
    classes: Vec<RawClass>,
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(rename_all = "lowercase")]
enum RawKind {
    Lexicon,
    Pattern,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawClass {
    id: String,
    members: Vec<String>,
    patterns: Vec<String>,
    #[serde(default)]
    priority: i32,
}

/// Runtime behavior switches.
#[derive(Debug, Clone, Copy, Default)]
pub struct MatcherOptions {
    /// When set, a missing `eatType` slot whose value is `restaurant` is
    /// not counted as missing.
    pub ignore_eattype_restaurant_omission: bool,
}

#[derive(Debug)]
pub(crate) struct CompiledPattern {
    pub raw: String,
    pub regex: Regex,
}

/// One value-equivalence class with its compiled patterns.
#[derive(Debug)]
pub(crate) struct CompiledClass {
    pub id: String,
    /// Original member surfaces; `members[0]` is the canonical one.
    pub members: Vec<String>,
    pub patterns: Vec<CompiledPattern>,
    pub priority: i32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum AttrKind {
    Lexicon,
    Pattern,
}

#[derive(Debug)]
pub(crate) struct AttributeRules {
    pub attribute: Attribute,
    pub kind: AttrKind,
    pub classes: Vec<CompiledClass>,
    /// normalized member surface -> class index
    pub member_index: HashMap<String, usize>,
}

/// A compiled matcher configuration. Immutable once built; share it
/// freely across threads.
#[derive(Debug)]
pub struct MatcherConfig {
    pub(crate) attributes: Vec<AttributeRules>,
    pub(crate) by_attr: HashMap<Attribute, usize>,
    pub options: MatcherOptions,
}

impl MatcherConfig {
    /// Compiles a configuration from TOML text.
    pub fn compile_str(text: &str) -> Result<MatcherConfig> {
        let raw: RawConfig =
            toml::from_str(text).map_err(|e| Error::ConfigValidation(e.to_string()))?;
        compile(raw)
    }

    /// Compiles a configuration file.
    pub fn compile_path(path: &Path) -> Result<MatcherConfig> {
        let text = std::fs::read_to_string(path)?;
        MatcherConfig::compile_str(&text)
    }

    /// The configuration shipped with the crate, covering the standard
    /// eight restaurant-domain attributes.
    pub fn shipped_default() -> Result<MatcherConfig> {
        MatcherConfig::compile_str(include_str!("default.toml"))
    }

    /// Same config with the eatType-omission leniency switched.
    pub fn with_eattype_leniency(mut self, on: bool) -> MatcherConfig {
        self.options.ignore_eattype_restaurant_omission = on;
        self
    }

    pub fn declares(&self, attribute: &Attribute) -> bool {
        self.by_attr.contains_key(attribute)
    }

    pub(crate) fn rules(&self, attribute: &Attribute) -> Option<&AttributeRules> {
        self.by_attr.get(attribute).map(|&i| &self.attributes[i])
    }

    /// The canonical member surface of a declared class.
    pub fn canonical_member(&self, attribute: &Attribute, class_id: &str) -> Option<&str> {
        self.rules(attribute)?
            .classes
            .iter()
            .find(|c| c.id == class_id)
            .map(|c| c.members[0].as_str())
    }

    /// Declared attributes, in declaration order.
    pub fn attributes(&self) -> impl Iterator<Item = &Attribute> {
        self.attributes.iter().map(|r| &r.attribute)
    }
}

fn compile(raw: RawConfig) -> Result<MatcherConfig> {
    if raw.schema_version != 1 {
        return Err(Error::ConfigValidation(format!(
            "unsupported schema_version {}",
            raw.schema_version
        )));
    }
    if raw.attributes.is_empty() {
        return Err(Error::ConfigValidation("no attributes declared".into()));
    }

    let mut attributes = Vec::new();
    let mut by_attr = HashMap::new();
    for raw_attr in raw.attributes {
        let attribute = Attribute::normalize(&raw_attr.name);
        if by_attr.contains_key(&attribute) {
            return Err(Error::ConfigValidation(format!(
                "attribute `{attribute}` declared twice"
            )));
        }
        let rules = compile_attribute(attribute.clone(), raw_attr)?;
        by_attr.insert(attribute, attributes.len());
        attributes.push(rules);
    }
    Ok(MatcherConfig {
        attributes,
        by_attr,
        options: MatcherOptions {
            ignore_eattype_restaurant_omission: raw.options.ignore_eattype_restaurant_omission,
        },
    })
}

fn compile_attribute(attribute: Attribute, raw: RawAttribute) -> Result<AttributeRules> {
    let kind = match raw.kind {
        RawKind::Lexicon => AttrKind::Lexicon,
        RawKind::Pattern => AttrKind::Pattern,
    };
    if kind == AttrKind::Lexicon {
        if !raw.classes.is_empty() || !raw.values.is_empty() {
            return Err(Error::ConfigValidation(format!(
                "lexicon attribute `{attribute}` must not declare classes or values"
            )));
        }
        return Ok(AttributeRules {
            attribute,
            kind,
            classes: Vec::new(),
            member_index: HashMap::new(),
        });
    }

    if raw.classes.is_empty() {
        return Err(Error::ConfigValidation(format!(
            "pattern attribute `{attribute}` declares no classes"
        )));
    }

    let mut classes = Vec::new();
    let mut member_index: HashMap<String, usize> = HashMap::new();
    for raw_class in raw.classes {
        let rule_id = format!("{attribute}/{}", raw_class.id);
        if classes.iter().any(|c: &CompiledClass| c.id == raw_class.id) {
            return Err(Error::ConfigValidation(format!(
                "class `{rule_id}` declared twice"
            )));
        }
        if raw_class.members.is_empty() {
            return Err(Error::ConfigValidation(format!(
                "class `{rule_id}` has no members"
            )));
        }
        if raw_class.patterns.is_empty() {
            return Err(Error::ConfigValidation(format!(
                "class `{rule_id}` has no patterns"
            )));
        }
        for member in &raw_class.members {
            let key = normalize(member);
            if key.is_empty() {
                return Err(Error::ConfigValidation(format!(
                    "class `{rule_id}` has an empty member"
                )));
            }
            if member_index.insert(key.clone(), classes.len()).is_some() {
                return Err(Error::ConfigValidation(format!(
                    "member `{member}` of `{rule_id}` already belongs to another class"
                )));
            }
        }
        let mut patterns = Vec::new();
        for pat in &raw_class.patterns {
            let regex = Regex::new(pat).map_err(|e| Error::ConfigCompile {
                rule: rule_id.clone(),
                detail: e.to_string(),
            })?;
            patterns.push(CompiledPattern {
                raw: pat.clone(),
                regex,
            });
        }
        classes.push(CompiledClass {
            id: raw_class.id,
            members: raw_class.members,
            patterns,
            priority: raw_class.priority,
        });
    }

    // inventory check: every declared dataset value must fall in a class
    for value in &raw.values {
        if !member_index.contains_key(&normalize(value)) {
            return Err(Error::ConfigValidation(format!(
                "attribute `{attribute}`: value `{value}` is not a member of any class"
            )));
        }
    }

    Ok(AttributeRules {
        attribute,
        kind,
        classes,
        member_index,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shipped_default_covers_standard_attributes() {
        let cfg = MatcherConfig::shipped_default().unwrap();
        for name in Attribute::standard_names() {
            assert!(
                cfg.declares(&Attribute::normalize(name)),
                "default config missing {name}"
            );
        }
        assert!(!cfg.options.ignore_eattype_restaurant_omission);
    }

    #[test]
    fn missing_value_class_fails_validation() {
        let toml = r#"
            schema_version = 1
            [[attribute]]
            name = "priceRange"
            kind = "pattern"
            values = ["cheap", "moderate"]
            [[attribute.class]]
            id = "low"
            members = ["cheap"]
            patterns = ["cheap"]
        "#;
        let err = MatcherConfig::compile_str(toml).unwrap_err();
        match err {
            Error::ConfigValidation(msg) => assert!(msg.contains("moderate"), "{msg}"),
            other => panic!("unexpected: {other}"),
        }
    }

    #[test]
    fn bad_pattern_names_the_rule() {
        let toml = r#"
            schema_version = 1
            [[attribute]]
            name = "area"
            kind = "pattern"
            [[attribute.class]]
            id = "riverside"
            members = ["riverside"]
            patterns = ["river("]
        "#;
        let err = MatcherConfig::compile_str(toml).unwrap_err();
        match err {
            Error::ConfigCompile { rule, .. } => assert_eq!(rule, "area/riverside"),
            other => panic!("unexpected: {other}"),
        }
    }

    #[test]
    fn duplicate_members_across_classes_rejected() {
        let toml = r#"
            schema_version = 1
            [[attribute]]
            name = "area"
            kind = "pattern"
            [[attribute.class]]
            id = "a"
            members = ["riverside"]
            patterns = ["riverside"]
            [[attribute.class]]
            id = "b"
            members = ["riverside"]
            patterns = ["river"]
        "#;
        assert!(MatcherConfig::compile_str(toml).is_err());
    }

    #[test]
    fn canonical_member_is_first() {
        let cfg = MatcherConfig::shipped_default().unwrap();
        let attr = Attribute::PriceRange;
        assert_eq!(cfg.canonical_member(&attr, "low"), Some("less than £20"));
    }
}
