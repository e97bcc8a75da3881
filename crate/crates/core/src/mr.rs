//! Meaning representations: ordered attribute-value slots with a canonical
//! textual form (`attr[value], attr[value], ...`).
//!
//! Attribute names are normalized on parse (`customer_rating`,
//! `customer rating` and `customerRating` all map to the same attribute),
//! and slots are compared set-wise: two MRs are equal when they carry the
//! same attribute-value pairs, regardless of the order they were written in.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The eight standard attributes, in canonical output order.
const STANDARD: [(&str, &str); 8] = [
    ("name", "name"),
    ("eatType", "eatType"),
    ("food", "food"),
    ("priceRange", "priceRange"),
    ("customerRating", "customer rating"),
    ("area", "area"),
    ("familyFriendly", "familyFriendly"),
    ("near", "near"),
];

/// A slot attribute. The eight standard restaurant-domain attributes get
/// fixed canonical names; anything else is carried through as `Custom`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(from = "String", into = "String")]
pub enum Attribute {
    Name,
    EatType,
    Food,
    PriceRange,
    CustomerRating,
    Area,
    FamilyFriendly,
    Near,
    Custom(String),
}

impl Attribute {
    /// Normalizes an attribute name. Case, whitespace and underscores are
    /// ignored when matching the standard inventory, so `customer_rating`,
    /// `Customer Rating` and `customerRating` are all the same attribute.
    pub fn normalize(raw: &str) -> Attribute {
        let folded: String = raw
            .chars()
            .filter(|c| !c.is_whitespace() && *c != '_')
            .flat_map(|c| c.to_lowercase())
            .collect();
        match folded.as_str() {
            "name" => Attribute::Name,
            "eattype" => Attribute::EatType,
            "food" => Attribute::Food,
            "pricerange" => Attribute::PriceRange,
            "customerrating" => Attribute::CustomerRating,
            "area" => Attribute::Area,
            "familyfriendly" => Attribute::FamilyFriendly,
            "near" => Attribute::Near,
            _ => Attribute::Custom(raw.trim().to_string()),
        }
    }

    /// The canonical identifier (`customerRating`, `eatType`, ...).
    pub fn canonical_name(&self) -> &str {
        match self {
            Attribute::Name => "name",
            Attribute::EatType => "eatType",
            Attribute::Food => "food",
            Attribute::PriceRange => "priceRange",
            Attribute::CustomerRating => "customerRating",
            Attribute::Area => "area",
            Attribute::FamilyFriendly => "familyFriendly",
            Attribute::Near => "near",
            Attribute::Custom(s) => s,
        }
    }

    /// The spelling used when formatting an MR back to text. This follows
    /// the distribution format of the source corpora (`customer rating`
    /// with a space); everything else formats as its canonical name.
    pub fn format_name(&self) -> &str {
        match self {
            Attribute::CustomerRating => "customer rating",
            other => other.canonical_name(),
        }
    }

    fn rank(&self) -> usize {
        match self {
            Attribute::Name => 0,
            Attribute::EatType => 1,
            Attribute::Food => 2,
            Attribute::PriceRange => 3,
            Attribute::CustomerRating => 4,
            Attribute::Area => 5,
            Attribute::FamilyFriendly => 6,
            Attribute::Near => 7,
            Attribute::Custom(_) => 8,
        }
    }

    pub fn is_standard(&self) -> bool {
        !matches!(self, Attribute::Custom(_))
    }

    /// Canonical names of the eight standard attributes, in order.
    pub fn standard_names() -> impl Iterator<Item = &'static str> {
        STANDARD.iter().map(|(c, _)| *c)
    }
}

impl From<String> for Attribute {
    fn from(s: String) -> Self {
        Attribute::normalize(&s)
    }
}

impl From<Attribute> for String {
    fn from(a: Attribute) -> Self {
        a.canonical_name().to_string()
    }
}

impl PartialEq for Attribute {
    fn eq(&self, other: &Self) -> bool {
        self.canonical_name() == other.canonical_name()
    }
}

impl Eq for Attribute {}

impl Hash for Attribute {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.canonical_name().hash(state);
    }
}

impl PartialOrd for Attribute {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Attribute {
    /// Standard attributes sort in the fixed canonical order; custom
    /// attributes sort after them, alphabetically.
    fn cmp(&self, other: &Self) -> Ordering {
        self.rank()
            .cmp(&other.rank())
            .then_with(|| self.canonical_name().cmp(other.canonical_name()))
    }
}

impl fmt::Display for Attribute {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.canonical_name())
    }
}

/// One attribute-value pair.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SlotValue {
    pub attribute: Attribute,
    pub value: String,
}

impl SlotValue {
    /// Builds a slot, trimming the value. Empty values and values that
    /// would break the textual MR syntax (`[` or `]`) are rejected, as are
    /// empty or bracketed attribute names.
    pub fn new(attribute: Attribute, value: &str) -> Result<SlotValue> {
        let value = value.trim();
        if value.is_empty() {
            return Err(Error::InvalidSlot(format!(
                "empty value for attribute `{attribute}`"
            )));
        }
        if value.contains('[') || value.contains(']') {
            return Err(Error::InvalidSlot(format!(
                "value `{value}` contains a bracket"
            )));
        }
        let name = attribute.canonical_name();
        if name.is_empty() || name.contains('[') || name.contains(']') || name.contains(',') {
            return Err(Error::InvalidSlot(format!("invalid attribute name `{name}`")));
        }
        Ok(SlotValue {
            attribute,
            value: value.to_string(),
        })
    }
}

impl fmt::Display for SlotValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}]", self.attribute.format_name(), self.value)
    }
}

/// An MR: one or more slots, no attribute repeated.
///
/// Slots are kept in the order they were supplied (parse order), which is
/// preserved for provenance. Equality, hashing and the canonical string
/// all use the canonical slot order instead, so MRs behave as sets of
/// attribute-value pairs.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MeaningRepresentation {
    slots: Vec<SlotValue>,
}

impl MeaningRepresentation {
    /// Builds an MR from slots, rejecting duplicates and empty slot lists.
    pub fn new(slots: Vec<SlotValue>) -> Result<MeaningRepresentation> {
        if slots.is_empty() {
            return Err(Error::InvalidSlot("an MR needs at least one slot".into()));
        }
        for (i, s) in slots.iter().enumerate() {
            if slots[..i].iter().any(|p| p.attribute == s.attribute) {
                return Err(Error::DuplicateSlot {
                    attribute: s.attribute.canonical_name().to_string(),
                });
            }
        }
        Ok(MeaningRepresentation { slots })
    }

    /// Parses the textual MR format: comma-separated `attr[value]` pairs.
    ///
    /// Slots come back in input order; attribute names are normalized.
    pub fn parse(input: &str) -> Result<MeaningRepresentation> {
        if input.trim().is_empty() {
            return Err(Error::MalformedMr {
                offset: 0,
                detail: "empty MR string".into(),
            });
        }
        let bytes = input.as_bytes();
        let mut slots = Vec::new();
        let mut pos = 0usize;
        loop {
            // skip whitespace before the attribute name
            while pos < bytes.len() && bytes[pos].is_ascii_whitespace() {
                pos += 1;
            }
            let attr_start = pos;
            let open = match input[pos..].find('[') {
                Some(rel) => pos + rel,
                None => {
                    return Err(Error::MalformedMr {
                        offset: pos,
                        detail: "expected `attr[value]`, found no `[`".into(),
                    })
                }
            };
            let raw_attr = input[attr_start..open].trim();
            if raw_attr.is_empty() {
                return Err(Error::MalformedMr {
                    offset: attr_start,
                    detail: "empty attribute name".into(),
                });
            }
            if raw_attr.contains(',') || raw_attr.contains(']') {
                return Err(Error::MalformedMr {
                    offset: attr_start,
                    detail: format!("attribute name `{raw_attr}` is malformed"),
                });
            }
            let close = match input[open..].find(']') {
                Some(rel) => open + rel,
                None => {
                    return Err(Error::MalformedMr {
                        offset: open,
                        detail: "unclosed `[`".into(),
                    })
                }
            };
            let raw_value = &input[open + 1..close];
            if raw_value.trim().is_empty() {
                return Err(Error::MalformedMr {
                    offset: open + 1,
                    detail: format!("empty value for attribute `{raw_attr}`"),
                });
            }
            let attribute = Attribute::normalize(raw_attr);
            slots.push(SlotValue::new(attribute, raw_value)?);

            pos = close + 1;
            while pos < bytes.len() && bytes[pos].is_ascii_whitespace() {
                pos += 1;
            }
            if pos == bytes.len() {
                break;
            }
            if bytes[pos] != b',' {
                return Err(Error::MalformedMr {
                    offset: pos,
                    detail: "expected `,` between slots".into(),
                });
            }
            pos += 1;
            // trailing comma
            if input[pos..].trim().is_empty() {
                return Err(Error::MalformedMr {
                    offset: pos,
                    detail: "trailing comma".into(),
                });
            }
        }
        MeaningRepresentation::new(slots)
    }

    /// Slots in the order they were supplied.
    pub fn slots(&self) -> &[SlotValue] {
        &self.slots
    }

    /// Slots in canonical order: the fixed standard-attribute order, then
    /// custom attributes alphabetically.
    pub fn canonical_slots(&self) -> Vec<&SlotValue> {
        let mut v: Vec<&SlotValue> = self.slots.iter().collect();
        v.sort_by(|a, b| a.attribute.cmp(&b.attribute));
        v
    }

    /// The canonical textual form. Stable under parse/format round-trips.
    pub fn canonical_string(&self) -> String {
        self.canonical_slots()
            .iter()
            .map(|s| s.to_string())
            .collect::<Vec<_>>()
            .join(", ")
    }

    pub fn len(&self) -> usize {
        self.slots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slots.is_empty()
    }

    pub fn get(&self, attribute: &Attribute) -> Option<&SlotValue> {
        self.slots.iter().find(|s| &s.attribute == attribute)
    }

    pub fn has(&self, attribute: &Attribute) -> bool {
        self.get(attribute).is_some()
    }
}

impl PartialEq for MeaningRepresentation {
    fn eq(&self, other: &Self) -> bool {
        self.canonical_slots() == other.canonical_slots()
    }
}

impl Eq for MeaningRepresentation {}

impl Hash for MeaningRepresentation {
    fn hash<H: Hasher>(&self, state: &mut H) {
        for s in self.canonical_slots() {
            s.hash(state);
        }
    }
}

impl fmt::Display for MeaningRepresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.canonical_string())
    }
}

impl std::str::FromStr for MeaningRepresentation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        MeaningRepresentation::parse(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const FIG_MR: &str = "name[Cotto], eatType[coffee shop], food[English], \
                          priceRange[less than £20], customer_rating[low], \
                          area[riverside], near[The Portland Arms]";

    #[test]
    fn parses_seven_slot_mr() {
        let mr = MeaningRepresentation::parse(FIG_MR).unwrap();
        assert_eq!(mr.len(), 7);
        assert_eq!(mr.slots()[4].attribute, Attribute::CustomerRating);
        assert_eq!(mr.slots()[3].value, "less than £20");
    }

    #[test]
    fn parses_minimal_mr() {
        let mr = MeaningRepresentation::parse("name[X]").unwrap();
        assert_eq!(mr.len(), 1);
        assert_eq!(mr.slots()[0].attribute, Attribute::Name);
        assert_eq!(mr.slots()[0].value, "X");
    }

    #[test]
    fn duplicate_attribute_is_an_error() {
        let err = MeaningRepresentation::parse("name[Cotto], name[Alto]").unwrap_err();
        assert!(matches!(err, Error::DuplicateSlot { attribute } if attribute == "name"));
    }

    #[test]
    fn malformed_pair_reports_offset() {
        let err = MeaningRepresentation::parse("name[Cotto], area").unwrap_err();
        match err {
            Error::MalformedMr { offset, .. } => assert_eq!(offset, 13),
            other => panic!("unexpected error: {other}"),
        }
        let err = MeaningRepresentation::parse("name[]").unwrap_err();
        assert!(matches!(err, Error::MalformedMr { offset: 5, .. }));
    }

    #[test]
    fn attribute_name_variants_normalize() {
        for raw in ["customer_rating", "customer rating", "customerRating", "CUSTOMER RATING"] {
            assert_eq!(Attribute::normalize(raw), Attribute::CustomerRating);
        }
        assert_eq!(Attribute::normalize("price_range"), Attribute::PriceRange);
        assert!(matches!(Attribute::normalize("dogFriendly"), Attribute::Custom(_)));
    }

    #[test]
    fn canonical_string_orders_slots() {
        let mr = MeaningRepresentation::parse("area[riverside], name[Cotto]").unwrap();
        assert_eq!(mr.canonical_string(), "name[Cotto], area[riverside]");
    }

    #[test]
    fn custom_attributes_sort_last_alphabetically() {
        let mr =
            MeaningRepresentation::parse("zeta[1], near[X], alpha[2], name[Y]").unwrap();
        assert_eq!(
            mr.canonical_string(),
            "name[Y], near[X], alpha[2], zeta[1]"
        );
    }

    #[test]
    fn round_trip_is_identity() {
        let mr = MeaningRepresentation::parse(FIG_MR).unwrap();
        let reparsed = MeaningRepresentation::parse(&mr.canonical_string()).unwrap();
        assert_eq!(mr, reparsed);
        assert_eq!(reparsed.canonical_string(), mr.canonical_string());
    }

    #[test]
    fn equality_ignores_slot_order() {
        let a = MeaningRepresentation::parse("name[X], area[riverside]").unwrap();
        let b = MeaningRepresentation::parse("area[riverside], name[X]").unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn values_may_contain_commas() {
        let mr = MeaningRepresentation::parse("name[Bibimbap House, the 2nd]").unwrap();
        assert_eq!(mr.slots()[0].value, "Bibimbap House, the 2nd");
        let reparsed = MeaningRepresentation::parse(&mr.canonical_string()).unwrap();
        assert_eq!(mr, reparsed);
    }

    #[test]
    fn fig_correction_formats_with_space_spelling() {
        let mr = MeaningRepresentation::parse(
            "name[Cotto], eatType[coffee shop], priceRange[less than £20], \
             customer rating[low], near[The Portland Arms]",
        )
        .unwrap();
        assert_eq!(
            mr.canonical_string(),
            "name[Cotto], eatType[coffee shop], priceRange[less than £20], \
             customer rating[low], near[The Portland Arms]"
        );
    }
}
