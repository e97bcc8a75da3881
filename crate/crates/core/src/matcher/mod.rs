//! Slot matching: detecting which MR slots a text realizes, classifying
//! the differences, and rewriting MRs to match their texts.
//!
//! Matching runs over the shared token stream. Two mechanisms coexist:
//!
//! - *pattern attributes* (eatType, food, priceRange, ...) carry
//!   value-equivalence classes, each with regex patterns; "cheap" and
//!   "less than £20" land in the same class, which is what lets a
//!   correction keep the MR's original surface form when the text uses a
//!   different wording of the same value;
//! - *lexicon attributes* (name, near) are matched MR-guided: the matcher
//!   searches the text for the MR's own value, token-aligned and
//!   case-insensitive.
//!
//! Pattern matches inside a span claimed by a lexicon value are discarded,
//! so cuisine words inside venue names don't produce detections. One
//! detection per attribute survives: highest rule priority wins, then the
//! leftmost span. When other classes of the same attribute also matched
//! elsewhere in the text, the surviving detection records them as
//! conflicts so audits can flag doubly-realized slots.

mod config;

use std::collections::HashMap;
use std::fmt;

pub use config::{MatcherConfig, MatcherOptions};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mr::{Attribute, MeaningRepresentation, SlotValue};
use crate::ser::{ser_instance, SerCounts};
use crate::tokenize::{normalize, tokenize};

use config::AttrKind;

/// A half-open token index range into the tokenized text.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TokenSpan {
    pub start: usize,
    pub end: usize,
}

impl TokenSpan {
    fn overlaps(&self, other: &TokenSpan) -> bool {
        self.start < other.end && other.start < self.end
    }
}

/// Identifies the value-equivalence class of a detection or MR value.
///
/// `Declared` names a class from the config; `Literal` is the normalized
/// surface of a value matched verbatim (lexicon attributes, or values
/// outside the declared inventory).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", content = "id", rename_all = "lowercase")]
pub enum ValueClassId {
    Declared(String),
    Literal(String),
}

impl fmt::Display for ValueClassId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ValueClassId::Declared(id) | ValueClassId::Literal(id) => f.write_str(id),
        }
    }
}

/// One detected slot realization.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Detection {
    pub attribute: Attribute,
    pub class: ValueClassId,
    pub span: TokenSpan,
    /// The matched text, as it appears in the normalized token stream.
    pub matched: String,
    /// Other value classes of this attribute that also matched the text.
    /// Non-empty means the slot was realized more than once with
    /// conflicting values; the winner was chosen by priority, then span.
    pub conflicts: Vec<ValueClassId>,
}

/// Everything the matcher found in one text.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DetectedSlots {
    /// One detection per attribute, in canonical attribute order.
    pub detections: Vec<Detection>,
    pub token_count: usize,
}

impl DetectedSlots {
    pub fn get(&self, attribute: &Attribute) -> Option<&Detection> {
        self.detections.iter().find(|d| &d.attribute == attribute)
    }

    pub fn has(&self, attribute: &Attribute) -> bool {
        self.get(attribute).is_some()
    }
}

/// An MR slot realized with a conflicting value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WrongValue {
    pub slot: SlotValue,
    pub detected: Detection,
}

/// Classification of detections against an MR.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SlotDiff {
    /// Detected in the text, absent from the MR.
    pub added: Vec<Detection>,
    /// In the MR, not detected in the text.
    pub missing: Vec<SlotValue>,
    /// Attribute present on both sides, value classes differ.
    pub wrong: Vec<WrongValue>,
}

impl SlotDiff {
    pub fn is_empty(&self) -> bool {
        self.added.is_empty() && self.missing.is_empty() && self.wrong.is_empty()
    }
}

/// How `correct_mr` rewrites an MR.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CorrectionMode {
    /// Replace the MR with exactly what the text realizes.
    Full,
    /// Only drop unrealized slots (and fix wrong values).
    MissingOnly,
    /// Only add hallucinated slots (and fix wrong values).
    AddedOnly,
}

impl std::str::FromStr for CorrectionMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "full" => Ok(CorrectionMode::Full),
            "missing" | "missing_only" => Ok(CorrectionMode::MissingOnly),
            "added" | "added_only" => Ok(CorrectionMode::AddedOnly),
            other => Err(Error::ConfigValidation(format!(
                "unknown correction mode `{other}` (expected full, missing or added)"
            ))),
        }
    }
}

impl fmt::Display for CorrectionMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CorrectionMode::Full => "full",
            CorrectionMode::MissingOnly => "missing",
            CorrectionMode::AddedOnly => "added",
        })
    }
}

/// Full audit of one instance: detections, diff, full-mode correction and
/// error counts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceAudit {
    pub detected: DetectedSlots,
    pub diff: SlotDiff,
    /// The full-mode corrected MR; `None` when the text realizes nothing
    /// correctable (the correction would be empty).
    pub corrected: Option<MeaningRepresentation>,
    pub counts: SerCounts,
}

struct TokenizedText {
    tokens: Vec<String>,
    joined: String,
    starts: HashMap<usize, usize>,
    ends: HashMap<usize, usize>,
}

fn prepare(text: &str) -> TokenizedText {
    let tokens = tokenize(text);
    let mut joined = String::new();
    let mut starts = HashMap::new();
    let mut ends = HashMap::new();
    for (i, tok) in tokens.iter().enumerate() {
        if i > 0 {
            joined.push(' ');
        }
        starts.insert(joined.len(), i);
        joined.push_str(tok);
        ends.insert(joined.len(), i);
    }
    TokenizedText {
        tokens,
        joined,
        starts,
        ends,
    }
}

impl TokenizedText {
    /// Converts a byte match to a token span; `None` when the match does
    /// not sit on token boundaries.
    fn span_of(&self, start: usize, end: usize) -> Option<TokenSpan> {
        let s = *self.starts.get(&start)?;
        let e = *self.ends.get(&end)?;
        Some(TokenSpan { start: s, end: e + 1 })
    }
}

/// All occurrences of `needle` as a contiguous token subsequence.
fn find_token_seq(haystack: &[String], needle: &[String]) -> Vec<TokenSpan> {
    if needle.is_empty() || needle.len() > haystack.len() {
        return Vec::new();
    }
    (0..=haystack.len() - needle.len())
        .filter(|&i| haystack[i..i + needle.len()] == *needle)
        .map(|i| TokenSpan {
            start: i,
            end: i + needle.len(),
        })
        .collect()
}

struct Candidate {
    priority: i32,
    span: TokenSpan,
    order: (usize, usize), // (class index, pattern index) for determinism
    class: ValueClassId,
    matched: String,
}

// MR-guided literal matches outrank any pattern rule.
const LITERAL_PRIORITY: i32 = i32::MAX / 2;

impl MatcherConfig {
    /// Detects slot realizations of `mr`'s schema in `text`.
    ///
    /// Deterministic: identical (text, mr, config) triples give identical
    /// results. Errors when the MR carries an attribute the config does
    /// not declare.
    pub fn match_slots(
        &self,
        text: &str,
        mr: &MeaningRepresentation,
    ) -> Result<DetectedSlots> {
        for slot in mr.slots() {
            if !self.declares(&slot.attribute) {
                return Err(Error::UndeclaredAttribute(
                    slot.attribute.canonical_name().to_string(),
                ));
            }
        }

        let tt = prepare(text);
        let mut detections: Vec<Detection> = Vec::new();
        let mut claimed: Vec<TokenSpan> = Vec::new();

        // lexicon pass first: claimed spans gate the pattern pass
        for rules in &self.attributes {
            if rules.kind != AttrKind::Lexicon {
                continue;
            }
            let Some(slot) = mr.get(&rules.attribute) else {
                continue;
            };
            let needle = tokenize(&slot.value);
            let occurrences = find_token_seq(&tt.tokens, &needle);
            if let Some(first) = occurrences.first() {
                detections.push(Detection {
                    attribute: rules.attribute.clone(),
                    class: ValueClassId::Literal(normalize(&slot.value)),
                    span: *first,
                    matched: needle.join(" "),
                    conflicts: Vec::new(),
                });
                claimed.extend(occurrences);
            }
        }

        for rules in &self.attributes {
            if rules.kind != AttrKind::Pattern {
                continue;
            }
            let mut candidates: Vec<Candidate> = Vec::new();
            for (ci, class) in rules.classes.iter().enumerate() {
                for (pi, pattern) in class.patterns.iter().enumerate() {
                    for m in pattern.regex.find_iter(&tt.joined) {
                        let Some(span) = tt.span_of(m.start(), m.end()) else {
                            continue;
                        };
                        if claimed.iter().any(|c| span.overlaps(c)) {
                            continue;
                        }
                        candidates.push(Candidate {
                            priority: class.priority,
                            span,
                            order: (ci, pi),
                            class: ValueClassId::Declared(class.id.clone()),
                            matched: m.as_str().to_string(),
                        });
                        break; // leftmost valid match per pattern
                    }
                }
            }
            // literal fallback for MR values outside the declared inventory
            if let Some(slot) = mr.get(&rules.attribute) {
                let key = normalize(&slot.value);
                if !rules.member_index.contains_key(&key) {
                    let needle = tokenize(&slot.value);
                    if let Some(span) = find_token_seq(&tt.tokens, &needle)
                        .into_iter()
                        .find(|s| !claimed.iter().any(|c| s.overlaps(c)))
                    {
                        candidates.push(Candidate {
                            priority: LITERAL_PRIORITY,
                            span,
                            order: (usize::MAX, 0),
                            class: ValueClassId::Literal(key),
                            matched: needle.join(" "),
                        });
                    }
                }
            }

            if candidates.is_empty() {
                continue;
            }
            candidates.sort_by(|a, b| {
                b.priority
                    .cmp(&a.priority)
                    .then(a.span.start.cmp(&b.span.start))
                    .then(a.order.cmp(&b.order))
            });
            let winner = &candidates[0];
            let mut conflicts: Vec<ValueClassId> = Vec::new();
            for c in &candidates[1..] {
                if c.class != winner.class && !conflicts.contains(&c.class) {
                    conflicts.push(c.class.clone());
                }
            }
            detections.push(Detection {
                attribute: rules.attribute.clone(),
                class: winner.class.clone(),
                span: winner.span,
                matched: winner.matched.clone(),
                conflicts,
            });
        }

        detections.sort_by(|a, b| a.attribute.cmp(&b.attribute));
        Ok(DetectedSlots {
            detections,
            token_count: tt.tokens.len(),
        })
    }

    /// The value-equivalence class an MR value belongs to.
    pub fn value_class(&self, attribute: &Attribute, value: &str) -> ValueClassId {
        let key = normalize(value);
        if let Some(rules) = self.rules(attribute) {
            if let Some(&ci) = rules.member_index.get(&key) {
                return ValueClassId::Declared(rules.classes[ci].id.clone());
            }
        }
        ValueClassId::Literal(key)
    }

    /// Classifies `detected` against `mr` into added / missing / wrong.
    pub fn diff_slots(&self, mr: &MeaningRepresentation, detected: &DetectedSlots) -> SlotDiff {
        let mut added = Vec::new();
        let mut missing = Vec::new();
        let mut wrong = Vec::new();

        for slot in mr.slots() {
            match detected.get(&slot.attribute) {
                None => {
                    let lenient = self.options.ignore_eattype_restaurant_omission
                        && slot.attribute == Attribute::EatType
                        && normalize(&slot.value) == "restaurant";
                    if !lenient {
                        missing.push(slot.clone());
                    }
                }
                Some(d) => {
                    if self.value_class(&slot.attribute, &slot.value) != d.class {
                        wrong.push(WrongValue {
                            slot: slot.clone(),
                            detected: d.clone(),
                        });
                    }
                }
            }
        }
        for d in &detected.detections {
            if !mr.has(&d.attribute) {
                added.push(d.clone());
            }
        }
        SlotDiff {
            added,
            missing,
            wrong,
        }
    }

    fn canonical_surface(&self, d: &Detection) -> String {
        match &d.class {
            ValueClassId::Declared(id) => self
                .canonical_member(&d.attribute, id)
                .expect("declared class always has members")
                .to_string(),
            ValueClassId::Literal(v) => v.clone(),
        }
    }

    /// Rewrites `mr` according to what the text realizes.
    ///
    /// In all modes the name slot is never deleted: a name present in the
    /// MR survives even when the matcher did not find it in the text.
    /// Errors with `DegenerateOutput` when the result would have no slots.
    pub fn correct_mr(
        &self,
        mr: &MeaningRepresentation,
        detected: &DetectedSlots,
        mode: CorrectionMode,
    ) -> Result<MeaningRepresentation> {
        let mut slots: Vec<SlotValue> = match mode {
            CorrectionMode::Full => {
                let mut out = Vec::new();
                for d in &detected.detections {
                    let surface = match mr.get(&d.attribute) {
                        Some(slot)
                            if self.value_class(&d.attribute, &slot.value) == d.class =>
                        {
                            slot.value.clone()
                        }
                        _ => self.canonical_surface(d),
                    };
                    out.push(SlotValue::new(d.attribute.clone(), &surface)?);
                }
                if let Some(name) = mr.get(&Attribute::Name) {
                    if !detected.has(&Attribute::Name) {
                        out.push(name.clone());
                    }
                }
                out
            }
            CorrectionMode::MissingOnly => {
                let diff = self.diff_slots(mr, detected);
                let mut out = Vec::new();
                for slot in mr.slots() {
                    let is_missing = diff.missing.iter().any(|m| m.attribute == slot.attribute);
                    if is_missing && slot.attribute != Attribute::Name {
                        continue;
                    }
                    out.push(self.fix_wrong(slot, &diff)?);
                }
                out
            }
            CorrectionMode::AddedOnly => {
                let diff = self.diff_slots(mr, detected);
                let mut out = Vec::new();
                for slot in mr.slots() {
                    out.push(self.fix_wrong(slot, &diff)?);
                }
                for d in &diff.added {
                    out.push(SlotValue::new(d.attribute.clone(), &self.canonical_surface(d))?);
                }
                out
            }
        };
        if slots.is_empty() {
            return Err(Error::DegenerateOutput);
        }
        slots.sort_by(|a, b| a.attribute.cmp(&b.attribute));
        MeaningRepresentation::new(slots)
    }

    fn fix_wrong(&self, slot: &SlotValue, diff: &SlotDiff) -> Result<SlotValue> {
        match diff.wrong.iter().find(|w| w.slot.attribute == slot.attribute) {
            Some(w) => SlotValue::new(
                slot.attribute.clone(),
                &self.canonical_surface(&w.detected),
            ),
            None => Ok(slot.clone()),
        }
    }

    /// Match, diff, correct and count in one call.
    pub fn audit(&self, text: &str, mr: &MeaningRepresentation) -> Result<InstanceAudit> {
        let detected = self.match_slots(text, mr)?;
        let diff = self.diff_slots(mr, &detected);
        let corrected = match self.correct_mr(mr, &detected, CorrectionMode::Full) {
            Ok(m) => Some(m),
            Err(Error::DegenerateOutput) => None,
            Err(e) => return Err(e),
        };
        let counts = ser_instance(&diff, mr)?;
        Ok(InstanceAudit {
            detected,
            diff,
            corrected,
            counts,
        })
    }

    /// SER counts of a predicted MR against a gold MR, comparing slot
    /// values by equivalence class. Denominator is the gold slot count.
    pub fn compare_mrs(
        &self,
        gold: &MeaningRepresentation,
        predicted: &MeaningRepresentation,
    ) -> Result<SerCounts> {
        let mut added = 0;
        let mut missing = 0;
        let mut wrong = 0;
        for slot in gold.slots() {
            match predicted.get(&slot.attribute) {
                None => missing += 1,
                Some(p) => {
                    if self.value_class(&slot.attribute, &slot.value)
                        != self.value_class(&p.attribute, &p.value)
                    {
                        wrong += 1;
                    }
                }
            }
        }
        for slot in predicted.slots() {
            if !gold.has(&slot.attribute) {
                added += 1;
            }
        }
        SerCounts::new(added, missing, wrong, gold.len())
    }
}
