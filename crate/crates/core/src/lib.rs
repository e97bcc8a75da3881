//! Slot-level auditing, cleaning and scoring for data-to-text corpora.
//!
//! Datasets that pair meaning representations (MRs — sets of
//! attribute-value slots like `name[Cotto], area[riverside]`) with
//! crowdsourced texts are noisy: references omit slots, add facts, or
//! realize the wrong value. This crate detects what a reference actually
//! expresses, measures the mismatch as a slot error rate, rewrites MRs to
//! match their texts, removes train/test leakage, scores system outputs
//! with the usual word-overlap metrics, and picks the most faithful
//! candidate out of an n-best list.
//!
//! Pipeline in one breath:
//!
//! ```
//! use slotcheck_core::{Corpus, MatcherConfig, ser_corpus};
//!
//! let cfg = MatcherConfig::shipped_default().unwrap();
//! let csv = "mr,ref\nname[Cotto],Cotto is a cheap coffee shop.\n";
//! let corpus = Corpus::from_csv_reader(csv.as_bytes(), "demo").unwrap();
//! let audits: Vec<_> = corpus
//!     .instances
//!     .iter()
//!     .map(|inst| cfg.audit(&inst.reference, &inst.mr).unwrap())
//!     .collect();
//! let report = ser_corpus(audits.iter().map(|a| a.counts)).unwrap();
//! assert!(report.micro_ser > 0.0); // "cheap" is not in the MR: one addition
//! ```

pub mod clean;
pub mod corpus;
pub mod error;
pub mod matcher;
pub mod mr;
pub mod par;
pub mod rerank;
pub mod report;
pub mod ser;
pub mod synth;
pub mod tokenize;
pub mod wom;

pub use corpus::{Corpus, Instance, Origin};
pub use error::{Error, Result};
pub use matcher::{
    CorrectionMode, DetectedSlots, Detection, MatcherConfig, SlotDiff,
};
pub use mr::{Attribute, MeaningRepresentation, SlotValue};
pub use par::Jobs;
pub use ser::{ser_corpus, SerCounts, SerReport};
pub use tokenize::tokenize;
