//! Corpora: MR/reference pairs with provenance, CSV ingestion and writing,
//! grouping by MR, and seeded sampling.
//!
//! The interchange format is RFC-4180 CSV with the exact header `mr,ref`,
//! one instance per data row.

use std::collections::HashMap;
use std::io::{Read, Write};
use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mr::MeaningRepresentation;

/// Where an instance came from: which split and which data row (1-based,
/// counting the header).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Origin {
    pub split: String,
    pub row: u64,
}

/// One MR paired with one textual reference.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Instance {
    pub mr: MeaningRepresentation,
    pub reference: String,
    pub origin: Origin,
}

impl Instance {
    pub fn new(mr: MeaningRepresentation, reference: &str, origin: Origin) -> Result<Instance> {
        if reference.trim().is_empty() {
            return Err(Error::EmptyInput("instance reference is empty".into()));
        }
        Ok(Instance {
            mr,
            reference: reference.to_string(),
            origin,
        })
    }
}

// Origin is provenance, not content: two instances are the same instance
// if they pair the same MR with the same reference.
impl PartialEq for Instance {
    fn eq(&self, other: &Self) -> bool {
        self.mr == other.mr && self.reference == other.reference
    }
}

impl Eq for Instance {}

/// A labeled list of instances.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Corpus {
    pub label: String,
    pub instances: Vec<Instance>,
}

impl Corpus {
    pub fn new(label: &str, instances: Vec<Instance>) -> Corpus {
        Corpus {
            label: label.to_string(),
            instances,
        }
    }

    pub fn len(&self) -> usize {
        self.instances.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instances.is_empty()
    }

    /// Loads a corpus from CSV. The header must be exactly `mr,ref`; every
    /// row must have exactly two fields.
    pub fn from_csv_path(path: &Path, label: &str) -> Result<Corpus> {
        let file = std::fs::File::open(path)?;
        Corpus::from_csv_reader(file, label)
    }

    pub fn from_csv_reader<R: Read>(reader: R, label: &str) -> Result<Corpus> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(false)
            .flexible(true)
            .from_reader(reader);

        let mut records = rdr.records();
        let header = match records.next() {
            Some(rec) => rec?,
            None => {
                return Err(Error::Ingestion {
                    row: 1,
                    detail: "file is empty, expected header `mr,ref`".into(),
                })
            }
        };
        let mut fields: Vec<&str> = header.iter().collect();
        // tolerate a UTF-8 BOM on the first field
        if let Some(first) = fields.first_mut() {
            *first = first.trim_start_matches('\u{feff}');
        }
        if fields != ["mr", "ref"] {
            return Err(Error::Ingestion {
                row: 1,
                detail: format!("expected header `mr,ref`, found `{}`", fields.join(",")),
            });
        }

        let mut instances = Vec::new();
        let mut row: u64 = 1;
        for rec in records {
            let rec = rec?;
            row += 1;
            if rec.len() != 2 {
                return Err(Error::Ingestion {
                    row: row - 1,
                    detail: format!("expected 2 columns, found {}", rec.len()),
                });
            }
            let mr = MeaningRepresentation::parse(&rec[0]).map_err(|e| Error::Ingestion {
                row,
                detail: e.to_string(),
            })?;
            let inst = Instance::new(
                mr,
                &rec[1],
                Origin {
                    split: label.to_string(),
                    row,
                },
            )
            .map_err(|e| Error::Ingestion {
                row,
                detail: e.to_string(),
            })?;
            instances.push(inst);
        }
        Ok(Corpus::new(label, instances))
    }

    /// Writes the corpus as CSV (canonical MR strings, quoting only where
    /// needed). Inverse of `from_csv_*` up to canonical MR formatting.
    pub fn write_csv_path(&self, path: &Path) -> Result<()> {
        let file = std::fs::File::create(path)?;
        self.write_csv(file)
    }

    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(writer);
        wtr.write_record(["mr", "ref"])?;
        for inst in &self.instances {
            wtr.write_record([inst.mr.canonical_string(), inst.reference.clone()])?;
        }
        wtr.flush()?;
        Ok(())
    }

    /// Groups instances by canonical MR string. Groups appear in order of
    /// first occurrence; references keep corpus order.
    pub fn group_by_mr(&self) -> Vec<(MeaningRepresentation, Vec<&str>)> {
        let mut index: HashMap<String, usize> = HashMap::new();
        let mut groups: Vec<(MeaningRepresentation, Vec<&str>)> = Vec::new();
        for inst in &self.instances {
            let key = inst.mr.canonical_string();
            match index.get(&key) {
                Some(&i) => groups[i].1.push(&inst.reference),
                None => {
                    index.insert(key, groups.len());
                    groups.push((inst.mr.clone(), vec![&inst.reference]));
                }
            }
        }
        groups
    }

    /// Number of distinct MRs (by canonical string).
    pub fn distinct_mr_count(&self) -> usize {
        let mut keys: Vec<String> = self
            .instances
            .iter()
            .map(|i| i.mr.canonical_string())
            .collect();
        keys.sort();
        keys.dedup();
        keys.len()
    }

    /// Draws `n` instances uniformly without replacement, deterministically
    /// for a given seed. Selected instances keep their corpus order.
    pub fn sample(&self, n: usize, seed: u64) -> Result<Vec<&Instance>> {
        if n > self.len() {
            return Err(Error::SampleTooLarge {
                requested: n,
                available: self.len(),
            });
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut picked = rand::seq::index::sample(&mut rng, self.len(), n).into_vec();
        picked.sort_unstable();
        Ok(picked.into_iter().map(|i| &self.instances[i]).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mini_csv() -> &'static str {
        "mr,ref\nname[Cotto],Cotto is nice.\n\"name[Alto], area[riverside]\",Alto sits by the river.\n"
    }

    #[test]
    fn loads_two_rows() {
        let c = Corpus::from_csv_reader(mini_csv().as_bytes(), "dev").unwrap();
        assert_eq!(c.len(), 2);
        assert_eq!(c.instances[0].origin.row, 2);
        assert_eq!(c.instances[1].mr.len(), 2);
    }

    #[test]
    fn rejects_missing_header() {
        let err = Corpus::from_csv_reader("a,b\nname[X],hi\n".as_bytes(), "t").unwrap_err();
        assert!(matches!(err, Error::Ingestion { row: 1, .. }));
    }

    #[test]
    fn rejects_wrong_column_count() {
        let err = Corpus::from_csv_reader("mr,ref\nname[X],hi,extra\n".as_bytes(), "t").unwrap_err();
        match err {
            Error::Ingestion { row, detail } => {
                assert_eq!(row, 1);
                assert!(detail.contains("3"));
            }
            other => panic!("unexpected: {other}"),
        }
    }

    #[test]
    fn round_trips_through_csv() {
        let c = Corpus::from_csv_reader(mini_csv().as_bytes(), "dev").unwrap();
        let mut buf = Vec::new();
        c.write_csv(&mut buf).unwrap();
        let back = Corpus::from_csv_reader(buf.as_slice(), "dev").unwrap();
        assert_eq!(c, back);
    }

    #[test]
    fn quotes_fields_with_commas() {
        let mr = MeaningRepresentation::parse("name[A, B Cafe]").unwrap();
        let inst = Instance::new(mr, "A, B Cafe is odd.", Origin { split: "t".into(), row: 2 })
            .unwrap();
        let c = Corpus::new("t", vec![inst]);
        let mut buf = Vec::new();
        c.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.contains("\"name[A, B Cafe]\""));
        let back = Corpus::from_csv_reader(buf.as_slice(), "t").unwrap();
        assert_eq!(c, back);
    }

    #[test]
    fn empty_corpus_writes_header_only() {
        let c = Corpus::new("t", vec![]);
        let mut buf = Vec::new();
        c.write_csv(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "mr,ref\n");
    }

    #[test]
    fn groups_preserve_first_occurrence_order() {
        let csv = "mr,ref\nname[B],b one.\nname[A],a one.\nname[B],b two.\n";
        let c = Corpus::from_csv_reader(csv.as_bytes(), "t").unwrap();
        let groups = c.group_by_mr();
        assert_eq!(groups.len(), 2);
        assert_eq!(groups[0].1, ["b one.", "b two."]);
        assert_eq!(groups[1].1, ["a one."]);
        let total: usize = groups.iter().map(|g| g.1.len()).sum();
        assert_eq!(total, c.len());
    }

    #[test]
    fn grouping_key_ignores_slot_order() {
        let csv = "mr,ref\n\"name[A], area[riverside]\",one.\n\"area[riverside], name[A]\",two.\n";
        let c = Corpus::from_csv_reader(csv.as_bytes(), "t").unwrap();
        assert_eq!(c.group_by_mr().len(), 1);
        assert_eq!(c.distinct_mr_count(), 1);
    }

    #[test]
    fn empty_corpus_groups_to_nothing() {
        let c = Corpus::new("t", vec![]);
        assert!(c.group_by_mr().is_empty());
    }

    #[test]
    fn sampling_is_deterministic_and_bounded() {
        let csv: String = std::iter::once("mr,ref\n".to_string())
            .chain((0..50).map(|i| format!("name[R{i}],reference {i}.\n")))
            .collect();
        let c = Corpus::from_csv_reader(csv.as_bytes(), "t").unwrap();
        let a = c.sample(10, 42).unwrap();
        let b = c.sample(10, 42).unwrap();
        assert_eq!(a, b);
        let other = c.sample(10, 43).unwrap();
        assert_ne!(a, other);
        assert!(matches!(c.sample(51, 1), Err(Error::SampleTooLarge { .. })));
    }
}
