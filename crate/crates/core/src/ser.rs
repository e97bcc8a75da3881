//! Slot error rate: per-instance error counts and corpus-level aggregates.
//!
//! An instance's error count is the number of added, missing and
//! wrong-valued slots in its diff; the rate divides by the slot count of
//! the *original* MR, so additions can push the rate above 1.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matcher::SlotDiff;
use crate::mr::MeaningRepresentation;

/// Error tallies for one instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SerCounts {
    pub added: usize,
    pub missing: usize,
    pub wrong: usize,
    /// Denominator: slot count of the original MR.
    pub slots: usize,
}

impl SerCounts {
    pub fn new(added: usize, missing: usize, wrong: usize, slots: usize) -> Result<SerCounts> {
        if slots == 0 {
            return Err(Error::UndefinedDenominator);
        }
        debug_assert!(missing + wrong <= slots);
        Ok(SerCounts {
            added,
            missing,
            wrong,
            slots,
        })
    }

    pub fn errors(&self) -> usize {
        self.added + self.missing + self.wrong
    }

    /// (added + missing + wrong) / slots.
    pub fn rate(&self) -> f64 {
        self.errors() as f64 / self.slots as f64
    }

    pub fn is_clean(&self) -> bool {
        self.errors() == 0
    }
}

/// Counts for one instance from its diff.
pub fn ser_instance(diff: &SlotDiff, mr: &MeaningRepresentation) -> Result<SerCounts> {
    SerCounts::new(
        diff.added.len(),
        diff.missing.len(),
        diff.wrong.len(),
        mr.len(),
    )
}

/// Corpus-level SER aggregates.
///
/// `micro_ser` pools errors and slots over the corpus and is the headline
/// number; `macro_ser` averages per-instance rates instead. `micro_ser` is
/// computed as `add_rate + miss_rate + wrong_rate`, so that identity holds
/// exactly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SerReport {
    pub per_instance: Vec<SerCounts>,
    pub micro_ser: f64,
    pub macro_ser: f64,
    pub add_rate: f64,
    pub miss_rate: f64,
    pub wrong_rate: f64,
    /// Instances with zero errors.
    pub inst_ok: usize,
    pub instances: usize,
    pub total_slots: usize,
}

/// Aggregates per-instance counts. Integer sums make the micro numbers
/// independent of instance order and of any parallel partitioning.
pub fn ser_corpus<I: IntoIterator<Item = SerCounts>>(counts: I) -> Result<SerReport> {
    let per_instance: Vec<SerCounts> = counts.into_iter().collect();
    if per_instance.is_empty() {
        return Err(Error::EmptyInput("ser_corpus needs at least one instance".into()));
    }
    let total_slots: usize = per_instance.iter().map(|c| c.slots).sum();
    let added: usize = per_instance.iter().map(|c| c.added).sum();
    let missing: usize = per_instance.iter().map(|c| c.missing).sum();
    let wrong: usize = per_instance.iter().map(|c| c.wrong).sum();
    let inst_ok = per_instance.iter().filter(|c| c.is_clean()).count();

    let add_rate = added as f64 / total_slots as f64;
    let miss_rate = missing as f64 / total_slots as f64;
    let wrong_rate = wrong as f64 / total_slots as f64;
    let macro_ser =
        per_instance.iter().map(SerCounts::rate).sum::<f64>() / per_instance.len() as f64;

    Ok(SerReport {
        instances: per_instance.len(),
        inst_ok,
        total_slots,
        micro_ser: add_rate + miss_rate + wrong_rate,
        macro_ser,
        add_rate,
        miss_rate,
        wrong_rate,
        per_instance,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn counts(a: usize, m: usize, w: usize, s: usize) -> SerCounts {
        SerCounts::new(a, m, w, s).unwrap()
    }

    #[test]
    fn zero_slots_is_undefined() {
        assert!(matches!(
            SerCounts::new(0, 0, 0, 0),
            Err(Error::UndefinedDenominator)
        ));
    }

    #[test]
    fn instance_rates() {
        // two slots unrealized out of seven
        assert_abs_diff_eq!(counts(0, 2, 0, 7).rate(), 2.0 / 7.0);
        // one missing, one wrong value
        assert_abs_diff_eq!(counts(0, 1, 1, 7).rate(), 2.0 / 7.0);
        assert_eq!(counts(0, 0, 0, 7).rate(), 0.0);
    }

    #[test]
    fn corpus_micro_and_macro() {
        // derived by hand: errors 0+2 over slots 7+7
        let report = ser_corpus([counts(0, 0, 0, 7), counts(0, 2, 0, 7)]).unwrap();
        assert_abs_diff_eq!(report.micro_ser, 2.0 / 14.0, epsilon = 1e-12);
        assert_abs_diff_eq!(report.macro_ser, 1.0 / 7.0, epsilon = 1e-12);
        assert_eq!(report.inst_ok, 1);
        assert_eq!(report.instances, 2);
    }

    #[test]
    fn all_clean_corpus() {
        let report = ser_corpus(vec![counts(0, 0, 0, 3); 5]).unwrap();
        assert_eq!(report.micro_ser, 0.0);
        assert_eq!(report.macro_ser, 0.0);
        assert_eq!(report.inst_ok, 5);
    }

    #[test]
    fn empty_corpus_is_an_error() {
        assert!(matches!(ser_corpus([]), Err(Error::EmptyInput(_))));
    }

    #[test]
    fn micro_is_sum_of_component_rates() {
        let report = ser_corpus([counts(1, 2, 1, 5), counts(0, 1, 0, 3)]).unwrap();
        assert_eq!(
            report.micro_ser,
            report.add_rate + report.miss_rate + report.wrong_rate
        );
    }

    #[test]
    fn aggregation_is_order_independent() {
        let a = [counts(1, 0, 0, 4), counts(0, 2, 1, 6), counts(0, 0, 0, 2)];
        let mut b = a;
        b.reverse();
        let ra = ser_corpus(a).unwrap();
        let rb = ser_corpus(b).unwrap();
        assert_eq!(ra.micro_ser, rb.micro_ser);
        assert_eq!(ra.macro_ser, rb.macro_ser);
        assert_eq!(ra.inst_ok, rb.inst_ok);
    }
}
