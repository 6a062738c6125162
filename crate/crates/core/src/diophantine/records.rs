use std::io::Write;

use serde_json::{json, Value};

use super::ProductValue;
use crate::error::Result;

#[derive(Clone, Debug, PartialEq)]
pub struct Record {
    pub q: u64,
    pub q0: Option<i128>,
    pub product: ProductValue,
}

impl Record {
    pub fn value(&self) -> f64 {
        self.product.value
    }
}

/// Strictly decreasing record minima of a product over `q = 1..=horizon`.
#[derive(Clone, Debug, PartialEq)]
pub struct RecordSequence {
    pub records: Vec<Record>,
    pub horizon: u64,
}

impl RecordSequence {
    pub fn empty(horizon: u64) -> Self {
        RecordSequence { records: Vec::new(), horizon }
    }

    /// Keeps the strict running minima of candidates given in `q` order.
    pub fn from_ordered(candidates: impl IntoIterator<Item = Record>, horizon: u64) -> Self {
        let mut records: Vec<Record> = Vec::new();
        for r in candidates {
            if records.last().is_none_or(|best| r.product.lt(&best.product)) {
                records.push(r);
            }
        }
        RecordSequence { records, horizon }
    }

    /// Concatenates a sequence over a later `q` range. Associative, and the
    /// result only depends on the order of the ranges.
    pub fn merge(self, later: RecordSequence) -> RecordSequence {
        let horizon = self.horizon.max(later.horizon);
        RecordSequence::from_ordered(self.records.into_iter().chain(later.records), horizon)
    }

    pub fn min_value(&self) -> f64 {
        self.records.last().map_or(f64::INFINITY, |r| r.value())
    }

    pub fn argmin(&self) -> Option<&Record> {
        self.records.last()
    }

    /// First record strictly below `threshold`.
    pub fn first_below(&self, threshold: f64) -> Option<&Record> {
        self.records.iter().find(|r| r.value() < threshold)
    }

    /// Drops every record after the first one below `threshold` and sets
    /// the horizon to its `q`.
    pub fn truncate_below(&mut self, threshold: f64) -> bool {
        if let Some(i) = self.records.iter().position(|r| r.value() < threshold) {
            self.records.truncate(i + 1);
            self.horizon = self.records[i].q;
            return true;
        }
        false
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["q", "q0", "value", "log10_value"])?;
        for r in &self.records {
            let q0 = r.q0.map_or(String::new(), |x| x.to_string());
            out.write_record([
                r.q.to_string(),
                q0,
                format!("{:e}", r.value()),
                format!("{:.6}", r.value().log10()),
            ])?;
        }
        out.flush()?;
        Ok(())
    }

    pub fn to_json(&self) -> Value {
        let arg = self.argmin();
        json!({
            "horizon": self.horizon,
            "min_value": finite_or_null(self.min_value()),
            "argmin_q": arg.map(|r| r.q),
            "argmin_q0": arg.and_then(|r| r.q0).map(|x| x.to_string()),
            "records": self.records.len(),
            "upper_bound": arg.is_some_and(|r| r.product.upper_bound),
        })
    }
}

fn finite_or_null(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else {
        Value::Null
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rec(q: u64, v: f64) -> Record {
        Record { q, q0: None, product: ProductValue { value: v, ext: None, upper_bound: false } }
    }

    #[test]
    fn ties_do_not_make_records() {
        let s = RecordSequence::from_ordered([rec(1, 0.5), rec(2, 0.5), rec(3, 0.2), rec(4, 0.3)], 4);
        let qs: Vec<_> = s.records.iter().map(|r| r.q).collect();
        assert_eq!(qs, vec![1, 3]);
        assert_eq!(s.min_value(), 0.2);
    }

    #[test]
    fn csv_layout() {
        let s = RecordSequence::from_ordered([rec(1, 0.5), rec(5, 0.0)], 5);
        let mut buf = Vec::new();
        s.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text, "q,q0,value,log10_value\n1,,5e-1,-0.301030\n5,,0e0,-inf\n");
    }

    proptest! {
        #[test]
        fn merge_is_associative(vals in proptest::collection::vec(0u32..50, 1..60),
                                a in 0usize..60, b in 0usize..60) {
            let recs: Vec<_> = vals.iter().enumerate().map(|(i, &v)| rec(i as u64 + 1, v as f64)).collect();
            let n = recs.len();
            let (a, b) = (a.min(n), b.min(n));
            let (a, b) = (a.min(b), a.max(b));
            let part = |r: &[Record]| RecordSequence::from_ordered(r.to_vec(), n as u64);
            let whole = part(&recs);
            let left = part(&recs[..a]).merge(part(&recs[a..b])).merge(part(&recs[b..]));
            let right = part(&recs[..a]).merge(part(&recs[a..b]).merge(part(&recs[b..])));
            prop_assert_eq!(&whole, &left);
            prop_assert_eq!(&whole, &right);
        }
    }
}
