use std::fmt;
use std::io::Write;

use crate::error::Result;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CheckKind {
    /// `|lhs − rhs| ≤ tolerance`.
    Identity,
    /// `lhs ≤ rhs` up to `tolerance`: the margin `rhs − lhs` is at least
    /// `−tolerance`.
    Inequality,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

impl fmt::Display for CheckKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Identity => "identity",
            Self::Inequality => "inequality",
        })
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Pass => "pass",
            Self::Fail => "fail",
            Self::Skip => "skip",
        })
    }
}

/// Outcome of one numerical check.
///
/// `value` is the residual `|lhs − rhs|` of an identity or the margin
/// `rhs − lhs` of an inequality. The status is `Pass` exactly when the
/// value is within tolerance and every auxiliary condition attached with
/// [`VerdictRecord::require`] holds; failed conditions are listed in `note`.
#[derive(Clone, Debug, PartialEq)]
pub struct VerdictRecord {
    pub check: String,
    /// The relation being tested, as a formula.
    pub anchor: String,
    pub kind: CheckKind,
    pub lhs: f64,
    pub rhs: f64,
    pub value: f64,
    pub tolerance: f64,
    pub status: Status,
    /// Describes the input set, including the seed for random draws.
    pub input: String,
    pub note: String,
}

impl VerdictRecord {
    pub fn identity(check: &str, anchor: &str, lhs: f64, rhs: f64, tolerance: f64, input: &str) -> Self {
        let value = (lhs - rhs).abs();
        Self::build(check, anchor, CheckKind::Identity, lhs, rhs, value, value <= tolerance, tolerance, input)
    }

    pub fn inequality(check: &str, anchor: &str, lhs: f64, rhs: f64, tolerance: f64, input: &str) -> Self {
        let value = rhs - lhs;
        Self::build(check, anchor, CheckKind::Inequality, lhs, rhs, value, value >= -tolerance, tolerance, input)
    }

    pub fn skip(check: &str, anchor: &str, kind: CheckKind, input: &str, reason: impl Into<String>) -> Self {
        Self {
            check: check.into(),
            anchor: anchor.into(),
            kind,
            lhs: f64::NAN,
            rhs: f64::NAN,
            value: f64::NAN,
            tolerance: f64::NAN,
            status: Status::Skip,
            input: input.into(),
            note: reason.into(),
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn build(
        check: &str,
        anchor: &str,
        kind: CheckKind,
        lhs: f64,
        rhs: f64,
        value: f64,
        ok: bool,
        tolerance: f64,
        input: &str,
    ) -> Self {
        Self {
            check: check.into(),
            anchor: anchor.into(),
            kind,
            lhs,
            rhs,
            value,
            tolerance,
            status: if ok { Status::Pass } else { Status::Fail },
            input: input.into(),
            note: String::new(),
        }
    }

    /// Attaches an auxiliary condition; a false condition fails the record.
    pub fn require(mut self, ok: bool, what: impl AsRef<str>) -> Self {
        if !ok && self.status == Status::Pass {
            self.status = Status::Fail;
        }
        if !ok {
            self.add_note(&format!("FAILED {}", what.as_ref()));
        }
        self
    }

    pub fn with_note(mut self, note: impl AsRef<str>) -> Self {
        self.add_note(note.as_ref());
        self
    }

    fn add_note(&mut self, text: &str) {
        if !self.note.is_empty() {
            self.note.push_str("; ");
        }
        self.note.push_str(text);
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub const CSV_HEADER: [&'static str; 10] = [
        "check", "anchor", "kind", "lhs", "rhs", "residual_or_margin", "tolerance", "status", "input", "note",
    ];

    pub fn csv_row(&self) -> [String; 10] {
        let num = |x: f64| if x.is_nan() { String::new() } else { format!("{x:e}") };
        [
            self.check.clone(),
            self.anchor.clone(),
            self.kind.to_string(),
            num(self.lhs),
            num(self.rhs),
            num(self.value),
            num(self.tolerance),
            self.status.to_string(),
            self.input.clone(),
            self.note.clone(),
        ]
    }
}

/// Writes the records as CSV with a header row.
pub fn write_records<W: Write>(records: &[VerdictRecord], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(VerdictRecord::CSV_HEADER)?;
    for r in records {
        w.write_record(r.csv_row())?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub skip: usize,
}

impl Summary {
    pub fn of(records: &[VerdictRecord]) -> Self {
        let mut s = Self::default();
        for r in records {
            match r.status {
                Status::Pass => s.pass += 1,
                Status::Fail => s.fail += 1,
                Status::Skip => s.skip += 1,
            }
        }
        s
    }

    pub fn all_passed(&self) -> bool {
        self.fail == 0
    }
}

impl fmt::Display for Summary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "pass={} fail={} skip={}", self.pass, self.fail, self.skip)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn statuses_follow_kind() {
        let id = VerdictRecord::identity("c", "a = b", 1.0, 1.0 + 1e-9, 1e-8, "x");
        assert!(id.passed() && id.kind == CheckKind::Identity);
        let bad = VerdictRecord::identity("c", "a = b", 1.0, 1.1, 1e-8, "x");
        assert_eq!(bad.status, Status::Fail);
        let ineq = VerdictRecord::inequality("c", "a <= b", 1.0 + 1e-10, 1.0, 1e-9, "x");
        assert!(ineq.passed() && ineq.value < 0.0);
        let fail = ineq.clone().require(false, "cross-check");
        assert_eq!(fail.status, Status::Fail);
        assert!(fail.note.contains("FAILED cross-check"));
    }

    #[test]
    fn csv_and_summary() {
        let recs = vec![
            VerdictRecord::identity("c", "a, b", 1.0, 1.0, 0.0, "seed=1"),
            VerdictRecord::skip("d", "a", CheckKind::Inequality, "seed=1", "no"),
            VerdictRecord::inequality("e", "a", 2.0, 1.0, 0.0, "seed=1"),
        ];
        let mut buf = Vec::new();
        write_records(&recs, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 4);
        assert!(lines[0].starts_with("check,anchor,kind"));
        assert!(lines[1].contains("\"a, b\""));
        assert!(lines[2].contains(",,,,skip,"));
        let s = Summary::of(&recs);
        assert_eq!((s.pass, s.fail, s.skip), (1, 1, 1));
        assert!(!s.all_passed());
        assert_eq!(s.to_string(), "pass=1 fail=1 skip=1");
    }
}
