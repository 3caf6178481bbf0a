use alloc::string::String;
use core::fmt;

/// Outcome of one check. Margins are signed so that `margin >= 0` means the
/// inequality holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Verdict {
    Pass,
    Fail,
    /// `|margin| <= tolerance`: indistinguishable from equality at this accuracy.
    EqualityCase,
    Skipped,
}

impl Verdict {
    /// `|margin| <= tol` is an equality case, a larger positive margin passes,
    /// anything else (including NaN) fails.
    pub fn classify(margin: f64, tol: f64) -> Verdict {
        if margin.abs() <= tol {
            Verdict::EqualityCase
        } else if margin > tol {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    /// Pass or equality case.
    pub fn holds(self) -> bool {
        matches!(self, Verdict::Pass | Verdict::EqualityCase)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::EqualityCase => "equality_case",
            Verdict::Skipped => "skipped",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct CheckContext {
    pub domain: Option<String>,
    pub q: Option<f64>,
    pub k: Option<f64>,
    pub resolution: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckReport {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    pub tolerance: f64,
    pub verdict: Verdict,
    pub context: CheckContext,
    pub note: Option<String>,
    /// `margin = (rhs - lhs) / scale` for reports built by `compare*`.
    pub scale: f64,
}

impl CheckReport {
    /// `lhs <= rhs` with `margin = rhs - lhs`.
    pub fn compare(name: &str, lhs: f64, rhs: f64, tolerance: f64) -> Self {
        Self::compare_scaled(name, lhs, rhs, 1.0, tolerance)
    }

    /// `lhs <= rhs` with `margin = (rhs - lhs) / scale`.
    pub fn compare_scaled(name: &str, lhs: f64, rhs: f64, scale: f64, tolerance: f64) -> Self {
        let mut r = Self::with_margin(name, lhs, rhs, (rhs - lhs) / scale, tolerance);
        r.scale = scale;
        r
    }

    /// Margin computed by the caller. [`inflate_lhs`](Self::inflate_lhs)
    /// treats it as relative to `|rhs|`.
    pub fn with_margin(name: &str, lhs: f64, rhs: f64, margin: f64, tolerance: f64) -> Self {
        CheckReport {
            name: name.into(),
            lhs,
            rhs,
            margin,
            tolerance,
            verdict: Verdict::classify(margin, tolerance),
            context: CheckContext::default(),
            note: None,
            scale: if rhs != 0.0 && rhs.is_finite() { rhs.abs() } else { 1.0 },
        }
    }

    pub fn with_verdict(mut self, verdict: Verdict) -> Self {
        self.verdict = verdict;
        self
    }

    pub fn skipped(name: &str, reason: impl Into<String>) -> Self {
        CheckReport {
            name: name.into(),
            lhs: f64::NAN,
            rhs: f64::NAN,
            margin: f64::NAN,
            tolerance: f64::NAN,
            verdict: Verdict::Skipped,
            context: CheckContext::default(),
            note: Some(reason.into()),
            scale: f64::NAN,
        }
    }

    pub fn with_context(mut self, context: CheckContext) -> Self {
        self.context = context;
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    /// Multiplies `lhs` by `factor` and re-derives margin and verdict.
    pub fn inflate_lhs(&mut self, factor: f64) {
        if self.verdict == Verdict::Skipped {
            return;
        }
        self.lhs *= factor;
        self.margin = (self.rhs - self.lhs) / self.scale;
        self.verdict = Verdict::classify(self.margin, self.tolerance);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classification() {
        assert_eq!(Verdict::classify(0.0, 1e-8), Verdict::EqualityCase);
        assert_eq!(Verdict::classify(-1e-9, 1e-8), Verdict::EqualityCase);
        assert_eq!(Verdict::classify(1e-3, 1e-8), Verdict::Pass);
        assert_eq!(Verdict::classify(-1e-3, 1e-8), Verdict::Fail);
        assert_eq!(Verdict::classify(f64::NAN, 1e-8), Verdict::Fail);
    }

    #[test]
    fn inflation_flips_a_pass() {
        let mut r = CheckReport::compare("x", 1.0, 1.5, 0.01);
        assert_eq!(r.verdict, Verdict::Pass);
        r.inflate_lhs(2.0);
        assert_eq!(r.verdict, Verdict::Fail);
        assert_eq!(r.margin, -0.5);

        let mut r = CheckReport::compare_scaled("y", 1.0, 2.0, 2.0, 0.01);
        assert_eq!(r.margin, 0.5);
        r.inflate_lhs(3.0);
        assert_eq!(r.margin, -0.5);
    }
}
