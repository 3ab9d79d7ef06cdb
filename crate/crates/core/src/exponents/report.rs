use std::fmt;

use num_traits::{Signed, Zero};
use serde::ser::{Serialize, SerializeStruct, Serializer};

use crate::exact::{to_f64, Q};

/// How a displayed inequality relates its two sides. `≪` between powers of
/// `N` becomes `≤` between exponents.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Relation {
    Lt,
    Le,
    Ll,
    Eq,
}

impl Relation {
    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Lt => "<",
            Relation::Le => "<=",
            Relation::Ll => "<<",
            Relation::Eq => "=",
        }
    }
}

/// One checked inequality `lhs REL rhs` with `slack = rhs − lhs`.
///
/// `satisfied` is `slack ≥ 0` (`slack = 0` for identities). For strict
/// inequalities `strict_holds` additionally requires `slack > 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConstraintReport {
    pub id: String,
    pub display: String,
    pub relation: Relation,
    pub lhs: Q,
    pub rhs: Q,
    pub slack: Q,
    pub satisfied: bool,
    pub strict_holds: bool,
    /// Value of the free exponent at which the worst case was attained.
    pub worst_at: Option<Q>,
    pub note: Option<String>,
}

impl ConstraintReport {
    pub fn new(id: impl Into<String>, display: impl Into<String>, relation: Relation, lhs: Q, rhs: Q) -> Self {
        let slack = &rhs - &lhs;
        let (satisfied, strict_holds) = match relation {
            Relation::Eq => (slack.is_zero(), slack.is_zero()),
            Relation::Lt => (!slack.is_negative(), slack.is_positive()),
            Relation::Le | Relation::Ll => (!slack.is_negative(), !slack.is_negative()),
        };
        Self {
            id: id.into(),
            display: display.into(),
            relation,
            lhs,
            rhs,
            slack,
            satisfied,
            strict_holds,
            worst_at: None,
            note: None,
        }
    }

    pub fn at(mut self, x: Q) -> Self {
        self.worst_at = Some(x);
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }
}

impl Serialize for ConstraintReport {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("ConstraintReport", 13)?;
        st.serialize_field("id", &self.id)?;
        st.serialize_field("display", &self.display)?;
        st.serialize_field("relation", &self.relation)?;
        st.serialize_field("lhs", &to_f64(&self.lhs))?;
        st.serialize_field("rhs", &to_f64(&self.rhs))?;
        st.serialize_field("slack", &to_f64(&self.slack))?;
        st.serialize_field("satisfied", &self.satisfied)?;
        st.serialize_field("strict_holds", &self.strict_holds)?;
        st.serialize_field("lhs_exact", &self.lhs.to_string())?;
        st.serialize_field("rhs_exact", &self.rhs.to_string())?;
        st.serialize_field("slack_exact", &self.slack.to_string())?;
        st.serialize_field("worst_at", &self.worst_at.as_ref().map(|x| x.to_string()))?;
        st.serialize_field("note", &self.note)?;
        st.end()
    }
}

impl fmt::Display for ConstraintReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {} {:.9} {} {:.9} (slack {:+.9})",
            if self.satisfied { "ok  " } else { "FAIL" },
            self.id,
            to_f64(&self.lhs),
            self.relation.symbol(),
            to_f64(&self.rhs),
            to_f64(&self.slack)
        )
    }
}

/// Aligned-column text rendering of a batch of reports.
pub fn format_reports(reports: &[ConstraintReport]) -> String {
    let id_w = reports.iter().map(|r| r.id.len()).max().unwrap_or(2).max(2);
    let disp_w = reports.iter().map(|r| r.display.chars().count()).max().unwrap_or(7).max(7);
    let mut out = format!(
        "{:<4}  {:<id_w$}  {:<disp_w$}  {:>13}  {:>2}  {:>13}  {:>13}\n",
        "", "id", "display", "lhs", "", "rhs", "slack"
    );
    for r in reports {
        let verdict = match (r.satisfied, r.strict_holds) {
            (true, true) => "ok",
            (true, false) => "tie",
            _ => "FAIL",
        };
        let disp_pad = disp_w - r.display.chars().count();
        out.push_str(&format!(
            "{verdict:<4}  {:<id_w$}  {}{}  {:>13.9}  {:>2}  {:>13.9}  {:>+13.9}",
            r.id,
            r.display,
            " ".repeat(disp_pad),
            to_f64(&r.lhs),
            r.relation.symbol(),
            to_f64(&r.rhs),
            to_f64(&r.slack),
        ));
        if let Some(x) = &r.worst_at {
            out.push_str(&format!("  at {x}"));
        }
        if let Some(n) = &r.note {
            out.push_str(&format!("  [{n}]"));
        }
        out.push('\n');
    }
    out
}
