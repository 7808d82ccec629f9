//! Check outcomes and the machine-readable run report.

use serde::{Deserialize, Serialize};

use crate::linalg::{BigradedCohomology, Coeff, CohomologyResult, Group};

/// Bumped whenever the JSON layout of [`Report`] changes.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckReport {
    pub check: String,
    pub status: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<u64>,
}

impl CheckReport {
    pub fn pass(check: impl Into<String>) -> Self {
        CheckReport {
            check: check.into(),
            status: Status::Pass,
            witness: None,
            note: None,
            timing_ms: None,
        }
    }

    pub fn fail(check: impl Into<String>, witness: impl Into<String>) -> Self {
        CheckReport {
            witness: Some(witness.into()),
            status: Status::Fail,
            ..Self::pass(check)
        }
    }

    pub fn skipped(check: impl Into<String>, note: impl Into<String>) -> Self {
        CheckReport {
            note: Some(note.into()),
            status: Status::Skipped,
            ..Self::pass(check)
        }
    }

    /// Pass if `witness` is `None`, fail with it otherwise.
    pub fn from_witness(check: impl Into<String>, witness: Option<String>) -> Self {
        match witness {
            None => Self::pass(check),
            Some(w) => Self::fail(check, w),
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    pub fn renamed(mut self, check: impl Into<String>) -> Self {
        self.check = check.into();
        self
    }

    pub fn is_pass(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn is_fail(&self) -> bool {
        self.status == Status::Fail
    }
}

/// One cohomology table in a report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CohomologyTable {
    pub model: String,
    pub coeff: Coeff,
    pub total: CohomologyResult,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bigraded: Option<BigradedCohomology>,
    pub poincare: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub poincare_bigraded: Option<String>,
}

impl CohomologyTable {
    pub fn new(
        model: impl Into<String>,
        coeff: Coeff,
        total: CohomologyResult,
        bigraded: Option<BigradedCohomology>,
    ) -> Self {
        CohomologyTable {
            model: model.into(),
            coeff,
            poincare: poincare_polynomial(&total),
            poincare_bigraded: bigraded.as_ref().map(poincare_polynomial_bigraded),
            total,
            bigraded,
        }
    }

    /// Degree table, Poincaré polynomials and the torsion side-table.
    pub fn render_text(&self) -> String {
        let mut out = format!("{} over {}\n  degree  group\n", self.model, self.coeff);
        for (d, g) in self.total.iter() {
            out.push_str(&format!("  {d:>6}  {}\n", group_text(g, self.coeff)));
        }
        out.push_str(&format!("  P(t) = {}\n", self.poincare));
        if let Some(p) = &self.poincare_bigraded {
            out.push_str(&format!("  P(s,t) = {p}\n"));
        }
        let torsion: Vec<String> = self
            .total
            .iter()
            .filter(|(_, g)| !g.torsion.is_empty())
            .map(|(d, g)| {
                let t: Vec<String> = g.torsion.iter().map(|x| format!("Z/{x}")).collect();
                format!("H^{d}: {}", t.join(" + "))
            })
            .collect();
        if !torsion.is_empty() {
            out.push_str(&format!("  torsion: {}\n", torsion.join(", ")));
        }
        if let Some(b) = &self.bigraded {
            out.push_str("  bidegree  group\n");
            for ((p, q), g) in b.iter() {
                out.push_str(&format!("  ({p},{q})  {}\n", group_text(g, self.coeff)));
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: u32,
    pub command: String,
    pub input: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub checks: Vec<CheckReport>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub cohomology: Vec<CohomologyTable>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ring: Option<serde_json::Value>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl Report {
    pub fn new(command: impl Into<String>, input: impl Into<String>) -> Self {
        Report {
            schema_version: SCHEMA_VERSION,
            command: command.into(),
            input: input.into(),
            checks: Vec::new(),
            cohomology: Vec::new(),
            ring: None,
            notes: Vec::new(),
        }
    }

    /// Sorts checks by id so parallel runs produce identical output.
    pub fn sort_checks(&mut self) {
        self.checks.sort_by(|a, b| a.check.cmp(&b.check));
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| !c.is_fail())
    }
}

/// Over a field only the dimension is meaningful: `Q^2`, `Z2`.
fn group_text(g: &Group, coeff: Coeff) -> String {
    match (coeff, g.free_rank) {
        (Coeff::Z, _) => g.to_string(),
        (_, 0) => "0".into(),
        (_, 1) => coeff.to_string(),
        (_, r) => format!("{coeff}^{r}"),
    }
}

/// `1 + 2t + t^2` style polynomial in total degree, from free ranks.
pub fn poincare_polynomial(h: &CohomologyResult) -> String {
    let terms: Vec<String> = h
        .iter()
        .filter(|(_, g)| g.free_rank > 0)
        .map(|(&d, g)| monomial(g.free_rank, &[("t", d)]))
        .collect();
    join_terms(terms)
}

/// Two-variable polynomial with `s` tracking deg₁ and `t` tracking deg₂.
pub fn poincare_polynomial_bigraded(h: &BigradedCohomology) -> String {
    let terms: Vec<String> = h
        .iter()
        .filter(|(_, g)| g.free_rank > 0)
        .map(|(&(a, b), g)| monomial(g.free_rank, &[("s", a), ("t", b)]))
        .collect();
    join_terms(terms)
}

fn monomial(coef: usize, vars: &[(&str, i32)]) -> String {
    let powers: Vec<String> = vars
        .iter()
        .filter(|(_, e)| *e != 0)
        .map(|(v, e)| if *e == 1 { v.to_string() } else { format!("{v}^{e}") })
        .collect();
    match (coef, powers.is_empty()) {
        (c, true) => c.to_string(),
        (1, false) => powers.join(" "),
        (c, false) => format!("{c} {}", powers.join(" ")),
    }
}

fn join_terms(terms: Vec<String>) -> String {
    if terms.is_empty() {
        "0".to_string()
    } else {
        terms.join(" + ")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomials() {
        let mut h = CohomologyResult::new();
        h.add(0, Group::free(1));
        h.add(1, Group::free(2));
        h.add(2, Group::free(1));
        h.add(3, Group::with_torsion(0, &[2]));
        assert_eq!(poincare_polynomial(&h), "1 + 2 t + t^2");

        let mut b = BigradedCohomology::new();
        b.add((0, 0), Group::free(1));
        b.add((-1, 2), Group::free(3));
        assert_eq!(poincare_polynomial_bigraded(&b), "3 s^-1 t^2 + 1");
        assert_eq!(poincare_polynomial(&CohomologyResult::new()), "0");
    }

    #[test]
    fn report_round_trip() {
        let mut r = Report::new("verify", "gon4");
        r.checks.push(CheckReport::fail("d_squared.bk", "s1 s2"));
        r.checks
            .push(CheckReport::skipped("quotient.vanishing", "truncated below m"));
        let s = serde_json::to_string(&r).unwrap();
        let back: Report = serde_json::from_str(&s).unwrap();
        assert_eq!(r, back);
        assert!(!r.all_passed());
    }
}
