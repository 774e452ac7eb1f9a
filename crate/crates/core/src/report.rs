//! Verification reports: one identity checked, both sides materialized.

use std::collections::BTreeMap;
use std::fmt;

use crate::constructible::ConstrFn;
use crate::poset::StratumId;

/// The identities the engine can check, keyed by their CLI codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Formula {
    Eq3,
    Eq4,
    Eq5,
    Eq6,
    Eq7,
    Eq11,
    Eq12,
    Eq13,
    Eq14,
    Eq15,
    Eq16,
    Eq17,
    Eq18,
    C1,
    C2,
}

impl Formula {
    pub const ALL: [Formula; 15] = [
        Formula::Eq3,
        Formula::Eq4,
        Formula::Eq5,
        Formula::Eq6,
        Formula::Eq7,
        Formula::Eq11,
        Formula::Eq12,
        Formula::Eq13,
        Formula::Eq14,
        Formula::Eq15,
        Formula::Eq16,
        Formula::Eq17,
        Formula::Eq18,
        Formula::C1,
        Formula::C2,
    ];

    pub fn code(self) -> &'static str {
        match self {
            Formula::Eq3 => "eq3",
            Formula::Eq4 => "eq4",
            Formula::Eq5 => "eq5",
            Formula::Eq6 => "eq6",
            Formula::Eq7 => "eq7",
            Formula::Eq11 => "eq11",
            Formula::Eq12 => "eq12",
            Formula::Eq13 => "eq13",
            Formula::Eq14 => "eq14",
            Formula::Eq15 => "eq15",
            Formula::Eq16 => "eq16",
            Formula::Eq17 => "eq17",
            Formula::Eq18 => "eq18",
            Formula::C1 => "c1",
            Formula::C2 => "c2",
        }
    }

    pub fn from_code(code: &str) -> Option<Formula> {
        Formula::ALL.into_iter().find(|f| f.code() == code)
    }

    /// The identity in symbols, as printed by reports. `c°L_V` is the open
    /// cone on the link of `V` in the closure of the dense stratum.
    pub fn statement(self) -> &'static str {
        match self {
            Formula::Eq3 => "f∗α = χ(α|F)·1_Y + Σ_{V<S} (χ(α|F_V) − χ(α|F))·ĥ1(V̄)",
            Formula::Eq4 => "χ(α) = χ(α|F)·χ(Y) + Σ_{V<S} (χ(α|F_V) − χ(α|F))·χ̂(V̄)",
            Formula::Eq5 => "f∗c∗(α) = χ(α|F)·c∗(Y) + Σ_{V<S} (χ(α|F_V) − χ(α|F))·ĉ∗(V̄)",
            Formula::Eq6 => "χ(X) = χ(F)·χ(Y) + Σ_{V<S} (χ(F_V) − χ(F))·χ̂(V̄)",
            Formula::Eq7 => "f∗c∗(X) = χ(F)·c∗(Y) + Σ_{V<S} (χ(F_V) − χ(F))·ĉ∗(V̄)",
            Formula::Eq11 => "α = α(S)·ic_Y + Σ_{V<S} (α(V) − α(S)·Iχ(c°L_V))·îc(V̄)",
            Formula::Eq12 => {
                "f∗α = χ(α|F)·ic_Y + Σ_{V<S} (χ(α|F_V) − χ(α|F)·Iχ(c°L_V))·îc(V̄)"
            }
            Formula::Eq13 => {
                "χ(α) = χ(α|F)·Iχ(Y) + Σ_{V<S} (χ(α|F_V) − χ(α|F)·Iχ(c°L_V))·Îχ(V̄)"
            }
            Formula::Eq14 => {
                "f∗c∗(α) = χ(α|F)·Ic∗(Y) + Σ_{V<S} (χ(α|F_V) − χ(α|F)·Iχ(c°L_V))·Îc∗(V̄)"
            }
            Formula::Eq15 => "χ(X) = χ(F)·Iχ(Y) + Σ_{V<S} (χ(F_V) − χ(F)·Iχ(c°L_V))·Îχ(V̄)",
            Formula::Eq16 => {
                "f∗c∗(X) = χ(F)·Ic∗(Y) + Σ_{V<S} (χ(F_V) − χ(F)·Iχ(c°L_V))·Îc∗(V̄)"
            }
            Formula::Eq17 => {
                "Iχ(X) = Iχ(F)·Iχ(Y) + Σ_{V<S} (Iχ(f⁻¹c°L_V) − Iχ(F)·Iχ(c°L_V))·Îχ(V̄)"
            }
            Formula::Eq18 => {
                "f∗Ic∗(X) = Iχ(F)·Ic∗(Y) + Σ_{V<S} (Iχ(f⁻¹c°L_V) − Iχ(F)·Iχ(c°L_V))·Îc∗(V̄)"
            }
            Formula::C1 => "χ(Y) = Iχ(Y) + Σ_{V<S} (1 − Iχ(c°L_V))·Îχ(V̄)",
            Formula::C2 => "c∗(Y) = Ic∗(Y) + Σ_{V<S} (1 − Iχ(c°L_V))·Îc∗(V̄)",
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

/// A value appearing on one side of an identity: an integer, a constructible
/// function, or a formal class (symbol → coefficient).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ReportValue {
    Int(i64),
    Function(BTreeMap<StratumId, i64>),
    Class(BTreeMap<String, i64>),
}

impl ReportValue {
    pub fn function(f: &ConstrFn) -> Self {
        ReportValue::Function(f.to_map())
    }
}

impl fmt::Display for ReportValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ReportValue::Int(v) => write!(f, "{v}"),
            ReportValue::Function(m) => {
                write!(f, "{{")?;
                for (i, (id, v)) in m.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{id} ↦ {v}")?;
                }
                write!(f, "}}")
            }
            ReportValue::Class(m) => {
                if m.is_empty() {
                    return write!(f, "0");
                }
                for (i, (sym, c)) in m.iter().enumerate() {
                    if i > 0 {
                        write!(f, " + ")?;
                    }
                    write!(f, "{c}·{sym}")?;
                }
                Ok(())
            }
        }
    }
}

/// One right-hand-side summand: `coefficient · weight`, attributed to a
/// stratum. The leading term is attributed to the dense stratum.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReportTerm {
    pub stratum: StratumId,
    pub coefficient: i64,
    pub weight: ReportValue,
    pub contribution: ReportValue,
}

/// Result of checking one identity. `pass` holds exactly when the two sides
/// agree; no tolerances exist anywhere in the engine.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormulaReport {
    pub formula: Formula,
    pub lhs: ReportValue,
    pub rhs: ReportValue,
    pub terms: Vec<ReportTerm>,
    pub pass: bool,
}

impl FormulaReport {
    pub fn new(
        formula: Formula,
        lhs: ReportValue,
        rhs: ReportValue,
        terms: Vec<ReportTerm>,
    ) -> Self {
        let pass = lhs == rhs;
        FormulaReport {
            formula,
            lhs,
            rhs,
            terms,
            pass,
        }
    }
}

impl fmt::Display for FormulaReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{}: {}  lhs = {}  rhs = {}",
            self.formula,
            if self.pass { "PASS" } else { "FAIL" },
            self.lhs,
            self.rhs
        )?;
        for t in &self.terms {
            writeln!(
                f,
                "    {}: {} × {} = {}",
                t.stratum, t.coefficient, t.weight, t.contribution
            )?;
        }
        Ok(())
    }
}
