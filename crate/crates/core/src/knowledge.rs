//! What smart elements and coalitions can deduce from the answers they see.
//!
//! The family is public. An element sees the answers to the queries that
//! contain it; a coalition pools what its members see. The candidate set of
//! a coalition is every element whose answers agree with the defective's on
//! all the queries the coalition sees.

use std::fmt;
use std::str::FromStr;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::bitset::ElementSet;
use crate::error::{Error, Result};
use crate::family::{indistinguishable_classes, unseparated_pair, Family};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Answer {
    Yes,
    No,
}

impl Answer {
    pub fn of(query: &ElementSet, defective: usize) -> Answer {
        if query.contains(defective) {
            Answer::Yes
        } else {
            Answer::No
        }
    }
}

impl fmt::Display for Answer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Answer::Yes => "YES",
            Answer::No => "NO",
        })
    }
}

/// One answer per query, aligned with the family's order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnswerVector(pub Vec<Answer>);

pub fn answers(f: &Family, defective: usize) -> Result<AnswerVector> {
    f.check_element(defective)?;
    Ok(AnswerVector(
        f.sets().iter().map(|s| Answer::of(s, defective)).collect(),
    ))
}

/// A nonempty set of elements pooling their observations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coalition(ElementSet);

impl Coalition {
    pub fn new<I: IntoIterator<Item = usize>>(n: usize, members: I) -> Result<Self> {
        let mut set = ElementSet::empty(n);
        for x in members {
            crate::family::check_element(n, x)?;
            set.insert(x);
        }
        if set.is_empty() {
            return Err(Error::EmptyCoalition);
        }
        Ok(Coalition(set))
    }

    pub fn single(n: usize, x: usize) -> Result<Self> {
        Self::new(n, [x])
    }

    pub fn members(&self) -> &ElementSet {
        &self.0
    }
}

/// Elements a coalition cannot tell apart from the defective.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CandidateSet(pub ElementSet);

impl CandidateSet {
    pub fn contains(&self, x: usize) -> bool {
        self.0.contains(x)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.0.to_vec()
    }
}

pub fn coalition_candidates(f: &Family, defective: usize, coalition: &Coalition) -> Result<CandidateSet> {
    f.check_element(defective)?;
    if coalition.0.universe() != f.n() {
        return Err(Error::InvalidElement {
            element: coalition.0.universe(),
            n: f.n(),
        });
    }
    let mut cand = ElementSet::full(f.n());
    for s in f.sets() {
        if !s.intersects(&coalition.0) {
            continue;
        }
        if s.contains(defective) {
            cand.intersect_with(s);
        } else {
            cand.difference_with(s);
        }
    }
    Ok(CandidateSet(cand))
}

/// Candidates of the single element `x`; no validation.
pub(crate) fn element_candidates(f: &Family, defective: usize, x: usize) -> ElementSet {
    let mut cand = ElementSet::full(f.n());
    for s in f.sets() {
        if s.contains(x) {
            if s.contains(defective) {
                cand.intersect_with(s);
            } else {
                cand.difference_with(s);
            }
        }
    }
    cand
}

/// Structural knowledge of an element, independent of the answers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    /// The element's trace separates `[n]`.
    Knows,
    /// Every element shares its trace membership with another element.
    DoesNotKnow,
    /// Neither of the above: the outcome depends on the defective.
    Partial,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Knows => "knows",
            Verdict::DoesNotKnow => "does not know",
            Verdict::Partial => "partial",
        })
    }
}

pub fn verdict(f: &Family, x: usize) -> Result<Verdict> {
    f.check_element(x)?;
    let trace = f.sets().iter().filter(|s| s.contains(x));
    let classes = indistinguishable_classes(f.n(), trace);
    let singles = classes.iter().filter(|c| c.len() == 1).count();
    Ok(if singles == classes.len() {
        Verdict::Knows
    } else if singles == 0 {
        Verdict::DoesNotKnow
    } else {
        Verdict::Partial
    })
}

/// Some member contains `x` and exactly one of `y`, `z`.
pub fn distinguishes(f: &Family, x: usize, y: usize, z: usize) -> Result<bool> {
    for e in [x, y, z] {
        f.check_element(e)?;
    }
    if y == z {
        return Err(Error::InvalidModel(format!(
            "distinguishing needs two different elements, got {y} twice"
        )));
    }
    Ok(f
        .sets()
        .iter()
        .any(|s| s.contains(x) && (s.contains(y) != s.contains(z))))
}

/// Elements whose trace is inclusion-wise maximal among all traces.
pub fn maximal_trace_holders(f: &Family) -> Vec<usize> {
    let dual = f.dual();
    let m = dual.members();
    (1..=f.n())
        .filter(|&x| {
            let tx = &m[x - 1];
            !m.iter().any(|t| tx.is_subset(t) && t != tx)
        })
        .collect()
}

/// The property a query family is asked to achieve.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ModelSpec {
    /// Only the questioner must find the defective.
    Separating,
    /// Every element knows whether it is the defective.
    Model1,
    /// Every element knows the defective.
    Model2,
    /// No element knows the defective.
    Model3,
    /// No element except the defective knows the defective.
    Model3Prime,
    /// Any `j` elements together know the defective; `i` elements without
    /// the defective among them do not.
    Model4 { i: usize, j: usize },
}

impl ModelSpec {
    pub fn validate(&self, n: usize) -> Result<()> {
        if let ModelSpec::Model4 { i, j } = *self {
            if i >= j || j > n || j == 0 {
                return Err(Error::InvalidModel(format!(
                    "Model 4 needs 0 <= i < j <= n, got i={i}, j={j}, n={n}"
                )));
            }
        }
        Ok(())
    }
}

impl fmt::Display for ModelSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelSpec::Separating => f.write_str("separating"),
            ModelSpec::Model1 => f.write_str("Model 1"),
            ModelSpec::Model2 => f.write_str("Model 2"),
            ModelSpec::Model3 => f.write_str("Model 3"),
            ModelSpec::Model3Prime => f.write_str("Model 3'"),
            ModelSpec::Model4 { i, j } => write!(f, "Model 4 (i={i}, j={j})"),
        }
    }
}

impl FromStr for ModelSpec {
    type Err = Error;

    /// Accepts `sep`, `1`, `2`, `3`, `3p` and `4:i:j`.
    fn from_str(s: &str) -> Result<Self> {
        let lower = s.trim().to_ascii_lowercase();
        Ok(match lower.as_str() {
            "sep" | "separating" => ModelSpec::Separating,
            "1" => ModelSpec::Model1,
            "2" => ModelSpec::Model2,
            "3" => ModelSpec::Model3,
            "3p" | "3'" | "3prime" => ModelSpec::Model3Prime,
            other => {
                let parts: Vec<&str> = other.split(':').collect();
                match parts.as_slice() {
                    ["4", i, j] => {
                        let parse = |t: &str| {
                            t.parse::<usize>()
                                .map_err(|_| Error::InvalidModel(format!("bad Model 4 parameter {t:?}")))
                        };
                        ModelSpec::Model4 {
                            i: parse(i)?,
                            j: parse(j)?,
                        }
                    }
                    _ => return Err(Error::InvalidModel(format!("unknown model {s:?}"))),
                }
            }
        })
    }
}

/// The first scenario in which a family fails a model.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    /// Knowing every answer does not separate `x` from `y`.
    NotSeparating { x: usize, y: usize },
    /// With `defective` the defective, `element` cannot tell whether it is.
    UnsureOfSelf { element: usize, defective: usize, candidates: Vec<usize> },
    /// The coalition should identify the defective but cannot.
    CannotIdentify { defective: usize, coalition: Vec<usize>, candidates: Vec<usize> },
    /// The coalition should stay uncertain but identifies the defective.
    Identifies { defective: usize, coalition: Vec<usize> },
    /// The element's structural verdict is not "does not know".
    ElementKnows { element: usize, verdict: Verdict },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |v: &[usize]| v.iter().map(|x| x.to_string()).join(",");
        match self {
            Violation::NotSeparating { x, y } => {
                write!(f, "elements {x} and {y} are never separated, so the questioner cannot find the defective")
            }
            Violation::UnsureOfSelf { element, defective, candidates } => write!(
                f,
                "defective {defective}: element {element} cannot tell whether it is defective (candidates {{{}}})",
                list(candidates)
            ),
            Violation::CannotIdentify { defective, coalition, candidates } => write!(
                f,
                "defective {defective}: coalition {{{}}} cannot identify it (candidates {{{}}})",
                list(coalition),
                list(candidates)
            ),
            Violation::Identifies { defective, coalition } => write!(
                f,
                "defective {defective}: coalition {{{}}} identifies it",
                list(coalition)
            ),
            Violation::ElementKnows { element, verdict } => {
                write!(f, "element {element}: verdict is '{verdict}'")
            }
        }
    }
}

/// Checks `f` against `model`; `Ok(None)` means the family solves it.
pub fn check(f: &Family, model: ModelSpec) -> Result<Option<Violation>> {
    f.validate_solution()?;
    model.validate(f.n())?;
    Ok(check_unvalidated(f, model))
}

pub fn solves(f: &Family, model: ModelSpec) -> Result<bool> {
    check(f, model).map(|v| v.is_none())
}

/// `check` without the solution validator or parameter checks.
pub(crate) fn check_unvalidated(f: &Family, model: ModelSpec) -> Option<Violation> {
    if let Some((x, y)) = unseparated_pair(f) {
        return Some(Violation::NotSeparating { x, y });
    }
    let n = f.n();
    match model {
        ModelSpec::Separating => None,
        ModelSpec::Model1 => {
            for d in 1..=n {
                for x in 1..=n {
                    let cand = element_candidates(f, d, x);
                    let decided = if x == d {
                        cand.len() == 1
                    } else {
                        !cand.contains(x)
                    };
                    if !decided {
                        return Some(Violation::UnsureOfSelf {
                            element: x,
                            defective: d,
                            candidates: cand.to_vec(),
                        });
                    }
                }
            }
            None
        }
        ModelSpec::Model2 => {
            for d in 1..=n {
                for x in 1..=n {
                    let cand = element_candidates(f, d, x);
                    if cand.len() != 1 {
                        return Some(Violation::CannotIdentify {
                            defective: d,
                            coalition: vec![x],
                            candidates: cand.to_vec(),
                        });
                    }
                }
            }
            None
        }
        ModelSpec::Model3 => {
            for x in 1..=n {
                let v = verdict(f, x).expect("element in range");
                if v != Verdict::DoesNotKnow {
                    return Some(Violation::ElementKnows { element: x, verdict: v });
                }
            }
            None
        }
        ModelSpec::Model3Prime => {
            for d in 1..=n {
                for x in (1..=n).filter(|&x| x != d) {
                    if element_candidates(f, d, x).len() < 2 {
                        return Some(Violation::Identifies {
                            defective: d,
                            coalition: vec![x],
                        });
                    }
                }
            }
            None
        }
        ModelSpec::Model4 { i, j } => check_model4(f, i, j),
    }
}

fn check_model4(f: &Family, i: usize, j: usize) -> Option<Violation> {
    let n = f.n();
    for d in 1..=n {
        // a coalition sees the union of its members' queries, so its
        // candidates are the intersection of the members' candidates
        let single: Vec<ElementSet> = (1..=n).map(|x| element_candidates(f, d, x)).collect();
        let pooled = |xs: &[usize]| {
            let mut c = single[xs[0] - 1].clone();
            for &x in &xs[1..] {
                c.intersect_with(&single[x - 1]);
            }
            c
        };
        for xs in (1..=n).combinations(j) {
            let c = pooled(&xs);
            if c.len() != 1 {
                return Some(Violation::CannotIdentify {
                    defective: d,
                    coalition: xs,
                    candidates: c.to_vec(),
                });
            }
        }
        if i > 0 {
            for xs in (1..=n).filter(|&x| x != d).combinations(i) {
                if pooled(&xs).len() < 2 {
                    return Some(Violation::Identifies {
                        defective: d,
                        coalition: xs,
                    });
                }
            }
        }
    }
    None
}
