//! Adaptive questioning: the Questioner picks each query after seeing the
//! previous answers, and at the end every element learns the queries that
//! contained it together with their answers.

use std::fmt;
use std::str::FromStr;

use itertools::Itertools;
use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::bitset::ElementSet;
use crate::error::{Error, Result};
use crate::family::Family;
use crate::knowledge::{Answer, CandidateSet, Coalition};

/// Queries allowed per element before a strategy counts as non-terminating.
pub const QUERY_CAP_PER_ELEMENT: usize = 4;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transcript {
    n: usize,
    steps: Vec<(ElementSet, Answer)>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct StepFile {
    set: Vec<usize>,
    answer: Answer,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TranscriptFile {
    n: usize,
    steps: Vec<StepFile>,
}

impl Transcript {
    pub fn new(n: usize) -> Self {
        Transcript { n, steps: Vec::new() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn steps(&self) -> &[(ElementSet, Answer)] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Elements whose membership matches every answer so far.
    pub fn consistent(&self) -> ElementSet {
        let mut c = ElementSet::full(self.n);
        for (q, a) in &self.steps {
            match a {
                Answer::Yes => c.intersect_with(q),
                Answer::No => c.difference_with(q),
            }
        }
        c
    }

    /// The asked queries as a family, in order.
    pub fn family(&self) -> Family {
        Family::new(self.n, self.steps.iter().map(|(q, _)| q.clone()).collect()).expect("n >= 1")
    }

    /// The (query, answer) pairs whose query meets `members`, sorted so
    /// that the order of asking is not part of the observation.
    pub fn observed_by(&self, members: &ElementSet) -> Vec<(ElementSet, Answer)> {
        let mut seen: Vec<_> = self
            .steps
            .iter()
            .filter(|(q, _)| q.intersects(members))
            .cloned()
            .collect();
        seen.sort();
        seen
    }

    pub fn to_json(&self) -> String {
        let file = TranscriptFile {
            n: self.n,
            steps: self
                .steps
                .iter()
                .map(|(q, a)| StepFile {
                    set: q.to_vec(),
                    answer: *a,
                })
                .collect(),
        };
        serde_json::to_string(&file).expect("plain data")
    }

    pub fn from_json(text: &str) -> Result<Transcript> {
        let file: TranscriptFile = serde_json::from_str(text).map_err(|e| Error::Parse {
            location: format!("line {}, column {}", e.line(), e.column()),
            message: e.to_string(),
        })?;
        if file.n == 0 {
            return Err(Error::EmptyGround);
        }
        let mut t = Transcript::new(file.n);
        for step in file.steps {
            if let Some(&x) = step.set.iter().find(|&&x| x == 0 || x > file.n) {
                return Err(Error::InvalidElement { element: x, n: file.n });
            }
            t.steps.push((ElementSet::from_elements(file.n, step.set), step.answer));
        }
        Ok(t)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Step {
    Ask(ElementSet),
    Stop,
}

/// A deterministic Questioner.
pub trait Strategy: Sync {
    fn next(&self, n: usize, transcript: &Transcript) -> Result<Step>;
}

/// Who answers the queries.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Answerer {
    FixedDefective(usize),
    /// YES whenever some consistent element lies in the query.
    YesUnlessContradiction,
    /// NO whenever some consistent element lies outside the query.
    NoUnlessContradiction,
}

impl Answerer {
    fn answer(&self, query: &ElementSet, consistent: &ElementSet) -> Answer {
        match *self {
            Answerer::FixedDefective(d) => Answer::of(query, d),
            Answerer::YesUnlessContradiction => {
                if query.intersects(consistent) {
                    Answer::Yes
                } else {
                    Answer::No
                }
            }
            Answerer::NoUnlessContradiction => {
                if consistent.is_subset(query) {
                    Answer::Yes
                } else {
                    Answer::No
                }
            }
        }
    }
}

/// Plays `strategy` against `answerer` until it stops. The Questioner must
/// end knowing the defective; adversarial runs commit to the only element
/// left.
pub fn run(strategy: &dyn Strategy, answerer: Answerer, n: usize) -> Result<Transcript> {
    if n == 0 {
        return Err(Error::EmptyGround);
    }
    if let Answerer::FixedDefective(d) = answerer {
        crate::family::check_element(n, d)?;
    }
    let limit = QUERY_CAP_PER_ELEMENT * n;
    let mut t = Transcript::new(n);
    let mut consistent = ElementSet::full(n);
    loop {
        match strategy.next(n, &t)? {
            Step::Stop => break,
            Step::Ask(q) => {
                if t.len() == limit {
                    return Err(Error::NonTermination { limit });
                }
                if q.universe() != n {
                    return Err(Error::InvalidStrategy(format!(
                        "query over a ground set of {} elements, expected {n}",
                        q.universe()
                    )));
                }
                if q.is_empty() {
                    return Err(Error::InvalidStrategy("empty query".into()));
                }
                let a = answerer.answer(&q, &consistent);
                match a {
                    Answer::Yes => consistent.intersect_with(&q),
                    Answer::No => consistent.difference_with(&q),
                }
                t.steps.push((q, a));
            }
        }
    }
    if consistent.len() != 1 {
        return Err(Error::InvalidStrategy(format!(
            "stopped with {} consistent elements {consistent}",
            consistent.len()
        )));
    }
    Ok(t)
}

/// How elements turn their observations into candidate sets.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Semantics {
    /// Elements consistent with the observed answers to the queries that
    /// were actually asked.
    #[default]
    Realized,
    /// Elements whose own honest run would have shown the coalition the
    /// same (query, answer) pairs.
    Resimulated,
}

impl FromStr for Semantics {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "realized" => Ok(Semantics::Realized),
            "resimulated" => Ok(Semantics::Resimulated),
            _ => Err(Error::InvalidStrategy(format!("unknown semantics {s:?}"))),
        }
    }
}

/// Candidate table for one strategy: `table[d][x]` is what element `x`
/// can still suspect after the honest run with defective `d`.
pub struct Knowledge {
    n: usize,
    table: Vec<Vec<ElementSet>>,
}

impl Knowledge {
    pub fn compute(strategy: &dyn Strategy, n: usize, semantics: Semantics) -> Result<Knowledge> {
        let runs: Vec<Transcript> = (1..=n)
            .map(|d| run(strategy, Answerer::FixedDefective(d), n))
            .collect::<Result<_>>()?;
        let mut table = vec![vec![ElementSet::empty(n)]; n + 1];
        for d in 1..=n {
            let mut row = vec![ElementSet::empty(n)];
            for x in 1..=n {
                row.push(match semantics {
                    Semantics::Realized => realized_candidates(&runs[d - 1], x),
                    Semantics::Resimulated => {
                        let me = ElementSet::singleton(n, x);
                        let seen = runs[d - 1].observed_by(&me);
                        ElementSet::from_elements(n, (1..=n).filter(|&y| runs[y - 1].observed_by(&me) == seen))
                    }
                });
            }
            table[d] = row;
        }
        Ok(Knowledge { n, table })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn element(&self, d: usize, x: usize) -> &ElementSet {
        &self.table[d][x]
    }

    /// A coalition's candidates are what all its members still suspect.
    pub fn coalition(&self, d: usize, members: &ElementSet) -> ElementSet {
        let mut c = ElementSet::full(self.n);
        for x in members {
            c.intersect_with(&self.table[d][x]);
        }
        c
    }

    /// Every `j`-coalition names the defective and every `i`-coalition
    /// without it keeps at least two suspects.
    pub fn satisfies_model4(&self, i: usize, j: usize) -> bool {
        let n = self.n;
        (1..=n).all(|d| {
            let knows = (1..=n).combinations(j).all(|c| {
                let c = self.coalition(d, &ElementSet::from_elements(n, c));
                c.len() == 1 && c.contains(d)
            });
            knows
                && (1..=n).filter(|&x| x != d).combinations(i).all(|c| {
                    self.coalition(d, &ElementSet::from_elements(n, c)).len() >= 2
                })
        })
    }

    /// Every element other than the defective keeps at least two suspects.
    pub fn satisfies_model3prime(&self) -> bool {
        let n = self.n;
        (1..=n).all(|d| (1..=n).filter(|&x| x != d).all(|x| self.table[d][x].len() >= 2))
    }

    /// Every element ends up knowing the defective.
    pub fn all_know(&self) -> bool {
        let n = self.n;
        (1..=n).all(|d| (1..=n).all(|x| self.table[d][x].len() == 1))
    }
}

fn realized_candidates(t: &Transcript, x: usize) -> ElementSet {
    let mut c = ElementSet::full(t.n);
    for (q, a) in &t.steps {
        if q.contains(x) {
            match a {
                Answer::Yes => c.intersect_with(q),
                Answer::No => c.difference_with(q),
            }
        }
    }
    c
}

/// What `coalition` can still suspect after the honest run with defective
/// `d`.
pub fn posthoc_candidates(
    strategy: &dyn Strategy,
    n: usize,
    d: usize,
    coalition: &Coalition,
    semantics: Semantics,
) -> Result<CandidateSet> {
    let members = coalition.members();
    if members.universe() != n {
        return Err(Error::InvalidElement {
            element: members.universe(),
            n,
        });
    }
    let mine = run(strategy, Answerer::FixedDefective(d), n)?;
    let cand = match semantics {
        Semantics::Realized => {
            let mut c = ElementSet::full(n);
            for x in members {
                c.intersect_with(&realized_candidates(&mine, x));
            }
            c
        }
        Semantics::Resimulated => {
            let seen = mine.observed_by(members);
            let mut c = ElementSet::empty(n);
            for y in 1..=n {
                if y == d || run(strategy, Answerer::FixedDefective(y), n)?.observed_by(members) == seen {
                    c.insert(y);
                }
            }
            c
        }
    };
    Ok(CandidateSet(cand))
}

/// Whether the strategy solves Model 4 with parameters `i < j` for every
/// defective.
pub fn check_adaptive_model4(strategy: &dyn Strategy, n: usize, i: usize, j: usize, semantics: Semantics) -> Result<bool> {
    if i == 0 || i >= j || j > n {
        return Err(Error::InvalidModel(format!("need 1 <= i < j <= n, got i={i}, j={j}, n={n}")));
    }
    Ok(Knowledge::compute(strategy, n, semantics)?.satisfies_model4(i, j))
}

/// `(n − 1)·C(j − 1, i) ≥ C(n − 1, i)`, a necessary condition for an
/// adaptive Model 4 solution.
pub fn counting_bound(n: usize, i: usize, j: usize) -> bool {
    fn binom(n: usize, k: usize) -> BigUint {
        if k > n {
            return BigUint::from(0u32);
        }
        let mut acc = BigUint::from(1u32);
        for t in 0..k {
            acc = acc * BigUint::from(n - t) / BigUint::from(t + 1);
        }
        acc
    }
    if n == 0 || j == 0 {
        return false;
    }
    BigUint::from(n - 1) * binom(j - 1, i) >= binom(n - 1, i)
}

/// The strategies from the adaptive constructions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Builtin {
    /// Binary splitting by code bits, then `[n] ∖ {d}` and `{d}`.
    SepThenReveal,
    /// Halving while at least six elements remain, then all but one of
    /// the remaining singletons.
    HalvingModel3Prime,
    /// Every singleton, then the others in pairs, each pair with `d`.
    SingletonsPairs,
    /// As `SingletonsPairs` but the first three others form a triple.
    SingletonsTriple,
    /// Every singleton, then the others in `i + 1` balanced parts, each
    /// part with `d`.
    PartitionBalanced(usize),
}

impl Builtin {
    /// Rejects ground sets the strategy is not defined for.
    pub fn validate(&self, n: usize) -> Result<()> {
        let bad = |why: &str| Err(Error::InvalidStrategy(format!("{self} {why}, got n = {n}")));
        if n == 0 {
            return Err(Error::EmptyGround);
        }
        match *self {
            Builtin::SingletonsPairs if n.is_multiple_of(2) => bad("needs odd n"),
            Builtin::SingletonsTriple if n % 2 == 1 || n < 4 => bad("needs even n >= 4"),
            Builtin::PartitionBalanced(i) if i == 0 || i + 1 > n.saturating_sub(1) => {
                bad("needs 1 <= i and i + 1 <= n - 1")
            }
            _ => Ok(()),
        }
    }

    fn after_singletons(&self, n: usize, t: &Transcript, parts: impl Fn(&[usize]) -> Vec<Vec<usize>>) -> Step {
        if t.len() < n {
            return Step::Ask(ElementSet::singleton(n, t.len() + 1));
        }
        let d = t.consistent().first().expect("singletons identify the defective");
        let rest: Vec<usize> = (1..=n).filter(|&x| x != d).collect();
        let parts = parts(&rest);
        match parts.get(t.len() - n) {
            Some(p) => Step::Ask(ElementSet::from_elements(n, p.iter().copied().chain([d]))),
            None => Step::Stop,
        }
    }
}

impl Strategy for Builtin {
    fn next(&self, n: usize, t: &Transcript) -> Result<Step> {
        self.validate(n)?;
        Ok(match *self {
            Builtin::SepThenReveal => {
                let bits = crate::constructions::binary_separating(n);
                if t.len() < bits.len() {
                    return Ok(Step::Ask(bits.sets()[t.len()].clone()));
                }
                let d = t.consistent().first().expect("honest or adversarial runs stay consistent");
                let others = ElementSet::singleton(n, d).complement();
                let reveal: Vec<ElementSet> = [others, ElementSet::singleton(n, d)]
                    .into_iter()
                    .filter(|q| !q.is_empty())
                    .collect();
                match reveal.into_iter().nth(t.len() - bits.len()) {
                    Some(q) => Step::Ask(q),
                    None => Step::Stop,
                }
            }
            Builtin::HalvingModel3Prime => {
                let c = t.consistent();
                let halving = t
                    .steps()
                    .iter()
                    .take_while(|(q, _)| q.len() != 1)
                    .count();
                if t.len() == halving && c.len() >= 6 {
                    let half = c.len().div_ceil(2);
                    return Ok(Step::Ask(ElementSet::from_elements(n, c.iter().take(half))));
                }
                // the singletons phase works on the set left after halving
                let mut left = ElementSet::full(n);
                for (q, a) in &t.steps()[..halving] {
                    match a {
                        Answer::Yes => left.intersect_with(q),
                        Answer::No => left.difference_with(q),
                    }
                }
                match left.iter().nth(t.len() - halving) {
                    Some(x) if t.len() - halving + 1 < left.len() => Step::Ask(ElementSet::singleton(n, x)),
                    _ => Step::Stop,
                }
            }
            Builtin::SingletonsPairs => self.after_singletons(n, t, |rest| rest.chunks(2).map(<[usize]>::to_vec).collect()),
            Builtin::SingletonsTriple => self.after_singletons(n, t, |rest| {
                let mut parts = vec![rest[..3].to_vec()];
                parts.extend(rest[3..].chunks(2).map(<[usize]>::to_vec));
                parts
            }),
            Builtin::PartitionBalanced(i) => self.after_singletons(n, t, |rest| {
                let k = i + 1;
                let (q, r) = (rest.len() / k, rest.len() % k);
                let mut parts = Vec::with_capacity(k);
                let mut at = 0;
                for p in 0..k {
                    let len = q + usize::from(p < r);
                    parts.push(rest[at..at + len].to_vec());
                    at += len;
                }
                parts
            }),
        })
    }
}

impl fmt::Display for Builtin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Builtin::SepThenReveal => f.write_str("sep-then-reveal"),
            Builtin::HalvingModel3Prime => f.write_str("halving"),
            Builtin::SingletonsPairs => f.write_str("singletons-pairs"),
            Builtin::SingletonsTriple => f.write_str("singletons-triple"),
            Builtin::PartitionBalanced(i) => write!(f, "partition-balanced:{i}"),
        }
    }
}

impl FromStr for Builtin {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "sep-then-reveal" => Builtin::SepThenReveal,
            "halving" => Builtin::HalvingModel3Prime,
            "singletons-pairs" => Builtin::SingletonsPairs,
            "singletons-triple" => Builtin::SingletonsTriple,
            _ => match s.strip_prefix("partition-balanced:").map(str::parse) {
                Some(Ok(i)) => Builtin::PartitionBalanced(i),
                _ => {
                    return Err(Error::InvalidStrategy(format!(
                        "unknown strategy {s:?}; expected sep-then-reveal, halving, singletons-pairs, \
                         singletons-triple or partition-balanced:I"
                    )))
                }
            },
        })
    }
}
