//! Fixture corpus: one language per line, `id ; alphabet ; regex ; CLASS=bool ...`.
//! Blank lines and lines starting with `#` are skipped.

use std::collections::BTreeMap;
use std::thread;

use serde::Serialize;

use crate::covering::{decide_separation, Certification};
use crate::error::{Error, Result};
use crate::lang::{compile_over, parse_regex, Alphabet, Dfa};
use crate::membership::decide_membership;
use crate::prevariety::parse_class;
use crate::syntactic::syntactic_morphism;
use crate::Config;

/// Classes evaluated on every fixture, in report order.
pub const CLASSES: &[&str] = &[
    "ST",
    "AT",
    "PTK(1)",
    "PTK(2)",
    "PT",
    "LPOL(AT)",
    "RPOL(AT)",
    "MPOL(AT)",
    "UPOL(AT)",
    "LP(2,AT)",
    "RP(2,AT)",
    "MPOL(MPOL(AT))",
    "BSIGMA2(1)",
    "BSIGMA2(2)",
];

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Fixture {
    pub id: String,
    pub alphabet: String,
    pub regex: String,
    pub expected: BTreeMap<String, bool>,
    pub line: usize,
}

impl Fixture {
    pub fn language(&self) -> Result<Dfa> {
        let a = Alphabet::parse(&self.alphabet)?;
        Ok(compile_over(&parse_regex(&self.regex)?, &a)?)
    }

    fn to_line(&self) -> String {
        let mut s = format!("{} ; {} ; {}", self.id, self.alphabet, self.regex);
        if !self.expected.is_empty() {
            s.push_str(" ;");
            for c in CLASSES {
                if let Some(v) = self.expected.get(*c) {
                    s.push_str(&format!(" {c}={v}"));
                }
            }
            for (c, v) in &self.expected {
                if !CLASSES.contains(&c.as_str()) {
                    s.push_str(&format!(" {c}={v}"));
                }
            }
        }
        s
    }
}

fn bad(line: usize, msg: impl Into<String>) -> Error {
    Error::Invalid(format!("corpus line {line}: {}", msg.into()))
}

pub fn parse_corpus(text: &str) -> Result<Vec<Fixture>> {
    let mut out: Vec<Fixture> = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = n + 1;
        let t = raw.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = t.split(';').map(str::trim).collect();
        if fields.len() < 3 || fields.len() > 4 {
            return Err(bad(line, "expected `id ; alphabet ; regex [; expected]`"));
        }
        let mut expected = BTreeMap::new();
        if let Some(exp) = fields.get(3) {
            for tok in exp.split_whitespace() {
                let (c, v) = tok
                    .split_once('=')
                    .ok_or_else(|| bad(line, format!("bad expectation `{tok}`")))?;
                parse_class(c).map_err(|e| bad(line, e.to_string()))?;
                let v = match v {
                    "true" => true,
                    "false" => false,
                    _ => return Err(bad(line, format!("bad truth value `{v}`"))),
                };
                expected.insert(c.to_string(), v);
            }
        }
        if out.iter().any(|f| f.id == fields[0]) {
            return Err(bad(line, format!("duplicate id {}", fields[0])));
        }
        let f = Fixture {
            id: fields[0].to_string(),
            alphabet: fields[1].to_string(),
            regex: fields[2].to_string(),
            expected,
            line,
        };
        f.language().map_err(|e| bad(line, e.to_string()))?;
        out.push(f);
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FixtureResult {
    pub id: String,
    pub verdicts: BTreeMap<String, bool>,
    pub failures: Vec<String>,
}

impl FixtureResult {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CorpusSummary {
    pub fixtures: usize,
    pub passed: usize,
    pub results: Vec<FixtureResult>,
}

impl CorpusSummary {
    pub fn ok(&self) -> bool {
        self.passed == self.fixtures
    }

    pub fn failing_ids(&self) -> Vec<&str> {
        self.results
            .iter()
            .filter(|r| !r.passed())
            .map(|r| r.id.as_str())
            .collect()
    }
}

/// Membership for the listed classes plus the cross-engine checks.
pub fn run_fixture(f: &Fixture, cfg: &Config) -> FixtureResult {
    let mut failures = Vec::new();
    let mut verdicts = BTreeMap::new();
    match check_fixture(f, cfg, &mut verdicts, &mut failures) {
        Ok(()) => {}
        Err(e) => failures.push(format!("error: {e}")),
    }
    FixtureResult {
        id: f.id.clone(),
        verdicts,
        failures,
    }
}

fn check_fixture(
    f: &Fixture,
    cfg: &Config,
    verdicts: &mut BTreeMap<String, bool>,
    failures: &mut Vec<String>,
) -> Result<()> {
    let l = f.language()?;
    let mut names: Vec<&str> = CLASSES.to_vec();
    for c in f.expected.keys() {
        if !names.contains(&c.as_str()) {
            names.push(c);
        }
    }
    for c in &names {
        let e = parse_class(c)?;
        let v = decide_membership(&e, &l, cfg)?;
        verdicts.insert(c.to_string(), v);
        if let Some(&want) = f.expected.get(*c) {
            if want != v {
                failures.push(format!("{c}: expected {want}, computed {v}"));
            }
        }
    }
    let v = |c: &str| verdicts[c];

    // separation from the complement on exact towers
    let complement = l.complement();
    for c in &names {
        let e = parse_class(c)?;
        if e.expand()?.contains_pt() {
            continue;
        }
        match decide_separation(&e, &l, &complement, cfg) {
            Ok(rep) => {
                if rep.certification == Certification::Exact && rep.coverable() != Some(verdicts[*c]) {
                    failures.push(format!("{c}: separation from the complement disagrees with membership"));
                }
            }
            Err(Error::Unsupported(_)) => {}
            Err(e) => return Err(e),
        }
    }

    let j_trivial = syntactic_morphism(&l).morphism.target().green().is_j_trivial();
    if v("BSIGMA2(1)") != j_trivial || v("PT") != j_trivial {
        failures.push("BSIGMA2(1)/PT disagree with J-triviality".into());
    }
    let implications = [
        ("ST", "AT"),
        ("AT", "PTK(1)"),
        ("PTK(1)", "AT"),
        ("PTK(1)", "PTK(2)"),
        ("PTK(2)", "PT"),
        ("AT", "LPOL(AT)"),
        ("AT", "RPOL(AT)"),
        ("LPOL(AT)", "MPOL(AT)"),
        ("RPOL(AT)", "MPOL(AT)"),
        ("MPOL(AT)", "UPOL(AT)"),
        ("LPOL(AT)", "LP(2,AT)"),
        ("RPOL(AT)", "LP(2,AT)"),
        ("LP(2,AT)", "MPOL(MPOL(AT))"),
        ("PT", "BSIGMA2(2)"),
        ("MPOL(AT)", "BSIGMA2(2)"),
    ];
    for (a, b) in implications {
        if v(a) && !v(b) {
            failures.push(format!("{a} holds but {b} does not"));
        }
    }
    let lp2 = decide_membership(&parse_class("MPOL(RP(1,AT))")?, &l, cfg)?;
    if lp2 != v("LP(2,AT)") {
        failures.push("LP(2,AT) differs from MPOL(RPOL(AT))".into());
    }
    let mp = decide_membership(&parse_class("MPOL(PT)")?, &l, cfg)?;
    if mp != v("BSIGMA2(2)") {
        failures.push("BSIGMA2(2) differs from MPOL(PT)".into());
    }
    Ok(())
}

/// Runs every fixture, spreading them over the available cores.
pub fn run_corpus(fixtures: &[Fixture], cfg: &Config) -> CorpusSummary {
    let workers = thread::available_parallelism().map_or(1, |n| n.get()).min(fixtures.len().max(1));
    let mut slots: Vec<Option<FixtureResult>> = vec![None; fixtures.len()];
    thread::scope(|s| {
        let chunk = fixtures.len().div_ceil(workers).max(1);
        for (fs, out) in fixtures.chunks(chunk).zip(slots.chunks_mut(chunk)) {
            s.spawn(move || {
                for (f, o) in fs.iter().zip(out.iter_mut()) {
                    *o = Some(run_fixture(f, cfg));
                }
            });
        }
    });
    let results: Vec<FixtureResult> = slots.into_iter().map(|r| r.expect("every slot filled")).collect();
    CorpusSummary {
        fixtures: fixtures.len(),
        passed: results.iter().filter(|r| r.passed()).count(),
        results,
    }
}

/// Rewrites the corpus with computed verdicts for classes that have no
/// expectation yet. Fixtures failing their checks are left untouched.
pub fn fill_expected(text: &str, cfg: &Config) -> Result<String> {
    let fixtures = parse_corpus(text)?;
    let summary = run_corpus(&fixtures, cfg);
    let mut by_line: BTreeMap<usize, String> = BTreeMap::new();
    for (f, r) in fixtures.iter().zip(&summary.results) {
        if !r.passed() {
            continue;
        }
        let mut g = f.clone();
        for c in CLASSES {
            g.expected.entry(c.to_string()).or_insert(r.verdicts[*c]);
        }
        by_line.insert(f.line, g.to_line());
    }
    let mut out = String::new();
    for (n, raw) in text.lines().enumerate() {
        out.push_str(by_line.get(&(n + 1)).map_or(raw, String::as_str));
        out.push('\n');
    }
    Ok(out)
}
