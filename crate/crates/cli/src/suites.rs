//! Named verification suites and their report rows.
//!
//! The `paper` suite is a data asset (`suites/paper.csv`) so the claimed
//! verdict matrix can be reviewed and diffed without reading code. Each row
//! is self-certifying: a manipulable verdict must ship a witness that
//! re-verifies independently, and a strategy-proof verdict must report a
//! state count equal to the closed-form size of the search space.

use sccheck::extension::{check_kelly_properties, ExtensionRule};
use sccheck::info::InfoProfileSpec;
use sccheck::manip::{
    decide_manipulability, exhaustion_states, verify_witness, SearchConfig,
};
use sccheck::scc::SccRule;
use sccheck::{axioms, Error, Result};

/// The reviewable verdict matrix.
pub const PAPER_SUITE_CSV: &str = include_str!("../suites/paper.csv");

/// One row of a suite report, in the fixed CSV column order. The claim
/// label names which regime of the verdict matrix the row instantiates;
/// it appears in text output only, never in the CSV columns.
#[derive(Debug, Clone)]
pub struct ReportRow {
    pub rule: String,
    pub ext: String,
    pub info: String,
    pub n: String,
    pub m: String,
    pub expected: String,
    pub observed: String,
    pub states: u64,
    pub millis: u64,
    pub claim: String,
    pub witness_json: Option<String>,
}

impl ReportRow {
    pub fn matches(&self) -> bool {
        self.expected == self.observed
    }
}

/// A parsed line of the paper-suite asset.
#[derive(Debug, Clone)]
pub struct SuiteCase {
    pub rule: String,
    pub ext: String,
    pub info: String,
    pub n: usize,
    pub m: usize,
    pub expected: String,
    pub claim: String,
}

pub fn load_paper_suite() -> Result<Vec<SuiteCase>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(PAPER_SUITE_CSV.as_bytes());
    let mut cases = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| Error::Config(format!("bad suite asset: {e}")))?;
        let field = |k: usize| record.get(k).unwrap_or("").to_string();
        cases.push(SuiteCase {
            rule: field(0),
            ext: field(1),
            info: field(2),
            n: field(3)
                .parse()
                .map_err(|_| Error::Config("bad n in suite asset".into()))?,
            m: field(4)
                .parse()
                .map_err(|_| Error::Config("bad m in suite asset".into()))?,
            expected: field(5),
            claim: field(6),
        });
    }
    Ok(cases)
}

fn parse_info(info: &str, rule: &SccRule) -> Result<Option<InfoProfileSpec>> {
    Ok(match info {
        "none" | "" => None,
        "complete" => Some(InfoProfileSpec::Complete),
        "zero" => Some(InfoProfileSpec::Zero),
        "winner" => Some(InfoProfileSpec::Winner(rule.clone())),
        other => return Err(Error::Input(format!("unknown info kind {other:?}"))),
    })
}

/// Refuses the whole suite if any row would exceed the state bound; a
/// partial run would silently weaken the verdict matrix.
pub fn check_suite_bound(cases: &[SuiteCase], max_states: u64) -> Result<()> {
    for case in cases {
        let required = (sccheck::prefs::factorial(case.n) as u128).pow(case.m as u32);
        if required > max_states as u128 {
            return Err(Error::BoundExceeded {
                required,
                limit: max_states,
            });
        }
    }
    Ok(())
}

/// Runs one verdict row and certifies it.
pub fn run_paper_case(case: &SuiteCase, config: &SearchConfig) -> Result<ReportRow> {
    let rule: SccRule = case.rule.parse()?;
    let ext: ExtensionRule = case.ext.parse()?;
    let info = parse_info(&case.info, &rule)?;
    let verdict = decide_manipulability(&rule, ext, info.as_ref(), case.n, case.m, config)?;
    let observed = if verdict.holds {
        let witness = verdict.witness.as_ref().expect("positive verdicts carry a witness");
        if verify_witness(&rule, ext, info.as_ref(), witness, config.max_states)? {
            "manipulable"
        } else {
            "manipulable-unverified"
        }
    } else if verdict.stats.states == exhaustion_states(case.n, case.m) {
        "strategy-proof"
    } else {
        "strategy-proof-short-count"
    };
    let witness_json = verdict
        .witness
        .as_ref()
        .map(|w| serde_json::to_string(w).expect("witness serialises"));
    Ok(ReportRow {
        rule: case.rule.clone(),
        ext: case.ext.clone(),
        info: case.info.clone(),
        n: case.n.to_string(),
        m: case.m.to_string(),
        expected: case.expected.clone(),
        observed: observed.to_string(),
        states: verdict.stats.states,
        millis: verdict.stats.millis,
        claim: case.claim.clone(),
        witness_json,
    })
}

/// The exhaustive structural suite for the Kelly relation at n in 2..=4.
pub fn run_kelly_properties() -> Result<Vec<ReportRow>> {
    let mut rows = Vec::new();
    for n in 2..=4usize {
        let start = std::time::Instant::now();
        for check in check_kelly_properties(n)? {
            rows.push(ReportRow {
                rule: check.name.to_string(),
                ext: "kelly".into(),
                info: String::new(),
                n: n.to_string(),
                m: String::new(),
                expected: "clean".into(),
                observed: if check.violations == 0 {
                    "clean".into()
                } else {
                    format!("{} violations", check.violations)
                },
                states: check.cases,
                millis: start.elapsed().as_millis() as u64,
                claim: String::new(),
                witness_json: None,
            });
        }
    }
    Ok(rows)
}

/// Structural-axiom expectations: weak set-monotonicity for the positional
/// zoo and Copeland, the known set-monotonicity failures, and the upward
/// sensitivity landscape.
pub fn run_axiom_suite(config: &SearchConfig) -> Result<Vec<ReportRow>> {
    let mut expectations: Vec<(&str, &str, usize, usize, bool)> = Vec::new();
    for rule in [
        "borda",
        "plurality",
        "negative-plurality",
        "positional:3,1,0",
        "copeland",
    ] {
        for m in 2..=4 {
            expectations.push(("wsm", rule, 3, m, true));
        }
    }
    expectations.extend([
        ("sm", "copeland", 3, 4, false),
        ("sm", "negative-plurality", 4, 2, false),
        ("sm", "borda", 3, 4, false),
        ("us", "borda", 3, 3, true),
        ("us", "borda", 3, 4, true),
        ("us", "positional:3,1,0", 3, 4, true),
        ("us", "copeland", 4, 2, true),
        ("us", "copeland", 3, 4, true),
        ("us", "copeland", 5, 3, true),
        ("us", "negative-plurality", 3, 4, false),
    ]);

    let mut rows = Vec::new();
    for (axiom_name, rule_text, n, m, expected) in expectations {
        let rule: SccRule = rule_text.parse()?;
        let axiom: axioms::Axiom = axiom_name.parse()?;
        let start = std::time::Instant::now();
        let report = match axiom {
            axioms::Axiom::Wsm => axioms::check_wsm(&rule, n, m, config)?,
            axioms::Axiom::Sm => axioms::check_sm(&rule, n, m, config)?,
            axioms::Axiom::Us => axioms::check_us(&rule, n, m, config)?,
            axioms::Axiom::Unanimity => axioms::check_unanimity(&rule, n, m, config)?,
        };
        let verified = match &report.evidence {
            Some(evidence) => axioms::verify_evidence(&rule, axiom, evidence)?,
            None => true,
        };
        let observed = if !verified {
            "unverified-evidence".to_string()
        } else if report.holds {
            "holds".to_string()
        } else {
            "fails".to_string()
        };
        rows.push(ReportRow {
            rule: rule_text.to_string(),
            ext: String::new(),
            info: format!("axiom:{axiom_name}"),
            n: n.to_string(),
            m: m.to_string(),
            expected: if expected { "holds" } else { "fails" }.to_string(),
            observed,
            states: 0,
            millis: start.elapsed().as_millis() as u64,
            claim: String::new(),
            witness_json: None,
        });
    }
    Ok(rows)
}
